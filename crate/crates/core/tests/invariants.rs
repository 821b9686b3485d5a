//! Property tests for structure-level invariants.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use paragray::curvature::{is_algebraic_curvature, parse_tensor_file, write_tensor_file, Tensor2, Tensor4};
use paragray::exactnum::{Matrix, Rational};
use paragray::gray::{p_operator, s2_basis, s2_full_basis, satisfies_gray};
use paragray::model::{standard_para_hermitian, Structure};
use paragray::tvdecomp::{decompose_two_tensor, module_table, ModuleTable};
use proptest::prelude::*;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn s4() -> &'static Structure {
    static S: OnceLock<Structure> = OnceLock::new();
    S.get_or_init(|| standard_para_hermitian(2).unwrap())
}

fn table4() -> &'static ModuleTable {
    static T: OnceLock<ModuleTable> = OnceLock::new();
    T.get_or_init(|| module_table(s4()).unwrap())
}

/// Boosts in the (x_i, y_i) planes and equal rotations on the x and y
/// blocks. Both commute with J and preserve the form.
fn para_unitary(n: usize, boosts: &[bool], rotate: bool) -> Matrix<Rational> {
    let d = 2 * n;
    let mut m = Matrix::identity(d);
    for (i, &b) in boosts.iter().enumerate().take(n) {
        if b {
            let mut u = Matrix::identity(d);
            u.set(i, i, r(5, 4));
            u.set(n + i, n + i, r(5, 4));
            u.set(i, n + i, r(3, 4));
            u.set(n + i, i, r(3, 4));
            m = m.mul(&u).unwrap();
        }
    }
    if rotate && n >= 2 {
        let mut u = Matrix::identity(d);
        for off in [0, n] {
            u.set(off, off, r(3, 5));
            u.set(off, off + 1, r(-4, 5));
            u.set(off + 1, off, r(4, 5));
            u.set(off + 1, off + 1, r(3, 5));
        }
        m = m.mul(&u).unwrap();
    }
    m
}

fn theta_from(coeffs: &[i64], s: &Structure) -> Tensor4 {
    let left = s2_basis(s, -1);
    let right = s2_full_basis(s.dim());
    let mut t = Tensor4::zeros(s.dim());
    let mut k = 0;
    for a in &left {
        for b in &right {
            let c = coeffs[k % coeffs.len()];
            k += 1;
            if c != 0 {
                t = t.add(&Tensor4::outer(a, b).scale(&Rational::from(c)));
            }
        }
    }
    t
}

fn big(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_matches_big_rational(
        a in any::<i64>(), b in 1..i64::MAX, c in any::<i64>(), d in 1..i64::MAX,
    ) {
        let (x, y) = (r(a, b), r(c, d));
        let (bx, by) = (big(a, b), big(c, d));
        prop_assert_eq!(&x + &y, Rational::from(&bx + &by));
        prop_assert_eq!(&x - &y, Rational::from(&bx - &by));
        prop_assert_eq!(&x * &y, Rational::from(&bx * &by));
        if c != 0 {
            prop_assert_eq!(&x / &y, Rational::from(&bx / &by));
        }
        prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
        prop_assert_eq!(x.to_pq_string().parse::<Rational>().unwrap(), x);
    }

    #[test]
    fn p_lands_in_gray_kernel_equivariantly(
        coeffs in prop::collection::vec(-3i64..=3, 1..12),
        boosts in prop::collection::vec(any::<bool>(), 2),
        rotate in any::<bool>(),
    ) {
        let s = s4();
        let theta = theta_from(&coeffs, s);
        let a = p_operator(&theta);
        prop_assert!(is_algebraic_curvature(&a));
        prop_assert!(satisfies_gray(&a, s));
        let u = para_unitary(2, &boosts, rotate);
        prop_assert_eq!(s.form_tensor().pullback(&u), s.form_tensor());
        prop_assert_eq!(u.mul(s.j()).unwrap(), s.j().mul(&u).unwrap());
        let moved = a.pullback(&u);
        prop_assert!(satisfies_gray(&moved, s));
        prop_assert_eq!(p_operator(&theta.pullback(&u)), moved);
    }

    #[test]
    fn two_tensor_parts_are_projections(entries in prop::collection::vec(-6i64..=6, 16)) {
        let s = s4();
        let t = Tensor2::from_fn(4, |a, b| Rational::from(entries[4 * a + b]));
        let dec = decompose_two_tensor(&t, s);
        prop_assert_eq!(dec.sum(), t);
        for (name, part) in dec.named() {
            let again = decompose_two_tensor(part, s);
            let same = again.named().into_iter().find(|(n, _)| *n == name).unwrap().1.clone();
            prop_assert_eq!(&same, part, "{} not idempotent", name);
        }
    }

    #[test]
    fn module_components_reassemble_and_commute_with_unitaries(
        coords in prop::collection::vec(-4i64..=4, 20),
        boosts in prop::collection::vec(any::<bool>(), 2),
    ) {
        let table = table4();
        let cs = table.space();
        let coords: Vec<Rational> = coords.into_iter().map(Rational::from).collect();
        let a = cs.lift(&coords);
        let comps = table.components(&a).unwrap();
        let sum = comps.iter().fold(Tensor4::zeros(4), |acc, (_, c)| acc.add(c));
        prop_assert_eq!(sum, a.clone());
        let u = para_unitary(2, &boosts, false);
        for (label, c) in &comps {
            let moved = table.component_in(&a.pullback(&u), label).unwrap();
            prop_assert_eq!(&moved, &c.pullback(&u), "{} not invariant", label);
        }
    }

    #[test]
    fn tensor_file_round_trip(coords in prop::collection::vec((-20i64..=20, 1i64..=7), 20)) {
        let cs = table4().space();
        let coords: Vec<Rational> = coords.into_iter().map(|(p, q)| r(p, q)).collect();
        let a = cs.lift(&coords);
        prop_assert_eq!(parse_tensor_file(&write_tensor_file(&a), 4).unwrap(), a);
    }
}
