//! Hermitian and para-Hermitian structures `(V, <.,.>, J)`.
//!
//! Matrices act on column vectors: `J e_j = sum_i J[i][j] e_i`, so the pullback
//! of the form is `J^T · form · J`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curvature::Tensor2;
use crate::error::{Error, Result};
use crate::exactnum::{Matrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// `J² = -Id`, `J^*<.,.> = <.,.>`.
    Hermitian,
    /// `J² = +Id`, `J^*<.,.> = -<.,.>`.
    ParaHermitian,
}

impl Kind {
    /// Sign `s` with `J² = s·Id`.
    pub fn j_square_sign(self) -> i64 {
        match self {
            Kind::Hermitian => -1,
            Kind::ParaHermitian => 1,
        }
    }

    /// Eigenvalue of `J^*` on the form (and on the Kähler form).
    pub fn form_sign(self) -> i64 {
        -self.j_square_sign()
    }

    pub fn label(self) -> &'static str {
        match self {
            Kind::Hermitian => "hermitian",
            Kind::ParaHermitian => "para_hermitian",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "hermitian" | "h" => Ok(Kind::Hermitian),
            "para_hermitian" | "para" | "p" => Ok(Kind::ParaHermitian),
            other => Err(Error::InvalidStructure(format!("unknown kind {other:?}"))),
        }
    }
}

/// A reason a [`Structure`] fails its invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    OddDimension(usize),
    ShapeMismatch,
    FormNotSymmetric,
    FormDegenerate,
    JSquare { expected_sign: i64 },
    JIncompatible { expected_sign: i64 },
    Signature { negative: usize, positive: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OddDimension(d) => write!(f, "dimension {d} is not even and positive"),
            Violation::ShapeMismatch => write!(f, "form and J must both be dim x dim"),
            Violation::FormNotSymmetric => write!(f, "form is not symmetric"),
            Violation::FormDegenerate => write!(f, "form is degenerate"),
            Violation::JSquare { expected_sign } => write!(f, "J^2 != {expected_sign}·Id"),
            Violation::JIncompatible { expected_sign } => write!(f, "J^T·form·J != {expected_sign}·form"),
            Violation::Signature { negative, positive } => {
                write!(f, "form has signature ({negative},{positive}), expected neutral")
            }
        }
    }
}

/// Counts of negative and positive eigenvalue signs of a symmetric form, by
/// congruence diagonalization; `None` if the form is degenerate.
pub fn signature(form: &Matrix<Rational>) -> Option<(usize, usize)> {
    let n = form.rows();
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| form.row(i).to_vec()).collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let (mut neg, mut pos) = (0, 0);
    while !alive.is_empty() {
        let k = match alive.iter().copied().find(|&k| !a[k][k].is_zero()) {
            Some(k) => k,
            None => {
                // Make a diagonal entry nonzero with row/col i += row/col j.
                let (i, j) = alive
                    .iter()
                    .flat_map(|&i| alive.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero())?;
                for c in 0..n {
                    let v = &a[i][c] + &a[j][c];
                    a[i][c] = v;
                }
                for r in 0..n {
                    let v = &a[r][i] + &a[r][j];
                    a[r][i] = v;
                }
                i
            }
        };
        let piv = a[k][k].clone();
        if piv.signum() < 0 {
            neg += 1;
        } else {
            pos += 1;
        }
        alive.retain(|&x| x != k);
        let inv = piv.recip().expect("nonzero pivot");
        for &r in &alive {
            let f = &a[r][k] * &inv;
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = &a[r][c] - &(&f * &a[k][c]);
                a[r][c] = v;
            }
            for c in 0..n {
                let v = &a[c][r] - &(&f * &a[c][k]);
                a[c][r] = v;
            }
        }
    }
    Some((neg, pos))
}

/// A vector space with a nondegenerate symmetric form and a compatible
/// (para-)complex operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    dim: usize,
    form: Matrix<Rational>,
    j: Matrix<Rational>,
    kind: Kind,
    inverse_form: Option<Matrix<Rational>>,
}

impl Structure {
    /// Builds and validates a structure.
    pub fn new(form: Matrix<Rational>, j: Matrix<Rational>, kind: Kind) -> Result<Self> {
        let s = Self::new_unchecked(form, j, kind);
        let v = s.validate();
        if v.is_empty() {
            Ok(s)
        } else {
            Err(Error::InvalidStructure(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")))
        }
    }

    /// Builds without checking invariants; use [`Structure::validate`] to inspect.
    pub fn new_unchecked(form: Matrix<Rational>, j: Matrix<Rational>, kind: Kind) -> Self {
        let inverse_form = form.inverse();
        Structure { dim: form.rows(), form, j, kind, inverse_form }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Half the dimension.
    pub fn n(&self) -> usize {
        self.dim / 2
    }

    pub fn form(&self) -> &Matrix<Rational> {
        &self.form
    }

    pub fn j(&self) -> &Matrix<Rational> {
        &self.j
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// `eps^{ij}`; panics for a degenerate form.
    pub fn inverse_form(&self) -> &Matrix<Rational> {
        self.inverse_form.as_ref().expect("structure form is degenerate")
    }

    pub fn form_tensor(&self) -> Tensor2 {
        Tensor2::from_matrix(&self.form)
    }

    pub fn with_j(&self, j: Matrix<Rational>) -> Self {
        Self::new_unchecked(self.form.clone(), j, self.kind)
    }

    pub fn with_form(&self, form: Matrix<Rational>) -> Self {
        Self::new_unchecked(form, self.j.clone(), self.kind)
    }

    /// All invariant violations; empty iff the structure is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let d = self.dim;
        if d == 0 || d % 2 == 1 {
            out.push(Violation::OddDimension(d));
        }
        if !self.form.is_square() || !self.j.is_square() || self.j.rows() != d {
            out.push(Violation::ShapeMismatch);
            return out;
        }
        if !self.form.is_symmetric() {
            out.push(Violation::FormNotSymmetric);
        }
        if self.inverse_form.is_none() {
            out.push(Violation::FormDegenerate);
        }
        let s = self.kind.j_square_sign();
        let jj = self.j.mul(&self.j).expect("square");
        if jj != Matrix::identity(d).scale(&Rational::from(s)) {
            out.push(Violation::JSquare { expected_sign: s });
        }
        let fs = self.kind.form_sign();
        let pulled = self.j.transpose().mul(&self.form).and_then(|m| m.mul(&self.j)).expect("square");
        if pulled != self.form.scale(&Rational::from(fs)) {
            out.push(Violation::JIncompatible { expected_sign: fs });
        }
        if self.kind == Kind::ParaHermitian && self.form.is_symmetric() {
            if let Some((negative, positive)) = signature(&self.form) {
                if negative != positive {
                    out.push(Violation::Signature { negative, positive });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn require_para(&self) -> Result<()> {
        if self.kind != Kind::ParaHermitian {
            return Err(Error::NotParaHermitian);
        }
        Ok(())
    }

    /// JSON descriptor: dimension, kind, and form/J entries as `p/q` strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mat = |m: &Matrix<Rational>| {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(|x| x.to_pq_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        serde_json::json!({
            "dim": self.dim,
            "kind": self.kind.label(),
            "form": mat(&self.form),
            "j": mat(&self.j),
        })
    }
}

fn signed_diag(signs: &[i64]) -> Matrix<Rational> {
    Matrix::diagonal(&signs.iter().map(|s| Rational::from(*s)).collect::<Vec<_>>())
}

/// The neutral model on `{e_1..e_n, f_1..f_n}` with `<e_i,e_i> = -1`,
/// `<f_i,f_i> = +1`, `J e_i = f_i`, `J f_i = e_i`.
pub fn standard_para_hermitian(n: usize) -> Result<Structure> {
    if n == 0 {
        return Err(Error::InvalidStructure("n must be at least 1".into()));
    }
    let signs: Vec<i64> = (0..2 * n).map(|i| if i < n { -1 } else { 1 }).collect();
    let j = Matrix::from_fn(2 * n, 2 * n, |r, c| Rational::from((r + n == c || c + n == r) as i64));
    Structure::new(signed_diag(&signs), j, Kind::ParaHermitian)
}

/// Hermitian model of signature `(2p, 2q)`: `e_i, f_i` timelike for `i <= p`,
/// spacelike after; `J e_i = f_i`, `J f_i = -e_i`.
pub fn standard_hermitian(p: usize, q: usize) -> Result<Structure> {
    let n = p + q;
    if n == 0 {
        return Err(Error::InvalidStructure("p + q must be at least 1".into()));
    }
    let sign = |i: usize| if i % n < p { -1 } else { 1 };
    let signs: Vec<i64> = (0..2 * n).map(sign).collect();
    let j = Matrix::from_fn(2 * n, 2 * n, |r, c| {
        if r == c + n {
            Rational::one()
        } else if c == r + n {
            -Rational::one()
        } else {
            Rational::zero()
        }
    });
    Structure::new(signed_diag(&signs), j, Kind::Hermitian)
}

/// `Omega(x, y) = <x, J y>`.
pub fn kaehler_form(s: &Structure) -> Tensor2 {
    Tensor2::from_matrix(&s.form().mul(s.j()).expect("square"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn para_n1_basis() {
        let s = standard_para_hermitian(1).unwrap();
        assert_eq!(s.form(), &signed_diag(&[-1, 1]));
        assert_eq!(s.j(), &Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]));
    }

    #[test]
    fn para_n2_relations() {
        let s = standard_para_hermitian(2).unwrap();
        let j = s.j();
        assert_eq!(j.mul(j).unwrap(), Matrix::identity(4));
        let pulled = j.transpose().mul(s.form()).unwrap().mul(j).unwrap();
        assert_eq!(pulled, s.form().neg());
        assert!(s.validate().is_empty());
    }

    #[test]
    fn hermitian_examples() {
        let s = standard_hermitian(0, 1).unwrap();
        assert_eq!(s.form(), &Matrix::identity(2));
        assert_eq!(s.j(), &Matrix::from_rows(vec![vec![q(0), q(-1)], vec![q(1), q(0)]]));
        let s = standard_hermitian(0, 2).unwrap();
        let pulled = s.j().transpose().mul(s.form()).unwrap().mul(s.j()).unwrap();
        assert_eq!(&pulled, s.form());
        let s = standard_hermitian(1, 1).unwrap();
        assert_eq!(signature(s.form()), Some((2, 2)));
        assert!(s.is_valid());
    }

    #[test]
    fn validate_reports_violations() {
        let s = standard_para_hermitian(2).unwrap();
        let bad = s.with_j(Matrix::identity(4));
        assert!(bad.validate().contains(&Violation::JIncompatible { expected_sign: -1 }));
        let degenerate = s.with_form(Matrix::zeros(4, 4));
        assert!(degenerate.validate().contains(&Violation::FormDegenerate));
        let definite = s.with_form(Matrix::identity(4));
        assert!(!definite.is_valid());
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        let h = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
        assert_eq!(signature(&h), Some((1, 1)));
        assert_eq!(signature(&Matrix::zeros(2, 2)), None);
    }

    #[test]
    fn kaehler_form_examples() {
        let s = standard_para_hermitian(1).unwrap();
        let om = kaehler_form(&s);
        assert_eq!(om.get(0, 1), &q(-1));
        assert!(om.is_antisymmetric());
        assert_eq!(om.pullback(s.j()), om.neg());
        let h = standard_hermitian(0, 1).unwrap();
        let om = kaehler_form(&h);
        assert_eq!(om.get(0, 1), &q(-1));
        assert_eq!(om.pullback(h.j()), om);
        for a in 0..2 {
            assert!(om.get(a, a).is_zero());
        }
    }
}
