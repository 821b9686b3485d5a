//! Covariant tensors, the curvature symmetries, and the space of algebraic
//! curvature tensors with its induced bilinear form.

mod space;
mod tensor;

pub use space::CurvatureSpace;
pub use tensor::{Tensor2, Tensor4};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exactnum::{Echelon, Rational, Scalar, SparseVec, Subspace};
use crate::model::Structure;

/// True iff `t` is antisymmetric in its first pair, pair-symmetric, and
/// satisfies the first Bianchi identity.
pub fn is_algebraic_curvature<T: Scalar>(t: &Tensor4<T>) -> bool {
    first_violation(t).is_none()
}

/// First index tuple at which one of the curvature symmetries fails.
pub fn first_violation<T: Scalar>(t: &Tensor4<T>) -> Option<[usize; 4]> {
    let n = t.dim();
    for i in 0..n.pow(4) {
        let [a, b, c, d] = t.unflatten(i);
        let x = t.get([a, b, c, d]);
        if !x.add_ref(t.get([b, a, c, d])).is_zero()
            || x != t.get([c, d, a, b])
            || !x.add_ref(t.get([b, c, a, d])).add_ref(t.get([c, a, b, d])).is_zero()
        {
            return Some([a, b, c, d]);
        }
    }
    None
}

/// Rows of the stacked linear constraints on `(dim)^4` coordinates:
/// antisymmetry, then pair symmetry, then Bianchi.
pub fn curvature_constraints<T: Scalar>(dim: usize) -> Vec<SparseVec<T>> {
    let n = dim;
    let flat = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    let mut rows = Vec::new();
    let mut push = |terms: &[(usize, i64)]| {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (i, s) in terms {
            *acc.entry(*i).or_default() += s;
        }
        let row: SparseVec<T> = acc.into_iter().filter(|(_, v)| *v != 0).map(|(i, v)| (i, T::from_i64(v))).collect();
        if !row.is_empty() {
            rows.push(row);
        }
    };
    let tuples = || (0..n.pow(4)).map(move |i| [i / (n * n * n), (i / (n * n)) % n, (i / n) % n, i % n]);
    for [a, b, c, d] in tuples() {
        if a <= b {
            push(&[(flat(a, b, c, d), 1), (flat(b, a, c, d), 1)]);
        }
    }
    for [a, b, c, d] in tuples() {
        if flat(a, b, c, d) < flat(c, d, a, b) {
            push(&[(flat(a, b, c, d), 1), (flat(c, d, a, b), -1)]);
        }
    }
    for [a, b, c, d] in tuples() {
        push(&[(flat(a, b, c, d), 1), (flat(b, c, a, d), 1), (flat(c, a, b, d), 1)]);
    }
    rows
}

/// The space of algebraic curvature tensors in `⊗^4 T^dim`, as the kernel of
/// [`curvature_constraints`].
pub fn curvature_space_of_dim<T: Scalar>(dim: usize) -> Subspace<T> {
    let mut e = Echelon::new(dim.pow(4));
    for r in curvature_constraints::<T>(dim) {
        e.insert(&r);
    }
    Subspace::from_sparse_spanning(dim.pow(4), e.kernel_vectors())
}

/// Echelon basis of the algebraic curvature tensors on `s`.
pub fn curvature_space(s: &Structure) -> Subspace<Rational> {
    curvature_space_of_dim(s.dim())
}

/// `(2n)^2((2n)^2 - 1)/12`.
pub fn expected_curvature_dim(dim: usize) -> usize {
    dim * dim * (dim * dim - 1) / 12
}

/// Full contraction `eps^{aa'} eps^{bb'} eps^{cc'} eps^{dd'} a_{abcd} b_{a'b'c'd'}`.
pub fn tensor_inner_product(a: &Tensor4, b: &Tensor4, s: &Structure) -> Result<Rational> {
    if a.dim() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: a.dim() });
    }
    a.contract_with(b, s.inverse_form())
}

/// Serializes nonzero entries as lines `a b c d p/q` with 1-based indices.
pub fn write_tensor_file<T: Scalar>(t: &Tensor4<T>) -> String
where
    T: PqString,
{
    let mut out = String::new();
    for ([a, b, c, d], v) in t.nonzero_entries() {
        let _ = writeln!(out, "{} {} {} {} {}", a + 1, b + 1, c + 1, d + 1, v.pq());
    }
    out
}

/// Formatting used by the tensor file format.
pub trait PqString {
    fn pq(&self) -> String;
}

impl PqString for Rational {
    fn pq(&self) -> String {
        self.to_pq_string()
    }
}

/// Parses the tensor file format. Blank lines and lines starting with `#`
/// are ignored; repeated indices are an error.
pub fn parse_tensor_file(text: &str, dim: usize) -> Result<Tensor4> {
    let mut t = Tensor4::zeros(dim);
    let mut seen = vec![false; dim.pow(4)];
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(err(format!("expected 5 fields, found {}", fields.len())));
        }
        let mut idx = [0usize; 4];
        for (slot, f) in fields[..4].iter().enumerate() {
            let v: usize = f.parse().map_err(|_| err(format!("bad index {f:?}")))?;
            if v == 0 || v > dim {
                return Err(err(format!("index {v} outside 1..={dim}")));
            }
            idx[slot] = v - 1;
        }
        let value: Rational = fields[4].parse().map_err(|e| err(format!("bad value {:?}: {e}", fields[4])))?;
        let flat = t.flatten(idx);
        if seen[flat] {
            return Err(err("repeated index tuple".into()));
        }
        seen[flat] = true;
        t.set(idx, value);
    }
    Ok(t)
}
