//! Incremental reduced row-echelon form over sparse rows.
//!
//! Every stored row has leading coefficient one and is zero in the pivot
//! columns of all other rows, so reducing a new vector is a single pass over
//! its pivot-column entries.

use super::Scalar;

/// Sorted `(column, value)` pairs with no explicit zeros.
pub type SparseVec<T> = Vec<(usize, T)>;

pub fn sparse_from_dense<T: Scalar>(v: &[T]) -> SparseVec<T> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense<T: Scalar>(v: &SparseVec<T>, len: usize) -> Vec<T> {
    let mut out = vec![T::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

pub fn sparse_get<T: Scalar>(v: &SparseVec<T>, col: usize) -> Option<&T> {
    v.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| &v[k].1)
}

/// `dst - alpha * src`.
pub fn sparse_sub_scaled<T: Scalar>(dst: &SparseVec<T>, alpha: &T, src: &SparseVec<T>) -> SparseVec<T> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let take_dst = j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0);
        let take_src = i >= dst.len() || (j < src.len() && src[j].0 < dst[i].0);
        if take_dst {
            out.push(dst[i].clone());
            i += 1;
        } else if take_src {
            out.push((src[j].0, alpha.mul_ref(&src[j].1).neg_ref()));
            j += 1;
        } else {
            let v = dst[i].1.sub_ref(&alpha.mul_ref(&src[j].1));
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_scale<T: Scalar>(v: &SparseVec<T>, alpha: &T) -> SparseVec<T> {
    if alpha.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x.mul_ref(alpha))).collect()
}

pub fn sparse_dot<T: Scalar>(a: &SparseVec<T>, b: &SparseVec<T>) -> T {
    let mut acc = T::zero();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = acc.add_ref(&a[i].1.mul_ref(&b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Linear combination `sum coeffs[k] * vecs[k]`.
pub fn sparse_combination<T: Scalar>(coeffs: &[T], vecs: &[SparseVec<T>], len: usize) -> SparseVec<T> {
    let mut acc = vec![T::zero(); len];
    for (c, v) in coeffs.iter().zip(vecs) {
        if c.is_zero() {
            continue;
        }
        for (i, x) in v {
            acc[*i] = acc[*i].add_ref(&c.mul_ref(x));
        }
    }
    sparse_from_dense(&acc)
}

#[derive(Clone, Debug)]
pub struct Echelon<T: Scalar> {
    ncols: usize,
    rows: Vec<SparseVec<T>>,
    pivot_row: Vec<Option<usize>>,
    scratch: Vec<T>,
}

impl<T: Scalar> Echelon<T> {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivot_row: vec![None; ncols],
            scratch: vec![T::zero(); ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Subtracts the stored rows from `v`, returning the residual.
    pub fn reduce(&mut self, v: &SparseVec<T>) -> SparseVec<T> {
        let hits: Vec<(usize, T)> = v
            .iter()
            .filter_map(|(c, x)| self.pivot_row[*c].map(|r| (r, x.clone())))
            .collect();
        if hits.is_empty() {
            return v.clone();
        }
        if hits.len() == 1 {
            let (r, x) = &hits[0];
            return sparse_sub_scaled(v, x, &self.rows[*r]);
        }
        let mut touched: Vec<usize> = Vec::with_capacity(v.len() * 2);
        for (c, x) in v {
            self.scratch[*c] = x.clone();
            touched.push(*c);
        }
        for (r, x) in &hits {
            for (c, y) in &self.rows[*r] {
                let cur = &self.scratch[*c];
                if cur.is_zero() {
                    touched.push(*c);
                }
                self.scratch[*c] = cur.sub_ref(&x.mul_ref(y));
            }
        }
        touched.sort_unstable();
        touched.dedup();
        let mut out = Vec::with_capacity(touched.len());
        for c in touched {
            let val = std::mem::replace(&mut self.scratch[c], T::zero());
            if !val.is_zero() {
                out.push((c, val));
            }
        }
        out
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec<T>) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let (q, lead) = &r[0];
        let q = *q;
        let inv = lead.inv().expect("non-zero pivot");
        let r = if inv.is_one() { r } else { sparse_scale(&r, &inv) };
        for row in self.rows.iter_mut() {
            if let Some(x) = sparse_get(row, q).cloned() {
                *row = sparse_sub_scaled(row, &x, &r);
            }
        }
        self.pivot_row[q] = Some(self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn insert_dense(&mut self, v: &[T]) -> bool {
        self.insert(&sparse_from_dense(v))
    }

    pub fn contains(&mut self, v: &SparseVec<T>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Basis of the null space of the matrix whose rows were inserted.
    pub fn kernel_vectors(&self) -> Vec<SparseVec<T>> {
        let mut ker: Vec<Option<SparseVec<T>>> = (0..self.ncols)
            .map(|c| if self.pivot_row[c].is_none() { Some(vec![(c, T::one())]) } else { None })
            .collect();
        for row in &self.rows {
            let p = row[0].0;
            for (c, x) in &row[1..] {
                if let Some(v) = ker[*c].as_mut() {
                    v.push((p, x.neg_ref()));
                }
            }
        }
        ker.into_iter()
            .flatten()
            .map(|mut v| {
                v.sort_unstable_by_key(|(c, _)| *c);
                v
            })
            .collect()
    }

    /// Rows ordered by pivot column, with the pivot columns.
    pub fn into_sorted(self) -> (Vec<usize>, Vec<SparseVec<T>>) {
        let mut rows = self.rows;
        rows.sort_unstable_by_key(|r| r[0].0);
        let pivots = rows.iter().map(|r| r[0].0).collect();
        (pivots, rows)
    }
}
