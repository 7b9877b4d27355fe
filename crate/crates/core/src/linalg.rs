//! Sparse exact Gaussian elimination over a field.
//!
//! Vectors are `BTreeMap<K, F::Elem>` with no zero entries. Rows are kept
//! with pivot = smallest key and pivot coefficient 1. Every inserted vector
//! can carry a combination of caller-chosen generator ids, which makes
//! kernels and coordinates available without a second pass.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::arith::Field;

pub type SparseVec<K, E> = BTreeMap<K, E>;
pub type Combo<E> = BTreeMap<usize, E>;

struct Row<K, E> {
    vec: SparseVec<K, E>,
    combo: Combo<E>,
}

pub struct Echelon<F: Field + Clone, K: Ord + Clone> {
    field: F,
    rows: BTreeMap<K, Row<K, F::Elem>>,
    track: bool,
}

/// `acc += c·v`, dropping cancelled entries.
pub fn axpy<F: Field, K: Ord + Clone>(field: &F, acc: &mut SparseVec<K, F::Elem>, c: &F::Elem, v: &SparseVec<K, F::Elem>) {
    for (k, x) in v {
        let t = field.mul(c, x);
        match acc.get_mut(k) {
            Some(y) => {
                *y = field.add(y, &t);
                if field.is_zero(y) {
                    acc.remove(k);
                }
            }
            None => {
                if !field.is_zero(&t) {
                    acc.insert(k.clone(), t);
                }
            }
        }
    }
}

pub fn scale_vec<F: Field, K: Ord + Clone>(field: &F, c: &F::Elem, v: &SparseVec<K, F::Elem>) -> SparseVec<K, F::Elem> {
    if field.is_zero(c) {
        return BTreeMap::new();
    }
    v.iter().map(|(k, x)| (k.clone(), field.mul(c, x))).filter(|(_, x)| !field.is_zero(x)).collect()
}

impl<F: Field + Clone, K: Ord + Clone> Echelon<F, K> {
    pub fn new(field: F) -> Self {
        Echelon { field, rows: BTreeMap::new(), track: false }
    }

    /// An echelon form that records generator combinations.
    pub fn tracking(field: F) -> Self {
        Echelon { field, rows: BTreeMap::new(), track: true }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Returns `(r, e)` with `v = r + Σ e[id]·gen_id` and no key of `r` a pivot.
    pub fn reduce(&self, v: &SparseVec<K, F::Elem>) -> (SparseVec<K, F::Elem>, Combo<F::Elem>) {
        let f = &self.field;
        let mut r = v.clone();
        let mut e: Combo<F::Elem> = BTreeMap::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => r.iter().find(|(k, _)| self.rows.contains_key(*k)),
                Some(c) => r.range(c.clone()..).find(|(k, _)| self.rows.contains_key(*k)),
            }
            .map(|(k, x)| (k.clone(), x.clone()));
            let Some((k, c)) = next else { break };
            let row = &self.rows[&k];
            axpy(f, &mut r, &f.neg(&c), &row.vec);
            if self.track {
                axpy(f, &mut e, &c, &row.combo);
            }
            cursor = Some(k);
        }
        (r, e)
    }

    pub fn contains(&self, v: &SparseVec<K, F::Elem>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Inserts `v` (which equals `Σ combo[id]·gen_id`). Returns `None` if the
    /// rank grew, otherwise the linear relation among generator ids found.
    pub fn insert(&mut self, v: &SparseVec<K, F::Elem>, combo: Combo<F::Elem>) -> Option<Combo<F::Elem>> {
        let (r, e) = self.reduce(v);
        let f = &self.field;
        let mut rel = combo;
        if self.track {
            axpy(f, &mut rel, &f.neg(&f.one()), &e);
        }
        let (k, lead) = match r.iter().next() {
            None => return Some(rel),
            Some((k, lead)) => (k.clone(), lead.clone()),
        };
        let inv = f.inv(&lead).expect("nonzero pivot");
        let vec = scale_vec(f, &inv, &r);
        let combo = if self.track { scale_vec(f, &inv, &rel) } else { BTreeMap::new() };
        self.rows.insert(k, Row { vec, combo });
        None
    }

    pub fn insert_plain(&mut self, v: &SparseVec<K, F::Elem>) -> bool {
        self.insert(v, BTreeMap::new()).is_none()
    }
}

pub fn rank_of<F: Field + Clone, K: Ord + Clone>(field: &F, vecs: &[SparseVec<K, F::Elem>]) -> usize {
    let mut e = Echelon::new(field.clone());
    for v in vecs {
        e.insert_plain(v);
    }
    e.rank()
}

/// Basis of `{c : Σ c_i·images[i] = 0}` as combinations of indices.
pub fn kernel<F: Field + Clone, K: Ord + Clone>(field: &F, images: &[SparseVec<K, F::Elem>]) -> Vec<Combo<F::Elem>> {
    let mut e = Echelon::tracking(field.clone());
    let mut out = Vec::new();
    for (i, v) in images.iter().enumerate() {
        let mut c = BTreeMap::new();
        c.insert(i, field.one());
        if let Some(rel) = e.insert(v, c) {
            out.push(rel);
        }
    }
    out
}

/// Applies a combination of indices to a list of vectors.
pub fn combine<F: Field, K: Ord + Clone>(field: &F, combo: &Combo<F::Elem>, vecs: &[SparseVec<K, F::Elem>]) -> SparseVec<K, F::Elem> {
    let mut acc = BTreeMap::new();
    for (i, c) in combo {
        axpy(field, &mut acc, c, &vecs[*i]);
    }
    acc
}

/// Rank of a dense matrix.
pub fn dense_rank<F: Field + Clone>(field: &F, rows: &[Vec<F::Elem>]) -> usize {
    let vecs: Vec<SparseVec<usize, F::Elem>> = rows
        .iter()
        .map(|r| r.iter().enumerate().filter(|(_, x)| !field.is_zero(x)).map(|(i, x)| (i, x.clone())).collect())
        .collect();
    rank_of(field, &vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, NumberField, Ring, Q};

    fn v(entries: &[(u32, i64)]) -> SparseVec<u32, crate::arith::NfElem> {
        let nf = NumberField::rationals();
        entries.iter().map(|(k, x)| (*k, nf.from_int(*x))).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let nf = NumberField::rationals();
        let vecs = [v(&[(0, 1), (1, 2)]), v(&[(1, 1), (2, 1)]), v(&[(0, 1), (1, 4), (2, 2)])];
        assert_eq!(rank_of(&nf, &vecs), 2);
        let ker = kernel(&nf, &vecs);
        assert_eq!(ker.len(), 1);
        assert!(combine(&nf, &ker[0], &vecs).is_empty());
    }

    #[test]
    fn coordinates_from_reduction() {
        let nf = NumberField::rationals();
        let mut e = Echelon::tracking(nf.clone());
        let gens = [v(&[(0, 1), (1, 1)]), v(&[(1, 1)])];
        for (i, g) in gens.iter().enumerate() {
            let mut c = BTreeMap::new();
            c.insert(i, nf.one());
            assert!(e.insert(g, c).is_none());
        }
        let (r, coords) = e.reduce(&v(&[(0, 3), (1, 5)]));
        assert!(r.is_empty());
        let q3: Q = q(3);
        assert_eq!(coords[&0].as_rational(), Some(&q3));
        assert_eq!(coords[&1].as_rational(), Some(&q(2)));
    }

    #[test]
    fn dense() {
        let nf = NumberField::rationals();
        let m = [[1, 2, 3], [2, 4, 6], [0, 1, 1]];
        let rows: Vec<Vec<_>> = m.iter().map(|r| r.iter().map(|x| nf.from_int(*x)).collect()).collect();
        assert_eq!(dense_rank(&nf, &rows), 2);
    }
}
