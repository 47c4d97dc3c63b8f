//! Incremental sparse row echelon form.
//!
//! Invariant: row `i` has pivot coefficient 1 and zero entries at the pivot
//! columns of rows `0..i`. Reducing a vector therefore only needs to visit
//! pivot rows in increasing index order.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use super::field::Field;

pub type SparseVec<F> = HashMap<u32, F>;

#[derive(Debug)]
pub struct Echelon<F: Field> {
    rows: Vec<Vec<(u32, F)>>,
    pivots: Vec<u32>,
    pivot_row: HashMap<u32, usize>,
    col_count: HashMap<u32, u32>,
    /// `rows[i] = sum_g combos[i][g] * generator_g`, when tracking.
    combos: Option<Vec<HashMap<usize, F>>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(track: bool) -> Self {
        Self {
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: HashMap::new(),
            col_count: HashMap::new(),
            combos: track.then(Vec::new),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_impl(&self, v: &mut SparseVec<F>, mut combo: Option<&mut HashMap<usize, F>>) {
        let mut heap = BinaryHeap::new();
        let mut queued = HashSet::new();
        for c in v.keys() {
            if let Some(&r) = self.pivot_row.get(c) {
                if queued.insert(r) {
                    heap.push(Reverse(r));
                }
            }
        }
        while let Some(Reverse(r)) = heap.pop() {
            let Some(c) = v.get(&self.pivots[r]).cloned() else { continue };
            for (col, a) in &self.rows[r] {
                let delta = c.mul(a);
                let fresh = !v.contains_key(col);
                let entry = v.entry(*col).or_insert_with(F::zero);
                *entry = entry.sub(&delta);
                if entry.is_zero() {
                    v.remove(col);
                } else if fresh {
                    if let Some(&r2) = self.pivot_row.get(col) {
                        if queued.insert(r2) {
                            heap.push(Reverse(r2));
                        }
                    }
                }
            }
            if let (Some(acc), Some(combos)) = (combo.as_deref_mut(), self.combos.as_ref()) {
                for (g, a) in &combos[r] {
                    let e = acc.entry(*g).or_insert_with(F::zero);
                    *e = e.add(&c.mul(a));
                }
            }
        }
    }

    /// Residual of `v` modulo the row space.
    pub fn reduce(&self, mut v: SparseVec<F>) -> SparseVec<F> {
        self.reduce_impl(&mut v, None);
        v
    }

    /// Residual and the multiples of generators subtracted to reach it.
    pub fn reduce_tracked(&self, mut v: SparseVec<F>) -> (SparseVec<F>, HashMap<usize, F>) {
        let mut acc = HashMap::new();
        self.reduce_impl(&mut v, Some(&mut acc));
        acc.retain(|_, a: &mut F| !a.is_zero());
        (v, acc)
    }

    /// Add a row; returns whether the rank grew. `generator` labels it for tracking.
    pub fn insert(&mut self, v: SparseVec<F>, generator: usize) -> bool {
        let mut v = v;
        let mut acc = HashMap::new();
        if self.combos.is_some() {
            self.reduce_impl(&mut v, Some(&mut acc));
        } else {
            self.reduce_impl(&mut v, None);
        }
        if v.is_empty() {
            return false;
        }
        let pivot = *v
            .keys()
            .min_by_key(|c| (self.col_count.get(c).copied().unwrap_or(0), **c))
            .expect("nonempty");
        let scale = v[&pivot].inv();
        let mut row: Vec<(u32, F)> = v.into_iter().map(|(c, a)| (c, a.mul(&scale))).collect();
        row.sort_by_key(|(c, _)| *c);
        for (c, _) in &row {
            *self.col_count.entry(*c).or_insert(0) += 1;
        }
        if let Some(combos) = self.combos.as_mut() {
            // row = scale * (generator - acc)
            let mut combo: HashMap<usize, F> = acc.into_iter().map(|(g, a)| (g, F::zero().sub(&a.mul(&scale)))).collect();
            let e = combo.entry(generator).or_insert_with(F::zero);
            *e = e.add(&scale);
            combo.retain(|_, a| !a.is_zero());
            combos.push(combo);
        }
        self.pivot_row.insert(pivot, self.rows.len());
        self.pivots.push(pivot);
        self.rows.push(row);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn vec_of(entries: &[(u32, i64)]) -> SparseVec<BigRational> {
        entries.iter().map(|&(c, x)| (c, r(x))).collect()
    }

    #[test]
    fn span_membership() {
        let mut e = Echelon::new(true);
        assert!(e.insert(vec_of(&[(0, 1), (1, 1)]), 0));
        assert!(e.insert(vec_of(&[(1, 1), (2, 1)]), 1));
        assert!(!e.insert(vec_of(&[(0, 1), (2, -1)]), 2));
        assert_eq!(e.rank(), 2);
        let (res, combo) = e.reduce_tracked(vec_of(&[(0, 2), (1, 3), (2, 1)]));
        assert!(res.is_empty());
        assert_eq!(combo[&0], r(2));
        assert_eq!(combo[&1], r(1));
        assert!(!e.reduce(vec_of(&[(0, 1)])).is_empty());
    }
}
