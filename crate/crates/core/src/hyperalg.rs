//! Quantum hypermatrix algebras: realignments, defining relations,
//! hyperdeterminants and minors.
//!
//! Identity builders live in [`identities`]; algebra maps (the tensor
//! splitting, coactions, the quantum group actions) live in [`maps`].

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use thiserror::Error;

use crate::ncalg::{permutations, GenId, NCPoly, Perm};
use crate::qseries::{qfact, RationalFn};

pub mod identities;
pub mod maps;

pub use identities::{laplace_minor_poly, laplace_row_poly, pluecker_poly, PlueckerVariant};
pub use maps::{
    cayley_classical, circ_product, classical_product, coaction, delta_split, phi_map, uq_action, CartanSplit,
    CoactionSide, SignConvention,
    UqGen, WeightVector,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperError {
    #[error("shape {0:?} is not cubical")]
    NotCubical(Vec<u8>),
    #[error("axis {axis} out of range for {m} axes")]
    Axis { axis: usize, m: usize },
    #[error("index {0:?} out of range")]
    Index(Vec<u8>),
    #[error("size mismatch: {0}")]
    Size(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Per-axis dimensions `(n_1, .., n_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperShape {
    dims: Vec<u8>,
}

impl HyperShape {
    pub fn new(dims: Vec<u8>) -> Result<Self, HyperError> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(HyperError::Size(format!("invalid dimensions {dims:?}")));
        }
        Ok(Self { dims })
    }

    pub fn cube(n: u8, m: usize) -> Self {
        Self { dims: vec![n; m] }
    }

    pub fn m(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[u8] {
        &self.dims
    }

    pub fn is_cubical(&self) -> bool {
        self.dims.iter().all_equal()
    }

    pub fn cube_size(&self) -> Result<u8, HyperError> {
        if self.is_cubical() {
            Ok(self.dims[0])
        } else {
            Err(HyperError::NotCubical(self.dims.clone()))
        }
    }

    /// All indices in lexicographic order.
    pub fn indices(&self) -> Vec<Vec<u8>> {
        self.dims.iter().map(|&d| 1..=d).multi_cartesian_product().collect()
    }

    pub fn contains(&self, idx: &[u8]) -> bool {
        idx.len() == self.m() && idx.iter().zip(&self.dims).all(|(&i, &d)| i >= 1 && i <= d)
    }
}

/// Generators `name[i_1, .., i_m]` of a hypermatrix algebra in one tensor component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperAlgebra {
    shape: HyperShape,
    pub comp: u8,
    pub name: char,
}

impl HyperAlgebra {
    pub fn new(shape: HyperShape, comp: u8, name: char) -> Self {
        Self { shape, comp, name }
    }

    /// Cubical `n^m` algebra named `a` in component 0.
    pub fn cube(n: u8, m: usize) -> Self {
        Self::new(HyperShape::cube(n, m), 0, 'a')
    }

    pub fn in_comp(&self, comp: u8) -> Self {
        Self { comp, ..self.clone() }
    }

    pub fn shape(&self) -> &HyperShape {
        &self.shape
    }

    pub fn m(&self) -> usize {
        self.shape.m()
    }

    pub fn gen(&self, idx: &[u8]) -> GenId {
        GenId::new(self.comp, self.name, idx)
    }

    pub fn entry(&self, idx: &[u8]) -> NCPoly {
        NCPoly::gen(self.gen(idx))
    }

    pub fn generators(&self) -> Vec<GenId> {
        self.shape.indices().iter().map(|i| self.gen(i)).collect()
    }

    fn check_axis(&self, k: usize) -> Result<(), HyperError> {
        if k == 0 || k > self.m() {
            return Err(HyperError::Axis { axis: k, m: self.m() });
        }
        Ok(())
    }

    /// Row `i` and column tuple `alpha` of index `idx` in the `k`-th realignment.
    pub fn realign(&self, k: usize, idx: &[u8]) -> Result<(u8, Vec<u8>), HyperError> {
        self.check_axis(k)?;
        if !self.shape.contains(idx) {
            return Err(HyperError::Index(idx.to_vec()));
        }
        let alpha = idx.iter().enumerate().filter(|(t, _)| *t != k - 1).map(|(_, &x)| x).collect();
        Ok((idx[k - 1], alpha))
    }

    /// Inverse of [`HyperAlgebra::realign`].
    pub fn unrealign(&self, k: usize, i: u8, alpha: &[u8]) -> Result<Vec<u8>, HyperError> {
        self.check_axis(k)?;
        if alpha.len() + 1 != self.m() {
            return Err(HyperError::Index(alpha.to_vec()));
        }
        let mut idx = alpha.to_vec();
        idx.insert(k - 1, i);
        if !self.shape.contains(&idx) {
            return Err(HyperError::Index(idx));
        }
        Ok(idx)
    }

    /// `a^{(k)}_{i alpha}`.
    pub fn realigned(&self, k: usize, i: u8, alpha: &[u8]) -> NCPoly {
        self.entry(&self.unrealign(k, i, alpha).expect("index in range"))
    }
}

/// Linearly generated homogeneous quadratic relations, deduplicated up to scalars.
#[derive(Clone, Debug, Default)]
pub struct RelationSet {
    rels: Vec<NCPoly>,
    keys: HashSet<NCPoly>,
}

impl RelationSet {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(p: &NCPoly) -> NCPoly {
        let lead = p.terms().next().unwrap().1.inv().expect("nonzero");
        p.scale(&lead)
    }

    /// Add `p` unless it is zero or a scalar multiple of a stored relation.
    pub fn push(&mut self, p: NCPoly) -> bool {
        if p.is_zero() {
            return false;
        }
        if self.keys.insert(Self::key(&p)) {
            self.rels.push(p);
            true
        } else {
            false
        }
    }

    pub fn push_raw(&mut self, p: NCPoly) -> bool {
        self.push(p)
    }

    pub fn extend(&mut self, other: &RelationSet) {
        for r in &other.rels {
            self.push(r.clone());
        }
    }

    pub fn len(&self) -> usize {
        self.rels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &NCPoly> {
        self.rels.iter()
    }

    pub fn as_slice(&self) -> &[NCPoly] {
        &self.rels
    }

    /// True when both sets agree up to scalar multiples of their members.
    pub fn same_members(&self, other: &RelationSet) -> bool {
        self.keys == other.keys
    }
}

impl FromIterator<NCPoly> for RelationSet {
    fn from_iter<I: IntoIterator<Item = NCPoly>>(iter: I) -> Self {
        let mut out = RelationSet::new();
        for p in iter {
            out.push(p);
        }
        out
    }
}

/// Products `J = I_1 x .. x I_{m-1}` of 2-subsets of the axes other than `k`.
fn two_subset_products(alg: &HyperAlgebra, k: usize) -> Vec<Vec<(u8, u8)>> {
    let others: Vec<u8> = alg.shape.dims().iter().enumerate().filter(|(t, _)| *t != k - 1).map(|(_, &d)| d).collect();
    others
        .iter()
        .map(|&d| (1..=d).tuple_combinations::<(u8, u8)>().collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect()
}

/// Splittings `alpha ⊔ beta = J` with `inv(alpha, beta)`.
fn splittings(j: &[(u8, u8)]) -> Vec<(Vec<u8>, Vec<u8>, i64)> {
    (0u32..1 << j.len())
        .map(|mask| {
            let mut alpha = Vec::with_capacity(j.len());
            let mut beta = Vec::with_capacity(j.len());
            for (t, &(lo, hi)) in j.iter().enumerate() {
                if mask >> t & 1 == 1 {
                    alpha.push(hi);
                    beta.push(lo);
                } else {
                    alpha.push(lo);
                    beta.push(hi);
                }
            }
            (alpha, beta, mask.count_ones() as i64)
        })
        .collect()
}

/// `sum_{alpha ⊔ beta = J} (-q)^{inv(alpha, beta)} a^{(k)}_{i alpha} a^{(k)}_{j beta}`.
pub fn realigned_pair_sum(alg: &HyperAlgebra, k: usize, i: u8, j: u8, jset: &[(u8, u8)]) -> NCPoly {
    let mut out = NCPoly::zero();
    for (alpha, beta, inv) in splittings(jset) {
        let w = &alg.realigned(k, i, &alpha) * &alg.realigned(k, j, &beta);
        out.add_scaled(&w, &RationalFn::neg_q_pow(inv));
    }
    out
}

/// Relations attached to axis `k`.
pub fn relations_axis(alg: &HyperAlgebra, k: usize) -> Result<RelationSet, HyperError> {
    alg.check_axis(k)?;
    let mut out = RelationSet::new();
    if alg.m() < 2 {
        return Ok(out);
    }
    let rows = alg.shape.dims()[k - 1];
    for jset in two_subset_products(alg, k) {
        for i in 1..=rows {
            out.push(realigned_pair_sum(alg, k, i, i, &jset));
        }
        for i in 1..=rows {
            for j in i + 1..=rows {
                let lhs = realigned_pair_sum(alg, k, j, i, &jset);
                let rhs = realigned_pair_sum(alg, k, i, j, &jset).scale(&RationalFn::q());
                out.push(&lhs + &rhs);
            }
        }
    }
    Ok(out)
}

/// Defining relations of the hypermatrix algebra, over every axis.
pub fn relations(alg: &HyperAlgebra) -> RelationSet {
    let mut out = RelationSet::new();
    for k in 1..=alg.m() {
        out.extend(&relations_axis(alg, k).expect("axis in range"));
    }
    out
}

/// Differences of realigned pair sums across axes `s`, `t` with a shared `J`.
pub fn derived_relations_rea3(alg: &HyperAlgebra) -> Result<RelationSet, HyperError> {
    let n = alg.shape.cube_size()?;
    let mut out = RelationSet::new();
    if alg.m() < 2 {
        return Ok(out);
    }
    let pairs: Vec<(u8, u8)> = (1..=n).tuple_combinations().collect();
    for jset in two_subset_products(alg, 1) {
        for s in 1..=alg.m() {
            for t in 1..=alg.m() {
                for &(i, j) in &pairs {
                    for &(k, l) in &pairs {
                        let d = &realigned_pair_sum(alg, s, i, j, &jset) - &realigned_pair_sum(alg, t, k, l, &jset);
                        out.push(d);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Memoizing wrapper around an entry function.
pub(crate) struct Entries<'a> {
    f: &'a dyn Fn(&[u8]) -> NCPoly,
    cache: HashMap<Vec<u8>, NCPoly>,
}

impl<'a> Entries<'a> {
    pub(crate) fn new(f: &'a dyn Fn(&[u8]) -> NCPoly) -> Self {
        Self { f, cache: HashMap::new() }
    }

    pub(crate) fn get(&mut self, idx: &[u8]) -> &NCPoly {
        if !self.cache.contains_key(idx) {
            let v = (self.f)(idx);
            self.cache.insert(idx.to_vec(), v);
        }
        &self.cache[idx]
    }
}

/// `sum over perm tuples of (-q)^{sum l} prod_j e(slot_t = sets_t[sigma_t(j)])`,
/// where axes listed in `free` carry a permutation and the others use the identity.
fn perm_tuple_sum(sets: &[Vec<u8>], free: &[bool], entries: &mut Entries<'_>) -> NCPoly {
    let r = sets[0].len();
    let perms = permutations(r);
    let n_free = free.iter().filter(|f| **f).count();
    let identity = Perm::identity(r);
    let mut out = NCPoly::zero();
    let tuples: Vec<Vec<&Perm>> = if n_free == 0 {
        vec![vec![]]
    } else {
        (0..n_free).map(|_| perms.iter()).multi_cartesian_product().collect()
    };
    for tuple in tuples {
        let mut it = tuple.iter();
        let chosen: Vec<&Perm> = free.iter().map(|&f| if f { *it.next().unwrap() } else { &identity }).collect();
        let exp: usize = chosen.iter().map(|p| p.inversions()).sum();
        let mut term = NCPoly::constant(RationalFn::neg_q_pow(exp as i64));
        for j in 1..=r {
            let idx: Vec<u8> = chosen.iter().zip(sets).map(|(p, s)| s[p.image(j) - 1]).collect();
            term = &term * entries.get(&idx);
        }
        out += &term;
    }
    out
}

/// Fixed-axis hyperdeterminant of an arbitrary `n^m` array of entries: axis `k`
/// carries the identity, every other axis a permutation.
pub fn hyperdet_fixed_of(n: u8, m: usize, k: usize, entry: &dyn Fn(&[u8]) -> NCPoly) -> Result<NCPoly, HyperError> {
    if k == 0 || k > m {
        return Err(HyperError::Axis { axis: k, m });
    }
    let sets = vec![(1..=n).collect::<Vec<u8>>(); m];
    let free: Vec<bool> = (1..=m).map(|t| t != k).collect();
    Ok(perm_tuple_sum(&sets, &free, &mut Entries::new(entry)))
}

/// `sum over all m-tuples of permutations`, before normalization.
pub fn hyperdet_full_sum_of(n: u8, m: usize, entry: &dyn Fn(&[u8]) -> NCPoly) -> NCPoly {
    let sets = vec![(1..=n).collect::<Vec<u8>>(); m];
    perm_tuple_sum(&sets, &vec![true; m], &mut Entries::new(entry))
}

pub fn hyperdet_fixed(alg: &HyperAlgebra, k: usize) -> Result<NCPoly, HyperError> {
    let n = alg.shape.cube_size()?;
    hyperdet_fixed_of(n, alg.m(), k, &|i: &[u8]| alg.entry(i))
}

pub fn hyperdet_full_sum(alg: &HyperAlgebra) -> Result<NCPoly, HyperError> {
    let n = alg.shape.cube_size()?;
    Ok(hyperdet_full_sum_of(n, alg.m(), &|i: &[u8]| alg.entry(i)))
}

/// The full permutation sum divided by `[n]_{q^2}!`.
pub fn hyperdet_normalized(alg: &HyperAlgebra) -> Result<NCPoly, HyperError> {
    let n = alg.shape.cube_size()?;
    let c = RationalFn::from_laurent(qfact(n as u32, 2)).inv().expect("nonzero");
    Ok(hyperdet_full_sum(alg)?.scale(&c))
}

/// The `r`-minor hyperdeterminant on per-axis sorted subsets, first axis unpermuted.
pub fn minor_xi_of(sets: &[Vec<u8>], entry: &dyn Fn(&[u8]) -> NCPoly) -> Result<NCPoly, HyperError> {
    let r = sets.first().map(Vec::len).unwrap_or(0);
    if sets.iter().any(|s| s.len() != r) {
        return Err(HyperError::Size(format!("subsets of unequal size {sets:?}")));
    }
    if r == 0 {
        return Ok(NCPoly::one());
    }
    let free: Vec<bool> = (0..sets.len()).map(|t| t != 0).collect();
    Ok(perm_tuple_sum(sets, &free, &mut Entries::new(entry)))
}

pub fn minor_xi(alg: &HyperAlgebra, sets: &[Vec<u8>]) -> Result<NCPoly, HyperError> {
    if sets.len() != alg.m() {
        return Err(HyperError::Size(format!("expected {} subsets", alg.m())));
    }
    for (s, &d) in sets.iter().zip(alg.shape.dims()) {
        if s.iter().any(|&i| i == 0 || i > d) || !s.windows(2).all(|w| w[0] < w[1]) {
            return Err(HyperError::Index(s.clone()));
        }
    }
    minor_xi_of(sets, &|i: &[u8]| alg.entry(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extalg::wedge_relation_coefficients;
    use crate::ncalg::text::parse;
    use crate::qmatrix::{det_q_col, det_q_row};
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    #[test]
    fn realignment_examples() {
        let alg = HyperAlgebra::cube(2, 4);
        assert_eq!(alg.realign(2, &[2, 2, 1, 2]).unwrap(), (2, vec![2, 1, 2]));
        assert_eq!(alg.realign(1, &[1, 2, 1, 1]).unwrap(), (1, vec![2, 1, 1]));
        for idx in alg.shape().indices() {
            for k in 1..=4 {
                let (i, a) = alg.realign(k, &idx).unwrap();
                assert_eq!(alg.unrealign(k, i, &a).unwrap(), idx);
            }
        }
        assert!(alg.realign(5, &[1, 1, 1, 1]).is_err());
        assert!(alg.realign(1, &[3, 1, 1, 1]).is_err());
    }

    #[test]
    fn relation_examples() {
        let alg = HyperAlgebra::cube(2, 2);
        let r1 = relations_axis(&alg, 1).unwrap();
        assert_eq!(r1.iter().next().unwrap(), &parse("a[1,1].a[1,2] - q*a[1,2].a[1,1]").unwrap());
        assert!(relations(&HyperAlgebra::cube(2, 1)).is_empty());
        assert!(relations(&HyperAlgebra::cube(3, 1)).is_empty());
    }

    #[test]
    fn wedge_coefficients_are_the_relations() {
        for n in 2..=3 {
            for m in 2..=3 {
                let alg = HyperAlgebra::cube(n, m);
                for k in 1..=m {
                    let wedge: RelationSet = wedge_relation_coefficients(&alg, k).unwrap().into_iter().collect();
                    assert!(wedge.same_members(&relations_axis(&alg, k).unwrap()), "n={n} m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn rea3_example() {
        let alg = HyperAlgebra::cube(2, 2);
        let jset = [(1, 2)];
        assert!((&realigned_pair_sum(&alg, 1, 1, 2, &jset) - &realigned_pair_sum(&alg, 1, 1, 2, &jset)).is_zero());
        let d = &realigned_pair_sum(&alg, 1, 1, 2, &jset) - &realigned_pair_sum(&alg, 2, 1, 2, &jset);
        assert_eq!(d, parse("-q*a[1,2].a[2,1] + q*a[2,1].a[1,2]").unwrap());
    }

    #[test]
    fn fixed_axis_examples() {
        let alg = HyperAlgebra::cube(2, 3);
        assert_eq!(
            hyperdet_fixed(&alg, 3).unwrap(),
            parse("a[1,1,1].a[2,2,2] - q*a[1,2,1].a[2,1,2] - q*a[2,1,1].a[1,2,2] + q^2*a[2,2,1].a[1,1,2]").unwrap()
        );
        for n in 1..=3 {
            let alg = HyperAlgebra::cube(n, 2);
            assert_eq!(hyperdet_fixed(&alg, 1).unwrap(), det_q_row(n, 0, 'a'));
            assert_eq!(hyperdet_fixed(&alg, 2).unwrap(), det_q_col(n, 0, 'a'));
        }
        for m in 2..=4 {
            let alg = HyperAlgebra::cube(2, m);
            for k in 1..=m {
                let v = hyperdet_fixed(&alg, k)
                    .unwrap()
                    .specialize_commutative(
                        |g| Some(if g.idx.iter().all_equal() { BigRational::one() } else { BigRational::zero() }),
                        &BigRational::from_integer(3.into()),
                    )
                    .unwrap();
                assert!(v.is_one());
            }
        }
        assert!(hyperdet_fixed(&HyperAlgebra::new(HyperShape::new(vec![2, 3]).unwrap(), 0, 'a'), 1).is_err());
    }

    #[test]
    fn normalized_is_axis_invariant() {
        let alg = HyperAlgebra::cube(2, 3);
        let d = hyperdet_normalized(&alg).unwrap();
        assert_eq!(d.len(), 8);
        for tau in permutations(3) {
            assert_eq!(d.act_axis_perm(&tau, 0).unwrap(), d);
        }
    }

    #[test]
    fn minor_examples() {
        let alg = HyperAlgebra::cube(2, 2);
        assert_eq!(minor_xi(&alg, &[vec![1, 2], vec![1, 2]]).unwrap(), parse("a[1,1].a[2,2] - q*a[1,2].a[2,1]").unwrap());
        assert_eq!(minor_xi(&alg, &[vec![2], vec![1]]).unwrap(), parse("a[2,1]").unwrap());
        let alg3 = HyperAlgebra::cube(3, 3);
        let full = vec![vec![1, 2, 3]; 3];
        assert_eq!(minor_xi(&alg3, &full).unwrap(), hyperdet_fixed(&alg3, 1).unwrap());
        assert!(minor_xi(&alg3, &[vec![1, 2], vec![1], vec![2]]).is_err());
        // quantum 2-minors of a 3x3 quantum matrix
        let m = minor_xi(&HyperAlgebra::cube(3, 2), &[vec![1, 3], vec![2, 3]]).unwrap();
        assert_eq!(m, parse("a[1,2].a[3,3] - q*a[1,3].a[3,2]").unwrap());
    }
}
