//! Quantum hyper-Pfaffians over block index tuples, and their bridges to
//! hyperdeterminants.
//!
//! A block index `I = (I_1, .., I_m)` is a tuple of sorted `k`-subsets, one per
//! axis group; the generator `b_I` has the concatenated index of arity `mk`.
//! Every Pfaffian here is computed over arbitrary per-axis ground sets, so
//! sub-Pfaffians `Pf(B_I)` are the same functions applied to subsets.

use itertools::Itertools;
use thiserror::Error;

use crate::hyperalg::{hyperdet_fixed, minor_xi, HyperAlgebra, HyperError, RelationSet};
use crate::ncalg::{block_arrangements, complement, inv_blocks, subsets, GenId, NCPoly};
use crate::qseries::{qfact, qbinom, LaurentV, RationalFn};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PfError {
    #[error("invalid Pfaffian shape k = {k}, m = {m}, n = {n}")]
    Shape { k: usize, m: usize, n: usize },
    #[error("block size {k} is not divisible by {kprime}")]
    Divisibility { k: usize, kprime: usize },
    #[error("t = {t} out of range 0..={n}")]
    Range { t: usize, n: usize },
    #[error(transparent)]
    Hyper(#[from] HyperError),
}

/// `k` block size, `m` axis groups, `n` blocks per axis group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PfShape {
    pub k: usize,
    pub m: usize,
    pub n: usize,
}

impl PfShape {
    pub fn new(k: usize, m: usize, n: usize) -> Result<Self, PfError> {
        if k == 0 || m == 0 || n == 0 || k * n > u8::MAX as usize {
            return Err(PfError::Shape { k, m, n });
        }
        Ok(Self { k, m, n })
    }

    pub fn range(&self) -> Vec<u8> {
        (1..=(self.k * self.n) as u8).collect()
    }

    pub fn ground(&self) -> Vec<Vec<u8>> {
        vec![self.range(); self.m]
    }

    pub fn block_indices(&self) -> Vec<Vec<Vec<u8>>> {
        let r = self.range();
        (0..self.m).map(|_| subsets(&r, self.k)).multi_cartesian_product().collect()
    }
}

/// `b_I` in component `comp` named `name`.
pub fn pf_gen(comp: u8, name: char, blocks: &[Vec<u8>]) -> GenId {
    GenId::new(comp, name, blocks.concat())
}

pub fn pf_entry(comp: u8, name: char) -> impl Fn(&[Vec<u8>]) -> NCPoly {
    move |blocks| NCPoly::gen(pf_gen(comp, name, blocks))
}

/// The Cartan factor of the defining relations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum HypfConvention {
    /// `q^{k^2}`; equivalent to the displayed factor for even `k`.
    #[default]
    Unsigned,
    /// `(-q)^{k^2}`.
    Displayed,
}

/// Splittings `I ⊔ J = K` componentwise with `|I_t| = k` and `min I_1 < min J_1`.
fn half_splittings(kset: &[Vec<u8>], k: usize) -> Vec<(Vec<Vec<u8>>, Vec<Vec<u8>>)> {
    let choices: Vec<Vec<Vec<u8>>> = kset
        .iter()
        .enumerate()
        .map(|(t, s)| subsets(s, k).into_iter().filter(|i| t != 0 || i[0] == s[0]).collect())
        .collect();
    choices
        .into_iter()
        .multi_cartesian_product()
        .map(|is| {
            let js = is.iter().zip(kset).map(|(i, s)| complement(s, i)).collect();
            (is, js)
        })
        .collect()
}

fn neg_q(e: usize) -> RationalFn {
    RationalFn::neg_q_pow(e as i64)
}

/// One relation per `K = K_1 x .. x K_m` with `|K_t| = 2k`:
/// `c sum (-q)^{inv(I,J)} b_I b_J - sum (-q)^{inv(J,I)} b_J b_I`.
pub fn hypf_relations(shape: &PfShape, comp: u8, name: char, conv: HypfConvention) -> RelationSet {
    let mut out = RelationSet::new();
    if shape.n < 2 {
        return out;
    }
    let k2 = (shape.k * shape.k) as i64;
    let c = match conv {
        HypfConvention::Unsigned => RationalFn::q_pow(k2),
        HypfConvention::Displayed => RationalFn::neg_q_pow(k2),
    };
    let b = pf_entry(comp, name);
    let r = shape.range();
    for kset in (0..shape.m).map(|_| subsets(&r, 2 * shape.k)).multi_cartesian_product() {
        let mut lhs = NCPoly::zero();
        let mut rhs = NCPoly::zero();
        for (i, j) in half_splittings(&kset, shape.k) {
            lhs.add_scaled(&(&b(&i) * &b(&j)), &neg_q(inv_blocks(&i, &j).unwrap()));
            rhs.add_scaled(&(&b(&j) * &b(&i)), &neg_q(inv_blocks(&j, &i).unwrap()));
        }
        out.push(&lhs.scale(&c) - &rhs);
    }
    out
}

/// `sum over m-tuples of block arrangements of (-q)^{inversions} prod_i b_{blocks_i}`.
fn arrangement_sum(k: usize, sets: &[Vec<u8>], minima: bool, entry: &dyn Fn(&[Vec<u8>]) -> NCPoly) -> NCPoly {
    if sets.iter().all(Vec::is_empty) {
        return NCPoly::one();
    }
    let per_axis: Vec<Vec<(Vec<Vec<u8>>, usize)>> =
        sets.iter().enumerate().map(|(t, s)| block_arrangements(s, k, minima && t == 0)).collect();
    let n = sets[0].len() / k;
    let mut cache = std::collections::HashMap::new();
    let mut out = NCPoly::zero();
    for tuple in per_axis.iter().map(|a| a.iter()).multi_cartesian_product() {
        let inv: usize = tuple.iter().map(|(_, e)| e).sum();
        let mut term = NCPoly::constant(neg_q(inv));
        for i in 0..n {
            let blocks: Vec<Vec<u8>> = tuple.iter().map(|(bl, _)| bl[i].clone()).collect();
            let e = cache.entry(blocks.clone()).or_insert_with(|| entry(&blocks));
            term = &term * &*e;
        }
        out += &term;
    }
    out
}

fn check_sets(k: usize, sets: &[Vec<u8>]) -> Result<usize, PfError> {
    let len = sets.first().map(Vec::len).unwrap_or(0);
    if k == 0 || sets.is_empty() || !len.is_multiple_of(k) || sets.iter().any(|s| s.len() != len) {
        return Err(PfError::Shape { k, m: sets.len(), n: len / k.max(1) });
    }
    Ok(len / k)
}

/// `Pf'` with block minima of the first axis increasing.
pub fn pf_prime_on(k: usize, sets: &[Vec<u8>], entry: &dyn Fn(&[Vec<u8>]) -> NCPoly) -> Result<NCPoly, PfError> {
    check_sets(k, sets)?;
    Ok(arrangement_sum(k, sets, true, entry))
}

/// The full arrangement sum divided by `[n]_{q^{k^2}}!`.
pub fn pf_full_on(k: usize, sets: &[Vec<u8>], entry: &dyn Fn(&[Vec<u8>]) -> NCPoly) -> Result<NCPoly, PfError> {
    let n = check_sets(k, sets)?;
    let c = RationalFn::from_laurent(qfact(n as u32, (k * k) as u32)).inv().expect("nonzero");
    Ok(arrangement_sum(k, sets, false, entry).scale(&c))
}

/// Exponent `sum of ranks of I_t inside sets_t - k(k+1)m/2`.
fn rank_exponent(sets: &[Vec<u8>], blocks: &[Vec<u8>]) -> i64 {
    let k = blocks[0].len() as i64;
    let ranks: i64 = blocks
        .iter()
        .zip(sets)
        .map(|(b, s)| b.iter().map(|x| s.iter().position(|y| y == x).unwrap() as i64 + 1).sum::<i64>())
        .sum();
    ranks - k * (k + 1) * blocks.len() as i64 / 2
}

/// Expansion along the block holding the smallest first-axis index; the
/// complement is relabeled order-preservingly, so exponents use ranks.
pub fn pf_recursive_on(k: usize, sets: &[Vec<u8>], entry: &dyn Fn(&[Vec<u8>]) -> NCPoly) -> Result<NCPoly, PfError> {
    check_sets(k, sets)?;
    Ok(recursive(k, sets, entry))
}

fn recursive(k: usize, sets: &[Vec<u8>], entry: &dyn Fn(&[Vec<u8>]) -> NCPoly) -> NCPoly {
    if sets[0].is_empty() {
        return NCPoly::one();
    }
    let mut out = NCPoly::zero();
    for blocks in lemma_blocks(k, sets, true) {
        let rest: Vec<Vec<u8>> = sets.iter().zip(&blocks).map(|(s, b)| complement(s, b)).collect();
        let term = &entry(&blocks) * &recursive(k, &rest, entry);
        out.add_scaled(&term, &RationalFn::neg_q_pow(rank_exponent(sets, &blocks)));
    }
    out
}

fn lemma_blocks(k: usize, sets: &[Vec<u8>], first_min: bool) -> Vec<Vec<Vec<u8>>> {
    sets.iter()
        .enumerate()
        .map(|(t, s)| subsets(s, k).into_iter().filter(|b| !(first_min && t == 0) || b[0] == s[0]).collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect()
}

pub fn pf_prime(shape: &PfShape, comp: u8, name: char) -> NCPoly {
    arrangement_sum(shape.k, &shape.ground(), true, &pf_entry(comp, name))
}

pub fn pf_full(shape: &PfShape, comp: u8, name: char) -> NCPoly {
    pf_full_on(shape.k, &shape.ground(), &pf_entry(comp, name)).expect("valid shape")
}

pub fn pf_recursive(shape: &PfShape, comp: u8, name: char) -> NCPoly {
    recursive(shape.k, &shape.ground(), &pf_entry(comp, name))
}

/// `sum_I (-q)^{sum i - k(k+1)m/2} b_I Pf'(B_{I^c}) - [n]_{q^{k^2}} Pf'(B)`, `I` unconstrained.
pub fn pf_lemma_poly(shape: &PfShape, comp: u8, name: char) -> NCPoly {
    let sets = shape.ground();
    let b = pf_entry(comp, name);
    let mut lhs = NCPoly::zero();
    for blocks in lemma_blocks(shape.k, &sets, false) {
        let rest: Vec<Vec<u8>> = sets.iter().zip(&blocks).map(|(s, bl)| complement(s, bl)).collect();
        let term = &b(&blocks) * &arrangement_sum(shape.k, &rest, true, &b);
        lhs.add_scaled(&term, &RationalFn::neg_q_pow(rank_exponent(&sets, &blocks)));
    }
    let c = RationalFn::from_laurent(crate::qseries::qnum(shape.n as u32, (shape.k * shape.k) as u32));
    &lhs - &pf_prime(shape, comp, name).scale(&c)
}

/// Where the `q`-binomial of the Laplace expansion sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LaplacePlacement {
    /// Right side multiplied by the `q`-binomial.
    Multiply,
    /// Right side divided by the `q`-binomial.
    Divide,
}

/// `Pf(B) - c sum_I (-q)^{inv(I, I^c)} Pf(B_I) Pf(B_{I^c})` with `|I_t| = tk`.
pub fn pf_laplace_poly(
    shape: &PfShape,
    t: usize,
    placement: LaplacePlacement,
    comp: u8,
    name: char,
) -> Result<NCPoly, PfError> {
    if t > shape.n {
        return Err(PfError::Range { t, n: shape.n });
    }
    let base = (shape.k * shape.k) as u32;
    let binom = qbinom(shape.n as u32, t as u32, base).expect("t <= n");
    let c = match placement {
        LaplacePlacement::Multiply => binom,
        LaplacePlacement::Divide => binom.inv().expect("nonzero"),
    };
    let sets = shape.ground();
    let b = pf_entry(comp, name);
    let mut sum = NCPoly::zero();
    for is in sets.iter().map(|s| subsets(s, t * shape.k)).multi_cartesian_product() {
        let ic: Vec<Vec<u8>> = sets.iter().zip(&is).map(|(s, i)| complement(s, i)).collect();
        let term = &pf_full_on(shape.k, &is, &b)? * &pf_full_on(shape.k, &ic, &b)?;
        sum.add_scaled(&term, &neg_q(inv_blocks(&is, &ic).unwrap()));
    }
    Ok(&pf_full(shape, comp, name) - &sum.scale(&c))
}

/// `[pn]_{q^{k'^2}}! / (([p]_{q^{k'^2}}!)^n [n]_{q^{k^2}}!)`.
pub fn composition_constant(kprime: usize, p: usize, n: usize) -> RationalFn {
    let b1 = (kprime * kprime) as u32;
    let b2 = (p * kprime * p * kprime) as u32;
    let mut den = LaurentV::one();
    for _ in 0..n {
        den = &den * &qfact(p as u32, b1);
    }
    den = &den * &qfact(n as u32, b2);
    RationalFn::new(qfact((p * n) as u32, b1), den).expect("nonzero")
}

/// Outer `Pf^{[pk', m]}` of the inner `Pf^{[k', m]}(B_J)` minus the composition constant times `Pf^{[k', m]}(B)`.
pub fn pf_compose_poly(kprime: usize, p: usize, m: usize, n: usize, comp: u8, name: char) -> Result<NCPoly, PfError> {
    let k = kprime * p;
    let shape = PfShape::new(k, m, n)?;
    let b = pf_entry(comp, name);
    let inner = |blocks: &[Vec<u8>]| pf_full_on(kprime, blocks, &b).expect("block sizes divide");
    let outer = pf_full_on(k, &shape.ground(), &inner)?;
    let base = pf_full_on(kprime, &shape.ground(), &b)?;
    Ok(&outer - &base.scale(&composition_constant(kprime, p, n)))
}

/// `c_I = sum_J b_J xi(J, I_1, .., I_{m-1})` over sorted `k`-subsets `J`; `b` is any entry function.
pub fn bridge_c_entry(alg: &HyperAlgebra, k: usize, b: &dyn Fn(&[u8]) -> NCPoly, blocks: &[Vec<u8>]) -> Result<NCPoly, PfError> {
    let size = alg.shape().cube_size()?;
    if !(size as usize).is_multiple_of(k) || blocks.len() + 1 != alg.m() {
        return Err(PfError::Shape { k, m: alg.m(), n: size as usize / k.max(1) });
    }
    let r: Vec<u8> = (1..=size).collect();
    let mut out = NCPoly::zero();
    for j in subsets(&r, k) {
        let bj = b(&j);
        if bj.is_zero() {
            continue;
        }
        let mut sets = vec![j];
        sets.extend(blocks.iter().cloned());
        out += &(&bj * &minor_xi(alg, &sets)?);
    }
    Ok(out)
}

/// `b_{2i-1, 2i} = 1`, every other entry `0`.
pub fn canonical_symplectic_b(j: &[u8]) -> NCPoly {
    if j.len() == 2 && j[0] % 2 == 1 && j[1] == j[0] + 1 {
        NCPoly::one()
    } else {
        NCPoly::zero()
    }
}

/// `Pf^{[k, m-1]}(C) - Det_q(A) Pf^{[k, 1]}(B)` with `b` free in component `b_comp`.
pub fn pf_det_bridge_poly(alg: &HyperAlgebra, k: usize, b_comp: u8) -> Result<NCPoly, PfError> {
    let size = alg.shape().cube_size()? as usize;
    if alg.m() < 2 || !size.is_multiple_of(k) {
        return Err(PfError::Shape { k, m: alg.m(), n: size / k.max(1) });
    }
    let b = |j: &[u8]| NCPoly::gen(GenId::new(b_comp, 'b', j.to_vec()));
    let c = |blocks: &[Vec<u8>]| bridge_c_entry(alg, k, &b, blocks).expect("shape checked");
    let r: Vec<u8> = (1..=size as u8).collect();
    let lhs = pf_full_on(k, &vec![r.clone(); alg.m() - 1], &c)?;
    let pf_b = pf_full_on(k, &[r], &|blocks: &[Vec<u8>]| b(&blocks[0]))?;
    Ok(&lhs - &(&hyperdet_fixed(alg, 1)? * &pf_b))
}

/// `Det_q(A) - Pf^{[2, m-1]}(C)` under the canonical symplectic `b`.
pub fn det_as_pf_poly(alg: &HyperAlgebra) -> Result<NCPoly, PfError> {
    let size = alg.shape().cube_size()?;
    if alg.m() < 2 || size % 2 != 0 {
        return Err(PfError::Shape { k: 2, m: alg.m(), n: size as usize / 2 });
    }
    let c = |blocks: &[Vec<u8>]| bridge_c_entry(alg, 2, &canonical_symplectic_b, blocks).expect("shape checked");
    let r: Vec<u8> = (1..=size).collect();
    let pf = pf_full_on(2, &vec![r; alg.m() - 1], &c)?;
    Ok(&hyperdet_fixed(alg, 1)? - &pf)
}

/// `([n]_{q^2}!)^{n-1} ([k]_q!)^n [n]_{q^{k^2}}! / (([n]_q!)^{n-1} [kn]_q!)`.
pub fn det_pf_constant(k: usize, n: usize) -> RationalFn {
    let (k32, n32) = (k as u32, n as u32);
    let mut num = LaurentV::one();
    let mut den = LaurentV::one();
    for _ in 1..n {
        num = &num * &qfact(n32, 2);
        den = &den * &qfact(n32, 1);
    }
    for _ in 0..n {
        num = &num * &qfact(k32, 1);
    }
    num = &num * &qfact(n32, k32 * k32);
    den = &den * &qfact(k32 * n32, 1);
    RationalFn::new(num, den).expect("nonzero")
}

/// `Det_q(A) - const * Pf^{[k, m]}(xi_J)` for `A` of size `kn`.
pub fn det_pf_constant_poly(alg: &HyperAlgebra, k: usize) -> Result<NCPoly, PfError> {
    let size = alg.shape().cube_size()? as usize;
    if !size.is_multiple_of(k) {
        return Err(PfError::Shape { k, m: alg.m(), n: size / k.max(1) });
    }
    let n = size / k;
    let xi = |blocks: &[Vec<u8>]| minor_xi(alg, blocks).expect("blocks in range");
    let pf = pf_full_on(k, &vec![(1..=size as u8).collect(); alg.m()], &xi)?;
    Ok(&hyperdet_fixed(alg, 1)? - &pf.scale(&det_pf_constant(k, n)))
}
