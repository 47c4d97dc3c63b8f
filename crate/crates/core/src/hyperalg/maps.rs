//! Maps out of hypermatrix algebras and the classical (commutative) counterparts.

use std::collections::HashMap;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{HyperAlgebra, HyperError, HyperShape};
use crate::ncalg::{permutations, GenId, NCPoly, Word};
use crate::qmatrix::QMatrixContext;
use crate::qseries::RationalFn;

/// `a_{i_1..i_2m} -> a_{i_1 i_2} ⊗ .. ⊗ a_{i_{2m-1} i_{2m}}`, factor `s` in component `s`.
pub fn phi_map(p: &NCPoly, alg: &HyperAlgebra) -> Result<NCPoly, HyperError> {
    if !alg.m().is_multiple_of(2) {
        return Err(HyperError::Precondition(format!("phi needs an even number of axes, got {}", alg.m())));
    }
    let mut bad = None;
    let out = p.substitute(|g| {
        if g.comp != alg.comp || g.name != alg.name || g.arity() != alg.m() {
            bad = Some(g.clone());
            return NCPoly::zero();
        }
        let letters = g.idx.chunks(2).enumerate().map(|(s, c)| GenId::new(s as u8, alg.name, c.to_vec())).collect();
        NCPoly::word(Word::new(letters))
    });
    match bad {
        Some(g) => Err(HyperError::Index(g.idx)),
        None => Ok(out),
    }
}

/// `a_{alpha beta} -> sum_j a_{alpha j} ⊗ a_{j beta}` with `|alpha| = split`,
/// the left factor in component 0 and the right in component 1.
pub fn delta_split(p: &NCPoly, alg: &HyperAlgebra, split: usize) -> Result<NCPoly, HyperError> {
    let n = alg.shape().cube_size()?;
    if split == 0 || split >= alg.m() {
        return Err(HyperError::Precondition(format!("split {split} not inside 1..{}", alg.m())));
    }
    Ok(p.substitute(|g| {
        if g.comp != alg.comp || g.name != alg.name {
            return NCPoly::gen(g.clone());
        }
        let (alpha, beta) = g.idx.split_at(split);
        (1..=n)
            .map(|j| {
                let mut l = alpha.to_vec();
                l.push(j);
                let mut r = vec![j];
                r.extend_from_slice(beta);
                NCPoly::word(Word::new(vec![GenId::new(0, alg.name, l), GenId::new(1, alg.name, r)]))
            })
            .sum()
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoactionSide {
    /// Quantum matrix factor in component 0, hypermatrix factor in component 1.
    Left,
    /// Hypermatrix factor in component 0, quantum matrix factor in component 1.
    Right,
}

/// The quantum matrix coaction along axis `k`.
///
/// Left: `a^{(k)}_{i alpha} -> sum_j a_{ij} ⊗ a^{(k)}_{j alpha}`.
/// Right: `a^{(k)}_{i alpha} -> sum_j a^{(k)}_{j alpha} ⊗ a_{ji}`.
pub fn coaction(p: &NCPoly, alg: &HyperAlgebra, side: CoactionSide, k: usize) -> Result<NCPoly, HyperError> {
    let n = alg.shape().cube_size()?;
    alg.realign(k, &vec![1; alg.m()])?;
    let (mc, hc) = match side {
        CoactionSide::Left => (0, 1),
        CoactionSide::Right => (1, 0),
    };
    let mat = QMatrixContext::new(n, mc, alg.name);
    let hyp = alg.in_comp(hc);
    Ok(p.substitute(|g| {
        if g.comp != alg.comp || g.name != alg.name {
            return NCPoly::gen(g.clone());
        }
        let (i, alpha) = alg.realign(k, &g.idx).expect("generator of the algebra");
        (1..=n)
            .map(|j| match side {
                CoactionSide::Left => &mat.entry(i, j) * &hyp.realigned(k, j, &alpha),
                CoactionSide::Right => &hyp.realigned(k, j, &alpha) * &mat.entry(j, i),
            })
            .sum()
    }))
}

/// `lambda` in `(1/2) P`, stored as the doubled coordinates `2 lambda_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    /// `q^{<lambda, eps_i>}` as a power of `v = q^{1/2}`.
    fn v_exp(&self, i: u8) -> i64 {
        self.0.get(i as usize - 1).copied().unwrap_or(0)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum UqGen {
    E(u8),
    F(u8),
    Weight(WeightVector),
}

/// How the Cartan factor of `Δ(e_k)` and `Δ(f_k)` is split between the tensor legs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CartanSplit {
    /// `x ⊗ q^{-h/2} + q^{h/2} ⊗ x` with `h = eps_k - eps_{k+1}`; compatible with the relations.
    #[default]
    Opposite,
    /// `x ⊗ q^{-h/2} + q^{-h/2} ⊗ x`.
    Symmetric,
}

/// Image of one letter, its weight in `v`, and the `v`-exponent of `q^{-h/2}` on it.
fn uq_letter(gen: &UqGen, side: CoactionSide, g: &GenId) -> (Option<GenId>, i64) {
    let pos = match side {
        CoactionSide::Left => g.arity() - 1,
        CoactionSide::Right => 0,
    };
    let i = g.idx[pos];
    let with = |j: u8| {
        let mut h = g.clone();
        h.idx[pos] = j;
        h
    };
    match gen {
        UqGen::Weight(w) => (Some(g.clone()), w.v_exp(i)),
        UqGen::E(k) | UqGen::F(k) => {
            let k = *k;
            let kexp = if i == k { -1 } else if i == k + 1 { 1 } else { 0 };
            let raise = matches!((gen, side), (UqGen::E(_), CoactionSide::Right) | (UqGen::F(_), CoactionSide::Left));
            let image = if raise { (i == k).then(|| with(k + 1)) } else { (i == k + 1).then(|| with(k)) };
            (image, kexp)
        }
    }
}

/// `x.p` (left, acting on last indices) or `p.x` (right, acting on first indices),
/// extended to words through the coproduct; `q^lambda` is grouplike.
pub fn uq_action(gen: &UqGen, side: CoactionSide, split: CartanSplit, p: &NCPoly) -> NCPoly {
    let mut out = NCPoly::zero();
    for (w, c) in p.terms() {
        let info: Vec<_> = w.letters().iter().map(|g| uq_letter(gen, side, g)).collect();
        if let UqGen::Weight(_) = gen {
            let e: i64 = info.iter().map(|(_, e)| e).sum();
            out.add_term(w.clone(), &(c * &RationalFn::v_pow(e)));
            continue;
        }
        let kexps: Vec<i64> = info.iter().map(|(_, e)| *e).collect();
        for (p_idx, (img, _)) in info.iter().enumerate() {
            let Some(h) = img else { continue };
            let before: i64 = kexps[..p_idx].iter().sum();
            let after: i64 = kexps[p_idx + 1..].iter().sum();
            let e = match split {
                CartanSplit::Opposite => after - before,
                CartanSplit::Symmetric => after + before,
            };
            let mut letters = w.letters().to_vec();
            letters[p_idx] = h.clone();
            out.add_term(Word::new(letters), &(c * &RationalFn::v_pow(e)));
        }
    }
    out
}

/// `(B ∘_k A)_{..i_k..} = sum_j b_{i_k j} a_{..j..}`, or with `transpose`
/// `(A ∘_k B)_{..i_k..} = sum_j a_{..j..} b_{j i_k}`, as an entry table.
pub fn circ_product(
    shape: &HyperShape,
    k: usize,
    transpose: bool,
    b: &dyn Fn(u8, u8) -> NCPoly,
    a: &dyn Fn(&[u8]) -> NCPoly,
) -> Result<HashMap<Vec<u8>, NCPoly>, HyperError> {
    let n = shape.cube_size()?;
    if k == 0 || k > shape.m() {
        return Err(HyperError::Axis { axis: k, m: shape.m() });
    }
    let mut out = HashMap::new();
    for idx in shape.indices() {
        let e: NCPoly = (1..=n)
            .map(|j| {
                let mut jdx = idx.clone();
                jdx[k - 1] = j;
                if transpose {
                    &a(&jdx) * &b(j, idx[k - 1])
                } else {
                    &b(idx[k - 1], j) * &a(&jdx)
                }
            })
            .sum();
        out.insert(idx, e);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SignConvention {
    /// `(-1)^{sum of all 2m inversion counts}`.
    #[default]
    AllAxes,
    /// `(-1)^{sum of the first m inversion counts}`.
    AsDisplayed,
}

/// Cayley's first hyperdeterminant of a commutative `n^{2m}` array.
pub fn cayley_classical(
    n: u8,
    axes: usize,
    values: &dyn Fn(&[u8]) -> BigRational,
    sign: SignConvention,
) -> Result<BigRational, HyperError> {
    if axes == 0 || !axes.is_multiple_of(2) {
        return Err(HyperError::Precondition(format!("need an even number of axes, got {axes}")));
    }
    let signed = match sign {
        SignConvention::AllAxes => axes,
        SignConvention::AsDisplayed => axes / 2,
    };
    let perms = permutations(n as usize);
    let mut total = BigRational::zero();
    for tuple in (0..axes).map(|_| perms.iter()).multi_cartesian_product() {
        let inv: usize = tuple[..signed].iter().map(|p| p.inversions()).sum();
        let mut prod = BigRational::one();
        for i in 1..=n as usize {
            let idx: Vec<u8> = tuple.iter().map(|p| p.image(i) as u8).collect();
            prod *= values(&idx);
            if prod.is_zero() {
                break;
            }
        }
        if inv.is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    let fact: u64 = (1..=n as u64).product();
    Ok(total / BigRational::from_integer(fact.into()))
}

/// `(A_k ∘_l B)`: contract axis `k` of `A` with axis `l` of `B`; remaining axes of
/// `A` come first, then those of `B`, each in order.
pub fn classical_product(
    n: u8,
    a_axes: usize,
    k: usize,
    a: &dyn Fn(&[u8]) -> BigRational,
    b_axes: usize,
    l: usize,
    b: &dyn Fn(&[u8]) -> BigRational,
) -> Result<HashMap<Vec<u8>, BigRational>, HyperError> {
    if k == 0 || k > a_axes || l == 0 || l > b_axes {
        return Err(HyperError::Precondition(format!("contraction axes {k}, {l} out of range")));
    }
    let shape = HyperShape::cube(n, a_axes + b_axes - 2);
    let mut out = HashMap::new();
    for idx in shape.indices() {
        let (ia, ib) = idx.split_at(a_axes - 1);
        let mut total = BigRational::zero();
        for j in 1..=n {
            let mut ja = ia.to_vec();
            ja.insert(k - 1, j);
            let mut jb = ib.to_vec();
            jb.insert(l - 1, j);
            total += a(&ja) * b(&jb);
        }
        out.insert(idx, total);
    }
    Ok(out)
}
