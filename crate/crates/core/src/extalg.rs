//! The quantum exterior algebra and its tensor powers with noncommutative coefficients.
//!
//! A monomial is a tuple of slots, each a subset of `[1, 31]` stored as a
//! bitmask. Coefficients commute with every `x`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::hyperalg::HyperAlgebra;
use crate::ncalg::NCPoly;
use crate::qseries::RationalFn;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtError {
    #[error("slot arity mismatch: {0} vs {1}")]
    Arity(usize, usize),
    #[error("axis {axis} out of range for {m} axes")]
    Axis { axis: usize, m: usize },
    #[error("index {0} does not fit in a slot")]
    Index(usize),
}

/// Tuple of subsets `x_{S_1} ⊗ .. ⊗ x_{S_t}`; bit `i - 1` marks index `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtMono {
    slots: Vec<u32>,
}

impl ExtMono {
    pub fn from_masks(slots: Vec<u32>) -> Self {
        Self { slots }
    }

    /// Build from per-slot index lists; duplicates collapse.
    pub fn from_sets(sets: &[Vec<u8>]) -> Result<Self, ExtError> {
        let mut slots = Vec::with_capacity(sets.len());
        for s in sets {
            let mut mask = 0u32;
            for &i in s {
                if i == 0 || i > 31 {
                    return Err(ExtError::Index(i as usize));
                }
                mask |= 1 << (i - 1);
            }
            slots.push(mask);
        }
        Ok(Self { slots })
    }

    /// `x_{[1, n]}` in each of `t` slots.
    pub fn top(n: usize, t: usize) -> Self {
        Self { slots: vec![(1u32 << n) - 1; t] }
    }

    pub fn arity(&self) -> usize {
        self.slots.len()
    }

    pub fn masks(&self) -> &[u32] {
        &self.slots
    }

    pub fn sets(&self) -> Vec<Vec<u8>> {
        self.slots.iter().map(|&m| mask_to_set(m)).collect()
    }

    /// Slotwise product: `None` on overlap, else the exponent of `-q` and the union.
    pub fn wedge(&self, other: &ExtMono) -> Option<(i64, ExtMono)> {
        let mut exp = 0i64;
        let mut slots = Vec::with_capacity(self.slots.len());
        for (&s, &t) in self.slots.iter().zip(&other.slots) {
            if s & t != 0 {
                return None;
            }
            exp += cross(s, t) as i64;
            slots.push(s | t);
        }
        Some((exp, ExtMono { slots }))
    }
}

fn mask_to_set(m: u32) -> Vec<u8> {
    (0..32).filter(|b| m >> b & 1 == 1).map(|b| b as u8 + 1).collect()
}

/// `#{(s, t) in S x T : s > t}`.
fn cross(s: u32, t: u32) -> u32 {
    let mut count = 0;
    let mut rest = t;
    while rest != 0 {
        let b = rest.trailing_zeros();
        count += (s >> b >> 1).count_ones();
        rest &= rest - 1;
    }
    count
}

impl fmt::Display for ExtMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, set) in self.sets().iter().enumerate() {
            if p > 0 {
                f.write_str("⊗")?;
            }
            let inner = set.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
            write!(f, "x{{{inner}}}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExtMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Element of `A ⊗ Λ^{⊗t}`: monomials with polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct ExtElem {
    terms: BTreeMap<ExtMono, NCPoly>,
}

impl ExtElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(mono: ExtMono, coeff: NCPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(mono, &coeff);
        out
    }

    /// The degree-zero unit with `t` empty slots.
    pub fn unit(t: usize) -> Self {
        Self::term(ExtMono::from_masks(vec![0; t]), NCPoly::one())
    }

    pub fn add_term(&mut self, mono: ExtMono, coeff: &NCPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtMono, &NCPoly)> {
        self.terms.iter()
    }

    pub fn arity(&self) -> Option<usize> {
        self.terms.keys().next().map(ExtMono::arity)
    }

    pub fn scale(&self, c: &RationalFn) -> ExtElem {
        let mut out = ExtElem::zero();
        for (m, p) in &self.terms {
            out.add_term(m.clone(), &p.scale(c));
        }
        out
    }

    pub fn add(&self, other: &ExtElem) -> ExtElem {
        let mut out = self.clone();
        for (m, p) in &other.terms {
            out.add_term(m.clone(), p);
        }
        out
    }

    /// Slotwise wedge; coefficients multiply left to right.
    pub fn wedge(&self, other: &ExtElem) -> Result<ExtElem, ExtError> {
        if let (Some(a), Some(b)) = (self.arity(), other.arity()) {
            if a != b {
                return Err(ExtError::Arity(a, b));
            }
        }
        let mut out = ExtElem::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((exp, m)) = m1.wedge(m2) {
                    out.add_term(m, &(c1 * c2).scale(&RationalFn::neg_q_pow(exp)));
                }
            }
        }
        Ok(out)
    }

    /// Prepend a slot holding `x_i` to every monomial.
    pub fn prepend_slot(&self, i: u8) -> ExtElem {
        let mut out = ExtElem::zero();
        for (m, p) in &self.terms {
            let mut slots = vec![1u32 << (i - 1)];
            slots.extend_from_slice(m.masks());
            out.add_term(ExtMono::from_masks(slots), p);
        }
        out
    }

    pub fn coeff_of(&self, mono: &ExtMono) -> NCPoly {
        self.terms.get(mono).cloned().unwrap_or_default()
    }
}

/// Left-associated `n`-fold wedge; `n = 0` gives the unit.
pub fn wedge_power(e: &ExtElem, n: usize) -> Result<ExtElem, ExtError> {
    let t = e.arity().unwrap_or(0);
    let mut acc = ExtElem::unit(t);
    for _ in 0..n {
        acc = acc.wedge(e)?;
    }
    Ok(acc)
}

/// Left-associated wedge of a sequence.
pub fn wedge_all(factors: &[ExtElem]) -> Result<ExtElem, ExtError> {
    let Some(first) = factors.first() else {
        return Ok(ExtElem::unit(0));
    };
    let mut acc = first.clone();
    for f in &factors[1..] {
        acc = acc.wedge(f)?;
    }
    Ok(acc)
}

/// `x_i^{(k)} = sum_alpha a^{(k)}_{i alpha} x_alpha` for each row `i` of axis `k`.
///
/// Slots follow the remaining axes in increasing order.
pub fn omega_vector(alg: &HyperAlgebra, k: usize) -> Result<Vec<ExtElem>, ExtError> {
    let m = alg.shape().m();
    if k == 0 || k > m {
        return Err(ExtError::Axis { axis: k, m });
    }
    let dims = alg.shape().dims();
    let mut out = vec![ExtElem::zero(); dims[k - 1] as usize];
    for idx in alg.shape().indices() {
        let i = idx[k - 1];
        let sets: Vec<Vec<u8>> =
            idx.iter().enumerate().filter(|(t, _)| *t != k - 1).map(|(_, &x)| vec![x]).collect();
        let mono = ExtMono::from_sets(&sets)?;
        out[i as usize - 1].add_term(mono, &NCPoly::gen(alg.gen(&idx)));
    }
    Ok(out)
}

/// Images of the exterior relations `x_i ∧ x_i` and `x_j ∧ x_i + q x_i ∧ x_j`
/// under `x_i -> omega_i`, as their nonzero coefficients.
pub fn wedge_relation_coefficients(alg: &HyperAlgebra, k: usize) -> Result<Vec<NCPoly>, ExtError> {
    let omega = omega_vector(alg, k)?;
    let mut out = Vec::new();
    for i in 0..omega.len() {
        for (_, c) in omega[i].wedge(&omega[i])?.terms() {
            out.push(c.clone());
        }
        for j in i + 1..omega.len() {
            let e = omega[j].wedge(&omega[i])?.add(&omega[i].wedge(&omega[j])?.scale(&RationalFn::q()));
            out.extend(e.terms().map(|(_, c)| c.clone()));
        }
    }
    Ok(out)
}

/// `x_i` in a single slot with unit coefficient.
pub fn x(i: u8) -> ExtElem {
    ExtElem::term(ExtMono::from_masks(vec![1 << (i - 1)]), NCPoly::one())
}
