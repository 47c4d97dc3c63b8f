//! Laplace and Plücker type identities, returned as claimed-zero differences.

use itertools::Itertools;

use super::{hyperdet_fixed, minor_xi, perm_tuple_sum, Entries, HyperAlgebra, HyperError};
use crate::ncalg::{complement, ell_subset, seq_inversions, subsets, NCPoly};
use crate::qseries::RationalFn;

/// `sum_{sigma_2..sigma_m} (-q)^{sum l} prod_i a_{j_i, sigma_2(i), ..}` minus
/// `(-q)^{l(j)} Det_q` when the `j_i` are distinct, or minus nothing otherwise.
pub fn laplace_row_poly(alg: &HyperAlgebra, rows: &[u8]) -> Result<NCPoly, HyperError> {
    let n = alg.shape().cube_size()?;
    if rows.len() != n as usize || rows.iter().any(|&j| j == 0 || j > n) {
        return Err(HyperError::Index(rows.to_vec()));
    }
    let mut sets = vec![(1..=n).collect::<Vec<u8>>(); alg.m()];
    sets[0] = rows.to_vec();
    let free: Vec<bool> = (0..alg.m()).map(|t| t != 0).collect();
    let f = |i: &[u8]| alg.entry(i);
    let lhs = perm_tuple_sum(&sets, &free, &mut Entries::new(&f));
    if rows.iter().all_unique() {
        let det = hyperdet_fixed(alg, 1)?;
        Ok(&lhs - &det.scale(&RationalFn::neg_q_pow(seq_inversions(rows) as i64)))
    } else {
        Ok(lhs)
    }
}

/// `sum_{I_2..I_m} (-q)^{sum_{t>=2} l(I_t) - l(I_1)} xi(I) xi(I') - Det_q` for a
/// fixed `r`-subset `I_1` of the first axis.
pub fn laplace_minor_poly(alg: &HyperAlgebra, first: &[u8]) -> Result<NCPoly, HyperError> {
    let n = alg.shape().cube_size()?;
    let full: Vec<u8> = (1..=n).collect();
    let r = first.len();
    if r == 0 || r >= n as usize {
        return Err(HyperError::Precondition(format!("need 1 <= r < n, got r = {r}")));
    }
    let first_c = complement(&full, first);
    let mut sum = NCPoly::zero();
    for rest in (1..alg.m()).map(|_| subsets(&full, r)).multi_cartesian_product() {
        let mut sets = vec![first.to_vec()];
        sets.extend(rest.iter().cloned());
        let mut sets_c = vec![first_c.clone()];
        sets_c.extend(rest.iter().map(|s| complement(&full, s)));
        let exp = rest.iter().map(|s| ell_subset(s)).sum::<i64>() - ell_subset(first);
        let term = &minor_xi(alg, &sets)? * &minor_xi(alg, &sets_c)?;
        sum.add_scaled(&term, &RationalFn::neg_q_pow(exp));
    }
    Ok(&sum - &hyperdet_fixed(alg, 1)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlueckerVariant {
    /// `sum_K (-q)^{sum l} xi(I, K) xi(I, K')`.
    Thp1A,
    /// `sum_K (-q)^{-sum l} xi(I, K') xi(I, K)`.
    Thp1B,
    /// The exchange of `I' = [n+1, 2n]` and `I = [1, n]`, as a difference.
    Thp3,
}

impl std::str::FromStr for PlueckerVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "thp1a" | "thp1_a" => Ok(Self::Thp1A),
            "thp1b" | "thp1_b" => Ok(Self::Thp1B),
            "thp3" => Ok(Self::Thp3),
            _ => Err(format!("unknown Plücker variant {s}")),
        }
    }
}

/// Tuples `(K_2, .., K_m)` of `n`-subsets of `[1, 2n]` with `[1, r] ⊆ K_2`.
fn pluecker_tuples(n: u8, m: usize, r: u8) -> Vec<Vec<Vec<u8>>> {
    let full: Vec<u8> = (1..=2 * n).collect();
    let all = subsets(&full, n as usize);
    (1..m)
        .map(|t| {
            all.iter().filter(|k| t != 1 || (1..=r).all(|x| k.contains(&x))).cloned().collect::<Vec<_>>()
        })
        .multi_cartesian_product()
        .collect()
}

/// Quadratic minor sums on a `(2n)^m` algebra with `1 <= r < n`.
pub fn pluecker_poly(alg: &HyperAlgebra, variant: PlueckerVariant, r: u8) -> Result<NCPoly, HyperError> {
    let size = alg.shape().cube_size()?;
    if size % 2 != 0 || alg.m() < 2 {
        return Err(HyperError::Precondition(format!("need an even cube with m >= 2, got {:?}", alg.shape().dims())));
    }
    let n = size / 2;
    if r == 0 || r >= n {
        return Err(HyperError::Precondition(format!("need 1 <= r < n, got r = {r}, n = {n}")));
    }
    let full: Vec<u8> = (1..=size).collect();
    let low: Vec<u8> = (1..=n).collect();
    let high: Vec<u8> = (n + 1..=size).collect();
    let xi = |first: &[u8], ks: &[Vec<u8>]| -> Result<NCPoly, HyperError> {
        let mut sets = vec![first.to_vec()];
        sets.extend(ks.iter().cloned());
        minor_xi(alg, &sets)
    };
    let n2 = (n as i64) * (n as i64);
    let mut lhs = NCPoly::zero();
    let mut rhs = NCPoly::zero();
    for ks in pluecker_tuples(n, alg.m(), r) {
        let kc: Vec<Vec<u8>> = ks.iter().map(|k| complement(&full, k)).collect();
        let ell: i64 = ks.iter().map(|k| ell_subset(k)).sum();
        match variant {
            PlueckerVariant::Thp1A => {
                lhs.add_scaled(&(&xi(&low, &ks)? * &xi(&low, &kc)?), &RationalFn::neg_q_pow(ell));
            }
            PlueckerVariant::Thp1B => {
                lhs.add_scaled(&(&xi(&low, &kc)? * &xi(&low, &ks)?), &RationalFn::neg_q_pow(-ell));
            }
            PlueckerVariant::Thp3 => {
                lhs.add_scaled(&(&xi(&high, &ks)? * &xi(&low, &kc)?), &RationalFn::neg_q_pow(ell));
                let e = ks.len() as i64 * n2 - ell;
                rhs.add_scaled(&(&xi(&low, &kc)? * &xi(&high, &ks)?), &RationalFn::neg_q_pow(e));
            }
        }
    }
    let shift = n2 - 2 * (n as i64) * (r as i64);
    Ok(&lhs - &rhs.scale(&RationalFn::neg_q_pow(shift)))
}
