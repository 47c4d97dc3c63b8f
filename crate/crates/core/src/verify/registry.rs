//! Named identity checks with default sizes.
//!
//! Every check builds one or more claimed-zero elements and decides them
//! either exactly (free-algebra equality, PBW normal forms, commutative
//! specialization) or by ideal membership.

mod checks;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::membership::{Dims, MembershipOptions, Mode, Verdict};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("unknown check id {0}")]
    UnknownId(String),
    #[error("invalid parameters: {0}")]
    Params(String),
}

/// Size and convention parameters; unset fields take the check's defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kprime: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<usize>,
    /// Axes of the second factor in a hypermatrix product.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m2: Option<usize>,
    /// Contracted axis of the second factor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis2: Option<usize>,
    /// Random instances for commutative checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    /// `opposite` or `symmetric`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cartan: Option<String>,
    /// `unsigned` or `displayed`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypf: Option<String>,
    /// `all-axes` or `as-displayed`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<String>,
}

macro_rules! merge_fields {
    ($a:expr, $b:expr, $($f:ident),*) => {
        Params { $($f: $a.$f.clone().or_else(|| $b.$f.clone())),* }
    };
}

impl Params {
    /// `self` with unset fields taken from `defaults`.
    pub fn or(&self, defaults: &Params) -> Params {
        merge_fields!(
            self, defaults, n, m, k, l, r, t, blocks, p, kprime, axis, m2, axis2, instances, cartan, hypf, sign
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckOptions {
    pub membership: MembershipOptions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub params: Params,
    pub verdict: Verdict,
    pub mode: Mode,
    pub dims: Dims,
    pub seed: u64,
    pub millis: u128,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremInfo {
    pub id: &'static str,
    pub anchor: &'static str,
    pub defaults: Params,
}

fn p() -> Params {
    Params::default()
}

fn nm(n: u8, m: usize) -> Params {
    Params { n: Some(n), m: Some(m), ..p() }
}

fn pf(k: usize, m: usize, blocks: usize) -> Params {
    Params { k: Some(k), m: Some(m), blocks: Some(blocks), ..p() }
}

/// All registered checks in a stable order, with their smallest default sizes.
pub fn registry() -> Vec<TheoremInfo> {
    let e = |id, anchor, defaults| TheoremInfo { id, anchor, defaults };
    vec![
        e("trel-equivalence", "hypermatrix relations equal wedge relations", nm(2, 3)),
        e("rea3-derived", "cross-axis realigned pair relations", nm(2, 3)),
        e("re-det", "top wedge products agree across axes", nm(2, 3)),
        e("matq-m2-consistency", "two-axis algebra is the quantum matrix algebra", nm(2, 2)),
        e("detq-row-eq-col", "quantum row and column determinants", Params { n: Some(3), ..p() }),
        e("detq-multiplicative", "quantum determinant of a product", Params { n: Some(2), ..p() }),
        e("detq-coproduct-grouplike", "quantum determinant is grouplike", Params { n: Some(2), ..p() }),
        e("hyperdet-normalized-vs-fixed", "normalized and fixed-axis hyperdeterminants", nm(2, 3)),
        e("sm-invariance-normalized", "axis permutation invariance, normalized", nm(2, 3)),
        e("sm-invariance-fixed", "axis permutation invariance, fixed axis", nm(2, 3)),
        e("hyperdet-example-2cubed", "hyperdeterminant of a 2x2x2 hypermatrix", nm(2, 3)),
        e("cayley-odd-vanish", "commutative hyperdeterminant at odd dimension", nm(2, 3)),
        e("phi-image", "pairing map onto tensor powers of quantum matrices", nm(2, 4)),
        e("delta-homomorphism", "split comultiplication is a homomorphism", Params { l: Some(1), ..nm(2, 1) }),
        e("delta-laplace", "split comultiplication of minors", Params { l: Some(1), ..nm(2, 1) }),
        e("row-laplace", "row expansion with repeated first indices", nm(2, 3)),
        e("minor-laplace", "Laplace expansion along the first axis", nm(2, 3)),
        e("pluecker-thp1a", "quadratic minor identity, forward order", Params { r: Some(1), ..nm(2, 2) }),
        e("pluecker-thp1b", "quadratic minor identity, reverse order", Params { r: Some(1), ..nm(2, 2) }),
        e("pluecker-thp3", "quadratic minor exchange identity", Params { r: Some(1), ..nm(2, 2) }),
        e("coaction-left-det", "left quantum matrix coaction on the hyperdeterminant", nm(2, 2)),
        e("coaction-right-det", "right quantum matrix coaction on the hyperdeterminant", nm(2, 2)),
        e("uq-e-annihilates", "raising operators kill the hyperdeterminant", nm(2, 2)),
        e("uq-f-annihilates", "lowering operators kill the hyperdeterminant", nm(2, 2)),
        e("uq-weight", "hyperdeterminant is a weight vector", nm(2, 2)),
        e("pf-equivalence", "full and reduced hyper-Pfaffians", pf(1, 2, 2)),
        e("pf-lemma-equiv", "first-block expansion of the hyper-Pfaffian", pf(2, 1, 2)),
        e("pf-laplace", "Laplace expansion of the hyper-Pfaffian", Params { t: Some(1), ..pf(1, 1, 2) }),
        e("pf-composition", "hyper-Pfaffian of sub-Pfaffians", Params { kprime: Some(1), p: Some(2), ..pf(2, 1, 1) }),
        e("pf-det-bridge", "hyper-Pfaffian of minor contractions", pf(2, 2, 1)),
        e("det-as-pf-corollary", "hyperdeterminant as a hyper-Pfaffian", pf(2, 3, 1)),
        e("det-pf-constant", "hyperdeterminant as a hyper-Pfaffian of minors", pf(2, 2, 1)),
        e("circ-invariance-quantum", "quantum hyperdeterminant of a matrix action", Params { k: Some(1), ..nm(2, 3) }),
        e(
            "circ-invariance-classical",
            "Cayley hyperdeterminant of a matrix action",
            Params { k: Some(1), instances: Some(50), ..nm(2, 4) },
        ),
        e(
            "classical-product-invariance",
            "Cayley hyperdeterminant of a hypermatrix product",
            Params { axis: Some(1), m2: Some(4), axis2: Some(1), instances: Some(20), ..nm(2, 4) },
        ),
    ]
}

pub fn lookup(id: &str) -> Option<TheoremInfo> {
    registry().into_iter().find(|t| t.id == id)
}

/// Run the check `id` with `params` over its defaults.
pub fn check_theorem(id: &str, params: &Params, opts: &CheckOptions) -> Result<CheckReport, CheckError> {
    let info = lookup(id).ok_or_else(|| CheckError::UnknownId(id.to_string()))?;
    let params = params.or(&info.defaults);
    let start = Instant::now();
    let mut run = checks::Run::new(opts);
    checks::dispatch(id, &params, &mut run)?;
    let (verdict, mode, dims, notes) = run.finish();
    Ok(CheckReport {
        id: id.to_string(),
        params,
        verdict,
        mode,
        dims,
        seed: opts.membership.seed,
        millis: start.elapsed().as_millis(),
        notes,
    })
}
