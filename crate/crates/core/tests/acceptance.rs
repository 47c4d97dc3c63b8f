//! Acceptance criteria 1 to 12, one PASS/FAIL line each.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qhyper_core::extalg::wedge_relation_coefficients;
use qhyper_core::hyperalg::{
    cayley_classical, hyperdet_normalized, relations_axis, HyperAlgebra, HyperShape, RelationSet, SignConvention,
};
use qhyper_core::ncalg::text::{parse, render_text};
use qhyper_core::pfaffian::{pf_prime, pf_recursive, PfShape};
use qhyper_core::qmatrix::{det_q_col, det_q_row, normal_form, normal_form_random, QMatrixContext};
use qhyper_core::verify::{check_theorem, CheckOptions, CheckReport, MembershipOptions, Mode, Params, Verdict};
use qhyper_core::{GenId, NCPoly, RationalFn, Word};

const GOLDEN: &str = "a[1,1,1].a[2,2,2] - q*a[2,1,1].a[1,2,2] - q*a[1,2,1].a[2,1,2] - q*a[1,1,2].a[2,2,1] \
    + q^2*a[2,2,1].a[1,1,2] + q^2*a[2,1,2].a[1,2,1] + q^2*a[1,2,2].a[2,1,1] - q^3*a[2,2,2].a[1,1,1]";

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn opts(mode: Mode) -> CheckOptions {
    CheckOptions { membership: MembershipOptions { mode, ..MembershipOptions::default() } }
}

fn params(f: impl FnOnce(&mut Params)) -> Params {
    let mut p = Params::default();
    f(&mut p);
    p
}

fn nm(n: u8, m: usize) -> Params {
    params(|p| {
        p.n = Some(n);
        p.m = Some(m);
    })
}

fn pfp(k: usize, m: usize, blocks: usize) -> Params {
    params(|p| {
        p.k = Some(k);
        p.m = Some(m);
        p.blocks = Some(blocks);
    })
}

fn run(id: &str, p: &Params, mode: Mode) -> CheckReport {
    check_theorem(id, p, &opts(mode)).unwrap_or_else(|e| panic!("{id}: {e}"))
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Independent Cayley hyperdeterminant: signs over all axes, divided by `n!`.
fn cayley_oracle(n: usize, axes: usize, a: &HashMap<Vec<u8>, BigRational>) -> BigRational {
    let perms: Vec<Vec<u8>> = (1..=n as u8).permutations(n).collect();
    let parity = |p: &Vec<u8>| (0..n).tuple_combinations().filter(|&(i, j)| p[i] > p[j]).count();
    let mut total = BigRational::zero();
    for tuple in (0..axes).map(|_| perms.iter()).multi_cartesian_product() {
        let inv: usize = tuple.iter().map(|p| parity(p)).sum();
        let mut prod = BigRational::one();
        for i in 0..n {
            let idx: Vec<u8> = tuple.iter().map(|p| p[i]).collect();
            prod *= &a[&idx];
        }
        if inv.is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    let fact: i64 = (1..=n as i64).product();
    total / rat(fact)
}

fn random_array(rng: &mut ChaCha8Rng, n: u8, axes: usize) -> HashMap<Vec<u8>, BigRational> {
    HyperShape::cube(n, axes).indices().into_iter().map(|i| (i, rat(rng.gen_range(-6..=6)))).collect()
}

fn criterion_1() -> Outcome {
    let norm = hyperdet_normalized(&HyperAlgebra::cube(2, 3)).unwrap();
    let two = RationalFn::from(qhyper_core::qnum(2, 2));
    let got = render_text(&norm.scale(&two));
    let want = render_text(&parse(GOLDEN).unwrap());
    outcome(got == want, format!("{} terms", parse(GOLDEN).unwrap().len()))
}

fn criterion_2() -> Outcome {
    let golden = parse(GOLDEN).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let one = BigRational::one();
    let mut zero_count = 0;
    for _ in 0..100 {
        let vals: HashMap<GenId, BigRational> =
            golden.alphabet().into_iter().map(|g| (g, rat(rng.gen_range(-9..=9)))).collect();
        if golden.specialize_commutative(|g| vals.get(g).cloned(), &one).unwrap().is_zero() {
            zero_count += 1;
        }
    }
    let alg = HyperAlgebra::cube(2, 4);
    let norm = hyperdet_normalized(&alg).unwrap();
    let mut agree = 0;
    for _ in 0..20 {
        let a = random_array(&mut rng, 2, 4);
        let special = norm.specialize_commutative(|g| a.get(&g.idx).cloned(), &one).unwrap();
        let oracle = cayley_oracle(2, 4, &a);
        let library = cayley_classical(2, 4, &|i| a[i].clone(), SignConvention::AllAxes).unwrap();
        if special == oracle && library == oracle {
            agree += 1;
        }
    }
    outcome(zero_count == 100 && agree == 20, format!("{zero_count}/100 vanish at q=1, {agree}/20 match Cayley on 2^4"))
}

fn random_word(rng: &mut ChaCha8Rng, ctx: &QMatrixContext, n: u8, len: usize) -> NCPoly {
    let letters = (0..len).map(|_| ctx.gen(rng.gen_range(1..=n), rng.gen_range(1..=n))).collect();
    NCPoly::word(Word::new(letters))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut agree = 0;
    let mut total = 0;
    for n in [2u8, 3] {
        let ctx = QMatrixContext::new(n, 0, 'a');
        for _ in 0..200 {
            let w = random_word(&mut rng, &ctx, n, 3);
            total += 1;
            if normal_form_random(&w, &[ctx], &mut rng) == normal_form(&w, &[ctx]) {
                agree += 1;
            }
        }
    }
    let row_col = [2u8, 3].iter().all(|&n| {
        let d = &det_q_row(n, 0, 'a') - &det_q_col(n, 0, 'a');
        normal_form(&d, &[QMatrixContext::new(n, 0, 'a')]).is_zero()
    });
    let mut mult = Vec::new();
    for (n, limit) in [(2u8, Duration::from_secs(10)), (3, Duration::from_secs(600))] {
        let start = Instant::now();
        let r = run("detq-multiplicative", &params(|p| p.n = Some(n)), Mode::Auto);
        mult.push(r.exit_code() == 0 && start.elapsed() < limit);
    }
    let ok = agree == total && row_col && mult.iter().all(|x| *x);
    outcome(ok, format!("confluence {agree}/{total}, row=col {row_col}, multiplicative {mult:?}"))
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    for n in [2u8, 3] {
        for m in [2usize, 3] {
            let alg = HyperAlgebra::cube(n, m);
            for k in 1..=m {
                let wedge: RelationSet = wedge_relation_coefficients(&alg, k).unwrap().into_iter().collect();
                if !wedge.same_members(&relations_axis(&alg, k).unwrap()) {
                    bad.push((n, m, k));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("mismatches {bad:?}"))
}

fn criterion_5() -> Outcome {
    let ids = ["re-det", "hyperdet-normalized-vs-fixed", "sm-invariance-fixed", "row-laplace", "minor-laplace"];
    let verdicts: Vec<String> = ids.iter().map(|id| run(id, &nm(2, 3), Mode::Exact).verdict.label().to_string()).collect();
    outcome(verdicts.iter().all(|v| v == "member_exact"), format!("{verdicts:?}"))
}

fn criterion_6() -> Outcome {
    let mut labels = Vec::new();
    let mut ok = true;
    for id in ["pluecker-thp1a", "pluecker-thp1b", "pluecker-thp3"] {
        let spec = run(id, &nm(2, 2), Mode::Specialize);
        let q0s = match &spec.verdict {
            Verdict::MemberSpecialized { q0s } => q0s.len(),
            _ => 0,
        };
        let exact = run(id, &nm(2, 2), Mode::Exact);
        ok &= q0s == 3 && exact.verdict == Verdict::MemberExact;
        labels.push(format!("{id}: {} / {}", spec.verdict.label(), exact.verdict.label()));
    }
    outcome(ok, labels.join(", "))
}

fn criterion_7() -> Outcome {
    let delta = params(|p| {
        p.n = Some(2);
        p.m = Some(1);
        p.l = Some(1);
    });
    let checks = [
        ("delta-homomorphism", delta.clone()),
        ("delta-laplace", delta),
        ("coaction-left-det", nm(2, 2)),
        ("coaction-right-det", nm(2, 2)),
    ];
    let results: Vec<(String, bool)> = checks
        .iter()
        .map(|(id, p)| {
            let r = run(id, p, Mode::Auto);
            (format!("{id}: {}", r.verdict.label()), r.verdict.holds())
        })
        .collect();
    outcome(results.iter().all(|(_, h)| *h), results.iter().map(|(s, _)| s.as_str()).join(", "))
}

fn criterion_8() -> Outcome {
    let mut ok = true;
    let mut log = Vec::new();
    for n in [2u8, 3] {
        for m in [2usize, 3] {
            ok &= run("uq-weight", &nm(n, m), Mode::Exact).verdict == Verdict::ExactZero;
            for id in ["uq-e-annihilates", "uq-f-annihilates"] {
                let v = run(id, &nm(n, m), Mode::Exact).verdict;
                ok &= matches!(v, Verdict::ExactZero | Verdict::MemberExact | Verdict::MemberSpecialized { .. });
                log.push(format!("{id}({n},{m})={}", v.label()));
            }
        }
    }
    outcome(ok, log.join(" "))
}

fn criterion_9() -> Outcome {
    let shapes = [(1, 1, 2), (1, 1, 3), (2, 1, 2), (1, 2, 2), (2, 2, 1)];
    let recursive = shapes.iter().all(|&(k, m, n)| {
        let s = PfShape::new(k, m, n).unwrap();
        pf_prime(&s, 0, 'b') == pf_recursive(&s, 0, 'b')
    });
    let equiv: Vec<String> = [(1, 1, 2), (1, 2, 2), (2, 1, 2)]
        .iter()
        .map(|&(k, m, n)| run("pf-equivalence", &pfp(k, m, n), Mode::Auto).verdict.label().to_string())
        .collect();
    let lemma: Vec<Verdict> =
        [(2, 1, 2), (1, 2, 2)].iter().map(|&(k, m, n)| run("pf-lemma-equiv", &pfp(k, m, n), Mode::Exact).verdict).collect();
    let ok = recursive
        && equiv.iter().all(|v| v.starts_with("member"))
        && lemma.iter().all(|v| matches!(v, Verdict::ExactZero | Verdict::MemberExact));
    let lemma_labels: Vec<&str> = lemma.iter().map(|v| v.label()).collect();
    outcome(ok, format!("recursive {recursive}, equivalence {equiv:?}, lemma {lemma_labels:?}"))
}

fn placement(r: &CheckReport) -> Option<String> {
    r.notes.iter().find_map(|n| n.strip_prefix("placement=").map(str::to_string))
}

fn criterion_10() -> Outcome {
    let lap = |k| {
        let mut p = pfp(k, 1, 2);
        p.t = Some(1);
        run("pf-laplace", &p, Mode::Exact)
    };
    let (a, b) = (lap(1), lap(2));
    let placements = (placement(&a), placement(&b));
    let laplace_ok = a.verdict.holds() && b.verdict.holds() && placements.0.is_some() && placements.0 == placements.1;
    let comp_ok = [1usize, 2].iter().all(|&n| {
        let p = params(|p| {
            p.kprime = Some(1);
            p.p = Some(2);
            p.m = Some(1);
            p.blocks = Some(n);
        });
        run("pf-composition", &p, Mode::Auto).verdict.holds()
    });
    let bridge_exact = run("pf-det-bridge", &pfp(2, 2, 1), Mode::Exact).verdict;
    let bridge_spec = run("pf-det-bridge", &pfp(2, 2, 2), Mode::Specialize).verdict;
    let det_pf = run("det-as-pf-corollary", &pfp(2, 3, 1), Mode::Exact).verdict;
    let constant = run("det-pf-constant", &pfp(2, 2, 1), Mode::Auto).verdict;
    let ok = laplace_ok
        && comp_ok
        && matches!(bridge_exact, Verdict::ExactZero | Verdict::MemberExact)
        && bridge_spec.holds()
        && matches!(det_pf, Verdict::ExactZero | Verdict::MemberExact)
        && constant.holds();
    outcome(
        ok,
        format!(
            "placement {:?}, composition {comp_ok}, bridge {} / {}, det-as-pf {}, constant {}",
            placements.0,
            bridge_exact.label(),
            bridge_spec.label(),
            det_pf.label(),
            constant.label()
        ),
    )
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut agree = 0;
    for _ in 0..50 {
        let a = random_array(&mut rng, 2, 4);
        let b = random_array(&mut rng, 2, 2);
        let k = rng.gen_range(1..=4usize);
        let det_b = &b[&vec![1, 1]] * &b[&vec![2, 2]] - &b[&vec![1, 2]] * &b[&vec![2, 1]];
        let rhs = cayley_oracle(2, 4, &a) * &det_b;
        let mut left = HashMap::new();
        let mut right = HashMap::new();
        for idx in HyperShape::cube(2, 4).indices() {
            let (mut l, mut r) = (BigRational::zero(), BigRational::zero());
            for j in 1..=2u8 {
                let mut jdx = idx.clone();
                jdx[k - 1] = j;
                l += &b[&vec![idx[k - 1], j]] * &a[&jdx];
                r += &a[&jdx] * &b[&vec![j, idx[k - 1]]];
            }
            left.insert(idx.clone(), l);
            right.insert(idx, r);
        }
        if cayley_oracle(2, 4, &left) == rhs && cayley_oracle(2, 4, &right) == rhs {
            agree += 1;
        }
    }
    let classical = run("circ-invariance-classical", &params(|p| p.instances = Some(50)), Mode::Auto).verdict;
    let mut qp = nm(2, 3);
    qp.k = Some(1);
    let quantum = run("circ-invariance-quantum", &qp, Mode::Specialize).verdict;
    let ok = agree == 50 && classical.holds() && matches!(quantum, Verdict::MemberSpecialized { .. });
    outcome(ok, format!("oracle {agree}/50, classical {}, quantum {}", classical.label(), quantum.label()))
}

fn criterion_12() -> Outcome {
    let mut ok = true;
    let mut log = Vec::new();
    for m in [2usize, 4] {
        let r = run("phi-image", &nm(2, m), Mode::Exact);
        ok &= r.verdict.holds();
        let constants: Vec<&String> = r.notes.iter().filter(|n| n.contains("constant") || n.contains("agree")).collect();
        ok &= constants.len() >= 3;
        log.push(format!("2m={m}: {}", constants.iter().join("; ")));
    }
    outcome(ok, log.join(" | "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 12] = [
        ("golden 2x2x2 example", criterion_1, 1),
        ("classical collapse", criterion_2, 5),
        ("quantum matrix suite", criterion_3, 600),
        ("relations from wedges", criterion_4, 30),
        ("member_exact suite", criterion_5, 120),
        ("quadratic minor identities", criterion_6, 600),
        ("coactions and split comultiplication", criterion_7, 300),
        ("quantum group actions", criterion_8, 120),
        ("hyper-Pfaffian definitions", criterion_9, 300),
        ("hyper-Pfaffian structure", criterion_10, 900),
        ("matrix action invariance", criterion_11, 600),
        ("pairing map constant", criterion_12, 120),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let elapsed = start.elapsed();
        let ok = o.ok && elapsed < Duration::from_secs(*limit);
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {} [{:.2?} of {limit} s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            elapsed
        );
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
