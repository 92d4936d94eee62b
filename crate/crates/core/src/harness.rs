//! Deterministic samplers and the cross-check suites that certify the
//! identities, the decision procedures, and the reduced-set construction.
//!
//! Every report is a pure function of (spec, seed, count). Trials draw from
//! disjoint substreams of one seed, so they can run in parallel and still
//! reproduce bit-for-bit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::conj::{
    eval_full_generators, gram_constant, gram_relation_check, triple_trace_minor, word_trace,
};
use crate::error::{Error, Result};
use crate::matrix::{
    conj_act, leftright_act, random_sl2, random_tuple, star_act, Mat2,
    MatTuple, RngStream, TraceZeroTuple,
};
use crate::reduced::{decide_equiv_full, decide_equiv_reduced, triples_at_level};
use crate::scalar::GaussianRational;
use crate::semi::eval_h_generators;

/// What kind of pair a sampler produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SamplerKind {
    RandomTuple,
    SameOrbitPair,
    CPair,
    CPrimePair,
    C0Pair,
    PerturbedPair,
    GridTuple,
}

pub const ALL_PAIR_KINDS: [SamplerKind; 6] = [
    SamplerKind::RandomTuple,
    SamplerKind::SameOrbitPair,
    SamplerKind::CPair,
    SamplerKind::CPrimePair,
    SamplerKind::C0Pair,
    SamplerKind::PerturbedPair,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub kind: SamplerKind,
    pub n: usize,
    pub bound: i64,
    pub seed: u64,
}

impl SamplerSpec {
    pub fn new(kind: SamplerKind, n: usize, bound: i64, seed: u64) -> Self {
        SamplerSpec {
            kind,
            n,
            bound,
            seed,
        }
    }
}

/// Grid values used by the GridTuple sampler.
const GRID_VALUES: [i64; 3] = [-1, 0, 1];

fn grid_tuple(n: usize, index: u64) -> TraceZeroTuple {
    let mut digits = index;
    let coords = (0..n)
        .map(|_| {
            let mut next = || {
                let d = (digits % 3) as usize;
                digits /= 3;
                GaussianRational::from_int(GRID_VALUES[d])
            };
            let b = next();
            let c = next();
            let a = next();
            (b, c, a)
        })
        .collect();
    TraceZeroTuple::from_coords(coords).unwrap()
}

/// Upper-triangular trace-zero tuple with prescribed diagonal; nudged away
/// from the all-zero tuple so closed-orbit degeneracies cannot occur.
fn upper_tuple(
    rng: &mut RngStream,
    diag: &[GaussianRational],
    bound: i64,
) -> TraceZeroTuple {
    let mut coords: Vec<_> = diag
        .iter()
        .map(|b| (b.clone(), rng.scalar(bound), GaussianRational::from_int(0)))
        .collect();
    if coords.iter().all(|(b, c, _)| b.is_zero() && c.is_zero()) {
        coords[0].1 = GaussianRational::from_int(1);
    }
    TraceZeroTuple::from_coords(coords).unwrap()
}

/// The deterministic pair at a given trial index.
pub fn sample_at(spec: &SamplerSpec, index: u64) -> (MatTuple, MatTuple) {
    let mut rng = RngStream::substream(spec.seed, index);
    let n = spec.n;
    let bound = spec.bound;
    match spec.kind {
        SamplerKind::RandomTuple => (
            random_tuple(&mut rng, n, bound),
            random_tuple(&mut rng, n, bound),
        ),
        SamplerKind::SameOrbitPair => {
            let a = random_tuple(&mut rng, n, bound);
            // small conjugator: keeps fraction growth bounded while still
            // moving every entry
            let g = random_sl2(&mut rng, bound.min(3));
            let b = conj_act(&g, &a);
            (a, b)
        }
        SamplerKind::CPair => {
            let diag: Vec<_> = (0..n).map(|_| rng.scalar(bound)).collect();
            let a = upper_tuple(&mut rng, &diag, bound);
            let b = upper_tuple(&mut rng, &diag, bound);
            (a.into_tuple(), b.into_tuple())
        }
        SamplerKind::CPrimePair => {
            let diag: Vec<_> = (0..n).map(|_| rng.scalar(bound)).collect();
            let neg: Vec<_> = diag.iter().map(|b| -b).collect();
            let a = upper_tuple(&mut rng, &diag, bound);
            let b = upper_tuple(&mut rng, &neg, bound);
            (a.into_tuple(), b.into_tuple())
        }
        SamplerKind::C0Pair => {
            let zeros = vec![GaussianRational::from_int(0); n];
            let a = upper_tuple(&mut rng, &zeros, bound);
            let b = upper_tuple(&mut rng, &zeros, bound);
            (a.into_tuple(), b.into_tuple())
        }
        SamplerKind::PerturbedPair => {
            let a = random_tuple(&mut rng, n, bound);
            let slot = rng.index(n);
            let row = rng.index(2);
            let col = rng.index(2);
            let mut delta = rng.scalar(2);
            if delta.is_zero() {
                delta = GaussianRational::from_int(1);
            }
            let mats: Vec<Mat2> = a
                .mats()
                .iter()
                .enumerate()
                .map(|(s, m)| {
                    if s == slot {
                        let bump = |i: usize, j: usize| {
                            if i == row && j == col {
                                m.entry(i, j) + &delta
                            } else {
                                m.entry(i, j).clone()
                            }
                        };
                        Mat2::new(bump(0, 0), bump(0, 1), bump(1, 0), bump(1, 1))
                    } else {
                        m.clone()
                    }
                })
                .collect();
            (a, MatTuple::new(mats).unwrap())
        }
        SamplerKind::GridTuple => {
            let total = 3u64.pow(3 * n as u32);
            let i = index % total;
            let j = (index + 1) % total;
            (
                grid_tuple(n, i).into_tuple(),
                grid_tuple(n, j).into_tuple(),
            )
        }
    }
}

pub fn sample(spec: &SamplerSpec, count: u64) -> Vec<(MatTuple, MatTuple)> {
    (0..count).map(|i| sample_at(spec, i)).collect()
}

/// Outcome of one harness suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub spec: serde_json::Value,
    pub trials: u64,
    pub failures: u64,
    pub counterexamples: Vec<serde_json::Value>,
}

impl Report {
    fn merge(mut self, other: Report) -> Report {
        self.trials += other.trials;
        self.failures += other.failures;
        self.counterexamples.extend(other.counterexamples);
        self.counterexamples.truncate(10);
        self
    }
}

fn pair_counterexample(a: &MatTuple, b: &MatTuple, detail: &str) -> serde_json::Value {
    json!({
        "detail": detail,
        "a": serde_json::from_str::<serde_json::Value>(&crate::io::serialize_tuple(a)).unwrap(),
        "b": serde_json::from_str::<serde_json::Value>(&crate::io::serialize_tuple(b)).unwrap(),
    })
}

/// Runs decide_equiv_full and decide_equiv_reduced on sampled pairs and
/// counts disagreements (expected: none).
pub fn crosscheck_reduced_vs_full(spec: &SamplerSpec, count: u64) -> Report {
    let outcomes: Vec<Option<serde_json::Value>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let (a, b) = sample_at(spec, i);
            let full = decide_equiv_full(&a, &b).unwrap().0;
            let red = decide_equiv_reduced(&a, &b).unwrap();
            if full == red {
                None
            } else {
                Some(pair_counterexample(
                    &a,
                    &b,
                    &format!("full={full} reduced={red}"),
                ))
            }
        })
        .collect();
    let mut counterexamples: Vec<_> = outcomes.into_iter().flatten().collect();
    let failures = counterexamples.len() as u64;
    counterexamples.truncate(10);
    Report {
        suite: "reduced_vs_full".into(),
        spec: serde_json::to_value(spec).unwrap(),
        trials: count,
        failures,
        counterexamples,
    }
}

const GRID_BUDGET: u64 = 10_000_000;

/// Exhaustively scans 3xn integer matrices with entries in `values` and
/// verifies: all level sums of 3x3 minors vanish => all 3x3 minors vanish.
pub fn grid_minor_certification(n: usize, values: &[i64]) -> Result<Report> {
    if n < 3 {
        return Err(Error::NTooSmall(n));
    }
    let cells = 3 * n;
    let total = (values.len() as u64)
        .checked_pow(cells as u32)
        .ok_or(Error::BudgetExceeded(u64::MAX, GRID_BUDGET))?;
    if total > GRID_BUDGET {
        return Err(Error::BudgetExceeded(total, GRID_BUDGET));
    }

    let triples: Vec<(usize, usize, usize)> = {
        let mut v = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    v.push((i, j, k));
                }
            }
        }
        v
    };
    let levels: Vec<Vec<(usize, usize, usize)>> = (6..=(3 * n - 3))
        .map(|l| triples_at_level(n, l))
        .collect();

    let base = values.len() as u64;
    let minor = |m: &[i64], i: usize, j: usize, k: usize| -> i64 {
        let e = |r: usize, c: usize| m[r * n + (c - 1)];
        e(0, i) * (e(1, j) * e(2, k) - e(1, k) * e(2, j))
            - e(0, j) * (e(1, i) * e(2, k) - e(1, k) * e(2, i))
            + e(0, k) * (e(1, i) * e(2, j) - e(1, j) * e(2, i))
    };

    let failures: Vec<serde_json::Value> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let mut m = vec![0i64; cells];
            let mut rest = idx;
            for cell in m.iter_mut() {
                *cell = values[(rest % base) as usize];
                rest /= base;
            }
            let level_sums_vanish = levels.iter().all(|ts| {
                ts.iter()
                    .map(|&(i, j, k)| minor(&m, i, j, k))
                    .sum::<i64>()
                    == 0
            });
            if !level_sums_vanish {
                return None;
            }
            let all_minors_vanish = triples.iter().all(|&(i, j, k)| minor(&m, i, j, k) == 0);
            if all_minors_vanish {
                None
            } else {
                Some(json!({"matrix": m, "detail": "level sums vanish but a minor does not"}))
            }
        })
        .collect();

    let nfail = failures.len() as u64;
    let mut counterexamples = failures;
    counterexamples.truncate(10);
    Ok(Report {
        suite: "grid_minor_certification".into(),
        spec: json!({"n": n, "values": values}),
        trials: total,
        failures: nfail,
        counterexamples,
    })
}

/// One trial of the identity suite; returns the first failed identity name.
fn identity_trial(seed: u64, index: u64, n: usize, bound: i64) -> Option<(String, MatTuple)> {
    let mut rng = RngStream::substream(seed, index);
    let t = random_tuple(&mut rng, n, bound);
    let g = random_sl2(&mut rng, bound);
    let (tz, _) = t.tracefree_part();

    // Cayley-Hamilton on every slot
    for m in t.mats() {
        let ch = m
            .mul(m)
            .sub(&m.scale(&m.trace()))
            .add(&Mat2::identity().scale(&m.det()));
        if !ch.is_zero() {
            return Some(("cayley_hamilton".into(), t));
        }
    }
    // trace-zero identities
    let two = GaussianRational::from_int(2);
    for i in 1..=n {
        let x = tz.tuple().slot(i).unwrap();
        if x.mul(x).trace() != -&(&two * &x.det()) {
            return Some(("tr_sq_eq_minus_2det".into(), t));
        }
        for j in i + 1..=n {
            let y = tz.tuple().slot(j).unwrap();
            let anti = x.mul(y).add(&y.mul(x));
            if anti != Mat2::identity().scale(&x.mul(y).trace()) {
                return Some(("anticommutator".into(), t));
            }
            let four = GaussianRational::from_int(4);
            let tij = x.mul(y).trace();
            let rhs = &(&(&four * &x.det()) * &y.det()) - &(&tij * &tij);
            if x.commutator(y).det() != rhs {
                return Some(("commutator_det".into(), t));
            }
        }
    }
    // triple-trace identities
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let w = word_trace(tz.tuple(), &[i, j, k]).unwrap();
                if triple_trace_minor(&tz, i, j, k).unwrap() != w {
                    return Some(("triple_trace_minor".into(), t));
                }
                if word_trace(tz.tuple(), &[i, k, j]).unwrap() != -&w {
                    return Some(("triple_trace_antisymmetry".into(), t));
                }
            }
        }
    }
    // Gram relation with the global constant
    if n >= 3 {
        let pick = |rng: &mut RngStream| {
            let mut idx: Vec<usize> = (1..=n).collect();
            let i = idx.remove(rng.index(idx.len()));
            let j = idx.remove(rng.index(idx.len()));
            let k = idx.remove(rng.index(idx.len()));
            let mut t3 = [i, j, k];
            t3.sort_unstable();
            (t3[0], t3[1], t3[2])
        };
        let ijk = pick(&mut rng);
        let pqr = pick(&mut rng);
        let (lhs, det, _) = gram_relation_check(&tz, ijk, pqr).unwrap();
        if lhs != &gram_constant() * &det {
            return Some(("gram_relation".into(), t));
        }
    }
    // invariance of the generator families
    if eval_full_generators(&conj_act(&g, &t)) != eval_full_generators(&t) {
        return Some(("conj_invariance".into(), t));
    }
    let h2 = random_sl2(&mut rng, bound);
    if eval_h_generators(&leftright_act(&g, &h2, &t)) != eval_h_generators(&t) {
        return Some(("leftright_invariance".into(), t));
    }
    // star / conjugation commutation with a random invertible recombination
    let h: Vec<Vec<GaussianRational>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    if r == c {
                        GaussianRational::from_int(1)
                    } else {
                        rng.scalar(bound.min(4))
                    }
                })
                .collect()
        })
        .collect();
    if let Ok(starred) = star_act(&h, &t) {
        let lhs = star_act(&h, &conj_act(&g, &t)).unwrap();
        let rhs = conj_act(&g, &starred);
        if lhs != rhs {
            return Some(("star_conj_commutation".into(), t));
        }
    }
    None
}

/// Exercises the exact identities on random data; expected zero failures.
pub fn invariance_suite(seed: u64, trials: u64, n: usize, bound: i64) -> Report {
    let outcomes: Vec<Option<(String, MatTuple)>> = (0..trials)
        .into_par_iter()
        .map(|i| identity_trial(seed, i, n, bound))
        .collect();
    let mut counterexamples = Vec::new();
    let mut failures = 0;
    for o in outcomes.into_iter().flatten() {
        failures += 1;
        if counterexamples.len() < 10 {
            counterexamples.push(pair_counterexample(&o.1, &o.1, &o.0));
        }
    }
    Report {
        suite: "invariance".into(),
        spec: json!({"seed": seed, "n": n, "bound": bound}),
        trials,
        failures,
        counterexamples,
    }
}

/// Cross-checks the sigma transfer against the full conjugation decision.
pub fn sigma_suite(seed: u64, trials: u64, n: usize, bound: i64) -> Report {
    let outcomes: Vec<Option<serde_json::Value>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let kind = if i % 2 == 0 {
                SamplerKind::RandomTuple
            } else {
                SamplerKind::SameOrbitPair
            };
            let spec = SamplerSpec::new(kind, n, bound, seed);
            let (a, b) = sample_at(&spec, i);
            let via_sigma = crate::semi::conj_equiv_via_sigma(&a, &b).unwrap();
            let full = decide_equiv_full(&a, &b).unwrap().0;
            if via_sigma == full {
                None
            } else {
                Some(pair_counterexample(
                    &a,
                    &b,
                    &format!("sigma={via_sigma} full={full}"),
                ))
            }
        })
        .collect();
    let mut counterexamples: Vec<_> = outcomes.into_iter().flatten().collect();
    let failures = counterexamples.len() as u64;
    counterexamples.truncate(10);
    Report {
        suite: "sigma".into(),
        spec: json!({"seed": seed, "n": n, "bound": bound}),
        trials,
        failures,
        counterexamples,
    }
}

/// The `verify --suite reduced` entry point: one crosscheck per sampler kind.
pub fn reduced_suite(seed: u64, trials: u64, n: usize, bound: i64) -> Report {
    ALL_PAIR_KINDS
        .iter()
        .map(|&kind| {
            let spec = SamplerSpec::new(kind, n, bound, seed);
            crosscheck_reduced_vs_full(&spec, trials)
        })
        .reduce(Report::merge)
        .unwrap()
}
