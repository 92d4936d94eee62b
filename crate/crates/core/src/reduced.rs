//! The smaller separating sets S'_n and the separation decision procedures.
//!
//! S'_n consists of the pairwise traces t_ij together with 3n-8 linear
//! combinations f_l of triple traces, one per level l = 6 .. 3n-3 of the
//! poset of index triples graded by i+j+k.

use serde::{Deserialize, Serialize};

use crate::conj::{
    gram_constant, det3, Family,
    InvariantProfile,
};
use crate::error::{Error, Result};
use crate::matrix::{MatTuple, TraceZeroTuple};
use crate::scalar::GaussianRational;

/// Coefficient scheme for the level combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// lambda = 1 for every triple in the level.
    UnitLevelSums,
    /// lambda = 2^(lex index within the level); a genericity hedge.
    VandermondeLevelSums,
}

/// One linear combination f_l of triple traces at a fixed level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorCombination {
    pub level: usize,
    pub terms: Vec<((usize, usize, usize), GaussianRational)>,
}

/// The reduced set data for a fixed n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedSet {
    pub n: usize,
    pub scheme: Scheme,
    pub combinations: Vec<MinorCombination>,
}

/// All triples i < j < k <= n with i + j + k = level, in lex order.
pub fn triples_at_level(n: usize, level: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                if i + j + k == level {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

pub fn build_reduced_combinations(n: usize, scheme: Scheme) -> Result<ReducedSet> {
    if n < 3 {
        return Err(Error::NTooSmall(n));
    }
    let mut combinations = Vec::with_capacity(3 * n - 8);
    for level in 6..=(3 * n - 3) {
        let terms = triples_at_level(n, level)
            .into_iter()
            .enumerate()
            .map(|(idx, t)| {
                let coeff = match scheme {
                    Scheme::UnitLevelSums => GaussianRational::from_int(1),
                    Scheme::VandermondeLevelSums => {
                        GaussianRational::from_int(1i64 << idx)
                    }
                };
                (t, coeff)
            })
            .collect::<Vec<_>>();
        debug_assert!(!terms.is_empty());
        combinations.push(MinorCombination { level, terms });
    }
    Ok(ReducedSet {
        n,
        scheme,
        combinations,
    })
}

/// Evaluates the reduced profile: all t_ij (i <= j) followed by all f_l.
pub fn eval_reduced_profile(t: &TraceZeroTuple, set: &ReducedSet) -> Result<InvariantProfile> {
    if t.n() != set.n {
        return Err(Error::SizeMismatch(t.n(), set.n));
    }
    let n = t.n();
    let tuple = t.tuple();
    let prods = crate::conj::PairProducts::new(tuple);
    let mut entries = Vec::with_capacity(n * (n + 1) / 2 + set.combinations.len());
    for i in 1..=n {
        for j in i..=n {
            let v = if i == j {
                let m = tuple.slot(i)?;
                m.trace_of_product(m)
            } else {
                prods.get(i, j).trace()
            };
            entries.push((format!("t({i},{j})"), v));
        }
    }
    for comb in &set.combinations {
        let mut acc = GaussianRational::from_int(0);
        for (&(i, j, k), coeff) in comb.terms.iter().map(|(t, c)| (t, c)) {
            let v = prods.get(i, j).trace_of_product(tuple.slot(k)?);
            acc = &acc + &(coeff * &v);
        }
        entries.push((format!("f({})", comb.level), acc));
    }
    Ok(InvariantProfile {
        family: Family::ReducedSPrime,
        entries,
    })
}

/// Full-set separation with the first disagreeing label as witness.
///
/// Entries are compared in canonical order but evaluated stage by stage, so
/// a pair separated by a trace or determinant never pays for the cubic part.
pub fn decide_equiv_full(a: &MatTuple, b: &MatTuple) -> Result<(bool, Option<String>)> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(a.n(), b.n()));
    }
    let n = a.n();
    for i in 1..=n {
        if a.slot(i)?.trace() != b.slot(i)?.trace() {
            return Ok((false, Some(format!("tr({i})"))));
        }
    }
    for i in 1..=n {
        if a.slot(i)?.det() != b.slot(i)?.det() {
            return Ok((false, Some(format!("det({i})"))));
        }
    }
    let pa = crate::conj::PairProducts::new(a);
    let pb = crate::conj::PairProducts::new(b);
    for i in 1..=n {
        for j in i + 1..=n {
            if pa.get(i, j).trace() != pb.get(i, j).trace() {
                return Ok((false, Some(format!("t({i},{j})"))));
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                if pa.get(i, j).trace_of_product(a.slot(k)?)
                    != pb.get(i, j).trace_of_product(b.slot(k)?)
                {
                    return Ok((false, Some(format!("t({i},{j},{k})"))));
                }
            }
        }
    }
    Ok((true, None))
}

/// Reduced-set separation: slot traces, then the reduced profile of the
/// trace-free parts. Falls back to the full set for n <= 2, where the
/// reduced construction is undefined.
pub fn decide_equiv_reduced(a: &MatTuple, b: &MatTuple) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(a.n(), b.n()));
    }
    if a.n() <= 2 {
        return Ok(decide_equiv_full(a, b)?.0);
    }
    let (tza, traces_a) = a.tracefree_part();
    let (tzb, traces_b) = b.tracefree_part();
    if traces_a != traces_b {
        return Ok(false);
    }
    let set = build_reduced_combinations(a.n(), Scheme::UnitLevelSums)?;
    let pa = eval_reduced_profile(&tza, &set)?;
    let pb = eval_reduced_profile(&tzb, &set)?;
    Ok(pa.first_difference(&pb)?.is_none())
}

/// Symmetric pair-trace data t_ij for 1 <= i <= j <= n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTraces {
    n: usize,
    vals: Vec<GaussianRational>,
}

impl PairTraces {
    pub fn new(n: usize, vals: Vec<GaussianRational>) -> Result<Self> {
        if vals.len() != n * (n + 1) / 2 {
            return Err(Error::SizeMismatch(vals.len(), n * (n + 1) / 2));
        }
        Ok(PairTraces { n, vals })
    }

    pub fn from_tuple(t: &TraceZeroTuple) -> Self {
        let n = t.n();
        let mut vals = Vec::with_capacity(n * (n + 1) / 2);
        for i in 1..=n {
            for j in i..=n {
                vals.push(crate::conj::word_trace(t.tuple(), &[i, j]).unwrap());
            }
        }
        PairTraces { n, vals }
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // offset of row i in the packed upper triangle
        let off = (i - 1) * (self.n + 1) - i * (i - 1) / 2;
        &self.vals[off + (j - i)]
    }
}

/// Reconstructs the two globally consistent triple-trace vectors (v, -v)
/// from pair-trace data alone, via t_ijk^2 = c * gram(ijk, ijk) and cross
/// relations t_ijk * t_pqr = c * gram(ijk, pqr).
pub fn triple_traces_up_to_sign(
    traces: &PairTraces,
) -> Result<(Vec<((usize, usize, usize), GaussianRational)>, Vec<((usize, usize, usize), GaussianRational)>)> {
    let n = traces.n;
    let c = gram_constant();
    let gram = |ijk: (usize, usize, usize), pqr: (usize, usize, usize)| {
        let (i, j, k) = ijk;
        let (p, q, r) = pqr;
        let rows = [
            [
                traces.get(i, p).clone(),
                traces.get(i, q).clone(),
                traces.get(i, r).clone(),
            ],
            [
                traces.get(j, p).clone(),
                traces.get(j, q).clone(),
                traces.get(j, r).clone(),
            ],
            [
                traces.get(k, p).clone(),
                traces.get(k, q).clone(),
                traces.get(k, r).clone(),
            ],
        ];
        det3(&rows)
    };

    let mut all_triples = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                all_triples.push((i, j, k));
            }
        }
    }

    let mut values: Vec<((usize, usize, usize), GaussianRational)> = Vec::new();
    let mut reference: Option<((usize, usize, usize), GaussianRational)> = None;
    for &t in &all_triples {
        let sq = &c * &gram(t, t);
        let mag = sq.sqrt_in_field()?;
        let value = if mag.is_zero() {
            GaussianRational::from_int(0)
        } else {
            match &reference {
                None => {
                    reference = Some((t, mag.clone()));
                    mag.clone()
                }
                Some((rt, rv)) => {
                    // cross relation pins the relative sign
                    let prod = &c * &gram(*rt, t);
                    let cand = &prod * &rv.inv().map_err(|_| Error::InconsistentData)?;
                    if &cand * &cand != sq {
                        return Err(Error::InconsistentData);
                    }
                    cand
                }
            }
        };
        values.push((t, value));
    }
    let negated = values
        .iter()
        .map(|(t, v)| (*t, -v))
        .collect();
    Ok((values, negated))
}

/// JSON form of a reduced set, as emitted by the CLI `reduced-set` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReducedSetDoc {
    pub n: usize,
    pub scheme: Scheme,
    pub combinations: Vec<CombinationDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CombinationDoc {
    pub level: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDoc {
    pub ijk: [usize; 3],
    pub coeff: String,
}

impl ReducedSetDoc {
    pub fn from_set(set: &ReducedSet) -> Self {
        ReducedSetDoc {
            n: set.n,
            scheme: set.scheme,
            combinations: set
                .combinations
                .iter()
                .map(|c| CombinationDoc {
                    level: c.level,
                    terms: c
                        .terms
                        .iter()
                        .map(|((i, j, k), coeff)| TermDoc {
                            ijk: [*i, *j, *k],
                            coeff: crate::scalar::fraction_to_string(coeff.re()),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{conj_act, random_sl2, Mat2, RngStream};

    fn triple() -> MatTuple {
        MatTuple::new(vec![
            Mat2::from_ints(1, 0, 0, -1),
            Mat2::from_ints(0, 1, 0, 0),
            Mat2::from_ints(0, 0, 1, 0),
        ])
        .unwrap()
    }

    #[test]
    fn n3_single_combination() {
        let set = build_reduced_combinations(3, Scheme::UnitLevelSums).unwrap();
        assert_eq!(set.combinations.len(), 1);
        assert_eq!(set.combinations[0].level, 6);
        assert_eq!(set.combinations[0].terms[0].0, (1, 2, 3));
    }

    #[test]
    fn n4_levels() {
        let set = build_reduced_combinations(4, Scheme::UnitLevelSums).unwrap();
        assert_eq!(set.combinations.len(), 4);
        let triples: Vec<_> = set
            .combinations
            .iter()
            .map(|c| (c.level, c.terms[0].0))
            .collect();
        assert_eq!(
            triples,
            vec![
                (6, (1, 2, 3)),
                (7, (1, 2, 4)),
                (8, (1, 3, 4)),
                (9, (2, 3, 4))
            ]
        );
    }

    #[test]
    fn n5_level8_has_two_triples() {
        let ts = triples_at_level(5, 8);
        assert_eq!(ts, vec![(1, 2, 5), (1, 3, 4)]);
    }

    #[test]
    fn n_too_small() {
        assert_eq!(
            build_reduced_combinations(2, Scheme::UnitLevelSums),
            Err(Error::NTooSmall(2))
        );
    }

    #[test]
    fn reduced_profile_sizes_and_values() {
        let set = build_reduced_combinations(3, Scheme::UnitLevelSums).unwrap();
        let t = TraceZeroTuple::new(triple()).unwrap();
        let p = eval_reduced_profile(&t, &set).unwrap();
        assert_eq!(p.len(), 6 + 1);
        assert_eq!(p.value("f(6)"), Some(&GaussianRational::from_int(1)));

        let set4 = build_reduced_combinations(4, Scheme::UnitLevelSums).unwrap();
        let mut rng = RngStream::from_seed(2);
        let t4 = crate::matrix::random_tracezero_tuple(&mut rng, 4, 5);
        assert_eq!(eval_reduced_profile(&t4, &set4).unwrap().len(), 14);
    }

    #[test]
    fn reduced_count_matches_table() {
        for n in 3..=8 {
            let set = build_reduced_combinations(n, Scheme::UnitLevelSums).unwrap();
            assert_eq!(set.combinations.len(), 3 * n - 8);
            // |S'_n| = pairwise traces + combinations + n slot traces
            let total = n * (n + 1) / 2 + set.combinations.len() + n;
            assert_eq!(total, (n * n + 9 * n - 16) / 2);
        }
    }

    #[test]
    fn example_12_inseparable_both_ways() {
        let a = MatTuple::new(vec![Mat2::from_ints(0, 1, 0, 0)]).unwrap();
        let b = MatTuple::new(vec![Mat2::zero()]).unwrap();
        assert_eq!(decide_equiv_full(&a, &b).unwrap(), (true, None));
        assert!(decide_equiv_reduced(&a, &b).unwrap());
    }

    #[test]
    fn separation_with_witness() {
        let a = MatTuple::new(vec![Mat2::from_ints(0, 1, 0, 0), Mat2::from_ints(0, 0, 1, 0)]).unwrap();
        let b = MatTuple::new(vec![Mat2::from_ints(0, 1, 0, 0), Mat2::from_ints(0, 1, 0, 0)]).unwrap();
        let (eq, witness) = decide_equiv_full(&a, &b).unwrap();
        assert!(!eq);
        assert_eq!(witness.as_deref(), Some("t(1,2)"));
        assert!(!decide_equiv_reduced(&a, &b).unwrap());
    }

    #[test]
    fn same_orbit_always_equiv() {
        let mut rng = RngStream::from_seed(8);
        for _ in 0..40 {
            let t = crate::matrix::random_tuple(&mut rng, 4, 5);
            let g = random_sl2(&mut rng, 5);
            let u = conj_act(&g, &t);
            assert!(decide_equiv_full(&t, &u).unwrap().0);
            assert!(decide_equiv_reduced(&t, &u).unwrap());
        }
    }

    #[test]
    fn triple_traces_up_to_sign_examples() {
        let t = TraceZeroTuple::new(triple()).unwrap();
        let traces = PairTraces::from_tuple(&t);
        let (v, w) = triple_traces_up_to_sign(&traces).unwrap();
        assert_eq!(v[0].0, (1, 2, 3));
        assert_eq!(v[0].1, GaussianRational::from_int(1));
        assert_eq!(w[0].1, GaussianRational::from_int(-1));
    }

    #[test]
    fn triple_traces_zero_data() {
        let traces = PairTraces::new(3, vec![GaussianRational::from_int(0); 6]).unwrap();
        let (v, w) = triple_traces_up_to_sign(&traces).unwrap();
        assert!(v.iter().all(|(_, x)| x.is_zero()));
        assert!(w.iter().all(|(_, x)| x.is_zero()));
    }

    #[test]
    fn triple_traces_rank2_data_all_zero() {
        // c' = c row repetition analogue: tuple with a-row zero and b,c proportional
        let t = TraceZeroTuple::from_coords(vec![
            (
                GaussianRational::from_int(1),
                GaussianRational::from_int(2),
                GaussianRational::from_int(0),
            ),
            (
                GaussianRational::from_int(2),
                GaussianRational::from_int(4),
                GaussianRational::from_int(0),
            ),
            (
                GaussianRational::from_int(3),
                GaussianRational::from_int(6),
                GaussianRational::from_int(0),
            ),
        ])
        .unwrap();
        let traces = PairTraces::from_tuple(&t);
        let (v, _) = triple_traces_up_to_sign(&traces).unwrap();
        assert!(v.iter().all(|(_, x)| x.is_zero()));
    }

    #[test]
    fn vandermonde_scheme_coefficients() {
        let set = build_reduced_combinations(5, Scheme::VandermondeLevelSums).unwrap();
        let level8 = set.combinations.iter().find(|c| c.level == 8).unwrap();
        assert_eq!(level8.terms[0].1, GaussianRational::from_int(1));
        assert_eq!(level8.terms[1].1, GaussianRational::from_int(2));
    }
}
