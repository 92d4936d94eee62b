//! Generating invariants of the conjugation action and the identities
//! relating them.
//!
//! The two constants fixed here were pinned against the `word_trace` oracle:
//! the coordinate-determinant expression for a triple trace carries a global
//! sign of -1, and the product of two triple traces equals -1/2 times the
//! 3x3 determinant of pairwise traces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Mat2, MatTuple, TraceZeroTuple};
use crate::scalar::GaussianRational;

/// Global sign relating Tr(A_i A_j A_k) to the determinant of the
/// coordinate matrix with rows (c; b; a).
pub const TRIPLE_MINOR_SIGN: i64 = -1;

/// Constant c in t_ijk * t_pqr = c * det[t_xy].
pub fn gram_constant() -> GaussianRational {
    GaussianRational::from_ratio(-1, 2).unwrap()
}

/// Which invariant family a profile was evaluated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    FullSn,
    TraceZeroEn,
    ReducedSPrime,
    SemiInvariantH,
}

/// Ordered evaluation of a named invariant family on a tuple.
///
/// Label order is fixed per family, so profile equality is a single
/// sequence comparison and the first mismatching label is a separation
/// witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantProfile {
    pub family: Family,
    pub entries: Vec<(String, GaussianRational)>,
}

impl InvariantProfile {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn value(&self, label: &str) -> Option<&GaussianRational> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v)
    }

    /// First label on which the two profiles disagree, if any.
    pub fn first_difference(&self, other: &InvariantProfile) -> Result<Option<String>> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch(self.len(), other.len()));
        }
        for ((la, va), (lb, vb)) in self.entries.iter().zip(&other.entries) {
            if la != lb {
                return Err(Error::Internal(format!(
                    "profile label order mismatch: {la} vs {lb}"
                )));
            }
            if va != vb {
                return Ok(Some(la.clone()));
            }
        }
        Ok(None)
    }
}

/// Tr(A_{w1} ... A_{wk}) for a nonempty word of 1-based slot indices.
pub fn word_trace(t: &MatTuple, word: &[usize]) -> Result<GaussianRational> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut prod = t.slot(word[0])?.clone();
    for &idx in &word[1..] {
        prod = prod.mul(t.slot(idx)?);
    }
    Ok(prod.trace())
}

/// Products A_i A_j for 1 <= i < j <= n, so that every triple trace costs
/// one trace-of-product instead of two matrix multiplications.
pub(crate) struct PairProducts {
    n: usize,
    prods: Vec<Mat2>,
}

impl PairProducts {
    pub(crate) fn new(t: &MatTuple) -> Self {
        let n = t.n();
        let mats = t.mats();
        let mut prods = Vec::with_capacity(n * (n.max(1) - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                prods.push(mats[i].mul(&mats[j]));
            }
        }
        PairProducts { n, prods }
    }

    /// A_i A_j for 1-based i < j.
    pub(crate) fn get(&self, i: usize, j: usize) -> &Mat2 {
        debug_assert!(1 <= i && i < j && j <= self.n);
        let off = (i - 1) * self.n - i * (i - 1) / 2;
        &self.prods[off + (j - i - 1)]
    }
}

/// The full generating set S_n: traces, determinants, pair traces, triple traces.
pub fn eval_full_generators(t: &MatTuple) -> InvariantProfile {
    let n = t.n();
    let prods = PairProducts::new(t);
    let mut entries = Vec::with_capacity(full_set_size(n));
    for i in 1..=n {
        entries.push((format!("tr({i})"), t.slot(i).unwrap().trace()));
    }
    for i in 1..=n {
        entries.push((format!("det({i})"), t.slot(i).unwrap().det()));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            entries.push((format!("t({i},{j})"), prods.get(i, j).trace()));
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                entries.push((
                    format!("t({i},{j},{k})"),
                    prods.get(i, j).trace_of_product(t.slot(k).unwrap()),
                ));
            }
        }
    }
    InvariantProfile {
        family: Family::FullSn,
        entries,
    }
}

/// The trace-zero generating set E_n: t_ij for i <= j and t_ijk for i < j < k.
pub fn eval_tracezero_generators(t: &TraceZeroTuple) -> InvariantProfile {
    let n = t.n();
    let tuple = t.tuple();
    let prods = PairProducts::new(tuple);
    let mut entries = Vec::with_capacity(tracezero_set_size(n));
    for i in 1..=n {
        for j in i..=n {
            let v = if i == j {
                let m = tuple.slot(i).unwrap();
                m.trace_of_product(m)
            } else {
                prods.get(i, j).trace()
            };
            entries.push((format!("t({i},{j})"), v));
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                entries.push((
                    format!("t({i},{j},{k})"),
                    prods.get(i, j).trace_of_product(tuple.slot(k).unwrap()),
                ));
            }
        }
    }
    InvariantProfile {
        family: Family::TraceZeroEn,
        entries,
    }
}

/// Triple trace via the 3x3 coordinate determinant: the (sign-corrected)
/// determinant of rows (c; b; a) restricted to columns i, j, k.
///
/// Indices may repeat or appear in any order; the determinant handles both.
pub fn triple_trace_minor(
    t: &TraceZeroTuple,
    i: usize,
    j: usize,
    k: usize,
) -> Result<GaussianRational> {
    let cols = [i, j, k];
    for &x in &cols {
        if x == 0 || x > t.n() {
            return Err(Error::IndexOutOfRange(x, t.n()));
        }
    }
    let row = |f: &dyn Fn(usize) -> GaussianRational| -> [GaussianRational; 3] {
        [f(i), f(j), f(k)]
    };
    let c = row(&|x| t.c(x).unwrap().clone());
    let b = row(&|x| t.b(x).unwrap().clone());
    let a = row(&|x| t.a(x).unwrap().clone());
    let det = det3(&[c, b, a]);
    Ok(&GaussianRational::from_int(TRIPLE_MINOR_SIGN) * &det)
}

pub fn det3(rows: &[[GaussianRational; 3]; 3]) -> GaussianRational {
    let t0 = &rows[0][0] * &(&(&rows[1][1] * &rows[2][2]) - &(&rows[1][2] * &rows[2][1]));
    let t1 = &rows[0][1] * &(&(&rows[1][0] * &rows[2][2]) - &(&rows[1][2] * &rows[2][0]));
    let t2 = &rows[0][2] * &(&(&rows[1][0] * &rows[2][1]) - &(&rows[1][1] * &rows[2][0]));
    &(&t0 - &t1) + &t2
}

/// Checks t_ijk * t_pqr = c * det[t_xy] and returns (lhs, det, c).
pub fn gram_relation_check(
    t: &TraceZeroTuple,
    ijk: (usize, usize, usize),
    pqr: (usize, usize, usize),
) -> Result<(GaussianRational, GaussianRational, GaussianRational)> {
    let tuple = t.tuple();
    let (i, j, k) = ijk;
    let (p, q, r) = pqr;
    for &x in &[i, j, k, p, q, r] {
        if x == 0 || x > t.n() {
            return Err(Error::IndexOutOfRange(x, t.n()));
        }
    }
    let lhs = &word_trace(tuple, &[i, j, k])? * &word_trace(tuple, &[p, q, r])?;
    let pair = |x: usize, y: usize| word_trace(tuple, &[x, y]).unwrap();
    let rows = [
        [pair(i, p), pair(i, q), pair(i, r)],
        [pair(j, p), pair(j, q), pair(j, r)],
        [pair(k, p), pair(k, q), pair(k, r)],
    ];
    let det = det3(&rows);
    Ok((lhs, det, gram_constant()))
}

pub fn full_set_size(n: usize) -> usize {
    (n * n * n + 11 * n) / 6
}

pub fn tracezero_set_size(n: usize) -> usize {
    n * (n + 1) / 2 + binom3(n)
}

pub fn binom2(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

pub fn binom3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

pub fn binom4(n: usize) -> usize {
    if n < 4 {
        0
    } else {
        n * (n - 1) * (n - 2) * (n - 3) / 24
    }
}

/// The cardinality / dimension table row for a given n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeTable {
    #[serde(rename = "S_n")]
    pub s_n: usize,
    #[serde(rename = "S_prime")]
    pub s_prime: usize,
    #[serde(rename = "dim_conj")]
    pub dim_conj: usize,
    #[serde(rename = "H_set")]
    pub h_set: usize,
    #[serde(rename = "dim_H")]
    pub dim_h: usize,
    #[serde(rename = "dim_tracezero")]
    pub dim_tracezero: usize,
}

pub fn cardinality_and_dimension(n: usize) -> SizeTable {
    assert!(n >= 1);
    let s_n = full_set_size(n);
    let s_prime = if n >= 3 {
        (n * n + 9 * n - 16) / 2
    } else {
        s_n
    };
    let dim_conj = if n >= 2 { 4 * n - 3 } else { 1 };
    let dim_tracezero = if n >= 2 { 3 * n - 3 } else { 1 };
    let h_set = n + binom2(n) + binom4(n);
    let dim_h = match n {
        1 => 1,
        2 => 3,
        _ => 4 * n - 6,
    };
    SizeTable {
        s_n,
        s_prime,
        dim_conj,
        h_set,
        dim_h,
        dim_tracezero,
    }
}

/// JSON form of a profile: an array of {"label", "value"} in canonical order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileEntryDoc {
    pub label: String,
    pub value: crate::io::ScalarDoc,
}

pub fn profile_to_docs(p: &InvariantProfile) -> Vec<ProfileEntryDoc> {
    p.entries
        .iter()
        .map(|(label, value)| ProfileEntryDoc {
            label: label.clone(),
            value: crate::io::ScalarDoc::from_scalar(value),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{
        conj_act, random_sl2, random_tracezero_tuple, random_tuple, Mat2, RngStream,
    };

    fn diag1m1() -> Mat2 {
        Mat2::from_ints(1, 0, 0, -1)
    }
    fn e12() -> Mat2 {
        Mat2::from_ints(0, 1, 0, 0)
    }
    fn e21() -> Mat2 {
        Mat2::from_ints(0, 0, 1, 0)
    }
    fn triple() -> MatTuple {
        MatTuple::new(vec![diag1m1(), e12(), e21()]).unwrap()
    }

    #[test]
    fn word_trace_examples() {
        let id = MatTuple::new(vec![Mat2::identity()]).unwrap();
        assert_eq!(word_trace(&id, &[1]).unwrap(), GaussianRational::from_int(2));

        let t = MatTuple::new(vec![e12(), e21()]).unwrap();
        assert_eq!(word_trace(&t, &[1, 2]).unwrap(), GaussianRational::from_int(1));

        assert_eq!(
            word_trace(&triple(), &[1, 2, 3]).unwrap(),
            GaussianRational::from_int(1)
        );
    }

    #[test]
    fn word_trace_errors() {
        let t = MatTuple::new(vec![e12()]).unwrap();
        assert_eq!(word_trace(&t, &[]), Err(Error::EmptyWord));
        assert_eq!(word_trace(&t, &[2]), Err(Error::IndexOutOfRange(2, 1)));
    }

    #[test]
    fn word_trace_cyclic() {
        let mut rng = RngStream::from_seed(5);
        let t = random_tuple(&mut rng, 3, 5);
        let a = word_trace(&t, &[1, 2, 3]).unwrap();
        let b = word_trace(&t, &[2, 3, 1]).unwrap();
        let c = word_trace(&t, &[3, 1, 2]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn full_generators_nilpotent_single() {
        let t = MatTuple::new(vec![e12()]).unwrap();
        let p = eval_full_generators(&t);
        assert_eq!(p.len(), 2);
        assert!(p.entries.iter().all(|(_, v)| v.is_zero()));
    }

    #[test]
    fn full_generators_triple_example() {
        let p = eval_full_generators(&triple());
        let one = GaussianRational::from_int(1);
        let zero = GaussianRational::from_int(0);
        assert_eq!(p.value("tr(1)"), Some(&zero));
        assert_eq!(p.value("det(1)"), Some(&GaussianRational::from_int(-1)));
        assert_eq!(p.value("det(2)"), Some(&zero));
        assert_eq!(p.value("t(1,2)"), Some(&zero));
        assert_eq!(p.value("t(1,3)"), Some(&zero));
        assert_eq!(p.value("t(2,3)"), Some(&one));
        assert_eq!(p.value("t(1,2,3)"), Some(&one));
        assert_eq!(p.len(), full_set_size(3));
    }

    #[test]
    fn tracezero_generators_example() {
        let t = TraceZeroTuple::new(triple()).unwrap();
        let p = eval_tracezero_generators(&t);
        assert_eq!(p.len(), 7);
        assert_eq!(p.value("t(1,1)"), Some(&GaussianRational::from_int(2)));
        assert_eq!(p.value("t(2,2)"), Some(&GaussianRational::from_int(0)));
        assert_eq!(p.value("t(2,3)"), Some(&GaussianRational::from_int(1)));
        assert_eq!(p.value("t(1,2,3)"), Some(&GaussianRational::from_int(1)));
    }

    #[test]
    fn minor_identity_sign_fixed_by_oracle() {
        let t = TraceZeroTuple::new(triple()).unwrap();
        // Coordinate determinant of rows (c; b; a) is -1 here; the trace is +1.
        let v = triple_trace_minor(&t, 1, 2, 3).unwrap();
        assert_eq!(v, word_trace(t.tuple(), &[1, 2, 3]).unwrap());
        assert_eq!(v, GaussianRational::from_int(1));
    }

    #[test]
    fn minor_repeated_index_vanishes() {
        let t = TraceZeroTuple::new(triple()).unwrap();
        assert!(triple_trace_minor(&t, 1, 1, 2).unwrap().is_zero());
    }

    #[test]
    fn minor_antisymmetry() {
        let mut rng = RngStream::from_seed(9);
        let t = random_tracezero_tuple(&mut rng, 3, 6);
        let v = triple_trace_minor(&t, 1, 2, 3).unwrap();
        assert_eq!(triple_trace_minor(&t, 1, 3, 2).unwrap(), -&v);
        assert_eq!(triple_trace_minor(&t, 2, 3, 1).unwrap(), v);
    }

    #[test]
    fn minor_agrees_with_word_trace_randomized() {
        let mut rng = RngStream::from_seed(21);
        for _ in 0..50 {
            let t = random_tracezero_tuple(&mut rng, 4, 5);
            for (i, j, k) in [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)] {
                assert_eq!(
                    triple_trace_minor(&t, i, j, k).unwrap(),
                    word_trace(t.tuple(), &[i, j, k]).unwrap()
                );
            }
        }
    }

    #[test]
    fn gram_relation_fixed_constant() {
        let t = TraceZeroTuple::new(triple()).unwrap();
        let (lhs, det, c) = gram_relation_check(&t, (1, 2, 3), (1, 2, 3)).unwrap();
        assert_eq!(lhs, GaussianRational::from_int(1));
        assert_eq!(det, GaussianRational::from_int(-2));
        assert_eq!(lhs, &c * &det);
    }

    #[test]
    fn gram_relation_randomized() {
        let mut rng = RngStream::from_seed(33);
        for _ in 0..30 {
            let t = random_tracezero_tuple(&mut rng, 4, 4);
            for (ijk, pqr) in [((1, 2, 3), (1, 2, 3)), ((1, 2, 3), (1, 2, 4)), ((1, 2, 4), (2, 3, 4))] {
                let (lhs, det, c) = gram_relation_check(&t, ijk, pqr).unwrap();
                assert_eq!(lhs, &c * &det);
            }
        }
    }

    #[test]
    fn orbit_invariance_sample() {
        let mut rng = RngStream::from_seed(55);
        for _ in 0..100 {
            let t = random_tuple(&mut rng, 3, 5);
            let g = random_sl2(&mut rng, 5);
            assert_eq!(
                eval_full_generators(&conj_act(&g, &t)),
                eval_full_generators(&t)
            );
        }
    }

    #[test]
    fn size_table_paper_rows() {
        let n5 = cardinality_and_dimension(5);
        assert_eq!((n5.s_n, n5.s_prime, n5.dim_conj), (30, 27, 17));
        assert_eq!((n5.h_set, n5.dim_h), (20, 14));
        let n8 = cardinality_and_dimension(8);
        assert_eq!((n8.s_n, n8.s_prime), (100, 60));
        let n4 = cardinality_and_dimension(4);
        assert_eq!((n4.h_set, n4.dim_h), (11, 10));
    }
}
