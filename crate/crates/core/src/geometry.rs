//! Simultaneous triangularization, closed-orbit detection, the C / C' / C0
//! pair subspaces, the 3xn m-matrix with its Delta minors, and classification
//! of inseparable trace-zero pairs by separating-variety component.

use serde::{Deserialize, Serialize};

use crate::conj::eval_tracezero_generators;
use crate::error::{Error, Result};
use crate::matrix::{conj_act, Mat2, MatTuple, SL2Element, TraceZeroTuple};
use crate::scalar::GaussianRational;

/// det(A_i A_j - A_j A_i).
pub fn commutator_det(a: &Mat2, b: &Mat2) -> GaussianRational {
    a.commutator(b).det()
}

/// Florentino's criterion: Tr(A_i A_j A_k) = Tr(A_k A_j A_i) for all i<j<k
/// and det([A_i, A_j]) = 0 for all i<j.
pub fn is_triangularizable(t: &MatTuple) -> bool {
    let n = t.n();
    for i in 1..=n {
        for j in i + 1..=n {
            let a = t.slot(i).unwrap();
            let b = t.slot(j).unwrap();
            if !commutator_det(a, b).is_zero() {
                return false;
            }
            for k in j + 1..=n {
                let c = t.slot(k).unwrap();
                let fwd = a.mul(b).mul(c).trace();
                let bwd = c.mul(b).mul(a).trace();
                if fwd != bwd {
                    return false;
                }
            }
        }
    }
    true
}

/// Finds g in SL2 with g A_i g^{-1} upper triangular for all i, by common
/// eigenvector search over Q(i).
pub fn triangularize(t: &MatTuple) -> Result<SL2Element> {
    if !is_triangularizable(t) {
        return Err(Error::NotTriangularizable);
    }
    if t.is_upper_triangular() {
        return Ok(SL2Element::identity());
    }
    if t.is_lower_triangular() {
        return Ok(SL2Element::weyl());
    }

    // First slot that is not a scalar multiple of the identity fixes the
    // candidate eigenvectors; the rest of the tuple filters them.
    let half = GaussianRational::from_ratio(1, 2).unwrap();
    let pivot = t.mats().iter().find(|m| {
        let s = &half * &m.trace();
        !m.sub(&Mat2::identity().scale(&s)).is_zero()
    });
    let pivot = match pivot {
        Some(m) => m,
        // all slots scalar: already upper triangular, handled above
        None => return Ok(SL2Element::identity()),
    };

    let tr = pivot.trace();
    let four = GaussianRational::from_int(4);
    let disc = &(&tr * &tr) - &(&four * &pivot.det());
    let s = disc.sqrt_in_field().map_err(|e| match e {
        Error::NotASquare => Error::FieldExtensionRequired,
        other => other,
    })?;
    let two_inv = half;
    let lam1 = &(&tr + &s) * &two_inv;
    let lam2 = &(&tr - &s) * &two_inv;
    let mut eigenvalues = vec![lam1.clone()];
    if lam2 != lam1 {
        eigenvalues.push(lam2);
    }

    for lam in eigenvalues {
        if let Some(v) = eigenvector(pivot, &lam) {
            if is_common_eigenvector(t, &v) {
                let g = complete_to_sl2(&v)?;
                let out = conj_act(&g, t);
                if out.is_upper_triangular() {
                    return Ok(g);
                }
                return Err(Error::Internal(
                    "common eigenvector did not triangularize".into(),
                ));
            }
        }
    }
    // Criterion held but no eigenvector worked; cannot happen over a field
    // containing all needed eigenvalues.
    Err(Error::Internal("no common eigenvector found".into()))
}

/// Kernel vector of (A - lam I), which has rank 1 for a non-scalar A.
fn eigenvector(a: &Mat2, lam: &GaussianRational) -> Option<(GaussianRational, GaussianRational)> {
    let p = a.e11() - lam;
    let q = a.e12().clone();
    let r = a.e21().clone();
    let s = a.e22() - lam;
    // kernel of row (p, q) is (q, -p)
    if !p.is_zero() || !q.is_zero() {
        Some((q, -&p))
    } else if !r.is_zero() || !s.is_zero() {
        Some((s, -&r))
    } else {
        None
    }
}

fn is_common_eigenvector(t: &MatTuple, v: &(GaussianRational, GaussianRational)) -> bool {
    t.mats().iter().all(|m| {
        let w1 = &(m.e11() * &v.0) + &(m.e12() * &v.1);
        let w2 = &(m.e21() * &v.0) + &(m.e22() * &v.1);
        // (w1, w2) parallel to (v1, v2)
        (&w1 * &v.1 - &w2 * &v.0).is_zero()
    })
}

/// Builds g with g^{-1} e1 = v, so conjugation by g sends v to the first
/// coordinate axis.
fn complete_to_sl2(v: &(GaussianRational, GaussianRational)) -> Result<SL2Element> {
    let (v1, v2) = v;
    let (w1, w2) = if !v1.is_zero() {
        (GaussianRational::from_int(0), v1.inv()?)
    } else {
        (-&v2.inv()?, GaussianRational::from_int(0))
    };
    let ginv = Mat2::new(v1.clone(), w1, v2.clone(), w2);
    Ok(SL2Element::new(ginv)?.inverse())
}

/// A trace-zero orbit is closed exactly for the zero tuple and the
/// non-triangularizable tuples.
pub fn has_closed_orbit(t: &TraceZeroTuple) -> bool {
    t.tuple().is_zero() || !is_triangularizable(t.tuple())
}

/// Diagonal-matching class of an upper-triangular pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairClass {
    InC,
    InCPrime,
    InC0,
    NotInC,
}

/// An upper-triangular trace-zero pair with its diagonal class.
#[derive(Debug, Clone)]
pub struct PairForm {
    pub a: TraceZeroTuple,
    pub b: TraceZeroTuple,
    pub class: PairClass,
}

/// Classifies an upper-triangular pair into C / C' / C0 / neither.
pub fn pair_form(a: &TraceZeroTuple, b: &TraceZeroTuple) -> Result<PairForm> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(a.n(), b.n()));
    }
    if !a.tuple().is_upper_triangular() || !b.tuple().is_upper_triangular() {
        return Err(Error::NotUpperTriangular);
    }
    let n = a.n();
    let mut all_equal = true;
    let mut all_opposite = true;
    let mut all_zero = true;
    for i in 1..=n {
        let ba = a.b(i)?;
        let bb = b.b(i)?;
        if ba != bb {
            all_equal = false;
        }
        if *bb != -ba {
            all_opposite = false;
        }
        if !ba.is_zero() || !bb.is_zero() {
            all_zero = false;
        }
    }
    let class = if all_zero {
        PairClass::InC0
    } else if all_equal {
        PairClass::InC
    } else if all_opposite {
        PairClass::InCPrime
    } else {
        PairClass::NotInC
    };
    Ok(PairForm {
        a: a.clone(),
        b: b.clone(),
        class,
    })
}

/// The 3xn matrix with rows (b; c; c') attached to a C-family pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MMatrix {
    pub rows: [Vec<GaussianRational>; 3],
}

impl MMatrix {
    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    /// 3x3 minor on columns i, j, k (1-based).
    pub fn delta(&self, i: usize, j: usize, k: usize) -> GaussianRational {
        let col = |r: usize, c: usize| self.rows[r][c - 1].clone();
        crate::conj::det3(&[
            [col(0, i), col(0, j), col(0, k)],
            [col(1, i), col(1, j), col(1, k)],
            [col(2, i), col(2, j), col(2, k)],
        ])
    }

    /// Exact rank by fraction-free Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<GaussianRational>> = self.rows.to_vec();
        let ncols = self.n();
        let mut rank = 0;
        let mut col = 0;
        while rank < 3 && col < ncols {
            if let Some(p) = (rank..3).find(|&r| !rows[r][col].is_zero()) {
                rows.swap(rank, p);
                for r in rank + 1..3 {
                    if rows[r][col].is_zero() {
                        continue;
                    }
                    // fraction-free: row_r <- pivot*row_r - lead*row_rank
                    let pivot = rows[rank][col].clone();
                    let lead = rows[r][col].clone();
                    for c in col..ncols {
                        rows[r][c] = &(&pivot * &rows[r][c]) - &(&lead * &rows[rank][c]);
                    }
                }
                rank += 1;
            }
            col += 1;
        }
        rank
    }
}

/// Builds the m-matrix of a C-family pair, its rank, and the triples with
/// nonvanishing Delta.
pub fn m_matrix_and_rank(p: &PairForm) -> Result<(MMatrix, usize, Vec<(usize, usize, usize)>)> {
    if p.class == PairClass::NotInC {
        return Err(Error::NotInCFamily);
    }
    let n = p.a.n();
    let mut b_row = Vec::with_capacity(n);
    let mut c_row = Vec::with_capacity(n);
    let mut cp_row = Vec::with_capacity(n);
    for i in 1..=n {
        b_row.push(p.a.b(i)?.clone());
        c_row.push(p.a.c(i)?.clone());
        cp_row.push(p.b.c(i)?.clone());
    }
    let m = MMatrix {
        rows: [b_row, c_row, cp_row],
    };
    let rank = m.rank();
    let mut nonzero = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                if !m.delta(i, j, k).is_zero() {
                    nonzero.push((i, j, k));
                }
            }
        }
    }
    Ok((m, rank, nonzero))
}

/// Proportionality c_i c'_j = c_j c'_i for all i < j: membership of a
/// diagonalized C-pair in the torus graph closure.
pub fn torus_graph_condition(p: &PairForm) -> Result<bool> {
    if !matches!(p.class, PairClass::InC | PairClass::InC0) {
        return Err(Error::NotInCFamily);
    }
    let n = p.a.n();
    for i in 1..=n {
        for j in i + 1..=n {
            let lhs = p.a.c(i)? * p.b.c(j)?;
            let rhs = p.a.c(j)? * p.b.c(i)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Verdict for a pair of trace-zero tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairClassification {
    NotEquivalent,
    GraphClosure,
    ExtraComponentOnly,
    Both,
}

/// Classifies an inseparable trace-zero pair by separating-variety component.
///
/// Inseparable pairs with a closed orbit on either side lie in the graph
/// closure. Otherwise both tuples triangularize; C' pairs lie in the graph
/// closure, and C pairs split on the rank of the m-matrix: rank <= 2 means
/// the pair sits in the component intersection, rank 3 means it lies only
/// in the extra component.
pub fn classify_pair(a: &TraceZeroTuple, b: &TraceZeroTuple) -> Result<PairClassification> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(a.n(), b.n()));
    }
    let pa = eval_tracezero_generators(a);
    let pb = eval_tracezero_generators(b);
    if pa.first_difference(&pb)?.is_some() {
        return Ok(PairClassification::NotEquivalent);
    }
    if has_closed_orbit(a) || has_closed_orbit(b) {
        return Ok(PairClassification::GraphClosure);
    }
    let ga = triangularize(a.tuple())?;
    let gb = triangularize(b.tuple())?;
    let ta = TraceZeroTuple::new(conj_act(&ga, a.tuple()))?;
    let tb = TraceZeroTuple::new(conj_act(&gb, b.tuple()))?;
    let form = pair_form(&ta, &tb)?;
    match form.class {
        PairClass::InCPrime => Ok(PairClassification::GraphClosure),
        PairClass::InC | PairClass::InC0 => {
            let (_, rank, _) = m_matrix_and_rank(&form)?;
            if rank <= 2 {
                Ok(PairClassification::Both)
            } else {
                Ok(PairClassification::ExtraComponentOnly)
            }
        }
        // Inseparability forces coherent diagonal signs after
        // triangularization, so this branch is unreachable.
        PairClass::NotInC => Err(Error::Internal(
            "inseparable pair with incoherent diagonals".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{random_sl2, random_tracezero_tuple, RngStream};
    use crate::reduced::decide_equiv_full;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from_int(v)
    }

    fn e12t() -> Mat2 {
        Mat2::from_ints(0, 1, 0, 0)
    }
    fn e21t() -> Mat2 {
        Mat2::from_ints(0, 0, 1, 0)
    }

    #[test]
    fn commutator_det_examples() {
        let a = e12t();
        assert!(commutator_det(&a, &a).is_zero());
        assert_eq!(commutator_det(&e12t(), &e21t()), g(-1));
    }

    #[test]
    fn commutator_det_tracezero_identity() {
        let mut rng = RngStream::from_seed(4);
        for _ in 0..50 {
            let t = random_tracezero_tuple(&mut rng, 2, 6);
            let a = t.tuple().slot(1).unwrap();
            let b = t.tuple().slot(2).unwrap();
            let lhs = commutator_det(a, b);
            let tab = a.mul(b).trace();
            let rhs = &(&(&g(4) * &a.det()) * &b.det()) - &(&tab * &tab);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn triangularizable_examples() {
        let upper = MatTuple::new(vec![Mat2::from_ints(1, 0, 0, -1), e12t()]).unwrap();
        assert!(is_triangularizable(&upper));
        let bad = MatTuple::new(vec![e12t(), e21t()]).unwrap();
        assert!(!is_triangularizable(&bad));
    }

    #[test]
    fn triangularizable_conj_invariant() {
        let mut rng = RngStream::from_seed(6);
        let upper = MatTuple::new(vec![Mat2::from_ints(1, 2, 0, -1), e12t()]).unwrap();
        for _ in 0..20 {
            let gg = random_sl2(&mut rng, 5);
            assert!(is_triangularizable(&conj_act(&gg, &upper)));
        }
    }

    #[test]
    fn triangularize_trivial_cases() {
        let upper = MatTuple::new(vec![Mat2::from_ints(1, 2, 0, -1)]).unwrap();
        assert_eq!(triangularize(&upper).unwrap(), SL2Element::identity());
        let lower = MatTuple::new(vec![Mat2::from_ints(1, 0, 2, -1)]).unwrap();
        assert_eq!(triangularize(&lower).unwrap(), SL2Element::weyl());
    }

    #[test]
    fn triangularize_needs_field_extension() {
        // eigenvalues +-sqrt(2)
        let t = MatTuple::new(vec![Mat2::from_ints(0, 1, 2, 0)]).unwrap();
        assert_eq!(triangularize(&t), Err(Error::FieldExtensionRequired));
    }

    #[test]
    fn triangularize_rejects_nontriangularizable() {
        let t = MatTuple::new(vec![e12t(), e21t()]).unwrap();
        assert_eq!(triangularize(&t), Err(Error::NotTriangularizable));
    }

    #[test]
    fn triangularize_certificate_randomized() {
        let mut rng = RngStream::from_seed(19);
        for _ in 0..40 {
            // conjugate a random upper-triangular trace-zero tuple
            let coords: Vec<_> = (0..3)
                .map(|_| (rng.scalar(5), rng.scalar(5), g(0)))
                .collect();
            let t = TraceZeroTuple::from_coords(coords).unwrap();
            let gg = random_sl2(&mut rng, 5);
            let moved = conj_act(&gg, t.tuple());
            let cert = triangularize(&moved).unwrap();
            assert!(conj_act(&cert, &moved).is_upper_triangular());
        }
    }

    #[test]
    fn closed_orbit_examples() {
        let zero = TraceZeroTuple::new(MatTuple::new(vec![Mat2::zero()]).unwrap()).unwrap();
        assert!(has_closed_orbit(&zero));
        let nil = TraceZeroTuple::new(MatTuple::new(vec![e12t()]).unwrap()).unwrap();
        assert!(!has_closed_orbit(&nil));
        let pair = TraceZeroTuple::new(MatTuple::new(vec![e12t(), e21t()]).unwrap()).unwrap();
        assert!(has_closed_orbit(&pair));
    }

    fn upper(b: i64, c: i64) -> (GaussianRational, GaussianRational, GaussianRational) {
        (g(b), g(c), g(0))
    }

    #[test]
    fn pair_form_classes() {
        let a = TraceZeroTuple::from_coords(vec![upper(1, 0), upper(1, 1)]).unwrap();
        let b = TraceZeroTuple::from_coords(vec![upper(1, 2), upper(1, 0)]).unwrap();
        assert_eq!(pair_form(&a, &b).unwrap().class, PairClass::InC);

        let c = TraceZeroTuple::from_coords(vec![upper(-1, 2), upper(-1, 0)]).unwrap();
        assert_eq!(pair_form(&a, &c).unwrap().class, PairClass::InCPrime);

        let z1 = TraceZeroTuple::from_coords(vec![upper(0, 1), upper(0, 2)]).unwrap();
        let z2 = TraceZeroTuple::from_coords(vec![upper(0, 3), upper(0, 4)]).unwrap();
        assert_eq!(pair_form(&z1, &z2).unwrap().class, PairClass::InC0);
    }

    #[test]
    fn pair_form_requires_upper_triangular() {
        let a = TraceZeroTuple::new(MatTuple::new(vec![e21t()]).unwrap()).unwrap();
        let b = TraceZeroTuple::new(MatTuple::new(vec![e12t()]).unwrap()).unwrap();
        assert!(matches!(pair_form(&a, &b), Err(Error::NotUpperTriangular)));
    }

    fn paper_example_pair() -> (TraceZeroTuple, TraceZeroTuple) {
        let a = TraceZeroTuple::from_coords(vec![upper(1, 0), upper(1, 1), upper(1, 1)]).unwrap();
        let b = TraceZeroTuple::from_coords(vec![upper(1, 0), upper(1, 0), upper(1, 1)]).unwrap();
        (a, b)
    }

    #[test]
    fn m_matrix_paper_example() {
        let (a, b) = paper_example_pair();
        let form = pair_form(&a, &b).unwrap();
        let (m, rank, nonzero) = m_matrix_and_rank(&form).unwrap();
        assert_eq!(rank, 3);
        assert_eq!(nonzero, vec![(1, 2, 3)]);
        assert_eq!(m.delta(1, 2, 3), g(1));
    }

    #[test]
    fn m_matrix_repeated_row_rank2() {
        let a = TraceZeroTuple::from_coords(vec![upper(1, 2), upper(2, 3), upper(3, 4)]).unwrap();
        let form = pair_form(&a, &a).unwrap();
        let (_, rank, nonzero) = m_matrix_and_rank(&form).unwrap();
        assert!(rank <= 2);
        assert!(nonzero.is_empty());
    }

    #[test]
    fn m_matrix_n2_rank_le_2() {
        let a = TraceZeroTuple::from_coords(vec![upper(1, 2), upper(2, 3)]).unwrap();
        let b = TraceZeroTuple::from_coords(vec![upper(1, 5), upper(2, 7)]).unwrap();
        let form = pair_form(&a, &b).unwrap();
        let (_, rank, _) = m_matrix_and_rank(&form).unwrap();
        assert!(rank <= 2);
    }

    #[test]
    fn classify_paper_example() {
        let (a, b) = paper_example_pair();
        assert!(decide_equiv_full(a.tuple(), b.tuple()).unwrap().0);
        assert_eq!(
            classify_pair(&a, &b).unwrap(),
            PairClassification::ExtraComponentOnly
        );
    }

    #[test]
    fn classify_separated_pair() {
        let a = TraceZeroTuple::from_coords(vec![upper(1, 0)]).unwrap();
        let b = TraceZeroTuple::from_coords(vec![upper(2, 0)]).unwrap();
        assert_eq!(
            classify_pair(&a, &b).unwrap(),
            PairClassification::NotEquivalent
        );
    }

    #[test]
    fn classify_closed_orbit_pair() {
        let t = TraceZeroTuple::new(MatTuple::new(vec![e12t(), e21t()]).unwrap()).unwrap();
        let mut rng = RngStream::from_seed(14);
        let gg = random_sl2(&mut rng, 5);
        let u = TraceZeroTuple::new(conj_act(&gg, t.tuple())).unwrap();
        assert_eq!(
            classify_pair(&t, &u).unwrap(),
            PairClassification::GraphClosure
        );
    }

    #[test]
    fn classify_diagonal_pair() {
        let a = TraceZeroTuple::from_coords(vec![upper(1, 2), upper(2, 3)]).unwrap();
        let v = classify_pair(&a, &a).unwrap();
        assert!(matches!(
            v,
            PairClassification::Both | PairClassification::GraphClosure
        ));
    }

    #[test]
    fn torus_condition_examples() {
        let a = TraceZeroTuple::from_coords(vec![upper(1, 1), upper(1, 2)]).unwrap();
        let b = TraceZeroTuple::from_coords(vec![upper(1, 2), upper(1, 4)]).unwrap();
        let form = pair_form(&a, &b).unwrap();
        assert!(torus_graph_condition(&form).unwrap());

        let c = TraceZeroTuple::from_coords(vec![upper(1, 1), upper(1, 0)]).unwrap();
        let d = TraceZeroTuple::from_coords(vec![upper(1, 0), upper(1, 1)]).unwrap();
        let form2 = pair_form(&c, &d).unwrap();
        assert!(!torus_graph_condition(&form2).unwrap());

        let e = TraceZeroTuple::from_coords(vec![upper(1, 1), upper(1, 2)]).unwrap();
        let f = TraceZeroTuple::from_coords(vec![upper(1, 0), upper(1, 0)]).unwrap();
        let form3 = pair_form(&e, &f).unwrap();
        assert!(torus_graph_condition(&form3).unwrap());
    }

    #[test]
    fn cprime_pairs_inseparable() {
        let mut rng = RngStream::from_seed(23);
        for _ in 0..30 {
            let n = 3;
            let coords: Vec<_> = (0..n).map(|_| (rng.scalar(5), rng.scalar(5), g(0))).collect();
            let a = TraceZeroTuple::from_coords(coords.clone()).unwrap();
            let b = TraceZeroTuple::from_coords(
                coords
                    .iter()
                    .map(|(bb, _, _)| (-bb, rng.scalar(5), g(0)))
                    .collect(),
            )
            .unwrap();
            assert!(decide_equiv_full(a.tuple(), b.tuple()).unwrap().0);
        }
    }
}
