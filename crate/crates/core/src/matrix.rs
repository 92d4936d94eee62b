//! 2x2 matrices over Q(i), n-tuples of them, and the three group actions.

use num::rational::BigRational;
use num::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

/// A 2x2 matrix with Gaussian-rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    e: [[GaussianRational; 2]; 2],
}

impl Mat2 {
    pub fn new(
        e11: GaussianRational,
        e12: GaussianRational,
        e21: GaussianRational,
        e22: GaussianRational,
    ) -> Self {
        Mat2 {
            e: [[e11, e12], [e21, e22]],
        }
    }

    pub fn from_ints(e11: i64, e12: i64, e21: i64, e22: i64) -> Self {
        Mat2::new(
            GaussianRational::from_int(e11),
            GaussianRational::from_int(e12),
            GaussianRational::from_int(e21),
            GaussianRational::from_int(e22),
        )
    }

    pub fn zero() -> Self {
        Mat2::from_ints(0, 0, 0, 0)
    }

    pub fn identity() -> Self {
        Mat2::from_ints(1, 0, 0, 1)
    }

    /// Trace-zero matrix [[b, c], [a, -b]] in the coordinates used throughout.
    pub fn trace_zero(
        b: GaussianRational,
        c: GaussianRational,
        a: GaussianRational,
    ) -> Self {
        let mb = -&b;
        Mat2::new(b, c, a, mb)
    }

    pub fn entry(&self, i: usize, j: usize) -> &GaussianRational {
        &self.e[i][j]
    }

    pub fn e11(&self) -> &GaussianRational {
        &self.e[0][0]
    }
    pub fn e12(&self) -> &GaussianRational {
        &self.e[0][1]
    }
    pub fn e21(&self) -> &GaussianRational {
        &self.e[1][0]
    }
    pub fn e22(&self) -> &GaussianRational {
        &self.e[1][1]
    }

    pub fn trace(&self) -> GaussianRational {
        &self.e[0][0] + &self.e[1][1]
    }

    pub fn det(&self) -> GaussianRational {
        &(&self.e[0][0] * &self.e[1][1]) - &(&self.e[0][1] * &self.e[1][0])
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(|x| x.is_zero())
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.e[1][0].is_zero()
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.e[0][1].is_zero()
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let p = |i: usize, j: usize| {
            &(&self.e[i][0] * &rhs.e[0][j]) + &(&self.e[i][1] * &rhs.e[1][j])
        };
        Mat2 {
            e: [[p(0, 0), p(0, 1)], [p(1, 0), p(1, 1)]],
        }
    }

    /// Tr(self * rhs) without forming the product; four multiplications
    /// instead of eight.
    pub fn trace_of_product(&self, rhs: &Mat2) -> GaussianRational {
        &(&(&self.e[0][0] * &rhs.e[0][0]) + &(&self.e[0][1] * &rhs.e[1][0]))
            + &(&(&self.e[1][0] * &rhs.e[0][1]) + &(&self.e[1][1] * &rhs.e[1][1]))
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        let s = |i: usize, j: usize| &self.e[i][j] + &rhs.e[i][j];
        Mat2 {
            e: [[s(0, 0), s(0, 1)], [s(1, 0), s(1, 1)]],
        }
    }

    pub fn sub(&self, rhs: &Mat2) -> Mat2 {
        let s = |i: usize, j: usize| &self.e[i][j] - &rhs.e[i][j];
        Mat2 {
            e: [[s(0, 0), s(0, 1)], [s(1, 0), s(1, 1)]],
        }
    }

    pub fn scale(&self, k: &GaussianRational) -> Mat2 {
        let s = |i: usize, j: usize| k * &self.e[i][j];
        Mat2 {
            e: [[s(0, 0), s(0, 1)], [s(1, 0), s(1, 1)]],
        }
    }

    pub fn commutator(&self, rhs: &Mat2) -> Mat2 {
        self.mul(rhs).sub(&rhs.mul(self))
    }
}

/// An element of SL2 over Q(i): a Mat2 with determinant exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SL2Element(Mat2);

impl SL2Element {
    pub fn new(g: Mat2) -> Result<Self> {
        if g.det().is_one() {
            Ok(SL2Element(g))
        } else {
            Err(Error::SingularMatrix)
        }
    }

    pub fn identity() -> Self {
        SL2Element(Mat2::identity())
    }

    /// [[0, 1], [-1, 0]]: swaps upper and lower triangular form under conjugation.
    pub fn weyl() -> Self {
        SL2Element(Mat2::from_ints(0, 1, -1, 0))
    }

    /// Elementary matrix with u in the (1,2) position.
    pub fn e12(u: GaussianRational) -> Self {
        SL2Element(Mat2::new(
            GaussianRational::from_int(1),
            u,
            GaussianRational::from_int(0),
            GaussianRational::from_int(1),
        ))
    }

    /// Elementary matrix with v in the (2,1) position.
    pub fn e21(v: GaussianRational) -> Self {
        SL2Element(Mat2::new(
            GaussianRational::from_int(1),
            GaussianRational::from_int(0),
            v,
            GaussianRational::from_int(1),
        ))
    }

    pub fn mat(&self) -> &Mat2 {
        &self.0
    }

    /// For det = 1 the inverse is the adjugate.
    pub fn inverse(&self) -> SL2Element {
        let m = &self.0;
        SL2Element(Mat2::new(
            m.e22().clone(),
            -m.e12(),
            -m.e21(),
            m.e11().clone(),
        ))
    }

    pub fn compose(&self, rhs: &SL2Element) -> SL2Element {
        SL2Element(self.0.mul(&rhs.0))
    }
}

/// An n-tuple of 2x2 matrices, the central object of every group action here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatTuple {
    mats: Vec<Mat2>,
}

impl MatTuple {
    pub fn new(mats: Vec<Mat2>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::LengthMismatch(0, 1));
        }
        Ok(MatTuple { mats })
    }

    pub fn n(&self) -> usize {
        self.mats.len()
    }

    /// 1-based slot access.
    pub fn slot(&self, i: usize) -> Result<&Mat2> {
        if i == 0 || i > self.n() {
            return Err(Error::IndexOutOfRange(i, self.n()));
        }
        Ok(&self.mats[i - 1])
    }

    pub fn mats(&self) -> &[Mat2] {
        &self.mats
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(Mat2::is_zero)
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.mats.iter().all(Mat2::is_upper_triangular)
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.mats.iter().all(Mat2::is_lower_triangular)
    }

    /// Projects onto trace-zero parts and returns the removed traces.
    pub fn tracefree_part(&self) -> (TraceZeroTuple, Vec<GaussianRational>) {
        let half = GaussianRational::from_ratio(1, 2).unwrap();
        let traces: Vec<GaussianRational> = self.mats.iter().map(Mat2::trace).collect();
        let mats = self
            .mats
            .iter()
            .zip(&traces)
            .map(|(m, t)| m.sub(&Mat2::identity().scale(&(&half * t))))
            .collect();
        (TraceZeroTuple(MatTuple { mats }), traces)
    }
}

/// A MatTuple in which every slot has trace zero; slot i is [[b_i, c_i], [a_i, -b_i]].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceZeroTuple(MatTuple);

impl TraceZeroTuple {
    pub fn new(t: MatTuple) -> Result<Self> {
        if t.mats.iter().any(|m| !m.trace().is_zero()) {
            return Err(Error::NotTraceZero);
        }
        Ok(TraceZeroTuple(t))
    }

    pub fn from_coords(coords: Vec<(GaussianRational, GaussianRational, GaussianRational)>) -> Result<Self> {
        let mats = coords
            .into_iter()
            .map(|(b, c, a)| Mat2::trace_zero(b, c, a))
            .collect();
        Ok(TraceZeroTuple(MatTuple::new(mats)?))
    }

    pub fn tuple(&self) -> &MatTuple {
        &self.0
    }

    pub fn into_tuple(self) -> MatTuple {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn b(&self, i: usize) -> Result<&GaussianRational> {
        Ok(self.0.slot(i)?.e11())
    }

    pub fn c(&self, i: usize) -> Result<&GaussianRational> {
        Ok(self.0.slot(i)?.e12())
    }

    pub fn a(&self, i: usize) -> Result<&GaussianRational> {
        Ok(self.0.slot(i)?.e21())
    }
}

/// Slot-wise conjugation g A_i g^{-1}.
pub fn conj_act(g: &SL2Element, t: &MatTuple) -> MatTuple {
    let ginv = g.inverse();
    MatTuple {
        mats: t
            .mats
            .iter()
            .map(|m| g.mat().mul(m).mul(ginv.mat()))
            .collect(),
    }
}

pub fn conj_act_tz(g: &SL2Element, t: &TraceZeroTuple) -> TraceZeroTuple {
    TraceZeroTuple(conj_act(g, t.tuple()))
}

/// Slot-wise h1 A_i h2^{-1}.
pub fn leftright_act(h1: &SL2Element, h2: &SL2Element, t: &MatTuple) -> MatTuple {
    let h2inv = h2.inverse();
    MatTuple {
        mats: t
            .mats
            .iter()
            .map(|m| h1.mat().mul(m).mul(h2inv.mat()))
            .collect(),
    }
}

/// The commuting GL_n action: slot k of the result is sum_l h[k][l] * A_l.
pub fn star_act(h: &[Vec<GaussianRational>], t: &MatTuple) -> Result<MatTuple> {
    let n = t.n();
    if h.len() != n || h.iter().any(|row| row.len() != n) {
        return Err(Error::SizeMismatch(h.len(), n));
    }
    if !is_invertible(h) {
        return Err(Error::SingularMatrix);
    }
    let mats = h
        .iter()
        .map(|row| {
            let mut acc = Mat2::zero();
            for (coef, m) in row.iter().zip(&t.mats) {
                if !coef.is_zero() {
                    acc = acc.add(&m.scale(coef));
                }
            }
            acc
        })
        .collect();
    Ok(MatTuple { mats })
}

/// Exact rank test by Gaussian elimination over Q(i).
fn is_invertible(h: &[Vec<GaussianRational>]) -> bool {
    let n = h.len();
    let mut rows: Vec<Vec<GaussianRational>> = h.to_vec();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !rows[r][col].is_zero()) {
            Some(p) => p,
            None => return false,
        };
        rows.swap(col, pivot);
        let inv = rows[col][col].inv().unwrap();
        for r in col + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] * &inv;
            for c in col..n {
                rows[r][c] = &rows[r][c] - &(&factor * &rows[col][c]);
            }
        }
    }
    true
}

/// Deterministic random stream for harness sampling.
pub struct RngStream(ChaCha8Rng);

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        RngStream(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Disjoint substream for parallel trials.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        r.set_stream(index.wrapping_add(1));
        RngStream(r)
    }

    pub fn rational(&mut self, bound: i64) -> BigRational {
        let num = self.0.gen_range(-bound..=bound);
        let den = self.0.gen_range(1..=bound);
        BigRational::new(num.into(), den.into())
    }

    /// Random element of Q(i); imaginary part zero half the time so that
    /// purely rational data also gets exercised.
    pub fn scalar(&mut self, bound: i64) -> GaussianRational {
        let re = self.rational(bound);
        let im = if self.0.gen_bool(0.5) {
            BigRational::zero()
        } else {
            self.rational(bound)
        };
        GaussianRational::new(re, im)
    }

    pub fn index(&mut self, upper: usize) -> usize {
        self.0.gen_range(0..upper)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.index(items.len())]
    }
}

/// E12(u) * E21(v) * E12(w) with bounded random scalars; det is 1 by construction.
pub fn random_sl2(rng: &mut RngStream, bound: i64) -> SL2Element {
    assert!(bound >= 1);
    let u = SL2Element::e12(rng.scalar(bound));
    let v = SL2Element::e21(rng.scalar(bound));
    let w = SL2Element::e12(rng.scalar(bound));
    u.compose(&v).compose(&w)
}

pub fn random_mat2(rng: &mut RngStream, bound: i64) -> Mat2 {
    Mat2::new(
        rng.scalar(bound),
        rng.scalar(bound),
        rng.scalar(bound),
        rng.scalar(bound),
    )
}

pub fn random_tuple(rng: &mut RngStream, n: usize, bound: i64) -> MatTuple {
    MatTuple::new((0..n).map(|_| random_mat2(rng, bound)).collect()).unwrap()
}

pub fn random_tracezero_tuple(rng: &mut RngStream, n: usize, bound: i64) -> TraceZeroTuple {
    TraceZeroTuple::from_coords(
        (0..n)
            .map(|_| (rng.scalar(bound), rng.scalar(bound), rng.scalar(bound)))
            .collect(),
    )
    .unwrap()
}
