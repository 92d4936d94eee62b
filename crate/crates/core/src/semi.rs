//! Separating invariants of the left-right SL2 x SL2 action: determinants,
//! brackets, and the quadruple invariant xi, plus the sigma transfer back to
//! the conjugation problem.

use crate::conj::{binom2, binom4, Family, InvariantProfile};
use crate::error::{Error, Result};
use crate::matrix::{Mat2, MatTuple};
use crate::scalar::GaussianRational;

/// Tr(A_i)Tr(A_j) - Tr(A_i A_j).
pub fn bracket(t: &MatTuple, i: usize, j: usize) -> Result<GaussianRational> {
    let a = t.slot(i)?;
    let b = t.slot(j)?;
    Ok(&(&a.trace() * &b.trace()) - &a.mul(b).trace())
}

/// Determinant of a 4x4 matrix over Q(i) by cofactor expansion.
pub fn det4(m: &[[GaussianRational; 4]; 4]) -> GaussianRational {
    let minor3 = |rows: [usize; 3], cols: [usize; 3]| {
        crate::conj::det3(&[
            [
                m[rows[0]][cols[0]].clone(),
                m[rows[0]][cols[1]].clone(),
                m[rows[0]][cols[2]].clone(),
            ],
            [
                m[rows[1]][cols[0]].clone(),
                m[rows[1]][cols[1]].clone(),
                m[rows[1]][cols[2]].clone(),
            ],
            [
                m[rows[2]][cols[0]].clone(),
                m[rows[2]][cols[1]].clone(),
                m[rows[2]][cols[2]].clone(),
            ],
        ])
    };
    let mut acc = GaussianRational::from_int(0);
    let rest = [1, 2, 3];
    for (j, sign) in [(0usize, 1i64), (1, -1), (2, 1), (3, -1)] {
        if m[0][j].is_zero() {
            continue;
        }
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let mv = minor3(rest, [cols[0], cols[1], cols[2]]);
        acc = &acc + &(&(&GaussianRational::from_int(sign) * &m[0][j]) * &mv);
    }
    acc
}

/// The 4x4 block matrix [[s_i A_i, s_j A_j], [s_k A_k, s_l A_l]] with the
/// block scalars fixed at 0 or 1.
fn block_det(mats: [&Mat2; 4], mask: [bool; 4]) -> GaussianRational {
    let zero = GaussianRational::from_int(0);
    let block = |m: &Mat2, on: bool, i: usize, j: usize| {
        if on {
            m.entry(i, j).clone()
        } else {
            zero.clone()
        }
    };
    let [mi, mj, mk, ml] = mats;
    let [si, sj, sk, sl] = mask;
    let rows = [
        [
            block(mi, si, 0, 0),
            block(mi, si, 0, 1),
            block(mj, sj, 0, 0),
            block(mj, sj, 0, 1),
        ],
        [
            block(mi, si, 1, 0),
            block(mi, si, 1, 1),
            block(mj, sj, 1, 0),
            block(mj, sj, 1, 1),
        ],
        [
            block(mk, sk, 0, 0),
            block(mk, sk, 0, 1),
            block(ml, sl, 0, 0),
            block(ml, sl, 0, 1),
        ],
        [
            block(mk, sk, 1, 0),
            block(mk, sk, 1, 1),
            block(ml, sl, 1, 0),
            block(ml, sl, 1, 1),
        ],
    ];
    det4(&rows)
}

/// xi(X_i X_j X_k X_l): the coefficient of a_i a_j a_k a_l in the block
/// determinant, extracted by inclusion-exclusion over the 16 subsets of
/// block scalars set to one.
pub fn xi(t: &MatTuple, q: (usize, usize, usize, usize)) -> Result<GaussianRational> {
    let (i, j, k, l) = q;
    let mats = [t.slot(i)?, t.slot(j)?, t.slot(k)?, t.slot(l)?];
    let mut acc = GaussianRational::from_int(0);
    for bits in 0u8..16 {
        let mask = [
            bits & 1 != 0,
            bits & 2 != 0,
            bits & 4 != 0,
            bits & 8 != 0,
        ];
        let popcount = mask.iter().filter(|&&b| b).count();
        let sign = if (4 - popcount) % 2 == 0 { 1 } else { -1 };
        let d = block_det(mats, mask);
        acc = &acc + &(&GaussianRational::from_int(sign) * &d);
    }
    Ok(acc)
}

/// Profile of the H-separating family: dets, brackets (lex), xi values (lex).
pub fn eval_h_generators(t: &MatTuple) -> InvariantProfile {
    let n = t.n();
    let mut entries = Vec::with_capacity(n + binom2(n) + binom4(n));
    for i in 1..=n {
        entries.push((format!("det({i})"), t.slot(i).unwrap().det()));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            entries.push((format!("br({i},{j})"), bracket(t, i, j).unwrap()));
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for l in k + 1..=n {
                    entries.push((
                        format!("xi({i},{j},{k},{l})"),
                        xi(t, (i, j, k, l)).unwrap(),
                    ));
                }
            }
        }
    }
    InvariantProfile {
        family: Family::SemiInvariantH,
        entries,
    }
}

/// H-equivalence decision with witness.
pub fn decide_equiv_h(a: &MatTuple, b: &MatTuple) -> Result<(bool, Option<String>)> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(a.n(), b.n()));
    }
    let pa = eval_h_generators(a);
    let pb = eval_h_generators(b);
    match pa.first_difference(&pb)? {
        Some(w) => Ok((false, Some(w))),
        None => Ok((true, None)),
    }
}

/// Appends the identity as slot n+1 and decides H-equivalence of the
/// extended pair; by the sigma transfer this decides conjugation
/// equivalence of the original pair.
pub fn conj_equiv_via_sigma(a: &MatTuple, b: &MatTuple) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(a.n(), b.n()));
    }
    let extend = |t: &MatTuple| {
        let mut mats = t.mats().to_vec();
        mats.push(Mat2::identity());
        MatTuple::new(mats).unwrap()
    };
    Ok(decide_equiv_h(&extend(a), &extend(b))?.0)
}
