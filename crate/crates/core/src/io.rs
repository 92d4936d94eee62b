//! JSON interchange for tuples, scalars, and reports.
//!
//! Scalars travel as {"re": "p/q", "im": "r/s"}; a tuple document carries n
//! and an array of 2x2 arrays of scalars. Serialization is canonical: fixed
//! key order, reduced fractions, no decimal rendering.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Mat2, MatTuple};
use crate::scalar::{fraction_from_str, fraction_to_string, GaussianRational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarDoc {
    pub re: String,
    pub im: String,
}

impl ScalarDoc {
    pub fn from_scalar(s: &GaussianRational) -> Self {
        ScalarDoc {
            re: fraction_to_string(s.re()),
            im: fraction_to_string(s.im()),
        }
    }

    pub fn to_scalar(&self) -> Result<GaussianRational> {
        Ok(GaussianRational::new(
            fraction_from_str(&self.re)?,
            fraction_from_str(&self.im)?,
        ))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TupleDocument {
    pub n: usize,
    pub matrices: Vec<[[ScalarDoc; 2]; 2]>,
}

impl TupleDocument {
    pub fn from_tuple(t: &MatTuple) -> Self {
        TupleDocument {
            n: t.n(),
            matrices: t
                .mats()
                .iter()
                .map(|m| {
                    [
                        [ScalarDoc::from_scalar(m.e11()), ScalarDoc::from_scalar(m.e12())],
                        [ScalarDoc::from_scalar(m.e21()), ScalarDoc::from_scalar(m.e22())],
                    ]
                })
                .collect(),
        }
    }

    pub fn to_tuple(&self) -> Result<MatTuple> {
        if self.matrices.len() != self.n {
            return Err(Error::LengthMismatch(self.matrices.len(), self.n));
        }
        let mats = self
            .matrices
            .iter()
            .map(|rows| {
                Ok(Mat2::new(
                    rows[0][0].to_scalar()?,
                    rows[0][1].to_scalar()?,
                    rows[1][0].to_scalar()?,
                    rows[1][1].to_scalar()?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        MatTuple::new(mats)
    }
}

pub fn parse_tuple(json: &str) -> Result<MatTuple> {
    let doc: TupleDocument =
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_tuple()
}

pub fn serialize_tuple(t: &MatTuple) -> String {
    serde_json::to_string(&TupleDocument::from_tuple(t)).expect("tuple serialization")
}
