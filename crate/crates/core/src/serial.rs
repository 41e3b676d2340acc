//! JSON-friendly records for matrices and forms. Complex numbers are written
//! as `[re, im]` pairs and matrices as row-major nested arrays.

use serde::{Deserialize, Serialize};

use crate::error::{NcgError, Result};
use crate::forms::{increasing_tuples, NCForm};
use crate::linalg::{CMatrix, C64};

pub type ComplexPair = [f64; 2];
pub type MatrixRecord = Vec<Vec<ComplexPair>>;

pub fn complex_to_pair(z: C64) -> ComplexPair {
    [z.re, z.im]
}

pub fn matrix_to_record(m: &CMatrix) -> MatrixRecord {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| complex_to_pair(m[(i, j)])).collect())
        .collect()
}

pub fn matrix_from_record(rows: &MatrixRecord) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(NcgError::InvalidInput("empty matrix".into()));
    }
    let m = rows[0].len();
    if let Some(bad) = rows.iter().find(|r| r.len() != m) {
        return Err(NcgError::DimensionMismatch {
            expected: m,
            found: bad.len(),
        });
    }
    let out = CMatrix::from_fn(n, m, |i, j| C64::new(rows[i][j][0], rows[i][j][1]));
    if !crate::linalg::is_finite(&out) {
        return Err(NcgError::NonFinite);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormComponent {
    pub index: Vec<usize>,
    pub value: MatrixRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormRecord {
    pub degree: usize,
    pub n: usize,
    pub coefficients: Vec<FormComponent>,
}

impl FormRecord {
    pub fn from_form(form: &NCForm) -> Self {
        let d = form.basis().dim();
        let coefficients = increasing_tuples(d, form.degree())
            .into_iter()
            .zip(form.coeffs())
            .map(|(index, m)| FormComponent {
                index,
                value: matrix_to_record(m),
            })
            .collect();
        Self {
            degree: form.degree(),
            n: form.n(),
            coefficients,
        }
    }

    /// Components not listed are zero. Indices must be strictly increasing.
    pub fn to_form(&self) -> Result<NCForm> {
        let mut form = NCForm::zero(self.n, self.degree);
        let d = form.basis().dim();
        for c in &self.coefficients {
            if c.index.len() != self.degree {
                return Err(NcgError::DimensionMismatch {
                    expected: self.degree,
                    found: c.index.len(),
                });
            }
            if c.index.windows(2).any(|w| w[0] >= w[1]) || c.index.iter().any(|&i| i >= d) {
                return Err(NcgError::InvalidInput(format!(
                    "form index {:?} is not an increasing tuple below {d}",
                    c.index
                )));
            }
            let value = crate::lie::AlgebraElement::new(matrix_from_record(&c.value)?)?;
            if value.n() != self.n {
                return Err(NcgError::DimensionMismatch {
                    expected: self.n,
                    found: value.n(),
                });
            }
            form.set_component(&c.index, &value)?;
        }
        Ok(form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn form_roundtrip_through_json() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, p) in [(2, 0), (2, 2), (3, 1)] {
            let w = crate::random::form(&mut rng, n, p);
            let json = serde_json::to_string(&FormRecord::from_form(&w)).unwrap();
            let back: FormRecord = serde_json::from_str(&json).unwrap();
            let d = back.to_form().unwrap().distance(&w).unwrap();
            assert_eq!(d, 0.0, "n={n} p={p}");
        }
    }

    #[test]
    fn rejects_bad_records() {
        let rec = FormRecord {
            degree: 1,
            n: 2,
            coefficients: vec![FormComponent {
                index: vec![3],
                value: vec![vec![[0.0; 2]; 2]; 2],
            }],
        };
        assert!(rec.to_form().is_err());
        assert!(matrix_from_record(&vec![vec![[0.0; 2]; 2], vec![[0.0; 2]]]).is_err());
    }
}
