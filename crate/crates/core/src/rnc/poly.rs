//! Univariate polynomials with [`Scalar`] coefficients, and their roots.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalars::{Backend, Scalar};

/// Coefficients in ascending degree: `c₀ + c₁t + … + c_d t^d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidInput("polynomial with no coefficients".into()));
        };
        let b = first.backend();
        if let Some(bad) = coeffs.iter().find(|c| c.backend() != b) {
            return Err(Error::BackendMismatch(b, bad.backend()));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: Scalar) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn backend(&self) -> Backend {
        self.coeffs[0].backend()
    }

    /// Nominal degree (length − 1); the leading coefficient may be zero.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Scalar {
        self.coeffs.last().expect("nonempty")
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(self.backend()), |acc, c| acc * t + c)
    }

    /// Multiplies by `(t − a)`.
    pub fn mul_linear(&self, a: &Scalar) -> Self {
        let b = self.backend();
        let mut out = vec![Scalar::zero(b); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k + 1] = &out[k + 1] + c;
            out[k] = &out[k] - &(c * a);
        }
        Self { coeffs: out }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let b = self.backend();
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Scalar::zero(b);
        let coeffs = (0..len)
            .map(|k| {
                self.coeffs
                    .get(k)
                    .unwrap_or(&zero)
                    .checked_add(other.coeffs.get(k).unwrap_or(&zero))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coeffs })
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        let b = self.backend();
        if self.coeffs.len() == 1 {
            return Self::constant(Scalar::zero(b));
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::from_int(b, k as i64))
                .collect(),
        }
    }

    fn complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(Scalar::to_complex64).collect()
    }
}

pub(crate) fn horner(coeffs: &[Complex64], t: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * t + p;
        p = p * t + c;
    }
    (p, dp)
}

/// All complex roots, as eigenvalues of the companion matrix followed by
/// one Newton step each. Exact coefficients are lifted to floats; the roots
/// are always on the float backend.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Scalar>> {
    Ok(complex_roots(&p.complex_coeffs())?
        .into_iter()
        .map(Scalar::Complex)
        .collect())
}

pub(crate) fn complex_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = c.len().saturating_sub(1);
    if d == 0 {
        return Err(Error::InvalidInput("constant polynomial has no roots".into()));
    }
    let lead = c[d];
    if lead.norm() == 0.0 {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let mut comp = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        comp[(i, d - 1)] = -c[i] / lead;
    }
    let eig = comp
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Degenerate("companion Schur form did not converge".into()))?;
    Ok(eig
        .iter()
        .map(|&t| {
            let (v, dv) = horner(c, t);
            if dv.norm() > 0.0 {
                let step = t - v / dv;
                if horner(c, step).0.norm() <= v.norm() {
                    return step;
                }
            }
            t
        })
        .collect())
}
