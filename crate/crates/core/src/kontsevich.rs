//! Random orthogonal matrices, the rank of their Hadamard inverses, and a
//! seeded verifier for the claim that this rank is never 3 (and never 1).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, Matrix};
use crate::projective::{column_points, hadamard_inverse, ProjectivePoint};
use crate::scalars::{Backend, Field, GaussianRational, Scalar, Tolerance};

/// Float samples must satisfy `‖AᵀA − I‖_max` at most this.
pub const FLOAT_ORTHOGONALITY: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Skew-symmetric entries have numerators in `[-max_numerator, max_numerator]`.
    pub max_numerator: i64,
    /// and denominators in `[1, max_denominator]`.
    pub max_denominator: i64,
    /// Cap on discarded draws per sample.
    pub max_rejections: usize,
    /// Float samples need every `|entry|` above this.
    pub min_float_entry: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            max_numerator: 20,
            max_denominator: 20,
            max_rejections: 1000,
            min_float_entry: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    CayleyExact,
    GramSchmidtFloat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthoSample {
    pub matrix: Matrix,
    pub field: Field,
    pub method: Method,
    pub seed: u64,
    pub rejections: usize,
}

/// `(I − S)(I + S)⁻¹` for skew-symmetric `S`.
pub fn cayley_transform(s: &Matrix) -> Result<Matrix> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch("Cayley transform of a non-square matrix".into()));
    }
    let n = s.rows();
    let b = s.backend();
    let tol = Tolerance::default();
    for i in 0..n {
        for j in 0..=i {
            if !(s.get(i, j) + s.get(j, i)).is_zero(&tol) {
                return Err(Error::InvalidInput(format!("not skew-symmetric at ({i}, {j})")));
            }
        }
    }
    let id = Matrix::identity(n, b);
    let inv = id.add(s)?.inverse().map_err(|_| Error::Degenerate("I + S is singular".into()))?;
    id.sub(s)?.matmul(&inv)
}

fn random_rational(rng: &mut impl Rng, cfg: &SamplerConfig) -> BigRational {
    let n = rng.random_range(-cfg.max_numerator..=cfg.max_numerator);
    let d = rng.random_range(1..=cfg.max_denominator);
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_skew(m: usize, field: Field, rng: &mut impl Rng, cfg: &SamplerConfig) -> Matrix {
    let b = field.backend();
    let mut s = Matrix::zeros(m, m, b);
    for i in 0..m {
        for j in i + 1..m {
            let v = match field {
                Field::Rational => Scalar::Rational(random_rational(rng, cfg)),
                _ => {
                    let re = random_rational(rng, cfg);
                    let im = random_rational(rng, cfg);
                    Scalar::Gaussian(GaussianRational::new(re, im))
                }
            };
            s.set(j, i, -&v);
            s.set(i, j, v);
        }
    }
    s
}

/// Bilinear Gram–Schmidt, applied twice, on a Gaussian matrix.
fn gram_schmidt(m: usize, complex: bool, rng: &mut impl Rng) -> Option<Matrix> {
    let mut draw = || {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if complex { rng.sample(StandardNormal) } else { 0.0 };
        Complex64::new(re, im)
    };
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut v: Vec<Complex64> = (0..m).map(|_| draw()).collect();
        for _ in 0..2 {
            for u in &cols {
                let d: Complex64 = v.iter().zip(u).map(|(x, y)| x * y).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= d * y;
                }
            }
        }
        let len2: Complex64 = v.iter().map(|x| x * x).sum();
        if len2.norm() < 1e-8 {
            return None;
        }
        let len = len2.sqrt();
        cols.push(v.iter().map(|x| x / len).collect());
    }
    let cols: Vec<Vec<Scalar>> = cols
        .into_iter()
        .map(|c| c.into_iter().map(Scalar::Complex).collect())
        .collect();
    Some(Matrix::from_columns(m, Backend::ComplexFloat, &cols).expect("square"))
}

/// A reproducible orthogonal `m×m` matrix (`AᵀA = I`, bilinear) with no
/// zero entries. Exact fields use the Cayley transform of a random
/// skew-symmetric matrix; float fields use Gram–Schmidt.
pub fn random_orthogonal(m: usize, field: Field, seed: u64, cfg: &SamplerConfig) -> Result<OrthoSample> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("matrix size must be at least 2, got {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rejections = 0;
    loop {
        let candidate = if field.is_exact() {
            let s = random_skew(m, field, &mut rng, cfg);
            cayley_transform(&s)
                .ok()
                .filter(|a| a.entries().all(|x| !x.is_exact_zero()))
        } else {
            gram_schmidt(m, !field.is_real(), &mut rng).filter(|a| {
                a.entries().all(|x| x.magnitude() > cfg.min_float_entry)
                    && a.orthogonality_residual().is_ok_and(|r| r <= FLOAT_ORTHOGONALITY)
            })
        };
        if let Some(matrix) = candidate {
            let method = if field.is_exact() {
                Method::CayleyExact
            } else {
                Method::GramSchmidtFloat
            };
            return Ok(OrthoSample {
                matrix,
                field,
                method,
                seed,
                rejections,
            });
        }
        rejections += 1;
        if rejections > cfg.max_rejections {
            return Err(Error::TooManyRejections(rejections));
        }
    }
}

/// Columns of two independent orthogonal samples: two point sets in `Pⁿ`,
/// each apolar with respect to `Σ (xⁱ)²`. The samples use seeds `2·seed`
/// and `2·seed + 1`.
pub fn double_apolar_pair(
    n: usize,
    field: Field,
    seed: u64,
    cfg: &SamplerConfig,
) -> Result<(Vec<ProjectivePoint>, Vec<ProjectivePoint>)> {
    let a = random_orthogonal(n + 1, field, seed.wrapping_mul(2), cfg)?;
    let b = random_orthogonal(n + 1, field, seed.wrapping_mul(2).wrapping_add(1), cfg)?;
    Ok((column_points(&a.matrix)?, column_points(&b.matrix)?))
}

pub fn hadamard_rank(a: &Matrix, tol: &Tolerance) -> Result<usize> {
    Ok(hadamard_inverse(a)?.rank(tol))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flagged {
    pub trial: u64,
    pub seed: u64,
    pub rank: usize,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifierReport {
    pub m: usize,
    pub trials: u64,
    pub field: Field,
    pub seed: u64,
    pub tolerance: Tolerance,
    pub sampler: SamplerConfig,
    /// Hadamard-inverse rank → number of trials.
    pub histogram: BTreeMap<usize, u64>,
    pub rank3_count: u64,
    pub rank1_count: u64,
    pub rejections: u64,
    /// Exact-backend trials with rank 1 or 3.
    pub violations: Vec<Flagged>,
    /// Float-backend trials whose numerical rank is 1 or 3; these need an
    /// exact re-check and do not count as violations.
    pub suspicious: Vec<Flagged>,
}

impl VerifierReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples `trials` orthogonal matrices (trial `t` uses seed `seed + t`),
/// in parallel, and tallies the ranks of their Hadamard inverses.
pub fn verify_conjecture(
    m: usize,
    trials: u64,
    field: Field,
    seed: u64,
    tol: &Tolerance,
    cfg: &SamplerConfig,
) -> Result<VerifierReport> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("matrix size must be at least 2, got {m}")));
    }
    if trials == 0 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let trial_seed = seed.wrapping_add(t);
            let wrap = |e| Error::Trial {
                trial: t as usize,
                source: Box::new(e),
            };
            let sample = random_orthogonal(m, field, trial_seed, cfg).map_err(wrap)?;
            let rank = hadamard_rank(&sample.matrix, tol).map_err(wrap)?;
            Ok((t, trial_seed, rank, sample))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = VerifierReport {
        m,
        trials,
        field,
        seed,
        tolerance: *tol,
        sampler: cfg.clone(),
        histogram: BTreeMap::new(),
        rank3_count: 0,
        rank1_count: 0,
        rejections: 0,
        violations: Vec::new(),
        suspicious: Vec::new(),
    };
    for (trial, seed, rank, sample) in outcomes {
        *report.histogram.entry(rank).or_default() += 1;
        report.rejections += sample.rejections as u64;
        match rank {
            3 => report.rank3_count += 1,
            1 => report.rank1_count += 1,
            _ => continue,
        }
        let flagged = Flagged {
            trial,
            seed,
            rank,
            matrix: sample.matrix,
        };
        if field.is_exact() {
            report.violations.push(flagged);
        } else {
            report.suspicious.push(flagged);
        }
    }
    Ok(report)
}

/// Whether `σ₄/σ₁ < rel ≤ σ₃/σ₁` for the Hadamard inverse of a float
/// matrix of size at least 4, i.e. it is numerically of rank exactly 3.
pub fn numerically_rank3(a: &Matrix, tol: &Tolerance) -> Result<bool> {
    if a.rows() < 4 {
        return Ok(false);
    }
    let s = hadamard_inverse(a)?.singular_values()?;
    Ok(numerical_rank(&s, tol) == 3)
}

/// The covector `l ↦ pˡᵢ pˡⱼ pˡₖ`.
pub fn triple_hyperplane(points: &[ProjectivePoint], i: usize, j: usize, k: usize) -> Result<Vec<Scalar>> {
    if !(i < j && j < k) {
        return Err(Error::InvalidInput(format!("indices must increase, got ({i}, {j}, {k})")));
    }
    if k >= points.len() {
        return Err(Error::InvalidInput(format!("index {k} out of range for {} points", points.len())));
    }
    let tol = Tolerance::default();
    for &idx in &[i, j, k] {
        if let Some(index) = points[idx].has_zero_coordinate(&tol) {
            return Err(Error::ZeroCoordinate { index });
        }
    }
    let (a, b, c) = (points[i].coords(), points[j].coords(), points[k].coords());
    if a.len() != b.len() || b.len() != c.len() {
        return Err(Error::DimensionMismatch("points of different ambient spaces".into()));
    }
    (0..a.len())
        .map(|l| a[l].checked_mul(&b[l])?.checked_mul(&c[l]))
        .collect()
}

/// `Σₗ hₗ xˡ`.
pub fn evaluate_covector(h: &[Scalar], p: &ProjectivePoint) -> Result<Scalar> {
    if h.len() != p.coords().len() {
        return Err(Error::DimensionMismatch(format!(
            "covector of length {} at a point of P^{}",
            h.len(),
            p.dim()
        )));
    }
    let mut acc = Scalar::zero(p.backend());
    for (a, x) in h.iter().zip(p.coords()) {
        acc = acc.checked_add(&a.checked_mul(x)?)?;
    }
    Ok(acc)
}

/// Smallest integer `k ≥ 1` with `k ≥ m − √(m(m+1)/2 − 1)`: the lowest
/// Hadamard-inverse rank a naive dimension count allows at size `m`.
pub fn min_rank_bound(m: usize) -> Result<usize> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("matrix size must be at least 2, got {m}")));
    }
    let d = (m * (m + 1) / 2 - 1) as u128;
    Ok((1..=m)
        .find(|&k| {
            let gap = (m - k) as u128;
            gap * gap <= d
        })
        .unwrap_or(m))
}

/// The dimension count admits rank 3 at this size while rank 3 is claimed
/// never to occur.
pub fn count_admits_rank3(m: usize) -> Result<bool> {
    Ok(m > 3 && min_rank_bound(m)? <= 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apolarity::{is_apolar_set, QuadraticForm};
    use crate::projective::{cremona, PointConfig};

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn cayley_two_by_two() {
        let s = Matrix::from_rows(vec![vec![q(0, 1), q(1, 2)], vec![q(-1, 2), q(0, 1)]]).unwrap();
        let a = cayley_transform(&s).unwrap();
        let expect = Matrix::from_rows(vec![vec![q(3, 5), q(-4, 5)], vec![q(4, 5), q(3, 5)]]).unwrap();
        assert_eq!(a, expect);
        assert_eq!(a.transpose().matmul(&a).unwrap(), Matrix::identity(2, Backend::Rational));
        assert_eq!(hadamard_rank(&a, &tol()).unwrap(), 2);

        let s = Matrix::from_rows(vec![vec![q(0, 1), q(1, 1)], vec![q(-1, 1), q(0, 1)]]).unwrap();
        let a = cayley_transform(&s).unwrap();
        let expect = Matrix::from_rows(vec![vec![q(0, 1), q(-1, 1)], vec![q(1, 1), q(0, 1)]]).unwrap();
        assert_eq!(a, expect);
        assert!(matches!(hadamard_rank(&a, &tol()), Err(Error::ZeroEntry { .. })));
    }

    #[test]
    fn cayley_rejects_bad_input() {
        let s = Matrix::from_rows(vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]).unwrap();
        assert!(matches!(cayley_transform(&s), Err(Error::InvalidInput(_))));
        // I + S singular over the Gaussian rationals: S = [[0, i], [-i, 0]]
        let i = Scalar::Gaussian(GaussianRational::i());
        let z = Scalar::zero(Backend::GaussianRational);
        let s = Matrix::from_rows(vec![vec![z.clone(), i.clone()], vec![-&i, z]]).unwrap();
        assert!(matches!(cayley_transform(&s), Err(Error::Degenerate(_))));
    }

    #[test]
    fn exact_samples_are_orthogonal_without_zeros() {
        for field in [Field::Rational, Field::GaussianRational] {
            for m in 2..=5 {
                let s = random_orthogonal(m, field, 42, &SamplerConfig::default()).unwrap();
                let a = &s.matrix;
                assert_eq!(a.backend(), field.backend());
                assert_eq!(a.transpose().matmul(a).unwrap(), Matrix::identity(m, field.backend()));
                assert!(a.entries().all(|x| !x.is_exact_zero()));
                assert_eq!(s.method, Method::CayleyExact);
            }
        }
    }

    #[test]
    fn float_samples() {
        for field in [Field::Real, Field::Complex] {
            let s = random_orthogonal(6, field, 5, &SamplerConfig::default()).unwrap();
            assert!(s.matrix.orthogonality_residual().unwrap() <= FLOAT_ORTHOGONALITY);
            assert!(s.matrix.entries().all(|x| x.magnitude() > 1e-6));
            assert_eq!(s.method, Method::GramSchmidtFloat);
            if field.is_real() {
                assert!(s.matrix.entries().all(|x| x.to_complex64().im == 0.0));
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let cfg = SamplerConfig::default();
        let a = random_orthogonal(4, Field::GaussianRational, 17, &cfg).unwrap();
        let b = random_orthogonal(4, Field::GaussianRational, 17, &cfg).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.matrix, random_orthogonal(4, Field::GaussianRational, 18, &cfg).unwrap().matrix);
    }

    #[test]
    fn rejection_cap() {
        let cfg = SamplerConfig {
            max_numerator: 0,
            max_rejections: 5,
            ..SamplerConfig::default()
        };
        // S = 0 gives A = I, which always has zero entries.
        assert_eq!(random_orthogonal(3, Field::Rational, 0, &cfg), Err(Error::TooManyRejections(6)));
        assert!(matches!(
            verify_conjecture(3, 4, Field::Rational, 0, &tol(), &cfg),
            Err(Error::Trial { trial: 0, .. })
        ));
    }

    #[test]
    fn three_by_three_rank_is_two() {
        let r = verify_conjecture(3, 200, Field::Rational, 7, &tol(), &SamplerConfig::default()).unwrap();
        assert_eq!(r.histogram, BTreeMap::from([(2, 200)]));
        assert!(r.passed());
    }

    #[test]
    fn size_five_is_generically_full_rank() {
        let r = verify_conjecture(5, 50, Field::Rational, 1, &tol(), &SamplerConfig::default()).unwrap();
        assert!(r.passed());
        assert!(r.histogram.get(&5).copied().unwrap_or(0) >= 45, "{:?}", r.histogram);
    }

    #[test]
    fn transpose_has_the_same_hadamard_rank() {
        for seed in 0..20 {
            let a = random_orthogonal(4, Field::Rational, seed, &SamplerConfig::default()).unwrap().matrix;
            assert_eq!(
                hadamard_rank(&a, &tol()).unwrap(),
                hadamard_rank(&a.transpose(), &tol()).unwrap()
            );
        }
    }

    #[test]
    fn constructed_rank_two_and_its_perturbations() {
        use crate::rnc::{construct_rank2, random_params};
        for seed in 0..5 {
            let (p0, nodes) = random_params(3, Field::Real, seed);
            let cert = construct_rank2(&p0, &nodes, Field::Real).unwrap();
            assert_eq!(hadamard_rank(&cert.matrix, &tol()).unwrap(), 2);
            assert!(!numerically_rank3(&cert.matrix, &tol()).unwrap());
            // Move inside the family by perturbing the parameters.
            let nudged: Vec<Scalar> = nodes.iter().map(|a| a + &Scalar::real(1e-3)).collect();
            let cert = construct_rank2(&p0, &nudged, Field::Real).unwrap();
            assert_eq!(hadamard_rank(&cert.matrix, &tol()).unwrap(), 2);
        }
        let (p0, nodes) = random_params(4, Field::Real, 0);
        let cert = construct_rank2(&p0, &nodes, Field::Real).unwrap();
        assert_eq!(hadamard_rank(&cert.matrix, &tol()).unwrap(), 2);
    }

    #[test]
    fn float_verifier_reports_no_violations() {
        let r = verify_conjecture(4, 30, Field::Real, 3, &tol(), &SamplerConfig::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.histogram, BTreeMap::from([(4, 30)]));
    }

    #[test]
    fn report_is_deterministic() {
        let run = || {
            let r = verify_conjecture(4, 40, Field::GaussianRational, 9, &tol(), &SamplerConfig::default()).unwrap();
            serde_json::to_string(&r).unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn triple_hyperplane_contains_cremona_images() {
        for seed in 0..10 {
            let a = random_orthogonal(4, Field::Rational, seed, &SamplerConfig::default()).unwrap().matrix;
            let ps = PointConfig::from_columns(&a).unwrap().into_points();
            let qs: Vec<_> = ps.iter().map(|p| cremona(p).unwrap()).collect();
            for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
                let h = triple_hyperplane(&ps, i, j, k).unwrap();
                for l in [i, j, k] {
                    assert!(evaluate_covector(&h, &qs[l]).unwrap().is_exact_zero());
                }
            }
        }
    }

    #[test]
    fn triple_hyperplane_value_at_first_image() {
        // With q₀ = (1/p⁰₀, …), E₀₁₂(q₀) = Σₗ pˡ₁pˡ₂, the dot product of p₁ and p₂.
        let ps: Vec<_> = [[1, 2, 3], [1, 1, 2], [2, -1, 5]]
            .iter()
            .map(|c| ProjectivePoint::from_ints(c).unwrap())
            .collect();
        let q0 = ProjectivePoint::new(ps[0].coords().iter().map(|x| x.recip().unwrap()).collect()).unwrap();
        let h = triple_hyperplane(&ps, 0, 1, 2).unwrap();
        assert_eq!(evaluate_covector(&h, &q0).unwrap(), q(2 - 1 + 10, 1));
        assert!(!is_apolar_set(&QuadraticForm::sum_of_squares(2, Backend::Rational), &ps, &tol()).unwrap());
    }

    #[test]
    fn triple_hyperplane_errors() {
        let ps: Vec<_> = [[1, 2], [1, 1], [2, 0]]
            .iter()
            .map(|c| ProjectivePoint::from_ints(c).unwrap())
            .collect();
        assert!(matches!(triple_hyperplane(&ps, 0, 2, 1), Err(Error::InvalidInput(_))));
        assert!(matches!(triple_hyperplane(&ps, 0, 1, 3), Err(Error::InvalidInput(_))));
        assert_eq!(triple_hyperplane(&ps, 0, 1, 2), Err(Error::ZeroCoordinate { index: 1 }));
    }

    #[test]
    fn rank_bound_examples() {
        assert_eq!(min_rank_bound(2).unwrap(), 1);
        assert_eq!(min_rank_bound(6).unwrap(), 2);
        assert_eq!(min_rank_bound(10).unwrap(), 3);
        assert!(count_admits_rank3(10).unwrap());
        assert!(!count_admits_rank3(3).unwrap());
        assert!(min_rank_bound(1).is_err());
    }

    #[test]
    fn rank_bound_against_floats() {
        for m in 2..200usize {
            let x = m as f64 - ((m * (m + 1) / 2 - 1) as f64).sqrt();
            let expect = (x.ceil() as usize).max(1);
            assert_eq!(min_rank_bound(m).unwrap(), expect, "m = {m}");
        }
    }
}
