//! Rational normal curves through the coordinate simplex, and orthogonal
//! matrices with rank-two Hadamard inverse built from them.
//!
//! The curves through the simplex and a base point `p₀` are
//! `xⁱ(t) = pⁱ₀ / (t − aᵢ)`: the curve meets `zᵢ` at `t = aᵢ` and `p₀` at
//! `t = ∞`, and its Cremona image is the line `[t − a₀ : … : t − aₙ]`. The
//! gauge `a₀ = 0, a₁ = 1` removes the affine reparametrizations of `t`,
//! leaving `n − 1` free nodes.
//!
//! With `Q₀ = Σ (xⁱ)²` and `p₀` a unit vector, the curve meets the polar
//! hyperplane of `p₀` where `Σ (pⁱ₀)² / (t − aᵢ) = 0`. Those `n` points
//! together with `p₀` are mutually orthogonal, so after normalization they
//! are the columns of an orthogonal matrix whose Hadamard inverse has rank
//! two.

mod poly;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub use poly::{poly_roots, Polynomial};

use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, Matrix};
use crate::projective::{collinear, cremona_wrt, hadamard_inverse, ProjectivePoint};
use crate::scalars::{Backend, Field, Scalar, Tolerance};

/// Residual bound a certificate must meet to count as valid.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-8;

/// Relative singular-value threshold for the finite-difference Jacobian.
/// Central differences with step [`JACOBIAN_STEP`] carry errors around
/// `1e-10`, so this sits well above the noise and well below the
/// smallest genuine singular values seen in practice.
pub const JACOBIAN_REL_TOL: f64 = 1e-6;
pub const JACOBIAN_STEP: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RncParam {
    p0: Vec<Scalar>,
    nodes: Vec<Scalar>,
    #[serde(default)]
    roots: Vec<Scalar>,
}

impl RncParam {
    /// Validates and normalizes: `p₀` is scaled to `Σ (pⁱ₀)² = 1` with the
    /// principal square root, and the nodes are moved affinely so that
    /// `a₀ = 0`, `a₁ = 1`. Exact inputs require `Σ (pⁱ₀)²` to be a square.
    pub fn new(p0: Vec<Scalar>, nodes: Vec<Scalar>) -> Result<Self> {
        let tol = Tolerance::default();
        if p0.len() < 2 {
            return Err(Error::InvalidInput("need n ≥ 1".into()));
        }
        if nodes.len() != p0.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} nodes for a base point of P^{}",
                nodes.len(),
                p0.len() - 1
            )));
        }
        let backend = p0[0].backend();
        if let Some(bad) = p0.iter().chain(&nodes).find(|s| s.backend() != backend) {
            return Err(Error::BackendMismatch(backend, bad.backend()));
        }
        if let Some(index) = p0.iter().position(|c| c.is_zero(&tol)) {
            return Err(Error::ZeroCoordinate { index });
        }
        for i in 0..nodes.len() {
            for j in 0..i {
                if (&nodes[i] - &nodes[j]).is_zero(&tol) {
                    return Err(Error::InvalidInput(format!("nodes {j} and {i} coincide")));
                }
            }
        }
        let norm2 = p0
            .iter()
            .fold(Scalar::zero(backend), |acc, c| acc + c * c);
        if norm2.is_zero(&tol) {
            return Err(Error::Degenerate("base point lies on the quadric Σ(x^i)^2".into()));
        }
        let inv = norm2.sqrt()?.recip()?;
        let p0 = p0.iter().map(|c| c * &inv).collect();
        let span = &nodes[1] - &nodes[0];
        let nodes = nodes.iter().map(|a| (a - &nodes[0]) / &span).collect();
        Ok(Self {
            p0,
            nodes,
            roots: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.p0.len() - 1
    }

    pub fn backend(&self) -> Backend {
        self.p0[0].backend()
    }

    pub fn p0(&self) -> &[Scalar] {
        &self.p0
    }

    pub fn nodes(&self) -> &[Scalar] {
        &self.nodes
    }

    /// Curve parameters of the hyperplane section; empty until filled in
    /// by [`construct_rank2`].
    pub fn roots(&self) -> &[Scalar] {
        &self.roots
    }

    pub fn point_at_infinity(&self) -> ProjectivePoint {
        ProjectivePoint::new(self.p0.clone()).expect("p0 is nonzero")
    }
}

/// The curve point `[p⁰₀/(t − a₀) : … : pⁿ₀/(t − aₙ)]`.
pub fn rnc_point(par: &RncParam, t: &Scalar) -> Result<ProjectivePoint> {
    let coords = par
        .p0
        .iter()
        .zip(&par.nodes)
        .enumerate()
        .map(|(i, (p, a))| {
            let d = t.checked_sub(a)?;
            p.checked_div(&d).map_err(|e| match e {
                Error::DivisionByZero => Error::ParameterAtNode(format!("t = a_{i}")),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ProjectivePoint::new(coords)
}

/// `f(t) = Σᵢ (pⁱ₀)² Πⱼ≠ᵢ (t − aⱼ)`, the numerator of `Σ (pⁱ₀)²/(t − aᵢ)`.
/// Monic because `p₀` is unit-normalized.
pub fn section_polynomial(par: &RncParam) -> Polynomial {
    let b = par.backend();
    let mut f = Polynomial::constant(Scalar::zero(b));
    for (i, p) in par.p0.iter().enumerate() {
        let mut term = Polynomial::constant(p * p);
        for (j, a) in par.nodes.iter().enumerate() {
            if j != i {
                term = term.mul_linear(a);
            }
        }
        f = f.add(&term).expect("uniform backend");
    }
    f
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rank2Certificate {
    pub field: Field,
    pub params: RncParam,
    pub matrix: Matrix,
    /// `max |AᵀA − I|`.
    pub orthogonality_residual: f64,
    /// `σ₃/σ₁` of the Hadamard inverse (0 when it has fewer than three).
    pub sigma3_ratio: f64,
    pub sqrt_branch: String,
}

impl Rank2Certificate {
    pub fn is_valid(&self) -> bool {
        self.orthogonality_residual <= CERTIFICATE_TOLERANCE && self.sigma3_ratio <= CERTIFICATE_TOLERANCE
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }
}

fn c(s: &Scalar) -> Complex64 {
    s.to_complex64()
}

fn principal_sqrt(z: Complex64) -> Complex64 {
    match Scalar::Complex(z).sqrt() {
        Ok(Scalar::Complex(r)) => r,
        _ => unreachable!("float sqrt cannot fail"),
    }
}

struct Built {
    columns: Vec<Vec<Complex64>>,
    roots: Vec<Complex64>,
}

/// The orthogonal matrix for a (not necessarily normalized) base point and
/// node set. `reference` fixes the root order by nearest match; otherwise
/// roots are sorted by real part, then imaginary part.
fn build(p0: &[Complex64], nodes: &[Complex64], real: bool, reference: Option<&[Complex64]>) -> Result<Built> {
    let n = p0.len() - 1;
    let norm = principal_sqrt(p0.iter().map(|x| x * x).sum());
    if norm.norm() == 0.0 {
        return Err(Error::Degenerate("base point lies on the quadric Σ(x^i)^2".into()));
    }
    let p: Vec<Complex64> = p0.iter().map(|x| x / norm).collect();

    let mut f = vec![Complex64::new(0.0, 0.0); n + 1];
    for (i, pi) in p.iter().enumerate() {
        let mut term = vec![pi * pi];
        for (j, a) in nodes.iter().enumerate() {
            if j == i {
                continue;
            }
            let mut next = vec![Complex64::new(0.0, 0.0); term.len() + 1];
            for (k, t) in term.iter().enumerate() {
                next[k + 1] += t;
                next[k] -= t * a;
            }
            term = next;
        }
        for (k, t) in term.into_iter().enumerate() {
            f[k] += t;
        }
    }
    let mut roots = poly::complex_roots(&f)?;
    let scale = 1.0 + roots.iter().chain(nodes).map(|z| z.norm()).fold(0.0, f64::max);
    if real {
        for r in &mut roots {
            if r.im.abs() > 1e-9 * scale {
                return Err(Error::Degenerate(format!("non-real section parameter {r}")));
            }
            r.im = 0.0;
        }
    }
    match reference {
        Some(reference) => {
            let mut pool = roots;
            roots = reference
                .iter()
                .map(|r| {
                    let k = (0..pool.len())
                        .min_by(|&x, &y| (pool[x] - r).norm().total_cmp(&(pool[y] - r).norm()))
                        .expect("same degree");
                    pool.swap_remove(k)
                })
                .collect();
        }
        None => roots.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))),
    }
    for i in 0..roots.len() {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() <= 1e-9 * scale {
                return Err(Error::RepeatedRoot);
            }
        }
        for (k, a) in nodes.iter().enumerate() {
            if (roots[i] - a).norm() <= 1e-12 * scale {
                return Err(Error::ParameterAtNode(format!("root {i} = a_{k}")));
            }
        }
    }

    let mut columns = vec![p.clone()];
    for t in &roots {
        let x: Vec<Complex64> = p.iter().zip(nodes).map(|(pi, a)| pi / (t - a)).collect();
        let len = principal_sqrt(x.iter().map(|v| v * v).sum());
        if len.norm() == 0.0 {
            return Err(Error::Degenerate("section point is isotropic".into()));
        }
        columns.push(x.iter().map(|v| v / len).collect());
    }
    Ok(Built { columns, roots })
}

fn to_matrix(columns: &[Vec<Complex64>]) -> Matrix {
    let cols: Vec<Vec<Scalar>> = columns
        .iter()
        .map(|col| col.iter().map(|&z| Scalar::Complex(z)).collect())
        .collect();
    Matrix::from_columns(columns[0].len(), Backend::ComplexFloat, &cols).expect("square")
}

/// Builds an orthogonal `(n+1)×(n+1)` matrix with rank-two Hadamard inverse
/// from the curve through the simplex and `p0` with the given nodes.
pub fn construct_rank2(p0: &[Scalar], nodes: &[Scalar], field: Field) -> Result<Rank2Certificate> {
    if field.is_exact() {
        return Err(Error::RequiresFloat("construct_rank2"));
    }
    let tol = Tolerance::default();
    let lift = |v: &[Scalar]| -> Result<Vec<Scalar>> {
        v.iter()
            .map(|s| {
                let f = s.to_backend(Backend::ComplexFloat)?;
                if field.is_real() && !f.is_real(&tol) {
                    return Err(Error::InvalidInput(format!("{s} is not real")));
                }
                Ok(f)
            })
            .collect()
    };
    let mut params = RncParam::new(lift(p0)?, lift(nodes)?)?;
    let pc: Vec<Complex64> = params.p0.iter().map(c).collect();
    let nc: Vec<Complex64> = params.nodes.iter().map(c).collect();
    let built = build(&pc, &nc, field.is_real(), None)?;
    params.roots = built.roots.iter().map(|&z| Scalar::Complex(z)).collect();
    let matrix = to_matrix(&built.columns);
    for i in 0..matrix.rows() {
        for j in 0..matrix.cols() {
            if matrix.get(i, j).is_zero(&tol) {
                return Err(Error::ZeroEntry { row: i, col: j });
            }
        }
    }
    let residual = matrix.orthogonality_residual()?;
    let s = hadamard_inverse(&matrix)?.singular_values()?;
    let sigma3_ratio = if s.len() >= 3 && s[0] > 0.0 { s[2] / s[0] } else { 0.0 };
    Ok(Rank2Certificate {
        field,
        params,
        matrix,
        orthogonality_residual: residual,
        sigma3_ratio,
        sqrt_branch: "principal".into(),
    })
}

/// Reproducible random base point and nodes for `Pⁿ`. Coordinates of `p₀`
/// are kept away from zero and nodes are spread apart so the resulting
/// construction is well conditioned.
pub fn random_params(n: usize, field: Field, seed: u64) -> (Vec<Scalar>, Vec<Scalar>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let complex = !field.is_real();
    let draw = |rng: &mut ChaCha8Rng| -> Complex64 {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if complex { rng.sample(StandardNormal) } else { 0.0 };
        Complex64::new(re, im)
    };
    let p0: Vec<Scalar> = (0..=n)
        .map(|_| loop {
            let z = draw(&mut rng);
            if z.norm() > 0.2 {
                break Scalar::Complex(z);
            }
        })
        .collect();
    let mut nodes = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    while nodes.len() < n + 1 {
        let re = rng.random_range(-3.0..4.0);
        let im = if complex { rng.random_range(-1.0..1.0) } else { 0.0 };
        let z = Complex64::new(re, im);
        if nodes.iter().all(|a| (a - z).norm() > 0.1) {
            nodes.push(z);
        }
    }
    (p0, nodes.into_iter().map(Scalar::Complex).collect())
}

/// Finite-difference Jacobian of `(p₀, a₂, …, aₙ) ↦ A` at the certificate,
/// with `p₀` moving on the unit sphere `Σ (pⁱ)² = 1` (`n` directions) and
/// `n − 1` free nodes. With `gauge` set, two more columns move all nodes by a
/// common translation and a common dilation.
pub fn parametrization_jacobian(cert: &Rank2Certificate, gauge: bool) -> Result<Matrix> {
    let p: Vec<Complex64> = cert.params.p0.iter().map(c).collect();
    let a: Vec<Complex64> = cert.params.nodes.iter().map(c).collect();
    let reference: Vec<Complex64> = cert.params.roots.iter().map(c).collect();
    let n = p.len() - 1;
    let real = cert.field.is_real();

    let pivot = (0..=n)
        .max_by(|&x, &y| p[x].norm().total_cmp(&p[y].norm()))
        .expect("n ≥ 1");
    let tangents: Vec<Vec<Complex64>> = (0..=n)
        .filter(|&k| k != pivot)
        .map(|k| {
            (0..=n)
                .map(|i| if i == k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) } - p[k] * p[i])
                .collect()
        })
        .collect();

    type Direction = Box<dyn Fn(f64) -> (Vec<Complex64>, Vec<Complex64>)>;
    let mut directions: Vec<Direction> = Vec::new();
    for v in tangents {
        let (p, a) = (p.clone(), a.clone());
        directions.push(Box::new(move |h| {
            (p.iter().zip(&v).map(|(x, d)| x + d * h).collect(), a.clone())
        }));
    }
    for k in 2..=n {
        let (p, a) = (p.clone(), a.clone());
        directions.push(Box::new(move |h| {
            let mut a = a.clone();
            a[k] += h;
            (p.clone(), a)
        }));
    }
    if gauge {
        let (p1, a1) = (p.clone(), a.clone());
        directions.push(Box::new(move |h| (p1.clone(), a1.iter().map(|x| x + h).collect())));
        let (p2, a2) = (p.clone(), a.clone());
        directions.push(Box::new(move |h| (p2.clone(), a2.iter().map(|x| x * (1.0 + h)).collect())));
    }

    let h = JACOBIAN_STEP;
    let flat = |b: Built| -> Vec<Complex64> { b.columns.into_iter().flatten().collect() };
    let mut jac_cols = Vec::with_capacity(directions.len());
    for dir in &directions {
        let (pp, ap) = dir(h);
        let (pm, am) = dir(-h);
        let plus = flat(build(&pp, &ap, real, Some(&reference))?);
        let minus = flat(build(&pm, &am, real, Some(&reference))?);
        jac_cols.push(
            plus.iter()
                .zip(&minus)
                .map(|(x, y)| Scalar::Complex((x - y) / (2.0 * h)))
                .collect::<Vec<_>>(),
        );
    }
    Matrix::from_columns((n + 1) * (n + 1), Backend::ComplexFloat, &jac_cols)
}

/// Numerical rank of [`parametrization_jacobian`], gauge columns included:
/// the local dimension of the family of orthogonal matrices with rank-two
/// Hadamard inverse through the certificate's matrix. The gauge columns
/// must not raise the rank, so `2n + 1` directions give rank `2n − 1`.
pub fn local_dimension(cert: &Rank2Certificate) -> Result<usize> {
    let j = parametrization_jacobian(cert, true)?;
    Ok(numerical_rank(&j.singular_values()?, &jacobian_tolerance()))
}

pub fn jacobian_tolerance() -> Tolerance {
    Tolerance {
        rel: JACOBIAN_REL_TOL,
        ..Tolerance::default()
    }
}

/// Whether `frame ∪ points` lies on a rational normal curve through the
/// frame, tested as collinearity of the Cremona images of `points`.
pub fn lies_on_common_rnc(frame: &[ProjectivePoint], points: &[ProjectivePoint], tol: &Tolerance) -> Result<bool> {
    let images = points
        .iter()
        .map(|p| cremona_wrt(frame, p))
        .collect::<Result<Vec<_>>>()?;
    collinear(&images, tol)
}
