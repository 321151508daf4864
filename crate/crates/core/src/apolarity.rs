//! Quadratic forms, polarity and apolar point sets.
//!
//! A form is stored as its symmetric Gram matrix `G`, so that
//! `Q(u, v) = uᵀ G v`. Quadrics in the incidence computations are indexed by
//! the monomials `xⁱxʲ` with `i ≤ j` in lexicographic order.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::projective::{coordinate_matrix, PointConfig, ProjectivePoint};
use crate::scalars::{Backend, Scalar, Tolerance};

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm {
    gram: Matrix,
}

impl QuadraticForm {
    pub fn new(gram: Matrix, tol: &Tolerance) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch("Gram matrix must be square".into()));
        }
        if !gram.is_symmetric(tol) {
            return Err(Error::InvalidInput("Gram matrix is not symmetric".into()));
        }
        Ok(Self { gram })
    }

    /// `Σ (xⁱ)²`.
    pub fn sum_of_squares(n: usize, backend: Backend) -> Self {
        Self {
            gram: Matrix::identity(n + 1, backend),
        }
    }

    pub fn diagonal(entries: &[Scalar]) -> Result<Self> {
        Ok(Self {
            gram: Matrix::diagonal(entries)?,
        })
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Dimension `n` of the ambient `Pⁿ`.
    pub fn dim(&self) -> usize {
        self.gram.rows() - 1
    }

    pub fn backend(&self) -> Backend {
        self.gram.backend()
    }

    /// `uᵀ G v`.
    pub fn eval(&self, u: &[Scalar], v: &[Scalar]) -> Result<Scalar> {
        if u.len() != self.gram.rows() || v.len() != self.gram.rows() {
            return Err(Error::DimensionMismatch("vector length vs form size".into()));
        }
        let gv = self.gram.mul_vec(v)?;
        u.iter()
            .zip(&gv)
            .try_fold(Scalar::zero(self.backend()), |acc, (a, b)| acc.checked_add(&a.checked_mul(b)?))
    }

    pub fn is_nondegenerate(&self, tol: &Tolerance) -> bool {
        self.gram.rank(tol) == self.gram.rows()
    }

    fn require_nondegenerate(&self, tol: &Tolerance) -> Result<()> {
        if self.is_nondegenerate(tol) {
            Ok(())
        } else {
            Err(Error::Degenerate("quadratic form is degenerate".into()))
        }
    }

    pub fn scaled(&self, s: &Scalar) -> Result<Self> {
        Ok(Self {
            gram: self.gram.scale(s)?,
        })
    }

    /// Projective equality of forms (proportional Gram matrices).
    pub fn same_quadric(&self, other: &Self, tol: &Tolerance) -> bool {
        let flat = |q: &Self| q.gram.entries().cloned().collect::<Vec<_>>();
        match (ProjectivePoint::new(flat(self)), ProjectivePoint::new(flat(other))) {
            (Ok(a), Ok(b)) => a.same_point(&b, tol),
            _ => false,
        }
    }
}

impl Serialize for QuadraticForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.gram.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadraticForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let gram = Matrix::deserialize(deserializer)?;
        QuadraticForm::new(gram, &Tolerance::default()).map_err(serde::de::Error::custom)
    }
}

/// `Q(z, w)` on the given representatives. Only its vanishing is
/// projectively meaningful.
pub fn polar_pairing(q: &QuadraticForm, z: &ProjectivePoint, w: &ProjectivePoint) -> Result<Scalar> {
    q.eval(z.coords(), w.coords())
}

/// The covector `G z`, whose zero locus is the polar hyperplane of `z`.
pub fn polar_hyperplane(q: &QuadraticForm, z: &ProjectivePoint, tol: &Tolerance) -> Result<Vec<Scalar>> {
    q.require_nondegenerate(tol)?;
    if z.dim() != q.dim() {
        return Err(Error::DimensionMismatch("point vs form".into()));
    }
    q.gram.mul_vec(z.coords())
}

/// `n+1` points of `Pⁿ`, mutually polar and none on the quadric.
pub fn is_apolar_set(q: &QuadraticForm, points: &[ProjectivePoint], tol: &Tolerance) -> Result<bool> {
    if points.len() != q.dim() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "an apolar set in P^{} has {} points, got {}",
            q.dim(),
            q.dim() + 1,
            points.len()
        )));
    }
    let reps: Vec<ProjectivePoint> = points.iter().map(ProjectivePoint::normalize).collect();
    for (i, a) in reps.iter().enumerate() {
        if polar_pairing(q, a, a)?.is_zero(tol) {
            return Ok(false);
        }
        for b in &reps[i + 1..] {
            if !polar_pairing(q, a, b)?.is_zero(tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The unique quadric for which the first `n+1` base points are apolar and
/// whose polar hyperplane at the last base point is `h`.
///
/// In coordinates `y = D⁻¹Z⁻¹x`, where `Z` has the first `n+1` points as
/// columns and `D = diag(Z⁻¹p₀)`, the base becomes the simplex plus
/// `[1, …, 1]` and `h` becomes `Σ aᵢ yⁱ`; the quadric there is `Σ aᵢ (yⁱ)²`.
pub fn normalizing_quadric(base: &[ProjectivePoint], h: &[Scalar], tol: &Tolerance) -> Result<QuadraticForm> {
    let Some((p0, simplex)) = base.split_last() else {
        return Err(Error::DimensionMismatch("empty base".into()));
    };
    let n = p0.dim();
    if simplex.len() != n + 1 || h.len() != n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "a base of P^{n} has {} points and its hyperplanes {} coefficients",
            n + 2,
            n + 1
        )));
    }
    let backend = p0.backend();
    let pairing = |p: &ProjectivePoint| -> Result<Scalar> {
        p.coords()
            .iter()
            .zip(h)
            .try_fold(Scalar::zero(backend), |acc, (x, a)| acc.checked_add(&x.checked_mul(a)?))
    };
    for (i, p) in base.iter().enumerate() {
        if pairing(p)?.is_zero(tol) {
            return Err(Error::Degenerate(format!("hyperplane contains base point {i}")));
        }
    }
    let z = coordinate_matrix(simplex)?;
    let zinv = z
        .inverse()
        .map_err(|_| Error::Degenerate("base points are not in general position".into()))?;
    let c = zinv.mul_vec(p0.coords())?;
    if let Some(i) = c.iter().position(|ci| ci.is_zero(tol)) {
        return Err(Error::Degenerate(format!(
            "base point p0 lies on the face opposite vertex {i}"
        )));
    }
    // a_i = c_i · h(z_i)
    let a: Vec<Scalar> = simplex
        .iter()
        .zip(&c)
        .map(|(zi, ci)| Ok(ci * &pairing(zi)?))
        .collect::<Result<_>>()?;
    let dinv = Matrix::diagonal(&c.iter().map(Scalar::recip).collect::<Result<Vec<_>>>()?)?;
    let t = dinv.matmul(&zinv)?;
    let gram = t.transpose().matmul(&Matrix::diagonal(&a)?)?.matmul(&t)?;
    QuadraticForm::new(gram, tol)
}

/// Index pairs `(i, j)`, `i ≤ j`, in lexicographic order.
pub fn quadric_monomials(n: usize) -> Vec<(usize, usize)> {
    (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect()
}

/// Coefficient vector (monomial basis) to Gram matrix.
pub fn form_from_coefficients(n: usize, coeffs: &[Scalar]) -> Result<QuadraticForm> {
    let monos = quadric_monomials(n);
    if coeffs.len() != monos.len() {
        return Err(Error::DimensionMismatch("coefficient count".into()));
    }
    let backend = coeffs[0].backend();
    let half = Scalar::ratio(1, 2).to_backend(backend)?;
    let mut g = Matrix::zeros(n + 1, n + 1, backend);
    for (&(i, j), c) in monos.iter().zip(coeffs) {
        if i == j {
            g.set(i, i, c.clone());
        } else {
            let v = c * &half;
            g.set(i, j, v.clone());
            g.set(j, i, v);
        }
    }
    Ok(QuadraticForm { gram: g })
}

/// Gram matrix to coefficient vector; inverse of [`form_from_coefficients`].
pub fn form_coefficients(q: &QuadraticForm) -> Vec<Scalar> {
    let two = Scalar::from_int(q.backend(), 2);
    quadric_monomials(q.dim())
        .into_iter()
        .map(|(i, j)| {
            let g = q.gram.get(i, j);
            if i == j {
                g.clone()
            } else {
                g * &two
            }
        })
        .collect()
}

/// Rows `[xᵢxⱼ]` of the point-evaluation conditions on quadrics.
pub fn incidence_matrix(points: &[ProjectivePoint]) -> Result<Matrix> {
    let first = points
        .first()
        .ok_or_else(|| Error::DimensionMismatch("no points".into()))?;
    let monos = quadric_monomials(first.dim());
    let rows = points
        .iter()
        .map(|p| {
            if p.dim() != first.dim() {
                return Err(Error::DimensionMismatch("mixed ambient dimensions".into()));
            }
            let x = p.coords();
            Ok(monos.iter().map(|&(i, j)| &x[i] * &x[j]).collect())
        })
        .collect::<Result<Vec<Vec<Scalar>>>>()?;
    Matrix::from_rows(rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadricSystem {
    /// Projective dimension; `-1` when no quadric passes through the points.
    pub dimension: isize,
    pub basis: Vec<QuadraticForm>,
}

/// The linear system of quadrics through the given points.
pub fn quadrics_through(cfg: &PointConfig, tol: &Tolerance) -> Result<QuadricSystem> {
    let n = cfg
        .ambient_dim()
        .ok_or_else(|| Error::DimensionMismatch("no points".into()))?;
    let k = incidence_matrix(cfg.points())?.kernel_basis(tol);
    let basis = k
        .columns()
        .iter()
        .map(|c| form_from_coefficients(n, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadricSystem {
        dimension: basis.len() as isize - 1,
        basis,
    })
}

/// The conic through the coordinate triangle and three points of `P²`:
/// `(p²₀p²₁p²₂) x⁰x¹ + (p¹₀p¹₁p¹₂) x⁰x² + (p⁰₀p⁰₁p⁰₂) x¹x²`.
pub fn six_point_conic(points: &[ProjectivePoint]) -> Result<QuadraticForm> {
    if points.len() != 3 || points.iter().any(|p| p.dim() != 2) {
        return Err(Error::DimensionMismatch("need exactly three points of P^2".into()));
    }
    for p in points {
        if let Some(index) = p.coords().iter().position(Scalar::is_exact_zero) {
            return Err(Error::ZeroCoordinate { index });
        }
    }
    let backend = points[0].backend();
    let prod = |l: usize| -> Scalar {
        points
            .iter()
            .fold(Scalar::one(backend), |acc, p| acc * &p.coords()[l])
    };
    let zero = Scalar::zero(backend);
    // Monomial order: x0², x0x1, x0x2, x1², x1x2, x2²
    let coeffs = [zero.clone(), prod(2), prod(1), zero.clone(), prod(0), zero];
    form_from_coefficients(2, &coeffs)
}

/// `trace(G_Q⁻¹ G_P)`, equal to `Σ P(vᵢ, vᵢ)` over any Q-orthonormal basis.
pub fn trace_pairing(q: &QuadraticForm, p: &QuadraticForm, tol: &Tolerance) -> Result<Scalar> {
    q.require_nondegenerate(tol)?;
    if q.dim() != p.dim() {
        return Err(Error::DimensionMismatch("forms of different size".into()));
    }
    Ok(q.gram.inverse()?.matmul(&p.gram)?.trace())
}

/// Rescales each point to Q-unit length, `Q(v, v) = 1`, using the principal
/// square root. Exact backends fail unless every `Q(v, v)` is a square.
pub fn unit_representatives(q: &QuadraticForm, points: &[ProjectivePoint]) -> Result<Vec<Vec<Scalar>>> {
    points
        .iter()
        .map(|p| {
            let n2 = polar_pairing(q, p, p)?;
            if n2.is_exact_zero() {
                return Err(Error::Degenerate("point lies on the quadric".into()));
            }
            let inv = n2.sqrt()?.recip()?;
            Ok(p.coords().iter().map(|c| c * &inv).collect())
        })
        .collect()
}

/// `Σ P(vᵢ, vᵢ) / Q(vᵢ, vᵢ)` over the given points. For an apolar set this
/// is `Σ P(v̂ᵢ, v̂ᵢ)` over Q-unit representatives, computed without square
/// roots so it stays exact.
pub fn apolar_trace(q: &QuadraticForm, p: &QuadraticForm, points: &[ProjectivePoint]) -> Result<Scalar> {
    points.iter().try_fold(Scalar::zero(q.backend()), |acc, v| {
        let num = polar_pairing(p, v, v)?;
        let den = polar_pairing(q, v, v)?;
        acc.checked_add(&num.checked_div(&den)?)
    })
}
