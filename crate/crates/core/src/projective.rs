//! Projective points, ordered point configurations, and the standard
//! Cremona involution `[x⁰ : … : xⁿ] ↦ [1/x⁰ : … : 1/xⁿ]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{Backend, Scalar, Tolerance};

/// A nonzero homogeneous coordinate vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectivePoint {
    coords: Vec<Scalar>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        let Some(first) = coords.first() else {
            return Err(Error::ZeroVector);
        };
        let backend = first.backend();
        if let Some(bad) = coords.iter().find(|c| c.backend() != backend) {
            return Err(Error::BackendMismatch(backend, bad.backend()));
        }
        if coords.iter().all(Scalar::is_exact_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Scalar::from_int(Backend::Rational, c)).collect())
    }

    pub fn from_reals(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Scalar::real(c)).collect())
    }

    /// The `i`-th vertex of the coordinate simplex of `Pⁿ`.
    pub fn vertex(n: usize, i: usize, backend: Backend) -> Self {
        let coords = (0..=n).map(|k| Scalar::from_int(backend, (k == i) as i64)).collect();
        Self { coords }
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    /// Dimension `n` of the ambient `Pⁿ`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn backend(&self) -> Backend {
        self.coords[0].backend()
    }

    pub fn to_backend(&self, backend: Backend) -> Result<Self> {
        Self::new(self.coords.iter().map(|c| c.to_backend(backend)).collect::<Result<_>>()?)
    }

    pub fn scaled(&self, s: &Scalar) -> Result<Self> {
        Self::new(self.coords.iter().map(|c| c.checked_mul(s)).collect::<Result<_>>()?)
    }

    /// Exact backends: first nonzero coordinate becomes 1. Float backend:
    /// the first coordinate of largest modulus becomes 1.
    pub fn normalize(&self) -> Self {
        let idx = if self.backend().is_exact() {
            self.coords.iter().position(|c| !c.is_exact_zero())
        } else {
            let mut best = 0;
            for (i, c) in self.coords.iter().enumerate() {
                if c.magnitude() > self.coords[best].magnitude() {
                    best = i;
                }
            }
            Some(best)
        }
        .expect("nonzero point");
        let inv = self.coords[idx].recip().expect("nonzero coordinate");
        let mut coords: Vec<Scalar> = self.coords.iter().map(|c| c * &inv).collect();
        coords[idx] = Scalar::one(self.backend());
        Self { coords }
    }

    /// Primitive integer representative of a rational point: coprime
    /// integer coordinates with the first nonzero one positive. Other
    /// backends fall back to [`normalize`](Self::normalize).
    pub fn primitive(&self) -> Self {
        let qs: Option<Vec<&BigRational>> = self
            .coords
            .iter()
            .map(|c| match c {
                Scalar::Rational(q) => Some(q),
                _ => None,
            })
            .collect();
        let Some(qs) = qs else { return self.normalize() };
        let l = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let mut ints: Vec<BigInt> = qs.iter().map(|q| q.numer() * (&l / q.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let first_neg = ints.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative());
        for v in &mut ints {
            *v = &*v / &g;
            if first_neg {
                *v = -&*v;
            }
        }
        Self {
            coords: ints
                .into_iter()
                .map(|v| Scalar::Rational(BigRational::from_integer(v)))
                .collect(),
        }
    }

    /// Projective equality: every 2×2 minor of the pair vanishes.
    pub fn same_point(&self, other: &Self, tol: &Tolerance) -> bool {
        if self.coords.len() != other.coords.len() || self.backend() != other.backend() {
            return false;
        }
        let (a, b) = if self.backend().is_exact() {
            (self.clone(), other.clone())
        } else {
            (self.normalize(), other.normalize())
        };
        let (a, b) = (&a.coords, &b.coords);
        (0..a.len()).all(|i| (i + 1..a.len()).all(|j| (&a[i] * &b[j] - &a[j] * &b[i]).is_zero(tol)))
    }

    pub fn has_zero_coordinate(&self, tol: &Tolerance) -> Option<usize> {
        self.coords.iter().position(|c| c.is_zero(tol))
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        ProjectivePoint::new(Vec::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

/// Ordered points of a common `Pⁿ`, pairwise distinct.
#[derive(Clone, Debug, PartialEq)]
pub struct PointConfig {
    points: Vec<ProjectivePoint>,
}

impl PointConfig {
    pub fn new(points: Vec<ProjectivePoint>) -> Result<Self> {
        let cfg = Self::with_repeats(points)?;
        let tol = Tolerance::default();
        for (i, p) in cfg.points.iter().enumerate() {
            if let Some(j) = cfg.points[..i].iter().position(|q| q.same_point(p, &tol)) {
                return Err(Error::Degenerate(format!("points {j} and {i} coincide")));
            }
        }
        Ok(cfg)
    }

    /// Skips the distinctness check. For deliberately degenerate
    /// configurations only.
    pub fn with_repeats(points: Vec<ProjectivePoint>) -> Result<Self> {
        if let Some(first) = points.first() {
            let (n, b) = (first.dim(), first.backend());
            for p in &points {
                if p.dim() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "points in P^{n} and P^{}",
                        p.dim()
                    )));
                }
                if p.backend() != b {
                    return Err(Error::BackendMismatch(b, p.backend()));
                }
            }
        }
        Ok(Self { points })
    }

    /// The columns of `m`, as points of `P^(rows-1)`.
    pub fn from_columns(m: &Matrix) -> Result<Self> {
        Self::new(m.columns().into_iter().map(ProjectivePoint::new).collect::<Result<_>>()?)
    }

    pub fn simplex(n: usize, backend: Backend) -> Self {
        Self {
            points: (0..=n).map(|i| ProjectivePoint::vertex(n, i, backend)).collect(),
        }
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<ProjectivePoint> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ambient_dim(&self) -> Option<usize> {
        self.points.first().map(ProjectivePoint::dim)
    }

    pub fn backend(&self) -> Option<Backend> {
        self.points.first().map(ProjectivePoint::backend)
    }

    /// Points as columns.
    pub fn coordinate_matrix(&self) -> Result<Matrix> {
        coordinate_matrix(&self.points)
    }

    pub fn to_backend(&self, backend: Backend) -> Result<Self> {
        Self::with_repeats(self.points.iter().map(|p| p.to_backend(backend)).collect::<Result<_>>()?)
    }
}

impl Serialize for PointConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.points.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PointConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        PointConfig::new(Vec::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

/// The columns of `m` as points, repeats allowed.
pub fn column_points(m: &Matrix) -> Result<Vec<ProjectivePoint>> {
    m.columns().into_iter().map(ProjectivePoint::new).collect()
}

pub fn coordinate_matrix(points: &[ProjectivePoint]) -> Result<Matrix> {
    let first = points
        .first()
        .ok_or_else(|| Error::DimensionMismatch("no points".into()))?;
    let cols: Vec<Vec<Scalar>> = points.iter().map(|p| p.coords().to_vec()).collect();
    Matrix::from_columns(first.dim() + 1, first.backend(), &cols)
}

/// Projective dimension of the span; `-1` for no points.
pub fn span_dim(points: &[ProjectivePoint], tol: &Tolerance) -> Result<isize> {
    if points.is_empty() {
        return Ok(-1);
    }
    Ok(coordinate_matrix(points)?.rank(tol) as isize - 1)
}

/// True iff the points span exactly a line.
pub fn collinear(points: &[ProjectivePoint], tol: &Tolerance) -> Result<bool> {
    Ok(points.len() >= 2 && span_dim(points, tol)? == 1)
}

/// Cremona transform with respect to the coordinate simplex.
pub fn cremona(p: &ProjectivePoint) -> Result<ProjectivePoint> {
    Ok(cremona_unnormalized(p)?.normalize())
}

fn cremona_unnormalized(p: &ProjectivePoint) -> Result<ProjectivePoint> {
    let coords = p
        .coords()
        .iter()
        .enumerate()
        .map(|(index, c)| c.recip().map_err(|_| Error::ZeroCoordinate { index }))
        .collect::<Result<Vec<_>>>()?;
    ProjectivePoint::new(coords)
}

/// Coordinates of `p` in the basis given by representatives of `frame`
/// (which must be `n+1` independent points of `Pⁿ`).
pub fn frame_coordinates(frame: &[ProjectivePoint], p: &ProjectivePoint) -> Result<ProjectivePoint> {
    let z = coordinate_matrix(frame)?;
    if !z.is_square() || z.rows() != p.dim() + 1 {
        return Err(Error::DimensionMismatch("frame must be n+1 points of P^n".into()));
    }
    let zinv = z
        .inverse()
        .map_err(|_| Error::Degenerate("frame points are dependent".into()))?;
    ProjectivePoint::new(zinv.mul_vec(p.coords())?)
}

/// Cremona transform with respect to an arbitrary simplex `frame`: change
/// to the frame's coordinates, then invert coordinate-wise. The result is
/// expressed in the image simplex's coordinates.
pub fn cremona_wrt(frame: &[ProjectivePoint], p: &ProjectivePoint) -> Result<ProjectivePoint> {
    cremona(&frame_coordinates(frame, p)?)
}

/// Entry-wise reciprocal.
pub fn hadamard_inverse(a: &Matrix) -> Result<Matrix> {
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a.get(i, j).is_exact_zero() {
                return Err(Error::ZeroEntry { row: i, col: j });
            }
        }
    }
    a.map(|s| s.recip())
}
