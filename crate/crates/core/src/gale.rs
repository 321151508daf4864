//! Association (Gale duality) of `r + s + 2` points in `Pʳ` with
//! `r + s + 2` points in `Pˢ`.
//!
//! Two coordinate matrices `A` (`(r+1) × N`) and `B` (`(s+1) × N`), points
//! as columns, are associated when `A Λ Bᵀ = 0` for some invertible diagonal
//! `Λ`. A [`SplitConfig`] lists a simplex-like first block `zᵢ` and a second
//! block `p_α`; its transform lists the simplex `w_α` of `Pˢ` first and the
//! points `qᵢ` second, so `zᵢ ↔ qᵢ` and `p_α ↔ w_α`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize};

use crate::apolarity::{is_apolar_set, QuadraticForm};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::projective::{column_points, coordinate_matrix, cremona, cremona_wrt, span_dim, PointConfig, ProjectivePoint};
use crate::scalars::{Backend, Scalar, Tolerance};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitConfig {
    r: usize,
    s: usize,
    points: PointConfig,
    split_index: usize,
}

impl SplitConfig {
    /// `points` lie in `Pʳ`; the first `r + 1` must be independent.
    pub fn new(points: PointConfig) -> Result<Self> {
        let r = points
            .ambient_dim()
            .ok_or_else(|| Error::InvalidInput("empty configuration".into()))?;
        if points.len() < r + 2 {
            return Err(Error::DimensionMismatch(format!(
                "{} points in P^{r}; need at least {}",
                points.len(),
                r + 2
            )));
        }
        let cfg = Self {
            r,
            s: points.len() - r - 2,
            points,
            split_index: r + 1,
        };
        if coordinate_matrix(cfg.first_block())?.rank(&Tolerance::default()) < r + 1 {
            return Err(Error::Degenerate("first block is linearly dependent".into()));
        }
        Ok(cfg)
    }

    pub fn from_blocks(first: &[ProjectivePoint], second: &[ProjectivePoint]) -> Result<Self> {
        let all = first.iter().chain(second).cloned().collect();
        let cfg = Self::new(PointConfig::with_repeats(all)?)?;
        if cfg.split_index != first.len() {
            return Err(Error::DimensionMismatch(format!(
                "first block has {} points in P^{}",
                first.len(),
                cfg.r
            )));
        }
        Ok(cfg)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn split_index(&self) -> usize {
        self.split_index
    }

    pub fn config(&self) -> &PointConfig {
        &self.points
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        self.points.points()
    }

    pub fn first_block(&self) -> &[ProjectivePoint] {
        &self.points()[..self.split_index]
    }

    pub fn second_block(&self) -> &[ProjectivePoint] {
        &self.points()[self.split_index..]
    }

    /// The second block in the coordinates where the first block is the
    /// simplex: `P = Z⁻¹ P′`, of shape `(r+1) × (s+1)`.
    pub fn normalized_block(&self) -> Result<Matrix> {
        let z = coordinate_matrix(self.first_block())?;
        let p = coordinate_matrix(self.second_block())?;
        z.inverse()?.matmul(&p)
    }
}

#[derive(Deserialize)]
struct RawSplit {
    r: Option<usize>,
    s: Option<usize>,
    points: Vec<ProjectivePoint>,
    split_index: Option<usize>,
}

impl<'de> Deserialize<'de> for SplitConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawSplit::deserialize(deserializer)?;
        let pts = PointConfig::with_repeats(raw.points).map_err(D::Error::custom)?;
        let cfg = SplitConfig::new(pts).map_err(D::Error::custom)?;
        let check = |name: &str, given: Option<usize>, actual: usize| match given {
            Some(g) if g != actual => Err(D::Error::custom(format!("{name} = {g}, but the points give {actual}"))),
            _ => Ok(()),
        };
        check("r", raw.r, cfg.r)?;
        check("s", raw.s, cfg.s)?;
        check("split_index", raw.split_index, cfg.split_index)?;
        Ok(cfg)
    }
}

/// `{w_α} ∪ {qᵢ}`: the simplex of `Pˢ` followed by the rows of the
/// normalized block as points.
pub fn gale_transform(cfg: &SplitConfig) -> Result<SplitConfig> {
    let p = cfg.normalized_block()?;
    let b = p.backend();
    let mut points = PointConfig::simplex(cfg.s, b).into_points();
    for (i, row) in p.row_vecs().into_iter().enumerate() {
        points.push(ProjectivePoint::new(row).map_err(|_| {
            Error::Degenerate(format!("point q_{i} would be zero: z_{i} is off the span of the rest"))
        })?);
    }
    SplitConfig::new(PointConfig::with_repeats(points)?)
}

/// Some `w` with `f(K w) ≠ 0` for every functional `f`, where `K` is the
/// kernel basis (columns). Tries `w = (1, t, t², …)` for `t = 1, 2, …`;
/// each functional that is nonzero on the kernel vanishes for fewer than
/// `dim K` values of `t`, so the search is finite.
fn generic_combination(kernel: &Matrix, functionals: &[Vec<Scalar>], tol: &Tolerance) -> Result<Option<Vec<Scalar>>> {
    let d = kernel.cols();
    if d == 0 {
        return Ok(None);
    }
    let b = kernel.backend();
    let values = functionals
        .iter()
        .map(|f| kernel.transpose().mul_vec(f))
        .collect::<Result<Vec<_>>>()?;
    if values.iter().any(|v| v.iter().all(|x| x.is_zero(tol))) {
        return Ok(None);
    }
    for t in 1..=(functionals.len() * d + 1) as i64 {
        let w: Vec<Scalar> = (0..d as u32).map(|k| Scalar::from_int(b, t).pow(k)).collect();
        let ok = values.iter().all(|v| {
            let s = v.iter().zip(&w).fold(Scalar::zero(b), |acc, (x, y)| acc + x * y);
            !s.is_zero(tol)
        });
        if ok {
            return Ok(Some(kernel.mul_vec(&w)?));
        }
    }
    Ok(None)
}

fn unit(n: usize, i: usize, like: &Scalar) -> Vec<Scalar> {
    let b = like.backend();
    (0..n).map(|k| Scalar::from_int(b, (k == i) as i64)).collect()
}

/// An all-nonzero `λ` with `A diag(λ) Bᵀ = 0`, for coordinate matrices with
/// points as columns in corresponding order.
pub fn find_association(a: &Matrix, b: &Matrix, tol: &Tolerance) -> Result<Option<Vec<Scalar>>> {
    let n = a.cols();
    if b.cols() != n {
        return Err(Error::DimensionMismatch(format!("{n} points against {}", b.cols())));
    }
    if a.rows() + b.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "{n} points cannot pair P^{} with P^{}",
            a.rows() - 1,
            b.rows() - 1
        )));
    }
    if a.backend() != b.backend() {
        return Err(Error::BackendMismatch(a.backend(), b.backend()));
    }
    let mut eqs = Vec::with_capacity(a.rows() * b.rows());
    for i in 0..a.rows() {
        for j in 0..b.rows() {
            eqs.push((0..n).map(|c| a.get(i, c) * b.get(j, c)).collect());
        }
    }
    let kernel = Matrix::from_rows(eqs)?.kernel_basis(tol);
    let probe = a.get(0, 0);
    let functionals: Vec<Vec<Scalar>> = (0..n).map(|c| unit(n, c, probe)).collect();
    generic_combination(&kernel, &functionals, tol)
}

/// Whether `b` is associated to `a` under the block-swapping
/// correspondence `zᵢ ↔ qᵢ`, `p_α ↔ w_α` used by [`gale_transform`].
/// Returns `Λ` indexed in `a`'s point order.
pub fn association(a: &SplitConfig, b: &SplitConfig, tol: &Tolerance) -> Result<Option<Vec<Scalar>>> {
    if a.r != b.s || a.s != b.r {
        return Err(Error::DimensionMismatch(format!(
            "cannot pair a split of P^{} with one of P^{}",
            a.r, b.r
        )));
    }
    let am = coordinate_matrix(a.points())?;
    let reordered: Vec<ProjectivePoint> = b.second_block().iter().chain(b.first_block()).cloned().collect();
    let bm = coordinate_matrix(&reordered)?;
    find_association(&am, &bm, tol)
}

pub fn is_associated(a: &SplitConfig, b: &SplitConfig, tol: &Tolerance) -> Result<bool> {
    Ok(association(a, b, tol)?.is_some())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfAssociation {
    pub self_associated: bool,
    pub quadric: Option<QuadraticForm>,
}

/// Looks for a quadric that is diagonal in the basis of the first block and
/// makes the second block mutually polar with no point on the quadric. Such
/// a quadric makes both blocks apolar, which is equivalent to the
/// configuration being associated to itself.
///
/// The quadric is returned in the original coordinates, scaled so its
/// first diagonal coefficient in the first block's basis is 1.
pub fn is_self_associated(cfg: &SplitConfig, tol: &Tolerance) -> Result<SelfAssociation> {
    if cfg.r != cfg.s {
        return Err(Error::DimensionMismatch(format!(
            "{} points in P^{} are not 2n + 2 points in P^n",
            cfg.points().len(),
            cfg.r
        )));
    }
    let n = cfg.r + 1;
    let p = cfg.normalized_block()?;
    let b = p.backend();
    let none = SelfAssociation {
        self_associated: false,
        quadric: None,
    };
    // Σᵢ λᵢ P_iα P_iβ = 0 for α < β
    let mut eqs = Vec::new();
    for alpha in 0..n {
        for beta in alpha + 1..n {
            eqs.push((0..n).map(|i| p.get(i, alpha) * p.get(i, beta)).collect::<Vec<_>>());
        }
    }
    let kernel = if eqs.is_empty() {
        Matrix::identity(n, b)
    } else {
        Matrix::from_rows(eqs)?.kernel_basis(tol)
    };
    // λᵢ ≠ 0 and Q(p_α, p_α) = Σᵢ λᵢ P_iα² ≠ 0
    let mut functionals: Vec<Vec<Scalar>> = (0..n).map(|i| unit(n, i, p.get(0, 0))).collect();
    for alpha in 0..n {
        functionals.push((0..n).map(|i| p.get(i, alpha) * p.get(i, alpha)).collect());
    }
    let Some(lambda) = generic_combination(&kernel, &functionals, tol)? else {
        return Ok(none);
    };
    let lead = lambda[0].recip()?;
    let lambda: Vec<Scalar> = lambda.iter().map(|x| x * &lead).collect();
    // G = Z⁻ᵀ diag(λ) Z⁻¹
    let zinv = coordinate_matrix(cfg.first_block())?.inverse()?;
    let gram = zinv.transpose().matmul(&Matrix::diagonal(&lambda)?)?.matmul(&zinv)?;
    let q = QuadraticForm::new(gram, tol)?;
    let ok = is_apolar_set(&q, cfg.first_block(), tol)? && is_apolar_set(&q, cfg.second_block(), tol)?;
    Ok(SelfAssociation {
        self_associated: ok,
        quadric: if ok { Some(q) } else { None },
    })
}

/// The split with both blocks exchanged.
pub fn swap_blocks(cfg: &SplitConfig) -> Result<SplitConfig> {
    SplitConfig::from_blocks(cfg.second_block(), cfg.first_block())
}

/// Compares the Cremona image of the transform with the transform of the
/// Cremona image. The Cremona transform acts on the second block with
/// respect to the first. Both results have the simplex of `Pˢ` as first
/// block, so they are the same configuration iff their second blocks agree
/// up to a diagonal change of coordinates and a rescaling of each point,
/// i.e. the entry-wise quotient of the two coordinate matrices has rank 1.
pub fn cremona_association_commutes(cfg: &SplitConfig, tol: &Tolerance) -> Result<bool> {
    let dual = gale_transform(cfg)?;
    let left = dual
        .second_block()
        .iter()
        .map(cremona)
        .collect::<Result<Vec<_>>>()?;

    let b = cfg.points()[0].backend();
    let mut star = PointConfig::simplex(cfg.r, b).into_points();
    for p in cfg.second_block() {
        star.push(cremona_wrt(cfg.first_block(), p)?);
    }
    let right = gale_transform(&SplitConfig::new(PointConfig::with_repeats(star)?)?)?;

    let l = coordinate_matrix(&left)?;
    let r = coordinate_matrix(right.second_block())?;
    if (l.rows(), l.cols()) != (r.rows(), r.cols()) {
        return Ok(false);
    }
    let quotient = Matrix::from_fn(l.rows(), l.cols(), b, |i, j| {
        r.get(i, j).checked_div(l.get(i, j)).unwrap_or_else(|_| Scalar::zero(b))
    });
    if quotient.entries().any(|x| x.is_zero(tol)) {
        return Ok(false);
    }
    Ok(quotient.rank(tol) == 1)
}

/// `(span_dim {φ_z(pᵢ)}, span_dim {φ_p(zᵢ)})`, where `φ_z` is the Cremona
/// transform with respect to the simplex `z`. The two agree for doubly
/// apolar pairs.
pub fn dual_cremona_spans(z: &[ProjectivePoint], p: &[ProjectivePoint], tol: &Tolerance) -> Result<(isize, isize)> {
    let pz = p.iter().map(|x| cremona_wrt(z, x)).collect::<Result<Vec<_>>>()?;
    let zp = z.iter().map(|x| cremona_wrt(p, x)).collect::<Result<Vec<_>>>()?;
    Ok((span_dim(&pz, tol)?, span_dim(&zp, tol)?))
}

fn random_int_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    Matrix::from_fn(rows, cols, Backend::Rational, |_, _| {
        let v = rng.random_range(1..=9) * if rng.random_bool(0.5) { 1 } else { -1 };
        Scalar::from_int(Backend::Rational, v)
    })
}

/// A reproducible exact split of `r + s + 2` points in `Pʳ` whose second
/// block spans a `P^span`. The first block is a random invertible integer
/// frame and the normalized block `P` has no zero entries.
pub fn random_split(r: usize, s: usize, span: usize, seed: u64) -> Result<SplitConfig> {
    if span > r.min(s) {
        return Err(Error::InvalidInput(format!(
            "s + 1 = {} points of P^{r} cannot span a P^{span}",
            s + 1
        )));
    }
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = loop {
        let z = random_int_matrix(r + 1, r + 1, &mut rng);
        if z.rank(&tol) == r + 1 {
            break z;
        }
    };
    let p = loop {
        let p = random_int_matrix(r + 1, span + 1, &mut rng).matmul(&random_int_matrix(span + 1, s + 1, &mut rng))?;
        if p.entries().all(|x| !x.is_exact_zero()) && p.rank(&tol) == span + 1 {
            break p;
        }
    };
    let mut points = column_points(&z)?;
    points.extend(column_points(&z.matmul(&p)?)?);
    SplitConfig::new(PointConfig::with_repeats(points)?)
}
