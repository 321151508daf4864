//! Field elements over three interchangeable backends.
//!
//! Exact rationals and exact Gaussian rationals carry arbitrary-precision
//! numerators and denominators, so rank and orthogonality checks over them
//! involve no tolerance at all. The complex floating backend backs the
//! constructions that need irrational roots. Values of different backends
//! never mix: the checked operations return [`Error::BackendMismatch`]
//! and the operator impls panic.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Backend {
    Rational,
    GaussianRational,
    ComplexFloat,
}

impl Backend {
    pub fn is_exact(self) -> bool {
        !matches!(self, Backend::ComplexFloat)
    }
}

/// User-facing choice of ground field. `Real` and `Complex` both live on the
/// float backend; `Real` additionally restricts sampling and inputs to real
/// values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Field {
    Rational,
    GaussianRational,
    Real,
    Complex,
}

impl Field {
    pub fn backend(self) -> Backend {
        match self {
            Field::Rational => Backend::Rational,
            Field::GaussianRational => Backend::GaussianRational,
            Field::Real | Field::Complex => Backend::ComplexFloat,
        }
    }

    pub fn is_exact(self) -> bool {
        self.backend().is_exact()
    }

    /// Whether values are confined to the real line.
    pub fn is_real(self) -> bool {
        matches!(self, Field::Rational | Field::Real)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Rational => "rational",
            Field::GaussianRational => "gaussian-rational",
            Field::Real => "real",
            Field::Complex => "complex",
        })
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Field::Rational),
            "gaussian-rational" => Ok(Field::GaussianRational),
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(Error::Parse(format!("unknown field {other:?}"))),
        }
    }
}

/// Comparison thresholds for the float backend.
///
/// `rel` is applied to singular-value ratios, `abs` to residuals and to
/// individual scalar magnitudes. Exact backends ignore both.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel > 0.0 && rel < 1.0) {
            return Err(Error::InvalidInput(format!(
                "relative tolerance must lie in (0, 1), got {rel}"
            )));
        }
        if abs.is_nan() || abs <= 0.0 || abs.is_infinite() {
            return Err(Error::InvalidInput(format!(
                "absolute tolerance must be positive, got {abs}"
            )));
        }
        Ok(Self { rel, abs })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-8,
            abs: 1e-10,
        }
    }
}

/// `re + im·i` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn add(&self, other: &Self) -> Self {
        Self::new(&self.re + &other.re, &self.im + &other.im)
    }

    fn sub(&self, other: &Self) -> Self {
        Self::new(&self.re - &other.re, &self.im - &other.im)
    }

    fn mul(&self, other: &Self) -> Self {
        Self::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }

    fn div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let n = other.norm_sqr();
        let num = self.mul(&other.conj());
        Some(Self::new(num.re / &n, num.im / n))
    }

    fn neg(&self) -> Self {
        Self::new(-&self.re, -&self.im)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Gaussian(GaussianRational),
    Complex(Complex64),
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        return v;
    }
    // Ratio of two huge integers: shift both down to a common scale.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = (nb.max(db) - 60).max(0);
    let n = (q.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> shift as usize).to_f64().unwrap_or(f64::NAN);
    n / d
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Rational(_) => Backend::Rational,
            Scalar::Gaussian(_) => Backend::GaussianRational,
            Scalar::Complex(_) => Backend::ComplexFloat,
        }
    }

    pub fn zero(backend: Backend) -> Self {
        Self::from_int(backend, 0)
    }

    pub fn one(backend: Backend) -> Self {
        Self::from_int(backend, 1)
    }

    pub fn from_int(backend: Backend, v: i64) -> Self {
        match backend {
            Backend::Rational => Scalar::Rational(BigRational::from_integer(v.into())),
            Backend::GaussianRational => Scalar::Gaussian(GaussianRational::new(
                BigRational::from_integer(v.into()),
                BigRational::zero(),
            )),
            Backend::ComplexFloat => Scalar::Complex(Complex64::new(v as f64, 0.0)),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Rational(rat(num, den))
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Scalar::Gaussian(GaussianRational::new(re, im))
    }

    pub fn real(v: f64) -> Self {
        Scalar::Complex(Complex64::new(v, 0.0))
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Scalar::Complex(Complex64::new(re, im))
    }

    pub fn is_exact(&self) -> bool {
        self.backend().is_exact()
    }

    /// Exact test against zero, regardless of backend.
    pub fn is_exact_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Gaussian(g) => g.is_zero(),
            Scalar::Complex(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    pub fn is_zero(&self, tol: &Tolerance) -> bool {
        match self {
            Scalar::Complex(c) => c.norm() <= tol.abs,
            _ => self.is_exact_zero(),
        }
    }

    /// Modulus as a double. Lossy on exact backends.
    pub fn magnitude(&self) -> f64 {
        self.to_complex64().norm()
    }

    pub fn to_complex64(&self) -> Complex64 {
        match self {
            Scalar::Rational(q) => Complex64::new(rational_to_f64(q), 0.0),
            Scalar::Gaussian(g) => Complex64::new(rational_to_f64(&g.re), rational_to_f64(&g.im)),
            Scalar::Complex(c) => *c,
        }
    }

    /// True when the value has no imaginary part (exactly, or for floats
    /// within the absolute tolerance).
    pub fn is_real(&self, tol: &Tolerance) -> bool {
        match self {
            Scalar::Rational(_) => true,
            Scalar::Gaussian(g) => g.im.is_zero(),
            Scalar::Complex(c) => c.im.abs() <= tol.abs,
        }
    }

    /// Converts to another backend. Exact-to-float is a rounding; float-to-exact
    /// is exact (every finite double is a dyadic rational). Gaussian to
    /// rational fails when the imaginary part is nonzero.
    pub fn to_backend(&self, backend: Backend) -> Result<Scalar> {
        let fail = || Error::InvalidInput(format!("{self} has no {backend:?} representation"));
        Ok(match (self, backend) {
            (s, b) if s.backend() == b => s.clone(),
            (Scalar::Rational(q), Backend::GaussianRational) => {
                Scalar::gaussian(q.clone(), BigRational::zero())
            }
            (Scalar::Gaussian(g), Backend::Rational) => {
                if !g.im.is_zero() {
                    return Err(fail());
                }
                Scalar::Rational(g.re.clone())
            }
            (s, Backend::ComplexFloat) => Scalar::Complex(s.to_complex64()),
            (Scalar::Complex(c), Backend::Rational) => {
                if c.im != 0.0 {
                    return Err(fail());
                }
                Scalar::Rational(BigRational::from_float(c.re).ok_or_else(fail)?)
            }
            (Scalar::Complex(c), Backend::GaussianRational) => Scalar::gaussian(
                BigRational::from_float(c.re).ok_or_else(fail)?,
                BigRational::from_float(c.im).ok_or_else(fail)?,
            ),
            _ => unreachable!(),
        })
    }

    fn same_backend(&self, other: &Scalar) -> Result<()> {
        if self.backend() == other.backend() {
            Ok(())
        } else {
            Err(Error::BackendMismatch(self.backend(), other.backend()))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_backend(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a.add(b)),
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a + b),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_backend(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a.sub(b)),
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a - b),
            _ => unreachable!(),
        })
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_backend(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a.mul(b)),
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a * b),
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.same_backend(other)?;
        if other.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a / b),
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => {
                Scalar::Gaussian(a.div(b).ok_or(Error::DivisionByZero)?)
            }
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a / b),
            _ => unreachable!(),
        })
    }

    pub fn recip(&self) -> Result<Scalar> {
        Scalar::one(self.backend()).checked_div(self)
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.clone()),
            Scalar::Gaussian(g) => Scalar::Gaussian(g.conj()),
            Scalar::Complex(c) => Scalar::Complex(c.conj()),
        }
    }

    /// Principal square root: nonnegative real part, and nonnegative
    /// imaginary part when the real part vanishes. Exact backends succeed
    /// only on perfect squares.
    pub fn sqrt(&self) -> Result<Scalar> {
        match self {
            Scalar::Complex(c) => {
                let mut r = c.sqrt();
                if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
                    r = -r;
                }
                Ok(Scalar::Complex(r))
            }
            Scalar::Rational(q) => rational_sqrt(q)
                .map(Scalar::Rational)
                .ok_or_else(|| Error::NotASquare(self.to_string())),
            Scalar::Gaussian(g) => gaussian_sqrt(g)
                .map(Scalar::Gaussian)
                .ok_or_else(|| Error::NotASquare(self.to_string())),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one(self.backend());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn gaussian_sqrt(g: &GaussianRational) -> Option<GaussianRational> {
    if g.im.is_zero() {
        return if g.re.is_negative() {
            rational_sqrt(&-&g.re).map(|b| GaussianRational::new(BigRational::zero(), b))
        } else {
            rational_sqrt(&g.re).map(|a| GaussianRational::new(a, BigRational::zero()))
        };
    }
    let modulus = rational_sqrt(&g.norm_sqr())?;
    let two = BigRational::from_integer(2.into());
    let a = rational_sqrt(&((&g.re + &modulus) / &two))?;
    let b = &g.im / (two * &a);
    Some(GaussianRational::new(a, b))
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("{}: {}", stringify!($method), e))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
forward_op!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Gaussian(g) => Scalar::Gaussian(g.neg()),
            Scalar::Complex(c) => Scalar::Complex(-c),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&fmt_rational(q)),
            Scalar::Gaussian(g) => write!(f, "{}+{} i", fmt_rational(&g.re), fmt_rational(&g.im)),
            Scalar::Complex(c) => write!(f, "[{:e}, {:e}]", c.re, c.im),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = n.strip_prefix('+').unwrap_or(n);
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

fn parse_gaussian(s: &str) -> Result<GaussianRational> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let body = compact.strip_suffix('i').unwrap_or(&compact);
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'+' | b'-' | b'/'));
    let imag_of = |t: &str| -> Result<BigRational> {
        let t = t.trim();
        match t {
            "" | "+" => Ok(BigRational::one()),
            "-" => Ok(-BigRational::one()),
            _ => parse_rational(t.strip_prefix('+').unwrap_or(t)),
        }
    };
    match split {
        Some(k) => {
            let (re, im) = body.split_at(k);
            let im = im.strip_prefix('+').unwrap_or(im);
            Ok(GaussianRational::new(parse_rational(re)?, imag_of(im)?))
        }
        None => Ok(GaussianRational::new(BigRational::zero(), imag_of(body)?)),
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses `"num/den"` (or a bare integer) as a rational and
    /// `"num/den+num/den i"` as a Gaussian rational.
    fn from_str(s: &str) -> Result<Scalar> {
        if s.trim_end().ends_with('i') {
            parse_gaussian(s).map(Scalar::Gaussian)
        } else {
            parse_rational(s).map(Scalar::Rational)
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Complex(c) => [c.re, c.im].serialize(serializer),
            other => serializer.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Text(String),
    Int(i64),
    Float(f64),
    Pair([f64; 2]),
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match ScalarRepr::deserialize(deserializer)? {
            ScalarRepr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            ScalarRepr::Int(v) => Ok(Scalar::from_int(Backend::Rational, v)),
            ScalarRepr::Float(v) => Ok(Scalar::real(v)),
            ScalarRepr::Pair([re, im]) => Ok(Scalar::complex(re, im)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: (i64, i64), im: (i64, i64)) -> Scalar {
        Scalar::gaussian(rat(re.0, re.1), rat(im.0, im.1))
    }

    #[test]
    fn rational_sum() {
        assert_eq!(Scalar::ratio(1, 2) + Scalar::ratio(1, 3), Scalar::ratio(5, 6));
    }

    #[test]
    fn lowest_terms_canonical_sign() {
        let q = Scalar::ratio(6, -4);
        assert_eq!(q.to_string(), "-3/2");
    }

    #[test]
    fn gaussian_conj_and_i_squared() {
        assert_eq!(g((2, 1), (3, 1)).conj(), g((2, 1), (-3, 1)));
        let i = Scalar::Gaussian(GaussianRational::i());
        assert_eq!(&i * &i, Scalar::from_int(Backend::GaussianRational, -1));
    }

    #[test]
    fn gaussian_division() {
        let a = g((1, 2), (-3, 4));
        let b = g((2, 5), (7, 3));
        let q = &a / &b;
        assert_eq!(&q * &b, a);
    }

    #[test]
    fn mixing_backends_is_an_error() {
        let err = Scalar::ratio(1, 2).checked_add(&Scalar::real(0.5)).unwrap_err();
        assert!(matches!(err, Error::BackendMismatch(..)));
    }

    #[test]
    fn divide_by_zero() {
        assert_eq!(
            Scalar::ratio(1, 2).checked_div(&Scalar::ratio(0, 1)),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            Scalar::real(1.0).checked_div(&Scalar::real(0.0)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn zero_tests() {
        let tol = Tolerance::default();
        assert!(Scalar::ratio(0, 7).is_zero(&tol));
        assert!(Scalar::real(1e-12).is_zero(&tol));
        let tiny = Scalar::Rational(BigRational::new(1.into(), BigInt::from(10).pow(9)));
        assert!(!tiny.is_zero(&tol));
    }

    #[test]
    fn square_roots() {
        assert_eq!(Scalar::ratio(9, 4).sqrt().unwrap(), Scalar::ratio(3, 2));
        assert_eq!(Scalar::real(-1.0).sqrt().unwrap(), Scalar::complex(0.0, 1.0));
        assert_eq!(Scalar::complex(-1.0, -0.0).sqrt().unwrap(), Scalar::complex(0.0, 1.0));
        assert!(matches!(Scalar::ratio(2, 3).sqrt(), Err(Error::NotASquare(_))));
        assert!(matches!(Scalar::ratio(-4, 1).sqrt(), Err(Error::NotASquare(_))));
        // (1 + 2i)^2 = -3 + 4i
        assert_eq!(g((-3, 1), (4, 1)).sqrt().unwrap(), g((1, 1), (2, 1)));
        assert_eq!(g((-4, 9), (0, 1)).sqrt().unwrap(), g((0, 1), (2, 3)));
    }

    #[test]
    fn tolerance_bounds() {
        assert!(Tolerance::new(0.0, 1e-10).is_err());
        assert!(Tolerance::new(1.0, 1e-10).is_err());
        assert!(Tolerance::new(1e-6, 1e-12).is_ok());
    }

    #[test]
    fn text_encoding() {
        assert_eq!(Scalar::from_int(Backend::Rational, 3).to_string(), "3/1");
        let z = g((1, 2), (-3, 4));
        assert_eq!(z.to_string(), "1/2+-3/4 i");
        assert_eq!("1/2+-3/4 i".parse::<Scalar>().unwrap(), z);
        assert_eq!("1/2-3/4i".parse::<Scalar>().unwrap(), z);
        assert_eq!("-1/2+3 i".parse::<Scalar>().unwrap(), g((-1, 2), (3, 1)));
        assert_eq!("i".parse::<Scalar>().unwrap(), g((0, 1), (1, 1)));
        assert_eq!("7".parse::<Scalar>().unwrap(), Scalar::ratio(7, 1));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn json_encoding() {
        let v = vec![Scalar::ratio(-5, 3), g((1, 1), (1, 2)), Scalar::complex(0.25, -1.5)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["-5/3","1/1+1/2 i",[0.25,-1.5]]"#);
        let back: Vec<Scalar> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let ints: Vec<Scalar> = serde_json::from_str("[1, 2, 0.5]").unwrap();
        assert_eq!(ints[1], Scalar::ratio(2, 1));
        assert_eq!(ints[2], Scalar::real(0.5));
    }

    #[test]
    fn backend_conversion() {
        let q = Scalar::ratio(3, 8);
        assert_eq!(q.to_backend(Backend::ComplexFloat).unwrap(), Scalar::real(0.375));
        assert_eq!(Scalar::real(0.375).to_backend(Backend::Rational).unwrap(), q);
        assert!(g((1, 1), (1, 1)).to_backend(Backend::Rational).is_err());
    }

    #[test]
    fn huge_rational_to_float() {
        let big = BigInt::from(10).pow(400);
        let q = BigRational::new(&big * 3, &big * 4);
        assert!((rational_to_f64(&q) - 0.75).abs() < 1e-15);
        let q = BigRational::new(big.clone() * 3 + 1, big * 4);
        assert!((rational_to_f64(&q) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn field_names_round_trip() {
        for f in [Field::Rational, Field::GaussianRational, Field::Real, Field::Complex] {
            assert_eq!(f.to_string().parse::<Field>().unwrap(), f);
            assert_eq!(serde_json::to_string(&f).unwrap(), format!("\"{f}\""));
        }
        assert!("quaternion".parse::<Field>().is_err());
    }
}
