//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! Every polynomial in the crate (Poincaré polynomials, characteristic
//! polynomials, Macdonald sums) is an [`IntPolynomial`]. Coefficients are
//! stored constant term first with no trailing zeros; the zero polynomial is
//! the empty coefficient list.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("polynomial is not divisible (nonzero remainder or non-integral quotient)")]
    NotDivisible,
    #[error("interpolation produced a non-integral coefficient at degree {degree}")]
    NonIntegralCoefficients { degree: usize },
    #[error("duplicate abscissa {0} in interpolation data")]
    DuplicateAbscissa(i64),
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `t^d`.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        Self { coeffs }
    }

    /// The linear factor `t - root`.
    pub fn linear_root(root: i64) -> Self {
        Self::from_coeffs(vec![BigInt::from(-root), BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Builds the polynomial whose `t^d` coefficient is `counts[d]`.
    pub fn from_counts(counts: &[u64]) -> Self {
        Self::from_coeffs(counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `t^d` (zero beyond the degree).
    pub fn coeff(&self, d: usize) -> BigInt {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_rational(&self, t: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + BigRational::from_integer(c.clone()))
    }

    /// Coefficients as `i64`, if they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Lowest degree at which `self` and `other` differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).find(|&d| self.coeff(d) != other.coeff(d))
    }

    /// Exact division: returns `q` with `self = q * den`, or
    /// [`PolyError::NotDivisible`].
    pub fn exact_divide(&self, den: &Self) -> Result<Self, PolyError> {
        let Some(dd) = den.degree() else {
            return Err(PolyError::DivisionByZeroPolynomial);
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let nd = self.coeffs.len() - 1;
        if nd < dd {
            return Err(PolyError::NotDivisible);
        }
        let lead = &den.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            if !(top % lead).is_zero() {
                return Err(PolyError::NotDivisible);
            }
            let q = top / lead;
            for (j, d) in den.coeffs.iter().enumerate() {
                rem[i + j] -= &q * d;
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(PolyError::NotDivisible);
        }
        Ok(Self::from_coeffs(quot))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }
}

/// `1 + t + ... + t^m`.
pub fn geometric(m: usize) -> IntPolynomial {
    IntPolynomial::from_coeffs(vec![BigInt::one(); m + 1])
}

/// `Π_i (1 + t + ... + t^{m_i})`; the empty product is `1`.
pub fn product_of_geometrics(exponents: &[usize]) -> IntPolynomial {
    exponents.iter().fold(IntPolynomial::one(), |acc, &m| &acc * &geometric(m))
}

/// `Π_i (t - r_i)`.
pub fn product_of_linear_roots(roots: &[i64]) -> IntPolynomial {
    roots.iter().fold(IntPolynomial::one(), |acc, &r| &acc * &IntPolynomial::linear_root(r))
}

/// Lagrange interpolation through `(t_i, v_i)`; the result has degree below
/// `points.len()` and must have integer coefficients.
pub fn interpolate(points: &[(i64, BigRational)]) -> Result<IntPolynomial, PolyError> {
    let mut xs: Vec<i64> = points.iter().map(|p| p.0).collect();
    xs.sort_unstable();
    if let Some(w) = xs.windows(2).find(|w| w[0] == w[1]) {
        return Err(PolyError::DuplicateAbscissa(w[0]));
    }

    let n = points.len();
    let mut acc = vec![BigRational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis numerator Π_{j≠i} (t - x_j), built incrementally
        let mut basis = vec![BigRational::one()];
        let mut denom = BigInt::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let xj_r = BigRational::from_integer(BigInt::from(*xj));
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * &xj_r;
            }
            basis = next;
            denom *= BigInt::from(*xi - *xj);
        }
        let scale = yi / BigRational::from_integer(denom);
        for (k, b) in basis.iter().enumerate() {
            acc[k] += b * &scale;
        }
    }

    let mut coeffs = Vec::with_capacity(n);
    for (degree, c) in acc.into_iter().enumerate() {
        if !c.is_integer() {
            return Err(PolyError::NonIntegralCoefficients { degree });
        }
        coeffs.push(c.to_integer());
    }
    Ok(IntPolynomial::from_coeffs(coeffs))
}

/// Integer-valued convenience wrapper around [`interpolate`].
pub fn interpolate_integers(points: &[(i64, BigInt)]) -> Result<IntPolynomial, PolyError> {
    let pts: Vec<_> = points.iter().map(|(x, y)| (*x, BigRational::from_integer(y.clone()))).collect();
    interpolate(&pts)
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::from_coeffs((0..n).map(|d| self.coeff(d) + rhs.coeff(d)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::from_coeffs((0..n).map(|d| self.coeff(d) - rhs.coeff(d)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for IntPolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(IntPolynomial::zero(), |a, b| &a + &b)
    }
}

impl fmt::Display for IntPolynomial {
    /// Canonical text form, constant term first: `1 + 2*t + t^2`,
    /// `2 - 3*t + t^2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let var = match d {
                0 => String::new(),
                1 => "t".to_owned(),
                _ => format!("t^{d}"),
            };
            match (d, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => f.write_str(&var)?,
                (_, false) => write!(f, "{mag}*{var}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

// JSON form is a plain array of integers, constant term first.
impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let Some(v) = self.to_i64s() else {
            return Err(S::Error::custom("coefficient exceeds i64 range"));
        };
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        let coeffs = v
            .into_iter()
            .map(|x| x.as_i64().map(BigInt::from).ok_or_else(|| D::Error::custom("expected integer coefficient")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::from_coeffs(coeffs))
    }
}
