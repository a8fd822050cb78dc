//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `coefficients[k]` is the coefficient of `z^k`. Trailing zeros are kept
/// only when the caller asks for a fixed nominal degree, see
/// [`RationalPolynomial::with_degree`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    coefficients: Vec<BigRational>,
}

impl RationalPolynomial {
    /// Builds a polynomial, trimming trailing zero coefficients.
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        RationalPolynomial { coefficients }
    }

    /// Keeps exactly `degree + 1` coefficients, zero padded. Used for `P_G`,
    /// whose nominal degree `2m` is fixed even when the top coefficient is
    /// structurally known.
    pub fn with_degree(mut coefficients: Vec<BigRational>, degree: usize) -> Self {
        coefficients.resize(degree + 1, BigRational::zero());
        RationalPolynomial { coefficients }
    }

    pub fn from_integers(coefficients: &[i64]) -> Self {
        Self::new(
            coefficients
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        RationalPolynomial {
            coefficients: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        RationalPolynomial { coefficients: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    /// Nominal degree (`None` for the empty coefficient list).
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> BigRational {
        self.coefficients
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.coefficients.iter().rev().find(|c| !c.is_zero())
    }

    /// Copy with trailing zeros removed.
    pub fn trimmed(&self) -> Self {
        Self::new(self.coefficients.clone())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(self.coefficients.iter().map(|c| c * factor).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            Some(lead) => self.scale(&lead.recip()),
            None => Self::zero(),
        }
    }

    /// Euclidean division. Panics when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.trimmed();
        let dl = d.coefficients.len();
        assert!(dl > 0, "division by the zero polynomial");
        let lead_inv = d.coefficients[dl - 1].recip();
        let mut rem = self.trimmed().coefficients;
        if rem.len() < dl {
            return (Self::zero(), Self::new(rem));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dl + 1];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dl - 1] * &lead_inv;
            if !q.is_zero() {
                for (j, c) in d.coefficients.iter().enumerate() {
                    rem[k + j] -= &q * c;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dl - 1);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.trimmed();
        let mut b = other.trimmed();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Square-free decomposition (Yun): monic factors `f_1, f_2, ..` with
    /// `self = c * prod_i f_i^i`. Entry `i - 1` holds `f_i`; trivial factors
    /// are returned as the constant 1.
    pub fn square_free_factors(&self) -> Vec<Self> {
        let f = self.trimmed();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = &c - &b.derivative();
        let mut factors = Vec::new();
        loop {
            let a = b.gcd(&d);
            factors.push(a.clone());
            b = b.div_rem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_rem(&a).0;
            d = &c - &b.derivative();
        }
        while factors.last().is_some_and(|p| p.degree() == Some(0)) {
            factors.pop();
        }
        factors
    }

    /// `Q` with `self(z) = Q(z^2)`, if every odd coefficient vanishes.
    pub fn even_part(&self) -> Option<Self> {
        if self
            .coefficients
            .iter()
            .skip(1)
            .step_by(2)
            .any(|c| !c.is_zero())
        {
            return None;
        }
        Some(Self::new(
            self.coefficients.iter().step_by(2).cloned().collect(),
        ))
    }

    /// Coefficients as `f64`, correct for values far outside the `f64`
    /// range of numerator and denominator separately.
    pub fn to_f64_coefficients(&self) -> Vec<f64> {
        self.coefficients.iter().map(rational_to_f64).collect()
    }

    /// True if `a_k = a_{deg - k}` for all `k`.
    pub fn is_palindromic(&self) -> bool {
        let c = &self.coefficients;
        c.iter().zip(c.iter().rev()).all(|(a, b)| a == b)
    }
}

/// Nearest `f64` to an exact rational (up to rounding of the last bit).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let Some(x) = r.to_f64() {
        if x.is_finite() && x != 0.0 {
            return x;
        }
    }
    let (m, e) = crate::numeric::mantissa_exponent(r);
    m * 2f64.powi(e as i32)
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        RationalPolynomial::new(
            (0..n)
                .map(|k| self.coefficient(k) + rhs.coefficient(k))
                .collect(),
        )
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        RationalPolynomial::new(
            (0..n)
                .map(|k| self.coefficient(k) - rhs.coefficient(k))
                .collect(),
        )
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial::new(self.coefficients.iter().map(|c| -c).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.coefficients.is_empty() || rhs.coefficients.is_empty() {
            return RationalPolynomial::zero();
        }
        let mut out =
            vec![BigRational::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::new(out)
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*z")?,
                _ => write!(f, "{a}*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
