//! Exact arithmetic in `Q(i, sqrt 2)` and small dense matrices over it.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::rational_to_f64;

pub type ComplexRational = Complex<BigRational>;

/// `a + b sqrt(2)` with Gaussian-rational `a` and `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    pub a: ComplexRational,
    pub b: ComplexRational,
}

fn czero() -> ComplexRational {
    Complex::new(BigRational::zero(), BigRational::zero())
}

impl ExactScalar {
    pub fn new(a: ComplexRational, b: ComplexRational) -> Self {
        ExactScalar { a, b }
    }

    pub fn zero() -> Self {
        ExactScalar::new(czero(), czero())
    }

    pub fn one() -> Self {
        ExactScalar::from_rational(BigRational::one())
    }

    pub fn i() -> Self {
        ExactScalar::new(
            Complex::new(BigRational::zero(), BigRational::one()),
            czero(),
        )
    }

    pub fn sqrt2() -> Self {
        ExactScalar::new(
            czero(),
            Complex::new(BigRational::one(), BigRational::zero()),
        )
    }

    /// `1/sqrt(2) = (1/2) sqrt(2)`
    pub fn inv_sqrt2() -> Self {
        ExactScalar::new(
            czero(),
            Complex::new(BigRational::new(1.into(), 2.into()), BigRational::zero()),
        )
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactScalar::new(Complex::new(r, BigRational::zero()), czero())
    }

    pub fn from_integer(n: i64) -> Self {
        ExactScalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `re + im i`
    pub fn gaussian(re: i64, im: i64) -> Self {
        ExactScalar::new(
            Complex::new(
                BigRational::from_integer(re.into()),
                BigRational::from_integer(im.into()),
            ),
            czero(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.im.is_zero() && self.a.re.is_one()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        ExactScalar::new(self.a.conj(), self.b.conj())
    }

    /// The Galois conjugate `a - b sqrt 2`.
    pub fn sqrt2_conj(&self) -> Self {
        ExactScalar::new(self.a.clone(), -self.b.clone())
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        (self.b.is_zero() && self.a.im.is_zero()).then(|| self.a.re.clone())
    }

    pub fn to_complex64(&self) -> Complex64 {
        let s = std::f64::consts::SQRT_2;
        Complex64::new(
            rational_to_f64(&self.a.re) + s * rational_to_f64(&self.b.re),
            rational_to_f64(&self.a.im) + s * rational_to_f64(&self.b.im),
        )
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: ExactScalar) -> ExactScalar {
        &self + &o
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, o: &ExactScalar) {
        self.a = &self.a + &o.a;
        self.b = &self.b + &o.b;
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.a.clone(), -self.b.clone())
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        if self.is_zero() || o.is_zero() {
            return ExactScalar::zero();
        }
        let two = BigRational::from_integer(2.into());
        let bb = &self.b * &o.b;
        ExactScalar::new(
            &self.a * &o.a + Complex::new(&bb.re * &two, &bb.im * &two),
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: ExactScalar) -> ExactScalar {
        &self * &o
    }
}

impl Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        let mut acc = ExactScalar::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

fn fmt_gaussian(z: &ComplexRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => write!(f, "{}", z.re),
        (true, false) => write!(f, "{}i", z.im),
        (false, false) => {
            let sign = if z.im.is_negative() { '-' } else { '+' };
            write!(f, "({}{}{}i)", z.re, sign, z.im.abs())
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return fmt_gaussian(&self.a, f);
        }
        if !self.a.is_zero() {
            fmt_gaussian(&self.a, f)?;
            write!(f, "+")?;
        }
        fmt_gaussian(&self.b, f)?;
        write!(f, "*sqrt2")
    }
}

/// Dense row-major matrix of exact scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<ExactScalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ExactScalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::new(n, n, vec![ExactScalar::zero(); n * n]);
        for i in 0..n {
            m.data[i * n + i] = ExactScalar::one();
        }
        m
    }

    pub fn from_integers(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Matrix::new(
            rows,
            cols,
            entries
                .iter()
                .map(|&x| ExactScalar::from_integer(x))
                .collect(),
        )
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.data[r * self.cols + c]
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix::new(self.cols, self.rows, data)
    }

    pub fn scale(&self, s: &ExactScalar) -> Matrix {
        Matrix::new(
            self.rows,
            self.cols,
            self.data.iter().map(|x| x * s).collect(),
        )
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix shapes do not compose");
        let mut data = Vec::with_capacity(self.rows * o.cols);
        for r in 0..self.rows {
            for c in 0..o.cols {
                data.push((0..self.cols).map(|k| self.get(r, k) * o.get(k, c)).sum());
            }
        }
        Matrix::new(self.rows, o.cols, data)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.rows)
    }

    /// Inverse of a matrix with rational entries, or `None` if singular or
    /// not rational.
    pub fn rational_inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| self.get(r, c).as_rational())
                    .chain(
                        (0..n)
                            .map(|c| Some(BigRational::from_integer(BigInt::from((r == c) as u8)))),
                    )
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<_>>()?;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, pivot);
            let p = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x = &*x / &p;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    let pivot_row = m[col].clone();
                    for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                        *x -= &factor * p;
                    }
                }
            }
        }
        Some(Matrix::new(
            n,
            n,
            m.into_iter()
                .flat_map(|row| row.into_iter().skip(n).map(ExactScalar::from_rational))
                .collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ring_identities() {
        let s = ExactScalar::sqrt2();
        assert_eq!(&s * &s, ExactScalar::from_integer(2));
        assert_eq!(&ExactScalar::inv_sqrt2() * &s, ExactScalar::one());
        assert_eq!(
            &ExactScalar::i() * &ExactScalar::i(),
            ExactScalar::from_integer(-1)
        );
        let x = &ExactScalar::gaussian(1, 2) + &(&ExactScalar::gaussian(-3, 1) * &s);
        let y = &ExactScalar::gaussian(0, -1) + &(&ExactScalar::from_rational(q(1, 3)) * &s);
        let z = ExactScalar::gaussian(5, 7);
        assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        assert_eq!(&x * &y, &y * &x);
        // x * conj(x) is real; x * sqrt2_conj(x) has no sqrt 2 part
        let n = &x * &x.conj();
        assert!(n.a.im.is_zero() && n.b.im.is_zero());
        assert!((&x * &x.sqrt2_conj()).b.is_zero());
        assert_eq!(x.conj().conj(), x);
        let f = x.to_complex64();
        assert!((f.re - (1.0 - 3.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn display() {
        assert_eq!(ExactScalar::from_rational(q(3, 2)).to_string(), "3/2");
        assert_eq!(ExactScalar::inv_sqrt2().to_string(), "1/2*sqrt2");
        assert_eq!(ExactScalar::gaussian(1, -1).to_string(), "(1-1i)");
        assert_eq!(ExactScalar::i().to_string(), "1i");
    }

    #[test]
    fn matrices() {
        let m = Matrix::from_integers(2, 2, &[2, 1, 5, 3]);
        let inv = m.rational_inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(Matrix::from_integers(2, 2, &[1, 2, 2, 4])
            .rational_inverse()
            .is_none());
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(*m.transpose().get(0, 1), ExactScalar::from_integer(5));
    }
}
