//! Floating-point views of exact values.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Top 64 bits of `|x|` as a float together with the number of bits dropped.
fn top_bits(x: &BigUint) -> (f64, i64) {
    let bits = x.bits() as i64;
    let shift = (bits - 64).max(0);
    let top = (x >> shift as usize).to_u64().expect("at most 64 bits");
    (top as f64, shift)
}

/// `r = m * 2^e` with `|m|` in `[0.5, 1)`, valid far beyond the `f64` exponent range.
pub fn mantissa_exponent(r: &BigRational) -> (f64, i64) {
    if r.is_zero() {
        return (0.0, 0);
    }
    let (nm, ns) = top_bits(r.numer().magnitude());
    let (dm, ds) = top_bits(r.denom().magnitude());
    let mut m = nm / dm;
    let mut e = ns - ds;
    let (fm, fe) = frexp(m);
    m = fm;
    e += fe;
    if r.is_negative() {
        m = -m;
    }
    (m, e)
}

fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 {
        return (0.0, 0);
    }
    let e = x.abs().log2().floor() as i64 + 1;
    let mut m = x / 2f64.powi(e as i32);
    let mut e = e;
    // log2 rounding can leave m just outside [0.5, 1)
    if m.abs() >= 1.0 {
        m /= 2.0;
        e += 1;
    } else if m.abs() < 0.5 {
        m *= 2.0;
        e -= 1;
    }
    (m, e)
}

/// Natural logarithm of a positive rational of any size:
/// `ln(p/q) = ln(mantissa ratio) + (bit shift) * ln 2`.
///
/// Returns `-inf` for zero and `NaN` for negative input.
pub fn ln_rational(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    if r.is_negative() {
        return f64::NAN;
    }
    let (m, e) = mantissa_exponent(r);
    m.ln() + e as f64 * std::f64::consts::LN_2
}

pub fn ln_biguint(x: &BigUint) -> f64 {
    ln_rational(&BigRational::from_integer(BigInt::from_biguint(
        Sign::Plus,
        x.clone(),
    )))
}

/// `%.15g`-style rendering: 15 significant digits, trailing zeros removed.
pub fn format_g15(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        let s = format!("{:.14e}", x);
        let (mant, e) = s.split_once('e').unwrap();
        let mant = trim_zeros(mant);
        return format!("{mant}e{e}");
    }
    let decimals = (14 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal (`"0.75"`, `"-1.5e-3"`)
/// into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer: BigInt = digits.parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    })
}
