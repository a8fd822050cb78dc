//! The root measure of `P_G`: the uniform measure on its `2m` zeros.
//!
//! Exact power sums of the zeros come from the coefficients through the
//! Newton identities, with no root finding involved. Numeric roots are
//! computed separately (square-free split, then Aberth iteration on
//! `Q(w) = P(sqrt w)`) and serve as a cross-check.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::ln_rational;
use crate::poly::{rational_to_f64, RationalPolynomial};
use crate::subgraph::{low_order_coefficients, poly_p, DEFAULT_CYCLE_CAP};

/// Default stopping tolerance on the relative polynomial residual.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Sweep limit for the root iteration.
pub const MAX_ITERATIONS: usize = 500;

/// Numeric roots and exact power sums of one polynomial.
#[derive(Debug, Clone, Serialize)]
pub struct RootMeasureSummary {
    pub degree: usize,
    #[serde(skip)]
    pub roots: Vec<Complex64>,
    #[serde(skip)]
    pub power_sums: Vec<BigRational>,
    pub circle_residual: f64,
}

impl RootMeasureSummary {
    pub fn new(p: &RationalPolynomial, k_max: usize, tol: f64) -> Result<Self> {
        let roots = find_roots(p, tol)?;
        Ok(RootMeasureSummary {
            degree: roots.len(),
            power_sums: power_sums(p, k_max),
            circle_residual: circle_residual(&roots),
            roots,
        })
    }

    /// `sum_i rho_i^k` from the numeric roots.
    pub fn numeric_power_sum(&self, k: usize) -> Complex64 {
        numeric_power_sum(&self.roots, k)
    }
}

pub fn numeric_power_sum(roots: &[Complex64], k: usize) -> Complex64 {
    roots.iter().map(|r| r.powi(k as i32)).sum()
}

/// Exact power sums `p_1, .., p_{k_max}` of the roots, via the Newton
/// identities on `e_j = (-1)^j a_{n-j} / a_n`.
///
/// Panics on the zero polynomial.
pub fn power_sums(p: &RationalPolynomial, k_max: usize) -> Vec<BigRational> {
    let p = p.trimmed();
    let n = p.degree().expect("power sums of the zero polynomial");
    let lead = p.coefficient(n);
    let elementary: Vec<BigRational> = (0..=k_max.min(n))
        .map(|j| {
            let e = p.coefficient(n - j) / &lead;
            if j % 2 == 1 {
                -e
            } else {
                e
            }
        })
        .collect();
    newton_power_sums(&elementary, k_max)
}

/// `p_k = (-1)^{k-1} k e_k + sum_{i=1}^{k-1} (-1)^{k-1+i} e_{k-i} p_i`, with
/// `e_j = 0` beyond the supplied list.
fn newton_power_sums(elementary: &[BigRational], k_max: usize) -> Vec<BigRational> {
    let e = |j: usize| elementary.get(j).cloned().unwrap_or_else(BigRational::zero);
    let mut p: Vec<BigRational> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut acc = e(k) * BigRational::from_integer(BigInt::from(k));
        if k % 2 == 0 {
            acc = -acc;
        }
        for i in 1..k {
            let ek = e(k - i);
            if ek.is_zero() || p[i - 1].is_zero() {
                continue;
            }
            let term = ek * &p[i - 1];
            if (k - 1 + i) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    p
}

/// Exact moments `int z^k d mu_G = p_k / (2m)` for `k = 1..=k_max`.
///
/// Uses the full `P_G` when its cycle space is small enough, and otherwise
/// the low-order coefficients `a_0, .., a_{k_max}` (the palindromic mirror of
/// the top coefficients), which only needs even subgraphs with at most
/// `k_max / 2` edges.
pub fn moments(g: &Graph, k_max: usize) -> Result<Vec<BigRational>> {
    let p = power_sums_of_graph(g, k_max)?;
    let two_m = BigRational::from_integer(BigInt::from(2 * g.edge_count()));
    Ok(p.into_iter().map(|x| x / &two_m).collect())
}

/// Exact power sums of the zeros of `P_G`, by the same route as [`moments`].
pub fn power_sums_of_graph(g: &Graph, k_max: usize) -> Result<Vec<BigRational>> {
    g.require_eulerian()?;
    if g.edge_count() == 0 {
        return Err(Error::Domain(
            "the root measure of an edgeless graph is empty".into(),
        ));
    }
    if g.cycle_space_dimension() <= DEFAULT_CYCLE_CAP {
        return Ok(power_sums(&poly_p(g)?, k_max));
    }
    let t = k_max.div_ceil(2).min(g.edge_count());
    let low = low_order_coefficients(g, t)?;
    let a0 = &low[0];
    let elementary: Vec<BigRational> = (0..=k_max.min(2 * t))
        .map(|j| {
            let e = &low[j] / a0;
            if j % 2 == 1 {
                -e
            } else {
                e
            }
        })
        .collect();
    Ok(newton_power_sums(&elementary, k_max))
}

/// All roots of `p` with multiplicity.
///
/// Zero roots are split off, an even polynomial is solved in `w = z^2`, and
/// the remaining polynomial is split into exact square-free factors before
/// running a synchronous Aberth iteration on each. Iteration stops when the
/// largest relative residual `|f(w)| / sum_k |c_k| |w|^k` drops below `tol`.
pub fn find_roots(p: &RationalPolynomial, tol: f64) -> Result<Vec<Complex64>> {
    let p = p.trimmed();
    if p.is_zero() {
        return Err(Error::Domain(
            "the zero polynomial has no finite root set".into(),
        ));
    }
    let zeros = p.coefficients().iter().take_while(|c| c.is_zero()).count();
    let rest = RationalPolynomial::new(p.coefficients()[zeros..].to_vec());
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    match rest.even_part() {
        Some(q) if q.degree().unwrap_or(0) > 0 => {
            for w in solve_square_free(&q, tol)? {
                let z = w.sqrt();
                roots.push(z);
                roots.push(-z);
            }
        }
        _ => roots.extend(solve_square_free(&rest, tol)?),
    }
    Ok(roots)
}

fn solve_square_free(p: &RationalPolynomial, tol: f64) -> Result<Vec<Complex64>> {
    let mut roots = Vec::new();
    for (i, factor) in p.square_free_factors().iter().enumerate() {
        if factor.degree().unwrap_or(0) == 0 {
            continue;
        }
        let simple = aberth(&factor.to_f64_coefficients(), tol)?;
        for r in simple {
            roots.extend(std::iter::repeat_n(r, i + 1));
        }
    }
    Ok(roots)
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn relative_residual(c: &[f64], z: Complex64) -> f64 {
    let scale: f64 = c.iter().rev().fold(0.0, |acc, &a| acc * z.norm() + a.abs());
    let (p, _) = horner(c, z);
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// Aberth-Ehrlich iteration with synchronous (Jacobi-style) updates.
fn aberth(coefficients: &[f64], tol: f64) -> Result<Vec<Complex64>> {
    let n = coefficients.len() - 1;
    let lead = coefficients[n];
    let c: Vec<f64> = coefficients.iter().map(|a| a / lead).collect();
    if n == 1 {
        return Ok(vec![Complex64::new(-c[0], 0.0)]);
    }
    let radius = c[0].abs().powf(1.0 / n as f64).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        residual = z
            .iter()
            .map(|&r| relative_residual(&c, r))
            .fold(0.0, f64::max);
        if residual < tol {
            return Ok(z);
        }
        let steps: Vec<Complex64> = (0..n)
            .map(|k| {
                let (p, dp) = horner(&c, z[k]);
                if p.norm() == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let ratio = p / dp;
                let repulsion: Complex64 = (0..n)
                    .filter(|&j| j != k)
                    .map(|j| (z[k] - z[j]).inv())
                    .sum();
                ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion)
            })
            .collect();
        for (r, s) in z.iter_mut().zip(steps) {
            *r -= s;
        }
    }
    Err(Error::Convergence {
        iterations: MAX_ITERATIONS,
        residual,
    })
}

/// `max_i | |rho_i| - 1 |`, zero for an empty root list.
pub fn circle_residual(roots: &[Complex64]) -> f64 {
    roots
        .iter()
        .map(|r| (r.norm() - 1.0).abs())
        .fold(0.0, f64::max)
}

/// `(1/n) (ln |P(u)| - ln |a_n|)`, the log-potential of the root measure of
/// `p` at `u`, computed from the exact value `P(u)`.
pub fn log_potential_of_poly(p: &RationalPolynomial, u: &BigRational) -> Result<f64> {
    let p = p.trimmed();
    let n = p.degree().filter(|&n| n > 0).ok_or_else(|| {
        Error::Domain("log-potential needs a polynomial of positive degree".into())
    })?;
    let value = p.eval(u).abs();
    if value.is_zero() {
        return Err(Error::Domain(format!("{u} is a root")));
    }
    let lead = p.coefficient(n).abs();
    Ok((ln_rational(&value) - ln_rational(&lead)) / n as f64)
}

/// `(1/n) sum_i ln |u - rho_i|` from numeric roots.
pub fn log_potential_numeric(roots: &[Complex64], u: f64) -> f64 {
    let z = Complex64::new(u, 0.0);
    roots.iter().map(|r| (z - r).norm().ln()).sum::<f64>() / roots.len() as f64
}

/// `int ln |u - z| d mu_G(z)` for positive `u != 1`.
pub fn log_potential(g: &Graph, u: &BigRational) -> Result<f64> {
    if !u.is_positive() || u.is_one() {
        return Err(Error::Domain(format!(
            "log-potential needs u > 0, u != 1 (got {u})"
        )));
    }
    g.require_eulerian()?;
    log_potential_of_poly(&poly_p(g)?, u)
}

/// Both log-potential routes: exact evaluation and numeric roots.
pub fn log_potential_routes(g: &Graph, u: &BigRational, tol: f64) -> Result<(f64, f64)> {
    let exact = log_potential(g, u)?;
    let roots = find_roots(&poly_p(g)?, tol)?;
    Ok((exact, log_potential_numeric(&roots, rational_to_f64(u))))
}
