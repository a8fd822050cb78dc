//! Normalized log-counts `(1/v) ln eps(G)`, the classical lower bound and
//! limit constants, the curve `u -> (1/v) ln P_G(u)`, and reports over
//! growing members of a family.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{sequence, FamilySpec};
use crate::graph::Graph;
use crate::local::{profile, tv_distance};
use crate::numeric::{ln_biguint, ln_rational};
use crate::orient::{count_eulerian_frontier_dp, FrontierOptions};
use crate::poly::rational_to_f64;
use crate::subgraph::poly_p;

/// `binom(d, d/2) / 2^{d/2}`, the per-vertex factor of the product bound.
fn vertex_factor(d: usize) -> Result<BigRational> {
    if d % 2 == 1 {
        return Err(Error::Parity(d));
    }
    Ok(BigRational::new(
        BigInt::from(binomial(BigUint::from(d), BigUint::from(d / 2))),
        BigInt::one() << (d / 2),
    ))
}

/// `ln(binom(d, d/2) / 2^{d/2})`: the limit for `d`-regular sequences with
/// girth tending to infinity.
pub fn tree_constant(d: usize) -> Result<f64> {
    Ok(ln_rational(&vertex_factor(d)?))
}

/// `(1/v) ln eps` for a known exact count.
pub fn entropy_of_count(vertex_count: usize, count: &BigUint) -> f64 {
    ln_biguint(count) / vertex_count as f64
}

/// `(1/v) ln eps(G)`, from the exact count.
pub fn entropy(g: &Graph) -> Result<f64> {
    let count = count_eulerian_frontier_dp(g, &FrontierOptions::default())?.value;
    Ok(entropy_of_count(g.vertex_count(), &count))
}

/// `(1/v) sum_v ln(binom(d_v, d_v/2) / 2^{d_v/2})`.
pub fn schrijver_bound(g: &Graph) -> Result<f64> {
    let mut total = 0.0;
    for (&d, &c) in &g.degree_histogram().counts {
        total += c as f64 * tree_constant(d)?;
    }
    Ok(total / g.vertex_count() as f64)
}

/// `sum_k t_k ln(2^{-k/2} binom(k, k/2))` over exact degree fractions.
pub fn large_girth_limit(fractions: &BTreeMap<usize, BigRational>) -> Result<f64> {
    if fractions.values().any(Signed::is_negative)
        || !fractions.values().sum::<BigRational>().is_one()
    {
        return Err(Error::Param(
            "degree fractions must be non-negative and sum to 1".into(),
        ));
    }
    let mut total = 0.0;
    for (&k, t) in fractions {
        let c = tree_constant(k)?;
        if !t.is_zero() {
            total += rational_to_f64(t) * c;
        }
    }
    Ok(total)
}

/// A named limit constant. `generator` names the families in this crate
/// whose sequences approach it, if any.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedConstant {
    pub name: String,
    pub value: f64,
    pub generator: Option<String>,
}

pub fn lieb_constant() -> f64 {
    1.5 * (4.0f64 / 3.0).ln()
}

pub fn baxter_constant() -> f64 {
    (3.0 * 3f64.sqrt() / 2.0).ln()
}

/// Square ice (`lieb`), triangular ice (`baxter`, no generator here) and the
/// tree limits `tree(d)` for even `d <= 12`.
pub fn reference_constants() -> Vec<NamedConstant> {
    let mut out = vec![
        NamedConstant {
            name: "lieb".into(),
            value: lieb_constant(),
            generator: Some("torus, aztec".into()),
        },
        NamedConstant {
            name: "baxter".into(),
            value: baxter_constant(),
            generator: None,
        },
    ];
    for d in (2..=12).step_by(2) {
        out.push(NamedConstant {
            name: format!("tree({d})"),
            value: tree_constant(d).unwrap(),
            generator: (d == 2).then(|| "cycle".into()),
        });
    }
    out
}

/// Entropy figures for a single graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub graph_id: String,
    pub vertex_count: usize,
    pub edge_count: usize,
    #[serde(serialize_with = "as_string")]
    pub count: BigUint,
    pub entropy: f64,
    pub schrijver_bound: f64,
    /// Pauling's estimate `(1/v) ln(2^e prod_v binom(d_v, d_v/2) 2^{-d_v})`,
    /// reported for regular graphs only.
    pub pauling_reference: Option<f64>,
    pub girth: Option<usize>,
}

fn as_string<S: serde::Serializer, T: std::fmt::Display>(
    x: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl EntropyReport {
    pub fn new(graph_id: impl Into<String>, g: &Graph) -> Result<Self> {
        let count = count_eulerian_frontier_dp(g, &FrontierOptions::default())?.value;
        let schrijver = schrijver_bound(g)?;
        Ok(EntropyReport {
            graph_id: graph_id.into(),
            vertex_count: g.vertex_count(),
            edge_count: g.edge_count(),
            entropy: entropy_of_count(g.vertex_count(), &count),
            count,
            schrijver_bound: schrijver,
            // for a d-regular graph, 2^e * prod binom(d, d/2) / 2^d collapses
            // to the product bound
            pauling_reference: g.regular_degree().map(|_| schrijver),
            girth: g.girth(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PCurveRow {
    #[serde(serialize_with = "as_string")]
    pub u: BigRational,
    pub value: f64,
}

/// Rows `(u, (1/v) ln P_G(u))` with `P_G(u)` evaluated exactly; `u = 1`
/// gives the entropy.
pub fn p_curve(g: &Graph, u_values: &[BigRational]) -> Result<Vec<PCurveRow>> {
    g.require_eulerian()?;
    if let Some(u) = u_values.iter().find(|u| !u.is_positive()) {
        return Err(Error::Domain(format!("p-curve needs u > 0 (got {u})")));
    }
    let p = poly_p(g)?;
    let v = g.vertex_count() as f64;
    Ok(u_values
        .iter()
        .map(|u| PCurveRow {
            u: u.clone(),
            value: ln_rational(&p.eval(u)) / v,
        })
        .collect())
}

/// `count` evenly spaced rationals from `lo` to `hi` inclusive.
pub fn u_grid(lo: &BigRational, hi: &BigRational, count: usize) -> Result<Vec<BigRational>> {
    match count {
        0 => Ok(Vec::new()),
        1 => Ok(vec![lo.clone()]),
        _ => {
            let step = (hi - lo) / BigRational::from_integer(BigInt::from(count - 1));
            Ok((0..count)
                .map(|i| lo + &step * BigRational::from_integer(BigInt::from(i)))
                .collect())
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SequenceOptions {
    /// Sample points for the p-curve of every member.
    pub curve: Option<Vec<BigRational>>,
    /// Radius for local profiles; adds the distance between consecutive
    /// members' profiles.
    pub radius_for_reference: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceReport {
    pub family: String,
    pub sizes: Vec<usize>,
    pub entries: Vec<EntropyReport>,
    /// `entropy_i - entropy_{i+1}`
    pub differences: Vec<f64>,
    pub reference_constant: Option<NamedConstant>,
    pub u_curve: Option<Vec<Vec<PCurveRow>>>,
    pub profile_radius: Option<usize>,
    #[serde(serialize_with = "opt_strings")]
    pub profile_distances: Option<Vec<BigRational>>,
}

fn opt_strings<S: serde::Serializer>(
    x: &Option<Vec<BigRational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        None => s.serialize_none(),
        Some(v) => s.collect_seq(v.iter().map(|r| r.to_string())),
    }
}

/// The limit a family's normalized counts approach, when one is known.
fn family_reference(template: &FamilySpec, last: Option<&Graph>) -> Result<Option<NamedConstant>> {
    Ok(match template {
        FamilySpec::Torus(..) | FamilySpec::Aztec(_) => Some(NamedConstant {
            name: "lieb".into(),
            value: lieb_constant(),
            generator: Some(template.name()),
        }),
        FamilySpec::Cycle(_) => Some(NamedConstant {
            name: "tree(2)".into(),
            value: 0.0,
            generator: Some(template.name()),
        }),
        FamilySpec::IteratedSubdivision { .. } => match last {
            Some(g) => Some(NamedConstant {
                name: "large_girth_limit".into(),
                value: large_girth_limit(&g.degree_histogram().fractions())?,
                generator: Some(template.name()),
            }),
            None => None,
        },
        _ => None,
    })
}

/// Entropy, bound and optional curve for each size of a family, with
/// successive differences and the family's reference constant.
pub fn sequence_report(
    template: &FamilySpec,
    sizes: &[usize],
    options: &SequenceOptions,
) -> Result<SequenceReport> {
    let graphs = sequence(template, sizes)?;
    let mut entries = Vec::with_capacity(graphs.len());
    for (g, &size) in graphs.iter().zip(sizes) {
        entries.push(EntropyReport::new(template.with_size(size).to_string(), g)?);
    }
    let differences = entries
        .windows(2)
        .map(|w| w[0].entropy - w[1].entropy)
        .collect();
    let u_curve = match &options.curve {
        Some(us) => Some(
            graphs
                .iter()
                .map(|g| p_curve(g, us))
                .collect::<Result<_>>()?,
        ),
        None => None,
    };
    let profile_distances = match options.radius_for_reference {
        Some(r) => {
            let profiles = graphs
                .iter()
                .map(|g| profile(g, r))
                .collect::<Result<Vec<_>>>()?;
            Some(
                profiles
                    .windows(2)
                    .map(|w| tv_distance(&w[0], &w[1]))
                    .collect::<Result<_>>()?,
            )
        }
        None => None,
    };
    Ok(SequenceReport {
        family: template.name(),
        sizes: sizes.to_vec(),
        reference_constant: family_reference(template, graphs.last())?,
        entries,
        differences,
        u_curve,
        profile_radius: options.radius_for_reference,
        profile_distances,
    })
}
