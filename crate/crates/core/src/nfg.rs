//! Normal factor graphs: edge variables over a finite alphabet, one local
//! function per vertex, and gauge transformations that leave the partition
//! function unchanged.
//!
//! Tables are indexed by the labels of a vertex's incident edges, taken in
//! the order of [`Graph::incident_edges`], with the first edge as the most
//! significant digit.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::orient::{count_eulerian_frontier_dp, FrontierOptions};
use crate::scalar::{ExactScalar, Matrix};
use crate::subgraph::s_vector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFactorGraph {
    graph: Graph,
    alphabet_size: usize,
    tables: Vec<Vec<ExactScalar>>,
}

impl NormalFactorGraph {
    pub fn new(graph: Graph, alphabet_size: usize, tables: Vec<Vec<ExactScalar>>) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::Param("alphabet must be non-empty".into()));
        }
        if tables.len() != graph.vertex_count() {
            return Err(Error::Param(format!(
                "{} tables for {} vertices",
                tables.len(),
                graph.vertex_count()
            )));
        }
        for (v, t) in tables.iter().enumerate() {
            let expected = alphabet_size.pow(graph.degree(v) as u32);
            if t.len() != expected {
                return Err(Error::Shape {
                    vertex: v,
                    expected,
                    got: t.len(),
                });
            }
        }
        Ok(NormalFactorGraph {
            graph,
            alphabet_size,
            tables,
        })
    }

    /// Builds every table from `f(v, labels)`.
    pub fn from_fn(
        graph: Graph,
        alphabet_size: usize,
        f: impl Fn(usize, &[usize]) -> ExactScalar,
    ) -> Result<Self> {
        let tables = (0..graph.vertex_count())
            .map(|v| {
                let d = graph.degree(v);
                let mut labels = vec![0usize; d];
                (0..alphabet_size.pow(d as u32))
                    .map(|index| {
                        decode(index, alphabet_size, &mut labels);
                        f(v, &labels)
                    })
                    .collect()
            })
            .collect();
        NormalFactorGraph::new(graph, alphabet_size, tables)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// The incident-edge order used to index the table of `v`.
    pub fn edge_order(&self, v: usize) -> &[usize] {
        self.graph.incident_edges(v)
    }

    pub fn table(&self, v: usize) -> &[ExactScalar] {
        &self.tables[v]
    }

    pub fn value(&self, v: usize, labels: &[usize]) -> &ExactScalar {
        &self.tables[v][encode(labels, self.alphabet_size)]
    }
}

fn encode(labels: &[usize], q: usize) -> usize {
    labels.iter().fold(0, |acc, &x| acc * q + x)
}

fn decode(mut index: usize, q: usize, labels: &mut [usize]) {
    for slot in labels.iter_mut().rev() {
        *slot = index % q;
        index /= q;
    }
}

/// Exact `Z = sum_sigma prod_v f_v(sigma restricted to v)`.
///
/// Requires `q^e <= 2^cap`. Vertices are contracted one at a time in a
/// greedy order that keeps the set of half-assigned edges small, so the
/// work is far below `q^e` on sparse graphs.
pub fn partition_function(h: &NormalFactorGraph, cap: usize) -> Result<ExactScalar> {
    let g = &h.graph;
    let q = h.alphabet_size;
    if BigUint::from(q).pow(g.edge_count()) > BigUint::one() << cap {
        return Err(Error::CapExceeded {
            size: g.edge_count(),
            cap,
        });
    }
    let n = g.vertex_count();
    let mut processed = vec![false; n];
    // open edges: exactly one endpoint processed; position = key slot
    let mut open: Vec<usize> = Vec::new();
    let mut states: HashMap<Vec<u8>, ExactScalar> =
        HashMap::from([(Vec::new(), ExactScalar::one())]);

    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !processed[v])
            .min_by_key(|&v| {
                let closing = g
                    .incident_edges(v)
                    .iter()
                    .filter(|e| open.contains(e))
                    .count();
                (g.degree(v) as isize - 2 * closing as isize, v)
            })
            .unwrap();
        processed[v] = true;
        let incident = g.incident_edges(v);
        // for each incident edge: Ok(slot in current key) or Err(slot among new edges)
        let mut fresh = 0usize;
        let sources: Vec<std::result::Result<usize, usize>> = incident
            .iter()
            .map(|e| match open.iter().position(|x| x == e) {
                Some(i) => Ok(i),
                None => {
                    fresh += 1;
                    Err(fresh - 1)
                }
            })
            .collect();
        let keep: Vec<usize> = (0..open.len())
            .filter(|i| !incident.contains(&open[*i]))
            .collect();
        let new_open: Vec<usize> = keep
            .iter()
            .map(|&i| open[i])
            .chain(
                incident
                    .iter()
                    .zip(&sources)
                    .filter(|(_, s)| s.is_err())
                    .map(|(&e, _)| e),
            )
            .collect();

        let table = &h.tables[v];
        let mut next: HashMap<Vec<u8>, ExactScalar> = HashMap::new();
        let mut assignment = vec![0usize; fresh];
        for (key, value) in &states {
            for a in 0..q.pow(fresh as u32) {
                decode(a, q, &mut assignment);
                let index = sources.iter().fold(0, |acc, s| {
                    acc * q
                        + match *s {
                            Ok(i) => key[i] as usize,
                            Err(j) => assignment[j],
                        }
                });
                let f = &table[index];
                if f.is_zero() {
                    continue;
                }
                let mut new_key: Vec<u8> = keep.iter().map(|&i| key[i]).collect();
                new_key.extend(assignment.iter().map(|&x| x as u8));
                let term = value * f;
                next.entry(new_key)
                    .and_modify(|acc| *acc += &term)
                    .or_insert(term);
            }
        }
        next.retain(|_, x| !x.is_zero());
        states = next;
        open = new_open;
    }
    Ok(states.remove(&Vec::new()).unwrap_or_else(ExactScalar::zero))
}

/// One matrix per edge endpoint: `matrices[e][0]` acts at the first endpoint
/// of edge `e`, `matrices[e][1]` at the second. All matrices are `q' x q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeSet {
    pub matrices: Vec<[Matrix; 2]>,
}

impl GaugeSet {
    pub fn identity(g: &Graph, q: usize) -> GaugeSet {
        GaugeSet {
            matrices: vec![[Matrix::identity(q), Matrix::identity(q)]; g.edge_count()],
        }
    }

    /// The matrix that vertex `v` applies on edge `e`.
    pub fn at(&self, g: &Graph, e: usize, v: usize) -> &Matrix {
        let (a, _) = g.edge(e);
        &self.matrices[e][if v == a { 0 } else { 1 }]
    }

    /// Checks `G_uv^T G_vu = Id` on every edge.
    pub fn validate(&self) -> Result<()> {
        for (edge, [m, n]) in self.matrices.iter().enumerate() {
            if m.rows != n.rows || m.cols != n.cols || !m.transpose().mul(n).is_identity() {
                return Err(Error::GaugeInvalid { edge });
            }
        }
        Ok(())
    }
}

/// `q' x q` matrix applied along one axis of a row-major tensor.
fn apply_axis(table: &[ExactScalar], dims: &[usize], axis: usize, m: &Matrix) -> Vec<ExactScalar> {
    let inner: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let (q_new, q_old) = (m.rows, m.cols);
    let mut out = Vec::with_capacity(outer * q_new * inner);
    for o in 0..outer {
        for t in 0..q_new {
            for s in 0..inner {
                out.push(
                    (0..q_old)
                        .map(|sigma| m.get(t, sigma) * &table[(o * q_old + sigma) * inner + s])
                        .sum(),
                );
            }
        }
    }
    out
}

/// `f^_v(tau) = sum_sigma prod_i G_{v,e_i}(tau_i, sigma_i) f_v(sigma)`.
///
/// The gauge set is validated first; the result has alphabet size `q'`.
pub fn gauge_transform(h: &NormalFactorGraph, s: &GaugeSet) -> Result<NormalFactorGraph> {
    let g = &h.graph;
    if s.matrices.len() != g.edge_count() {
        return Err(Error::Param(format!(
            "{} gauge pairs for {} edges",
            s.matrices.len(),
            g.edge_count()
        )));
    }
    let q = h.alphabet_size;
    let q_new = s.matrices.first().map_or(q, |m| m[0].rows);
    if let Some(e) = s
        .matrices
        .iter()
        .position(|pair| pair.iter().any(|m| m.cols != q || m.rows != q_new))
    {
        return Err(Error::Param(format!(
            "gauge matrices on edge {e} do not map a {q}-letter alphabet to {q_new} letters"
        )));
    }
    s.validate()?;
    let tables = (0..g.vertex_count())
        .map(|v| {
            let order = g.incident_edges(v);
            let mut dims = vec![q; order.len()];
            let mut table = h.tables[v].clone();
            for (axis, &e) in order.iter().enumerate() {
                table = apply_axis(&table, &dims, axis, s.at(g, e, v));
                dims[axis] = q_new;
            }
            table
        })
        .collect();
    NormalFactorGraph::new(g.clone(), q_new, tables)
}

fn balance_table(d: usize) -> Vec<ExactScalar> {
    (0..1usize << d)
        .map(|x| {
            if x.count_ones() as usize * 2 == d {
                ExactScalar::one()
            } else {
                ExactScalar::zero()
            }
        })
        .collect()
}

/// Encoding of Eulerian orientations on the subdivision of `g`: an original
/// vertex accepts exactly `d/2` outgoing half-edges (label 1), and an edge
/// vertex requires its two half-edges to disagree. `Z` equals `eps(g)`.
///
/// Vertex `n + i` of the result stands for edge `i` of `g`.
pub fn eulerian_nfg(g: &Graph) -> Result<NormalFactorGraph> {
    g.require_eulerian()?;
    let n = g.vertex_count();
    let (sub, _) = g.subdivide();
    let tables = (0..sub.vertex_count())
        .map(|v| {
            if v < n {
                balance_table(sub.degree(v))
            } else {
                [0, 1, 1, 0]
                    .iter()
                    .map(|&x| ExactScalar::from_integer(x))
                    .collect()
            }
        })
        .collect();
    NormalFactorGraph::new(sub, 2, tables)
}

/// `(1/sqrt 2) [[1, 1], [i, -i]]`
pub fn g1() -> Matrix {
    let i = ExactScalar::i();
    Matrix::new(
        2,
        2,
        vec![ExactScalar::one(), ExactScalar::one(), i.clone(), -&i],
    )
    .scale(&ExactScalar::inv_sqrt2())
}

/// `(1/sqrt 2) [[1, 1], [-i, i]]`
pub fn g2() -> Matrix {
    let i = ExactScalar::i();
    Matrix::new(2, 2, vec![ExactScalar::one(), ExactScalar::one(), -&i, i])
        .scale(&ExactScalar::inv_sqrt2())
}

/// Gauges on the subdivision of `g`: `G2` at original vertices, `G1` at
/// edge vertices. They turn every edge table into the identity and every
/// vertex table into `tau -> s_{|tau|}`.
pub fn eulerian_gauges(g: &Graph) -> GaugeSet {
    let n = g.vertex_count();
    let (sub, _) = g.subdivide();
    GaugeSet {
        matrices: sub
            .edges()
            .iter()
            .map(|&(a, _)| if a < n { [g2(), g1()] } else { [g1(), g2()] })
            .collect(),
    }
}

/// Applies `G2` on every axis of the degree-`d` balance table and compares
/// each of the `2^d` entries with `s_{|tau|}`.
pub fn verify_s_derivation(d: usize) -> Result<bool> {
    let s = s_vector(d)?;
    if d > 12 {
        return Err(Error::Param(format!(
            "degree {d} is above the supported 12"
        )));
    }
    let mut table = balance_table(d);
    let mut dims = vec![2usize; d];
    let g = g2();
    for axis in 0..d {
        table = apply_axis(&table, &dims, axis, &g);
        dims[axis] = 2;
    }
    Ok(table.iter().enumerate().all(|(tau, x)| {
        *x == ExactScalar::from_rational(s.entries()[tau.count_ones() as usize].clone())
    }))
}

/// Random NFG with Gaussian-integer table entries in `[-2, 2] + [-2, 2] i`.
pub fn random_nfg(g: &Graph, q: usize, seed: u64) -> Result<NormalFactorGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tables = (0..g.vertex_count())
        .map(|v| {
            (0..q.pow(g.degree(v) as u32))
                .map(|_| ExactScalar::gaussian(rng.random_range(-2..=2), rng.random_range(-2..=2)))
                .collect()
        })
        .collect();
    NormalFactorGraph::new(g.clone(), q, tables)
}

/// Valid random gauges: an invertible integer matrix `M` at the first
/// endpoint of each edge and `(M^T)^{-1}` at the second.
pub fn random_gauges(g: &Graph, q: usize, seed: u64) -> GaugeSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrices = (0..g.edge_count())
        .map(|_| loop {
            let entries: Vec<i64> = (0..q * q).map(|_| rng.random_range(-3..=3)).collect();
            let m = Matrix::from_integers(q, q, &entries);
            if let Some(inv) = m.transpose().rational_inverse() {
                break [m, inv];
            }
        })
        .collect();
    GaugeSet { matrices }
}

/// Outcome of replaying the gauge argument on one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NfgCertificate {
    pub z: String,
    pub z_gauged: String,
    pub count: String,
    /// Gauged edge tables are the identity and vertex tables are `s_{|tau|}`.
    pub tables_match: bool,
    pub pass: bool,
}

/// Builds the encoding, computes `Z` before and after the Eulerian gauges,
/// and compares both with an independent orientation count.
pub fn nfg_certificate(g: &Graph, cap: usize) -> Result<NfgCertificate> {
    let h = eulerian_nfg(g)?;
    let z = partition_function(&h, cap)?;
    let gauged = gauge_transform(&h, &eulerian_gauges(g))?;
    let z_gauged = partition_function(&gauged, cap)?;
    let count = count_eulerian_frontier_dp(g, &FrontierOptions::default())?.value;
    let tables_match = gauged_tables_match(g, &gauged)?;
    let expected = ExactScalar::from_rational(num_rational::BigRational::from_integer(
        count.clone().into(),
    ));
    Ok(NfgCertificate {
        pass: z == expected && z_gauged == expected && tables_match,
        z: z.to_string(),
        z_gauged: z_gauged.to_string(),
        count: count.to_string(),
        tables_match,
    })
}

/// Whether the gauged encoding of `g` has identity edge tables and
/// `tau -> s_{|tau|}` vertex tables.
pub fn gauged_tables_match(g: &Graph, gauged: &NormalFactorGraph) -> Result<bool> {
    let n = g.vertex_count();
    let identity = Matrix::identity(2).data;
    for v in 0..gauged.graph().vertex_count() {
        let table = gauged.table(v);
        let ok = if v < n {
            let s = s_vector(g.degree(v))?;
            table.iter().enumerate().all(|(tau, x)| {
                *x == ExactScalar::from_rational(s.entries()[tau.count_ones() as usize].clone())
            })
        } else {
            table == identity.as_slice()
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
