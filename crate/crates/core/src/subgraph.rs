//! The subgraph counting function `F_G`, its Eulerian specialization `P_G(z)`,
//! and per-vertex key polynomials.
//!
//! `F_G` sums, over all edge subsets `A`, the product of per-vertex weights
//! `x^(v)_{d_A(v)}`. Two enumeration paths exist: all `2^e` subsets, for
//! arbitrary weights, and the `2^(e - v + c)` even subsets spanned by a cycle
//! basis, for weights that vanish at odd indices (the s-vectors).
//!
//! Both paths walk their subsets in Gray-code order and only record, for
//! every visited subset, how many vertices of each weight class sit at each
//! subset degree. The exact rational products are formed once per distinct
//! record at the end.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::orient::{count_pm_brute, DEFAULT_CAP};
use crate::poly::RationalPolynomial;

/// Largest cycle-space dimension accepted by [`poly_p`] by default.
pub const DEFAULT_CYCLE_CAP: usize = 30;

/// Weights `x_0, .., x_d` for a vertex of degree `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(pub Vec<BigRational>);

impl WeightVector {
    pub fn from_fractions(entries: &[(i64, i64)]) -> Self {
        WeightVector(
            entries
                .iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect(),
        )
    }

    /// Vertex degree this vector is meant for.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }
}

fn big_binomial(n: usize, k: usize) -> BigInt {
    binomial(BigInt::from(n), BigInt::from(k))
}

/// The weight vector that makes `F_G` count Eulerian orientations:
/// `s_k = C(d, d/2) C(d/2, k/2) / (2^(d/2) C(d, k))` for even `k`, 0 for odd `k`.
pub fn s_vector(d: usize) -> Result<WeightVector> {
    if d % 2 == 1 {
        return Err(Error::Parity(d));
    }
    let h = d / 2;
    let prefactor = BigRational::new(big_binomial(d, h), BigInt::one() << h);
    Ok(WeightVector(
        (0..=d)
            .map(|k| {
                if k % 2 == 1 {
                    BigRational::zero()
                } else {
                    &prefactor * BigRational::new(big_binomial(h, k / 2), big_binomial(d, k))
                }
            })
            .collect(),
    ))
}

/// `K(z) = sum_k C(d, k) x_k z^k`.
pub fn key_polynomial(w: &WeightVector) -> RationalPolynomial {
    let d = w.degree();
    RationalPolynomial::new(
        w.0.iter()
            .enumerate()
            .map(|(k, x)| x * BigRational::from_integer(big_binomial(d, k)))
            .collect(),
    )
}

/// Per-vertex weight classes. Vertices with identical weight vectors share a
/// class; `(class, subset degree)` pairs are numbered as "types".
struct WeightClasses {
    class_of: Vec<usize>,
    /// `type_of[class][k]` for `k = 0..=d(class)`
    type_of: Vec<Vec<usize>>,
    /// inverse map: type -> (class, k)
    types: Vec<(usize, usize)>,
    weights: Vec<WeightVector>,
}

impl WeightClasses {
    fn new(per_vertex: &[&WeightVector]) -> Self {
        let mut index: HashMap<&WeightVector, usize> = HashMap::new();
        let mut weights = Vec::new();
        let class_of = per_vertex
            .iter()
            .map(|&w| {
                *index.entry(w).or_insert_with(|| {
                    weights.push(w.clone());
                    weights.len() - 1
                })
            })
            .collect();
        let mut types = Vec::new();
        let type_of = weights
            .iter()
            .enumerate()
            .map(|(c, w)| {
                (0..=w.degree())
                    .map(|k| {
                        types.push((c, k));
                        types.len() - 1
                    })
                    .collect()
            })
            .collect();
        WeightClasses {
            class_of,
            type_of,
            types,
            weights,
        }
    }

    fn type_of(&self, v: usize, k: usize) -> usize {
        self.type_of[self.class_of[v]][k]
    }
}

/// Per-type vertex counts of one subset.
trait Signature: Clone + Eq + Hash + Send {
    fn bump(&mut self, from: usize, to: usize);
    fn counts(&self, n_types: usize) -> Vec<u32>;
}

/// Counts packed into one `u128`, `bits` bits per type.
#[derive(Clone, PartialEq, Eq, Hash)]
struct PackedSignature {
    key: u128,
    bits: u32,
}

impl Signature for PackedSignature {
    fn bump(&mut self, from: usize, to: usize) {
        self.key -= 1u128 << (from as u32 * self.bits);
        self.key += 1u128 << (to as u32 * self.bits);
    }

    fn counts(&self, n_types: usize) -> Vec<u32> {
        let mask = (1u128 << self.bits) - 1;
        (0..n_types)
            .map(|t| ((self.key >> (t as u32 * self.bits)) & mask) as u32)
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct VecSignature(Vec<u32>);

impl Signature for VecSignature {
    fn bump(&mut self, from: usize, to: usize) {
        self.0[from] -= 1;
        self.0[to] += 1;
    }

    fn counts(&self, _: usize) -> Vec<u32> {
        self.0.clone()
    }
}

/// Walks the XOR-span of `generators` (each a list of edge indices) and
/// tallies the signature of every subset.
struct SpanWalk<'a> {
    g: &'a Graph,
    classes: &'a WeightClasses,
    generators: &'a [Vec<usize>],
}

impl SpanWalk<'_> {
    fn run(&self, threads: usize) -> HashMap<Vec<u32>, u64> {
        let n_types = self.classes.types.len();
        let bits = usize::BITS - self.g.vertex_count().leading_zeros();
        if n_types as u32 * bits <= 128 {
            let mut zero = PackedSignature { key: 0, bits };
            for v in 0..self.g.vertex_count() {
                zero.key += 1u128 << (self.classes.type_of(v, 0) as u32 * bits);
            }
            self.run_with(zero, threads)
        } else {
            let mut counts = vec![0u32; n_types];
            for v in 0..self.g.vertex_count() {
                counts[self.classes.type_of(v, 0)] += 1;
            }
            self.run_with(VecSignature(counts), threads)
        }
    }

    fn run_with<S: Signature>(&self, zero: S, threads: usize) -> HashMap<Vec<u32>, u64> {
        let n = self.generators.len();
        let split = if threads <= 1 || n < 12 {
            0
        } else {
            (threads.next_power_of_two().trailing_zeros() as usize + 2).min(n)
        };
        let low = n - split;
        let prefixes: Vec<u64> = (0..1u64 << split).collect();
        let per_thread = prefixes.len().div_ceil(threads.max(1));
        let partial: Vec<HashMap<S, u64>> = std::thread::scope(|s| {
            let handles: Vec<_> = prefixes
                .chunks(per_thread)
                .map(|chunk| {
                    let zero = zero.clone();
                    s.spawn(move || {
                        let mut tally = HashMap::new();
                        for &p in chunk {
                            let mut state = WalkState::new(self, zero.clone());
                            for j in 0..split {
                                if p >> j & 1 == 1 {
                                    state.flip(&self.generators[low + j]);
                                }
                            }
                            state.gray_walk(&self.generators[..low], &mut tally);
                        }
                        tally
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let n_types = self.classes.types.len();
        let mut merged: HashMap<Vec<u32>, u64> = HashMap::new();
        for tally in partial {
            for (sig, c) in tally {
                *merged.entry(sig.counts(n_types)).or_insert(0) += c;
            }
        }
        merged
    }
}

struct WalkState<'a, S> {
    walk: &'a SpanWalk<'a>,
    in_set: Vec<bool>,
    degree: Vec<usize>,
    sig: S,
}

impl<'a, S: Signature> WalkState<'a, S> {
    fn new(walk: &'a SpanWalk<'a>, zero: S) -> Self {
        WalkState {
            walk,
            in_set: vec![false; walk.g.edge_count()],
            degree: vec![0; walk.g.vertex_count()],
            sig: zero,
        }
    }

    fn flip(&mut self, generator: &[usize]) {
        for &e in generator {
            let (a, b) = self.walk.g.edge(e);
            let adding = !self.in_set[e];
            self.in_set[e] = adding;
            for v in [a, b] {
                let old = self.degree[v];
                let new = if adding { old + 1 } else { old - 1 };
                self.degree[v] = new;
                let cls = self.walk.classes;
                self.sig.bump(cls.type_of(v, old), cls.type_of(v, new));
            }
        }
    }

    fn gray_walk(&mut self, generators: &[Vec<usize>], tally: &mut HashMap<S, u64>) {
        *tally.entry(self.sig.clone()).or_insert(0) += 1;
        for i in 1u64..1 << generators.len() {
            self.flip(&generators[i.trailing_zeros() as usize]);
            *tally.entry(self.sig.clone()).or_insert(0) += 1;
        }
    }
}

/// Exact `prod_t w_t^{count_t}` for one tallied signature, plus `2|A|`.
fn weigh(classes: &WeightClasses, counts: &[u32]) -> (BigRational, usize) {
    let mut value = BigRational::one();
    let mut degree_sum = 0;
    for (t, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (class, k) = classes.types[t];
        let w = &classes.weights[class].0[k];
        if w.is_zero() {
            return (BigRational::zero(), 0);
        }
        value *= num_traits::pow(w.clone(), c as usize);
        degree_sum += k * c as usize;
    }
    (value, degree_sum)
}

fn check_weights(g: &Graph, weights: &[WeightVector]) -> Result<()> {
    if weights.len() != g.vertex_count() {
        return Err(Error::Param(format!(
            "{} weight vectors for {} vertices",
            weights.len(),
            g.vertex_count()
        )));
    }
    for (v, w) in weights.iter().enumerate() {
        if w.0.len() != g.degree(v) + 1 {
            return Err(Error::Shape {
                vertex: v,
                expected: g.degree(v) + 1,
                got: w.0.len(),
            });
        }
    }
    Ok(())
}

/// `F_G((x^(v))_v) = sum_{A subset E} prod_v x^(v)_{d_A(v)}` by enumerating
/// all `2^e` edge subsets.
pub fn eval_f(g: &Graph, weights: &[WeightVector], cap: usize) -> Result<BigRational> {
    eval_f_threaded(g, weights, cap, 1)
}

pub fn eval_f_threaded(
    g: &Graph,
    weights: &[WeightVector],
    cap: usize,
    threads: usize,
) -> Result<BigRational> {
    check_weights(g, weights)?;
    if g.edge_count() > cap {
        return Err(Error::CapExceeded {
            size: g.edge_count(),
            cap,
        });
    }
    let refs: Vec<&WeightVector> = weights.iter().collect();
    let classes = WeightClasses::new(&refs);
    let generators: Vec<Vec<usize>> = (0..g.edge_count()).map(|e| vec![e]).collect();
    let tally = SpanWalk {
        g,
        classes: &classes,
        generators: &generators,
    }
    .run(threads);
    Ok(tally
        .iter()
        .map(|(counts, &n)| weigh(&classes, counts).0 * BigRational::from_integer(n.into()))
        .fold(BigRational::zero(), |acc, x| acc + x))
}

/// `F_G` with one weight vector shared by every vertex of a regular graph.
pub fn eval_f_regular(g: &Graph, w: &WeightVector, cap: usize) -> Result<BigRational> {
    let weights = vec![w.clone(); g.vertex_count()];
    eval_f(g, &weights, cap)
}

/// s-vector weights for every vertex. Fails on odd degrees.
pub fn s_weights(g: &Graph) -> Result<Vec<WeightVector>> {
    g.require_eulerian()?;
    (0..g.vertex_count())
        .map(|v| s_vector(g.degree(v)))
        .collect()
}

/// Options for [`poly_p_with`].
#[derive(Debug, Clone, Copy)]
pub struct PolyOptions {
    pub cycle_cap: usize,
    pub threads: usize,
}

impl Default for PolyOptions {
    fn default() -> Self {
        PolyOptions {
            cycle_cap: DEFAULT_CYCLE_CAP,
            threads: 1,
        }
    }
}

/// `P_G(z) = sum_A prod_v s^(v)_{d_A(v)} z^{2|A|}`, of nominal degree `2e`.
///
/// Only even subsets contribute because the s-vectors vanish at odd
/// indices, so the sum runs over the cycle space.
pub fn poly_p(g: &Graph) -> Result<RationalPolynomial> {
    poly_p_with(g, &PolyOptions::default())
}

pub fn poly_p_with(g: &Graph, options: &PolyOptions) -> Result<RationalPolynomial> {
    let weights = s_weights(g)?;
    let dim = g.cycle_space_dimension();
    if dim > options.cycle_cap {
        return Err(Error::CapExceeded {
            size: dim,
            cap: options.cycle_cap,
        });
    }
    let refs: Vec<&WeightVector> = weights.iter().collect();
    let classes = WeightClasses::new(&refs);
    let generators: Vec<Vec<usize>> = g
        .cycle_space_basis()
        .iter()
        .map(|c| c.iter().collect())
        .collect();
    let tally = SpanWalk {
        g,
        classes: &classes,
        generators: &generators,
    }
    .run(options.threads);
    let top = 2 * g.edge_count();
    let mut coefficients = vec![BigRational::zero(); top + 1];
    for (counts, &n) in &tally {
        let (value, power) = weigh(&classes, counts);
        if !value.is_zero() {
            coefficients[power] += value * BigRational::from_integer(n.into());
        }
    }
    Ok(RationalPolynomial::with_degree(coefficients, top))
}

/// Exact `P_G(u)`; `P_G(1)` is the number of Eulerian orientations.
pub fn eval_p(g: &Graph, u: &BigRational) -> Result<BigRational> {
    Ok(poly_p(g)?.eval(u))
}

/// Coefficients `a_0, .., a_{2t}` of `P_G`, from the even edge subsets with
/// at most `t` edges. Works on graphs whose cycle space is far too large
/// for [`poly_p`].
pub fn low_order_coefficients(g: &Graph, max_edges: usize) -> Result<Vec<BigRational>> {
    let weights = s_weights(g)?;
    let refs: Vec<&WeightVector> = weights.iter().collect();
    let classes = WeightClasses::new(&refs);
    let last_edge: Vec<usize> = (0..g.vertex_count())
        .map(|v| g.incident_edges(v).iter().copied().max().unwrap_or(0))
        .collect();
    let mut search = SmallEven {
        g,
        max_edges,
        last_edge,
        degree: vec![0; g.vertex_count()],
        odd: Vec::new(),
        size: 0,
        tally: HashMap::new(),
    };
    search.record();
    search.extend(0);
    let mut coefficients = vec![BigRational::zero(); 2 * max_edges + 1];
    for ((degrees, _), n) in search.tally {
        let mut counts = vec![0u32; classes.types.len()];
        for (v, &d) in degrees.iter().enumerate() {
            counts[classes.type_of(v, d as usize)] += 1;
        }
        let (value, power) = weigh(&classes, &counts);
        coefficients[power] += value * BigRational::from_integer(BigInt::from(n));
    }
    Ok(coefficients)
}

struct SmallEven<'g> {
    g: &'g Graph,
    max_edges: usize,
    last_edge: Vec<usize>,
    degree: Vec<u8>,
    odd: Vec<usize>,
    size: usize,
    tally: HashMap<(Vec<u8>, usize), u64>,
}

impl SmallEven<'_> {
    fn record(&mut self) {
        if self.odd.is_empty() {
            *self
                .tally
                .entry((self.degree.clone(), self.size))
                .or_insert(0) += 1;
        }
    }

    fn toggle_odd(&mut self, v: usize) {
        if let Some(i) = self.odd.iter().position(|&w| w == v) {
            self.odd.swap_remove(i);
        } else {
            self.odd.push(v);
        }
    }

    /// Adds edges with index >= `from`.
    fn extend(&mut self, from: usize) {
        if self.size == self.max_edges {
            return;
        }
        for e in from..self.g.edge_count() {
            // an odd vertex whose edges all lie before `e` can never be fixed
            if self.odd.iter().any(|&v| self.last_edge[v] < e) {
                return;
            }
            let left = self.max_edges - self.size;
            let (a, b) = self.g.edge(e);
            let fixes = [a, b].iter().filter(|v| self.odd.contains(v)).count();
            if self.odd.len() > 2 * left || (self.odd.len() + 2 - 2 * fixes) > 2 * (left - 1) {
                continue;
            }
            self.degree[a] += 1;
            self.degree[b] += 1;
            self.toggle_odd(a);
            self.toggle_odd(b);
            self.size += 1;
            self.record();
            self.extend(e + 1);
            self.size -= 1;
            self.toggle_odd(a);
            self.toggle_odd(b);
            self.degree[a] -= 1;
            self.degree[b] -= 1;
        }
    }
}

/// The perfect-matching weights `(0, 1, 0, 0, 0)` and their rotated
/// counterpart `(1, -1/2, 0, 1/2, -1)` for 4-regular graphs.
pub fn pm_vectors() -> (WeightVector, WeightVector) {
    (
        WeightVector::from_fractions(&[(0, 1), (1, 1), (0, 1), (0, 1), (0, 1)]),
        WeightVector::from_fractions(&[(1, 1), (-1, 2), (0, 1), (1, 2), (-1, 1)]),
    )
}

/// `(F_G(0,1,0,0,0), F_G(1,-1/2,0,1/2,-1), pm(G))` for a 4-regular graph.
pub fn pm_identity_check(g: &Graph, cap: usize) -> Result<(BigRational, BigRational, BigUint)> {
    if let Some((v, d)) = (0..g.vertex_count())
        .map(|v| (v, g.degree(v)))
        .find(|&(_, d)| d != 4)
    {
        return Err(Error::Regularity {
            expected: 4,
            vertex: v,
            degree: d,
        });
    }
    let (direct, rotated) = pm_vectors();
    Ok((
        eval_f_regular(g, &direct, cap)?,
        eval_f_regular(g, &rotated, cap)?,
        count_pm_brute(g, cap.max(DEFAULT_CAP))?.value,
    ))
}
