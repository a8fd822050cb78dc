//! Combinatorial counters for Eulerian orientations and perfect matchings.
//!
//! These are the independent oracles for the polynomial machinery: an
//! exhaustive search over orientations, a frontier dynamic program over
//! vertex imbalances, and a perfect-matching enumerator.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};

/// Default edge cap for exhaustive `2^e` enumerations.
pub const DEFAULT_CAP: usize = 24;

/// Default bound on live states in the frontier dynamic program.
pub const DEFAULT_STATE_BOUND: usize = 10_000_000;

/// An orientation of every edge. Bit `i` set means edge `i` points from its
/// smaller vertex index to its larger one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation(pub EdgeSet);

impl Orientation {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 0
    }

    /// Out-degree minus in-degree at every vertex.
    pub fn imbalances(&self, g: &Graph) -> Vec<i64> {
        let mut imb = vec![0i64; g.vertex_count()];
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            let (lo, hi) = (a.min(b), a.max(b));
            let (from, to) = if self.0.contains(i) {
                (lo, hi)
            } else {
                (hi, lo)
            };
            imb[from] += 1;
            imb[to] -= 1;
        }
        imb
    }

    pub fn is_balanced(&self, g: &Graph) -> bool {
        self.imbalances(g).iter().all(|&x| x == 0)
    }

    /// The orientation with every edge reversed.
    pub fn reversed(&self) -> Orientation {
        Orientation(self.0.complement())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Brute,
    CycleSpace,
    FrontierDp,
}

impl CountMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CountMethod::Brute => "brute",
            CountMethod::CycleSpace => "cycle_space",
            CountMethod::FrontierDp => "frontier_dp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub value: BigUint,
    pub method: CountMethod,
    pub elapsed: Duration,
}

fn check_cap(g: &Graph, cap: usize) -> Result<()> {
    if g.edge_count() > cap {
        Err(Error::CapExceeded {
            size: g.edge_count(),
            cap,
        })
    } else {
        Ok(())
    }
}

/// Exhaustive search state: per-vertex out/in counts against the `d/2` target.
struct Search<'g> {
    g: &'g Graph,
    half: Vec<u32>,
    outs: Vec<u32>,
    ins: Vec<u32>,
    /// (smaller endpoint, larger endpoint) per edge
    ends: Vec<(usize, usize)>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph) -> Self {
        Search {
            g,
            half: g.degrees().iter().map(|&d| (d / 2) as u32).collect(),
            outs: vec![0; g.vertex_count()],
            ins: vec![0; g.vertex_count()],
            ends: g
                .edges()
                .iter()
                .map(|&(a, b)| (a.min(b), a.max(b)))
                .collect(),
        }
    }

    /// Tries to orient `edge` (bit = 1: small -> large). Returns false, leaving
    /// state untouched, if a vertex would exceed its half-degree.
    fn push(&mut self, edge: usize, bit: bool) -> bool {
        let (lo, hi) = self.ends[edge];
        let (from, to) = if bit { (lo, hi) } else { (hi, lo) };
        if self.outs[from] >= self.half[from] || self.ins[to] >= self.half[to] {
            return false;
        }
        self.outs[from] += 1;
        self.ins[to] += 1;
        true
    }

    fn pop(&mut self, edge: usize, bit: bool) {
        let (lo, hi) = self.ends[edge];
        let (from, to) = if bit { (lo, hi) } else { (hi, lo) };
        self.outs[from] -= 1;
        self.ins[to] -= 1;
    }

    /// Counts completions, assigning edges `next, next-1, .., 0`.
    fn count_below(&mut self, next: usize) -> u64 {
        if next == 0 {
            return 1;
        }
        let e = next - 1;
        let mut total = 0;
        for bit in [false, true] {
            if self.push(e, bit) {
                total += self.count_below(e);
                self.pop(e, bit);
            }
        }
        total
    }
}

/// Exact number of Eulerian orientations by exhaustive search over all
/// `2^e` orientations. Partial orientations are abandoned as soon as some
/// vertex has more than `d/2` out- or in-edges, so only balanced leaves are
/// reached. Graphs with an odd-degree vertex have no Eulerian orientation.
pub fn count_eulerian_brute(g: &Graph, cap: usize) -> Result<CountResult> {
    count_eulerian_brute_threaded(g, cap, 1)
}

/// [`count_eulerian_brute`] with the search split over the orientations of
/// the highest-indexed edges and run on `threads` OS threads.
pub fn count_eulerian_brute_threaded(g: &Graph, cap: usize, threads: usize) -> Result<CountResult> {
    check_cap(g, cap)?;
    let start = Instant::now();
    let value = if !g.is_eulerian() {
        0
    } else if threads <= 1 || g.edge_count() < 8 {
        let m = g.edge_count();
        Search::new(g).count_below(m)
    } else {
        let m = g.edge_count();
        let split = (threads.next_power_of_two().trailing_zeros() as usize + 2).min(m);
        let prefixes: Vec<u64> = (0..1u64 << split).collect();
        let chunks: Vec<&[u64]> = prefixes.chunks(prefixes.len().div_ceil(threads)).collect();
        std::thread::scope(|s| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|chunk| {
                    s.spawn(move || {
                        let mut total = 0u64;
                        for &p in chunk.iter() {
                            let mut search = Search::new(g);
                            let top: Vec<(usize, bool)> =
                                (0..split).map(|j| (m - 1 - j, p >> j & 1 == 1)).collect();
                            if top.iter().all(|&(e, bit)| search.push(e, bit)) {
                                total += search.count_below(m - split);
                            }
                        }
                        total
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).sum()
        })
    };
    Ok(CountResult {
        value: BigUint::from(value),
        method: CountMethod::Brute,
        elapsed: start.elapsed(),
    })
}

/// Streams every Eulerian orientation in increasing order of the bit vector
/// read as an integer (edge `e-1` most significant).
pub fn enumerate_eulerian_orientations(
    g: &Graph,
    cap: usize,
) -> Result<impl Iterator<Item = Orientation> + '_> {
    check_cap(g, cap)?;
    Ok(OrientationIter::new(g))
}

struct OrientationIter<'g> {
    search: Search<'g>,
    /// bit chosen for edges m-1, m-2, ... (top of stack = lowest edge so far)
    stack: Vec<bool>,
    started: bool,
    done: bool,
}

impl<'g> OrientationIter<'g> {
    fn new(g: &'g Graph) -> Self {
        OrientationIter {
            search: Search::new(g),
            stack: Vec::with_capacity(g.edge_count()),
            started: false,
            done: !g.is_eulerian(),
        }
    }

    fn edge_at(&self, depth: usize) -> usize {
        self.search.g.edge_count() - 1 - depth
    }

    /// Extends the stack to a full assignment choosing the smallest bits;
    /// backtracks (advancing earlier choices) on dead ends.
    fn descend(&mut self) -> bool {
        let m = self.search.g.edge_count();
        loop {
            if self.stack.len() == m {
                return true;
            }
            let e = self.edge_at(self.stack.len());
            if self.search.push(e, false) {
                self.stack.push(false);
            } else if self.search.push(e, true) {
                self.stack.push(true);
            } else if !self.advance() {
                return false;
            }
        }
    }

    /// Moves to the next sibling of the deepest assignment that has one.
    fn advance(&mut self) -> bool {
        while let Some(bit) = self.stack.pop() {
            let e = self.edge_at(self.stack.len());
            self.search.pop(e, bit);
            if !bit && self.search.push(e, true) {
                self.stack.push(true);
                return true;
            }
        }
        false
    }
}

impl Iterator for OrientationIter<'_> {
    type Item = Orientation;

    fn next(&mut self) -> Option<Orientation> {
        if self.done {
            return None;
        }
        let found = if self.started {
            self.advance() && self.descend()
        } else {
            self.started = true;
            self.descend()
        };
        if !found {
            self.done = true;
            return None;
        }
        let m = self.search.g.edge_count();
        let mut bits = EdgeSet::new(m);
        for (depth, &b) in self.stack.iter().enumerate() {
            if b {
                bits.insert(m - 1 - depth);
            }
        }
        Some(Orientation(bits))
    }
}

/// Options for [`count_eulerian_frontier_dp`].
#[derive(Debug, Clone)]
pub struct FrontierOptions {
    /// Vertex elimination order; defaults to breadth-first order.
    pub order: Option<Vec<usize>>,
    pub state_bound: usize,
}

impl Default for FrontierOptions {
    fn default() -> Self {
        FrontierOptions {
            order: None,
            state_bound: DEFAULT_STATE_BOUND,
        }
    }
}

/// Breadth-first vertex order, restarting at the smallest unvisited vertex.
pub(crate) fn bfs_order(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &e in g.incident_edges(u) {
                let w = g.opposite(e, u);
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

/// Edges sorted so that every edge comes after all edges whose later
/// endpoint (in `order`) precedes its own.
pub(crate) fn edge_order(g: &Graph, order: &[usize]) -> Result<Vec<usize>> {
    let n = g.vertex_count();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::Param(
                "elimination order is not a permutation".into(),
            ));
        }
        pos[v] = i;
    }
    if order.len() != n {
        return Err(Error::Param(
            "elimination order is not a permutation".into(),
        ));
    }
    let mut edges: Vec<usize> = (0..g.edge_count()).collect();
    edges.sort_by_key(|&e| {
        let (a, b) = g.edge(e);
        (pos[a].max(pos[b]), pos[a].min(pos[b]), e)
    });
    Ok(edges)
}

/// Exact number of Eulerian orientations by dynamic programming over edges.
///
/// The state is the signed imbalance (out minus in so far) of every vertex
/// that has some but not all of its edges processed. A vertex leaves the
/// frontier only with imbalance 0, and states whose imbalance cannot be
/// repaid by the vertex's remaining edges are dropped.
pub fn count_eulerian_frontier_dp(g: &Graph, options: &FrontierOptions) -> Result<CountResult> {
    g.require_eulerian()?;
    let start = Instant::now();
    let order = options.order.clone().unwrap_or_else(|| bfs_order(g));
    let edges = edge_order(g, &order)?;

    let mut remaining: Vec<i32> = g.degrees().iter().map(|&d| d as i32).collect();
    // frontier[i] is the vertex whose imbalance sits at key position i
    let mut frontier: Vec<usize> = Vec::new();
    let mut states: HashMap<Vec<i8>, BigUint> = HashMap::from([(Vec::new(), BigUint::from(1u8))]);

    for e in edges {
        let (a, b) = g.edge(e);
        let slot = |v: usize, frontier: &mut Vec<usize>, states: &mut HashMap<Vec<i8>, BigUint>| {
            if let Some(i) = frontier.iter().position(|&w| w == v) {
                i
            } else {
                frontier.push(v);
                *states = states
                    .drain()
                    .map(|(mut k, c)| {
                        k.push(0);
                        (k, c)
                    })
                    .collect();
                frontier.len() - 1
            }
        };
        let sa = slot(a, &mut frontier, &mut states);
        let sb = slot(b, &mut frontier, &mut states);
        remaining[a] -= 1;
        remaining[b] -= 1;
        let (ra, rb) = (remaining[a], remaining[b]);

        let mut next: HashMap<Vec<i8>, BigUint> = HashMap::with_capacity(states.len() * 2);
        for (key, count) in states.drain() {
            for delta in [1i8, -1] {
                let ia = key[sa] + delta;
                let ib = key[sb] - delta;
                if (ia as i32).abs() > ra || (ib as i32).abs() > rb {
                    continue;
                }
                let mut k = key.clone();
                k[sa] = ia;
                k[sb] = ib;
                *next.entry(k).or_insert_with(BigUint::zero) += &count;
            }
        }
        if next.len() > options.state_bound {
            return Err(Error::StateBlowup {
                bound: options.state_bound,
            });
        }
        // closed vertices have imbalance 0 by the pruning above; drop their slots
        let mut closed: Vec<usize> = [(sa, ra), (sb, rb)]
            .iter()
            .filter(|&&(_, r)| r == 0)
            .map(|&(s, _)| s)
            .collect();
        closed.sort_unstable_by(|x, y| y.cmp(x));
        closed.dedup();
        if !closed.is_empty() {
            for &s in &closed {
                frontier.remove(s);
            }
            next = next
                .into_iter()
                .map(|(mut k, c)| {
                    for &s in &closed {
                        k.remove(s);
                    }
                    (k, c)
                })
                .fold(HashMap::new(), |mut acc, (k, c)| {
                    *acc.entry(k).or_insert_with(BigUint::zero) += c;
                    acc
                });
        }
        states = next;
    }
    let value = states.remove(&Vec::new()).unwrap_or_default();
    Ok(CountResult {
        value,
        method: CountMethod::FrontierDp,
        elapsed: start.elapsed(),
    })
}

/// Exact number of perfect matchings by recursive enumeration. Parallel
/// edges give distinct matchings.
pub fn count_pm_brute(g: &Graph, cap: usize) -> Result<CountResult> {
    check_cap(g, cap)?;
    let start = Instant::now();
    let mut matched = vec![false; g.vertex_count()];
    let value = if g.vertex_count() % 2 == 1 {
        0
    } else {
        pm_rec(g, &mut matched, 0)
    };
    Ok(CountResult {
        value: BigUint::from(value),
        method: CountMethod::Brute,
        elapsed: start.elapsed(),
    })
}

fn pm_rec(g: &Graph, matched: &mut [bool], from: usize) -> u64 {
    let Some(v) = (from..g.vertex_count()).find(|&v| !matched[v]) else {
        return 1;
    };
    matched[v] = true;
    let mut total = 0;
    for &e in g.incident_edges(v) {
        let w = g.opposite(e, v);
        if !matched[w] {
            matched[w] = true;
            total += pm_rec(g, matched, v + 1);
            matched[w] = false;
        }
    }
    matched[v] = false;
    total
}
