//! Local statistics: rooted r-balls, their isomorphism classes, and the
//! empirical distribution of ball classes over the vertices of a graph.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entropy::large_girth_limit;
use crate::error::{Error, Result};
use crate::graph::{DegreeHistogram, Graph};

/// Largest ball accepted by [`canonical_key`].
pub const MAX_BALL_SIZE: usize = 64;

/// The subgraph induced on all vertices within distance `radius` of a root.
///
/// Vertices are numbered in breadth-first order, so the root is vertex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedBall {
    pub graph: Graph,
    pub root: usize,
    pub radius: usize,
}

/// Extracts the induced `r`-ball around `v`. Parallel edges are kept.
pub fn ball(g: &Graph, v: usize, r: usize) -> Result<RootedBall> {
    let n = g.vertex_count();
    if v >= n {
        return Err(Error::Index {
            index: v,
            vertex_count: n,
        });
    }
    let mut local = vec![usize::MAX; n];
    let mut dist = vec![0usize; n];
    let mut members = vec![v];
    local[v] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        if dist[u] == r {
            continue;
        }
        for &e in g.incident_edges(u) {
            let w = g.opposite(e, u);
            if local[w] == usize::MAX {
                local[w] = members.len();
                dist[w] = dist[u] + 1;
                members.push(w);
                queue.push_back(w);
            }
        }
    }
    let edges = g
        .edges()
        .iter()
        .filter(|&&(a, b)| local[a] != usize::MAX && local[b] != usize::MAX)
        .map(|&(a, b)| (local[a], local[b]))
        .collect();
    Ok(RootedBall {
        graph: Graph::new(members.len(), edges)?,
        root: 0,
        radius: r,
    })
}

/// Canonical search over one ball: multigraph adjacency counts plus the
/// lexicographically least leaf encoding found so far.
struct Canon {
    n: usize,
    adj: Vec<Vec<(usize, usize)>>,
    edges: Vec<(usize, usize)>,
    best: Option<(Vec<u8>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Canon {
    fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut counts: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
        for &(a, b) in g.edges() {
            *counts[a].entry(b).or_default() += 1;
            *counts[b].entry(a).or_default() += 1;
        }
        Canon {
            n,
            adj: counts
                .into_iter()
                .map(|m| m.into_iter().collect())
                .collect(),
            edges: g.edges().to_vec(),
            best: None,
            automorphisms: Vec::new(),
        }
    }

    /// Colour refinement to a stable partition. New colours are ranks of
    /// (old colour, sorted neighbour colours with multiplicity), so the
    /// relative order of existing cells never changes.
    fn refine(&self, colors: &mut [usize]) {
        let mut cells = count_distinct(colors);
        loop {
            let signatures: Vec<(usize, Vec<(usize, usize)>)> = (0..self.n)
                .map(|v| {
                    let mut nb: Vec<(usize, usize)> =
                        self.adj[v].iter().map(|&(w, k)| (colors[w], k)).collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let mut sorted: Vec<&(usize, Vec<(usize, usize)>)> = signatures.iter().collect();
            sorted.sort();
            sorted.dedup();
            for v in 0..self.n {
                colors[v] = sorted.binary_search(&&signatures[v]).unwrap();
            }
            let next = sorted.len();
            if next == cells {
                return;
            }
            cells = next;
        }
    }

    fn encode(&self, colors: &[usize]) -> Vec<u8> {
        let mut pairs: Vec<(u8, u8)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (colors[a] as u8, colors[b] as u8);
                (x.min(y), x.max(y))
            })
            .collect();
        pairs.sort_unstable();
        let mut key = Vec::with_capacity(1 + 2 * pairs.len());
        key.push(self.n as u8);
        for (x, y) in pairs {
            key.push(x);
            key.push(y);
        }
        key
    }

    fn search(&mut self, colors: Vec<usize>, prefix: &mut Vec<usize>) {
        let cell_count = count_distinct(&colors);
        if cell_count == self.n {
            self.leaf(colors);
            return;
        }
        // first non-singleton cell, by colour
        let mut sizes = vec![0usize; self.n];
        for &c in &colors {
            sizes[c] += 1;
        }
        let target = (0..self.n).find(|&c| sizes[c] > 1).unwrap();
        let cell: Vec<usize> = (0..self.n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if explored.iter().any(|&u| self.same_orbit(prefix, u, v)) {
                continue;
            }
            explored.push(v);
            let mut child = colors.clone();
            // split v off in front of the rest of its cell, then renumber
            for c in child.iter_mut() {
                *c *= 2;
                if *c == 2 * target {
                    *c += 1;
                }
            }
            child[v] = 2 * target;
            let mut sorted = child.clone();
            sorted.sort_unstable();
            sorted.dedup();
            for c in child.iter_mut() {
                *c = sorted.binary_search(c).unwrap();
            }
            self.refine(&mut child);
            prefix.push(v);
            self.search(child, prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, colors: Vec<usize>) {
        let key = self.encode(&colors);
        let mut order = vec![0usize; self.n];
        for (v, &c) in colors.iter().enumerate() {
            order[c] = v;
        }
        match &self.best {
            Some((best, best_order)) if *best == key => {
                // two leaves with the same encoding differ by an automorphism
                let mut gamma = vec![0usize; self.n];
                for (&a, &b) in best_order.iter().zip(&order) {
                    gamma[a] = b;
                }
                if self.automorphisms.len() < 256 {
                    self.automorphisms.push(gamma);
                }
            }
            Some((best, _)) if *best < key => {}
            _ => self.best = Some((key, order)),
        }
    }

    /// Whether some product of known automorphisms fixing `prefix`
    /// pointwise maps `u` to `v`.
    fn same_orbit(&self, prefix: &[usize], u: usize, v: usize) -> bool {
        let gens: Vec<&Vec<usize>> = self
            .automorphisms
            .iter()
            .filter(|g| prefix.iter().all(|&p| g[p] == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![u];
        seen[u] = true;
        while let Some(x) = stack.pop() {
            if x == v {
                return true;
            }
            for g in &gens {
                let y = g[x];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }
}

fn count_distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Root-preserving canonical form of a ball: equal for two balls exactly
/// when some isomorphism maps one onto the other and root onto root.
///
/// Individualize-and-refine search seeded with (distance from root, degree)
/// colours, keeping the least adjacency encoding over all leaves. Edge
/// multiplicities are part of the encoding.
pub fn canonical_key(b: &RootedBall) -> Result<Vec<u8>> {
    let g = &b.graph;
    let n = g.vertex_count();
    if n > MAX_BALL_SIZE {
        return Err(Error::Size {
            size: n,
            limit: MAX_BALL_SIZE,
        });
    }
    if b.root >= n {
        return Err(Error::Index {
            index: b.root,
            vertex_count: n,
        });
    }
    let dist = distances(g, b.root);
    let mut canon = Canon::new(g);
    let initial: Vec<(usize, usize)> = (0..n).map(|v| (dist[v], g.degree(v))).collect();
    let mut sorted = initial.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let mut colors: Vec<usize> = initial
        .iter()
        .map(|x| sorted.binary_search(x).unwrap())
        .collect();
    canon.refine(&mut colors);
    canon.search(colors, &mut Vec::new());
    Ok(canon.best.expect("search reaches at least one leaf").0)
}

fn distances(g: &Graph, root: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &e in g.incident_edges(u) {
            let w = g.opposite(e, u);
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Distribution of `r`-ball classes at a uniformly random vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalProfile {
    pub radius: usize,
    pub probabilities: BTreeMap<Vec<u8>, BigRational>,
}

impl LocalProfile {
    pub fn total(&self) -> BigRational {
        self.probabilities.values().sum()
    }

    pub fn is_point_mass(&self) -> bool {
        self.probabilities.len() == 1
    }

    /// Keys rendered as lowercase hex.
    pub fn hex_entries(&self) -> BTreeMap<String, BigRational> {
        self.probabilities
            .iter()
            .map(|(k, p)| (k.iter().map(|b| format!("{b:02x}")).collect(), p.clone()))
            .collect()
    }
}

pub fn profile(g: &Graph, r: usize) -> Result<LocalProfile> {
    profile_threaded(g, r, 1)
}

/// [`profile`] with vertices split across `threads` workers.
pub fn profile_threaded(g: &Graph, r: usize, threads: usize) -> Result<LocalProfile> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::Domain("profile of the empty graph".into()));
    }
    let threads = threads.clamp(1, n);
    let chunk = n.div_ceil(threads);
    let partials: Vec<Result<BTreeMap<Vec<u8>, usize>>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                s.spawn(move || {
                    let mut counts = BTreeMap::new();
                    for v in t * chunk..((t + 1) * chunk).min(n) {
                        *counts
                            .entry(canonical_key(&ball(g, v, r)?)?)
                            .or_insert(0usize) += 1;
                    }
                    Ok(counts)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut counts: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for part in partials {
        for (k, c) in part? {
            *counts.entry(k).or_insert(0) += c;
        }
    }
    let total = BigInt::from(n);
    Ok(LocalProfile {
        radius: r,
        probabilities: counts
            .into_iter()
            .map(|(k, c)| (k, BigRational::new(BigInt::from(c), total.clone())))
            .collect(),
    })
}

/// Total variation distance `(1/2) sum |p - q|`.
pub fn tv_distance(p: &LocalProfile, q: &LocalProfile) -> Result<BigRational> {
    if p.radius != q.radius {
        return Err(Error::RadiusMismatch(p.radius, q.radius));
    }
    let zero = BigRational::zero();
    let mut sum = BigRational::zero();
    for (k, a) in &p.probabilities {
        sum += (a - q.probabilities.get(k).unwrap_or(&zero)).abs();
    }
    for (k, b) in &q.probabilities {
        if !p.probabilities.contains_key(k) {
            sum += b;
        }
    }
    Ok(sum / BigRational::from_integer(2.into()))
}

/// Degree-only entropy proxy: samples `k` vertices (with replacement),
/// reads each root degree off its `r`-ball and evaluates the large-girth
/// formula on the empirical degree fractions.
///
/// Only exact for sequences whose girth tends to infinity; on the torus it
/// returns `ln(3/2)`, not the torus entropy.
pub fn estimate_entropy_sampled(g: &Graph, r: usize, k: usize, seed: u64) -> Result<f64> {
    g.require_eulerian()?;
    if r == 0 || k == 0 {
        return Err(Error::Param("sampling needs r >= 1 and k >= 1".into()));
    }
    if g.vertex_count() == 0 {
        return Err(Error::Domain("cannot sample from the empty graph".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..k {
        let v = rng.random_range(0..g.vertex_count());
        let b = ball(g, v, r)?;
        *counts.entry(b.graph.degree(b.root)).or_insert(0) += 1;
    }
    let hist = DegreeHistogram {
        vertex_count: k,
        counts,
    };
    large_girth_limit(&hist.fractions())
}
