//! Finite loopless multigraphs and the structural predicates used throughout
//! the crate.
//!
//! Edges keep the index they were given at construction. Every bitmask over
//! edges ([`EdgeSet`], orientations, subset enumerations) refers to that
//! index, so the edge list is never reordered.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite undirected multigraph without loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    incidence: Vec<Vec<usize>>,
}

impl Graph {
    /// Validates and builds a graph. Parallel edges are allowed, loops are not.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut incidence = vec![Vec::new(); vertex_count];
        for (i, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::Index {
                        index: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::Loop { edge: i, vertex: u });
            }
            incidence[u].push(i);
            incidence[v].push(i);
        }
        Ok(Graph {
            vertex_count,
            edges,
            incidence,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> (usize, usize) {
        self.edges[index]
    }

    /// Edge indices incident to `v`, in increasing order.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incidence.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The endpoint of `edge` that is not `v`.
    pub fn opposite(&self, edge: usize, v: usize) -> usize {
        let (a, b) = self.edges[edge];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Some `(degree, vertex)` pair with odd degree, if any.
    pub fn odd_vertex(&self) -> Option<(usize, usize)> {
        (0..self.vertex_count)
            .map(|v| (self.degree(v), v))
            .find(|(d, _)| d % 2 == 1)
    }

    /// True iff every degree is even. Connectedness is not required.
    pub fn is_eulerian(&self) -> bool {
        self.odd_vertex().is_none()
    }

    pub(crate) fn require_eulerian(&self) -> Result<()> {
        match self.odd_vertex() {
            Some((degree, vertex)) => Err(Error::NotEulerian { vertex, degree }),
            None => Ok(()),
        }
    }

    /// `Some(d)` if every vertex has degree `d` (and there is at least one vertex).
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.incidence.first()?.len();
        self.incidence.iter().all(|inc| inc.len() == d).then_some(d)
    }

    pub fn degree_histogram(&self) -> DegreeHistogram {
        let mut counts = BTreeMap::new();
        for v in 0..self.vertex_count {
            *counts.entry(self.degree(v)).or_insert(0) += 1;
        }
        DegreeHistogram {
            vertex_count: self.vertex_count,
            counts,
        }
    }

    /// Component label per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.vertex_count {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &e in &self.incidence[u] {
                    let w = self.opposite(e, u);
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Length of a shortest cycle; `None` for forests. A pair of parallel
    /// edges is a cycle of length 2.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; self.vertex_count];
        let mut parent_edge = vec![usize::MAX; self.vertex_count];
        let mut queue = VecDeque::new();
        for root in 0..self.vertex_count {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    // no shorter cycle can be found below this level
                    if 2 * dist[u] + 1 >= b {
                        break;
                    }
                }
                for &e in &self.incidence[u] {
                    if e == parent_edge[u] {
                        continue;
                    }
                    let w = self.opposite(e, u);
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent_edge[w] = e;
                        queue.push_back(w);
                    } else {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
            parent_edge.iter_mut().for_each(|p| *p = usize::MAX);
        }
        best
    }

    /// Fundamental cycles of a BFS spanning forest. Their XOR-span is exactly
    /// the set of edge subsets in which every vertex has even degree.
    pub fn cycle_space_basis(&self) -> Vec<EdgeSet> {
        let n = self.vertex_count;
        let mut depth = vec![usize::MAX; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut tree = vec![false; self.edge_count()];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if depth[s] != usize::MAX {
                continue;
            }
            depth[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &e in &self.incidence[u] {
                    let w = self.opposite(e, u);
                    if depth[w] == usize::MAX {
                        depth[w] = depth[u] + 1;
                        parent_edge[w] = e;
                        tree[e] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut basis = Vec::new();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if tree[e] {
                continue;
            }
            let mut cycle = EdgeSet::new(self.edge_count());
            cycle.insert(e);
            let (mut x, mut y) = (a, b);
            while x != y {
                if depth[x] >= depth[y] {
                    let pe = parent_edge[x];
                    cycle.toggle(pe);
                    x = self.opposite(pe, x);
                } else {
                    let pe = parent_edge[y];
                    cycle.toggle(pe);
                    y = self.opposite(pe, y);
                }
            }
            basis.push(cycle);
        }
        basis
    }

    /// Dimension `e - v + c` of the cycle space.
    pub fn cycle_space_dimension(&self) -> usize {
        let (_, c) = self.components();
        self.edge_count() + c - self.vertex_count
    }

    /// Places a new vertex on every edge. Original vertices keep their
    /// indices; edge `i = (a, b)` becomes vertex `n + i` joined to `a` by
    /// edge `2i` and to `b` by edge `2i + 1`.
    pub fn subdivide(&self) -> (Graph, Vec<VertexOrigin>) {
        let n = self.vertex_count;
        let mut edges = Vec::with_capacity(2 * self.edge_count());
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            edges.push((a, n + i));
            edges.push((b, n + i));
        }
        let origin = (0..n)
            .map(VertexOrigin::Vertex)
            .chain((0..self.edge_count()).map(VertexOrigin::Edge))
            .collect();
        let g = Graph::new(n + self.edge_count(), edges).expect("subdivision is loopless");
        (g, origin)
    }

    /// Vertex-disjoint union; the vertices and edges of `other` are shifted
    /// past those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.vertex_count;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(a, b)| (a + n, b + n)))
            .collect();
        Graph::new(n + other.vertex_count, edges).expect("union of valid graphs")
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`. Edge order is kept.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.vertex_count {
            return Err(Error::Param(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.vertex_count
            )));
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a], perm[b]))
            .collect();
        Graph::new(self.vertex_count, edges)
    }

    /// Parses either the text format (`n m` header, one `u v` pair per line,
    /// `#` comment lines) or the JSON format `{"n": .., "edges": [[u, v], ..]}`.
    pub fn parse(input: &str) -> Result<Graph> {
        if input.trim_start().starts_with('{') {
            Self::from_json(input)
        } else {
            Self::from_text(input)
        }
    }

    pub fn from_text(input: &str) -> Result<Graph> {
        let mut lines = input
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("missing `n m` header".into()))?;
        let nums = parse_pair(header, 1)?;
        let (n, m) = (nums.0, nums.1);
        let mut edges = Vec::with_capacity(m);
        for (lineno, line) in lines {
            edges.push(parse_pair(line, lineno + 1)?);
        }
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "header announces {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::new(n, edges)
    }

    pub fn from_json(input: &str) -> Result<Graph> {
        let raw: JsonGraph =
            serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))?;
        Graph::new(raw.n, raw.edges.into_iter().map(|[a, b]| (a, b)).collect())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count, self.edge_count());
        for &(a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let raw = JsonGraph {
            n: self.vertex_count,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string(&raw).expect("graph serializes")
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Parse(format!(
            "line {lineno}: expected two non-negative integers, got `{line}`"
        ))),
    }
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// Where a vertex of a subdivided graph came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexOrigin {
    Vertex(usize),
    Edge(usize),
}

/// Degree counts, with multiplicity for parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeHistogram {
    pub vertex_count: usize,
    pub counts: BTreeMap<usize, usize>,
}

impl DegreeHistogram {
    /// Exact fractions `t_k`, summing to 1 for a non-empty graph.
    pub fn fractions(&self) -> BTreeMap<usize, BigRational> {
        let total = BigInt::from(self.vertex_count);
        self.counts
            .iter()
            .map(|(&k, &c)| (k, BigRational::new(BigInt::from(c), total.clone())))
            .collect()
    }
}

/// A fixed-length set of edge indices stored as 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet {
    len: usize,
    words: Vec<u64>,
}

impl EdgeSet {
    pub fn new(len: usize) -> Self {
        EdgeSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        (0..len).for_each(|i| s.insert(i));
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn toggle(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_with(&mut self, other: &EdgeSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    /// Bitwise complement within `0..len`.
    pub fn complement(&self) -> EdgeSet {
        let mut out = EdgeSet::full(self.len);
        out.xor_with(self);
        out
    }

    /// Degree of every vertex of `g` in the spanning subgraph `(V, self)`.
    pub fn degrees_in(&self, g: &Graph) -> Vec<usize> {
        let mut deg = vec![0; g.vertex_count()];
        for e in self.iter() {
            let (a, b) = g.edge(e);
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
