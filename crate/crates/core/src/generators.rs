//! Constructors for the graph families used in convergence experiments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph family together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// `K_n`.
    Complete(usize),
    /// `C_n`; `n = 2` gives a pair of parallel edges.
    Cycle(usize),
    /// `C_a x C_b`, both sides at least 3.
    Torus(usize, usize),
    /// Aztec diamond of order `k`: odd lattice points `(a, b)` with
    /// `|a| + |b| <= 2k`, joined when they differ by 2 along one axis.
    Aztec(usize),
    /// `i ~ i +- s (mod n)` for every jump `s`, with `0 < s < n/2`.
    Circulant { n: usize, jumps: Vec<usize> },
    /// XOR of `cycles` random simple cycles of length `3..=max_len` on `n` vertices.
    RandomEven {
        n: usize,
        cycles: usize,
        max_len: usize,
        seed: u64,
    },
    /// `base` subdivided `times` times.
    IteratedSubdivision { base: Box<FamilySpec>, times: usize },
}

impl FamilySpec {
    /// Builds a spec from a family name and a flat parameter list, the form
    /// used on the command line.
    ///
    /// `iterated_subdivision:<base>` takes the base family's parameters
    /// followed by the number of subdivision rounds. `random_even` takes
    /// `n,cycles[,max_len]` and requires a seed.
    pub fn from_parts(family: &str, params: &[usize], seed: Option<u64>) -> Result<FamilySpec> {
        let arity = |want: usize| -> Result<()> {
            if params.len() == want {
                Ok(())
            } else {
                Err(Error::Param(format!(
                    "family `{family}` takes {want} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        if seed.is_some() && family != "random_even" && !family.starts_with("iterated_subdivision")
        {
            return Err(Error::Param(format!("family `{family}` takes no seed")));
        }
        let spec = match family {
            "complete" => {
                arity(1)?;
                FamilySpec::Complete(params[0])
            }
            "cycle" => {
                arity(1)?;
                FamilySpec::Cycle(params[0])
            }
            "torus" => {
                arity(2)?;
                FamilySpec::Torus(params[0], params[1])
            }
            "aztec" => {
                arity(1)?;
                FamilySpec::Aztec(params[0])
            }
            "circulant" => {
                if params.len() < 2 {
                    return Err(Error::Param(
                        "circulant takes n followed by at least one jump".into(),
                    ));
                }
                FamilySpec::Circulant {
                    n: params[0],
                    jumps: params[1..].to_vec(),
                }
            }
            "random_even" => {
                if !(2..=3).contains(&params.len()) {
                    return Err(Error::Param("random_even takes n,cycles[,max_len]".into()));
                }
                let seed =
                    seed.ok_or_else(|| Error::Param("random_even requires a seed".into()))?;
                FamilySpec::RandomEven {
                    n: params[0],
                    cycles: params[1],
                    max_len: params.get(2).copied().unwrap_or(params[0]),
                    seed,
                }
            }
            other => match other.strip_prefix("iterated_subdivision:") {
                Some(base) => {
                    let (&times, base_params) = params.split_last().ok_or_else(|| {
                        Error::Param("iterated_subdivision needs a round count".into())
                    })?;
                    FamilySpec::IteratedSubdivision {
                        base: Box::new(FamilySpec::from_parts(base, base_params, seed)?),
                        times,
                    }
                }
                None => return Err(Error::Param(format!("unknown family `{other}`"))),
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn name(&self) -> String {
        match self {
            FamilySpec::Complete(_) => "complete".into(),
            FamilySpec::Cycle(_) => "cycle".into(),
            FamilySpec::Torus(..) => "torus".into(),
            FamilySpec::Aztec(_) => "aztec".into(),
            FamilySpec::Circulant { .. } => "circulant".into(),
            FamilySpec::RandomEven { .. } => "random_even".into(),
            FamilySpec::IteratedSubdivision { base, .. } => {
                format!("iterated_subdivision:{}", base.name())
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Param(msg));
        match self {
            FamilySpec::Complete(n) if *n == 0 => bad("complete(n) needs n >= 1".into()),
            FamilySpec::Cycle(n) if *n < 2 => bad("cycle(n) needs n >= 2".into()),
            FamilySpec::Torus(a, b) if *a < 3 || *b < 3 => {
                bad(format!("torus({a},{b}) needs both sides >= 3"))
            }
            FamilySpec::Aztec(k) if *k == 0 => bad("aztec(k) needs k >= 1".into()),
            FamilySpec::Circulant { n, jumps } => {
                let distinct: BTreeSet<_> = jumps.iter().collect();
                if jumps.is_empty() || distinct.len() != jumps.len() {
                    return bad("circulant jumps must be non-empty and distinct".into());
                }
                match jumps.iter().find(|&&s| s == 0 || 2 * s >= *n) {
                    Some(s) => bad(format!("circulant({n}) jump {s} outside 0 < s < n/2")),
                    None => Ok(()),
                }
            }
            FamilySpec::RandomEven {
                n, max_len, cycles, ..
            } => {
                if *n < 3 || *max_len < 3 || max_len > n || *cycles == 0 {
                    bad(format!(
                        "random_even needs n >= 3, cycles >= 1, 3 <= max_len <= n (got n={n}, cycles={cycles}, max_len={max_len})"
                    ))
                } else {
                    Ok(())
                }
            }
            FamilySpec::IteratedSubdivision { base, .. } => base.validate(),
            _ => Ok(()),
        }
    }

    /// The same family with its size parameter replaced: `torus(n, n)`,
    /// `cycle(n)`, `aztec(n)`, `complete(n)`, `circulant(n, jumps)`,
    /// `random_even(n, ..)`, or `n` subdivision rounds.
    pub fn with_size(&self, size: usize) -> FamilySpec {
        match self {
            FamilySpec::Complete(_) => FamilySpec::Complete(size),
            FamilySpec::Cycle(_) => FamilySpec::Cycle(size),
            FamilySpec::Torus(..) => FamilySpec::Torus(size, size),
            FamilySpec::Aztec(_) => FamilySpec::Aztec(size),
            FamilySpec::Circulant { jumps, .. } => FamilySpec::Circulant {
                n: size,
                jumps: jumps.clone(),
            },
            FamilySpec::RandomEven {
                cycles,
                max_len,
                seed,
                ..
            } => FamilySpec::RandomEven {
                n: size,
                cycles: *cycles,
                max_len: (*max_len).min(size),
                seed: *seed,
            },
            FamilySpec::IteratedSubdivision { base, .. } => FamilySpec::IteratedSubdivision {
                base: base.clone(),
                times: size,
            },
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Complete(n) => write!(f, "complete({n})"),
            FamilySpec::Cycle(n) => write!(f, "cycle({n})"),
            FamilySpec::Torus(a, b) => write!(f, "torus({a},{b})"),
            FamilySpec::Aztec(k) => write!(f, "aztec({k})"),
            FamilySpec::Circulant { n, jumps } => write!(f, "circulant({n};{jumps:?})"),
            FamilySpec::RandomEven {
                n,
                cycles,
                max_len,
                seed,
            } => write!(f, "random_even({n},{cycles},{max_len};seed={seed})"),
            FamilySpec::IteratedSubdivision { base, times } => {
                write!(f, "subdivide^{times}({base})")
            }
        }
    }
}

/// Materializes one member of a family.
pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    spec.validate()?;
    match spec {
        FamilySpec::Complete(n) => {
            let edges = (0..*n)
                .flat_map(|a| (a + 1..*n).map(move |b| (a, b)))
                .collect();
            Graph::new(*n, edges)
        }
        FamilySpec::Cycle(n) => Graph::new(*n, (0..*n).map(|i| (i, (i + 1) % n)).collect()),
        FamilySpec::Torus(a, b) => {
            let id = |x: usize, y: usize| x * b + y;
            let mut edges = Vec::with_capacity(2 * a * b);
            for x in 0..*a {
                for y in 0..*b {
                    edges.push((id(x, y), id((x + 1) % a, y)));
                    edges.push((id(x, y), id(x, (y + 1) % b)));
                }
            }
            Graph::new(a * b, edges)
        }
        FamilySpec::Aztec(k) => aztec(*k),
        FamilySpec::Circulant { n, jumps } => {
            let edges = (0..*n)
                .flat_map(|i| jumps.iter().map(move |s| (i, (i + s) % n)))
                .collect();
            Graph::new(*n, edges)
        }
        FamilySpec::RandomEven {
            n,
            cycles,
            max_len,
            seed,
        } => Ok(random_even(*n, *cycles, *max_len, *seed)),
        FamilySpec::IteratedSubdivision { base, times } => {
            let mut g = generate(base)?;
            for _ in 0..*times {
                g = g.subdivide().0;
            }
            Ok(g)
        }
    }
}

/// Like [`generate`], but fails unless the result is Eulerian (e.g. for
/// `complete(n)` with even `n`).
pub fn generate_eulerian(spec: &FamilySpec) -> Result<Graph> {
    let g = generate(spec)?;
    match g.odd_vertex() {
        None => Ok(g),
        Some((degree, vertex)) => Err(Error::Param(format!(
            "{spec} is not Eulerian (vertex {vertex} has degree {degree})"
        ))),
    }
}

/// One graph per size, via [`FamilySpec::with_size`]. Sizes must be
/// strictly increasing.
pub fn sequence(template: &FamilySpec, sizes: &[usize]) -> Result<Vec<Graph>> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Param("sizes must be strictly increasing".into()));
    }
    sizes
        .iter()
        .map(|&s| generate(&template.with_size(s)))
        .collect()
}

fn aztec(k: usize) -> Result<Graph> {
    let r = 2 * k as i64;
    let mut index = BTreeMap::new();
    for a in (-r + 1..r).step_by(2) {
        for b in (-r + 1..r).step_by(2) {
            if a.abs() + b.abs() <= r {
                let next = index.len();
                index.insert((a, b), next);
            }
        }
    }
    let mut edges = Vec::new();
    for (&(a, b), &v) in &index {
        for (da, db) in [(2, 0), (0, 2)] {
            if let Some(&w) = index.get(&(a + da, b + db)) {
                edges.push((v, w));
            }
        }
    }
    Graph::new(index.len(), edges)
}

fn random_even(n: usize, cycles: usize, max_len: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    for _ in 0..cycles {
        let len = rng.random_range(3..=max_len);
        let verts = sample(&mut rng, n, len).into_vec();
        for i in 0..len {
            let (a, b) = (verts[i], verts[(i + 1) % len]);
            let key = (a.min(b), a.max(b));
            if !edges.remove(&key) {
                edges.insert(key);
            }
        }
    }
    Graph::new(n, edges.into_iter().collect()).expect("sampled vertices are distinct")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_shape() {
        let g = generate(&FamilySpec::Torus(3, 3)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 18));
        assert_eq!(g.regular_degree(), Some(4));
        assert_eq!(g.girth(), Some(3));
        assert!(generate(&FamilySpec::Torus(2, 5)).is_err());
    }

    #[test]
    fn aztec_shape() {
        // direct enumeration of the coordinate definition
        let mut pts = Vec::new();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                if a % 2 != 0 && b % 2 != 0 && a.abs() + b.abs() <= 4 {
                    pts.push((a, b));
                }
            }
        }
        let mut edge_count = 0;
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                let d = ((p.0 - q.0).abs(), (p.1 - q.1).abs());
                if d == (2, 0) || d == (0, 2) {
                    edge_count += 1;
                }
            }
        }
        let g = generate(&FamilySpec::Aztec(2)).unwrap();
        assert_eq!(g.vertex_count(), pts.len());
        assert_eq!(g.edge_count(), edge_count);
        assert_eq!((g.vertex_count(), g.edge_count()), (12, 16));
        assert_eq!(
            g.degree_histogram().counts,
            BTreeMap::from([(2, 8), (4, 4)])
        );
        let ad1 = generate(&FamilySpec::Aztec(1)).unwrap();
        assert_eq!(ad1.regular_degree(), Some(2));
        assert_eq!(ad1.girth(), Some(4));
    }

    #[test]
    fn complete_and_circulant() {
        let k5 = generate(&FamilySpec::Complete(5)).unwrap();
        assert_eq!(k5.edge_count(), 10);
        assert!(generate_eulerian(&FamilySpec::Complete(4)).is_err());
        let c = generate(&FamilySpec::Circulant {
            n: 9,
            jumps: vec![1, 3],
        })
        .unwrap();
        assert_eq!(c.regular_degree(), Some(4));
        assert!(generate(&FamilySpec::Circulant {
            n: 8,
            jumps: vec![4]
        })
        .is_err());
    }

    #[test]
    fn sequences() {
        let tori = sequence(&FamilySpec::Torus(3, 3), &[3, 4, 5]).unwrap();
        let sizes: Vec<_> = tori.iter().map(Graph::vertex_count).collect();
        assert_eq!(sizes, vec![9, 16, 25]);
        let az = sequence(&FamilySpec::Aztec(1), &[1, 2, 3]).unwrap();
        let sizes: Vec<_> = az.iter().map(Graph::vertex_count).collect();
        assert_eq!(sizes, vec![4, 12, 24]);
        assert!(sequence(&FamilySpec::Cycle(3), &[5, 4]).is_err());
    }

    #[test]
    fn random_even_is_deterministic_and_eulerian() {
        for seed in 0..20 {
            let spec = FamilySpec::RandomEven {
                n: 9,
                cycles: 4,
                max_len: 6,
                seed,
            };
            let g = generate(&spec).unwrap();
            assert!(g.is_eulerian());
            assert_eq!(g, generate(&spec).unwrap());
        }
    }

    #[test]
    fn every_eulerian_family_is_eulerian() {
        let specs = [
            FamilySpec::Complete(7),
            FamilySpec::Cycle(2),
            FamilySpec::Torus(3, 5),
            FamilySpec::Aztec(4),
            FamilySpec::Circulant {
                n: 11,
                jumps: vec![2, 3, 5],
            },
            FamilySpec::IteratedSubdivision {
                base: Box::new(FamilySpec::Complete(5)),
                times: 2,
            },
        ];
        for s in &specs {
            assert!(generate(s).unwrap().is_eulerian(), "{s}");
        }
    }

    #[test]
    fn parts_parsing() {
        assert_eq!(
            FamilySpec::from_parts("torus", &[3, 4], None).unwrap(),
            FamilySpec::Torus(3, 4)
        );
        assert_eq!(
            FamilySpec::from_parts("iterated_subdivision:cycle", &[3, 2], None).unwrap(),
            FamilySpec::IteratedSubdivision {
                base: Box::new(FamilySpec::Cycle(3)),
                times: 2
            }
        );
        assert!(FamilySpec::from_parts("torus", &[3], None).is_err());
        assert!(FamilySpec::from_parts("random_even", &[8, 2], None).is_err());
        assert!(FamilySpec::from_parts("cycle", &[5], Some(1)).is_err());
        assert!(FamilySpec::from_parts("hexagonal", &[5], None).is_err());
    }
}
