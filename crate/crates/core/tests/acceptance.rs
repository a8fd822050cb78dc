//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

// `!(x <= tol)` is deliberate: a NaN must fail the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use eorient::entropy::{
    entropy, large_girth_limit, reference_constants, schrijver_bound, tree_constant,
};
use eorient::generators::generate;
use eorient::local::{ball, canonical_key, profile, tv_distance};
use eorient::nfg::{
    eulerian_gauges, eulerian_nfg, gauge_transform, gauged_tables_match, partition_function,
    random_gauges, random_nfg, verify_s_derivation,
};
use eorient::orient::{count_eulerian_brute, count_eulerian_frontier_dp, FrontierOptions};
use eorient::spectral::{
    circle_residual, find_roots, numeric_power_sum, power_sums, DEFAULT_ROOT_TOL,
};
use eorient::subgraph::{eval_p, key_polynomial, pm_identity_check, pm_vectors, poly_p};
use eorient::{ExactScalar, FamilySpec, Graph, RationalPolynomial, RootedBall};
use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn gen(spec: FamilySpec) -> Graph {
    generate(&spec).unwrap()
}

fn corpus() -> Vec<(String, Graph)> {
    let k5 = gen(FamilySpec::Complete(5));
    let c4 = gen(FamilySpec::Cycle(4));
    let mut out = vec![
        ("K5".to_string(), k5.clone()),
        ("C4".to_string(), c4.clone()),
        ("C8".to_string(), gen(FamilySpec::Cycle(8))),
    ];
    for (a, b) in [(3, 3), (3, 4), (4, 4)] {
        out.push((format!("torus {a}x{b}"), gen(FamilySpec::Torus(a, b))));
    }
    for k in 1..=3 {
        out.push((format!("AD{k}"), gen(FamilySpec::Aztec(k))));
    }
    for (n, cycles, max_len, seed) in [(8, 3, 6, 1u64), (10, 4, 5, 2)] {
        out.push((
            format!("random_even({n},{cycles},{max_len};{seed})"),
            gen(FamilySpec::RandomEven {
                n,
                cycles,
                max_len,
                seed,
            }),
        ));
    }
    out.push(("K5 + C4".to_string(), k5.disjoint_union(&c4)));
    out.push(("Sub(K5)".to_string(), k5.subdivide().0));
    out
}

fn brute(g: &Graph) -> BigUint {
    count_eulerian_brute(g, g.edge_count()).unwrap().value
}

fn dp(g: &Graph) -> BigUint {
    count_eulerian_frontier_dp(g, &FrontierOptions::default())
        .unwrap()
        .value
}

fn golden_polynomial() -> Outcome {
    let start = Instant::now();
    let p = poly_p(&gen(FamilySpec::Complete(5))).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut expected = vec![q(0, 1); 21];
    for (j, v) in [
        (0, q(243, 32)),
        (6, q(45, 16)),
        (8, q(45, 32)),
        (10, q(3, 8)),
        (12, q(45, 32)),
        (14, q(45, 16)),
        (20, q(243, 32)),
    ] {
        expected[j] = v;
    }
    ensure!(p.coefficients() == expected.as_slice(), "P_K5 = {p}");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("P_K5 = {p} in {elapsed:.2?}"))
}

fn counting_identity() -> Outcome {
    let start = Instant::now();
    let c = corpus();
    ensure!(c.len() >= 12, "corpus has {} graphs", c.len());
    for (name, g) in &c {
        ensure!(
            g.is_eulerian() && g.edge_count() > 0,
            "{name} is not a usable Eulerian graph"
        );
        if name.starts_with("random") {
            ensure!(g.edge_count() <= 22, "{name} has {} edges", g.edge_count());
        }
        let via_p = eval_p(g, &q(1, 1)).map_err(|e| e.to_string())?;
        let b = brute(g);
        let d = dp(g);
        ensure!(
            b == d && via_p == int(b.clone()),
            "{name}: P(1) = {via_p}, brute {b}, dp {d}"
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!("{} graphs agree in {elapsed:.2?}", c.len()))
}

fn k5_three_ways() -> Outcome {
    let k5 = gen(FamilySpec::Complete(5));
    let b = brute(&k5);
    let cs = eval_p(&k5, &q(1, 1)).map_err(|e| e.to_string())?;
    let z = partition_function(&eulerian_nfg(&k5).map_err(|e| e.to_string())?, 24)
        .map_err(|e| e.to_string())?;
    ensure!(b == BigUint::from(24u8), "brute gives {b}");
    ensure!(cs == q(24, 1), "cycle space gives {cs}");
    ensure!(
        z == ExactScalar::from_integer(24),
        "partition function gives {z}"
    );
    Ok("brute = cycle space = Z = 24".into())
}

fn unit_circle() -> Outcome {
    let mut worst = 0f64;
    for (name, g) in corpus() {
        let roots = find_roots(&poly_p(&g).unwrap(), DEFAULT_ROOT_TOL)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure!(
            roots.len() == 2 * g.edge_count(),
            "{name}: {} roots",
            roots.len()
        );
        let r = circle_residual(&roots);
        ensure!(r <= 1e-9, "{name}: residual {r:e}");
        worst = worst.max(r);
    }
    Ok(format!("worst residual {worst:.1e}"))
}

fn newton_consistency() -> Outcome {
    let mut worst = 0f64;
    for (name, g) in corpus() {
        let p = poly_p(&g).unwrap();
        let two_m = 2 * g.edge_count();
        let girth = g.girth().unwrap();
        let k_max = 20.max(2 * girth - 1);
        let exact = power_sums(&p, k_max);
        let roots = find_roots(&p, DEFAULT_ROOT_TOL).map_err(|e| e.to_string())?;
        for k in 1..=k_max {
            let pk = &exact[k - 1];
            if k % 2 == 1 || k < 2 * girth {
                ensure!(pk.is_zero(), "{name}: p_{k} = {pk}");
            }
            if k <= 20 {
                let err = (numeric_power_sum(&roots, k) - pk.to_f64().unwrap()).norm();
                ensure!(
                    err <= 1e-6 * two_m as f64,
                    "{name}: p_{k} numeric error {err:e}"
                );
                worst = worst.max(err / two_m as f64);
            }
        }
    }
    let k5 = power_sums(&poly_p(&gen(FamilySpec::Complete(5))).unwrap(), 6);
    ensure!(k5[5] == q(-20, 9), "K5: p_6 = {}", k5[5]);
    Ok(format!(
        "K5 p_6 = -20/9, worst numeric error {worst:.1e} per root"
    ))
}

fn coefficient_structure() -> Outcome {
    for (name, g) in corpus() {
        let p = poly_p(&g).unwrap();
        let a = p.coefficients();
        let top = 2 * g.edge_count();
        ensure!(a.len() == top + 1, "{name}: degree {}", a.len() - 1);
        for j in 0..=top {
            ensure!(a[j] == a[top - j], "{name}: a_{j} != a_{}", top - j);
            ensure!(!a[j].is_negative(), "{name}: a_{j} < 0");
        }
        let prod: BigInt = g
            .degrees()
            .iter()
            .map(|&d| binomial(BigInt::from(d), BigInt::from(d / 2)))
            .product();
        let a0 = BigRational::new(prod, BigInt::one() << g.edge_count());
        ensure!(a[0] == a0, "{name}: a_0 = {} but formula gives {a0}", a[0]);
        let girth = g.girth().unwrap();
        for (j, c) in a.iter().enumerate().take(2 * girth).skip(1) {
            ensure!(c.is_zero(), "{name}: a_{j} = {c} below twice the girth");
        }
    }
    Ok("palindromic, non-negative, a_0 product formula, girth gap".into())
}

fn monotone_sandwich() -> Outcome {
    let us = [q(1, 2), q(3, 4), q(1, 1), q(4, 3), q(2, 1)];
    for (name, g) in corpus() {
        let p = poly_p(&g).unwrap();
        let values: Vec<BigRational> = us.iter().map(|u| p.eval(u)).collect();
        for i in 0..us.len() {
            for j in i + 1..us.len() {
                let ratio: BigRational = Pow::pow(&us[j] / &us[i], 2 * g.edge_count());
                ensure!(
                    values[i] <= values[j],
                    "{name}: P({}) > P({})",
                    us[i],
                    us[j]
                );
                ensure!(
                    values[j] <= ratio * &values[i],
                    "{name}: upper bound fails at {}, {}",
                    us[i],
                    us[j]
                );
            }
        }
    }
    Ok("all pairs from {1/2, 3/4, 1, 4/3, 2}".into())
}

fn schrijver() -> Outcome {
    for (name, g) in corpus() {
        let e = entropy(&g).map_err(|e| e.to_string())?;
        let b = schrijver_bound(&g).map_err(|e| e.to_string())?;
        ensure!(e >= b - 1e-12, "{name}: entropy {e} below bound {b}");
    }
    let k5 = gen(FamilySpec::Complete(5));
    let (e, b) = (entropy(&k5).unwrap(), schrijver_bound(&k5).unwrap());
    ensure!((b - 0.405465).abs() < 1e-6, "K5 bound {b}");
    ensure!((e - 24f64.ln() / 5.0).abs() < 1e-15, "K5 entropy {e}");
    Ok(format!("K5: entropy {e:.6} >= bound {b:.6}"))
}

fn limit_constants() -> Outcome {
    let c = reference_constants();
    let get = |n: &str| c.iter().find(|x| x.name == n).map(|x| x.value);
    let lieb = get("lieb").ok_or("no lieb")?;
    let baxter = get("baxter").ok_or("no baxter")?;
    // independent evaluations of the same closed forms
    let lieb_alt = 1.5 * (2.0 * 2f64.ln() - 3f64.ln());
    let baxter_alt = 1.5 * 3f64.ln() - 2f64.ln();
    ensure!(
        (lieb - lieb_alt).abs() < 1e-12 && (lieb - 0.4315231087).abs() < 1e-10,
        "lieb {lieb}"
    );
    ensure!(
        (baxter - baxter_alt).abs() < 1e-12 && (baxter - 0.9547712524).abs() < 1e-10,
        "baxter {baxter}"
    );
    let one = |d: usize| std::collections::BTreeMap::from([(d, q(1, 1))]);
    ensure!(
        large_girth_limit(&one(2)).unwrap() == 0.0,
        "limit at {{2:1}} is not 0"
    );
    ensure!(
        large_girth_limit(&one(4)).unwrap() == 1.5f64.ln(),
        "limit at {{4:1}} is not ln(3/2)"
    );
    ensure!(tree_constant(4).unwrap() == 1.5f64.ln(), "tree(4)");
    Ok(format!("lieb {lieb:.10}, baxter {baxter:.10}"))
}

fn sequence_behavior() -> Outcome {
    for n in [4usize, 8, 16, 32] {
        let e = entropy(&gen(FamilySpec::Cycle(n))).unwrap();
        let exact = 2f64.ln() / n as f64;
        ensure!(
            (e - exact).abs() <= f64::EPSILON * exact,
            "C{n}: {e} vs {exact}"
        );
    }
    let mut torus = Vec::new();
    for ((a, b), count) in [((3, 3), 148u32), ((3, 4), 548), ((4, 4), 2970)] {
        let g = gen(FamilySpec::Torus(a, b));
        ensure!(
            dp(&g) == BigUint::from(count),
            "torus {a}x{b}: eps = {}",
            dp(&g)
        );
        let e = entropy(&g).unwrap();
        ensure!((0.40..=0.60).contains(&e), "torus {a}x{b}: entropy {e}");
        torus.push(format!("{e:.4}"));
    }
    let reference = profile(&gen(FamilySpec::Torus(5, 5)), 1).unwrap();
    let mut last = q(2, 1);
    let mut tvs = Vec::new();
    for k in 2..=4usize {
        let g = gen(FamilySpec::Aztec(k));
        let boundary = q(
            g.degrees().iter().filter(|&&d| d < 4).count() as i64,
            g.vertex_count() as i64,
        );
        let d = tv_distance(&profile(&g, 1).unwrap(), &reference).unwrap();
        ensure!(
            d == boundary,
            "AD{k}: tv {d} vs boundary fraction {boundary}"
        );
        ensure!(d < last, "AD{k}: tv {d} not below {last}");
        tvs.push(d.to_string());
        last = d;
    }
    Ok(format!(
        "torus entropies [{}], aztec tv [{}]",
        torus.join(", "),
        tvs.join(", ")
    ))
}

fn random_multigraph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.random_range(3..=6);
    let e = rng.random_range(1..=12);
    let edges = (0..e)
        .map(|_| {
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            (a, b)
        })
        .collect();
    Graph::new(n, edges).unwrap()
}

fn gauge_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for seed in 0..20u64 {
        let g = random_multigraph(&mut rng);
        let h = random_nfg(&g, 2, seed).unwrap();
        let t =
            gauge_transform(&h, &random_gauges(&g, 2, seed + 100)).map_err(|e| e.to_string())?;
        let (z, zt) = (
            partition_function(&h, 24).unwrap(),
            partition_function(&t, 24).unwrap(),
        );
        ensure!(z == zt, "seed {seed}: Z = {z}, gauged {zt}");
    }
    for (name, g, cap) in [
        ("K5", gen(FamilySpec::Complete(5)), 24),
        ("torus 3x3", gen(FamilySpec::Torus(3, 3)), 40),
    ] {
        let h = eulerian_nfg(&g).unwrap();
        let t = gauge_transform(&h, &eulerian_gauges(&g)).map_err(|e| e.to_string())?;
        let expected = ExactScalar::from_integer(brute(&g).to_i64().unwrap());
        let (z, zt) = (
            partition_function(&h, cap).unwrap(),
            partition_function(&t, cap).unwrap(),
        );
        ensure!(
            z == expected && zt == expected,
            "Sub({name}): Z = {z}, gauged {zt}, eps {expected}"
        );
        ensure!(
            gauged_tables_match(&g, &t).unwrap(),
            "Sub({name}): gauged tables"
        );
    }
    for d in [2, 4, 6, 8] {
        ensure!(
            verify_s_derivation(d).unwrap(),
            "s-derivation fails at d = {d}"
        );
    }
    Ok("20 random gauge sets, Sub(K5), Sub(torus 3x3), d = 2..8".into())
}

/// Perfect matchings by checking every `v/2`-subset of edges.
fn pm_by_subsets(g: &Graph) -> BigUint {
    let n = g.vertex_count();
    if n % 2 == 1 {
        return BigUint::zero();
    }
    fn go(g: &Graph, from: usize, left: usize, used: &mut Vec<bool>) -> u64 {
        if left == 0 {
            return used.iter().all(|&x| x) as u64;
        }
        let mut total = 0;
        for e in from..g.edge_count() {
            let (a, b) = g.edge(e);
            if !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                total += go(g, e + 1, left - 1, used);
                used[a] = false;
                used[b] = false;
            }
        }
        total
    }
    BigUint::from(go(g, 0, n / 2, &mut vec![false; n]))
}

fn matching_identity() -> Outcome {
    let k44 = Graph::new(
        8,
        (0..4).flat_map(|a| (4..8).map(move |b| (a, b))).collect(),
    )
    .unwrap();
    let cases = [
        ("K5", gen(FamilySpec::Complete(5)), Some(0u32)),
        ("K4,4", k44, Some(24)),
        ("torus 3x4", gen(FamilySpec::Torus(3, 4)), None),
    ];
    let mut summary = Vec::new();
    for (name, g, known) in cases {
        let (direct, rotated, pm) = pm_identity_check(&g, 24).map_err(|e| e.to_string())?;
        let oracle = pm_by_subsets(&g);
        if let Some(k) = known {
            ensure!(oracle == BigUint::from(k), "{name}: oracle gives {oracle}");
        }
        ensure!(
            direct == int(oracle.clone()) && rotated == int(oracle.clone()) && pm == oracle,
            "{name}: F = {direct}, rotated F = {rotated}, pm = {pm}, oracle {oracle}"
        );
        summary.push(format!("{name} {oracle}"));
    }
    let k = key_polynomial(&pm_vectors().1);
    let expected = RationalPolynomial::from_integers(&[1, -2, 0, 2, -1]);
    ensure!(k == expected, "key polynomial {k}");
    let roots = find_roots(&k, DEFAULT_ROOT_TOL).map_err(|e| e.to_string())?;
    ensure!(
        roots.len() == 4 && circle_residual(&roots) <= 1e-12,
        "roots {roots:?}"
    );
    ensure!(
        roots.iter().filter(|r| (*r - 1.0).norm() < 1e-12).count() == 3,
        "triple root at 1"
    );
    Ok(format!(
        "pm: {}; key polynomial (1-z)^3(1+z)",
        summary.join(", ")
    ))
}

fn profile_sanity() -> Outcome {
    for (a, b) in [(3, 3), (3, 4), (4, 4), (5, 5), (6, 6)] {
        for r in 0..=2 {
            let p = profile(&gen(FamilySpec::Torus(a, b)), r).unwrap();
            ensure!(
                p.is_point_mass(),
                "torus {a}x{b}, r = {r}: {} classes",
                p.probabilities.len()
            );
        }
    }
    for (name, g) in corpus() {
        for r in 0..=2 {
            let p = profile(&g, r).map_err(|e| e.to_string())?;
            ensure!(p.total().is_one(), "{name}, r = {r}: total {}", p.total());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let balls: Vec<RootedBall> = corpus()
        .iter()
        .flat_map(|(_, g)| [0, g.vertex_count() / 2].map(|v| ball(g, v, 2).unwrap()))
        .collect();
    for (i, b) in balls.iter().enumerate() {
        let key = canonical_key(b).unwrap();
        for _ in 0..1000 {
            let mut perm: Vec<usize> = (0..b.graph.vertex_count()).collect();
            perm.shuffle(&mut rng);
            let moved = RootedBall {
                graph: b.graph.relabel(&perm).unwrap(),
                root: perm[b.root],
                radius: b.radius,
            };
            ensure!(
                canonical_key(&moved).unwrap() == key,
                "ball {i}: key changed under relabeling"
            );
        }
    }
    Ok(format!("{} balls x 1000 relabelings", balls.len()))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("golden polynomial of K5", golden_polynomial),
        ("counting identity on the corpus", counting_identity),
        ("eps(K5) = 24 three ways", k5_three_ways),
        ("zeros on the unit circle", unit_circle),
        ("Newton power sums", newton_consistency),
        ("coefficient structure", coefficient_structure),
        ("monotone sandwich", monotone_sandwich),
        ("product lower bound", schrijver),
        ("limit constants", limit_constants),
        ("sequence behavior", sequence_behavior),
        ("gauge invariance", gauge_invariance),
        ("perfect-matching identity", matching_identity),
        ("profile sanity", profile_sanity),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
