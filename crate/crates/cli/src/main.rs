use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use eorient::entropy::{
    p_curve, sequence_report, u_grid, EntropyReport, PCurveRow, SequenceOptions,
};
use eorient::generators::generate;
use eorient::local::{profile_threaded, tv_distance};
use eorient::nfg::nfg_certificate;
use eorient::numeric::{format_g15, parse_rational};
use eorient::orient::{
    count_eulerian_brute_threaded, count_eulerian_frontier_dp, FrontierOptions, DEFAULT_CAP,
};
use eorient::spectral::{find_roots, moments, DEFAULT_ROOT_TOL};
use eorient::subgraph::{poly_p_with, PolyOptions, DEFAULT_CYCLE_CAP};
use eorient::{CountResult, Error, FamilySpec, Graph};
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "eorient",
    version,
    about = "Eulerian orientations, subgraph polynomials and their zeros"
)]
struct Cli {
    /// Worker threads for enumerations
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Dp,
    Cycles,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a family member in the graph text format
    Gen {
        #[arg(long)]
        family: String,
        /// Comma-separated family parameters
        #[arg(long, value_delimiter = ',')]
        params: Vec<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file (stdout if omitted)
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Write JSON instead of the text format
        #[arg(long)]
        json: bool,
    },
    /// Count Eulerian orientations exactly
    Count {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "dp")]
        method: Method,
        /// Edge cap (brute) or cycle-space dimension cap (cycles)
        #[arg(long)]
        cap: Option<usize>,
        /// Include wall-clock time in the output
        #[arg(long)]
        timing: bool,
    },
    /// Coefficients of P_G
    Poly {
        graph: PathBuf,
        #[arg(short = 'o', long = "format", value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Numeric zeros of P_G
    Roots {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
        tol: f64,
        #[arg(short = 'o', long = "format", value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Exact moments of the root measure
    Moments {
        graph: PathBuf,
        #[arg(short = 'k', long = "k-max")]
        k_max: usize,
        #[arg(short = 'o', long = "format", value_enum, default_value = "json")]
        format: Format,
    },
    /// Normalized log-count, lower bound and girth
    Entropy {
        graph: PathBuf,
        #[arg(short = 'o', long = "format", value_enum, default_value = "json")]
        format: Format,
    },
    /// (1/v) ln P_G(u) at the given points
    Pcurve {
        graph: PathBuf,
        /// Comma-separated points, each `p/q` or a decimal
        #[arg(long, value_delimiter = ',', conflicts_with = "curve")]
        u: Vec<String>,
        /// Evenly spaced points `lo:hi:count`
        #[arg(long)]
        curve: Option<String>,
        #[arg(short = 'o', long = "format", value_enum, default_value = "csv")]
        format: Format,
    },
    /// Entropy reports over growing members of a family
    Sequence {
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Template parameters; defaults to the first size
        #[arg(long, value_delimiter = ',')]
        params: Vec<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// p-curve sample points `lo:hi:count`
        #[arg(long)]
        curve: Option<String>,
        /// Radius for distances between consecutive local profiles
        #[arg(short = 'r', long)]
        radius: Option<usize>,
        #[arg(short = 'o', long = "format", value_enum, default_value = "json")]
        format: Format,
    },
    /// Distribution of r-ball classes
    Local {
        graph: PathBuf,
        #[arg(short = 'r', long)]
        radius: usize,
    },
    /// Total variation distance between two r-ball distributions
    Tv {
        first: PathBuf,
        second: PathBuf,
        #[arg(short = 'r', long)]
        radius: usize,
    },
    /// Normal factor graph checks
    Nfg {
        #[command(subcommand)]
        command: NfgCommand,
    },
}

#[derive(Subcommand)]
enum NfgCommand {
    /// Partition function before and after the gauges, against a direct count
    Verify {
        graph: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
    /// Command ran but its check did not pass; the output is already printed.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check) => ExitCode::from(1),
        Err(f) => {
            let (kind, message) = match f {
                Failure::Lib(e) => (e.kind().to_string(), e.to_string()),
                Failure::Io(m) => ("IoError".to_string(), m),
                Failure::Check => unreachable!(),
            };
            eprintln!("{}", json!({ "error": kind, "message": message }));
            ExitCode::from(1)
        }
    }
}

/// Cap from the flag, else `EO_CAP`, else the default.
fn cap(flag: Option<usize>, default: usize) -> usize {
    flag.or_else(|| std::env::var("EO_CAP").ok()?.parse().ok())
        .unwrap_or(default)
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(Graph::parse(&text)?)
}

fn rational(s: &str) -> Result<BigRational, Failure> {
    parse_rational(s)
        .ok_or_else(|| Failure::Lib(Error::Parse(format!("not a rational number: `{s}`"))))
}

fn grid(spec: &str) -> Result<Vec<BigRational>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        return Err(Error::Parse(format!("expected lo:hi:count, got `{spec}`")).into());
    };
    let count: usize = count
        .parse()
        .map_err(|_| Error::Parse(format!("bad point count `{count}`")))?;
    Ok(u_grid(&rational(lo)?, &rational(hi)?, count)?)
}

/// Rounds to 15 significant digits so JSON numbers print that way.
fn g15(x: f64) -> Value {
    format_g15(x)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

fn line(v: Value) -> String {
    format!("{v}\n")
}

fn run(cli: Cli) -> Outcome {
    let threads = cli.threads.max(1);
    match cli.command {
        Command::Gen {
            family,
            params,
            seed,
            output,
            json,
        } => {
            let g = generate(&FamilySpec::from_parts(&family, &params, seed)?)?;
            let text = if json {
                g.to_json() + "\n"
            } else {
                g.to_text()
            };
            match output {
                Some(path) => {
                    std::fs::write(&path, text)
                        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Count {
            graph,
            method,
            cap: flag,
            timing,
        } => {
            let g = read_graph(&graph)?;
            let result = match method {
                Method::Brute => {
                    count_eulerian_brute_threaded(&g, cap(flag, DEFAULT_CAP), threads)?
                }
                Method::Dp => count_eulerian_frontier_dp(&g, &FrontierOptions::default())?,
                Method::Cycles => {
                    let start = std::time::Instant::now();
                    let p = poly_p_with(
                        &g,
                        &PolyOptions {
                            cycle_cap: cap(flag, DEFAULT_CYCLE_CAP),
                            threads,
                        },
                    )?;
                    let value = p.eval(&BigRational::one());
                    CountResult {
                        value: value
                            .to_integer()
                            .to_biguint()
                            .expect("counts are non-negative"),
                        method: eorient::CountMethod::CycleSpace,
                        elapsed: start.elapsed(),
                    }
                }
            };
            let mut out =
                json!({ "value": result.value.to_string(), "method": result.method.as_str() });
            if timing {
                out["elapsed_ms"] = g15(result.elapsed.as_secs_f64() * 1e3);
            }
            Ok(line(out))
        }
        Command::Poly {
            graph,
            format,
            cap: flag,
        } => {
            let g = read_graph(&graph)?;
            let p = poly_p_with(
                &g,
                &PolyOptions {
                    cycle_cap: cap(flag, DEFAULT_CYCLE_CAP),
                    threads,
                },
            )?;
            let degree = 2 * g.edge_count();
            match format {
                Format::Json => {
                    let coeffs: Map<String, Value> = p
                        .coefficients()
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                        .map(|(j, c)| (j.to_string(), Value::String(c.to_string())))
                        .collect();
                    Ok(line(json!({ "degree": degree, "coeffs": coeffs })))
                }
                Format::Csv => {
                    let mut s = String::from("power,coefficient\n");
                    for (j, c) in p.coefficients().iter().enumerate() {
                        writeln!(s, "{j},{c}").unwrap();
                    }
                    Ok(s)
                }
                Format::Text => Ok(format!("{p}\n")),
            }
        }
        Command::Roots {
            graph,
            tol,
            format,
            cap: flag,
        } => {
            let g = read_graph(&graph)?;
            let p = poly_p_with(
                &g,
                &PolyOptions {
                    cycle_cap: cap(flag, DEFAULT_CYCLE_CAP),
                    threads,
                },
            )?;
            let mut roots = find_roots(&p, tol)?;
            roots.sort_by(|a, b| {
                a.arg()
                    .total_cmp(&b.arg())
                    .then(a.norm().total_cmp(&b.norm()))
            });
            match format {
                Format::Json => Ok(line(Value::Array(
                    roots
                        .iter()
                        .map(|r| json!({ "re": g15(r.re), "im": g15(r.im), "abs": g15(r.norm()) }))
                        .collect(),
                ))),
                _ => {
                    let mut s = String::from("re,im,abs\n");
                    for r in &roots {
                        writeln!(
                            s,
                            "{},{},{}",
                            format_g15(r.re),
                            format_g15(r.im),
                            format_g15(r.norm())
                        )
                        .unwrap();
                    }
                    Ok(s)
                }
            }
        }
        Command::Moments {
            graph,
            k_max,
            format,
        } => {
            let g = read_graph(&graph)?;
            let m = moments(&g, k_max)?;
            match format {
                Format::Json => {
                    let map: Map<String, Value> = m
                        .iter()
                        .enumerate()
                        .map(|(k, x)| ((k + 1).to_string(), Value::String(x.to_string())))
                        .collect();
                    Ok(line(json!({ "two_m": 2 * g.edge_count(), "moments": map })))
                }
                _ => {
                    let mut s = String::from("k,moment\n");
                    for (k, x) in m.iter().enumerate() {
                        writeln!(s, "{},{x}", k + 1).unwrap();
                    }
                    Ok(s)
                }
            }
        }
        Command::Entropy { graph, format } => {
            let g = read_graph(&graph)?;
            let r = EntropyReport::new(graph.display().to_string(), &g)?;
            match format {
                Format::Json => Ok(line(report_json(&r))),
                Format::Csv => Ok(format!("{}\n{}\n", REPORT_HEADER, report_row(&r))),
                Format::Text => Ok(format!(
                    "{}: v={} e={} eps={} entropy={} bound={}\n",
                    r.graph_id,
                    r.vertex_count,
                    r.edge_count,
                    r.count,
                    format_g15(r.entropy),
                    format_g15(r.schrijver_bound)
                )),
            }
        }
        Command::Pcurve {
            graph,
            u,
            curve,
            format,
        } => {
            let g = read_graph(&graph)?;
            let us = match curve {
                Some(spec) => grid(&spec)?,
                None if u.is_empty() => vec![BigRational::one()],
                None => u.iter().map(|s| rational(s)).collect::<Result<_, _>>()?,
            };
            let rows = p_curve(&g, &us)?;
            match format {
                Format::Json => Ok(line(curve_json(&rows))),
                _ => {
                    let mut s = String::from("u,value\n");
                    for r in &rows {
                        writeln!(s, "{},{}", r.u, format_g15(r.value)).unwrap();
                    }
                    Ok(s)
                }
            }
        }
        Command::Sequence {
            family,
            sizes,
            params,
            seed,
            curve,
            radius,
            format,
        } => {
            let template = template(&family, &params, &sizes, seed)?;
            let options = SequenceOptions {
                curve: curve.as_deref().map(grid).transpose()?,
                radius_for_reference: radius,
            };
            let r = sequence_report(&template, &sizes, &options)?;
            match format {
                Format::Json => {
                    let mut out = json!({
                        "family": r.family,
                        "sizes": r.sizes,
                        "entries": r.entries.iter().map(report_json).collect::<Vec<_>>(),
                        "differences": r.differences.iter().map(|&d| g15(d)).collect::<Vec<_>>(),
                        "reference_constant": r.reference_constant.as_ref().map(|c| json!({
                            "name": c.name,
                            "value": g15(c.value),
                        })),
                    });
                    if let Some(curves) = &r.u_curve {
                        out["u_curve"] =
                            Value::Array(curves.iter().map(|c| curve_json(c)).collect());
                    }
                    if let Some(d) = &r.profile_distances {
                        out["profile_radius"] = json!(r.profile_radius);
                        out["profile_distances"] = d.iter().map(|x| x.to_string()).collect();
                    }
                    Ok(line(out))
                }
                _ => {
                    let mut s = format!("size,{REPORT_HEADER},difference\n");
                    for (i, (e, size)) in r.entries.iter().zip(&r.sizes).enumerate() {
                        let d = r
                            .differences
                            .get(i)
                            .map_or(String::new(), |&d| format_g15(d));
                        writeln!(s, "{size},{},{d}", report_row(e)).unwrap();
                    }
                    Ok(s)
                }
            }
        }
        Command::Local { graph, radius } => {
            let g = read_graph(&graph)?;
            let p = profile_threaded(&g, radius, threads)?;
            let map: BTreeMap<String, String> = p
                .hex_entries()
                .into_iter()
                .map(|(k, v)| (k, v.to_string()))
                .collect();
            Ok(line(json!({ "radius": radius, "profile": map })))
        }
        Command::Tv {
            first,
            second,
            radius,
        } => {
            let a = profile_threaded(&read_graph(&first)?, radius, threads)?;
            let b = profile_threaded(&read_graph(&second)?, radius, threads)?;
            Ok(line(Value::String(tv_distance(&a, &b)?.to_string())))
        }
        Command::Nfg {
            command: NfgCommand::Verify { graph, cap: flag },
        } => {
            let g = read_graph(&graph)?;
            let c = nfg_certificate(&g, cap(flag, DEFAULT_CAP))?;
            let out = line(serde_json::to_value(&c).expect("certificate serializes"));
            if c.pass {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Check)
            }
        }
    }
}

/// Family template for `sequence`; without `--params` the first size fills
/// every parameter slot.
fn template(
    family: &str,
    params: &[usize],
    sizes: &[usize],
    seed: Option<u64>,
) -> Result<FamilySpec, Failure> {
    if !params.is_empty() {
        return Ok(FamilySpec::from_parts(family, params, seed)?);
    }
    let first = *sizes
        .first()
        .ok_or_else(|| Error::Param("no sizes given".into()))?;
    FamilySpec::from_parts(family, &[first], seed)
        .or_else(|_| FamilySpec::from_parts(family, &[first, first], seed))
        .map_err(Failure::from)
}

const REPORT_HEADER: &str = "graph,vertices,edges,count,entropy,schrijver_bound,girth";

fn report_row(r: &EntropyReport) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        r.graph_id,
        r.vertex_count,
        r.edge_count,
        r.count,
        format_g15(r.entropy),
        format_g15(r.schrijver_bound),
        r.girth.map_or("inf".to_string(), |g| g.to_string())
    )
}

fn report_json(r: &EntropyReport) -> Value {
    json!({
        "graph": r.graph_id,
        "vertex_count": r.vertex_count,
        "edge_count": r.edge_count,
        "count": r.count.to_string(),
        "entropy": g15(r.entropy),
        "schrijver_bound": g15(r.schrijver_bound),
        "pauling_reference": r.pauling_reference.map(g15),
        "girth": r.girth,
    })
}

fn curve_json(rows: &[PCurveRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| json!({ "u": r.u.to_string(), "value": g15(r.value) }))
            .collect(),
    )
}
