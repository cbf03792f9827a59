//! Command-line interface. Exit codes: 0 success, 2 user error (bad input
//! or arguments), 3 internal invariant violation.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::angle::ThetaMatrix;
use crate::density::{certify_density, closure_normal_form, find_dense_curve};
use crate::error::{Error, Result};
use crate::examples::{builtin, default_symbol_values, BuiltinParams, BUILTIN_NAMES};
use crate::io;
use crate::kronecker::{approx_symplectic, ApproxRequest, Strategy};
use crate::orbit::{dispersion, orbit_explore, project_to_float, FloatTorusMatrix, OrbitSample};

#[derive(Parser)]
#[command(
    name = "torus-orbits",
    about = "Density certificates, orbit normal forms and symplectic approximation for torus representations",
    version
)]
struct Cli {
    /// Treat the surface as one-holed. The orbit theory is unchanged by
    /// the puncture, so this flag only documents the intent; it alters no
    /// computation.
    #[arg(long, global = true)]
    holed: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ThetaSource {
    /// Path to a theta matrix JSON file.
    path: Option<PathBuf>,
    /// Use a built-in example instead of a file.
    #[arg(long, value_name = "NAME", conflicts_with = "path")]
    example: Option<String>,
    /// Genus parameter for parametrized examples.
    #[arg(long)]
    g: Option<usize>,
    /// Dimension parameter for parametrized examples.
    #[arg(long)]
    n: Option<usize>,
    /// Lambda symbol names for the class-D example, comma separated.
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<String>>,
}

impl ThetaSource {
    fn load(&self) -> Result<ThetaMatrix> {
        if let Some(name) = &self.example {
            let params = BuiltinParams {
                g: self.g,
                n: self.n,
                lambdas: self.lambdas.clone(),
            };
            return builtin(name, &params);
        }
        let Some(path) = &self.path else {
            return Err(Error::Parse("provide a file path or --example".into()));
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        io::theta_from_json(&text)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Certify density of a representation and print the certificate JSON.
    Certify(ThetaSource),
    /// Compute the orbit-closure normal form (h, theta_o, q_block).
    NormalForm(ThetaSource),
    /// Explore the modular orbit numerically; prints checkpointed CSV.
    Orbit {
        #[command(flatten)]
        source: ThetaSource,
        /// Interpret the input file as a float matrix instead of an exact one.
        #[arg(long, conflicts_with = "example")]
        float: bool,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 0.01)]
        grid: f64,
        #[arg(long, default_value_t = 32)]
        probe: usize,
        #[arg(long, default_value_t = 10)]
        checkpoints: usize,
        /// Symbol assignment name=value; repeatable. Unassigned symbols
        /// fall back to the built-in defaults.
        #[arg(long = "value", value_name = "NAME=VAL")]
        values: Vec<String>,
        /// Also dump the sampled points as CSV after the checkpoints.
        #[arg(long)]
        dump_points: bool,
    },
    /// Solve the symplectic approximation problem between two float matrices.
    Approx {
        /// Path to the base float matrix JSON.
        #[arg(long)]
        base: PathBuf,
        /// Path to the target float matrix JSON.
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        /// Word depth (beam/brute) or coefficient bound (handle-wise).
        #[arg(long, default_value_t = 30)]
        bound: usize,
        #[arg(long, default_value = "handle", value_parser = ["handle", "beam", "brute"])]
        strategy: String,
        #[arg(long, default_value_t = 64)]
        beam_width: usize,
        /// Assert that the base satisfies the Q-independence hypothesis.
        #[arg(long)]
        assert_hypothesis: bool,
    },
    /// Search for an exponent vector whose image generates a dense subgroup.
    Curve {
        #[command(flatten)]
        source: ThetaSource,
        #[arg(long, default_value_t = 8)]
        bound: u32,
    },
    /// Print a built-in example matrix as JSON.
    Examples {
        /// One of: ex-3.1, ex-3.2, app-A-2d, app-A-nd, class-D.
        name: String,
        #[arg(long)]
        g: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<String>>,
    },
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successes, everything else is a
            // user error
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Internal(_) => 3,
                _ => 2,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Certify(src) => {
            let theta = src.load()?;
            let cert = certify_density(&theta)?;
            println!("{}", io::certificate_to_json(&cert)?);
            Ok(())
        }
        Command::NormalForm(src) => {
            let theta = src.load()?;
            let nf = closure_normal_form(&theta)?;
            println!("{}", io::normal_form_to_json(&nf)?);
            Ok(())
        }
        Command::Orbit {
            source,
            float,
            budget,
            grid,
            probe,
            checkpoints,
            values,
            dump_points,
        } => cmd_orbit(
            source,
            float,
            budget,
            grid,
            probe,
            checkpoints,
            &values,
            dump_points,
        ),
        Command::Approx {
            base,
            target,
            epsilon,
            bound,
            strategy,
            beam_width,
            assert_hypothesis,
        } => {
            let base = io::float_matrix_from_json(&read(&base)?)?;
            let target = io::float_matrix_from_json(&read(&target)?)?;
            let strategy = match strategy.as_str() {
                "handle" => Strategy::HandleWise,
                "beam" => Strategy::BeamSearch { width: beam_width },
                _ => Strategy::BruteForce,
            };
            if !assert_hypothesis {
                eprintln!(
                    "warning: independence hypothesis not asserted for the base; \
                     results remain sound but existence is not guaranteed"
                );
            }
            let req = ApproxRequest {
                base,
                target,
                epsilon,
                search_bound: bound,
                strategy,
                hypothesis_asserted: assert_hypothesis,
            };
            match approx_symplectic(&req)? {
                Some(result) => {
                    let word = result
                        .word
                        .as_ref()
                        .map(|w| serde_json::to_value(&w.letters).expect("serializable"))
                        .unwrap_or(serde_json::Value::Null);
                    let k = serde_json::from_str::<serde_json::Value>(
                        &io::symplectic_to_json(&result.k_matrix)?,
                    )
                    .expect("valid JSON");
                    let out = serde_json::json!({
                        "found": true,
                        "k": k,
                        "achieved_error": result.achieved_error,
                        "word": word,
                        "hypothesis_warning": result.hypothesis_warning,
                    });
                    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
                }
                None => {
                    println!("{}", serde_json::json!({ "found": false }));
                }
            }
            Ok(())
        }
        Command::Curve { source, bound } => {
            let theta = source.load()?;
            let found = find_dense_curve(&theta, bound)?;
            let out = match found {
                Some(k) => serde_json::json!({
                    "found": true,
                    "k": k.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                }),
                None => serde_json::json!({ "found": false, "bound": bound }),
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            Ok(())
        }
        Command::Examples { name, g, n, lambdas } => {
            let params = BuiltinParams { g, n, lambdas };
            let theta = builtin(&name, &params).map_err(|_| {
                Error::Parse(format!(
                    "unknown or invalid example `{name}`; known names: {}",
                    BUILTIN_NAMES.join(", ")
                ))
            })?;
            println!("{}", io::theta_to_json(&theta));
            Ok(())
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_values(pairs: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for p in pairs {
        let (name, val) = p
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected NAME=VALUE, got `{p}`")))?;
        let v: f64 = val
            .parse()
            .map_err(|_| Error::Parse(format!("bad numeric value in `{p}`")))?;
        out.insert(name.to_string(), v);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_orbit(
    source: ThetaSource,
    float: bool,
    budget: usize,
    grid: f64,
    probe: usize,
    checkpoints: usize,
    values: &[String],
    dump_points: bool,
) -> Result<()> {
    let seed: FloatTorusMatrix = if float {
        let Some(path) = &source.path else {
            return Err(Error::Parse("--float requires a file path".into()));
        };
        io::float_matrix_from_json(&read(path)?)?
    } else {
        let theta = source.load()?;
        let mut assignment = default_symbol_values(&theta);
        assignment.extend(parse_values(values)?);
        project_to_float(&theta, &assignment)?
    };
    let sample = orbit_explore(&seed, budget, grid)?;
    println!(
        "# budget={budget} grid_delta={grid} probe_resolution={probe} checkpoints={checkpoints}"
    );
    println!("points,dispersion,budget_used");
    let total = sample.points.len();
    let k = checkpoints.clamp(1, total);
    let mut sizes: Vec<usize> = (1..=k).map(|i| (total * i).div_ceil(k)).collect();
    sizes.dedup();
    for size in sizes {
        // the BFS order is deterministic, so the first `size` points are
        // exactly the sample a budget of `size` would have produced
        let prefix = OrbitSample {
            points: sample.points[..size].to_vec(),
            words: sample.words[..size].to_vec(),
            budget_used: size,
            grid_delta: grid,
            frontier_exhausted: sample.frontier_exhausted && size == total,
        };
        let d = dispersion(&prefix, probe)?;
        println!("{size},{d},{size}");
    }
    eprintln!(
        "frontier_exhausted={} points={}",
        sample.frontier_exhausted, total
    );
    if dump_points {
        println!("point_index,entry_index,value");
        for (i, p) in sample.points.iter().enumerate() {
            for (j, v) in p.entries().iter().enumerate() {
                println!("{i},{j},{v}");
            }
        }
    }
    Ok(())
}
