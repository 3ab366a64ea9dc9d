use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use shard_forge::cartan::bundled;
use shard_forge::field::Tower;
use shard_forge::reflection::{apply_signed_word, bricks_of_dimension};
use shard_forge::roots::{positive_expression, SignedWord};
use shard_forge::shards::{methods_agree, shards_direct, shards_recursive};
use shard_forge::species::{euler_trials, Species};
use shard_forge::stability::{stab_oracle, stab_recursive, StabMethod, StabResult, DEFAULT_ORACLE_BOUND};
use shard_forge::{demos, CartanData, Error};

const THREADS_ENV: &str = "SHARD_FORGE_THREADS";

#[derive(Parser)]
#[command(name = "shard-forge", version, about = "Shards, real bricks and stability domains for symmetrizable Cartan data")]
struct Cli {
    /// Worker threads for parallel searches (overridden by SHARD_FORGE_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Direct,
    Recursive,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Shards of a root hyperplane.
    Shards {
        /// Cartan file, or the name of a bundled datum.
        cartan: String,
        #[arg(long)]
        root: String,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Bricks of a given dimension up to isomorphism.
    Bricks {
        cartan: String,
        #[arg(long)]
        root: String,
    },
    /// Stability domain of the brick named by a signed word.
    Stab {
        cartan: String,
        /// For example "S6 ; 5+ 4+ 2+ 1-".
        #[arg(long)]
        word: String,
        /// Also run the submodule oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Checks the Euler identity on seeded random module pairs.
    Euler {
        cartan: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// The rank-4 example where shards depend on the Cartan matrix.
    CartanDependence {
        #[arg(long)]
        x: i64,
        #[arg(long)]
        y: i64,
        #[arg(long)]
        z: i64,
    },
    /// Runs a bundled demo.
    Demo {
        #[arg(value_parser = demos::NAMES)]
        name: String,
    },
}

/// A command's JSON output, a human summary, and whether its checks passed.
struct Output {
    json: Value,
    summary: String,
    ok: bool,
}

fn load_cartan(arg: &str) -> Result<CartanData, Error> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{arg}: {e}")))?;
        return CartanData::from_json(&text);
    }
    bundled::load(arg).ok_or_else(|| {
        Error::InvalidInput(format!("{arg:?} is neither a file nor a bundled datum ({})", bundled::NAMES.join(", ")))
    })
}

/// Runs `$body` with `$s` bound to the species over the datum's field.
macro_rules! with_species {
    ($c:expr, $s:ident => $body:expr) => {{
        let c: &CartanData = $c;
        if c.prime().is_some() {
            let $s = Species::finite(c)?;
            $body
        } else {
            let $s = Species::rational(c)?;
            $body
        }
    }};
}

fn shards(c: &CartanData, root: &str, method: Method) -> Result<Output, Error> {
    let beta = c.parse_root(root)?;
    let direct = matches!(method, Method::Direct | Method::Both).then(|| shards_direct(c, &beta)).transpose()?;
    let recursive = match method {
        Method::Recursive | Method::Both => Some(shards_recursive(c, &positive_expression(c, &beta)?)),
        Method::Direct => None,
    };
    let agree = match (&direct, &recursive) {
        (Some(d), Some(r)) => Some(methods_agree(d, &r.shards)),
        _ => None,
    };
    let list = recursive.as_ref().map(|r| &r.shards).or(direct.as_ref()).expect("one method ran");
    let mut json = json!({
        "cartan": c.name(),
        "root": beta.to_string(),
        "count": list.len(),
        "shards": list.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
    });
    if let Some(r) = &recursive {
        json["sign_vectors"] = json!(r.sign_vectors);
        json["degenerate"] = json!(r.degenerate);
    }
    if let Some(a) = agree {
        json["verdict"] = json!(if a { "match" } else { "mismatch" });
    }
    Ok(Output {
        summary: format!("{} shards of {beta}{}", list.len(), agree.map_or(String::new(), |a| format!(", methods {}", if a { "match" } else { "DISAGREE" }))),
        json,
        ok: agree != Some(false),
    })
}

fn bricks<F: Tower>(s: &Species<F>, root: &str) -> Result<Output, Error> {
    let beta = s.cartan().parse_root(root)?;
    let search = bricks_of_dimension(s, &beta)?;
    let mut json = search.to_json(s);
    json["count"] = json!(search.bricks.len());
    Ok(Output {
        summary: format!(
            "{} bricks of dimension {beta}; {} of {} sign vectors well-defined",
            search.bricks.len(),
            search.well_defined,
            1u64 << search.expression.len()
        ),
        json,
        ok: true,
    })
}

fn stab<F: Tower>(s: &Species<F>, word: &str, oracle: bool) -> Result<Output, Error> {
    let w: SignedWord = word.parse()?;
    let m = apply_signed_word(s, &w)?;
    let cone = stab_recursive(s, &w)?;
    let rec = StabResult::new(w.clone(), m.dim_vector(), cone, StabMethod::Recursive);
    let mut json = rec.to_json();
    let mut ok = true;
    if oracle {
        let cone = stab_oracle(s, &m, DEFAULT_ORACLE_BOUND)?;
        let agree = cone == rec.cone;
        ok = agree;
        json["oracle"] = StabResult::new(w.clone(), m.dim_vector(), cone, StabMethod::Oracle).to_json();
        json["oracle_agrees"] = json!(agree);
    }
    Ok(Output {
        summary: format!(
            "Stab of {w} (dims {}) has dimension {}; shard module: {}",
            m.dim_vector(),
            rec.cone.dim(),
            rec.is_shard_module
        ),
        json,
        ok,
    })
}

fn euler<F: Tower>(s: &Species<F>, trials: usize, seed: u64, max_dim: usize) -> Result<Output, Error> {
    let report = euler_trials(s, trials, seed, max_dim);
    Ok(Output {
        summary: format!("{}/{} pairs satisfy the Euler identity", report.passed, report.trials),
        ok: report.failures.is_empty(),
        json: serde_json::to_value(&report).expect("report serializes"),
    })
}

fn run(cmd: Command) -> Result<Output, Error> {
    match cmd {
        Command::Shards { cartan, root, method } => shards(&load_cartan(&cartan)?, &root, method),
        Command::Bricks { cartan, root } => with_species!(&load_cartan(&cartan)?, s => bricks(&s, &root)),
        Command::Stab { cartan, word, oracle } => with_species!(&load_cartan(&cartan)?, s => stab(&s, &word, oracle)),
        Command::Euler { cartan, trials, seed, max_dim } => {
            with_species!(&load_cartan(&cartan)?, s => euler(&s, trials, seed, max_dim))
        }
        Command::CartanDependence { x, y, z } => {
            let r = demos::cartan_dependence(x, y, z)?;
            Ok(Output {
                summary: format!(
                    "({x},{y},{z}): det {} (closed form {}), cross ratio {}, {} regions",
                    r.determinant,
                    r.expected_determinant,
                    r.cross_ratio.as_ref().map_or_else(|| "undefined".into(), ToString::to_string),
                    r.regions
                ),
                ok: r.determinant_matches && r.matches_corrected,
                json: r.to_json(),
            })
        }
        Command::Demo { name } => {
            let d = demos::run(&name)?;
            Ok(Output { json: d.json, summary: d.summary, ok: d.ok })
        }
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), Error> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| Error::InvalidInput(format!("{THREADS_ENV}={v:?} is not a count")))?),
        Err(_) => flag,
    };
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads(cli.threads).and_then(|()| run(cli.command));
    match result {
        Ok(out) => {
            println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON values serialize"));
            eprintln!("{}", out.summary);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
