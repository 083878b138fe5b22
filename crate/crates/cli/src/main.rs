//! `groupoid`: command-line front end for finite groupoid algebra computations.
//!
//! Exit codes: 0 success, 1 semantic failure (a witness is printed), 2 input or parse failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use groupoid_algebra::abelian::dual_bundle;
use groupoid_algebra::check::{check_groupoid, run_corpus, CheckReport};
use groupoid_algebra::document::{
    dual_bundle_json, functional_json, gelfand_json, quotient_json, GroupoidDocument,
};
use groupoid_algebra::functional::{enumerate_characters, gelfand_transform};
use groupoid_algebra::generators::{self, random_abelian_bundle, random_groupoid};
use groupoid_algebra::ideal::abelianization_dim;
use groupoid_algebra::quotient::{abelianize_groupoid, quotient, NormalSubgroupoid};
use groupoid_algebra::{ElementSubset, FiniteGroupoid};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "groupoid",
    version,
    about = "Finite groupoids and their convolution algebras"
)]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a groupoid document against the schema and the groupoid axioms.
    Validate { path: PathBuf },
    /// Emit a generated groupoid document.
    Generate {
        /// A library group (Z1..Z12, Klein, S3, A3, D4, Q8), trivial, pair, klein-cross,
        /// s3-a3, empty, random or abelian-bundle.
        kind: String,
        /// Number of points for `trivial` and `pair`.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Arrow budget for `random`.
        #[arg(long, default_value_t = 24)]
        budget: usize,
    },
    /// Quotient by a normal subgroupoid given as element labels.
    Quotient {
        path: PathBuf,
        /// Comma-separated labels of the subgroupoid.
        #[arg(long, value_delimiter = ',', required = true)]
        subgroupoid: Vec<String>,
    },
    /// G_fix, G^ab, the dual bundle of G^ab and the abelianized algebra dimension.
    Abelianize { path: PathBuf },
    /// Dual bundle and Gelfand matrix of an abelian group bundle.
    Dual { path: PathBuf },
    /// All characters φ_{x,χ} of the convolution algebra.
    Characters { path: PathBuf },
    /// Run the theorem checks on one document or on a seeded corpus.
    Check {
        path: Option<PathBuf>,
        #[arg(long)]
        corpus: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

enum Failure {
    /// Exit 2.
    Input(String),
    /// Exit 1, with a JSON witness.
    Semantic(Value),
}

type Outcome = Result<Value, Failure>;

fn load(path: &Path) -> Result<FiniteGroupoid, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let doc = GroupoidDocument::from_json(&text).map_err(|e| Failure::Input(e.to_string()))?;
    doc.decode().map_err(|e| Failure::Input(e.to_string()))
}

fn load_valid(path: &Path) -> Result<FiniteGroupoid, Failure> {
    let g = load(path)?;
    let report = g.validate();
    if !report.is_ok() {
        return Err(Failure::Semantic(
            json!({ "valid": false, "violations": report.violations }),
        ));
    }
    Ok(g)
}

fn cmd_validate(path: &Path) -> Outcome {
    load_valid(path)?;
    Ok(json!({ "valid": true, "violations": [] }))
}

fn cmd_generate(kind: &str, n: usize, seed: u64, budget: usize) -> Outcome {
    let g = match kind {
        "random" => random_groupoid(seed, budget),
        "abelian-bundle" => random_abelian_bundle(seed),
        other => generators::named(other, n)
            .ok_or_else(|| Failure::Input(format!("unknown generator {other:?}")))?,
    };
    Ok(serde_json::to_value(GroupoidDocument::encode(&g)).expect("serializable"))
}

fn cmd_quotient(path: &Path, labels: &[String]) -> Outcome {
    let g = load_valid(path)?;
    let carrier = labels
        .iter()
        .map(|l| {
            g.index_of(l)
                .ok_or_else(|| Failure::Input(format!("unknown label {l:?}")))
        })
        .collect::<Result<ElementSubset, _>>()?;
    let h = NormalSubgroupoid::new(&g, carrier).map_err(|e| {
        let mut witness = serde_json::to_value(&e).expect("serializable");
        if let Value::Object(map) = &mut witness {
            for v in map.values_mut() {
                if let Some(i) = v.as_u64() {
                    *v = json!(g.label(i as usize));
                }
            }
        }
        Failure::Semantic(json!({ "normal": false, "witness": witness }))
    })?;
    let q = quotient(&g, &h);
    let mut out = quotient_json(&g, &q);
    out["exact"] = json!(q.preimage_of_units() == *h.carrier());
    Ok(out)
}

fn cmd_abelianize(path: &Path) -> Outcome {
    let g = load_valid(path)?;
    let ab = abelianize_groupoid(&g);
    let gab = ab.groupoid();
    let dual = dual_bundle(gab).expect("G^ab is an abelian group bundle");
    let dim = abelianization_dim(&g);
    let out = json!({
        "g_fix": GroupoidDocument::encode(&ab.g_fix.groupoid),
        "g_ab": GroupoidDocument::encode(gab),
        "dual_bundle": dual_bundle_json(gab, &dual),
        "abelianization_dim": dim,
    });
    if dim != dual.len() {
        return Err(Failure::Semantic(json!({
            "reason": "abelianization_dim differs from the dual bundle size",
            "abelianization_dim": dim,
            "dual_bundle_size": dual.len(),
        })));
    }
    Ok(out)
}

fn cmd_dual(path: &Path) -> Outcome {
    let g = load_valid(path)?;
    let dual = dual_bundle(&g).map_err(|e| Failure::Semantic(json!({ "error": e.to_string() })))?;
    let m =
        gelfand_transform(&g).map_err(|e| Failure::Semantic(json!({ "error": e.to_string() })))?;
    Ok(json!({
        "dual_bundle": dual_bundle_json(&g, &dual),
        "gelfand": gelfand_json(&g, &m),
    }))
}

fn cmd_characters(path: &Path) -> Outcome {
    let g = load_valid(path)?;
    let phis = enumerate_characters(&g);
    let dim = abelianization_dim(&g);
    let out = json!({
        "count": phis.len(),
        "abelianization_dim": dim,
        "characters": phis.iter().map(|p| functional_json(&g, p)).collect::<Vec<_>>(),
    });
    if phis.len() != dim {
        return Err(Failure::Semantic(out));
    }
    Ok(out)
}

fn cmd_check(path: Option<&Path>, corpus: bool, seed: u64, count: u64, jobs: usize) -> Outcome {
    let report = match (path, corpus) {
        (Some(p), false) => {
            // Invalid documents still get a report: validate fails first.
            let g = load(p)?;
            CheckReport::new(check_groupoid(&p.display().to_string(), &g))
        }
        (None, true) => run_corpus(seed, count, jobs),
        _ => {
            return Err(Failure::Input(
                "give either a document path or --corpus".into(),
            ))
        }
    };
    let value = serde_json::to_value(&report).expect("serializable");
    if report.passed {
        Ok(value)
    } else {
        Err(Failure::Semantic(value))
    }
}

fn emit(value: &Value, output: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    match output {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| format!("{}: {e}", p.display())),
        // A closed stdout (e.g. piped into `head`) is not an error.
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate { path } => cmd_validate(path),
        Command::Generate {
            kind,
            n,
            seed,
            budget,
        } => cmd_generate(kind, *n, *seed, *budget),
        Command::Quotient { path, subgroupoid } => cmd_quotient(path, subgroupoid),
        Command::Abelianize { path } => cmd_abelianize(path),
        Command::Dual { path } => cmd_dual(path),
        Command::Characters { path } => cmd_characters(path),
        Command::Check {
            path,
            corpus,
            seed,
            count,
            jobs,
        } => cmd_check(path.as_deref(), *corpus, *seed, *count, *jobs),
    };
    let output = cli.output.as_deref();
    match outcome {
        Ok(v) => match emit(&v, output) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Semantic(v)) => {
            let _ = emit(&v, output);
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
