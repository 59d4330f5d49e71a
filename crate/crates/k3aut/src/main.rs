use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use k3aut::cache::Cache;
use k3aut::certify;
use k3aut::fixtures::Reference;
use k3aut::pipeline::{self, RunOptions};
use k3aut::report;
use k3aut::verify;
use k3aut_core::borcherds::BaseChamber;
use k3aut_core::enumeration;
use k3aut_core::lattice_core::IntegerLattice;

const EXIT_CERTIFICATE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "k3aut",
    version,
    about = "Automorphism groups of three K3 surfaces and an Enriques quotient by exact lattice computations"
)]
struct Cli {
    /// Worker threads for chamber crossings (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Cache directory for chamber congruences (default: $K3AUT_CACHE_DIR, else .k3aut-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Disable the on-disk cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the automorphism group of surface k and write its report.
    Run {
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
        surface: u8,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Descend surface 0 to its Enriques quotient and write the report.
    Enriques {
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Reference data (default: the bundled copy).
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Check every matrix and vector of the reference data for its claimed properties.
    Verify {
        /// Reference data (default: the bundled copy).
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Also write the check list as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lattice utilities.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// List all vectors of the given norm in a definite lattice (negative norm for a
    /// negative definite Gram matrix, positive for a positive definite one).
    ShortVectors {
        /// Gram matrix as JSON: an array of rows of decimal strings or integers.
        #[arg(long)]
        gram: String,
        #[arg(long, allow_negative_numbers = true)]
        norm: i64,
    },
}

enum Failure {
    Usage(String),
    Certificate(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Certificate(e.to_string())
    }
}

fn load_reference(path: Option<&Path>) -> Result<Reference, Failure> {
    match path {
        None => Ok(Reference::bundled()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            Reference::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
    }
}

fn write(out: &Path, name: &str, text: &str) -> Result<(), Failure> {
    fs::create_dir_all(out).map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
    let path = out.join(name);
    fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn report_certificates(certs: &[certify::Certificate]) -> Result<(), Failure> {
    for c in certs {
        eprintln!("[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
    }
    match certs.iter().find(|c| !c.passed) {
        Some(c) => Err(Failure::Certificate(format!("certificate {} failed", c.name))),
        None => Ok(()),
    }
}

fn parse_gram(s: &str) -> Result<Vec<Vec<i64>>, Failure> {
    let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Failure::Usage(format!("--gram: {e}")))?;
    let rows = v
        .as_array()
        .ok_or_else(|| Failure::Usage("--gram: expected an array of rows".into()))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Failure::Usage("--gram: expected an array of rows".into()))?
                .iter()
                .map(|x| match x {
                    serde_json::Value::String(s) => s.parse().ok(),
                    serde_json::Value::Number(n) => n.as_i64(),
                    _ => None,
                })
                .collect::<Option<Vec<i64>>>()
                .ok_or_else(|| Failure::Usage("--gram: entries must be integers".into()))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let opts = RunOptions {
        threads: cli.threads.map(usize::from),
        cache: (!cli.no_cache).then(|| Cache::resolve(cli.cache_dir.as_deref())),
    };
    match cli.command {
        Command::Run { surface, out } => {
            let k = usize::from(surface);
            let result = pipeline::generate(k, &opts)?;
            let certs = certify::generation_certificates(&result);
            let rep = report::surface_report(&result, certs.clone());
            write(&out, &format!("surface{k}.json"), &report::to_json(&rep))?;
            let table = report::orbit_table(&rep);
            write(&out, &format!("surface{k}.txt"), &table)?;
            print!("{table}");
            report_certificates(&certs)
        }
        Command::Enriques { out, fixtures } => {
            let reference = load_reference(fixtures.as_deref())?;
            let base = pipeline::generate(0, &opts)?;
            let result = pipeline::enriques(&base, &reference)?;
            let certs = certify::enriques_certificates(&result, &base);
            let rep = report::enriques_report(&result, certs.clone());
            write(&out, "enriques.json", &report::to_json(&rep))?;
            println!(
                "descended group: order {}, {}; chamber walls {} in orbits {:?}",
                rep.group.order,
                rep.group.name.as_deref().unwrap_or("unnamed"),
                rep.wall_orbits.iter().map(Vec::len).sum::<usize>(),
                rep.wall_orbits.iter().map(Vec::len).collect::<Vec<_>>()
            );
            report_certificates(&certs)
        }
        Command::Verify { fixtures, out } => {
            let reference = load_reference(fixtures.as_deref())?;
            let base = BaseChamber::new(0)?;
            let checks = verify::verify(&reference, Some(&base.aut));
            for c in &checks {
                println!("[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.id, c.detail);
            }
            if let Some(out) = out {
                write(&out, "verify.json", &report::to_json(&checks))?;
            }
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Certificate(format!("failed fixtures: {}", failed.join(", "))))
            }
        }
        Command::Lattice {
            command: LatticeCommand::ShortVectors { gram, norm },
        } => {
            let mut g = parse_gram(&gram)?;
            let mut d = norm;
            if d > 0 {
                g = k3aut_core::arith::neg_mat(&g);
                d = -d;
            }
            let lat = IntegerLattice::new(g).map_err(|e| Failure::Usage(format!("--gram: {e}")))?;
            let vs = enumeration::short_vectors(&lat, d).map_err(|e| Failure::Usage(format!("--gram/--norm: {e}")))?;
            for v in vs {
                println!("{}", v.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Certificate(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_CERTIFICATE)
        }
    }
}
