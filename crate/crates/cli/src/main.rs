use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use voganlab::dataset;
use voganlab::kl::{KlEngine, KlPolynomial, Permutation};
use voganlab::report::{analyze_spec, closure_dot, AnalysisOptions};
use voganlab::variety::VarietySpec;
use voganlab::verify::verify_variety;
use voganlab::{build_variety, Error, Family, GradedDims, OrbitTable};

const CACHE_ENV: &str = "VOGANLAB_CACHE_DIR";
const CACHE_FILE: &str = "kl-cache.json";

#[derive(Parser)]
#[command(name = "voganlab", version, about = "Orbit geometry of unramified Vogan varieties")]
struct Cli {
    /// Worker threads for per-orbit geometry and KL work.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full orbit report: dimensions, closures, smoothness, duality, Arthur type, multiplicities.
    Analyze {
        #[command(flatten)]
        variety: VarietyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Per-orbit summary as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Covering relations of the closure order.
    Hasse {
        #[command(flatten)]
        variety: VarietyArgs,
        #[arg(long)]
        dot: bool,
    },
    /// Curated orbit tables.
    Dataset {
        name: String,
        #[arg(long)]
        json: bool,
        /// Check "Arthur type iff closure not smooth" on the non-open, non-closed rows.
        #[arg(long)]
        check: bool,
    },
    /// Property battery on a general-linear variety.
    Verify {
        #[command(flatten)]
        variety: VarietyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct VarietyArgs {
    #[arg(long, default_value = "gl")]
    family: Family,
    /// Steinberg parameter of the rank-N group.
    #[arg(long, value_name = "N", conflicts_with_all = ["two_eig", "spec"])]
    steinberg: Option<usize>,
    /// Eigenvalues q^{1/2} and q^{-1/2}, each with multiplicity N.
    #[arg(long = "two-eig", value_name = "N", conflicts_with = "spec")]
    two_eig: Option<usize>,
    /// Variety spec JSON: {"family": ..., "chains": [{"offset": "-1/2", "dims": [..]}]}.
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
}

impl VarietyArgs {
    fn resolve(&self) -> Result<VarietySpec, Error> {
        if let Some(path) = &self.spec {
            return VarietySpec::from_json(&std::fs::read_to_string(path)?);
        }
        let dims = match (self.steinberg, self.two_eig) {
            (Some(n), _) => GradedDims::steinberg_for(self.family, n)?,
            (_, Some(n)) => GradedDims::two_eigenvalue(n)?,
            _ => return Err(Error::Input("one of --steinberg, --two-eig, --spec is required".into())),
        };
        Ok(dims.to_spec(self.family))
    }
}

enum Failure {
    Error(Error),
    /// A property or dataset check failed; the details were already printed.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Invariant(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analyze { variety, seed, json, csv } => {
            let spec = variety.resolve()?;
            let engine = load_engine();
            let report = analyze_spec(&spec, AnalysisOptions { seed }, &engine)?;
            save_engine(&engine);
            if json {
                print!("{}", report.to_json()?);
            } else if csv {
                println!("id,label,dim,open,closed,smooth_closure,arthur,dual");
                for o in &report.orbits {
                    println!(
                        "{},\"{}\",{},{},{},{},{},{}",
                        o.id, o.label, o.dim, o.open, o.closed, o.smooth_closure, o.arthur.is_arthur, o.dual
                    );
                }
            } else {
                print!("{}", report.to_text());
            }
        }
        Command::Hasse { variety, dot } => {
            let spec = variety.resolve()?;
            let dims = GradedDims::from_spec(&spec)?;
            let t = OrbitTable::new(build_variety(&dims, spec.family)?)?;
            if dot {
                print!("{}", closure_dot(&t));
            } else {
                for (a, b) in t.hasse() {
                    let show = |c: usize| t.orbits[c].label.display(&dims);
                    println!("{a} {} < {b} {}", show(a), show(b));
                }
            }
        }
        Command::Dataset { name, json, check } => {
            let d = dataset::load(&name)?;
            if check {
                let bad = d.check();
                if !bad.is_empty() {
                    for r in bad {
                        println!("{}: arthur = {}, smooth closure = {}", r.label, r.arthur, r.smooth_closure);
                    }
                    return Err(Failure::Check);
                }
                println!("check passed: non-open/closed rows are Arthur type exactly when the closure is singular");
            } else if json {
                println!("{}", serde_json::to_string_pretty(&d).map_err(Error::from)?);
            } else {
                print!("{}", d.to_text());
            }
        }
        Command::Verify { variety, seed, json } => {
            let spec = variety.resolve()?;
            if spec.family != Family::Gl {
                return Err(Error::Unsupported("verify runs on the gl family only".into()).into());
            }
            let engine = load_engine();
            let report = verify_variety(&GradedDims::from_spec(&spec)?, &engine, seed)?;
            save_engine(&engine);
            if json {
                println!("{}", serde_json::to_string_pretty(&report).map_err(Error::from)?);
            } else {
                print!("{}", report.to_text());
            }
            if !report.passed() {
                return Err(Failure::Check);
            }
        }
    }
    Ok(())
}

type CacheEntries = Vec<(Permutation, Permutation, KlPolynomial)>;

fn cache_path() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(|d| Path::new(&d).join(CACHE_FILE))
}

/// Cache problems only cost speed, so they are reported and otherwise ignored.
fn load_engine() -> KlEngine {
    let engine = KlEngine::new();
    if let Some(path) = cache_path().filter(|p| p.exists()) {
        match std::fs::read_to_string(&path).map_err(Error::from).and_then(|t| Ok(serde_json::from_str::<CacheEntries>(&t)?)) {
            Ok(entries) => engine.import(entries),
            Err(e) => eprintln!("warning: ignoring KL cache {}: {e}", path.display()),
        }
    }
    engine
}

fn save_engine(engine: &KlEngine) {
    let Some(path) = cache_path() else { return };
    let write = || -> Result<(), Error> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(&path, serde_json::to_string(&engine.export())?)?;
        Ok(())
    };
    if let Err(e) = write() {
        eprintln!("warning: could not write KL cache {}: {e}", path.display());
    }
}
