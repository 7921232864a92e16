//! The `tverberg` command-line tool.
//!
//! Exit codes: 0 found / valid, 1 valid run but nothing found (or the
//! witness is invalid), 2 input error. Output files are written only on
//! success, through a temporary file and a rename.

use std::fs;
use std::io::Write as _;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::generate::{generate, GenParams, Profile, DEFAULT_BOUND};
use crate::io::{
    check_compatible, instance_to_json, parse_instance, parse_instance_document, parse_witness,
    witness_to_json, witnesses_to_json, DocumentError, Metadata,
};
use crate::kernel::{intersection_system, lp_feasible, FeasibilityResult};
use crate::model::{ColoringKind, Instance, TverbergWitness};
use crate::plot::render_svg;
use crate::reduction::{lift_instance, plan_lift, pullback_audited, verify_reduction, ReductionError};
use crate::solver::{solve, solve_all, SearchConfig};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tverberg", version, about = "Exact colored Tverberg solver and reduction pipeline")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SearchFlags {
    /// Require every vertex to be used by some face.
    #[arg(long)]
    pub all: bool,
    /// Disable the prefix LP prune.
    #[arg(long)]
    pub no_prune: bool,
    /// Explore the search tree on all cores (same result).
    #[arg(long)]
    pub parallel: bool,
}

impl SearchFlags {
    fn config(&self, limit: Option<NonZeroUsize>) -> SearchConfig {
        SearchConfig {
            require_all_vertices_used: self.all,
            max_solutions: limit,
            prune_with_prefix_lp: !self.no_prune,
            parallel: self.parallel,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded instance.
    Gen {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        /// special | singletons | random | bl
        #[arg(long, default_value = "special")]
        profile: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coordinates are drawn from [-bound, bound].
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Find the first witness in enumeration order.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// List every witness (up to --limit) as a JSON array.
    SolveAll {
        instance: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
        #[arg(long)]
        limit: Option<NonZeroUsize>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Lift a general coloring to a special one; writes the lifted instance.
    Lift {
        instance: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Pull a witness of the lifted instance back to the original.
    Pullback {
        /// The original (unlifted) instance.
        instance: PathBuf,
        /// Witness for the lifted instance produced by `lift`.
        lifted_witness: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// plan → lift → solve → pull back → verify, with a report.
    Roundtrip {
        instance: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Exit 0 iff the witness is valid for the instance.
    Verify { instance: PathBuf, witness: PathBuf },
    /// Render a planar instance (and optionally a witness) as SVG.
    Plot {
        instance: PathBuf,
        witness: Option<PathBuf>,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Run the built-in checks.
    Selftest,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn not_found(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NOT_FOUND,
            message: message.into(),
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(err: DocumentError) -> Self {
        Failure::input(err.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_witness(path: &Path) -> Result<TverbergWitness, Failure> {
    parse_witness(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Writes `text` to `path` atomically, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let Some(path) = path else {
        print!("{text}");
        return Ok(());
    };
    let mut staging = path.as_os_str().to_owned();
    staging.push(".partial");
    let staging = PathBuf::from(staging);
    let result = fs::File::create(&staging)
        .and_then(|mut f| f.write_all(text.as_bytes()).and_then(|_| f.sync_all()))
        .and_then(|_| fs::rename(&staging, path));
    result.map_err(|e| {
        let _ = fs::remove_file(&staging);
        Failure::input(format!("{}: {e}", path.display()))
    })
}

fn describe(instance: &Instance) -> String {
    format!(
        "d={} r={}, {} vertices, coloring {} (sizes {:?})",
        instance.d(),
        instance.r(),
        instance.num_vertices(),
        instance.classify(),
        instance.coloring().class_sizes()
    )
}

fn format_family(witness: &TverbergWitness) -> String {
    let faces = witness
        .family()
        .iter()
        .map(|f| format!("{f:?}"))
        .collect::<Vec<_>>()
        .join(", ");
    let point = witness
        .point()
        .iter()
        .map(crate::rational::format_rational)
        .collect::<Vec<_>>()
        .join(", ");
    format!("faces [{faces}] point ({point})")
}

fn reduction_failure(err: ReductionError) -> Failure {
    match err {
        ReductionError::InvalidColoring(_) | ReductionError::PlanMismatch(_) | ReductionError::Model(_) => {
            Failure::input(err.to_string())
        }
        ReductionError::AssertionBreach { .. } => Failure::not_found(format!("ASSERTION BREACH: {err}")),
        other => Failure::not_found(other.to_string()),
    }
}

fn cmd_gen(d: usize, r: usize, profile: &str, seed: u64, bound: i64, output: Option<&Path>) -> Result<i32, Failure> {
    let profile = profile.parse::<Profile>().map_err(|e| Failure::input(e.to_string()))?;
    let params = GenParams {
        d,
        r,
        profile,
        seed,
        bound,
    };
    let instance = generate(&params).map_err(|e| Failure::input(e.to_string()))?;
    let metadata = Metadata {
        generator: Some(profile.name().to_string()),
        seed: Some(seed),
    };
    emit(output, &instance_to_json(&instance, Some(metadata)))?;
    Ok(EXIT_FOUND)
}

fn cmd_solve(path: &Path, search: &SearchFlags, output: Option<&Path>) -> Result<i32, Failure> {
    let instance = load_instance(path)?;
    match solve(&instance, &search.config(None)) {
        Some(witness) => {
            emit(output, &witness_to_json(&witness))?;
            Ok(EXIT_FOUND)
        }
        None => Err(Failure::not_found("no family of rainbow faces has a common point")),
    }
}

fn cmd_solve_all(
    path: &Path,
    search: &SearchFlags,
    limit: Option<NonZeroUsize>,
    output: Option<&Path>,
) -> Result<i32, Failure> {
    let instance = load_instance(path)?;
    let witnesses = solve_all(&instance, &search.config(limit));
    if witnesses.is_empty() {
        return Err(Failure::not_found("no family of rainbow faces has a common point"));
    }
    eprintln!("{} witness(es)", witnesses.len());
    emit(output, &witnesses_to_json(&witnesses))?;
    Ok(EXIT_FOUND)
}

fn cmd_lift(path: &Path, output: Option<&Path>) -> Result<i32, Failure> {
    let instance = load_instance(path)?;
    let plan = plan_lift(instance.coloring(), instance.d(), instance.r()).map_err(reduction_failure)?;
    let lifted = lift_instance(&instance, &plan).map_err(reduction_failure)?;
    eprint!("{}", plan.summary());
    let metadata = Metadata {
        generator: Some("lift".to_string()),
        seed: parse_instance_document(&read(path)?)
            .ok()
            .and_then(|d| d.metadata)
            .and_then(|m| m.seed),
    };
    emit(output, &instance_to_json(&lifted, Some(metadata)))?;
    Ok(EXIT_FOUND)
}

fn cmd_pullback(instance_path: &Path, witness_path: &Path, output: Option<&Path>) -> Result<i32, Failure> {
    let original = load_instance(instance_path)?;
    let lifted_witness = load_witness(witness_path)?;
    let plan = plan_lift(original.coloring(), original.d(), original.r()).map_err(reduction_failure)?;
    let lifted = lift_instance(&original, &plan).map_err(reduction_failure)?;
    check_compatible(&lifted, &lifted_witness)?;
    let result = pullback_audited(&lifted_witness, &lifted, &plan, &original).map_err(reduction_failure)?;
    for audit in &result.audits {
        eprintln!("{audit}");
    }
    emit(output, &witness_to_json(&result.witness))?;
    Ok(EXIT_FOUND)
}

/// Full reduction run; returns the report text and the verified witness.
pub fn roundtrip_report(
    instance: &Instance,
    config: &SearchConfig,
) -> Result<(String, TverbergWitness), (String, ReductionError)> {
    use std::fmt::Write;
    let mut report = String::new();
    let _ = writeln!(report, "instance: {}", describe(instance));
    let plan = plan_lift(instance.coloring(), instance.d(), instance.r()).map_err(|e| (report.clone(), e))?;
    report.push_str(&plan.summary());
    let lifted = lift_instance(instance, &plan).map_err(|e| (report.clone(), e))?;
    let _ = writeln!(report, "lifted: {}", describe(&lifted));
    let Some(lifted_witness) = solve(&lifted, config) else {
        let _ = writeln!(report, "verdict: NOT FOUND (lifted special instance has no witness)");
        return Err((
            report,
            ReductionError::PlanMismatch("no witness for the lifted instance".into()),
        ));
    };
    let _ = writeln!(report, "lifted witness: {}", format_family(&lifted_witness));
    let result = match pullback_audited(&lifted_witness, &lifted, &plan, instance) {
        Ok(result) => result,
        Err(err) => {
            let _ = writeln!(report, "verdict: FAILED ({err})");
            return Err((report, err));
        }
    };
    let _ = writeln!(report, "layers peeled: {}", result.audits.len());
    for audit in &result.audits {
        let _ = writeln!(report, "  {audit}");
    }
    let verified = verify_reduction(instance, &result.witness);
    let _ = writeln!(
        report,
        "verdict: {} {}",
        if verified { "VERIFIED" } else { "REJECTED" },
        format_family(&result.witness)
    );
    if verified {
        Ok((report, result.witness))
    } else {
        Err((
            report,
            ReductionError::FinalVerification(crate::model::WitnessError::PointMismatch { face: 0 }),
        ))
    }
}

fn cmd_roundtrip(path: &Path, search: &SearchFlags, output: Option<&Path>) -> Result<i32, Failure> {
    let instance = load_instance(path)?;
    if let ColoringKind::Invalid(reason) = instance.classify() {
        return Err(Failure::input(format!("coloring is not general: {reason}")));
    }
    match roundtrip_report(&instance, &search.config(None)) {
        Ok((report, witness)) => {
            print!("{report}");
            if output.is_some() {
                emit(output, &witness_to_json(&witness))?;
            }
            Ok(EXIT_FOUND)
        }
        Err((report, err)) => {
            print!("{report}");
            Err(reduction_failure(err))
        }
    }
}

fn cmd_verify(instance_path: &Path, witness_path: &Path) -> Result<i32, Failure> {
    let instance = load_instance(instance_path)?;
    let witness = load_witness(witness_path)?;
    check_compatible(&instance, &witness)?;
    match witness.check(&instance) {
        Ok(()) if verify_reduction(&instance, &witness) => {
            println!("valid");
            Ok(EXIT_FOUND)
        }
        Ok(()) => Err(Failure::not_found("invalid witness")),
        Err(err) => Err(Failure::not_found(format!("invalid witness: {err}"))),
    }
}

fn cmd_plot(instance_path: &Path, witness_path: Option<&Path>, output: &Path) -> Result<i32, Failure> {
    let instance = load_instance(instance_path)?;
    let witness = witness_path.map(load_witness).transpose()?;
    if let Some(w) = &witness {
        check_compatible(&instance, w)?;
    }
    let svg = render_svg(&instance, witness.as_ref()).map_err(|e| Failure::input(e.to_string()))?;
    emit(Some(output), &svg)?;
    Ok(EXIT_FOUND)
}

/// Built-in checks; returns one `(name, passed)` per check.
pub fn selftest() -> Vec<(&'static str, bool)> {
    let config = SearchConfig::default();
    let square = Instance::from_integers(2, 2, &[vec![0, 0], vec![2, 0], vec![2, 2], vec![0, 2]], vec![0, 1, 2, 3])
        .expect("square");
    let moment = |count: i64| {
        Instance::from_integers(
            2,
            3,
            &(1..=count).map(|t| vec![t, t * t]).collect::<Vec<_>>(),
            (0..count as usize).collect(),
        )
        .expect("moment curve")
    };
    let collinear = Instance::from_integers(1, 3, &[vec![0], vec![1], vec![2], vec![3], vec![4]], vec![0, 1, 2, 3, 4])
        .expect("collinear");

    let mut checks = Vec::new();
    let radon = solve(&square, &config);
    checks.push((
        "square Radon partition is the diagonals",
        radon.as_ref().is_some_and(|w| w.family() == vec![vec![0, 2], vec![1, 3]]),
    ));
    checks.push((
        "seven moment-curve points admit r=3",
        solve(&moment(7), &config).is_some_and(|w| w.check(&moment(7)).is_ok()),
    ));
    checks.push(("six moment-curve points do not admit r=3", solve(&moment(6), &config).is_none()));
    checks.push((
        "collinear d=1 r=3 reduction round trip",
        roundtrip_report(&collinear, &config).is_ok(),
    ));
    checks.push((
        "tampered coefficient is rejected",
        radon.is_some_and(|w| {
            let (faces, point, mut coefficients) = w.into_parts();
            if let Some(c) = coefficients[0].values_mut().next() {
                *c += crate::rational::ratio(1, 1_000_000_000);
            }
            !verify_reduction(&square, &TverbergWitness::from_parts(faces, point, coefficients))
        }),
    ));
    checks.push(("disjoint segments carry a Farkas certificate", {
        let line = Instance::from_integers(1, 2, &[vec![0], vec![1], vec![2], vec![3]], vec![0, 1, 2, 3])
            .expect("line");
        let system = intersection_system(&[vec![0, 1], vec![2, 3]], line.points(), 1).expect("system");
        matches!(lp_feasible(&system), FeasibilityResult::Infeasible(y) if system.refuted_by(&y))
    }));
    checks
}

fn cmd_selftest() -> Result<i32, Failure> {
    let checks = selftest();
    for (name, passed) in &checks {
        println!("[{}] {name}", if *passed { "PASS" } else { "FAIL" });
    }
    if checks.iter().all(|(_, p)| *p) {
        Ok(EXIT_FOUND)
    } else {
        Err(Failure::not_found("self-test failed"))
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match &cli.command {
        Command::Gen {
            d,
            r,
            profile,
            seed,
            bound,
            output,
        } => cmd_gen(*d, *r, profile, *seed, *bound, output.as_deref()),
        Command::Solve {
            instance,
            search,
            output,
        } => cmd_solve(instance, search, output.as_deref()),
        Command::SolveAll {
            instance,
            search,
            limit,
            output,
        } => cmd_solve_all(instance, search, *limit, output.as_deref()),
        Command::Lift { instance, output } => cmd_lift(instance, output.as_deref()),
        Command::Pullback {
            instance,
            lifted_witness,
            output,
        } => cmd_pullback(instance, lifted_witness, output.as_deref()),
        Command::Roundtrip {
            instance,
            search,
            output,
        } => cmd_roundtrip(instance, search, output.as_deref()),
        Command::Verify { instance, witness } => cmd_verify(instance, witness),
        Command::Plot {
            instance,
            witness,
            output,
        } => cmd_plot(instance, witness.as_deref(), output),
        Command::Selftest => cmd_selftest(),
    };
    match outcome {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("tverberg: {}", failure.message);
            failure.code
        }
    }
}
