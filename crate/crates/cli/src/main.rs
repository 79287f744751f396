use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lightcone_kw::conformal::ckv_fields;
use lightcone_kw::function_spec::FunctionSpec;
use lightcone_kw::kazdan_warner::{proof_chain, verify_proof_chain};
use lightcone_kw::seeded::random_conformal_killing;
use lightcone_kw::suite::{convergence_study, run_suite, ConvergenceTable, Suite, SuiteInput};
use lightcone_kw::tolerances::{Override, Tolerances};
use lightcone_kw::SphereGrid;

const SPEC_HELP: &str =
    "Function specs: zero | const:C | ylm:L,M,A | sum:L,M,A;L,M,A;... | random:SEED,LMAX,A
(random draws degrees 1..=LMAX, scaled so the peak of |f| is A).
Thread count follows RAYON_NUM_THREADS.
Exit codes: 0 all checks pass, 1 some check failed (report still written), 2 usage or input error.";

#[derive(Parser)]
#[command(name = "lightcone-kw", version, about = "Numerical checks of the Kazdan-Warner identity via lightcone embeddings", after_help = SPEC_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: spectral-core, conformal, kw, embed, gauge, chain, adjoint or all.
    Verify {
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate every residual over a list of band limits.
    Convergence {
        /// Ascending band limits, each at least 8.
        #[arg(long, value_delimiter = ',', default_value = "12,24,48")]
        band_limits: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the six chain integrals on the cone graph of h.
    Chain {
        /// Use X = grad x_AXIS (1, 2 or 3); without it, a seeded conformal Killing field.
        #[arg(long)]
        axis: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Conformal exponent f of g = e^{2f} g_round.
    #[arg(long, default_value = "zero")]
    f: FunctionSpec,
    /// Embedding exponent h (defaults to f).
    #[arg(long)]
    h: Option<FunctionSpec>,
    #[arg(long, default_value_t = 32)]
    band_limit: usize,
    /// Seed for auxiliary random objects.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance override NAME=VALUE (repeatable).
    #[arg(long = "tol")]
    tol: Vec<Override>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write tables as CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl Common {
    fn input(&self) -> SuiteInput {
        SuiteInput {
            f: self.f.clone(),
            h: self.h.clone(),
            band_limit: self.band_limit,
            seed: self.seed,
        }
    }

    fn tolerances(&self) -> Result<Tolerances, String> {
        let mut t = Tolerances::default();
        for o in &self.tol {
            t.set(&o.name, o.value).map_err(|e| e.to_string())?;
        }
        Ok(t)
    }
}

enum Failure {
    Usage(String),
    Checks,
}

impl From<lightcone_kw::Error> for Failure {
    fn from(e: lightcone_kw::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn write(path: &Option<PathBuf>, contents: &str) -> Result<(), Failure> {
    if let Some(p) = path {
        fs::write(p, contents)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn table_csv(table: &ConvergenceTable) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["band_limit".to_string()];
    header.extend(table.columns.iter().cloned());
    let io = |e: csv::Error| Failure::Usage(e.to_string());
    w.write_record(&header).map_err(io)?;
    for row in &table.rows {
        let mut rec = vec![row.band_limit.to_string()];
        rec.extend(row.values.iter().map(|v| format!("{v:e}")));
        w.write_record(&rec).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn verify(suite: Suite, common: &Common) -> Result<(), Failure> {
    let tol = common.tolerances().map_err(Failure::Usage)?;
    let report = run_suite(suite, &common.input(), &tol)?;
    for c in &report.checks {
        let mark = if c.pass { "PASS" } else { "FAIL" };
        println!(
            "{mark} {:<24} {:>12.3e} <= {:.0e}",
            c.name, c.value, c.tolerance
        );
    }
    println!(
        "{} {} at L = {} in {:.2}s",
        report.suite,
        if report.passed { "passed" } else { "failed" },
        report.band_limit,
        report.wall_time_s
    );
    write(&common.out, &to_json(&report))?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn convergence(bands: &[usize], common: &Common) -> Result<(), Failure> {
    let table = convergence_study(&common.input(), bands)?;
    let csv = table_csv(&table)?;
    print!("{csv}");
    write(&common.csv, &csv)?;
    write(&common.out, &to_json(&table))
}

fn chain(axis: Option<usize>, common: &Common) -> Result<(), Failure> {
    let tol = common.tolerances().map_err(Failure::Usage)?;
    let grid = SphereGrid::new(common.band_limit)?;
    let h = common.input().h().to_field(&grid)?;
    let x = match axis {
        Some(i @ 1..=3) => ckv_fields(&grid)[i - 1].clone(),
        Some(i) => return Err(lightcone_kw::Error::AxisOutOfRange(i).into()),
        None => random_conformal_killing(&grid, common.seed),
    };
    let details = proof_chain(&grid, &h, &x)?;
    let report = verify_proof_chain(&grid, &h, &x, tol.get("chain")?)?;
    for (i, v) in details.lines.iter().enumerate() {
        println!("line {}: {v:+.6e}", i + 1);
    }
    println!("codazzi-1 substep: {:+.6e}", details.codazzi1_substep);
    println!("intrinsic: {:+.6e}", details.intrinsic);
    println!("normalization: {:.6e}", details.normalization);
    println!("max gap: {:.3e}", details.max_gap());
    write(&common.out, &to_json(&report))?;
    if let Some(p) = &common.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Failure::Usage(e.to_string());
        w.write_record(["line", "value"]).map_err(io)?;
        for (i, v) in details.lines.iter().enumerate() {
            w.write_record([(i + 1).to_string(), format!("{v:e}")])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
        write(&Some(p.clone()), &String::from_utf8(bytes).expect("utf-8"))?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify { suite, common } => verify(*suite, common),
        Command::Convergence {
            band_limits,
            common,
        } => convergence(band_limits, common),
        Command::Chain { axis, common } => chain(*axis, common),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
