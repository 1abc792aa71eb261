use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qspeedup::algorithms::{
    grover_iterate, paper_readout, run_extended, simon_sample_loop, standard_vprep, synthesized_readout, Readout,
};
use qspeedup::format::parse_family;
use qspeedup::histories::{assign_phases, enumerate_histories, history_table, sum_histories, Stage};
use qspeedup::query::{HalfMode, RuleVerdict};
use qspeedup::state::{StateVector, K, X};
use qspeedup::suite::{run_all, speedup_row, speedup_table};
use qspeedup::{builtin_by_name, Error, FunctionFamily, RegisterLayout};

#[derive(Parser)]
#[command(name = "qspeedup", version, about = "Extended oracle runs and query-count checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every sampled run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Amplitudes and probabilities below this print as zero.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args)]
struct FamilyArgs {
    /// Built-in family: deutsch, dj2, bv2, simon2, grover2..grover4, minute, perm.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    family: Option<String>,
    /// Family file in the line format.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Bit,
    Row,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    State,
    Table,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Prepare, evaluate once and rotate X; print the states.
    Simulate {
        #[command(flatten)]
        family: FamilyArgs,
        /// Last stage to run: 0 prepare, 1 evaluate, 2 readout.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=2))]
        steps: u8,
        #[arg(long, value_enum, default_value_t = Emit::State)]
        emit: Emit,
    },
    /// Classical, advanced and quantum query counts as one TSV row.
    Rule {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Histories of the one-query advanced-information algorithm.
    Histories {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, value_enum, default_value_t = Emit::Table)]
        emit: Emit,
    },
    /// Derive the X readout rotation from the post-evaluation state.
    Synthesize {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Repeated search iterations with per-iteration correlation.
    Grover {
        #[arg(long)]
        n: usize,
        /// Defaults to the largest count that does not overshoot.
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Period finding by repeated sampling after one K measurement.
    Simon {
        #[arg(long)]
        n: usize,
    },
    /// Acceptance checks and the speedup table.
    Report {
        /// Run every check (the default).
        #[arg(long)]
        all: bool,
    },
}

fn load(args: &FamilyArgs) -> Result<FunctionFamily, Error> {
    match (&args.family, &args.file) {
        (Some(name), _) => builtin_by_name(name),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
                line: 0,
                message: format!("{}: {e}", path.display()),
            })?;
            parse_family(&text)
        }
        (None, None) => unreachable!("clap requires one of --family and --file"),
    }
}

fn half_mode(mode: Option<Mode>, family: &FunctionFamily) -> HalfMode {
    match mode {
        Some(Mode::Bit) => HalfMode::Bit,
        Some(Mode::Row) => HalfMode::Row,
        None => HalfMode::default_for(family),
    }
}

fn clip(v: f64, tol: f64) -> f64 {
    if v.abs() < tol {
        0.0
    } else {
        v
    }
}

fn state_line(name: &str, s: &StateVector, tol: f64) -> String {
    let amps: Vec<String> = s
        .amplitudes()
        .iter()
        .map(|a| format!("({:.6e}, {:.6e})", clip(a.re, tol), clip(a.im, tol)))
        .collect();
    format!("{name}\t{}", amps.join(" "))
}

/// One row per `k`: the conditional distribution of `X`.
fn distribution_table(s: &StateVector, tol: f64) -> Result<String, Error> {
    let layout = s.layout();
    let xs = layout.register(X)?;
    let ks = layout.register(K)?;
    let mut out = String::from("k");
    for x in 0..xs.dim() {
        let _ = write!(out, "\t{}", xs.label(x));
    }
    out.push('\n');
    let marginal = s.measure_distribution(K)?;
    for k in 0..ks.dim() {
        let _ = write!(out, "{}", ks.label(k));
        if marginal.probs()[k] <= tol {
            out.push_str(&"\t-".repeat(xs.dim()));
        } else {
            for p in s.conditional_distribution(K, k, X)?.probs() {
                let _ = write!(out, "\t{:.6}", clip(*p, tol));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

fn simulate(family: &FunctionFamily, steps: u8, emit: Emit, tol: f64) -> Result<String, Error> {
    let readout = match paper_readout(family) {
        Ok(u) => Readout::Custom(u),
        Err(_) => Readout::Synthesized,
    };
    let report = run_extended(family, &standard_vprep(family), readout)?;
    let stages = &report.states[..=steps as usize];
    let mut out = String::new();
    match emit {
        Emit::State => {
            for (name, s) in stages {
                let _ = writeln!(out, "{}", state_line(name, s, tol));
            }
        }
        Emit::Table | Emit::Tsv => {
            let (name, s) = stages.last().expect("at least one stage");
            let _ = writeln!(out, "# {} {name}", family.name());
            out.push_str(&distribution_table(s, tol)?);
        }
    }
    Ok(out)
}

fn rule_line(row: &RuleVerdict) -> String {
    format!("{}\n", row.tsv())
}

fn histories(family: &FunctionFamily, mode: HalfMode, emit: Emit, tol: f64) -> Result<String, Error> {
    let bundle = assign_phases(&enumerate_histories(family, mode)?, &standard_vprep(family));
    Ok(match emit {
        Emit::Table | Emit::Tsv => history_table(&bundle),
        Emit::State => {
            let initial = sum_histories(&bundle, Stage::Initial)?;
            let after = sum_histories(&bundle, Stage::AfterEvaluation)?;
            format!("{}\n{}\n", state_line("initial", &initial, tol), state_line("after_evaluation", &after, tol))
        }
    })
}

fn synthesize(family: &FunctionFamily) -> Result<String, Error> {
    let layout = std::sync::Arc::new(RegisterLayout::for_family(family)?);
    let psi1 = qspeedup::prepare_extended(layout, &standard_vprep(family), &qspeedup::PhaseAssignment::uniform())?
        .apply_oracle(family)?;
    Ok(synthesized_readout(&psi1, family)?.render(family.x_bits()))
}

fn grover(n: usize, iterations: Option<usize>) -> Result<String, Error> {
    let report = grover_iterate(n, iterations)?;
    let mut out = String::from("iteration\tprobability\n");
    for (t, p) in report.probabilities.iter().enumerate() {
        let _ = writeln!(out, "{t}\t{p:.6}");
    }
    let _ = writeln!(out, "queries\t{}", report.quantum_queries);
    Ok(out)
}

fn simon(n: usize, seed: u64) -> Result<String, Error> {
    let run = simon_sample_loop(n, seed)?;
    let samples: Vec<String> = run.samples.iter().map(|s| s.to_string()).collect();
    Ok(format!(
        "seed\t{}\nk\t{}\nsamples\t{}\nqueries\t{}\nh\t{}\n",
        run.seed,
        run.k_label,
        samples.join(" "),
        run.queries,
        run.h
    ))
}

fn report() -> Result<(String, bool), Error> {
    let criteria = run_all();
    let mut out = String::new();
    for c in &criteria {
        let _ = writeln!(out, "{c}");
    }
    out.push('\n');
    let _ = writeln!(out, "{}", RuleVerdict::TSV_HEADER);
    for row in speedup_table()? {
        out.push_str(&rule_line(&row));
    }
    Ok((out, criteria.iter().all(|c| c.passed)))
}

fn run(cli: Cli) -> Result<(String, bool), Error> {
    let tol = cli.tol;
    let out = match cli.command {
        Command::Simulate { family, steps, emit } => simulate(&load(&family)?, steps, emit, tol)?,
        Command::Rule { family, mode } => {
            let f = load(&family)?;
            rule_line(&speedup_row(&f, half_mode(mode, &f))?)
        }
        Command::Histories { family, mode, emit } => {
            let f = load(&family)?;
            histories(&f, half_mode(mode, &f), emit, tol)?
        }
        Command::Synthesize { family } => synthesize(&load(&family)?)?,
        Command::Grover { n, iterations } => grover(n, iterations)?,
        Command::Simon { n } => simon(n, cli.seed)?,
        Command::Report { all: _ } => return report(),
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ Error::UnknownFamily(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
