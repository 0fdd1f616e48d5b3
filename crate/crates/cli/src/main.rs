//! `ssmass`: masses of supersingular elliptic curves, three ways.

mod report;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;

use ssmass::finitefield::DEFAULT_SEED;
use ssmass::formulas::{self, FormulaError};
use ssmass::newton::{CenterDecomposition, NewtonError, NewtonPolygon};
use ssmass::quaternion::{ideal_classes, QuaternionError};
use ssmass::supersingular::{self, SupersingularError};
use ssmass::verify::{self, VerifyError};
use ssmass::Execution;

use report::{
    ComponentVerdict, CurveClass, LevelReport, MassReport, NewtonReport, OrderClass, QuatReport, Report, SsReport,
    VerifyReport, VERSION,
};

#[derive(Parser)]
#[command(
    name = "ssmass",
    version,
    about = "Exact masses of supersingular elliptic curves and quaternion ideal classes"
)]
struct Cli {
    /// Print single-line JSON instead of tables
    #[arg(long, global = true)]
    json: bool,

    /// Seed for the randomized polynomial root splitting
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Supersingular j-invariants and the geometric mass
    Ss {
        #[arg(long)]
        p: u64,
    },
    /// Right ideal classes of a maximal order and the arithmetic mass
    Quat {
        #[arg(long)]
        p: u64,
    },
    /// Mass of principally polarized supersingular abelian varieties of dimension g
    Mass {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u64,
    },
    /// Mass with level-N structure
    Level {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        /// Also report the class count (requires N >= 3)
        #[arg(long)]
        count: bool,
    },
    /// Newton-polygon verdicts
    Newton(NewtonArgs),
    /// Compare the geometric, arithmetic and analytic masses
    Verify {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct NewtonArgs {
    /// Comma-separated slopes, e.g. 1/2,1/2
    #[arg(long, value_name = "SLOPES")]
    slopes: Option<String>,

    /// One component of a decomposition, as label=slopes (repeatable)
    #[arg(long = "component", value_name = "LABEL=SLOPES")]
    components: Vec<String>,
}

/// A failure with its exit status: 2 for invalid input, 1 otherwise.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(e: impl ToString) -> Self {
        Failure { code: 2, message: e.to_string() }
    }

    fn failed(e: impl ToString) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

impl From<SupersingularError> for Failure {
    fn from(e: SupersingularError) -> Self {
        match e {
            SupersingularError::NotPrime(_) => Failure::invalid(e),
            _ => Failure::failed(e),
        }
    }
}

impl From<QuaternionError> for Failure {
    fn from(e: QuaternionError) -> Self {
        match e {
            QuaternionError::NotPrime(_) => Failure::invalid(e),
            _ => Failure::failed(e),
        }
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::NonIntegralCount(_) => Failure::failed(e),
            _ => Failure::invalid(e),
        }
    }
}

impl From<NewtonError> for Failure {
    fn from(e: NewtonError) -> Self {
        Failure::invalid(e)
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::NotPrime(_) => Failure::invalid(e),
            VerifyError::Supersingular(e) => e.into(),
            VerifyError::Quaternion(e) => e.into(),
            VerifyError::Formula(e) => e.into(),
        }
    }
}

/// Rendered output and whether the run counts as a match.
struct Outcome {
    text: String,
    ok: bool,
}

fn render(report: &impl Report, json: bool, ok: bool) -> Outcome {
    Outcome { text: if json { report.json() } else { report.table() }, ok }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let (json, seed) = (cli.json, cli.seed);
    let version = VERSION.to_string();
    match &cli.command {
        Command::Ss { p } => {
            let r = supersingular::geometric_mass_seeded(*p, Execution::default(), seed)?;
            let classes = r.classes.iter().map(|c| CurveClass { j: c.j.to_string(), aut: c.aut_order }).collect();
            let report = SsReport { p: r.p, classes, mass: r.mass, count: r.class_count, d: r.d, seed, version };
            Ok(render(&report, json, true))
        }
        Command::Quat { p } => {
            let c = ideal_classes(*p)?;
            // Largest unit groups first, discovery order among equals.
            let mut unit_orders = c.unit_orders.clone();
            unit_orders.sort_by(|a, b| b.cmp(a));
            let report = QuatReport {
                p: c.p,
                classes: unit_orders.into_iter().map(|unit_order| OrderClass { unit_order }).collect(),
                mass: c.mass.clone(),
                count: c.class_number(),
                certificate: "ok".into(),
                seed,
                version,
            };
            Ok(render(&report, json, true))
        }
        Command::Mass { g, p } => {
            let mass = formulas::ekedahl_mass(*g, *p)?;
            Ok(render(&MassReport { g: *g, p: *p, mass, seed, version }, json, true))
        }
        Command::Level { p, n, count } => {
            let too_large = || Failure::invalid(format!("level N = {n} is too large"));
            let index = formulas::level_index(*p, *n)?.to_u128().ok_or_else(too_large)?;
            let mass = formulas::mass_with_level(*p, *n)?;
            let count = if *count {
                Some(formulas::class_count_with_level(*p, *n)?.to_u128().ok_or_else(too_large)?)
            } else {
                None
            };
            Ok(render(&LevelReport { p: *p, n: *n, index, mass, count, seed, version }, json, true))
        }
        Command::Newton(args) => {
            let decomposition = match &args.slopes {
                Some(s) => CenterDecomposition::new(vec![("slopes".into(), s.parse::<NewtonPolygon>()?)])?,
                None => CenterDecomposition::parse(&args.components)?,
            };
            let components = decomposition
                .components()
                .iter()
                .map(|(label, np)| ComponentVerdict {
                    label: label.clone(),
                    slopes: np.to_string(),
                    isoclinic: np.is_isoclinic(),
                    supersingular: np.is_supersingular(),
                })
                .collect();
            let report = NewtonReport { components, basic: decomposition.is_basic(), seed, version };
            Ok(render(&report, json, true))
        }
        Command::Verify { p } => {
            let r = verify::verify_seeded(*p, Execution::default(), seed)?;
            let ok = r.all_match();
            let report = VerifyReport {
                p: r.p,
                geometric_mass: r.geometric_mass,
                arithmetic_mass: r.arithmetic_mass,
                analytic_mass: r.analytic_mass,
                aut_multiset: r.aut_multiset,
                unit_multiset: r.unit_multiset,
                class_number: r.class_number,
                all_match: ok,
                seed,
                version,
            };
            Ok(render(&report, json, ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // Keep the diagnostic to one line; drop clap's usage footer.
            let rendered = e.to_string();
            let lines: Vec<&str> =
                rendered.lines().map(str::trim).take_while(|l| !l.is_empty()).filter(|l| !l.is_empty()).collect();
            eprintln!("{}", lines.join(" "));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(out) => {
            println!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
