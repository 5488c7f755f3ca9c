use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;

use hyplab::cox::{is_section_dominating, monomial_basis, CoxPresentation};
use hyplab::hyperbolicity::{
    best_epsilon, certified_genus_bound, certified_plan, classify_with, cor_main_bound, survey, Status,
};
use hyplab::oracles::{exhaustive_epsilon_check, h0_oracle};
use hyplab::{make_ambient, AmbientKind, AmbientThreefold, DivisorClass, Error, Params};

mod output;

use output::{Format, Report};

#[derive(Parser)]
#[command(
    name = "hyplab",
    version,
    about = "Algebraic hyperbolicity of very general surfaces in toric threefolds",
    allow_negative_numbers = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a surface class as Hyperbolic, NotHyperbolic, Open or Invalid.
    Classify(ClassArgs),
    /// Genus lower bound on a curve class, from given bundles or the certified plan.
    Bound {
        #[command(flatten)]
        class: ClassArgs,
        /// Curve class, as the divisor class it is cut by on the surface.
        #[arg(long = "C", num_args = 1.., required = true, allow_negative_numbers = true)]
        curve: Vec<i64>,
        /// A line bundle of the collection; repeat for several.
        #[arg(long = "L", num_args = 1.., action = ArgAction::Append, allow_negative_numbers = true)]
        bundles: Vec<i64>,
    },
    /// Certified epsilon, audited against every curve class up to the degree cap.
    Epsilon(ClassArgs),
    /// Check whether a collection of line bundles is section-dominating.
    SdCheck {
        #[command(flatten)]
        ambient: AmbientArgs,
        #[arg(long = "E", num_args = 1.., required = true, allow_negative_numbers = true)]
        eclass: Vec<i64>,
        #[arg(long = "L", num_args = 1.., action = ArgAction::Append, required = true, allow_negative_numbers = true)]
        bundles: Vec<i64>,
    },
    /// Number of global sections, by enumeration and by closed form.
    H0(ClassArgs),
    /// Classify every class in a box given as one `lo:hi` (or single value) per coefficient.
    Survey {
        #[command(flatten)]
        ambient: AmbientArgs,
        /// One `lo:hi` or single value per coefficient; put `--` before ranges starting with `-`.
        #[arg(allow_negative_numbers = true, value_name = "RANGE")]
        ranges: Vec<String>,
    },
    /// Run the built-in consistency checks.
    Selftest {
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Emit JSON.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long)]
    csv: bool,
    /// Include matrices, rays and certificates.
    #[arg(long, short)]
    verbose: bool,
    /// Degree cap for exhaustive checks.
    #[arg(long, default_value_t = 200)]
    cap: i64,
}

impl OutputArgs {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Human
        }
    }
}

#[derive(Args)]
struct AmbientArgs {
    /// Ambient name (p1p1p1, p2p1, fep1, blp3, p111n); omit with --ambient-file.
    #[arg(value_name = "AMBIENT")]
    kind: Option<String>,
    /// `e` for F_e x P1.
    #[arg(long)]
    e: Option<i64>,
    /// `n` for P(1,1,1,n).
    #[arg(long)]
    n: Option<i64>,
    /// Load the ambient from a JSON document instead.
    #[arg(long, value_name = "PATH")]
    ambient_file: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ClassArgs {
    #[command(flatten)]
    ambient: AmbientArgs,
    /// Class coefficients in the ambient's basis.
    #[arg(allow_negative_numbers = true, value_name = "COEFF")]
    coeffs: Vec<i64>,
    /// Multiple of H on P(1,1,1,n), instead of coefficients.
    #[arg(long)]
    m: Option<i64>,
    /// Reference ample class for degrees and epsilon.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    href: Option<Vec<i64>>,
}

/// Failure with the exit code it maps to.
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(msg) => Failure::Internal(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(Report, ExitCode), Failure>;

impl AmbientArgs {
    fn load(&self) -> Result<AmbientThreefold, Failure> {
        if let Some(path) = &self.ambient_file {
            if self.kind.as_deref().is_some_and(|k| k.parse::<AmbientKind>().is_ok()) {
                return Err(Failure::Usage("give either an ambient name or --ambient-file, not both".into()));
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            return Ok(AmbientThreefold::from_json(&text)?);
        }
        let name = self.kind.as_deref().ok_or_else(|| Failure::Usage("missing ambient name".into()))?;
        let kind: AmbientKind = name.parse()?;
        Ok(make_ambient(kind, Params { e: self.e, n: self.n })?)
    }

    /// With `--ambient-file` the first positional value is data, not a name.
    fn leading_value(&self) -> Option<&str> {
        self.ambient_file.as_ref().and(self.kind.as_deref())
    }
}

impl ClassArgs {
    fn resolve(&self) -> Result<(AmbientThreefold, DivisorClass), Failure> {
        let amb = self.ambient.load()?;
        let mut coeffs = self.coeffs.clone();
        if let Some(v) = self.ambient.leading_value() {
            let v = v.parse().map_err(|_| Failure::Usage(format!("bad coefficient '{v}'")))?;
            coeffs.insert(0, v);
        }
        if let Some(m) = self.m {
            if amb.kind != AmbientKind::P111n {
                return Err(Failure::Usage("--m applies to p111n only".into()));
            }
            if !coeffs.is_empty() {
                return Err(Failure::Usage("give either --m or coefficients".into()));
            }
            coeffs = vec![m, 0];
        } else if amb.kind == AmbientKind::P111n && coeffs.len() == 1 {
            coeffs.push(0);
        }
        let d = amb.class(&coeffs)?;
        if let Some(h) = &self.href {
            let h = amb.class(h)?;
            let mut custom = amb.clone();
            custom.reference_ample = h.coeffs().to_vec();
            let d = custom.class(d.coeffs())?;
            return Ok((custom, d));
        }
        Ok((amb, d))
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, Failure> {
    let bad = || Failure::Usage(format!("bad range '{s}', expected lo:hi or a single integer"));
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    match s.split_once(':') {
        Some((lo, hi)) => Ok(parse(lo)?..=parse(hi)?),
        None => parse(s).map(|v| v..=v),
    }
}

#[derive(Serialize)]
struct EpsilonReport {
    ambient: String,
    class: Vec<i64>,
    #[serde(flatten)]
    result: hyplab::hyperbolicity::EpsilonResult,
    audit: hyplab::oracles::EpsilonCheck,
    degree_cap: i64,
}

#[derive(Serialize)]
struct H0Report {
    ambient: String,
    class: Vec<i64>,
    dimension: usize,
    closed_form: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    monomials: Option<Vec<String>>,
}

#[derive(Serialize)]
struct PlanBoundReport {
    ambient: String,
    class: Vec<i64>,
    curve: Vec<i64>,
    plan: String,
    epsilon: hyplab::hyperbolicity::Rational,
    #[serde(serialize_with = "output::bigint_as_number")]
    genus_bound: num_bigint::BigInt,
    #[serde(serialize_with = "output::bigint_as_number")]
    degree: num_bigint::BigInt,
}

fn run(cmd: Command, bundles: Vec<Vec<i64>>) -> Outcome {
    match cmd {
        Command::Classify(args) => {
            let (amb, d) = args.resolve()?;
            let v = classify_with(&amb, &d, None)?;
            let code = if v.status == Status::Invalid { ExitCode::from(2) } else { ExitCode::SUCCESS };
            Ok((Report::Verdicts { rows: vec![v], verbose: args.ambient.out.verbose, single: true }, code))
        }
        Command::Bound { class, curve, .. } => {
            let (amb, d) = class.resolve()?;
            let c = amb.class(&curve)?;
            if bundles.is_empty() {
                let ev = certified_plan(&amb, &d, None)?.ok_or_else(|| {
                    Failure::Usage(format!("{} {d} has no certified plan; pass --L bundles explicitly", amb.id()))
                })?;
                let report = PlanBoundReport {
                    ambient: amb.id().to_string(),
                    class: d.coeffs().to_vec(),
                    curve: curve.clone(),
                    plan: ev.plan.name.clone(),
                    epsilon: (&ev.epsilon).into(),
                    genus_bound: certified_genus_bound(&amb, &d, &ev, &c)?,
                    degree: amb.curve_degree(&d, &c, None)?,
                };
                return Ok((Report::json_like(&report)?, ExitCode::SUCCESS));
            }
            let ls = bundles.iter().map(|l| amb.class(l)).collect::<hyplab::Result<Vec<_>>>()?;
            let cert = cor_main_bound(&amb, &d, &c, &ls)?;
            Ok((Report::json_like(&cert)?, ExitCode::SUCCESS))
        }
        Command::Epsilon(args) => {
            let (amb, d) = args.resolve()?;
            let cap = args.ambient.out.cap;
            let (eps, result) = best_epsilon(&amb, &d, None)?;
            let audit = exhaustive_epsilon_check(&amb, &d, &eps, cap)?;
            if !audit.passed {
                return Err(Failure::Internal(format!(
                    "certified epsilon {eps} for {} {d} fails the audit at {:?}",
                    amb.id(),
                    audit.violation
                )));
            }
            let report = EpsilonReport { ambient: amb.id().to_string(), class: d.coeffs().to_vec(), result, audit, degree_cap: cap };
            Ok((Report::json_like(&report)?, ExitCode::SUCCESS))
        }
        Command::SdCheck { ambient, eclass, .. } => {
            let amb = ambient.load()?;
            let e = amb.class(&eclass)?;
            let ls = bundles.iter().map(|l| amb.class(l)).collect::<hyplab::Result<Vec<_>>>()?;
            let rep = is_section_dominating(&amb, &e, &ls, ambient.out.verbose)?;
            Ok((Report::Sd(rep), ExitCode::SUCCESS))
        }
        Command::H0(args) => {
            let (amb, d) = args.resolve()?;
            let cox = CoxPresentation::for_ambient(&amb);
            let space = monomial_basis(&cox, &d);
            let oracle = h0_oracle(&amb, &d);
            if oracle != num_bigint::BigInt::from(space.dim()) {
                return Err(Failure::Internal(format!(
                    "enumeration gives {} sections but the closed form gives {oracle}",
                    space.dim()
                )));
            }
            let monomials = args.ambient.out.verbose.then(|| {
                space.basis.iter().map(|m| output::monomial_name(&cox, m)).collect()
            });
            let report = H0Report {
                ambient: amb.id().to_string(),
                class: d.coeffs().to_vec(),
                dimension: space.dim(),
                closed_form: oracle.to_string(),
                monomials,
            };
            Ok((Report::json_like(&report)?, ExitCode::SUCCESS))
        }
        Command::Survey { ambient, ranges } => {
            let amb = ambient.load()?;
            let leading = ambient.leading_value().map(str::to_string);
            if leading.is_none() && ranges.is_empty() {
                return Err(Failure::Usage("survey needs one range per coefficient".into()));
            }
            let mut bounds =
                leading.iter().chain(&ranges).map(|r| parse_range(r)).collect::<Result<Vec<_>, _>>()?;
            if amb.kind == AmbientKind::P111n && bounds.len() == 1 {
                bounds.push(0..=0);
            }
            let rows = survey(&amb, &bounds)?;
            Ok((Report::Verdicts { rows, verbose: ambient.out.verbose, single: false }, ExitCode::SUCCESS))
        }
        Command::Selftest { out } => {
            let report = hyplab::selftest::run(out.cap)?;
            let code = if report.passed { ExitCode::SUCCESS } else { ExitCode::from(3) };
            Ok((Report::SelfTest(report), code))
        }
    }
}

fn output_args(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Classify(a) | Command::Epsilon(a) | Command::H0(a) => &a.ambient.out,
        Command::Bound { class, .. } => &class.ambient.out,
        Command::SdCheck { ambient, .. } | Command::Survey { ambient, .. } => &ambient.out,
        Command::Selftest { out } => out,
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("HYPLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("HYPLAB_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Internal(e.to_string()))
}

/// Values of each `--L` occurrence, which the derive flattens into one list.
fn bundle_groups(matches: &ArgMatches) -> Vec<Vec<i64>> {
    let Some((_, sub)) = matches.subcommand() else {
        return Vec::new();
    };
    match sub.try_get_occurrences::<i64>("bundles") {
        Ok(Some(occ)) => occ.map(|o| o.copied().collect()).collect(),
        _ => Vec::new(),
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    let bundles = bundle_groups(&matches);
    let format = output_args(&cli.command).format();
    let result = configure_threads().and_then(|()| run(cli.command, bundles));
    match result {
        Ok((report, code)) => match report.render(format) {
            Ok(text) => {
                print!("{text}");
                code
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(3)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
