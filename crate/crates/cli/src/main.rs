use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hermform::catalog::{Catalog, LatticeRef};
use hermform::prover::{
    verify_entries, CaseId, CaseProver, CaseReport, LatticeReport, ProverConfig,
    ProverError, VerificationSummary,
};
use hermform::qform::{first_exception, represents, CongruenceFilter, QuadForm};
use hermform::report::Report;
use hermform::transfer::{match_transfer, transfer, MatchReport};

/// Exact verification of universal binary Hermitian lattices over imaginary
/// quadratic fields.
#[derive(Parser)]
#[command(name = "hermform", version)]
struct Cli {
    /// Catalog file to use instead of the built-in table.
    #[arg(long, global = true, value_name = "PATH")]
    catalog: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the catalog entries with their transfer forms.
    Catalog,
    /// Print the quaternary transfer form of a catalog entry.
    Transfer {
        /// Catalog selector such as `23:2`.
        selector: LatticeRef,
    },
    /// Find the first integer not represented by a form.
    Check {
        /// A form such as `x^2+y^2+z^2`, or a catalog selector.
        form: String,
        #[arg(long, default_value_t = 2000)]
        limit: u64,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Find the lexicographically smallest representation of n.
    Represent { form: String, n: u64 },
    /// Replay the universality argument for one integer.
    Prove {
        /// Case tag (`f72`, `f23`, ...) or catalog selector.
        case: CaseId,
        n: u64,
        #[arg(long, default_value_t = 5000)]
        genus_limit: u64,
    },
    /// Verify catalog lattices up to a bound.
    Verify {
        /// Verify every catalog entry.
        #[arg(long, conflicts_with = "case")]
        all: bool,
        /// Case tag or catalog selector.
        #[arg(required_unless_present = "all")]
        case: Option<String>,
        #[arg(long, default_value_t = 2000)]
        limit: u64,
        #[arg(long, default_value_t = 5000)]
        genus_limit: u64,
        /// Write the JSON report here.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FilterArgs {
    /// Only consider n in the given residue classes modulo this number.
    #[arg(long, requires = "residues")]
    modulus: Option<u64>,
    /// Comma-separated residues for --modulus.
    #[arg(long, value_delimiter = ',', requires = "modulus")]
    residues: Vec<u64>,
    /// Comma-separated divisors whose multiples are skipped.
    #[arg(long, value_delimiter = ',')]
    exclude: Vec<u64>,
}

impl FilterArgs {
    fn filter(&self) -> CongruenceFilter {
        let base = match self.modulus {
            Some(m) => CongruenceFilter::residues(m, &self.residues),
            None => CongruenceFilter::all(),
        };
        base.excluding(&self.exclude)
    }
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Success,
    Failure,
}

fn load_catalog(path: &Option<PathBuf>) -> Result<Catalog> {
    match path {
        Some(p) => Catalog::load(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(Catalog::builtin()),
    }
}

fn form_or_selector(text: &str, catalog: &Catalog) -> Result<QuadForm> {
    if let Ok(sel) = text.parse::<LatticeRef>() {
        return Ok(transfer(catalog.get(sel)?)?);
    }
    Ok(text.parse::<QuadForm>()?)
}

fn run(cli: Cli) -> Result<Verdict> {
    let catalog = load_catalog(&cli.catalog)?;
    match cli.command {
        Command::Catalog => {
            for e in catalog.entries() {
                let case = CaseId::for_lattice(&e.lattice)
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| "uncatalogued".into());
                println!(
                    "{:<6} {:<9} {:<40} {:<34} [{case}]",
                    e.selector.to_string(),
                    format!("Q(√-{})", e.lattice.ctx().m()),
                    e.lattice.label(),
                    transfer(&e.lattice)?.to_string(),
                );
            }
            Ok(Verdict::Success)
        }
        Command::Transfer { selector } => {
            let lattice = catalog.get(selector)?;
            let q = transfer(lattice)?;
            println!("{selector} {}: {q}", lattice.label());
            let Some(printed) = CaseId::for_lattice(lattice).and_then(CaseId::printed) else {
                return Ok(Verdict::Success);
            };
            match match_transfer(lattice, &printed.form(), 500) {
                Ok(MatchReport::SignedPermutation { substitution }) => {
                    println!("matches {} = {} via {substitution}", printed.name(), printed.text());
                    Ok(Verdict::Success)
                }
                Ok(MatchReport::RepresentedSets { limit }) => {
                    println!(
                        "represents the same integers up to {limit} as {} = {}",
                        printed.name(),
                        printed.text()
                    );
                    Ok(Verdict::Success)
                }
                Err(e) => {
                    println!("{e}");
                    Ok(Verdict::Failure)
                }
            }
        }
        Command::Check { form, limit, filter } => {
            let q = form_or_selector(&form, &catalog)?;
            let filter = filter.filter();
            match first_exception(&q, limit, &filter)? {
                None => {
                    println!("{q} represents every n ≤ {limit} with {filter}");
                    Ok(Verdict::Success)
                }
                Some(n) => {
                    println!("{q}: first exception {n} (limit {limit}, {filter})");
                    Ok(Verdict::Failure)
                }
            }
        }
        Command::Represent { form, n } => {
            let q = form_or_selector(&form, &catalog)?;
            match represents(&q, n)? {
                Some(w) => {
                    println!("{q} = {n} at {w}");
                    Ok(Verdict::Success)
                }
                None => {
                    println!("{q} does not represent {n}");
                    Ok(Verdict::Failure)
                }
            }
        }
        Command::Prove { case, n, genus_limit } => {
            if n == 0 {
                bail!("n must be positive");
            }
            let config = ProverConfig {
                genus_limit,
                ..ProverConfig::default()
            };
            let prover = CaseProver::build(case, &config)?;
            match prover.prove(n) {
                Ok(trace) => {
                    let w = trace.replay().context("trace replay")?;
                    println!("{trace}");
                    println!("replay: {} at {w} = {n}", trace.form);
                    Ok(Verdict::Success)
                }
                Err(e @ (ProverError::TraceFailed(_) | ProverError::IngredientFailed(_))) => {
                    println!("{e}");
                    Ok(Verdict::Failure)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify {
            all,
            case,
            limit,
            genus_limit,
            json,
        } => {
            let config = ProverConfig {
                limit,
                genus_limit,
                ..ProverConfig::default()
            };
            let summary = match (all, case) {
                (true, _) => verify_entries(catalog.entries(), &config)?,
                (false, Some(text)) => verify_one(&text, &catalog, &config)?,
                (false, None) => bail!("either --all or a case is required"),
            };
            print_summary(&summary);
            if let Some(path) = json {
                std::fs::write(&path, Report::new(summary.clone()).to_json())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(if summary.passed {
                Verdict::Success
            } else {
                Verdict::Failure
            })
        }
    }
}

/// A selector verifies that catalog entry; a case tag verifies the case and
/// the built-in lattices it covers.
fn verify_one(text: &str, catalog: &Catalog, config: &ProverConfig) -> Result<VerificationSummary> {
    if let Ok(sel) = text.parse::<LatticeRef>() {
        let entry = catalog
            .entries()
            .iter()
            .find(|e| e.selector == sel)
            .cloned()
            .ok_or_else(|| anyhow::anyhow!("no catalog entry {sel}"))?;
        return Ok(verify_entries(&[entry], config)?);
    }
    let case: CaseId = text.parse()?;
    let builtin = Catalog::builtin();
    let entries: Vec<_> = builtin
        .entries()
        .iter()
        .filter(|e| case.lattices().contains(&e.selector))
        .cloned()
        .collect();
    let summary = verify_entries(&entries, config)?;
    debug_assert!(summary.cases.iter().all(|c| c.case == case));
    Ok(summary)
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn print_case(c: &CaseReport) {
    let held = c.ingredients.iter().filter(|i| i.holds).count();
    println!(
        "case {:<16} {}  ingredients {held}/{}, traces {}/{}",
        c.case.to_string(),
        status(c.passed),
        c.ingredients.len(),
        c.proved,
        c.limit
    );
    for i in c.ingredients.iter().filter(|i| !i.holds) {
        println!("    failed: {} ({})", i.claim, i.detail);
    }
    for s in &c.scalings {
        if let (Some(p), Some(false)) = (&s.printed, s.printed_holds) {
            match &s.substitution {
                Some(u) => println!("    λ={}: printed {p} fails; using {u}", s.lambda),
                None => println!("    λ={}: printed {p} fails; no replacement found", s.lambda),
            }
        }
    }
    for f in c.failures.iter().take(5) {
        println!("    n={}: {}", f.n, f.reason);
    }
    if let Some(n) = c.first_exception {
        println!("    first exception {n}");
    }
}

fn print_lattice(l: &LatticeReport) {
    let how = match (&l.case, l.first_exception) {
        (_, Some(n)) => format!("first exception {n}"),
        (Some(c), None) => c.to_string(),
        (None, None) => "direct scan".into(),
    };
    println!("{:<6} {:<40} {}  {how}", l.selector.to_string(), l.label, status(l.passed));
}

fn print_summary(s: &VerificationSummary) {
    for c in &s.cases {
        print_case(c);
    }
    for l in &s.lattices {
        print_lattice(l);
    }
    println!(
        "{}/{} lattices verified up to {}",
        s.passed_lattices, s.total_lattices, s.config.limit
    );
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Success) => ExitCode::SUCCESS,
        Ok(Verdict::Failure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
