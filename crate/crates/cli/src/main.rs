use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use combinekit::classify::filters::Filter;
use combinekit::classify::{
    build_lattice, separation_catalog, separation_report, filter_chain_demo, probe_certificate, membership_report, ProbeConfig,
};
use combinekit::diagonal::Diagonalizer;
use combinekit::formulas::to_dnf;
use combinekit::oracle::oracle_suite;
use combinekit::registry::Registry;
use combinekit::sets::Card;
use combinekit::spectra::DEFAULT_CAP;
use combinekit::{combine_decide, parse_formula, CombineOptions, Error, Method, TheoryHandle};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "combinekit", version, about = "Disjoint theory combination by spectra")]
struct Cli {
    /// Theory registry (JSON); the shipped catalog when absent.
    #[arg(long, env = "COMBINEKIT_CONFIG", global = true)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Brute-force bound on model size.
    #[arg(long = "K", default_value_t = 6, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, default_value_t = DEFAULT_CAP, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Satisfiability of a formula in one theory.
    Decide { theory: String, formula: String },
    /// Satisfiability over the disjoint union of two theories.
    Combine {
        theory1: String,
        theory2: String,
        formula: String,
        /// shiny, no, gentle, smcs, cs, nshiny:<n>, qg, qg:bitzero:<i,..>; auto when absent.
        #[arg(long)]
        method: Option<String>,
        /// Run the method even if the certificates do not meet its hypotheses.
        #[arg(long = "override")]
        override_hypotheses: bool,
    },
    /// Finite spectrum members up to a bound, plus aleph0 when decidable.
    Spectrum {
        theory: String,
        formula: String,
        #[arg(long, default_value_t = 6)]
        upto: u64,
    },
    /// Probe a theory's certificate, or print a fixed report.
    Classify {
        theory: Option<String>,
        #[arg(long, value_enum, conflicts_with = "theory")]
        report: Option<Report>,
        /// Lattice parameter.
        #[arg(long, default_value_t = 3)]
        n: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Depth of the filter demo.
        #[arg(long, default_value_t = 5)]
        depth: u32,
    },
    /// The class lattice with separating witnesses.
    Lattice {
        /// `default` (the registry) or `separating`.
        #[arg(long, default_value = "default")]
        catalog: String,
        #[arg(long, default_value_t = 3)]
        n: u64,
    },
    /// Prefix of the diagonal construction, one JSON state per round.
    Diagonal {
        #[arg(long, default_value = "T_leq_2")]
        theory: String,
        #[arg(long, default_value_t = 10)]
        rounds: u64,
    },
    /// Agreement of the procedures with brute-force enumeration.
    BruteCheck {
        /// Every registry theory when absent.
        #[arg(long)]
        theory: Option<String>,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Report {
    Membership,
    Separations,
    Filters,
}

enum Outcome {
    Sat,
    Unsat,
    Done,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Sat | Outcome::Done) => ExitCode::from(0),
        Ok(Outcome::Unsat) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn registry(cli: &Cli) -> Result<Registry, Error> {
    match &cli.config {
        Some(p) => Registry::from_path(p),
        None => Ok(Registry::default_catalog()),
    }
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("json values serialize"));
}

fn verdict(sat: bool) -> Outcome {
    if sat {
        Outcome::Sat
    } else {
        Outcome::Unsat
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let reg = registry(cli)?;
    let fmt = cli.format;
    match &cli.cmd {
        Cmd::Decide { theory, formula } => {
            let t = reg.resolve(theory)?;
            let f = parse_formula(formula)?;
            let mut sat = false;
            for c in to_dnf(&f) {
                if t.decide(&c)? {
                    sat = true;
                    break;
                }
            }
            match fmt {
                Some(Format::Text) => println!("{}", if sat { "sat" } else { "unsat" }),
                _ => emit(&json!({ "sat": sat, "theory": t.name() })),
            }
            Ok(verdict(sat))
        }
        Cmd::Combine { theory1, theory2, formula, method, override_hypotheses } => {
            let (t1, t2) = (reg.resolve(theory1)?, reg.resolve(theory2)?);
            let f = parse_formula(formula)?;
            let m = method.as_deref().map(Method::parse).transpose()?;
            let opts = CombineOptions { cap: cli.cap, override_hypotheses: *override_hypotheses };
            let v = combine_decide(&t1, &t2, &f, m.as_ref(), &opts)?;
            match fmt {
                Some(Format::Text) => {
                    println!("{} ({} as {})", if v.sat { "sat" } else { "unsat" }, v.method, v.order)
                }
                _ => emit(&serde_json::to_value(&v).expect("verdict serializes")),
            }
            Ok(verdict(v.sat))
        }
        Cmd::Spectrum { theory, formula, upto } => {
            let t = reg.resolve(theory)?;
            let cubes = to_dnf(&parse_formula(formula)?);
            let mut finite = Vec::new();
            for k in 1..=*upto {
                let mut hit = false;
                for c in &cubes {
                    if t.spec_finite(c, k)? {
                        hit = true;
                        break;
                    }
                }
                if hit {
                    finite.push(k);
                }
            }
            // aleph0 is reported only when every cube answers
            let mut inf = Some(false);
            for c in &cubes {
                match t.spec_inf(c) {
                    Ok(true) => {
                        inf = Some(true);
                        break;
                    }
                    Ok(false) => {}
                    Err(Error::CapabilityMissing { .. }) => inf = None,
                    Err(e) => return Err(e),
                }
            }
            match fmt {
                Some(Format::Text) => {
                    let mut items: Vec<String> = finite.iter().map(u64::to_string).collect();
                    if inf == Some(true) {
                        items.push(Card::Aleph0.to_string());
                    }
                    println!("{{{}}}", items.join(","));
                }
                _ => emit(&json!({ "theory": t.name(), "upto": upto, "finite": finite, "aleph0": inf })),
            }
            Ok(Outcome::Done)
        }
        Cmd::Classify { theory, report, n, samples, depth } => {
            let cfg = ProbeConfig { samples: *samples, max_card: cli.k, seed: cli.seed };
            let v = match (theory, report) {
                (Some(name), _) => {
                    let t = reg.resolve(name)?;
                    let reps = probe_certificate(&t, &cfg, *n, &Filter::Frechet)?;
                    if fmt == Some(Format::Text) {
                        for r in &reps {
                            println!("{:<14} {:<16} {}", r.flag, format!("{:?}", r.verdict), r.evidence);
                        }
                        return Ok(Outcome::Done);
                    }
                    json!({ "theory": t.name(), "probes": reps })
                }
                (None, Some(Report::Membership)) => json!(membership_report(&cfg)?),
                (None, Some(Report::Separations)) => json!(separation_report(*n, &cfg)?),
                (None, Some(Report::Filters)) => json!(filter_chain_demo(*depth)?),
                (None, None) => return Err(Error::InvalidParameter("classify needs a theory or --report".into())),
            };
            emit(&v);
            Ok(Outcome::Done)
        }
        Cmd::Lattice { catalog, n } => {
            let theories: Vec<TheoryHandle> = match catalog.as_str() {
                "default" => reg.all()?.into_iter().map(|(name, t)| t.labeled(&name)).collect(),
                "separating" => separation_catalog(*n)?.into_iter().map(|(t, _)| t).collect(),
                other => return Err(Error::Registry(format!("unknown catalog `{other}`"))),
            };
            let l = build_lattice(&theories, *n, &Filter::Frechet);
            match fmt.unwrap_or(Format::Dot) {
                Format::Dot => print!("{}", l.to_dot()),
                Format::Json => emit(&serde_json::to_value(&l).expect("lattice serializes")),
                Format::Text => {
                    for e in &l.edges {
                        println!("{} -> {}  {}", e.stronger, e.weaker, e.witness.as_deref().unwrap_or("-"));
                    }
                }
            }
            Ok(Outcome::Done)
        }
        Cmd::Diagonal { theory, rounds } => {
            if *rounds == 0 {
                return Err(Error::InvalidParameter("rounds must be at least 1".into()));
            }
            let mut d = Diagonalizer::new(reg.resolve(theory)?)?;
            for _ in 0..*rounds {
                d.round()?;
                let s = &d.state;
                match fmt {
                    Some(Format::Text) => println!(
                        "round {}: S={:?} sat={} unsat={} prom={} j={}",
                        s.rounds,
                        s.s_prefix,
                        s.sat.len(),
                        s.unsat.len(),
                        s.prom.len(),
                        s.j
                    ),
                    _ => emit(&json!({ "round": s.rounds, "hash": s.hash(), "state": s })),
                }
            }
            Ok(Outcome::Done)
        }
        Cmd::BruteCheck { theory, samples } => {
            let targets = match theory {
                Some(name) => vec![reg.resolve(name)?],
                None => reg.all()?.into_iter().map(|(name, t)| t.labeled(&name)).collect(),
            };
            let mut all_ok = true;
            for t in &targets {
                let r = oracle_suite(t, *samples, cli.k, cli.seed)?;
                all_ok &= r.passed();
                match fmt {
                    Some(Format::Json) => emit(&serde_json::to_value(&r).expect("report serializes")),
                    _ => println!(
                        "{} {}: {} checks, {} mismatches",
                        if r.passed() { "pass" } else { "FAIL" },
                        r.theory,
                        r.checks,
                        r.mismatches.len()
                    ),
                }
            }
            Ok(if all_ok { Outcome::Done } else { Outcome::Unsat })
        }
    }
}
