//! `hs`: command line front end.
//!
//! Exit status 0 means an affirmative answer, 1 a negative one (false, UNSAT,
//! undecidable, unknown) and 2 a usage or input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hs_core::atlas::covering_edges;
use hs_core::{
    certify_undefinability, check_certificate, classify, encode_fragment, enumerate_fragments, hasse_dot,
    largest_f_bisimulation, load_automaton, load_model, mc_periodic, parse_formula, sat_bbll,
    sat_bounded_finite, save_certificate, default_rounds, ClassContext, Domain, FiniteEvaluator, Formula,
    Fragment, Interval, IntervalModel, Modality, SatResult,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "hs", version, about = "Interval temporal logic toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    /// Strongly discrete linear orders
    Sd,
    /// The natural numbers
    Nat,
}

impl From<Class> for ClassContext {
    fn from(c: Class) -> Self {
        match c {
            Class::Sd => ClassContext::StronglyDiscrete,
            Class::Nat => ClassContext::Naturals,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of a formula
    Parse { formula: String },
    /// Evaluate a formula on an interval of a model
    Mc {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        interval: Vec<u64>,
        #[arg(long)]
        formula: String,
        /// Widening rounds for periodic models (default: modal depth + 2)
        #[arg(long)]
        rounds: Option<usize>,
    },
    /// Decide satisfiability of a B iB L iL formula, or search finite models
    Sat {
        #[arg(required_unless_present = "file", conflicts_with = "file")]
        formula: Option<String>,
        /// Read the formula from a file; the certificate goes to FILE.cert.ism
        #[arg(long)]
        file: Option<PathBuf>,
        /// Search finite models up to this largest point instead
        #[arg(long)]
        finite: Option<u64>,
        /// Re-check the certificate before printing it
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complexity of satisfiability for a fragment, e.g. "iA B" or "iAB"
    Classify {
        fragment: String,
        #[arg(long, value_enum, default_value = "sd")]
        class: Class,
    },
    /// All fragment classes with their complexity
    Atlas {
        #[arg(long, value_enum, default_value = "sd")]
        class: Class,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Encode a counter automaton into AE or iAB
    Encode {
        #[arg(long)]
        ica: PathBuf,
        #[arg(long, default_value = "AE")]
        target: String,
    },
    /// Largest bisimulation between two finite models, or an undefinability check
    Bisim {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        fragment: String,
        /// Check that <X>p holds at [x,y] on the left, fails at [x',y'] on the
        /// right, and the two are bisimilar
        #[arg(long, num_args = 6, value_names = ["X", "P", "x", "y", "x'", "y'"])]
        certify: Option<Vec<String>>,
    },
    /// Time-reversal image of a formula or fragment
    Mirror { text: String },
}

type Outcome = Result<bool, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn formula(text: &str) -> Result<Formula, String> {
    parse_formula(text).map_err(|e| e.to_string())
}

fn model(path: &Path) -> Result<IntervalModel, String> {
    load_model(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn finite_model(path: &Path) -> Result<IntervalModel, String> {
    let m = model(path)?;
    match m.domain {
        Domain::Finite { .. } => Ok(m),
        Domain::UltimatelyPeriodic(_) => Err(format!("{}: expected a finite model", path.display())),
    }
}

fn interval(x: u64, y: u64) -> Result<Interval, String> {
    Interval::try_new(x, y).ok_or_else(|| format!("[{x},{y}] is not an interval"))
}

/// Space separated tokens (`iA B`) or run together (`iAB`).
fn fragment(text: &str) -> Result<Fragment, String> {
    let text = text.trim();
    if text.contains(' ') {
        return text.parse().map_err(|e: hs_core::ParseError| e.to_string());
    }
    let mut out = Fragment::empty();
    let mut rest = text;
    while !rest.is_empty() {
        let len = if rest.starts_with('i') { 2 } else { 1 };
        let token = rest.get(..len).ok_or_else(|| format!("bad fragment `{text}`"))?;
        out.insert(token.parse::<Modality>().map_err(|_| format!("bad fragment `{text}`"))?);
        rest = &rest[len..];
    }
    Ok(out)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Parse { formula: text } => {
            println!("{}", formula(&text)?);
            Ok(true)
        }
        Command::Mc { model: path, interval: xy, formula: text, rounds } => {
            let m = model(&path)?;
            let i = interval(xy[0], xy[1])?;
            let phi = formula(&text)?;
            if !m.domain.contains(i) {
                return Err(format!("{i} is outside the model"));
            }
            let value = match m.domain {
                Domain::Finite { .. } => FiniteEvaluator::new(&m, &phi).holds(i),
                Domain::UltimatelyPeriodic(_) => {
                    match mc_periodic(&m, i, &phi, rounds.unwrap_or_else(|| default_rounds(&phi))) {
                        Ok(v) => v,
                        Err(e) => {
                            println!("unknown");
                            eprintln!("{e}");
                            return Ok(false);
                        }
                    }
                }
            };
            println!("{value}");
            Ok(value)
        }
        Command::Sat { formula: text, file, finite, verify, out } => {
            let text = match &file {
                Some(path) => read(path)?,
                None => text.expect("clap requires a formula or --file"),
            };
            let phi = formula(&text)?;
            let result = match finite {
                Some(n) => sat_bounded_finite(&phi, n),
                None => sat_bbll(&phi).map_err(|e| e.to_string())?,
            };
            match result {
                SatResult::Sat { model, witness } => {
                    if verify && !check_certificate(&phi, &model, witness) {
                        return Err(format!("certificate failed verification at {witness}"));
                    }
                    println!("SAT");
                    println!("witness {} {}", witness.x, witness.y);
                    let target = out.or_else(|| file.map(|f| PathBuf::from(format!("{}.cert.ism", f.display()))));
                    if let Some(target) = target {
                        fs::write(&target, save_certificate(&model, witness))
                            .map_err(|e| format!("{}: {e}", target.display()))?;
                        eprintln!("certificate written to {}", target.display());
                    }
                    Ok(true)
                }
                SatResult::Unsat => {
                    println!("UNSAT");
                    Ok(false)
                }
                SatResult::Unknown(reason) => {
                    println!("UNKNOWN");
                    eprintln!("{reason}");
                    Ok(false)
                }
            }
        }
        Command::Classify { fragment: text, class } => {
            let label = classify(&fragment(&text)?, class.into()).map_err(|e| e.to_string())?;
            println!("{label}");
            Ok(label.is_decidable())
        }
        Command::Atlas { class, format } => {
            let ctx: ClassContext = class.into();
            match format {
                Format::Dot => print!("{}", hasse_dot(ctx)),
                Format::Jsonl => atlas_jsonl(ctx)?,
            }
            Ok(true)
        }
        Command::Encode { ica, target } => {
            let a = load_automaton(&read(&ica)?).map_err(|e| format!("{}: {e}", ica.display()))?;
            let phi = encode_fragment(&a, &fragment(&target)?).map_err(|e| e.to_string())?;
            println!("{phi}");
            Ok(true)
        }
        Command::Bisim { left, right, fragment: text, certify } => {
            let (m, m2) = (finite_model(&left)?, finite_model(&right)?);
            let f = fragment(&text)?;
            match certify {
                Some(args) => {
                    let x: Modality = args[0].parse().map_err(|e: hs_core::ParseError| e.to_string())?;
                    let nums: Vec<u64> = args[2..]
                        .iter()
                        .map(|s| s.parse().map_err(|_| format!("`{s}` is not a point")))
                        .collect::<Result<_, _>>()?;
                    let (i, i2) = (interval(nums[0], nums[1])?, interval(nums[2], nums[3])?);
                    let ok = certify_undefinability(x, &f, &m, &m2, i, i2, &args[1]);
                    println!("{}", if ok { "certified" } else { "not certified" });
                    Ok(ok)
                }
                None => {
                    let z = largest_f_bisimulation(&m, &m2, &f);
                    for (i, j) in &z.pairs {
                        println!("{i} {j}");
                    }
                    Ok(!z.is_empty())
                }
            }
        }
        Command::Mirror { text } => {
            match fragment(&text) {
                Ok(f) if !f.is_empty() => println!("{}", f.mirror()),
                _ => println!("{}", formula(&text)?.mirror()),
            }
            Ok(true)
        }
    }
}

#[derive(Serialize)]
struct AtlasRow {
    fragment: String,
    modalities: Vec<String>,
    label: String,
    /// Classes covering this one in the expressiveness order.
    covered_by: Vec<String>,
}

fn atlas_jsonl(ctx: ClassContext) -> Result<(), String> {
    let classes = enumerate_fragments();
    let edges = covering_edges(&classes);
    for (k, f) in classes.iter().enumerate() {
        let row = AtlasRow {
            fragment: f.compact_name(),
            modalities: f.iter().map(|m| m.token()).collect(),
            label: classify(f, ctx).map_err(|e| e.to_string())?.to_string(),
            covered_by: edges.iter().filter(|(a, _)| *a == k).map(|&(_, b)| classes[b].compact_name()).collect(),
        };
        println!("{}", serde_json::to_string(&row).map_err(|e| e.to_string())?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
