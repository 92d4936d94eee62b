//! Command-line front end. All numeric output is exact fraction strings;
//! exit codes for `separate`: 0 inseparable, 1 separated, 2 error.

use std::io::Read as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use matsep::conj::{
    cardinality_and_dimension, eval_full_generators, eval_tracezero_generators, profile_to_docs,
    InvariantProfile,
};
use matsep::error::{Error, Result};
use matsep::geometry::{classify_pair, is_triangularizable, triangularize, PairClassification};
use matsep::harness::{grid_minor_certification, invariance_suite, reduced_suite, sigma_suite};
use matsep::io::{parse_tuple, serialize_tuple, TupleDocument};
use matsep::matrix::{conj_act, MatTuple, TraceZeroTuple};
use matsep::reduced::{
    build_reduced_combinations, decide_equiv_full, decide_equiv_reduced, eval_reduced_profile,
    ReducedSetDoc, Scheme,
};
use matsep::semi::{decide_equiv_h, eval_h_generators};

#[derive(Parser)]
#[command(name = "matsep", about = "Exact invariants and separation for 2x2 matrix tuples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Action {
    Conj,
    ConjTracezero,
    Leftright,
}

#[derive(Clone, Copy, ValueEnum)]
enum SepAction {
    Conj,
    Leftright,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetChoice {
    Full,
    Reduced,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeChoice {
    Unit,
    Vandermonde,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Reduced,
    Minors,
    Invariance,
    Sigma,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an invariant profile on one tuple
    Invariants {
        #[arg(long, value_enum)]
        action: Action,
        #[arg(long, value_enum, default_value = "full")]
        set: SetChoice,
        /// Tuple JSON file, or "-" for standard input
        #[arg(long)]
        input: String,
    },
    /// Decide orbit-closure equivalence of two tuples
    Separate {
        #[arg(long, value_enum)]
        action: SepAction,
        #[arg(long, value_enum, default_value = "full")]
        set: SetChoice,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Classify an inseparable trace-zero pair by orbit-closure component
    Classify {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Test simultaneous triangularizability
    Triangularizable {
        #[arg(long)]
        input: String,
        /// Also emit a conjugating element and the conjugated tuple
        #[arg(long)]
        certificate: bool,
    },
    /// Emit the reduced separating set construction
    ReducedSet {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "unit")]
        scheme: SchemeChoice,
    },
    /// Emit generator-set sizes and orbit-space dimensions
    Sizes {
        #[arg(long)]
        n: usize,
    },
    /// Run a verification suite
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parse(e.to_string()))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
    }
}

fn load_tuple(path: &str) -> Result<MatTuple> {
    parse_tuple(&read_input(path)?)
}

fn print_profile(p: &InvariantProfile) {
    let doc = json!({
        "family": format!("{:?}", p.family),
        "entries": profile_to_docs(p),
    });
    println!("{}", serde_json::to_string(&doc).unwrap());
}

const SAMPLE_BOUND: i64 = 5;

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Invariants { action, set, input } => {
            let t = load_tuple(&input)?;
            let profile = match (action, set) {
                (Action::Conj, SetChoice::Full) => eval_full_generators(&t),
                (Action::Conj, SetChoice::Reduced) => {
                    let (tz, traces) = t.tracefree_part();
                    let mut p = if t.n() >= 3 {
                        let rset = build_reduced_combinations(t.n(), Scheme::UnitLevelSums)?;
                        eval_reduced_profile(&tz, &rset)?
                    } else {
                        eval_tracezero_generators(&tz)
                    };
                    let mut entries: Vec<_> = traces
                        .into_iter()
                        .enumerate()
                        .map(|(i, v)| (format!("tr({})", i + 1), v))
                        .collect();
                    entries.extend(p.entries.drain(..));
                    p.entries = entries;
                    p
                }
                (Action::ConjTracezero, SetChoice::Full) => {
                    eval_tracezero_generators(&TraceZeroTuple::new(t)?)
                }
                (Action::ConjTracezero, SetChoice::Reduced) => {
                    let tz = TraceZeroTuple::new(t)?;
                    let rset = build_reduced_combinations(tz.n(), Scheme::UnitLevelSums)?;
                    eval_reduced_profile(&tz, &rset)?
                }
                (Action::Leftright, _) => eval_h_generators(&t),
            };
            print_profile(&profile);
            Ok(ExitCode::SUCCESS)
        }
        Command::Separate { action, set, a, b } => {
            let ta = load_tuple(&a)?;
            let tb = load_tuple(&b)?;
            let (equiv, witness) = match action {
                SepAction::Conj => match set {
                    SetChoice::Full => decide_equiv_full(&ta, &tb)?,
                    SetChoice::Reduced => (decide_equiv_reduced(&ta, &tb)?, None),
                },
                SepAction::Leftright => decide_equiv_h(&ta, &tb)?,
            };
            let doc = json!({
                "equivalent": equiv,
                "witness": witness,
            });
            println!("{}", serde_json::to_string(&doc).unwrap());
            Ok(if equiv {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Classify { a, b } => {
            let ta = TraceZeroTuple::new(load_tuple(&a)?)?;
            let tb = TraceZeroTuple::new(load_tuple(&b)?)?;
            let class = classify_pair(&ta, &tb)?;
            let label = match class {
                PairClassification::NotEquivalent => "NotEquivalent",
                PairClassification::GraphClosure => "GraphClosure",
                PairClassification::ExtraComponentOnly => "ExtraComponentOnly",
                PairClassification::Both => "Both",
            };
            println!("{}", serde_json::to_string(&json!({"class": label})).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Triangularizable { input, certificate } => {
            let t = load_tuple(&input)?;
            let triangularizable = is_triangularizable(&t);
            let mut doc = json!({"triangularizable": triangularizable});
            if certificate && triangularizable {
                match triangularize(&t) {
                    Ok(g) => {
                        let conj = conj_act(&g, &t);
                        doc["certificate"] = json!({
                            "g": TupleDocument::from_tuple(
                                &MatTuple::new(vec![g.mat().clone()]).unwrap()
                            ).matrices[0],
                            "conjugated": serde_json::from_str::<serde_json::Value>(
                                &serialize_tuple(&conj)
                            ).unwrap(),
                        });
                    }
                    Err(Error::FieldExtensionRequired) => {
                        doc["certificate"] = json!("field extension required");
                    }
                    Err(e) => return Err(e),
                }
            }
            println!("{}", serde_json::to_string(&doc).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::ReducedSet { n, scheme } => {
            let scheme = match scheme {
                SchemeChoice::Unit => Scheme::UnitLevelSums,
                SchemeChoice::Vandermonde => Scheme::VandermondeLevelSums,
            };
            let set = build_reduced_combinations(n, scheme)?;
            println!(
                "{}",
                serde_json::to_string(&ReducedSetDoc::from_set(&set)).unwrap()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Sizes { n } => {
            let table = cardinality_and_dimension(n);
            // the published table row: five fields, fixed order
            let doc = json!({
                "S_n": table.s_n,
                "S_prime": table.s_prime,
                "dim_conj": table.dim_conj,
                "H_set": table.h_set,
                "dim_H": table.dim_h,
            });
            println!("{}", serde_json::to_string(&doc).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            n,
            trials,
            seed,
        } => {
            let report = match suite {
                Suite::Reduced => reduced_suite(seed, trials, n, SAMPLE_BOUND),
                Suite::Minors => grid_minor_certification(n, &[-1, 0, 1])?,
                Suite::Invariance => invariance_suite(seed, trials, n, SAMPLE_BOUND),
                Suite::Sigma => sigma_suite(seed, trials, n, SAMPLE_BOUND),
            };
            println!("{}", serde_json::to_string(&report).unwrap());
            Ok(if report.failures == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
