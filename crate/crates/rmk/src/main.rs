//! `rmk` — command-line front-end. JSON to stdout; exit 0 on success,
//! 1 when a check fails, 2 on usage errors.

use clap::{Args, Parser, Subcommand};
use rmk::kripke::{random_model, KripkeModel};
use rmk::lab;
use rmk::relation::Relation;
use rmk::semantics::{definable_closure, satisfies, subsumption, truth_set};
use rmk::simulation::{greatest_simulation, verify_simulation, SimMode, WitnessEngine};
use rmk::syntax::{parse_formula, print_formula, Formula, SimilarityType};
use rmk::translation::{print_fol, st_check, standard_translation};
use rmk::trials::TrialConfig;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "rmk",
    version,
    about = "Restorative modal logics over Kripke models"
)]
struct Cli {
    /// Pretty-print JSON output
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ModelArg {
    /// Model JSON file
    #[arg(long)]
    model: PathBuf,
}

#[derive(Args)]
struct FormulaArg {
    /// Formula text, e.g. "con (p0 & smile p1)"
    #[arg(long, conflicts_with = "formula_file")]
    formula: Option<String>,
    /// File containing the formula text
    #[arg(long)]
    formula_file: Option<PathBuf>,
}

#[derive(Args)]
struct LambdaArg {
    /// Comma-separated operator list, e.g. "smile,con"
    #[arg(long, default_value = "")]
    lambda: String,
}

#[derive(Args)]
struct SuiteConfig {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 6)]
    max_worlds: usize,
    #[arg(long, default_value_t = 2)]
    max_letters: u32,
    #[arg(long, default_value_t = 0.4)]
    edge_prob: f64,
    #[arg(long, default_value_t = 0.5)]
    letter_prob: f64,
    #[arg(long, default_value_t = 5)]
    max_depth: usize,
    #[arg(long, default_value_t = 1 << 20)]
    closure_cap: usize,
    /// Parallel trial workers
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl SuiteConfig {
    fn to_config(&self) -> TrialConfig {
        TrialConfig {
            seed: self.seed,
            trials: self.trials,
            max_worlds: self.max_worlds,
            max_letters: self.max_letters,
            edge_prob: self.edge_prob,
            letter_prob: self.letter_prob,
            max_depth: self.max_depth,
            closure_cap: self.closure_cap,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a formula at one world
    Check {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        world: usize,
    },
    /// Worlds satisfying a formula
    Truthset {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Greatest simulation for a similarity type
    SimGreatest {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long, default_value = "plain")]
        mode: String,
    },
    /// Check a candidate relation against the simulation conditions
    SimVerify {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long, default_value = "plain")]
        mode: String,
        /// Relation JSON file ({"pairs": [[w, v], ...]})
        #[arg(long)]
        relation: PathBuf,
    },
    /// Distinguishing formula for a pair outside the greatest simulation
    Witness {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Subsumption preorder from the definable closure
    Subsume {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long, default_value_t = 1 << 20)]
        cap: usize,
    },
    /// All definable truth sets with generating formulas
    Closure {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long, default_value_t = 1 << 20)]
        cap: usize,
    },
    /// Standard translation to first-order logic
    Translate {
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Modal vs. translated first-order evaluation
    StCheck {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        formula: FormulaArg,
        /// Restrict to one world (default: all)
        #[arg(long)]
        world: Option<usize>,
    },
    /// Run a property suite: hm, adequacy, symmetric, directed, st, union, witness
    Suite {
        name: String,
        #[command(flatten)]
        cfg: SuiteConfig,
    },
    /// Replay the golden example registry
    Examples,
    /// Run the principle square checks
    Principles {
        #[command(flatten)]
        cfg: SuiteConfig,
    },
    /// Emit a seeded random model
    Gen {
        #[arg(long, default_value_t = 4)]
        worlds: usize,
        #[arg(long, default_value_t = 2)]
        letters: u32,
        #[arg(long, default_value_t = 0.4)]
        edge_prob: f64,
        #[arg(long, default_value_t = 0.5)]
        letter_prob: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn load_model(arg: &ModelArg) -> Result<KripkeModel, Usage> {
    let text = std::fs::read_to_string(&arg.model)
        .map_err(|e| Usage(format!("cannot read {}: {e}", arg.model.display())))?;
    Ok(KripkeModel::from_json(&text)?)
}

fn load_formula(arg: &FormulaArg) -> Result<Formula, Usage> {
    let text = match (&arg.formula, &arg.formula_file) {
        (Some(t), None) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?,
        _ => {
            return Err(Usage(
                "provide exactly one of --formula / --formula-file".into(),
            ))
        }
    };
    Ok(parse_formula(text.trim())?)
}

fn parse_lambda(arg: &LambdaArg) -> Result<SimilarityType, Usage> {
    Ok(arg.lambda.parse()?)
}

fn emit(pretty: bool, value: &serde_json::Value) {
    let text = if pretty {
        serde_json::to_string_pretty(value).expect("json")
    } else {
        serde_json::to_string(value).expect("json")
    };
    println!("{text}");
}

fn run(cli: &Cli) -> Result<u8, Usage> {
    match &cli.cmd {
        Cmd::Check {
            model,
            formula,
            world,
        } => {
            let m = load_model(model)?;
            let phi = load_formula(formula)?;
            if *world >= m.n_worlds() {
                return Err(Usage(format!("world {world} out of range")));
            }
            let holds = satisfies(&m, *world, &phi);
            emit(
                cli.pretty,
                &json!({
                    "world": world, "formula": print_formula(&phi), "holds": holds,
                }),
            );
            Ok(0)
        }
        Cmd::Truthset { model, formula } => {
            let m = load_model(model)?;
            let phi = load_formula(formula)?;
            let worlds: Vec<usize> = truth_set(&m, &phi).worlds().collect();
            emit(
                cli.pretty,
                &json!({ "formula": print_formula(&phi), "worlds": worlds }),
            );
            Ok(0)
        }
        Cmd::SimGreatest {
            model,
            lambda,
            mode,
        } => {
            let m = load_model(model)?;
            let lambda = parse_lambda(lambda)?;
            let mode: SimMode = mode.parse()?;
            let g = greatest_simulation(&m, &lambda, &mode);
            emit(
                cli.pretty,
                &serde_json::from_str(&g.to_json()).expect("relation json"),
            );
            Ok(0)
        }
        Cmd::SimVerify {
            model,
            lambda,
            mode,
            relation,
        } => {
            let m = load_model(model)?;
            let lambda = parse_lambda(lambda)?;
            let mode: SimMode = mode.parse()?;
            let text = std::fs::read_to_string(relation)
                .map_err(|e| Usage(format!("cannot read {}: {e}", relation.display())))?;
            let rel = Relation::from_json(m.n_worlds(), &text)?;
            let report = verify_simulation(&m, &lambda, &mode, &rel);
            emit(
                cli.pretty,
                &serde_json::to_value(&report).expect("report json"),
            );
            Ok(if report.ok { 0 } else { 1 })
        }
        Cmd::Witness {
            model,
            lambda,
            from,
            to,
        } => {
            let m = load_model(model)?;
            let lambda = parse_lambda(lambda)?;
            if !lambda.is_restorative() || lambda.is_empty() {
                return Err(Usage(
                    "witnesses need a nonempty restorative --lambda".into(),
                ));
            }
            if *from >= m.n_worlds() || *to >= m.n_worlds() {
                return Err(Usage("pair out of range".into()));
            }
            let mut eng = WitnessEngine::new(&m, &lambda);
            match eng.witness(*from, *to) {
                Some(phi) => {
                    emit(
                        cli.pretty,
                        &json!({
                            "from": from, "to": to, "witness": print_formula(&phi),
                        }),
                    );
                    Ok(0)
                }
                None => {
                    emit(
                        cli.pretty,
                        &json!({
                            "from": from, "to": to, "witness": null, "similar": true,
                        }),
                    );
                    Ok(1)
                }
            }
        }
        Cmd::Subsume { model, lambda, cap } => {
            let m = load_model(model)?;
            let lambda = parse_lambda(lambda)?;
            let rel = subsumption(&m, &lambda, *cap)?;
            emit(
                cli.pretty,
                &serde_json::from_str(&rel.to_json()).expect("relation json"),
            );
            Ok(0)
        }
        Cmd::Closure { model, lambda, cap } => {
            let m = load_model(model)?;
            let lambda = parse_lambda(lambda)?;
            let fam = definable_closure(&m, &lambda, *cap)?;
            let sets: Vec<_> = (0..fam.len())
                .map(|i| {
                    json!({
                        "worlds": fam.sets()[i].worlds().collect::<Vec<_>>(),
                        "formula": print_formula(fam.generator(i)),
                    })
                })
                .collect();
            emit(cli.pretty, &json!({ "size": fam.len(), "sets": sets }));
            Ok(0)
        }
        Cmd::Translate { formula } => {
            let phi = load_formula(formula)?;
            let alpha = standard_translation(0, &phi);
            emit(
                cli.pretty,
                &json!({
                    "formula": print_formula(&phi), "fol": print_fol(&alpha),
                }),
            );
            Ok(0)
        }
        Cmd::StCheck {
            model,
            formula,
            world,
        } => {
            let m = load_model(model)?;
            let phi = load_formula(formula)?;
            let worlds: Vec<usize> = match world {
                Some(w) if *w >= m.n_worlds() => {
                    return Err(Usage(format!("world {w} out of range")))
                }
                Some(w) => vec![*w],
                None => m.worlds().collect(),
            };
            let disagreements: Vec<usize> = worlds
                .iter()
                .copied()
                .filter(|&w| !st_check(&m, w, &phi))
                .collect();
            let ok = disagreements.is_empty();
            emit(
                cli.pretty,
                &json!({
                    "formula": print_formula(&phi),
                    "checked": worlds,
                    "disagreements": disagreements,
                    "ok": ok,
                }),
            );
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Suite { name, cfg } => {
            let config = cfg.to_config();
            let report = match name.as_str() {
                "hm" => lab::hm_suite(&config, cfg.jobs),
                "adequacy" => lab::adequacy_suite(&config, cfg.jobs),
                "symmetric" => lab::symmetric_suite(&config, cfg.jobs),
                "directed" => lab::directed_suite(&config, cfg.jobs),
                "st" => lab::st_suite(&config, cfg.jobs),
                "union" => lab::union_suite(&config, cfg.jobs),
                "witness" => lab::witness_suite(&config, cfg.jobs),
                other => return Err(Usage(format!("unknown suite `{other}`"))),
            };
            emit(
                cli.pretty,
                &serde_json::to_value(&report).expect("report json"),
            );
            Ok(if report.ok() { 0 } else { 1 })
        }
        Cmd::Examples => {
            let report = lab::run_examples();
            emit(
                cli.pretty,
                &serde_json::to_value(&report).expect("report json"),
            );
            Ok(if report.ok() { 0 } else { 1 })
        }
        Cmd::Principles { cfg } => {
            let report = lab::principle_suite(&cfg.to_config());
            emit(
                cli.pretty,
                &serde_json::to_value(&report).expect("report json"),
            );
            Ok(if report.ok() { 0 } else { 1 })
        }
        Cmd::Gen {
            worlds,
            letters,
            edge_prob,
            letter_prob,
            seed,
        } => {
            if *worlds == 0 {
                return Err(Usage("--worlds must be at least 1".into()));
            }
            let m = random_model(*worlds, *letters, *edge_prob, *letter_prob, *seed);
            emit(
                cli.pretty,
                &serde_json::from_str(&m.to_json()).expect("model json"),
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
