use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use argprof::frontend::{parse_program, print_program, validate, Program};
use argprof::interp::{parse_query, solve, Answer, InterpError, Limits};
use argprof::normalize::{compare, plan, rewrite};
use argprof::{run_analysis, AnalysisResult, FeatureOrder, ProfileReport};
use clap::{Parser, Subcommand};

/// Argument-profile analysis and argument normalization for moded logic
/// programs.
#[derive(Parser)]
#[command(name = "argprof", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the computed argument profiles of every predicate.
    Analyze {
        /// Program file, or `-` for standard input.
        file: String,
        #[arg(long)]
        json: bool,
        /// Also print every analysis round.
        #[arg(long)]
        trace: bool,
    },
    /// Reorder every predicate's arguments by its ordered profile.
    Normalize {
        file: String,
        /// Write the rewritten program here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check whether two predicates have the same ordered profile.
    Compare {
        file: String,
        pred1: String,
        pred2: String,
    },
    /// Run a query such as `?- app(cons(1,nil), nil, Z).` and print all answers.
    Run {
        file: String,
        query: String,
        /// Maximum number of selected atoms.
        #[arg(long, default_value_t = Limits::default().max_steps)]
        limit: u64,
    },
}

/// Exit status together with the message explaining it.
enum Failure {
    /// The program is rejected or evaluation fails.
    Invalid(String),
    /// The command line cannot be acted upon.
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

fn read_source(file: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if file == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(file).map(|s| text = s)
    };
    res.map_err(|e| Failure::Usage(format!("cannot read {file}: {e}")))?;
    Ok(text)
}

fn display_name(file: &str) -> &str {
    if file == "-" {
        "<stdin>"
    } else {
        file
    }
}

fn load(file: &str) -> Result<Program, Failure> {
    let src = read_source(file)?;
    let name = display_name(file);
    let program = parse_program(&src).map_err(|e| Failure::Invalid(format!("{name}:{e}\n")))?;
    let report = validate(&program);
    if !report.is_ok() {
        return Err(Failure::Invalid(report.render(name)));
    }
    Ok(program)
}

fn analyze(program: &Program) -> Result<AnalysisResult, Failure> {
    run_analysis(program, &FeatureOrder).map_err(|e| Failure::Invalid(format!("error: {e}\n")))
}

fn render_answers(answers: &[Answer]) -> String {
    if answers.is_empty() {
        return "no\n".into();
    }
    let blocks: Vec<String> = answers
        .iter()
        .map(|a| {
            if a.0.is_empty() {
                "yes\n".to_owned()
            } else {
                a.to_string()
            }
        })
        .collect();
    blocks.join("\n")
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Analyze { file, json, trace } => {
            let program = load(&file)?;
            let result = analyze(&program)?;
            let report = ProfileReport::build(&program, &result, &FeatureOrder)
                .map_err(|e| Failure::Invalid(format!("error: {e}\n")))?;
            if trace {
                // Keep standard output parseable when JSON is requested.
                if json {
                    eprint!("{}", result.trace.render());
                } else {
                    print!("{}", result.trace.render());
                }
            }
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render());
            }
        }
        Command::Normalize { file, output } => {
            let program = load(&file)?;
            let result = analyze(&program)?;
            let plan = plan(&program, &result.env, &FeatureOrder)
                .map_err(|e| Failure::Invalid(format!("error: {e}\n")))?;
            let rewritten =
                rewrite(&program, &plan).map_err(|e| Failure::Invalid(format!("error: {e}\n")))?;
            let text = print_program(&rewritten);
            match output {
                Some(path) => {
                    fs::write(&path, text).map_err(|e| {
                        Failure::Usage(format!("cannot write {}: {e}", path.display()))
                    })?;
                    print!("{}", plan.render());
                }
                None => {
                    eprint!("{}", plan.render());
                    print!("{text}");
                }
            }
        }
        Command::Compare { file, pred1, pred2 } => {
            let program = load(&file)?;
            let get = |name: &str| {
                program
                    .predicate(name)
                    .ok_or_else(|| Failure::Usage(format!("unknown predicate `{name}`")))
            };
            let (p, q) = (get(&pred1)?, get(&pred2)?);
            let result = analyze(&program)?;
            let verdict = compare(p, q, &result.env, &FeatureOrder)
                .map_err(|e| Failure::Invalid(format!("error: {e}\n")))?;
            println!("{verdict}");
        }
        Command::Run { file, query, limit } => {
            let program = load(&file)?;
            let query = parse_query(&query).map_err(|e| Failure::Usage(format!("query:{e}")))?;
            match solve(&program, &query, Limits::steps(limit)) {
                Ok(answers) => print!("{}", render_answers(&answers)),
                Err(InterpError::StepLimit { partial }) => {
                    if !partial.is_empty() {
                        print!("{}", render_answers(&partial));
                    }
                    return Err(Failure::Invalid(format!(
                        "error: step limit exceeded after {} answer(s)\n",
                        partial.len()
                    )));
                }
                Err(e @ (InterpError::UnknownPredicate(_) | InterpError::Arity { .. })) => {
                    return Err(Failure::Usage(format!("query: {e}")))
                }
                Err(e) => return Err(Failure::Invalid(format!("error: {e}\n"))),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Invalid(msg) => eprint!("{msg}"),
                Failure::Usage(msg) => eprintln!("argprof: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
