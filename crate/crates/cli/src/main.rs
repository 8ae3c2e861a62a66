use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use stratnet::correctness::*;
use stratnet::generate::{random_net, GenParams};
use stratnet::graph::parr_closure;
use stratnet::interactive::{interactive_report, InteractiveError};
use stratnet::io::{load_named, save, NameTable};
use stratnet::rewrite::{normalize_no_axiom_with_budget, normalize_with_budget, NormalizeError, Strategy, DEFAULT_STEP_BUDGET};
use stratnet::Net;

mod dot;

const OK: u8 = 0;
const FAILS: u8 = 1;
const INVALID: u8 = 2;
const UNDECIDED: u8 = 3;
const DISAGREE: u8 = 4;

#[derive(Parser)]
#[command(name = "stratnet", version, about = "Proof nets with paragraph modality: correctness, indexings, reduction")]
struct Cli {
    /// Human-readable reports instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads when the input is a directory.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file is a well-formed net.
    Validate {
        path: PathBuf,
        /// Print the net as a DOT graph.
        #[arg(long)]
        dot: bool,
    },
    /// Decide DR-correctness or proof-net status by switching enumeration.
    Check {
        #[arg(long, value_enum)]
        criterion: Criterion,
        path: PathBuf,
    },
    /// Solve for an indexing.
    Index {
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        /// Require all conclusions to share one index.
        #[arg(long)]
        strong: bool,
        path: PathBuf,
    },
    /// Decide membership in linear logic by levels.
    L3 {
        #[arg(long, value_enum, default_value = "all")]
        method: Method,
        path: PathBuf,
    },
    /// Eliminate cuts and write the resulting net.
    Normalize {
        #[arg(long, value_enum, default_value = "lo")]
        strategy: StrategyArg,
        /// Stop at the fixed point of every step but axiom steps.
        #[arg(long)]
        no_axiom: bool,
        /// Write the step trace with residues to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        path: PathBuf,
    },
    /// Generate a random sequentializable net.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        size: usize,
        #[arg(long, default_value_t = 0.0)]
        cut_bias: f64,
        #[arg(long, default_value_t = 0.2)]
        paragraph_bias: f64,
        #[arg(long, default_value_t = 0.2)]
        exponential_bias: f64,
        #[arg(long, default_value_t = 0.2)]
        box_bias: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the interactive tests against a cut-free net.
    Test {
        #[arg(long)]
        level: Option<i64>,
        path: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Criterion {
    Dr,
    Proofnet,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Plain,
    Exponential,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Indexing,
    Geometric,
    Interactive,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Lo,
    #[value(name = "in")]
    In,
    Level,
}

/// Result of one command on one input.
struct Report {
    code: u8,
    json: Value,
    text: String,
}

impl Report {
    fn new(code: u8, json: Value, text: impl Into<String>) -> Report {
        Report { code, json, text: text.into() }
    }

    fn error(code: u8, message: impl Into<String>) -> Report {
        let message = message.into();
        Report { code, json: json!({ "error": message }), text: format!("error: {message}") }
    }
}

struct Budgets {
    steps: u64,
    switchings: u64,
}

fn budgets() -> Result<Budgets, String> {
    match std::env::var("STRATNET_BUDGET") {
        Err(_) => Ok(Budgets { steps: DEFAULT_STEP_BUDGET, switchings: DEFAULT_SWITCHING_BUDGET }),
        Ok(v) => {
            let n: u64 = v.trim().parse().map_err(|_| format!("STRATNET_BUDGET must be a positive integer, got '{v}'"))?;
            Ok(Budgets { steps: n, switchings: n })
        }
    }
}

fn read_net(path: &Path) -> Result<(Net, NameTable), Report> {
    let bytes = fs::read(path).map_err(|e| Report::error(INVALID, format!("{}: {e}", path.display())))?;
    load_named(&bytes).map_err(|e| Report::error(INVALID, format!("{}: {e}", path.display())))
}

fn names_of(names: &NameTable, edges: &[stratnet::EdgeId]) -> Vec<String> {
    edges.iter().map(|&e| names.edge(e)).collect()
}

fn witness_json(w: &BalanceWitness, names: &NameTable) -> Value {
    json!({
        "cycle": names_of(names, &w.cycle.edges()),
        "links": w.cycle.steps.iter().map(|&(l, _)| names.link(l)).collect::<Vec<_>>(),
        "balance": w.balance,
        "flavor": w.flavor.name(),
    })
}

fn alignment_json(f: &AlignmentFailure, names: &NameTable) -> Value {
    match f {
        AlignmentFailure::Unbalanced(w) => json!({ "unbalanced": witness_json(w, names) }),
        AlignmentFailure::Conclusions { first, second, difference } => json!({
            "conclusions": [names.edge(*first), names.edge(*second)],
            "difference": difference,
        }),
    }
}

fn switching_json(c: &CyclicSwitching, names: &NameTable) -> Value {
    let choices: serde_json::Map<String, Value> =
        c.switching.choices.iter().map(|(&l, &k)| (names.link(l), json!(k))).collect();
    json!({
        "level": c.switching.level.map(|b| b.to_string()),
        "switching": choices,
        "cycle": names_of(names, &c.cycle),
    })
}

fn validate_cmd(path: &Path, dot: bool) -> Report {
    let (net, names) = match read_net(path) {
        Ok(n) => n,
        Err(r) => return r,
    };
    if dot {
        let text = dot::render(&net, &names);
        return Report::new(OK, json!({ "dot": text }), text);
    }
    let concl: Vec<String> = net.conclusion_labels().iter().map(|l| l.to_string()).collect();
    let text = format!(
        "valid: {} links, {} edges, {} boxes; conclusions {}",
        net.num_links(),
        net.num_edges(),
        net.num_boxes(),
        concl.join(", ")
    );
    let json = json!({
        "valid": true,
        "links": net.num_links(),
        "edges": net.num_edges(),
        "boxes": net.num_boxes(),
        "conclusions": concl,
    });
    Report::new(OK, json, text)
}

fn check_cmd(path: &Path, criterion: Criterion, b: &Budgets) -> Report {
    let (net, names) = match read_net(path) {
        Ok(n) => n,
        Err(r) => return r,
    };
    let dr = match is_dr_correct_brute(&net, b.switchings) {
        Ok(v) => v,
        Err(e) => return Report::new(UNDECIDED, json!({ "undecided": e.to_string() }), format!("undecided: {e}")),
    };
    if let Some(w) = &dr.witness {
        let text = format!("not DR-correct: cyclic switching through {}", names_of(&names, &w.cycle).join(" "));
        return Report::new(FAILS, json!({ "holds": false, "reason": "cyclic switching", "witness": switching_json(w, &names) }), text);
    }
    if let Criterion::Dr = criterion {
        return Report::new(OK, json!({ "holds": true }), "DR-correct");
    }
    match strong_indexing(&net) {
        Ok(Ok(_)) => Report::new(OK, json!({ "holds": true }), "proof net"),
        Ok(Err(f)) => Report::new(
            FAILS,
            json!({ "holds": false, "reason": "no strong indexing", "witness": alignment_json(&f, &names) }),
            format!("not a proof net: {f}"),
        ),
        Err(e) => Report::error(INVALID, e.to_string()),
    }
}

fn index_cmd(path: &Path, flavor: FlavorArg, strong: bool) -> Report {
    let (net, names) = match read_net(path) {
        Ok(n) => n,
        Err(r) => return r,
    };
    let flavor = match flavor {
        FlavorArg::Plain => Flavor::Plain,
        FlavorArg::Exponential => Flavor::Exponential,
    };
    let solved = if strong {
        solve_aligned(&net, flavor)
    } else {
        solve_indexing(&net, flavor).map_err(AlignmentFailure::Unbalanced)
    };
    match solved {
        Ok(ix) => {
            let mut text = format!("{flavor} indexing:");
            for (&e, v) in &ix.assignment {
                let _ = write!(text, "\n  {} = {v}", names.edge(e));
            }
            Report::new(OK, ix.to_json(|e| names.edge(e)), text)
        }
        Err(f) => Report::new(FAILS, alignment_json(&f, &names), format!("no {flavor} indexing: {f}")),
    }
}

fn l3_cmd(path: &Path, method: Method, b: &Budgets) -> Report {
    let (net, names) = match read_net(path) {
        Ok(n) => n,
        Err(r) => return r,
    };
    if !is_dr_correct_fast(&net) {
        return Report::new(FAILS, json!({ "member": false, "reason": "not DR-correct" }), "not in L3: not DR-correct");
    }
    let mut verdicts = serde_json::Map::new();
    let mut text = String::new();
    let mut seen: Vec<bool> = Vec::new();
    if matches!(method, Method::Indexing | Method::All) {
        let r = l3_indexing(&net).expect("checked DR-correct, loaded nets have formula conclusions");
        let member = r.is_ok();
        let mut v = json!({ "member": member });
        match &r {
            Ok(ix) => v["indexing"] = ix.to_json(|e| names.edge(e)),
            Err(f) => v["witness"] = alignment_json(f, &names),
        }
        let _ = writeln!(text, "indexing: {}", if member { "member".into() } else { format!("non-member, {}", r.unwrap_err()) });
        verdicts.insert("indexing".into(), v);
        seen.push(member);
    }
    if matches!(method, Method::Geometric | Method::All) {
        let g = is_l3_geometric(&net).expect("checked DR-correct");
        let mut v = json!({ "member": g.member });
        if let Some(w) = &g.witness {
            v["witness"] = witness_json(w, &names);
        }
        let _ = writeln!(
            text,
            "geometric: {}",
            match &g.witness {
                None => "member".into(),
                Some(w) => format!("non-member, {w}"),
            }
        );
        verdicts.insert("geometric".into(), v);
        seen.push(g.member);
    }
    if matches!(method, Method::Interactive | Method::All) {
        if net.has_cuts() {
            if method == Method::Interactive {
                return Report::error(INVALID, "the interactive method needs a cut-free net; run `normalize` first");
            }
            verdicts.insert("interactive".into(), json!({ "skipped": "net has cuts" }));
            let _ = writeln!(text, "interactive: skipped, net has cuts");
        } else {
            let closed = parr_closure(&net).expect("loaded nets have formula conclusions");
            match interactive_report(&closed, None, b.steps) {
                Ok(r) => {
                    let member = r.passed();
                    let failing: Vec<i64> = r.levels.iter().filter(|l| !l.pass).map(|l| l.k).collect();
                    let _ = writeln!(
                        text,
                        "interactive: {}",
                        if member { "member".into() } else { format!("non-member, failing levels {failing:?}") }
                    );
                    verdicts.insert("interactive".into(), json!({ "member": member, "report": r.to_json() }));
                    seen.push(member);
                }
                Err(InteractiveError::Normalize(NormalizeError::Budget(n))) => {
                    return Report::new(UNDECIDED, json!({ "undecided": format!("step budget of {n} exhausted") }), "undecided: step budget exhausted");
                }
                Err(e) => return Report::error(INVALID, e.to_string()),
            }
        }
    }
    let member = seen.first().copied().unwrap_or(false);
    let agree = seen.iter().all(|&m| m == member);
    let code = if !agree {
        DISAGREE
    } else if member {
        OK
    } else {
        FAILS
    };
    if !agree {
        text.push_str("methods disagree\n");
    }
    let json = json!({ "member": member, "agree": agree, "methods": verdicts });
    Report::new(code, json, text.trim_end().to_string())
}

fn normalize_cmd(
    path: &Path,
    strategy: StrategyArg,
    no_axiom: bool,
    trace: Option<&Path>,
    output: Option<&Path>,
    b: &Budgets,
) -> Report {
    let (net, _) = match read_net(path) {
        Ok(n) => n,
        Err(r) => return r,
    };
    let strategy = match strategy {
        StrategyArg::Lo => Strategy::LeftmostOutermost,
        StrategyArg::In => Strategy::Innermost,
        StrategyArg::Level => Strategy::ByLevel,
    };
    let result = if no_axiom {
        normalize_no_axiom_with_budget(&net, b.steps)
    } else {
        normalize_with_budget(&net, strategy, b.steps)
    };
    let (nf, t) = match result {
        Ok(r) => r,
        Err(NormalizeError::Budget(n)) => {
            return Report::new(UNDECIDED, json!({ "undecided": format!("step budget of {n} exhausted") }), "undecided: step budget exhausted")
        }
        Err(e) => return Report::error(INVALID, e.to_string()),
    };
    if let Some(p) = trace {
        let bytes = serde_json::to_vec_pretty(&t.to_json()).expect("traces serialize");
        if let Err(e) = fs::write(p, bytes) {
            return Report::error(INVALID, format!("{}: {e}", p.display()));
        }
    }
    write_net(&nf.compact(), output)
}

fn write_net(net: &Net, output: Option<&Path>) -> Report {
    let bytes = save(net);
    match output {
        Some(p) => match fs::write(p, &bytes) {
            Ok(()) => Report::new(OK, Value::Null, String::new()),
            Err(e) => Report::error(INVALID, format!("{}: {e}", p.display())),
        },
        None => {
            let text = String::from_utf8(bytes).expect("documents are UTF-8");
            Report::new(OK, Value::Null, text.trim_end().to_string())
        }
    }
}

fn test_cmd(path: &Path, level: Option<i64>, b: &Budgets) -> Report {
    let (net, _) = match read_net(path) {
        Ok(n) => n,
        Err(r) => return r,
    };
    if net.has_cuts() {
        return Report::error(INVALID, "tests need a cut-free net; run `normalize` first");
    }
    let n = net.conclusions().len();
    if n > 1 {
        eprintln!("note: {}: joining {n} conclusions with par links", path.display());
    }
    let closed = parr_closure(&net).expect("loaded nets have formula conclusions");
    let levels = level.map(|k| vec![k]);
    match interactive_report(&closed, levels.as_deref(), b.steps) {
        Ok(r) => {
            let mut text = format!("tests on {}", r.formula.as_ref().map(|f| f.to_string()).unwrap_or_default());
            for l in &r.levels {
                let _ = write!(
                    text,
                    "\n  level {}: {}, {} swapped sites{}",
                    l.k,
                    if l.pass { "pass" } else { "fail" },
                    l.swapped_sites,
                    if l.below { ", below" } else { "" }
                );
            }
            Report::new(if r.passed() { OK } else { FAILS }, r.to_json(), text)
        }
        Err(InteractiveError::Normalize(NormalizeError::Budget(n))) => {
            Report::new(UNDECIDED, json!({ "undecided": format!("step budget of {n} exhausted") }), "undecided: step budget exhausted")
        }
        Err(e) => Report::error(INVALID, e.to_string()),
    }
}

/// Input files: the path itself, or the `.json` files of a directory.
fn inputs(path: &Path) -> Result<Vec<PathBuf>, String> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| format!("{}: {e}", path.display()))?
        .filter_map(|d| d.ok().map(|d| d.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn run_files(path: &Path, jobs: usize, pretty: bool, f: &(dyn Fn(&Path) -> Report + Sync)) -> u8 {
    let files = match inputs(path) {
        Ok(fs) => fs,
        Err(e) => return emit(&Report::error(INVALID, e), pretty),
    };
    if !path.is_dir() {
        return emit(&f(&files[0]), pretty);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => return emit(&Report::error(INVALID, e.to_string()), pretty),
    };
    let reports: Vec<Report> = pool.install(|| files.par_iter().map(|p| f(p)).collect());
    let mut code = OK;
    for (p, r) in files.iter().zip(&reports) {
        if pretty {
            println!("{}: {}", p.display(), r.text);
        } else {
            println!("{}", json!({ "file": p.display().to_string(), "exit": r.code, "report": r.json }));
        }
        code = code.max(r.code);
    }
    code
}

fn emit(r: &Report, pretty: bool) -> u8 {
    let text = if pretty || r.json.is_null() { r.text.clone() } else { r.json.to_string() };
    if !text.is_empty() {
        if r.code == INVALID {
            eprintln!("{text}");
        } else {
            println!("{text}");
        }
    }
    r.code
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let b = match budgets() {
        Ok(b) => b,
        Err(e) => return ExitCode::from(emit(&Report::error(INVALID, e), cli.pretty)),
    };
    let (pretty, jobs) = (cli.pretty, cli.jobs);
    let code = match cli.command {
        Command::Validate { path, dot } => run_files(&path, jobs, pretty, &|p| validate_cmd(p, dot)),
        Command::Check { criterion, path } => run_files(&path, jobs, pretty, &|p| check_cmd(p, criterion, &b)),
        Command::Index { flavor, strong, path } => run_files(&path, jobs, pretty, &|p| index_cmd(p, flavor, strong)),
        Command::L3 { method, path } => run_files(&path, jobs, pretty, &|p| l3_cmd(p, method, &b)),
        Command::Test { level, path } => run_files(&path, jobs, pretty, &|p| test_cmd(p, level, &b)),
        Command::Normalize { strategy, no_axiom, trace, output, path } => {
            emit(&normalize_cmd(&path, strategy, no_axiom, trace.as_deref(), output.as_deref(), &b), pretty)
        }
        Command::Gen { seed, size, cut_bias, paragraph_bias, exponential_bias, box_bias, output } => {
            let params = GenParams { size, box_bias, paragraph_bias, exponential_bias, cut_bias };
            emit(&write_net(&random_net(seed, &params).compact(), output.as_deref()), pretty)
        }
    };
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directory_inputs_are_sorted_json_files() {
        let dir = std::env::temp_dir().join(format!("stratnet-inputs-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        for name in ["b.json", "a.json", "notes.txt"] {
            fs::write(dir.join(name), "{}").unwrap();
        }
        let got = inputs(&dir).unwrap();
        fs::remove_dir_all(&dir).unwrap();
        let names: Vec<_> = got.iter().map(|p| p.file_name().unwrap().to_str().unwrap().to_string()).collect();
        assert_eq!(names, ["a.json", "b.json"]);
    }

    #[test]
    fn single_file_is_its_own_input() {
        let p = Path::new("missing.json");
        assert_eq!(inputs(p).unwrap(), [p.to_path_buf()]);
    }

    #[test]
    fn read_errors_are_invalid_input() {
        let r = read_net(Path::new("/nonexistent/net.json")).unwrap_err();
        assert_eq!(r.code, INVALID);
        assert!(r.json["error"].as_str().unwrap().contains("net.json"));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
