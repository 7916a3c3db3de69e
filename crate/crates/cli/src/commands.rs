use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use umtree::engine::RunStats;
use umtree::phylo::{breakup, displays, parse_forest, to_newick, Atom, BreakupMode, PhyloTree};
use umtree::supertree::generate::{compatible_forest, incompatible_forest};
use umtree::supertree::{
    apply_nested_taxa, attach_labels, cp_build, enumerate_supertrees, explain_conflict, greedy_forest, necessity,
    nested_preprocess, parse_sidecar, BuildResult, Forest, SideConstraint, SupertreeError, SupertreeModel,
};

use super::{Command, ModelArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Incompatible(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Incompatible(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Incompatible(m) | CliError::Precondition(m) => f.write_str(m),
        }
    }
}

impl From<SupertreeError> for CliError {
    fn from(e: SupertreeError) -> Self {
        let msg = e.to_string();
        match e {
            SupertreeError::NotCompatible | SupertreeError::NoConflict | SupertreeError::InconsistentSides => {
                CliError::Precondition(msg)
            }
            SupertreeError::Nested(_) => CliError::Incompatible(msg),
            _ => CliError::Usage(msg),
        }
    }
}

type CliResult = Result<u8, CliError>;

pub fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::Build { model, out } => cmd_build(&model, out.as_deref()),
        Command::Greedy { model, out } => cmd_greedy(&model, out.as_deref()),
        Command::Necessity { model, atom } => cmd_necessity(&model, &atom),
        Command::Explain { model } => cmd_explain(&model),
        Command::Breakup { files, soft } => cmd_breakup(&files, mode(soft)),
        Command::Check { supertree, files } => cmd_check(&supertree, &files),
        Command::Enumerate { model, limit } => cmd_enumerate(&model, limit),
        Command::Gen {
            leaves,
            trees,
            prune,
            seed,
            out,
        } => cmd_gen(leaves, trees, prune, seed, out.as_deref()),
        Command::Bench {
            sizes,
            trees,
            repeats,
            seed,
        } => cmd_bench(&sizes, trees, repeats, seed),
    }
}

fn mode(soft: bool) -> BreakupMode {
    if soft {
        BreakupMode::Soft
    } else {
        BreakupMode::Hard
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_trees(files: &[PathBuf]) -> Result<Vec<PhyloTree>, CliError> {
    let mut out = Vec::new();
    for path in files {
        let text = read_text(path)?;
        let trees = parse_forest(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        out.extend(trees);
    }
    if out.is_empty() {
        return Err(CliError::Usage("no trees in the input".into()));
    }
    Ok(out)
}

fn read_sides(path: Option<&Path>) -> Result<Vec<SideConstraint>, CliError> {
    match path {
        None => Ok(Vec::new()),
        Some(p) => parse_sidecar(&read_text(p)?).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Usage(format!("stdout: {e}")))
        }
    }
}

fn has_taxa(trees: &[PhyloTree]) -> bool {
    trees.iter().any(|t| !t.internal_labels().is_empty())
}

#[derive(Serialize)]
struct StatsReport {
    n: usize,
    variables: u64,
    propagators: u64,
    wakes: u64,
    search_nodes: u64,
    build_ms: f64,
    solve_ms: f64,
    result: &'static str,
}

impl StatsReport {
    fn new(model: &SupertreeModel, build_ms: f64, solve_ms: f64, compatible: bool) -> Self {
        let s: RunStats = model.stats();
        StatsReport {
            n: model.n(),
            variables: s.peak_vars,
            propagators: s.peak_propagators,
            wakes: s.wakes,
            search_nodes: s.search_nodes,
            build_ms,
            solve_ms,
            result: if compatible { "compatible" } else { "incompatible" },
        }
    }
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

struct Built {
    model: SupertreeModel,
    result: BuildResult,
    build_ms: f64,
    solve_ms: f64,
}

/// Shared by `build`: plain forests go straight to the model; forests with
/// internal taxon labels are preprocessed and labelled afterwards.
fn build(args: &ModelArgs) -> Result<Built, CliError> {
    let trees = read_trees(&args.files)?;
    let sides = read_sides(args.constraints.as_deref())?;
    let nested = has_taxa(&trees);
    let t0 = Instant::now();
    let trees = if nested { nested_preprocess(&trees)? } else { trees };
    let forest = Forest::new(trees);
    let mut model = SupertreeModel::from_forest(&forest, mode(args.soft), &sides)?;
    let enc = if nested {
        Some(apply_nested_taxa(&mut model, &forest)?)
    } else {
        None
    };
    let build_ms = ms(t0);
    let t1 = Instant::now();
    let mut result = cp_build(&mut model)?;
    if let (Some(enc), BuildResult::Supertree(t)) = (&enc, &result) {
        result = BuildResult::Supertree(attach_labels(t, enc, forest.trees())?);
    }
    Ok(Built {
        model,
        result,
        build_ms,
        solve_ms: ms(t1),
    })
}

fn cmd_build(args: &ModelArgs, out: Option<&Path>) -> CliResult {
    let b = build(args)?;
    let stats = StatsReport::new(&b.model, b.build_ms, b.solve_ms, b.result.is_compatible());
    eprintln!("{}", to_json(&stats));
    match &b.result {
        BuildResult::Supertree(t) => {
            write_out(out, &format!("{}\n", to_newick(t)))?;
            Ok(0)
        }
        BuildResult::Incompatible => {
            eprintln!("umtree: the input trees are incompatible");
            Ok(1)
        }
    }
}

#[derive(Serialize)]
struct GreedyOut<'a> {
    accepted: &'a [Atom],
    rejected: &'a [Atom],
    violated_in_output: &'a [Atom],
    ms: f64,
}

fn cmd_greedy(args: &ModelArgs, out: Option<&Path>) -> CliResult {
    let trees = read_trees(&args.files)?;
    let sides = read_sides(args.constraints.as_deref())?;
    let t0 = Instant::now();
    let (tree, report) = greedy_forest(&Forest::new(trees), mode(args.soft), &sides)?;
    eprintln!(
        "{}",
        to_json(&GreedyOut {
            accepted: &report.accepted,
            rejected: &report.rejected,
            violated_in_output: &report.violated_in_output,
            ms: ms(t0),
        })
    );
    write_out(out, &format!("{}\n", to_newick(&tree)))?;
    Ok(0)
}

fn cmd_necessity(args: &ModelArgs, atom: &str) -> CliResult {
    let atom: Atom = atom.parse().map_err(|e: umtree::phylo::AtomParseError| CliError::Usage(e.to_string()))?;
    let trees = read_trees(&args.files)?;
    let sides = read_sides(args.constraints.as_deref())?;
    let necessary = necessity(&Forest::new(trees), mode(args.soft), &sides, &atom)?;
    println!("{}", if necessary { "necessary" } else { "not-necessary" });
    Ok(0)
}

fn cmd_explain(args: &ModelArgs) -> CliResult {
    let trees = read_trees(&args.files)?;
    let sides = read_sides(args.constraints.as_deref())?;
    let core = explain_conflict(&Forest::new(trees), mode(args.soft), &sides)?;
    let text: String = core.atoms.iter().map(|a| format!("{a}\n")).collect();
    write_out(None, &text)?;
    eprintln!("{}", to_json(&core));
    Ok(0)
}

fn cmd_breakup(files: &[PathBuf], mode: BreakupMode) -> CliResult {
    let trees = read_trees(files)?;
    let mut text = String::new();
    for t in &trees {
        for a in breakup(t, mode) {
            text.push_str(&format!("{a}\n"));
        }
    }
    write_out(None, &text)?;
    Ok(0)
}

fn cmd_check(supertree: &Path, files: &[PathBuf]) -> CliResult {
    let sup = read_trees(std::slice::from_ref(&supertree.to_path_buf()))?;
    let [sup] = sup.as_slice() else {
        return Err(CliError::Usage(format!("{}: expected exactly one tree", supertree.display())));
    };
    let inputs = read_trees(files)?;
    let mut ok = true;
    for (k, t) in inputs.iter().enumerate() {
        match displays(sup, t) {
            Ok(true) => {}
            Ok(false) => {
                eprintln!("umtree: input tree {} is not displayed", k + 1);
                ok = false;
            }
            Err(e) => {
                eprintln!("umtree: input tree {}: {e}", k + 1);
                ok = false;
            }
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_enumerate(args: &ModelArgs, limit: usize) -> CliResult {
    if limit == 0 {
        return Err(CliError::Usage("--limit must be at least 1".into()));
    }
    let trees = read_trees(&args.files)?;
    let sides = read_sides(args.constraints.as_deref())?;
    let mut model = SupertreeModel::from_forest(&Forest::new(trees), mode(args.soft), &sides)?;
    let all = enumerate_supertrees(&mut model, limit)?;
    let text: String = all.iter().map(|t| format!("{}\n", to_newick(t))).collect();
    write_out(None, &text)?;
    eprintln!("{}", to_json(&serde_json::json!({ "count": all.len(), "search_nodes": model.stats().search_nodes })));
    Ok(if all.is_empty() { 1 } else { 0 })
}

fn cmd_gen(leaves: usize, trees: usize, prune: f64, seed: u64, out: Option<&Path>) -> CliResult {
    if leaves == 0 || trees == 0 {
        return Err(CliError::Usage("--leaves and --trees must be positive".into()));
    }
    if !(0.0..=1.0).contains(&prune) {
        return Err(CliError::Usage("--prune must lie in [0, 1]".into()));
    }
    let (_, forest) = compatible_forest(leaves, trees, prune, seed);
    let text: String = forest.iter().map(|t| format!("{}\n", to_newick(t))).collect();
    write_out(out, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct BenchRow {
    trees: usize,
    seed: u64,
    atoms: usize,
    #[serde(flatten)]
    stats: StatsReport,
}

fn bench_one(trees: Vec<PhyloTree>, seed: u64) -> Result<BenchRow, CliError> {
    let k = trees.len();
    let t0 = Instant::now();
    let mut model = SupertreeModel::from_forest(&Forest::new(trees), BreakupMode::Hard, &[])?;
    let build_ms = ms(t0);
    let t1 = Instant::now();
    let result = cp_build(&mut model)?;
    let solve_ms = ms(t1);
    Ok(BenchRow {
        trees: k,
        seed,
        atoms: model.atoms().len(),
        stats: StatsReport::new(&model, build_ms, solve_ms, result.is_compatible()),
    })
}

fn cmd_bench(sizes: &[usize], trees: usize, repeats: u64, seed: u64) -> CliResult {
    let mut rows = Vec::new();
    for &n in sizes {
        for r in 0..repeats {
            let s = seed.wrapping_add(r);
            rows.push(bench_one(compatible_forest(n, trees, 0.3, s).1, s)?);
            rows.push(bench_one(incompatible_forest(n, trees, 0.3, s), s)?);
        }
    }
    write_out(None, &format!("{}\n", serde_json::to_string_pretty(&rows).expect("serializable")))?;
    Ok(0)
}
