//! The `locc` command line.
//!
//! Exit codes: 0 when a definitive answer was produced, 2 when the entropic
//! criteria cannot decide (or no witness exists), 1 on usage or input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::analysis::{
    compare, destruction_relation, find_witness, sperner_width, Destruction, Relation,
    DEFAULT_WITNESS_BUDGET,
};
use crate::hypergraph::Hypergraph;
use crate::order::{build_dag, max_antichain, EdgeKind, DEFAULT_DAG_BUDGET, DEFAULT_FAMILY_BUDGET};
use crate::restricted::{
    decide_restricted, replay, script_from_paths, Script, DEFAULT_EDGE_BUDGET,
};

pub const UNREACHABLE: &str = "not reachable under restricted LOCC";

const CERTIFIED_NOTE: &str = "certified fragment only: nodes are labeled states, not LU classes; \
                              edges are edge-subset destruction and, for r=2, restricted-LOCC plans";

#[derive(Parser, Debug)]
#[command(
    name = "locc",
    version,
    about = "LOCC comparisons of CAT-state ensembles"
)]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Omit wall time from the report.
    #[arg(long, global = true)]
    no_timing: bool,

    /// Search cap: max parties for cut scans, max edges for path search,
    /// max family size for enumeration.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entropic comparison of two ensembles.
    Compare { a: PathBuf, b: PathBuf },
    /// Least cut showing A cannot reach B.
    Witness { a: PathBuf, b: PathBuf },
    /// Largest set of mutually incomparable r-uniform ensembles on n parties.
    Width {
        n: u32,
        r: u32,
        /// Cross-check against an exhaustive antichain search.
        #[arg(long)]
        verify: bool,
    },
    /// Teleport/destroy script from G to H.
    Plan {
        g: PathBuf,
        h: PathBuf,
        #[arg(long, value_name = "PATH")]
        emit_script: Option<PathBuf>,
    },
    /// Apply a script to G.
    Replay {
        g: PathBuf,
        script: PathBuf,
        #[arg(long, value_name = "PATH")]
        expect: Option<PathBuf>,
    },
    /// Certified order DAG of a family.
    Atlas {
        n: u32,
        r: u32,
        #[arg(long, value_name = "K")]
        max_m: Option<usize>,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Parse and describe hypergraph files.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Done {
    code: i32,
    inputs: Value,
    payload: Value,
    budget: Value,
    text: String,
}

type CmdResult = anyhow::Result<Done>;

/// Runs one command. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let echo: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();

    let start = Instant::now();
    let result = dispatch(&cli);
    let elapsed = start.elapsed().as_millis() as u64;

    match result {
        Ok(done) => {
            let stdout = if cli.json {
                let mut report = json!({
                    "command": echo,
                    "inputs": done.inputs,
                    "result": done.payload,
                    "budget": done.budget,
                });
                if !cli.no_timing {
                    report["wall_time_ms"] = json!(elapsed);
                }
                let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
                s.push('\n');
                s
            } else {
                let mut s = done.text;
                if !cli.no_timing {
                    writeln!(s, "wall_time_ms: {elapsed}").unwrap();
                }
                s
            };
            Outcome {
                code: done.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
        },
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Compare { a, b } => cmd_compare(a, b, scan_budget(cli.budget)),
        Command::Witness { a, b } => cmd_witness(a, b, scan_budget(cli.budget)),
        Command::Width { n, r, verify } => cmd_width(
            *n,
            *r,
            *verify,
            family_budget(cli.budget, DEFAULT_FAMILY_BUDGET),
        ),
        Command::Plan { g, h, emit_script } => {
            cmd_plan(g, h, emit_script.as_deref(), edge_budget(cli.budget))
        }
        Command::Replay { g, script, expect } => cmd_replay(g, script, expect.as_deref()),
        Command::Atlas { n, r, max_m, dot } => cmd_atlas(
            *n,
            *r,
            *max_m,
            dot.as_deref(),
            family_budget(cli.budget, DEFAULT_DAG_BUDGET),
        ),
        Command::Validate { files } => cmd_validate(files),
    }
}

fn scan_budget(b: Option<u64>) -> u32 {
    b.map_or(DEFAULT_WITNESS_BUDGET, |b| b.min(u32::MAX as u64) as u32)
}

fn edge_budget(b: Option<u64>) -> usize {
    b.map_or(DEFAULT_EDGE_BUDGET, |b| b as usize)
}

fn family_budget(b: Option<u64>, default: u128) -> u128 {
    b.map_or(default, u128::from)
}

fn load(path: &Path) -> anyhow::Result<Hypergraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    Hypergraph::parse(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn canonical(h: &Hypergraph) -> Value {
    serde_json::to_value(h).expect("hypergraph serializes")
}

fn cut_value(cut: &Option<crate::Bipartition>) -> Value {
    match cut {
        Some(c) => json!(c.side().to_vec()),
        None => Value::Null,
    }
}

fn cmd_compare(a: &Path, b: &Path, budget: u32) -> CmdResult {
    let (h1, h2) = (load(a)?, load(b)?);
    let verdict = compare(&h1, &h2, budget)?;
    let note = match destruction_relation(&h1, &h2) {
        Some(Destruction::ForwardBySubset) => Some("B is A with CAT states discarded: A reaches B"),
        Some(Destruction::BackwardBySubset) => {
            Some("A is B with CAT states discarded: B reaches A")
        }
        None => None,
    };
    let mut payload = serde_json::to_value(&verdict).expect("verdict serializes");
    payload["note"] = note.map_or(Value::Null, |s| json!(s));

    let mut text = String::new();
    writeln!(text, "relation: {}", verdict.relation).unwrap();
    if let Some(c) = &verdict.witness_fwd {
        writeln!(
            text,
            "witness_fwd: {c} (A {} < B {})",
            h1.cut_capacity(c),
            h2.cut_capacity(c)
        )
        .unwrap();
    }
    if let Some(c) = &verdict.witness_bwd {
        writeln!(
            text,
            "witness_bwd: {c} (B {} < A {})",
            h2.cut_capacity(c),
            h1.cut_capacity(c)
        )
        .unwrap();
    }
    writeln!(text, "isentropic: {}", verdict.isentropic).unwrap();
    if let Some(n) = note {
        writeln!(text, "note: {n}").unwrap();
    }
    if verdict.relation == Relation::Inconclusive {
        writeln!(text, "cut capacities cannot decide this pair").unwrap();
    }
    Ok(Done {
        code: if verdict.relation == Relation::Inconclusive {
            2
        } else {
            0
        },
        inputs: json!({ "a": canonical(&h1), "b": canonical(&h2) }),
        payload,
        budget: json!({ "max_parties": budget }),
        text,
    })
}

fn cmd_witness(a: &Path, b: &Path, budget: u32) -> CmdResult {
    let (h1, h2) = (load(a)?, load(b)?);
    let cut = find_witness(&h1, &h2, budget)?;
    let (payload, text) = match &cut {
        Some(c) => {
            let (ca, cb) = (h1.cut_capacity(c), h2.cut_capacity(c));
            (
                json!({ "witness": cut_value(&cut), "capacity_a": ca, "capacity_b": cb }),
                format!("witness: {c}\ncapacity: A {ca} < B {cb}\n"),
            )
        }
        None => (
            json!({ "witness": Value::Null }),
            "no witness: every cut of A has at least the capacity of B\n".to_string(),
        ),
    };
    Ok(Done {
        code: if cut.is_some() { 0 } else { 2 },
        inputs: json!({ "a": canonical(&h1), "b": canonical(&h2) }),
        payload,
        budget: json!({ "max_parties": budget }),
        text,
    })
}

fn cmd_width(n: u32, r: u32, verify: bool, budget: u128) -> CmdResult {
    let w = sperner_width(n, r)?;
    let mut payload = json!({
        "width": w.value.to_string(),
        "universe": w.universe.to_string(),
        "conjectural": w.conjectural,
    });
    let mut text = format!("{}\nconjectural: {}\n", w.value, w.conjectural);
    let mut code = 0;
    if verify {
        let a = max_antichain(n, r, budget)?;
        let ok = num_bigint::BigUint::from(a.size) == w.value;
        payload["antichain"] =
            json!({ "size": a.size.to_string(), "level": a.level, "matches": ok });
        writeln!(
            text,
            "antichain: {} at {} edges ({})",
            a.size,
            a.level,
            if ok { "matches" } else { "MISMATCH" }
        )
        .unwrap();
        if !ok {
            code = 1;
        }
    }
    Ok(Done {
        code,
        inputs: json!({ "n": n, "r": r }),
        payload,
        budget: if verify {
            json!({ "max_family": budget.to_string() })
        } else {
            Value::Null
        },
        text,
    })
}

fn cmd_plan(g_path: &Path, h_path: &Path, emit: Option<&Path>, budget: usize) -> CmdResult {
    let (g, h) = (load(g_path)?, load(h_path)?);
    let inputs = json!({ "g": canonical(&g), "h": canonical(&h) });
    let budget_v = json!({ "max_edges": budget });
    let Some(paths) = decide_restricted(&g, &h, budget)? else {
        return Ok(Done {
            code: 0,
            inputs,
            payload: json!({ "reachable": false, "message": UNREACHABLE }),
            budget: budget_v,
            text: format!("{UNREACHABLE}\n"),
        });
    };
    let script = script_from_paths(&g, &paths)?;
    if let Some(path) = emit {
        std::fs::write(path, script.to_json() + "\n")
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
    }
    let routed: Vec<Value> = paths.iter().map(|p| json!(p.path)).collect();
    let mut text = format!("reachable in {} ops\n", script.len());
    for op in &script.ops {
        writeln!(text, "{op}").unwrap();
    }
    Ok(Done {
        code: 0,
        inputs,
        payload: json!({
            "reachable": true,
            "paths": routed,
            "script": serde_json::to_value(&script).expect("script serializes"),
        }),
        budget: budget_v,
        text,
    })
}

fn cmd_replay(g_path: &Path, script_path: &Path, expect: Option<&Path>) -> CmdResult {
    let g = load(g_path)?;
    let raw = std::fs::read_to_string(script_path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", script_path.display()))?;
    let script =
        Script::from_json(&raw).map_err(|e| anyhow::anyhow!("{}: {e}", script_path.display()))?;
    let result = replay(&g, &script)?;
    let expected = expect.map(load).transpose()?;
    let matches = expected.as_ref().map(|e| *e == result);
    let mut text = result.to_text();
    if let Some(m) = matches {
        writeln!(text, "matches expected: {m}").unwrap();
    }
    let mut inputs = json!({ "g": canonical(&g), "script": serde_json::to_value(&script).expect("script serializes") });
    if let Some(e) = &expected {
        inputs["expect"] = canonical(e);
    }
    Ok(Done {
        code: if matches == Some(false) { 1 } else { 0 },
        inputs,
        payload: json!({ "graph": canonical(&result), "matches_expected": matches }),
        budget: Value::Null,
        text,
    })
}

fn cmd_atlas(n: u32, r: u32, max_m: Option<usize>, dot: Option<&Path>, budget: u128) -> CmdResult {
    let dag = build_dag(n, r, max_m, budget)?;
    let hasse = dag.hasse_edges();
    let count = |kind| dag.edges.iter().filter(|e| e.kind == kind).count();
    let rendered = dag.to_dot();
    let mut payload = json!({
        "nodes": dag.nodes.len(),
        "relations": dag.edges.len(),
        "subset_relations": count(EdgeKind::EdgeSubset),
        "plan_relations": count(EdgeKind::RestrictedPlan),
        "hasse_edges": hasse.len(),
        "note": CERTIFIED_NOTE,
    });
    let text = match dot {
        Some(path) => {
            std::fs::write(path, &rendered)
                .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
            payload["dot"] = json!(path.display().to_string());
            format!(
                "nodes: {}\nrelations: {} ({} subset, {} plan)\nhasse edges: {}\nnote: {CERTIFIED_NOTE}\n",
                dag.nodes.len(),
                dag.edges.len(),
                count(EdgeKind::EdgeSubset),
                count(EdgeKind::RestrictedPlan),
                hasse.len()
            )
        }
        None => {
            payload["dot"] = json!(rendered);
            rendered.clone()
        }
    };
    Ok(Done {
        code: 0,
        inputs: json!({ "n": n, "r": r, "max_m": max_m }),
        payload,
        budget: json!({ "max_nodes": budget.to_string() }),
        text,
    })
}

fn cmd_validate(files: &[PathBuf]) -> CmdResult {
    let mut entries = Vec::new();
    let mut text = String::new();
    for path in files {
        let h = load(path)?;
        let info = json!({
            "path": path.display().to_string(),
            "canonical": canonical(&h),
            "edges": h.edge_count(),
            "uniformity": h.uniformity(),
            "simple": h.is_simple(),
            "connected": h.is_connected(),
            "hypertree": h.is_hypertree(),
            "epr_graph": h.is_epr_graph(),
        });
        writeln!(text, "{}: ok", path.display()).unwrap();
        text.push_str(&h.to_text());
        writeln!(
            text,
            "edges: {}, uniformity: {}, simple: {}, connected: {}, hypertree: {}",
            h.edge_count(),
            h.uniformity()
                .map_or("mixed".to_string(), |r| r.to_string()),
            h.is_simple(),
            h.is_connected(),
            h.is_hypertree()
        )
        .unwrap();
        entries.push(info);
    }
    Ok(Done {
        code: 0,
        inputs: json!(files
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()),
        payload: json!(entries),
        budget: Value::Null,
        text,
    })
}
