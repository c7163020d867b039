use std::error::Error;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use gossip_core::conjecture::{probe_conjecture, ConjectureReport};
use gossip_core::format::{parse_sequence, write_counterexample, write_sequence};
use gossip_core::lemmas::{eliminate_don, normalize_tail, EliminationCertificate, TailNormalization, TailOutcome};
use gossip_core::model::{compute_stats, hears_own_gossip, simulate, CallSequence, DonId, GossipStats};
use gossip_core::search::{max_total_knowledge, min_calls_full, verify_theorem, SearchConfig, SearchStatus, Verdict};
use gossip_core::suite::{run_suite, SuiteConfig};
use gossip_core::{star_sequence, star_value, GossipError};

use crate::report::{emit, opt, ReportDocument, Status, Table};
use crate::{Command, GlobalArgs};

type CmdResult = Result<Status, Box<dyn Error>>;

pub fn run(command: Command, args: &GlobalArgs) -> CmdResult {
    let search = SearchConfig { budget: args.budget, workers: args.workers, memoize: true };
    match command {
        Command::Simulate { file, trajectory } => cmd_simulate(&file, trajectory, args),
        Command::Star { n, m } => cmd_star(n, m, args),
        Command::MaxKnowledge { n, m, k } => cmd_max_knowledge(n, m, k, &search, args),
        Command::VerifyTheorem { n } => cmd_verify_theorem(n, &search, args),
        Command::MinCalls { n, k } => cmd_min_calls(n, k, &search, args),
        Command::ProbeConjecture { n, k, m_min, m_max } => cmd_probe_conjecture(n, k, m_min, m_max, &search, args),
        Command::CheckLemmas { seed, trials, n_max } => cmd_check_lemmas(seed, trials, n_max, args),
        Command::Eliminate { file, don } => cmd_eliminate(&file, don, args),
        Command::NormalizeTail { file } => cmd_normalize_tail(&file, args),
    }
}

fn read_sequence(path: &Path) -> Result<CallSequence, Box<dyn Error>> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file = parse_sequence(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(file.sequence)
}

fn search_status(s: SearchStatus) -> Status {
    match s {
        SearchStatus::Ok => Status::Ok,
        SearchStatus::Inconclusive => Status::Inconclusive,
    }
}

fn seq_text(seq: &CallSequence) -> String {
    seq.calls().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct SimulateResults {
    n: usize,
    m: usize,
    total: u32,
    stats: GossipStats,
    hears_own_gossip: Vec<usize>,
    /// `trajectory[t][i]`: items don `i + 1` knows after `t` calls.
    #[serde(skip_serializing_if = "Option::is_none")]
    trajectory: Option<Vec<Vec<Vec<usize>>>>,
}

fn cmd_simulate(file: &Path, trajectory: bool, args: &GlobalArgs) -> CmdResult {
    let seq = read_sequence(file)?;
    let stats = compute_stats(&seq);
    let traj = trajectory.then(|| {
        simulate(&seq).iter().map(|st| seq.dons().map(|d| st.row(d).numbers()).collect()).collect()
    });
    let results = SimulateResults {
        n: seq.n(),
        m: seq.len(),
        total: stats.total,
        hears_own_gossip: seq.dons().filter(|&d| hears_own_gossip(&seq, d)).map(DonId::number).collect(),
        stats,
        trajectory: traj,
    };
    let doc = ReportDocument {
        command: "simulate".into(),
        parameters: json!({ "file": file.display().to_string(), "trajectory": trajectory }),
        status: Status::Ok,
        results,
    };
    Ok(emit(args, &doc, || {
        let r = &doc.results;
        let mut t = Table::new(&["don", "a", "b", "c", "d"]);
        t.title.push(format!("n = {}, m = {}, N = {}", r.n, r.m, r.total));
        for i in 0..r.n {
            t.row(vec![
                (i + 1).to_string(),
                r.stats.a[i].to_string(),
                r.stats.b[i].to_string(),
                r.stats.c[i].to_string(),
                r.stats.d[i].to_string(),
            ]);
        }
        t.notes.push(format!("hears own gossip: {}", if r.hears_own_gossip.is_empty() { "none".into() } else { join(&r.hears_own_gossip) }));
        if let Some(traj) = &r.trajectory {
            for (step, rows) in traj.iter().enumerate() {
                let cells: Vec<String> = rows.iter().map(|row| format!("{{{}}}", join(row))).collect();
                t.notes.push(format!("after {step}: {}", cells.join(" ")));
            }
        }
        t
    })?)
}

#[derive(Serialize)]
struct StarResults {
    sequence: CallSequence,
    simulated: u32,
    formula: u32,
    agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<String>,
}

fn cmd_star(n: usize, m: usize, args: &GlobalArgs) -> CmdResult {
    let seq = star_sequence(n, m)?;
    let simulated = compute_stats(&seq).total;
    let formula = star_value(n, m)?;
    let agrees = simulated == formula;
    let counterexample = (!agrees).then(|| write_counterexample(&seq, "star value")).transpose()?;
    let doc = ReportDocument {
        command: "star".into(),
        parameters: json!({ "n": n, "m": m }),
        status: if agrees { Status::Ok } else { Status::Violation },
        results: StarResults { sequence: seq, simulated, formula, agrees, counterexample },
    };
    Ok(emit(args, &doc, || {
        let r = &doc.results;
        let mut t = Table::default();
        t.title.push(format!("n = {n}, m = {m}"));
        t.title.push(format!("calls: {}", seq_text(&r.sequence)));
        t.title.push(format!("simulated N = {}, formula = {}", r.simulated, r.formula));
        t
    })?)
}

fn cmd_max_knowledge(n: usize, m: usize, k: usize, cfg: &SearchConfig, args: &GlobalArgs) -> CmdResult {
    let report = max_total_knowledge(n, m, k, cfg)?;
    let mut status = search_status(report.status);
    if report.agrees == Some(false) {
        status = Status::Violation;
    }
    let doc = ReportDocument {
        command: "max-knowledge".into(),
        parameters: json!({ "n": n, "m": m, "k": k, "budget": cfg.budget }),
        status,
        results: report,
    };
    Ok(emit(args, &doc, || {
        let r = &doc.results;
        let mut t = Table::default();
        t.title.push(format!("n = {n}, m = {m}, k = {k}"));
        t.title.push(format!("max N = {}, formula = {}", opt(r.max_n), opt(r.formula_value)));
        t.title.push(format!("witness: {}", r.witness.as_ref().map_or("-".into(), seq_text)));
        t.title.push(format!("nodes explored: {}", r.nodes_explored));
        t
    })?)
}

fn cmd_verify_theorem(n: usize, cfg: &SearchConfig, args: &GlobalArgs) -> CmdResult {
    let check = verify_theorem(n, cfg)?;
    let status = match check.verdict {
        Verdict::Holds => Status::Ok,
        Verdict::Fails => Status::Violation,
        Verdict::Inconclusive => Status::Inconclusive,
    };
    let doc = ReportDocument {
        command: "verify-theorem".into(),
        parameters: json!({ "n": n, "budget": cfg.budget }),
        status,
        results: check,
    };
    Ok(emit(args, &doc, || {
        let mut t = Table::new(&["m", "max N", "formula", "agrees", "nodes", "witness"]);
        t.title.push(format!("n = {n}"));
        for r in &doc.results.reports {
            t.row(vec![
                r.m.to_string(),
                opt(r.max_n),
                opt(r.formula_value),
                opt(r.agrees),
                r.nodes_explored.to_string(),
                r.witness.as_ref().map_or("-".into(), seq_text),
            ]);
        }
        t
    })?)
}

fn cmd_min_calls(n: usize, k: usize, cfg: &SearchConfig, args: &GlobalArgs) -> CmdResult {
    let report = min_calls_full(n, k, cfg)?;
    let doc = ReportDocument {
        command: "min-calls".into(),
        parameters: json!({ "n": n, "k": k, "budget": cfg.budget }),
        status: search_status(report.status),
        results: report,
    };
    Ok(emit(args, &doc, || {
        let r = &doc.results;
        let mut t = Table::default();
        t.title.push(format!("n = {n}, k = {k}"));
        t.title.push(format!("min calls = {}", opt(r.min_calls)));
        t.title.push(format!("witness: {}", r.witness.as_ref().map_or("-".into(), seq_text)));
        t.title.push(format!("nodes explored: {}", r.nodes_explored));
        t
    })?)
}

fn cmd_probe_conjecture(
    n: usize,
    k: usize,
    m_min: usize,
    m_max: Option<usize>,
    cfg: &SearchConfig,
    args: &GlobalArgs,
) -> CmdResult {
    let m_end = match m_max {
        Some(m) => m + 1,
        None => {
            let min = min_calls_full(n, k, cfg)?;
            match min.min_calls {
                Some(c) => c,
                None => {
                    return Err(Box::new(GossipError::OutOfRange(format!(
                        "least number of calls for n = {n}, k = {k} not found within the budget"
                    ))))
                }
            }
        }
    };
    let reports: Vec<ConjectureReport> = probe_conjecture(n, k, m_min..m_end, cfg)?;
    let mut status = Status::Ok;
    for r in &reports {
        if let (Some(g), Some(best)) = (r.greedy_frontier_max, r.global_max) {
            if g > best {
                status = Status::Violation;
            }
        }
        status = status.and(search_status(r.status));
    }
    let doc = ReportDocument {
        command: "probe-conjecture".into(),
        parameters: json!({ "n": n, "k": k, "m_min": m_min, "m_max": m_end.saturating_sub(1), "budget": cfg.budget }),
        status,
        results: reports,
    };
    Ok(emit(args, &doc, || {
        let mut t = Table::new(&["m", "global max", "greedy max", "agrees", "greedy nodes", "search nodes"]);
        t.title.push(format!("n = {n}, k = {k}"));
        for r in &doc.results {
            t.row(vec![
                r.m.to_string(),
                opt(r.global_max),
                opt(r.greedy_frontier_max),
                opt(r.agrees),
                r.greedy_sequences_explored.to_string(),
                r.global_nodes_explored.to_string(),
            ]);
        }
        t
    })?)
}

fn cmd_check_lemmas(seed: u64, trials: u64, n_max: usize, args: &GlobalArgs) -> CmdResult {
    if !(2..=16).contains(&n_max) {
        return Err(Box::new(GossipError::OutOfRange(format!("n-max must be in 2..=16, got {n_max}"))));
    }
    let report = run_suite(&SuiteConfig { seed, trials, n_max, workers: args.workers });
    let status = if report.violations() > 0 { Status::Violation } else { Status::Ok };
    let doc = ReportDocument {
        command: "check-lemmas".into(),
        parameters: json!({ "seed": seed, "trials": trials, "n_max": n_max }),
        status,
        results: report,
    };
    Ok(emit(args, &doc, || {
        let mut t = Table::new(&["property", "checked", "inapplicable", "violations"]);
        t.title.push(format!("seed = {seed}, trials = {trials}, n-max = {n_max}"));
        for p in &doc.results.tallies {
            t.row(vec![p.property.to_string(), p.checked.to_string(), p.inapplicable.to_string(), p.violations.to_string()]);
        }
        for c in &doc.results.counterexamples {
            t.notes.push(format!("trial {}:", c.trial));
            t.notes.push(c.dump.trim_end().to_string());
        }
        t
    })?)
}

#[derive(Serialize)]
#[serde(untagged)]
enum Construction<T> {
    Done(T),
    Failed { error: String, counterexample: String },
}

fn construction<T>(seq: &CallSequence, property: &str, r: gossip_core::Result<T>) -> Result<(Status, Construction<T>), Box<dyn Error>> {
    match r {
        Ok(v) => Ok((Status::Ok, Construction::Done(v))),
        Err(e @ GossipError::Construction(_)) => {
            let counterexample = write_counterexample(seq, property)?;
            Ok((Status::Violation, Construction::Failed { error: e.to_string(), counterexample }))
        }
        Err(e) => Err(Box::new(e)),
    }
}

fn cmd_eliminate(file: &Path, don: usize, args: &GlobalArgs) -> CmdResult {
    let seq = read_sequence(file)?;
    let x = DonId::new(don)?;
    let (status, results) = construction(&seq, "elimination", eliminate_don(&seq, x))?;
    let doc = ReportDocument {
        command: "eliminate".into(),
        parameters: json!({ "file": file.display().to_string(), "don": don }),
        status,
        results,
    };
    Ok(emit(args, &doc, || {
        let mut t = Table::default();
        match &doc.results {
            Construction::Done(EliminationCertificate { transformed, calls_saved, padding, pair, path_times, .. }) => {
                t.title.push(format!("removed don {don}, saved {calls_saved} calls ({padding} padding)"));
                t.title.push(format!("partners joined: {} and {} via calls at {}", pair.0, pair.1, join(path_times)));
                t.title.push(write_sequence(transformed).unwrap_or_default().trim_end().to_string());
            }
            Construction::Failed { error, counterexample } => {
                t.title.push(error.clone());
                t.title.push(counterexample.trim_end().to_string());
            }
        }
        t
    })?)
}

fn cmd_normalize_tail(file: &Path, args: &GlobalArgs) -> CmdResult {
    let seq = read_sequence(file)?;
    let (status, results) = construction(&seq, "tail normalization", normalize_tail(&seq))?;
    let doc = ReportDocument {
        command: "normalize-tail".into(),
        parameters: json!({ "file": file.display().to_string() }),
        status,
        results,
    };
    Ok(emit(args, &doc, || {
        let mut t = Table::default();
        match &doc.results {
            Construction::Done(TailNormalization { sequence, outcome, swaps, .. }) => {
                let shape = match outcome {
                    TailOutcome::TailConnected => "tail connected".to_string(),
                    TailOutcome::IsolatedDon { don } => format!("don {don} sits out the first {} calls", seq.n().saturating_sub(2)),
                };
                t.title.push(format!("{shape} after {swaps} swaps"));
                t.title.push(write_sequence(sequence).unwrap_or_default().trim_end().to_string());
            }
            Construction::Failed { error, counterexample } => {
                t.title.push(error.clone());
                t.title.push(counterexample.trim_end().to_string());
            }
        }
        t
    })?)
}
