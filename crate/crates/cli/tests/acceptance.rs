//! Acceptance criteria, one PASS/FAIL line each.
//!
//! All numeric checks are exact integer comparisons. Each criterion also has
//! a wall-clock limit; exceeding it fails the criterion.

use std::collections::HashSet;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gossip_core::conjecture::probe_conjecture;
use gossip_core::lemmas::check_identity;
use gossip_core::model::{final_state, CallSequence};
use gossip_core::search::{max_total_knowledge, min_calls_full, SearchConfig, SearchStatus};
use gossip_core::suite::{elimination_section, random_section, Property, SuiteConfig};
use gossip_core::{star_sequence, star_value};

type Check = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Check);

/// Best N after `m` pair calls, by enumerating every reachable knowledge
/// matrix layer by layer, with no symmetry reduction or pruning.
fn layered_max(n: usize, m_max: usize) -> Vec<u32> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut layer: HashSet<Vec<u16>> = HashSet::from([(0..n).map(|i| 1u16 << i).collect()]);
    let total = |s: &Vec<u16>| s.iter().map(|r| r.count_ones()).sum::<u32>();
    let mut best = vec![n as u32];
    for _ in 0..m_max {
        let mut next = HashSet::with_capacity(layer.len() * 4);
        for s in &layer {
            for &(u, v) in &pairs {
                let mut t = s.clone();
                let union = t[u] | t[v];
                t[u] = union;
                t[v] = union;
                next.insert(t);
            }
        }
        layer = next;
        best.push(layer.iter().map(total).max().unwrap_or(0));
    }
    best
}

fn max_n(n: usize, m: usize, k: usize) -> Result<u32, String> {
    let r = max_total_knowledge(n, m, k, &SearchConfig::default()).map_err(|e| e.to_string())?;
    r.max_n.ok_or_else(|| format!("search for n={n} m={m} k={k} inconclusive after {} nodes", r.nodes_explored))
}

fn theorem_reproduction() -> Check {
    let expected: [(usize, &[u32]); 2] = [(4, &[4, 6, 9, 13]), (5, &[5, 7, 10, 14, 19, 22])];
    for (n, values) in expected {
        for (m, &v) in values.iter().enumerate() {
            if star_value(n, m).map_err(|e| e.to_string())? != v {
                return Err(format!("formula at n={n} m={m} is not {v}"));
            }
        }
    }
    if star_value(6, 7).map_err(|e| e.to_string())? != 33 {
        return Err("formula at n=6 m=7 is not 33".into());
    }
    for n in 4..=6 {
        let m_max = 2 * n - 5;
        let oracle = layered_max(n, m_max);
        for (m, &enumerated) in oracle.iter().enumerate() {
            let found = max_n(n, m, 2)?;
            let formula = star_value(n, m).map_err(|e| e.to_string())?;
            if found != formula || enumerated != formula {
                return Err(format!("n={n} m={m}: search {found}, enumeration {enumerated}, formula {formula}"));
            }
        }
    }
    Ok("n=4,5,6 all m in 0..=2n-5: search = enumeration = formula".into())
}

fn classic_minimum() -> Check {
    let mut parts = Vec::new();
    for (n, want) in [(4, 4), (5, 6)] {
        let r = min_calls_full(n, 2, &SearchConfig::default()).map_err(|e| e.to_string())?;
        if r.min_calls != Some(want) {
            return Err(format!("min calls for n={n}: {:?}, want {want}", r.min_calls));
        }
        let below = max_n(n, 2 * n - 5, 2)?;
        if below >= (n * n) as u32 {
            return Err(format!("n={n}: {below} items already after {} calls", 2 * n - 5));
        }
        let w = r.witness.expect("witness");
        if final_state(&w).total() != (n * n) as u32 {
            return Err(format!("n={n}: witness does not inform everyone"));
        }
        parts.push(format!("n={n}: {want} calls, max N at 2n-5 = {below}"));
    }
    Ok(parts.join("; "))
}

fn star_identity() -> Check {
    let mut count = 0;
    for n in 2..=20 {
        for m in 0..=(2 * n - 3) {
            let seq = star_sequence(n, m).map_err(|e| e.to_string())?;
            let sim = final_state(&seq).total();
            let formula = star_value(n, m).map_err(|e| e.to_string())?;
            if sim != formula {
                return Err(format!("n={n} m={m}: simulated {sim}, formula {formula}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} (n, m) pairs agree"))
}

fn boundary() -> Check {
    for n in 4..=20 {
        let v = star_value(n, 2 * n - 4).map_err(|e| e.to_string())?;
        if v != (n * n - 1) as u32 {
            return Err(format!("star_value({n}, {}) = {v}", 2 * n - 4));
        }
    }
    let best = max_n(4, 4, 2)?;
    if best != 16 {
        return Err(format!("max N at n=4 m=4 is {best}"));
    }
    Ok("star at 2n-4 gives n^2-1 (n=4..20) while max N(4,4) = 16".into())
}

fn lemma_suite() -> Check {
    let r = random_section(&SuiteConfig { seed: 1, trials: 10_000, n_max: 8, workers: 1 });
    if r.violations() > 0 {
        let first = &r.counterexamples[0];
        return Err(format!("{} violations; first:\n{}", r.violations(), first.dump));
    }
    let wanted = [
        Property::Capacity,
        Property::ReversalDuality,
        Property::DisjointSwap,
        Property::CountingInequality,
        Property::SummedBound,
        Property::FirstCall,
    ];
    let mut parts = Vec::new();
    for p in wanted {
        let t = r.tally(p).expect("tally");
        if t.checked == 0 {
            return Err(format!("{} never applied", p.name()));
        }
        parts.push(format!("{} {}", p.name(), t.checked));
    }
    Ok(format!("10000 sequences, 0 violations ({})", parts.join(", ")))
}

fn elimination() -> Check {
    let r = elimination_section(&SuiteConfig { seed: 1, trials: 1_000, n_max: 8, workers: 1 });
    let t = r.tally(Property::Elimination).expect("tally");
    if t.violations > 0 || t.checked != 1_000 {
        let detail = r.counterexamples.first().map_or(String::new(), |c| c.dump.clone());
        return Err(format!("{} of {} failed\n{detail}", t.violations, t.checked));
    }
    Ok("1000 planted cycles: 2 calls saved, dominance holds".into())
}

fn identity() -> Check {
    let mut mismatches = 0;
    let mut first = None;
    let mut negative = 0;
    for n in 2..=51i64 {
        for mp in 1..n {
            let c = check_identity(n, mp);
            if !c.equal {
                mismatches += 1;
                first.get_or_insert(c);
            }
            if (4..n).contains(&mp) && !(c.expanded_nonnegative && c.factored_nonnegative) {
                negative += 1;
            }
        }
    }
    match first {
        None if negative == 0 => Ok("identity holds for all 1 <= m' <= n-1 <= 50".into()),
        _ => {
            let c = first.expect("a mismatch when the check fails");
            Err(format!(
                "{mismatches} of 1275 points differ ({negative} negative on 4 <= m' <= n-1); first n={} m'={}: expanded {}, factored {}",
                c.n, c.m_prime, c.expanded, c.factored
            ))
        }
    }
}

fn conjecture() -> Check {
    let cfg = SearchConfig::default();
    let mut parts = Vec::new();
    for (n, k) in [(4, 3), (5, 3), (6, 3)] {
        let min = min_calls_full(n, k, &cfg).map_err(|e| e.to_string())?;
        let c = min.min_calls.ok_or_else(|| format!("least calls for n={n} k={k} inconclusive"))?;
        let reports = probe_conjecture(n, k, 0..c, &cfg).map_err(|e| e.to_string())?;
        let mut agree = 0;
        for r in &reports {
            if r.status != SearchStatus::Ok {
                return Err(format!("n={n} k={k} m={} inconclusive at budget {}", r.m, cfg.budget));
            }
            let (g, best) = (r.greedy_frontier_max.expect("ok"), r.global_max.expect("ok"));
            if g > best {
                return Err(format!("n={n} k={k} m={}: greedy {g} > global {best}", r.m));
            }
            agree += usize::from(g == best);
        }
        parts.push(format!("(n={n},k={k}) m<{c}: {agree}/{} agree", reports.len()));
    }
    Ok(parts.join("; "))
}

fn run_cli(args: &[&str]) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gossip")).args(args).output().map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("gossip-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let write = |name: &str, seq: &CallSequence| -> Result<String, String> {
        let path = dir.join(name);
        let text = gossip_core::format::write_sequence(seq).map_err(|e| e.to_string())?;
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        Ok(path.display().to_string())
    };
    let star = write("star.txt", &star_sequence(5, 5).map_err(|e| e.to_string())?)?;
    let cycle = write(
        "cycle.txt",
        &CallSequence::from_pairs(4, &[(4, 1), (1, 2), (2, 3), (3, 4)]).map_err(|e| e.to_string())?,
    )?;

    let commands: Vec<Vec<&str>> = vec![
        vec!["simulate", &star, "--trajectory"],
        vec!["star", "--n", "7", "--m", "9"],
        vec!["max-knowledge", "--n", "6", "--m", "7"],
        vec!["max-knowledge", "--n", "6", "--m", "7", "--budget", "3000"],
        vec!["verify-theorem", "--n", "5"],
        vec!["min-calls", "--n", "5"],
        vec!["min-calls", "--n", "5", "--k", "3"],
        vec!["probe-conjecture", "--n", "5", "--k", "3"],
        vec!["check-lemmas", "--seed", "7", "--trials", "2000"],
        vec!["eliminate", &cycle, "--don", "4"],
        vec!["normalize-tail", &star],
    ];
    let mut runs = 0;
    for cmd in &commands {
        let mut reference: Option<(Vec<u8>, i32)> = None;
        for workers in ["1", "1", "4"] {
            let mut args = cmd.clone();
            args.extend(["--format", "json", "--workers", workers]);
            let got = run_cli(&args)?;
            runs += 1;
            match &reference {
                None => reference = Some(got),
                Some(r) if *r != got => {
                    return Err(format!("`gossip {}` differs with --workers {workers}", cmd.join(" ")));
                }
                Some(_) => {}
            }
        }
        let (_, code) = reference.expect("ran");
        if !(code == 0 || code == 3) {
            return Err(format!("`gossip {}` exited {code}", cmd.join(" ")));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} commands, {runs} runs byte-identical across reruns and --workers 1/4", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "Theorem reproduction", Duration::from_secs(15 * 60), theorem_reproduction),
        (2, "Classic gossiping minimum", Duration::from_secs(15 * 60), classic_minimum),
        (3, "Star schedule identity", Duration::from_secs(1), star_identity),
        (4, "Boundary at m = 2n-4", Duration::from_secs(60), boundary),
        (5, "Lemma property suite", Duration::from_secs(120), lemma_suite),
        (6, "Elimination construction", Duration::from_secs(60), elimination),
        (7, "Algebraic identity", Duration::from_secs(1), identity),
        (8, "Conjecture probe", Duration::from_secs(15 * 60), conjecture),
        (9, "Determinism", Duration::from_secs(15 * 60), determinism),
    ];
    assert!(Path::new(env!("CARGO_BIN_EXE_gossip")).exists());

    let mut failed = 0;
    for (id, title, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (verdict, detail) = match result {
            Ok(_) if elapsed > limit => ("FAIL", format!("took {elapsed:.2?}, limit {limit:?}")),
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("{verdict} [{id}] {title} ({elapsed:.2?}): {detail}");
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
