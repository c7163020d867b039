//! Seeded property runs over generated sequences.
//!
//! Trial `j` of each section draws from its own RNG stream, so results are
//! the same whatever the number of workers.

use rayon::prelude::*;
use rand::Rng;
use serde::Serialize;

use crate::format::write_counterexample;
use crate::gen::{mutual_profile, planted_cycle, random_case, trial_rng};
use crate::lemmas::{
    check_capacity, check_counting_inequality, check_miscellaneous_isolation, check_summed_bound, eliminate_don,
    first_final_call_analysis, is_tail_connected, normalize_tail, swap_adjacent_disjoint, Outcome, TailOutcome,
};
use crate::model::{
    call_gains, compute_stats, final_state, find_temporal_path, reverse, simulate, temporal_reach_from_call,
    CallSequence, DonId, DonSet,
};
use crate::search::pool;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Monotonicity,
    StatSums,
    Reachability,
    Capacity,
    ReversalDuality,
    DisjointSwap,
    CountingInequality,
    SummedBound,
    FirstCall,
    TailNormalization,
    Elimination,
    MiscIsolation,
}

impl Property {
    pub const RANDOM: [Property; 10] = [
        Property::Monotonicity,
        Property::StatSums,
        Property::Reachability,
        Property::Capacity,
        Property::ReversalDuality,
        Property::DisjointSwap,
        Property::CountingInequality,
        Property::SummedBound,
        Property::FirstCall,
        Property::TailNormalization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Monotonicity => "monotonicity",
            Property::StatSums => "stat-sums",
            Property::Reachability => "reachability",
            Property::Capacity => "capacity",
            Property::ReversalDuality => "reversal-duality",
            Property::DisjointSwap => "disjoint-swap",
            Property::CountingInequality => "counting-inequality",
            Property::SummedBound => "summed-bound",
            Property::FirstCall => "first-call",
            Property::TailNormalization => "tail-normalization",
            Property::Elimination => "elimination",
            Property::MiscIsolation => "misc-isolation",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random sequences; also the number of planted cycles and profiles.
    pub trials: u64,
    pub n_max: usize,
    pub workers: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 1, trials: 10_000, n_max: 8, workers: 1 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PropertyTally {
    pub property: &'static str,
    pub checked: u64,
    pub inapplicable: u64,
    pub violations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub property: &'static str,
    pub trial: u64,
    pub detail: String,
    /// Sequence file text with the violated property noted on top.
    pub dump: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: u64,
    pub n_max: usize,
    pub tallies: Vec<PropertyTally>,
    pub counterexamples: Vec<Counterexample>,
}

impl SuiteReport {
    pub fn violations(&self) -> u64 {
        self.tallies.iter().map(|t| t.violations).sum()
    }

    pub fn tally(&self, property: Property) -> Option<&PropertyTally> {
        self.tallies.iter().find(|t| t.property == property.name())
    }
}

/// Counterexamples kept per property.
const KEEP: usize = 5;

enum Verdict {
    Holds,
    Inapplicable,
    Violated(String),
}

impl From<Outcome> for Verdict {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Holds => Verdict::Holds,
            Outcome::Inapplicable => Verdict::Inapplicable,
            Outcome::Violated => Verdict::Violated(String::new()),
        }
    }
}

fn verdict(ok: bool, detail: impl FnOnce() -> String) -> Verdict {
    if ok {
        Verdict::Holds
    } else {
        Verdict::Violated(detail())
    }
}

type Findings = Vec<(Property, Verdict)>;

fn check_monotonicity(seq: &CallSequence) -> Verdict {
    let traj = simulate(seq);
    for (t, w) in traj.windows(2).enumerate() {
        if !w[0].is_subset_of(&w[1]) {
            return Verdict::Violated(format!("knowledge shrinks at call {}", t + 1));
        }
    }
    let gained: u32 = call_gains(seq).iter().sum();
    let end = traj.last().expect("non-empty").total();
    verdict(gained + seq.n() as u32 == end, || format!("gains sum to {gained}, N = {end}"))
}

fn check_stat_sums(seq: &CallSequence) -> Verdict {
    let s = compute_stats(seq);
    let sa: u32 = s.a.iter().sum();
    let sb: u32 = s.b.iter().sum();
    let sd: u32 = s.d.iter().sum();
    let calls: u32 = seq.calls().iter().map(|c| c.size() as u32).sum();
    verdict(sa == s.total && sb == s.total && sd == calls, || {
        format!("sum a = {sa}, sum b = {sb}, N = {}, sum d = {sd}, call slots = {calls}", s.total)
    })
}

fn check_reachability(seq: &CallSequence) -> Verdict {
    let m = seq.len();
    for t in 1..=m {
        let reach = temporal_reach_from_call(seq, t).expect("t in range");
        let call = &seq.calls()[t - 1];
        let by_paths: DonSet = seq
            .dons()
            .filter(|&d| {
                call.members().iter().any(|&p| find_temporal_path(seq, p, d, t, m + 1, DonSet(0)).is_some())
            })
            .collect();
        if reach != by_paths {
            return Verdict::Violated(format!(
                "call {t}: reach {:?}, paths {:?}",
                reach.numbers(),
                by_paths.numbers()
            ));
        }
    }
    Verdict::Holds
}

fn check_reversal(seq: &CallSequence) -> Verdict {
    let s = compute_stats(seq);
    let r = compute_stats(&reverse(seq));
    verdict(r.a == s.b && r.b == s.a, || format!("a = {:?}, b = {:?}, reversed a = {:?}, b = {:?}", s.a, s.b, r.a, r.b))
}

fn check_swaps(seq: &CallSequence) -> Verdict {
    let end = final_state(seq);
    let mut any = false;
    for t in 1..seq.len() {
        if let Ok(swapped) = swap_adjacent_disjoint(seq, t) {
            any = true;
            if final_state(&swapped) != end {
                return Verdict::Violated(format!("swap at {t} changes the final state"));
            }
        }
    }
    if any {
        Verdict::Holds
    } else {
        Verdict::Inapplicable
    }
}

fn check_counting(seq: &CallSequence) -> Verdict {
    let mut any = false;
    for i in seq.dons() {
        let c = check_counting_inequality(seq, i);
        match c.outcome {
            Outcome::Violated => {
                return Verdict::Violated(format!("don {}: {} > {}", i.number(), c.lhs, c.rhs));
            }
            Outcome::Holds => any = true,
            Outcome::Inapplicable => {}
        }
    }
    if any {
        Verdict::Holds
    } else {
        Verdict::Inapplicable
    }
}

fn check_first_calls(seq: &CallSequence) -> Verdict {
    let classes = first_final_call_analysis(seq);
    if let Some(f) = classes.first_call_checks.iter().find(|f| f.outcome == Outcome::Violated) {
        return Verdict::Violated(format!("don {} learns gossip {} (first partner {})", f.other, f.don, f.partner));
    }
    if classes.first_call_checks.iter().any(|f| f.outcome == Outcome::Holds) {
        Verdict::Holds
    } else {
        Verdict::Inapplicable
    }
}

fn check_tail(seq: &CallSequence) -> Verdict {
    let n = seq.n();
    if n < 4 || seq.len() + 2 < n {
        return Verdict::Inapplicable;
    }
    let r = match normalize_tail(seq) {
        Ok(r) => r,
        Err(e) => return Verdict::Violated(e.to_string()),
    };
    let before = call_gains(seq);
    let after = call_gains(&r.sequence);
    let gains_kept = r.order.iter().enumerate().all(|(p, &j)| after[p] == before[j]);
    let calls_kept = r.order.iter().enumerate().all(|(p, &j)| r.sequence.calls()[p] == seq.calls()[j]);
    let branch_ok = match r.outcome {
        TailOutcome::TailConnected => is_tail_connected(&r.sequence),
        TailOutcome::IsolatedDon { don } => {
            let d = DonId::new(don).expect("valid don");
            r.sequence.calls()[..n - 2].iter().all(|c| !c.contains(d))
        }
    };
    verdict(gains_kept && calls_kept && branch_ok, || format!("normalized to {} ({:?})", r.sequence, r.outcome))
}

fn random_findings(seq: &CallSequence) -> Findings {
    vec![
        (Property::Monotonicity, check_monotonicity(seq)),
        (Property::StatSums, check_stat_sums(seq)),
        (Property::Reachability, check_reachability(seq)),
        (
            Property::Capacity,
            match check_capacity(seq).first() {
                None => Verdict::Holds,
                Some(v) => Verdict::Violated(format!("call {} jointly knows {} > {}", v.t, v.joint, v.bound)),
            },
        ),
        (Property::ReversalDuality, check_reversal(seq)),
        (Property::DisjointSwap, check_swaps(seq)),
        (Property::CountingInequality, check_counting(seq)),
        (Property::SummedBound, {
            let c = check_summed_bound(seq);
            match c.outcome {
                Outcome::Violated => Verdict::Violated(format!("2N = {} > {}", c.lhs, c.rhs)),
                o => o.into(),
            }
        }),
        (Property::FirstCall, check_first_calls(seq)),
        (Property::TailNormalization, check_tail(seq)),
    ]
}

fn elimination_findings(seq: &CallSequence) -> Findings {
    let x = DonId::new(seq.n()).expect("valid don");
    let v = match eliminate_don(seq, x) {
        Ok(cert) => verdict(
            cert.calls_saved == 2 && cert.transformed.len() + 2 == seq.len() && crate::lemmas::dominates(&cert),
            || format!("saved {} calls", cert.calls_saved),
        ),
        Err(e) => Verdict::Violated(e.to_string()),
    };
    vec![(Property::Elimination, v)]
}

fn profile_findings(seq: &CallSequence) -> Findings {
    let check = check_miscellaneous_isolation(seq, &first_final_call_analysis(seq));
    let v = match check.outcome {
        Outcome::Violated => Verdict::Violated(format!("c_i = 0 for dons {:?}", check.violations)),
        o => o.into(),
    };
    vec![(Property::MiscIsolation, v)]
}

const PLANTED_STREAM: u64 = 1 << 40;
const PROFILE_STREAM: u64 = 2 << 40;

/// Random sequences checked against every general property.
pub fn random_section(cfg: &SuiteConfig) -> SuiteReport {
    run(cfg, &Property::RANDOM, |trial| {
        let seq = random_case(&mut trial_rng(cfg.seed, trial), cfg.n_max);
        let f = random_findings(&seq);
        (seq, f)
    })
}

/// Sequences on up to 7 dons, at most 10 calls, where the last don hears
/// her own gossip; she is eliminated.
pub fn elimination_section(cfg: &SuiteConfig) -> SuiteReport {
    run(cfg, &[Property::Elimination], |trial| {
        let mut rng = trial_rng(cfg.seed, PLANTED_STREAM + trial);
        let dons = rng.gen_range(3..=7);
        let seq = planted_cycle(&mut rng, dons, 10);
        let f = elimination_findings(&seq);
        (seq, f)
    })
}

/// Profiles with mutual first and final rounds on 9 dons.
pub fn profile_section(cfg: &SuiteConfig) -> SuiteReport {
    run(cfg, &[Property::MiscIsolation], |trial| {
        let mut rng = trial_rng(cfg.seed, PROFILE_STREAM + trial);
        let seq = mutual_profile(&mut rng, 9, true).expect("nine dons admit covering profiles");
        let f = profile_findings(&seq);
        (seq, f)
    })
}

/// All three sections, merged.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut report = random_section(cfg);
    for part in [elimination_section(cfg), profile_section(cfg)] {
        report.tallies.extend(part.tallies);
        report.counterexamples.extend(part.counterexamples);
    }
    report
}

fn run<F>(cfg: &SuiteConfig, properties: &[Property], trial_fn: F) -> SuiteReport
where
    F: Fn(u64) -> (CallSequence, Findings) + Sync,
{
    let results: Vec<(CallSequence, Findings)> = if cfg.workers > 1 {
        pool(cfg.workers).install(|| (0..cfg.trials).into_par_iter().map(&trial_fn).collect())
    } else {
        (0..cfg.trials).map(&trial_fn).collect()
    };

    let mut tallies: Vec<PropertyTally> =
        properties.iter().map(|p| PropertyTally { property: p.name(), ..Default::default() }).collect();
    let mut counterexamples = Vec::new();
    for (trial, (seq, findings)) in results.into_iter().enumerate() {
        for (prop, v) in findings {
            let slot = properties.iter().position(|&p| p == prop).expect("listed property");
            let tally = &mut tallies[slot];
            match v {
                Verdict::Holds => tally.checked += 1,
                Verdict::Inapplicable => tally.inapplicable += 1,
                Verdict::Violated(detail) => {
                    tally.checked += 1;
                    tally.violations += 1;
                    if tally.violations as usize <= KEEP {
                        let note = if detail.is_empty() { prop.name().to_string() } else { format!("{}: {detail}", prop.name()) };
                        let dump = write_counterexample(&seq, &note).unwrap_or_default();
                        counterexamples.push(Counterexample { property: prop.name(), trial: trial as u64, detail, dump });
                    }
                }
            }
        }
    }
    SuiteReport { seed: cfg.seed, trials: cfg.trials, n_max: cfg.n_max, tallies, counterexamples }
}
