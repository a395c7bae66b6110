//! Acceptance suite. Every criterion prints one PASS/FAIL line; the last
//! criterion reruns the others with the same seeds and compares reports.
//! Runs without the test harness so the lines are never captured.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use npshare_core::commitments::{crs_gen, supports_disjoint, Opening};
use npshare_core::compiler::sat::{solve, SatOutcome};
use npshare_core::compiler::CnfRelation;
use npshare_core::harness::adversaries::{Constant, LeakReader, MixtureSampler, PlantedBias};
use npshare_core::harness::equivalence::{ind_to_sem, sem_to_ind, ZeroShareSimulator};
use npshare_core::harness::hybrid::{hybrid_locate, hybrid_value, ListDistinguisher, SampleSource};
use npshare_core::harness::reduction::{dprime_game, mest};
use npshare_core::harness::{ind_game, run_trials, sem_game, Execution, GameConfig, IndSample};
use npshare_core::induced::{exhaustive_witness_search, MPrimeInstance};
use npshare_core::prg::Expander;
use npshare_core::scheme::{recon, setup, Scheme, SchemeParams};
use npshare_core::structures::{AccessStructure, Effort, PartySet};
use npshare_core::we::{Backend, SecretMessage};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const MASTER: u64 = 0x00C0_FFEE;

// Criterion 1
const COMPLETENESS_RUNS: usize = 100;
const COMPLETENESS_BUDGET: Duration = Duration::from_secs(30);
// Criterion 2
const SOUNDNESS_INSTANCES: usize = 50;
const SOUNDNESS_BUDGET: Duration = Duration::from_secs(60);
// Criterion 3
const MEST_EPS: f64 = 0.3;
const MEST_N: usize = 10;
const MEST_RUNS: usize = 100;
const MEST_HIGH_MIN: usize = 95;
const MEST_LOW_MAX: usize = 5;
const MEST_BUDGET: Duration = Duration::from_secs(60);
// Criterion 4
const DPRIME_EPS: f64 = 0.3;
const DPRIME_N: usize = 6;
const DPRIME_RUNS: usize = 200;
const DPRIME_MIN_GAP: f64 = 0.03;
const DPRIME_BUDGET: Duration = Duration::from_secs(300);
// Criterion 5
const HYBRID_N: usize = 6;
const HYBRID_POSITION: usize = 3;
const HYBRID_GAP: f64 = 0.8;
const HYBRID_SLACK: f64 = 0.05;
const HYBRID_TRIALS: usize = 4000;
const HYBRID_BUDGET: Duration = Duration::from_secs(60);
// Criterion 6
const EQUIV_TRIALS: usize = 1000;
const EQUIV_SEM_IND_TOL: f64 = 0.1;
const EQUIV_BASELINE_TOL: f64 = 0.05;
// Criterion 7
const BINDING_DRAWS: usize = 100;
const BINDING_MIN: usize = 99;
const BINDING_BUDGET: Duration = Duration::from_secs(60);
// Criterion 8
const EQUIV_RANDOM_INSTANCES: usize = 500;

struct Verdict {
    pass: bool,
    detail: String,
    report: Value,
}

fn secret(rng: &mut dyn RngCore, len: usize) -> SecretMessage {
    let mut b = vec![0u8; len];
    rng.fill_bytes(&mut b);
    SecretMessage::new(b).unwrap()
}

fn toy(backend: Backend, k: usize) -> SchemeParams {
    SchemeParams {
        seed_bits: k,
        expander: Expander::Toy,
        lambda: 64,
        backend,
    }
}

fn majority_with_switch() -> AccessStructure {
    // (p1 ∧ p2) ∨ (p3 ∧ p4), with a witness bit selecting the branch.
    serde_json::from_value(json!({
        "kind": "monotone-circuit", "n": 4,
        "payload": {"witness_bits": 1, "nodes": [
            {"party": 1}, {"party": 2}, {"party": 3}, {"party": 4},
            {"witness": 0}, {"not_witness": 0},
            {"and": [0, 1]}, {"and": [2, 3]},
            {"and": [6, 4]}, {"and": [7, 5]}, {"or": [8, 9]}
        ]}
    }))
    .unwrap()
}

fn random_qualified(s: &AccessStructure, rng: &mut dyn RngCore) -> (PartySet, npshare_core::structures::InnerWitness) {
    loop {
        let x = PartySet::from_mask(s.n(), rng.next_u64());
        if let Some(w) = s.find_witness(&x).unwrap() {
            return (x, w);
        }
    }
}

fn random_unqualified(s: &AccessStructure, rng: &mut dyn RngCore) -> PartySet {
    loop {
        let x = PartySet::from_mask(s.n(), rng.next_u64());
        if !s.evaluate(&x, Effort::Exhaustive).unwrap() {
            return x;
        }
    }
}

fn completeness() -> Verdict {
    let configs: Vec<(AccessStructure, Backend)> = [
        AccessStructure::threshold(8, 5),
        majority_with_switch(),
        AccessStructure::hamiltonian(5),
        AccessStructure::matching(4),
    ]
    .into_iter()
    .flat_map(|s| [(s.clone(), Backend::Idealized), (s, Backend::Cnf)])
    .collect();
    let mut results = Vec::new();
    for (idx, (s, backend)) in configs.iter().enumerate() {
        let ok = run_trials(Execution::Parallel, MASTER ^ idx as u64, COMPLETENESS_RUNS, |_, rng| {
            let msg = secret(rng, 16);
            let d = setup(s.clone(), &msg, &toy(*backend, 6), rng).unwrap();
            let (x, w) = random_qualified(s, rng);
            recon(&d.shares_of(&x), &x, &w) == Ok(Some(msg))
        })
        .into_iter()
        .filter(|&b| b)
        .count();
        results.push(json!({"structure": s.kind().name(), "n": s.n(), "backend": backend.name(), "exact": ok}));
    }
    let pass = results.iter().all(|r| r["exact"] == COMPLETENESS_RUNS);
    Verdict {
        pass,
        detail: format!("{} configurations x {COMPLETENESS_RUNS} runs", results.len()),
        report: json!(results),
    }
}

/// `Com(i, r_i)` on `x`, `Com(n + i, r_i)` elsewhere.
fn substituted_instance(s: &AccessStructure, x: &PartySet, k: usize, rng: &mut dyn RngCore) -> MPrimeInstance {
    let n = s.n();
    let crs = crs_gen(n, k, Expander::Toy, rng).unwrap();
    let coms = (1..=n)
        .map(|i| {
            let op = Opening::random(&crs, rng);
            let v = if x.contains(i) { i } else { n + i };
            npshare_core::commitments::commit(v, &op, &crs).unwrap()
        })
        .collect();
    MPrimeInstance::new(crs, coms, s.clone()).unwrap()
}

fn soundness() -> Verdict {
    let structures = [AccessStructure::hamiltonian(4), AccessStructure::matching(4), AccessStructure::threshold(4, 3)];
    let rows = run_trials(Execution::Parallel, MASTER ^ 2, SOUNDNESS_INSTANCES, |i, rng| {
        let s = &structures[i % structures.len()];
        let x = random_unqualified(s, rng);
        let inst = substituted_instance(s, &x, 8, rng);
        let none = exhaustive_witness_search(&inst).unwrap().is_none();
        let unsat = solve(CnfRelation::compile(&inst).unwrap().cnf()) == SatOutcome::Unsat;
        (none, unsat)
    });
    let none = rows.iter().filter(|r| r.0).count();
    let unsat = rows.iter().filter(|r| r.1).count();
    Verdict {
        pass: none == SOUNDNESS_INSTANCES && unsat == SOUNDNESS_INSTANCES,
        detail: format!("search none {none}/{SOUNDNESS_INSTANCES}, cnf unsat {unsat}/{SOUNDNESS_INSTANCES}"),
        report: json!({"search_none": none, "cnf_unsat": unsat}),
    }
}

fn mest_scheme(seed: u64) -> Scheme {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Scheme::new(AccessStructure::threshold(MEST_N, 3), &toy(Backend::Leaky, 6), &mut rng).unwrap()
}

fn qualified_sample(n: usize, rng: &mut dyn RngCore) -> IndSample {
    let s0 = secret(rng, 4);
    let mut s1 = secret(rng, 4).into_bytes();
    s1[0] = !s0.as_bytes()[0];
    IndSample {
        s0,
        s1: SecretMessage::new(s1).unwrap(),
        x: PartySet::new(n, [1, 2, 3]).unwrap(),
        sigma: Vec::new(),
    }
}

fn mest_fire_count(scheme: &Scheme, d: &PlantedBias, master: u64) -> (usize, Vec<(usize, usize)>) {
    let outcomes = run_trials(Execution::Parallel, master, MEST_RUNS, |_, rng| {
        let sample = qualified_sample(MEST_N, rng);
        mest(&sample, MEST_EPS, scheme, d, rng).unwrap()
    });
    let fired = outcomes.iter().filter(|o| o.fired).count();
    (fired, outcomes.iter().map(|o| (o.q0, o.q1)).collect())
}

fn mest_calibration() -> Verdict {
    let scheme = mest_scheme(MASTER ^ 3);
    // Dver success 1.0 under A0 against 0.5 under A1: bias 0.5 >= eps/3.
    let high = PlantedBias { p0: 1.0, p1: 0.5 };
    // 1.0 against 0.97: bias 0.03 = eps/10.
    let low = PlantedBias {
        p0: 1.0,
        p1: 1.0 - MEST_EPS / 10.0,
    };
    let (hi, hi_q) = mest_fire_count(&scheme, &high, MASTER ^ 31);
    let (lo, lo_q) = mest_fire_count(&scheme, &low, MASTER ^ 32);
    Verdict {
        pass: hi >= MEST_HIGH_MIN && lo <= MEST_LOW_MAX,
        detail: format!("bias 0.5 fired {hi}/{MEST_RUNS}, bias eps/10 fired {lo}/{MEST_RUNS}"),
        report: json!({"high": hi, "low": lo, "high_q": hi_q, "low_q": lo_q}),
    }
}

fn end_to_end() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER ^ 4);
    let scheme = Scheme::new(AccessStructure::threshold(DPRIME_N, 3), &toy(Backend::Leaky, 6), &mut rng).unwrap();
    let sampler = MixtureSampler {
        unqualified: PartySet::new(DPRIME_N, [1]).unwrap(),
        qualified: PartySet::new(DPRIME_N, [1, 2, 3]).unwrap(),
        p_unqualified: 0.5,
        secret_len: 4,
    };
    let cfg = GameConfig::new(DPRIME_RUNS, MASTER ^ 41);
    let report = dprime_game(&scheme, &sampler, &LeakReader, DPRIME_EPS, &cfg).unwrap();
    Verdict {
        pass: report.advantage >= DPRIME_MIN_GAP,
        detail: format!(
            "|Pr[D'=1|A0] - Pr[D'=1|A1]| = {:.3} ({}/{} vs {}/{})",
            report.advantage, report.count0, DPRIME_RUNS, report.count1, DPRIME_RUNS
        ),
        report: serde_json::to_value(&report).unwrap(),
    }
}

struct ValueSource;
impl SampleSource for ValueSource {
    fn sample(&self, value: usize, _: &mut dyn RngCore) -> Vec<u8> {
        vec![value as u8]
    }
}

/// 1 with probability 0.9 when position `j` holds a low value, 0.1 otherwise.
struct PositionDetector {
    j: usize,
    n: usize,
}

impl PositionDetector {
    fn prob(&self, low: bool) -> f64 {
        if low {
            0.5 + HYBRID_GAP / 2.0
        } else {
            0.5 - HYBRID_GAP / 2.0
        }
    }
}

impl ListDistinguisher for PositionDetector {
    fn distinguish(&self, list: &[Vec<u8>], rng: &mut dyn RngCore) -> bool {
        rng.gen_bool(self.prob(list[self.j - 1][0] as usize <= self.n))
    }
}

fn hybrid() -> Verdict {
    let d = PositionDetector {
        j: HYBRID_POSITION,
        n: HYBRID_N,
    };
    let cfg = GameConfig::new(HYBRID_TRIALS, MASTER ^ 5);
    let (report, _) = hybrid_locate(&d, HYBRID_N, &cfg, &ValueSource).unwrap();
    // Exact hybrid probabilities by enumeration of the planted detector.
    let exact: Vec<f64> = (0..=HYBRID_N)
        .map(|i| d.prob(hybrid_value(HYBRID_N, i, HYBRID_POSITION) <= HYBRID_N))
        .collect();
    let exact_gaps: Vec<f64> = (1..=HYBRID_N).map(|i| exact[i - 1] - exact[i]).collect();
    let best = (1..=HYBRID_N)
        .max_by(|&a, &b| exact_gaps[a - 1].abs().total_cmp(&exact_gaps[b - 1].abs()))
        .unwrap();
    let bound = HYBRID_GAP / HYBRID_N as f64 - HYBRID_SLACK;
    let within = report
        .gaps
        .iter()
        .zip(&exact_gaps)
        .all(|(e, x)| (e - x).abs() <= 2.0 * report.radius);
    let pass = report.located_gap().abs() >= bound && report.index == best && report.position == HYBRID_POSITION && within;
    Verdict {
        pass,
        detail: format!(
            "index {} (position {}), gap {:.3} >= {:.3}, brute force agrees: {}",
            report.index,
            report.position,
            report.located_gap(),
            bound,
            report.index == best && within
        ),
        report: serde_json::to_value(&report).unwrap(),
    }
}

fn definition_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER ^ 6);
    let structure = AccessStructure::threshold(4, 2);
    let leaky = Scheme::new(structure.clone(), &toy(Backend::Leaky, 6), &mut rng).unwrap();
    let sampler = MixtureSampler {
        unqualified: PartySet::new(4, [1]).unwrap(),
        qualified: PartySet::new(4, [1, 2]).unwrap(),
        p_unqualified: 0.5,
        secret_len: 1,
    };
    let identity = |s: &[u8]| s.to_vec();
    let simulator = ZeroShareSimulator {
        scheme: &leaky,
        learner: &LeakReader,
    };
    let cfg = GameConfig::new(EQUIV_TRIALS, MASTER ^ 61);
    let sem = sem_game(&leaky, &sampler, &LeakReader, &simulator, &identity, &cfg).unwrap();
    let (samp2, d2) = sem_to_ind(&sampler, &LeakReader, &identity);
    let ind = ind_game(&leaky, &samp2, &d2, &cfg).unwrap();
    let diff = (sem.advantage - ind.advantage).abs();

    // Baseline simulator against every dictator function.
    let ideal = Scheme::new(structure, &toy(Backend::Idealized, 6), &mut rng).unwrap();
    let fixed = npshare_core::harness::adversaries::FixedSampler(IndSample {
        s0: SecretMessage::new(vec![0x00]).unwrap(),
        s1: SecretMessage::new(vec![0xA5]).unwrap(),
        x: PartySet::new(4, [1]).unwrap(),
        sigma: Vec::new(),
    });
    let t2s = ind_to_sem(&fixed, &Constant(false), 8, 4, &mut rng).unwrap();
    let mut rates = Vec::new();
    for &bit in &t2s.dictators {
        let f = npshare_core::harness::equivalence::Dictator(bit);
        let learner = t2s.learner(bit);
        let sim = t2s.simulator(bit);
        let r = sem_game(&ideal, &t2s.sampler, &learner, &sim, &f, &GameConfig::new(EQUIV_TRIALS, MASTER ^ (62 + bit as u64))).unwrap();
        rates.push(r.unconditioned.unwrap().count1 as f64 / EQUIV_TRIALS as f64);
    }
    let baseline_ok = rates.iter().all(|r| (r - 0.5).abs() <= EQUIV_BASELINE_TOL);
    Verdict {
        pass: diff <= EQUIV_SEM_IND_TOL && baseline_ok,
        detail: format!(
            "sem gap {:.3} vs ind advantage {:.3}; baseline over {} dictators in [{:.3}, {:.3}]",
            sem.advantage,
            ind.advantage,
            rates.len(),
            rates.iter().copied().fold(1.0, f64::min),
            rates.iter().copied().fold(0.0, f64::max)
        ),
        report: json!({"sem": sem, "ind": ind, "dictators": t2s.dictators, "baseline": rates}),
    }
}

fn binding() -> Verdict {
    let n = 4;
    let rows = run_trials(Execution::Parallel, MASTER ^ 7, BINDING_DRAWS, |_, rng| {
        let crs = crs_gen(n, 8, Expander::SplitMix64, rng).unwrap();
        (1..=2 * n).all(|a| (a + 1..=2 * n).all(|b| supports_disjoint(&crs, a, b).unwrap()))
    });
    let good = rows.iter().filter(|&&b| b).count();
    Verdict {
        pass: good >= BINDING_MIN,
        detail: format!("{good}/{BINDING_DRAWS} CRS draws perfectly binding"),
        report: json!({"binding": good}),
    }
}

fn reduction_path() -> Verdict {
    let structures = [AccessStructure::threshold(4, 2), AccessStructure::threshold(3, 3), majority_with_switch()];
    let mut sweep = Vec::new();
    let mut identical = true;
    for (idx, s) in structures.iter().enumerate() {
        let msg = secret(&mut ChaCha8Rng::seed_from_u64(MASTER ^ 80 ^ idx as u64), 8);
        let deal = |backend| {
            let mut rng = ChaCha8Rng::seed_from_u64(MASTER ^ 81 ^ idx as u64);
            setup(s.clone(), &msg, &toy(backend, 6), &mut rng).unwrap()
        };
        let (ideal, cnf) = (deal(Backend::Idealized), deal(Backend::Cnf));
        let mut agree = 0;
        for mask in 1..(1u64 << s.n()) {
            let x = PartySet::from_mask(s.n(), mask);
            let w = s.find_witness(&x).unwrap().unwrap_or(npshare_core::structures::InnerWitness::Empty);
            let a = recon(&ideal.shares_of(&x), &x, &w).unwrap();
            let b = recon(&cnf.shares_of(&x), &x, &w).unwrap();
            let expected = s.evaluate(&x, Effort::Exhaustive).unwrap().then(|| msg.clone());
            if a == b && a == expected {
                agree += 1;
            } else {
                identical = false;
            }
        }
        sweep.push(agree);
    }

    let rows = run_trials(Execution::Parallel, MASTER ^ 8, EQUIV_RANDOM_INSTANCES, |i, rng| {
        let s = &structures[i % structures.len()];
        let x = PartySet::from_mask(s.n(), rng.next_u64());
        let inst = substituted_instance(s, &x, 4, rng);
        let oracle = exhaustive_witness_search(&inst).unwrap().is_some();
        let sat = matches!(solve(CnfRelation::compile(&inst).unwrap().cnf()), SatOutcome::Sat(_));
        (oracle, sat)
    });
    let matches = rows.iter().filter(|r| r.0 == r.1).count();
    let members = rows.iter().filter(|r| r.0).count();
    Verdict {
        pass: identical && matches == EQUIV_RANDOM_INSTANCES,
        detail: format!(
            "sweep identical: {identical} ({sweep:?} sets); sat matches oracle {matches}/{EQUIV_RANDOM_INSTANCES} ({members} members)"
        ),
        report: json!({"sweep": sweep, "matches": matches, "members": members}),
    }
}

type Criterion = (&'static str, Option<Duration>, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 completeness", Some(COMPLETENESS_BUDGET), completeness),
        ("2 no-witness soundness", Some(SOUNDNESS_BUDGET), soundness),
        ("3 mest calibration", Some(MEST_BUDGET), mest_calibration),
        ("4 end-to-end reduction", Some(DPRIME_BUDGET), end_to_end),
        ("5 hybrid locator", Some(HYBRID_BUDGET), hybrid),
        ("6 definition equivalence", None, definition_equivalence),
        ("7 commitment binding", Some(BINDING_BUDGET), binding),
        ("8 reduction-path equivalence", None, reduction_path),
    ];
    let mut all = true;
    let mut first_reports = Vec::new();
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let pass = v.pass && in_time;
        all &= pass;
        println!(
            "criterion {name}: {} - {} [{:.1}s{}]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            budget.map(|b| format!(" of {}s", b.as_secs())).unwrap_or_default()
        );
        first_reports.push(serde_json::to_string(&v.report).unwrap());
    }
    let mismatched: Vec<&str> = criteria
        .iter()
        .zip(&first_reports)
        .filter(|((_, _, run), first)| &serde_json::to_string(&run().report).unwrap() != *first)
        .map(|((name, _, _), _)| *name)
        .collect();
    let repro = mismatched.is_empty();
    all &= repro;
    println!(
        "criterion 9 reproducibility: {} - {}",
        if repro { "PASS" } else { "FAIL" },
        if repro {
            "all reports byte-identical on rerun".to_string()
        } else {
            format!("differing reports: {mismatched:?}")
        }
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
