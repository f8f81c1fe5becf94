//! End-to-end acceptance criteria A1..A9. Prints one PASS/FAIL line per
//! criterion followed by its measurements, and exits nonzero if any fails.

use std::fs;
use std::panic;
use std::process::{Command, ExitCode};
use std::time::Instant;

use hornphase::analytics::{lambda_k_f64, p2_rescaled, q_runtime, queue_hit_prob, queue_residual, rho_dist};
use hornphase::chains::{
    binomial_pmf, estimate_pk, hitting_time_dp, poisson_pmf, state_chain_fidelity, tv_distance, ChainBounds,
};
use hornphase::experiment::curves::p_inf_at;
use hornphase::experiment::validate::oracle_agreement;
use hornphase::experiment::{run_point, run_sweep, KSpec, SweepConfig};
use hornphase::rng::{derive_seed, stream};
use hornphase::Result;
use rand_distr::{Distribution, Poisson};

const SEED: u64 = 1;
const A1_GRID: [f64; 6] = [0.4, 0.6667, 0.9, 1.1, 1.3863, 1.8];

type Criterion = fn() -> Result<Report>;

struct Report {
    passed: bool,
    lines: Vec<String>,
}

impl Report {
    fn new() -> Self {
        Report { passed: true, lines: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        self.lines.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }
}

fn a1() -> Result<Report> {
    let cfg = SweepConfig { k: KSpec::Fixed(2), n: 4000, chat_grid: A1_GRID.to_vec(), trials_per_point: 2000, seed: SEED, ..SweepConfig::default() };
    let mut r = Report::new();
    for rec in run_sweep(&cfg)? {
        let expected = p2_rescaled(rec.chat)?;
        let tol = if rec.chat <= 0.9 { 0.03 } else { 0.05 };
        let diff = (rec.sat_fraction - expected).abs();
        r.check(diff <= tol, format!("chat={:<7} sat_fraction={:.4} p2={:.4} |diff|={:.4} tol={tol}", rec.chat, rec.sat_fraction, expected, diff));
    }
    Ok(r)
}

fn mean_stages(n: u32, chat: f64, g: u64) -> Result<f64> {
    let rec = run_point(2, n, chat, 2000, SEED, g)?;
    Ok(rec.mean_iterations_sat.expect("satisfiable trials present"))
}

fn a2() -> Result<Report> {
    let mut r = Report::new();
    let low = mean_stages(4000, 0.6667, 0)?;
    let crit = mean_stages(4000, 1.0, 1)?;
    let high = mean_stages(4000, 2.0, 2)?;
    let q = q_runtime(0.6667 / lambda_k_f64(2)?)?.to_f64();
    r.check((low - 3.0).abs() <= 0.3, format!("mean stages at chat=0.6667: {low:.4} (3.0 +- 0.3)"));
    r.check(
        (low - q).abs() <= 0.3 && (low - 1.0 - q).abs() > 0.3,
        format!("convention: stages {low:.4}, assignments {:.4}, q={q:.4}; only stages match", low - 1.0),
    );
    r.check(crit >= 2.0 * low && crit >= 2.0 * high, format!("chat=1.0 mean {crit:.4} vs 2x({low:.4}, {high:.4})"));
    let scan = [mean_stages(1000, 1.0, 3)?, mean_stages(2000, 1.0, 4)?, crit];
    r.check(scan[0] < scan[1] && scan[1] < scan[2], format!("chat=1.0 mean over n=1000,2000,4000: {scan:.4?}"));
    Ok(r)
}

fn a3() -> Result<Report> {
    let mut r = Report::new();
    for lambda in [1.01, 1.1, 1.3863, 2.0, 5.0] {
        let rho = queue_hit_prob(lambda)?;
        let res = queue_residual(lambda, rho);
        r.check(res < 1e-10, format!("lambda={lambda}: rho={rho:.12} residual={res:.2e}"));
    }
    let rho = queue_hit_prob(2.0)?;
    r.check((rho - 0.203188).abs() <= 1e-6, format!("queue_hit_prob(2)={rho:.8} vs 0.203188 +- 1e-6"));

    // Independent simulation of Q_{t+1} = Q_t - 1 + Po(2) from Q_0 = 1. From
    // Q >= 40 the return probability is rho^40 < 1e-27.
    let trials = 1_000_000u64;
    let arrivals = Poisson::new(2.0).unwrap();
    let mut rng = stream(SEED, &[3]);
    let mut hits = 0u64;
    for _ in 0..trials {
        let mut q = 1u64;
        while q > 0 && q < 40 {
            q = q - 1 + arrivals.sample(&mut rng) as u64;
        }
        hits += u64::from(q == 0);
    }
    let mc = hits as f64 / trials as f64;
    let sigma = (rho * (1.0 - rho) / trials as f64).sqrt();
    r.check((mc - rho).abs() <= 3.0 * sigma, format!("Monte Carlo {mc:.6} vs {rho:.6}, 3 sigma = {:.6}", 3.0 * sigma));
    Ok(r)
}

fn a4() -> Result<Report> {
    let mut r = Report::new();
    for (g, chat) in [0.8, 1.2, 1.6, 2.0].into_iter().enumerate() {
        let chain = estimate_pk(3, chat, 100_000, ChainBounds::default(), derive_seed(SEED, &[3, g as u64]))?;
        let pur = run_point(3, 500, chat, 2000, SEED, g as u64)?;
        let diff = (chain.probability - pur.sat_fraction).abs();
        r.check(diff <= 0.04, format!("chat={chat}: chain={:.4} pur={:.4} |diff|={diff:.4} tol=0.04", chain.probability, pur.sat_fraction));
    }
    Ok(r)
}

fn a5() -> Result<Report> {
    // Ordering is checked on unsatisfiability probabilities u = 1 - p.
    let mut r = Report::new();
    let trials = 20_000;
    for (g, chat) in [1.1, 1.3, 1.6].into_iter().enumerate() {
        let mut est = Vec::new();
        for k in [2u32, 3, 6] {
            est.push(estimate_pk(k, chat, trials, ChainBounds::default(), derive_seed(SEED, &[k as u64, g as u64]))?);
        }
        let u: Vec<f64> = est.iter().map(|e| 1.0 - e.probability).collect();
        let se = |a: usize, b: usize| (est[a].standard_error().powi(2) + est[b].standard_error().powi(2)).sqrt();
        let ordered = u[0] <= u[1] + 3.0 * se(0, 1) && u[1] <= u[2] + 3.0 * se(1, 2);
        r.check(ordered, format!("chat={chat}: u2={:.4} u3={:.4} u6={:.4} (3 SE = {:.4}, {:.4})", u[0], u[1], u[2], 3.0 * se(0, 1), 3.0 * se(1, 2)));
        let limit = p_inf_at(chat)?;
        let diff = (est[2].probability - limit).abs();
        r.check(diff <= 0.08, format!("chat={chat}: p6={:.4} p_inf={limit:.4} |diff|={diff:.4} tol=0.08", est[2].probability));
    }
    Ok(r)
}

fn a6() -> Result<Report> {
    let mut r = Report::new();
    let t = oracle_agreement(SEED, 10_000)?;
    r.check(t.instances == 10_000, format!("instances={} satisfiable={}", t.instances, t.satisfiable));
    r.check(t.brute_force_disagreements == 0, format!("PUR vs brute force disagreements={}", t.brute_force_disagreements));
    r.check(t.witness_family_disagreements == 0, format!("witness family disagreements={}", t.witness_family_disagreements));
    r.check(t.invalid_witnesses == 0, format!("invalid PUR witnesses={}", t.invalid_witnesses));
    Ok(r)
}

fn a7() -> Result<Report> {
    let mut r = Report::new();
    for c in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let total = rho_dist(c, 40)?.total();
        r.check((total - 1.0).abs() <= 1e-12, format!("rho_dist({c}) total - 1 = {:.2e}", total - 1.0));
    }
    let head: f64 = rho_dist(1.0, 40)?.probabilities[..=4].iter().sum();
    r.check(head >= 1.0 - 1e-6, format!("sum of rho_k over k<=4 at c=1: {head:.10}"));
    for c in [0.5, 1.0, 2.0794, 3.0] {
        let dp = hitting_time_dp(2.0 * c / 3.0, 10_000)?.conditional_mean;
        let q = q_runtime(c)?.to_f64();
        r.check((dp - q).abs() < 1e-3, format!("c={c}: dp={dp:.6} q={q:.6} |diff|={:.2e}", (dp - q).abs()));
    }
    Ok(r)
}

fn a8() -> Result<Report> {
    let mut r = Report::new();
    for n in [10u64, 100, 1000] {
        for p in [0.001, 0.01, 0.1] {
            let d = tv_distance(&binomial_pmf(n, p)?, &poisson_pmf(n as f64 * p)?)?;
            let bound = (n as f64 * p * p).min(1.5 * p);
            r.check(d <= bound, format!("TV(B({n},{p}), Po) = {d:.3e} <= {bound:.3e}"));
        }
    }
    let d = tv_distance(&poisson_pmf(1.0)?, &poisson_pmf(1.1)?)?;
    r.check(d <= 0.1, format!("TV(Po(1), Po(1.1)) = {d:.4} <= 0.1"));
    for pt in state_chain_fidelity(2000, 1.0, 10_000, &[10, 20, 40], SEED)? {
        r.check(pt.tv < 0.05, format!("fidelity at n-{}: TV={:.4} (chain mean {:.3}, PUR mean {:.3})", pt.offset, pt.tv, pt.chain_mean, pt.pur_mean));
    }
    Ok(r)
}

fn a9() -> Result<Report> {
    let mut r = Report::new();
    let dir = tempfile::tempdir().expect("temp dir");
    let grid = A1_GRID.map(|c| c.to_string()).join(",");
    let mut bodies = Vec::new();
    for workers in ["1", "4"] {
        let out = dir.path().join(format!("w{workers}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_hornphase"))
            .args(["sweep", "--k", "2", "--n", "4000", "--chat", &grid, "--trials", "2000", "--seed", "1", "--workers", workers])
            .arg("--out")
            .arg(&out)
            .status()
            .expect("binary runs");
        r.check(status.success(), format!("sweep --workers {workers} exit {status}"));
        let text = fs::read_to_string(&out).unwrap_or_default();
        let stripped: Vec<String> = text.lines().map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string()).collect();
        bodies.push(stripped.join("\n"));
    }
    r.check(!bodies[0].is_empty() && bodies[0] == bodies[1], "CSV identical modulo wall_ms for --workers 1 and 4".into());
    Ok(r)
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] =
        [("A1", a1), ("A2", a2), ("A3", a3), ("A4", a4), ("A5", a5), ("A6", a6), ("A7", a7), ("A8", a8), ("A9", a9)];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let report = match panic::catch_unwind(run) {
            Ok(Ok(report)) => report,
            Ok(Err(e)) => Report { passed: false, lines: vec![format!("error: {e}")] },
            Err(_) => Report { passed: false, lines: vec!["panicked".into()] },
        };
        println!("{name} {} ({:.1}s)", if report.passed { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
        for line in &report.lines {
            println!("    {line}");
        }
        if !report.passed {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
