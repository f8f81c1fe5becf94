use hornphase::analytics::{q_runtime, queue_hit_prob};
use hornphase::chains::{estimate_pk, hitting_time_dp, state_chain_fidelity, ChainBounds};

#[test]
fn k2_chain_reduces_to_constant_rate_queue() {
    for &chat in &[0.5, 1.0, 1.4, 2.0] {
        // The critical queue has a heavy-tailed emptying time; a long horizon
        // keeps undecided runs below the error limit.
        let bounds = if chat == 1.0 { ChainBounds { horizon: 4_000_000, ..Default::default() } } else { ChainBounds::default() };
        let est = estimate_pk(2, chat, 20_000, bounds, 21).unwrap();
        let rho = queue_hit_prob(chat).unwrap();
        let se = (rho * (1.0 - rho) / est.trials as f64).sqrt();
        let slack = 3.0 * se + est.undecided_fraction;
        assert!((est.probability - rho).abs() <= slack.max(1e-12), "chat={chat}: {} vs {rho} (undecided {})", est.probability, est.undecided);
    }
}

#[test]
fn dp_conditional_mean_matches_runtime_formula() {
    for &c in &[0.5, 1.0, 2.08, 3.0] {
        let h = hitting_time_dp(2.0 * c / 3.0, 10_000).unwrap();
        let q = q_runtime(c).unwrap().to_f64();
        assert!((h.conditional_mean - q).abs() < 1e-3, "c={c}");
    }
}

#[test]
fn escape_threshold_is_not_binding() {
    for &(k, chat) in &[(3, 1.2), (3, 2.0), (5, 0.9)] {
        let base = estimate_pk(k, chat, 20_000, ChainBounds::default(), 8).unwrap();
        let wide = estimate_pk(k, chat, 20_000, ChainBounds { escape_threshold: 200, ..Default::default() }, 8).unwrap();
        assert!((base.probability - wide.probability).abs() < base.half_width_95, "k={k} chat={chat}");
    }
}

#[test]
fn state_chain_matches_instrumented_pur() {
    let points = state_chain_fidelity(2000, 1.0, 10_000, &[10, 20, 40], 4).unwrap();
    for p in points {
        assert!(p.tv < 0.05, "{p:?}");
    }
}
