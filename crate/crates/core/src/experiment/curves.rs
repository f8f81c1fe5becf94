//! Limit curves on the common rescaled-density axis: the closed forms for
//! `k = 2` and the uniform case, and chain estimates for finite `k >= 3`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::CurvesConfig;
use super::sweep::{with_workers, WriteError};
use crate::analytics::{p2_rescaled, p_inf};
use crate::chains::{estimate_pk, HitEstimate};
use crate::error::Result;

/// Truncation tolerance of the mean-field product.
pub const PRODUCT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub chat: f64,
    pub p2: f64,
    pub p_inf: f64,
    /// One estimate per entry of [`CurvesConfig::chain_ks`].
    pub chains: Vec<HitEstimate>,
}

/// Limit satisfaction probability of the uniform case at `chat`.
pub fn p_inf_at(chat: f64) -> Result<f64> {
    if chat == 0.0 {
        return Ok(1.0);
    }
    p_inf(chat, PRODUCT_TOL)
}

pub fn run_curves(config: &CurvesConfig) -> Result<Vec<CurvePoint>> {
    config.validate()?;
    let ks = config.chain_ks();
    with_workers(config.workers, || {
        config
            .chat_grid
            .iter()
            .enumerate()
            .map(|(g, &chat)| {
                let chains = ks
                    .iter()
                    .map(|&k| {
                        let seed = crate::rng::derive_seed(config.seed, &[u64::from(k), g as u64]);
                        estimate_pk(k, chat, config.trials_per_point, config.bounds(), seed)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CurvePoint { chat, p2: p2_rescaled(chat)?, p_inf: p_inf_at(chat)?, chains })
            })
            .collect()
    })
}

/// Header: `chat,p2,p_inf` then `p{k},p{k}_hw` for each chain `k`.
pub fn curves_header(ks: &[u32]) -> Vec<String> {
    let mut h = vec!["chat".to_string(), "p2".to_string(), "p_inf".to_string()];
    for k in ks {
        h.push(format!("p{k}"));
        h.push(format!("p{k}_hw"));
    }
    h
}

pub fn write_curves<W: Write>(out: W, ks: &[u32], points: &[CurvePoint]) -> Result<(), WriteError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(curves_header(ks))?;
    for p in points {
        let mut row = vec![p.chat.to_string(), p.p2.to_string(), p.p_inf.to_string()];
        for e in &p.chains {
            row.push(e.probability.to_string());
            row.push(e.half_width_95.to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::KSpec;

    #[test]
    fn analytic_columns() {
        let cfg = CurvesConfig { k_list: vec![KSpec::Fixed(2), KSpec::Uniform], chat_grid: vec![0.0, 1.0, 1.2], workers: 1, ..Default::default() };
        let pts = run_curves(&cfg).unwrap();
        assert_eq!(pts[0].p2, 1.0);
        assert_eq!(pts[0].p_inf, 1.0);
        assert_eq!(pts[1].p2, 1.0);
        assert!((pts[2].p2 - 0.686).abs() < 1e-3, "{}", pts[2].p2);
        assert!(pts.iter().all(|p| p.chains.is_empty()));
        let mut buf = Vec::new();
        write_curves(&mut buf, &[], &pts).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("chat,p2,p_inf\n0,1,1\n"));
    }

    #[test]
    fn chain_columns_sit_between_limits() {
        let cfg = CurvesConfig { k_list: vec![KSpec::Fixed(3)], chat_grid: vec![1.2], trials_per_point: 20_000, workers: 1, ..Default::default() };
        let pts = run_curves(&cfg).unwrap();
        let p3 = &pts[0].chains[0];
        // Below the k = 2 curve and above the uniform limit, up to noise.
        assert!(p3.probability <= pts[0].p2 + 3.0 * p3.half_width_95);
        assert!(p3.probability >= pts[0].p_inf - 3.0 * p3.half_width_95);
        assert_eq!(curves_header(&[3]), vec!["chat", "p2", "p_inf", "p3", "p3_hw"]);
    }
}
