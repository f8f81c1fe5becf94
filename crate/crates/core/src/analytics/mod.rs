//! Limit laws of random Horn satisfiability and the density rescaling.
//!
//! Densities come in two conventions. The raw density `c` of a model with
//! `m = c * n^(k-1)` clauses, and the rescaled density `chat = m * n / H_k(n)`
//! that puts every `k` on one axis. For large `n` they are related by
//! `chat = c * lambda_k` with `lambda_k = k! / (k + 1)`; for `k = 2` the
//! critical point `c = 3/2` sits at `chat = 1`.

mod roots;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial_f64, clause_count, s_partial};
use crate::error::{domain, param, Result};
pub use roots::bisect;

/// Absolute tolerance of every scalar inversion.
pub const ROOT_TOL: f64 = 1e-12;

/// `lambda_k = k! / (k + 1)`, exact.
pub fn lambda_k(k: u32) -> Result<BigRational> {
    if k < 2 {
        return param(format!("lambda_k needs k >= 2, got {k}"));
    }
    let fact: BigUint = (1..=k as u64).map(BigUint::from).product();
    Ok(BigRational::new(BigInt::from(fact), BigInt::from(k + 1)))
}

pub fn lambda_k_f64(k: u32) -> Result<f64> {
    Ok(lambda_k(k)?.to_f64().unwrap_or(f64::INFINITY))
}

/// `F_2(x) = ln(x) / (x - 1)` on `(0, 1)`; decreasing from `+inf` to 1.
pub fn f2(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return domain(format!("F_2 is defined on (0, 1), got {x}"));
    }
    Ok(f2_unchecked(x))
}

fn f2_unchecked(x: f64) -> f64 {
    // x - 1 is exact for x in [1/2, 1), so ln_1p keeps full precision near 1.
    let d = x - 1.0;
    if x < 0.5 {
        x.ln() / d
    } else {
        d.ln_1p() / d
    }
}

/// The `x` in `(0, 1)` with `F_2(x) = y`, for `y > 1`.
pub fn f2_inverse(y: f64) -> Result<f64> {
    if !(y > 1.0) || !y.is_finite() {
        return domain(format!("F_2 takes values in (1, inf), got {y}"));
    }
    // Solve in u = ln x, where F_2 = u / (e^u - 1) is decreasing on (-inf, 0).
    // At u = -y - 1 the value exceeds y; near 0 it tends to 1 < y.
    let g = |u: f64| if u == 0.0 { 1.0 - y } else { u / u.exp_m1() - y };
    Ok(bisect(g, -y - 1.0, 0.0, ROOT_TOL).exp())
}

/// Limit satisfaction probability for `k = 2` at raw density `c` (model
/// `m = c n`): 1 up to `c = 3/2`, then `F_2^{-1}(2c/3)`.
pub fn p2(c: f64) -> Result<f64> {
    if !(c >= 0.0) || !c.is_finite() {
        return domain(format!("density must be finite and nonnegative, got {c}"));
    }
    if c <= 1.5 {
        return Ok(1.0);
    }
    f2_inverse(2.0 * c / 3.0)
}

/// `p2` on the rescaled axis: `p2(chat / lambda_2)`.
pub fn p2_rescaled(chat: f64) -> Result<f64> {
    p2(chat * 1.5)
}

/// The mean-field product `prod_{j >= 0} (1 - e^{-c 2^j})`, truncated once
/// the neglected factors can change it by less than `tol`.
///
/// This is the limiting probability that a uniform Horn formula with
/// `c 2^n` clauses is unsatisfiable; see [`p_inf`].
pub fn mean_field_product(c: f64, tol: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return domain(format!("c must be positive, got {c}"));
    }
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let mut product = 1.0;
    let mut j = 0i32;
    loop {
        product *= -(-c * 2f64.powi(j)).exp_m1();
        // sum_{i > j} e^{-c 2^i} <= b / (1 - b) with b = e^{-c 2^{j+1}}
        let b = (-c * 2f64.powi(j + 1)).exp();
        if b / (1.0 - b) < tol || j > 1100 {
            return Ok(product);
        }
        j += 1;
    }
}

/// Limit satisfaction probability of the uniform case at (rescaled)
/// density `c`: `1 - prod_{j >= 0} (1 - e^{-c 2^j})`.
pub fn p_inf(c: f64, tol: f64) -> Result<f64> {
    Ok(1.0 - mean_field_product(c, tol)?)
}

/// Distribution of the number of PUR iterations on satisfiable formulas of
/// the uniform model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationLaw {
    pub c: f64,
    /// probabilities[k] for k = 0..=kmax
    pub probabilities: Vec<f64>,
    /// Mass beyond kmax.
    pub tail_mass: f64,
}

impl IterationLaw {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum::<f64>() + self.tail_mass
    }
}

/// Unnormalized weights `w_k = e^{-2^k c} prod_{i=1}^{k-1} (1 - e^{-2^i c})`.
pub fn rho_weights(c: f64, kmax: u32) -> Result<Vec<f64>> {
    if !(c > 0.0) || !c.is_finite() {
        return domain(format!("c must be positive, got {c}"));
    }
    let mut prefix = 1.0;
    let mut out = Vec::with_capacity(kmax as usize + 1);
    for k in 0..=kmax as i32 {
        out.push((-c * 2f64.powi(k)).exp() * prefix);
        if k >= 1 {
            prefix *= -(-c * 2f64.powi(k)).exp_m1();
        }
    }
    Ok(out)
}

/// The iteration law with weights [`rho_weights`], normalized numerically.
/// The tail beyond `kmax` telescopes:
/// `sum_{k > kmax} w_k = prod_{i=1}^{kmax} (1 - a_i) * (1 - prod_{i > kmax} (1 - a_i))`
/// with `a_i = e^{-2^i c}`.
pub fn rho_dist(c: f64, kmax: u32) -> Result<IterationLaw> {
    let weights = rho_weights(c, kmax)?;
    let a = |i: i32| (-c * 2f64.powi(i)).exp();
    let head: f64 = (1..=kmax as i32).map(|i| -(-c * 2f64.powi(i)).exp_m1()).product();
    let mut log_rest = 0.0;
    let mut i = kmax as i32 + 1;
    loop {
        let ai = a(i);
        if ai == 0.0 || i > 1100 {
            break;
        }
        log_rest += (-ai).ln_1p();
        i += 1;
    }
    let tail = head * -(log_rest.exp_m1());
    let z: f64 = weights.iter().sum::<f64>() + tail;
    Ok(IterationLaw { c, probabilities: weights.iter().map(|w| w / z).collect(), tail_mass: tail / z })
}

/// A value on the extended half-line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

/// Limit expected PUR stage count on satisfiable `k = 2` formulas at raw
/// density `c`: `1 / (1 - p2(c) * (2/3) * c)`, infinite at `c = 3/2`.
///
/// The count includes the final accepting check, so an empty formula takes
/// one stage.
pub fn q_runtime(c: f64) -> Result<Extended> {
    if c == 1.5 {
        return Ok(Extended::Infinite);
    }
    let p = p2(c)?;
    Ok(Extended::Finite(1.0 / (1.0 - p * (2.0 / 3.0) * c)))
}

/// `chat = m n / H_k(n)` as an exact rational.
pub fn rescale_exact(n: u32, k: u32, m: u64) -> Result<BigRational> {
    let h = clause_count(n as u64, k as u64)?;
    Ok(BigRational::new(BigInt::from(m) * BigInt::from(n), BigInt::from(h)))
}

/// `chat = m n / H_k(n)`.
pub fn rescale(n: u32, k: u32, m: u64) -> Result<f64> {
    Ok(rescale_exact(n, k, m)?.to_f64().unwrap_or(f64::NAN))
}

pub use crate::horn::m_from_chat;

/// Closed-form expected counts `(x, y)` of positive and negative clauses of
/// length `i` at stage `t` (with `t` variables left) for `k`-Horn formulas
/// with `c n^(k-1)` clauses:
///
/// `x = (c/n) lambda_k i C(t, i) S_{k-i}^{n-t}`, `y = x / i`.
///
/// At `t = n` this is the initial count `(c/n) lambda_k i C(n, i)`, and it
/// solves the mean recurrence
/// `x_{i,t-1} = x_{i,t} (1 - i/t) + x_{i+1,t} i/t`,
/// `y_{i,t-1} = y_{i,t} (1 - i/t) + y_{i+1,t} (i+1)/t`.
pub fn expected_counts(n: u32, k: u32, c: f64, t: u32, i: u32) -> Result<(f64, f64)> {
    if !(2 <= i && i <= k && k <= n) {
        return param(format!("need 2 <= i <= k <= n, got i={i}, k={k}, n={n}"));
    }
    if t > n {
        return param(format!("stage {t} exceeds n={n}"));
    }
    let s = s_partial((n - t) as u64, (k - i) as u64).to_f64().unwrap_or(f64::INFINITY);
    let y = c / n as f64 * lambda_k_f64(k)? * binomial_f64(t as u64, i as u64) * s;
    Ok((i as f64 * y, y))
}

/// Probability that the queue `Q_0 = 1`, `Q_{t+1} = Q_t - 1 + Po(lambda)`
/// ever reaches 0: the smallest root of `rho = e^{lambda (rho - 1)}` in
/// `(0, 1]`.
pub fn queue_hit_prob(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return domain(format!("arrival rate must be positive, got {lambda}"));
    }
    if lambda <= 1.0 {
        return Ok(1.0);
    }
    // g(0) = -e^{-lambda} < 0 and g(1/lambda) > 0 because ln(1/lambda) > 1 - lambda.
    let g = |r: f64| r - (lambda * (r - 1.0)).exp();
    Ok(bisect(g, 0.0, 1.0 / lambda, ROOT_TOL))
}

/// `|rho - e^{lambda (rho - 1)}|`.
pub fn queue_residual(lambda: f64, rho: f64) -> f64 {
    (rho - (lambda * (rho - 1.0)).exp()).abs()
}
