//! Special functions: log-gamma, Jacobi polynomials and Gauss–Jacobi rules.
//!
//! Everything here is plain `f64`. Gamma-function ratios that appear in the
//! basis normalization are formed in log space so that degrees of order 10^4
//! never overflow.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Below this argument the Stirling series is not used directly; the
/// argument is shifted upward with the recurrence instead.
const STIRLING_MIN: f64 = 15.0;

/// ln Γ(x) for x > 0. Returns NaN outside the domain; see [`log_gamma`] for
/// the checked variant.
pub fn ln_gamma(x: f64) -> f64 {
    if !(x > 0.0) || !x.is_finite() {
        return f64::NAN;
    }
    if x >= STIRLING_MIN {
        return stirling(x);
    }
    // Γ(x) = Γ(x + k) / (x (x+1) ... (x+k-1))
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < STIRLING_MIN {
        product *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - product.ln()
}

// Series coefficients are B_{2k} / (2k (2k-1)).
fn stirling(z: f64) -> f64 {
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + stirling_series(z)
}

fn stirling_series(z: f64) -> f64 {
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    C.iter().rev().fold(0.0, |acc, &c| acc * inv2 + c) * inv
}

/// ln(Γ(x + d) / Γ(x)) for x > 0, x + d > 0.
///
/// For large x the two log-gammas are each of size x ln x; subtracting them
/// would lose about log10(x ln x) digits, so the Stirling forms are
/// combined analytically instead.
pub fn ln_gamma_ratio(x: f64, d: f64) -> f64 {
    if x >= STIRLING_MIN && x + d >= STIRLING_MIN {
        (x - 0.5) * (d / x).ln_1p() + d * (x + d).ln() - d + stirling_series(x + d)
            - stirling_series(x)
    } else {
        ln_gamma(x + d) - ln_gamma(x)
    }
}

/// Checked ln Γ(x).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "log_gamma requires a finite positive argument, got {x}"
        )));
    }
    Ok(ln_gamma(x))
}

fn check_jacobi_params(a: f64, b: f64) -> Result<()> {
    if !(a > -1.0 && b > -1.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Jacobi exponents must exceed -1, got ({a}, {b})"
        )));
    }
    Ok(())
}

/// Returns (P_n(x), P_{n-1}(x)) for the Jacobi family with exponents (a, b).
/// For n = 0 the second value is 0.
pub(crate) fn jacobi_pair(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let ab = a + b;
    let mut prev = 1.0;
    let mut cur = 0.5 * (ab + 2.0) * x + 0.5 * (a - b);
    for k in 1..n {
        let k = k as f64;
        let s = 2.0 * k + ab;
        let c1 = 2.0 * (k + 1.0) * (k + ab + 1.0) * s;
        let c2 = (s + 1.0) * ((s + 2.0) * s * x + a * a - b * b);
        let c3 = 2.0 * (k + a) * (k + b) * (s + 2.0);
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Fills `out[k] = P_k^{a,b}(x)` for `k < out.len()`.
pub(crate) fn jacobi_sequence(a: f64, b: f64, x: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    out[0] = 1.0;
    if n == 1 {
        return;
    }
    let ab = a + b;
    out[1] = 0.5 * (ab + 2.0) * x + 0.5 * (a - b);
    for k in 1..n - 1 {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let c1 = 2.0 * (kf + 1.0) * (kf + ab + 1.0) * s;
        let c2 = (s + 1.0) * ((s + 2.0) * s * x + a * a - b * b);
        let c3 = 2.0 * (kf + a) * (kf + b) * (s + 2.0);
        out[k + 1] = (c2 * out[k] - c3 * out[k - 1]) / c1;
    }
}

/// Evaluates the Jacobi polynomial P_n^{a,b}(x) by the three-term recurrence.
pub fn jacobi_eval(n: usize, a: f64, b: f64, x: f64) -> Result<f64> {
    check_jacobi_params(a, b)?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "Jacobi argument must lie in [-1, 1], got {x}"
        )));
    }
    Ok(jacobi_pair(n, a, b, x).0)
}

/// A Gauss–Jacobi rule for the weight (1 - x)^a (1 + x)^b on (-1, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    exponent_a: f64,
    exponent_b: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn exponent_a(&self) -> f64 {
        self.exponent_a
    }

    pub fn exponent_b(&self) -> f64 {
        self.exponent_b
    }

    /// Nodes in strictly increasing order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ w_k f(x_k), i.e. ∫ f(x) (1-x)^a (1+x)^b dx for polynomial f of
    /// degree ≤ 2K-1.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// ∫_{-1}^{1} (1-x)^a (1+x)^b dx = 2^{a+b+1} Γ(a+1) Γ(b+1) / Γ(a+b+2).
pub fn jacobi_weight_integral(a: f64, b: f64) -> f64 {
    ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(a + b + 2.0))
    .exp()
}

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;

/// Builds the K-point Gauss–Jacobi rule.
///
/// Nodes are found by Newton iteration in the angle θ (x = cos θ), started
/// from the Gatteschi-type guess θ_k ≈ (k + a/2 - 1/4) π / (K + (a+b+1)/2).
/// Working in θ keeps 1 - x² = sin² θ accurate at nodes clustered against
/// the endpoints. For a = b the rule is built on x ≥ 0 and mirrored, so it
/// is exactly symmetric.
pub fn gauss_jacobi_rule(k: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    check_jacobi_params(a, b)?;
    if k == 0 {
        return Err(Error::InvalidParameter(
            "quadrature rule needs at least one node".into(),
        ));
    }
    let kf = k as f64;
    let ln_const = (a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma_ratio(kf + 1.0, a)
        - ln_gamma_ratio(kf + b + 1.0, a);
    let symmetric = a == b;
    // Root index i = 1..=K counts from x = 1 downward.
    let count = if symmetric { k.div_ceil(2) } else { k };
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(k);
    for i in 1..=count {
        let guess = (i as f64 + 0.5 * a - 0.25) * PI / (kf + 0.5 * (a + b + 1.0));
        let (theta, deriv) = if symmetric && k % 2 == 1 && i == count {
            // Middle node of an odd symmetric rule is exactly zero.
            let theta = 0.5 * PI;
            (theta, jacobi_derivative(k, a, b, 0.0))
        } else {
            newton_theta(k, a, b, guess, i)?
        };
        let middle = symmetric && k % 2 == 1 && i == count;
        let x = if middle { 0.0 } else { theta.cos() };
        let s = theta.sin();
        let w = (ln_const - 2.0 * (s.abs().ln() + deriv.abs().ln())).exp();
        pairs.push((x, w));
    }
    if symmetric {
        let mirrored: Vec<(f64, f64)> = pairs
            .iter()
            .filter(|(x, _)| *x != 0.0)
            .map(|&(x, w)| (-x, w))
            .collect();
        pairs.extend(mirrored);
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    for (idx, win) in pairs.windows(2).enumerate() {
        if !(win[0].0 < win[1].0) {
            return Err(Error::NodeConvergence {
                index: idx + 1,
                residual: (win[1].0 - win[0].0).abs(),
            });
        }
    }
    if pairs.len() != k || !(pairs[0].0 > -1.0 && pairs[k - 1].0 < 1.0) {
        return Err(Error::NodeConvergence {
            index: 0,
            residual: f64::NAN,
        });
    }
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(QuadratureRule {
        exponent_a: a,
        exponent_b: b,
        nodes,
        weights,
    })
}

/// dP_K/dx at x via (2K+a+b)(1-x²)P_K' = K[(a-b) - (2K+a+b)x]P_K + 2(K+a)(K+b)P_{K-1}.
fn jacobi_derivative(k: usize, a: f64, b: f64, x: f64) -> f64 {
    let (p, q) = jacobi_pair(k, a, b, x);
    let kf = k as f64;
    let s = 2.0 * kf + a + b;
    (kf * ((a - b) - s * x) * p + 2.0 * (kf + a) * (kf + b) * q) / (s * (1.0 - x * x))
}

fn newton_theta(k: usize, a: f64, b: f64, guess: f64, index: usize) -> Result<(f64, f64)> {
    let kf = k as f64;
    let s_ab = 2.0 * kf + a + b;
    let mut theta = guess;
    for _ in 0..NEWTON_MAX_ITER {
        let x = theta.cos();
        let sin_t = theta.sin();
        let (p, q) = jacobi_pair(k, a, b, x);
        // (1 - x²) P' expressed without dividing by sin² θ.
        let one_minus_x2_dp = (kf * ((a - b) - s_ab * x) * p + 2.0 * (kf + a) * (kf + b) * q) / s_ab;
        // d/dθ P(cos θ) = -sin θ P'(x) = -(1-x²)P' / sin θ
        let dtheta_p = -one_minus_x2_dp / sin_t;
        let step = p / dtheta_p;
        theta -= step;
        // Converged once the node moves by less than the tolerance in x;
        // near ±1 the angle itself is only resolved to about eps / sin θ.
        if (step * sin_t).abs() <= NEWTON_TOL {
            let x = theta.cos();
            let sin_t = theta.sin();
            let (p, q) = jacobi_pair(k, a, b, x);
            let dp = (kf * ((a - b) - s_ab * x) * p + 2.0 * (kf + a) * (kf + b) * q)
                / (s_ab * sin_t * sin_t);
            return Ok((theta, dp));
        }
    }
    let x = theta.cos();
    Err(Error::NodeConvergence {
        index,
        residual: jacobi_pair(k, a, b, x).0.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: f64, y: f64, rel: f64) -> bool {
        (x - y).abs() <= rel * y.abs().max(1e-300)
    }

    #[test]
    fn log_gamma_known_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-14);
        assert!(close(log_gamma(0.5).unwrap(), PI.sqrt().ln(), 1e-14));
        assert!(close(log_gamma(5.0).unwrap(), 24f64.ln(), 1e-14));
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn log_gamma_matches_factorials() {
        // ln (n-1)! summed directly.
        let mut ln_fact = 0.0_f64;
        for n in 1..=170_u32 {
            let got = ln_gamma(n as f64 + 1.0);
            ln_fact += (n as f64).ln();
            let tol = 1e-13 * ln_fact.abs().max(1.0);
            assert!((got - ln_fact).abs() <= tol, "n = {n}: {got} vs {ln_fact}");
        }
    }

    #[test]
    fn log_gamma_large_and_small_arguments() {
        // Γ(x) ~ 1/x - γ as x → 0.
        let x = 1e-8;
        let euler = 0.577_215_664_901_532_9;
        assert!(close(ln_gamma(x), -(x.ln()) - euler * x, 1e-13));
        // Half-integer: Γ(n + 1/2) = (2n)! √π / (4^n n!)
        let n = 40.0;
        let expect = ln_gamma(2.0 * n + 1.0) + 0.5 * PI.ln() - n * 4f64.ln() - ln_gamma(n + 1.0);
        assert!(close(ln_gamma(n + 0.5), expect, 1e-13));
        assert!(ln_gamma(1e5).is_finite());
    }

    #[test]
    fn gamma_ratio_is_consistent() {
        for &x in &[0.5, 3.0, 14.9, 15.0, 200.0, 1e4] {
            for &d in &[-0.4, 0.25, 1.0, 2.5] {
                let direct = ln_gamma(x + d) - ln_gamma(x);
                let ratio = ln_gamma_ratio(x, d);
                // The direct difference carries the rounding error of ln Γ(x).
                let tol = 8.0 * f64::EPSILON * ln_gamma(x + d).abs().max(1.0);
                assert!((direct - ratio).abs() <= tol, "x={x} d={d}");
            }
        }
        // Γ(x+1)/Γ(x) = x
        assert!((ln_gamma_ratio(1e6, 1.0) - 1e6f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn jacobi_closed_forms() {
        assert_eq!(jacobi_eval(0, 0.3, -0.2, 0.7).unwrap(), 1.0);
        assert!((jacobi_eval(1, 1.0, 1.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((jacobi_eval(2, 0.25, 0.25, 1.0).unwrap() - 1.40625).abs() < 1e-14);
        assert!(jacobi_eval(3, -1.0, 0.0, 0.0).is_err());
        assert!(jacobi_eval(3, 0.0, 0.0, 1.5).is_err());
    }

    #[test]
    fn jacobi_endpoint_identity_high_degree() {
        // P_n^{a,b}(1) = Γ(n+a+1) / (n! Γ(a+1))
        for &a in &[0.25, 0.5, 1.0, 2.0] {
            for &n in &[10usize, 100, 1000, 10_000] {
                let expect = (ln_gamma(n as f64 + a + 1.0)
                    - ln_gamma(n as f64 + 1.0)
                    - ln_gamma(a + 1.0))
                .exp();
                let got = jacobi_eval(n, a, a, 1.0).unwrap();
                assert!(close(got, expect, 1e-10), "a={a} n={n}: {got} vs {expect}");
            }
        }
    }

    #[test]
    fn jacobi_reflection() {
        for n in 0..=200 {
            for &x in &[0.13, -0.77, 0.999] {
                let p = jacobi_eval(n, 0.3, 1.2, -x).unwrap();
                let q = jacobi_eval(n, 1.2, 0.3, x).unwrap();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!((p - sign * q).abs() <= 1e-10 * q.abs().max(1.0), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn small_rules() {
        let r = gauss_jacobi_rule(1, 0.0, 0.0).unwrap();
        assert!(r.nodes()[0].abs() < 1e-15);
        assert!((r.weights()[0] - 2.0).abs() < 1e-14);

        let r = gauss_jacobi_rule(2, 0.0, 0.0).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes()[0] + x).abs() < 1e-15 && (r.nodes()[1] - x).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-14 && (r.weights()[1] - 1.0).abs() < 1e-14);

        let r = gauss_jacobi_rule(4, 1.0, 1.0).unwrap();
        assert!((r.integrate(|x| x * x) - 4.0 / 15.0).abs() < 1e-14);

        assert!(gauss_jacobi_rule(0, 0.0, 0.0).is_err());
    }

    /// Moments m_j = ∫ x^j (1-x)^a (1+x)^b dx from integrating
    /// d/dx[x^j (1-x)^{a+1} (1+x)^{b+1}] = 0:
    /// (j + a + b + 2) m_{j+1} = j m_{j-1} + (b - a) m_j.
    fn monomial_moments(deg: usize, a: f64, b: f64) -> Vec<f64> {
        let m0 = 2f64.powf(a + b + 1.0) * (ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)).exp();
        let mut out = vec![m0, (b - a) * m0 / (a + b + 2.0)];
        for j in 1..deg {
            let jf = j as f64;
            let next = (jf * out[j - 1] + (b - a) * out[j]) / (jf + a + b + 2.0);
            out.push(next);
        }
        out.truncate(deg + 1);
        out
    }

    #[test]
    fn rules_are_exact_on_monomials() {
        for &(k, a, b) in &[(3usize, 0.0, 0.0), (5, 0.5, 0.5), (6, 1.5, 1.5), (8, 2.0, 2.0), (7, 0.3, 1.1), (10, -0.5, 0.7)] {
            let rule = gauss_jacobi_rule(k, a, b).unwrap();
            let moments = monomial_moments(2 * k - 1, a, b);
            for (j, m) in moments.iter().enumerate() {
                let got = rule.integrate(|x| x.powi(j as i32));
                assert!((got - m).abs() <= 1e-12 * m.abs().max(1.0), "k={k} a={a} b={b} j={j}: {got} vs {m}");
            }
        }
    }

    #[test]
    fn large_rule_invariants() {
        for &(k, a) in &[(1000usize, 0.25), (4104, 1.0), (4128, 2.0), (257, 0.0)] {
            let rule = gauss_jacobi_rule(k, a, a).unwrap();
            assert_eq!(rule.len(), k);
            assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(rule.nodes()[0] > -1.0 && rule.nodes()[k - 1] < 1.0);
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            let total: f64 = rule.weights().iter().sum();
            let expect = jacobi_weight_integral(a, a);
            assert!(close(total, expect, 1e-12), "k={k}: {total} vs {expect}");
            // exact symmetry
            for i in 0..k {
                assert_eq!(rule.nodes()[i], -rule.nodes()[k - 1 - i]);
            }
        }
    }
}
