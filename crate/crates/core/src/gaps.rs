//! Eigenvalue gaps, unfolding, spacing statistics and asymptotic fits.

use std::f64::consts::PI;

use crate::assembly::PotentialSpec;
use crate::basis::least_squares_line;
use crate::baselines::EPSILON0;
use crate::eigsolve::Spectrum;
use crate::error::{Error, Result};
use crate::specfun::{gauss_jacobi_rule, ln_gamma};

/// Two eigenvalues count as equal when they differ by at most this fraction
/// of their magnitude.
pub const ZERO_TOL_REL: f64 = 1e-10;

/// Nearest-neighbour, minimum, average and normalized gaps for N = 1..=N_max.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSeries {
    /// λ_{N+1} - λ_N
    pub nn: Vec<f64>,
    /// min over n ≤ N of the nearest-neighbour gaps
    pub minimum: Vec<f64>,
    /// (λ_{N+1} - λ_1) / N
    pub average: Vec<f64>,
    /// y_{N+1} - y_N with y_n = (λ_n / C)^{1/γ}
    pub normalized: Vec<f64>,
    pub unfold_gamma: f64,
    pub unfold_c: f64,
    /// λ_2 - λ_1
    pub fundamental_gap: f64,
    unfolded_max: f64,
}

impl GapSeries {
    pub fn len(&self) -> usize {
        self.nn.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nn.is_empty()
    }

    /// Normalized-gap threshold equivalent to a relative eigenvalue
    /// difference of [`ZERO_TOL_REL`] at the top of the series.
    pub fn zero_tolerance(&self) -> f64 {
        ZERO_TOL_REL * self.unfolded_max.abs() / self.unfold_gamma
    }
}

/// y = (λ / C)^{1/γ}, odd-extended to negative λ.
pub fn unfold(value: f64, gamma: f64, c: f64) -> f64 {
    let r = value / c;
    r.signum() * r.abs().powf(1.0 / gamma)
}

/// Gap sequences of arbitrary ascending values with the given unfolding.
pub fn gap_series_from_values(values: &[f64], gamma: f64, c: f64) -> Result<GapSeries> {
    if values.len() < 2 {
        return Err(Error::InsufficientData("gaps need at least two eigenvalues".into()));
    }
    let n_max = values.len() - 1;
    let nn: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let mut minimum = Vec::with_capacity(n_max);
    let mut running = f64::INFINITY;
    for &g in &nn {
        running = running.min(g);
        minimum.push(running);
    }
    let average = (1..=n_max).map(|n| (values[n] - values[0]) / n as f64).collect();
    let y: Vec<f64> = values.iter().map(|&v| unfold(v, gamma, c)).collect();
    let normalized = y.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(GapSeries {
        fundamental_gap: nn[0],
        nn,
        minimum,
        average,
        normalized,
        unfold_gamma: gamma,
        unfold_c: c,
        unfolded_max: y[n_max],
    })
}

/// Gaps of the first `n_max + 1` eigenvalues, unfolded with
/// [`unfolding_constants`].
pub fn gap_series(spec: &Spectrum, n_max: usize) -> Result<GapSeries> {
    if n_max == 0 {
        return Err(Error::InsufficientData("gap series needs N_max ≥ 1".into()));
    }
    if n_max + 1 > spec.trusted_count() {
        return Err(Error::OutOfTrustedRange {
            requested: n_max + 1,
            available: spec.trusted_count(),
        });
    }
    let (gamma, c) = unfolding_constants(spec);
    gap_series_from_values(&spec.eigenvalues()[..=n_max], gamma, c)
}

/// Growth exponent γ and constant C of λ_n ≈ C n^γ.
///
/// 1D spectra on (a, b) use (α, (π/(b-a))^α). Two-dimensional tensor
/// spectra use (α/2, 4/(2+α) (4π/S)^{α/2}) with S = 4 L_1 L_2. Boxes in
/// d ≥ 3 use γ = α/d and the lattice-volume constant of the region
/// Σ (π j_l / (2 L_l))^α ≤ λ.
pub fn unfolding_constants(spec: &Spectrum) -> (f64, f64) {
    let alpha = spec.alpha();
    match spec.half_widths() {
        None | Some([_]) => {
            let (a, b) = spec.params().interval();
            let width = match spec.half_widths() {
                Some([l]) => 2.0 * l,
                _ => b - a,
            };
            (alpha, (PI / width).powf(alpha))
        }
        Some([l1, l2]) => {
            let s = 4.0 * l1 * l2;
            (0.5 * alpha, 4.0 / (2.0 + alpha) * (4.0 * PI / s).powf(0.5 * alpha))
        }
        Some(ls) => {
            let d = ls.len() as f64;
            let ln_volume = ls.iter().map(|l| (2.0 * l / PI).ln()).sum::<f64>()
                + d * ln_gamma(1.0 + 1.0 / alpha)
                - ln_gamma(1.0 + d / alpha);
            (alpha / d, (-alpha / d * ln_volume).exp())
        }
    }
}

/// Leading-order asymptotic predictions for the four gap sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedGaps {
    pub nn: f64,
    pub min: f64,
    pub ave: f64,
    /// The normalized gap tends to 1; its N^{-2} correction constant is not
    /// known in closed form and is fitted separately.
    pub norm: f64,
}

/// Predictions at N from λ_n ≈ C n^α (1 - α(2-α)/(4n)), C = (π/(b-a))^α.
///
/// Expanding λ_{N+1} - λ_N gives C[α N^{α-1} + α²(α-1)/4 N^{α-2}], which is
/// exactly C(2N+1) at α = 2. The minimum gap is the nearest-neighbour gap
/// for α < 1, the constant C for α = 1, and the fundamental gap λ_2 - λ_1
/// for α > 1.
pub fn predicted_gaps(alpha: f64, interval: (f64, f64), lambda1: f64, lambda2: f64, n: usize) -> PredictedGaps {
    let c = (PI / (interval.1 - interval.0)).powf(alpha);
    let nf = n as f64;
    let nn = c * (alpha * nf.powf(alpha - 1.0) + alpha * alpha * (alpha - 1.0) / 4.0 * nf.powf(alpha - 2.0));
    let min = if alpha < 1.0 {
        alpha * c * nf.powf(alpha - 1.0)
    } else if alpha == 1.0 {
        c
    } else {
        lambda2 - lambda1
    };
    let ave = c * (nf.powf(alpha - 1.0) + alpha * (2.0 + alpha) / 4.0 * nf.powf(alpha - 2.0)) - lambda1 / nf;
    PredictedGaps { nn, min, ave, norm: 1.0 }
}

/// Which model a [`FitResult`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// coefficients: amplitude, exponent
    PowerLaw,
    /// coefficients: τ
    ExponentialMle,
    /// coefficients: C_2, and for α = 2 also C_1, c_0
    Weyl2d,
    /// coefficients: slope, intercept
    AffineShift,
}

impl FitModel {
    pub fn tag(self) -> &'static str {
        match self {
            Self::PowerLaw => "power_law",
            Self::ExponentialMle => "exponential_mle",
            Self::Weyl2d => "weyl_2d",
            Self::AffineShift => "affine_shift",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    pub coefficients: Vec<f64>,
    /// RMS residual for least-squares fits, KS statistic for the
    /// exponential fit.
    pub residual: f64,
    pub sample_count: usize,
}

fn check_power_data(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::Mismatch(format!("{} x values and {} y values", xs.len(), ys.len())));
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData(format!("power-law fit needs 3 points, got {}", xs.len())));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter("power-law fit needs positive finite data".into()));
    }
    Ok(())
}

fn rms(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v * v, c + 1));
    (sum / count as f64).sqrt()
}

/// y ≈ A x^p by least squares on (ln x, ln y).
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    check_power_data(xs, ys)?;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let (slope, intercept) = least_squares_line(&lx, &ly);
    let residual = rms(lx.iter().zip(&ly).map(|(x, y)| y - (intercept + slope * x)));
    Ok(FitResult {
        model: FitModel::PowerLaw,
        coefficients: vec![intercept.exp(), slope],
        residual,
        sample_count: xs.len(),
    })
}

/// y ≈ A x^p with p fixed.
pub fn fit_power_law_fixed(xs: &[f64], ys: &[f64], exponent: f64) -> Result<FitResult> {
    check_power_data(xs, ys)?;
    let shifted: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y.ln() - exponent * x.ln()).collect();
    let ln_a = shifted.iter().sum::<f64>() / shifted.len() as f64;
    Ok(FitResult {
        model: FitModel::PowerLaw,
        coefficients: vec![ln_a.exp(), exponent],
        residual: rms(shifted.iter().map(|v| v - ln_a)),
        sample_count: xs.len(),
    })
}

/// Kolmogorov–Smirnov distance between the samples and Exp(τ).
pub fn ks_exponential(samples: &[f64], tau: f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = 1.0 - (-tau * x.max(0.0)).exp();
            (cdf - i as f64 / n).max((i + 1) as f64 / n - cdf)
        })
        .fold(0.0, f64::max)
}

/// Maximum-likelihood fit of P(s) = τ e^{-τ s}; the residual is the KS
/// statistic.
pub fn fit_exponential(samples: &[f64]) -> Result<FitResult> {
    if samples.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "exponential fit needs 10 samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::InvalidParameter("exponential fit needs positive samples".into()));
    }
    let tau = samples.len() as f64 / samples.iter().sum::<f64>();
    Ok(FitResult {
        model: FitModel::ExponentialMle,
        coefficients: vec![tau],
        residual: ks_exponential(samples, tau),
        sample_count: samples.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    DeltaAtOne,
    DeltaAtZero,
    Poisson,
    OtherBimodalOrUnknown,
}

impl Distribution {
    pub fn tag(self) -> &'static str {
        match self {
            Self::DeltaAtOne => "delta_at_1",
            Self::DeltaAtZero => "delta_at_0",
            Self::Poisson => "poisson",
            Self::OtherBimodalOrUnknown => "other_bimodal_or_unknown",
        }
    }
}

pub const DELTA_BAND: f64 = 0.01;
pub const DELTA_MASS: f64 = 0.99;
pub const ZERO_MASS: f64 = 0.5;
pub const KS_POISSON: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub kind: Distribution,
    /// KS distance to Exp(τ) with τ = 1/mean.
    pub ks: f64,
    pub tau: f64,
    pub fraction_near_one: f64,
    pub fraction_zero: f64,
    pub mean: f64,
    pub sample_count: usize,
}

/// Sorts normalized gaps into one of four spacing laws.
///
/// In order: a spike at 1 (≥ 99% within ±0.01 of 1), a spike at 0 (≥ 50%
/// below `zero_tol`), exponential (KS < 0.05), anything else.
pub fn classify_distribution(normalized: &[f64], zero_tol: f64) -> Result<Classification> {
    if normalized.len() < 100 {
        return Err(Error::InsufficientData(format!(
            "classification needs 100 samples, got {}",
            normalized.len()
        )));
    }
    let n = normalized.len() as f64;
    let near_one = normalized.iter().filter(|&&s| (s - 1.0).abs() <= DELTA_BAND).count() as f64 / n;
    let zero = normalized.iter().filter(|&&s| s < zero_tol).count() as f64 / n;
    let mean = normalized.iter().sum::<f64>() / n;
    let tau = 1.0 / mean;
    let ks = ks_exponential(normalized, tau);
    let kind = if near_one >= DELTA_MASS {
        Distribution::DeltaAtOne
    } else if zero >= ZERO_MASS {
        Distribution::DeltaAtZero
    } else if ks < KS_POISSON {
        Distribution::Poisson
    } else {
        Distribution::OtherBimodalOrUnknown
    };
    Ok(Classification {
        kind,
        ks,
        tau,
        fraction_near_one: near_one,
        fraction_zero: zero,
        mean,
        sample_count: normalized.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
    /// count / (total samples · bin width)
    pub densities: Vec<f64>,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.bin_width()
    }
}

/// Uniform bins on [lo, hi]; the right edge belongs to the last bin.
pub fn histogram(samples: &[f64], bins: usize, (lo, hi): (f64, f64)) -> Result<Histogram> {
    if bins == 0 || !(lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "histogram needs bins ≥ 1 and lo < hi, got {bins} bins on ({lo}, {hi})"
        )));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &s in samples {
        if s < lo || s > hi || s.is_nan() {
            continue;
        }
        let idx = (((s - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let total = samples.len();
    let densities = counts
        .iter()
        .map(|&c| if total == 0 { 0.0 } else { c as f64 / (total as f64 * width) })
        .collect();
    Ok(Histogram { lo, hi, counts, densities })
}

pub const DEFAULT_BINS: usize = 100;

/// [0, max(3, 99.9th percentile)].
pub fn default_histogram_range(samples: &[f64]) -> (f64, f64) {
    let mut sorted: Vec<f64> = samples.iter().copied().filter(|v| v.is_finite()).collect();
    if sorted.is_empty() {
        return (0.0, 3.0);
    }
    sorted.sort_by(f64::total_cmp);
    let rank = ((0.999 * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    (0.0, sorted[rank - 1].max(3.0))
}

/// Mean potential, per-eigenvalue shift residuals, and their decay rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftReport {
    /// (1/|Ω|) ∫_Ω V
    pub c_v: f64,
    /// λ_n(V) - λ_n(0) - C_V over the common trusted range
    pub deltas: Vec<f64>,
    /// Power-law fit of |δ_n| against n over the resolved part; `None`
    /// when fewer than three residuals rise above roundoff.
    pub tau1_fit: Option<FitResult>,
}

impl ShiftReport {
    /// Decay exponent τ₁ in |δ_n| ~ n^{-τ₁}.
    pub fn tau1(&self) -> Option<f64> {
        self.tau1_fit.as_ref().map(|f| -f.coefficients[1])
    }
}

/// Smallest index used when fitting the residual decay.
pub const SHIFT_FIT_START: usize = 5;

/// Compares spectra with and without the potential `v`.
pub fn potential_shift_report(spec_v: &Spectrum, spec_0: &Spectrum, v: &PotentialSpec) -> Result<ShiftReport> {
    if spec_v.alpha() != spec_0.alpha() || spec_v.params().interval() != spec_0.params().interval() {
        return Err(Error::Mismatch("spectra differ in alpha or interval".into()));
    }
    if !spec_0.params().potential().is_zero() {
        return Err(Error::Mismatch("reference spectrum must have V ≡ 0".into()));
    }
    if spec_v.params().potential() != v {
        return Err(Error::Mismatch("potential does not match the spectrum".into()));
    }
    let (a, b) = spec_v.params().interval();
    let rule = gauss_jacobi_rule(128, 0.0, 0.0)?;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let c_v = 0.5 * rule.integrate(|x| v.eval(mid + half * x));
    let count = spec_v.trusted_count().min(spec_0.trusted_count());
    let deltas: Vec<f64> = spec_v.eigenvalues()[..count]
        .iter()
        .zip(&spec_0.eigenvalues()[..count])
        .map(|(lv, l0)| lv - l0 - c_v)
        .collect();
    let (ns, ds): (Vec<f64>, Vec<f64>) = deltas
        .iter()
        .enumerate()
        .skip(SHIFT_FIT_START - 1)
        .filter(|(i, d)| d.abs() >= EPSILON0 * spec_v.eigenvalues()[*i].abs())
        .map(|(i, d)| ((i + 1) as f64, d.abs()))
        .unzip();
    let tau1_fit = if ns.len() >= 3 { Some(fit_power_law(&ns, &ds)?) } else { None };
    Ok(ShiftReport { c_v, deltas, tau1_fit })
}

/// Fits δ_norm(N) - 1 ≈ C̃ / (N(N+1)) + c over N in [n_lo, n_hi].
pub fn fit_norm_correction(series: &GapSeries, n_lo: usize, n_hi: usize) -> Result<FitResult> {
    if n_lo == 0 || n_hi > series.len() || n_hi < n_lo + 2 {
        return Err(Error::InsufficientData(format!(
            "correction fit range [{n_lo}, {n_hi}] invalid for {} gaps",
            series.len()
        )));
    }
    let u: Vec<f64> = (n_lo..=n_hi).map(|n| 1.0 / (n as f64 * (n as f64 + 1.0))).collect();
    let r: Vec<f64> = (n_lo..=n_hi).map(|n| series.normalized[n - 1] - 1.0).collect();
    let (slope, intercept) = least_squares_line(&u, &r);
    let residual = rms(u.iter().zip(&r).map(|(x, y)| y - (intercept + slope * x)));
    Ok(FitResult {
        model: FitModel::AffineShift,
        coefficients: vec![slope, intercept],
        residual,
        sample_count: u.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigsolve::{laplacian_spectrum, rescale_spectrum, spectrum_1d, Method, SpectralParams};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand::Rng;

    fn exp_draws(n: usize, rate: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln() / rate).collect()
    }

    #[test]
    fn synthetic_gaps() {
        let g = gap_series_from_values(&[1.0, 2.0, 4.0], 1.0, 1.0).unwrap();
        assert_eq!(g.nn, vec![1.0, 2.0]);
        assert_eq!(g.minimum, vec![1.0, 1.0]);
        assert_eq!(g.average, vec![1.0, 1.5]);
        assert_eq!(g.fundamental_gap, 1.0);
    }

    #[test]
    fn exact_laplacian_gaps() {
        let spec = laplacian_spectrum((-1.0, 1.0), 200).unwrap();
        let g = gap_series(&spec, 150).unwrap();
        let c = PI * PI / 4.0;
        for (i, (&nn, &norm)) in g.nn.iter().zip(&g.normalized).enumerate() {
            let n = (i + 1) as f64;
            assert!((nn - c * (2.0 * n + 1.0)).abs() < 1e-10 * nn);
            assert!((norm - 1.0).abs() < 1e-9);
            assert!((g.minimum[i] - 3.0 * c).abs() < 1e-12);
            let p = predicted_gaps(2.0, (-1.0, 1.0), spec.eigenvalues()[0], spec.eigenvalues()[1], i + 1);
            assert!((p.nn - nn).abs() < 1e-9 * nn);
        }
        assert!(gap_series(&spec, 200).is_err());
    }

    #[test]
    fn unfolding_constant_values() {
        let s = laplacian_spectrum((-1.0, 1.0), 4).unwrap();
        let (g, c) = unfolding_constants(&s);
        assert_eq!(g, 2.0);
        assert!((c - PI * PI / 4.0).abs() < 1e-14);
        let s = spectrum_1d(&SpectralParams::free(0.5, 4).unwrap()).unwrap();
        let (g, c) = unfolding_constants(&s);
        assert_eq!(g, 0.5);
        assert!((c - (PI / 2.0).sqrt()).abs() < 1e-14);
        let s = laplacian_spectrum((-1.0, 1.0), 4).unwrap().with_half_widths(vec![1.0, 1.0]);
        let (g, c) = unfolding_constants(&s);
        assert_eq!(g, 1.0);
        assert!((c - PI).abs() < 1e-14);
        // Three dimensions: lattice-point volume of the cube at α = 2.
        let s = laplacian_spectrum((-1.0, 1.0), 4).unwrap().with_half_widths(vec![1.0, 1.0, 1.0]);
        let (g, c) = unfolding_constants(&s);
        assert!((g - 2.0 / 3.0).abs() < 1e-15);
        let want = (8.0 / (PI * PI * PI) * (PI.sqrt() / 2.0).powi(3) / ln_gamma(2.5).exp()).powf(-2.0 / 3.0);
        assert!((c - want).abs() < 1e-12 * want);
    }

    #[test]
    fn predictions_in_each_regime() {
        let p = predicted_gaps(0.5, (-1.0, 1.0), 1.0, 2.0, 100);
        assert!((p.min - 0.5 * (PI / 2.0).sqrt() * 0.1).abs() < 1e-14);
        let p = predicted_gaps(1.0, (-1.0, 1.0), 1.157773883, 2.754754742, 10);
        assert!((p.ave - PI / 2.0 * (1.0 + (0.75 - 2.0 / PI * 1.157773883) / 10.0)).abs() < 1e-14);
        assert!((p.min - PI / 2.0).abs() < 1e-15);
        let p = predicted_gaps(1.5, (-1.0, 1.0), 1.0, 3.5, 10);
        assert_eq!(p.min, 2.5);
        assert_eq!(p.norm, 1.0);
    }

    #[test]
    fn power_law_fits() {
        let xs: Vec<f64> = (1..=20).map(|v| v as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x.powf(-0.5)).collect();
        let f = fit_power_law(&xs, &ys).unwrap();
        assert!((f.coefficients[0] - 2.0).abs() < 1e-13 && (f.coefficients[1] + 0.5).abs() < 1e-13);
        assert!(f.residual < 1e-13);
        let g = fit_power_law_fixed(&xs, &ys, -0.5).unwrap();
        assert!((g.coefficients[0] - 2.0).abs() < 1e-13);
        assert!(fit_power_law(&xs[..2], &ys[..2]).is_err());
        assert!(fit_power_law(&[1.0, 2.0, 3.0], &[1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn exponential_fits() {
        let f = fit_exponential(&[1.0; 20]).unwrap();
        assert_eq!(f.coefficients[0], 1.0);
        let draws = exp_draws(100_000, 2.0, 42);
        let f = fit_exponential(&draws).unwrap();
        assert!((f.coefficients[0] - 2.0).abs() < 0.02);
        assert!(f.residual < 0.01);
        assert!(fit_exponential(&[1.0; 5]).is_err());
        let mut with_zero = vec![1.0; 20];
        with_zero[3] = 0.0;
        assert!(fit_exponential(&with_zero).is_err());
    }

    #[test]
    fn classification_of_synthetic_laws() {
        let ones = vec![1.0; 500];
        assert_eq!(classify_distribution(&ones, 1e-8).unwrap().kind, Distribution::DeltaAtOne);
        let mut zeros = vec![0.0; 300];
        zeros.extend(vec![2.0; 200]);
        assert_eq!(classify_distribution(&zeros, 1e-8).unwrap().kind, Distribution::DeltaAtZero);
        let draws = exp_draws(20_000, 1.0, 9);
        let c = classify_distribution(&draws, 1e-8).unwrap();
        assert_eq!(c.kind, Distribution::Poisson);
        let mut bimodal = vec![0.2; 250];
        bimodal.extend(vec![1.6; 250]);
        assert_eq!(classify_distribution(&bimodal, 1e-8).unwrap().kind, Distribution::OtherBimodalOrUnknown);
        assert!(classify_distribution(&ones[..50], 1e-8).is_err());
    }

    #[test]
    fn histogram_basics() {
        let h = histogram(&[0.5], 1, (0.0, 1.0)).unwrap();
        assert_eq!(h.counts, vec![1]);
        assert_eq!(h.densities, vec![1.0]);
        let h = histogram(&[], 4, (0.0, 1.0)).unwrap();
        assert!(h.densities.iter().all(|&d| d == 0.0));
        let h = histogram(&[0.0, 1.0, 2.0], 2, (0.0, 1.0)).unwrap();
        assert_eq!(h.counts, vec![1, 1]);
        assert!((h.densities.iter().sum::<f64>() * h.bin_width() - 2.0 / 3.0).abs() < 1e-15);
        assert!(histogram(&[1.0], 0, (0.0, 1.0)).is_err());
        assert_eq!(default_histogram_range(&[0.1, 0.2]), (0.0, 3.0));
    }

    #[test]
    fn histogram_of_exponential_draws() {
        let draws = exp_draws(10_000, 1.0, 1234);
        let h = histogram(&draws, 50, (0.0, 5.0)).unwrap();
        let w = h.bin_width();
        for i in 0..50 {
            let lo = i as f64 * w;
            let p = (-lo).exp() - (-(lo + w)).exp();
            let want = p / w;
            let sigma = (10_000.0 * p * (1.0 - p)).sqrt() / (10_000.0 * w);
            assert!((h.densities[i] - want).abs() <= 5.0 * sigma, "bin {i}");
        }
    }

    #[test]
    fn constant_potential_shift_is_exact() {
        let v = PotentialSpec::Polynomial(vec![3.0]);
        let p0 = SpectralParams::free(1.2, 40).unwrap();
        let pv = SpectralParams::new(1.2, (-1.0, 1.0), v.clone(), 40).unwrap();
        let r = potential_shift_report(&spectrum_1d(&pv).unwrap(), &spectrum_1d(&p0).unwrap(), &v).unwrap();
        assert!((r.c_v - 3.0).abs() < 1e-14);
        assert!(r.deltas.iter().all(|d| d.abs() < 1e-10));
        assert!(r.tau1_fit.is_none());
    }

    #[test]
    fn mean_potential_of_case_one() {
        let v = PotentialSpec::Case1;
        let p0 = SpectralParams::free(1.0, 20).unwrap();
        let pv = SpectralParams::new(1.0, (-1.0, 1.0), v.clone(), 20).unwrap();
        let r = potential_shift_report(&spectrum_1d(&pv).unwrap(), &spectrum_1d(&p0).unwrap(), &v).unwrap();
        assert!((r.c_v - 1.0 / 6.0).abs() < 1e-15);
        let wrong = potential_shift_report(&spectrum_1d(&pv).unwrap(), &spectrum_1d(&p0).unwrap(), &PotentialSpec::Case2);
        assert!(wrong.is_err());
    }

    #[test]
    fn gap_series_invariants_on_computed_spectrum() {
        let spec = spectrum_1d(&SpectralParams::free(0.7, 200).unwrap()).unwrap();
        let g = gap_series(&spec, 99).unwrap();
        let lam = spec.eigenvalues();
        for n in 1..=99 {
            let brute = g.nn[..n].iter().cloned().fold(f64::INFINITY, f64::min);
            assert_eq!(g.minimum[n - 1], brute);
            assert!(g.minimum[n - 1] <= g.nn[n - 1]);
            let rebuilt = lam[0] + n as f64 * g.average[n - 1];
            assert!((rebuilt - lam[n]).abs() <= 4.0 * f64::EPSILON * lam[n]);
            assert!(g.normalized[n - 1] > 0.0);
        }
        assert!(g.minimum.windows(2).all(|w| w[1] <= w[0]));
        let fit = fit_norm_correction(&g, 5, 99).unwrap();
        assert!(fit.coefficients.iter().all(|c| c.is_finite()));
    }

    #[test]
    fn method_is_preserved() {
        let spec = laplacian_spectrum((0.0, 1.0), 3).unwrap();
        assert_eq!(spec.method(), Method::Analytic);
    }

    proptest! {
        #[test]
        fn power_law_exponent_is_scale_invariant(scale in 1e-3f64..1e3, p in -2.0f64..2.0) {
            let xs: Vec<f64> = (1..=30).map(|v| v as f64).collect();
            let ys: Vec<f64> = xs.iter().map(|x| x.powf(p) * (1.0 + 0.1 * (x * 0.7).sin())).collect();
            let scaled: Vec<f64> = ys.iter().map(|y| y * scale).collect();
            let a = fit_power_law(&xs, &ys).unwrap();
            let b = fit_power_law(&xs, &scaled).unwrap();
            prop_assert!((a.coefficients[1] - b.coefficients[1]).abs() < 1e-12);
            prop_assert!((b.coefficients[0] / a.coefficients[0] / scale - 1.0).abs() < 1e-10);
        }

        #[test]
        fn normalized_gaps_survive_rescaling(alpha in 0.1f64..=2.0, a in -5.0f64..5.0, width in 0.1f64..10.0) {
            let values: Vec<f64> = (1..=60).map(|n| (n as f64).powf(alpha) * (1.0 - 0.3 / (n + 1) as f64)).collect();
            let spec = crate::eigsolve::Spectrum::new(SpectralParams::free(alpha, 120).unwrap(), values, 60, Method::Jsm).unwrap();
            let moved = rescale_spectrum(&spec, a, a + width).unwrap();
            let g0 = gap_series(&spec, 59).unwrap();
            let g1 = gap_series(&moved, 59).unwrap();
            for (x, y) in g0.normalized.iter().zip(&g1.normalized) {
                prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }
    }
}
