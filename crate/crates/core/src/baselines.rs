//! Fractional centered finite differences and error reports.

use faer::{Mat, Side};

use crate::eigsolve::{default_trusted_count, Method, SpectralParams, Spectrum};
use crate::error::{Error, Result};
use crate::specfun::ln_gamma;

/// Relative error below which an eigenvalue counts as resolved.
pub const EPSILON0: f64 = 1e-9;

/// g_k = (-1)^k Γ(α+1) / (Γ(α/2-k+1) Γ(α/2+k+1)) for k = 0..count.
///
/// Built from g_0 and the ratio g_{k+1}/g_k = (k - α/2)/(k + α/2 + 1), which
/// avoids evaluating Γ at negative arguments.
pub fn fdm_coefficients(alpha: f64, count: usize) -> Vec<f64> {
    let mut g = Vec::with_capacity(count);
    if count == 0 {
        return g;
    }
    let half = 0.5 * alpha;
    g.push((ln_gamma(alpha + 1.0) - 2.0 * ln_gamma(half + 1.0)).exp());
    for k in 1..count {
        let kf = (k - 1) as f64;
        let prev = g[k - 1];
        g.push(prev * (kf - half) / (kf + half + 1.0));
    }
    g
}

/// Spectrum of h^{-α} G + diag(V) on the M - 1 interior nodes of a uniform
/// grid with M intervals on the parameter interval.
///
/// The basis size in `params` is ignored; `grid_m` sets the resolution.
pub fn fdm_spectrum(params: &SpectralParams, grid_m: usize) -> Result<Spectrum> {
    if grid_m < 2 {
        return Err(Error::InvalidParameter(format!(
            "finite-difference grid needs at least 2 intervals, got {grid_m}"
        )));
    }
    let (a, b) = params.interval();
    let alpha = params.alpha();
    let n = grid_m - 1;
    let h = (b - a) / grid_m as f64;
    let scale = h.powf(-alpha);
    let g = fdm_coefficients(alpha, n);
    let potential = params.potential();
    let mut diag = Vec::with_capacity(n);
    for j in 1..=n {
        let x = a + j as f64 * h;
        let v = potential.eval(x);
        if !v.is_finite() {
            return Err(Error::NonFinitePotential { x });
        }
        diag.push(v);
    }
    let mat = Mat::<f64>::from_fn(n, n, |i, j| {
        let t = scale * g[i.abs_diff(j)];
        if i == j {
            t + diag[i]
        } else {
            t
        }
    });
    let values = mat
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::EigenConvergence)?;
    let params = params.with_size(grid_m)?;
    let trusted = default_trusted_count(grid_m).min(values.len());
    Spectrum::new(params, values, trusted, Method::Fdm)
}

/// Elementwise errors of a computed spectrum against a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub absolute: Vec<f64>,
    pub relative: Vec<f64>,
    /// Share of the compared eigenvalues with relative error ≤ `epsilon0`.
    pub trust_fraction: f64,
    pub epsilon0: f64,
}

/// Compares the first `count` eigenvalues.
pub fn error_report(computed: &Spectrum, reference: &Spectrum, count: usize) -> Result<ErrorReport> {
    if count == 0 {
        return Err(Error::InsufficientData("error report over zero eigenvalues".into()));
    }
    if count > computed.len() || count > reference.len() {
        return Err(Error::OutOfTrustedRange {
            requested: count,
            available: computed.len().min(reference.len()),
        });
    }
    let pairs = computed.eigenvalues().iter().zip(reference.eigenvalues()).take(count);
    let absolute: Vec<f64> = pairs.clone().map(|(c, r)| (c - r).abs()).collect();
    let relative: Vec<f64> = pairs.map(|(c, r)| (c - r).abs() / r.abs()).collect();
    let resolved = relative.iter().filter(|&&e| e <= EPSILON0).count();
    Ok(ErrorReport {
        absolute,
        relative,
        trust_fraction: resolved as f64 / count as f64,
        epsilon0: EPSILON0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::PotentialSpec;
    use crate::eigsolve::spectrum_1d;
    use std::f64::consts::PI;

    #[test]
    fn coefficients_match_gamma_formula() {
        let g = fdm_coefficients(2.0, 5);
        assert!((g[0] - 2.0).abs() < 1e-13 && (g[1] + 1.0).abs() < 1e-13, "{g:?}");
        assert!(g[2..].iter().all(|v| v.abs() < 1e-15));
        let g = fdm_coefficients(1.0, 3);
        assert!((g[0] - 4.0 / PI).abs() < 1e-13);
        // Direct Γ evaluation where all arguments are positive.
        let alpha: f64 = 1.4;
        let g = fdm_coefficients(alpha, 2);
        let direct = -(ln_gamma(alpha + 1.0) - ln_gamma(alpha / 2.0) - ln_gamma(alpha / 2.0 + 2.0)).exp();
        assert!((g[1] - direct).abs() < 1e-14);
        // Row sums of the infinite stencil vanish.
        let g = fdm_coefficients(0.8, 200_000);
        let total = g[0] + 2.0 * g[1..].iter().sum::<f64>();
        assert!(total.abs() < 1e-4);
    }

    #[test]
    fn classical_limit_matches_second_difference() {
        let params = SpectralParams::free(2.0, 1).unwrap();
        let spec = fdm_spectrum(&params, 50).unwrap();
        let h: f64 = 2.0 / 50.0;
        for (k, &v) in spec.eigenvalues().iter().enumerate() {
            let want = 4.0 / (h * h) * ((k + 1) as f64 * PI / 100.0).sin().powi(2);
            assert!((v - want).abs() <= 1e-10 * want);
        }
        assert_eq!(spec.len(), 49);
    }

    #[test]
    fn fdm_is_positive_with_nonnegative_potential() {
        let params = SpectralParams::new(0.6, (-1.0, 1.0), PotentialSpec::Case2, 1).unwrap();
        let spec = fdm_spectrum(&params, 64).unwrap();
        assert!(spec.eigenvalues()[0] > 0.0);
        assert!(fdm_spectrum(&params, 1).is_err());
    }

    #[test]
    fn error_reports() {
        let reference = spectrum_1d(&SpectralParams::free(1.0, 16).unwrap()).unwrap();
        let same = error_report(&reference, &reference, 8).unwrap();
        assert!(same.absolute.iter().all(|&v| v == 0.0));
        assert_eq!(same.trust_fraction, 1.0);
        let values: Vec<f64> = reference.eigenvalues().iter().map(|v| v * (1.0 + 2e-9)).collect();
        let off = Spectrum::new(reference.params().clone(), values, 8, Method::Jsm).unwrap();
        assert_eq!(error_report(&off, &reference, 8).unwrap().trust_fraction, 0.0);
        assert!(error_report(&off, &reference, 17).is_err());
    }

    #[test]
    fn fdm_error_is_near_first_order_at_alpha_one() {
        let params = SpectralParams::free(1.0, 1).unwrap();
        let exact = spectrum_1d(&params.with_size(256).unwrap()).unwrap().eigenvalues()[0];
        let e256 = (fdm_spectrum(&params, 256).unwrap().eigenvalues()[0] - exact).abs();
        assert!(e256 > 2.24e-3 / 2.0 && e256 < 2.24e-3 * 2.0, "{e256}");
    }
}
