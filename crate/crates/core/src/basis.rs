//! Normalized generalized Jacobi functions and eigenfunction evaluation.
//!
//! The basis functions are
//! φ_n(x) = c_n (1 - x²)^{α/2} P_n^{α/2,α/2}(x), with
//! c_n = √(2n+α+1) n! / (2^{α/2+1/2} Γ(n+α/2+1)),
//! which makes the weak form of the fractional Laplacian on (-1, 1) the
//! identity matrix.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::specfun::{jacobi_pair, jacobi_sequence, ln_gamma_ratio};

/// Fractional order and basis size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    alpha: f64,
    size_m: usize,
}

impl BasisSpec {
    pub fn new(alpha: f64, size_m: usize) -> Result<Self> {
        check_alpha(alpha)?;
        if size_m == 0 {
            return Err(Error::InvalidParameter("basis size must be at least 1".into()));
        }
        Ok(Self { alpha, size_m })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn size_m(&self) -> usize {
        self.size_m
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 2], got {alpha}"
        )));
    }
    Ok(())
}

/// ln c_n. Valid for any alpha ≥ 0; alpha = 0 gives orthonormal Legendre.
pub(crate) fn ln_phi_norm(n: usize, alpha: f64) -> f64 {
    let n = n as f64;
    0.5 * (2.0 * n + alpha + 1.0).ln() - (0.5 * alpha + 0.5) * LN_2
        - ln_gamma_ratio(n + 1.0, 0.5 * alpha)
}

/// c_0, ..., c_{m-1}.
pub(crate) fn phi_norms(alpha: f64, m: usize) -> Vec<f64> {
    (0..m).map(|n| ln_phi_norm(n, alpha).exp()).collect()
}

/// (1 - x²)^{α/2}, computed as a product to stay accurate near ±1.
pub(crate) fn boundary_factor(alpha: f64, x: f64) -> f64 {
    ((1.0 - x) * (1.0 + x)).powf(0.5 * alpha)
}

/// The normalized basis function φ_n at x ∈ [-1, 1].
pub fn phi_eval(n: usize, alpha: f64, x: f64) -> f64 {
    let a = 0.5 * alpha;
    let (p, _) = jacobi_pair(n, a, a, x);
    ln_phi_norm(n, alpha).exp() * boundary_factor(alpha, x) * p
}

/// Expansion coefficients of one eigenfunction in the φ basis.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenFunctionCoeffs {
    basis: BasisSpec,
    coeffs: Vec<f64>,
    index_n: usize,
}

impl EigenFunctionCoeffs {
    /// `index_n` is the 1-based rank of the associated eigenvalue.
    pub fn new(basis: BasisSpec, coeffs: Vec<f64>, index_n: usize) -> Result<Self> {
        if coeffs.len() != basis.size_m {
            return Err(Error::Mismatch(format!(
                "{} coefficients for a basis of size {}",
                coeffs.len(),
                basis.size_m
            )));
        }
        if index_n == 0 {
            return Err(Error::InvalidParameter("eigenvalue rank starts at 1".into()));
        }
        Ok(Self {
            basis,
            coeffs,
            index_n,
        })
    }

    pub fn basis(&self) -> BasisSpec {
        self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn index_n(&self) -> usize {
        self.index_n
    }

    /// Same function with coefficients multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            index_n: self.index_n,
        }
    }
}

/// Evaluates Σ û_m φ_m(x) at each point of `xs`.
pub fn eigenfunction_eval(f: &EigenFunctionCoeffs, xs: &[f64]) -> Vec<f64> {
    let alpha = f.basis.alpha;
    let m = f.basis.size_m;
    // Fold the normalization into the coefficients once.
    let weighted: Vec<f64> = phi_norms(alpha, m)
        .iter()
        .zip(&f.coeffs)
        .map(|(c, u)| c * u)
        .collect();
    let mut p = vec![0.0; m];
    xs.iter()
        .map(|&x| {
            jacobi_sequence(0.5 * alpha, 0.5 * alpha, x, &mut p);
            let s: f64 = weighted.iter().zip(&p).map(|(w, p)| w * p).sum();
            boundary_factor(alpha, x) * s
        })
        .collect()
}

/// Result of fitting u(-1 + ξ) ≈ A ξ^p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFit {
    pub amplitude: f64,
    pub exponent: f64,
    /// Set when the samples span less than one decade in ξ.
    pub degenerate: bool,
}

/// Least-squares fit of ln|u| against ln ξ.
pub fn boundary_exponent_fit(samples: &[(f64, f64)]) -> Result<BoundaryFit> {
    if samples.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "boundary fit needs at least 4 samples, got {}",
            samples.len()
        )));
    }
    let sign = samples[0].1.signum();
    for &(xi, u) in samples {
        if !(xi > 0.0 && xi <= 0.05) {
            return Err(Error::InvalidParameter(format!(
                "boundary distance {xi} outside (0, 0.05]"
            )));
        }
        if u == 0.0 || !u.is_finite() || u.signum() != sign {
            return Err(Error::InvalidParameter(
                "boundary samples must be finite, nonzero and of one sign".into(),
            ));
        }
    }
    let lx: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ly: Vec<f64> = samples.iter().map(|s| s.1.abs().ln()).collect();
    let (slope, intercept) = least_squares_line(&lx, &ly);
    let (lo, hi) = lx
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    Ok(BoundaryFit {
        amplitude: sign * intercept.exp(),
        exponent: slope,
        degenerate: hi - lo < std::f64::consts::LN_10,
    })
}

/// Slope and intercept of the least-squares line through (x, y).
pub(crate) fn least_squares_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub const BOUNDARY_WINDOW: (f64, f64) = (1e-4, 1e-2);
pub const BOUNDARY_SAMPLES: usize = 16;

/// Log-spaced distances from the left endpoint used for boundary fits.
pub fn boundary_window() -> Vec<f64> {
    let (lo, hi) = (BOUNDARY_WINDOW.0.ln(), BOUNDARY_WINDOW.1.ln());
    (0..BOUNDARY_SAMPLES)
        .map(|i| (lo + (hi - lo) * i as f64 / (BOUNDARY_SAMPLES - 1) as f64).exp())
        .collect()
}

/// Samples (ξ, u(-1 + ξ)) on the default boundary window.
pub fn sample_boundary(f: &EigenFunctionCoeffs) -> Vec<(f64, f64)> {
    let xi = boundary_window();
    let xs: Vec<f64> = xi.iter().map(|&e| -1.0 + e).collect();
    xi.into_iter().zip(eigenfunction_eval(f, &xs)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gauss_jacobi_rule;
    use proptest::prelude::*;

    #[test]
    fn phi_known_values() {
        let want = (2.0 / std::f64::consts::PI).sqrt();
        assert!((phi_eval(0, 1.0, 0.0) - want).abs() < 1e-14);
        for n in 0..20 {
            assert_eq!(phi_eval(n, 1.5, 1.0), 0.0);
            assert_eq!(phi_eval(n, 1.5, -1.0), 0.0);
        }
        assert!(phi_eval(1, 0.7, 0.0).abs() < 1e-16);
    }

    #[test]
    fn phi_is_orthogonal_at_alpha_two() {
        // At α = 2 the functions are (1-x²) times ultraspherical polynomials;
        // check ∫ φ_0² against an independent Legendre quadrature.
        let leg = gauss_jacobi_rule(40, 0.0, 0.0).unwrap();
        let b00 = leg.integrate(|x| phi_eval(0, 2.0, x).powi(2));
        // c_0² ∫(1-x²)² = (3/8)(16/15)
        assert!((b00 - 0.4).abs() < 1e-14);
    }

    #[test]
    fn normalization_does_not_overflow() {
        for &n in &[1000usize, 10_000, 99_999] {
            let v = phi_eval(n, 1.3, 0.123);
            assert!(v.is_finite());
            assert!(v.abs() < 10.0);
        }
    }

    #[test]
    fn reproduces_basis_and_is_linear() {
        let basis = BasisSpec::new(0.8, 5).unwrap();
        let e0 = EigenFunctionCoeffs::new(basis, vec![1.0, 0.0, 0.0, 0.0, 0.0], 1).unwrap();
        let xs = [-0.9, -0.3, 0.0, 0.41, 0.99];
        let got = eigenfunction_eval(&e0, &xs);
        for (g, &x) in got.iter().zip(&xs) {
            assert!((g - phi_eval(0, 0.8, x)).abs() < 1e-15);
        }
        let f = EigenFunctionCoeffs::new(basis, vec![0.3, -1.0, 0.25, 2.0, -0.5], 2).unwrap();
        let one = eigenfunction_eval(&f, &xs);
        let two = eigenfunction_eval(&f.scaled(2.0), &xs);
        for (a, b) in one.iter().zip(&two) {
            assert!((2.0 * a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn coefficient_length_is_checked() {
        let basis = BasisSpec::new(1.0, 3).unwrap();
        assert!(EigenFunctionCoeffs::new(basis, vec![1.0], 1).is_err());
        assert!(BasisSpec::new(0.0, 3).is_err());
        assert!(BasisSpec::new(2.5, 3).is_err());
        assert!(BasisSpec::new(1.0, 0).is_err());
    }

    #[test]
    fn exact_power_law_fit() {
        let samples: Vec<(f64, f64)> = boundary_window().into_iter().map(|x| (x, x.sqrt())).collect();
        let fit = boundary_exponent_fit(&samples).unwrap();
        assert!((fit.exponent - 0.5).abs() < 1e-12);
        assert!((fit.amplitude - 1.0).abs() < 1e-11);
        assert!(!fit.degenerate);
    }

    #[test]
    fn smooth_function_has_unit_exponent() {
        let samples: Vec<(f64, f64)> = boundary_window()
            .into_iter()
            .map(|x| (x, (std::f64::consts::FRAC_PI_2 * x).sin()))
            .collect();
        let fit = boundary_exponent_fit(&samples).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-4);
    }

    #[test]
    fn fit_flags_and_rejects() {
        let narrow: Vec<(f64, f64)> = (0..5).map(|i| (0.01 + 0.001 * i as f64, 1.0)).collect();
        assert!(boundary_exponent_fit(&narrow).unwrap().degenerate);
        assert!(boundary_exponent_fit(&narrow[..3]).is_err());
        let mixed = vec![(1e-3, 1.0), (2e-3, -1.0), (3e-3, 1.0), (4e-3, 1.0)];
        assert!(boundary_exponent_fit(&mixed).is_err());
        let far = vec![(1e-3, 1.0), (2e-3, 1.0), (3e-3, 1.0), (0.2, 1.0)];
        assert!(boundary_exponent_fit(&far).is_err());
    }

    proptest! {
        #[test]
        fn phi_parity(n in 0usize..=200, x in -1.0f64..1.0, alpha in 0.05f64..=2.0) {
            let p = phi_eval(n, alpha, x);
            let q = phi_eval(n, alpha, -x);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((p - sign * q).abs() <= 1e-11 * p.abs().max(1.0));
        }
    }
}
