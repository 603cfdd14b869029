//! Generalized symmetric eigensolver, 1D spectra, and interval rescaling.

use faer::linalg::triangular_solve::{solve_lower_triangular_in_place, solve_upper_triangular_in_place};
use faer::{Mat, MatRef, Par, Side};

use crate::assembly::{assemble_problem, PotentialSpec, ProblemBlock};
use crate::basis::{check_alpha, phi_norms, BasisSpec, EigenFunctionCoeffs};
use crate::error::{Error, Result};
use crate::specfun::{gauss_jacobi_rule, jacobi_sequence};

/// Order, interval, potential and basis size of a 1D problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralParams {
    alpha: f64,
    interval: (f64, f64),
    potential: PotentialSpec,
    size_m: usize,
}

impl SpectralParams {
    pub fn new(alpha: f64, interval: (f64, f64), potential: PotentialSpec, size_m: usize) -> Result<Self> {
        check_alpha(alpha)?;
        check_interval(interval)?;
        if size_m == 0 {
            return Err(Error::InvalidParameter("basis size must be at least 1".into()));
        }
        Ok(Self {
            alpha,
            interval,
            potential,
            size_m,
        })
    }

    /// V ≡ 0 on (-1, 1).
    pub fn free(alpha: f64, size_m: usize) -> Result<Self> {
        Self::new(alpha, (-1.0, 1.0), PotentialSpec::Zero, size_m)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    pub fn size_m(&self) -> usize {
        self.size_m
    }

    /// L = (b - a) / 2.
    pub fn half_width(&self) -> f64 {
        0.5 * (self.interval.1 - self.interval.0)
    }

    pub fn with_size(&self, size_m: usize) -> Result<Self> {
        Self::new(self.alpha, self.interval, self.potential.clone(), size_m)
    }

    pub fn with_interval(&self, interval: (f64, f64)) -> Result<Self> {
        Self::new(self.alpha, interval, self.potential.clone(), self.size_m)
    }
}

fn check_interval((a, b): (f64, f64)) -> Result<()> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "interval must satisfy a < b, got ({a}, {b})"
        )));
    }
    Ok(())
}

/// How a spectrum was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Jsm,
    Fdm,
    Analytic,
    Tensor,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Self::Jsm => "jsm",
            Self::Fdm => "fdm",
            Self::Analytic => "analytic",
            Self::Tensor => "tensor",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "jsm" => Ok(Self::Jsm),
            "fdm" => Ok(Self::Fdm),
            "analytic" => Ok(Self::Analytic),
            "tensor" => Ok(Self::Tensor),
            other => Err(Error::InvalidParameter(format!("unknown method '{other}'"))),
        }
    }
}

/// Ascending eigenvalues with the parameters that produced them.
///
/// Only the first `trusted_count` values are claimed to be accurate. Tensor
/// spectra additionally carry the box half-widths L_1 ≥ ... ≥ L_d.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    params: SpectralParams,
    eigenvalues: Vec<f64>,
    trusted_count: usize,
    method: Method,
    half_widths: Option<Vec<f64>>,
}

impl Spectrum {
    pub fn new(params: SpectralParams, eigenvalues: Vec<f64>, trusted_count: usize, method: Method) -> Result<Self> {
        if eigenvalues.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidParameter("eigenvalues contain NaN".into()));
        }
        if eigenvalues.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter("eigenvalues must be ascending".into()));
        }
        if trusted_count > eigenvalues.len() {
            return Err(Error::InvalidParameter(format!(
                "trusted count {trusted_count} exceeds length {}",
                eigenvalues.len()
            )));
        }
        Ok(Self {
            params,
            eigenvalues,
            trusted_count,
            method,
            half_widths: None,
        })
    }

    pub fn with_half_widths(mut self, half_widths: Vec<f64>) -> Self {
        self.half_widths = Some(half_widths);
        self
    }

    pub fn params(&self) -> &SpectralParams {
        &self.params
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn trusted(&self) -> &[f64] {
        &self.eigenvalues[..self.trusted_count]
    }

    pub fn trusted_count(&self) -> usize {
        self.trusted_count
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn half_widths(&self) -> Option<&[f64]> {
        self.half_widths.as_deref()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Keeps only the trusted prefix.
    pub fn truncated_to_trusted(&self) -> Self {
        let mut out = self.clone();
        out.eigenvalues.truncate(self.trusted_count);
        out
    }
}

/// Default trust marker: the lower half of a size-M discrete spectrum.
pub fn default_trusted_count(size_m: usize) -> usize {
    size_m / 2
}

fn check_pair(a: MatRef<'_, f64>, b: MatRef<'_, f64>) -> Result<()> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::Mismatch(format!(
            "matrices must be square and equal in size, got {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(())
}

/// C = L⁻¹ X L⁻ᵀ for symmetric X.
fn congruence(l: MatRef<'_, f64>, x: MatRef<'_, f64>) -> Mat<f64> {
    let mut w = x.to_owned();
    solve_lower_triangular_in_place(l, w.as_mut(), Par::Seq);
    let mut c = w.transpose().to_owned();
    solve_lower_triangular_in_place(l, c.as_mut(), Par::Seq);
    let n = c.nrows();
    for j in 0..n {
        for i in j + 1..n {
            let s = 0.5 * (c[(i, j)] + c[(j, i)]);
            c[(i, j)] = s;
            c[(j, i)] = s;
        }
    }
    c
}

/// Solves A x = λ B x for symmetric A and symmetric positive-definite B.
///
/// When A is itself positive definite the reduction factors A = LLᵀ and
/// solves L⁻¹BL⁻ᵀ y = μ y with λ = 1/μ. Its absolute error in μ is relative
/// to ‖B‖, so the small λ (large μ) come out with full relative accuracy
/// even though B is badly conditioned at large M. Otherwise B = LLᵀ is
/// factored and L⁻¹AL⁻ᵀ is diagonalized. Eigenvalues are ascending and
/// eigenvectors are B-normalized (xᵀBx = 1).
pub fn solve_gsym(a: MatRef<'_, f64>, b: MatRef<'_, f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    check_pair(a, b)?;
    let (values, vectors) = solve_gsym_impl(a, b, true)?;
    Ok((values, vectors.expect("vectors requested")))
}

/// Eigenvalues only; see [`solve_gsym`].
pub fn solve_gsym_values(a: MatRef<'_, f64>, b: MatRef<'_, f64>) -> Result<Vec<f64>> {
    check_pair(a, b)?;
    Ok(solve_gsym_impl(a, b, false)?.0)
}

fn solve_gsym_impl(a: MatRef<'_, f64>, b: MatRef<'_, f64>, want_vectors: bool) -> Result<(Vec<f64>, Option<Mat<f64>>)> {
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(|| Mat::zeros(0, 0))));
    }
    if let Ok(llt) = a.llt(Side::Lower) {
        return inverted_route(llt.L(), b, want_vectors);
    }
    let llt = b.llt(Side::Lower).map_err(|_| Error::NotPositiveDefinite)?;
    let l = llt.L();
    let c = congruence(l, a);
    if want_vectors {
        let eig = c.self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenConvergence)?;
        let values: Vec<f64> = (0..n).map(|i| eig.S().column_vector()[i]).collect();
        let mut x = eig.U().to_owned();
        solve_upper_triangular_in_place(l.transpose(), x.as_mut(), Par::Seq);
        Ok((values, Some(x)))
    } else {
        let values = c.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::EigenConvergence)?;
        Ok((values, None))
    }
}

fn inverted_route(l: MatRef<'_, f64>, b: MatRef<'_, f64>, want_vectors: bool) -> Result<(Vec<f64>, Option<Mat<f64>>)> {
    let n = l.nrows();
    let c = congruence(l, b);
    let (mu, y) = if want_vectors {
        let eig = c.self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenConvergence)?;
        let mu: Vec<f64> = (0..n).map(|i| eig.S().column_vector()[i]).collect();
        (mu, Some(eig.U().to_owned()))
    } else {
        (c.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::EigenConvergence)?, None)
    };
    // μ below roundoff level is indistinguishable from zero; clamping keeps
    // the reciprocal finite and the order monotone.
    let mu_max = mu.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let floor = f64::EPSILON * mu_max * n as f64;
    let clamped: Vec<f64> = mu.iter().rev().map(|&m| m.max(floor)).collect();
    let values: Vec<f64> = clamped.iter().map(|&m| 1.0 / m).collect();
    let vectors = y.map(|y| {
        let mut x = Mat::<f64>::zeros(n, n);
        for (k, &m) in clamped.iter().enumerate() {
            let src = n - 1 - k;
            let s = 1.0 / m.sqrt();
            for i in 0..n {
                x[(i, k)] = s * y[(i, src)];
            }
        }
        solve_upper_triangular_in_place(l.transpose(), x.as_mut(), Par::Seq);
        x
    });
    Ok((values, vectors))
}

/// Solves one block with A shifted by `shift`·B (to make it definite) and
/// undoes the shift.
fn solve_block(block: &ProblemBlock, shift: f64, want_vectors: bool) -> Result<(Vec<f64>, Option<Mat<f64>>)> {
    let (values, vectors) = if shift > 0.0 {
        let a = &block.a + &block.b * faer::Scale(shift);
        solve_gsym_impl(a.as_ref(), block.b.as_ref(), want_vectors)?
    } else {
        solve_gsym_impl(block.a.as_ref(), block.b.as_ref(), want_vectors)?
    };
    Ok((values.into_iter().map(|v| v - shift).collect(), vectors))
}

struct Solved {
    values: Vec<f64>,
    coeffs: Option<Vec<Vec<f64>>>,
}

fn solve_reference(params: &SpectralParams, want_vectors: bool) -> Result<Solved> {
    let problem = assemble_problem(params)?;
    let m = problem.size_m();
    // A = I + V is definite once V + shift ≥ 0 at every quadrature node.
    let shift = if problem.potential_min() < 0.0 {
        -problem.potential_min() + 1.0
    } else {
        0.0
    };
    let mut merged: Vec<(f64, Option<Vec<f64>>)> = Vec::with_capacity(m);
    for block in problem.blocks() {
        let (values, vectors) = solve_block(block, shift, want_vectors)?;
        for (k, v) in values.into_iter().enumerate() {
            let coeffs = vectors.as_ref().map(|x| {
                let mut full = vec![0.0; m];
                for (r, &i) in block.indices.iter().enumerate() {
                    full[i] = x[(r, k)];
                }
                full
            });
            merged.push((v, coeffs));
        }
    }
    // Stable: ties keep the even block first.
    merged.sort_by(|p, q| p.0.total_cmp(&q.0));
    let values = merged.iter().map(|p| p.0).collect();
    let coeffs = want_vectors.then(|| merged.into_iter().map(|p| p.1.unwrap_or_default()).collect());
    Ok(Solved { values, coeffs })
}

/// Eigenvalues of the fractional Schrödinger operator on the parameter
/// interval, ascending, with `trusted_count = ⌊M/2⌋`.
pub fn spectrum_1d(params: &SpectralParams) -> Result<Spectrum> {
    let solved = solve_reference(params, false)?;
    let scale = params.half_width().powf(-params.alpha);
    let values = solved.values.into_iter().map(|v| v * scale).collect();
    Spectrum::new(params.clone(), values, default_trusted_count(params.size_m), Method::Jsm)
}

/// Eigenvalues and eigenfunction coefficients.
///
/// The coefficients describe eigenfunctions of the reference problem on
/// (-1, 1), normalized to unit L² norm there, with the sign fixed so that the
/// value at the quadrature node closest to -1 is positive.
pub fn solve_fso_1d(params: &SpectralParams) -> Result<(Spectrum, Vec<EigenFunctionCoeffs>)> {
    let solved = solve_reference(params, true)?;
    let alpha = params.alpha;
    let m = params.size_m;
    let basis = BasisSpec::new(alpha, m)?;
    let x0 = gauss_jacobi_rule(m + crate::assembly::MASS_EXTRA_NODES, alpha, alpha)?.nodes()[0];
    let mut p = vec![0.0; m];
    jacobi_sequence(0.5 * alpha, 0.5 * alpha, x0, &mut p);
    let probe: Vec<f64> = phi_norms(alpha, m).iter().zip(&p).map(|(c, p)| c * p).collect();
    let coeffs = solved.coeffs.expect("vectors requested");
    let mut functions = Vec::with_capacity(m);
    for (k, mut u) in coeffs.into_iter().enumerate() {
        let at_edge: f64 = u.iter().zip(&probe).map(|(a, b)| a * b).sum();
        let sign = if at_edge != 0.0 {
            at_edge.signum()
        } else {
            u.iter().find(|v| **v != 0.0).map_or(1.0, |v| v.signum())
        };
        if sign < 0.0 {
            u.iter_mut().for_each(|v| *v = -*v);
        }
        functions.push(EigenFunctionCoeffs::new(basis, u, k + 1)?);
    }
    let scale = params.half_width().powf(-alpha);
    let values = solved.values.into_iter().map(|v| v * scale).collect();
    let spectrum = Spectrum::new(params.clone(), values, default_trusted_count(m), Method::Jsm)?;
    Ok((spectrum, functions))
}

/// Maps a spectrum computed on (-1, 1) to (a, b): λ = L^{-α} λ̃ with
/// L = (b - a)/2.
pub fn rescale_spectrum(spec: &Spectrum, a: f64, b: f64) -> Result<Spectrum> {
    check_interval((a, b))?;
    let l = 0.5 * (b - a);
    let scale = l.powf(-spec.alpha());
    let values = spec.eigenvalues.iter().map(|v| v * scale).collect();
    let params = spec.params.with_interval((a, b))?;
    let mut out = Spectrum::new(params, values, spec.trusted_count, spec.method)?;
    out.half_widths = spec.half_widths.clone();
    Ok(out)
}

/// Exact α = 2, V ≡ 0 eigenvalues (nπ/(b-a))², n = 1..=count.
pub fn laplacian_spectrum(interval: (f64, f64), count: usize) -> Result<Spectrum> {
    check_interval(interval)?;
    let k = std::f64::consts::PI / (interval.1 - interval.0);
    let values = (1..=count).map(|n| (n as f64 * k).powi(2)).collect();
    let params = SpectralParams::new(2.0, interval, PotentialSpec::Zero, count.max(1))?;
    Spectrum::new(params, values, count, Method::Analytic)
}
