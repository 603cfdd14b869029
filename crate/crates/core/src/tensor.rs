//! Spectra of Σ_l (-∂_{x_l x_l})^{α/2} on boxes, built as tensor sums of a
//! 1D spectrum, with degeneracy and Weyl-law statistics.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use crate::eigsolve::{Method, Spectrum};
use crate::error::{Error, Result};
use crate::gaps::{fit_power_law, FitModel, FitResult, ZERO_TOL_REL};

/// Box half-width, as a named closed form or a raw value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HalfWidth {
    One,
    /// ∛2 / 2
    CubeRootTwoOverTwo,
    /// √2 / 2
    SqrtTwoOverTwo,
    /// 2 / 3
    TwoThirds,
    Value(f64),
}

impl HalfWidth {
    pub fn value(self) -> f64 {
        match self {
            Self::One => 1.0,
            Self::CubeRootTwoOverTwo => 2f64.cbrt() / 2.0,
            Self::SqrtTwoOverTwo => std::f64::consts::FRAC_1_SQRT_2,
            Self::TwoThirds => 2.0 / 3.0,
            Self::Value(v) => v,
        }
    }
}

impl fmt::Display for HalfWidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::One => f.write_str("1"),
            Self::CubeRootTwoOverTwo => f.write_str("cbrt2/2"),
            Self::SqrtTwoOverTwo => f.write_str("sqrt2/2"),
            Self::TwoThirds => f.write_str("2/3"),
            Self::Value(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for HalfWidth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let parsed = match t.as_str() {
            "1" => Self::One,
            "cbrt2/2" | "cbrt(2)/2" => Self::CubeRootTwoOverTwo,
            "sqrt2/2" | "sqrt(2)/2" => Self::SqrtTwoOverTwo,
            "2/3" => Self::TwoThirds,
            other => Self::Value(
                other
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad half-width '{s}'")))?,
            ),
        };
        Ok(parsed)
    }
}

/// A box with half-widths L_1 ≥ ... ≥ L_d and the 1D free spectrum on (-1, 1)
/// whose scaled copies are summed.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorParams {
    half_widths: Vec<f64>,
    base: Spectrum,
    requested_n: usize,
}

impl TensorParams {
    pub fn new(half_widths: &[HalfWidth], base: Spectrum, requested_n: usize) -> Result<Self> {
        let widths: Vec<f64> = half_widths.iter().map(|h| h.value()).collect();
        if widths.len() < 2 {
            return Err(Error::InvalidParameter("tensor spectra need d ≥ 2".into()));
        }
        if widths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(Error::InvalidParameter("half-widths must be positive".into()));
        }
        if widths.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter("half-widths must be non-increasing".into()));
        }
        if !base.params().potential().is_zero() || base.params().interval() != (-1.0, 1.0) || base.half_widths().is_some() {
            return Err(Error::InvalidParameter(
                "base spectrum must be one-dimensional with V ≡ 0 on (-1, 1)".into(),
            ));
        }
        let trusted = base.trusted_count() as f64;
        if requested_n == 0 || requested_n as f64 > trusted.powi(widths.len() as i32) {
            return Err(Error::OutOfTrustedRange {
                requested: requested_n,
                available: trusted.powi(widths.len() as i32).min(usize::MAX as f64) as usize,
            });
        }
        Ok(Self {
            half_widths: widths,
            base,
            requested_n,
        })
    }

    pub fn dimension(&self) -> usize {
        self.half_widths.len()
    }

    pub fn half_widths(&self) -> &[f64] {
        &self.half_widths
    }

    pub fn alpha(&self) -> f64 {
        self.base.alpha()
    }

    pub fn base(&self) -> &Spectrum {
        &self.base
    }

    pub fn requested_n(&self) -> usize {
        self.requested_n
    }

    /// S = Π 2L_l (the area for d = 2).
    pub fn volume(&self) -> f64 {
        self.half_widths.iter().map(|l| 2.0 * l).product()
    }
}

/// Requests above this share of the index grid sort the whole grid instead
/// of walking a heap frontier.
pub const MATERIALIZE_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
struct Node {
    value: f64,
    index: Vec<u32>,
}

impl Eq for Node {}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| self.index.cmp(&other.index))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn tuple_value(base: &[f64], scales: &[f64], index: &[u32]) -> f64 {
    index
        .iter()
        .zip(scales)
        .map(|(&j, s)| s * base[j as usize])
        .sum()
}

/// The `count` smallest tensor sums Σ_l scales[l]·base[j_l], ordered by value
/// and then lexicographically by index tuple.
pub(crate) fn smallest_sums(base: &[f64], scales: &[f64], count: usize) -> Vec<f64> {
    let d = scales.len();
    let t = base.len();
    let grid = (t as f64).powi(d as i32);
    if count as f64 > MATERIALIZE_FRACTION * grid {
        materialized_sums(base, scales, count)
    } else {
        heap_sums(base, scales, count)
    }
}

fn materialized_sums(base: &[f64], scales: &[f64], count: usize) -> Vec<f64> {
    let d = scales.len();
    let t = base.len();
    let total = t.pow(d as u32);
    // Lexicographic enumeration followed by a stable sort on value gives the
    // same tie order as the heap.
    let mut values = Vec::with_capacity(total);
    let mut index = vec![0u32; d];
    for _ in 0..total {
        values.push(tuple_value(base, scales, &index));
        for pos in (0..d).rev() {
            index[pos] += 1;
            if (index[pos] as usize) < t {
                break;
            }
            index[pos] = 0;
        }
    }
    values.sort_by(f64::total_cmp);
    values.truncate(count);
    values
}

/// Best-first walk over a spanning tree of the index grid.
///
/// The parent of a tuple decrements its first nonzero coordinate, so the
/// children of t are t + e_l for l up to the first nonzero position of t
/// (all l for the zero tuple). Every tuple has exactly one parent and is no
/// smaller than it, so no visited set is needed.
fn heap_sums(base: &[f64], scales: &[f64], count: usize) -> Vec<f64> {
    let d = scales.len();
    let t = base.len() as u32;
    let mut out = Vec::with_capacity(count);
    let mut heap = BinaryHeap::new();
    let root = vec![0u32; d];
    heap.push(Reverse(Node {
        value: tuple_value(base, scales, &root),
        index: root,
    }));
    while out.len() < count {
        let Some(Reverse(node)) = heap.pop() else { break };
        out.push(node.value);
        let first_nonzero = node.index.iter().position(|&j| j != 0).unwrap_or(d - 1);
        for l in 0..=first_nonzero {
            if node.index[l] + 1 < t {
                let mut child = node.index.clone();
                child[l] += 1;
                heap.push(Reverse(Node {
                    value: tuple_value(base, scales, &child),
                    index: child,
                }));
            }
        }
    }
    out
}

/// The `requested_n` smallest eigenvalues Σ_l L_l^{-α} λ_{j_l} of the box.
///
/// The returned spectrum's trusted count covers the values below
/// min_l (L_l^{-α} λ_T + Σ_{k≠l} L_k^{-α} λ_1), T the trusted base length:
/// no tuple using an untrusted base eigenvalue can fall below that level.
pub fn tensor_spectrum(params: &TensorParams) -> Result<Spectrum> {
    let alpha = params.alpha();
    let base = params.base.trusted();
    let scales: Vec<f64> = params.half_widths.iter().map(|l| l.powf(-alpha)).collect();
    let values = smallest_sums(base, &scales, params.requested_n);
    let first = base[0];
    let last = base[base.len() - 1];
    let floor_all: f64 = scales.iter().map(|s| s * first).sum();
    let bound = scales
        .iter()
        .map(|s| floor_all - s * first + s * last)
        .fold(f64::INFINITY, f64::min);
    let trusted = values.partition_point(|&v| v <= bound);
    let spectrum = Spectrum::new(params.base.params().clone(), values, trusted, Method::Tensor)?;
    Ok(spectrum.with_half_widths(params.half_widths.clone()))
}

/// Fraction of repeated eigenvalues R(N) at each checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct RepeatStats {
    pub n_values: Vec<usize>,
    pub r_values: Vec<f64>,
    /// Power-law fit of 1 - R against N, when at least three checkpoints
    /// are given.
    pub complement_fit: Option<FitResult>,
}

/// R(N) = #{2 ≤ n ≤ N : λ_n = λ_{n-1}} / N, equality within the relative
/// tolerance [`ZERO_TOL_REL`].
pub fn repeated_fraction(spec: &Spectrum, checkpoints: &[usize]) -> Result<RepeatStats> {
    let values = spec.eigenvalues();
    if let Some(&bad) = checkpoints.iter().find(|&&n| n == 0 || n > values.len()) {
        return Err(Error::OutOfTrustedRange {
            requested: bad,
            available: values.len(),
        });
    }
    let mut repeats = vec![0usize; values.len() + 1];
    for n in 2..=values.len() {
        let (prev, cur) = (values[n - 2], values[n - 1]);
        let tie = (cur - prev).abs() <= ZERO_TOL_REL * cur.abs();
        repeats[n] = repeats[n - 1] + usize::from(tie);
    }
    let r_values: Vec<f64> = checkpoints
        .iter()
        .map(|&n| repeats[n] as f64 / n as f64)
        .collect();
    let complement_fit = if checkpoints.len() >= 3 {
        let xs: Vec<f64> = checkpoints.iter().map(|&n| n as f64).collect();
        let ys: Vec<f64> = r_values.iter().map(|r| 1.0 - r).collect();
        Some(fit_power_law(&xs, &ys)?)
    } else {
        None
    };
    Ok(RepeatStats {
        n_values: checkpoints.to_vec(),
        r_values,
        complement_fit,
    })
}

/// Fits λ_n ≈ C_2 n^{α/2} over n in [n_lo, n_hi] (1-based) with the exponent
/// fixed. At α = 2 the fit also returns C_1 and c_0 of
/// λ_n = (4π/S)(n + C_1 √n + c_0).
pub fn weyl_fit(spec: &Spectrum, area_s: f64, (n_lo, n_hi): (usize, usize)) -> Result<FitResult> {
    if n_lo == 0 || n_hi < n_lo + 2 || n_hi > spec.trusted_count() {
        return Err(Error::InsufficientData(format!(
            "Weyl fit range [{n_lo}, {n_hi}] invalid for {} trusted values",
            spec.trusted_count()
        )));
    }
    if !(area_s > 0.0) {
        return Err(Error::InvalidParameter(format!("area must be positive, got {area_s}")));
    }
    let alpha = spec.alpha();
    let values = &spec.eigenvalues()[n_lo - 1..n_hi];
    let ns: Vec<f64> = (n_lo..=n_hi).map(|n| n as f64).collect();
    if values.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidParameter("Weyl fit needs positive eigenvalues".into()));
    }
    let shifted: Vec<f64> = ns
        .iter()
        .zip(values)
        .map(|(n, v)| v.ln() - 0.5 * alpha * n.ln())
        .collect();
    let ln_c2 = shifted.iter().sum::<f64>() / shifted.len() as f64;
    let residual = (shifted.iter().map(|v| (v - ln_c2).powi(2)).sum::<f64>() / shifted.len() as f64).sqrt();
    let mut coefficients = vec![ln_c2.exp()];
    if alpha == 2.0 {
        let scale = area_s / (4.0 * std::f64::consts::PI);
        let sq: Vec<f64> = ns.iter().map(|n| n.sqrt()).collect();
        let r: Vec<f64> = ns.iter().zip(values).map(|(n, v)| v * scale - n).collect();
        let (c1, c0) = crate::basis::least_squares_line(&sq, &r);
        coefficients.extend([c1, c0]);
    }
    Ok(FitResult {
        model: FitModel::Weyl2d,
        coefficients,
        residual,
        sample_count: values.len(),
    })
}
