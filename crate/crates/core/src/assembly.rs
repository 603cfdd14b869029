//! Galerkin matrices for (I + V) û = λ B û on the reference interval.
//!
//! Products φ_n φ_m carry the factor (1 - x²)^α, so both matrices are
//! integrated with Gauss–Jacobi rules of exponents (α, α). All rules used
//! here are symmetric, which lets entries of equal parity be folded onto the
//! nodes x ≥ 0 and makes b_nm = 0 for n + m odd an exact structural zero.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use faer::Mat;

use crate::basis::phi_norms;
use crate::eigsolve::SpectralParams;
use crate::error::{Error, Result};
use crate::specfun::{gauss_jacobi_rule, jacobi_sequence, QuadratureRule};

/// Extra nodes beyond M for the mass matrix (exact already at K = M).
pub const MASS_EXTRA_NODES: usize = 8;
/// Extra nodes beyond M for the potential matrix.
pub const POTENTIAL_EXTRA_NODES: usize = 32;
/// Relative change allowed between K and 2K nodes for non-polynomial V.
pub const POTENTIAL_QUADRATURE_TOL: f64 = 1e-12;
const MAX_DOUBLINGS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

type PotentialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied potential.
#[derive(Clone)]
pub struct CustomPotential {
    label: String,
    parity: Parity,
    f: PotentialFn,
}

impl CustomPotential {
    /// `parity` is trusted as given; declaring `Even` for a function that is
    /// not even produces wrong spectra.
    pub fn new(
        label: impl Into<String>,
        parity: Parity,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            parity,
            f: Arc::new(f),
        }
    }
}

impl fmt::Debug for CustomPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPotential")
            .field("label", &self.label)
            .field("parity", &self.parity)
            .finish_non_exhaustive()
    }
}

impl PartialEq for CustomPotential {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.parity == other.parity && Arc::ptr_eq(&self.f, &other.f)
    }
}

/// The potential V(x), given in the physical coordinate.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum PotentialSpec {
    #[default]
    Zero,
    /// x²/2
    Case1,
    /// 4x²
    Case2,
    /// 4x² + sin(πx/2)
    Case3,
    /// 50x² + sin(2πx)
    Case4,
    /// Σ c_k x^k, lowest degree first.
    Polynomial(Vec<f64>),
    Custom(CustomPotential),
}

impl PotentialSpec {
    pub fn eval(&self, x: f64) -> f64 {
        use std::f64::consts::PI;
        match self {
            Self::Zero => 0.0,
            Self::Case1 => 0.5 * x * x,
            Self::Case2 => 4.0 * x * x,
            Self::Case3 => 4.0 * x * x + (0.5 * PI * x).sin(),
            Self::Case4 => 50.0 * x * x + (2.0 * PI * x).sin(),
            Self::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
            Self::Custom(c) => (c.f)(x),
        }
    }

    /// Parity about x = 0.
    pub fn parity(&self) -> Parity {
        match self {
            Self::Zero | Self::Case1 | Self::Case2 => Parity::Even,
            Self::Case3 | Self::Case4 => Parity::None,
            Self::Polynomial(c) => {
                let odd_zero = c.iter().skip(1).step_by(2).all(|&v| v == 0.0);
                let even_zero = c.iter().step_by(2).all(|&v| v == 0.0);
                if odd_zero {
                    Parity::Even
                } else if even_zero {
                    Parity::Odd
                } else {
                    Parity::None
                }
            }
            Self::Custom(c) => c.parity,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Zero => true,
            Self::Polynomial(c) => c.iter().all(|&v| v == 0.0),
            _ => false,
        }
    }

    /// Polynomial degree when V is a polynomial, `None` otherwise.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match self {
            Self::Zero => Some(0),
            Self::Case1 | Self::Case2 => Some(2),
            Self::Polynomial(c) => Some(c.iter().rposition(|&v| v != 0.0).unwrap_or(0)),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Zero => "zero".into(),
            Self::Case1 => "case1".into(),
            Self::Case2 => "case2".into(),
            Self::Case3 => "case3".into(),
            Self::Case4 => "case4".into(),
            Self::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|v| format!("{v}")).collect();
                format!("poly:{}", parts.join(";"))
            }
            Self::Custom(c) => format!("custom:{}", c.label),
        }
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for PotentialSpec {
    type Err = Error;

    /// Accepts `zero`, `case1`..`case4` (also `half_x2`, `4x2`,
    /// `4x2+sin`, `50x2+sin`) and `poly:c0;c1;...`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "zero" | "0" | "none" => return Ok(Self::Zero),
            "case1" | "half_x2" | "x2/2" => return Ok(Self::Case1),
            "case2" | "4x2" => return Ok(Self::Case2),
            "case3" | "4x2+sin" => return Ok(Self::Case3),
            "case4" | "50x2+sin" => return Ok(Self::Case4),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("poly:") {
            let coeffs = rest
                .split([';', ','])
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| Error::InvalidParameter(format!("bad polynomial '{s}': {e}")))?;
            if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidParameter(format!("bad polynomial '{s}'")));
            }
            return Ok(Self::Polynomial(coeffs));
        }
        Err(Error::InvalidParameter(format!("unknown potential '{s}'")))
    }
}

/// The potential pulled back to (-1, 1) and scaled for the reference
/// problem: Ṽ(x̃) = L^α V(x₀ + L x̃).
#[derive(Debug, Clone)]
pub(crate) struct ReferencePotential<'a> {
    v: &'a PotentialSpec,
    center: f64,
    half_width: f64,
    scale: f64,
}

impl<'a> ReferencePotential<'a> {
    pub(crate) fn new(v: &'a PotentialSpec, alpha: f64, interval: (f64, f64)) -> Self {
        let half_width = 0.5 * (interval.1 - interval.0);
        Self {
            v,
            center: 0.5 * (interval.0 + interval.1),
            half_width,
            scale: half_width.powf(alpha),
        }
    }

    pub(crate) fn identity(v: &'a PotentialSpec) -> Self {
        Self {
            v,
            center: 0.0,
            half_width: 1.0,
            scale: 1.0,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        self.scale * self.v.eval(self.center + self.half_width * x)
    }

    fn is_even(&self) -> bool {
        self.v.is_zero() || (self.center == 0.0 && self.v.parity() == Parity::Even)
    }

    fn is_polynomial(&self) -> bool {
        matches!(self.v.polynomial_degree(), Some(d) if d <= 2 * POTENTIAL_EXTRA_NODES)
    }
}

/// Basis values c_n P_n(x_r) scaled by √ŵ_r, for the basis indices of one
/// parity, on the folded half rule.
fn folded_table(rule: &QuadratureRule, alpha: f64, m: usize, norms: &[f64], parity: usize, potential: Option<&dyn Fn(f64) -> f64>) -> Result<Mat<f64>> {
    let k = rule.len();
    let half: Vec<(f64, f64)> = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .skip(k / 2)
        .map(|(&x, &w)| (x, if x == 0.0 { w } else { 2.0 * w }))
        .collect();
    let cols: Vec<usize> = (parity..m).step_by(2).collect();
    let mut q = Mat::<f64>::zeros(half.len(), cols.len());
    let mut p = vec![0.0; m];
    let a = 0.5 * alpha;
    for (r, &(x, w)) in half.iter().enumerate() {
        jacobi_sequence(a, a, x, &mut p);
        let mut scale = w.sqrt();
        if let Some(v) = potential {
            let val = v(x);
            if !val.is_finite() {
                return Err(Error::NonFinitePotential { x });
            }
            scale *= val;
        }
        for (c, &n) in cols.iter().enumerate() {
            q[(r, c)] = scale * norms[n] * p[n];
        }
    }
    Ok(q)
}

/// Unfolded table over all K nodes and all M basis indices.
fn full_table(rule: &QuadratureRule, alpha: f64, m: usize, norms: &[f64], potential: Option<&dyn Fn(f64) -> f64>) -> Result<Mat<f64>> {
    let mut q = Mat::<f64>::zeros(rule.len(), m);
    let mut p = vec![0.0; m];
    let a = 0.5 * alpha;
    for (r, (&x, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
        jacobi_sequence(a, a, x, &mut p);
        let mut scale = w.sqrt();
        if let Some(v) = potential {
            let val = v(x);
            if !val.is_finite() {
                return Err(Error::NonFinitePotential { x });
            }
            scale *= val;
        }
        for n in 0..m {
            q[(r, n)] = scale * norms[n] * p[n];
        }
    }
    Ok(q)
}

fn check_assembly_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=2.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in [0, 2] for assembly, got {alpha}"
        )));
    }
    Ok(())
}

fn check_size(m: usize) -> Result<()> {
    if m == 0 || m > 1 << 14 {
        return Err(Error::InvalidParameter(format!(
            "basis size must lie in [1, 16384], got {m}"
        )));
    }
    Ok(())
}

/// Mass-matrix blocks for even and odd basis indices.
fn mass_blocks(alpha: f64, m: usize) -> Result<[Mat<f64>; 2]> {
    let rule = gauss_jacobi_rule(m + MASS_EXTRA_NODES, alpha, alpha)?;
    let norms = phi_norms(alpha, m);
    let mut out = [Mat::zeros(0, 0), Mat::zeros(0, 0)];
    for (parity, slot) in out.iter_mut().enumerate() {
        let q = folded_table(&rule, alpha, m, &norms, parity, None)?;
        *slot = q.transpose() * &q;
    }
    Ok(out)
}

/// b_nm = ∫ φ_n φ_m over (-1, 1). `alpha = 0` is accepted for testing and
/// gives the identity.
pub fn mass_matrix(alpha: f64, m: usize) -> Result<Mat<f64>> {
    check_assembly_alpha(alpha)?;
    check_size(m)?;
    let blocks = mass_blocks(alpha, m)?;
    Ok(scatter(m, &blocks))
}

/// v_nm = ∫ V φ_n φ_m over (-1, 1) with V in the reference coordinate.
pub fn potential_matrix(alpha: f64, m: usize, v: &PotentialSpec) -> Result<Mat<f64>> {
    check_assembly_alpha(alpha)?;
    check_size(m)?;
    let reference = ReferencePotential::identity(v);
    match potential_blocks(alpha, m, &reference)? {
        PotentialBlocks::Zero => Ok(Mat::zeros(m, m)),
        PotentialBlocks::Split(blocks) => Ok(scatter(m, &blocks)),
        PotentialBlocks::Full(full) => Ok(full),
    }
}

enum PotentialBlocks {
    Zero,
    Split([Mat<f64>; 2]),
    Full(Mat<f64>),
}

fn potential_blocks(alpha: f64, m: usize, v: &ReferencePotential<'_>) -> Result<PotentialBlocks> {
    if v.v.is_zero() {
        return Ok(PotentialBlocks::Zero);
    }
    let mut k = m + POTENTIAL_EXTRA_NODES;
    let mut current = potential_at(alpha, m, k, v)?;
    if v.is_polynomial() {
        return Ok(current);
    }
    let mut change = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        k *= 2;
        let refined = potential_at(alpha, m, k, v)?;
        change = relative_change(&current, &refined);
        current = refined;
        if change <= POTENTIAL_QUADRATURE_TOL {
            return Ok(current);
        }
    }
    Err(Error::QuadratureConvergence { nodes: k, change })
}

fn relative_change(a: &PotentialBlocks, b: &PotentialBlocks) -> f64 {
    let pairs: Vec<(&Mat<f64>, &Mat<f64>)> = match (a, b) {
        (PotentialBlocks::Split(x), PotentialBlocks::Split(y)) => vec![(&x[0], &y[0]), (&x[1], &y[1])],
        (PotentialBlocks::Full(x), PotentialBlocks::Full(y)) => vec![(x, y)],
        _ => return 0.0,
    };
    let (mut diff, mut norm) = (0.0, 0.0);
    for (x, y) in pairs {
        diff += (x - y).squared_norm_l2();
        norm += y.squared_norm_l2();
    }
    if norm == 0.0 {
        diff.sqrt()
    } else {
        (diff / norm).sqrt()
    }
}

fn potential_at(alpha: f64, m: usize, k: usize, v: &ReferencePotential<'_>) -> Result<PotentialBlocks> {
    let rule = gauss_jacobi_rule(k, alpha, alpha)?;
    let norms = phi_norms(alpha, m);
    let f = |x: f64| v.eval(x);
    if v.is_even() {
        let mut out = [Mat::zeros(0, 0), Mat::zeros(0, 0)];
        for (parity, slot) in out.iter_mut().enumerate() {
            let q = folded_table(&rule, alpha, m, &norms, parity, None)?;
            let qv = folded_table(&rule, alpha, m, &norms, parity, Some(&f))?;
            *slot = symmetrized(q.transpose() * &qv);
        }
        Ok(PotentialBlocks::Split(out))
    } else {
        let q = full_table(&rule, alpha, m, &norms, None)?;
        let qv = full_table(&rule, alpha, m, &norms, Some(&f))?;
        Ok(PotentialBlocks::Full(symmetrized(q.transpose() * &qv)))
    }
}

fn symmetrized(mut a: Mat<f64>) -> Mat<f64> {
    let n = a.nrows();
    for j in 0..n {
        for i in j + 1..n {
            let s = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = s;
            a[(j, i)] = s;
        }
    }
    a
}

/// Places the even/odd blocks into a full M×M matrix.
fn scatter(m: usize, blocks: &[Mat<f64>; 2]) -> Mat<f64> {
    let mut out = Mat::zeros(m, m);
    for (parity, block) in blocks.iter().enumerate() {
        for (c, j) in (parity..m).step_by(2).enumerate() {
            for (r, i) in (parity..m).step_by(2).enumerate() {
                out[(i, j)] = block[(r, c)];
            }
        }
    }
    out
}

/// One symmetric-definite sub-problem A x = λ B x together with the basis
/// indices it covers.
#[derive(Debug, Clone)]
pub struct ProblemBlock {
    pub indices: Vec<usize>,
    pub a: Mat<f64>,
    pub b: Mat<f64>,
}

/// The discrete problem (I + V) û = λ B û on the reference interval.
///
/// When V is even (about the interval midpoint) the problem decouples into
/// even- and odd-index blocks, stored separately; otherwise one block holds
/// the full matrices.
#[derive(Debug, Clone)]
pub struct AssembledProblem {
    alpha: f64,
    size_m: usize,
    blocks: Vec<ProblemBlock>,
    potential_min: f64,
}

impl AssembledProblem {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn size_m(&self) -> usize {
        self.size_m
    }

    pub fn blocks(&self) -> &[ProblemBlock] {
        &self.blocks
    }

    /// Even and odd blocks, when the problem decouples.
    pub fn parity_split(&self) -> Option<(&ProblemBlock, &ProblemBlock)> {
        match self.blocks.as_slice() {
            [even, odd] => Some((even, odd)),
            _ => None,
        }
    }

    /// Smallest sampled value of the reference potential (0 for V ≡ 0).
    pub fn potential_min(&self) -> f64 {
        self.potential_min
    }

    pub fn matrix_a(&self) -> Mat<f64> {
        self.gather(|b| &b.a)
    }

    pub fn matrix_b(&self) -> Mat<f64> {
        self.gather(|b| &b.b)
    }

    fn gather(&self, pick: impl Fn(&ProblemBlock) -> &Mat<f64>) -> Mat<f64> {
        let mut out = Mat::zeros(self.size_m, self.size_m);
        for block in &self.blocks {
            let mat = pick(block);
            for (c, &j) in block.indices.iter().enumerate() {
                for (r, &i) in block.indices.iter().enumerate() {
                    out[(i, j)] = mat[(r, c)];
                }
            }
        }
        out
    }
}

/// Assembles the reference-interval problem for `params`.
pub fn assemble_problem(params: &SpectralParams) -> Result<AssembledProblem> {
    let alpha = params.alpha();
    let m = params.size_m();
    check_size(m)?;
    let reference = ReferencePotential::new(params.potential(), alpha, params.interval());
    let mass = mass_blocks(alpha, m)?;
    let potential_min = if reference.v.is_zero() {
        0.0
    } else {
        let rule = gauss_jacobi_rule(m + POTENTIAL_EXTRA_NODES, alpha, alpha)?;
        rule.nodes()
            .iter()
            .map(|&x| reference.eval(x))
            .fold(f64::INFINITY, f64::min)
    };
    let identity_plus = |v: Option<Mat<f64>>, n: usize| -> Mat<f64> {
        let mut a = v.unwrap_or_else(|| Mat::zeros(n, n));
        for i in 0..n {
            a[(i, i)] += 1.0;
        }
        a
    };
    let blocks = match potential_blocks(alpha, m, &reference)? {
        PotentialBlocks::Zero => split_blocks(m, mass, [None, None], identity_plus),
        PotentialBlocks::Split([ve, vo]) => split_blocks(m, mass, [Some(ve), Some(vo)], identity_plus),
        PotentialBlocks::Full(v) => vec![ProblemBlock {
            indices: (0..m).collect(),
            a: identity_plus(Some(v), m),
            b: scatter(m, &mass),
        }],
    };
    Ok(AssembledProblem {
        alpha,
        size_m: m,
        blocks,
        potential_min,
    })
}

fn split_blocks(
    m: usize,
    mass: [Mat<f64>; 2],
    potential: [Option<Mat<f64>>; 2],
    identity_plus: impl Fn(Option<Mat<f64>>, usize) -> Mat<f64>,
) -> Vec<ProblemBlock> {
    mass.into_iter()
        .zip(potential)
        .enumerate()
        .filter(|(parity, _)| *parity < m)
        .map(|(parity, (b, v))| {
            let indices: Vec<usize> = (parity..m).step_by(2).collect();
            let a = identity_plus(v, indices.len());
            ProblemBlock { indices, a, b }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::phi_eval;
    use std::f64::consts::PI;

    #[test]
    fn alpha_zero_mass_is_identity() {
        let b = mass_matrix(0.0, 12).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((b[(i, j)] - want).abs() < 1e-14, "({i},{j}) = {}", b[(i, j)]);
            }
        }
    }

    #[test]
    fn mass_entries() {
        for &alpha in &[0.3, 1.0, 1.7, 2.0] {
            let b = mass_matrix(alpha, 9).unwrap();
            for i in 0..9 {
                for j in 0..9 {
                    if (i + j) % 2 == 1 {
                        assert_eq!(b[(i, j)], 0.0);
                    }
                    assert_eq!(b[(i, j)], b[(j, i)]);
                }
            }
        }
        let b = mass_matrix(1.0, 4).unwrap();
        assert!((b[(0, 0)] - 8.0 / (3.0 * PI)).abs() < 1e-14);
    }

    /// Independent oracle: integrate φ_n φ_m with a Legendre rule after the
    /// substitution x = sin θ... here a plain high-order Gauss–Legendre rule
    /// on the even integrand (1-x²)^α is enough at α = 2 (polynomial).
    #[test]
    fn mass_matches_direct_integration_at_alpha_two() {
        let leg = gauss_jacobi_rule(60, 0.0, 0.0).unwrap();
        let b = mass_matrix(2.0, 10).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let want = leg.integrate(|x| phi_eval(i, 2.0, x) * phi_eval(j, 2.0, x));
                assert!((b[(i, j)] - want).abs() < 1e-13, "({i},{j})");
            }
        }
    }

    #[test]
    fn potential_entries() {
        let v = potential_matrix(1.0, 6, &PotentialSpec::Case1).unwrap();
        assert!((v[(0, 0)] - 4.0 / (15.0 * PI)).abs() < 1e-14);
        let z = potential_matrix(1.3, 5, &PotentialSpec::Zero).unwrap();
        assert!(z.squared_norm_l2() == 0.0);
        let c = potential_matrix(0.7, 11, &PotentialSpec::Polynomial(vec![2.5])).unwrap();
        let b = mass_matrix(0.7, 11).unwrap();
        for i in 0..11 {
            for j in 0..11 {
                assert!((c[(i, j)] - 2.5 * b[(i, j)]).abs() <= 1e-12 * b[(i, j)].abs().max(1e-3));
            }
        }
    }

    #[test]
    fn non_polynomial_potential_couples_parities() {
        let v = potential_matrix(1.0, 8, &PotentialSpec::Case3).unwrap();
        assert!(v[(0, 1)].abs() > 1e-3);
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(v[(i, j)], v[(j, i)]);
            }
        }
    }

    #[test]
    fn non_finite_potential_reports_node() {
        let bad = PotentialSpec::Custom(CustomPotential::new("log", Parity::None, |x: f64| {
            if x > 0.5 { f64::NAN } else { x }
        }));
        match potential_matrix(1.0, 4, &bad) {
            Err(Error::NonFinitePotential { x }) => assert!(x > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn params(v: PotentialSpec, m: usize) -> SpectralParams {
        SpectralParams::new(1.2, (-1.0, 1.0), v, m).unwrap()
    }

    #[test]
    fn assembled_structure() {
        let zero = assemble_problem(&params(PotentialSpec::Zero, 7)).unwrap();
        let a = zero.matrix_a();
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(a[(i, j)], if i == j { 1.0 } else { 0.0 });
            }
        }
        let (e, o) = zero.parity_split().unwrap();
        assert_eq!((e.indices.len(), o.indices.len()), (4, 3));

        let case1 = assemble_problem(&params(PotentialSpec::Case1, 10)).unwrap();
        let (e, o) = case1.parity_split().unwrap();
        assert_eq!((e.indices.len(), o.indices.len()), (5, 5));
        let (a, b) = (case1.matrix_a(), case1.matrix_b());
        for i in 0..10 {
            for j in 0..10 {
                if (i + j) % 2 == 1 {
                    assert_eq!(a[(i, j)], 0.0);
                    assert_eq!(b[(i, j)], 0.0);
                }
            }
        }

        let case3 = assemble_problem(&params(PotentialSpec::Case3, 10)).unwrap();
        assert!(case3.parity_split().is_none());

        let one = assemble_problem(&params(PotentialSpec::Zero, 1)).unwrap();
        assert_eq!(one.blocks().len(), 1);
    }

    #[test]
    fn shifted_interval_loses_parity() {
        let p = SpectralParams::new(1.0, (0.0, 2.0), PotentialSpec::Case1, 6).unwrap();
        assert!(assemble_problem(&p).unwrap().parity_split().is_none());
        let p = SpectralParams::new(1.0, (0.0, 2.0), PotentialSpec::Zero, 6).unwrap();
        assert!(assemble_problem(&p).unwrap().parity_split().is_some());
    }

    #[test]
    fn potential_parsing() {
        assert_eq!("case1".parse::<PotentialSpec>().unwrap(), PotentialSpec::Case1);
        assert_eq!("zero".parse::<PotentialSpec>().unwrap(), PotentialSpec::Zero);
        let p: PotentialSpec = "poly:0;0;0.5".parse().unwrap();
        assert_eq!(p.parity(), Parity::Even);
        assert_eq!(p.eval(2.0), 2.0);
        assert_eq!(p.label().parse::<PotentialSpec>().unwrap(), p);
        assert_eq!(PotentialSpec::Polynomial(vec![0.0, 1.0]).parity(), Parity::Odd);
        assert!("wavy".parse::<PotentialSpec>().is_err());
        assert!("poly:".parse::<PotentialSpec>().is_err());
    }
}
