//! Subcommand implementations. Each returns once its CSV and sidecar are
//! written.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{ArgAction, Args};
use fso_core::assembly::PotentialSpec;
use fso_core::baselines::{error_report, fdm_spectrum};
use fso_core::basis::{boundary_exponent_fit, eigenfunction_eval, sample_boundary};
use fso_core::eigsolve::{default_trusted_count, solve_fso_1d, spectrum_1d, Method, SpectralParams, Spectrum};
use fso_core::gaps::{
    classify_distribution, default_histogram_range, fit_exponential, fit_norm_correction, fit_power_law,
    fit_power_law_fixed, gap_series, histogram, potential_shift_report, predicted_gaps, unfolding_constants,
    Classification, FitResult, DEFAULT_BINS,
};
use fso_core::tensor::{repeated_fraction, tensor_spectrum, weyl_fit, HalfWidth, TensorParams};
use serde_json::{json, Value};

use crate::format::{header, load_spectrum, num, spectrum_params_json, write_spectrum, Destination};
use crate::CliError;

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// CSV destination (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON sidecar destination (defaults to the CSV path with a .json extension)
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

impl OutputArgs {
    fn destination(&self) -> Destination {
        Destination {
            out: self.out.clone(),
            meta: self.meta.clone(),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ProblemArgs {
    #[arg(long, required_unless_present = "alpha_list", allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Comma-separated α values; runs one job per (α, M) pair
    #[arg(long = "alpha-list", value_delimiter = ',', conflicts_with = "alpha")]
    pub alpha_list: Vec<f64>,
    /// Basis size (grid intervals for `fdm`)
    #[arg(long = "M", required_unless_present = "m_list")]
    pub m: Option<usize>,
    #[arg(long = "M-list", value_delimiter = ',', conflicts_with = "m")]
    pub m_list: Vec<usize>,
    /// zero, case1..case4, or poly:c0;c1;...
    #[arg(long, default_value = "zero")]
    pub potential: String,
    /// Interval a,b
    #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
    pub interval: String,
    /// Emit only eigenvalues inside the trusted range
    #[arg(long = "trusted-only", default_value_t = true, action = ArgAction::Set)]
    pub trusted_only: bool,
}

pub fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), CliError> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("{what} must be 'lo,hi', got '{s}'")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("{what}: '{t}' is not a number")))
    };
    Ok((parse(a)?, parse(b)?))
}

fn parse_potential(s: &str) -> Result<PotentialSpec, CliError> {
    s.parse().map_err(|e: fso_core::Error| CliError::Usage(e.to_string()))
}

impl ProblemArgs {
    fn jobs(&self) -> Result<Vec<SpectralParams>, CliError> {
        let alphas = if self.alpha_list.is_empty() { self.alpha.into_iter().collect() } else { self.alpha_list.clone() };
        let sizes = if self.m_list.is_empty() { self.m.into_iter().collect() } else { self.m_list.clone() };
        let interval = parse_pair(&self.interval, "--interval")?;
        let potential = parse_potential(&self.potential)?;
        let mut jobs = Vec::new();
        for &alpha in &alphas {
            for &m in &sizes {
                jobs.push(SpectralParams::new(alpha, interval, potential.clone(), m)?);
            }
        }
        Ok(jobs)
    }

    fn is_sweep(&self) -> bool {
        self.alpha_list.len() > 1 || self.m_list.len() > 1
    }
}

/// Worker count from `FSO_NUM_THREADS`, else the machine's parallelism.
pub fn worker_count() -> usize {
    std::env::var("FSO_NUM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `f` over `jobs` on a small pool; results keep the job order.
pub fn run_pool<J: Sync, T: Send>(jobs: &[J], f: impl Fn(&J) -> T + Sync) -> Vec<T> {
    let workers = worker_count().min(jobs.len()).max(1);
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let result = f(&jobs[i]);
                slots.lock().unwrap()[i] = Some(result);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(|r| r.expect("every job ran")).collect()
}

fn fit_json(fit: &FitResult) -> Value {
    json!({
        "model": fit.model.tag(),
        "coefficients": fit.coefficients,
        "residual": fit.residual,
        "sample_count": fit.sample_count,
    })
}

fn class_json(c: &Classification) -> Value {
    json!({
        "model": "classification",
        "kind": c.kind.tag(),
        "ks": c.ks,
        "tau": c.tau,
        "fraction_near_one": c.fraction_near_one,
        "fraction_zero": c.fraction_zero,
        "mean": c.mean,
        "sample_count": c.sample_count,
    })
}

fn sweep_tag(p: &SpectralParams) -> String {
    format!("a{}_M{}", p.alpha(), p.size_m())
}

fn run_spectra(
    problem: &ProblemArgs,
    output: &OutputArgs,
    solve: impl Fn(&SpectralParams) -> fso_core::Result<Spectrum> + Sync,
) -> Result<(), CliError> {
    let jobs = problem.jobs()?;
    let results = run_pool(&jobs, |p| {
        let start = Instant::now();
        solve(p).map(|s| (s, start.elapsed().as_secs_f64()))
    });
    let dest = output.destination();
    for (params, result) in jobs.iter().zip(results) {
        let (spec, seconds) = result?;
        let target = if problem.is_sweep() { dest.tagged(&sweep_tag(params)) } else { dest.clone() };
        let csv = write_spectrum(&spec, problem.trusted_only);
        target.emit(&csv, spectrum_params_json(&spec), seconds, json!([]))?;
    }
    Ok(())
}

pub fn solve1d(problem: &ProblemArgs, output: &OutputArgs) -> Result<(), CliError> {
    run_spectra(problem, output, spectrum_1d)
}

pub fn fdm(problem: &ProblemArgs, output: &OutputArgs) -> Result<(), CliError> {
    run_spectra(problem, output, |p| fdm_spectrum(p, p.size_m()))
}

#[derive(Args, Debug, Clone)]
pub struct Solve2dArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Basis size of the 1D base spectrum on (-1, 1)
    #[arg(long = "base-M", default_value_t = 4096)]
    pub base_m: usize,
    /// Non-increasing half-widths, e.g. 1,cbrt2/2 (also sqrt2/2, 2/3, numbers)
    #[arg(long = "half-widths", default_value = "1,1")]
    pub half_widths: String,
    /// Number of smallest tensor eigenvalues
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long = "trusted-only", default_value_t = true, action = ArgAction::Set)]
    pub trusted_only: bool,
}

pub fn solve2d(args: &Solve2dArgs, output: &OutputArgs) -> Result<(), CliError> {
    let widths = args
        .half_widths
        .split(',')
        .map(|s| s.parse::<HalfWidth>())
        .collect::<fso_core::Result<Vec<_>>>()?;
    let start = Instant::now();
    let base = spectrum_1d(&SpectralParams::free(args.alpha, args.base_m)?)?;
    let spec = tensor_spectrum(&TensorParams::new(&widths, base, args.n)?)?;
    let seconds = start.elapsed().as_secs_f64();
    let mut params = spectrum_params_json(&spec);
    params["requested_n"] = json!(args.n);
    params["half_width_labels"] = json!(widths.iter().map(|w| w.to_string()).collect::<Vec<_>>());
    let csv = write_spectrum(&spec, args.trusted_only);
    output.destination().emit(&csv, params, seconds, json!([]))
}

#[derive(Args, Debug, Clone)]
pub struct GapsArgs {
    /// Spectrum CSV written by solve1d, solve2d or fdm
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Largest N (defaults to the trusted count minus one)
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
}

fn default_n_max(spec: &Spectrum, requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| spec.trusted_count().saturating_sub(1))
}

pub fn gaps(args: &GapsArgs, output: &OutputArgs) -> Result<(), CliError> {
    let spec = load_spectrum(&args.input)?;
    let start = Instant::now();
    let series = gap_series(&spec, default_n_max(&spec, args.n_max))?;
    let one_d = spec.half_widths().is_none();
    let ev = spec.eigenvalues();
    let mut csv = header(spec.params(), spec.method().tag(), spec.trusted_count(), spec.half_widths());
    csv.push_str(if one_d { "N,nn,min,ave,norm,nn_pred,min_pred,ave_pred\n" } else { "N,nn,min,ave,norm\n" });
    for i in 0..series.len() {
        let n = i + 1;
        write!(
            csv,
            "{n},{},{},{},{}",
            num(series.nn[i]),
            num(series.minimum[i]),
            num(series.average[i]),
            num(series.normalized[i])
        )
        .unwrap();
        if one_d {
            let p = predicted_gaps(spec.alpha(), spec.params().interval(), ev[0], ev[1], n);
            write!(csv, ",{},{},{}", num(p.nn), num(p.min), num(p.ave)).unwrap();
        }
        csv.push('\n');
    }
    let seconds = start.elapsed().as_secs_f64();
    let mut fits = Vec::new();
    if let Ok(c) = classify_distribution(&series.normalized, series.zero_tolerance()) {
        fits.push(class_json(&c));
    }
    let mut params = spectrum_params_json(&spec);
    params["unfold_gamma"] = json!(series.unfold_gamma);
    params["unfold_c"] = json!(series.unfold_c);
    params["fundamental_gap"] = json!(series.fundamental_gap);
    output.destination().emit(&csv, params, seconds, Value::Array(fits))
}

#[derive(Args, Debug, Clone)]
pub struct HistArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    /// Histogram range lo,hi (defaults to a range covering the bulk of the gaps)
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
}

pub fn hist(args: &HistArgs, output: &OutputArgs) -> Result<(), CliError> {
    let spec = load_spectrum(&args.input)?;
    let start = Instant::now();
    let series = gap_series(&spec, default_n_max(&spec, args.n_max))?;
    let range = match &args.range {
        Some(r) => parse_pair(r, "--range")?,
        None => default_histogram_range(&series.normalized),
    };
    let h = histogram(&series.normalized, args.bins, range)?;
    let mut csv = header(spec.params(), spec.method().tag(), spec.trusted_count(), spec.half_widths());
    csv.push_str("bin_lo,bin_hi,count,density\n");
    let w = h.bin_width();
    for (i, (count, density)) in h.counts.iter().zip(&h.densities).enumerate() {
        let lo = h.lo + i as f64 * w;
        writeln!(csv, "{},{},{count},{}", num(lo), num(lo + w), num(*density)).unwrap();
    }
    let seconds = start.elapsed().as_secs_f64();
    let mut fits = Vec::new();
    if let Ok(c) = classify_distribution(&series.normalized, series.zero_tolerance()) {
        fits.push(class_json(&c));
    }
    let mut params = spectrum_params_json(&spec);
    params["bins"] = json!(args.bins);
    params["range"] = json!([range.0, range.1]);
    output.destination().emit(&csv, params, seconds, Value::Array(fits))
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitKind {
    /// (λ̃_n - λ_n)/λ̃_n ≈ C_3 / n against the leading-order law
    C3,
    /// λ_n ≈ C_2 n^{α/2} for 2D tensor spectra
    Weyl,
    /// exponential law of the normalized gaps
    Poisson,
    /// 1 - R(N) ≈ A N^p for the fraction of repeated eigenvalues
    Repeat,
    /// δ_norm(N) - 1 ≈ C̃ N^p
    Norm,
    /// λ_n(V) - λ_n(0) - C_V ≈ A n^{-τ_1}; needs --zero
    Shift,
}

#[derive(Args, Debug, Clone)]
pub struct FitArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub model: FitKind,
    /// Index window lo,hi (1-based, inclusive)
    #[arg(long)]
    pub range: Option<String>,
    /// V ≡ 0 spectrum with matching α and interval, for `--model shift`
    #[arg(long)]
    pub zero: Option<PathBuf>,
}

fn index_range(args: &FitArgs, default: (usize, usize)) -> Result<(usize, usize), CliError> {
    match &args.range {
        None => Ok(default),
        Some(r) => {
            let (lo, hi) = parse_pair(r, "--range")?;
            if lo < 1.0 || hi < lo || lo.fract() != 0.0 || hi.fract() != 0.0 {
                return Err(CliError::Usage(format!("--range must be two positive integers lo ≤ hi, got '{r}'")));
            }
            Ok((lo as usize, hi as usize))
        }
    }
}

pub fn fit(args: &FitArgs, output: &OutputArgs) -> Result<(), CliError> {
    let spec = load_spectrum(&args.input)?;
    let start = Instant::now();
    let trusted = spec.trusted_count();
    let mut rows: Vec<(String, f64)> = Vec::new();
    let mut fits: Vec<Value> = Vec::new();
    match args.model {
        FitKind::C3 => {
            let (lo, hi) = index_range(args, (50.min(trusted), 2000.min(trusted)))?;
            if hi > trusted || hi < lo + 2 {
                return Err(CliError::Numeric(format!("index window [{lo}, {hi}] outside {trusted} trusted values")));
            }
            let (gamma, c) = unfolding_constants(&spec);
            let ns: Vec<f64> = (lo..=hi).map(|n| n as f64).collect();
            let errs: Vec<f64> = ns
                .iter()
                .map(|&n| {
                    let law = c * n.powf(gamma);
                    (law - spec.eigenvalues()[n as usize - 1]) / law
                })
                .collect();
            let fixed = fit_power_law_fixed(&ns, &errs, -1.0)?;
            let free = fit_power_law(&ns, &errs)?;
            rows.push(("c3".into(), fixed.coefficients[0]));
            rows.push(("free_amplitude".into(), free.coefficients[0]));
            rows.push(("free_exponent".into(), free.coefficients[1]));
            fits.extend([fit_json(&fixed), fit_json(&free)]);
        }
        FitKind::Weyl => {
            let widths = spec
                .half_widths()
                .filter(|w| w.len() == 2)
                .ok_or_else(|| CliError::Usage("--model weyl needs a 2D tensor spectrum".into()))?;
            let s = 4.0 * widths[0] * widths[1];
            let window = index_range(args, (trusted / 10, trusted))?;
            let f = weyl_fit(&spec, s, window)?;
            rows.push(("c2".into(), f.coefficients[0]));
            if let [_, c1, c0] = f.coefficients[..] {
                rows.push(("c1".into(), c1));
                rows.push(("c0".into(), c0));
            }
            fits.push(fit_json(&f));
        }
        FitKind::Poisson => {
            let series = gap_series(&spec, trusted.saturating_sub(1))?;
            let (lo, hi) = index_range(args, (1, series.len()))?;
            if hi > series.len() {
                return Err(CliError::Numeric(format!("only {} gaps available", series.len())));
            }
            let f = fit_exponential(&series.normalized[lo - 1..hi])?;
            rows.push(("tau".into(), f.coefficients[0]));
            rows.push(("ks".into(), f.residual));
            fits.push(fit_json(&f));
        }
        FitKind::Repeat => {
            // Ten log-spaced checkpoints over the window, by default the top
            // decade of the certified range where the asymptotic law applies.
            let (lo, hi) = index_range(args, ((trusted / 10).max(1), trusted))?;
            if hi > trusted || hi <= lo {
                return Err(CliError::Numeric(format!("checkpoint window [{lo}, {hi}] outside {trusted} trusted values")));
            }
            let mut checkpoints: Vec<usize> = (0..10)
                .map(|i| (lo as f64 * (hi as f64 / lo as f64).powf(i as f64 / 9.0)).round() as usize)
                .collect();
            checkpoints.dedup();
            let stats = repeated_fraction(&spec.truncated_to_trusted(), &checkpoints)?;
            for (n, r) in stats.n_values.iter().zip(&stats.r_values) {
                rows.push((format!("r_{n}"), *r));
            }
            if let Some(f) = &stats.complement_fit {
                rows.push(("complement_amplitude".into(), f.coefficients[0]));
                rows.push(("complement_exponent".into(), f.coefficients[1]));
                fits.push(fit_json(f));
            }
        }
        FitKind::Norm => {
            let series = gap_series(&spec, trusted.saturating_sub(1))?;
            let (lo, hi) = index_range(args, (5.min(series.len()), series.len()))?;
            let f = fit_norm_correction(&series, lo, hi)?;
            for (i, c) in f.coefficients.iter().enumerate() {
                rows.push((format!("coefficient_{i}"), *c));
            }
            fits.push(fit_json(&f));
        }
        FitKind::Shift => {
            let zero_path = args
                .zero
                .as_ref()
                .ok_or_else(|| CliError::Usage("--model shift needs --zero <spectrum with V ≡ 0>".into()))?;
            let zero = load_spectrum(zero_path)?;
            let report = potential_shift_report(&spec, &zero, spec.params().potential())?;
            rows.push(("c_v".into(), report.c_v));
            if let Some(tau1) = report.tau1() {
                rows.push(("tau1".into(), tau1));
            }
            if let Some(f) = &report.tau1_fit {
                fits.push(fit_json(f));
            }
        }
    }
    let seconds = start.elapsed().as_secs_f64();
    let mut csv = header(spec.params(), spec.method().tag(), spec.trusted_count(), spec.half_widths());
    csv.push_str("quantity,value\n");
    for (name, value) in &rows {
        writeln!(csv, "{name},{}", num(*value)).unwrap();
    }
    let mut params = spectrum_params_json(&spec);
    params["model"] = json!(format!("{:?}", args.model).to_lowercase());
    output.destination().emit(&csv, params, seconds, Value::Array(fits))
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Methods to compare against the reference, from jsm and fdm
    #[arg(long, value_delimiter = ',', default_value = "jsm,fdm")]
    pub methods: Vec<String>,
    #[arg(long = "M")]
    pub m: usize,
    /// Basis size of the JSM reference
    #[arg(long = "reference-M")]
    pub reference_m: usize,
    #[arg(long, default_value = "zero")]
    pub potential: String,
    #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
    pub interval: String,
    /// Number of eigenvalues compared
    #[arg(long, default_value_t = 10)]
    pub count: usize,
}

pub fn compare(args: &CompareArgs, output: &OutputArgs) -> Result<(), CliError> {
    let methods = args
        .methods
        .iter()
        .map(|m| match m.parse::<Method>() {
            Ok(Method::Jsm) => Ok(Method::Jsm),
            Ok(Method::Fdm) => Ok(Method::Fdm),
            _ => Err(CliError::Usage(format!("--methods accepts jsm and fdm, got '{m}'"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let params = SpectralParams::new(
        args.alpha,
        parse_pair(&args.interval, "--interval")?,
        parse_potential(&args.potential)?,
        args.m,
    )?;
    let start = Instant::now();
    let reference = spectrum_1d(&params.with_size(args.reference_m)?)?;
    let computed = methods
        .iter()
        .map(|m| match m {
            Method::Fdm => fdm_spectrum(&params, args.m),
            _ => spectrum_1d(&params),
        })
        .collect::<fso_core::Result<Vec<_>>>()?;
    let reports = computed
        .iter()
        .map(|s| error_report(s, &reference, args.count))
        .collect::<fso_core::Result<Vec<_>>>()?;
    let seconds = start.elapsed().as_secs_f64();

    let mut csv = header(&params, "compare", default_trusted_count(args.m), None);
    csv.push_str("index,reference");
    for m in &methods {
        write!(csv, ",{0},{0}_abs_error,{0}_rel_error", m.tag()).unwrap();
    }
    csv.push('\n');
    for i in 0..args.count {
        write!(csv, "{},{}", i + 1, num(reference.eigenvalues()[i])).unwrap();
        for (s, r) in computed.iter().zip(&reports) {
            write!(csv, ",{},{},{}", num(s.eigenvalues()[i]), num(r.absolute[i]), num(r.relative[i])).unwrap();
        }
        csv.push('\n');
    }
    let fits: Vec<Value> = methods
        .iter()
        .zip(&reports)
        .map(|(m, r)| json!({ "model": "trust_fraction", "method": m.tag(), "trust_fraction": r.trust_fraction, "epsilon0": r.epsilon0 }))
        .collect();
    let meta = json!({
        "alpha": args.alpha,
        "M": args.m,
        "reference_M": args.reference_m,
        "interval": [params.interval().0, params.interval().1],
        "potential": params.potential().to_string(),
        "methods": methods.iter().map(|m| m.tag()).collect::<Vec<_>>(),
        "count": args.count,
    });
    output.destination().emit(&csv, meta, seconds, Value::Array(fits))
}

#[derive(Args, Debug, Clone)]
pub struct EigenfunctionArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long = "M")]
    pub m: usize,
    #[arg(long, default_value = "zero")]
    pub potential: String,
    #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
    pub interval: String,
    /// Eigenfunction indices (1-based)
    #[arg(long = "n", value_delimiter = ',', default_value = "1")]
    pub indices: Vec<usize>,
    /// Number of equispaced sample points, endpoints included
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

/// Samples eigenfunctions, normalized on the reference interval (-1, 1),
/// at physical points x = x₀ + L x̃.
pub fn eigenfunction(args: &EigenfunctionArgs, output: &OutputArgs) -> Result<(), CliError> {
    if args.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let params = SpectralParams::new(
        args.alpha,
        parse_pair(&args.interval, "--interval")?,
        parse_potential(&args.potential)?,
        args.m,
    )?;
    if let Some(&bad) = args.indices.iter().find(|&&n| n == 0 || n > args.m) {
        return Err(CliError::Usage(format!("eigenfunction index {bad} outside 1..={}", args.m)));
    }
    let start = Instant::now();
    let (spec, functions) = solve_fso_1d(&params)?;
    let xt: Vec<f64> = (0..args.points)
        .map(|i| -1.0 + 2.0 * i as f64 / (args.points - 1) as f64)
        .collect();
    let columns: Vec<Vec<f64>> = args.indices.iter().map(|&n| eigenfunction_eval(&functions[n - 1], &xt)).collect();
    let mut fits = Vec::new();
    for &n in &args.indices {
        let b = boundary_exponent_fit(&sample_boundary(&functions[n - 1]))?;
        fits.push(json!({
            "model": "boundary_exponent",
            "n": n,
            "eigenvalue": spec.eigenvalues()[n - 1],
            "amplitude": b.amplitude,
            "exponent": b.exponent,
            "degenerate": b.degenerate,
        }));
    }
    let seconds = start.elapsed().as_secs_f64();
    let (x0, l) = (0.5 * (params.interval().0 + params.interval().1), params.half_width());
    let mut csv = header(&params, spec.method().tag(), spec.trusted_count(), None);
    csv.push('x');
    for n in &args.indices {
        write!(csv, ",u{n}").unwrap();
    }
    csv.push('\n');
    for (i, &t) in xt.iter().enumerate() {
        csv.push_str(&num(x0 + l * t));
        for col in &columns {
            write!(csv, ",{}", num(col[i])).unwrap();
        }
        csv.push('\n');
    }
    output.destination().emit(&csv, spectrum_params_json(&spec), seconds, Value::Array(fits))
}
