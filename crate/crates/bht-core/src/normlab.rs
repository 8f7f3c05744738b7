//! Empirical operator-norm probes and decay-exponent measurement.
//!
//! The paper-facing quantities here are honest lower-bound probes: ratios
//! ‖T(f,g)‖_r / (‖f‖_p ‖g‖_q) over a fixed catalog of Gaussian atoms, never
//! claims about the true operator norms. The m-decay scan measures the
//! single-scale rescaled pieces
//!
//! `B_{j,m}(f,g)(x) = 2^{-(b-a)j/2} ∫ ρ(t) (f*Φ)(x/2^{(b-a)j} - 2^m(t^a+ε_P))
//!                     (g*Φ)(x - 2^m(t^b+ε_Q)) dt`
//!
//! — the unit-band reduction of T_{j,m,m} — with catalog probes translated
//! into the active region per m. Fixed-position probes would have
//! doubly-exponentially dead spectra in the 2^{aj+m} bands and measure
//! nothing but underflow.

use crate::grid::{GridFunction, XGrid};
use crate::kernels::{pow2, DyadicKernel, FrequencyCutoff};
use crate::polyalg::{self, degree_profile, parse_polynomial, Polynomial, PolyError};
use crate::pvquad::{self, PvError, PvOpts};
use crate::quad::{self, QuadOpts};
use crate::testfuncs::{FuncError, TestFunction};
use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

#[derive(Debug, Clone, thiserror::Error)]
pub enum NormError {
    #[error("probe catalog is empty")]
    EmptyProbes,
    #[error("decay fit needs at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("nonpositive ordinate {0} cannot enter a log fit")]
    NonpositiveOrdinate(f64),
    #[error("exponent relation 1/r = 1/p + 1/q violated: p={p}, q={q}, r={r}")]
    ExponentRelation { p: Rational64, q: Rational64, r: Rational64 },
    #[error("output mass escapes the grid: boundary {boundary:.3e} vs peak {peak:.3e}")]
    MassEscapesGrid { boundary: f64, peak: f64 },
    #[error("the scan requires trailing degrees a < b after normalization")]
    TrailingDegreeOrder,
    #[error("invalid scan window: {0}")]
    InvalidWindow(String),
    #[error(transparent)]
    Pv(#[from] PvError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Func(#[from] FuncError),
}

/// The 12-atom probe catalog: σ ∈ {1/4, 1, 4} × ω ∈ {0, 2, 8} centered at 0,
/// plus σ = 1 × ω ∈ {0, 2, 8} centered at 1.
pub fn standard_probes() -> Vec<(String, TestFunction)> {
    let mut probes = Vec::new();
    let mut idx = 1;
    for sigma in [0.25, 1.0, 4.0] {
        for omega in [0.0, 2.0, 8.0] {
            probes.push((format!("g{idx}"), TestFunction::atom(sigma, 0.0, omega)));
            idx += 1;
        }
    }
    for omega in [0.0, 2.0, 8.0] {
        probes.push((format!("g{idx}"), TestFunction::atom(1.0, 1.0, omega)));
        idx += 1;
    }
    probes
}

pub fn probe_by_name(name: &str) -> Option<TestFunction> {
    standard_probes()
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, f)| f)
}

/// A bilinear operator that can be evaluated on an x-grid.
pub trait BilinearOp {
    fn label(&self) -> String;
    fn apply(
        &self,
        f: &TestFunction,
        g: &TestFunction,
        xs: &XGrid,
    ) -> Result<Vec<Complex64>, PvError>;
}

/// The zero operator.
pub struct ZeroOp;

impl BilinearOp for ZeroOp {
    fn label(&self) -> String {
        "zero".into()
    }
    fn apply(
        &self,
        _f: &TestFunction,
        _g: &TestFunction,
        xs: &XGrid,
    ) -> Result<Vec<Complex64>, PvError> {
        Ok(vec![Complex64::new(0.0, 0.0); xs.count])
    }
}

/// Pointwise product (f, g) ↦ fg.
pub struct PointwiseProductOp;

impl BilinearOp for PointwiseProductOp {
    fn label(&self) -> String {
        "pointwise-product".into()
    }
    fn apply(
        &self,
        f: &TestFunction,
        g: &TestFunction,
        xs: &XGrid,
    ) -> Result<Vec<Complex64>, PvError> {
        Ok(xs.points().iter().map(|&x| f.eval(x) * g.eval(x)).collect())
    }
}

/// One single-scale piece T_j as a probe target.
pub struct SingleScaleOp {
    pub kernel: DyadicKernel,
    pub p: Polynomial,
    pub q: Polynomial,
    pub j: i32,
    pub opts: PvOpts,
}

impl BilinearOp for SingleScaleOp {
    fn label(&self) -> String {
        format!("T_{}[{}; {}]", self.j, self.p, self.q)
    }
    fn apply(
        &self,
        f: &TestFunction,
        g: &TestFunction,
        xs: &XGrid,
    ) -> Result<Vec<Complex64>, PvError> {
        let piece = pvquad::tj(&self.kernel, &self.p, &self.q, f, g, self.j, xs, &self.opts)?;
        Ok(piece.values.values)
    }
}

/// One measured norm ratio.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeResult {
    pub operator_label: String,
    pub f_label: String,
    pub g_label: String,
    pub p: Rational64,
    pub q: Rational64,
    pub r: Rational64,
    pub ratio: f64,
    pub grid: XGrid,
}

fn rational_to_f64(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Discrete L^r norm of op(f,g) over the grid divided by the analytic input
/// norms. The exponent relation 1/r = 1/p + 1/q must hold exactly as
/// rationals, and the grid must capture the output mass.
#[allow(clippy::too_many_arguments)]
pub fn ratio_probe(
    op: &dyn BilinearOp,
    f: &TestFunction,
    g: &TestFunction,
    f_label: &str,
    g_label: &str,
    p: Rational64,
    q: Rational64,
    r: Rational64,
    xs: &XGrid,
) -> Result<ProbeResult, NormError> {
    if p.recip() + q.recip() != r.recip() {
        return Err(NormError::ExponentRelation { p, q, r });
    }
    let values = op.apply(f, g, xs)?;
    let out = GridFunction::new(xs.start, xs.step(), values);
    let peak = out.max_abs();
    let boundary = out.boundary_max(2);
    if peak > 0.0 && boundary > 1e-6 * peak {
        return Err(NormError::MassEscapesGrid { boundary, peak });
    }
    let denom = f.lp_norm(rational_to_f64(p))? * g.lp_norm(rational_to_f64(q))?;
    Ok(ProbeResult {
        operator_label: op.label(),
        f_label: f_label.into(),
        g_label: g_label.into(),
        p,
        q,
        r,
        ratio: if denom > 0.0 {
            out.lr_norm(rational_to_f64(r)) / denom
        } else {
            0.0
        },
        grid: *xs,
    })
}

/// Least-squares slope of −log₂ y against m, with the max deviation from the
/// fitted line. Requires at least 4 points with positive ordinates.
pub fn fit_decay_exponent(points: &[(f64, f64)]) -> Result<(f64, f64), NormError> {
    if points.len() < 4 {
        return Err(NormError::TooFewPoints(points.len()));
    }
    let ys: Vec<f64> = points
        .iter()
        .map(|&(_, y)| {
            if y > 0.0 {
                Ok(-y.log2())
            } else {
                Err(NormError::NonpositiveOrdinate(y))
            }
        })
        .collect::<Result<_, _>>()?;
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points
        .iter()
        .zip(&ys)
        .map(|(p, y)| (p.0 - mx) * (y - my))
        .sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = points
        .iter()
        .zip(&ys)
        .map(|(p, y)| (y - (slope * p.0 + intercept)).abs())
        .fold(0.0, f64::max);
    Ok((slope, residual))
}

/// Decay-scan fit: measured sup-ratios per m and the fitted 2^{-εm} exponent.
#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    pub abscissa: Vec<i32>,
    pub ordinate: Vec<f64>,
    pub fitted_exponent: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayRow {
    pub m: i32,
    pub sup_ratio: f64,
    pub best_j: i32,
    pub best_pair: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayScanReport {
    pub scale_cutoff_n: i32,
    pub j_window: (i32, i32),
    pub m_range: (i32, i32),
    pub probe_pairs: Vec<String>,
    pub rows: Vec<DecayRow>,
    pub fit: DecayFit,
}

/// A probe of f * Φ sampled on a window relative to its own center, with
/// cubic interpolation for pointwise access.
struct FilteredProbe {
    grid: GridFunction,
    c_mid: f64,
    active_lo: f64,
    active_hi: f64,
}

impl FilteredProbe {
    fn build(f: &TestFunction, cutoff: &FrequencyCutoff) -> Result<Self, NormError> {
        let (lo, hi) = f
            .support_window(1e-18)
            .ok_or(NormError::EmptyProbes)?;
        let c_mid = 0.5 * (lo + hi);
        let centered = f.translated(-c_mid);
        let n = 1usize << 15;
        let sampled = centered.sample((-256.0, 256.0), n);
        let hat = sampled.grid.fft().map_err(PvError::from)?;
        let filtered = hat.map_with_coord(|xi, v| v * cutoff.hat_eval(xi));
        let grid = filtered.ifft().map_err(PvError::from)?;

        let peak = grid.max_abs().max(f64::MIN_POSITIVE);
        let mut active_lo = f64::INFINITY;
        let mut active_hi = f64::NEG_INFINITY;
        for (k, v) in grid.values.iter().enumerate() {
            if v.norm() > 1e-13 * peak {
                let u = grid.point(k);
                active_lo = active_lo.min(u);
                active_hi = active_hi.max(u);
            }
        }
        if active_lo > active_hi {
            active_lo = 0.0;
            active_hi = 0.0;
        }
        Ok(FilteredProbe {
            grid,
            c_mid,
            active_lo: active_lo - 1.0,
            active_hi: active_hi + 1.0,
        })
    }

    /// Absolute interval where the probe is non-negligible.
    fn active_abs(&self) -> (f64, f64) {
        (self.active_lo + self.c_mid, self.active_hi + self.c_mid)
    }

    fn contains(&self, y: f64) -> bool {
        let u = y - self.c_mid;
        u >= self.active_lo && u <= self.active_hi
    }

    /// Catmull-Rom interpolation; zero outside the sampled window.
    fn eval(&self, y: f64) -> Complex64 {
        let u = y - self.c_mid;
        let pos = (u - self.grid.x0) / self.grid.dx;
        if !(1.0..=(self.grid.len() as f64 - 3.0)).contains(&pos) {
            return Complex64::new(0.0, 0.0);
        }
        let i = pos.floor() as usize;
        let s = pos - i as f64;
        let v = &self.grid.values;
        let (p0, p1, p2, p3) = (v[i - 1], v[i], v[i + 1], v[i + 2]);
        0.5 * (2.0 * p1
            + (p2 - p0) * s
            + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * s * s
            + (3.0 * (p1 - p2) + p3 - p0) * s * s * s)
    }
}

/// One rescaled single-scale piece B_{j,m}(f,g) on its adapted x-grid,
/// returned with its L¹ norm.
pub struct BjmPiece {
    pub values: GridFunction,
    pub l1_norm: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn bjm_piece(
    kernel: &DyadicKernel,
    cutoff: &FrequencyCutoff,
    p: &Polynomial,
    q: &Polynomial,
    j: i32,
    m: i32,
    f: &TestFunction,
    g: &TestFunction,
) -> Result<BjmPiece, NormError> {
    let a = degree_profile(p)?.trailing.ok_or(PolyError::ZeroPolynomial)?;
    let b = degree_profile(q)?.trailing.ok_or(PolyError::ZeroPolynomial)?;
    if a >= b {
        return Err(NormError::TrailingDegreeOrder);
    }
    let pu = polyalg::unit_rescale(p, j)?.to_f64_coeffs();
    let qu = polyalg::unit_rescale(q, j)?.to_f64_coeffs();
    let eval = |c: &[f64], t: f64| {
        let mut acc = 0.0;
        for v in c.iter().rev() {
            acc = acc * t + v;
        }
        acc
    };
    let dpu: Vec<f64> = pu.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    let dqu: Vec<f64> = qu.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();

    let fp = FilteredProbe::build(f, cutoff)?;
    let gp = FilteredProbe::build(g, cutoff)?;

    let s_j = pow2(-((b - a) as i32) * j);
    let tm = pow2(m);
    let prefactor = pow2(-((b - a) as i32) * j).sqrt();

    // x-window: where the g-factor can be non-negligible
    let mut q_lo = f64::INFINITY;
    let mut q_hi = f64::NEG_INFINITY;
    for side in [-1.0, 1.0] {
        for i in 0..=128 {
            let t = side * (0.5 + 1.5 * i as f64 / 128.0);
            let v = eval(&qu, t);
            q_lo = q_lo.min(v);
            q_hi = q_hi.max(v);
        }
    }
    let (ga_lo, ga_hi) = gp.active_abs();
    let x_lo = tm * q_lo + ga_lo - 2.0;
    let x_hi = tm * q_hi + ga_hi + 2.0;
    let dx = 1.0 / 16.0;
    let count = ((x_hi - x_lo) / dx).ceil() as usize + 1;

    let qopts = QuadOpts {
        abs_tol: 1e-11,
        rel_tol: 1e-6,
        max_panels: 60_000,
        periods_per_panel: 1.0,
    };

    let values: Vec<Complex64> = crate::par::map_range(count, |k| {
        let x = x_lo + k as f64 * dx;
        let mut total = Complex64::new(0.0, 0.0);
        for side in [1.0f64, -1.0] {
            // coarse scan for the active t-interval on this side
            let coarse = 256usize;
            let mut lo_idx = None;
            let mut hi_idx = None;
            for i in 0..=coarse {
                let t = side * (0.5 + 1.5 * i as f64 / coarse as f64);
                let arg_f = x * s_j - tm * eval(&pu, t);
                let arg_g = x - tm * eval(&qu, t);
                if fp.contains(arg_f) && gp.contains(arg_g) {
                    if lo_idx.is_none() {
                        lo_idx = Some(i);
                    }
                    hi_idx = Some(i);
                }
            }
            let (Some(lo_i), Some(hi_i)) = (lo_idx, hi_idx) else {
                continue;
            };
            let pad = 2;
            let t_at = |i: usize| 0.5 + 1.5 * i as f64 / coarse as f64;
            let t_lo = t_at(lo_i.saturating_sub(pad));
            let t_hi = t_at((hi_i + pad).min(coarse));
            let (ia, ib) = if side > 0.0 {
                (t_lo, t_hi)
            } else {
                (-t_hi, -t_lo)
            };
            let mut integrand = |t: f64| {
                let rho = kernel.eval(t);
                if rho == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                fp.eval(x * s_j - tm * eval(&pu, t)) * gp.eval(x - tm * eval(&qu, t)) * rho
            };
            let freq =
                |t: f64| 2.2 * tm * (eval(&dpu, t).abs() + eval(&dqu, t).abs()) + 2.0;
            let v = match quad::integrate(&mut integrand, &[(ia, ib)], Some(&freq), &qopts) {
                Ok(r) => r.value,
                Err(e) => e.best().0,
            };
            total += v;
        }
        total * prefactor
    });

    let grid = GridFunction::new(x_lo, dx, values);
    let l1 = grid.lr_norm(1.0);
    Ok(BjmPiece {
        values: grid,
        l1_norm: l1,
    })
}

/// Ratio ‖B_{j,m}(f,g)‖₁ / (‖f‖₂ ‖g‖₂) with the probe pair translated into
/// the piece's active region (t_ref = 1).
#[allow(clippy::too_many_arguments)]
pub fn bjm_norm_ratio(
    kernel: &DyadicKernel,
    cutoff: &FrequencyCutoff,
    p: &Polynomial,
    q: &Polynomial,
    j: i32,
    m: i32,
    f: &TestFunction,
    g: &TestFunction,
) -> Result<f64, NormError> {
    let a = degree_profile(p)?.trailing.ok_or(PolyError::ZeroPolynomial)?;
    let b = degree_profile(q)?.trailing.ok_or(PolyError::ZeroPolynomial)?;
    if a >= b {
        return Err(NormError::TrailingDegreeOrder);
    }
    let pu = polyalg::unit_rescale(p, j)?;
    let qu = polyalg::unit_rescale(q, j)?;
    let t_ref = 1.0;
    let s_j = pow2(-((b - a) as i32) * j);
    let x_ref = pow2(m) * qu.eval_f64(t_ref);
    let f_shift = x_ref * s_j - pow2(m) * pu.eval_f64(t_ref);
    let f_adapted = f.translated(f_shift);

    let piece = bjm_piece(kernel, cutoff, p, q, j, m, &f_adapted, g)?;
    let denom = f.lp_norm(2.0)? * g.lp_norm(2.0)?;
    Ok(if denom > 0.0 {
        piece.l1_norm / denom
    } else {
        0.0
    })
}

/// Generic scan driver: `ratio_of(j, m, pair_index)` supplies the measured
/// single-scale ratio; the report takes the sup over j and pairs per m and
/// fits the decay exponent.
pub fn m_decay_scan_with(
    ratio_of: &(dyn Fn(i32, i32, usize) -> Result<f64, NormError> + Sync),
    scale_cutoff_n: i32,
    j_window: (i32, i32),
    m_range: (i32, i32),
    pair_labels: &[String],
) -> Result<DecayScanReport, NormError> {
    if pair_labels.is_empty() {
        return Err(NormError::EmptyProbes);
    }
    if j_window.0 <= scale_cutoff_n {
        return Err(NormError::InvalidWindow(format!(
            "j window must start above N = {scale_cutoff_n}, got {}",
            j_window.0
        )));
    }
    if j_window.1 < j_window.0 || m_range.1 < m_range.0 {
        return Err(NormError::InvalidWindow("empty range".into()));
    }
    let ms: Vec<i32> = (m_range.0..=m_range.1).collect();
    if ms.len() < 4 {
        return Err(NormError::TooFewPoints(ms.len()));
    }
    let mut rows = Vec::with_capacity(ms.len());
    for &m in &ms {
        let mut best = (0.0f64, j_window.0, 0usize);
        for j in j_window.0..=j_window.1 {
            for (pi, _) in pair_labels.iter().enumerate() {
                let ratio = ratio_of(j, m, pi)?;
                if ratio > best.0 {
                    best = (ratio, j, pi);
                }
            }
        }
        rows.push(DecayRow {
            m,
            sup_ratio: best.0,
            best_j: best.1,
            best_pair: pair_labels[best.2].clone(),
        });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.m as f64, r.sup_ratio)).collect();
    let (slope, residual) = fit_decay_exponent(&pts)?;
    Ok(DecayScanReport {
        scale_cutoff_n,
        j_window,
        m_range,
        probe_pairs: pair_labels.to_vec(),
        rows,
        fit: DecayFit {
            abscissa: ms,
            ordinate: pts.iter().map(|p| p.1).collect(),
            fitted_exponent: slope,
            residual,
        },
    })
}

/// The 2^{-εm} decay scan on the rescaled single-scale pieces B_{j,m}.
#[allow(clippy::too_many_arguments)]
pub fn m_decay_scan(
    kernel: &DyadicKernel,
    cutoff: &FrequencyCutoff,
    p: &Polynomial,
    q: &Polynomial,
    scale_cutoff_n: i32,
    j_window: (i32, i32),
    m_range: (i32, i32),
    probe_pairs: &[(String, TestFunction, TestFunction)],
) -> Result<DecayScanReport, NormError> {
    if probe_pairs.is_empty() {
        return Err(NormError::EmptyProbes);
    }
    let labels: Vec<String> = probe_pairs.iter().map(|p| p.0.clone()).collect();
    let ratio_of = |j: i32, m: i32, pi: usize| {
        let (_, f, g) = &probe_pairs[pi];
        bjm_norm_ratio(kernel, cutoff, p, q, j, m, f, g)
    };
    m_decay_scan_with(&ratio_of, scale_cutoff_n, j_window, m_range, &labels)
}

/// One entry of the zero-operator counterexample suite.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleEntry {
    pub pair: String,
    pub probe: String,
    pub max_abs: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub entries: Vec<CounterexampleEntry>,
    pub control_max: f64,
    pub control_pass: bool,
    pub paper_pair_degree: usize,
    pub paper_pair_threshold: String,
    pub degree_pass: bool,
    pub passed: bool,
}

/// Evaluates the truncated operator for the zero-operator pair
/// (t^6, 3t^4−3t^2) and two further even-even pairs over the probe catalog;
/// every value must stay below 1e-8·‖f‖_∞‖g‖_∞, while the (t, t²) control
/// must exceed 1e-3 somewhere. Also re-checks the pair's correlation degree.
pub fn counterexample_suite(
    xs: &XGrid,
    probes: &[(String, TestFunction)],
) -> Result<CounterexampleReport, NormError> {
    if probes.is_empty() {
        return Err(NormError::EmptyProbes);
    }
    let pairs = [
        ("t^6 | 3t^4-3t^2", "t^6", "3t^4 - 3t^2"),
        ("t^2 | t^4", "t^2", "t^4"),
        ("t^2+t^4 | t^6", "t^2 + t^4", "t^6"),
    ];
    let opts = PvOpts::default();
    let points = xs.points();
    let mut entries = Vec::new();
    let mut all_pass = true;
    for (label, ps, qs) in pairs {
        let p = parse_polynomial(ps).expect("catalog polynomial");
        let q = parse_polynomial(qs).expect("catalog polynomial");
        for (name, f) in probes {
            let bound = 1e-8 * f.sup_norm() * f.sup_norm();
            let maxes = crate::par::map(&points, |&x| {
                match pvquad::bht_truncated(&p, &q, f, f, x, 1e-6, 64.0, &opts) {
                    Ok(v) => v.value.norm(),
                    Err(e) => e.best_value().map(|(v, _)| v.norm()).unwrap_or(f64::INFINITY),
                }
            });
            let max_abs = maxes.into_iter().fold(0.0f64, f64::max);
            let pass = max_abs <= bound;
            all_pass &= pass;
            entries.push(CounterexampleEntry {
                pair: label.to_string(),
                probe: name.clone(),
                max_abs,
                bound,
                pass,
            });
        }
    }

    // nonzero control: the suite must be able to tell a real operator apart
    let p = parse_polynomial("t").expect("catalog polynomial");
    let q = parse_polynomial("t^2").expect("catalog polynomial");
    let mut control_max = 0.0f64;
    for (_, f) in probes {
        let maxes = crate::par::map(&points, |&x| {
            match pvquad::bht_truncated(&p, &q, f, f, x, 1e-6, 64.0, &opts) {
                Ok(v) => v.value.norm(),
                Err(e) => e.best_value().map(|(v, _)| v.norm()).unwrap_or(f64::INFINITY),
            }
        });
        control_max = control_max.max(maxes.into_iter().fold(0.0f64, f64::max));
        if control_max > 1e-3 {
            break;
        }
    }
    let control_pass = control_max > 1e-3;

    let paper_p = parse_polynomial("t^6").expect("catalog polynomial");
    let paper_q = parse_polynomial("3t^4 - 3t^2").expect("catalog polynomial");
    let adm = polyalg::admissibility(&paper_p, &paper_q)?;
    let degree_pass = adm.correlation_degree == 2 && adm.r_threshold.to_string() == "2/3";

    Ok(CounterexampleReport {
        entries,
        control_max,
        control_pass,
        paper_pair_degree: adm.correlation_degree,
        paper_pair_threshold: adm.r_threshold.to_string(),
        degree_pass,
        passed: all_pass && control_pass && degree_pass,
    })
}
