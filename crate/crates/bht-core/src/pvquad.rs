//! Principal-value and dyadic evaluation of the bilinear operator.
//!
//! The truncated operator ∫_{ε<|t|<R} f(x−P(t)) g(x−Q(t)) dt/t is computed by
//! symmetric ±t pairing: the combination [h(t) − h(−t)]/t is smooth through
//! the origin, so the quadrature never sees the singularity and the ε-limit
//! converges linearly in ε. Single-scale pieces T_j restrict to the annulus
//! |t| ≈ 2^{-j} via the odd kernel; their frequency-side twins integrate
//! f̂ ĝ m_j over Gaussian-concentrated boxes on tensor Gauss–Legendre grids.

use crate::grid::{GridFunction, XGrid};
use crate::kernels::{pow2, DyadicKernel, FrequencyCutoff};
use crate::oscsym;
use crate::polyalg::{self, degree_profile, Polynomial, PolyError, Rat};
use crate::quad::{self, composite_gl_nodes, QuadError, QuadOpts};
use crate::testfuncs::TestFunction;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, thiserror::Error)]
pub enum PvError {
    #[error("truncation must satisfy 0 < eps < R, got eps={eps}, R={r}")]
    InvalidTruncation { eps: f64, r: f64 },
    #[error("alpha = beta is a degenerate direction for the linear symbol")]
    DegenerateDirection,
    #[error("frequency band reaches {band_max:.3e}, beyond the grid Nyquist {nyquist:.3e}")]
    BandExceedsNyquist { band_max: f64, nyquist: f64 },
    #[error("invalid epsilon grid: {0}")]
    InvalidEpsGrid(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Grid(#[from] crate::grid::GridError),
}

impl PvError {
    /// Best available estimate when the failure still carries one.
    pub fn best_value(&self) -> Option<(Complex64, f64)> {
        match self {
            PvError::Quad(e) => Some(e.best()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadValue {
    pub value: Complex64,
    pub abs_error: f64,
}

/// Truncated principal-value result over a refinement schedule.
#[derive(Debug, Clone, Serialize)]
pub struct PVResult {
    pub re: f64,
    pub im: f64,
    pub epsilon_schedule: Vec<f64>,
    pub convergence_estimate: f64,
    pub quadrature_error: f64,
}

impl PVResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// One single-scale piece on an x-grid.
#[derive(Debug, Clone)]
pub struct ScalePiece {
    pub j: i32,
    pub values: GridFunction,
    pub max_abs_error: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PvOpts {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl PvOpts {
    pub fn quad(&self) -> QuadOpts {
        QuadOpts {
            abs_tol: if self.abs_tol > 0.0 { self.abs_tol } else { 1e-10 },
            rel_tol: if self.rel_tol > 0.0 { self.rel_tol } else { 1e-8 },
            max_panels: 400_000,
            periods_per_panel: 0.25,
        }
    }
}

struct PolyEval {
    coeffs: Vec<f64>,
    dcoeffs: Vec<f64>,
}

impl PolyEval {
    fn new(p: &Polynomial) -> Self {
        let coeffs = p.to_f64_coeffs();
        let dcoeffs = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect();
        PolyEval { coeffs, dcoeffs }
    }

    fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    fn deriv(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.dcoeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }
}

/// ∫_{ε<|t|<R} f(x−P(t)) g(x−Q(t)) dt/t via symmetric pairing of ±t panels.
pub fn bht_truncated(
    p: &Polynomial,
    q: &Polynomial,
    f: &TestFunction,
    g: &TestFunction,
    x: f64,
    eps: f64,
    big_r: f64,
    opts: &PvOpts,
) -> Result<QuadValue, PvError> {
    if !(eps > 0.0 && eps < big_r) {
        return Err(PvError::InvalidTruncation { eps, r: big_r });
    }
    if f.is_zero() || g.is_zero() {
        return Ok(QuadValue {
            value: Complex64::new(0.0, 0.0),
            abs_error: 0.0,
        });
    }
    let pe = PolyEval::new(p);
    let qe = PolyEval::new(q);
    let peak: f64 = f
        .atoms
        .iter()
        .map(|a| a.weight().norm())
        .sum::<f64>()
        * g.atoms.iter().map(|a| a.weight().norm()).sum::<f64>();
    let modf = f.max_modulation();
    let modg = g.max_modulation();

    let h = |t: f64| f.eval(x - pe.eval(t)) * g.eval(x - qe.eval(t));
    let envelope = |t: f64| f.envelope(x - pe.eval(t)) * g.envelope(x - qe.eval(t));
    let mut paired = |t: f64| (h(t) - h(-t)) / t;
    let freq = |t: f64| {
        // skip dead zones: the envelope bound prunes the oscillation-driven
        // pre-split where the integrand cannot contribute
        if envelope(t) + envelope(-t) < 1e-18 * peak {
            return 0.0;
        }
        let dp = pe.deriv(t).abs().max(pe.deriv(-t).abs());
        let dq = qe.deriv(t).abs().max(qe.deriv(-t).abs());
        modf * dp + modg * dq
    };

    let r = quad::integrate(&mut paired, &[(eps, big_r)], Some(&freq), &opts.quad())?;
    Ok(QuadValue {
        value: r.value,
        abs_error: r.abs_error,
    })
}

/// Truncated evaluation over a decreasing ε-schedule; the reported value is
/// the finest truncation and the convergence estimate is the last increment.
pub fn pv_limit(
    p: &Polynomial,
    q: &Polynomial,
    f: &TestFunction,
    g: &TestFunction,
    x: f64,
    eps_schedule: &[f64],
    big_r: f64,
    opts: &PvOpts,
) -> Result<PVResult, PvError> {
    if eps_schedule.is_empty() || eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(PvError::InvalidEpsGrid(
            "need a decreasing, nonempty epsilon schedule".into(),
        ));
    }
    let mut values = Vec::with_capacity(eps_schedule.len());
    let mut max_err = 0.0f64;
    for &eps in eps_schedule {
        let v = bht_truncated(p, q, f, g, x, eps, big_r, opts)?;
        values.push(v.value);
        max_err = max_err.max(v.abs_error);
    }
    let last = *values.last().unwrap();
    let convergence = if values.len() >= 2 {
        (last - values[values.len() - 2]).norm()
    } else {
        f64::INFINITY
    };
    Ok(PVResult {
        re: last.re,
        im: last.im,
        epsilon_schedule: eps_schedule.to_vec(),
        convergence_estimate: convergence,
        quadrature_error: max_err,
    })
}

/// Independent oracle for linear trajectories P = αt, Q = βt:
/// ∬ f̂(ξ) ĝ(η) (−iπ sign(αξ+βη)) e^{2πi(ξ+η)x} dξ dη by iterated adaptive
/// quadrature with the inner integral split at the sign breakpoint.
pub fn linear_multiplier_oracle(
    alpha: f64,
    beta: f64,
    f: &TestFunction,
    g: &TestFunction,
    x: f64,
) -> Result<QuadValue, PvError> {
    if alpha == beta {
        return Err(PvError::DegenerateDirection);
    }
    let fhat = f.fourier_transform();
    let ghat = g.fourier_transform();
    let (Some(fw), Some(gw)) = (fhat.support_window(1e-20), ghat.support_window(1e-20)) else {
        return Ok(QuadValue {
            value: Complex64::new(0.0, 0.0),
            abs_error: 0.0,
        });
    };

    let inner_opts = QuadOpts {
        abs_tol: 1e-12,
        rel_tol: 1e-10,
        max_panels: 2_000,
        periods_per_panel: 0.25,
    };
    let outer_opts = QuadOpts {
        abs_tol: 1e-10,
        rel_tol: 1e-8,
        max_panels: 3_000,
        periods_per_panel: 0.25,
    };

    let inner_err = std::cell::Cell::new(0.0f64);
    let mut outer = |xi: f64| {
        let mut inner = |eta: f64| {
            let sign = (alpha * xi + beta * eta).signum();
            ghat.eval(eta)
                * Complex64::new(0.0, -std::f64::consts::PI * sign)
                * Complex64::from_polar(1.0, TWO_PI * eta * x)
        };
        let mut intervals = vec![(gw.0, gw.1)];
        if beta != 0.0 {
            let brk = -alpha * xi / beta;
            if brk > gw.0 && brk < gw.1 {
                intervals = vec![(gw.0, brk), (brk, gw.1)];
            }
        }
        let freq = |_: f64| x.abs() + 0.5;
        match quad::integrate(&mut inner, &intervals, Some(&freq), &inner_opts) {
            Ok(r) => {
                inner_err.set(inner_err.get().max(r.abs_error));
                r.value * fhat.eval(xi) * Complex64::from_polar(1.0, TWO_PI * xi * x)
            }
            Err(e) => {
                let (best, err) = e.best();
                inner_err.set(inner_err.get().max(err));
                best * fhat.eval(xi) * Complex64::from_polar(1.0, TWO_PI * xi * x)
            }
        }
    };
    let freq = |_: f64| x.abs() + (alpha / beta.max(1e-9)).abs() + 0.5;
    let r = quad::integrate(&mut outer, &[(fw.0, fw.1)], Some(&freq), &outer_opts)?;
    Ok(QuadValue {
        value: r.value,
        abs_error: r.abs_error + inner_err.get() * (fw.1 - fw.0),
    })
}

/// Single-scale piece T_j(f,g) on an x-grid, by time-domain quadrature over
/// the annulus supp ρ(2^j ·) = {2^{-j-1} < |t| < 2^{-j+1}}.
pub fn tj(
    kernel: &DyadicKernel,
    p: &Polynomial,
    q: &Polynomial,
    f: &TestFunction,
    g: &TestFunction,
    j: i32,
    xs: &XGrid,
    opts: &PvOpts,
) -> Result<ScalePiece, PvError> {
    let pe = PolyEval::new(p);
    let qe = PolyEval::new(q);
    let modf = f.max_modulation();
    let modg = g.max_modulation();
    let scale = pow2(j);
    let (lo, hi) = (pow2(-j - 1), pow2(-j + 1));
    let intervals = [(-hi, -lo), (lo, hi)];
    let qopts = opts.quad();

    let points = xs.points();
    let results: Vec<(Complex64, f64)> = crate::par::map(&points, |&x| {
        let mut integrand = |t: f64| {
            let k = kernel.eval(scale * t);
            if k == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            f.eval(x - pe.eval(t)) * g.eval(x - qe.eval(t)) * (scale * k)
        };
        let freq = |t: f64| {
            modf * pe.deriv(t).abs() + modg * qe.deriv(t).abs() + 3.0 * scale
        };
        match quad::integrate(&mut integrand, &intervals, Some(&freq), &qopts) {
            Ok(r) => (r.value, r.abs_error),
            Err(e) => e.best(),
        }
    });
    let max_err = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let values = results.into_iter().map(|r| r.0).collect();
    Ok(ScalePiece {
        j,
        values: GridFunction::new(xs.start, xs.step(), values),
        max_abs_error: max_err,
    })
}

/// Tensor-product frequency quadrature: node lists per axis and the symbol
/// matrix sampled on the node product.
struct FreqTensor {
    xi_nodes: Vec<(f64, f64)>,
    eta_nodes: Vec<(f64, f64)>,
    /// xi-major storage of weight(ξ)·weight(η)·symbol values
    coeff: Vec<Complex64>,
}

impl FreqTensor {
    fn eval_at(&self, x: f64) -> Complex64 {
        let eta_phases: Vec<Complex64> = self
            .eta_nodes
            .iter()
            .map(|&(eta, _)| Complex64::from_polar(1.0, TWO_PI * eta * x))
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (i, &(xi, _)) in self.xi_nodes.iter().enumerate() {
            let row = &self.coeff[i * self.eta_nodes.len()..(i + 1) * self.eta_nodes.len()];
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, ph) in row.iter().zip(&eta_phases) {
                acc += c * ph;
            }
            total += acc * Complex64::from_polar(1.0, TWO_PI * xi * x);
        }
        total
    }
}

fn intersect(a: (f64, f64), b: (f64, f64)) -> Option<(f64, f64)> {
    let lo = a.0.max(b.0);
    let hi = a.1.min(b.1);
    (lo < hi).then_some((lo, hi))
}

/// Frequency-domain route to the same T_j: ∬ f̂ ĝ e^{2πi(ξ+η)x} m_j dξ dη
/// over the Gaussian-concentrated box, independent of the time-domain path.
pub fn tj_freq(
    kernel: &DyadicKernel,
    p: &Polynomial,
    q: &Polynomial,
    f: &TestFunction,
    g: &TestFunction,
    j: i32,
    xs: &XGrid,
) -> Result<ScalePiece, PvError> {
    let fhat = f.fourier_transform();
    let ghat = g.fourier_transform();
    let (Some(fw), Some(gw)) = (fhat.support_window(1e-18), ghat.support_window(1e-18)) else {
        return Ok(zero_piece(j, xs));
    };
    let xmax = xs.points().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let pe = PolyEval::new(p);
    let qe = PolyEval::new(q);
    let var_p = (0..64)
        .map(|i| pe.eval(pow2(-j) * (0.5 + 1.5 * i as f64 / 63.0)).abs())
        .fold(0.0f64, f64::max);
    let var_q = (0..64)
        .map(|i| qe.eval(pow2(-j) * (0.5 + 1.5 * i as f64 / 63.0)).abs())
        .fold(0.0f64, f64::max);

    let fx = |_: f64| xmax + var_p + 0.1;
    let fe = |_: f64| xmax + var_q + 0.1;
    let xi_nodes = composite_gl_nodes(&[fw], &fx, 2.0, 16);
    let eta_nodes = composite_gl_nodes(&[gw], &fe, 2.0, 16);

    let sym_opts = QuadOpts {
        abs_tol: 1e-13,
        rel_tol: 1e-9,
        max_panels: 200_000,
        periods_per_panel: 1.0,
    };
    let coeff = crate::par::map_range(xi_nodes.len(), |i| {
        let (xi, wxi) = xi_nodes[i];
        let fval = fhat.eval(xi) * wxi;
        eta_nodes
            .iter()
            .map(|&(eta, weta)| {
                let s = oscsym::mj_with_opts(kernel, p, q, j, xi, eta, &sym_opts);
                fval * ghat.eval(eta) * weta * s.value()
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();

    let tensor = FreqTensor {
        xi_nodes,
        eta_nodes,
        coeff,
    };
    let points = xs.points();
    let values = crate::par::map(&points, |&x| tensor.eval_at(x));
    Ok(ScalePiece {
        j,
        values: GridFunction::new(xs.start, xs.step(), values),
        max_abs_error: 1e-9,
    })
}

fn zero_piece(j: i32, xs: &XGrid) -> ScalePiece {
    ScalePiece {
        j,
        values: GridFunction::new(
            xs.start,
            xs.step(),
            vec![Complex64::new(0.0, 0.0); xs.count],
        ),
        max_abs_error: 0.0,
    }
}

/// Frequency-localized piece T_{j,m,n}: 2D quadrature of
/// f̂(ξ) ĝ(η) e^{2πi(ξ+η)x} m_j(ξ,η) Φ̂(ξ/2^{aj+m}) Φ̂(η/2^{bj+n}) over the
/// band product. Bands disjoint from the spectra give an exact zero piece.
#[allow(clippy::too_many_arguments)]
pub fn tjmn(
    kernel: &DyadicKernel,
    cutoff: &FrequencyCutoff,
    p: &Polynomial,
    q: &Polynomial,
    f: &TestFunction,
    g: &TestFunction,
    j: i32,
    m: i32,
    n: i32,
    xs: &XGrid,
) -> Result<ScalePiece, PvError> {
    let a = degree_profile(p)?.trailing.ok_or(PolyError::ZeroPolynomial)? as i32;
    let b = degree_profile(q)?.trailing.ok_or(PolyError::ZeroPolynomial)? as i32;
    let xi_scale = pow2(a * j + m);
    let eta_scale = pow2(b * j + n);

    if xs.count > 1 {
        let band_max = 2.0 * xi_scale + 2.0 * eta_scale;
        let nyquist = 0.5 / xs.step();
        if band_max > nyquist {
            return Err(PvError::BandExceedsNyquist { band_max, nyquist });
        }
    }

    let fhat = f.fourier_transform();
    let ghat = g.fourier_transform();
    let (Some(fw), Some(gw)) = (fhat.support_window(1e-18), ghat.support_window(1e-18)) else {
        return Ok(zero_piece(j, xs));
    };
    let xi_bands: Vec<(f64, f64)> = [
        (-2.0 * xi_scale, -0.5 * xi_scale),
        (0.5 * xi_scale, 2.0 * xi_scale),
    ]
    .iter()
    .filter_map(|&band| intersect(band, fw))
    .collect();
    let eta_bands: Vec<(f64, f64)> = [
        (-2.0 * eta_scale, -0.5 * eta_scale),
        (0.5 * eta_scale, 2.0 * eta_scale),
    ]
    .iter()
    .filter_map(|&band| intersect(band, gw))
    .collect();
    if xi_bands.is_empty() || eta_bands.is_empty() {
        return Ok(zero_piece(j, xs));
    }

    let xmax = xs.points().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let pe = PolyEval::new(p);
    let qe = PolyEval::new(q);
    let var_p = (0..64)
        .map(|i| pe.eval(pow2(-j) * (0.5 + 1.5 * i as f64 / 63.0)).abs())
        .fold(0.0f64, f64::max);
    let var_q = (0..64)
        .map(|i| qe.eval(pow2(-j) * (0.5 + 1.5 * i as f64 / 63.0)).abs())
        .fold(0.0f64, f64::max);
    let fx = |_: f64| xmax + var_p + 1.0 / xi_scale.max(1.0);
    let fe = |_: f64| xmax + var_q + 1.0 / eta_scale.max(1.0);
    let xi_nodes = composite_gl_nodes(&xi_bands, &fx, 2.0, 16);
    let eta_nodes = composite_gl_nodes(&eta_bands, &fe, 2.0, 16);

    let sym_opts = QuadOpts {
        abs_tol: 1e-13,
        rel_tol: 1e-9,
        max_panels: 400_000,
        periods_per_panel: 1.0,
    };
    let coeff = crate::par::map_range(xi_nodes.len(), |i| {
        let (xi, wxi) = xi_nodes[i];
        let fval = fhat.eval(xi) * cutoff.hat_eval(xi / xi_scale) * wxi;
        eta_nodes
            .iter()
            .map(|&(eta, weta)| {
                if fval.norm() == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let gval = ghat.eval(eta) * cutoff.hat_eval(eta / eta_scale) * weta;
                if gval.norm() == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let s = oscsym::mj_with_opts(kernel, p, q, j, xi, eta, &sym_opts);
                fval * gval * s.value()
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();

    let tensor = FreqTensor {
        xi_nodes,
        eta_nodes,
        coeff,
    };
    let points = xs.points();
    let values = crate::par::map(&points, |&x| tensor.eval_at(x));
    Ok(ScalePiece {
        j,
        values: GridFunction::new(xs.start, xs.step(), values),
        max_abs_error: 1e-9,
    })
}

/// Geometric ε-grid for the maximal function, ratio in (1, 2].
pub fn geometric_eps_grid(min: f64, max: f64, ratio: f64) -> Result<Vec<f64>, PvError> {
    if !(min > 0.0 && max > min) {
        return Err(PvError::InvalidEpsGrid(format!(
            "need 0 < min < max, got [{min}, {max}]"
        )));
    }
    if !(ratio > 1.0 && ratio <= 2.0) {
        return Err(PvError::InvalidEpsGrid(format!(
            "ratio must lie in (1, 2], got {ratio}"
        )));
    }
    let mut grid = vec![min];
    let mut cur = min;
    while cur < max {
        cur *= ratio;
        grid.push(cur.min(max));
    }
    Ok(grid)
}

/// Report of the bilinear maximal function at one point: the sup over the
/// ε-grid of symmetric averages. The true sup over all ε > 0 is approximated
/// from the grid; `grid_ratio` records the resolution so callers can attach
/// a refinement estimate by rescanning on a finer grid.
#[derive(Debug, Clone, Serialize)]
pub struct MaximalReport {
    pub value: f64,
    pub eps_at_max: f64,
    pub grid_ratio: f64,
    pub quad_error: f64,
}

/// Bilinear maximal function: max over the ε-grid of
/// (1/2ε) ∫_{-ε}^{ε} |f(x−P(t)) g(x−Q(t))| dt. The integrand is nonnegative
/// and nonsingular, so plain adaptive quadrature applies.
pub fn maximal(
    p: &Polynomial,
    q: &Polynomial,
    f: &TestFunction,
    g: &TestFunction,
    x: f64,
    eps_grid: &[f64],
    opts: &PvOpts,
) -> Result<MaximalReport, PvError> {
    if eps_grid.is_empty() {
        return Err(PvError::InvalidEpsGrid("empty grid".into()));
    }
    let mut ratio_max = 1.0f64;
    for w in eps_grid.windows(2) {
        if w[1] <= w[0] || w[0] <= 0.0 {
            return Err(PvError::InvalidEpsGrid("grid must be positive and increasing".into()));
        }
        ratio_max = ratio_max.max(w[1] / w[0]);
    }
    if ratio_max > 2.0 + 1e-12 {
        return Err(PvError::InvalidEpsGrid(format!(
            "grid ratio {ratio_max} exceeds 2"
        )));
    }

    let pe = PolyEval::new(p);
    let qe = PolyEval::new(q);
    let modf = f.max_modulation();
    let modg = g.max_modulation();
    let qopts = opts.quad();

    let averages: Vec<(f64, f64)> = crate::par::map(eps_grid, |&eps| {
        let mut integrand =
            |t: f64| (f.eval(x - pe.eval(t)) * g.eval(x - qe.eval(t))).norm();
        let freq = |t: f64| modf * pe.deriv(t).abs() + modg * qe.deriv(t).abs();
        match quad::integrate_real(&mut integrand, &[(-eps, eps)], Some(&freq), &qopts) {
            Ok((v, e)) => (v / (2.0 * eps), e / (2.0 * eps)),
            Err(err) => {
                let (best, e) = err.best();
                (best.re / (2.0 * eps), e / (2.0 * eps))
            }
        }
    });

    let mut value = 0.0f64;
    let mut eps_at_max = eps_grid[0];
    let mut quad_error = 0.0f64;
    for (&eps, &(avg, err)) in eps_grid.iter().zip(&averages) {
        quad_error = quad_error.max(err);
        if avg > value {
            value = avg;
            eps_at_max = eps;
        }
    }
    Ok(MaximalReport {
        value,
        eps_at_max,
        grid_ratio: ratio_max,
        quad_error,
    })
}

/// Symmetric average of |fg| and of fg on one shared composite rule, so the
/// domination inequality avg|h| ≥ |avg h| holds exactly on the computed
/// quantities.
pub fn averaged_pair(
    p: &Polynomial,
    q: &Polynomial,
    f: &TestFunction,
    g: &TestFunction,
    x: f64,
    eps: f64,
    nodes_per_panel: usize,
) -> (f64, Complex64) {
    let pe = PolyEval::new(p);
    let qe = PolyEval::new(q);
    let nodes = composite_gl_nodes(&[(-eps, eps)], &|_| 0.0, 1.0, nodes_per_panel);
    let mut abs_acc = 0.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for (t, w) in nodes {
        let h = f.eval(x - pe.eval(t)) * g.eval(x - qe.eval(t));
        abs_acc += w * h.norm();
        acc += h * w;
    }
    (abs_acc / (2.0 * eps), acc / (2.0 * eps))
}

/// One row of the Jacobian annulus scan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct JacobianRow {
    pub j: i32,
    pub min_abs: f64,
    /// min |Q₁' − P₁'| divided by 2^{-dj}.
    pub ratio: f64,
}

/// Scan of the recentered Jacobian Q₁' − P₁' over dyadic annuli: for each j,
/// the minimum of |Q₁'(t) − P₁'(t)| over t ∈ [2^{-j-1}, 2^{-j+1}] (the scan
/// walks the positive branch of the annulus, where the trailing-term
/// expansion |D| ≈ c·t^d brackets [c/2^d, c·2^d]·2^{-dj}), against 2^{-dj}
/// with d the multiplicity of t₀.
pub fn jacobian_scan(
    p: &Polynomial,
    q: &Polynomial,
    t0: &Rat,
    j_range: impl IntoIterator<Item = i32>,
) -> Result<Vec<JacobianRow>, PvError> {
    let r = &q.derivative() - &p.derivative();
    if t0.is_zero() || !r.eval_rat(t0).is_zero() {
        return Err(PvError::Poly(PolyError::NotARoot(t0.to_string())));
    }
    let d = polyalg::multiplicity_at(&r, t0) as i32;
    let t0f = t0.to_f64().expect("rational t0 fits in f64");

    let p1 = polyalg::recenter(p, t0);
    let q1 = polyalg::recenter(q, t0);
    let diff = &q1.derivative() - &p1.derivative();
    let de = PolyEval::new(&diff);
    let _ = t0f;

    let rows = j_range
        .into_iter()
        .map(|j| {
            let lo = pow2(-j - 1);
            let hi = pow2(-j + 1);
            let samples = 1000usize;
            let mut best_t = lo;
            let mut min_abs = f64::INFINITY;
            for i in 0..=samples {
                let t = lo * (hi / lo).powf(i as f64 / samples as f64);
                let v = de.eval(t).abs();
                if v < min_abs {
                    min_abs = v;
                    best_t = t;
                }
            }
            // derivative-based refinement: golden-section around the best
            // sample, clamped to the annulus
            let step = (hi / lo).powf(1.0 / samples as f64);
            let (mut a, mut b) = ((best_t / step).max(lo), (best_t * step).min(hi));
            let gr = 0.5 * (5.0f64.sqrt() - 1.0);
            for _ in 0..80 {
                let c = b - gr * (b - a);
                let dmid = a + gr * (b - a);
                if de.eval(c).abs() < de.eval(dmid).abs() {
                    b = dmid;
                } else {
                    a = c;
                }
            }
            min_abs = min_abs.min(de.eval(0.5 * (a + b)).abs());
            JacobianRow {
                j,
                min_abs,
                ratio: min_abs / pow2(-d * j),
            }
        })
        .collect();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::make_rho;
    use crate::polyalg::parse_polynomial;
    use approx::assert_abs_diff_eq;
    use num_bigint::BigInt;

    fn gauss() -> TestFunction {
        TestFunction::atom(1.0, 0.0, 0.0)
    }

    fn opts() -> PvOpts {
        PvOpts::default()
    }

    #[test]
    fn even_pairs_annihilate() {
        // even P, Q make the paired integrand vanish identically
        let p = parse_polynomial("t^2").unwrap();
        let q = parse_polynomial("t^4").unwrap();
        let v = bht_truncated(&p, &q, &gauss(), &gauss(), 0.3, 1e-6, 64.0, &opts()).unwrap();
        assert!(v.value.norm() <= 1e-10);
    }

    #[test]
    fn zero_function_gives_exact_zero() {
        let p = parse_polynomial("t").unwrap();
        let q = parse_polynomial("t^2").unwrap();
        let v = bht_truncated(&p, &q, &TestFunction::zero(), &gauss(), 0.0, 1e-6, 64.0, &opts())
            .unwrap();
        assert_eq!(v.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn truncation_preconditions() {
        let p = parse_polynomial("t").unwrap();
        let q = parse_polynomial("t^2").unwrap();
        assert!(matches!(
            bht_truncated(&p, &q, &gauss(), &gauss(), 0.0, 1.0, 0.5, &opts()),
            Err(PvError::InvalidTruncation { .. })
        ));
    }

    #[test]
    fn bilinearity_scaling_and_additivity() {
        let p = parse_polynomial("t").unwrap();
        let q = parse_polynomial("t^2").unwrap();
        let f1 = gauss();
        let f2 = TestFunction::atom(0.5, 0.5, 1.0);
        let g = TestFunction::atom(1.0, 0.0, 1.0);
        let x = 0.4;
        let tight = PvOpts {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
        };

        let alpha = Complex64::new(0.7, -1.3);
        let lhs = bht_truncated(&p, &q, &f1.scaled(alpha), &g, x, 1e-8, 64.0, &tight)
            .unwrap()
            .value;
        let base = bht_truncated(&p, &q, &f1, &g, x, 1e-8, 64.0, &tight).unwrap().value;
        assert!(
            (lhs - alpha * base).norm() <= 1e-10 * base.norm().max(1e-12),
            "scaling: {lhs:?} vs {:?}",
            alpha * base
        );

        let sum = bht_truncated(&p, &q, &f1.plus(&f2), &g, x, 1e-8, 64.0, &tight)
            .unwrap()
            .value;
        let parts = base
            + bht_truncated(&p, &q, &f2, &g, x, 1e-8, 64.0, &tight)
                .unwrap()
                .value;
        assert!(
            (sum - parts).norm() <= 1e-10 * parts.norm().max(1e-12),
            "additivity: {sum:?} vs {parts:?}"
        );
    }

    #[test]
    fn truncation_consistency() {
        let p = parse_polynomial("t").unwrap();
        let q = parse_polynomial("t^2").unwrap();
        let f = gauss();
        let g = TestFunction::atom(1.0, 1.0, 0.0);
        let x = 0.7;
        let res = pv_limit(
            &p,
            &q,
            &f,
            &g,
            x,
            &[1e-4, 1e-5, 1e-6, 1e-7],
            64.0,
            &opts(),
        )
        .unwrap();
        // halving eps and doubling R moves the value by less than the
        // reported convergence estimate
        let finer = bht_truncated(&p, &q, &f, &g, x, 0.5e-7, 128.0, &opts()).unwrap();
        assert!(
            (finer.value - res.value()).norm()
                <= res.convergence_estimate + 10.0 * res.quadrature_error,
            "finer {:?} vs {:?} (conv {:.3e})",
            finer.value,
            res.value(),
            res.convergence_estimate
        );
    }

    #[test]
    fn oracle_degenerate_and_zero_cases() {
        assert!(matches!(
            linear_multiplier_oracle(1.0, 1.0, &gauss(), &gauss(), 0.0),
            Err(PvError::DegenerateDirection)
        ));
        let v = linear_multiplier_oracle(1.0, 2.0, &gauss(), &TestFunction::zero(), 0.0).unwrap();
        assert_eq!(v.value.norm(), 0.0);
    }

    #[test]
    fn oracle_symmetry_makes_real_part_vanish() {
        // real even f, g force a purely imaginary value at x = 0
        let v = linear_multiplier_oracle(1.0, 2.0, &gauss(), &gauss(), 0.0).unwrap();
        assert!(
            v.value.re.abs() < 1e-8,
            "real part {:.3e} should vanish",
            v.value.re
        );
        assert!(v.value.im.abs() > 1e-3, "imaginary part should be visible");
    }

    #[test]
    fn tj_odd_kernel_annihilates_near_constants() {
        // very wide Gaussians are locally constant; the odd kernel integrates
        // them to nearly zero at every scale
        let kernel = make_rho();
        let p = parse_polynomial("t").unwrap();
        let q = parse_polynomial("t^2").unwrap();
        let wide = TestFunction::atom(1e3, 0.0, 0.0);
        let xs = XGrid::new(-1.0, 1.0, 5);
        for j in [0, 2, 5] {
            let piece = tj(&kernel, &p, &q, &wide, &wide, j, &xs, &opts()).unwrap();
            assert!(
                piece.values.max_abs() <= 1e-6,
                "j={j}: {}",
                piece.values.max_abs()
            );
        }
    }

    #[test]
    fn maximal_basics() {
        let p = parse_polynomial("t").unwrap();
        let q = parse_polynomial("t^2").unwrap();
        let wide = TestFunction::atom(1e3, 0.0, 0.0);
        let grid = geometric_eps_grid(pow2(-20), 64.0, 2.0f64.sqrt()).unwrap();
        let rep = maximal(&p, &q, &wide, &wide, 0.0, &grid, &opts()).unwrap();
        assert!(rep.value >= 0.0);
        assert_abs_diff_eq!(rep.value, 1.0, epsilon = 1e-3);

        let f = gauss();
        let rep = maximal(&p, &q, &f, &f, 0.3, &grid, &opts()).unwrap();
        assert!(rep.value >= 0.0);

        assert!(maximal(&p, &q, &f, &f, 0.0, &[], &opts()).is_err());
        assert!(maximal(&p, &q, &f, &f, 0.0, &[0.1, 0.5], &opts()).is_err());
    }

    #[test]
    fn maximal_dominates_plain_average() {
        let p = parse_polynomial("t").unwrap();
        let q = parse_polynomial("t^2").unwrap();
        let f = gauss();
        let g = TestFunction::atom(1.0, 0.5, 2.0);
        let grid = geometric_eps_grid(1e-3, 4.0, 2.0f64.sqrt()).unwrap();
        let rep = maximal(&p, &q, &f, &g, 0.2, &grid, &opts()).unwrap();
        for &eps in &grid {
            let (avg_abs, avg) = averaged_pair(&p, &q, &f, &g, 0.2, eps, 24);
            assert!(avg_abs >= avg.norm());
            assert!(rep.value + rep.quad_error + 1e-9 >= avg.norm());
        }
    }

    #[test]
    fn jacobian_scan_linear_case() {
        // P = t, Q = t², t₀ = 1/2 (d = 1): Q₁' − P₁' = 2t exactly, so the
        // ratio to 2^{-j} spans [1, 4] with the minimum at the inner edge.
        let p = parse_polynomial("t").unwrap();
        let q = parse_polynomial("t^2").unwrap();
        let t0 = Rat::new(BigInt::from(1), BigInt::from(2));
        let rows = jacobian_scan(&p, &q, &t0, 4..=12).unwrap();
        for row in &rows {
            assert!(
                row.ratio >= 1.0 - 1e-12 && row.ratio <= 4.0,
                "j={}: ratio {}",
                row.j,
                row.ratio
            );
        }
        assert!((rows[0].ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn jacobian_scan_validates_root() {
        let p = parse_polynomial("t").unwrap();
        let q = parse_polynomial("t^2").unwrap();
        let bad = Rat::new(BigInt::from(1), BigInt::from(3));
        assert!(jacobian_scan(&p, &q, &bad, 4..=6).is_err());
        let zero = Rat::zero();
        assert!(jacobian_scan(&p, &q, &zero, 4..=6).is_err());
        let rows = jacobian_scan(
            &p,
            &q,
            &Rat::new(BigInt::from(1), BigInt::from(2)),
            std::iter::empty(),
        )
        .unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn eps_grid_construction() {
        let g = geometric_eps_grid(0.5, 4.0, 2.0).unwrap();
        assert_eq!(g, vec![0.5, 1.0, 2.0, 4.0]);
        assert!(geometric_eps_grid(0.0, 1.0, 1.5).is_err());
        assert!(geometric_eps_grid(0.1, 1.0, 2.5).is_err());
    }
}
