//! Oscillatory-integral symbols and stationary-phase analytics.
//!
//! The central object is `m_j(ξ,η) = ∫ 2^j ρ(2^j t) e^{-2πi(ξP(t)+ηQ(t))} dt`,
//! evaluated after the substitution u = 2^j t so the kernel always lives on
//! the unit annulus. Its rescaled cousin `I_{ρ,m}` carries the phase
//! `2^m (ξ(t^a+ε_P) + η(t^b+ε_Q))` with unit-band frequencies; its size obeys
//! the stationary-phase law `|I| ≈ const · 2^{-m/2}` at interior critical
//! points and decays superpolynomially without one.

use crate::kernels::{pow2, DyadicKernel, FrequencyCutoff};
use crate::polyalg::{degree_profile, Polynomial, PolyError, Rat};
use crate::quad::{self, QuadError, QuadOpts};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, thiserror::Error)]
pub enum OscError {
    #[error("xi and eta are both zero")]
    BothFrequenciesZero,
    #[error("({xi}, {eta}) outside the unit band (1/2, 2)")]
    OutOfBand { xi: f64, eta: f64 },
    #[error("degenerate critical point at t = {t_crit}: phi'' = {second_derivative:.3e}")]
    Degenerate { t_crit: f64, second_derivative: f64 },
    #[error("no critical point inside the kernel support")]
    NonStationary,
    #[error("tau = 0 makes Q_tau identically zero: degenerate, skipped")]
    DegenerateTau,
    #[error("no grid sample satisfied the support precondition")]
    NoValidSamples,
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One evaluated symbol value with its quadrature error estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SymbolSample {
    pub xi: f64,
    pub eta: f64,
    pub re: f64,
    pub im: f64,
    pub abs_error: f64,
    pub j: Option<i32>,
    pub m: Option<i32>,
    pub n: Option<i32>,
}

impl SymbolSample {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

fn eval_poly(coeffs: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

fn deriv_coeffs(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

fn default_symbol_opts() -> QuadOpts {
    QuadOpts {
        abs_tol: 1e-13,
        rel_tol: 1e-10,
        max_panels: 4_000_000,
        periods_per_panel: 1.0,
    }
}

/// ∫ ρ(t) e^{-2πi · scale · φ(t)} dt over the kernel support, with φ given by
/// its coefficient vector.
fn oscillatory_integral(
    kernel: &DyadicKernel,
    phase: &[f64],
    scale: f64,
    opts: &QuadOpts,
) -> (Complex64, f64) {
    let dphase = deriv_coeffs(phase);
    let mut f = |t: f64| {
        let rho = kernel.eval(t);
        if rho == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(rho, -TWO_PI * scale * eval_poly(phase, t))
    };
    let freq = |t: f64| scale.abs() * eval_poly(&dphase, t) + 2.0;
    match quad::integrate(&mut f, &[(-2.0, -0.5), (0.5, 2.0)], Some(&freq), opts) {
        Ok(r) => (r.value, r.abs_error),
        Err(e) => e.best(),
    }
}

/// Combined phase coefficients ξ·P(2^{-j}·) + η·Q(2^{-j}·) in f64.
fn scaled_phase(p: &Polynomial, q: &Polynomial, j: i32, xi: f64, eta: f64) -> Vec<f64> {
    let pc = p.to_f64_coeffs();
    let qc = q.to_f64_coeffs();
    let n = pc.len().max(qc.len());
    (0..n)
        .map(|k| {
            let s = pow2(-j * k as i32);
            let a = pc.get(k).copied().unwrap_or(0.0);
            let b = qc.get(k).copied().unwrap_or(0.0);
            (xi * a + eta * b) * s
        })
        .collect()
}

/// The symbol m_j(ξ,η) of the single-scale piece T_j, by oscillation-aware
/// quadrature in the rescaled variable u = 2^j t.
pub fn mj(
    kernel: &DyadicKernel,
    p: &Polynomial,
    q: &Polynomial,
    j: i32,
    xi: f64,
    eta: f64,
) -> SymbolSample {
    mj_with_opts(kernel, p, q, j, xi, eta, &default_symbol_opts())
}

pub fn mj_with_opts(
    kernel: &DyadicKernel,
    p: &Polynomial,
    q: &Polynomial,
    j: i32,
    xi: f64,
    eta: f64,
    opts: &QuadOpts,
) -> SymbolSample {
    let phase = scaled_phase(p, q, j, xi, eta);
    let (value, abs_error) = oscillatory_integral(kernel, &phase, 1.0, opts);
    SymbolSample {
        xi,
        eta,
        re: value.re,
        im: value.im,
        abs_error,
        j: Some(j),
        m: None,
        n: None,
    }
}

/// Same value through the rescaled route: trailing-normalize P and Q, build
/// the unit-scale phase polynomials t^a + ε_P, t^b + ε_Q at scale j, and
/// evaluate with band frequencies ξ/2^{aj}, η/2^{bj}. Used to cross-check
/// `mj` against the rescaling identity.
pub fn mj_rescaled(
    kernel: &DyadicKernel,
    p: &Polynomial,
    q: &Polynomial,
    j: i32,
    xi: f64,
    eta: f64,
) -> Result<SymbolSample, OscError> {
    let pu = crate::polyalg::unit_rescale(p, j)?;
    let qu = crate::polyalg::unit_rescale(q, j)?;
    let a = degree_profile(p)?.trailing.ok_or(PolyError::ZeroPolynomial)? as i32;
    let b = degree_profile(q)?.trailing.ok_or(PolyError::ZeroPolynomial)? as i32;
    let phase = scaled_phase(&pu, &qu, 0, xi * pow2(-a * j), eta * pow2(-b * j));
    let (value, abs_error) = oscillatory_integral(kernel, &phase, 1.0, &default_symbol_opts());
    Ok(SymbolSample {
        xi,
        eta,
        re: value.re,
        im: value.im,
        abs_error,
        j: Some(j),
        m: None,
        n: None,
    })
}

/// The rescaled oscillatory integral
/// `I_{ρ,m}(ξ,η) = ∫ ρ(t) e^{-2πi 2^m (ξ Pu(t) + η Qu(t))} dt`
/// for unit-scale phase polynomials Pu = t^a + ε_P, Qu = t^b + ε_Q.
/// Requires |ξ|, |η| ∈ (1/2, 2).
pub fn rescaled_symbol(
    kernel: &DyadicKernel,
    pu: &Polynomial,
    qu: &Polynomial,
    m: i32,
    xi: f64,
    eta: f64,
) -> Result<SymbolSample, OscError> {
    if !(0.5..2.0).contains(&xi.abs()) || !(0.5..2.0).contains(&eta.abs()) {
        return Err(OscError::OutOfBand { xi, eta });
    }
    Ok(rescaled_symbol_unchecked(kernel, pu, qu, m, xi, eta))
}

fn rescaled_symbol_unchecked(
    kernel: &DyadicKernel,
    pu: &Polynomial,
    qu: &Polynomial,
    m: i32,
    xi: f64,
    eta: f64,
) -> SymbolSample {
    let phase = scaled_phase(pu, qu, 0, xi, eta);
    let (value, abs_error) =
        oscillatory_integral(kernel, &phase, pow2(m), &default_symbol_opts());
    SymbolSample {
        xi,
        eta,
        re: value.re,
        im: value.im,
        abs_error,
        j: None,
        m: Some(m),
        n: None,
    }
}

/// Stationary data at one critical point of φ(t) = ξ Pu(t) + η Qu(t).
///
/// `phi_star` is the closed-form stationary value of the pure monomial phase
/// ξt^a + ηt^b at its critical point t₁ (the branch nearest t₀); `err_term`
/// is φ − φ*. Both are NaN when the monomial phase has no real critical
/// point branch.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhaseRecord {
    pub t_crit: f64,
    pub phi: f64,
    pub phi_star: f64,
    pub err_term: f64,
    pub second_derivative: f64,
}

#[derive(Debug, Clone)]
pub enum CriticalPointOutcome {
    /// No critical point inside {1/2 ≤ |t| ≤ 2}; roots found outside the
    /// support are reported but not used.
    NonStationary { roots_outside: Vec<f64> },
    Stationary(Vec<PhaseRecord>),
}

/// Real critical points t₁ of the monomial phase ξ t^a + η t^b, i.e. real
/// solutions of t^{b-a} = -aξ/(bη), any magnitude.
pub fn monomial_critical_branches(a: usize, b: usize, xi: f64, eta: f64) -> Vec<f64> {
    assert!(b > a);
    if eta == 0.0 || xi == 0.0 {
        return Vec::new();
    }
    let w = -(a as f64 * xi) / (b as f64 * eta);
    let k = (b - a) as i32;
    if k % 2 == 1 {
        vec![w.signum() * w.abs().powf(1.0 / k as f64)]
    } else if w > 0.0 {
        let r = w.powf(1.0 / k as f64);
        vec![r, -r]
    } else {
        Vec::new()
    }
}

/// Stationary value of the monomial phase at branch t₁.
pub fn phi_star_value(a: usize, b: usize, xi: f64, eta: f64, t1: f64) -> f64 {
    xi * t1.powi(a as i32) + eta * t1.powi(b as i32)
}

/// Closed-form mixed derivative ∂ξ∂η φ* for the branch with sign(t₁) = s.
/// φ* = (1 - a/b) ξ t₁^a with t₁^{b-a} = -aξ/(bη) gives
/// φ* = K sgn(ξ) |ξ|^{bκ} |η|^{-aκ}, κ = 1/(b-a).
pub fn phi_star_mixed_derivative(a: usize, b: usize, xi: f64, eta: f64, t1_sign: f64) -> f64 {
    let (af, bf) = (a as f64, b as f64);
    let kappa = 1.0 / (bf - af);
    let k = (1.0 - af / bf) * t1_sign.powi(a as i32) * (af / bf).powf(af * kappa);
    -k * (bf * kappa)
        * (af * kappa)
        * xi.abs().powf(af * kappa)
        * eta.abs().powf(-af * kappa - 1.0)
        * eta.signum()
}

fn newton_polish(coeffs: &[f64], dcoeffs: &[f64], mut t: f64) -> Option<f64> {
    for _ in 0..80 {
        let v = eval_poly(coeffs, t);
        let d = eval_poly(dcoeffs, t);
        if d == 0.0 {
            break;
        }
        let step = v / d;
        t -= step;
        if step.abs() < 1e-15 * t.abs().max(1.0) {
            break;
        }
    }
    let scale = coeffs.iter().map(|c| c.abs()).fold(1.0, f64::max);
    if eval_poly(coeffs, t).abs() <= 1e-12 * scale {
        Some(t)
    } else {
        None
    }
}

/// All critical points of φ(t) = ξ Pu(t) + η Qu(t) in {1/2 ≤ |t| ≤ 2}:
/// exact Sturm isolation of φ' over the rationals (ξ, η lift exactly from
/// f64), then Newton polish with a |φ'(t)| ≤ 1e-12-scale certificate.
pub fn critical_point(
    pu: &Polynomial,
    qu: &Polynomial,
    xi: f64,
    eta: f64,
) -> Result<CriticalPointOutcome, OscError> {
    if xi == 0.0 && eta == 0.0 {
        return Err(OscError::BothFrequenciesZero);
    }
    let a = degree_profile(pu)?.trailing.ok_or(PolyError::ZeroPolynomial)?;
    let b = degree_profile(qu)?.trailing.ok_or(PolyError::ZeroPolynomial)?;

    let xi_r = Rat::from_float(xi).expect("finite");
    let eta_r = Rat::from_float(eta).expect("finite");
    let dphi = &pu.derivative().scale(&xi_r) + &qu.derivative().scale(&eta_r);
    if dphi.is_zero() {
        return Err(OscError::NonStationary);
    }

    let lo = Rat::from_float(-64.0).unwrap();
    let hi = Rat::from_float(64.0).unwrap();
    let width = Rat::new(1.into(), 1024.into());
    let brackets = crate::polyalg::isolate_real_roots(&dphi, &lo, &hi, &width);

    let coeffs = dphi.to_f64_coeffs();
    let dcoeffs = deriv_coeffs(&coeffs);
    let phi_coeffs = scaled_phase(pu, qu, 0, xi, eta);
    let ddphi = deriv_coeffs(&deriv_coeffs(&phi_coeffs));

    let mut interior = Vec::new();
    let mut outside = Vec::new();
    for (blo, bhi) in brackets {
        let mid = ((&blo + &bhi) / Rat::from_float(2.0).unwrap())
            .to_f64()
            .unwrap();
        let Some(t0) = newton_polish(&coeffs, &dcoeffs, mid) else {
            continue;
        };
        // interior means the open annulus: on the closed boundary the kernel
        // vanishes to infinite order, so such roots cannot drive the phase
        if t0.abs() > 0.5 && t0.abs() < 2.0 {
            let phi = eval_poly(&phi_coeffs, t0);
            let branches = monomial_critical_branches(a, b, xi, eta);
            let t1 = branches
                .iter()
                .copied()
                .min_by(|x, y| (x - t0).abs().total_cmp(&(y - t0).abs()));
            let (phi_star, err_term) = match t1 {
                Some(t1) => {
                    let ps = phi_star_value(a, b, xi, eta, t1);
                    (ps, phi - ps)
                }
                None => (f64::NAN, f64::NAN),
            };
            interior.push(PhaseRecord {
                t_crit: t0,
                phi,
                phi_star,
                err_term,
                second_derivative: eval_poly(&ddphi, t0),
            });
        } else {
            outside.push(t0);
        }
    }
    if interior.is_empty() {
        Ok(CriticalPointOutcome::NonStationary {
            roots_outside: outside,
        })
    } else {
        interior.sort_by(|x, y| x.t_crit.total_cmp(&y.t_crit));
        Ok(CriticalPointOutcome::Stationary(interior))
    }
}

/// Fast f64 path: the stationary value φ(ξ,η) when the phase has a unique
/// critical point inside the kernel support. Newton seeded from the monomial
/// branches; returns None when no branch converges to an interior point or
/// two distinct interior points appear.
pub fn phi_fast(
    pu_coeffs: &[f64],
    qu_coeffs: &[f64],
    a: usize,
    b: usize,
    xi: f64,
    eta: f64,
) -> Option<(f64, f64)> {
    let n = pu_coeffs.len().max(qu_coeffs.len());
    let phi: Vec<f64> = (0..n)
        .map(|k| {
            xi * pu_coeffs.get(k).copied().unwrap_or(0.0)
                + eta * qu_coeffs.get(k).copied().unwrap_or(0.0)
        })
        .collect();
    let dphi = deriv_coeffs(&phi);
    let ddphi = deriv_coeffs(&dphi);
    let mut found: Option<f64> = None;
    for seed in monomial_critical_branches(a, b, xi, eta) {
        let Some(t0) = newton_polish(&dphi, &ddphi, seed) else {
            continue;
        };
        if !(t0.abs() > 0.5 && t0.abs() < 2.0) {
            continue;
        }
        match found {
            None => found = Some(t0),
            Some(prev) if (prev - t0).abs() > 1e-8 => return None,
            _ => {}
        }
    }
    found.map(|t0| (t0, eval_poly(&phi, t0)))
}

/// One row of the stationary-phase table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StationaryPhaseRow {
    pub m: i32,
    /// |I_{ρ,m}| · 2^{m/2}; stabilizes at the stationary-phase constant.
    pub normalized_magnitude: f64,
    /// arg I_{ρ,m} + 2π 2^m φ(t₀), wrapped to (-π, π].
    pub phase_residual: f64,
    pub magnitude: f64,
    pub abs_error: f64,
}

fn wrap_angle(x: f64) -> f64 {
    let mut y = x % TWO_PI;
    if y > std::f64::consts::PI {
        y -= TWO_PI;
    } else if y <= -std::f64::consts::PI {
        y += TWO_PI;
    }
    y
}

/// Normalized magnitude/phase table of I_{ρ,m} over an m-range; requires an
/// interior non-degenerate critical point.
pub fn stationary_phase_check(
    kernel: &DyadicKernel,
    pu: &Polynomial,
    qu: &Polynomial,
    xi: f64,
    eta: f64,
    m_range: impl IntoIterator<Item = i32>,
) -> Result<Vec<StationaryPhaseRow>, OscError> {
    let records = match critical_point(pu, qu, xi, eta)? {
        CriticalPointOutcome::NonStationary { .. } => return Err(OscError::NonStationary),
        CriticalPointOutcome::Stationary(r) => r,
    };
    let rec = records[0];
    if rec.second_derivative.abs() < 1e-8 {
        return Err(OscError::Degenerate {
            t_crit: rec.t_crit,
            second_derivative: rec.second_derivative,
        });
    }
    Ok(m_range
        .into_iter()
        .map(|m| {
            let s = rescaled_symbol_unchecked(kernel, pu, qu, m, xi, eta);
            let mag = s.value().norm();
            StationaryPhaseRow {
                m,
                normalized_magnitude: mag * pow2(m).sqrt(),
                phase_residual: wrap_angle(s.value().arg() + TWO_PI * pow2(m) * rec.phi),
                magnitude: mag,
                abs_error: s.abs_error,
            }
        })
        .collect())
}

/// Raw |I_{ρ,m}| over an m-range (no critical point required); used to
/// measure the non-stationary decay regime.
pub fn magnitude_table(
    kernel: &DyadicKernel,
    pu: &Polynomial,
    qu: &Polynomial,
    xi: f64,
    eta: f64,
    m_range: impl IntoIterator<Item = i32>,
) -> Vec<(i32, f64, f64)> {
    m_range
        .into_iter()
        .map(|m| {
            let s = rescaled_symbol_unchecked(kernel, pu, qu, m, xi, eta);
            (m, s.value().norm(), s.abs_error)
        })
        .collect()
}

/// One cell of the (m, n) decay surface.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SymbolCell {
    pub m: i32,
    pub n: i32,
    pub sup_abs: f64,
    pub max_abs_error: f64,
}

/// Sup of |M_{j,m,n}(ξ,η)| = |m_j Φ̂(ξ/2^{aj+m}) Φ̂(η/2^{bj+n})| over a
/// sampled band product, for each requested (m, n) cell. The symbol does not
/// depend on any test function, so every cell is well-defined.
pub fn symbol_decay_scan(
    kernel: &DyadicKernel,
    cutoff: &FrequencyCutoff,
    p: &Polynomial,
    q: &Polynomial,
    j: i32,
    cells: &[(i32, i32)],
    samples_per_axis: usize,
) -> Result<Vec<SymbolCell>, OscError> {
    let a = degree_profile(p)?.trailing.ok_or(PolyError::ZeroPolynomial)? as i32;
    let b = degree_profile(q)?.trailing.ok_or(PolyError::ZeroPolynomial)? as i32;
    let half = (samples_per_axis / 2).max(1);
    // magnitudes stay clear of the band edges where the cutoff vanishes
    let mags: Vec<f64> = (0..half)
        .map(|i| {
            let u = -0.9 + 1.8 * (i as f64 + 0.5) / half as f64;
            u.exp2()
        })
        .collect();

    let out = crate::par::map(cells, |&(m, n)| {
        let xi_scale = pow2(a * j + m);
        let eta_scale = pow2(b * j + n);
        let mut samples = Vec::with_capacity(4 * half * half);
        for &u in &mags {
            for &v in &mags {
                for sx in [1.0, -1.0] {
                    for sy in [1.0, -1.0] {
                        samples.push((sx * u * xi_scale, sy * v * eta_scale));
                    }
                }
            }
        }
        let mut sup_abs = 0.0f64;
        let mut max_err = 0.0f64;
        for (xi, eta) in samples {
            let s = mj_with_opts(
                kernel,
                p,
                q,
                j,
                xi,
                eta,
                &QuadOpts {
                    rel_tol: 1e-7,
                    ..default_symbol_opts()
                },
            );
            let w = cutoff.hat_eval(xi / xi_scale) * cutoff.hat_eval(eta / eta_scale);
            sup_abs = sup_abs.max(s.value().norm() * w);
            max_err = max_err.max(s.abs_error);
        }
        SymbolCell {
            m,
            n,
            sup_abs,
            max_abs_error: max_err,
        }
    });
    Ok(out)
}

/// Report of the mixed-derivative lower-bound check on
/// Q_τ(ξ,η) = φ(ξ,η) − φ(ξ−τ, η+τ/2^{(b−a)j}).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MixedDerivativeReport {
    pub min_normalized: f64,
    pub evaluated: usize,
    pub skipped: usize,
}

/// Central finite-difference mixed derivative of Q_τ at step 1e-4 with one
/// Richardson extrapolation, minimized over a band grid and normalized by
/// |τ|. Samples whose support or critical-point preconditions fail are
/// skipped and counted.
pub fn mixed_derivative_check(
    pu: &Polynomial,
    qu: &Polynomial,
    j: i32,
    tau: f64,
    samples_per_axis: usize,
) -> Result<MixedDerivativeReport, OscError> {
    if tau == 0.0 {
        return Err(OscError::DegenerateTau);
    }
    let a = degree_profile(pu)?.trailing.ok_or(PolyError::ZeroPolynomial)?;
    let b = degree_profile(qu)?.trailing.ok_or(PolyError::ZeroPolynomial)?;
    assert!(b > a, "phase polynomials must have ordered trailing degrees");
    let shift = tau / pow2((b - a) as i32 * j);
    let pc = pu.to_f64_coeffs();
    let qc = qu.to_f64_coeffs();

    let in_band = |x: f64| (0.5..2.0).contains(&x.abs());
    let phi = |xi: f64, eta: f64| phi_fast(&pc, &qc, a, b, xi, eta).map(|(_, v)| v);
    let q_tau = |xi: f64, eta: f64| -> Option<f64> {
        Some(phi(xi, eta)? - phi(xi - tau, eta + shift)?)
    };
    let mixed = |xi: f64, eta: f64, h: f64| -> Option<f64> {
        Some(
            (q_tau(xi + h, eta + h)? - q_tau(xi + h, eta - h)? - q_tau(xi - h, eta + h)?
                + q_tau(xi - h, eta - h)?)
                / (4.0 * h * h),
        )
    };

    let half = (samples_per_axis / 2).max(1);
    let mags: Vec<f64> = (0..half)
        .map(|i| 0.55 * (1.9f64 / 0.55).powf((i as f64 + 0.5) / half as f64))
        .collect();
    let mut axis = Vec::with_capacity(2 * half);
    for &u in &mags {
        axis.push(u);
        axis.push(-u);
    }

    let mut evaluated = 0usize;
    let mut skipped = 0usize;
    let mut min_normalized = f64::INFINITY;
    let h = 1e-4;
    for &xi in &axis {
        for &eta in &axis {
            if !(in_band(xi) && in_band(xi - tau) && in_band(eta) && in_band(eta + shift)) {
                skipped += 1;
                continue;
            }
            let d = mixed(xi, eta, h).and_then(|coarse| {
                let fine = mixed(xi, eta, h / 2.0)?;
                Some((4.0 * fine - coarse) / 3.0)
            });
            match d {
                Some(v) => {
                    evaluated += 1;
                    min_normalized = min_normalized.min(v.abs() / tau.abs());
                }
                None => skipped += 1,
            }
        }
    }
    if evaluated == 0 {
        return Err(OscError::NoValidSamples);
    }
    Ok(MixedDerivativeReport {
        min_normalized,
        evaluated,
        skipped,
    })
}
