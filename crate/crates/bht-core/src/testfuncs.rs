//! Gaussian-atom test functions.
//!
//! The family is closed under the Fourier transform and has closed-form Lp
//! norms, which makes every downstream quadrature independently checkable.
//! An atom is w · e^{−π((x−c)/σ)²} · e^{2πiωx}; its transform is
//! w σ e^{2πicω} · e^{−πσ²(ξ−ω)²} · e^{−2πicξ}, again an atom with
//! (σ, c, ω) ↦ (1/σ, ω, −c).

use crate::grid::GridFunction;
use crate::kernels::FrequencyCutoff;
use crate::quad::{self, QuadOpts};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Clone, thiserror::Error)]
pub enum FuncError {
    #[error("Lp exponent must be positive, got {0}")]
    BadExponent(f64),
    #[error("frequency band [{0}, {1}] exceeds the grid Nyquist range")]
    BandExceedsNyquist(f64, f64),
}

/// One Gaussian atom w e^{−π((x−c)/σ)²} e^{2πiωx}.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GaussianAtom {
    pub sigma: f64,
    pub center: f64,
    pub modulation: f64,
    pub weight_re: f64,
    pub weight_im: f64,
}

impl GaussianAtom {
    pub fn new(sigma: f64, center: f64, modulation: f64) -> Self {
        assert!(sigma > 0.0);
        GaussianAtom {
            sigma,
            center,
            modulation,
            weight_re: 1.0,
            weight_im: 0.0,
        }
    }

    pub fn weight(&self) -> Complex64 {
        Complex64::new(self.weight_re, self.weight_im)
    }

    fn with_weight(mut self, w: Complex64) -> Self {
        self.weight_re = w.re;
        self.weight_im = w.im;
        self
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let u = (x - self.center) / self.sigma;
        let env = (-PI * u * u).exp();
        self.weight() * env * Complex64::from_polar(1.0, 2.0 * PI * self.modulation * x)
    }

    fn transform(&self) -> GaussianAtom {
        let w = self.weight()
            * self.sigma
            * Complex64::from_polar(1.0, 2.0 * PI * self.center * self.modulation);
        GaussianAtom {
            sigma: 1.0 / self.sigma,
            center: self.modulation,
            modulation: -self.center,
            weight_re: w.re,
            weight_im: w.im,
        }
    }
}

/// Finite complex combination of Gaussian atoms.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TestFunction {
    pub atoms: Vec<GaussianAtom>,
}

impl TestFunction {
    pub fn atom(sigma: f64, center: f64, modulation: f64) -> Self {
        TestFunction {
            atoms: vec![GaussianAtom::new(sigma, center, modulation)],
        }
    }

    pub fn zero() -> Self {
        TestFunction { atoms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn scaled(&self, w: Complex64) -> TestFunction {
        TestFunction {
            atoms: self
                .atoms
                .iter()
                .map(|a| a.with_weight(a.weight() * w))
                .collect(),
        }
    }

    pub fn translated(&self, shift: f64) -> TestFunction {
        TestFunction {
            atoms: self
                .atoms
                .iter()
                .map(|a| {
                    let mut b = *a;
                    b.center += shift;
                    b
                })
                .collect(),
        }
    }

    pub fn plus(&self, other: &TestFunction) -> TestFunction {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        TestFunction { atoms }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.atoms.iter().map(|a| a.eval(x)).sum()
    }

    /// Closed-form Fourier transform (atom-wise).
    pub fn fourier_transform(&self) -> TestFunction {
        TestFunction {
            atoms: self.atoms.iter().map(|a| a.transform()).collect(),
        }
    }

    /// Envelope bound |f(x)| ≤ Σ |w_i| e^{−π((x−c_i)/σ_i)²}.
    pub fn envelope(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| {
                let u = (x - a.center) / a.sigma;
                a.weight().norm() * (-PI * u * u).exp()
            })
            .sum()
    }

    /// Interval outside of which the envelope stays below `floor` times the
    /// peak weight sum. Returns None for the zero function.
    pub fn support_window(&self, floor: f64) -> Option<(f64, f64)> {
        if self.atoms.is_empty() {
            return None;
        }
        let spread = (floor.ln().abs() / PI).sqrt();
        let lo = self
            .atoms
            .iter()
            .map(|a| a.center - a.sigma * spread)
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .atoms
            .iter()
            .map(|a| a.center + a.sigma * spread)
            .fold(f64::NEG_INFINITY, f64::max);
        Some((lo, hi))
    }

    /// Support window of the Fourier transform.
    pub fn freq_window(&self, floor: f64) -> Option<(f64, f64)> {
        self.fourier_transform().support_window(floor)
    }

    /// Largest modulation frequency among the atoms (oscillation hint).
    pub fn max_modulation(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.modulation.abs() + 1.0 / a.sigma)
            .fold(0.0, f64::max)
    }

    /// Lp norm: closed form for a single atom, adaptive quadrature for
    /// combinations; `p = ∞` is the peak magnitude.
    pub fn lp_norm(&self, p: f64) -> Result<f64, FuncError> {
        if !(p > 0.0) {
            return Err(FuncError::BadExponent(p));
        }
        if self.atoms.is_empty() {
            return Ok(0.0);
        }
        if p.is_infinite() {
            return Ok(self.sup_norm());
        }
        if self.atoms.len() == 1 {
            let a = &self.atoms[0];
            // ∫ e^{−pπ(x/σ)²} dx = σ/√p
            return Ok(a.weight().norm() * (a.sigma / p.sqrt()).powf(1.0 / p));
        }
        let (lo, hi) = self.support_window(1e-18).expect("nonempty");
        let mut f = |x: f64| self.eval(x).norm().powf(p);
        let freq = |_: f64| self.max_modulation();
        let opts = QuadOpts::with_tols(1e-13, 1e-11);
        let v = match quad::integrate_real(&mut f, &[(lo, hi)], Some(&freq), &opts) {
            Ok((v, _)) => v,
            Err(e) => e.best().0.re,
        };
        Ok(v.powf(1.0 / p))
    }

    /// Peak magnitude over the support window.
    pub fn sup_norm(&self) -> f64 {
        if self.atoms.is_empty() {
            return 0.0;
        }
        if self.atoms.len() == 1 {
            return self.atoms[0].weight().norm();
        }
        let (lo, hi) = self.support_window(1e-18).expect("nonempty");
        let n = 8192;
        let mut best = 0.0f64;
        let mut best_x = lo;
        for k in 0..=n {
            let x = lo + (hi - lo) * k as f64 / n as f64;
            let v = self.eval(x).norm();
            if v > best {
                best = v;
                best_x = x;
            }
        }
        // local parabolic refinement
        let h = (hi - lo) / n as f64;
        for _ in 0..40 {
            let (l, c, r) = (
                self.eval(best_x - h).norm(),
                self.eval(best_x).norm(),
                self.eval(best_x + h).norm(),
            );
            let denom = l - 2.0 * c + r;
            if denom.abs() > 0.0 {
                let shift = 0.5 * (l - r) / denom;
                best_x += shift.clamp(-h, h);
            }
            best = best.max(self.eval(best_x).norm());
        }
        best
    }

    /// Uniform samples over `[x0, x1]`; N must be a power of two. Attaches a
    /// truncation warning when the window loses more than ~1e-8 of L² mass.
    pub fn sample(&self, window: (f64, f64), n: usize) -> SampledFunction {
        assert!(n.is_power_of_two(), "sample count must be a power of two");
        let (x0, x1) = window;
        let dx = (x1 - x0) / n as f64;
        let values = (0..n)
            .map(|k| self.eval(x0 + k as f64 * dx))
            .collect();
        let grid = GridFunction::new(x0, dx, values);
        // bound the escaped envelope rather than chasing erf tails
        let escaped = self
            .atoms
            .iter()
            .map(|a| {
                let d = (x0 - a.center).max(a.center - x1).max(0.0);
                let du = d / a.sigma;
                a.weight().norm() * a.sigma * (-PI * du * du).exp()
            })
            .sum::<f64>();
        let total: f64 = self
            .atoms
            .iter()
            .map(|a| a.weight().norm() * a.sigma)
            .sum::<f64>()
            .max(f64::MIN_POSITIVE);
        SampledFunction {
            grid,
            truncation_warning: escaped / total > 1e-8,
        }
    }
}

/// Grid samples plus the window-truncation flag.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    pub grid: GridFunction,
    pub truncation_warning: bool,
}

/// Default sampling window used by the Littlewood–Paley helpers: covers the
/// acceptance experiments with Nyquist 2^8.
pub const DEFAULT_WINDOW: (f64, f64) = (-32.0, 32.0);
pub const DEFAULT_SAMPLES: usize = 1 << 14;

/// Littlewood–Paley piece f * Φ_k: frequency-space multiplication by
/// Φ̂(ξ/2^k) followed by the inverse FFT, on the default grid.
pub fn lp_piece(
    f: &TestFunction,
    k: i32,
    cutoff: &FrequencyCutoff,
) -> Result<GridFunction, FuncError> {
    let sampled = f.sample(DEFAULT_WINDOW, DEFAULT_SAMPLES);
    let hat = sampled.grid.fft().expect("power-of-two grid");
    let band_hi = crate::kernels::pow2(k + 1);
    if band_hi > hat.values.len() as f64 / 2.0 * hat.dx {
        return Err(FuncError::BandExceedsNyquist(
            crate::kernels::pow2(k - 1),
            band_hi,
        ));
    }
    let scale = crate::kernels::pow2(-k);
    let filtered = hat.map_with_coord(|xi, v| v * cutoff.hat_eval(xi * scale));
    Ok(filtered.ifft().expect("power-of-two grid"))
}

/// Pointwise f * Φ at unit scale by direct frequency quadrature — used where
/// FFT grids would be too coarse. `(f*Φ)(y) = ∫ f̂(ξ) Φ̂(ξ) e^{2πiξy} dξ`.
pub fn cutoff_convolution_eval(f: &TestFunction, cutoff: &FrequencyCutoff, y: f64) -> Complex64 {
    let fhat = f.fourier_transform();
    let mut g = |xi: f64| fhat.eval(xi) * cutoff.hat_eval(xi) * Complex64::from_polar(1.0, 2.0 * PI * xi * y);
    let freq = |_: f64| y.abs() + 1.0;
    let opts = QuadOpts::with_tols(1e-12, 1e-10);
    match quad::integrate(&mut g, &[(-2.0, -0.5), (0.5, 2.0)], Some(&freq), &opts) {
        Ok(r) => r.value,
        Err(e) => e.best().0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{make_freq_cutoff, SamplingSpec};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn fourier_transform_of_standard_gaussian_is_itself() {
        let f = TestFunction::atom(1.0, 0.0, 0.0);
        let fhat = f.fourier_transform();
        for xi in [-2.0, -0.3, 0.0, 0.7, 1.9] {
            let exact = (-PI * xi * xi).exp();
            assert_abs_diff_eq!(fhat.eval(xi).re, exact, epsilon = 1e-15);
            assert_abs_diff_eq!(fhat.eval(xi).im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn translation_and_modulation_laws() {
        // atom(σ=1,c=1,ω=0) → e^{−πξ²} e^{−2πiξ}
        let f = TestFunction::atom(1.0, 1.0, 0.0);
        let fhat = f.fourier_transform();
        for xi in [-1.2, 0.4, 2.0] {
            let exact = Complex64::from_polar((-PI * xi * xi).exp(), -2.0 * PI * xi);
            assert!((fhat.eval(xi) - exact).norm() < 1e-15);
        }
        // atom(σ=2,c=0,ω=3) → 2 e^{−4π(ξ−3)²}
        let f = TestFunction::atom(2.0, 0.0, 3.0);
        let fhat = f.fourier_transform();
        for xi in [2.0, 3.0, 3.7] {
            let exact = 2.0 * (-4.0 * PI * (xi - 3.0) * (xi - 3.0)).exp();
            assert_abs_diff_eq!(fhat.eval(xi).re, exact, epsilon = 1e-13);
        }
    }

    #[test]
    fn transform_matches_fft_numerically() {
        let f = TestFunction::atom(1.0, 1.0, 2.0).plus(
            &TestFunction::atom(0.5, -0.5, 0.0).scaled(Complex64::new(0.3, 0.7)),
        );
        let hat_analytic = f.fourier_transform();
        let hat_grid = f.sample(DEFAULT_WINDOW, DEFAULT_SAMPLES).grid.fft().unwrap();
        for k in (0..hat_grid.len()).step_by(613) {
            let xi = hat_grid.point(k);
            if xi.abs() < 16.0 {
                let d = (hat_grid.values[k] - hat_analytic.eval(xi)).norm();
                assert!(d < 1e-8, "xi={xi}, diff={d:.3e}");
            }
        }
    }

    #[test]
    fn lp_norms_closed_form() {
        let f = TestFunction::atom(1.0, 0.0, 0.0);
        assert_abs_diff_eq!(f.lp_norm(2.0).unwrap(), 2.0f64.powf(-0.25), epsilon = 1e-14);
        assert_abs_diff_eq!(f.lp_norm(1.0).unwrap(), 1.0, epsilon = 1e-14);

        let f = TestFunction::atom(2.0, 0.0, 0.0);
        let p = 1.5f64;
        let exact = (2.0 / p.sqrt()).powf(1.0 / p);
        assert_abs_diff_eq!(f.lp_norm(p).unwrap(), exact, epsilon = 1e-13);
        // quadrature path agrees with the closed form on a doubled atom list
        let g = f.scaled(Complex64::new(0.5, 0.0)).plus(&f.scaled(Complex64::new(0.5, 0.0)));
        assert_abs_diff_eq!(g.lp_norm(p).unwrap(), exact, epsilon = 1e-9);
    }

    #[test]
    fn plancherel_analytic_and_grid() {
        let f = TestFunction::atom(1.0, 0.5, 1.0);
        let a = f.lp_norm(2.0).unwrap();
        let b = f.fourier_transform().lp_norm(2.0).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        let g = f.sample(DEFAULT_WINDOW, DEFAULT_SAMPLES).grid;
        assert_abs_diff_eq!(g.l2_norm(), a, epsilon = 1e-6);
    }

    #[test]
    fn sampling_edge_cases() {
        let f = TestFunction::atom(1.0, 0.0, 0.0);
        let s = f.sample((-8.0, 8.0), 1024);
        assert!(!s.truncation_warning);
        assert_abs_diff_eq!(s.grid.l2_norm(), f.lp_norm(2.0).unwrap(), epsilon = 1e-10);

        let z = TestFunction::zero().sample((-8.0, 8.0), 64);
        assert!(z.grid.values.iter().all(|v| v.norm() == 0.0));

        let far = TestFunction::atom(1.0, 20.0, 0.0).sample((-8.0, 8.0), 1024);
        assert!(far.truncation_warning);
    }

    #[test]
    fn lp_piece_zero_when_bands_disjoint() {
        let cutoff = make_freq_cutoff(SamplingSpec::default()).unwrap();
        // f̂ supported near |ξ| < 1/4 → the k=8 band misses it entirely
        let f = TestFunction::atom(8.0, 0.0, 0.0);
        let piece = lp_piece(&f, 6, &cutoff).unwrap();
        assert!(piece.max_abs() < 1e-10);
    }

    #[test]
    fn lp_pieces_reconstruct_band_limited_function() {
        let cutoff = make_freq_cutoff(SamplingSpec::default()).unwrap();
        let f = TestFunction::atom(1.0, 0.0, 4.0); // spectrum near ξ = 4
        let mut sum = f.sample(DEFAULT_WINDOW, DEFAULT_SAMPLES).grid.zeros_like();
        for k in -6..=7 {
            let piece = lp_piece(&f, k, &cutoff).unwrap();
            for (s, p) in sum.values.iter_mut().zip(&piece.values) {
                *s += p;
            }
        }
        let orig = f.sample(DEFAULT_WINDOW, DEFAULT_SAMPLES).grid;
        let max_err = orig
            .values
            .iter()
            .zip(&sum.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(max_err < 1e-8, "reconstruction error {max_err:.3e}");
    }

    #[test]
    fn modulated_atom_mass_lands_in_its_band() {
        let cutoff = make_freq_cutoff(SamplingSpec::default()).unwrap();
        let f = TestFunction::atom(1.0, 0.0, 64.0); // ω = 2^6
        let piece = lp_piece(&f, 6, &cutoff).unwrap();
        let ratio = piece.l2_norm() / f.lp_norm(2.0).unwrap();
        assert!(ratio >= 0.5, "band carries only {ratio:.3} of the mass");
    }

    proptest! {
        #[test]
        fn lp_norm_is_absolutely_homogeneous(re in -3.0f64..3.0, im in -3.0f64..3.0,
                                             p in 0.5f64..4.0) {
            prop_assume!(re.abs() + im.abs() > 1e-3);
            let f = TestFunction::atom(1.0, 0.3, 1.0);
            let alpha = Complex64::new(re, im);
            let lhs = f.scaled(alpha).lp_norm(p).unwrap();
            let rhs = alpha.norm() * f.lp_norm(p).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        #[test]
        fn sample_fft_roundtrip(sigma in 0.5f64..2.0, c in -2.0f64..2.0) {
            let f = TestFunction::atom(sigma, c, 1.0);
            let g = f.sample((-32.0, 32.0), 1 << 12).grid;
            let back = g.fft().unwrap().ifft().unwrap();
            let max_err = g.values.iter().zip(&back.values)
                .map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            prop_assert!(max_err <= 1e-10 * g.max_abs().max(1e-300));
        }
    }
}
