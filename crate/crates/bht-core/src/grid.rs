//! Uniformly sampled complex-valued functions with FFT-based transforms.
//!
//! The discrete transform approximates the continuous one with the
//! convention f̂(ξ) = ∫ f(x) e^{-2πiξx} dx: forward output carries the dx
//! weight and the x₀ phase so Plancherel holds numerically against the
//! analytic transforms in `testfuncs`.

use num_complex::Complex64;
use rustfft::FftPlanner;

#[derive(Debug, Clone, thiserror::Error)]
pub enum GridError {
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("frequency band [{lo}, {hi}] exceeds the Nyquist range {nyquist}")]
    BandExceedsNyquist { lo: f64, hi: f64, nyquist: f64 },
}

/// Uniform complex samples: values[k] = f(x0 + k dx).
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<Complex64>,
}

/// Evaluation grid description start:end:count (endpoints inclusive).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct XGrid {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl XGrid {
    pub fn new(start: f64, end: f64, count: usize) -> Self {
        assert!(count >= 1 && end >= start);
        XGrid { start, end, count }
    }

    pub fn step(&self) -> f64 {
        if self.count <= 1 {
            0.0
        } else {
            (self.end - self.start) / (self.count - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.count).map(|k| self.start + k as f64 * h).collect()
    }
}

impl GridFunction {
    pub fn new(x0: f64, dx: f64, values: Vec<Complex64>) -> Self {
        GridFunction { x0, dx, values }
    }

    pub fn zeros_like(&self) -> GridFunction {
        GridFunction::new(self.x0, self.dx, vec![Complex64::new(0.0, 0.0); self.values.len()])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, k: usize) -> f64 {
        self.x0 + k as f64 * self.dx
    }

    pub fn nyquist(&self) -> f64 {
        0.5 / self.dx
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest magnitude among the outermost `edge` samples on either side.
    pub fn boundary_max(&self, edge: usize) -> f64 {
        let n = self.values.len();
        let e = edge.min(n);
        self.values[..e]
            .iter()
            .chain(self.values[n - e..].iter())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Trapezoid L^r norm (finite r > 0).
    pub fn lr_norm(&self, r: f64) -> f64 {
        assert!(r > 0.0);
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let mut sum = 0.0;
        for (k, v) in self.values.iter().enumerate() {
            let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            sum += w * v.norm().powf(r);
        }
        (sum * self.dx).powf(1.0 / r)
    }

    pub fn l2_norm(&self) -> f64 {
        self.lr_norm(2.0)
    }

    /// Forward transform: returns a grid in ξ with values f̂(ξ_k),
    /// ξ_k = (k − N/2)/(N dx). Requires power-of-two length.
    pub fn fft(&self) -> Result<GridFunction, GridError> {
        let n = self.values.len();
        if !n.is_power_of_two() {
            return Err(GridError::NotPowerOfTwo(n));
        }
        // (-1)^n premultiplication shifts the DFT by N/2 bins, so output
        // index k carries frequency (k - N/2) dξ; the x0 phase restores the
        // continuous-transform convention f̂(ξ) = ∫ f e^{-2πiξx} dx.
        let mut buf: Vec<Complex64> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| if k % 2 == 0 { *v } else { -*v })
            .collect();
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(n).process(&mut buf);
        let dxi = 1.0 / (n as f64 * self.dx);
        let values = buf
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let xi = (k as f64 - n as f64 / 2.0) * dxi;
                let phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * xi * self.x0);
                v * phase * self.dx
            })
            .collect();
        Ok(GridFunction::new(-(n as f64 / 2.0) * dxi, dxi, values))
    }

    /// Inverse of [`GridFunction::fft`]; produces the centered time grid
    /// x_n = (n − N/2) dx, which is where every grid in this crate lives.
    pub fn ifft(&self) -> Result<GridFunction, GridError> {
        let n = self.values.len();
        if !n.is_power_of_two() {
            return Err(GridError::NotPowerOfTwo(n));
        }
        let dxi = self.dx;
        let dx = 1.0 / (n as f64 * dxi);
        let x0_time = -(n as f64 / 2.0) * dx;
        let mut buf: Vec<Complex64> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| {
                // fold the time-origin phase in before the inverse DFT
                let xi = self.x0 + k as f64 * dxi;
                let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * xi * x0_time);
                v * phase * dxi
            })
            .collect();
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(n).process(&mut buf);
        let values = buf
            .iter()
            .enumerate()
            .map(|(k, v)| if k % 2 == 0 { *v } else { -*v })
            .collect();
        Ok(GridFunction::new(x0_time, dx, values))
    }

    /// Multiply pointwise by a function of the grid coordinate.
    pub fn map_with_coord(&self, f: impl Fn(f64, Complex64) -> Complex64) -> GridFunction {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| f(self.point(k), *v))
            .collect();
        GridFunction::new(self.x0, self.dx, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn gaussian_grid(n: usize) -> GridFunction {
        let x0 = -16.0;
        let dx = 32.0 / n as f64;
        let values = (0..n)
            .map(|k| {
                let x = x0 + k as f64 * dx;
                Complex64::new((-std::f64::consts::PI * x * x).exp(), 0.0)
            })
            .collect();
        GridFunction::new(x0, dx, values)
    }

    #[test]
    fn fft_matches_analytic_gaussian_transform() {
        let g = gaussian_grid(1 << 12);
        let hat = g.fft().unwrap();
        for k in (0..hat.len()).step_by(97) {
            let xi = hat.point(k);
            if xi.abs() < 4.0 {
                let exact = (-std::f64::consts::PI * xi * xi).exp();
                assert_abs_diff_eq!(hat.values[k].re, exact, epsilon = 1e-10);
                assert!(hat.values[k].im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn fft_roundtrip_is_identity() {
        let g = gaussian_grid(1 << 10);
        let back = g.fft().unwrap().ifft().unwrap();
        assert_abs_diff_eq!(back.x0, g.x0, epsilon = 1e-12);
        let max_err = g
            .values
            .iter()
            .zip(&back.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(max_err < 1e-10 * g.max_abs());
    }

    #[test]
    fn plancherel_on_the_grid() {
        let g = gaussian_grid(1 << 12);
        let hat = g.fft().unwrap();
        assert_abs_diff_eq!(g.l2_norm(), hat.l2_norm(), epsilon = 1e-8);
    }

    #[test]
    fn xgrid_points() {
        let g = XGrid::new(-4.0, 4.0, 257);
        let pts = g.points();
        assert_eq!(pts.len(), 257);
        assert_abs_diff_eq!(pts[0], -4.0);
        assert_abs_diff_eq!(pts[256], 4.0);
        assert_abs_diff_eq!(pts[128], 0.0);
    }

    #[test]
    fn rejects_non_power_of_two() {
        let g = GridFunction::new(0.0, 0.1, vec![Complex64::new(1.0, 0.0); 100]);
        assert!(matches!(g.fft(), Err(GridError::NotPowerOfTwo(100))));
    }
}
