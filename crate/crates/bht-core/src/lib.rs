//! Numerical laboratory for the bilinear Hilbert transform along two
//! polynomial curves.
//!
//! The crate evaluates the principal-value operator
//! `B(f,g)(x) = pv ∫ f(x−P(t)) g(x−Q(t)) dt/t`, its dyadic single-scale
//! pieces, the frequency-localized pieces and their oscillatory symbols,
//! plus the exact polynomial algebra (correlation degree, admissibility)
//! that governs the operator's exponent range.
//!
//! Modules mirror the pipeline:
//!
//! * [`polyalg`] — exact rational polynomial algebra (degrees, recentering,
//!   square-free/Sturm root counting, correlation degree).
//! * [`kernels`] — smooth dyadic partitions of unity: the odd kernel ρ with
//!   `Σ 2^j ρ(2^j t) = 1/t`, the unit bump ρ₀, and the frequency cutoff Φ.
//! * [`testfuncs`] — Gaussian-atom test functions with closed-form Fourier
//!   transforms and Lp norms.
//! * [`quad`] / [`grid`] — oscillation-aware adaptive quadrature and sampled
//!   grid functions with FFT helpers.
//! * [`pvquad`] — truncated principal-value evaluation, single-scale pieces,
//!   frequency-localized pieces, the bilinear maximal function, and the
//!   Jacobian annulus scan.
//! * [`oscsym`] — symbols `m_j(ξ,η)`, rescaled oscillatory integrals,
//!   critical points and stationary-phase checks.
//! * [`normlab`] — empirical operator-norm probes: decay-exponent scans and
//!   the zero-operator counterexample suite.
//!
//! The data-parallel inner loops (x-grids, symbol scans, probe catalogs) run
//! on rayon when the default `parallel` feature is enabled and fall back to
//! sequential iteration without it; results are bit-identical either way.

pub mod grid;
pub mod kernels;
pub mod normlab;
pub mod oscsym;
pub mod par;
pub mod polyalg;
pub mod pvquad;
pub mod quad;
pub mod testfuncs;
