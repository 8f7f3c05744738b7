//! Exact polynomial algebra over the rationals.
//!
//! Everything here is computed in exact arithmetic: coefficients are
//! `BigRational`, the correlation degree comes from Yun square-free
//! decomposition plus Sturm root counting, and recentering is a binomial
//! expansion. Multiplicity is discontinuous in the coefficients, so no
//! floating root-finding is allowed on this path; a floating oracle exists
//! only in test code as an independent cross-check.

mod parse;
mod sturm;

pub use parse::parse_polynomial;
pub use sturm::{count_nonzero_real_roots, isolate_real_roots, yun_squarefree};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("degenerate pair: P' - Q' vanishes identically")]
    DegeneratePair,
    #[error("trailing coefficient is {found}, not 1; normalize first")]
    TrailingCoefficientNotOne { found: String },
    #[error("{0} is not a root of Q' - P'")]
    NotARoot(String),
}

/// Univariate polynomial with exact rational coefficients, index = power.
///
/// The coefficient vector is normalized: the highest index holds a nonzero
/// coefficient unless the polynomial is identically zero (empty vector).
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rat>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::monomial(0, Rat::one())
    }

    /// The monomial `c * t^k`.
    pub fn monomial(k: usize, c: Rat) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Polynomial { coeffs }
    }

    /// Convenience constructor from integer coefficients (index = power).
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(
            coeffs
                .iter()
                .map(|&c| Rat::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    /// Smallest index with a nonzero coefficient, `None` for zero.
    pub fn lowest_power(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rat::from_integer(BigInt::from(k)))
            .collect();
        Polynomial::new(coeffs)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Polynomial {
        let mut coeffs = vec![Rat::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / Rat::from_integer(BigInt::from(k + 1)));
        }
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Exact evaluation at a rational point (Horner).
    pub fn eval_rat(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Coefficients lowered to f64.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Horner evaluation in f64.
    pub fn eval_f64(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Substitute `t -> s*t` exactly: returns `P(s t)` as a polynomial in t.
    pub fn scale_argument(&self, s: &Rat) -> Polynomial {
        let mut pow = Rat::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c * &pow;
                pow = &pow * s;
                out
            })
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| k % 2 == 0 || c.is_zero())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_mag = mag.is_one();
            if !unit_mag || k == 0 {
                write!(f, "{}", mag)?;
            }
            if k > 0 {
                if !unit_mag {
                    write!(f, "*")?;
                }
                write!(f, "t")?;
                if k > 1 {
                    write!(f, "^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Leading/trailing degree data of a nonzero polynomial.
///
/// `trailing` is the smallest positive power carrying a nonzero coefficient;
/// it is `None` for nonzero constants, where no such power exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub leading: usize,
    pub trailing: Option<usize>,
    pub constant_term_zero: bool,
}

pub fn degree_profile(p: &Polynomial) -> Result<DegreeProfile, PolyError> {
    let leading = p.degree().ok_or(PolyError::ZeroPolynomial)?;
    let constant_term_zero = p.coeff(0).is_zero();
    let trailing = p
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, c)| !c.is_zero())
        .map(|(k, _)| k);
    Ok(DegreeProfile {
        leading,
        trailing,
        constant_term_zero,
    })
}

/// Correlation degree of a pair: the maximal multiplicity among the nonzero
/// real roots of P' − Q'. When P' − Q' has no nonzero real root the
/// definition is vacuous and we adopt d = 1 (`vacuous` is set so reports can
/// surface the convention).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CorrelationDegree {
    pub degree: usize,
    pub vacuous: bool,
}

pub fn correlation_degree(p: &Polynomial, q: &Polynomial) -> Result<CorrelationDegree, PolyError> {
    let r = &p.derivative() - &q.derivative();
    if r.is_zero() {
        return Err(PolyError::DegeneratePair);
    }
    let mut degree = 0usize;
    for (factor, mult) in yun_squarefree(&r) {
        if factor.degree().map_or(true, |d| d == 0) {
            continue;
        }
        if count_nonzero_real_roots(&factor) > 0 {
            degree = degree.max(mult);
        }
    }
    if degree == 0 {
        Ok(CorrelationDegree {
            degree: 1,
            vacuous: true,
        })
    } else {
        Ok(CorrelationDegree {
            degree,
            vacuous: false,
        })
    }
}

/// Multiplicity of the exact rational point `t0` as a root of `r`
/// (0 when it is not a root).
pub fn multiplicity_at(r: &Polynomial, t0: &Rat) -> usize {
    let mut mult = 0;
    let mut cur = r.clone();
    while !cur.is_zero() && cur.eval_rat(t0).is_zero() {
        mult += 1;
        cur = cur.derivative();
    }
    mult
}

/// Outcome of the admissibility test behind the exponent threshold
/// `r > d/(d+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub correlation_degree: usize,
    /// Correlation degree fell back to the d = 1 convention (no nonzero real
    /// root of P' − Q').
    pub degree_convention_applied: bool,
    /// Exact rational d/(d+1).
    #[serde(serialize_with = "serialize_rat")]
    pub r_threshold: Rat,
    pub failure_reason: Option<String>,
}

fn serialize_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn admissibility(p: &Polynomial, q: &Polynomial) -> Result<AdmissibilityReport, PolyError> {
    let pp = degree_profile(p)?;
    let qp = degree_profile(q)?;
    let cd = correlation_degree(p, q)?;
    let d = cd.degree;
    let threshold = Rat::new(BigInt::from(d as i64), BigInt::from(d as i64 + 1));

    let mut reasons = Vec::new();
    if !pp.constant_term_zero || !qp.constant_term_zero {
        reasons.push("nonzero constant term".to_string());
    }
    match (pp.trailing, qp.trailing) {
        (Some(e1), Some(e2)) if e1 == e2 => reasons.push("equal trailing degrees".to_string()),
        (None, _) | (_, None) => reasons.push("constant polynomial".to_string()),
        _ => {}
    }
    if pp.leading == qp.leading {
        reasons.push("equal leading degrees".to_string());
    }

    Ok(AdmissibilityReport {
        admissible: reasons.is_empty(),
        correlation_degree: d,
        degree_convention_applied: cd.vacuous,
        r_threshold: threshold,
        failure_reason: if reasons.is_empty() {
            None
        } else {
            Some(reasons.join("; "))
        },
    })
}

/// Recenter: `P(t + t0) − P(t0)`, exact binomial expansion. The result has
/// zero constant term by construction.
pub fn recenter(p: &Polynomial, t0: &Rat) -> Polynomial {
    // Horner in polynomial arithmetic: fold acc -> acc*(t + t0) + c_k.
    let shift = Polynomial::new(vec![t0.clone(), Rat::one()]);
    let mut acc = Polynomial::zero();
    for c in p.coeffs.iter().rev() {
        acc = &(&acc * &shift) + &Polynomial::monomial(0, c.clone());
    }
    let const_term = Polynomial::monomial(0, p.eval_rat(t0));
    &acc - &const_term
}

/// Record of the trailing-coefficient normalization `P -> P / a_e`, kept so
/// numerical consumers can undo the scaling (it rescales the f-argument in
/// the operator).
#[derive(Debug, Clone)]
pub struct TrailingNormalization {
    pub scale: Rat,
    pub normalized: Polynomial,
}

pub fn normalize_trailing(p: &Polynomial) -> Result<TrailingNormalization, PolyError> {
    let prof = degree_profile(p)?;
    let e = prof.trailing.ok_or(PolyError::ZeroPolynomial)?;
    let a_e = p.coeff(e);
    let inv = Rat::one() / &a_e;
    Ok(TrailingNormalization {
        scale: a_e,
        normalized: p.scale(&inv),
    })
}

/// Error part `P_ε = P − t^a` where `a` is the trailing degree; requires
/// trailing coefficient 1 unless `auto_normalize` is set.
pub fn error_part(p: &Polynomial, auto_normalize: bool) -> Result<Polynomial, PolyError> {
    let prof = degree_profile(p)?;
    let e = prof.trailing.ok_or(PolyError::ZeroPolynomial)?;
    let c = p.coeff(e);
    let base = if c.is_one() {
        p.clone()
    } else if auto_normalize {
        normalize_trailing(p)?.normalized
    } else {
        return Err(PolyError::TrailingCoefficientNotOne {
            found: c.to_string(),
        });
    };
    Ok(&base - &Polynomial::monomial(e, Rat::one()))
}

/// Unit-scale form of a trailing-normalized polynomial at dyadic scale `j`:
/// `2^{aj} P(2^{-j} t) = t^a + ε_P(t)` with `ε_P(t) = 2^{aj} P_ε(2^{-j} t)`,
/// whose coefficients `a_k 2^{(a-k)j}` shrink as j grows. Exact.
pub fn unit_rescale(p: &Polynomial, j: i32) -> Result<Polynomial, PolyError> {
    let prof = degree_profile(p)?;
    let e = prof.trailing.ok_or(PolyError::ZeroPolynomial)?;
    if !p.coeff(e).is_one() {
        return Err(PolyError::TrailingCoefficientNotOne {
            found: p.coeff(e).to_string(),
        });
    }
    let half = pow2_rat(-j);
    let scaled = p.scale_argument(&half).scale(&pow2_rat(e as i64 as i32 * j));
    Ok(scaled)
}

/// Exact rational power of two 2^k (k may be negative).
pub fn pow2_rat(k: i32) -> Rat {
    let two = BigInt::from(2);
    if k >= 0 {
        Rat::from_integer(two.pow(k as u32))
    } else {
        Rat::new(BigInt::one(), two.pow((-k) as u32))
    }
}
