//! Square-free decomposition (Yun) and Sturm-sequence real root counting
//! over the rationals, plus exact root isolation used to seed Newton
//! refinement elsewhere.

use super::{Polynomial, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Quotient and remainder of exact polynomial division.
fn div_rem(num: &Polynomial, den: &Polynomial) -> (Polynomial, Polynomial) {
    assert!(!den.is_zero(), "division by the zero polynomial");
    let dd = den.degree().unwrap();
    let lead = den.leading_coeff().unwrap().clone();
    let mut rem = num.coeffs().to_vec();
    if rem.len() <= dd {
        return (Polynomial::zero(), num.clone());
    }
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = &rem[k] / &lead;
        if !c.is_zero() {
            quot[k - dd] = c.clone();
            for (i, b) in den.coeffs().iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = &rem[idx] - &(b * &c);
            }
        }
        rem[k] = Rat::zero();
    }
    (Polynomial::new(quot), Polynomial::new(rem))
}

fn make_monic(p: &Polynomial) -> Polynomial {
    match p.leading_coeff() {
        None => Polynomial::zero(),
        Some(l) => {
            let inv = Rat::one() / l;
            p.scale(&inv)
        }
    }
}

/// Monic gcd over Q by the Euclidean algorithm with remainder normalization.
pub fn poly_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut f = make_monic(a);
    let mut g = make_monic(b);
    while !g.is_zero() {
        let (_, r) = div_rem(&f, &g);
        f = g;
        g = make_monic(&r);
    }
    f
}

/// Yun's square-free decomposition: returns pairs (factor, multiplicity)
/// with each factor square-free, monic, and pairwise coprime, such that the
/// input equals lc · Π factor^multiplicity.
pub fn yun_squarefree(p: &Polynomial) -> Vec<(Polynomial, usize)> {
    if p.is_zero() || p.degree() == Some(0) {
        return Vec::new();
    }
    let f = make_monic(p);
    let fp = f.derivative();
    let mut out = Vec::new();

    let g = poly_gcd(&f, &fp);
    if g.degree() == Some(0) {
        out.push((f, 1));
        return out;
    }
    let (mut c, _) = div_rem(&f, &g);
    let (fp_over_g, _) = div_rem(&fp, &g);
    let mut d = &fp_over_g - &c.derivative();
    let mut mult = 1usize;
    loop {
        let a = poly_gcd(&c, &d);
        if a.degree().map_or(false, |deg| deg > 0) {
            out.push((a.clone(), mult));
        }
        let (c_next, _) = div_rem(&c, &a);
        if c_next.degree() == Some(0) {
            break;
        }
        let (d_over_a, _) = div_rem(&d, &a);
        d = &d_over_a - &c_next.derivative();
        c = c_next;
        mult += 1;
    }
    out
}

/// Rescale by a positive scalar only: Sturm chains tolerate positive
/// scaling but not the sign flips a monic normalization can introduce.
fn normalize_positive(p: &Polynomial) -> Polynomial {
    match p.leading_coeff() {
        None => Polynomial::zero(),
        Some(l) => {
            let inv = Rat::one() / l.abs();
            p.scale(&inv)
        }
    }
}

/// Sturm chain of p (works as a root counter when p is square-free).
fn sturm_chain(p: &Polynomial) -> Vec<Polynomial> {
    let mut chain = vec![normalize_positive(p), normalize_positive(&p.derivative())];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = div_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(normalize_positive(&(-&r)));
    }
    chain
}

fn sign_at(p: &Polynomial, x: &Rat) -> i32 {
    let v = p.eval_rat(x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of p at -∞ / +∞ from the leading coefficient and degree parity.
fn sign_at_inf(p: &Polynomial, positive_inf: bool) -> i32 {
    match (p.degree(), p.leading_coeff()) {
        (None, _) | (_, None) => 0,
        (Some(d), Some(l)) => {
            let s = if l.is_positive() { 1 } else { -1 };
            if positive_inf || d % 2 == 0 {
                s
            } else {
                -s
            }
        }
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut last = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of a square-free polynomial.
pub fn count_real_roots(p: &Polynomial) -> usize {
    if p.degree().map_or(true, |d| d == 0) {
        return 0;
    }
    let chain = sturm_chain(p);
    let v_neg = variations(chain.iter().map(|q| sign_at_inf(q, false)));
    let v_pos = variations(chain.iter().map(|q| sign_at_inf(q, true)));
    v_neg - v_pos
}

/// Number of distinct real roots of a square-free polynomial, excluding 0.
pub fn count_nonzero_real_roots(p: &Polynomial) -> usize {
    let total = count_real_roots(p);
    if p.coeff(0).is_zero() {
        total.saturating_sub(1)
    } else {
        total
    }
}

/// Distinct real roots in `(lo, hi]` of a square-free polynomial.
fn count_roots_in(chain: &[Polynomial], lo: &Rat, hi: &Rat) -> usize {
    let v_lo = variations(chain.iter().map(|q| sign_at(q, lo)));
    let v_hi = variations(chain.iter().map(|q| sign_at(q, hi)));
    v_lo - v_hi
}

/// Isolate all real roots of `p` inside `(lo, hi]` down to intervals no wider
/// than `width`. `p` need not be square-free; isolation runs on its
/// square-free part. Returned intervals are sorted and each contains exactly
/// one root.
pub fn isolate_real_roots(p: &Polynomial, lo: &Rat, hi: &Rat, width: &Rat) -> Vec<(Rat, Rat)> {
    if p.degree().map_or(true, |d| d == 0) {
        return Vec::new();
    }
    let g = poly_gcd(p, &p.derivative());
    let sf = if g.degree() == Some(0) {
        make_monic(p)
    } else {
        let (q, _) = div_rem(p, &g);
        make_monic(&q)
    };
    let chain = sturm_chain(&sf);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    let two = Rat::from_integer(BigInt::from(2));
    while let Some((a, b)) = stack.pop() {
        let n = count_roots_in(&chain, &a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 && (&b - &a) <= *width {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / &two;
        // a root exactly at the midpoint belongs to the left half-open piece
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse_polynomial;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn yun_on_paper_jacobian_factor() {
        // 6t(t^2-1)^2 = 6 t (t-1)^2 (t+1)^2
        let p = parse_polynomial("6t^5 - 12t^3 + 6t").unwrap();
        let factors = yun_squarefree(&p);
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0].0, parse_polynomial("t").unwrap());
        assert_eq!(factors[0].1, 1);
        assert_eq!(factors[1].0, parse_polynomial("t^2 - 1").unwrap());
        assert_eq!(factors[1].1, 2);
    }

    #[test]
    fn sturm_counts_roots() {
        let p = parse_polynomial("t^2 - 2").unwrap();
        assert_eq!(count_real_roots(&p), 2);
        assert_eq!(count_nonzero_real_roots(&p), 2);

        let p = parse_polynomial("t^2 + 1").unwrap();
        assert_eq!(count_real_roots(&p), 0);

        let p = parse_polynomial("t^3 - t").unwrap();
        assert_eq!(count_real_roots(&p), 3);
        assert_eq!(count_nonzero_real_roots(&p), 2);

        let p = parse_polynomial("t").unwrap();
        assert_eq!(count_nonzero_real_roots(&p), 0);
    }

    #[test]
    fn isolation_brackets_each_root() {
        let p = parse_polynomial("t^3 - t").unwrap(); // roots -1, 0, 1
        let ivs = isolate_real_roots(&p, &rat(-4, 1), &rat(4, 1), &rat(1, 64));
        assert_eq!(ivs.len(), 3);
        for (lo, hi) in &ivs {
            assert!(&(hi - lo) <= &rat(1, 64));
        }
        let mids: Vec<f64> = ivs
            .iter()
            .map(|(lo, hi)| {
                ((lo + hi) / Rat::from_integer(BigInt::from(2)))
                    .to_string()
                    .parse::<f64>()
                    .unwrap_or_else(|_| {
                        use num_traits::ToPrimitive;
                        ((lo + hi) / Rat::from_integer(BigInt::from(2))).to_f64().unwrap()
                    })
            })
            .collect();
        assert!((mids[0] + 1.0).abs() < 0.02);
        assert!(mids[1].abs() < 0.02);
        assert!((mids[2] - 1.0).abs() < 0.02);
    }

    #[test]
    fn isolation_with_repeated_roots() {
        // (t-1)^2 (t+2): square-free part has roots 1 and -2
        let p = parse_polynomial("t^3 - 3t + 2").unwrap();
        let ivs = isolate_real_roots(&p, &rat(-8, 1), &rat(8, 1), &rat(1, 128));
        assert_eq!(ivs.len(), 2);
    }
}
