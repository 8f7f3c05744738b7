// scratch measurement harness (deleted before release)
use bht_core::kernels::*;
use bht_core::polyalg::parse_polynomial;
use bht_core::pvquad;
use bht_core::testfuncs::TestFunction;
use std::time::Instant;

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    match which.as_str() {
        "phi" => phi_profile(),
        "phi2" => phi_profile2(),
        "smooth" => smoothness(),
        "horner" => horner(),
        "oracle" => oracle(),
        "bjm" => bjm(),
        _ => println!("phi|smooth|horner|oracle|bjm"),
    }
}

fn phi_profile() {
    let cutoff = make_freq_cutoff(SamplingSpec::default()).unwrap();
    let samples: Vec<(f64, num_complex::Complex64)> = cutoff.time_samples().collect();
    let peak = samples.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    println!("peak |Phi| = {peak:.6e}");
    for target in [0.0, 1.0, 2.0, 4.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0, 128.0, 512.0, 1000.0] {
        let (x, v) = samples
            .iter()
            .min_by(|a, b| (a.0 - target).abs().total_cmp(&(b.0 - target).abs()))
            .unwrap();
        println!(
            "x={x:8.2}  |Phi|={:.3e}  weighted8={:.3e}",
            v.norm(),
            v.norm() * (1.0 + x.abs()).powi(8)
        );
    }
    let wmax_8 = samples
        .iter()
        .filter(|(x, _)| x.abs() <= 8.0)
        .map(|(x, v)| v.norm() * (1.0 + x.abs()).powi(8))
        .fold(0.0, f64::max);
    for lo in [8.0, 12.0, 16.0, 24.0, 32.0] {
        let t = samples
            .iter()
            .filter(|(x, _)| x.abs() >= lo && x.abs() <= 2.0 * lo)
            .map(|(x, v)| v.norm() * (1.0 + x.abs()).powi(8))
            .fold(0.0, f64::max);
        println!("weighted sup on {lo}<=|x|<={}: {t:.3e} (inner sup {wmax_8:.3e})", 2.0 * lo);
    }
}

fn smoothness() {
    let rho = make_rho();
    let bump = make_unit_bump();
    let cutoff = make_freq_cutoff(SamplingSpec::default()).unwrap();
    for h in [1.0 / 256.0, 1.0 / 512.0, 1.0 / 1024.0] {
        for (name, f) in [
            ("rho", &(|t| rho.eval(t)) as &dyn Fn(f64) -> f64),
            ("rho0", &|t| bump.eval(t)),
            ("phihat", &|t| cutoff.hat_eval(t)),
        ] {
            let mut maxes = [0.0f64; 4];
            for i in 0..4000 {
                let x = 0.3 + 1.9 * i as f64 / 3999.0;
                let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
                let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
                let d3 = (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h))
                    / (2.0 * h * h * h);
                let d4 = (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h)
                    + f(x - 2.0 * h))
                    / (h * h * h * h);
                for (k, d) in [d1, d2, d3, d4].iter().enumerate() {
                    maxes[k] = maxes[k].max(d.abs());
                }
            }
            println!("h=1/{:.0} {name}: {maxes:?}", 1.0 / h);
        }
    }
}

fn horner() {
    let polys = [
        parse_polynomial("t^6").unwrap(),
        parse_polynomial("3t^4 - 3t^2").unwrap(),
        parse_polynomial("t^2 - 3t").unwrap(),
        parse_polynomial("1/3*t^5 - 7/2*t^3 + t").unwrap(),
    ];
    let mut worst = 0.0f64;
    for p in &polys {
        let cs = p.to_f64_coeffs();
        for i in 0..=2000 {
            let t = -2.5 + 5.0 * (i as f64) / 2000.0;
            let horner = p.eval_f64(t);
            let mut termwise = 0.0;
            let mut scale = 0.0;
            for (k, c) in cs.iter().enumerate() {
                let term = c * t.powi(k as i32);
                termwise += term;
                scale += term.abs();
            }
            if scale > 0.0 {
                worst = worst.max((horner - termwise).abs() / (f64::EPSILON * scale));
            }
        }
    }
    println!("worst |horner - termwise| in ulps of sum|terms|: {worst:.3}");
}

fn oracle() {
    let f = TestFunction::atom(1.0, 0.0, 0.0);
    let t0 = Instant::now();
    let v = pvquad::linear_multiplier_oracle(1.0, 2.0, &f, &f, 0.0).unwrap();
    println!("oracle value {:?} err {:.3e} in {:?}", v.value, v.abs_error, t0.elapsed());

    let p = parse_polynomial("t").unwrap();
    let q = parse_polynomial("2t").unwrap();
    let t0 = Instant::now();
    let b = pvquad::bht_truncated(&p, &q, &f, &f, 0.0, 1e-10, 64.0, &Default::default()).unwrap();
    println!("bht value {:?} err {:.3e} in {:?}", b.value, b.abs_error, t0.elapsed());
    println!("difference {:.3e}", (b.value - v.value).norm());

    let fm = TestFunction::atom(1.0, 0.5, 2.0);
    let t0 = Instant::now();
    let v = pvquad::linear_multiplier_oracle(1.0, 2.0, &fm, &f, 1.5).unwrap();
    let b = pvquad::bht_truncated(&p, &q, &fm, &f, 1.5, 1e-10, 64.0, &Default::default()).unwrap();
    println!(
        "modulated: diff {:.3e} (err {:.1e}/{:.1e}) in {:?}",
        (b.value - v.value).norm(),
        v.abs_error,
        b.abs_error,
        t0.elapsed()
    );
}

fn bjm() {
    use bht_core::normlab;
    let kernel = make_rho();
    let cutoff = make_freq_cutoff(SamplingSpec::default()).unwrap();
    let p = parse_polynomial("t").unwrap();
    let q = parse_polynomial("t^2").unwrap();
    let f = TestFunction::atom(1.0, 0.0, 0.0);
    for m in [2, 5, 9] {
        let t0 = Instant::now();
        let r = normlab::bjm_norm_ratio(&kernel, &cutoff, &p, &q, 9, m, &f, &f).unwrap();
        println!("j=9 m={m}: ratio {r:.6e} in {:?}", t0.elapsed());
    }
}

#[allow(dead_code)]
fn unused() {}

fn phi_profile2() {
    let cutoff = make_freq_cutoff(SamplingSpec::default()).unwrap();
    let samples: Vec<(f64, num_complex::Complex64)> = cutoff.time_samples().collect();
    let peak = samples.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    let w = |x: f64, v: f64| v * (1.0 + x.abs()).powi(8);
    for (lo, hi) in [(0.0, 32.0), (32.0, 64.0), (64.0, 96.0), (96.0, 128.0), (128.0, 192.0), (192.0, 256.0), (256.0, 384.0), (384.0, 512.0), (512.0, 1024.0)] {
        let wmax = samples.iter().filter(|(x, _)| x.abs() >= lo && x.abs() < hi)
            .map(|(x, v)| w(*x, v.norm())).fold(0.0, f64::max);
        let mmax = samples.iter().filter(|(x, _)| x.abs() >= lo && x.abs() < hi)
            .map(|(_, v)| v.norm()).fold(0.0, f64::max);
        println!("[{lo:6.0},{hi:6.0}): max|Phi|={mmax:.3e} ({:.3e} peak)  maxW={wmax:.3e}", mmax / peak);
    }
}
