//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Tolerances and time limits are fixed here.

use std::io::Write as _;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use ihat::algebra::{self, FactorList, InversionSettings};
use ihat::gengamma::{self, GenGammaParams};
use ihat::hfun::{self, ContourSpec, HParams};
use ihat::ihat::{self as ih, GammaPower, IParams, IhatFactor, IhatSpec, InnerArgument, InnerEntry, Power, Prefactor, UiParams, YEntry, YParams};
use ihat::oracle::{self, CombineOp, TabulatedCdf};
use ihat::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn gg(a: f64, b: f64, g: f64, m: f64) -> GenGammaParams {
    GenGammaParams::new(a, b, g, m).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

/// `Ok` with a summary when `worst <= limit`.
fn within(what: &str, worst: f64, limit: f64) -> Check {
    let msg = format!("{what} {worst:.3e} (limit {limit:.0e})");
    if worst <= limit {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn both(a: Check, b: Check) -> Check {
    match (a, b) {
        (Ok(x), Ok(y)) => Ok(format!("{x}; {y}")),
        (Ok(x), Err(y)) | (Err(x), Ok(y)) | (Err(x), Err(y)) => Err(format!("{x}; {y}")),
    }
}

fn exponential_h() -> Check {
    let h = HParams::new(1, 0, vec![], vec![(0.0, 1.0)]).unwrap();
    let contour = hfun::select_contour(&h).map_err(|e| e.to_string())?;
    let mut worst = 0f64;
    for z in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let v = hfun::eval_h(&h, c(z, 0.0), &contour).map_err(|e| e.to_string())?;
        worst = worst.max((v.value.re - (-z).exp()).abs());
    }
    within("max abs error", worst, 1e-8)
}

const STRIP_T: [f64; 10] = [-4.0, -3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0, 4.0];

// mpmath, 30 digits, at s = 0.7 + it
const GAMMA_RATIO: [(f64, f64); 10] = [
    (-0.010774412982925063314, 0.016127435995972462478),
    (-0.0066987929613555529767, 0.050612524896132044779),
    (0.039284114326143610407, 0.13066810340551594711),
    (0.24329326390543944089, 0.24237727179909420928),
    (0.43883807050810502592, 0.20348156494808097211),
    (0.43883807050810502592, -0.20348156494808097211),
    (0.24329326390543944089, -0.24237727179909420928),
    (0.039284114326143610407, -0.13066810340551594711),
    (-0.0066987929613555529767, -0.050612524896132044779),
    (-0.010774412982925063314, -0.016127435995972462478),
];

// mpmath gammainc(0.3 + s, 0.8) gammainc(0.6 - 0.5 s, 1.5) at s = 0.7 + it
const UPPER_INCOMPLETE: [(f64, f64); 10] = [
    (0.0075634217642381442786, 0.0059695166285846246806),
    (0.018258944941647538884, 0.0022705837515622741747),
    (0.033347748209596528585, -0.0022369991261950683686),
    (0.048107105714938336092, -0.0033157436710259815626),
    (0.052777471693117852906, -0.0020246200381307573075),
    (0.052777471693117852906, 0.0020246200381307573075),
    (0.048107105714938336092, 0.0033157436710259815626),
    (0.033347748209596528585, 0.0022369991261950683686),
    (0.018258944941647538884, -0.0022705837515622741747),
    (0.0075634217642381442786, -0.0059695166285846246806),
];

// mpmath 2^(1 + s) hyperu(1.5, 2 + s, 2) at s = 0.3 + it
const Y_SINGLE: [(f64, f64); 10] = [
    (-0.082913727905070215331, 0.37889789318279560074),
    (-0.49891781297416579738, 0.16073230678563959092),
    (-0.45548012540285248999, -0.47226457330350504654),
    (0.28713758673677183291, -0.69556754464912271689),
    (0.64681917868803690234, -0.43392139701051422449),
    (0.64681917868803690234, 0.43392139701051422449),
    (0.28713758673677183291, 0.69556754464912271689),
    (-0.45548012540285248999, 0.47226457330350504654),
    (-0.49891781297416579738, -0.16073230678563959092),
    (-0.082913727905070215331, -0.37889789318279560074),
];

// mpmath hyperu(a, b, z)
const TRICOMI: [(f64, f64, f64, f64); 10] = [
    (0.5, 0.5, 0.5, 0.92727090145924987308),
    (1.2, 0.3, 1.0, 0.35834261191669678917),
    (2.5, 1.5, 3.0, 0.023406810120540053899),
    (0.7, 2.2, 0.4, 2.9830654456810025767),
    (3.0, 0.5, 7.0, 0.00101520796823468082),
    (1.0, -0.5, 2.0, 0.24730255620295719053),
    (0.3, 1.0, 0.1, 1.5890504352363906005),
    (1.7, 2.9, 5.0, 0.068548853248378438083),
    (0.9, 0.1, 12.0, 0.09489921614447218669),
    (2.2, 3.7, 1.3, 0.90280147336085862563),
];

fn worst_on_line(spec: &IhatSpec, c0: f64, refs: &[(f64, f64); 10]) -> Result<f64, String> {
    let mut worst = 0f64;
    for (t, &(re, im)) in STRIP_T.iter().zip(refs) {
        let v = ih::upsilon(spec, c(c0, *t)).map_err(|e| e.to_string())?;
        worst = worst.max(rel(v, c(re, im)));
    }
    Ok(worst)
}

fn reductions() -> Check {
    let mut worst = 0f64;
    let mut parts = Vec::new();
    let mut note = |name: &str, w: f64| {
        parts.push(format!("{name} {w:.1e}"));
        worst = worst.max(w);
    };

    let gamma = ih::ihat_from_gamma_product(&[
        GammaPower { shift: 0.5, coef: 1.0, power: 1.0 },
        GammaPower { shift: 1.5, coef: -0.5, power: 1.0 },
        GammaPower { shift: 2.0, coef: 1.0, power: -1.0 },
    ])
    .unwrap();
    note("gamma", worst_on_line(&gamma, 0.7, &GAMMA_RATIO)?);

    let ui = UiParams { m: 1, n: 1, upper: vec![(0.4, 0.5, 1.5)], lower: vec![(0.3, 1.0, 0.8)] };
    note("upper-incomplete", worst_on_line(&ih::ihat_from_upper_incomplete(&ui).unwrap(), 0.7, &UPPER_INCOMPLETE)?);

    let mut w = 0f64;
    for (a, b, z, want) in TRICOMI {
        let got = ih::tricomi_u(a, b, z).map_err(|e| e.to_string())?;
        w = w.max((got - want).abs() / want);
    }
    note("tricomi", w);

    // unit exponents: the plain H kernel
    let ip = IParams {
        m: 1,
        n: 1,
        upper: vec![(0.3, 1.0, 1.0), (0.6, 0.5, 1.0)],
        lower: vec![(0.2, 1.0, 1.0), (0.4, 2.0, 1.0)],
    };
    let h = HParams::new(1, 1, vec![(0.3, 1.0), (0.6, 0.5)], vec![(0.2, 1.0), (0.4, 2.0)]).unwrap();
    let spec = ih::ihat_from_i(&ip).unwrap();
    let mut w = 0f64;
    for t in STRIP_T {
        let s = c(0.25, t);
        let got = ih::upsilon(&spec, s).map_err(|e| e.to_string())?;
        let want = hfun::h_integrand(&h, s).map_err(|e| e.to_string())?;
        w = w.max(rel(got, want));
    }
    note("I", w);

    let y = YParams { m: 1, n: 0, upper: vec![], lower: vec![YEntry { shift: 0.5, slope: 1.0, base: 2.0, order: 1.5 }] };
    note("Y", worst_on_line(&ih::ihat_from_y(&y).unwrap(), 0.3, &Y_SINGLE)?);

    within(&format!("[{}] worst relative error", parts.join(", ")), worst, 1e-7)
}

const SHIFTED: [(f64, f64, f64, f64); 5] =
    [(2.0, 1.0, 2.0, 0.5), (0.5, 2.0, 1.5, 1.0), (1.0, 1.0, 1.0, 1.0), (2.5, 0.5, 0.5, 2.0), (1.5, 3.0, 2.5, 0.3)];

fn density_via_ihat() -> Check {
    let mut worst = 0f64;
    for (a, b, g, m) in SHIFTED {
        let p = gg(a, b, g, m);
        // bulk of the law: up to a few scale lengths past the mean
        let span = 2.0 * (p.mean() - m) + 4.0 * p.variance().sqrt();
        for k in 0..20 {
            let x = m + span * (k as f64 + 0.5) / 20.0;
            let v = gengamma::pdf_via_ihat(&p, x).map_err(|e| format!("{p:?} at {x}: {e}"))?;
            worst = worst.max((v - gengamma::pdf(&p, x)).abs());
        }
    }
    within("max abs error", worst, 1e-6)
}

fn transforms() -> Check {
    let quad_tol = 1e-13;
    let mut worst_m = 0f64;
    for (a, b, g, m) in SHIFTED {
        let p = gg(a, b, g, m);
        for s in [1.0, 1.5, 2.0, 3.0] {
            let want = oracle::tanh_sinh_to_infinity(|y| (m + y).powf(s - 1.0) * gengamma::pdf_excess(&p, y), 0.0, quad_tol)
                .map_err(|e| e.to_string())?;
            for got in [gengamma::mellin_pdf(&p, c(s, 0.0)), gengamma::mellin_pdf_h(&p, c(s, 0.0))] {
                let got = got.map_err(|e| format!("{p:?} s={s}: {e}"))?;
                worst_m = worst_m.max(rel(got, c(want, 0.0)));
            }
        }
    }
    let mut worst_l = 0f64;
    for (a, b, g, m) in SHIFTED {
        let p = gg(a, b, g, m);
        for s in [0.1, 1.0, 10.0] {
            let want = (-s * m).exp()
                * oracle::tanh_sinh_to_infinity(|y| (-s * y).exp() * gengamma::pdf_excess(&p, y), 0.0, quad_tol)
                    .map_err(|e| e.to_string())?;
            for got in [gengamma::laplace_pdf(&p, c(s, 0.0)), gengamma::laplace_pdf_h(&p, c(s, 0.0))] {
                let got = got.map_err(|e| format!("{p:?} s={s}: {e}"))?;
                worst_l = worst_l.max(rel(got, c(want, 0.0)));
            }
        }
    }
    both(within("Mellin worst relative", worst_m, 1e-5), within("Laplace worst relative", worst_l, 1e-5))
}

/// Sup distance between `n` samples of the combination and its inverted
/// distribution function tabulated on `xs`.
fn ks_against(fs: &FactorList, op: CombineOp, xs: &[f64], cdf: impl Fn(f64) -> ihat::Result<f64>) -> Result<f64, String> {
    let fs_grid: Vec<f64> = xs.iter().map(|&x| cdf(x)).collect::<ihat::Result<_>>().map_err(|e| e.to_string())?;
    let table = TabulatedCdf::new(xs.to_vec(), fs_grid).map_err(|e| e.to_string())?;
    let samples = oracle::mc_combine(fs, op, None, 42, 1_000_000).map_err(|e| e.to_string())?;
    Ok(oracle::ks_distance(&samples, |x| table.eval(x)))
}

/// `start + 10^u` for `u` evenly spaced in `[lo, hi]`.
fn log_grid(start: f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| start + 10f64.powf(lo + (hi - lo) * i as f64 / (n - 1) as f64)).collect()
}

fn products() -> Check {
    let p = gg(1.0, 1.0, 1.0, 1.0);
    let fs = FactorList::new(vec![p, p]).unwrap();
    let inv = InversionSettings::with_tolerance(1e-9);
    let f = |y: f64| gengamma::pdf_excess(&p, y);
    let mut worst = 0f64;
    for k in 0..30 {
        let x = 1.05 + (12.0 - 1.05) * k as f64 / 29.0;
        let got = algebra::product_pdf(&fs, x, &inv).map_err(|e| format!("x={x}: {e}"))?;
        let want = oracle::convolve_multiplicative(f, f, 1.0, 1.0, x, 1e-12).map_err(|e| e.to_string())?;
        worst = worst.max((got - want).abs());
    }
    let xs = log_grid(1.0, -4.0, 2.5, 240);
    let ks = ks_against(&fs, CombineOp::Product, &xs, |x| algebra::product_cdf(&fs, x, &inv))?;
    both(within("max abs gap to convolution", worst, 1e-5), within("KS vs 1e6 draws", ks, 0.005))
}

fn sums() -> Check {
    let inv = InversionSettings::with_tolerance(1e-9);
    let p = gg(1.0, 1.0, 1.0, 1.0);
    let pair = FactorList::new(vec![p, p]).unwrap();
    let mut erlang = 0f64;
    for k in 0..30 {
        let x = 2.0 + 0.4 * k as f64 + 0.05;
        let y = x - 2.0;
        let got = algebra::sum_pdf(&pair, x, &inv).map_err(|e| format!("x={x}: {e}"))?;
        erlang = erlang.max((got - y * (-y).exp()).abs());
    }

    let mixed = [gengamma::exponential(1.5).unwrap(), gengamma::weibull(1.7, 1.2).unwrap(), gengamma::rayleigh(0.8).unwrap()];
    let fs = FactorList::new(mixed.to_vec()).unwrap();
    let pdf = |i: usize| move |y: f64| gengamma::pdf_excess(&mixed[i], y);
    let mut worst = 0f64;
    for k in 0..30 {
        let x = 0.1 + 0.25 * k as f64;
        let got = algebra::sum_pdf(&fs, x, &inv).map_err(|e| format!("x={x}: {e}"))?;
        let inner = |t: f64| oracle::convolve_additive(pdf(0), pdf(1), 0.0, 0.0, t, 1e-13).unwrap_or(f64::NAN);
        let want = oracle::convolve_additive(inner, pdf(2), 0.0, 0.0, x, 1e-11).map_err(|e| e.to_string())?;
        worst = worst.max((got - want).abs());
    }
    let xs = log_grid(0.0, -3.0, 1.4, 240);
    let ks = ks_against(&fs, CombineOp::Sum, &xs, |x| algebra::sum_cdf(&fs, x, &inv))?;
    both(
        within("shifted Erlang max abs error", erlang, 1e-6),
        both(within("three-factor gap to convolution", worst, 1e-5), within("KS vs 1e6 draws", ks, 0.005)),
    )
}

fn scaling() -> Check {
    let cases = [
        ((2.0, 1.0, 2.0, 0.5), 3.0),
        ((0.5, 2.0, 1.5, 1.0), 0.2),
        ((1.0, 1.0, 1.0, 0.0), 7.5),
        ((2.5, 0.5, 0.5, 2.0), 1.3),
        ((1.5, 3.0, 2.5, 0.3), 0.01),
        ((3.0, 0.7, 1.0, 0.0), 42.0),
        ((0.8, 1.1, 0.6, 4.0), 0.5),
        ((4.0, 2.0, 3.0, 0.1), 2.0),
        ((1.2, 0.3, 1.8, 10.0), 0.9),
        ((0.6, 5.0, 0.9, 0.0), 100.0),
    ];
    let mut worst = 0f64;
    for ((a, b, g, m), big_a) in cases {
        let p = gg(a, b, g, m);
        let q = gengamma::scale(&p, big_a).unwrap();
        for k in 1..=20 {
            let x = big_a * (m + 0.2 * k as f64 * (p.mean() - m + 1.0));
            let lhs = gengamma::pdf(&q, x) * big_a;
            let rhs = gengamma::pdf(&p, x / big_a);
            worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1.0));
        }
    }
    let fs = FactorList::new(vec![gg(1.0, 1.0, 1.0, 0.5), gg(2.0, 1.0, 2.0, 0.0), gg(0.7, 2.0, 1.0, 0.2)]).unwrap();
    let coeffs = [0.5, 2.0, 1.5];
    let scaled = FactorList::new(fs.items().iter().zip(coeffs).map(|(p, a)| gengamma::scale(p, a).unwrap()).collect()).unwrap();
    let inv = InversionSettings::with_tolerance(1e-8);
    let mut identical = true;
    for k in 0..10 {
        let x = 1.0 + 0.7 * k as f64;
        let a = algebra::linear_combination_pdf(&coeffs, &fs, x, &inv).map_err(|e| e.to_string())?;
        let b = algebra::sum_pdf(&scaled, x, &inv).map_err(|e| e.to_string())?;
        identical &= a.to_bits() == b.to_bits();
    }
    let bits = if identical { Ok("linear combination bit-identical".to_string()) } else { Err("linear combination differs".to_string()) };
    both(within("scaling worst relative", worst, 1e-12), bits)
}

fn normalization() -> Check {
    let vals = [0.5, 1.0, 2.5];
    let mut closed = 0f64;
    for a in vals {
        for b in vals {
            for g in vals {
                for m in [0.0, 1.0, 10.0] {
                    let p = gg(a, b, g, m);
                    let mass = algebra::mass_of_excess(|y| Ok(gengamma::pdf_excess(&p, y)), f64::INFINITY, 1e-11)
                        .map_err(|e| e.to_string())?;
                    closed = closed.max((mass - 1.0).abs());
                }
            }
        }
    }
    // inverted densities at tolerance 1e-6, each triple paired with a shifted
    // unit exponential and the operation taken in turn
    let tol = 1e-6;
    let inv = InversionSettings::with_tolerance(tol);
    let partner = gg(1.0, 1.0, 1.0, 1.0);
    let mut inverted = 0f64;
    let mut k = 0;
    for a in vals {
        for b in vals {
            for g in vals {
                let fs = FactorList::new(vec![gg(a, b, g, 0.0), partner]).unwrap();
                let mass = match k % 3 {
                    0 => algebra::mass_of(|x| algebra::product_pdf(&fs, x, &inv), 0.0, f64::INFINITY, tol),
                    1 => algebra::mass_of(|x| algebra::sum_pdf(&fs, x, &inv), 1.0, f64::INFINITY, tol),
                    _ => algebra::mass_of(|x| algebra::quotient_pdf(&fs, x, &inv), 0.0, f64::INFINITY, tol),
                }
                .map_err(|e| format!("({a}, {b}, {g}) op {}: {e}", k % 3))?;
                inverted = inverted.max((mass - 1.0).abs());
                k += 1;
            }
        }
    }
    both(within("closed form", closed, 1e-8), within("inverted (tol 1e-6)", inverted, 10.0 * tol))
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// `Γ(b + B s, x)` as a (2,1,3,2) entry list with every coefficient doubled
/// and the argument squared, which `H(z; A) = 2 H(z²; 2A)` makes equal to the
/// closed form but sends through the general contour route.
fn doubled(b: f64, big_b: f64, x: f64, power: f64) -> IhatFactor {
    let upper = vec![InnerEntry::new(0.0, 0.0, 0.0), InnerEntry::new(1.0, 0.0, 2.0), InnerEntry::new(1.0, 0.0, 0.0)];
    let lower = vec![InnerEntry::new(0.0, 0.0, 2.0), InnerEntry::new(b, big_b, 2.0)];
    IhatFactor {
        prefactor: Prefactor { eta: power * 2f64.ln(), ..Prefactor::UNIT },
        argument: InnerArgument::constant(x * x),
        power: Power { rho: 0.0, sigma: power },
        ..IhatFactor::inner(2, 1, upper, lower)
    }
}

fn general_indices() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let contour = ContourSpec::default().with_tol(1e-10, 1e-10);
    let mut worst = 0f64;
    for _ in 0..10 {
        let n = 1 + (rng.next_u32() % 2) as usize;
        let mut closed = Vec::new();
        let mut general = Vec::new();
        for _ in 0..n {
            let (b, big_b, x) = (uniform(&mut rng, 0.3, 2.0), uniform(&mut rng, 0.2, 1.0), uniform(&mut rng, 0.3, 2.0));
            let power = [1.0, 2.0, -1.0][(rng.next_u32() % 3) as usize];
            let pre = Prefactor {
                alpha: 0.0,
                beta: uniform(&mut rng, 0.5, 2.0),
                lambda: uniform(&mut rng, -0.5, 0.5),
                theta: uniform(&mut rng, -1.0, 1.0),
                zeta: uniform(&mut rng, -0.3, 0.3),
                eta: uniform(&mut rng, -0.5, 0.5),
            };
            let mut f = IhatFactor::upper_gamma_power(b, big_b, x, power);
            f.prefactor = pre;
            closed.push(f);
            let mut g = doubled(b, big_b, x, power);
            g.prefactor = Prefactor { eta: g.prefactor.eta + pre.eta, ..pre };
            general.push(g);
        }
        let closed = IhatSpec::new(closed).with_contour(contour);
        let general = IhatSpec::new(general).with_contour(contour);
        for _ in 0..10 {
            let s = c(uniform(&mut rng, -0.2, 1.5), uniform(&mut rng, -3.0, 3.0));
            let want = ih::upsilon(&closed, s).map_err(|e| e.to_string())?;
            let a = ih::upsilon_general(&general, s).map_err(|e| format!("s={s}: {e}"))?;
            let b = ih::upsilon(&general, s).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("upsilon and upsilon_general differ at s={s}"));
            }
            worst = worst.max(rel(a, want));
        }
    }
    within("general route vs closed form, worst relative", worst, 1e-8)
}

fn run_cli(config: &str, out: &std::path::Path) -> Result<Vec<u8>, String> {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ihat"))
        .args(["--out", out.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| e.to_string())?;
    child.stdin.take().unwrap().write_all(config.as_bytes()).map_err(|e| e.to_string())?;
    let status = child.wait_with_output().map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(String::from_utf8_lossy(&status.stderr).into_owned());
    }
    std::fs::read(out).map_err(|e| e.to_string())
}

fn cli_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let exp = r#"{"alpha": 1, "beta": 1, "gamma": 1, "mu": 1}"#;
    let jobs = [
        format!(r#"{{"op": "sample", "combine": "product", "factors": [{exp}, {exp}], "seed": 42, "samples": 20000}}"#),
        format!(r#"{{"op": "product", "factors": [{exp}, {exp}], "grid": {{"start": 1, "stop": 8, "points": 16}}, "seed": 42}}"#),
    ];
    for (i, job) in jobs.iter().enumerate() {
        let a = run_cli(job, &dir.path().join(format!("{i}a.csv")))?;
        let b = run_cli(job, &dir.path().join(format!("{i}b.csv")))?;
        if a != b {
            return Err(format!("job {i}: outputs differ"));
        }
    }
    Ok("sample and product outputs byte-identical".into())
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Check); 10] = [
        (1, "exponential H identity", 1, exponential_h),
        (2, "reduction suite", 30, reductions),
        (3, "density through the Î route", 60, density_via_ihat),
        (4, "Mellin and Laplace transforms", 60, transforms),
        (5, "products of two factors", 300, products),
        (6, "sums", 300, sums),
        (7, "scaling rule", 60, scaling),
        (8, "normalization sweep", 600, normalization),
        (9, "general inner indices", 60, general_indices),
        (10, "CLI determinism", 60, cli_determinism),
    ];
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let slow = took > Duration::from_secs(limit);
        let (ok, detail) = match result {
            Ok(d) => (!slow, d),
            Err(d) => (false, d),
        };
        let time = format!("{:.1}s{}", took.as_secs_f64(), if slow { format!(" over the {limit}s limit") } else { String::new() });
        println!("{} criterion {n:>2} {name}: {detail} [{time}]", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
