//! The shifted generalized gamma distribution
//!
//! ```text
//! f(x) = γ β^{α/γ} / Γ(α/γ) · (x - μ)^{α-1} · exp(-β (x - μ)^γ),   x > μ
//! ```
//!
//! Everything is evaluated in log space. `β (X - μ)^γ` is a standard gamma
//! variable with shape `α/γ`, which gives the CDF and the sampler.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// unused when a dependent links std, whose inherent float methods win
#[allow(unused_imports)]
use num_traits::Float;
use rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hfun::{ContourSpec, GammaRatio, GammaTerm};
use crate::ihat::{self, IhatFactor, IhatSpec, InnerArgument, InnerEntry, Power, Prefactor};
use crate::quad;
use crate::special;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenGammaParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mu: f64,
}

impl GenGammaParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, mu: f64) -> Result<Self> {
        let p = GenGammaParams { alpha, beta, gamma, mu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !(positive(self.alpha) && positive(self.beta) && positive(self.gamma)) {
            return Err(Error::parameter("alpha, beta and gamma must be positive and finite"));
        }
        if !self.mu.is_finite() {
            return Err(Error::parameter("mu must be finite"));
        }
        Ok(())
    }

    /// Shape of the standard gamma variable `β (X - μ)^γ`.
    pub fn shape(&self) -> f64 {
        self.alpha / self.gamma
    }

    fn ln_norm(&self) -> f64 {
        self.gamma.ln() + self.shape() * self.beta.ln() - special::ln_gamma_real(self.shape())
    }

    /// `E[(X - μ)^k] = β^{-k/γ} Γ((α + k)/γ) / Γ(α/γ)` for real `k > -α`.
    pub fn raw_moment_unshifted(&self, k: f64) -> f64 {
        let a = self.shape();
        (special::ln_gamma_real((self.alpha + k) / self.gamma) - special::ln_gamma_real(a) - k / self.gamma * self.beta.ln())
            .exp()
    }

    pub fn mean(&self) -> f64 {
        self.mu + self.raw_moment_unshifted(1.0)
    }

    pub fn variance(&self) -> f64 {
        let m1 = self.raw_moment_unshifted(1.0);
        self.raw_moment_unshifted(2.0) - m1 * m1
    }
}

/// `log f(x)`; `-inf` off the support.
pub fn ln_pdf(p: &GenGammaParams, x: f64) -> f64 {
    ln_pdf_excess(p, x - p.mu)
}

/// Log density at `mu + y`, for callers that know `y` better than `mu + y`.
pub fn ln_pdf_excess(p: &GenGammaParams, y: f64) -> f64 {
    if y == 0.0 {
        // the limit from the right: finite only for alpha = 1
        return match p.alpha {
            a if a > 1.0 => f64::NEG_INFINITY,
            a if a < 1.0 => f64::INFINITY,
            _ => p.ln_norm(),
        };
    }
    if !(y > 0.0) {
        return f64::NEG_INFINITY;
    }
    let ly = y.ln();
    p.ln_norm() + (p.alpha - 1.0) * ly - p.beta * (p.gamma * ly).exp()
}

pub fn pdf(p: &GenGammaParams, x: f64) -> f64 {
    ln_pdf(p, x).exp()
}

pub fn pdf_excess(p: &GenGammaParams, y: f64) -> f64 {
    ln_pdf_excess(p, y).exp()
}

pub fn cdf(p: &GenGammaParams, x: f64) -> f64 {
    let y = x - p.mu;
    if !(y > 0.0) {
        return 0.0;
    }
    special::gamma_p(p.shape(), p.beta * y.powf(p.gamma))
}

/// `1 - cdf`, accurate in the upper tail.
pub fn sf(p: &GenGammaParams, x: f64) -> f64 {
    let y = x - p.mu;
    if !(y > 0.0) {
        return 1.0;
    }
    special::gamma_q(p.shape(), p.beta * y.powf(p.gamma))
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn positive_integer(s: Complex64) -> Option<u32> {
    let n = s.re.round();
    (s.im == 0.0 && (s.re - n).abs() < 1e-12 && n >= 1.0 && n < 1000.0).then_some(n as u32)
}

/// Mellin transform `E[X^{s-1}]`.
///
/// For `μ = 0` this is the closed form, defined for `Re s > 1 - α`. For
/// `μ > 0` the transform is entire and is computed from its defining
/// integral along a ray into the half plane where `(1 + y)^{s-1}` decays, so
/// the cost does not grow with `Im s`.
pub fn mellin_pdf(p: &GenGammaParams, s: Complex64) -> Result<Complex64> {
    if let Some(v) = mellin_unshifted(p, s)? {
        return Ok(v);
    }
    if s.im < 0.0 {
        return Ok(mellin_pdf(p, s.conj())?.conj());
    }
    // X = μ (1 + Y) with Y generalized gamma of rate β μ^γ
    let b = p.beta * p.mu.powf(p.gamma);
    let (a, g) = (p.alpha, p.gamma);
    let phi = if s.im > 0.0 { (0.25 * PI).min(0.4 * PI / g) } else { 0.0 };
    let kappa = b.powf(-1.0 / g).min(1.0 / s.im.abs());
    let ln_norm = g.ln() + p.shape() * b.ln() - special::ln_gamma_real(p.shape());
    let rot = Complex64::new(0.0, phi).exp();
    let sm1 = s - 1.0;
    let v = ray_integral(
        |r| {
            let y = rot * r;
            let ln_y = Complex64::new(r.ln(), phi);
            sm1 * ln_1p(y) + (a - 1.0) * ln_y - b * (ln_y * g).exp()
        },
        rot,
        kappa,
        a,
    )?;
    Ok(v * (ln_norm + sm1 * p.mu.ln()).exp())
}

/// `ln(1 + y)` without losing small `y` to the addition.
fn ln_1p(y: Complex64) -> Complex64 {
    let (a, b) = (y.re, y.im);
    Complex64::new(0.5 * (a * (2.0 + a) + b * b).ln_1p(), b.atan2(1.0 + a))
}

/// `∫_0^∞ e^{ln_g(r)} e^{iφ} dr` for an integrand with an `r^{α-1}` endpoint
/// singularity and fast decay beyond `r ≈ κ`.
fn ray_integral<F: Fn(f64) -> Complex64>(ln_g: F, rot: Complex64, kappa: f64, alpha: f64) -> Result<Complex64> {
    let m = (1.0 / alpha).max(1.0);
    let mut f = |w: f64| {
        let q = w / (1.0 - w);
        let r = kappa * q.powf(m);
        if !(r > 0.0 && r.is_finite()) {
            return Ok(ZERO);
        }
        let jac = kappa * m * q.powf(m - 1.0) / ((1.0 - w) * (1.0 - w));
        let v = ln_g(r).exp() * jac;
        Ok(if v.is_finite() { v } else { ZERO })
    };
    let est = quad::adaptive(&mut f, 0.0, 1.0, 1e-300, 1e-13, 400)?;
    Ok(est.value * rot)
}

/// `mellin_pdf` for `μ = 0`; `None` for shifted variables.
fn mellin_unshifted(p: &GenGammaParams, s: Complex64) -> Result<Option<Complex64>> {
    p.validate()?;
    if p.mu < 0.0 {
        return Err(Error::domain("the Mellin transform needs mu >= 0"));
    }
    if p.mu > 0.0 {
        return Ok(None);
    }
    if s.re <= 1.0 - p.alpha {
        return Err(Error::Strip { s });
    }
    let l = special::ln_gamma((s + p.alpha - 1.0) / p.gamma)? - special::ln_gamma_real(p.shape())
        - (s - 1.0) / p.gamma * p.beta.ln();
    Ok(Some(l.exp()))
}

/// `mellin_pdf` through the H-function form of the transform.
///
/// At positive integers that form is a 0·∞ limit, and the binomial expansion
/// of the moment is used instead.
pub fn mellin_pdf_h(p: &GenGammaParams, s: Complex64) -> Result<Complex64> {
    if let Some(v) = mellin_unshifted(p, s)? {
        return Ok(v);
    }
    if let Some(n) = positive_integer(s) {
        return Ok(real(shifted_moment(p, n - 1)));
    }
    let ratio = mellin_kernel(p, s);
    let ln_w = p.beta.ln() + p.gamma * p.mu.ln();
    let contour = ratio.contour_for_log_abs(ln_w).with_tol(1e-300, 1e-12);
    let h = ratio.invert_ln(real(ln_w), &contour)?;
    let ln_pre = p.gamma.ln() + p.shape() * p.beta.ln() + (s + p.alpha - 1.0) * p.mu.ln();
    Ok(ln_pre.exp() * h.value)
}

/// `E[X^k] = Σ_j C(k, j) μ^{k-j} E[(X - μ)^j]`.
fn shifted_moment(p: &GenGammaParams, k: u32) -> f64 {
    let mut binom = 1.0;
    let mut acc = 0.0;
    for j in 0..=k {
        acc += binom * p.mu.powi((k - j) as i32) * p.raw_moment_unshifted(j as f64);
        binom *= (k - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// `Γ(u) Γ(α - γu) Γ(1 - s - α + γu) / (Γ(α/γ) Γ(1 - s))`.
fn mellin_kernel(p: &GenGammaParams, s: Complex64) -> GammaRatio {
    let (a, g) = (p.alpha, p.gamma);
    GammaRatio {
        num: vec![
            GammaTerm::new(real(0.0), 1.0),
            GammaTerm::new(real(a), -g),
            GammaTerm::new(-s + (1.0 - a), g),
        ],
        den: vec![GammaTerm::new(real(a / g), 0.0), GammaTerm::new(-s + 1.0, 0.0)],
    }
}

/// One Î factor whose kernel is the Mellin transform of the density (`μ > 0`).
pub fn mellin_factor(p: &GenGammaParams) -> Result<IhatFactor> {
    p.validate()?;
    if !(p.mu > 0.0) {
        return Err(Error::domain("the Î representation needs mu > 0"));
    }
    let (a, b, g, mu) = (p.alpha, p.beta, p.gamma, p.mu);
    let upper = vec![InnerEntry::new(1.0 - a, 0.0, g), InnerEntry::new(a / g, 0.0, 0.0), InnerEntry::new(1.0, -1.0, 0.0)];
    let lower = vec![InnerEntry::new(0.0, 0.0, 1.0), InnerEntry::new(1.0 - a, -1.0, g)];
    let eta = g.ln() + (a / g) * b.ln() + (a - 1.0) * mu.ln();
    Ok(IhatFactor {
        prefactor: Prefactor { alpha: 0.0, beta: mu, lambda: 1.0, theta: 0.0, zeta: 0.0, eta },
        argument: InnerArgument::constant(b * mu.powf(g)),
        ..IhatFactor::inner(2, 1, upper, lower)
    })
}

/// One Î factor whose kernel is the Laplace transform of the density; the
/// Î argument is `e^{-x}`.
pub fn laplace_factor(p: &GenGammaParams) -> Result<IhatFactor> {
    p.validate()?;
    let (a, b, g) = (p.alpha, p.beta, p.gamma);
    let upper = vec![InnerEntry::new(1.0 - a, 0.0, g), InnerEntry::new(a / g, 0.0, 0.0), InnerEntry::new(1.0, 0.0, 0.0)];
    let lower = vec![InnerEntry::new(0.0, 0.0, 1.0), InnerEntry::new(1.0, 0.0, 0.0)];
    Ok(IhatFactor {
        // s^{-α} e^{-μ s} γ β^{α/γ}
        prefactor: Prefactor { alpha: 1.0, beta: 0.0, lambda: 0.0, theta: -a, zeta: -p.mu, eta: g.ln() + (a / g) * b.ln() },
        // (β^{-1/γ} s)^{-γ} = β s^{-γ}
        argument: InnerArgument { gamma: 0.0, big_gamma: b.powf(-1.0 / g), pi: -g, big_pi: 0.0 },
        power: Power { rho: 0.0, sigma: 1.0 },
        ..IhatFactor::inner(2, 1, upper, lower)
    })
}

/// Abscissa for inverting the Mellin-route Î. The transform is entire, so the
/// line only has to keep the inner families apart.
const IHAT_ABSCISSA: f64 = 0.5;

/// The density through the inverse Mellin transform of its H-function form.
pub fn pdf_via_ihat(p: &GenGammaParams, x: f64) -> Result<f64> {
    let contour = ContourSpec::at(IHAT_ABSCISSA).with_tol(1e-9, 1e-8);
    pdf_via_ihat_with(p, x, &contour)
}

pub fn pdf_via_ihat_with(p: &GenGammaParams, x: f64, contour: &ContourSpec) -> Result<f64> {
    let factor = mellin_factor(p)?;
    if !(x > p.mu) {
        return Ok(0.0);
    }
    let spec = IhatSpec::new(vec![factor]).with_contour(*contour);
    Ok(ihat::eval_ihat(&spec, real(x))?.value.re)
}

/// Laplace transform `E[e^{-sX}]` for `Re s > 0`.
///
/// Closed form for `γ = 1`; otherwise the defining integral along the ray
/// `arg y = -arg s` (as far as the density allows), which removes most of the
/// oscillation.
pub fn laplace_pdf(p: &GenGammaParams, s: Complex64) -> Result<Complex64> {
    p.validate()?;
    if !(s.re > 0.0) {
        return Err(Error::domain("the Laplace transform needs Re s > 0"));
    }
    Ok(laplace_unshifted(p, s)? * (-s * p.mu).exp())
}

/// Laplace transform of `X - μ`.
pub(crate) fn laplace_unshifted(p: &GenGammaParams, s: Complex64) -> Result<Complex64> {
    let (a, b, g) = (p.alpha, p.beta, p.gamma);
    if g == 1.0 {
        return Ok(((real(b) / (s + b)).ln() * a).exp());
    }
    if s.im < 0.0 {
        return Ok(laplace_unshifted(p, s.conj())?.conj());
    }
    let phi = -s.arg().min(0.4 * PI / g);
    let rot = Complex64::new(0.0, phi).exp();
    let kappa = b.powf(-1.0 / g).min(1.0 / s.norm());
    let ln_norm = g.ln() + p.shape() * b.ln() - special::ln_gamma_real(p.shape());
    let v = ray_integral(
        |r| {
            let ln_y = Complex64::new(r.ln(), phi);
            -s * rot * r + (a - 1.0) * ln_y - b * (ln_y * g).exp()
        },
        rot,
        kappa,
        a,
    )?;
    Ok(v * ln_norm.exp())
}

/// `laplace_pdf` through the H-function form of the transform.
pub fn laplace_pdf_h(p: &GenGammaParams, s: Complex64) -> Result<Complex64> {
    p.validate()?;
    if !(s.re > 0.0) {
        return Err(Error::domain("the Laplace transform needs Re s > 0"));
    }
    Ok(laplace_unshifted_h(p, s, 1e-12)? * (-s * p.mu).exp())
}

fn laplace_unshifted_h(p: &GenGammaParams, s: Complex64, rel_tol: f64) -> Result<Complex64> {
    let (a, b, g) = (p.alpha, p.beta, p.gamma);
    if g == 1.0 {
        return Ok(((real(b) / (s + b)).ln() * a).exp());
    }
    // γ β^{α/γ} s^{-α} / Γ(α/γ) · (1/2πi) ∫ Γ(u) Γ(α - γu) (β s^{-γ})^{-u} du
    let ratio = GammaRatio {
        num: vec![GammaTerm::new(real(0.0), 1.0), GammaTerm::new(real(a), -g)],
        den: vec![GammaTerm::new(real(a / g), 0.0)],
    };
    let ln_s = s.ln();
    let ln_w = -ln_s * g + b.ln();
    let contour = ratio.contour_for_log_abs(ln_w.re).with_tol(1e-300, rel_tol);
    let h = ratio.invert_ln(ln_w, &contour)?;
    let ln_pre = -ln_s * a + g.ln() + (a / g) * b.ln();
    Ok(ln_pre.exp() * h.value)
}

/// A uniform draw in the open interval (0, 1).
pub(crate) fn uniform<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Standard normal via Box-Muller (one variate per pair of uniforms).
pub(crate) fn normal<R: RngCore>(rng: &mut R) -> f64 {
    let u1 = uniform(rng);
    let u2 = uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// `log G` for `G ~ Gamma(shape, 1)`, Marsaglia-Tsang; shapes below one are
/// boosted by `G(a) = G(a + 1) U^{1/a}`.
pub(crate) fn ln_standard_gamma<R: RngCore>(shape: f64, rng: &mut R) -> f64 {
    if shape < 1.0 {
        let boost = uniform(rng).ln() / shape;
        return ln_standard_gamma(shape + 1.0, rng) + boost;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = normal(rng);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = uniform(rng);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d.ln() + v.ln();
        }
    }
}

/// One draw `μ + (G/β)^{1/γ}`.
pub fn draw<R: RngCore>(p: &GenGammaParams, rng: &mut R) -> f64 {
    let lg = ln_standard_gamma(p.shape(), rng);
    p.mu + ((lg - p.beta.ln()) / p.gamma).exp()
}

/// `n` draws from a ChaCha8 stream seeded with `seed`.
pub fn sample(p: &GenGammaParams, seed: u64, n: usize) -> Result<Vec<f64>> {
    p.validate()?;
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| draw(p, &mut rng)).collect())
}

/// Parameters of `A X`.
pub fn scale(p: &GenGammaParams, a: f64) -> Result<GenGammaParams> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain("scale factor must be positive"));
    }
    Ok(GenGammaParams { alpha: p.alpha, beta: p.beta / a.powf(p.gamma), gamma: p.gamma, mu: a * p.mu })
}

fn positive(args: &[f64]) -> Result<()> {
    if args.iter().all(|&v| v > 0.0 && v.is_finite()) {
        Ok(())
    } else {
        Err(Error::domain("distribution parameters must be positive"))
    }
}

/// Weibull with shape `k` and scale `lambda`.
pub fn weibull(k: f64, lambda: f64) -> Result<GenGammaParams> {
    positive(&[k, lambda])?;
    Ok(GenGammaParams { alpha: k, beta: lambda.powf(-k), gamma: k, mu: 0.0 })
}

/// Exponential with rate `lambda`.
pub fn exponential(lambda: f64) -> Result<GenGammaParams> {
    positive(&[lambda])?;
    Ok(GenGammaParams { alpha: 1.0, beta: lambda, gamma: 1.0, mu: 0.0 })
}

pub fn rayleigh(sigma: f64) -> Result<GenGammaParams> {
    positive(&[sigma])?;
    Ok(GenGammaParams { alpha: 2.0, beta: 1.0 / (2.0 * sigma * sigma), gamma: 2.0, mu: 0.0 })
}

/// Maxwell-Boltzmann with scale `a`.
pub fn maxwell(a: f64) -> Result<GenGammaParams> {
    positive(&[a])?;
    Ok(GenGammaParams { alpha: 3.0, beta: 1.0 / (2.0 * a * a), gamma: 2.0, mu: 0.0 })
}

/// Erlang with integer shape `k` and rate `lambda`.
pub fn erlang(k: u32, lambda: f64) -> Result<GenGammaParams> {
    if k == 0 {
        return Err(Error::domain("Erlang shape must be a positive integer"));
    }
    positive(&[lambda])?;
    Ok(GenGammaParams { alpha: k as f64, beta: lambda, gamma: 1.0, mu: 0.0 })
}
