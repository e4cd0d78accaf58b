//! Closed-form results: low-temperature plasma asymptotics, the
//! zero-frequency terms, I₁ and I₂, the Drude decomposition
//! F_D = F_p + F_D⁽⁰⁾ − F_p⁽⁰⁾ + F^(γ), its first-order form, the bound
//! X(a, T) and the zero-temperature Drude entropy.

use crate::constants::{C, HBAR, K_B};
use crate::dielectric::{dimensionless_params, DielectricModel, DimensionlessParams, FilmState, Material, ModelKind};
use crate::error::{domain, Result};
use crate::lifshitz::{self, decay_scale, free_energy, phi_alpha, sum_from_one, Mode, Polarization, QuadratureConfig};
use crate::quadrature::{integrate_semi_infinite, Estimate, Tolerance};
use crate::scalar::{lit, Real};
use crate::specialfn::{bessel_k, polylog, zeta3};

/// k_B T / (16π a²), J/m².
fn zero_frequency_prefactor<T: Real>(s: &FilmState<T>) -> T {
    lit!(T, K_B) * s.t / (lit!(T, 16.0) * T::PI() * s.a * s.a)
}

fn omega_p_tilde<T: Real>(s: &FilmState<T>, mat: &Material<T>) -> T {
    lit!(T, 2.0) * s.a * mat.omega_p / lit!(T, C)
}

fn warn_outside_window<T: Real>(op: &str, s: &FilmState<T>) {
    let ratio = lit!(T, 2.0 * K_B / (HBAR * C)) * s.t * s.a;
    if ratio > lit!(T, 0.1) {
        log::warn!("{op}: k_B T = {ratio:.3} ħc/2a is outside the low-temperature window");
    }
}

/// ΔF_p ≈ −2π²(k_BT)⁴ / [15 ħ³c² ω_p (e^{ω̃_p} − 1)], J/m².
pub fn delta_f_plasma<T: Real>(s: &FilmState<T>, mat: &Material<T>) -> T {
    warn_outside_window("delta_f_plasma", s);
    let kt = lit!(T, K_B) * s.t;
    let denom = lit!(T, 15.0 * HBAR * HBAR * HBAR * C * C) * mat.omega_p * omega_p_tilde(s, mat).exp_m1();
    -lit!(T, 2.0) * T::PI() * T::PI() * kt.powi(4) / denom
}

/// ΔP_p ≈ −4π²(k_BT)⁴ e^{ω̃_p} / [15 ħ³c³ (e^{ω̃_p} − 1)²], Pa.
pub fn delta_p_plasma<T: Real>(s: &FilmState<T>, mat: &Material<T>) -> T {
    warn_outside_window("delta_p_plasma", s);
    let kt = lit!(T, K_B) * s.t;
    let w = omega_p_tilde(s, mat);
    // e^w/(e^w − 1)² = 1/[(e^w − 1)(1 − e^{−w})]
    let bose = T::one() / (w.exp_m1() * -(-w).exp_m1());
    -lit!(T, 4.0) * T::PI() * T::PI() * kt.powi(4) * bose / lit!(T, 15.0 * HBAR * HBAR * HBAR * C * C * C)
}

/// S_p ≈ 8π²k_B(k_BT)³ / [15 ħ³c² ω_p (e^{ω̃_p} − 1)], J/(m²·K).
pub fn entropy_plasma_asymptotic<T: Real>(s: &FilmState<T>, mat: &Material<T>) -> T {
    warn_outside_window("entropy_plasma_asymptotic", s);
    let kt = lit!(T, K_B) * s.t;
    let denom = lit!(T, 15.0 * HBAR * HBAR * HBAR * C * C) * mat.omega_p * omega_p_tilde(s, mat).exp_m1();
    lit!(T, 8.0 * K_B) * T::PI() * T::PI() * kt.powi(3) / denom
}

/// I₁(ω̃) = −[Li₃(e^{−ω̃}) + ω̃ Li₂(e^{−ω̃})].
pub fn i1_closed<T: Real>(w: T) -> Result<T> {
    if !(w >= T::zero()) {
        return Err(domain("i1_closed", "omega_p_tilde must be non-negative"));
    }
    let z = (-w).exp();
    Ok(-(polylog(3, z)? + w * polylog(2, z)?))
}

/// I₁(ω̃) = ∫₀^∞ y ln(1 − e^{−√(y²+ω̃²)}) dy by quadrature.
pub fn i1_quadrature<T: Real>(w: T, cfg: &QuadratureConfig<T>) -> Result<Estimate<T>> {
    let p = DimensionlessParams::new(w, T::zero(), T::zero())?;
    phi_alpha(ModelKind::Plasma, Polarization::Tm, T::zero(), &p, cfg)
}

/// Closed form of the first-order-in-r²_TE approximation to I₂.
pub fn i2_closed<T: Real>(w: T) -> Result<T> {
    if !(w > T::zero()) {
        return Err(domain("i2_closed", "omega_p_tilde must be positive"));
    }
    if w < lit!(T, 0.5) {
        log::warn!("i2_closed: omega_p_tilde = {w} is below 0.5, where the approximation degrades");
    }
    let poly = w
        + lit!(T, 17.0)
        + lit!(T, 112.0) / w
        + lit!(T, 432.0) / (w * w)
        + lit!(T, 960.0) / w.powi(3)
        + lit!(T, 960.0) / w.powi(4);
    let bessel = w * bessel_k(1, w)? + lit!(T, 9.0) * bessel_k(2, w)? + lit!(T, 30.0) / w * bessel_k(3, w)?;
    Ok(-poly * (-w).exp() + lit!(T, 4.0) * bessel)
}

/// I₂(ω̃) = ∫₀^∞ y ln[1 − r²_TE(y) e^{−√(y²+ω̃²)}] dy by quadrature.
pub fn i2_exact<T: Real>(w: T, cfg: &QuadratureConfig<T>) -> Result<Estimate<T>> {
    let p = DimensionlessParams::new(w, T::zero(), T::zero())?;
    phi_alpha(ModelKind::Plasma, Polarization::Te, T::zero(), &p, cfg)
}

/// −∫₀^∞ y r²_TE(y) e^{−√(y²+ω̃²)} dy, the integral `i2_closed` evaluates.
pub fn i2_first_order_quadrature<T: Real>(w: T, cfg: &QuadratureConfig<T>) -> Result<Estimate<T>> {
    let p = DimensionlessParams::new(w, T::zero(), T::zero())?;
    let w2 = w * w;
    integrate_semi_infinite(
        |y| {
            let k = (y * y + w2).sqrt();
            let r = w2 / ((k + y) * (k + y));
            -y * r * r * (-k).exp()
        },
        T::zero(),
        decay_scale(&p),
        &cfg.tolerance(),
    )
}

/// F_p⁽⁰⁾ = (k_BT/16πa²)(I₁ + I₂), J/m², with I₂ by exact quadrature.
pub fn f0_plasma<T: Real>(s: &FilmState<T>, mat: &Material<T>, cfg: &QuadratureConfig<T>) -> Result<Estimate<T>> {
    let w = omega_p_tilde(s, mat);
    let p = DimensionlessParams::new(w, T::zero(), T::zero())?;
    Ok(lifshitz::phi_zero(ModelKind::Plasma, &p, cfg)?.scaled(zero_frequency_prefactor(s)))
}

/// F_p⁽⁰⁾ from `i1_closed` and `i2_closed`.
pub fn f0_plasma_closed<T: Real>(s: &FilmState<T>, mat: &Material<T>) -> Result<T> {
    let w = omega_p_tilde(s, mat);
    Ok(zero_frequency_prefactor(s) * (i1_closed(w)? + i2_closed(w)?))
}

/// F_D⁽⁰⁾ = −k_BT ζ(3) / (16π a²), J/m².
pub fn f0_drude<T: Real>(s: &FilmState<T>) -> T {
    -zero_frequency_prefactor(s) * zeta3::<T>()
}

/// The R and Q kernels of the first-order expansion in δ_l, as printed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RqKernels<T> {
    pub r_tm: T,
    pub r_te: T,
    pub q_tm: T,
    pub q_te: T,
}

/// R_α = −∂r²_α/∂δ at δ = 0 and Q_α = ω̃²/(2R) − R_α, R = √(y² + ω̃²).
pub fn r_q_kernels<T: Real>(zeta: T, y: T, p: &DimensionlessParams<T>) -> Result<RqKernels<T>> {
    if !(zeta > T::zero()) || !(y >= zeta) {
        return Err(domain(
            "r_q_kernels",
            format!("require 0 < zeta <= y, got zeta = {zeta}, y = {y}"),
        ));
    }
    let (r_tm, r_te, big_r) = r_kernels(zeta, y, p.omega_p_tilde);
    let half = w2_over_2r(p.omega_p_tilde, big_r);
    Ok(RqKernels {
        r_tm,
        r_te,
        q_tm: half - r_tm,
        q_te: half - r_te,
    })
}

fn w2_over_2r<T: Real>(w: T, big_r: T) -> T {
    w * w / (lit!(T, 2.0) * big_r)
}

fn r_kernels<T: Real>(zeta: T, y: T, w: T) -> (T, T, T) {
    let two = lit!(T, 2.0);
    let w2 = w * w;
    let z2 = zeta * zeta;
    let big_r = (y * y + w2).sqrt();
    let s = big_r + y;
    // ω̃²y + ζ²y − ζ²R = ω̃²(y − ζ²/(R + y))
    let lower = w2 * (y - z2 / s);
    let upper = w2 * y + z2 * y + z2 * big_r;
    let r_tm = two * w2 * z2 * y * (w2 + two * y * y - z2) * lower / (big_r * upper.powi(3));
    // R − y = ω̃²/(R + y)
    let r_te = two * w2 * y * (w2 / s) / (big_r * s.powi(3));
    (r_tm, r_te, big_r)
}

/// ∂/∂δ ln[1 − r²_α e^{−k}] at δ = 0 for both polarizations, i.e.
/// −(r²_{α,p} ω̃²/(2R) − R_α) / (e^R − r²_{α,p}).
pub fn first_order_log_derivative<T: Real>(zeta: T, y: T, p: &DimensionlessParams<T>) -> (T, T) {
    let (r_tm_k, r_te_k, big_r) = r_kernels(zeta, y, p.omega_p_tilde);
    let half = w2_over_2r(p.omega_p_tilde, big_r);
    let mode = Mode::new(ModelKind::Plasma, zeta, p);
    let one_pol = |pol: Polarization, kernel: T| {
        let r = mode.reflection(pol, y, big_r).0;
        let r2 = r * r;
        // 1/(e^R − r²) = e^{−R} / (1 − r² e^{−R})
        let weight = (-big_r).exp() / mode.log_factor(pol, y).exp();
        -(r2 * half - kernel) * weight
    };
    (one_pol(Polarization::Tm, r_tm_k), one_pol(Polarization::Te, r_te_k))
}

/// ln[1 − r²_D e^{−k_D}] − ln[1 − r²_p e^{−k_p}] at one (ζ, y), free of
/// cancellation for small δ.
fn drude_minus_plasma_log<T: Real>(pl: &Mode<T>, dr: &Mode<T>, y: T) -> T {
    let two = lit!(T, 2.0);
    let kp = pl.k(y);
    let kd = dr.k(y);
    let dw2 = dr.w2 - pl.w2;
    let dk = dw2 / (kd + kp);
    let mut out = T::zero();
    for pol in Polarization::BOTH {
        let rp = pl.reflection(pol, y, kp).0;
        let rd = dr.reflection(pol, y, kd).0;
        let diff = match pol {
            Polarization::Te => -two * y * dk / ((kp + y) * (kd + y)),
            Polarization::Tm => {
                let z2 = pl.zeta2;
                let num = two * z2 * y * dw2 * (kp - (z2 + pl.w2) / (kd + kp));
                let den_p = z2 * kp + (z2 + pl.w2) * y;
                let den_d = z2 * kd + (z2 + dr.w2) * y;
                num / (den_p * den_d)
            }
        };
        // r_p² e^{−k_p} − r_D² e^{−k_D} = e^{−k_p}[(r_p − r_D)(r_p + r_D) − r_D² (e^{−Δk} − 1)]
        let gap = (-kp).exp() * (diff * (rp + rd) - rd * rd * (-dk).exp_m1());
        let base = pl.log_factor(pol, y).exp();
        out = out + (gap / base).ln_1p();
    }
    out
}

/// Σ_{l≥1}[Φ_D(ζ_l) − Φ_p(ζ_l)] and its first-order-in-δ counterpart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FGammaSums<T> {
    pub exact: Estimate<T>,
    pub first_order: Estimate<T>,
    pub n_terms: usize,
}

fn term_tolerance<T: Real>(cfg: &QuadratureConfig<T>, scale: T) -> Tolerance<T> {
    Tolerance::new(cfg.rel_tol, (cfg.abs_tol * scale).max(T::min_positive_value()))
}

/// Σ_{l≥1}[Φ_D(ζ_l) − Φ_p(ζ_l)] (dimensionless).
pub fn f_gamma_sum_exact<T: Real>(
    p: &DimensionlessParams<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<lifshitz::MatsubaraSum<T>> {
    cfg.validate()?;
    if !(p.tau > T::zero()) {
        return Err(domain("f_gamma", "tau must be positive"));
    }
    if p.gamma_tilde == T::zero() {
        return Ok(lifshitz::MatsubaraSum {
            value: T::zero(),
            abs_err: T::zero(),
            n_terms: 0,
        });
    }
    let scale = decay_scale(p);
    sum_from_one(
        |l| {
            let zeta = p.tau * T::from_count(l);
            let pl = Mode::new(ModelKind::Plasma, zeta, p);
            let dr = Mode::new(ModelKind::Drude, zeta, p);
            let tol = term_tolerance(cfg, p.delta(l).min(T::one()));
            integrate_semi_infinite(|y| y * drude_minus_plasma_log(&pl, &dr, y), zeta, scale, &tol)
        },
        T::zero(),
        cfg,
    )
}

/// Σ_{l≥1} δ_l ∫ y Σ_α ∂_δ ln[…] dy (dimensionless).
pub fn f_gamma_sum_first_order<T: Real>(
    p: &DimensionlessParams<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<lifshitz::MatsubaraSum<T>> {
    cfg.validate()?;
    if !(p.tau > T::zero()) {
        return Err(domain("f_gamma", "tau must be positive"));
    }
    if p.gamma_tilde == T::zero() {
        return Ok(lifshitz::MatsubaraSum {
            value: T::zero(),
            abs_err: T::zero(),
            n_terms: 0,
        });
    }
    let scale = decay_scale(p);
    sum_from_one(
        |l| {
            let zeta = p.tau * T::from_count(l);
            let delta = p.delta(l);
            let est = integrate_semi_infinite(
                |y| {
                    let (tm, te) = first_order_log_derivative(zeta, y, p);
                    y * (tm + te)
                },
                zeta,
                scale,
                &term_tolerance(cfg, T::one()),
            )?;
            Ok(est.scaled(delta))
        },
        T::zero(),
        cfg,
    )
}

/// Both F^(γ) sums for one parameter set (dimensionless).
pub fn f_gamma_sums<T: Real>(p: &DimensionlessParams<T>, cfg: &QuadratureConfig<T>) -> Result<FGammaSums<T>> {
    let exact = f_gamma_sum_exact(p, cfg)?;
    let first = f_gamma_sum_first_order(p, cfg)?;
    Ok(FGammaSums {
        exact: Estimate {
            value: exact.value,
            abs_err: exact.abs_err,
            evaluations: exact.n_terms,
        },
        first_order: Estimate {
            value: first.value,
            abs_err: first.abs_err,
            evaluations: first.n_terms,
        },
        n_terms: exact.n_terms.max(first.n_terms),
    })
}

/// F^(γ) in J/m², exact and first order in δ_l.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FGamma<T> {
    pub exact: Estimate<T>,
    pub first_order: Estimate<T>,
    /// exact − first_order
    pub difference: T,
}

pub fn f_gamma<T: Real>(s: &FilmState<T>, mat: &Material<T>, cfg: &QuadratureConfig<T>) -> Result<FGamma<T>> {
    let p = dimensionless_params(mat, s)?;
    let sums = f_gamma_sums(&p, cfg)?;
    let k = s.energy_unit() * p.tau;
    let exact = sums.exact.scaled(k);
    let first_order = sums.first_order.scaled(k);
    Ok(FGamma {
        exact,
        first_order,
        difference: exact.value - first_order.value,
    })
}

/// F^(γ) by the cancellation-free exact difference only, J/m².
pub fn f_gamma_exact<T: Real>(s: &FilmState<T>, mat: &Material<T>, cfg: &QuadratureConfig<T>) -> Result<Estimate<T>> {
    let p = dimensionless_params(mat, s)?;
    let sum = f_gamma_sum_exact(&p, cfg)?;
    Ok(Estimate {
        value: sum.value,
        abs_err: sum.abs_err,
        evaluations: sum.n_terms,
    }
    .scaled(s.energy_unit() * p.tau))
}

/// Coefficients of the bound X(a, T).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XBound<T> {
    pub c1: T,
    pub c2: T,
    /// X(a, T), J/m².
    pub value: T,
}

/// C₁ = ln(1 − e^{−ω̃/√2}) and C₂ = Σ_{n≥1} (2 ln n − ln 2)/(2n) e^{−nω̃/√2}.
pub fn x_bound_coefficients<T: Real>(w: T) -> Result<(T, T)> {
    if !(w > T::zero()) {
        return Err(domain("x_bound", "omega_p_tilde must be positive"));
    }
    let b = w / T::SQRT_2();
    let c1 = lifshitz::ln_one_minus_exp(b);
    let ln2 = T::LN_2();
    let two = lit!(T, 2.0);
    let mut c2 = T::zero();
    let mut n = 1usize;
    loop {
        let fnn = T::from_count(n);
        c2 = c2 + (two * fnn.ln() - ln2) / (two * fnn) * (-fnn * b).exp();
        n += 1;
        if n >= 3 {
            // (2 ln x − ln 2)/(2x) decreases for x ≥ 3, so the integral
            // test bounds the remainder by a_n(x = n) e^{−nb}/b.
            let fnn = T::from_count(n);
            let tail = (two * fnn.ln() - ln2) / (two * fnn) * (-fnn * b).exp() / b;
            if tail <= lit!(T, 1e-12) * c2.abs().max(c1.abs()) || n > 10_000_000 {
                break;
            }
        }
    }
    Ok((c1, c2))
}

/// X(a, T) = ħγ(T)ω_p²/(4π²c²) (C₁ ln τ − C₂).
pub fn x_bound<T: Real>(s: &FilmState<T>, mat: &Material<T>) -> Result<XBound<T>> {
    if !(s.t > T::zero()) {
        return Err(domain("x_bound", "temperature must be positive"));
    }
    let p = dimensionless_params(mat, s)?;
    if p.tau / T::SQRT_2() > lit!(T, 0.1) {
        log::warn!(
            "x_bound: tau = {} is not small; the logarithmic form is unreliable",
            p.tau
        );
    }
    let (c1, c2) = x_bound_coefficients(p.omega_p_tilde)?;
    let g = mat.gamma_of_t(s.t);
    let pref = lit!(T, HBAR) * g * mat.omega_p * mat.omega_p / (lit!(T, 4.0) * T::PI() * T::PI() * lit!(T, C * C));
    Ok(XBound {
        c1,
        c2,
        value: pref * (c1 * p.tau.ln() - c2),
    })
}

/// Zero-temperature Drude entropy, with I₂ both from the closed form and
/// from exact quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyAtZero<T> {
    pub i1: T,
    /// I₂ from the closed form.
    pub i2: T,
    /// C = ζ(3) + I₁ + I₂.
    pub c_bracket: T,
    /// k_B C / (16π a²), J/(m²·K).
    pub s0: T,
    pub i2_exact: T,
    pub c_bracket_exact: T,
    pub s0_exact: T,
}

/// Closed-form pieces of the zero-temperature entropy for given ω̃.
pub fn entropy_bracket<T: Real>(w: T, cfg: &QuadratureConfig<T>) -> Result<(T, T, T, T)> {
    let i1 = i1_closed(w)?;
    let i2 = i2_closed(w)?;
    let i2x = i2_exact(w, cfg)?.value;
    Ok((i1, i2, i2x, zeta3::<T>() + i1))
}

pub fn entropy_drude_zero<T: Real>(
    s: &FilmState<T>,
    mat: &Material<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<EntropyAtZero<T>> {
    let w = omega_p_tilde(s, mat);
    if w < lit!(T, 0.5) {
        log::warn!("entropy_drude_zero: omega_p_tilde = {w} is below 0.5");
    }
    let (i1, i2, i2_exact, base) = entropy_bracket(w, cfg)?;
    let unit = lit!(T, K_B) / (lit!(T, 16.0) * T::PI() * s.a * s.a);
    let c_bracket = base + i2;
    let c_bracket_exact = base + i2_exact;
    Ok(EntropyAtZero {
        i1,
        i2,
        c_bracket,
        s0: unit * c_bracket,
        i2_exact,
        c_bracket_exact,
        s0_exact: unit * c_bracket_exact,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DrudeDecomposition<T> {
    pub f_plasma: T,
    pub f0_drude: T,
    pub f0_plasma: T,
    pub f_gamma: T,
    /// f_plasma + f0_drude − f0_plasma + f_gamma
    pub total: T,
    pub err_estimate: T,
}

pub fn drude_decompose<T: Real>(
    s: &FilmState<T>,
    mat: &Material<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<DrudeDecomposition<T>> {
    let plasma = DielectricModel::plasma(mat.clone())?;
    let f_plasma = free_energy(&plasma, s, cfg)?;
    let f0p = f0_plasma(s, mat, cfg)?;
    let f0d = f0_drude(s);
    let fg = f_gamma_exact(s, mat, cfg)?;
    Ok(DrudeDecomposition {
        f_plasma: f_plasma.value,
        f0_drude: f0d,
        f0_plasma: f0p.value,
        f_gamma: fg.value,
        total: f_plasma.value + f0d - f0p.value + fg.value,
        err_estimate: f_plasma.err_estimate + f0p.abs_err + fg.abs_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differentiate::central_richardson;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn au() -> Material<f64> {
        Material::gold()
    }

    fn params(w: f64, tau: f64, g: f64) -> DimensionlessParams<f64> {
        DimensionlessParams::new(w, tau, g).unwrap()
    }

    #[test]
    fn plasma_asymptotics_vanish_at_zero_temperature() {
        let s = FilmState::new(100e-9, 0.0).unwrap();
        assert_eq!(delta_f_plasma(&s, &au()), 0.0);
        assert_eq!(delta_p_plasma(&s, &au()), 0.0);
        assert_eq!(entropy_plasma_asymptotic(&s, &au()), 0.0);
    }

    #[test]
    fn plasma_asymptotics_overflow_safely() {
        let s = FilmState::new(1e-3, 1.0).unwrap();
        assert_eq!(delta_f_plasma(&s, &au()), 0.0);
        assert_eq!(delta_p_plasma(&s, &au()), 0.0);
        assert_eq!(entropy_plasma_asymptotic(&s, &au()), 0.0);
    }

    #[test]
    fn plasma_asymptotic_derivatives() {
        let m = au();
        let (a, t) = (100e-9, 5.0);
        let ds = central_richardson(|t| Ok(delta_f_plasma(&FilmState { a, t }, &m)), t, 0.05, 4).unwrap();
        assert_relative_eq!(
            -ds.value,
            entropy_plasma_asymptotic(&FilmState { a, t }, &m),
            max_relative = 1e-8
        );
        let dp = central_richardson(|a| Ok(delta_f_plasma(&FilmState { a, t }, &m)), a, 1e-10, 4).unwrap();
        assert_relative_eq!(-dp.value, delta_p_plasma(&FilmState { a, t }, &m), max_relative = 1e-8);
    }

    #[test]
    fn doubling_thickness_suppresses_correction() {
        let m = au();
        let f1 = delta_f_plasma(&FilmState::new(50e-9, 10.0).unwrap(), &m);
        let f2 = delta_f_plasma(&FilmState::new(100e-9, 10.0).unwrap(), &m);
        let w1 = 2.0 * 50e-9 * m.omega_p / C;
        let w2 = 2.0 * w1;
        assert_relative_eq!(f2 / f1, w1.exp_m1() / w2.exp_m1(), max_relative = 1e-12);
    }

    #[test]
    fn i1_closed_matches_quadrature() {
        let cfg = QuadratureConfig::default();
        for w in [1.0, 5.0, 15.0] {
            let q = i1_quadrature(w, &cfg).unwrap().value;
            assert_relative_eq!(i1_closed(w).unwrap(), q, max_relative = 1e-10);
        }
        assert_relative_eq!(i1_closed(0.0).unwrap(), -zeta3::<f64>(), max_relative = 1e-15);
    }

    #[test]
    fn i2_closed_is_the_first_order_integral() {
        let cfg = QuadratureConfig::default();
        for w in [0.5, 1.0, 5.0, 15.0] {
            let q = i2_first_order_quadrature(w, &cfg).unwrap().value;
            assert_relative_eq!(i2_closed(w).unwrap(), q, max_relative = 1e-9);
        }
    }

    #[test]
    fn i2_exact_frozen_values() {
        // independent high-precision quadrature
        let cfg = QuadratureConfig::default();
        assert_relative_eq!(
            i2_exact(1.0, &cfg).unwrap().value,
            -0.024_559_530_06,
            max_relative = 1e-8
        );
        assert_relative_eq!(i2_exact(5.0, &cfg).unwrap().value, -0.006_683_391, max_relative = 1e-6);
        assert_relative_eq!(
            i2_exact(0.5, &cfg).unwrap().value,
            -0.011_661_594_8,
            max_relative = 1e-7
        );
    }

    #[test]
    fn f0_drude_values() {
        let s = FilmState::new(100e-9, 300.0).unwrap();
        assert_relative_eq!(
            f0_drude(&s),
            -K_B * 300.0 * 1.202_056_903_159_594_3 / (16.0 * std::f64::consts::PI * 1e-14),
            max_relative = 1e-14
        );
        assert_eq!(f0_drude(&FilmState::new(100e-9, 0.0).unwrap()), 0.0);
    }

    #[test]
    fn r_kernels_match_finite_difference_of_drude_reflection() {
        let p = params(3.0, 0.7, 0.0);
        let zeta = 0.7;
        let d = 1e-6;
        for y in [0.7, 1.0, 4.0, 20.0] {
            let k = r_q_kernels(zeta, y, &p).unwrap();
            let pd = p.with_gamma_tilde(d * zeta);
            let rp = lifshitz::reflection(ModelKind::Plasma, zeta, y, &p).unwrap();
            let rd = lifshitz::reflection(ModelKind::Drude, zeta, y, &pd).unwrap();
            assert_relative_eq!((rp.r_tm.powi(2) - rd.r_tm.powi(2)) / d, k.r_tm, max_relative = 1e-4);
            assert_relative_eq!((rp.r_te.powi(2) - rd.r_te.powi(2)) / d, k.r_te, max_relative = 1e-4);
        }
        let zero = r_q_kernels(0.5, 1.0, &params(0.0, 0.5, 0.0)).unwrap();
        assert_eq!(zero.r_te, 0.0);
        assert!(r_q_kernels(1.0, 0.5, &p).is_err());
    }

    #[test]
    fn first_order_log_derivative_matches_finite_difference() {
        let p = params(3.0, 0.7, 0.0);
        let zeta = 0.7;
        let d = 1e-7;
        for y in [0.7, 1.0, 4.0, 12.0] {
            let (tm, te) = first_order_log_derivative(zeta, y, &p);
            let pd = p.with_gamma_tilde(d * zeta);
            let mp = Mode::new(ModelKind::Plasma, zeta, &p);
            let md = Mode::new(ModelKind::Drude, zeta, &pd);
            let fd = |pol| (md.log_factor(pol, y) - mp.log_factor(pol, y)) / d;
            assert_relative_eq!(fd(Polarization::Tm), tm, max_relative = 1e-5);
            assert_relative_eq!(fd(Polarization::Te), te, max_relative = 1e-5);
        }
    }

    #[test]
    fn drude_minus_plasma_matches_naive_difference() {
        let p = params(4.0, 0.3, 0.2);
        for y in [0.3, 1.0, 6.0] {
            let pl = Mode::new(ModelKind::Plasma, 0.3, &p);
            let dr = Mode::new(ModelKind::Drude, 0.3, &p);
            let naive = dr.log_factor_sum(y) - pl.log_factor_sum(y);
            assert_relative_eq!(drude_minus_plasma_log(&pl, &dr, y), naive, max_relative = 1e-9);
        }
    }

    #[test]
    fn f_gamma_vanishes_without_relaxation() {
        let cfg = QuadratureConfig::default();
        let sums = f_gamma_sums(&params(5.0, 0.1, 0.0), &cfg).unwrap();
        assert_eq!(sums.exact.value, 0.0);
        assert_eq!(sums.first_order.value, 0.0);
    }

    #[test]
    fn x_bound_coefficients_values() {
        let (c1, c2) = x_bound_coefficients(std::f64::consts::SQRT_2).unwrap();
        assert_relative_eq!(c1, (1.0 - (-1.0f64).exp()).ln(), max_relative = 1e-14);
        let direct: f64 = (1..200)
            .map(|n| {
                let n = n as f64;
                (2.0 * n.ln() - 2f64.ln()) / (2.0 * n) * (-n).exp()
            })
            .sum();
        assert_relative_eq!(c2, direct, max_relative = 1e-11);
        assert!(x_bound_coefficients(0.0).is_err());
    }

    #[test]
    fn x_bound_vanishes_as_temperature_drops() {
        let m = au();
        let mut prev = f64::INFINITY;
        for t in [4.0, 2.0, 1.0, 0.5, 0.25] {
            let x = x_bound(&FilmState::new(55e-9, t).unwrap(), &m).unwrap().value;
            assert!(x > 0.0 && x < prev);
            prev = x;
        }
    }

    #[test]
    fn entropy_at_zero_brackets() {
        let cfg = QuadratureConfig::default();
        let m = au();
        let a = 1.0 * C / (2.0 * m.omega_p);
        let e = entropy_drude_zero(&FilmState::new(a, 0.0).unwrap(), &m, &cfg).unwrap();
        assert!(e.c_bracket > 0.0 && e.s0 > 0.0 && e.s0_exact > 0.0);
        let unit = K_B / (16.0 * std::f64::consts::PI * a * a);
        assert_relative_eq!(e.s0, unit * e.c_bracket, max_relative = 1e-14);
        assert_relative_eq!(e.c_bracket, zeta3::<f64>() + e.i1 + e.i2, max_relative = 1e-15);
    }

    #[test]
    fn q_kernels_as_written_change_sign() {
        let p = params(1.4101129926584999, 0.0, 0.0);
        let z = 1.327039134704416;
        let k = r_q_kernels(z, z + 6.262698871913986, &p).unwrap();
        assert_relative_eq!(k.q_tm, -0.030_072_959_410_404_67, max_relative = 1e-6);
        assert!(k.q_te > 0.0);
        let small_y = r_q_kernels(0.01, 0.01, &params(0.05, 0.0, 0.0)).unwrap();
        assert_relative_eq!(small_y.q_te, -0.152_652_652_932_070_3, max_relative = 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn r_kernels_positive(w in 0.05f64..30.0, z in 1e-3f64..10.0, dy in 0.0f64..40.0) {
            let k = r_q_kernels(z, z + dy, &params(w, z, 0.0)).unwrap();
            prop_assert!(k.r_tm > 0.0 && k.r_te > 0.0);
        }

        #[test]
        fn sign_ledger(t in 0.1f64..50.0, a in 10e-9f64..500e-9) {
            let s = FilmState::new(a, t).unwrap();
            let m = au();
            prop_assert!(delta_f_plasma(&s, &m) <= 0.0);
            prop_assert!(delta_p_plasma(&s, &m) <= 0.0);
            prop_assert!(entropy_plasma_asymptotic(&s, &m) >= 0.0);
        }
    }
}
