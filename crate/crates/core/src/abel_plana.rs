//! Thermal correction ΔF = F − E of the plasma-model film from the
//! Abel–Plana formula, with Φ continued to imaginary arguments.
//!
//! ΔF/U = τ Σ'_l Φ(τl) − ∫₀^∞ Φ(ζ) dζ with U = ħc/(32π²a³). The TE part has
//! a ζ-independent integrand and reduces to
//!
//!   ΔF_TE/U = (τ/π) ∫₀^∞ s Im L_TE(is) ln(1 − e^{−2πs/τ}) ds,
//!
//! while the TM part needs Im Φ_TM(iu), obtained by integrating
//! y L_TM(ζ² = −u², y) along the path u → u + iu → iu, which passes to the
//! right of the poles of r_TM:
//!
//!   ΔF_TM/U = 2τ ∫₀^∞ Im I(τt) / (e^{2πt} − 1) dt.

use num_complex::Complex;

use crate::dielectric::DimensionlessParams;
use crate::error::{Error, Result};
use crate::lifshitz::{ln_one_minus_exp, QuadratureConfig};
use crate::quadrature::{integrate, integrate_with_breaks, Estimate, Tolerance};
use crate::scalar::{lit, Real};

/// Upper limit of the t integrals; the Bose weight is below 1e-19 there.
const T_MAX: f64 = 7.3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbelPlanaParts<T> {
    pub te: Estimate<T>,
    pub tm: Estimate<T>,
}

impl<T: Real> AbelPlanaParts<T> {
    pub fn total(&self) -> Estimate<T> {
        self.te + self.tm
    }
}

/// Largest u for which the continuation path stays clear of the
/// branch point of √(y² + ω̃²) and of the r_TM pole cluster.
pub fn max_continuation<T: Real>(omega_p_tilde: T) -> T {
    let quarter = lit!(T, 0.25);
    omega_p_tilde * lit!(T, 0.5).min(lit!(T, 0.8) * (omega_p_tilde * quarter).tanh())
}

/// Whether the representation can be used at these parameters.
pub fn applicable<T: Real>(p: &DimensionlessParams<T>) -> bool {
    p.tau > T::zero() && p.omega_p_tilde > T::zero() && lit!(T, T_MAX) * p.tau <= max_continuation(p.omega_p_tilde)
}

/// log(1 + z) without cancellation for small |z|.
fn clog1p<T: Real>(z: Complex<T>) -> Complex<T> {
    let two = lit!(T, 2.0);
    let re = lit!(T, 0.5) * (two * z.re + z.norm_sqr()).ln_1p();
    let im = z.im.atan2(T::one() + z.re);
    Complex::new(re, im)
}

/// Im L_TE(is) for 0 ≤ s < ω̃.
fn im_log_te<T: Real>(w2: T, s: T) -> T {
    let big_r = (w2 - s * s).sqrt();
    let r = Complex::new(big_r, -s) / Complex::new(big_r, s);
    let v = Complex::new(T::one(), T::zero()) - r * r * (-big_r).exp();
    v.im.atan2(v.re)
}

/// y·[L_TM − ln(1 − e^{−k})] at complex y with ζ² = −u².
fn tm_excess<T: Real>(w2: T, zeta2: T, y: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let k = (y * y + w2).sqrt();
    let d = y * w2 + (k + y) * zeta2;
    let comp = k * y * (lit!(T, 4.0) * zeta2 * (zeta2 + w2)) / (d * d);
    let q = one / (k.exp() - one);
    y * clog1p(q * comp)
}

/// Im ∫ y L_TM dy along u → u + iu → iu.
fn im_path_integral<T: Real>(w2: T, u: T, tol: &Tolerance<T>) -> Result<Estimate<T>> {
    if u == T::zero() {
        return Ok(Estimate::exact(T::zero()));
    }
    let zeta2 = -u * u;
    integrate(
        |v| {
            let up = tm_excess(w2, zeta2, Complex::new(u, v)).re;
            let across = tm_excess(w2, zeta2, Complex::new(v, u)).im;
            up - across
        },
        T::zero(),
        u,
        tol,
    )
}

/// ΔF/U split by polarization.
pub fn thermal_correction<T: Real>(p: &DimensionlessParams<T>, cfg: &QuadratureConfig<T>) -> Result<AbelPlanaParts<T>> {
    cfg.validate()?;
    if !applicable(p) {
        return Err(crate::error::domain(
            "abel_plana::thermal_correction",
            format!(
                "tau = {} too large for omega_p_tilde = {} (needs tau <= {})",
                p.tau,
                p.omega_p_tilde,
                max_continuation(p.omega_p_tilde) / lit!(T, T_MAX)
            ),
        ));
    }
    let tau = p.tau;
    let w2 = p.omega_p_tilde * p.omega_p_tilde;
    let two_pi = lit!(T, 2.0) * T::PI();
    let tol = Tolerance::new(cfg.rel_tol, T::min_positive_value());
    let breaks: Vec<T> = [0.0, 0.05, 0.3, 1.0, 3.0, T_MAX].iter().map(|&b| lit!(T, b)).collect();

    let te = integrate_with_breaks(
        |t| {
            if t == T::zero() {
                return T::zero();
            }
            let s = tau * t;
            s * im_log_te(w2, s) * ln_one_minus_exp(two_pi * t)
        },
        &breaks,
        &tol,
    )?
    .scaled(tau * tau / T::PI());

    let inner = Tolerance::new(cfg.rel_tol * lit!(T, 0.01), T::min_positive_value());
    let mut failure: Option<Error> = None;
    let tm = integrate_with_breaks(
        |t| {
            if t == T::zero() {
                return T::zero();
            }
            match im_path_integral(w2, tau * t, &inner) {
                Ok(e) => e.value / (two_pi * t).exp_m1(),
                Err(e) => {
                    failure.get_or_insert(e);
                    T::nan()
                }
            }
        },
        &breaks,
        &tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let tm = tm?.scaled(lit!(T, 2.0) * tau);
    Ok(AbelPlanaParts { te, tm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dielectric::ModelKind;
    use crate::lifshitz::{phi_integral, phi_matsubara_sum, Mode, Polarization};
    use approx::assert_relative_eq;

    fn params(w: f64, tau: f64) -> DimensionlessParams<f64> {
        DimensionlessParams::new(w, tau, 0.0).unwrap()
    }

    #[test]
    fn matches_frozen_matsubara_difference() {
        // high-precision Matsubara sum minus zero-temperature integral at ω̃ = 5, τ = 0.1
        let parts = thermal_correction(&params(5.0, 0.1), &QuadratureConfig::default()).unwrap();
        assert_relative_eq!(parts.te.value, -1.507_472_311_0e-9, max_relative = 1e-8);
        assert_relative_eq!(parts.tm.value, -4.701_099_692_6e-9, max_relative = 1e-8);
        assert_relative_eq!(parts.total().value, -6.208_572_003_6e-9, max_relative = 1e-8);
    }

    #[test]
    fn agrees_with_direct_difference_where_resolvable() {
        // at τ = 0.2, ω̃ = 3 the difference is large enough to subtract directly
        let p = params(3.0, 0.2);
        let cfg = QuadratureConfig::default();
        let ap = thermal_correction(&p, &cfg).unwrap().total();
        let tight = cfg.tightened(0.01);
        let direct = p.tau * phi_matsubara_sum(ModelKind::Plasma, &p, &tight).unwrap().value
            - phi_integral(&p, &tight).unwrap().value;
        assert_relative_eq!(ap.value, direct, max_relative = 1e-6);
    }

    #[test]
    fn te_integrand_linear_near_zero() {
        let w2 = 9.0f64;
        let a = im_log_te(w2, 1e-4);
        let b = im_log_te(w2, 2e-4);
        assert_relative_eq!(b / a, 2.0, max_relative = 1e-3);
        // real-axis value of the same log agrees with the mode evaluator
        let m = Mode::new(ModelKind::Plasma, 0.0, &params(3.0, 0.1));
        let big_r = (w2 + 0.25f64).sqrt();
        let r = (big_r - 0.5) / (big_r + 0.5);
        assert_relative_eq!(
            m.log_factor(Polarization::Te, 0.5),
            (1.0 - r * r * (-big_r).exp()).ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn rejects_large_tau() {
        assert!(!applicable(&params(1.0, 1.0)));
        assert!(thermal_correction(&params(1.0, 1.0), &QuadratureConfig::default()).is_err());
        assert!(applicable(&params(9.0, 0.05)));
    }

    #[test]
    fn clog1p_small_arguments() {
        let z = Complex::new(1e-18, -3e-18);
        let v = clog1p(z);
        assert_relative_eq!(v.re, 1e-18, max_relative = 1e-12);
        assert_relative_eq!(v.im, -3e-18, max_relative = 1e-12);
    }
}
