//! Reflection coefficients, the Φ integrals, the Matsubara free-energy sum
//! and the zero-temperature energy of a free-standing film.
//!
//! Everything below the physical wrappers is dimensionless: frequencies in
//! units of ω_c = c/2a, the transverse variable `y` as in
//! Φ(x) = ∫_x^∞ y ln[1 − r² e^{−k(y)}] dy with k = √(y² + (ε−1)ζ²).

use crate::dielectric::{dimensionless_params, DielectricModel, DimensionlessParams, FilmState, ModelKind};
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_semi_infinite, Estimate, Tolerance};
use crate::scalar::{lit, Real};
use crate::specialfn::zeta3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarization {
    Tm,
    Te,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::Tm, Polarization::Te];
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReflectionPair<T> {
    pub r_tm: T,
    pub r_te: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Stop the Matsubara sum once the estimated tail is below this
    /// fraction of the partial sum.
    pub matsubara_tail_tol: T,
    pub max_l: usize,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: lit!(T, 1e-10),
            abs_tol: lit!(T, 1e-14),
            matsubara_tail_tol: lit!(T, 1e-12),
            max_l: 1_000_000,
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero() && self.abs_tol > T::zero() && self.matsubara_tail_tol > T::zero())
            || self.max_l == 0
        {
            return Err(domain("QuadratureConfig", "tolerances must be positive and max_l >= 1"));
        }
        Ok(())
    }

    pub fn tolerance(&self) -> Tolerance<T> {
        Tolerance::new(self.rel_tol, self.abs_tol)
    }

    /// Same config with `rel_tol` and `abs_tol` scaled by `factor`.
    pub fn tightened(&self, factor: T) -> Self {
        Self {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FreeEnergyResult<T> {
    /// Free energy per unit area, J/m².
    pub value: T,
    pub model: ModelKind,
    /// Number of Matsubara terms evaluated, including l = 0.
    pub n_matsubara: usize,
    pub err_estimate: T,
}

/// ln(1 − e^{−k}) for k > 0 without cancellation at either end.
pub(crate) fn ln_one_minus_exp<T: Real>(k: T) -> T {
    if k < T::LN_2() {
        (-(-k).exp_m1()).ln()
    } else {
        (-(-k).exp()).ln_1p()
    }
}

/// One Matsubara mode: the data needed to evaluate r_α(y) and k(y).
#[derive(Clone, Copy, Debug)]
pub(crate) struct Mode<T> {
    pub zeta2: T,
    /// (ε − 1) ζ², i.e. ω̃² for plasma and ω̃²/(1 + δ) for Drude.
    pub w2: T,
    /// Drude at ζ = 0: TM reflects perfectly, TE not at all, k = y.
    pub drude_static: bool,
}

impl<T: Real> Mode<T> {
    pub fn new(kind: ModelKind, zeta: T, p: &DimensionlessParams<T>) -> Self {
        let w2 = p.omega_p_tilde * p.omega_p_tilde;
        match kind {
            ModelKind::Plasma => Self {
                zeta2: zeta * zeta,
                w2,
                drude_static: false,
            },
            ModelKind::Drude if zeta == T::zero() => Self {
                zeta2: T::zero(),
                w2: T::zero(),
                drude_static: true,
            },
            ModelKind::Drude => Self {
                zeta2: zeta * zeta,
                w2: w2 * zeta / (zeta + p.gamma_tilde),
                drude_static: false,
            },
        }
    }

    #[inline]
    pub fn k(&self, y: T) -> T {
        (y * y + self.w2).sqrt()
    }

    /// r_α(y) and 1 − r_α(y)², both free of cancellation.
    #[inline]
    pub fn reflection(&self, pol: Polarization, y: T, k: T) -> (T, T) {
        let four = lit!(T, 4.0);
        if self.drude_static {
            return match pol {
                Polarization::Tm => (-T::one(), T::zero()),
                Polarization::Te => (T::zero(), T::one()),
            };
        }
        match pol {
            Polarization::Te => {
                let s = k + y;
                if s == T::zero() {
                    return (T::zero(), T::one());
                }
                (self.w2 / (s * s), four * k * y / (s * s))
            }
            Polarization::Tm => {
                if self.zeta2 == T::zero() {
                    return if self.w2 == T::zero() {
                        (T::zero(), T::one())
                    } else {
                        (-T::one(), T::zero())
                    };
                }
                let s = k + y;
                let eps_zeta2 = self.zeta2 + self.w2;
                let d = self.w2 * y + self.zeta2 * s;
                let num = self.w2 * (self.zeta2 - y * s) / s;
                (num / d, four * self.zeta2 * k * eps_zeta2 * y / (d * d))
            }
        }
    }

    /// ln[1 − r_α² e^{−k}] at `y`.
    #[inline]
    pub fn log_factor(&self, pol: Polarization, y: T) -> T {
        let k = if self.drude_static { y } else { self.k(y) };
        let (r, comp) = self.reflection(pol, y, k);
        let r2 = r * r;
        if r2 == T::zero() || k == T::zero() {
            return if r2 == T::zero() { T::zero() } else { T::neg_infinity() };
        }
        if r2 <= lit!(T, 0.5) {
            (-r2 * (-k).exp()).ln_1p()
        } else {
            // 1 − r²e^{−k} = (1 − e^{−k})(1 + (1 − r²)/(e^k − 1))
            ln_one_minus_exp(k) + (comp / k.exp_m1()).ln_1p()
        }
    }

    #[inline]
    pub fn log_factor_sum(&self, y: T) -> T {
        self.log_factor(Polarization::Tm, y) + self.log_factor(Polarization::Te, y)
    }
}

/// r_TM and r_TE at dimensionless frequency ζ and transverse variable y ≥ ζ.
/// At ζ = 0 the model's zero-frequency limits are returned.
pub fn reflection<T: Real>(kind: ModelKind, zeta: T, y: T, p: &DimensionlessParams<T>) -> Result<ReflectionPair<T>> {
    if !(zeta >= T::zero()) || !(y >= zeta) {
        return Err(domain(
            "reflection",
            format!("require 0 <= zeta <= y, got zeta = {zeta}, y = {y}"),
        ));
    }
    let mode = Mode::new(kind, zeta, p);
    let k = if mode.drude_static { y } else { mode.k(y) };
    Ok(ReflectionPair {
        r_tm: mode.reflection(Polarization::Tm, y, k).0,
        r_te: mode.reflection(Polarization::Te, y, k).0,
    })
}

/// Length scale over which y·ln[…] decays, used by the semi-infinite map.
pub(crate) fn decay_scale<T: Real>(p: &DimensionlessParams<T>) -> T {
    T::one() + p.omega_p_tilde.sqrt()
}

fn phi_with<T: Real, F: FnMut(T) -> T>(
    mut g: F,
    x: T,
    p: &DimensionlessParams<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<Estimate<T>> {
    if !(x >= T::zero()) {
        return Err(domain("phi", format!("argument {x} must be non-negative")));
    }
    integrate_semi_infinite(|y| y * g(y), x, decay_scale(p), &cfg.tolerance())
}

/// Φ_α(x) = ∫_x^∞ y ln[1 − r_α²(ix, y) e^{−k}] dy.
pub fn phi_alpha<T: Real>(
    kind: ModelKind,
    pol: Polarization,
    x: T,
    p: &DimensionlessParams<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<Estimate<T>> {
    let mode = Mode::new(kind, x, p);
    phi_with(|y| mode.log_factor(pol, y), x, p, cfg)
}

/// Φ(x) = Φ_TM(x) + Φ_TE(x) as a single quadrature.
pub fn phi<T: Real>(
    kind: ModelKind,
    x: T,
    p: &DimensionlessParams<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<Estimate<T>> {
    let mode = Mode::new(kind, x, p);
    phi_with(|y| mode.log_factor_sum(y), x, p, cfg)
}

/// Φ(0): for Drude the exact −ζ(3), otherwise by quadrature.
pub fn phi_zero<T: Real>(
    kind: ModelKind,
    p: &DimensionlessParams<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<Estimate<T>> {
    match kind {
        ModelKind::Drude => Ok(Estimate::exact(-zeta3::<T>())),
        ModelKind::Plasma => phi(kind, T::zero(), p, cfg),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatsubaraSum<T> {
    pub value: T,
    pub abs_err: T,
    /// Terms evaluated by the loop.
    pub n_terms: usize,
}

/// Σ_{l ≥ 1} term(l), stopped when twice the remainder of a geometric fit to
/// the last three terms is below `matsubara_tail_tol · |offset + partial|`.
pub(crate) fn sum_from_one<T, F>(mut term: F, offset: T, cfg: &QuadratureConfig<T>) -> Result<MatsubaraSum<T>>
where
    T: Real,
    F: FnMut(usize) -> Result<Estimate<T>>,
{
    let mut sum = T::zero();
    let mut err = T::zero();
    let mut last = [T::zero(); 3];
    let mut tail = T::infinity();
    for l in 1..=cfg.max_l {
        let t = term(l)?;
        sum = sum + t.value;
        err = err + t.abs_err;
        last = [last[1], last[2], t.value];
        if l < 3 {
            continue;
        }
        let total = (offset + sum).abs();
        if last.iter().all(|v| *v == T::zero()) {
            return Ok(MatsubaraSum {
                value: sum,
                abs_err: err,
                n_terms: l,
            });
        }
        if last[1] != T::zero() && last[0] != T::zero() {
            let rho = (last[2] / last[1]).max(last[1] / last[0]);
            if rho >= T::zero() && rho < T::one() {
                tail = lit!(T, 2.0) * last[2].abs() * rho / (T::one() - rho);
                if tail <= cfg.matsubara_tail_tol * total {
                    return Ok(MatsubaraSum {
                        value: sum,
                        abs_err: err + tail,
                        n_terms: l,
                    });
                }
            }
        }
    }
    Err(Error::MatsubaraNotConverged {
        terms: cfg.max_l,
        tail: tail.as_f64(),
        partial: (offset + sum).as_f64(),
    })
}

/// Σ'_{l ≥ 0} Φ(τl) for the given model (dimensionless).
pub fn phi_matsubara_sum<T: Real>(
    kind: ModelKind,
    p: &DimensionlessParams<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MatsubaraSum<T>> {
    cfg.validate()?;
    if !(p.tau > T::zero()) {
        return Err(domain("phi_matsubara_sum", "tau must be positive"));
    }
    let half = lit!(T, 0.5);
    let zero = phi_zero(kind, p, cfg)?.scaled(half);
    let rest = sum_from_one(|l| phi(kind, p.tau * T::from_count(l), p, cfg), zero.value, cfg)?;
    Ok(MatsubaraSum {
        value: zero.value + rest.value,
        abs_err: zero.abs_err + rest.abs_err,
        n_terms: rest.n_terms + 1,
    })
}

/// ∫_0^∞ Φ_p(ζ) dζ for the plasma model (dimensionless).
pub fn phi_integral<T: Real>(p: &DimensionlessParams<T>, cfg: &QuadratureConfig<T>) -> Result<Estimate<T>> {
    cfg.validate()?;
    if p.omega_p_tilde == T::zero() {
        return Ok(Estimate::exact(T::zero()));
    }
    let inner = cfg.tightened(lit!(T, 0.01));
    let mut failure = None;
    let mut inner_err = T::zero();
    let outer = integrate_semi_infinite(
        |z| match phi(ModelKind::Plasma, z, p, &inner) {
            Ok(e) => {
                inner_err = inner_err.max(e.abs_err);
                e.value
            }
            Err(e) => {
                failure.get_or_insert(e);
                T::nan()
            }
        },
        T::zero(),
        decay_scale(p),
        &cfg.tolerance(),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    outer
}

/// Casimir free energy per unit area, J/m², from the Matsubara sum.
pub fn free_energy<T: Real>(
    model: &DielectricModel<T>,
    s: &FilmState<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<FreeEnergyResult<T>> {
    if !(s.t > T::zero()) {
        return Err(domain(
            "free_energy",
            "temperature must be positive; use zero_t_energy at T = 0",
        ));
    }
    let p = dimensionless_params(&model.material, s)?;
    let sum = phi_matsubara_sum(model.kind, &p, cfg)?;
    let prefactor = s.energy_unit() * p.tau;
    let value = prefactor * sum.value;
    if value > T::zero() {
        log::warn!("positive free energy {value:e} J/m² at a = {:e} m, T = {} K", s.a, s.t);
    }
    Ok(FreeEnergyResult {
        value,
        model: model.kind,
        n_matsubara: sum.n_terms,
        err_estimate: prefactor * sum.abs_err,
    })
}

/// Zero-temperature Casimir energy per unit area, J/m².
///
/// Uses the plasma integrand for either model: with γ(0) = 0 the Drude
/// permittivity coincides with the plasma one at every nonzero frequency.
pub fn zero_t_energy<T: Real>(
    model: &DielectricModel<T>,
    s: &FilmState<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<Estimate<T>> {
    let p = dimensionless_params(&model.material, s)?;
    Ok(phi_integral(&p, cfg)?.scaled(s.energy_unit()))
}
