//! Thermal correction ΔF = F − E, pressure P = −∂F/∂a and entropy
//! S = −∂F/∂T.
//!
//! For the plasma model ΔF comes from the Abel–Plana representation when
//! τ is small enough for the continuation, and from subtracting the
//! Matsubara sum and the zero-temperature integral otherwise. The Drude
//! correction is assembled as ΔF_p + F_D⁽⁰⁾ − F_p⁽⁰⁾ + F^(γ), so both models
//! share the same plasma part.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abel_plana;
use crate::asymptotics::f_gamma_exact;
use crate::constants::{C, HBAR, K_B};
use crate::dielectric::{dimensionless_params, DielectricModel, FilmState, ModelKind};
use crate::differentiate::{bounded_step, central_richardson, Derivative, DiffConfig};
use crate::error::{domain, Result};
use crate::lifshitz::{phi_integral, phi_matsubara_sum, phi_zero, zero_t_energy, QuadratureConfig};
use crate::quadrature::Estimate;
use crate::scalar::{lit, Real};

/// How the plasma thermal correction is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Abel–Plana where applicable, direct subtraction otherwise.
    #[default]
    Auto,
    AbelPlana,
    Direct,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Auto => "auto",
            Route::AbelPlana => "abel-plana",
            Route::Direct => "direct",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermoConfig<T> {
    pub quad: QuadratureConfig<T>,
    pub diff: DiffConfig<T>,
    pub route: Route,
    /// Also evaluate the thermal correction by the other route.
    pub cross_check: bool,
}

impl<T: Real> Default for ThermoConfig<T> {
    fn default() -> Self {
        Self {
            quad: QuadratureConfig::default(),
            diff: DiffConfig::default(),
            route: Route::Auto,
            cross_check: false,
        }
    }
}

impl<T: Real> ThermoConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.quad.validate()?;
        self.diff.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalCorrection<T> {
    /// ΔF, J/m².
    pub value: Estimate<T>,
    pub route: Route,
    /// ΔF by the other route, when requested and available.
    pub cross_check: Option<Estimate<T>>,
}

fn resolve_route<T: Real>(
    route: Route,
    kind: ModelKind,
    states: &[FilmState<T>],
    model: &DielectricModel<T>,
) -> Result<Route> {
    let ap_ok = || -> Result<bool> {
        for s in states {
            if !abel_plana::applicable(&dimensionless_params(&model.material, s)?) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    match route {
        Route::Direct => Ok(Route::Direct),
        Route::AbelPlana => {
            if ap_ok()? {
                Ok(Route::AbelPlana)
            } else {
                Err(domain(
                    "thermal_correction",
                    format!("Abel-Plana route not applicable to the {kind} model at these parameters"),
                ))
            }
        }
        Route::Auto => Ok(if ap_ok()? { Route::AbelPlana } else { Route::Direct }),
    }
}

/// Plasma ΔF in J/m² by a fixed route.
fn plasma_correction<T: Real>(
    model: &DielectricModel<T>,
    s: &FilmState<T>,
    route: Route,
    quad: &QuadratureConfig<T>,
) -> Result<Estimate<T>> {
    let p = dimensionless_params(&model.material, s)?;
    let u = s.energy_unit();
    match route {
        Route::AbelPlana => Ok(abel_plana::thermal_correction(&p, quad)?.total().scaled(u)),
        _ => {
            let sum = phi_matsubara_sum(ModelKind::Plasma, &p, quad)?;
            let integral = phi_integral(&p, quad)?;
            let f = Estimate {
                value: p.tau * sum.value,
                abs_err: p.tau * sum.abs_err,
                evaluations: sum.n_terms,
            };
            Ok((f - integral).scaled(u))
        }
    }
}

/// F_D − F_p in J/m².
fn drude_minus_plasma<T: Real>(
    model: &DielectricModel<T>,
    s: &FilmState<T>,
    quad: &QuadratureConfig<T>,
) -> Result<Estimate<T>> {
    let p = dimensionless_params(&model.material, s)?;
    let half = lit!(T, 0.5) * p.tau * s.energy_unit();
    let zero_d = phi_zero(ModelKind::Drude, &p, quad)?;
    let zero_p = phi_zero(ModelKind::Plasma, &p, quad)?;
    Ok((zero_d - zero_p).scaled(half) + f_gamma_exact(s, &model.material, quad)?)
}

fn correction_by<T: Real>(
    model: &DielectricModel<T>,
    s: &FilmState<T>,
    route: Route,
    quad: &QuadratureConfig<T>,
) -> Result<Estimate<T>> {
    let plasma = plasma_correction(model, s, route, quad)?;
    match model.kind {
        ModelKind::Plasma => Ok(plasma),
        ModelKind::Drude => Ok(plasma + drude_minus_plasma(model, s, quad)?),
    }
}

/// ΔF = F − E, J/m².
pub fn thermal_correction<T: Real>(
    model: &DielectricModel<T>,
    s: &FilmState<T>,
    cfg: &ThermoConfig<T>,
) -> Result<ThermalCorrection<T>> {
    cfg.validate()?;
    if !(s.t > T::zero()) {
        return Err(domain("thermal_correction", "temperature must be positive"));
    }
    let route = resolve_route(cfg.route, model.kind, &[*s], model)?;
    let value = correction_by(model, s, route, &cfg.quad)?;
    let cross_check = if cfg.cross_check {
        match route {
            Route::AbelPlana => Some(correction_by(model, s, Route::Direct, &cfg.quad)?),
            _ => match resolve_route(Route::AbelPlana, model.kind, &[*s], model) {
                Ok(r) => Some(correction_by(model, s, r, &cfg.quad)?),
                Err(_) => None,
            },
        }
    } else {
        None
    };
    if model.kind == ModelKind::Plasma && value.value > T::zero() {
        log::warn!(
            "positive plasma thermal correction {:e} J/m² at a = {:e} m, T = {} K",
            value.value,
            s.a,
            s.t
        );
    }
    Ok(ThermalCorrection {
        value,
        route,
        cross_check,
    })
}

/// Entropy S = −∂ΔF/∂T, J/(m²·K).
pub fn entropy<T: Real>(model: &DielectricModel<T>, s: &FilmState<T>, cfg: &ThermoConfig<T>) -> Result<Derivative<T>> {
    cfg.validate()?;
    if !(s.t > T::zero()) {
        return Err(domain(
            "entropy",
            "temperature must be positive; use the asymptotic forms at T = 0",
        ));
    }
    let joins = model.material.gamma_joins();
    let joins: &[T] = if model.kind == ModelKind::Drude { &joins } else { &[] };
    let h = bounded_step("T", s.t, cfg.diff.rel_step * s.t, T::zero(), joins)?;
    let at = |t: T| FilmState { a: s.a, t };
    let route = resolve_route(cfg.route, model.kind, &[at(s.t - h), at(s.t + h)], model)?;
    let d = central_richardson(
        |t| Ok(correction_by(model, &at(t), route, &cfg.quad)?.value),
        s.t,
        h,
        cfg.diff.richardson_levels,
    )?;
    let value = -d.value;
    if model.kind == ModelKind::Plasma && value < T::zero() {
        log::warn!(
            "negative plasma entropy {value:e} J/(m²·K) at a = {:e} m, T = {} K",
            s.a,
            s.t
        );
    }
    Ok(Derivative { value, ..d })
}

/// Pressure split into its zero-temperature and thermal parts, Pa.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pressure<T> {
    /// −∂E/∂a
    pub zero_t: Derivative<T>,
    /// −∂ΔF/∂a
    pub thermal: Derivative<T>,
    pub total: T,
    pub abs_err: T,
}

/// P = −∂F/∂a = −∂E/∂a − ∂ΔF/∂a, Pa. At T = 0 the thermal part is zero.
pub fn pressure<T: Real>(model: &DielectricModel<T>, s: &FilmState<T>, cfg: &ThermoConfig<T>) -> Result<Pressure<T>> {
    cfg.validate()?;
    s.validate()?;
    let h = bounded_step("a", s.a, cfg.diff.rel_step * s.a, T::zero(), &[])?;
    let at = |a: T| FilmState { a, t: s.t };
    let levels = cfg.diff.richardson_levels;
    let e = central_richardson(|a| Ok(zero_t_energy(model, &at(a), &cfg.quad)?.value), s.a, h, levels)?;
    let zero_t = Derivative { value: -e.value, ..e };
    let thermal = if s.t > T::zero() {
        let route = resolve_route(cfg.route, model.kind, &[at(s.a - h), at(s.a + h)], model)?;
        let d = central_richardson(
            |a| Ok(correction_by(model, &at(a), route, &cfg.quad)?.value),
            s.a,
            h,
            levels,
        )?;
        Derivative { value: -d.value, ..d }
    } else {
        Derivative {
            value: T::zero(),
            abs_err: T::zero(),
            step: h,
        }
    };
    Ok(Pressure {
        zero_t,
        thermal,
        total: zero_t.value + thermal.value,
        abs_err: zero_t.abs_err + thermal.abs_err,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermoResult<T> {
    pub model: ModelKind,
    /// F = E + ΔF, J/m².
    pub free_energy: T,
    pub free_energy_err: T,
    /// E, J/m².
    pub zero_t_energy: T,
    pub thermal_correction: T,
    pub thermal_correction_err: T,
    pub route: Route,
    /// Pa
    pub pressure: T,
    pub pressure_err: T,
    /// J/(m²·K)
    pub entropy: T,
    pub entropy_err: T,
}

/// Free energy, pressure and entropy at one (a, T > 0).
pub fn evaluate<T: Real>(
    model: &DielectricModel<T>,
    s: &FilmState<T>,
    cfg: &ThermoConfig<T>,
) -> Result<ThermoResult<T>> {
    let e = zero_t_energy(model, s, &cfg.quad)?;
    let dfc = thermal_correction(model, s, cfg)?;
    let p = pressure(model, s, cfg)?;
    let sv = entropy(model, s, cfg)?;
    Ok(ThermoResult {
        model: model.kind,
        free_energy: e.value + dfc.value.value,
        free_energy_err: e.abs_err + dfc.value.abs_err,
        zero_t_energy: e.value,
        thermal_correction: dfc.value.value,
        thermal_correction_err: dfc.value.abs_err,
        route: dfc.route,
        pressure: p.total,
        pressure_err: p.abs_err,
        entropy: sv.value,
        entropy_err: sv.abs_err,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WindowCheck<T> {
    pub inside: bool,
    /// k_B T / (ħc/2a)
    pub ratio: T,
    pub message: String,
}

/// Flags states with k_B T > 0.1 ħc/(2a), where the low-temperature
/// asymptotics are not expected to hold.
pub fn validate_window<T: Real>(s: &FilmState<T>) -> WindowCheck<T> {
    let ratio = lit!(T, 2.0 * K_B / (HBAR * C)) * s.t * s.a;
    let inside = ratio <= lit!(T, 0.1);
    let message = if inside {
        format!("inside low-temperature window (k_B T = {ratio:.3e} ħc/2a)")
    } else {
        format!("outside low-temperature window: k_B T = {ratio:.3e} ħc/2a exceeds 0.1")
    };
    WindowCheck { inside, ratio, message }
}

/// Highest temperature inside the window at thickness `a`, K.
pub fn window_limit<T: Real>(a: T) -> T {
    lit!(T, 0.1 * HBAR * C / (2.0 * K_B)) / a
}
