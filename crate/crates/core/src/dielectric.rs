//! Plasma and Drude permittivities at imaginary Matsubara frequencies, the
//! temperature dependence of the relaxation parameter, and the dimensionless
//! parameters of a film.

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::constants::{C, HBAR, K_B};
use crate::error::{domain, Error, Result};
use crate::scalar::{lit, Real};

/// Metal parameters. Field names in materials files carry their SI units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + DeserializeOwned", deny_unknown_fields)]
pub struct Material<T> {
    pub name: String,
    /// Plasma frequency, rad/s.
    #[serde(rename = "omega_p_rad_s")]
    pub omega_p: T,
    /// Relaxation parameter at `t_ref`, rad/s.
    #[serde(rename = "gamma_ref_rad_s")]
    pub gamma_ref: T,
    #[serde(rename = "T_ref_K")]
    pub t_ref: T,
    #[serde(rename = "T_debye_K")]
    pub t_debye: T,
    /// Exponent of the residual low-temperature branch γ ∝ T^beta_low.
    #[serde(default = "default_beta_low")]
    pub beta_low: T,
    /// Lower junction of the T⁵ branch; `T_debye / 20` when absent.
    #[serde(rename = "T_x_K", default, skip_serializing_if = "Option::is_none")]
    pub t_x: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

fn default_beta_low<T: Real>() -> T {
    lit!(T, 2.0)
}

impl<T: Real> Material<T> {
    /// Gold: ω_p = 1.37×10¹⁶ rad/s, γ(300 K) = 5.3×10¹³ rad/s, T_D = 165 K.
    pub fn gold() -> Self {
        Self {
            name: "gold".into(),
            omega_p: lit!(T, 1.37e16),
            gamma_ref: lit!(T, 5.3e13),
            t_ref: lit!(T, 300.0),
            t_debye: lit!(T, 165.0),
            beta_low: lit!(T, 2.0),
            t_x: None,
            comment: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |detail: &str| {
            Err(Error::InvalidMaterial {
                name: self.name.clone(),
                detail: detail.into(),
            })
        };
        if !(self.omega_p > T::zero()) || !self.omega_p.is_finite() {
            return fail("omega_p must be positive");
        }
        if !(self.gamma_ref >= T::zero()) || !self.gamma_ref.is_finite() {
            return fail("gamma_ref must be non-negative");
        }
        if !(self.t_ref > T::zero()) {
            return fail("T_ref must be positive");
        }
        if !(self.t_debye > T::zero()) {
            return fail("T_debye must be positive");
        }
        if !(self.beta_low > T::one()) {
            return fail("beta_low must exceed 1");
        }
        if let Some(tx) = self.t_x {
            if !(tx > T::zero() && tx < self.t_bloch()) {
                return fail("T_x must lie in (0, T_debye/4)");
            }
        }
        Ok(())
    }

    /// Upper junction between the linear and T⁵ branches, T_debye / 4.
    pub fn t_bloch(&self) -> T {
        self.t_debye / lit!(T, 4.0)
    }

    /// Lower junction between the T⁵ and T^beta_low branches.
    pub fn t_x(&self) -> T {
        self.t_x.unwrap_or(self.t_debye / lit!(T, 20.0))
    }

    /// Temperatures where γ(T) changes branch.
    pub fn gamma_joins(&self) -> [T; 2] {
        [self.t_x(), self.t_bloch()]
    }

    /// Relaxation parameter γ(T), rad/s: linear above T_debye/4, T⁵ down to
    /// T_x, T^beta_low below, joined continuously and anchored at
    /// (T_ref, gamma_ref).
    pub fn gamma_of_t(&self, t: T) -> T {
        let slope = self.gamma_ref / self.t_ref;
        let t1 = self.t_bloch();
        if t >= t1 {
            return slope * t;
        }
        let g1 = slope * t1;
        let tx = self.t_x();
        if t > tx {
            return g1 * (t / t1).powi(5);
        }
        let gx = g1 * (tx / t1).powi(5);
        if t <= T::zero() {
            return T::zero();
        }
        gx * (t / tx).powf(self.beta_low)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Plasma,
    Drude,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Plasma => "plasma",
            ModelKind::Drude => "drude",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DielectricModel<T> {
    pub kind: ModelKind,
    pub material: Material<T>,
}

impl<T: Real> DielectricModel<T> {
    pub fn new(kind: ModelKind, material: Material<T>) -> Result<Self> {
        material.validate()?;
        Ok(Self { kind, material })
    }

    pub fn plasma(material: Material<T>) -> Result<Self> {
        Self::new(ModelKind::Plasma, material)
    }

    pub fn drude(material: Material<T>) -> Result<Self> {
        Self::new(ModelKind::Drude, material)
    }

    /// ε(iξ) at temperature `t` (the temperature only matters for Drude).
    pub fn epsilon(&self, t: T, xi: T) -> Result<T> {
        match self.kind {
            ModelKind::Plasma => epsilon_plasma(&self.material, xi),
            ModelKind::Drude => epsilon_drude(&self.material, t, xi),
        }
    }
}

/// Film thickness `a` (m) and temperature `t` (K).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilmState<T> {
    pub a: T,
    pub t: T,
}

impl<T: Real> FilmState<T> {
    pub fn new(a: T, t: T) -> Result<Self> {
        let s = Self { a, t };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > T::zero()) || !self.a.is_finite() {
            return Err(domain("FilmState", format!("thickness {} must be positive", self.a)));
        }
        if !(self.t >= T::zero()) || !self.t.is_finite() {
            return Err(domain(
                "FilmState",
                format!("temperature {} must be non-negative", self.t),
            ));
        }
        Ok(())
    }

    /// Characteristic frequency ω_c = c / 2a, rad/s.
    pub fn omega_c(&self) -> T {
        lit!(T, C) / (lit!(T, 2.0) * self.a)
    }

    /// Energy-per-area unit ħc / (32π² a³), J/m².
    pub fn energy_unit(&self) -> T {
        lit!(T, HBAR * C) / (lit!(T, 32.0) * T::PI() * T::PI() * self.a.powi(3))
    }

    /// τ = 4π k_B T a / (ħ c).
    pub fn tau(&self) -> T {
        lit!(T, 4.0) * T::PI() * lit!(T, K_B / (HBAR * C)) * self.t * self.a
    }
}

/// ω̃_p, τ and γ̃ of a film.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionlessParams<T> {
    pub omega_p_tilde: T,
    pub tau: T,
    pub gamma_tilde: T,
}

impl<T: Real> DimensionlessParams<T> {
    pub fn new(omega_p_tilde: T, tau: T, gamma_tilde: T) -> Result<Self> {
        if !(omega_p_tilde >= T::zero() && tau >= T::zero() && gamma_tilde >= T::zero()) {
            return Err(domain("DimensionlessParams", "all parameters must be non-negative"));
        }
        Ok(Self {
            omega_p_tilde,
            tau,
            gamma_tilde,
        })
    }

    /// δ_l = γ̃ / ζ_l.
    pub fn delta(&self, l: usize) -> T {
        self.gamma_tilde / (self.tau * T::from_count(l))
    }

    pub fn with_tau(self, tau: T) -> Self {
        Self { tau, ..self }
    }

    pub fn with_gamma_tilde(self, gamma_tilde: T) -> Self {
        Self { gamma_tilde, ..self }
    }
}

/// ξ_l = 2π k_B T l / ħ, rad/s.
pub fn matsubara_xi<T: Real>(t: T, l: usize) -> Result<T> {
    if !(t > T::zero()) {
        return Err(domain("matsubara_xi", format!("temperature {t} must be positive")));
    }
    Ok(lit!(T, 2.0) * T::PI() * lit!(T, K_B / HBAR) * t * T::from_count(l))
}

pub fn gamma_of_t<T: Real>(mat: &Material<T>, t: T) -> Result<T> {
    if !(t >= T::zero()) {
        return Err(domain("gamma_of_t", format!("temperature {t} must be non-negative")));
    }
    Ok(mat.gamma_of_t(t))
}

/// ε = 1 + ω_p² / ξ².
pub fn epsilon_plasma<T: Real>(mat: &Material<T>, xi: T) -> Result<T> {
    if !(xi > T::zero()) {
        return Err(domain("epsilon_plasma", "xi must be positive"));
    }
    let r = mat.omega_p / xi;
    Ok(T::one() + r * r)
}

/// ε = 1 + ω_p² / (ξ (ξ + γ(T))).
pub fn epsilon_drude<T: Real>(mat: &Material<T>, t: T, xi: T) -> Result<T> {
    if !(xi > T::zero()) {
        return Err(domain("epsilon_drude", "xi must be positive"));
    }
    let g = gamma_of_t(mat, t)?;
    Ok(T::one() + (mat.omega_p / xi) * (mat.omega_p / (xi + g)))
}

/// δ_l = γ(T) / ξ_l.
pub fn delta_l<T: Real>(mat: &Material<T>, t: T, l: usize) -> Result<T> {
    if l == 0 {
        return Err(domain("delta_l", "l must be at least 1"));
    }
    Ok(gamma_of_t(mat, t)? / matsubara_xi(t, l)?)
}

pub fn dimensionless_params<T: Real>(mat: &Material<T>, s: &FilmState<T>) -> Result<DimensionlessParams<T>> {
    s.validate()?;
    let two_a_over_c = lit!(T, 2.0) * s.a / lit!(T, C);
    DimensionlessParams::new(
        mat.omega_p * two_a_over_c,
        s.tau(),
        gamma_of_t(mat, s.t)? * two_a_over_c,
    )
}
