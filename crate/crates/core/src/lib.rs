//! Casimir free energy, pressure and entropy of free-standing metallic films
//! from the Lifshitz formula, for the plasma and Drude dielectric models.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod abel_plana;
pub mod asymptotics;
pub mod constants;
pub mod dielectric;
pub mod differentiate;
pub mod error;
pub mod lifshitz;
pub mod materials;
pub mod quadrature;
pub mod scalar;
pub mod specialfn;
pub mod thermo;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Material = dielectric::Material<f64>;
pub type DielectricModel = dielectric::DielectricModel<f64>;
pub type FilmState = dielectric::FilmState<f64>;
pub type DimensionlessParams = dielectric::DimensionlessParams<f64>;
pub type QuadratureConfig = lifshitz::QuadratureConfig<f64>;
pub type DiffConfig = differentiate::DiffConfig<f64>;
pub type ThermoConfig = thermo::ThermoConfig<f64>;
pub type Estimate = quadrature::Estimate<f64>;
