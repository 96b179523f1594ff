//! Radial analysis of a polarizable spin-0 particle in a Coulomb field.
//!
//! The reduced radial equation
//!
//! ```text
//! f'' + ( −K² + 2εα/r − J²/r² + Σ²/r⁴ ) f = 0,   C(r) = f(r)/r
//! ```
//!
//! is studied through its turning-point quartic ([`quartic_analysis`]), its
//! mapping onto the double confluent Heun equation ([`heun_map`]), the energy
//! at which bound motion first becomes possible ([`bifurcation`]), a Ritz
//! estimate of the ground state ([`variational`]) and direct numerical
//! integration with field reconstruction ([`radial_ode`]).
//!
//! Every kernel is generic over [`Real`] (`f32`/`f64`); the aliases below fix
//! the common `f64` instantiation.

pub mod bifurcation;
pub mod error;
pub mod heun_map;
pub mod params;
pub mod quartic_analysis;
pub mod radial_ode;
pub mod roots;
pub mod scalar;
pub mod variational;

pub use error::{Error, Result};
pub use params::{derive, p_squared, DerivedParams, PhysicalParams};
pub use quartic_analysis::{Convention, MotionInterval, QuarticAnalysis, Regime};
pub use scalar::{Complex, Real};

pub type PhysicalParamsF64 = params::PhysicalParams<f64>;
pub type PhysicalParamsF32 = params::PhysicalParams<f32>;
pub type DerivedParamsF64 = params::DerivedParams<f64>;
pub type QuarticAnalysisF64 = quartic_analysis::QuarticAnalysis<f64>;
pub type HeunParamsF64 = heun_map::HeunParams<f64>;
pub type DoubleRootGeometryF64 = bifurcation::DoubleRootGeometry<f64>;
pub type VariationalResultF64 = variational::VariationalResult<f64>;
pub type TrialStateF64 = variational::TrialState<f64>;
pub type RadialSolutionF64 = radial_ode::RadialSolution<f64>;
pub type FieldComponentsF64 = radial_ode::FieldComponents<f64>;
