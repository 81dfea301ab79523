//! Numerical workbench for gauge fields localised in velocity space.
//!
//! The matter field `φ` lives on a periodic 4D lattice. The gauge field `D`
//! is a function of the four velocity coordinates `ẋ` and reaches space-time
//! only implicitly, through an analytic map `ẋ(x)`. The Jacobian
//! `λ^ν_μ = ∂_μ ẋ^ν` couples the velocity index space to the space-time index
//! space. From a concrete model Lagrangian the crate assembles the strength
//! tensors `F`, `F⁽¹⁾`, `F⁽²⁾` and the currents `J⁽¹⁾`, `j⁽²⁾`, `J⁽²⁾` of the
//! formalism, and verifies their algebraic identities, gauge covariance and
//! conservation properties on the lattice.
//!
//! Module map:
//!
//! * [`lie`] — Lie algebra representations and structure constants,
//! * [`lattice`] — periodic 4D grid, sampled tensor fields, central
//!   finite differences,
//! * [`kinematics`] — analytic velocity maps `ẋ(x)`, the λ tensor, and
//!   velocity-space gauge parameters `p_α(ẋ)`,
//! * [`fields`] — matter/gauge fields, infinitesimal gauge transformations,
//!   the model Lagrangian and its derivative formulas,
//! * [`noether`] — strength tensors, currents, invariance-condition
//!   residuals, conservation and covariance checks,
//! * [`standard_gauge`] — an independently coded space-time-gauge
//!   implementation used as a reduction oracle,
//! * [`report`] — residual/check records and their CSV renderings.
//!
//! All numerics are generic over the floating-point scalar via [`Real`];
//! concrete `f64` aliases are exported at the crate root.

// tensor kernels index with explicit loop variables on purpose: the loops
// mirror the index notation of the formulas they implement
#![allow(clippy::needless_range_loop)]
#![allow(clippy::manual_is_multiple_of)]

use std::fmt;

use num_complex::Complex;
use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive};

pub mod error;
pub mod fields;
pub mod kinematics;
pub mod lattice;
pub mod lie;
pub mod matrix;
pub mod noether;
pub mod standard_gauge;
pub mod report;

/// Floating-point scalar the whole crate is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

/// Convert an `f64` literal into the working scalar type.
#[inline]
pub fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("f64 literal must convert into the scalar type")
}

/// Convert a scalar into `f64` (for reports and thresholds).
#[inline]
pub fn to_f64<T: Real>(v: T) -> f64 {
    v.to_f64().expect("scalar must convert into f64")
}

/// Complex number over the working scalar.
pub type Cplx<T> = Complex<T>;

/// A tolerance stated for `f64`, clamped from below so that it stays
/// meaningful for lower-precision scalars.
#[inline]
pub fn spec_tol<T: Real>(f64_value: f64) -> T {
    let stated = lit::<T>(f64_value);
    let floor = T::epsilon() * lit::<T>(64.0);
    stated.max(floor)
}

pub use error::CoreError;
pub use fields::{FieldConfiguration, GaugeField, MatterField};
pub use kinematics::{GaugeParameterSet, LambdaField, ScalarFunction, VelocityField};
pub use lattice::{FieldShape, Lattice, LatticeField};
pub use lie::LieAlgebra;
pub use noether::{CurrentField, StrengthField};

/// Default working precision.
pub type Scalar = f64;

pub type Complex64 = Complex<f64>;
pub type LieAlgebra64 = lie::LieAlgebra<f64>;
pub type Lattice64 = lattice::Lattice<f64>;
pub type LatticeField64 = lattice::LatticeField<f64>;
pub type VelocityField64 = kinematics::VelocityField<f64>;
pub type LambdaField64 = kinematics::LambdaField<f64>;
pub type GaugeParameterSet64 = kinematics::GaugeParameterSet<f64>;
pub type MatterField64 = fields::MatterField<f64>;
pub type GaugeField64 = fields::GaugeField<f64>;
pub type FieldConfiguration64 = fields::FieldConfiguration<f64>;
pub type StrengthField64 = noether::StrengthField<f64>;
pub type CurrentField64 = noether::CurrentField<f64>;

pub type LieAlgebra32 = lie::LieAlgebra<f32>;
pub type Lattice32 = lattice::Lattice<f32>;
pub type LatticeField32 = lattice::LatticeField<f32>;
