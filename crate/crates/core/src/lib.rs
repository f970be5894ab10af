//! Geometry of forcing conditions on hyperspheres.
//!
//! A coloring `f : R^n -> colors` satisfies a *forcing condition* when every
//! admissible sphere that carries a monochromatic point set with a given
//! property passes that color on to its center. This crate provides the
//! pieces needed to state, witness, and falsify such conditions:
//!
//! * dual-mode (exact rational / `f64`) scalars, points, and simplices
//!   ([`scalar`], [`point`], [`simplex`]);
//! * realizability of edge-length functions and their circumradii
//!   ([`lengths`]);
//! * sphere intersections, caps, inscribed and chained witness
//!   constructions ([`sphere`]);
//! * a catalog of colorings of interest ([`coloring`]);
//! * point-set properties that trigger forcing ([`property`]);
//! * the checking/falsification engine and finite-configuration
//!   propagation ([`engine`]), plus serializable run reports ([`report`]).

// matrix code reads better with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod admissible;
pub mod coloring;
pub mod engine;
pub mod error;
pub mod lengths;
mod linalg;
pub mod point;
pub mod property;
pub mod report;
pub mod scalar;
pub mod simplex;
pub mod sphere;

pub use admissible::AdmissibleValues;
pub use coloring::Coloring;
pub use engine::{
    check_sphere, excluded_radii, falsify, propagate, validate_certificate, Budgets, CenterSet,
    ColorSpace, FiniteConfig, Outcome, QCondition, ViolationCert,
};
pub use error::{ColoringError, EngineError, GeometryError, PropertyError, SphereError};
pub use point::Point;
pub use property::Property;
pub use report::{PropagationReport, Report};
pub use scalar::{Mode, Scalar, Tol};
pub use simplex::Simplex;
pub use sphere::Sphere;
