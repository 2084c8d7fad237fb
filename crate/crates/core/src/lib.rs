//! Exact Lipschitz stability constants of the argmin mapping
//! `b ↦ argmin { c'x : a_t'x <= b_t, t = 1..m }` of a linear program under
//! right-hand-side perturbations.
//!
//! All arithmetic is over arbitrary-precision rationals. The main entry points
//! are [`moduli::hoffman_constant`], [`moduli::lipschitz_usc_modulus`],
//! [`moduli::calmness_modulus`] and [`segment::connecting_subdivision`].

pub mod argmin;
pub mod cli;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod instance_file;
pub mod instances;
pub mod kkt;
pub mod lp;
pub mod moduli;
pub mod report;
pub mod segment;
pub mod subsets;
pub mod validator;

pub use argmin::{IndexSet, Limits, ProblemInstance};
pub use error::{Error, Result};
pub use exact::{ExtRational, Matrix, Rational, Vector};
pub use geometry::{HPolyhedron, Norm, VPolytope};
pub use kkt::MinimalKktFamily;
pub use moduli::{CanonicalHoffman, ModulusReport};
pub use segment::SegmentAnalysis;
