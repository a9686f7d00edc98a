#![cfg_attr(not(feature = "std"), no_std)]
//! Exact exterior calculus on projective, toric and product chart atlases.

extern crate alloc;

pub mod atlas;
pub mod cohomology;
pub mod curvature;
pub mod error;
pub mod form;
pub mod laurent;
pub mod linalg;
pub mod numeric;
pub mod scalar;
pub mod structures;
pub mod weight;

pub use error::AlgebraError;
pub use form::{contract, del_op, wedge, wedge_power, Form, MultiIndex, VectorField};
pub use laurent::{normalize, Exponent, LaurentPoly};
pub use numeric::NumForm;
pub use scalar::Scalar;
