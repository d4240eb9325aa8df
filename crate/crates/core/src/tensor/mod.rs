//! Multivector fields, differential forms and their brackets.

pub mod alt;
pub mod any;
pub mod bigrade;
pub mod multivector;
pub mod schouten;
pub mod vv;

pub use any::Tensor;
pub use bigrade::{BigradeContext, DSplit};
pub use multivector::{Form, Multivector, VectorField};
pub use schouten::{hamiltonian_vector_field, jacobiator, lie_derivative_multivector, poisson_bracket, schouten};
pub use vv::{fn_bracket, VectorValued1Form, VectorValued2Form};
