//! Exact averaging of Poisson and Dirac structures under circle and torus actions.

pub mod action;
pub mod algebra;
pub mod coupling;
pub mod dirac;
pub mod error;
pub mod fixtures;
pub mod model;
pub mod moser;
pub mod pipeline;
pub mod report;
pub mod sampling;
pub mod tensor;

pub use algebra::{rat, Matrix, Poly, Rational, RationalFn, TrigPoly};
pub use error::{Error, Result};
pub use action::{Action, CircleAction, Plane, TorusAction};
pub use coupling::{Connection, CouplingPoisson, Foliation, GeometricData};
pub use dirac::{DiracFrame, DiracSection};
pub use model::Model;
pub use pipeline::Mode;
pub use report::{CheckOutcome, Report, Witness};
pub use sampling::{Point, SampleBox};
pub use tensor::{Form, Multivector, Tensor, VectorField, VectorValued1Form};
