//! Circle and torus actions, averaging and the homotopy operator.

pub mod averaging;
pub mod circle;
pub mod pullback;

pub use averaging::{
    average, average_circle, average_closed_form, delta, delta_circle, delta_parts, is_invariant, l_g, ClosedAverage, DeltaG,
};
pub use circle::{Action, CircleAction, Plane, TorusAction};
pub use pullback::{pullback_flow, TrigTensor};
