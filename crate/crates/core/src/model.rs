//! A model: coordinates, a Poisson or coupling structure, an action with momentum data and
//! sampling boxes.

use std::collections::BTreeMap;

use crate::action::Action;
use crate::algebra::RationalFn;
use crate::coupling::{data_to_poisson, Foliation, GeometricData};
use crate::error::{Error, Result};
use crate::pipeline::Mode;
use crate::sampling::SampleBox;
use crate::tensor::{Form, Multivector};

/// Everything a pipeline run needs, in exact form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    pub coords: Vec<String>,
    pub foliation: Option<Foliation>,
    /// Geometric data `(γ, σ, P)`; unverified until a pipeline checks them.
    pub data: Option<GeometricData>,
    /// A bivector given directly, used when there are no geometric data.
    pub pi: Option<Multivector>,
    pub action: Option<Action>,
    /// One 1-form per generator.
    pub mu: Vec<Form>,
    pub mode: Mode,
    /// Momentum map components in hamiltonian mode.
    pub j: Option<Vec<RationalFn>>,
    /// Coordinates that vanish on the distinguished leaf `S`; empty when there is none.
    pub leaf: Vec<usize>,
    pub boxes: BTreeMap<String, SampleBox>,
    pub seed: u64,
}

impl Model {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The box called `name`, or the first one when `name` is `None`.
    pub fn sample_box(&self, name: Option<&str>) -> Result<&SampleBox> {
        match name {
            Some(n) => self.boxes.get(n).ok_or_else(|| Error::Spec(format!("no box named '{n}'"))),
            None => self.boxes.values().next().ok_or_else(|| Error::Spec("model declares no box".into())),
        }
    }

    pub fn action(&self) -> Result<&Action> {
        self.action.as_ref().ok_or_else(|| Error::Spec("model declares no action".into()))
    }

    pub fn data(&self) -> Result<&GeometricData> {
        self.data.as_ref().ok_or_else(|| Error::Spec("model declares no geometric data".into()))
    }

    /// The Poisson bivector: given directly, or assembled from verified geometric data.
    pub fn poisson(&self) -> Result<Multivector> {
        if let Some(p) = &self.pi {
            return Ok(p.clone());
        }
        let gd = self.data()?.clone().verified()?;
        Ok(data_to_poisson(&gd)?.pi())
    }

    /// Where the leaf `S` meets a sample point: the leaf coordinates set to zero.
    pub fn project_to_leaf(&self, p: &[crate::Rational]) -> Vec<crate::Rational> {
        let mut q = p.to_vec();
        for &c in &self.leaf {
            q[c] = num_traits::Zero::zero();
        }
        q
    }
}
