//! Bundled models.

use std::collections::BTreeMap;

use crate::action::{Action, CircleAction};
use crate::algebra::{rat, RationalFn};
use crate::coupling::{Connection, Foliation, GeometricData};
use crate::model::Model;
use crate::pipeline::Mode;
use crate::sampling::SampleBox;
use crate::tensor::{Form, Multivector};

fn names(s: &[&str]) -> Vec<String> {
    s.iter().map(|x| x.to_string()).collect()
}

/// Parses an expression in the model's coordinates; fixtures are static so this cannot fail.
fn ex(coords: &[String], s: &str) -> RationalFn {
    RationalFn::parse(s, coords).unwrap_or_else(|e| panic!("fixture expression '{s}': {e}"))
}

fn form(coords: &[String], degree: usize, terms: &[(&[usize], &str)]) -> Form {
    let n = coords.len();
    Form::from_terms(n, degree, terms.iter().map(|(k, s)| (k.to_vec(), ex(coords, s)))).expect("fixture form")
}

fn bivector(coords: &[String], terms: &[(&[usize], &str)]) -> Multivector {
    let n = coords.len();
    Multivector::from_terms(n, 2, terms.iter().map(|(k, s)| (k.to_vec(), ex(coords, s)))).expect("fixture bivector")
}

fn vector(coords: &[String], comps: &[&str]) -> Multivector {
    Multivector::from_vec(comps.iter().map(|s| ex(coords, s)).collect())
}

fn boxes(n: usize, r: (i64, i64)) -> BTreeMap<String, SampleBox> {
    BTreeMap::from([("default".to_string(), SampleBox::cube(n, rat(r.0, r.1)))])
}

fn rotation(n: usize, i: usize, j: usize) -> Option<Action> {
    Some(Action::Circle(CircleAction::rotation(n, i, j).expect("fixture plane")))
}

/// `R⁴` with the flat connection, `σ = dx1∧dx2`, `P = ∂y1∧∂y2` and the rotation of the fibers.
pub fn flat() -> Model {
    let c = names(&["x1", "x2", "y1", "y2"]);
    let fol = Foliation::split(4, 2).expect("split");
    let data = GeometricData::new(
        Connection::flat(fol.clone()),
        form(&c, 2, &[(&[0, 1], "1")]),
        bivector(&c, &[(&[2, 3], "1")]),
    )
    .expect("flat data");
    Model {
        name: "flat".into(),
        foliation: Some(fol),
        data: Some(data),
        pi: None,
        action: rotation(4, 2, 3),
        mu: vec![form(&c, 1, &[(&[2], "y1"), (&[3], "y2")])],
        mode: Mode::Hamiltonian,
        j: Some(vec![ex(&c, "1/2*y1^2 + 1/2*y2^2")]),
        leaf: vec![2, 3],
        boxes: boxes(4, (1, 2)),
        seed: 7,
        coords: c,
    }
}

/// Lifts `h_i = ∂x_i + P♯dH_i` with `H1 = x2 y1 + x1 (y1² + y2²)/2`, `H2 = x1 y2`, the curvature
/// fixing `σ12 = 2 − (y2 − y1 + x1 x2 + x1² y1)`, and the rotation of `(y1, y2)`.
fn e4_with(name: &str, j: &str, mode: Mode) -> Model {
    let c = names(&["x1", "x2", "y1", "y2"]);
    let fol = Foliation::split(4, 2).expect("split");
    // P♯dy1 = ∂y2, P♯dy2 = −∂y1
    let h1 = vector(&c, &["1", "0", "-x1*y2", "x2 + x1*y1"]);
    let h2 = vector(&c, &["0", "1", "-x1", "0"]);
    let conn = Connection::from_lifts(fol.clone(), &[h1, h2]).expect("E4 lifts");
    let data = GeometricData::new(
        conn,
        form(&c, 2, &[(&[0, 1], "2 - y2 + y1 - x1*x2 - x1^2*y1")]),
        bivector(&c, &[(&[2, 3], "1")]),
    )
    .expect("E4 data");
    let jf = ex(&c, j);
    Model {
        name: name.into(),
        foliation: Some(fol),
        data: Some(data),
        pi: None,
        action: rotation(4, 2, 3),
        mu: vec![Form::differential(&jf)],
        mode,
        j: Some(vec![jf]),
        leaf: Vec::new(),
        boxes: boxes(4, (1, 2)),
        seed: 11,
        coords: c,
    }
}

/// The four-dimensional model with non-invariant lifts, averaged in locally hamiltonian mode.
pub fn e4() -> Model {
    e4_with("e4", "1/2*y1^2 + 1/2*y2^2", Mode::LocallyHamiltonian)
}

/// E4 with a momentum map whose horizontal differential has a nonzero average.
pub fn e4_adiabatic() -> Model {
    e4_with("e4-adiabatic", "1/2*y1^2 + 1/2*y2^2 + x1*x2 + x1^2*x2", Mode::Hamiltonian)
}

/// E4 with the adiabatic momentum map shifted by the Casimir `x1 x2 + x1² x2`.
pub fn e4_casimir_shifted() -> Model {
    e4_with("e4-casimir-shifted", "1/2*y1^2 + 1/2*y2^2 + x1*x2 + x1^2*x2 - x1*x2 - x1^2*x2", Mode::Hamiltonian)
}

/// `Π′ = y1 ∂x1∧∂y2 + ∂x2∧∂y1`, which fails the Jacobi identity.
pub fn nonintegrable() -> Model {
    let c = names(&["x1", "x2", "y1", "y2"]);
    Model {
        name: "nonintegrable".into(),
        foliation: Some(Foliation::split(4, 2).expect("split")),
        data: None,
        pi: Some(bivector(&c, &[(&[0, 3], "y1"), (&[1, 2], "1")])),
        action: None,
        mu: Vec::new(),
        mode: Mode::Compatible,
        j: None,
        leaf: Vec::new(),
        boxes: boxes(4, (1, 2)),
        seed: 3,
        coords: c,
    }
}

/// Flat data on `R³ × R²` with `σ = dx1∧dx2 + x1 dx2∧dx3`, which is not closed.
pub fn sigma_perturbed() -> Model {
    let c = names(&["x1", "x2", "x3", "y1", "y2"]);
    let fol = Foliation::split(5, 3).expect("split");
    let data = GeometricData::new(
        Connection::flat(fol.clone()),
        form(&c, 2, &[(&[0, 1], "1"), (&[1, 2], "x1")]),
        bivector(&c, &[(&[3, 4], "1")]),
    )
    .expect("perturbed data");
    Model {
        name: "sigma-perturbed".into(),
        foliation: Some(fol),
        data: Some(data),
        pi: None,
        action: None,
        mu: Vec::new(),
        mode: Mode::Compatible,
        j: None,
        leaf: Vec::new(),
        boxes: boxes(5, (1, 2)),
        seed: 5,
        coords: c,
    }
}

/// `R² × R³` with the Lie–Poisson structure of `so(3)*` on the fibers, `h_i = ∂x_i + P♯dy_i`,
/// `σ = (1 − y3) dx1∧dx2` from the curvature, and the rotation of `(y1, y2)` with the non-closed `μ = −dy3 + y1 d|y|²`.
/// The symplectic leaf `S = {y = 0}` consists of fixed points.
pub fn leaf() -> Model {
    let c = names(&["x1", "x2", "y1", "y2", "y3"]);
    let fol = Foliation::split(5, 2).expect("split");
    let h1 = vector(&c, &["1", "0", "0", "y3", "-y2"]);
    let h2 = vector(&c, &["0", "1", "-y3", "0", "y1"]);
    let conn = Connection::from_lifts(fol.clone(), &[h1, h2]).expect("leaf lifts");
    let data = GeometricData::new(
        conn,
        form(&c, 2, &[(&[0, 1], "1 - y3")]),
        bivector(&c, &[(&[2, 3], "y3"), (&[3, 4], "y1"), (&[2, 4], "-y2")]),
    )
    .expect("leaf data");
    Model {
        name: "leaf".into(),
        foliation: Some(fol),
        data: Some(data),
        pi: None,
        action: rotation(5, 2, 3),
        mu: vec![form(&c, 1, &[(&[2], "2*y1^2"), (&[3], "2*y1*y2"), (&[4], "-1 + 2*y1*y3")])],
        mode: Mode::Compatible,
        j: None,
        leaf: vec![2, 3, 4],
        boxes: boxes(5, (1, 4)),
        seed: 13,
        coords: c,
    }
}

/// Every bundled model.
pub fn all() -> Vec<Model> {
    vec![flat(), e4(), e4_adiabatic(), e4_casimir_shifted(), nonintegrable(), sigma_perturbed(), leaf()]
}
