//! Dirac structures given by explicit frames of sections of `TM ⊕ T*M`.

mod checks;

pub use checks::{
    coupling_test, involutivity_check, presymplectic_on_characteristic, spans_equal, usable_points, CouplingTest,
    Presymplectic,
};

use crate::algebra::{Matrix, Rational, RationalFn};
use crate::error::{Error, Result};
use crate::tensor::{Form, Multivector, VectorField};

/// A pair `(X, α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracSection {
    pub x: VectorField,
    pub alpha: Form,
}

impl DiracSection {
    pub fn new(x: VectorField, alpha: Form) -> Result<Self> {
        if x.degree() != 1 || alpha.degree() != 1 {
            return Err(Error::Dimension("a section needs a vector field and a 1-form".into()));
        }
        if x.dim() != alpha.dim() {
            return Err(Error::Dimension(format!("vector on {} coordinates, form on {}", x.dim(), alpha.dim())));
        }
        Ok(DiracSection { x, alpha })
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    /// Components `(X^1, …, X^n, α_1, …, α_n)` at a point, `None` at a pole.
    pub fn eval(&self, point: &[Rational]) -> Option<Vec<Rational>> {
        self.x.to_vec().iter().chain(self.alpha.to_vec().iter()).map(|c| c.eval(point)).collect()
    }
}

/// `⟨(X, α), (Y, β)⟩ = β(X) + α(Y)`.
pub fn pairing(s: &DiracSection, t: &DiracSection) -> RationalFn {
    &t.alpha.evaluate(&[&s.x]) + &s.alpha.evaluate(&[&t.x])
}

/// `[(X, α), (Y, β)] = ([X, Y], L_X β − L_Y α + ½ d(α(Y) − β(X)))`.
pub fn courant_bracket(s: &DiracSection, t: &DiracSection) -> DiracSection {
    let v = s.x.bracket(&t.x);
    let skew = &s.alpha.evaluate(&[&t.x]) - &t.alpha.evaluate(&[&s.x]);
    let a = &(&t.alpha.lie_derivative(&s.x) - &s.alpha.lie_derivative(&t.x))
        + &Form::differential(&skew).scale_rational(&crate::algebra::rat(1, 2));
    DiracSection { x: v, alpha: a }
}

/// `n` pairwise isotropic sections on an `n`-dimensional chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracFrame {
    sections: Vec<DiracSection>,
}

impl DiracFrame {
    /// Checks the section count and isotropy as identities; rank is checked pointwise.
    pub fn new(sections: Vec<DiracSection>) -> Result<Self> {
        let Some(first) = sections.first() else {
            return Err(Error::Dimension("empty frame".into()));
        };
        let n = first.dim();
        if sections.len() != n || sections.iter().any(|s| s.dim() != n) {
            return Err(Error::Dimension(format!("a frame on {n} coordinates needs {n} sections")));
        }
        for (i, s) in sections.iter().enumerate() {
            for (j, t) in sections.iter().enumerate().skip(i) {
                if !pairing(s, t).is_zero() {
                    return Err(Error::Inconsistent(format!("sections {i} and {j} are not isotropic")));
                }
            }
        }
        Ok(DiracFrame { sections })
    }

    pub fn dim(&self) -> usize {
        self.sections.len()
    }

    pub fn sections(&self) -> &[DiracSection] {
        &self.sections
    }

    /// The `n × 2n` matrix of section components at a point.
    pub fn matrix_at(&self, point: &[Rational]) -> Option<Matrix<Rational>> {
        let rows: Option<Vec<Vec<Rational>>> = self.sections.iter().map(|s| s.eval(point)).collect();
        Some(Matrix::from_rows(rows?))
    }

    /// Whether the frame evaluates to rank `n` at the point.
    pub fn is_regular_at(&self, point: &[Rational]) -> bool {
        self.matrix_at(point).is_some_and(|m| m.rank() == self.dim())
    }
}

/// `Graph Π = {(Π♯α, α)}`, framed by `(Π♯du_i, du_i)`.
pub fn graph_of_bivector(pi: &Multivector) -> Result<DiracFrame> {
    if pi.degree() != 2 {
        return Err(Error::Dimension("expected a bivector".into()));
    }
    let n = pi.dim();
    DiracFrame::new(
        (0..n)
            .map(|i| {
                let du = Form::basis(n, i);
                DiracSection { x: pi.sharp(&du), alpha: du }
            })
            .collect(),
    )
}

/// `Graph ω = {(X, −i_X ω)}` of a 2-form, framed by the coordinate fields.
pub fn graph_of_two_form(omega: &Form) -> Result<DiracFrame> {
    if omega.degree() != 2 {
        return Err(Error::Dimension("expected a 2-form".into()));
    }
    let n = omega.dim();
    DiracFrame::new(
        (0..n)
            .map(|i| {
                let e = VectorField::basis(n, i);
                DiracSection { alpha: -omega.interior(&e), x: e }
            })
            .collect(),
    )
}

/// `τ_B(D) = {(X, α − i_X B)}` for a closed 2-form `B`.
pub fn gauge_transform(d: &DiracFrame, b: &Form) -> Result<DiracFrame> {
    if b.degree() != 2 || b.dim() != d.dim() {
        return Err(Error::Dimension("gauge needs a 2-form on the frame's chart".into()));
    }
    if !b.d().is_zero() {
        return Err(Error::NotClosed("dB ≠ 0".into()));
    }
    DiracFrame::new(
        d.sections
            .iter()
            .map(|s| DiracSection { x: s.x.clone(), alpha: &s.alpha - &b.interior(&s.x) })
            .collect(),
    )
}
