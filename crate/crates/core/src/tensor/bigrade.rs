//! Bigrading of forms and multivectors relative to a connection on a coordinate foliation.
//!
//! The frame is `h_i = ∂x_i + Σ_j Γ^j_i ∂y_j` and `∂y_j`; the dual coframe is
//! `dx_i` and `η_j = dy_j − Σ_i Γ^j_i dx_i`. A form has bidegree `(p, q)` when
//! it has `p` legs among the `dx_i` and `q` among the `η_j`; multivectors are
//! graded dually by `h_i` and `∂y_j` legs.

use std::collections::BTreeMap;

use super::alt::increasing_tuples;
use super::multivector::{Form, Multivector, VectorField};
use crate::algebra::RationalFn;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradeContext {
    dim: usize,
    base: Vec<usize>,
    fiber: Vec<usize>,
    /// `gamma[i][j] = Γ^j_i`.
    gamma: Vec<Vec<RationalFn>>,
}

/// The three pieces of `dβ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSplit {
    pub d10: Form,
    pub d2m1: Form,
    pub d01: Form,
}

impl BigradeContext {
    pub fn new(dim: usize, base: Vec<usize>, fiber: Vec<usize>, gamma: Vec<Vec<RationalFn>>) -> Result<Self> {
        let mut all: Vec<usize> = base.iter().chain(fiber.iter()).copied().collect();
        all.sort_unstable();
        if all != (0..dim).collect::<Vec<_>>() {
            return Err(Error::Dimension("base and fiber coordinates must partition the chart".into()));
        }
        if gamma.len() != base.len() || gamma.iter().any(|r| r.len() != fiber.len()) {
            return Err(Error::Dimension(format!(
                "connection coefficients must be {}x{}",
                base.len(),
                fiber.len()
            )));
        }
        Ok(BigradeContext { dim, base, fiber, gamma })
    }

    /// Context of the trivial connection.
    pub fn flat(dim: usize, base: Vec<usize>, fiber: Vec<usize>) -> Result<Self> {
        let g = vec![vec![RationalFn::zero(dim); fiber.len()]; base.len()];
        Self::new(dim, base, fiber, g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn fiber(&self) -> &[usize] {
        &self.fiber
    }

    pub fn gamma(&self) -> &[Vec<RationalFn>] {
        &self.gamma
    }

    fn base_pos(&self, c: usize) -> Option<usize> {
        self.base.iter().position(|&b| b == c)
    }

    fn fiber_pos(&self, c: usize) -> Option<usize> {
        self.fiber.iter().position(|&f| f == c)
    }

    pub fn is_base(&self, c: usize) -> bool {
        self.base_pos(c).is_some()
    }

    /// `h_i` for the `i`-th base coordinate.
    pub fn lift(&self, i: usize) -> VectorField {
        let n = self.dim;
        let mut v = vec![RationalFn::zero(n); n];
        v[self.base[i]] = RationalFn::one(n);
        for (j, &y) in self.fiber.iter().enumerate() {
            v[y] = self.gamma[i][j].clone();
        }
        VectorField::from_vec(v)
    }

    pub fn lifts(&self) -> Vec<VectorField> {
        (0..self.base.len()).map(|i| self.lift(i)).collect()
    }

    /// `η_j` for the `j`-th fiber coordinate.
    pub fn eta(&self, j: usize) -> Form {
        let n = self.dim;
        let mut v = vec![RationalFn::zero(n); n];
        v[self.fiber[j]] = RationalFn::one(n);
        for (i, &x) in self.base.iter().enumerate() {
            v[x] = -&self.gamma[i][j];
        }
        Form::from_vec(v)
    }

    /// Frame vector attached to coordinate slot `c`.
    pub fn frame(&self, c: usize) -> VectorField {
        match self.base_pos(c) {
            Some(i) => self.lift(i),
            None => VectorField::basis(self.dim, c),
        }
    }

    /// Coframe element attached to coordinate slot `c`.
    pub fn coframe(&self, c: usize) -> Form {
        match self.fiber_pos(c) {
            Some(j) => self.eta(j),
            None => Form::basis(self.dim, c),
        }
    }

    /// Whether the coframe is dual to the frame.
    pub fn is_dual(&self) -> bool {
        let n = self.dim;
        (0..n).all(|a| {
            let th = self.coframe(a);
            (0..n).all(|b| {
                let v = th.evaluate(&[&self.frame(b)]);
                if a == b {
                    v == RationalFn::one(n)
                } else {
                    v.is_zero()
                }
            })
        })
    }

    fn count_base(&self, idx: &[usize]) -> usize {
        idx.iter().filter(|&&c| self.is_base(c)).count()
    }

    /// Splits a form into its `(p, q)` components.
    pub fn decompose_form(&self, w: &Form) -> BTreeMap<(usize, usize), Form> {
        let k = w.degree();
        let frames: Vec<VectorField> = (0..self.dim).map(|c| self.frame(c)).collect();
        let coframes: Vec<Form> = (0..self.dim).map(|c| self.coframe(c)).collect();
        let mut out: BTreeMap<(usize, usize), Form> = BTreeMap::new();
        for idx in increasing_tuples(self.dim, k) {
            let xs: Vec<&VectorField> = idx.iter().map(|&c| &frames[c]).collect();
            let c = w.evaluate(&xs);
            if c.is_zero() {
                continue;
            }
            let p = self.count_base(&idx);
            let basis = if k == 0 {
                Form::scalar(RationalFn::one(self.dim))
            } else {
                Form::wedge_all(&idx.iter().map(|&c| &coframes[c]).collect::<Vec<_>>())
            };
            let piece = basis.scale(&c);
            let e = out.entry((p, k - p)).or_insert_with(|| Form::zero(self.dim, k));
            *e = &*e + &piece;
        }
        out.retain(|_, f| !f.is_zero());
        out
    }

    /// Splits a multivector into its `(p, q)` components.
    pub fn decompose_multivector(&self, t: &Multivector) -> BTreeMap<(usize, usize), Multivector> {
        let k = t.degree();
        let frames: Vec<VectorField> = (0..self.dim).map(|c| self.frame(c)).collect();
        let coframes: Vec<Form> = (0..self.dim).map(|c| self.coframe(c)).collect();
        let mut out: BTreeMap<(usize, usize), Multivector> = BTreeMap::new();
        for idx in increasing_tuples(self.dim, k) {
            let al: Vec<&Form> = idx.iter().map(|&c| &coframes[c]).collect();
            let c = t.evaluate(&al);
            if c.is_zero() {
                continue;
            }
            let p = self.count_base(&idx);
            let mut basis = Multivector::scalar(RationalFn::one(self.dim));
            for &i in &idx {
                basis = Multivector(basis.0.wedge(&frames[i].0));
            }
            let piece = basis.scale(&c);
            let e = out.entry((p, k - p)).or_insert_with(|| Multivector::zero(self.dim, k));
            *e = &*e + &piece;
        }
        out.retain(|_, f| !f.is_zero());
        out
    }

    pub fn form_component(&self, w: &Form, p: usize, q: usize) -> Form {
        self.decompose_form(w).remove(&(p, q)).unwrap_or_else(|| Form::zero(self.dim, w.degree()))
    }

    pub fn multivector_component(&self, t: &Multivector, p: usize, q: usize) -> Multivector {
        self.decompose_multivector(t).remove(&(p, q)).unwrap_or_else(|| Multivector::zero(self.dim, t.degree()))
    }

    /// `d = d₁,₀ + d₂,₋₁ + d₀,₁` applied to `β`.
    pub fn d_decompose(&self, beta: &Form) -> Result<DSplit> {
        let n = self.dim;
        let k = beta.degree();
        let kk = (k + 1).min(n);
        let mut split = DSplit { d10: Form::zero(n, kk), d2m1: Form::zero(n, kk), d01: Form::zero(n, kk) };
        if k >= n {
            return Ok(split);
        }
        for ((p, q), piece) in self.decompose_form(beta) {
            for ((pp, qq), dpiece) in self.decompose_form(&piece.d()) {
                if (pp, qq) == (p + 1, q) {
                    split.d10 = &split.d10 + &dpiece;
                } else if q >= 1 && (pp, qq) == (p + 2, q - 1) {
                    split.d2m1 = &split.d2m1 + &dpiece;
                } else if (pp, qq) == (p, q + 1) {
                    split.d01 = &split.d01 + &dpiece;
                } else {
                    return Err(Error::Inconsistent(format!(
                        "d of a ({p},{q}) piece has a ({pp},{qq}) component"
                    )));
                }
            }
        }
        Ok(split)
    }

    /// Whether a form only has `dx` legs, i.e. lies in `∧V⁰`.
    pub fn is_horizontal_form(&self, w: &Form) -> bool {
        w.components().all(|(k, _)| k.iter().all(|&c| self.is_base(c)))
    }

    /// Whether a multivector only has `∂y` legs.
    pub fn is_vertical_multivector(&self, t: &Multivector) -> bool {
        t.components().all(|(k, _)| k.iter().all(|&c| !self.is_base(c)))
    }

    /// `d₁,₀` on a horizontal form by evaluating `dβ` on lifts.
    pub fn d10_horizontal(&self, beta: &Form) -> Result<Form> {
        if !self.is_horizontal_form(beta) {
            return Err(Error::NotHorizontal("d10 needs a form in the annihilator of the fibers".into()));
        }
        let n = self.dim;
        let q = beta.degree();
        let db = beta.d();
        let lifts = self.lifts();
        let mut out = Form::zero(n, q + 1);
        if q + 1 > self.base.len() {
            return Ok(out);
        }
        for idx in increasing_tuples(self.base.len(), q + 1) {
            let xs: Vec<&VectorField> = idx.iter().map(|&i| &lifts[i]).collect();
            let v = db.evaluate(&xs);
            let coords: Vec<usize> = idx.iter().map(|&i| self.base[i]).collect();
            out.add_at(&coords, &v);
        }
        Ok(out)
    }

    /// Horizontal form with `β(h_I)` given on base index tuples.
    pub fn horizontal_from_lift_values(&self, q: usize, value: impl Fn(&[usize]) -> RationalFn) -> Form {
        let mut out = Form::zero(self.dim, q);
        for idx in increasing_tuples(self.base.len(), q) {
            let coords: Vec<usize> = idx.iter().map(|&i| self.base[i]).collect();
            out.add_at(&coords, &value(&idx));
        }
        out
    }
}
