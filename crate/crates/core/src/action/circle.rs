//! Linear circle and torus actions by block rotations.

use crate::algebra::{Poly, RationalFn, TrigPoly};
use crate::error::{Error, Result};
use crate::tensor::{schouten, VectorField};

/// One rotation plane `(i, j)` turning at integer speed `weight`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plane {
    pub i: usize,
    pub j: usize,
    pub weight: u32,
}

/// `S¹` acting by `u_i ↦ u_i cos wt − u_j sin wt`, `u_j ↦ u_i sin wt + u_j cos wt` in
/// every plane. The generator is `Σ w (u_i ∂u_j − u_j ∂u_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleAction {
    dim: usize,
    planes: Vec<Plane>,
}

impl CircleAction {
    pub fn new(dim: usize, planes: Vec<Plane>) -> Result<Self> {
        let mut seen = vec![false; dim];
        for p in &planes {
            if p.i >= dim || p.j >= dim || p.i == p.j {
                return Err(Error::InvalidAction(format!("plane ({}, {}) is not a coordinate pair", p.i, p.j)));
            }
            if p.weight == 0 {
                return Err(Error::InvalidAction(format!("plane ({}, {}) has weight 0", p.i, p.j)));
            }
            for c in [p.i, p.j] {
                if seen[c] {
                    return Err(Error::InvalidAction(format!("coordinate {c} appears in two planes")));
                }
                seen[c] = true;
            }
        }
        Ok(CircleAction { dim, planes })
    }

    /// Rotation of one plane at unit speed.
    pub fn rotation(dim: usize, i: usize, j: usize) -> Result<Self> {
        Self::new(dim, vec![Plane { i, j, weight: 1 }])
    }

    pub fn trivial(dim: usize) -> Self {
        CircleAction { dim, planes: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn moves(&self, c: usize) -> bool {
        self.planes.iter().any(|p| p.i == c || p.j == c)
    }

    pub fn generator(&self) -> VectorField {
        let n = self.dim;
        let mut v = vec![RationalFn::zero(n); n];
        for p in &self.planes {
            let w = RationalFn::from_int(p.weight as i64, n);
            v[p.j] = &w * &RationalFn::var(p.i, n);
            v[p.i] = -&(&w * &RationalFn::var(p.j, n));
        }
        VectorField::from_vec(v)
    }

    /// Matrix of the linear map `Fl^t` (entry `(r, c)` is `∂(Fl^t u)_r / ∂u_c`), or of its
    /// inverse when `inverse` is set.
    pub fn matrix(&self, inverse: bool) -> Vec<Vec<TrigPoly>> {
        let n = self.dim;
        let mut m: Vec<Vec<TrigPoly>> = (0..n)
            .map(|r| (0..n).map(|c| if r == c { TrigPoly::constant(Poly::one(n)) } else { TrigPoly::zero(n) }).collect())
            .collect();
        let s = if inverse { -1 } else { 1 };
        for p in &self.planes {
            let w = p.weight;
            m[p.i][p.i] = TrigPoly::cos(w, Poly::one(n));
            m[p.j][p.j] = TrigPoly::cos(w, Poly::one(n));
            m[p.i][p.j] = TrigPoly::sin(w, Poly::from_int(-s, n));
            m[p.j][p.i] = TrigPoly::sin(w, Poly::from_int(s, n));
        }
        m
    }

    /// `(Fl^t u)_k` for every coordinate, `None` for fixed coordinates.
    pub fn coordinate_images(&self) -> Vec<Option<TrigPoly>> {
        let n = self.dim;
        let mut out = vec![None; n];
        for p in &self.planes {
            let (ui, uj) = (Poly::var(p.i, n), Poly::var(p.j, n));
            out[p.i] = Some(&TrigPoly::cos(p.weight, ui.clone()) + &TrigPoly::sin(p.weight, -&uj));
            out[p.j] = Some(&TrigPoly::sin(p.weight, ui) + &TrigPoly::cos(p.weight, uj));
        }
        out
    }

    /// `F ∘ Fl^t` as a trigonometric polynomial.
    pub fn pullback_poly(&self, f: &Poly) -> TrigPoly {
        let n = self.dim;
        let images = self.coordinate_images();
        let moving: Vec<usize> = (0..n).filter(|&c| images[c].is_some()).collect();
        let mut powers: Vec<Vec<TrigPoly>> = vec![Vec::new(); n];
        for &c in &moving {
            powers[c] = vec![TrigPoly::constant(Poly::one(n)), images[c].clone().unwrap()];
        }
        let mut out = TrigPoly::zero(n);
        let mut grouped: std::collections::BTreeMap<Vec<u32>, Poly> = std::collections::BTreeMap::new();
        for (e, c) in f.terms() {
            let mut fixed = e.clone();
            let mut mv = vec![0u32; moving.len()];
            for (k, &m) in moving.iter().enumerate() {
                mv[k] = e[m];
                fixed[m] = 0;
            }
            let entry = grouped.entry(mv).or_insert_with(|| Poly::zero(n));
            *entry += &Poly::monomial(c.clone(), fixed);
        }
        for (mv, coeff) in grouped {
            let mut t = TrigPoly::constant(coeff);
            for (k, &m) in moving.iter().enumerate() {
                let p = mv[k] as usize;
                if p == 0 {
                    continue;
                }
                while powers[m].len() <= p {
                    let next = powers[m].last().unwrap() * &powers[m][1];
                    powers[m].push(next);
                }
                t = &t * &powers[m][p];
            }
            out = &out + &t;
        }
        out
    }

    /// Whether a polynomial is fixed by the action, tested by `L_a f = 0`.
    pub fn is_invariant_poly(&self, f: &Poly) -> bool {
        self.generator().apply(&RationalFn::from_poly(f.clone())).is_zero()
    }
}

/// Product of commuting circles with pairwise disjoint planes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusAction {
    circles: Vec<CircleAction>,
}

impl TorusAction {
    pub fn new(circles: Vec<CircleAction>) -> Result<Self> {
        let Some(first) = circles.first() else {
            return Err(Error::InvalidAction("a torus needs at least one circle".into()));
        };
        let n = first.dim();
        let mut seen = vec![false; n];
        for c in &circles {
            if c.dim() != n {
                return Err(Error::InvalidAction("circles act on different dimensions".into()));
            }
            for p in c.planes() {
                for k in [p.i, p.j] {
                    if seen[k] {
                        return Err(Error::InvalidAction(format!("coordinate {k} rotated by two circles")));
                    }
                    seen[k] = true;
                }
            }
        }
        let t = TorusAction { circles };
        for (a, ca) in t.circles.iter().enumerate() {
            for cb in &t.circles[a + 1..] {
                if !schouten(&ca.generator(), &cb.generator()).is_zero() {
                    return Err(Error::InvalidAction("generators do not commute".into()));
                }
            }
        }
        Ok(t)
    }

    pub fn circles(&self) -> &[CircleAction] {
        &self.circles
    }

    pub fn dim(&self) -> usize {
        self.circles[0].dim()
    }
}

/// Any supported compact abelian action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    Circle(CircleAction),
    Torus(TorusAction),
}

impl Action {
    pub fn circles(&self) -> Vec<&CircleAction> {
        match self {
            Action::Circle(c) => vec![c],
            Action::Torus(t) => t.circles().iter().collect(),
        }
    }

    pub fn generators(&self) -> Vec<VectorField> {
        self.circles().iter().map(|c| c.generator()).collect()
    }

    pub fn dim(&self) -> usize {
        match self {
            Action::Circle(c) => c.dim(),
            Action::Torus(t) => t.dim(),
        }
    }

    pub fn rank(&self) -> usize {
        self.circles().len()
    }
}

impl From<CircleAction> for Action {
    fn from(c: CircleAction) -> Self {
        Action::Circle(c)
    }
}

impl From<TorusAction> for Action {
    fn from(t: TorusAction) -> Self {
        Action::Torus(t)
    }
}
