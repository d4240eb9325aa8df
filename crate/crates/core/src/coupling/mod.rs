//! Coordinate foliations, connections and the geometric data `(γ, σ, P)` of coupling structures.

mod correspondence;
mod gauge;
mod structure;

pub use correspondence::{data_to_dirac, data_to_poisson, poisson_to_data, split_bivector, CouplingPoisson};
pub use gauge::{poisson_wedge, q_gauge, xi_of};
pub use structure::{curvature, curvature_on_lifts, hamiltonian_check, structure_eq_check};

use crate::algebra::{Matrix, RationalFn};
use crate::error::{Error, Result};
use crate::report::{Report, Witness};
use crate::tensor::{BigradeContext, Form, Multivector, VectorField, VectorValued1Form};

/// Leaves are the level sets of the base coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Foliation {
    dim: usize,
    base: Vec<usize>,
    fiber: Vec<usize>,
}

impl Foliation {
    pub fn new(dim: usize, base: Vec<usize>, fiber: Vec<usize>) -> Result<Self> {
        if base.is_empty() || fiber.is_empty() {
            return Err(Error::Dimension("a foliation needs base and fiber coordinates".into()));
        }
        BigradeContext::flat(dim, base.clone(), fiber.clone())?;
        Ok(Foliation { dim, base, fiber })
    }

    /// The first `b` coordinates are the base.
    pub fn split(dim: usize, b: usize) -> Result<Self> {
        Self::new(dim, (0..b).collect(), (b..dim).collect())
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

    pub fn is_vertical(&self, x: &VectorField) -> bool {
        self.base.iter().all(|&c| x.get(&[c]).is_zero())
    }
}

/// Ehresmann connection with lifts `h_i = ∂x_i + Σ_j Γ^j_i ∂y_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    fol: Foliation,
    ctx: BigradeContext,
}

impl Connection {
    /// `gamma[i][j] = Γ^j_i`; checks `γ∘γ = γ` and `Im γ = V`.
    pub fn new(fol: Foliation, gamma: Vec<Vec<RationalFn>>) -> Result<Self> {
        let ctx = BigradeContext::new(fol.dim, fol.base.clone(), fol.fiber.clone(), gamma)?;
        let c = Connection { fol, ctx };
        let g = c.as_vector_valued();
        if !g.is_projection() {
            return Err(Error::Inconsistent("γ∘γ ≠ γ".into()));
        }
        if !g.columns().iter().all(|col| c.fol.is_vertical(col)) || (0..c.fol.fiber.len()).any(|j| {
            let y = VectorField::basis(c.fol.dim, c.fol.fiber[j]);
            g.apply(&y) != y
        }) {
            return Err(Error::Inconsistent("Im γ ≠ V".into()));
        }
        Ok(c)
    }

    pub fn flat(fol: Foliation) -> Self {
        let g = vec![vec![RationalFn::zero(fol.dim); fol.fiber.len()]; fol.base.len()];
        Self::new(fol, g).expect("the flat connection is valid")
    }

    /// Connection whose lifts are the given vector fields, one per base coordinate.
    pub fn from_lifts(fol: Foliation, lifts: &[VectorField]) -> Result<Self> {
        if lifts.len() != fol.base.len() {
            return Err(Error::Dimension("one lift per base coordinate".into()));
        }
        for (i, h) in lifts.iter().enumerate() {
            for (k, &x) in fol.base.iter().enumerate() {
                let want = if i == k { RationalFn::one(fol.dim) } else { RationalFn::zero(fol.dim) };
                if h.get(&[x]) != want {
                    return Err(Error::Inconsistent(format!("lift {i} is not ∂x_{i} plus a vertical field")));
                }
            }
        }
        let g = lifts.iter().map(|h| fol.fiber.iter().map(|&y| h.get(&[y])).collect()).collect();
        Self::new(fol, g)
    }

    pub fn foliation(&self) -> &Foliation {
        &self.fol
    }

    pub fn context(&self) -> &BigradeContext {
        &self.ctx
    }

    pub fn gamma(&self) -> &[Vec<RationalFn>] {
        self.ctx.gamma()
    }

    pub fn dim(&self) -> usize {
        self.fol.dim
    }

    pub fn lift(&self, i: usize) -> VectorField {
        self.ctx.lift(i)
    }

    pub fn lifts(&self) -> Vec<VectorField> {
        self.ctx.lifts()
    }

    /// `γ` as a vector-valued 1-form: the vertical projection along the lifts.
    pub fn as_vector_valued(&self) -> VectorValued1Form {
        let n = self.fol.dim;
        let mut m = Matrix::zeros(n, n, &RationalFn::zero(n));
        for (j, &y) in self.fol.fiber.iter().enumerate() {
            m.set(y, y, RationalFn::one(n));
            for (i, &x) in self.fol.base.iter().enumerate() {
                m.set(y, x, -&self.gamma()[i][j]);
            }
        }
        VectorValued1Form::new(m)
    }

    /// `γ(X)`.
    pub fn vertical_part(&self, x: &VectorField) -> VectorField {
        self.as_vector_valued().apply(x)
    }

    /// `X − γ(X) = Σ X^{x_i} h_i`.
    pub fn horizontal_part(&self, x: &VectorField) -> VectorField {
        x - &self.vertical_part(x)
    }

    /// `d₁,₀ F = Σ h_i(F) dx_i`.
    pub fn d10_function(&self, f: &RationalFn) -> Form {
        self.ctx.horizontal_from_lift_values(1, |i| self.lift(i[0]).apply(f))
    }
}

/// Whether the structure equations have been checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Integrability {
    Unchecked,
    Verified,
    Failed(Witness),
}

/// A connection, a horizontal 2-form and a vertical bivector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricData {
    pub conn: Connection,
    pub sigma: Form,
    pub p: Multivector,
    integrable: Integrability,
}

impl GeometricData {
    pub fn new(conn: Connection, sigma: Form, p: Multivector) -> Result<Self> {
        let n = conn.dim();
        if sigma.degree() != 2 || sigma.dim() != n || p.degree() != 2 || p.dim() != n {
            return Err(Error::Dimension("σ must be a 2-form and P a bivector on the chart".into()));
        }
        if !conn.context().is_horizontal_form(&sigma) {
            return Err(Error::NotHorizontal("σ has a leg along the fibers".into()));
        }
        if !conn.context().is_vertical_multivector(&p) {
            return Err(Error::Inconsistent("P has a leg along the base".into()));
        }
        Ok(GeometricData { conn, sigma, p, integrable: Integrability::Unchecked })
    }

    pub fn integrable(&self) -> &Integrability {
        &self.integrable
    }

    pub fn is_verified(&self) -> bool {
        self.integrable == Integrability::Verified
    }

    /// Runs the structure equations and records the result.
    pub fn verify(mut self) -> (Self, Report) {
        let r = structure_eq_check(&self);
        self.integrable = match r.first_failure() {
            None => Integrability::Verified,
            Some(o) => Integrability::Failed(o.witness.clone().unwrap_or_else(|| Witness::new(o.check.clone()))),
        };
        (self, r)
    }

    /// Verifies and fails with the first witness when the structure equations do not hold.
    pub fn verified(self) -> Result<Self> {
        let (gd, r) = self.verify();
        match r.first_failure() {
            None => Ok(gd),
            Some(o) => Err(Error::Inconsistent(format!(
                "{}: {}",
                o.check,
                o.witness.as_ref().map(|w| w.detail.as_str()).unwrap_or("")
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        self.conn.dim()
    }

    /// `s[i][k] = σ(h_i, h_k)`.
    pub fn sigma_on_lifts(&self) -> Matrix<RationalFn> {
        let l = self.conn.lifts();
        Matrix::from_fn(l.len(), l.len(), |i, k| self.sigma.evaluate(&[&l[i], &l[k]]))
    }

    /// Coefficient-exact equality of `(Γ, σ, P)`, ignoring the flag.
    pub fn same_data(&self, o: &GeometricData) -> bool {
        self.conn == o.conn && self.sigma == o.sigma && self.p == o.p
    }
}
