//! Schouten–Nijenhuis bracket.
//!
//! Multivectors are treated as functions of odd coordinates `θ_i` dual to
//! `du_i`. With that identification
//!
//! `[[A, B]] = Σ_k (A ∂←/∂θ_k)(∂B/∂u_k) − (∂A/∂u_k)(∂→/∂θ_k B)`,
//!
//! which restricts to the Lie bracket on vector fields and to `X(f)` on
//! functions.

use super::alt::{merge_sign, Alt};
use super::multivector::{Form, Multivector, VectorField};
use crate::algebra::RationalFn;

pub fn schouten(a: &Multivector, b: &Multivector) -> Multivector {
    assert_eq!(a.dim(), b.dim(), "dimension mismatch");
    let n = a.dim();
    let (da, db) = (a.degree(), b.degree());
    if da + db == 0 {
        return Multivector::zero(n, 0);
    }
    let deg = da + db - 1;
    if deg > n {
        return Multivector::zero(n, n);
    }
    let mut out = Alt::zero(n, deg);
    let db_k: Vec<Multivector> = (0..n).map(|k| b.coordinate_derivative(k)).collect();
    let da_k: Vec<Multivector> = (0..n).map(|k| a.coordinate_derivative(k)).collect();

    for (ia, ca) in a.components() {
        for (p, &k) in ia.iter().enumerate() {
            let sign_r = if (da - 1 - p) % 2 == 0 { 1 } else { -1 };
            let mut rest = ia.clone();
            rest.remove(p);
            for (jb, cb) in db_k[k].components() {
                if let Some((idx, s)) = merge_sign(&rest, jb) {
                    let t = ca * cb;
                    out.add_at(&idx, &if s * sign_r > 0 { t } else { -t });
                }
            }
        }
    }
    for (jb, cb) in b.components() {
        for (q, &k) in jb.iter().enumerate() {
            let sign_l = if q % 2 == 0 { 1 } else { -1 };
            let mut rest = jb.clone();
            rest.remove(q);
            for (ia, ca) in da_k[k].components() {
                if let Some((idx, s)) = merge_sign(ia, &rest) {
                    let t = ca * cb;
                    // minus sign of the second sum
                    out.add_at(&idx, &if s * sign_l > 0 { -t } else { t });
                }
            }
        }
    }
    Multivector(out)
}

/// `L_X T = [[X, T]]` on multivectors.
pub fn lie_derivative_multivector(x: &VectorField, t: &Multivector) -> Multivector {
    assert_eq!(x.degree(), 1);
    schouten(x, t)
}

/// Poisson bracket `{f, g} = Π(df, dg)`.
pub fn poisson_bracket(pi: &Multivector, f: &RationalFn, g: &RationalFn) -> RationalFn {
    pi.evaluate(&[&Form::differential(f), &Form::differential(g)])
}

/// Hamiltonian vector field `X_f = Π♯df`.
pub fn hamiltonian_vector_field(pi: &Multivector, f: &RationalFn) -> VectorField {
    pi.sharp(&Form::differential(f))
}

/// The Jacobiator trivector `[[Π, Π]]`.
pub fn jacobiator(pi: &Multivector) -> Multivector {
    schouten(pi, pi)
}

/// `Σ_cyc {f, {g, h}}` for the bracket of `Π`.
pub fn cyclic_jacobi_sum(pi: &Multivector, f: &RationalFn, g: &RationalFn, h: &RationalFn) -> RationalFn {
    let a = poisson_bracket(pi, f, &poisson_bracket(pi, g, h));
    let b = poisson_bracket(pi, g, &poisson_bracket(pi, h, f));
    let c = poisson_bracket(pi, h, &poisson_bracket(pi, f, g));
    &(&a + &b) + &c
}

/// Constant `c` with `[[Π, Π]](df, dg, dh) = c · Σ_cyc {f, {g, h}}` under the conventions here.
pub const JACOBIATOR_CONSTANT: i64 = 2;
