//! Curvature, the structure equations and the Hamiltonian conditions.

use super::{Connection, GeometricData};
use crate::algebra::{rat, RationalFn};
use crate::error::{Error, Result};
use crate::report::{CheckOutcome, Report, Witness};
use crate::tensor::{fn_bracket, schouten, Form, VectorField, VectorValued2Form};

/// `R(X, Y) = γ([hX, hY])` assembled on coordinate pairs of the base.
pub fn curvature_on_lifts(conn: &Connection) -> VectorValued2Form {
    let base = conn.foliation().base();
    let lifts = conn.lifts();
    let mut r = VectorValued2Form::zero(conn.dim());
    for a in 0..base.len() {
        for b in a + 1..base.len() {
            r.set(base[a], base[b], conn.vertical_part(&lifts[a].bracket(&lifts[b])).to_vec());
        }
    }
    r
}

/// `R = ½[γ, γ]` by the Frölicher–Nijenhuis bracket, checked against [`curvature_on_lifts`].
pub fn curvature(conn: &Connection) -> Result<VectorValued2Form> {
    let g = conn.as_vector_valued();
    let r = fn_bracket(&g, &g).scale_rational(&rat(1, 2));
    if r != curvature_on_lifts(conn) {
        return Err(Error::Inconsistent("Frölicher–Nijenhuis curvature disagrees with γ([h_i, h_j])".into()));
    }
    Ok(r)
}

fn first_nonzero<'a>(v: impl IntoIterator<Item = (&'a Vec<usize>, &'a RationalFn)>) -> Option<(Vec<usize>, String)> {
    v.into_iter().next().map(|(k, c)| (k.clone(), c.to_string()))
}

/// `L_{h_i} P = 0`, `d₁,₀ σ = 0` and `R(h_i, h_k) = −P♯d(σ(h_i, h_k))`, checked on lift frames.
pub fn structure_eq_check(gd: &GeometricData) -> Report {
    let mut rep = Report::new();
    let conn = &gd.conn;
    let lifts = conn.lifts();

    let poisson_conn = (|| {
        for (i, h) in lifts.iter().enumerate() {
            let l = schouten(h, &gd.p);
            if let Some((k, c)) = first_nonzero(l.components()) {
                return Err(Witness::new(format!("L_h{} P has component {k:?} = {c}", i + 1)));
            }
        }
        Ok(())
    })();
    rep.push(CheckOutcome::from_result("poisson-connection", poisson_conn));

    let sigma_closed = match conn.context().d10_horizontal(&gd.sigma) {
        Ok(d) => match first_nonzero(d.components()) {
            None => Ok(()),
            Some((k, c)) => Err(Witness::new(format!("d10 σ has component {k:?} = {c}"))),
        },
        Err(e) => Err(Witness::new(e.to_string())),
    };
    rep.push(CheckOutcome::from_result("sigma-closed", sigma_closed));

    let s = gd.sigma_on_lifts();
    let curvature = (|| {
        for a in 0..lifts.len() {
            for b in a + 1..lifts.len() {
                let r = conn.vertical_part(&lifts[a].bracket(&lifts[b]));
                let rhs = -&gd.p.sharp(&Form::differential(s.get(a, b)));
                let diff = &r - &rhs;
                if let Some((k, c)) = first_nonzero(diff.components()) {
                    return Err(Witness::new(format!(
                        "R(h{}, h{}) + P♯dσ(h{}, h{}) has component {k:?} = {c}",
                        a + 1,
                        b + 1,
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(())
    })();
    rep.push(CheckOutcome::from_result("curvature", curvature));
    rep
}

/// Whether `X` is Hamiltonian for `F`: `γ(X) = P♯dF` and `i_{X − γX} σ = −d₁,₀ F`.
pub fn hamiltonian_check(gd: &GeometricData, x: &VectorField, f: &RationalFn) -> CheckOutcome {
    let conn = &gd.conn;
    let vert = conn.vertical_part(x);
    let ham = gd.p.sharp(&Form::differential(f));
    if vert != ham {
        let d = &vert - &ham;
        let (k, c) = first_nonzero(d.components()).expect("nonzero difference");
        return CheckOutcome::fail("hamiltonian-vertical", Witness::new(format!("γX − P♯dF has component {k:?} = {c}")));
    }
    let lhs = gd.sigma.interior(&conn.horizontal_part(x));
    let rhs = -conn.d10_function(f);
    if lhs != rhs {
        let d = &lhs - &rhs;
        let (k, c) = first_nonzero(d.components()).expect("nonzero difference");
        return CheckOutcome::fail(
            "hamiltonian-horizontal",
            Witness::new(format!("i_X σ + d10 F has component {k:?} = {c}")),
        );
    }
    CheckOutcome::pass("hamiltonian")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::Foliation;
    use crate::tensor::{Multivector, VectorValued1Form};

    #[test]
    fn flat_connection_is_flat() {
        let c = Connection::flat(Foliation::split(4, 2).unwrap());
        assert!(curvature(&c).unwrap().is_zero());
    }

    #[test]
    fn curvature_of_tilted_lift() {
        // base x1 x2, fiber y; h1 = ∂x1 + x2 ∂y, h2 = ∂x2, so [h1, h2] = −∂y
        let n = 3;
        let c = Connection::new(Foliation::split(n, 2).unwrap(), vec![vec![RationalFn::var(1, n)], vec![RationalFn::zero(n)]])
            .unwrap();
        let r = curvature(&c).unwrap();
        let v = r.evaluate(&c.lift(0), &c.lift(1));
        assert_eq!(v, -&VectorField::basis(n, 2));
    }

    #[test]
    fn curvature_transition_rule() {
        // γ̃ = γ − Ξ gives R̃ = R − ([γ, Ξ] − ½[Ξ, Ξ])
        let n = 4;
        let fol = Foliation::split(n, 2).unwrap();
        let v = |i| RationalFn::var(i, n);
        let c = Connection::new(fol.clone(), vec![vec![&v(1) * &v(2), v(3)], vec![RationalFn::zero(n), &v(0) * &v(2)]])
            .unwrap();
        let xi_entries = [[&v(3) * &v(3), v(0)], [v(2), &v(1) * &v(3)]];
        let mut m = crate::algebra::Matrix::zeros(n, n, &RationalFn::zero(n));
        for (i, row) in xi_entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                m.set(2 + j, i, e.clone());
            }
        }
        let xi = VectorValued1Form::new(m);
        let g = c.as_vector_valued();
        let gt = g.sub(&xi);
        let c2 = Connection::new(
            fol,
            (0..2).map(|i| (0..2).map(|j| &c.gamma()[i][j] + &xi.entry(2 + j, i).clone()).collect()).collect(),
        )
        .unwrap();
        assert_eq!(c2.as_vector_valued(), gt);
        let lhs = curvature(&c2).unwrap();
        let rhs = curvature(&c).unwrap().sub(&fn_bracket(&g, &xi).sub(&fn_bracket(&xi, &xi).scale_rational(&rat(1, 2))));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn flat_data_pass_structure_equations() {
        let n = 4;
        let c = Connection::flat(Foliation::split(n, 2).unwrap());
        let sigma = Form::basis(n, 0).wedge(&Form::basis(n, 1)).unwrap();
        let p = Multivector::wedge_vectors(&VectorField::basis(n, 2), &VectorField::basis(n, 3));
        let gd = GeometricData::new(c, sigma, p).unwrap();
        let (gd, r) = gd.verify();
        assert!(r.passed(), "{r}");
        assert!(gd.is_verified());
    }

    #[test]
    fn hamiltonian_trivial_cases() {
        let n = 4;
        let c = Connection::flat(Foliation::split(n, 2).unwrap());
        let sigma = Form::basis(n, 0).wedge(&Form::basis(n, 1)).unwrap();
        let p = Multivector::wedge_vectors(&VectorField::basis(n, 2), &VectorField::basis(n, 3));
        let gd = GeometricData::new(c, sigma, p.clone()).unwrap();
        assert!(hamiltonian_check(&gd, &VectorField::zero(n, 1), &RationalFn::from_int(3, n)).passed);
        let f = RationalFn::from_poly(crate::algebra::Poly::var(2, n).pow(2));
        let x = p.sharp(&Form::differential(&f));
        assert!(hamiltonian_check(&gd, &x, &f).passed);
        assert!(!hamiltonian_check(&gd, &-&x, &f).passed);
    }
}
