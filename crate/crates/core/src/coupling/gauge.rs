//! Gauge transformation of geometric data by a horizontal 1-form.

use super::{Connection, GeometricData};
use crate::algebra::{Matrix, RationalFn};
use crate::error::{Error, Result};
use crate::tensor::alt::increasing_tuples;
use crate::tensor::{poisson_bracket, Form, Multivector, VectorValued1Form};

/// `{Q ∧ β}_P (h_0, …, h_q) = Σ_i (−1)^i {Q(h_i), β(h_0, …, ĥ_i, …, h_q)}_P` for horizontal `Q`, `β`.
pub fn poisson_wedge(conn: &Connection, p: &Multivector, q: &Form, beta: &Form) -> Result<Form> {
    let ctx = conn.context();
    if q.degree() != 1 || !ctx.is_horizontal_form(q) || !ctx.is_horizontal_form(beta) {
        return Err(Error::NotHorizontal("{Q∧β} needs horizontal Q and β".into()));
    }
    let deg = beta.degree() + 1;
    let b = ctx.base().len();
    if deg > b {
        return Ok(Form::zero(conn.dim(), deg.min(conn.dim())));
    }
    let lifts = conn.lifts();
    let qv: Vec<RationalFn> = lifts.iter().map(|h| q.evaluate(&[h])).collect();
    let mut vals = std::collections::BTreeMap::new();
    for idx in increasing_tuples(b, deg) {
        let mut acc = RationalFn::zero(conn.dim());
        for pos in 0..deg {
            let rest: Vec<&crate::tensor::VectorField> =
                idx.iter().enumerate().filter(|(k, _)| *k != pos).map(|(_, &i)| &lifts[i]).collect();
            let bv = beta.evaluate(&rest);
            let t = poisson_bracket(p, &qv[idx[pos]], &bv);
            acc = if pos % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        vals.insert(idx, acc);
    }
    Ok(ctx.horizontal_from_lift_values(deg, |i| vals[i].clone()))
}

/// `Ξ^Q` with `Ξ^Q(X) = P♯d(Q(X))` on lifts and `Ξ^Q(V) = 0`.
pub fn xi_of(gd: &GeometricData, q: &Form) -> VectorValued1Form {
    let n = gd.dim();
    let base = gd.conn.foliation().base();
    let mut m = Matrix::zeros(n, n, &RationalFn::zero(n));
    for (i, h) in gd.conn.lifts().iter().enumerate() {
        let col = gd.p.sharp(&Form::differential(&q.evaluate(&[h])));
        for (r, c) in col.to_vec().into_iter().enumerate() {
            m.set(r, base[i], c);
        }
    }
    VectorValued1Form::new(m)
}

/// `γ̃ = γ − Ξ^Q`, `σ̃ = σ − (d₁,₀ Q + ½{Q ∧ Q}_P)`, with the structure equations rechecked.
pub fn q_gauge(gd: &GeometricData, q: &Form) -> Result<GeometricData> {
    if !gd.is_verified() {
        return Err(Error::Unverified);
    }
    let ctx = gd.conn.context();
    if q.degree() != 1 || q.dim() != gd.dim() || !ctx.is_horizontal_form(q) {
        return Err(Error::NotHorizontal("Q must be a 1-form in the annihilator of the fibers".into()));
    }
    let fiber = ctx.fiber();
    let gamma: Vec<Vec<RationalFn>> = gd
        .conn
        .lifts()
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let xi = gd.p.sharp(&Form::differential(&q.evaluate(&[h])));
            fiber.iter().enumerate().map(|(j, &y)| &gd.conn.gamma()[i][j] + &xi.get(&[y])).collect()
        })
        .collect();
    let conn = Connection::new(gd.conn.foliation().clone(), gamma)?;
    let half_qq = poisson_wedge(&gd.conn, &gd.p, q, q)?.scale_rational(&crate::algebra::rat(1, 2));
    let sigma = &(&gd.sigma - &ctx.d10_horizontal(q)?) - &half_qq;
    let (out, _) = GeometricData::new(conn, sigma, gd.p.clone())?.verify();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Poly};
    use crate::coupling::{data_to_dirac, Foliation};
    use crate::dirac::{gauge_transform, spans_equal};
    use crate::sampling::SampleBox;
    use crate::tensor::VectorField;

    fn flat() -> GeometricData {
        let n = 4;
        let c = Connection::flat(Foliation::split(n, 2).unwrap());
        let sigma = Form::basis(n, 0).wedge(&Form::basis(n, 1)).unwrap();
        let p = Multivector::wedge_vectors(&VectorField::basis(n, 2), &VectorField::basis(n, 3));
        GeometricData::new(c, sigma, p).unwrap().verified().unwrap()
    }

    fn q_form() -> Form {
        let n = 4;
        let y1 = Poly::var(2, n);
        let y2 = Poly::var(3, n);
        let x2 = Poly::var(1, n);
        Form::from_polys(vec![&(&y1 * &y2) + &x2, y1.pow(2), Poly::zero(n), Poly::zero(n)])
    }

    #[test]
    fn zero_q_is_identity() {
        let gd = flat();
        let out = q_gauge(&gd, &Form::zero(4, 1)).unwrap();
        assert!(out.same_data(&gd) && out.is_verified());
    }

    #[test]
    fn vertical_q_rejected() {
        assert!(matches!(q_gauge(&flat(), &Form::basis(4, 2)), Err(Error::NotHorizontal(_))));
    }

    #[test]
    fn leafwise_closed_q_keeps_connection() {
        let n = 4;
        // Q = x2 dx1 has P♯dQ(h_i) = 0
        let q = Form::from_polys(vec![Poly::var(1, n), Poly::zero(n), Poly::zero(n), Poly::zero(n)]);
        let gd = flat();
        let out = q_gauge(&gd, &q).unwrap();
        assert_eq!(out.conn, gd.conn);
        assert_eq!(out.sigma, &gd.sigma - &gd.conn.context().d10_horizontal(&q).unwrap());
    }

    #[test]
    fn gauge_matches_minus_dq_on_frames() {
        let gd = flat();
        let q = q_form();
        let out = q_gauge(&gd, &q).unwrap();
        assert!(out.is_verified());
        let pts = SampleBox::cube(4, rat(1, 2)).points(30, 3);
        let lhs = data_to_dirac(&out).unwrap();
        let rhs = gauge_transform(&data_to_dirac(&gd).unwrap(), &-&q.d()).unwrap();
        assert!(spans_equal(&lhs, &rhs, &pts).unwrap().passed);
        let wrong = gauge_transform(&data_to_dirac(&gd).unwrap(), &q.d()).unwrap();
        assert!(!spans_equal(&lhs, &wrong, &pts).unwrap().passed);
    }

    #[test]
    fn wedge_of_q_with_itself_is_twice_the_bracket() {
        let gd = flat();
        let q = q_form();
        let w = poisson_wedge(&gd.conn, &gd.p, &q, &q).unwrap();
        let l = gd.conn.lifts();
        let expect = poisson_bracket(&gd.p, &q.evaluate(&[&l[0]]), &q.evaluate(&[&l[1]])).scale(&rat(2, 1));
        assert_eq!(w.get(&[0, 1]), expect);
    }
}
