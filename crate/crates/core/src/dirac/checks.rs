//! Pointwise exact checks on Dirac frames.

use super::{courant_bracket, DiracFrame};
use crate::algebra::{Matrix, Rational, RationalFn};
use crate::error::{Error, Result};
use crate::report::{CheckOutcome, Witness};
use crate::sampling::{filter_usable, Point};

fn rational_zero() -> Rational {
    Rational::from_integer(0.into())
}

/// Sample points where every frame is finite and of full rank.
pub fn usable_points(frames: &[&DiracFrame], points: &[Point]) -> Result<Vec<Point>> {
    filter_usable(points, |p| frames.iter().all(|f| f.is_regular_at(p)))
}

/// Whether two frames span the same subspace at every usable point.
pub fn spans_equal(a: &DiracFrame, b: &DiracFrame, points: &[Point]) -> Result<CheckOutcome> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension("frames on different charts".into()));
    }
    for p in usable_points(&[a, b], points)? {
        let ma = a.matrix_at(&p).expect("usable point");
        let mb = b.matrix_at(&p).expect("usable point");
        if ma.vstack(&mb).rank() != a.dim() {
            return Ok(CheckOutcome::fail("span-equality", Witness::at(&p, "frames span different subspaces")));
        }
    }
    Ok(CheckOutcome::pass("span-equality"))
}

/// Courant involutivity: every `[s_i, s_j]` lies in the frame's span at every usable point.
pub fn involutivity_check(d: &DiracFrame, points: &[Point]) -> Result<CheckOutcome> {
    let pts = usable_points(&[d], points)?;
    let mats: Vec<Matrix<Rational>> = pts.iter().map(|p| d.matrix_at(p).expect("usable point")).collect();
    let s = d.sections();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let br = courant_bracket(&s[i], &s[j]);
            for (p, m) in pts.iter().zip(&mats) {
                let Some(row) = br.eval(p) else { continue };
                if row.iter().all(|c| c == &rational_zero()) {
                    continue;
                }
                if m.vstack(&Matrix::from_rows(vec![row])).rank() != d.dim() {
                    return Ok(CheckOutcome::fail(
                        "courant-involutivity",
                        Witness::at(p, format!("bracket of sections {i} and {j} leaves the frame")),
                    ));
                }
            }
        }
    }
    Ok(CheckOutcome::pass("courant-involutivity"))
}

/// Outcome of the transversality test against a coordinate foliation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingTest {
    pub outcome: CheckOutcome,
    /// `gamma[i][j] = Γ^j_i` of `H = span{∂x_i + Σ_j Γ^j_i ∂y_j}` when coupling.
    pub gamma: Option<Vec<Vec<RationalFn>>>,
}

/// `H = {Z : ∃ α ∈ V⁰, (Z, α) ∈ D}` and whether `H ⊕ V = TM`, with `V = span{∂y}`.
pub fn coupling_test(d: &DiracFrame, base: &[usize], fiber: &[usize], points: &[Point]) -> Result<CouplingTest> {
    let n = d.dim();
    if base.len() + fiber.len() != n {
        return Err(Error::Dimension("base and fiber do not partition the chart".into()));
    }
    let fail = |p: &Point, msg: String| CouplingTest { outcome: CheckOutcome::fail("coupling", Witness::at(p, msg)), gamma: None };
    for p in usable_points(&[d], points)? {
        let m = d.matrix_at(&p).expect("usable point");
        // coefficients c with Σ c_k α_k(∂y) = 0
        let cons = Matrix::from_fn(fiber.len(), n, |j, k| m.get(k, n + fiber[j]).clone());
        let combos = cons.nullspace();
        let h = Matrix::from_fn(combos.len(), n, |r, c| {
            (0..n).fold(rational_zero(), |acc, k| acc + &combos[r][k] * m.get(k, c))
        });
        let hdim = h.rank();
        if hdim != base.len() {
            return Ok(fail(&p, format!("dim H = {hdim}, expected {}", base.len())));
        }
        let vert = Matrix::from_fn(fiber.len(), n, |j, c| {
            if c == fiber[j] {
                Rational::from_integer(1.into())
            } else {
                rational_zero()
            }
        });
        if h.vstack(&vert).rank() != n {
            return Ok(fail(&p, "H meets the vertical distribution".into()));
        }
    }
    Ok(CouplingTest { outcome: CheckOutcome::pass("coupling"), gamma: Some(symbolic_lifts(d, base, fiber)?) })
}

/// Connection coefficients of `H`, by row reduction over rational functions.
fn symbolic_lifts(d: &DiracFrame, base: &[usize], fiber: &[usize]) -> Result<Vec<Vec<RationalFn>>> {
    let n = d.dim();
    let s = d.sections();
    let alphas: Vec<Vec<RationalFn>> = s.iter().map(|t| t.alpha.to_vec()).collect();
    let xs: Vec<Vec<RationalFn>> = s.iter().map(|t| t.x.to_vec()).collect();
    let cons = Matrix::from_fn(fiber.len(), n, |j, k| alphas[k][fiber[j]].clone());
    let combos = cons.nullspace();
    let order: Vec<usize> = base.iter().chain(fiber).copied().collect();
    let zero = RationalFn::zero(n);
    let h = Matrix::from_fn(combos.len(), n, |r, c| {
        (0..n).fold(zero.clone(), |acc, k| &acc + &(&combos[r][k] * &xs[k][order[c]]))
    });
    let (red, piv) = h.rref();
    let b = base.len();
    if piv.len() != b || piv.iter().enumerate().any(|(i, &c)| i != c) {
        return Err(Error::NotCoupling("H is not a graph over the base directions".into()));
    }
    Ok((0..b).map(|i| (0..fiber.len()).map(|j| red.get(i, b + j).clone()).collect()).collect())
}

/// The leafwise form `ω(X, Y) = −α(Y)` on the characteristic subspace at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presymplectic {
    /// Basis vectors of `p_T(D)` at the point.
    pub basis: Vec<Vec<Rational>>,
    /// `omega[a][b] = ω(e_a, e_b)`.
    pub omega: Matrix<Rational>,
}

pub fn presymplectic_on_characteristic(d: &DiracFrame, point: &[Rational]) -> Result<Presymplectic> {
    let n = d.dim();
    let m = d
        .matrix_at(point)
        .filter(|m| m.rank() == n)
        .ok_or_else(|| Error::RankDeficient("frame is singular at the point".into()))?;
    // vector columns come first, so pivot rows inside them carry independent X
    let (red, piv) = m.rref();
    let rows: Vec<usize> = piv.iter().enumerate().filter(|(_, &c)| c < n).map(|(r, _)| r).collect();
    let basis: Vec<Vec<Rational>> = rows.iter().map(|&r| (0..n).map(|c| red.get(r, c).clone()).collect()).collect();
    let k = basis.len();
    let omega = Matrix::from_fn(k, k, |a, b| {
        -(0..n).fold(rational_zero(), |acc, c| acc + red.get(rows[a], n + c) * &basis[b][c])
    });
    if !omega.is_antisymmetric() {
        return Err(Error::Inconsistent("leafwise form is not skew; frame is not isotropic".into()));
    }
    Ok(Presymplectic { basis, omega })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::dirac::{gauge_transform, graph_of_bivector, graph_of_two_form};
    use crate::sampling::SampleBox;
    use crate::tensor::{Form, Multivector};

    fn v(i: usize, n: usize) -> RationalFn {
        RationalFn::var(i, n)
    }

    fn bivector(n: usize, terms: Vec<(usize, usize, RationalFn)>) -> Multivector {
        Multivector::from_terms(n, 2, terms.into_iter().map(|(i, j, c)| (vec![i, j], c))).unwrap()
    }

    fn pts(n: usize) -> Vec<Point> {
        SampleBox::cube(n, rat(1, 2)).points(30, 11)
    }

    #[test]
    fn involutivity_of_graphs() {
        let n = 4;
        let poisson = bivector(n, vec![(0, 1, RationalFn::one(n)), (2, 3, v(2, n))]);
        let ok = involutivity_check(&graph_of_bivector(&poisson).unwrap(), &pts(n)).unwrap();
        assert!(ok.passed);
        let cot = involutivity_check(&graph_of_bivector(&Multivector::zero(n, 2)).unwrap(), &pts(n)).unwrap();
        assert!(cot.passed);
        let bad = bivector(n, vec![(0, 3, v(2, n)), (1, 2, RationalFn::one(n))]);
        let out = involutivity_check(&graph_of_bivector(&bad).unwrap(), &pts(n)).unwrap();
        assert!(!out.passed);
        assert!(out.witness.unwrap().point.is_some());
    }

    #[test]
    fn gauge_composition_and_inverse() {
        let n = 4;
        let pi = bivector(n, vec![(0, 1, RationalFn::one(n)), (2, 3, v(2, n))]);
        let g = graph_of_bivector(&pi).unwrap();
        let b1 = Form::differential(&(&v(0, n) * &v(3, n))).wedge(&Form::basis(n, 2)).unwrap();
        let b2 = Form::basis(n, 1).wedge(&Form::basis(n, 3)).unwrap();
        let back = gauge_transform(&gauge_transform(&g, &b1).unwrap(), &-&b1).unwrap();
        assert!(spans_equal(&back, &g, &pts(n)).unwrap().passed);
        let two = gauge_transform(&gauge_transform(&g, &b1).unwrap(), &b2).unwrap();
        let once = gauge_transform(&g, &(&b1 + &b2)).unwrap();
        assert!(spans_equal(&two, &once, &pts(n)).unwrap().passed);
        assert!(!spans_equal(&g, &once, &pts(n)).unwrap().passed);
    }

    #[test]
    fn gauge_keeps_characteristic_distribution() {
        let n = 4;
        let pi = bivector(n, vec![(0, 1, RationalFn::one(n)), (2, 3, v(2, n))]);
        let g = graph_of_bivector(&pi).unwrap();
        let b = Form::differential(&(&v(0, n) * &v(3, n))).wedge(&Form::basis(n, 2)).unwrap();
        let tg = gauge_transform(&g, &b).unwrap();
        for p in usable_points(&[&g, &tg], &pts(n)).unwrap() {
            let a = Matrix::from_rows(presymplectic_on_characteristic(&g, &p).unwrap().basis);
            let c = Matrix::from_rows(presymplectic_on_characteristic(&tg, &p).unwrap().basis);
            assert_eq!(a.rank(), c.rank());
            assert_eq!(a.vstack(&c).rank(), a.rank());
        }
    }

    #[test]
    fn presymplectic_form_of_symplectic_graph() {
        let n = 2;
        let pi = bivector(n, vec![(0, 1, RationalFn::one(n))]);
        let ps = presymplectic_on_characteristic(&graph_of_bivector(&pi).unwrap(), &[rat(0, 1), rat(0, 1)]).unwrap();
        assert_eq!(ps.basis.len(), 2);
        assert_ne!(ps.omega.determinant(), rat(0, 1));
        // ω(Π♯α, Π♯β) = −β(Π♯α) = Π(β, α); with Π♯dx = ∂y, Π♯dy = −∂x the basis is (−∂x, ∂y)
        let omega = Form::from_terms(n, 2, [(vec![0, 1], RationalFn::one(n))]).unwrap();
        let from_form = presymplectic_on_characteristic(&graph_of_two_form(&omega).unwrap(), &[rat(0, 1), rat(0, 1)]).unwrap();
        assert_eq!(from_form.omega.get(0, 1), &rat(1, 1));
        let cot = presymplectic_on_characteristic(&graph_of_bivector(&Multivector::zero(3, 2)).unwrap(), &vec![rat(1, 3); 3])
            .unwrap();
        assert!(cot.basis.is_empty());
    }

    #[test]
    fn coupling_test_on_graphs() {
        let n = 4;
        let (base, fiber) = ([0, 1], [2, 3]);
        // ∂x1∧∂x2 + y1 ∂y1∧∂y2, plus a mixed piece that tilts H
        let pi = bivector(
            n,
            vec![(0, 1, RationalFn::one(n)), (2, 3, v(2, n)), (0, 2, -&v(3, n))],
        );
        let ct = coupling_test(&graph_of_bivector(&pi).unwrap(), &base, &fiber, &pts(n)).unwrap();
        assert!(ct.outcome.passed);
        let gamma = ct.gamma.unwrap();
        // Π♯dx1 = ∂x2 − y2 ∂y1 and Π♯dx2 = −∂x1
        assert!(gamma[0].iter().all(|c| c.is_zero()));
        assert_eq!(gamma[1][0], -&v(3, n));
        assert!(gamma[1][1].is_zero());
        let vert = bivector(n, vec![(2, 3, RationalFn::one(n))]);
        let ct = coupling_test(&graph_of_bivector(&vert).unwrap(), &base, &fiber, &pts(n)).unwrap();
        assert!(!ct.outcome.passed);
    }
}
