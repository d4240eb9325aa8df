//! The correspondence between geometric data, coupling Poisson tensors and coupling Dirac frames.

use super::{Connection, Foliation, GeometricData};
use crate::algebra::{Matrix, RationalFn};
use crate::dirac::{DiracFrame, DiracSection};
use crate::error::{Error, Result};
use crate::sampling::Point;
use crate::tensor::{jacobiator, BigradeContext, Multivector};

/// `Π = Π₂,₀ + Π₀,₂` with the mixed part zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingPoisson {
    pub pi20: Multivector,
    pub pi02: Multivector,
}

impl CouplingPoisson {
    pub fn pi(&self) -> Multivector {
        &self.pi20 + &self.pi02
    }
}

/// Splits a bivector by the bigrading of a connection, rejecting a mixed part.
pub fn split_bivector(ctx: &BigradeContext, pi: &Multivector) -> Result<CouplingPoisson> {
    let mut parts = ctx.decompose_multivector(pi);
    if parts.contains_key(&(1, 1)) {
        return Err(Error::NotCoupling("Π has a mixed (1,1) component".into()));
    }
    let z = || Multivector::zero(pi.dim(), 2);
    Ok(CouplingPoisson { pi20: parts.remove(&(2, 0)).unwrap_or_else(z), pi02: parts.remove(&(0, 2)).unwrap_or_else(z) })
}

/// `Π₂,₀ = Σ_{i<k} π^{ik} h_i ∧ h_k` with `π = −s⁻¹`, `s_{ik} = σ(h_i, h_k)`, plus `P`.
pub fn data_to_poisson(gd: &GeometricData) -> Result<CouplingPoisson> {
    if !gd.is_verified() {
        return Err(Error::Unverified);
    }
    let s = gd.sigma_on_lifts();
    if s.determinant().is_zero() {
        return Err(Error::Singular("σ restricted to the horizontal lifts is degenerate".into()));
    }
    let pi = s.inverse()?.neg();
    let lifts = gd.conn.lifts();
    let mut pi20 = Multivector::zero(gd.dim(), 2);
    for i in 0..lifts.len() {
        for k in i + 1..lifts.len() {
            let c = pi.get(i, k);
            if !c.is_zero() {
                pi20 = &pi20 + &Multivector::wedge_vectors(&lifts[i], &lifts[k]).scale(c);
            }
        }
    }
    let out = CouplingPoisson { pi20, pi02: gd.p.clone() };
    if !jacobiator(&out.pi()).is_zero() {
        return Err(Error::Inconsistent("assembled Π fails the Jacobi identity".into()));
    }
    Ok(out)
}

/// Geometric data of a coupling Poisson tensor: `H = Π♯(V⁰)`, `σ` from the inversion, `P = Π₀,₂`.
///
/// `points` are used to witness transversality `H ∩ V = 0`.
pub fn poisson_to_data(pi: &Multivector, fol: &Foliation, points: &[Point]) -> Result<GeometricData> {
    let n = fol.dim();
    if pi.degree() != 2 || pi.dim() != n {
        return Err(Error::Dimension("expected a bivector on the foliated chart".into()));
    }
    if !jacobiator(pi).is_zero() {
        return Err(Error::Inconsistent("Π fails the Jacobi identity".into()));
    }
    let (base, fiber) = (fol.base(), fol.fiber());
    let a = Matrix::from_fn(base.len(), base.len(), |k, l| pi.get(&[base[k], base[l]]));
    let det = a.determinant();
    if det.is_zero() {
        return Err(Error::NotCoupling("Π♯(V⁰) meets V everywhere".into()));
    }
    for p in points {
        if det.eval(p).is_some_and(|d| d == crate::algebra::rat(0, 1)) {
            return Err(Error::NotCoupling(format!(
                "Π♯(V⁰) meets V at ({})",
                p.iter().map(crate::algebra::format_rational).collect::<Vec<_>>().join(", ")
            )));
        }
    }
    let ainv = a.inverse()?;
    let gamma: Vec<Vec<RationalFn>> = (0..base.len())
        .map(|i| {
            (0..fiber.len())
                .map(|j| {
                    (0..base.len())
                        .fold(RationalFn::zero(n), |acc, k| &acc + &(ainv.get(i, k) * &pi.get(&[base[k], fiber[j]])))
                })
                .collect()
        })
        .collect();
    let conn = Connection::new(fol.clone(), gamma)?;
    let s = ainv.neg();
    let mut sigma = crate::tensor::Form::zero(n, 2);
    for i in 0..base.len() {
        for k in i + 1..base.len() {
            sigma.set(&[base[i], base[k]], s.get(i, k).clone());
        }
    }
    let split = split_bivector(conn.context(), pi)?;
    GeometricData::new(conn, sigma, split.pi02)?.verified()
}

/// Frame `(h_i, −i_{h_i} σ)` and `(P♯η_j, η_j)`.
pub fn data_to_dirac(gd: &GeometricData) -> Result<DiracFrame> {
    let ctx = gd.conn.context();
    let mut secs = Vec::new();
    for h in gd.conn.lifts() {
        secs.push(DiracSection { alpha: -gd.sigma.interior(&h), x: h });
    }
    for j in 0..ctx.fiber().len() {
        let eta = ctx.eta(j);
        secs.push(DiracSection { x: gd.p.sharp(&eta), alpha: eta });
    }
    DiracFrame::new(secs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::dirac::{graph_of_bivector, involutivity_check, spans_equal};
    use crate::sampling::SampleBox;
    use crate::tensor::{Form, VectorField};

    fn v(i: usize, n: usize) -> RationalFn {
        RationalFn::var(i, n)
    }

    fn flat(scale: i64) -> GeometricData {
        let n = 4;
        let c = Connection::flat(Foliation::split(n, 2).unwrap());
        let sigma = Form::basis(n, 0).wedge(&Form::basis(n, 1)).unwrap().scale_rational(&rat(scale, 1));
        let p = Multivector::wedge_vectors(&VectorField::basis(n, 2), &VectorField::basis(n, 3));
        GeometricData::new(c, sigma, p).unwrap().verified().unwrap()
    }

    fn pts() -> Vec<Point> {
        SampleBox::cube(4, rat(1, 2)).points(30, 5)
    }

    #[test]
    fn flat_data_give_minus_inverse() {
        let cp = data_to_poisson(&flat(1)).unwrap();
        // σ(h1, h2) = 1, so π^{12} = 1
        assert_eq!(cp.pi20.get(&[0, 1]), RationalFn::one(4));
        let cp2 = data_to_poisson(&flat(2)).unwrap();
        assert_eq!(cp2.pi20, cp.pi20.scale_rational(&rat(1, 2)));
        // Π♯ inverts σ♯ on lifts: σ♯ Π♯ dx_k = −dx_k
        let pi = cp.pi();
        let sigma = flat(1).sigma;
        for k in 0..2 {
            let back = sigma.interior(&pi.sharp(&Form::basis(4, k)));
            assert_eq!(back, -&Form::basis(4, k));
        }
    }

    #[test]
    fn unverified_data_rejected() {
        let n = 4;
        let c = Connection::flat(Foliation::split(n, 2).unwrap());
        let gd = GeometricData::new(c, Form::basis(n, 0).wedge(&Form::basis(n, 1)).unwrap(), Multivector::zero(n, 2))
            .unwrap();
        assert_eq!(data_to_poisson(&gd), Err(Error::Unverified));
    }

    #[test]
    fn hand_decomposition() {
        let n = 4;
        let pi = &Multivector::wedge_vectors(&VectorField::basis(n, 0), &VectorField::basis(n, 1))
            + &Multivector::wedge_vectors(&VectorField::basis(n, 2), &VectorField::basis(n, 3)).scale(&v(2, n));
        let fol = Foliation::split(n, 2).unwrap();
        let gd = poisson_to_data(&pi, &fol, &pts()).unwrap();
        assert!(gd.conn.gamma().iter().flatten().all(|g| g.is_zero()));
        assert_eq!(gd.sigma.get(&[0, 1]), RationalFn::one(n));
        assert_eq!(gd.p.get(&[2, 3]), v(2, n));
        assert_eq!(data_to_poisson(&gd).unwrap().pi(), pi);
    }

    #[test]
    fn tilted_round_trip_and_frames() {
        // h1 = ∂x1 + x2 ∂y2, h2 = ∂x2, P = ∂y1∧∂y2; [h1, h2] = −∂y2 forces σ12 = 1 + y1
        let n = 4;
        let fol = Foliation::split(n, 2).unwrap();
        let conn = Connection::new(fol.clone(), vec![vec![RationalFn::zero(n), v(1, n)], vec![RationalFn::zero(n); 2]])
            .unwrap();
        let sigma = Form::basis(n, 0).wedge(&Form::basis(n, 1)).unwrap().scale(&(&RationalFn::one(n) + &v(2, n)));
        let p = Multivector::wedge_vectors(&VectorField::basis(n, 2), &VectorField::basis(n, 3));
        let gd = GeometricData::new(conn, sigma, p).unwrap().verified().unwrap();
        let cp = data_to_poisson(&gd).unwrap();
        let pi = cp.pi();
        assert!(!pi.get(&[1, 3]).is_zero());
        let back = poisson_to_data(&pi, &fol, &pts()).unwrap();
        assert!(back.same_data(&gd));
        let frame = data_to_dirac(&gd).unwrap();
        assert!(involutivity_check(&frame, &pts()).unwrap().passed);
        assert!(spans_equal(&frame, &graph_of_bivector(&pi).unwrap(), &pts()).unwrap().passed);
    }

    #[test]
    fn vertical_only_is_not_coupling() {
        let n = 4;
        let pi = Multivector::wedge_vectors(&VectorField::basis(n, 2), &VectorField::basis(n, 3));
        assert!(matches!(
            poisson_to_data(&pi, &Foliation::split(n, 2).unwrap(), &pts()),
            Err(Error::NotCoupling(_))
        ));
    }

    #[test]
    fn zero_data_frame() {
        let n = 4;
        let c = Connection::flat(Foliation::split(n, 2).unwrap());
        let gd = GeometricData::new(c, Form::zero(n, 2), Multivector::zero(n, 2)).unwrap();
        let f = data_to_dirac(&gd).unwrap();
        for (k, s) in f.sections().iter().enumerate() {
            if k < 2 {
                assert_eq!(s.x, VectorField::basis(n, k));
                assert!(s.alpha.is_zero());
            } else {
                assert!(s.x.is_zero());
                assert_eq!(s.alpha, Form::basis(n, k));
            }
        }
    }
}
