//! The adiabatic criterion for Hamiltonian actions on coupling structures.

use crate::action::{average, Action};
use crate::algebra::{Poly, RationalFn};
use crate::coupling::GeometricData;
use crate::error::{Error, Result};
use crate::report::{CheckOutcome, Report, Witness};
use crate::tensor::{Form, Tensor};

/// Outcome of the adiabatic test for one momentum map component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdiabaticResult {
    /// `ζ = ⟨d₁,₀ J⟩`.
    pub zeta: Form,
    /// Coefficients `ζ(h_i)`.
    pub coefficients: Vec<RationalFn>,
    /// Whether `ζ = 0`, i.e. the averaged action is Hamiltonian with the same `J`.
    pub vanishes: bool,
    /// Polynomial `K` with `d₁,₀ K = ζ` and `K(0) = 0`, when ζ is polynomial.
    pub potential: Option<RationalFn>,
    pub report: Report,
}

/// Whether `Σ fᵢ dxᵢ` with polynomial `fᵢ` in the base variables has the radial primitive
/// `K = Σ fᵢ xᵢ · m / (deg m + 1)` summed over monomials.
fn radial_primitive(coeffs: &[RationalFn], base: &[usize], n: usize) -> Option<RationalFn> {
    let mut k = Poly::zero(n);
    for (i, c) in coeffs.iter().enumerate() {
        let p = c.as_poly()?;
        for (e, a) in p.terms() {
            let deg: u32 = e.iter().sum();
            let term = Poly::monomial(a.clone() / crate::algebra::rat(deg as i64 + 1, 1), e.clone());
            k += &(&term * &Poly::var(base[i], n));
        }
    }
    Some(RationalFn::from_poly(k))
}

/// Checks that `ζ = ⟨d₁,₀ J⟩` is a Casimir of `P` with `∂ζ = 0`, and decides whether it vanishes.
pub fn adiabatic_check(gd: &GeometricData, action: &Action, j: &RationalFn) -> Result<AdiabaticResult> {
    if !gd.is_verified() {
        return Err(Error::Unverified);
    }
    let n = gd.dim();
    let ctx = gd.conn.context();
    let base = ctx.base().to_vec();
    let fiber = ctx.fiber().to_vec();
    let d10 = gd.conn.d10_function(j);
    let zeta = average(action, &Tensor::Form(d10))?.into_form();
    if !ctx.is_horizontal_form(&zeta) {
        return Err(Error::Inconsistent("⟨d₁,₀ J⟩ is not horizontal".into()));
    }
    let lifts = gd.conn.lifts();
    let coefficients: Vec<RationalFn> = lifts.iter().map(|h| zeta.evaluate(&[h])).collect();
    let mut report = Report::new();

    let casimir = (|| {
        for (i, c) in coefficients.iter().enumerate() {
            let ham = gd.p.sharp(&Form::differential(c));
            let first = ham.components().next().map(|(k, v)| format!("P♯dζ(h{i}) has component {k:?} = {v}"));
            if let Some(w) = first {
                return Err(Witness::new(w));
            }
        }
        Ok(())
    })();
    report.push(CheckOutcome::from_result("casimir", casimir));

    let p_rank = gd.p.sharp_matrix();
    let fiber_block = crate::algebra::Matrix::from_fn(fiber.len(), fiber.len(), |a, b| p_rank.get(fiber[a], fiber[b]).clone());
    if fiber_block.determinant().is_zero() {
        report.notice("P is not fiberwise nondegenerate; Casimirs may depend on the fibers");
    } else {
        let depends = (|| {
            for (i, c) in coefficients.iter().enumerate() {
                for &y in &fiber {
                    if !c.derivative(y).is_zero() {
                        return Err(Witness::new(format!("ζ(h{i}) depends on coordinate {y}")));
                    }
                }
            }
            Ok(())
        })();
        report.push(CheckOutcome::from_result("fiber-constant", depends));
    }

    let closed = (|| {
        let dz = zeta.d();
        for a in 0..lifts.len() {
            for b in a + 1..lifts.len() {
                let v = dz.evaluate(&[&lifts[a], &lifts[b]]);
                if !v.is_zero() {
                    return Err(Witness::new(format!("dζ(h{a}, h{b}) = {v}")));
                }
            }
        }
        Ok(())
    })();
    report.push(CheckOutcome::from_result("zeta-closed", closed));

    let vanishes = zeta.is_zero();
    let potential = if vanishes { None } else { radial_primitive(&coefficients, &base, n) };
    if let Some(k) = &potential {
        let back = gd.conn.d10_function(k);
        report.push(CheckOutcome::from_result(
            "casimir-potential",
            if back == zeta { Ok(()) } else { Err(Witness::new("d₁,₀K ≠ ζ for the radial primitive")) },
        ));
    }
    Ok(AdiabaticResult { zeta, coefficients, vanishes, potential, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn check(m: &crate::model::Model) -> AdiabaticResult {
        let gd = m.data.clone().unwrap().verified().unwrap();
        adiabatic_check(&gd, m.action().unwrap(), &m.j.as_ref().unwrap()[0]).unwrap()
    }

    #[test]
    fn plain_momentum_map_is_adiabatic() {
        let r = check(&fixtures::e4());
        assert!(r.vanishes && r.report.passed(), "{}", r.report);
    }

    #[test]
    fn base_coupling_breaks_the_criterion_with_closed_zeta() {
        let m = fixtures::e4_adiabatic();
        let r = check(&m);
        assert!(!r.vanishes);
        assert!(r.report.passed(), "{}", r.report);
        let k = r.potential.clone().unwrap();
        assert_eq!(k, RationalFn::parse("x1*x2 + x1^2*x2", &m.coords).unwrap());
        let mut shifted = m.clone();
        shifted.j = Some(vec![&m.j.as_ref().unwrap()[0] - &k]);
        assert!(check(&shifted).vanishes);
    }
}
