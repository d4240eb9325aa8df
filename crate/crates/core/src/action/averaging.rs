//! The averaging operator, its homotopy operator and the infinitesimal action on tensors.

use super::circle::{Action, CircleAction};
use super::pullback::pullback_flow;
use crate::error::{Error, Result};
use crate::tensor::any::Tensor;
use crate::tensor::Form;

/// `δ` of a circle action split as `weighted + π · mean`.
///
/// For the flow `Fl^t` with `t ∈ [0, 2π)` the operator is
/// `δ(λ) = −(1/2π) ∫ (t − π) (Fl^t)^*λ dt + π ⟨λ⟩`. The first part is exact and
/// has zero average; the second is `π` times the average. Everything downstream
/// uses the zero-average part, which is the same for either chart of the circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaG {
    pub weighted: Tensor,
    pub mean: Tensor,
}

impl DeltaG {
    /// Numeric value of `weighted + π · mean` on one component.
    pub fn component_f64(&self, key: &[usize], point: &[f64]) -> f64 {
        let pick = |t: &Tensor| {
            t.entries().into_iter().find(|(k, _)| k == key).map(|(_, v)| v.eval_f64(point)).unwrap_or(0.0)
        };
        pick(&self.weighted) + std::f64::consts::PI * pick(&self.mean)
    }
}

/// `⟨T⟩` over one circle.
pub fn average_circle(act: &CircleAction, t: &Tensor) -> Result<Tensor> {
    if act.planes().is_empty() {
        return Ok(t.clone());
    }
    Ok(pullback_flow(act, t)?.reduce(|g| g.mean()))
}

/// `⟨T⟩` over the whole group, one circle after another.
pub fn average(action: &Action, t: &Tensor) -> Result<Tensor> {
    let mut cur = t.clone();
    for c in action.circles() {
        cur = average_circle(c, &cur)?;
    }
    Ok(cur)
}

/// The circle homotopy operator on a tensor paired with the generator.
pub fn delta_circle(act: &CircleAction, lambda: &Tensor) -> Result<DeltaG> {
    if act.planes().is_empty() {
        return Ok(DeltaG { weighted: lambda.zero_like(), mean: lambda.clone() });
    }
    let pb = pullback_flow(act, lambda)?;
    Ok(DeltaG { weighted: pb.reduce(|g| g.weighted_mean()), mean: pb.reduce(|g| g.mean()) })
}

/// Homotopy operator for the whole group on a family `λ_k` indexed by the circles,
/// `Σ_k δ_k(⟨λ_k⟩_{circles before k})`, split as `weighted + π · mean`.
pub fn delta_parts(action: &Action, family: &[Tensor]) -> Result<DeltaG> {
    let circles = action.circles();
    if family.len() != circles.len() {
        return Err(Error::Dimension(format!(
            "family has {} members for {} generators",
            family.len(),
            circles.len()
        )));
    }
    let mut weighted = family[0].zero_like();
    let mut mean = family[0].zero_like();
    for (k, lam) in family.iter().enumerate() {
        let mut pre = lam.clone();
        for c in &circles[..k] {
            pre = average_circle(c, &pre)?;
        }
        let d = delta_circle(circles[k], &pre)?;
        weighted = weighted.add(&d.weighted);
        mean = mean.add(&d.mean);
    }
    Ok(DeltaG { weighted, mean })
}

/// Zero-average part of [`delta_parts`].
pub fn delta(action: &Action, family: &[Tensor]) -> Result<Tensor> {
    Ok(delta_parts(action, family)?.weighted)
}

/// `l(T)_a = L_{a_M} T` for each generator.
pub fn l_g(action: &Action, t: &Tensor) -> Vec<Tensor> {
    action.generators().iter().map(|a| t.lie_derivative(a)).collect()
}

/// Whether `L_{a_M} T = 0` for every generator.
pub fn is_invariant(action: &Action, t: &Tensor) -> bool {
    l_g(action, t).iter().all(|x| x.is_zero())
}

/// Average of a closed form with its primitive correction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedAverage {
    pub average: Form,
    /// `δ(ρ)` with `ρ_a = −i_{a_M} β`.
    pub potential: Form,
}

/// `⟨β⟩` and `δ(ρ)` for a closed form, asserting `⟨β⟩ = β − d δ(ρ)`.
pub fn average_closed_form(action: &Action, beta: &Form) -> Result<ClosedAverage> {
    if beta.degree() == 0 {
        return Err(Error::NotClosed("0-forms have no primitive correction".into()));
    }
    if !beta.d().is_zero() {
        return Err(Error::NotClosed("dβ ≠ 0".into()));
    }
    let rho: Vec<Tensor> = action.generators().iter().map(|a| Tensor::Form(-beta.interior(a))).collect();
    let potential = delta(action, &rho)?.into_form();
    let average = average(action, &Tensor::Form(beta.clone()))?.into_form();
    if (beta - &potential.d()) != average {
        return Err(Error::Inconsistent("⟨β⟩ ≠ β − dδ(ρ)".into()));
    }
    Ok(ClosedAverage { average, potential })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::circle::Plane;
    use crate::algebra::{rat, Poly, RationalFn};
    use crate::tensor::Multivector;

    fn rot() -> Action {
        Action::Circle(CircleAction::rotation(2, 0, 1).unwrap())
    }

    fn poly(p: Poly) -> Tensor {
        Tensor::scalar(RationalFn::from_poly(p))
    }

    #[test]
    fn averages_of_coordinates() {
        let y1 = Poly::var(0, 2);
        let y2 = Poly::var(1, 2);
        assert!(average(&rot(), &poly(y1.clone())).unwrap().is_zero());
        let r2 = &(&y1 * &y1) + &(&y2 * &y2);
        assert_eq!(average(&rot(), &poly(r2.clone())).unwrap(), poly(r2.clone()));
        let p = Multivector::wedge_vectors(&Multivector::basis(2, 0), &Multivector::basis(2, 1));
        let t = Tensor::Multivector(p.scale(&RationalFn::from_poly(&y1 * &y1)));
        let expect = Tensor::Multivector(p.scale(&RationalFn::from_poly(r2.scale(&rat(1, 2)))));
        assert_eq!(average(&rot(), &t).unwrap(), expect);
    }

    #[test]
    fn delta_of_coordinate_and_constant() {
        let Action::Circle(c) = rot() else { unreachable!() };
        let d = delta_circle(&c, &poly(Poly::var(0, 2))).unwrap();
        assert_eq!(d.weighted, poly(-&Poly::var(1, 2)));
        assert!(d.mean.is_zero());
        let one = delta_circle(&c, &poly(Poly::one(2))).unwrap();
        assert!(one.weighted.is_zero());
        assert_eq!(one.mean, poly(Poly::one(2)));
        assert!((one.component_f64(&[], &[0.1, 0.2]) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn homotopy_identity_on_coordinate() {
        let f = poly(Poly::var(0, 2));
        let l = l_g(&rot(), &f);
        assert_eq!(l[0], poly(-&Poly::var(1, 2)));
        let lhs = f.add(&delta(&rot(), &l).unwrap());
        assert!(lhs.is_zero());
    }

    #[test]
    fn torus_average_is_invariant() {
        let n = 4;
        let c1 = CircleAction::new(n, vec![Plane { i: 0, j: 1, weight: 1 }]).unwrap();
        let c2 = CircleAction::new(n, vec![Plane { i: 2, j: 3, weight: 2 }]).unwrap();
        let t = Action::Torus(crate::action::TorusAction::new(vec![c1, c2]).unwrap());
        let f = poly(&(&Poly::var(0, n) * &Poly::var(2, n)).pow(2) + &Poly::var(1, n));
        let avg = average(&t, &f).unwrap();
        assert!(is_invariant(&t, &avg));
        let back = f.add(&delta(&t, &l_g(&t, &f)).unwrap());
        assert_eq!(back, avg);
    }
}
