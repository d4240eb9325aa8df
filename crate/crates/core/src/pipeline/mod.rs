//! End-to-end averaging: compatibility certificates, the gauge form, gauged Poisson tensors,
//! averaged geometric data and the adiabatic criterion.

mod adiabatic;
mod coupling_avg;

pub use adiabatic::{adiabatic_check, AdiabaticResult};
pub use coupling_avg::{average_coupling, vertical_momentum, invariant_sections, block_identities_check, AveragingResult};

use crate::action::{delta_parts, Action};
use crate::algebra::{rat, Matrix, RationalFn};
use crate::dirac::{gauge_transform, graph_of_bivector, spans_equal};
use crate::error::{Error, Result};
use crate::report::{CheckOutcome, Report, Witness};
use crate::sampling::{filter_usable, Point};
use crate::tensor::{jacobiator, Form, Multivector, Tensor};

/// How the action is tied to the Poisson tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `a_M = Π♯ρ_a`.
    Compatible,
    /// `a_M = P♯μ_a` with `dμ_a = 0`.
    LocallyHamiltonian,
    /// `μ_a = dJ_a`.
    Hamiltonian,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Compatible => "compatible",
            Mode::LocallyHamiltonian => "locally-hamiltonian",
            Mode::Hamiltonian => "hamiltonian",
        }
    }

    pub fn from_name(s: &str) -> Option<Mode> {
        [Mode::Compatible, Mode::LocallyHamiltonian, Mode::Hamiltonian].into_iter().find(|m| m.name() == s)
    }

    /// Whether the 1-forms are closed in this mode.
    pub fn closed(self) -> bool {
        self != Mode::Compatible
    }
}

/// Checked link between an action and a bivector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityCertificate {
    pub action: Action,
    pub mu: Vec<Form>,
    pub mode: Mode,
    pub j: Option<Vec<RationalFn>>,
    pub report: Report,
}

impl CompatibilityCertificate {
    pub fn verified(&self) -> bool {
        self.report.passed()
    }
}

/// Verifies `a_M = target♯μ_a` and the closedness required by the mode.
///
/// In Hamiltonian mode `j` is required; `mu` may be empty, in which case `μ_a = dJ_a`.
pub fn check_compatibility(
    action: &Action,
    target: &Multivector,
    mu: Vec<Form>,
    mode: Mode,
    j: Option<Vec<RationalFn>>,
) -> Result<CompatibilityCertificate> {
    let n = action.dim();
    if target.dim() != n || target.degree() != 2 {
        return Err(Error::Dimension("target must be a bivector on the action's chart".into()));
    }
    let rank = action.rank();
    let mu = match (mode, &j) {
        (Mode::Hamiltonian, None) => return Err(Error::Certificate("hamiltonian mode needs J".into())),
        (Mode::Hamiltonian, Some(js)) if mu.is_empty() => js.iter().map(Form::differential).collect(),
        _ => mu,
    };
    if mu.len() != rank || mu.iter().any(|m| m.degree() != 1 || m.dim() != n) {
        return Err(Error::Certificate(format!("expected one 1-form per generator ({rank})")));
    }
    if let Some(js) = &j {
        if js.len() != rank {
            return Err(Error::Certificate(format!("expected one J per generator ({rank})")));
        }
    }
    let mut report = Report::new();
    let gens = action.generators();
    let sharp = (|| {
        for (a, (g, m)) in gens.iter().zip(&mu).enumerate() {
            let d = g - &target.sharp(m);
            let first = d.components().next().map(|(k, c)| format!("a_M − Π♯μ for generator {a} has component {k:?} = {c}"));
            if let Some(w) = first {
                return Err(Witness::new(w));
            }
        }
        Ok(())
    })();
    report.push(CheckOutcome::from_result("compatibility", sharp));
    if mode.closed() {
        let closed = (|| {
            for (a, m) in mu.iter().enumerate() {
                if let Some((k, c)) = m.d().components().next() {
                    return Err(Witness::new(format!("dμ for generator {a} has component {k:?} = {c}")));
                }
            }
            Ok(())
        })();
        report.push(CheckOutcome::from_result("mu-closed", closed));
    }
    if mode == Mode::Hamiltonian {
        let js = j.as_ref().expect("checked above");
        let exact = (|| {
            for (a, (m, jj)) in mu.iter().zip(js).enumerate() {
                if let Some((k, c)) = (m - &Form::differential(jj)).components().next() {
                    return Err(Witness::new(format!("μ − dJ for generator {a} has component {k:?} = {c}")));
                }
            }
            Ok(())
        })();
        report.push(CheckOutcome::from_result("momentum-map", exact));
    }
    Ok(CompatibilityCertificate { action: action.clone(), mu, mode, j, report })
}

/// `Θ = Θ⁰ + π · mean`, where `Θ⁰` has zero average.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theta {
    pub theta0: Form,
    pub mean: Form,
}

/// `Θ = δ(ρ)` and its zero-average normalization.
pub fn compute_theta(cert: &CompatibilityCertificate, rho: &[Form]) -> Result<Theta> {
    if !cert.verified() {
        return Err(Error::Certificate("certificate did not verify".into()));
    }
    let fam: Vec<Tensor> = rho.iter().cloned().map(Tensor::Form).collect();
    let d = delta_parts(&cert.action, &fam)?;
    Ok(Theta { theta0: d.weighted.into_form(), mean: d.mean.into_form() })
}

/// The gauge transformation driven by a momentum map on coupling data: `ρ = μ₀,₁`, `Θ = δ(ρ)`,
/// `B = −dΘ` and `Π̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeRun {
    pub pi: Multivector,
    pub cert: CompatibilityCertificate,
    pub theta: Theta,
    pub b: Form,
    pub gauged: GaugedPoisson,
}

pub fn gauge_from_momentum(
    gd: &crate::coupling::GeometricData,
    action: &Action,
    mu: &[Form],
    points: &[Point],
) -> Result<GaugeRun> {
    let pi = crate::coupling::data_to_poisson(gd)?.pi();
    let rho = vertical_momentum(gd, mu);
    let cert = check_compatibility(action, &pi, rho.clone(), Mode::Compatible, None)?;
    if !cert.verified() {
        let w = cert.report.first_failure().map(|o| o.to_string()).unwrap_or_default();
        return Err(Error::Certificate(format!("a_M ≠ Π♯ρ: {w}")));
    }
    let theta = compute_theta(&cert, &rho)?;
    let b = -theta.theta0.d();
    let gauged = gauge_poisson(&pi, &b, points)?;
    Ok(GaugeRun { pi, cert, theta, b, gauged })
}

/// Outcome of the exact gauge transformation of a bivector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugedPoisson {
    pub pi_bar: Multivector,
    /// `det(Id − B♯Π♯)`.
    pub det: RationalFn,
    pub report: Report,
}

fn bivector_witness(m: &Multivector, what: &str) -> std::result::Result<(), Witness> {
    match m.components().next() {
        None => Ok(()),
        Some((k, c)) => Err(Witness::new(format!("{what} has component {k:?} = {c}"))),
    }
}

/// `[[Π, Π]] = 0`, with the first nonzero component as witness.
pub fn jacobi_check(pi: &Multivector) -> CheckOutcome {
    CheckOutcome::from_result("jacobi", bivector_witness(&jacobiator(pi), "[[Π, Π]]"))
}

/// `Π̄♯ = Π♯ ∘ (Id − B♯∘Π♯)⁻¹`, with Jacobi and `Graph Π̄ = τ_B(Graph Π)` checked.
pub fn gauge_poisson(pi: &Multivector, b: &Form, points: &[Point]) -> Result<GaugedPoisson> {
    let n = pi.dim();
    if b.degree() != 2 || b.dim() != n {
        return Err(Error::Dimension("B must be a 2-form on the chart".into()));
    }
    let s = pi.sharp_matrix();
    let m = Matrix::identity(n, &RationalFn::zero(n)).sub(&b.sharp_matrix().mul(&s));
    let det = m.determinant();
    if det.is_zero() {
        return Err(Error::Singular("Id − B♯Π♯ is identically singular".into()));
    }
    let pi_bar = Multivector::from_sharp_matrix(&s.mul(&m.inverse()?));
    let mut report = Report::new();
    let sb = pi_bar.sharp_matrix();
    report.push(if sb.is_antisymmetric() {
        CheckOutcome::pass("antisymmetry")
    } else {
        CheckOutcome::fail("antisymmetry", Witness::new("Π̄♯ is not skew"))
    });
    report.push(CheckOutcome::from_result("jacobi", bivector_witness(&jacobiator(&pi_bar), "[[Π̄, Π̄]]")));
    let zero = rat(0, 1);
    let usable = filter_usable(points, |p| det.eval(p).is_some_and(|d| d != zero));
    match usable {
        Ok(pts) => {
            let skipped = points.len() - pts.len();
            if skipped > 0 {
                report.notice(format!("skipped {skipped} sample points on det(Id − B♯Π♯) = 0"));
            }
            let lhs = graph_of_bivector(&pi_bar)?;
            let rhs = gauge_transform(&graph_of_bivector(pi)?, b)?;
            let mut o = spans_equal(&lhs, &rhs, &pts)?;
            o.check = "gauge-graph".into();
            report.push(o);
        }
        Err(Error::TooFewPoints { usable, total }) => report.push(CheckOutcome::fail(
            "gauge-graph",
            Witness::new(format!("only {usable} of {total} sample points avoid the singular locus")),
        )),
        Err(e) => return Err(e),
    }
    Ok(GaugedPoisson { pi_bar, det, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::CircleAction;
    use crate::sampling::SampleBox;
    use crate::tensor::VectorField;

    fn v(i: usize, n: usize) -> RationalFn {
        RationalFn::var(i, n)
    }

    fn rot() -> Action {
        Action::Circle(CircleAction::rotation(4, 2, 3).unwrap())
    }

    fn p() -> Multivector {
        Multivector::wedge_vectors(&VectorField::basis(4, 2), &VectorField::basis(4, 3))
    }

    fn lopsided() -> RationalFn {
        &(&v(2, 4) * &v(2, 4)) + &(&v(3, 4) * &v(3, 4)).scale(&rat(1, 2))
    }

    fn half_r2() -> RationalFn {
        (&(&v(2, 4) * &v(2, 4)) + &(&v(3, 4) * &v(3, 4))).scale(&rat(1, 2))
    }

    #[test]
    fn hamiltonian_rotation_certificate() {
        let c = check_compatibility(&rot(), &p(), vec![], Mode::Hamiltonian, Some(vec![half_r2()])).unwrap();
        assert!(c.verified(), "{}", c.report);
        let wrong = check_compatibility(&rot(), &p(), vec![], Mode::Hamiltonian, Some(vec![lopsided()])).unwrap();
        assert!(!wrong.verified());
    }

    #[test]
    fn open_mu_fails_locally_hamiltonian() {
        let mu = &Form::differential(&half_r2()) + &Form::basis(4, 0).scale(&v(1, 4));
        let c = check_compatibility(&rot(), &p(), vec![mu], Mode::LocallyHamiltonian, None).unwrap();
        assert!(c.report.get("compatibility").unwrap().passed);
        assert!(!c.report.get("mu-closed").unwrap().passed);
    }

    #[test]
    fn trivial_action_is_compatible() {
        let a = Action::Circle(CircleAction::trivial(4));
        let c = check_compatibility(&a, &p(), vec![Form::zero(4, 1)], Mode::Compatible, None).unwrap();
        assert!(c.verified());
        assert!(compute_theta(&c, &[Form::zero(4, 1)]).unwrap().theta0.is_zero());
    }

    #[test]
    fn theta_of_exact_form_is_exact() {
        let c = check_compatibility(&rot(), &p(), vec![], Mode::Hamiltonian, Some(vec![half_r2()])).unwrap();
        let f = &(&v(0, 4) * &v(2, 4)) + &(&v(3, 4) * &v(1, 4));
        let th = compute_theta(&c, &[Form::differential(&f)]).unwrap();
        let df = crate::action::delta(&rot(), &[Tensor::scalar(f)]).unwrap().into_form();
        assert_eq!(th.theta0, Form::differential(&df.as_scalar()));
        assert!(crate::action::average(&rot(), &Tensor::Form(th.theta0)).unwrap().is_zero());
    }

    #[test]
    fn gauge_by_zero_and_closed_forms() {
        let n = 4;
        let pi = &p() + &Multivector::wedge_vectors(&VectorField::basis(n, 0), &VectorField::basis(n, 1));
        let pts = SampleBox::cube(n, rat(1, 2)).points(20, 1);
        let g = gauge_poisson(&pi, &Form::zero(n, 2), &pts).unwrap();
        assert_eq!(g.pi_bar, pi);
        let closed = Form::differential(&(&v(0, n) * &v(2, n))).d();
        assert_eq!(gauge_poisson(&pi, &closed, &pts).unwrap().pi_bar, pi);
    }

    #[test]
    fn nilpotent_gauge_inverse() {
        // Π = y1 ∂x1∧∂x2 vanishes on y1 = 0 and B = dx1∧dy1 makes (B♯Π♯)² = 0
        let n = 3;
        let pi = Multivector::from_terms(n, 2, [(vec![0, 1], v(2, n))]).unwrap();
        let b = Form::basis(n, 0).wedge(&Form::basis(n, 2)).unwrap();
        let bp = b.sharp_matrix().mul(&pi.sharp_matrix());
        assert!(bp.mul(&bp).is_zero());
        let pts = SampleBox::cube(n, rat(1, 2)).points(20, 2);
        let g = gauge_poisson(&pi, &b, &pts).unwrap();
        let id = Matrix::identity(n, &RationalFn::zero(n));
        assert_eq!(g.pi_bar.sharp_matrix(), pi.sharp_matrix().mul(&id.add(&bp)));
        assert!(g.report.passed(), "{}", g.report);
    }
}
