//! Averaging of coupling Dirac structures under locally Hamiltonian actions.

use super::{gauge_poisson, CompatibilityCertificate};
use crate::action::{average, delta, Action};
use crate::algebra::{rat, Matrix, RationalFn};
use crate::coupling::{
    data_to_dirac, data_to_poisson, poisson_wedge, q_gauge, split_bivector, CouplingPoisson, Foliation, GeometricData,
};
use crate::dirac::{gauge_transform, spans_equal, usable_points, DiracFrame, DiracSection};
use crate::error::{Error, Result};
use crate::report::{CheckOutcome, Report, Witness};
use crate::sampling::Point;
use crate::tensor::{BigradeContext, Form, Multivector, Tensor, VectorField};

/// Averaged data with the forms that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AveragingResult {
    /// Zero-average `δ(μ₀,₁)`.
    pub theta: Form,
    /// Zero-average `−δ(μ₁,₀)`.
    pub q: Form,
    /// `−dΘ`.
    pub b: Form,
    pub data: GeometricData,
    pub poisson: Option<CouplingPoisson>,
    pub report: Report,
}

/// `ρ_a = (μ_a)₀,₁`, which satisfies `a_M = Π♯ρ_a` for the coupling tensor when `a_M = P♯μ_a`.
pub fn vertical_momentum(gd: &GeometricData, mu: &[Form]) -> Vec<Form> {
    let ctx = gd.conn.context();
    mu.iter().map(|m| m - &horizontal_part(ctx, m)).collect()
}

/// `β₁,₀ = Σ β(h_i) dx_i`.
fn horizontal_part(ctx: &BigradeContext, beta: &Form) -> Form {
    let lifts = ctx.lifts();
    ctx.horizontal_from_lift_values(1, |i| beta.evaluate(&[&lifts[i[0]]]))
}

fn form_diff(a: &Form, b: &Form, what: &str) -> std::result::Result<(), Witness> {
    let diff = a - b;
    let first = diff.components().next().map(|(k, c)| format!("{what} differ at component {k:?} by {c}"));
    first.map_or(Ok(()), |w| Err(Witness::new(w)))
}

fn tensor_zero(t: &Tensor, what: &str) -> std::result::Result<(), Witness> {
    match t.entries().into_iter().next() {
        None => Ok(()),
        Some((k, c)) => Err(Witness::new(format!("{what} has component {k:?} = {c}"))),
    }
}

fn invariance(action: &Action, t: &Tensor, what: &str) -> std::result::Result<(), Witness> {
    for (a, g) in action.generators().iter().enumerate() {
        tensor_zero(&t.lie_derivative(g), &format!("L_a{a} of {what}"))?;
    }
    Ok(())
}

/// Averages integrable data under a locally Hamiltonian certificate and checks the result
/// against every independent derivation.
pub fn average_coupling(
    gd: &GeometricData,
    cert: &CompatibilityCertificate,
    points: &[Point],
) -> Result<AveragingResult> {
    if !gd.is_verified() {
        return Err(Error::Unverified);
    }
    if !cert.verified() || !cert.mode.closed() {
        return Err(Error::Certificate("averaging needs a verified certificate with closed μ".into()));
    }
    let action = &cert.action;
    let ctx = gd.conn.context();
    let mu10: Vec<Form> = cert.mu.iter().map(|m| horizontal_part(ctx, m)).collect();
    let mu01: Vec<Form> = cert.mu.iter().zip(&mu10).map(|(m, h)| m - h).collect();
    let to_t = |v: &[Form]| v.iter().cloned().map(Tensor::Form).collect::<Vec<_>>();
    let q = -delta(action, &to_t(&mu10))?.into_form();
    let theta = delta(action, &to_t(&mu01))?.into_form();
    let b = -theta.d();
    let mut report = Report::new();

    report.push(CheckOutcome::from_result("gauge-form", form_diff(&b, &-q.d(), "−dΘ and −dQ")));

    let out = q_gauge(gd, &q)?;
    let avg = |t: Tensor| average(action, &t);
    let gamma_avg = avg(Tensor::Endo(gd.conn.as_vector_valued()))?;
    report.push(CheckOutcome::from_result(
        "average-connection",
        tensor_zero(&gamma_avg.sub(&Tensor::Endo(out.conn.as_vector_valued())), "⟨γ⟩ − (γ − Ξ^Q)"),
    ));

    let qq = poisson_wedge(&gd.conn, &gd.p, &q, &q)?;
    let q_avg = avg(Tensor::Form(q.clone()))?.into_form();
    let sigma_avg = &avg(Tensor::Form(gd.sigma.clone()))?.into_form()
        + &avg(Tensor::Form(qq.scale_rational(&rat(1, 2))))?.into_form();
    let sigma_ob = &sigma_avg - &out.conn.context().d10_horizontal(&q_avg)?;
    report.push(CheckOutcome::from_result("average-sigma", form_diff(&sigma_ob, &out.sigma, "averaged and gauged σ")));

    let d10q = ctx.d10_horizontal(&q)?;
    let bar_d10q = out.conn.context().d10_horizontal(&q)?;
    report.push(CheckOutcome::from_result(
        "transition-rule",
        form_diff(&bar_d10q, &(&d10q + &qq), "d̄10 Q and d10 Q + {Q∧Q}"),
    ));
    // Averaging the transition rule gives the minus sign in front of ⟨{Q∧Q}⟩.
    let lhs = avg(Tensor::Form(d10q))?.into_form();
    let bar_avg = out.conn.context().d10_horizontal(&q_avg)?;
    let qq_avg = avg(Tensor::Form(qq))?.into_form();
    report.push(CheckOutcome::from_result(
        "average-d10",
        form_diff(&lhs, &(&bar_avg - &qq_avg), "⟨d10 Q⟩ and d̄10⟨Q⟩ − ⟨{Q∧Q}⟩"),
    ));
    if let Err(w) = form_diff(&lhs, &(&bar_avg + &qq_avg), "⟨d10 Q⟩ and d̄10⟨Q⟩ + ⟨{Q∧Q}⟩") {
        report.notice(format!("plus-sign variant of the averaged d10 identity fails: {}", w.detail));
    }

    let inv = invariance(action, &Tensor::Endo(out.conn.as_vector_valued()), "γ̄")
        .and_then(|_| invariance(action, &Tensor::Form(out.sigma.clone()), "σ̄"))
        .and_then(|_| invariance(action, &Tensor::Multivector(out.p.clone()), "P"));
    report.push(CheckOutcome::from_result("invariance", inv));

    let (_, se) = out.clone().verify();
    report.extend(se);

    let before = data_to_dirac(gd)?;
    let after = data_to_dirac(&out)?;
    let mut frames = spans_equal(&after, &gauge_transform(&before, &b)?, points)?;
    frames.check = "gauge-frame".into();
    report.push(frames);

    let b02 = ctx.form_component(&b, 0, 2);
    report.push(CheckOutcome::from_result("vertical-gauge-form", tensor_zero(&Tensor::Form(b02), "B₀,₂")));

    let mut poisson = None;
    if !out.sigma_on_lifts().determinant().is_zero() && !gd.sigma_on_lifts().determinant().is_zero() {
        let averaged = data_to_poisson(&out)?;
        let original = data_to_poisson(gd)?;
        let g = gauge_poisson(&original.pi(), &b, points)?;
        report.push(CheckOutcome::from_result(
            "gauge-poisson",
            tensor_zero(&Tensor::Multivector(&g.pi_bar - &averaged.pi()), "Π̄ from data minus gauged Π"),
        ));
        let split = split_bivector(out.conn.context(), &g.pi_bar)?;
        report.push(CheckOutcome::from_result(
            "vertical-part",
            tensor_zero(&Tensor::Multivector(&split.pi02 - &original.pi02), "Π̄₀,₂ − Π₀,₂"),
        ));
        poisson = Some(averaged);
    } else {
        report.notice("σ is degenerate on lifts; skipping the Poisson comparison");
    }
    Ok(AveragingResult { theta, q, b, data: out, poisson, report })
}

/// `(⟨h_i⟩, −i_{h_i} σ̄)` and `(P♯β, β)` for an invariant `β ∈ H̄⁰`, with their membership and
/// invariance checked.
pub fn invariant_sections(
    res: &AveragingResult,
    action: &Action,
    lift: usize,
    beta: &Form,
    original: &GeometricData,
    points: &[Point],
) -> Result<(DiracSection, DiracSection, Report)> {
    let data = &res.data;
    let n = data.dim();
    let inv_beta = invariance(action, &Tensor::Form(beta.clone()), "β");
    if inv_beta.is_err() {
        return Err(Error::Inconsistent("β is not invariant".into()));
    }
    let lifts_bar = data.conn.lifts();
    if lifts_bar.iter().any(|h| !beta.evaluate(&[h]).is_zero()) {
        return Err(Error::Inconsistent("β does not annihilate the averaged horizontal bundle".into()));
    }
    let h = original.conn.lift(lift);
    let x = &h + &data.p.sharp(&Form::differential(&res.q.evaluate(&[&h])));
    let mut report = Report::new();
    let avg_h = average(action, &Tensor::Multivector(h.clone()))?.into_multivector();
    report.push(CheckOutcome::from_result(
        "average-lift",
        tensor_zero(&Tensor::Multivector(&avg_h - &x), "⟨h⟩ − (h + P♯dQ(h))"),
    ));
    let s1 = DiracSection { alpha: -data.sigma.interior(&h), x };
    let s2 = DiracSection { x: data.p.sharp(beta), alpha: beta.clone() };
    let frame = data_to_dirac(data)?;
    for (name, s) in [("lift-section", &s1), ("vertical-section", &s2)] {
        report.push(CheckOutcome::from_result(
            format!("{name}-invariant"),
            invariance(action, &Tensor::Multivector(s.x.clone()), "X")
                .and_then(|_| invariance(action, &Tensor::Form(s.alpha.clone()), "α")),
        ));
        report.push(in_span(&frame, s, points, &format!("{name}-in-frame"))?);
    }
    let _ = n;
    Ok((s1, s2, report))
}

fn in_span(frame: &DiracFrame, s: &DiracSection, points: &[Point], check: &str) -> Result<CheckOutcome> {
    for p in usable_points(&[frame], points)? {
        let Some(row) = s.eval(&p) else { continue };
        let m = frame.matrix_at(&p).expect("usable point");
        if m.vstack(&Matrix::from_rows(vec![row])).rank() != frame.dim() {
            return Ok(CheckOutcome::fail(check, Witness::at(&p, "section leaves the frame")));
        }
    }
    Ok(CheckOutcome::pass(check))
}

/// Vertical and horizontal block identities of the gauge transformation `Π ↦ Π̄`:
/// `Π̄₀,₂♯ = Π₀,₂♯(Id − B₀,₂♯Π₀,₂♯)⁻¹` and `Π̄₂,₀♯ = (id − p̄_V) Π₂,₀♯ (Id − B♯Π♯)⁻¹`.
pub fn block_identities_check(pi: &Multivector, pi_bar: &Multivector, b: &Form, fol: &Foliation, points: &[Point]) -> Result<Report> {
    let n = pi.dim();
    let gd = crate::coupling::poisson_to_data(pi, fol, points)?;
    let gd_bar = crate::coupling::poisson_to_data(pi_bar, fol, points)?;
    let sp = split_bivector(gd.conn.context(), pi)?;
    let sp_bar = split_bivector(gd_bar.conn.context(), pi_bar)?;
    let id = Matrix::identity(n, &RationalFn::zero(n));
    let b02 = gd.conn.context().form_component(b, 0, 2);
    let mut report = Report::new();

    let p02 = sp.pi02.sharp_matrix();
    let m02 = id.sub(&b02.sharp_matrix().mul(&p02));
    let vert = match m02.inverse() {
        Ok(inv) => {
            let rhs = Multivector::from_sharp_matrix(&p02.mul(&inv));
            tensor_zero(&Tensor::Multivector(&sp_bar.pi02 - &rhs), "Π̄₀,₂ − Π₀,₂♯(Id − B₀,₂♯Π₀,₂♯)⁻¹")
        }
        Err(_) => Err(Witness::new("Id − B₀,₂♯Π₀,₂♯ is singular")),
    };
    report.push(CheckOutcome::from_result("vertical-block", vert));

    let m = id.sub(&b.sharp_matrix().mul(&pi.sharp_matrix()));
    let horiz = match m.inverse() {
        Ok(inv) => {
            let pv = gd_bar.conn.as_vector_valued().matrix().clone();
            let rhs = id.sub(&pv).mul(&sp.pi20.sharp_matrix()).mul(&inv);
            let lhs = sp_bar.pi20.sharp_matrix();
            if lhs == rhs {
                Ok(())
            } else {
                Err(Witness::new("Π̄₂,₀♯ ≠ (id − p̄_V) Π₂,₀♯ (Id − B♯Π♯)⁻¹"))
            }
        }
        Err(_) => Err(Witness::new("Id − B♯Π♯ is singular")),
    };
    report.push(CheckOutcome::from_result("horizontal-block", horiz));
    let full = m.inverse().map(|inv| Multivector::from_sharp_matrix(&pi.sharp_matrix().mul(&inv)));
    report.push(CheckOutcome::from_result(
        "full-gauge",
        match full {
            Ok(f) => tensor_zero(&Tensor::Multivector(&f - pi_bar), "Π♯(Id − B♯Π♯)⁻¹ − Π̄♯"),
            Err(_) => Err(Witness::new("Id − B♯Π♯ is singular")),
        },
    ));
    let _ = VectorField::zero(n, 1);
    Ok(report)
}
