use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::maxwell::{maxwell_lorentzian, maxwell_rc};
use super::{fixtures::random_form, Case, RunOptions};
use crate::calculus::{
    bianchi_reports, codifferential, cotetrad_wave_equation, d_delta_via_rc, dirac, dirac_contract, dirac_wedge,
    dual_torsion_bianchi, dual_torsion_d, dual_torsion_d_decomposed, einstein_operator, einstein_operator_alt,
    evans_check, ext_d, hodge, hodge_dalembertian, ricci_operator, square_split,
};
use crate::connection::{Connection, ConnectionKind, RicciSlot};
use crate::manifold::Geometry;
use crate::multivector::Multivector;
use crate::report::{Artifact, CheckResult, Status};
use crate::symexpr::{EvalError, Expr};

pub const CHECK_NAMES: &[&str] = &[
    "bianchi",
    "cotetrad-wave",
    "curvature-normalization",
    "d-delta",
    "dirac-square",
    "dual-torsion-bianchi",
    "dual-torsion-two-route",
    "evans-equation",
    "expected-values",
    "maxwell-lorentzian",
    "maxwell-rc",
    "metric-compatibility",
    "ricci-contraction-slot",
    "summary",
    "tetrad-identity",
    "torsion-sign",
];

/// Random forms per grade in the randomized checks.
const FORMS_PER_GRADE: usize = 2;

pub(super) fn run_check(case: &Case, c: &Connection, name: &str, opts: &RunOptions) -> CheckResult {
    let mut out = CheckResult::new(&case.label, name);
    let tol = opts.sampling.tol;
    let outcome = match name {
        "expected-values" => expected_values(case, c, &mut out),
        "summary" => summary(c, &mut out),
        "metric-compatibility" => c.metric_compatibility_residual().map(|r| out.require("∇g", r, tol)),
        "bianchi" => bianchi(c, tol, &mut out),
        "dual-torsion-bianchi" => dual_torsion_bianchi(c).map(|r| out.require("δ⋆𝒯 identity", r, tol)),
        "d-delta" => d_delta(c, &case.label, opts, &mut out),
        "dirac-square" => dirac_square(c, &case.label, opts, &mut out),
        "dual-torsion-two-route" => two_route(c, tol, &mut out),
        "evans-equation" => evans(c, &mut out),
        "cotetrad-wave" => wave(c, tol, &mut out),
        "tetrad-identity" => tetrad(c, tol, &mut out),
        "curvature-normalization" => normalization(c, &mut out),
        "ricci-contraction-slot" => ricci_slot(c, &mut out),
        "torsion-sign" => torsion_sign(c, &mut out),
        "maxwell-lorentzian" => maxwell_flat(case, c, tol, &mut out),
        "maxwell-rc" => maxwell_torsion(case, c, tol, &mut out),
        other => {
            out.fail(format!("unknown check {other}"));
            Ok(())
        }
    };
    if let Err(e) = outcome {
        out.fail(format!("evaluation failed: {e}"));
    }
    out
}

fn artifact(g: &Geometry, name: &str, x: &Multivector) -> Artifact {
    Artifact {
        name: name.to_string(),
        frame: g.render_frame(x),
        coordinate: g.render_coordinate(x),
        expected: None,
        origin: None,
        matches: None,
    }
}

fn expected_values(case: &Case, c: &Connection, out: &mut CheckResult) -> Result<(), EvalError> {
    let g = c.geometry();
    let probe = g.probe();
    let base = g.chart().frame_base();
    for e in &case.expected {
        let label = e.quantity.label(base);
        if !e.quantity.in_range(g.n()) {
            out.fail(format!("{label}: index out of range"));
            continue;
        }
        let got = e.quantity.compute(c);
        let ok = probe.mv_equal(&got, &e.value)?;
        out.residual(label.clone(), probe.mv_residual(&got, &e.value)?);
        let mut a = artifact(g, &label, &got);
        a.expected = Some(g.render_frame(&e.value));
        a.origin = Some(e.origin);
        a.matches = Some(ok);
        out.artifacts.push(a);
        if !ok {
            out.fail(format!("{label} differs from the expected value"));
        }
    }
    Ok(())
}

fn summary(c: &Connection, out: &mut CheckResult) -> Result<(), EvalError> {
    let g = c.geometry();
    let n = g.n();
    let base = g.chart().frame_base();
    for a in 0..n {
        for b in 0..n {
            let w = c.omega(a, b);
            if !w.is_zero() {
                out.artifacts.push(artifact(g, &format!("omega[{},{}]", a + base, b + base), &w));
            }
        }
    }
    for a in 0..n {
        out.artifacts.push(artifact(g, &format!("torsion[{}]", a + base), c.torsion_forms().get(&[a])));
    }
    for a in 0..n {
        for b in a + 1..n {
            out.artifacts.push(artifact(
                g,
                &format!("curvature[{},{}]", a + base, b + base),
                c.curvature_forms().get(&[a, b]),
            ));
        }
    }
    let data = c.ricci_data(RicciSlot::Last);
    out.artifacts.push(artifact(g, "ricci-scalar", &Multivector::scalar(g.signature(), data.scalar)));
    out.artifacts.push(artifact(g, "volume", g.volume_element()));
    let kind = match c.kind() {
        ConnectionKind::LeviCivita => "Levi-Civita",
        ConnectionKind::General => "general",
    };
    out.note(format!("{kind} connection, n = {n}"));
    Ok(())
}

fn bianchi(c: &Connection, tol: f64, out: &mut CheckResult) -> Result<(), EvalError> {
    let rep = bianchi_reports(c)?;
    out.require("D𝒯 − 𝓡∧θ (frame)", rep.first_frame, tol);
    out.require("D𝓡 (frame)", rep.second_frame, tol);
    out.require("first identity (coordinates)", rep.first_coordinate, tol);
    out.require("second identity (coordinates)", rep.second_coordinate, tol);
    Ok(())
}

fn rng_for(label: &str, check: &str, seed: u64) -> ChaCha8Rng {
    let mut h = DefaultHasher::new();
    (label, check).hash(&mut h);
    ChaCha8Rng::seed_from_u64(seed ^ h.finish())
}

fn d_delta(c: &Connection, label: &str, opts: &RunOptions, out: &mut CheckResult) -> Result<(), EvalError> {
    let g = c.geometry();
    let probe = g.probe();
    let zero = Multivector::zero(g.signature());
    let lc = Connection::levi_civita(g);
    let mut rng = rng_for(label, "d-delta", opts.seed);
    let mut worst = [0.0f64; 9];
    for r in 0..=g.n() {
        let s = if r % 2 == 0 { 1 } else { -1 };
        for _ in 0..FORMS_PER_GRADE {
            let a = random_form(g, r, &mut rng);
            let da = ext_d(g, &a);
            let dl = codifferential(g, &a);
            let (d_rc, delta_rc) = d_delta_via_rc(c, &a);
            let vals = [
                probe.mv_residual(&ext_d(g, &da), &zero)?,
                probe.mv_residual(&codifferential(g, &dl), &zero)?,
                probe.mv_residual(&hodge(g, &dl), &ext_d(g, &hodge(g, &a)).scale_int(s))?,
                probe.mv_residual(&codifferential(g, &hodge(g, &a)), &hodge(g, &da).scale_int(-s))?,
                probe.mv_residual(&hodge_dalembertian(g, &hodge(g, &a)), &hodge(g, &hodge_dalembertian(g, &a)))?,
                probe.mv_residual(&d_rc, &da)?,
                probe.mv_residual(&delta_rc, &dl)?,
                probe.mv_residual(&dirac_wedge(&lc, &a), &da)?,
                probe.mv_residual(&dirac_contract(&lc, &a), &dl.neg())?,
            ];
            for (w, v) in worst.iter_mut().zip(vals) {
                *w = w.max(v);
            }
        }
    }
    let names = [
        "dd",
        "δδ",
        "⋆δ − (−1)^r d⋆",
        "δ⋆ + (−1)^r ⋆d",
        "◇⋆ − ⋆◇",
        "d via torsion − d",
        "δ via torsion − δ",
        "∂|∧ − d",
        "∂|⌟ + δ",
    ];
    for (n, w) in names.iter().zip(worst) {
        out.require(*n, w, opts.sampling.tol);
    }
    out.note(format!("{} random forms per grade", FORMS_PER_GRADE));
    Ok(())
}

fn dirac_square(c: &Connection, label: &str, opts: &RunOptions, out: &mut CheckResult) -> Result<(), EvalError> {
    let g = c.geometry();
    let probe = g.probe();
    let tol = opts.sampling.tol;
    let lc = Connection::levi_civita(g);
    if c.kind() != ConnectionKind::LeviCivita {
        out.note("evaluated with the Levi-Civita connection of the geometry");
    }
    let data = lc.ricci_data(RicciSlot::Last);
    let mut rng = rng_for(label, "dirac-square", opts.seed);
    let mut worst = [0.0f64; 4];
    for r in 0..=g.n() {
        for _ in 0..FORMS_PER_GRADE {
            let a = random_form(g, r, &mut rng);
            let sq = dirac(&lc, &dirac(&lc, &a));
            let (dot, wedge) = square_split(&lc, &a);
            let vals = [
                probe.mv_residual(&sq, &hodge_dalembertian(g, &a))?,
                probe.mv_residual(&dot.add(&wedge), &sq)?,
                probe.mv_residual(&wedge, &ricci_operator(&lc, &a))?,
                probe.mv_residual(&einstein_operator(&lc, &a), &einstein_operator_alt(&lc, &a))?,
            ];
            for (w, v) in worst.iter_mut().zip(vals) {
                *w = w.max(v);
            }
        }
    }
    let mut ricci = 0.0f64;
    let mut einstein = 0.0f64;
    for a in 0..g.n() {
        let (_, wedge) = square_split(&lc, &g.theta(a));
        ricci = ricci.max(probe.mv_residual(&wedge, &data.ricci_forms[a])?);
        einstein = einstein.max(probe.mv_residual(&einstein_operator(&lc, &g.theta(a)), &data.einstein[a])?);
    }
    for (n, w) in
        ["∂|² − ◇", "∂|·∂| + ∂|∧∂| − ∂|²", "∂|∧∂| − Ricci operator", "Einstein operator, two forms"].iter().zip(worst)
    {
        out.require(*n, w, tol);
    }
    out.require("(∂|∧∂|)θ^a − 𝓡^a", ricci, tol);
    out.require("■θ^a − 𝒢^a", einstein, tol);
    Ok(())
}

fn two_route(c: &Connection, tol: f64, out: &mut CheckResult) -> Result<(), EvalError> {
    let g = c.geometry();
    let direct = dual_torsion_d(c);
    let split = dual_torsion_d_decomposed(c);
    out.require("D⋆𝒯: direct − decomposed", direct.sub(&split).max_abs(&g.probe())?, tol);
    let base = g.chart().frame_base();
    for a in 0..g.n() {
        out.artifacts.push(artifact(g, &format!("dual-torsion-d[{}]", a + base), direct.get(&[a])));
    }
    Ok(())
}

fn evans(c: &Connection, out: &mut CheckResult) -> Result<(), EvalError> {
    let g = c.geometry();
    let rep = evans_check(c)?;
    let base = g.chart().frame_base();
    for a in 0..g.n() {
        let i = a + base;
        out.residual(format!("D⋆𝒯^{i} − ⋆𝓡^{i}_b∧θ^b"), rep.difference[a]);
        out.artifacts.push(artifact(g, &format!("D⋆𝒯^{i}"), rep.lhs.get(&[a])));
        out.artifacts.push(artifact(g, &format!("⋆𝓡^{i}_b∧θ^b"), rep.rhs.get(&[a])));
    }
    let failing: Vec<String> =
        rep.holds.iter().enumerate().filter(|(_, h)| !**h).map(|(a, _)| (a + base).to_string()).collect();
    if failing.is_empty() {
        out.note("D⋆𝒯^a = ⋆𝓡^a_b∧θ^b holds for every a");
    } else {
        out.fail(format!("D⋆𝒯^a = ⋆𝓡^a_b∧θ^b fails for a = {}", failing.join(", ")));
    }
    out.residual("D⋆𝒯: direct − decomposed", rep.two_route_residual);
    Ok(())
}

fn wave(c: &Connection, tol: f64, out: &mut CheckResult) -> Result<(), EvalError> {
    let lc = Connection::levi_civita(c.geometry());
    let rep = cotetrad_wave_equation(&lc, None)?;
    out.require("𝒢^a + ½Rθ^a + □̊θ^a + dδθ^a + δdθ^a", rep.residual, tol);
    out.residual("□̊θ^a − ◇θ^a", rep.box_minus_hodge);
    out.note(if rep.ricci_flat { "□̊θ^a = ◇θ^a: Ricci-flat" } else { "□̊θ^a ≠ ◇θ^a: not Ricci-flat" });
    Ok(())
}

fn tetrad(c: &Connection, tol: f64, out: &mut CheckResult) -> Result<(), EvalError> {
    let g = c.geometry();
    let rep = c.tetrad_identity_check()?;
    out.require("∂q + ωq − Γq", rep.max_residual, tol);
    out.residual("D⁺q = ∂q + ωq", rep.max_d_plus);
    out.residual("D⁻q = ∂q − Γq", rep.max_d_minus);
    let names = g.chart().names();
    let base = g.chart().frame_base();
    let sig = g.signature();
    for (label, table) in [("D⁺", &rep.d_plus), ("D⁻", &rep.d_minus)] {
        for (m, rows) in table.iter().enumerate() {
            for (a, row) in rows.iter().enumerate() {
                for (v, e) in row.iter().enumerate() {
                    if g.probe().expr_equal(e, &Expr::zero())? {
                        continue;
                    }
                    let name = format!("{label}_{} q^{}_{}", names[m], a + base, names[v]);
                    out.artifacts.push(artifact(g, &name, &Multivector::scalar(sig, e.clone())));
                }
            }
        }
    }
    if rep.max_d_plus > tol || rep.max_d_minus > tol {
        out.note("D⁺q and D⁻q are not separately zero; only their combination vanishes");
    }
    Ok(())
}

fn normalization(c: &Connection, out: &mut CheckResult) -> Result<(), EvalError> {
    let g = c.geometry();
    out.status = Status::DiscrepancyNoted;
    let r = c.curvature_components();
    let base = g.chart().frame_base();
    let sig = g.signature();
    if g.n() >= 2 {
        let (i, j) = (base, base + 1);
        let comp = r[1][0][0][1].clone();
        out.artifacts.push(artifact(
            g,
            &format!("R_{j}^{i}_{i}{j} (½-normalized)"),
            &Multivector::scalar(sig, comp.clone()),
        ));
        let halved = Expr::frac(1, 2).mul(&comp);
        out.artifacts.push(artifact(g, &format!("R_{j}^{i}_{i}{j} (unnormalized)"), &Multivector::scalar(sig, halved)));
        out.residual(format!("R_{j}^{i}_{i}{j}"), g.probe().expr_residual(&comp, &Expr::zero())?);
    }
    out.note("convention used: 𝓡^a_b = ½ R_b^a_cd θ^c∧θ^d, giving R_2^1_12 = 1 on the unit sphere");
    out.note(
        "alternative: 𝓡^a_b = R_b^a_cd θ^c∧θ^d summed over all c,d, giving R_2^1_12 = ½; \
         a worked value of ½ is consistent only with that convention (and with R^1_1 + R^2_2 = −1)",
    );
    Ok(())
}

fn ricci_slot(c: &Connection, out: &mut CheckResult) -> Result<(), EvalError> {
    let g = c.geometry();
    out.status = Status::DiscrepancyNoted;
    let last = c.ricci_data(RicciSlot::Last);
    let first = c.ricci_data(RicciSlot::First);
    let sig = g.signature();
    out.artifacts.push(artifact(g, "R (R_μα = R_μ^ρ_αρ)", &Multivector::scalar(sig, last.scalar.clone())));
    out.artifacts.push(artifact(g, "R (R_μν = R_μ^ρ_ρν)", &Multivector::scalar(sig, first.scalar.clone())));
    out.residual("R_last + R_first", g.probe().expr_residual(&last.scalar.add(&first.scalar), &Expr::zero())?);
    out.note("default contraction R_μα = R_μ^ρ_αρ, under which (∂|∧∂|)θ^a is the Ricci 1-form");
    out.note("alternative contraction R_μν = R_μ^ρ_ρν differs by an overall sign");
    Ok(())
}

fn torsion_sign(c: &Connection, out: &mut CheckResult) -> Result<(), EvalError> {
    let g = c.geometry();
    out.status = Status::DiscrepancyNoted;
    let base = g.chart().frame_base();
    for a in 0..g.n() {
        let t = c.torsion_forms().get(&[a]);
        out.artifacts.push(artifact(g, &format!("torsion[{}]", a + base), t));
        out.artifacts.push(artifact(g, &format!("torsion[{}], reversed convention", a + base), &t.neg()));
    }
    out.note("convention used: 𝒯^a = dθ^a + ω^a_b∧θ^b, i.e. T(X,Y) = D_X Y − D_Y X − [X,Y]");
    out.note("with the lower indices of T^a_bc read in the opposite order every torsion component flips sign");
    Ok(())
}

fn maxwell_flat(case: &Case, c: &Connection, tol: f64, out: &mut CheckResult) -> Result<(), EvalError> {
    let g = c.geometry();
    if case.maxwell.is_empty() {
        out.note("no Maxwell fields attached to this case");
    }
    for fx in &case.maxwell {
        match maxwell_lorentzian(g, &fx.f, &fx.j) {
            Ok(rep) => {
                out.require(format!("{}: dF", fx.label), rep.closed, tol);
                out.require(format!("{}: δF + J", fx.label), rep.coclosed, tol);
                out.require(format!("{}: ∂|F − J", fx.label), rep.dirac, tol);
                out.require(format!("{}: divergence form", fx.label), rep.divergence, tol);
            }
            Err(e) => out.fail(format!("{}: {e}", fx.label)),
        }
        out.artifacts.push(artifact(g, &format!("{}: F", fx.label), &fx.f));
    }
    Ok(())
}

fn maxwell_torsion(case: &Case, c: &Connection, tol: f64, out: &mut CheckResult) -> Result<(), EvalError> {
    let g = c.geometry();
    for fx in &case.maxwell {
        match maxwell_rc(c, &fx.f, &fx.j) {
            Ok(rep) => {
                out.require(format!("{}: cyclic DF + T·F", fx.label), rep.cyclic, tol);
                out.require(format!("{}: divergence with torsion", fx.label), rep.divergence, tol);
                out.require(format!("{}: 𝛛F with torsion terms", fx.label), rep.clifford, tol);
            }
            Err(e) => out.fail(format!("{}: {e}", fx.label)),
        }
    }
    out.artifacts.extend(
        (0..g.n())
            .map(|a| artifact(g, &format!("torsion[{}]", a + g.chart().frame_base()), c.torsion_forms().get(&[a]))),
    );
    Ok(())
}
