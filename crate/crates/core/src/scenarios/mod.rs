//! Built-in worked examples and the check runner shared with the CLI.

mod checks;
pub mod fixtures;
pub mod maxwell;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::calculus::{dual_torsion_d, hodge};
use crate::connection::{Connection, RicciSlot};
use crate::multivector::Multivector;
use crate::report::{Origin, Report};
use crate::symexpr::{Expr, Params, Sampling};

pub use checks::CHECK_NAMES;
pub use maxwell::{MaxwellError, MaxwellField};

/// Names accepted by [`builtin`].
pub const BUILTINS: &[&str] = &["s2-levi-civita", "s2-nunes", "polar-plane", "contorsion-3d", "maxwell-flat", "evans"];

/// A named quantity computed from a connection. Frame indices in the textual
/// form are offset by the chart's frame base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `c^a_{bc}`
    Structure(usize, usize, usize),
    /// `ω^a_b`
    Omega(usize, usize),
    /// `𝒯^a`
    Torsion(usize),
    /// `T^a_{bc}`
    TorsionComponent(usize, usize, usize),
    /// `𝓡^a_b`
    Curvature(usize, usize),
    /// `⋆𝓡^a_b`
    StarCurvature(usize, usize),
    /// `⋆𝓡^a_b∧θ^b`
    EvansRhs(usize),
    /// `D⋆𝒯^a`
    DualTorsionD(usize),
    /// `𝓡^a`
    RicciForm(usize),
    /// `𝒢^a`
    EinsteinForm(usize),
    RicciScalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown quantity `{0}`")]
pub struct QuantityError(pub String);

impl Quantity {
    fn arity(head: &str) -> Option<usize> {
        Some(match head {
            "c" | "T" => 3,
            "omega" | "curvature" | "star-curvature" => 2,
            "torsion" | "evans-rhs" | "dual-torsion-d" | "ricci-form" | "einstein-form" => 1,
            "ricci-scalar" => 0,
            _ => return None,
        })
    }

    /// Parses `head[i,j,..]`, subtracting `base` from each index.
    pub fn parse(text: &str, base: usize) -> Result<Quantity, QuantityError> {
        let err = || QuantityError(text.to_string());
        let (head, ix) = match text.find('[') {
            Some(p) if text.ends_with(']') => {
                let inner = &text[p + 1..text.len() - 1];
                let ix: Result<Vec<usize>, _> = inner
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().ok().and_then(|i| i.checked_sub(base)).ok_or_else(err))
                    .collect();
                (&text[..p], ix?)
            }
            _ => (text, Vec::new()),
        };
        if Quantity::arity(head) != Some(ix.len()) {
            return Err(err());
        }
        Ok(match head {
            "c" => Quantity::Structure(ix[0], ix[1], ix[2]),
            "T" => Quantity::TorsionComponent(ix[0], ix[1], ix[2]),
            "omega" => Quantity::Omega(ix[0], ix[1]),
            "curvature" => Quantity::Curvature(ix[0], ix[1]),
            "star-curvature" => Quantity::StarCurvature(ix[0], ix[1]),
            "torsion" => Quantity::Torsion(ix[0]),
            "evans-rhs" => Quantity::EvansRhs(ix[0]),
            "dual-torsion-d" => Quantity::DualTorsionD(ix[0]),
            "ricci-form" => Quantity::RicciForm(ix[0]),
            "einstein-form" => Quantity::EinsteinForm(ix[0]),
            _ => Quantity::RicciScalar,
        })
    }

    fn indices(&self) -> Vec<usize> {
        match *self {
            Quantity::Structure(a, b, c) | Quantity::TorsionComponent(a, b, c) => vec![a, b, c],
            Quantity::Omega(a, b) | Quantity::Curvature(a, b) | Quantity::StarCurvature(a, b) => vec![a, b],
            Quantity::Torsion(a)
            | Quantity::EvansRhs(a)
            | Quantity::DualTorsionD(a)
            | Quantity::RicciForm(a)
            | Quantity::EinsteinForm(a) => vec![a],
            Quantity::RicciScalar => vec![],
        }
    }

    /// Label with indices shifted by `base`.
    pub fn label(&self, base: usize) -> String {
        let head = match self {
            Quantity::Structure(..) => "c",
            Quantity::TorsionComponent(..) => "T",
            Quantity::Omega(..) => "omega",
            Quantity::Curvature(..) => "curvature",
            Quantity::StarCurvature(..) => "star-curvature",
            Quantity::Torsion(..) => "torsion",
            Quantity::EvansRhs(..) => "evans-rhs",
            Quantity::DualTorsionD(..) => "dual-torsion-d",
            Quantity::RicciForm(..) => "ricci-form",
            Quantity::EinsteinForm(..) => "einstein-form",
            Quantity::RicciScalar => "ricci-scalar",
        };
        let ix = self.indices();
        if ix.is_empty() {
            head.to_string()
        } else {
            let parts: Vec<String> = ix.iter().map(|i| (i + base).to_string()).collect();
            format!("{head}[{}]", parts.join(","))
        }
    }

    pub fn in_range(&self, n: usize) -> bool {
        self.indices().iter().all(|&i| i < n)
    }

    /// Evaluates the quantity symbolically; scalars come back as grade-0 multivectors.
    pub fn compute(&self, c: &Connection) -> Multivector {
        let g = c.geometry();
        let sig = g.signature();
        let scalar = |e: Expr| Multivector::scalar(sig, e);
        match *self {
            Quantity::Structure(a, b, cc) => scalar(g.structure_coefficients()[a][b][cc].clone()),
            Quantity::TorsionComponent(a, b, cc) => scalar(c.torsion_components()[a][b][cc].clone()),
            Quantity::Omega(a, b) => c.omega(a, b),
            Quantity::Torsion(a) => c.torsion_forms().get(&[a]).clone(),
            Quantity::Curvature(a, b) => c.curvature_forms().get(&[a, b]).clone(),
            Quantity::StarCurvature(a, b) => hodge(g, c.curvature_forms().get(&[a, b])),
            Quantity::EvansRhs(a) => {
                let parts: Vec<Multivector> =
                    (0..g.n()).map(|b| hodge(g, c.curvature_forms().get(&[a, b])).wedge(&g.theta(b))).collect();
                Multivector::sum(sig, &parts)
            }
            Quantity::DualTorsionD(a) => dual_torsion_d(c).get(&[a]).clone(),
            Quantity::RicciForm(a) => c.ricci_data(RicciSlot::Last).ricci_forms[a].clone(),
            Quantity::EinsteinForm(a) => c.ricci_data(RicciSlot::Last).einstein[a].clone(),
            Quantity::RicciScalar => scalar(c.ricci_data(RicciSlot::Last).scalar),
        }
    }
}

/// A quantity with its expected value.
#[derive(Debug, Clone)]
pub struct Expected {
    pub quantity: Quantity,
    pub value: Multivector,
    pub origin: Origin,
}

/// One connection with the checks to run on it.
#[derive(Debug, Clone)]
pub struct Case {
    pub label: String,
    pub connection: Connection,
    pub expected: Vec<Expected>,
    pub checks: Vec<String>,
    pub maxwell: Vec<MaxwellField>,
}

impl Case {
    pub fn new(label: &str, connection: Connection, checks: &[&str]) -> Case {
        Case {
            label: label.to_string(),
            connection,
            expected: Vec::new(),
            checks: checks.iter().map(|s| s.to_string()).collect(),
            maxwell: Vec::new(),
        }
    }

    pub fn expect(mut self, quantity: Quantity, value: Multivector, origin: Origin) -> Case {
        self.expected.push(Expected { quantity, value, origin });
        self
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub cases: Vec<Case>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
}

/// Settings shared by every check of a run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOptions {
    pub sampling: Sampling,
    pub seed: u64,
    /// run only checks with these names
    pub only: Option<Vec<String>>,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        for case in &self.cases {
            for c in &case.checks {
                if !CHECK_NAMES.contains(&c.as_str()) {
                    return Err(ScenarioError::UnknownCheck(c.clone()));
                }
            }
        }
        Ok(())
    }

    /// Runs every selected check; records come back sorted by case and check name.
    pub fn run(&self, opts: &RunOptions) -> Result<Report, ScenarioError> {
        self.validate()?;
        if let Some(only) = &opts.only {
            if let Some(bad) = only.iter().find(|c| !CHECK_NAMES.contains(&c.as_str())) {
                return Err(ScenarioError::UnknownCheck(bad.clone()));
            }
        }
        let mut jobs = Vec::new();
        for case in &self.cases {
            let g = case.connection.geometry().resampled(opts.sampling);
            let conn = case.connection.rebind(&g);
            for name in &case.checks {
                if opts.only.as_ref().is_none_or(|o| o.contains(name)) {
                    jobs.push((case, conn.clone(), name.clone()));
                }
            }
        }
        let results = std::thread::scope(|s| {
            let handles: Vec<_> = jobs
                .iter()
                .map(|(case, conn, name)| s.spawn(move || checks::run_check(case, conn, name, opts)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("check panicked")).collect::<Vec<_>>()
        });
        Ok(Report::new(&self.name, opts.sampling.samples, opts.sampling.tol, opts.seed, results))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label(0))
    }
}

impl FromStr for Quantity {
    type Err = QuantityError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quantity::parse(s, 0)
    }
}

const S2_CHECKS: &[&str] = &[
    "expected-values",
    "summary",
    "metric-compatibility",
    "bianchi",
    "dual-torsion-bianchi",
    "d-delta",
    "dirac-square",
    "dual-torsion-two-route",
    "cotetrad-wave",
    "tetrad-identity",
    "curvature-normalization",
    "ricci-contraction-slot",
];

const NUNES_CHECKS: &[&str] = &[
    "expected-values",
    "summary",
    "metric-compatibility",
    "bianchi",
    "dual-torsion-bianchi",
    "d-delta",
    "dual-torsion-two-route",
    "tetrad-identity",
    "torsion-sign",
];

fn sphere_lc_case() -> Case {
    let g = fixtures::sphere();
    let sig = g.signature();
    let t = g.chart().coord(0);
    let cot = t.cot();
    let th = |a: usize| g.theta(a);
    let scalar = |e: Expr| Multivector::scalar(sig, e);
    Case::new("s2-levi-civita", Connection::levi_civita(&g), S2_CHECKS)
        .expect(Quantity::Structure(1, 0, 1), scalar(cot.neg()), Origin::Reference)
        .expect(Quantity::Omega(1, 0), th(1).scale(&cot), Origin::Reference)
        .expect(Quantity::Curvature(0, 1), th(0).wedge(&th(1)), Origin::Reference)
        .expect(Quantity::StarCurvature(0, 1), scalar(Expr::one()), Origin::Reference)
        .expect(Quantity::EvansRhs(0), th(1), Origin::Reference)
        .expect(Quantity::Torsion(0), Multivector::zero(sig), Origin::Elementary)
        .expect(Quantity::Torsion(1), Multivector::zero(sig), Origin::Elementary)
        .expect(Quantity::DualTorsionD(0), Multivector::zero(sig), Origin::Elementary)
        .expect(Quantity::RicciForm(0), th(0).neg(), Origin::Derived)
        .expect(Quantity::RicciScalar, scalar(Expr::int(-2)), Origin::Derived)
}

fn sphere_nunes_case() -> Case {
    let g = fixtures::sphere();
    let sig = g.signature();
    let t = g.chart().coord(0);
    let cot = t.cot();
    let th = |a: usize| g.theta(a);
    let inv_sin2 = Expr::one().div(&t.sin().powi(2));
    Case::new("s2-nunes", fixtures::nunes(&g), NUNES_CHECKS)
        .expect(Quantity::Curvature(0, 1), Multivector::zero(sig), Origin::Reference)
        .expect(Quantity::Curvature(1, 0), Multivector::zero(sig), Origin::Reference)
        .expect(Quantity::Torsion(0), Multivector::zero(sig), Origin::Derived)
        .expect(Quantity::Torsion(1), th(0).wedge(&th(1)).scale(&cot), Origin::Derived)
        .expect(Quantity::TorsionComponent(1, 1, 0), Multivector::scalar(sig, cot.neg()), Origin::Derived)
        .expect(Quantity::DualTorsionD(1), th(0).scale(&inv_sin2).neg(), Origin::Derived)
        .expect(Quantity::EvansRhs(1), Multivector::zero(sig), Origin::Derived)
}

fn polar_case() -> Case {
    let g = fixtures::polar_plane();
    let sig = g.signature();
    let r = g.chart().coord(0);
    Case::new(
        "polar-plane",
        Connection::levi_civita(&g),
        &["expected-values", "summary", "bianchi", "d-delta", "dirac-square", "cotetrad-wave", "tetrad-identity"],
    )
    .expect(Quantity::Structure(1, 0, 1), Multivector::scalar(sig, Expr::one().div(&r).neg()), Origin::Derived)
    .expect(Quantity::Curvature(0, 1), Multivector::zero(sig), Origin::Elementary)
}

fn maxwell_cases() -> Vec<Case> {
    let g = fixtures::minkowski_with(Params::new().with("k", 0.7));
    let fields = maxwell::flat_fixtures(&g).expect("flat fixtures solve Maxwell's equations");
    let mut flat = Case::new(
        "minkowski",
        Connection::levi_civita(&g),
        &["maxwell-lorentzian", "cotetrad-wave", "bianchi", "d-delta"],
    );
    flat.maxwell = fields.clone();
    let mut rc = Case::new(
        "minkowski-torsion",
        fixtures::torsion_connection(&g),
        &["maxwell-lorentzian", "maxwell-rc", "metric-compatibility", "bianchi", "d-delta"],
    );
    rc.maxwell = fields;
    vec![flat, rc]
}

/// A built-in scenario by name.
pub fn builtin(name: &str) -> Result<Scenario, ScenarioError> {
    let cases = match name {
        "s2-levi-civita" => vec![sphere_lc_case()],
        "s2-nunes" => vec![sphere_nunes_case()],
        "polar-plane" => vec![polar_case()],
        "contorsion-3d" => vec![Case::new(
            "contorsion-3d",
            fixtures::random_contorsion_3d(1),
            &[
                "summary",
                "metric-compatibility",
                "bianchi",
                "dual-torsion-bianchi",
                "d-delta",
                "dual-torsion-two-route",
                "tetrad-identity",
            ],
        )],
        "maxwell-flat" => maxwell_cases(),
        "evans" => {
            let lc = fixtures::sphere();
            let checks = &["evans-equation", "dual-torsion-two-route"];
            vec![
                Case::new("s2-levi-civita", Connection::levi_civita(&lc), checks),
                Case::new("s2-nunes", fixtures::nunes(&lc), checks),
                Case::new("polar-plane", Connection::levi_civita(&fixtures::polar_plane()), checks),
            ]
        }
        other => return Err(ScenarioError::UnknownScenario(other.to_string())),
    };
    Ok(Scenario { name: name.to_string(), cases })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn quantity_labels_round_trip() {
        for text in ["c[2,1,2]", "omega[2,1]", "torsion[2]", "T[2,2,1]", "star-curvature[1,2]", "ricci-scalar"] {
            let q = Quantity::parse(text, 1).unwrap();
            assert_eq!(q.label(1), text);
        }
        assert!(Quantity::parse("omega[0,1]", 1).is_err());
        assert!(Quantity::parse("omega[1]", 1).is_err());
        assert!(Quantity::parse("lambda", 0).is_err());
    }

    #[test]
    fn unknown_names_rejected() {
        assert_eq!(builtin("nope").unwrap_err(), ScenarioError::UnknownScenario("nope".into()));
        let opts = RunOptions { only: Some(vec!["bogus".into()]), ..RunOptions::default() };
        assert_eq!(
            builtin("polar-plane").unwrap().run(&opts).unwrap_err(),
            ScenarioError::UnknownCheck("bogus".into())
        );
    }

    #[test]
    fn sphere_run_passes_and_notes_conventions() {
        let rep = builtin("s2-levi-civita").unwrap().run(&RunOptions::default()).unwrap();
        assert!(!rep.failed(), "{}", rep.to_text());
        let slot = rep.find("s2-levi-civita", "ricci-contraction-slot").unwrap();
        assert_eq!(slot.status, Status::DiscrepancyNoted);
        let norm = rep.find("s2-levi-civita", "curvature-normalization").unwrap();
        assert_eq!(norm.status, Status::DiscrepancyNoted);
        let text = rep.to_text();
        assert!(text.contains("omega[2,1] = cot(t)·θ2"), "{text}");
    }

    #[test]
    fn reports_are_byte_stable() {
        let opts = RunOptions { seed: 5, ..RunOptions::default() };
        let a = builtin("polar-plane").unwrap().run(&opts).unwrap().to_json();
        let b = builtin("polar-plane").unwrap().run(&opts).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn every_builtin_behaves() {
        for name in BUILTINS {
            let rep = builtin(name).unwrap().run(&RunOptions::default()).unwrap();
            let failing: Vec<_> = rep.checks.iter().filter(|c| c.status == Status::Fail).collect();
            if *name == "evans" {
                let names: Vec<_> = failing.iter().map(|c| (c.case.as_str(), c.name.as_str())).collect();
                assert_eq!(names, [("s2-levi-civita", "evans-equation"), ("s2-nunes", "evans-equation")]);
            } else {
                assert!(failing.is_empty(), "{name}: {}", rep.to_text());
            }
        }
    }
}
