//! JSON scenario files (`cartan-spec/1`) and their translation into core types.

use std::collections::BTreeMap;
use std::sync::Arc;

use cartan_core::connection::{Coeffs3, Connection};
use cartan_core::manifold::{Chart, Geometry};
use cartan_core::multivector::{Multivector, Signature};
use cartan_core::report::Origin;
use cartan_core::scenarios::{Case, MaxwellField, Quantity, Scenario, CHECK_NAMES};
use cartan_core::symexpr::{parse_expr, Domain, Expr, Params, Sampling, Symbols};
use serde::Deserialize;
use thiserror::Error;

pub const SPEC_SCHEMA: &str = "cartan-spec/1";

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> SpecError {
    SpecError::Invalid { path: path.into(), message: message.into() }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub schema: String,
    pub name: String,
    pub signature: [usize; 2],
    pub coordinates: Vec<String>,
    pub domain: Vec<[f64; 2]>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default = "one")]
    pub frame_base: usize,
    #[serde(default)]
    pub orientation: Orientation,
    pub cotetrad: Vec<Vec<String>>,
    pub cases: Vec<CaseSpec>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Default, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Positive,
    Negative,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub label: String,
    #[serde(default)]
    pub connection: ConnectionSpec,
    pub checks: Vec<String>,
    #[serde(default)]
    pub expect: Vec<ExpectSpec>,
    #[serde(default)]
    pub maxwell: Vec<MaxwellSpec>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConnectionSpec {
    #[default]
    LeviCivita,
    /// `L^a_{cb}` with `ω^a_b = L^a_{cb} θ^c`; index `[a, c, b]`
    Coefficients { components: Vec<Component> },
    /// `T^a_{bc}`; index `[a, b, c]`, the `[a, c, b]` entry is implied
    Torsion { components: Vec<Component> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub index: [usize; 3],
    pub value: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectSpec {
    pub quantity: String,
    pub value: BTreeMap<String, String>,
    pub origin: OriginSpec,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OriginSpec {
    Reference,
    Derived,
    Elementary,
}

impl From<OriginSpec> for Origin {
    fn from(o: OriginSpec) -> Origin {
        match o {
            OriginSpec::Reference => Origin::Reference,
            OriginSpec::Derived => Origin::Derived,
            OriginSpec::Elementary => Origin::Elementary,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaxwellSpec {
    pub label: String,
    #[serde(rename = "F")]
    pub f: BTreeMap<String, String>,
    #[serde(rename = "J", default)]
    pub j: BTreeMap<String, String>,
}

/// Parses and validates a spec, producing a runnable scenario. Nothing is
/// computed beyond what validation needs (the cotetrad determinant and the
/// Maxwell fixture residuals).
pub fn load(text: &str, sampling: Sampling) -> Result<Scenario, SpecError> {
    let spec: SpecFile = serde_json::from_str(text)?;
    spec.build(sampling)
}

impl SpecFile {
    pub fn build(&self, sampling: Sampling) -> Result<Scenario, SpecError> {
        if self.schema != SPEC_SCHEMA {
            return Err(invalid("schema", format!("expected \"{SPEC_SCHEMA}\", found \"{}\"", self.schema)));
        }
        if self.name.trim().is_empty() {
            return Err(invalid("name", "must be non-empty"));
        }
        let sig =
            Signature::new(self.signature[0], self.signature[1]).map_err(|e| invalid("signature", e.to_string()))?;
        let n = sig.n();
        if self.coordinates.len() != n {
            return Err(invalid("coordinates", format!("{} names for dimension {n}", self.coordinates.len())));
        }
        if self.domain.len() != n {
            return Err(invalid("domain", format!("{} intervals for dimension {n}", self.domain.len())));
        }
        for (k, name) in self.coordinates.iter().enumerate() {
            if !is_identifier(name) {
                return Err(invalid(format!("coordinates[{k}]"), format!("`{name}` is not an identifier")));
            }
        }
        for (k, [lo, hi]) in self.domain.iter().enumerate() {
            if lo >= hi {
                return Err(invalid(format!("domain[{k}]"), format!("empty interval [{lo}, {hi}]")));
            }
        }
        let mut params = Params::new();
        for (name, &v) in &self.params {
            if !is_identifier(name) || self.coordinates.contains(name) || name == "pi" {
                return Err(invalid(
                    format!("params.{name}"),
                    "must be an identifier distinct from the coordinates and `pi`",
                ));
            }
            if !v.is_finite() {
                return Err(invalid(format!("params.{name}"), "must be finite"));
            }
            params = params.with(name, v);
        }
        let domain = Domain::new(self.domain.iter().map(|&[lo, hi]| (lo, hi)).collect())
            .map_err(|e| invalid("domain", e.to_string()))?;
        let mut chart = Chart::new(&self.coordinates, domain)
            .map_err(|e| invalid("coordinates", e.to_string()))?
            .with_params(params)
            .with_frame_base(self.frame_base);
        if let Orientation::Negative = self.orientation {
            chart = chart.negative();
        }
        let syms = Symbols::new(&self.coordinates).with_params(&self.params.keys().collect::<Vec<_>>());

        if self.cotetrad.len() != n || self.cotetrad.iter().any(|r| r.len() != n) {
            return Err(invalid("cotetrad", format!("must be {n}×{n}")));
        }
        let mut q = Vec::with_capacity(n);
        for (a, row) in self.cotetrad.iter().enumerate() {
            let mut out = Vec::with_capacity(n);
            for (m, text) in row.iter().enumerate() {
                out.push(expr(text, &syms, format!("cotetrad[{a}][{m}]"))?);
            }
            q.push(out);
        }
        let g = Geometry::build_with(chart, sig, q, sampling).map_err(|e| invalid("cotetrad", e.to_string()))?;

        if self.cases.is_empty() {
            return Err(invalid("cases", "at least one case is required"));
        }
        let mut cases = Vec::new();
        for (i, c) in self.cases.iter().enumerate() {
            if self.cases[..i].iter().any(|d| d.label == c.label) {
                return Err(invalid(format!("cases[{i}].label"), format!("duplicate label `{}`", c.label)));
            }
            cases.push(self.case(&g, &syms, c, &format!("cases[{i}]"))?);
        }
        Ok(Scenario { name: self.name.clone(), cases })
    }

    fn index(&self, raw: usize, n: usize, path: &str) -> Result<usize, SpecError> {
        raw.checked_sub(self.frame_base).filter(|&i| i < n).ok_or_else(|| {
            invalid(path, format!("frame index {raw} outside {}..{}", self.frame_base, self.frame_base + n))
        })
    }

    fn case(&self, g: &Arc<Geometry>, syms: &Symbols, c: &CaseSpec, path: &str) -> Result<Case, SpecError> {
        let n = g.n();
        if c.label.trim().is_empty() {
            return Err(invalid(format!("{path}.label"), "must be non-empty"));
        }
        for (k, name) in c.checks.iter().enumerate() {
            if !CHECK_NAMES.contains(&name.as_str()) {
                return Err(invalid(format!("{path}.checks[{k}]"), format!("unknown check `{name}`")));
            }
        }
        let conn = match &c.connection {
            ConnectionSpec::LeviCivita => Connection::levi_civita(g),
            ConnectionSpec::Coefficients { components } => {
                let l = self.coeffs(components, n, syms, &format!("{path}.connection"), false)?;
                Connection::from_coefficients(g, l).map_err(|e| invalid(format!("{path}.connection"), e.to_string()))?
            }
            ConnectionSpec::Torsion { components } => {
                let t = self.coeffs(components, n, syms, &format!("{path}.connection"), true)?;
                Connection::from_contorsion(g, &t).map_err(|e| invalid(format!("{path}.connection"), e.to_string()))?.0
            }
        };
        let checks: Vec<&str> = c.checks.iter().map(String::as_str).collect();
        let mut case = Case::new(&c.label, conn, &checks);
        for (k, e) in c.expect.iter().enumerate() {
            let p = format!("{path}.expect[{k}]");
            let quantity =
                Quantity::parse(&e.quantity, self.frame_base).ok().filter(|q| q.in_range(n)).ok_or_else(|| {
                    invalid(format!("{p}.quantity"), format!("unknown or out-of-range quantity `{}`", e.quantity))
                })?;
            let value = self.multivector(g, syms, &e.value, &format!("{p}.value"))?;
            case = case.expect(quantity, value, e.origin.into());
        }
        for (k, m) in c.maxwell.iter().enumerate() {
            let p = format!("{path}.maxwell[{k}]");
            let f = self.multivector(g, syms, &m.f, &format!("{p}.F"))?;
            let j = self.multivector(g, syms, &m.j, &format!("{p}.J"))?;
            let field = MaxwellField::validated(g, &m.label, f, j).map_err(|e| invalid(&p, e.to_string()))?;
            case.maxwell.push(field);
        }
        Ok(case)
    }

    fn coeffs(
        &self,
        comps: &[Component],
        n: usize,
        syms: &Symbols,
        path: &str,
        antisym: bool,
    ) -> Result<Coeffs3, SpecError> {
        let mut out = vec![vec![vec![Expr::zero(); n]; n]; n];
        let mut seen = vec![vec![vec![false; n]; n]; n];
        for (k, comp) in comps.iter().enumerate() {
            let p = format!("{path}.components[{k}]");
            let [a, b, c] = [0, 1, 2].map(|i| self.index(comp.index[i], n, &format!("{p}.index")));
            let (a, b, c) = (a?, b?, c?);
            let v = expr(&comp.value, syms, format!("{p}.value"))?;
            if seen[a][b][c] {
                return Err(invalid(p, "component given twice"));
            }
            if antisym {
                if b == c {
                    return Err(invalid(p, "torsion is antisymmetric in its lower indices"));
                }
                if seen[a][c][b] {
                    return Err(invalid(p, "antisymmetric partner already given"));
                }
                out[a][c][b] = v.neg();
                seen[a][c][b] = true;
            }
            out[a][b][c] = v;
            seen[a][b][c] = true;
        }
        Ok(out)
    }

    /// Keys are comma-separated frame indices (`""` for the scalar part).
    fn multivector(
        &self,
        g: &Geometry,
        syms: &Symbols,
        map: &BTreeMap<String, String>,
        path: &str,
    ) -> Result<Multivector, SpecError> {
        let n = g.n();
        let mut terms = Vec::new();
        for (key, text) in map {
            let p = format!("{path}[\"{key}\"]");
            let mut ix = Vec::new();
            for part in key.split(',').filter(|s| !s.trim().is_empty()) {
                let raw: usize = part.trim().parse().map_err(|_| invalid(&p, format!("`{part}` is not an index")))?;
                ix.push(self.index(raw, n, &p)?);
            }
            let mut sign = 1i64;
            for i in 0..ix.len() {
                for j in i + 1..ix.len() {
                    if ix[i] == ix[j] {
                        return Err(invalid(&p, "repeated index"));
                    }
                    if ix[i] > ix[j] {
                        sign = -sign;
                    }
                }
            }
            let mask = ix.iter().fold(0u32, |m, &i| m | (1 << i));
            if terms.iter().any(|&(m, _)| m == mask) {
                return Err(invalid(&p, "blade given twice"));
            }
            terms.push((mask, expr(text, syms, p)?.scale(sign.into())));
        }
        Ok(Multivector::from_terms(g.signature(), terms))
    }
}

fn expr(text: &str, syms: &Symbols, path: String) -> Result<Expr, SpecError> {
    parse_expr(text, syms).map_err(|e| {
        let caret = format!("{}^", " ".repeat(e.position));
        invalid(path, format!("{} at position {}\n    {text}\n    {caret}", e.message, e.position))
    })
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}
