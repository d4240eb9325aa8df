//! Model files: a JSON schema with expression literals, validated into [`Model`].
//!
//! ```json
//! {
//!   "name": "flat",
//!   "coordinates": ["x1", "x2", "y1", "y2"],
//!   "foliation": { "base": ["x1", "x2"], "fiber": ["y1", "y2"] },
//!   "connection": { "x1": { "y1": "x2" }, "x2": { "y1": "x1" } },
//!   "sigma": { "x1 x2": "1" },
//!   "p": { "y1 y2": "1" },
//!   "action": [[{ "i": "y1", "j": "y2", "weight": 1 }]],
//!   "mu": [{ "y1": "y1", "y2": "y2" }],
//!   "mode": "hamiltonian",
//!   "j": ["1/2*y1^2 + 1/2*y2^2"],
//!   "leaf": ["y1", "y2"],
//!   "boxes": { "default": { "min": ["-1/2", "-1/2", "-1/2", "-1/2"], "max": ["1/2", "1/2", "1/2", "1/2"] } },
//!   "seed": 7
//! }
//! ```
//!
//! Tensor entries are keyed by space-separated coordinate names; a key out of canonical order
//! picks up the sign of the permutation. `connection` gives the vertical components of the
//! lifts `h_x = ∂x + Σ Γ ∂y`; it defaults to the flat connection. Either `pi` or the triple
//! `sigma`, `p` (with `connection`) describes the structure; when both are present `pi` must be
//! the tensor the data assemble to. `action` lists circles, each a list
//! of rotation planes; more than one circle is a torus.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use poisson_avg::algebra::{format_rational, parse_rational, Limits};
use poisson_avg::coupling::{data_to_poisson, Connection};
use poisson_avg::tensor::alt::sort_with_sign;
use poisson_avg::{
    Action, CircleAction, Foliation, Form, GeometricData, Mode, Model, Multivector, Plane, RationalFn, SampleBox,
    TorusAction,
};

/// Components keyed by coordinate names.
pub type TensorSpec = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoliationSpec {
    pub base: Vec<String>,
    pub fiber: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneSpec {
    pub i: String,
    pub j: String,
    #[serde(default = "one")]
    pub weight: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub min: Vec<String>,
    pub max: Vec<String>,
}

fn compatible() -> String {
    Mode::Compatible.name().to_string()
}

/// The file format, before validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub name: String,
    pub coordinates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub foliation: Option<FoliationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<BTreeMap<String, TensorSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<TensorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<TensorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<TensorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Vec<PlaneSpec>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mu: Vec<TensorSpec>,
    #[serde(default = "compatible")]
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub leaf: Vec<String>,
    #[serde(default)]
    pub boxes: BTreeMap<String, BoxSpec>,
    #[serde(default)]
    pub seed: u64,
}

/// One problem found while reading a model file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    /// `line:column` for syntax errors, a field path otherwise.
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// All diagnostics for one file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecError {
    pub origin: String,
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, d) in self.diagnostics.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{}:{d}", self.origin)?;
        }
        Ok(())
    }
}

impl std::error::Error for SpecError {}

struct Validator<'a> {
    coords: &'a [String],
    diags: Vec<Diagnostic>,
}

impl Validator<'_> {
    fn error(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.diags.push(Diagnostic { location: location.into(), message: message.into() });
    }

    fn index(&mut self, field: &str, name: &str) -> Option<usize> {
        let i = self.coords.iter().position(|c| c == name);
        if i.is_none() {
            self.error(field, format!("unknown coordinate '{name}'"));
        }
        i
    }

    fn expr(&mut self, field: &str, s: &str) -> Option<RationalFn> {
        match RationalFn::parse(s, self.coords) {
            Ok(f) => {
                let limits = Limits::default();
                match limits.check_poly(f.numerator()).and_then(|_| limits.check_poly(&f.denominator())) {
                    Ok(()) => Some(f),
                    Err(e) => {
                        self.error(field, e.to_string());
                        None
                    }
                }
            }
            Err(e) => {
                self.error(field, format!("in '{s}' at {e}"));
                None
            }
        }
    }

    fn entries(&mut self, field: &str, t: &TensorSpec, degree: usize) -> Vec<(Vec<usize>, RationalFn)> {
        let mut out = Vec::new();
        for (key, value) in t {
            let loc = format!("{field}.{key}");
            let names: Vec<&str> = key.split_whitespace().collect();
            if names.len() != degree {
                self.error(&loc, format!("entry has {} indices, expected {degree}", names.len()));
                continue;
            }
            let idx: Option<Vec<usize>> = names.iter().map(|n| self.index(&loc, n)).collect();
            let Some(idx) = idx else { continue };
            if sort_with_sign(&idx).is_none() {
                self.error(&loc, "repeated coordinate");
                continue;
            }
            if let Some(f) = self.expr(&loc, value) {
                out.push((idx, f));
            }
        }
        out
    }

    fn form(&mut self, field: &str, t: &TensorSpec, degree: usize) -> Option<Form> {
        let n = self.diags.len();
        let e = self.entries(field, t, degree);
        if self.diags.len() != n {
            return None;
        }
        Form::from_terms(self.coords.len(), degree, e).map_err(|err| self.error(field, err.to_string())).ok()
    }

    fn bivector(&mut self, field: &str, t: &TensorSpec) -> Option<Multivector> {
        let n = self.diags.len();
        let e = self.entries(field, t, 2);
        if self.diags.len() != n {
            return None;
        }
        Multivector::from_terms(self.coords.len(), 2, e).map_err(|err| self.error(field, err.to_string())).ok()
    }

    fn rationals(&mut self, field: &str, v: &[String]) -> Option<Vec<poisson_avg::Rational>> {
        if v.len() != self.coords.len() {
            self.error(field, format!("{} values for {} coordinates", v.len(), self.coords.len()));
            return None;
        }
        let mut out = Vec::new();
        for (k, s) in v.iter().enumerate() {
            match parse_rational(s) {
                Some(r) => out.push(r),
                None => {
                    self.error(format!("{field}[{k}]"), format!("'{s}' is not a rational \"p/q\""));
                    return None;
                }
            }
        }
        Some(out)
    }
}

fn check_coordinates(coords: &[String], diags: &mut Vec<Diagnostic>) {
    if let Err(e) = Limits::default().check_vars(coords.len()) {
        diags.push(Diagnostic { location: "coordinates".into(), message: e.to_string() });
    }
    if coords.is_empty() {
        diags.push(Diagnostic { location: "coordinates".into(), message: "no coordinates".into() });
    }
    for (k, c) in coords.iter().enumerate() {
        let valid = c.chars().next().is_some_and(|h| h.is_alphabetic() || h == '_')
            && c.chars().all(|ch| ch.is_alphanumeric() || ch == '_');
        if !valid {
            diags.push(Diagnostic { location: format!("coordinates[{k}]"), message: format!("'{c}' is not a name") });
        }
        if coords[..k].contains(c) {
            diags.push(Diagnostic { location: format!("coordinates[{k}]"), message: format!("'{c}' repeats") });
        }
    }
}

impl ModelSpec {
    /// Validates every field, collecting all diagnostics.
    pub fn to_model(&self) -> Result<Model, Vec<Diagnostic>> {
        let mut pre = Vec::new();
        check_coordinates(&self.coordinates, &mut pre);
        if !pre.is_empty() {
            return Err(pre);
        }
        let n = self.coordinates.len();
        let mut v = Validator { coords: &self.coordinates, diags: Vec::new() };

        let foliation = self.foliation.as_ref().and_then(|f| {
            let base: Option<Vec<usize>> = f.base.iter().map(|c| v.index("foliation.base", c)).collect();
            let fiber: Option<Vec<usize>> = f.fiber.iter().map(|c| v.index("foliation.fiber", c)).collect();
            let (base, fiber) = (base?, fiber?);
            match Foliation::new(n, base, fiber) {
                Ok(fol) => Some(fol),
                Err(e) => {
                    v.error("foliation", e.to_string());
                    None
                }
            }
        });

        let has_data = self.sigma.is_some() || self.p.is_some() || self.connection.is_some();
        let mut data = None;
        if has_data {
            match (&foliation, &self.sigma, &self.p) {
                (Some(fol), Some(sigma), Some(p)) => {
                    let conn = self.connection(&mut v, fol);
                    let sigma = v.form("sigma", sigma, 2);
                    let p = v.bivector("p", p);
                    if let (Some(conn), Some(sigma), Some(p)) = (conn, sigma, p) {
                        match GeometricData::new(conn, sigma, p) {
                            Ok(gd) => data = Some(gd),
                            Err(e) => v.error("sigma", e.to_string()),
                        }
                    }
                }
                _ => v.error("sigma", "geometric data need foliation, sigma and p"),
            }
        }
        let pi = self.pi.as_ref().and_then(|t| v.bivector("pi", t));
        if let (Some(gd), Some(pi)) = (&data, &pi) {
            // both given: pi must be the tensor the data assemble to
            match gd.clone().verified().and_then(|gd| data_to_poisson(&gd)) {
                Ok(c) if &c.pi() == pi => {}
                Ok(_) => v.error("pi", "differs from the tensor assembled from sigma, p and connection"),
                Err(e) => v.error("pi", format!("cannot assemble from the geometric data: {e}")),
            }
        }

        let action = self.action.as_ref().and_then(|circles| self.action(&mut v, circles));
        let rank = action.as_ref().map_or(0, |a: &Action| a.rank());
        let mu: Vec<Form> =
            self.mu.iter().enumerate().filter_map(|(k, t)| v.form(&format!("mu[{k}]"), t, 1)).collect();
        if !self.mu.is_empty() && self.mu.len() != rank {
            v.error("mu", format!("{} forms for {rank} generators", self.mu.len()));
        }
        let mode = Mode::from_name(&self.mode).unwrap_or_else(|| {
            v.error("mode", format!("'{}' is not compatible, locally-hamiltonian or hamiltonian", self.mode));
            Mode::Compatible
        });
        let j = self.j.as_ref().map(|js| {
            if js.len() != rank {
                v.error("j", format!("{} functions for {rank} generators", js.len()));
            }
            js.iter().enumerate().filter_map(|(k, s)| v.expr(&format!("j[{k}]"), s)).collect::<Vec<_>>()
        });
        let leaf: Vec<usize> = self.leaf.iter().filter_map(|c| v.index("leaf", c)).collect();
        let mut boxes = BTreeMap::new();
        for (name, b) in &self.boxes {
            let lo = v.rationals(&format!("boxes.{name}.min"), &b.min);
            let hi = v.rationals(&format!("boxes.{name}.max"), &b.max);
            if let (Some(lo), Some(hi)) = (lo, hi) {
                match SampleBox::new(lo, hi) {
                    Ok(bx) => {
                        boxes.insert(name.clone(), bx);
                    }
                    Err(e) => v.error(format!("boxes.{name}"), e.to_string()),
                }
            }
        }
        if !v.diags.is_empty() {
            return Err(v.diags);
        }
        Ok(Model {
            name: self.name.clone(),
            coords: self.coordinates.clone(),
            foliation,
            data,
            pi,
            action,
            mu,
            mode,
            j,
            leaf,
            boxes,
            seed: self.seed,
        })
    }

    fn connection(&self, v: &mut Validator, fol: &Foliation) -> Option<Connection> {
        let n = fol.dim();
        let mut gamma = vec![vec![RationalFn::zero(n); fol.fiber().len()]; fol.base().len()];
        let before = v.diags.len();
        for (x, comps) in self.connection.iter().flatten() {
            let loc = format!("connection.{x}");
            let Some(xi) = v.index(&loc, x) else { continue };
            let Some(bi) = fol.base().iter().position(|&b| b == xi) else {
                v.error(&loc, format!("'{x}' is not a base coordinate"));
                continue;
            };
            for (y, s) in comps {
                let loc = format!("{loc}.{y}");
                let Some(yi) = v.index(&loc, y) else { continue };
                let Some(fi) = fol.fiber().iter().position(|&f| f == yi) else {
                    v.error(&loc, format!("'{y}' is not a fiber coordinate"));
                    continue;
                };
                if let Some(f) = v.expr(&loc, s) {
                    gamma[bi][fi] = f;
                }
            }
        }
        if v.diags.len() != before {
            return None;
        }
        match Connection::new(fol.clone(), gamma) {
            Ok(c) => Some(c),
            Err(e) => {
                v.error("connection", e.to_string());
                None
            }
        }
    }

    fn action(&self, v: &mut Validator, circles: &[Vec<PlaneSpec>]) -> Option<Action> {
        let n = self.coordinates.len();
        let mut built = Vec::new();
        for (k, planes) in circles.iter().enumerate() {
            let loc = format!("action[{k}]");
            let ps: Option<Vec<Plane>> = planes
                .iter()
                .map(|p| Some(Plane { i: v.index(&loc, &p.i)?, j: v.index(&loc, &p.j)?, weight: p.weight }))
                .collect();
            match CircleAction::new(n, ps?) {
                Ok(c) => built.push(c),
                Err(e) => v.error(&loc, e.to_string()),
            }
        }
        match built.len() {
            0 => {
                v.error("action", "no circles");
                None
            }
            1 => built.pop().map(Action::Circle),
            _ => match TorusAction::new(built) {
                Ok(t) => Some(Action::Torus(t)),
                Err(e) => {
                    v.error("action", e.to_string());
                    None
                }
            },
        }
    }

    /// Canonical spec of a model: canonical expressions and index order, zero entries dropped.
    pub fn from_model(m: &Model) -> ModelSpec {
        let names = &m.coords;
        let key = |idx: &[usize]| idx.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(" ");
        let tensor = |entries: Vec<(Vec<usize>, RationalFn)>| -> TensorSpec {
            entries.into_iter().map(|(k, c)| (key(&k), c.display_with(names))).collect()
        };
        let form = |w: &Form| tensor(w.components().map(|(k, c)| (k.clone(), c.clone())).collect());
        let biv = |w: &Multivector| tensor(w.components().map(|(k, c)| (k.clone(), c.clone())).collect());
        let connection = m.data.as_ref().and_then(|gd| {
            let fol = gd.conn.foliation();
            let mut out = BTreeMap::new();
            for (bi, row) in gd.conn.gamma().iter().enumerate() {
                let comps: TensorSpec = row
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(fi, c)| (names[fol.fiber()[fi]].clone(), c.display_with(names)))
                    .collect();
                if !comps.is_empty() {
                    out.insert(names[fol.base()[bi]].clone(), comps);
                }
            }
            (!out.is_empty()).then_some(out)
        });
        let action = m.action.as_ref().map(|a| {
            a.circles()
                .iter()
                .map(|c| {
                    c.planes()
                        .iter()
                        .map(|p| PlaneSpec { i: names[p.i].clone(), j: names[p.j].clone(), weight: p.weight })
                        .collect()
                })
                .collect()
        });
        ModelSpec {
            name: m.name.clone(),
            coordinates: names.clone(),
            foliation: m.foliation.as_ref().map(|f| FoliationSpec {
                base: f.base().iter().map(|&i| names[i].clone()).collect(),
                fiber: f.fiber().iter().map(|&i| names[i].clone()).collect(),
            }),
            connection,
            sigma: m.data.as_ref().map(|gd| form(&gd.sigma)),
            p: m.data.as_ref().map(|gd| biv(&gd.p)),
            pi: m.pi.as_ref().map(biv),
            action,
            mu: m.mu.iter().map(form).collect(),
            mode: m.mode.name().to_string(),
            j: m.j.as_ref().map(|js| js.iter().map(|f| f.display_with(names)).collect()),
            leaf: m.leaf.iter().map(|&i| names[i].clone()).collect(),
            boxes: m
                .boxes
                .iter()
                .map(|(k, b)| {
                    let fmt = |v: &[poisson_avg::Rational]| v.iter().map(format_rational).collect();
                    (k.clone(), BoxSpec { min: fmt(b.lo()), max: fmt(b.hi()) })
                })
                .collect(),
            seed: m.seed,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("specs serialize");
        s.push('\n');
        s
    }
}

/// Parses and validates model text.
pub fn parse_spec_str(text: &str, origin: &str) -> Result<Model, SpecError> {
    let spec: ModelSpec = serde_json::from_str(text).map_err(|e| SpecError {
        origin: origin.to_string(),
        diagnostics: vec![Diagnostic { location: format!("{}:{}", e.line(), e.column()), message: e.to_string() }],
    })?;
    spec.to_model().map_err(|diagnostics| SpecError { origin: origin.to_string(), diagnostics })
}

/// Reads and validates a model file.
pub fn parse_spec(path: &Path) -> Result<Model, SpecError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| SpecError {
        origin: origin.clone(),
        diagnostics: vec![Diagnostic { location: "file".into(), message: e.to_string() }],
    })?;
    parse_spec_str(&text, &origin)
}

/// Canonical text of a model.
pub fn canonical_json(m: &Model) -> String {
    ModelSpec::from_model(m).to_json()
}
