//! Reports produced by scenario runs and CLI commands, as JSON or text.
//!
//! The JSON form always has the top-level keys `scenario`, `ring`,
//! `verdicts`, `criteria`, `ideals` and `timings`. Everything except
//! `timings` is deterministic for a given input.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::closure::ClosureVerdict;
use crate::ideals::QuotientRing;
use crate::scenario::{Flag, Value};
use crate::star_core::{BracketSummary, ChainReport, CriteriaReport};

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: ScenarioSection,
    pub ring: RingSection,
    pub verdicts: BTreeMap<String, Value>,
    pub criteria: Option<CriteriaSection>,
    pub ideals: BTreeMap<String, Vec<String>>,
    pub timings: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScenarioSection {
    pub name: String,
    pub notes: Vec<String>,
    pub tau_provenance: Option<String>,
    pub flags: Vec<Flag>,
    pub warnings: Vec<String>,
    pub checks: Vec<CheckOutcome>,
    pub closure: BTreeMap<String, ClosureVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub key: String,
    pub line: usize,
    pub text: String,
    pub expected: Value,
    pub actual: Value,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RingSection {
    pub characteristic: u32,
    pub variables: Vec<String>,
    pub relations: Vec<String>,
}

impl RingSection {
    pub fn of(ring: &QuotientRing) -> Self {
        RingSection {
            characteristic: ring.characteristic().get(),
            variables: ring.poly_ring().names().to_vec(),
            relations: ring.relations().iter().map(|f| f.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriteriaSection {
    pub j: Vec<String>,
    pub u: Vec<String>,
    pub tau: Vec<String>,
    pub u_verdicts: Vec<ClosureVerdict>,
    pub report: CriteriaReport,
    pub j_colon_i: Vec<String>,
    pub bracket: BracketSummary,
    pub reduction_number_one: Option<bool>,
    pub tau_lower_bound: Option<Vec<bool>>,
    pub chain: BTreeMap<String, ChainReport>,
    pub scaling: Vec<ScalingSummary>,
    pub scaling_threshold: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalingSummary {
    pub e: u32,
    pub q: u64,
    pub special_a: Vec<bool>,
    pub special_b: Vec<bool>,
    pub criteria: CriteriaReport,
    pub bracket: BracketSummary,
}

impl Report {
    pub fn new(name: impl Into<String>, ring: &QuotientRing) -> Self {
        Report {
            scenario: ScenarioSection {
                name: name.into(),
                ..Default::default()
            },
            ring: RingSection::of(ring),
            verdicts: BTreeMap::new(),
            criteria: None,
            ideals: BTreeMap::new(),
            timings: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.scenario.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// JSON with the `timings` subtree emptied, for byte comparisons.
    pub fn to_json_without_timings(&self) -> String {
        let mut r = self.clone();
        r.timings.clear();
        r.to_json()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let r = &self.ring;
        let _ = write!(
            s,
            "scenario: {}\nring: F({})[{}]",
            self.scenario.name,
            r.characteristic,
            r.variables.join(",")
        );
        if !r.relations.is_empty() {
            let _ = write!(s, " / ({})", r.relations.join(", "));
        }
        s.push('\n');
        for n in &self.scenario.notes {
            let _ = writeln!(s, "note: {n}");
        }
        if let Some(t) = &self.scenario.tau_provenance {
            let _ = writeln!(s, "test ideal: {t}");
        }
        for f in &self.scenario.flags {
            let _ = writeln!(
                s,
                "flag: {}",
                serde_json::to_value(f)
                    .expect("flag")
                    .as_str()
                    .unwrap_or("")
            );
        }
        if !self.ideals.is_empty() {
            s.push_str("ideals:\n");
            for (k, v) in &self.ideals {
                let _ = writeln!(s, "  {k} = ({})", v.join(", "));
            }
        }
        if let Some(c) = &self.criteria {
            render_criteria(&mut s, c);
        }
        if !self.scenario.closure.is_empty() {
            s.push_str("closure verdicts:\n");
            for (k, v) in &self.scenario.closure {
                let _ = writeln!(s, "  {k}: {:?} by {:?}", v.status, v.rule);
                for a in &v.assumptions {
                    let _ = writeln!(s, "    assuming {a}");
                }
            }
        }
        if !self.scenario.checks.is_empty() {
            s.push_str("checks:\n");
            for c in &self.scenario.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    s,
                    "  {tag}  {} (line {}): {} = {} (expected {})",
                    c.key, c.line, c.text, c.actual, c.expected
                );
                if let Some(d) = &c.detail {
                    let _ = writeln!(s, "        {d}");
                }
            }
        } else if !self.verdicts.is_empty() {
            s.push_str("results:\n");
            for (k, v) in &self.verdicts {
                let _ = writeln!(s, "  {k}: {v}");
            }
        }
        for w in &self.scenario.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

fn bools(v: &[bool]) -> String {
    Value::List(v.iter().map(|&b| Value::Bool(b)).collect()).to_string()
}

fn render_criteria(s: &mut String, c: &CriteriaSection) {
    let _ = writeln!(s, "J = ({})", c.j.join(", "));
    let _ = writeln!(s, "U = ({})", c.u.join(", "));
    let _ = writeln!(s, "tau = ({})", c.tau.join(", "));
    let _ = writeln!(s, "J:I = ({})", c.j_colon_i.join(", "));
    for (k, v) in c.u_verdicts.iter().enumerate() {
        let _ = writeln!(s, "u_{} in J^*sp: {:?} by {:?}", k + 1, v.status, v.rule);
    }
    s.push_str("criteria:\n");
    let r = &c.report;
    let _ = writeln!(s, "  a1 = {}", bools(&r.hypothesis_a1));
    let _ = writeln!(s, "  a2 = {}", bools(&r.hypothesis_a2));
    let _ = writeln!(s, "  b  = {}", bools(&r.hypothesis_b));
    let _ = writeln!(s, "  conclusion: {:?}", r.conclusion);
    for w in &r.witnesses {
        let _ = writeln!(
            s,
            "  {} fails for index {}: {} is outside",
            w.hypothesis, w.index, w.element
        );
    }
    render_bracket(s, "bracket", &c.bracket);
    if let Some(b) = c.reduction_number_one {
        let _ = writeln!(s, "I^2 = JI: {b}");
    }
    if let Some(v) = &c.tau_lower_bound {
        let _ = writeln!(s, "tau*I in each family member: {}", bools(v));
    }
    for (k, ch) in &c.chain {
        let _ = writeln!(
            s,
            "chain conditions for {k} ({}): (U) cap K in mI = {}, I = (U) + K = {}",
            ch.label, ch.intersection_in_m_i, ch.i_is_sum
        );
    }
    for row in &c.scaling {
        let _ = writeln!(
            s,
            "scaling e = {} (q = {}): special a = {}, special b = {}, conclusion {:?}",
            row.e,
            row.q,
            bools(&row.special_a),
            bools(&row.special_b),
            row.criteria.conclusion
        );
        render_bracket(s, "  bracket", &row.bracket);
    }
    if !c.scaling.is_empty() {
        match c.scaling_threshold {
            Some(e) => {
                let _ = writeln!(s, "confirmed from e = {e} on (tested values only)");
            }
            None => s.push_str("not confirmed at the largest tested e\n"),
        }
    }
}

fn render_bracket(s: &mut String, title: &str, b: &BracketSummary) {
    let _ = writeln!(s, "{title}:");
    let _ = writeln!(s, "  lower tau*I          = ({})", b.lower.join(", "));
    let _ = writeln!(s, "  formula J(J:I)       = ({})", b.formula.join(", "));
    let _ = writeln!(s, "  alt formula I(J:I)   = ({})", b.alt_formula.join(", "));
    let _ = writeln!(
        s,
        "  finite intersection  = ({})",
        b.finite_intersection.join(", ")
    );
    let _ = writeln!(
        s,
        "  at the origin: sandwich {}, upper members equal {}",
        b.sandwich_holds, b.upper_members_equal
    );
    let _ = writeln!(
        s,
        "  affine:        sandwich {}, upper members equal {}",
        b.affine_sandwich_holds, b.affine_upper_members_equal
    );
}
