//! Evaluates a parsed scenario into a [`Report`].

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use crate::closure::{
    degree_criterion, proved_independent, star_independent, star_member, starsp_member,
    ClosureConfig, ClosureVerdict, TestIdealInput,
};
use crate::error::{Error, Result};
use crate::ideals::IdealHandle;
use crate::report::{CheckOutcome, CriteriaSection, Report, ScalingSummary};
use crate::scenario::{
    BracketProperty, CheckCommand, Env, Flag, Hypothesis, Scenario, SpecialPart, Value,
};
use crate::star_core::{
    chain_conditions, check_criteria, core_bracket, frobenius_scaling, reduction_number_one,
    tau_lower_bound_members, Conclusion, CoreBracket, CriteriaReport, ScalingRow,
    StarReductionInput,
};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Largest Frobenius power tried by closure refutations.
    pub q_max: Option<u64>,
    /// Exponents for a Frobenius scaling run.
    pub scaling: Vec<u32>,
    /// Also compute the reduction number and the test-ideal lower bound.
    pub extras: bool,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub report: Report,
    /// Every closure verdict produced, keyed as in the report.
    pub closure_verdicts: Vec<(String, ClosureVerdict)>,
    pub star_input: Option<StarReductionInput>,
    pub bracket: Option<CoreBracket>,
    pub scaling_rows: Vec<ScalingRow>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn presented(a: &IdealHandle) -> Result<Vec<String>> {
    Ok(a.presentation()?.iter().map(|g| g.to_string()).collect())
}

fn bool_list(v: &[bool]) -> Value {
    Value::List(v.iter().map(|&b| Value::Bool(b)).collect())
}

fn word<T: std::fmt::Debug>(t: T) -> Value {
    Value::Word(format!("{t:?}"))
}

struct State<'a> {
    sc: &'a Scenario,
    env: Env,
    tau: Option<TestIdealInput>,
    cfg: ClosureConfig,
    star: Option<StarReductionInput>,
    criteria: Option<CriteriaReport>,
    bracket: Option<CoreBracket>,
    scaling: HashMap<u32, ScalingRow>,
    closure: Vec<(String, ClosureVerdict)>,
}

impl State<'_> {
    fn tau(&self) -> Result<&TestIdealInput> {
        self.tau
            .as_ref()
            .ok_or_else(|| Error::usage("this check needs a `tau = ...;` declaration"))
    }

    fn star(&self) -> Result<&StarReductionInput> {
        self.star
            .as_ref()
            .ok_or_else(|| Error::usage("this check needs ideal J and a test ideal"))
    }

    fn scaling_row(&mut self, e: u32) -> Result<&ScalingRow> {
        if !self.scaling.contains_key(&e) {
            let rep = frobenius_scaling(self.star()?, &[e])?;
            let row = rep.rows.into_iter().next().expect("one row");
            self.scaling.insert(e, row);
        }
        Ok(&self.scaling[&e])
    }

    fn eval_check(&mut self, key: &str, cmd: &CheckCommand) -> Result<(Value, Option<String>)> {
        let ring = self.sc.ring.clone();
        Ok(match cmd {
            CheckCommand::Member { f, ideal, local } => {
                let a = ideal.eval(&ring, &self.env)?;
                let v = if *local {
                    a.locally_contains(f)?
                } else {
                    a.contains(f)?
                };
                (Value::Bool(v), None)
            }
            CheckCommand::Subset { a, b, local } => {
                let a = a.eval(&ring, &self.env)?;
                let b = b.eval(&ring, &self.env)?;
                let w = if *local {
                    b.local_non_member_witness(&a)?
                } else {
                    b.non_member_witness(&a)?
                };
                let detail = w.as_ref().map(|g| format!("witness: {g} is outside"));
                (Value::Bool(w.is_none()), detail)
            }
            CheckCommand::Equal { a, b, local } => {
                let a = a.eval(&ring, &self.env)?;
                let b = b.eval(&ring, &self.env)?;
                let (wa, wb) = if *local {
                    (
                        b.local_non_member_witness(&a)?,
                        a.local_non_member_witness(&b)?,
                    )
                } else {
                    (b.non_member_witness(&a)?, a.non_member_witness(&b)?)
                };
                let detail = match (&wa, &wb) {
                    (Some(g), _) => Some(format!("witness: {g} lies only in the left side")),
                    (None, Some(g)) => Some(format!("witness: {g} lies only in the right side")),
                    _ => None,
                };
                (Value::Bool(wa.is_none() && wb.is_none()), detail)
            }
            CheckCommand::StarMember { f, ideal } | CheckCommand::StarspMember { f, ideal } => {
                let a = ideal.eval(&ring, &self.env)?;
                let v = if matches!(cmd, CheckCommand::StarMember { .. }) {
                    star_member(f, &a, self.tau()?, &self.cfg)?
                } else {
                    starsp_member(f, &a, self.tau()?, &self.cfg)?
                };
                let out = (word(v.status), Some(format!("rule: {:?}", v.rule)));
                self.closure.push((key.to_string(), v));
                out
            }
            CheckCommand::DegreeCriterion { f, ideal } => {
                let a = ideal.eval(&ring, &self.env)?;
                (Value::Bool(degree_criterion(f, &a)), None)
            }
            CheckCommand::Independent => {
                let gens = self.star()?.j_gens().to_vec();
                let vs = star_independent(&gens, self.tau()?, &self.cfg)?;
                let ok = proved_independent(&vs);
                for (k, v) in vs.into_iter().enumerate() {
                    self.closure.push((format!("{key}.{}", k + 1), v));
                }
                (Value::Bool(ok), None)
            }
            CheckCommand::Criteria => {
                let c = self
                    .criteria
                    .as_ref()
                    .ok_or_else(|| Error::usage("no criteria"))?;
                (word(c.conclusion), None)
            }
            CheckCommand::Hypothesis(h) => {
                let c = self
                    .criteria
                    .as_ref()
                    .ok_or_else(|| Error::usage("no criteria"))?;
                let (v, list) = match h {
                    Hypothesis::A1 => (c.a1(), c.hypothesis_a1.clone()),
                    Hypothesis::A2 => (c.a2(), c.hypothesis_a2.clone()),
                    Hypothesis::A => (c.a1() && c.a2(), Vec::new()),
                    Hypothesis::B => (c.b(), c.hypothesis_b.clone()),
                };
                let detail =
                    (!list.is_empty()).then(|| format!("per generator: {}", bool_list(&list)));
                (Value::Bool(v), detail)
            }
            CheckCommand::Bracket(p) => {
                let b = self
                    .bracket
                    .as_ref()
                    .ok_or_else(|| Error::usage("no bracket"))?;
                let v = match p {
                    BracketProperty::Sandwich => b.sandwich_holds,
                    BracketProperty::Equal => b.upper_members_equal,
                    BracketProperty::AffineSandwich => b.affine_sandwich_holds,
                    BracketProperty::AffineEqual => b.affine_upper_members_equal,
                };
                (Value::Bool(v), None)
            }
            CheckCommand::RedNumber => (Value::Bool(reduction_number_one(self.star()?)?), None),
            CheckCommand::TauLowerBound => {
                let v = tau_lower_bound_members(self.star()?)?;
                (
                    Value::Bool(v.iter().all(|&b| b)),
                    Some(format!("per family member: {}", bool_list(&v))),
                )
            }
            CheckCommand::Chain(k) => {
                let k = k.eval(&ring, &self.env)?;
                let r = chain_conditions(self.star()?, &k)?;
                (
                    bool_list(&[r.intersection_in_m_i, r.i_is_sum]),
                    Some(r.label),
                )
            }
            CheckCommand::FrobScale(e) => {
                let row = self.scaling_row(*e)?;
                (
                    word(row.criteria.conclusion),
                    Some(format!("q = {}", row.q)),
                )
            }
            CheckCommand::Special(e, part) => {
                let row = self.scaling_row(*e)?;
                let list = match part {
                    SpecialPart::A => &row.special_a,
                    SpecialPart::B => &row.special_b,
                };
                (
                    Value::Bool(list.iter().all(|&b| b)),
                    Some(format!("q = {}, per generator: {}", row.q, bool_list(list))),
                )
            }
        })
    }
}

fn scaling_summary(row: &ScalingRow) -> Result<ScalingSummary> {
    Ok(ScalingSummary {
        e: row.e,
        q: row.q,
        special_a: row.special_a.clone(),
        special_b: row.special_b.clone(),
        criteria: row.criteria.clone(),
        bracket: row.bracket.summary()?,
    })
}

/// Evaluates the declared ideals in order, adding `I = J + U` when `I` is
/// not declared.
pub fn evaluate_ideals(sc: &Scenario) -> Result<Env> {
    let mut env = Env::new();
    for d in &sc.ideals {
        let v = d.expr.eval(&sc.ring, &env)?;
        env.insert(d.name.clone(), v);
    }
    if !env.contains_key("I") {
        if let Some(j) = env.get("J").cloned() {
            let i = match env.get("U") {
                Some(u) => j.sum(u)?,
                None => j,
            };
            env.insert("I".into(), i);
        }
    }
    Ok(env)
}

pub fn run_scenario(sc: &Scenario, name: &str, opts: &RunOptions) -> Result<RunOutcome> {
    let start = Instant::now();
    let mut report = Report::new(name, &sc.ring);
    report.scenario.notes = sc.notes.clone();
    report.scenario.flags = sc.flags.clone();

    let t = Instant::now();
    let env = evaluate_ideals(sc)?;
    for (k, v) in &env {
        report.ideals.insert(k.clone(), presented(v)?);
    }
    report.timings.insert("ideals_ms".into(), ms(t));

    let tau = match &sc.tau {
        Some(d) => {
            let a = d.expr.eval(&sc.ring, &env)?;
            let prov = d.provenance.clone().unwrap_or_else(|| d.expr.to_string());
            report.scenario.tau_provenance = Some(prov.clone());
            Some(TestIdealInput::new(a, prov)?)
        }
        None => None,
    };
    let cfg = ClosureConfig {
        q_max: opts.q_max,
        gorenstein_parameter: sc.has_flag(Flag::GorensteinParameter),
    };

    let mut st = State {
        sc,
        env,
        tau,
        cfg,
        star: None,
        criteria: None,
        bracket: None,
        scaling: HashMap::new(),
        closure: Vec::new(),
    };

    if let (Some(j), Some(tau)) = (st.env.get("J"), st.tau.as_ref()) {
        let t = Instant::now();
        let u = st
            .env
            .get("U")
            .map(|u| u.gens().to_vec())
            .unwrap_or_default();
        let inp = StarReductionInput::new(&sc.ring, j.gens().to_vec(), u, tau.clone(), cfg)?;
        report
            .scenario
            .warnings
            .extend(inp.warnings().iter().cloned());
        for (k, v) in inp.u_verdicts().iter().enumerate() {
            st.closure.push((format!("u_{}", k + 1), v.clone()));
        }
        let crit = check_criteria(&inp)?;
        report.timings.insert("criteria_ms".into(), ms(t));
        let t = Instant::now();
        let br = core_bracket(&inp)?;
        report.timings.insert("bracket_ms".into(), ms(t));
        let jci = inp.j().colon(inp.i())?;
        let mut section = CriteriaSection {
            j: inp.j_gens().iter().map(|g| g.to_string()).collect(),
            u: inp.u_gens().iter().map(|g| g.to_string()).collect(),
            tau: presented(&tau.tau)?,
            u_verdicts: inp.u_verdicts().to_vec(),
            report: crit.clone(),
            j_colon_i: presented(&jci)?,
            bracket: br.summary()?,
            reduction_number_one: None,
            tau_lower_bound: None,
            chain: BTreeMap::new(),
            scaling: Vec::new(),
            scaling_threshold: None,
        };
        if br.sandwich_holds != br.affine_sandwich_holds
            || br.upper_members_equal != br.affine_upper_members_equal
        {
            report.scenario.warnings.push(
                "the affine ring and its localization at the origin disagree on the bracket; \
                 the local outcome is the one the criteria address"
                    .into(),
            );
        }
        if opts.extras {
            section.reduction_number_one = Some(reduction_number_one(&inp)?);
            section.tau_lower_bound = Some(tau_lower_bound_members(&inp)?);
        }
        if !opts.scaling.is_empty() {
            let t = Instant::now();
            let rep = frobenius_scaling(&inp, &opts.scaling)?;
            for row in &rep.rows {
                section.scaling.push(scaling_summary(row)?);
            }
            section.scaling_threshold = rep.threshold;
            for row in rep.rows {
                st.scaling.insert(row.e, row);
            }
            report.timings.insert("scaling_ms".into(), ms(t));
        }
        st.star = Some(inp);
        st.criteria = Some(crit);
        st.bracket = Some(br);
        report.criteria = Some(section);
    }

    let t = Instant::now();
    for (n, check) in sc.checks.iter().enumerate() {
        let key = check
            .label
            .clone()
            .unwrap_or_else(|| format!("check_{}", n + 1));
        let (actual, detail) = st.eval_check(&key, &check.command)?;
        if let (CheckCommand::Chain(k), Some(section)) = (&check.command, report.criteria.as_mut())
        {
            let kk = k.eval(&sc.ring, &st.env)?;
            section
                .chain
                .insert(k.to_string(), chain_conditions(st.star()?, &kk)?);
        }
        report.verdicts.insert(key.clone(), actual.clone());
        report.scenario.checks.push(CheckOutcome {
            passed: actual == check.expect,
            key,
            line: check.pos.line,
            text: check.text.clone(),
            expected: check.expect.clone(),
            actual,
            detail,
        });
    }
    report.timings.insert("checks_ms".into(), ms(t));

    if let Some(section) = report.criteria.as_mut() {
        let mut extra: Vec<&ScalingRow> = st
            .scaling
            .values()
            .filter(|r| !section.scaling.iter().any(|s| s.e == r.e))
            .collect();
        extra.sort_by_key(|r| r.e);
        for row in extra {
            section.scaling.push(scaling_summary(row)?);
        }
        section.scaling.sort_by_key(|r| r.e);
        if !section.scaling.is_empty() {
            section.scaling_threshold = section
                .scaling
                .iter()
                .rev()
                .take_while(|r| r.criteria.conclusion == Conclusion::ConfirmedFormula)
                .last()
                .map(|r| r.e);
        }
    }
    for (k, v) in &st.closure {
        report.scenario.closure.insert(k.clone(), v.clone());
    }
    report.timings.insert("total_ms".into(), ms(start));

    let mut scaling_rows: Vec<ScalingRow> = st.scaling.into_values().collect();
    scaling_rows.sort_by_key(|r| r.e);
    Ok(RunOutcome {
        report,
        closure_verdicts: st.closure,
        star_input: st.star,
        bracket: st.bracket,
        scaling_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    #[test]
    fn runs_checks_and_reports() {
        let src = r#"
ring R = F(7)[x,y,z] / (x^3 + y^3 + z^3);
ideal J = (y, z);
ideal U = (x^2);
tau = m "cubic";
flag gorenstein_parameter;
check criteria expect ConfirmedFormula;
check member x^2*y in J*(J:I) as in_formula expect true;
check subset m^2 in J expect false;
check star_member x in J expect ProvedOut;
check independent expect true;
check red_number expect true;
check chain J expect [true, true];
check special 1 a expect true;
"#;
        let sc = parse_scenario(src).unwrap();
        let out = run_scenario(&sc, "cubic", &RunOptions::default()).unwrap();
        for c in &out.report.scenario.checks {
            assert!(c.passed, "{c:?}");
        }
        assert_eq!(out.report.verdicts["in_formula"], Value::Bool(true));
        assert_eq!(
            out.report.scenario.checks[2].detail.as_deref(),
            Some("witness: x^2 is outside")
        );
        assert!(out.closure_verdicts.iter().any(|(k, _)| k == "u_1"));
        assert!(out.closure_verdicts.iter().any(|(k, _)| k == "check_5.2"));
        let json: serde_json::Value = serde_json::from_str(&out.report.to_json()).unwrap();
        let keys: Vec<&str> = json
            .as_object()
            .unwrap()
            .keys()
            .map(|s| s.as_str())
            .collect();
        assert_eq!(
            keys,
            ["criteria", "ideals", "ring", "scenario", "timings", "verdicts"]
        );
        let again = run_scenario(&sc, "cubic", &RunOptions::default()).unwrap();
        assert_eq!(
            out.report.to_json_without_timings(),
            again.report.to_json_without_timings()
        );
    }

    #[test]
    fn failing_check_is_reported() {
        let src = "ring R = F(7)[x,y];\nideal A = (x);\ncheck member y in A expect true;\n";
        let out = run_scenario(&parse_scenario(src).unwrap(), "t", &RunOptions::default()).unwrap();
        assert!(!out.passed());
        assert!(out.report.to_text().contains("FAIL  check_1 (line 3)"));
    }

    #[test]
    fn closure_checks_need_tau() {
        let src = "ring R = F(7)[x,y];\nideal A = (x);\ncheck star_member y in A expect Unknown;\n";
        let res = run_scenario(&parse_scenario(src).unwrap(), "t", &RunOptions::default());
        assert!(matches!(res, Err(Error::Usage(_))));
    }
}
