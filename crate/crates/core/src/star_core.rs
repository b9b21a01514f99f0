//! Criteria and bounds for the `*`-core of `I = J + (u_1, ..., u_s)`, where
//! `J = (f_1, ..., f_n)` is a minimal `*`-reduction and each `u_j` lies in
//! the special tight closure of `J`.
//!
//! The `*`-core is an infinite intersection, so it is never computed
//! directly. [`core_bracket`] returns the lower bound `τI`, the candidate
//! `J(J:I)` (and `I(J:I)`), and the finite intersection of `J` with the
//! ideals `J_{i,j}` obtained by replacing `f_i` with `f_i + u_j`.
//! [`check_criteria`] decides the hypotheses under which the candidate is the
//! `*`-core:
//!
//! * a1: `(f_1, ..., f̂_i, ..., f_n) : f_i ⊆ J:I` for every `i`;
//! * a2: `u_j (J:u_j) ⊆ J(J:I)` for every `j`;
//! * b:  `u_j (J:I) ⊆ m J(J:I)` for every `j`.
//!
//! a1 and a2 give `*-core(I) ⊆ J(J:I)`, b gives the reverse inclusion.
//!
//! These statements concern the local ring at the origin. Containments and
//! equalities are therefore decided after localizing at `m`; the bracket also
//! records the affine outcome, which can differ when some `J_{i,j}` has
//! components away from the origin.

use std::sync::Arc;

use serde::Serialize;

use crate::closure::{starsp_member, ClosureConfig, ClosureVerdict, Status, TestIdealInput};
use crate::error::{Error, Result};
use crate::ideals::{IdealHandle, QuotientRing};
use crate::poly::Polynomial;

/// Default bound on the number of ideals in a full-field reduction family.
pub const FULL_FIELD_CAP: u64 = 10_000;

#[derive(Clone, Debug)]
pub struct StarReductionInput {
    ring: Arc<QuotientRing>,
    j_gens: Vec<Polynomial>,
    u_gens: Vec<Polynomial>,
    tau: TestIdealInput,
    cfg: ClosureConfig,
    u_verdicts: Vec<ClosureVerdict>,
    warnings: Vec<String>,
    j: IdealHandle,
    i: IdealHandle,
}

impl StarReductionInput {
    /// Validated construction. `J` is replaced by minimal generators when it
    /// is homogeneous; each `u_j` is checked for membership in `J^{*sp}`.
    /// A refuted `u_j` is an error; an undecided one adds a warning.
    pub fn new(
        ring: &Arc<QuotientRing>,
        j_gens: Vec<Polynomial>,
        u_gens: Vec<Polynomial>,
        tau: TestIdealInput,
        cfg: ClosureConfig,
    ) -> Result<Self> {
        let j = IdealHandle::new(ring, j_gens)?;
        let j_gens = if j.is_homogeneous() {
            j.graded_min_gens()?
        } else {
            j.gens().to_vec()
        };
        let mut inp = StarReductionInput::unchecked(ring, j_gens, u_gens, tau, cfg)?;
        for (k, u) in inp.u_gens.iter().enumerate() {
            let v = starsp_member(u, &inp.j, &inp.tau, &inp.cfg)?;
            match v.status {
                Status::ProvedOut => {
                    return Err(Error::usage(format!(
                        "u_{} = {u} is provably not in the special tight closure of {}",
                        k + 1,
                        inp.j
                    )))
                }
                Status::Unknown => inp.warnings.push(format!(
                    "u_{} = {u}: membership in the special tight closure of {} is not decided",
                    k + 1,
                    inp.j
                )),
                Status::ProvedIn => {}
            }
            inp.u_verdicts.push(v);
        }
        Ok(inp)
    }

    /// Construction without minimizing `J` or checking the `u_j`.
    pub fn unchecked(
        ring: &Arc<QuotientRing>,
        j_gens: Vec<Polynomial>,
        u_gens: Vec<Polynomial>,
        tau: TestIdealInput,
        cfg: ClosureConfig,
    ) -> Result<Self> {
        if j_gens.is_empty() {
            return Err(Error::usage("J needs at least one generator"));
        }
        if **tau.tau.ring() != **ring {
            return Err(Error::usage("test ideal belongs to a different ring"));
        }
        let j = IdealHandle::new(ring, j_gens.clone())?;
        let mut all = j_gens.clone();
        all.extend(u_gens.iter().cloned());
        let i = IdealHandle::new(ring, all)?;
        Ok(StarReductionInput {
            ring: ring.clone(),
            j_gens,
            u_gens,
            tau,
            cfg,
            u_verdicts: Vec::new(),
            warnings: Vec::new(),
            j,
            i,
        })
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn j_gens(&self) -> &[Polynomial] {
        &self.j_gens
    }

    pub fn u_gens(&self) -> &[Polynomial] {
        &self.u_gens
    }

    pub fn tau(&self) -> &TestIdealInput {
        &self.tau
    }

    pub fn config(&self) -> &ClosureConfig {
        &self.cfg
    }

    pub fn u_verdicts(&self) -> &[ClosureVerdict] {
        &self.u_verdicts
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn j(&self) -> &IdealHandle {
        &self.j
    }

    pub fn i(&self) -> &IdealHandle {
        &self.i
    }

    /// `(f_1, ..., f̂_k, ..., f_n)`
    fn j_without(&self, k: usize) -> Result<IdealHandle> {
        let gens = self
            .j_gens
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, g)| g.clone())
            .collect();
        IdealHandle::new(&self.ring, gens)
    }

    /// `J_{i,j}`: `J` with `f_i` replaced by `f_i + u_j`.
    fn j_replaced(&self, i: usize, j: usize) -> Result<IdealHandle> {
        let mut gens = self.j_gens.clone();
        gens[i] = &gens[i] + &self.u_gens[j];
        IdealHandle::new(&self.ring, gens)
    }

    /// `J^[q]` and `(u_j^q)` as a new unchecked input.
    pub fn scaled(&self, q: u64) -> Result<StarReductionInput> {
        if self.ring.characteristic().log_of_power(q).is_none() {
            return Err(Error::usage(format!(
                "{q} is not a power of {}",
                self.ring.characteristic()
            )));
        }
        let pow = |v: &[Polynomial]| {
            v.iter()
                .map(|g| g.frobenius_power(q))
                .collect::<Result<Vec<_>>>()
        };
        StarReductionInput::unchecked(
            &self.ring,
            pow(&self.j_gens)?,
            pow(&self.u_gens)?,
            self.tau.clone(),
            self.cfg,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    /// a1, a2 and b hold: `*-core(I) = J(J:I)`.
    ConfirmedFormula,
    /// a1 and a2 hold: `*-core(I) ⊆ J(J:I)`.
    UpperBoundOnly,
    /// b holds: `J(J:I) ⊆ *-core(I)`.
    LowerBoundOnly,
    Inconclusive,
}

/// A generator showing that a containment fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub hypothesis: String,
    pub index: usize,
    pub element: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriteriaReport {
    pub hypothesis_a1: Vec<bool>,
    pub hypothesis_a2: Vec<bool>,
    pub hypothesis_b: Vec<bool>,
    pub conclusion: Conclusion,
    pub witnesses: Vec<Witness>,
}

impl CriteriaReport {
    pub fn a1(&self) -> bool {
        self.hypothesis_a1.iter().all(|&b| b)
    }

    pub fn a2(&self) -> bool {
        self.hypothesis_a2.iter().all(|&b| b)
    }

    pub fn b(&self) -> bool {
        self.hypothesis_b.iter().all(|&b| b)
    }
}

/// `J:I` and `J(J:I)`.
fn colon_and_formula(inp: &StarReductionInput) -> Result<(IdealHandle, IdealHandle)> {
    let jci = inp.j.colon(&inp.i)?;
    let formula = inp.j.product(&jci)?;
    Ok((jci, formula))
}

pub fn check_criteria(inp: &StarReductionInput) -> Result<CriteriaReport> {
    let (jci, jjci) = colon_and_formula(inp)?;
    let m = IdealHandle::maximal(&inp.ring);
    let mjjci = m.product(&jjci)?;
    let mut witnesses = Vec::new();
    let mut record = |name: &str, k: usize, w: Option<Polynomial>| {
        let holds = w.is_none();
        if let Some(element) = w {
            witnesses.push(Witness {
                hypothesis: name.into(),
                index: k + 1,
                element,
            });
        }
        holds
    };

    let mut a1 = Vec::with_capacity(inp.j_gens.len());
    for (k, f) in inp.j_gens.iter().enumerate() {
        let lhs = inp.j_without(k)?.colon_poly(f)?;
        a1.push(record("a1", k, jci.local_non_member_witness(&lhs)?));
    }
    let mut a2 = Vec::with_capacity(inp.u_gens.len());
    let mut b = Vec::with_capacity(inp.u_gens.len());
    for (k, u) in inp.u_gens.iter().enumerate() {
        let lhs = inp.j.colon_poly(u)?.mul_poly(u)?;
        a2.push(record("a2", k, jjci.local_non_member_witness(&lhs)?));
        let lhs = jci.mul_poly(u)?;
        b.push(record("b", k, mjjci.local_non_member_witness(&lhs)?));
    }

    let upper = a1.iter().chain(&a2).all(|&x| x);
    let lower = b.iter().all(|&x| x);
    let conclusion = match (upper, lower) {
        (true, true) => Conclusion::ConfirmedFormula,
        (true, false) => Conclusion::UpperBoundOnly,
        (false, true) => Conclusion::LowerBoundOnly,
        (false, false) => Conclusion::Inconclusive,
    };
    Ok(CriteriaReport {
        hypothesis_a1: a1,
        hypothesis_a2: a2,
        hypothesis_b: b,
        conclusion,
        witnesses,
    })
}

#[derive(Clone, Debug)]
pub struct CoreBracket {
    /// `τI`
    pub lower: IdealHandle,
    /// `J(J:I)`
    pub formula: IdealHandle,
    /// `I(J:I)`
    pub alt_formula: IdealHandle,
    /// `J ∩ ∩_{i,j} J_{i,j}`
    pub finite_intersection: IdealHandle,
    /// `lower ⊆ finite_intersection`
    pub sandwich_holds: bool,
    /// `formula = alt_formula = finite_intersection`
    pub upper_members_equal: bool,
    /// The same two checks without localizing.
    pub affine_sandwich_holds: bool,
    pub affine_upper_members_equal: bool,
}

/// Printable form of a [`CoreBracket`]: canonical generator lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketSummary {
    pub lower: Vec<String>,
    pub formula: Vec<String>,
    pub alt_formula: Vec<String>,
    pub finite_intersection: Vec<String>,
    pub sandwich_holds: bool,
    pub upper_members_equal: bool,
    pub affine_sandwich_holds: bool,
    pub affine_upper_members_equal: bool,
}

fn presented(a: &IdealHandle) -> Result<Vec<String>> {
    Ok(a.presentation()?.iter().map(|g| g.to_string()).collect())
}

impl CoreBracket {
    pub fn summary(&self) -> Result<BracketSummary> {
        Ok(BracketSummary {
            lower: presented(&self.lower)?,
            formula: presented(&self.formula)?,
            alt_formula: presented(&self.alt_formula)?,
            finite_intersection: presented(&self.finite_intersection)?,
            sandwich_holds: self.sandwich_holds,
            upper_members_equal: self.upper_members_equal,
            affine_sandwich_holds: self.affine_sandwich_holds,
            affine_upper_members_equal: self.affine_upper_members_equal,
        })
    }
}

pub fn core_bracket(inp: &StarReductionInput) -> Result<CoreBracket> {
    let (jci, formula) = colon_and_formula(inp)?;
    let alt_formula = inp.i.product(&jci)?;
    let lower = inp.tau.tau.product(&inp.i)?;
    let mut finite_intersection = inp.j.clone();
    for k in 0..inp.j_gens.len() {
        for l in 0..inp.u_gens.len() {
            finite_intersection = finite_intersection.intersect(&inp.j_replaced(k, l)?)?;
        }
    }
    let sandwich_holds = finite_intersection.locally_contains_ideal(&lower)?;
    let upper_members_equal =
        formula.locally_equals(&alt_formula)? && formula.locally_equals(&finite_intersection)?;
    let affine_sandwich_holds = finite_intersection.contains_ideal(&lower)?;
    let affine_upper_members_equal =
        formula.equals(&alt_formula)? && formula.equals(&finite_intersection)?;
    Ok(CoreBracket {
        lower,
        formula,
        alt_formula,
        finite_intersection,
        sandwich_holds,
        upper_members_equal,
        affine_sandwich_holds,
        affine_upper_members_equal,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyMode {
    /// `J` and the `n·s` ideals `J_{i,j}`.
    Canonical,
    /// `(f_1 + v_1, ..., f_n + v_n)` for every `v_i = Σ_j a_ij u_j` with `a_ij ∈ F_p`.
    FullField,
}

pub fn reduction_family(inp: &StarReductionInput, mode: FamilyMode) -> Result<Vec<IdealHandle>> {
    reduction_family_with_cap(inp, mode, FULL_FIELD_CAP)
}

pub fn reduction_family_with_cap(
    inp: &StarReductionInput,
    mode: FamilyMode,
    cap: u64,
) -> Result<Vec<IdealHandle>> {
    let n = inp.j_gens.len();
    let s = inp.u_gens.len();
    match mode {
        FamilyMode::Canonical => {
            let mut out = vec![inp.j.clone()];
            for k in 0..n {
                for l in 0..s {
                    out.push(inp.j_replaced(k, l)?);
                }
            }
            Ok(out)
        }
        FamilyMode::FullField => {
            let p = inp.ring.characteristic().get() as u64;
            let entries = (n * s) as u32;
            let count = p
                .checked_pow(entries)
                .filter(|&c| c <= cap)
                .ok_or_else(|| {
                    Error::Resource(format!(
                        "full-field family has {p}^{entries} members, above the cap of {cap}"
                    ))
                })?;
            let mut out = Vec::with_capacity(count as usize);
            for index in 0..count {
                // digits of `index` in base p are the coefficients a_ij
                let mut rest = index;
                let mut gens = inp.j_gens.clone();
                for g in gens.iter_mut() {
                    for u in &inp.u_gens {
                        let a = (rest % p) as u32;
                        rest /= p;
                        if a != 0 {
                            *g = &*g + &u.scale(a);
                        }
                    }
                }
                out.push(IdealHandle::new(&inp.ring, gens)?);
            }
            Ok(out)
        }
    }
}

/// `I^2 = J I` locally at `m`.
pub fn reduction_number_one(inp: &StarReductionInput) -> Result<bool> {
    inp.i.power(2)?.locally_equals(&inp.j.product(&inp.i)?)
}

/// `τI ⊆ K` locally at `m` for each member `K` of the canonical family, in family order.
pub fn tau_lower_bound_members(inp: &StarReductionInput) -> Result<Vec<bool>> {
    let lower = inp.tau.tau.product(&inp.i)?;
    reduction_family(inp, FamilyMode::Canonical)?
        .iter()
        .map(|k| k.locally_contains_ideal(&lower))
        .collect()
}

/// `τI ⊆ K` for every member `K` of the canonical family.
pub fn tau_lower_bound_check(inp: &StarReductionInput) -> Result<bool> {
    Ok(tau_lower_bound_members(inp)?.into_iter().all(|b| b))
}

/// Decidable stand-ins for the chain conditions of a reduction `K`, with
/// `(U)` in place of the special tight closure of `I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    /// `(U) ∩ K ⊆ mI`
    pub intersection_in_m_i: bool,
    /// `I = (U) + K`
    pub i_is_sum: bool,
    pub label: String,
}

pub fn chain_conditions(inp: &StarReductionInput, k: &IdealHandle) -> Result<ChainReport> {
    if !inp.i.contains_ideal(k)? {
        return Err(Error::usage(format!(
            "{k} is not contained in I = {}",
            inp.i
        )));
    }
    if k.gens().len() != inp.j_gens.len() {
        return Err(Error::usage(format!(
            "{k} has {} generators, expected {}",
            k.gens().len(),
            inp.j_gens.len()
        )));
    }
    let u = IdealHandle::new(&inp.ring, inp.u_gens.clone())?;
    let m_i = IdealHandle::maximal(&inp.ring).product(&inp.i)?;
    let intersection_in_m_i = m_i.locally_contains_ideal(&u.intersect(k)?)?;
    let i_is_sum = inp.i.locally_equals(&u.sum(k)?)?;
    Ok(ChainReport {
        intersection_in_m_i,
        i_is_sum,
        label: "relative to certified special tight closure generators".into(),
    })
}

#[derive(Clone, Debug)]
pub struct ScalingRow {
    pub e: u32,
    pub q: u64,
    /// `(f_1^q, ..., f̂_i^q, ..., f_n^q) : f_i^q ⊆ τ`, per `i`.
    pub special_a: Vec<bool>,
    /// `u_k^q (J^[q] : u_k^q) ⊆ m τ J^[q]`, per `k`.
    pub special_b: Vec<bool>,
    pub criteria: CriteriaReport,
    pub bracket: CoreBracket,
}

#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Least tested `e` from which every tested row is `ConfirmedFormula`.
    pub threshold: Option<u32>,
}

pub fn frobenius_scaling(inp: &StarReductionInput, e_list: &[u32]) -> Result<ScalingReport> {
    let p = inp.ring.characteristic().get() as u64;
    let mut es = e_list.to_vec();
    es.sort_unstable();
    es.dedup();
    let m_tau = IdealHandle::maximal(&inp.ring).product(&inp.tau.tau)?;
    let mut rows = Vec::with_capacity(es.len());
    for e in es {
        let q = p
            .checked_pow(e)
            .ok_or_else(|| Error::Resource(format!("{p}^{e} overflows")))?;
        let sc = inp.scaled(q)?;
        let mut special_a = Vec::with_capacity(sc.j_gens.len());
        for (k, f) in sc.j_gens.iter().enumerate() {
            special_a.push(
                inp.tau
                    .tau
                    .locally_contains_ideal(&sc.j_without(k)?.colon_poly(f)?)?,
            );
        }
        let target = m_tau.product(&sc.j)?;
        let mut special_b = Vec::with_capacity(sc.u_gens.len());
        for u in &sc.u_gens {
            special_b.push(target.locally_contains_ideal(&sc.j.colon_poly(u)?.mul_poly(u)?)?);
        }
        rows.push(ScalingRow {
            e,
            q,
            special_a,
            special_b,
            criteria: check_criteria(&sc)?,
            bracket: core_bracket(&sc)?,
        });
    }
    let mut threshold = None;
    for row in rows.iter().rev() {
        if row.criteria.conclusion != Conclusion::ConfirmedFormula {
            break;
        }
        threshold = Some(row.e);
    }
    Ok(ScalingReport { rows, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polys(r: &Arc<QuotientRing>, v: &[&str]) -> Vec<Polynomial> {
        v.iter().map(|s| r.parse_poly(s).unwrap()).collect()
    }

    fn cubic_input() -> StarReductionInput {
        let r = QuotientRing::parse(7, &["x", "y", "z"], &["x^3 + y^3 + z^3"]).unwrap();
        let tau = TestIdealInput::new(IdealHandle::maximal(&r), "m").unwrap();
        let cfg = ClosureConfig {
            gorenstein_parameter: true,
            ..Default::default()
        };
        StarReductionInput::new(&r, polys(&r, &["y", "z"]), polys(&r, &["x^2"]), tau, cfg).unwrap()
    }

    fn plain(r: &Arc<QuotientRing>, j: &[&str], u: &[&str]) -> StarReductionInput {
        let tau = TestIdealInput::new(IdealHandle::maximal(r), "m").unwrap();
        StarReductionInput::unchecked(r, polys(r, j), polys(r, u), tau, ClosureConfig::default())
            .unwrap()
    }

    #[test]
    fn cubic_confirms_the_formula() {
        let inp = cubic_input();
        assert!(inp.warnings().is_empty());
        let rep = check_criteria(&inp).unwrap();
        assert_eq!(rep.conclusion, Conclusion::ConfirmedFormula);
        assert!(rep.witnesses.is_empty());
        let br = core_bracket(&inp).unwrap();
        assert!(br.sandwich_holds && br.upper_members_equal);
        // (y + x^2, z) has a component at x^3 = 1
        assert!(!br.affine_upper_members_equal);
        let m = IdealHandle::maximal(inp.ring());
        assert!(br.formula.equals(&inp.j().product(&m).unwrap()).unwrap());
        assert!(reduction_number_one(&inp).unwrap());
        assert!(tau_lower_bound_check(&inp).unwrap());
    }

    #[test]
    fn quintic_fails_a2_and_b() {
        let r = QuotientRing::parse(7, &["x", "y", "z"], &["x^5 + y^5 + z^5"]).unwrap();
        let inp = plain(&r, &["y", "z"], &["x^2"]);
        let rep = check_criteria(&inp).unwrap();
        assert_eq!(rep.hypothesis_a1, vec![true, true]);
        assert_eq!(rep.hypothesis_a2, vec![false]);
        assert_eq!(rep.hypothesis_b, vec![false]);
        assert_eq!(rep.conclusion, Conclusion::Inconclusive);
        assert!(rep.witnesses.iter().any(|w| w.hypothesis == "a2"));
    }

    #[test]
    fn trivial_case_s_zero() {
        let r = QuotientRing::parse(7, &["x", "y", "z"], &["x^3 + y^3 + z^3"]).unwrap();
        let inp = plain(&r, &["y", "z"], &[]);
        let br = core_bracket(&inp).unwrap();
        assert!(br.finite_intersection.equals(inp.j()).unwrap());
        assert!(br.formula.equals(inp.j()).unwrap());
        assert!(br.sandwich_holds);
        assert!(reduction_number_one(&inp).unwrap());
        assert!(tau_lower_bound_check(&inp).unwrap());
        assert_eq!(
            reduction_family(&inp, FamilyMode::Canonical).unwrap().len(),
            1
        );
    }

    #[test]
    fn family_sizes() {
        let inp = cubic_input();
        let fam = reduction_family(&inp, FamilyMode::Canonical).unwrap();
        assert_eq!(fam.len(), 3);
        let r = QuotientRing::parse(7, &["x", "y", "z"], &["x*y*z"]).unwrap();
        let inp = plain(&r, &["x"], &["y*z"]);
        let fam = reduction_family(&inp, FamilyMode::FullField).unwrap();
        assert_eq!(fam.len(), 7);
        let expected = IdealHandle::from_strs(&r, &["x + 3*y*z"]).unwrap();
        assert!(fam.iter().any(|k| k.equals(&expected).unwrap()));
        assert!(matches!(
            reduction_family_with_cap(&inp, FamilyMode::FullField, 6),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn reduction_number_examples() {
        let r = QuotientRing::parse(7, &["x", "y"], &[]).unwrap();
        assert!(reduction_number_one(&plain(&r, &["x^2", "y^2"], &["x*y"])).unwrap());
        assert!(!reduction_number_one(&plain(&r, &["x^5", "y^5"], &["x*y"])).unwrap());
    }

    #[test]
    fn chain_conditions_examples() {
        let r = QuotientRing::parse(7, &["x", "y", "z"], &["x*y*z"]).unwrap();
        let inp = plain(&r, &["x + y*z"], &["y*z"]);
        let k = IdealHandle::from_strs(&r, &["x + y*z"]).unwrap();
        let rep = chain_conditions(&inp, &k).unwrap();
        assert!(rep.i_is_sum);
        assert!(chain_conditions(&inp, &inp.i().clone()).is_err());
        let outside = IdealHandle::from_strs(&r, &["z"]).unwrap();
        assert!(chain_conditions(&inp, &outside).is_err());
    }

    #[test]
    fn scaling_zero_matches_unscaled() {
        let inp = cubic_input();
        let rep = frobenius_scaling(&inp, &[1, 0]).unwrap();
        assert_eq!(rep.rows[0].q, 1);
        assert_eq!(rep.rows[0].criteria, check_criteria(&inp).unwrap());
        assert_eq!(
            rep.rows[0].bracket.summary().unwrap(),
            core_bracket(&inp).unwrap().summary().unwrap()
        );
        assert_eq!(rep.rows[1].q, 7);
        assert!(rep.rows[1].special_a.iter().all(|&b| b));
        for row in &rep.rows {
            if row.criteria.conclusion == Conclusion::ConfirmedFormula {
                assert!(row.bracket.upper_members_equal);
            }
        }
    }

    #[test]
    fn refuted_u_aborts_construction() {
        let r = QuotientRing::parse(7, &["x", "y", "z"], &["x^3 + y^3 + z^3"]).unwrap();
        let tau = TestIdealInput::new(IdealHandle::maximal(&r), "m").unwrap();
        let res = StarReductionInput::new(
            &r,
            polys(&r, &["y", "z"]),
            polys(&r, &["x"]),
            tau,
            ClosureConfig::default(),
        );
        assert!(matches!(res, Err(Error::Usage(_))));
    }
}
