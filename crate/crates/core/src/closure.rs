//! Three-valued tight-closure and special-tight-closure membership.
//!
//! Tight closure has no known decision procedure, so membership is answered
//! as `ProvedIn`, `ProvedOut` or `Unknown`. Each proof rule reduces to ideal
//! containments, recorded as a [`Certificate`] that [`replay_certificate`]
//! re-checks with the ideal operations alone.
//!
//! Refutations rest on the test ideal `τ` supplied by the caller. Since
//! `τ = ∩ (I : I*)`, any `x ∈ I*` satisfies `τ x ⊆ I`; and `x ∈ I*` forces
//! `x^q ∈ (I^[q])*`, hence `τ x^q ⊆ I^[q]` for every `q = p^e`. Failure of
//! either containment for a single generator of `τ` proves `x ∉ I*`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::GbLimits;
use crate::ideals::{IdealHandle, QuotientRing};
use crate::poly::{Monomial, Polynomial};

/// A test ideal asserted by the caller, with a note on where it comes from.
#[derive(Clone, Debug)]
pub struct TestIdealInput {
    pub tau: IdealHandle,
    pub provenance: String,
}

impl TestIdealInput {
    pub fn new(tau: IdealHandle, provenance: impl Into<String>) -> Result<Self> {
        if tau.is_zero_in_ring()? {
            return Err(Error::usage("the test ideal must be nonzero"));
        }
        Ok(TestIdealInput {
            tau,
            provenance: provenance.into(),
        })
    }

    /// Generators of `τ` that are nonzero in the ring.
    fn test_elements(&self) -> Result<Vec<Polynomial>> {
        let ring = self.tau.ring();
        let mut out = Vec::new();
        for c in self.tau.gens() {
            if !ring.is_zero_in_ring(c)? {
                out.push(c.clone());
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClosureConfig {
    /// Largest Frobenius power tried by refutation; `None` means `p^2`.
    pub q_max: Option<u64>,
    /// Asserts that the ideal is generated by part of a system of parameters
    /// in a Gorenstein ring, where `I* = I : τ`.
    pub gorenstein_parameter: bool,
}

impl ClosureConfig {
    pub fn resolved_q_max(&self, p: u32) -> u64 {
        self.q_max.unwrap_or((p as u64) * (p as u64))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    ProvedIn,
    ProvedOut,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    AlreadyInIdeal,
    DegreeCriterion,
    GorensteinParameterColon,
    TestIdealRefutation,
    FrobeniusRefutation,
    EvidenceOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvidenceRow {
    pub q: u64,
    pub check: String,
    pub holds: bool,
}

/// One replayable fact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum CertStep {
    /// `element ∈ (ideal) + (relations)` has truth value `expected`.
    Member {
        ideal: Vec<Polynomial>,
        element: Polynomial,
        expected: bool,
    },
    /// The relations generate `(x^k + y^k + z^k)` in a ring with three variables.
    DiagonalHypersurface { k: u32 },
    /// `(ideal) = (x^d1, y^d2, z^d3)` with `d_i <= k`, `sum d_i <= 2k`, and `p ∤ k`.
    DiagonalExponents {
        ideal: Vec<Polynomial>,
        exponents: [u32; 3],
        k: u32,
    },
    /// `element` is homogeneous of degree at least `min_degree`.
    HomogeneousDegreeAtLeast {
        element: Polynomial,
        min_degree: u32,
    },
    /// `element` is homogeneous of degree strictly above every generator.
    DegreeExceedsGenerators {
        element: Polynomial,
        generators: Vec<Polynomial>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub steps: Vec<CertStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureVerdict {
    pub status: Status,
    pub rule: Rule,
    pub evidence: Vec<EvidenceRow>,
    pub q_max: u64,
    /// Present for `ProvedIn` and `ProvedOut`.
    pub certificate: Option<Certificate>,
    /// Hypotheses the verdict relies on beyond its certificate.
    pub assumptions: Vec<String>,
}

impl ClosureVerdict {
    fn proved(
        status: Status,
        rule: Rule,
        evidence: Vec<EvidenceRow>,
        q_max: u64,
        steps: Vec<CertStep>,
        assumptions: Vec<String>,
    ) -> Self {
        ClosureVerdict {
            status,
            rule,
            evidence,
            q_max,
            certificate: Some(Certificate { steps }),
            assumptions,
        }
    }
}

/// Monomial `x_i^d`, if `f` is a nonzero scalar multiple of one.
fn pure_power(f: &Polynomial) -> Option<(usize, u32)> {
    if f.len() != 1 {
        return None;
    }
    let m = f.leading_monomial()?;
    let nz: Vec<(usize, u32)> = m
        .exponents()
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, e)| e > 0)
        .collect();
    match nz.as_slice() {
        [(i, d)] => Some((*i, *d)),
        _ => None,
    }
}

/// `k` such that the relations are exactly one scalar multiple of `x^k + y^k + z^k`.
fn diagonal_degree(ring: &QuotientRing) -> Option<u32> {
    if ring.nvars() != 3 || ring.relations().len() != 1 {
        return None;
    }
    let f = ring.relations()[0].monic();
    let k = f.total_degree()?;
    let want = Polynomial::from_terms(
        ring.poly_ring(),
        (0..3).map(|i| (Monomial::var(3, i).scale(k), 1)).collect(),
    );
    (k > 0 && f == want).then_some(k)
}

/// Exponents `(d_x, d_y, d_z)` if the generators are exactly one pure power per variable.
fn diagonal_exponents(a: &IdealHandle) -> Option<[u32; 3]> {
    if a.ring().nvars() != 3 || a.gens().len() != 3 {
        return None;
    }
    let mut d = [None; 3];
    for g in a.gens() {
        let (i, e) = pure_power(g)?;
        if d[i].is_some() {
            return None;
        }
        d[i] = Some(e);
    }
    Some([d[0]?, d[1]?, d[2]?])
}

fn diagonal_bounds_hold(exps: [u32; 3], k: u32, p: u32) -> bool {
    exps.iter().all(|&d| d <= k) && exps.iter().sum::<u32>() <= 2 * k && !k.is_multiple_of(p)
}

/// Brenner's degree bound on diagonal hypersurfaces: in `K[x,y,z]/(x^k+y^k+z^k)`
/// with `p ∤ k`, every homogeneous element of degree `>= k` lies in
/// `(x^d1, y^d2, z^d3)*` whenever `d_i <= k` and `d1 + d2 + d3 <= 2k`.
///
/// The bound is stated over an algebraically closed field; verdicts citing it
/// are valid over the algebraic closure of F_p. Returns false whenever the
/// ring or the ideal does not have the required shape.
pub fn degree_criterion(f: &Polynomial, a: &IdealHandle) -> bool {
    let ring = a.ring();
    let Some(k) = diagonal_degree(ring) else {
        return false;
    };
    let Some(exps) = diagonal_exponents(a) else {
        return false;
    };
    if !diagonal_bounds_hold(exps, k, ring.characteristic().get()) {
        return false;
    }
    !f.is_zero() && f.is_homogeneous() && f.total_degree().unwrap_or(0) >= k
}

fn degree_criterion_steps(f: &Polynomial, a: &IdealHandle) -> Vec<CertStep> {
    let k = diagonal_degree(a.ring()).expect("checked");
    let exponents = diagonal_exponents(a).expect("checked");
    vec![
        CertStep::DiagonalHypersurface { k },
        CertStep::DiagonalExponents {
            ideal: a.gens().to_vec(),
            exponents,
            k,
        },
        CertStep::HomogeneousDegreeAtLeast {
            element: f.clone(),
            min_degree: k,
        },
    ]
}

fn frobenius_powers(p: u32, q_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = p as u64;
    while q <= q_max {
        out.push(q);
        q *= p as u64;
    }
    out
}

fn check_inputs(f: &Polynomial, a: &IdealHandle, tau: &TestIdealInput) -> Result<()> {
    if !Arc::ptr_eq(a.ring(), tau.tau.ring()) && **a.ring() != **tau.tau.ring() {
        return Err(Error::usage("test ideal belongs to a different ring"));
    }
    if f.ring() != a.ring().poly_ring() && **f.ring() != **a.ring().poly_ring() {
        return Err(Error::usage("element belongs to a different ring"));
    }
    if tau.tau.is_zero_in_ring()? {
        return Err(Error::usage("the test ideal must be nonzero"));
    }
    Ok(())
}

/// Decides `f ∈ a*` as far as the licensed rules allow, trying them in order:
/// membership in `a`, the degree criterion, the Gorenstein colon `a : τ`
/// (only when asserted in `cfg`), test-ideal refutation, Frobenius refutation.
pub fn star_member(
    f: &Polynomial,
    a: &IdealHandle,
    tau: &TestIdealInput,
    cfg: &ClosureConfig,
) -> Result<ClosureVerdict> {
    check_inputs(f, a, tau)?;
    let p = a.ring().characteristic().get();
    let q_max = cfg.resolved_q_max(p);
    let mut evidence = Vec::new();
    let mut assumptions = vec![format!("test ideal: {}", tau.provenance)];

    let in_a = a.contains(f)?;
    evidence.push(EvidenceRow {
        q: 1,
        check: format!("{f} in {a}"),
        holds: in_a,
    });
    if in_a {
        return Ok(ClosureVerdict::proved(
            Status::ProvedIn,
            Rule::AlreadyInIdeal,
            evidence,
            q_max,
            vec![CertStep::Member {
                ideal: a.gens().to_vec(),
                element: f.clone(),
                expected: true,
            }],
            Vec::new(),
        ));
    }

    if degree_criterion(f, a) {
        evidence.push(EvidenceRow {
            q: 1,
            check: "degree criterion on a diagonal hypersurface".into(),
            holds: true,
        });
        return Ok(ClosureVerdict::proved(
            Status::ProvedIn,
            Rule::DegreeCriterion,
            evidence,
            q_max,
            degree_criterion_steps(f, a),
            vec!["valid over the algebraic closure of the prime field".into()],
        ));
    }

    let cs = tau.test_elements()?;
    let mut colon_witness = None;
    for c in &cs {
        let cf = c * f;
        let holds = a.contains(&cf)?;
        evidence.push(EvidenceRow {
            q: 1,
            check: format!("({c})*({f}) in {a}"),
            holds,
        });
        if !holds {
            colon_witness = Some(cf);
            break;
        }
    }

    if cfg.gorenstein_parameter && colon_witness.is_none() {
        assumptions.push(
            "gorenstein_parameter: the ideal is generated by part of a system of \
             parameters of a Gorenstein ring, so its tight closure is a : tau"
                .into(),
        );
        let steps = cs
            .iter()
            .map(|c| CertStep::Member {
                ideal: a.gens().to_vec(),
                element: c * f,
                expected: true,
            })
            .collect();
        return Ok(ClosureVerdict::proved(
            Status::ProvedIn,
            Rule::GorensteinParameterColon,
            evidence,
            q_max,
            steps,
            assumptions,
        ));
    }

    if let Some(w) = colon_witness {
        return Ok(ClosureVerdict::proved(
            Status::ProvedOut,
            Rule::TestIdealRefutation,
            evidence,
            q_max,
            vec![CertStep::Member {
                ideal: a.gens().to_vec(),
                element: w,
                expected: false,
            }],
            assumptions,
        ));
    }

    for q in frobenius_powers(p, q_max) {
        let aq = a.bracket_power(q)?;
        let fq = f.frobenius_power(q)?;
        for c in &cs {
            let w = c * &fq;
            let holds = aq.contains(&w)?;
            evidence.push(EvidenceRow {
                q,
                check: format!("({c})*({f})^{q} in {a}^[{q}]"),
                holds,
            });
            if !holds {
                return Ok(ClosureVerdict::proved(
                    Status::ProvedOut,
                    Rule::FrobeniusRefutation,
                    evidence,
                    q_max,
                    vec![CertStep::Member {
                        ideal: aq.gens().to_vec(),
                        element: w,
                        expected: false,
                    }],
                    assumptions,
                ));
            }
        }
    }

    Ok(ClosureVerdict {
        status: Status::Unknown,
        rule: Rule::EvidenceOnly,
        evidence,
        q_max,
        certificate: None,
        assumptions,
    })
}

/// Evaluates every rule independently of the others and reports each one
/// that fires. Used to check that no input triggers both an inclusion and a
/// refutation.
pub fn all_rule_firings(
    f: &Polynomial,
    a: &IdealHandle,
    tau: &TestIdealInput,
    cfg: &ClosureConfig,
) -> Result<Vec<(Rule, Status)>> {
    check_inputs(f, a, tau)?;
    let mut out = Vec::new();
    if a.contains(f)? {
        out.push((Rule::AlreadyInIdeal, Status::ProvedIn));
    }
    if degree_criterion(f, a) {
        out.push((Rule::DegreeCriterion, Status::ProvedIn));
    }
    let cs = tau.test_elements()?;
    let mut colon = true;
    for c in &cs {
        if !a.contains(&(c * f))? {
            colon = false;
        }
    }
    if colon && cfg.gorenstein_parameter {
        out.push((Rule::GorensteinParameterColon, Status::ProvedIn));
    }
    if !colon {
        out.push((Rule::TestIdealRefutation, Status::ProvedOut));
    }
    let p = a.ring().characteristic().get();
    'frob: for q in frobenius_powers(p, cfg.resolved_q_max(p)) {
        let aq = a.bracket_power(q)?;
        let fq = f.frobenius_power(q)?;
        for c in &cs {
            if !aq.contains(&(c * &fq))? {
                out.push((Rule::FrobeniusRefutation, Status::ProvedOut));
                break 'frob;
            }
        }
    }
    Ok(out)
}

/// Special tight closure `a^{*sp}`: elements of `(m a^[q0])*` for some `q0`.
///
/// `ProvedIn` when `f ∈ m a`, or when `f` is homogeneous, provably in `a*`,
/// and of degree above every minimal generator of the graded ideal `a`.
/// `ProvedOut` only when `f ∉ a*` is proved, since `a^{*sp} ⊆ a*`. Otherwise
/// the evidence lists `c f^q ∈ m^[q] a^[q0 q]` for `q0 ∈ {p, p^2}` and
/// `q0 q <= q_max`.
pub fn starsp_member(
    f: &Polynomial,
    a: &IdealHandle,
    tau: &TestIdealInput,
    cfg: &ClosureConfig,
) -> Result<ClosureVerdict> {
    check_inputs(f, a, tau)?;
    let ring = a.ring();
    let p = ring.characteristic().get();
    let q_max = cfg.resolved_q_max(p);
    let m = IdealHandle::maximal(ring);
    let ma = m.product(a)?;
    if ma.contains(f)? {
        return Ok(ClosureVerdict::proved(
            Status::ProvedIn,
            Rule::AlreadyInIdeal,
            vec![EvidenceRow {
                q: 1,
                check: format!("{f} in m*{a}"),
                holds: true,
            }],
            q_max,
            vec![CertStep::Member {
                ideal: ma.gens().to_vec(),
                element: f.clone(),
                expected: true,
            }],
            Vec::new(),
        ));
    }

    let star = star_member(f, a, tau, cfg)?;
    if star.status == Status::ProvedOut {
        return Ok(star);
    }

    if star.status == Status::ProvedIn && a.is_homogeneous() && f.is_homogeneous() && !f.is_zero() {
        let gens = a.graded_min_gens()?;
        let top = gens
            .iter()
            .filter_map(|g| g.total_degree())
            .max()
            .unwrap_or(0);
        let deg = f.total_degree().unwrap_or(0);
        if deg > top {
            let mut v = star;
            v.evidence.push(EvidenceRow {
                q: 1,
                check: format!("degree {deg} exceeds generator degrees (max {top})"),
                holds: true,
            });
            if let Some(cert) = v.certificate.as_mut() {
                cert.steps.push(CertStep::DegreeExceedsGenerators {
                    element: f.clone(),
                    generators: gens,
                });
            }
            return Ok(v);
        }
    }

    let mut evidence = star.evidence.clone();
    let cs = tau.test_elements()?;
    let pp = p as u64;
    for q0 in [pp, pp * pp] {
        let mut q = 1u64;
        while q0 * q <= q_max {
            let target = m.bracket_power(q)?.product(&a.bracket_power(q0 * q)?)?;
            let fq = f.frobenius_power(q)?;
            for c in &cs {
                evidence.push(EvidenceRow {
                    q,
                    check: format!("({c})*({f})^{q} in m^[{q}]*{a}^[{}]", q0 * q),
                    holds: target.contains(&(c * &fq))?,
                });
            }
            q *= pp;
        }
    }
    let mut assumptions = star.assumptions;
    if star.status == Status::ProvedIn {
        assumptions.push(format!("in the tight closure by {:?}", star.rule));
    }
    Ok(ClosureVerdict {
        status: Status::Unknown,
        rule: Rule::EvidenceOnly,
        evidence,
        q_max,
        certificate: None,
        assumptions,
    })
}

/// Verdicts for `f_i ∈ (f_1, ..., f̂_i, ..., f_n)*`, one per generator.
pub fn star_independent(
    gens: &[Polynomial],
    tau: &TestIdealInput,
    cfg: &ClosureConfig,
) -> Result<Vec<ClosureVerdict>> {
    if gens.is_empty() {
        return Err(Error::usage("star_independent needs at least one element"));
    }
    let ring = tau.tau.ring();
    let mut out = Vec::with_capacity(gens.len());
    for i in 0..gens.len() {
        let others: Vec<Polynomial> = gens
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let a = IdealHandle::new(ring, others)?;
        out.push(star_member(&gens[i], &a, tau, cfg)?);
    }
    Ok(out)
}

/// True when every verdict refutes membership.
pub fn proved_independent(verdicts: &[ClosureVerdict]) -> bool {
    verdicts.iter().all(|v| v.status == Status::ProvedOut)
}

/// Re-checks every step of `cert` in `ring` using ideal operations only.
pub fn replay_certificate(cert: &Certificate, ring: &Arc<QuotientRing>) -> Result<bool> {
    for step in &cert.steps {
        let ok = match step {
            CertStep::Member {
                ideal,
                element,
                expected,
            } => IdealHandle::new(ring, ideal.clone())?.contains(element)? == *expected,
            CertStep::DiagonalHypersurface { k } => {
                if ring.nvars() != 3 {
                    false
                } else {
                    let bare = QuotientRing::new(
                        ring.poly_ring().clone(),
                        Vec::new(),
                        GbLimits::default(),
                    )?;
                    let rel = IdealHandle::new(&bare, ring.relations().to_vec())?;
                    let diag = (0..3)
                        .map(|i| ring.var(i).pow(*k as u64))
                        .reduce(|a, b| &a + &b)
                        .expect("three variables");
                    rel.equals(&IdealHandle::principal(&bare, diag)?)?
                }
            }
            CertStep::DiagonalExponents {
                ideal,
                exponents,
                k,
            } => {
                let stated = IdealHandle::new(ring, ideal.clone())?;
                let powers = (0..3)
                    .map(|i| ring.var(i).pow(exponents[i] as u64))
                    .collect();
                let pure = IdealHandle::new(ring, powers)?;
                // the relation lies in both ideals here, so equality in R is
                // equality of the generated ambient ideals
                stated.equals(&pure)?
                    && diagonal_bounds_hold(*exponents, *k, ring.characteristic().get())
            }
            CertStep::HomogeneousDegreeAtLeast {
                element,
                min_degree,
            } => {
                !element.is_zero()
                    && element.is_homogeneous()
                    && element.total_degree().unwrap_or(0) >= *min_degree
            }
            CertStep::DegreeExceedsGenerators {
                element,
                generators,
            } => {
                let top = generators
                    .iter()
                    .filter_map(|g| g.total_degree())
                    .max()
                    .unwrap_or(0);
                element.is_homogeneous()
                    && generators.iter().all(|g| g.is_homogeneous())
                    && element.total_degree().unwrap_or(0) > top
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
