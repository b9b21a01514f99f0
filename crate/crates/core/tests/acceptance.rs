//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;

use starcore::closure::{
    degree_criterion, replay_certificate, star_member, ClosureConfig, Rule, Status, TestIdealInput,
};
use starcore::examples::{example_source, EXAMPLE_IDS};
use starcore::ideals::{IdealHandle, QuotientRing};
use starcore::poly::Polynomial;
use starcore::runner::{run_scenario, RunOptions};
use starcore::scenario::parse_scenario;
use starcore::selftest::{identity_suite, oracle_agreement};
use starcore::star_core::{
    check_criteria, core_bracket, frobenius_scaling, reduction_number_one, tau_lower_bound_check,
    Conclusion, StarReductionInput,
};
use starcore::Result;

/// Outcome of one criterion: whether it holds and what was observed.
type Verdict = Result<(bool, String)>;

fn ideal(ring: &Arc<QuotientRing>, gens: &[&str]) -> IdealHandle {
    IdealHandle::from_strs(ring, gens).expect("generators parse")
}

fn poly(ring: &Arc<QuotientRing>, s: &str) -> Polynomial {
    ring.parse_poly(s).expect("polynomial parses")
}

fn star_input(
    ring: &Arc<QuotientRing>,
    j: &[&str],
    u: &[&str],
    tau: IdealHandle,
    gorenstein: bool,
) -> Result<StarReductionInput> {
    let j = j.iter().map(|s| poly(ring, s)).collect();
    let u = u.iter().map(|s| poly(ring, s)).collect();
    let cfg = ClosureConfig {
        gorenstein_parameter: gorenstein,
        ..Default::default()
    };
    StarReductionInput::new(ring, j, u, TestIdealInput::new(tau, "supplied")?, cfg)
}

fn criterion_1() -> Verdict {
    let ring = QuotientRing::parse(7, &["x", "y", "z"], &["x*y*z"])?;
    let i = ideal(&ring, &["x", "y*z"]);
    let target = ideal(&ring, &["x^2", "y^2*z^2"]);
    let colon = ideal(&ring, &["x + y*z"]).colon(&i)?;
    let colon_ok = colon.equals(&target)?;
    let mut cap = ideal(&ring, &["x + y*z"]);
    for a in 2..7 {
        cap = cap.intersect(&ideal(&ring, &[&format!("x + {a}*y*z")]))?;
    }
    let cap_ok = cap.equals(&target)?;
    let shown = |a: &IdealHandle| -> Result<String> {
        Ok(a.presentation()?
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(", "))
    };
    Ok((
        colon_ok && cap_ok,
        format!(
            "(x+yz):I = ({}) equals (x^2, y^2 z^2): {colon_ok}; intersection over a = 1..6 equals it: {cap_ok}",
            shown(&colon)?
        ),
    ))
}

fn criterion_2() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [7, 11] {
        let ring = QuotientRing::parse(p, &["x", "y", "z"], &["x^5 + y^5 + z^5"])?;
        let m3 = IdealHandle::maximal(&ring).power(3)?;
        let inp = star_input(&ring, &["y", "z"], &["x^2"], m3.clone(), true)?;
        let u_in = inp.j().colon(&m3)?.contains(&poly(&ring, "x^2"))?;
        let crit = check_criteria(&inp)?;
        let all_false = !crit.a1() && !crit.a2() && !crit.b();
        let jji = inp.j().product(&inp.j().colon(inp.i())?)?;
        let jp = ideal(&ring, &["y + x^2", "z"]);
        let witness = jp.local_non_member_witness(&jji)?;
        let affine_witness = jp.non_member_witness(&jji)?;
        ok &= u_in && all_false && witness.is_some();
        notes.push(format!(
            "p={p}: u in J:m^3 {u_in}; a1 {} a2 {} b {}; witness outside (y+x^2, z): {} (affine {})",
            crit.a1(),
            crit.a2(),
            crit.b(),
            witness.map_or("none".into(), |w| w.to_string()),
            affine_witness.map_or("none".into(), |w| w.to_string()),
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn criterion_3() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [3, 7, 11] {
        let ring = QuotientRing::parse(p, &["x", "y", "z"], &["x^10 + y^10 + z^10"])?;
        let j = ideal(&ring, &["x^5", "y^7", "z^8"]);
        let u = poly(&ring, "x*y^3*z^6");
        let tau = TestIdealInput::new(IdealHandle::maximal(&ring).power(8)?, "m^8")?;
        let v = star_member(&u, &j, &tau, &ClosureConfig::default())?;
        let in_star = degree_criterion(&u, &j)
            && v.status == Status::ProvedIn
            && v.rule == Rule::DegreeCriterion;
        let i = j.sum(&IdealHandle::principal(&ring, u.clone())?)?;
        let jci = j.colon(&i)?;
        let colon_ok = jci.equals(&ideal(&ring, &["x^4", "y^4", "z^2"]))?;
        let jji = j.product(&jci)?;
        let z2u_out = !jji.contains(&poly(&ring, "x*y^3*z^8"))?;
        let x5z2 = poly(&ring, "x^5*z^2");
        let x5z2_in = jji.contains(&x5z2)?;
        let jp = ideal(
            &ring,
            &["x^5 + x^2*y^3*z^6", "y^7 + x*y^4*z^6", "z^8 + x*y^3*z^7"],
        );
        let x5z2_out = !jp.contains(&x5z2)?;
        let x5z2_out_local = !jp.locally_contains(&x5z2)?;
        ok &= in_star && colon_ok && z2u_out && x5z2_in && x5z2_out;
        notes.push(format!(
            "p={p}: u in J* {in_star}; J:I = (x^4,y^4,z^2) {colon_ok}; z^2u not in J(J:I) {z2u_out}; \
             x^5z^2 in J(J:I) {x5z2_in}; x^5z^2 not in J' {x5z2_out} (at the origin {x5z2_out_local})"
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn cubic() -> Result<StarReductionInput> {
    let ring = QuotientRing::parse(7, &["x", "y", "z"], &["x^3 + y^3 + z^3"])?;
    let m = IdealHandle::maximal(&ring);
    star_input(&ring, &["y", "z"], &["x^2"], m, true)
}

fn criterion_4() -> Verdict {
    let inp = cubic()?;
    let crit = check_criteria(&inp)?;
    let br = core_bracket(&inp)?;
    let red = reduction_number_one(&inp)?;
    let low = tau_lower_bound_check(&inp)?;
    let confirmed = crit.conclusion == Conclusion::ConfirmedFormula;
    Ok((
        confirmed && br.upper_members_equal && red && low,
        format!(
            "conclusion {:?}; formula = alt = finite intersection at the origin {} (affine {}); \
             I^2 = JI {red}; tau I in every family member {low}",
            crit.conclusion, br.upper_members_equal, br.affine_upper_members_equal
        ),
    ))
}

fn criterion_5() -> Verdict {
    let inp = cubic()?;
    let rep = frobenius_scaling(&inp, &[0, 1])?;
    let row0 = &rep.rows[0];
    let row1 = &rep.rows[1];
    let unscaled_crit = serde_json::to_string(&check_criteria(&inp)?).expect("serializes");
    let unscaled_br = serde_json::to_string(&core_bracket(&inp)?.summary()?).expect("serializes");
    let e0_match = serde_json::to_string(&row0.criteria).expect("serializes") == unscaled_crit
        && serde_json::to_string(&row0.bracket.summary()?).expect("serializes") == unscaled_br;
    let special =
        row1.q == 7 && row1.special_a.iter().all(|&b| b) && row1.special_b.iter().all(|&b| b);
    let consistent = rep
        .rows
        .iter()
        .filter(|r| r.criteria.conclusion == Conclusion::ConfirmedFormula)
        .all(|r| r.bracket.upper_members_equal);
    Ok((
        e0_match && special && consistent,
        format!(
            "e=0 row matches the unscaled report {e0_match}; special (a) {:?} (b) {:?} at q=7; \
             q=7 conclusion {:?}; confirmed rows have formula = finite intersection {consistent}; threshold {:?}",
            row1.special_a, row1.special_b, row1.criteria.conclusion, rep.threshold
        ),
    ))
}

fn criterion_6() -> Verdict {
    let s = oracle_agreement(20_240_601, 500)?;
    Ok((
        s.instances == 500 && s.disagreements.is_empty(),
        format!(
            "{} instances, {} membership and {} equality comparisons, {} disagreements",
            s.instances,
            s.membership_checks,
            s.equality_checks,
            s.disagreements.len()
        ),
    ))
}

fn criterion_7() -> Verdict {
    let mut checked = 0;
    let mut failures = Vec::new();
    for seed in [1, 2, 3] {
        let s = identity_suite(seed, 100)?;
        checked += s.identities_checked;
        failures.extend(s.failures);
    }
    let first = failures.first().cloned().unwrap_or_default();
    Ok((
        failures.is_empty(),
        format!(
            "{checked} identities checked, {} failures {first}",
            failures.len()
        ),
    ))
}

fn criterion_8() -> Verdict {
    let runs: &[(&str, &[u32])] = &[
        ("xyz", &[7]),
        ("quintic", &[7, 11]),
        ("decic", &[3, 7, 11]),
        ("cubic-mainm", &[7]),
        ("mainsop", &[7]),
    ];
    assert_eq!(runs.len(), EXAMPLE_IDS.len());
    let mut replayed = 0;
    let mut failed = Vec::new();
    for (id, ps) in runs {
        for &p in *ps {
            let sc = parse_scenario(&example_source(id, Some(p))?)?;
            let opts = RunOptions {
                scaling: vec![0, 1],
                extras: true,
                ..Default::default()
            };
            let out = run_scenario(&sc, id, &opts)?;
            for (key, v) in &out.closure_verdicts {
                if !matches!(v.status, Status::ProvedIn | Status::ProvedOut) {
                    continue;
                }
                replayed += 1;
                let ok = match &v.certificate {
                    Some(c) => replay_certificate(c, &sc.ring)?,
                    None => false,
                };
                if !ok {
                    failed.push(format!("{id} p={p} {key}"));
                }
            }
        }
    }
    Ok((
        replayed > 0 && failed.is_empty(),
        format!(
            "{replayed} certificates replayed, {} rejected {:?}",
            failed.len(),
            failed
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Verdict); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut all = true;
    for (n, f) in criteria {
        let start = std::time::Instant::now();
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(Ok(v)) => v,
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".into()),
        };
        all &= ok;
        let tag = if ok { "PASS" } else { "FAIL" };
        println!(
            "{tag} criterion {n}: {detail} [{:.1} s]",
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
