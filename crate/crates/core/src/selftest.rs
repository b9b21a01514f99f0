//! Randomized agreement between the Gröbner kernel and the linear-algebra oracle.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::ideals::{monomials_of_degree, IdealHandle, QuotientRing};
use crate::oracle::{oracle_equal_up_to, MacaulayPiece};
use crate::poly::Polynomial;

/// Largest degree compared between the kernel and the oracle.
pub const AGREEMENT_DEGREE: u32 = 12;

#[derive(Clone, Debug, Default, Serialize)]
pub struct AgreementStats {
    pub instances: usize,
    pub membership_checks: usize,
    pub equality_checks: usize,
    pub disagreements: Vec<String>,
}

/// A random homogeneous polynomial of degree `d` with at most `terms` terms.
pub fn random_homogeneous(
    rng: &mut impl Rng,
    ring: &QuotientRing,
    d: u32,
    terms: usize,
) -> Polynomial {
    let poly = ring.poly_ring();
    let p = ring.characteristic().get();
    let mons = monomials_of_degree(ring.nvars(), d);
    let picked: Vec<_> = mons
        .choose_multiple(rng, terms.min(mons.len()))
        .map(|m| (m.clone(), rng.gen_range(1..p)))
        .collect();
    Polynomial::from_terms(poly, picked)
}

/// A random homogeneous ideal: `p ∈ {3, 7}`, one to three variables, one to
/// three generators of degree one to six.
pub fn random_instance(rng: &mut impl Rng) -> Result<IdealHandle> {
    let p = *[3u32, 7].choose(rng).expect("nonempty");
    let n = rng.gen_range(1..=3usize);
    let names = ["x", "y", "z"];
    let ring = QuotientRing::parse(p, &names[..n], &[])?;
    let k = rng.gen_range(1..=3usize);
    let mut gens = Vec::with_capacity(k);
    for _ in 0..k {
        let d = rng.gen_range(1..=6u32);
        let t = rng.gen_range(1..=3usize);
        gens.push(random_homogeneous(rng, &ring, d, t));
    }
    IdealHandle::new(&ring, gens)
}

/// The degree-`d` spanning set `{m g}` of an ideal.
fn spanning_set(a: &IdealHandle, d: u32) -> Vec<Polynomial> {
    let n = a.ring().nvars();
    let mut out = Vec::new();
    for g in a.gens() {
        let dg = g.total_degree().unwrap_or(0);
        if dg <= d {
            for m in monomials_of_degree(n, d - dg) {
                out.push(g.mul_term(&m, 1));
            }
        }
    }
    out
}

/// Degree-bounded equality decided with Gröbner membership only.
fn kernel_equal_up_to(a: &IdealHandle, b: &IdealHandle, d_max: u32) -> Result<bool> {
    for d in 0..=d_max {
        for f in spanning_set(a, d) {
            if !b.contains(&f)? {
                return Ok(false);
            }
        }
        for f in spanning_set(b, d) {
            if !a.contains(&f)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Compares kernel and oracle on `count` instances drawn from `seed`: every
/// monomial and a random probe in each degree up to [`AGREEMENT_DEGREE`],
/// and bounded equality against a perturbed and a truncated generating set.
pub fn oracle_agreement(seed: u64, count: usize) -> Result<AgreementStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = AgreementStats::default();
    for idx in 0..count {
        let a = random_instance(&mut rng)?;
        let ring = a.ring().clone();
        stats.instances += 1;
        for d in 0..=AGREEMENT_DEGREE {
            let piece = MacaulayPiece::new(&a, d)?;
            let mut probes: Vec<Polynomial> = monomials_of_degree(ring.nvars(), d)
                .into_iter()
                .map(|m| Polynomial::monomial(ring.poly_ring(), m, 1))
                .collect();
            probes.push(random_homogeneous(&mut rng, &ring, d, 3));
            let span = spanning_set(&a, d);
            if !span.is_empty() {
                // a random element of the degree-d piece, so true cases occur
                let mut f = Polynomial::zero(ring.poly_ring());
                for g in span.choose_multiple(&mut rng, 3) {
                    f = &f + &g.scale(rng.gen_range(1..ring.characteristic().get()));
                }
                probes.push(f);
            }
            for f in probes {
                stats.membership_checks += 1;
                let kernel = a.contains(&f)?;
                let oracle = piece.contains(&f);
                if kernel != oracle {
                    stats.disagreements.push(format!(
                        "instance {idx}: {f} in {a}: kernel {kernel}, oracle {oracle}"
                    ));
                }
            }
        }
        let gens = a.gens().to_vec();
        let mut perturbed = gens.clone();
        if gens.len() > 1 {
            let c = rng.gen_range(1..ring.characteristic().get());
            let d0 = gens[0].total_degree().unwrap_or(0);
            if let Some(g) = gens[1..].iter().find(|g| g.total_degree() == Some(d0)) {
                perturbed[0] = &gens[0] + &g.scale(c);
            }
        }
        let truncated = gens[..gens.len() - 1].to_vec();
        for other in [perturbed, truncated] {
            let b = IdealHandle::new(&ring, other)?;
            stats.equality_checks += 1;
            let kernel = kernel_equal_up_to(&a, &b, AGREEMENT_DEGREE)?;
            let oracle = oracle_equal_up_to(&a, &b, AGREEMENT_DEGREE)?;
            if kernel != oracle {
                stats.disagreements.push(format!(
                    "instance {idx}: {a} vs {b} up to degree {AGREEMENT_DEGREE}: kernel {kernel}, oracle {oracle}"
                ));
            }
            if a.equals(&b)? && !oracle {
                stats.disagreements.push(format!(
                    "instance {idx}: {a} and {b} have equal reduced bases but differ in low degree"
                ));
            }
        }
    }
    Ok(stats)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct IdentityStats {
    pub instances: usize,
    pub identities_checked: usize,
    pub failures: Vec<String>,
}

/// A random ideal with one or two generators of degree one to three, in the
/// ambient ring of `ring`.
fn small_ideal(rng: &mut impl Rng, ring: &std::sync::Arc<QuotientRing>) -> Result<IdealHandle> {
    let k = rng.gen_range(1..=2usize);
    let gens = (0..k)
        .map(|_| {
            let d = rng.gen_range(1..=3u32);
            let t = rng.gen_range(1..=3usize);
            random_homogeneous(rng, ring, d, t)
        })
        .collect();
    IdealHandle::new(ring, gens)
}

/// Checks, on `count` seeded triples `A, B, C` and a random form `f`:
/// `(A:B):C = A:BC`, `B(A:B) ⊆ A`, `AB ⊆ A∩B ⊆ A, B`,
/// `(A∩B)^[p] = A^[p] ∩ B^[p]`, `(A:f)^[p] = A^[p] : f^p`, and that the
/// reduced basis does not depend on the order of the generators.
pub fn identity_suite(seed: u64, count: usize) -> Result<IdentityStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = IdentityStats::default();
    for idx in 0..count {
        let p = *[3u32, 7].choose(&mut rng).expect("nonempty");
        let n = rng.gen_range(1..=3usize);
        let names = ["x", "y", "z"];
        let ring = QuotientRing::parse(p, &names[..n], &[])?;
        let a = small_ideal(&mut rng, &ring)?;
        let b = small_ideal(&mut rng, &ring)?;
        let c = small_ideal(&mut rng, &ring)?;
        let d = rng.gen_range(1..=2u32);
        let f = random_homogeneous(&mut rng, &ring, d, 2);
        stats.instances += 1;
        let q = p as u64;
        let ab = a.intersect(&b)?;
        let a_b = a.colon(&b)?;
        let mut shuffled = a.gens().to_vec();
        shuffled.shuffle(&mut rng);
        let checks: Vec<(&str, bool)> = vec![
            (
                "(A:B):C = A:BC",
                a_b.colon(&c)?.equals(&a.colon(&b.product(&c)?)?)?,
            ),
            ("B(A:B) in A", a.contains_ideal(&b.product(&a_b)?)?),
            ("AB in A cap B", ab.contains_ideal(&a.product(&b)?)?),
            ("A cap B in A", a.contains_ideal(&ab)?),
            ("A cap B in B", b.contains_ideal(&ab)?),
            (
                "(A cap B)^[q] = A^[q] cap B^[q]",
                ab.bracket_power(q)?
                    .equals(&a.bracket_power(q)?.intersect(&b.bracket_power(q)?)?)?,
            ),
            (
                "(A:f)^[q] = A^[q]:f^q",
                a.colon_poly(&f)?
                    .bracket_power(q)?
                    .equals(&a.bracket_power(q)?.colon_poly(&f.pow(q))?)?,
            ),
            (
                "reduced basis independent of generator order",
                IdealHandle::new(&ring, shuffled)?.gb()?.elements() == a.gb()?.elements(),
            ),
        ];
        for (name, ok) in checks {
            stats.identities_checked += 1;
            if !ok {
                stats.failures.push(format!(
                    "instance {idx}: {name} fails for A = {a}, B = {b}, C = {c}, f = {f}"
                ));
            }
        }
    }
    Ok(stats)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RedNumberStats {
    pub trials: usize,
    /// Draws where `J` was not generated by a system of parameters.
    pub skipped: usize,
    pub reduction_number_one: usize,
    pub reduction_number_above_one: Vec<String>,
}

/// Draws `J = (l1, l2)` from random linear forms in the Fermat cubic
/// (`τ = m`) or quintic (`τ = m^3`) over `F_7`, and `u` a random element of
/// `J : τ`, which is `J*` for parameter ideals of these Gorenstein rings.
/// Records whether `I^2 = JI` for `I = J + (u)`. Nothing is asserted.
pub fn reduction_number_experiment(seed: u64, count: usize) -> Result<RedNumberStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = RedNumberStats::default();
    let rings = [
        (
            QuotientRing::parse(7, &["x", "y", "z"], &["x^3 + y^3 + z^3"])?,
            1u32,
        ),
        (
            QuotientRing::parse(7, &["x", "y", "z"], &["x^5 + y^5 + z^5"])?,
            3u32,
        ),
    ];
    for _ in 0..count {
        let (ring, t) = &rings[rng.gen_range(0..rings.len())];
        let m = IdealHandle::maximal(ring);
        let l1 = random_homogeneous(&mut rng, ring, 1, 3);
        let l2 = random_homogeneous(&mut rng, ring, 1, 3);
        let j = IdealHandle::new(ring, vec![l1, l2])?;
        let deg = ring.relations()[0].total_degree().unwrap_or(0);
        // a parameter ideal of the surface contains a power of m
        if j.gens().iter().any(|g| g.is_zero()) || !j.contains_ideal(&m.power(deg + 1)?)? {
            stats.skipped += 1;
            continue;
        }
        let jstar = j.colon(&m.power(*t)?)?;
        let cands: Vec<Polynomial> = jstar
            .presentation()?
            .into_iter()
            .filter(|g| !j.contains(g).unwrap_or(true))
            .collect();
        if cands.is_empty() {
            stats.skipped += 1;
            continue;
        }
        let mut u = Polynomial::zero(ring.poly_ring());
        for g in &cands {
            let d = g.total_degree().unwrap_or(0);
            if Some(d) == cands[0].total_degree() {
                u = &u + &g.scale(rng.gen_range(0..7));
            }
        }
        if j.contains(&u)? {
            u = cands[0].clone();
        }
        let i = j.sum(&IdealHandle::principal(ring, u.clone())?)?;
        stats.trials += 1;
        if i.power(2)?.equals(&j.product(&i)?)? {
            stats.reduction_number_one += 1;
        } else {
            stats
                .reduction_number_above_one
                .push(format!("J = {j}, u = {u} over {}", ring.relations()[0]));
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batch_agrees() {
        let s = oracle_agreement(11, 20).unwrap();
        assert_eq!(s.instances, 20);
        assert!(s.disagreements.is_empty(), "{:?}", s.disagreements);
        assert!(s.membership_checks > 20 * 13);
    }

    #[test]
    fn identities_hold_on_a_small_batch() {
        let s = identity_suite(3, 10).unwrap();
        assert_eq!(s.identities_checked, 80);
        assert!(s.failures.is_empty(), "{:?}", s.failures);
    }

    #[test]
    fn reduction_number_experiment_runs() {
        let s = reduction_number_experiment(1, 6).unwrap();
        assert_eq!(s.trials + s.skipped, 6);
    }

    #[test]
    fn instances_are_reproducible() {
        let a = random_instance(&mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = random_instance(&mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a.to_string(), b.to_string());
        assert!(a.is_homogeneous());
    }
}
