//! Buchberger's algorithm, reduced Gröbner bases, normal forms and elimination.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{merge_add, same_ring, Monomial, MonomialOrder, PolyRing, Polynomial};

/// Caps that turn runaway computations into [`Error::Resource`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GbLimits {
    pub max_basis: usize,
    pub max_degree: u32,
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits {
            max_basis: 10_000,
            max_degree: 512,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    elements: Vec<Polynomial>,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// True when the basis generates the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(normal_form(f, self)?.is_zero())
    }
}

/// Remainder of `terms` after complete reduction by `basis` (all monic).
fn reduce_terms(
    ring: &Arc<PolyRing>,
    mut work: Vec<(Monomial, u32)>,
    basis: &[Polynomial],
) -> Vec<(Monomial, u32)> {
    let ch = ring.characteristic();
    let mut rem: Vec<(Monomial, u32)> = Vec::new();
    // `work` is kept sorted; its head is processed and either cancelled or moved to `rem`.
    let mut start = 0;
    while start < work.len() {
        let (m, c) = &work[start];
        let divisor = basis
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(m)));
        match divisor {
            None => {
                rem.push(work[start].clone());
                start += 1;
            }
            Some(g) => {
                let lm = g.leading_monomial().expect("nonzero");
                let t = lm.quotient_of(m).expect("divides");
                let factor = ch.neg(*c);
                let tail: Vec<(Monomial, u32)> = g.terms()[1..]
                    .iter()
                    .map(|(gm, gc)| (gm.mul(&t), *gc))
                    .collect();
                work = merge_add(ring, &work[start + 1..], &tail, factor);
                start = 0;
            }
        }
    }
    rem
}

fn check_same(f: &Polynomial, ring: &Arc<PolyRing>) -> Result<()> {
    if !same_ring(f.ring(), ring) {
        return Err(Error::usage(
            "polynomial and Gröbner basis use different rings or orders",
        ));
    }
    Ok(())
}

/// Complete remainder of `f` modulo `gb`. Zero iff `f` lies in the ideal.
pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
    check_same(f, &gb.ring)?;
    let terms = reduce_terms(&gb.ring, f.terms().to_vec(), &gb.elements);
    Ok(Polynomial::from_sorted_terms(&gb.ring, terms))
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let lf = f.leading_monomial().expect("nonzero");
    let lg = g.leading_monomial().expect("nonzero");
    let l = lf.lcm(lg);
    let a = f.mul_term(&lf.quotient_of(&l).expect("lcm"), 1);
    let b = g.mul_term(&lg.quotient_of(&l).expect("lcm"), 1);
    &a - &b
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    lcm_degree: u32,
    i: usize,
    j: usize,
}

/// Reduced Gröbner basis of the ideal generated by `gens`, in the order of `ring`.
///
/// Pairs are selected by minimal lcm degree, ties broken by generator index.
/// Both Buchberger criteria (coprime leading monomials, chain criterion) are
/// applied. The output is independent of the input order.
pub fn buchberger(
    ring: &Arc<PolyRing>,
    gens: &[Polynomial],
    limits: &GbLimits,
) -> Result<GroebnerBasis> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        check_same(g, ring)?;
        if !g.is_zero() {
            basis.push(g.monic());
        }
    }
    if basis.iter().any(|g| g.is_constant()) {
        return Ok(GroebnerBasis {
            ring: ring.clone(),
            elements: vec![Polynomial::one(ring)],
            reduced: true,
        });
    }
    for g in &basis {
        check_degree(g, limits)?;
    }

    let mut pending: BTreeSet<PairKey> = BTreeSet::new();
    let lcm_deg = |b: &[Polynomial], i: usize, j: usize| {
        b[i].leading_monomial()
            .unwrap()
            .lcm(b[j].leading_monomial().unwrap())
            .degree()
    };
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert(PairKey {
                lcm_degree: lcm_deg(&basis, i, j),
                i,
                j,
            });
        }
    }

    while let Some(key) = pending.pop_first() {
        let (i, j) = (key.i, key.j);
        let lmi = basis[i].leading_monomial().unwrap().clone();
        let lmj = basis[j].leading_monomial().unwrap().clone();
        if lmi.is_coprime(&lmj) {
            continue;
        }
        let l = lmi.lcm(&lmj);
        let chain = (0..basis.len()).any(|k| {
            if k == i || k == j || !basis[k].leading_monomial().unwrap().divides(&l) {
                return false;
            }
            let ik = pair_key(&basis, i, k, lcm_deg);
            let jk = pair_key(&basis, j, k, lcm_deg);
            !pending.contains(&ik) && !pending.contains(&jk)
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let h = reduce_terms(ring, s.into_terms(), &basis);
        if h.is_empty() {
            continue;
        }
        let h = Polynomial::from_sorted_terms(ring, h).monic();
        if h.is_constant() {
            return Ok(GroebnerBasis {
                ring: ring.clone(),
                elements: vec![Polynomial::one(ring)],
                reduced: true,
            });
        }
        check_degree(&h, limits)?;
        basis.push(h);
        if basis.len() > limits.max_basis {
            return Err(Error::Resource(format!(
                "Gröbner basis exceeded {} elements",
                limits.max_basis
            )));
        }
        let n = basis.len() - 1;
        for k in 0..n {
            pending.insert(PairKey {
                lcm_degree: lcm_deg(&basis, k, n),
                i: k,
                j: n,
            });
        }
    }

    Ok(GroebnerBasis {
        ring: ring.clone(),
        elements: interreduce(ring, basis),
        reduced: true,
    })
}

fn pair_key(
    basis: &[Polynomial],
    a: usize,
    b: usize,
    lcm_deg: impl Fn(&[Polynomial], usize, usize) -> u32,
) -> PairKey {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    PairKey {
        lcm_degree: lcm_deg(basis, i, j),
        i,
        j,
    }
}

fn check_degree(g: &Polynomial, limits: &GbLimits) -> Result<()> {
    let d = g.total_degree().unwrap_or(0);
    if d > limits.max_degree {
        return Err(Error::Resource(format!(
            "basis element of degree {d} exceeds the degree cap {}",
            limits.max_degree
        )));
    }
    Ok(())
}

/// Minimalize, then fully reduce every element by the others; sorted by
/// leading monomial, descending.
fn interreduce(ring: &Arc<PolyRing>, mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    let order = ring.order();
    basis.sort_by(|a, b| {
        order.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
    });
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis {
        let lm = g.leading_monomial().unwrap();
        if !minimal
            .iter()
            .any(|h| h.leading_monomial().unwrap().divides(lm))
        {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let g = &minimal[k];
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, h)| h.clone())
            .collect();
        let head = g.terms()[0].clone();
        let tail = reduce_terms(ring, g.terms()[1..].to_vec(), &others);
        let mut terms = vec![head];
        terms.extend(tail);
        out.push(Polynomial::from_sorted_terms(ring, terms).monic());
    }
    out.reverse();
    out
}

/// Generators of the elimination ideal `(gens) ∩ F_p[x_k, ..., x_{n-1}]`,
/// expressed in a ring on the remaining variables with the grevlex order.
pub fn eliminate(gens: &[Polynomial], k: usize, limits: &GbLimits) -> Result<Vec<Polynomial>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let ring = first.ring();
    if k > ring.nvars() {
        return Err(Error::usage(format!(
            "cannot eliminate {k} variables from a ring with {}",
            ring.nvars()
        )));
    }
    let target = PolyRing::new(
        ring.names()[k..].to_vec(),
        ring.characteristic(),
        MonomialOrder::Grevlex,
    )?;
    eliminate_into(gens, k, &target, limits)
}

/// As [`eliminate`], mapping the result into `target`, whose variables must be
/// the last `n - k` variables of the input ring.
pub fn eliminate_into(
    gens: &[Polynomial],
    k: usize,
    target: &Arc<PolyRing>,
    limits: &GbLimits,
) -> Result<Vec<Polynomial>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let src = first.ring();
    if k > src.nvars() || target.nvars() + k != src.nvars() {
        return Err(Error::usage(format!(
            "cannot eliminate {k} variables from a ring with {} into one with {}",
            src.nvars(),
            target.nvars()
        )));
    }
    let block = src.with_order(MonomialOrder::Block(k))?;
    let moved: Vec<Polynomial> = gens.iter().map(|g| g.reorder(&block)).collect();
    let gb = buchberger(&block, &moved, limits)?;
    Ok(gb
        .elements()
        .iter()
        .filter_map(|g| g.project(target, k))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeChar;
    use crate::poly::{parse_poly, strategies};
    use proptest::prelude::*;

    fn ring(p: u32, names: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(
            names.iter().map(|s| s.to_string()).collect(),
            PrimeChar::new(p).unwrap(),
            MonomialOrder::Grevlex,
        )
        .unwrap()
    }

    fn polys(r: &Arc<PolyRing>, src: &[&str]) -> Vec<Polynomial> {
        src.iter().map(|s| parse_poly(s, r).unwrap()).collect()
    }

    fn gb_strings(r: &Arc<PolyRing>, src: &[&str]) -> Vec<String> {
        buchberger(r, &polys(r, src), &GbLimits::default())
            .unwrap()
            .elements()
            .iter()
            .map(|g| g.to_string())
            .collect()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let r = ring(7, &["x", "y"]);
        assert_eq!(gb_strings(&r, &["x^2", "x*y"]), ["x^2", "x*y"]);
    }

    #[test]
    fn one_step_reduction() {
        let r = ring(7, &["x", "y"]);
        assert_eq!(gb_strings(&r, &["x + y", "y"]), ["x", "y"]);
    }

    #[test]
    fn substitution_kills_variables() {
        let r = ring(7, &["x", "y", "z"]);
        assert_eq!(
            gb_strings(&r, &["x^5 + y^5 + z^5", "y", "z"]),
            ["x^5", "y", "z"]
        );
    }

    #[test]
    fn empty_and_unit_inputs() {
        let r = ring(7, &["x", "y"]);
        assert!(buchberger(&r, &[], &GbLimits::default())
            .unwrap()
            .elements()
            .is_empty());
        let unit = buchberger(&r, &polys(&r, &["x", "x + 1"]), &GbLimits::default()).unwrap();
        assert!(unit.is_unit());
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(7, &["x", "y", "z"]);
        let gb = buchberger(&r, &polys(&r, &["x*y*z"]), &GbLimits::default()).unwrap();
        let f = parse_poly("x^2 + x*y*z", &r).unwrap();
        assert_eq!(normal_form(&f, &gb).unwrap().to_string(), "x^2");
        for g in gb.elements() {
            assert!(normal_form(g, &gb).unwrap().is_zero());
        }
        let other = ring(7, &["x", "y", "z"])
            .with_order(MonomialOrder::Lex)
            .unwrap();
        assert!(normal_form(&Polynomial::var(&other, 0), &gb).is_err());
    }

    #[test]
    fn decic_witness_not_in_perturbed_reduction() {
        let r = ring(7, &["x", "y", "z"]);
        let gens = polys(
            &r,
            &[
                "x^5 + x*(x*y^3*z^6)",
                "y^7 + y*(x*y^3*z^6)",
                "z^8 + z*(x*y^3*z^6)",
                "x^10 + y^10 + z^10",
            ],
        );
        let gb = buchberger(&r, &gens, &GbLimits::default()).unwrap();
        let w = parse_poly("x^5*z^2", &r).unwrap();
        assert!(!normal_form(&w, &gb).unwrap().is_zero());
    }

    #[test]
    fn elimination_examples() {
        let r = ring(7, &["t", "x", "y"]);
        let lim = GbLimits::default();
        let e = eliminate(&polys(&r, &["t*x", "(1 - t)*y"]), 1, &lim).unwrap();
        assert_eq!(e.iter().map(|g| g.to_string()).collect::<Vec<_>>(), ["x*y"]);
        let e = eliminate(&polys(&r, &["t - x"]), 1, &lim).unwrap();
        assert!(e.is_empty());
        // y = t*(x*y) - y*(t*x - 1)
        let e = eliminate(&polys(&r, &["t*x - 1", "x*y"]), 1, &lim).unwrap();
        assert_eq!(e.iter().map(|g| g.to_string()).collect::<Vec<_>>(), ["y"]);
        assert!(eliminate(&polys(&r, &["t"]), 4, &lim).is_err());
    }

    #[test]
    fn degree_cap_is_a_resource_error() {
        let r = ring(7, &["x", "y"]);
        let lim = GbLimits {
            max_basis: 10_000,
            max_degree: 3,
        };
        let err = buchberger(&r, &polys(&r, &["x^5 + y"]), &lim).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    fn small_ring() -> Arc<PolyRing> {
        ring(7, &["x", "y", "z"])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reduced_basis_is_canonical(gens in prop::collection::vec(strategies::poly(small_ring(), 3, 3), 1..4)) {
            let lim = GbLimits::default();
            let r = small_ring();
            let gb = buchberger(&r, &gens, &lim).unwrap();
            // idempotence
            prop_assert_eq!(&buchberger(&r, gb.elements(), &lim).unwrap(), &gb);
            // permutation invariance
            let mut rev = gens.clone();
            rev.reverse();
            prop_assert_eq!(&buchberger(&r, &rev, &lim).unwrap(), &gb);
            // reducedness
            for (i, g) in gb.elements().iter().enumerate() {
                prop_assert_eq!(g.leading_coefficient(), Some(1));
                for (j, h) in gb.elements().iter().enumerate() {
                    if i != j {
                        let lm = h.leading_monomial().unwrap();
                        prop_assert!(g.terms().iter().all(|(m, _)| !lm.divides(m)));
                    }
                }
            }
            // S-pairs reduce to zero
            for i in 0..gb.elements().len() {
                for j in 0..i {
                    let s = s_polynomial(&gb.elements()[i], &gb.elements()[j]);
                    prop_assert!(normal_form(&s, &gb).unwrap().is_zero());
                }
            }
        }

        #[test]
        fn combinations_of_generators_reduce_to_zero(
            gens in prop::collection::vec(strategies::poly(small_ring(), 3, 3), 1..4),
            mults in prop::collection::vec(strategies::poly(small_ring(), 2, 3), 4),
        ) {
            let r = small_ring();
            let gb = buchberger(&r, &gens, &GbLimits::default()).unwrap();
            let mut f = Polynomial::zero(&r);
            for (g, m) in gens.iter().zip(&mults) {
                f = &f + &(g * m);
            }
            prop_assert!(normal_form(&f, &gb).unwrap().is_zero());
            // linearity of the normal form
            let a = &mults[0] + &mults[1];
            let lhs = normal_form(&a, &gb).unwrap();
            let rhs = &normal_form(&mults[0], &gb).unwrap() + &normal_form(&mults[1], &gb).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
