//! Ideal calculus in a quotient ring `R = S/(F)`.
//!
//! An ideal of `R` is represented by an ideal of the ambient polynomial ring
//! `S` that contains the relations `F`. All algorithms run in `S`: sums and
//! products act on generators, intersections and colons go through elimination
//! of a tag variable, and equality compares reduced Gröbner bases.

mod linalg;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::PrimeChar;
use crate::groebner::{buchberger, eliminate_into, normal_form, GbLimits, GroebnerBasis};
use crate::poly::{parse_poly, same_ring, Monomial, MonomialOrder, PolyRing, Polynomial};

use linalg::EchelonSpan;

/// `R = F_p[vars] / (relations)`.
#[derive(Debug)]
pub struct QuotientRing {
    poly: Arc<PolyRing>,
    relations: Vec<Polynomial>,
    limits: GbLimits,
    relation_gb: OnceLock<GroebnerBasis>,
}

impl PartialEq for QuotientRing {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.poly, &other.poly) && self.relations == other.relations
    }
}

impl QuotientRing {
    pub fn new(
        poly: Arc<PolyRing>,
        relations: Vec<Polynomial>,
        limits: GbLimits,
    ) -> Result<Arc<Self>> {
        if poly.order() != MonomialOrder::Grevlex {
            return Err(Error::usage("quotient rings use the grevlex order"));
        }
        for f in &relations {
            if !same_ring(f.ring(), &poly) {
                return Err(Error::usage("relation lives in a different ring"));
            }
            if f.is_zero() {
                return Err(Error::usage("relations must be nonzero"));
            }
        }
        Ok(Arc::new(QuotientRing {
            poly,
            relations,
            limits,
            relation_gb: OnceLock::new(),
        }))
    }

    /// Convenience constructor from variable names and relation sources.
    pub fn parse(p: u32, vars: &[&str], relations: &[&str]) -> Result<Arc<Self>> {
        Self::parse_with_limits(p, vars, relations, GbLimits::default())
    }

    pub fn parse_with_limits(
        p: u32,
        vars: &[&str],
        relations: &[&str],
        limits: GbLimits,
    ) -> Result<Arc<Self>> {
        let poly = PolyRing::new(
            vars.iter().map(|s| s.to_string()).collect(),
            PrimeChar::new(p)?,
            MonomialOrder::Grevlex,
        )?;
        let rels = relations
            .iter()
            .map(|s| parse_poly(s, &poly))
            .collect::<Result<Vec<_>>>()?;
        QuotientRing::new(poly, rels, limits)
    }

    pub fn poly_ring(&self) -> &Arc<PolyRing> {
        &self.poly
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn limits(&self) -> &GbLimits {
        &self.limits
    }

    pub fn characteristic(&self) -> PrimeChar {
        self.poly.characteristic()
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn parse_poly(&self, src: &str) -> Result<Polynomial> {
        parse_poly(src, &self.poly)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.poly, i)
    }

    fn relation_gb(&self) -> Result<&GroebnerBasis> {
        if let Some(gb) = self.relation_gb.get() {
            return Ok(gb);
        }
        let gb = buchberger(&self.poly, &self.relations, &self.limits)?;
        let _ = self.relation_gb.set(gb);
        Ok(self.relation_gb.get().expect("just set"))
    }

    /// True if `f` is zero in `R`.
    pub fn is_zero_in_ring(&self, f: &Polynomial) -> Result<bool> {
        Ok(normal_form(f, self.relation_gb()?)?.is_zero())
    }

    pub fn is_graded(&self) -> bool {
        self.relations.iter().all(|f| f.is_homogeneous())
    }
}

fn same_quotient(a: &Arc<QuotientRing>, b: &Arc<QuotientRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// An ideal of a [`QuotientRing`] with a lazily computed reduced Gröbner basis.
#[derive(Clone)]
pub struct IdealHandle {
    ring: Arc<QuotientRing>,
    gens: Vec<Polynomial>,
    gb: OnceLock<GroebnerBasis>,
}

impl fmt::Debug for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdealHandle{self}")
    }
}

impl fmt::Display for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// Removes zero and repeated generators, keeping first occurrences.
fn dedup_gens(gens: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !g.is_zero() && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// All monomials of total degree `d` in `n` variables, in no particular order.
pub(crate) fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(Monomial::from_exponents(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

impl IdealHandle {
    pub fn new(ring: &Arc<QuotientRing>, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            if !same_ring(g.ring(), &ring.poly) {
                return Err(Error::usage("generator lives in a different ring"));
            }
        }
        Ok(IdealHandle {
            ring: ring.clone(),
            gens: dedup_gens(gens),
            gb: OnceLock::new(),
        })
    }

    pub fn from_strs(ring: &Arc<QuotientRing>, gens: &[&str]) -> Result<Self> {
        let polys = gens
            .iter()
            .map(|s| ring.parse_poly(s))
            .collect::<Result<Vec<_>>>()?;
        IdealHandle::new(ring, polys)
    }

    pub fn zero(ring: &Arc<QuotientRing>) -> Self {
        IdealHandle {
            ring: ring.clone(),
            gens: Vec::new(),
            gb: OnceLock::new(),
        }
    }

    pub fn unit(ring: &Arc<QuotientRing>) -> Self {
        IdealHandle {
            ring: ring.clone(),
            gens: vec![Polynomial::one(&ring.poly)],
            gb: OnceLock::new(),
        }
    }

    /// The ideal generated by all variables.
    pub fn maximal(ring: &Arc<QuotientRing>) -> Self {
        let gens = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        IdealHandle {
            ring: ring.clone(),
            gens,
            gb: OnceLock::new(),
        }
    }

    pub fn principal(ring: &Arc<QuotientRing>, f: Polynomial) -> Result<Self> {
        IdealHandle::new(ring, vec![f])
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    /// Generators as supplied (relations excluded).
    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Generators of the ambient ideal: user generators followed by the relations.
    pub fn ambient_gens(&self) -> Vec<Polynomial> {
        let mut v = self.gens.clone();
        v.extend(self.ring.relations.iter().cloned());
        v
    }

    /// Reduced Gröbner basis of the ambient ideal under the ring's order.
    pub fn gb(&self) -> Result<&GroebnerBasis> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb);
        }
        let gb = buchberger(&self.ring.poly, &self.ambient_gens(), &self.ring.limits)?;
        // another thread may have won the race; both results are identical
        let _ = self.gb.set(gb);
        Ok(self.gb.get().expect("just set"))
    }

    fn check_ring(&self, other: &IdealHandle) -> Result<()> {
        if !same_quotient(&self.ring, &other.ring) {
            return Err(Error::usage("ideals belong to different rings"));
        }
        Ok(())
    }

    fn check_poly(&self, f: &Polynomial) -> Result<()> {
        if !same_ring(f.ring(), &self.ring.poly) {
            return Err(Error::usage("polynomial belongs to a different ring"));
        }
        Ok(())
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.gb()?.is_unit())
    }

    /// True if the ideal is zero in `R`, i.e. contained in the relations.
    pub fn is_zero_in_ring(&self) -> Result<bool> {
        for g in &self.gens {
            if !self.ring.is_zero_in_ring(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        self.check_poly(f)?;
        if f.is_zero() {
            return Ok(true);
        }
        self.gb()?.contains(f)
    }

    /// `other ⊆ self`
    pub fn contains_ideal(&self, other: &IdealHandle) -> Result<bool> {
        self.check_ring(other)?;
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First generator of `other` not contained in `self`.
    pub fn non_member_witness(&self, other: &IdealHandle) -> Result<Option<Polynomial>> {
        self.check_ring(other)?;
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(Some(g.clone()));
            }
        }
        Ok(None)
    }

    pub fn equals(&self, other: &IdealHandle) -> Result<bool> {
        self.check_ring(other)?;
        Ok(self.gb()?.elements() == other.gb()?.elements())
    }

    /// `other ⊆ self` after localizing at the maximal ideal `m` of the origin.
    ///
    /// Decided by `(self : other) ⊄ m`. For homogeneous ideals of a graded
    /// ring this coincides with affine containment.
    pub fn locally_contains_ideal(&self, other: &IdealHandle) -> Result<bool> {
        self.check_ring(other)?;
        if self.contains_ideal(other)? || (self.is_homogeneous() && other.is_homogeneous()) {
            return self.contains_ideal(other);
        }
        let m = IdealHandle::maximal(&self.ring);
        if m.is_unit()? {
            // the origin is not a point of the ring; every localization is zero
            return Ok(true);
        }
        Ok(!m.contains_ideal(&self.colon(other)?)?)
    }

    pub fn locally_contains(&self, f: &Polynomial) -> Result<bool> {
        self.locally_contains_ideal(&IdealHandle::principal(&self.ring, f.clone())?)
    }

    /// First generator of `other` not in `self` after localizing at `m`.
    pub fn local_non_member_witness(&self, other: &IdealHandle) -> Result<Option<Polynomial>> {
        self.check_ring(other)?;
        for g in &other.gens {
            if !self.locally_contains(g)? {
                return Ok(Some(g.clone()));
            }
        }
        Ok(None)
    }

    pub fn locally_equals(&self, other: &IdealHandle) -> Result<bool> {
        Ok(self.locally_contains_ideal(other)? && other.locally_contains_ideal(self)?)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous()) && self.ring.is_graded()
    }

    pub fn sum(&self, other: &IdealHandle) -> Result<IdealHandle> {
        self.check_ring(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        IdealHandle::new(&self.ring, gens)
    }

    pub fn product(&self, other: &IdealHandle) -> Result<IdealHandle> {
        self.check_ring(other)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a * b);
            }
        }
        IdealHandle::new(&self.ring, gens)
    }

    /// `f · self`
    pub fn mul_poly(&self, f: &Polynomial) -> Result<IdealHandle> {
        self.check_poly(f)?;
        let gens = self.gens.iter().map(|g| g * f).collect();
        IdealHandle::new(&self.ring, gens)
    }

    pub fn power(&self, n: u32) -> Result<IdealHandle> {
        let mut acc = IdealHandle::unit(&self.ring);
        for _ in 0..n {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// `self^[q]`: generated by `q`-th powers of the generators. The relations
    /// stay as they are, so the result is an ideal of `R`.
    pub fn bracket_power(&self, q: u64) -> Result<IdealHandle> {
        if self.ring.characteristic().log_of_power(q).is_none() {
            return Err(Error::usage(format!(
                "{q} is not a power of {}",
                self.ring.characteristic()
            )));
        }
        let gens = self
            .gens
            .iter()
            .map(|g| g.frobenius_power(q))
            .collect::<Result<Vec<_>>>()?;
        IdealHandle::new(&self.ring, gens)
    }

    fn intersect_ambient(&self, a: &[Polynomial], b: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if a.is_empty() || b.is_empty() {
            return Ok(Vec::new());
        }
        let base = &self.ring.poly;
        let ext = base.with_tags(1)?;
        let t = Polynomial::var(&ext, 0);
        let one_minus_t = &Polynomial::one(&ext) - &t;
        let mut gens = Vec::with_capacity(a.len() + b.len());
        for g in a {
            gens.push(&t * &g.embed(&ext, 1));
        }
        for g in b {
            gens.push(&one_minus_t * &g.embed(&ext, 1));
        }
        eliminate_into(&gens, 1, base, &self.ring.limits)
    }

    pub fn intersect(&self, other: &IdealHandle) -> Result<IdealHandle> {
        self.check_ring(other)?;
        if self.contains_ideal(other)? {
            return Ok(other.clone());
        }
        if other.contains_ideal(self)? {
            return Ok(self.clone());
        }
        let gens = self.intersect_ambient(&self.ambient_gens(), &other.ambient_gens())?;
        IdealHandle::new(&self.ring, gens)
    }

    /// `self : g`, computed as `(self ∩ (g)) / g` in the ambient ring.
    pub fn colon_poly(&self, g: &Polynomial) -> Result<IdealHandle> {
        self.check_poly(g)?;
        if self.contains(g)? {
            return Ok(IdealHandle::unit(&self.ring));
        }
        let inter = self.intersect_ambient(&self.ambient_gens(), std::slice::from_ref(g))?;
        let gens = inter
            .iter()
            .map(|h| h.div_exact(g).expect("elements of (g) are divisible by g"))
            .collect();
        IdealHandle::new(&self.ring, gens)
    }

    /// `self : other = ∩_g (self : g)` over the generators of `other`.
    ///
    /// Generators that vanish in `R` are skipped; if none remain, `other` is the
    /// zero ideal and the colon is all of `R`.
    pub fn colon(&self, other: &IdealHandle) -> Result<IdealHandle> {
        self.check_ring(other)?;
        let mut acc: Option<IdealHandle> = None;
        for g in &other.gens {
            if self.ring.is_zero_in_ring(g)? {
                continue;
            }
            let c = self.colon_poly(g)?;
            acc = Some(match acc {
                None => c,
                Some(prev) => prev.intersect(&c)?,
            });
        }
        Ok(acc.unwrap_or_else(|| IdealHandle::unit(&self.ring)))
    }

    /// A minimal homogeneous generating set of this ideal of `R`, chosen
    /// greedily degree by degree from the supplied generators.
    pub fn graded_min_gens(&self) -> Result<Vec<Polynomial>> {
        graded_min_gens_of(&self.ring, &self.gens)
    }

    /// Canonical presentation for reports: minimal generators for graded
    /// ideals, otherwise the reduced basis without elements of `(F)`.
    pub fn presentation(&self) -> Result<Vec<Polynomial>> {
        let gb = self.gb()?.elements().to_vec();
        if gb.iter().all(|g| g.is_homogeneous()) && self.ring.is_graded() {
            return graded_min_gens_of(&self.ring, &gb);
        }
        let mut out = Vec::new();
        for g in gb {
            if !self.ring.is_zero_in_ring(&g)? {
                out.push(g);
            }
        }
        Ok(out)
    }
}

fn graded_min_gens_of(ring: &Arc<QuotientRing>, gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    if let Some(g) = gens.iter().find(|g| !g.is_homogeneous()) {
        return Err(Error::Unsupported(format!(
            "minimal generators need homogeneous input; `{g}` is not"
        )));
    }
    if !ring.is_graded() {
        return Err(Error::Unsupported(
            "minimal generators need homogeneous relations".into(),
        ));
    }
    let mut cands: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
    cands.sort_by_key(|g| g.total_degree().unwrap_or(0));
    let n = ring.nvars();
    let mut chosen: Vec<Polynomial> = Vec::new();
    let mut i = 0;
    while i < cands.len() {
        let d = cands[i].total_degree().unwrap_or(0);
        let mut span = EchelonSpan::new(ring.characteristic());
        let lower = chosen
            .iter()
            .chain(ring.relations.iter())
            .filter(|h| h.total_degree().unwrap_or(0) <= d);
        for h in lower {
            let hd = h.total_degree().unwrap_or(0);
            for m in monomials_of_degree(n, d - hd) {
                span.insert(&h.mul_term(&m, 1));
            }
        }
        while i < cands.len() && cands[i].total_degree().unwrap_or(0) == d {
            if span.insert(cands[i]) {
                chosen.push(cands[i].clone());
            }
            i += 1;
        }
    }
    Ok(chosen)
}

pub fn ideal_sum(a: &IdealHandle, b: &IdealHandle) -> Result<IdealHandle> {
    a.sum(b)
}

pub fn ideal_product(a: &IdealHandle, b: &IdealHandle) -> Result<IdealHandle> {
    a.product(b)
}

pub fn bracket_power(a: &IdealHandle, q: u64) -> Result<IdealHandle> {
    a.bracket_power(q)
}

pub fn ideal_intersect(a: &IdealHandle, b: &IdealHandle) -> Result<IdealHandle> {
    a.intersect(b)
}

pub fn ideal_colon(a: &IdealHandle, b: &IdealHandle) -> Result<IdealHandle> {
    a.colon(b)
}

pub fn ideal_contains(a: &IdealHandle, f: &Polynomial) -> Result<bool> {
    a.contains(f)
}

pub fn ideal_equal(a: &IdealHandle, b: &IdealHandle) -> Result<bool> {
    a.equals(b)
}

/// Ordinary power; negative exponents are rejected.
pub fn ideal_power(a: &IdealHandle, n: i64) -> Result<IdealHandle> {
    let n = u32::try_from(n).map_err(|_| Error::usage(format!("invalid ideal power {n}")))?;
    a.power(n)
}

pub fn graded_min_gens(a: &IdealHandle) -> Result<Vec<Polynomial>> {
    a.graded_min_gens()
}
