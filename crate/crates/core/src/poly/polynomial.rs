use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeChar};

use super::{Monomial, MonomialOrder};

/// Ambient polynomial ring F_p[x_0, ..., x_{n-1}] with a fixed monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    names: Vec<String>,
    ch: PrimeChar,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(names: Vec<String>, ch: PrimeChar, order: MonomialOrder) -> Result<Arc<Self>> {
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::usage("empty variable name"));
            }
            if names[..i].contains(n) {
                return Err(Error::usage(format!("duplicate variable name `{n}`")));
            }
        }
        if let MonomialOrder::Block(k) = order {
            if k > names.len() {
                return Err(Error::usage(format!(
                    "block size {k} exceeds {} variables",
                    names.len()
                )));
            }
        }
        Ok(Arc::new(PolyRing { names, ch, order }))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn characteristic(&self) -> PrimeChar {
        self.ch
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same variables and characteristic under a different order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Arc<Self>> {
        PolyRing::new(self.names.clone(), self.ch, order)
    }

    /// Prepends `k` tag variables and switches to the block order eliminating them.
    pub fn with_tags(&self, k: usize) -> Result<Arc<Self>> {
        let mut names: Vec<String> = (0..k).map(|i| format!("@t{i}")).collect();
        names.extend(self.names.iter().cloned());
        PolyRing::new(names, self.ch, MonomialOrder::Block(k))
    }
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A polynomial in canonical form: terms strictly descending in the ring's
/// order, no zero coefficients.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, u32)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic; fails with a usage error on ring mismatch.
pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: ArithOp) -> Result<Polynomial> {
    if !same_ring(&a.ring, &b.ring) {
        return Err(Error::usage("polynomials belong to different rings"));
    }
    Ok(match op {
        ArithOp::Add => a.add_poly(b),
        ArithOp::Sub => a.sub_poly(b),
        ArithOp::Mul => a.mul_poly(b),
    })
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: i64) -> Self {
        let c = ring.ch.reduce(c);
        let terms = if c == 0 {
            Vec::new()
        } else {
            vec![(Monomial::one(ring.nvars()), c)]
        };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i), 1)
    }

    pub fn monomial(ring: &Arc<PolyRing>, mono: Monomial, c: u32) -> Self {
        assert_eq!(mono.nvars(), ring.nvars(), "monomial arity mismatch");
        let c = c % ring.ch.get();
        let terms = if c == 0 { Vec::new() } else { vec![(mono, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(ring: &Arc<PolyRing>, mut terms: Vec<(Monomial, u32)>) -> Self {
        let order = ring.order;
        let ch = ring.ch;
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c % ch.get();
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = ch.add(*lc, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| *c != 0);
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub(crate) fn from_sorted_terms(ring: &Arc<PolyRing>, terms: Vec<(Monomial, u32)>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<(Monomial, u32)> {
        self.terms
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Monomial, FieldElement)> + '_ {
        let ch = self.ring.ch;
        self.terms
            .iter()
            .map(move |(m, c)| (m, FieldElement::new(*c as i64, ch)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self) -> Option<u32> {
        self.terms.first().map(|(_, c)| *c)
    }

    /// Maximal total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// True for the zero polynomial and for polynomials whose terms share one degree.
    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(n, _)| n.degree() == m.degree()),
        }
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            None | Some(1) => self.clone(),
            Some(c) => {
                let inv = self.ring.ch.inv(c).expect("nonzero leading coefficient");
                self.scale(inv)
            }
        }
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let ch = self.ring.ch;
        let c = c % ch.get();
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), ch.mul(*a, c)))
                .collect(),
        }
    }

    /// `c * mono * self`
    pub fn mul_term(&self, mono: &Monomial, c: u32) -> Polynomial {
        let ch = self.ring.ch;
        let c = c % ch.get();
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), ch.mul(*a, c)))
                .collect(),
        }
    }

    fn check_ring(&self, other: &Polynomial) {
        assert!(
            same_ring(&self.ring, &other.ring),
            "polynomials belong to different rings"
        );
    }

    fn add_poly(&self, other: &Polynomial) -> Polynomial {
        self.check_ring(other);
        Polynomial {
            ring: self.ring.clone(),
            terms: merge_add(&self.ring, &self.terms, &other.terms, 1),
        }
    }

    fn sub_poly(&self, other: &Polynomial) -> Polynomial {
        self.check_ring(other);
        let minus_one = self.ring.ch.get() - 1;
        Polynomial {
            ring: self.ring.clone(),
            terms: merge_add(&self.ring, &self.terms, &other.terms, minus_one),
        }
    }

    fn mul_poly(&self, other: &Polynomial) -> Polynomial {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        // one sorted row per term of the shorter factor, then merge
        let mut acc: Vec<(Monomial, u32)> = Vec::new();
        for (m, c) in &small.terms {
            let row = big.mul_term(m, *c);
            acc = merge_add(&self.ring, &acc, &row.terms, 1);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: acc,
        }
    }

    pub fn pow(&self, mut n: u64) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^q` for `q = p^e`. By additivity of Frobenius this is computed
    /// termwise: every exponent vector scales by `q` and coefficients are raised to `q`.
    pub fn frobenius_power(&self, q: u64) -> Result<Polynomial> {
        let ch = self.ring.ch;
        if ch.log_of_power(q).is_none() {
            return Err(Error::usage(format!("{q} is not a power of {ch}")));
        }
        let deg = self.total_degree().unwrap_or(0) as u64;
        if deg.saturating_mul(q) > u32::MAX as u64 / 2 {
            return Err(Error::Resource(format!(
                "exponent overflow in Frobenius power q={q}"
            )));
        }
        let q32 = q as u32;
        // The map m -> m^q is strictly monotone for every monomial order,
        // so the termwise image is still sorted.
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.scale(q32), ch.pow(*c, q)))
                .collect(),
        })
    }

    /// Exact division by `g`; `None` if `g` does not divide `self`.
    pub fn div_exact(&self, g: &Polynomial) -> Option<Polynomial> {
        self.check_ring(g);
        let (lm, lc) = g.terms.first()?;
        let ch = self.ring.ch;
        let inv = ch.inv(*lc).ok()?;
        let mut rem = self.terms.clone();
        let mut quot: Vec<(Monomial, u32)> = Vec::new();
        while let Some((m, c)) = rem.first() {
            let t = lm.quotient_of(m)?;
            let qc = ch.mul(*c, inv);
            let sub = g.mul_term(&t, ch.neg(qc));
            rem = merge_add(&self.ring, &rem, &sub.terms, 1);
            quot.push((t, qc));
        }
        Some(Polynomial {
            ring: self.ring.clone(),
            terms: quot,
        })
    }

    /// Re-expresses `self` in `target`, placing variable `i` at `offset + i`
    /// (`target` must have at least `offset + nvars` variables).
    pub fn embed(&self, target: &Arc<PolyRing>, offset: usize) -> Polynomial {
        assert!(target.nvars() >= offset + self.ring.nvars());
        assert_eq!(target.ch, self.ring.ch);
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; n];
                e[offset..offset + m.nvars()].copy_from_slice(m.exponents());
                (Monomial::from_exponents(e), *c)
            })
            .collect();
        Polynomial::from_terms(target, terms)
    }

    /// Drops the first `k` variables, which must not occur in `self`.
    pub fn project(&self, target: &Arc<PolyRing>, k: usize) -> Option<Polynomial> {
        if target.nvars() + k != self.ring.nvars() {
            return None;
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.exponents()[..k].iter().any(|&e| e != 0) {
                return None;
            }
            terms.push((Monomial::from_exponents(m.exponents()[k..].to_vec()), *c));
        }
        Some(Polynomial::from_terms(target, terms))
    }

    /// Same polynomial re-sorted for a ring with identical variables but
    /// possibly another order.
    pub fn reorder(&self, target: &Arc<PolyRing>) -> Polynomial {
        assert_eq!(target.names, self.ring.names);
        assert_eq!(target.ch, self.ring.ch);
        Polynomial::from_terms(target, self.terms.clone())
    }

    /// Degree-`d` homogeneous component.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .cloned()
                .collect(),
        }
    }
}

/// `a + c*b` for sorted term lists.
pub(crate) fn merge_add(
    ring: &PolyRing,
    a: &[(Monomial, u32)],
    b: &[(Monomial, u32)],
    c: u32,
) -> Vec<(Monomial, u32)> {
    let ch = ring.ch;
    let order = ring.order;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match order.compare(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let v = ch.mul(b[j].1, c);
                if v != 0 {
                    out.push((b[j].0.clone(), v));
                }
                j += 1;
            }
            Ordering::Equal => {
                let v = ch.add(a[i].1, ch.mul(b[j].1, c));
                if v != 0 {
                    out.push((a[i].0.clone(), v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (m, v) in &b[j..] {
        let v = ch.mul(*v, c);
        if v != 0 {
            out.push((m.clone(), v));
        }
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.add_poly(rhs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.sub_poly(rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_poly(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(self.ring.ch.get() - 1)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (*c, m.is_one()) {
                (c, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", m.display(&self.ring.names))?,
                (c, false) => write!(f, "{c}*{}", m.display(&self.ring.names))?,
            }
        }
        Ok(())
    }
}

impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}
