//! Arithmetic in the prime field F_p.
//!
//! Only prime fields are supported. Every computation performed by this crate
//! is a Gröbner-basis computation, and reduced Gröbner bases do not change
//! under extension of the coefficient field, so an ideal identity verified over
//! F_p holds verbatim over its algebraic closure for the same defining data.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The characteristic of the coefficient field: an odd prime below 2^31.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeChar(u32);

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let n = n as u64;
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeChar {
    pub fn new(p: u32) -> Result<Self> {
        if p <= 2 || p >= (1 << 31) {
            return Err(Error::usage(format!(
                "characteristic must satisfy 2 < p < 2^31, got {p}"
            )));
        }
        if !is_prime(p) {
            return Err(Error::usage(format!("{p} is not prime")));
        }
        Ok(PrimeChar(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    pub fn reduce(self, n: i64) -> u32 {
        n.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.0 as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + (self.0 - b)
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.0;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse via the extended Euclidean algorithm.
    pub fn inv(self, a: u32) -> Result<u32> {
        let a = a % self.0;
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.0 as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce(t0))
    }

    /// Returns `Some(e)` when `q = p^e`.
    pub fn log_of_power(self, q: u64) -> Option<u32> {
        if q == 0 {
            return None;
        }
        let p = self.0 as u64;
        let mut e = 0;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            e += 1;
        }
        (r == 1).then_some(e)
    }

    pub fn element(self, n: i64) -> FieldElement {
        FieldElement {
            value: self.reduce(n),
            ch: self,
        }
    }
}

impl TryFrom<u32> for PrimeChar {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        PrimeChar::new(p)
    }
}

impl From<PrimeChar> for u32 {
    fn from(p: PrimeChar) -> u32 {
        p.0
    }
}

impl fmt::Display for PrimeChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of F_p, always stored as its least non-negative residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    ch: PrimeChar,
}

// checked operations: mixing characteristics is an error, so these cannot be the operator traits
#[allow(clippy::should_implement_trait)]
impl FieldElement {
    pub fn new(value: i64, ch: PrimeChar) -> Self {
        ch.element(value)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn characteristic(self) -> PrimeChar {
        self.ch
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: FieldElement) -> Result<PrimeChar> {
        if self.ch != other.ch {
            return Err(Error::usage(format!(
                "characteristic mismatch: {} vs {}",
                self.ch, other.ch
            )));
        }
        Ok(self.ch)
    }

    pub fn add(self, other: FieldElement) -> Result<FieldElement> {
        let ch = self.check(other)?;
        Ok(FieldElement {
            value: ch.add(self.value, other.value),
            ch,
        })
    }

    pub fn sub(self, other: FieldElement) -> Result<FieldElement> {
        let ch = self.check(other)?;
        Ok(FieldElement {
            value: ch.sub(self.value, other.value),
            ch,
        })
    }

    pub fn mul(self, other: FieldElement) -> Result<FieldElement> {
        let ch = self.check(other)?;
        Ok(FieldElement {
            value: ch.mul(self.value, other.value),
            ch,
        })
    }

    pub fn neg(self) -> FieldElement {
        FieldElement {
            value: self.ch.neg(self.value),
            ch: self.ch,
        }
    }

    pub fn inv(self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.ch.inv(self.value)?,
            ch: self.ch,
        })
    }

    pub fn pow(self, e: u64) -> FieldElement {
        FieldElement {
            value: self.ch.pow(self.value, e),
            ch: self.ch,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn el(v: i64, p: u32) -> FieldElement {
        FieldElement::new(v, PrimeChar::new(p).unwrap())
    }

    #[test]
    fn addition_examples() {
        assert_eq!(el(3, 7).add(el(5, 7)).unwrap().value(), 1);
        assert_eq!(el(0, 7).add(el(4, 7)).unwrap().value(), 4);
        assert_eq!(el(2, 3).add(el(2, 3)).unwrap().value(), 1);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(el(3, 7).inv().unwrap().value(), 5);
        assert_eq!(el(1, 7).inv().unwrap().value(), 1);
        assert_eq!(el(2, 11).inv().unwrap().value(), 6);
        assert_eq!(el(0, 11).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn mismatch_is_usage_error() {
        assert!(matches!(el(1, 7).add(el(1, 11)), Err(Error::Usage(_))));
    }

    #[test]
    fn rejects_bad_characteristics() {
        for p in [0, 1, 2, 4, 9, 15, 1 << 31] {
            assert!(PrimeChar::new(p).is_err(), "{p}");
        }
        for p in [3, 5, 7, 101, 2_147_483_647] {
            assert!(PrimeChar::new(p).is_ok(), "{p}");
        }
    }

    #[test]
    fn negative_literals_reduce() {
        assert_eq!(el(-1, 7).value(), 6);
        assert_eq!(el(-15, 7).value(), 6);
    }

    #[test]
    fn log_of_power() {
        let p = PrimeChar::new(7).unwrap();
        assert_eq!(p.log_of_power(1), Some(0));
        assert_eq!(p.log_of_power(49), Some(2));
        assert_eq!(p.log_of_power(14), None);
        assert_eq!(p.log_of_power(0), None);
    }

    #[test]
    fn field_axioms_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [3u32, 5, 7, 11, 101] {
            for _ in 0..10_000 {
                let a = el(rng.gen_range(0..p as i64), p);
                let b = el(rng.gen_range(0..p as i64), p);
                let c = el(rng.gen_range(0..p as i64), p);
                assert_eq!(a.add(b), b.add(a));
                assert_eq!(a.mul(b), b.mul(a));
                assert_eq!(a.add(b).unwrap().add(c), a.add(b.add(c).unwrap()));
                assert_eq!(a.mul(b).unwrap().mul(c), a.mul(b.mul(c).unwrap()));
                assert_eq!(
                    a.mul(b.add(c).unwrap()).unwrap(),
                    a.mul(b).unwrap().add(a.mul(c).unwrap()).unwrap()
                );
                if !a.is_zero() {
                    assert_eq!(a.inv().unwrap().inv().unwrap(), a);
                    assert_eq!(a.mul(a.inv().unwrap()).unwrap().value(), 1);
                }
            }
        }
    }
}
