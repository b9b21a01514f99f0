//! Row echelon spans over F_p indexed by monomials, used for graded minimal generators.

use std::collections::HashMap;

use crate::field::PrimeChar;
use crate::poly::{Monomial, Polynomial};

/// An incrementally built row-echelon basis of a subspace of polynomials.
pub(crate) struct EchelonSpan {
    ch: PrimeChar,
    index: HashMap<Monomial, usize>,
    /// pivot column -> normalized row (sparse: column -> coefficient)
    rows: HashMap<usize, HashMap<usize, u32>>,
}

impl EchelonSpan {
    pub fn new(ch: PrimeChar) -> Self {
        EchelonSpan {
            ch,
            index: HashMap::new(),
            rows: HashMap::new(),
        }
    }

    fn vector(&mut self, f: &Polynomial) -> HashMap<usize, u32> {
        let mut v = HashMap::new();
        for (m, c) in f.terms() {
            let n = self.index.len();
            let col = *self.index.entry(m.clone()).or_insert(n);
            v.insert(col, *c);
        }
        v
    }

    /// Reduces `v` by the current rows; returns the residue.
    fn reduce(&self, mut v: HashMap<usize, u32>) -> HashMap<usize, u32> {
        let ch = self.ch;
        loop {
            let pivot = v
                .keys()
                .copied()
                .filter(|c| self.rows.contains_key(c))
                .min();
            let Some(col) = pivot else {
                return v;
            };
            let factor = v[&col];
            for (&k, &rv) in &self.rows[&col] {
                let e = v.entry(k).or_insert(0);
                *e = ch.sub(*e, ch.mul(factor, rv));
            }
            v.retain(|_, c| *c != 0);
        }
    }

    /// Adds `f` to the span; returns false if it was already in it.
    pub fn insert(&mut self, f: &Polynomial) -> bool {
        let v = self.vector(f);
        let mut r = self.reduce(v);
        let Some(&col) = r.keys().min() else {
            return false;
        };
        let inv = self.ch.inv(r[&col]).expect("nonzero pivot");
        for c in r.values_mut() {
            *c = self.ch.mul(*c, inv);
        }
        // keep rows fully reduced at the new pivot
        let ch = self.ch;
        for row in self.rows.values_mut() {
            if let Some(&a) = row.get(&col) {
                for (&k, &rv) in &r {
                    let e = row.entry(k).or_insert(0);
                    *e = ch.sub(*e, ch.mul(a, rv));
                }
                row.retain(|_, c| *c != 0);
            }
        }
        self.rows.insert(col, std::mem::take(&mut r));
        true
    }
}
