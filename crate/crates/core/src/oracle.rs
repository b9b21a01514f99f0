//! Linear-algebra oracle for homogeneous ideals, independent of Gröbner bases.
//!
//! The degree-`d` part of a homogeneous ideal is spanned by `m·g` over its
//! generators `g` (relations included) and monomials `m` of complementary
//! degree. Membership and bounded equality reduce to rank computations over
//! F_p on these Macaulay matrices.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::PrimeChar;
use crate::ideals::{monomials_of_degree, IdealHandle};
use crate::poly::{Monomial, Polynomial};

/// The degree-`d` piece of an ideal as a row-reduced matrix.
#[derive(Clone, Debug)]
pub struct MacaulayPiece {
    pub degree: u32,
    /// All ambient monomials of degree `d`; column `k` is `basis[k]`.
    pub basis: Vec<Monomial>,
    /// Reduced row echelon form of the span, one dense row per pivot.
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    ch: PrimeChar,
}

impl MacaulayPiece {
    pub fn new(a: &IdealHandle, degree: u32) -> Result<Self> {
        let gens = homogeneous_gens(a)?;
        let ring = a.ring();
        let n = ring.nvars();
        let basis = monomials_of_degree(n, degree);
        let column: HashMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let mut matrix = Vec::new();
        for g in &gens {
            let dg = g.total_degree().unwrap_or(0);
            if dg > degree {
                continue;
            }
            for m in monomials_of_degree(n, degree - dg) {
                let mut row = vec![0u32; basis.len()];
                for (t, c) in g.terms() {
                    row[column[&t.mul(&m)]] = *c;
                }
                matrix.push(row);
            }
        }
        let ch = ring.characteristic();
        let (rows, pivots) = row_reduce(matrix, ch);
        Ok(MacaulayPiece {
            degree,
            basis,
            rows,
            pivots,
            ch,
        })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn vector(&self, f: &Polynomial) -> Vec<u32> {
        let mut v = vec![0u32; self.basis.len()];
        for (t, c) in f.terms() {
            let k = self
                .basis
                .iter()
                .position(|m| m == t)
                .expect("degree checked");
            v[k] = *c;
        }
        v
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        let mut v = self.vector(f);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = self.ch.sub(*x, self.ch.mul(c, *r));
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Same span, compared on the reduced row echelon forms.
    pub fn same_span(&self, other: &MacaulayPiece) -> bool {
        self.basis == other.basis && self.pivots == other.pivots && self.rows == other.rows
    }
}

fn homogeneous_gens(a: &IdealHandle) -> Result<Vec<Polynomial>> {
    let gens = a.ambient_gens();
    if let Some(g) = gens.iter().find(|g| !g.is_homogeneous()) {
        return Err(Error::Unsupported(format!(
            "the oracle needs homogeneous generators; `{g}` is not"
        )));
    }
    Ok(gens)
}

/// Gauss-Jordan elimination; returns the nonzero rows and their pivot columns.
fn row_reduce(mut m: Vec<Vec<u32>>, ch: PrimeChar) -> (Vec<Vec<u32>>, Vec<usize>) {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..m.len()).find(|&k| m[k][c] != 0) else {
            continue;
        };
        m.swap(r, k);
        let inv = ch.inv(m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = ch.mul(*x, inv);
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let f = row[c];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = ch.sub(*x, ch.mul(f, *p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// `f ∈ a`, decided in the degree-`deg f` piece.
pub fn oracle_member(f: &Polynomial, a: &IdealHandle, d_max: u32) -> Result<bool> {
    if !f.is_homogeneous() {
        return Err(Error::Unsupported(format!("`{f}` is not homogeneous")));
    }
    homogeneous_gens(a)?;
    if f.is_zero() {
        return Ok(true);
    }
    let d = f.total_degree().expect("nonzero");
    if d > d_max {
        return Err(Error::usage(format!(
            "degree {d} exceeds the bound {d_max}"
        )));
    }
    Ok(MacaulayPiece::new(a, d)?.contains(f))
}

/// Equality of the degree-`d` pieces of `a` and `b` for every `d <= d_max`.
pub fn oracle_equal_up_to(a: &IdealHandle, b: &IdealHandle, d_max: u32) -> Result<bool> {
    homogeneous_gens(a)?;
    homogeneous_gens(b)?;
    for d in 0..=d_max {
        if !MacaulayPiece::new(a, d)?.same_span(&MacaulayPiece::new(b, d)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Default degree bound: twice the largest generator degree or the queried
/// degree, whichever is larger, plus the largest relation degree.
pub fn default_d_max(a: &IdealHandle, query_degree: u32) -> u32 {
    let top = a
        .gens()
        .iter()
        .filter_map(|g| g.total_degree())
        .max()
        .unwrap_or(0);
    let rel = a
        .ring()
        .relations()
        .iter()
        .filter_map(|g| g.total_degree())
        .max()
        .unwrap_or(0);
    (2 * top).max(query_degree) + rel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::QuotientRing;

    #[test]
    fn membership_examples() {
        let r = QuotientRing::parse(7, &["x", "y", "z"], &[]).unwrap();
        let x2 = IdealHandle::from_strs(&r, &["x^2"]).unwrap();
        assert!(oracle_member(&r.parse_poly("x^2*y").unwrap(), &x2, 4).unwrap());
        let x = IdealHandle::from_strs(&r, &["x"]).unwrap();
        assert!(!oracle_member(&r.parse_poly("y").unwrap(), &x, 4).unwrap());
        assert!(oracle_member(&r.parse_poly("x + 1").unwrap(), &x, 4).is_err());
        assert!(oracle_member(&r.parse_poly("x^5").unwrap(), &x, 4).is_err());
    }

    #[test]
    fn equality_examples() {
        let r = QuotientRing::parse(7, &["x", "y", "z"], &[]).unwrap();
        let a = IdealHandle::from_strs(&r, &["x", "y"]).unwrap();
        let b = IdealHandle::from_strs(&r, &["y", "x + y"]).unwrap();
        assert!(oracle_equal_up_to(&a, &b, 4).unwrap());
        let c = IdealHandle::from_strs(&r, &["x"]).unwrap();
        let d = IdealHandle::from_strs(&r, &["x^2"]).unwrap();
        assert!(!oracle_equal_up_to(&c, &d, 2).unwrap());
        let e = IdealHandle::from_strs(&r, &["x + y^2"]).unwrap();
        assert!(oracle_equal_up_to(&c, &e, 2).is_err());
    }

    #[test]
    fn decic_witness_lies_in_the_formula() {
        let r = QuotientRing::parse(7, &["x", "y", "z"], &["x^10 + y^10 + z^10"]).unwrap();
        let j = IdealHandle::from_strs(&r, &["x^5", "y^7", "z^8"]).unwrap();
        let jci = IdealHandle::from_strs(&r, &["x^4", "y^4", "z^2"]).unwrap();
        let formula = j.product(&jci).unwrap();
        let f = r.parse_poly("x^5*z^2").unwrap();
        assert!(oracle_member(&f, &formula, default_d_max(&formula, 7)).unwrap());
        assert!(formula.contains(&f).unwrap());
    }
}
