//! Monomials, monomial orders, and polynomials over F_p.

mod monomial;
mod order;
mod parse;
mod polynomial;

pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use parse::{parse_poly, parse_poly_at, SourcePos};
pub use polynomial::{poly_arith, ArithOp, PolyRing, Polynomial};

pub(crate) use polynomial::{merge_add, same_ring};

#[cfg(test)]
pub(crate) mod strategies {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;

    /// Random sparse polynomials in `ring` with exponents below `max_exp`.
    pub fn poly(
        ring: Arc<PolyRing>,
        max_exp: u32,
        max_terms: usize,
    ) -> impl Strategy<Value = Polynomial> {
        let n = ring.nvars();
        let p = ring.characteristic().get();
        prop::collection::vec((prop::collection::vec(0..max_exp, n), 0..p), 0..=max_terms).prop_map(
            move |terms| {
                Polynomial::from_terms(
                    &ring,
                    terms
                        .into_iter()
                        .map(|(e, c)| (Monomial::from_exponents(e), c))
                        .collect(),
                )
            },
        )
    }
}
