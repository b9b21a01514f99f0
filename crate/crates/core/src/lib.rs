//! Ideal calculus over prime fields and a checker for the `*`-core formula
//! `*-core(I) = J(J:I) = I(J:I)` of an ideal with a minimal `*`-reduction `J`.

pub mod cli;
pub mod closure;
pub mod error;
pub mod examples;
pub mod field;
pub mod groebner;
pub mod ideals;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod runner;
pub mod scenario;
pub mod selftest;
pub mod star_core;

pub use error::{Error, Result};
