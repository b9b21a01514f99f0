//! Bundled example scenarios, parameterized by the characteristic.

use crate::closure::{starsp_member, ClosureConfig, Status, TestIdealInput};
use crate::error::{Error, Result};
use crate::ideals::{monomials_of_degree, IdealHandle, QuotientRing};
use crate::poly::{Monomial, Polynomial};

pub const EXAMPLE_IDS: &[&str] = &["xyz", "quintic", "decic", "cubic-mainm", "mainsop"];

const QUINTIC: &str = include_str!("../scenarios/quintic.sc");
const DECIC: &str = include_str!("../scenarios/decic.sc");
const CUBIC: &str = include_str!("../scenarios/cubic-mainm.sc");

pub fn default_characteristic(id: &str) -> Option<u32> {
    EXAMPLE_IDS.contains(&id).then_some(7)
}

/// Replaces the characteristic in the first `F(p)` of a scenario.
fn with_characteristic(src: &str, p: u32) -> String {
    let start = src.find("F(").expect("scenario declares a ring") + 2;
    let end = start + src[start..].find(')').expect("closing parenthesis");
    format!("{}{p}{}", &src[..start], &src[end..])
}

/// Scenario source for a bundled example at characteristic `p` (default 7).
pub fn example_source(id: &str, p: Option<u32>) -> Result<String> {
    let p = match p {
        Some(p) => p,
        None => default_characteristic(id).ok_or_else(|| {
            Error::usage(format!(
                "unknown example `{id}`; known: {}",
                EXAMPLE_IDS.join(", ")
            ))
        })?,
    };
    crate::field::PrimeChar::new(p)?;
    match id {
        "xyz" => Ok(xyz_source(p)),
        "quintic" => Ok(with_characteristic(QUINTIC, p)),
        "decic" => {
            if p == 2 || p == 5 {
                return Err(Error::usage("the decic example needs p not dividing 10"));
            }
            Ok(with_characteristic(DECIC, p))
        }
        "cubic-mainm" => Ok(with_characteristic(CUBIC, p)),
        "mainsop" => mainsop_source(p),
        _ => Err(Error::usage(format!(
            "unknown example `{id}`; known: {}",
            EXAMPLE_IDS.join(", ")
        ))),
    }
}

fn xyz_source(p: u32) -> String {
    let members: Vec<String> = (1..p).map(|a| format!("(x + {a}*y*z)")).collect();
    format!(
        r#"# Three coordinate axes: R = k[x,y,z]/(xyz), I = (x, yz), J = (x + yz).
ring R = F({p})[x,y,z] / (x*y*z);
ideal J = (x + y*z);
ideal U = (y*z);
tau = (x*y, x*z, y*z) "test ideal of k[x,y,z]/(xyz), supplied with the example";
flag gorenstein_parameter;
note "the example is stated in the power series ring; it is modeled by the affine ring, and the criteria localize at the origin";
note "the check colon_equals_x2_y2z2 records the value (x^2, y^2 z^2) for (x + yz):I; that is the value of J(J:I), and the colon itself equals I";
check equal J:I == (x^2, y^2*z^2) as colon_equals_x2_y2z2 expect true;
check equal J:I == I as colon_equals_I expect true;
check equal J*(J:I) == (x^2, y^2*z^2) as formula_value expect true;
check equal {} == (x^2, y^2*z^2) as intersection_value expect true;
check member x^2 in J as x2_in_J expect true;
check bracket sandwich expect true;
check chain J expect [true, true];
"#,
        members.join(" cap ")
    )
}

/// Builds the sop instance on the quintic: `x1 = x^3`, `x2 = y^3` in the test
/// ideal `m^3`, `t = 2`, `J = (x1^t, x2^t)`, and `u = (x1 x2)^(t-1) m'` for the
/// first monomial `m'` (by degree, then grevlex) such that `u ∉ J` and `u` is
/// certified in the special tight closure of `J`.
fn mainsop_source(p: u32) -> Result<String> {
    let ring = QuotientRing::parse(p, &["x", "y", "z"], &["x^5 + y^5 + z^5"])?;
    let j = IdealHandle::from_strs(&ring, &["x^6", "y^6"])?;
    let tau = TestIdealInput::new(IdealHandle::maximal(&ring).power(3)?, "m^3")?;
    let cfg = ClosureConfig {
        gorenstein_parameter: true,
        ..Default::default()
    };
    let base = Monomial::from_exponents(vec![3, 3, 0]);
    let poly = ring.poly_ring();
    let mut found = None;
    'search: for d in 0..=16 {
        let mut ms = monomials_of_degree(3, d);
        ms.sort_by(|a, b| poly.order().compare(b, a));
        for m in ms {
            let u = Polynomial::monomial(poly, base.mul(&m), 1);
            if j.contains(&u)? {
                continue;
            }
            if starsp_member(&u, &j, &tau, &cfg)?.status == Status::ProvedIn {
                found = Some(u);
                break 'search;
            }
        }
    }
    let u = found.ok_or_else(|| Error::Resource("no admissible u up to degree 22".into()))?;
    Ok(format!(
        r#"# Parameter ideal with test elements: x1 = x^3, x2 = y^3 in tau = m^3, t = 2.
ring R = F({p})[x,y,z] / (x^5 + y^5 + z^5);
ideal J = (x^6, y^6);
ideal U = ({u});
tau = m^3 "test ideal of the Fermat quintic, supplied with the example";
flag gorenstein_parameter;
note "u is the first monomial multiple of x1*x2 outside J that is certified in the special tight closure of J";
check starsp_member {u} in J expect ProvedIn;
check subset I in J:m^3 as I_in_J_colon_tau expect true;
check criteria expect ConfirmedFormula;
check bracket equal expect true;
check bracket sandwich expect true;
check equal J*(J:I) == I*(J:I) expect true;
"#
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    #[test]
    fn every_example_parses() {
        for id in EXAMPLE_IDS {
            let src = example_source(id, None).unwrap();
            parse_scenario(&src).unwrap_or_else(|e| panic!("{id}: {e}"));
        }
        assert!(example_source("nope", None).is_err());
        assert!(example_source("decic", Some(5)).is_err());
        assert!(example_source("quintic", Some(9)).is_err());
    }

    #[test]
    fn characteristic_substitution() {
        let src = example_source("quintic", Some(11)).unwrap();
        assert!(src.contains("F(11)[x,y,z]"));
        assert_eq!(
            parse_scenario(&src).unwrap().ring.characteristic().get(),
            11
        );
    }

    #[test]
    fn generated_examples_match_the_files() {
        for id in ["xyz", "mainsop"] {
            let file = std::fs::read_to_string(format!(
                "{}/scenarios/{id}.sc",
                env!("CARGO_MANIFEST_DIR")
            ))
            .unwrap();
            assert_eq!(file, example_source(id, None).unwrap(), "{id}");
        }
    }
}
