//! Exact coefficient rings.

pub mod limits;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ratfn;
pub mod trig;

use num_bigint::BigInt;

pub use limits::Limits;
pub use matrix::Matrix;
pub use parse::ParseError;
pub use poly::{rational_to_f64, Monomial, Poly};
pub use ratfn::RationalFn;
pub use trig::TrigPoly;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Formats a rational as `"p/q"` or `"p"`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}
