use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};

/// Small exact rationals used for arguments, exponents and evaluation points.
pub type Q = Ratio<i64>;

/// An exact field the Laurent engine can compute in.
///
/// Floating point types are deliberately not implementors: cancellation checks need exact
/// zero tests.
pub trait Scalar:
    Clone + Num + Signed + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn from_q(q: &Q) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_q(&Q::from_integer(n))
    }
}

impl Scalar for Ratio<i64> {
    fn from_q(q: &Q) -> Self {
        *q
    }
}

impl Scalar for Ratio<i128> {
    fn from_q(q: &Q) -> Self {
        Ratio::new(*q.numer() as i128, *q.denom() as i128)
    }
}

impl Scalar for BigRational {
    fn from_q(q: &Q) -> Self {
        Ratio::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
    }
}

/// Parses "p/q", "p" or a decimal-free integer into a rational.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => s.parse::<i64>().ok().map(Q::from_integer),
    }
}

/// Renders a rational as "p/q" or "p".
pub fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
