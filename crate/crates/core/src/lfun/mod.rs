//! Formal products of completed Hecke L-functions and their Laurent expansions.

mod poly;
mod series;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use poly::{is_nonzero_leading, Monomial, Nonvanishing, Sym, SymPoly};
pub use series::LaurentSeries;

use crate::affine::Affine;
use crate::characters::FiniteOrderClass;
use crate::root_datum::Field;
use crate::scalar::fmt_q;
use crate::{Error, Result, Scalar, Q};

/// One L-function `L_field(arg, class)`; the trivial class is the completed zeta.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LKey {
    pub field: Field,
    pub arg: Affine,
    pub class: FiniteOrderClass,
}

impl LKey {
    pub fn new(field: Field, arg: Affine, class: FiniteOrderClass) -> Self {
        LKey { field, arg, class }
    }

    pub fn zeta(field: Field, arg: Affine) -> Self {
        Self::new(field, arg, FiniteOrderClass::trivial())
    }
}

impl fmt::Display for LKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.class.is_trivial() {
            write!(f, "Z_{}({})", self.field, self.arg)
        } else if self.field == Field::F {
            write!(f, "L_F({}, {})", self.arg, self.class)
        } else {
            write!(f, "L_{}({}, {} o Nm)", self.field, self.arg, self.class)
        }
    }
}

/// A cancellation-reduced product of L-functions with integer exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LExpr {
    factors: BTreeMap<LKey, i32>,
}

impl LExpr {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn factor(key: LKey, exp: i32) -> Self {
        let mut e = Self::one();
        e.push(key, exp);
        e
    }

    pub fn push(&mut self, key: LKey, exp: i32) {
        let v = self.factors.entry(key.clone()).or_insert(0);
        *v += exp;
        if *v == 0 {
            self.factors.remove(&key);
        }
    }

    pub fn factors(&self) -> impl Iterator<Item = (&LKey, i32)> {
        self.factors.iter().map(|(k, e)| (k, *e))
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &LExpr) -> LExpr {
        let mut out = self.clone();
        for (k, e) in other.factors() {
            out.push(k.clone(), e);
        }
        out
    }

    pub fn pow(&self, n: i32) -> LExpr {
        LExpr { factors: self.factors.iter().map(|(k, e)| (k.clone(), e * n)).filter(|(_, e)| *e != 0).collect() }
    }

    pub fn inv(&self) -> LExpr {
        self.pow(-1)
    }

    pub fn div(&self, other: &LExpr) -> LExpr {
        self.mul(&other.inv())
    }

    /// Substitutes the argument variables, re-reducing the product.
    pub fn substitute(&self, subs: &[Affine]) -> LExpr {
        let mut out = LExpr::one();
        for (k, e) in self.factors() {
            out.push(LKey::new(k.field, k.arg.substitute(subs), k.class.clone()), e);
        }
        out
    }

    /// Factors with multiplicity, numerator first, each as (key, +1 or -1).
    pub fn multiset(&self) -> Vec<(LKey, i32)> {
        let mut out = Vec::new();
        for (k, e) in self.factors() {
            for _ in 0..e.abs() {
                out.push((k.clone(), e.signum()));
            }
        }
        out.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        out
    }

    /// Splits by whether the class is trivial.
    pub fn split_trivial(&self) -> (LExpr, LExpr) {
        let mut triv = LExpr::one();
        let mut other = LExpr::one();
        for (k, e) in self.factors() {
            if k.class.is_trivial() {
                triv.push(k.clone(), e);
            } else {
                other.push(k.clone(), e);
            }
        }
        (triv, other)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.factors()
                .map(|(k, e)| {
                    let arg = match k.arg.as_line() {
                        Some((a, b)) => serde_json::json!({ "a": fmt_q(&a), "b": fmt_q(&b) }),
                        None => serde_json::json!({
                            "coeffs": k.arg.lin.iter().map(fmt_q).collect::<Vec<_>>(),
                            "b": fmt_q(&k.arg.c),
                        }),
                    };
                    serde_json::json!({
                        "field": k.field.name(),
                        "argument": arg,
                        "class": k.class.to_string(),
                        "exp": e,
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for LExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |pos: bool| {
            let v: Vec<String> = self
                .factors()
                .filter(|(_, e)| (*e > 0) == pos)
                .map(|(k, e)| if e.abs() == 1 { k.to_string() } else { format!("{}^{}", k, e.abs()) })
                .collect();
            v
        };
        let (num, den) = (part(true), part(false));
        let num_s = if num.is_empty() { "1".to_string() } else { num.join(" ") };
        if den.is_empty() {
            f.write_str(&num_s)
        } else {
            write!(f, "{} / ({})", num_s, den.join(" "))
        }
    }
}

fn line_at(arg: &Affine, s0: Q) -> Result<(Q, Q)> {
    let (a, b) = arg
        .as_line()
        .ok_or_else(|| Error::Invalid(format!("argument {arg} is not on the line")))?;
    Ok((a, a * s0 + b))
}

/// Laurent expansion of one factor (exponent +1) with `depth` known terms.
pub fn expand_key<T: Scalar>(key: &LKey, s0: Q, depth: usize) -> Result<LaurentSeries<T>> {
    let (a, p) = line_at(&key.arg, s0)?;
    let depth = depth.max(1);
    let field = key.field;
    let pow = |x: Q, k: i32| -> T {
        let mut r = Q::one();
        for _ in 0..k.abs() {
            r *= x;
        }
        T::from_q(&if k < 0 { Q::one() / r } else { r })
    };
    if a.is_zero() {
        if key.class.is_trivial() && (p.is_zero() || p.is_one()) {
            return Err(Error::Invalid(format!("{key} is a constant at a pole")));
        }
        let mut s = LaurentSeries::zero(s0, 0, depth);
        s.coeffs[0] = SymPoly::sym(value_sym(key, p, 0).0);
        return Ok(s);
    }
    if key.class.is_trivial() && (p.is_one() || p.is_zero()) {
        // ζ(1 + x) = Σ_{k ≥ -1} c_k x^k, and ζ(x) = ζ(1 - x)
        let x = if p.is_one() { a } else { -a };
        let mut s = LaurentSeries::zero(s0, -1, depth);
        for (i, c) in s.coeffs.iter_mut().enumerate() {
            let k = i as i32 - 1;
            *c = SymPoly::term(Monomial::sym(Sym::Res { field, k }), pow(x, k));
        }
        return Ok(s);
    }
    let mut s = LaurentSeries::zero(s0, 0, depth);
    for (i, c) in s.coeffs.iter_mut().enumerate() {
        let (sym, sign, vanishes) = value_sym(key, p, i as u32);
        if vanishes {
            continue;
        }
        *c = SymPoly::term(Monomial::sym(sym), pow(sign * a, i as i32));
    }
    Ok(s)
}

/// Symbol for the k-th Taylor coefficient at a regular point, the direction sign after
/// the functional equation, and whether the coefficient vanishes by symmetry.
fn value_sym(key: &LKey, p: Q, k: u32) -> (Sym, Q, bool) {
    if key.class.is_trivial() {
        let half = Q::new(1, 2);
        let (q, sign) = if p >= half { (p, Q::one()) } else { (Q::one() - p, -Q::one()) };
        let vanishes = q == half && k % 2 == 1;
        (Sym::Val { field: key.field, point: q, class: key.class.clone(), k }, sign, vanishes)
    } else {
        (Sym::Val { field: key.field, point: p, class: key.class.clone(), k }, Q::one(), false)
    }
}

/// Laurent expansion of a product at `s0`, every factor known to `depth` terms.
pub fn expand_at<T: Scalar>(e: &LExpr, s0: Q, depth: usize) -> Result<LaurentSeries<T>> {
    let mut out = LaurentSeries::one(s0, depth);
    for (k, n) in e.factors() {
        let mut f = expand_key::<T>(k, s0, depth)?;
        if n < 0 {
            f = f.inv()?;
        }
        for _ in 0..n.abs() {
            out = out.mul(&f);
        }
    }
    Ok(out)
}

/// Pole order at `s0` (negative for zeros), counted factor by factor.
pub fn order_at(e: &LExpr, s0: Q) -> i32 {
    e.factors()
        .map(|(k, n)| {
            let hits = k.class.is_trivial()
                && k.arg.as_line().is_some_and(|(a, b)| {
                    let p = a * s0 + b;
                    !a.is_zero() && (p.is_zero() || p.is_one())
                });
            if hits {
                n
            } else {
                0
            }
        })
        .sum()
}

/// Places removed from a partial L-function.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RemovedPlaces {
    /// Number of finite places removed for each field.
    pub finite: BTreeMap<Field, u32>,
    pub archimedean: bool,
}

impl RemovedPlaces {
    pub fn finite_count(field: Field, n: u32) -> Self {
        RemovedPlaces { finite: BTreeMap::from([(field, n)]), archimedean: false }
    }
}

/// Pole order of the partial product with the local factors at the removed places divided out.
pub fn partial_order_at(e: &LExpr, removed: &RemovedPlaces, s0: Q) -> Result<i32> {
    if removed.archimedean {
        return Err(Error::Invalid("archimedean places cannot be removed".into()));
    }
    let mut ord = order_at(e, s0);
    for (k, n) in e.factors() {
        let places = removed.finite.get(&k.field).copied().unwrap_or(0) as i32;
        if places == 0 || !k.class.is_trivial() {
            continue;
        }
        // (1 - q^{-x})^{-1} has a pole exactly at x = 0 on the real line
        if let Ok((_, p)) = line_at(&k.arg, s0) {
            if p.is_zero() {
                ord -= n * places;
            }
        }
    }
    Ok(ord)
}

/// Largest depth tried before giving up on a leading coefficient.
pub const MAX_DEPTH: usize = 16;

/// Leading degree and coefficient of a signed sum of products, extending the depth until
/// the leading term is determined.
pub fn leading_of_sum<T: Scalar>(terms: &[(T, LExpr)], s0: Q) -> Result<Option<(i32, SymPoly<T>)>> {
    if terms.is_empty() {
        return Ok(None);
    }
    let top = terms.iter().map(|(_, e)| order_at(e, s0)).max().unwrap_or(0);
    let mut depth = 2;
    loop {
        let mut total: Option<LaurentSeries<T>> = None;
        for (c, e) in terms {
            let s = expand_at::<T>(e, s0, depth)?
                .scale(c)
                .truncate(-top + depth as i32);
            total = Some(match total {
                None => s,
                Some(t) => t.add(&s),
            });
        }
        let total = total.expect("nonempty");
        if let Some((d, c)) = total.leading() {
            return Ok(Some((d, c.clone())));
        }
        if depth >= MAX_DEPTH {
            return Err(Error::DepthInsufficient(depth));
        }
        depth += 2;
    }
}

/// Leading term of an unsigned sum.
pub fn leading_of_plain_sum<T: Scalar>(exprs: &[LExpr], s0: Q) -> Result<Option<(i32, SymPoly<T>)>> {
    let terms: Vec<(T, LExpr)> = exprs.iter().map(|e| (T::one(), e.clone())).collect();
    leading_of_sum(&terms, s0)
}

/// Whether the product is regular at `s0` with value exactly -1.
pub fn limit_is_minus_one<T: Scalar>(e: &LExpr, s0: Q) -> Result<bool> {
    if order_at(e, s0) != 0 {
        return Ok(false);
    }
    let s = expand_at::<T>(e, s0, 1)?;
    Ok(s.coeff(0).and_then(|c| c.as_constant()) == Some(-T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::BigQ;

    fn z(field: Field, a: i64, b: Q) -> LKey {
        LKey::zeta(field, Affine::line(Q::from_integer(a), b))
    }

    #[test]
    fn zeta_at_one() {
        let half = Q::new(1, 2);
        let e = LExpr::factor(z(Field::F, 1, half), 1);
        let s = expand_at::<BigQ>(&e, half, 3).unwrap();
        assert_eq!(s.low, -1);
        assert_eq!(s.coeffs[0].to_string(), "gamma_-1");
        assert_eq!(s.coeffs[1].to_string(), "gamma_0");
        assert_eq!(s.coeffs[2].to_string(), "gamma_1");
    }

    #[test]
    fn ratio_tends_to_minus_one() {
        let half = Q::new(1, 2);
        let e = LExpr::factor(z(Field::F, 1, -half), 1).div(&LExpr::factor(z(Field::F, 1, half), 1));
        assert!(limit_is_minus_one::<BigQ>(&e, half).unwrap());
        assert_eq!(order_at(&e, half), 0);
    }

    #[test]
    fn self_cancellation() {
        let k = z(Field::F, 1, Q::zero());
        let e = LExpr::factor(k.clone(), 1).div(&LExpr::factor(k, 1));
        assert!(e.is_one());
        let s = expand_at::<BigQ>(&e, Q::one(), 4).unwrap();
        assert_eq!(s.coeff(0).unwrap().as_constant(), Some(BigQ::one()));
        assert!(s.coeffs[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn nonvanishing_examples() {
        let g = SymPoly::<BigQ>::sym(Sym::Res { field: Field::F, k: -1 });
        let e = SymPoly::<BigQ>::sym(Sym::Res { field: Field::E, k: -1 });
        let p = g.add(&e.scale(&BigQ::new(1.into(), 2.into())));
        assert!(is_nonzero_leading(&p).is_nonzero());
        assert_eq!(is_nonzero_leading(&g.sub(&g)), Nonvanishing::Zero);
        let g0 = SymPoly::<BigQ>::sym(Sym::Res { field: Field::F, k: 0 });
        let g1 = SymPoly::<BigQ>::sym(Sym::Res { field: Field::F, k: 1 });
        let z2 = SymPoly::<BigQ>::sym(Sym::Val {
            field: Field::F,
            point: Q::from_integer(2),
            class: FiniteOrderClass::trivial(),
            k: 0,
        });
        let q = g0.mul(&g).sub(&g1.mul(&z2));
        assert_eq!(is_nonzero_leading(&q), Nonvanishing::Undetermined);
    }

    #[test]
    fn partial_orders() {
        let one = Q::one();
        let e = LExpr::factor(z(Field::F, 1, -one), 2)
            .mul(&LExpr::factor(z(Field::F, 1, one), 2))
            .mul(&LExpr::factor(z(Field::F, 1, Q::zero()), 3));
        for n in 0..4u32 {
            let r = RemovedPlaces::finite_count(Field::F, n);
            assert_eq!(partial_order_at(&e, &r, one).unwrap(), 5 - 2 * n as i32);
        }
        let single = LExpr::factor(z(Field::F, 1, Q::zero()), 1);
        assert_eq!(partial_order_at(&single, &RemovedPlaces::finite_count(Field::F, 3), one).unwrap(), 1);
        let arch = RemovedPlaces { archimedean: true, ..Default::default() };
        assert!(partial_order_at(&e, &arch, one).is_err());
    }
}
