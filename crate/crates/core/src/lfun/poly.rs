use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::characters::FiniteOrderClass;
use crate::root_datum::Field;
use crate::scalar::fmt_q;
use crate::{Scalar, Q};

/// Formal symbols standing for L-values and Laurent coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sym {
    /// Coefficient of (s-1)^k in the expansion of the completed zeta of `field` at 1
    /// (γ_k, δ_k, ε_k for F, K, E).
    Res { field: Field, k: i32 },
    /// k-th Taylor coefficient of L_field(·, class) at a regular point.
    /// For the trivial class the point is normalized to be at least 1/2.
    Val { field: Field, point: Q, class: FiniteOrderClass, k: u32 },
}

impl Sym {
    /// Declared strictly positive.
    pub fn is_positive(&self) -> bool {
        match self {
            Sym::Res { k, .. } => *k == -1,
            Sym::Val { point, class, k, .. } => *k == 0 && class.is_trivial() && *point > Q::one(),
        }
    }

    /// Declared nonzero.
    pub fn is_nonzero(&self) -> bool {
        match self {
            Sym::Res { k, .. } => *k == -1,
            Sym::Val { k, .. } => *k == 0,
        }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Res { field, k } => {
                let name = match field {
                    Field::F => "gamma",
                    Field::K => "delta",
                    Field::E => "eps",
                };
                write!(f, "{name}_{k}")
            }
            Sym::Val { field, point, class, k } => {
                if class.is_trivial() {
                    write!(f, "Z_{field}({})", fmt_q(point))?;
                } else {
                    write!(f, "L_{field}({}, {class})", fmt_q(point))?;
                }
                if *k > 0 {
                    write!(f, "[{k}]")?;
                }
                Ok(())
            }
        }
    }
}

/// A monomial: symbols with nonzero integer exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial(pub BTreeMap<Sym, i32>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn sym(s: Sym) -> Self {
        Monomial(BTreeMap::from([(s, 1)]))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (s, e) in &other.0 {
            *m.entry(s.clone()).or_insert(0) += e;
        }
        m.retain(|_, e| *e != 0);
        Monomial(m)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|(s, e)| (s.clone(), -e)).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, e)| if *e == 1 { s.to_string() } else { format!("{s}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Laurent polynomial over `T` in the formal symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymPoly<T: Scalar> {
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> Default for SymPoly<T> {
    fn default() -> Self {
        SymPoly { terms: BTreeMap::new() }
    }
}

impl<T: Scalar> SymPoly<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: T) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn sym(s: Sym) -> Self {
        Self::term(Monomial::sym(s), T::one())
    }

    pub fn term(m: Monomial, c: T) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    fn add_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = o.get().clone() + c;
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &T) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }

    /// The single term, if this is a monomial times a scalar.
    pub fn as_monomial(&self) -> Option<(&Monomial, &T)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Constant value if no symbols occur.
    pub fn as_constant(&self) -> Option<T> {
        if self.is_zero() {
            return Some(T::zero());
        }
        match self.as_monomial() {
            Some((m, c)) if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Serializable term list.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    serde_json::json!({
                        "coeff": c.to_string(),
                        "symbols": m.0.iter().map(|(s, e)| serde_json::json!([s.to_string(), e])).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

impl<T: Scalar> fmt::Display for SymPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Outcome of a nonvanishing check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Nonvanishing {
    /// Certified nonzero; lists the axioms used.
    Nonzero { axioms: Vec<String> },
    Zero,
    Undetermined,
}

impl Nonvanishing {
    pub fn is_nonzero(&self) -> bool {
        matches!(self, Nonvanishing::Nonzero { .. })
    }
}

/// Sign analysis of a leading coefficient under the positivity axioms.
pub fn is_nonzero_leading<T: Scalar>(p: &SymPoly<T>) -> Nonvanishing {
    if p.is_zero() {
        return Nonvanishing::Zero;
    }
    // common monomial factor
    let mut common: BTreeMap<Sym, i32> = BTreeMap::new();
    let mut syms: std::collections::BTreeSet<Sym> = std::collections::BTreeSet::new();
    for (m, _) in p.terms() {
        syms.extend(m.0.keys().cloned());
    }
    for s in syms {
        let e = p.terms().map(|(m, _)| m.0.get(&s).copied().unwrap_or(0)).min().unwrap_or(0);
        if e != 0 {
            common.insert(s, e);
        }
    }
    let mut axioms = std::collections::BTreeSet::new();
    for s in common.keys() {
        if !s.is_nonzero() {
            return Nonvanishing::Undetermined;
        }
        axioms.insert(format!("{s} != 0"));
    }
    let g = Monomial(common).inv();
    let reduced: Vec<(Monomial, T)> = p.terms().map(|(m, c)| (m.mul(&g), c.clone())).collect();
    if reduced.len() == 1 {
        return Nonvanishing::Nonzero { axioms: axioms.into_iter().collect() };
    }
    let mut sign = 0;
    for (m, c) in &reduced {
        let sg = if c.is_negative() { -1 } else { 1 };
        for (s, e) in &m.0 {
            if s.is_positive() {
                axioms.insert(format!("{s} > 0"));
            } else if e % 2 == 0 && s.is_nonzero() {
                axioms.insert(format!("{s} != 0"));
            } else {
                return Nonvanishing::Undetermined;
            }
        }
        if sign == 0 {
            sign = sg;
        } else if sign != sg {
            return Nonvanishing::Undetermined;
        }
    }
    Nonvanishing::Nonzero { axioms: axioms.into_iter().collect() }
}
