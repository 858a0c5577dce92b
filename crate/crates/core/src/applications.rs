//! The double-pole bound for the twisted standard L-function and the CAP case analysis.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::affine::Affine;
use crate::characters::{FiniteOrderClass, Gen};
use crate::lfun::{partial_order_at, LExpr, LKey, RemovedPlaces};
use crate::poles::{verdict_of, Analysis, Column, Mode};
use crate::root_datum::{EtaleForm, Field, FormKind};
use crate::scalar::fmt_q;
use crate::{Error, Result, Q};

/// μ(x) = η(x)|x|^z.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mu {
    pub eta: FiniteOrderClass,
    pub z: Q,
}

impl Mu {
    pub fn new(eta: FiniteOrderClass, z: Q) -> Mu {
        Mu { eta, z }
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let abs = if self.z.is_zero() {
            String::new()
        } else if self.z.is_one() {
            "|.|".to_string()
        } else {
            format!("|.|^{}", fmt_q(&self.z))
        };
        match (self.eta.is_trivial(), abs.is_empty()) {
            (true, true) => f.write_str("1"),
            (true, false) => f.write_str(&abs),
            (false, true) => write!(f, "{}", self.eta),
            (false, false) => write!(f, "{} {}", self.eta, abs),
        }
    }
}

impl Serialize for Mu {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The pair (μ₁, μ₂) describing a Borel-induced representation of G2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BorelInductionDatum {
    pub mu1: Mu,
    pub mu2: Mu,
}

impl BorelInductionDatum {
    /// Requires the chamber normal form 0 ≤ z₂ ≤ z₁ ≤ 2z₂.
    pub fn new(mu1: Mu, mu2: Mu) -> Result<Self> {
        let (z1, z2) = (mu1.z, mu2.z);
        if !(Q::zero() <= z2 && z2 <= z1 && z1 <= z2 * Q::from_integer(2)) {
            return Err(Error::Invalid(format!(
                "exponents ({}, {}) are not in the chamber 0 <= z2 <= z1 <= 2 z2",
                fmt_q(&z1),
                fmt_q(&z2)
            )));
        }
        Ok(BorelInductionDatum { mu1, mu2 })
    }
}

fn l_factor(class: FiniteOrderClass, shift: Q) -> LKey {
    LKey::new(Field::F, Affine::line(Q::one(), shift), class)
}

/// L(μ₁χ)L(μ₁⁻¹χ)L(μ₂χ)L(μ₂⁻¹χ)L(μ₁μ₂⁻¹χ)L(μ₂μ₁⁻¹χ)L(χ), exponents folded into the argument.
pub fn standard_l_factorization(d: &BorelInductionDatum, chi: &FiniteOrderClass) -> LExpr {
    let (m1, m2) = (&d.mu1, &d.mu2);
    let parts = [
        (m1.eta.clone(), m1.z),
        (m1.eta.inv(), -m1.z),
        (m2.eta.clone(), m2.z),
        (m2.eta.inv(), -m2.z),
        (m1.eta.mul(&m2.eta.inv()), m1.z - m2.z),
        (m2.eta.mul(&m1.eta.inv()), m2.z - m1.z),
        (FiniteOrderClass::trivial(), Q::zero()),
    ];
    let mut e = LExpr::one();
    for (eta, z) in parts {
        e.push(l_factor(eta.mul(chi), z), 1);
    }
    e
}

/// Pole order of a partial L-function product read off at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reading {
    Exact(i32),
    /// Some factor sits left of the edge of absolute convergence, where partial
    /// L-functions may vanish or not; only the count of certain poles is known.
    AtLeast(i32),
}

impl Reading {
    pub fn certified(&self) -> Option<i32> {
        match self {
            Reading::Exact(k) => Some(*k),
            Reading::AtLeast(_) => None,
        }
    }

    pub fn count(&self) -> i32 {
        match self {
            Reading::Exact(k) | Reading::AtLeast(k) => *k,
        }
    }
}

impl fmt::Display for Reading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reading::Exact(k) => write!(f, "{k}"),
            Reading::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

/// Poles of trivial-class factors at argument 1; factors at arguments below 1 leave it open.
pub fn partial_l_reading(e: &LExpr, s: Q) -> Result<Reading> {
    let mut poles = 0;
    let mut open = false;
    for (k, n) in e.factors() {
        let (a, b) = k.arg.as_line().ok_or_else(|| Error::Invalid("argument is not on the line".into()))?;
        let p = a * s + b;
        if p < Q::one() {
            open = true;
        } else if p == Q::one() && k.class.is_trivial() {
            poles += n;
        }
    }
    Ok(if open { Reading::AtLeast(poles) } else { Reading::Exact(poles) })
}

/// Which part of the double-pole argument is being run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GhScenario {
    /// The theta-lift L-function ζ(s-1)²ζ(s+1)²ζ(s)³ with |S| places removed.
    ThetaLift,
    /// The Eisenstein bounds everywhere except (split, Id, s=1).
    BoundQuery,
}

#[derive(Clone, Debug, Serialize)]
pub struct GhReport {
    pub scenario: GhScenario,
    pub s_size: u32,
    /// Largest unconditional Eisenstein bound over Re(s) > 0, leaving out (split, Id, 1/2).
    pub max_other: i32,
    /// Unconditional bound at (split, Id, 1/2), the only cell above 2.
    pub split_id_bound: i32,
    pub theta_expr: String,
    /// Order at s = 1 of the partial theta-lift L-function.
    pub theta_order: i32,
    /// Whether the assumed triple pole contradicts the theta-lift order.
    pub contradiction: bool,
    pub at_most_double: bool,
}

pub fn ginzburg_hundley_check(scenario: GhScenario, s_size: u32) -> Result<GhReport> {
    let mut max_other = 0;
    let mut split_id_bound = 0;
    for form in FormKind::ALL {
        let ef = EtaleForm::new(form);
        for col in Column::ALL {
            let Some(chi) = col.class(form) else { continue };
            if col == Column::FiveHalvesId {
                // the residue is the trivial representation and pairs to zero with cusp forms
                continue;
            }
            let b = verdict_of(&Analysis::new(&ef, &chi, col.s0())?, Mode::Unconditional)?.order;
            if form == FormKind::Split && col == Column::HalfId {
                split_id_bound = b;
            } else {
                max_other = max_other.max(b);
            }
        }
    }
    let one = Mu::new(FiniteOrderClass::trivial(), Q::one());
    let theta = standard_l_factorization(
        &BorelInductionDatum::new(one.clone(), one)?,
        &FiniteOrderClass::trivial(),
    );
    let theta_order = partial_order_at(&theta, &RemovedPlaces::finite_count(Field::F, s_size), Q::one())?;
    let contradiction = theta_order < split_id_bound;
    Ok(GhReport {
        scenario,
        s_size,
        max_other,
        split_id_bound,
        theta_expr: theta.to_string(),
        theta_order,
        contradiction,
        at_most_double: max_other <= 2 && (split_id_bound <= 2 || contradiction),
    })
}

/// The finite-order characters the case analysis ranges over: the algebra's own character
/// and two independent auxiliary quadratic characters.
pub fn eta_group(form: FormKind) -> Result<Vec<FiniteOrderClass>> {
    if form == FormKind::CubicNonGalois {
        return Err(Error::Invalid("the case analysis excludes non-Galois cubic fields".into()));
    }
    let own: Vec<FiniteOrderClass> = match form {
        FormKind::Split => vec![FiniteOrderClass::trivial()],
        FormKind::QuadTimesF => (0..2).map(|k| FiniteOrderClass::gen(Gen::ChiK).pow(k)).collect(),
        _ => (0..3).map(|k| FiniteOrderClass::gen(Gen::ChiE).pow(k)).collect(),
    };
    let mut out = Vec::new();
    for o in &own {
        for a in 0..2 {
            for b in 0..2 {
                let q = FiniteOrderClass::from_exponents([(Gen::Eta(1), a), (Gen::Eta(2), b)]);
                out.push(o.mul(&q));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Eisenstein bounds looked up per (χ, s0), computed on demand.
pub struct BoundCache {
    form: EtaleForm,
    mode: Mode,
    cache: BTreeMap<(FiniteOrderClass, Q), i32>,
}

impl BoundCache {
    pub fn new(form: FormKind, mode: Mode) -> Self {
        BoundCache { form: EtaleForm::new(form), mode, cache: BTreeMap::new() }
    }

    /// Bound usable against a cusp form: the pole at 5/2 has a trivial residue and counts as 0.
    pub fn effective(&mut self, chi: &FiniteOrderClass, s0: Q) -> Result<i32> {
        if s0 == Q::new(5, 2) {
            return Ok(0);
        }
        let key = (chi.clone(), s0);
        if let Some(b) = self.cache.get(&key) {
            return Ok(*b);
        }
        let b = verdict_of(&Analysis::new(&self.form, chi, s0)?, self.mode)?.order;
        self.cache.insert(key, b);
        Ok(b)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub mu: Mu,
    /// Effective Eisenstein bound at z + 1/2 that lets μ through.
    pub bound: i32,
}

/// One comparison L-order vs Eisenstein bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub chi: String,
    /// Point in the L-function variable; the Eisenstein point is half less.
    #[serde(serialize_with = "ser_q")]
    pub s_l: Q,
    pub order: Reading,
    pub bound: i32,
}

fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(q))
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vs {}", self.order, self.bound)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub datum: BorelInductionDatum,
    /// The strongest certified violation, if any.
    pub kill: Option<Comparison>,
    /// The largest reading at s = 1, certified or not.
    pub at_one: Option<Comparison>,
}

impl Branch {
    pub fn survives(&self) -> bool {
        self.kill.is_none()
    }
}

/// Tests one assignment against every twist in the group at s = 1, 2, 3.
pub fn cap_branch(
    form: FormKind,
    datum: &BorelInductionDatum,
    bounds: &mut BoundCache,
) -> Result<Branch> {
    let mut kill: Option<Comparison> = None;
    let mut at_one: Option<Comparison> = None;
    for chi in eta_group(form)? {
        let l = standard_l_factorization(datum, &chi);
        for s_l in [1, 2, 3].map(Q::from_integer) {
            let order = partial_l_reading(&l, s_l)?;
            let bound = bounds.effective(&chi, s_l - Q::new(1, 2))?;
            let cmp = Comparison { chi: chi.label(), s_l, order, bound };
            if s_l.is_one() && at_one.as_ref().is_none_or(|c| order.count() > c.order.count()) {
                at_one = Some(cmp.clone());
            }
            if let Some(k) = order.certified() {
                if k > bound && kill.as_ref().is_none_or(|c| k > c.order.count()) {
                    kill = Some(cmp);
                }
            }
        }
    }
    Ok(Branch { datum: datum.clone(), kill, at_one })
}

#[derive(Clone, Debug, Serialize)]
pub struct CapReport {
    pub form: FormKind,
    pub mode: Mode,
    pub candidates: Vec<Candidate>,
    pub branches: Vec<Branch>,
    pub survivors: Vec<BorelInductionDatum>,
}

/// The whole case analysis for one form.
pub fn cap_analysis(form: FormKind, mode: Mode) -> Result<CapReport> {
    let group = eta_group(form)?;
    let mut bounds = BoundCache::new(form, mode);
    let mut candidates = Vec::new();
    for z in [0, 1, 2].map(Q::from_integer) {
        for eta in &group {
            let b = bounds.effective(eta, z + Q::new(1, 2))?;
            if b > 0 {
                candidates.push(Candidate { mu: Mu::new(eta.clone(), z), bound: b });
            }
        }
    }
    let mut branches = Vec::new();
    for (i, c1) in candidates.iter().enumerate() {
        for c2 in &candidates[i..] {
            let (a, b) = if c1.mu.z >= c2.mu.z { (&c1.mu, &c2.mu) } else { (&c2.mu, &c1.mu) };
            let Ok(d) = BorelInductionDatum::new(a.clone(), b.clone()) else { continue };
            branches.push(cap_branch(form, &d, &mut bounds)?);
        }
    }
    let survivors = branches.iter().filter(|b| b.survives()).map(|b| b.datum.clone()).collect();
    Ok(CapReport { form, mode, candidates, branches, survivors })
}

/// Runs a single assignment, e.g. from the command line.
pub fn cap_single(form: FormKind, datum: &BorelInductionDatum, mode: Mode) -> Result<Branch> {
    let mut bounds = BoundCache::new(form, mode);
    cap_branch(form, datum, &mut bounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs1() -> Mu {
        Mu::new(FiniteOrderClass::trivial(), Q::one())
    }

    #[test]
    fn theta_factorization() {
        let d = BorelInductionDatum::new(abs1(), abs1()).unwrap();
        let e = standard_l_factorization(&d, &FiniteOrderClass::trivial());
        assert_eq!(e.to_string(), "Z_F(s-1)^2 Z_F(s)^3 Z_F(s+1)^2");
    }

    #[test]
    fn trivial_mu_gives_seventh_power() {
        let one = Mu::new(FiniteOrderClass::trivial(), Q::zero());
        let d = BorelInductionDatum::new(one.clone(), one).unwrap();
        let e = standard_l_factorization(&d, &FiniteOrderClass::trivial());
        assert_eq!(e.to_string(), "Z_F(s)^7");
    }

    #[test]
    fn chamber_is_enforced() {
        let half = Mu::new(FiniteOrderClass::trivial(), Q::new(1, 2));
        assert!(BorelInductionDatum::new(Mu::new(FiniteOrderClass::trivial(), Q::from_integer(2)), half).is_err());
    }

    #[test]
    fn gh_orders() {
        for (n, o) in [(0, 5), (1, 3), (2, 1), (3, -1)] {
            let r = ginzburg_hundley_check(GhScenario::ThetaLift, n).unwrap();
            assert_eq!(r.theta_order, o);
            assert_eq!(r.contradiction, n > 1);
        }
    }
}
