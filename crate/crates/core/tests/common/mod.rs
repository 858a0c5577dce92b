//! Brute-force oracles and generators shared by the property tests and the acceptance run.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use eisenpole::affine::Affine;
use eisenpole::characters::{inducing_character, FiniteOrderClass, Gen, Mode as CharMode};
use eisenpole::gk::{gk_for_character, gk_tail};
use eisenpole::lfun::{expand_at, order_at, LExpr, LKey};
use eisenpole::root_datum::{root_orbits, EtaleForm, Field, FormKind, Root};
use eisenpole::weyl::{enumerate_coset_reps, relative_group, WeylWord};
use eisenpole::{BigQ, Q};
use proptest::prelude::*;

/// All 24 roots of D4, generated from the simple roots by reflecting until closed.
pub fn all_roots() -> Vec<Root> {
    let mut seen: BTreeSet<Root> = (1..=4).map(Root::simple).collect();
    loop {
        let next: Vec<Root> = seen.iter().flat_map(|r| (1..=4).map(move |j| r.reflect(j))).collect();
        let before = seen.len();
        seen.extend(next);
        if seen.len() == before {
            return seen.into_iter().collect();
        }
    }
}

/// A group element as the images of `all_roots()`, by index.
pub type RootPerm = Vec<usize>;

pub struct Brute {
    pub roots: Vec<Root>,
    pub gens: BTreeMap<u8, RootPerm>,
}

impl Brute {
    pub fn new(form: &EtaleForm) -> Brute {
        let roots = all_roots();
        let idx = |r: &Root| roots.iter().position(|x| x == r).expect("closed under reflections");
        let gens = form
            .labels()
            .into_iter()
            .map(|l| {
                let orbit = form.simple_orbit(l as usize);
                let p = roots
                    .iter()
                    .map(|r| idx(&orbit.iter().fold(*r, |acc, &j| acc.reflect(j))))
                    .collect();
                (l, p)
            })
            .collect();
        Brute { roots, gens }
    }

    pub fn identity(&self) -> RootPerm {
        (0..self.roots.len()).collect()
    }

    /// (p∘q)(r) = p(q(r)).
    pub fn compose(p: &RootPerm, q: &RootPerm) -> RootPerm {
        q.iter().map(|&i| p[i]).collect()
    }

    pub fn of_word(&self, w: &WeylWord) -> RootPerm {
        w.letters.iter().fold(self.identity(), |acc, l| Brute::compose(&acc, &self.gens[l]))
    }

    /// Number of positive roots sent negative.
    pub fn length(&self, p: &RootPerm) -> usize {
        (0..self.roots.len()).filter(|&i| self.roots[i].is_positive() && !self.roots[p[i]].is_positive()).count()
    }

    fn closure(&self, labels: &[u8]) -> BTreeSet<RootPerm> {
        let mut seen = BTreeSet::from([self.identity()]);
        let mut frontier = vec![self.identity()];
        while let Some(e) = frontier.pop() {
            for l in labels {
                let n = Brute::compose(&e, &self.gens[l]);
                if seen.insert(n.clone()) {
                    frontier.push(n);
                }
            }
        }
        seen
    }

    pub fn group(&self) -> BTreeSet<RootPerm> {
        let labels: Vec<u8> = self.gens.keys().copied().collect();
        self.closure(&labels)
    }

    /// Shortest element of every coset W_M·e, W_M generated by the labels other than 2.
    pub fn min_coset_reps(&self) -> BTreeSet<RootPerm> {
        let m_labels: Vec<u8> = self.gens.keys().copied().filter(|&l| l != 2).collect();
        let m = self.closure(&m_labels);
        self.group()
            .iter()
            .map(|e| {
                m.iter()
                    .map(|x| Brute::compose(x, e))
                    .min_by_key(|p| (self.length(p), p.clone()))
                    .expect("nonempty coset")
            })
            .collect()
    }
}

/// Relative group order, coset count, whether the fast coset list agrees, and orbit counts.
pub struct CosetOracle {
    pub group_order: usize,
    pub fast_group_order: usize,
    pub reps: usize,
    pub reps_agree: bool,
    pub orbits: usize,
    pub orbits_agree: bool,
}

pub fn coset_oracle(kind: FormKind) -> CosetOracle {
    let form = EtaleForm::new(kind);
    let b = Brute::new(&form);
    let brute_reps = b.min_coset_reps();
    let fast: BTreeSet<RootPerm> = enumerate_coset_reps(&form).iter().map(|w| b.of_word(w)).collect();
    let mut orbits: BTreeSet<BTreeSet<Root>> = BTreeSet::new();
    for r in all_roots().into_iter().filter(|r| r.is_positive()) {
        orbits.insert(form.diagram_action.iter().map(|p| r.permute(p)).collect());
    }
    let fast_orbits: BTreeSet<BTreeSet<Root>> =
        root_orbits(&form).into_iter().map(|o| o.members.into_iter().collect()).collect();
    CosetOracle {
        group_order: b.group().len(),
        fast_group_order: relative_group(&form).len(),
        reps: brute_reps.len(),
        reps_agree: fast == brute_reps && enumerate_coset_reps(&form).len() == brute_reps.len(),
        orbits: orbits.len(),
        orbits_agree: orbits == fast_orbits,
    }
}

/// Checks J(uv, χ) = J(u, χ)·J(v, u⁻¹χ) for every length-additive splitting of every
/// representative. Returns the number of splittings and the failures.
pub fn cocycle(kind: FormKind) -> (usize, Vec<String>) {
    let form = EtaleForm::new(kind);
    let ch = inducing_character(&form, &FiniteOrderClass::gen(Gen::Chi), CharMode::General).unwrap();
    let group = relative_group(&form);
    let mut count = 0;
    let mut bad = Vec::new();
    for w in enumerate_coset_reps(&form) {
        let e = w.element(&form).unwrap();
        let whole = gk_for_character(&form, &w, &ch).unwrap().expr;
        for u in &group {
            let v = u.inverse().mul(&e);
            if u.length(&form) + v.length(&form) != w.len() {
                continue;
            }
            count += 1;
            let head = WeylWord::canonical(&form, u);
            let tail = WeylWord::canonical(&form, &v);
            let left = gk_for_character(&form, &head, &ch).unwrap().expr;
            let right = gk_tail(&form, &head, &tail, &ch).unwrap();
            if left.mul(&right) != whole {
                bad.push(format!("{kind} {w} = {head}·{tail}"));
            }
        }
    }
    (count, bad)
}

/// Rewrites every zeta factor by Z(x) = Z(1 - x).
pub fn functional_equation(e: &LExpr) -> LExpr {
    let mut out = LExpr::one();
    for (k, n) in e.factors() {
        let key = if k.class.is_trivial() {
            let arg = Affine { lin: k.arg.lin.iter().map(|x| -x).collect(), c: Q::from_integer(1) - k.arg.c };
            LKey::new(k.field, arg, k.class.clone())
        } else {
            k.clone()
        };
        out.push(key, n);
    }
    out
}

fn key_strategy() -> impl Strategy<Value = (LKey, i32)> {
    (
        prop_oneof![Just(Field::F), Just(Field::K), Just(Field::E)],
        prop_oneof![Just(1i64), Just(2), Just(-1)],
        -6i64..=6,
        prop::bool::weighted(0.8),
        prop_oneof![Just(-2i32), Just(-1), Just(1), Just(2)],
    )
        .prop_map(|(field, a, b2, trivial, n)| {
            let class = if trivial { FiniteOrderClass::trivial() } else { FiniteOrderClass::gen(Gen::Eta(1)) };
            (LKey::new(field, Affine::line(Q::from_integer(a), Q::new(b2, 2)), class), n)
        })
}

pub fn lexpr_strategy() -> impl Strategy<Value = LExpr> {
    prop::collection::vec(key_strategy(), 0..5).prop_map(|ks| {
        let mut e = LExpr::one();
        for (k, n) in ks {
            e.push(k, n);
        }
        e
    })
}

pub fn point_strategy() -> impl Strategy<Value = Q> {
    prop_oneof![Just(Q::new(1, 2)), Just(Q::new(3, 2)), Just(Q::new(5, 2)), Just(Q::from_integer(1)), Just(Q::from_integer(0))]
}

/// Order additivity and agreement of the counted order with the expansion.
pub fn additivity(a: &LExpr, b: &LExpr, s0: Q) -> Result<(), String> {
    let ab = a.mul(b);
    let (oa, ob, oab) = (order_at(a, s0), order_at(b, s0), order_at(&ab, s0));
    if oab != oa + ob {
        return Err(format!("order of product {oab} != {oa} + {ob}"));
    }
    for e in [a, b, &ab] {
        let s = expand_at::<BigQ>(e, s0, 4).map_err(|x| x.to_string())?;
        if s.order() != Some(order_at(e, s0)) {
            return Err(format!("expansion of {e} at {s0} has order {:?}", s.order()));
        }
    }
    Ok(())
}

/// The expansion does not change under the functional equation.
pub fn fe_coherent(e: &LExpr, s0: Q) -> Result<(), String> {
    let f = functional_equation(e);
    let x = expand_at::<BigQ>(e, s0, 4).map_err(|x| x.to_string())?;
    let y = expand_at::<BigQ>(&f, s0, 4).map_err(|x| x.to_string())?;
    if x != y {
        return Err(format!("{e} and {f} expand differently at {s0}"));
    }
    if order_at(e, s0) != order_at(&f, s0) {
        return Err(format!("{e} and {f} have different orders at {s0}"));
    }
    Ok(())
}
