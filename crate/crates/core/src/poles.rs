//! Constant terms, Σ-sets, the two cancellation mechanisms and pole-order verdicts.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::characters::{
    check_class, inducing_character, FiniteOrderClass, Mode as CharMode, RealExponent, SpecialChar,
    TorusCharacter,
};
use crate::gk::{gk_for_character, gk_tail};
use crate::lfun::{
    is_nonzero_leading, leading_of_plain_sum, limit_is_minus_one, order_at, LExpr, Nonvanishing,
};
use crate::root_datum::{EtaleForm, FormKind};
use crate::scalar::fmt_q;
use crate::weyl::{act, enumerate_coset_reps, fixes_on_coroot, WeylWord};
use crate::{BigQ, Error, Poly, Result, Q};

/// One term of the constant term along the Borel: `w`, `w⁻¹·χ_s` and `J(w, χ_s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub word: WeylWord,
    pub character: TorusCharacter,
    pub gk: LExpr,
}

#[derive(Clone, Debug)]
pub struct ConstantTerm {
    pub form: EtaleForm,
    pub chi: FiniteOrderClass,
    pub inducing: TorusCharacter,
    pub rows: Vec<Row>,
}

impl ConstantTerm {
    pub fn row(&self, w: &WeylWord) -> Option<&Row> {
        self.rows.iter().find(|r| &r.word == w)
    }

    fn get(&self, w: &WeylWord) -> Result<&Row> {
        self.row(w).ok_or_else(|| Error::Internal(format!("{w} is not a coset representative")))
    }

    pub fn order(&self, w: &WeylWord, s0: Q) -> Result<i32> {
        Ok(order_at(&self.get(w)?.gk, s0))
    }

    pub fn special(&self, w: &WeylWord, s0: Q) -> Result<SpecialChar> {
        Ok(self.get(w)?.character.specialize(s0))
    }
}

pub fn constant_term(form: &EtaleForm, chi: &FiniteOrderClass) -> Result<ConstantTerm> {
    let inducing = inducing_character(form, chi, CharMode::Line)?;
    let rows = enumerate_coset_reps(form)
        .into_iter()
        .map(|word| {
            let character = act(form, &word, &inducing)?;
            let gk = gk_for_character(form, &word, &inducing)?.expr;
            Ok(Row { word, character, gk })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstantTerm { form: form.clone(), chi: chi.clone(), inducing, rows })
}

/// Σ(E, χ, s0, m) with its partition into ~_{s0} classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaSet {
    #[serde(serialize_with = "ser_q")]
    pub s0: Q,
    pub m: i32,
    pub members: Vec<WeylWord>,
    pub classes: Vec<Vec<WeylWord>>,
}

fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(q))
}

impl Serialize for WeylWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Groups words by their specialized character; classes come in order of first member.
pub fn classes_of(ct: &ConstantTerm, words: &[WeylWord], s0: Q) -> Result<Vec<Vec<WeylWord>>> {
    let mut by_char: Vec<(SpecialChar, Vec<WeylWord>)> = Vec::new();
    for w in words {
        let c = ct.special(w, s0)?;
        match by_char.iter_mut().find(|(k, _)| *k == c) {
            Some((_, v)) => v.push(w.clone()),
            None => by_char.push((c, vec![w.clone()])),
        }
    }
    Ok(by_char.into_iter().map(|(_, v)| v).collect())
}

pub fn sigma_of(ct: &ConstantTerm, s0: Q, m: i32) -> Result<SigmaSet> {
    let mut members = Vec::new();
    for r in &ct.rows {
        if order_at(&r.gk, s0) >= m {
            members.push(r.word.clone());
        }
    }
    let classes = classes_of(ct, &members, s0)?;
    Ok(SigmaSet { s0, m, members, classes })
}

pub fn sigma(form: &EtaleForm, chi: &FiniteOrderClass, s0: Q, m: i32) -> Result<SigmaSet> {
    sigma_of(&constant_term(form, chi)?, s0, m)
}

/// Largest pole order of a single term; 0 when every term is holomorphic.
pub fn trivial_bound(ct: &ConstantTerm, s0: Q) -> i32 {
    ct.rows.iter().map(|r| order_at(&r.gk, s0)).max().unwrap_or(0).max(0)
}

/// Which argument showed that `M(tail)` acts as `-1` on the image of `M(lower)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// A simple reflection fixing the character, with trivial rank-one character.
    KeysShahidi,
    /// The tail's GK ratio tends to -1 after the functional equation.
    FunctionalEquation,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::KeysShahidi => "Keys-Shahidi",
            Rule::FunctionalEquation => "functional equation",
        })
    }
}

/// A candidate pair {lower, upper = lower·tail}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub lower: WeylWord,
    pub upper: WeylWord,
    pub tail: WeylWord,
    pub rule: Rule,
    /// For the functional-equation rule, the ratio that was collapsed to -1.
    pub ratio: Option<String>,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}·{} ({})", self.upper.compact(), self.lower.compact(), self.tail.compact(), self.rule)?;
        if let Some(r) = &self.ratio {
            write!(f, ": {r} -> -1")?;
        }
        Ok(())
    }
}

/// The factorization `upper = lower · tail` with lengths adding, if there is one.
fn tail_of(form: &EtaleForm, lower: &WeylWord, upper: &WeylWord) -> Result<Option<WeylWord>> {
    if lower.len() >= upper.len() {
        return Ok(None);
    }
    let e = lower.element(form)?.inverse().mul(&upper.element(form)?);
    let tail = WeylWord::canonical(form, &e);
    Ok((lower.len() + tail.len() == upper.len()).then_some(tail))
}

/// Checks the functional-equation rule on `J(tail, lower⁻¹·χ_s)`.
fn fe_ratio(ct: &ConstantTerm, lower: &WeylWord, tail: &WeylWord, s0: Q) -> Result<Option<String>> {
    let r = gk_tail(&ct.form, lower, tail, &ct.inducing)?;
    if order_at(&r, s0) != 0 {
        return Ok(None);
    }
    let (triv, rest) = r.split_trivial();
    // nontrivial factors must pair L(p, c) with L(1 - p, c⁻¹) across the fraction bar
    let mut num: Vec<(crate::root_datum::Field, Q, FiniteOrderClass)> = Vec::new();
    let mut den: Vec<(crate::root_datum::Field, Q, FiniteOrderClass)> = Vec::new();
    for (k, n) in rest.factors() {
        if !k.class.is_algebra_character() {
            return Ok(None);
        }
        let (a, b) = k.arg.as_line().ok_or_else(|| Error::Internal("argument off the line".into()))?;
        let p = a * s0 + b;
        for _ in 0..n.abs() {
            if n > 0 {
                num.push((k.field, p, k.class.clone()));
            } else {
                den.push((k.field, p, k.class.clone()));
            }
        }
    }
    if num.len() != den.len() {
        return Ok(None);
    }
    for (f, p, c) in &num {
        let want = (*f, Q::one() - p, c.inv());
        match den.iter().position(|d| *d == want) {
            Some(i) => {
                den.remove(i);
            }
            None => return Ok(None),
        }
    }
    if !limit_is_minus_one::<BigQ>(&triv, s0)? {
        return Ok(None);
    }
    Ok(Some(r.to_string()))
}

/// Pairs inside one class that one of the rules justifies.
pub fn class_edges(ct: &ConstantTerm, class: &[WeylWord], s0: Q, allow_fe: bool) -> Result<Vec<Edge>> {
    let mut out = Vec::new();
    for lower in class {
        for upper in class {
            let Some(tail) = tail_of(&ct.form, lower, upper)? else { continue };
            if tail.len() == 1 {
                let moved = ct.special(lower, s0)?;
                if fixes_on_coroot(&ct.form, &moved, tail.letters[0])? {
                    out.push(Edge {
                        lower: lower.clone(),
                        upper: upper.clone(),
                        tail,
                        rule: Rule::KeysShahidi,
                        ratio: None,
                    });
                    continue;
                }
            }
            if allow_fe {
                if let Some(ratio) = fe_ratio(ct, lower, &tail, s0)? {
                    out.push(Edge {
                        lower: lower.clone(),
                        upper: upper.clone(),
                        tail,
                        rule: Rule::FunctionalEquation,
                        ratio: Some(ratio),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// A perfect matching of `class` using `edges`, by exhaustive search.
pub fn perfect_matching(class: &[WeylWord], edges: &[Edge]) -> Option<Vec<Edge>> {
    fn go(left: &[WeylWord], edges: &[Edge], acc: &mut Vec<Edge>) -> bool {
        let Some(first) = left.first() else { return true };
        for e in edges {
            let partner = if &e.lower == first {
                &e.upper
            } else if &e.upper == first {
                &e.lower
            } else {
                continue;
            };
            if !left[1..].contains(partner) {
                continue;
            }
            let rest: Vec<WeylWord> = left[1..].iter().filter(|w| *w != partner).cloned().collect();
            acc.push(e.clone());
            if go(&rest, edges, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }
    if class.len() % 2 == 1 {
        return None;
    }
    let mut acc = Vec::new();
    go(class, edges, &mut acc).then_some(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassMatching {
    pub members: Vec<WeylWord>,
    pub pairs: Option<Vec<Edge>>,
}

/// Outcome of pairwise cancellation at the top order.
#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    pub level: i32,
    pub bound: i32,
    pub classes: Vec<ClassMatching>,
}

/// Tries to pair off every class of Σ(m); the bound drops by one when all classes pair.
pub fn pairing_cancellation_of(ct: &ConstantTerm, s0: Q, m: i32, allow_fe: bool) -> Result<Reduction> {
    if m <= 0 {
        return Ok(Reduction { level: m, bound: 0, classes: vec![] });
    }
    let sig = sigma_of(ct, s0, m)?;
    let mut classes = Vec::new();
    for class in &sig.classes {
        let edges = class_edges(ct, class, s0, allow_fe)?;
        classes.push(ClassMatching { members: class.clone(), pairs: perfect_matching(class, &edges) });
    }
    let all = classes.iter().all(|c| c.pairs.is_some());
    Ok(Reduction { level: m, bound: if all { m - 1 } else { m }, classes })
}

pub fn pairing_cancellation(
    form: &EtaleForm,
    chi: &FiniteOrderClass,
    s0: Q,
    m: i32,
    allow_fe: bool,
) -> Result<Reduction> {
    pairing_cancellation_of(&constant_term(form, chi)?, s0, m, allow_fe)
}

/// Laurent data of one class summed against the spherical section.
#[derive(Clone, Debug, Serialize)]
pub struct ClassSum {
    pub members: Vec<WeylWord>,
    /// Largest pole order among the members.
    pub top: i32,
    /// Pole order of the sum (negative for a zero).
    pub order: i32,
    #[serde(serialize_with = "ser_poly")]
    pub leading: Poly,
    pub status: Nonvanishing,
}

fn ser_poly<S: serde::Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct Spherical {
    pub order: i32,
    pub classes: Vec<ClassSum>,
}

impl Spherical {
    /// A class sum certified nonzero at the given order.
    pub fn certified(&self, n: i32) -> Option<&ClassSum> {
        self.classes.iter().find(|c| c.order == n && c.status.is_nonzero())
    }
}

/// Leading term of the sum of `J` over a set of words.
pub fn class_sum(ct: &ConstantTerm, members: &[WeylWord], s0: Q) -> Result<ClassSum> {
    let exprs: Vec<LExpr> = members.iter().map(|w| Ok(ct.get(w)?.gk.clone())).collect::<Result<_>>()?;
    let top = exprs.iter().map(|e| order_at(e, s0)).max().unwrap_or(0);
    let (order, leading) = match leading_of_plain_sum::<BigQ>(&exprs, s0) {
        Ok(Some((d, c))) => (-d, c),
        Ok(None) => (i32::MIN, Poly::zero()),
        // the sum vanishes to every order we can see
        Err(Error::DepthInsufficient(_)) if top <= crate::lfun::MAX_DEPTH as i32 => (0, Poly::zero()),
        Err(e) => return Err(e),
    };
    let status = is_nonzero_leading(&leading);
    Ok(ClassSum { members: members.to_vec(), top, order, leading, status })
}

/// Pole order of the constant term on the spherical section, class by class.
pub fn spherical_order_of(ct: &ConstantTerm, s0: Q) -> Result<Spherical> {
    let sig = sigma_of(ct, s0, 1)?;
    let mut classes = Vec::new();
    for class in &sig.classes {
        classes.push(class_sum(ct, class, s0)?);
    }
    let order = classes.iter().map(|c| c.order).max().unwrap_or(0).max(0);
    Ok(Spherical { order, classes })
}

pub fn spherical_order(form: &EtaleForm, chi: &FiniteOrderClass, s0: Q) -> Result<Spherical> {
    spherical_order_of(&constant_term(form, chi)?, s0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Trivial,
    Unconditional,
    Conjectural,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Mode> {
        match s {
            "trivial" => Ok(Mode::Trivial),
            "unconditional" => Ok(Mode::Unconditional),
            "conjectural" => Ok(Mode::Conjectural),
            _ => Err(Error::Invalid(format!("unknown mode {s:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Trivial => "trivial",
            Mode::Unconditional => "unconditional",
            Mode::Conjectural => "conjectural",
        }
    }
}

/// Rough type of χ relative to the form, which decides which rules apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CharType {
    Id,
    /// χ_E or χ_K (or χ_E²).
    Algebra,
    /// Quadratic and not attached to the algebra.
    Quadratic,
    Other,
}

pub fn char_type(form: FormKind, chi: &FiniteOrderClass) -> CharType {
    if chi.is_trivial() {
        return CharType::Id;
    }
    if let Ok(e) = FiniteOrderClass::chi_e(form) {
        if !e.is_trivial() && (*chi == e || *chi == e.pow(2)) {
            return CharType::Algebra;
        }
    }
    if chi.order() == Some(2) {
        CharType::Quadratic
    } else {
        CharType::Other
    }
}

const SPHERICAL_CONJ: &str = "archimedean degenerate principal series generated by the spherical vector";
const SPHERICAL_FINITE: &str = "finite-place degenerate principal series at s=1/2 generated by the spherical vector";
const LOCAL_SCALARS: &str = "local normalized operators act by 1 on the relevant image (appendix scalar rules)";

/// Triples where the argument uses generation by the spherical section.
pub fn spherical_generation_declared(form: FormKind, chi: &FiniteOrderClass, s0: Q) -> bool {
    let half = Q::new(1, 2);
    let t = char_type(form, chi);
    match form {
        FormKind::CubicGalois | FormKind::CubicNonGalois => {
            (s0 == half && (t == CharType::Id || t == CharType::Algebra))
                || (s0 == Q::new(3, 2) && t == CharType::Id)
        }
        FormKind::QuadTimesF => s0 == half && matches!(t, CharType::Id | CharType::Algebra | CharType::Quadratic),
        FormKind::Split => s0 == half && t == CharType::Id,
    }
}

/// Triples where attainment rests on a section built place by place, outside the engine.
fn attained_by_axiom(form: FormKind, chi: &FiniteOrderClass, s0: Q) -> Option<&'static str> {
    let t = char_type(form, chi);
    let half = Q::new(1, 2);
    match (form, t) {
        (FormKind::QuadTimesF | FormKind::Split, CharType::Quadratic) if s0 == half => {
            Some("attained by ramified-section argument (axiom)")
        }
        _ => None,
    }
}

/// Triples whose verdict is taken from an external reference.
fn external(form: FormKind, chi: &FiniteOrderClass, s0: Q) -> bool {
    form == FormKind::CubicGalois && char_type(form, chi) == CharType::Algebra && s0 == Q::new(3, 2)
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Singleton { word: WeylWord },
    ClassSum { members: Vec<WeylWord>, leading: String, axioms: Vec<String> },
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Attainment {
    /// No pole to attain.
    NotApplicable,
    Certified { witness: Witness },
    Axiom { statement: String },
    Undetermined,
}

impl Attainment {
    pub fn is_attained(&self) -> Option<bool> {
        match self {
            Attainment::NotApplicable => None,
            Attainment::Certified { .. } | Attainment::Axiom { .. } => Some(true),
            Attainment::Undetermined => None,
        }
    }
}

/// A class of Σ(m) that cannot cancel against anything.
pub fn non_cancellation_witness_of(
    ct: &ConstantTerm,
    s0: Q,
    m: i32,
    spherical: Option<&Spherical>,
) -> Result<Option<Witness>> {
    if m <= 0 {
        return Ok(None);
    }
    let sig = sigma_of(ct, s0, m)?;
    for class in &sig.classes {
        if class.len() == 1 && ct.order(&class[0], s0)? == m {
            return Ok(Some(Witness::Singleton { word: class[0].clone() }));
        }
    }
    if let Some(c) = spherical.and_then(|s| s.certified(m)) {
        let axioms = match &c.status {
            Nonvanishing::Nonzero { axioms } => axioms.clone(),
            _ => vec![],
        };
        return Ok(Some(Witness::ClassSum {
            members: c.members.clone(),
            leading: c.leading.to_string(),
            axioms,
        }));
    }
    Ok(None)
}

pub fn non_cancellation_witness(
    form: &EtaleForm,
    chi: &FiniteOrderClass,
    s0: Q,
    m: i32,
) -> Result<Option<Witness>> {
    non_cancellation_witness_of(&constant_term(form, chi)?, s0, m, None)
}

/// Everything known about one triple, computed once.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub ct: ConstantTerm,
    pub s0: Q,
    pub trivial: i32,
    pub unconditional: Reduction,
    pub full: Reduction,
    pub spherical: Option<Spherical>,
}

impl Analysis {
    pub fn new(form: &EtaleForm, chi: &FiniteOrderClass, s0: Q) -> Result<Analysis> {
        check_class(form, chi)?;
        if s0 <= Q::zero() {
            return Err(Error::Invalid(format!("s0 = {} is not in the right half plane", fmt_q(&s0))));
        }
        let ct = constant_term(form, chi)?;
        let trivial = trivial_bound(&ct, s0);
        let unconditional = pairing_cancellation_of(&ct, s0, trivial, false)?;
        let full = pairing_cancellation_of(&ct, s0, trivial, true)?;
        let spherical = if trivial > 0 && spherical_generation_declared(form.kind, chi, s0) {
            Some(spherical_order_of(&ct, s0)?)
        } else {
            None
        };
        Ok(Analysis { ct, s0, trivial, unconditional, full, spherical })
    }

    pub fn conjectural(&self) -> i32 {
        let mut n = self.full.bound;
        if let Some(sp) = &self.spherical {
            n = n.min(sp.order);
        }
        n
    }

    pub fn bound(&self, mode: Mode) -> i32 {
        match mode {
            Mode::Trivial => self.trivial,
            Mode::Unconditional => self.unconditional.bound,
            Mode::Conjectural => self.conjectural(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleVerdict {
    pub form: FormKind,
    pub chi: String,
    #[serde(serialize_with = "ser_q")]
    pub s0: Q,
    pub mode: Mode,
    pub trivial_bound: i32,
    pub unconditional_bound: i32,
    pub conjectural_order: i32,
    /// The number the mode reports.
    pub order: i32,
    pub attained: Attainment,
    pub assumptions: Vec<String>,
    pub provenance: Option<String>,
    pub trace: Vec<String>,
}

fn describe(red: &Reduction) -> Vec<String> {
    let mut out = Vec::new();
    for c in &red.classes {
        let names: Vec<String> = c.members.iter().map(|w| w.compact()).collect();
        match &c.pairs {
            Some(p) => {
                let ps: Vec<String> = p.iter().map(|e| e.to_string()).collect();
                out.push(format!("class {{{}}} pairs off: {}", names.join(", "), ps.join("; ")));
            }
            None => out.push(format!("class {{{}}} does not pair off", names.join(", "))),
        }
    }
    out
}

pub fn verdict_of(a: &Analysis, mode: Mode) -> Result<PoleVerdict> {
    let form = a.ct.form.kind;
    let chi = &a.ct.chi;
    let s0 = a.s0;
    let order = a.bound(mode);
    let mut trace = vec![format!("trivial bound {} from the largest single-term pole", a.trivial)];
    let mut assumptions = Vec::new();
    if mode != Mode::Trivial && a.trivial > 0 {
        let red = if mode == Mode::Unconditional { &a.unconditional } else { &a.full };
        trace.push(format!("pairing at order {}:", red.level));
        trace.extend(describe(red).into_iter().map(|l| format!("  {l}")));
        trace.push(format!("pairing bound {}", red.bound));
        if red.classes.iter().flat_map(|c| c.pairs.iter().flatten()).any(|e| e.rule == Rule::FunctionalEquation) {
            assumptions.push(LOCAL_SCALARS.to_string());
        }
    }
    if mode == Mode::Conjectural {
        if let Some(sp) = &a.spherical {
            for c in &sp.classes {
                let names: Vec<String> = c.members.iter().map(|w| w.compact()).collect();
                trace.push(format!(
                    "spherical class {{{}}}: top {}, sum order {}",
                    names.join(", "),
                    c.top,
                    c.order.max(-99)
                ));
            }
            trace.push(format!("spherical order {}", sp.order));
            if sp.order < a.full.bound {
                assumptions.push(SPHERICAL_CONJ.to_string());
                if form == FormKind::Split || form == FormKind::QuadTimesF {
                    assumptions.push(SPHERICAL_FINITE.to_string());
                }
            }
        }
    }
    let provenance = external(form, chi, s0).then(|| "external reference".to_string());
    let attained = if order == 0 {
        Attainment::NotApplicable
    } else {
        let sp = if mode == Mode::Conjectural { a.spherical.as_ref() } else { None };
        match non_cancellation_witness_of(&a.ct, s0, order, sp)? {
            Some(w) => Attainment::Certified { witness: w },
            None => match attained_by_axiom(form, chi, s0) {
                Some(st) => Attainment::Axiom { statement: st.to_string() },
                None if provenance.is_some() => {
                    Attainment::Axiom { statement: "attained per external reference".to_string() }
                }
                None => Attainment::Undetermined,
            },
        }
    };
    Ok(PoleVerdict {
        form,
        chi: chi.to_string(),
        s0,
        mode,
        trivial_bound: a.trivial,
        unconditional_bound: a.unconditional.bound,
        conjectural_order: a.conjectural(),
        order,
        attained,
        assumptions,
        provenance,
        trace,
    })
}

pub fn verdict(form: &EtaleForm, chi: &FiniteOrderClass, s0: Q, mode: Mode) -> Result<PoleVerdict> {
    verdict_of(&Analysis::new(form, chi, s0)?, mode)
}

/// A column of the pole tables: a point and a kind of character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Column {
    HalfId,
    HalfAlgebra,
    HalfQuad,
    ThreeHalvesId,
    ThreeHalvesAlgebra,
    FiveHalvesId,
}

impl Column {
    pub const ALL: [Column; 6] = [
        Column::HalfId,
        Column::HalfAlgebra,
        Column::HalfQuad,
        Column::ThreeHalvesId,
        Column::ThreeHalvesAlgebra,
        Column::FiveHalvesId,
    ];

    pub fn s0(&self) -> Q {
        match self {
            Column::HalfId | Column::HalfAlgebra | Column::HalfQuad => Q::new(1, 2),
            Column::ThreeHalvesId | Column::ThreeHalvesAlgebra => Q::new(3, 2),
            Column::FiveHalvesId => Q::new(5, 2),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Column::HalfId => "1/2 id",
            Column::HalfAlgebra => "1/2 chi_E",
            Column::HalfQuad => "1/2 quad",
            Column::ThreeHalvesId => "3/2 id",
            Column::ThreeHalvesAlgebra => "3/2 chi_E",
            Column::FiveHalvesId => "5/2 id",
        }
    }

    /// Representative class; `None` when the column does not exist for the form
    /// (no χ_E for a non-Galois cubic, χ_E = Id when split).
    pub fn class(&self, form: FormKind) -> Option<FiniteOrderClass> {
        match self {
            Column::HalfId | Column::ThreeHalvesId | Column::FiveHalvesId => Some(FiniteOrderClass::trivial()),
            Column::HalfQuad => Some(FiniteOrderClass::gen(crate::characters::Gen::Eta(0))),
            Column::HalfAlgebra | Column::ThreeHalvesAlgebra => {
                FiniteOrderClass::chi_e(form).ok().filter(|c| !c.is_trivial())
            }
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableCell {
    pub form: FormKind,
    pub column: Column,
    pub chi: String,
    pub order: i32,
    pub attained: Option<bool>,
}

/// All cells of one mode's table, in form-then-column order.
pub fn pole_table(mode: Mode) -> Result<Vec<TableCell>> {
    let mut out = Vec::new();
    for form in FormKind::ALL {
        let ef = EtaleForm::new(form);
        for col in Column::ALL {
            let Some(chi) = col.class(form) else { continue };
            let v = verdict(&ef, &chi, col.s0(), mode)?;
            out.push(TableCell {
                form,
                column: col,
                chi: chi.to_string(),
                order: v.order,
                attained: if mode == Mode::Conjectural { v.attained.is_attained() } else { None },
            });
        }
    }
    Ok(out)
}

/// Whether a class is known to contribute at the leading order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Survival {
    Certain,
    Possible,
    Cancels,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentClass {
    pub members: Vec<WeylWord>,
    pub exponent: String,
    pub negative: bool,
    pub survival: Survival,
    #[serde(skip)]
    pub real: RealExponent,
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareIntegrability {
    pub order: i32,
    pub classes: Vec<ExponentClass>,
    /// `None` when the surviving classes cannot be pinned down.
    pub square_integrable: Option<bool>,
}

/// Langlands' criterion applied to the classes surviving at the conjectural order.
pub fn square_integrable_of(a: &Analysis) -> Result<SquareIntegrability> {
    let n = a.conjectural();
    if n == 0 {
        return Err(Error::NoPole);
    }
    let sig = sigma_of(&a.ct, a.s0, n)?;
    let mut classes = Vec::new();
    for class in &sig.classes {
        let real = a.ct.special(&class[0], a.s0)?.real_exponent();
        let survival = if let Some(sp) = &a.spherical {
            match sp.classes.iter().find(|c| c.members.iter().any(|w| class.contains(w))) {
                Some(c) if c.order == n && c.status.is_nonzero() => Survival::Certain,
                Some(c) if c.order == n => Survival::Possible,
                _ => Survival::Cancels,
            }
        } else if class.len() == 1 {
            Survival::Certain
        } else {
            let edges = class_edges(&a.ct, class, a.s0, true)?;
            let all_top = class.iter().map(|w| a.ct.order(w, a.s0)).collect::<Result<Vec<_>>>()?;
            if all_top.iter().all(|&o| o == n) && perfect_matching(class, &edges).is_some() {
                Survival::Cancels
            } else {
                Survival::Possible
            }
        };
        classes.push(ExponentClass {
            members: class.clone(),
            exponent: real.to_string(),
            negative: real.is_negative(),
            survival,
            real,
        });
    }
    let live: Vec<&ExponentClass> = classes.iter().filter(|c| c.survival != Survival::Cancels).collect();
    let verdict = if live.iter().all(|c| c.negative) {
        Some(true)
    } else if live.iter().any(|c| c.survival == Survival::Certain && !c.negative) {
        Some(false)
    } else {
        None
    };
    Ok(SquareIntegrability { order: n, classes, square_integrable: verdict })
}

pub fn square_integrable(form: &EtaleForm, chi: &FiniteOrderClass, s0: Q) -> Result<SquareIntegrability> {
    square_integrable_of(&Analysis::new(form, chi, s0)?)
}

/// Exponents `Re(w⁻¹·χ_{s0})` of every representative.
pub fn exponents(ct: &ConstantTerm, s0: Q) -> Vec<(WeylWord, RealExponent)> {
    ct.rows.iter().map(|r| (r.word.clone(), r.character.specialize(s0).real_exponent())).collect()
}

/// Counts of cells per mode, grouped by form, for quick summaries.
pub fn table_summary(cells: &[TableCell]) -> BTreeMap<FormKind, Vec<(Column, i32)>> {
    let mut out: BTreeMap<FormKind, Vec<(Column, i32)>> = BTreeMap::new();
    for c in cells {
        out.entry(c.form).or_default().push((c.column, c.order));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::Gen;

    fn half() -> Q {
        Q::new(1, 2)
    }

    fn words(form: &EtaleForm, ws: &[&str]) -> Vec<WeylWord> {
        ws.iter().map(|w| WeylWord::parse(form, w).unwrap()).collect()
    }

    #[test]
    fn row_counts() {
        for (k, n) in [(FormKind::CubicGalois, 6), (FormKind::QuadTimesF, 12), (FormKind::Split, 24)] {
            let ct = constant_term(&EtaleForm::new(k), &FiniteOrderClass::trivial()).unwrap();
            assert_eq!(ct.rows.len(), n);
        }
    }

    #[test]
    fn cubic_sigma() {
        let form = EtaleForm::new(FormKind::CubicGalois);
        let s = sigma(&form, &FiniteOrderClass::trivial(), half(), 2).unwrap();
        assert_eq!(s.members, words(&form, &["2,1,2", "2,1,2,1"]));
        assert_eq!(s.classes.len(), 1);
    }

    #[test]
    fn chi_e_half_pairs_by_both_rules() {
        let form = EtaleForm::new(FormKind::CubicGalois);
        let chi = FiniteOrderClass::gen(Gen::ChiE);
        let red = pairing_cancellation(&form, &chi, half(), 1, true).unwrap();
        assert_eq!(red.bound, 0);
        let rules: Vec<Rule> = red.classes.iter().flat_map(|c| c.pairs.clone().unwrap()).map(|e| e.rule).collect();
        assert!(rules.contains(&Rule::KeysShahidi) && rules.contains(&Rule::FunctionalEquation));
        let red = pairing_cancellation(&form, &chi, half(), 1, false).unwrap();
        assert_eq!(red.bound, 1);
    }

    #[test]
    fn generic_point_has_no_poles() {
        let form = EtaleForm::new(FormKind::Split);
        let s = sigma(&form, &FiniteOrderClass::trivial(), Q::new(7, 3), 1).unwrap();
        assert!(s.members.is_empty());
    }
}
