//! Finite-order character classes and torus characters.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::affine::Affine;
use crate::root_datum::{EtaleForm, Field, FormKind, CARTAN_INV_2};
use crate::scalar::fmt_q;
use crate::{Error, Result, Q};

/// Generators of the formal group of finite-order Hecke characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    /// A generic character with no relations.
    Chi,
    /// The quadratic character attached to K.
    ChiK,
    /// The cubic character attached to a Galois cubic field.
    ChiE,
    /// Auxiliary quadratic characters, assumed independent of everything else.
    Eta(u8),
}

impl Gen {
    /// Order of the generator, 0 for free.
    pub fn order(&self) -> i64 {
        match self {
            Gen::Chi => 0,
            Gen::ChiK | Gen::Eta(_) => 2,
            Gen::ChiE => 3,
        }
    }

    fn name(&self) -> String {
        match self {
            Gen::Chi => "chi".into(),
            Gen::ChiK => "chi_K".into(),
            Gen::ChiE => "chi_E".into(),
            Gen::Eta(0) => "eta".into(),
            Gen::Eta(i) => format!("eta{i}"),
        }
    }
}

/// An element of the formal abelian group, in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteOrderClass(BTreeMap<Gen, i64>);

impl FiniteOrderClass {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn gen(g: Gen) -> Self {
        Self::from_exponents([(g, 1)])
    }

    pub fn from_exponents(it: impl IntoIterator<Item = (Gen, i64)>) -> Self {
        let mut m = BTreeMap::new();
        for (g, e) in it {
            *m.entry(g).or_insert(0) += e;
        }
        Self(m).normalized()
    }

    fn normalized(mut self) -> Self {
        for (g, e) in self.0.iter_mut() {
            let n = g.order();
            if n > 0 {
                *e = e.rem_euclid(n);
            }
        }
        self.0.retain(|_, e| *e != 0);
        self
    }

    pub fn exponents(&self) -> &BTreeMap<Gen, i64> {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_exponents(self.0.iter().chain(other.0.iter()).map(|(g, e)| (*g, *e)))
    }

    pub fn pow(&self, n: i64) -> Self {
        Self::from_exponents(self.0.iter().map(|(g, e)| (*g, e * n)))
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    /// Order of the element, `None` when a free generator occurs.
    pub fn order(&self) -> Option<i64> {
        let mut n = 1;
        for (g, e) in &self.0 {
            let o = g.order();
            if o == 0 {
                return None;
            }
            let k = o / gcd(o, *e);
            n = n / gcd(n, k) * k;
        }
        Some(n)
    }

    pub fn is_quadratic(&self) -> bool {
        self.order().is_some_and(|o| o <= 2)
    }

    /// Composition with the norm to `field`: generators whose kernel contains the norms die.
    pub fn restrict(&self, form: FormKind, field: Field) -> Self {
        let dead = |g: &Gen| match (field, g) {
            (Field::K, Gen::ChiK) => true,
            (Field::E, Gen::ChiE) => form == FormKind::CubicGalois,
            _ => false,
        };
        Self(self.0.iter().filter(|(g, _)| !dead(g)).map(|(g, e)| (*g, *e)).collect())
    }

    /// Whether every generator involved is attached to the étale algebra itself.
    pub fn is_algebra_character(&self) -> bool {
        self.0.keys().all(|g| matches!(g, Gen::ChiK | Gen::ChiE))
    }

    /// Parses "id", "chi", "chi_E", "chi_K", "quad", "eta1", products with '*', powers with '^'.
    pub fn parse(form: FormKind, text: &str) -> Result<Self> {
        let mut out = Self::trivial();
        for tok in text.split('*').map(str::trim) {
            let (name, pow) = match tok.split_once('^') {
                Some((n, p)) => (
                    n.trim(),
                    p.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("bad power in {tok:?}")))?,
                ),
                None => (tok, 1),
            };
            let base = match name {
                "id" | "1" | "Id" => Self::trivial(),
                "chi" => Self::gen(Gen::Chi),
                "quad" | "eta" => Self::gen(Gen::Eta(0)),
                "chi_K" => {
                    if form != FormKind::QuadTimesF {
                        return Err(Error::UndefinedClass(name.into()));
                    }
                    Self::gen(Gen::ChiK)
                }
                "chi_E" => Self::chi_e(form)?,
                n if n.starts_with("eta") => {
                    let i: u8 = n[3..].parse().map_err(|_| Error::Invalid(format!("bad class {n:?}")))?;
                    Self::gen(Gen::Eta(i))
                }
                _ => return Err(Error::Invalid(format!("unknown character class {name:?}"))),
            };
            out = out.mul(&base.pow(pow));
        }
        Ok(out)
    }

    /// Short name for tables: "id", "quad", otherwise the class itself.
    pub fn label(&self) -> String {
        if self.is_trivial() {
            "id".into()
        } else if *self == Self::gen(Gen::Eta(0)) {
            "quad".into()
        } else {
            self.to_string()
        }
    }

    /// The character attached to the étale algebra.
    pub fn chi_e(form: FormKind) -> Result<Self> {
        match form {
            FormKind::Split => Ok(Self::trivial()),
            FormKind::QuadTimesF => Ok(Self::gen(Gen::ChiK)),
            FormKind::CubicGalois => Ok(Self::gen(Gen::ChiE)),
            FormKind::CubicNonGalois => Err(Error::UndefinedClass("chi_E".into())),
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl fmt::Display for FiniteOrderClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, e)| if *e == 1 { g.name() } else { format!("{}^{}", g.name(), e) })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// How the exponents of an inducing character are parametrized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Along the line λ_s, one variable s.
    Line,
    /// General λ = (s_1, .., s_d).
    General,
}

/// A character of the torus: per coordinate a power of χ (composed with the norm on
/// coordinates over K or E) and an exponent of the absolute value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusCharacter {
    pub form: FormKind,
    /// The class of χ itself.
    pub chi: FiniteOrderClass,
    pub chi_pow: Vec<i64>,
    pub exps: Vec<Affine>,
}

/// The character χ_s (or χ composed with λ) for a form.
pub fn inducing_character(form: &EtaleForm, chi: &FiniteOrderClass, mode: Mode) -> Result<TorusCharacter> {
    check_class(form, chi)?;
    let d = form.coord_dim;
    let two = form.label_coord(2)?;
    let mut chi_pow = vec![0; d];
    chi_pow[two] = 1;
    let exps = match mode {
        Mode::Line => (0..d)
            .map(|k| {
                if k == two {
                    Affine::line(Q::one(), Q::new(3, 2))
                } else {
                    Affine::line(Q::zero(), -Q::one())
                }
            })
            .collect(),
        Mode::General => (0..d).map(|k| Affine::var(d, k)).collect(),
    };
    Ok(TorusCharacter { form: form.kind, chi: chi.clone(), chi_pow, exps })
}

/// Rejects classes that mention characters the form does not have.
pub fn check_class(form: &EtaleForm, chi: &FiniteOrderClass) -> Result<()> {
    for g in chi.exponents().keys() {
        let ok = match g {
            Gen::ChiK => form.kind == FormKind::QuadTimesF,
            Gen::ChiE => form.kind == FormKind::CubicGalois,
            _ => true,
        };
        if !ok {
            return Err(Error::UndefinedClass(chi.to_string()));
        }
    }
    Ok(())
}

impl TorusCharacter {
    pub fn absolute_exps(&self, form: &EtaleForm) -> [Affine; 4] {
        std::array::from_fn(|i| self.exps[form.coord_of(i + 1)].clone())
    }

    pub fn absolute_pows(&self, form: &EtaleForm) -> [i64; 4] {
        std::array::from_fn(|i| self.chi_pow[form.coord_of(i + 1)])
    }

    /// Restricts absolute data to coordinates, checking conjugate slots agree.
    pub fn from_absolute(
        form: &EtaleForm,
        chi: FiniteOrderClass,
        pows: &[i64; 4],
        exps: &[Affine; 4],
    ) -> Result<TorusCharacter> {
        let labels = form.labels();
        let mut chi_pow = Vec::new();
        let mut out_exps = Vec::new();
        for &l in &labels {
            let orbit = form.simple_orbit(l as usize);
            let i0 = orbit[0] - 1;
            for &j in &orbit {
                if pows[j - 1] != pows[i0] || exps[j - 1] != exps[i0] {
                    return Err(Error::Internal(format!(
                        "character is not constant on the orbit of {l}"
                    )));
                }
            }
            chi_pow.push(pows[i0]);
            out_exps.push(exps[i0].clone());
        }
        Ok(TorusCharacter { form: form.kind, chi, chi_pow, exps: out_exps })
    }

    /// Finite-order part on coordinate `k`, as a character of that coordinate's field.
    pub fn class_at(&self, form: &EtaleForm, k: usize) -> FiniteOrderClass {
        self.chi.pow(self.chi_pow[k]).restrict(form.kind, form.coord_field(k))
    }

    pub fn specialize(&self, s0: Q) -> SpecialChar {
        let form = EtaleForm::new(self.form);
        SpecialChar {
            form: self.form,
            classes: (0..self.exps.len()).map(|k| self.class_at(&form, k)).collect(),
            exps: self.exps.iter().map(|a| a.eval(&vec![s0; a.dim()])).collect(),
        }
    }

    /// Substitutes the exponents, e.g. λ ↦ λ_s.
    pub fn substitute(&self, subs: &[Affine]) -> TorusCharacter {
        TorusCharacter {
            exps: self.exps.iter().map(|a| a.substitute(subs)).collect(),
            ..self.clone()
        }
    }

    /// Human-readable rendering: `chi(Nm(t1)/t2^2) |t2|_F^(2s) |t1|_E^(-s-1/2)`.
    pub fn render(&self) -> String {
        let form = EtaleForm::new(self.form);
        let fields = form.coord_fields();
        let name = |k: usize| {
            if fields[k] == Field::F {
                format!("t{}", form.labels()[k])
            } else {
                format!("Nm(t{})", form.labels()[k])
            }
        };
        let mono = |pos: bool| {
            let parts: Vec<String> = (0..self.chi_pow.len())
                .filter(|&k| (self.chi_pow[k] > 0) == pos && self.chi_pow[k] != 0)
                .map(|k| match self.chi_pow[k].abs() {
                    1 => name(k),
                    e => format!("{}^{}", name(k), e),
                })
                .collect();
            parts.join(" ")
        };
        let (num, den) = (mono(true), mono(false));
        let fin = match (num.is_empty(), den.is_empty()) {
            (true, true) => String::new(),
            (false, true) => format!("chi({num})"),
            (true, false) => format!("chi(1/{den})"),
            (false, false) => format!("chi({num}/{den})"),
        };
        let abs: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, a)| *a != &Affine::constant(a.dim(), Q::zero()))
            .map(|(k, a)| format!("|t{}|_{}^({})", form.labels()[k], fields[k], a))
            .collect();
        let mut out = fin;
        for a in abs {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&a);
        }
        if out.is_empty() {
            "1".into()
        } else {
            out
        }
    }
}

/// A character specialized at a point; equality is the relation ~_{s0}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpecialChar {
    pub form: FormKind,
    pub classes: Vec<FiniteOrderClass>,
    pub exps: Vec<Q>,
}

impl SpecialChar {
    /// Real exponent in the simple-root basis, collapsed to the form's coordinates.
    pub fn real_exponent(&self) -> RealExponent {
        let form = EtaleForm::new(self.form);
        let lam: [Q; 4] = std::array::from_fn(|i| self.exps[form.coord_of(i + 1)]);
        let abs: [Q; 4] = std::array::from_fn(|j| {
            (0..4).map(|i| lam[i] * Q::from_integer(CARTAN_INV_2[i][j])).sum::<Q>() / Q::from_integer(2)
        });
        let labels = form.labels();
        RealExponent {
            coeffs: labels.iter().map(|&l| abs[l as usize - 1]).collect(),
            norm: (0..labels.len()).map(|k| form.coord_field(k) != Field::F).collect(),
        }
    }
}

impl fmt::Display for SpecialChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = EtaleForm::new(self.form);
        let parts: Vec<String> = (0..self.exps.len())
            .map(|k| format!("t{}: {} |.|^{}", form.labels()[k], self.classes[k], fmt_q(&self.exps[k])))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

/// Exponent vector; coordinates over K or E use the norm-type basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RealExponent {
    pub coeffs: Vec<Q>,
    pub norm: Vec<bool>,
}

impl RealExponent {
    pub fn is_negative(&self) -> bool {
        self.coeffs.iter().all(|c| *c < Q::zero())
    }
}

impl fmt::Display for RealExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.coeffs.len();
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut basis = vec!["0"; d];
            basis[k] = "1";
            let b = format!("[{}]", basis.join(","));
            let b = if self.norm[k] { format!("Nm{b}") } else { b };
            let sign = if *c < Q::zero() { "-" } else if out.is_empty() { "" } else { "+" };
            let mag = c.abs();
            let coef = if mag == Q::one() { String::new() } else { fmt_q(&mag) };
            out.push_str(&format!("{sign}{coef}{b}"));
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{act, WeylWord};

    #[test]
    fn group_relations() {
        let k = FiniteOrderClass::gen(Gen::ChiK);
        assert!(k.pow(2).is_trivial());
        let e = FiniteOrderClass::gen(Gen::ChiE);
        assert!(e.pow(3).is_trivial());
        assert_eq!(e.inv(), e.pow(2));
        assert_eq!(FiniteOrderClass::parse(FormKind::Split, "chi_E").unwrap(), FiniteOrderClass::trivial());
        assert_eq!(
            FiniteOrderClass::parse(FormKind::QuadTimesF, "chi_E").unwrap(),
            FiniteOrderClass::gen(Gen::ChiK)
        );
        assert!(FiniteOrderClass::parse(FormKind::CubicNonGalois, "chi_E").is_err());
        assert!(FiniteOrderClass::parse(FormKind::Split, "chi_K").is_err());
        let q = FiniteOrderClass::parse(FormKind::QuadTimesF, "quad*chi_K").unwrap();
        assert_eq!(q.order(), Some(2));
        assert_eq!(q.to_string(), "chi_K*eta");
    }

    #[test]
    fn restriction_kills_norm_kernels() {
        let k = FiniteOrderClass::gen(Gen::ChiK);
        assert!(k.restrict(FormKind::QuadTimesF, Field::K).is_trivial());
        assert!(!k.restrict(FormKind::QuadTimesF, Field::F).is_trivial());
        let e = FiniteOrderClass::gen(Gen::ChiE);
        assert!(e.restrict(FormKind::CubicGalois, Field::E).is_trivial());
        let q = FiniteOrderClass::gen(Gen::Eta(0));
        assert!(!q.restrict(FormKind::QuadTimesF, Field::K).is_trivial());
    }

    #[test]
    fn split_word_two() {
        let form = EtaleForm::new(FormKind::Split);
        let ch = inducing_character(&form, &FiniteOrderClass::gen(Gen::Chi), Mode::Line).unwrap();
        let w = WeylWord::parse(&form, "2").unwrap();
        let m = act(&form, &w, &ch).unwrap();
        assert_eq!(m.chi_pow, vec![1, -1, 1, 1]);
        let half = Q::new(1, 2);
        assert_eq!(m.exps[0], Affine::line(Q::one(), half));
        assert_eq!(m.exps[1], Affine::line(-Q::one(), -Q::new(3, 2)));
    }

    #[test]
    fn exponents_in_root_basis() {
        let form = EtaleForm::new(FormKind::Split);
        let ch = inducing_character(&form, &FiniteOrderClass::trivial(), Mode::Line).unwrap();
        let e = ch.specialize(Q::new(1, 2)).real_exponent();
        assert_eq!(e.coeffs, vec![Q::zero(), Q::one(), Q::zero(), Q::zero()]);
        let e = ch.specialize(Q::new(3, 2)).real_exponent();
        assert_eq!(e.to_string(), "[1,0,0,0]+3[0,1,0,0]+[0,0,1,0]+[0,0,0,1]");
    }
}
