//! Relative Weyl group words, their action, and the coset representatives W(P, H).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::characters::{SpecialChar, TorusCharacter};
use crate::root_datum::{positive_roots, root_orbits, EtaleForm, FormKind, Root, CARTAN};
use crate::{Error, Result};

/// Integer matrix acting on root coordinates (column vectors).
pub type Mat4 = [[i64; 4]; 4];

pub const IDENTITY: Mat4 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn mat_apply(m: &Mat4, r: &Root) -> Root {
    let mut c = [0; 4];
    for (i, ci) in c.iter_mut().enumerate() {
        *ci = (0..4).map(|k| m[i][k] * r.0[k]).sum();
    }
    Root(c)
}

fn absolute_reflection(j: usize) -> Mat4 {
    let mut m = IDENTITY;
    for k in 0..4 {
        m[j - 1][k] -= CARTAN[k][j - 1];
    }
    m
}

/// Matrix of a relative simple reflection: the product of the commuting absolute
/// reflections in the orbit of `label`.
pub fn reflection_matrix(form: &EtaleForm, label: u8) -> Result<Mat4> {
    form.label_coord(label)?;
    Ok(form
        .simple_orbit(label as usize)
        .iter()
        .fold(IDENTITY, |acc, &j| mat_mul(&acc, &absolute_reflection(j))))
}

/// A relative Weyl group element, with its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub m: Mat4,
    pub inv: Mat4,
}

impl Element {
    pub const ONE: Element = Element { m: IDENTITY, inv: IDENTITY };

    pub fn generator(form: &EtaleForm, label: u8) -> Result<Element> {
        let m = reflection_matrix(form, label)?;
        Ok(Element { m, inv: m })
    }

    pub fn mul(&self, other: &Element) -> Element {
        Element { m: mat_mul(&self.m, &other.m), inv: mat_mul(&other.inv, &self.inv) }
    }

    pub fn inverse(&self) -> Element {
        Element { m: self.inv, inv: self.m }
    }

    pub fn apply(&self, r: &Root) -> Root {
        mat_apply(&self.m, r)
    }

    pub fn apply_inverse(&self, r: &Root) -> Root {
        mat_apply(&self.inv, r)
    }

    /// Number of restricted positive roots sent negative.
    pub fn length(&self, form: &EtaleForm) -> usize {
        root_orbits(form)
            .iter()
            .filter(|o| !self.apply_inverse(&o.representative()).is_positive())
            .count()
    }

    /// Commutes with every diagram automorphism of the form.
    pub fn is_galois_stable(&self, form: &EtaleForm) -> bool {
        form.diagram_action.iter().all(|p| {
            (1..=4).all(|i| {
                let r = Root::simple(i);
                self.apply(&r.permute(p)) == self.apply(&r).permute(p)
            })
        })
    }
}

/// A reduced word in the relative simple reflections.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylWord {
    pub form: FormKind,
    pub letters: Vec<u8>,
}

impl PartialOrd for WeylWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// ShortLex: length first, then lexicographic.
impl Ord for WeylWord {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.form, self.letters.len(), &self.letters).cmp(&(
            other.form,
            other.letters.len(),
            &other.letters,
        ))
    }
}

impl WeylWord {
    pub fn identity(form: FormKind) -> WeylWord {
        WeylWord { form, letters: vec![] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Parses "2,1,3" and checks the word is reduced.
    pub fn parse(form: &EtaleForm, text: &str) -> Result<WeylWord> {
        let text = text.trim().trim_start_matches('[').trim_end_matches(']');
        let mut letters = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let l: u8 = part
                .parse()
                .map_err(|_| Error::Invalid(format!("bad letter {part:?} in word {text:?}")))?;
            form.label_coord(l)?;
            letters.push(l);
        }
        let w = WeylWord { form: form.kind, letters };
        if w.element(form)?.length(form) != w.len() {
            return Err(Error::NotReduced(w.to_string()));
        }
        Ok(w)
    }

    pub fn element(&self, form: &EtaleForm) -> Result<Element> {
        self.letters.iter().try_fold(Element::ONE, |acc, &l| Ok(acc.mul(&Element::generator(form, l)?)))
    }

    /// The ShortLex-minimal reduced word of an element.
    pub fn canonical(form: &EtaleForm, e: &Element) -> WeylWord {
        let mut letters = Vec::new();
        let mut cur = *e;
        let gens: Vec<(u8, Element, Root)> = form
            .labels()
            .into_iter()
            .map(|l| (l, Element::generator(form, l).expect("valid label"), Root::simple(l as usize)))
            .collect();
        while cur != Element::ONE {
            let (l, g, _) = gens
                .iter()
                .find(|(_, _, a)| !cur.apply_inverse(a).is_positive())
                .expect("a nontrivial element has a left descent");
            letters.push(*l);
            cur = g.mul(&cur);
        }
        WeylWord { form: form.kind, letters }
    }

    /// Product `self · other` if lengths add.
    pub fn concat_reduced(&self, form: &EtaleForm, other: &WeylWord) -> Option<WeylWord> {
        let mut letters = self.letters.clone();
        letters.extend(&other.letters);
        let w = WeylWord { form: form.kind, letters };
        let e = w.element(form).ok()?;
        (e.length(form) == w.len()).then(|| WeylWord::canonical(form, &e))
    }

    /// Compact name: "w2132", "w" for the identity.
    pub fn compact(&self) -> String {
        let digits: String = self.letters.iter().map(|l| l.to_string()).collect();
        format!("w{digits}")
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All elements of the relative Weyl group by breadth-first closure.
pub fn relative_group(form: &EtaleForm) -> Vec<Element> {
    let gens: Vec<Element> =
        form.labels().into_iter().map(|l| Element::generator(form, l).expect("valid")).collect();
    let mut seen = BTreeSet::from([Element::ONE]);
    let mut queue = VecDeque::from([Element::ONE]);
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            let n = e.mul(g);
            if seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen.into_iter().collect()
}

/// Whether `e` is the shortest element of its coset W_M·e.
pub fn is_min_coset_rep(e: &Element) -> bool {
    [1, 3, 4].iter().all(|&i| e.apply_inverse(&Root::simple(i)).is_positive())
}

/// Minimal representatives of W_M \ W, sorted ShortLex.
pub fn enumerate_coset_reps(form: &EtaleForm) -> Vec<WeylWord> {
    let mut out: Vec<WeylWord> = relative_group(form)
        .iter()
        .filter(|e| is_min_coset_rep(e))
        .map(|e| WeylWord::canonical(form, e))
        .collect();
    out.sort();
    out
}

/// Something that lives in weight coordinates and can be reflected.
pub trait WeightEntry: Clone {
    /// `self - k·other`.
    fn sub_scaled(&self, other: &Self, k: i64) -> Self;
}

impl WeightEntry for i64 {
    fn sub_scaled(&self, other: &Self, k: i64) -> Self {
        self - k * other
    }
}

impl WeightEntry for crate::affine::Affine {
    fn sub_scaled(&self, other: &Self, k: i64) -> Self {
        self.sub(&other.scale(k.into()))
    }
}

impl WeightEntry for crate::Q {
    fn sub_scaled(&self, other: &Self, k: i64) -> Self {
        self - other * crate::Q::from_integer(k)
    }
}

/// Applies `w⁻¹` to a weight given in absolute coordinates `λ_i = ⟨λ, α̌_i⟩`.
pub fn act_weights<T: WeightEntry>(form: &EtaleForm, word: &WeylWord, weights: [T; 4]) -> [T; 4] {
    let mut lam = weights;
    for &l in &word.letters {
        for j in form.simple_orbit(l as usize) {
            let lj = lam[j - 1].clone();
            for i in 0..4 {
                lam[i] = lam[i].sub_scaled(&lj, CARTAN[j - 1][i]);
            }
        }
    }
    lam
}

/// `w⁻¹ · ch`.
pub fn act(form: &EtaleForm, word: &WeylWord, ch: &TorusCharacter) -> Result<TorusCharacter> {
    let exps = act_weights(form, word, ch.absolute_exps(form));
    let pows = act_weights(form, word, ch.absolute_pows(form));
    TorusCharacter::from_absolute(form, ch.chi.clone(), &pows, &exps)
}

/// Right descents `word = w'·s_a` whose reflection fixes `w'⁻¹·χ` at the point and whose
/// rank-one character is trivial on the coroot.
pub fn descent_pairs(
    form: &EtaleForm,
    word: &WeylWord,
    ch: &TorusCharacter,
    s0: crate::Q,
) -> Result<Vec<(WeylWord, u8)>> {
    let e = word.element(form)?;
    let mut out = Vec::new();
    for l in form.labels() {
        if e.apply(&Root::simple(l as usize)).is_positive() {
            continue;
        }
        let prefix = WeylWord::canonical(form, &e.mul(&Element::generator(form, l)?));
        let moved = act(form, &prefix, ch)?.specialize(s0);
        if fixes_on_coroot(form, &moved, l)? {
            out.push((prefix, l));
        }
    }
    Ok(out)
}

/// Whether the simple reflection `label` fixes the character and the rank-one character
/// along its coroot is trivial.
pub fn fixes_on_coroot(form: &EtaleForm, ch: &SpecialChar, label: u8) -> Result<bool> {
    let k = form.label_coord(label)?;
    Ok(ch.exps[k] == crate::Q::from_integer(0) && ch.classes[k].is_trivial())
}

/// Groups coset representatives into the cosets W_M·w of the whole group (oracle helper).
pub fn coset_partition(form: &EtaleForm) -> BTreeMap<WeylWord, Vec<Element>> {
    let reps = enumerate_coset_reps(form);
    let m_gens: Vec<Element> = form
        .labels()
        .into_iter()
        .filter(|&l| l != 2)
        .map(|l| Element::generator(form, l).expect("valid"))
        .collect();
    let mut m_group = BTreeSet::from([Element::ONE]);
    loop {
        let next: Vec<Element> =
            m_group.iter().flat_map(|e| m_gens.iter().map(move |g| e.mul(g))).collect();
        let before = m_group.len();
        m_group.extend(next);
        if m_group.len() == before {
            break;
        }
    }
    reps.into_iter()
        .map(|w| {
            let e = w.element(form).expect("valid rep");
            let coset = m_group.iter().map(|m| m.mul(&e)).collect();
            (w, coset)
        })
        .collect()
}

/// Positive roots sent negative by `w⁻¹`.
pub fn inverted_roots(form: &EtaleForm, word: &WeylWord) -> Result<Vec<Root>> {
    let e = word.element(form)?;
    Ok(positive_roots().into_iter().filter(|r| !e.apply_inverse(r).is_positive()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(form: FormKind) -> Vec<String> {
        enumerate_coset_reps(&EtaleForm::new(form)).iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn group_orders() {
        let orders: Vec<usize> =
            FormKind::ALL.iter().map(|k| relative_group(&EtaleForm::new(*k)).len()).collect();
        assert_eq!(orders, vec![192, 48, 12, 12]);
    }

    #[test]
    fn cubic_reps() {
        assert_eq!(
            words(FormKind::CubicGalois),
            vec!["[]", "[2]", "[2,1]", "[2,1,2]", "[2,1,2,1]", "[2,1,2,1,2]"]
        );
        assert_eq!(words(FormKind::QuadTimesF).len(), 12);
        assert_eq!(words(FormKind::Split).len(), 24);
        assert_eq!(words(FormKind::Split).last().unwrap(), "[2,1,3,2,4,2,1,3,2]");
        assert_eq!(words(FormKind::QuadTimesF).last().unwrap(), "[2,1,3,2,1,3,2]");
    }

    #[test]
    fn parsing_validates() {
        let f = EtaleForm::new(FormKind::QuadTimesF);
        assert!(WeylWord::parse(&f, "2,1,3,2").is_ok());
        assert!(matches!(WeylWord::parse(&f, "2,2"), Err(Error::NotReduced(_))));
        assert!(WeylWord::parse(&f, "2,4").is_err());
        assert_eq!(WeylWord::parse(&f, "").unwrap().len(), 0);
    }

    #[test]
    fn reps_are_galois_stable() {
        for k in FormKind::ALL {
            let form = EtaleForm::new(k);
            for w in enumerate_coset_reps(&form) {
                assert!(w.element(&form).unwrap().is_galois_stable(&form));
            }
        }
    }
}
