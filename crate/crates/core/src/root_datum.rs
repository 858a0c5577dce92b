//! The absolute D4 root system and its twisted forms.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::affine::Affine;
use crate::{Error, Result};

/// `CARTAN[i][j] = ⟨α_i, α̌_j⟩`, with α2 the central node.
pub const CARTAN: [[i64; 4]; 4] = [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]];

/// Inverse Cartan matrix scaled by 2 (D4 has determinant 4 but the inverse only has halves).
pub const CARTAN_INV_2: [[i64; 4]; 4] = [[2, 2, 1, 1], [2, 4, 2, 2], [1, 2, 2, 1], [1, 2, 1, 2]];

/// A root in the simple-root basis α1..α4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub [i64; 4]);

impl Root {
    /// Simple root α_i, 1-based.
    pub fn simple(i: usize) -> Root {
        let mut c = [0; 4];
        c[i - 1] = 1;
        Root(c)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn neg(&self) -> Root {
        Root(self.0.map(|c| -c))
    }

    /// `⟨self, α̌_j⟩` for the simple coroot j (1-based).
    pub fn pair_simple_coroot(&self, j: usize) -> i64 {
        (0..4).map(|i| self.0[i] * CARTAN[i][j - 1]).sum()
    }

    /// Absolute simple reflection s_j (1-based).
    pub fn reflect(&self, j: usize) -> Root {
        let mut c = self.0;
        c[j - 1] -= self.pair_simple_coroot(j);
        Root(c)
    }

    /// Applies a diagram permutation (0-based images).
    pub fn permute(&self, p: &Perm) -> Root {
        let mut c = [0; 4];
        for i in 0..4 {
            c[p[i]] = self.0[i];
        }
        Root(c)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..4)
            .filter(|&i| self.0[i] != 0)
            .map(|i| match self.0[i] {
                1 => format!("a{}", i + 1),
                -1 => format!("-a{}", i + 1),
                c => format!("{}a{}", c, i + 1),
            })
            .collect();
        f.write_str(&parts.join("+").replace("+-", "-"))
    }
}

/// The 12 positive roots, ordered by height then coefficients.
pub fn positive_roots() -> Vec<Root> {
    let mut seen: BTreeSet<Root> = (1..=4).map(Root::simple).collect();
    let mut frontier: Vec<Root> = seen.iter().copied().collect();
    while let Some(r) = frontier.pop() {
        for j in 1..=4 {
            let t = r.reflect(j);
            let t = if t.is_positive() { t } else { t.neg() };
            if seen.insert(t) {
                frontier.push(t);
            }
        }
    }
    let mut out: Vec<Root> = seen.into_iter().collect();
    out.sort_by_key(|r| (r.height(), r.0));
    out
}

pub fn highest_root() -> Root {
    *positive_roots().last().expect("nonempty root system")
}

/// Kind of étale cubic algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FormKind {
    Split,
    QuadTimesF,
    CubicGalois,
    CubicNonGalois,
}

impl FormKind {
    pub const ALL: [FormKind; 4] =
        [FormKind::Split, FormKind::QuadTimesF, FormKind::CubicGalois, FormKind::CubicNonGalois];

    pub fn name(&self) -> &'static str {
        match self {
            FormKind::Split => "split",
            FormKind::QuadTimesF => "quad",
            FormKind::CubicGalois => "cubic-galois",
            FormKind::CubicNonGalois => "cubic-nongalois",
        }
    }

    pub fn parse(s: &str) -> Result<FormKind> {
        FormKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown form {s:?}")))
    }

    pub fn is_cubic_field(&self) -> bool {
        matches!(self, FormKind::CubicGalois | FormKind::CubicNonGalois)
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Field of definition of a root or coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    F,
    K,
    E,
}

impl Field {
    pub fn name(&self) -> &'static str {
        match self {
            Field::F => "F",
            Field::K => "K",
            Field::E => "E",
        }
    }

    pub fn parse(s: &str) -> Result<Field> {
        match s {
            "F" => Ok(Field::F),
            "K" => Ok(Field::K),
            "E" => Ok(Field::E),
            _ => Err(Error::Invalid(format!("unknown field {s:?}"))),
        }
    }

    fn of_orbit_size(n: usize) -> Field {
        match n {
            1 => Field::F,
            2 => Field::K,
            _ => Field::E,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A permutation of the four simple roots, 0-based.
pub type Perm = [usize; 4];

const ID: Perm = [0, 1, 2, 3];

fn compose(p: &Perm, q: &Perm) -> Perm {
    [p[q[0]], p[q[1]], p[q[2]], p[q[3]]]
}

/// An étale cubic algebra kind with its diagram action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleForm {
    pub kind: FormKind,
    /// Every element of the image of the Galois group in Aut(D4).
    pub diagram_action: Vec<Perm>,
    pub coord_dim: usize,
}

impl EtaleForm {
    pub fn new(kind: FormKind) -> EtaleForm {
        // generators as 0-based images; sigma: 1 -> 3 -> 4 -> 1, tau swaps 3 and 4
        let sigma: Perm = [2, 1, 3, 0];
        let tau: Perm = [0, 1, 3, 2];
        let gens: Vec<Perm> = match kind {
            FormKind::Split => vec![],
            FormKind::QuadTimesF => vec![tau],
            FormKind::CubicGalois => vec![sigma],
            FormKind::CubicNonGalois => vec![sigma, tau],
        };
        let mut group: BTreeSet<Perm> = BTreeSet::from([ID]);
        loop {
            let next: BTreeSet<Perm> =
                group.iter().flat_map(|p| gens.iter().map(move |g| compose(g, p))).collect();
            let before = group.len();
            group.extend(next);
            if group.len() == before {
                break;
            }
        }
        let coord_dim = match kind {
            FormKind::Split => 4,
            FormKind::QuadTimesF => 3,
            _ => 2,
        };
        EtaleForm { kind, diagram_action: group.into_iter().collect(), coord_dim }
    }

    /// Orbit of an absolute simple index (1-based) under the diagram action.
    pub fn simple_orbit(&self, i: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.diagram_action.iter().map(|p| p[i - 1] + 1).collect();
        set.into_iter().collect()
    }

    /// Labels of the relative simple reflections, which double as coordinate labels:
    /// the smallest absolute index of each simple orbit.
    pub fn labels(&self) -> Vec<u8> {
        (1..=4usize).filter(|&i| self.simple_orbit(i)[0] == i).map(|i| i as u8).collect()
    }

    /// Coordinate slot (0-based) carrying the absolute simple index `abs` (1-based).
    pub fn coord_of(&self, abs: usize) -> usize {
        let rep = self.simple_orbit(abs)[0] as u8;
        self.labels().iter().position(|&l| l == rep).expect("every orbit has a label")
    }

    /// Coordinate slot of a relative label.
    pub fn label_coord(&self, label: u8) -> Result<usize> {
        self.labels()
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| Error::Invalid(format!("index {label} is not valid for {}", self.kind)))
    }

    pub fn coord_field(&self, coord: usize) -> Field {
        let label = self.labels()[coord] as usize;
        Field::of_orbit_size(self.simple_orbit(label).len())
    }

    pub fn coord_fields(&self) -> Vec<Field> {
        (0..self.coord_dim).map(|k| self.coord_field(k)).collect()
    }

    pub fn has_chi_e(&self) -> bool {
        self.kind != FormKind::CubicNonGalois
    }
}

/// A Galois orbit of positive roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RootOrbit {
    pub members: Vec<Root>,
    pub field: Field,
    /// Coefficient of each coordinate in the restricted coroot pairing.
    pub coroot_pairing: Vec<i64>,
}

impl RootOrbit {
    pub fn representative(&self) -> Root {
        self.members[0]
    }

    pub fn contains(&self, r: &Root) -> bool {
        self.members.contains(r)
    }
}

/// Coordinate pairing of one absolute root: ⟨λ, α̌⟩ as coefficients of the coordinates.
pub fn member_pairing(form: &EtaleForm, r: &Root) -> Vec<i64> {
    let mut v = vec![0; form.coord_dim];
    for i in 1..=4 {
        v[form.coord_of(i)] += r.0[i - 1];
    }
    v
}

pub fn root_orbits(form: &EtaleForm) -> Vec<RootOrbit> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in positive_roots() {
        if seen.contains(&r) {
            continue;
        }
        let members: BTreeSet<Root> = form.diagram_action.iter().map(|p| r.permute(p)).collect();
        seen.extend(members.iter().copied());
        let mut members: Vec<Root> = members.into_iter().collect();
        members.sort_by_key(|m| (m.height(), std::cmp::Reverse(m.0)));
        let coroot_pairing = member_pairing(form, &members[0]);
        out.push(RootOrbit {
            field: Field::of_orbit_size(members.len()),
            members,
            coroot_pairing,
        });
    }
    out
}

/// The orbit containing a given positive root.
pub fn orbit_of(form: &EtaleForm, r: &Root) -> RootOrbit {
    root_orbits(form).into_iter().find(|o| o.contains(r)).expect("r is a positive root")
}

/// `⟨λ, α̌⟩` in the form's coordinates.
pub fn pairing(form: &EtaleForm, lambda: &[Affine], orbit: &RootOrbit) -> Result<Affine> {
    if lambda.len() != form.coord_dim {
        return Err(Error::Invalid(format!(
            "expected {} coordinates, got {}",
            form.coord_dim,
            lambda.len()
        )));
    }
    Ok(pair_coeffs(&orbit.coroot_pairing, lambda))
}

pub(crate) fn pair_coeffs(coeffs: &[i64], lambda: &[Affine]) -> Affine {
    let dim = lambda[0].dim();
    coeffs.iter().zip(lambda).fold(Affine::constant(dim, 0.into()), |acc, (k, l)| {
        acc.add(&l.scale((*k).into()))
    })
}

/// Power of χ attached to an orbit: `⟨ω, α̌⟩` with ω the highest root, i.e. the α2 coefficient.
pub fn det_exponent(orbit: &RootOrbit) -> i64 {
    orbit.representative().0[1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d4_basics() {
        let pos = positive_roots();
        assert_eq!(pos.len(), 12);
        assert_eq!(highest_root(), Root([1, 2, 1, 1]));
        assert_eq!(Root::simple(1).pair_simple_coroot(2), -1);
        assert_eq!(Root::simple(1).pair_simple_coroot(3), 0);
        for r in &pos {
            for j in 1..=4 {
                let t = r.reflect(j);
                assert!(pos.contains(&t) || pos.contains(&t.neg()));
            }
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn inverse_cartan() {
        for i in 0..4 {
            for j in 0..4 {
                let s: i64 = (0..4).map(|k| CARTAN_INV_2[i][k] * CARTAN[k][j]).sum();
                assert_eq!(s, if i == j { 2 } else { 0 });
            }
        }
    }

    #[test]
    fn diagram_actions() {
        let g = EtaleForm::new(FormKind::CubicGalois);
        assert_eq!(g.diagram_action.len(), 3);
        assert!(g.diagram_action.contains(&[2, 1, 3, 0]));
        assert_eq!(EtaleForm::new(FormKind::Split).diagram_action, vec![ID]);
        assert_eq!(EtaleForm::new(FormKind::CubicNonGalois).diagram_action.len(), 6);
        assert_eq!(EtaleForm::new(FormKind::QuadTimesF).labels(), vec![1, 2, 3]);
        assert_eq!(g.labels(), vec![1, 2]);
        assert_eq!(g.coord_fields(), vec![Field::E, Field::F]);
    }

    #[test]
    fn orbit_counts_and_fields() {
        let counts: Vec<usize> =
            FormKind::ALL.iter().map(|k| root_orbits(&EtaleForm::new(*k)).len()).collect();
        assert_eq!(counts, vec![12, 9, 6, 6]);
        for k in FormKind::ALL {
            let form = EtaleForm::new(k);
            let orbits = root_orbits(&form);
            assert_eq!(orbits.iter().map(|o| o.members.len()).sum::<usize>(), 12);
            for o in &orbits {
                for m in &o.members {
                    assert_eq!(member_pairing(&form, m), o.coroot_pairing);
                }
            }
        }
        let quad = root_orbits(&EtaleForm::new(FormKind::QuadTimesF));
        assert_eq!(quad.iter().filter(|o| o.members.len() == 1).count(), 6);
        let cubic = EtaleForm::new(FormKind::CubicGalois);
        let o = orbit_of(&cubic, &Root::simple(1));
        assert_eq!(o.members, vec![Root::simple(1), Root::simple(3), Root::simple(4)]);
        assert_eq!(o.field, Field::E);
    }

    #[test]
    fn det_exponents() {
        let split = EtaleForm::new(FormKind::Split);
        assert_eq!(det_exponent(&orbit_of(&split, &Root::simple(2))), 1);
        assert_eq!(det_exponent(&orbit_of(&split, &highest_root())), 2);
        assert_eq!(det_exponent(&orbit_of(&split, &Root::simple(1))), 0);
    }
}
