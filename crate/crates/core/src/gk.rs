//! Gindikin-Karpelevich factors J(w, χ, λ) and J(w, χ_s).

use crate::characters::{inducing_character, FiniteOrderClass, Mode, TorusCharacter};
use crate::lfun::{LExpr, LKey};
use crate::root_datum::{pair_coeffs, root_orbits, EtaleForm, RootOrbit};
use crate::weyl::{act, WeylWord};
use crate::{Error, Result, Q};

/// A Gindikin-Karpelevich factor with the orbits it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkFactor {
    pub word: WeylWord,
    pub expr: LExpr,
    pub flipped: Vec<RootOrbit>,
}

/// Orbits of positive roots sent negative by `w⁻¹`.
pub fn flipped_orbits(form: &EtaleForm, word: &WeylWord) -> Result<Vec<RootOrbit>> {
    let e = word.element(form)?;
    let mut out = Vec::new();
    for o in root_orbits(form) {
        let signs: Vec<bool> = o.members.iter().map(|r| e.apply_inverse(r).is_positive()).collect();
        if signs.iter().any(|&p| p != signs[0]) {
            return Err(Error::Internal(format!("{word} splits the orbit of {}", o.representative())));
        }
        if !signs[0] {
            out.push(o);
        }
    }
    Ok(out)
}

/// J(w, ch): one ratio L(⟨λ, α̌⟩, χ∘α̌) / L(⟨λ, α̌⟩ + 1, χ∘α̌) per flipped orbit.
pub fn gk_for_character(form: &EtaleForm, word: &WeylWord, ch: &TorusCharacter) -> Result<GkFactor> {
    let flipped = flipped_orbits(form, word)?;
    let mut expr = LExpr::one();
    for o in &flipped {
        let arg = pair_coeffs(&o.coroot_pairing, &ch.exps);
        let k: i64 = o.coroot_pairing.iter().zip(&ch.chi_pow).map(|(a, b)| a * b).sum();
        let class = ch.chi.pow(k).restrict(form.kind, o.field);
        expr.push(LKey::new(o.field, arg.clone(), class.clone()), 1);
        expr.push(LKey::new(o.field, arg.shift(Q::from_integer(1)), class), -1);
    }
    Ok(GkFactor { word: word.clone(), expr, flipped })
}

/// J(w, χ, λ) in the general coordinates.
pub fn gk_general(form: &EtaleForm, word: &WeylWord, chi: &FiniteOrderClass) -> Result<LExpr> {
    let ch = inducing_character(form, chi, Mode::General)?;
    Ok(gk_for_character(form, word, &ch)?.expr)
}

/// J(w, χ_s) along the line.
pub fn gk_sline(form: &EtaleForm, word: &WeylWord, chi: &FiniteOrderClass) -> Result<LExpr> {
    let ch = inducing_character(form, chi, Mode::Line)?;
    Ok(gk_for_character(form, word, &ch)?.expr)
}

/// J(w'', w'⁻¹·ch), the factor contributed by the tail of a length-additive product.
pub fn gk_tail(form: &EtaleForm, head: &WeylWord, tail: &WeylWord, ch: &TorusCharacter) -> Result<LExpr> {
    let moved = act(form, head, ch)?;
    Ok(gk_for_character(form, tail, &moved)?.expr)
}

/// The line λ_s as substitutions for the general coordinates.
pub fn line_substitution(form: &EtaleForm) -> Result<Vec<crate::affine::Affine>> {
    Ok(inducing_character(form, &FiniteOrderClass::trivial(), Mode::Line)?.exps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::Gen;
    use crate::lfun::order_at;
    use crate::root_datum::FormKind;

    #[test]
    fn cubic_two_one() {
        let form = EtaleForm::new(FormKind::CubicGalois);
        let w = WeylWord::parse(&form, "2,1").unwrap();
        let chi = FiniteOrderClass::gen(Gen::Chi);
        let e = gk_general(&form, &w, &chi).unwrap();
        assert_eq!(
            e.to_string(),
            "L_F(s2, chi) L_E(s1+s2, chi o Nm) / (L_F(s2+1, chi) L_E(s1+s2+1, chi o Nm))"
        );
        let l = gk_sline(&form, &w, &chi).unwrap();
        assert_eq!(
            l.to_string(),
            "L_F(s+3/2, chi) L_E(s+1/2, chi o Nm) / (L_F(s+5/2, chi) L_E(s+3/2, chi o Nm))"
        );
    }

    #[test]
    fn longest_flips() {
        for (k, n) in [(FormKind::CubicGalois, 5), (FormKind::QuadTimesF, 7), (FormKind::Split, 9)] {
            let form = EtaleForm::new(k);
            let w = crate::weyl::enumerate_coset_reps(&form).pop().unwrap();
            assert_eq!(flipped_orbits(&form, &w).unwrap().len(), n);
        }
    }

    #[test]
    fn orders_on_the_line() {
        let form = EtaleForm::new(FormKind::QuadTimesF);
        let w = WeylWord::parse(&form, "2,1,3,2").unwrap();
        let e = gk_sline(&form, &w, &FiniteOrderClass::trivial()).unwrap();
        assert_eq!(order_at(&e, Q::new(1, 2)), 3);
        let split = EtaleForm::new(FormKind::Split);
        let w = WeylWord::parse(&split, "2,1,3,4,2,1,3,4,2").unwrap();
        let e = gk_sline(&split, &w, &FiniteOrderClass::trivial()).unwrap();
        assert_eq!(order_at(&e, Q::new(5, 2)), 1);
    }
}
