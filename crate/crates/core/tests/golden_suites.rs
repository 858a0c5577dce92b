use eisenpole::affine::Affine;
use eisenpole::characters::FiniteOrderClass;
use eisenpole::golden::{default_dir, diff_against, Suite, TableId};
use eisenpole::lfun::{leading_of_plain_sum, LExpr, LKey, Monomial, Sym};
use eisenpole::root_datum::Field;
use eisenpole::{BigQ, Poly, Q};

/// The transcribed cubic two-term constant disagrees with the engine; see `cubic_limit_oracle`.
const KNOWN_FAILURE: &str = "cubic field id two-term limit";

fn run(s: Suite) {
    let checks = s.run(&default_dir());
    assert!(!checks.is_empty(), "{}", s.name());
    let bad: Vec<String> =
        checks.iter().filter(|c| !c.pass && c.id != KNOWN_FAILURE).map(|c| c.to_string()).collect();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn cosets() {
    run(Suite::Cosets);
}

#[test]
fn tables() {
    run(Suite::Tables);
}

#[test]
fn every_table_diffs_clean() {
    for id in TableId::all() {
        let d = diff_against(&default_dir(), id).unwrap();
        assert!(d.ok(), "{}: {:?}", id.title(), d.mismatches);
        assert!(d.matched > 0);
    }
}

#[test]
fn poles() {
    run(Suite::Poles);
}

#[test]
fn cancellations() {
    run(Suite::Cancellations);
}

#[test]
fn exponents() {
    run(Suite::Exponents);
}

#[test]
fn cap() {
    run(Suite::Cap);
}

#[test]
fn gh() {
    run(Suite::Gh);
}

#[test]
fn cubic_constant_mismatch_is_only_in_the_leading_term() {
    let checks = Suite::Cancellations.run(&default_dir());
    let c = checks.iter().find(|c| c.id == KNOWN_FAILURE).expect("display present");
    assert!(!c.pass);
    assert!(c.detail.starts_with("leading "), "{}", c.detail);
}

fn zeta(field: Field, a: i64, b: Q) -> LKey {
    LKey::zeta(field, Affine::line(Q::from_integer(a), b))
}

fn expr(fs: &[(Field, i64, Q, i32)]) -> LExpr {
    let mut e = LExpr::one();
    for &(f, a, b, n) in fs {
        e.push(zeta(f, a, b), n);
    }
    e
}

fn val(field: Field, p: i64) -> Sym {
    Sym::Val { field, point: Q::from_integer(p), class: FiniteOrderClass::trivial(), k: 0 }
}

/// Near s = 1/2 + u, with ε and γ the residues of Z_E and Z_F at 1:
///
/// first term  Z_F(s+3/2) Z_E(s+1/2) / Z_F(s+5/2) Z_E(s+3/2)
///             ~ ε/u · Z_F(2) / Z_F(3) Z_E(2)
/// second term Z_F(s-3/2) Z_F(s+3/2) Z_E(s-1/2) Z_F(2s) / Z_F(s-1/2) Z_F(s+5/2) Z_E(s+3/2) Z_F(2s+1)
///             with Z_E(u) ~ -ε/u, Z_F(1+2u) ~ γ/2u, Z_F(u) ~ -γ/u, Z_F(-1) = Z_F(2)
///             ~ ε/2u · Z_F(2) / Z_F(3) Z_E(2)
///
/// so the sum has a simple pole with residue (3/2) ε Z_F(2) / Z_F(3) Z_E(2). The γ
/// cancels; it only survives if Z_E(s+1/2) in the first term is misread as Z_F(s+1/2).
#[test]
fn cubic_limit_oracle() {
    let h = |n: i64| Q::new(n, 2);
    let first = expr(&[(Field::F, 1, h(3), 1), (Field::E, 1, h(1), 1), (Field::F, 1, h(5), -1), (Field::E, 1, h(3), -1)]);
    let second = expr(&[
        (Field::F, 1, h(-3), 1),
        (Field::F, 1, h(3), 1),
        (Field::E, 1, h(-1), 1),
        (Field::F, 2, h(0), 1),
        (Field::F, 1, h(-1), -1),
        (Field::F, 1, h(5), -1),
        (Field::E, 1, h(3), -1),
        (Field::F, 2, h(2), -1),
    ]);
    let (degree, lead) = leading_of_plain_sum::<BigQ>(&[first, second], h(1)).unwrap().unwrap();
    assert_eq!(degree, -1);

    let mut m = Monomial::sym(Sym::Res { field: Field::E, k: -1 });
    for (s, n) in [(val(Field::F, 2), 1), (val(Field::F, 3), -1), (val(Field::E, 2), -1)] {
        m = m.mul(&Monomial(std::iter::once((s, n)).collect()));
    }
    let want = Poly::term(m, BigQ::new(3.into(), 2.into()));
    assert_eq!(lead, want);
}
