//! Mordell-Weil arithmetic through the Shioda map.
//!
//! A section of the fibration is recognised numerically: an integral
//! class `xi` with `xi.f = 1`, `xi.xi = -1` and `xi.n_i` in `{0, 1}`
//! for both `I2` neutral components.  The group law is transported from
//! `Pic(B)/T` (the quotient by the trivial lattice) back to honest
//! section classes by the normalisation algorithm `mw_normalize`, which
//! shifts by `f, n1, n2` until the numerical section constraints hold.
//!
//! The numerical criterion is the standard lattice-theoretic
//! characterisation; effectivity is a geometric property and is not
//! (and cannot be) checked here.

use num::{BigInt, Integer, One, Zero};
use thiserror::Error;

use crate::cohomology::{intersect, named_class, rat, H2Class, NamedClass, Rational};
use crate::isometry::{builtin_map, BuiltinMap};
use crate::linalg::{smith_normal_form, IntMat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MwError {
    #[error("class is not integral")]
    NotIntegral,
    #[error("class has fiber degree {0}, expected 1")]
    WrongFiberDegree(Rational),
    #[error("normalisation produced a non-section class; input not congruent to a section")]
    Inconsistent,
    #[error("class is not a valid section class")]
    NotASection,
}

/// A validated Mordell-Weil section representative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SectionClass {
    cls: H2Class,
}

impl SectionClass {
    /// Validates the numerical section constraints.
    pub fn new(cls: H2Class) -> Result<Self, MwError> {
        if !cls.is_integral() {
            return Err(MwError::NotIntegral);
        }
        if is_section_class(&cls) {
            Ok(SectionClass { cls })
        } else {
            Err(MwError::NotASection)
        }
    }

    pub fn cls(&self) -> &H2Class {
        &self.cls
    }

    pub fn into_cls(self) -> H2Class {
        self.cls
    }

    /// The zero section `e9`, the identity of the group law.
    pub fn zero_section() -> Self {
        SectionClass {
            cls: H2Class::e(9),
        }
    }
}

/// Numerical section test: integral, `D.f = 1`, `D.D = -1`,
/// `D.n1` and `D.n2` in `{0, 1}`.
///
/// (`D.o_i = 1 - D.n_i` follows from `n_i + o_i = f`.)
pub fn is_section_class(d: &H2Class) -> bool {
    if !d.is_integral() {
        return false;
    }
    let f = named_class(NamedClass::F);
    if intersect(d, &f) != rat(1) || d.self_intersection() != rat(-1) {
        return false;
    }
    for n in [NamedClass::N1, NamedClass::N2] {
        let dn = intersect(d, &named_class(n));
        if dn != rat(0) && dn != rat(1) {
            return false;
        }
    }
    true
}

/// The sublattice of `Pic(B)` generated by the zero section and all
/// fiber components.
pub struct TrivialLattice {
    basis: [H2Class; 4],
}

impl Default for TrivialLattice {
    fn default() -> Self {
        Self::new()
    }
}

impl TrivialLattice {
    pub fn new() -> Self {
        TrivialLattice {
            basis: [
                H2Class::e(9),
                named_class(NamedClass::F),
                named_class(NamedClass::N1),
                named_class(NamedClass::N2),
            ],
        }
    }

    pub fn basis(&self) -> &[H2Class; 4] {
        &self.basis
    }

    fn to_int_mat(&self) -> IntMat {
        let cols: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|c| c.to_ints().expect("basis is integral").to_vec())
            .collect();
        IntMat::from_columns(&cols)
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(&self.to_int_mat()).rank()
    }

    /// Integer membership in the lattice.
    pub fn contains(&self, d: &H2Class) -> bool {
        let Some(v) = d.to_ints() else { return false };
        crate::linalg::solve_in_column_lattice(&self.to_int_mat(), &v).is_some()
    }
}

fn ceil_div2(n: &BigInt) -> BigInt {
    n.div_ceil(&BigInt::from(2))
}

/// Normalises an integral class of fiber degree one to the unique
/// section class congruent to it modulo `Span(f, n1, n2)`.
///
/// `mu = X + a f + b n1 + c n2` where `b` and `c` are pinned by the
/// parity window `mu.n_i in {0, 1}` (each `n_i`-shift moves `X.n_i` by
/// `-2`), and then `a = -(1 + X'.X')/2` restores `mu.mu = -1`; the
/// division is exact because fiber degree one forces odd
/// self-intersection.
pub fn mw_normalize(x: &H2Class) -> Result<SectionClass, MwError> {
    if !x.is_integral() {
        return Err(MwError::NotIntegral);
    }
    let f = named_class(NamedClass::F);
    let deg = intersect(x, &f);
    if deg != rat(1) {
        return Err(MwError::WrongFiberDegree(deg));
    }

    let n1 = named_class(NamedClass::N1);
    let n2 = named_class(NamedClass::N2);
    let b = ceil_div2(&(intersect(x, &n1).to_integer() - BigInt::one()));
    let c = ceil_div2(&(intersect(x, &n2).to_integer() - BigInt::one()));
    let shifted = &(x + &n1.scale(&Rational::from_integer(b)))
        + &n2.scale(&Rational::from_integer(c));

    let self_int = shifted.self_intersection().to_integer();
    let numerator = -(BigInt::one() + &self_int);
    let (a, remainder) = numerator.div_rem(&BigInt::from(2));
    if !remainder.is_zero() {
        return Err(MwError::Inconsistent);
    }
    let mu = &shifted + &f.scale(&Rational::from_integer(a));
    SectionClass::new(mu).map_err(|_| MwError::Inconsistent)
}

/// The group law: `x + y` in the Mordell-Weil group, with identity the
/// zero section.  Computed as `mw_normalize(x + y - e9)`.
pub fn mw_add(x: &SectionClass, y: &SectionClass) -> Result<SectionClass, MwError> {
    mw_normalize(&(&(x.cls() + y.cls()) - &H2Class::e(9)))
}

/// The group inverse: the pullback of the class along fiberwise
/// inversion, which is again a section class.
pub fn mw_neg(x: &SectionClass) -> SectionClass {
    let neg = builtin_map(BuiltinMap::Neg);
    SectionClass::new(neg.apply_h2(x.cls())).expect("inversion preserves section classes")
}

/// Structure of `Pic(B)/T`: free rank and torsion invariant factors,
/// from the Smith normal form of the inclusion of the trivial lattice.
pub fn mw_quotient_structure() -> (usize, Vec<BigInt>) {
    let t = TrivialLattice::new();
    let snf = smith_normal_form(&t.to_int_mat());
    let rank = snf.rank();
    let torsion: Vec<BigInt> = snf
        .invariant_factors()
        .into_iter()
        .filter(|d| d > &BigInt::one())
        .collect();
    (10 - rank, torsion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::solve_in_column_lattice;

    fn sec(i: usize) -> SectionClass {
        SectionClass::new(H2Class::e(i)).unwrap()
    }

    fn h(v: [i64; 10]) -> H2Class {
        H2Class::from_ints(v)
    }

    #[test]
    fn exceptional_classes_are_sections_e8_is_not() {
        for i in [1usize, 2, 3, 4, 5, 6, 7, 9] {
            assert!(is_section_class(&H2Class::e(i)), "e{} must be a section", i);
        }
        // e8 = e9 + n1 is only a numerical section: e8.n1 = -1.
        assert!(!is_section_class(&H2Class::e(8)));
        assert!(!is_section_class(&named_class(NamedClass::F)));
        assert!(!is_section_class(&H2Class::e(1).scale(&crate::cohomology::frac(1, 2))));
    }

    #[test]
    fn normalize_translation_representative() {
        // e2 - e1 + e9 normalises to the class of [e2] - [e1].
        let x = &(&H2Class::e(2) - &H2Class::e(1)) + &H2Class::e(9);
        let mu = mw_normalize(&x).unwrap();
        let expect = &named_class(NamedClass::F) + &x;
        assert_eq!(mu.cls(), &expect);
    }

    #[test]
    fn normalize_is_identity_on_sections() {
        for i in [1usize, 2, 3, 4, 5, 6, 7, 9] {
            let mu = mw_normalize(&H2Class::e(i)).unwrap();
            assert_eq!(mu.cls(), &H2Class::e(i));
        }
    }

    /// Brute-force oracle: the unique valid section class congruent to
    /// `x` within the search window `a in [-10, 10]`, `b, c in [-2, 2]`.
    fn normalize_by_search(x: &H2Class) -> Option<H2Class> {
        let f = named_class(NamedClass::F);
        let n1 = named_class(NamedClass::N1);
        let n2 = named_class(NamedClass::N2);
        let mut found = None;
        for a in -10..=10i64 {
            for b in -2..=2i64 {
                for c in -2..=2i64 {
                    let cand = &(&(x + &f.scale_int(a)) + &n1.scale_int(b)) + &n2.scale_int(c);
                    if is_section_class(&cand) {
                        assert!(found.is_none(), "window produced two section classes");
                        found = Some(cand);
                    }
                }
            }
        }
        found
    }

    #[test]
    fn normalize_matches_brute_force_oracle() {
        let x = &H2Class::e(1).scale_int(2) - &H2Class::e(9);
        let expect = normalize_by_search(&x).expect("oracle finds a section");
        assert_eq!(
            expect,
            h([-1, 2, 0, 0, 0, 0, 0, 1, 0, 1]) + named_class(NamedClass::F).scale_int(2)
        );
        assert_eq!(mw_normalize(&x).unwrap().cls(), &expect);

        // A few more inputs against the same oracle.
        for x in [
            &(&H2Class::e(3) + &H2Class::e(4)) - &H2Class::e(9),
            h([2, -1, -1, -1, -1, -1, 0, 0, 0, 0]),
            h([0, 0, 3, 0, 0, 0, 0, 0, -1, -1]),
        ] {
            let oracle = normalize_by_search(&x).expect("oracle");
            assert_eq!(mw_normalize(&x).unwrap().cls(), &oracle);
        }
    }

    #[test]
    fn normalize_rejects_bad_inputs() {
        assert_eq!(
            mw_normalize(&named_class(NamedClass::F)),
            Err(MwError::WrongFiberDegree(rat(0)))
        );
        assert_eq!(
            mw_normalize(&H2Class::e(1).scale(&crate::cohomology::frac(1, 3))),
            Err(MwError::NotIntegral)
        );
    }

    #[test]
    fn normalize_difference_lies_in_trivial_lattice() {
        // mu - X must be an integer combination of f, n1, n2.
        let span = IntMat::from_columns(&[
            named_class(NamedClass::F).to_ints().unwrap().to_vec(),
            named_class(NamedClass::N1).to_ints().unwrap().to_vec(),
            named_class(NamedClass::N2).to_ints().unwrap().to_vec(),
        ]);
        for x in [
            &H2Class::e(1).scale_int(2) - &H2Class::e(9),
            h([1, -1, 0, 0, 0, 0, 0, 0, 0, -1]),
        ] {
            let mu = mw_normalize(&x).unwrap();
            let diff = (mu.cls() - &x).to_ints().unwrap().to_vec();
            assert!(solve_in_column_lattice(&span, &diff).is_some());
        }
    }

    #[test]
    fn group_identity_and_inverses() {
        let e9 = SectionClass::zero_section();
        for i in [1usize, 2, 5, 7] {
            let x = sec(i);
            assert_eq!(mw_add(&x, &e9).unwrap(), x);
            assert_eq!(mw_add(&e9, &x).unwrap(), x);
            assert_eq!(mw_add(&x, &mw_neg(&x)).unwrap(), e9);
            assert_eq!(mw_neg(&mw_neg(&x)), x);
        }
    }

    #[test]
    fn neg_matches_table_column() {
        assert_eq!(
            mw_neg(&sec(1)).cls(),
            &h([1, -1, 0, 0, 0, 0, 0, -1, 0, 0])
        );
        assert_eq!(mw_neg(&SectionClass::zero_section()).cls(), &H2Class::e(9));
    }

    #[test]
    fn doubling_zeta() {
        let two_zeta = mw_add(&sec(1), &sec(1)).unwrap();
        let expect = h([-1, 2, 0, 0, 0, 0, 0, 1, 0, 1]) + named_class(NamedClass::F).scale_int(2);
        assert_eq!(two_zeta.cls(), &expect);
    }

    #[test]
    fn translation_rows_of_the_action_table() {
        // [e_i] - [e_1] has class f + e_i - e1 + e9 for i = 2..6.
        let neg_zeta = mw_neg(&sec(1));
        for i in 2..=6 {
            let sum = mw_add(&sec(i), &neg_zeta).unwrap();
            let expect = &(&(&named_class(NamedClass::F) + &H2Class::e(i)) - &H2Class::e(1))
                + &H2Class::e(9);
            assert_eq!(sum.cls(), &expect, "row e{}", i);
        }
    }

    #[test]
    fn commutativity_and_associativity_on_samples() {
        let mut samples: Vec<SectionClass> =
            [1usize, 2, 3, 4, 5, 6, 7, 9].iter().map(|&i| sec(i)).collect();
        samples.push(mw_neg(&sec(1)));
        samples.push(mw_neg(&sec(4)));
        for x in &samples {
            for y in &samples {
                assert_eq!(mw_add(x, y).unwrap(), mw_add(y, x).unwrap());
            }
        }
        for x in samples.iter().take(4) {
            for y in samples.iter().take(4) {
                for z in samples.iter().take(4) {
                    let left = mw_add(&mw_add(x, y).unwrap(), z).unwrap();
                    let right = mw_add(x, &mw_add(y, z).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn quotient_structure() {
        let (rank, torsion) = mw_quotient_structure();
        assert_eq!(rank, 6);
        // The trivial lattice is primitive here; no torsion appears.
        assert!(torsion.is_empty());
        let t = TrivialLattice::new();
        assert_eq!(t.rank(), 4);
        assert!(t.contains(&named_class(NamedClass::O1)));
        assert!(t.contains(&named_class(NamedClass::O2)));
        assert!(!t.contains(&H2Class::e(1)));
    }
}
