//! The cohomological Fourier-Mukai transform and the spectral
//! involution `t_B`, plus a symbolic sheaf layer that mirrors the
//! transform on the sheaves it acts on simply.
//!
//! `fm` and `fm_inv` are linear over the operation basis
//! `1, f, e1, ..., e9, pt` of `H^*(B, Q)`; `l` is reached by linearity
//! through `l = (f + e1 + ... + e9)/3`, which is harmless because all
//! coefficients are exact rationals.  `t_b` is never transcribed: it is
//! always computed as `fm_inv . tau* . fm`.

use std::sync::OnceLock;

use num::{One, Zero};
use thiserror::Error;

use crate::cohomology::{
    ch_line_bundle, ch_rational_curve_sheaf, frac, intersect, named_class, rat, CohClass, H2Class,
    NamedClass, Rational, H2_RANK,
};
use crate::isometry::{apply_map, builtin_map, BuiltinMap};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymbolError {
    #[error("the transform acts on base pullbacks and section pushforwards only; got {0}")]
    UnsupportedVariant(&'static str),
}

/// Images of the operation basis `1, f, e1..e9, pt` under a linear map.
struct OpImages {
    one: CohClass,
    f: CohClass,
    e: [CohClass; 9],
    pt: CohClass,
}

impl OpImages {
    /// Extends the basis images linearly to an arbitrary class.
    fn apply(&self, c: &CohClass) -> CohClass {
        let mut acc = self.one.scale(&c.rank);
        // div = l0 * l + sum d_i e_i  with  l = (f + sum e_i)/3.
        let l0 = c.div.coeff(0);
        let third = frac(1, 3);
        let f_coeff = l0 * &third;
        if !f_coeff.is_zero() {
            acc = &acc + &self.f.scale(&f_coeff);
        }
        for i in 1..H2_RANK {
            let coeff = c.div.coeff(i) + &f_coeff;
            if !coeff.is_zero() {
                acc = &acc + &self.e[i - 1].scale(&coeff);
            }
        }
        &acc + &self.pt.scale(&c.point)
    }
}

fn coh(rank: i64, div: H2Class, point: Rational) -> CohClass {
    CohClass::new(rat(rank), div, point)
}

/// fm:  1 -> -e9 + (1/2) pt,  pt -> f,  f -> -pt,
///      e_i -> 1 + e_i - e9 - (3/2) f - pt  (i != 9),
///      e9 -> 1 - (1/2) f.
fn fm_images() -> OpImages {
    let f = named_class(NamedClass::F);
    let e9 = H2Class::e(9);
    OpImages {
        one: coh(0, -&e9, frac(1, 2)),
        f: coh(0, H2Class::zero(), rat(-1)),
        e: std::array::from_fn(|k| {
            let i = k + 1;
            if i == 9 {
                coh(1, f.scale(&frac(-1, 2)), rat(0))
            } else {
                coh(
                    1,
                    &(&H2Class::e(i) - &e9) - &f.scale(&frac(3, 2)),
                    rat(-1),
                )
            }
        }),
        pt: CohClass::from_div(f.clone()),
    }
}

/// fm^-1:  1 -> e9 + (1/2) pt,  pt -> -f,  f -> pt,
///         e_i -> -1 + e_i - e9 - (3/2) f + pt  (i != 9),
///         e9 -> -1 - (1/2) f.
fn fm_inv_images() -> OpImages {
    let f = named_class(NamedClass::F);
    let e9 = H2Class::e(9);
    OpImages {
        one: coh(0, e9.clone(), frac(1, 2)),
        f: coh(0, H2Class::zero(), rat(1)),
        e: std::array::from_fn(|k| {
            let i = k + 1;
            if i == 9 {
                coh(-1, f.scale(&frac(-1, 2)), rat(0))
            } else {
                coh(
                    -1,
                    &(&H2Class::e(i) - &e9) - &f.scale(&frac(3, 2)),
                    rat(1),
                )
            }
        }),
        pt: CohClass::from_div(-&f),
    }
}

/// The cohomological Fourier-Mukai transform.
pub fn fm(c: &CohClass) -> CohClass {
    static IMAGES: OnceLock<OpImages> = OnceLock::new();
    IMAGES.get_or_init(fm_images).apply(c)
}

/// Its inverse.
pub fn fm_inv(c: &CohClass) -> CohClass {
    static IMAGES: OnceLock<OpImages> = OnceLock::new();
    IMAGES.get_or_init(fm_inv_images).apply(c)
}

/// The cohomological spectral involution `t_B = fm^-1 . tau* . fm`.
pub fn t_b(c: &CohClass) -> CohClass {
    static TAU: OnceLock<crate::isometry::PullbackMap> = OnceLock::new();
    let tau = TAU.get_or_init(|| builtin_map(BuiltinMap::Tau));
    fm_inv(&apply_map(tau, &fm(c)))
}

/// A vertical `(-2)`-curve supporting torsion sheaves.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum VerticalCurve {
    O1,
    O2,
    N1,
    N2,
}

impl VerticalCurve {
    pub fn class(self) -> H2Class {
        match self {
            VerticalCurve::O1 => named_class(NamedClass::O1),
            VerticalCurve::O2 => named_class(NamedClass::O2),
            VerticalCurve::N1 => named_class(NamedClass::N1),
            VerticalCurve::N2 => named_class(NamedClass::N2),
        }
    }
}

/// A symbolic sheaf (or shifted complex of sheaves) on the surface.
///
/// The variants are exactly the objects the transform manipulates in
/// closed form: pullbacks `beta* O(d)` from the base, pushforwards
/// `xi_* O(d)` along sections, line bundles, torsion sheaves on the
/// vertical curves, shifts and finite sums.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum SheafSymbol {
    /// `beta* O(d)`.
    BasePullback(i64),
    /// `xi_* O(d)` for a section class `xi`.
    SectionPush(H2Class, i64),
    /// `O_B(D)`.
    LineBundle(H2Class),
    /// `O_C(d)^{+m}` for a vertical curve `C`.
    VerticalSheaf(VerticalCurve, i64, u32),
    /// `inner[n]`.
    Shift(Box<SheafSymbol>, i64),
    /// A finite direct sum.
    Sum(Vec<SheafSymbol>),
}

impl SheafSymbol {
    /// Shift by `n`, collapsing nested shifts and dropping `[0]`.
    pub fn shifted(self, n: i64) -> SheafSymbol {
        match self {
            SheafSymbol::Shift(inner, m) => SheafSymbol::Shift(inner, m + n).normalized(),
            other if n == 0 => other,
            other => SheafSymbol::Shift(Box::new(other), n),
        }
    }

    /// Canonical form: shifts combined, sums flattened and sorted.
    pub fn normalized(self) -> SheafSymbol {
        match self {
            SheafSymbol::Shift(inner, n) => {
                let inner = inner.normalized();
                match inner {
                    SheafSymbol::Shift(deeper, m) => {
                        SheafSymbol::Shift(deeper, m + n).normalized()
                    }
                    other if n == 0 => other,
                    other => SheafSymbol::Shift(Box::new(other), n),
                }
            }
            SheafSymbol::Sum(parts) => {
                let mut flat = Vec::new();
                for p in parts {
                    match p.normalized() {
                        SheafSymbol::Sum(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                flat.sort();
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    SheafSymbol::Sum(flat)
                }
            }
            other => other,
        }
    }

    fn variant_name(&self) -> &'static str {
        match self {
            SheafSymbol::BasePullback(_) => "BasePullback",
            SheafSymbol::SectionPush(_, _) => "SectionPush",
            SheafSymbol::LineBundle(_) => "LineBundle",
            SheafSymbol::VerticalSheaf(_, _, _) => "VerticalSheaf",
            SheafSymbol::Shift(_, _) => "Shift",
            SheafSymbol::Sum(_) => "Sum",
        }
    }
}

/// Symbolic action of the Fourier-Mukai transform:
///
/// * `beta* O(d)  ->  e_*(O(d - 1))[-1]`
/// * `xi_* O(d)   ->  O_B(xi - e + (d - xi.e - 1) f)`
///
/// distributing over sums and commuting with shifts.  Line bundles and
/// vertical sheaves are outside the closed-form rules and are rejected.
pub fn fm_symbol(s: &SheafSymbol) -> Result<SheafSymbol, SymbolError> {
    let out = match s {
        SheafSymbol::BasePullback(d) => {
            SheafSymbol::SectionPush(H2Class::e(9), d - 1).shifted(-1)
        }
        SheafSymbol::SectionPush(xi, d) => {
            let e9 = H2Class::e(9);
            let twist = rat(*d) - intersect(xi, &e9) - Rational::one();
            let div = &(xi - &e9) + &named_class(NamedClass::F).scale(&twist);
            SheafSymbol::LineBundle(div)
        }
        SheafSymbol::Shift(inner, n) => fm_symbol(inner)?.shifted(*n),
        SheafSymbol::Sum(parts) => {
            let images = parts
                .iter()
                .map(fm_symbol)
                .collect::<Result<Vec<_>, _>>()?;
            SheafSymbol::Sum(images).normalized()
        }
        other => return Err(SymbolError::UnsupportedVariant(other.variant_name())),
    };
    Ok(out)
}

/// Chern character of a symbolic sheaf.
pub fn ch_symbol(s: &SheafSymbol) -> CohClass {
    match s {
        SheafSymbol::BasePullback(d) => {
            // ch(O_B(d f)) = 1 + d f since f.f = 0.
            ch_line_bundle(&named_class(NamedClass::F).scale(&rat(*d)))
        }
        SheafSymbol::SectionPush(xi, d) => ch_rational_curve_sheaf(xi, *d),
        SheafSymbol::LineBundle(div) => ch_line_bundle(div),
        SheafSymbol::VerticalSheaf(curve, d, mult) => {
            ch_rational_curve_sheaf(&curve.class(), *d).scale(&rat(i64::from(*mult)))
        }
        SheafSymbol::Shift(inner, n) => {
            let sign = if n.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
            ch_symbol(inner).scale(&sign)
        }
        SheafSymbol::Sum(parts) => parts
            .iter()
            .map(ch_symbol)
            .fold(CohClass::zero(), |acc, c| &acc + &c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn div(d: H2Class) -> CohClass {
        CohClass::from_div(d)
    }

    fn op_basis() -> Vec<CohClass> {
        let mut basis = vec![CohClass::one()];
        basis.push(div(named_class(NamedClass::F)));
        for i in 1..=9 {
            basis.push(div(H2Class::e(i)));
        }
        basis.push(CohClass::pt());
        basis
    }

    #[test]
    fn fm_on_generators() {
        assert_eq!(
            fm(&CohClass::one()),
            CohClass::new(rat(0), -&H2Class::e(9), frac(1, 2))
        );
        assert_eq!(fm(&CohClass::pt()), div(named_class(NamedClass::F)));
        assert_eq!(
            fm(&div(named_class(NamedClass::F))),
            CohClass::new(rat(0), H2Class::zero(), rat(-1))
        );
        assert_eq!(
            fm_inv(&CohClass::one()),
            CohClass::new(rat(0), H2Class::e(9), frac(1, 2))
        );
        assert_eq!(
            fm_inv(&div(H2Class::e(1))),
            CohClass::new(
                rat(-1),
                &(&H2Class::e(1) - &H2Class::e(9))
                    - &named_class(NamedClass::F).scale(&frac(3, 2)),
                rat(1)
            )
        );
    }

    #[test]
    fn fm_linearity_example() {
        // fm(e1 + (1/2) pt) = ch(O_B(e1 - e9 - f)).
        let input = CohClass::new(rat(0), H2Class::e(1), frac(1, 2));
        let expect = ch_line_bundle(
            &(&(&H2Class::e(1) - &H2Class::e(9)) - &named_class(NamedClass::F)),
        );
        assert_eq!(fm(&input), expect);
    }

    #[test]
    fn fm_and_fm_inv_are_mutually_inverse() {
        let mut basis = op_basis();
        basis.push(div(H2Class::l()));
        for c in &basis {
            assert_eq!(&fm_inv(&fm(c)), c);
            assert_eq!(&fm(&fm_inv(c)), c);
        }
    }

    #[test]
    fn t_b_matches_its_table_except_row_one() {
        let f = named_class(NamedClass::F);
        // Row e_j, j = 1, 2, 3:  2f + 2 e9 - e_j - 2 pt.
        for j in 1..=3 {
            let expect = CohClass::new(
                rat(0),
                &(&f.scale_int(2) + &H2Class::e(9).scale_int(2)) - &H2Class::e(j),
                rat(-2),
            );
            assert_eq!(t_b(&div(H2Class::e(j))), expect);
        }
        // Row e_i, i = 4, 5, 6:  2f - l + 2 e9 + e7 + e_i - pt.
        for i in 4..=6 {
            let expect = CohClass::new(
                rat(0),
                &(&(&(&f.scale_int(2) - &H2Class::l()) + &H2Class::e(9).scale_int(2))
                    + &H2Class::e(7))
                    + &H2Class::e(i),
                rat(-1),
            );
            assert_eq!(t_b(&div(H2Class::e(i))), expect);
        }
        // Fixed rows.
        assert_eq!(t_b(&CohClass::pt()), CohClass::pt());
        assert_eq!(t_b(&div(f.clone())), div(f.clone()));
        assert_eq!(t_b(&div(H2Class::e(9))), div(H2Class::e(9)));
        // Row l:  5f - e1 - e2 - e3 + e7 + 5 e9 - 3 pt.
        let expect_l = CohClass::new(
            rat(0),
            &(&(&f.scale_int(5)
                - &(&(&H2Class::e(1) + &H2Class::e(2)) + &H2Class::e(3)))
                + &H2Class::e(7))
                + &H2Class::e(9).scale_int(5),
            rat(-3),
        );
        assert_eq!(t_b(&div(H2Class::l())), expect_l);
        // The printed table claims 1 -> 1; the composition says otherwise.
        let computed_one = t_b(&CohClass::one());
        let expect_one = CohClass::new(
            rat(1),
            &(&f + &H2Class::e(9)) - &H2Class::e(1),
            rat(-1),
        );
        assert_eq!(computed_one, expect_one);
        assert_ne!(computed_one, CohClass::one());
    }

    #[test]
    fn t_b_is_an_involution() {
        let mut basis = op_basis();
        basis.push(div(H2Class::l()));
        for c in &basis {
            assert_eq!(&t_b(&t_b(c)), c);
        }
    }

    #[test]
    fn symbol_rules() {
        let base = SheafSymbol::BasePullback(0);
        assert_eq!(
            fm_symbol(&base).unwrap(),
            SheafSymbol::Shift(
                Box::new(SheafSymbol::SectionPush(H2Class::e(9), -1)),
                -1
            )
        );
        let push_zeta = SheafSymbol::SectionPush(H2Class::e(1), 0);
        assert_eq!(
            fm_symbol(&push_zeta).unwrap(),
            SheafSymbol::LineBundle(
                &(&H2Class::e(1) - &H2Class::e(9)) - &named_class(NamedClass::F)
            )
        );
        // The zero section itself lands on the trivial bundle.
        let push_e = SheafSymbol::SectionPush(H2Class::e(9), 0);
        assert_eq!(
            fm_symbol(&push_e).unwrap(),
            SheafSymbol::LineBundle(H2Class::zero())
        );
        // Unsupported inputs are rejected.
        assert_eq!(
            fm_symbol(&SheafSymbol::LineBundle(H2Class::zero())),
            Err(SymbolError::UnsupportedVariant("LineBundle"))
        );
        assert_eq!(
            fm_symbol(&SheafSymbol::VerticalSheaf(VerticalCurve::O1, -1, 1)),
            Err(SymbolError::UnsupportedVariant("VerticalSheaf"))
        );
    }

    #[test]
    fn ch_of_symbols() {
        let shifted = SheafSymbol::SectionPush(H2Class::e(9), -1).shifted(-1);
        assert_eq!(
            ch_symbol(&shifted),
            CohClass::new(rat(0), -&H2Class::e(9), frac(1, 2))
        );
        assert_eq!(
            ch_symbol(&SheafSymbol::VerticalSheaf(VerticalCurve::O1, -1, 1)),
            CohClass::from_div(named_class(NamedClass::O1))
        );
        assert_eq!(
            ch_symbol(&SheafSymbol::LineBundle(named_class(NamedClass::F))),
            CohClass::new(rat(1), named_class(NamedClass::F), rat(0))
        );
    }

    #[test]
    fn shift_and_sum_normalization() {
        let s = SheafSymbol::BasePullback(2);
        let nested = SheafSymbol::Shift(
            Box::new(SheafSymbol::Shift(Box::new(s.clone()), 3)),
            -1,
        );
        assert_eq!(
            nested.normalized(),
            SheafSymbol::Shift(Box::new(s.clone()), 2)
        );
        assert_eq!(SheafSymbol::Shift(Box::new(s.clone()), 0).normalized(), s);
        let a = SheafSymbol::BasePullback(1);
        let b = SheafSymbol::SectionPush(H2Class::e(2), 0);
        let left = SheafSymbol::Sum(vec![
            b.clone(),
            SheafSymbol::Sum(vec![a.clone()]),
        ]);
        let right = SheafSymbol::Sum(vec![a, b]);
        assert_eq!(left.normalized(), right.normalized());
    }

    #[test]
    fn commuting_square_on_symbols() {
        let mut symbols = Vec::new();
        for d in -3..=3 {
            symbols.push(SheafSymbol::BasePullback(d));
            for i in [1usize, 2, 3, 4, 5, 6, 7, 9] {
                symbols.push(SheafSymbol::SectionPush(H2Class::e(i), d));
            }
            // A non-basis section class exercises genuine linearity.
            let neg_e1 = H2Class::from_ints([1, -1, 0, 0, 0, 0, 0, -1, 0, 0]);
            symbols.push(SheafSymbol::SectionPush(neg_e1, d));
        }
        symbols.push(SheafSymbol::Sum(vec![
            SheafSymbol::BasePullback(1),
            SheafSymbol::SectionPush(H2Class::e(3), -2).shifted(2),
        ]));
        for s in &symbols {
            let lhs = ch_symbol(&fm_symbol(s).unwrap());
            let rhs = fm(&ch_symbol(s));
            assert_eq!(lhs, rhs, "square fails on {:?}", s);
        }
    }
}
