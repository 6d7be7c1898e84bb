//! The spectral involution on line-bundle classes.
//!
//! `t_tilde` is the affine involution induced on `Pic(B)` by the
//! spectral involution; `omega` is its linear part.  For line bundles
//! `O(-a xi)` supported on multiples of a section the transform is a
//! two-term complex whose degree-zero part is again a line bundle and
//! whose degree-one part is torsion supported on the `o_i`; both pieces
//! are computed exactly here.  `Pic^W` is the sublattice of classes the
//! transform keeps locally free.

use num::{BigInt, One};
use thiserror::Error;

use crate::cohomology::{
    ch_line_bundle, intersect, named_class, rat, CohClass, H2Class, NamedClass, Rational, H2_RANK,
};
use crate::fm::t_b;
use crate::isometry::{builtin_map, BuiltinMap, PullbackMap};
use crate::linalg::{
    abs_det, hermite_normal_form, integer_kernel, solve_in_column_lattice, solve_in_hermite,
    IntMat,
};
use crate::mordell_weil::SectionClass;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectralError {
    #[error("negative multiple {0}: positive twists need the dual-bundle machinery")]
    NegativeMultiple(i64),
    #[error("class is not integral")]
    NotIntegral,
    #[error("curve class is not in Pic^W")]
    NotInPicW,
    #[error("curve has fiber degree {0} < 1, not finite over the base")]
    NotFiniteOverBase(Rational),
}

fn tau() -> PullbackMap {
    builtin_map(BuiltinMap::Tau)
}

/// `e - zeta = e9 - e1`.
fn e_minus_zeta() -> H2Class {
    &H2Class::e(9) - &H2Class::e(1)
}

/// `e - zeta + f`, the translation part of the affine involution.
pub fn translation_class() -> H2Class {
    &e_minus_zeta() + &named_class(NamedClass::F)
}

/// The affine involution on line-bundle classes:
/// `t_tilde(L) = tau*(L) + (L.(e - zeta)) f + (L.f + 1)(e - zeta + f)`.
pub fn t_tilde(l: &H2Class) -> H2Class {
    let f = named_class(NamedClass::F);
    let a = intersect(l, &e_minus_zeta());
    let b = intersect(l, &f) + Rational::one();
    &(&tau().apply_h2(l) + &f.scale(&a)) + &translation_class().scale(&b)
}

/// The linear part of [`t_tilde`]:
/// `omega(L) = tau*(L) + (L.(e - zeta)) f + (L.f)(e - zeta + f)`.
pub fn omega(l: &H2Class) -> H2Class {
    &t_tilde(l) - &translation_class()
}

/// The transform of `O_B(-a xi)` for a section `xi`: the divisor class
/// of its degree-zero part plus the torsion multiplicities on `o1, o2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpectralImage {
    /// Divisor class of the line bundle `H^0`.
    pub h0: H2Class,
    /// Multiplicity of `O_{o1}(-1)` in `H^1`.
    pub torsion_o1: u32,
    /// Multiplicity of `O_{o2}(-1)` in `H^1`.
    pub torsion_o2: u32,
}

impl SpectralImage {
    /// `ch(H^0) - ch(H^1)`; matches `t_b` of the source bundle.
    pub fn ch(&self) -> CohClass {
        let o1 = CohClass::from_div(named_class(NamedClass::O1));
        let o2 = CohClass::from_div(named_class(NamedClass::O2));
        &(&ch_line_bundle(&self.h0) - &o1.scale(&rat(i64::from(self.torsion_o1))))
            - &o2.scale(&rat(i64::from(self.torsion_o2)))
    }
}

/// Transform of `O_B(-a xi)`, `a >= 0`.
///
/// The degree-zero part deviates from the affine formula exactly by the
/// torsion corrections `(a - 1)(xi.o_i) o_i`, which vanish for
/// `a <= 1`.
pub fn t_full_on_multiple_of_section(
    a: i64,
    xi: &SectionClass,
) -> Result<SpectralImage, SpectralError> {
    if a < 0 {
        return Err(SpectralError::NegativeMultiple(a));
    }
    let o1 = named_class(NamedClass::O1);
    let o2 = named_class(NamedClass::O2);
    let weight = (a - 1).max(0);
    // xi.o_i is 0 or 1 for a section class.
    let meets = |o: &H2Class| i64::from(intersect(xi.cls(), o).is_one());
    let k1 = weight * meets(&o1);
    let k2 = weight * meets(&o2);
    let source = xi.cls().scale_int(-a);
    let h0 = &(&t_tilde(&source) + &o1.scale_int(k1)) + &o2.scale_int(k2);
    Ok(SpectralImage {
        h0,
        torsion_o1: u32::try_from(k1).expect("torsion count is nonnegative"),
        torsion_o2: u32::try_from(k2).expect("torsion count is nonnegative"),
    })
}

/// The sublattice `Pic^W(B)` generated by `f` and the sections meeting
/// the neutral component of each fiber.
///
/// Generators: `f`, `e9`, `f + e_i - e1 + e9` for `i = 2..6`, and
/// `2 e7 - e8 + 2 f`.  Membership is decided on the cached Hermite
/// form of the generator matrix.
pub struct PicWLattice {
    generators: Vec<H2Class>,
    hermite_basis: IntMat,
    hermite_transform: IntMat,
}

impl Default for PicWLattice {
    fn default() -> Self {
        Self::new()
    }
}

impl PicWLattice {
    pub fn new() -> Self {
        let f = named_class(NamedClass::F);
        let e1 = H2Class::e(1);
        let e9 = H2Class::e(9);
        let mut generators = vec![f.clone(), e9.clone()];
        for i in 2..=6 {
            generators.push(&(&(&f + &H2Class::e(i)) - &e1) + &e9);
        }
        generators.push(&(&H2Class::e(7).scale_int(2) - &H2Class::e(8)) + &f.scale_int(2));

        let mat = IntMat::from_columns(
            &generators
                .iter()
                .map(|g| g.to_ints().expect("generators are integral").to_vec())
                .collect::<Vec<_>>(),
        );
        let (hermite_basis, hermite_transform) = hermite_normal_form(&mat);
        PicWLattice {
            generators,
            hermite_basis,
            hermite_transform,
        }
    }

    pub fn generators(&self) -> &[H2Class] {
        &self.generators
    }

    /// Integer membership of an integral class.
    pub fn contains(&self, d: &H2Class) -> Result<bool, SpectralError> {
        let v = d.to_ints().ok_or(SpectralError::NotIntegral)?;
        Ok(solve_in_hermite(&self.hermite_basis, &self.hermite_transform, &v).is_some())
    }

    /// The pairing-with-`(o1, o2)` matrix whose kernel is the
    /// orthogonal complement `Span(o1, o2)^perp`.
    fn perp_pairing_matrix() -> IntMat {
        let o1 = named_class(NamedClass::O1);
        let o2 = named_class(NamedClass::O2);
        IntMat::from_fn(2, H2_RANK, |k, j| {
            let o = if k == 0 { &o1 } else { &o2 };
            intersect(&H2Class::basis(j), o).to_integer()
        })
    }

    /// Integral basis of `Span(o1, o2)^perp` inside `H^2(B, Z)`.
    pub fn perp_lattice_basis() -> IntMat {
        integer_kernel(&Self::perp_pairing_matrix())
    }

    /// Index of `Pic^W` inside `Span(o1, o2)^perp`, via the determinant
    /// of the change-of-basis matrix between the two rank-8 lattices.
    pub fn index_in_perp(&self) -> BigInt {
        let kernel = Self::perp_lattice_basis();
        let cols: Vec<Vec<BigInt>> = self
            .generators
            .iter()
            .map(|g| {
                let v = g.to_ints().expect("integral").to_vec();
                solve_in_column_lattice(&kernel, &v)
                    .expect("every generator is orthogonal to o1 and o2")
            })
            .collect();
        let x = IntMat::from_columns(&cols);
        abs_det(&x)
    }
}

/// Transform of a line bundle restricted to a spectral curve `C` in
/// `Pic^W`, finite over the base: the supporting curve moves by
/// `alpha*` and the bundle by the affine involution,
/// `(C, L) -> (alpha*(C), alpha*(L) + (e - zeta + f))`.
pub fn spectral_transform_curve(
    c: &H2Class,
    l: &H2Class,
) -> Result<(H2Class, H2Class), SpectralError> {
    let picw = PicWLattice::new();
    if !picw.contains(c)? {
        return Err(SpectralError::NotInPicW);
    }
    let f = named_class(NamedClass::F);
    let deg = intersect(c, &f);
    if deg < Rational::one() {
        return Err(SpectralError::NotFiniteOverBase(deg));
    }
    let alpha = builtin_map(BuiltinMap::Alpha);
    let d = alpha.apply_h2(c);
    let lp = &alpha.apply_h2(l) + &translation_class();

    // The transform intertwines the restricted Chern characters; this
    // is an internal consistency identity, not an input condition.
    let source = &ch_line_bundle(l) - &ch_line_bundle(&(l - c));
    let target = &ch_line_bundle(&lp) - &ch_line_bundle(&(&lp - &d));
    assert_eq!(
        t_b(&source),
        target,
        "spectral curve transform lost ch-coherence"
    );

    Ok((d, lp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn h(v: [i64; 10]) -> H2Class {
        H2Class::from_ints(v)
    }

    fn f() -> H2Class {
        named_class(NamedClass::F)
    }

    fn random_integral(rng: &mut ChaCha8Rng) -> H2Class {
        H2Class::from_ints(std::array::from_fn(|_| rng.gen_range(-5..=5)))
    }

    #[test]
    fn t_tilde_on_simple_classes() {
        assert_eq!(t_tilde(&H2Class::zero()), translation_class());
        // e9 -> f + 2 e9 - e1.
        let expect = &(&f() + &H2Class::e(9).scale_int(2)) - &H2Class::e(1);
        assert_eq!(t_tilde(&H2Class::e(9)), expect);
        // l -> 6f - 2 e1 - e2 - e3 + e7 + 6 e9.
        let expect_l = &(&(&(&f().scale_int(6) - &H2Class::e(1).scale_int(2))
            - &(&H2Class::e(2) + &H2Class::e(3)))
            + &H2Class::e(7))
            + &H2Class::e(9).scale_int(6);
        assert_eq!(t_tilde(&H2Class::l()), expect_l);
    }

    #[test]
    fn t_tilde_agrees_with_t_b_route() {
        // The affine formula and the degree-two part of t_b(exp(c1))
        // are independent routes to the same class.
        let mut rng = ChaCha8Rng::seed_from_u64(crate::verify::DEFAULT_SEED);
        for _ in 0..1000 {
            let l = random_integral(&mut rng);
            let via_tb = t_b(&ch_line_bundle(&l)).div;
            assert_eq!(t_tilde(&l), via_tb);
        }
    }

    #[test]
    fn t_tilde_is_an_affine_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::verify::DEFAULT_SEED ^ 1);
        for _ in 0..200 {
            let l = random_integral(&mut rng);
            assert_eq!(t_tilde(&t_tilde(&l)), l);
        }
        // The two structural facts forcing this: omega is an involution
        // and omega negates the translation class.
        let t = translation_class();
        assert_eq!(omega(&t), -&t);
    }

    #[test]
    fn omega_swaps_o_classes_with_signs() {
        let o1 = named_class(NamedClass::O1);
        let o2 = named_class(NamedClass::O2);
        assert_eq!(omega(&o1), -&o2);
        assert_eq!(omega(&o2), -&o1);
    }

    #[test]
    fn omega_preserves_the_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::verify::DEFAULT_SEED ^ 2);
        for _ in 0..200 {
            let a = random_integral(&mut rng);
            let b = random_integral(&mut rng);
            assert_eq!(intersect(&omega(&a), &omega(&b)), intersect(&a, &b));
            assert_eq!(omega(&omega(&a)), a);
        }
    }

    #[test]
    fn omega_restricts_to_alpha_on_the_perp_lattice() {
        let alpha = builtin_map(BuiltinMap::Alpha);
        let kernel = PicWLattice::perp_lattice_basis();
        assert_eq!(kernel.ncols(), 8);
        for j in 0..kernel.ncols() {
            let col = kernel.column(j);
            let v = H2Class::from_coeffs(std::array::from_fn(|i| {
                Rational::from_integer(col[i].clone())
            }));
            assert_eq!(omega(&v), alpha.apply_h2(&v));
        }
    }

    #[test]
    fn spectral_image_of_multiples() {
        let zeta = SectionClass::new(H2Class::e(1)).unwrap();
        // a = 0 is the structure sheaf: a plain line bundle.
        let img = t_full_on_multiple_of_section(0, &zeta).unwrap();
        assert_eq!(img.h0, translation_class());
        assert_eq!((img.torsion_o1, img.torsion_o2), (0, 0));
        // a = 1 still has no torsion.
        let img = t_full_on_multiple_of_section(1, &zeta).unwrap();
        assert_eq!((img.torsion_o1, img.torsion_o2), (0, 0));
        assert_eq!(img.ch(), t_b(&ch_line_bundle(&H2Class::e(1).scale_int(-1))));
        // a = 3 on e7 meets o1 once, so two torsion copies appear there.
        let e7 = SectionClass::new(H2Class::e(7)).unwrap();
        let img = t_full_on_multiple_of_section(3, &e7).unwrap();
        assert_eq!((img.torsion_o1, img.torsion_o2), (2, 0));
        assert!(t_full_on_multiple_of_section(-1, &zeta).is_err());
    }

    #[test]
    fn spectral_image_ch_coherence_grid() {
        for i in [1usize, 2, 3, 4, 5, 6, 7, 9] {
            let xi = SectionClass::new(H2Class::e(i)).unwrap();
            for a in 0..=5 {
                let img = t_full_on_multiple_of_section(a, &xi).unwrap();
                let source_ch = ch_line_bundle(&xi.cls().scale_int(-a));
                assert_eq!(img.ch(), t_b(&source_ch), "xi = e{}, a = {}", i, a);
                let vanishes = img.torsion_o1 == 0 && img.torsion_o2 == 0;
                let o1 = named_class(NamedClass::O1);
                let o2 = named_class(NamedClass::O2);
                let expected_vanishing = a <= 1
                    || (intersect(xi.cls(), &o1).is_zero()
                        && intersect(xi.cls(), &o2).is_zero());
                assert_eq!(vanishes, expected_vanishing);
            }
        }
    }

    #[test]
    fn picw_membership() {
        let picw = PicWLattice::new();
        assert!(picw.contains(&f()).unwrap());
        assert!(picw.contains(&H2Class::e(9)).unwrap());
        let last = &(&H2Class::e(7).scale_int(2) - &H2Class::e(8)) + &f().scale_int(2);
        assert!(picw.contains(&last).unwrap());
        // e1 meets o1, so it cannot lie in a lattice orthogonal to o1.
        assert!(!picw.contains(&H2Class::e(1)).unwrap());
        assert_eq!(
            picw.contains(&H2Class::e(1).scale(&crate::cohomology::frac(1, 2))),
            Err(SpectralError::NotIntegral)
        );
        // Every generator is orthogonal to both o-classes.
        for g in picw.generators() {
            assert!(intersect(g, &named_class(NamedClass::O1)).is_zero());
            assert!(intersect(g, &named_class(NamedClass::O2)).is_zero());
        }
    }

    #[test]
    fn picw_index_is_three() {
        let picw = PicWLattice::new();
        assert_eq!(picw.index_in_perp(), BigInt::from(3));
        // Both lattices have rank 8.
        assert_eq!(PicWLattice::perp_lattice_basis().ncols(), 8);
        assert_eq!(picw.generators().len(), 8);
    }

    #[test]
    fn perp_lattice_matches_its_printed_basis() {
        // e9, {e_i - e1}, l - e7 - 2 e1, 2l - e8 - 4 e1 generate the
        // same lattice as the computed kernel.
        let printed: Vec<H2Class> = vec![
            H2Class::e(9),
            &H2Class::e(2) - &H2Class::e(1),
            &H2Class::e(3) - &H2Class::e(1),
            &H2Class::e(4) - &H2Class::e(1),
            &H2Class::e(5) - &H2Class::e(1),
            &H2Class::e(6) - &H2Class::e(1),
            h([1, -2, 0, 0, 0, 0, 0, -1, 0, 0]),
            h([2, -4, 0, 0, 0, 0, 0, 0, -1, 0]),
        ];
        let kernel = PicWLattice::perp_lattice_basis();
        for v in &printed {
            let b = v.to_ints().unwrap().to_vec();
            assert!(solve_in_column_lattice(&kernel, &b).is_some());
        }
        let printed_mat = IntMat::from_columns(
            &printed
                .iter()
                .map(|v| v.to_ints().unwrap().to_vec())
                .collect::<Vec<_>>(),
        );
        for j in 0..kernel.ncols() {
            assert!(solve_in_column_lattice(&printed_mat, &kernel.column(j)).is_some());
        }
    }

    #[test]
    fn curve_transform_examples() {
        // C in |2e + 2f| with the trivial bundle.
        let c = &H2Class::e(9).scale_int(2) + &f().scale_int(2);
        let (d, lp) = spectral_transform_curve(&c, &H2Class::zero()).unwrap();
        assert_eq!(d, c);
        assert_eq!(lp, translation_class());

        let (d, lp) = spectral_transform_curve(&f(), &H2Class::e(9)).unwrap();
        assert_eq!(d, f());
        assert_eq!(lp, &H2Class::e(9) + &translation_class());

        assert_eq!(
            spectral_transform_curve(&H2Class::e(1), &H2Class::zero()),
            Err(SpectralError::NotInPicW)
        );
        // The zero class is a lattice member but has fiber degree zero.
        assert_eq!(
            spectral_transform_curve(&H2Class::zero(), &H2Class::zero()),
            Err(SpectralError::NotFiniteOverBase(rat(0)))
        );
    }

    #[test]
    fn curve_transform_random_bundles() {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::verify::DEFAULT_SEED ^ 3);
        let curves = [
            f(),
            &H2Class::e(9).scale_int(2) + &f().scale_int(2),
            &H2Class::e(9).scale_int(3) + &f().scale_int(5),
        ];
        for c in &curves {
            for _ in 0..100 {
                let l = random_integral(&mut rng);
                // The assert inside the transform is the actual check.
                let (d, _) = spectral_transform_curve(c, &l).unwrap();
                assert_eq!(d, builtin_map(BuiltinMap::Alpha).apply_h2(c));
            }
        }
    }
}
