//! Exact Weierstrass data and the birational plane involution.
//!
//! A [`BinaryForm`] is a homogeneous form in `(t0, t1)` with rational
//! coefficients; the Weierstrass data is a pair `(g2, g3)` of degrees
//! `(4, 6)` and discriminant `4 g2^3 + 27 g3^2` of degree 12.  Root
//! multiplicities are extracted by exact gcd/squarefree decomposition
//! over `Q` -- roots themselves are never computed, so irrational and
//! complex root multiplicities come out exactly.  The multiplicity
//! profile is the fiber count per Kodaira `I_k` candidate; simultaneous
//! vanishing of `g2` and `g3` at a repeated root raises the additive
//! flag instead.

use std::collections::BTreeMap;

use num::{BigInt, Integer, One, Signed, Zero};
use thiserror::Error;

use crate::cohomology::{rat, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("expected a form of degree {expected}, got degree {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("coefficient list has length {got}, expected degree + 1 = {expected}")]
    BadCoefficientCount { expected: usize, got: usize },
    #[error("discriminant vanishes identically; the fibration is degenerate")]
    DegenerateDiscriminant,
    #[error("the cubic must vanish at (0:0:1): its z^3 coefficient is nonzero")]
    BaseNotOnCubic,
    #[error("F_z vanishes at the point; it is an indeterminacy point of the involution")]
    IndeterminacyPoint,
    #[error("(0, 0, 0) does not define a projective point")]
    ZeroPoint,
    #[error("a plane cubic must not be identically zero")]
    ZeroCubic,
}

/// A homogeneous binary form; `coeffs[k]` multiplies `t0^(deg-k) t1^k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<Rational>,
}

impl BinaryForm {
    pub fn new(degree: usize, coeffs: Vec<Rational>) -> Result<Self, GeometryError> {
        if coeffs.len() != degree + 1 {
            return Err(GeometryError::BadCoefficientCount {
                expected: degree + 1,
                got: coeffs.len(),
            });
        }
        Ok(BinaryForm { degree, coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm {
            degree,
            coeffs: vec![Rational::zero(); degree + 1],
        }
    }

    pub fn from_ints(degree: usize, coeffs: &[i64]) -> Result<Self, GeometryError> {
        Self::new(degree, coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// The monomial `t0^(deg-k) t1^k`.
    pub fn monomial(degree: usize, k: usize) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[k] = Rational::one();
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree, other.degree, "can only add forms of equal degree");
        BinaryForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let degree = self.degree + other.degree;
        let mut coeffs = vec![Rational::zero(); degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        BinaryForm { degree, coeffs }
    }

    pub fn scale(&self, s: &Rational) -> BinaryForm {
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Dehomogenisation at `t0 = 1`: the coefficient vector read as a
    /// univariate polynomial in `u = t1/t0`.  The degree drop is the
    /// multiplicity of the root at `(0:1)`.
    fn dehomogenize(&self) -> Poly {
        Poly::from_coeffs(self.coeffs.clone())
    }

    /// Multiplicity of the root at infinity `(0:1)`.
    fn infinity_multiplicity(&self) -> usize {
        if self.is_zero() {
            // The zero form vanishes everywhere; callers special-case it.
            return self.degree + 1;
        }
        self.degree - self.dehomogenize().degree().expect("nonzero form")
    }
}

/// Invariance under the standard involution `t1 -> -t1`: all odd
/// `t1`-degree coefficients must vanish.
pub fn is_tau_invariant(g: &BinaryForm) -> bool {
    g.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
}

/// The degree-12 discriminant form `4 g2^3 + 27 g3^2` of the
/// Weierstrass equation `y^2 z = x^3 + g2 x z^2 + g3 z^3`.
///
/// The overall normalisation constant is a convention; any nonzero
/// multiple has the same root multiplicities.
pub fn discriminant(g2: &BinaryForm, g3: &BinaryForm) -> Result<BinaryForm, GeometryError> {
    if g2.degree() != 4 {
        return Err(GeometryError::WrongDegree {
            expected: 4,
            got: g2.degree(),
        });
    }
    if g3.degree() != 6 {
        return Err(GeometryError::WrongDegree {
            expected: 6,
            got: g3.degree(),
        });
    }
    let cube = g2.mul(g2).mul(g2).scale(&rat(4));
    let square = g3.mul(g3).scale(&rat(27));
    Ok(cube.add(&square))
}

/// Multiset of root multiplicities of the discriminant, plus the flag
/// signalling possible additive (non-`I_k`) fiber types.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiberProfile {
    /// Sorted `(multiplicity, number of roots with that multiplicity)`.
    pub profile: Vec<(usize, usize)>,
    /// True iff `g2` and `g3` vanish simultaneously at some repeated
    /// root of the discriminant.
    pub additive_flag: bool,
}

/// Squarefree-decomposes the discriminant of `(g2, g3)` into the fiber
/// multiplicity profile.
pub fn fiber_profile(g2: &BinaryForm, g3: &BinaryForm) -> Result<FiberProfile, GeometryError> {
    let delta = discriminant(g2, g3)?;
    if delta.is_zero() {
        return Err(GeometryError::DegenerateDiscriminant);
    }

    let p = delta.dehomogenize();
    let inf_mult = delta.infinity_multiplicity();
    let parts = p.squarefree_decomposition();

    let mut profile: BTreeMap<usize, usize> = BTreeMap::new();
    for (mult, part) in &parts {
        let d = part.degree().unwrap_or(0);
        if d > 0 {
            *profile.entry(*mult).or_insert(0) += d;
        }
    }
    if inf_mult > 0 {
        *profile.entry(inf_mult).or_insert(0) += 1;
    }

    // Repeated part of the discriminant meeting the common vanishing of
    // g2 and g3 signals an additive Kodaira type.
    let repeated = p.gcd(&p.derivative());
    let common_fin = g2.dehomogenize().gcd(&g3.dehomogenize());
    let fin_hit = repeated.gcd(&common_fin).degree().unwrap_or(0) > 0;
    let g2_inf = if g2.is_zero() { usize::MAX } else { g2.infinity_multiplicity() };
    let g3_inf = if g3.is_zero() { usize::MAX } else { g3.infinity_multiplicity() };
    let inf_hit = inf_mult >= 2 && g2_inf >= 1 && g3_inf >= 1;

    Ok(FiberProfile {
        profile: profile.into_iter().collect(),
        additive_flag: fin_hit || inf_hit,
    })
}

/// Dense univariate polynomial over `Q`, lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    fn from_coeffs(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    #[cfg(test)]
    fn one() -> Poly {
        Poly {
            coeffs: vec![Rational::one()],
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub(crate) fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn leading(&self) -> &Rational {
        self.coeffs.last().expect("nonzero polynomial")
    }

    fn scale(&self, s: &Rational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.leading().recip())
    }

    fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &Vec<Rational>, i: usize| v.get(i).cloned().unwrap_or_else(Rational::zero);
        Poly::from_coeffs(
            (0..n)
                .map(|i| get(&self.coeffs, i) - get(&other.coeffs, i))
                .collect(),
        )
    }

    #[cfg(test)]
    fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    /// Euclidean division; the divisor must be nonzero.
    fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quo = vec![Rational::zero(); self.coeffs.len().saturating_sub(divisor.coeffs.len() - 1)];
        while !rem.is_zero() && rem.coeffs.len() >= divisor.coeffs.len() {
            let shift = rem.coeffs.len() - divisor.coeffs.len();
            let factor = rem.leading() / divisor.leading();
            let mut scaled = vec![Rational::zero(); shift];
            scaled.extend(divisor.coeffs.iter().map(|c| c * &factor));
            rem = rem.sub(&Poly::from_coeffs(scaled));
            quo[shift] = factor;
        }
        (Poly::from_coeffs(quo), rem)
    }

    fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "division was not exact");
        q
    }

    /// Monic gcd, with `gcd(p, 0) = monic(p)`.
    pub(crate) fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's squarefree decomposition: returns `(i, a_i)` with
    /// `self = c * prod a_i^i` and every `a_i` monic squarefree,
    /// pairwise coprime.  Entries with constant `a_i` are omitted.
    ///
    /// The running pair `(w, y)` must keep its exact scaling or the
    /// `y - w'` step loses the multiplicity bookkeeping, so only the
    /// gcds are normalised to monic.
    pub(crate) fn squarefree_decomposition(&self) -> Vec<(usize, Poly)> {
        if self.is_constant() {
            return Vec::new();
        }
        let deriv = self.derivative();
        let g = self.gcd(&deriv);
        let mut w = self.div_exact(&g);
        let mut y = deriv.div_exact(&g);
        let mut out = Vec::new();
        let mut i = 1;
        while !w.is_constant() {
            let z = y.sub(&w.derivative());
            let a = w.gcd(&z);
            if !a.is_constant() {
                out.push((i, a.clone()));
            }
            w = w.div_exact(&a);
            y = z.div_exact(&a);
            i += 1;
        }
        out
    }
}

/// Number of monomials of a plane cubic.
pub const CUBIC_MONOMIALS: usize = 10;

/// Exponent triples `(i, j, k)` of `x^i y^j z^k` with `i + j + k = 3`,
/// in the fixed storage order.
pub const CUBIC_EXPONENTS: [(u32, u32, u32); CUBIC_MONOMIALS] = [
    (3, 0, 0),
    (2, 1, 0),
    (2, 0, 1),
    (1, 2, 0),
    (1, 1, 1),
    (1, 0, 2),
    (0, 3, 0),
    (0, 2, 1),
    (0, 1, 2),
    (0, 0, 3),
];

/// A homogeneous plane cubic `F(x, y, z)` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlaneCubic {
    coeffs: [Rational; CUBIC_MONOMIALS],
}

impl PlaneCubic {
    pub fn new(coeffs: [Rational; CUBIC_MONOMIALS]) -> Result<Self, GeometryError> {
        if coeffs.iter().all(Rational::is_zero) {
            return Err(GeometryError::ZeroCubic);
        }
        Ok(PlaneCubic { coeffs })
    }

    /// Builds a cubic from `(coefficient, (i, j, k))` terms.
    pub fn from_int_terms(terms: &[(i64, (u32, u32, u32))]) -> Result<Self, GeometryError> {
        let mut coeffs: [Rational; CUBIC_MONOMIALS] = std::array::from_fn(|_| Rational::zero());
        for &(c, expo) in terms {
            let idx = CUBIC_EXPONENTS
                .iter()
                .position(|&e| e == expo)
                .expect("exponents must sum to 3");
            coeffs[idx] += rat(c);
        }
        Self::new(coeffs)
    }

    /// Coefficient of `z^3`; the involution formula needs it to vanish.
    pub fn z3_coefficient(&self) -> &Rational {
        &self.coeffs[CUBIC_MONOMIALS - 1]
    }

    pub fn eval(&self, p: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (c, &(i, j, k)) in self.coeffs.iter().zip(&CUBIC_EXPONENTS) {
            if c.is_zero() {
                continue;
            }
            acc += c * pow(&p[0], i) * pow(&p[1], j) * pow(&p[2], k);
        }
        acc
    }

    /// Evaluates the partial derivative `F_z`.
    pub fn eval_dz(&self, p: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (c, &(i, j, k)) in self.coeffs.iter().zip(&CUBIC_EXPONENTS) {
            if c.is_zero() || k == 0 {
                continue;
            }
            acc += c * rat(i64::from(k)) * pow(&p[0], i) * pow(&p[1], j) * pow(&p[2], k - 1);
        }
        acc
    }
}

fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Canonical primitive integer coordinates of a rational projective
/// point: cleared denominators, content one, first nonzero coordinate
/// positive.
pub fn reduce_point(p: &[Rational; 3]) -> Result<[BigInt; 3], GeometryError> {
    if p.iter().all(Rational::is_zero) {
        return Err(GeometryError::ZeroPoint);
    }
    let mut denom_lcm = BigInt::one();
    for c in p {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| c.numer() * (&denom_lcm / c.denom()))
        .collect();
    let mut content = BigInt::zero();
    for v in &ints {
        content = content.gcd(v);
    }
    let mut out: [BigInt; 3] = [
        &ints[0] / &content,
        &ints[1] / &content,
        &ints[2] / &content,
    ];
    let flip = out
        .iter()
        .find(|v| !v.is_zero())
        .is_some_and(Signed::is_negative);
    if flip {
        for v in &mut out {
            *v = -v.clone();
        }
    }
    Ok(out)
}

/// The birational involution of the plane attached to a cubic through
/// `b = (0:0:1)`:
///
/// `alpha((x:y:z)) = (x : y : z - 2 F(x,y,z) / F_z(x,y,z))`.
///
/// It fixes the cubic pointwise and preserves every line through `b`.
/// The caller is responsible for moving their cubic into these
/// coordinates first.
pub fn plane_involution(
    cubic: &PlaneCubic,
    p: &[Rational; 3],
) -> Result<[BigInt; 3], GeometryError> {
    if !cubic.z3_coefficient().is_zero() {
        return Err(GeometryError::BaseNotOnCubic);
    }
    if p.iter().all(Rational::is_zero) {
        return Err(GeometryError::ZeroPoint);
    }
    let fz = cubic.eval_dz(p);
    if fz.is_zero() {
        return Err(GeometryError::IndeterminacyPoint);
    }
    let value = cubic.eval(p);
    let new_z = &p[2] - rat(2) * value / fz;
    reduce_point(&[p[0].clone(), p[1].clone(), new_z])
}
