//! The rational cohomology ring of the blown-up plane.
//!
//! `H^2(B, Z)` carries the fixed basis `(l, e1, ..., e9)` with
//! intersection form `diag(1, -1, ..., -1)`.  A full mixed-degree class
//! is a [`CohClass`]: a rational multiple of `1`, a degree-two part, and
//! a rational multiple of the point class `pt`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Zero};

/// Exact rational scalar used everywhere in the crate.
///
/// `BigRational` keeps values in lowest terms with a positive
/// denominator, which is exactly the invariant the lattice code relies
/// on.  No floating point appears anywhere in the core.
pub type Rational = BigRational;

/// Shorthand for an integer as a [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `n/d`.
///
/// Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Number of basis vectors of `H^2(B, Z)`: `l, e1, ..., e9`.
pub const H2_RANK: usize = 10;

/// A degree-two class written over the basis `(l, e1, ..., e9)`.
///
/// Index 0 is the line class `l`, index `i` for `1 <= i <= 9` is the
/// exceptional class `e_i`.  The same type doubles as a divisor or
/// line-bundle class via the first Chern class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct H2Class {
    coeffs: [Rational; H2_RANK],
}

impl H2Class {
    pub fn zero() -> Self {
        H2Class {
            coeffs: std::array::from_fn(|_| Rational::zero()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The basis vector with index `i` (0 is `l`, `1..=9` are `e_i`).
    pub fn basis(i: usize) -> Self {
        assert!(i < H2_RANK, "basis index out of range");
        let mut v = Self::zero();
        v.coeffs[i] = Rational::one();
        v
    }

    /// The line class `l`.
    pub fn l() -> Self {
        Self::basis(0)
    }

    /// The exceptional class `e_i`, `1 <= i <= 9`.
    pub fn e(i: usize) -> Self {
        assert!((1..=9).contains(&i), "exceptional index out of range");
        Self::basis(i)
    }

    pub fn from_coeffs(coeffs: [Rational; H2_RANK]) -> Self {
        H2Class { coeffs }
    }

    /// Builds a class from integer coordinates over `(l, e1, ..., e9)`.
    pub fn from_ints(coeffs: [i64; H2_RANK]) -> Self {
        H2Class {
            coeffs: std::array::from_fn(|i| rat(coeffs[i])),
        }
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Rational; H2_RANK] {
        &self.coeffs
    }

    /// True iff every coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates, or `None` when some coordinate is fractional.
    pub fn to_ints(&self) -> Option<[BigInt; H2_RANK]> {
        if !self.is_integral() {
            return None;
        }
        Some(std::array::from_fn(|i| self.coeffs[i].to_integer()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        H2Class {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] * s),
        }
    }

    pub fn scale_int(&self, s: i64) -> Self {
        self.scale(&rat(s))
    }

    /// Intersection number with another class.
    pub fn dot(&self, other: &H2Class) -> Rational {
        intersect(self, other)
    }

    /// Self-intersection `D.D`.
    pub fn self_intersection(&self) -> Rational {
        intersect(self, self)
    }
}

impl Index<usize> for H2Class {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }
}

impl Add for &H2Class {
    type Output = H2Class;
    fn add(self, rhs: &H2Class) -> H2Class {
        H2Class {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] + &rhs.coeffs[i]),
        }
    }
}

impl Sub for &H2Class {
    type Output = H2Class;
    fn sub(self, rhs: &H2Class) -> H2Class {
        H2Class {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] - &rhs.coeffs[i]),
        }
    }
}

impl Neg for &H2Class {
    type Output = H2Class;
    fn neg(self) -> H2Class {
        H2Class {
            coeffs: std::array::from_fn(|i| -&self.coeffs[i]),
        }
    }
}

impl Add for H2Class {
    type Output = H2Class;
    fn add(self, rhs: H2Class) -> H2Class {
        &self + &rhs
    }
}

impl Sub for H2Class {
    type Output = H2Class;
    fn sub(self, rhs: H2Class) -> H2Class {
        &self - &rhs
    }
}

impl Neg for H2Class {
    type Output = H2Class;
    fn neg(self) -> H2Class {
        -&self
    }
}

impl AddAssign<&H2Class> for H2Class {
    fn add_assign(&mut self, rhs: &H2Class) {
        for i in 0..H2_RANK {
            self.coeffs[i] += &rhs.coeffs[i];
        }
    }
}

impl SubAssign<&H2Class> for H2Class {
    fn sub_assign(&mut self, rhs: &H2Class) {
        for i in 0..H2_RANK {
            self.coeffs[i] -= &rhs.coeffs[i];
        }
    }
}

impl Mul<&H2Class> for &Rational {
    type Output = H2Class;
    fn mul(self, rhs: &H2Class) -> H2Class {
        rhs.scale(self)
    }
}

impl fmt::Debug for H2Class {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "H2[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(fm, ", ")?;
            }
            write!(fm, "{}", c)?;
        }
        write!(fm, "]")
    }
}

impl fmt::Display for H2Class {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{}", crate::expr::format_class(&CohClass::from_div(self.clone())))
    }
}

/// Evaluates the intersection pairing `a.b`.
///
/// The Gram matrix of `(l, e1, ..., e9)` is `diag(1, -1, ..., -1)`, a
/// unimodular form of signature `(1, 9)`.
pub fn intersect(a: &H2Class, b: &H2Class) -> Rational {
    let mut acc = &a.coeffs[0] * &b.coeffs[0];
    for i in 1..H2_RANK {
        acc -= &a.coeffs[i] * &b.coeffs[i];
    }
    acc
}

/// A full mixed-degree cohomology class `rank . 1 + div + point . pt`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CohClass {
    pub rank: Rational,
    pub div: H2Class,
    pub point: Rational,
}

impl CohClass {
    pub fn zero() -> Self {
        CohClass {
            rank: Rational::zero(),
            div: H2Class::zero(),
            point: Rational::zero(),
        }
    }

    /// The unit `1` of `H^0`.
    pub fn one() -> Self {
        CohClass {
            rank: Rational::one(),
            div: H2Class::zero(),
            point: Rational::zero(),
        }
    }

    /// The point class `pt` of `H^4`.
    pub fn pt() -> Self {
        CohClass {
            rank: Rational::zero(),
            div: H2Class::zero(),
            point: Rational::one(),
        }
    }

    pub fn from_div(div: H2Class) -> Self {
        CohClass {
            rank: Rational::zero(),
            div,
            point: Rational::zero(),
        }
    }

    pub fn new(rank: Rational, div: H2Class, point: Rational) -> Self {
        CohClass { rank, div, point }
    }

    pub fn is_zero(&self) -> bool {
        self.rank.is_zero() && self.div.is_zero() && self.point.is_zero()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        CohClass {
            rank: &self.rank * s,
            div: self.div.scale(s),
            point: &self.point * s,
        }
    }
}

impl Add for &CohClass {
    type Output = CohClass;
    fn add(self, rhs: &CohClass) -> CohClass {
        CohClass {
            rank: &self.rank + &rhs.rank,
            div: &self.div + &rhs.div,
            point: &self.point + &rhs.point,
        }
    }
}

impl Sub for &CohClass {
    type Output = CohClass;
    fn sub(self, rhs: &CohClass) -> CohClass {
        CohClass {
            rank: &self.rank - &rhs.rank,
            div: &self.div - &rhs.div,
            point: &self.point - &rhs.point,
        }
    }
}

impl Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        CohClass {
            rank: -&self.rank,
            div: -&self.div,
            point: -&self.point,
        }
    }
}

impl Add for CohClass {
    type Output = CohClass;
    fn add(self, rhs: CohClass) -> CohClass {
        &self + &rhs
    }
}

impl Sub for CohClass {
    type Output = CohClass;
    fn sub(self, rhs: CohClass) -> CohClass {
        &self - &rhs
    }
}

impl Neg for CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        -&self
    }
}

impl fmt::Debug for CohClass {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "Coh({} ; {:?} ; {})", self.rank, self.div, self.point)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{}", crate::expr::format_class(self))
    }
}

/// The distinguished divisor classes of the fibration.
///
/// `f = 3l - e1 - ... - e9` is the fiber class (equal to `-K_B`), `e` is
/// the zero section `e9`, `zeta = e1` is the translation section, and
/// `n1, o1, n2, o2` are the components of the two `I2` fibers:
/// `n1 = e8 - e9`, `o1 = f - e8 + e9`, `n2 = l - e7 - e8 - e9`,
/// `o2 = 2l - e1 - e2 - e3 - e4 - e5 - e6`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum NamedClass {
    L,
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    E7,
    E8,
    E9,
    F,
    /// The zero section, an alias for `e9`.
    E,
    /// The translation section, an alias for `e1`.
    Zeta,
    N1,
    O1,
    N2,
    O2,
    /// The canonical class `K_B = -f`.
    Canonical,
}

/// Expands a named class over the basis `(l, e1, ..., e9)`.
pub fn named_class(n: NamedClass) -> H2Class {
    use NamedClass::*;
    match n {
        L => H2Class::l(),
        E1 => H2Class::e(1),
        E2 => H2Class::e(2),
        E3 => H2Class::e(3),
        E4 => H2Class::e(4),
        E5 => H2Class::e(5),
        E6 => H2Class::e(6),
        E7 => H2Class::e(7),
        E8 => H2Class::e(8),
        E9 => H2Class::e(9),
        F => H2Class::from_ints([3, -1, -1, -1, -1, -1, -1, -1, -1, -1]),
        E => H2Class::e(9),
        Zeta => H2Class::e(1),
        N1 => &H2Class::e(8) - &H2Class::e(9),
        O1 => &(&named_class(F) - &H2Class::e(8)) + &H2Class::e(9),
        N2 => H2Class::from_ints([1, 0, 0, 0, 0, 0, 0, -1, -1, -1]),
        O2 => H2Class::from_ints([2, -1, -1, -1, -1, -1, -1, 0, 0, 0]),
        Canonical => -&named_class(F),
    }
}

/// Chern character of the line bundle `O_B(D)`: `1 + D + (D.D/2) pt`.
pub fn ch_line_bundle(d: &H2Class) -> CohClass {
    let half = frac(1, 2);
    CohClass {
        rank: Rational::one(),
        div: d.clone(),
        point: d.self_intersection() * half,
    }
}

/// Chern character of `i_{C*} O_C(d)` for a smooth rational curve `C`.
///
/// The caller asserts smooth rationality; only `C.C` enters the
/// formula `C + (d - C.C/2) pt`.
pub fn ch_rational_curve_sheaf(c: &H2Class, d: i64) -> CohClass {
    let half = frac(1, 2);
    CohClass {
        rank: Rational::zero(),
        div: c.clone(),
        point: rat(d) - c.self_intersection() * half,
    }
}
