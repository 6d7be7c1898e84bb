//! The four pullback isometries of `H^2(B, Z)`.
//!
//! Each map is stored as an integer 10 x 10 matrix acting on column
//! vectors over the basis `(l, e1, ..., e9)` and extended by the
//! identity on `H^0` and `H^4` (pullback along an automorphism is
//! degree-preserving).  Composition is contravariant:
//! `compose(a, b)` applies `b` first, then `a`, so that
//! `compose(alpha, t_zeta) = tau` matches `tau = t_zeta . alpha` on
//! points.

use std::fmt;
use std::str::FromStr;

use num::BigInt;
use thiserror::Error;

use crate::cohomology::{CohClass, H2Class, Rational, H2_RANK};
use crate::linalg::{integer_kernel, IntMat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IsometryError {
    #[error("unknown map name `{0}` (expected neg, t_zeta, alpha or tau)")]
    UnknownName(String),
    #[error("map `{0}` is not an involution")]
    NotAnInvolution(String),
}

/// An integer pullback matrix on `H^2(B, Z)`.
#[derive(Clone, PartialEq, Eq)]
pub struct PullbackMap {
    name: String,
    /// Row-major; column `j` is the image of basis vector `j`.
    matrix: [[i64; H2_RANK]; H2_RANK],
}

/// The four built-in pullbacks.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BuiltinMap {
    /// Fiberwise inversion `(-1)*`.
    Neg,
    /// Translation by the section `zeta = e1`.
    TZeta,
    /// The base involution `alpha*` fixing the zero section.
    Alpha,
    /// The free involution `tau* = alpha* . t_zeta*`.
    Tau,
}

impl BuiltinMap {
    pub const ALL: [BuiltinMap; 4] = [
        BuiltinMap::Neg,
        BuiltinMap::TZeta,
        BuiltinMap::Alpha,
        BuiltinMap::Tau,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinMap::Neg => "neg",
            BuiltinMap::TZeta => "t_zeta",
            BuiltinMap::Alpha => "alpha",
            BuiltinMap::Tau => "tau",
        }
    }
}

impl FromStr for BuiltinMap {
    type Err = IsometryError;
    fn from_str(s: &str) -> Result<Self, IsometryError> {
        match s {
            "neg" | "-1" => Ok(BuiltinMap::Neg),
            "t_zeta" | "tzeta" => Ok(BuiltinMap::TZeta),
            "alpha" => Ok(BuiltinMap::Alpha),
            "tau" => Ok(BuiltinMap::Tau),
            other => Err(IsometryError::UnknownName(other.to_string())),
        }
    }
}

/// Integer vectors over `(l, e1, ..., e9)` used to transcribe the
/// column tables readably.
type Vec10 = [i64; H2_RANK];

fn vadd(a: Vec10, b: Vec10) -> Vec10 {
    std::array::from_fn(|i| a[i] + b[i])
}

fn vscale(k: i64, a: Vec10) -> Vec10 {
    std::array::from_fn(|i| k * a[i])
}

fn lv() -> Vec10 {
    let mut v = [0; H2_RANK];
    v[0] = 1;
    v
}

fn ev(i: usize) -> Vec10 {
    let mut v = [0; H2_RANK];
    v[i] = 1;
    v
}

fn fv() -> Vec10 {
    [3, -1, -1, -1, -1, -1, -1, -1, -1, -1]
}

/// Sums a list of scaled basis combinations.
fn comb(parts: &[(i64, Vec10)]) -> Vec10 {
    parts
        .iter()
        .fold([0; H2_RANK], |acc, &(k, v)| vadd(acc, vscale(k, v)))
}

impl PullbackMap {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &[[i64; H2_RANK]; H2_RANK] {
        &self.matrix
    }

    fn from_columns(name: &str, cols: [Vec10; H2_RANK]) -> Self {
        let mut matrix = [[0; H2_RANK]; H2_RANK];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..H2_RANK {
                matrix[i][j] = col[i];
            }
        }
        PullbackMap {
            name: name.to_string(),
            matrix,
        }
    }

    /// Image of a degree-two class under the pullback.
    pub fn apply_h2(&self, c: &H2Class) -> H2Class {
        let mut out: [Rational; H2_RANK] = std::array::from_fn(|_| Rational::from_integer(0.into()));
        for (j, coeff) in c.coeffs().iter().enumerate() {
            if coeff == &Rational::from_integer(0.into()) {
                continue;
            }
            for i in 0..H2_RANK {
                if self.matrix[i][j] != 0 {
                    out[i] += coeff * Rational::from_integer(BigInt::from(self.matrix[i][j]));
                }
            }
        }
        H2Class::from_coeffs(out)
    }

    /// True iff the map squares to the identity matrix.
    pub fn is_involution(&self) -> bool {
        compose(self, self).matrix == identity_matrix()
    }

    /// True iff `M^T G M = G` for the Gram matrix `G` of the basis.
    pub fn preserves_pairing(&self) -> bool {
        let sign = |i: usize| if i == 0 { 1i64 } else { -1 };
        for a in 0..H2_RANK {
            for b in 0..H2_RANK {
                let mut acc = 0i64;
                for i in 0..H2_RANK {
                    acc += sign(i) * self.matrix[i][a] * self.matrix[i][b];
                }
                let expect = if a == b { sign(a) } else { 0 };
                if acc != expect {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_int_mat(&self) -> IntMat {
        IntMat::from_fn(H2_RANK, H2_RANK, |i, j| BigInt::from(self.matrix[i][j]))
    }
}

impl fmt::Debug for PullbackMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PullbackMap {} [", self.name)?;
        for row in &self.matrix {
            writeln!(f, "  {:?}", row)?;
        }
        write!(f, "]")
    }
}

fn identity_matrix() -> [[i64; H2_RANK]; H2_RANK] {
    let mut m = [[0; H2_RANK]; H2_RANK];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

/// The identity pullback.
pub fn identity_map() -> PullbackMap {
    PullbackMap {
        name: "id".to_string(),
        matrix: identity_matrix(),
    }
}

/// Returns one of the four built-in pullbacks.
///
/// The columns are the images of `l, e1, ..., e9`, transcribed from the
/// action table of the four automorphisms.
pub fn builtin_map(which: BuiltinMap) -> PullbackMap {
    let l = lv();
    let e = ev;
    let f = fv();
    match which {
        // (-1)*:  l -> l + f - 2 e7 + e8 + e9,  e_i -> l - e_i - e7 (i <= 6),
        //         e7 -> f - e7 + e8 + e9,  e8 -> e8,  e9 -> e9.
        BuiltinMap::Neg => PullbackMap::from_columns(
            "neg",
            [
                comb(&[(1, l), (1, f), (-2, e(7)), (1, e(8)), (1, e(9))]),
                comb(&[(1, l), (-1, e(1)), (-1, e(7))]),
                comb(&[(1, l), (-1, e(2)), (-1, e(7))]),
                comb(&[(1, l), (-1, e(3)), (-1, e(7))]),
                comb(&[(1, l), (-1, e(4)), (-1, e(7))]),
                comb(&[(1, l), (-1, e(5)), (-1, e(7))]),
                comb(&[(1, l), (-1, e(6)), (-1, e(7))]),
                comb(&[(1, f), (-1, e(7)), (1, e(8)), (1, e(9))]),
                e(8),
                e(9),
            ],
        ),
        // t_zeta*:  l -> 2f + 2l - 3 e1 - e7 - e8 + 2 e9,  e1 -> e9,
        //           e_i -> f + e_i - e1 + e9 (2 <= i <= 6),
        //           e7 -> l - e1 - e8,  e8 -> f + l + e9 - e1 - e7 - e8,
        //           e9 -> l - e1 - e7.
        BuiltinMap::TZeta => PullbackMap::from_columns(
            "t_zeta",
            [
                comb(&[(2, f), (2, l), (-3, e(1)), (-1, e(7)), (-1, e(8)), (2, e(9))]),
                e(9),
                comb(&[(1, f), (1, e(2)), (-1, e(1)), (1, e(9))]),
                comb(&[(1, f), (1, e(3)), (-1, e(1)), (1, e(9))]),
                comb(&[(1, f), (1, e(4)), (-1, e(1)), (1, e(9))]),
                comb(&[(1, f), (1, e(5)), (-1, e(1)), (1, e(9))]),
                comb(&[(1, f), (1, e(6)), (-1, e(1)), (1, e(9))]),
                comb(&[(1, l), (-1, e(1)), (-1, e(8))]),
                comb(&[(1, f), (1, l), (1, e(9)), (-1, e(1)), (-1, e(7)), (-1, e(8))]),
                comb(&[(1, l), (-1, e(1)), (-1, e(7))]),
            ],
        ),
        // alpha*:  l -> 3l - (e1 + e2 + e3 + 2 e7 + e8),
        //          e_j -> l - e_j - e7 (j = 1, 2, 3),  e_i -> e_i (i = 4, 5, 6),
        //          e7 -> 2l - (e1 + e2 + e3 + e7 + e8),  e8 -> l - e7 - e8,
        //          e9 -> e9.
        BuiltinMap::Alpha => PullbackMap::from_columns(
            "alpha",
            [
                comb(&[(3, l), (-1, e(1)), (-1, e(2)), (-1, e(3)), (-2, e(7)), (-1, e(8))]),
                comb(&[(1, l), (-1, e(1)), (-1, e(7))]),
                comb(&[(1, l), (-1, e(2)), (-1, e(7))]),
                comb(&[(1, l), (-1, e(3)), (-1, e(7))]),
                e(4),
                e(5),
                e(6),
                comb(&[(2, l), (-1, e(1)), (-1, e(2)), (-1, e(3)), (-1, e(7)), (-1, e(8))]),
                comb(&[(1, l), (-1, e(7)), (-1, e(8))]),
                e(9),
            ],
        ),
        // tau*:  l -> 2f + 2(e1 + e9) - (e2 + e3) + e7,  e1 -> e9,
        //        e_j -> f - e_j + e1 + e9 (j = 2, 3),
        //        e_i -> f - l + e_i + e1 + e7 + e9 (i = 4, 5, 6),
        //        e7 -> l - e2 - e3,  e8 -> f - l + e1 + e7 + e8 + e9,
        //        e9 -> e1.
        BuiltinMap::Tau => PullbackMap::from_columns(
            "tau",
            [
                comb(&[(2, f), (2, e(1)), (2, e(9)), (-1, e(2)), (-1, e(3)), (1, e(7))]),
                e(9),
                comb(&[(1, f), (-1, e(2)), (1, e(1)), (1, e(9))]),
                comb(&[(1, f), (-1, e(3)), (1, e(1)), (1, e(9))]),
                comb(&[(1, f), (-1, l), (1, e(4)), (1, e(1)), (1, e(7)), (1, e(9))]),
                comb(&[(1, f), (-1, l), (1, e(5)), (1, e(1)), (1, e(7)), (1, e(9))]),
                comb(&[(1, f), (-1, l), (1, e(6)), (1, e(1)), (1, e(7)), (1, e(9))]),
                comb(&[(1, l), (-1, e(2)), (-1, e(3))]),
                comb(&[(1, f), (-1, l), (1, e(1)), (1, e(7)), (1, e(8)), (1, e(9))]),
                e(1),
            ],
        ),
    }
}

/// Looks a built-in map up by name.
pub fn builtin_map_by_name(name: &str) -> Result<PullbackMap, IsometryError> {
    Ok(builtin_map(name.parse()?))
}

/// Applies a pullback to a full cohomology class.
///
/// The `H^0` and `H^4` parts are fixed; only the degree-two part moves.
pub fn apply_map(m: &PullbackMap, c: &CohClass) -> CohClass {
    CohClass {
        rank: c.rank.clone(),
        div: m.apply_h2(&c.div),
        point: c.point.clone(),
    }
}

/// Matrix product `m1 . m2`, i.e. apply `m2` first.
pub fn compose(m1: &PullbackMap, m2: &PullbackMap) -> PullbackMap {
    let mut matrix = [[0i64; H2_RANK]; H2_RANK];
    for (i, row) in matrix.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = (0..H2_RANK)
                .map(|k| m1.matrix[i][k] * m2.matrix[k][j])
                .sum();
        }
    }
    PullbackMap {
        name: format!("{}.{}", m1.name, m2.name),
        matrix,
    }
}

/// Integral basis and rank of the eigenlattice `ker(m -+ 1)`.
///
/// Requires `m` to be an involution; `sign` selects the invariant
/// (`+1`) or anti-invariant (`-1`) sublattice.
pub fn eigen_lattice(
    m: &PullbackMap,
    sign: i64,
) -> Result<(Vec<H2Class>, usize), IsometryError> {
    assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
    if !m.is_involution() {
        return Err(IsometryError::NotAnInvolution(m.name.clone()));
    }
    let a = IntMat::from_fn(H2_RANK, H2_RANK, |i, j| {
        let diag = if i == j { sign } else { 0 };
        BigInt::from(m.matrix[i][j] - diag)
    });
    let kernel = integer_kernel(&a);
    let basis: Vec<H2Class> = (0..kernel.ncols())
        .map(|j| {
            let col = kernel.column(j);
            H2Class::from_coeffs(std::array::from_fn(|i| {
                Rational::from_integer(col[i].clone())
            }))
        })
        .collect();
    let rank = basis.len();
    Ok((basis, rank))
}
