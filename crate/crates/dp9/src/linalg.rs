//! Exact integer matrices: Smith and Hermite normal forms, kernels,
//! determinants and lattice membership.
//!
//! Everything runs over `BigInt`, so there is no overflow to reason
//! about.  The matrices in this crate are tiny (at most 10 x 10), which
//! keeps the classical elimination algorithms entirely adequate.

use num::{BigInt, Integer, One, Signed, Zero};

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    nrows: usize,
    ncols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        IntMat {
            nrows,
            ncols,
            data: vec![BigInt::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zero(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols));
        Self::from_fn(nrows, ncols, |i, j| BigInt::from(rows[i][j]))
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<BigInt>]) -> Self {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|c| c.len() == nrows));
        Self::from_fn(nrows, ncols, |i, j| cols[j][i].clone())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.nrows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.ncols, rhs.nrows);
        IntMat::from_fn(self.nrows, rhs.ncols, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..self.ncols {
                acc += &self[(i, k)] * &rhs[(k, j)];
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.ncols, v.len());
        (0..self.nrows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for k in 0..self.ncols {
                    acc += &self[(i, k)] * &v[k];
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.nrows {
            self.data.swap(i * self.ncols + a, i * self.ncols + b);
        }
    }

    /// row_a += k * row_b
    fn add_row(&mut self, a: usize, b: usize, k: &BigInt) {
        for j in 0..self.ncols {
            let t = &self[(b, j)] * k;
            self[(a, j)] += t;
        }
    }

    /// col_a += k * col_b
    fn add_col(&mut self, a: usize, b: usize, k: &BigInt) {
        for i in 0..self.nrows {
            let t = &self[(i, b)] * k;
            self[(i, a)] += t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.ncols {
            let t = -self[(a, j)].clone();
            self[(a, j)] = t;
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.nrows {
            let t = -self[(i, a)].clone();
            self[(i, a)] = t;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.ncols + j]
    }
}

/// Result of the Smith normal form: `p * a * q = d` with `p`, `q`
/// unimodular and `d` diagonal with each entry dividing the next.
pub struct SmithNF {
    pub d: IntMat,
    pub p: IntMat,
    pub q: IntMat,
}

impl SmithNF {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n)
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Computes the Smith normal form of `a` by integer row/column reduction.
pub fn smith_normal_form(a: &IntMat) -> SmithNF {
    let mut d = a.clone();
    let mut p = IntMat::identity(a.nrows());
    let mut q = IntMat::identity(a.ncols());
    let n = a.nrows().min(a.ncols());

    let mut t = 0;
    while t < n {
        // Find a pivot in the remaining submatrix.
        let mut pivot = None;
        'search: for i in t..d.nrows() {
            for j in t..d.ncols() {
                if !d[(i, j)].is_zero() {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        p.swap_rows(t, pi);
        d.swap_cols(t, pj);
        q.swap_cols(t, pj);

        // Reduce the pivot row and column until the pivot is alone.
        loop {
            let mut dirty = false;
            for i in (t + 1)..d.nrows() {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let k = -(&d[(i, t)] / &d[(t, t)]);
                if !k.is_zero() {
                    d.add_row(i, t, &k);
                    p.add_row(i, t, &k);
                }
                if !d[(i, t)].is_zero() {
                    // Remainder left over: swap it up to shrink the pivot.
                    d.swap_rows(t, i);
                    p.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in (t + 1)..d.ncols() {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let k = -(&d[(t, j)] / &d[(t, t)]);
                if !k.is_zero() {
                    d.add_col(j, t, &k);
                    q.add_col(j, t, &k);
                }
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    q.swap_cols(t, j);
                    dirty = true;
                }
            }
            if !dirty {
                let row_clear = ((t + 1)..d.nrows()).all(|i| d[(i, t)].is_zero());
                let col_clear = ((t + 1)..d.ncols()).all(|j| d[(t, j)].is_zero());
                if row_clear && col_clear {
                    break;
                }
            }
        }
        t += 1;
    }

    // Positive diagonal.
    for i in 0..n {
        if d[(i, i)].is_negative() {
            d.negate_row(i);
            p.negate_row(i);
        }
    }

    // Enforce the divisibility chain d_i | d_{i+1}.
    loop {
        let mut fixed = true;
        for i in 0..n.saturating_sub(1) {
            let (a, b) = (d[(i, i)].clone(), d[(i + 1, i + 1)].clone());
            if a.is_zero() || b.is_zero() || (&b % &a).is_zero() {
                continue;
            }
            fixed = false;
            // Fold d_{i+1} into position (i, i+1) and re-eliminate via gcd.
            d.add_col(i, i + 1, &BigInt::one());
            q.add_col(i, i + 1, &BigInt::one());
            // 2x2 gcd elimination on rows/cols i, i+1.
            loop {
                if d[(i + 1, i)].is_zero() && d[(i, i + 1)].is_zero() {
                    break;
                }
                if !d[(i + 1, i)].is_zero() {
                    let k = -(&d[(i + 1, i)] / &d[(i, i)]);
                    if !k.is_zero() {
                        d.add_row(i + 1, i, &k);
                        p.add_row(i + 1, i, &k);
                    }
                    if !d[(i + 1, i)].is_zero() {
                        d.swap_rows(i, i + 1);
                        p.swap_rows(i, i + 1);
                        continue;
                    }
                }
                if !d[(i, i + 1)].is_zero() {
                    let k = -(&d[(i, i + 1)] / &d[(i, i)]);
                    if !k.is_zero() {
                        d.add_col(i + 1, i, &k);
                        q.add_col(i + 1, i, &k);
                    }
                    if !d[(i, i + 1)].is_zero() {
                        d.swap_cols(i, i + 1);
                        q.swap_cols(i, i + 1);
                        continue;
                    }
                }
            }
            if d[(i, i)].is_negative() {
                d.negate_row(i);
                p.negate_row(i);
            }
            if d[(i + 1, i + 1)].is_negative() {
                d.negate_row(i + 1);
                p.negate_row(i + 1);
            }
        }
        if fixed {
            break;
        }
    }

    SmithNF { d, p, q }
}

/// Column-style Hermite form: returns `(h, u)` with `a * u = h`, `u`
/// unimodular and `h` in column echelon form over the integers.
pub fn hermite_normal_form(a: &IntMat) -> (IntMat, IntMat) {
    let mut h = a.clone();
    let mut u = IntMat::identity(a.ncols());
    let mut c = 0;
    for r in 0..h.nrows() {
        if c >= h.ncols() {
            break;
        }
        // gcd-reduce row r across columns c.. to a single entry at (r, c).
        loop {
            let mut best: Option<usize> = None;
            for j in c..h.ncols() {
                if h[(r, j)].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(j),
                    Some(b) if h[(r, j)].abs() < h[(r, b)].abs() => Some(j),
                    other => other,
                };
            }
            let Some(b) = best else { break };
            h.swap_cols(c, b);
            u.swap_cols(c, b);
            let mut done = true;
            for j in (c + 1)..h.ncols() {
                if h[(r, j)].is_zero() {
                    continue;
                }
                let k = -(&h[(r, j)] / &h[(r, c)]);
                h.add_col(j, c, &k);
                u.add_col(j, c, &k);
                if !h[(r, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !h[(r, c)].is_zero() {
            if h[(r, c)].is_negative() {
                h.negate_col(c);
                u.negate_col(c);
            }
            c += 1;
        }
    }
    (h, u)
}

/// Integral basis of `ker(a)` (as matrix columns).
///
/// The kernel of an integer matrix is a saturated sublattice, so the
/// returned columns generate it over `Z`, not merely over `Q`.
pub fn integer_kernel(a: &IntMat) -> IntMat {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let cols: Vec<Vec<BigInt>> = (r..a.ncols()).map(|j| snf.q.column(j)).collect();
    IntMat::from_columns(&cols)
}

/// Decides whether `b` lies in the column lattice of `a`, returning the
/// integer coordinates when it does.
pub fn solve_in_column_lattice(a: &IntMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.nrows(), b.len());
    let (h, u) = hermite_normal_form(a);
    solve_in_hermite(&h, &u, b)
}

/// Same as [`solve_in_column_lattice`] but reusing a precomputed
/// Hermite pair `(h, u)`.
pub fn solve_in_hermite(h: &IntMat, u: &IntMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rem: Vec<BigInt> = b.to_vec();
    let mut y = vec![BigInt::zero(); h.ncols()];
    let mut c = 0;
    for r in 0..h.nrows() {
        if c < h.ncols() && !h[(r, c)].is_zero() {
            let (q, s) = rem[r].div_rem(&h[(r, c)]);
            if !s.is_zero() {
                return None;
            }
            for i in 0..h.nrows() {
                let t = &h[(i, c)] * &q;
                rem[i] -= t;
            }
            y[c] = q;
            c += 1;
        } else if !rem[r].is_zero() {
            return None;
        }
    }
    if rem.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(u.mul_vec(&y))
}

/// Absolute value of the determinant, by fraction-free (Bareiss)
/// elimination.
pub fn abs_det(a: &IntMat) -> BigInt {
    assert_eq!(a.nrows(), a.ncols());
    let n = a.nrows();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut denom = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = ((k + 1)..n).find(|&i| !m[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(k, p);
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let t = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &denom;
                m[(i, j)] = t;
            }
            m[(i, k)] = BigInt::zero();
        }
        denom = m[(k, k)].clone();
    }
    m[(n - 1, n - 1)].abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_small() {
        let a = IntMat::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.p.mul(&a).mul(&snf.q), snf.d);
        assert_eq!(snf.invariant_factors(), big(&[2, 2, 156]));
    }

    #[test]
    fn snf_transforms_are_unimodular() {
        let a = IntMat::from_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let snf = smith_normal_form(&a);
        assert_eq!(abs_det(&snf.p), BigInt::one());
        assert_eq!(abs_det(&snf.q), BigInt::one());
        assert_eq!(snf.invariant_factors(), big(&[1, 3]));
        assert_eq!(snf.rank(), 2);
    }

    #[test]
    fn snf_divisibility_chain() {
        let a = IntMat::from_rows(&[vec![6, 0], vec![0, 4]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.invariant_factors(), big(&[2, 12]));
        assert_eq!(snf.p.mul(&a).mul(&snf.q), snf.d);
    }

    #[test]
    fn hermite_solves_membership() {
        let a = IntMat::from_rows(&[vec![2, 1], vec![0, 2]]);
        // Lattice spanned by (2,0) and (1,2).
        let x = solve_in_column_lattice(&a, &big(&[3, 2])).expect("member");
        assert_eq!(a.mul_vec(&x), big(&[3, 2]));
        assert!(solve_in_column_lattice(&a, &big(&[1, 0])).is_none());
        assert!(solve_in_column_lattice(&a, &big(&[0, 1])).is_none());
    }

    #[test]
    fn hermite_factorization_holds() {
        let a = IntMat::from_rows(&[vec![3, 6, 2], vec![0, 0, 5], vec![1, 2, 0]]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(a.mul(&u), h);
        assert_eq!(abs_det(&u), BigInt::one());
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let a = IntMat::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = integer_kernel(&a);
        assert_eq!(k.ncols(), 2);
        for j in 0..k.ncols() {
            assert!(a.mul_vec(&k.column(j)).iter().all(|x| x.is_zero()));
        }
        // (1, 1, -1) lies in the kernel and must be an integral combination.
        let v = big(&[1, 1, -1]);
        assert!(solve_in_column_lattice(&k, &v).is_some());
    }

    #[test]
    fn determinants() {
        let a = IntMat::from_rows(&[vec![2, 3], vec![1, 4]]);
        assert_eq!(abs_det(&a), BigInt::from(5));
        let b = IntMat::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 7]]);
        assert_eq!(abs_det(&b), BigInt::from(7));
        let c = IntMat::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(abs_det(&c), BigInt::zero());
    }
}
