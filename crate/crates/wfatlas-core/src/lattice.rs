//! Exact integer and rational linear algebra.
//!
//! Everything in the kernel runs over arbitrary-precision integers
//! ([`Int`]) and rationals ([`Rat`]); there is no floating point anywhere.
//! Rational linear programming is done by Fourier-Motzkin elimination,
//! which is exact and more than fast enough at the problem sizes that
//! occur here (at most ~20 generators in dimension <= 6).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// A lattice vector with arbitrary-precision integer entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(pub Vec<Int>);

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl IntVector {
    pub fn zero(dim: usize) -> Self {
        IntVector(vec![Int::zero(); dim])
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&e| Int::from(e)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector) -> Int {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(Int::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        IntVector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        IntVector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &Int) -> IntVector {
        IntVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn sum<'a>(dim: usize, vectors: impl IntoIterator<Item = &'a IntVector>) -> IntVector {
        vectors
            .into_iter()
            .fold(IntVector::zero(dim), |acc, v| acc.add(v))
    }
}

/// Divides a nonzero vector by the gcd of its entries, preserving direction.
pub fn primitive_part(v: &IntVector) -> Result<IntVector> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut g = Int::zero();
    for e in &v.0 {
        g = g.gcd(e);
    }
    Ok(IntVector(v.0.iter().map(|e| e / &g).collect()))
}

/// Tests whether `v = c * w` for some rational `c > 0`.
pub fn positive_multiple(v: &IntVector, w: &IntVector) -> bool {
    if v.is_zero() || w.is_zero() {
        return v.is_zero() && w.is_zero();
    }
    // c = v_i / w_i at the first index where w_i != 0; then check v = c w.
    let idx = match w.0.iter().position(|e| !e.is_zero()) {
        Some(i) => i,
        None => return false,
    };
    if v.0[idx].is_zero() || v.0[idx].sign() != w.0[idx].sign() {
        return false;
    }
    // v * w_idx == w * v_idx, entrywise.
    v.0.iter()
        .zip(w.0.iter())
        .all(|(a, b)| a * &w.0[idx] == b * &v.0[idx])
}

/// A dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix::new(rows, cols, vec![Int::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Int::one();
        }
        m
    }

    pub fn from_rows(rows: &[IntVector]) -> Self {
        let ncols = rows.first().map_or(0, IntVector::len);
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols);
            data.extend(r.0.iter().cloned());
        }
        IntMatrix::new(rows.len(), ncols, data)
    }

    pub fn from_cols(cols: &[IntVector]) -> Self {
        IntMatrix::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Int {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Int {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> IntVector {
        IntVector(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn col(&self, c: usize) -> IntVector {
        IntVector((0..self.rows).map(|r| self.at(r, c).clone()).collect())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += self.at(r, k) * other.at(k, c);
                }
                *out.at_mut(r, c) = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &IntVector) -> Result<IntVector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(IntVector(
            (0..self.rows).map(|r| self.row(r).dot(v)).collect(),
        ))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Int> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                match (k + 1..n).find(|&r| !m.at(r, k).is_zero()) {
                    Some(r) => {
                        for c in 0..n {
                            let tmp = m.at(k, c).clone();
                            *m.at_mut(k, c) = m.at(r, c).clone();
                            *m.at_mut(r, c) = tmp;
                        }
                        sign = -sign;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let val = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / &prev;
                    *m.at_mut(i, j) = val;
                }
                *m.at_mut(i, k) = Int::zero();
            }
            prev = m.at(k, k).clone();
        }
        let d = m.at(n - 1, n - 1).clone();
        Ok(if sign < 0 { -d } else { d })
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Int>> = (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect();
        integer_row_rank(&mut m)
    }

    /// Exact inverse over the rationals; `None` when singular.
    pub fn rational_inverse(&self) -> Option<Vec<Vec<Rat>>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| Rat::from(self.at(r, c).clone()))
                    .collect()
            })
            .collect();
        let mut inv: Vec<Vec<Rat>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        if r == c {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for k in 0..n {
            let pivot = (k..n).find(|&r| !a[r][k].is_zero())?;
            a.swap(k, pivot);
            inv.swap(k, pivot);
            let p = a[k][k].clone();
            for c in 0..n {
                a[k][c] /= &p;
                inv[k][c] /= &p;
            }
            for r in 0..n {
                if r != k && !a[r][k].is_zero() {
                    let f = a[r][k].clone();
                    for c in 0..n {
                        let av = &a[k][c] * &f;
                        a[r][c] -= av;
                        let iv = &inv[k][c] * &f;
                        inv[r][c] -= iv;
                    }
                }
            }
        }
        Some(inv)
    }

    /// Inverse of a matrix with determinant +-1; entries stay integral.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        if !self.is_unimodular() {
            return None;
        }
        let inv = self.rational_inverse()?;
        let n = self.rows;
        let mut out = IntMatrix::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                debug_assert!(inv[r][c].is_integer());
                *out.at_mut(r, c) = inv[r][c].to_integer();
            }
        }
        Some(out)
    }
}

fn integer_row_rank(m: &mut Vec<Vec<Int>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = Int::one();
    let mut pivot_row = 0;
    for col in 0..cols {
        let found = (pivot_row..rows).find(|&r| !m[r][col].is_zero());
        let r0 = match found {
            Some(r) => r,
            None => continue,
        };
        m.swap(pivot_row, r0);
        for r in pivot_row + 1..rows {
            for c in col + 1..cols {
                m[r][c] = (&m[r][c] * &m[pivot_row][col] - &m[r][col] * &m[pivot_row][c]) / &prev;
            }
            m[r][col] = Int::zero();
        }
        prev = m[pivot_row][col].clone();
        pivot_row += 1;
        rank += 1;
        if pivot_row == rows {
            break;
        }
    }
    rank
}

/// Rank of the set of vectors viewed as matrix rows.
pub fn rank_of_vectors(vectors: &[IntVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    IntMatrix::from_rows(vectors).rank()
}

/// Solves `sum_i c_i basis_i = v` exactly.
///
/// The basis vectors must be linearly independent; fewer than `dim` vectors
/// are accepted, in which case `v` must lie in their span.
pub fn solve_in_basis(basis: &[IntVector], v: &IntVector) -> Result<Vec<Rat>> {
    let dim = v.len();
    let k = basis.len();
    for b in basis {
        if b.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: b.len(),
            });
        }
    }
    // Augmented system over Q: columns are the basis vectors.
    let mut a: Vec<Vec<Rat>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Rat> = (0..k)
                .map(|c| Rat::from(basis[c].0[r].clone()))
                .collect();
            row.push(Rat::from(v.0[r].clone()));
            row
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; k];
    let mut row = 0;
    for col in 0..k {
        let piv = match (row..dim).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Err(Error::SingularBasis),
        };
        a.swap(row, piv);
        let p = a[row][col].clone();
        for c in col..=k {
            a[row][c] /= &p;
        }
        for r in 0..dim {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=k {
                    let val = &a[row][c] * &f;
                    a[r][c] -= val;
                }
            }
        }
        pivot_of_col[col] = row;
        row += 1;
    }
    // Remaining rows must be consistent.
    for r in row..dim {
        if !a[r][k].is_zero() {
            return Err(Error::NotInSpan);
        }
    }
    Ok((0..k).map(|c| a[pivot_of_col[c]][k].clone()).collect())
}

/// Finds integral unimodular `X` with `X * A = B`, if one exists.
pub fn unimodular_solve(a: &IntMatrix, b: &IntMatrix) -> Result<Option<IntMatrix>> {
    if a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: b.rows(),
        });
    }
    let inv = match a.rational_inverse() {
        Some(inv) => inv,
        None => return Ok(None),
    };
    let n = a.rows();
    // X = B * A^{-1}
    let mut x = IntMatrix::zero(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut acc = Rat::zero();
            for k in 0..n {
                acc += Rat::from(b.at(r, k).clone()) * &inv[k][c];
            }
            if !acc.is_integer() {
                return Ok(None);
            }
            *x.at_mut(r, c) = acc.to_integer();
        }
    }
    if !x.is_unimodular() {
        return Ok(None);
    }
    Ok(Some(x))
}

/// One inequality `coeffs . x >= rhs` of a rational system.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Inequality {
    pub coeffs: Vec<Int>,
    pub rhs: Int,
}

impl Inequality {
    pub fn new(coeffs: Vec<Int>, rhs: Int) -> Self {
        Inequality { coeffs, rhs }
    }

    fn normalize(mut self) -> Self {
        let mut g = self.rhs.clone();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if g > Int::one() {
            for c in &mut self.coeffs {
                *c = &*c / &g;
            }
            self.rhs = &self.rhs / &g;
        }
        self
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Result of projecting a system onto one coordinate.
#[derive(Clone, Debug, PartialEq)]
pub enum CoordinateBounds {
    Infeasible,
    Bounds(Option<Rat>, Option<Rat>),
}

const FM_ROW_CAP: usize = 200_000;

fn fm_eliminate(rows: Vec<Inequality>, var: usize) -> Option<Vec<Inequality>> {
    let mut keep = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for row in rows {
        match row.coeffs[var].sign() {
            num_bigint::Sign::NoSign => keep.push(row),
            num_bigint::Sign::Plus => pos.push(row),
            num_bigint::Sign::Minus => neg.push(row),
        }
    }
    let mut seen: std::collections::HashSet<Inequality> = keep.iter().cloned().collect();
    for p in &pos {
        for n in &neg {
            let cp = &p.coeffs[var];
            let cn = &n.coeffs[var]; // negative
            let mp = -cn; // positive multiplier for p
            let mn = cp; // positive multiplier for n
            let coeffs: Vec<Int> = p
                .coeffs
                .iter()
                .zip(n.coeffs.iter())
                .map(|(a, b)| a * &mp + b * mn)
                .collect();
            let rhs = &p.rhs * &mp + &n.rhs * mn;
            let row = Inequality::new(coeffs, rhs).normalize();
            if row.is_constant() && row.rhs <= Int::zero() {
                continue;
            }
            if seen.insert(row.clone()) {
                keep.push(row);
            }
            if keep.len() > FM_ROW_CAP {
                return None;
            }
        }
    }
    Some(keep)
}

fn fm_check_constants(rows: &[Inequality]) -> bool {
    rows.iter()
        .filter(|r| r.is_constant())
        .all(|r| r.rhs <= Int::zero())
}

/// Decides feasibility of `rows` (each `coeffs . x >= rhs`) exactly.
pub fn fm_feasible(rows: &[Inequality], vars: usize) -> bool {
    let mut rows: Vec<Inequality> = rows.iter().cloned().map(Inequality::normalize).collect();
    if !fm_check_constants(&rows) {
        return false;
    }
    for var in 0..vars {
        rows = match fm_eliminate(rows, var) {
            Some(r) => r,
            None => panic!("Fourier-Motzkin row cap exceeded"),
        };
        if !fm_check_constants(&rows) {
            return false;
        }
    }
    true
}

/// Exact bounds of the `keep`-th coordinate over the solution set.
pub fn fm_coordinate_bounds(rows: &[Inequality], vars: usize, keep: usize) -> CoordinateBounds {
    let mut rows: Vec<Inequality> = rows.iter().cloned().map(Inequality::normalize).collect();
    if !fm_check_constants(&rows) {
        return CoordinateBounds::Infeasible;
    }
    for var in 0..vars {
        if var == keep {
            continue;
        }
        rows = match fm_eliminate(rows, var) {
            Some(r) => r,
            None => panic!("Fourier-Motzkin row cap exceeded"),
        };
        if !fm_check_constants(&rows) {
            return CoordinateBounds::Infeasible;
        }
    }
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for row in &rows {
        let c = &row.coeffs[keep];
        if c.is_zero() {
            continue;
        }
        let bound = Rat::new(row.rhs.clone(), c.clone());
        if c.is_positive() {
            // x >= rhs / c
            lo = Some(match lo {
                Some(old) => old.max(bound),
                None => bound,
            });
        } else {
            // x <= rhs / c  (division by a negative flips the inequality)
            hi = Some(match hi {
                Some(old) => old.min(bound),
                None => bound,
            });
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return CoordinateBounds::Infeasible;
        }
    }
    CoordinateBounds::Bounds(lo, hi)
}

/// Exact membership of `v` in the rational cone spanned by `generators`.
pub fn in_rational_cone(generators: &[IntVector], v: &IntVector) -> bool {
    if v.is_zero() {
        return true;
    }
    if generators.is_empty() {
        return false;
    }
    let dim = v.len();
    let k = generators.len();
    let mut rows = Vec::with_capacity(2 * dim + k);
    // lambda_i >= 0
    for i in 0..k {
        let mut coeffs = vec![Int::zero(); k];
        coeffs[i] = Int::one();
        rows.push(Inequality::new(coeffs, Int::zero()));
    }
    // sum_i lambda_i g_i = v, as two inequalities per coordinate
    for j in 0..dim {
        let coeffs: Vec<Int> = generators.iter().map(|g| g.0[j].clone()).collect();
        rows.push(Inequality::new(coeffs.clone(), v.0[j].clone()));
        rows.push(Inequality::new(
            coeffs.iter().map(|c| -c).collect(),
            -&v.0[j],
        ));
    }
    fm_feasible(&rows, k)
}

/// Primitive integer basis of `{ w : sum_i w_i col_i = 0 }`.
pub fn kernel_of_columns(cols: &[IntVector], dim: usize) -> Vec<IntVector> {
    let n = cols.len();
    if n == 0 {
        return Vec::new();
    }
    // Reduced row echelon form of the dim x n matrix whose columns are `cols`.
    let mut a: Vec<Vec<Rat>> = (0..dim)
        .map(|r| (0..n).map(|c| Rat::from(cols[c].0[r].clone())).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let piv = match (row..dim).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        a.swap(row, piv);
        let p = a[row][col].clone();
        for c in col..n {
            a[row][c] /= &p;
        }
        for r in 0..dim {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let val = &a[row][c] * &f;
                    a[r][c] -= val;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == dim {
            break;
        }
    }
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut w = vec![Rat::zero(); n];
        w[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            w[pc] = -a[r][free].clone();
        }
        // Clear denominators and make primitive.
        let mut denom = Int::one();
        for e in &w {
            denom = denom.lcm(e.denom());
        }
        let ints = IntVector(w.iter().map(|e| (e * &denom).to_integer()).collect());
        basis.push(primitive_part(&ints).expect("kernel vector is nonzero"));
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(entries: &[i64]) -> IntVector {
        IntVector::from_i64(entries)
    }

    #[test]
    fn primitive_part_examples() {
        assert_eq!(primitive_part(&iv(&[2, 4, 6])).unwrap(), iv(&[1, 2, 3]));
        assert_eq!(primitive_part(&iv(&[1, 0])).unwrap(), iv(&[1, 0]));
        assert_eq!(primitive_part(&iv(&[-3, 6])).unwrap(), iv(&[-1, 2]));
        assert_eq!(primitive_part(&iv(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn solve_in_basis_examples() {
        let e1 = iv(&[1, 0]);
        let e2 = iv(&[0, 1]);
        assert_eq!(
            solve_in_basis(&[e1.clone(), e2.clone()], &iv(&[3, -1])).unwrap(),
            vec![rat(3, 1), rat(-1, 1)]
        );
        assert_eq!(
            solve_in_basis(&[iv(&[1, 0]), iv(&[1, 1])], &iv(&[2, 1])).unwrap(),
            vec![rat(1, 1), rat(1, 1)]
        );
        // Example 2.3: x4 = -e1 - e2.
        assert_eq!(
            solve_in_basis(&[e1, e2], &iv(&[-1, -1])).unwrap(),
            vec![rat(-1, 1), rat(-1, 1)]
        );
        assert_eq!(
            solve_in_basis(&[iv(&[1, 1]), iv(&[2, 2])], &iv(&[1, 0])),
            Err(Error::SingularBasis)
        );
    }

    #[test]
    fn unimodular_solve_examples() {
        let id = IntMatrix::identity(2);
        assert_eq!(unimodular_solve(&id, &id).unwrap(), Some(id.clone()));
        let perm = IntMatrix::from_rows(&[iv(&[0, 1]), iv(&[1, 0])]);
        assert_eq!(unimodular_solve(&id, &perm).unwrap(), Some(perm.clone()));
        let diag = IntMatrix::from_rows(&[iv(&[2, 0]), iv(&[0, 1])]);
        assert_eq!(unimodular_solve(&diag, &id).unwrap(), None);
    }

    #[test]
    fn cone_membership_examples() {
        let quad = [iv(&[1, 0]), iv(&[0, 1])];
        assert!(in_rational_cone(&quad, &iv(&[2, 3])));
        assert!(!in_rational_cone(&quad, &iv(&[-1, 0])));
        // (1,0) = 1/2 (1,1) + 1/2 (1,-1)
        assert!(in_rational_cone(&[iv(&[1, 1]), iv(&[1, -1])], &iv(&[1, 0])));
        assert!(in_rational_cone(&[], &iv(&[0, 0])));
        assert!(!in_rational_cone(&[], &iv(&[1, 0])));
    }

    #[test]
    fn kernel_of_wps_rays() {
        // P(1,1,1,2) rays after blowing down kleinschmidt(3,{2}).
        let rays = [
            iv(&[-1, 0, 0]),
            iv(&[0, 1, 0]),
            iv(&[0, 0, 1]),
            iv(&[2, -1, -1]),
        ];
        let kernel = kernel_of_columns(&rays, 3);
        assert_eq!(kernel.len(), 1);
        let mut w = kernel[0].clone();
        if w.0[0].is_negative() {
            w = w.neg();
        }
        assert_eq!(w, iv(&[2, 1, 1, 1]));
    }

    #[test]
    fn coordinate_bounds_triangle() {
        // x >= 0, y >= 0, x + y <= 2
        let rows = vec![
            Inequality::new(vec![int(1), int(0)], int(0)),
            Inequality::new(vec![int(0), int(1)], int(0)),
            Inequality::new(vec![int(-1), int(-1)], int(-2)),
        ];
        match fm_coordinate_bounds(&rows, 2, 0) {
            CoordinateBounds::Bounds(Some(lo), Some(hi)) => {
                assert_eq!(lo, rat(0, 1));
                assert_eq!(hi, rat(2, 1));
            }
            other => panic!("unexpected bounds {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn primitive_part_is_idempotent(entries in proptest::collection::vec(-50i64..50, 1..5)) {
            let v = iv(&entries);
            if !v.is_zero() {
                let p = primitive_part(&v).unwrap();
                prop_assert_eq!(primitive_part(&p).unwrap(), p.clone());
                // Positively proportional to the input.
                prop_assert!(positive_multiple(&v, &p));
            }
        }

        #[test]
        fn solve_in_basis_round_trips(
            m00 in -5i64..6, m01 in -5i64..6, m10 in -5i64..6, m11 in -5i64..6,
            v0 in -20i64..21, v1 in -20i64..21,
        ) {
            let b0 = iv(&[m00, m01]);
            let b1 = iv(&[m10, m11]);
            let v = iv(&[v0, v1]);
            if let Ok(coeffs) = solve_in_basis(&[b0.clone(), b1.clone()], &v) {
                let mut rec = vec![Rat::zero(), Rat::zero()];
                for (c, b) in coeffs.iter().zip([&b0, &b1]) {
                    for (r, e) in rec.iter_mut().zip(b.0.iter()) {
                        *r += c * Rat::from(e.clone());
                    }
                }
                for (r, e) in rec.iter().zip(v.0.iter()) {
                    prop_assert_eq!(r.clone(), Rat::from(e.clone()));
                }
            }
        }

        #[test]
        fn unimodular_solve_result_is_valid(
            a in -3i64..4, b in -3i64..4, c in -3i64..4,
            p in -3i64..4, q in -3i64..4, r in -3i64..4,
        ) {
            // Random unimodular-ish A via triangular matrices with unit diagonal.
            let lower = IntMatrix::from_rows(&[iv(&[1, 0]), iv(&[a, 1])]);
            let upper = IntMatrix::from_rows(&[iv(&[1, b]), iv(&[0, 1])]);
            let am = lower.mul(&upper).unwrap();
            let bm = IntMatrix::from_rows(&[iv(&[1, c]), iv(&[0, 1])])
                .mul(&IntMatrix::from_rows(&[iv(&[1, 0]), iv(&[p, 1])])).unwrap()
                .mul(&IntMatrix::from_rows(&[iv(&[1, q]), iv(&[0, 1])])).unwrap()
                .mul(&IntMatrix::from_rows(&[iv(&[1, 0]), iv(&[r, 1])])).unwrap();
            let x = unimodular_solve(&am, &bm).unwrap().expect("both unimodular");
            prop_assert!(x.is_unimodular());
            prop_assert_eq!(x.mul(&am).unwrap(), bm);
        }

        #[test]
        fn cone_membership_matches_brute_force(
            gens in proptest::collection::vec(proptest::collection::vec(-3i64..4, 3), 1..5),
            v in proptest::collection::vec(-4i64..5, 3),
        ) {
            let gens: Vec<IntVector> = gens.iter().map(|g| iv(g)).collect();
            let v = iv(&v);
            let exact = in_rational_cone(&gens, &v);
            // Independent oracle via Caratheodory: v lies in the cone iff it is a
            // nonnegative combination of some linearly independent subset.
            let mut found = v.is_zero();
            let n = gens.len();
            'subsets: for mask in 1u32..(1 << n) {
                let subset: Vec<IntVector> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| gens[i].clone())
                    .collect();
                match solve_in_basis(&subset, &v) {
                    Ok(coeffs) => {
                        if coeffs.iter().all(|c| !c.is_negative()) {
                            found = true;
                            break 'subsets;
                        }
                    }
                    Err(_) => continue,
                }
            }
            prop_assert_eq!(exact, found);
        }
    }
}
