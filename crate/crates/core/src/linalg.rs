//! Exact integer and rational matrix kernels.
//!
//! Everything here is arbitrary precision. Transforms returned by
//! [`smith_normal_form`] and [`hnf_columns`] are unimodular.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone().into();
        }
        m
    }

    /// Builds a matrix from rows; every row must have the same length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|v| v.clone().into()))
            .collect();
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Like [`IntMatrix::from_rows`] but panics on ragged input. For literals.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(&owned).expect("rectangular literal")
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Shape(format!(
                    "column {j} has length {}, expected {rows}",
                    col.len()
                )));
            }
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Shape("vector length mismatch".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn add(&self, other: &IntMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &IntMatrix, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("dimension mismatch".into()));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * n).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &IntMatrix) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &IntMatrix) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Shape("row count mismatch".into()));
        }
        let mut cols = self.columns();
        cols.extend(other.columns());
        Self::from_columns(self.rows, &cols)
    }

    /// Submatrix keeping the listed columns.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<BigInt>> = idx.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(self.rows, &cols).expect("consistent column lengths")
    }

    /// `selfᵀ · g · self`.
    pub fn congruence(&self, g: &IntMatrix) -> Result<Self> {
        self.transpose().mul(&g.mul(self)?)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q · row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = s * q;
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += q · col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = s * q;
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    /// Replaces columns (a, b) by (x·a + y·b, z·a + w·b).
    fn combine_cols(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        for i in 0..self.rows {
            let ca = &self.data[i * self.cols + a];
            let cb = &self.data[i * self.cols + b];
            if ca.is_zero() && cb.is_zero() {
                continue;
            }
            let na = x * ca + y * cb;
            let nb = z * ca + w * cb;
            self.data[i * self.cols + a] = na;
            self.data[i * self.cols + b] = nb;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of [`smith_normal_form`]: `u · a · v = diag(d)`.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// The rectangular diagonal matrix with `d` on its diagonal, shaped like the input.
    pub fn diag_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.u.rows(), self.v.cols());
        for (i, x) in self.d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }
}

fn min_abs_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..a.rows {
        for j in k..a.cols {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a.get(bi, bj).abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form with unimodular transforms.
///
/// Pivot choice is the nonzero entry of least absolute value in the active
/// block, scanned row-major, so the transforms are reproducible.
pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    snf_impl(a, true)
}

/// Invariant factors only (same pivoting as [`smith_normal_form`], no transforms).
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    snf_impl(a, false).d
}

fn snf_impl(a: &IntMatrix, track: bool) -> SnfDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let (mut u, mut v) = if track {
        (IntMatrix::identity(m), IntMatrix::identity(n))
    } else {
        (IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0))
    };
    let steps = m.min(n);
    let mut d = Vec::with_capacity(steps);
    for k in 0..steps {
        let Some(_) = min_abs_pivot(&s, k) else {
            break;
        };
        loop {
            let (pi, pj) = min_abs_pivot(&s, k).expect("active block nonzero");
            s.swap_rows(k, pi);
            s.swap_cols(k, pj);
            if track {
                u.swap_rows(k, pi);
                v.swap_cols(k, pj);
            }
            let p = s.get(k, k).clone();
            let mut clean = true;
            for i in k + 1..m {
                if s.get(i, k).is_zero() {
                    continue;
                }
                let q = -s.get(i, k).div_floor(&p);
                s.add_row_multiple(i, k, &q);
                if track {
                    u.add_row_multiple(i, k, &q);
                }
                if !s.get(i, k).is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..n {
                if s.get(k, j).is_zero() {
                    continue;
                }
                let q = -s.get(k, j).div_floor(&p);
                s.add_col_multiple(j, k, &q);
                if track {
                    v.add_col_multiple(j, k, &q);
                }
                if !s.get(k, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility fix-up: pull an offending row into the pivot row.
            let offender = (k + 1..m).find(|&i| {
                (k + 1..n).any(|j| !s.get(i, j).is_zero() && !s.get(i, j).is_multiple_of(&p))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(k, i, &one);
                    if track {
                        u.add_row_multiple(k, i, &one);
                    }
                }
                None => break,
            }
        }
        if s.get(k, k).is_negative() {
            s.negate_row(k);
            if track {
                u.negate_row(k);
            }
        }
        d.push(s.get(k, k).clone());
    }
    while d.len() < steps {
        d.push(BigInt::zero());
    }
    SnfDecomposition { d, u, v }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_exact(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "determinant of non-square {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m: Vec<Vec<BigInt>> = a.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let p = &pivot_row[k];
        for row in bottom.iter_mut() {
            let f = row[k].clone();
            if f.is_zero() {
                // Row unaffected except for the Bareiss rescale p/prev.
                for x in row[k + 1..].iter_mut() {
                    if !x.is_zero() {
                        *x = &*x * p / &prev;
                    }
                }
            } else {
                for j in k + 1..n {
                    let r = &pivot_row[j];
                    let x = &row[j];
                    let num = if r.is_zero() {
                        x * p
                    } else if x.is_zero() {
                        -(&f * r)
                    } else {
                        x * p - &f * r
                    };
                    row[j] = num / &prev;
                }
            }
            row[k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

/// Column-style Hermite normal form: returns `(h, v)` with `a · v = h`, `v` unimodular.
///
/// Nonzero columns of `h` come first; each has a positive pivot strictly lower
/// than the previous one, and entries to the left of a pivot are reduced into
/// `[0, pivot)`. Trailing columns of `h` are zero.
pub fn hnf_columns(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows, a.cols);
    let mut h = a.clone();
    let mut v = IntMatrix::identity(n);
    let mut p = 0;
    for i in 0..m {
        if p == n {
            break;
        }
        // Fold row i of columns p.. into column p with extended gcds.
        for j in p + 1..n {
            if h.get(i, j).is_zero() {
                continue;
            }
            if h.get(i, p).is_zero() {
                h.swap_cols(p, j);
                v.swap_cols(p, j);
                continue;
            }
            let x = h.get(i, p).clone();
            let y = h.get(i, j).clone();
            let e = x.extended_gcd(&y);
            let g = e.gcd.clone();
            let (xg, yg) = (&x / &g, &y / &g);
            // [a b] -> [g 0]: new_p = s·a + t·b, new_j = -(y/g)·a + (x/g)·b; det = 1.
            h.combine_cols(p, j, &e.x, &e.y, &(-&yg), &xg);
            v.combine_cols(p, j, &e.x, &e.y, &(-&yg), &xg);
        }
        if h.get(i, p).is_zero() {
            continue;
        }
        if h.get(i, p).is_negative() {
            h.negate_col(p);
            v.negate_col(p);
        }
        let piv = h.get(i, p).clone();
        for j in 0..p {
            let q = -h.get(i, j).div_floor(&piv);
            h.add_col_multiple(j, p, &q);
            v.add_col_multiple(j, p, &q);
        }
        p += 1;
    }
    (h, v)
}

/// Basis (as columns) of the integer kernel `{x : a·x = 0}`; always saturated.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let (h, v) = hnf_columns(a);
    let idx: Vec<usize> = (0..h.cols).filter(|&j| h.column(j).iter().all(Zero::is_zero)).collect();
    v.select_columns(&idx)
}

/// Column basis of the Z-span of the columns of `a`, in Hermite form.
pub fn column_span(a: &IntMatrix) -> IntMatrix {
    let (h, _) = hnf_columns(a);
    let idx: Vec<usize> = (0..h.cols).filter(|&j| h.column(j).iter().any(|x| !x.is_zero())).collect();
    h.select_columns(&idx)
}

/// Rank over Q.
pub fn rank(a: &IntMatrix) -> usize {
    column_span(a).cols()
}

pub fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn rat_frac(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Solve `a · x = b` exactly for a square nonsingular `a`.
pub fn solve_rational(a: &IntMatrix, b: &[BigRational]) -> Result<Vec<BigRational>> {
    let mut sols = solve_rational_many(a, &[b.to_vec()])?;
    Ok(sols.pop().expect("one right-hand side"))
}

/// Solve `a · x = b` for several right-hand sides with one elimination.
///
/// Right-hand sides are scaled to integers, eliminated fraction-free alongside
/// `a`, and recovered by rational back-substitution.
pub fn solve_rational_many(a: &IntMatrix, rhs: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    if !a.is_square() {
        return Err(Error::Shape("solve needs a square matrix".into()));
    }
    let n = a.rows;
    let k = rhs.len();
    if rhs.iter().any(|b| b.len() != n) {
        return Err(Error::Shape("right-hand side length mismatch".into()));
    }
    let denoms: Vec<BigInt> = rhs
        .iter()
        .map(|b| b.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom())))
        .collect();
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            for (b, dn) in rhs.iter().zip(&denoms) {
                row.push((&b[i] * BigRational::from_integer(dn.clone())).to_integer());
            }
            row
        })
        .collect();
    let w = n + k;
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Err(Error::Singular);
        };
        m.swap(c, piv);
        let (top, bottom) = m.split_at_mut(c + 1);
        let pr = &top[c];
        let p = &pr[c];
        for row in bottom.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..w {
                let x = &row[j];
                let r = &pr[j];
                let num = match (x.is_zero(), f.is_zero() || r.is_zero()) {
                    (true, true) => continue,
                    (false, true) => x * p,
                    (true, false) => -(&f * r),
                    (false, false) => x * p - &f * r,
                };
                row[j] = num / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = m[c][c].clone();
    }
    let mut out = Vec::with_capacity(k);
    for (t, dn) in denoms.iter().enumerate() {
        let mut x = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = BigRational::from_integer(m[i][n + t].clone());
            for j in i + 1..n {
                if !m[i][j].is_zero() && !x[j].is_zero() {
                    acc -= BigRational::from_integer(m[i][j].clone()) * &x[j];
                }
            }
            x[i] = acc / BigRational::from_integer(m[i][i].clone());
        }
        let dq = BigRational::from_integer(dn.clone());
        out.push(x.into_iter().map(|v| v / &dq).collect());
    }
    Ok(out)
}

/// Inverse of a unimodular matrix, checked.
pub fn inverse_unimodular(a: &IntMatrix) -> Result<IntMatrix> {
    let n = a.rows();
    let rhs: Vec<Vec<BigRational>> = (0..n)
        .map(|j| (0..n).map(|i| rat(i32::from(i == j))).collect())
        .collect();
    let cols = solve_rational_many(a, &rhs)?;
    let mut int_cols = Vec::with_capacity(n);
    for c in cols {
        int_cols.push(to_integers(&c).ok_or(Error::NotUnimodular)?);
    }
    IntMatrix::from_columns(n, &int_cols)
}

/// Converts a rational vector to integers if every entry is integral.
pub fn to_integers(v: &[BigRational]) -> Option<Vec<BigInt>> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

pub fn to_rationals(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Least common multiple of the denominators.
pub fn common_denominator(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// gcd of all entries (0 for the zero matrix).
pub fn content(entries: impl IntoIterator<Item = BigInt>) -> BigInt {
    entries.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(&x))
}

/// gcd of rationals: the largest rational `c` with every entry in `c·Z`.
pub fn rational_content(entries: &[BigRational]) -> BigRational {
    let den = common_denominator(entries);
    let dq = BigRational::from_integer(den.clone());
    let c = content(entries.iter().map(|x| (x * &dq).to_integer()));
    BigRational::new(c, den)
}

/// A set of rational column vectors stored as integer numerators over one denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledBasis {
    pub numer: IntMatrix,
    pub denom: BigInt,
}

impl ScaledBasis {
    pub fn integral(m: IntMatrix) -> Self {
        ScaledBasis {
            numer: m,
            denom: BigInt::one(),
        }
    }

    pub fn len(&self) -> usize {
        self.numer.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.numer.cols() == 0
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        let d = BigRational::from_integer(self.denom.clone());
        self.numer
            .column(j)
            .into_iter()
            .map(|x| BigRational::from_integer(x) / &d)
            .collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigRational>> {
        (0..self.len()).map(|j| self.column(j)).collect()
    }

    /// Z-span of rational generators, as a reduced scaled basis.
    pub fn span(dim: usize, gens: &[Vec<BigRational>]) -> Result<Self> {
        let den = gens
            .iter()
            .fold(BigInt::one(), |acc, g| acc.lcm(&common_denominator(g)));
        let dq = BigRational::from_integer(den.clone());
        let cols: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.iter().map(|x| (x * &dq).to_integer()).collect())
            .collect();
        let m = IntMatrix::from_columns(dim, &cols)?;
        Ok(ScaledBasis {
            numer: column_span(&m),
            denom: den,
        }
        .reduced())
    }

    /// Removes any common factor between the numerators and the denominator.
    pub fn reduced(self) -> Self {
        let c = content(self.numer.data.iter().cloned()).gcd(&self.denom);
        if c.is_one() || c.is_zero() {
            return self;
        }
        ScaledBasis {
            numer: IntMatrix {
                rows: self.numer.rows,
                cols: self.numer.cols,
                data: self.numer.data.iter().map(|x| x / &c).collect(),
            },
            denom: &self.denom / &c,
        }
    }

    /// Rational Gram `Bᵀ g B`.
    pub fn gram_in(&self, g: &IntMatrix) -> Result<Vec<Vec<BigRational>>> {
        let num = self.numer.congruence(g)?;
        let d2 = BigRational::from_integer(&self.denom * &self.denom);
        Ok(num
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| BigRational::from_integer(x) / &d2).collect())
            .collect())
    }
}

/// Converts a rational matrix (rows) to an integer matrix if every entry is integral.
pub fn rational_rows_to_int(rows: &[Vec<BigRational>]) -> Option<IntMatrix> {
    let ints: Option<Vec<Vec<BigInt>>> = rows.iter().map(|r| to_integers(r)).collect();
    ints.map(|r| IntMatrix::from_rows(&r).expect("rectangular"))
}

/// `xᵀ g y` over the rationals.
pub fn bilinear(g: &IntMatrix, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        let mut row = BigRational::zero();
        for (j, yj) in y.iter().enumerate() {
            let gij = g.get(i, j);
            if !gij.is_zero() && !yj.is_zero() {
                row += BigRational::from_integer(gij.clone()) * yj;
            }
        }
        acc += xi * row;
    }
    acc
}

/// `xᵀ g y` over the integers.
pub fn bilinear_int(g: &IntMatrix, x: &[BigInt], y: &[BigInt]) -> BigInt {
    let gy = g.mul_vec(y).expect("conformal vectors");
    x.iter().zip(&gy).map(|(a, b)| a * b).sum()
}
