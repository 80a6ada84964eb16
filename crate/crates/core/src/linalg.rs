//! Dense exact linear algebra over a prime field GF(p).
//!
//! Entries are stored as bytes holding canonical representatives in `[0, p)`, so the
//! supported primes are those below 256. Row operations go through a per-scalar
//! lookup table, and characteristic two takes a plain XOR path.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fp {
    p: u8,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..256).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidField(p));
        }
        Ok(Fp { p: p as u8 })
    }

    #[inline]
    pub fn p(self) -> u8 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        let s = a as u16 + b as u16;
        if s >= self.p as u16 {
            (s - self.p as u16) as u8
        } else {
            s as u8
        }
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        if a >= b {
            a - b
        } else {
            (a as u16 + self.p as u16 - b as u16) as u8
        }
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    pub fn inv(self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero in GF({})", self.p);
        // a^(p-2)
        let mut result = 1u8;
        let mut base = a;
        let mut e = self.p as u32 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Canonical representative of an arbitrary integer.
    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.p as i64) as u8
    }

    /// Signed representative in `(-p/2, p/2]`, used for printing.
    pub fn signed(self, a: u8) -> i64 {
        if a as u16 * 2 > self.p as u16 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    fn mul_table(self, c: u8) -> [u8; 256] {
        let mut t = [0u8; 256];
        for (x, slot) in t.iter_mut().enumerate().take(self.p as usize) {
            *slot = self.mul(c, x as u8);
        }
        t
    }

    /// `dst += c * src`.
    pub fn axpy(self, dst: &mut [u8], src: &[u8], c: u8) {
        debug_assert_eq!(dst.len(), src.len());
        if c == 0 {
            return;
        }
        if self.p == 2 {
            for (d, s) in dst.iter_mut().zip(src) {
                *d ^= *s;
            }
            return;
        }
        let p = self.p;
        let t = self.mul_table(c);
        for (d, s) in dst.iter_mut().zip(src) {
            let v = *d as u16 + t[*s as usize] as u16;
            *d = if v >= p as u16 { (v - p as u16) as u8 } else { v as u8 };
        }
    }

    /// `v *= c`.
    pub fn scale(self, v: &mut [u8], c: u8) {
        if c == 1 {
            return;
        }
        let t = self.mul_table(c);
        for x in v.iter_mut() {
            *x = t[*x as usize];
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over GF({}) [", self.rows, self.cols, self.field.p)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        Mat { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod p.
    pub fn from_rows(field: Fp, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * c + j] = field.reduce(x);
            }
        }
        m
    }

    pub fn from_data(field: Fp, rows: usize, cols: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| x < field.p));
        Mat { field, rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(field: Fp, len: usize, cols: &[Vec<u8>]) -> Self {
        let mut m = Self::zeros(field, len, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), len);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        debug_assert!(v < self.field.p);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u8] {
        let c = self.cols;
        &mut self.data[i * c..(i + 1) * c]
    }

    pub fn col(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        let oc = other.cols;
        for i in 0..self.rows {
            let (dst_start, dst_end) = (i * oc, (i + 1) * oc);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0 {
                    let src = &other.data[k * oc..(k + 1) * oc];
                    self.field.axpy(&mut out.data[dst_start..dst_end], src, a);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc: u32 = 0;
                for (a, b) in self.row(i).iter().zip(v) {
                    acc += *a as u32 * *b as u32;
                    if acc > 60000 {
                        acc %= f.p as u32;
                    }
                }
                (acc % f.p as u32) as u8
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        self.field.axpy(&mut out.data, &other.data, 1);
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        let m1 = self.field.neg(1);
        self.field.axpy(&mut out.data, &other.data, m1);
        out
    }

    pub fn scaled(&self, c: u8) -> Mat {
        let mut out = self.clone();
        self.field.scale(&mut out.data, c);
        out
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Mat, c: u8) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.field.axpy(&mut self.data, &other.data, c);
    }

    pub fn pow(&self, e: u32) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut out = Mat::identity(self.field, self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            out.row_mut(i)[self.cols..].copy_from_slice(other.row(i));
        }
        out
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Rows `range` as a new matrix.
    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            out.row_mut(k).copy_from_slice(self.row(i));
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.data[i * idx.len() + k] = self.get(i, j);
            }
        }
        out
    }

    pub fn push_row(&mut self, row: &[u8]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn rank(&self) -> usize {
        rref(self).rank()
    }
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub mat: Mat,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// In-place reduction restricted to pivots in columns `< pivot_limit`; returns pivots.
fn rref_in_place(m: &mut Mat, pivot_limit: usize) -> Vec<usize> {
    let f = m.field;
    let cols = m.cols;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_limit {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| m.data[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                m.data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(m.data[r * cols + c]);
        f.scale(&mut m.data[r * cols..(r + 1) * cols], inv);
        let pivot_row = m.data[r * cols..(r + 1) * cols].to_vec();
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let x = m.data[i * cols + c];
            if x != 0 {
                let neg = f.neg(x);
                f.axpy(&mut m.data[i * cols..(i + 1) * cols], &pivot_row, neg);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Unique reduced row echelon form (leftmost pivot, first nonzero row).
pub fn rref(m: &Mat) -> Rref {
    let mut mat = m.clone();
    let pivots = rref_in_place(&mut mat, m.cols);
    Rref { mat, pivots }
}

/// Basis of `{x : m x = 0}` in reduced echelon form.
pub fn kernel_basis(m: &Mat) -> Subspace {
    let f = m.field;
    let red = rref(m);
    let n = m.cols;
    let mut is_pivot = vec![false; n];
    for &c in &red.pivots {
        is_pivot[c] = true;
    }
    let mut basis = Mat::zeros(f, 0, n);
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u8; n];
        v[free] = 1;
        for (i, &pc) in red.pivots.iter().enumerate() {
            v[pc] = f.neg(red.mat.get(i, free));
        }
        basis.push_row(&v);
    }
    Subspace::from_rows(&basis)
}

/// The linear system has no solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoSolution;

impl fmt::Display for NoSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inconsistent linear system")
    }
}

/// Particular solution of `m x = b` with free variables set to zero.
pub fn solve(m: &Mat, b: &[u8]) -> std::result::Result<Vec<u8>, NoSolution> {
    assert_eq!(b.len(), m.rows);
    let bcol = Mat::from_cols(m.field, m.rows, &[b.to_vec()]);
    let sols = solve_many(m, &bcol)?;
    Ok(sols.col(0))
}

/// Solves `m X = B` column by column; fails if any column is inconsistent.
pub fn solve_many(m: &Mat, b: &Mat) -> std::result::Result<Mat, NoSolution> {
    assert_eq!(b.rows, m.rows);
    let mut aug = m.hstack(b);
    let pivots = rref_in_place(&mut aug, m.cols);
    let rank = pivots.len();
    for i in rank..aug.rows {
        if aug.row(i)[m.cols..].iter().any(|&x| x != 0) {
            return Err(NoSolution);
        }
    }
    let mut x = Mat::zeros(m.field, m.cols, b.cols);
    for (i, &pc) in pivots.iter().enumerate() {
        x.row_mut(pc).copy_from_slice(&aug.row(i)[m.cols..]);
    }
    Ok(x)
}

/// Reusable solver for `m x = b` with many right-hand sides.
///
/// Stores the row transformation `T` with `T m = rref(m)`, so each solve costs one
/// matrix-vector product.
#[derive(Clone, Debug)]
pub struct Solver {
    cols: usize,
    transform: Mat,
    pivots: Vec<usize>,
}

impl Solver {
    pub fn new(m: &Mat) -> Self {
        let mut aug = m.hstack(&Mat::identity(m.field, m.rows));
        let pivots = rref_in_place(&mut aug, m.cols);
        let idx: Vec<usize> = (m.cols..m.cols + m.rows).collect();
        let transform = aug.select_cols(&idx);
        Solver { cols: m.cols, transform, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &[u8]) -> std::result::Result<Vec<u8>, NoSolution> {
        let y = self.transform.mul_vec(b);
        if y[self.pivots.len()..].iter().any(|&v| v != 0) {
            return Err(NoSolution);
        }
        let mut x = vec![0u8; self.cols];
        for (i, &pc) in self.pivots.iter().enumerate() {
            x[pc] = y[i];
        }
        Ok(x)
    }

    /// Solves for every column of `b`; columns of the result are the solutions.
    pub fn solve_cols(&self, b: &Mat) -> std::result::Result<Mat, NoSolution> {
        let y = self.transform.mul(b);
        let r = self.pivots.len();
        if (r..y.rows).any(|i| y.row(i).iter().any(|&v| v != 0)) {
            return Err(NoSolution);
        }
        let mut x = Mat::zeros(b.field, self.cols, b.cols);
        for (i, &pc) in self.pivots.iter().enumerate() {
            x.row_mut(pc).copy_from_slice(y.row(i));
        }
        Ok(x)
    }
}

/// A subspace of GF(p)^n, stored as a basis in reduced row echelon form.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

impl Subspace {
    /// Span of the rows of `m`.
    pub fn from_rows(m: &Mat) -> Self {
        let red = rref(m);
        let r = red.rank();
        let idx: Vec<usize> = (0..r).collect();
        Subspace { ambient: m.cols, basis: red.mat.select_rows(&idx), pivots: red.pivots }
    }

    pub fn from_vectors(field: Fp, ambient: usize, vecs: &[Vec<u8>]) -> Self {
        let mut m = Mat::zeros(field, 0, ambient);
        for v in vecs {
            m.push_row(v);
        }
        Self::from_rows(&m)
    }

    pub fn zero(field: Fp, ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::zeros(field, 0, ambient), pivots: vec![] }
    }

    pub fn full(field: Fp, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn field(&self) -> Fp {
        self.basis.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.rows
    }
    pub fn basis(&self) -> &Mat {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn vectors(&self) -> Vec<Vec<u8>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    /// Subtracts the pivot components; the result is zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.ambient);
        let f = self.field();
        let mut w = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = w[pc];
            if c != 0 {
                f.axpy(&mut w, self.basis.row(i), f.neg(c));
            }
        }
        w
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    /// Coordinates of `v` in the echelon basis (assumes membership).
    pub fn coords(&self, v: &[u8]) -> Vec<u8> {
        self.pivots.iter().map(|&pc| v[pc]).collect()
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(Subspace::from_rows(&self.basis.vstack(&other.basis)))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let f = self.field();
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(f, self.ambient));
        }
        // w . [A; B] = 0  gives  wA A = -wB B, an element of both.
        let stacked = self.basis.vstack(&other.basis);
        let left_kernel = kernel_basis(&stacked.transpose());
        let a = self.dim();
        let mut vecs = Mat::zeros(f, 0, self.ambient);
        for w in left_kernel.vectors() {
            let mut v = vec![0u8; self.ambient];
            for (i, &c) in w[..a].iter().enumerate() {
                f.axpy(&mut v, self.basis.row(i), c);
            }
            vecs.push_row(&v);
        }
        Ok(Subspace::from_rows(&vecs))
    }

    /// Deterministic complement `C` of `self` inside `ambient`: `self + C = ambient`, `self ∩ C = 0`.
    pub fn quotient_complement(&self, ambient: &Subspace) -> Result<Subspace> {
        self.check(ambient)?;
        if !ambient.contains_subspace(self) {
            return Err(Error::NotASubspace);
        }
        let mut rem = Mat::zeros(self.field(), 0, self.ambient);
        for v in ambient.vectors() {
            rem.push_row(&self.reduce(&v));
        }
        Ok(Subspace::from_rows(&rem))
    }
}

/// Canonical coordinates on a quotient `ambient / sub`.
///
/// The complement basis is echelonized with zeros in the pivot columns of `sub`, so a
/// vector's coordinates are read off after reducing by `sub`.
#[derive(Clone, Debug)]
pub struct QuotientCoords {
    sub: Subspace,
    complement: Subspace,
}

impl QuotientCoords {
    pub fn new(sub: Subspace, ambient: &Subspace) -> Result<Self> {
        let complement = sub.quotient_complement(ambient)?;
        Ok(QuotientCoords { sub, complement })
    }

    pub fn dim(&self) -> usize {
        self.complement.dim()
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    pub fn complement(&self) -> &Subspace {
        &self.complement
    }

    /// Coordinates of the class of `v`; `v` must lie in the ambient space.
    pub fn coords(&self, v: &[u8]) -> Vec<u8> {
        let w = self.sub.reduce(v);
        self.complement.coords(&w)
    }

    /// Representative of the class with the given coordinates.
    pub fn lift(&self, coords: &[u8]) -> Vec<u8> {
        assert_eq!(coords.len(), self.dim());
        let f = self.sub.field();
        let mut v = vec![0u8; self.sub.ambient];
        for (i, &c) in coords.iter().enumerate() {
            f.axpy(&mut v, self.complement.basis.row(i), c);
        }
        v
    }

    pub fn is_zero_class(&self, v: &[u8]) -> bool {
        self.sub.contains(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    fn random_mat(f: Fp, r: usize, c: usize, seed: u64) -> Mat {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..r * c).map(|_| rng.gen_range(0..f.p())).collect();
        Mat::from_data(f, r, c, data)
    }

    /// All vectors of GF(p)^n.
    fn all_vectors(f: Fp, n: usize) -> Vec<Vec<u8>> {
        let total = (f.p() as usize).pow(n as u32);
        (0..total)
            .map(|mut x| {
                (0..n)
                    .map(|_| {
                        let d = (x % f.p() as usize) as u8;
                        x /= f.p() as usize;
                        d
                    })
                    .collect()
            })
            .collect()
    }

    /// Size of the row space by enumerating all combinations of rows.
    fn brute_rank(m: &Mat) -> usize {
        let f = m.field();
        let mut seen = std::collections::HashSet::new();
        for coeffs in all_vectors(f, m.rows()) {
            let mut v = vec![0u8; m.cols()];
            for (i, &c) in coeffs.iter().enumerate() {
                f.axpy(&mut v, m.row(i), c);
            }
            seen.insert(v);
        }
        let mut r = 0;
        while (f.p() as usize).pow(r as u32) < seen.len() {
            r += 1;
        }
        r
    }

    #[test]
    fn field_rejects_composites() {
        assert!(Fp::new(4).is_err());
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(257).is_err());
        assert!(Fp::new(251).is_ok());
    }

    #[test]
    fn field_inverse() {
        let f = gf(7);
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn rref_all_ones_gf2() {
        let m = Mat::from_rows(gf(2), &[vec![1, 1], vec![1, 1]]);
        let r = rref(&m);
        assert_eq!(r.mat, Mat::from_rows(gf(2), &[vec![1, 1], vec![0, 0]]));
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn rref_identity_gf5() {
        let i = Mat::identity(gf(5), 3);
        let r = rref(&i);
        assert_eq!(r.mat, i);
        assert_eq!(r.rank(), 3);
    }

    #[test]
    fn rank_nullity_against_enumeration() {
        let f = gf(3);
        let m = random_mat(f, 5, 7, 11);
        let r = rref(&m).rank();
        assert_eq!(r, brute_rank(&m));
        assert_eq!(r + kernel_basis(&m).dim(), 7);
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        let k = kernel_basis(&Mat::zeros(gf(2), 2, 3));
        assert_eq!(k.dim(), 3);
    }

    #[test]
    fn kernel_all_ones_gf2() {
        let m = Mat::from_rows(gf(2), &[vec![1, 1], vec![1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.vectors(), vec![vec![1, 1]]);
    }

    #[test]
    fn kernel_against_brute_force() {
        let f = gf(2);
        let m = random_mat(f, 6, 6, 3);
        let k = kernel_basis(&m);
        let zero = vec![0u8; 6];
        for v in k.vectors() {
            assert_eq!(m.mul_vec(&v), zero);
        }
        let brute: Vec<_> = all_vectors(f, 6).into_iter().filter(|v| m.mul_vec(v) == zero).collect();
        assert_eq!(brute.len(), 1 << k.dim());
        assert!(brute.iter().all(|v| k.contains(v)));
    }

    #[test]
    fn solve_invertible_gf5() {
        let f = gf(5);
        let m = Mat::from_rows(f, &[vec![2, 1], vec![1, 4]]);
        for b in all_vectors(f, 2) {
            let x = solve(&m, &b).unwrap();
            assert_eq!(m.mul_vec(&x), b);
        }
    }

    #[test]
    fn solve_zero_system() {
        let f = gf(3);
        let m = Mat::zeros(f, 2, 2);
        assert_eq!(solve(&m, &[0, 0]).unwrap(), vec![0, 0]);
        assert_eq!(solve(&m, &[1, 0]), Err(NoSolution));
    }

    #[test]
    fn solver_matches_solve() {
        let f = gf(3);
        let m = random_mat(f, 6, 4, 9);
        let s = Solver::new(&m);
        for seed in 0..20 {
            let b = random_mat(f, 6, 1, 100 + seed).col(0);
            assert_eq!(s.solve(&b).ok(), solve(&m, &b).ok());
        }
    }

    #[test]
    fn subspace_equal_sum_and_intersection() {
        let f = gf(2);
        let a = Subspace::from_rows(&random_mat(f, 3, 6, 5));
        assert_eq!(a.sum(&a).unwrap(), a);
        assert_eq!(a.intersection(&a).unwrap(), a);
    }

    #[test]
    fn dimension_formula_against_enumeration() {
        let f = gf(2);
        for seed in 0..10 {
            let a = Subspace::from_rows(&random_mat(f, 3, 6, 2 * seed));
            let b = Subspace::from_rows(&random_mat(f, 3, 6, 2 * seed + 1));
            let s = a.sum(&b).unwrap();
            let i = a.intersection(&b).unwrap();
            assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
            let in_both = all_vectors(f, 6).into_iter().filter(|v| a.contains(v) && b.contains(v)).count();
            assert_eq!(in_both, 1 << i.dim());
        }
    }

    #[test]
    fn complement_of_zero_is_ambient() {
        let f = gf(3);
        let amb = Subspace::from_rows(&random_mat(f, 3, 5, 1));
        let c = Subspace::zero(f, 5).quotient_complement(&amb).unwrap();
        assert_eq!(c, amb);
    }

    #[test]
    fn mismatched_ambient_is_an_error() {
        let f = gf(2);
        assert!(Subspace::zero(f, 3).sum(&Subspace::zero(f, 4)).is_err());
    }

    #[test]
    fn quotient_coords_ignore_sub() {
        let f = gf(3);
        let amb = Subspace::full(f, 5);
        let sub = Subspace::from_rows(&random_mat(f, 2, 5, 8));
        let q = QuotientCoords::new(sub.clone(), &amb).unwrap();
        assert_eq!(q.dim(), 5 - sub.dim());
        let v: Vec<u8> = (0..5).map(|j| random_mat(f, 1, 5, 77).get(0, j)).collect();
        let mut w = v.clone();
        f.axpy(&mut w, sub.basis().row(0), 2);
        assert_eq!(q.coords(&v), q.coords(&w));
        let back = q.lift(&q.coords(&v));
        assert_eq!(q.coords(&back), q.coords(&v));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn mat_strategy() -> impl Strategy<Value = Mat> {
            (prop::sample::select(vec![2u32, 3, 5]), 1usize..6, 1usize..6, any::<u64>())
                .prop_map(|(p, r, c, seed)| random_mat(gf(p), r, c, seed))
        }

        proptest! {
            #[test]
            fn rref_idempotent(m in mat_strategy()) {
                let once = rref(&m);
                prop_assert_eq!(rref(&once.mat).mat, once.mat.clone());
            }

            #[test]
            fn rank_plus_nullity(m in mat_strategy()) {
                prop_assert_eq!(rref(&m).rank() + kernel_basis(&m).dim(), m.cols());
            }

            #[test]
            fn solve_is_exact_or_inconsistent(m in mat_strategy(), seed in any::<u64>()) {
                let b = random_mat(m.field(), m.rows(), 1, seed).col(0);
                let aug_rank = m.hstack(&Mat::from_cols(m.field(), m.rows(), &[b.clone()])).rank();
                match solve(&m, &b) {
                    Ok(x) => prop_assert_eq!(m.mul_vec(&x), b),
                    Err(NoSolution) => prop_assert!(aug_rank > m.rank()),
                }
            }

            #[test]
            fn row_equivalent_matrices_share_rref(m in mat_strategy(), seed in any::<u64>()) {
                let g = random_mat(m.field(), m.rows(), m.rows(), seed);
                if g.rank() == m.rows() {
                    prop_assert_eq!(rref(&g.mul(&m)).mat, rref(&m).mat);
                }
            }
        }
    }
}
