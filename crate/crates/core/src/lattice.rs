//! Exact integer and rational linear algebra: Hermite normal form,
//! rational kernels, lattice saturation and unimodular basis completion.
//!
//! Everything is dense, arbitrary precision and row-oriented; relations
//! among rows are the objects of interest throughout the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::DimensionError("empty matrix".into()));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionError("ragged or empty rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionError(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| Rational::from_integer(x.clone())).collect(),
        }
    }

    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionError("determinant of non-square matrix".into()));
        }
        let d = self.to_rational().det_rational();
        debug_assert!(d.denom().is_one());
        Ok(d.numer().clone())
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// Exact inverse of a unimodular matrix, as an integer matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        if !self.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        let inv = self.to_rational().inverse()?;
        let mut out = IntMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = &inv[(i, j)];
                debug_assert!(e.denom().is_one());
                out[(i, j)] = e.numer().clone();
            }
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::DimensionError("empty matrix".into()));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionError("ragged or empty rows".into()));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Row echelon rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let (reduced, pivots) = self.rref();
        let _ = reduced;
        pivots.len()
    }

    /// Reduced row echelon form plus the list of pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(i, j)] - &f * &m[(r, j)];
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn det_rational(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det *= m[(c, c)].clone();
            let inv = m[(c, c)].recip();
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..m.cols {
                    let v = &m[(i, j)] - &f * &m[(c, j)];
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionError("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = RatMatrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::DimensionError("singular matrix".into()));
        }
        let mut out = RatMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = red[(i, n + j)].clone();
            }
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Row Hermite normal form. Returns (h, u) with u unimodular, h = u * m,
/// pivots positive, entries above each pivot reduced into [0, pivot) and
/// zero rows last. The form is canonical, so the result is deterministic.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let (rows, cols) = (h.rows(), h.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // clear the column below row r by gcd elimination
        loop {
            let mut piv: Option<usize> = None;
            for i in r..rows {
                if !h[(i, c)].is_zero() {
                    piv = match piv {
                        Some(p) if h[(p, c)].abs() <= h[(i, c)].abs() => Some(p),
                        _ => Some(i),
                    };
                }
            }
            let Some(p) = piv else { break };
            swap_rows(&mut h, &mut u, r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = div_floor_big(&h[(i, c)], &h[(r, c)]);
                row_sub(&mut h, &mut u, i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_row(&mut h, &mut u, r);
        }
        for i in 0..r {
            let q = div_floor_big(&h[(i, c)], &h[(r, c)]);
            if !q.is_zero() {
                row_sub(&mut h, &mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

fn swap_rows(h: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..h.cols() {
        let x = h[(a, j)].clone();
        h[(a, j)] = h[(b, j)].clone();
        h[(b, j)] = x;
    }
    for j in 0..u.cols() {
        let x = u[(a, j)].clone();
        u[(a, j)] = u[(b, j)].clone();
        u[(b, j)] = x;
    }
}

fn row_sub(h: &mut IntMatrix, u: &mut IntMatrix, i: usize, r: usize, q: &BigInt) {
    for j in 0..h.cols() {
        let v = &h[(i, j)] - q * &h[(r, j)];
        h[(i, j)] = v;
    }
    for j in 0..u.cols() {
        let v = &u[(i, j)] - q * &u[(r, j)];
        u[(i, j)] = v;
    }
}

fn negate_row(h: &mut IntMatrix, u: &mut IntMatrix, r: usize) {
    for j in 0..h.cols() {
        let v = -&h[(r, j)];
        h[(r, j)] = v;
    }
    for j in 0..u.cols() {
        let v = -&u[(r, j)];
        u[(r, j)] = v;
    }
}

fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.div_floor(b)
}

/// Basis of the left kernel {v : v * m = 0} of a rational matrix.
/// Empty iff the rows are linearly independent over Q.
pub fn rational_kernel(m: &RatMatrix) -> Vec<Vec<Rational>> {
    // left kernel of m = right kernel of m^t
    let mt = m.transpose();
    let (red, pivots) = mt.rref();
    let nvars = mt.cols(); // = m.rows()
    let free: Vec<usize> = (0..nvars).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); nvars];
        v[f] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -red[(i, f)].clone();
        }
        basis.push(v);
    }
    basis
}

/// Clear denominators and divide by the content, giving a primitive integer vector.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() || gcd.is_one() {
        ints
    } else {
        ints.iter().map(|x| x / &gcd).collect()
    }
}

/// Basis of the saturation QB ∩ Z^n of the lattice spanned by the input
/// vectors. The result is a saturated lattice basis; saturating twice is
/// the identity.
pub fn saturate(basis: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let n = basis[0].len();
    if n == 0 || basis.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionError("saturate: vectors of unequal length".into()));
    }
    let b = IntMatrix::from_rows(basis.to_vec())?;
    // right kernel of B: directions orthogonal to the Q-span in the pairing v.K
    let kernel = rational_kernel(&b.to_rational().transpose());
    if kernel.is_empty() {
        // full Q-span: the saturation is all of Z^n
        return Ok((0..n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                e
            })
            .collect());
    }
    // columns of K span ker(B); integer left kernel of K is QB ∩ Z^n
    let k_cols: Vec<Vec<BigInt>> = kernel.iter().map(|v| primitive_integer_vector(v)).collect();
    let mut k = IntMatrix::zero(n, k_cols.len());
    for (j, col) in k_cols.iter().enumerate() {
        for i in 0..n {
            k[(i, j)] = col[i].clone();
        }
    }
    let (h, u) = hnf(&k);
    let mut out = Vec::new();
    for i in 0..h.rows() {
        if h.row(i).iter().all(|x| x.is_zero()) {
            out.push(u.row(i).to_vec());
        }
    }
    // canonical form for determinism
    if out.is_empty() {
        return Ok(out);
    }
    let (hh, _) = hnf(&IntMatrix::from_rows(out)?);
    let mut canon = Vec::new();
    for i in 0..hh.rows() {
        if !hh.row(i).iter().all(|x| x.is_zero()) {
            canon.push(hh.row(i).to_vec());
        }
    }
    Ok(canon)
}

fn lattice_hnf_rows(basis: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let (h, _) = hnf(&IntMatrix::from_rows(basis.to_vec())?);
    let mut rows = Vec::new();
    for i in 0..h.rows() {
        if !h.row(i).iter().all(|x| x.is_zero()) {
            rows.push(h.row(i).to_vec());
        }
    }
    Ok(rows)
}

/// Complete a saturated rank-k lattice basis in Z^n to a unimodular n x n
/// matrix whose first k rows are the input.
pub fn complete_to_unimodular(basis: &[Vec<BigInt>]) -> Result<IntMatrix> {
    if basis.is_empty() {
        return Err(Error::DimensionError("empty basis".into()));
    }
    let k = basis.len();
    let n = basis[0].len();
    if k > n || basis.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionError("bad basis dimensions".into()));
    }
    // the input must be Z-independent and saturated
    let input_hnf = lattice_hnf_rows(basis)?;
    if input_hnf.len() != k {
        return Err(Error::NotSaturated);
    }
    let sat = saturate(basis)?;
    if lattice_hnf_rows(&sat)? != input_hnf {
        return Err(Error::NotSaturated);
    }

    let b = IntMatrix::from_rows(basis.to_vec())?;
    // u * B^t = [T; 0] with T unimodular k x k (saturation makes T unimodular)
    let (h, u) = hnf(&b.transpose());
    let t_block = {
        let mut t = IntMatrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                t[(i, j)] = h[(i, j)].clone();
            }
        }
        t
    };
    if !t_block.is_unimodular() {
        return Err(Error::NotSaturated);
    }
    // B = [T^t | 0] * (u^t)^{-1}; stack B on the trailing rows of (u^t)^{-1}
    let v = u.transpose().inverse_unimodular()?;
    let mut rows: Vec<Vec<BigInt>> = basis.to_vec();
    for i in k..n {
        rows.push(v.row(i).to_vec());
    }
    let m = IntMatrix::from_rows(rows)?;
    debug_assert!(m.is_unimodular());
    Ok(m)
}
