//! The integer symplectic group Sp(2g, Z) and its two commuting actions
//! on theta matrices: right action by the inverse (the modular action)
//! and left multiplication by a unimodular lattice change.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::angle::{Angle, ThetaMatrix};
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;

/// Block-diagonal symplectic form with g copies of [[0,1],[-1,0]].
pub fn standard_j(g: usize) -> Result<IntMatrix> {
    if g < 1 {
        return Err(Error::DimensionError("genus must be at least 1".into()));
    }
    let mut j = IntMatrix::zero(2 * g, 2 * g);
    for i in 0..g {
        j[(2 * i, 2 * i + 1)] = BigInt::one();
        j[(2 * i + 1, 2 * i)] = -BigInt::one();
    }
    Ok(j)
}

/// Exact check of A J A^t = J.
pub fn is_symplectic(m: &IntMatrix) -> Result<bool> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionError("not square".into()));
    }
    if m.rows() % 2 != 0 || m.rows() == 0 {
        return Err(Error::DimensionError("odd dimension".into()));
    }
    let g = m.rows() / 2;
    let j = standard_j(g)?;
    let lhs = m.mul(&j)?.mul(&m.transpose())?;
    Ok(lhs == j)
}

/// Element of Sp(2g, Z); only the validating constructor builds one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticMatrix {
    g: usize,
    m: IntMatrix,
}

impl SymplecticMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if !is_symplectic(&m)? {
            return Err(Error::NotSymplectic);
        }
        Ok(SymplecticMatrix { g: m.rows() / 2, m })
    }

    pub fn identity(g: usize) -> Self {
        SymplecticMatrix {
            g,
            m: IntMatrix::identity(2 * g),
        }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    /// Exact inverse via the symplectic identity A^{-1} = -J A^t J.
    pub fn inverse(&self) -> SymplecticMatrix {
        let j = standard_j(self.g).expect("g >= 1");
        let inv = j.neg().mul(&self.m.transpose()).expect("dims").mul(&j).expect("dims");
        debug_assert_eq!(inv.mul(&self.m).unwrap(), IntMatrix::identity(2 * self.g));
        SymplecticMatrix { g: self.g, m: inv }
    }

    pub fn mul(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.g != other.g {
            return Err(Error::DimensionError("genus mismatch".into()));
        }
        Ok(SymplecticMatrix {
            g: self.g,
            m: self.m.mul(&other.m)?,
        })
    }
}

/// Symplectic transvection x -> x + <x, v> v along an integer vector v,
/// with <x, v> = x^t J v. Always lands in Sp(2g, Z).
pub fn transvection(g: usize, v: &[BigInt]) -> Result<SymplecticMatrix> {
    if v.len() != 2 * g {
        return Err(Error::DimensionError("transvection vector length".into()));
    }
    let j = standard_j(g)?;
    // A = I + v (J v)^t with column convention A x = x + (x^t J v) v
    let mut jv = vec![BigInt::zero(); 2 * g];
    for i in 0..2 * g {
        for k in 0..2 * g {
            jv[i] += &j[(i, k)] * &v[k];
        }
    }
    let mut a = IntMatrix::identity(2 * g);
    for i in 0..2 * g {
        for k in 0..2 * g {
            let add = &v[i] * &jv[k];
            a[(i, k)] += add;
        }
    }
    // the sign convention of J only flips the transvection direction;
    // either way the result is symplectic and that is what we verify
    SymplecticMatrix::new(a)
}

/// Fixed generator set: for each handle the two SL(2,Z) transvections in
/// that block, plus (for g >= 2) a transvection mixing each adjacent pair
/// of handles. Sufficient for the orbit experiments and deterministic.
pub fn symplectic_generators(g: usize) -> Vec<SymplecticMatrix> {
    assert!(g >= 1);
    let mut gens = Vec::new();
    for i in 0..g {
        let mut s = IntMatrix::identity(2 * g);
        s[(2 * i, 2 * i + 1)] = BigInt::one();
        gens.push(SymplecticMatrix::new(s).expect("handle twist"));
        let mut t = IntMatrix::identity(2 * g);
        t[(2 * i + 1, 2 * i)] = BigInt::one();
        gens.push(SymplecticMatrix::new(t).expect("handle twist"));
    }
    for i in 0..g.saturating_sub(1) {
        let mut v = vec![BigInt::zero(); 2 * g];
        v[2 * i + 1] = BigInt::one(); // b_i
        v[2 * i + 2] = BigInt::one(); // a_{i+1}
        gens.push(transvection(g, &v).expect("mixing transvection"));
    }
    gens
}

/// Word in the generator alphabet: (generator index, exponent +-1).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorWord {
    pub letters: Vec<(usize, i8)>,
}

impl GeneratorWord {
    pub fn empty() -> Self {
        GeneratorWord { letters: Vec::new() }
    }

    pub fn push(&self, index: usize, exponent: i8) -> Self {
        let mut letters = self.letters.clone();
        letters.push((index, exponent));
        GeneratorWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Product of the letters, left to right.
    pub fn evaluate(&self, gens: &[SymplecticMatrix], g: usize) -> Result<SymplecticMatrix> {
        let mut acc = SymplecticMatrix::identity(g);
        for &(i, e) in &self.letters {
            let gen = gens
                .get(i)
                .ok_or_else(|| Error::DimensionError(format!("generator index {i} out of range")))?;
            let m = if e >= 0 { gen.clone() } else { gen.inverse() };
            acc = acc.mul(&m)?;
        }
        Ok(acc)
    }
}

/// Unimodular change of the target lattice, h in GL(n, Z) with det +-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeChange {
    m: IntMatrix,
}

impl LatticeChange {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::DimensionError("lattice change must be square".into()));
        }
        if !m.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        Ok(LatticeChange { m })
    }

    pub fn identity(n: usize) -> Self {
        LatticeChange {
            m: IntMatrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }
}

/// The modular action A . Theta = Theta A^{-1}, entrywise exact.
pub fn act_on_theta(theta: &ThetaMatrix, a: &SymplecticMatrix) -> Result<ThetaMatrix> {
    if a.g() != theta.g() {
        return Err(Error::DimensionError(format!(
            "symplectic genus {} does not match theta genus {}",
            a.g(),
            theta.g()
        )));
    }
    let inv = a.inverse();
    theta_times_int(theta, inv.matrix())
}

/// Right multiplication Theta * B by an integer matrix, canonicalized.
pub fn theta_times_int(theta: &ThetaMatrix, b: &IntMatrix) -> Result<ThetaMatrix> {
    if b.rows() != theta.cols() {
        return Err(Error::DimensionError("column count mismatch".into()));
    }
    let table = theta.table().clone();
    let mut rows = Vec::with_capacity(theta.n());
    for i in 0..theta.n() {
        let mut row = Vec::with_capacity(b.cols());
        for j in 0..b.cols() {
            let mut acc = Angle::zero(&table);
            for l in 0..theta.cols() {
                acc = acc.add(&theta.entry(i, l).scale(&b[(l, j)]))?;
            }
            row.push(acc);
        }
        rows.push(row);
    }
    ThetaMatrix::new(&table, b.cols() / 2, rows)
}

/// Lattice change h . Theta = h * Theta, canonicalized.
pub fn change_lattice(theta: &ThetaMatrix, h: &LatticeChange) -> Result<ThetaMatrix> {
    if h.n() != theta.n() {
        return Err(Error::DimensionError(format!(
            "lattice change dimension {} does not match n = {}",
            h.n(),
            theta.n()
        )));
    }
    let table = theta.table().clone();
    let hm = h.matrix();
    let mut rows = Vec::with_capacity(theta.n());
    for i in 0..theta.n() {
        let mut row = Vec::with_capacity(theta.cols());
        for j in 0..theta.cols() {
            let mut acc = Angle::zero(&table);
            for l in 0..theta.n() {
                acc = acc.add(&theta.entry(l, j).scale(&hm[(i, l)]))?;
            }
            row.push(acc);
        }
        rows.push(row);
    }
    ThetaMatrix::new(&table, theta.g(), rows)
}
