//! Density certificates for torus representations.
//!
//! A representation is dense iff its theta matrix has full Z-row rank and
//! the Z-module generated by the rows meets pi*Q^{2g} only at zero. The
//! rows are points of T^{2g}, so both conditions are taken in the torus:
//! rank_z is the free rank of the subgroup the rows generate (integer
//! combinations that vanish mod 2*pi lower it), and freeness fails only on
//! a combination that is a *nonzero* pi-rational point. Computed this way
//! the certificate is exactly invariant under the modular action and under
//! unimodular lattice changes, which a rank of the chosen angle lifts is
//! not (a row sum may wrap past 2*pi). Everything is decided exactly via
//! the rational coordinates over (pi, symbols); the verdict is recomputed
//! through the independent stacked-matrix route and the two must agree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::angle::{AngleVector, Rational, ThetaMatrix};
use crate::error::{Error, Result};
use crate::lattice::{
    complete_to_unimodular, primitive_integer_vector, rational_kernel, RatMatrix,
};
use crate::symplectic::{change_lattice, LatticeChange};

/// Verdict of the density criterion plus the closure normal-form data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityCertificate {
    pub rank_z: usize,
    pub pi_q_free: bool,
    /// Nonzero integer vector with witness^t * Theta a nonzero element of
    /// pi*Q^{2g}; present iff the module is not pi*Q-free.
    pub witness: Option<Vec<BigInt>>,
    pub dense: bool,
    /// Dimension of the subtorus whose cosets the orbit closure fills.
    pub closure_dim: usize,
    /// Unimodular h with h * Theta in the (Theta_o; pi*Q) block shape.
    pub normalizer: LatticeChange,
}

/// The reduced block shape: top rows not pi-rational, bottom rows in pi*Q.
#[derive(Debug, Clone)]
pub struct ClosureNormalForm {
    pub h: LatticeChange,
    /// First k rows of h * Theta: Z-independent and pi*Q-free.
    pub theta_o: Option<ThetaMatrix>,
    /// Bottom n-k rows of h * Theta divided by pi.
    pub q_block: Option<RatMatrix>,
    pub k: usize,
}

/// Flatten row i of theta over the basis (pi, symbols) per column.
fn flatten_row(theta: &ThetaMatrix, i: usize) -> Vec<Rational> {
    let s = theta.table().num_symbols();
    let mut out = Vec::with_capacity(theta.cols() * (1 + s));
    for j in 0..theta.cols() {
        let a = theta.entry(i, j);
        out.push(a.pi_coeff().clone());
        for slot in 1..=s {
            out.push(a.sym_coeff(slot));
        }
    }
    out
}

/// Z-row rank of the theta matrix: the free rank of the subgroup of T^{2g}
/// generated by the rows. Integer combinations landing in pi*Q^{2g} are
/// torsion or zero on the torus, so the rank is n minus the rank of the
/// relation lattice.
pub fn rank_z(theta: &ThetaMatrix) -> usize {
    theta.n() - relation_lattice(theta).len()
}

/// Rank of the stacked matrix (Theta; pi * I_{2g}) in flattened coordinates.
fn stacked_rank(theta: &ThetaMatrix) -> usize {
    let s = theta.table().num_symbols();
    let width = theta.cols() * (1 + s);
    let mut rows: Vec<Vec<Rational>> = (0..theta.n()).map(|i| flatten_row(theta, i)).collect();
    for j in 0..theta.cols() {
        let mut row = vec![Rational::zero(); width];
        row[j * (1 + s)] = Rational::one();
        rows.push(row);
    }
    RatMatrix::from_rows(rows).expect("nonempty").rank()
}

/// Pi-coefficient block of theta as an n x 2g rational matrix.
fn pi_block(theta: &ThetaMatrix) -> RatMatrix {
    let rows = (0..theta.n())
        .map(|i| {
            (0..theta.cols())
                .map(|j| theta.entry(i, j).pi_coeff().clone())
                .collect()
        })
        .collect();
    RatMatrix::from_rows(rows).expect("nonempty")
}

/// Saturated basis of the relation lattice
/// L = { lambda in Z^n : lambda^t * Theta in pi*Q^{2g} },
/// i.e. integer vectors annihilating the symbol-coefficient block.
pub fn relation_lattice(theta: &ThetaMatrix) -> Vec<Vec<BigInt>> {
    let n = theta.n();
    let s = theta.table().num_symbols();
    if s == 0 {
        // no symbols anywhere: every row is pi-rational
        return (0..n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                e
            })
            .collect();
    }
    let sym_rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(theta.cols() * s);
            for j in 0..theta.cols() {
                for slot in 1..=s {
                    row.push(theta.entry(i, j).sym_coeff(slot));
                }
            }
            row
        })
        .collect();
    let sym = RatMatrix::from_rows(sym_rows).expect("nonempty");
    let kernel = rational_kernel(&sym);
    if kernel.is_empty() {
        return Vec::new();
    }
    let ints: Vec<Vec<BigInt>> = kernel.iter().map(|v| primitive_integer_vector(v)).collect();
    crate::lattice::saturate(&ints).expect("kernel vectors have equal length")
}

/// Pi*Q-freeness of the row module, with a verifying witness on failure.
/// A relation lambda only destroys freeness when lambda^t * Theta is a
/// *nonzero* point of the torus, i.e. some coordinate of the pi-coefficient
/// combination falls outside 2Z; combinations that wrap to the identity are
/// reported by rank_z alone.
pub fn is_pi_q_free(theta: &ThetaMatrix) -> (bool, Option<Vec<BigInt>>) {
    let lattice = relation_lattice(theta);
    if lattice.is_empty() {
        return (true, None);
    }
    let p = pi_block(theta);
    for lambda in &lattice {
        let mut nonzero = false;
        for j in 0..p.cols() {
            let mut acc = Rational::zero();
            for (i, l) in lambda.iter().enumerate() {
                acc += Rational::from_integer(l.clone()) * &p[(i, j)];
            }
            if !acc.is_integer() || acc.to_integer().is_odd() {
                nonzero = true;
                break;
            }
        }
        if nonzero {
            return (false, Some(normalize_witness(lambda)));
        }
    }
    (true, None)
}

fn normalize_witness(lambda: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in lambda {
        g = g.gcd(x);
    }
    let v: Vec<BigInt> = if g.is_zero() || g.is_one() {
        lambda.to_vec()
    } else {
        lambda.iter().map(|x| x / &g).collect()
    };
    // sign convention: first nonzero entry positive
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.iter().map(|y| -y).collect(),
        _ => v,
    }
}

/// Closure normal form per the reduced block shape: a unimodular h whose
/// bottom rows of h * Theta are pi-rational and whose top k rows form a
/// Z-independent pi*Q-free system. k = n - rank(relation lattice).
pub fn closure_normal_form(theta: &ThetaMatrix) -> Result<ClosureNormalForm> {
    let n = theta.n();
    let lattice = relation_lattice(theta);
    let k = n - lattice.len();
    let h = if lattice.is_empty() {
        LatticeChange::identity(n)
    } else if lattice.len() == n {
        LatticeChange::identity(n)
    } else {
        let m = complete_to_unimodular(&lattice)?;
        // completion rows on top, relation rows at the bottom
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in lattice.len()..n {
            rows.push(m.row(i).to_vec());
        }
        for i in 0..lattice.len() {
            rows.push(m.row(i).to_vec());
        }
        LatticeChange::new(crate::lattice::IntMatrix::from_rows(rows)?)?
    };
    let reduced = change_lattice(theta, &h)?;
    // bottom rows must be pi-rational by construction
    for i in k..n {
        for j in 0..reduced.cols() {
            if !reduced.entry(i, j).is_pi_rational() {
                return Err(Error::Internal(
                    "normal form bottom block is not pi-rational".into(),
                ));
            }
        }
    }
    let theta_o = if k > 0 {
        Some(ThetaMatrix::new(
            theta.table(),
            theta.g(),
            (0..k).map(|i| reduced.rows()[i].clone()).collect(),
        )?)
    } else {
        None
    };
    let q_block = if k < n {
        Some(RatMatrix::from_rows(
            (k..n)
                .map(|i| {
                    (0..reduced.cols())
                        .map(|j| reduced.entry(i, j).pi_coeff().clone())
                        .collect()
                })
                .collect(),
        )?)
    } else {
        None
    };
    if let Some(t) = &theta_o {
        // the top block must itself be a rank-k pi*Q-free system
        let (free, _) = is_pi_q_free(t);
        if rank_z(t) != k || !free {
            return Err(Error::Internal("normal form top block is degenerate".into()));
        }
    }
    Ok(ClosureNormalForm { h, theta_o, q_block, k })
}

/// Full density certificate. The (rank, freeness) route and the stacked
/// matrix route are both evaluated and must agree.
pub fn certify_density(theta: &ThetaMatrix) -> Result<DensityCertificate> {
    let rank = rank_z(theta);
    let (free, witness) = is_pi_q_free(theta);
    let dense = rank == theta.n() && free;
    let dense_stacked = stacked_rank(theta) == theta.n() + theta.cols();
    if dense != dense_stacked {
        return Err(Error::Internal(format!(
            "density routes disagree: criterion {dense}, stacked {dense_stacked}"
        )));
    }
    let nf = closure_normal_form(theta)?;
    Ok(DensityCertificate {
        rank_z: rank,
        pi_q_free: free,
        witness,
        dense,
        closure_dim: nf.k,
        normalizer: nf.h,
    })
}

/// True iff the image vector generates a dense subgroup of T^n, i.e.
/// pi together with the n entries are linearly independent over Q.
pub fn generates_dense_subgroup(v: &AngleVector) -> bool {
    let table = v.entries()[0].table();
    let s = table.num_symbols();
    let width = 1 + s;
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(v.len() + 1);
    for a in v.entries() {
        let mut row = Vec::with_capacity(width);
        row.push(a.pi_coeff().clone());
        for slot in 1..=s {
            row.push(a.sym_coeff(slot));
        }
        rows.push(row);
    }
    let mut pi_row = vec![Rational::zero(); width];
    pi_row[0] = Rational::one();
    rows.push(pi_row);
    RatMatrix::from_rows(rows).expect("nonempty").rank() == v.len() + 1
}

/// Enumerate primitive exponent vectors by max-norm shells and return the
/// first whose image generates a dense subgroup of T^n, or None within the
/// bound. Shells are ordered by norm; inside a shell components are ordered
/// 0, 1, -1, 2, -2, ... so small nonnegative solutions surface first.
pub fn find_dense_curve(theta: &ThetaMatrix, bound: u32) -> Result<Option<Vec<BigInt>>> {
    if bound < 1 {
        return Err(Error::DimensionError("bound must be at least 1".into()));
    }
    let dim = theta.cols();
    for shell in 1..=bound as i64 {
        let mut k = vec![0i64; dim];
        if let Some(found) = shell_search(theta, shell, 0, &mut k)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

fn component_order(shell: i64) -> impl Iterator<Item = i64> {
    (0..=shell).flat_map(|a| if a == 0 { vec![0] } else { vec![a, -a] })
}

fn shell_search(
    theta: &ThetaMatrix,
    shell: i64,
    pos: usize,
    k: &mut Vec<i64>,
) -> Result<Option<Vec<BigInt>>> {
    if pos == k.len() {
        if k.iter().map(|x| x.abs()).max() != Some(shell) {
            return Ok(None); // interior point, seen in an earlier shell
        }
        let mut g = 0i64;
        for x in k.iter() {
            g = g.gcd(x);
        }
        if g != 1 {
            return Ok(None); // proxy for simple closed curves: primitive vectors only
        }
        let kb: Vec<BigInt> = k.iter().map(|&x| BigInt::from(x)).collect();
        let v = theta.evaluate_word(&kb)?;
        if generates_dense_subgroup(&v) {
            return Ok(Some(kb));
        }
        return Ok(None);
    }
    for val in component_order(shell) {
        k[pos] = val;
        if let Some(found) = shell_search(theta, shell, pos + 1, k)? {
            return Ok(Some(found));
        }
    }
    k[pos] = 0;
    Ok(None)
}
