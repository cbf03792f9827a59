//! JSON (de)serialization for the public data types.
//!
//! Rationals travel as "p/q" strings to stay exact; integer matrices as
//! plain integer arrays. Serialization is canonical: field order is fixed
//! and symbol maps are sorted, so emit(parse(emit(x))) == emit(x) byte for
//! byte.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::angle::{format_rational, parse_rational, Angle, SymbolTable, ThetaMatrix};
use crate::density::{ClosureNormalForm, DensityCertificate};
use crate::error::{Error, Result};
use crate::lattice::{IntMatrix, RatMatrix};
use crate::orbit::FloatTorusMatrix;
use crate::symplectic::{LatticeChange, SymplecticMatrix};

#[derive(Serialize, Deserialize)]
struct AngleDto {
    pi: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    syms: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct ThetaDto {
    n: usize,
    g: usize,
    symbols: Vec<String>,
    entries: Vec<Vec<AngleDto>>,
}

fn angle_to_dto(a: &Angle) -> AngleDto {
    let mut syms = BTreeMap::new();
    for (slot, c) in a.sym_coeffs() {
        syms.insert(a.table().name(*slot).to_string(), format_rational(c));
    }
    AngleDto {
        pi: format_rational(a.pi_coeff()),
        syms,
    }
}

pub fn theta_to_json(theta: &ThetaMatrix) -> String {
    let dto = ThetaDto {
        n: theta.n(),
        g: theta.g(),
        symbols: theta.table().symbols().to_vec(),
        entries: theta
            .rows()
            .iter()
            .map(|row| row.iter().map(angle_to_dto).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&dto).expect("serializable")
}

pub fn theta_from_json(text: &str) -> Result<ThetaMatrix> {
    let dto: ThetaDto =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("theta JSON: {e}")))?;
    let table = SymbolTable::new(dto.symbols)?;
    if dto.entries.len() != dto.n {
        return Err(Error::Parse(format!(
            "declared n = {} but found {} rows",
            dto.n,
            dto.entries.len()
        )));
    }
    let mut rows = Vec::with_capacity(dto.n);
    for row in &dto.entries {
        if row.len() != 2 * dto.g {
            return Err(Error::Parse(format!(
                "declared g = {} but found a row of length {}",
                dto.g,
                row.len()
            )));
        }
        let mut out = Vec::with_capacity(row.len());
        for cell in row {
            let mut syms = Vec::new();
            for (name, val) in &cell.syms {
                syms.push((name.as_str(), parse_rational(val)?));
            }
            out.push(Angle::new(&table, parse_rational(&cell.pi)?, syms)?);
        }
        rows.push(out);
    }
    ThetaMatrix::new(&table, dto.g, rows)
}

fn bigint_to_i64(x: &BigInt) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Internal("integer entry exceeds i64 range".into()))
}

fn int_matrix_to_rows(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(bigint_to_i64).collect())
        .collect()
}

fn int_matrix_from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix> {
    IntMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    )
}

#[derive(Serialize, Deserialize)]
struct CertificateDto {
    rank_z: usize,
    pi_q_free: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<i64>>,
    dense: bool,
    closure_dim: usize,
    normalizer: Vec<Vec<i64>>,
}

pub fn certificate_to_json(c: &DensityCertificate) -> Result<String> {
    let dto = CertificateDto {
        rank_z: c.rank_z,
        pi_q_free: c.pi_q_free,
        witness: c
            .witness
            .as_ref()
            .map(|w| w.iter().map(bigint_to_i64).collect::<Result<Vec<_>>>())
            .transpose()?,
        dense: c.dense,
        closure_dim: c.closure_dim,
        normalizer: int_matrix_to_rows(c.normalizer.matrix())?,
    };
    Ok(serde_json::to_string_pretty(&dto).expect("serializable"))
}

pub fn certificate_from_json(text: &str) -> Result<DensityCertificate> {
    let dto: CertificateDto =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("certificate JSON: {e}")))?;
    Ok(DensityCertificate {
        rank_z: dto.rank_z,
        pi_q_free: dto.pi_q_free,
        witness: dto
            .witness
            .map(|w| w.into_iter().map(BigInt::from).collect()),
        dense: dto.dense,
        closure_dim: dto.closure_dim,
        normalizer: LatticeChange::new(int_matrix_from_rows(&dto.normalizer)?)?,
    })
}

#[derive(Serialize, Deserialize)]
struct SymplecticDto {
    g: usize,
    entries: Vec<Vec<i64>>,
}

pub fn symplectic_to_json(m: &SymplecticMatrix) -> Result<String> {
    let dto = SymplecticDto {
        g: m.g(),
        entries: int_matrix_to_rows(m.matrix())?,
    };
    Ok(serde_json::to_string_pretty(&dto).expect("serializable"))
}

pub fn symplectic_from_json(text: &str) -> Result<SymplecticMatrix> {
    let dto: SymplecticDto =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("symplectic JSON: {e}")))?;
    let m = int_matrix_from_rows(&dto.entries)?;
    if m.rows() != 2 * dto.g {
        return Err(Error::Parse(format!(
            "declared g = {} but the matrix is {}x{}",
            dto.g,
            m.rows(),
            m.cols()
        )));
    }
    SymplecticMatrix::new(m)
}

#[derive(Serialize, Deserialize)]
struct FloatMatrixDto {
    n: usize,
    g: usize,
    entries: Vec<Vec<f64>>,
}

pub fn float_matrix_to_json(m: &FloatTorusMatrix) -> String {
    let entries = (0..m.n())
        .map(|i| (0..m.cols()).map(|j| m.entry(i, j)).collect())
        .collect();
    serde_json::to_string_pretty(&FloatMatrixDto {
        n: m.n(),
        g: m.g(),
        entries,
    })
    .expect("serializable")
}

pub fn float_matrix_from_json(text: &str) -> Result<FloatTorusMatrix> {
    let dto: FloatMatrixDto =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("float matrix JSON: {e}")))?;
    if dto.entries.len() != dto.n || dto.entries.iter().any(|r| r.len() != 2 * dto.g) {
        return Err(Error::Parse("entry shape does not match n, g".into()));
    }
    FloatTorusMatrix::new(dto.n, dto.g, dto.entries.into_iter().flatten().collect())
}

#[derive(Serialize, Deserialize)]
struct NormalFormDto {
    k: usize,
    h: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta_o: Option<ThetaDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q_block: Option<Vec<Vec<String>>>,
}

fn rat_matrix_to_rows(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(format_rational).collect())
        .collect()
}

pub fn normal_form_to_json(nf: &ClosureNormalForm) -> Result<String> {
    let theta_o = nf.theta_o.as_ref().map(|t| ThetaDto {
        n: t.n(),
        g: t.g(),
        symbols: t.table().symbols().to_vec(),
        entries: t
            .rows()
            .iter()
            .map(|row| row.iter().map(angle_to_dto).collect())
            .collect(),
    });
    let dto = NormalFormDto {
        k: nf.k,
        h: int_matrix_to_rows(nf.h.matrix())?,
        theta_o,
        q_block: nf.q_block.as_ref().map(rat_matrix_to_rows),
    };
    Ok(serde_json::to_string_pretty(&dto).expect("serializable"))
}
