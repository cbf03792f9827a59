//! Exact angles and angle matrices.
//!
//! An angle is a rational multiple of pi plus a rational combination of
//! user-declared symbols assumed linearly independent over Q (the
//! independence itself is asserted by the caller, never verified here).
//! Angles are kept canonical: the pi coefficient lives in [0, 2), symbol
//! coefficients are exact and unreduced until numeric projection.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parse a rational from "p/q" or plain integer "p" notation.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(n, d))
}

/// Format a rational as "p/q" (always with an explicit denominator).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Ordered registry of symbol names. Slot 0 is reserved for pi.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
}

impl SymbolTable {
    /// Build a table from the user symbols (pi is prepended automatically).
    pub fn new<I, S>(symbols: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names = vec!["pi".to_string()];
        for s in symbols {
            let s = s.into();
            if names.iter().any(|n| *n == s) {
                return Err(Error::Parse(format!("duplicate symbol `{s}`")));
            }
            names.push(s);
        }
        Ok(Arc::new(SymbolTable { names }))
    }

    /// Symbols excluding the reserved pi slot.
    pub fn symbols(&self) -> &[String] {
        &self.names[1..]
    }

    /// Number of user symbols (pi not counted).
    pub fn num_symbols(&self) -> usize {
        self.names.len() - 1
    }

    /// Slot of a user symbol (1-based; slot 0 is pi).
    pub fn slot(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name).filter(|&i| i > 0)
    }

    pub fn name(&self, slot: usize) -> &str {
        &self.names[slot]
    }
}

fn canonical_pi(r: &Rational) -> Rational {
    // reduce mod 2 into [0, 2)
    let two = Rational::from_integer(BigInt::from(2));
    let q = (r / &two).floor();
    r - q * two
}

/// Exact angle: pi_coeff * pi + sum coeff_s * s over declared symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Angle {
    table: Arc<SymbolTable>,
    pi_coeff: Rational,
    sym_coeffs: BTreeMap<usize, Rational>,
}

impl Angle {
    /// Canonical angle from a pi coefficient and named symbol coefficients.
    pub fn new<'a, I>(table: &Arc<SymbolTable>, pi_coeff: Rational, syms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, Rational)>,
    {
        let mut sym_coeffs = BTreeMap::new();
        for (name, coeff) in syms {
            let slot = table
                .slot(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            if !coeff.is_zero() {
                let entry = sym_coeffs.entry(slot).or_insert_with(Rational::zero);
                *entry += coeff;
                if entry.is_zero() {
                    sym_coeffs.remove(&slot);
                }
            }
        }
        Ok(Angle {
            table: Arc::clone(table),
            pi_coeff: canonical_pi(&pi_coeff),
            sym_coeffs,
        })
    }

    pub fn zero(table: &Arc<SymbolTable>) -> Self {
        Angle {
            table: Arc::clone(table),
            pi_coeff: Rational::zero(),
            sym_coeffs: BTreeMap::new(),
        }
    }

    /// pi/2, pi, ... convenience: coefficient of pi only.
    pub fn pi_times(table: &Arc<SymbolTable>, r: Rational) -> Self {
        Angle {
            table: Arc::clone(table),
            pi_coeff: canonical_pi(&r),
            sym_coeffs: BTreeMap::new(),
        }
    }

    /// A single symbol with unit coefficient.
    pub fn symbol(table: &Arc<SymbolTable>, name: &str) -> Result<Self> {
        Angle::new(table, Rational::zero(), [(name, Rational::one())])
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn pi_coeff(&self) -> &Rational {
        &self.pi_coeff
    }

    pub fn sym_coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.sym_coeffs
    }

    /// Coefficient of the symbol in the given slot (zero if absent).
    pub fn sym_coeff(&self, slot: usize) -> Rational {
        self.sym_coeffs.get(&slot).cloned().unwrap_or_else(Rational::zero)
    }

    /// True iff the angle is a rational multiple of pi.
    pub fn is_pi_rational(&self) -> bool {
        self.sym_coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.pi_coeff.is_zero() && self.sym_coeffs.is_empty()
    }

    pub fn add(&self, other: &Angle) -> Result<Angle> {
        if self.table != other.table {
            return Err(Error::TableMismatch);
        }
        let mut sym_coeffs = self.sym_coeffs.clone();
        for (slot, c) in &other.sym_coeffs {
            let entry = sym_coeffs.entry(*slot).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                sym_coeffs.remove(slot);
            }
        }
        Ok(Angle {
            table: Arc::clone(&self.table),
            pi_coeff: canonical_pi(&(&self.pi_coeff + &other.pi_coeff)),
            sym_coeffs,
        })
    }

    /// Integer multiple, reduced to canonical form.
    pub fn scale(&self, k: &BigInt) -> Angle {
        let kr = Rational::from_integer(k.clone());
        let mut sym_coeffs = BTreeMap::new();
        for (slot, c) in &self.sym_coeffs {
            let v = c * &kr;
            if !v.is_zero() {
                sym_coeffs.insert(*slot, v);
            }
        }
        Angle {
            table: Arc::clone(&self.table),
            pi_coeff: canonical_pi(&(&self.pi_coeff * &kr)),
            sym_coeffs,
        }
    }

    /// Numeric value given symbol assignments, reduced into [0, 2*pi).
    pub fn to_float(&self, values: &BTreeMap<String, f64>) -> Result<f64> {
        let mut v = rational_to_f64(&self.pi_coeff) * std::f64::consts::PI;
        for (slot, c) in &self.sym_coeffs {
            let name = self.table.name(*slot);
            let x = values
                .get(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            v += rational_to_f64(c) * x;
        }
        Ok(v.rem_euclid(2.0 * std::f64::consts::PI))
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    let n = r.numer();
    let d = r.denom();
    // exact for desk-scale coefficients; falls back to string parse on overflow
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(n), Ok(d)) => n as f64 / d as f64,
        _ => {
            let n: f64 = n.to_string().parse().unwrap_or(f64::NAN);
            let d: f64 = d.to_string().parse().unwrap_or(f64::NAN);
            n / d
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.pi_coeff.is_zero() {
            parts.push(format!("{}*pi", self.pi_coeff));
        }
        for (slot, c) in &self.sym_coeffs {
            parts.push(format!("{}*{}", c, self.table.name(*slot)));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Column of generator images: a point of T^n lifted entrywise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleVector {
    entries: Vec<Angle>,
}

impl AngleVector {
    pub fn new(entries: Vec<Angle>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionError("empty angle vector".into()));
        }
        Ok(AngleVector { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Angle] {
        &self.entries
    }
}

/// The n x 2g matrix of angle lifts of the generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaMatrix {
    table: Arc<SymbolTable>,
    n: usize,
    g: usize,
    entries: Vec<Vec<Angle>>, // n rows of 2g angles
}

impl ThetaMatrix {
    pub fn new(table: &Arc<SymbolTable>, g: usize, rows: Vec<Vec<Angle>>) -> Result<Self> {
        if g < 1 {
            return Err(Error::DimensionError("genus must be at least 1".into()));
        }
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionError("torus dimension must be at least 1".into()));
        }
        for row in &rows {
            if row.len() != 2 * g {
                return Err(Error::DimensionError(format!(
                    "row length {} does not match 2g = {}",
                    row.len(),
                    2 * g
                )));
            }
            for a in row {
                if a.table() != table {
                    return Err(Error::TableMismatch);
                }
            }
        }
        Ok(ThetaMatrix {
            table: Arc::clone(table),
            n,
            g,
            entries: rows,
        })
    }

    /// Build from the ordered generator images a_1, b_1, ..., a_g, b_g.
    pub fn from_generators(images: &[AngleVector], g: usize) -> Result<Self> {
        if images.len() != 2 * g {
            return Err(Error::DimensionError(format!(
                "expected {} generator images, got {}",
                2 * g,
                images.len()
            )));
        }
        let n = images[0].len();
        if images.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionError("generator images of unequal length".into()));
        }
        let table = images[0].entries()[0].table().clone();
        let rows = (0..n)
            .map(|i| (0..2 * g).map(|j| images[j].entries()[i].clone()).collect())
            .collect();
        ThetaMatrix::new(&table, g, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn cols(&self) -> usize {
        2 * self.g
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn entry(&self, i: usize, j: usize) -> &Angle {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<Angle>] {
        &self.entries
    }

    /// Column j as the image of the j-th generator.
    pub fn column(&self, j: usize) -> AngleVector {
        AngleVector {
            entries: (0..self.n).map(|i| self.entries[i][j].clone()).collect(),
        }
    }

    /// The image of the word with exponent vector k: Theta * k mod 2*pi.
    pub fn evaluate_word(&self, k: &[BigInt]) -> Result<AngleVector> {
        if k.len() != 2 * self.g {
            return Err(Error::DimensionError(format!(
                "exponent vector length {} does not match 2g = {}",
                k.len(),
                2 * self.g
            )));
        }
        let mut out = Vec::with_capacity(self.n);
        for row in &self.entries {
            let mut acc = Angle::zero(&self.table);
            for (a, e) in row.iter().zip(k) {
                acc = acc.add(&a.scale(e))?;
            }
            out.push(acc);
        }
        Ok(AngleVector { entries: out })
    }
}
