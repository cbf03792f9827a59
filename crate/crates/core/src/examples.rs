//! Built-in example matrices, shipped so experiments and the CLI need no
//! external fixtures.
//!
//! Symbols stand for real numbers assumed linearly independent over Q
//! together with pi. In particular `u` denotes the angle of one radian and
//! `phi` the golden ratio; only their Q-independence from pi matters here.

use crate::angle::{Angle, SymbolTable, ThetaMatrix};
use crate::error::{Error, Result};

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 5] = ["ex-3.1", "ex-3.2", "app-A-2d", "app-A-nd", "class-D"];

/// Genus-2 matrix with both rows (phi, 0, phi, 0): Z-row rank one, so the
/// orbit closure is a coset family of the diagonal circle, never dense.
pub fn diagonal_genus2() -> ThetaMatrix {
    let table = SymbolTable::new(["phi"]).expect("fresh table");
    let phi = Angle::symbol(&table, "phi").expect("declared");
    let zero = Angle::zero(&table);
    let row = vec![phi.clone(), zero.clone(), phi, zero];
    ThetaMatrix::new(&table, 2, vec![row.clone(), row]).expect("2x4")
}

/// Genus-2 matrix with rows (phi, 0, phi, 0) and (0, phi, 0, phi): full
/// Z-row rank and pi*Q-free, hence dense.
pub fn split_genus2() -> ThetaMatrix {
    let table = SymbolTable::new(["phi"]).expect("fresh table");
    let phi = Angle::symbol(&table, "phi").expect("declared");
    let zero = Angle::zero(&table);
    ThetaMatrix::new(
        &table,
        2,
        vec![
            vec![phi.clone(), zero.clone(), phi.clone(), zero.clone()],
            vec![zero.clone(), phi.clone(), zero, phi],
        ],
    )
    .expect("2x4")
}

/// The 2-dimensional matrix [[u,u,0,...,0],[0,0,u,u,0,...,0]] where u is
/// one radian. Dense, yet no single curve image generates a dense subgroup:
/// every image has both coordinates rational multiples of u.
pub fn two_dim_no_curve(g: usize) -> Result<ThetaMatrix> {
    if g < 2 {
        return Err(Error::DimensionError(
            "the two-dimensional example needs genus at least 2".into(),
        ));
    }
    let table = SymbolTable::new(["u"])?;
    let u = Angle::symbol(&table, "u")?;
    let zero = Angle::zero(&table);
    let mut r1 = vec![zero.clone(); 2 * g];
    let mut r2 = vec![zero; 2 * g];
    r1[0] = u.clone();
    r1[1] = u.clone();
    r2[2] = u.clone();
    r2[3] = u;
    ThetaMatrix::new(&table, g, vec![r1, r2])
}

/// The n-dimensional variant: the 2-dimensional example on top, plus rows
/// with t3, ..., tn in the first column, where u, t3, ..., tn are
/// independent over Q. Dense with no dense curve, in every dimension.
pub fn n_dim_no_curve(n: usize, g: usize) -> Result<ThetaMatrix> {
    if n < 3 {
        return Err(Error::DimensionError(
            "the n-dimensional example needs n at least 3".into(),
        ));
    }
    if g < 2 {
        return Err(Error::DimensionError(
            "the n-dimensional example needs genus at least 2".into(),
        ));
    }
    let mut names = vec!["u".to_string()];
    for i in 3..=n {
        names.push(format!("t{i}"));
    }
    let table = SymbolTable::new(names)?;
    let u = Angle::symbol(&table, "u")?;
    let zero = Angle::zero(&table);
    let mut rows = Vec::with_capacity(n);
    let mut r1 = vec![zero.clone(); 2 * g];
    r1[0] = u.clone();
    r1[1] = u.clone();
    rows.push(r1);
    let mut r2 = vec![zero.clone(); 2 * g];
    r2[2] = u.clone();
    r2[3] = u;
    rows.push(r2);
    for i in 3..=n {
        let mut r = vec![zero.clone(); 2 * g];
        r[0] = Angle::symbol(&table, &format!("t{i}"))?;
        rows.push(r);
    }
    ThetaMatrix::new(&table, g, rows)
}

/// The class of matrices whose j-th row is lambda_j * (t1, ..., t{2g}) with
/// lambda_1 = 1 and the lambdas independent over Q. For generic values the
/// products lambda_j * t_k are themselves Q-independent reals, so each is
/// declared as its own symbol named "<lambda>_t<k>".
pub fn class_d(g: usize, n: usize, lambda_names: &[String]) -> Result<ThetaMatrix> {
    if g < 1 || n < 1 {
        return Err(Error::DimensionError("need g >= 1 and n >= 1".into()));
    }
    if lambda_names.len() != n.saturating_sub(1) {
        return Err(Error::DimensionError(format!(
            "expected {} lambda names for n = {n}, got {}",
            n - 1,
            lambda_names.len()
        )));
    }
    let mut names: Vec<String> = (1..=2 * g).map(|k| format!("t{k}")).collect();
    for lam in lambda_names {
        for k in 1..=2 * g {
            names.push(format!("{lam}_t{k}"));
        }
    }
    let table = SymbolTable::new(names)?;
    let mut rows = Vec::with_capacity(n);
    rows.push(
        (1..=2 * g)
            .map(|k| Angle::symbol(&table, &format!("t{k}")))
            .collect::<Result<Vec<_>>>()?,
    );
    for lam in lambda_names {
        rows.push(
            (1..=2 * g)
                .map(|k| Angle::symbol(&table, &format!("{lam}_t{k}")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    ThetaMatrix::new(&table, g, rows)
}

/// Parameters for [`builtin`]; unset fields fall back to per-example defaults.
#[derive(Debug, Clone, Default)]
pub struct BuiltinParams {
    pub g: Option<usize>,
    pub n: Option<usize>,
    pub lambdas: Option<Vec<String>>,
}

/// Look up a registry example by name.
pub fn builtin(name: &str, params: &BuiltinParams) -> Result<ThetaMatrix> {
    match name {
        "ex-3.1" => Ok(diagonal_genus2()),
        "ex-3.2" => Ok(split_genus2()),
        "app-A-2d" => two_dim_no_curve(params.g.unwrap_or(2)),
        "app-A-nd" => n_dim_no_curve(params.n.unwrap_or(4), params.g.unwrap_or(2)),
        "class-D" => {
            let n = params.n.unwrap_or(2);
            let g = params.g.unwrap_or(1);
            let default: Vec<String> = (2..=n).map(|j| format!("lam{j}")).collect();
            let lambdas = params.lambdas.as_deref().unwrap_or(&default);
            class_d(g, n, lambdas)
        }
        _ => Err(Error::Parse(format!("unknown example `{name}`"))),
    }
}

/// Standard numeric assignment used by the CLI when projecting a builtin
/// example to floats: phi is the golden ratio, u is one radian, everything
/// else gets a fixed irrational-looking default.
pub fn default_symbol_values(theta: &ThetaMatrix) -> std::collections::BTreeMap<String, f64> {
    let mut values = std::collections::BTreeMap::new();
    for (i, name) in theta.table().symbols().iter().enumerate() {
        let v = match name.as_str() {
            "phi" => (1.0 + 5.0f64.sqrt()) / 2.0,
            "u" => 1.0,
            _ => std::f64::consts::SQRT_2 + i as f64 * std::f64::consts::LN_2,
        };
        values.insert(name.clone(), v);
    }
    values
}
