//! Invariant potentials for symmetry groups of dimension two to four, with
//! and without the Noether restriction.
//!
//! Each row stores its potentials as expression patterns in the profile
//! placeholders `F1, F2, F3, G`, the invariant arguments `u` (or `u1, u2`),
//! the shorthands `phi, rho, r` and the row constants.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{DomainHint, FieldError, FieldSpec};
use crate::expr::{parse, Expr, VecExpr};
use crate::liealg::SymGenerator;
use crate::optimal::Params;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogTable {
    Sym2,
    Sym3,
    Sym4,
    Noe2,
    Noe3,
    Noe4,
}

impl CatalogTable {
    pub const ALL: [CatalogTable; 6] = [
        CatalogTable::Sym2,
        CatalogTable::Sym3,
        CatalogTable::Sym4,
        CatalogTable::Noe2,
        CatalogTable::Noe3,
        CatalogTable::Noe4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogTable::Sym2 => "sym2",
            CatalogTable::Sym3 => "sym3",
            CatalogTable::Sym4 => "sym4",
            CatalogTable::Noe2 => "noe2",
            CatalogTable::Noe3 => "noe3",
            CatalogTable::Noe4 => "noe4",
        }
    }

    pub fn from_name(s: &str) -> Option<CatalogTable> {
        CatalogTable::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Position of the table in the printed sequence, counting the three
    /// optimal-system tables first.
    pub fn number(self) -> usize {
        5 + CatalogTable::ALL.iter().position(|t| *t == self).unwrap()
    }

    pub fn is_noether(self) -> bool {
        matches!(self, CatalogTable::Noe2 | CatalogTable::Noe3 | CatalogTable::Noe4)
    }

    /// Number of symmetry generators besides time translation.
    pub fn dim(self) -> usize {
        match self {
            CatalogTable::Sym2 | CatalogTable::Noe2 => 1,
            CatalogTable::Sym3 | CatalogTable::Noe3 => 2,
            CatalogTable::Sym4 | CatalogTable::Noe4 => 3,
        }
    }
}

impl fmt::Display for CatalogTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which form of a row to build. Rows without a known misprint have only
/// the printed form, and `Corrected` falls back to it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Printed,
    Corrected,
}

pub struct CatalogRow {
    pub table: CatalogTable,
    pub row: usize,
    pub params: &'static [&'static str],
    pub condition: &'static str,
    pub admissible: fn(&Params) -> bool,
    /// Claimed generators, as linear combinations of `v1..v8`.
    pub generators: &'static [&'static str],
    pub a: [&'static str; 3],
    pub phi: &'static str,
    /// Invariant arguments substituted for `u` or `u1, u2`.
    pub args: &'static [(&'static str, &'static str)],
    pub corrected: Option<[&'static str; 4]>,
    /// Known defect of the printed form.
    pub issue: Option<&'static str>,
}

impl CatalogRow {
    pub fn id(&self) -> String {
        format!("{}-row{}", self.table, self.row)
    }

    pub fn label(&self) -> String {
        format!("Table {} row {}", self.table.number(), self.row)
    }

    pub fn generators(&self, p: &Params) -> Vec<SymGenerator> {
        self.generators.iter().map(|s| combination(s, p)).collect()
    }

    fn two_args(&self) -> bool {
        self.args.iter().any(|(n, _)| *n == "u1")
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("no row {1} in table {0}")]
    NoRow(CatalogTable, usize),
    #[error("side condition violated: {0}")]
    Condition(String),
    #[error("profile {0} uses undefined symbols {1:?}")]
    Profile(String, Vec<String>),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A catalog row together with its constants, profile choices and variant.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogKey {
    pub table: CatalogTable,
    pub row: usize,
    /// Overrides of the default constants.
    pub params: Params,
    /// Overrides of the default profiles, keyed by `F1`, `F2`, `F3`, `G`.
    pub profiles: BTreeMap<String, Expr>,
    pub variant: Variant,
}

impl CatalogKey {
    pub fn new(table: CatalogTable, row: usize) -> CatalogKey {
        CatalogKey {
            table,
            row,
            params: Params::new(),
            profiles: BTreeMap::new(),
            variant: Variant::Printed,
        }
    }

    pub fn param(mut self, name: &str, v: Scalar) -> CatalogKey {
        self.params.insert(name.to_string(), v);
        self
    }

    /// Panics if `src` does not parse; meant for literals.
    pub fn profile(mut self, name: &str, src: &str) -> CatalogKey {
        self.profiles.insert(name.to_string(), parse(src).expect("profile parses"));
        self
    }

    pub fn variant(mut self, v: Variant) -> CatalogKey {
        self.variant = v;
        self
    }

    /// Defaults overlaid with the key's own constants.
    pub fn resolved_params(&self) -> Params {
        let mut p = default_params();
        p.extend(self.params.clone());
        p
    }
}

fn p(s: &str) -> Expr {
    parse(s).unwrap_or_else(|e| panic!("built-in pattern {s:?}: {e}"))
}

pub fn default_params() -> Params {
    let r = Scalar::ratio;
    [
        ("k", r(3, 2)),
        ("k1", r(3, 2)),
        ("k2", r(-1, 3)),
        ("k3", r(2, 5)),
        ("lambda", r(1, 2)),
        ("lambda1", r(1, 3)),
        ("lambda2", r(-2, 5)),
        ("lambda3", r(3, 4)),
        ("lambda4", r(1, 5)),
        ("lambda5", r(-1, 2)),
        ("lambda6", r(2, 3)),
        ("a1", Scalar::one()),
        ("a2", r(1, 3)),
        ("a3", r(-1, 2)),
        ("a4", r(2, 3)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

fn default_profile(name: &str, two_args: bool) -> Expr {
    let src = match (name, two_args) {
        ("F1", true) => "sin(u1) + u2/3",
        ("F2", true) => "cos(u2) + u1^2/4",
        ("F3", true) => "u1*u2/2 + 1/5",
        ("G", true) => "u1^2/3 - u2/7",
        ("F1", false) => "sin(u) + 1/3",
        ("F2", false) => "u^2/4 + 1/2",
        ("F3", false) => "cos(u)/2 + u/5",
        _ => "u^2/3 - u/7",
    };
    p(src)
}

/// `Σ coef·v_i` from a string such as `v4 + k1*v7 + k2*v8`, with the row
/// constants bound from `params`.
fn combination(src: &str, params: &Params) -> SymGenerator {
    let e = p(src).bind_params(params);
    let mut g = SymGenerator::zero();
    for i in 1..=8 {
        let mut c = e.clone();
        for j in 1..=8 {
            let v = if i == j { Expr::one() } else { Expr::zero() };
            c = c.substitute_param(&format!("v{j}"), &v);
        }
        g.c[i - 1] = c.simplify().as_scalar().unwrap_or_else(|| panic!("coefficient of v{i} in {src:?}"));
    }
    g
}

fn q(p: &Params, name: &str) -> Scalar {
    p.get(name).cloned().unwrap_or_else(Scalar::zero)
}

fn nz(p: &Params, name: &str) -> bool {
    !q(p, name).is_zero()
}

fn is(p: &Params, name: &str, num: i64, den: i64) -> bool {
    q(p, name) == Scalar::ratio(num, den)
}

fn any(_: &Params) -> bool {
    true
}

const ROT1: &str = "x*F1 - y*F2";
const ROT2: &str = "y*F1 + x*F2";

macro_rules! row {
    ($t:ident, $n:expr, [$($par:expr),*], $cond:expr, $adm:expr, [$($g:expr),+], [$a1:expr, $a2:expr, $a3:expr], $phi:expr, [$(($u:expr, $ue:expr)),*]) => {
        CatalogRow {
            table: CatalogTable::$t,
            row: $n,
            params: &[$($par),*],
            condition: $cond,
            admissible: $adm,
            generators: &[$($g),+],
            a: [$a1, $a2, $a3],
            phi: $phi,
            args: &[$(($u, $ue)),*],
            corrected: None,
            issue: None,
        }
    };
}

const UV_POLAR_Z: [(&str, &str); 2] = [("u1", "rho/z"), ("u2", "ln(z) - k1*phi")];

fn sym2() -> Vec<CatalogRow> {
    vec![
        CatalogRow {
            args: &UV_POLAR_Z,
            ..row!(Sym2, 1, ["k1", "k2"], "k2 != k1 != 0", |p| nz(p, "k1") && q(p, "k1") != q(p, "k2"),
                ["v4 + k1*v7 + k2*v8"],
                ["z^(-k2/k1)*(x*F1 - y*F2)", "z^(-k2/k1)*(y*F1 + x*F2)", "z^(1 - k2/k1)*F3"],
                "z^(2*(1 - k2/k1))*G", [])
        },
        row!(Sym2, 2, ["k", "lambda"], "k != 0", |p| nz(p, "k"),
            ["v4 + k*v7 + k*v8"],
            ["(x*F1 - y*F2)/z", "(y*F1 + x*F2)/z", "F3"],
            "lambda*ln(z) + G", [("u1", "rho/z"), ("u2", "ln(z) - k*phi")]),
        row!(Sym2, 3, ["k1", "k2"], "k2 != 0", |p| nz(p, "k2"),
            ["v4 + k1*v3 + k2*v8"],
            ["exp(-k2*phi)*(x*F1 - y*F2)", "exp(-k2*phi)*(y*F1 + x*F2)", "exp(-k2*phi)*F3"],
            "exp(-2*k2*phi)*G", [("u1", "rho"), ("u2", "z - k1*phi")]),
        row!(Sym2, 4, ["k", "lambda"], "", any,
            ["v4 + k*v3"],
            [ROT1, ROT2, "F3"],
            "lambda*phi + G", [("u1", "rho"), ("u2", "z - k*phi")]),
        row!(Sym2, 5, ["k"], "k != 1", |p| !is(p, "k", 1, 1),
            ["v7 + k*v8"],
            ["x^(1 - k)*F1", "x^(1 - k)*F2", "x^(1 - k)*F3"],
            "x^(2*(1 - k))*G", [("u1", "y/x"), ("u2", "z/y")]),
        row!(Sym2, 6, ["lambda"], "", any,
            ["v7 + v8"],
            ["F1", "F2", "F3"],
            "lambda*ln(z) + G", [("u1", "y/x"), ("u2", "z/y")]),
        row!(Sym2, 7, ["k"], "k != 0", |p| nz(p, "k"),
            ["v3 + k*v8"],
            ["exp(-k*z)*F1", "exp(-k*z)*F2", "exp(-k*z)*F3"],
            "exp(-2*k*z)*G", [("u1", "x"), ("u2", "y")]),
        row!(Sym2, 8, ["lambda"], "", any,
            ["v3"],
            ["F1", "F2", "F3"],
            "lambda*z + G", [("u1", "x"), ("u2", "y")]),
    ]
}

fn sym3() -> Vec<CatalogRow> {
    vec![
        row!(Sym3, 1, ["k1", "k2"], "2*k2, k2 != k1 != 0",
            |p| nz(p, "k1") && q(p, "k1") != q(p, "k2") && q(p, "k1") != &q(p, "k2") * &Scalar::int(2),
            ["v3", "v4 + k1*v7 + k2*v8"],
            ["exp(-k2*phi)*(x*F1 - y*F2)", "exp(-k2*phi)*(y*F1 + x*F2)", "exp((k1 - k2)*phi)*F3"],
            "exp(2*(k1 - k2)*phi)*G", [("u", "ln(rho) - k1*phi")]),
        row!(Sym3, 2, ["k", "lambda"], "k != 0", |p| nz(p, "k"),
            ["v3", "v4 + 2*k*v7 + k*v8"],
            ["exp(-k*phi)*(x*F1 - y*F2)", "exp(-k*phi)*(y*F1 + x*F2)", "exp(k*phi)*F3"],
            "lambda*z + exp(2*k*phi)*G", [("u", "ln(rho) - 2*k*phi")]),
        row!(Sym3, 3, ["k", "lambda1", "lambda2"], "k != 0", |p| nz(p, "k"),
            ["v3", "v4 + k*v7 + k*v8"],
            ["(x*F1 - y*(F2 + lambda1*z/rho))/rho", "(y*F1 + x*(F2 + lambda1*z/rho))/rho", "F3"],
            "lambda2*ln(rho) + G", [("u", "ln(rho) - k*phi")]),
        row!(Sym3, 4, ["k1", "k2"], "k1 != 0 or k2 != 0", |p| nz(p, "k1") || nz(p, "k2"),
            ["v3 + k1*v8", "v4 + k2*v8"],
            ["exp(-(k1*z + k2*phi))*(x*F1 - y*F2)", "exp(-(k1*z + k2*phi))*(y*F1 + x*F2)", "exp(-(k1*z + k2*phi))*F3"],
            "exp(-2*(k1*z + k2*phi))*G", [("u", "rho")]),
        CatalogRow {
            corrected: Some([
                "x*F1 - y*F2 - lambda3*y*z/rho^2",
                "y*F1 + x*F2 + lambda3*x*z/rho^2",
                "F3",
                "lambda1*z + lambda2*phi + G",
            ]),
            issue: Some("printed A2 carries lambda3*y*z/rho^2; the Noether counterpart has lambda3*x*z/rho^2"),
            ..row!(Sym3, 5, ["lambda1", "lambda2", "lambda3"], "", any,
                ["v3", "v4"],
                ["x*F1 - y*F2 - lambda3*y*z/rho^2", "y*F1 + x*F2 + lambda3*y*z/rho^2", "F3"],
                "lambda1*z + lambda2*phi + G", [("u", "rho")])
        },
        row!(Sym3, 6, ["k1", "k2"], "k1 != 0 or k2 != 1, 2",
            |p| nz(p, "k1") || !(is(p, "k2", 1, 1) || is(p, "k2", 2, 1)),
            ["v4 + k1*v8", "v7 + k2*v8"],
            ["z^(-k2)*exp(-k1*phi)*(x*F1 - y*F2)", "z^(-k2)*exp(-k1*phi)*(y*F1 + x*F2)", "z^(1 - k2)*exp(-k1*phi)*F3"],
            "z^(2*(1 - k2))*exp(-2*k1*phi)*G", [("u", "rho/z")]),
        row!(Sym3, 7, ["lambda1", "lambda2"], "", any,
            ["v4", "v7 + v8"],
            ["(x*F1 - y*F2)/z", "(y*F1 + x*F2)/z", "F3"],
            "lambda1*phi + lambda2*ln(z) + G", [("u", "rho/z")]),
        row!(Sym3, 8, ["lambda"], "", any,
            ["v4", "v7 + 2*v8"],
            ["(x*F1 - y*(F2 + lambda*ln(rho)))/rho^2", "(y*F1 + x*(F2 + lambda*ln(rho)))/rho^2", "F3/z"],
            "G/z^2", [("u", "rho/z")]),
        row!(Sym3, 9, ["k"], "k != 1, 1/2", |p| !(is(p, "k", 1, 1) || is(p, "k", 1, 2)),
            ["v3", "v7 + k*v8"],
            ["x^(1 - k)*F1", "x^(1 - k)*F2", "x^(1 - k)*F3"],
            "x^(2*(1 - k))*G", [("u", "y/x")]),
        row!(Sym3, 10, ["lambda1", "lambda2"], "", any,
            ["v3", "v7 + v8"],
            ["F1", "F2", "lambda1*ln(y) + F3"],
            "lambda2*ln(y) + G", [("u", "y/x")]),
        row!(Sym3, 11, ["lambda"], "", any,
            ["v3", "2*v7 + v8"],
            ["sqrt(x)*F1", "sqrt(x)*F2", "sqrt(x)*F3"],
            "lambda*z + x*G", [("u", "y/x")]),
        row!(Sym3, 12, ["k1", "k2"], "k2 != 0", |p| nz(p, "k2"),
            ["v2 + k1*v8", "v3 + k2*v8"],
            ["exp(-(k1*y + k2*z))*F1", "exp(-(k1*y + k2*z))*F2", "exp(-(k1*y + k2*z))*F3"],
            "exp(-2*(k1*y + k2*z))*G", [("u", "x")]),
        row!(Sym3, 13, ["lambda1", "lambda2", "lambda3"], "", any,
            ["v2", "v3"],
            ["0", "F2", "lambda3*y + F3"],
            "lambda1*y + lambda2*z + G", [("u", "x")]),
    ]
}

const LN_Z_ISSUE: &str = "ln(z/k) in the phase is invariant only for k = 1; ln(z)/k is";

fn sym4() -> Vec<CatalogRow> {
    vec![
        row!(Sym4, 1, ["k1", "k2", "a1", "a2", "a3", "a4"], "k1 != 0 or k2 != 1/2, 1, 2",
            |p| nz(p, "k1") || !(is(p, "k2", 1, 2) || is(p, "k2", 1, 1) || is(p, "k2", 2, 1)),
            ["v3", "v4 + k1*v8", "v7 + k2*v8"],
            ["exp(-k1*phi)*rho^(-k2)*(a1*x - a2*y)", "exp(-k1*phi)*rho^(-k2)*(a1*y + a2*x)", "a3*exp(-k1*phi)*rho^(1 - k2)"],
            "a4*exp(-2*k1*phi)*rho^(2*(1 - k2))", []),
        row!(Sym4, 2, ["lambda", "a1", "a2", "a3", "a4"], "", any,
            ["v3", "v4", "2*v7 + v8"],
            ["(a1*x - a2*y)/sqrt(rho)", "(a1*y + a2*x)/sqrt(rho)", "a3*sqrt(rho)"],
            "lambda*z + a4*rho", []),
        row!(Sym4, 3, ["lambda1", "lambda2", "lambda3", "lambda4", "a1", "a2"], "", any,
            ["v3", "v4", "v7 + v8"],
            ["(a1*x - y*(a2 + lambda1*z/rho))/rho", "(a1*y + x*(a2 + lambda1*z/rho))/rho", "lambda2*ln(rho)"],
            "lambda3*phi + lambda4*ln(rho)", []),
        row!(Sym4, 4, ["lambda", "a1", "a2", "a3", "a4"], "", any,
            ["v3", "v4", "v7 + 2*v8"],
            ["(a1*x - y*(a2 + lambda*ln(rho)))/rho^2", "(a1*y + x*(a2 + lambda*ln(rho)))/rho^2", "a3/rho"],
            "a4/rho^2", []),
        row!(Sym4, 5, ["lambda"], "", any,
            ["v4", "v5", "v6"],
            ["lambda*y*z/(r*rho^2)", "-lambda*x*z/(r*rho^2)", "0"],
            "G", [("u", "r")]),
        CatalogRow {
            corrected: Some([
                "a1*z^(1 - k2/k1)*cos(ln(z)/k1 + a2)",
                "a1*z^(1 - k2/k1)*sin(ln(z)/k1 + a2)",
                "0",
                "a4*z^(2*(1 - k2/k1))",
            ]),
            issue: Some(LN_Z_ISSUE),
            ..row!(Sym4, 6, ["k1", "k2", "a1", "a2", "a4"], "k1*k2 != 0, k1 != k2",
                |p| nz(p, "k1") && nz(p, "k2") && q(p, "k1") != q(p, "k2"),
                ["v1", "v2", "v4 + k1*v7 + k2*v8"],
                ["a1*z^(1 - k2/k1)*cos(ln(z/k1) + a2)", "a1*z^(1 - k2/k1)*sin(ln(z/k1) + a2)", "0"],
                "a4*z^(2*(1 - k2/k1))", [])
        },
        CatalogRow {
            corrected: Some([
                "a1*z*cos(ln(z)/k + a2) + lambda*y",
                "a1*z*sin(ln(z)/k + a2)",
                "0",
                "a4*z^2",
            ]),
            issue: Some(LN_Z_ISSUE),
            ..row!(Sym4, 7, ["k", "lambda", "a1", "a2", "a4"], "k != 0", |p| nz(p, "k"),
                ["v1", "v2", "v4 + k*v7"],
                ["a1*z*cos(ln(z/k) + a2) + lambda*y", "a1*z*sin(ln(z/k) + a2)", "0"],
                "a4*z^2", [])
        },
        CatalogRow {
            corrected: Some(["a1*cos(ln(z)/k + a2)", "a1*sin(ln(z)/k + a2)", "0", "lambda*ln(z)"]),
            issue: Some(LN_Z_ISSUE),
            ..row!(Sym4, 8, ["k", "lambda", "a1", "a2"], "k != 0", |p| nz(p, "k"),
                ["v1", "v2", "v4 + k*v7 + k*v8"],
                ["a1*cos(ln(z/k) + a2)", "a1*sin(ln(z/k) + a2)", "0"],
                "lambda*ln(z)", [])
        },
        row!(Sym4, 9, ["k1", "k2", "a1", "a2", "a4"], "k1*k2 != 0", |p| nz(p, "k1") && nz(p, "k2"),
            ["v1", "v2", "v4 + k1*v3 + k2*v8"],
            ["a1*exp(-k2/k1*z)*cos(z/k1 + a2)", "a1*exp(-k2/k1*z)*sin(z/k1 + a2)", "0"],
            "a4*exp(-2*k2/k1*z)", []),
        row!(Sym4, 10, ["k", "lambda1", "lambda2", "a1", "a2"], "k != 0", |p| nz(p, "k"),
            ["v1", "v2", "v4 + k*v3"],
            ["a1*cos(z/k + a2) + lambda1*y", "a1*sin(z/k + a2)", "0"],
            "lambda2*z/k", []),
        row!(Sym4, 11, ["k", "a2", "a3", "a4"], "k != 0, 1/2, 1",
            |p| nz(p, "k") && !(is(p, "k", 1, 2) || is(p, "k", 1, 1)),
            ["v2", "v3", "v7 + k*v8"],
            ["0", "a2*x^(1 - k)", "a3*x^(1 - k)"],
            "a4*x^(2*(1 - k))", []),
        row!(Sym4, 12, ["lambda", "a2", "a3", "a4"], "", any,
            ["v2", "v3", "v7"],
            ["0", "a2*x", "a3*x + lambda*y"],
            "a4*x^2", []),
        row!(Sym4, 13, ["lambda1", "lambda2", "a2", "a3", "a4"], "", any,
            ["v2", "v3", "2*v7 + v8"],
            ["0", "a2*sqrt(x)", "a3*sqrt(x)"],
            "a4*x + lambda1*y + lambda2*z", []),
        row!(Sym4, 14, ["lambda1", "lambda2", "lambda3"], "", any,
            ["v2", "v3", "v7 + v8"],
            ["0", "lambda2*ln(x)", "lambda3*ln(x)"],
            "lambda1*ln(x)", []),
        row!(Sym4, 15, ["k1", "k2", "k3", "a1", "a2", "a3", "a4"], "k3 != 0", |p| nz(p, "k3"),
            ["v1 + k1*v8", "v2 + k2*v8", "v3 + k3*v8"],
            ["a1*exp(-(k1*x + k2*y + k3*z))", "a2*exp(-(k1*x + k2*y + k3*z))", "a3*exp(-(k1*x + k2*y + k3*z))"],
            "a4*exp(-2*(k1*x + k2*y + k3*z))", []),
        row!(Sym4, 16, ["lambda1", "lambda2", "lambda3", "lambda4", "lambda5", "lambda6"], "", any,
            ["v1", "v2", "v3"],
            ["0", "lambda4*x", "lambda5*x + lambda6*y"],
            "lambda1*x + lambda2*y + lambda3*z", []),
    ]
}

fn noe2() -> Vec<CatalogRow> {
    vec![
        row!(Noe2, 1, ["k"], "k != 0", |p| nz(p, "k"),
            ["v4 + k*v7 + 2*k*v8"],
            ["(x*F1 - y*F2)/z^2", "(y*F1 + x*F2)/z^2", "F3/z"],
            "G/z^2", [("u1", "rho/z"), ("u2", "ln(z) - k*phi")]),
        row!(Noe2, 2, ["k", "lambda"], "", any,
            ["v4 + k*v3"],
            [ROT1, ROT2, "F3"],
            "lambda*phi + G", [("u1", "rho"), ("u2", "z - k*phi")]),
        row!(Noe2, 3, [], "", any,
            ["v7 + 2*v8"],
            ["F1/x", "F2/x", "F3/x"],
            "G/x^2", [("u1", "y/x"), ("u2", "z/y")]),
        row!(Noe2, 4, ["lambda"], "", any,
            ["v3"],
            ["F1", "F2", "F3"],
            "lambda*z + G", [("u1", "x"), ("u2", "y")]),
    ]
}

fn noe3() -> Vec<CatalogRow> {
    vec![
        row!(Noe3, 1, ["k"], "k != 0", |p| nz(p, "k"),
            ["v3", "v4 + k*v7 + 2*k*v8"],
            ["exp(-2*k*phi)*(x*F1 - y*F2)", "exp(-2*k*phi)*(y*F1 + x*F2)", "exp(-k*phi)*F3"],
            "exp(-2*k*phi)*G", [("u", "ln(rho) - k*phi")]),
        row!(Noe3, 2, ["lambda1", "lambda2", "lambda3"], "", any,
            ["v3", "v4"],
            ["x*F1 - y*F2 - lambda3*y*z/rho^2", "y*F1 + x*F2 + lambda3*x*z/rho^2", "F3"],
            "lambda1*z + lambda2*phi + G", [("u", "rho")]),
        row!(Noe3, 3, ["lambda"], "", any,
            ["v4", "v7 + 2*v8"],
            ["(x*F1 - y*(F2 + lambda*ln(rho)))/rho^2", "(y*F1 + x*(F2 + lambda*ln(rho)))/rho^2", "F3/z"],
            "G/z^2", [("u", "rho/z")]),
        row!(Noe3, 4, [], "", any,
            ["v3", "v7 + 2*v8"],
            ["F1/x", "F2/x", "F3/x"],
            "G/x^2", [("u", "y/x")]),
        row!(Noe3, 5, ["lambda1", "lambda2", "lambda3"], "", any,
            ["v2", "v3"],
            ["0", "F2", "lambda3*y + F3"],
            "lambda1*y + lambda2*z + G", [("u", "x")]),
    ]
}

fn noe4() -> Vec<CatalogRow> {
    vec![
        row!(Noe4, 1, ["lambda", "a1", "a2", "a3", "a4"], "", any,
            ["v3", "v4", "v7 + 2*v8"],
            ["(a1*x - y*(a2 + lambda*ln(rho)))/rho^2", "(a1*y + x*(a2 + lambda*ln(rho)))/rho^2", "a3/rho"],
            "a4/rho^2", []),
        row!(Noe4, 2, ["lambda"], "", any,
            ["v4", "v5", "v6"],
            ["lambda*y*z/(r*rho^2)", "-lambda*x*z/(r*rho^2)", "0"],
            "G", [("u", "r")]),
        CatalogRow {
            corrected: Some(["a1*cos(ln(z)/k + a2)/z", "a1*sin(ln(z)/k + a2)/z", "0", "a4/z^2"]),
            issue: Some(LN_Z_ISSUE),
            ..row!(Noe4, 3, ["k", "a1", "a2", "a4"], "k != 0", |p| nz(p, "k"),
                ["v1", "v2", "v4 + k*v7 + 2*k*v8"],
                ["a1*cos(ln(z/k) + a2)/z", "a1*sin(ln(z/k) + a2)/z", "0"],
                "a4/z^2", [])
        },
        row!(Noe4, 4, ["k", "lambda1", "lambda2", "a1", "a2"], "k != 0", |p| nz(p, "k"),
            ["v1", "v2", "v4 + k*v3"],
            ["a1*cos(z/k + a2) + lambda1*y", "a1*sin(z/k + a2)", "0"],
            "lambda2*z/k", []),
        row!(Noe4, 5, ["a2", "a3", "a4"], "", any,
            ["v2", "v3", "v7 + 2*v8"],
            ["0", "a2/x", "a3/x"],
            "a4/x^2", []),
        row!(Noe4, 6, ["lambda1", "lambda2", "lambda3", "lambda4", "lambda5", "lambda6"], "", any,
            ["v1", "v2", "v3"],
            ["0", "lambda4*x", "lambda5*x + lambda6*y"],
            "lambda1*x + lambda2*y + lambda3*z", []),
    ]
}

pub fn catalog(table: CatalogTable) -> Vec<CatalogRow> {
    match table {
        CatalogTable::Sym2 => sym2(),
        CatalogTable::Sym3 => sym3(),
        CatalogTable::Sym4 => sym4(),
        CatalogTable::Noe2 => noe2(),
        CatalogTable::Noe3 => noe3(),
        CatalogTable::Noe4 => noe4(),
    }
}

pub fn catalog_row(table: CatalogTable, row: usize) -> Option<CatalogRow> {
    catalog(table).into_iter().find(|r| r.row == row)
}

pub fn catalog_instance(key: &CatalogKey) -> Result<FieldSpec, CatalogError> {
    let row = catalog_row(key.table, key.row).ok_or(CatalogError::NoRow(key.table, key.row))?;
    let params = key.resolved_params();
    if !(row.admissible)(&params) {
        return Err(CatalogError::Condition(format!("{}: {}", row.label(), row.condition)));
    }
    let [a1, a2, a3, phi] = match (key.variant, row.corrected) {
        (Variant::Corrected, Some(c)) => c,
        _ => [row.a[0], row.a[1], row.a[2], row.phi],
    };
    let two = row.two_args();
    let arg_names: Vec<&str> = if two { vec!["u1", "u2"] } else { vec!["u"] };
    let mut profiles = BTreeMap::new();
    for name in ["F1", "F2", "F3", "G"] {
        let e = key.profiles.get(name).cloned().unwrap_or_else(|| default_profile(name, two));
        let stray: Vec<String> = e
            .params()
            .into_iter()
            .filter(|s| !arg_names.contains(&s.as_str()) && !params.contains_key(s))
            .collect();
        if !stray.is_empty() {
            return Err(CatalogError::Profile(name.to_string(), stray));
        }
        profiles.insert(name, e);
    }
    let close = |src: &str| -> Expr {
        let mut e = p(src);
        for (name, prof) in &profiles {
            e = e.substitute_param(name, prof);
        }
        for (u, arg) in row.args {
            e = e.substitute_param(u, &p(arg));
        }
        for (name, sub) in [("phi", "atan2(y, x)"), ("rho", "sqrt(x^2 + y^2)"), ("r", "sqrt(x^2 + y^2 + z^2)")] {
            e = e.substitute_param(name, &p(sub));
        }
        e
    };
    let a = VecExpr::new(close(a1), close(a2), close(a3));
    let phi = close(phi);
    let used: Params = params
        .into_iter()
        .filter(|(k, _)| row.params.contains(&k.as_str()) || a.0.iter().chain([&phi]).any(|e| e.params().contains(k)))
        .collect();
    let label = match (key.variant, row.corrected) {
        (Variant::Corrected, Some(_)) => format!("{} (corrected)", row.label()),
        _ => row.label(),
    };
    Ok(FieldSpec::new(label, a, phi, used, DomainHint::octant())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
    }

    #[test]
    fn row_counts() {
        let n: Vec<usize> = CatalogTable::ALL.iter().map(|t| catalog(*t).len()).collect();
        assert_eq!(n, vec![8, 13, 16, 4, 5, 6]);
        for t in CatalogTable::ALL {
            for (i, r) in catalog(t).iter().enumerate() {
                assert_eq!(r.row, i + 1);
                assert_eq!(r.generators.len(), t.dim());
            }
        }
    }

    #[test]
    fn generator_strings_expand() {
        let r = catalog_row(CatalogTable::Sym2, 1).unwrap();
        let g = &r.generators(&default_params())[0];
        assert_eq!(g.to_f64(), [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.5, -1.0 / 3.0]);
    }

    #[test]
    fn stormer_dipole() {
        let key = CatalogKey::new(CatalogTable::Sym3, 6)
            .param("k1", Scalar::zero())
            .param("k2", Scalar::int(3))
            .profile("F1", "0")
            .profile("F3", "0")
            .profile("F2", "(u^2 + 1)^(-3/2)")
            .profile("G", "0");
        let fs = catalog_instance(&key).unwrap();
        for pt in [[0.3f64, 0.7, 0.4], [1.2, 0.2, 0.9], [0.5, 0.5, 1.5]] {
            let r3 = (pt[0] * pt[0] + pt[1] * pt[1] + pt[2] * pt[2]).powf(1.5);
            assert!(close(fs.a_at(pt).unwrap(), [-pt[1] / r3, pt[0] / r3, 0.0], 1e-13));
            assert_eq!(fs.phi_at(pt).unwrap(), 0.0);
        }
    }

    #[test]
    fn monopole() {
        let key = CatalogKey::new(CatalogTable::Noe4, 2).param("lambda", Scalar::int(2));
        let fs = catalog_instance(&key).unwrap();
        for pt in [[0.3f64, 0.7, 0.4], [1.2, 0.2, 0.9]] {
            let r3 = (pt[0] * pt[0] + pt[1] * pt[1] + pt[2] * pt[2]).powf(1.5);
            assert!(close(fs.b_at(pt).unwrap(), pt.map(|c| 2.0 * c / r3), 1e-12));
        }
    }

    #[test]
    fn straight_translation_row() {
        let key = CatalogKey::new(CatalogTable::Sym2, 8)
            .param("lambda", Scalar::zero())
            .profile("F1", "0")
            .profile("F2", "0");
        let fs = catalog_instance(&key).unwrap();
        let f3 = p("u1*u2/2 + 1/5").substitute_param("u1", &Expr::x()).substitute_param("u2", &Expr::y());
        let want = VecExpr::new(f3.diff(crate::expr::Var::Y), Expr::neg(&f3.diff(crate::expr::Var::X)), Expr::zero());
        let pt = [0.4, 1.1, 0.7];
        assert!(close(fs.b_at(pt).unwrap(), want.eval_at(pt).unwrap(), 1e-14));
    }

    #[test]
    fn side_conditions_and_profiles_are_checked() {
        let bad = CatalogKey::new(CatalogTable::Sym2, 5).param("k", Scalar::one());
        assert!(matches!(catalog_instance(&bad), Err(CatalogError::Condition(_))));
        let stray = CatalogKey::new(CatalogTable::Sym3, 1).profile("G", "u + w");
        assert!(matches!(catalog_instance(&stray), Err(CatalogError::Profile(_, _))));
        assert!(matches!(catalog_instance(&CatalogKey::new(CatalogTable::Noe2, 9)), Err(CatalogError::NoRow(_, 9))));
    }

    #[test]
    fn every_default_instance_builds() {
        for t in CatalogTable::ALL {
            for r in catalog(t) {
                for v in [Variant::Printed, Variant::Corrected] {
                    let fs = catalog_instance(&CatalogKey::new(t, r.row).variant(v)).unwrap();
                    let pts = fs.sample_points(8, 0.5, 2.0, 0);
                    assert_eq!(pts.len(), 8, "{}", r.id());
                }
            }
        }
    }
}
