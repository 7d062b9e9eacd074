//! Row templates of the optimal systems of one-, two- and three-dimensional
//! subalgebras.

use std::collections::BTreeMap;

use crate::expr::{parse, Expr};
use crate::liealg::EquivGenerator;
use crate::scalar::Scalar;

pub type Params = BTreeMap<String, Scalar>;

pub struct RowSpec {
    /// Dimension of the subalgebra (1, 2 or 3).
    pub dim: usize,
    pub row: usize,
    pub params: &'static [&'static str],
    pub condition: &'static str,
    pub admissible: fn(&Params) -> bool,
    pub build: fn(&Params) -> Vec<EquivGenerator>,
    pub note: Option<&'static str>,
}

impl RowSpec {
    pub fn id(&self) -> String {
        format!("dim{}-row{}", self.dim, self.row)
    }

    pub fn instantiate(&self, p: &Params) -> Vec<EquivGenerator> {
        (self.build)(p)
    }
}

fn q(p: &Params, name: &str) -> Scalar {
    p.get(name).cloned().unwrap_or_else(Scalar::zero)
}

fn nz(p: &Params, name: &str) -> bool {
    !q(p, name).is_zero()
}

fn ne(p: &Params, name: &str, v: Scalar) -> bool {
    q(p, name) != v
}

fn half() -> Scalar {
    Scalar::ratio(1, 2)
}

/// `Σ coef·V_i` from `(i, coef)` pairs.
fn gen(terms: &[(usize, Scalar)]) -> EquivGenerator {
    let mut g = EquivGenerator::zero();
    for (i, c) in terms {
        g.c[i - 1] = &g.c[i - 1] + c;
    }
    g
}

fn one() -> Scalar {
    Scalar::one()
}

fn int(n: i64) -> Scalar {
    Scalar::int(n)
}

/// Gauge functions named after the operators they generate.
pub mod gauge {
    use super::*;

    fn p(s: &str) -> Expr {
        parse(s).expect("built-in gauge parses")
    }

    pub fn phi() -> Expr {
        p("atan2(y, x)")
    }
    pub fn ln_z() -> Expr {
        p("ln(z)")
    }
    pub fn ln_y() -> Expr {
        p("ln(y)")
    }
    pub fn x() -> Expr {
        Expr::x()
    }
    pub fn y() -> Expr {
        Expr::y()
    }
    pub fn z() -> Expr {
        Expr::z()
    }
    pub fn y_r_rho2() -> Expr {
        p("y*sqrt(x^2 + y^2 + z^2)/(x^2 + y^2)")
    }
    pub fn x_r_rho2() -> Expr {
        p("x*sqrt(x^2 + y^2 + z^2)/(x^2 + y^2)")
    }
    pub fn half_x2_minus_y2() -> Expr {
        p("(x^2 - y^2)/2")
    }
}

fn lam(p: &Params, name: &str, f: Expr) -> Expr {
    f.scale(&q(p, name))
}

pub fn table2() -> Vec<RowSpec> {
    vec![
        RowSpec {
            dim: 1,
            row: 1,
            params: &["k1", "k2"],
            condition: "k1 != 0, k2 != k1",
            admissible: |p| nz(p, "k1") && q(p, "k2") != q(p, "k1"),
            build: |p| vec![gen(&[(4, one()), (7, q(p, "k1")), (8, q(p, "k2"))])],
            note: None,
        },
        RowSpec {
            dim: 1,
            row: 2,
            params: &["k", "lambda"],
            condition: "k != 0",
            admissible: |p| nz(p, "k"),
            build: |p| {
                let k = q(p, "k");
                vec![gen(&[(4, one()), (7, k.clone()), (8, k.clone()), (9, &k * &q(p, "lambda"))])]
            },
            note: None,
        },
        RowSpec {
            dim: 1,
            row: 3,
            params: &["k1", "k2"],
            condition: "k2 != 0",
            admissible: |p| nz(p, "k2"),
            build: |p| vec![gen(&[(4, one()), (3, q(p, "k1")), (8, q(p, "k2"))])],
            note: None,
        },
        RowSpec {
            dim: 1,
            row: 4,
            params: &["k", "lambda"],
            condition: "",
            admissible: |_| true,
            build: |p| vec![gen(&[(4, one()), (3, q(p, "k")), (9, q(p, "lambda"))])],
            note: None,
        },
        RowSpec {
            dim: 1,
            row: 5,
            params: &["k"],
            condition: "k != 1",
            admissible: |p| ne(p, "k", one()),
            build: |p| vec![gen(&[(7, one()), (8, q(p, "k"))])],
            note: None,
        },
        RowSpec {
            dim: 1,
            row: 6,
            params: &["lambda"],
            condition: "",
            admissible: |_| true,
            build: |p| vec![gen(&[(7, one()), (8, one()), (9, q(p, "lambda"))])],
            note: None,
        },
        RowSpec {
            dim: 1,
            row: 7,
            params: &["k"],
            condition: "k != 0",
            admissible: |p| nz(p, "k"),
            build: |p| vec![gen(&[(3, one()), (8, q(p, "k"))])],
            note: None,
        },
        RowSpec {
            dim: 1,
            row: 8,
            params: &["lambda"],
            condition: "",
            admissible: |_| true,
            build: |p| vec![gen(&[(3, one()), (9, q(p, "lambda"))])],
            note: None,
        },
    ]
}

pub fn table3() -> Vec<RowSpec> {
    vec![
        RowSpec {
            dim: 2,
            row: 1,
            params: &["k1", "k2"],
            condition: "k1 != 0, k2 != k1, 2 k2 != k1",
            admissible: |p| {
                let (k1, k2) = (q(p, "k1"), q(p, "k2"));
                !k1.is_zero() && k2 != k1 && &int(2) * &k2 != k1
            },
            build: |p| {
                vec![
                    gen(&[(3, one())]),
                    gen(&[(4, one()), (7, q(p, "k1")), (8, q(p, "k2"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 2,
            row: 2,
            params: &["k", "lambda"],
            condition: "k != 0",
            admissible: |p| nz(p, "k"),
            build: |p| {
                let k = q(p, "k");
                vec![
                    gen(&[(3, one()), (9, q(p, "lambda"))]),
                    gen(&[(4, one()), (7, &int(2) * &k), (8, k)]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 2,
            row: 3,
            params: &["k", "lambda1", "lambda2"],
            condition: "k != 0",
            admissible: |p| nz(p, "k"),
            build: |p| {
                let k = q(p, "k");
                vec![
                    gen(&[(3, one())]).with_gauge(lam(p, "lambda1", gauge::phi())),
                    gen(&[(4, one()), (7, k.clone()), (8, k.clone()), (9, &k * &q(p, "lambda2"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 2,
            row: 4,
            params: &["k1", "k2"],
            condition: "k1 != 0 or k2 != 0",
            admissible: |p| nz(p, "k1") || nz(p, "k2"),
            build: |p| {
                vec![
                    gen(&[(3, one()), (8, q(p, "k1"))]),
                    gen(&[(4, one()), (8, q(p, "k2"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 2,
            row: 5,
            params: &["lambda1", "lambda2", "lambda3"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                vec![
                    gen(&[(3, one()), (9, q(p, "lambda1"))]).with_gauge(lam(p, "lambda3", gauge::phi())),
                    gen(&[(4, one()), (9, q(p, "lambda2"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 2,
            row: 6,
            params: &["k1", "k2"],
            condition: "k1 != 0 or k2 not in {1, 2}",
            admissible: |p| nz(p, "k1") || (ne(p, "k2", one()) && ne(p, "k2", int(2))),
            build: |p| {
                vec![
                    gen(&[(4, one()), (8, q(p, "k1"))]),
                    gen(&[(7, one()), (8, q(p, "k2"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 2,
            row: 7,
            params: &["lambda1", "lambda2"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                vec![
                    gen(&[(4, one()), (9, q(p, "lambda1"))]),
                    gen(&[(7, one()), (8, one()), (9, q(p, "lambda2"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 2,
            row: 8,
            params: &["lambda"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                vec![
                    gen(&[(4, one())]),
                    gen(&[(7, one()), (8, int(2))]).with_gauge(lam(p, "lambda", gauge::phi())),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 2,
            row: 9,
            params: &["k"],
            condition: "k not in {1/2, 1}",
            admissible: |p| ne(p, "k", half()) && ne(p, "k", one()),
            build: |p| vec![gen(&[(3, one())]), gen(&[(7, one()), (8, q(p, "k"))])],
            note: None,
        },
        RowSpec {
            dim: 2,
            row: 10,
            params: &["lambda1", "lambda2"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                vec![
                    gen(&[(3, one())]).with_gauge(lam(p, "lambda1", gauge::ln_z()).scale(&int(-1))),
                    gen(&[(7, one()), (8, one()), (9, q(p, "lambda2"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 2,
            row: 11,
            params: &["lambda"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                vec![
                    gen(&[(3, one()), (9, q(p, "lambda"))]),
                    gen(&[(7, int(2)), (8, one())]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 2,
            row: 12,
            params: &["k1", "k2"],
            condition: "k2 != 0",
            admissible: |p| nz(p, "k2"),
            build: |p| {
                vec![
                    gen(&[(2, one()), (8, q(p, "k1"))]),
                    gen(&[(3, one()), (8, q(p, "k2"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 2,
            row: 13,
            params: &["lambda1", "lambda2", "lambda3"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                vec![
                    gen(&[(2, one()), (9, q(p, "lambda1"))]).with_gauge(lam(p, "lambda3", gauge::z())),
                    gen(&[(3, one()), (9, q(p, "lambda2"))]),
                ]
            },
            note: None,
        },
    ]
}

pub fn table4() -> Vec<RowSpec> {
    vec![
        RowSpec {
            dim: 3,
            row: 1,
            params: &["k1", "k2"],
            condition: "k1 != 0 or k2 not in {1/2, 1, 2}",
            admissible: |p| nz(p, "k1") || (ne(p, "k2", half()) && ne(p, "k2", one()) && ne(p, "k2", int(2))),
            build: |p| {
                vec![
                    gen(&[(3, one())]),
                    gen(&[(4, one()), (8, q(p, "k1"))]),
                    gen(&[(7, one()), (8, q(p, "k2"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 3,
            row: 2,
            params: &["lambda"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                vec![
                    gen(&[(3, one()), (9, q(p, "lambda"))]),
                    gen(&[(4, one())]),
                    gen(&[(7, int(2)), (8, one())]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 3,
            row: 3,
            params: &["lambda1", "lambda2", "lambda3", "lambda4"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                let f = Expr::sub(&lam(p, "lambda1", gauge::phi()), &lam(p, "lambda2", gauge::ln_z()));
                vec![
                    gen(&[(3, one())]).with_gauge(f),
                    gen(&[(4, one()), (9, q(p, "lambda3"))]),
                    gen(&[(7, one()), (8, one()), (9, q(p, "lambda4"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 3,
            row: 4,
            params: &["lambda"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                vec![
                    gen(&[(3, one())]),
                    gen(&[(4, one())]),
                    gen(&[(7, one()), (8, int(2))]).with_gauge(lam(p, "lambda", gauge::phi())),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 3,
            row: 5,
            params: &["lambda"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                vec![
                    gen(&[(4, one())]),
                    gen(&[(5, one())]).with_gauge(lam(p, "lambda", gauge::y_r_rho2())),
                    gen(&[(6, one())]).with_gauge(lam(p, "lambda", gauge::x_r_rho2())),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 3,
            row: 6,
            params: &["k1", "k2"],
            condition: "k1 k2 != 0, k1 != k2",
            admissible: |p| nz(p, "k1") && nz(p, "k2") && q(p, "k1") != q(p, "k2"),
            build: |p| {
                vec![
                    gen(&[(1, one())]),
                    gen(&[(2, one())]),
                    gen(&[(4, one()), (7, q(p, "k1")), (8, q(p, "k2"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 3,
            row: 7,
            params: &["k", "lambda"],
            condition: "k != 0",
            admissible: |p| nz(p, "k"),
            build: |p| {
                vec![
                    gen(&[(1, one())]),
                    gen(&[(2, one())]).with_gauge(lam(p, "lambda", gauge::x())),
                    gen(&[(4, one()), (7, q(p, "k"))]).with_gauge(lam(p, "lambda", gauge::half_x2_minus_y2())),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 3,
            row: 8,
            params: &["k", "lambda"],
            condition: "k != 0",
            admissible: |p| nz(p, "k"),
            build: |p| {
                let k = q(p, "k");
                vec![
                    gen(&[(1, one())]),
                    gen(&[(2, one())]),
                    gen(&[(4, one()), (7, k.clone()), (8, k.clone()), (9, &k * &q(p, "lambda"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 3,
            row: 9,
            params: &["k1", "k2"],
            condition: "k1 k2 != 0",
            admissible: |p| nz(p, "k1") && nz(p, "k2"),
            build: |p| {
                vec![
                    gen(&[(1, one())]),
                    gen(&[(2, one())]),
                    gen(&[(4, one()), (3, q(p, "k1")), (8, q(p, "k2"))]),
                ]
            },
            note: Some("k1 = 0 is excluded in the source because it yields a zero vector potential; not re-derived"),
        },
        RowSpec {
            dim: 3,
            row: 10,
            params: &["k", "lambda1", "lambda2"],
            condition: "k != 0",
            admissible: |p| nz(p, "k"),
            build: |p| {
                vec![
                    gen(&[(1, one())]),
                    gen(&[(2, one())]).with_gauge(lam(p, "lambda1", gauge::x())),
                    gen(&[(4, one()), (3, q(p, "k")), (9, q(p, "lambda2"))])
                        .with_gauge(lam(p, "lambda1", gauge::half_x2_minus_y2())),
                ]
            },
            note: Some("k = 0 is excluded in the source because it yields a zero vector potential; not re-derived"),
        },
        RowSpec {
            dim: 3,
            row: 11,
            params: &["k"],
            condition: "k not in {0, 1/2, 1}",
            admissible: |p| nz(p, "k") && ne(p, "k", half()) && ne(p, "k", one()),
            build: |p| {
                vec![
                    gen(&[(2, one())]),
                    gen(&[(3, one())]),
                    gen(&[(7, one()), (8, q(p, "k"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 3,
            row: 12,
            params: &["lambda"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                vec![
                    gen(&[(2, one())]).with_gauge(lam(p, "lambda", gauge::z())),
                    gen(&[(3, one())]),
                    gen(&[(7, one())]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 3,
            row: 13,
            params: &["lambda1", "lambda2"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                vec![
                    gen(&[(2, one()), (9, q(p, "lambda1"))]),
                    gen(&[(3, one()), (9, q(p, "lambda2"))]),
                    gen(&[(7, int(2)), (8, one())]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 3,
            row: 14,
            params: &["lambda1", "lambda2", "lambda3"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                vec![
                    gen(&[(2, one())]).with_gauge(lam(p, "lambda2", gauge::ln_y()).scale(&int(-1))),
                    gen(&[(3, one())]).with_gauge(lam(p, "lambda3", gauge::ln_z()).scale(&int(-1))),
                    gen(&[(7, one()), (8, one()), (9, q(p, "lambda1"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 3,
            row: 15,
            params: &["k1", "k2", "k3"],
            condition: "k3 != 0",
            admissible: |p| nz(p, "k3"),
            build: |p| {
                vec![
                    gen(&[(1, one()), (8, q(p, "k1"))]),
                    gen(&[(2, one()), (8, q(p, "k2"))]),
                    gen(&[(3, one()), (8, q(p, "k3"))]),
                ]
            },
            note: None,
        },
        RowSpec {
            dim: 3,
            row: 16,
            params: &["lambda1", "lambda2", "lambda3", "lambda4", "lambda5", "lambda6"],
            condition: "",
            admissible: |_| true,
            build: |p| {
                let f1 = Expr::add(&lam(p, "lambda4", gauge::y()), &lam(p, "lambda5", gauge::z()));
                vec![
                    gen(&[(1, one()), (9, q(p, "lambda1"))]).with_gauge(f1),
                    gen(&[(2, one()), (9, q(p, "lambda2"))]).with_gauge(lam(p, "lambda6", gauge::z())),
                    gen(&[(3, one()), (9, q(p, "lambda3"))]),
                ]
            },
            note: None,
        },
    ]
}

/// All rows for a given subalgebra dimension.
pub fn rows(dim: usize) -> Vec<RowSpec> {
    match dim {
        1 => table2(),
        2 => table3(),
        3 => table4(),
        _ => Vec::new(),
    }
}

pub fn find_row(dim: usize, row: usize) -> Option<RowSpec> {
    rows(dim).into_iter().find(|r| r.row == row)
}

pub fn params_from(pairs: &[(&str, Scalar)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}
