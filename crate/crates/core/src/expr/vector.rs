use std::collections::BTreeMap;
use std::fmt;

use super::{Bindings, EvalError, Expr, Var};
use crate::scalar::Scalar;

/// Three expressions read as Cartesian components.
#[derive(Clone, Debug, PartialEq)]
pub struct VecExpr(pub [Expr; 3]);

impl VecExpr {
    pub fn new(a: Expr, b: Expr, c: Expr) -> VecExpr {
        VecExpr([a, b, c])
    }

    pub fn zero() -> VecExpr {
        VecExpr::new(Expr::zero(), Expr::zero(), Expr::zero())
    }

    pub fn parse(parts: [&str; 3]) -> Result<VecExpr, super::ParseError> {
        Ok(VecExpr::new(
            super::parse(parts[0])?,
            super::parse(parts[1])?,
            super::parse(parts[2])?,
        ))
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> VecExpr {
        VecExpr::new(f(&self.0[0]), f(&self.0[1]), f(&self.0[2]))
    }

    pub fn add(&self, o: &VecExpr) -> VecExpr {
        VecExpr::new(&self.0[0] + &o.0[0], &self.0[1] + &o.0[1], &self.0[2] + &o.0[2])
    }

    pub fn scale(&self, s: &Expr) -> VecExpr {
        self.map(|e| Expr::mul(s, e))
    }

    pub fn dot(&self, o: &VecExpr) -> Expr {
        let mut out = Expr::zero();
        for i in 0..3 {
            out = Expr::add(&out, &Expr::mul(&self.0[i], &o.0[i]));
        }
        out
    }

    pub fn cross(&self, o: &VecExpr) -> VecExpr {
        let [a1, a2, a3] = &self.0;
        let [b1, b2, b3] = &o.0;
        VecExpr::new(
            Expr::sub(&Expr::mul(a2, b3), &Expr::mul(a3, b2)),
            Expr::sub(&Expr::mul(a3, b1), &Expr::mul(a1, b3)),
            Expr::sub(&Expr::mul(a1, b2), &Expr::mul(a2, b1)),
        )
    }

    /// Directional derivative `(w · ∇) self` for a vector field `w`.
    pub fn advect(&self, w: &VecExpr) -> VecExpr {
        self.map(|e| w.dot(&grad(e)))
    }

    pub fn simplify(&self) -> VecExpr {
        self.map(|e| e.simplify())
    }

    pub fn bind_params(&self, values: &BTreeMap<String, Scalar>) -> VecExpr {
        self.map(|e| e.bind_params(values))
    }

    pub fn substitute_vars(&self, subs: &[Expr; 3]) -> VecExpr {
        self.map(|e| e.substitute_vars(subs))
    }

    pub fn eval(&self, b: &Bindings) -> Result<[f64; 3], EvalError> {
        Ok([self.0[0].eval(b)?, self.0[1].eval(b)?, self.0[2].eval(b)?])
    }

    pub fn eval_at(&self, p: [f64; 3]) -> Result<[f64; 3], EvalError> {
        self.eval(&Bindings::at(p))
    }

    /// `J[i][j] = ∂_j self_i` as expressions.
    pub fn jacobian(&self) -> [[Expr; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.0[i].diff(Var::from_index(j))))
    }
}

impl fmt::Display for VecExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

pub fn grad(e: &Expr) -> VecExpr {
    VecExpr::new(e.diff(Var::X), e.diff(Var::Y), e.diff(Var::Z))
}

pub fn curl(v: &VecExpr) -> VecExpr {
    let [a, b, c] = &v.0;
    VecExpr::new(
        Expr::sub(&c.diff(Var::Y), &b.diff(Var::Z)),
        Expr::sub(&a.diff(Var::Z), &c.diff(Var::X)),
        Expr::sub(&b.diff(Var::X), &a.diff(Var::Y)),
    )
}

pub fn div(v: &VecExpr) -> Expr {
    let [a, b, c] = &v.0;
    Expr::add(&Expr::add(&a.diff(Var::X), &b.diff(Var::Y)), &c.diff(Var::Z))
}
