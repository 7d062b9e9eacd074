use std::collections::BTreeMap;

use super::{BinOp, Expr, Func, Node, Var};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Values for the coordinates and named parameters.
#[derive(Debug, Clone, Default)]
pub struct Bindings {
    pub vars: [Option<f64>; 3],
    pub params: BTreeMap<String, f64>,
}

impl Bindings {
    pub fn new() -> Bindings {
        Bindings::default()
    }

    pub fn at(p: [f64; 3]) -> Bindings {
        Bindings {
            vars: [Some(p[0]), Some(p[1]), Some(p[2])],
            params: BTreeMap::new(),
        }
    }

    pub fn var(mut self, v: Var, value: f64) -> Bindings {
        self.vars[v.index()] = Some(value);
        self
    }

    pub fn param(mut self, name: &str, value: f64) -> Bindings {
        self.params.insert(name.to_string(), value);
        self
    }

    fn point(&self) -> Result<[f64; 3], EvalError> {
        let get = |v: Var| self.vars[v.index()].ok_or_else(|| EvalError::Unbound(v.name().into()));
        Ok([get(Var::X)?, get(Var::Y)?, get(Var::Z)?])
    }
}

fn finite(v: f64, what: &str) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::Domain(format!("{what} is not finite")))
    }
}

pub(crate) fn pow_f64(a: f64, b: f64) -> Result<f64, EvalError> {
    if b.fract() == 0.0 && b.abs() <= i32::MAX as f64 {
        if a == 0.0 && b < 0.0 {
            return Err(EvalError::Domain("division by zero in power".into()));
        }
        return finite(a.powi(b as i32), "power");
    }
    if a > 0.0 {
        return finite(a.powf(b), "power");
    }
    if a == 0.0 && b > 0.0 {
        return Ok(0.0);
    }
    Err(EvalError::Domain(format!("non-integer power {b} of non-positive base {a}")))
}

impl Expr {
    pub fn eval(&self, b: &Bindings) -> Result<f64, EvalError> {
        Ok(match self.node() {
            Node::Rational(_, v) => *v,
            Node::Float(v) => *v,
            Node::Var(v) => b.vars[v.index()].ok_or_else(|| EvalError::Unbound(v.name().into()))?,
            Node::Param(p) => *b
                .params
                .get(p.as_ref())
                .ok_or_else(|| EvalError::Unbound(p.to_string()))?,
            Node::Opaque(field) => field.value(b.point()?)?,
            Node::Neg(a) => -a.eval(b)?,
            Node::Func(f, a) => {
                let v = a.eval(b)?;
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => finite(v.exp(), "exp")?,
                    Func::Ln => {
                        if v <= 0.0 {
                            return Err(EvalError::Domain(format!("ln of non-positive value {v}")));
                        }
                        v.ln()
                    }
                    Func::Sqrt => {
                        if v < 0.0 {
                            return Err(EvalError::Domain(format!("sqrt of negative value {v}")));
                        }
                        v.sqrt()
                    }
                }
            }
            Node::Atan2(y, x) => {
                let (y, x) = (y.eval(b)?, x.eval(b)?);
                if x == 0.0 && y == 0.0 {
                    return Err(EvalError::Domain("atan2(0, 0)".into()));
                }
                y.atan2(x)
            }
            Node::Binary(op, l, r) => {
                let (l, r) = (l.eval(b)?, r.eval(b)?);
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => {
                        if r == 0.0 {
                            return Err(EvalError::Domain("division by zero".into()));
                        }
                        finite(l / r, "quotient")?
                    }
                    BinOp::Pow => pow_f64(l, r)?,
                }
            }
        })
    }

    /// Evaluation at a point for a parameter-free expression.
    pub fn eval_at(&self, p: [f64; 3]) -> Result<f64, EvalError> {
        self.eval(&Bindings::at(p))
    }
}
