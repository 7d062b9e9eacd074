use std::fmt;

use num_traits::{One, Signed};

use super::{BinOp, Expr, Node};

const ADD: u8 = 1;
const MUL: u8 = 2;
const NEG: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

fn prec(e: &Expr) -> u8 {
    match e.node() {
        Node::Rational(r, _) => {
            if !r.denom().is_one() {
                MUL
            } else if r.is_negative() {
                NEG
            } else {
                ATOM
            }
        }
        Node::Float(v) => {
            if v.is_sign_negative() {
                NEG
            } else {
                ATOM
            }
        }
        Node::Var(_) | Node::Param(_) | Node::Func(..) | Node::Atan2(..) | Node::Opaque(_) => ATOM,
        Node::Neg(_) => NEG,
        Node::Binary(op, ..) => match op {
            BinOp::Add | BinOp::Sub => ADD,
            BinOp::Mul | BinOp::Div => MUL,
            BinOp::Pow => POW,
        },
    }
}

fn wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Rational(r, _) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Node::Float(v) => write!(f, "{v:?}"),
            Node::Var(v) => f.write_str(v.name()),
            Node::Param(p) => f.write_str(p),
            Node::Opaque(field) => write!(f, "<{}>", field.label()),
            Node::Neg(a) => {
                f.write_str("-")?;
                wrapped(f, a, prec(a) < NEG)
            }
            Node::Func(func, a) => write!(f, "{}({a})", func.name()),
            Node::Atan2(y, x) => write!(f, "atan2({y}, {x})"),
            Node::Binary(BinOp::Pow, a, b) => {
                wrapped(f, a, prec(a) < ATOM)?;
                f.write_str("^")?;
                wrapped(f, b, prec(b) < NEG)
            }
            Node::Binary(op, a, b) => {
                let p = prec(self);
                wrapped(f, a, prec(a) < p)?;
                f.write_str(match op {
                    BinOp::Add => " + ",
                    BinOp::Sub => " - ",
                    BinOp::Mul => "*",
                    _ => "/",
                })?;
                wrapped(f, b, prec(b) <= p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::{parse, Expr};

    fn roundtrip(s: &str) -> String {
        parse(s).unwrap().to_string()
    }

    #[test]
    fn prints_minimal_parentheses() {
        assert_eq!(roundtrip("x^2 + y"), "x^2 + y");
        assert_eq!(roundtrip("-y/(x^2+y^2+z^2)^(3/2)"), "-y/(x^2 + y^2 + z^2)^(3/2)");
        assert_eq!(roundtrip("a - (b - c)"), "a - (b - c)");
        assert_eq!(roundtrip("(a - b) - c"), "a - b - c");
        assert_eq!(roundtrip("(-x)^2"), "(-x)^2");
        assert_eq!(roundtrip("x^-2"), "x^-2");
        assert_eq!(roundtrip("(x^y)^z"), "(x^y)^z");
        assert_eq!(roundtrip("atan2(y,x)"), "atan2(y, x)");
    }

    #[test]
    fn folded_constants_reparse() {
        let e = Expr::pow(&Expr::x(), &Expr::ratio(-1, 2));
        let s = e.to_string();
        assert_eq!(s, "x^(-1/2)");
        assert_eq!(parse(&s).unwrap().to_string(), s);
        let n = Expr::pow(&Expr::int(-2), &Expr::y());
        assert_eq!(n.to_string(), "(-2)^y");
    }
}
