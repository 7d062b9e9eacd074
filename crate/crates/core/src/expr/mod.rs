//! Symbolic expressions over the Cartesian coordinates `x`, `y`, `z` and
//! named parameters.
//!
//! Trees are immutable and reference counted, so subtrees are shared freely
//! between a function and its derivatives. Smart constructors (`Expr::add`,
//! `Expr::mul`, ...) fold constants and apply the 0/1 identities; the parser
//! builds raw trees so that printing reproduces the input.

mod diff;
mod eval;
mod parse;
mod print;
mod vector;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::{rational_to_f64, Scalar};

pub use eval::{Bindings, EvalError};
pub use parse::{parse, ParseError};
pub use vector::{curl, div, grad, VecExpr};

/// One of the three Cartesian coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// A scalar function of position that is only known numerically, such as a
/// gauge function reconstructed by quadrature. Its partial derivatives must
/// be available as ordinary expressions.
pub trait ScalarField: Send + Sync {
    fn label(&self) -> String;
    fn value(&self, p: [f64; 3]) -> Result<f64, EvalError>;
    fn partial(&self, v: Var) -> Expr;
}

pub enum Node {
    /// Exact rational constant; the cached `f64` avoids reconverting on
    /// every evaluation.
    Rational(BigRational, f64),
    Float(f64),
    Var(Var),
    Param(Arc<str>),
    Neg(Expr),
    Func(Func, Expr),
    Atan2(Expr, Expr),
    Binary(BinOp, Expr, Expr),
    Opaque(Arc<dyn ScalarField>),
}

#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl Expr {
    fn new(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn rational(r: BigRational) -> Expr {
        let v = rational_to_f64(&r);
        Expr::new(Node::Rational(r, v))
    }

    pub fn int(n: i64) -> Expr {
        Expr::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        Expr::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn float(v: f64) -> Expr {
        Expr::new(Node::Float(v))
    }

    pub fn scalar(s: &Scalar) -> Expr {
        match s {
            Scalar::Exact(r) => Expr::rational(r.clone()),
            Scalar::Approx(v) => Expr::float(*v),
        }
    }

    pub fn var(v: Var) -> Expr {
        Expr::new(Node::Var(v))
    }

    pub fn x() -> Expr {
        Expr::var(Var::X)
    }

    pub fn y() -> Expr {
        Expr::var(Var::Y)
    }

    pub fn z() -> Expr {
        Expr::var(Var::Z)
    }

    pub fn param(name: &str) -> Expr {
        Expr::new(Node::Param(Arc::from(name)))
    }

    pub fn opaque(field: Arc<dyn ScalarField>) -> Expr {
        Expr::new(Node::Opaque(field))
    }

    /// Constant value of the node if it is a literal.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.node() {
            Node::Rational(r, _) => Some(Scalar::Exact(r.clone())),
            Node::Float(v) => Some(Scalar::Approx(*v)),
            _ => None,
        }
    }

    fn as_rational(&self) -> Option<&BigRational> {
        match self.node() {
            Node::Rational(r, _) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self.node() {
            Node::Rational(r, _) => r.is_zero(),
            Node::Float(v) => *v == 0.0,
            _ => false,
        }
    }

    pub fn is_one(&self) -> bool {
        match self.node() {
            Node::Rational(r, _) => r.is_one(),
            Node::Float(v) => *v == 1.0,
            _ => false,
        }
    }

    fn is_minus_one(&self) -> bool {
        match self.node() {
            Node::Rational(r, _) => (-r).is_one(),
            Node::Float(v) => *v == -1.0,
            _ => false,
        }
    }

    // ----- raw constructors (no folding), used by the parser -----

    pub fn raw_binary(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::new(Node::Binary(op, a, b))
    }

    pub fn raw_neg(a: Expr) -> Expr {
        Expr::new(Node::Neg(a))
    }

    pub fn raw_func(f: Func, a: Expr) -> Expr {
        Expr::new(Node::Func(f, a))
    }

    pub fn raw_atan2(a: Expr, b: Expr) -> Expr {
        Expr::new(Node::Atan2(a, b))
    }

    // ----- smart constructors -----

    pub fn add(a: &Expr, b: &Expr) -> Expr {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if let (Some(x), Some(y)) = (a.as_scalar(), b.as_scalar()) {
            return Expr::scalar(&(x + y));
        }
        if let Node::Neg(inner) = b.node() {
            return Expr::sub(a, inner);
        }
        Expr::raw_binary(BinOp::Add, a.clone(), b.clone())
    }

    pub fn sub(a: &Expr, b: &Expr) -> Expr {
        if b.is_zero() {
            return a.clone();
        }
        if a.is_zero() {
            return Expr::neg(b);
        }
        if let (Some(x), Some(y)) = (a.as_scalar(), b.as_scalar()) {
            return Expr::scalar(&(x - y));
        }
        if a == b {
            return Expr::zero();
        }
        if let Node::Neg(inner) = b.node() {
            return Expr::add(a, inner);
        }
        Expr::raw_binary(BinOp::Sub, a.clone(), b.clone())
    }

    pub fn mul(a: &Expr, b: &Expr) -> Expr {
        if a.is_zero() || b.is_zero() {
            return Expr::zero();
        }
        if a.is_one() {
            return b.clone();
        }
        if b.is_one() {
            return a.clone();
        }
        if a.is_minus_one() {
            return Expr::neg(b);
        }
        if b.is_minus_one() {
            return Expr::neg(a);
        }
        if let (Some(x), Some(y)) = (a.as_scalar(), b.as_scalar()) {
            return Expr::scalar(&(x * y));
        }
        match (a.node(), b.node()) {
            (Node::Neg(p), Node::Neg(q)) => Expr::mul(p, q),
            (Node::Neg(p), _) => Expr::neg(&Expr::mul(p, b)),
            (_, Node::Neg(q)) => Expr::neg(&Expr::mul(a, q)),
            // constants to the left
            _ if b.as_scalar().is_some() => Expr::raw_binary(BinOp::Mul, b.clone(), a.clone()),
            // x * (1/y) -> x / y
            (_, Node::Binary(BinOp::Div, n, d)) if n.is_one() => Expr::div(a, d),
            (Node::Binary(BinOp::Div, n, d), _) if n.is_one() => Expr::div(b, d),
            _ => Expr::raw_binary(BinOp::Mul, a.clone(), b.clone()),
        }
    }

    pub fn div(a: &Expr, b: &Expr) -> Expr {
        if b.is_one() {
            return a.clone();
        }
        if a.is_zero() && !b.is_zero() {
            return Expr::zero();
        }
        if let (Some(x), Some(y)) = (a.as_scalar(), b.as_scalar()) {
            if !y.is_zero() {
                return Expr::scalar(&(x / y));
            }
        }
        if a == b && !b.is_zero() {
            return Expr::one();
        }
        match (a.node(), b.node()) {
            (Node::Neg(p), Node::Neg(q)) => Expr::div(p, q),
            (Node::Neg(p), _) => Expr::neg(&Expr::div(p, b)),
            (_, Node::Neg(q)) => Expr::neg(&Expr::div(a, q)),
            _ => Expr::raw_binary(BinOp::Div, a.clone(), b.clone()),
        }
    }

    pub fn pow(a: &Expr, b: &Expr) -> Expr {
        if b.is_zero() {
            return Expr::one();
        }
        if b.is_one() {
            return a.clone();
        }
        if a.is_one() {
            return Expr::one();
        }
        if let (Some(base), Some(e)) = (a.as_rational(), b.as_rational()) {
            if e.is_integer() {
                if let Some(n) = e.to_integer().to_i32() {
                    if n.abs() <= 64 && !(base.is_zero() && n < 0) {
                        return Expr::rational(num_traits::pow::Pow::pow(base, n));
                    }
                }
            }
        }
        if let (Some(x), Some(y)) = (a.as_scalar(), b.as_scalar()) {
            if !(x.is_exact() && y.is_exact()) {
                let v = x.to_f64().powf(y.to_f64());
                if v.is_finite() {
                    return Expr::float(v);
                }
            }
        }
        // (u^p)^q -> u^(p q) for constant exponents when u > 0 is not
        // required: only fold when q is an integer.
        if let (Node::Binary(BinOp::Pow, u, p), Some(q)) = (a.node(), b.as_rational()) {
            if q.is_integer() && p.as_scalar().is_some() {
                return Expr::pow(u, &Expr::mul(p, b));
            }
        }
        Expr::raw_binary(BinOp::Pow, a.clone(), b.clone())
    }

    pub fn neg(a: &Expr) -> Expr {
        if let Some(s) = a.as_scalar() {
            return Expr::scalar(&(-s));
        }
        if let Node::Neg(inner) = a.node() {
            return inner.clone();
        }
        Expr::raw_neg(a.clone())
    }

    pub fn func(f: Func, a: &Expr) -> Expr {
        if let Some(s) = a.as_scalar() {
            match (f, s.is_zero(), s.is_exact()) {
                (Func::Sin, true, _) | (Func::Sqrt, true, _) => return Expr::zero(),
                (Func::Cos, true, _) | (Func::Exp, true, _) => return Expr::one(),
                _ => {}
            }
            if f == Func::Ln && a.is_one() {
                return Expr::zero();
            }
            if f == Func::Sqrt && a.is_one() {
                return Expr::one();
            }
            if !s.is_exact() {
                let v = s.to_f64();
                let r = match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                    Func::Ln => v.ln(),
                    Func::Sqrt => v.sqrt(),
                };
                if r.is_finite() {
                    return Expr::float(r);
                }
            }
        }
        match (f, a.node()) {
            (Func::Ln, Node::Func(Func::Exp, inner)) => inner.clone(),
            _ => Expr::raw_func(f, a.clone()),
        }
    }

    pub fn sin(a: &Expr) -> Expr {
        Expr::func(Func::Sin, a)
    }

    pub fn cos(a: &Expr) -> Expr {
        Expr::func(Func::Cos, a)
    }

    pub fn exp(a: &Expr) -> Expr {
        Expr::func(Func::Exp, a)
    }

    pub fn ln(a: &Expr) -> Expr {
        Expr::func(Func::Ln, a)
    }

    pub fn sqrt(a: &Expr) -> Expr {
        Expr::func(Func::Sqrt, a)
    }

    pub fn atan2(y: &Expr, x: &Expr) -> Expr {
        Expr::raw_atan2(y.clone(), x.clone())
    }

    pub fn powi(a: &Expr, n: i64) -> Expr {
        Expr::pow(a, &Expr::int(n))
    }

    pub fn scale(&self, s: &Scalar) -> Expr {
        Expr::mul(&Expr::scalar(s), self)
    }

    /// Rebuilds the tree bottom-up through the smart constructors: constant
    /// folding, 0/1 identities and syntactically evident cancellation.
    pub fn simplify(&self) -> Expr {
        self.map_children(&|e| e.simplify(), true)
    }

    /// Applies `f` to each child and reassembles the node, through the smart
    /// constructors when `smart` is set.
    fn map_children(&self, f: &dyn Fn(&Expr) -> Expr, smart: bool) -> Expr {
        match self.node() {
            Node::Rational(..) | Node::Float(_) | Node::Var(_) | Node::Param(_) | Node::Opaque(_) => {
                self.clone()
            }
            Node::Neg(a) => {
                let a = f(a);
                if smart {
                    Expr::neg(&a)
                } else {
                    Expr::raw_neg(a)
                }
            }
            Node::Func(func, a) => {
                let a = f(a);
                if smart {
                    Expr::func(*func, &a)
                } else {
                    Expr::raw_func(*func, a)
                }
            }
            Node::Atan2(a, b) => Expr::raw_atan2(f(a), f(b)),
            Node::Binary(op, a, b) => {
                let (a, b) = (f(a), f(b));
                if smart {
                    match op {
                        BinOp::Add => Expr::add(&a, &b),
                        BinOp::Sub => Expr::sub(&a, &b),
                        BinOp::Mul => Expr::mul(&a, &b),
                        BinOp::Div => Expr::div(&a, &b),
                        BinOp::Pow => Expr::pow(&a, &b),
                    }
                } else {
                    Expr::raw_binary(*op, a, b)
                }
            }
        }
    }

    /// Replaces every occurrence of parameter `name` by `value`.
    pub fn substitute_param(&self, name: &str, value: &Expr) -> Expr {
        match self.node() {
            Node::Param(p) if p.as_ref() == name => value.clone(),
            _ => self.map_children(&|e| e.substitute_param(name, value), true),
        }
    }

    /// Replaces parameters found in `values`; other parameters are kept.
    pub fn bind_params(&self, values: &BTreeMap<String, Scalar>) -> Expr {
        match self.node() {
            Node::Param(p) => match values.get(p.as_ref()) {
                Some(s) => Expr::scalar(s),
                None => self.clone(),
            },
            _ => self.map_children(&|e| e.bind_params(values), true),
        }
    }

    /// Composition with a coordinate change: every `x`, `y`, `z` is replaced
    /// by the corresponding entry of `subs`.
    pub fn substitute_vars(&self, subs: &[Expr; 3]) -> Expr {
        match self.node() {
            Node::Var(v) => subs[v.index()].clone(),
            Node::Opaque(field) => Expr::opaque(Arc::new(Composed {
                inner: field.clone(),
                subs: subs.clone(),
            })),
            _ => self.map_children(&|e| e.substitute_vars(subs), true),
        }
    }

    /// Parameter names that occur in the tree.
    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut BTreeSet<String>) {
        match self.node() {
            Node::Param(p) => {
                out.insert(p.to_string());
            }
            Node::Rational(..) | Node::Float(_) | Node::Var(_) | Node::Opaque(_) => {}
            Node::Neg(a) | Node::Func(_, a) => a.collect_params(out),
            Node::Atan2(a, b) | Node::Binary(_, a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
        }
    }

    pub fn depends_on(&self, v: Var) -> bool {
        match self.node() {
            Node::Var(w) => *w == v,
            Node::Rational(..) | Node::Float(_) | Node::Param(_) => false,
            Node::Opaque(_) => true,
            Node::Neg(a) | Node::Func(_, a) => a.depends_on(v),
            Node::Atan2(a, b) | Node::Binary(_, a, b) => a.depends_on(v) || b.depends_on(v),
        }
    }

    /// True when the tree involves none of `x`, `y`, `z`.
    pub fn is_constant(&self) -> bool {
        Var::ALL.iter().all(|v| !self.depends_on(*v))
    }

    pub fn contains_atan2(&self) -> bool {
        match self.node() {
            Node::Atan2(..) => true,
            Node::Rational(..) | Node::Float(_) | Node::Var(_) | Node::Param(_) | Node::Opaque(_) => {
                false
            }
            Node::Neg(a) | Node::Func(_, a) => a.contains_atan2(),
            Node::Binary(_, a, b) => a.contains_atan2() || b.contains_atan2(),
        }
    }

    /// Number of nodes, counting shared subtrees once per occurrence.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Rational(..) | Node::Float(_) | Node::Var(_) | Node::Param(_) | Node::Opaque(_) => 1,
            Node::Neg(a) | Node::Func(_, a) => 1 + a.size(),
            Node::Atan2(a, b) | Node::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (self.node(), other.node()) {
            (Node::Rational(a, _), Node::Rational(b, _)) => a == b,
            (Node::Float(a), Node::Float(b)) => a.to_bits() == b.to_bits(),
            (Node::Var(a), Node::Var(b)) => a == b,
            (Node::Param(a), Node::Param(b)) => a == b,
            (Node::Neg(a), Node::Neg(b)) => a == b,
            (Node::Func(f, a), Node::Func(g, b)) => f == g && a == b,
            (Node::Atan2(a1, b1), Node::Atan2(a2, b2)) => a1 == a2 && b1 == b2,
            (Node::Binary(o1, a1, b1), Node::Binary(o2, a2, b2)) => o1 == o2 && a1 == a2 && b1 == b2,
            (Node::Opaque(f), Node::Opaque(g)) => Arc::ptr_eq(f, g),
            _ => false,
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

macro_rules! expr_op {
    ($trait:ident, $method:ident, $ctor:path) => {
        impl std::ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $ctor(&self, &rhs)
            }
        }
        impl std::ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $ctor(self, rhs)
            }
        }
    };
}

expr_op!(Add, add, Expr::add);
expr_op!(Sub, sub, Expr::sub);
expr_op!(Mul, mul, Expr::mul);
expr_op!(Div, div, Expr::div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

/// `inner ∘ subs`, produced when a coordinate change is applied to an
/// opaque node.
struct Composed {
    inner: Arc<dyn ScalarField>,
    subs: [Expr; 3],
}

impl ScalarField for Composed {
    fn label(&self) -> String {
        format!("{}∘({}, {}, {})", self.inner.label(), self.subs[0], self.subs[1], self.subs[2])
    }

    fn value(&self, p: [f64; 3]) -> Result<f64, EvalError> {
        let q = [
            self.subs[0].eval_at(p)?,
            self.subs[1].eval_at(p)?,
            self.subs[2].eval_at(p)?,
        ];
        self.inner.value(q)
    }

    fn partial(&self, v: Var) -> Expr {
        let mut out = Expr::zero();
        for (k, sub) in self.subs.iter().enumerate() {
            let dk = sub.diff(v);
            if dk.is_zero() {
                continue;
            }
            let outer = self.inner.partial(Var::from_index(k)).substitute_vars(&self.subs);
            out = Expr::add(&out, &Expr::mul(&outer, &dk));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smart_constructors_fold() {
        let x = Expr::x();
        assert_eq!(Expr::add(&x, &Expr::zero()), x);
        assert_eq!(Expr::mul(&Expr::one(), &x), x);
        assert!(Expr::mul(&Expr::zero(), &x).is_zero());
        assert_eq!(Expr::div(&x, &x), Expr::one());
        assert_eq!(Expr::sub(&x, &x), Expr::zero());
        let c = Expr::add(&Expr::ratio(1, 2), &Expr::ratio(1, 3));
        assert_eq!(c, Expr::ratio(5, 6));
        assert_eq!(Expr::pow(&Expr::ratio(2, 3), &Expr::int(2)), Expr::ratio(4, 9));
    }

    #[test]
    fn substitution_and_params() {
        let e = parse("k*x + sin(a2)").unwrap();
        assert_eq!(e.params().into_iter().collect::<Vec<_>>(), vec!["a2", "k"]);
        let mut m = BTreeMap::new();
        m.insert("k".to_string(), Scalar::int(2));
        m.insert("a2".to_string(), Scalar::int(0));
        let b = e.bind_params(&m);
        assert!(b.params().is_empty());
        assert_eq!(b.to_string(), "2*x");
        let s = parse("x*y").unwrap().substitute_vars(&[Expr::y(), Expr::x(), Expr::z()]);
        assert_eq!(s.eval_at([2.0, 5.0, 0.0]).unwrap(), 10.0);
    }
}
