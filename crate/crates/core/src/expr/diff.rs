use super::{BinOp, Expr, Func, Node, Var};

impl Expr {
    /// Exact partial derivative with respect to a coordinate.
    pub fn diff(&self, v: Var) -> Expr {
        if !self.depends_on(v) {
            return Expr::zero();
        }
        match self.node() {
            Node::Rational(..) | Node::Float(_) | Node::Param(_) => Expr::zero(),
            Node::Var(w) => {
                if *w == v {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Opaque(field) => field.partial(v),
            Node::Neg(a) => Expr::neg(&a.diff(v)),
            Node::Func(f, a) => {
                let da = a.diff(v);
                let outer = match f {
                    Func::Sin => Expr::cos(a),
                    Func::Cos => Expr::neg(&Expr::sin(a)),
                    Func::Exp => self.clone(),
                    Func::Ln => Expr::div(&Expr::one(), a),
                    Func::Sqrt => Expr::div(&Expr::one(), &Expr::mul(&Expr::int(2), self)),
                };
                Expr::mul(&outer, &da)
            }
            Node::Atan2(y, x) => {
                let num = Expr::sub(&Expr::mul(x, &y.diff(v)), &Expr::mul(y, &x.diff(v)));
                let den = Expr::add(&Expr::powi(x, 2), &Expr::powi(y, 2));
                Expr::div(&num, &den)
            }
            Node::Binary(op, a, b) => {
                let (da, db) = (a.diff(v), b.diff(v));
                match op {
                    BinOp::Add => Expr::add(&da, &db),
                    BinOp::Sub => Expr::sub(&da, &db),
                    BinOp::Mul => Expr::add(&Expr::mul(&da, b), &Expr::mul(a, &db)),
                    BinOp::Div => {
                        if db.is_zero() {
                            Expr::div(&da, b)
                        } else {
                            let num = Expr::sub(&Expr::mul(&da, b), &Expr::mul(a, &db));
                            Expr::div(&num, &Expr::powi(b, 2))
                        }
                    }
                    BinOp::Pow => {
                        if db.is_zero() {
                            // constant exponent: b a^(b-1) a'
                            let b = if b.params().is_empty() { b.simplify() } else { b.clone() };
                            let lowered = Expr::pow(a, &Expr::sub(&b, &Expr::one()));
                            Expr::mul(&Expr::mul(&b, &lowered), &da)
                        } else {
                            // a^b (b' ln a + b a'/a)
                            let t1 = Expr::mul(&db, &Expr::ln(a));
                            let t2 = Expr::div(&Expr::mul(b, &da), a);
                            Expr::mul(self, &Expr::add(&t1, &t2))
                        }
                    }
                }
            }
        }
    }
}
