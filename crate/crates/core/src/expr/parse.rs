use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{BinOp, Expr, Func, Var};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownFunction { offset, .. } => *offset,
        }
    }

    /// The message without its position.
    pub fn reason(&self) -> String {
        match self {
            ParseError::Syntax { message, .. } => message.clone(),
            ParseError::UnknownFunction { name, .. } => format!("unknown function `{name}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Float(f64),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((start, Tok::End));
        };
        if c.is_ascii_digit() || (c == '.' && rest[1..].starts_with(|d: char| d.is_ascii_digit())) {
            return self.number(start);
        }
        if c.is_alphabetic() || c == '_' {
            let len = rest
                .char_indices()
                .find(|(_, ch)| !(ch.is_alphanumeric() || *ch == '_'))
                .map(|(i, _)| i)
                .unwrap_or(rest.len());
            self.pos += len;
            return Ok((start, Tok::Ident(rest[..len].to_string())));
        }
        if "+-*/^(),".contains(c) {
            self.pos += 1;
            return Ok((start, Tok::Op(c)));
        }
        Err(ParseError::Syntax {
            offset: start,
            message: format!("unexpected character `{c}`"),
        })
    }

    fn number(&mut self, start: usize) -> Result<(usize, Tok), ParseError> {
        let bytes = self.src.as_bytes();
        let mut i = start;
        let digits = |i: &mut usize| {
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
        };
        digits(&mut i);
        let mut is_float = false;
        if i < bytes.len() && bytes[i] == b'.' {
            is_float = true;
            i += 1;
            digits(&mut i);
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                is_float = true;
                i = j;
                digits(&mut i);
            }
        }
        let text = &self.src[start..i];
        self.pos = i;
        let bad = || ParseError::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        };
        if is_float {
            let v = f64::from_str(text).map_err(|_| bad())?;
            Ok((start, Tok::Float(v)))
        } else {
            Ok((start, Tok::Int(BigInt::from_str(text).map_err(|_| bad())?)))
        }
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ParseError> {
        let (at, tok) = self.lex.next()?;
        self.at = at;
        self.tok = tok;
        Ok(())
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.at,
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.tok == Tok::Op(c) {
            self.bump()
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Expr::raw_binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.tok {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.factor()?;
            lhs = Expr::raw_binary(op, lhs, rhs);
        }
    }

    // A leading minus binds looser than `^`, so `-x^2` is `-(x^2)`.
    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.tok == Tok::Op('-') {
            self.bump()?;
            return Ok(Expr::raw_neg(self.factor()?));
        }
        let base = self.base()?;
        if self.tok == Tok::Op('^') {
            self.bump()?;
            let exp = self.factor()?;
            return Ok(Expr::raw_binary(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let at = self.at;
        match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Int(n) => {
                self.bump()?;
                Ok(Expr::rational(BigRational::from_integer(n)))
            }
            Tok::Float(v) => {
                self.bump()?;
                Ok(Expr::float(v))
            }
            Tok::Op('(') => {
                self.bump()?;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump()?;
                if self.tok == Tok::Op('(') {
                    self.bump()?;
                    let mut args = vec![self.expr()?];
                    while self.tok == Tok::Op(',') {
                        self.bump()?;
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    return call(&name, args, at);
                }
                Ok(match name.as_str() {
                    "x" => Expr::var(Var::X),
                    "y" => Expr::var(Var::Y),
                    "z" => Expr::var(Var::Z),
                    _ => Expr::param(&name),
                })
            }
            Tok::End => {
                self.at = at;
                self.err("unexpected end of input")
            }
            tok => {
                self.tok = tok;
                self.err("expected a number, identifier or `(`")
            }
        }
    }
}

fn call(name: &str, mut args: Vec<Expr>, offset: usize) -> Result<Expr, ParseError> {
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                offset,
                message: format!("`{name}` takes {n} argument(s), got {}", args.len()),
            })
        }
    };
    if name == "atan2" {
        arity(2)?;
        let x = args.pop().unwrap();
        let y = args.pop().unwrap();
        return Ok(Expr::raw_atan2(y, x));
    }
    match Func::from_name(name) {
        Some(f) => {
            arity(1)?;
            Ok(Expr::raw_func(f, args.pop().unwrap()))
        }
        None => Err(ParseError::UnknownFunction {
            offset,
            name: name.to_string(),
        }),
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        lex: Lexer { src: text, pos: 0 },
        tok: Tok::End,
        at: 0,
    };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Node;

    #[test]
    fn builds_raw_tree() {
        let e = parse("x^2 + y").unwrap();
        match e.node() {
            Node::Binary(BinOp::Add, a, b) => {
                assert!(matches!(a.node(), Node::Binary(BinOp::Pow, _, _)));
                assert_eq!(*b, Expr::y());
            }
            _ => panic!("wrong shape"),
        }
    }

    #[test]
    fn minus_binds_below_power() {
        let e = parse("-x^2").unwrap();
        assert_eq!(e.eval_at([3.0, 0.0, 0.0]).unwrap(), -9.0);
        assert_eq!(parse("2^-1").unwrap().eval_at([0.0; 3]).unwrap(), 0.5);
        assert_eq!(parse("2^3^2").unwrap().eval_at([0.0; 3]).unwrap(), 512.0);
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse("x + * y").unwrap_err();
        assert_eq!(e.offset(), 4);
        let e = parse("x + foo(y)").unwrap_err();
        assert!(matches!(e, ParseError::UnknownFunction { offset: 4, .. }));
        assert_eq!(parse("(x + y").unwrap_err().offset(), 6);
        assert_eq!(parse("x $ y").unwrap_err().offset(), 2);
        assert!(parse("").is_err());
        assert!(parse("atan2(x)").is_err());
    }

    #[test]
    fn unicode_parameters() {
        let e = parse("λ*x + k_1").unwrap();
        let names: Vec<_> = e.params().into_iter().collect();
        assert_eq!(names, vec!["k_1", "λ"]);
    }

    #[test]
    fn numbers() {
        assert!(matches!(parse("2.5").unwrap().node(), Node::Float(_)));
        assert!(matches!(parse("1e-3").unwrap().node(), Node::Float(_)));
        assert!(matches!(parse("12").unwrap().node(), Node::Rational(..)));
        assert_eq!(parse(".5").unwrap().eval_at([0.0; 3]).unwrap(), 0.5);
    }
}
