//! Sectioned key/value field files.
//!
//! ```text
//! # dipole
//! [potential]
//! A1 = -y/r^3
//! A2 = x/r^3
//! A3 = 0
//! Phi = 0
//! [params]
//! lambda = 1/2
//! [domain]
//! exclude = origin, axis
//! positive = z
//! ```
//!
//! `rho`, `r` and `phi` are shorthands for the cylindrical radius, the
//! spherical radius and `atan2(y, x)`; using them excludes the matching
//! singular set unless a `[domain]` section says otherwise.

use std::collections::BTreeMap;

use super::{DomainHint, FieldError, FieldSpec};
use crate::expr::{parse, Expr, ParseError, VecExpr};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldFileError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("missing key {0} in [potential]")]
    Missing(&'static str),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl FieldFileError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            FieldFileError::Parse { offset, .. } => Some(*offset),
            _ => None,
        }
    }

    fn at(offset: usize, message: impl Into<String>) -> FieldFileError {
        FieldFileError::Parse {
            offset,
            message: message.into(),
        }
    }
}

fn shifted(e: ParseError, base: usize) -> FieldFileError {
    FieldFileError::at(base + e.offset(), e.reason())
}

pub fn parse_field_file(src: &str) -> Result<FieldSpec, FieldFileError> {
    let mut section = String::new();
    let mut potential: BTreeMap<String, Expr> = BTreeMap::new();
    let mut params = BTreeMap::new();
    let mut domain: Option<DomainHint> = None;
    let mut start = 0;
    for line in src.split_inclusive('\n') {
        let base = start;
        start += line.len();
        let body = line.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lead = body.len() - body.trim_start().len();
        if let Some(name) = trimmed.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| FieldFileError::at(base + lead, "unterminated section header"))?;
            section = name.trim().to_string();
            if !matches!(section.as_str(), "potential" | "params" | "domain") {
                return Err(FieldFileError::at(base + lead, format!("unknown section [{section}]")));
            }
            continue;
        }
        let Some(eq) = body.find('=') else {
            return Err(FieldFileError::at(base + lead, "expected key = value"));
        };
        let key = body[..eq].trim();
        let value = &body[eq + 1..];
        let vbase = base + eq + 1;
        match section.as_str() {
            "potential" => {
                if !matches!(key, "A1" | "A2" | "A3" | "Phi") {
                    return Err(FieldFileError::at(base + lead, format!("unknown potential key {key}")));
                }
                let e = parse(value).map_err(|e| shifted(e, vbase))?;
                potential.insert(key.to_string(), e);
            }
            "params" => {
                let v: Scalar = value
                    .trim()
                    .parse()
                    .map_err(|_| FieldFileError::at(vbase + (value.len() - value.trim_start().len()), "expected a number"))?;
                params.insert(key.to_string(), v);
            }
            "domain" => {
                let d = domain.get_or_insert_with(DomainHint::everywhere);
                let mut off = vbase;
                for item in value.split(',') {
                    let word = item.trim();
                    let here = off + item.len() - item.trim_start().len();
                    off += item.len() + 1;
                    match (key, word) {
                        ("exclude", "axis") => d.axis = true,
                        ("exclude", "origin") => d.origin = true,
                        ("exclude", "branch_cut") => d.branch_cut = true,
                        ("positive", "x") => d.positive[0] = true,
                        ("positive", "y") => d.positive[1] = true,
                        ("positive", "z") => d.positive[2] = true,
                        (_, "") => {}
                        _ => return Err(FieldFileError::at(here, format!("unknown {key} entry {word:?}"))),
                    }
                }
            }
            _ => return Err(FieldFileError::at(base + lead, "key outside a section")),
        }
    }
    let get = |k: &'static str| potential.get(k).cloned().ok_or(FieldFileError::Missing(k));
    let mut a = VecExpr::new(get("A1")?, get("A2")?, get("A3")?);
    let mut phi = potential.get("Phi").cloned().unwrap_or_else(Expr::zero);
    let mut auto = DomainHint::everywhere();
    let shorthands = [
        ("phi", "atan2(y, x)"),
        ("rho", "sqrt(x^2 + y^2)"),
        ("r", "sqrt(x^2 + y^2 + z^2)"),
    ];
    for (name, sub) in shorthands {
        let used = a.0.iter().chain([&phi]).any(|e| e.params().contains(name)) && !params.contains_key(name);
        if used {
            match name {
                "phi" => {
                    auto.axis = true;
                    auto.branch_cut = true;
                }
                "rho" => auto.axis = true,
                _ => auto.origin = true,
            }
            let sub = parse(sub).expect("shorthand parses");
            a = a.map(|e| e.substitute_param(name, &sub));
            phi = phi.substitute_param(name, &sub);
        }
    }
    Ok(FieldSpec::new("field file", a, phi, params, domain.unwrap_or(auto))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dipole_file() {
        let src = "# dipole\n[potential]\nA1 = -y/r^3\nA2 = x/r^3\nA3 = 0\n\n[params]\n";
        let fs = parse_field_file(src).unwrap();
        assert!(fs.domain.origin && !fs.domain.axis);
        let a = fs.a_at([1.0, 0.0, 0.0]).unwrap();
        assert_eq!(a, [0.0, 1.0, 0.0]);
        assert_eq!(fs.phi_at([1.0, 2.0, 3.0]).unwrap(), 0.0);
    }

    #[test]
    fn params_and_domain() {
        let src = "[potential]\nA1 = 0\nA2 = lambda*x\nA3 = 0\nPhi = q*z\n[params]\nlambda = 1/2\nq = 0.25\n[domain]\npositive = z\n";
        let fs = parse_field_file(src).unwrap();
        assert_eq!(fs.b_at([1.0, 1.0, 1.0]).unwrap(), [0.0, 0.0, 0.5]);
        assert_eq!(fs.e_at([1.0, 1.0, 1.0]).unwrap(), [0.0, 0.0, -0.25]);
        assert!(fs.domain.positive[2] && !fs.domain.origin);
    }

    #[test]
    fn errors_carry_absolute_offsets() {
        let src = "[potential]\nA1 = x +* y\nA2 = 0\nA3 = 0\n";
        let err = parse_field_file(src).unwrap_err();
        assert_eq!(err.offset(), Some(src.find('*').unwrap()));
        let src = "[potential]\nA1 = 0\nA2 = 0\nA3 = 0\n[params]\nk = abc\n";
        assert_eq!(parse_field_file(src).unwrap_err().offset(), Some(src.find("abc").unwrap()));
        let src = "[potential]\nA1 = k\nA2 = 0\nA3 = 0\n";
        assert!(matches!(parse_field_file(src).unwrap_err(), FieldFileError::Field(_)));
        assert_eq!(parse_field_file("[potential]\nA1 = 0\n").unwrap_err(), FieldFileError::Missing("A2"));
        assert_eq!(parse_field_file("A1 = 0\n").unwrap_err().offset(), Some(0));
    }
}
