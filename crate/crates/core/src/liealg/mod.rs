//! The equivalence algebra: nine finite generators `V1..V9` plus the gauge
//! generators `V_f = ∇f·∂_A`.

mod adjoint;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::expr::{grad, parse, Expr, ParseError, VecExpr};
use crate::scalar::Scalar;

pub use adjoint::{apply_all, rotation_matrix, AdjointError, AdjointStep, Angle};

/// `TABLE1[i][j] = (k, m)` means `[V_{i+1}, V_{j+1}] = k·V_m`; `m = 0` is zero.
const TABLE1: [[(i8, u8); 9]; 9] = [
    [(0, 0), (0, 0), (0, 0), (1, 2), (-1, 3), (0, 0), (1, 1), (0, 0), (0, 0)],
    [(0, 0), (0, 0), (0, 0), (-1, 1), (0, 0), (1, 3), (1, 2), (0, 0), (0, 0)],
    [(0, 0), (0, 0), (0, 0), (0, 0), (1, 1), (-1, 2), (1, 3), (0, 0), (0, 0)],
    [(-1, 2), (1, 1), (0, 0), (0, 0), (1, 6), (-1, 5), (0, 0), (0, 0), (0, 0)],
    [(1, 3), (0, 0), (-1, 1), (-1, 6), (0, 0), (1, 4), (0, 0), (0, 0), (0, 0)],
    [(0, 0), (-1, 3), (1, 2), (1, 5), (-1, 4), (0, 0), (0, 0), (0, 0), (0, 0)],
    [(-1, 1), (-1, 2), (-1, 3), (0, 0), (0, 0), (0, 0), (0, 0), (0, 0), (-2, 9)],
    [(0, 0), (0, 0), (0, 0), (0, 0), (0, 0), (0, 0), (0, 0), (0, 0), (2, 9)],
    [(0, 0), (0, 0), (0, 0), (0, 0), (0, 0), (0, 0), (2, 9), (-2, 9), (0, 0)],
];

/// Bracket of two basis generators (1-based) as an integer coefficient
/// vector.
pub fn structure(i: usize, j: usize) -> [i64; 9] {
    let (k, m) = TABLE1[i - 1][j - 1];
    let mut out = [0; 9];
    if m > 0 {
        out[m as usize - 1] = k as i64;
    }
    out
}

/// An element `Σ c_i V_i + V_f` of the equivalence algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivGenerator {
    pub c: [Scalar; 9],
    pub gauge: Expr,
}

impl EquivGenerator {
    pub fn zero() -> EquivGenerator {
        EquivGenerator {
            c: std::array::from_fn(|_| Scalar::zero()),
            gauge: Expr::zero(),
        }
    }

    /// The basis generator `V_i`, 1-based.
    pub fn basis(i: usize) -> EquivGenerator {
        assert!((1..=9).contains(&i), "generator index out of range");
        let mut g = EquivGenerator::zero();
        g.c[i - 1] = Scalar::one();
        g
    }

    pub fn from_ints(c: [i64; 9]) -> EquivGenerator {
        EquivGenerator {
            c: c.map(Scalar::int),
            gauge: Expr::zero(),
        }
    }

    pub fn from_scalars(c: [Scalar; 9]) -> EquivGenerator {
        EquivGenerator { c, gauge: Expr::zero() }
    }

    /// The pure gauge generator `V_f`.
    pub fn gauge_only(f: Expr) -> EquivGenerator {
        EquivGenerator {
            c: EquivGenerator::zero().c,
            gauge: f,
        }
    }

    pub fn with_gauge(mut self, f: Expr) -> EquivGenerator {
        self.gauge = f;
        self
    }

    /// Coefficient of `V_i`, 1-based.
    pub fn coef(&self, i: usize) -> &Scalar {
        &self.c[i - 1]
    }

    pub fn add(&self, o: &EquivGenerator) -> EquivGenerator {
        EquivGenerator {
            c: std::array::from_fn(|i| &self.c[i] + &o.c[i]),
            gauge: Expr::add(&self.gauge, &o.gauge),
        }
    }

    pub fn sub(&self, o: &EquivGenerator) -> EquivGenerator {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> EquivGenerator {
        EquivGenerator {
            c: std::array::from_fn(|i| s * &self.c[i]),
            gauge: self.gauge.scale(s),
        }
    }

    pub fn finite_is_zero(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }

    /// The gauge part is tested structurally after simplification; callers
    /// needing a semantic test should sample it.
    pub fn is_zero(&self) -> bool {
        self.finite_is_zero() && self.gauge.simplify().is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.c.iter().all(Scalar::is_exact)
    }

    pub fn finite_f64(&self) -> [f64; 9] {
        std::array::from_fn(|i| self.c[i].to_f64())
    }

    pub fn finite_part(&self) -> EquivGenerator {
        EquivGenerator::from_scalars(self.c.clone())
    }

    /// Rotation vector `w = (c6, c5, c4)`; the rotation part of `η` is `w × x`.
    pub fn rotation_vector(&self) -> [Scalar; 3] {
        [self.c[5].clone(), self.c[4].clone(), self.c[3].clone()]
    }

    pub fn translation(&self) -> [Scalar; 3] {
        [self.c[0].clone(), self.c[1].clone(), self.c[2].clone()]
    }

    pub fn related_operator(&self) -> RelatedOperator {
        RelatedOperator::of(&self.c)
    }

    /// `(c7, c8, c4² + c5² + c6²)`.
    pub fn invariants(&self) -> (Scalar, Scalar, Scalar) {
        let c = &(&self.c[3] * &self.c[3]) + &(&(&self.c[4] * &self.c[4]) + &(&self.c[5] * &self.c[5]));
        (self.c[6].clone(), self.c[7].clone(), c)
    }

    pub fn project(&self) -> SymGenerator {
        SymGenerator {
            c0: Scalar::zero(),
            c: std::array::from_fn(|i| self.c[i].clone()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GeneratorRepr {
            c: self.c.iter().map(|s| s.to_string()).collect(),
            f: self.gauge.to_string(),
        })
        .expect("generator serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<EquivGenerator, GeneratorFormatError> {
        let repr: GeneratorRepr =
            serde_json::from_value(v.clone()).map_err(|e| GeneratorFormatError::Json(e.to_string()))?;
        if repr.c.len() != 9 {
            return Err(GeneratorFormatError::Length(repr.c.len()));
        }
        let mut c = EquivGenerator::zero().c;
        for (slot, text) in c.iter_mut().zip(&repr.c) {
            *slot = text
                .parse()
                .map_err(|_| GeneratorFormatError::Coefficient(text.clone()))?;
        }
        let gauge = if repr.f.trim().is_empty() { Expr::zero() } else { parse(&repr.f)? };
        Ok(EquivGenerator { c, gauge })
    }
}

impl fmt::Display for EquivGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c.is_exact() && *c == Scalar::one() {
                write!(f, "V{}", i + 1)?;
            } else {
                write!(f, "({c})V{}", i + 1)?;
            }
        }
        if !self.gauge.is_zero() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "V[{}]", self.gauge)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct GeneratorRepr {
    c: Vec<String>,
    #[serde(default)]
    f: String,
}

#[derive(Debug, thiserror::Error)]
pub enum GeneratorFormatError {
    #[error("malformed generator JSON: {0}")]
    Json(String),
    #[error("expected 9 coefficients, found {0}")]
    Length(usize),
    #[error("invalid coefficient `{0}`")]
    Coefficient(String),
    #[error("invalid gauge expression: {0}")]
    Gauge(#[from] ParseError),
}

/// A point symmetry `c0 v0 + Σ c_i v_i`, `i = 1..8`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymGenerator {
    pub c0: Scalar,
    pub c: [Scalar; 8],
}

impl SymGenerator {
    pub fn zero() -> SymGenerator {
        SymGenerator {
            c0: Scalar::zero(),
            c: std::array::from_fn(|_| Scalar::zero()),
        }
    }

    pub fn from_f64(c: [f64; 8]) -> SymGenerator {
        SymGenerator {
            c0: Scalar::zero(),
            c: c.map(Scalar::float),
        }
    }

    pub fn from_ints(c: [i64; 8]) -> SymGenerator {
        SymGenerator {
            c0: Scalar::zero(),
            c: c.map(Scalar::int),
        }
    }

    pub fn time() -> SymGenerator {
        SymGenerator {
            c0: Scalar::one(),
            ..SymGenerator::zero()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c.iter().all(Scalar::is_zero)
    }

    pub fn to_f64(&self) -> [f64; 8] {
        std::array::from_fn(|i| self.c[i].to_f64())
    }

    pub fn is_noether(&self) -> bool {
        (&self.c[7] - &(&Scalar::int(2) * &self.c[6])).is_zero()
    }

    /// Lift to the equivalence algebra with `c9 = 0` and no gauge part.
    pub fn lift(&self) -> EquivGenerator {
        let mut g = EquivGenerator::zero();
        for i in 0..8 {
            g.c[i] = self.c[i].clone();
        }
        g
    }

    /// Reads a linear combination such as `v4 + 3*v8` or `v0 - v7/2`.
    pub fn parse(src: &str) -> Result<SymGenerator, GeneratorFormatError> {
        let e = parse(src)?;
        if let Some(stray) = e.params().into_iter().find(|n| !(0..=8).any(|j| *n == format!("v{j}"))) {
            return Err(GeneratorFormatError::Coefficient(stray));
        }
        let coef = |i: usize| -> Result<Scalar, GeneratorFormatError> {
            let mut c = e.clone();
            for j in 0..=8 {
                let v = if i == j { Expr::one() } else { Expr::zero() };
                c = c.substitute_param(&format!("v{j}"), &v);
            }
            let zero = (0..=8).fold(e.clone(), |c, j| c.substitute_param(&format!("v{j}"), &Expr::zero()));
            match (c.simplify().as_scalar(), zero.simplify().as_scalar()) {
                (Some(a), Some(b)) if b.is_zero() => Ok(&a - &b),
                _ => Err(GeneratorFormatError::Coefficient(format!("v{i}"))),
            }
        };
        let mut g = SymGenerator::zero();
        g.c0 = coef(0)?;
        for i in 1..=8 {
            g.c[i - 1] = coef(i)?;
        }
        // linearity probe at an irrational point
        let probe: Vec<f64> = (0..=8).map(|j| (j as f64 + 2.0).sqrt()).collect();
        let b = (0..=8).fold(crate::expr::Bindings::new(), |b, j| b.param(&format!("v{j}"), probe[j]));
        let want = g.c0.to_f64() * probe[0] + (1..=8).map(|j| g.c[j - 1].to_f64() * probe[j]).sum::<f64>();
        let got = e.eval(&b).map_err(|_| GeneratorFormatError::Coefficient(src.to_string()))?;
        if (got - want).abs() > 1e-9 * (1.0 + want.abs()) {
            return Err(GeneratorFormatError::Coefficient(src.to_string()));
        }
        Ok(g)
    }

    pub fn eta_at(&self, p: [f64; 3]) -> [f64; 3] {
        let c = self.to_f64();
        eta_numeric(&c, p)
    }
}

impl fmt::Display for SymGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if !self.c0.is_zero() {
            terms.push(format!("{}v0", self.c0));
        }
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                terms.push(format!("{c}v{}", i + 1));
            }
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// `η(x) = c7 x + w × x + a` for an 8-vector of symmetry coefficients.
pub fn eta_numeric(c: &[f64; 8], p: [f64; 3]) -> [f64; 3] {
    let w = [c[5], c[4], c[3]];
    let [x, y, z] = p;
    [
        c[6] * x + w[1] * z - w[2] * y + c[0],
        c[6] * y + w[2] * x - w[0] * z + c[1],
        c[6] * z + w[0] * y - w[1] * x + c[2],
    ]
}

/// `U = (M x + a)·∇ + (c8 − 2c7)`, with `M_ij = c7 δ_ij − ε_ijk c_{7−k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelatedOperator {
    pub matrix: [[Scalar; 3]; 3],
    pub translation: [Scalar; 3],
    pub scalar: Scalar,
}

impl RelatedOperator {
    fn of(c: &[Scalar; 9]) -> RelatedOperator {
        let (c4, c5, c6, c7) = (&c[3], &c[4], &c[5], &c[6]);
        let matrix = [
            [c7.clone(), -c4, c5.clone()],
            [c4.clone(), c7.clone(), -c6],
            [-c5, c6.clone(), c7.clone()],
        ];
        RelatedOperator {
            matrix,
            translation: [c[0].clone(), c[1].clone(), c[2].clone()],
            scalar: &c[7] - &(&Scalar::int(2) * c7),
        }
    }

    /// The characteristic field `η = M x + a` as expressions.
    pub fn eta(&self) -> VecExpr {
        let xs = [Expr::x(), Expr::y(), Expr::z()];
        let row = |i: usize| {
            let mut e = Expr::scalar(&self.translation[i]);
            for (j, x) in xs.iter().enumerate() {
                e = Expr::add(&e, &x.scale(&self.matrix[i][j]));
            }
            e
        };
        VecExpr::new(row(0), row(1), row(2))
    }

    /// `η·∇g + scalar·g`.
    pub fn apply(&self, g: &Expr) -> Expr {
        Expr::add(&self.eta().dot(&grad(g)), &g.scale(&self.scalar))
    }
}

/// Lie bracket; the gauge part is `U_V(g_W) − U_W(g_V)`.
pub fn bracket(v: &EquivGenerator, w: &EquivGenerator) -> EquivGenerator {
    let mut c = EquivGenerator::zero().c;
    for i in 0..9 {
        if v.c[i].is_zero() {
            continue;
        }
        for j in 0..9 {
            if w.c[j].is_zero() {
                continue;
            }
            let (k, m) = TABLE1[i][j];
            if m == 0 {
                continue;
            }
            let term = &Scalar::int(k as i64) * &(&v.c[i] * &w.c[j]);
            c[m as usize - 1] = &c[m as usize - 1] + &term;
        }
    }
    let gauge = Expr::sub(
        &v.related_operator().apply(&w.gauge),
        &w.related_operator().apply(&v.gauge),
    );
    EquivGenerator { c, gauge }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `V_i` as an affine field `M p + b` on `(t, x, y, z, A1, A2, A3, Φ)`.
    fn affine(i: usize) -> ([[i64; 8]; 8], [i64; 8]) {
        let mut m = [[0i64; 8]; 8];
        let mut b = [0i64; 8];
        let (t, x, y, z, a1, a2, a3, phi) = (0, 1, 2, 3, 4, 5, 6, 7);
        match i {
            1 => b[x] = 1,
            2 => b[y] = 1,
            3 => b[z] = 1,
            4 => {
                m[y][x] = 1;
                m[x][y] = -1;
                m[a2][a1] = 1;
                m[a1][a2] = -1;
            }
            5 => {
                m[x][z] = 1;
                m[z][x] = -1;
                m[a1][a3] = 1;
                m[a3][a1] = -1;
            }
            6 => {
                m[z][y] = 1;
                m[y][z] = -1;
                m[a3][a2] = 1;
                m[a2][a3] = -1;
            }
            7 => {
                for k in [x, y, z, a1, a2, a3] {
                    m[k][k] = 1;
                }
                m[phi][phi] = 2;
            }
            8 => {
                m[t][t] = 1;
                for k in [a1, a2, a3] {
                    m[k][k] = -1;
                }
                m[phi][phi] = -2;
            }
            9 => b[phi] = 1,
            _ => unreachable!(),
        }
        (m, b)
    }

    fn combine(c: &[i64; 9]) -> ([[i64; 8]; 8], [i64; 8]) {
        let mut m = [[0i64; 8]; 8];
        let mut b = [0i64; 8];
        for (i, ci) in c.iter().enumerate() {
            let (mi, bi) = affine(i + 1);
            for r in 0..8 {
                b[r] += ci * bi[r];
                for s in 0..8 {
                    m[r][s] += ci * mi[r][s];
                }
            }
        }
        (m, b)
    }

    /// Commutator of affine fields: `[X, Y]` has matrix `N M − M N` and
    /// offset `N b − M d`.
    fn affine_bracket(x: &([[i64; 8]; 8], [i64; 8]), y: &([[i64; 8]; 8], [i64; 8])) -> ([[i64; 8]; 8], [i64; 8]) {
        let (m, b) = x;
        let (n, d) = y;
        let mut out_m = [[0i64; 8]; 8];
        let mut out_b = [0i64; 8];
        for r in 0..8 {
            for s in 0..8 {
                for k in 0..8 {
                    out_m[r][s] += n[r][k] * m[k][s] - m[r][k] * n[k][s];
                }
            }
            for k in 0..8 {
                out_b[r] += n[r][k] * b[k] - m[r][k] * d[k];
            }
        }
        (out_m, out_b)
    }

    #[test]
    fn generator_text() {
        let g = SymGenerator::parse("v4 + 3*v8 - v0/2").unwrap();
        assert_eq!(g.c0, Scalar::ratio(-1, 2));
        assert_eq!(g.to_f64(), [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 3.0]);
        assert!(SymGenerator::parse("v4*v5").is_err());
        assert!(SymGenerator::parse("v4 + 1").is_err());
        assert!(SymGenerator::parse("w4").is_err());
    }

    #[test]
    fn table_matches_vector_field_commutators() {
        for i in 1..=9 {
            for j in 1..=9 {
                let expected = affine_bracket(&affine(i), &affine(j));
                assert_eq!(combine(&structure(i, j)), expected, "[V{i}, V{j}]");
            }
        }
    }

    #[test]
    fn printed_entries() {
        assert_eq!(bracket(&EquivGenerator::basis(1), &EquivGenerator::basis(4)), EquivGenerator::basis(2));
        let r = bracket(&EquivGenerator::basis(7), &EquivGenerator::basis(9));
        assert_eq!(r, EquivGenerator::basis(9).scale(&Scalar::int(-2)));
        let r = bracket(&EquivGenerator::basis(9), &EquivGenerator::basis(7));
        assert_eq!(r, EquivGenerator::basis(9).scale(&Scalar::int(2)));
    }

    #[test]
    fn related_operator_matches_eta() {
        let v = EquivGenerator::from_ints([1, 2, 3, 4, 5, 6, 7, 8, 9]);
        let p = [0.3, -1.2, 0.7];
        let eta = v.related_operator().eta().eval_at(p).unwrap();
        let direct = eta_numeric(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0], p);
        for k in 0..3 {
            assert!((eta[k] - direct[k]).abs() < 1e-14);
        }
        assert_eq!(v.related_operator().scalar, Scalar::int(8 - 14));
    }

    #[test]
    fn json_round_trip() {
        let v = EquivGenerator::from_scalars([
            Scalar::ratio(1, 2),
            Scalar::int(0),
            Scalar::int(-3),
            Scalar::int(1),
            Scalar::int(0),
            Scalar::int(0),
            Scalar::int(2),
            Scalar::int(0),
            Scalar::int(5),
        ])
        .with_gauge(parse("x*y").unwrap());
        let j = v.to_json();
        assert_eq!(j["c"][0], "1/2");
        let back = EquivGenerator::from_json(&j).unwrap();
        assert_eq!(back.c, v.c);
        assert_eq!(back.gauge.to_string(), "x*y");
        assert!(EquivGenerator::from_json(&serde_json::json!({"c": ["1"]})).is_err());
    }

    #[test]
    fn projection_drops_c9_and_gauge() {
        assert!(EquivGenerator::basis(9).project().is_zero());
        assert!(EquivGenerator::gauge_only(Expr::x()).project().is_zero());
        let v = EquivGenerator::from_ints([0, 0, 0, 1, 0, 0, 2, 2, 6]);
        assert_eq!(v.project(), SymGenerator::from_ints([0, 0, 0, 1, 0, 0, 2, 2]));
    }

    #[test]
    fn invariants_read_off() {
        let v = EquivGenerator::from_ints([0, 0, 0, 1, 0, 0, 2, 3, 0]);
        assert_eq!(v.invariants(), (Scalar::int(2), Scalar::int(3), Scalar::int(1)));
    }
}
