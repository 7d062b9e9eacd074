use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::GaussLegendre;

use crate::expr::{curl, grad, EvalError, Expr, ScalarField, Var, VecExpr};
use crate::fields::FieldSpec;
use crate::liealg::SymGenerator;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GaugeError {
    #[error("gauge vector is not a gradient: |curl| = {0:.3e}")]
    NotExact(f64),
    #[error("scalar condition is not constant: spread {0:.3e}")]
    NotConstant(f64),
    #[error("no regular sample points")]
    NoPoints,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn eta_expr(s: &SymGenerator) -> (VecExpr, VecExpr) {
    let c: Vec<Expr> = s.c.iter().map(Expr::scalar).collect();
    let x = VecExpr::new(Expr::x(), Expr::y(), Expr::z());
    let w = VecExpr::new(c[5].clone(), c[4].clone(), c[3].clone());
    let a = VecExpr::new(c[0].clone(), c[1].clone(), c[2].clone());
    let eta = a.add(&x.scale(&c[6])).add(&w.cross(&x));
    (eta, w)
}

/// `G = η·∇A − (c7 − c8) A − w × A`; a symmetry makes `G = ∇f`.
pub fn gauge_vector(fs: &FieldSpec, s: &SymGenerator) -> VecExpr {
    let (eta, w) = eta_expr(s);
    let k = Expr::scalar(&(&s.c[6] - &s.c[7]));
    fs.a
        .advect(&eta)
        .add(&fs.a.scale(&Expr::neg(&k)))
        .add(&w.cross(&fs.a).scale(&Expr::int(-1)))
        .simplify()
}

/// `c9 = η·∇Φ − 2(c7 − c8) Φ`, required to be constant.
pub fn fix_c9(fs: &FieldSpec, s: &SymGenerator, points: &[[f64; 3]]) -> Result<f64, GaugeError> {
    let (eta, _) = eta_expr(s);
    let k = Expr::scalar(&(&s.c[6] - &s.c[7]));
    let e = Expr::sub(&eta.dot(&grad(&fs.phi)), &Expr::mul(&Expr::mul(&Expr::int(2), &k), &fs.phi)).simplify();
    let vals: Vec<f64> = points.iter().map(|p| e.eval_at(*p)).collect::<Result<_, _>>()?;
    let Some(first) = vals.first() else { return Err(GaugeError::NoPoints) };
    let spread = vals.iter().map(|v| (v - first).abs()).fold(0.0, f64::max);
    if spread > 1e-8 * (1.0 + first.abs()) {
        return Err(GaugeError::NotConstant(spread));
    }
    Ok(vals.iter().sum::<f64>() / vals.len() as f64)
}

/// `f(p) = ∫ G·dl` along a path from a base point, evaluated with
/// composite Gauss–Legendre quadrature.
pub struct QuadratureGauge {
    g: VecExpr,
    base: [f64; 3],
    fs: FieldSpec,
    rule: GaussLegendre,
}

const PIECES: usize = 4;
const MAX_DEPTH: usize = 14;
const PATH_SAMPLES: usize = 64;

impl QuadratureGauge {
    fn segment_ok(&self, a: [f64; 3], b: [f64; 3]) -> bool {
        (0..=PATH_SAMPLES).all(|i| {
            let s = i as f64 / PATH_SAMPLES as f64;
            self.fs.domain.admits(std::array::from_fn(|k| a[k] + s * (b[k] - a[k])))
        })
    }

    fn line(&self, a: [f64; 3], d: [f64; 3], lo: f64, hi: f64, err: &mut Option<EvalError>) -> f64 {
        self.rule.integrate(lo, hi, |s| {
            let p = std::array::from_fn(|k| a[k] + s * d[k]);
            match self.g.eval_at(p) {
                Ok(g) => g[0] * d[0] + g[1] * d[1] + g[2] * d[2],
                Err(e) => {
                    *err = Some(e);
                    0.0
                }
            }
        })
    }

    /// Adaptive bisection until the halves agree with the whole.
    fn adapt(&self, a: [f64; 3], d: [f64; 3], lo: f64, hi: f64, whole: f64, depth: usize, err: &mut Option<EvalError>) -> f64 {
        let mid = 0.5 * (lo + hi);
        let left = self.line(a, d, lo, mid, err);
        let right = self.line(a, d, mid, hi, err);
        let sum = left + right;
        if depth == 0 || (sum - whole).abs() <= 1e-13 * (1.0 + left.abs() + right.abs()) {
            return sum;
        }
        self.adapt(a, d, lo, mid, left, depth - 1, err) + self.adapt(a, d, mid, hi, right, depth - 1, err)
    }

    fn segment(&self, a: [f64; 3], b: [f64; 3]) -> Result<f64, EvalError> {
        let d: [f64; 3] = std::array::from_fn(|k| b[k] - a[k]);
        let mut err = None;
        let mut total = 0.0;
        for piece in 0..PIECES {
            let lo = piece as f64 / PIECES as f64;
            let hi = (piece + 1) as f64 / PIECES as f64;
            let whole = self.line(a, d, lo, hi, &mut err);
            total += self.adapt(a, d, lo, hi, whole, MAX_DEPTH, &mut err);
        }
        match err {
            Some(e) => Err(e),
            None => Ok(total),
        }
    }

    /// Straight segment when it stays in the domain, otherwise a detour
    /// through one of a few fixed waypoints.
    fn path(&self, p: [f64; 3]) -> Vec<[f64; 3]> {
        if self.segment_ok(self.base, p) {
            return vec![self.base, p];
        }
        let r = (p.iter().chain(&self.base).map(|c| c * c).sum::<f64>() / 2.0).sqrt().max(0.5);
        let mut candidates = Vec::new();
        for sx in [1.0, -1.0] {
            for sy in [1.0, -1.0] {
                for sz in [1.0, -1.0] {
                    candidates.push([sx * r, sy * r, sz * r]);
                }
            }
        }
        for q in candidates {
            if self.fs.domain.admits(q) && self.segment_ok(self.base, q) && self.segment_ok(q, p) {
                return vec![self.base, q, p];
            }
        }
        vec![self.base, p]
    }
}

impl ScalarField for QuadratureGauge {
    fn label(&self) -> String {
        format!("∫G·dl from ({}, {}, {})", self.base[0], self.base[1], self.base[2])
    }

    fn value(&self, p: [f64; 3]) -> Result<f64, EvalError> {
        let path = self.path(p);
        path.windows(2).map(|w| self.segment(w[0], w[1])).sum()
    }

    fn partial(&self, v: Var) -> Expr {
        self.g.0[v.index()].clone()
    }
}

/// Reconstructs the gauge function `f` of a symmetry, vanishing at the
/// first sample point. Fails when `G` is not curl-free on the samples.
pub fn gauge_reconstruct(fs: &FieldSpec, s: &SymGenerator, points: &[[f64; 3]]) -> Result<Expr, GaugeError> {
    let g = gauge_vector(fs, s);
    let Some(base) = points.first().copied() else { return Err(GaugeError::NoPoints) };
    let cg = curl(&g);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for p in points {
        let c = cg.eval_at(*p)?;
        let gv = g.eval_at(*p)?;
        worst = worst.max(c.iter().fold(0.0, |m, v| m.max(v.abs())));
        scale = scale.max(gv.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    if worst > 1e-8 * (1.0 + scale) {
        return Err(GaugeError::NotExact(worst));
    }
    if scale == 0.0 {
        return Ok(Expr::zero());
    }
    let rule = GaussLegendre::new(NonZeroUsize::new(16).expect("nonzero"));
    Ok(Expr::opaque(Arc::new(QuadratureGauge {
        g,
        base,
        fs: fs.clone(),
        rule,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::DomainHint;

    #[test]
    fn uniform_field_rotation_gauge() {
        // A = (−y, x, 0)/2 is rotation invariant, no gauge needed
        let fs = FieldSpec::parse(["-y/2", "x/2", "0"], "0").unwrap();
        let s = SymGenerator::from_ints([0, 0, 0, 1, 0, 0, 0, 0]);
        let pts = fs.sample_points(10, 0.5, 2.0, 0);
        assert!(gauge_reconstruct(&fs, &s, &pts).unwrap().is_zero());
        // a translation needs f = (x2 a1 − x1 a2)/2-type gauge
        let s = SymGenerator::from_ints([1, 0, 0, 0, 0, 0, 0, 0]);
        let f = gauge_reconstruct(&fs, &s, &pts).unwrap();
        let base = pts[0];
        for p in &pts {
            let want = (p[1] - base[1]) / 2.0;
            assert!((f.eval_at(*p).unwrap() - want).abs() < 1e-12);
        }
        assert_eq!(f.diff(Var::Y).eval_at([0.3, 0.1, 0.2]).unwrap(), 0.5);
    }

    #[test]
    fn monopole_rotation_gauge() {
        let r = "sqrt(x^2+y^2+z^2)";
        let fs = FieldSpec::parse([&format!("y*z/({r}*(x^2+y^2))"), &format!("-x*z/({r}*(x^2+y^2))"), "0"], "0")
            .unwrap()
            .with_domain(DomainHint {
                axis: true,
                ..Default::default()
            });
        let pts = fs.sample_points(20, 0.5, 2.0, 0);
        let s = SymGenerator::from_ints([0, 0, 0, 0, 0, 1, 0, 0]);
        let f = gauge_reconstruct(&fs, &s, &pts).unwrap();
        let exact = |p: [f64; 3]| {
            let rr = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            p[0] * rr / (p[0] * p[0] + p[1] * p[1])
        };
        let b = pts[0];
        for p in &pts {
            let got = f.eval_at(*p).unwrap();
            assert!((got - (exact(*p) - exact(b))).abs() < 1e-9, "{p:?} {got}");
        }
    }

    #[test]
    fn non_symmetry_is_rejected() {
        let fs = FieldSpec::parse(["-y/2", "x/2", "0"], "0").unwrap();
        let s = SymGenerator::from_ints([0, 0, 0, 0, 1, 0, 0, 0]);
        let pts = fs.sample_points(10, 0.5, 2.0, 0);
        assert!(matches!(gauge_reconstruct(&fs, &s, &pts), Err(GaugeError::NotExact(_))));
    }

    #[test]
    fn c9_from_potential() {
        let fs = FieldSpec::parse(["0", "0", "0"], "x + y^2").unwrap();
        let s = SymGenerator::from_ints([2, 0, 0, 0, 0, 0, 0, 0]);
        let pts = fs.sample_points(10, 0.5, 2.0, 0);
        assert_eq!(fix_c9(&fs, &s, &pts).unwrap(), 2.0);
        let s = SymGenerator::from_ints([0, 1, 0, 0, 0, 0, 0, 0]);
        assert!(fix_c9(&fs, &s, &pts).is_err());
    }
}
