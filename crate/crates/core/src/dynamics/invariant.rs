use std::fmt;
use std::sync::Arc;

use super::{cross, dot, DynamicsError, PhaseState};
use crate::expr::{grad, Bindings, Expr, VecExpr};
use crate::fields::FieldSpec;
use crate::liealg::{eta_numeric, SymGenerator};

type Grad = ([f64; 3], [f64; 3]);

struct Noether {
    fs: FieldSpec,
    /// `c0, c1, ..., c9`.
    c: [f64; 10],
    f: Expr,
    grad_f: VecExpr,
    ja: [[Expr; 3]; 3],
}

impl Noether {
    fn coeffs(&self) -> [f64; 8] {
        std::array::from_fn(|i| self.c[i + 1])
    }

    /// `∂_k η_i`.
    fn jacobian(&self) -> [[f64; 3]; 3] {
        let c = &self.c;
        let (c7, w) = (c[7], [c[6], c[5], c[4]]);
        [[c7, -w[2], w[1]], [w[2], c7, -w[0]], [-w[1], w[0], c7]]
    }

    fn time_factor(&self, t: f64) -> f64 {
        2.0 * self.c[7] * t + self.c[0]
    }

    fn value(&self, s: &PhaseState) -> Result<f64, DynamicsError> {
        let eta = eta_numeric(&self.coeffs(), s.x);
        let a = self.fs.a_at(s.x)?;
        let p = [s.v[0] + a[0], s.v[1] + a[1], s.v[2] + a[2]];
        let h = hamiltonian(&self.fs, s)?;
        Ok(dot(eta, p) - self.time_factor(s.t) * h + self.c[9] * s.t - self.f.eval_at(s.x)?)
    }

    fn gradient(&self, s: &PhaseState) -> Result<Grad, DynamicsError> {
        let eta = eta_numeric(&self.coeffs(), s.x);
        let b = Bindings::at(s.x);
        let a = self.fs.a_at(s.x)?;
        let e = self.fs.e_at(s.x)?;
        let gf = self.grad_f.eval(&b)?;
        let j = self.jacobian();
        let tf = self.time_factor(s.t);
        let mut gx = [0.0; 3];
        for k in 0..3 {
            let mut acc = 0.0;
            for i in 0..3 {
                acc += j[i][k] * (s.v[i] + a[i]) + eta[i] * self.ja[i][k].eval(&b)?;
            }
            gx[k] = acc + tf * e[k] - gf[k];
        }
        let gv = std::array::from_fn(|k| eta[k] - tf * s.v[k]);
        Ok((gx, gv))
    }
}

#[derive(Clone)]
enum Kind {
    Hamiltonian(Arc<FieldSpec>),
    Noether(Arc<Noether>),
    SumOfSquares(Vec<InvariantFn>),
    Custom(Arc<dyn Fn(&PhaseState) -> Result<f64, DynamicsError> + Send + Sync>),
}

/// A function on phase space (and time) registered for conservation and
/// bracket checks.
#[derive(Clone)]
pub struct InvariantFn {
    name: String,
    kind: Kind,
    pub is_hamiltonian: bool,
    pub is_noether: bool,
}

impl fmt::Debug for InvariantFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvariantFn").field("name", &self.name).finish()
    }
}

pub fn hamiltonian(fs: &FieldSpec, s: &PhaseState) -> Result<f64, DynamicsError> {
    Ok(dot(s.v, s.v) / 2.0 + fs.phi_at(s.x)?)
}

/// `I = η·(ẋ + A) − (2c7 t + c0) H + c9 t − f` with `c = (c0, ..., c9)`.
pub fn noether_integral(fs: &FieldSpec, c: &[f64; 10], f: &Expr, s: &PhaseState) -> Result<f64, DynamicsError> {
    let eta = eta_numeric(&std::array::from_fn(|i| c[i + 1]), s.x);
    let a = fs.a_at(s.x)?;
    let h = hamiltonian(fs, s)?;
    Ok(dot(eta, [s.v[0] + a[0], s.v[1] + a[1], s.v[2] + a[2]]) - (2.0 * c[7] * s.t + c[0]) * h + c[9] * s.t - f.eval_at(s.x)?)
}

impl InvariantFn {
    pub fn hamiltonian(fs: &FieldSpec) -> InvariantFn {
        InvariantFn {
            name: "H".into(),
            kind: Kind::Hamiltonian(Arc::new(fs.clone())),
            is_hamiltonian: true,
            is_noether: true,
        }
    }

    /// The first integral attached to `c = (c0, ..., c9)` and gauge
    /// function `f`.
    pub fn noether(name: impl Into<String>, fs: &FieldSpec, c: [f64; 10], f: Expr) -> InvariantFn {
        let ja = fs.a.jacobian().map(|r| r.map(|e| e.simplify()));
        InvariantFn {
            name: name.into(),
            is_noether: (c[8] - 2.0 * c[7]).abs() <= 1e-12 * (1.0 + c[7].abs()),
            kind: Kind::Noether(Arc::new(Noether {
                fs: fs.clone(),
                c,
                grad_f: grad(&f).simplify(),
                f,
                ja,
            })),
            is_hamiltonian: false,
        }
    }

    pub fn from_generator(name: impl Into<String>, fs: &FieldSpec, s: &SymGenerator, c9: f64, f: Expr) -> InvariantFn {
        let g = s.to_f64();
        let mut c = [0.0; 10];
        c[0] = s.c0.to_f64();
        c[1..9].copy_from_slice(&g);
        c[9] = c9;
        InvariantFn::noether(name, fs, c, f)
    }

    pub fn sum_of_squares(name: impl Into<String>, parts: Vec<InvariantFn>) -> InvariantFn {
        InvariantFn {
            name: name.into(),
            kind: Kind::SumOfSquares(parts),
            is_hamiltonian: false,
            is_noether: false,
        }
    }

    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(&PhaseState) -> Result<f64, DynamicsError> + Send + Sync + 'static,
    ) -> InvariantFn {
        InvariantFn {
            name: name.into(),
            kind: Kind::Custom(Arc::new(f)),
            is_hamiltonian: false,
            is_noether: false,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, s: &PhaseState) -> Result<f64, DynamicsError> {
        match &self.kind {
            Kind::Hamiltonian(fs) => hamiltonian(fs, s),
            Kind::Noether(n) => n.value(s),
            Kind::SumOfSquares(parts) => parts.iter().map(|p| p.value(s).map(|v| v * v)).sum(),
            Kind::Custom(f) => f(s),
        }
    }

    /// `(∂I/∂x, ∂I/∂ẋ)` in closed form, when available.
    pub fn exact_gradient(&self, s: &PhaseState) -> Option<Result<Grad, DynamicsError>> {
        match &self.kind {
            Kind::Hamiltonian(fs) => Some(fs.e_at(s.x).map(|e| (e.map(|c| -c), s.v)).map_err(Into::into)),
            Kind::Noether(n) => Some(n.gradient(s)),
            Kind::SumOfSquares(parts) => {
                let mut gx = [0.0; 3];
                let mut gv = [0.0; 3];
                for p in parts {
                    let g = match p.exact_gradient(s)? {
                        Ok(g) => g,
                        Err(e) => return Some(Err(e)),
                    };
                    let v = match p.value(s) {
                        Ok(v) => v,
                        Err(e) => return Some(Err(e)),
                    };
                    for k in 0..3 {
                        gx[k] += 2.0 * v * g.0[k];
                        gv[k] += 2.0 * v * g.1[k];
                    }
                }
                Some(Ok((gx, gv)))
            }
            Kind::Custom(_) => None,
        }
    }

    /// Central differences with step `1e-5` and one Richardson level.
    pub fn numeric_gradient(&self, s: &PhaseState) -> Result<Grad, DynamicsError> {
        let h = 1e-5;
        let mut g = [0.0; 6];
        for (k, slot) in g.iter_mut().enumerate() {
            let d = |h: f64| -> Result<f64, DynamicsError> {
                let (mut p, mut m) = (*s, *s);
                if k < 3 {
                    p.x[k] += h;
                    m.x[k] -= h;
                } else {
                    p.v[k - 3] += h;
                    m.v[k - 3] -= h;
                }
                Ok((self.value(&p)? - self.value(&m)?) / (2.0 * h))
            };
            *slot = (4.0 * d(h / 2.0)? - d(h)?) / 3.0;
        }
        Ok(([g[0], g[1], g[2]], [g[3], g[4], g[5]]))
    }

    pub fn gradient(&self, s: &PhaseState) -> Result<Grad, DynamicsError> {
        match self.exact_gradient(s) {
            Some(g) => g,
            None => self.numeric_gradient(s),
        }
    }
}

/// `∂_x I1·∂_ẋ I2 − ∂_ẋ I1·∂_x I2 + B·(∂_ẋ I1 × ∂_ẋ I2)`.
pub fn poisson_bracket(i1: &InvariantFn, i2: &InvariantFn, fs: &FieldSpec, s: &PhaseState) -> Result<f64, DynamicsError> {
    let (x1, v1) = i1.gradient(s)?;
    let (x2, v2) = i2.gradient(s)?;
    let b = fs.b_at(s.x)?;
    Ok(dot(x1, v2) - dot(v1, x2) + dot(b, cross(v1, v2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dipole() -> FieldSpec {
        FieldSpec::parse(["-y/(x^2+y^2+z^2)^(3/2)", "x/(x^2+y^2+z^2)^(3/2)", "0"], "x*z/5").unwrap()
    }

    fn state() -> PhaseState {
        PhaseState {
            t: 0.7,
            x: [0.8, -0.4, 0.6],
            v: [0.3, 0.5, -0.2],
        }
    }

    #[test]
    fn time_translation_gives_minus_energy() {
        let fs = dipole();
        let mut c = [0.0; 10];
        c[0] = 1.0;
        let s = state();
        let i = noether_integral(&fs, &c, &Expr::zero(), &s).unwrap();
        assert!((i + hamiltonian(&fs, &s).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn rotation_integral_of_dipole() {
        let fs = dipole();
        let mut c = [0.0; 10];
        c[4] = 1.0;
        let s = state();
        let [x, y, z] = s.x;
        let r3 = (x * x + y * y + z * z).powf(1.5);
        let want = x * s.v[1] - y * s.v[0] + (x * x + y * y) / r3;
        assert!((noether_integral(&fs, &c, &Expr::zero(), &s).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn exact_and_numeric_gradients_agree() {
        let fs = dipole();
        let c = [0.3, 0.1, -0.2, 0.5, 1.0, -0.4, 0.7, 0.25, 0.5, 0.2];
        let f = crate::expr::parse("x*y - z^2/3").unwrap();
        let inv = InvariantFn::noether("I", &fs, c, f);
        let sq = InvariantFn::sum_of_squares("Q", vec![inv.clone(), InvariantFn::hamiltonian(&fs)]);
        for i in [inv, sq] {
            let (ex, ev) = i.exact_gradient(&state()).unwrap().unwrap();
            let (nx, nv) = i.numeric_gradient(&state()).unwrap();
            for k in 0..3 {
                assert!((ex[k] - nx[k]).abs() < 1e-8, "{k}: {ex:?} {nx:?}");
                assert!((ev[k] - nv[k]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let fs = dipole();
        let h = InvariantFn::hamiltonian(&fs);
        let g = InvariantFn::custom("g", |s: &PhaseState| Ok(s.x[0] * s.v[1] + s.v[2].powi(2) * s.x[2]));
        let s = state();
        assert_eq!(poisson_bracket(&h, &h, &fs, &s).unwrap(), 0.0);
        let a = poisson_bracket(&h, &g, &fs, &s).unwrap();
        let b = poisson_bracket(&g, &h, &fs, &s).unwrap();
        assert!((a + b).abs() < 1e-9);
    }
}
