//! Continuous and discrete equivalence transformations of the potentials.

use serde::{Deserialize, Serialize};

use super::{Affine, FieldSpec};
use crate::expr::{grad, Expr, VecExpr};
use crate::liealg::{rotation_matrix, Angle, SymGenerator};
use crate::scalar::Scalar;

type Mat = [[Scalar; 3]; 3];

fn identity() -> Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Scalar::one() } else { Scalar::zero() }))
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(Scalar::zero(), |s, k| &s + &(&a[i][k] * &b[k][j])))
    })
}

fn transpose(a: &Mat) -> Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].clone()))
}

fn apply(m: &Mat, v: &[Scalar; 3]) -> [Scalar; 3] {
    std::array::from_fn(|i| (0..3).fold(Scalar::zero(), |s, k| &s + &(&m[i][k] * &v[k])))
}

fn to_f64(m: &Mat) -> [[f64; 3]; 3] {
    m.clone().map(|r| r.map(|c| c.to_f64()))
}

/// `Σ_j m_ij x_j + b_i` as expressions.
fn affine_exprs(m: &Mat, b: &[Scalar; 3]) -> [Expr; 3] {
    let xs = [Expr::x(), Expr::y(), Expr::z()];
    std::array::from_fn(|i| {
        let mut e = Expr::scalar(&b[i]);
        for (j, x) in xs.iter().enumerate() {
            e = Expr::add(&e, &x.scale(&m[i][j]));
        }
        e
    })
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransformError {
    #[error("scaling parameters must be nonzero")]
    ZeroScale,
    #[error("invalid axes ({0}, {1})")]
    Axes(usize, usize),
}

/// A finite equivalence transformation:
/// `t̃ = ε8 t + ε0`, `x̃ = ε7 R x + ε`, `Ã = (ε7/ε8) R A∘T⁻¹ + ∇g`,
/// `Φ̃ = (ε7/ε8)² Φ∘T⁻¹ + ε9`.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub e0: Scalar,
    pub e8: Scalar,
    pub e7: Scalar,
    pub rot: [[Scalar; 3]; 3],
    pub shift: [Scalar; 3],
    pub e9: Scalar,
    /// Gauge function in the new coordinates.
    pub gauge: Expr,
}

impl Default for GroupElement {
    fn default() -> GroupElement {
        GroupElement::identity()
    }
}

impl GroupElement {
    pub fn identity() -> GroupElement {
        GroupElement {
            e0: Scalar::zero(),
            e8: Scalar::one(),
            e7: Scalar::one(),
            rot: identity(),
            shift: std::array::from_fn(|_| Scalar::zero()),
            e9: Scalar::zero(),
            gauge: Expr::zero(),
        }
    }

    /// From `ε0..ε9` with `R = R1(ε6)·R2(ε5)·R3(ε4)`.
    pub fn from_params(eps: [f64; 10], g: Expr) -> Result<GroupElement, TransformError> {
        let s = |i: usize| {
            let v = eps[i];
            if v.fract() == 0.0 && v.abs() < 1e15 {
                Scalar::int(v as i64)
            } else {
                Scalar::float(v)
            }
        };
        GroupElement {
            e0: s(0),
            e8: s(8),
            e7: s(7),
            rot: identity(),
            shift: [s(1), s(2), s(3)],
            e9: s(9),
            gauge: g,
        }
        .rotate(6, &Angle::radians(eps[6]))
        .rotate(5, &Angle::radians(eps[5]))
        .rotate(4, &Angle::radians(eps[4]))
        .checked()
    }

    fn checked(self) -> Result<GroupElement, TransformError> {
        if self.e7.is_zero() || self.e8.is_zero() {
            Err(TransformError::ZeroScale)
        } else {
            Ok(self)
        }
    }

    /// Right-multiplies the rotation by the one generated by `v_axis`.
    pub fn rotate(mut self, axis: usize, angle: &Angle) -> GroupElement {
        if !angle.is_zero() {
            self.rot = matmul(&self.rot, &rotation_matrix(axis, angle));
        }
        self
    }

    pub fn gauge_only(g: Expr) -> GroupElement {
        GroupElement {
            gauge: g,
            ..GroupElement::identity()
        }
    }

    pub fn inverse(&self) -> GroupElement {
        let rt = transpose(&self.rot);
        let shift = apply(&rt, &self.shift).map(|c| -&(&c / &self.e7));
        let ratio = &self.e8 / &self.e7;
        let subs = affine_exprs(&self.rot.clone().map(|r| r.map(|c| &c * &self.e7)), &self.shift);
        GroupElement {
            e0: -&(&self.e0 / &self.e8),
            e8: self.e8.recip(),
            e7: self.e7.recip(),
            rot: rt,
            shift,
            e9: -&(&self.e9 * &(&ratio * &ratio)),
            gauge: self
                .gauge
                .substitute_vars(&subs)
                .scale(&-&(&ratio / &self.e7))
                .simplify(),
        }
    }

    /// Old coordinates as expressions in the new ones.
    fn pullback(&self) -> [Expr; 3] {
        let inv = self.inverse();
        let m = inv.rot.clone().map(|r| r.map(|c| &c * &inv.e7));
        affine_exprs(&m, &inv.shift)
    }

    fn inverse_affine(&self) -> Affine {
        let inv = self.inverse();
        Affine {
            m: to_f64(&inv.rot).map(|r| r.map(|c| c * inv.e7.to_f64())),
            b: inv.shift.clone().map(|c| c.to_f64()),
        }
    }

    /// Image of a symmetry generator: the transformed field admits it
    /// whenever the original admits `s`.
    pub fn pushforward(&self, s: &SymGenerator) -> SymGenerator {
        let c = &s.c;
        let w = [c[5].clone(), c[4].clone(), c[3].clone()];
        let a = [c[0].clone(), c[1].clone(), c[2].clone()];
        let rw = apply(&self.rot, &w);
        let ra = apply(&self.rot, &a);
        // M̃ε = c7 ε + (Rw)×ε
        let e = &self.shift;
        let cross = [
            &(&rw[1] * &e[2]) - &(&rw[2] * &e[1]),
            &(&rw[2] * &e[0]) - &(&rw[0] * &e[2]),
            &(&rw[0] * &e[1]) - &(&rw[1] * &e[0]),
        ];
        let at: [Scalar; 3] =
            std::array::from_fn(|i| &(&(&self.e7 * &ra[i]) - &(&c[6] * &e[i])) - &cross[i]);
        let [a1, a2, a3] = at;
        let [w6, w5, w4] = rw;
        SymGenerator {
            c0: &(&self.e8 * &s.c0) - &(&c[7] * &self.e0),
            c: [a1, a2, a3, w4, w5, w6, c[6].clone(), c[7].clone()],
        }
    }
}

pub fn apply_equivalence(fs: &FieldSpec, g: &GroupElement) -> Result<FieldSpec, TransformError> {
    let g = g.clone().checked()?;
    let subs = g.pullback();
    let ratio = &g.e7 / &g.e8;
    let a_old = fs.a.substitute_vars(&subs);
    let ra: [Expr; 3] = std::array::from_fn(|i| {
        (0..3).fold(Expr::zero(), |s, k| Expr::add(&s, &a_old.0[k].scale(&(&g.rot[i][k] * &ratio))))
    });
    let a = VecExpr(ra).add(&grad(&g.gauge)).simplify();
    let phi = Expr::add(&fs.phi.substitute_vars(&subs).scale(&(&ratio * &ratio)), &Expr::scalar(&g.e9)).simplify();
    Ok(fs.rebuilt(a, phi, Some(g.inverse_affine())))
}

/// The four discrete equivalence maps. Axes are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiscreteMap {
    /// `t → −t`, `x → −x`.
    Reversal,
    /// `t → −t`, `A → −A`.
    Conjugation,
    /// `t → −t`, `x^i → −x^i`, `x^j → −x^j`, `A^k → −A^k`.
    PairFlip(usize, usize),
    /// `x^i ↔ x^j`, `A^i ↔ A^j`.
    Swap(usize, usize),
}

impl DiscreteMap {
    pub fn from_number(which: usize, i: usize, j: usize) -> Result<DiscreteMap, TransformError> {
        let m = match which {
            1 => DiscreteMap::Reversal,
            2 => DiscreteMap::Conjugation,
            3 => DiscreteMap::PairFlip(i, j),
            4 => DiscreteMap::Swap(i, j),
            _ => return Err(TransformError::Axes(i, j)),
        };
        m.validate().map(|_| m)
    }

    fn validate(&self) -> Result<(), TransformError> {
        match *self {
            DiscreteMap::PairFlip(i, j) | DiscreteMap::Swap(i, j) if i == j || !(1..=3).contains(&i) || !(1..=3).contains(&j) => {
                Err(TransformError::Axes(i, j))
            }
            _ => Ok(()),
        }
    }

    /// `(P, σ)` with `x̃ = P x` and `Ã(x̃) = σ P A(x)`.
    fn action(&self) -> ([[i64; 3]; 3], i64) {
        let mut p = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        match *self {
            DiscreteMap::Reversal => {
                p = [[-1, 0, 0], [0, -1, 0], [0, 0, -1]];
                // x → −x with A untouched: σ P = 1
                (p, -1)
            }
            DiscreteMap::Conjugation => (p, -1),
            DiscreteMap::PairFlip(i, j) => {
                p[i - 1][i - 1] = -1;
                p[j - 1][j - 1] = -1;
                (p, -1)
            }
            DiscreteMap::Swap(i, j) => {
                p[i - 1][i - 1] = 0;
                p[j - 1][j - 1] = 0;
                p[i - 1][j - 1] = 1;
                p[j - 1][i - 1] = 1;
                (p, 1)
            }
        }
    }

    /// Whether time is reversed.
    pub fn reverses_time(&self) -> bool {
        !matches!(self, DiscreteMap::Swap(..))
    }

    /// Image of a phase-space point `(x, v)`.
    pub fn map_state(&self, x: [f64; 3], v: [f64; 3]) -> ([f64; 3], [f64; 3]) {
        let (p, _) = self.action();
        let tv = if self.reverses_time() { -1.0 } else { 1.0 };
        let px = |u: [f64; 3]| std::array::from_fn(|i| (0..3).map(|k| p[i][k] as f64 * u[k]).sum::<f64>());
        let (nx, nv): ([f64; 3], [f64; 3]) = (px(x), px(v));
        (nx, nv.map(|c| tv * c))
    }
}

pub fn apply_discrete(fs: &FieldSpec, map: DiscreteMap) -> Result<FieldSpec, TransformError> {
    map.validate()?;
    let (p, sigma) = map.action();
    let m: Mat = p.map(|r| r.map(Scalar::int));
    // every P is its own inverse
    let subs = affine_exprs(&m, &std::array::from_fn(|_| Scalar::zero()));
    let a_old = fs.a.substitute_vars(&subs);
    let a: [Expr; 3] = std::array::from_fn(|i| {
        (0..3).fold(Expr::zero(), |s, k| Expr::add(&s, &a_old.0[k].scale(&Scalar::int(sigma * p[i][k]))))
    });
    let phi = fs.phi.substitute_vars(&subs).simplify();
    let frame = Affine {
        m: p.map(|r| r.map(|c| c as f64)),
        b: [0.0; 3],
    };
    Ok(fs.rebuilt(VecExpr(a).simplify(), phi, Some(frame)))
}
