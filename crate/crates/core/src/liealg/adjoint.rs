use std::fmt;

use serde_json::json;

use super::EquivGenerator;
use crate::expr::Expr;
use crate::scalar::Scalar;

/// A rotation angle carried with its cosine and sine so that quarter turns
/// and Pythagorean angles stay exact.
#[derive(Clone, Debug, PartialEq)]
pub struct Angle {
    pub cos: Scalar,
    pub sin: Scalar,
    pub radians: f64,
}

impl Angle {
    pub fn zero() -> Angle {
        Angle {
            cos: Scalar::one(),
            sin: Scalar::zero(),
            radians: 0.0,
        }
    }

    pub fn radians(theta: f64) -> Angle {
        if theta == 0.0 {
            return Angle::zero();
        }
        Angle {
            cos: Scalar::float(theta.cos()),
            sin: Scalar::float(theta.sin()),
            radians: theta,
        }
    }

    pub fn quarter_turns(n: i64) -> Angle {
        let (c, s) = match n.rem_euclid(4) {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        Angle {
            cos: Scalar::int(c),
            sin: Scalar::int(s),
            radians: n as f64 * std::f64::consts::FRAC_PI_2,
        }
    }

    /// The polar angle of the vector `(a, b)`, i.e. `atan2(b, a)`; exact
    /// whenever `a² + b²` is a rational square.
    pub fn toward(a: &Scalar, b: &Scalar) -> Angle {
        let r = (&(a * a) + &(b * b)).sqrt();
        if r.is_zero() {
            return Angle::zero();
        }
        Angle {
            cos: a / &r,
            sin: b / &r,
            radians: b.to_f64().atan2(a.to_f64()),
        }
    }

    pub fn inverse(&self) -> Angle {
        Angle {
            cos: self.cos.clone(),
            sin: -&self.sin,
            radians: -self.radians,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sin.is_zero() && self.cos.to_f64() > 0.0
    }

    pub fn is_exact(&self) -> bool {
        self.cos.is_exact() && self.sin.is_exact()
    }
}

/// One of the one-parameter inner automorphisms of the equivalence algebra.
#[derive(Clone, Debug, PartialEq)]
pub enum AdjointStep {
    /// Conjugation by the translation `V_axis`, `axis ∈ {1, 2, 3}`.
    Translate { axis: usize, eps: Scalar },
    /// Conjugation by the rotation `V_axis`, `axis ∈ {4, 5, 6}`.
    Rotate { axis: usize, angle: Angle },
    /// Uniform scaling of the translation coefficients by `eps7`.
    Scale7 { eps7: Scalar },
    /// Scaling of `c9` by `eps8`.
    Scale8 { eps8: Scalar },
    /// Shift of `c9` by `(c7 − c8)·eps9`.
    Shift9 { eps9: Scalar },
    /// Gauge conjugation by `V_g`.
    Gauge { g: Expr },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AdjointError {
    #[error("scaling parameter must be nonzero")]
    ZeroScale,
    #[error("negative eps8 cannot act on a nonzero gauge part")]
    NegativeGaugeScale,
    #[error("axis {0} is not valid for this step")]
    Axis(usize),
}

/// Rotation matrix of the flow generated by `V_axis` at the given angle.
pub fn rotation_matrix(axis: usize, angle: &Angle) -> [[Scalar; 3]; 3] {
    let (c, s) = (angle.cos.clone(), angle.sin.clone());
    let (o, l) = (Scalar::zero(), Scalar::one());
    match axis {
        4 => [[c.clone(), -&s, o.clone()], [s, c, o.clone()], [o.clone(), o, l]],
        5 => [[c.clone(), o.clone(), s.clone()], [o.clone(), l, o.clone()], [-&s, o, c]],
        6 => [[l, o.clone(), o.clone()], [o.clone(), c.clone(), -&s], [o, s, c]],
        _ => panic!("rotation axis must be 4, 5 or 6"),
    }
}

fn linear_subs(m: &[[Scalar; 3]; 3], shift: &[Scalar; 3]) -> [Expr; 3] {
    let xs = [Expr::x(), Expr::y(), Expr::z()];
    std::array::from_fn(|i| {
        let mut e = Expr::scalar(&shift[i]);
        for (j, x) in xs.iter().enumerate() {
            e = Expr::add(&e, &x.scale(&m[i][j]));
        }
        e
    })
}

fn rot2(c: &mut [Scalar; 9], i: usize, j: usize, cos: &Scalar, sin: &Scalar) {
    // (ci, cj) -> (ci cos + cj sin, cj cos − ci sin), 1-based indices
    let (a, b) = (c[i - 1].clone(), c[j - 1].clone());
    c[i - 1] = &(&a * cos) + &(&b * sin);
    c[j - 1] = &(&b * cos) - &(&a * sin);
}

impl AdjointStep {
    pub fn validate(&self) -> Result<(), AdjointError> {
        match self {
            AdjointStep::Translate { axis, .. } if !(1..=3).contains(axis) => Err(AdjointError::Axis(*axis)),
            AdjointStep::Rotate { axis, .. } if !(4..=6).contains(axis) => Err(AdjointError::Axis(*axis)),
            AdjointStep::Scale7 { eps7 } if eps7.is_zero() => Err(AdjointError::ZeroScale),
            AdjointStep::Scale8 { eps8 } if eps8.is_zero() => Err(AdjointError::ZeroScale),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, v: &EquivGenerator) -> Result<EquivGenerator, AdjointError> {
        self.validate()?;
        let mut c = v.c.clone();
        let mut f = v.gauge.clone();
        let transport = !f.is_zero();
        match self {
            AdjointStep::Translate { axis, eps } => {
                let [c1, c2, c3, c4, c5, c6, c7, ..] = &v.c;
                let (d1, d2, d3) = match axis {
                    1 => (c7.clone(), c4.clone(), -c5),
                    2 => (-c4, c7.clone(), c6.clone()),
                    _ => (c5.clone(), -c6, c7.clone()),
                };
                c[0] = c1 + &(eps * &d1);
                c[1] = c2 + &(eps * &d2);
                c[2] = c3 + &(eps * &d3);
                if transport {
                    let mut shift = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
                    shift[axis - 1] = eps.clone();
                    let id = rotation_matrix(4, &Angle::zero());
                    f = f.substitute_vars(&linear_subs(&id, &shift));
                }
            }
            AdjointStep::Rotate { axis, angle } => {
                let (co, si) = (&angle.cos, &angle.sin);
                match axis {
                    4 => {
                        rot2(&mut c, 1, 2, co, si);
                        rot2(&mut c, 6, 5, co, si);
                    }
                    5 => {
                        rot2(&mut c, 3, 1, co, si);
                        rot2(&mut c, 4, 6, co, si);
                    }
                    _ => {
                        rot2(&mut c, 2, 3, co, si);
                        rot2(&mut c, 5, 4, co, si);
                    }
                }
                if transport {
                    let zero = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
                    f = f.substitute_vars(&linear_subs(&rotation_matrix(*axis, angle), &zero));
                }
            }
            AdjointStep::Scale7 { eps7 } => {
                for ci in c.iter_mut().take(3) {
                    *ci = eps7 * &*ci;
                }
                if transport {
                    let inv = eps7.recip();
                    let m = std::array::from_fn(|i| {
                        std::array::from_fn(|j| if i == j { inv.clone() } else { Scalar::zero() })
                    });
                    let zero = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
                    f = f.substitute_vars(&linear_subs(&m, &zero)).scale(eps7);
                }
            }
            AdjointStep::Scale8 { eps8 } => {
                c[8] = eps8 * &c[8];
                if transport {
                    if eps8.signum() < 0 {
                        return Err(AdjointError::NegativeGaugeScale);
                    }
                    f = f.scale(&eps8.sqrt());
                }
            }
            AdjointStep::Shift9 { eps9 } => {
                c[8] = &c[8] + &(&(&v.c[6] - &v.c[7]) * eps9);
            }
            AdjointStep::Gauge { g } => {
                f = Expr::sub(&f, &v.related_operator().apply(g));
            }
        }
        Ok(EquivGenerator { c, gauge: f })
    }

    /// `(G, s)` with this step equal to `exp(s·ad G)`, when the step lies on
    /// a one-parameter subgroup.
    pub fn infinitesimal(&self) -> Option<(EquivGenerator, f64)> {
        match self {
            AdjointStep::Translate { axis, eps } => Some((EquivGenerator::basis(*axis), eps.to_f64())),
            AdjointStep::Rotate { axis, angle } => Some((EquivGenerator::basis(*axis), angle.radians)),
            AdjointStep::Scale7 { eps7 } if eps7.signum() > 0 => Some((
                EquivGenerator::basis(7).add(&EquivGenerator::basis(8)),
                -eps7.to_f64().ln(),
            )),
            AdjointStep::Scale8 { eps8 } if eps8.signum() > 0 => {
                Some((EquivGenerator::basis(8), eps8.to_f64().ln() / 2.0))
            }
            AdjointStep::Shift9 { eps9 } => Some((EquivGenerator::basis(9), eps9.to_f64() / 2.0)),
            AdjointStep::Gauge { g } => Some((EquivGenerator::gauge_only(g.clone()), 1.0)),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            AdjointStep::Translate { eps, .. } => eps.is_exact(),
            AdjointStep::Rotate { angle, .. } => angle.is_exact(),
            AdjointStep::Scale7 { eps7 } => eps7.is_exact(),
            AdjointStep::Scale8 { eps8 } => eps8.is_exact(),
            AdjointStep::Shift9 { eps9 } => eps9.is_exact(),
            AdjointStep::Gauge { .. } => true,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            AdjointStep::Translate { axis, eps } => {
                json!({"kind": "translate", "generator": axis, "eps": eps.to_string()})
            }
            AdjointStep::Rotate { axis, angle } => json!({
                "kind": "rotate",
                "generator": axis,
                "radians": angle.radians,
                "cos": angle.cos.to_string(),
                "sin": angle.sin.to_string(),
            }),
            AdjointStep::Scale7 { eps7 } => json!({"kind": "scale-translations", "eps": eps7.to_string()}),
            AdjointStep::Scale8 { eps8 } => json!({"kind": "scale-potential-shift", "eps": eps8.to_string()}),
            AdjointStep::Shift9 { eps9 } => json!({"kind": "shift-potential", "eps": eps9.to_string()}),
            AdjointStep::Gauge { g } => json!({"kind": "gauge", "g": g.to_string()}),
        }
    }
}

impl fmt::Display for AdjointStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdjointStep::Translate { axis, eps } => write!(f, "Ad exp({eps}·V{axis})"),
            AdjointStep::Rotate { axis, angle } => write!(f, "Ad exp({}·V{axis})", angle.radians),
            AdjointStep::Scale7 { eps7 } => write!(f, "scale translations by {eps7}"),
            AdjointStep::Scale8 { eps8 } => write!(f, "scale c9 by {eps8}"),
            AdjointStep::Shift9 { eps9 } => write!(f, "shift c9 by (c7 - c8)·{eps9}"),
            AdjointStep::Gauge { g } => write!(f, "gauge by {g}"),
        }
    }
}

/// Applies the steps in order.
pub fn apply_all(steps: &[AdjointStep], v: &EquivGenerator) -> Result<EquivGenerator, AdjointError> {
    let mut out = v.clone();
    for s in steps {
        out = s.apply(&out)?;
    }
    Ok(out)
}
