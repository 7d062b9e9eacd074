use serde_json::json;

use super::tables::{find_row, Params};
use crate::liealg::{apply_all, AdjointError, AdjointStep, Angle, EquivGenerator};
use crate::scalar::Scalar;

/// Relative threshold below which floating coefficients count as zero.
const ZERO_REL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalClass1D {
    /// Row of the one-dimensional optimal system, 1..=8.
    pub class_id: usize,
    pub params: Params,
    pub witness: Vec<AdjointStep>,
    pub scale: Scalar,
    /// `scale · witness(input)`.
    pub representative: EquivGenerator,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CanonError {
    #[error("generator projects to the zero symmetry and has no one-dimensional class")]
    Degenerate,
    #[error("adjoint step failed: {0}")]
    Adjoint(#[from] AdjointError),
}

impl CanonicalClass1D {
    pub fn to_json(&self) -> serde_json::Value {
        let params: serde_json::Map<String, serde_json::Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), json!(v.to_string())))
            .collect();
        json!({
            "class": self.class_id,
            "params": params,
            "scale": self.scale.to_string(),
            "witness": self.witness.iter().map(AdjointStep::to_json).collect::<Vec<_>>(),
            "representative": self.representative.to_json(),
        })
    }

    /// Replays the witness on `v` and returns the largest coefficient
    /// deviation from the stored representative.
    pub fn replay_error(&self, v: &EquivGenerator) -> Result<f64, AdjointError> {
        let out = apply_all(&self.witness, v)?.scale(&self.scale);
        Ok((0..9)
            .map(|i| (out.c[i].to_f64() - self.representative.c[i].to_f64()).abs())
            .fold(0.0, f64::max))
    }
}

struct Chain {
    v: EquivGenerator,
    steps: Vec<AdjointStep>,
    tol: f64,
}

impl Chain {
    fn zero(&self, s: &Scalar) -> bool {
        s.is_negligible(self.tol)
    }

    fn push(&mut self, step: AdjointStep) -> Result<(), CanonError> {
        let trivial = match &step {
            AdjointStep::Translate { eps, .. } | AdjointStep::Shift9 { eps9: eps } => self.zero(eps),
            AdjointStep::Rotate { angle, .. } => angle.is_zero(),
            _ => false,
        };
        if !trivial {
            self.v = step.apply(&self.v)?;
            self.steps.push(step);
        }
        Ok(())
    }

    fn c(&self, i: usize) -> Scalar {
        self.v.c[i - 1].clone()
    }
}

/// Reduces a generator to its row of the one-dimensional optimal system.
///
/// Steps act linearly, so the overall rescaling commutes with the witness;
/// the chain is computed on the rescaled generator.
pub fn canonicalize_1d(v: &EquivGenerator) -> Result<CanonicalClass1D, CanonError> {
    let mag = v.c.iter().map(|s| s.to_f64().abs()).fold(0.0, f64::max);
    let tol = ZERO_REL * mag.max(f64::MIN_POSITIVE);
    let (c7, c8, c) = v.invariants();
    let zero = |s: &Scalar| s.is_negligible(tol);
    let translation_zero = v.c[..3].iter().all(|s| zero(s));

    let mut ch = Chain {
        v: v.clone(),
        steps: Vec::new(),
        tol,
    };

    let (class_id, params, scale) = if !c.is_negligible(tol * mag) {
        ch.push(AdjointStep::Rotate {
            axis: 5,
            angle: Angle::toward(&ch.c(4), &ch.c(6)),
        })?;
        ch.push(AdjointStep::Rotate {
            axis: 6,
            angle: Angle::toward(&ch.c(4), &-&ch.c(5)),
        })?;
        let scale = ch.c(4).recip();
        ch.v = ch.v.scale(&scale);
        ch.tol = tol * scale.to_f64().abs().max(1.0);
        let (a1, a2, k7) = (ch.c(1), ch.c(2), ch.c(7));
        let det = &(&k7 * &k7) + &Scalar::one();
        let eps1 = &(&-&(&a1 * &k7) - &a2) / &det;
        let eps2 = &(&a1 - &(&a2 * &k7)) / &det;
        ch.push(AdjointStep::Translate { axis: 1, eps: eps1 })?;
        ch.push(AdjointStep::Translate { axis: 2, eps: eps2 })?;
        let k8 = ch.c(8);
        if !zero(&c7) {
            ch.push(AdjointStep::Translate {
                axis: 3,
                eps: &-&ch.c(3) / &k7,
            })?;
            if !(c7.approx_eq(&c8, ZERO_REL)) {
                ch.push(AdjointStep::Shift9 {
                    eps9: &-&ch.c(9) / &(&k7 - &k8),
                })?;
                (1, params(&[("k1", k7), ("k2", k8)]), scale)
            } else {
                let lambda = &ch.c(9) / &k7;
                (2, params(&[("k", k7), ("lambda", lambda)]), scale)
            }
        } else if !zero(&c8) {
            ch.push(AdjointStep::Shift9 {
                eps9: &ch.c(9) / &k8,
            })?;
            (3, params(&[("k1", ch.c(3)), ("k2", k8)]), scale)
        } else {
            (4, params(&[("k", ch.c(3)), ("lambda", ch.c(9))]), scale)
        }
    } else if !zero(&c7) {
        let scale = c7.recip();
        ch.v = ch.v.scale(&scale);
        ch.tol = tol * scale.to_f64().abs().max(1.0);
        for axis in 1..=3 {
            ch.push(AdjointStep::Translate {
                axis,
                eps: -ch.c(axis),
            })?;
        }
        let k = ch.c(8);
        if !k.approx_eq(&Scalar::one(), ZERO_REL) {
            ch.push(AdjointStep::Shift9 {
                eps9: &-&ch.c(9) / &(&Scalar::one() - &k),
            })?;
            (5, params(&[("k", k)]), scale)
        } else {
            (6, params(&[("lambda", ch.c(9))]), scale)
        }
    } else if !translation_zero {
        ch.push(AdjointStep::Rotate {
            axis: 4,
            angle: Angle::toward(&ch.c(2), &-&ch.c(1)),
        })?;
        ch.push(AdjointStep::Rotate {
            axis: 6,
            angle: Angle::toward(&ch.c(3), &-&ch.c(2)),
        })?;
        let scale = ch.c(3).recip();
        ch.v = ch.v.scale(&scale);
        let k = ch.c(8);
        if !zero(&c8) {
            ch.push(AdjointStep::Shift9 {
                eps9: &ch.c(9) / &k,
            })?;
            (7, params(&[("k", k)]), scale)
        } else {
            (8, params(&[("lambda", ch.c(9))]), scale)
        }
    } else {
        return Err(CanonError::Degenerate);
    };

    let pivot = match class_id {
        1..=4 => 4,
        5 | 6 => 7,
        _ => 3,
    };
    let mut representative = ch.v;
    for (i, ci) in representative.c.iter_mut().enumerate() {
        if i + 1 == pivot && ci.approx_eq(&Scalar::one(), ZERO_REL) {
            *ci = Scalar::one();
        } else if !ci.is_exact() && ci.is_negligible(ch.tol) {
            *ci = Scalar::zero();
        }
    }
    let scale = if scale.approx_eq(&Scalar::one(), ZERO_REL) {
        Scalar::one()
    } else {
        scale
    };
    Ok(CanonicalClass1D {
        class_id,
        params,
        witness: ch.steps,
        scale,
        representative,
    })
}

fn params(pairs: &[(&str, Scalar)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Checks that the class is consistent: admissible parameters and a
/// representative equal to the row template within `tol`.
pub fn check_class(class: &CanonicalClass1D, tol: f64) -> bool {
    let Some(row) = find_row(1, class.class_id) else {
        return false;
    };
    if !(row.admissible)(&class.params) {
        return false;
    }
    let template = &row.instantiate(&class.params)[0];
    (0..9).all(|i| class.representative.c[i].approx_eq(&template.c[i], tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(c: [i64; 9]) -> EquivGenerator {
        EquivGenerator::from_ints(c)
    }

    #[test]
    fn canonical_input_is_fixed() {
        let out = canonicalize_1d(&g([0, 0, 0, 1, 0, 0, 1, 2, 0])).unwrap();
        assert_eq!(out.class_id, 1);
        assert!(out.witness.is_empty());
        assert_eq!(out.scale, Scalar::one());
        assert_eq!(out.params["k1"], Scalar::int(1));
        assert_eq!(out.params["k2"], Scalar::int(2));
    }

    #[test]
    fn translation_killed_by_second_translation() {
        let out = canonicalize_1d(&g([1, 0, 0, 1, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(out.class_id, 4);
        assert_eq!(
            out.witness,
            vec![AdjointStep::Translate {
                axis: 2,
                eps: Scalar::int(1)
            }]
        );
        assert_eq!(out.params["k"], Scalar::zero());
        assert_eq!(out.params["lambda"], Scalar::zero());
        assert!(check_class(&out, 1e-12));
    }

    #[test]
    fn pure_translation_with_shift() {
        let out = canonicalize_1d(&g([0, 0, 1, 0, 0, 0, 0, 0, 5])).unwrap();
        assert_eq!(out.class_id, 8);
        assert_eq!(out.params["lambda"], Scalar::int(5));
        assert!(out.witness.is_empty());
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(canonicalize_1d(&g([0, 0, 0, 0, 0, 0, 0, 1, 0])), Err(CanonError::Degenerate));
        assert_eq!(canonicalize_1d(&g([0, 0, 0, 0, 0, 0, 0, 0, 3])), Err(CanonError::Degenerate));
        assert_eq!(canonicalize_1d(&EquivGenerator::zero()), Err(CanonError::Degenerate));
    }

    #[test]
    fn every_branch_reaches_its_row() {
        let cases: [([i64; 9], usize); 8] = [
            ([1, 2, 3, 0, 3, 4, 2, 5, 7], 1),
            ([1, 2, 3, 0, 0, 2, 2, 2, 7], 2),
            ([1, 2, 3, 2, 0, 0, 0, 5, 7], 3),
            ([1, 2, 3, 0, 0, 3, 0, 0, 7], 4),
            ([1, 2, 3, 0, 0, 0, 3, 1, 7], 5),
            ([1, 2, 3, 0, 0, 0, 3, 3, 7], 6),
            ([0, 3, 4, 0, 0, 0, 0, 5, 7], 7),
            ([3, 0, 4, 0, 0, 0, 0, 0, 7], 8),
        ];
        for (c, row) in cases {
            let v = g(c);
            let out = canonicalize_1d(&v).unwrap();
            assert_eq!(out.class_id, row, "{v}");
            assert!(check_class(&out, 1e-10), "{v} -> {:?}", out.params);
            assert!(out.replay_error(&v).unwrap() < 1e-12);
            // Pythagorean rotation parts keep everything exact
            assert!(out.representative.is_exact(), "{v}");
            let again = canonicalize_1d(&out.representative).unwrap();
            assert!(again.witness.is_empty(), "{v}: {:?}", again.witness);
            assert_eq!(again.scale, Scalar::one());
        }
    }
}
