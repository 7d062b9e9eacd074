//! Charged-particle motion `ẍ = ẋ × B + E`: integration, first integrals
//! and their Poisson brackets.

mod integrate;
mod invariant;
mod involution;

use serde::{Deserialize, Serialize};

use crate::expr::EvalError;
use crate::fields::FieldSpec;

pub use integrate::{integrate, write_csv, IntegrateError, Method, R_MIN};
pub use invariant::{hamiltonian, noether_integral, poisson_bracket, InvariantFn};
pub use involution::{involution_report, jacobian_rank, InvolutionReport};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub t: f64,
    pub x: [f64; 3],
    pub v: [f64; 3],
}

impl PhaseState {
    pub fn new(x: [f64; 3], v: [f64; 3]) -> PhaseState {
        PhaseState { t: 0.0, x, v }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.iter().chain(&self.v).all(|c| c.is_finite())
    }

    pub fn radius(&self) -> f64 {
        norm(self.x)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("field is singular at {0:?}")]
    Singular([f64; 3]),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// `(ẋ, v × B + E)`.
pub fn lorentz_rhs(fs: &FieldSpec, s: &PhaseState) -> Result<[f64; 6], DynamicsError> {
    let b = fs.b_at(s.x)?;
    let e = fs.e_at(s.x)?;
    let f = cross(s.v, b);
    let out = [s.v[0], s.v[1], s.v[2], f[0] + e[0], f[1] + e[1], f[2] + e[2]];
    if out.iter().all(|c| c.is_finite()) {
        Ok(out)
    } else {
        Err(DynamicsError::Singular(s.x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_motion() {
        let fs = FieldSpec::parse(["0", "0", "0"], "0").unwrap();
        let s = PhaseState::new([1.0, 2.0, 3.0], [0.5, -1.0, 2.0]);
        assert_eq!(lorentz_rhs(&fs, &s).unwrap(), [0.5, -1.0, 2.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn monopole_force() {
        let fs = FieldSpec::parse(["y*z/(sqrt(x^2+y^2+z^2)*(x^2+y^2))", "-x*z/(sqrt(x^2+y^2+z^2)*(x^2+y^2))", "0"], "0").unwrap();
        // just off the axis, where B ≈ (0, 0, 1)
        let s = PhaseState::new([1e-4, 0.0, 1.0], [1.0, 0.0, 0.0]);
        let f = lorentz_rhs(&fs, &s).unwrap();
        assert!((f[4] + 1.0).abs() < 1e-7 && f[3].abs() < 1e-7 && f[5].abs() < 1e-3);
    }

    #[test]
    fn dipole_force_matches_field() {
        let fs = FieldSpec::parse(["-y/(x^2+y^2+z^2)^(3/2)", "x/(x^2+y^2+z^2)^(3/2)", "0"], "0").unwrap();
        let s = PhaseState::new([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        // on the equator B = (0, 0, −1)
        assert_eq!(fs.b_at(s.x).unwrap(), [0.0, 0.0, -1.0]);
        assert_eq!(lorentz_rhs(&fs, &s).unwrap()[3..], [-1.0, 0.0, 0.0]);
    }
}
