use nalgebra::DMatrix;
use serde::Serialize;

use super::{integrate, poisson_bracket, InvariantFn, Method, PhaseState};
use crate::fields::FieldSpec;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvolutionReport {
    pub names: Vec<String>,
    /// Largest `|{I_i, I_j}|` over the sampled states.
    pub brackets: Vec<Vec<f64>>,
    /// Largest `|I(t) − I(0)|` along the trajectory.
    pub drift: Vec<f64>,
    /// Smallest rank of `∂(I_1, ..., I_n)/∂(x, ẋ)` over the sampled states.
    pub rank: usize,
    pub t_end: f64,
    pub steps: usize,
    pub errors: Vec<String>,
}

impl InvolutionReport {
    pub fn max_bracket(&self) -> f64 {
        self.brackets.iter().flatten().fold(0.0, |m, v| m.max(*v))
    }

    pub fn max_drift(&self) -> f64 {
        self.drift.iter().fold(0.0, |m, v| m.max(*v))
    }
}

/// Rank of the gradient matrix at each state; the minimum is returned.
pub fn jacobian_rank(invariants: &[InvariantFn], states: &[PhaseState]) -> usize {
    states
        .iter()
        .filter_map(|s| {
            let mut m = DMatrix::zeros(invariants.len(), 6);
            for (i, inv) in invariants.iter().enumerate() {
                let (gx, gv) = inv.gradient(s).ok()?;
                for k in 0..3 {
                    m[(i, k)] = gx[k];
                    m[(i, k + 3)] = gv[k];
                }
            }
            let sv = m.singular_values();
            let top = sv.max();
            Some(sv.iter().filter(|v| **v > 1e-8 * top).count())
        })
        .min()
        .unwrap_or(0)
}

/// Pairwise brackets at `states`, drift along the trajectory from `start`
/// and functional independence.
pub fn involution_report(
    fs: &FieldSpec,
    invariants: &[InvariantFn],
    states: &[PhaseState],
    start: PhaseState,
    t_end: f64,
    method: Method,
) -> InvolutionReport {
    let n = invariants.len();
    let mut errors = Vec::new();
    let mut brackets = vec![vec![0.0f64; n]; n];
    for s in states {
        for i in 0..n {
            for j in i + 1..n {
                match poisson_bracket(&invariants[i], &invariants[j], fs, s) {
                    Ok(v) => {
                        brackets[i][j] = brackets[i][j].max(v.abs());
                        brackets[j][i] = brackets[i][j];
                    }
                    Err(e) => errors.push(format!("bracket {}, {}: {e}", invariants[i].name(), invariants[j].name())),
                }
            }
        }
    }
    let traj = match integrate(fs, start, t_end, method) {
        Ok(t) => t,
        Err(e) => {
            errors.push(e.to_string());
            e.partial().to_vec()
        }
    };
    let drift = invariants
        .iter()
        .map(|inv| {
            let Some(first) = traj.first() else { return f64::NAN };
            let Ok(i0) = inv.value(first) else { return f64::NAN };
            traj.iter()
                .map(|s| inv.value(s).map(|v| (v - i0).abs()).unwrap_or(f64::NAN))
                .fold(0.0, f64::max)
        })
        .collect();
    InvolutionReport {
        names: invariants.iter().map(|i| i.name().to_string()).collect(),
        brackets,
        drift,
        rank: jacobian_rank(invariants, states),
        t_end,
        steps: traj.len(),
        errors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;

    #[test]
    fn uniform_field_integrals() {
        // B = (0, 0, 2): H, the canonical z-momentum and the angular momentum
        let fs = FieldSpec::parse(["-y", "x", "0"], "0").unwrap();
        let mut pz = [0.0; 10];
        pz[3] = 1.0;
        let mut lz = [0.0; 10];
        lz[4] = 1.0;
        let invs = vec![
            InvariantFn::hamiltonian(&fs),
            InvariantFn::noether("pz", &fs, pz, Expr::zero()),
            InvariantFn::noether("Lz", &fs, lz, Expr::zero()),
        ];
        let states: Vec<PhaseState> = crate::sampling::cube(-1.0, 1.0, 6, 1)
            .into_iter()
            .map(|x| PhaseState::new(x, [x[1], 0.3, -x[0]]))
            .collect();
        let start = PhaseState::new([1.0, 0.2, 0.0], [0.1, 0.5, 0.3]);
        let rep = involution_report(&fs, &invs, &states, start, 10.0, Method::Adaptive { atol: 1e-11, rtol: 1e-11 });
        assert!(rep.max_bracket() < 1e-12, "{:?}", rep.brackets);
        assert!(rep.max_drift() < 1e-8, "{:?}", rep.drift);
        assert_eq!(rep.rank, 3);
        assert!(rep.errors.is_empty());
    }
}
