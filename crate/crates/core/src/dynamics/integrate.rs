use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{lorentz_rhs, DynamicsError, InvariantFn, PhaseState};
use crate::fields::FieldSpec;

/// Trajectories closer than this to the origin are stopped.
pub const R_MIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Method {
    Rk4 { h: f64 },
    Adaptive { atol: f64, rtol: f64 },
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum IntegrateError {
    #[error("invalid settings: {0}")]
    Settings(String),
    #[error("left the regular domain at t = {}", last.t)]
    DomainExit { last: PhaseState, trajectory: Vec<PhaseState> },
    #[error("step size underflow at t = {}", last.t)]
    Underflow { last: PhaseState, trajectory: Vec<PhaseState> },
    #[error(transparent)]
    Field(#[from] DynamicsError),
}

impl IntegrateError {
    pub fn partial(&self) -> &[PhaseState] {
        match self {
            IntegrateError::DomainExit { trajectory, .. } | IntegrateError::Underflow { trajectory, .. } => trajectory,
            _ => &[],
        }
    }
}

type Y = [f64; 6];

fn pack(s: &PhaseState) -> Y {
    [s.x[0], s.x[1], s.x[2], s.v[0], s.v[1], s.v[2]]
}

fn unpack(t: f64, y: &Y) -> PhaseState {
    PhaseState {
        t,
        x: [y[0], y[1], y[2]],
        v: [y[3], y[4], y[5]],
    }
}

fn axpy(y: &Y, terms: &[(f64, &Y)]) -> Y {
    std::array::from_fn(|i| y[i] + terms.iter().map(|(a, k)| a * k[i]).sum::<f64>())
}

fn rhs(fs: &FieldSpec, t: f64, y: &Y) -> Result<Y, DynamicsError> {
    lorentz_rhs(fs, &unpack(t, y))
}

fn admissible(s: &PhaseState) -> bool {
    s.is_finite() && s.radius() >= R_MIN
}

/// Integrates from `s0` to `t_end`, returning every accepted state.
pub fn integrate(fs: &FieldSpec, s0: PhaseState, t_end: f64, method: Method) -> Result<Vec<PhaseState>, IntegrateError> {
    if !(t_end > s0.t) {
        return Err(IntegrateError::Settings("t_end must exceed the initial time".into()));
    }
    match method {
        Method::Rk4 { h } if h > 0.0 => rk4(fs, s0, t_end, h),
        Method::Adaptive { atol, rtol } if atol > 0.0 && rtol > 0.0 => dopri5(fs, s0, t_end, atol, rtol),
        _ => Err(IntegrateError::Settings("step and tolerances must be positive".into())),
    }
}

fn exit(out: Vec<PhaseState>) -> IntegrateError {
    IntegrateError::DomainExit {
        last: *out.last().unwrap(),
        trajectory: out,
    }
}

fn rk4(fs: &FieldSpec, s0: PhaseState, t_end: f64, h: f64) -> Result<Vec<PhaseState>, IntegrateError> {
    let n = ((t_end - s0.t) / h).round().max(1.0) as usize;
    let h = (t_end - s0.t) / n as f64;
    let mut out = vec![s0];
    let mut y = pack(&s0);
    for i in 0..n {
        let t = s0.t + i as f64 * h;
        let step = || -> Result<Y, DynamicsError> {
            let k1 = rhs(fs, t, &y)?;
            let k2 = rhs(fs, t + h / 2.0, &axpy(&y, &[(h / 2.0, &k1)]))?;
            let k3 = rhs(fs, t + h / 2.0, &axpy(&y, &[(h / 2.0, &k2)]))?;
            let k4 = rhs(fs, t + h, &axpy(&y, &[(h, &k3)]))?;
            Ok(axpy(&y, &[(h / 6.0, &k1), (h / 3.0, &k2), (h / 3.0, &k3), (h / 6.0, &k4)]))
        };
        let Ok(next) = step() else { return Err(exit(out)) };
        let s = unpack(s0.t + (i + 1) as f64 * h, &next);
        if !admissible(&s) {
            return Err(exit(out));
        }
        y = next;
        out.push(s);
    }
    Ok(out)
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// Fifth- minus fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Dormand–Prince 5(4) with PI step control.
fn dopri5(fs: &FieldSpec, s0: PhaseState, t_end: f64, atol: f64, rtol: f64) -> Result<Vec<PhaseState>, IntegrateError> {
    let (safe, facmin, facmax, beta) = (0.9, 0.2, 10.0, 0.04);
    let expo = 0.2 - 0.75 * beta;
    let mut out = vec![s0];
    let mut t = s0.t;
    let mut y = pack(&s0);
    let mut k1 = rhs(fs, t, &y)?;
    let mut h = (1e-2f64).min(t_end - t);
    let mut err_old: f64 = 1e-4;
    let mut rejected = false;
    while t < t_end {
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(IntegrateError::Underflow {
                last: *out.last().unwrap(),
                trajectory: out,
            });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        let mut k = [k1, [0.0; 6], [0.0; 6], [0.0; 6], [0.0; 6], [0.0; 6], [0.0; 6]];
        let mut failed = false;
        for s in 0..6 {
            let terms: Vec<(f64, &Y)> = (0..=s).map(|j| (h * A[s][j], &k[j])).collect();
            let ys = axpy(&y, &terms);
            match rhs(fs, t + C[s] * h, &ys) {
                Ok(v) if !(s == 5 && !admissible(&unpack(t + h, &ys))) => k[s + 1] = v,
                _ => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            // shrink before giving up: the stage may have overshot a singularity
            h *= 0.25;
            if h < 1e-10 * t.abs().max(1.0) {
                return Err(exit(out));
            }
            continue;
        }
        let terms: Vec<(f64, &Y)> = (0..6).map(|j| (h * A[5][j], &k[j])).collect();
        let y_new = axpy(&y, &terms);
        let err = (0..6)
            .map(|i| {
                let e = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
                let sc = atol + rtol * y[i].abs().max(y_new[i].abs());
                (e / sc).powi(2)
            })
            .sum::<f64>()
            / 6.0;
        let err = err.sqrt();
        if err <= 1.0 {
            let fac = (safe * err.max(1e-10).powf(-expo) * err_old.powf(beta)).clamp(facmin, facmax);
            err_old = err.max(1e-4);
            t = if last { t_end } else { t + h };
            y = y_new;
            k1 = k[6];
            let s = unpack(t, &y);
            if !admissible(&s) {
                return Err(exit(out));
            }
            out.push(s);
            h *= if rejected { fac.min(1.0) } else { fac };
            rejected = false;
        } else {
            h *= (safe * err.powf(-0.2)).max(facmin);
            rejected = true;
        }
    }
    Ok(out)
}

/// Trajectory as CSV with one extra column per invariant.
pub fn write_csv<W: Write>(w: W, traj: &[PhaseState], invariants: &[InvariantFn]) -> csv::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let mut header: Vec<String> = ["t", "x", "y", "z", "vx", "vy", "vz"].map(String::from).to_vec();
    header.extend(invariants.iter().map(|i| i.name().to_string()));
    wr.write_record(&header)?;
    for s in traj {
        let mut row: Vec<String> = [s.t, s.x[0], s.x[1], s.x[2], s.v[0], s.v[1], s.v[2]]
            .iter()
            .map(|v| format!("{v:.17e}"))
            .collect();
        row.extend(invariants.iter().map(|i| match i.value(s) {
            Ok(v) => format!("{v:.17e}"),
            Err(_) => "nan".to_string(),
        }));
        wr.write_record(&row)?;
    }
    wr.flush()?;
    Ok(())
}
