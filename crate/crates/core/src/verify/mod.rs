//! Symmetry detection for a given field: classifying residuals, nullspace
//! extraction, an independent prolongation check and gauge reconstruction.

mod audit;
mod gauge;
mod tables;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{cross, PhaseState};
use crate::expr::EvalError;
use crate::fields::FieldSpec;
use crate::liealg::{eta_numeric, SymGenerator};
use crate::sampling::Halton;

pub use audit::{audit_catalog, audit_row, CatalogAudit, GeneratorCheck, RowAudit, RowStatus};
pub use gauge::{fix_c9, gauge_reconstruct, gauge_vector, GaugeError, QuadratureGauge};
pub use tables::{derived, match_tables, TableMatch};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("singular point {0:?}")]
    Singular([f64; 3]),
    #[error("only {0} regular sample points found")]
    TooFewPoints(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn check(v: &[f64], p: [f64; 3]) -> Result<(), VerifyError> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(VerifyError::Singular(p))
    }
}

/// `(w × x)·∇V − w × V` for the three unit rotation vectors of `c4, c5, c6`.
fn rotation_column(w: [f64; 3], p: [f64; 3], v: [f64; 3], jv: &[[f64; 3]; 3]) -> [f64; 3] {
    let d = cross(w, p);
    let wv = cross(w, v);
    std::array::from_fn(|i| (0..3).map(|k| jv[i][k] * d[k]).sum::<f64>() - wv[i])
}

/// The 6×8 matrix `M(p)` with `M(p)·c = (R_B, R_E)`, where
/// `R_B = η·∇B + c8 B − w×B` and `R_E = η·∇E − (c7 − 2c8) E − w×E`.
pub fn residual_matrix(fs: &FieldSpec, p: [f64; 3]) -> Result<[[f64; 8]; 6], VerifyError> {
    let b = fs.b_at(p)?;
    let e = fs.e_at(p)?;
    let (jb, je) = fs.jacobians_at(p)?;
    check(&b, p)?;
    check(&e, p)?;
    check(jb.as_flattened(), p)?;
    check(je.as_flattened(), p)?;
    let mut m = [[0.0; 8]; 6];
    let units = [[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]];
    for (half, (v, jv)) in [(b, &jb), (e, &je)].into_iter().enumerate() {
        let r = 3 * half;
        for i in 0..3 {
            for k in 0..3 {
                m[r + i][k] = jv[i][k];
            }
            m[r + i][6] = (0..3).map(|k| jv[i][k] * p[k]).sum::<f64>();
        }
        for (col, w) in units.iter().enumerate() {
            let c = rotation_column(*w, p, v, jv);
            for i in 0..3 {
                m[r + i][3 + col] = c[i];
            }
        }
        for i in 0..3 {
            if half == 0 {
                m[i][7] = v[i];
            } else {
                m[r + i][6] -= v[i];
                m[r + i][7] = 2.0 * v[i];
            }
        }
    }
    Ok(m)
}

/// `(R_B, R_E)` at `p` for the generator with coefficients `c1..c8`.
pub fn field_residual(fs: &FieldSpec, c: &[f64; 8], p: [f64; 3]) -> Result<[f64; 6], VerifyError> {
    let m = residual_matrix(fs, p)?;
    Ok(std::array::from_fn(|i| (0..8).map(|j| m[i][j] * c[j]).sum()))
}

/// Applies the second prolongation of `ξ∂_t + η·∇` to `ẍ − ẋ×B − E` at a
/// state, with `ẍ` taken from the equations of motion. Zero for every state
/// exactly when `s` is a symmetry.
pub fn prolongation_residual(fs: &FieldSpec, s: &SymGenerator, st: &PhaseState) -> Result<[f64; 3], VerifyError> {
    let c = s.to_f64();
    let x = st.x;
    let xd = st.v;
    let b = fs.b_at(x)?;
    let e = fs.e_at(x)?;
    let (jb, je) = fs.jacobians_at(x)?;
    check(&b, x)?;
    check(&e, x)?;
    let eta = eta_numeric(&c, x);
    // η is affine, so differences give its Jacobian exactly up to rounding
    let jeta: [[f64; 3]; 3] = {
        let base = eta_numeric(&c, [0.0; 3]);
        let cols: [[f64; 3]; 3] = std::array::from_fn(|k| {
            let mut u = [0.0; 3];
            u[k] = 1.0;
            let ek = eta_numeric(&c, u);
            std::array::from_fn(|i| ek[i] - base[i])
        });
        std::array::from_fn(|i| std::array::from_fn(|k| cols[k][i]))
    };
    // D_t ξ for ξ = c0 + c8 t
    let dxi = c[7];
    let vxb = cross(xd, b);
    let xdd: [f64; 3] = std::array::from_fn(|i| vxb[i] + e[i]);
    let mat = |m: &[[f64; 3]; 3], v: [f64; 3]| -> [f64; 3] { std::array::from_fn(|i| (0..3).map(|k| m[i][k] * v[k]).sum()) };
    let eta1: [f64; 3] = {
        let d = mat(&jeta, xd);
        std::array::from_fn(|i| d[i] - xd[i] * dxi)
    };
    let eta2: [f64; 3] = {
        // D_t η^(1) = J ẍ − ẍ D_t ξ, then subtract ẍ D_t ξ once more
        let d = mat(&jeta, xdd);
        std::array::from_fn(|i| d[i] - 2.0 * xdd[i] * dxi)
    };
    let db = mat(&jb, eta);
    let de = mat(&je, eta);
    let t1 = cross(xd, db);
    let t2 = cross(eta1, b);
    let out: [f64; 3] = std::array::from_fn(|i| eta2[i] - t1[i] - t2[i] - de[i]);
    check(&out, x)?;
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DetectOptions {
    pub points: usize,
    pub rmin: f64,
    pub rmax: f64,
    /// Relative singular-value threshold for the nullspace.
    pub tol: f64,
    pub seed: u64,
}

impl Default for DetectOptions {
    fn default() -> DetectOptions {
        DetectOptions {
            points: 40,
            rmin: 0.5,
            rmax: 2.0,
            tol: 1e-8,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SymmetryBasis {
    pub dimension: usize,
    /// Orthonormal basis of the nullspace in `(c1, ..., c8)`.
    pub basis: Vec<[f64; 8]>,
    /// All singular values, descending.
    pub singular_values: Vec<f64>,
    /// `max |M v|` over sampled rows, per basis vector.
    pub residuals: Vec<f64>,
    /// `σ_r / σ_{r+1}` across the rank boundary.
    pub gap_ratio: Option<f64>,
    /// Orthonormal basis of the part with `c8 = 2c7`.
    pub noether: Vec<[f64; 8]>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub points: Vec<[f64; 3]>,
}

/// Row-reduced form of a float basis: pivots scaled to one, pivot columns
/// cleared, entries below `1e-12` zeroed.
pub fn reduce(basis: &[[f64; 8]]) -> Vec<[f64; 8]> {
    let mut rows: Vec<[f64; 8]> = basis.to_vec();
    let mut r = 0;
    for col in 0..8 {
        if r == rows.len() {
            break;
        }
        let (piv, val) = (r..rows.len())
            .map(|i| (i, rows[i][col].abs()))
            .fold((r, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if val < 1e-9 {
            continue;
        }
        rows.swap(r, piv);
        let p = rows[r][col];
        rows[r].iter_mut().for_each(|v| *v /= p);
        for i in 0..rows.len() {
            if i != r {
                let f = rows[i][col];
                let pr = rows[r];
                rows[i].iter_mut().zip(pr).for_each(|(v, q)| *v -= f * q);
            }
        }
        r += 1;
    }
    rows.truncate(r);
    for row in &mut rows {
        for v in row.iter_mut() {
            if v.abs() < 1e-12 {
                *v = 0.0;
            }
        }
    }
    rows
}

/// Distance of the unit vector along `v` from the span of an orthonormal
/// basis.
pub fn distance_to_span(basis: &[[f64; 8]], v: &[f64; 8]) -> f64 {
    let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if n == 0.0 {
        return 0.0;
    }
    let u: [f64; 8] = v.map(|c| c / n);
    let mut rest = u;
    for b in basis {
        let d: f64 = b.iter().zip(&u).map(|(p, q)| p * q).sum();
        rest.iter_mut().zip(b).for_each(|(r, bb)| *r -= d * bb);
    }
    rest.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Orthonormal basis of `{v ∈ span(basis) : ℓ·v = 0}` via SVD.
fn restrict(basis: &[[f64; 8]], ell: &[f64; 8]) -> Vec<[f64; 8]> {
    let d = basis.len();
    if d == 0 {
        return vec![];
    }
    let y: Vec<f64> = basis.iter().map(|b| b.iter().zip(ell).map(|(p, q)| p * q).sum()).collect();
    let ny = y.iter().map(|c| c * c).sum::<f64>().sqrt();
    let scale = ell.iter().map(|c| c * c).sum::<f64>().sqrt();
    if ny <= 1e-10 * scale {
        return basis.to_vec();
    }
    // Householder-free: orthonormal complement of y in R^d from an SVD of
    // the 1×d row
    let m = DMatrix::from_row_slice(1, d, &y);
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let mut out = Vec::new();
    // nalgebra's thin SVD of a 1×d matrix gives a single right vector; build
    // the complement by Gram–Schmidt against it
    let first: Vec<f64> = (0..d).map(|j| vt[(0, j)]).collect();
    let mut frame: Vec<Vec<f64>> = vec![first];
    for k in 0..d {
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        for f in &frame {
            let dd: f64 = f.iter().zip(&e).map(|(p, q)| p * q).sum();
            e.iter_mut().zip(f).for_each(|(a, b)| *a -= dd * b);
        }
        let n = e.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 1e-8 {
            e.iter_mut().for_each(|c| *c /= n);
            frame.push(e);
        }
    }
    for alpha in frame.iter().skip(1) {
        let mut v = [0.0; 8];
        for (a, b) in alpha.iter().zip(basis) {
            v.iter_mut().zip(b).for_each(|(acc, bb)| *acc += a * bb);
        }
        out.push(v);
    }
    out
}

fn straight_and_linear(fs: &FieldSpec, points: &[[f64; 3]]) -> (bool, bool) {
    let mut dir: Option<[f64; 3]> = None;
    let mut straight = true;
    let mut jac0: Option<([[f64; 3]; 3], [[f64; 3]; 3])> = None;
    let mut linear = true;
    for p in points {
        let Ok(b) = fs.b_at(*p) else { continue };
        let n = crate::dynamics::norm(b);
        if n > 1e-12 {
            let u = b.map(|c| c / n);
            match dir {
                None => dir = Some(u),
                Some(d) => straight &= crate::dynamics::norm(cross(d, u)) < 1e-9,
            }
        }
        if let Ok(j) = fs.jacobians_at(*p) {
            match &jac0 {
                None => jac0 = Some(j),
                Some(j0) => {
                    let diff = j0.0.as_flattened().iter().zip(j.0.as_flattened()).chain(j0.1.as_flattened().iter().zip(j.1.as_flattened()));
                    linear &= diff.map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) < 1e-9;
                }
            }
        }
    }
    (straight, linear)
}

/// Stacks the residual matrices at sampled points and extracts the
/// nullspace.
pub fn detect_symmetries(fs: &FieldSpec, opts: &DetectOptions) -> Result<SymmetryBasis, VerifyError> {
    let points = fs.sample_points(opts.points, opts.rmin, opts.rmax, opts.seed);
    if points.len() < 8 {
        return Err(VerifyError::TooFewPoints(points.len()));
    }
    detect_at(fs, &points, opts.tol)
}

pub fn detect_at(fs: &FieldSpec, points: &[[f64; 3]], tol: f64) -> Result<SymmetryBasis, VerifyError> {
    let blocks: Vec<[[f64; 8]; 6]> = points.par_iter().map(|p| residual_matrix(fs, *p)).collect::<Result<_, _>>()?;
    let rows = 6 * blocks.len();
    let m = DMatrix::from_fn(rows, 8, |r, c| blocks[r / 6][r % 6][c]);
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.as_ref().expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|a, b| svd.singular_values[*b].total_cmp(&svd.singular_values[*a]));
    let sv: Vec<f64> = order.iter().map(|i| svd.singular_values[*i]).collect();
    let top = sv.first().copied().unwrap_or(0.0);
    let null: Vec<usize> = order.iter().copied().filter(|i| svd.singular_values[*i] <= tol * top || top == 0.0).collect();
    let rank = 8 - null.len();
    let basis: Vec<[f64; 8]> = null.iter().map(|i| std::array::from_fn(|j| vt[(*i, j)])).collect();
    let residuals = basis
        .iter()
        .map(|v| {
            let mv = &m * nalgebra::DVector::from_row_slice(v);
            mv.amax()
        })
        .collect();
    let gap_ratio = (rank > 0 && rank < 8).then(|| sv[rank - 1] / sv[rank].max(f64::MIN_POSITIVE));
    let mut warnings = Vec::new();
    if let Some(g) = gap_ratio {
        if g < 10.0 {
            warnings.push(format!("ill-conditioned sampling: gap ratio {g:.3e}"));
        }
    }
    let mut ell = [0.0; 8];
    ell[6] = -2.0;
    ell[7] = 1.0;
    let noether: Vec<[f64; 8]> = restrict(&basis, &ell)
        .into_iter()
        .map(|mut v| {
            v[7] = 2.0 * v[6];
            v
        })
        .collect();
    let (straight, linear) = straight_and_linear(fs, points);
    if straight {
        warnings.push("straight magnetic field: symmetries outside the eight-parameter family may exist".into());
    }
    if linear {
        warnings.push("linear equations of motion: symmetries outside the eight-parameter family may exist".into());
    }
    Ok(SymmetryBasis {
        dimension: null.len(),
        basis,
        singular_values: sv,
        residuals,
        gap_ratio,
        noether,
        warnings,
        points: points.to_vec(),
    })
}

impl SymmetryBasis {
    pub fn reduced(&self) -> Vec<[f64; 8]> {
        reduce(&self.basis)
    }

    pub fn reduced_noether(&self) -> Vec<[f64; 8]> {
        reduce(&self.noether)
    }

    /// Distance of `v` (normalized) from the detected span.
    pub fn distance(&self, v: &[f64; 8]) -> f64 {
        distance_to_span(&self.basis, v)
    }
}

/// States built from the sample points with quasi-random velocities.
pub fn sample_states(points: &[[f64; 3]], n: usize, seed: u64) -> Vec<PhaseState> {
    let mut h = Halton::<3>::new([-1.0; 3], [1.0; 3], seed.wrapping_add(101));
    points.iter().take(n).map(|p| PhaseState::new(*p, h.next().unwrap())).collect()
}

/// Largest field residual and prolongation residual of `s` over the points
/// and states.
pub fn generator_residuals(fs: &FieldSpec, s: &SymGenerator, points: &[[f64; 3]], states: &[PhaseState]) -> Result<(f64, f64), VerifyError> {
    let c = s.to_f64();
    let mut field = 0.0f64;
    for p in points {
        field = field.max(field_residual(fs, &c, *p)?.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let mut prol = 0.0f64;
    for st in states {
        prol = prol.max(prolongation_residual(fs, s, st)?.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    Ok((field, prol))
}

/// Summary of a classification run.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassReport {
    pub dimension: usize,
    pub basis: Vec<[f64; 8]>,
    pub singular_values: Vec<f64>,
    pub gap_ratio: Option<f64>,
    pub noether_basis: Vec<[f64; 8]>,
    pub oracle_agreement: bool,
    pub warnings: Vec<String>,
}

/// Threshold for accepting a generator from its residuals.
pub const ACCEPT: f64 = 1e-8;

/// Detects the symmetry algebra and cross-checks every basis vector, and
/// every direction outside the nullspace, against the prolongation.
pub fn classify(fs: &FieldSpec, opts: &DetectOptions) -> Result<ClassReport, VerifyError> {
    let det = detect_symmetries(fs, opts)?;
    let states = sample_states(&det.points, 20, opts.seed);
    let reduced = det.reduced();
    let mut agree = true;
    for v in &reduced {
        let (f, p) = generator_residuals(fs, &SymGenerator::from_f64(*v), &det.points, &states)?;
        agree &= (f < ACCEPT) == (p < ACCEPT);
    }
    // directions orthogonal to the nullspace must fail both checks
    let m = DMatrix::from_fn(det.basis.len().max(1), 8, |r, c| det.basis.get(r).map_or(0.0, |b| b[c]));
    let complement: Vec<[f64; 8]> = (0..8)
        .filter_map(|k| {
            let mut e = [0.0; 8];
            e[k] = 1.0;
            let proj = &m * nalgebra::DVector::from_row_slice(&e);
            let mut r = e;
            for (i, b) in det.basis.iter().enumerate() {
                r.iter_mut().zip(b).for_each(|(x, bb)| *x -= proj[i] * bb);
            }
            let n = r.iter().map(|c| c * c).sum::<f64>().sqrt();
            (n > 0.5).then(|| r.map(|c| c / n))
        })
        .collect();
    for v in complement {
        let (f, p) = generator_residuals(fs, &SymGenerator::from_f64(v), &det.points, &states)?;
        agree &= (f < ACCEPT) == (p < ACCEPT);
    }
    Ok(ClassReport {
        dimension: det.dimension,
        basis: reduced,
        singular_values: det.singular_values.clone(),
        gap_ratio: det.gap_ratio,
        noether_basis: det.reduced_noether(),
        oracle_agreement: agree,
        warnings: det.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stormer() -> FieldSpec {
        FieldSpec::parse(["-y/(x^2+y^2+z^2)^(3/2)", "x/(x^2+y^2+z^2)^(3/2)", "0"], "0").unwrap()
    }

    fn monopole() -> FieldSpec {
        let r = "sqrt(x^2+y^2+z^2)";
        FieldSpec::parse([&format!("y*z/({r}*(x^2+y^2))"), &format!("-x*z/({r}*(x^2+y^2))"), "0"], "0")
            .unwrap()
            .with_domain(crate::fields::DomainHint {
                axis: true,
                ..Default::default()
            })
    }

    fn pts() -> Vec<[f64; 3]> {
        stormer().sample_points(20, 0.5, 2.0, 3)
    }

    #[test]
    fn z_translation_of_z_independent_field() {
        let fs = FieldSpec::parse(["sin(y)", "x^2", "x*y"], "x - y^2").unwrap();
        let mut c = [0.0; 8];
        c[2] = 1.0;
        for p in pts() {
            assert!(field_residual(&fs, &c, p).unwrap().iter().all(|v| v.abs() < 1e-14));
        }
    }

    #[test]
    fn dipole_rotation_passes_translation_fails() {
        let fs = stormer();
        let v4 = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        let v1 = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let mut worst = 0.0f64;
        for p in pts() {
            assert!(field_residual(&fs, &v4, p).unwrap().iter().all(|v| v.abs() < 1e-10));
            worst = worst.max(field_residual(&fs, &v1, p).unwrap().iter().fold(0.0, |m, v| m.max(v.abs())));
        }
        assert!(worst > 0.1);
    }

    #[test]
    fn residual_is_linear() {
        let fs = FieldSpec::parse(["y*z^2", "sin(x)", "x*y"], "x*z").unwrap();
        let a = [0.3, -1.0, 0.5, 2.0, 0.1, -0.7, 1.1, 0.4];
        let b = [1.0, 0.2, -0.3, 0.0, 0.9, 0.5, -0.6, 1.5];
        let s: [f64; 8] = std::array::from_fn(|i| a[i] + b[i]);
        for p in pts() {
            let (ra, rb, rs) = (field_residual(&fs, &a, p).unwrap(), field_residual(&fs, &b, p).unwrap(), field_residual(&fs, &s, p).unwrap());
            for i in 0..6 {
                assert!((ra[i] + rb[i] - rs[i]).abs() <= 1e-12 * (1.0 + rs[i].abs()));
            }
        }
    }

    #[test]
    fn prolongation_matches_field_form() {
        // brute-force agreement: prolongation = −(ẋ × R_B + R_E)
        let fs = FieldSpec::parse(["y*z^2", "sin(x)", "x*y"], "x*z + y^2").unwrap();
        let c = [0.3, -1.0, 0.5, 2.0, 0.1, -0.7, 1.1, 0.4];
        let s = SymGenerator::from_f64(c);
        for st in sample_states(&pts(), 10, 0) {
            let r = field_residual(&fs, &c, st.x).unwrap();
            let vr = cross(st.v, [r[0], r[1], r[2]]);
            let pr = prolongation_residual(&fs, &s, &st).unwrap();
            for i in 0..3 {
                assert!((pr[i] + vr[i] + r[3 + i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn time_translation_is_always_admitted() {
        let fs = FieldSpec::parse(["y*z^2", "sin(x)", "x*y"], "x*z").unwrap();
        for st in sample_states(&pts(), 10, 0) {
            assert!(prolongation_residual(&fs, &SymGenerator::time(), &st).unwrap().iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn dipole_scaling_weight() {
        let fs = stormer();
        let states = sample_states(&pts(), 20, 0);
        let good = SymGenerator::from_ints([0, 0, 0, 0, 0, 0, 1, 3]);
        let bad = SymGenerator::from_ints([0, 0, 0, 0, 0, 0, 1, 2]);
        let (_, p) = generator_residuals(&fs, &good, &[], &states).unwrap();
        assert!(p < 1e-9);
        let (_, p) = generator_residuals(&fs, &bad, &[], &states).unwrap();
        assert!(p > 1e-3);
    }

    #[test]
    fn dipole_detection() {
        let det = detect_symmetries(&stormer(), &DetectOptions::default()).unwrap();
        assert_eq!(det.dimension, 2);
        let red = det.reduced();
        let want = [[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 3.0]];
        for (r, w) in red.iter().zip(want) {
            assert!(r.iter().zip(w).all(|(a, b)| (a - b).abs() < 1e-6), "{red:?}");
        }
        assert!(det.gap_ratio.unwrap() > 1e3);
        // v7 + 3v8 is not Noether, v4 is
        assert_eq!(det.noether.len(), 1);
        assert!(distance_to_span(&det.noether, &want[0]) < 1e-9);
        assert!(det.noether.iter().all(|v| v[7] == 2.0 * v[6]));
    }

    #[test]
    fn monopole_detection() {
        let det = detect_symmetries(&monopole(), &DetectOptions::default()).unwrap();
        assert_eq!(det.dimension, 4);
        for k in 3..6 {
            let mut e = [0.0; 8];
            e[k] = 1.0;
            assert!(det.distance(&e) < 1e-9);
        }
        assert!(det.distance(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 2.0]) < 1e-9);
        assert_eq!(det.noether.len(), 4);
    }

    #[test]
    fn classification_report_agrees_with_oracle() {
        let rep = classify(&stormer(), &DetectOptions::default()).unwrap();
        assert_eq!(rep.dimension, 2);
        assert!(rep.oracle_agreement);
        assert!(rep.warnings.is_empty());
    }

    #[test]
    fn straight_field_is_flagged() {
        let fs = FieldSpec::parse(["0", "x + sin(x)", "0"], "0").unwrap();
        let det = detect_symmetries(&fs, &DetectOptions::default()).unwrap();
        assert!(det.warnings.iter().any(|w| w.contains("straight")));
        assert!(!det.warnings.iter().any(|w| w.contains("linear")));
    }

    #[test]
    fn reduce_normalizes_pivots() {
        let r = reduce(&[[0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]]);
        assert_eq!(r, vec![[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]]);
    }
}
