//! Electromagnetic field specifications: potentials, derived fields, the
//! catalog of invariant potentials and the equivalence transformations
//! acting on them.

mod catalog;
mod file;
mod transform;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::expr::{curl, div, grad, Bindings, EvalError, Expr, VecExpr};
use crate::sampling::Halton;
use crate::scalar::Scalar;

pub use catalog::{
    catalog, catalog_instance, catalog_row, default_params, CatalogError, CatalogKey, CatalogRow, CatalogTable, Variant,
};
pub use file::{parse_field_file, FieldFileError};
pub use transform::{apply_discrete, apply_equivalence, DiscreteMap, GroupElement, TransformError};

/// Regions kept out of sampling; each excluded set is padded by `TUBE`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DomainHint {
    /// Require `x_i > TUBE` for the flagged coordinates.
    pub positive: [bool; 3],
    /// Exclude the z-axis `ρ = 0`.
    pub axis: bool,
    /// Exclude the origin.
    pub origin: bool,
    /// Exclude the cut `y = 0, x < 0` of `atan2(y, x)`.
    pub branch_cut: bool,
    /// Map from the current coordinates to those the exclusions refer to,
    /// set when a field has been transformed.
    pub frame: Option<Affine>,
}

/// `p ↦ m p + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine {
    pub m: [[f64; 3]; 3],
    pub b: [f64; 3],
}

impl Affine {
    pub fn apply(&self, p: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| self.b[i] + (0..3).map(|k| self.m[i][k] * p[k]).sum::<f64>())
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Affine) -> Affine {
        Affine {
            m: std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| self.m[i][k] * inner.m[k][j]).sum())),
            b: self.apply(inner.b),
        }
    }
}

pub const TUBE: f64 = 0.1;

impl DomainHint {
    pub fn everywhere() -> DomainHint {
        DomainHint::default()
    }

    /// The open octant `x, y, z > 0`, clear of every coordinate singularity
    /// used by the catalog.
    pub fn octant() -> DomainHint {
        DomainHint {
            positive: [true; 3],
            axis: true,
            origin: true,
            branch_cut: true,
            frame: None,
        }
    }

    pub fn admits(&self, p: [f64; 3]) -> bool {
        let p = self.frame.as_ref().map_or(p, |f| f.apply(p));
        let [x, y, z] = p;
        let rho = x.hypot(y);
        if (0..3).any(|i| self.positive[i] && p[i] <= TUBE) {
            return false;
        }
        if self.axis && rho <= TUBE {
            return false;
        }
        if self.origin && (rho * rho + z * z).sqrt() <= TUBE {
            return false;
        }
        !(self.branch_cut && x < TUBE && y.abs() <= TUBE)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("unbound parameters: {0:?}")]
    Unbound(Vec<String>),
}

#[derive(Clone, Debug)]
struct Derived {
    b: VecExpr,
    e: VecExpr,
    jb: [[Expr; 3]; 3],
    je: [[Expr; 3]; 3],
}

/// Vector potential `A` and scalar potential `Φ`, with `B = ∇×A` and
/// `E = −∇Φ` derived symbolically on first use.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    pub label: String,
    pub a: VecExpr,
    pub phi: Expr,
    pub params: BTreeMap<String, Scalar>,
    pub domain: DomainHint,
    derived: OnceLock<Derived>,
}

impl FieldSpec {
    /// Binds `params` into the potentials; every remaining parameter is an
    /// error.
    pub fn new(
        label: impl Into<String>,
        a: VecExpr,
        phi: Expr,
        params: BTreeMap<String, Scalar>,
        domain: DomainHint,
    ) -> Result<FieldSpec, FieldError> {
        let a = a.bind_params(&params).simplify();
        let phi = phi.bind_params(&params).simplify();
        let mut unbound: Vec<String> = a.0.iter().chain([&phi]).flat_map(Expr::params).collect();
        unbound.sort();
        unbound.dedup();
        if !unbound.is_empty() {
            return Err(FieldError::Unbound(unbound));
        }
        Ok(FieldSpec {
            label: label.into(),
            a,
            phi,
            params,
            domain,
            derived: OnceLock::new(),
        })
    }

    pub fn parse(a: [&str; 3], phi: &str) -> Result<FieldSpec, crate::expr::ParseError> {
        let a = VecExpr::parse(a)?;
        let phi = crate::expr::parse(phi)?;
        Ok(FieldSpec::new("field", a, phi, BTreeMap::new(), DomainHint::everywhere()).expect("no parameters"))
    }

    pub fn with_domain(mut self, domain: DomainHint) -> FieldSpec {
        self.domain = domain;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> FieldSpec {
        self.label = label.into();
        self
    }

    /// Same label, parameters and domain, new potentials; `frame` maps the
    /// new coordinates to the old ones.
    fn rebuilt(&self, a: VecExpr, phi: Expr, frame: Option<Affine>) -> FieldSpec {
        let mut domain = self.domain.clone();
        if let Some(f) = frame {
            domain.frame = Some(match &domain.frame {
                Some(old) => old.after(&f),
                None => f,
            });
        }
        FieldSpec {
            label: self.label.clone(),
            a,
            phi,
            params: self.params.clone(),
            domain,
            derived: OnceLock::new(),
        }
    }

    fn derived(&self) -> &Derived {
        self.derived.get_or_init(|| {
            let b = curl(&self.a).simplify();
            let e = grad(&self.phi).map(|c| Expr::neg(c)).simplify();
            let simp = |j: [[Expr; 3]; 3]| j.map(|row| row.map(|c| c.simplify()));
            Derived {
                jb: simp(b.jacobian()),
                je: simp(e.jacobian()),
                b,
                e,
            }
        })
    }

    pub fn b(&self) -> &VecExpr {
        &self.derived().b
    }

    pub fn e(&self) -> &VecExpr {
        &self.derived().e
    }

    pub fn b_at(&self, p: [f64; 3]) -> Result<[f64; 3], EvalError> {
        self.b().eval_at(p)
    }

    pub fn e_at(&self, p: [f64; 3]) -> Result<[f64; 3], EvalError> {
        self.e().eval_at(p)
    }

    pub fn a_at(&self, p: [f64; 3]) -> Result<[f64; 3], EvalError> {
        self.a.eval_at(p)
    }

    pub fn phi_at(&self, p: [f64; 3]) -> Result<f64, EvalError> {
        self.phi.eval_at(p)
    }

    /// `(∂_j B_i, ∂_j E_i)` at `p`.
    pub fn jacobians_at(&self, p: [f64; 3]) -> Result<([[f64; 3]; 3], [[f64; 3]; 3]), EvalError> {
        let d = self.derived();
        let b = Bindings::at(p);
        let ev = |j: &[[Expr; 3]; 3]| -> Result<[[f64; 3]; 3], EvalError> {
            let mut out = [[0.0; 3]; 3];
            for i in 0..3 {
                for k in 0..3 {
                    out[i][k] = j[i][k].eval(&b)?;
                }
            }
            Ok(out)
        };
        Ok((ev(&d.jb)?, ev(&d.je)?))
    }

    /// Whether `p` is admitted by the domain hint and every derived quantity
    /// evaluates to a finite number there.
    pub fn is_regular(&self, p: [f64; 3]) -> bool {
        if !self.domain.admits(p) {
            return false;
        }
        let finite = |v: &[f64]| v.iter().all(|c| c.is_finite());
        match (self.a_at(p), self.phi_at(p), self.b_at(p), self.e_at(p), self.jacobians_at(p)) {
            (Ok(a), Ok(f), Ok(b), Ok(e), Ok((jb, je))) => {
                finite(&a) && f.is_finite() && finite(&b) && finite(&e) && finite(jb.as_flattened()) && finite(je.as_flattened())
            }
            _ => false,
        }
    }

    /// `n` regular quasi-random points with `rmin ≤ r ≤ rmax`.
    pub fn sample_points(&self, n: usize, rmin: f64, rmax: f64, seed: u64) -> Vec<[f64; 3]> {
        let mut out = Vec::with_capacity(n);
        let halton = Halton::new([-rmax; 3], [rmax; 3], seed);
        for p in halton.take(200 * n + 1000) {
            let r = p.iter().map(|c| c * c).sum::<f64>().sqrt();
            if r >= rmin && r <= rmax && self.is_regular(p) {
                out.push(p);
                if out.len() == n {
                    break;
                }
            }
        }
        out
    }

    /// Largest `|div B|` and `|curl E|` over the points.
    pub fn maxwell_residual(&self, points: &[[f64; 3]]) -> Result<(f64, f64), EvalError> {
        let div_b = div(self.b()).simplify();
        let curl_e = curl(self.e()).simplify();
        let mut worst = (0.0f64, 0.0f64);
        for p in points {
            worst.0 = worst.0.max(div_b.eval_at(*p)?.abs());
            worst.1 = curl_e.eval_at(*p)?.iter().fold(worst.1, |m, c| m.max(c.abs()));
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_field_from_rotation_potential() {
        let fs = FieldSpec::parse(["-y", "x", "0"], "z").unwrap();
        assert_eq!(fs.b_at([0.3, 0.2, 0.1]).unwrap(), [0.0, 0.0, 2.0]);
        assert_eq!(fs.e_at([0.3, 0.2, 0.1]).unwrap(), [0.0, 0.0, -1.0]);
    }

    #[test]
    fn unbound_parameters_are_rejected() {
        let a = VecExpr::parse(["q*y", "0", "0"]).unwrap();
        let err = FieldSpec::new("t", a, Expr::zero(), BTreeMap::new(), DomainHint::everywhere()).unwrap_err();
        assert_eq!(err, FieldError::Unbound(vec!["q".into()]));
    }

    #[test]
    fn sampling_respects_domain() {
        let fs = FieldSpec::parse(["0", "0", "ln(z)"], "0").unwrap().with_domain(DomainHint::octant());
        let pts = fs.sample_points(40, 0.5, 2.0, 0);
        assert_eq!(pts.len(), 40);
        assert!(pts.iter().all(|p| p.iter().all(|&c| c > TUBE)));
        let (db, ce) = fs.maxwell_residual(&pts).unwrap();
        assert!(db < 1e-12 && ce < 1e-12);
    }
}
