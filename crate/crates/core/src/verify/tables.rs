use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use serde::Serialize;

use super::{distance_to_span, reduce};
use crate::expr::parse;
use crate::fields::{catalog, default_params, CatalogTable};
use crate::liealg::{bracket, EquivGenerator};
use crate::optimal::{match_row, rows, MatchVerdict, Params};
use crate::scalar::Scalar;

/// A detected algebra, or a subalgebra of it, identified with a catalog row.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TableMatch {
    pub label: String,
    pub table: CatalogTable,
    pub row: usize,
    pub params: BTreeMap<String, String>,
    /// The span that was matched, row-reduced.
    pub subalgebra: Vec<[f64; 8]>,
    pub whole: bool,
    pub residual: f64,
}

fn lift(v: &[f64; 8]) -> EquivGenerator {
    let mut c: [Scalar; 9] = std::array::from_fn(|_| Scalar::zero());
    for i in 0..8 {
        c[i] = Scalar::float(v[i]);
    }
    EquivGenerator::from_scalars(c)
}

fn orthonormal(vs: &[[f64; 8]]) -> Vec<[f64; 8]> {
    if vs.is_empty() {
        return vec![];
    }
    let m = DMatrix::from_fn(vs.len(), 8, |r, c| vs[r][c]);
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let top = svd.singular_values.max();
    (0..svd.singular_values.len())
        .filter(|i| svd.singular_values[*i] > 1e-8 * top)
        .map(|i| std::array::from_fn(|j| vt[(i, j)]))
        .collect()
}

/// Span of all brackets of basis pairs.
pub fn derived(basis: &[[f64; 8]]) -> Vec<[f64; 8]> {
    let gens: Vec<EquivGenerator> = basis.iter().map(lift).collect();
    let mut out = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let b = bracket(&gens[i], &gens[j]).finite_f64();
            out.push(std::array::from_fn(|k| b[k]));
        }
    }
    orthonormal(&out)
}

fn same_span(a: &[[f64; 8]], b: &[[f64; 8]]) -> bool {
    let (oa, ob) = (orthonormal(a), orthonormal(b));
    oa.len() == ob.len() && a.iter().all(|v| distance_to_span(&ob, v) < 1e-9) && b.iter().all(|v| distance_to_span(&oa, v) < 1e-9)
}

fn sym_table(dim: usize, noether: bool) -> Option<CatalogTable> {
    Some(match (dim, noether) {
        (1, false) => CatalogTable::Sym2,
        (2, false) => CatalogTable::Sym3,
        (3, false) => CatalogTable::Sym4,
        (1, true) => CatalogTable::Noe2,
        (2, true) => CatalogTable::Noe3,
        (3, true) => CatalogTable::Noe4,
        _ => return None,
    })
}

/// Table, row and the constants its generators actually use.
fn catalog_row_for(span: &[[f64; 8]], params: &BTreeMap<String, String>, noether: bool) -> Option<(CatalogTable, usize, BTreeMap<String, String>)> {
    let table = sym_table(span.len(), noether)?;
    let mut p: Params = default_params();
    for (k, v) in params {
        p.insert(k.clone(), v.parse().ok()?);
    }
    catalog(table).into_iter().find_map(|row| {
        if !(row.admissible)(&p) {
            return None;
        }
        let gens: Vec<[f64; 8]> = row.generators(&p).iter().map(|g| g.to_f64()).collect();
        if !same_span(&gens, span) {
            return None;
        }
        let used: BTreeSet<String> = row.generators.iter().flat_map(|g| parse(g).map(|e| e.params()).unwrap_or_default()).collect();
        let kept = params.iter().filter(|(k, _)| used.contains(*k)).map(|(k, v)| (k.clone(), v.clone())).collect();
        Some((table, row.row, kept))
    })
}

fn label(table: CatalogTable, row: usize, params: &BTreeMap<String, String>) -> String {
    let base = format!("Table {} row {}", table.number(), row);
    if params.is_empty() {
        base
    } else {
        let p: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{base} ({})", p.join(","))
    }
}

fn try_span(span: &[[f64; 8]], whole: bool, seed: u64) -> Option<TableMatch> {
    let d = span.len();
    if !(1..=3).contains(&d) {
        return None;
    }
    let gens: Vec<EquivGenerator> = span.iter().map(lift).collect();
    for row in rows(d) {
        let MatchVerdict::Matched { params, residual, .. } = match_row(&gens, &row, true, seed) else { continue };
        let noether = span.iter().all(|v| (v[7] - 2.0 * v[6]).abs() < 1e-9);
        let found = if noether { catalog_row_for(span, &params, true) } else { None }.or_else(|| catalog_row_for(span, &params, false));
        let (table, r, params) = found.unwrap_or((sym_table(d, false)?, row.row, params));
        return Some(TableMatch {
            label: label(table, r, &params),
            table,
            row: r,
            params,
            subalgebra: reduce(span),
            whole,
            residual,
        });
    }
    None
}

/// Matches the detected algebra against the optimal systems, up to adjoint
/// equivalence, and names the catalog row realizing it. Algebras of
/// dimension above three are matched through their Noether part or their
/// derived algebra.
pub fn match_tables(basis: &[[f64; 8]], noether: &[[f64; 8]], seed: u64) -> Option<TableMatch> {
    if let Some(m) = try_span(basis, true, seed) {
        return Some(m);
    }
    if noether.len() != basis.len() {
        if let Some(m) = try_span(noether, false, seed) {
            return Some(m);
        }
    }
    let mut cur = basis.to_vec();
    loop {
        let next = derived(&cur);
        if next.is_empty() || next.len() == cur.len() {
            return None;
        }
        if let Some(m) = try_span(&next, false, seed) {
            return Some(m);
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotations_are_their_own_derived_algebra() {
        let mut b = vec![];
        for k in 3..6 {
            let mut e = [0.0; 8];
            e[k] = 1.0;
            b.push(e);
        }
        assert!(same_span(&derived(&b), &b));
        b.push([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 2.0]);
        assert_eq!(derived(&b).len(), 3);
    }

    #[test]
    fn stormer_span_is_named() {
        let b = [[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 3.0]];
        let m = match_tables(&b, &b[..1], 0).unwrap();
        assert_eq!(m.label, "Table 6 row 6 (k1=0,k2=3)");
        assert!(m.whole);
    }
}
