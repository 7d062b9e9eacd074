//! Gaussian elimination over `Scalar`, exact for rational input.

use crate::scalar::Scalar;

fn negligible(s: &Scalar, tol: f64) -> bool {
    s.is_negligible(tol)
}

/// Reduced row echelon form in place; returns the pivot columns. Floating
/// entries below `tol` in magnitude count as zero.
pub fn rref(m: &mut [Vec<Scalar>], tol: f64) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        // largest magnitude pivot
        let best = (r..rows)
            .filter(|&i| !negligible(&m[i][col], tol))
            .max_by(|&a, &b| m[a][col].to_f64().abs().total_cmp(&m[b][col].to_f64().abs()));
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for j in 0..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Scalar>], tol: f64) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, tol).len()
}

/// Coefficients `a` with `Σ a_k basis[k] = target`, or `None` when the target
/// is outside the span. Basis vectors must be independent.
pub fn solve_in_span(basis: &[Vec<Scalar>], target: &[Scalar], tol: f64) -> Option<Vec<Scalar>> {
    let n = target.len();
    let d = basis.len();
    // rows = coordinates, columns = basis vectors + target
    let mut m: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut row: Vec<Scalar> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, tol);
    if pivots.contains(&d) {
        return None;
    }
    let mut out = vec![Scalar::zero(); d];
    for (r, &c) in pivots.iter().enumerate() {
        out[c] = m[r][d].clone();
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn exact_solve() {
        let basis = vec![v(&[1, 0, 1]), v(&[0, 2, 2])];
        let a = solve_in_span(&basis, &v(&[3, 4, 7]), 0.0).unwrap();
        assert_eq!(a, vec![Scalar::int(3), Scalar::int(2)]);
        assert!(solve_in_span(&basis, &v(&[1, 0, 0]), 0.0).is_none());
        assert_eq!(rank(&[v(&[1, 2]), v(&[2, 4])], 0.0), 1);
    }
}
