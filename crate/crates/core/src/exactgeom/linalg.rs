//! Dense exact linear algebra over rationals, plus a small integer
//! Hermite reduction for sublattice bases.

use num_traits::Zero;

use super::{QVec, Scalar};

/// Reduced row echelon form. Returns the reduced rows (zero rows dropped)
/// and the pivot column of each.
pub fn rref(rows: &[QVec]) -> (Vec<QVec>, Vec<usize>) {
    let mut m: Vec<QVec> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[QVec]) -> usize {
    rref(rows).1.len()
}

/// Indices of a maximal linearly independent subset, chosen greedily in
/// input order.
pub fn independent_rows(rows: &[QVec]) -> Vec<usize> {
    let mut picked: Vec<usize> = Vec::new();
    let mut basis: Vec<QVec> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        basis.push(row.clone());
        if rank(&basis) == basis.len() {
            picked.push(i);
        } else {
            basis.pop();
        }
    }
    picked
}

pub fn determinant(m: &[QVec]) -> Scalar {
    let n = m.len();
    let mut a: Vec<QVec> = m.to_vec();
    let mut det = Scalar::from_integer(1.into());
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Scalar::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let delta = &f * &a[c][j];
                a[i][j] -= delta;
            }
        }
    }
    det
}

/// Solves `A x = b` for square nonsingular `A`.
pub fn solve(a: &[QVec], b: &[Scalar]) -> Option<QVec> {
    let n = a.len();
    let aug: Vec<QVec> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(red.iter().map(|r| r[n].clone()).collect())
}

/// Coefficients `c` with `Σ c_i basis_i = v`, or `None` if `v` is outside
/// the span. `basis` must be linearly independent.
pub fn solve_in_span(basis: &[QVec], v: &[Scalar]) -> Option<QVec> {
    let k = basis.len();
    let n = v.len();
    // rows of the augmented system: one per ambient coordinate
    let aug: Vec<QVec> = (0..n)
        .map(|i| {
            let mut r: QVec = basis.iter().map(|b| b[i].clone()).collect();
            r.push(v[i].clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Scalar::zero(); k];
    for (row, &p) in red.iter().zip(&pivots) {
        x[p] = row[k].clone();
    }
    Some(x)
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    let (red, pivots) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Scalar::zero(); ncols];
            x[f] = Scalar::from_integer(1.into());
            for (row, &p) in red.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Row-style Hermite reduction: a basis of the integer lattice generated by
/// `vectors`, in echelon form with positive pivots.
pub fn integer_basis(vectors: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let Some(n) = vectors.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut m: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    let mut out: Vec<Vec<i128>> = Vec::new();
    for c in 0..n {
        // Euclid on column c across the remaining rows
        loop {
            let mut nz: Vec<usize> = (0..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by_key(|&i| m[i][c].abs());
            let p = nz[0];
            for &i in &nz[1..] {
                let q = m[i][c] / m[p][c];
                let pivot_row = m[p].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= q * y;
                }
            }
        }
        if let Some(p) = (0..m.len()).find(|&i| m[i][c] != 0) {
            let mut row = m.remove(p);
            if row[c] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(row);
        }
        m.retain(|r| r.iter().any(|&x| x != 0));
    }
    // reduce entries above pivots
    for i in 0..out.len() {
        let pc = out[i].iter().position(|&x| x != 0).expect("nonzero row");
        for j in 0..i {
            let q = out[j][pc].div_euclid(out[i][pc]);
            if q != 0 {
                let pivot_row = out[i].clone();
                for (x, y) in out[j].iter_mut().zip(&pivot_row) {
                    *x -= q * y;
                }
            }
        }
    }
    out.into_iter()
        .map(|r| r.into_iter().map(|x| x as i64).collect())
        .collect()
}

/// Integer coordinates of `v` in an independent integer `basis`, if any.
pub fn integer_coordinates(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<i64>> {
    let qb: Vec<QVec> = basis.iter().map(|b| super::qvec(b)).collect();
    let c = solve_in_span(&qb, &super::qvec(v))?;
    super::to_integer_vec(&c)
}

pub fn transpose(m: &[QVec]) -> Vec<QVec> {
    let Some(cols) = m.first().map(Vec::len) else {
        return Vec::new();
    };
    (0..cols)
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::{int, qvec, ratio};

    #[test]
    fn determinant_and_solve() {
        let m = vec![qvec(&[2, 1]), qvec(&[1, 2])];
        assert_eq!(determinant(&m), int(3));
        let x = solve(&m, &qvec(&[1, 0])).unwrap();
        assert_eq!(x, vec![ratio(2, 3), ratio(-1, 3)]);
        assert!(solve(&[qvec(&[1, 1]), qvec(&[2, 2])], &qvec(&[1, 1])).is_none());
    }

    #[test]
    fn span_membership() {
        let basis = vec![qvec(&[1, 0, 1]), qvec(&[0, 1, 1])];
        assert_eq!(
            solve_in_span(&basis, &qvec(&[2, 3, 5])),
            Some(qvec(&[2, 3]))
        );
        assert_eq!(solve_in_span(&basis, &qvec(&[0, 0, 1])), None);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let rows = vec![qvec(&[1, 2, 3]), qvec(&[0, 1, 1])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert_eq!(crate::exactgeom::dot(r, &ns[0]), int(0));
        }
    }

    #[test]
    fn hermite_basis_of_generated_lattice() {
        let b = integer_basis(&[vec![2, 0], vec![0, 2], vec![2, 2], vec![4, 2]]);
        assert_eq!(b, vec![vec![2, 0], vec![0, 2]]);
        let b = integer_basis(&[vec![1, 1, 0], vec![1, -1, 0], vec![0, 1, 0]]);
        assert_eq!(b, vec![vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(integer_coordinates(&b, &[3, -2, 0]), Some(vec![3, -2]));
        let b = integer_basis(&[vec![6, 4], vec![4, 6]]);
        assert_eq!(b.len(), 2);
        assert!(integer_coordinates(&b, &[10, 10]).is_some());
        assert!(integer_coordinates(&b, &[2, 2]).is_none());
    }
}
