//! Exact two-phase primal simplex with Bland's rule.
//!
//! Problems are `maximize ⟨c, x⟩ subject to A x ≤ b` with `x` free. Every
//! answer carries a certificate that is checked before it is returned:
//! optimal points come with dual multipliers `λ ≥ 0, Aᵀλ = c, ⟨b, λ⟩ =
//! value`; infeasibility with a Farkas vector `λ ≥ 0, Aᵀλ = 0, ⟨b, λ⟩ < 0`;
//! unboundedness with a ray `A d ≤ 0, ⟨c, d⟩ > 0`.

use num_traits::{Signed, Zero};

use super::{dot, linalg, HPolyhedron, QVec, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOptimum {
    pub point: QVec,
    pub value: Scalar,
    /// One nonnegative multiplier per constraint.
    pub duals: QVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpOptimum),
    Infeasible { farkas: QVec },
    Unbounded { direction: QVec },
}

impl LpOutcome {
    pub fn optimum(&self) -> Option<&LpOptimum> {
        match self {
            LpOutcome::Optimal(opt) => Some(opt),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<QVec>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Scalar {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Scalar], j: usize) -> Scalar {
        let mut rc = cost[j].clone();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if !cost[b].is_zero() && !row[j].is_zero() {
                rc -= &cost[b] * &row[j];
            }
        }
        rc
    }

    /// Maximizes `cost` over columns `< allowed`. On unboundedness returns
    /// the entering column.
    fn optimize(&mut self, cost: &[Scalar], allowed: usize) -> std::result::Result<(), usize> {
        loop {
            let entering = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_positive());
            let Some(j) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, Scalar)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((best, best_ratio)) => {
                        if ratio < best_ratio
                            || (ratio == best_ratio && self.basis[r] < self.basis[best])
                        {
                            Some((r, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            match leave {
                Some((r, _)) => self.pivot(r, j),
                None => return Err(j),
            }
        }
    }

    fn value(&self, cost: &[Scalar]) -> Scalar {
        self.basis
            .iter()
            .enumerate()
            .fold(Scalar::zero(), |acc, (r, &b)| acc + &cost[b] * self.rhs(r))
    }
}

/// Multipliers `y` with `Bᵀ y = c_B` for the current basis, over the
/// original (sign-normalized) constraint matrix.
fn basis_duals(matrix: &[QVec], basis: &[usize], cost: &[Scalar]) -> Result<QVec> {
    let m = matrix.len();
    // one equation per basic column: Σ_r y_r M[r][b] = cost[b]
    let system: Vec<QVec> = basis
        .iter()
        .map(|&b| {
            let mut row: QVec = (0..m).map(|r| matrix[r][b].clone()).collect();
            row.push(cost[b].clone());
            row
        })
        .collect();
    if system.is_empty() {
        return Ok(vec![Scalar::zero(); m]);
    }
    let (red, pivots) = linalg::rref(&system);
    if pivots.contains(&m) {
        return Err(Error::Internal("inconsistent simplex dual system".into()));
    }
    let mut y = vec![Scalar::zero(); m];
    for (row, &p) in red.iter().zip(&pivots) {
        y[p] = row[m].clone();
    }
    Ok(y)
}

/// Solves `maximize ⟨objective, x⟩` over `constraints`.
pub fn solve_lp(constraints: &HPolyhedron, objective: &[Scalar]) -> Result<LpOutcome> {
    let n = constraints.dim;
    if objective.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: objective.len(),
        });
    }
    let a: Vec<&QVec> = constraints.halfspaces.iter().map(|(a, _)| a).collect();
    let b: Vec<&Scalar> = constraints.halfspaces.iter().map(|(_, b)| b).collect();
    let m = a.len();
    let sign: Vec<bool> = b.iter().map(|x| !x.is_negative()).collect();
    let nart = sign.iter().filter(|s| !**s).count();
    let ncols = 2 * n + m + nart;
    let art_start = 2 * n + m;

    let mut matrix: Vec<QVec> = Vec::with_capacity(m);
    let mut rows: Vec<QVec> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_art = art_start;
    for r in 0..m {
        let s = if sign[r] {
            Scalar::from_integer(1.into())
        } else {
            Scalar::from_integer((-1).into())
        };
        let mut row = vec![Scalar::zero(); ncols + 1];
        for i in 0..n {
            row[i] = &s * &a[r][i];
            row[n + i] = -&row[i];
        }
        row[2 * n + r] = s.clone();
        if sign[r] {
            basis.push(2 * n + r);
        } else {
            row[next_art] = Scalar::from_integer(1.into());
            basis.push(next_art);
            next_art += 1;
        }
        row[ncols] = &s * b[r];
        matrix.push(row[..ncols].to_vec());
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis, ncols };

    if nart > 0 {
        let mut cost1 = vec![Scalar::zero(); ncols];
        for c in cost1[art_start..].iter_mut() {
            *c = Scalar::from_integer((-1).into());
        }
        tab.optimize(&cost1, ncols)
            .map_err(|_| Error::Internal("phase one reported unbounded".into()))?;
        if tab.value(&cost1).is_negative() {
            let y = basis_duals(&matrix, &tab.basis, &cost1)?;
            let farkas: QVec = y
                .iter()
                .zip(&sign)
                .map(|(yr, s)| if *s { yr.clone() } else { -yr.clone() })
                .collect();
            check_farkas(constraints, &farkas)?;
            return Ok(LpOutcome::Infeasible { farkas });
        }
        // drive zero-level artificials out of the basis
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= art_start {
                match (0..art_start).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(j) => {
                        tab.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }

    let mut cost = vec![Scalar::zero(); ncols];
    for i in 0..n {
        cost[i] = objective[i].clone();
        cost[n + i] = -objective[i].clone();
    }
    if let Err(j) = tab.optimize(&cost, art_start) {
        let mut dz = vec![Scalar::zero(); ncols];
        dz[j] = Scalar::from_integer(1.into());
        for (r, &bcol) in tab.basis.iter().enumerate() {
            dz[bcol] = -tab.rows[r][j].clone();
        }
        let direction: QVec = (0..n).map(|i| &dz[i] - &dz[n + i]).collect();
        if !constraints
            .halfspaces
            .iter()
            .all(|(a, _)| !dot(a, &direction).is_positive())
            || !dot(objective, &direction).is_positive()
        {
            return Err(Error::Internal("invalid unbounded ray".into()));
        }
        return Ok(LpOutcome::Unbounded { direction });
    }

    let mut z = vec![Scalar::zero(); ncols];
    for (r, &bcol) in tab.basis.iter().enumerate() {
        z[bcol] = tab.rhs(r).clone();
    }
    let point: QVec = (0..n).map(|i| &z[i] - &z[n + i]).collect();
    let value = dot(objective, &point);
    let y = basis_duals(&matrix, &tab.basis, &cost)?;
    let duals: QVec = y
        .iter()
        .zip(&sign)
        .map(|(yr, s)| if *s { yr.clone() } else { -yr.clone() })
        .collect();
    check_optimum(constraints, objective, &point, &value, &duals)?;
    Ok(LpOutcome::Optimal(LpOptimum {
        point,
        value,
        duals,
    }))
}

fn check_optimum(
    h: &HPolyhedron,
    objective: &[Scalar],
    point: &[Scalar],
    value: &Scalar,
    duals: &[Scalar],
) -> Result<()> {
    if !h.contains(point) {
        return Err(Error::Internal(
            "simplex optimum violates a constraint".into(),
        ));
    }
    if duals.iter().any(Signed::is_negative) {
        return Err(Error::Internal("negative dual multiplier".into()));
    }
    for i in 0..h.dim {
        let s = h
            .halfspaces
            .iter()
            .zip(duals)
            .fold(Scalar::zero(), |acc, ((a, _), y)| acc + &a[i] * y);
        if s != objective[i] {
            return Err(Error::Internal(
                "dual multipliers do not reproduce objective".into(),
            ));
        }
    }
    let dual_value = h
        .halfspaces
        .iter()
        .zip(duals)
        .fold(Scalar::zero(), |acc, ((_, b), y)| acc + b * y);
    if &dual_value != value {
        return Err(Error::Internal("primal and dual values differ".into()));
    }
    Ok(())
}

fn check_farkas(h: &HPolyhedron, farkas: &[Scalar]) -> Result<()> {
    let ok_sign = farkas.iter().all(|y| !y.is_negative());
    let ok_kernel = (0..h.dim).all(|i| {
        h.halfspaces
            .iter()
            .zip(farkas)
            .fold(Scalar::zero(), |acc, ((a, _), y)| acc + &a[i] * y)
            .is_zero()
    });
    let rhs = h
        .halfspaces
        .iter()
        .zip(farkas)
        .fold(Scalar::zero(), |acc, ((_, b), y)| acc + b * y);
    if ok_sign && ok_kernel && rhs.is_negative() {
        Ok(())
    } else {
        Err(Error::Internal("invalid Farkas certificate".into()))
    }
}

/// Some point of the polyhedron, or `None` when it is empty.
pub fn feasible_point(h: &HPolyhedron) -> Result<Option<QVec>> {
    match solve_lp(h, &vec![Scalar::zero(); h.dim])? {
        LpOutcome::Optimal(opt) => Ok(Some(opt.point)),
        LpOutcome::Infeasible { .. } => Ok(None),
        LpOutcome::Unbounded { .. } => Err(Error::Internal("zero objective unbounded".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::{int, qvec, ratio};

    fn poly(rows: &[(&[i64], i64)]) -> HPolyhedron {
        let dim = rows[0].0.len();
        HPolyhedron::new(dim, rows.iter().map(|(a, b)| (qvec(a), int(*b))).collect()).unwrap()
    }

    #[test]
    fn one_dimensional_box() {
        let h = poly(&[(&[1], 1), (&[-1], 0)]);
        let opt = solve_lp(&h, &qvec(&[1])).unwrap();
        let opt = opt.optimum().unwrap();
        assert_eq!(opt.point, qvec(&[1]));
        assert_eq!(opt.value, int(1));
    }

    #[test]
    fn unit_square_corner() {
        let h = poly(&[(&[1, 0], 1), (&[0, 1], 1), (&[-1, 0], 0), (&[0, -1], 0)]);
        let out = solve_lp(&h, &qvec(&[1, 1])).unwrap();
        let opt = out.optimum().unwrap();
        assert_eq!(opt.point, qvec(&[1, 1]));
        assert_eq!(opt.value, int(2));
        assert_eq!(opt.duals, qvec(&[1, 1, 0, 0]));
    }

    #[test]
    fn half_line_is_unbounded() {
        let h = poly(&[(&[-1], 0)]);
        match solve_lp(&h, &qvec(&[1])).unwrap() {
            LpOutcome::Unbounded { direction } => assert!(direction[0] > int(0)),
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_has_farkas() {
        let h = poly(&[(&[1], -1), (&[-1], -1)]);
        assert!(matches!(
            solve_lp(&h, &qvec(&[1])).unwrap(),
            LpOutcome::Infeasible { .. }
        ));
    }

    #[test]
    fn negative_offsets_need_phase_one() {
        // x ≥ 1, y ≥ 1/2, x + y ≤ 3, minimize x + 2y
        let h = HPolyhedron::new(
            2,
            vec![
                (qvec(&[-1, 0]), int(-1)),
                (qvec(&[0, -2]), int(-1)),
                (qvec(&[1, 1]), int(3)),
            ],
        )
        .unwrap();
        let out = solve_lp(&h, &qvec(&[-1, -2])).unwrap();
        let opt = out.optimum().unwrap();
        assert_eq!(opt.point, vec![int(1), ratio(1, 2)]);
        assert_eq!(opt.value, int(-2));
    }

    #[test]
    fn redundant_equalities() {
        // x + y = 1 written twice as pairs of inequalities, plus x ≥ 0, y ≥ 0
        let h = poly(&[
            (&[1, 1], 1),
            (&[-1, -1], -1),
            (&[2, 2], 2),
            (&[-2, -2], -2),
            (&[-1, 0], 0),
            (&[0, -1], 0),
        ]);
        let out = solve_lp(&h, &qvec(&[3, 1])).unwrap();
        assert_eq!(out.optimum().unwrap().value, int(3));
    }

    #[test]
    fn dimension_mismatch() {
        let h = poly(&[(&[1, 0], 1)]);
        assert!(solve_lp(&h, &qvec(&[1])).is_err());
    }
}
