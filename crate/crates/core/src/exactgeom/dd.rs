//! Double description method for pointed polyhedral cones, and the two
//! conversions built on it: halfspaces → vertices ([`dual_description`])
//! and points → facets ([`convex_hull`]).

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};

use super::lp::{solve_lp, LpOutcome};
use super::{
    affine_hull, dot, linalg, normalize_ray, scale, vec_strings, zeros, AffineSubspace,
    HPolyhedron, QVec, Scalar, VPolytope,
};
use crate::error::{Error, Result};

struct Ray {
    v: QVec,
    zeros: FixedBitSet,
}

/// Extreme rays of the pointed cone `{ z : ⟨row, z⟩ ≥ 0 for every row }`.
///
/// Rows are inserted in index order after an initial simplicial cone
/// spanned by the first independent rows. Adjacency uses the combinatorial
/// test on zero sets. Rays are returned as primitive integer vectors in
/// lexicographic order.
pub fn cone_extreme_rays(rows: &[QVec]) -> Result<Vec<QVec>> {
    let Some(n) = rows.first().map(Vec::len) else {
        return Err(Error::NotPointed);
    };
    let init = linalg::independent_rows(rows);
    if init.len() < n {
        return Err(Error::NotPointed);
    }
    let init = &init[..n];
    let m = rows.len();
    let basis: Vec<QVec> = init.iter().map(|&i| rows[i].clone()).collect();

    let mut rays: Vec<Ray> = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = zeros(n);
        e[i] = Scalar::one();
        let v = linalg::solve(&basis, &e)
            .ok_or_else(|| Error::Internal("initial basis is singular".into()))?;
        let mut zs = FixedBitSet::with_capacity(m);
        for (j, &row) in init.iter().enumerate() {
            if j != i {
                zs.insert(row);
            }
        }
        rays.push(Ray {
            v: normalize_ray(&v),
            zeros: zs,
        });
    }

    for r in 0..m {
        if init.contains(&r) {
            continue;
        }
        let vals: Vec<Scalar> = rays.iter().map(|ray| dot(&rows[r], &ray.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (ray, val) in rays.iter_mut().zip(&vals) {
                if val.is_zero() {
                    ray.zeros.insert(r);
                }
            }
            continue;
        }
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[q].zeros);
                if common.count_ones(..) + 2 < n {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&s| s != p && s != q)
                    .all(|s| !common.is_subset(&rays[s].zeros));
                if !adjacent {
                    continue;
                }
                let v: QVec = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(vq, vp)| &vals[p] * vq - &vals[q] * vp)
                    .collect();
                common.insert(r);
                fresh.push(Ray {
                    v: normalize_ray(&v),
                    zeros: common,
                });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut ray, val) in rays.into_iter().zip(&vals) {
            if val.is_negative() {
                continue;
            }
            if val.is_zero() {
                ray.zeros.insert(r);
            }
            kept.push(ray);
        }
        kept.extend(fresh);
        rays = kept;
    }

    let mut out: Vec<QVec> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn unit(n: usize, i: usize, negative: bool) -> QVec {
    let mut e = zeros(n);
    e[i] = if negative {
        -Scalar::one()
    } else {
        Scalar::one()
    };
    e
}

/// Vertices and vertex–facet incidence of a bounded H-polyhedron.
///
/// Boundedness is checked first by maximizing each `±e_i`. An empty input
/// yields an empty [`VPolytope`].
pub fn dual_description(h: &HPolyhedron) -> Result<VPolytope> {
    let n = h.dim;
    for i in 0..n {
        for negative in [false, true] {
            match solve_lp(h, &unit(n, i, negative))? {
                LpOutcome::Optimal(_) => {}
                LpOutcome::Infeasible { .. } => {
                    return Ok(VPolytope {
                        vertices: Vec::new(),
                        facets: Vec::new(),
                        facet_vertices: Vec::new(),
                        redundant: (0..h.halfspaces.len()).collect(),
                    })
                }
                LpOutcome::Unbounded { direction } => {
                    return Err(Error::Unbounded {
                        direction: vec_strings(&direction),
                    })
                }
            }
        }
    }
    if n == 0 {
        return Err(Error::InvalidInput("zero-dimensional polyhedron".into()));
    }

    // homogenize: (t, x) with b t − ⟨a, x⟩ ≥ 0 and t ≥ 0
    let mut rows: Vec<QVec> = h
        .halfspaces
        .iter()
        .map(|(a, b)| {
            let mut row = Vec::with_capacity(n + 1);
            row.push(b.clone());
            row.extend(a.iter().map(|x| -x));
            row
        })
        .collect();
    rows.push(unit(n + 1, 0, false));
    let rays = cone_extreme_rays(&rows)?;

    let mut vertices: Vec<QVec> = Vec::with_capacity(rays.len());
    for ray in rays {
        if !ray[0].is_positive() {
            return Err(Error::Internal(
                "bounded polytope produced a recession ray".into(),
            ));
        }
        let inv = ray[0].recip();
        vertices.push(scale(&inv, &ray[1..]));
    }
    vertices.sort();
    vertices.dedup();
    Ok(incidence(h, vertices))
}

fn affine_rank(points: &[&QVec]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let diffs: Vec<QVec> = points[1..]
        .iter()
        .map(|p| super::sub(p, points[0]))
        .collect();
    linalg::rank(&diffs)
}

fn incidence(h: &HPolyhedron, vertices: Vec<QVec>) -> VPolytope {
    let all: Vec<&QVec> = vertices.iter().collect();
    let poly_dim = affine_rank(&all);
    let mut facets = Vec::new();
    let mut facet_vertices: Vec<Vec<usize>> = Vec::new();
    let mut redundant = Vec::new();
    for (i, (a, b)) in h.halfspaces.iter().enumerate() {
        let tight: Vec<usize> = (0..vertices.len())
            .filter(|&v| dot(a, &vertices[v]) == *b)
            .collect();
        let pts: Vec<&QVec> = tight.iter().map(|&v| &vertices[v]).collect();
        let is_facet = !tight.is_empty()
            && tight.len() < vertices.len()
            && affine_rank(&pts) + 1 == poly_dim
            && !facet_vertices.contains(&tight);
        if is_facet {
            facets.push(i);
            facet_vertices.push(tight);
        } else {
            redundant.push(i);
        }
    }
    VPolytope {
        vertices,
        facets,
        facet_vertices,
        redundant,
    }
}

/// Convex hull of a point set inside its own affine hull.
#[derive(Clone, Debug)]
pub struct Hull {
    pub affine: AffineSubspace,
    /// Vertices in ambient coordinates with facet incidence; `facets`
    /// index into `intrinsic`.
    pub polytope: VPolytope,
    /// Facet inequalities in the coordinates of `affine`.
    pub intrinsic: HPolyhedron,
}

impl Hull {
    pub fn dim(&self) -> usize {
        self.affine.dim()
    }
}

/// Facets and vertices of `conv(points)`, computed within `aff(points)`.
/// Points that are not vertices are dropped.
pub fn convex_hull(points: &[QVec]) -> Result<Hull> {
    if points.is_empty() {
        return Err(Error::InvalidInput("convex hull of no points".into()));
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let affine = affine_hull(&pts);
    let p = affine.dim();
    if p == 0 {
        return Ok(Hull {
            affine,
            polytope: VPolytope {
                vertices: pts,
                facets: Vec::new(),
                facet_vertices: Vec::new(),
                redundant: Vec::new(),
            },
            intrinsic: HPolyhedron {
                dim: 0,
                halfspaces: Vec::new(),
            },
        });
    }
    let coords: Vec<QVec> = pts
        .iter()
        .map(|x| {
            affine
                .coordinates(x)
                .ok_or_else(|| Error::Internal("point outside its affine hull".into()))
        })
        .collect::<Result<_>>()?;
    // valid inequalities ⟨a, c⟩ ≤ b as the cone b − ⟨a, c_i⟩ ≥ 0 in (b, a)
    let rows: Vec<QVec> = coords
        .iter()
        .map(|c| {
            let mut row = Vec::with_capacity(p + 1);
            row.push(Scalar::one());
            row.extend(c.iter().map(|x| -x));
            row
        })
        .collect();
    let rays = cone_extreme_rays(&rows)?;
    let halfspaces: Vec<(QVec, Scalar)> = rays
        .into_iter()
        .filter(|r| !r[1..].iter().all(Zero::is_zero))
        .map(|r| (r[1..].to_vec(), r[0].clone()))
        .collect();
    let tight: Vec<FixedBitSet> = halfspaces
        .iter()
        .map(|(a, b)| {
            let mut s = FixedBitSet::with_capacity(pts.len());
            for (i, c) in coords.iter().enumerate() {
                if dot(a, c) == *b {
                    s.insert(i);
                }
            }
            s
        })
        .collect();
    let is_vertex: Vec<bool> = (0..pts.len())
        .map(|i| {
            let mut acc = FixedBitSet::with_capacity(pts.len());
            acc.insert_range(..);
            for t in tight.iter().filter(|t| t.contains(i)) {
                acc.intersect_with(t);
            }
            acc.count_ones(..) == 1
        })
        .collect();
    let mut remap = vec![usize::MAX; pts.len()];
    let mut vertices = Vec::new();
    for i in 0..pts.len() {
        if is_vertex[i] {
            remap[i] = vertices.len();
            vertices.push(pts[i].clone());
        }
    }
    let facet_vertices: Vec<Vec<usize>> = tight
        .iter()
        .map(|t| {
            t.ones()
                .filter(|&i| is_vertex[i])
                .map(|i| remap[i])
                .collect()
        })
        .collect();
    Ok(Hull {
        affine,
        polytope: VPolytope {
            vertices,
            facets: (0..halfspaces.len()).collect(),
            facet_vertices,
            redundant: Vec::new(),
        },
        intrinsic: HPolyhedron { dim: p, halfspaces },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::{int, qvec, ratio, QuadraticForm};

    fn halfspaces_of_form(form: &QuadraticForm, vectors: &[Vec<i64>]) -> HPolyhedron {
        let hs = vectors
            .iter()
            .map(|v| {
                let v = qvec(v);
                (form.apply(&v), form.norm2(&v) / int(2))
            })
            .collect();
        HPolyhedron::new(form.dim(), hs).unwrap()
    }

    /// Vertex oracle: solve every `dim`-subset of tight equations and keep
    /// the feasible solutions.
    fn brute_force_vertices(h: &HPolyhedron) -> Vec<QVec> {
        let n = h.dim;
        let m = h.halfspaces.len();
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let a: Vec<QVec> = idx.iter().map(|&i| h.halfspaces[i].0.clone()).collect();
            let b: Vec<Scalar> = idx.iter().map(|&i| h.halfspaces[i].1.clone()).collect();
            if let Some(x) = linalg::solve(&a, &b) {
                if h.contains(&x) {
                    out.push(x);
                }
            }
            // next combination
            let mut k = n;
            while k > 0 && idx[k - 1] == m - n + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..n {
                idx[j] = idx[j - 1] + 1;
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn square() {
        let h = HPolyhedron::new(
            2,
            vec![
                (qvec(&[1, 0]), ratio(1, 2)),
                (qvec(&[-1, 0]), ratio(1, 2)),
                (qvec(&[0, 1]), ratio(1, 2)),
                (qvec(&[0, -1]), ratio(1, 2)),
            ],
        )
        .unwrap();
        let v = dual_description(&h).unwrap();
        assert_eq!(v.vertices.len(), 4);
        assert!(v.vertices.contains(&vec![ratio(-1, 2), ratio(1, 2)]));
        assert_eq!(v.facets.len(), 4);
        for f in &v.facet_vertices {
            assert_eq!(f.len(), 2);
        }
    }

    #[test]
    fn hexagon_matches_oracle() {
        let form = QuadraticForm::from_ints(&[&[2, 1], &[1, 2]]).unwrap();
        let h = halfspaces_of_form(
            &form,
            &[
                vec![1, 0],
                vec![-1, 0],
                vec![0, 1],
                vec![0, -1],
                vec![1, -1],
                vec![-1, 1],
            ],
        );
        let v = dual_description(&h).unwrap();
        assert_eq!(v.vertices.len(), 6);
        assert_eq!(v.vertices, brute_force_vertices(&h));
        assert!(v.vertices.contains(&vec![ratio(2, 3), ratio(-1, 3)]));
    }

    #[test]
    fn fcc_cell_matches_oracle() {
        let form = QuadraticForm::from_ints(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]).unwrap();
        let mut vecs = Vec::new();
        for v in [
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, -1, 0],
            [1, 0, -1],
            [0, 1, -1],
        ] {
            vecs.push(v.to_vec());
            vecs.push(v.iter().map(|x| -x).collect());
        }
        let h = halfspaces_of_form(&form, &vecs);
        let v = dual_description(&h).unwrap();
        assert_eq!(v.vertices.len(), 14);
        assert_eq!(v.vertices, brute_force_vertices(&h));
        assert_eq!(v.facets.len(), 12);
        assert!(v.redundant.is_empty());
        for (vi, _) in v.vertices.iter().enumerate() {
            assert!(v.facets_at(vi).len() >= 3);
        }
    }

    #[test]
    fn redundant_halfspace_reported() {
        let h = HPolyhedron::new(
            1,
            vec![
                (qvec(&[1]), int(1)),
                (qvec(&[-1]), int(0)),
                (qvec(&[1]), int(5)),
            ],
        )
        .unwrap();
        let v = dual_description(&h).unwrap();
        assert_eq!(v.vertices, vec![qvec(&[0]), qvec(&[1])]);
        assert_eq!(v.redundant, vec![2]);
    }

    #[test]
    fn unbounded_input_is_an_error() {
        let h =
            HPolyhedron::new(2, vec![(qvec(&[1, 0]), int(1)), (qvec(&[0, 1]), int(1))]).unwrap();
        assert!(matches!(dual_description(&h), Err(Error::Unbounded { .. })));
    }

    #[test]
    fn hull_round_trip() {
        let form = QuadraticForm::from_ints(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]).unwrap();
        let mut vecs = Vec::new();
        for v in [
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, -1, 0],
            [1, 0, -1],
            [0, 1, -1],
        ] {
            vecs.push(v.to_vec());
            vecs.push(v.iter().map(|x| -x).collect());
        }
        let v = dual_description(&halfspaces_of_form(&form, &vecs)).unwrap();
        let hull = convex_hull(&v.vertices).unwrap();
        assert_eq!(hull.dim(), 3);
        assert_eq!(hull.intrinsic.halfspaces.len(), 12);
        // re-derive halfspaces (in hull coordinates) and run the dual description again
        let again = dual_description(&hull.intrinsic).unwrap();
        let mapped: Vec<QVec> = v
            .vertices
            .iter()
            .map(|x| hull.affine.coordinates(x).unwrap())
            .collect();
        let mut mapped = mapped;
        mapped.sort();
        assert_eq!(again.vertices, mapped);
    }

    #[test]
    fn hull_drops_interior_points() {
        let pts = vec![
            qvec(&[0, 0]),
            qvec(&[2, 0]),
            qvec(&[0, 2]),
            qvec(&[1, 1]),
            qvec(&[0, 1]),
        ];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.polytope.vertices.len(), 3);
        assert_eq!(hull.intrinsic.halfspaces.len(), 3);
        let seg = convex_hull(&[qvec(&[0, 0, 0]), qvec(&[1, 1, 1]), qvec(&[2, 2, 2])]).unwrap();
        assert_eq!(seg.dim(), 1);
        assert_eq!(
            seg.polytope.vertices,
            vec![qvec(&[0, 0, 0]), qvec(&[2, 2, 2])]
        );
    }
}
