//! Squared volumes of polytopes inside an affine subspace.
//!
//! A `k`-dimensional volume under a rational form is `sqrt(det G) · V`
//! where `V` is the coordinate volume and `G` the Gram matrix of the
//! subspace basis, so the square `det G · V²` is rational.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::dd::convex_hull;
use super::faces::{faces_with_dims, is_subset};
use super::{int, linalg, sub, AffineSubspace, QVec, QuadraticForm, Scalar, VPolytope};
use crate::error::{Error, Result};

/// Pulling triangulation of a full-dimensional polytope given by its face
/// list. Each simplex is a list of `dim + 1` vertex ids.
pub fn pulling_triangulation(faces: &[(usize, Vec<usize>)], top: usize) -> Vec<Vec<usize>> {
    let mut memo: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
    let top_idx = faces
        .iter()
        .position(|(d, _)| *d == top)
        .expect("top face present");
    triangulate(faces, top_idx, &mut memo)
}

fn triangulate(
    faces: &[(usize, Vec<usize>)],
    idx: usize,
    memo: &mut HashMap<usize, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(t) = memo.get(&idx) {
        return t.clone();
    }
    let (dim, verts) = &faces[idx];
    let out = if *dim == 0 {
        vec![vec![verts[0]]]
    } else {
        let apex = verts[0];
        let mut simplices = Vec::new();
        for (j, (d, sub_verts)) in faces.iter().enumerate() {
            if *d + 1 == *dim && is_subset(sub_verts, verts) && !sub_verts.contains(&apex) {
                for mut s in triangulate(faces, j, memo) {
                    s.push(apex);
                    simplices.push(s);
                }
            }
        }
        simplices
    };
    memo.insert(idx, out.clone());
    out
}

fn factorial(n: usize) -> Scalar {
    (1..=n as i64).fold(int(1), |acc, i| acc * int(i))
}

/// Exact squared `within.dim()`-dimensional volume of `p` under `form`.
/// Zero when `p` is lower-dimensional than `within`.
pub fn volume(p: &VPolytope, within: &AffineSubspace, form: &QuadraticForm) -> Result<Scalar> {
    let k = within.dim();
    if p.vertices.is_empty() {
        return Ok(Scalar::zero());
    }
    let coords: Vec<QVec> = p
        .vertices
        .iter()
        .map(|v| {
            within
                .coordinates(v)
                .ok_or_else(|| Error::InvalidInput("vertex outside the given subspace".into()))
        })
        .collect::<Result<_>>()?;
    if k == 0 {
        return Ok(int(1));
    }
    let hull = convex_hull(&coords)?;
    if hull.dim() < k {
        return Ok(Scalar::zero());
    }
    let pts = &hull.polytope.vertices;
    let faces = faces_with_dims(pts, &hull.polytope.facet_vertices);
    let mut coord_volume = Scalar::zero();
    for simplex in pulling_triangulation(&faces, k) {
        let base = &pts[simplex[0]];
        let m: Vec<QVec> = simplex[1..].iter().map(|&i| sub(&pts[i], base)).collect();
        coord_volume += linalg::determinant(&m).abs();
    }
    let gram = form.gram_of(&within.direction_basis);
    let scale = linalg::determinant(&gram) / (factorial(k) * factorial(k));
    Ok(scale * &coord_volume * &coord_volume)
}
