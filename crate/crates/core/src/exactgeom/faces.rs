//! Face enumeration from vertex–facet incidence.

use std::collections::{BTreeSet, VecDeque};

use super::{linalg, sub, QVec};

/// Every nonempty face of a polytope with `nverts` vertices, given the
/// vertex sets of its facets. Faces are the intersections of families of
/// facets; the polytope itself is included. Output is sorted by size then
/// lexicographically.
pub fn face_closure(nverts: usize, facet_sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let full: Vec<usize> = (0..nverts).collect();
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    if nverts > 0 {
        seen.insert(full.clone());
    }
    for f in facet_sets {
        if !f.is_empty() && seen.insert(f.clone()) {
            queue.push_back(f.clone());
        }
    }
    while let Some(face) = queue.pop_front() {
        for f in facet_sets {
            let meet: Vec<usize> = face
                .iter()
                .copied()
                .filter(|v| f.binary_search(v).is_ok())
                .collect();
            if !meet.is_empty() && seen.insert(meet.clone()) {
                queue.push_back(meet);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Affine dimension of the vertex subset `ids`.
pub fn subset_dim(points: &[QVec], ids: &[usize]) -> usize {
    if ids.len() <= 1 {
        return 0;
    }
    let base = &points[ids[0]];
    let diffs: Vec<QVec> = ids[1..].iter().map(|&i| sub(&points[i], base)).collect();
    linalg::rank(&diffs)
}

/// Faces with their dimensions, sorted by dimension then vertex order.
pub fn faces_with_dims(points: &[QVec], facet_sets: &[Vec<usize>]) -> Vec<(usize, Vec<usize>)> {
    let mut faces: Vec<(usize, Vec<usize>)> = face_closure(points.len(), facet_sets)
        .into_iter()
        .map(|f| (subset_dim(points, &f), f))
        .collect();
    faces.sort();
    faces
}

/// f-vector `(f_0, …, f_top)` of a face list.
pub fn f_vector(faces: &[(usize, Vec<usize>)]) -> Vec<usize> {
    let top = faces.iter().map(|(d, _)| *d).max().unwrap_or(0);
    let mut f = vec![0; top + 1];
    for (d, _) in faces {
        f[*d] += 1;
    }
    f
}

pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::qvec;

    #[test]
    fn cube_f_vector() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(qvec(&[x, y, z]));
                }
            }
        }
        let facets: Vec<Vec<usize>> = (0..3)
            .flat_map(|axis| {
                let pts = &pts;
                (0..2).map(move |side| {
                    (0..8)
                        .filter(|&i| pts[i][axis] == crate::exactgeom::int(side))
                        .collect()
                })
            })
            .collect();
        let faces = faces_with_dims(&pts, &facets);
        assert_eq!(f_vector(&faces), vec![8, 12, 6, 1]);
    }
}
