use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::faces::face_closure;
use crate::exactgeom::linalg::rank;
use crate::exactgeom::lp::feasible_point;
use crate::exactgeom::{
    add, cone_extreme_rays, dot, is_zero_vec, neg, normalize_ray, qvec, sub, zeros, HPolyhedron,
    Projection, QVec, QuadraticForm, Scalar,
};
use crate::lattice::IVec;
use crate::parallelohedron::{Face, Tiling};
use crate::star::FaceStar;

use super::signature::{canonical_form, LabeledPoset, Signature};

/// The projected tangent cone of one tile at `F`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub tile: IVec,
    /// Inward facet normals: the cone is `{x : ⟨u, x⟩ ≥ 0}`.
    pub normals: Vec<QVec>,
    /// Sorted ids into [`ConeFan::rays`].
    pub rays: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FanFace {
    pub dim: usize,
    pub rays: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ConeFan {
    pub face_id: usize,
    pub k: usize,
    /// Primitive directions of all extreme rays, sorted.
    pub rays: Vec<QVec>,
    pub cones: Vec<Cone>,
    /// All cone faces, apex included, deduplicated, sorted.
    pub faces: Vec<FanFace>,
}

impl ConeFan {
    pub fn top_cones(&self) -> usize {
        self.faces.iter().filter(|f| f.dim == self.k).count()
    }
}

/// Projects the tangent cone of every tile of the star at the barycenter
/// of `F` along `lin F` under `form`.
pub fn fan_of_face(
    tiling: &Tiling,
    face: &Face,
    star: &FaceStar,
    form: &QuadraticForm,
) -> Result<ConeFan> {
    let k = face.codim(tiling.dim());
    let proj = Projection::new(&face.affine(), form)?;
    let x0 = face.barycenter();
    let mut raw: Vec<(IVec, Vec<QVec>, Vec<QVec>)> = Vec::new();
    for t in &star.translations {
        let shift = qvec(t);
        let mut gens: Vec<QVec> = tiling
            .cell
            .vertices()
            .iter()
            .map(|v| normalize_ray(&proj.linear_coords(&sub(&add(v, &shift), &x0))))
            .filter(|g| !is_zero_vec(g))
            .collect();
        gens.sort();
        gens.dedup();
        let normals = cone_extreme_rays(&gens).map_err(|e| match e {
            Error::NotPointed => Error::Internal(format!(
                "tangent cone of tile {t:?} at face {} is not full-dimensional",
                face.id
            )),
            other => other,
        })?;
        let extreme: Vec<QVec> = gens
            .into_iter()
            .filter(|g| {
                let tight: Vec<QVec> = normals
                    .iter()
                    .filter(|u| dot(u, g).is_zero())
                    .cloned()
                    .collect();
                k == 1 || rank(&tight) == k - 1
            })
            .collect();
        raw.push((t.clone(), normals, extreme));
    }
    let mut rays: Vec<QVec> = raw.iter().flat_map(|(_, _, e)| e.iter().cloned()).collect();
    rays.sort();
    rays.dedup();
    let id = |r: &QVec| rays.binary_search(r).expect("ray collected");
    let mut cones = Vec::new();
    let mut faces: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    faces.insert(Vec::new(), 0);
    for (tile, normals, extreme) in raw {
        let mut ids: Vec<usize> = extreme.iter().map(id).collect();
        ids.sort_unstable();
        let facet_sets: Vec<Vec<usize>> = normals
            .iter()
            .map(|u| {
                let mut s: Vec<usize> = extreme
                    .iter()
                    .filter(|r| dot(u, r).is_zero())
                    .map(id)
                    .collect();
                s.sort_unstable();
                s
            })
            .collect();
        // face_closure works on local indices; map back to global ids
        let local: Vec<Vec<usize>> = facet_sets
            .iter()
            .map(|s| {
                s.iter()
                    .map(|g| ids.binary_search(g).expect("own ray"))
                    .collect()
            })
            .collect();
        for f in face_closure(ids.len(), &local) {
            let global: Vec<usize> = f.iter().map(|&i| ids[i]).collect();
            let vecs: Vec<QVec> = global.iter().map(|&g| rays[g].clone()).collect();
            faces.insert(global, rank(&vecs));
        }
        cones.push(Cone {
            tile,
            normals,
            rays: ids,
        });
    }
    let mut faces: Vec<FanFace> = faces
        .into_iter()
        .map(|(rays, dim)| FanFace { dim, rays })
        .collect();
    faces.sort();
    Ok(ConeFan {
        face_id: face.id,
        k,
        rays,
        cones,
        faces,
    })
}

/// Number of top cones equals the valence, every `(k−1)`-face lies in
/// exactly two top cones, and top cones have pairwise disjoint interiors.
/// Returns the problems found.
pub fn check_fan(fan: &ConeFan, valence: usize) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    if fan.top_cones() != valence {
        problems.push(format!(
            "{} distinct top cones for valence {}",
            fan.top_cones(),
            valence
        ));
    }
    for ridge in fan.faces.iter().filter(|f| f.dim + 1 == fan.k) {
        let count = fan
            .cones
            .iter()
            .filter(|c| ridge.rays.iter().all(|r| c.rays.binary_search(r).is_ok()))
            .count();
        if count != 2 {
            problems.push(format!(
                "ridge {:?} lies in {} top cones",
                ridge.rays, count
            ));
        }
    }
    for (i, a) in fan.cones.iter().enumerate() {
        for b in &fan.cones[i + 1..] {
            if !interiors_disjoint(fan, a, b)? {
                problems.push(format!(
                    "cones of tiles {:?} and {:?} overlap",
                    a.tile, b.tile
                ));
            }
        }
    }
    Ok(problems)
}

fn interiors_disjoint(fan: &ConeFan, a: &Cone, b: &Cone) -> Result<bool> {
    let ray = |i: &usize| &fan.rays[*i];
    let quick = a
        .normals
        .iter()
        .any(|u| b.rays.iter().all(|r| !dot(u, ray(r)).is_positive()));
    if quick {
        return Ok(true);
    }
    // u ≥ 0 on a, u ≤ 0 on b, normalized against the two interior points
    let mut rows: Vec<(QVec, Scalar)> = Vec::new();
    for r in &a.rays {
        rows.push((neg(ray(r)), Scalar::zero()));
    }
    for r in &b.rays {
        rows.push((ray(r).clone(), Scalar::zero()));
    }
    let mut gap = zeros(fan.k);
    for r in &a.rays {
        gap = add(&gap, ray(r));
    }
    for r in &b.rays {
        gap = sub(&gap, ray(r));
    }
    if is_zero_vec(&gap) {
        // the two interior points coincide
        return Ok(false);
    }
    let one = Scalar::from_integer(1.into());
    rows.push((gap.clone(), one.clone()));
    rows.push((neg(&gap), -one));
    Ok(feasible_point(&HPolyhedron::new(fan.k, rows)?)?.is_some())
}

pub fn fan_poset(fan: &ConeFan) -> LabeledPoset {
    let sets: Vec<Vec<usize>> = fan.faces.iter().map(|f| f.rays.clone()).collect();
    let labels = fan.faces.iter().map(|f| f.dim).collect();
    LabeledPoset::from_sets(&sets, labels)
}

pub fn fan_signature(fan: &ConeFan) -> Signature {
    canonical_form(&fan_poset(fan))
}
