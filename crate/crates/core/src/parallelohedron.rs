//! The prototile `P₀` (the Voronoi cell under `G_V`), its face lattice, and
//! the basic properties of the tiling `{P₀ + t : t ∈ Z^d}`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactgeom::faces::faces_with_dims;
use crate::exactgeom::{
    add, affine_hull, centroid, dual_description, fmt_vec, int, neg, qvec, ratio, scale, sub,
    AffineSubspace, HPolyhedron, QVec, Scalar, VPolytope,
};
use crate::lattice::{
    covering_radius_bound, ivec_string, relevant_vectors, star_search_ball, IVec, Lattice,
    RelevantVectorSet,
};

/// `P₀ + translation`; its center of symmetry is `translation`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile {
    pub translation: IVec,
}

impl Tile {
    pub fn new(translation: IVec) -> Self {
        Self { translation }
    }

    pub fn center(&self) -> QVec {
        qvec(&self.translation)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    /// `-1` for the empty face.
    pub dim: i32,
    /// Sorted ids into the cell's vertex list.
    pub vertex_ids: Vec<usize>,
    pub vertices: Vec<QVec>,
    /// Basis of `lin F`.
    pub lin_basis: Vec<QVec>,
    /// Positions (into the cell's facet list) of the facets containing
    /// this face.
    pub facets: Vec<usize>,
}

impl Face {
    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }

    /// `k = d − dim F`.
    pub fn codim(&self, d: usize) -> usize {
        (d as i32 - self.dim) as usize
    }

    /// Vertex barycenter; lies in the relative interior.
    pub fn barycenter(&self) -> QVec {
        centroid(&self.vertices)
    }

    pub fn affine(&self) -> AffineSubspace {
        AffineSubspace {
            base_point: self.vertices[0].clone(),
            direction_basis: self.lin_basis.clone(),
        }
    }
}

/// All faces of `P₀`, the empty face first, then by dimension and
/// lexicographic vertex order. `P₀` itself is the last entry.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    pub dim: usize,
    pub faces: Vec<Face>,
    index: HashMap<Vec<usize>, usize>,
}

impl FaceLattice {
    pub fn get(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn lookup(&self, vertex_ids: &[usize]) -> Option<&Face> {
        self.index.get(vertex_ids).map(|&i| &self.faces[i])
    }

    /// `(f_0, …, f_d)`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim + 1];
        for face in self.faces.iter().filter(|f| !f.is_empty()) {
            f[face.dim as usize] += 1;
        }
        f
    }

    pub fn proper_faces(&self) -> impl Iterator<Item = &Face> {
        let d = self.dim as i32;
        self.faces.iter().filter(move |f| f.dim >= 0 && f.dim < d)
    }

    pub fn faces_of_codim(&self, k: usize) -> impl Iterator<Item = &Face> {
        let d = self.dim;
        self.faces
            .iter()
            .filter(move |f| !f.is_empty() && f.codim(d) == k)
    }

    /// `Σ_{j<d} (−1)^j f_j = 1 − (−1)^d`, the Euler relation of the
    /// boundary sphere.
    pub fn satisfies_euler(&self) -> bool {
        let f = self.f_vector();
        let lhs: i64 = (0..self.dim)
            .map(|j| {
                if j % 2 == 0 {
                    f[j] as i64
                } else {
                    -(f[j] as i64)
                }
            })
            .sum();
        let rhs = if self.dim % 2 == 0 { 0 } else { 2 };
        lhs == rhs
    }

    /// Every pairwise intersection of faces is again a face (or empty).
    pub fn is_closed_under_intersection(&self) -> bool {
        self.faces.iter().all(|a| {
            self.faces.iter().all(|b| {
                let meet: Vec<usize> = a
                    .vertex_ids
                    .iter()
                    .copied()
                    .filter(|v| b.vertex_ids.binary_search(v).is_ok())
                    .collect();
                self.index.contains_key(&meet)
            })
        })
    }
}

#[derive(Clone, Debug)]
pub struct VoronoiCell {
    pub halfspaces: HPolyhedron,
    pub polytope: VPolytope,
    /// Relevant vector of each facet, parallel to `polytope.facets`.
    pub facet_vectors: Vec<IVec>,
}

impl VoronoiCell {
    pub fn dim(&self) -> usize {
        self.halfspaces.dim
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.polytope.vertices
    }
}

/// `{x : ⟨x, v⟩_{G_V} ≤ ‖v‖²_{G_V} / 2}` over the relevant vectors `v`.
pub fn voronoi_cell(l: &Lattice, relevant: &RelevantVectorSet) -> Result<VoronoiCell> {
    let form = l.construction_form();
    let halfspaces = relevant
        .vectors
        .iter()
        .zip(&relevant.norms2)
        .map(|(v, n2)| (form.apply(&qvec(v)), n2 * ratio(1, 2)))
        .collect();
    let halfspaces = HPolyhedron::new(l.dim(), halfspaces)?;
    let polytope = dual_description(&halfspaces)?;
    if !polytope.redundant.is_empty() {
        return Err(Error::Internal(format!(
            "relevant vectors {:?} do not define facets",
            polytope.redundant
        )));
    }
    let facet_vectors = polytope
        .facets
        .iter()
        .map(|&i| relevant.vectors[i].clone())
        .collect();
    Ok(VoronoiCell {
        halfspaces,
        polytope,
        facet_vectors,
    })
}

/// Closure of the facet incidence sets, with exact vertex lists and
/// dimensions.
pub fn face_lattice(cell: &VoronoiCell) -> FaceLattice {
    let d = cell.dim();
    let verts = cell.vertices();
    let facet_sets = &cell.polytope.facet_vertices;
    let mut faces = vec![Face {
        id: 0,
        dim: -1,
        vertex_ids: Vec::new(),
        vertices: Vec::new(),
        lin_basis: Vec::new(),
        facets: (0..facet_sets.len()).collect(),
    }];
    for (dim, ids) in faces_with_dims(verts, facet_sets) {
        let vertices: Vec<QVec> = ids.iter().map(|&i| verts[i].clone()).collect();
        let lin_basis = affine_hull(&vertices).direction_basis;
        let facets = facet_sets
            .iter()
            .enumerate()
            .filter(|(_, fs)| ids.iter().all(|v| fs.binary_search(v).is_ok()))
            .map(|(i, _)| i)
            .collect();
        faces.push(Face {
            id: faces.len(),
            dim: dim as i32,
            vertex_ids: ids,
            vertices,
            lin_basis,
            facets,
        });
    }
    let index = faces.iter().map(|f| (f.vertex_ids.clone(), f.id)).collect();
    FaceLattice {
        dim: d,
        faces,
        index,
    }
}

/// Verifies `P₀ = −P₀` on vertices and that every facet has a parallel
/// opposite facet. Returns the center (the origin).
pub fn central_symmetry_check(cell: &VoronoiCell) -> Result<QVec> {
    let verts = cell.vertices();
    let mut negated: Vec<QVec> = verts.iter().map(|v| neg(v)).collect();
    negated.sort();
    if negated != verts {
        return Err(Error::Internal(
            "cell vertex set is not centrally symmetric".into(),
        ));
    }
    let facet_hs: Vec<&(QVec, Scalar)> = cell
        .polytope
        .facets
        .iter()
        .map(|&i| &cell.halfspaces.halfspaces[i])
        .collect();
    for (a, b) in &facet_hs {
        let opposite = neg(a);
        if !facet_hs.iter().any(|(a2, b2)| *a2 == opposite && b2 == b) {
            return Err(Error::Internal(format!(
                "facet {} has no opposite facet",
                fmt_vec(a)
            )));
        }
    }
    Ok(vec![Scalar::zero(); cell.dim()])
}

/// `P₀ + t₁ ∩ P₀ + t₂`, identified as a face of `P₀` placed at `t₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardFace {
    /// Face of `P₀` that, translated by `t₁`, is the intersection.
    pub face_id: usize,
    pub vertices: Vec<QVec>,
    /// `(t₁ + t₂) / 2`.
    pub center: QVec,
}

/// Everything about one tiling that downstream modules share.
#[derive(Clone, Debug)]
pub struct Tiling {
    pub lattice: Lattice,
    pub relevant: RelevantVectorSet,
    pub cell: VoronoiCell,
    pub faces: FaceLattice,
    /// Squared circumradius of `P₀` under `G_V`.
    pub circumradius2: Scalar,
    /// Centers within `2R` of the origin (includes every tile meeting `P₀`).
    pub search_ball: Vec<IVec>,
    vertex_index: HashMap<QVec, usize>,
}

impl Tiling {
    pub fn build(lattice: Lattice) -> Result<Self> {
        let relevant = relevant_vectors(&lattice)?;
        let cell = voronoi_cell(&lattice, &relevant)?;
        central_symmetry_check(&cell)?;
        let faces = face_lattice(&cell);
        let circumradius2 = covering_radius_bound(&lattice, cell.vertices());
        let search_ball = star_search_ball(&lattice, &circumradius2);
        let vertex_index = cell
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        Ok(Self {
            lattice,
            relevant,
            cell,
            faces,
            circumradius2,
            search_ball,
            vertex_index,
        })
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn vertex_id(&self, x: &[Scalar]) -> Option<usize> {
        self.vertex_index.get(x).copied()
    }

    /// `x ∈ P₀ + t`.
    pub fn tile_contains(&self, t: &[i64], x: &[Scalar]) -> bool {
        self.cell.halfspaces.contains(&sub(x, &qvec(t)))
    }

    /// The face of `P₀` with exactly these vertices, if any.
    pub fn face_with_vertices(&self, points: &[QVec]) -> Option<&Face> {
        let mut ids: Vec<usize> = points
            .iter()
            .map(|p| self.vertex_id(p))
            .collect::<Option<_>>()?;
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != points.len() {
            return None;
        }
        self.faces.lookup(&ids)
    }

    /// `F + t`, when it is again a face of `P₀`.
    pub fn translate_face(&self, face: &Face, t: &[i64]) -> Option<&Face> {
        let shift = qvec(t);
        let moved: Vec<QVec> = face.vertices.iter().map(|v| add(v, &shift)).collect();
        self.face_with_vertices(&moved)
    }

    /// Exact `P₀ ∩ (P₀ + t)`, checked to be a face of both tiles.
    pub fn intersection_with(&self, t: &[i64]) -> Result<Option<&Face>> {
        let shifted = self.cell.halfspaces.translated(&qvec(t));
        let meet = dual_description(&self.cell.halfspaces.intersect(&shifted))?;
        if meet.is_empty() {
            return Ok(None);
        }
        let here = self.face_with_vertices(&meet.vertices).ok_or_else(|| {
            Error::FaceToFace(format!(
                "P0 ∩ (P0 + {}) is not a face of P0",
                ivec_string(t)
            ))
        })?;
        let back: Vec<QVec> = meet.vertices.iter().map(|v| sub(v, &qvec(t))).collect();
        if self.face_with_vertices(&back).is_none() {
            return Err(Error::FaceToFace(format!(
                "P0 ∩ (P0 + {}) is not a face of the translate",
                ivec_string(t)
            )));
        }
        Ok(Some(here))
    }

    /// Face-to-face property over the whole search ball. Returns the number
    /// of tiles other than `P₀` meeting `P₀`.
    pub fn check_face_to_face(&self) -> Result<usize> {
        let mut neighbors = 0;
        for t in &self.search_ball {
            if t.iter().all(|&x| x == 0) {
                continue;
            }
            if self.intersection_with(t)?.is_some() {
                neighbors += 1;
            }
        }
        Ok(neighbors)
    }

    /// Checks that `(P₀ + t₁) ∩ (P₀ + t₂)` is centrally symmetric about
    /// `(t₁ + t₂)/2` and contains that point. `None` when the tiles are
    /// disjoint.
    pub fn standard_face_center(&self, t1: &Tile, t2: &Tile) -> Result<Option<StandardFace>> {
        let rel: IVec = t2
            .translation
            .iter()
            .zip(&t1.translation)
            .map(|(a, b)| a - b)
            .collect();
        let Some(face) = self.intersection_with(&rel)? else {
            return Ok(None);
        };
        let center = scale(&ratio(1, 2), &add(&t1.center(), &t2.center()));
        let vertices: Vec<QVec> = face.vertices.iter().map(|v| add(v, &t1.center())).collect();
        let doubled = scale(&int(2), &center);
        let mut mirrored: Vec<QVec> = vertices.iter().map(|v| sub(&doubled, v)).collect();
        mirrored.sort();
        let mut sorted = vertices.clone();
        sorted.sort();
        if mirrored != sorted {
            return Err(Error::Internal(format!(
                "intersection of tiles {} and {} is not symmetric about its midpoint",
                ivec_string(&t1.translation),
                ivec_string(&t2.translation)
            )));
        }
        let local_center = sub(&center, &t1.center());
        if !self.cell.halfspaces.contains(&local_center) || !self.tile_contains(&rel, &local_center)
        {
            return Err(Error::Internal(
                "midpoint of centers outside the shared face".into(),
            ));
        }
        Ok(Some(StandardFace {
            face_id: face.id,
            vertices,
            center,
        }))
    }
}
