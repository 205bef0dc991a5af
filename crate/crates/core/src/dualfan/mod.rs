//! The Delaunay dual cell `D(F)` and the cone fan of a face, plus the
//! census of fan types.

mod census;
mod fan;
pub mod signature;

pub use census::{census, face_fan_type, merge, Census, CensusEntry};
pub use fan::{check_fan, fan_of_face, fan_poset, fan_signature, Cone, ConeFan, FanFace};
pub use signature::{canonical_form, LabeledPoset, Signature};

use crate::error::Result;
use crate::exactgeom::faces::faces_with_dims;
use crate::exactgeom::linalg::{integer_basis, integer_coordinates};
use crate::exactgeom::{convex_hull, qvec, Hull, QVec};
use crate::lattice::{ivec_string, parity_class, IVec};
use crate::parallelohedron::Face;
use crate::star::FaceStar;

#[derive(Clone, Debug)]
pub struct DualCell {
    pub face_id: usize,
    /// Tile centers of the star, in star order.
    pub centers: Vec<IVec>,
    pub hull: Hull,
    /// `dim aff D(F)`.
    pub dual_dim: usize,
    /// Basis of `Λ(F)`, the lattice generated by center differences.
    pub sublattice: Vec<IVec>,
}

/// `D(F) = conv` of the centers of the tiles containing `F`.
pub fn delaunay_cell(face: &Face, star: &FaceStar) -> Result<DualCell> {
    let centers = star.translations.clone();
    let points: Vec<QVec> = centers.iter().map(|c| qvec(c)).collect();
    let hull = convex_hull(&points)?;
    let diffs: Vec<IVec> = centers
        .iter()
        .map(|c| c.iter().zip(&centers[0]).map(|(a, b)| a - b).collect())
        .collect();
    let sublattice = integer_basis(&diffs);
    Ok(DualCell {
        face_id: face.id,
        dual_dim: hull.dim(),
        centers,
        hull,
        sublattice,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualDimCheck {
    /// Voronoi case and `dim aff D(F) = k`.
    Equal,
    /// Voronoi case with `dim aff D(F) ≠ k`: a verification failure.
    Mismatch { dual_dim: usize, k: usize },
    /// General case, recorded only.
    Recorded { dual_dim: usize, k: usize },
}

impl DualDimCheck {
    pub fn failed(&self) -> bool {
        matches!(self, DualDimCheck::Mismatch { .. })
    }

    /// A dual cell of dimension above `k` outside the Voronoi case.
    pub fn noteworthy(&self) -> bool {
        matches!(self, DualDimCheck::Recorded { dual_dim, k } if dual_dim > k)
    }
}

pub fn dual_dim_check(dc: &DualCell, k: usize, voronoi_mode: bool) -> DualDimCheck {
    match (voronoi_mode, dc.dual_dim == k) {
        (true, true) => DualDimCheck::Equal,
        (true, false) => DualDimCheck::Mismatch {
            dual_dim: dc.dual_dim,
            k,
        },
        (false, _) => DualDimCheck::Recorded {
            dual_dim: dc.dual_dim,
            k,
        },
    }
}

/// Every center is a vertex of `D(F)`, centers are pairwise distinct modulo
/// `2Λ` and modulo `2Λ(F)`, and so there are at most `2^rank Λ(F)` of them.
/// Returns a description of the first failure.
pub fn dual_vertex_check(dc: &DualCell) -> std::result::Result<(), String> {
    let m = dc.centers.len();
    if dc.hull.polytope.vertices.len() != m {
        return Err(format!(
            "{} centers but D(F) has {} vertices",
            m,
            dc.hull.polytope.vertices.len()
        ));
    }
    for i in 0..m {
        for j in i + 1..m {
            if parity_class(&dc.centers[i]) == parity_class(&dc.centers[j]) {
                return Err(format!(
                    "centers {} and {} agree mod 2Λ",
                    ivec_string(&dc.centers[i]),
                    ivec_string(&dc.centers[j])
                ));
            }
        }
    }
    let local: Vec<IVec> = dc
        .centers
        .iter()
        .map(|c| {
            let diff: IVec = c.iter().zip(&dc.centers[0]).map(|(a, b)| a - b).collect();
            integer_coordinates(&dc.sublattice, &diff)
                .ok_or_else(|| format!("{} outside Λ(F)", ivec_string(&diff)))
        })
        .collect::<std::result::Result<_, _>>()?;
    for i in 0..m {
        for j in i + 1..m {
            if parity_class(&local[i]) == parity_class(&local[j]) {
                return Err(format!(
                    "centers {} and {} agree mod 2Λ(F)",
                    ivec_string(&dc.centers[i]),
                    ivec_string(&dc.centers[j])
                ));
            }
        }
    }
    let rank = dc.sublattice.len();
    if m > 1usize << rank {
        return Err(format!("{m} centers exceed 2^{rank}"));
    }
    Ok(())
}

/// Face poset of `D(F)` under reverse inclusion, labeled `k − dim`. In the
/// Voronoi case it is isomorphic to the face poset of the fan.
pub fn dual_poset(dc: &DualCell, k: usize) -> LabeledPoset {
    let faces = faces_with_dims(&dc.hull.polytope.vertices, &dc.hull.polytope.facet_vertices);
    let sets: Vec<Vec<usize>> = faces.iter().map(|(_, s)| s.clone()).collect();
    let labels = faces.iter().map(|(d, _)| k.saturating_sub(*d)).collect();
    LabeledPoset::from_sets_reversed(&sets, labels)
}
