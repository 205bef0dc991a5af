//! Stars of faces: the tiles containing a face, found two independent ways,
//! and the translation system between the Λ-equivalent copies of the face.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exactgeom::{qvec, sub, to_integer_vec, QVec};
use crate::lattice::{ivec_string, parity_class, IVec, ParityClass};
use crate::parallelohedron::{Face, Tiling};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceStar {
    /// Id of `F₁ = F`.
    pub face_id: usize,
    /// `t_{i1}`, so that `F ⊆ P₀ + t_{i1}`. Entry 0 is the zero vector.
    pub translations: Vec<IVec>,
    /// Ids of `F_i = F₁ − t_{i1}`, parallel to `translations`.
    pub equivalent_faces: Vec<usize>,
}

impl FaceStar {
    /// `ν(F)`.
    pub fn valence(&self) -> usize {
        self.translations.len()
    }

    pub fn translation_set(&self) -> HashSet<IVec> {
        self.translations.iter().cloned().collect()
    }

    /// F₁ first, then by id of the equivalent face.
    fn normalize(&mut self) {
        let mut pairs: Vec<(usize, IVec)> = self
            .equivalent_faces
            .drain(..)
            .zip(self.translations.drain(..))
            .collect();
        let own = self.face_id;
        pairs.sort_by_key(|(id, _)| (*id != own, *id));
        for (id, t) in pairs {
            self.equivalent_faces.push(id);
            self.translations.push(t);
        }
    }
}

/// All `t` in the search ball with every vertex of `F` in `P₀ + t`.
pub fn direct_star(tiling: &Tiling, face: &Face) -> Result<FaceStar> {
    let mut star = FaceStar {
        face_id: face.id,
        translations: Vec::new(),
        equivalent_faces: Vec::new(),
    };
    for t in &tiling.search_ball {
        if !face.vertices.iter().all(|v| tiling.tile_contains(t, v)) {
            continue;
        }
        let back: IVec = t.iter().map(|x| -x).collect();
        let copy = tiling.translate_face(face, &back).ok_or_else(|| {
            Error::FaceToFace(format!(
                "face {} inside tile {} is not a face of it",
                face.id,
                ivec_string(t)
            ))
        })?;
        star.translations.push(t.clone());
        star.equivalent_faces.push(copy.id);
    }
    star.normalize();
    Ok(star)
}

/// Faces of `P₀` that are integer translates of `F`, read off the face
/// lattice without touching any other tile.
pub fn translate_star(tiling: &Tiling, face: &Face) -> FaceStar {
    let mut star = FaceStar {
        face_id: face.id,
        translations: Vec::new(),
        equivalent_faces: Vec::new(),
    };
    for other in &tiling.faces.faces {
        if other.dim != face.dim || other.vertices.len() != face.vertices.len() {
            continue;
        }
        if let Some(t) = translate_between(other, face) {
            star.translations.push(t);
            star.equivalent_faces.push(other.id);
        }
    }
    star.normalize();
    star
}

/// Integer `t` with `from + t = to`, compared on sorted vertex lists.
fn translate_between(from: &Face, to: &Face) -> Option<IVec> {
    let first = sub(&to.vertices[0], &from.vertices[0]);
    let t = to_integer_vec(&first)?;
    let tq = qvec(&t);
    from.vertices
        .iter()
        .zip(&to.vertices)
        .all(|(a, b)| sub(b, a) == tq)
        .then_some(t)
}

/// `t_ij` with `F_i + t_ij = F_j`, checked against the vertex lists and for
/// antisymmetry and additivity.
pub fn translation_system(tiling: &Tiling, star: &FaceStar) -> Result<Vec<Vec<IVec>>> {
    let m = star.valence();
    let faces: Vec<&Face> = star
        .equivalent_faces
        .iter()
        .map(|&id| tiling.faces.get(id))
        .collect();
    let mut t = vec![vec![Vec::new(); m]; m];
    for i in 0..m {
        for j in 0..m {
            let tij: IVec = star.translations[i]
                .iter()
                .zip(&star.translations[j])
                .map(|(a, b)| a - b)
                .collect();
            let shift: QVec = qvec(&tij);
            let moved: Vec<QVec> = faces[i]
                .vertices
                .iter()
                .map(|v| crate::exactgeom::add(v, &shift))
                .collect();
            if moved != faces[j].vertices {
                return Err(Error::Internal(format!(
                    "face {} shifted by {} is not face {}",
                    faces[i].id,
                    ivec_string(&tij),
                    faces[j].id
                )));
            }
            t[i][j] = tij;
        }
    }
    for i in 0..m {
        for j in 0..m {
            let anti = t[i][j].iter().zip(&t[j][i]).all(|(a, b)| a + b == 0);
            let additive =
                (0..m).all(|l| (0..t[i][l].len()).all(|c| t[i][j][c] + t[j][l][c] == t[i][l][c]));
            if !anti || !additive {
                return Err(Error::Internal(format!(
                    "translation system inconsistent at ({i}, {j})"
                )));
            }
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParityAudit {
    Pass {
        classes: Vec<ParityClass>,
    },
    Violation {
        first: usize,
        second: usize,
        class: ParityClass,
    },
}

impl ParityAudit {
    pub fn passed(&self) -> bool {
        matches!(self, ParityAudit::Pass { .. })
    }
}

/// Tiles sharing a face must have pairwise distinct centers mod 2Λ.
pub fn parity_audit(translations: &[IVec]) -> ParityAudit {
    let classes: Vec<ParityClass> = translations.iter().map(|t| parity_class(t)).collect();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if classes[i] == classes[j] {
                return ParityAudit::Violation {
                    first: i,
                    second: j,
                    class: classes[i].clone(),
                };
            }
        }
    }
    ParityAudit::Pass { classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::{ratio, QuadraticForm};
    use crate::lattice::Lattice;

    fn hex() -> Tiling {
        Tiling::build(Lattice::voronoi(
            QuadraticForm::from_ints(&[&[2, 1], &[1, 2]]).unwrap(),
        ))
        .unwrap()
    }

    fn vertex<'a>(t: &'a Tiling, x: &[crate::exactgeom::Scalar]) -> &'a Face {
        t.face_with_vertices(&[x.to_vec()]).unwrap()
    }

    #[test]
    fn square_vertex_star() {
        let t = Tiling::build(Lattice::cubic(2)).unwrap();
        let f = vertex(&t, &[ratio(1, 2), ratio(1, 2)]);
        let s = direct_star(&t, f).unwrap();
        let expected: HashSet<IVec> = [vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]
            .into_iter()
            .collect();
        assert_eq!(s.translation_set(), expected);
        assert_eq!(translate_star(&t, f).translation_set(), expected);
        let sys = translation_system(&t, &s).unwrap();
        assert!(sys.iter().flatten().flatten().all(|x| (-1..=1).contains(x)));
        assert!(parity_audit(&s.translations).passed());
    }

    #[test]
    fn hexagon_vertex_star() {
        let t = hex();
        let f = vertex(&t, &[ratio(2, 3), ratio(-1, 3)]);
        // oracle: brute-force membership scan over |t_i| <= 3
        let mut brute = HashSet::new();
        for a in -3..=3 {
            for b in -3..=3 {
                if f.vertices.iter().all(|v| t.tile_contains(&[a, b], v)) {
                    brute.insert(vec![a, b]);
                }
            }
        }
        assert_eq!(brute.len(), 3);
        assert_eq!(direct_star(&t, f).unwrap().translation_set(), brute);
        let ts = translate_star(&t, f);
        assert_eq!(ts.translation_set(), brute);
        assert_eq!(ts.translations[0], vec![0, 0]);
        assert_eq!(translation_system(&t, &ts).unwrap().len(), 3);
        match parity_audit(&ts.translations) {
            ParityAudit::Pass { classes } => assert_eq!(classes.len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn facets_have_two_tiles() {
        let t = hex();
        for f in t.faces.faces_of_codim(1) {
            let s = translate_star(&t, f);
            assert_eq!(s.valence(), 2);
            let sys = translation_system(&t, &s).unwrap();
            let v = &s.translations[1];
            assert_eq!(&sys[1][0], v);
            assert!(t.relevant.vectors.contains(v));
        }
    }

    #[test]
    fn cube_edges_have_four_tiles() {
        let t = Tiling::build(Lattice::cubic(3)).unwrap();
        for f in t.faces.faces_of_codim(2) {
            assert_eq!(direct_star(&t, f).unwrap().valence(), 4);
        }
    }

    #[test]
    fn same_class_fixture_is_rejected() {
        let audit = parity_audit(&[vec![0, 0], vec![2, 0]]);
        assert_eq!(
            audit,
            ParityAudit::Violation {
                first: 0,
                second: 1,
                class: parity_class(&[0, 0])
            }
        );
    }
}
