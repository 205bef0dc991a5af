use std::collections::BTreeMap;

use crate::error::Result;
use crate::parallelohedron::{Face, Tiling};
use crate::star::translate_star;

use super::fan::{fan_of_face, fan_signature};
use super::signature::Signature;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CensusEntry {
    /// Number of faces with this fan type.
    pub count: usize,
    /// `(tiling name, face id)` of each occurrence.
    pub witnesses: Vec<(String, usize)>,
    /// Number of top cones of the type.
    pub cones: usize,
}

pub type Census = BTreeMap<Signature, CensusEntry>;

/// Fan type and top-cone count of one face, projecting under the ambient
/// form.
pub fn face_fan_type(tiling: &Tiling, face: &Face) -> Result<(Signature, usize)> {
    let star = translate_star(tiling, face);
    let fan = fan_of_face(tiling, face, &star, tiling.lattice.ambient_form())?;
    Ok((fan_signature(&fan), fan.top_cones()))
}

/// Fan types of all codimension-`k` faces over the given tilings.
pub fn census(tilings: &[(String, Tiling)], k: usize) -> Result<Census> {
    let mut out = Census::new();
    for (name, tiling) in tilings {
        if tiling.dim() < k {
            continue;
        }
        for face in tiling.faces.faces_of_codim(k) {
            let (sig, cones) = face_fan_type(tiling, face)?;
            let entry = out.entry(sig).or_default();
            entry.count += 1;
            entry.cones = cones;
            entry.witnesses.push((name.clone(), face.id));
        }
    }
    Ok(out)
}

/// Merges two censuses; the operation is commutative up to witness order.
pub fn merge(mut a: Census, b: Census) -> Census {
    for (sig, e) in b {
        let slot = a.entry(sig).or_default();
        slot.count += e.count;
        slot.cones = e.cones;
        slot.witnesses.extend(e.witnesses);
    }
    a
}
