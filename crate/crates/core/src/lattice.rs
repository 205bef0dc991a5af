//! The lattice `Z^d` with its construction and ambient forms, parity
//! classes modulo `2Λ`, ball enumeration, coset minima and relevant
//! vectors.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::{approx, int, qvec, sub, QVec, QuadraticForm, Scalar};

pub type IVec = Vec<i64>;

/// `Z^d` in basis coordinates. `construction` (G_V) defines the Voronoi
/// cell; `ambient` (G_A) defines orthogonality for projections. Equal
/// forms are the Voronoi case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    construction: QuadraticForm,
    ambient: QuadraticForm,
}

/// Which of the two forms to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormChoice {
    Construction,
    Ambient,
}

impl Lattice {
    pub fn new(construction: QuadraticForm, ambient: QuadraticForm) -> Result<Self> {
        if construction.dim() != ambient.dim() {
            return Err(Error::DimensionMismatch {
                expected: construction.dim(),
                found: ambient.dim(),
            });
        }
        Ok(Self {
            construction,
            ambient,
        })
    }

    /// The Voronoi case `G_A = G_V`.
    pub fn voronoi(form: QuadraticForm) -> Self {
        Self {
            ambient: form.clone(),
            construction: form,
        }
    }

    pub fn cubic(dim: usize) -> Self {
        Self::voronoi(QuadraticForm::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.construction.dim()
    }

    pub fn construction_form(&self) -> &QuadraticForm {
        &self.construction
    }

    pub fn ambient_form(&self) -> &QuadraticForm {
        &self.ambient
    }

    pub fn form(&self, choice: FormChoice) -> &QuadraticForm {
        match choice {
            FormChoice::Construction => &self.construction,
            FormChoice::Ambient => &self.ambient,
        }
    }

    pub fn is_voronoi_case(&self) -> bool {
        self.construction == self.ambient
    }

    /// Same tiling, different ambient form.
    pub fn with_ambient(&self, ambient: QuadraticForm) -> Result<Self> {
        Self::new(self.construction.clone(), ambient)
    }
}

/// A coset of `2Λ`: the coordinates of a lattice vector reduced mod 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParityClass {
    bits: Vec<u8>,
}

impl ParityClass {
    pub fn from_bits(bits: Vec<u8>) -> Self {
        Self {
            bits: bits.into_iter().map(|b| b & 1).collect(),
        }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    /// All `2^dim` classes in binary counting order, zero first.
    pub fn all(dim: usize) -> Vec<ParityClass> {
        (0..1u32 << dim)
            .map(|mask| Self {
                bits: (0..dim).map(|i| ((mask >> i) & 1) as u8).collect(),
            })
            .collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        parity_class(v) == *self
    }
}

impl fmt::Display for ParityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

pub fn parity_class(v: &[i64]) -> ParityClass {
    ParityClass {
        bits: v.iter().map(|x| x.rem_euclid(2) as u8).collect(),
    }
}

/// `Q(y) = Σ_i D_i (y_i + Σ_{j>i} U_ij y_j)²`, the completed-square form
/// used to bound coordinates one at a time.
struct CompletedSquares {
    diag: QVec,
    upper: Vec<QVec>,
}

impl CompletedSquares {
    fn new(form: &QuadraticForm) -> Self {
        let n = form.dim();
        let mut g: Vec<QVec> = form.gram().to_vec();
        let mut diag = Vec::with_capacity(n);
        let mut upper = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            let d = g[i][i].clone();
            for j in i + 1..n {
                upper[i][j] = &g[i][j] / &d;
            }
            for k in i + 1..n {
                for l in i + 1..n {
                    let delta = &d * &upper[i][k] * &upper[i][l];
                    g[k][l] -= delta;
                }
            }
            diag.push(d);
        }
        Self { diag, upper }
    }
}

/// Integer vectors `v` with `‖v − center‖² ≤ r2` under `form`, in
/// lexicographic order.
pub fn enumerate_ball(form: &QuadraticForm, center: &[Scalar], r2: &Scalar) -> Vec<IVec> {
    let n = form.dim();
    assert_eq!(center.len(), n, "center dimension");
    if r2.is_negative() {
        return Vec::new();
    }
    let cs = CompletedSquares::new(form);
    let mut out = Vec::new();
    let mut y: QVec = vec![Scalar::zero(); n];
    let mut v: IVec = vec![0; n];
    descend(&cs, center, n, r2.clone(), &mut y, &mut v, &mut out);
    out.sort();
    out
}

fn descend(
    cs: &CompletedSquares,
    center: &[Scalar],
    level: usize,
    budget: Scalar,
    y: &mut QVec,
    v: &mut IVec,
    out: &mut Vec<IVec>,
) {
    if level == 0 {
        out.push(v.clone());
        return;
    }
    let i = level - 1;
    let n = center.len();
    let mut shift = Scalar::zero();
    for j in i + 1..n {
        shift += &cs.upper[i][j] * &y[j];
    }
    // D_i (v_i − c_i + shift)² ≤ budget
    let mid = &center[i] - &shift;
    let radius = (approx(&budget) / approx(&cs.diag[i])).max(0.0).sqrt();
    let lo = (approx(&mid) - radius).floor() as i64 - 2;
    let hi = (approx(&mid) + radius).ceil() as i64 + 2;
    for vi in lo..=hi {
        let t = int(vi) - &mid;
        let used = &cs.diag[i] * &t * &t;
        if used > budget {
            continue;
        }
        y[i] = int(vi) - &center[i];
        v[i] = vi;
        descend(cs, center, i, &budget - used, y, v, out);
    }
}

/// Minimal norm within a nonzero parity class, with every minimizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetMinimum {
    pub class: ParityClass,
    pub min_norm2: Scalar,
    pub argmins: Vec<IVec>,
}

impl CosetMinimum {
    /// Exactly one `±` pair attains the minimum.
    pub fn is_strict(&self) -> bool {
        self.argmins.len() == 2
    }
}

/// Shortest vectors of a nonzero class mod `2Λ` under `G_V`, by doubling
/// the search radius from `trace(G_V)` until the class is hit, then
/// re-scanning at the found minimum.
pub fn coset_shortest(l: &Lattice, class: &ParityClass) -> Result<CosetMinimum> {
    if class.bits().len() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            found: class.bits().len(),
        });
    }
    if class.is_zero() {
        return Err(Error::ZeroParityClass);
    }
    let form = l.construction_form();
    let origin = vec![Scalar::zero(); l.dim()];
    let mut r2 = form.trace();
    let members = loop {
        let hits: Vec<IVec> = enumerate_ball(form, &origin, &r2)
            .into_iter()
            .filter(|v| class.contains(v))
            .collect();
        if !hits.is_empty() {
            break hits;
        }
        r2 *= int(2);
    };
    let norm = |v: &IVec| form.norm2(&qvec(v));
    let min_norm2 = members.iter().map(norm).min().expect("non-empty");
    let argmins: Vec<IVec> = enumerate_ball(form, &origin, &min_norm2)
        .into_iter()
        .filter(|v| class.contains(v) && norm(v) == min_norm2)
        .collect();
    let expected: Vec<&IVec> = members.iter().filter(|v| norm(v) == min_norm2).collect();
    if argmins.len() != expected.len() {
        return Err(Error::Internal("coset minimum re-scan disagrees".into()));
    }
    Ok(CosetMinimum {
        class: class.clone(),
        min_norm2,
        argmins,
    })
}

/// Relevant vectors: the strict `±` minima of the nontrivial classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelevantVectorSet {
    /// Sorted lexicographically; closed under negation.
    pub vectors: Vec<IVec>,
    /// `‖v‖²` under `G_V`, parallel to `vectors`.
    pub norms2: Vec<Scalar>,
}

impl RelevantVectorSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

pub fn relevant_vectors(l: &Lattice) -> Result<RelevantVectorSet> {
    let mut vectors = Vec::new();
    for class in ParityClass::all(l.dim()).into_iter().skip(1) {
        let min = coset_shortest(l, &class)?;
        if min.is_strict() {
            vectors.extend(min.argmins);
        }
    }
    vectors.sort();
    let norms2 = vectors
        .iter()
        .map(|v| l.construction_form().norm2(&qvec(v)))
        .collect();
    Ok(RelevantVectorSet { vectors, norms2 })
}

/// Squared circumradius of the Voronoi cell under `G_V`: the maximum
/// squared norm over its vertices.
pub fn covering_radius_bound(l: &Lattice, cell_vertices: &[QVec]) -> Scalar {
    cell_vertices
        .iter()
        .map(|v| l.construction_form().norm2(v))
        .max()
        .unwrap_or_else(Scalar::zero)
}

/// Lattice vectors within distance `2R` of the origin, where `R²` is
/// `circumradius2`: a superset of the centers of tiles meeting `P₀`.
pub fn star_search_ball(l: &Lattice, circumradius2: &Scalar) -> Vec<IVec> {
    let origin = vec![Scalar::zero(); l.dim()];
    enumerate_ball(l.construction_form(), &origin, &(circumradius2 * int(4)))
}

pub fn to_qvec(v: &[i64]) -> QVec {
    qvec(v)
}

/// `‖v − c‖²` for an integer `v`.
pub fn dist2(form: &QuadraticForm, v: &[i64], c: &[Scalar]) -> Scalar {
    form.norm2(&sub(&qvec(v), c))
}

pub fn ivec_string(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Integer entries of a rational vector that is known to be integral.
pub fn integral(v: &[Scalar]) -> Option<IVec> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer().to_i64()).flatten())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::ratio;

    fn hex() -> Lattice {
        Lattice::voronoi(QuadraticForm::from_ints(&[&[2, 1], &[1, 2]]).unwrap())
    }

    fn fcc() -> Lattice {
        Lattice::voronoi(QuadraticForm::from_ints(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]).unwrap())
    }

    /// Box scan oracle for ball enumeration.
    fn box_scan(form: &QuadraticForm, c: &[Scalar], r2: &Scalar, bound: i64) -> Vec<IVec> {
        let n = form.dim();
        let mut out = Vec::new();
        let mut v = vec![-bound; n];
        loop {
            if dist2(form, &v, c) <= *r2 {
                out.push(v.clone());
            }
            let mut i = n;
            loop {
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
                if v[i] < bound {
                    v[i] += 1;
                    for x in v[i + 1..].iter_mut() {
                        *x = -bound;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity_class(&[0, 0, 0]).bits(), &[0, 0, 0]);
        assert_eq!(parity_class(&[2, -3]).bits(), &[0, 1]);
        assert_eq!(parity_class(&[1, 1, 0]), parity_class(&[3, -1, 2]));
        assert_eq!(ParityClass::all(3).len(), 8);
    }

    #[test]
    fn ball_examples() {
        let z2 = QuadraticForm::identity(2);
        let origin = vec![int(0), int(0)];
        assert_eq!(
            enumerate_ball(&z2, &origin, &int(1)),
            vec![vec![-1, 0], vec![0, -1], vec![0, 0], vec![0, 1], vec![1, 0]]
        );
        let h = hex();
        let got = enumerate_ball(h.construction_form(), &origin, &int(2));
        assert_eq!(
            got,
            vec![
                vec![-1, 0],
                vec![-1, 1],
                vec![0, -1],
                vec![0, 0],
                vec![0, 1],
                vec![1, -1],
                vec![1, 0]
            ]
        );
        assert_eq!(got, box_scan(h.construction_form(), &origin, &int(2), 2));
        assert!(enumerate_ball(&z2, &origin, &int(-1)).is_empty());
    }

    #[test]
    fn ball_with_offset_center_matches_box_scan() {
        let f = fcc();
        let c = vec![ratio(1, 3), ratio(-1, 2), ratio(2, 5)];
        for r2 in [int(1), ratio(5, 2), int(6)] {
            assert_eq!(
                enumerate_ball(f.construction_form(), &c, &r2),
                box_scan(f.construction_form(), &c, &r2, 4)
            );
        }
    }

    #[test]
    fn coset_examples() {
        let z2 = Lattice::cubic(2);
        let m = coset_shortest(&z2, &ParityClass::from_bits(vec![1, 0])).unwrap();
        assert_eq!(m.min_norm2, int(1));
        assert_eq!(m.argmins, vec![vec![-1, 0], vec![1, 0]]);
        let m = coset_shortest(&z2, &ParityClass::from_bits(vec![1, 1])).unwrap();
        assert_eq!(m.min_norm2, int(2));
        assert_eq!(m.argmins.len(), 4);
        let m = coset_shortest(&hex(), &ParityClass::from_bits(vec![1, 1])).unwrap();
        assert_eq!(m.min_norm2, int(2));
        assert_eq!(m.argmins, vec![vec![-1, 1], vec![1, -1]]);
        assert!(matches!(
            coset_shortest(&z2, &ParityClass::from_bits(vec![0, 0])),
            Err(Error::ZeroParityClass)
        ));
    }

    #[test]
    fn relevant_vector_counts() {
        for d in 1..=4 {
            let r = relevant_vectors(&Lattice::cubic(d)).unwrap();
            assert_eq!(r.len(), 2 * d);
        }
        let r = relevant_vectors(&hex()).unwrap();
        assert_eq!(
            r.vectors,
            vec![
                vec![-1, 0],
                vec![-1, 1],
                vec![0, -1],
                vec![0, 1],
                vec![1, -1],
                vec![1, 0]
            ]
        );
        assert_eq!(relevant_vectors(&fcc()).unwrap().len(), 12);
    }
}
