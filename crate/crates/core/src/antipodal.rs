//! The projected face set `W`, its antipodality certificates, homothety
//! packing, and the bound `m ≤ 2^k′`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactgeom::lp::feasible_point;
use crate::exactgeom::volume::volume;
use crate::exactgeom::{
    add, affine_hull, dot, fmt_vec, int, neg, qvec, ratio, scale, sub, HPolyhedron, Projection,
    QVec, QuadraticForm, Scalar, VPolytope,
};
use crate::lattice::IVec;
use crate::parallelohedron::{Face, Tiling};
use crate::star::FaceStar;

#[derive(Clone, Debug)]
pub struct AntipodalSet {
    pub face_id: usize,
    /// `w_i = π(F_i)` in complement coordinates, in star order.
    pub points: Vec<QVec>,
    /// `k = codim F`.
    pub k: usize,
    /// `dim aff W`.
    pub k_prime: usize,
    /// Translations `t_{i1}` of the star, kept for the constructive path.
    pub translations: Vec<IVec>,
    pub projection: Projection,
    /// Metric on complement coordinates.
    pub metric: QuadraticForm,
    base_point: QVec,
}

impl AntipodalSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// A bare point set with no tiling behind it.
    pub fn from_points(points: Vec<QVec>) -> Result<Self> {
        let k = points.first().map_or(0, Vec::len);
        let metric = QuadraticForm::identity(k);
        let whole = crate::exactgeom::AffineSubspace {
            base_point: vec![Scalar::zero(); k],
            direction_basis: Vec::new(),
        };
        let projection = Projection::new(&whole, &metric)?;
        Ok(Self {
            face_id: 0,
            k_prime: affine_hull(&points).dim(),
            k,
            points,
            translations: Vec::new(),
            projection,
            metric,
            base_point: vec![Scalar::zero(); k],
        })
    }
}

/// `w_i = π(x₀ − t_{i1})` with `x₀` the barycenter of `F`, projecting along
/// `lin F` under `form`.
pub fn projected_face_set(
    tiling: &Tiling,
    face: &Face,
    star: &FaceStar,
    form: &QuadraticForm,
) -> Result<AntipodalSet> {
    let affine = face.affine();
    let projection = Projection::new(&affine, form)?;
    let x0 = face.barycenter();
    let points: Vec<QVec> = star
        .translations
        .iter()
        .map(|t| projection.coords(&sub(&x0, &qvec(t))))
        .collect();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(Error::Internal(format!(
                    "faces {} and {} project to the same point",
                    star.equivalent_faces[i], star.equivalent_faces[j]
                )));
            }
        }
    }
    Ok(AntipodalSet {
        face_id: face.id,
        k_prime: affine_hull(&points).dim(),
        k: face.codim(tiling.dim()),
        points,
        translations: star.translations.clone(),
        metric: projection.coordinate_form()?,
        projection,
        base_point: affine.base_point,
    })
}

/// Parallel walls `⟨u, x⟩ = upper` through `w_i` and `⟨u, x⟩ = lower`
/// through `w_j`, with all of `W` between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCertificate {
    pub direction: QVec,
    pub upper: Scalar,
    pub lower: Scalar,
}

impl PairCertificate {
    /// `β`, the hyperplane midway between the walls.
    pub fn mid_offset(&self) -> Scalar {
        (&self.upper + &self.lower) * ratio(1, 2)
    }

    /// Checks the defining inequalities against `W` for the pair `(i, j)`.
    pub fn is_valid_for(&self, w: &AntipodalSet, i: usize, j: usize) -> bool {
        dot(&self.direction, &w.points[i]) == self.upper
            && dot(&self.direction, &w.points[j]) == self.lower
            && self.upper > self.lower
            && w.points.iter().all(|p| {
                let v = dot(&self.direction, p);
                v <= self.upper && v >= self.lower
            })
    }
}

/// Certificates per ordered pair `(i, j)`; pairs without one are listed as
/// violations.
#[derive(Clone, Debug, Default)]
pub struct AntipodalCertificate {
    pub pairs: BTreeMap<(usize, usize), PairCertificate>,
    pub violations: Vec<(usize, usize)>,
}

impl AntipodalCertificate {
    pub fn is_complete(&self) -> bool {
        self.violations.is_empty()
    }

    /// Short hex digest over all certificate data, for reports.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for ((i, j), c) in &self.pairs {
            hasher.update(format!(
                "{i},{j}:{}:{}:{};",
                fmt_vec(&c.direction),
                c.upper,
                c.lower
            ));
        }
        for (i, j) in &self.violations {
            hasher.update(format!("!{i},{j};"));
        }
        hasher
            .finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Exact LP per ordered pair: `⟨u, w_j⟩ ≤ ⟨u, w⟩ ≤ ⟨u, w_i⟩` for all `w`
/// and `⟨u, w_i − w_j⟩ = 1`.
pub fn is_antipodal(w: &AntipodalSet) -> Result<AntipodalCertificate> {
    let n = w.k;
    let mut cert = AntipodalCertificate::default();
    for i in 0..w.len() {
        for j in 0..w.len() {
            if i == j {
                continue;
            }
            let (wi, wj) = (&w.points[i], &w.points[j]);
            let mut rows: Vec<(QVec, Scalar)> = Vec::new();
            for p in &w.points {
                rows.push((sub(p, wi), Scalar::zero()));
                rows.push((sub(wj, p), Scalar::zero()));
            }
            let gap = sub(wi, wj);
            rows.push((gap.clone(), Scalar::one()));
            rows.push((neg(&gap), -Scalar::one()));
            rows.retain(|(a, _)| a.iter().any(|x| !x.is_zero()));
            match feasible_point(&HPolyhedron::new(n, rows)?)? {
                Some(u) => {
                    let pc = PairCertificate {
                        upper: dot(&u, wi),
                        lower: dot(&u, wj),
                        direction: u,
                    };
                    if !pc.is_valid_for(w, i, j) {
                        return Err(Error::Internal(format!(
                            "LP certificate for ({i}, {j}) is invalid"
                        )));
                    }
                    cert.pairs.insert((i, j), pc);
                }
                None => cert.violations.push((i, j)),
            }
        }
    }
    Ok(cert)
}

/// The hyperplane `Γ_ij` separating `P₀` from `P₀ + t_ji` along their
/// shared face, projected to the complement. The walls are
/// `⟨n, x⟩ = ±1/2` where `⟨n, v⟩ ≤ 1/2` on `P₀` and `⟨n, t_ji⟩ = 1`.
pub fn constructive_certificate(
    tiling: &Tiling,
    w: &AntipodalSet,
    i: usize,
    j: usize,
) -> Result<PairCertificate> {
    let d = tiling.dim();
    let t: QVec = qvec(
        &w.translations[j]
            .iter()
            .zip(&w.translations[i])
            .map(|(a, b)| a - b)
            .collect::<IVec>(),
    );
    let half = ratio(1, 2);
    let mut rows: Vec<(QVec, Scalar)> = tiling
        .cell
        .vertices()
        .iter()
        .map(|v| (v.clone(), half.clone()))
        .collect();
    rows.push((t.clone(), Scalar::one()));
    rows.push((neg(&t), -Scalar::one()));
    let n = feasible_point(&HPolyhedron::new(d, rows)?)?.ok_or_else(|| {
        Error::Internal(format!(
            "no hyperplane separates P0 from P0 + {}",
            fmt_vec(&t)
        ))
    })?;
    // F_i lies on the wall and lin F is parallel to it
    let x0_i = sub(
        &tiling.faces.get(w.face_id).barycenter(),
        &qvec(&w.translations[i]),
    );
    if dot(&n, &x0_i) != half {
        return Err(Error::Internal(format!(
            "separating hyperplane of pair ({i}, {j}) misses F_i"
        )));
    }
    let direction: QVec = w
        .projection
        .complement_basis()
        .iter()
        .map(|b| dot(&n, b))
        .collect();
    let shift = dot(&n, &w.base_point);
    let cert = PairCertificate {
        direction,
        upper: &half - &shift,
        lower: -&half - &shift,
    };
    // π(c(P₀)) = π(0) strictly between the walls
    let origin = w.projection.coords(&vec![Scalar::zero(); d]);
    let c = dot(&cert.direction, &origin);
    if !(c < cert.upper && c > cert.lower) {
        return Err(Error::Internal(
            "projected center not strictly between walls".into(),
        ));
    }
    Ok(cert)
}

/// Outcome of comparing the LP and constructive certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub agree: bool,
    pub problems: Vec<String>,
}

/// Both paths must certify the same ordered pairs, and each constructive
/// certificate must satisfy the LP constraints.
pub fn cross_check(
    tiling: &Tiling,
    w: &AntipodalSet,
    lp: &AntipodalCertificate,
) -> Result<CrossCheck> {
    let mut problems = Vec::new();
    for i in 0..w.len() {
        for j in 0..w.len() {
            if i == j {
                continue;
            }
            let constructive = constructive_certificate(tiling, w, i, j);
            let lp_has = lp.pairs.contains_key(&(i, j));
            match constructive {
                Ok(c) => {
                    if !c.is_valid_for(w, i, j) {
                        problems.push(format!(
                            "constructive certificate ({i}, {j}) fails the LP constraints"
                        ));
                    }
                    if !lp_has {
                        problems.push(format!("pair ({i}, {j}) certified only constructively"));
                    }
                }
                Err(Error::Internal(msg)) => {
                    problems.push(msg);
                    if lp_has {
                        problems.push(format!("pair ({i}, {j}) certified only by LP"));
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(CrossCheck {
        agree: problems.is_empty(),
        problems,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Packing {
    Pass,
    /// The homothets at `w_i` and `w_j` are not strictly separated by `β_ij`,
    /// or the pair has no certificate.
    Fail {
        pair: (usize, usize),
        reason: String,
    },
}

impl Packing {
    pub fn passed(&self) -> bool {
        matches!(self, Packing::Pass)
    }
}

fn homothet(w: &AntipodalSet, center: usize, a: &Scalar) -> Vec<QVec> {
    let c = &w.points[center];
    w.points
        .iter()
        .map(|p| add(c, &scale(a, &sub(p, c))))
        .collect()
}

/// `H^a_{w_i}(conv W)` and `H^a_{w_j}(conv W)` lie in opposite open
/// halfspaces of `β_ij`, for every ordered pair.
pub fn homothety_packing_check(
    w: &AntipodalSet,
    cert: &AntipodalCertificate,
    a: &Scalar,
) -> Result<Packing> {
    if !a.is_positive() || *a >= ratio(1, 2) {
        return Err(Error::RatioOutOfRange(a.to_string()));
    }
    for i in 0..w.len() {
        for j in 0..w.len() {
            if i == j {
                continue;
            }
            let Some(c) = cert.pairs.get(&(i, j)) else {
                return Ok(Packing::Fail {
                    pair: (i, j),
                    reason: "no antipodality certificate".into(),
                });
            };
            let beta = c.mid_offset();
            if homothet(w, i, a)
                .iter()
                .any(|p| dot(&c.direction, p) <= beta)
            {
                return Ok(Packing::Fail {
                    pair: (i, j),
                    reason: format!("homothet at w_{i} reaches beta"),
                });
            }
            if homothet(w, j, a)
                .iter()
                .any(|p| dot(&c.direction, p) >= beta)
            {
                return Ok(Packing::Fail {
                    pair: (i, j),
                    reason: format!("homothet at w_{j} reaches beta"),
                });
            }
        }
    }
    Ok(Packing::Pass)
}

/// Ratio used for the volume comparison; any value below 1/2 works.
pub fn volume_ratio() -> Scalar {
    ratio(499, 1000)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub m: usize,
    pub k: usize,
    pub k_prime: usize,
    /// `m ≤ 2^k′`.
    pub within_affine_dim: bool,
    /// `m ≤ 2^k`.
    pub within_codim: bool,
    /// `vol²(conv W)` within `aff W` under the complement metric.
    pub volume2: Scalar,
    /// Packing at [`volume_ratio`] and `m² a^{2k′} vol² ≤ vol²`, with the
    /// homothet volume computed directly.
    pub volume_chain: bool,
}

impl BoundCheck {
    pub fn passed(&self) -> bool {
        self.within_affine_dim && self.within_codim && self.volume_chain
    }
}

pub fn antipodal_bound(w: &AntipodalSet, cert: &AntipodalCertificate) -> Result<BoundCheck> {
    let m = w.len();
    let within_affine_dim = m <= 1usize << w.k_prime;
    let within_codim = w.k_prime <= w.k && m <= 1usize << w.k;
    let hull_space = affine_hull(&w.points);
    let poly = |pts: Vec<QVec>| VPolytope {
        vertices: pts,
        facets: Vec::new(),
        facet_vertices: Vec::new(),
        redundant: Vec::new(),
    };
    let volume2 = volume(&poly(w.points.clone()), &hull_space, &w.metric)?;
    if volume2.is_zero() {
        return Err(Error::Internal(format!(
            "conv W has zero volume in its {}-dimensional affine hull",
            w.k_prime
        )));
    }
    let a = volume_ratio();
    let packing = homothety_packing_check(w, cert, &a)?;
    let scaled = homothet(w, 0, &a);
    let scaled_space = affine_hull(&scaled);
    let scaled2 = volume(&poly(scaled), &scaled_space, &w.metric)?;
    let a2k = pow(&a, 2 * w.k_prime);
    let total = int((m * m) as i64) * &scaled2;
    let volume_chain = packing.passed() && scaled2 == &a2k * &volume2 && total <= volume2;
    Ok(BoundCheck {
        m,
        k: w.k,
        k_prime: w.k_prime,
        within_affine_dim,
        within_codim,
        volume2,
        volume_chain,
    })
}

fn pow(x: &Scalar, e: usize) -> Scalar {
    (0..e).fold(Scalar::one(), |acc, _| acc * x)
}
