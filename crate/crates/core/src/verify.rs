//! The per-face verification pipeline and its report.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::antipodal::{
    antipodal_bound, cross_check, homothety_packing_check, is_antipodal, projected_face_set,
    volume_ratio,
};
use crate::dualfan::{
    canonical_form, check_fan, delaunay_cell, dual_dim_check, dual_poset, dual_vertex_check,
    fan_of_face, fan_signature,
};
use crate::error::{Error, Result};
use crate::exactgeom::{approx, ratio, Scalar};
use crate::lattice::ivec_string;
use crate::parallelohedron::{Face, Tiling};
use crate::star::{direct_star, parity_audit, translate_star, translation_system, ParityAudit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Projections under the construction form.
    Voronoi,
    /// Projections under a separate ambient form.
    Skew,
}

/// Deliberate corruption of an intermediate result, for exercising the
/// failure paths of the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Drops the last tile from every direct star.
    DropTranslation,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub k_min: usize,
    pub k_max: usize,
    pub mode: Mode,
    pub fault: Option<Fault>,
}

/// Homothety ratios checked for every face.
pub fn homothety_grid() -> Vec<Scalar> {
    vec![ratio(1, 10), ratio(1, 4), ratio(2, 5), ratio(49, 100)]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exact {
    pub exact: String,
    pub approx: f64,
}

impl From<&Scalar> for Exact {
    fn from(x: &Scalar) -> Self {
        Self {
            exact: x.to_string(),
            approx: approx(x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// Two computations that must agree did not, or a consistency check
    /// failed.
    CrossCheck,
    /// A valence above the bound.
    Bound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub face_id: usize,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceRecord {
    pub face_id: usize,
    pub face_dim: usize,
    pub k: usize,
    pub valence_direct: usize,
    pub valence_translate: usize,
    pub stars_agree: bool,
    pub parity_audit: String,
    pub dual_dim: usize,
    pub dual_dim_check: String,
    /// Only in Voronoi mode.
    pub dual_vertex_check: Option<String>,
    /// Only in Voronoi mode.
    pub fan_dual_to_cell: Option<bool>,
    pub fan_cones: usize,
    pub fan_signature: String,
    pub antipodal: bool,
    pub certificate_digest: String,
    pub certificates_agree: bool,
    pub k_prime: usize,
    pub bound_k_prime: bool,
    pub bound_k: bool,
    pub volume2: Exact,
    pub volume_chain: bool,
    pub homothety: BTreeMap<String, bool>,
    #[serde(skip)]
    pub violations: Vec<Violation>,
    #[serde(skip)]
    pub noteworthy: Vec<String>,
    /// Full canonical fan signature, for census aggregation.
    #[serde(skip)]
    pub signature_full: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub signature: String,
    pub cones: usize,
    pub count: usize,
    pub first_face: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub faces_checked: usize,
    /// Largest valence per `k`.
    pub max_valence: BTreeMap<usize, usize>,
    pub census: BTreeMap<usize, Vec<CensusRow>>,
    pub violations: Vec<Violation>,
    pub noteworthy: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub dim: usize,
    pub mode: Mode,
    pub gram_construction: Vec<Vec<String>>,
    pub gram_ambient: Vec<Vec<String>>,
    pub f_vector: Vec<usize>,
    pub faces: Vec<FaceRecord>,
    pub summary: Summary,
}

/// Exit status of a verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    CrossCheckFailure,
    BoundViolation,
}

impl VerificationReport {
    pub fn status(&self) -> Status {
        let kinds: Vec<ViolationKind> = self.summary.violations.iter().map(|v| v.kind).collect();
        if kinds.contains(&ViolationKind::Bound) {
            Status::BoundViolation
        } else if kinds.is_empty() {
            Status::Ok
        } else {
            Status::CrossCheckFailure
        }
    }
}

fn matrix_strings(g: &[Vec<Scalar>]) -> Vec<Vec<String>> {
    g.iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect()
}

/// Faces of `P₀` whose codimension lies in the requested range, in face-id
/// order.
pub fn selected_faces<'a>(tiling: &'a Tiling, opts: &VerifyOptions) -> Vec<&'a Face> {
    let d = tiling.dim();
    tiling
        .faces
        .proper_faces()
        .filter(|f| (opts.k_min..=opts.k_max).contains(&f.codim(d)))
        .collect()
}

/// Runs every check on one face. Computation errors are recorded as
/// cross-check violations; nothing here aborts the sweep.
pub fn verify_face(tiling: &Tiling, face: &Face, opts: &VerifyOptions) -> FaceRecord {
    let d = tiling.dim();
    let k = face.codim(d);
    let mut rec = FaceRecord {
        face_id: face.id,
        face_dim: face.dim as usize,
        k,
        valence_direct: 0,
        valence_translate: 0,
        stars_agree: false,
        parity_audit: String::new(),
        dual_dim: 0,
        dual_dim_check: String::new(),
        dual_vertex_check: None,
        fan_dual_to_cell: None,
        fan_cones: 0,
        fan_signature: String::new(),
        antipodal: false,
        certificate_digest: String::new(),
        certificates_agree: false,
        k_prime: 0,
        bound_k_prime: false,
        bound_k: false,
        volume2: Exact::from(&Scalar::from_integer(0.into())),
        volume_chain: false,
        homothety: BTreeMap::new(),
        violations: Vec::new(),
        noteworthy: Vec::new(),
        signature_full: String::new(),
    };
    if let Err(e) = run_checks(tiling, face, opts, &mut rec) {
        rec.violations.push(Violation {
            face_id: face.id,
            kind: ViolationKind::CrossCheck,
            detail: format!("computation failed: {e}"),
        });
    }
    rec
}

fn run_checks(
    tiling: &Tiling,
    face: &Face,
    opts: &VerifyOptions,
    rec: &mut FaceRecord,
) -> Result<()> {
    let k = rec.k;
    let fid = face.id;
    let fail = |rec: &mut FaceRecord, kind, detail: String| {
        rec.violations.push(Violation {
            face_id: fid,
            kind,
            detail,
        })
    };
    let form = match opts.mode {
        Mode::Voronoi => tiling.lattice.construction_form(),
        Mode::Skew => tiling.lattice.ambient_form(),
    };

    let mut direct = direct_star(tiling, face)?;
    if opts.fault == Some(Fault::DropTranslation) && direct.translations.len() > 1 {
        direct.translations.pop();
        direct.equivalent_faces.pop();
    }
    let star = translate_star(tiling, face);
    rec.valence_direct = direct.valence();
    rec.valence_translate = star.valence();
    rec.stars_agree = direct.translation_set() == star.translation_set();
    if !rec.stars_agree {
        fail(
            rec,
            ViolationKind::CrossCheck,
            format!(
                "direct star has {} tiles, translate star has {}",
                direct.valence(),
                star.valence()
            ),
        );
    }
    let cap = 1usize << k;
    if direct.valence() > cap || star.valence() > cap {
        fail(
            rec,
            ViolationKind::Bound,
            format!(
                "valence {} exceeds 2^{k}",
                direct.valence().max(star.valence())
            ),
        );
    }
    if star.valence() < 2 {
        fail(
            rec,
            ViolationKind::CrossCheck,
            "fewer than two tiles".into(),
        );
    }
    translation_system(tiling, &star)?;
    match parity_audit(&star.translations) {
        ParityAudit::Pass { .. } => rec.parity_audit = "pass".into(),
        ParityAudit::Violation {
            first,
            second,
            class,
        } => {
            rec.parity_audit = format!("violation ({first}, {second})");
            fail(
                rec,
                ViolationKind::CrossCheck,
                format!(
                    "tiles {} and {} share parity class {class}",
                    ivec_string(&star.translations[first]),
                    ivec_string(&star.translations[second])
                ),
            );
        }
    }

    let dc = delaunay_cell(face, &star)?;
    rec.dual_dim = dc.dual_dim;
    let voronoi = opts.mode == Mode::Voronoi || tiling.lattice.is_voronoi_case();
    let ddc = dual_dim_check(&dc, k, voronoi);
    rec.dual_dim_check = format!("{ddc:?}");
    if ddc.failed() {
        fail(
            rec,
            ViolationKind::CrossCheck,
            format!("dim aff D(F) = {} for k = {k}", dc.dual_dim),
        );
    }
    if ddc.noteworthy() {
        rec.noteworthy.push(format!(
            "NOTEWORTHY: face {fid} has dim aff D(F) = {} > k = {k}",
            dc.dual_dim
        ));
    }

    let fan = fan_of_face(tiling, face, &star, form)?;
    rec.fan_cones = fan.top_cones();
    for p in check_fan(&fan, star.valence())? {
        fail(rec, ViolationKind::CrossCheck, format!("fan: {p}"));
    }
    let sig = fan_signature(&fan);
    rec.fan_signature = sig.digest();
    if voronoi {
        match dual_vertex_check(&dc) {
            Ok(()) => rec.dual_vertex_check = Some("pass".into()),
            Err(msg) => {
                rec.dual_vertex_check = Some(msg.clone());
                fail(rec, ViolationKind::CrossCheck, msg);
            }
        }
        let dual = canonical_form(&dual_poset(&dc, k)) == sig;
        rec.fan_dual_to_cell = Some(dual);
        if !dual {
            fail(
                rec,
                ViolationKind::CrossCheck,
                "fan is not dual to D(F)".into(),
            );
        }
    }
    rec.signature_full = sig.0;

    let w = projected_face_set(tiling, face, &star, form)?;
    let cert = is_antipodal(&w)?;
    rec.antipodal = cert.is_complete();
    rec.certificate_digest = cert.digest();
    if !cert.is_complete() {
        fail(
            rec,
            ViolationKind::CrossCheck,
            format!(
                "no antipodality certificate for pairs {:?}",
                cert.violations
            ),
        );
    }
    let agreement = cross_check(tiling, &w, &cert)?;
    rec.certificates_agree = agreement.agree;
    for p in agreement.problems {
        fail(rec, ViolationKind::CrossCheck, p);
    }
    for a in homothety_grid() {
        let ok = homothety_packing_check(&w, &cert, &a)?.passed();
        rec.homothety.insert(a.to_string(), ok);
        if !ok {
            fail(
                rec,
                ViolationKind::CrossCheck,
                format!("homothety packing fails at a = {a}"),
            );
        }
    }
    let bound = antipodal_bound(&w, &cert)?;
    rec.k_prime = bound.k_prime;
    rec.bound_k_prime = bound.within_affine_dim;
    rec.bound_k = bound.within_codim;
    rec.volume2 = Exact::from(&bound.volume2);
    rec.volume_chain = bound.volume_chain;
    if !bound.within_affine_dim || !bound.within_codim {
        fail(
            rec,
            ViolationKind::Bound,
            format!("m = {} against k' = {}, k = {k}", bound.m, bound.k_prime),
        );
    }
    if !bound.volume_chain {
        fail(
            rec,
            ViolationKind::CrossCheck,
            format!("volume comparison fails at a = {}", volume_ratio()),
        );
    }
    Ok(())
}

/// Aggregates per-face records into a report. Records may arrive in any
/// order; output ordering is by face id.
pub fn assemble_report(
    name: &str,
    tiling: &Tiling,
    mode: Mode,
    mut faces: Vec<FaceRecord>,
) -> VerificationReport {
    faces.sort_by_key(|r| r.face_id);
    let mut max_valence: BTreeMap<usize, usize> = BTreeMap::new();
    let mut census: BTreeMap<usize, BTreeMap<String, CensusRow>> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut noteworthy = Vec::new();
    for r in &faces {
        let v = max_valence.entry(r.k).or_default();
        *v = (*v).max(r.valence_direct.max(r.valence_translate));
        if !r.signature_full.is_empty() {
            let row = census
                .entry(r.k)
                .or_default()
                .entry(r.signature_full.clone())
                .or_insert_with(|| CensusRow {
                    signature: r.fan_signature.clone(),
                    cones: r.fan_cones,
                    count: 0,
                    first_face: r.face_id,
                });
            row.count += 1;
        }
        violations.extend(r.violations.iter().cloned());
        noteworthy.extend(r.noteworthy.iter().cloned());
    }
    let census = census
        .into_iter()
        .map(|(k, rows)| {
            let mut rows: Vec<CensusRow> = rows.into_values().collect();
            rows.sort_by_key(|r| r.first_face);
            (k, rows)
        })
        .collect();
    let form_for_mode = match mode {
        Mode::Voronoi => tiling.lattice.construction_form(),
        Mode::Skew => tiling.lattice.ambient_form(),
    };
    VerificationReport {
        name: name.to_string(),
        dim: tiling.dim(),
        mode,
        gram_construction: matrix_strings(tiling.lattice.construction_form().gram()),
        gram_ambient: matrix_strings(form_for_mode.gram()),
        f_vector: tiling.faces.f_vector(),
        summary: Summary {
            faces_checked: faces.len(),
            max_valence,
            census,
            violations,
            noteworthy,
        },
        faces,
    }
}

/// Sequential sweep over the selected faces.
pub fn verify_tiling(name: &str, tiling: &Tiling, opts: &VerifyOptions) -> VerificationReport {
    let records = selected_faces(tiling, opts)
        .into_iter()
        .map(|f| verify_face(tiling, f, opts))
        .collect();
    assemble_report(name, tiling, opts.mode, records)
}

/// Builds the tiling a mode calls for from a spec.
pub fn tiling_for(spec: &crate::specfile::TilingSpec, mode: Mode) -> Result<Tiling> {
    let lattice = match mode {
        Mode::Voronoi => spec.voronoi_lattice()?,
        Mode::Skew => spec.skew_lattice()?,
    };
    if lattice.dim() != spec.dim {
        return Err(Error::DimensionMismatch {
            expected: spec.dim,
            found: lattice.dim(),
        });
    }
    Tiling::build(lattice)
}
