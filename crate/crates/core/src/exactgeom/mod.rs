//! Exact rational geometry: linear algebra, linear programming, double
//! description, face closure, projections and volumes.
//!
//! Everything here works over [`Scalar`], an arbitrary-precision rational.
//! Vectors are plain `Vec<Scalar>` in lattice-basis coordinates; the
//! standard coordinate pairing is used for halfspaces, and a
//! [`QuadraticForm`] supplies the metric wherever one is needed.

pub mod dd;
pub mod faces;
pub mod linalg;
pub mod lp;
pub mod volume;

pub use dd::{cone_extreme_rays, convex_hull, dual_description, Hull};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use lp::{solve_lp, LpOptimum, LpOutcome};

pub type Scalar = num_rational::BigRational;
pub type QVec = Vec<Scalar>;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn qvec(values: &[i64]) -> QVec {
    values.iter().map(|&v| int(v)).collect()
}

pub fn zeros(n: usize) -> QVec {
    vec![Scalar::zero(); n]
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let text = text.trim();
    let bad = || Error::ParseRational(text.to_string());
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(num, den))
        }
        None => {
            let num: BigInt = text.parse().map_err(|_| bad())?;
            Ok(Scalar::from_integer(num))
        }
    }
}

pub fn approx(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Scalar, a: &[Scalar]) -> QVec {
    a.iter().map(|x| c * x).collect()
}

pub fn neg(a: &[Scalar]) -> QVec {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn centroid(points: &[QVec]) -> QVec {
    let n = points[0].len();
    let mut acc = zeros(n);
    for p in points {
        for (a, x) in acc.iter_mut().zip(p) {
            *a += x;
        }
    }
    let inv = Scalar::new(BigInt::one(), BigInt::from(points.len()));
    scale(&inv, &acc)
}

/// Returns the vector as integers when every entry is integral.
pub fn to_integer_vec(v: &[Scalar]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                x.to_integer().to_i64()
            } else {
                None
            }
        })
        .collect()
}

/// Scales a nonzero vector to the unique primitive integer vector on the
/// same open ray.
pub fn primitive_direction(v: &[Scalar]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Same ray as `v`, with integer coprime entries, as rationals.
pub fn normalize_ray(v: &[Scalar]) -> QVec {
    primitive_direction(v)
        .into_iter()
        .map(Scalar::from_integer)
        .collect()
}

pub fn fmt_vec(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn vec_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// A symmetric positive-definite rational bilinear form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    gram: Vec<QVec>,
}

impl QuadraticForm {
    /// Validates symmetry and positive definiteness (all leading principal
    /// minors positive).
    pub fn new(gram: Vec<QVec>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty gram matrix".into()));
        }
        for row in &gram {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        for size in 1..=n {
            let minor: Vec<QVec> = gram[..size].iter().map(|r| r[..size].to_vec()).collect();
            let det = linalg::determinant(&minor);
            if !det.is_positive() {
                return Err(Error::NotPositiveDefinite {
                    index: size,
                    minor: det.to_string(),
                });
            }
        }
        Ok(Self { gram })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| qvec(r)).collect())
    }

    pub fn identity(dim: usize) -> Self {
        let gram = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { int(1) } else { int(0) })
                    .collect()
            })
            .collect();
        Self { gram }
    }

    pub fn diagonal(entries: &[Scalar]) -> Result<Self> {
        let n = entries.len();
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            entries[i].clone()
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(gram)
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[QVec] {
        &self.gram
    }

    /// `G v`: the covector pairing with `v` under this form.
    pub fn apply(&self, v: &[Scalar]) -> QVec {
        self.gram.iter().map(|row| dot(row, v)).collect()
    }

    pub fn inner(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        dot(a, &self.apply(b))
    }

    pub fn norm2(&self, a: &[Scalar]) -> Scalar {
        self.inner(a, a)
    }

    pub fn trace(&self) -> Scalar {
        (0..self.dim()).fold(Scalar::zero(), |acc, i| acc + &self.gram[i][i])
    }

    /// `c · G` for a positive rational `c`.
    pub fn scaled(&self, c: &Scalar) -> Result<Self> {
        Self::new(self.gram.iter().map(|r| scale(c, r)).collect())
    }

    /// Gram matrix of `basis` under this form.
    pub fn gram_of(&self, basis: &[QVec]) -> Vec<QVec> {
        basis
            .iter()
            .map(|a| basis.iter().map(|b| self.inner(a, b)).collect())
            .collect()
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.gram.iter().map(|r| fmt_vec(r)).collect();
        write!(f, "QuadraticForm[{}]", rows.join(", "))
    }
}

/// `base_point + span(direction_basis)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub base_point: QVec,
    pub direction_basis: Vec<QVec>,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        self.direction_basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base_point.len()
    }

    /// Coordinates of `p` with respect to `direction_basis`, or `None` when
    /// `p` is not in the subspace.
    pub fn coordinates(&self, p: &[Scalar]) -> Option<QVec> {
        let diff = sub(p, &self.base_point);
        if self.dim() == 0 {
            return is_zero_vec(&diff).then(Vec::new);
        }
        linalg::solve_in_span(&self.direction_basis, &diff)
    }

    pub fn contains(&self, p: &[Scalar]) -> bool {
        self.coordinates(p).is_some()
    }
}

/// Affine hull of a non-empty point list. The base point is the first
/// point and the direction basis is a greedy independent subset of the
/// differences, in input order.
pub fn affine_hull(points: &[QVec]) -> AffineSubspace {
    assert!(!points.is_empty(), "affine hull of an empty point set");
    let base = points[0].clone();
    let diffs: Vec<QVec> = points[1..].iter().map(|p| sub(p, &base)).collect();
    let picked = linalg::independent_rows(&diffs);
    AffineSubspace {
        base_point: base,
        direction_basis: picked.into_iter().map(|i| diffs[i].clone()).collect(),
    }
}

/// Intersection of halfspaces `⟨normal, x⟩ ≤ offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolyhedron {
    pub dim: usize,
    pub halfspaces: Vec<(QVec, Scalar)>,
}

impl HPolyhedron {
    pub fn new(dim: usize, halfspaces: Vec<(QVec, Scalar)>) -> Result<Self> {
        for (normal, _) in &halfspaces {
            if normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: normal.len(),
                });
            }
            if is_zero_vec(normal) {
                return Err(Error::InvalidInput("zero halfspace normal".into()));
            }
        }
        Ok(Self { dim, halfspaces })
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.halfspaces.iter().all(|(a, b)| dot(a, x) <= *b)
    }

    /// Indices of the halfspaces tight at `x`.
    pub fn tight_at(&self, x: &[Scalar]) -> Vec<usize> {
        self.halfspaces
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| dot(a, x) == *b)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn translated(&self, t: &[Scalar]) -> Self {
        Self {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|(a, b)| (a.clone(), b + dot(a, t)))
                .collect(),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut halfspaces = self.halfspaces.clone();
        halfspaces.extend(other.halfspaces.iter().cloned());
        Self {
            dim: self.dim,
            halfspaces,
        }
    }
}

/// Vertex description of a polytope together with its vertex–facet
/// incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    /// Distinct vertices, in lexicographic order.
    pub vertices: Vec<QVec>,
    /// Facet-defining halfspaces, as indices into the source description.
    pub facets: Vec<usize>,
    /// `facet_vertices[f]` lists the vertices on facet `facets[f]`.
    pub facet_vertices: Vec<Vec<usize>>,
    /// Source halfspaces that do not define a facet.
    pub redundant: Vec<usize>,
}

impl VPolytope {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Facets (as positions into `facets`) incident to vertex `v`.
    pub fn facets_at(&self, v: usize) -> Vec<usize> {
        self.facet_vertices
            .iter()
            .enumerate()
            .filter(|(_, vs)| vs.binary_search(&v).is_ok())
            .map(|(f, _)| f)
            .collect()
    }
}

/// Orthogonal projection along an affine subspace under a quadratic form.
///
/// The complement is spanned by an unnormalized form-orthogonal basis
/// obtained by Gram–Schmidt, so every quantity stays rational.
#[derive(Clone, Debug)]
pub struct Projection {
    base_point: QVec,
    form: QuadraticForm,
    complement: Vec<QVec>,
    complement_norms: QVec,
}

impl Projection {
    pub fn new(sub: &AffineSubspace, form: &QuadraticForm) -> Result<Self> {
        let d = form.dim();
        if sub.ambient_dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: sub.ambient_dim(),
            });
        }
        let mut ortho: Vec<QVec> = Vec::new();
        let mut norms: QVec = Vec::new();
        let mut complement = Vec::new();
        let reduce = |v: &QVec, ortho: &[QVec], norms: &[Scalar]| -> QVec {
            let mut w = v.clone();
            for (u, nu) in ortho.iter().zip(norms) {
                let c = form.inner(&w, u) / nu;
                w = sub_scaled(&w, &c, u);
            }
            w
        };
        for v in &sub.direction_basis {
            let w = reduce(v, &ortho, &norms);
            if is_zero_vec(&w) {
                return Err(Error::InvalidInput(
                    "direction basis is linearly dependent".into(),
                ));
            }
            norms.push(form.norm2(&w));
            ortho.push(w);
        }
        for i in 0..d {
            let mut e = zeros(d);
            e[i] = int(1);
            let w = reduce(&e, &ortho, &norms);
            if is_zero_vec(&w) {
                continue;
            }
            let w = normalize_ray(&w);
            norms.push(form.norm2(&w));
            ortho.push(w.clone());
            complement.push(w);
        }
        let complement_norms = norms[sub.dim()..].to_vec();
        Ok(Self {
            base_point: sub.base_point.clone(),
            form: form.clone(),
            complement,
            complement_norms,
        })
    }

    /// Dimension of the complement.
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn complement_basis(&self) -> &[QVec] {
        &self.complement
    }

    /// The metric on complement coordinates: diagonal with entries
    /// `‖b_j‖²`.
    pub fn coordinate_form(&self) -> Result<QuadraticForm> {
        QuadraticForm::diagonal(&self.complement_norms)
    }

    /// Coordinates of the linear part `v` (no base point subtracted).
    pub fn linear_coords(&self, v: &[Scalar]) -> QVec {
        self.complement
            .iter()
            .zip(&self.complement_norms)
            .map(|(b, nb)| self.form.inner(v, b) / nb)
            .collect()
    }

    /// Coordinates of `π(p)` in the complement basis.
    pub fn coords(&self, p: &[Scalar]) -> QVec {
        self.linear_coords(&sub(p, &self.base_point))
    }

    /// `π(p)` as an ambient vector (relative to the base point).
    pub fn project(&self, p: &[Scalar]) -> QVec {
        let c = self.coords(p);
        let mut out = zeros(self.form.dim());
        for (cj, b) in c.iter().zip(&self.complement) {
            out = add(&out, &scale(cj, b));
        }
        out
    }
}

fn sub_scaled(a: &[Scalar], c: &Scalar, b: &[Scalar]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - c * y).collect()
}

/// Component of `point − base_point` orthogonal to the subspace's
/// directions under `form`, as an ambient vector.
pub fn project_along(sub: &AffineSubspace, form: &QuadraticForm, point: &[Scalar]) -> Result<QVec> {
    Ok(Projection::new(sub, form)?.project(point))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_scalar("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_scalar("-3").unwrap(), int(-3));
        assert_eq!(parse_scalar(" 7 / -14 ").unwrap(), ratio(-1, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn rejects_non_pd_forms() {
        assert!(matches!(
            QuadraticForm::from_ints(&[&[1, 2], &[2, 1]]),
            Err(Error::NotPositiveDefinite { index: 2, .. })
        ));
        assert!(matches!(
            QuadraticForm::from_ints(&[&[1, 0], &[1, 1]]),
            Err(Error::NotSymmetric { .. })
        ));
        assert!(QuadraticForm::from_ints(&[&[2, 1], &[1, 2]]).is_ok());
    }

    #[test]
    fn affine_hull_dims() {
        assert_eq!(affine_hull(&[qvec(&[0, 0])]).dim(), 0);
        let line = affine_hull(&[qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[2, 0])]);
        assert_eq!(line.dim(), 1);
        assert_eq!(line.direction_basis, vec![qvec(&[1, 0])]);
        let mut cube = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    cube.push(qvec(&[x, y, z]));
                }
            }
        }
        assert_eq!(affine_hull(&cube).dim(), 3);
    }

    #[test]
    fn projection_examples() {
        let span_e1 = AffineSubspace {
            base_point: qvec(&[0, 0]),
            direction_basis: vec![qvec(&[1, 0])],
        };
        let id = QuadraticForm::identity(2);
        assert_eq!(
            project_along(&span_e1, &id, &qvec(&[1, 1])).unwrap(),
            qvec(&[0, 1])
        );
        assert_eq!(
            project_along(&span_e1, &id, &qvec(&[5, 0])).unwrap(),
            qvec(&[0, 0])
        );

        let hex = QuadraticForm::from_ints(&[&[2, 1], &[1, 2]]).unwrap();
        // (0,1) − (⟨(0,1),(1,0)⟩/⟨(1,0),(1,0)⟩)(1,0) = (0,1) − (1/2)(1,0)
        assert_eq!(
            project_along(&span_e1, &hex, &qvec(&[0, 1])).unwrap(),
            vec![ratio(-1, 2), int(1)]
        );
    }

    #[test]
    fn projection_is_idempotent() {
        let form = QuadraticForm::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 2]]).unwrap();
        let line = AffineSubspace {
            base_point: qvec(&[0, 0, 0]),
            direction_basis: vec![qvec(&[1, -1, 2])],
        };
        let proj = Projection::new(&line, &form).unwrap();
        assert_eq!(proj.dim(), 2);
        for p in [qvec(&[1, 2, 3]), qvec(&[-4, 0, 1]), qvec(&[1, -1, 2])] {
            let once = proj.project(&p);
            assert_eq!(proj.project(&once), once);
            // residual lies in the subspace direction
            let residual = sub(&p, &once);
            assert!(line.contains(&residual));
        }
        assert!(is_zero_vec(&proj.project(&qvec(&[1, -1, 2]))));
    }

    #[test]
    fn primitive_directions() {
        let v = vec![ratio(2, 3), ratio(-4, 3), int(0)];
        assert_eq!(normalize_ray(&v), qvec(&[1, -2, 0]));
    }
}
