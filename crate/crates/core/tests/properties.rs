use num_traits::{Signed, Zero};
use proptest::prelude::*;

use valence_core::dualfan::{canonical_form, LabeledPoset};
use valence_core::exactgeom::linalg::determinant;
use valence_core::exactgeom::volume::volume;
use valence_core::exactgeom::{
    add, affine_hull, dot, int, qvec, ratio, solve_lp, sub, AffineSubspace, HPolyhedron, LpOutcome,
    Projection, QVec, QuadraticForm, Scalar, VPolytope,
};
use valence_core::lattice::{parity_class, ParityClass};
use valence_core::star::parity_audit;

fn small() -> impl Strategy<Value = i64> {
    -6i64..=6
}

fn rational() -> impl Strategy<Value = Scalar> {
    (small(), 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

/// Diagonally dominant integer Gram matrices are positive definite.
fn pd_form(dim: usize) -> impl Strategy<Value = QuadraticForm> {
    proptest::collection::vec(-2i64..=2, dim * dim).prop_map(move |off| {
        let gram: Vec<QVec> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let (a, b) = (i.min(j), i.max(j));
                        if i == j {
                            int(2 * dim as i64 + 1)
                        } else {
                            int(off[a * dim + b])
                        }
                    })
                    .collect()
            })
            .collect();
        QuadraticForm::new(gram).unwrap()
    })
}

fn polytope(vertices: Vec<QVec>) -> VPolytope {
    VPolytope {
        vertices,
        facets: Vec::new(),
        facet_vertices: Vec::new(),
        redundant: Vec::new(),
    }
}

/// Brute-force optimum of a bounded 2-variable LP: best feasible
/// intersection of two constraint lines.
fn vertex_enumeration_max(rows: &[(QVec, Scalar)], c: &[Scalar]) -> Option<Scalar> {
    let mut best: Option<Scalar> = None;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (a, b) = (&rows[i], &rows[j]);
            let det = &a.0[0] * &b.0[1] - &a.0[1] * &b.0[0];
            if det.is_zero() {
                continue;
            }
            let x = (&a.1 * &b.0[1] - &b.1 * &a.0[1]) / &det;
            let y = (&a.0[0] * &b.1 - &b.0[0] * &a.1) / &det;
            let p = vec![x, y];
            if rows.iter().all(|(n, o)| dot(n, &p) <= *o) {
                let v = dot(c, &p);
                if best.as_ref().map_or(true, |b| v > *b) {
                    best = Some(v);
                }
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_optimum_has_a_valid_dual_certificate(
        extra in proptest::collection::vec((small(), small(), 0i64..=8), 0..6),
        c in (small(), small()),
    ) {
        // box |x|, |y| ≤ 5 keeps every instance bounded and feasible
        let mut rows: Vec<(QVec, Scalar)> = vec![
            (qvec(&[1, 0]), int(5)),
            (qvec(&[-1, 0]), int(5)),
            (qvec(&[0, 1]), int(5)),
            (qvec(&[0, -1]), int(5)),
        ];
        for (a, b, o) in extra {
            if a != 0 || b != 0 {
                rows.push((qvec(&[a, b]), int(o)));
            }
        }
        let c = qvec(&[c.0, c.1]);
        let h = HPolyhedron::new(2, rows.clone()).unwrap();
        let LpOutcome::Optimal(opt) = solve_lp(&h, &c).unwrap() else {
            panic!("origin is feasible and the box bounds the objective");
        };
        prop_assert!(h.contains(&opt.point));
        prop_assert_eq!(&dot(&c, &opt.point), &opt.value);
        prop_assert!(opt.duals.iter().all(|l| !l.is_negative()));
        let mut at = vec![Scalar::zero(), Scalar::zero()];
        let mut bl = Scalar::zero();
        for ((a, b), l) in rows.iter().zip(&opt.duals) {
            at[0] += &a[0] * l;
            at[1] += &a[1] * l;
            bl += b * l;
        }
        prop_assert_eq!(&at, &c);
        prop_assert_eq!(&bl, &opt.value);
        prop_assert_eq!(Some(opt.value.clone()), vertex_enumeration_max(&rows, &c));
    }

    #[test]
    fn simplex_volume_matches_gram_determinant(
        form in pd_form(3),
        pts in proptest::collection::vec(proptest::collection::vec(small(), 3), 4),
        shift in proptest::collection::vec(rational(), 3),
        rot in 0usize..4,
    ) {
        let pts: Vec<QVec> = pts.iter().map(|p| qvec(p)).collect();
        let edges: Vec<QVec> = pts[1..].iter().map(|p| sub(p, &pts[0])).collect();
        let det = determinant(&form.gram_of(&edges));
        prop_assume!(!det.is_zero());
        // vol² of a simplex = det(Gram of edges) / (3!)²
        let expected = det / int(36);
        let whole = AffineSubspace {
            base_point: vec![Scalar::zero(); 3],
            direction_basis: vec![qvec(&[1, 0, 0]), qvec(&[0, 1, 0]), qvec(&[0, 0, 1])],
        };
        let v = volume(&polytope(pts.clone()), &whole, &form).unwrap();
        prop_assert_eq!(&v, &expected);

        let mut permuted = pts.clone();
        permuted.rotate_left(rot);
        let moved: Vec<QVec> = permuted.iter().map(|p| add(p, &shift)).collect();
        prop_assert_eq!(volume(&polytope(moved), &whole, &form).unwrap(), expected);
    }

    #[test]
    fn projection_is_idempotent_and_kills_the_subspace(
        form in pd_form(4),
        base in proptest::collection::vec(rational(), 4),
        dirs in proptest::collection::vec(proptest::collection::vec(small(), 4), 1..3),
        p in proptest::collection::vec(rational(), 4),
    ) {
        let dirs: Vec<QVec> = dirs.iter().map(|d| qvec(d)).collect();
        let mut pts = vec![base.clone()];
        pts.extend(dirs.iter().map(|d| add(&base, d)));
        let sub_space = affine_hull(&pts);
        let proj = Projection::new(&sub_space, &form).unwrap();
        prop_assert_eq!(proj.dim(), 4 - sub_space.dim());
        let once = add(&base, &proj.project(&p));
        prop_assert_eq!(proj.project(&once), proj.project(&p));
        for q in &pts {
            prop_assert!(proj.coords(q).iter().all(Zero::is_zero));
        }
        // p splits into a part along the subspace and a form-orthogonal rest
        let residual = sub(&p, &proj.project(&p));
        prop_assert!(sub_space.contains(&residual));
        for d in &sub_space.direction_basis {
            prop_assert!(form.inner(&proj.project(&p), d).is_zero());
        }
    }

    #[test]
    fn parity_classes_partition_the_lattice(
        vs in proptest::collection::vec(proptest::collection::vec(-20i64..=20, 3), 1..12),
    ) {
        let classes = ParityClass::all(3);
        prop_assert_eq!(classes.len(), 8);
        for v in &vs {
            prop_assert_eq!(classes.iter().filter(|c| c.contains(v)).count(), 1);
            let shifted: Vec<i64> = v.iter().map(|x| x + 2).collect();
            prop_assert_eq!(parity_class(v), parity_class(&shifted));
        }
        let distinct = vs.iter().map(|v| parity_class(v)).collect::<std::collections::HashSet<_>>();
        prop_assert_eq!(parity_audit(&vs).passed(), distinct.len() == vs.len());
    }

    #[test]
    fn canonical_form_ignores_element_order(
        (n, perm) in (2usize..8).prop_flat_map(|n| (Just(n), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())),
        edges in proptest::collection::vec((0usize..8, 0usize..8), 0..12),
        labels in proptest::collection::vec(0usize..3, 8),
    ) {
        // random DAG: x covers y only when y < x
        let mut below = vec![Vec::new(); n];
        for (a, b) in edges {
            let (a, b) = (a % n, b % n);
            if b < a && !below[a].contains(&b) {
                below[a].push(b);
            }
        }
        let p = LabeledPoset { labels: labels[..n].to_vec(), below: below.clone() };
        let mut q_below = vec![Vec::new(); n];
        let mut q_labels = vec![0; n];
        for x in 0..n {
            q_labels[perm[x]] = p.labels[x];
            q_below[perm[x]] = below[x].iter().map(|&y| perm[y]).collect();
        }
        let q = LabeledPoset { labels: q_labels, below: q_below };
        prop_assert_eq!(canonical_form(&p), canonical_form(&q));
    }
}
