use std::path::PathBuf;

use num_traits::One;

use valence_core::antipodal::{antipodal_bound, is_antipodal, projected_face_set};
use valence_core::dualfan::{delaunay_cell, fan_of_face, fan_signature};
use valence_core::exactgeom::{qvec, ratio, sub, QVec, Scalar};
use valence_core::lattice::IVec;
use valence_core::parallelohedron::Tiling;
use valence_core::specfile::{load_dir, TilingSpec};
use valence_core::star::{direct_star, translate_star, translation_system};
use valence_core::verify::{tiling_for, Mode};

fn corpus(sub_dir: &str) -> Vec<TilingSpec> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(sub_dir);
    load_dir(&dir).unwrap()
}

fn tilings(dirs: &[&str], mode: Mode) -> Vec<(String, Tiling)> {
    dirs.iter()
        .flat_map(|d| corpus(d))
        .map(|s| (s.name.clone(), tiling_for(&s, mode).unwrap()))
        .collect()
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

#[test]
fn direct_and_translate_stars_agree_on_corpus() {
    for (name, t) in tilings(&["2d", "3d", "4d"], Mode::Voronoi) {
        for f in t.faces.proper_faces() {
            let direct = direct_star(&t, f).unwrap();
            let via_faces = translate_star(&t, f);
            assert_eq!(direct, via_faces, "{name} face {}", f.id);
            assert!(
                direct.valence() <= 1 << f.codim(t.dim()),
                "{name} face {}",
                f.id
            );
        }
    }
}

#[test]
fn stars_shrink_as_faces_grow() {
    for (name, t) in tilings(&["2d", "3d"], Mode::Voronoi) {
        let stars: Vec<_> = t
            .faces
            .proper_faces()
            .map(|f| (f, translate_star(&t, f).translation_set()))
            .collect();
        for (f, sf) in &stars {
            for (g, sg) in &stars {
                if f.id != g.id && is_subset(&f.vertex_ids, &g.vertex_ids) {
                    assert!(sg.is_subset(sf), "{name}: star({}) ⊄ star({})", g.id, f.id);
                }
            }
        }
    }
}

#[test]
fn translation_systems_are_consistent() {
    for (name, t) in tilings(&["2d", "3d"], Mode::Voronoi) {
        for f in t.faces.proper_faces() {
            let star = translate_star(&t, f);
            let sys = translation_system(&t, &star).unwrap();
            let m = star.valence();
            for i in 0..m {
                let fi = t.faces.get(star.equivalent_faces[i]);
                for j in 0..m {
                    let fj = t.faces.get(star.equivalent_faces[j]);
                    let expected: IVec = star.translations[i]
                        .iter()
                        .zip(&star.translations[j])
                        .map(|(a, b)| a - b)
                        .collect();
                    assert_eq!(sys[i][j], expected, "{name} face {}", f.id);
                    let back: IVec = sys[j][i].iter().map(|x| -x).collect();
                    assert_eq!(sys[i][j], back);
                    // F_j − t_ij recovers F_i as a set
                    let mut moved: Vec<QVec> = fj
                        .vertices
                        .iter()
                        .map(|v| sub(v, &qvec(&sys[i][j])))
                        .collect();
                    moved.sort();
                    assert_eq!(moved, fi.vertices, "{name} face {} pair ({i}, {j})", f.id);
                }
            }
        }
    }
}

#[test]
fn choice_of_projected_point_does_not_matter() {
    for (name, t) in tilings(&["2d", "3d"], Mode::Skew) {
        let form = t.lattice.ambient_form().clone();
        for f in t.faces.proper_faces() {
            let star = translate_star(&t, f);
            let w = projected_face_set(&t, f, &star, &form).unwrap();
            for (i, tr) in star.translations.iter().enumerate() {
                for v in &f.vertices {
                    let p = w.projection.coords(&sub(v, &qvec(tr)));
                    assert_eq!(p, w.points[i], "{name} face {} tile {i}", f.id);
                }
            }
        }
    }
}

#[test]
fn voronoi_dual_cells_have_dimension_k() {
    for (name, t) in tilings(&["2d", "3d"], Mode::Voronoi) {
        for f in t.faces.proper_faces() {
            let dc = delaunay_cell(f, &translate_star(&t, f)).unwrap();
            assert_eq!(dc.dual_dim, f.codim(t.dim()), "{name} face {}", f.id);
        }
    }
}

#[test]
fn scaling_the_ambient_form_changes_nothing_combinatorial() {
    let c = ratio(7, 3);
    for spec in corpus("3d").into_iter().chain(corpus("2d")) {
        let base = tiling_for(&spec, Mode::Skew).unwrap();
        let scaled_form = base.lattice.ambient_form().scaled(&c).unwrap();
        let scaled =
            Tiling::build(base.lattice.with_ambient(scaled_form.clone()).unwrap()).unwrap();
        for f in base.faces.proper_faces() {
            let star = translate_star(&base, f);
            let w1 = projected_face_set(&base, f, &star, base.lattice.ambient_form()).unwrap();
            let w2 = projected_face_set(&scaled, f, &star, &scaled_form).unwrap();
            // orthogonality is unchanged, so the points coincide
            assert_eq!(w1.points, w2.points, "{} face {}", spec.name, f.id);
            assert_eq!(w1.k_prime, w2.k_prime);
            let c1 = is_antipodal(&w1).unwrap();
            let c2 = is_antipodal(&w2).unwrap();
            assert_eq!(
                c1.pairs.keys().collect::<Vec<_>>(),
                c2.pairs.keys().collect::<Vec<_>>()
            );
            let b1 = antipodal_bound(&w1, &c1).unwrap();
            let b2 = antipodal_bound(&w2, &c2).unwrap();
            assert_eq!(b1.passed(), b2.passed());
            let factor = (0..w1.k_prime).fold(Scalar::one(), |acc, _| acc * &c);
            assert_eq!(
                b2.volume2,
                b1.volume2 * factor,
                "{} face {}",
                spec.name,
                f.id
            );
        }
    }
}

#[test]
fn fan_type_does_not_depend_on_the_form() {
    for (name, t) in tilings(&["2d", "3d"], Mode::Skew) {
        for f in t.faces.proper_faces() {
            let star = translate_star(&t, f);
            let a = fan_of_face(&t, f, &star, t.lattice.ambient_form()).unwrap();
            let v = fan_of_face(&t, f, &star, t.lattice.construction_form()).unwrap();
            assert_eq!(fan_signature(&a), fan_signature(&v), "{name} face {}", f.id);
        }
    }
}

#[test]
fn pyramid_witness_has_a_square_pyramid_vertex() {
    let spec = corpus("3d")
        .into_iter()
        .find(|s| s.name == "pyramid-witness")
        .unwrap();
    let t = tiling_for(&spec, Mode::Voronoi).unwrap();
    assert_eq!(t.faces.f_vector(), vec![18, 28, 12, 1]);
    let pyramids = t
        .faces
        .faces_of_codim(3)
        .filter(|v| {
            let star = translate_star(&t, v);
            let dc = delaunay_cell(v, &star).unwrap();
            let facet_sizes: Vec<usize> = dc
                .hull
                .polytope
                .facet_vertices
                .iter()
                .map(Vec::len)
                .collect();
            star.valence() == 5
                && dc.hull.polytope.vertices.len() == 5
                && facet_sizes.len() == 5
                && facet_sizes.iter().filter(|&&s| s == 4).count() == 1
        })
        .count();
    assert!(pyramids > 0);
}
