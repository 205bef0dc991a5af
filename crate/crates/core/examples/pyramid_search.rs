//! Randomized search for a 3-dimensional lattice whose Voronoi cell has a
//! vertex shared by five tiles whose centers span a quadrangular pyramid.
//!
//! Gram entries are multiples of 1/4. Prints the first hit as a spec file.
//!
//!     cargo run --release -p valence-core --example pyramid_search [seed]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use valence_core::dualfan::delaunay_cell;
use valence_core::exactgeom::faces::faces_with_dims;
use valence_core::exactgeom::{ratio, QVec, QuadraticForm};
use valence_core::lattice::Lattice;
use valence_core::parallelohedron::Tiling;
use valence_core::star::translate_star;

fn is_pyramid_vertex(t: &Tiling) -> bool {
    t.faces.faces_of_codim(3).any(|f| {
        let star = translate_star(t, f);
        if star.valence() != 5 {
            return false;
        }
        let Ok(dc) = delaunay_cell(f, &star) else {
            return false;
        };
        let p = &dc.hull.polytope;
        let quads = p.facet_vertices.iter().filter(|s| s.len() == 4).count();
        let edges = faces_with_dims(&p.vertices, &p.facet_vertices)
            .iter()
            .filter(|(d, _)| *d == 1)
            .count();
        p.vertices.len() == 5 && p.facet_vertices.len() == 5 && quads == 1 && edges == 8
    })
}

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=20_000 {
        let mut g: Vec<QVec> = vec![vec![ratio(0, 1); 3]; 3];
        for i in 0..3 {
            g[i][i] = ratio(rng.gen_range(4..=12), 4);
            for j in 0..i {
                let x = ratio(rng.gen_range(-4..=4), 4);
                g[i][j] = x.clone();
                g[j][i] = x;
            }
        }
        let Ok(form) = QuadraticForm::new(g.clone()) else {
            continue;
        };
        let Ok(t) = Tiling::build(Lattice::voronoi(form)) else {
            continue;
        };
        if is_pyramid_vertex(&t) {
            eprintln!(
                "hit after {attempt} attempts (seed {seed}), f-vector {:?}",
                t.faces.f_vector()
            );
            println!("name = \"pyramid-witness\"\ndim = 3");
            let rows: Vec<String> = g
                .iter()
                .map(|r| {
                    let cells: Vec<String> = r.iter().map(|x| format!("\"{x}\"")).collect();
                    format!("[{}]", cells.join(", "))
                })
                .collect();
            println!("gram_construction = [{}]", rows.join(", "));
            return;
        }
    }
    eprintln!("no witness found");
    std::process::exit(1);
}
