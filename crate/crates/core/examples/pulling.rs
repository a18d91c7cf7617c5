//! Pulling triangulation of the unit cube, certified by the verifier.

use unimod::classic::pulling_triangulation;
use unimod::geometry::Polytope;
use unimod::ivec;
use unimod::rewrite::NormalizeOptions;
use unimod::verify::{simplex_cells, verify_triangulation, verify_unimodular};

fn main() {
    let mut cube = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                cube.push(ivec![x, y, z]);
            }
        }
    }
    let tets = pulling_triangulation(&cube, NormalizeOptions::default()).unwrap();
    for t in &tets {
        println!("{:?} index {}", t.vertices(), t.index());
    }
    let cells = simplex_cells(&tets);
    let report = verify_triangulation(&Polytope::new(&cube).unwrap(), &cells).merge(verify_unimodular(&cells));
    println!("{} tetrahedra, verified: {}", tets.len(), report.passed());
}
