//! Unimodular triangulations of `(r c^N + s (d!)^N) P` for several pairs
//! from one run of the mixed pipeline.

use unimod::geometry::Polytope;
use unimod::ivec;
use unimod::mixed::{main_pipeline, MixedOptions};
use unimod::rewrite::NormalizeOptions;
use unimod::verify::{simplex_cells, verify_mixed_support, verify_triangulation, verify_unimodular};

fn main() {
    let p = Polytope::new(&[ivec![0, 0], ivec![2, 1], ivec![1, 2]]).unwrap();
    let res = main_pipeline(&p, MixedOptions { c: Some(5), ..MixedOptions::default() }).unwrap();
    for (k, r) in res.rounds.iter().enumerate() {
        println!("round {}: {} pairs, {} classes rejected", k + 1, r.cells, r.rejected);
    }
    let support = verify_mixed_support(&res.cells, &[p.dilate(&res.c_power()), p.dilate(&res.factorial_power())]);
    println!("N = {}, mixed subdivision of ({}P, {}P) verified: {}", res.n(), res.c_power(), res.factorial_power(), support.passed());
    println!("every dilation from {} on is covered", res.threshold().unwrap());
    for (r, s) in [(0, 1), (1, 0), (1, 1)] {
        let m = res.dilation(r, s);
        let cells = simplex_cells(&res.triangulation(r, s, NormalizeOptions::default()).unwrap());
        let ok = verify_triangulation(&p.dilate(&m), &cells).merge(verify_unimodular(&cells)).passed();
        println!("(r, s) = ({r}, {s}): {} unimodular cells of {m}P, verified: {ok}", cells.len());
    }
}
