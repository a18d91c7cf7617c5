//! A unimodular triangulation of a dilate `(d!)^N P`, round by round.

use unimod::geometry::Polytope;
use unimod::ivec;
use unimod::kmw::{index_profile, kmw_pipeline, KmwOptions};
use unimod::verify::{simplex_cells, verify_triangulation, verify_unimodular};

fn main() {
    let p = Polytope::new(&[ivec![0, 0], ivec![2, 1], ivec![1, 2]]).unwrap();
    let res = kmw_pipeline(&p, KmwOptions::default()).unwrap();
    println!("start: cells by index {:?}", index_profile(&res.initial_lattices));
    for (k, r) in res.rounds.iter().enumerate() {
        println!("round {}: {} cells, by index {:?}", k + 1, r.cells, index_profile(&r.lattices));
    }
    let cells = simplex_cells(&res.triangulation);
    let ok = verify_triangulation(&p.dilate(&res.dilation), &cells).merge(verify_unimodular(&cells)).passed();
    println!("N = {}, {} unimodular cells of {}P, verified: {ok}", res.n(), cells.len(), res.dilation);
}
