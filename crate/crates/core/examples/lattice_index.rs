//! Index of an edge lattice and the classes of its finite quotient.

use unimod::ivec;
use unimod::lattice::{IntLattice, LatticeClass};

fn main() {
    let edges = [ivec![2, 1], ivec![1, 2]];
    let l = IntLattice::new(&edges, 2);
    println!("basis {:?}, index {}", l.basis(), l.index());
    for x in LatticeClass::nonzero_classes(&l).unwrap() {
        println!("class of {:?}", x.rep());
    }
    println!("saturated: {}", l.saturation() == IntLattice::full(2));
}
