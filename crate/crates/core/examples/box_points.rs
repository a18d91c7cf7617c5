//! Box points of simplex tuples, with their dilation tuples and foci.

use unimod::boxpoints::box_points;
use unimod::geometry::OrderedSimplex;
use unimod::ivec;

fn show(name: &str, s: &[OrderedSimplex]) {
    let d = s[0].ambient_dim();
    println!("{name}:");
    for b in box_points(s, d) {
        println!("  lift {:?}, c {:?}, focus {:?}", b.lift(), b.c(), b.focus());
    }
}

fn main() {
    let tri = OrderedSimplex::new(vec![ivec![0, 0], ivec![2, 1], ivec![1, 2]]).unwrap();
    show("triangle of index 3", &[tri]);
    let reeve = OrderedSimplex::new(vec![ivec![0, 0, 0], ivec![1, 0, 0], ivec![0, 1, 0], ivec![1, 1, 2]]).unwrap();
    show("Reeve tetrahedron", &[reeve]);
    let a = OrderedSimplex::new(vec![ivec![0, 0], ivec![2, 0]]).unwrap();
    let b = OrderedSimplex::new(vec![ivec![0, 0], ivec![0, 2]]).unwrap();
    show("two segments of length 2", &[a, b]);
}
