//! Reports for a clean certificate and for corrupted ones.

use unimod::geometry::Polytope;
use unimod::ivec;
use unimod::verify::{verify_triangulation, verify_unimodular};

fn main() {
    let square = Polytope::new(&[ivec![0, 0], ivec![1, 0], ivec![0, 1], ivec![1, 1]]).unwrap();
    let halves = vec![vec![ivec![0, 0], ivec![1, 0], ivec![1, 1]], vec![ivec![0, 0], ivec![0, 1], ivec![1, 1]]];
    println!("clean: {:?}", verify_triangulation(&square, &halves));
    println!("one half: {:?}", verify_triangulation(&square, &halves[..1]).violations);
    let crossing = vec![halves[0].clone(), vec![ivec![1, 0], ivec![0, 1], ivec![1, 1]]];
    println!("crossing diagonals: {:?}", verify_triangulation(&square, &crossing).classes());
    let fat = vec![vec![ivec![0, 0], ivec![2, 1], ivec![1, 2]]];
    println!("fat triangle: {:?}", verify_unimodular(&fat).violations);
}
