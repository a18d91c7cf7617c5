//! Hulls, faces, normalized volumes and Minkowski sums of lattice polytopes.

use unimod::geometry::{minkowski_sum, Polytope};
use unimod::ivec;

fn main() {
    let tri = Polytope::new(&[ivec![0, 0], ivec![2, 1], ivec![1, 2], ivec![1, 1]]).unwrap();
    println!("vertices {:?}", tri.vertices());
    println!("dimension {}, normalized volume {}", tri.dim(), tri.normalized_volume());
    println!("{} faces, {} facets", tri.faces().len(), tri.facets().len());
    let seg = Polytope::new(&[ivec![0, 0], ivec![1, 0]]).unwrap();
    let sum = minkowski_sum(&[tri.clone(), seg]).unwrap();
    println!("triangle + segment: {:?}, volume {}", sum.vertices(), sum.normalized_volume());
    println!("3P has volume {}", tri.dilate(&3.into()).normalized_volume());
}
