//! Subdividing a square by a hyperplane arrangement.

use unimod::classic::{dice, Hyperplane};
use unimod::geometry::Polytope;
use unimod::ivec;
use unimod::rewrite::NormalizeOptions;
use unimod::verify::verify_subdivision;

fn main() {
    let square = Polytope::new(&[ivec![0, 0], ivec![2, 0], ivec![0, 2], ivec![2, 2]]).unwrap().to_rat();
    let cuts = [
        Hyperplane::new(ivec![1, 0], 1.into()).unwrap(),
        Hyperplane::new(ivec![0, 1], 1.into()).unwrap(),
        Hyperplane::new(ivec![1, 1], 2.into()).unwrap(),
    ];
    let cells = dice(&square, &cuts, NormalizeOptions::default()).unwrap();
    for c in &cells {
        let pts: Vec<String> = c
            .vertices()
            .iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        println!("{}", pts.join(" "));
    }
    println!("{} cells, verified: {}", cells.len(), verify_subdivision(&square, &cells).passed());
}
