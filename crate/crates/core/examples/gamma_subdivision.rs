//! The canonical subdivision of a dilated simplex into unimodular cells,
//! computed by normalizing a Cayley cell under the gamma rules.

use unimod::cayley::{gamma_normal_form, CayleyElt};
use unimod::geometry::OrderedSimplex;
use unimod::ivec;
use unimod::rewrite::{NormalizeOptions, Strategy};

fn main() {
    let t = OrderedSimplex::new(vec![ivec![0, 0], ivec![1, 0], ivec![0, 1]]).unwrap();
    let e = CayleyElt::dilated_simplex(t, 3);
    let cells = gamma_normal_form(&e, NormalizeOptions::default()).unwrap();
    for c in &cells {
        println!("{:?}", c.cay().vertices());
    }
    let random = gamma_normal_form(&e, NormalizeOptions { strategy: Strategy::Random(7), ..Default::default() }).unwrap();
    println!("{} cells; same under a random strategy: {}", cells.len(), cells == random);
}
