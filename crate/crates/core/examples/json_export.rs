//! Triangulation files: canonical JSON and OFF for mesh viewers.

use std::collections::BTreeMap;

use unimod::classic::pulling_triangulation;
use unimod::io::{read_polytope, TriangulationFile};
use unimod::rewrite::NormalizeOptions;

fn main() {
    let p = read_polytope(r#"{"dim": 3, "vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1],[1,1,1]]}"#).unwrap();
    let tri = pulling_triangulation(p.vertices(), NormalizeOptions::default()).unwrap();
    let file = TriangulationFile::from_simplices(3, &tri, BTreeMap::new());
    print!("{}", file.to_json());
    print!("{}", file.to_off().unwrap());
}
