use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::complexes::Cell;
use crate::geometry::linalg::{dot, q, Q};
use crate::geometry::{RatPoint, RatPolytope};
use crate::lattice::IntVector;
use crate::rewrite::{normalize, NormalizeOptions, RewriteError, RuleFamily, SubdivisionRule};

impl Cell for RatPolytope {
    fn faces(&self) -> Vec<Self> {
        RatPolytope::faces(self)
    }

    fn realize(&self) -> Vec<RatPolytope> {
        vec![self.clone()]
    }

    fn summed(&self) -> RatPolytope {
        self.clone()
    }
}

/// The hyperplane `normal . x = offset`, with a primitive normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    normal: IntVector,
    offset: BigInt,
}

impl Hyperplane {
    /// Divides out the content of the normal; `None` for a zero normal or an
    /// offset not divisible by the content.
    pub fn new(normal: IntVector, offset: BigInt) -> Option<Self> {
        let g = normal.content();
        if g.is_zero() || !(&offset % &g).is_zero() {
            return None;
        }
        let normal = IntVector(normal.iter().map(|x| x / &g).collect());
        Some(Hyperplane { normal, offset: offset / g })
    }

    pub fn normal(&self) -> &IntVector {
        &self.normal
    }

    pub fn offset(&self) -> &BigInt {
        &self.offset
    }

    fn value(&self, x: &[Q]) -> Q {
        dot(&self.normal.to_rational(), x) - q(&self.offset)
    }

    /// Position of a point: `Greater` on the positive side.
    pub fn side(&self, x: &[Q]) -> Ordering {
        self.value(x).cmp(&Q::zero())
    }
}

/// Cuts a polytope whose relative interior meets the hyperplane into its two
/// halves.
#[derive(Clone, Debug)]
pub struct DiceRule(pub Hyperplane);

impl DiceRule {
    fn half(&self, p: &RatPolytope, keep: Ordering) -> RatPolytope {
        let h = &self.0;
        let vals: Vec<Q> = p.vertices().iter().map(|v| h.value(v)).collect();
        let mut pts: Vec<RatPoint> =
            p.vertices().iter().zip(&vals).filter(|(_, x)| (*x).cmp(&Q::zero()) != keep.reverse()).map(|(v, _)| v.clone()).collect();
        for (u, fu) in p.vertices().iter().zip(&vals) {
            for (w, fw) in p.vertices().iter().zip(&vals) {
                if fu.is_positive() && fw.is_negative() {
                    let t = fu / (fu - fw);
                    pts.push(u.iter().zip(w).map(|(a, b)| a + &t * (b - a)).collect());
                }
            }
        }
        RatPolytope::new(&pts).expect("nonempty")
    }
}

impl SubdivisionRule<RatPolytope> for DiceRule {
    fn name(&self) -> String {
        format!("dice{:?}={}", self.0.normal, self.0.offset)
    }

    fn applies_to(&self, p: &RatPolytope) -> bool {
        let sides: Vec<Ordering> = p.vertices().iter().map(|v| self.0.side(v)).collect();
        sides.iter().all(|s| *s == Ordering::Equal) || (sides.contains(&Ordering::Less) && sides.contains(&Ordering::Greater))
    }

    fn apply(&self, p: &RatPolytope) -> Result<Vec<RatPolytope>, RewriteError> {
        if p.vertices().iter().all(|v| self.0.side(v) == Ordering::Equal) {
            return Ok(vec![p.clone()]);
        }
        Ok(vec![self.half(p, Ordering::Greater), self.half(p, Ordering::Less)])
    }
}

pub fn dicing_family(hyperplanes: &[Hyperplane]) -> RuleFamily<RatPolytope> {
    hyperplanes.iter().fold(RuleFamily::new(), |f, h| f.with_rule(DiceRule(h.clone())))
}

/// Maximal cells of the dicing of `p` by the hyperplanes.
pub fn dice(p: &RatPolytope, hyperplanes: &[Hyperplane], opts: NormalizeOptions) -> Result<Vec<RatPolytope>, RewriteError> {
    Ok(normalize(p, &dicing_family(hyperplanes), opts)?.into_iter().collect())
}
