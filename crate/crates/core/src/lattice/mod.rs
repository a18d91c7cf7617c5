//! Integer lattices: normal forms, saturation, index and finite quotients.

mod matrix;
mod vector;

pub use matrix::{hnf, left_kernel, rank, right_kernel, snf, Hnf, IntMatrix, Snf};
pub use vector::IntVector;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("vector is not in the lattice")]
    NotInLattice,
    #[error("lattice {0} is not a sublattice of the given overlattice")]
    NotSublattice(String),
    #[error("ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("face does not have codimension one in the lattice span")]
    NotAFacet,
    #[error("residues do not match the cyclic factors")]
    BadResidues,
}

/// Lattice stored by its row Hermite basis, which makes equality structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IntLattice {
    ambient: usize,
    basis: Vec<IntVector>,
}

impl IntLattice {
    pub fn new(generators: &[IntVector], ambient: usize) -> Self {
        if generators.is_empty() {
            return IntLattice { ambient, basis: Vec::new() };
        }
        let h = hnf(&IntMatrix::from_vectors(generators, ambient));
        IntLattice { ambient, basis: h.basis() }
    }

    pub fn full(ambient: usize) -> Self {
        IntLattice { ambient, basis: (0..ambient).map(|i| IntVector::unit(ambient, i)).collect() }
    }

    pub fn zero(ambient: usize) -> Self {
        IntLattice { ambient, basis: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    /// `[Span_R(L) ∩ Z^d : L]`.
    pub fn index(&self) -> BigInt {
        if self.basis.is_empty() {
            return BigInt::one();
        }
        snf(&IntMatrix::from_vectors(&self.basis, self.ambient)).invariant_factors().iter().product()
    }

    pub fn saturation(&self) -> IntLattice {
        if self.basis.is_empty() {
            return self.clone();
        }
        let s = snf(&IntMatrix::from_vectors(&self.basis, self.ambient));
        let rows: Vec<IntVector> = (0..s.rank).map(|i| s.v_inv.row_vector(i)).collect();
        IntLattice::new(&rows, self.ambient)
    }

    pub fn is_saturated(&self) -> bool {
        self.index().is_one()
    }

    pub fn sum(&self, other: &IntLattice) -> IntLattice {
        let mut g = self.basis.clone();
        g.extend(other.basis.iter().cloned());
        IntLattice::new(&g, self.ambient)
    }

    /// Integer coordinates of `v` in the Hermite basis, if `v` lies in the lattice.
    pub fn coords(&self, v: &IntVector) -> Option<Vec<BigInt>> {
        let mut rest = v.clone();
        let mut out = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let piv = b.0.iter().position(|x| !x.is_zero()).expect("zero basis row");
            let (q, r) = rest[piv].div_rem(&b[piv]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                rest = &rest - &b.scale(&q);
            }
            out.push(q);
        }
        rest.is_zero().then_some(out)
    }

    /// Rational coordinates of `v` in the Hermite basis, if `v` is in the span.
    pub fn rational_coords(&self, v: &IntVector) -> Option<Vec<BigRational>> {
        let mut rest: Vec<BigRational> = v.to_rational();
        let mut out = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let piv = b.0.iter().position(|x| !x.is_zero()).expect("zero basis row");
            let q = &rest[piv] / BigRational::from_integer(b[piv].clone());
            if !q.is_zero() {
                for (r, x) in rest.iter_mut().zip(&b.0) {
                    *r -= &q * BigRational::from_integer(x.clone());
                }
            }
            out.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(out)
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, other: &IntLattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn in_span(&self, v: &IntVector) -> bool {
        self.rational_coords(v).is_some()
    }

    pub fn from_coords(&self, coords: &[BigInt]) -> IntVector {
        let mut v = IntVector::zero(self.ambient);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                v = &v + &b.scale(c);
            }
        }
        v
    }
}

impl IntLattice {
    /// Canonical representative of `v` modulo the lattice: each pivot
    /// coordinate is brought into `[0, pivot)` in echelon order.
    pub fn reduce(&self, v: &IntVector) -> IntVector {
        let mut rest = v.clone();
        for b in &self.basis {
            let piv = b.0.iter().position(|x| !x.is_zero()).expect("zero basis row");
            let q = rest[piv].div_floor(&b[piv]);
            if !q.is_zero() {
                rest = &rest - &b.scale(&q);
            }
        }
        rest
    }
}

/// An element of `Z^d / L` for a full-rank lattice `L`, stored by its
/// canonical representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LatticeClass {
    lattice: IntLattice,
    rep: IntVector,
}

impl LatticeClass {
    pub fn new(lattice: IntLattice, v: &IntVector) -> Result<Self, LatticeError> {
        if lattice.rank() != lattice.ambient_dim() {
            return Err(LatticeError::RankMismatch(lattice.rank(), lattice.ambient_dim()));
        }
        let rep = lattice.reduce(v);
        Ok(LatticeClass { lattice, rep })
    }

    pub fn lattice(&self) -> &IntLattice {
        &self.lattice
    }

    pub fn rep(&self) -> &IntVector {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// Whether `v` represents this class.
    pub fn contains(&self, v: &IntVector) -> bool {
        self.lattice.reduce(v) == self.rep
    }

    /// Nonzero classes of `Z^d / L`, ordered by their Smith residues.
    pub fn nonzero_classes(lattice: &IntLattice) -> Result<Vec<LatticeClass>, LatticeError> {
        let g = QuotientGroup::new(&IntLattice::full(lattice.ambient_dim()), lattice)?;
        g.elements()
            .into_iter()
            .skip(1)
            .map(|r| LatticeClass::new(lattice.clone(), &g.section(&r)?))
            .collect()
    }
}

/// The finite group `N / L` for lattices `L ≤ N` of equal rank.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    overlattice: IntLattice,
    sublattice: IntLattice,
    /// Full Smith diagonal in the basis of `N`.
    diagonal: Vec<BigInt>,
    /// Positions in `diagonal` with entries greater than one.
    nontrivial: Vec<usize>,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl QuotientGroup {
    pub fn new(n: &IntLattice, l: &IntLattice) -> Result<Self, LatticeError> {
        if n.rank() != l.rank() {
            return Err(LatticeError::RankMismatch(n.rank(), l.rank()));
        }
        let r = n.rank();
        let mut rows = Vec::with_capacity(r);
        for b in l.basis() {
            let c = n.coords(b).ok_or_else(|| LatticeError::NotSublattice(format!("{:?}", l.basis())))?;
            rows.push(c);
        }
        let s = snf(&IntMatrix::from_rows(rows, r));
        let diagonal = s.diagonal();
        let nontrivial = (0..diagonal.len()).filter(|&i| diagonal[i] > BigInt::one()).collect();
        Ok(QuotientGroup { overlattice: n.clone(), sublattice: l.clone(), diagonal, nontrivial, v: s.v, v_inv: s.v_inv })
    }

    /// Invariant factors greater than one, in divisibility order.
    pub fn cyclic_factors(&self) -> Vec<BigInt> {
        self.nontrivial.iter().map(|&i| self.diagonal[i].clone()).collect()
    }

    pub fn order(&self) -> BigInt {
        self.diagonal.iter().product()
    }

    pub fn overlattice(&self) -> &IntLattice {
        &self.overlattice
    }

    pub fn sublattice(&self) -> &IntLattice {
        &self.sublattice
    }

    /// Residues of `v` modulo the cyclic factors.
    pub fn to_quotient(&self, v: &IntVector) -> Result<Vec<BigInt>, LatticeError> {
        let y = self.overlattice.coords(v).ok_or(LatticeError::NotInLattice)?;
        let w = self.v.left_mul_vec(&y);
        Ok(self.nontrivial.iter().map(|&i| w[i].mod_floor(&self.diagonal[i])).collect())
    }

    /// A representative in `N` of the class with the given residues.
    pub fn section(&self, residues: &[BigInt]) -> Result<IntVector, LatticeError> {
        if residues.len() != self.nontrivial.len() {
            return Err(LatticeError::BadResidues);
        }
        let mut w = vec![BigInt::zero(); self.diagonal.len()];
        for (&i, r) in self.nontrivial.iter().zip(residues) {
            w[i] = r.mod_floor(&self.diagonal[i]);
        }
        let y = self.v_inv.left_mul_vec(&w);
        Ok(self.overlattice.from_coords(&y))
    }

    /// All residue tuples in lexicographic order, starting with zero.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let factors = self.cyclic_factors();
        let mut out = vec![Vec::new()];
        for f in &factors {
            let mut next = Vec::new();
            for prefix in &out {
                let mut k = BigInt::zero();
                while &k < f {
                    let mut e = prefix.clone();
                    e.push(k.clone());
                    next.push(e);
                    k += 1;
                }
            }
            out = next;
        }
        out
    }

    pub fn is_zero(&self, v: &IntVector) -> bool {
        self.sublattice.contains(v)
    }
}

/// Lattice distance from `x` to the affine span of `face`, measured with the
/// primitive functional on `n` that vanishes on the face directions.
///
/// The face directions must have rank one less than `n`.
pub fn lattice_distance(x: &IntVector, face: &[IntVector], n: &IntLattice) -> Result<BigRational, LatticeError> {
    let f0 = face.first().ok_or(LatticeError::NotAFacet)?;
    let r = n.rank();
    let mut rows = Vec::new();
    for f in &face[1..] {
        let c = n.rational_coords(&(f - f0)).ok_or(LatticeError::NotInLattice)?;
        rows.push(clear_denominators(&c));
    }
    let kernel = right_kernel(&rows, r);
    if kernel.len() != 1 {
        return Err(LatticeError::NotAFacet);
    }
    let phi = &kernel[0];
    let cx = n.rational_coords(&(x - f0)).ok_or(LatticeError::NotInLattice)?;
    let val: BigRational = phi.0.iter().zip(&cx).map(|(a, b)| BigRational::from_integer(a.clone()) * b).sum();
    Ok(val.abs())
}

/// Scales a rational vector by the lcm of its denominators.
pub fn clear_denominators(v: &[BigRational]) -> IntVector {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    IntVector(v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect())
}
