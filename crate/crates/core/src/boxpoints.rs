//! Box points of independent simplex tuples: nonzero classes of
//! `G(S) = N(S) / L(S)`, their multiplicity tuples and foci, the facets that
//! avoid them, the concentric shells they cut, and the kappa rule.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::cayley::{gamma_split, CayleyElt, RawCell};
use crate::geometry::linalg::{q, solve_affine, Q};
use crate::geometry::{facets_of_polysimplex, tuple_faces, tuple_lattice, tuple_n_lattice, OrderedSimplex};
use crate::lattice::{IntVector, LatticeClass, LatticeError, QuotientGroup};
use crate::rewrite::{RewriteError, SubdivisionRule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoxError {
    #[error("the class is not a box point of the tuple")]
    NoBoxPoint,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A nonzero element of `G(S)` with its fractional coordinates in the edge
/// basis `e_j^i = v_j^i - v_j^0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxPoint {
    host: Vec<OrderedSimplex>,
    coords: Vec<BigInt>,
    lift: IntVector,
    fractions: Vec<Vec<BigRational>>,
    c: Vec<u64>,
    focus: IntVector,
}

impl BoxPoint {
    pub fn host(&self) -> &[OrderedSimplex] {
        &self.host
    }

    /// Smith residues in `G(S)`.
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// The representative `sum x_j^i e_j^i` with all coefficients in `[0, 1)`.
    pub fn lift(&self) -> &IntVector {
        &self.lift
    }

    /// Coefficients `x_j^i`, one vector per simplex.
    pub fn fractions(&self) -> &[Vec<BigRational>] {
        &self.fractions
    }

    /// `c_j = ceil(sum_i x_j^i)`.
    pub fn c(&self) -> &[u64] {
        &self.c
    }

    /// `c` extended by zeros to length `n`.
    pub fn c_padded(&self, n: usize) -> Vec<u64> {
        let mut c = self.c.clone();
        c.resize(n, 0);
        c
    }

    pub fn max_c(&self) -> u64 {
        self.c.iter().copied().max().unwrap_or(0)
    }

    /// Whether the focus lies in the `c`-dilate of the facet replacing `S_j`
    /// by its facet opposite vertex `u`.
    pub fn focus_on_facet(&self, j: usize, u: usize) -> bool {
        let fr = &self.fractions[j];
        if u == 0 {
            Q::from_integer(self.c[j].into()) == fr.iter().fold(Q::zero(), |a, b| a + b)
        } else {
            fr[u - 1].is_zero()
        }
    }

    /// The representative of the class lying in `sum_j c_j S_j`.
    pub fn focus(&self) -> &IntVector {
        &self.focus
    }
}

fn ceil_u64(x: &Q) -> u64 {
    x.ceil().to_integer().to_u64().expect("small nonnegative")
}

/// The box point of `s` represented by `y` in `N(S)`, or `None` if `y` lies
/// in `L(S)` or outside the span of `s`.
pub fn box_point_at(s: &[OrderedSimplex], y: &IntVector) -> Option<BoxPoint> {
    let d = y.dim();
    let edges: Vec<Vec<IntVector>> = s.iter().map(|t| t.edges()).collect();
    let flat: Vec<&IntVector> = edges.iter().flatten().collect();
    let rows: Vec<Vec<Q>> = (0..d).map(|t| flat.iter().map(|e| q(&e[t])).collect()).collect();
    let rhs: Vec<Q> = y.iter().map(q).collect();
    let (x, dirs) = solve_affine(&rows, &rhs, flat.len())?;
    debug_assert!(dirs.is_empty(), "edges of an independent tuple are independent");
    let fr: Vec<Q> = x.iter().map(|v| v - v.floor()).collect();
    if fr.iter().all(|v| v.is_zero()) {
        return None;
    }
    let mut acc: Vec<Q> = vec![Q::zero(); d];
    for (f, e) in fr.iter().zip(&flat) {
        for t in 0..d {
            acc[t] += q(&e[t]) * f;
        }
    }
    debug_assert!(acc.iter().all(|v| v.is_integer()));
    let lift = IntVector(acc.iter().map(|v| v.to_integer()).collect());

    let mut fractions = Vec::with_capacity(s.len());
    let mut pos = 0;
    for e in &edges {
        fractions.push(fr[pos..pos + e.len()].to_vec());
        pos += e.len();
    }
    let c: Vec<u64> = fractions.iter().map(|f| ceil_u64(&f.iter().fold(Q::zero(), |a, b| a + b))).collect();
    let mut focus = lift.clone();
    for (t, &k) in s.iter().zip(&c) {
        if k != 0 {
            focus = &focus + &t.first().scale_u64(k);
        }
    }
    let g = QuotientGroup::new(&tuple_n_lattice(s, d), &tuple_lattice(s, d)).ok()?;
    let coords = g.to_quotient(&lift).ok()?;
    Some(BoxPoint { host: s.to_vec(), coords, lift, fractions, c, focus })
}

/// All box points of an independent tuple, in Smith residue order.
pub fn box_points(s: &[OrderedSimplex], ambient: usize) -> Vec<BoxPoint> {
    let g = QuotientGroup::new(&tuple_n_lattice(s, ambient), &tuple_lattice(s, ambient)).expect("L(S) has full rank in N(S)");
    g.elements()
        .into_iter()
        .skip(1)
        .map(|r| box_point_at(s, &g.section(&r).expect("valid residues")).expect("nonzero class"))
        .collect()
}

/// The box point of `s` identified with `x`, if `x` is a box point of `s`:
/// some face tuple `S'` has `L(S') = L ∩ N(S')` and `N(S')` meets the class.
pub fn box_point_of(x: &LatticeClass, s: &[OrderedSimplex]) -> Option<BoxPoint> {
    if x.is_zero() {
        return None;
    }
    let l = x.lattice();
    let d = l.ambient_dim();
    let l_index = l.index();
    for face in tuple_faces(s) {
        if face.iter().all(|t| t.is_point()) {
            continue;
        }
        let n_f = tuple_n_lattice(&face, d);
        let joined = l.sum(&n_f);
        if !joined.contains(x.rep()) {
            continue;
        }
        let l_f = tuple_lattice(&face, d);
        if !l.contains_lattice(&l_f) || l_f.index() * joined.index() != l_index {
            continue;
        }
        let g = QuotientGroup::new(&n_f, &l_f).ok()?;
        for r in g.elements() {
            let y = g.section(&r).ok()?;
            if x.contains(&y) {
                return box_point_at(s, &y);
            }
        }
    }
    None
}

/// Cached box-point queries for one fixed class, or for none.
#[derive(Debug, Default)]
pub struct BoxOracle {
    class: Option<LatticeClass>,
    cache: Mutex<HashMap<Vec<OrderedSimplex>, Option<BoxPoint>>>,
}

impl BoxOracle {
    pub fn new(class: Option<LatticeClass>) -> Arc<Self> {
        Arc::new(BoxOracle { class, cache: Mutex::new(HashMap::new()) })
    }

    pub fn class(&self) -> Option<&LatticeClass> {
        self.class.as_ref()
    }

    /// The class as a box point of `s`, if it is one.
    pub fn query(&self, s: &[OrderedSimplex]) -> Option<BoxPoint> {
        let x = self.class.as_ref()?;
        if let Some(hit) = self.cache.lock().expect("cache lock").get(s) {
            return hit.clone();
        }
        let bp = box_point_of(x, s);
        self.cache.lock().expect("cache lock").insert(s.to_vec(), bp.clone());
        bp
    }

    pub fn is_box_point(&self, s: &[OrderedSimplex]) -> bool {
        self.query(s).is_some()
    }
}

/// Facet tuples of `s` obtained by replacing one of the first `k` entries by a
/// facet whose `c`-dilate misses the focus of the class on the first `k`
/// entries. When the class is a box point of a facet only through another
/// element of `G(S)`, that facet still misses the focus and is kept.
pub fn frak_f(oracle: &BoxOracle, s: &[OrderedSimplex], k: usize) -> Vec<Vec<OrderedSimplex>> {
    let Some(bp) = oracle.query(&s[..k]) else {
        return Vec::new();
    };
    facets_of_polysimplex(&s[..k])
        .into_iter()
        .filter(|(j, u, _)| !bp.focus_on_facet(*j, *u))
        .map(|(_, _, mut f)| {
            f.extend_from_slice(&s[k..]);
            f
        })
        .collect()
}

/// Facet tuples `G` of `f` with `G ≤ F'` for some `F'` in `frak` other than `f`.
pub fn frak_g(f: &[OrderedSimplex], frak: &[Vec<OrderedSimplex>]) -> Vec<Vec<OrderedSimplex>> {
    let mut out = Vec::new();
    for (_, _, g) in facets_of_polysimplex(f) {
        let below = frak.iter().any(|other| other.as_slice() != f && g.iter().zip(other).all(|(a, b)| a.is_face_of(b)));
        if below && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

fn sub_row(a: &[u64], c: &[u64], r: u64) -> Vec<u64> {
    a.iter().zip(c).map(|(x, y)| x - r * y).collect()
}

/// Shell cells `((p + r x0, p + (r-1) x0), F, (a - r c ; a - (r-1) c))` for
/// `r = 1..=n` and `F` in `frak`.
pub(crate) fn shell_raw(p: &IntVector, a: &[u64], c: &[u64], x0: &IntVector, frak: &[Vec<OrderedSimplex>], n: u64) -> Vec<RawCell> {
    let mut out = Vec::new();
    for r in 1..=n {
        let outer = p + &x0.scale_u64(r);
        let inner = p + &x0.scale_u64(r - 1);
        for f in frak {
            out.push(RawCell::new(vec![outer.clone(), inner.clone()], f.clone(), vec![sub_row(a, c, r), sub_row(a, c, r - 1)]));
        }
    }
    out
}

/// The `n` outermost shells of `p + sum_j a_j S_j` around the focus of the
/// class, as Cayley cells.
pub fn shell_cells(oracle: &BoxOracle, p: &IntVector, s: &[OrderedSimplex], a: &[u64], n: u64) -> Result<Vec<CayleyElt>, BoxError> {
    let bp = oracle.query(s).ok_or(BoxError::NoBoxPoint)?;
    if a.len() != s.len() || a.iter().zip(bp.c()).any(|(x, c)| *x < n * c) {
        return Err(BoxError::Precondition(format!("need a >= {n} c with c = {:?}", bp.c())));
    }
    let frak = frak_f(oracle, s, s.len());
    let cells: BTreeSet<CayleyElt> = shell_raw(p, a, bp.c(), bp.focus(), &frak, n).into_iter().map(RawCell::reduce).collect();
    Ok(cells.into_iter().collect())
}

/// The cells `A'`, `A♯`, `A♭` and `A^G` of the kappa construction at column
/// `j`, before reduction.
pub(crate) struct KappaPieces {
    pub prime: Option<RawCell>,
    pub sharp: RawCell,
    pub flat: RawCell,
    pub sides: Vec<(Vec<OrderedSimplex>, RawCell)>,
}

/// Builds the kappa pieces; `c` must have one entry per simplex and the
/// pivot row must dominate it.
pub(crate) fn kappa_pieces(raw: &RawCell, j: usize, c: &[u64], x0: &IntVector, frak: &[Vec<OrderedSimplex>]) -> KappaPieces {
    let i = raw.pivot_row(j);
    let (first, second) = raw.gamma_at(j, i);
    let mut facet = raw.s.clone();
    facet[j] = raw.s[j].facet_opposite(0);
    let point = &raw.p[i] + x0;
    let row = sub_row(&raw.a[i], c, 1);
    let sharp = raw.clone().with_tuple(facet.clone()).insert_row(i, point.clone(), row.clone());
    let flat = first.clone().with_tuple(facet.clone()).insert_row(i, point.clone(), row.clone());
    let sides = frak_g(&facet, frak)
        .into_iter()
        .map(|g| {
            let cell = second.clone().with_tuple(g.clone()).insert_row(i, point.clone(), row.clone());
            (g, cell)
        })
        .collect();
    let prime = (!raw.is_lone(j, i)).then_some(first);
    KappaPieces { prime, sharp, flat, sides }
}

/// The kappa rule for the simplex `T` and the class of the oracle.
#[derive(Clone, Debug)]
pub struct KappaRule {
    pub simplex: OrderedSimplex,
    pub oracle: Arc<BoxOracle>,
}

impl KappaRule {
    fn setup(&self, e: &CayleyElt) -> Option<(usize, BoxPoint)> {
        let j = e.column_of(&self.simplex)?;
        let bp = self.oracle.query(e.s())?;
        let c = bp.c();
        let dominated = e.a().iter().all(|row| row.iter().zip(c).all(|(a, c)| a >= c));
        let strict = e.a().iter().any(|row| row[j] > c[j]);
        (dominated && strict).then_some((j, bp))
    }
}

impl SubdivisionRule<CayleyElt> for KappaRule {
    fn name(&self) -> String {
        format!("kappa{:?}", self.simplex)
    }

    fn applies_to(&self, e: &CayleyElt) -> bool {
        self.setup(e).is_some()
    }

    fn apply(&self, e: &CayleyElt) -> Result<Vec<CayleyElt>, RewriteError> {
        let (j, bp) = self.setup(e).ok_or_else(|| RewriteError::RuleFailed {
            rule: self.name(),
            cell: format!("{e:?}"),
            reason: "not in the domain".into(),
        })?;
        let raw = RawCell::from(e);
        let mut facet = e.s().to_vec();
        facet[j] = facet[j].facet_opposite(0);
        if self.oracle.is_box_point(&facet) {
            return Ok(gamma_split(e, j));
        }
        let frak = frak_f(&self.oracle, e.s(), e.n());
        let pieces = kappa_pieces(&raw, j, bp.c(), bp.focus(), &frak);
        let mut out: BTreeSet<CayleyElt> = BTreeSet::new();
        out.extend(pieces.prime.map(RawCell::reduce));
        out.insert(pieces.sharp.reduce());
        out.insert(pieces.flat.reduce());
        out.extend(pieces.sides.into_iter().map(|(_, c)| c.reduce()));
        Ok(out.into_iter().collect())
    }
}
