//! The rules acting on pairs: `mu` and `nu` split an active simplex, `epsilon`
//! turns the base points into a passive simplex, and `tau`, `sigma` and `rho`
//! cut shells around the focus of a box point.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::boxpoints::{frak_f, kappa_pieces, shell_raw, BoxOracle, BoxPoint};
use crate::geometry::OrderedSimplex;
use crate::kmw::factorial;
use crate::lattice::IntVector;
use crate::rewrite::{normalize, NormalizeOptions, RewriteError, RuleFamily, RuleSchema, Single, SubdivisionRule};

use super::DElt;

fn collect(cells: impl IntoIterator<Item = DElt>) -> Vec<DElt> {
    cells.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

fn failed(rule: &str, e: &DElt, reason: &str) -> RewriteError {
    RewriteError::RuleFailed { rule: rule.into(), cell: format!("{e:?}"), reason: reason.into() }
}

/// Both components split in lock-step at active column `j`.
pub fn mu_split(e: &DElt, j: usize) -> Vec<DElt> {
    let (u, v) = (e.u(), e.v());
    let i = u.pivot_row(j);
    let (u1, u2) = u.gamma_at(j, i);
    let (v1, v2) = v.gamma_at(j, i);
    let first = (!u.is_lone(j, i)).then(|| DElt::from_parts(u1, v1, e.k));
    collect(first.into_iter().chain([DElt::from_parts(u2, v2, e.k)]))
}

/// The first component splits at active column `j`; the second keeps its
/// single point and restricts to the facet in the second half.
pub fn nu_split(e: &DElt, j: usize) -> Vec<DElt> {
    let (u, v) = (e.u(), e.v());
    let i = u.pivot_row(j);
    let (u1, u2) = u.gamma_at(j, i);
    let v_f = v.clone().with_tuple(u2.s.clone());
    let first = (!u.is_lone(j, i)).then(|| DElt::from_parts(u1, v, e.k));
    collect(first.into_iter().chain([DElt::from_parts(u2, v_f, e.k)]))
}

/// The base points become a passive simplex `T` with multiplicity one in
/// the first component; the second component gains `T` with multiplicity
/// one in the lock-step shape and zero in the single-point shape.
pub fn epsilon_split(e: &DElt) -> Vec<DElt> {
    let d = e.ambient_dim();
    let t = OrderedSimplex::new(e.p.clone()).expect("base points of a Cayley cell with equal rows are independent");
    let mut s = e.s.clone();
    s.push(t);
    let mut a0 = e.a[0].clone();
    a0.push(1);
    let mut b0 = e.b[0].clone();
    let q = if e.in_m() {
        b0.push(1);
        vec![&e.q[0] - &e.p[0]]
    } else {
        b0.push(0);
        e.q.clone()
    };
    vec![DElt::reduce_raw(vec![IntVector::zero(d)], q, s, vec![a0], vec![b0], e.k)]
}

/// Concentric shell pairs around the focus, `N = d! / max c` of them.
pub fn tau_split(e: &DElt, bp: &BoxPoint, oracle: &BoxOracle) -> Vec<DElt> {
    let c = bp.c_padded(e.n());
    let n = factorial(e.ambient_dim()) / bp.max_c();
    let frak = frak_f(oracle, &e.s, e.k);
    let us = shell_raw(&e.p[0], &e.a[0], &c, bp.focus(), &frak, n);
    let vs = shell_raw(&e.q[0], &e.b[0], &c, bp.focus(), &frak, n);
    collect(us.into_iter().zip(vs).map(|(u, v)| DElt::from_parts(u, v, e.k)))
}

/// Moves the first row equal to `b + c` to the focus and fills the gap with
/// one cell per avoided facet.
pub fn sigma_split(e: &DElt, bp: &BoxPoint, oracle: &BoxOracle) -> Vec<DElt> {
    let k = e.k;
    let c = bp.c_padded(e.n());
    let b = &e.b[0];
    let i = e
        .a
        .iter()
        .position(|r| (0..k).all(|j| r[j] == b[j] + c[j]))
        .expect("a row equal to b + c");
    let point = &e.p[i] + bp.focus();
    let row: Vec<u64> = e.a[i].iter().zip(&c).map(|(x, y)| x - y).collect();
    let (u, v) = (e.u(), e.v());
    let mut star = u.clone();
    star.p[i] = point.clone();
    star.a[i] = row.clone();
    let mut out = vec![DElt::from_parts(star, v.clone(), k)];
    for f in frak_f(oracle, &e.s, k) {
        let sharp = u.clone().with_tuple(f.clone()).insert_row(i, point.clone(), row.clone());
        out.push(DElt::from_parts(sharp, v.clone().with_tuple(f), k));
    }
    collect(out)
}

/// The kappa construction on the first component at the first active column
/// where some row exceeds `b + c`, or `nu` there if the class survives on
/// the facet.
pub fn rho_split(e: &DElt, bp: &BoxPoint, oracle: &BoxOracle) -> Vec<DElt> {
    let k = e.k;
    let c = bp.c_padded(e.n());
    let b = &e.b[0];
    let j = (0..k).find(|&j| e.a.iter().any(|r| r[j] > b[j] + c[j])).expect("a strict column");
    let mut facet = e.s.clone();
    facet[j] = e.s[j].facet_opposite(0);
    if oracle.is_box_point(&facet[..k]) {
        return nu_split(e, j);
    }
    let frak = frak_f(oracle, &e.s, k);
    let pieces = kappa_pieces(&e.u(), j, &c, bp.focus(), &frak);
    let v = e.v();
    let v_f = v.clone().with_tuple(facet);
    let mut out = Vec::new();
    out.extend(pieces.prime.map(|u| DElt::from_parts(u, v.clone(), k)));
    out.push(DElt::from_parts(pieces.sharp, v_f.clone(), k));
    out.push(DElt::from_parts(pieces.flat, v_f, k));
    for (g, u) in pieces.sides {
        out.push(DElt::from_parts(u, v.clone().with_tuple(g), k));
    }
    collect(out)
}

fn is_epsilon_shape(e: &DElt) -> bool {
    if e.m() <= 1 {
        return false;
    }
    if e.in_m() && e.k == 0 {
        return true;
    }
    e.in_n() && e.a.iter().all(|r| r[..e.k] == e.b[0][..e.k])
}

/// `mu` at a fixed simplex, on every lock-step cell where it is active.
#[derive(Clone, Debug)]
pub struct MuRule(pub OrderedSimplex);

impl SubdivisionRule<DElt> for MuRule {
    fn name(&self) -> String {
        format!("mu{:?}", self.0)
    }
    fn applies_to(&self, e: &DElt) -> bool {
        e.in_m() && e.active().contains(&self.0)
    }
    fn apply(&self, e: &DElt) -> Result<Vec<DElt>, RewriteError> {
        let j = e.active().iter().position(|t| t == &self.0).filter(|_| e.in_m()).ok_or_else(|| failed(&self.name(), e, "not in the domain"))?;
        Ok(mu_split(e, j))
    }
}

/// `nu` at a fixed simplex, where some row exceeds `b` in its column.
#[derive(Clone, Debug)]
pub struct NuRule(pub OrderedSimplex);

fn nu_column(e: &DElt, j: usize) -> bool {
    e.in_n() && e.a.iter().any(|r| r[j] > e.b[0][j])
}

impl SubdivisionRule<DElt> for NuRule {
    fn name(&self) -> String {
        format!("nu{:?}", self.0)
    }
    fn applies_to(&self, e: &DElt) -> bool {
        e.active().iter().position(|t| t == &self.0).is_some_and(|j| nu_column(e, j))
    }
    fn apply(&self, e: &DElt) -> Result<Vec<DElt>, RewriteError> {
        let j = e.active().iter().position(|t| t == &self.0).filter(|&j| nu_column(e, j)).ok_or_else(|| failed(&self.name(), e, "not in the domain"))?;
        Ok(nu_split(e, j))
    }
}

/// `mu` at every active column, on cells without the class.
pub struct MuSchema {
    pub oracle: Arc<BoxOracle>,
}

impl RuleSchema<DElt> for MuSchema {
    fn name(&self) -> String {
        "mu".into()
    }
    fn params(&self, e: &DElt) -> Vec<usize> {
        if e.in_m() && e.in_d_circ(&self.oracle) {
            (0..e.k).collect()
        } else {
            Vec::new()
        }
    }
    fn apply(&self, e: &DElt, j: usize) -> Result<Vec<DElt>, RewriteError> {
        Ok(mu_split(e, j))
    }
}

/// `nu` at every admissible active column, on cells without the class.
pub struct NuSchema {
    pub oracle: Arc<BoxOracle>,
}

impl RuleSchema<DElt> for NuSchema {
    fn name(&self) -> String {
        "nu".into()
    }
    fn params(&self, e: &DElt) -> Vec<usize> {
        if e.in_d_circ(&self.oracle) {
            (0..e.k).filter(|&j| nu_column(e, j)).collect()
        } else {
            Vec::new()
        }
    }
    fn apply(&self, e: &DElt, j: usize) -> Result<Vec<DElt>, RewriteError> {
        Ok(nu_split(e, j))
    }
}

/// `epsilon` on cells of the domain of the class.
pub struct EpsilonRule {
    pub oracle: Arc<BoxOracle>,
}

impl SubdivisionRule<DElt> for EpsilonRule {
    fn name(&self) -> String {
        "epsilon".into()
    }
    fn applies_to(&self, e: &DElt) -> bool {
        is_epsilon_shape(e) && e.in_d_x(&self.oracle)
    }
    fn apply(&self, e: &DElt) -> Result<Vec<DElt>, RewriteError> {
        if !self.applies_to(e) {
            return Err(failed(&self.name(), e, "not in the domain"));
        }
        Ok(epsilon_split(e))
    }
}

fn box_rows(e: &DElt, oracle: &BoxOracle) -> Option<(BoxPoint, Vec<bool>)> {
    let bp = e.box_point(oracle)?;
    let rows = e.bullet_rows(&bp)?;
    Some((bp, rows))
}

fn tau_domain(e: &DElt, oracle: &BoxOracle) -> Option<BoxPoint> {
    let (bp, rows) = box_rows(e, oracle)?;
    let top = factorial(e.ambient_dim());
    (e.m() == 1 && !rows[0] && e.b[0][..e.k].iter().all(|&v| v == top)).then_some(bp)
}

fn sigma_domain(e: &DElt, oracle: &BoxOracle) -> Option<BoxPoint> {
    let (bp, rows) = box_rows(e, oracle)?;
    let c = bp.c();
    let b = &e.b[0];
    let exact = e.a.iter().zip(&rows).all(|(r, &up)| !up || (0..e.k).all(|j| r[j] == b[j] + c[j]));
    (exact && rows.iter().any(|&up| up)).then_some(bp)
}

fn rho_domain(e: &DElt, oracle: &BoxOracle) -> Option<BoxPoint> {
    let (bp, rows) = box_rows(e, oracle)?;
    let c = bp.c();
    let b = &e.b[0];
    let all_up = rows.iter().all(|&up| up);
    let strict = e.a.iter().any(|r| (0..e.k).any(|j| r[j] > b[j] + c[j]));
    (all_up && strict).then_some(bp)
}

macro_rules! box_rule {
    ($name:ident, $label:literal, $domain:ident, $split:ident) => {
        pub struct $name {
            pub oracle: Arc<BoxOracle>,
        }

        impl SubdivisionRule<DElt> for $name {
            fn name(&self) -> String {
                $label.into()
            }
            fn applies_to(&self, e: &DElt) -> bool {
                $domain(e, &self.oracle).is_some()
            }
            fn apply(&self, e: &DElt) -> Result<Vec<DElt>, RewriteError> {
                let bp = $domain(e, &self.oracle).ok_or_else(|| failed($label, e, "not in the domain"))?;
                Ok($split(e, &bp, &self.oracle))
            }
        }
    };
}

box_rule!(TauRule, "tau", tau_domain, tau_split);
box_rule!(SigmaRule, "sigma", sigma_domain, sigma_split);
box_rule!(RhoRule, "rho", rho_domain, rho_split);

/// The family for one class, in the dispatch order epsilon, rho, sigma,
/// tau, nu, mu.
pub fn delta_family(oracle: Arc<BoxOracle>) -> RuleFamily<DElt> {
    RuleFamily::new()
        .with(Single(EpsilonRule { oracle: oracle.clone() }))
        .with(Single(RhoRule { oracle: oracle.clone() }))
        .with(Single(SigmaRule { oracle: oracle.clone() }))
        .with(Single(TauRule { oracle: oracle.clone() }))
        .with(NuSchema { oracle: oracle.clone() })
        .with(MuSchema { oracle })
}

/// Maximal cells of the canonical subdivision `Delta_x(e)`.
pub fn delta_x(e: &DElt, oracle: Arc<BoxOracle>, opts: NormalizeOptions) -> Result<BTreeSet<DElt>, RewriteError> {
    normalize(e, &delta_family(oracle), opts)
}
