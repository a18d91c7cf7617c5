//! JSON formats for polytopes, hyperplane arrangements and triangulations.
//!
//! Integers are written as decimal strings and read from strings or JSON
//! integers. Rational coordinates, which only dicing produces, are written as
//! `"p/q"`.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::classic::Hyperplane;
use crate::geometry::linalg::Q;
use crate::geometry::{OrderedSimplex, Polytope, RatPolytope};
use crate::lattice::{IntLattice, IntVector};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

/// An integer given as a JSON integer or a decimal string.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawInt {
    Signed(i64),
    Unsigned(u64),
    Text(String),
}

impl RawInt {
    fn value(&self) -> Result<BigInt, FormatError> {
        match self {
            RawInt::Signed(x) => Ok(BigInt::from(*x)),
            RawInt::Unsigned(x) => Ok(BigInt::from(*x)),
            RawInt::Text(t) => BigInt::from_str(t.trim()).map_err(|_| invalid(format!("not an integer: {t:?}"))),
        }
    }
}

fn read_points(dim: usize, raw: &[Vec<RawInt>]) -> Result<Vec<IntVector>, FormatError> {
    raw.iter()
        .map(|v| {
            if v.len() != dim {
                return Err(invalid(format!("point with {} coordinates in dimension {dim}", v.len())));
            }
            Ok(IntVector(v.iter().map(RawInt::value).collect::<Result<_, _>>()?))
        })
        .collect()
}

fn int_strings(v: &IntVector) -> Vec<String> {
    v.0.iter().map(BigInt::to_string).collect()
}

#[derive(Deserialize)]
struct RawPolytope {
    dim: usize,
    vertices: Vec<Vec<RawInt>>,
}

/// Reads `{"dim": d, "vertices": [[x, ...], ...]}`.
pub fn read_polytope(text: &str) -> Result<Polytope, FormatError> {
    let raw: RawPolytope = serde_json::from_str(text)?;
    let pts = read_points(raw.dim, &raw.vertices)?;
    if pts.is_empty() {
        return Err(invalid("no vertices"));
    }
    Polytope::new(&pts).map_err(|e| invalid(e.to_string()))
}

pub fn polytope_json(p: &Polytope) -> Value {
    serde_json::json!({
        "dim": p.ambient_dim(),
        "vertices": p.vertices().iter().map(int_strings).collect::<Vec<_>>(),
    })
}

#[derive(Deserialize)]
struct RawHyperplane {
    normal: Vec<RawInt>,
    offset: RawInt,
}

#[derive(Deserialize)]
struct RawArrangement {
    dim: usize,
    hyperplanes: Vec<RawHyperplane>,
}

/// Reads `{"dim": d, "hyperplanes": [{"normal": [...], "offset": k}, ...]}`,
/// each hyperplane being `normal . x = offset`.
pub fn read_hyperplanes(text: &str) -> Result<Vec<Hyperplane>, FormatError> {
    let raw: RawArrangement = serde_json::from_str(text)?;
    raw.hyperplanes
        .iter()
        .map(|h| {
            let normal = read_points(raw.dim, std::slice::from_ref(&h.normal))?.remove(0);
            Hyperplane::new(normal, h.offset.value()?).ok_or_else(|| invalid("zero normal"))
        })
        .collect()
}

/// A triangulation or polytopal subdivision with vertices numbered in sorted
/// order and cells given as sorted vertex positions, themselves sorted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangulationFile {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub cells: Vec<Vec<usize>>,
    #[serde(default)]
    pub meta: BTreeMap<String, Value>,
}

impl TriangulationFile {
    pub fn from_int_cells(dim: usize, cells: &[Vec<IntVector>], meta: BTreeMap<String, Value>) -> Self {
        let points: BTreeSet<&IntVector> = cells.iter().flatten().collect();
        let points: Vec<&IntVector> = points.into_iter().collect();
        let mut out: Vec<Vec<usize>> = cells
            .iter()
            .map(|c| {
                let mut idx: Vec<usize> = c.iter().map(|v| points.binary_search(&v).expect("collected")).collect();
                idx.sort();
                idx
            })
            .collect();
        out.sort();
        TriangulationFile { dim, vertices: points.into_iter().map(int_strings).collect(), cells: out, meta }
    }

    pub fn from_simplices(dim: usize, cells: &[OrderedSimplex], meta: BTreeMap<String, Value>) -> Self {
        let cells: Vec<Vec<IntVector>> = cells.iter().map(|s| s.vertices().to_vec()).collect();
        Self::from_int_cells(dim, &cells, meta)
    }

    pub fn from_rat_cells(dim: usize, cells: &[RatPolytope], meta: BTreeMap<String, Value>) -> Self {
        let points: BTreeSet<&Vec<Q>> = cells.iter().flat_map(|c| c.vertices()).collect();
        let points: Vec<&Vec<Q>> = points.into_iter().collect();
        let mut out: Vec<Vec<usize>> = cells
            .iter()
            .map(|c| {
                let mut idx: Vec<usize> = c.vertices().iter().map(|v| points.binary_search(&v).expect("collected")).collect();
                idx.sort();
                idx
            })
            .collect();
        out.sort();
        let vertices = points.into_iter().map(|v| v.iter().map(Q::to_string).collect()).collect();
        TriangulationFile { dim, vertices, cells: out, meta }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let value: Value = serde_json::from_str(text)?;
        // pipeline outputs nest the triangulation under a key
        let inner = match value.get("triangulation") {
            Some(t) => t.clone(),
            None => value,
        };
        let file: TriangulationFile = serde_json::from_value(inner)?;
        file.check()?;
        Ok(file)
    }

    fn check(&self) -> Result<(), FormatError> {
        if let Some(v) = self.vertices.iter().find(|v| v.len() != self.dim) {
            return Err(invalid(format!("vertex {v:?} does not have {} coordinates", self.dim)));
        }
        if let Some(c) = self.cells.iter().find(|c| c.iter().any(|&i| i >= self.vertices.len())) {
            return Err(invalid(format!("cell {c:?} refers to a missing vertex")));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("serializable");
        s.push('\n');
        s
    }

    fn rat_vertices(&self) -> Result<Vec<Vec<Q>>, FormatError> {
        self.vertices
            .iter()
            .map(|v| v.iter().map(|x| Q::from_str(x.trim()).map_err(|_| invalid(format!("not a rational number: {x:?}")))).collect())
            .collect()
    }

    /// Cells as lists of integral points; fails on rational vertices.
    pub fn int_cells(&self) -> Result<Vec<Vec<IntVector>>, FormatError> {
        let points: Vec<IntVector> = self
            .rat_vertices()?
            .into_iter()
            .map(|v| {
                if v.iter().all(|x| x.is_integer()) {
                    Ok(IntVector(v.into_iter().map(|x| x.to_integer()).collect()))
                } else {
                    Err(invalid(format!("vertex {v:?} is not integral")))
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(self.cells.iter().map(|c| c.iter().map(|&i| points[i].clone()).collect()).collect())
    }

    pub fn rat_cells(&self) -> Result<Vec<RatPolytope>, FormatError> {
        let points = self.rat_vertices()?;
        self.cells
            .iter()
            .map(|c| {
                let pts: Vec<Vec<Q>> = c.iter().map(|&i| points[i].clone()).collect();
                RatPolytope::new(&pts).map_err(|e| invalid(e.to_string()))
            })
            .collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cells.iter().all(|c| c.len() == self.dim + 1)
    }

    /// The cells in OFF format: every triangle of every simplex, with planar
    /// input lifted to `z = 0`.
    pub fn to_off(&self) -> Result<String, FormatError> {
        if !(2..=3).contains(&self.dim) || !self.is_simplicial() {
            return Err(invalid("OFF export needs triangles or tetrahedra"));
        }
        let points = self.rat_vertices()?;
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in &self.cells {
            if self.dim == 2 {
                faces.insert(c.clone());
            } else {
                for skip in 0..4 {
                    faces.insert(c.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect());
                }
            }
        }
        let mut out = format!("OFF\n{} {} 0\n", points.len(), faces.len());
        for p in &points {
            let mut coords: Vec<String> = p.iter().map(fmt_coord).collect();
            if self.dim == 2 {
                coords.push("0".into());
            }
            out.push_str(&coords.join(" "));
            out.push('\n');
        }
        for f in &faces {
            out.push_str(&format!("3 {} {} {}\n", f[0], f[1], f[2]));
        }
        Ok(out)
    }
}

fn fmt_coord(x: &Q) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        x.to_f64().map_or_else(|| x.to_string(), |f| f.to_string())
    }
}

pub fn lattice_json(l: &IntLattice) -> Value {
    serde_json::json!({
        "basis": l.basis().iter().map(int_strings).collect::<Vec<_>>(),
        "index": l.index().to_string(),
    })
}

/// `[{"basis": ..., "index": ..., "cells": n}, ...]` for a lattice multiset.
pub fn multiset_json(m: &BTreeMap<IntLattice, usize>) -> Value {
    Value::Array(
        m.iter()
            .map(|(l, n)| {
                let mut v = lattice_json(l);
                v["cells"] = Value::from(*n);
                v
            })
            .collect(),
    )
}
