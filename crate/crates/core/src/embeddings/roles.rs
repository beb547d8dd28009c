use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CitationGraph;

/// Per-node motif counts used to derive structural roles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralFeatures {
    pub degree: Vec<usize>,
    /// Triangles incident to each node.
    pub triangles: Vec<usize>,
}

impl StructuralFeatures {
    pub fn len(&self) -> usize {
        self.degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degree.is_empty()
    }
}

pub fn structural_features(g: &CitationGraph) -> StructuralFeatures {
    let n = g.node_count();
    let mut triangles = vec![0usize; n];
    // each triangle u < v < w is found once, from its lowest edge (u, v)
    for e in g.edges() {
        let (a, b) = (g.neighbors(e.u), g.neighbors(e.v));
        let (mut i, mut j) = (a.partition_point(|&x| x <= e.v), b.partition_point(|&x| x <= e.v));
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    triangles[e.u] += 1;
                    triangles[e.v] += 1;
                    triangles[a[i]] += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    StructuralFeatures {
        degree: (0..n).map(|u| g.degree(u)).collect(),
        triangles,
    }
}

/// Node → role map; roles are `0..role_count`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleAssignment {
    pub roles: Vec<usize>,
    pub role_count: usize,
}

/// `floor(log_base(1 + x))`, computed without floating-point edge errors at
/// exact powers of the base.
pub fn log_bin(x: usize, base: f64) -> usize {
    let v = 1.0 + x as f64;
    let mut k = (v.ln() / base.ln()).floor().max(0.0) as i32;
    while base.powi(k + 1) <= v {
        k += 1;
    }
    while k > 0 && base.powi(k) > v {
        k -= 1;
    }
    k as usize
}

/// Assigns roles to arbitrary per-node feature tuples: equal tuples share a
/// role, and roles are numbered in first-seen node order.
pub fn roles_from_tuples<I>(tuples: I) -> RoleAssignment
where
    I: IntoIterator<Item = Vec<usize>>,
{
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let roles: Vec<usize> = tuples
        .into_iter()
        .map(|t| {
            let next = ids.len();
            *ids.entry(t).or_insert(next)
        })
        .collect();
    RoleAssignment {
        role_count: ids.len(),
        roles,
    }
}

/// Roles from logarithmically binned `(degree, triangles)` tuples.
pub fn assign_roles(f: &StructuralFeatures, log_base: f64) -> Result<RoleAssignment> {
    if !(log_base > 1.0 && log_base.is_finite()) {
        return Err(Error::InvalidConfig(format!("log base must exceed 1, got {log_base}")));
    }
    Ok(roles_from_tuples(
        f.degree
            .iter()
            .zip(&f.triangles)
            .map(|(&d, &t)| vec![log_bin(d, log_base), log_bin(t, log_base)]),
    ))
}
