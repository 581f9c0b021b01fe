use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{OrientedPrism, OrientedSimplex, VertexId};

/// Tag of a coordinate group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    /// Barycentric coordinates `λ` of a simplex of the source complex.
    Lambda,
    /// Base coordinates `t` of a simplex of the target complex.
    Param,
    /// Fiber coordinates `μ_y` of the factor lying over base vertex `y`
    /// (or over factor index `y` for a free-standing prism).
    Fiber(u32),
}

/// A group of barycentric coordinates that sum to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoordGroup {
    pub kind: GroupKind,
    pub vertices: Vec<VertexId>,
}

/// Ordered coordinate groups; variable `i` is a vertex of some group.
///
/// Variable names are `l:<v>`, `t:<y>` and `m:<y>:<v>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoordSystem {
    groups: Vec<CoordGroup>,
    offsets: Vec<usize>,
    nvars: usize,
}

impl CoordSystem {
    pub fn new(groups: Vec<CoordGroup>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(groups.len());
        let mut n = 0;
        for g in &groups {
            if g.vertices.is_empty() {
                return Err(Error::Structure("empty coordinate group".into()));
            }
            offsets.push(n);
            n += g.vertices.len();
        }
        let cs = CoordSystem {
            groups,
            offsets,
            nvars: n,
        };
        let mut names: Vec<String> = (0..n).map(|i| cs.var_name(i)).collect();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structure("duplicate coordinate name".into()));
        }
        Ok(cs)
    }

    /// One `λ` group on the simplex's vertices, in stored order.
    pub fn simplex(s: &OrientedSimplex) -> Self {
        Self::new(vec![CoordGroup {
            kind: GroupKind::Lambda,
            vertices: s.vertices().to_vec(),
        }])
        .expect("nonempty simplex")
    }

    /// One `μ` group per factor, labelled by factor index.
    pub fn prism(p: &OrientedPrism) -> Self {
        Self::new(
            p.factors
                .iter()
                .enumerate()
                .map(|(i, f)| CoordGroup {
                    kind: GroupKind::Fiber(i as u32),
                    vertices: f.vertices().to_vec(),
                })
                .collect(),
        )
        .expect("nonempty factors")
    }

    /// Context of `τ × σ_0 × … × σ_s`: a `t` group, then one `μ` group per base vertex.
    pub fn trivialized(tau: &OrientedSimplex, fibers: &[OrientedSimplex]) -> Self {
        assert_eq!(tau.card(), fibers.len());
        let mut groups = vec![CoordGroup {
            kind: GroupKind::Param,
            vertices: tau.vertices().to_vec(),
        }];
        for (y, f) in tau.vertices().iter().zip(fibers) {
            groups.push(CoordGroup {
                kind: GroupKind::Fiber(y.0),
                vertices: f.vertices().to_vec(),
            });
        }
        Self::new(groups).expect("nonempty fibers")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn groups(&self) -> &[CoordGroup] {
        &self.groups
    }

    /// Variable indices of group `g`.
    pub fn group_vars(&self, g: usize) -> std::ops::Range<usize> {
        self.offsets[g]..self.offsets[g] + self.groups[g].vertices.len()
    }

    pub fn group_of(&self, i: usize) -> usize {
        match self.offsets.binary_search(&i) {
            Ok(g) => {
                // Skip nothing: offsets are strictly increasing.
                g
            }
            Err(g) => g - 1,
        }
    }

    pub fn find_group(&self, kind: GroupKind) -> Option<usize> {
        self.groups.iter().position(|g| g.kind == kind)
    }

    pub fn var(&self, kind: GroupKind, v: VertexId) -> Option<usize> {
        let g = self.find_group(kind)?;
        let p = self.groups[g].vertices.iter().position(|&w| w == v)?;
        Some(self.offsets[g] + p)
    }

    /// Indices of the given vertices inside one group, in the given order.
    pub fn vars_of(&self, kind: GroupKind, vs: &[VertexId]) -> Result<Vec<usize>> {
        vs.iter()
            .map(|v| {
                self.var(kind, *v)
                    .ok_or_else(|| Error::Structure(format!("vertex {v} has no coordinate in group {kind:?}")))
            })
            .collect()
    }

    /// Vertex and group kind of variable `i`.
    pub fn describe(&self, i: usize) -> (GroupKind, VertexId) {
        let g = self.group_of(i);
        (self.groups[g].kind, self.groups[g].vertices[i - self.offsets[g]])
    }

    pub fn var_name(&self, i: usize) -> String {
        match self.describe(i) {
            (GroupKind::Lambda, v) => format!("l:{v}"),
            (GroupKind::Param, v) => format!("t:{v}"),
            (GroupKind::Fiber(y), v) => format!("m:{y}:{v}"),
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        (0..self.nvars).map(|i| self.var_name(i)).collect()
    }

    pub fn parse_var(&self, name: &str) -> Option<usize> {
        let parts: Vec<&str> = name.split(':').collect();
        let num = |s: &str| s.parse::<u32>().ok();
        match parts.as_slice() {
            ["l", v] => self.var(GroupKind::Lambda, VertexId(num(v)?)),
            ["t", v] => self.var(GroupKind::Param, VertexId(num(v)?)),
            ["m", y, v] => self.var(GroupKind::Fiber(num(y)?), VertexId(num(v)?)),
            _ => None,
        }
    }

    /// The eliminated variable of each group (its last one).
    pub fn eliminated(&self) -> Vec<usize> {
        (0..self.groups.len()).map(|g| self.group_vars(g).end - 1).collect()
    }

    /// Variables kept by canonical reduction.
    pub fn free_vars(&self) -> Vec<usize> {
        (0..self.groups.len())
            .flat_map(|g| {
                let r = self.group_vars(g);
                r.start..r.end - 1
            })
            .collect()
    }

    /// Sum of the dimensions of the groups, the dimension of the cell.
    pub fn cell_dim(&self) -> usize {
        self.groups.iter().map(|g| g.vertices.len() - 1).sum()
    }

    /// New system with the same groups except `keep` filters vertices;
    /// groups left empty are dropped. Returns the index map old → new.
    pub fn restricted(&self, keep: impl Fn(GroupKind, VertexId) -> bool) -> Result<(CoordSystem, Vec<Option<usize>>)> {
        let mut groups = Vec::new();
        for g in &self.groups {
            let vs: Vec<VertexId> = g.vertices.iter().copied().filter(|v| keep(g.kind, *v)).collect();
            if !vs.is_empty() {
                groups.push(CoordGroup {
                    kind: g.kind,
                    vertices: vs,
                });
            }
        }
        let out = CoordSystem::new(groups)?;
        let map = (0..self.nvars)
            .map(|i| {
                let (k, v) = self.describe(i);
                out.var(k, v)
            })
            .collect();
        Ok((out, map))
    }

    /// Index map into another system by coordinate name.
    pub fn embedding_into(&self, other: &CoordSystem) -> Vec<Option<usize>> {
        (0..self.nvars)
            .map(|i| {
                let (k, v) = self.describe(i);
                other.var(k, v)
            })
            .collect()
    }
}

impl fmt::Display for CoordSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|g| {
                let tag = match g.kind {
                    GroupKind::Lambda => "l".to_string(),
                    GroupKind::Param => "t".to_string(),
                    GroupKind::Fiber(y) => format!("m:{y}"),
                };
                let vs: Vec<String> = g.vertices.iter().map(|v| v.to_string()).collect();
                format!("{tag}[{}]", vs.join(","))
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        let tau = OrientedSimplex::from_ids(&[0, 1]);
        let ctx = CoordSystem::trivialized(
            &tau,
            &[OrientedSimplex::from_ids(&[10]), OrientedSimplex::from_ids(&[11, 12])],
        );
        assert_eq!(ctx.nvars(), 5);
        for i in 0..ctx.nvars() {
            assert_eq!(ctx.parse_var(&ctx.var_name(i)), Some(i));
        }
        assert_eq!(ctx.var_name(4), "m:1:12");
        assert_eq!(ctx.group_of(2), 1);
        assert_eq!(ctx.group_of(3), 2);
        assert_eq!(ctx.free_vars(), vec![0, 3]);
    }
}
