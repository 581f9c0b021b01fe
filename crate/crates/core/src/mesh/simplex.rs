use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque vertex label; the integer value gives the global vertex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parity (0 or 1) of the permutation taking `from` to `to`.
///
/// Both slices must hold the same distinct elements.
pub fn permutation_parity<T: Ord + Copy>(from: &[T], to: &[T]) -> usize {
    let pos: BTreeMap<T, usize> = to.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let idx: Vec<usize> = from.iter().map(|v| pos[v]).collect();
    let mut inv = 0;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

/// A simplex with one stored vertex ordering; even reorderings are the same
/// orientation. The empty simplex has dimension minus infinity, reported as
/// `None` by [`OrientedSimplex::dim`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrientedSimplex {
    vertices: Vec<VertexId>,
}

impl OrientedSimplex {
    pub fn new(vertices: Vec<VertexId>) -> Result<Self> {
        let mut sorted = vertices.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != vertices.len() {
            return Err(Error::Structure(format!(
                "repeated vertex in simplex {:?}",
                vertices.iter().map(|v| v.0).collect::<Vec<_>>()
            )));
        }
        Ok(OrientedSimplex { vertices })
    }

    /// Builds from raw labels; panics on repeated labels.
    pub fn from_ids(ids: &[u32]) -> Self {
        Self::new(ids.iter().map(|&i| VertexId(i)).collect()).expect("distinct vertices")
    }

    pub fn empty() -> Self {
        OrientedSimplex { vertices: vec![] }
    }

    pub fn point(v: VertexId) -> Self {
        OrientedSimplex { vertices: vec![v] }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn ids(&self) -> Vec<u32> {
        self.vertices.iter().map(|v| v.0).collect()
    }

    /// Number of vertices.
    pub fn card(&self) -> usize {
        self.vertices.len()
    }

    pub fn dim(&self) -> Option<usize> {
        self.vertices.len().checked_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    /// Sorted vertex set, the orientation-free identity of the simplex.
    pub fn key(&self) -> Vec<VertexId> {
        let mut k = self.vertices.clone();
        k.sort();
        k
    }

    /// Same vertices in increasing order, with the sign relating the two orientations.
    pub fn normalized(&self) -> (OrientedSimplex, i64) {
        let k = self.key();
        let s = if permutation_parity(&self.vertices, &k) == 0 {
            1
        } else {
            -1
        };
        (OrientedSimplex { vertices: k }, s)
    }

    pub fn same_cell(&self, other: &OrientedSimplex) -> bool {
        self.key() == other.key()
    }

    /// `+1` if both orderings define the same orientation, `-1` otherwise.
    pub fn orientation_relative_to(&self, other: &OrientedSimplex) -> Result<i64> {
        if !self.same_cell(other) {
            return Err(Error::Structure("orientation comparison of different cells".into()));
        }
        Ok(if permutation_parity(&self.vertices, &other.vertices) == 0 {
            1
        } else {
            -1
        })
    }

    pub fn reversed(&self) -> OrientedSimplex {
        let mut v = self.vertices.clone();
        if v.len() >= 2 {
            v.swap(0, 1);
        }
        OrientedSimplex { vertices: v }
    }

    /// Subsequence spanned by vertices satisfying `keep`, in stored order.
    pub fn sub(&self, keep: impl Fn(VertexId) -> bool) -> OrientedSimplex {
        OrientedSimplex {
            vertices: self.vertices.iter().copied().filter(|&v| keep(v)).collect(),
        }
    }

    /// Face obtained by deleting the vertex at `pos`.
    pub fn delete(&self, pos: usize) -> OrientedSimplex {
        let mut v = self.vertices.clone();
        v.remove(pos);
        OrientedSimplex { vertices: v }
    }

    /// Whether every vertex of `self` is a vertex of `other`.
    pub fn is_face_of(&self, other: &OrientedSimplex) -> bool {
        self.vertices.iter().all(|v| other.contains(*v))
    }

    /// All `k`-dimensional faces in subsequence order.
    pub fn faces(&self, k: usize) -> Result<Vec<OrientedSimplex>> {
        let p = self
            .dim()
            .ok_or_else(|| Error::Dimension("the empty simplex has no faces of dimension >= 0".into()))?;
        if k > p {
            return Err(Error::Dimension(format!(
                "face dimension {k} exceeds simplex dimension {p}"
            )));
        }
        Ok(combinations(self.vertices.len(), k + 1)
            .into_iter()
            .map(|c| OrientedSimplex {
                vertices: c.into_iter().map(|i| self.vertices[i]).collect(),
            })
            .collect())
    }

    /// Every nonempty face, including the simplex itself.
    pub fn all_faces(&self) -> Vec<OrientedSimplex> {
        let mut out = Vec::new();
        if let Some(p) = self.dim() {
            for k in 0..=p {
                out.extend(self.faces(k).unwrap());
            }
        }
        out
    }
}

impl fmt::Display for OrientedSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Index subsets of size `k` of `0..n`, lexicographic.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Formal integer combination of oriented cells, stored on normalized keys.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Chain<K: Ord> {
    terms: BTreeMap<K, i64>,
}

impl<K: Ord + Clone> Chain<K> {
    pub fn new() -> Self {
        Chain { terms: BTreeMap::new() }
    }

    pub fn add(&mut self, key: K, c: i64) {
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn coefficient(&self, key: &K) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &i64)> {
        self.terms.iter()
    }
}

pub type SimplexChain = Chain<OrientedSimplex>;

impl SimplexChain {
    pub fn add_simplex(&mut self, s: &OrientedSimplex, c: i64) {
        let (n, sg) = s.normalized();
        self.add(n, c * sg);
    }

    /// Coefficient of `s` with its own orientation.
    pub fn coefficient_of(&self, s: &OrientedSimplex) -> i64 {
        let (n, sg) = s.normalized();
        self.coefficient(&n) * sg
    }

    pub fn boundary(&self) -> SimplexChain {
        let mut out = SimplexChain::new();
        for (s, c) in self.iter() {
            if s.card() >= 2 {
                for (f, sg) in boundary_chain(s).iter() {
                    out.add(f.clone(), c * sg);
                }
            }
        }
        out
    }
}

/// The incidence number `[s; f]` of a codimension-1 face.
pub fn incidence_number(s: &OrientedSimplex, f: &OrientedSimplex) -> Result<i64> {
    if f.card() + 1 != s.card() || !f.is_face_of(s) {
        return Err(Error::Incidence(format!("{f} is not a codimension-1 face of {s}")));
    }
    let pos = s
        .vertices()
        .iter()
        .position(|v| !f.contains(*v))
        .expect("one vertex is missing");
    let induced = s.delete(pos);
    let parity = permutation_parity(induced.vertices(), f.vertices());
    Ok(if (pos + parity).is_multiple_of(2) { 1 } else { -1 })
}

/// `∂s = Σ_i (-1)^i (s with vertex i deleted)`.
pub fn boundary_chain(s: &OrientedSimplex) -> SimplexChain {
    let mut out = SimplexChain::new();
    if s.card() < 2 {
        return out;
    }
    for i in 0..s.card() {
        out.add_simplex(&s.delete(i), if i % 2 == 0 { 1 } else { -1 });
    }
    out
}

/// Iterated join: the simplex on the concatenated vertex lists.
pub fn join(parts: &[OrientedSimplex]) -> Result<OrientedSimplex> {
    let all: Vec<VertexId> = parts.iter().flat_map(|p| p.vertices().iter().copied()).collect();
    OrientedSimplex::new(all).map_err(|_| Error::Structure("join of simplices sharing a vertex".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(ids: &[u32]) -> OrientedSimplex {
        OrientedSimplex::from_ids(ids)
    }

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn faces_in_subsequence_order() {
        let f = s(&[0, 1, 2]).faces(1).unwrap();
        assert_eq!(f, vec![s(&[0, 1]), s(&[0, 2]), s(&[1, 2])]);
        assert_eq!(s(&[0, 1]).faces(0).unwrap(), vec![s(&[0]), s(&[1])]);
        assert_eq!(s(&[0, 1, 2, 3]).faces(2).unwrap().len(), 4);
        assert!(s(&[0, 1]).faces(2).is_err());
    }

    #[test]
    fn edge_incidences() {
        assert_eq!(incidence_number(&s(&[0, 1]), &s(&[1])).unwrap(), 1);
        assert_eq!(incidence_number(&s(&[0, 1]), &s(&[0])).unwrap(), -1);
        assert!(incidence_number(&s(&[0, 1, 2]), &s(&[0])).is_err());
    }

    #[test]
    fn triangle_boundary() {
        let b = boundary_chain(&s(&[0, 1, 2]));
        assert_eq!(b.coefficient_of(&s(&[1, 2])), 1);
        assert_eq!(b.coefficient_of(&s(&[0, 2])), -1);
        assert_eq!(b.coefficient_of(&s(&[0, 1])), 1);
        assert_eq!(b.coefficient_of(&s(&[2, 0])), 1);
        assert!(b.boundary().is_zero());
    }

    #[test]
    fn joins() {
        assert_eq!(join(&[s(&[1]), s(&[2])]).unwrap(), s(&[1, 2]));
        assert_eq!(join(&[s(&[1, 2]), s(&[3])]).unwrap().dim(), Some(2));
        assert!(join(&[s(&[1, 2]), s(&[2])]).is_err());
    }
}
