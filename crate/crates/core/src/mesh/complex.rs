use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::simplex::{OrientedSimplex, VertexId};
use crate::error::{Error, Result};

/// Finite abstract simplicial complex stored by its maximal simplices.
///
/// Every simplex is oriented by increasing vertex label.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertices: BTreeSet<VertexId>,
    maximal: Vec<OrientedSimplex>,
    index: HashSet<Vec<VertexId>>,
}

/// On-disk form: `{"vertices":[…], "maximal_simplices":[[…],…]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: Vec<u32>,
    pub maximal_simplices: Vec<Vec<u32>>,
}

impl SimplicialComplex {
    /// Validates and indexes. Vertices that lie in no listed simplex become
    /// maximal 0-simplices.
    pub fn new(vertices: &[u32], maximal: &[Vec<u32>]) -> Result<Self> {
        let mut vset = BTreeSet::new();
        for &v in vertices {
            if !vset.insert(VertexId(v)) {
                return Err(Error::Validation(format!("vertex {v} listed twice")));
            }
        }
        let mut cells: Vec<OrientedSimplex> = Vec::new();
        for m in maximal {
            if m.is_empty() {
                return Err(Error::Validation("empty maximal simplex".into()));
            }
            let s = OrientedSimplex::new(m.iter().map(|&v| VertexId(v)).collect())
                .map_err(|_| Error::Validation(format!("simplex {m:?} repeats a vertex")))?;
            if let Some(v) = s.vertices().iter().find(|v| !vset.contains(v)) {
                return Err(Error::Validation(format!("simplex {m:?} uses undeclared vertex {v}")));
            }
            let (n, _) = s.normalized();
            if cells.contains(&n) {
                return Err(Error::Validation(format!("simplex {m:?} listed twice")));
            }
            cells.push(n);
        }
        for a in &cells {
            if let Some(b) = cells.iter().find(|b| *b != a && a.is_face_of(b)) {
                return Err(Error::Validation(format!("simplex {a} is a face of {b}, not maximal")));
            }
        }
        let covered: BTreeSet<VertexId> = cells.iter().flat_map(|c| c.vertices().to_vec()).collect();
        for v in &vset {
            if !covered.contains(v) {
                cells.push(OrientedSimplex::point(*v));
            }
        }
        cells.sort();
        let mut index = HashSet::new();
        for c in &cells {
            for f in c.all_faces() {
                index.insert(f.key());
            }
        }
        Ok(SimplicialComplex {
            vertices: vset,
            maximal: cells,
            index,
        })
    }

    pub fn from_file(f: &ComplexFile) -> Result<Self> {
        Self::new(&f.vertices, &f.maximal_simplices)
    }

    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            vertices: self.vertices.iter().map(|v| v.0).collect(),
            maximal_simplices: self.maximal.iter().map(|m| m.ids()).collect(),
        }
    }

    /// The full simplex on `vertices`.
    pub fn simplex(ids: &[u32]) -> Self {
        Self::new(ids, &[ids.to_vec()]).expect("valid simplex")
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn maximal(&self) -> &[OrientedSimplex] {
        &self.maximal
    }

    pub fn dim(&self) -> usize {
        self.maximal.iter().filter_map(|m| m.dim()).max().unwrap_or(0)
    }

    /// Whether the vertex set spans a simplex (order ignored).
    pub fn contains(&self, vs: &[VertexId]) -> bool {
        if vs.is_empty() {
            return true;
        }
        let mut k = vs.to_vec();
        k.sort();
        self.index.contains(&k)
    }

    /// Every nonempty simplex, by dimension then label order.
    pub fn simplices(&self) -> Vec<OrientedSimplex> {
        let mut all: Vec<Vec<VertexId>> = self.index.iter().cloned().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        all.into_iter().map(|k| OrientedSimplex::new(k).unwrap()).collect()
    }

    pub fn simplices_of_dim(&self, k: usize) -> Vec<OrientedSimplex> {
        self.simplices().into_iter().filter(|s| s.dim() == Some(k)).collect()
    }
}

/// Simplicial map given on vertices.
#[derive(Clone, Debug)]
pub struct SimplicialMorphism {
    pub source: SimplicialComplex,
    pub target: SimplicialComplex,
    vertex_map: BTreeMap<VertexId, VertexId>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Label {
    Int(u32),
    Str(String),
}

impl Label {
    fn value(&self) -> Result<u32> {
        match self {
            Label::Int(v) => Ok(*v),
            Label::Str(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Validation(format!("bad vertex label {s:?}"))),
        }
    }
}

/// On-disk form: `{"vertex_map":{"<src>":"<dst>",…}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismFile {
    vertex_map: BTreeMap<String, Label>,
    /// Target complex; when absent the image complex is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ComplexFile>,
}

impl MorphismFile {
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        MorphismFile {
            vertex_map: pairs
                .iter()
                .map(|(a, b)| (a.to_string(), Label::Str(b.to_string())))
                .collect(),
            target: None,
        }
    }

    pub fn pairs(&self) -> Result<Vec<(u32, u32)>> {
        self.vertex_map
            .iter()
            .map(|(k, v)| Ok((Label::Str(k.clone()).value()?, v.value()?)))
            .collect()
    }
}

impl SimplicialMorphism {
    pub fn new(source: SimplicialComplex, target: SimplicialComplex, pairs: &[(u32, u32)]) -> Result<Self> {
        let mut vertex_map = BTreeMap::new();
        for &(a, b) in pairs {
            if vertex_map.insert(VertexId(a), VertexId(b)).is_some() {
                return Err(Error::Validation(format!("vertex {a} mapped twice")));
            }
            if !source.vertices.contains(&VertexId(a)) {
                return Err(Error::Validation(format!(
                    "mapped vertex {a} is not in the source complex"
                )));
            }
            if !target.vertices.contains(&VertexId(b)) {
                return Err(Error::Validation(format!(
                    "image {b} of vertex {a} is not in the target complex"
                )));
            }
        }
        if let Some(v) = source.vertices().find(|v| !vertex_map.contains_key(v)) {
            return Err(Error::Validation(format!("source vertex {v} has no image")));
        }
        let m = SimplicialMorphism {
            source,
            target,
            vertex_map,
        };
        for s in &m.source.maximal {
            let img = m.image(s);
            if !m.target.contains(img.vertices()) {
                return Err(Error::Validation(format!(
                    "image {img} of simplex {s} is not a simplex of the target"
                )));
            }
        }
        Ok(m)
    }

    /// Uses the file's target complex, or the image complex when none is given.
    pub fn from_file(source: SimplicialComplex, f: &MorphismFile) -> Result<Self> {
        let pairs = f.pairs()?;
        match &f.target {
            Some(t) => Self::new(source, SimplicialComplex::from_file(t)?, &pairs),
            None => Self::onto_image(source, &pairs),
        }
    }

    /// Target is the complex spanned by the images of the source simplices.
    pub fn onto_image(source: SimplicialComplex, pairs: &[(u32, u32)]) -> Result<Self> {
        let map: BTreeMap<u32, u32> = pairs.iter().copied().collect();
        let mut cells: BTreeSet<Vec<u32>> = BTreeSet::new();
        for m in source.maximal() {
            let mut img: Vec<u32> = Vec::new();
            for v in m.vertices() {
                let y = *map
                    .get(&v.0)
                    .ok_or_else(|| Error::Validation(format!("source vertex {v} has no image")))?;
                if !img.contains(&y) {
                    img.push(y);
                }
            }
            img.sort();
            cells.insert(img);
        }
        let maximal: Vec<Vec<u32>> = cells
            .iter()
            .filter(|a| {
                !cells
                    .iter()
                    .any(|b| b.len() > a.len() && a.iter().all(|v| b.contains(v)))
            })
            .cloned()
            .collect();
        let verts: BTreeSet<u32> = map.values().copied().collect();
        let verts: Vec<u32> = verts.into_iter().collect();
        let target = SimplicialComplex::new(&verts, &maximal)?;
        Self::new(source, target, pairs)
    }

    pub fn to_file(&self) -> MorphismFile {
        MorphismFile::from_pairs(&self.pairs())
    }

    pub fn map_vertex(&self, v: VertexId) -> VertexId {
        self.vertex_map[&v]
    }

    /// Image simplex, oriented by increasing label.
    pub fn image(&self, s: &OrientedSimplex) -> OrientedSimplex {
        let set: BTreeSet<VertexId> = s.vertices().iter().map(|v| self.vertex_map[v]).collect();
        OrientedSimplex::new(set.into_iter().collect()).unwrap()
    }

    /// `σ ∩ f^{-1}(τ′)`: vertices of `s` lying over vertices of `face`.
    pub fn restrict_over(&self, s: &OrientedSimplex, face: &OrientedSimplex) -> OrientedSimplex {
        s.sub(|v| face.contains(self.vertex_map[&v]))
    }

    /// Simplices of the source mapping onto exactly `tau`.
    pub fn simplices_over(&self, tau: &OrientedSimplex) -> Vec<OrientedSimplex> {
        self.source
            .simplices()
            .into_iter()
            .filter(|s| self.image(s).same_cell(tau))
            .collect()
    }

    /// Those simplices over `tau` not properly contained in another one over `tau`.
    pub fn maximal_over(&self, tau: &OrientedSimplex) -> Vec<OrientedSimplex> {
        let all = self.simplices_over(tau);
        all.iter()
            .filter(|s| !all.iter().any(|b| b.card() > s.card() && s.is_face_of(b)))
            .cloned()
            .collect()
    }

    /// Fibers `σ_j = σ ∩ f^{-1}(y_j)` in the order of `tau`'s vertices.
    pub fn fibers(&self, s: &OrientedSimplex, tau: &OrientedSimplex) -> Vec<OrientedSimplex> {
        tau.vertices()
            .iter()
            .map(|y| s.sub(|v| self.vertex_map[&v] == *y))
            .collect()
    }

    /// `dim σ − dim f(σ)`.
    pub fn relative_dim(&self, s: &OrientedSimplex) -> usize {
        s.dim().unwrap_or(0) - self.image(s).dim().unwrap_or(0)
    }

    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.vertex_map.iter().map(|(a, b)| (a.0, b.0)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(SimplicialComplex::new(&[0, 1], &[vec![0, 2]]).is_err());
        assert!(SimplicialComplex::new(&[0, 1, 2], &[vec![0, 1, 2], vec![0, 1]]).is_err());
        assert!(SimplicialComplex::new(&[0, 1], &[vec![0, 0]]).is_err());
    }

    #[test]
    fn face_index() {
        let c = SimplicialComplex::new(&[0, 1, 2, 3], &[vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert!(c.contains(&[VertexId(2), VertexId(0)]));
        assert!(!c.contains(&[VertexId(0), VertexId(3)]));
        assert_eq!(c.simplices().len(), 7 + 2);
    }

    #[test]
    fn morphism_validation() {
        let src = SimplicialComplex::simplex(&[10, 11, 12]);
        let tgt = SimplicialComplex::simplex(&[0, 1]);
        assert!(SimplicialMorphism::new(src.clone(), tgt.clone(), &[(10, 0), (11, 1), (12, 1)]).is_ok());
        assert!(SimplicialMorphism::new(src.clone(), tgt.clone(), &[(10, 0), (11, 1)]).is_err());
        let tgt2 = SimplicialComplex::new(&[0, 1, 2], &[vec![0, 1], vec![1, 2]]).unwrap();
        assert!(SimplicialMorphism::new(src, tgt2, &[(10, 0), (11, 1), (12, 2)]).is_err());
    }
}
