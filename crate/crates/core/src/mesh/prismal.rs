use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::prism::OrientedPrism;
use super::simplex::{OrientedSimplex, VertexId};
use crate::error::{Error, Result};

/// Prismal set stored by its maximal prisms; faces are implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrismalSet {
    pub prisms: Vec<OrientedPrism>,
}

impl PrismalSet {
    pub fn dim(&self) -> usize {
        self.prisms.iter().map(|p| p.dim()).max().unwrap_or(0)
    }
}

/// Map of one prism into another, linear in the barycentric coordinates of
/// each factor. It is given on vertex tuples and extended multi-affinely:
/// the target coordinate of `(m, w)` is `Σ_{v: image(v)_m = w} Π_i μ_{i,v_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrismalMorphism {
    pub source: OrientedPrism,
    pub target: OrientedPrism,
    pub images: BTreeMap<Vec<VertexId>, Vec<VertexId>>,
}

/// How one target factor depends on the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorDependence {
    Constant(VertexId),
    /// Simplicial map from source factor `factor`.
    Factor {
        factor: usize,
        map: BTreeMap<VertexId, VertexId>,
        iso: bool,
    },
}

impl PrismalMorphism {
    pub fn new(
        source: OrientedPrism,
        target: OrientedPrism,
        images: BTreeMap<Vec<VertexId>, Vec<VertexId>>,
    ) -> Result<Self> {
        for t in source.vertex_tuples() {
            let img = images
                .get(&t)
                .ok_or_else(|| Error::Structure(format!("vertex tuple {t:?} has no image")))?;
            if img.len() != target.factors.len() || img.iter().zip(&target.factors).any(|(w, f)| !f.contains(*w)) {
                return Err(Error::Structure(format!("image {img:?} is not a vertex of {target}")));
            }
        }
        Ok(PrismalMorphism { source, target, images })
    }

    /// Product of per-factor simplicial maps `g_m: source[src[m]] → target[m]`.
    pub fn factorwise(source: OrientedPrism, target: OrientedPrism, parts: &[FactorDependence]) -> Result<Self> {
        let mut images = BTreeMap::new();
        for t in source.vertex_tuples() {
            let img: Vec<VertexId> = parts
                .iter()
                .map(|d| match d {
                    FactorDependence::Constant(w) => *w,
                    FactorDependence::Factor { factor, map, .. } => map[&t[*factor]],
                })
                .collect();
            images.insert(t, img);
        }
        Self::new(source, target, images)
    }

    pub fn identity(p: &OrientedPrism) -> Self {
        let images = p.vertex_tuples().into_iter().map(|t| (t.clone(), t)).collect();
        PrismalMorphism {
            source: p.clone(),
            target: p.clone(),
            images,
        }
    }

    /// Smallest face of the target containing the image, factor by factor.
    pub fn image_prism(&self) -> OrientedPrism {
        let factors = self
            .target
            .factors
            .iter()
            .enumerate()
            .map(|(m, f)| {
                let used: BTreeSet<VertexId> = self.images.values().map(|img| img[m]).collect();
                f.sub(|v| used.contains(&v))
            })
            .collect();
        OrientedPrism { factors }
    }

    /// Dependence of every target factor, or an error when a factor mixes
    /// several source factors.
    pub fn factor_dependence(&self) -> Result<Vec<FactorDependence>> {
        let tuples = self.source.vertex_tuples();
        let mut out = Vec::new();
        for m in 0..self.target.factors.len() {
            let vals: BTreeSet<VertexId> = tuples.iter().map(|t| self.images[t][m]).collect();
            if vals.len() == 1 {
                out.push(FactorDependence::Constant(*vals.iter().next().unwrap()));
                continue;
            }
            let mut found = None;
            for i in 0..self.source.factors.len() {
                let mut map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
                let consistent = tuples.iter().all(|t| {
                    let w = self.images[t][m];
                    *map.entry(t[i]).or_insert(w) == w
                });
                if consistent {
                    let src = &self.source.factors[i];
                    let tgt = &self.target.factors[m];
                    let hit: BTreeSet<VertexId> = map.values().copied().collect();
                    let iso = src.card() == tgt.card() && hit.len() == tgt.card();
                    found = Some(FactorDependence::Factor { factor: i, map, iso });
                    break;
                }
            }
            match found {
                Some(d) => out.push(d),
                None => {
                    return Err(Error::Unsupported(format!(
                        "target factor {m} of {} depends on several source factors",
                        self.target
                    )))
                }
            }
        }
        Ok(out)
    }
}

/// Fiber product of two prismal morphisms into the same prism.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    /// `None` when the fiber product is empty.
    pub prism: Option<OrientedPrism>,
    pub proj1: Option<PrismalMorphism>,
    pub proj2: Option<PrismalMorphism>,
}

enum Slot {
    Keep(OrientedSimplex),
    /// Determined by a factor of the other side through `map`.
    Determined {
        other: usize,
        map: BTreeMap<VertexId, VertexId>,
    },
}

/// `{(x1, x2) : f1(x1) = f2(x2)}` for morphisms that act factor by factor,
/// each target factor being constant or an image of one source factor.
///
/// Other shapes are rejected: fiber products of general prismal maps need
/// not be prisms.
pub fn fiber_product(f1: &PrismalMorphism, f2: &PrismalMorphism) -> Result<FiberProduct> {
    if f1.target != f2.target {
        return Err(Error::Structure(
            "fiber product of morphisms with different targets".into(),
        ));
    }
    let d1 = f1.factor_dependence()?;
    let d2 = f2.factor_dependence()?;
    let mut slots1: Vec<Slot> = f1.source.factors.iter().cloned().map(Slot::Keep).collect();
    let mut slots2: Vec<Slot> = f2.source.factors.iter().cloned().map(Slot::Keep).collect();
    let mut used1 = BTreeSet::new();
    let mut used2 = BTreeSet::new();
    let empty = FiberProduct {
        prism: None,
        proj1: None,
        proj2: None,
    };

    fn restrict(slot: &mut Slot, keep: &BTreeSet<VertexId>) -> bool {
        if let Slot::Keep(s) = slot {
            *s = s.sub(|v| keep.contains(&v));
            !s.is_empty()
        } else {
            true
        }
    }
    fn claim(used: &mut BTreeSet<usize>, i: usize) -> Result<()> {
        if !used.insert(i) {
            return Err(Error::Unsupported(format!(
                "source factor {i} feeds several target factors"
            )));
        }
        Ok(())
    }
    fn preimage(map: &BTreeMap<VertexId, VertexId>, w: VertexId) -> BTreeSet<VertexId> {
        map.iter().filter(|(_, b)| **b == w).map(|(a, _)| *a).collect()
    }
    fn invert(map: &BTreeMap<VertexId, VertexId>) -> BTreeMap<VertexId, VertexId> {
        map.iter().map(|(a, b)| (*b, *a)).collect()
    }
    fn compose(
        outer: &BTreeMap<VertexId, VertexId>,
        inner: &BTreeMap<VertexId, VertexId>,
    ) -> BTreeMap<VertexId, VertexId> {
        inner
            .iter()
            .filter_map(|(a, b)| outer.get(b).map(|c| (*a, *c)))
            .collect()
    }

    for (a, b) in d1.iter().zip(&d2) {
        use FactorDependence::*;
        match (a, b) {
            (Constant(w1), Constant(w2)) => {
                if w1 != w2 {
                    return Ok(empty);
                }
            }
            (Constant(w), Factor { factor, map, .. }) => {
                claim(&mut used2, *factor)?;
                if !restrict(&mut slots2[*factor], &preimage(map, *w)) {
                    return Ok(empty);
                }
            }
            (Factor { factor, map, .. }, Constant(w)) => {
                claim(&mut used1, *factor)?;
                if !restrict(&mut slots1[*factor], &preimage(map, *w)) {
                    return Ok(empty);
                }
            }
            (
                Factor {
                    factor: i,
                    map: g1,
                    iso: iso1,
                },
                Factor {
                    factor: k,
                    map: g2,
                    iso: iso2,
                },
            ) => {
                claim(&mut used1, *i)?;
                claim(&mut used2, *k)?;
                if *iso2 {
                    slots2[*k] = Slot::Determined {
                        other: *i,
                        map: compose(&invert(g2), g1),
                    };
                } else if *iso1 {
                    slots1[*i] = Slot::Determined {
                        other: *k,
                        map: compose(&invert(g1), g2),
                    };
                } else {
                    return Err(Error::Unsupported(
                        "both maps collapse the same target factor non-isomorphically".into(),
                    ));
                }
            }
        }
    }

    // Result factors: kept factors of side 1, then kept factors of side 2.
    let mut factors = Vec::new();
    let mut where1 = vec![None; slots1.len()];
    let mut where2 = vec![None; slots2.len()];
    for (i, s) in slots1.iter().enumerate() {
        if let Slot::Keep(x) = s {
            where1[i] = Some(factors.len());
            factors.push(x.clone());
        }
    }
    for (k, s) in slots2.iter().enumerate() {
        if let Slot::Keep(x) = s {
            where2[k] = Some(factors.len());
            factors.push(x.clone());
        }
    }
    let prism = OrientedPrism::new(factors)?;
    let project = |slots: &[Slot], here: &[Option<usize>], there: &[Option<usize>], t: &[VertexId]| {
        slots
            .iter()
            .enumerate()
            .map(|(i, s)| match s {
                Slot::Keep(_) => t[here[i].unwrap()],
                Slot::Determined { other, map } => map[&t[there[*other].unwrap()]],
            })
            .collect::<Vec<VertexId>>()
    };
    let mut im1 = BTreeMap::new();
    let mut im2 = BTreeMap::new();
    for t in prism.vertex_tuples() {
        im1.insert(t.clone(), project(&slots1, &where1, &where2, &t));
        im2.insert(t.clone(), project(&slots2, &where2, &where1, &t));
    }
    let proj1 = PrismalMorphism::new(prism.clone(), f1.source.clone(), im1)?;
    let proj2 = PrismalMorphism::new(prism.clone(), f2.source.clone(), im2)?;
    Ok(FiberProduct {
        prism: Some(prism),
        proj1: Some(proj1),
        proj2: Some(proj2),
    })
}

/// Cellwise fiber product of two families of morphisms into one prism.
pub fn fiber_product_sets(a: &[PrismalMorphism], b: &[PrismalMorphism]) -> Result<PrismalSet> {
    let mut prisms = Vec::new();
    for f in a {
        for g in b {
            if let Some(p) = fiber_product(f, g)?.prism {
                if !prisms.contains(&p) {
                    prisms.push(p);
                }
            }
        }
    }
    Ok(PrismalSet { prisms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(ids: &[u32]) -> OrientedSimplex {
        OrientedSimplex::from_ids(ids)
    }
    fn iso(factor: usize, pairs: &[(u32, u32)]) -> FactorDependence {
        FactorDependence::Factor {
            factor,
            map: pairs.iter().map(|(a, b)| (VertexId(*a), VertexId(*b))).collect(),
            iso: true,
        }
    }

    #[test]
    fn identity_leaves_source() {
        let rho = OrientedPrism::new(vec![s(&[0, 1])]).unwrap();
        let src = OrientedPrism::new(vec![s(&[5, 6]), s(&[7, 8, 9])]).unwrap();
        let f1 = PrismalMorphism::factorwise(src.clone(), rho.clone(), &[iso(0, &[(5, 0), (6, 1)])]).unwrap();
        let fp = fiber_product(&f1, &PrismalMorphism::identity(&rho)).unwrap();
        assert_eq!(fp.prism.unwrap(), src);
    }

    #[test]
    fn diagonal_of_two_isomorphisms() {
        let rho = OrientedPrism::new(vec![s(&[0, 1])]).unwrap();
        let a = OrientedPrism::new(vec![s(&[5, 6])]).unwrap();
        let b = OrientedPrism::new(vec![s(&[7, 8])]).unwrap();
        let f1 = PrismalMorphism::factorwise(a, rho.clone(), &[iso(0, &[(5, 0), (6, 1)])]).unwrap();
        let f2 = PrismalMorphism::factorwise(b, rho, &[iso(0, &[(7, 0), (8, 1)])]).unwrap();
        let fp = fiber_product(&f1, &f2).unwrap();
        assert_eq!(fp.prism.unwrap().dim(), 1);
    }

    #[test]
    fn constant_mismatch_is_empty() {
        let rho = OrientedPrism::new(vec![s(&[0, 1])]).unwrap();
        let a = OrientedPrism::new(vec![s(&[5])]).unwrap();
        let f1 =
            PrismalMorphism::factorwise(a.clone(), rho.clone(), &[FactorDependence::Constant(VertexId(0))]).unwrap();
        let f2 = PrismalMorphism::factorwise(a, rho, &[FactorDependence::Constant(VertexId(1))]).unwrap();
        assert!(fiber_product(&f1, &f2).unwrap().prism.is_none());
    }

    #[test]
    fn two_projections_of_a_square() {
        let rho = OrientedPrism::new(vec![s(&[0, 1])]).unwrap();
        let sq1 = OrientedPrism::new(vec![s(&[5, 6]), s(&[7, 8])]).unwrap();
        let sq2 = OrientedPrism::new(vec![s(&[15, 16]), s(&[17, 18])]).unwrap();
        let f1 = PrismalMorphism::factorwise(sq1, rho.clone(), &[iso(0, &[(5, 0), (6, 1)])]).unwrap();
        let f2 = PrismalMorphism::factorwise(sq2, rho, &[iso(1, &[(17, 0), (18, 1)])]).unwrap();
        // (u, v, u', v') with u = v′: one linear condition on four coordinates.
        assert_eq!(fiber_product(&f1, &f2).unwrap().prism.unwrap().dim(), 3);
    }
}
