use std::fmt;

use serde::{Deserialize, Serialize};

use super::simplex::{boundary_chain, incidence_number, Chain, OrientedSimplex};
use crate::error::{Error, Result};

/// Ordered product of oriented simplices `σ_0 × … × σ_s`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OrientedPrism {
    pub factors: Vec<OrientedSimplex>,
}

impl OrientedPrism {
    pub fn new(factors: Vec<OrientedSimplex>) -> Result<Self> {
        if factors.iter().any(|f| f.is_empty()) {
            return Err(Error::Structure("prism with an empty factor".into()));
        }
        Ok(OrientedPrism { factors })
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim().unwrap_or(0)).sum()
    }

    pub fn factor_dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim().unwrap_or(0)).collect()
    }

    /// The simplex when there is exactly one factor.
    pub fn as_simplex(&self) -> Option<&OrientedSimplex> {
        match self.factors.as_slice() {
            [s] => Some(s),
            _ => None,
        }
    }

    /// Normalized factors together with the orientation sign.
    pub fn normalized(&self) -> (OrientedPrism, i64) {
        let mut sign = 1;
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let (n, s) = f.normalized();
                sign *= s;
                n
            })
            .collect();
        (OrientedPrism { factors }, sign)
    }

    /// Vertex tuples, one vertex per factor, in lexicographic order.
    pub fn vertex_tuples(&self) -> Vec<Vec<super::VertexId>> {
        let mut out = vec![vec![]];
        for f in &self.factors {
            let mut next = Vec::new();
            for t in &out {
                for v in f.vertices() {
                    let mut t2 = t.clone();
                    t2.push(*v);
                    next.push(t2);
                }
            }
            out = next;
        }
        out
    }

    /// Whether `self` is a face: same factor count, each factor a face.
    pub fn is_face_of(&self, other: &OrientedPrism) -> bool {
        self.factors.len() == other.factors.len()
            && self.factors.iter().zip(&other.factors).all(|(a, b)| a.is_face_of(b))
    }
}

impl From<OrientedSimplex> for OrientedPrism {
    fn from(s: OrientedSimplex) -> Self {
        OrientedPrism { factors: vec![s] }
    }
}

impl fmt::Display for OrientedPrism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

pub type PrismChain = Chain<OrientedPrism>;

impl PrismChain {
    pub fn add_prism(&mut self, p: &OrientedPrism, c: i64) {
        let (n, s) = p.normalized();
        self.add(n, c * s);
    }

    pub fn coefficient_of(&self, p: &OrientedPrism) -> i64 {
        let (n, s) = p.normalized();
        self.coefficient(&n) * s
    }

    pub fn boundary(&self) -> PrismChain {
        let mut out = PrismChain::new();
        for (p, c) in self.iter() {
            for (f, s) in prism_boundary(p).iter() {
                out.add(f.clone(), c * s);
            }
        }
        out
    }
}

/// `∂(σ_0×…×σ_s) = Σ_j (-1)^{|σ_0|+…+|σ_{j-1}|} σ_0×…×∂σ_j×…×σ_s`.
pub fn prism_boundary(p: &OrientedPrism) -> PrismChain {
    let mut out = PrismChain::new();
    let mut prefix = 0;
    for (j, f) in p.factors.iter().enumerate() {
        let sign = if prefix % 2 == 0 { 1 } else { -1 };
        for (face, c) in boundary_chain(f).iter() {
            let mut factors = p.factors.clone();
            factors[j] = face.clone();
            out.add_prism(&OrientedPrism { factors }, sign * c);
        }
        prefix += f.dim().unwrap_or(0);
    }
    out
}

/// `[π; π′] = (-1)^{|σ_0|+…+|σ_{j-1}|} [σ_j; σ′_j]` for a face differing in factor `j`.
pub fn prism_incidence(p: &OrientedPrism, q: &OrientedPrism) -> Result<i64> {
    if p.factors.len() != q.factors.len() {
        return Err(Error::Incidence(format!("{q} and {p} have different factor counts")));
    }
    let differing: Vec<usize> = (0..p.factors.len())
        .filter(|&j| !p.factors[j].same_cell(&q.factors[j]))
        .collect();
    let [j] = differing.as_slice() else {
        return Err(Error::Incidence(format!("{q} is not a codimension-1 face of {p}")));
    };
    let mut sign = 1;
    for k in 0..p.factors.len() {
        if k != *j {
            sign *= q.factors[k].orientation_relative_to(&p.factors[k])?;
        }
    }
    let prefix: usize = p.factors[..*j].iter().map(|f| f.dim().unwrap_or(0)).sum();
    let inc = incidence_number(&p.factors[*j], &q.factors[*j])?;
    Ok(sign * inc * if prefix.is_multiple_of(2) { 1 } else { -1 })
}

/// Codimension-1 faces, each in the orientation induced by subsequence order.
pub fn prism_codim1_faces(p: &OrientedPrism) -> Vec<OrientedPrism> {
    let mut out = Vec::new();
    for (j, f) in p.factors.iter().enumerate() {
        if f.card() < 2 {
            continue;
        }
        for i in 0..f.card() {
            let mut factors = p.factors.clone();
            factors[j] = f.delete(i);
            out.push(OrientedPrism { factors });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(ids: &[u32]) -> OrientedSimplex {
        OrientedSimplex::from_ids(ids)
    }

    #[test]
    fn square_boundary_matches_product_rule() {
        let p = OrientedPrism::new(vec![s(&[0, 1]), s(&[2, 3])]).unwrap();
        let b = prism_boundary(&p);
        let face = |a: &[u32], c: &[u32]| OrientedPrism::new(vec![s(a), s(c)]).unwrap();
        assert_eq!(b.coefficient_of(&face(&[1], &[2, 3])), 1);
        assert_eq!(b.coefficient_of(&face(&[0], &[2, 3])), -1);
        assert_eq!(b.coefficient_of(&face(&[0, 1], &[3])), -1);
        assert_eq!(b.coefficient_of(&face(&[0, 1], &[2])), 1);
        assert!(b.boundary().is_zero());
    }

    #[test]
    fn single_factor_is_simplex_boundary() {
        let p: OrientedPrism = s(&[0, 1, 2]).into();
        let b = prism_boundary(&p);
        let sb = boundary_chain(&s(&[0, 1, 2]));
        for (f, c) in sb.iter() {
            assert_eq!(b.coefficient_of(&f.clone().into()), *c);
        }
        assert_eq!(b.len(), sb.len());
    }

    #[test]
    fn incidence_prefix_sign() {
        let p = OrientedPrism::new(vec![s(&[0, 1]), s(&[2, 3, 4])]).unwrap();
        let q = OrientedPrism::new(vec![s(&[0, 1]), s(&[2, 3])]).unwrap();
        let inner = incidence_number(&s(&[2, 3, 4]), &s(&[2, 3])).unwrap();
        assert_eq!(prism_incidence(&p, &q).unwrap(), -inner);
        let q0 = OrientedPrism::new(vec![s(&[1]), s(&[2, 3, 4])]).unwrap();
        assert_eq!(prism_incidence(&p, &q0).unwrap(), 1);
    }
}
