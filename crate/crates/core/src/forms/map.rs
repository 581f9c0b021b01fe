use std::sync::Arc;

use super::context::{CoordSystem, GroupKind};
use super::form::Form;
use crate::error::{Error, Result};
use crate::mesh::{OrientedSimplex, PrismalMorphism, SimplicialMorphism};
use crate::poly::{Poly, Q};

/// Polynomial map between coordinate systems, given by the image of every
/// target coordinate as a polynomial in the source coordinates.
#[derive(Clone, Debug)]
pub struct PolyCoordinateMap {
    pub source: Arc<CoordSystem>,
    pub target: Arc<CoordSystem>,
    pub images: Vec<Poly>,
}

impl PolyCoordinateMap {
    pub fn new(source: Arc<CoordSystem>, target: Arc<CoordSystem>, images: Vec<Poly>) -> Result<Self> {
        if images.len() != target.nvars() || images.iter().any(|p| p.nvars() != source.nvars()) {
            return Err(Error::Structure(
                "coordinate map images do not match the systems".into(),
            ));
        }
        let m = PolyCoordinateMap { source, target, images };
        m.check_relations()?;
        Ok(m)
    }

    pub fn identity(ctx: Arc<CoordSystem>) -> Self {
        let n = ctx.nvars();
        PolyCoordinateMap {
            source: ctx.clone(),
            target: ctx,
            images: (0..n).map(|i| Poly::var(n, i)).collect(),
        }
    }

    /// Each target group's images sum to one modulo the source relations.
    pub fn check_relations(&self) -> Result<()> {
        let n = self.source.nvars();
        let canon = Form::canonical_images(&self.source);
        for g in 0..self.target.groups().len() {
            let mut s = Poly::zero(n);
            for i in self.target.group_vars(g) {
                s.add_assign_ref(&self.images[i]);
            }
            let reduced = s.compose(&canon);
            if reduced != Poly::one(n) {
                return Err(Error::Structure(format!(
                    "images of group {g} of {} do not sum to one",
                    self.target
                )));
            }
        }
        Ok(())
    }

    pub fn pullback(&self, a: &Form) -> Form {
        assert_eq!(*a.ctx(), *self.target, "pullback of a form from another system");
        a.pullback_by(self.source.clone(), &self.images)
    }

    pub fn pullback_poly(&self, p: &Poly) -> Poly {
        p.compose(&self.images)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PolyCoordinateMap) -> PolyCoordinateMap {
        assert_eq!(*other.target, *self.source);
        PolyCoordinateMap {
            source: other.source.clone(),
            target: self.target.clone(),
            images: self.images.iter().map(|p| p.compose(&other.images)).collect(),
        }
    }

    /// The map `(t, μ) ↦ λ` with `λ_v = t_j μ_{j,v}` from `τ × σ_0 × … × σ_s`
    /// onto `σ`.
    pub fn psi(f: &SimplicialMorphism, sigma: &OrientedSimplex, tau: &OrientedSimplex) -> Result<Self> {
        let fibers = f.fibers(sigma, tau);
        if fibers.iter().any(|s| s.is_empty()) {
            return Err(Error::Structure(format!("{sigma} does not map onto {tau}")));
        }
        let src = Arc::new(CoordSystem::trivialized(tau, &fibers));
        let tgt = Arc::new(CoordSystem::simplex(sigma));
        let n = src.nvars();
        let mut images = Vec::with_capacity(sigma.card());
        for v in sigma.vertices() {
            let y = f.map_vertex(*v);
            let t = src.var(GroupKind::Param, y).expect("base vertex");
            let m = src.var(GroupKind::Fiber(y.0), *v).expect("fiber vertex");
            images.push(&Poly::var(n, t) * &Poly::var(n, m));
        }
        Ok(PolyCoordinateMap {
            source: src,
            target: tgt,
            images,
        })
    }

    /// The affine extension of a prismal morphism given on vertex tuples.
    ///
    /// A point of the source prism has product weights `Π_m μ_{m,v_m}` on
    /// its vertex tuples; the image coordinate of target vertex `w` in factor
    /// `k` collects the weights of the tuples whose image has `w` there.
    pub fn from_prismal(m: &PrismalMorphism) -> Result<Self> {
        let src = Arc::new(CoordSystem::prism(&m.source));
        let tgt = Arc::new(CoordSystem::prism(&m.target));
        let n = src.nvars();
        let mut images = vec![Poly::zero(n); tgt.nvars()];
        for tuple in m.source.vertex_tuples() {
            let img = m
                .images
                .get(&tuple)
                .ok_or_else(|| Error::Structure("prismal morphism misses a vertex tuple".into()))?;
            let mut w = Poly::one(n);
            for (k, v) in tuple.iter().enumerate() {
                let var = src.var(GroupKind::Fiber(k as u32), *v).expect("source vertex");
                w = &w * &Poly::var(n, var);
            }
            for (k, v) in img.iter().enumerate() {
                let var = tgt
                    .var(GroupKind::Fiber(k as u32), *v)
                    .ok_or_else(|| Error::Structure(format!("image vertex {v} not in target factor {k}")))?;
                images[var].add_assign_ref(&w);
            }
        }
        PolyCoordinateMap::new(src, tgt, images)
    }

    /// Evaluates the images at a source point.
    pub fn apply(&self, point: &[Q]) -> Vec<Q> {
        self.images.iter().map(|p| p.eval(point)).collect()
    }
}

/// `θ^σ`: from barycentric coordinates of `σ` to `(t, μ)` over `τ`.
///
/// Fails with a boundary-fiber error when some `t_j` vanishes.
pub fn theta_point(
    f: &SimplicialMorphism,
    sigma: &OrientedSimplex,
    tau: &OrientedSimplex,
    lambda: &[Q],
) -> Result<(Vec<Q>, Vec<Vec<Q>>)> {
    if lambda.len() != sigma.card() {
        return Err(Error::Dimension("point has the wrong number of coordinates".into()));
    }
    let mut t = Vec::new();
    let mut mu = Vec::new();
    for y in tau.vertices() {
        let idx: Vec<usize> = (0..sigma.card())
            .filter(|&i| f.map_vertex(sigma.vertices()[i]) == *y)
            .collect();
        let tj: Q = idx.iter().map(|&i| lambda[i].clone()).sum();
        if num_traits::Zero::is_zero(&tj) {
            return Err(Error::BoundaryFiber(format!("t_{y} vanishes at this point")));
        }
        mu.push(idx.iter().map(|&i| &lambda[i] / &tj).collect());
        t.push(tj);
    }
    Ok((t, mu))
}

/// `ψ^σ`: `λ_v = t_j μ_{j,v}`.
pub fn psi_point(
    f: &SimplicialMorphism,
    sigma: &OrientedSimplex,
    tau: &OrientedSimplex,
    t: &[Q],
    mu: &[Vec<Q>],
) -> Vec<Q> {
    let mut pos = vec![0usize; tau.card()];
    sigma
        .vertices()
        .iter()
        .map(|v| {
            let j = tau.position(f.map_vertex(*v)).expect("vertex over tau");
            let x = &t[j] * &mu[j][pos[j]];
            pos[j] += 1;
            x
        })
        .collect()
}

/// Vertex-set inclusion of a face, as a map of simplex coordinate systems.
pub fn face_inclusion(
    face: &OrientedSimplex,
    cell: &OrientedSimplex,
) -> Result<(Arc<CoordSystem>, Vec<Option<usize>>)> {
    if !face.is_face_of(cell) {
        return Err(Error::Incidence(format!("{face} is not a face of {cell}")));
    }
    let ctx = Arc::new(CoordSystem::simplex(face));
    let map = cell.vertices().iter().map(|v| ctx.var(GroupKind::Lambda, *v)).collect();
    Ok((ctx, map))
}
