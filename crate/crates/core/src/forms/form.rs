use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::context::{CoordSystem, GroupKind};
use crate::poly::{Poly, Q};

/// Differential form with polynomial coefficients over a [`CoordSystem`].
///
/// Keys are strictly increasing variable-index lists (the `dx` wedge part).
/// Forms are stored in redundant coordinates; equality modulo the
/// barycentric relations is decided by [`Form::canonicalize`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form {
    ctx: Arc<CoordSystem>,
    terms: BTreeMap<Vec<usize>, Poly>,
}

pub type PolyDifferentialForm = Form;

/// Sign of the permutation sorting the concatenation `a ++ b` of two sorted
/// lists, or `None` when they share an element.
pub fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut odd = false;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            // b[j] jumps over the remaining a's.
            if (a.len() - i) % 2 == 1 {
                odd = !odd;
            }
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((out, odd))
}

/// Sorts an index list, returning the parity of the sort, or `None` on a repeat.
pub fn sort_sign(v: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut odd = false;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return None;
            }
            if v[i] > v[j] {
                odd = !odd;
            }
        }
    }
    let mut w = v.to_vec();
    w.sort_unstable();
    Some((w, odd))
}

impl Form {
    pub fn zero(ctx: Arc<CoordSystem>) -> Self {
        Form {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    /// The 0-form `p`.
    pub fn function(ctx: Arc<CoordSystem>, p: Poly) -> Self {
        assert_eq!(p.nvars(), ctx.nvars());
        let mut f = Form::zero(ctx);
        f.add_term(vec![], p);
        f
    }

    pub fn constant(ctx: Arc<CoordSystem>, c: Q) -> Self {
        let n = ctx.nvars();
        Form::function(ctx, Poly::constant(n, c))
    }

    /// `dx_{i_1} ∧ … ∧ dx_{i_k}` in the given (possibly unsorted) order.
    pub fn dvars(ctx: Arc<CoordSystem>, vars: &[usize]) -> Self {
        let n = ctx.nvars();
        let mut f = Form::zero(ctx);
        if let Some((key, odd)) = sort_sign(vars) {
            let c = if odd { -Q::one() } else { Q::one() };
            f.add_term(key, Poly::constant(n, c));
        }
        f
    }

    /// Exterior derivative of the coordinate `x_i`.
    pub fn dvar(ctx: Arc<CoordSystem>, i: usize) -> Self {
        Form::dvars(ctx, &[i])
    }

    pub fn ctx(&self) -> &CoordSystem {
        &self.ctx
    }

    pub fn ctx_arc(&self) -> &Arc<CoordSystem> {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.ctx.nvars()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &[usize]) -> Poly {
        self.terms.get(key).cloned().unwrap_or_else(|| Poly::zero(self.nvars()))
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

    /// Degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|k| k.len()).collect();
        d.sort();
        d.dedup();
        d
    }

    /// The degree when homogeneous; `None` for mixed or zero forms.
    pub fn degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    /// Adds `p dx_key` for a sorted key.
    pub fn add_term(&mut self, key: Vec<usize>, p: Poly) {
        debug_assert!(key.windows(2).all(|w| w[0] < w[1]));
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                c.add_assign_ref(&p);
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, p);
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Form) {
        self.check_ctx(other);
        for (k, p) in &other.terms {
            self.add_term(k.clone(), p.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Form, s: &Q) {
        self.check_ctx(other);
        for (k, p) in &other.terms {
            self.add_term(k.clone(), p.scale(s));
        }
    }

    pub fn scale(&self, s: &Q) -> Form {
        let mut out = Form::zero(self.ctx.clone());
        if s.is_zero() {
            return out;
        }
        for (k, p) in &self.terms {
            out.terms.insert(k.clone(), p.scale(s));
        }
        out
    }

    pub fn mul_poly(&self, p: &Poly) -> Form {
        let mut out = Form::zero(self.ctx.clone());
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * p);
        }
        out
    }

    /// Homogeneous part of degree `k`.
    pub fn part(&self, k: usize) -> Form {
        let mut out = Form::zero(self.ctx.clone());
        for (key, p) in &self.terms {
            if key.len() == k {
                out.terms.insert(key.clone(), p.clone());
            }
        }
        out
    }

    /// Keeps the terms whose key satisfies `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&[usize]) -> bool) -> Form {
        let mut out = Form::zero(self.ctx.clone());
        for (key, p) in &self.terms {
            if keep(key) {
                out.terms.insert(key.clone(), p.clone());
            }
        }
        out
    }

    fn check_ctx(&self, other: &Form) {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx,
            "forms live in different coordinate systems: {} vs {}",
            self.ctx,
            other.ctx
        );
    }

    pub fn same_ctx(&self, other: &Form) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx
    }

    pub fn wedge(&self, other: &Form) -> Form {
        self.check_ctx(other);
        let mut out = Form::zero(self.ctx.clone());
        for (ka, pa) in &self.terms {
            for (kb, pb) in &other.terms {
                if let Some((key, odd)) = merge_sign(ka, kb) {
                    let prod = pa * pb;
                    out.add_term(key, if odd { -&prod } else { prod });
                }
            }
        }
        out
    }

    /// Exterior derivative, term by term.
    pub fn d(&self) -> Form {
        let n = self.nvars();
        let mut out = Form::zero(self.ctx.clone());
        for (key, p) in &self.terms {
            for i in 0..n {
                if !p.involves(i) || key.contains(&i) {
                    continue;
                }
                let (k2, odd) = merge_sign(&[i], key).expect("disjoint");
                let dp = p.derivative(i);
                out.add_term(k2, if odd { -&dp } else { dp });
            }
        }
        out
    }

    /// Pullback along `x_i ↦ images[i]`, the images living in `target`'s ring.
    pub fn pullback_by(&self, target: Arc<CoordSystem>, images: &[Poly]) -> Form {
        assert_eq!(images.len(), self.nvars());
        let m = target.nvars();
        // d(image_i) as a list of (var, coefficient).
        let dimg: Vec<Vec<(usize, Poly)>> = images
            .iter()
            .map(|p| {
                (0..m)
                    .filter(|&j| p.involves(j))
                    .map(|j| (j, p.derivative(j)))
                    .collect()
            })
            .collect();
        let mut out = Form::zero(target.clone());
        for (key, c) in &self.terms {
            let mut acc: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
            acc.insert(vec![], c.compose(images));
            for &i in key {
                let mut next: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
                for (k, p) in &acc {
                    for (j, dj) in &dimg[i] {
                        if let Some((k2, odd)) = merge_sign(k, &[*j]) {
                            let prod = p * dj;
                            let prod = if odd { -&prod } else { prod };
                            let e = next.entry(k2).or_insert_with(|| Poly::zero(m));
                            e.add_assign_ref(&prod);
                        }
                    }
                }
                next.retain(|_, p| !p.is_zero());
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            for (k, p) in acc {
                out.add_term(k, p);
            }
        }
        out
    }

    /// Images of the elimination `x_last = 1 − Σ others` in every group.
    pub fn canonical_images(ctx: &CoordSystem) -> Vec<Poly> {
        let n = ctx.nvars();
        let mut images: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        for g in 0..ctx.groups().len() {
            let r = ctx.group_vars(g);
            let last = r.end - 1;
            let others: Vec<usize> = (r.start..last).collect();
            images[last] = Poly::one_minus_sum(n, &others);
        }
        images
    }

    /// Normal form modulo the barycentric relations.
    pub fn canonicalize(&self) -> Form {
        let images = Form::canonical_images(&self.ctx);
        self.pullback_by(self.ctx.clone(), &images)
    }

    /// Whether `self` and `other` agree modulo the relations.
    pub fn equals_mod_relations(&self, other: &Form) -> bool {
        let mut diff = self.clone();
        diff.add_scaled(other, &-Q::one());
        diff.canonicalize().is_zero()
    }

    /// Canonical form with every term containing a `dt` removed.
    pub fn fiber_part(&self) -> Form {
        let c = self.canonicalize();
        let ctx = self.ctx.clone();
        c.filter_terms(|key| key.iter().all(|&i| ctx.describe(i).0 != GroupKind::Param))
    }

    /// Pullback to a face: variables mapped to `None` are set to zero
    /// together with their differentials; the rest are renamed.
    pub fn restrict(&self, face: Arc<CoordSystem>, map: &[Option<usize>]) -> Form {
        let n = face.nvars();
        let images: Vec<Poly> = map
            .iter()
            .map(|m| match m {
                Some(j) => Poly::var(n, *j),
                None => Poly::zero(n),
            })
            .collect();
        self.pullback_by(face, &images)
    }

    /// Reads the form in a larger system containing every variable of this one.
    pub fn embed(&self, target: Arc<CoordSystem>) -> Option<Form> {
        let map = self.ctx.embedding_into(&target);
        let n = target.nvars();
        let mut out = Form::zero(target);
        for (key, p) in &self.terms {
            let key2: Option<Vec<usize>> = key.iter().map(|&i| map[i]).collect();
            let (key2, odd) = sort_sign(&key2?)?;
            let p2 = p.reindex(n, &map)?;
            out.add_term(key2, if odd { -&p2 } else { p2 });
        }
        Some(out)
    }

    /// `Σ_I c_I · det(v_k[I_l])`: the form contracted with constant vectors.
    pub fn contract(&self, vectors: &[Vec<Q>]) -> Poly {
        let n = self.nvars();
        let r = vectors.len();
        let mut out = Poly::zero(n);
        for (key, c) in &self.terms {
            if key.len() != r {
                continue;
            }
            let m: Vec<Vec<Q>> = (0..r)
                .map(|a| key.iter().map(|&i| vectors[a][i].clone()).collect())
                .collect();
            let det = determinant(m);
            if !det.is_zero() {
                out.add_scaled(c, &det);
            }
        }
        out
    }

    /// Renders with coordinate names.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = self.ctx.var_names();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, p)| {
                let coef = p.display_with(&names);
                if k.is_empty() {
                    format!("({coef})")
                } else {
                    let ds: Vec<String> = k.iter().map(|&i| format!("d{}", names[i])).collect();
                    format!("({coef}) {}", ds.join("^"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl std::ops::Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl std::ops::Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl std::ops::Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.scale(&-Q::one())
    }
}

/// Exact determinant by fraction-free elimination over the rationals.
pub fn determinant(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let v = &m[col][c] * &f;
                m[r][c] -= v;
            }
        }
    }
    det
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(piv, r);
        let p = m[r][c].clone();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &p;
            for k in c..cols {
                let v = &m[r][k] * &f;
                m[i][k] -= v;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::context::CoordGroup;
    use crate::mesh::VertexId;
    use crate::poly::q;

    fn ctx3() -> Arc<CoordSystem> {
        Arc::new(
            CoordSystem::new(vec![CoordGroup {
                kind: GroupKind::Lambda,
                vertices: vec![VertexId(0), VertexId(1), VertexId(2)],
            }])
            .unwrap(),
        )
    }

    #[test]
    fn wedge_signs() {
        let c = ctx3();
        let d0 = Form::dvar(c.clone(), 0);
        let d1 = Form::dvar(c.clone(), 1);
        assert!(d0.wedge(&d0).is_zero());
        assert_eq!(d0.wedge(&d1), -&d1.wedge(&d0));
        // (λ0 dλ1) ∧ (λ1 dλ0) = −λ0 λ1 dλ0∧dλ1
        let l0 = Poly::var(3, 0);
        let l1 = Poly::var(3, 1);
        let a = d1.mul_poly(&l0);
        let b = d0.mul_poly(&l1);
        let expect = Form::dvars(c, &[0, 1]).mul_poly(&(&l0 * &l1)).scale(&q(-1));
        assert_eq!(a.wedge(&b), expect);
    }

    #[test]
    fn leibniz_and_dd() {
        let c = ctx3();
        let p = &Poly::var(3, 0) * &Poly::var(3, 1);
        let f = Form::dvar(c.clone(), 2).mul_poly(&p);
        let mut expect = Form::dvars(c.clone(), &[0, 2]).mul_poly(&Poly::var(3, 1));
        expect.add_assign_ref(&Form::dvars(c, &[1, 2]).mul_poly(&Poly::var(3, 0)));
        assert_eq!(f.d(), expect);
        assert!(f.d().d().is_zero());
    }

    #[test]
    fn relations_reduce() {
        let c = ctx3();
        let mut s = Form::zero(c.clone());
        for i in 0..3 {
            s.add_assign_ref(&Form::dvar(c.clone(), i));
        }
        assert!(s.canonicalize().is_zero());
        let sum = &(&Poly::var(3, 0) + &Poly::var(3, 1)) + &Poly::var(3, 2);
        assert_eq!(Form::function(c.clone(), sum).canonicalize(), Form::constant(c, q(1)));
    }

    #[test]
    fn merge_sign_counts_inversions() {
        assert_eq!(merge_sign(&[1, 3], &[0, 2]), Some((vec![0, 1, 2, 3], true)));
        assert_eq!(merge_sign(&[0], &[1]), Some((vec![0, 1], false)));
        assert_eq!(merge_sign(&[1], &[1]), None);
        assert_eq!(sort_sign(&[2, 0, 1]), Some((vec![0, 1, 2], false)));
    }
}
