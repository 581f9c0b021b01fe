use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::IdentityReport;
use crate::forms::{
    rank, whitney, whitney_antiboundary, whitney_extended_in, whitney_in, whitney_prism, whitney_prism_face_in,
    CoordSystem, Form, GroupKind, PolyCoordinateMap,
};
use crate::mesh::{
    combinations, incidence_number, permutation_parity, prism_codim1_faces, prism_incidence, OrientedPrism,
    OrientedSimplex, SimplicialComplex, SimplicialMorphism, VertexId,
};
use crate::poly::{binomial, factorial, q, sign_q, Poly, Q};

/// The simplex `[0, 1, …, p]`.
pub fn standard_simplex(p: usize) -> OrientedSimplex {
    OrientedSimplex::from_ids(&(0..=p as u32).collect::<Vec<_>>())
}

/// Product of standard simplices with the given dimensions, on disjoint vertex ids.
pub fn prism_of_dims(dims: &[usize]) -> OrientedPrism {
    let factors = dims
        .iter()
        .enumerate()
        .map(|(j, &d)| OrientedSimplex::from_ids(&(0..=d as u32).map(|i| 10 * j as u32 + i).collect::<Vec<_>>()))
        .collect();
    OrientedPrism::new(factors).expect("nonempty factors")
}

/// Random polynomial of total degree at most `deg` with small integer coefficients.
pub fn random_poly(rng: &mut impl Rng, nvars: usize, deg: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(nvars);
    for _ in 0..terms {
        let mut e = vec![0u32; nvars];
        let mut left = rng.gen_range(0..=deg);
        while left > 0 {
            e[rng.gen_range(0..nvars)] += 1;
            left -= 1;
        }
        let c: i64 = rng.gen_range(-5..=5);
        p.add_term(e, q(c));
    }
    p
}

fn vid(vs: &[VertexId]) -> String {
    vs.iter().map(|v| v.0.to_string()).collect::<Vec<_>>().join(",")
}

// ---------------------------------------------------------------- codifferential

pub fn lemcod_simplex_cases(max_dim: usize) -> Vec<(OrientedSimplex, OrientedSimplex)> {
    let mut out = Vec::new();
    for p in 1..=max_dim {
        for s in [standard_simplex(p), standard_simplex(p).reversed()] {
            for f in s.faces(p - 1).expect("faces") {
                out.push((s.clone(), f.clone()));
                if f.card() >= 2 {
                    out.push((s.clone(), f.reversed()));
                }
            }
        }
    }
    out
}

/// `dω(σ′;σ) = [σ;σ′] ω(σ)`.
pub fn verify_lemcod_simplex(s: &OrientedSimplex, face: &OrientedSimplex) -> IdentityReport {
    let case = format!("[{}] in [{}]", vid(face.vertices()), vid(s.vertices()));
    let run = || -> crate::Result<Form> {
        let ctx = Arc::new(CoordSystem::simplex(s));
        let lhs = whitney_extended_in(&ctx, face)?.d();
        let rhs = whitney_in(&ctx, GroupKind::Lambda, s.vertices())?.scale(&q(incidence_number(s, face)?));
        Ok(&lhs - &rhs)
    };
    match run() {
        Ok(r) => IdentityReport::from_residual("lemcod-simplex", case, &r),
        Err(e) => IdentityReport::error("lemcod-simplex", case, e),
    }
}

fn factor_dim_vectors(max_factor_dim: usize, max_factors: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_factors {
        let mut next = Vec::new();
        for v in &cur {
            for d in 0..=max_factor_dim {
                let mut w = v.clone();
                w.push(d);
                if w.iter().sum::<usize>() <= max_total {
                    next.push(w);
                }
            }
        }
        out.extend(
            next.iter()
                .filter(|w| w.len() >= 2 && w.iter().sum::<usize>() >= 1)
                .cloned(),
        );
        cur = next;
    }
    out
}

pub fn lemcod_prism_cases(max_factor_dim: usize, max_factors: usize) -> Vec<(OrientedPrism, OrientedPrism)> {
    let mut out = Vec::new();
    for dims in factor_dim_vectors(max_factor_dim, max_factors, max_factor_dim * max_factors) {
        let p = prism_of_dims(&dims);
        for f in prism_codim1_faces(&p) {
            out.push((p.clone(), f));
        }
    }
    out
}

fn prism_case(p: &OrientedPrism) -> String {
    p.factors
        .iter()
        .map(|f| format!("[{}]", vid(f.vertices())))
        .collect::<Vec<_>>()
        .join("x")
}

/// `dω(ρ′;ρ) = [ρ;ρ′] ω(ρ)` for a codimension-1 face of a prism.
pub fn verify_lemcod_prism(p: &OrientedPrism, face: &OrientedPrism) -> IdentityReport {
    let case = format!("{} in {}", prism_case(face), prism_case(p));
    let run = || -> crate::Result<Form> {
        let w = whitney_prism(p);
        let ctx = w.ctx_arc().clone();
        let lhs = whitney_prism_face_in(&ctx, &face.factors, |k| GroupKind::Fiber(k as u32))?.d();
        Ok(&lhs - &w.scale(&q(prism_incidence(p, face)?)))
    };
    match run() {
        Ok(r) => IdentityReport::from_residual("lemcod-prism", case, &r),
        Err(e) => IdentityReport::error("lemcod-prism", case, e),
    }
}

pub fn lemcod_basis_cases(max_dim: usize, max_factor_dim: usize, max_factors: usize) -> Vec<OrientedPrism> {
    let mut out: Vec<OrientedPrism> = (1..=max_dim.min(4)).map(|p| prism_of_dims(&[p])).collect();
    out.extend(
        factor_dim_vectors(max_factor_dim, max_factors, max_factor_dim * max_factors)
            .into_iter()
            .filter(|d| d.iter().all(|&x| x >= 1))
            .map(|d| prism_of_dims(&d)),
    );
    out
}

/// Multi-affine monomials: per group, either nothing or one free variable.
fn multi_affine_monomials(ctx: &CoordSystem) -> Vec<Vec<u32>> {
    let n = ctx.nvars();
    let mut out = vec![vec![0u32; n]];
    for g in 0..ctx.groups().len() {
        let r = ctx.group_vars(g);
        let mut next = Vec::new();
        for m in &out {
            next.push(m.clone());
            for i in r.start..r.end - 1 {
                let mut m2 = m.clone();
                m2[i] = 1;
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

/// On the space `V` of `(n-1)`-forms with multi-affine coefficients on an
/// `n`-dimensional prism, the forms whose traces on every codimension-1 face
/// have constant coefficients make a space of dimension equal to the number
/// of such faces, spanned by the extended face forms.
pub fn verify_lemcod_basis(p: &OrientedPrism) -> IdentityReport {
    let case = prism_case(p);
    let run = || -> crate::Result<Option<String>> {
        let ctx = Arc::new(CoordSystem::prism(p));
        let n = p.dim();
        let free = ctx.free_vars();
        let keys = combinations(free.len(), n - 1);
        let monos = multi_affine_monomials(&ctx);
        let mut basis: Vec<(Vec<usize>, Vec<u32>)> = Vec::new();
        for k in &keys {
            let key: Vec<usize> = k.iter().map(|&i| free[i]).collect();
            for m in &monos {
                basis.push((key.clone(), m.clone()));
            }
        }
        let index: std::collections::BTreeMap<(Vec<usize>, Vec<u32>), usize> =
            basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();

        let faces = prism_codim1_faces(p);
        let mut face_ctx = Vec::new();
        for f in &faces {
            let (j, drop) = (0..p.factors.len())
                .find_map(|j| {
                    let missing = p.factors[j].vertices().iter().find(|v| !f.factors[j].contains(**v))?;
                    Some((j, *missing))
                })
                .expect("face misses a vertex");
            let (c, map) = ctx.restricted(|k, v| !(k == GroupKind::Fiber(j as u32) && v == drop))?;
            face_ctx.push((Arc::new(c), map));
        }
        // Nonconstant trace coefficients, one row per (face, key, monomial).
        let traces = |a: &Form| -> std::collections::BTreeMap<(usize, Vec<usize>, Vec<u32>), Q> {
            let mut rows = std::collections::BTreeMap::new();
            for (fi, (c, map)) in face_ctx.iter().enumerate() {
                let t = a.restrict(c.clone(), map).canonicalize();
                for (key, poly) in t.terms() {
                    for (e, coef) in poly.terms() {
                        if e.iter().any(|&x| x > 0) {
                            rows.insert((fi, key.clone(), e.clone()), coef.clone());
                        }
                    }
                }
            }
            rows
        };
        let mut row_index: std::collections::BTreeMap<(usize, Vec<usize>, Vec<u32>), usize> = Default::default();
        let mut columns: Vec<std::collections::BTreeMap<usize, Q>> = Vec::new();
        for (key, m) in &basis {
            let mut poly = Poly::zero(ctx.nvars());
            poly.add_term(m.clone(), Q::one());
            let a = Form::dvars(ctx.clone(), key).mul_poly(&poly);
            let mut col = std::collections::BTreeMap::new();
            for (r, c) in traces(&a) {
                let len = row_index.len();
                let i = *row_index.entry(r).or_insert(len);
                col.insert(i, c);
            }
            columns.push(col);
        }
        let mut m = vec![vec![Q::zero(); basis.len()]; row_index.len()];
        for (j, col) in columns.iter().enumerate() {
            for (i, c) in col {
                m[*i][j] = c.clone();
            }
        }
        let kernel = basis.len() - rank(m);
        if kernel != faces.len() {
            return Ok(Some(format!(
                "constrained space has dimension {kernel}, expected {}",
                faces.len()
            )));
        }
        let mut coords = Vec::new();
        for f in &faces {
            let w = whitney_prism_face_in(&ctx, &f.factors, |k| GroupKind::Fiber(k as u32))?.canonicalize();
            if !traces(&w).is_empty() {
                return Ok(Some(format!("face form of {} has a nonconstant trace", prism_case(f))));
            }
            let mut row = vec![Q::zero(); basis.len()];
            for (key, poly) in w.terms() {
                for (e, c) in poly.terms() {
                    match index.get(&(key.clone(), e.clone())) {
                        Some(&i) => row[i] = c.clone(),
                        None => return Ok(Some(format!("face form of {} is not multi-affine", prism_case(f)))),
                    }
                }
            }
            coords.push(row);
        }
        let r = rank(coords);
        Ok((r != faces.len()).then(|| format!("face forms span dimension {r}, expected {}", faces.len())))
    };
    match run() {
        Ok(None) => IdentityReport::from_bool("lemcod-basis", case, true, String::new),
        Ok(Some(w)) => IdentityReport::from_bool("lemcod-basis", case, false, || w),
        Err(e) => IdentityReport::error("lemcod-basis", case, e),
    }
}

// ---------------------------------------------------------------- antiboundary

/// `d((1/(p+1)) Σ_i [σ;σ′_i] ω(σ′_i;σ)) = ω(σ)`.
pub fn verify_bord(s: &OrientedSimplex) -> IdentityReport {
    let case = format!("[{}]", vid(s.vertices()));
    match whitney_antiboundary(s) {
        Ok(a) => {
            let w = whitney_in(a.ctx_arc(), GroupKind::Lambda, s.vertices()).expect("cell form");
            IdentityReport::from_residual("bord", case, &(&a.d() - &w))
        }
        Err(e) => IdentityReport::error("bord", case, e),
    }
}

// ---------------------------------------------------------------- sums over cofaces

pub(super) fn satrap_cases(p: usize) -> Vec<(OrientedSimplex, OrientedSimplex)> {
    let s = standard_simplex(p);
    let mut out = Vec::new();
    for k in 0..p {
        for g in s.faces(k).expect("faces") {
            out.push((s.clone(), g.clone()));
            if g.card() >= 2 {
                out.push((s.clone(), g.reversed()));
            }
        }
    }
    out
}

fn append(g: &OrientedSimplex, h: VertexId) -> OrientedSimplex {
    let mut vs = g.vertices().to_vec();
    vs.push(h);
    OrientedSimplex::new(vs).expect("new vertex")
}

/// `Σ_{h∉γ} ω(γ h;σ) = (-1)^{ℓ+1} (ℓ+1)! dλ_γ`, `ℓ = dim γ`.
pub fn verify_satrap(s: &OrientedSimplex, g: &OrientedSimplex) -> IdentityReport {
    let case = format!("[{}] in [{}]", vid(g.vertices()), vid(s.vertices()));
    let ctx = Arc::new(CoordSystem::simplex(s));
    let l1 = g.card();
    let mut lhs = Form::zero(ctx.clone());
    for &h in s.vertices() {
        if !g.contains(h) {
            lhs.add_assign_ref(&whitney_extended_in(&ctx, &append(g, h)).expect("face"));
        }
    }
    let vars = ctx.vars_of(GroupKind::Lambda, g.vertices()).expect("face vertices");
    let rhs = Form::dvars(ctx.clone(), &vars).scale(&(sign_q(l1) * factorial(l1)));
    IdentityReport::from_residual("satrap", case, &(&lhs - &rhs))
}

/// `d(E ω(γ;σ)) = (-1)^{ℓ+1} Σ_{h∉γ} (E_h + (1/(ℓ+1)) Σ_{i≠h} λ_i ∂_i E_h) ω(γ h;σ)`
/// where `E_h` eliminates `λ_h` through the relation.
pub fn verify_satrapaz(s: &OrientedSimplex, g: &OrientedSimplex, e: &Poly, label: &str) -> IdentityReport {
    let case = format!("[{}] in [{}], {label}", vid(g.vertices()), vid(s.vertices()));
    let ctx = Arc::new(CoordSystem::simplex(s));
    let n = ctx.nvars();
    let l1 = g.card();
    let lhs = whitney_extended_in(&ctx, g).expect("face").mul_poly(e).d();
    let mut rhs = Form::zero(ctx.clone());
    for (hi, &h) in s.vertices().iter().enumerate() {
        if g.contains(h) {
            continue;
        }
        let others: Vec<usize> = (0..n).filter(|&i| i != hi).collect();
        let eh = e.substitute(hi, &Poly::one_minus_sum(n, &others));
        let mut euler = Poly::zero(n);
        for &i in &others {
            euler = &euler + &(&Poly::var(n, i) * &eh.derivative(i));
        }
        let coef = &eh + &euler.scale(&Q::new(1.into(), (l1 as i64).into()));
        rhs.add_assign_ref(&whitney_extended_in(&ctx, &append(g, h)).expect("face").mul_poly(&coef));
    }
    let rhs = rhs.scale(&sign_q(l1));
    IdentityReport::from_residual("satrapaz", case, &(&lhs - &rhs))
}

pub(super) fn satrapaz_batch(s: &OrientedSimplex, g: &OrientedSimplex, count: usize, seed: u64) -> Vec<IdentityReport> {
    let mut h = seed;
    for v in s.vertices().iter().chain(g.vertices()) {
        h = h.wrapping_mul(0x100000001b3).wrapping_add(v.0 as u64 + 1);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(h ^ (g.card() as u64) << 32);
    (0..count)
        .map(|k| {
            let e = random_poly(&mut rng, s.card(), 3, 4);
            verify_satrapaz(s, g, &e, &format!("E#{k}"))
        })
        .collect()
}

// ---------------------------------------------------------------- pullback to the trivialization

pub(super) fn iminve_cases(
    max_dim: usize,
    max_base_dim: usize,
) -> Vec<(SimplicialMorphism, OrientedSimplex, OrientedSimplex)> {
    let mut out = Vec::new();
    for p in 0..=max_dim {
        for s in 0..=max_base_dim.min(p) {
            let src_ids: Vec<u32> = (0..=p as u32).collect();
            let tgt_ids: Vec<u32> = (0..=s as u32).collect();
            let src = SimplicialComplex::new(&src_ids, std::slice::from_ref(&src_ids)).expect("simplex");
            let tgt = SimplicialComplex::new(&tgt_ids, std::slice::from_ref(&tgt_ids)).expect("simplex");
            let total = (s + 1).pow(p as u32 + 1);
            for code in 0..total {
                let mut c = code;
                let img: Vec<u32> = (0..=p)
                    .map(|_| {
                        let y = (c % (s + 1)) as u32;
                        c /= s + 1;
                        y
                    })
                    .collect();
                if !(0..=s as u32).all(|y| img.contains(&y)) {
                    continue;
                }
                let pairs: Vec<(u32, u32)> = src_ids.iter().copied().zip(img).collect();
                let f = SimplicialMorphism::new(src.clone(), tgt.clone(), &pairs).expect("surjection");
                out.push((f, standard_simplex(p), standard_simplex(s)));
            }
        }
    }
    out
}

/// `ψ^*ω(σ) = (-1)^α p!/(Π|σ_j|! s!) Π t_j^{|σ_j|} ω(τ) ∧ ω(σ_0) ∧ … ∧ ω(σ_s)`
/// with `α = Σ_j (s-j)|σ_j| + parity(σ → σ_0 σ_1 … σ_s)`.
pub fn verify_iminve(f: &SimplicialMorphism, s: &OrientedSimplex, tau: &OrientedSimplex) -> IdentityReport {
    let case = format!(
        "{} over [{}]",
        s.vertices()
            .iter()
            .map(|v| format!("{}->{}", v.0, f.map_vertex(*v).0))
            .collect::<Vec<_>>()
            .join(" "),
        vid(tau.vertices())
    );
    let run = || -> crate::Result<Form> {
        let psi = PolyCoordinateMap::psi(f, s, tau)?;
        let lhs = psi.pullback(&whitney(s));
        let ctx = psi.source.clone();
        let fibers = f.fibers(s, tau);
        let p = s.card() - 1;
        let sd = tau.card() - 1;
        let grouped: Vec<VertexId> = fibers.iter().flat_map(|x| x.vertices().iter().copied()).collect();
        let mut alpha = permutation_parity(s.vertices(), &grouped);
        let mut coef = factorial(p) / factorial(sd);
        let n = ctx.nvars();
        let mut weight = Poly::one(n);
        for (j, (y, fj)) in tau.vertices().iter().zip(&fibers).enumerate() {
            let dj = fj.card() - 1;
            alpha += (sd - j) * dj;
            coef /= factorial(dj);
            weight = &weight * &Poly::var(n, ctx.var(GroupKind::Param, *y).expect("base")).pow(dj as u32);
        }
        let mut rhs = whitney_in(&ctx, GroupKind::Param, tau.vertices())?;
        for (y, fj) in tau.vertices().iter().zip(&fibers) {
            rhs = rhs.wedge(&whitney_in(&ctx, GroupKind::Fiber(y.0), fj.vertices())?);
        }
        let rhs = rhs.mul_poly(&weight).scale(&(coef * sign_q(alpha)));
        Ok(&lhs - &rhs)
    };
    match run() {
        Ok(r) => IdentityReport::from_residual("iminve", case, &r),
        Err(e) => IdentityReport::error("iminve", case, e),
    }
}

// ---------------------------------------------------------------- face splittings

fn reorder(s: &OrientedSimplex, front: &OrientedSimplex) -> (OrientedSimplex, OrientedSimplex) {
    let rest = s.sub(|v| !front.contains(v));
    let mut vs = front.vertices().to_vec();
    vs.extend_from_slice(rest.vertices());
    (OrientedSimplex::new(vs).expect("same vertices"), rest)
}

fn du(ctx: &Arc<CoordSystem>, kind: GroupKind, vs: &[VertexId]) -> (Poly, Form) {
    let vars = ctx.vars_of(kind, vs).expect("vertices");
    let n = ctx.nvars();
    let u = Poly::sum_of(n, &vars);
    let mut d = Form::zero(ctx.clone());
    for v in vars {
        d.add_assign_ref(&Form::dvar(ctx.clone(), v));
    }
    (u, d)
}

fn split_constant(p: usize, q_: usize) -> Q {
    sign_q(p + q_) * q((p - q_) as i64) * binomial(p, q_)
}

/// `u(1-u) ω(S rest) = (-1)^{p+q} (p-q) C(p,q) ω(S;σ) ∧ ω(rest;σ) ∧ du`
/// for a `q`-face `S`, `u = Σ_{v∈S} λ_v`.
pub fn verify_faceface(s: &OrientedSimplex, face: &OrientedSimplex) -> IdentityReport {
    let case = format!("[{}] in [{}]", vid(face.vertices()), vid(s.vertices()));
    let ctx = Arc::new(CoordSystem::simplex(s));
    let n = ctx.nvars();
    let p = s.card() - 1;
    let qd = face.card() - 1;
    let (full, rest) = reorder(s, face);
    let (u, dform) = du(&ctx, GroupKind::Lambda, face.vertices());
    let lhs = whitney_in(&ctx, GroupKind::Lambda, full.vertices())
        .expect("cell")
        .mul_poly(&(&u * &(&Poly::one(n) - &u)));
    let rhs = whitney_in(&ctx, GroupKind::Lambda, face.vertices())
        .expect("face")
        .wedge(&whitney_in(&ctx, GroupKind::Lambda, rest.vertices()).expect("face"))
        .wedge(&dform)
        .scale(&split_constant(p, qd));
    IdentityReport::from_residual("faceface", case, &(&lhs - &rhs))
}

/// `(1-λ_v) ω(σ′ v) = p ω(σ′;σ) ∧ dλ_v` with `σ′` the face opposite `v`.
pub fn verify_facepri(s: &OrientedSimplex, pos: usize) -> IdentityReport {
    let v = s.vertices()[pos];
    let case = format!("vertex {} of [{}]", v.0, vid(s.vertices()));
    let ctx = Arc::new(CoordSystem::simplex(s));
    let n = ctx.nvars();
    let p = s.card() - 1;
    let face = s.delete(pos);
    let full = append(&face, v);
    let lv = ctx.var(GroupKind::Lambda, v).expect("vertex");
    let lhs = whitney_in(&ctx, GroupKind::Lambda, full.vertices())
        .expect("cell")
        .mul_poly(&(&Poly::one(n) - &Poly::var(n, lv)));
    let rhs = if face.is_empty() {
        Form::zero(ctx.clone())
    } else {
        whitney_in(&ctx, GroupKind::Lambda, face.vertices())
            .expect("face")
            .wedge(&Form::dvar(ctx.clone(), lv))
            .scale(&q(p as i64))
    };
    IdentityReport::from_residual("facepri", case, &(&lhs - &rhs))
}

pub(super) fn facepro_cases(max_factor_dim: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let mut push_all = |dims: Vec<usize>| {
        let mut qs: Vec<Vec<usize>> = vec![vec![]];
        for &d in &dims {
            qs = qs
                .into_iter()
                .flat_map(|v| {
                    (0..d).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        for qv in qs {
            out.push((dims.clone(), qv));
        }
    };
    for a in 1..=max_factor_dim {
        for b in 1..=max_factor_dim {
            push_all(vec![a, b]);
        }
    }
    push_all(vec![1, 1, 1]);
    if max_factor_dim >= 2 {
        push_all(vec![2, 1, 1]);
    }
    out
}

/// Product of the faceface splittings on the factors of a prism, with the
/// blocks regrouped as `(∧ω′_j) ∧ (∧ω″_j) ∧ (∧du_j)`.
pub fn verify_facepro(dims: &[usize], qs: &[usize]) -> IdentityReport {
    let case = format!("dims {dims:?}, faces {qs:?}");
    let p = prism_of_dims(dims);
    let ctx = Arc::new(CoordSystem::prism(&p));
    let n = ctx.nvars();
    let mut lhs = Form::constant(ctx.clone(), q(1));
    let mut weight = Poly::one(n);
    let mut coef = q(1);
    let (mut fronts, mut rests, mut dus) = (Vec::new(), Vec::new(), Vec::new());
    // (class, factor, degree) of each block in the unregrouped product.
    let mut blocks = Vec::new();
    for (j, f) in p.factors.iter().enumerate() {
        let kind = GroupKind::Fiber(j as u32);
        let k = f.card() - (qs[j] + 1);
        let front = f.sub(|v| f.position(v).expect("vertex") >= k);
        let (full, rest) = reorder(f, &front);
        let (u, d) = du(&ctx, kind, front.vertices());
        lhs = lhs.wedge(&whitney_in(&ctx, kind, full.vertices()).expect("factor"));
        weight = &(&weight * &u) * &(&Poly::one(n) - &u);
        coef *= split_constant(dims[j], qs[j]);
        fronts.push(whitney_in(&ctx, kind, front.vertices()).expect("front"));
        rests.push(whitney_in(&ctx, kind, rest.vertices()).expect("rest"));
        dus.push(d);
        blocks.push((0, j, qs[j]));
        blocks.push((1, j, dims[j] - qs[j] - 1));
        blocks.push((2, j, 1));
    }
    let mut parity = 0;
    for a in 0..blocks.len() {
        for b in a + 1..blocks.len() {
            let (x, y) = (blocks[a], blocks[b]);
            if (x.0, x.1) > (y.0, y.1) {
                parity += x.2 * y.2;
            }
        }
    }
    let mut rhs = Form::constant(ctx.clone(), coef * sign_q(parity));
    for w in fronts.iter().chain(&rests).chain(&dus) {
        rhs = rhs.wedge(w);
    }
    let lhs = lhs.mul_poly(&weight);
    IdentityReport::from_residual("facepro", case, &(&lhs - &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_constants() {
        assert_eq!(split_constant(2, 0), q(2));
        assert_eq!(split_constant(3, 1), q(6));
    }

    #[test]
    fn small_cases_pass() {
        let s = standard_simplex(2);
        for f in s.faces(1).unwrap() {
            assert!(verify_lemcod_simplex(&s, &f).passed);
        }
        assert!(verify_bord(&s).passed);
        assert!(verify_satrap(&s, &OrientedSimplex::from_ids(&[1])).passed);
        assert!(verify_faceface(&s, &OrientedSimplex::from_ids(&[2])).passed);
        assert!(verify_facepri(&s, 0).passed);
        assert!(verify_facepro(&[1, 1], &[0, 0]).passed);
    }

    #[test]
    fn wrong_sign_is_caught() {
        let s = standard_simplex(2);
        let ctx = Arc::new(CoordSystem::simplex(&s));
        let f = s.delete(0);
        let bad = &whitney_extended_in(&ctx, &f).unwrap().d() + &whitney(&s);
        assert!(!IdentityReport::from_residual("x", String::new(), &bad).passed);
    }
}
