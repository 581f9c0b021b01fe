use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::assemble::{assemble_c, cone_correction, fiber_target, h_from_c, CTerm};
use super::descend::{descend, descent_residual, RationalForm};
use super::extract::{decomposition_residual, extract_a, FiberwiseDecomposition};
use super::oracle::{oracle_check, OracleEntry};
use crate::error::{Error, Result};
use crate::forms::{de_form, CoordSystem, Form, FormFile, GroupKind, PolyCoordinateMap};
use crate::mesh::{OrientedSimplex, SimplicialMorphism, VertexId};
use crate::poly::{q_to_f64, Poly};

/// Reads a form given on the source complex (one `λ` group over all its
/// vertices, i.e. in the piecewise-linear hat functions) on one simplex.
pub fn restrict_global(eta: &Form, sigma: &OrientedSimplex) -> Result<Form> {
    let ctx = eta.ctx();
    if ctx.groups().len() != 1 || ctx.groups()[0].kind != GroupKind::Lambda {
        return Err(Error::Validation(
            "input form must live on a single barycentric group over the source vertices".into(),
        ));
    }
    for v in sigma.vertices() {
        if ctx.var(GroupKind::Lambda, *v).is_none() {
            return Err(Error::Validation(format!(
                "vertex {v} of {sigma} is missing from the form's context"
            )));
        }
    }
    let (rc, map) = ctx.restricted(|_, v| sigma.contains(v))?;
    let local = eta.restrict(Arc::new(rc), &map);
    Ok(local
        .embed(Arc::new(CoordSystem::simplex(sigma)))
        .expect("same vertex set"))
}

/// Barycentric system over every vertex of the source complex, the home of
/// input forms.
pub fn source_system(f: &SimplicialMorphism) -> Arc<CoordSystem> {
    let all = OrientedSimplex::new(f.source.vertices().collect()).expect("distinct vertices");
    Arc::new(CoordSystem::simplex(&all))
}

/// Checks that a form lives over vertices of the source complex.
pub fn validate_input(f: &SimplicialMorphism, eta: &Form) -> Result<usize> {
    let ctx = eta.ctx();
    if ctx.groups().len() != 1 || ctx.groups()[0].kind != GroupKind::Lambda {
        return Err(Error::Validation(
            "input form must live on a single barycentric group over the source vertices".into(),
        ));
    }
    let verts: Vec<VertexId> = f.source.vertices().collect();
    for v in &ctx.groups()[0].vertices {
        if !verts.contains(v) {
            return Err(Error::Validation(format!(
                "form uses vertex {v}, which is not in the complex"
            )));
        }
    }
    for v in &verts {
        if ctx.var(GroupKind::Lambda, *v).is_none() {
            return Err(Error::Validation(format!(
                "form context misses vertex {v} of the complex"
            )));
        }
    }
    match eta.degrees().as_slice() {
        [r] if *r >= 1 => Ok(*r),
        [] => Err(Error::Degree("the zero form has no well-defined degree".into())),
        [0] => Err(Error::Degree("0-forms have no relative primitive".into())),
        d => Err(Error::Degree(format!("form of mixed degrees {d:?}"))),
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PipelineOptions {
    pub check_horizontal: bool,
    /// Homothety ratio for the floating-point cross-check of `Ã_φ`.
    pub oracle_eps: Option<f64>,
    pub seed: u64,
}

/// Everything computed on one prism `π(σ)` over `τ`.
#[derive(Clone, Debug)]
pub struct PrismPrimitive {
    pub tau: OrientedSimplex,
    pub sigma: OrientedSimplex,
    pub fibers: Vec<OrientedSimplex>,
    pub eta: Form,
    pub decomposition: Option<FiberwiseDecomposition>,
    pub c_terms: Vec<CTerm>,
    /// Cone correction on non-top fibers (zero when the fiber degree is top).
    pub correction: Form,
    pub h: Form,
    pub h_s: RationalForm,
    /// `de ∧ (ψ^*η − dH)`, canonical.
    pub residual: Form,
    pub decomposition_residual: Form,
    pub descent_residual: Form,
}

impl PrismPrimitive {
    pub fn ctx(&self) -> &Arc<CoordSystem> {
        self.h.ctx_arc()
    }
}

fn build_prism(
    f: &SimplicialMorphism,
    eta_global: &Form,
    r: usize,
    tau: &OrientedSimplex,
    sigma: &OrientedSimplex,
) -> Result<PrismPrimitive> {
    let eta = restrict_global(eta_global, sigma)?;
    let psi = PolyCoordinateMap::psi(f, sigma, tau)?;
    let ctx = psi.source.clone();
    let fibers = f.fibers(sigma, tau);
    let zero = Form::zero(ctx.clone());
    let (decomposition, c_terms, correction, h) = if f.relative_dim(sigma) < r {
        (None, Vec::new(), zero.clone(), zero.clone())
    } else {
        let dec = extract_a(&eta, f, sigma, tau)?;
        let terms = assemble_c(&dec)?;
        let h_c = h_from_c(&dec, &terms);
        let omega1 = fiber_target(&eta, &dec);
        let corr = cone_correction(&omega1, &h_c)?;
        let h = (&h_c + &corr).canonicalize();
        (Some(dec), terms, corr, h)
    };
    let de = de_form(&ctx)?;
    let residual = de.wedge(&(&psi.pullback(&eta) - &h.d())).canonicalize();
    let dres = match &decomposition {
        Some(dec) => decomposition_residual(&eta, dec),
        None => zero.clone(),
    };
    let h_s = descend(&h, f, sigma, tau);
    let descent_res = descent_residual(&h, &h_s, &psi);
    Ok(PrismPrimitive {
        tau: tau.clone(),
        sigma: sigma.clone(),
        fibers,
        eta,
        decomposition,
        c_terms,
        correction,
        h,
        h_s,
        residual,
        decomposition_residual: dres,
        descent_residual: descent_res,
    })
}

/// Specialization of `H` on `π(σ)` over `τ` to a face `τ′`, compared with
/// `H` built directly on `π(σ ∩ f^{-1}τ′)` over `τ′`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HorizontalCheck {
    pub tau: Vec<u32>,
    pub face: Vec<u32>,
    pub sigma: Vec<u32>,
    /// Whether every dropped fiber is a point.
    pub equidimensional: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

/// Restriction of `H` on `π(σ)` to the sub-prism `π(ρ)` of a face `ρ`
/// over the same base simplex, compared with `H` built on `π(ρ)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GluingCheck {
    pub tau: Vec<u32>,
    pub cell: Vec<u32>,
    pub face: Vec<u32>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

/// Result of the whole construction on a simplicial map.
#[derive(Clone, Debug)]
pub struct PrimitiveRun {
    pub degree: usize,
    pub prisms: Vec<PrismPrimitive>,
    pub horizontal: Vec<HorizontalCheck>,
    pub gluing: Vec<GluingCheck>,
    pub oracle: Vec<OracleEntry>,
    pub oracle_eps: Option<f64>,
}

/// Largest accepted gap between the oracle and the exact coefficient.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

impl PrimitiveRun {
    pub fn residuals_vanish(&self) -> bool {
        self.prisms
            .iter()
            .all(|p| p.residual.is_zero() && p.decomposition_residual.is_zero() && p.descent_residual.is_zero())
    }

    pub fn horizontal_ok(&self) -> bool {
        self.horizontal.iter().all(|h| h.passed)
    }

    pub fn oracle_ok(&self) -> bool {
        self.oracle.iter().all(|o| o.error <= ORACLE_TOLERANCE)
    }

    pub fn passed(&self) -> bool {
        self.residuals_vanish() && self.horizontal_ok() && self.oracle_ok()
    }

    pub fn prism(&self, tau: &OrientedSimplex, sigma: &OrientedSimplex) -> Option<&PrismPrimitive> {
        self.prisms
            .iter()
            .find(|p| p.tau.same_cell(tau) && p.sigma.same_cell(sigma))
    }
}

/// Builds `H` on every prism `π(σ)` of the map, for every simplex `σ` of
/// the source over every simplex `τ` of the target, and runs the checks.
pub fn run_pipeline(f: &SimplicialMorphism, eta: &Form, opts: PipelineOptions) -> Result<PrimitiveRun> {
    let r = validate_input(f, eta)?;
    let mut jobs = Vec::new();
    for tau in f.target.simplices() {
        for sigma in f.simplices_over(&tau) {
            jobs.push((tau.clone(), sigma));
        }
    }
    let prisms: Vec<PrismPrimitive> = jobs
        .par_iter()
        .map(|(tau, sigma)| build_prism(f, eta, r, tau, sigma))
        .collect::<Result<_>>()?;

    let index: BTreeMap<(Vec<VertexId>, Vec<VertexId>), usize> = prisms
        .iter()
        .enumerate()
        .map(|(i, p)| ((p.tau.key(), p.sigma.key()), i))
        .collect();

    let mut horizontal = Vec::new();
    if opts.check_horizontal {
        for p in &prisms {
            for face in p.tau.all_faces() {
                if face.is_empty() || face.card() == p.tau.card() {
                    continue;
                }
                horizontal.push(check_horizontal(f, p, &face, &prisms, &index)?);
            }
        }
    }

    let mut gluing = Vec::new();
    for p in &prisms {
        for q in &prisms {
            if q.tau.same_cell(&p.tau) && q.sigma.card() < p.sigma.card() && q.sigma.is_face_of(&p.sigma) {
                gluing.push(check_gluing(p, q)?);
            }
        }
    }

    let mut oracle = Vec::new();
    if let Some(eps) = opts.oracle_eps {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for p in &prisms {
            if let Some(dec) = &p.decomposition {
                let w: Vec<f64> = (0..p.sigma.card()).map(|_| rng.gen_range(0.2..1.0)).collect();
                let total: f64 = w.iter().sum();
                let x: Vec<f64> = w.iter().map(|v| v / total).collect();
                let sums: Vec<f64> = p
                    .fibers
                    .iter()
                    .map(|fj| {
                        fj.vertices()
                            .iter()
                            .map(|v| x[p.sigma.position(*v).expect("vertex")])
                            .sum()
                    })
                    .collect();
                oracle.extend(oracle_check(&p.eta, dec, &sums, &x, eps));
            }
        }
    }

    Ok(PrimitiveRun {
        degree: r,
        prisms,
        horizontal,
        gluing,
        oracle,
        oracle_eps: opts.oracle_eps,
    })
}

fn check_horizontal(
    f: &SimplicialMorphism,
    p: &PrismPrimitive,
    face: &OrientedSimplex,
    prisms: &[PrismPrimitive],
    index: &BTreeMap<(Vec<VertexId>, Vec<VertexId>), usize>,
) -> Result<HorizontalCheck> {
    let sub = f.restrict_over(&p.sigma, face);
    let other = index
        .get(&(face.key(), sub.key()))
        .map(|&i| &prisms[i])
        .ok_or_else(|| Error::Structure(format!("no prism for {sub} over {face}")))?;
    let (rc, map) = p.ctx().restricted(|k, v| k != GroupKind::Param || face.contains(v))?;
    let rc = Arc::new(rc);
    let restricted = p.h.restrict(rc.clone(), &map);
    let embedded = other
        .h
        .embed(rc.clone())
        .ok_or_else(|| Error::Structure("specialized prism does not embed".into()))?;
    let diff = (&restricted - &embedded).canonicalize();
    let equidimensional = p
        .tau
        .vertices()
        .iter()
        .zip(&p.fibers)
        .all(|(y, fj)| face.contains(*y) || fj.card() == 1);
    Ok(HorizontalCheck {
        tau: p.tau.ids(),
        face: face.ids(),
        sigma: p.sigma.ids(),
        equidimensional,
        passed: diff.is_zero(),
        witness: (!diff.is_zero()).then(|| diff.display()),
    })
}

fn check_gluing(p: &PrismPrimitive, q: &PrismPrimitive) -> Result<GluingCheck> {
    let (rc, map) = p
        .ctx()
        .restricted(|k, v| k == GroupKind::Param || q.sigma.contains(v))?;
    let rc = Arc::new(rc);
    let restricted = p.h.restrict(rc.clone(), &map);
    let embedded =
        q.h.embed(rc)
            .ok_or_else(|| Error::Structure("face prism does not embed".into()))?;
    let diff = (&restricted - &embedded).canonicalize();
    Ok(GluingCheck {
        tau: p.tau.ids(),
        cell: p.sigma.ids(),
        face: q.sigma.ids(),
        passed: diff.is_zero(),
        witness: (!diff.is_zero()).then(|| diff.display()),
    })
}

// ---------------------------------------------------------------- output files

fn function_file(ctx: &Arc<CoordSystem>, p: &Poly) -> FormFile {
    FormFile::from_form(&Form::function(ctx.clone(), p.clone()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub phi: Vec<u32>,
    pub pieces: Vec<Vec<u32>>,
    pub tilde_a: FormFile,
    pub a: FormFile,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CFile {
    pub phi: Vec<u32>,
    pub gamma: Vec<u32>,
    pub c_tilde: FormFile,
    /// Full coefficient of `ω(π(γ)/τ;π(σ))` in `H`.
    pub weight: FormFile,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalFormFile {
    pub numerator: FormFile,
    pub denominator: FormFile,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrismFile {
    pub tau: Vec<u32>,
    pub sigma: Vec<u32>,
    pub fibers: Vec<Vec<u32>>,
    pub decomposition: Vec<CoefficientFile>,
    pub c: Vec<CFile>,
    /// Vertical gluing coefficients; always empty, see [`PrimitiveFile::gluing`].
    pub d: Vec<CFile>,
    pub correction: FormFile,
    pub h: FormFile,
    pub h_s: RationalFormFile,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub decomposition_residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub descent_residual: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub prisms: usize,
    pub nonzero_residuals: usize,
    pub nonzero_decomposition_residuals: usize,
    pub nonzero_descent_residuals: usize,
    pub horizontal_checks: usize,
    pub horizontal_failures: usize,
    pub gluing_checks: usize,
    pub gluing_mismatches: usize,
    pub oracle_checks: usize,
    pub oracle_max_error: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrimitiveFile {
    pub degree: usize,
    pub prisms: Vec<PrismFile>,
    pub horizontal: Vec<HorizontalCheck>,
    /// Agreement of `H` between a prism and its sub-prisms over the same base
    /// simplex. Reported, not enforced.
    pub gluing: Vec<GluingCheck>,
    pub oracle: Vec<OracleEntry>,
    pub summary: ResidualSummary,
}

fn nonzero(f: &Form) -> Option<String> {
    (!f.is_zero()).then(|| f.display())
}

impl PrimitiveRun {
    pub fn summary(&self) -> ResidualSummary {
        ResidualSummary {
            prisms: self.prisms.len(),
            nonzero_residuals: self.prisms.iter().filter(|p| !p.residual.is_zero()).count(),
            nonzero_decomposition_residuals: self
                .prisms
                .iter()
                .filter(|p| !p.decomposition_residual.is_zero())
                .count(),
            nonzero_descent_residuals: self.prisms.iter().filter(|p| !p.descent_residual.is_zero()).count(),
            horizontal_checks: self.horizontal.len(),
            horizontal_failures: self.horizontal.iter().filter(|h| !h.passed).count(),
            gluing_checks: self.gluing.len(),
            gluing_mismatches: self.gluing.iter().filter(|g| !g.passed).count(),
            oracle_checks: self.oracle.len(),
            oracle_max_error: self.oracle.iter().map(|o| o.error).reduce(f64::max),
            passed: self.passed(),
        }
    }

    pub fn to_file(&self) -> PrimitiveFile {
        let prisms = self
            .prisms
            .iter()
            .map(|p| {
                let ctx = p.ctx().clone();
                let sctx = Arc::new(CoordSystem::simplex(&p.sigma));
                let decomposition = p
                    .decomposition
                    .iter()
                    .flat_map(|d| &d.faces)
                    .map(|fc| CoefficientFile {
                        phi: fc.face.phi.ids(),
                        pieces: fc.face.pieces.iter().map(|x| x.ids()).collect(),
                        tilde_a: function_file(&sctx, &fc.tilde_a),
                        a: function_file(&sctx, &fc.a),
                    })
                    .collect();
                let c = p
                    .c_terms
                    .iter()
                    .map(|t| CFile {
                        phi: t.face.phi.ids(),
                        gamma: t.gamma.phi.ids(),
                        c_tilde: function_file(&ctx, &t.c_tilde),
                        weight: function_file(&ctx, &t.weight),
                    })
                    .collect();
                PrismFile {
                    tau: p.tau.ids(),
                    sigma: p.sigma.ids(),
                    fibers: p.fibers.iter().map(|x| x.ids()).collect(),
                    decomposition,
                    c,
                    d: Vec::new(),
                    correction: FormFile::from_form(&p.correction),
                    h: FormFile::from_form(&p.h),
                    h_s: RationalFormFile {
                        numerator: FormFile::from_form(&p.h_s.numerator),
                        denominator: function_file(&sctx, &p.h_s.denominator),
                    },
                    residual: nonzero(&p.residual),
                    decomposition_residual: nonzero(&p.decomposition_residual),
                    descent_residual: nonzero(&p.descent_residual),
                }
            })
            .collect();
        PrimitiveFile {
            degree: self.degree,
            prisms,
            horizontal: self.horizontal.clone(),
            gluing: self.gluing.clone(),
            oracle: self.oracle.clone(),
            summary: self.summary(),
        }
    }
}

/// Value of a polynomial coefficient at a rational point, as a float.
pub fn eval_at(p: &Poly, point: &[crate::poly::Q]) -> f64 {
    q_to_f64(&p.eval(point))
}
