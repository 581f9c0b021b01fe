//! Executable checks of the Whitney-form identities.
//!
//! Every check compares two sides after [`Form::canonicalize`] and reports
//! the canonical residual on failure. Cases are generated exhaustively
//! within the requested bounds; random polynomial data use a seeded
//! generator, so reports are reproducible.

mod identities;
mod relative;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::forms::Form;

pub use identities::{
    lemcod_basis_cases, lemcod_prism_cases, lemcod_simplex_cases, prism_of_dims, random_poly, standard_simplex,
    verify_bord, verify_faceface, verify_facepri, verify_facepro, verify_iminve, verify_lemcod_basis,
    verify_lemcod_prism, verify_lemcod_simplex, verify_satrap, verify_satrapaz,
};
pub use relative::verify_relative;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub case: String,
    pub passed: bool,
    /// Canonical residual (or other witness) when the check fails.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<String>,
}

impl IdentityReport {
    pub fn from_residual(identity: &str, case: String, residual: &Form) -> Self {
        let r = residual.canonicalize();
        IdentityReport {
            identity: identity.into(),
            case,
            passed: r.is_zero(),
            residual: (!r.is_zero()).then(|| r.display()),
        }
    }

    pub fn from_bool(identity: &str, case: String, ok: bool, witness: impl FnOnce() -> String) -> Self {
        IdentityReport {
            identity: identity.into(),
            case,
            passed: ok,
            residual: (!ok).then(witness),
        }
    }

    pub fn error(identity: &str, case: String, e: impl std::fmt::Display) -> Self {
        IdentityReport {
            identity: identity.into(),
            case,
            passed: false,
            residual: Some(format!("error: {e}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    All,
    Lemcod,
    Bord,
    Satrap,
    Satrapaz,
    Iminve,
    Faceface,
    Relative,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "all" => Suite::All,
            "lemcod" => Suite::Lemcod,
            "bord" => Suite::Bord,
            "satrap" => Suite::Satrap,
            "satrapaz" => Suite::Satrapaz,
            "iminve" => Suite::Iminve,
            "faceface" => Suite::Faceface,
            "relative" => Suite::Relative,
            other => return Err(format!("unknown suite {other:?}")),
        })
    }
}

/// Bounds of the generated universe.
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Largest simplex dimension.
    pub max_dim: usize,
    /// Largest prism factor dimension.
    pub max_factor_dim: usize,
    /// Largest number of prism factors.
    pub max_factors: usize,
    /// Largest base dimension for pullback checks.
    pub max_base_dim: usize,
    /// Number of random polynomials per case.
    pub random_polys: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            max_dim: 4,
            max_factor_dim: 2,
            max_factors: 3,
            max_base_dim: 2,
            random_polys: 20,
            seed: 0x5eed,
        }
    }
}

type Case = Box<dyn Fn() -> Vec<IdentityReport> + Send + Sync>;

fn cases(suite: Suite, o: CheckOptions) -> Vec<Case> {
    let mut out: Vec<Case> = Vec::new();
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Lemcod) {
        for (s, f) in lemcod_simplex_cases(o.max_dim) {
            out.push(Box::new(move || vec![verify_lemcod_simplex(&s, &f)]));
        }
        for (p, q) in lemcod_prism_cases(o.max_factor_dim, o.max_factors) {
            out.push(Box::new(move || vec![verify_lemcod_prism(&p, &q)]));
        }
        for p in lemcod_basis_cases(o.max_dim, o.max_factor_dim, o.max_factors) {
            out.push(Box::new(move || vec![verify_lemcod_basis(&p)]));
        }
    }
    if want(Suite::Bord) {
        for p in 1..=o.max_dim {
            out.push(Box::new(move || vec![verify_bord(&standard_simplex(p))]));
        }
    }
    if want(Suite::Satrap) {
        for p in 1..=o.max_dim {
            for (s, g) in identities::satrap_cases(p) {
                out.push(Box::new(move || vec![verify_satrap(&s, &g)]));
            }
        }
    }
    if want(Suite::Satrapaz) {
        for p in 1..=o.max_dim {
            for (s, g) in identities::satrap_cases(p) {
                if g.card() > 3 {
                    continue;
                }
                let seed = o.seed;
                let n = o.random_polys;
                out.push(Box::new(move || identities::satrapaz_batch(&s, &g, n, seed)));
            }
        }
    }
    if want(Suite::Iminve) {
        for (f, s, t) in identities::iminve_cases(o.max_dim, o.max_base_dim) {
            out.push(Box::new(move || vec![verify_iminve(&f, &s, &t)]));
        }
    }
    if want(Suite::Faceface) {
        for p in 1..=o.max_dim {
            let s = standard_simplex(p);
            for q in 0..p {
                for face in s.faces(q).unwrap() {
                    let s = s.clone();
                    out.push(Box::new(move || vec![verify_faceface(&s, &face)]));
                }
            }
            for v in 0..=p {
                let s = s.clone();
                out.push(Box::new(move || vec![verify_facepri(&s, v)]));
            }
        }
        for (dims, qs) in identities::facepro_cases(o.max_factor_dim) {
            out.push(Box::new(move || vec![verify_facepro(&dims, &qs)]));
        }
    }
    if want(Suite::Relative) {
        for fx in crate::fixtures::all() {
            out.push(Box::new(move || verify_relative(&fx.morphism, fx.name)));
        }
    }
    out
}

/// Runs a suite in parallel; reports come back in case order.
pub fn run_suite(suite: Suite, opts: CheckOptions) -> Vec<IdentityReport> {
    let cs = cases(suite, opts);
    let nested: Vec<Vec<IdentityReport>> = cs.par_iter().map(|c| c()).collect();
    nested.into_iter().flatten().collect()
}

/// Count of passing and failing reports per identity name.
pub fn summarize(reports: &[IdentityReport]) -> Vec<(String, usize, usize)> {
    let mut m: std::collections::BTreeMap<String, (usize, usize)> = Default::default();
    for r in reports {
        let e = m.entry(r.identity.clone()).or_default();
        if r.passed {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    m.into_iter().map(|(k, (a, b))| (k, a, b)).collect()
}
