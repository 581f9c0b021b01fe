use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use super::extract::{FiberwiseDecomposition, RelativeFace};
use crate::forms::Form;
use crate::mesh::OrientedSimplex;

/// Floating-point estimate of `Ã_φ(x)` next to its exact value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleEntry {
    pub phi: Vec<u32>,
    pub point: Vec<f64>,
    pub exact: f64,
    pub estimate: f64,
    pub error: f64,
}

fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .expect("nonempty");
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let k = m[r][c] / m[c][c];
            for cc in c..n {
                m[r][cc] -= k * m[c][cc];
            }
        }
    }
    d
}

/// Tensor Gauss–Legendre rule on `[0,1]^p` pushed to the standard
/// `p`-simplex by the collapsed (Duffy) map.
fn simplex_rule(quad: &GaussLegendre, p: usize) -> Vec<(Vec<f64>, f64)> {
    let line: Vec<(f64, f64)> = quad
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect();
    let mut out = vec![(Vec::new(), 1.0)];
    for _ in 0..p {
        out = out
            .into_iter()
            .flat_map(|(w, wt)| {
                line.iter().map(move |&(x, lw)| {
                    let mut w2 = w.clone();
                    w2.push(x);
                    (w2, wt * lw)
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|(w, wt)| {
            let mut u = Vec::with_capacity(p);
            let mut rest = 1.0;
            let mut jac = 1.0;
            for &wi in &w {
                u.push(wi * rest);
                jac *= rest;
                rest *= 1.0 - wi;
            }
            (u, wt * jac)
        })
        .collect()
}

/// `∫_{S_ε} η / vol(S_ε)` where `S_ε` is the image of `φ`'s fiber through
/// `x` under the homothety of ratio `ε` centred at `x`, and the volume is
/// normalized so that the edge vectors `t_j (e_v − e_{φ_j[0]})` span a unit cell.
pub fn homothety_ratio(
    eta: &Form,
    sigma: &OrientedSimplex,
    face: &RelativeFace,
    x: &[f64],
    t: &[f64],
    eps: f64,
) -> f64 {
    let quad = GaussLegendre::new(NonZeroUsize::new(6).expect("positive"));
    let rules: Vec<Vec<(Vec<f64>, f64)>> = face.pieces.iter().map(|p| simplex_rule(&quad, p.card() - 1)).collect();
    let n = sigma.card();
    let r = face.relative_dim();

    // Tangent columns ∂λ/∂u, factor by factor.
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for (j, p) in face.pieces.iter().enumerate() {
        let v0 = sigma.position(p.vertices()[0]).expect("vertex");
        for v in &p.vertices()[1..] {
            let mut c = vec![0.0; n];
            c[sigma.position(*v).expect("vertex")] += eps * t[j];
            c[v0] -= eps * t[j];
            cols.push(c);
        }
    }
    let terms: Vec<(Vec<usize>, &crate::poly::Poly)> = eta.terms().map(|(k, p)| (k.clone(), p)).collect();
    let minors: Vec<f64> = terms
        .iter()
        .map(|(key, _)| det((0..r).map(|a| key.iter().map(|&i| cols[a][i]).collect()).collect()))
        .collect();

    let mut total = 0.0;
    let mut idx = vec![0usize; rules.len()];
    loop {
        let mut lambda: Vec<f64> = x.iter().map(|v| (1.0 - eps) * v).collect();
        let mut weight = 1.0;
        for (j, p) in face.pieces.iter().enumerate() {
            let (u, w) = &rules[j][idx[j]];
            weight *= w;
            let mut mu0 = 1.0;
            for (k, v) in p.vertices()[1..].iter().enumerate() {
                lambda[sigma.position(*v).expect("vertex")] += eps * t[j] * u[k];
                mu0 -= u[k];
            }
            lambda[sigma.position(p.vertices()[0]).expect("vertex")] += eps * t[j] * mu0;
        }
        let mut val = 0.0;
        for ((_, p), m) in terms.iter().zip(&minors) {
            if *m != 0.0 {
                val += p.eval_f64(&lambda) * m;
            }
        }
        total += weight * val;
        // Next multi-index.
        let mut k = 0;
        loop {
            if k == idx.len() {
                let mut vol = eps.powi(r as i32);
                for (j, p) in face.pieces.iter().enumerate() {
                    let pj = p.card() - 1;
                    vol *= t[j].powi(pj as i32) / (1..=pj).map(|i| i as f64).product::<f64>();
                }
                return total / vol;
            }
            idx[k] += 1;
            if idx[k] < rules[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Compares `Ã_φ(x)` with the Richardson-extrapolated homothety ratio
/// `2R(ε/2) − R(ε)` for every face of the decomposition.
pub fn oracle_check(
    eta: &Form,
    dec: &FiberwiseDecomposition,
    tau_sums: &[f64],
    x: &[f64],
    eps: f64,
) -> Vec<OracleEntry> {
    dec.faces
        .iter()
        .map(|fc| {
            let exact = fc.tilde_a.eval_f64(x);
            let r1 = homothety_ratio(eta, &dec.sigma, &fc.face, x, tau_sums, eps);
            let r2 = homothety_ratio(eta, &dec.sigma, &fc.face, x, tau_sums, eps / 2.0);
            let estimate = 2.0 * r2 - r1;
            OracleEntry {
                phi: fc.face.phi.ids(),
                point: x.to_vec(),
                exact,
                estimate,
                error: (estimate - exact).abs(),
            }
        })
        .collect()
}
