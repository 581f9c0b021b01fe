//! Acceptance criteria, one PASS/FAIL line each.

use std::sync::Arc;
use std::time::{Duration, Instant};

use prismal::fixtures;
use prismal::forms::{CoordSystem, Form};
use prismal::mesh::{boundary_chain, OrientedSimplex, PrismChain};
use prismal::poly::Poly;
use prismal::primitive::{
    extract_a, ode_residual, ode_solve, oracle_check, run_pipeline, source_system, PipelineOptions,
};
use prismal::sheaf::{build_pf, build_sf, check_pf_characterization, check_sf_characterization, same_stalks};
use prismal::verify::{prism_of_dims, random_poly, run_suite, standard_simplex, CheckOptions, IdentityReport, Suite};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn universe() -> CheckOptions {
    CheckOptions {
        max_dim: 4,
        max_factor_dim: 2,
        max_factors: 3,
        max_base_dim: 2,
        random_polys: 20,
        seed: 0x5eed,
    }
}

fn tally(reports: &[IdentityReport], names: &[&str]) -> Outcome {
    let picked: Vec<&IdentityReport> = reports
        .iter()
        .filter(|r| names.contains(&r.identity.as_str()))
        .collect();
    let failed: Vec<&&IdentityReport> = picked.iter().filter(|r| !r.passed).collect();
    let mut detail = format!("{}/{} cases", picked.len() - failed.len(), picked.len());
    if let Some(r) = failed.first() {
        detail += &format!("; first failure {} {}", r.identity, r.case);
    }
    Outcome {
        passed: !picked.is_empty() && failed.is_empty(),
        detail,
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    o.detail += &format!(", {:.1}s", took.as_secs_f64());
    if took > limit {
        o.passed = false;
        o.detail += &format!(" exceeds {}s", limit.as_secs());
    }
    o
}

fn codimension_one_faces() -> Outcome {
    timed(Duration::from_secs(30), || {
        tally(
            &run_suite(Suite::Lemcod, universe()),
            &["lemcod-simplex", "lemcod-prism"],
        )
    })
}

fn face_form_basis() -> Outcome {
    tally(&run_suite(Suite::Lemcod, universe()), &["lemcod-basis"])
}

fn antiboundary() -> Outcome {
    tally(&run_suite(Suite::Bord, universe()), &["bord"])
}

fn trivialization_pullback() -> Outcome {
    tally(&run_suite(Suite::Iminve, universe()), &["iminve"])
}

fn vertex_sums() -> Outcome {
    let mut reports = run_suite(Suite::Satrap, universe());
    reports.extend(run_suite(Suite::Satrapaz, universe()));
    tally(&reports, &["satrap", "satrapaz"])
}

fn face_products() -> Outcome {
    tally(
        &run_suite(Suite::Faceface, universe()),
        &["faceface", "facepri", "facepro"],
    )
}

fn fiber_mass() -> Outcome {
    tally(&run_suite(Suite::Relative, universe()), &["relative-mass"])
}

fn euler_equation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=6);
        let b = random_poly(&mut rng, n, 5, 6);
        let mut vars: Vec<usize> = (0..n).collect();
        vars.shuffle(&mut rng);
        vars.truncate(rng.gen_range(1..=n));
        let r = rng.gen_range(1..=4);
        if !ode_residual(&ode_solve(&b, &vars, r), &b, &vars, r).is_zero() {
            bad += 1;
        }
    }
    // The homogeneous equation has only the zero polynomial solution.
    let zero_ok = ode_solve(&Poly::zero(4), &[0, 1, 2, 3], 2).is_zero();
    let mut kernel = 0;
    for _ in 0..50 {
        let e = random_poly(&mut rng, 4, 5, 5);
        if !e.is_zero() && ode_residual(&e, &Poly::zero(4), &[0, 1, 2], 3).is_zero() {
            kernel += 1;
        }
    }
    Outcome {
        passed: bad == 0 && zero_ok && kernel == 0,
        detail: format!(
            "{} of 50 nonzero residuals, homogeneous input maps to zero: {zero_ok}, kernel hits {kernel}",
            bad
        ),
    }
}

/// `Σ_{|K|=r} p_K dλ_K` with random coefficients of degree ≤ `deg`.
fn random_form(ctx: &Arc<CoordSystem>, r: usize, deg: u32, rng: &mut ChaCha8Rng) -> Form {
    let n = ctx.nvars();
    let mut eta = Form::zero(ctx.clone());
    for _ in 0..3 {
        let mut vars: Vec<usize> = (0..n).collect();
        vars.shuffle(rng);
        vars.truncate(r);
        eta.add_assign_ref(&Form::dvars(ctx.clone(), &vars).mul_poly(&random_poly(rng, n, deg, 3)));
    }
    eta
}

fn end_to_end() -> Outcome {
    timed(Duration::from_secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut lines = Vec::new();
        let mut ok = true;
        for fx in [fixtures::two_edge_strip(), fixtures::tetrahedra_over_triangle()] {
            let eta = random_form(&source_system(&fx.morphism), 1, 3, &mut rng);
            let opts = PipelineOptions {
                check_horizontal: true,
                oracle_eps: None,
                seed: 0,
            };
            match run_pipeline(&fx.morphism, &eta, opts) {
                Ok(run) => {
                    let s = run.summary();
                    ok &= s.nonzero_residuals == 0 && s.horizontal_failures == 0 && s.horizontal_checks > 0;
                    lines.push(format!(
                        "{}: {} prisms, {} nonzero residuals, {}/{} horizontal",
                        fx.name,
                        s.prisms,
                        s.nonzero_residuals,
                        s.horizontal_checks - s.horizontal_failures,
                        s.horizontal_checks
                    ));
                }
                Err(e) => {
                    ok = false;
                    lines.push(format!("{}: {e}", fx.name));
                }
            }
        }
        Outcome {
            passed: ok,
            detail: lines.join("; "),
        }
    })
}

fn numeric_oracle() -> Outcome {
    let fx = fixtures::five_simplex();
    let sigma = OrientedSimplex::from_ids(&[10, 11, 12, 13, 14, 15]);
    let tau = OrientedSimplex::from_ids(&[0, 1, 2]);
    let ctx = Arc::new(CoordSystem::simplex(&sigma));
    let fibers = fx.morphism.fibers(&sigma, &tau);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut worst, mut count, mut nonzero) = (0.0f64, 0, 0);
    for k in 0..10 {
        let r = 1 + k % 3;
        let eta = random_form(&ctx, r, 3, &mut rng);
        let dec = extract_a(&eta, &fx.morphism, &sigma, &tau).expect("degree within the fibers");
        let w: Vec<f64> = (0..6).map(|_| rng.gen_range(0.2..1.0)).collect();
        let total: f64 = w.iter().sum();
        let x: Vec<f64> = w.iter().map(|v| v / total).collect();
        let sums: Vec<f64> = fibers
            .iter()
            .map(|f| f.vertices().iter().map(|v| x[sigma.position(*v).unwrap()]).sum())
            .collect();
        for e in oracle_check(&eta, &dec, &sums, &x, 1e-4) {
            worst = worst.max(e.error);
            count += 1;
            if e.exact.abs() > 1e-3 {
                nonzero += 1;
            }
        }
    }
    Outcome {
        passed: worst <= 1e-6 && nonzero > 0,
        detail: format!("{count} coefficients ({nonzero} nonzero), max error {worst:.2e}"),
    }
}

fn structure() -> Outcome {
    let mut failures = Vec::new();
    for fx in fixtures::all() {
        let sf = build_sf(&fx.morphism);
        let pf = build_pf(&fx.morphism);
        if !check_sf_characterization(&sf).holds {
            failures.push(format!("{} preimage", fx.name));
        }
        let (c, rebuilt) = check_pf_characterization(&pf);
        if !c.holds || !rebuilt.is_some_and(|r| same_stalks(&r, &sf)) {
            failures.push(format!("{} product", fx.name));
        }
    }
    let mut simplices = 0;
    for p in 0..=4 {
        let s = standard_simplex(p);
        for t in [s.clone(), s.reversed()] {
            simplices += 1;
            if !boundary_chain(&t).boundary().is_zero() {
                failures.push(format!("boundary of boundary of {t}"));
            }
        }
    }
    let mut prisms = 0;
    let mut dims: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..3 {
        dims = dims
            .iter()
            .flat_map(|d| (0..=2).map(move |k| [d.as_slice(), &[k]].concat()))
            .collect();
        for d in &dims {
            let mut chain = PrismChain::new();
            chain.add_prism(&prism_of_dims(d), 1);
            prisms += 1;
            if !chain.boundary().boundary().is_zero() {
                failures.push(format!("boundary of boundary of prism {d:?}"));
            }
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: format!(
            "{} fixtures, {simplices} simplices, {prisms} prisms{}",
            fixtures::all().len(),
            failures
                .first()
                .map(|f| format!("; first failure {f}"))
                .unwrap_or_default()
        ),
    }
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("codimension-one faces: d of face forms", codimension_one_faces),
        ("codimension-one faces: face forms form a basis", face_form_basis),
        ("antiboundary differentiates to the Whitney form", antiboundary),
        (
            "pullback of Whitney forms to the trivialization",
            trivialization_pullback,
        ),
        ("vertex sums and the Euler identity", vertex_sums),
        ("products of face forms, simplices and prisms", face_products),
        ("relative Whitney forms integrate to one on fibers", fiber_mass),
        ("Euler equation solver", euler_equation),
        ("relative primitives end to end", end_to_end),
        ("numeric oracle for face coefficients", numeric_oracle),
        ("sheaf characterizations and boundary of boundary", structure),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        all &= o.passed;
        println!(
            "{} {:>2} {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    if !all {
        std::process::exit(1);
    }
}
