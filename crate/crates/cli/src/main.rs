use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use prismal::error::{Error, Result};
use prismal::fixtures;
use prismal::forms::FormFile;
use prismal::mesh::{ComplexFile, MorphismFile, SimplicialComplex, SimplicialMorphism};
use prismal::primitive::{run_pipeline, PipelineOptions};
use prismal::sheaf::{
    build_pf, build_sf, check_pf_characterization, check_sf_characterization, dump_sheaf, same_stalks, sheaf_from_dump,
    Characterization, SheafDump, SheafKind,
};
use prismal::verify::{run_suite, summarize, verify_relative, CheckOptions, IdentityReport, Suite};

macro_rules! identity_map {
    () => {
        "identity map v1
  lemcod    codimension-one faces: traces, kernel dimension, face-form rank
  bord      boundary of a simplex against the Whitney forms of its faces
  satrap    sum of Whitney forms over a vertex set
  satrapaz  Euler-operator identity for polynomial coefficients
  iminve    pullback of Whitney forms along the trivialization
  faceface  products of Whitney forms of complementary faces and of prisms
  relative  relative Whitney forms on every fixture"
    };
}

#[derive(Parser)]
#[command(name = "prismal", version, long_version = concat!(env!("CARGO_PKG_VERSION"), "\n", identity_map!()), about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Input {
    /// Source complex (JSON).
    #[arg(long, requires = "morphism", conflicts_with = "fixture")]
    complex: Option<PathBuf>,
    /// Vertex map and optional target complex (JSON).
    #[arg(long, requires = "complex")]
    morphism: Option<PathBuf>,
    /// A built-in fixture instead of files.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Preimage,
    Product,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Check the identities over generated cases.
    Check {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write every case report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Also check the relative forms of a user-supplied map.
        #[command(flatten)]
        input: Input,
    },
    /// Build the sheaves of a map and check their characterizations.
    Sheaf {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "both")]
        kind: KindArg,
        /// Write the sheaf dump here.
        #[arg(long)]
        dump_sheaf: Option<PathBuf>,
        /// Check a hand-written sheaf dump instead of building one.
        #[arg(long, conflicts_with_all = ["complex", "fixture"])]
        load: Option<PathBuf>,
    },
    /// Build relative primitives of a form.
    Primitive {
        #[command(flatten)]
        input: Input,
        /// Form on the source complex (JSON).
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        check_horizontal: bool,
        /// Cross-check the face coefficients numerically at this homothety ratio.
        #[arg(long)]
        oracle_eps: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

impl Input {
    fn is_given(&self) -> bool {
        self.complex.is_some() || self.fixture.is_some()
    }

    fn load(&self) -> Result<(String, SimplicialMorphism)> {
        if let Some(name) = &self.fixture {
            let fx = fixtures::by_name(name).ok_or_else(|| Error::Validation(format!("unknown fixture {name:?}")))?;
            return Ok((fx.name.to_string(), fx.morphism));
        }
        let (Some(c), Some(m)) = (&self.complex, &self.morphism) else {
            return Err(Error::Validation("give --complex and --morphism, or --fixture".into()));
        };
        let complex: ComplexFile = read_json(c)?;
        let morphism: MorphismFile = read_json(m)?;
        let source = SimplicialComplex::from_file(&complex)?;
        let f = SimplicialMorphism::from_file(source, &morphism)?;
        Ok((c.display().to_string(), f))
    }
}

fn print_reports(reports: &[IdentityReport]) -> bool {
    for (name, passed, failed) in summarize(reports) {
        println!("{name:<10} {passed}/{}", passed + failed);
    }
    let failed: Vec<&IdentityReport> = reports.iter().filter(|r| !r.passed).collect();
    for r in failed.iter().take(20) {
        println!(
            "FAIL {} {}: {}",
            r.identity,
            r.case,
            r.residual.as_deref().unwrap_or("")
        );
    }
    failed.is_empty()
}

fn cmd_check(
    suite: Suite,
    max_dim: Option<usize>,
    seed: Option<u64>,
    json: Option<PathBuf>,
    input: Input,
) -> Result<bool> {
    let mut opts = CheckOptions::default();
    if let Some(d) = max_dim {
        opts.max_dim = d;
    }
    if let Some(s) = seed {
        opts.seed = s;
    }
    let extra = if input.is_given() {
        let (name, f) = input.load()?;
        verify_relative(&f, &name)
    } else {
        Vec::new()
    };
    let mut reports = run_suite(suite, opts);
    reports.extend(extra);
    let ok = print_reports(&reports);
    if let Some(path) = json {
        write_json(&path, &reports)?;
    }
    Ok(ok)
}

fn report(label: &str, c: &Characterization) -> bool {
    match &c.witness {
        None => println!("{label}: holds"),
        Some(w) => println!("{label}: fails ({w})"),
    }
    c.holds
}

fn cmd_sheaf(input: Input, kind: KindArg, dump: Option<PathBuf>, load: Option<PathBuf>) -> Result<bool> {
    if let Some(path) = load {
        let d: SheafDump = read_json(&path)?;
        let sheaf = sheaf_from_dump(&d)?;
        let c = match sheaf.kind {
            SheafKind::Preimage => check_sf_characterization(&sheaf),
            SheafKind::Product => check_pf_characterization(&sheaf).0,
        };
        let label = match sheaf.kind {
            SheafKind::Preimage => "preimage characterization",
            SheafKind::Product => "product characterization",
        };
        return Ok(report(label, &c));
    }
    let (_, f) = input.load()?;
    let sf = build_sf(&f);
    let pf = build_pf(&f);
    let mut ok = true;
    if matches!(kind, KindArg::Preimage | KindArg::Both) {
        ok &= report("preimage characterization", &check_sf_characterization(&sf));
    }
    if matches!(kind, KindArg::Product | KindArg::Both) {
        let (c, rebuilt) = check_pf_characterization(&pf);
        ok &= report("product characterization", &c);
        if let Some(r) = rebuilt {
            let same = same_stalks(&r, &sf);
            println!(
                "preimages rebuilt from products: {}",
                if same { "match" } else { "differ" }
            );
            ok &= same;
        }
    }
    if let Some(path) = dump {
        let d = match kind {
            KindArg::Preimage => serde_json::to_value(dump_sheaf(&sf))?,
            KindArg::Product => serde_json::to_value(dump_sheaf(&pf))?,
            KindArg::Both => serde_json::json!({ "preimage": dump_sheaf(&sf), "product": dump_sheaf(&pf) }),
        };
        write_json(&path, &d)?;
    }
    Ok(ok)
}

fn cmd_primitive(input: Input, form: PathBuf, out: PathBuf, opts: PipelineOptions) -> Result<bool> {
    let (_, f) = input.load()?;
    let file: FormFile = read_json(&form)?;
    let eta = file.to_form()?;
    let run = run_pipeline(&f, &eta, opts)?;
    let s = run.summary();
    println!("degree {}, {} prisms", run.degree, s.prisms);
    println!("nonzero residuals: {}", s.nonzero_residuals);
    println!("nonzero decomposition residuals: {}", s.nonzero_decomposition_residuals);
    println!("nonzero descent residuals: {}", s.nonzero_descent_residuals);
    if opts.check_horizontal {
        println!(
            "horizontal checks: {}/{} pass",
            s.horizontal_checks - s.horizontal_failures,
            s.horizontal_checks
        );
    }
    println!(
        "gluing across prisms: {}/{} agree",
        s.gluing_checks - s.gluing_mismatches,
        s.gluing_checks
    );
    if let Some(e) = s.oracle_max_error {
        println!("oracle: {} coefficients, max error {e:.3e}", s.oracle_checks);
    }
    write_json(&out, &run.to_file())?;
    Ok(run.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check {
            suite,
            max_dim,
            seed,
            json,
            input,
        } => cmd_check(suite, max_dim, seed, json, input),
        Command::Sheaf {
            input,
            kind,
            dump_sheaf,
            load,
        } => cmd_sheaf(input, kind, dump_sheaf, load),
        Command::Primitive {
            input,
            form,
            out,
            check_horizontal,
            oracle_eps,
            seed,
        } => cmd_primitive(
            input,
            form,
            out,
            PipelineOptions {
                check_horizontal,
                oracle_eps,
                seed,
            },
        ),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
