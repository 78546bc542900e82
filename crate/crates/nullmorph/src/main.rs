//! Command-line front end: curve/map generation, the correspondence
//! pipelines, and the verification suites. All logic lives in the library;
//! this binary only parses arguments, moves files, and maps errors to exit
//! codes (1 usage or I/O, 2 singular or degenerate input, 3 suite failure).

use std::path::PathBuf;
use std::process::exit;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use nullmorph::curve::DEFAULT_JET_ORDER;
use nullmorph::io::{
    c_to_pair, load_json, mat_to_json, save_json, write_curve_csv, CausalMapJson, CurveJson,
    FPointJson, GPointJson, MapJson, TwistorJetJson,
};
use nullmorph::{
    default_sample_points, mobius_closed_form, nonlocality_demo, quadratic_closed_form,
    random_null_curve, run_all_suites, run_suite, twistor_lift, CausalMorphism, DegreeBounds,
    Error, ProjectiveMap, SeededRng, SelfDualMorphism, SpacetimePoint, SuiteConfig, SuiteReport,
    C64,
};

#[derive(Parser)]
#[command(
    name = "nullmorph",
    version,
    about = "Null-curve morphisms via the twistor correspondence"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random nonsingular polynomial null curve.
    GenCurve {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Polynomial degree of both spinor factors.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write sampled curve points as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Generate a random endomorphism file.
    GenMap {
        /// One of: degree1, degree2, invariant.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lift a curve to its twistor curve jet at a parameter value.
    Kappa {
        #[arg(long)]
        curve: PathBuf,
        /// Expansion point, "re" or "re,im".
        #[arg(long, default_value = "0")]
        at: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a self-dual morphism to a point or a curve.
    MapSd {
        #[arg(long)]
        map: PathBuf,
        #[command(flatten)]
        target: SdTarget,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Apply a causal morphism to a point or a curve.
    MapCausal {
        #[arg(long)]
        map: PathBuf,
        #[command(flatten)]
        target: CausalTarget,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run a verification suite (or "all"); exit code 0 iff it passes.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Primary tolerance override (also via NULLMORPH_TOL).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = false)]
        json: bool,
        /// Worker threads (0 = rayon default).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// The epsilon-convention identity battery.
    Identities {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = false)]
        json: bool,
    },
    /// Show that the naive correspondence route on null directions depends
    /// on second derivatives, while the conformal control does not.
    NonlocalityDemo {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = false)]
        json: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SdTarget {
    /// Correspondence point file {"x":…, "pi":…}.
    #[arg(long)]
    point: Option<PathBuf>,
    /// Curve file.
    #[arg(long)]
    curve: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CausalTarget {
    /// Null-direction point file {"x":…, "v":…}.
    #[arg(long)]
    gpoint: Option<PathBuf>,
    /// Curve file.
    #[arg(long)]
    curve: Option<PathBuf>,
}

fn parse_complex(text: &str) -> Result<C64, Error> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad number '{p}'")))
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(parse(re)?, 0.0)),
        [re, im] => Ok(C64::new(parse(re)?, parse(im)?)),
        _ => Err(Error::Parse(format!("expected 're' or 're,im', got '{text}'"))),
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::SingularMatrix
        | Error::SingularTangent
        | Error::NotNullTangent
        | Error::SingularCorrespondence
        | Error::SingularImage
        | Error::SingularDenominator
        | Error::SingularPatch(_)
        | Error::SingularBasePoint
        | Error::DegenerateImage
        | Error::DegenerateTangent
        | Error::DegenerateCurve(_)
        | Error::NotNull { .. }
        | Error::ZeroVector
        | Error::DivisionBySingularJet => 2,
        _ => 1,
    }
}

fn emit(value: &serde_json::Value, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => save_json(path, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value).expect("json"));
            Ok(())
        }
    }
}

fn print_report(report: &SuiteReport) {
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    println!(
        "{:24} {:>5}/{:<5} max_residual={:.3e}  {}",
        report.suite_name, report.pass_count, report.trials, report.max_residual, verdict
    );
    for f in report.failures.iter().take(5) {
        println!("    trial {}: residual {:.3e} ({})", f.seed_index, f.residual, f.error_kind);
    }
    if report.failures.len() > 5 {
        println!("    … {} more failures", report.failures.len() - 5);
    }
}

fn run_verify(
    suite: String,
    trials: Option<usize>,
    seed: u64,
    tol: Option<f64>,
    json: bool,
    threads: usize,
) -> Result<i32, Error> {
    let tol = tol.or_else(|| {
        std::env::var("NULLMORPH_TOL").ok().and_then(|v| v.parse::<f64>().ok())
    });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::ConfigInvalid(format!("thread pool: {e}")))?;
    let reports: Vec<SuiteReport> = if suite == "all" {
        pool.install(|| run_all_suites(seed))?
    } else {
        let mut cfg = SuiteConfig::new(
            &suite,
            trials
                .or_else(|| nullmorph::harness::suite_default_trials(&suite))
                .unwrap_or(100),
            seed,
        );
        if let Some(t) = tol {
            cfg = cfg.with_tol(t);
        }
        vec![pool.install(|| run_suite(&cfg))?]
    };
    let all_pass = reports.iter().all(|r| r.passed());
    if json {
        let value = if reports.len() == 1 {
            serde_json::to_value(&reports[0]).expect("report json")
        } else {
            serde_json::to_value(&reports).expect("report json")
        };
        println!("{}", serde_json::to_string_pretty(&value).expect("json"));
    } else {
        for r in &reports {
            print_report(r);
        }
    }
    Ok(if all_pass { 0 } else { 3 })
}

fn sd_point_output(map: &ProjectiveMap, point: &nullmorph::FPoint) -> Result<serde_json::Value, Error> {
    let morphism = SelfDualMorphism::new(map.clone());
    let image = morphism.apply(point)?;
    let closed = match map {
        ProjectiveMap::Degree1(m) => mobius_closed_form(m, &point.x)?,
        ProjectiveMap::Degree2(m) => quadratic_closed_form(m, point)?.x,
    };
    let path_residual = nullmorph::spinor::relative_diff(&image.x, &closed);
    let z = nullmorph::Twistor::incident(&image.x, image.pi_components())?;
    let incidence = z.incidence_residual(&image.x);
    Ok(json!({
        "xi": mat_to_json(&image.x),
        "pi_tilde": [c_to_pair(image.pi_components()[0]), c_to_pair(image.pi_components()[1])],
        "residuals": {
            "pipeline_vs_closed_form": path_residual,
            "image_incidence": incidence,
        },
    }))
}

fn run_cmd(cmd: Cmd) -> Result<i32, Error> {
    match cmd {
        Cmd::GenCurve { seed, degree, out, csv, samples } => {
            let curve = random_null_curve(seed, DegreeBounds { lambda: degree, pi: degree })?;
            save_json(&out, &CurveJson::from_curve(&curve))?;
            if let Some(csv_path) = csv {
                let mut rng = SeededRng::new(seed ^ 0xC5);
                let pts: Vec<(C64, SpacetimePoint)> = (0..samples)
                    .map(|_| {
                        let s = rng.in_disc(0.75);
                        (s, curve.chi_value(s))
                    })
                    .collect();
                write_curve_csv(&csv_path, &pts)?;
            }
            Ok(0)
        }
        Cmd::GenMap { kind, seed, out } => {
            match kind.as_str() {
                "degree1" | "degree2" => {
                    let map = nullmorph::random_map(&kind, seed)?;
                    save_json(&out, &MapJson::from_map(&map))?;
                }
                "invariant" => {
                    let mut rng = SeededRng::new(seed);
                    let map = nullmorph::endo::random_invariant(&mut rng);
                    save_json(&out, &CausalMapJson::from_map(&map))?;
                }
                other => {
                    return Err(Error::ConfigInvalid(format!("unknown map kind '{other}'")))
                }
            }
            Ok(0)
        }
        Cmd::Kappa { curve, at, out } => {
            let s0 = parse_complex(&at)?;
            let curve = load_json::<CurveJson>(&curve)?.to_curve()?;
            let jet = twistor_lift(&curve.chi_jet(s0, DEFAULT_JET_ORDER))?;
            let value = serde_json::to_value(TwistorJetJson::from_jet(s0, &jet))
                .expect("twistor jet json");
            emit(&value, out.as_ref())?;
            Ok(0)
        }
        Cmd::MapSd { map, target, samples, out, csv } => {
            let map = load_json::<MapJson>(&map)?.to_map()?;
            if let Some(point_path) = target.point {
                let point = load_json::<FPointJson>(&point_path)?.to_point()?;
                let value = sd_point_output(&map, &point)?;
                emit(&value, out.as_ref())?;
                return Ok(0);
            }
            let curve_path = target.curve.expect("clap group guarantees one target");
            let curve = load_json::<CurveJson>(&curve_path)?.to_curve()?;
            let points = sample_points(samples);
            let morphism = SelfDualMorphism::new(map);
            let mut rows = Vec::new();
            let mut csv_rows = Vec::new();
            for sample in morphism.apply_to_curve(&curve, &points) {
                match sample.result {
                    Ok(img) => {
                        csv_rows.push((sample.s, img.xi));
                        rows.push(json!({
                            "s": c_to_pair(sample.s),
                            "xi": mat_to_json(&img.xi),
                            "pi_tilde": [c_to_pair(img.pi_tilde[0]), c_to_pair(img.pi_tilde[1])],
                            "null_residual": img.null_residual,
                            "tangent_residual": img.tangent_residual,
                        }));
                    }
                    Err(e) => rows.push(json!({
                        "s": c_to_pair(sample.s),
                        "error": e.to_string(),
                    })),
                }
            }
            if let Some(csv_path) = csv {
                write_curve_csv(&csv_path, &csv_rows)?;
            }
            emit(&json!({ "samples": rows }), out.as_ref())?;
            Ok(0)
        }
        Cmd::MapCausal { map, target, samples, out, csv } => {
            let map = load_json::<CausalMapJson>(&map)?.to_map()?;
            let morphism = CausalMorphism::new(map);
            if let Some(gpoint_path) = target.gpoint {
                let g = load_json::<GPointJson>(&gpoint_path)?.to_point()?;
                let image = morphism.apply(&g)?;
                let generic = morphism.apply_generic(&g)?;
                let two_path = nullmorph::spinor::relative_diff(&image.x, &generic.x);
                let value = json!({
                    "x": mat_to_json(&image.x),
                    "v": mat_to_json(image.v.matrix()),
                    "residuals": { "two_path": two_path },
                });
                emit(&value, out.as_ref())?;
                return Ok(0);
            }
            let curve_path = target.curve.expect("clap group guarantees one target");
            let curve = load_json::<CurveJson>(&curve_path)?.to_curve()?;
            let points = sample_points(samples);
            let mut rows = Vec::new();
            let mut csv_rows = Vec::new();
            for sample in morphism.apply_to_curve(&curve, &points) {
                match sample.result {
                    Ok(img) => {
                        csv_rows.push((sample.s, img.x));
                        rows.push(json!({
                            "s": c_to_pair(sample.s),
                            "x": mat_to_json(&img.x),
                            "v": mat_to_json(&img.v),
                            "tangent_residual": img.tangent_residual,
                            "null_residual": img.null_residual,
                        }));
                    }
                    Err(e) => rows.push(json!({
                        "s": c_to_pair(sample.s),
                        "error": e.to_string(),
                    })),
                }
            }
            if let Some(csv_path) = csv {
                write_curve_csv(&csv_path, &csv_rows)?;
            }
            emit(&json!({ "samples": rows }), out.as_ref())?;
            Ok(0)
        }
        Cmd::Verify { suite, trials, seed, tol, json, threads } => {
            run_verify(suite, trials, seed, tol, json, threads)
        }
        Cmd::Identities { trials, json } => {
            let cfg = SuiteConfig::new("appendix-identities", trials, 7);
            let report = run_suite(&cfg)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            } else {
                println!(
                    "identity battery: antisymmetrization, determinant contraction, \
                     epsilon inverse, inverse differential"
                );
                print_report(&report);
            }
            Ok(if report.passed() { 0 } else { 3 })
        }
        Cmd::NonlocalityDemo { seed, json } => {
            let mut rng = SeededRng::new(seed);
            let map2 = nullmorph::endo::random_degree2(&mut rng);
            let control = nullmorph::endo::random_degree1(&mut rng);
            let report = nonlocality_demo(&map2, &control, seed ^ 0xD3)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "degree2_tangent_distance": report.degree2_tangent_distance,
                        "degree1_tangent_distance": report.degree1_tangent_distance,
                        "degree2_point_distance": report.degree2_point_distance,
                    }))
                    .expect("json")
                );
            } else {
                println!(
                    "two curves share their first-order jet but differ at second order;"
                );
                println!(
                    "naive transport of the null direction through twistor space gives:"
                );
                println!(
                    "  degree-2 image tangent distance: {:.6e}  (depends on the 2-jet)",
                    report.degree2_tangent_distance
                );
                println!(
                    "  degree-1 image tangent distance: {:.6e}  (conformal control)",
                    report.degree1_tangent_distance
                );
                println!(
                    "  degree-2 image point distance:   {:.6e}  (points stay local)",
                    report.degree2_point_distance
                );
            }
            Ok(0)
        }
    }
}

fn sample_points(n: usize) -> Vec<C64> {
    let defaults = default_sample_points();
    if n <= defaults.len() {
        defaults.into_iter().take(n).collect()
    } else {
        let mut rng = SeededRng::new(0x5A4D);
        let mut pts = defaults;
        while pts.len() < n {
            pts.push(rng.in_disc(0.75));
        }
        pts
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; keep the usage exit code contract
            let _ = e.print();
            exit(1);
        }
    };
    match run_cmd(cli.cmd) {
        Ok(code) => exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            exit(exit_code_for(&err));
        }
    }
}
