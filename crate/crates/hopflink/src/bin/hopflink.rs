//! Command-line surface over the library: linking numbers, canonical
//! coordinates, retraction traces, pattern extraction, schedules, the
//! ξ map, and the seeded verification suites.
//!
//! Exit codes: 0 success, 1 usage/IO problems, 2 geometric degeneracy,
//! 3 verification failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hopflink::error::Error;
use hopflink::pattern::run_schedule;
use hopflink::plgeom::{extract_intersection_pattern, find_transverse_height, Ellipsoid, Scene};
use hopflink::retraction::{canonical_prism_point, check_normal_form, stage_trace};
use hopflink::roundlink::linking_number_round;
use hopflink::verify::{run_all, VerifyConfig};
use hopflink::{fixtures, grassmann, io as wire, sample};

#[derive(Parser)]
#[command(
    name = "hopflink",
    about = "Canonical coordinates and verification for Hopf link configuration spaces",
    version
)]
struct Cli {
    /// Write the primary output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SceneArgs {
    /// Scene JSON file, or one of the builtin scenes
    /// `basepoint`, `finger`, `bubble`.
    input: String,
    /// Mesh resolution for builtin scenes.
    #[arg(long, default_value_t = 64)]
    mesh_res: usize,
    /// Lower end of the ellipsoid height search range.
    #[arg(long)]
    h_min: Option<f64>,
    /// Upper end of the ellipsoid height search range.
    #[arg(long)]
    h_max: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Linking number of the two circles in a link JSON file.
    Lk {
        /// Link JSON file.
        input: PathBuf,
    },
    /// Canonical prism-manifold coordinate of a link.
    Canon {
        /// Link JSON file.
        input: PathBuf,
        /// Tolerance for the normal-form validation.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Stage-by-stage retraction trace as JSON lines.
    #[command(alias = "retract")]
    Frames {
        /// Link JSON file.
        input: PathBuf,
        /// Tolerance for the normal-form validation.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Intersection pattern of a disc/ellipsoid scene.
    Pattern {
        #[command(flatten)]
        scene: SceneArgs,
    },
    /// Removal schedule of a scene: pattern, timed removals, final state.
    Schedule {
        #[command(flatten)]
        scene: SceneArgs,
    },
    /// The (mu, nu) coordinates of an oriented 2-plane in R^4.
    Xi {
        /// Plane JSON file.
        input: PathBuf,
    },
    /// Canonical RP^2 x RP^2 coordinate of a great Hopf link.
    #[command(name = "canon-s3")]
    CanonS3 {
        /// Plane JSON file.
        input: PathBuf,
    },
    /// Run the seeded verification suites.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Sample scale in percent of the reference sizes (100 runs the
        /// full acceptance-scale suites).
        #[arg(long, default_value_t = 25)]
        n: usize,
    },
    /// Emit random valid links as JSON lines.
    Sample {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Number of links.
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep clap's rendered help/error text, but exit 1 on usage
            // problems per the documented contract
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };

    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, content: &str) -> Result<(), Error> {
    match &cli.out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| Error::InvalidInput(e.to_string()))
        }
    }
}

fn load_scene(args: &SceneArgs) -> Result<Scene, Error> {
    let mut scene = match args.input.as_str() {
        "basepoint" => fixtures::basepoint_scene(args.mesh_res),
        "finger" => fixtures::finger_scene(args.mesh_res),
        "bubble" => fixtures::bubble_scene(args.mesh_res),
        path => wire::parse_scene(&read_input(&PathBuf::from(path))?)?,
    };
    if let Some(h) = args.h_min {
        scene.h_range.0 = h;
    }
    if let Some(h) = args.h_max {
        scene.h_range.1 = h;
    }
    if !(scene.h_range.0 > 0.0 && scene.h_range.0 < scene.h_range.1) {
        return Err(Error::InvalidInput(format!(
            "invalid height range [{}, {}]",
            scene.h_range.0, scene.h_range.1
        )));
    }
    Ok(scene)
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Lk { input } => {
            let (a, b) = wire::parse_circle_pair(&read_input(input)?)?;
            let lk = linking_number_round(&a, &b)?;
            let text = if lk > 0 {
                format!("+{lk}\n")
            } else {
                format!("{lk}\n")
            };
            emit(cli, &text)?;
        }
        Command::Canon { input, tol } => {
            require_positive(*tol, "--tol")?;
            let link = wire::parse_link(&read_input(input)?)?;
            let p = canonical_prism_point(&link)?;
            emit(cli, &format!("{}\n", wire::prism_point_to_json(&p)))?;
        }
        Command::Frames { input, tol } => {
            require_positive(*tol, "--tol")?;
            let link = wire::parse_link(&read_input(input)?)?;
            let trace = stage_trace(&link)?;
            check_normal_form(&trace.last().expect("five stages").link, *tol)?;
            let mut out = String::new();
            for record in &trace {
                out.push_str(&wire::stage_to_json(record));
                out.push('\n');
            }
            emit(cli, &out)?;
        }
        Command::Pattern { scene } => {
            let scene_data = load_scene(scene)?;
            let h = find_transverse_height(
                &scene_data.disc_mesh,
                &scene_data.equator,
                scene_data.h_range.0,
                scene_data.h_range.1,
            )?;
            let e = Ellipsoid::new(scene_data.equator, h)?;
            let pattern = extract_intersection_pattern(&scene_data.disc_mesh, &e)?;
            eprintln!("transverse height h = {h}");
            emit(cli, &format!("{}\n", wire::pattern_to_json(&pattern)))?;
        }
        Command::Schedule { scene } => {
            let scene_data = load_scene(scene)?;
            let h = find_transverse_height(
                &scene_data.disc_mesh,
                &scene_data.equator,
                scene_data.h_range.0,
                scene_data.h_range.1,
            )?;
            let e = Ellipsoid::new(scene_data.equator, h)?;
            let pattern = extract_intersection_pattern(&scene_data.disc_mesh, &e)?;
            let outcome = run_schedule(&pattern)?;
            let report = serde_json::json!({
                "h": h,
                "pattern": serde_json::from_str::<serde_json::Value>(
                    &wire::pattern_to_json(&pattern)
                ).expect("valid json"),
                "schedule": outcome.schedule,
                "removed": outcome.removed,
                "final": serde_json::from_str::<serde_json::Value>(
                    &wire::pattern_to_json(&outcome.final_pattern)
                ).expect("valid json"),
                "cleared_circles": outcome.cleared_circles,
                "directive": outcome.directive,
            });
            emit(cli, &format!("{report}\n"))?;
        }
        Command::Xi { input } => {
            let plane = wire::parse_plane(&read_input(input)?)?;
            let (m, n) = grassmann::xi(&plane)?;
            let dto = wire::XiDto {
                mu: m.imag().into(),
                nu: n.imag().into(),
            };
            emit(
                cli,
                &format!("{}\n", serde_json::to_string(&dto).expect("serializable")),
            )?;
        }
        Command::CanonS3 { input } => {
            let plane = wire::parse_plane(&read_input(input)?)?;
            let pair = grassmann::canonical_great_hopf(&plane)?;
            emit(cli, &format!("{}\n", wire::rp2_pair_to_json(&pair)))?;
        }
        Command::Verify { seed, n } => {
            if *n == 0 {
                return Err(Error::InvalidInput("--n must be at least 1".into()));
            }
            let cfg = VerifyConfig::scaled(*seed, *n);
            let results = run_all(&cfg);
            let mut report = String::new();
            let mut all_pass = true;
            for r in &results {
                all_pass &= r.passed;
                report.push_str(&format!(
                    "{} {} — {}\n",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                ));
            }
            emit(cli, &report)?;
            if !all_pass {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Sample { seed, n } => {
            if *n == 0 {
                return Err(Error::InvalidInput("--n must be at least 1".into()));
            }
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(*seed);
            let mut out = String::new();
            for _ in 0..*n {
                let link = sample::random_link_pos(&mut rng);
                out.push_str(&wire::link_to_json(&link));
                out.push('\n');
            }
            emit(cli, &out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn require_positive(value: f64, what: &str) -> Result<(), Error> {
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} must be positive")))
    }
}
