use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use toric_nurbs::{write_frames, AnyDocument, CurveDocument, Error};
use toric_nurbs_cli::api::{self, DEFAULT_SAMPLES, DEFAULT_SCHEDULE, DEFAULT_TOL};
use toric_nurbs_cli::service;

/// Toric degenerations of NURBS curves.
#[derive(Parser)]
#[command(name = "toric-nurbs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print curve points, one per line, tab separated.
    Eval {
        file: PathBuf,
        /// Parameter in [0, 1]; repeatable. Without it, `--samples` uniform values.
        #[arg(long = "u")]
        params: Vec<f64>,
        /// Lift the weights by `t^λ` first (needs a lifting).
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Print the regular decomposition piece by piece.
    Decompose {
        file: PathBuf,
        /// Print the full JSON instead of the one-line listing.
        #[arg(long)]
        json: bool,
    },
    /// Print the regular control curve as JSON.
    Limit { file: PathBuf },
    /// Render SVG frames and a manifest for a curve or scene.
    Frames {
        file: PathBuf,
        /// Frame parameter; repeatable. Defaults to the scene's `t_schedule`.
        #[arg(long = "t")]
        t: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value = "frames")]
        out: PathBuf,
    },
    /// Hausdorff distances to the regular control curve along a t schedule.
    Report {
        file: PathBuf,
        #[arg(long = "t")]
        t: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Serve the JSON endpoints on localhost.
    Serve {
        #[arg(long, default_value_t = 7878)]
        port: u16,
    },
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("response serialization cannot fail")
    );
}

fn uniform(samples: usize) -> Vec<f64> {
    let n = samples.max(2);
    (0..n)
        .map(|k| {
            if k + 1 == n {
                1.0
            } else {
                k as f64 / (n - 1) as f64
            }
        })
        .collect()
}

enum Failure {
    /// The command cannot run on this input at all.
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

/// Reads a document for a command that needs its lifting.
fn read_lifted(file: &PathBuf, command: &str) -> Result<CurveDocument, Failure> {
    let doc = CurveDocument::read(file)?;
    if doc.lifting.is_none() {
        return Err(Failure::Usage(format!(
            "`{command}` needs a document with a `lifting` array ({})",
            file.display()
        )));
    }
    Ok(doc)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Eval {
            file,
            params,
            t,
            samples,
        } => {
            let doc = CurveDocument::read(&file)?;
            let params = if params.is_empty() {
                uniform(samples)
            } else {
                params
            };
            for p in api::evaluate(&doc, &params, t)? {
                let cols: Vec<String> = p.iter().map(f64::to_string).collect();
                println!("{}", cols.join("\t"));
            }
        }
        Command::Decompose { file, json } => {
            let r = api::decompose(&read_lifted(&file, "decompose")?)?;
            if json {
                print_json(&r);
            } else {
                println!("{}", r.text);
            }
        }
        Command::Limit { file } => print_json(&api::limit(&read_lifted(&file, "limit")?)?),
        Command::Frames {
            file,
            t,
            samples,
            out,
        } => {
            let scene = AnyDocument::read(&file)?.into_scene();
            let curves = scene.validate()?;
            let schedule = if t.is_empty() {
                scene.t_schedule.clone()
            } else {
                t
            };
            let manifest = write_frames(&curves, &schedule, samples, &out)?;
            for frame in &manifest.frames {
                println!("{}", out.join(&frame.file).display());
            }
        }
        Command::Report {
            file,
            t,
            samples,
            tol,
        } => {
            let schedule = if t.is_empty() {
                DEFAULT_SCHEDULE.to_vec()
            } else {
                t
            };
            print_json(&api::report(
                &read_lifted(&file, "report")?,
                &schedule,
                samples,
                tol,
            )?);
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| Error::Io {
                path: format!("port {port}"),
                message: e.to_string(),
            })?;
            rt.block_on(service::serve(port)).map_err(|e| Error::Io {
                path: format!("127.0.0.1:{port}"),
                message: e.to_string(),
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(e)) => {
            match e.field() {
                Some(field) => eprintln!("error [{}] in `{field}`: {e}", e.code()),
                None => eprintln!("error [{}]: {e}", e.code()),
            }
            ExitCode::FAILURE
        }
    }
}
