//! `rrl`: run the generation pipeline on a scene description.
//!
//! Exit codes: 0 success, 1 validation found problems, 2 usage, 3 parse
//! failure, 4 schema violation, 5 temporal inconsistency, 6 ill-formed scene,
//! 7 missing template, lexicon or viseme entry, 8 I/O or configuration.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use rrl_core::config::Config;
use rrl_core::io;
use rrl_core::pipeline::{self, PipelineError, Resources, RunOptions, Stage};
use rrl_core::tbox::TBox;

#[derive(Debug, Parser)]
#[command(name = "rrl", version, about = "Turn a scene description into a timed multimodal timeline")]
struct Args {
    /// Scene file; with --start-from later than scene, a directory of intermediates.
    input: PathBuf,

    /// Pipeline configuration (key = value).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Timeline file to write. When stopping early, the directory that
    /// receives the last stage's documents unless --emit-intermediate is set.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Directory for every intermediate document.
    #[arg(long, value_name = "DIR")]
    emit_intermediate: Option<PathBuf>,

    /// Last stage to run: scene, realize, prosody, gesture or timeline.
    #[arg(long, value_name = "STAGE", value_parser = parse_stage, default_value = "timeline")]
    stop_after: Stage,

    /// First stage to run; reads the previous stage's documents from INPUT.
    #[arg(long, value_name = "STAGE", value_parser = parse_stage, default_value = "scene")]
    start_from: Stage,

    /// Accepted for interface stability; the pipeline is deterministic.
    #[arg(long)]
    seed: Option<u64>,

    /// Only check the scene: schema, temporal consistency, well-formedness.
    #[arg(long)]
    validate_only: bool,

    /// T-box for --validate-only; defaults to the one named in --config.
    #[arg(long)]
    tbox: Option<PathBuf>,
}

fn parse_stage(s: &str) -> Result<Stage, String> {
    Stage::parse(s).ok_or_else(|| format!("unknown stage {s:?}; expected scene, realize, prosody, gesture or timeline"))
}

fn fail(e: &PipelineError) -> ExitCode {
    eprintln!("rrl: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("rrl: {msg}");
    ExitCode::from(2)
}

fn load_config(path: &Path) -> Result<Config, PipelineError> {
    Config::load(path).map_err(|e| PipelineError::Io(e.to_string()))
}

fn validate(args: &Args) -> ExitCode {
    let tbox_path = match (&args.tbox, &args.config) {
        (Some(t), _) => t.clone(),
        (None, Some(c)) => match load_config(c) {
            Ok(cfg) => cfg.tbox,
            Err(e) => return fail(&e),
        },
        (None, None) => return usage("--validate-only needs --tbox or --config"),
    };
    let tbox: TBox = match std::fs::read_to_string(&tbox_path).map(|t| t.parse::<TBox>()) {
        Ok(Ok(t)) => t,
        Ok(Err(e)) => return fail(&PipelineError::Io(format!("{}: {e}", tbox_path.display()))),
        Err(e) => return fail(&PipelineError::Io(format!("{}: {e}", tbox_path.display()))),
    };
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => return fail(&PipelineError::Io(format!("{}: {e}", args.input.display()))),
    };
    match pipeline::validate_scene(&text, &args.input.display().to_string(), &tbox) {
        Ok(lines) => {
            for l in &lines {
                println!("{l}");
            }
            println!("{} violations", lines.len());
            ExitCode::from(u8::from(!lines.is_empty()))
        }
        Err(e) => {
            println!("{e}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.validate_only {
        return validate(&args);
    }
    let Some(config) = &args.config else {
        return usage("--config is required");
    };
    if args.start_from > args.stop_after {
        return usage("--start-from names a stage after --stop-after");
    }
    let early_dir = if args.stop_after < Stage::Timeline {
        match args.emit_intermediate.as_ref().or(args.output.as_ref()) {
            Some(d) => Some(d.clone()),
            None => return usage("--stop-after before timeline needs --emit-intermediate or --output"),
        }
    } else {
        if args.output.is_none() {
            return usage("--output is required");
        }
        None
    };
    let res = match load_config(config).and_then(Resources::load) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let opts = RunOptions { start_from: args.start_from, stop_after: args.stop_after };
    let art = match pipeline::run(&args.input, &res, &opts) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let written = (|| {
        if let Some(dir) = &args.emit_intermediate {
            art.write_stages(dir, args.start_from, args.stop_after)?;
        }
        if let Some(dir) = early_dir {
            art.write_stages(&dir, args.start_from, args.stop_after)?;
        }
        if let (Some(out), Some(t)) = (&args.output, &art.timeline) {
            std::fs::write(out, io::write_timeline(t))
                .map_err(|e| PipelineError::Io(format!("{}: {e}", out.display())))?;
        }
        Ok::<(), PipelineError>(())
    })();
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
