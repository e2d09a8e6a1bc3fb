mod args;
mod config;
mod error;
mod io;
mod resolve;
mod stages;

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command};
use error::CliError;
use io::RunLock;
use resolve::{Context, Replay};
use stages::files;

/// Fails with the path named if any file a stage needs is missing.
fn check_inputs<C: Replay>(cfg: &C) -> Result<(), CliError> {
    cfg.required().into_iter().try_for_each(io::require_file)
}

fn single<C: Replay>(ctx: Context, cfg: C, stage: fn(&Path, &C) -> Result<Value, CliError>) -> Result<(), CliError> {
    check_inputs(&cfg)?;
    let _lock = RunLock::acquire(&ctx.out)?;
    stage(&ctx.out, &cfg).map(drop)
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Ingest { common, ingest } => {
            let ctx = Context::new(common)?;
            let cfg = ctx.ingest(ingest)?;
            single(ctx, cfg, stages::ingest)?;
        }
        Command::Dedupe { common, corpus, dedupe } => {
            let ctx = Context::new(common)?;
            let cfg = ctx.dedupe(corpus, dedupe)?;
            single(ctx, cfg, stages::dedupe_stage)?;
        }
        Command::Build { common, corpus, build } => {
            let ctx = Context::new(common)?;
            let cfg = ctx.build(corpus, build)?;
            single(ctx, cfg, stages::build)?;
        }
        Command::Analyze {
            common,
            edges,
            seed,
            analyze,
        } => {
            let ctx = Context::new(common)?;
            let cfg = ctx.analyze(edges, seed, analyze)?;
            single(ctx, cfg, stages::analyze)?;
        }
        Command::Layout {
            common,
            edges,
            seed,
            layout,
        } => {
            let ctx = Context::new(common)?;
            let cfg = ctx.layout(edges, seed, layout)?;
            single(ctx, cfg, stages::layout)?;
        }
        Command::Export {
            common,
            edges,
            partition,
            centrality,
            coords,
            export,
        } => {
            let ctx = Context::new(common)?;
            let cfg = ctx.export(edges, partition, centrality, coords, export)?;
            single(ctx, cfg, stages::export)?;
        }
        Command::Pipeline {
            common,
            ingest,
            dedupe,
            build,
            seed,
            analyze,
            layout,
            export,
        } => {
            let ctx = Context::new(common)?;
            let layout_seed = args::SeedOpt { seed: seed.seed };
            // Resolve everything up front so a bad value fails before any work.
            let ingest = ctx.ingest(ingest)?;
            let dedupe = ctx.dedupe(None, dedupe)?;
            let build = ctx.build(Some(ctx.out.join(files::DEDUPED)), build)?;
            let analyze = ctx.analyze(None, seed, analyze)?;
            let layout = ctx.layout(None, layout_seed, layout)?;
            let at = |f: &str| Some(ctx.out.join(f));
            let export = ctx.export(
                None,
                at(files::PARTITION),
                at(files::CENTRALITY),
                at(files::LAYOUT),
                export,
            )?;
            // Later stages read what earlier ones write; only the
            // user-supplied files can be checked now.
            check_inputs(&ingest)?;
            for p in [&build.stoplist, &build.aliases].into_iter().flatten() {
                io::require_file(p)?;
            }

            let _lock = RunLock::acquire(&ctx.out)?;
            let start = Instant::now();
            let logs = [
                stages::ingest(&ctx.out, &ingest)?,
                stages::dedupe_stage(&ctx.out, &dedupe)?,
                stages::build(&ctx.out, &build)?,
                stages::analyze(&ctx.out, &analyze)?,
                stages::layout(&ctx.out, &layout)?,
                stages::export(&ctx.out, &export)?,
            ];
            let elapsed_ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
            let text = serde_json::to_string_pretty(&json!({ "stages": logs, "elapsed_ms": elapsed_ms }))
                .map_err(|e| CliError::internal(e.to_string()))?;
            io::write_file(&ctx.out.join("pipeline.log.json"), format!("{text}\n").as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match panic::catch_unwind(AssertUnwindSafe(|| run(cli.command))) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
        // The panic hook has already printed the message.
        Err(_) => ExitCode::from(2),
    }
}
