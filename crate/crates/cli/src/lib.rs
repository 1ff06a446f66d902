//! Command implementations behind the `motkit` binary.
//!
//! Each command writes its artifacts to disk and a short summary to the
//! given writer, so tests can drive commands without spawning processes.

pub mod args;
pub mod commands;

use std::io::Write;

use anyhow::{Context, Result};

pub use args::{Cli, Command};
pub use commands::Status;

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Status> {
    let dispatch = |out: &mut dyn Write| match &cli.command {
        Command::Eval(a) => commands::cmd_eval(a, out),
        Command::Rank(a) => commands::cmd_rank(a, out),
        Command::Track(a) => commands::cmd_track(a, out),
        Command::Tune(a) => commands::cmd_tune(a, out),
        Command::Audit(a) => commands::cmd_audit(a, out),
        Command::Validate(a) => commands::cmd_validate(a, out),
        Command::Synth(a) => commands::cmd_synth(a, out),
    };
    match cli.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .context("starting worker threads")?;
            // the caller's writer may be tied to this thread, so buffer
            let mut buf = Vec::new();
            let status = pool.install(|| dispatch(&mut buf));
            out.write_all(&buf)?;
            status
        }
        None => dispatch(out),
    }
}
