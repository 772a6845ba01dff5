//! Command-line orchestration: configuration, scheduling, and result files.
//!
//! Each run writes a fresh directory `<output_dir>/<command>-<timestamp>-<seed>/`
//! holding `config.json`, `results.csv` (or `results.json`) and any artifacts.
//!
//! Exit codes: 0 when every check passes, 1 when a statistical or exact check
//! fails (or the computation itself fails), 2 for configuration errors.

pub mod config;
pub mod output;
pub mod run;
pub mod svg;

pub use config::{parse_config, Command, ExperimentConfig, OutputFormat};
pub use output::{Field, ResultRecord};
pub use run::{run, RunOutcome};
pub use svg::{emit_svg_histogram, Overlay};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Parses `args` (including the program name), runs, prints a summary and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match parse_config(args) {
        Ok(c) => c,
        Err(config::ParseOutcome::Help(text)) => {
            print!("{text}");
            return EXIT_OK;
        }
        Err(config::ParseOutcome::Invalid(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_CONFIG;
        }
    };
    match run(&config) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            println!("run directory: {}", outcome.run_dir.display());
            if outcome.all_checks_pass {
                EXIT_OK
            } else {
                eprintln!("one or more checks failed");
                EXIT_CHECK_FAILED
            }
        }
        Err(run::RunError::Config(msg)) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG
        }
        Err(run::RunError::Failed(e)) => {
            eprintln!("error: {e}");
            EXIT_CHECK_FAILED
        }
    }
}
