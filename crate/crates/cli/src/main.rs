use std::process::ExitCode;

use clap::Parser;

use mrb_cli::error::{EXIT_INGEST, EXIT_OK, EXIT_REFUTED};
use mrb_cli::{run, Cli};

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return code(if e.use_stderr() { EXIT_INGEST } else { EXIT_OK });
        }
    };
    let rendered = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return code(e.exit_code());
        }
    };
    if let Err(e) = rendered.emit(cli.globals.format, cli.globals.report.as_deref()) {
        eprintln!("error: {e}");
        return code(e.exit_code());
    }
    code(if rendered.refuted { EXIT_REFUTED } else { EXIT_OK })
}
