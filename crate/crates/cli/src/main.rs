use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use symtrans::{run, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&config) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.render(config.format).as_bytes());
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("symtrans: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
