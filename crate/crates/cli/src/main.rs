use std::process::ExitCode;

use clap::Parser;
use microgrid_resilience_cli::args::Cli;
use microgrid_resilience_cli::error::exit;
use microgrid_resilience_cli::execute;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap reports usage errors as 2, which is reserved for I/O here.
            return ExitCode::from(if e.use_stderr() { exit::INVALID } else { exit::OK });
        }
    };
    ExitCode::from(execute(
        cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    ))
}
