//! Command-line front end and HTTP service for `microgrid-resilience`.

pub mod args;
pub mod error;
pub mod input;
pub mod render;
pub mod server;

use std::io::Write;

use microgrid_resilience::{
    builtin_harden_generation, builtin_new_england, builtin_underground_distribution, compare, run_scenario,
    run_scenario_with_workers, serialize_patch, serialize_scenario, ParseOptions,
};
use serde::Serialize;

use args::{BuiltinName, Cli, Command, CompareArgs, Format, RunArgs, ServeArgs};
use error::{exit, CliError};

/// Runs one invocation, writing results to `out` and diagnostics to `err`.
/// Returns the process exit status.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match cli.command {
        Command::Validate { scenario, lenient } => validate(&scenario, lenient, out, err),
        Command::Run(args) => run(&args, out),
        Command::Compare(args) => compare_cmd(&args, out),
        Command::Serve(args) => serve(&args, out),
        Command::Builtin { name } => builtin(name, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            report_error(&e, err);
            e.exit_code()
        }
    }
}

fn report_error(e: &CliError, err: &mut dyn Write) {
    let issues = e.issues();
    if issues.is_empty() {
        let _ = writeln!(err, "error: {e}");
    } else {
        let _ = writeln!(err, "error: {} issue(s)", issues.len());
        for issue in issues {
            let _ = writeln!(err, "{issue}");
        }
    }
}

fn stdout_error(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

fn emit(out: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    out.write_all(bytes).map_err(stdout_error)
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Engine(e.to_string()))?;
    bytes.push(b'\n');
    emit(out, &bytes)
}

/// Issues go to `out`, one per line, so they can be piped; exit 1 if any.
fn validate(source: &str, lenient: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    match input::load_scenario(source, lenient) {
        Ok(s) => {
            let msg = format!(
                "ok: {} ({} threats, {} pairs)\n",
                s.name,
                s.threats.len(),
                s.pair_count()
            );
            emit(out, msg.as_bytes())?;
            Ok(exit::OK)
        }
        Err(e) if !e.issues().is_empty() => {
            for issue in e.issues() {
                emit(out, format!("{issue}\n").as_bytes())?;
            }
            Ok(exit::INVALID)
        }
        Err(e @ CliError::Document { .. }) => {
            emit(out, format!("{e}\n").as_bytes())?;
            Ok(exit::INVALID)
        }
        Err(e) => {
            report_error(&e, err);
            Ok(e.exit_code())
        }
    }
}

fn run(args: &RunArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let cfg = args.sim.config();
    cfg.validate()?;
    let scenario = input::load_scenario(&args.scenario, args.sim.lenient)?;
    let report = match args.workers {
        Some(w) => run_scenario_with_workers(&scenario, &cfg, w)?,
        None => run_scenario(&scenario, &cfg)?,
    };

    if let Some(path) = &args.histogram_csv {
        let histogram = match args.histogram_of.dimension() {
            Some(dim) => &report.dimension(dim).histogram,
            None => &report.resilience.histogram,
        };
        std::fs::write(path, histogram.to_csv()).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }

    match args.sim.format {
        Format::Json => emit_json(out, &report)?,
        Format::Text => emit(out, render::run_text(&report).as_bytes())?,
    }
    Ok(exit::OK)
}

fn compare_cmd(args: &CompareArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let cfg = args.sim.config();
    cfg.validate()?;
    let scenario = input::load_scenario(&args.scenario, args.sim.lenient)?;
    let patches = args
        .patches
        .iter()
        .map(|p| input::load_patch(p, args.sim.lenient))
        .collect::<Result<Vec<_>, _>>()?;
    let report = compare(&scenario, &patches, &cfg)?;
    match args.sim.format {
        Format::Json => emit_json(out, &report)?,
        Format::Text => emit(out, render::compare_text(&report).as_bytes())?,
    }
    Ok(exit::OK)
}

fn builtin(name: BuiltinName, out: &mut dyn Write) -> Result<u8, CliError> {
    let bytes = match name {
        BuiltinName::NewEngland => serialize_scenario(&builtin_new_england()),
        BuiltinName::UndergroundDistribution => serialize_patch(&builtin_underground_distribution()),
        BuiltinName::HardenGeneration => serialize_patch(&builtin_harden_generation()),
    };
    emit(out, &bytes)?;
    Ok(exit::OK)
}

fn serve(args: &ServeArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let scenario = input::load_scenario(&args.scenario, args.lenient)?;
    let options = if args.lenient {
        ParseOptions::LENIENT
    } else {
        ParseOptions::STRICT
    };
    let addr = format!("{}:{}", args.host, args.port);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Engine(e.to_string()))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(&addr)
            .await
            .map_err(|source| CliError::Bind {
                addr: addr.clone(),
                source,
            })?;
        let local = listener.local_addr().map_err(|source| CliError::Bind {
            addr: addr.clone(),
            source,
        })?;
        emit(out, format!("listening on http://{local}\n").as_bytes())?;
        let _ = out.flush();
        axum::serve(listener, server::router(server::AppState::new(scenario, options)))
            .await
            .map_err(|source| CliError::Bind { addr, source })
    })?;
    Ok(exit::OK)
}
