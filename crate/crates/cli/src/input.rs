use std::path::Path;

use microgrid_resilience::intervention::{HARDEN_GENERATION, UNDERGROUND_DISTRIBUTION};
use microgrid_resilience::{
    builtin_harden_generation, builtin_new_england, builtin_underground_distribution, parse_patch_with,
    parse_scenario_with, InterventionPatch, ParseOptions, Scenario,
};

use crate::error::CliError;

pub const NEW_ENGLAND: &str = "new-england";

fn read(path: &str) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: Path::new(path).to_path_buf(),
        source,
    })
}

fn options(lenient: bool) -> ParseOptions {
    if lenient {
        ParseOptions::LENIENT
    } else {
        ParseOptions::STRICT
    }
}

/// Loads a scenario from a file, or a built-in when `source` is `@name`.
pub fn load_scenario(source: &str, lenient: bool) -> Result<Scenario, CliError> {
    if let Some(name) = source.strip_prefix('@') {
        return match name {
            NEW_ENGLAND => Ok(builtin_new_england()),
            _ => Err(CliError::UnknownBuiltin(name.to_string(), NEW_ENGLAND)),
        };
    }
    parse_scenario_with(&read(source)?, options(lenient)).map_err(|error| CliError::Document {
        source_name: source.to_string(),
        error,
    })
}

pub fn load_patch(source: &str, lenient: bool) -> Result<InterventionPatch, CliError> {
    if let Some(name) = source.strip_prefix('@') {
        return match name {
            UNDERGROUND_DISTRIBUTION => Ok(builtin_underground_distribution()),
            HARDEN_GENERATION => Ok(builtin_harden_generation()),
            _ => Err(CliError::UnknownBuiltin(
                name.to_string(),
                "underground-distribution, harden-generation",
            )),
        };
    }
    parse_patch_with(&read(source)?, options(lenient)).map_err(|error| CliError::Document {
        source_name: source.to_string(),
        error,
    })
}
