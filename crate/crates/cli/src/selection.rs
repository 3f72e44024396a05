use std::collections::BTreeSet;
use std::path::Path;

use dfspec::molecule::parse_params_file;
use dfspec::{builtin_registry, MoleculeParams, Registry};

use crate::args::MoleculeArgs;
use crate::error::{CliError, CliResult};

/// Parses `A..B` (inclusive), `A`, and comma lists into a sorted set.
pub fn parse_indices(tokens: &[String], flag: &str) -> CliResult<Vec<u32>> {
    let bad = |tok: &str| CliError::BadInput(format!("--{flag}: cannot read {tok:?} (expected A..B or a list)"));
    let mut out = BTreeSet::new();
    for token in tokens {
        for part in token.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if let Some((lo, hi)) = part.split_once("..") {
                let hi = hi.strip_prefix('=').unwrap_or(hi);
                let lo: u32 = lo.trim().parse().map_err(|_| bad(part))?;
                let hi: u32 = hi.trim().parse().map_err(|_| bad(part))?;
                if hi < lo {
                    return Err(CliError::BadInput(format!("--{flag}: empty range {part}")));
                }
                out.extend(lo..=hi);
            } else {
                out.insert(part.parse::<u32>().map_err(|_| bad(part))?);
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::BadInput(format!("--{flag}: no values given")));
    }
    Ok(out.into_iter().collect())
}

pub fn load_registry(params: Option<&Path>) -> CliResult<Registry> {
    let mut registry = builtin_registry();
    if let Some(path) = params {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let extra = parse_params_file(&text).map_err(|e| match e {
            dfspec::Error::Parse { line, message } => {
                CliError::BadInput(format!("{}: line {line}: {message}", path.display()))
            }
            other => other.into(),
        })?;
        for m in extra {
            registry.insert(m)?;
        }
    }
    Ok(registry)
}

pub fn select_molecules(args: &MoleculeArgs) -> CliResult<Vec<MoleculeParams>> {
    let registry = load_registry(args.params.as_deref())?;
    Ok(registry.select(&args.molecule)?.into_iter().cloned().collect())
}
