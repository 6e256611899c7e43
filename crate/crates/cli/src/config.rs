//! Config files are merged by appending `--key value` pairs for every key
//! not already given on the command line, so clap validates them exactly
//! like typed flags.

use crate::error::CliError;
use std::ffi::OsString;
use std::path::Path;

const COMMANDS: [&str; 6] = ["gen", "arc", "bisect", "check", "dbar", "entropy"];

/// Finds `--config PATH` or `--config=PATH` in raw arguments.
fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = a.to_str().and_then(|s| s.strip_prefix("--config=")) {
            return Some(rest.into());
        }
    }
    None
}

fn flag_for(key: &str) -> String {
    // `B` is the only flag whose long name is not kebab-case.
    if key == "B" {
        return "--B".into();
    }
    format!("--{}", key.replace('_', "-"))
}

fn given(args: &[OsString], flag: &str) -> bool {
    args.iter().filter_map(|a| a.to_str()).any(|a| a == flag || a.starts_with(&format!("{flag}=")))
}

fn scalar(key: &str, v: &toml::Value) -> Result<String, CliError> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Array(items) => items.iter().map(|i| scalar(key, i)).collect::<Result<Vec<_>, _>>()?.join(","),
        other => return Err(CliError::Config(format!("unsupported value for {key}: {other}"))),
    })
}

fn push_table(args: &mut Vec<OsString>, original: &[OsString], table: &toml::Table) -> Result<(), CliError> {
    for (key, value) in table {
        if key == "config" {
            return Err(CliError::Config("config files cannot nest".into()));
        }
        if key == "out_dir" || key == "out-dir" {
            return Err(CliError::Config("the output directory comes from --out-dir or SHIFTARC_OUT_DIR only".into()));
        }
        let flag = flag_for(key);
        if given(original, &flag) {
            continue;
        }
        match value {
            toml::Value::Boolean(true) => args.push(flag.into()),
            toml::Value::Boolean(false) => {}
            v => {
                args.push(flag.into());
                args.push(scalar(key, v)?.into());
            }
        }
    }
    Ok(())
}

/// Returns `args` with values from the config file appended.
pub fn merge(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let doc: toml::Table = text.parse().map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let command = args.iter().skip(1).filter_map(|a| a.to_str()).find(|a| COMMANDS.contains(a)).map(str::to_string);

    let mut merged = args.clone();
    let globals: toml::Table = doc.iter().filter(|(_, v)| !v.is_table()).map(|(k, v)| (k.clone(), v.clone())).collect();
    push_table(&mut merged, &args, &globals)?;
    if let Some(cmd) = command {
        if let Some(section) = doc.get(&cmd) {
            let table = section.as_table().ok_or_else(|| CliError::Config(format!("[{cmd}] must be a table")))?;
            push_table(&mut merged, &args, table)?;
        }
    }
    for name in doc.keys().filter(|k| doc[*k].is_table()) {
        if !COMMANDS.contains(&name.as_str()) {
            return Err(CliError::Config(format!("unknown section [{name}]")));
        }
    }
    Ok(merged)
}
