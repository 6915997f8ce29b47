//! Flat `key = value` config files.
//!
//! Keys are long flag names (`trials`, `cache-dir`; `cache_dir` also works).
//! Blank lines and lines starting with `#` are ignored. Boolean flags take
//! `true` or `false`. A value given on the command line or through the
//! environment wins over the file, which wins over built-in defaults.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use clap::error::ErrorKind;
use clap::parser::ValueSource;
use clap::{ArgAction, Command, CommandFactory, Parser};

pub fn read(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected `key = value`", path.display(), n + 1))?;
        let key = k.trim().replace('_', "-");
        if out.insert(key.clone(), v.trim().to_owned()).is_some() {
            return Err(format!("{}:{}: `{key}` set twice", path.display(), n + 1));
        }
    }
    Ok(out)
}

fn known_anywhere(cmd: &Command, key: &str) -> bool {
    cmd.get_arguments().any(|a| a.get_long() == Some(key))
        || cmd.get_subcommands().any(|s| known_anywhere(s, key))
}

/// Parses `argv`, filling options not given explicitly from the `--config` file.
pub fn parse_with_config<C: Parser + CommandFactory>(
    argv: Vec<OsString>,
) -> Result<C, clap::Error> {
    let mut cmd = C::command();
    cmd.build();
    let matches = cmd.clone().try_get_matches_from(&argv)?;
    let Some((name, sub)) = matches.subcommand() else {
        return C::try_parse_from(argv);
    };
    let Some(path) = sub.get_one::<std::path::PathBuf>("config") else {
        return C::try_parse_from(argv);
    };
    let values = read(path).map_err(|m| cmd.error(ErrorKind::InvalidValue, m))?;
    let sub_cmd = cmd
        .find_subcommand(name)
        .expect("matched subcommand exists");
    let mut extra: Vec<OsString> = Vec::new();
    for (key, value) in &values {
        if key == "config" {
            return Err(cmd.error(
                ErrorKind::InvalidValue,
                "a config file cannot name another config file",
            ));
        }
        let Some(arg) = sub_cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
        else {
            if known_anywhere(&cmd, key) {
                continue;
            }
            return Err(cmd.error(
                ErrorKind::UnknownArgument,
                format!("unknown config key `{key}`"),
            ));
        };
        if !matches!(
            sub.value_source(arg.get_id().as_str()),
            None | Some(ValueSource::DefaultValue)
        ) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue => match value.as_str() {
                "true" => extra.push(format!("--{key}").into()),
                "false" => {}
                other => {
                    return Err(cmd.error(
                        ErrorKind::InvalidValue,
                        format!("`{key}` expects true or false, got `{other}`"),
                    ))
                }
            },
            _ => {
                extra.push(format!("--{key}").into());
                extra.push(value.into());
            }
        }
    }
    let mut full = argv;
    full.extend(extra);
    C::try_parse_from(full)
}
