//! `key=value` defaults and `a:b:s` ranges.

use std::collections::BTreeMap;
use std::path::Path;

use clap::CommandFactory;

use crate::args::Cli;

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn has_flag(argv: &[String], long: &str) -> bool {
    let flag = format!("--{long}");
    let eq = format!("--{long}=");
    argv.iter().any(|a| *a == flag || a.starts_with(&eq))
}

/// Appends config-file values for every flag of the chosen subcommand that
/// is absent from `argv`.
pub fn merge_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| format!("cannot read config {path}: {e}"))?;
    let values = parse_config(&text)?;
    let cmd = Cli::command();
    let Some(sub) = argv
        .iter()
        .skip(1)
        .find_map(|a| cmd.find_subcommand(a.as_str()))
    else {
        return Ok(argv);
    };
    let mut out = argv.clone();
    for (key, value) in &values {
        if key == "config" || has_flag(&argv, key) {
            continue;
        }
        let arg = sub
            .get_arguments()
            .chain(cmd.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| format!("config key {key:?} is not a flag of {}", sub.get_name()))?;
        if arg.get_action().takes_values() {
            out.push(format!("--{key}"));
            out.push(value.clone());
        } else {
            match value.as_str() {
                "true" | "1" | "yes" => out.push(format!("--{key}")),
                "false" | "0" | "no" => {}
                other => return Err(format!("config key {key:?}: expected a boolean, got {other:?}")),
            }
        }
    }
    Ok(out)
}

/// `a`, `a:b` or `a:b:s`, inclusive.
pub fn parse_range(s: &str) -> Result<Vec<usize>, String> {
    let num = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad number {x:?} in range {s:?}"))
    };
    let parts: Vec<&str> = s.split(':').collect();
    let (a, b, step) = match parts.as_slice() {
        [a] => (num(a)?, num(a)?, 1),
        [a, b] => (num(a)?, num(b)?, 1),
        [a, b, c] => (num(a)?, num(b)?, num(c)?),
        _ => return Err(format!("bad range {s:?}")),
    };
    if step == 0 || b < a {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a..=b).step_by(step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4:40:4").unwrap().len(), 10);
        assert_eq!(parse_range("2:4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_range("7").unwrap(), vec![7]);
        assert!(parse_range("4:2").is_err());
        assert!(parse_range("1:5:0").is_err());
        assert!(parse_range("a").is_err());
    }

    #[test]
    fn config_lines() {
        let m = parse_config("# defaults\nn = 3\nn2_reading=pair # inline\n\n").unwrap();
        assert_eq!(m["n"], "3");
        assert_eq!(m["n2-reading"], "pair");
        assert!(parse_config("oops").is_err());
    }

    #[test]
    fn flags_win_over_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hw.conf");
        std::fs::write(&path, "n=4\nt=8\ntiming=true\n").unwrap();
        let argv: Vec<String> = ["hadwalk", "count", "--n", "3", "--config", path.to_str().unwrap()]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let merged = merge_config(argv).unwrap();
        assert_eq!(&merged[6..], ["--t", "8", "--timing"]);
    }
}
