//! `--config file.json`: a flat object of flag names to values, appended to
//! the command line for every flag not already given there.

use std::path::Path;

use serde_json::Value;

fn given(argv: &[String], flag: &str) -> bool {
    argv.iter().any(|a| a == flag || a.starts_with(&format!("{flag}=")))
}

fn load(path: &Path) -> Result<serde_json::Map<String, Value>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err("config must be a JSON object".into()),
        Err(e) => Err(format!("config is not valid JSON: {e}")),
    }
}

fn scalar(v: &Value, key: &str) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(format!("config value for {key} must be a string, number, bool, or array")),
    }
}

/// Removes `--config` from `argv` and merges the file beneath explicit flags.
pub fn expand(mut argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = argv.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(argv);
    };
    let path = if let Some(p) = argv[pos].strip_prefix("--config=") {
        let p = p.to_string();
        argv.remove(pos);
        p
    } else {
        if pos + 1 >= argv.len() {
            return Err("--config needs a file".into());
        }
        let p = argv.remove(pos + 1);
        argv.remove(pos);
        p
    };
    let map = load(Path::new(&path))?;
    let mut keys: Vec<&String> = map.keys().collect();
    keys.sort();
    for key in keys {
        let flag = format!("--{key}");
        if given(&argv, &flag) {
            continue;
        }
        match &map[key] {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let parts = items.iter().map(|v| scalar(v, key)).collect::<Result<Vec<_>, _>>()?;
                argv.push(flag);
                argv.push(parts.join(","));
            }
            other => {
                argv.push(flag);
                argv.push(scalar(other, key)?);
            }
        }
    }
    Ok(argv)
}
