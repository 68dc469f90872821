//! Line-oriented `key=value` domain files.
//!
//! ```text
//! # unit-area ellipse, axes ratio 2, shifted
//! kind=ellipse
//! aspect=2
//! offset=0.25,0
//! ```
//!
//! Keys: `kind` (`disk`, `rectangle`, `ellipse`, `polygon`, `perturbed-disk`),
//! `aspect`, `area`, `vertices` (`x,y` pairs separated by `;`),
//! `radius_samples` (comma-separated radii at equispaced angles) and
//! `offset` (`x,y`). Blank lines and `#` comments are ignored.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{DomainKind, DomainSpec, Point};

const KEYS: [&str; 6] = [
    "kind",
    "aspect",
    "area",
    "vertices",
    "radius_samples",
    "offset",
];

fn fail(line: usize, message: impl Into<String>) -> Error {
    Error::DomainFile {
        line,
        message: message.into(),
    }
}

fn number(line: usize, key: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| fail(line, format!("{key}: `{}` is not a number", s.trim())))
}

fn pair(line: usize, key: &str, s: &str) -> Result<Point> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(fail(
            line,
            format!("{key}: expected `x,y`, got `{}`", s.trim()),
        ));
    }
    Ok([number(line, key, parts[0])?, number(line, key, parts[1])?])
}

/// Parses the text of a domain file.
pub fn parse_domain_spec(text: &str) -> Result<DomainSpec> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| fail(line, format!("expected `key=value`, got `{content}`")))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(fail(line, format!("unknown key `{key}`")));
        }
        if entries.insert(key, (line, value.trim())).is_some() {
            return Err(fail(line, format!("duplicate key `{key}`")));
        }
    }
    let (kind_line, kind) = *entries
        .get("kind")
        .ok_or_else(|| fail(0, "missing `kind`"))?;
    let allowed: &[&str] = match kind {
        "disk" => &["area"],
        "rectangle" | "ellipse" => &["aspect"],
        "polygon" => &["vertices"],
        "perturbed-disk" | "perturbed_disk" => &["radius_samples"],
        other => return Err(fail(kind_line, format!("unknown kind `{other}`"))),
    };
    for (key, &(line, _)) in &entries {
        if !matches!(*key, "kind" | "offset") && !allowed.contains(key) {
            return Err(fail(line, format!("`{key}` does not apply to kind={kind}")));
        }
    }
    let get = |key: &str| entries.get(key).copied();
    let scalar = |key: &str, default: f64| -> Result<f64> {
        get(key).map_or(Ok(default), |(line, v)| number(line, key, v))
    };
    let kind = match kind {
        "disk" => DomainKind::Disk {
            area: scalar("area", 1.0)?,
        },
        "rectangle" => DomainKind::Rectangle {
            aspect: scalar("aspect", 1.0)?,
        },
        "ellipse" => DomainKind::Ellipse {
            aspect: scalar("aspect", 1.0)?,
        },
        "polygon" => {
            let (line, v) =
                get("vertices").ok_or_else(|| fail(kind_line, "kind=polygon needs `vertices`"))?;
            let vertices = v
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| pair(line, "vertices", s))
                .collect::<Result<_>>()?;
            DomainKind::Polygon { vertices }
        }
        _ => {
            let (line, v) = get("radius_samples")
                .ok_or_else(|| fail(kind_line, "kind=perturbed-disk needs `radius_samples`"))?;
            let radius_samples = v
                .split(',')
                .map(|s| number(line, "radius_samples", s))
                .collect::<Result<_>>()?;
            DomainKind::PerturbedDisk { radius_samples }
        }
    };
    let spec = DomainSpec::new(kind)?;
    match get("offset") {
        Some((line, v)) => {
            let [dx, dy] = pair(line, "offset", v)?;
            Ok(spec.translated(dx, dy))
        }
        None => Ok(spec),
    }
}

/// Reads and parses a domain file.
pub fn load_domain_spec(path: &Path) -> Result<DomainSpec> {
    parse_domain_spec(&std::fs::read_to_string(path)?)
}
