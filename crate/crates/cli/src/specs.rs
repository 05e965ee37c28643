//! Flag-value grammars: scheme specs, word specs, kind maps, grids.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use permfree::conditions::SchemeSpec;
use permfree::schemes::{
    load_table_file, tensor_scheme, SchemeKind, SchemeRegistry,
};
use permfree::word::{ConstName, Factor, MomentWord};
use permfree::{LinePerm, PermutationScheme};

pub fn parse_grid(text: &str) -> Result<Vec<usize>, String> {
    let grid: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad grid entry `{t}`")))
        .collect::<Result<_, _>>()?;
    if grid.is_empty() {
        return Err("empty grid".into());
    }
    Ok(grid)
}

pub fn parse_kind(token: &str) -> Result<SchemeKind, String> {
    match token {
        "sym" | "symmetric" | "semi" | "semicircular" => Ok(SchemeKind::Symmetric),
        "jsmall" | "j-small" | "circ" | "circular" => Ok(SchemeKind::JSmall),
        other => Err(format!(
            "unknown kind `{other}` (expected sym|jsmall, or semi|circ)"
        )),
    }
}

/// `a:semi,b:circ` -> label/kind map.
pub fn parse_kinds(text: &str) -> Result<BTreeMap<String, SchemeKind>, String> {
    let mut kinds = BTreeMap::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (label, kind) = part
            .rsplit_once(':')
            .ok_or_else(|| format!("kind spec `{part}` is not label:kind"))?;
        kinds.insert(label.to_string(), parse_kind(kind)?);
    }
    Ok(kinds)
}

fn line_rule(token: &str) -> Result<Box<dyn Fn(usize) -> LinePerm + Send + Sync>, String> {
    if token == "id" {
        return Ok(Box::new(LinePerm::identity));
    }
    if token == "rev" {
        return Ok(Box::new(LinePerm::reverse));
    }
    if token == "cycle" {
        return Ok(Box::new(LinePerm::cycle));
    }
    if let Some(k) = token.strip_prefix("cycle") {
        let k: usize = k
            .parse()
            .map_err(|_| format!("bad cycle amount in `{token}`"))?;
        return Ok(Box::new(move |n| LinePerm::shift(n, k)));
    }
    Err(format!(
        "unknown line permutation `{token}` (expected id|rev|cycle|cycle<k>)"
    ))
}

/// Resolves a scheme name, registering `tensor:<a>+<b>` and `custom:<path>`
/// schemes on first use so later lookups by the same token succeed.
pub fn resolve_scheme(
    registry: &mut SchemeRegistry,
    name: &str,
) -> Result<Arc<PermutationScheme>, String> {
    if let Ok(found) = registry.get(name) {
        return Ok(found);
    }
    if let Some(spec) = name.strip_prefix("tensor:") {
        let (a, b) = spec
            .split_once('+')
            .ok_or_else(|| format!("tensor spec `{spec}` is not <a>+<b>"))?;
        let phi = line_rule(a.trim())?;
        let psi = line_rule(b.trim())?;
        return Ok(registry.insert(rename(tensor_scheme(name, phi, psi), name)));
    }
    if let Some(path) = name.strip_prefix("custom:") {
        let scheme = load_table_file(Path::new(path)).map_err(|e| e.to_string())?;
        return Ok(registry.insert(rename(scheme, name)));
    }
    Err(format!("unknown scheme `{name}`"))
}

/// Re-labels a scheme so its registry key equals the spelled-out token.
fn rename(scheme: PermutationScheme, label: &str) -> PermutationScheme {
    let inner = Arc::new(scheme);
    let lookup = Arc::clone(&inner);
    PermutationScheme::new(
        label,
        "see the wrapped scheme",
        move |n| lookup.admissible(n),
        move |n| inner.build(n),
    )
}

/// `id:sym,gamma:sym,mix:jsmall` -> certification specs.
pub fn parse_scheme_specs(
    registry: &mut SchemeRegistry,
    text: &str,
) -> Result<Vec<SchemeSpec>, String> {
    let mut specs = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, kind) = part
            .rsplit_once(':')
            .filter(|(_, k)| parse_kind(k).is_ok())
            .ok_or_else(|| format!("scheme spec `{part}` is not name:kind"))?;
        specs.push(SchemeSpec {
            scheme: resolve_scheme(registry, name)?,
            kind: parse_kind(kind)?,
        });
    }
    if specs.len() < 2 {
        return Err("need at least two schemes to certify".into());
    }
    Ok(specs)
}

/// Comma-separated factors, `*` suffix for adjoints, `I`/`Z`/`T` reserved
/// for constants; scheme labels resolve against (and may extend) the
/// registry.
pub fn parse_scheme_word(
    registry: &mut SchemeRegistry,
    text: &str,
) -> Result<MomentWord, String> {
    let mut factors = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        match token {
            "I" => factors.push(Factor::Constant(ConstName::I)),
            "Z" => factors.push(Factor::Constant(ConstName::Z)),
            "T" => factors.push(Factor::Constant(ConstName::T)),
            _ => {
                let (label, star) = match token.strip_suffix('*') {
                    Some(base) => (base.trim(), true),
                    None => (token, false),
                };
                resolve_scheme(registry, label)?;
                factors.push(Factor::Gaussian {
                    label: label.to_string(),
                    star,
                });
            }
        }
    }
    MomentWord::new(factors).map_err(|e| e.to_string())
}

/// Word of abstract letters for the limit predictor; labels are free-form.
pub fn parse_abstract_word(text: &str) -> Result<Vec<(String, bool)>, String> {
    let mut letters = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        match token.strip_suffix('*') {
            Some(base) => letters.push((base.trim().to_string(), true)),
            None => letters.push((token.to_string(), false)),
        }
    }
    if letters.is_empty() {
        return Err("empty word".into());
    }
    Ok(letters)
}
