//! Materials files.
//!
//! A file holds either one material as top-level keys or several as an
//! array of `[[material]]` tables. Directories listed in the
//! `CASIMIR_FILM_MATERIALS` environment variable are searched first, then
//! `./materials`; `gold` is always available as a built-in.

use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::dielectric::Material;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const SEARCH_PATH_VAR: &str = "CASIMIR_FILM_MATERIALS";

const BUILTIN_GOLD: &str = include_str!("../../../materials/gold.toml");

#[derive(Deserialize)]
#[serde(untagged, bound = "T: Real + Serialize + DeserializeOwned")]
enum FileLayout<T> {
    Table { material: Vec<Material<T>> },
    Single(Material<T>),
}

#[derive(Serialize)]
#[serde(bound = "T: Real + Serialize + DeserializeOwned")]
struct TableOut<'a, T> {
    material: &'a [Material<T>],
}

/// Parses the contents of a materials file. `origin` is only used in errors.
pub fn parse<T>(text: &str, origin: &str) -> Result<Vec<Material<T>>>
where
    T: Real + Serialize + DeserializeOwned,
{
    let layout: FileLayout<T> = toml::from_str(text).map_err(|source| Error::MaterialParse {
        path: origin.to_string(),
        source,
    })?;
    let list = match layout {
        FileLayout::Table { material } => material,
        FileLayout::Single(m) => vec![m],
    };
    for m in &list {
        m.validate()?;
    }
    Ok(list)
}

/// Serializes one material in the single-material layout.
pub fn to_toml<T>(mat: &Material<T>) -> Result<String>
where
    T: Real + Serialize + DeserializeOwned,
{
    Ok(toml::to_string(mat)?)
}

/// Serializes several materials as a `[[material]]` array.
pub fn to_toml_table<T>(mats: &[Material<T>]) -> Result<String>
where
    T: Real + Serialize + DeserializeOwned,
{
    Ok(toml::to_string(&TableOut { material: mats })?)
}

pub fn load_file<T>(path: &Path) -> Result<Vec<Material<T>>>
where
    T: Real + Serialize + DeserializeOwned,
{
    let text = std::fs::read_to_string(path)?;
    parse(&text, &path.display().to_string())
}

/// Where a material definition came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    File(PathBuf),
    Builtin,
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Source::File(p) => write!(f, "{}", p.display()),
            Source::Builtin => f.write_str("builtin"),
        }
    }
}

/// Directories searched for `*.toml` materials files, in priority order.
pub fn search_dirs() -> Vec<PathBuf> {
    let mut dirs: Vec<PathBuf> = std::env::var_os(SEARCH_PATH_VAR)
        .map(|v| std::env::split_paths(&v).collect())
        .unwrap_or_default();
    dirs.push(PathBuf::from("materials"));
    dirs
}

/// Every material visible from `dirs` plus the built-ins. Earlier entries
/// shadow later ones with the same name.
pub fn list_in(dirs: &[PathBuf]) -> Result<Vec<(Material<f64>, Source)>> {
    let mut out: Vec<(Material<f64>, Source)> = Vec::new();
    for dir in dirs {
        let Ok(entries) = std::fs::read_dir(dir) else {
            continue;
        };
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "toml"))
            .collect();
        paths.sort();
        for p in paths {
            for m in load_file::<f64>(&p)? {
                if !out.iter().any(|(o, _)| o.name == m.name) {
                    out.push((m, Source::File(p.clone())));
                }
            }
        }
    }
    for m in parse::<f64>(BUILTIN_GOLD, "builtin")? {
        if !out.iter().any(|(o, _)| o.name == m.name) {
            out.push((m, Source::Builtin));
        }
    }
    Ok(out)
}

pub fn list() -> Result<Vec<(Material<f64>, Source)>> {
    list_in(&search_dirs())
}

/// Resolves a material by file path or by name.
pub fn resolve_in(name_or_path: &str, dirs: &[PathBuf]) -> Result<Material<f64>> {
    let path = Path::new(name_or_path);
    if path.is_file() {
        return load_file(path)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::MaterialNotFound(name_or_path.to_string()));
    }
    list_in(dirs)?
        .into_iter()
        .find(|(m, _)| m.name.eq_ignore_ascii_case(name_or_path))
        .map(|(m, _)| m)
        .ok_or_else(|| Error::MaterialNotFound(name_or_path.to_string()))
}

pub fn resolve(name_or_path: &str) -> Result<Material<f64>> {
    resolve_in(name_or_path, &search_dirs())
}
