use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{DatumInfo, StratAtlas, ATLAS_VERSION};
use crate::affine::{AffineWeylGroup, ParahoricType};
use crate::error::{Error, Result};

/// Stable key for `(datum, σ, μ, J, version)`.
pub fn cache_key(group: &AffineWeylGroup, mu: &[i64], j: &ParahoricType) -> String {
    let doc = serde_json::json!({
        "version": ATLAS_VERSION,
        "datum": DatumInfo::of(group),
        "mu": mu,
        "parahoric": j,
    });
    let digest = Sha256::digest(doc.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

/// Writes `<dir>/<key>.json` atomically.
pub fn cache_store(dir: &Path, key: &str, atlas: &StratAtlas) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(io(dir))?;
    let path = dir.join(format!("{key}.json"));
    let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
    let mut file = fs::File::create(&tmp).map_err(io(&tmp))?;
    file.write_all(atlas.to_json().as_bytes()).map_err(io(&tmp))?;
    file.sync_all().map_err(io(&tmp))?;
    fs::rename(&tmp, &path).map_err(io(&path))?;
    Ok(path)
}

/// `None` on a miss, an unreadable document or a version mismatch.
pub fn cache_load(dir: &Path, key: &str) -> Result<Option<StratAtlas>> {
    let path = dir.join(format!("{key}.json"));
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::Io { path, source: e }),
    };
    Ok(StratAtlas::from_json(&text).ok().filter(|a| a.version == ATLAS_VERSION))
}
