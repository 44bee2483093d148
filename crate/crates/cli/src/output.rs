use std::fs;
use std::path::{Path, PathBuf};

use entpath_core::canonical::to_canonical_json;
use serde::Serialize;

use crate::error::CliError;

#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    version: &'static str,
    subcommand: &'a str,
    config: &'a C,
}

/// An output directory; every file written through it is canonical JSON or CSV.
pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| entpath_core::Error::Io {
            path: root.to_path_buf(),
            source: e,
        })?;
        Ok(Self { root: root.to_path_buf() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write_json<T: Serialize + ?Sized>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| entpath_core::Error::Io {
                path: parent.to_path_buf(),
                source: e,
            })?;
        }
        fs::write(&path, to_canonical_json(value)?).map_err(|e| entpath_core::Error::Io {
            path: path.clone(),
            source: e,
        })?;
        Ok(path)
    }

    /// Writes `config.json` (re-runnable with `--config`) and `manifest.json`.
    pub fn write_manifest<C: Serialize>(&self, subcommand: &str, config: &C) -> Result<(), CliError> {
        self.write_json("config.json", config)?;
        self.write_json(
            "manifest.json",
            &Manifest {
                version: env!("CARGO_PKG_VERSION"),
                subcommand,
                config,
            },
        )?;
        Ok(())
    }
}
