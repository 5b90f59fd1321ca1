use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use gdm_core::session::Session;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("data directory {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("session file {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
    #[error("session `{0}` already exists")]
    Exists(String),
}

type Cell = Arc<tokio::sync::RwLock<Session>>;

/// Sessions in memory, each mirrored to `<dir>/<id>.json`.
pub struct Store {
    dir: PathBuf,
    sessions: RwLock<HashMap<String, Cell>>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl Store {
    /// Opens (creating if needed) a data directory, checks it is writable
    /// and loads every session document in it.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        let probe = dir.join(".write-probe");
        fs::write(&probe, b"").map_err(io_err(&dir))?;
        fs::remove_file(&probe).map_err(io_err(&dir))?;

        let mut sessions = HashMap::new();
        for entry in fs::read_dir(&dir).map_err(io_err(&dir))? {
            let path = entry.map_err(io_err(&dir))?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            let session = Session::from_json(&text).map_err(|e| StoreError::Corrupt {
                path: path.clone(),
                reason: e.to_string(),
            })?;
            if path.file_stem().and_then(|s| s.to_str()) != Some(session.id.as_str()) {
                return Err(StoreError::Corrupt {
                    path,
                    reason: format!("holds session `{}`", session.id),
                });
            }
            sessions.insert(
                session.id.clone(),
                Arc::new(tokio::sync::RwLock::new(session)),
            );
        }
        log::info!(
            "loaded {} session(s) from {}",
            sessions.len(),
            dir.display()
        );
        Ok(Self {
            dir,
            sessions: RwLock::new(sessions),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, id: &str) -> Option<Cell> {
        self.sessions.read().expect("store lock").get(id).cloned()
    }

    pub fn insert(&self, session: Session) -> Result<(), StoreError> {
        let mut map = self.sessions.write().expect("store lock");
        if map.contains_key(&session.id) {
            return Err(StoreError::Exists(session.id));
        }
        self.persist(&session)?;
        map.insert(
            session.id.clone(),
            Arc::new(tokio::sync::RwLock::new(session)),
        );
        Ok(())
    }

    /// Writes to a temporary file, syncs it and renames it over the old
    /// document, so a crash leaves either the old or the new version.
    pub fn persist(&self, session: &Session) -> Result<(), StoreError> {
        let path = self.dir.join(format!("{}.json", session.id));
        let tmp = self.dir.join(format!(".{}.json.tmp", session.id));
        let mut file = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        file.write_all(session.to_json().as_bytes())
            .and_then(|_| file.sync_all())
            .map_err(io_err(&tmp))?;
        fs::rename(&tmp, &path).map_err(io_err(&path))?;
        Ok(())
    }
}
