//! Session persistence: one JSON document per session.

use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use chrono::{DateTime, Utc};
use icb_core::{DialogueState, GeneratedArtifact};
use rand::RngCore;
use serde::{Deserialize, Serialize};

const ID_BYTES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Session {
    pub id: String,
    pub state: DialogueState,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
    /// Present once the conversation has generated code.
    pub artifacts: Option<Vec<GeneratedArtifact>>,
}

/// A fresh URL-safe id from 16 random bytes.
pub fn new_id() -> String {
    let mut bytes = [0u8; ID_BYTES];
    rand::thread_rng().fill_bytes(&mut bytes);
    URL_SAFE_NO_PAD.encode(bytes)
}

/// Whether `id` has the shape `new_id` produces; anything else is unknown.
pub fn is_valid_id(id: &str) -> bool {
    URL_SAFE_NO_PAD.decode(id).is_ok_and(|b| b.len() == ID_BYTES)
}

pub trait Store: Send + Sync {
    fn load(&self, id: &str) -> io::Result<Option<Session>>;
    /// Replaces the stored document atomically.
    fn save(&self, session: &Session) -> io::Result<()>;
}

#[derive(Debug, Default)]
pub struct MemoryStore {
    sessions: Mutex<HashMap<String, Session>>,
}

impl MemoryStore {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Store for MemoryStore {
    fn load(&self, id: &str) -> io::Result<Option<Session>> {
        Ok(self.sessions.lock().unwrap().get(id).cloned())
    }

    fn save(&self, session: &Session) -> io::Result<()> {
        self.sessions.lock().unwrap().insert(session.id.clone(), session.clone());
        Ok(())
    }
}

/// `<dir>/<id>.json`, written to a temp file, synced, then renamed over.
#[derive(Debug, Clone)]
pub struct FileStore {
    dir: PathBuf,
}

impl FileStore {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(FileStore { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.json"))
    }
}

impl Store for FileStore {
    fn load(&self, id: &str) -> io::Result<Option<Session>> {
        if !is_valid_id(id) {
            return Ok(None);
        }
        match fs::read(self.path(id)) {
            Ok(bytes) => serde_json::from_slice(&bytes).map(Some).map_err(io::Error::other),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn save(&self, session: &Session) -> io::Result<()> {
        if !is_valid_id(&session.id) {
            return Err(io::Error::new(io::ErrorKind::InvalidInput, "malformed session id"));
        }
        let bytes = serde_json::to_vec_pretty(session).map_err(io::Error::other)?;
        let tmp = self.dir.join(format!(".{}.{}.tmp", session.id, new_id()));
        let result = (|| {
            let mut f = File::create(&tmp)?;
            f.write_all(&bytes)?;
            f.sync_all()?;
            fs::rename(&tmp, self.path(&session.id))?;
            // make the rename itself durable
            File::open(&self.dir)?.sync_all()
        })();
        if result.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session() -> Session {
        let now = Utc::now();
        Session {
            id: new_id(),
            state: icb_core::dialogue::start().0,
            created_at: now,
            updated_at: now,
            artifacts: None,
        }
    }

    #[test]
    fn ids_are_distinct_and_url_safe() {
        let a = new_id();
        assert_ne!(a, new_id());
        assert_eq!(a.len(), 22);
        assert!(a.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_'));
        assert!(is_valid_id(&a));
        assert!(!is_valid_id("../etc/passwd"));
        assert!(!is_valid_id("short"));
    }

    #[test]
    fn file_store_round_trips_and_leaves_no_temp_files() {
        let dir = tempfile::tempdir().unwrap();
        let store = FileStore::open(dir.path()).unwrap();
        let s = session();
        store.save(&s).unwrap();
        store.save(&s).unwrap();
        assert_eq!(store.load(&s.id).unwrap(), Some(s.clone()));
        let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names, vec![std::ffi::OsString::from(format!("{}.json", s.id))]);
        // a second store over the same directory sees the same document
        assert_eq!(FileStore::open(dir.path()).unwrap().load(&s.id).unwrap(), Some(s));
    }

    #[test]
    fn unknown_and_malformed_ids_load_as_none() {
        let dir = tempfile::tempdir().unwrap();
        let store = FileStore::open(dir.path()).unwrap();
        assert_eq!(store.load(&new_id()).unwrap(), None);
        assert_eq!(store.load("../x").unwrap(), None);
        assert_eq!(MemoryStore::new().load("x").unwrap(), None);
    }
}
