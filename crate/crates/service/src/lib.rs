//! HTTP/JSON session service for the contract-specification chatbot.
//!
//! Each session holds one dialogue state persisted as a single JSON
//! document; turns on one session are applied one at a time.

pub mod api;
pub mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::http::{HeaderValue, Method};
use axum::Router;
use tower_http::cors::{Any, CorsLayer};
use tower_http::services::ServeDir;

pub use api::{router, AppState, ErrorBody, MessageReply, MessageRequest, SessionView};
pub use store::{FileStore, MemoryStore, Session, Store};

pub const DEFAULT_PORT: u16 = 8080;
pub const DEFAULT_DATA_DIR: &str = "icb-data";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub port: u16,
    /// Session documents live here; `None` keeps sessions in memory.
    pub data_dir: Option<PathBuf>,
    pub cors_origin: Option<String>,
    /// Static web bundle served at `/`.
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("ICB_PORT must be a port number, got {0:?}")]
    Port(String),
    #[error("ICB_CORS_ORIGIN is not a valid origin: {0:?}")]
    Origin(String),
}

impl Default for Config {
    fn default() -> Self {
        Config { port: DEFAULT_PORT, data_dir: Some(DEFAULT_DATA_DIR.into()), cors_origin: None, static_dir: None }
    }
}

impl Config {
    /// Reads ICB_PORT, ICB_DATA_DIR, ICB_CORS_ORIGIN and ICB_STATIC_DIR.
    pub fn from_env() -> Result<Config, ConfigError> {
        Config::from_lookup(|k| std::env::var(k).ok())
    }

    pub fn from_lookup(get: impl Fn(&str) -> Option<String>) -> Result<Config, ConfigError> {
        let mut c = Config::default();
        if let Some(p) = get("ICB_PORT") {
            c.port = p.trim().parse().map_err(|_| ConfigError::Port(p))?;
        }
        if let Some(d) = get("ICB_DATA_DIR").filter(|d| !d.is_empty()) {
            c.data_dir = Some(d.into());
        }
        c.cors_origin = get("ICB_CORS_ORIGIN").filter(|o| !o.is_empty());
        if let Some(o) = &c.cors_origin {
            if o != "*" && HeaderValue::from_str(o).is_err() {
                return Err(ConfigError::Origin(o.clone()));
            }
        }
        c.static_dir = get("ICB_STATIC_DIR").filter(|d| !d.is_empty()).map(PathBuf::from);
        Ok(c)
    }
}

/// The full application: API routes, optional CORS and static files.
pub fn app(config: &Config, store: Arc<dyn Store>) -> Router {
    let mut r = router(AppState::new(store));
    if let Some(dir) = &config.static_dir {
        r = r.fallback_service(ServeDir::new(dir));
    }
    if let Some(origin) = &config.cors_origin {
        let cors = CorsLayer::new()
            .allow_methods([Method::GET, Method::POST])
            .allow_headers([axum::http::header::CONTENT_TYPE]);
        let cors = if origin == "*" {
            cors.allow_origin(Any)
        } else {
            cors.allow_origin(HeaderValue::from_str(origin).expect("checked in Config"))
        };
        r = r.layer(cors);
    }
    r
}

pub fn open_store(config: &Config) -> std::io::Result<Arc<dyn Store>> {
    Ok(match &config.data_dir {
        Some(dir) => Arc::new(FileStore::open(dir)?),
        None => Arc::new(MemoryStore::new()),
    })
}

/// Binds and serves until interrupted. Prints the bound address first so
/// callers that asked for port 0 can find it.
pub async fn serve(config: Config) -> std::io::Result<()> {
    let store = open_store(&config)?;
    let listener = tokio::net::TcpListener::bind(SocketAddr::from(([127, 0, 0, 1], config.port))).await?;
    println!("icb listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app(&config, store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
