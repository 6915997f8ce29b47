//! Cache-first fetching from one source.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use crate::record::{format_record, parse_record, PersonRecord, SourceName};

pub const DEFAULT_INTERVAL: Duration = Duration::from_secs(1);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceConfig {
    pub source: SourceName,
    /// Records live at `{base_url}/{id}.rec`.
    pub base_url: String,
    pub min_request_interval: Duration,
    /// Cache root; entries go to `<cache_dir>/<source>/<id>.rec`.
    pub cache_dir: PathBuf,
}

impl SourceConfig {
    pub fn new(
        source: SourceName,
        base_url: impl Into<String>,
        cache_dir: impl Into<PathBuf>,
    ) -> Self {
        SourceConfig {
            source,
            base_url: base_url.into(),
            min_request_interval: DEFAULT_INTERVAL,
            cache_dir: cache_dir.into(),
        }
    }

    pub fn with_interval(mut self, interval: Duration) -> Self {
        self.min_request_interval = interval;
        self
    }

    pub fn cache_path(&self, id: &str) -> PathBuf {
        self.cache_dir
            .join(self.source.as_str())
            .join(format!("{}.rec", escape_id(id)))
    }

    pub fn url(&self, id: &str) -> String {
        format!(
            "{}/{}.rec",
            self.base_url.trim_end_matches('/'),
            escape_id(id)
        )
    }
}

/// Keeps `[A-Za-z0-9._-]`, percent-encodes every other byte.
fn escape_id(id: &str) -> String {
    let mut out = String::with_capacity(id.len());
    for b in id.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'.' | b'_' | b'-') {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum HarvestError {
    #[error("minimum request interval must be positive")]
    ZeroInterval,
    #[error("{source_name} `{id}`: {message}")]
    Transport {
        source_name: SourceName,
        id: String,
        message: String,
    },
    #[error("{source_name} `{id}`: not cached and network use is disabled")]
    Offline { source_name: SourceName, id: String },
    #[error("{source_name} `{id}`: bad record: {message}")]
    Parse {
        source_name: SourceName,
        id: String,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Blocking GET returning the body of a successful response.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> Result<String, String>;
}

pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(timeout: Duration) -> Self {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .build();
        HttpTransport {
            agent: ureq::Agent::new_with_config(config),
        }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        HttpTransport::new(Duration::from_secs(30))
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<String, String> {
        let mut resp = self.agent.get(url).call().map_err(|e| e.to_string())?;
        resp.body_mut().read_to_string().map_err(|e| e.to_string())
    }
}

/// A person that could not be fetched during an ancestry walk.
#[derive(Debug)]
pub struct Gap {
    pub id: String,
    pub error: HarvestError,
}

#[derive(Debug, Default)]
pub struct Ancestry {
    pub records: BTreeMap<String, PersonRecord>,
    pub gaps: Vec<Gap>,
}

pub struct Harvester<T: Transport = HttpTransport> {
    config: SourceConfig,
    transport: T,
    offline: bool,
    last_request: Mutex<Option<Instant>>,
    requests: AtomicUsize,
}

impl Harvester<HttpTransport> {
    pub fn http(config: SourceConfig) -> Result<Self, HarvestError> {
        Harvester::new(config, HttpTransport::default())
    }
}

impl<T: Transport> Harvester<T> {
    pub fn new(config: SourceConfig, transport: T) -> Result<Self, HarvestError> {
        if config.min_request_interval.is_zero() {
            return Err(HarvestError::ZeroInterval);
        }
        Ok(Harvester {
            config,
            transport,
            offline: false,
            last_request: Mutex::new(None),
            requests: AtomicUsize::new(0),
        })
    }

    /// Forbids network use; only cached records are served.
    pub fn offline(mut self, offline: bool) -> Self {
        self.offline = offline;
        self
    }

    pub fn config(&self) -> &SourceConfig {
        &self.config
    }

    /// Requests issued so far.
    pub fn request_count(&self) -> usize {
        self.requests.load(Ordering::Relaxed)
    }

    pub fn fetch_person(&self, id: &str) -> Result<PersonRecord, HarvestError> {
        let path = self.config.cache_path(id);
        match std::fs::read_to_string(&path) {
            Ok(text) => return self.parse(id, &text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(source) => return Err(HarvestError::Io { path, source }),
        }
        if self.offline {
            return Err(HarvestError::Offline {
                source_name: self.config.source,
                id: id.to_owned(),
            });
        }
        let body = self.request(id)?;
        let mut rec = self.parse(id, &body)?;
        if rec.fetched_at.is_none() {
            rec.fetched_at = Some(
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map_or(0, |d| d.as_secs()),
            );
        }
        write_atomic(&path, format_record(&rec).as_bytes())?;
        Ok(rec)
    }

    /// Breadth-first walk up advisor links, at most `depth` generations.
    /// Failures are collected as gaps; whatever was reached is returned.
    pub fn fetch_ancestry(&self, id: &str, depth: u32) -> Ancestry {
        let mut out = Ancestry::default();
        let mut seen = BTreeSet::from([id.to_owned()]);
        let mut queue = VecDeque::from([(id.to_owned(), 0u32)]);
        while let Some((next, d)) = queue.pop_front() {
            match self.fetch_person(&next) {
                Ok(rec) => {
                    if d < depth {
                        for (advisor, _) in &rec.advisors {
                            if seen.insert(advisor.clone()) {
                                queue.push_back((advisor.clone(), d + 1));
                            }
                        }
                    }
                    out.records.insert(next, rec);
                }
                Err(error) => out.gaps.push(Gap { id: next, error }),
            }
        }
        out
    }

    fn parse(&self, id: &str, text: &str) -> Result<PersonRecord, HarvestError> {
        let bad = |message: String| HarvestError::Parse {
            source_name: self.config.source,
            id: id.to_owned(),
            message,
        };
        let rec = parse_record(text).map_err(|e| bad(e.to_string()))?;
        if rec.source != self.config.source || rec.id != id {
            return Err(bad(format!("record is {} `{}`", rec.source, rec.id)));
        }
        Ok(rec)
    }

    /// One GET, spaced at least `min_request_interval` after the previous one.
    /// The lock is held for the whole request so the stream stays serial.
    fn request(&self, id: &str) -> Result<String, HarvestError> {
        let mut last = self.last_request.lock().unwrap_or_else(|p| p.into_inner());
        if let Some(prev) = *last {
            let ready = prev + self.config.min_request_interval;
            let now = Instant::now();
            if ready > now {
                thread::sleep(ready - now);
            }
        }
        *last = Some(Instant::now());
        self.requests.fetch_add(1, Ordering::Relaxed);
        self.transport
            .get(&self.config.url(id))
            .map_err(|message| HarvestError::Transport {
                source_name: self.config.source,
                id: id.to_owned(),
                message,
            })
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), HarvestError> {
    let io = |source| HarvestError::Io {
        path: path.to_owned(),
        source,
    };
    let dir = path.parent().unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_and_urls() {
        let cfg = SourceConfig::new(SourceName::MathGenealogy, "http://h/x/", "cache");
        assert_eq!(
            cfg.cache_path("12"),
            Path::new("cache/math_genealogy/12.rec")
        );
        assert_eq!(cfg.url("a b/c"), "http://h/x/a%20b%2Fc.rec");
    }

    #[test]
    fn zero_interval_rejected() {
        let cfg =
            SourceConfig::new(SourceName::Manual, "http://h", "c").with_interval(Duration::ZERO);
        assert!(matches!(
            Harvester::http(cfg),
            Err(HarvestError::ZeroInterval)
        ));
    }
}
