use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use genealogy::EdgeKind;
use genealogy_harvest::{
    format_record, merge_sources, Aliases, HarvestError, Harvester, HttpTransport, PersonRecord,
    SourceConfig, SourceName,
};

/// Minimal HTTP/1.1 server answering `GET /<name>` from a fixed table.
struct Stub {
    base_url: String,
    hits: Arc<Mutex<Vec<(String, Instant)>>>,
}

impl Stub {
    fn start(pages: BTreeMap<String, String>) -> Stub {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let base_url = format!("http://{}", listener.local_addr().unwrap());
        let hits = Arc::new(Mutex::new(Vec::new()));
        let log = Arc::clone(&hits);
        thread::spawn(move || {
            for stream in listener.incoming() {
                let Ok(mut stream) = stream else { continue };
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut request_line = String::new();
                if reader.read_line(&mut request_line).is_err() {
                    continue;
                }
                let mut header = String::new();
                while reader.read_line(&mut header).is_ok_and(|n| n > 2) {
                    header.clear();
                }
                let path = request_line
                    .split_whitespace()
                    .nth(1)
                    .unwrap_or("/")
                    .trim_start_matches('/')
                    .to_owned();
                log.lock().unwrap().push((path.clone(), Instant::now()));
                let (status, body) = match pages.get(&path) {
                    Some(b) => ("200 OK", b.clone()),
                    None => ("404 Not Found", String::new()),
                };
                let _ = write!(
                    stream,
                    "HTTP/1.1 {status}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                );
            }
        });
        Stub { base_url, hits }
    }

    fn hits(&self) -> Vec<String> {
        self.hits
            .lock()
            .unwrap()
            .iter()
            .map(|(p, _)| p.clone())
            .collect()
    }
}

fn f1_records() -> Vec<PersonRecord> {
    let person =
        |id: &str, name: &str, year: i32, inst: &str, advisor: Option<&str>| PersonRecord {
            name: Some(name.into()),
            degree_year: Some(year),
            degree_institution: Some(inst.into()),
            advisors: advisor
                .map(|a| (a.to_owned(), EdgeKind::Phd))
                .into_iter()
                .collect(),
            fetched_at: Some(1_700_000_000),
            ..PersonRecord::new(SourceName::MathGenealogy, id)
        };
    vec![
        person("P", "Professor P", 1900, "U2", None),
        person("A", "Laureate A", 1930, "U1", Some("P")),
        person("B", "Laureate B", 1932, "U1", Some("P")),
        person("C", "Laureate C", 1960, "U3", Some("A")),
    ]
}

fn f1_server() -> Stub {
    Stub::start(
        f1_records()
            .iter()
            .map(|r| (format!("{}.rec", r.id), format_record(r)))
            .collect(),
    )
}

fn harvester(stub: &Stub, cache: &std::path::Path, interval_ms: u64) -> Harvester {
    let cfg = SourceConfig::new(SourceName::MathGenealogy, stub.base_url.clone(), cache)
        .with_interval(Duration::from_millis(interval_ms));
    Harvester::new(cfg, HttpTransport::new(Duration::from_secs(5))).unwrap()
}

#[test]
fn miss_then_hit() {
    let stub = f1_server();
    let dir = tempfile::tempdir().unwrap();
    let h = harvester(&stub, dir.path(), 1);
    let first = h.fetch_person("C").unwrap();
    assert_eq!(first.name.as_deref(), Some("Laureate C"));
    let path = dir.path().join("math_genealogy/C.rec");
    let bytes = std::fs::read(&path).unwrap();
    let second = h.fetch_person("C").unwrap();
    assert_eq!(first, second);
    assert_eq!(h.request_count(), 1);
    assert_eq!(std::fs::read(&path).unwrap(), bytes);

    // a fresh client on the same cache issues nothing
    let again = harvester(&stub, dir.path(), 1);
    assert_eq!(again.fetch_person("C").unwrap(), first);
    assert_eq!(again.request_count(), 0);
    assert_eq!(stub.hits(), ["C.rec"]);
}

#[test]
fn ancestry_by_depth() {
    let stub = f1_server();
    let dir = tempfile::tempdir().unwrap();
    let h = harvester(&stub, dir.path(), 1);
    let only = h.fetch_ancestry("C", 0);
    assert_eq!(only.records.keys().collect::<Vec<_>>(), ["C"]);
    let two = h.fetch_ancestry("C", 2);
    assert_eq!(two.records.keys().collect::<Vec<_>>(), ["A", "C", "P"]);
    assert!(two.gaps.is_empty());
    let deep = h.fetch_ancestry("C", 5);
    assert_eq!(deep.records.len(), 3);
    assert!(deep.gaps.is_empty());
    // C, A and P were each requested once
    assert_eq!(h.request_count(), 3);

    let merged = merge_sources(deep.records.values(), &Aliases::new()).unwrap();
    assert_eq!(merged.graph.node_count(), 3);
    assert!(merged.graph.contains("mgp:P"));
    assert_eq!(merged.graph.edge_count(), 2);
}

#[test]
fn missing_advisor_is_a_gap() {
    let mut records = f1_records();
    records[3].advisors.push(("Q".into(), EdgeKind::Mentor));
    let stub = Stub::start(
        records
            .iter()
            .map(|r| (format!("{}.rec", r.id), format_record(r)))
            .collect(),
    );
    let dir = tempfile::tempdir().unwrap();
    let anc = harvester(&stub, dir.path(), 1).fetch_ancestry("C", 3);
    assert_eq!(anc.records.len(), 3);
    assert_eq!(anc.gaps.len(), 1);
    assert_eq!(anc.gaps[0].id, "Q");
    assert!(matches!(anc.gaps[0].error, HarvestError::Transport { .. }));
}

#[test]
fn malformed_payload_is_not_cached() {
    let stub = Stub::start(BTreeMap::from([("X.rec".to_owned(), "<html>".to_owned())]));
    let dir = tempfile::tempdir().unwrap();
    let err = harvester(&stub, dir.path(), 1)
        .fetch_person("X")
        .unwrap_err();
    assert!(matches!(err, HarvestError::Parse { .. }));
    assert!(!dir.path().join("math_genealogy/X.rec").exists());
}

#[test]
fn unreachable_server_names_source_and_id() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    drop(listener);
    let dir = tempfile::tempdir().unwrap();
    let cfg = SourceConfig::new(
        SourceName::AcademicTree,
        format!("http://{addr}"),
        dir.path(),
    );
    let h = Harvester::new(cfg, HttpTransport::new(Duration::from_secs(2))).unwrap();
    let msg = h.fetch_person("42").unwrap_err().to_string();
    assert!(msg.contains("academic_tree") && msg.contains("42"), "{msg}");
}

#[test]
fn offline_serves_cache_only() {
    let stub = f1_server();
    let dir = tempfile::tempdir().unwrap();
    harvester(&stub, dir.path(), 1).fetch_person("A").unwrap();
    let h = harvester(&stub, dir.path(), 1).offline(true);
    assert!(h.fetch_person("A").is_ok());
    assert!(matches!(
        h.fetch_person("B"),
        Err(HarvestError::Offline { .. })
    ));
    assert_eq!(h.request_count(), 0);
}

#[test]
fn requests_are_spaced() {
    let stub = f1_server();
    let dir = tempfile::tempdir().unwrap();
    let h = Arc::new(harvester(&stub, dir.path(), 80));
    let workers: Vec<_> = ["P", "A", "B", "C"]
        .into_iter()
        .map(|id| {
            let h = Arc::clone(&h);
            thread::spawn(move || h.fetch_person(id).unwrap())
        })
        .collect();
    for w in workers {
        w.join().unwrap();
    }
    let mut times: Vec<Instant> = stub.hits.lock().unwrap().iter().map(|(_, t)| *t).collect();
    times.sort();
    assert_eq!(times.len(), 4);
    for pair in times.windows(2) {
        assert!(
            pair[1] - pair[0] >= Duration::from_millis(75),
            "{:?}",
            pair[1] - pair[0]
        );
    }
}
