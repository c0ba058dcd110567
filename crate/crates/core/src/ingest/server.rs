use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;

use serde_json::json;

use super::archive::{ArchiveQuery, ArchiveSource, LocalArchive};
use super::fixture::encode_record;

/// Minimal HTTP server exposing a [`LocalArchive`] through the archive's
/// search endpoint, for offline integration runs.
///
/// Only `GET /reddit/search/submission/` is served; anything else is a 404.
/// The server stops when dropped.
pub struct FixtureServer {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    requests: Arc<AtomicUsize>,
    handle: Option<JoinHandle<()>>,
}

impl FixtureServer {
    pub fn start(archive: LocalArchive) -> std::io::Result<Self> {
        Self::start_with_failures(archive, 0)
    }

    /// Like [`start`](Self::start) but answers the first `failures` requests
    /// with `503 Service Unavailable`.
    pub fn start_with_failures(archive: LocalArchive, failures: usize) -> std::io::Result<Self> {
        let listener = TcpListener::bind("127.0.0.1:0")?;
        let addr = listener.local_addr()?;
        let stop = Arc::new(AtomicBool::new(false));
        let requests = Arc::new(AtomicUsize::new(0));
        let handle = {
            let stop = Arc::clone(&stop);
            let requests = Arc::clone(&requests);
            std::thread::spawn(move || {
                for stream in listener.incoming() {
                    if stop.load(Ordering::SeqCst) {
                        break;
                    }
                    let Ok(stream) = stream else { continue };
                    let n = requests.fetch_add(1, Ordering::SeqCst);
                    if let Err(e) = serve(stream, &archive, n < failures) {
                        log::debug!("fixture server: {e}");
                    }
                }
            })
        };
        Ok(FixtureServer {
            addr,
            stop,
            requests,
            handle: Some(handle),
        })
    }

    pub fn base_url(&self) -> String {
        format!("http://{}", self.addr)
    }

    /// Number of requests received so far.
    pub fn requests(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }
}

impl Drop for FixtureServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // unblock accept()
        let _ = TcpStream::connect(self.addr);
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

fn serve(stream: TcpStream, archive: &LocalArchive, fail: bool) -> std::io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    loop {
        let mut header = String::new();
        if reader.read_line(&mut header)? == 0 || header.trim().is_empty() {
            break;
        }
    }
    let mut parts = request_line.split_whitespace();
    let method = parts.next().unwrap_or_default();
    let target = parts.next().unwrap_or_default();

    let (status, body) = if fail {
        (
            "503 Service Unavailable",
            r#"{"error":"unavailable"}"#.to_string(),
        )
    } else if method != "GET" {
        ("405 Method Not Allowed", String::new())
    } else {
        match url::Url::parse(&format!("http://fixture{target}")) {
            Ok(url) if url.path().trim_end_matches('/') == "/reddit/search/submission" => {
                match parse_query(&url) {
                    Some(query) => {
                        let posts = archive.search(&query).unwrap_or_default();
                        let data: Vec<_> = posts.iter().map(encode_record).collect();
                        ("200 OK", json!({ "data": data }).to_string())
                    }
                    None => ("400 Bad Request", r#"{"error":"bad query"}"#.to_string()),
                }
            }
            _ => ("404 Not Found", String::new()),
        }
    };
    let mut stream = stream;
    write!(
        stream,
        "HTTP/1.1 {status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )?;
    stream.flush()
}

fn parse_query(url: &url::Url) -> Option<ArchiveQuery> {
    let mut query = ArchiveQuery {
        q: String::new(),
        subreddit: String::new(),
        after: i64::MIN,
        before: i64::MAX,
        size: super::PAGE_SIZE,
    };
    for (k, v) in url.query_pairs() {
        match k.as_ref() {
            "q" => query.q = v.into_owned(),
            "subreddit" => query.subreddit = v.into_owned(),
            "after" => query.after = v.parse().ok()?,
            "before" => query.before = v.parse().ok()?,
            "size" => query.size = v.parse::<usize>().ok()?.min(super::PAGE_SIZE),
            _ => {}
        }
    }
    Some(query)
}
