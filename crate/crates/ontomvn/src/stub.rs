//! In-process HTTP server for exercising repository clients in tests: a
//! path→document map served over GET/PUT, with an optional Basic-auth gate,
//! a request counter and a forced-failure switch.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicU16, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::Duration;

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;

struct State {
    documents: Mutex<HashMap<String, Vec<u8>>>,
    hits: AtomicU64,
    forced_status: AtomicU16,
    /// Expected `Authorization` header value, when auth is required.
    authorization: Option<String>,
    shutdown: AtomicBool,
}

pub struct StubRepository {
    address: String,
    state: Arc<State>,
    handle: Option<JoinHandle<()>>,
}

impl StubRepository {
    /// Starts a server on an ephemeral loopback port.
    pub fn serve() -> StubRepository {
        StubRepository::start(None)
    }

    /// Starts a server that rejects requests lacking matching Basic
    /// credentials with 401.
    pub fn serve_with_auth(user: &str, password: &str) -> StubRepository {
        let token = BASE64.encode(format!("{user}:{password}"));
        StubRepository::start(Some(format!("Basic {token}")))
    }

    fn start(authorization: Option<String>) -> StubRepository {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind stub listener");
        let address = listener.local_addr().expect("stub address").to_string();
        let state = Arc::new(State {
            documents: Mutex::new(HashMap::new()),
            hits: AtomicU64::new(0),
            forced_status: AtomicU16::new(0),
            authorization,
            shutdown: AtomicBool::new(false),
        });
        let loop_state = Arc::clone(&state);
        let handle = std::thread::spawn(move || accept_loop(listener, loop_state));
        StubRepository {
            address,
            state,
            handle: Some(handle),
        }
    }

    /// Base URL without a trailing slash.
    pub fn url(&self) -> String {
        format!("http://{}", self.address)
    }

    /// Preloads (or replaces) a document at a repository-relative path.
    pub fn put_document(&self, path: &str, bytes: &[u8]) {
        self.state
            .documents
            .lock()
            .unwrap()
            .insert(path.trim_start_matches('/').to_string(), bytes.to_vec());
    }

    pub fn document(&self, path: &str) -> Option<Vec<u8>> {
        self.state
            .documents
            .lock()
            .unwrap()
            .get(path.trim_start_matches('/'))
            .cloned()
    }

    /// Requests served so far, regardless of method or status.
    pub fn hits(&self) -> u64 {
        self.state.hits.load(Ordering::SeqCst)
    }

    /// Makes every subsequent request answer with this status and no body.
    pub fn fail_with(&self, status: u16) {
        self.state.forced_status.store(status, Ordering::SeqCst);
    }

    /// Clears a forced failure.
    pub fn heal(&self) {
        self.state.forced_status.store(0, Ordering::SeqCst);
    }
}

impl Drop for StubRepository {
    fn drop(&mut self) {
        self.state.shutdown.store(true, Ordering::SeqCst);
        // Unblock the accept loop.
        let _ = TcpStream::connect(&self.address);
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}

fn accept_loop(listener: TcpListener, state: Arc<State>) {
    for stream in listener.incoming() {
        if state.shutdown.load(Ordering::SeqCst) {
            break;
        }
        let Ok(stream) = stream else { continue };
        let _ = handle_connection(stream, &state);
    }
}

fn handle_connection(mut stream: TcpStream, state: &State) -> std::io::Result<()> {
    stream.set_read_timeout(Some(Duration::from_secs(5)))?;
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    if reader.read_line(&mut request_line)? == 0 {
        return Ok(()); // wake-up connection from Drop
    }
    let mut parts = request_line.split_whitespace();
    let method = parts.next().unwrap_or("").to_string();
    let raw_path = parts.next().unwrap_or("").to_string();
    if method.is_empty() || raw_path.is_empty() {
        return Ok(());
    }

    let mut content_length = 0usize;
    let mut chunked = false;
    let mut authorization: Option<String> = None;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some((name, value)) = line.split_once(':') {
            let value = value.trim();
            match name.trim().to_ascii_lowercase().as_str() {
                "content-length" => content_length = value.parse().unwrap_or(0),
                "transfer-encoding" => chunked = value.eq_ignore_ascii_case("chunked"),
                "authorization" => authorization = Some(value.to_string()),
                _ => {}
            }
        }
    }

    // Drain the body before responding so the client never sees a broken pipe
    // mid-upload.
    let body = if chunked {
        read_chunked(&mut reader)?
    } else {
        let mut body = vec![0u8; content_length];
        reader.read_exact(&mut body)?;
        body
    };

    state.hits.fetch_add(1, Ordering::SeqCst);

    let forced = state.forced_status.load(Ordering::SeqCst);
    if forced != 0 {
        return respond(&mut stream, forced, "Forced Failure", &[], &[]);
    }
    if let Some(expected) = &state.authorization {
        if authorization.as_deref() != Some(expected.as_str()) {
            return respond(
                &mut stream,
                401,
                "Unauthorized",
                &[],
                &["WWW-Authenticate: Basic realm=\"stub\""],
            );
        }
    }

    let path = raw_path
        .trim_start_matches('/')
        .split('?')
        .next()
        .unwrap_or("")
        .to_string();
    match method.as_str() {
        "GET" => {
            let document = state.documents.lock().unwrap().get(&path).cloned();
            match document {
                Some(bytes) => respond(&mut stream, 200, "OK", &bytes, &[]),
                None => respond(&mut stream, 404, "Not Found", &[], &[]),
            }
        }
        "PUT" => {
            state.documents.lock().unwrap().insert(path, body);
            respond(&mut stream, 201, "Created", &[], &[])
        }
        _ => respond(&mut stream, 405, "Method Not Allowed", &[], &[]),
    }
}

fn read_chunked(reader: &mut impl BufRead) -> std::io::Result<Vec<u8>> {
    let mut body = Vec::new();
    loop {
        let mut size_line = String::new();
        if reader.read_line(&mut size_line)? == 0 {
            break;
        }
        let size = usize::from_str_radix(size_line.trim(), 16).unwrap_or(0);
        if size == 0 {
            let mut trailer = String::new();
            let _ = reader.read_line(&mut trailer);
            break;
        }
        let mut chunk = vec![0u8; size];
        reader.read_exact(&mut chunk)?;
        body.extend_from_slice(&chunk);
        let mut crlf = [0u8; 2];
        let _ = reader.read_exact(&mut crlf);
    }
    Ok(body)
}

fn respond(
    stream: &mut TcpStream,
    status: u16,
    reason: &str,
    body: &[u8],
    extra_headers: &[&str],
) -> std::io::Result<()> {
    write!(stream, "HTTP/1.1 {status} {reason}\r\n")?;
    for header in extra_headers {
        write!(stream, "{header}\r\n")?;
    }
    write!(
        stream,
        "Content-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    )?;
    stream.write_all(body)?;
    stream.flush()
}
