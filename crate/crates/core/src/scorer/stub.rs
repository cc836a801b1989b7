//! In-process stub of the remote scoring wire contract.
//!
//! A minimal HTTP/1.1 server backed by `std::net`, intended for testing
//! adapters and the client against the documented contract: scripted
//! status codes, `Retry-After`, artificial latency, and concurrency
//! accounting (current and maximum simultaneous requests).

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

/// One scripted reply.
pub struct StubReply {
    pub status: u16,
    pub retry_after: Option<u64>,
    pub body: String,
    /// Sleep before replying; makes overlapping requests observable.
    pub delay: Option<Duration>,
}

impl StubReply {
    pub fn ok(body: impl Into<String>) -> Self {
        StubReply {
            status: 200,
            retry_after: None,
            body: body.into(),
            delay: None,
        }
    }

    pub fn status(status: u16) -> Self {
        StubReply {
            status,
            retry_after: None,
            body: String::new(),
            delay: None,
        }
    }
}

/// Concurrency and volume counters.
#[derive(Default)]
pub struct StubState {
    pub requests: AtomicUsize,
    pub in_flight: AtomicUsize,
    pub max_in_flight: AtomicUsize,
}

/// A running stub server; shuts down on drop.
pub struct StubServer {
    addr: SocketAddr,
    state: Arc<StubState>,
    stop: Arc<AtomicBool>,
    handle: Option<std::thread::JoinHandle<()>>,
}

type Responder = dyn Fn(usize, &str) -> StubReply + Send + Sync;

impl StubServer {
    /// Starts the server; `responder` receives the 0-based request index
    /// and the raw request body.
    pub fn start(responder: impl Fn(usize, &str) -> StubReply + Send + Sync + 'static) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind stub server");
        let addr = listener.local_addr().expect("stub server address");
        let state = Arc::new(StubState::default());
        let stop = Arc::new(AtomicBool::new(false));
        let responder: Arc<Responder> = Arc::new(responder);

        let thread_state = Arc::clone(&state);
        let thread_stop = Arc::clone(&stop);
        let handle = std::thread::spawn(move || {
            for stream in listener.incoming() {
                if thread_stop.load(Ordering::SeqCst) {
                    break;
                }
                let Ok(stream) = stream else { continue };
                let state = Arc::clone(&thread_state);
                let responder = Arc::clone(&responder);
                std::thread::spawn(move || handle_connection(stream, &state, &responder));
            }
        });

        StubServer {
            addr,
            state,
            stop,
            handle: Some(handle),
        }
    }

    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }

    pub fn state(&self) -> &StubState {
        &self.state
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // Unblock the accept loop.
        let _ = TcpStream::connect(self.addr);
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}

fn handle_connection(mut stream: TcpStream, state: &StubState, responder: &Arc<Responder>) {
    let index = state.requests.fetch_add(1, Ordering::SeqCst);
    let current = state.in_flight.fetch_add(1, Ordering::SeqCst) + 1;
    state.max_in_flight.fetch_max(current, Ordering::SeqCst);

    let body = read_request_body(&mut stream).unwrap_or_default();
    let reply = responder(index, &body);
    if let Some(delay) = reply.delay {
        std::thread::sleep(delay);
    }

    let reason = match reply.status {
        200 => "OK",
        429 => "Too Many Requests",
        500 => "Internal Server Error",
        503 => "Service Unavailable",
        _ => "Status",
    };
    let mut response = format!("HTTP/1.1 {} {reason}\r\n", reply.status);
    if let Some(wait) = reply.retry_after {
        response.push_str(&format!("Retry-After: {wait}\r\n"));
    }
    response.push_str(&format!(
        "Content-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        reply.body.len()
    ));
    response.push_str(&reply.body);
    let _ = stream.write_all(response.as_bytes());
    let _ = stream.flush();

    state.in_flight.fetch_sub(1, Ordering::SeqCst);
}

fn read_request_body(stream: &mut TcpStream) -> Option<String> {
    let mut reader = BufReader::new(stream);
    let mut content_length = 0usize;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line).ok()? == 0 {
            return None;
        }
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some(value) = line
            .to_ascii_lowercase()
            .strip_prefix("content-length:")
            .map(str::trim)
        {
            content_length = value.parse().ok()?;
        }
    }
    let mut body = vec![0u8; content_length];
    reader.read_exact(&mut body).ok()?;
    String::from_utf8(body).ok()
}
