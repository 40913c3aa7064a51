use std::cell::{Cell, RefCell};
use std::collections::{HashMap, VecDeque};
use std::rc::Rc;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

impl HttpResponse {
    pub fn new(status: u16, body: impl Into<String>) -> Self {
        Self { status, body: body.into() }
    }
}

/// Connection-level failure: DNS, TLS, reset, timeout.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct TransportError(pub String);

pub trait Transport {
    fn get(&mut self, url: &str, user_agent: &str) -> Result<HttpResponse, TransportError>;
}

pub trait Clock {
    /// Time since an arbitrary fixed origin.
    fn now(&self) -> Duration;
    fn sleep(&mut self, duration: Duration);
}

pub struct SystemClock {
    origin: Instant,
}

impl Default for SystemClock {
    fn default() -> Self {
        Self { origin: Instant::now() }
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }

    fn sleep(&mut self, duration: Duration) {
        std::thread::sleep(duration);
    }
}

/// Simulated clock: `sleep` advances time instantly. Clones share one time.
#[derive(Debug, Clone, Default)]
pub struct SimClock {
    now: Rc<Cell<Duration>>,
}

impl SimClock {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Clock for SimClock {
    fn now(&self) -> Duration {
        self.now.get()
    }

    fn sleep(&mut self, duration: Duration) {
        self.now.set(self.now.get() + duration);
    }
}

pub struct UreqTransport {
    agent: ureq::Agent,
}

impl UreqTransport {
    pub fn new(timeout: Duration) -> Self {
        Self { agent: ureq::AgentBuilder::new().timeout(timeout).build() }
    }
}

impl Transport for UreqTransport {
    fn get(&mut self, url: &str, user_agent: &str) -> Result<HttpResponse, TransportError> {
        let result = self.agent.get(url).set("User-Agent", user_agent).call();
        let response = match result {
            Ok(r) => r,
            Err(ureq::Error::Status(_, r)) => r,
            Err(e) => return Err(TransportError(e.to_string())),
        };
        let status = response.status();
        let body = response.into_string().map_err(|e| TransportError(e.to_string()))?;
        Ok(HttpResponse { status, body })
    }
}

type Script = VecDeque<Result<HttpResponse, TransportError>>;

/// Replays scripted responses per URL and records every request with its
/// time on the shared clock. An unscripted URL answers 404; once a script
/// runs dry its last response repeats.
#[derive(Debug, Clone)]
pub struct MockTransport {
    clock: SimClock,
    scripts: Rc<RefCell<HashMap<String, Script>>>,
    log: Rc<RefCell<Vec<(String, Duration)>>>,
}

impl MockTransport {
    pub fn new(clock: SimClock) -> Self {
        Self { clock, scripts: Rc::default(), log: Rc::default() }
    }

    pub fn push(&self, url: &str, response: Result<HttpResponse, TransportError>) {
        self.scripts.borrow_mut().entry(url.to_string()).or_default().push_back(response);
    }

    pub fn respond(&self, url: &str, status: u16, body: &str) {
        self.push(url, Ok(HttpResponse::new(status, body)));
    }

    pub fn requests(&self) -> Vec<(String, Duration)> {
        self.log.borrow().clone()
    }
}

impl Transport for MockTransport {
    fn get(&mut self, url: &str, _user_agent: &str) -> Result<HttpResponse, TransportError> {
        self.log.borrow_mut().push((url.to_string(), self.clock.now()));
        let mut scripts = self.scripts.borrow_mut();
        match scripts.get_mut(url) {
            Some(queue) if queue.len() > 1 => queue.pop_front().unwrap(),
            Some(queue) if queue.len() == 1 => queue[0].clone(),
            _ => Ok(HttpResponse::new(404, "")),
        }
    }
}
