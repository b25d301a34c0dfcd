//! HTTP service: `GET /euclideansolver` and `POST /compare`.

use std::io;
use std::net::SocketAddr;
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use tiny_http::{Header, Method, Request, Response, Server};

use super::wire::{SolverQuery, SolverReply};
use super::{compare_source, CompareConfig, Mode};

/// A response before it hits the socket.
#[derive(Clone, Debug, PartialEq)]
pub struct Reply {
    pub status: u16,
    pub content_type: &'static str,
    pub body: String,
}

impl Reply {
    fn text(status: u16, body: impl Into<String>) -> Reply {
        Reply {
            status,
            content_type: "text/plain; charset=utf-8",
            body: body.into(),
        }
    }
}

fn compare_config(query: &str) -> Result<CompareConfig, String> {
    let mut cfg = CompareConfig::default();
    for kv in query.split('&').filter(|s| !s.is_empty()) {
        let (k, v) = kv.split_once('=').unwrap_or((kv, ""));
        match k {
            "timeout" => {
                let t: f64 = v.parse().map_err(|_| format!("bad timeout {v:?}"))?;
                if !(t > 0.0 && t.is_finite()) {
                    return Err(format!("bad timeout {v:?}"));
                }
                cfg.timeout = Duration::from_secs_f64(t);
            }
            "mode" => {
                cfg.mode = match v {
                    "auto" => Mode::Auto,
                    "eq" => Mode::Eq,
                    "bounds" => Mode::Bounds,
                    _ => return Err(format!("bad mode {v:?}")),
                }
            }
            "transcript" => cfg.transcript = v != "0" && v != "false",
            _ => {}
        }
    }
    Ok(cfg)
}

/// Routes one request.
pub fn handle(method: &str, url: &str, body: &str) -> Reply {
    let (path, query) = url.split_once('?').unwrap_or((url, ""));
    match (method, path) {
        ("GET", "/euclideansolver") => match SolverQuery::from_query(query) {
            Err(e) => Reply::text(400, e.to_string()),
            Ok(q) => match q.solve() {
                SolverReply::Answer(s) => Reply::text(200, s),
                SolverReply::Timeout => Reply::text(408, "timeout"),
            },
        },
        ("POST", "/compare") => {
            let cfg = match compare_config(query) {
                Ok(c) => c,
                Err(e) => return Reply::text(400, e),
            };
            match compare_source(body, &cfg) {
                Ok(r) => Reply {
                    status: 200,
                    content_type: "application/json",
                    body: r.to_json(),
                },
                Err(e) => Reply::text(400, e.to_string()),
            }
        }
        (_, "/euclideansolver" | "/compare") => Reply::text(405, "method not allowed"),
        _ => Reply::text(404, "not found"),
    }
}

fn respond(mut req: Request) {
    let mut body = String::new();
    let reply = if req.as_reader().read_to_string(&mut body).is_err() {
        Reply::text(400, "body is not utf-8")
    } else {
        let method = match req.method() {
            Method::Get => "GET",
            Method::Post => "POST",
            _ => "OTHER",
        };
        handle(method, req.url(), &body)
    };
    let header = Header::from_bytes("Content-Type", reply.content_type).expect("static header");
    let resp = Response::from_string(reply.body)
        .with_status_code(reply.status)
        .with_header(header);
    let _ = req.respond(resp);
}

/// A running service.
pub struct Running {
    pub addr: SocketAddr,
    server: Arc<Server>,
    accept: Option<thread::JoinHandle<()>>,
}

impl Running {
    pub fn stop(mut self) {
        self.server.unblock();
        if let Some(h) = self.accept.take() {
            let _ = h.join();
        }
    }

    /// Blocks until the accept loop ends.
    pub fn wait(mut self) {
        if let Some(h) = self.accept.take() {
            let _ = h.join();
        }
    }
}

/// Binds and serves in the background, one thread per request.
pub fn start(addr: &str) -> io::Result<Running> {
    let server = Server::http(addr).map_err(io::Error::other)?;
    let addr = server
        .server_addr()
        .to_ip()
        .ok_or_else(|| io::Error::other("not an ip listener"))?;
    let server = Arc::new(server);
    let s = Arc::clone(&server);
    let accept = thread::spawn(move || {
        for req in s.incoming_requests() {
            thread::spawn(move || respond(req));
        }
    });
    Ok(Running {
        addr,
        server,
        accept: Some(accept),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn routes() {
        assert_eq!(handle("GET", "/nope", "").status, 404);
        assert_eq!(handle("POST", "/euclideansolver", "").status, 405);
        let r = handle("GET", "/euclideansolver?lhs=x&rhs=x&polys=x^^2&vars=x", "");
        assert_eq!(r.status, 400);
        assert!(r.body.contains("offset"), "{}", r.body);
        let r = handle("GET", "/euclideansolver?lhs=x&rhs=x&polys=x-1&vars=x", "");
        assert_eq!((r.status, r.body.as_str()), (200, "m = 1"));
        assert_eq!(handle("POST", "/compare", "point A;;").status, 400);
        assert_eq!(handle("POST", "/compare?mode=weird", "").status, 400);
    }

    #[test]
    fn compare_document() {
        let r = handle("POST", "/compare?timeout=5", crate::corpus::PYTHAGORAS.source);
        assert_eq!(r.status, 200);
        let v: serde_json::Value = serde_json::from_str(&r.body).unwrap();
        assert_eq!(v["variant"], "exact-ratio");
        assert_eq!(v["result"], "m = 1");
        assert_eq!(v["candidates"][0]["value"], "1");
    }
}
