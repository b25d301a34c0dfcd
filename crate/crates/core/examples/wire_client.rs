//! Starts the service on a free port and replays the medians
//! `euclideansolver` request over plain TCP.
use std::io::{Read, Write};
use std::net::TcpStream;

use geocompare::frontend::{server, wire::MEDIANS_QUERY};

fn main() -> std::io::Result<()> {
    let srv = server::start("127.0.0.1:0")?;
    let mut s = TcpStream::connect(srv.addr)?;
    write!(s, "GET /euclideansolver?{MEDIANS_QUERY} HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n")?;
    let mut resp = String::new();
    s.read_to_string(&mut resp)?;
    let body = resp.split_once("\r\n\r\n").map_or("", |x| x.1);
    println!("{} -> {body}", resp.lines().next().unwrap_or(""));
    srv.stop();
    Ok(())
}
