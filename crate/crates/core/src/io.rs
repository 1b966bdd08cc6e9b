//! Design text format v1.
//!
//! ```text
//! # almost-steiner design v1
//! n k t
//! <k ascending vertex ids per line, colex-sorted, LF endings>
//! ```
//!
//! `#`-prefixed lines after the header are comments.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::hypergraph::{Design, VertexSet};

pub const HEADER: &str = "# almost-steiner design v1";

/// Writes the design with its `t` parameter; edges come out colex-sorted
/// because [`Design`] stores them in colex order.
pub fn write_design<W: Write>(w: &mut W, d: &Design, t: u32) -> Result<()> {
    writeln!(w, "{HEADER}")?;
    writeln!(w, "{} {} {}", d.n(), d.k(), t)?;
    for e in d.edges() {
        let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn design_to_string(d: &Design, t: u32) -> String {
    let mut buf = Vec::new();
    write_design(&mut buf, d, t).expect("writing to Vec cannot fail");
    String::from_utf8(buf).expect("design text is ASCII")
}

/// Parses a v1 design file, returning the design and its `t` parameter.
pub fn read_design<R: BufRead>(r: R) -> Result<(Design, u32)> {
    let mut lines = r.lines().enumerate();

    let (_, first) = lines
        .next()
        .ok_or_else(|| malformed(1, "empty file"))?;
    let first = first.map_err(|e| malformed(1, &e.to_string()))?;
    if first.trim_end() != HEADER {
        return Err(malformed(1, &format!("expected header `{HEADER}`")));
    }

    let (_, second) = lines
        .next()
        .ok_or_else(|| malformed(2, "missing parameter line"))?;
    let second = second.map_err(|e| malformed(2, &e.to_string()))?;
    let params: Vec<&str> = second.split_whitespace().collect();
    if params.len() != 3 {
        return Err(malformed(2, "expected `n k t`"));
    }
    let n: u32 = params[0].parse().map_err(|_| malformed(2, "bad n"))?;
    let k: u32 = params[1].parse().map_err(|_| malformed(2, "bad k"))?;
    let t: u32 = params[2].parse().map_err(|_| malformed(2, "bad t"))?;
    if !(n > k && k > t && t >= 2) {
        return Err(malformed(2, &format!("need n > k > t >= 2, got n={n} k={k} t={t}")));
    }

    let mut d = Design::new(n, k).map_err(|e| malformed(2, &e.to_string()))?;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| malformed(lineno, &e.to_string()))?;
        let trimmed = line.trim_end();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut ids = Vec::with_capacity(k as usize);
        for tok in trimmed.split_whitespace() {
            let v: u32 = tok
                .parse()
                .map_err(|_| malformed(lineno, &format!("bad vertex id `{tok}`")))?;
            ids.push(v);
        }
        if ids.len() != k as usize {
            return Err(malformed(lineno, &format!("expected {k} vertex ids, got {}", ids.len())));
        }
        let e = VertexSet::new(ids, n).map_err(|e| malformed(lineno, &e.to_string()))?;
        d.insert(e).map_err(|e| malformed(lineno, &e.to_string()))?;
    }
    Ok((d, t))
}

fn malformed(line: usize, msg: &str) -> Error {
    Error::Malformed { line, msg: msg.to_string() }
}
