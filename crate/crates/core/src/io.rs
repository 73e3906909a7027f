//! Plain-text graph files.
//!
//! ```text
//! # optional comments
//! sg 4
//! 0 1 +
//! 1 2 -
//! ```

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::{Sign, SignedGraph};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses a graph file. Blank lines and lines starting with `#` are skipped;
/// the first remaining line must be the `sg <n>` header.
pub fn parse_graph(text: &str) -> Result<SignedGraph> {
    let mut n = None;
    let mut edges = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(order) = n else {
            match fields.as_slice() {
                ["sg", count] => {
                    let count = count.parse::<usize>().map_err(|_| parse_err(line_no, format!("bad order {count:?}")))?;
                    n = Some(count);
                    continue;
                }
                _ => return Err(parse_err(line_no, "expected header `sg <n>`")),
            }
        };
        let [u, v, s] = fields.as_slice() else {
            return Err(parse_err(line_no, "expected `u v +` or `u v -`"));
        };
        let vertex = |t: &str| -> Result<usize> {
            let x = t.parse::<usize>().map_err(|_| parse_err(line_no, format!("bad vertex {t:?}")))?;
            if x >= order {
                return Err(parse_err(line_no, format!("vertex {x} out of range for order {order}")));
            }
            Ok(x)
        };
        let sign = match *s {
            "+" | "+1" => Sign::Positive,
            "-" | "-1" => Sign::Negative,
            other => return Err(parse_err(line_no, format!("bad sign {other:?}"))),
        };
        edges.push((vertex(u)?, vertex(v)?, sign, line_no));
    }
    let n = n.ok_or_else(|| parse_err(last.max(1), "missing header `sg <n>`"))?;
    let lines: Vec<usize> = edges.iter().map(|e| e.3).collect();
    SignedGraph::new(n, edges.iter().map(|&(u, v, s, _)| (u, v, s))).map_err(|e| {
        let at = match e {
            Error::LoopEdge(u) => edges.iter().position(|x| x.0 == u && x.1 == u),
            Error::DuplicateEdge(a, b) => edges
                .iter()
                .enumerate()
                .filter(|(_, x)| (x.0, x.1) == (a, b) || (x.1, x.0) == (a, b))
                .nth(1)
                .map(|(i, _)| i),
            _ => None,
        };
        parse_err(at.map_or(last.max(1), |i| lines[i]), e.to_string())
    })
}

/// Canonical text: header, then one edge per line in stored order.
pub fn write_graph(g: &SignedGraph) -> String {
    let mut out = format!("sg {}\n", g.n());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.sign.as_char());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = parse_graph("# a path\nsg 3\n\n1 2 -\n0 1 +\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.negative_count(), 1);
        let text = write_graph(&g);
        assert_eq!(parse_graph(&text).unwrap(), g);
        assert_eq!(write_graph(&parse_graph(&text).unwrap()), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let line = |t: &str| match parse_graph(t) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("0 1 +\n"), 1);
        assert_eq!(line("sg 2\n0 1 x\n"), 2);
        assert_eq!(line("sg 2\n0 5 +\n"), 2);
        assert_eq!(line("sg 3\n0 1 +\n1 2 +\n1 0 -\n"), 4);
        assert_eq!(line("sg 3\n1 1 +\n"), 2);
        assert_eq!(line("# nothing\n"), 1);
        assert!(parse_graph("sg 0\n").unwrap().n() == 0);
    }
}
