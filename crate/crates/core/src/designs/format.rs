//! Plain-text design files.
//!
//! ```text
//! # comment lines start with '#'
//! m n
//! p p p      <- one line per block, 0-based point indices
//! ```

use std::fmt::Write;

use super::Design;
use crate::error::{Error, Result};

const HEADER: &str = "# design file: first line 'm n', then one block per line; points are 0-based";

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

fn numbers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("'{tok}' is not a non-negative integer"),
            })
        })
        .collect()
}

pub fn load_design(text: &str) -> Result<Design> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let Some((hline, header)) = lines.next() else {
        return parse_err(1, "missing 'm n' header");
    };
    let (m, n) = match numbers(hline, header)?.as_slice() {
        &[m, n] => (m, n),
        _ => return parse_err(hline, "header must be two integers 'm n'"),
    };

    let mut blocks = Vec::with_capacity(n);
    let mut last = hline;
    for (line_no, line) in lines {
        last = line_no;
        if blocks.len() == n {
            return parse_err(line_no, format!("more than the declared {n} blocks"));
        }
        let block = numbers(line_no, line)?;
        if let Some(p) = block.iter().find(|&&p| p >= m) {
            return parse_err(line_no, format!("point {p} out of range 0..{m}"));
        }
        let mut sorted = block.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return parse_err(line_no, "repeated point in block");
        }
        blocks.push(block);
    }
    if blocks.len() != n {
        return parse_err(last, format!("expected {n} blocks, found {}", blocks.len()));
    }
    Design::new(m, blocks).map_err(|e| Error::Parse {
        line: last,
        message: e.to_string(),
    })
}

pub fn save_design(design: &Design) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "{} {}", design.m(), design.n()).unwrap();
    for b in design.blocks() {
        let line: Vec<String> = b.iter().map(|p| p.to_string()).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}
