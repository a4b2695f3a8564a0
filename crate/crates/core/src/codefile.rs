//! Plain-text code files.
//!
//! ```text
//! # comment
//! n=9 r=1
//! 0
//! 1
//! 8   # inline comments are fine
//! ```
//!
//! The header gives the length and, optionally, the radius the code was built
//! for (advisory only). Each following line is one codeword as a decimal
//! integer whose binary expansion, padded to `n` bits, is the vector.

use std::fmt::Write as _;

use crate::code::Code;
use crate::error::{Error, Result};
use crate::space::{check_dim, mask};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub code: Code,
    pub radius: Option<u32>,
}

fn parse_header(body: &str, line: usize) -> Result<(u32, Option<u32>)> {
    let err = |msg: String| Error::Parse { line, msg };
    let mut dim = None;
    let mut radius = None;
    for field in body.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value in header, found {field:?}")))?;
        let value: u32 = value
            .parse()
            .map_err(|_| err(format!("bad header value {value:?}")))?;
        match key {
            "n" => dim = Some(value),
            "r" => radius = Some(value),
            _ => return Err(err(format!("unknown header key {key:?}"))),
        }
    }
    let dim = dim.ok_or_else(|| err("header must give n=<length>".into()))?;
    check_dim(dim).map_err(|e| err(e.to_string()))?;
    Ok((dim, radius))
}

pub fn parse(text: &str) -> Result<CodeFile> {
    let mut header: Option<(u32, Option<u32>)> = None;
    let mut words = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((dim, _)) = header else {
            header = Some(parse_header(body, line)?);
            continue;
        };
        let word: u64 = body.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("not a codeword: {body:?}"),
        })?;
        if word > mask(dim) as u64 {
            return Err(Error::Parse {
                line,
                msg: format!("{word} does not fit in {dim} bits"),
            });
        }
        words.push((line, word as u32));
    }
    let Some((dim, radius)) = header else {
        return Err(Error::Parse {
            line: last_line.max(1),
            msg: "missing header n=<length>".into(),
        });
    };
    if words.is_empty() {
        return Err(Error::Parse {
            line: last_line.max(1),
            msg: "no codewords".into(),
        });
    }
    let mut seen = std::collections::HashSet::new();
    for &(line, w) in &words {
        if !seen.insert(w) {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate codeword {w}"),
            });
        }
    }
    let code = Code::new(dim, words.into_iter().map(|(_, w)| w))?;
    Ok(CodeFile { code, radius })
}

/// Canonical text: header, then codewords in increasing order.
pub fn render(code: &Code, radius: Option<u32>) -> String {
    let mut out = String::new();
    match radius {
        Some(r) => writeln!(out, "n={} r={}", code.dim(), r),
        None => writeln!(out, "n={}", code.dim()),
    }
    .unwrap();
    for &w in code.words() {
        writeln!(out, "{w}").unwrap();
    }
    out
}
