//! Iteration traces and their line-delimited JSON form.
//!
//! The first line is a header `{"schema":"bid-trace","version":1,"width":x}`;
//! each further line is `{"index":j,"state":"<hex>"}` with `j` counting up
//! from 0 and the state written as the hexadecimal value of its bits.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitstr::BitStr;

pub const TRACE_SCHEMA: &str = "bid-trace";
pub const TRACE_VERSION: u32 = 1;

/// States `Z[0], Z[1], ..., Z[m]` of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationTrace {
    pub width: usize,
    pub states: Vec<BitStr>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceVerdict {
    Ok,
    /// Index of the first state that does not follow.
    Fault(usize),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    schema: String,
    version: u32,
    width: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    index: usize,
    state: String,
}

#[derive(Debug, Error)]
pub enum TraceFormatError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("missing header line")]
    MissingHeader,
    #[error("unsupported trace schema {schema:?} version {version}")]
    Schema { schema: String, version: u32 },
    #[error("line {line}: expected index {expected}, found {found}")]
    Index { line: usize, expected: usize, found: usize },
    #[error("line {line}: bad hexadecimal state {text:?}")]
    Hex { line: usize, text: String },
}

pub fn write_trace(mut out: impl Write, trace: &IterationTrace) -> io::Result<()> {
    let header = Header { schema: TRACE_SCHEMA.to_string(), version: TRACE_VERSION, width: trace.width };
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for (index, s) in trace.states.iter().enumerate() {
        serde_json::to_writer(&mut out, &Record { index, state: s.to_hex() })?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_trace(input: impl BufRead) -> Result<IterationTrace, TraceFormatError> {
    let mut header: Option<Header> = None;
    let mut states = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line_no = n + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let json = |source| TraceFormatError::Json { line: line_no, source };
        if header.is_none() {
            let h: Header = serde_json::from_str(&line).map_err(json)?;
            if h.schema != TRACE_SCHEMA || h.version != TRACE_VERSION {
                return Err(TraceFormatError::Schema { schema: h.schema, version: h.version });
            }
            header = Some(h);
            continue;
        }
        let r: Record = serde_json::from_str(&line).map_err(json)?;
        if r.index != states.len() {
            return Err(TraceFormatError::Index { line: line_no, expected: states.len(), found: r.index });
        }
        let s = BitStr::from_hex(&r.state).ok_or(TraceFormatError::Hex { line: line_no, text: r.state })?;
        states.push(s);
    }
    let header = header.ok_or(TraceFormatError::MissingHeader)?;
    Ok(IterationTrace { width: header.width, states })
}
