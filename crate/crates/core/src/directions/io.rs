//! JSON-lines sequence files: an optional header record, then one record per point
//! with decimal-string coordinates.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::sequence::{DirectionSequence, Provenance};
use crate::error::{Error, Result};
use crate::numerics::{Precision, PrecisionComplex};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub index: usize,
    pub re: String,
    pub im: String,
    pub precision_bits: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceHeader {
    pub kind: String,
    pub provenance: Provenance,
    #[serde(default)]
    pub config: Value,
    pub version: String,
}

impl SequenceHeader {
    pub fn new(provenance: Provenance, config: Value) -> Self {
        SequenceHeader {
            kind: "header".into(),
            provenance,
            config,
            version: crate::VERSION.into(),
        }
    }
}

pub fn write_jsonl<W: Write>(seq: &DirectionSequence, config: &Value, mut out: W) -> Result<()> {
    let header = SequenceHeader::new(seq.provenance().clone(), config.clone());
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for (i, z) in seq.points().iter().enumerate() {
        let (re, im) = z.to_decimal_pair();
        let rec = PointRecord {
            index: i + 1,
            re,
            im,
            precision_bits: z.prec(),
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads points in file order; indices must run `1, 2, …`. The header is optional.
pub fn read_jsonl<R: BufRead>(input: R) -> Result<(DirectionSequence, Option<SequenceHeader>)> {
    let mut header = None;
    let mut points = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line)?;
        if value.get("kind").and_then(Value::as_str) == Some("header") {
            if lineno != 0 {
                return Err(Error::Parse(format!("header record on line {}", lineno + 1)));
            }
            header = Some(serde_json::from_value(value)?);
            continue;
        }
        let rec: PointRecord = serde_json::from_value(value)?;
        if rec.index != points.len() + 1 {
            return Err(Error::Parse(format!(
                "line {}: expected index {}, found {}",
                lineno + 1,
                points.len() + 1,
                rec.index
            )));
        }
        let prec = Precision::new(rec.precision_bits)?;
        points.push(PrecisionComplex::parse(&rec.re, &rec.im, prec)?);
    }
    let provenance = header
        .as_ref()
        .map_or_else(|| Provenance::new("file", Value::Null), |h: &SequenceHeader| h.provenance.clone());
    Ok((DirectionSequence::new(points, provenance)?, header))
}
