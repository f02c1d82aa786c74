//! CSV dump of the embedded coordinates.
//!
//! ```text
//! vertex,scale,sample,value
//! 0,1,0,0
//! 1,1,0,-0.6666666666666666
//! ```
//!
//! `value` is the weighted, centered coordinate `(2/3)^i (F_{2^i,v} − F_{2^i,O})`.
//! Rows are ordered by scale, then vertex, then sample.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::multiscale::L1Point;
use super::scale::ScaleBlock;
use crate::error::{Error, Result};

pub const DUMP_HEADER: &str = "vertex,scale,sample,value";

/// Largest distance between a dumped value and the nearest weighted integer
/// that still decodes cleanly.
const DECODE_TOL: f64 = 1e-9;

pub fn write_dump<W: Write>(p: &L1Point, mut out: W) -> Result<()> {
    writeln!(out, "{DUMP_HEADER}")?;
    for b in p.blocks() {
        let w = b.weight();
        for v in 0..b.n() {
            for k in 0..b.samples() {
                let c = p.coordinate(b.index(), v, k);
                writeln!(out, "{v},{},{k},{}", b.index(), w * f64::from(c))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// A parsed dump: values indexed by scale, vertex and sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingDump {
    pub n: usize,
    pub i_max: u32,
    pub samples: usize,
    values: Vec<f64>,
}

/// A dumped value that is not `(2/3)^i` times an integer, or a dump without a
/// zero row to serve as the base point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateDefect {
    pub vertex: usize,
    pub scale: u32,
    pub sample: usize,
    pub value: f64,
    pub reason: String,
}

impl EmbeddingDump {
    pub fn value(&self, index: u32, v: usize, sample: usize) -> f64 {
        self.values[((index as usize - 1) * self.n + v) * self.samples + sample]
    }

    /// Recovers the integer coordinates. Values off the weighted integer grid
    /// are rounded and reported; the base is the least all-zero vertex.
    pub fn decode(&self) -> (L1Point, Vec<CoordinateDefect>) {
        let mut defects = Vec::new();
        let mut blocks = Vec::with_capacity(self.i_max as usize);
        for i in 1..=self.i_max {
            let w = (2.0f64 / 3.0).powi(i as i32);
            let mut ints = Vec::with_capacity(self.n * self.samples);
            for v in 0..self.n {
                for k in 0..self.samples {
                    let x = self.value(i, v, k);
                    let c = (x / w).round();
                    if (x - w * c).abs() > DECODE_TOL * x.abs().max(1.0)
                        || c.abs() > f64::from(i32::MAX)
                    {
                        defects.push(CoordinateDefect {
                            vertex: v,
                            scale: i,
                            sample: k,
                            value: x,
                            reason: "not a weighted integer".into(),
                        });
                    }
                    ints.push(c.clamp(f64::from(i32::MIN), f64::from(i32::MAX)) as i32);
                }
            }
            blocks.push(
                ScaleBlock::from_values(i, self.samples, ints)
                    .expect("dimensions checked at parse"),
            );
        }
        let base = (0..self.n).find(|&v| blocks.iter().all(|b| b.row(v).iter().all(|&x| x == 0)));
        if base.is_none() {
            defects.push(CoordinateDefect {
                vertex: 0,
                scale: 0,
                sample: 0,
                value: f64::NAN,
                reason: "no vertex has an all-zero row".into(),
            });
        }
        let point = L1Point::new(base.unwrap_or(0), blocks).expect("blocks are consistent");
        (point, defects)
    }
}

pub fn read_dump<R: BufRead>(input: R) -> Result<EmbeddingDump> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != DUMP_HEADER {
        return Err(Error::Parse(format!(
            "expected header {DUMP_HEADER:?}, found {header:?}"
        )));
    }
    let mut rows = Vec::new();
    for (no, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = || Error::Parse(format!("line {}: malformed row {line:?}", no + 2));
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(bad());
        }
        let v: usize = fields[0].parse().map_err(|_| bad())?;
        let i: u32 = fields[1].parse().map_err(|_| bad())?;
        let k: usize = fields[2].parse().map_err(|_| bad())?;
        let x: f64 = fields[3].parse().map_err(|_| bad())?;
        if i == 0 || i > 30 || !x.is_finite() {
            return Err(bad());
        }
        rows.push((v, i, k, x));
    }
    if rows.is_empty() {
        return Err(Error::Parse("embedding dump has no rows".into()));
    }
    let n = rows.iter().map(|r| r.0).max().unwrap() + 1;
    let i_max = rows.iter().map(|r| r.1).max().unwrap();
    let samples = rows.iter().map(|r| r.2).max().unwrap() + 1;
    let expected = n * i_max as usize * samples;
    if rows.len() != expected {
        return Err(Error::Parse(format!(
            "{} rows do not fill {n} vertices × {i_max} scales × {samples} samples",
            rows.len()
        )));
    }
    let mut values = vec![f64::NAN; expected];
    let mut seen = vec![false; expected];
    for (v, i, k, x) in rows {
        let at = ((i as usize - 1) * n + v) * samples + k;
        if std::mem::replace(&mut seen[at], true) {
            return Err(Error::Parse(format!(
                "duplicate row for vertex {v}, scale {i}, sample {k}"
            )));
        }
        values[at] = x;
    }
    Ok(EmbeddingDump {
        n,
        i_max,
        samples,
        values,
    })
}
