use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::coloring::{Algorithm, Coloring, ColoringOutcome};
use crate::error::{Error, Result};

/// JSON summary written next to a coloring dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoringSummary {
    pub algorithm: Algorithm,
    pub num_colors: usize,
    pub local_number: usize,
    pub runtime_ms: f64,
}

impl ColoringSummary {
    pub fn new(outcome: &ColoringOutcome, runtime_ms: f64) -> Self {
        ColoringSummary {
            algorithm: outcome.algorithm,
            num_colors: outcome.num_colors(),
            local_number: outcome.local_number,
            runtime_ms,
        }
    }
}

/// One `<vertex-id> <color-id>` line per vertex.
pub fn write_coloring_dump<W: Write>(coloring: &Coloring, mut out: W) -> Result<()> {
    for (v, c) in coloring.colors().iter().enumerate() {
        writeln!(out, "{v} {c}")?;
    }
    Ok(())
}

/// Reads a dump back. Every vertex id in `0..N` must appear exactly once, in any order.
pub fn parse_coloring_dump(text: &str) -> Result<Coloring> {
    const FMT: &str = "coloring dump";
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let mut fields = line.split_whitespace();
        let Some(first) = fields.next() else { continue };
        let second = fields
            .next()
            .ok_or_else(|| Error::malformed(FMT, format!("line {}: missing color", lineno + 1)))?;
        if fields.next().is_some() {
            return Err(Error::malformed(
                FMT,
                format!("line {}: trailing fields", lineno + 1),
            ));
        }
        let parse = |s: &str| {
            s.parse::<u32>()
                .map_err(|e| Error::malformed(FMT, format!("line {}: {e}", lineno + 1)))
        };
        pairs.push((parse(first)?, parse(second)?));
    }
    let mut colors = vec![None; pairs.len()];
    for (v, c) in pairs {
        let slot = colors
            .get_mut(v as usize)
            .ok_or_else(|| Error::malformed(FMT, format!("vertex {v} out of range")))?;
        if slot.replace(c).is_some() {
            return Err(Error::malformed(FMT, format!("vertex {v} listed twice")));
        }
    }
    let colors = colors
        .into_iter()
        .collect::<Option<Vec<u32>>>()
        .ok_or_else(|| Error::malformed(FMT, "missing vertex"))?;
    Ok(Coloring::new(colors))
}
