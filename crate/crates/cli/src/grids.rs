//! Sweep-grid parsing and the bounded worker pool used by sweep commands.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// A `start:end:count` sweep grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.end, self.count)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid must look like start:end:count, got '{s}'"));
        }
        let start: f64 = parts[0].parse().map_err(|_| format!("bad grid start '{}'", parts[0]))?;
        let end: f64 = parts[1].parse().map_err(|_| format!("bad grid end '{}'", parts[1]))?;
        let count: usize = parts[2].parse().map_err(|_| format!("bad grid count '{}'", parts[2]))?;
        if !start.is_finite() || !end.is_finite() {
            return Err(format!("grid endpoints must be finite, got '{s}'"));
        }
        if count == 0 {
            return Err("grid count must be at least 1".into());
        }
        Ok(GridSpec { start, end, count })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.count)
    }
}

impl Serialize for GridSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `count` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    (0..count)
        .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Map `f` over `inputs` on at most `workers` threads; results come back in
/// input order no matter which thread finishes first, and the first error in
/// input order wins.
pub fn pool_map<I, O, E, F>(workers: usize, inputs: &[I], f: F) -> Result<Vec<O>, E>
where
    I: Sync,
    O: Send,
    E: Send,
    F: Fn(&I) -> Result<O, E> + Sync,
{
    if workers <= 1 || inputs.len() <= 1 {
        return inputs.iter().map(&f).collect();
    }
    let mut slots: Vec<Option<Result<O, E>>> = inputs.iter().map(|_| None).collect();
    let chunk = inputs.len().div_ceil(workers.min(inputs.len()));
    let f = &f;
    std::thread::scope(|scope| {
        for (out_chunk, in_chunk) in slots.chunks_mut(chunk).zip(inputs.chunks(chunk)) {
            scope.spawn(move || {
                for (slot, item) in out_chunk.iter_mut().zip(in_chunk) {
                    *slot = Some(f(item));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("pool slot filled")).collect()
}
