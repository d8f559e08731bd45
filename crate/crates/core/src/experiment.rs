//! Monte Carlo normalisation experiments: draw s uniformly random size-n
//! terms, reduce each with fuel r, and histogram the reduction lengths.
//!
//! Sample i always uses RNG stream i (see [`crate::sample`]), so the result
//! is a pure function of the configuration — including the seed — and is
//! independent of how the index space is sharded across workers.
//!
//! Fuel-exhausted samples are a distinct variant internally; the `-1`
//! sentinel appears only in exported CSV/JSON.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::basis::Basis;
use crate::reduce::{normalize, ReductionOutcome};
use crate::sample::{random_term, RandomSource};

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// Sample count s.
    pub samples: u64,
    /// Term size n.
    pub size: u64,
    /// Fuel r: maximum normal-order reduction length per sample.
    pub fuel: u64,
    pub seed: u64,
    /// Worker hint; results never depend on it.
    pub workers: usize,
    pub basis: Basis,
}

/// Reduction-length histogram. Lengths are exact; terms that did not
/// normalise within the fuel are counted separately.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Histogram {
    counts: BTreeMap<u64, u64>,
    fuel_exhausted: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HistogramError {
    #[error("line {0}: expected `reduction_length,count`")]
    BadLine(usize),
    #[error("missing `reduction_length,count` header")]
    MissingHeader,
}

impl Histogram {
    pub fn record(&mut self, length: u64) {
        *self.counts.entry(length).or_insert(0) += 1;
    }

    pub fn record_fuel_exhausted(&mut self) {
        self.fuel_exhausted += 1;
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (&k, &v) in &other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        self.fuel_exhausted += other.fuel_exhausted;
    }

    pub fn count(&self, length: u64) -> u64 {
        self.counts.get(&length).copied().unwrap_or(0)
    }

    pub fn fuel_exhausted(&self) -> u64 {
        self.fuel_exhausted
    }

    pub fn normalized(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn total(&self) -> u64 {
        self.normalized() + self.fuel_exhausted
    }

    /// Mean reduction length over normalising samples only.
    pub fn mean_length(&self) -> f64 {
        let norm = self.normalized();
        if norm == 0 {
            return f64::NAN;
        }
        let sum: u64 = self.counts.iter().map(|(&k, &v)| k * v).sum();
        sum as f64 / norm as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    /// CSV with header `reduction_length,count`, rows ascending, and the
    /// `-1` fuel-exhausted row first when present. Byte-exact format:
    /// import and re-export reproduce the input.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("reduction_length,count\n");
        if self.fuel_exhausted > 0 {
            out.push_str(&format!("-1,{}\n", self.fuel_exhausted));
        }
        for (&k, &v) in &self.counts {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Histogram, HistogramError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "reduction_length,count")) => {}
            _ => return Err(HistogramError::MissingHeader),
        }
        let mut h = Histogram::default();
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once(',').ok_or(HistogramError::BadLine(i + 1))?;
            let count: u64 = v.parse().map_err(|_| HistogramError::BadLine(i + 1))?;
            if k == "-1" {
                h.fuel_exhausted += count;
            } else {
                let len: u64 = k.parse().map_err(|_| HistogramError::BadLine(i + 1))?;
                *h.counts.entry(len).or_insert(0) += count;
            }
        }
        Ok(h)
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub samples: u64,
    pub size: u64,
    pub fuel: u64,
    pub seed: u64,
    pub histogram: Histogram,
    pub normalized: u64,
    pub unnormalized: u64,
    pub fraction_normalized: f64,
    /// Mean reduction length E(X) over normalising samples.
    pub mean_reduction_length: f64,
    pub log2_n: f64,
}

/// Runs the experiment scheme G(s, n, r): s uniform size-n samples, each
/// reduced with fuel r.
pub fn run_experiment(config: &ExperimentConfig) -> ExperimentResult {
    assert!(config.samples >= 1 && config.fuel >= 1);
    let chunk = sample_chunk(config);
    const SHARD: u64 = 64;
    let shards = config.samples.div_ceil(SHARD);
    let histogram = (0..shards)
        .into_par_iter()
        .map(|s| chunk(s * SHARD, ((s + 1) * SHARD).min(config.samples)))
        .reduce(Histogram::default, |mut a, b| {
            a.merge(&b);
            a
        });
    summarize(config, histogram)
}

fn sample_chunk(config: &ExperimentConfig) -> impl Fn(u64, u64) -> Histogram + Sync + '_ {
    move |from, to| {
        let mut h = Histogram::default();
        for i in from..to {
            let src = RandomSource::new(config.seed, i);
            let term = random_term(&config.basis, config.size, &src);
            match normalize(&term, &config.basis, config.fuel) {
                ReductionOutcome::NormalForm { steps, .. } => h.record(steps),
                ReductionOutcome::FuelExhausted { .. } => h.record_fuel_exhausted(),
            }
        }
        h
    }
}

fn summarize(config: &ExperimentConfig, histogram: Histogram) -> ExperimentResult {
    let normalized = histogram.normalized();
    let unnormalized = histogram.fuel_exhausted();
    ExperimentResult {
        samples: config.samples,
        size: config.size,
        fuel: config.fuel,
        seed: config.seed,
        mean_reduction_length: histogram.mean_length(),
        fraction_normalized: normalized as f64 / config.samples as f64,
        log2_n: (config.size.max(1) as f64).log2(),
        histogram,
        normalized,
        unnormalized,
    }
}

#[derive(Serialize)]
struct JsonResult {
    samples: u64,
    size: u64,
    fuel: u64,
    seed: u64,
    normalized: u64,
    unnormalized: u64,
    fraction_normalized: f64,
    mean_reduction_length: f64,
    log2_n: f64,
    /// Reduction length -> count, with -1 for fuel-exhausted.
    histogram: BTreeMap<i64, u64>,
}

impl From<&ExperimentResult> for JsonResult {
    fn from(r: &ExperimentResult) -> JsonResult {
        let mut histogram: BTreeMap<i64, u64> =
            r.histogram.iter().map(|(k, v)| (k as i64, v)).collect();
        if r.histogram.fuel_exhausted() > 0 {
            histogram.insert(-1, r.histogram.fuel_exhausted());
        }
        JsonResult {
            samples: r.samples,
            size: r.size,
            fuel: r.fuel,
            seed: r.seed,
            normalized: r.normalized,
            unnormalized: r.unnormalized,
            fraction_normalized: r.fraction_normalized,
            mean_reduction_length: r.mean_reduction_length,
            log2_n: r.log2_n,
            histogram,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

pub fn export_result(res: &ExperimentResult, format: ExportFormat) -> String {
    match format {
        ExportFormat::Csv => res.histogram.to_csv(),
        ExportFormat::Json => {
            serde_json::to_string_pretty(&JsonResult::from(res)).expect("serializable")
        }
    }
}
