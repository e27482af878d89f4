//! Rebuild thresholds, overridable through `DYNSA_EPOCH_POLICY`.
//!
//! The variable holds comma-separated `key=value` pairs:
//!
//! - `isa_k` fixes the word length of the inverted suffix array engine,
//! - `sa_k` fixes the word length of the suffix array engine,
//! - `flush` sets how many stored stairs updates per text symbol trigger a
//!   flush into the interval store (default 4).

use thiserror::Error;

pub const ENV_VAR: &str = "DYNSA_EPOCH_POLICY";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolicyError {
    #[error("malformed entry `{0}` (expected key=value)")]
    Malformed(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("value for `{key}` must be a positive integer, got `{value}`")]
    BadValue { key: String, value: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpochPolicy {
    pub isa_k: Option<usize>,
    pub sa_k: Option<usize>,
    pub flush_factor: usize,
}

impl Default for EpochPolicy {
    fn default() -> Self {
        EpochPolicy { isa_k: None, sa_k: None, flush_factor: 4 }
    }
}

impl EpochPolicy {
    pub fn parse(raw: &str) -> Result<Self, PolicyError> {
        let mut p = EpochPolicy::default();
        for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| PolicyError::Malformed(item.to_string()))?;
            let (key, value) = (key.trim(), value.trim());
            let v: usize = value
                .parse()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| PolicyError::BadValue { key: key.to_string(), value: value.to_string() })?;
            match key {
                "isa_k" => p.isa_k = Some(v),
                "sa_k" => p.sa_k = Some(v),
                "flush" => p.flush_factor = v,
                _ => return Err(PolicyError::UnknownKey(key.to_string())),
            }
        }
        Ok(p)
    }

    /// Reads the environment; unset means defaults.
    pub fn from_env() -> Result<Self, PolicyError> {
        match std::env::var(ENV_VAR) {
            Ok(s) => Self::parse(&s),
            Err(_) => Ok(Self::default()),
        }
    }

    /// Word length for the inverted suffix array engine, `⌈√n⌉` by default.
    pub fn isa_k(&self, n: usize) -> usize {
        self.isa_k.unwrap_or_else(|| ceil_root(n, 2)).max(1)
    }

    /// Word length for the suffix array engine, `⌈n^(2/3)⌉` by default.
    pub fn sa_k(&self, n: usize) -> usize {
        self.sa_k.unwrap_or_else(|| ceil_root(n * n, 3)).max(1)
    }
}

/// Smallest `r` with `r^e >= x`.
fn ceil_root(x: usize, e: u32) -> usize {
    let mut r = (x as f64).powf(1.0 / e as f64) as usize;
    while r > 0 && (r - 1).checked_pow(e).is_some_and(|v| v >= x) {
        r -= 1;
    }
    while r.checked_pow(e).is_some_and(|v| v < x) {
        r += 1;
    }
    r
}
