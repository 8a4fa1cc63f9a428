//! Resource limits, overridable through `CYCLODIFF_LIMITS`.
//!
//! The variable holds comma-separated `key=value` pairs, for example
//! `pairs=500000,bits=8192,timeout=3600,cyclotomic=100000`.

use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};

pub const LIMITS_ENV: &str = "CYCLODIFF_LIMITS";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest field order accepted by field construction.
    pub field_bound: u64,
    /// Largest root-of-unity order for reduced cyclotomic arithmetic and Gauss checks.
    pub cyclotomic_bound: u64,
    /// Largest `m` for system generation.
    pub system_bound: u64,
    /// Largest `q` a scan may request.
    pub scan_bound: u64,
    pub max_pairs: u64,
    pub max_coeff_bits: u64,
    #[serde(with = "secs")]
    pub timeout: Duration,
}

mod secs {
    use std::time::Duration;

    use serde::Serializer;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_secs())
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            field_bound: 1 << 20,
            cyclotomic_bound: 1000,
            system_bound: 40,
            scan_bound: 1 << 20,
            max_pairs: 200_000,
            max_coeff_bits: 4096,
            timeout: Duration::from_secs(30 * 60),
        }
    }
}

impl Limits {
    /// Defaults with the environment overrides applied.
    pub fn from_env() -> Result<Self> {
        match std::env::var(LIMITS_ENV) {
            Ok(spec) => Limits::default().with_overrides(&spec),
            Err(_) => Ok(Limits::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("limit `{item}` is not key=value")))?;
            let v: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("limit `{item}` has a non-integer value")))?;
            if v == 0 {
                return Err(Error::Parse(format!("limit `{key}` must be positive")));
            }
            match key.trim() {
                "field" => self.field_bound = v,
                "cyclotomic" => self.cyclotomic_bound = v,
                "system" => self.system_bound = v,
                "scan" => self.scan_bound = v,
                "pairs" => self.max_pairs = v,
                "bits" => self.max_coeff_bits = v,
                "timeout" => self.timeout = Duration::from_secs(v),
                other => return Err(Error::Parse(format!("unknown limit `{other}`"))),
            }
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let l = Limits::default()
            .with_overrides("pairs=10, timeout=5,cyclotomic=2000")
            .unwrap();
        assert_eq!(l.max_pairs, 10);
        assert_eq!(l.timeout, Duration::from_secs(5));
        assert_eq!(l.cyclotomic_bound, 2000);
        assert!(Limits::default().with_overrides("bogus=1").is_err());
        assert!(Limits::default().with_overrides("pairs").is_err());
        assert!(Limits::default().with_overrides("pairs=0").is_err());
    }
}
