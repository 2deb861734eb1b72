use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::charp::DEFAULT_TERM_CAP;
use crate::error::{Error, Result};
use crate::values::{ExpJson, PExponent};

pub const SUPPORTED_PRIMES: [u32; 3] = [2, 3, 5];
pub const MAX_WITT_LEN: usize = 4;
pub const DEFAULT_MAX_SPECTRAL_N: u64 = 64;
pub const WITT_CACHE_ENV: &str = "PERFECTOID_WITT_CACHE";

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Smallest t-adic precision `N` for which truncating Witt components mod
/// `t^N` is invisible modulo `p^n` after reduction by `[t] − p`:
/// `max_{i<n} p^i (n − i)`.
pub fn min_t_prec(p: u32, n: usize) -> i64 {
    (0..n)
        .map(|i| (p as i64).pow(i as u32) * (n - i) as i64)
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Tsv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GlobalConfig {
    pub p: u32,
    pub witt_len: usize,
    /// Defaults to [`min_t_prec`] when absent.
    pub t_prec: Option<ExpJson>,
    pub max_spectral_n: u64,
    pub term_cap: usize,
    pub witt_cache_dir: Option<PathBuf>,
    pub output_format: OutputFormat,
    /// Allows primes and lengths beyond the default-supported range.
    pub allow_unsupported: bool,
}

impl Default for GlobalConfig {
    fn default() -> Self {
        GlobalConfig {
            p: 2,
            witt_len: 3,
            t_prec: None,
            max_spectral_n: DEFAULT_MAX_SPECTRAL_N,
            term_cap: DEFAULT_TERM_CAP,
            witt_cache_dir: None,
            output_format: OutputFormat::Json,
            allow_unsupported: false,
        }
    }
}

impl GlobalConfig {
    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::Unsupported(format!("p = {} is not prime", self.p)));
        }
        if !self.allow_unsupported && !SUPPORTED_PRIMES.contains(&self.p) {
            return Err(Error::Unsupported(format!(
                "p = {} outside the supported set {{2, 3, 5}}",
                self.p
            )));
        }
        if self.witt_len == 0 || (!self.allow_unsupported && self.witt_len > MAX_WITT_LEN) {
            return Err(Error::Unsupported(format!(
                "Witt length {} outside 1..={MAX_WITT_LEN}",
                self.witt_len
            )));
        }
        if self.max_spectral_n == 0 || self.term_cap == 0 {
            return Err(Error::Unsupported("caps must be positive".into()));
        }
        let need = PExponent::int(self.p, min_t_prec(self.p, self.witt_len));
        let got = self.t_prec();
        if got < need {
            return Err(Error::InsufficientPrecision { need: need.to_string(), got: got.to_string() });
        }
        Ok(())
    }

    pub fn t_prec(&self) -> PExponent {
        match &self.t_prec {
            Some(j) => PExponent::from_json(self.p, j),
            None => PExponent::int(self.p, min_t_prec(self.p, self.witt_len)),
        }
    }

    /// Explicit setting, then the environment variable.
    pub fn cache_dir(&self) -> Option<PathBuf> {
        self.witt_cache_dir
            .clone()
            .or_else(|| std::env::var_os(WITT_CACHE_ENV).map(PathBuf::from))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(5) && is_prime(7));
        assert!(!is_prime(1) && !is_prime(4) && !is_prime(9));
    }

    #[test]
    fn precision_threshold() {
        assert_eq!(min_t_prec(2, 1), 1);
        assert_eq!(min_t_prec(2, 3), 4);
        assert_eq!(min_t_prec(3, 3), 9);
        assert_eq!(min_t_prec(5, 2), 5);
    }

    #[test]
    fn unsupported_prime() {
        let c = GlobalConfig { p: 7, ..Default::default() };
        assert!(matches!(c.validate(), Err(Error::Unsupported(_))));
        let c = GlobalConfig { p: 7, allow_unsupported: true, ..Default::default() };
        assert!(c.validate().is_ok());
    }

    #[test]
    fn low_precision_rejected() {
        let c = GlobalConfig { t_prec: Some(ExpJson { num: 3, kpow: 0 }), ..Default::default() };
        assert!(matches!(c.validate(), Err(Error::InsufficientPrecision { .. })));
    }
}
