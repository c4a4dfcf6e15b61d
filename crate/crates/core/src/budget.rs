//! Explicit computation budgets. Exhausting any of them yields
//! [`Error::Budget`](crate::Error::Budget); nothing is silently truncated.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BUDGET_ENV: &str = "CHARP_KILL_BUDGET_MS";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// S-pairs processed per Gröbner computation.
    pub pair_cap: usize,
    /// Terms allowed in any intermediate polynomial.
    pub support_cap: usize,
    /// Extra denominator exponent tried beyond the natural level when
    /// solving for boundaries.
    pub exp_cap: u32,
    /// Highest Koszul level examined while waiting for stabilization.
    pub koszul_cap: u32,
    /// Longest Frobenius orbit / largest `s` searched for a relation.
    pub orbit_cap: u32,
    /// Width of the vanishing bands required around a scanned window.
    pub guard: u32,
    /// Extra total degree allowed for cofactors in membership searches.
    pub degree_cap: u32,
    #[serde(skip)]
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            pair_cap: 20_000,
            support_cap: 200_000,
            exp_cap: 3,
            koszul_cap: 8,
            orbit_cap: 4,
            guard: 3,
            degree_cap: 4,
            deadline: None,
        }
    }
}

impl Budget {
    /// Default budgets plus the soft wall-clock limit from `CHARP_KILL_BUDGET_MS`, if set.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(ms) = std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse::<u64>().ok()) {
            b = b.with_time_limit(Duration::from_millis(ms));
        }
        b
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.deadline = Some(Instant::now() + limit);
        self
    }

    pub fn check_time(&self, what: &str) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => {
                Err(Error::Budget(format!("soft time budget exhausted during {what}")))
            }
            _ => Ok(()),
        }
    }
}
