//! Resource budgets for table constructions and brute-force scans.
//!
//! Budgets are configuration, not hard-coded constants: every operation that
//! can blow up combinatorially takes a [`Budget`] and refuses (with
//! [`BudgetExceeded`]) instead of thrashing. Exceeding a budget is a resource
//! verdict, never a mathematical one.

use std::fmt;

use thiserror::Error;

/// Limits applied by constructions and searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest carrier (element count) a construction may materialize.
    pub max_carrier: usize,
    /// Largest number of candidates a brute-force scan may visit.
    pub max_scan: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_carrier: 4096,
            max_scan: 1_000_000,
        }
    }
}

impl Budget {
    /// Reads overrides from the `QLAB_BUDGET` environment variable.
    ///
    /// Accepts either a single integer (scan budget) or comma-separated
    /// `carrier=N` / `scan=N` pairs. Unparseable input is ignored in favor
    /// of the defaults.
    pub fn from_env() -> Self {
        let mut budget = Budget::default();
        let Ok(raw) = std::env::var("QLAB_BUDGET") else {
            return budget;
        };
        if let Ok(n) = raw.trim().parse::<u64>() {
            budget.max_scan = n;
            return budget;
        }
        for part in raw.split(',') {
            let Some((key, value)) = part.split_once('=') else {
                continue;
            };
            match (key.trim(), value.trim().parse::<u64>()) {
                ("carrier", Ok(n)) => budget.max_carrier = n as usize,
                ("scan", Ok(n)) => budget.max_scan = n,
                _ => {}
            }
        }
        budget
    }

    /// Checks a carrier size against the budget.
    pub fn admit_carrier(&self, size: usize, what: &str) -> Result<(), BudgetExceeded> {
        if size > self.max_carrier {
            Err(BudgetExceeded {
                what: what.to_string(),
                needed: size as u64,
                allowed: self.max_carrier as u64,
            })
        } else {
            Ok(())
        }
    }

    /// Checks a scan size against the budget.
    pub fn admit_scan(&self, size: u64, what: &str) -> Result<(), BudgetExceeded> {
        if size > self.max_scan {
            Err(BudgetExceeded {
                what: what.to_string(),
                needed: size,
                allowed: self.max_scan,
            })
        } else {
            Ok(())
        }
    }
}

/// A construction or scan was refused because it exceeds the configured budget.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct BudgetExceeded {
    pub what: String,
    pub needed: u64,
    pub allowed: u64,
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "budget exceeded: {} needs {} but only {} is allowed",
            self.what, self.needed, self.allowed
        )
    }
}

/// Checked integer power; `None` on overflow.
pub fn checked_pow(base: usize, exp: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u64)?;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_budget_admits_small_rejects_huge() {
        let b = Budget::default();
        assert!(b.admit_carrier(16, "x").is_ok());
        assert!(b.admit_carrier(5000, "x").is_err());
        assert!(b.admit_scan(10, "x").is_ok());
        assert!(b.admit_scan(2_000_000, "x").is_err());
    }

    #[test]
    fn checked_pow_matches_and_overflows() {
        assert_eq!(checked_pow(2, 10), Some(1024));
        assert_eq!(checked_pow(10, 30), None);
    }
}
