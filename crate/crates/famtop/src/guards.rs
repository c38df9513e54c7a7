//! Configurable size guards. Every exhaustive loop in the crate checks one of
//! these bounds before it starts, so a bad input fails fast instead of
//! exploding.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Guards {
    /// Maximum number of points in any single space (products included).
    pub max_points: usize,
    /// Maximum number of candidate function tables enumerated.
    pub max_candidates: usize,
    /// Maximum number of sets a generated topology may pass through.
    pub max_family: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_points: 64,
            max_candidates: 1_000_000,
            max_family: 1 << 20,
        }
    }
}

impl Guards {
    /// Apply the FAMTOP_GUARD_SCALE multiplier from the environment, if set.
    pub fn from_env() -> Self {
        let mut g = Guards::default();
        if let Ok(s) = std::env::var("FAMTOP_GUARD_SCALE") {
            if let Ok(scale) = s.trim().parse::<usize>() {
                if scale > 0 {
                    g.max_points = g.max_points.saturating_mul(scale);
                    g.max_candidates = g.max_candidates.saturating_mul(scale);
                    g.max_family = g.max_family.saturating_mul(scale);
                }
            }
        }
        g
    }

    pub fn check(&self, what: &'static str, actual: usize, bound: usize) -> Result<()> {
        if actual > bound {
            Err(Error::SizeGuardExceeded {
                what,
                actual,
                bound,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_points(&self, actual: usize) -> Result<()> {
        self.check("points", actual, self.max_points)
    }

    pub fn check_candidates(&self, actual: usize) -> Result<()> {
        self.check("candidates", actual, self.max_candidates)
    }

    pub fn check_family(&self, actual: usize) -> Result<()> {
        self.check("family size", actual, self.max_family)
    }
}
