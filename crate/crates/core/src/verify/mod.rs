//! Deterministic property suites for the kernel and the extended remainder.
//!
//! Every suite expands a [`GridSpec`] into samples, checks each claim on all
//! of them and returns one [`PropertyReport`] per claim. Identical grids
//! (including the seed) give identical reports.

mod convergence;
mod grid;
mod identities;
mod kernel_shape;
mod monotonicity;
mod report;

use std::fmt;
use std::str::FromStr;

pub use convergence::verify_theorem1;
pub use grid::{GridSpec, Range, Sampling, Symbol};
pub use identities::verify_remark_identities;
pub use kernel_shape::verify_theorem2;
pub use monotonicity::verify_theorem3;
pub use report::{write_csv, ClaimCheck, PropertyReport, Status, SuiteReport, CSV_HEADER};

use crate::error::{Error, Result};

/// Named verification suites, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    /// Convergence dichotomy of the kernel integral.
    Theorem1,
    /// Shape, inequalities and sharpness of the kernel.
    Theorem2,
    /// Derivative midpoint inequality, complete monotonicity, star shape.
    Theorem3,
    /// Equivalent rescaled integral forms.
    Remark,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Theorem3,
        Suite::Remark,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Theorem3 => "theorem3",
            Suite::Remark => "remark",
        }
    }

    pub fn run(self, grid: &GridSpec) -> Result<SuiteReport> {
        match self {
            Suite::Theorem1 => verify_theorem1(grid),
            Suite::Theorem2 => verify_theorem2(grid),
            Suite::Theorem3 => verify_theorem3(grid),
            Suite::Remark => verify_remark_identities(grid),
        }
    }

    /// Base random stream of the suite; claims use `base + index`.
    pub(crate) fn stream(self) -> u64 {
        match self {
            Suite::Theorem1 => 100,
            Suite::Theorem2 => 200,
            Suite::Theorem3 => 300,
            Suite::Remark => 400,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Grid(format!("unknown suite {s:?}")))
    }
}

/// Runs the given suites concurrently; results come back in the order given.
pub fn run_suites(suites: &[Suite], grid: &GridSpec) -> Result<Vec<SuiteReport>> {
    grid.validate()?;
    std::thread::scope(|scope| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&suite| scope.spawn(move || suite.run(grid)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification suite panicked"))
            .collect()
    })
}

/// All claims of several suites, ordered by claim id.
pub fn merged_claims(reports: &[SuiteReport]) -> Vec<PropertyReport> {
    let mut all: Vec<PropertyReport> = reports
        .iter()
        .flat_map(|r| r.claims.iter().cloned())
        .collect();
    all.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("theorem9".parse::<Suite>().is_err());
    }

    #[test]
    fn invalid_grid_is_rejected() {
        let grid = GridSpec::default().with_samples(3);
        assert!(run_suites(&[Suite::Remark], &grid).is_err());
    }
}
