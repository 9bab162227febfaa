use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Symbols that verification suites sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    T,
    X,
    Tau,
    Lambda,
    Alpha,
    A,
    B,
    P,
    Q,
}

impl Symbol {
    pub const ALL: [Symbol; 9] = [
        Symbol::T,
        Symbol::X,
        Symbol::Tau,
        Symbol::Lambda,
        Symbol::Alpha,
        Symbol::A,
        Symbol::B,
        Symbol::P,
        Symbol::Q,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Symbol::T => "t",
            Symbol::X => "x",
            Symbol::Tau => "tau",
            Symbol::Lambda => "lambda",
            Symbol::Alpha => "alpha",
            Symbol::A => "a",
            Symbol::B => "b",
            Symbol::P => "p",
            Symbol::Q => "q",
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    #[default]
    Log,
    Linear,
    Random,
}

impl FromStr for Sampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" => Ok(Sampling::Log),
            "linear" => Ok(Sampling::Linear),
            "random" => Ok(Sampling::Random),
            other => Err(Error::Grid(format!("unknown sampling {other:?}"))),
        }
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    fn log_friendly(&self) -> bool {
        self.lo > 0.0 && self.hi / self.lo >= 100.0
    }
}

/// Deterministic sampling plan for the verification suites.
///
/// Deterministic axes (`points` values per range) follow `sampling`; random
/// draws (`samples` per claim) are log-uniform on positive ranges spanning two
/// or more decades and uniform otherwise. All randomness derives from `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub ranges: BTreeMap<Symbol, Range>,
    pub points: usize,
    pub samples: usize,
    /// Parameter pairs per divergence/convergence branch and parameter sets
    /// per kernel-sign cell.
    pub pairs: usize,
    pub seed: u64,
    pub sampling: Sampling,
    /// Fixed α values used by the identity and derivative-inequality sweeps.
    pub alphas: Vec<f64>,
    /// Fixed λ values for the midpoint-derivative inequality.
    pub lambdas: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        let ranges = BTreeMap::from([
            (Symbol::T, Range::new(1e-3, 50.0)),
            (Symbol::X, Range::new(0.05, 50.0)),
            (Symbol::Tau, Range::new(0.01, 0.99)),
            (Symbol::Lambda, Range::new(0.25, 4.0)),
            (Symbol::Alpha, Range::new(0.25, 10.0)),
            (Symbol::A, Range::new(-5.0, 5.0)),
            (Symbol::B, Range::new(-5.0, 5.0)),
            (Symbol::P, Range::new(0.1, 10.0)),
            (Symbol::Q, Range::new(-2.0, 3.0)),
        ]);
        Self {
            ranges,
            points: 30,
            samples: 10_000,
            pairs: 10,
            seed: 42,
            sampling: Sampling::Log,
            alphas: vec![
                0.25,
                0.5,
                1.0,
                2.0,
                std::f64::consts::E,
                std::f64::consts::PI,
                10.0,
            ],
            lambdas: vec![0.25, 0.5, 2.0, 4.0],
        }
    }
}

impl GridSpec {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_range(mut self, symbol: Symbol, lo: f64, hi: f64) -> Self {
        self.ranges.insert(symbol, Range::new(lo, hi));
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [
            ("points", self.points),
            ("samples", self.samples),
            ("pairs", self.pairs),
        ] {
            if n < 8 {
                return Err(Error::Grid(format!("{name} must be at least 8, got {n}")));
            }
        }
        for s in Symbol::ALL {
            let r = self
                .ranges
                .get(&s)
                .ok_or_else(|| Error::Grid(format!("missing range for {s}")))?;
            if !(r.lo.is_finite() && r.hi.is_finite() && r.lo < r.hi) {
                return Err(Error::Grid(format!(
                    "range for {s} must satisfy lo < hi, got [{}, {}]",
                    r.lo, r.hi
                )));
            }
        }
        for s in [
            Symbol::T,
            Symbol::X,
            Symbol::Alpha,
            Symbol::P,
            Symbol::Lambda,
        ] {
            if self.range(s).lo <= 0.0 {
                return Err(Error::Grid(format!("range for {s} must be positive")));
            }
        }
        let tau = self.range(Symbol::Tau);
        if tau.hi >= 1.0 {
            return Err(Error::Grid("tau must stay inside (0, 1)".into()));
        }
        if self.alphas.is_empty() || self.alphas.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::Grid("alphas must be non-empty and positive".into()));
        }
        if self.lambdas.is_empty() || self.lambdas.iter().any(|&l| !(l > 0.0) || l == 1.0) {
            return Err(Error::Grid(
                "lambdas must be positive and different from 1".into(),
            ));
        }
        Ok(())
    }

    pub fn range(&self, symbol: Symbol) -> Range {
        self.ranges[&symbol]
    }

    /// Random source for one suite; independent streams per `stream` id.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// `points` values across the range of `symbol`, in increasing order.
    pub fn axis(&self, symbol: Symbol, stream: u64) -> Vec<f64> {
        let r = self.range(symbol);
        let n = self.points;
        let frac = |i: usize| i as f64 / (n - 1) as f64;
        match self.sampling {
            Sampling::Log if r.lo > 0.0 => {
                let (a, b) = (r.lo.ln(), r.hi.ln());
                (0..n).map(|i| (a + (b - a) * frac(i)).exp()).collect()
            }
            Sampling::Log | Sampling::Linear => {
                (0..n).map(|i| r.lo + (r.hi - r.lo) * frac(i)).collect()
            }
            Sampling::Random => {
                let mut rng = self.rng(stream);
                let mut v: Vec<f64> = (0..n).map(|_| draw_in(r, &mut rng)).collect();
                v.sort_by(f64::total_cmp);
                v
            }
        }
    }

    /// One random value of `symbol`.
    pub fn draw(&self, symbol: Symbol, rng: &mut impl Rng) -> f64 {
        draw_in(self.range(symbol), rng)
    }
}

pub(crate) fn draw_in(r: Range, rng: &mut impl Rng) -> f64 {
    if r.log_friendly() {
        (rng.gen_range(r.lo.ln()..=r.hi.ln())).exp()
    } else {
        rng.gen_range(r.lo..=r.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        GridSpec::default().validate().unwrap();
    }

    #[test]
    fn counts_and_ranges_checked() {
        let g = GridSpec {
            points: 4,
            ..GridSpec::default()
        };
        assert!(g.validate().is_err());
        let g = GridSpec::default().with_range(Symbol::Tau, 0.1, 1.5);
        assert!(g.validate().is_err());
        let g = GridSpec::default().with_range(Symbol::T, 0.0, 1.0);
        assert!(g.validate().is_err());
        let g = GridSpec {
            lambdas: vec![1.0],
            ..GridSpec::default()
        };
        assert!(g.validate().is_err());
    }

    #[test]
    fn axes_are_deterministic() {
        let g = GridSpec::default();
        let x = g.axis(Symbol::X, 0);
        assert_eq!(x.len(), 30);
        assert!((x[0] - 0.05).abs() < 1e-15 && (x[29] - 50.0).abs() < 1e-12);
        let mut r = g.clone();
        r.sampling = Sampling::Random;
        assert_eq!(r.axis(Symbol::A, 3), r.axis(Symbol::A, 3));
        assert_ne!(r.axis(Symbol::A, 3), r.axis(Symbol::A, 4));
        let mut l = g;
        l.sampling = Sampling::Linear;
        let a = l.axis(Symbol::A, 0);
        assert_eq!(a[0], -5.0);
    }

    #[test]
    fn draws_follow_seed() {
        let g = GridSpec::default();
        let v1: Vec<f64> = (0..5)
            .map(|_| 0.0)
            .scan(g.rng(1), |r, _| Some(g.draw(Symbol::T, r)))
            .collect();
        let v2: Vec<f64> = (0..5)
            .map(|_| 0.0)
            .scan(g.rng(1), |r, _| Some(g.draw(Symbol::T, r)))
            .collect();
        assert_eq!(v1, v2);
        assert!(v1.iter().all(|&t| (1e-3..=50.0).contains(&t)));
    }
}
