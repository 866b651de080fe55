//! Seeded point-set generators.

use std::collections::HashSet;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    Uniform,
    Clustered,
    GridJitter,
}

impl FromStr for Distribution {
    type Err = SampleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Distribution::Uniform),
            "clustered" => Ok(Distribution::Clustered),
            "grid_jitter" | "grid-jitter" => Ok(Distribution::GridJitter),
            other => Err(SampleError::UnknownDistribution(other.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SampleError {
    #[error("need at least 3 points, got {0}")]
    BadCount(usize),
    #[error("unknown distribution {0:?}")]
    UnknownDistribution(String),
}

/// `n` distinct points in the unit square (clusters may spill slightly),
/// deterministic in `(n, dist, seed)`. Colliding draws are redrawn.
pub fn generate(n: usize, dist: Distribution, seed: u64) -> Result<Vec<Point>, SampleError> {
    if n < 3 {
        return Err(SampleError::BadCount(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);

    let centers: Vec<(f64, f64)> = match dist {
        Distribution::Clustered => {
            let k = ((n as f64).sqrt() / 2.0).ceil().max(1.0) as usize;
            (0..k)
                .map(|_| (rng.gen::<f64>(), rng.gen::<f64>()))
                .collect()
        }
        _ => Vec::new(),
    };
    let side = (n as f64).sqrt().ceil() as usize;

    let mut slot = 0usize;
    while out.len() < n {
        let (x, y) = match dist {
            Distribution::Uniform => (rng.gen::<f64>(), rng.gen::<f64>()),
            Distribution::Clustered => {
                let (cx, cy) = centers[rng.gen_range(0..centers.len())];
                // Box-Muller for a gaussian offset.
                let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
                let u2: f64 = rng.gen();
                let r = (-2.0 * u1.ln()).sqrt() * 0.03;
                let a = 2.0 * std::f64::consts::PI * u2;
                (cx + r * a.cos(), cy + r * a.sin())
            }
            Distribution::GridJitter => {
                let i = slot % (side * side);
                slot += 1;
                let cell = 1.0 / side as f64;
                let (gx, gy) = ((i % side) as f64, (i / side) as f64);
                (
                    (gx + 0.5 + rng.gen_range(-0.3..0.3)) * cell,
                    (gy + 0.5 + rng.gen_range(-0.3..0.3)) * cell,
                )
            }
        };
        if seen.insert((x.to_bits(), y.to_bits())) {
            out.push(Point::new(x, y, out.len()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_uniform() {
        let pts = generate(3, Distribution::Uniform, 1).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| p.x.is_finite() && p.y.is_finite()));
        assert!(!pts[0].same_coords(&pts[1]));
    }

    #[test]
    fn deterministic() {
        for d in [
            Distribution::Uniform,
            Distribution::Clustered,
            Distribution::GridJitter,
        ] {
            assert_eq!(generate(50, d, 3).unwrap(), generate(50, d, 3).unwrap());
        }
        assert_ne!(
            generate(50, Distribution::Uniform, 3).unwrap(),
            generate(50, Distribution::Uniform, 4).unwrap()
        );
    }

    #[test]
    fn clustered_is_duplicate_free() {
        let pts = generate(1000, Distribution::Clustered, 9).unwrap();
        let set: HashSet<_> = pts.iter().map(|p| (p.x.to_bits(), p.y.to_bits())).collect();
        assert_eq!(set.len(), 1000);
    }

    #[test]
    fn bad_count() {
        assert_eq!(
            generate(2, Distribution::Uniform, 0),
            Err(SampleError::BadCount(2))
        );
        assert!("gaussian".parse::<Distribution>().is_err());
    }
}
