//! ℓp norms on cube coordinates.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PNorm {
    One,
    Two,
    Inf,
    /// Any other `p > 1`.
    P(f64),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid norm {0:?}: expected 1, 2, inf or a number > 1")]
pub struct BadNorm(pub String);

impl PNorm {
    pub fn new(p: f64) -> Result<Self, BadNorm> {
        if p == 1.0 {
            Ok(PNorm::One)
        } else if p == 2.0 {
            Ok(PNorm::Two)
        } else if p.is_infinite() && p > 0.0 {
            Ok(PNorm::Inf)
        } else if p > 1.0 {
            Ok(PNorm::P(p))
        } else {
            Err(BadNorm(p.to_string()))
        }
    }

    pub fn all_exact() -> [PNorm; 3] {
        [PNorm::One, PNorm::Two, PNorm::Inf]
    }

    /// Norm of a difference vector.
    pub fn norm(&self, v: impl IntoIterator<Item = f64>) -> f64 {
        let it = v.into_iter().map(f64::abs);
        match *self {
            PNorm::One => it.sum(),
            PNorm::Two => it.map(|x| x * x).sum::<f64>().sqrt(),
            PNorm::Inf => it.fold(0.0, f64::max),
            PNorm::P(p) => it.map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p),
        }
    }

    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        self.norm(a.iter().zip(b).map(|(x, y)| x - y))
    }

    /// Norm of the concatenation of a vector whose norm is `c` with `v`.
    pub fn combine(&self, c: f64, v: impl IntoIterator<Item = f64>) -> f64 {
        self.norm(std::iter::once(c).chain(v))
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PNorm::One => write!(f, "1"),
            PNorm::Two => write!(f, "2"),
            PNorm::Inf => write!(f, "inf"),
            PNorm::P(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for PNorm {
    type Err = BadNorm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(PNorm::Inf),
            t => t
                .parse::<f64>()
                .map_err(|_| BadNorm(s.to_string()))
                .and_then(PNorm::new),
        }
    }
}
