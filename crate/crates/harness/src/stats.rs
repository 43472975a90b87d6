//! Trend statistics over metrics records.

use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::statistics::{Data, OrderStatistics, RankTieBreaker, Statistics};

/// Spearman rank correlation of a sample of `n` pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spearman {
    pub rho: f64,
    pub n: usize,
}

impl Spearman {
    /// `t = rho * sqrt((n - 2) / (1 - rho^2))` with `n - 2` degrees of freedom.
    fn t(&self) -> f64 {
        let denom = 1.0 - self.rho * self.rho;
        if denom <= 0.0 {
            return f64::INFINITY.copysign(self.rho);
        }
        self.rho * ((self.n as f64 - 2.0) / denom).sqrt()
    }

    fn dist(&self) -> StudentsT {
        StudentsT::new(0.0, 1.0, self.n as f64 - 2.0).expect("n >= 3")
    }

    /// One-sided p-value against "no positive association".
    pub fn p_increasing(&self) -> f64 {
        self.dist().sf(self.t())
    }

    /// One-sided p-value against "no negative association".
    pub fn p_decreasing(&self) -> f64 {
        self.dist().cdf(self.t())
    }
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    Data::new(xs.to_vec()).ranks(RankTieBreaker::Average)
}

/// `None` with fewer than three pairs or when either side is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<Spearman> {
    assert_eq!(x.len(), y.len(), "paired samples");
    let n = x.len();
    if n < 3 {
        return None;
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let (sx, sy) = (rx.iter().std_dev(), ry.iter().std_dev());
    if sx == 0.0 || sy == 0.0 {
        return None;
    }
    let rho = rx.iter().covariance(ry.iter()) / (sx * sy);
    Some(Spearman {
        rho: rho.clamp(-1.0, 1.0),
        n,
    })
}

/// Least-squares slope of `ln y` against `ln x`. `None` unless all values
/// are positive and `x` takes at least two distinct values.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "paired samples");
    if x.iter().chain(y).any(|&v| v.is_nan() || v <= 0.0) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let var = lx.iter().variance();
    if var.is_nan() || var <= 0.0 {
        return None;
    }
    Some(lx.iter().covariance(ly.iter()) / var)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().mean()
}

pub fn median(xs: &[f64]) -> f64 {
    Data::new(xs.to_vec()).median()
}
