//! Poisson approximation and concentration from size-bias couplings.

use rand::Rng;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::dist::{binomial_pmf, same_point, DiscreteDist};
use crate::error::{Error, Result};
use crate::stats::mean_se;

/// Poisson tail sums stop once a term drops below this fraction of the sum.
pub const TAIL_CUTOFF: f64 = 1e-18;

/// Slack allowed when asserting an exact quantity sits below its bound.
const ORDER_SLACK: f64 = 1e-15;

/// Total variation, `(1/2) sum |p - q|` over the union of supports.
pub fn tv_distance(p: &DiscreteDist, q: &DiscreteDist) -> f64 {
    let (a, b) = (p.atoms(), q.atoms());
    let (mut i, mut j, mut s) = (0, 0, 0.0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(x, px)), Some(&(y, qy))) if same_point(x, y) => {
                s += (px - qy).abs();
                i += 1;
                j += 1;
            }
            (Some(&(x, px)), Some(&(y, _))) if x < y => {
                s += px;
                i += 1;
            }
            (Some(&(_, px)), None) => {
                s += px;
                i += 1;
            }
            (_, Some(&(_, qy))) => {
                s += qy;
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    0.5 * s
}

/// `E|X* - (X + 1)|` under a named coupling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingGap {
    pub gap: f64,
    pub coupling_tag: String,
}

impl CouplingGap {
    pub fn new(gap: f64, coupling_tag: impl Into<String>) -> Result<Self> {
        if !(gap >= 0.0 && gap.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coupling gap {gap} must be finite and >= 0"
            )));
        }
        Ok(Self {
            gap,
            coupling_tag: coupling_tag.into(),
        })
    }

    /// Monte Carlo estimate from `n` draws of `(X, X*)`; returns the gap and
    /// its standard error.
    pub fn estimate<R, F>(
        coupling_tag: &str,
        n: usize,
        rng: &mut R,
        mut draw: F,
    ) -> Result<(Self, f64)>
    where
        R: Rng + ?Sized,
        F: FnMut(&mut R) -> (f64, f64),
    {
        if n < 2 {
            return Err(Error::InvalidParameter("need at least 2 draws".into()));
        }
        let diffs: Vec<f64> = (0..n)
            .map(|_| {
                let (x, xs) = draw(rng);
                (xs - x - 1.0).abs()
            })
            .collect();
        let (m, se) = mean_se(&diffs);
        Ok((Self::new(m, coupling_tag)?, se))
    }
}

/// `(1 - e^-lambda) gap`, a bound on the distance from Poisson(lambda).
pub fn stein_poisson_bound(lambda: f64, gap: &CouplingGap) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda {lambda} must be positive"
        )));
    }
    Ok(-(-lambda).exp_m1() * gap.gap)
}

fn poisson_ln_pmf(a: f64, k: u64) -> f64 {
    k as f64 * a.ln() - a - ln_gamma(k as f64 + 1.0)
}

/// `P(Poisson(a) >= x)`, summed upward.
pub fn poisson_upper_tail(a: f64, x: f64) -> f64 {
    let start = x.max(0.0).ceil() as u64;
    let mut sum = 0.0;
    for k in start.. {
        let t = poisson_ln_pmf(a, k).exp();
        sum += t;
        if k as f64 > a && t < TAIL_CUTOFF * sum {
            break;
        }
    }
    sum
}

/// `P(Poisson(a) <= x)`.
pub fn poisson_lower_tail(a: f64, x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    (0..=x.floor() as u64)
        .map(|k| poisson_ln_pmf(a, k).exp())
        .sum()
}

/// Bound and exact distance between Binomial(n, p) and Poisson(np). The
/// shared-summand coupling gives `X* - (X + 1) = -X_1`, so the gap is `p`.
pub fn binomial_poisson_check(n: u32, p: f64) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p = {p} not in (0, 1)")));
    }
    let lambda = n as f64 * p;
    let bound = stein_poisson_bound(lambda, &CouplingGap::new(p, "shared summands")?)?;
    let body: f64 = binomial_pmf(n, p)
        .iter()
        .map(|&(k, b)| (b - poisson_ln_pmf(lambda, k as u64).exp()).abs())
        .sum();
    let exact = 0.5 * (body + poisson_upper_tail(lambda, n as f64 + 1.0));
    if exact > bound + ORDER_SLACK {
        return Err(Error::QuadratureFailure(format!(
            "exact distance {exact} exceeds bound {bound}"
        )));
    }
    Ok((bound, exact))
}

/// Mean `a`, coupling constant `c` with `X* <= X + c`, evaluation point `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcentrationParams {
    pub a: f64,
    pub c: f64,
    pub x: f64,
}

impl ConcentrationParams {
    pub fn new(a: f64, c: f64, x: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("c", c), ("x", x)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must be positive"
                )));
            }
        }
        Ok(Self { a, c, x })
    }

    /// `(a/x)^(x/c) e^((x-a)/c)`.
    fn tight(&self) -> f64 {
        let Self { a, c, x } = *self;
        ((x * (a / x).ln() + x - a) / c).exp()
    }
}

fn ordered(tight: f64, gaussian: f64) -> Result<(f64, f64)> {
    if tight > gaussian + ORDER_SLACK {
        return Err(Error::QuadratureFailure(format!(
            "tight {tight} exceeds gaussian {gaussian}"
        )));
    }
    Ok((tight, gaussian))
}

/// Bounds on `P(X >= x)` for `x >= a`: `(tight, gaussian)`.
pub fn concentration_upper(cp: &ConcentrationParams) -> Result<(f64, f64)> {
    let ConcentrationParams { a, c, x } = *cp;
    if x < a {
        return Err(Error::DomainError(format!(
            "upper bound needs x >= a, got x = {x}, a = {a}"
        )));
    }
    ordered(cp.tight(), (-(x - a).powi(2) / (c * (a + x))).exp())
}

/// Bounds on `P(X <= x)` for `0 < x <= a`: `(tight, gaussian)`.
pub fn concentration_lower(cp: &ConcentrationParams) -> Result<(f64, f64)> {
    let ConcentrationParams { a, c, x } = *cp;
    if x > a {
        return Err(Error::DomainError(format!(
            "lower bound needs x <= a, got x = {x}, a = {a}"
        )));
    }
    ordered(cp.tight(), (-(a - x).powi(2) / (2.0 * c * a)).exp())
}

/// `prod a / (x - k c)` over the steps `G(y) <= (a/y) G(y - c)` taken while
/// `y > a`, with the last `G` bounded by 1.
pub fn tail_iteration(cp: &ConcentrationParams) -> Result<f64> {
    let ConcentrationParams { a, c, x } = *cp;
    if x <= a {
        return Err(Error::DomainError(format!(
            "iteration needs x > a, got x = {x}, a = {a}"
        )));
    }
    let mut y = x;
    let mut bound = 1.0;
    while y > a {
        bound *= a / y;
        y -= c;
    }
    Ok(bound)
}
