//! Renewal inspection and the size-bias Skorohod embedding.
//!
//! The interval of a renewal process that covers a fixed inspection time
//! has the size-biased interarrival law; the wait until the next arrival
//! is a uniform fraction of it. For a mean-zero `X`, mixing biased and
//! unbiased copies of its two halves yields an interval `[-U, V]` whose
//! Brownian exit point has the law of `X`.

use rand::Rng;
use serde::Serialize;

use crate::dist::{
    closed_form_size_bias, same_point, size_bias_discrete, BiasedLaw, DiscreteDist,
    DiscreteSampler, NamedDist,
};
use crate::error::{Error, Result};

/// Inspection times are drawn on `[0, INSPECTION_FRACTION * horizon]`.
pub const INSPECTION_FRACTION: f64 = 0.9;

/// The horizon must be at least this many mean interarrival times.
pub const MIN_HORIZON_MEANS: f64 = 50.0;

/// Law of the gaps between arrivals.
#[derive(Debug, Clone, PartialEq)]
pub enum Interarrival {
    Discrete(DiscreteDist),
    Named(NamedDist),
}

enum Draw {
    Table(DiscreteSampler),
    Named(NamedDist),
    Shifted(f64, NamedDist),
    Linear,
}

impl Draw {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Draw::Table(s) => s.sample(rng),
            Draw::Named(d) => d.sample(rng),
            Draw::Shifted(s, d) => s + d.sample(rng),
            Draw::Linear => rng.random::<f64>().sqrt(),
        }
    }
}

impl Interarrival {
    /// Checks the support is strictly positive.
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Interarrival::Discrete(d) => d.min_support() > 0.0,
            Interarrival::Named(nd) => {
                nd.validate()?;
                nd.is_positive()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "interarrival times must be strictly positive".into(),
            ))
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Interarrival::Discrete(d) => d.mean(),
            Interarrival::Named(nd) => nd.mean(),
        }
    }

    fn plain(&self) -> Draw {
        match self {
            Interarrival::Discrete(d) => Draw::Table(d.sampler()),
            Interarrival::Named(nd) => Draw::Named(*nd),
        }
    }

    fn biased(&self) -> Result<Draw> {
        Ok(match self {
            Interarrival::Discrete(d) => Draw::Table(size_bias_discrete(d)?.sampler()),
            Interarrival::Named(nd) => match closed_form_size_bias(nd) {
                Ok(cf) => match cf.law {
                    BiasedLaw::Named(law) => Draw::Shifted(cf.shift, law),
                    BiasedLaw::LinearDensity => Draw::Linear,
                },
                Err(Error::NoClosedForm(_)) => {
                    Draw::Table(size_bias_discrete(&nd.tabulate()?)?.sampler())
                }
                Err(e) => return Err(e),
            },
        })
    }
}

/// The interval covering an inspection time and the wait from that time to
/// the next arrival.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InspectionSample {
    pub covering_length: f64,
    pub residual_wait: f64,
}

/// `n` independent inspections of a renewal process started at 0. Each
/// draws `T` uniform on `[0, 0.9 horizon]` and runs arrivals past `T`.
pub fn simulate_renewal_inspection<R: Rng + ?Sized>(
    inter: &Interarrival,
    horizon: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<InspectionSample>> {
    inter.validate()?;
    let min = MIN_HORIZON_MEANS * inter.mean();
    if !(horizon >= min) {
        return Err(Error::HorizonTooShort { horizon, min });
    }
    let gap = inter.plain();
    Ok((0..n)
        .map(|_| {
            let t = rng.random::<f64>() * INSPECTION_FRACTION * horizon;
            let mut clock = 0.0;
            loop {
                let x = gap.sample(rng);
                clock += x;
                if clock > t {
                    return InspectionSample {
                        covering_length: x,
                        residual_wait: clock - t,
                    };
                }
            }
        })
        .collect())
}

/// Arrival counts in `[0, window]` for the stationary version: the first
/// arrival comes at `U X*`, later gaps are ordinary.
pub fn stationary_renewal_arrivals<R: Rng + ?Sized>(
    inter: &Interarrival,
    window: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<u64>> {
    inter.validate()?;
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "window {window} must be positive"
        )));
    }
    let gap = inter.plain();
    let first = inter.biased()?;
    Ok((0..n)
        .map(|_| {
            let mut clock = rng.random::<f64>() * first.sample(rng);
            let mut count = 0;
            while clock <= window {
                count += 1;
                clock += gap.sample(rng);
            }
            count
        })
        .collect())
}

/// Wait from time 0 to the first arrival of the stationary process.
pub fn stationary_first_arrival<R: Rng + ?Sized>(
    inter: &Interarrival,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    inter.validate()?;
    let first = inter.biased()?;
    Ok((0..n)
        .map(|_| rng.random::<f64>() * first.sample(rng))
        .collect())
}

/// Joint law of the exit interval `[-U, V]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkorohodCoupling {
    pub p_plus: f64,
    pub p_zero: f64,
    pub p_minus: f64,
    /// `(u, v, probability)`.
    pub uv_atoms: Vec<(f64, f64, f64)>,
}

fn push_product(out: &mut Vec<(f64, f64, f64)>, w: f64, us: &DiscreteDist, vs: &DiscreteDist) {
    for &(u, pu) in us.atoms() {
        for &(v, pv) in vs.atoms() {
            out.push((u, v, w * pu * pv));
        }
    }
}

/// With `A = law(-X | X < 0)` and `B = law(X | X > 0)`, mixes `(A*, B)`
/// with weight `P(X > 0)`, `(0, 0)` with weight `P(X = 0)` and `(A, B*)`
/// with weight `P(X < 0)`, components independent.
pub fn skorohod_coupling(x: &DiscreteDist) -> Result<SkorohodCoupling> {
    if x.len() < 2 {
        return Err(Error::ConstantInput);
    }
    let abs_mean: f64 = x.atoms().iter().map(|&(v, p)| v.abs() * p).sum();
    let mean = x.mean();
    if mean.abs() > 1e-12 * abs_mean.max(1.0) {
        return Err(Error::NonzeroMean(mean));
    }
    let neg: Vec<(f64, f64)> = x
        .atoms()
        .iter()
        .filter(|a| a.0 < 0.0)
        .map(|&(v, p)| (-v, p))
        .collect();
    let pos: Vec<(f64, f64)> = x.atoms().iter().filter(|a| a.0 > 0.0).copied().collect();
    let p_minus: f64 = neg.iter().map(|a| a.1).sum();
    let p_plus: f64 = pos.iter().map(|a| a.1).sum();
    let p_zero = x.mass_at(0.0);
    let a = DiscreteDist::from_unnormalized(neg)?;
    let b = DiscreteDist::from_unnormalized(pos)?;
    let mut atoms = Vec::new();
    push_product(&mut atoms, p_plus, &size_bias_discrete(&a)?, &b);
    push_product(&mut atoms, p_minus, &a, &size_bias_discrete(&b)?);
    if p_zero > 0.0 {
        atoms.push((0.0, 0.0, p_zero));
    }
    atoms.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    let mut merged: Vec<(f64, f64, f64)> = Vec::with_capacity(atoms.len());
    for (u, v, p) in atoms {
        match merged.last_mut() {
            Some(last) if same_point(last.0, u) && same_point(last.1, v) => last.2 += p,
            _ => merged.push((u, v, p)),
        }
    }
    Ok(SkorohodCoupling {
        p_plus,
        p_zero,
        p_minus,
        uv_atoms: merged,
    })
}

/// Exit law of Brownian motion from `[-U, V]`: mass `v/(u+v)` at `-u` and
/// `u/(u+v)` at `v`; the atom `(0, 0)` exits at 0.
pub fn skorohod_exit_pmf(sc: &SkorohodCoupling) -> Result<DiscreteDist> {
    let mut atoms = Vec::with_capacity(2 * sc.uv_atoms.len());
    for &(u, v, p) in &sc.uv_atoms {
        if u + v == 0.0 {
            atoms.push((0.0, p));
        } else {
            atoms.push((-u, p * v / (u + v)));
            atoms.push((v, p * u / (u + v)));
        }
    }
    DiscreteDist::signed(atoms)
}

/// `E T = E[U V]` for the exit time of `[-U, V]`; equals `E X^2`.
pub fn expected_exit_time(sc: &SkorohodCoupling) -> f64 {
    sc.uv_atoms.iter().map(|&(u, v, p)| u * v * p).sum()
}
