//! Size bias of sums, products and mixtures of independent laws.
//!
//! For `S = X_1 + ... + X_n` with means `a_i` and `a = sum a_i`, biasing a
//! single term chosen with probability `a_i / a` gives `S*`. Products bias
//! every factor. Mixtures reweight components by their means.

use rand::Rng;

use crate::dist::{size_bias_discrete, DiscreteDist, DiscreteSampler};
use crate::error::{Error, Result};

/// Largest support a convolution may produce.
pub const CONVOLUTION_CAP: usize = 1_000_000;

/// Default number of ternary digits in Cantor draws.
pub const CANTOR_DEPTH: u32 = 40;

/// Independent nonnegative terms, each with positive mean.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependentSum {
    terms: Vec<DiscreteDist>,
}

impl IndependentSum {
    pub fn new(terms: Vec<DiscreteDist>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter(
                "a sum needs at least one term".into(),
            ));
        }
        for (i, t) in terms.iter().enumerate() {
            if !t.is_nonnegative() {
                return Err(Error::NegativeSupport);
            }
            if !(t.mean() > 0.0) {
                return Err(Error::ZeroMeanTerm(i));
            }
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[DiscreteDist] {
        &self.terms
    }

    /// Law of the sum itself.
    pub fn law(&self) -> Result<DiscreteDist> {
        convolve_all(&self.terms)
    }
}

/// Law of the index of the biased term: `P(I = i) = a_i / a`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexDist {
    pub probs: Vec<f64>,
}

pub fn index_distribution(s: &IndependentSum) -> Result<IndexDist> {
    index_from_means(s.terms.iter().map(DiscreteDist::mean))
}

fn index_from_means(means: impl Iterator<Item = f64>) -> Result<IndexDist> {
    let means: Vec<f64> = means.collect();
    if let Some(i) = means.iter().position(|&m| !(m > 0.0)) {
        return Err(Error::ZeroMeanTerm(i));
    }
    let total: f64 = means.iter().sum();
    Ok(IndexDist {
        probs: means.iter().map(|m| m / total).collect(),
    })
}

fn combine(
    p: &DiscreteDist,
    q: &DiscreteDist,
    op: impl Fn(f64, f64) -> f64,
) -> Result<DiscreteDist> {
    let pairs = p.len().saturating_mul(q.len());
    if pairs > 16 * CONVOLUTION_CAP {
        return Err(Error::SupportOverflow {
            size: pairs,
            cap: CONVOLUTION_CAP,
        });
    }
    let mut atoms = Vec::with_capacity(pairs);
    for &(x, px) in p.atoms() {
        for &(y, py) in q.atoms() {
            atoms.push((op(x, y), px * py));
        }
    }
    let d = DiscreteDist::from_unnormalized(atoms)?;
    if d.len() > CONVOLUTION_CAP {
        return Err(Error::SupportOverflow {
            size: d.len(),
            cap: CONVOLUTION_CAP,
        });
    }
    Ok(d)
}

/// Law of `X + Y` for independent `X ~ p`, `Y ~ q`.
pub fn convolve(p: &DiscreteDist, q: &DiscreteDist) -> Result<DiscreteDist> {
    combine(p, q, |x, y| x + y)
}

/// Law of `X Y` for independent `X ~ p`, `Y ~ q`.
pub fn multiply(p: &DiscreteDist, q: &DiscreteDist) -> Result<DiscreteDist> {
    combine(p, q, |x, y| x * y)
}

fn fold_with(
    ds: &[DiscreteDist],
    step: impl Fn(&DiscreteDist, &DiscreteDist) -> Result<DiscreteDist>,
) -> Result<DiscreteDist> {
    let (first, rest) = ds
        .split_first()
        .ok_or_else(|| Error::InvalidParameter("no terms".into()))?;
    rest.iter().try_fold(first.clone(), |acc, d| step(&acc, d))
}

pub fn convolve_all(ds: &[DiscreteDist]) -> Result<DiscreteDist> {
    fold_with(ds, convolve)
}

/// `sum_b w_b d_b`; weights must be nonnegative with positive total.
pub fn mixture(components: &[DiscreteDist], weights: &[f64]) -> Result<DiscreteDist> {
    if components.len() != weights.len() || components.is_empty() {
        return Err(Error::InvalidParameter(
            "need one weight per component".into(),
        ));
    }
    if weights.iter().any(|&w| !(w >= 0.0)) {
        return Err(Error::InvalidParameter(
            "weights must be nonnegative".into(),
        ));
    }
    let atoms = components
        .iter()
        .zip(weights)
        .flat_map(|(d, &w)| d.atoms().iter().map(move |&(x, p)| (x, w * p)))
        .collect();
    DiscreteDist::from_unnormalized(atoms)
}

/// `S*` as the mixture over `i` of the sum with term `i` replaced by its
/// size bias, weighted by `a_i / a`. Uses prefix and suffix convolutions so
/// each term is convolved a linear number of times.
pub fn size_biased_sum_pmf(s: &IndependentSum) -> Result<DiscreteDist> {
    let idx = index_distribution(s)?;
    let n = s.terms.len();
    let mut prefix = Vec::with_capacity(n);
    let mut acc: Option<DiscreteDist> = None;
    for t in &s.terms {
        prefix.push(acc.clone());
        acc = Some(match acc {
            None => t.clone(),
            Some(a) => convolve(&a, t)?,
        });
    }
    let mut suffix = vec![None; n];
    let mut acc: Option<DiscreteDist> = None;
    for i in (0..n).rev() {
        suffix[i] = acc.clone();
        acc = Some(match acc {
            None => s.terms[i].clone(),
            Some(a) => convolve(&s.terms[i], &a)?,
        });
    }
    let mut pieces = Vec::with_capacity(n);
    for i in 0..n {
        let mut piece = size_bias_discrete(&s.terms[i])?;
        if let Some(p) = &prefix[i] {
            piece = convolve(p, &piece)?;
        }
        if let Some(q) = &suffix[i] {
            piece = convolve(&piece, q)?;
        }
        pieces.push(piece);
    }
    mixture(&pieces, &idx.probs)
}

/// iid shortcut: bias the first term only.
pub fn size_biased_iid_sum_pmf(term: &DiscreteDist, n: usize) -> Result<DiscreteDist> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let mut out = size_bias_discrete(term)?;
    for _ in 1..n {
        out = convolve(&out, term)?;
    }
    Ok(out)
}

/// Draws `S - X_I + X_I*` with `X_I*` independent of the other terms.
pub fn sample_size_biased_sum<R: Rng + ?Sized>(
    s: &IndependentSum,
    rng: &mut R,
    n: usize,
) -> Result<Vec<f64>> {
    let idx = index_distribution(s)?;
    let index = DiscreteDist::new(
        idx.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (i as f64, p))
            .collect(),
    )?
    .sampler();
    let plain: Vec<DiscreteSampler> = s.terms.iter().map(DiscreteDist::sampler).collect();
    let biased: Vec<DiscreteSampler> = s
        .terms
        .iter()
        .map(|t| size_bias_discrete(t).map(|b| b.sampler()))
        .collect::<Result<_>>()?;
    Ok((0..n)
        .map(|_| {
            let i = index.sample(rng) as usize;
            plain
                .iter()
                .enumerate()
                .map(|(j, smp)| {
                    if j == i {
                        biased[j].sample(rng)
                    } else {
                        smp.sample(rng)
                    }
                })
                .sum()
        })
        .collect())
}

/// Law of the product of independent factors.
pub fn product_law(terms: &[DiscreteDist]) -> Result<DiscreteDist> {
    fold_with(terms, multiply)
}

/// `(X_1 ... X_n)*` as the product of independent `X_i*`.
pub fn size_biased_product_pmf(terms: &[DiscreteDist]) -> Result<DiscreteDist> {
    for (i, t) in terms.iter().enumerate() {
        if !(t.mean() > 0.0) {
            return Err(Error::ZeroMeanTerm(i));
        }
        if t.min_support() <= 0.0 {
            return Err(Error::ZeroInSupport);
        }
    }
    let biased: Vec<DiscreteDist> = terms
        .iter()
        .map(size_bias_discrete)
        .collect::<Result<_>>()?;
    product_law(&biased)
}

/// Size bias of `sum_b w_b d_b`: components biased, weights proportional
/// to `w_b E d_b`. Returns the biased law and the new weights.
pub fn size_bias_mixture(
    components: &[DiscreteDist],
    weights: &[f64],
) -> Result<(DiscreteDist, Vec<f64>)> {
    if components.len() != weights.len() || components.is_empty() {
        return Err(Error::InvalidParameter(
            "need one weight per component".into(),
        ));
    }
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|&w| !(w >= 0.0)) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(
            "weights must be a probability vector".into(),
        ));
    }
    if let Some(i) = components.iter().position(|c| !(c.mean() > 0.0)) {
        return Err(Error::ZeroMeanComponent(i));
    }
    let raw: Vec<f64> = components
        .iter()
        .zip(weights)
        .map(|(c, w)| w * c.mean())
        .collect();
    let z: f64 = raw.iter().sum();
    let new_weights: Vec<f64> = raw.iter().map(|r| r / z).collect();
    let biased: Vec<DiscreteDist> = components
        .iter()
        .map(size_bias_discrete)
        .collect::<Result<_>>()?;
    Ok((mixture(&biased, &new_weights)?, new_weights))
}

/// Geometric index on `1, 2, ...` with success probability `q`.
fn geometric_index<R: Rng + ?Sized>(rng: &mut R, q: f64) -> u32 {
    let mut j = 1;
    while rng.random::<f64>() >= q {
        j += 1;
    }
    j
}

/// Draws of `U*` for `U` uniform on `(0, 1)`: a uniform with binary digit
/// `J ~ Geometric(1/2)` forced to one. The result has density `2x`.
pub fn sample_uniform_star<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            // 53 random bits make up the mantissa
            let mut bits = rng.random::<u64>() >> 11;
            let j = geometric_index(rng, 0.5);
            if j <= 53 {
                bits |= 1u64 << (53 - j);
            }
            bits as f64 / (1u64 << 53) as f64
        })
        .collect()
}

/// Draws of `S*` for the Cantor variable `S = sum 2 B_i / 3^i`, cut at
/// `depth` digits: digit `I` is forced to 2, with `P(I = i) = 2 / 3^i`.
pub fn sample_cantor_star<R: Rng + ?Sized>(rng: &mut R, n: usize, depth: u32) -> Result<Vec<f64>> {
    if depth < 30 {
        return Err(Error::InvalidParameter(format!(
            "Cantor depth {depth} below 30"
        )));
    }
    Ok((0..n)
        .map(|_| {
            let forced = geometric_index(rng, 2.0 / 3.0);
            let mut s = 0.0;
            let mut scale = 1.0;
            for i in 1..=depth {
                scale /= 3.0;
                if i == forced || rng.random::<bool>() {
                    s += 2.0 * scale;
                }
            }
            s
        })
        .collect())
}
