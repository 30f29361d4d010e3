//! Midzuno sampling: the first unit is drawn with probability proportional
//! to `x`, the other `m - 1` by simple random sampling from the rest. The
//! chosen subset `R` then has `P(R = r)` proportional to `sum_r x`, which
//! makes the ratio estimator `sum_r y / sum_r x` exactly unbiased for
//! `sum y / sum x`.

use std::io::Read;

use itertools::Itertools;
use rand::seq::index;
use rand::Rng;
use statrs::function::factorial::binomial;

use crate::error::{Error, Result};

/// Largest population [`exact_expectation`] will enumerate.
pub const ENUMERATION_LIMIT: usize = 20;

/// Paired auxiliary sizes `x >= 0` and responses `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

#[derive(serde::Deserialize)]
struct Row {
    x: f64,
    y: f64,
}

impl Population {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidParameter(format!(
                "{} sizes but {} responses",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidParameter(
                "population needs at least 2 units".into(),
            ));
        }
        if let Some(x) = xs.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "size {x} must be finite and >= 0"
            )));
        }
        if let Some(y) = ys.iter().find(|y| !y.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "response {y} is not finite"
            )));
        }
        if !(xs.iter().sum::<f64>() > 0.0) {
            return Err(Error::InvalidParameter("sizes are all zero".into()));
        }
        Ok(Self { xs, ys })
    }

    /// Reads a CSV with header `x,y`. Any malformed row is an error.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
            return Err(Error::Csv(format!(
                "header must be 'x,y', got '{}'",
                headers.iter().join(",")
            )));
        }
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (i, row) in rdr.deserialize::<Row>().enumerate() {
            let row = row.map_err(|e| Error::Csv(format!("row {}: {e}", i + 2)))?;
            xs.push(row.x);
            ys.push(row.y);
        }
        Self::new(xs, ys)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// `sum y / sum x`, the target of the ratio estimator.
    pub fn ratio(&self) -> f64 {
        self.ys.iter().sum::<f64>() / self.xs.iter().sum::<f64>()
    }

    fn check_m(&self, m: usize) -> Result<()> {
        if m >= 1 && m <= self.len() {
            Ok(())
        } else {
            Err(Error::BadSampleSize { m, n: self.len() })
        }
    }
}

/// One Midzuno subset of size `m`, as sorted indices.
pub fn midzuno_sample<R: Rng + ?Sized>(
    p: &Population,
    m: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    p.check_m(m)?;
    let total: f64 = p.xs.iter().sum();
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut first = p.len() - 1;
    for (i, &x) in p.xs.iter().enumerate() {
        acc += x;
        if target < acc {
            first = i;
            break;
        }
    }
    // rounding can leave target == total; fall back to the last positive size
    if p.xs[first] == 0.0 {
        first = p.xs.iter().rposition(|&x| x > 0.0).expect("sum x > 0");
    }
    let mut chosen: Vec<usize> = index::sample(rng, p.len() - 1, m - 1)
        .into_iter()
        .map(|j| if j >= first { j + 1 } else { j })
        .collect();
    chosen.push(first);
    chosen.sort_unstable();
    Ok(chosen)
}

/// `sum_r y / sum_r x`.
pub fn ratio_estimate(p: &Population, r: &[usize]) -> Result<f64> {
    check_indices(p, r)?;
    let sx: f64 = r.iter().map(|&i| p.xs[i]).sum();
    if sx <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(r.iter().map(|&i| p.ys[i]).sum::<f64>() / sx)
}

fn check_indices(p: &Population, r: &[usize]) -> Result<()> {
    if let Some(&i) = r.iter().find(|&&i| i >= p.len()) {
        return Err(Error::InvalidParameter(format!("index {i} out of range")));
    }
    if !r.iter().all_unique() {
        return Err(Error::InvalidParameter("indices repeat".into()));
    }
    Ok(())
}

/// `P(R = r) = sum_r x / (C(n-1, m-1) sum x)`.
pub fn subset_probability(p: &Population, r: &[usize], m: usize) -> Result<f64> {
    p.check_m(m)?;
    if r.len() != m {
        return Err(Error::BadSubsetSize {
            got: r.len(),
            expected: m,
        });
    }
    check_indices(p, r)?;
    let sx: f64 = r.iter().map(|&i| p.xs[i]).sum();
    Ok(sx / (binomial((p.len() - 1) as u64, (m - 1) as u64) * p.xs.iter().sum::<f64>()))
}

fn enumerate(p: &Population, m: usize) -> Result<impl Iterator<Item = Vec<usize>>> {
    p.check_m(m)?;
    if p.len() > ENUMERATION_LIMIT {
        return Err(Error::TooLargeToEnumerate(p.len()));
    }
    Ok((0..p.len()).combinations(m))
}

/// `E T_R` over all subsets. Subsets with `sum_r x = 0` have probability 0.
pub fn exact_expectation(p: &Population, m: usize) -> Result<f64> {
    let mut total = 0.0;
    for r in enumerate(p, m)? {
        let pr = subset_probability(p, &r, m)?;
        if pr > 0.0 {
            total += pr * ratio_estimate(p, &r)?;
        }
    }
    Ok(total)
}

/// `E T_R` when `R` is a uniform subset, which is biased in general.
pub fn naive_expectation(p: &Population, m: usize) -> Result<f64> {
    let w = 1.0 / binomial(p.len() as u64, m as u64);
    enumerate(p, m)?.try_fold(0.0, |acc, r| Ok(acc + w * ratio_estimate(p, &r)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::chi_square_pvalue;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pop(xs: &[f64], ys: &[f64]) -> Population {
        Population::new(xs.to_vec(), ys.to_vec()).unwrap()
    }

    #[test]
    fn full_sample_is_everything() {
        let p = pop(&[1.0, 2.0], &[0.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            assert_eq!(midzuno_sample(&p, 2, &mut rng).unwrap(), vec![0, 1]);
        }
        assert_eq!(
            midzuno_sample(&p, 3, &mut rng),
            Err(Error::BadSampleSize { m: 3, n: 2 })
        );
        assert_eq!(
            midzuno_sample(&p, 0, &mut rng),
            Err(Error::BadSampleSize { m: 0, n: 2 })
        );
    }

    #[test]
    fn single_draw_frequencies() {
        let p = pop(&[1.0, 3.0], &[1.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut counts = [0u64; 2];
        for _ in 0..100_000 {
            counts[midzuno_sample(&p, 1, &mut rng).unwrap()[0]] += 1;
        }
        assert!(chi_square_pvalue(&counts, &[0.25, 0.75]) > 0.01);
    }

    #[test]
    fn equal_sizes_give_uniform_subsets() {
        let p = pop(&[2.0; 4], &[1.0, 2.0, 3.0, 4.0]);
        for r in (0..4).combinations(2) {
            assert!((subset_probability(&p, &r, 2).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn ratio_examples() {
        let p = pop(&[1.0, 3.0], &[1.0, 0.0]);
        assert_eq!(ratio_estimate(&p, &[0]).unwrap(), 1.0);
        assert_eq!(ratio_estimate(&p, &[1]).unwrap(), 0.0);
        let q = pop(&[1.0, 2.0, 5.0], &[2.0, 4.0, 10.0]);
        assert_eq!(ratio_estimate(&q, &[0, 2]).unwrap(), 2.0);
        let z = pop(&[0.0, 1.0], &[1.0, 1.0]);
        assert_eq!(ratio_estimate(&z, &[0]), Err(Error::ZeroDenominator));
    }

    #[test]
    fn subset_probabilities() {
        let p = pop(&[1.0, 3.0], &[1.0, 0.0]);
        assert_eq!(subset_probability(&p, &[1], 1).unwrap(), 0.75);
        assert_eq!(
            subset_probability(&p, &[0, 1], 1),
            Err(Error::BadSubsetSize {
                got: 2,
                expected: 1
            })
        );
        let q = pop(&[0.5, 1.0, 2.0, 0.0, 4.0], &[0.0; 5]);
        let total: f64 = (0..5)
            .combinations(3)
            .map(|r| subset_probability(&q, &r, 3).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exact_unbiasedness_examples() {
        let p = pop(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]);
        assert!((exact_expectation(&p, 2).unwrap() - 2.0).abs() < 1e-15);
        let p = pop(&[1.0, 3.0], &[1.0, 0.0]);
        assert!((exact_expectation(&p, 1).unwrap() - 0.25).abs() < 1e-15);
        assert!((naive_expectation(&p, 1).unwrap() - 0.5).abs() < 1e-15);
        let p = pop(&[1.0, 1.0], &[0.0, 1.0]);
        assert!((exact_expectation(&p, 1).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_sizes_enter_only_through_srs() {
        let p = pop(&[0.0, 1.0, 2.0], &[5.0, 1.0, 1.0]);
        assert!((exact_expectation(&p, 2).unwrap() - p.ratio()).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let r = midzuno_sample(&p, 1, &mut rng).unwrap();
            assert_ne!(r, vec![0]);
        }
    }

    #[test]
    fn enumeration_guard() {
        let p = pop(&[1.0; 21], &[1.0; 21]);
        assert_eq!(
            exact_expectation(&p, 2),
            Err(Error::TooLargeToEnumerate(21))
        );
    }

    #[test]
    fn csv_round() {
        let p = Population::from_csv("x,y\n1,2\n3, 4.5\n".as_bytes()).unwrap();
        assert_eq!(p.xs(), &[1.0, 3.0]);
        assert_eq!(p.ys(), &[2.0, 4.5]);
        assert!(Population::from_csv("a,b\n1,2\n3,4\n".as_bytes()).is_err());
        assert!(Population::from_csv("x,y\n1,2\n3,oops\n".as_bytes()).is_err());
        assert!(Population::from_csv("x,y\n1,2\n3\n".as_bytes()).is_err());
        assert!(Population::from_csv("x,y\n-1,2\n3,1\n".as_bytes()).is_err());
    }
}
