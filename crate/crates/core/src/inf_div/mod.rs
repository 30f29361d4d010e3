//! Compound Poisson laws and infinite divisibility.
//!
//! A nonnegative `X` with mean `a` is infinitely divisible exactly when
//! `X* = X + Y` for some `Y` independent of `X`. For integer laws the
//! relation reads `k f(k) = sum_{j=1..k} r_j f(k - j)` with `r_j = a f_Y(j)`,
//! which runs forwards to build `f` from `Y` and backwards to extract `Y`
//! from `f`.

mod integral;

pub use integral::{buchstab_atom, buchstab_solve, dickman_solve};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dist::{same_point, DiscreteDist};
use crate::error::{Error, Result};

/// Extracted masses below this are evidence against infinite divisibility.
pub const NEGATIVE_MASS_TOL: f64 = 1e-9;

/// Only indices `k` with `P(X <= k - 1)` below `1 - CUMULATIVE_CUT` are
/// examined by [`extract_increment`].
pub const CUMULATIVE_CUT: f64 = 1e-6;

/// Mean `a`, drift share `alpha0` and Poisson jump rates `(y, lambda)`.
/// `X = a alpha0 + sum y Z_y` with independent `Z_y ~ Poisson(lambda_y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LevyReprRaw")]
pub struct LevyRepr {
    a: f64,
    alpha0: f64,
    jumps: Vec<(f64, f64)>,
}

#[derive(Deserialize)]
struct LevyReprRaw {
    a: f64,
    #[serde(default)]
    alpha0: f64,
    jumps: Vec<(f64, f64)>,
}

impl TryFrom<LevyReprRaw> for LevyRepr {
    type Error = Error;

    fn try_from(r: LevyReprRaw) -> Result<Self> {
        LevyRepr::new(r.a, r.alpha0, r.jumps)
    }
}

impl LevyRepr {
    /// Requires `sum lambda y = a (1 - alpha0)` to `1e-10` relative.
    pub fn new(a: f64, alpha0: f64, mut jumps: Vec<(f64, f64)>) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mean {a} must be positive"
            )));
        }
        if !(0.0..=1.0).contains(&alpha0) {
            return Err(Error::InvalidParameter(format!(
                "alpha0 {alpha0} not in [0, 1]"
            )));
        }
        for &(y, l) in &jumps {
            if !(y > 0.0 && y.is_finite()) {
                return Err(Error::ZeroSupportPoint);
            }
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidParameter(format!("rate {l} at jump {y}")));
            }
        }
        jumps.sort_by(|p, q| p.0.total_cmp(&q.0));
        if jumps.windows(2).any(|w| same_point(w[0].0, w[1].0)) {
            return Err(Error::InvalidParameter(
                "jump sizes must be distinct".into(),
            ));
        }
        let flow: f64 = jumps.iter().map(|&(y, l)| y * l).sum();
        let want = a * (1.0 - alpha0);
        if (flow - want).abs() > 1e-10 * a.max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "sum lambda y = {flow} but a (1 - alpha0) = {want}"
            )));
        }
        Ok(Self { a, alpha0, jumps })
    }

    /// Pure jump law from its rates; the mean is `sum lambda y`.
    pub fn from_rates(jumps: Vec<(f64, f64)>) -> Result<Self> {
        let a = jumps.iter().map(|&(y, l)| y * l).sum();
        Self::new(a, 0.0, jumps)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    pub fn total_rate(&self) -> f64 {
        self.jumps.iter().map(|j| j.1).sum()
    }

    /// Law of `Y` in `X* = X + Y`: mass `lambda y / a` at `y`, plus
    /// `alpha0` at 0.
    pub fn increment(&self) -> Result<DiscreteDist> {
        let mut atoms: Vec<(f64, f64)> = self
            .jumps
            .iter()
            .map(|&(y, l)| (y, l * y / self.a))
            .collect();
        if self.alpha0 > 0.0 {
            atoms.push((0.0, self.alpha0));
        }
        DiscreteDist::from_unnormalized(atoms)
    }

    /// Law of a single jump of the compound Poisson process: mass
    /// `lambda / sum lambda` at `y`.
    pub fn jump_law(&self) -> Result<DiscreteDist> {
        DiscreteDist::from_unnormalized(self.jumps.clone())
    }
}

/// Compound Poisson law with `X* = X + Y` and `E X = a`: rates
/// `lambda_i = a p_i / y_i`.
pub fn compound_poisson_from_increment(y: &DiscreteDist, a: f64) -> Result<LevyRepr> {
    if y.min_support() <= 0.0 {
        return Err(Error::ZeroSupportPoint);
    }
    LevyRepr::new(
        a,
        0.0,
        y.atoms().iter().map(|&(yi, p)| (yi, a * p / yi)).collect(),
    )
}

fn integer_jumps(levy: &LevyRepr) -> Result<Vec<(usize, f64)>> {
    if levy.alpha0 != 0.0 {
        return Err(Error::InvalidParameter(
            "pmf recursion needs alpha0 = 0".into(),
        ));
    }
    levy.jumps
        .iter()
        .map(|&(y, l)| {
            if y.fract() == 0.0 && (1.0..1e9).contains(&y) {
                Ok((y as usize, l))
            } else {
                Err(Error::NonIntegerJump(y))
            }
        })
        .collect()
}

/// Masses `f(0..=n)` from `f(0) = exp(-sum lambda)` and
/// `m f(m) = sum_{k=1..m} k lambda_k f(m - k)`, without renormalization.
pub fn pmf_recursion_raw(levy: &LevyRepr, n: usize) -> Result<Vec<f64>> {
    let jumps = integer_jumps(levy)?;
    let mut r = vec![0.0; n + 1];
    for &(k, l) in &jumps {
        if k <= n {
            r[k] += k as f64 * l;
        }
    }
    let mut f = Vec::with_capacity(n + 1);
    f.push((-levy.total_rate()).exp());
    for m in 1..=n {
        let s: f64 = (1..=m)
            .filter(|&k| r[k] != 0.0)
            .map(|k| r[k] * f[m - k])
            .sum();
        f.push(s / m as f64);
    }
    Ok(f)
}

/// [`pmf_recursion_raw`] cut at `n`, renormalized, with the lost mass
/// recorded as the tail.
pub fn pmf_recursion(levy: &LevyRepr, n: usize) -> Result<DiscreteDist> {
    let f = pmf_recursion_raw(levy, n)?;
    let tail = (1.0 - f.iter().sum::<f64>()).max(0.0);
    DiscreteDist::truncated(
        f.into_iter()
            .enumerate()
            .map(|(k, p)| (k as f64, p))
            .collect(),
        tail,
    )
}

/// Outcome of [`extract_increment`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdTestResult {
    pub is_id: bool,
    /// Mean of the input.
    pub a: f64,
    /// `f_Y(k)` for `k = 1..=examined`, before clamping.
    pub raw: Vec<f64>,
    /// Largest index examined.
    pub examined: usize,
    /// Clamped and renormalized `Y`; present when `is_id`.
    #[serde(skip)]
    pub increment: Option<DiscreteDist>,
    /// First index with negative mass, and that mass.
    pub witness: Option<(usize, f64)>,
}

impl IdTestResult {
    /// Jump rates `lambda_k = a f_Y(k) / k`; present when `is_id`.
    pub fn levy(&self) -> Option<Result<LevyRepr>> {
        let y = self.increment.as_ref()?;
        Some(LevyRepr::new(
            self.a,
            0.0,
            y.atoms()
                .iter()
                .map(|&(k, p)| (k, self.a * p / k))
                .collect(),
        ))
    }
}

/// Solves `k f(k) = sum_{j=1..k} a f_Y(j) f(k - j)` for `f_Y`. The input
/// must live on `0, 1, 2, ...` with `f(0) > 0`.
pub fn extract_increment(fx: &DiscreteDist) -> Result<IdTestResult> {
    let f = fx
        .integer_pmf()
        .ok_or_else(|| Error::InvalidDistribution("support must be nonnegative integers".into()))?;
    if !(f[0] > 0.0) {
        return Err(Error::ZeroAtOrigin);
    }
    let a = fx.mean();
    if !(a > 0.0) {
        return Err(Error::ZeroMean);
    }
    let mut examined = 0;
    let mut cum = f[0];
    for (k, &fk) in f.iter().enumerate().skip(1) {
        if cum >= 1.0 - CUMULATIVE_CUT {
            break;
        }
        examined = k;
        cum += fk;
    }
    let mut r = vec![0.0; examined + 1];
    for k in 1..=examined {
        let s: f64 = (1..k).map(|j| r[j] * f[k - j]).sum();
        r[k] = (k as f64 * f[k] - s) / f[0];
    }
    let raw: Vec<f64> = r[1..].iter().map(|v| v / a).collect();
    let witness = raw
        .iter()
        .position(|&v| v < -NEGATIVE_MASS_TOL)
        .map(|i| (i + 1, raw[i]));
    let increment = if witness.is_none() {
        let atoms: Vec<(f64, f64)> = raw
            .iter()
            .enumerate()
            .map(|(i, &v)| ((i + 1) as f64, v.max(0.0)))
            .collect();
        Some(DiscreteDist::from_unnormalized(atoms)?)
    } else {
        None
    };
    Ok(IdTestResult {
        is_id: witness.is_none(),
        a,
        raw,
        examined,
        increment,
        witness,
    })
}

/// Largest gap between `f * Y` and `X*` on indices `0..=upto`.
pub fn size_bias_equation_residual(
    fx: &DiscreteDist,
    y: &DiscreteDist,
    upto: usize,
) -> Result<f64> {
    let biased = crate::dist::size_bias_discrete(fx)?;
    let conv = crate::sum_bias::convolve(fx, y)?;
    Ok((0..=upto)
        .map(|k| (conv.mass_at(k as f64) - biased.mass_at(k as f64)).abs())
        .fold(0.0, f64::max))
}

/// `f(n-1) f(n+1) >= f(n)^2 - 1e-15` at every interior point. The support
/// must be a run of consecutive integers with positive mass; log-convexity
/// is shift invariant, so the run may start anywhere.
pub fn log_convexity_check(fx: &DiscreteDist) -> Result<bool> {
    let atoms = fx.atoms();
    let start = atoms[0].0;
    for (i, &(x, _)) in atoms.iter().enumerate() {
        if x.fract() != 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "non-integer support point {x}"
            )));
        }
        if x != start + i as f64 {
            return Err(Error::GapInSupport((start as usize) + i));
        }
    }
    Ok(atoms
        .windows(3)
        .all(|w| w[0].1 * w[2].1 >= w[1].1 * w[1].1 - 1e-15))
}

/// `E exp(iuX) = exp(iu a alpha0 + sum lambda (e^{iuy} - 1))`.
pub fn levy_char_fn(levy: &LevyRepr, u: f64) -> Complex64 {
    let drift = Complex64::new(0.0, u * levy.a * levy.alpha0);
    let jumps: Complex64 = levy
        .jumps
        .iter()
        .map(|&(y, l)| l * (Complex64::from_polar(1.0, u * y) - 1.0))
        .sum();
    (drift + jumps).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{char_fn, max_atom_diff, NamedDist};
    use crate::sum_bias::convolve;

    #[test]
    fn rates_from_increment() {
        let y = DiscreteDist::new(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap();
        let l = compound_poisson_from_increment(&y, 3.0).unwrap();
        assert_eq!(l.jumps(), &[(1.0, 1.5), (2.0, 0.75)]);
        assert_eq!(l.alpha0(), 0.0);
        let zero = DiscreteDist::new(vec![(0.0, 0.5), (2.0, 0.5)]).unwrap();
        assert_eq!(
            compound_poisson_from_increment(&zero, 1.0),
            Err(Error::ZeroSupportPoint)
        );
    }

    #[test]
    fn dirac_increment_gives_poisson() {
        let l = compound_poisson_from_increment(&DiscreteDist::dirac(1.0).unwrap(), 1.0).unwrap();
        let f = pmf_recursion(&l, 40).unwrap();
        let p = NamedDist::Poisson(1.0).tabulate().unwrap();
        assert!(max_atom_diff(&f, &p) < 1e-12);
    }

    #[test]
    fn geometric_increment_gives_geometric() {
        // f_Y(k) = p (1-p)^(k-1) with a = (1-p)/p
        let p: f64 = 0.5;
        let y = DiscreteDist::truncated(
            (1..=60)
                .map(|k| (k as f64, p * (1.0 - p).powi(k - 1)))
                .collect(),
            0.0,
        )
        .unwrap();
        let l = compound_poisson_from_increment(&y, (1.0 - p) / p).unwrap();
        let f = pmf_recursion_raw(&l, 30).unwrap();
        for (n, fn_) in f.iter().enumerate() {
            assert!(
                (fn_ - (1.0 - p).powi(n as i32) * p).abs() < 1e-12,
                "n = {n}"
            );
        }
    }

    #[test]
    fn logarithmic_rates_give_geometric() {
        // lambda_k = (1-p)^k / k; the normalized rates are the logarithmic law
        let p = 0.5f64;
        let l = LevyRepr::from_rates(
            (1..=80)
                .map(|k| (k as f64, (1.0 - p).powi(k) / k as f64))
                .collect(),
        )
        .unwrap();
        let f = pmf_recursion_raw(&l, 30).unwrap();
        for (n, fn_) in f.iter().enumerate() {
            assert!(
                (fn_ - (1.0 - p).powi(n as i32) * p).abs() < 1e-12,
                "n = {n}"
            );
        }
        let jumps = l.jump_law().unwrap();
        for k in 1..=10 {
            let want = 0.5f64.powi(k) / (k as f64 * 2f64.ln());
            assert!((jumps.mass_at(k as f64) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn two_jump_recursion_matches_convolution() {
        let l = LevyRepr::from_rates(vec![(1.0, 0.3), (3.0, 0.2)]).unwrap();
        let f = pmf_recursion(&l, 60).unwrap();
        let z1 = NamedDist::Poisson(0.3).tabulate().unwrap();
        let z3 = NamedDist::Poisson(0.2)
            .tabulate()
            .unwrap()
            .scale(3.0)
            .unwrap();
        let oracle = convolve(&z1, &z3).unwrap();
        assert!(max_atom_diff(&f, &oracle) < 1e-12);
        let raw = pmf_recursion_raw(&l, 5).unwrap();
        assert_eq!(raw[0], (-0.5f64).exp());
    }

    #[test]
    fn non_integer_jump_rejected() {
        let l = LevyRepr::from_rates(vec![(1.5, 1.0)]).unwrap();
        assert_eq!(pmf_recursion(&l, 10), Err(Error::NonIntegerJump(1.5)));
    }

    #[test]
    fn poisson_increment_is_dirac_one() {
        let r = extract_increment(&NamedDist::Poisson(2.0).tabulate().unwrap()).unwrap();
        assert!(r.is_id);
        let y = r.increment.unwrap();
        assert!(max_atom_diff(&y, &DiscreteDist::dirac(1.0).unwrap()) < 1e-10);
    }

    #[test]
    fn geometric_increment_is_geometric_on_positive_integers() {
        let g = NamedDist::Geometric(0.5).tabulate().unwrap();
        let r = extract_increment(&g).unwrap();
        assert!(r.is_id);
        for (i, &v) in r.raw.iter().enumerate() {
            let k = (i + 1) as i32;
            assert!((v - 0.5f64.powi(k)).abs() < 1e-9, "k = {k}: {v}");
        }
        // the rates lambda_k = a f_Y(k) / k normalize to the logarithmic law
        let jumps = r.levy().unwrap().unwrap().jump_law().unwrap();
        for k in 1..=8 {
            let want = 0.5f64.powi(k) / (k as f64 * 2f64.ln());
            assert!((jumps.mass_at(k as f64) - want).abs() < 1e-5, "k = {k}");
        }
    }

    #[test]
    fn binomial_two_half_is_not_id() {
        let b = DiscreteDist::from_pmf(&[0.25, 0.5, 0.25]).unwrap();
        let r = extract_increment(&b).unwrap();
        assert!(!r.is_id);
        assert_eq!(r.raw[0], 2.0);
        assert_eq!(r.witness, Some((2, -2.0)));
        assert!(r.increment.is_none());
    }

    #[test]
    fn zero_at_origin_rejected() {
        let d = DiscreteDist::from_pmf(&[0.0, 0.5, 0.5]).unwrap();
        assert_eq!(extract_increment(&d), Err(Error::ZeroAtOrigin));
    }

    #[test]
    fn size_bias_equation_holds_for_id_result() {
        let l = LevyRepr::from_rates(vec![(1.0, 0.4), (2.0, 0.3), (5.0, 0.1)]).unwrap();
        let f = pmf_recursion(&l, 80).unwrap();
        let r = extract_increment(&f).unwrap();
        let res =
            size_bias_equation_residual(&f, r.increment.as_ref().unwrap(), r.examined).unwrap();
        assert!(res < 1e-8, "{res}");
    }

    fn zeta(s: f64, n: usize) -> DiscreteDist {
        // shifted to start at 0
        DiscreteDist::from_unnormalized(
            (1..=n)
                .map(|k| ((k - 1) as f64, (k as f64).powf(-s)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn log_convex_examples() {
        assert!(log_convexity_check(&zeta(2.0, 2000)).unwrap());
        // P(X >= n) = 1/n gives P(X = n) = 1/(n (n+1))
        let power = DiscreteDist::from_unnormalized(
            (1..=2000)
                .map(|n| ((n - 1) as f64, 1.0 / (n as f64 * (n + 1) as f64)))
                .collect(),
        )
        .unwrap();
        assert!(log_convexity_check(&power).unwrap());
        assert!(!log_convexity_check(&NamedDist::Poisson(1.0).tabulate().unwrap()).unwrap());
        let gap = DiscreteDist::new(vec![(0.0, 0.5), (2.0, 0.5)]).unwrap();
        assert_eq!(log_convexity_check(&gap), Err(Error::GapInSupport(1)));
    }

    #[test]
    fn log_convex_implies_id() {
        for s in [2.0, 3.0, 4.0] {
            let z = zeta(s, 3000);
            assert!(log_convexity_check(&z).unwrap());
            assert!(extract_increment(&z).unwrap().is_id, "zeta({s})");
        }
    }

    #[test]
    fn char_fn_of_poisson_jump() {
        let l = LevyRepr::from_rates(vec![(1.0, 1.7)]).unwrap();
        for u in [0.0, 0.4, 2.0] {
            let want = (1.7 * (Complex64::from_polar(1.0, u) - 1.0)).exp();
            assert!((levy_char_fn(&l, u) - want).norm() < 1e-15);
        }
        assert_eq!(levy_char_fn(&l, 0.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn char_fn_matches_recursion() {
        let l = LevyRepr::from_rates(vec![(1.0, 0.3), (3.0, 0.2)]).unwrap();
        let f = pmf_recursion(&l, 80).unwrap();
        for u in [0.3, 1.1, 2.9] {
            assert!((levy_char_fn(&l, u) - char_fn(&f, u)).norm() < 1e-8);
        }
    }

    #[test]
    fn json_shape() {
        let l = LevyRepr::from_rates(vec![(1.0, 0.3), (3.0, 0.2)]).unwrap();
        let v = serde_json::to_value(&l).unwrap();
        assert_eq!(v["jumps"][1][0], 3.0);
        let back: LevyRepr = serde_json::from_value(v).unwrap();
        assert_eq!(back, l);
        let bad = serde_json::json!({"a": 5.0, "alpha0": 0.0, "jumps": [[1.0, 1.0]]});
        assert!(serde_json::from_value::<LevyRepr>(bad).is_err());
    }
}
