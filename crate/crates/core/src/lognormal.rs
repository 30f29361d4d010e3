//! Laws sharing the moments of the lognormal `exp(sigma Z)`.
//!
//! With `c = exp(sigma^2)`, every law satisfying `X* = cX` has moments
//! `c^(k^2/2)`. The single-orbit laws `l(b, c)` on `{b c^n}` are the
//! extreme points of that set; the lognormal is their mixture, and
//! Stieltjes' perturbed densities are further members. Berg's signed
//! perturbation keeps the moments but leaves the set.

use std::f64::consts::PI;

use crate::dist::lognormal_density;
use crate::dist::{max_atom_diff, size_bias_discrete, DiscreteDist};
use crate::error::{Error, Result};

/// Smallest accepted ratio; the theta series converges too slowly below.
pub const MIN_RATIO: f64 = 1.01;

/// Largest boundary term allowed in an orbit table.
pub const ORBIT_TRUNCATION: f64 = 1e-14;

/// Default half-width of orbit tables.
pub const DEFAULT_HALF_WIDTH: usize = 12;

fn check_ratio(c: f64) -> Result<()> {
    if c >= MIN_RATIO && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "ratio c = {c} below {MIN_RATIO}"
        )))
    }
}

fn log_term(b: f64, c: f64, m: f64) -> f64 {
    -m * b.ln() - 0.5 * m * m * c.ln()
}

/// `t(b, c) = sum_m b^(-m) c^(-m^2/2)`, summed outward from the largest
/// term until the next term falls below `1e-16` of the partial sum.
pub fn theta_t(b: f64, c: f64) -> Result<f64> {
    check_ratio(c)?;
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidParameter(format!("b = {b} must be positive")));
    }
    let peak = (-b.ln() / c.ln()).round();
    let mut sum = log_term(b, c, peak).exp();
    for dir in [1.0, -1.0] {
        let mut k = 1.0;
        loop {
            let term = log_term(b, c, peak + dir * k).exp();
            sum += term;
            if term < 1e-16 * sum {
                break;
            }
            k += 1.0;
        }
    }
    Ok(sum)
}

/// `l(b, c)` cut to indices `-m..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitDist {
    b: f64,
    c: f64,
    m: usize,
    masses: Vec<f64>,
}

/// Unreduced orbit masses at `b c^n`, `n = -m..=m`.
fn orbit_masses(b: f64, c: f64, m: usize) -> Result<Vec<f64>> {
    let t = theta_t(b, c)?;
    let m_ = m as f64;
    let edge = log_term(b, c, m_).exp().max(log_term(b, c, -m_).exp()) / t;
    if edge >= ORBIT_TRUNCATION {
        return Err(Error::TruncationTooSevere(format!(
            "boundary mass {edge:e} at half-width {m}"
        )));
    }
    let raw: Vec<f64> = (-(m as i64)..=m as i64)
        .map(|n| log_term(b, c, n as f64).exp() / t)
        .collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|p| p / total).collect())
}

/// Single-orbit law with masses `b^(-n) c^(-n^2/2) / t(b, c)` at `b c^n`.
/// `b` is first moved into `[1, c)` by a power of `c`, which leaves the
/// law unchanged.
pub fn orbit_pmf(b: f64, c: f64, m: usize) -> Result<OrbitDist> {
    check_ratio(c)?;
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidParameter(format!("b = {b} must be positive")));
    }
    let shift = (b.ln() / c.ln()).floor();
    let mut rep = b * c.powf(-shift);
    if rep >= c {
        rep /= c;
    }
    if rep < 1.0 {
        rep *= c;
    }
    let masses = orbit_masses(rep, c, m)?;
    Ok(OrbitDist {
        b: rep,
        c,
        m,
        masses,
    })
}

impl OrbitDist {
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn half_width(&self) -> usize {
        self.m
    }

    /// Mass at `b c^n`.
    pub fn mass(&self, n: i64) -> f64 {
        let i = n + self.m as i64;
        if i < 0 || i as usize >= self.masses.len() {
            0.0
        } else {
            self.masses[i as usize]
        }
    }

    pub fn point(&self, n: i64) -> f64 {
        self.b * self.c.powi(n as i32)
    }

    pub fn to_dist(&self) -> Result<DiscreteDist> {
        let m = self.m as i64;
        DiscreteDist::new((-m..=m).map(|n| (self.point(n), self.mass(n))).collect())
    }
}

/// `E X^k`, about `c^(k^2/2)`. Fails when the omitted terms could move
/// the result by more than `1e-8` relative.
pub fn orbit_moment(o: &OrbitDist, k: i32) -> Result<f64> {
    let m = o.m as i64;
    let t = theta_t(o.b, o.c)?;
    let term = |n: i64| o.point(n).powi(k) * log_term(o.b, o.c, n as f64).exp() / t;
    let sum: f64 = (-m..=m).map(|n| o.point(n).powi(k) * o.mass(n)).sum();
    // terms past the edge shrink faster than geometrically
    let omitted = 2.0 * (term(m + 1) + term(-m - 1));
    if !(omitted <= 1e-8 * sum.abs()) {
        return Err(Error::TruncationTooSevere(format!(
            "moment {k} at half-width {}: omitted mass {omitted:e}",
            o.m
        )));
    }
    Ok(sum)
}

/// `X* = cX` atom-wise to `1e-10`.
pub fn size_bias_scaling_check(d: &DiscreteDist, c: f64) -> Result<bool> {
    let lhs = size_bias_discrete(d)?;
    let rhs = d.scale(c)?;
    Ok(max_atom_diff(&lhs, &rhs) <= 1e-10)
}

pub fn orbit_size_bias_check(o: &OrbitDist) -> Result<bool> {
    size_bias_scaling_check(&o.to_dist()?, o.c)
}

/// Berg's law: `b = sqrt(c)` and masses multiplied by `1 + s (-1)^n`.
pub fn berg_pmf(s: i8, c: f64, m: usize) -> Result<DiscreteDist> {
    if s != 1 && s != -1 {
        return Err(Error::InvalidParameter(format!(
            "sign {s} must be +1 or -1"
        )));
    }
    check_ratio(c)?;
    let b = c.sqrt();
    let masses = orbit_masses(b, c, m)?;
    let mi = m as i64;
    let atoms = (-mi..=mi)
        .zip(masses)
        .map(|(n, p)| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            (b * c.powi(n as i32), (1.0 + f64::from(s) * sign) * p)
        })
        .collect();
    DiscreteDist::from_unnormalized(atoms)
}

/// Lognormal density perturbed by `1 + delta sin(2 pi m ln x / sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StieltjesDensity {
    m: u32,
    delta: f64,
    sigma: f64,
}

/// Composite Simpson rule on `[lo, hi]` with an even panel count.
fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (hi - lo) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(lo) + f(hi) + inner) * h / 3.0
}

/// Panels for the moment quadrature.
pub const MOMENT_PANELS: usize = 100_000;

impl StieltjesDensity {
    pub fn new(m: u32, delta: f64, sigma: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "m must be a positive integer".into(),
            ));
        }
        if !(-1.0..=1.0).contains(&delta) {
            return Err(Error::InvalidParameter(format!(
                "delta {delta} not in [-1, 1]"
            )));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma {sigma} must be positive"
            )));
        }
        Ok(Self { m, delta, sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `c = exp(sigma^2)`.
    pub fn ratio(&self) -> f64 {
        (self.sigma * self.sigma).exp()
    }

    fn wobble(&self, log_x: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        1.0 + self.delta * (2.0 * PI * f64::from(self.m) * log_x / s2).sin()
    }

    pub fn density(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        lognormal_density(x, 0.0, self.sigma * self.sigma) * self.wobble(x.ln())
    }

    /// `int x^n h(x) dx` after `x = exp(sigma z)`: the integrand becomes
    /// `exp(n^2 sigma^2 / 2)` times a unit normal density centred at
    /// `n sigma`, so the window `n sigma +- 12` loses below `1e-30`.
    pub fn moment(&self, n: i32) -> Result<f64> {
        let shift = f64::from(n) * self.sigma;
        let scale = (0.5 * shift * shift).exp();
        let phi = |z: f64| (-0.5 * (z - shift).powi(2)).exp() / (2.0 * PI).sqrt();
        let integrand = |z: f64| phi(z) * self.wobble(self.sigma * z);
        let v = scale * simpson(integrand, shift - 12.0, shift + 12.0, MOMENT_PANELS);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::QuadratureFailure(format!(
                "moment {n} is not finite"
            )))
        }
    }
}

pub fn stieltjes_density(s: &StieltjesDensity, x: f64) -> f64 {
    s.density(x)
}

/// Panels for `k_c`.
pub const MIXTURE_PANELS: usize = 10_000;

/// Mixing density over orbit representatives `b in [1, c)` that rebuilds
/// the lognormal with `sigma^2 = ln c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LognormalMixture {
    c: f64,
    k_c: f64,
}

impl LognormalMixture {
    /// Computes `k_c = int_1^c f(x) t(x, c) dx` by Simpson's rule.
    pub fn new(c: f64) -> Result<Self> {
        check_ratio(c)?;
        let s2 = c.ln();
        let k_c = simpson(
            |x| theta_t(x, c).map_or(f64::NAN, |t| lognormal_density(x, 0.0, s2) * t),
            1.0,
            c,
            MIXTURE_PANELS,
        );
        if !(k_c.is_finite() && k_c > 0.0) {
            return Err(Error::QuadratureFailure(format!("k_c = {k_c}")));
        }
        Ok(Self { c, k_c })
    }

    pub fn k_c(&self) -> f64 {
        self.k_c
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `h_c(b) = f(b) t(b, c) / k_c` on `[1, c)`, zero elsewhere.
    pub fn density(&self, b: f64) -> Result<f64> {
        if !(1.0..self.c).contains(&b) {
            return Ok(0.0);
        }
        Ok(lognormal_density(b, 0.0, self.c.ln()) * theta_t(b, self.c)? / self.k_c)
    }

    /// Density at `x` of the `h_c` mixture of orbit laws: with
    /// `x = b c^n`, `b in [1, c)`, it is `h_c(b) P(l(b, c) = x) c^(-n)`.
    pub fn reconstructed_density(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::InvalidParameter(format!("x = {x} must be positive")));
        }
        let o = orbit_pmf(x, self.c, DEFAULT_HALF_WIDTH.max(24))?;
        let n = ((x / o.b()).ln() / self.c.ln()).round() as i64;
        Ok(self.density(o.b())? * o.mass(n) * self.c.powi(-(n as i32)))
    }
}

pub fn mixture_density_hc(c: f64, b: f64) -> Result<f64> {
    LognormalMixture::new(c)?.density(b)
}

/// Largest gap between the lognormal density and its orbit-mixture
/// reconstruction over `xs`.
pub fn mixture_reconstruction_check(c: f64, xs: &[f64]) -> Result<f64> {
    let mix = LognormalMixture::new(c)?;
    let s2 = c.ln();
    xs.iter().try_fold(0.0f64, |worst, &x| {
        let err = (mix.reconstructed_density(x)? - lognormal_density(x, 0.0, s2)).abs();
        Ok(worst.max(err))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn theta_reference_values() {
        // b = 1 is symmetric in m
        let c = 2.0f64;
        let sym = 1.0 + 2.0 * (1..60).map(|m| c.powf(-(m * m) as f64 / 2.0)).sum::<f64>();
        assert!((theta_t(1.0, c).unwrap() - sym).abs() < 1e-15);
        assert!((theta_t(1.0, E).unwrap() - 2.506_628_288_042_905_5).abs() < 1e-14);
        assert!((theta_t(1.3, 2.0).unwrap() - 3.164_037_668_919_824).abs() < 1e-14);
    }

    #[test]
    fn theta_shift_identity() {
        for &(b, c) in &[(1.0, E), (1.3, 2.0), (0.2, 5.0), (3.0, 1.5)] {
            let lhs = theta_t(b * c, c).unwrap();
            let rhs = b * c.sqrt() * theta_t(b, c).unwrap();
            assert!((lhs - rhs).abs() < 1e-12 * rhs, "({b}, {c})");
        }
    }

    #[test]
    fn small_ratio_rejected() {
        assert!(theta_t(1.0, 1.005).is_err());
        assert!(orbit_pmf(1.0, 1.0, 12).is_err());
    }

    #[test]
    fn orbit_mean_and_center() {
        let o = orbit_pmf(1.3, 2.0, 12).unwrap();
        assert!((orbit_moment(&o, 1).unwrap() - 2f64.sqrt()).abs() < 1e-10);
        let one = orbit_pmf(1.0, 3.0, 12).unwrap();
        assert!((one.mass(0) - 1.0 / theta_t(1.0, 3.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn orbit_is_invariant_under_representative() {
        let (b, c) = (1.3, 2.0);
        let direct = orbit_pmf(b, c, 12).unwrap().to_dist().unwrap();
        // masses built from the representative b c without reduction
        let raw = orbit_masses(b * c, c, 14).unwrap();
        let shifted = DiscreteDist::new(
            (-14i64..=14)
                .zip(raw)
                .map(|(n, p)| (b * c * c.powi(n as i32), p))
                .collect(),
        )
        .unwrap();
        assert!(max_atom_diff(&direct, &shifted) < 1e-13);
        assert_eq!(
            orbit_pmf(b * c * c, c, 12).unwrap(),
            orbit_pmf(b, c, 12).unwrap()
        );
    }

    #[test]
    fn orbit_moments() {
        let o = orbit_pmf(1.0, 4.0, 12).unwrap();
        assert_eq!(orbit_moment(&o, 0).unwrap(), 1.0);
        assert!((orbit_moment(&o, 1).unwrap() - 2.0).abs() < 1e-10);
        let o = orbit_pmf(1.7, 2.0, 12).unwrap();
        assert!((orbit_moment(&o, 2).unwrap() - 4.0).abs() < 4e-8);
        for k in -3..=3 {
            let want = 2f64.powf(f64::from(k * k) / 2.0);
            assert!(
                (orbit_moment(&o, k).unwrap() / want - 1.0).abs() < 1e-8,
                "k = {k}"
            );
        }
    }

    #[test]
    fn orbit_moment_guard() {
        let o = orbit_pmf(1.0, 2.0, 12).unwrap();
        assert!(matches!(
            orbit_moment(&o, 30),
            Err(Error::TruncationTooSevere(_))
        ));
        assert!(matches!(
            orbit_pmf(1.0, 1.1, 12),
            Err(Error::TruncationTooSevere(_))
        ));
    }

    #[test]
    fn orbit_times_c() {
        assert!(orbit_size_bias_check(&orbit_pmf(1.0, E, 12).unwrap()).unwrap());
        assert!(orbit_size_bias_check(&orbit_pmf(1.5, 2.0, 12).unwrap()).unwrap());
        let d = orbit_pmf(1.5, 2.0, 12).unwrap().to_dist().unwrap();
        let mut atoms = d.atoms().to_vec();
        let mid = atoms.len() / 2;
        atoms[mid].1 *= 1.01;
        let bent = DiscreteDist::from_unnormalized(atoms).unwrap();
        assert!(!size_bias_scaling_check(&bent, 2.0).unwrap());
    }

    #[test]
    fn berg_midpoint_and_moments() {
        let c = 3.0f64;
        let plus = berg_pmf(1, c, 12).unwrap();
        let minus = berg_pmf(-1, c, 12).unwrap();
        let mid = crate::sum_bias::mixture(&[plus.clone(), minus.clone()], &[0.5, 0.5]).unwrap();
        let orbit = orbit_pmf(c.sqrt(), c, 12).unwrap().to_dist().unwrap();
        assert!(max_atom_diff(&mid, &orbit) < 1e-14);
        for d in [&plus, &minus] {
            for k in 0..=3 {
                let want = c.powf(f64::from(k * k) / 2.0);
                assert!((d.moment(k).unwrap() / want - 1.0).abs() < 1e-10, "k = {k}");
            }
            assert!(!size_bias_scaling_check(d, c).unwrap());
        }
    }

    #[test]
    fn stieltjes_reduces_to_lognormal() {
        let s = StieltjesDensity::new(1, 0.0, 0.8).unwrap();
        for x in [0.1, 1.0, 3.3] {
            let want = lognormal_density(x, 0.0, 0.8 * 0.8);
            assert!((s.density(x) - want).abs() <= 1e-15 * want);
        }
    }

    #[test]
    fn stieltjes_moments() {
        for delta in [-1.0, 0.5, 1.0] {
            let s = StieltjesDensity::new(1, delta, 1.0).unwrap();
            for n in 0..=4 {
                let want = (f64::from(n * n) / 2.0).exp();
                let got = s.moment(n).unwrap();
                assert!(
                    (got / want - 1.0).abs() < 1e-6,
                    "delta {delta}, n {n}: {got}"
                );
            }
        }
    }

    #[test]
    fn stieltjes_functional_equation() {
        let s = StieltjesDensity::new(2, 0.7, 0.9).unwrap();
        let c = s.ratio();
        for x in [0.2, 0.9, 1.0, 2.5, 7.0] {
            let lhs = s.density(x / c);
            let rhs = x * c.sqrt() * s.density(x);
            assert!((lhs - rhs).abs() < 1e-12 * rhs.max(1e-300), "x = {x}");
        }
    }

    #[test]
    fn mixture_at_e() {
        let mix = LognormalMixture::new(E).unwrap();
        assert!((mix.k_c() - 1.0).abs() < 1e-6, "{}", mix.k_c());
        let total = simpson(|b| mix.density(b.min(E - 1e-15)).unwrap(), 1.0, E, 10_000);
        assert!((total - 1.0).abs() < 1e-6);
        assert!(mix.density(0.5).unwrap() == 0.0 && mix.density(2.0).unwrap() > 0.0);
        assert!(mixture_reconstruction_check(E, &[0.5, 1.7, 4.0]).unwrap() < 1e-6);
    }
}
