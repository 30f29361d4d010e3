//! Forward marches for `X* = X + Y` with `Y` uniform on `(b, 1)`.
//!
//! `b = 0` gives the Dickman equation `f(x) = (a/x) int_{x-1}^{x} f`, and
//! `0 < b < 1` the Buchstab equation, whose solution has an atom at 0 and
//! a density with jumps at `b` and `1`. Nodes store left and right limits;
//! the trapezoid rule runs on those and the reported value is their
//! average.

use crate::dist::GridDensity;
use crate::error::{Error, Result};

const MAX_STEP: f64 = 1e-3;
const MIN_XMAX: f64 = 3.0;

fn check_grid(h: f64, xmax: f64) -> Result<usize> {
    if !(h > 0.0 && h <= MAX_STEP) {
        return Err(Error::GridTooCoarse(format!("step {h} exceeds {MAX_STEP}")));
    }
    if !(xmax >= MIN_XMAX) {
        return Err(Error::GridTooCoarse(format!(
            "xmax {xmax} below {MIN_XMAX}"
        )));
    }
    Ok((xmax / h).round() as usize)
}

/// Grid index of `x` when `x` is a multiple of `h`.
fn node_of(x: f64, h: f64) -> Option<usize> {
    let k = (x / h).round();
    ((x / h - k).abs() < 1e-9).then_some(k as usize)
}

/// Density tabulated by left and right limits with its running integral.
struct March {
    h: f64,
    left: Vec<f64>,
    right: Vec<f64>,
    cum: Vec<f64>,
}

impl March {
    fn with_capacity(h: f64, n: usize) -> Self {
        Self {
            h,
            left: Vec::with_capacity(n),
            right: Vec::with_capacity(n),
            cum: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, left: f64, right: f64) {
        let c = match (self.cum.last(), self.right.last()) {
            (Some(&c), Some(&r)) => c + 0.5 * self.h * (r + left),
            _ => 0.0,
        };
        self.left.push(left);
        self.right.push(right);
        self.cum.push(c);
    }

    /// `int_0^z f` for `z` inside the tabulated range, exact for densities
    /// linear on each cell.
    fn cum_at(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return 0.0;
        }
        if let Some(j) = node_of(z, self.h) {
            return self.cum[j];
        }
        let j = (z / self.h).floor() as usize;
        let s = z - j as f64 * self.h;
        let (r0, l1) = (self.right[j], self.left[j + 1]);
        self.cum[j] + s * r0 + s * s * (l1 - r0) / (2.0 * self.h)
    }

    fn finish(self, atom0: f64) -> Result<GridDensity> {
        let values = self
            .left
            .iter()
            .zip(&self.right)
            .map(|(l, r)| 0.5 * (l + r))
            .collect();
        GridDensity::unchecked(self.h, values, atom0)
    }
}

/// Density of the mean-`a` law with `X* = X + U`, `U` uniform on `(0, 1)`.
/// Seeded with `x^(a-1)` on `(0, 1]`, marched with implicit trapezoid
/// panels, then normalized. Requires `a >= 1`.
pub fn dickman_solve(a: f64, h: f64, xmax: f64) -> Result<GridDensity> {
    if !(a >= 1.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "a = {a}: the seed x^(a-1) must stay bounded, need a >= 1"
        )));
    }
    let n = check_grid(h, xmax)?;
    let seed_cum = |z: f64| z.max(0.0).powf(a) / a;
    let mut m = March::with_capacity(h, n + 1);
    for i in 0..=n {
        let x = i as f64 * h;
        if x <= 1.0 + 1e-12 {
            let f = if i == 0 {
                if a == 1.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                x.powf(a - 1.0)
            };
            m.left.push(f);
            m.right.push(f);
            m.cum.push(seed_cum(x));
            continue;
        }
        let back = x - 1.0;
        let lagged = if back <= 1.0 {
            seed_cum(back)
        } else {
            m.cum_at(back)
        };
        let prev_c = m.cum[i - 1];
        let prev_f = m.right[i - 1];
        let f = (a / x) * (prev_c + 0.5 * h * prev_f - lagged) / (1.0 - 0.5 * a * h / x);
        m.push(f, f);
    }
    let g = m.finish(0.0)?;
    let total = g.integral();
    let values = g.values().iter().map(|v| v / total).collect();
    GridDensity::unchecked(h, values, 0.0)
}

/// `P(X = 0) = b^(a / (1 - b))` for the Buchstab law.
pub fn buchstab_atom(a: f64, b: f64) -> f64 {
    b.powf(a / (1.0 - b))
}

/// Mean-`a` law with `X* = X + Y`, `Y` uniform on `(b, 1)`: the atom
/// `b^(a/(1-b))` at 0 plus a defective density, marched explicitly and
/// not renormalized. `1/h` and `b/h` must be integers so both jumps sit on
/// nodes.
pub fn buchstab_solve(a: f64, b: f64, h: f64, xmax: f64) -> Result<GridDensity> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "mean {a} must be positive"
        )));
    }
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::InvalidParameter(format!("b = {b} not in (0, 1)")));
    }
    let n = check_grid(h, xmax)?;
    let nb = node_of(b, h)
        .ok_or_else(|| Error::GridTooCoarse(format!("b = {b} is not a multiple of h = {h}")))?;
    let n1 = node_of(1.0, h)
        .ok_or_else(|| Error::GridTooCoarse(format!("1 is not a multiple of h = {h}")))?;
    let p0 = buchstab_atom(a, b);
    let width = 1.0 - b;
    let mut m = March::with_capacity(h, n + 1);
    m.push(0.0, 0.0);
    for i in 1..=n {
        let x = i as f64 * h;
        let base = (m.cum_at(x - b) - m.cum_at(x - 1.0)) / width;
        let atom_term = p0 / width;
        let left_on = i > nb && i <= n1;
        let right_on = i >= nb && i < n1;
        let f = |on: bool| (a / x) * (base + if on { atom_term } else { 0.0 });
        m.push(f(left_on), f(right_on));
    }
    m.finish(p0)
}
