//! Central finite differences with a Richardson step for low orders.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Anything that can be combined linearly by a difference stencil.
pub trait FdValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T> FdValue for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

/// Highest derivative order supported by the stencils.
pub const MAX_FD_ORDER: usize = 5;

/// Second-order accurate central stencil: (offset, weight) pairs, weights in units of 1/h^order.
fn stencil(order: usize) -> &'static [(i32, f64)] {
    match order {
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        4 => &[(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)],
        5 => &[(-3, -0.5), (-2, 2.0), (-1, -2.5), (1, 2.5), (2, -2.0), (3, 0.5)],
        _ => &[],
    }
}

fn half_width(order: usize) -> i32 {
    stencil(order).iter().map(|(k, _)| k.abs()).max().unwrap_or(0)
}

/// Parameter reach of [`fd_derivative`] on each side of `s`.
pub fn stencil_reach(order: usize, h: f64) -> f64 {
    let richardson = if order <= 2 { 2.0 } else { 1.0 };
    richardson * half_width(order) as f64 * h
}

/// Step size `eps^(1/(order+2))` scaled by the local parameter magnitude.
pub fn default_step(order: usize, s: f64) -> f64 {
    f64::EPSILON.powf(1.0 / (order as f64 + 2.0)) * s.abs().max(1.0)
}

fn plain<V, F>(f: &F, s: f64, order: usize, h: f64) -> Result<V>
where
    V: FdValue,
    F: Fn(f64) -> Result<V>,
{
    let scale = h.powi(order as i32).recip();
    let mut acc: Option<V> = None;
    for &(k, w) in stencil(order) {
        let term = f(s + k as f64 * h)? * (w * scale);
        acc = Some(match acc {
            Some(a) => a + term,
            None => term,
        });
    }
    acc.ok_or_else(|| Error::SpecInvalid(format!("unsupported derivative order {order}")))
}

/// Derivative of `f` of the given order at `s`.
///
/// Orders 1 and 2 combine steps `h` and `2h` (error O(h^4)); orders 3 to 5 use a
/// single second-order stencil. When `domain` is given the whole stencil must
/// lie inside it.
pub fn fd_derivative<V, F>(f: F, s: f64, order: usize, h: f64, domain: Option<(f64, f64)>) -> Result<V>
where
    V: FdValue,
    F: Fn(f64) -> Result<V>,
{
    if order == 0 || order > MAX_FD_ORDER {
        return Err(Error::SpecInvalid(format!("finite differences support orders 1..=5, got {order}")));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::SpecInvalid(format!("finite-difference step must be positive, got {h}")));
    }
    if let Some((lo, hi)) = domain {
        let reach = stencil_reach(order, h);
        if s - reach < lo || s + reach > hi {
            return Err(Error::DomainExceeded { s, order });
        }
    }
    let fine = plain(&f, s, order, h)?;
    if order > 2 {
        return Ok(fine);
    }
    let coarse = plain(&f, s, order, 2.0 * h)?;
    Ok(fine * (4.0 / 3.0) - coarse * (1.0 / 3.0))
}
