//! Bounded scalar minimisation: golden-section search and a grid-seeded global
//! minimiser for periodic functions.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMin {
    pub x: f64,
    pub f: f64,
    pub iterations: usize,
}

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `xtol`.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Result<ScalarMin>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut iterations = 0;
    while (b - a).abs() > xtol && iterations < max_iter {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        iterations += 1;
    }
    let (x, fx) = if fc <= fd { (c, fc) } else { (d, fd) };
    if !fx.is_finite() {
        return Err(Error::Numerical(format!("golden section ended on non-finite value at x = {x}")));
    }
    Ok(ScalarMin { x, f: fx, iterations })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicMin {
    pub x: f64,
    pub f: f64,
    /// Number of distinct local minima seen on the seed grid (at least one).
    pub local_minima: usize,
}

/// Global minimum of a `period`-periodic function on `[0, period)`.
///
/// The function is sampled on `grid` equispaced seeds; every discrete local
/// minimum is refined by golden section inside its two neighbouring cells and
/// the least refined value wins.
pub fn minimize_periodic<F>(mut f: F, period: f64, grid: usize, xtol: f64) -> Result<PeriodicMin>
where
    F: FnMut(f64) -> Result<f64>,
{
    if grid < 3 {
        return Err(Error::Numerical(format!("seed grid too small ({grid} points)")));
    }
    let step = period / grid as f64;
    let values = (0..grid).map(|i| f(i as f64 * step)).collect::<Result<Vec<_>>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("objective is not finite on the seed grid".into()));
    }

    let seeds: Vec<usize> = (0..grid)
        .filter(|&i| {
            let prev = values[(i + grid - 1) % grid];
            let next = values[(i + 1) % grid];
            values[i] < prev && values[i] <= next
        })
        .collect();
    let local_minima = seeds.len().max(1);
    let seeds = if seeds.is_empty() {
        // flat objective: any point is a minimiser
        vec![0]
    } else {
        seeds
    };

    let mut best = PeriodicMin { x: 0.0, f: f64::INFINITY, local_minima };
    for i in seeds {
        let centre = i as f64 * step;
        let refined = golden_section(&mut f, centre - step, centre + step, xtol, 200)?;
        let (x, fx) = if refined.f <= values[i] { (refined.x, refined.f) } else { (centre, values[i]) };
        if fx < best.f {
            best.x = x.rem_euclid(period);
            best.f = fx;
        }
    }
    Ok(best)
}
