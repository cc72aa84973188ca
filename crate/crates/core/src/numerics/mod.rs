//! Arbitrary-precision ball arithmetic, tail-bounded lattice sums and
//! recognition of algebraic numbers.

mod ball;
mod detect;

pub(crate) use ball::up;
pub use ball::{product_with_prec, sum_with_prec, APComplex, MIN_PREC};
pub use detect::{detect_algebraic, lll_reduce, AlgebraicCandidate, FieldLabel};

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 256;

/// `Σ_{ω∈L, |z+ω|≤R} (z+ω)^{-k} (z̄+ω̄)^{-i}`.
#[derive(Clone, Debug)]
pub struct SumSpec {
    pub k: i64,
    pub i: i64,
    pub z: APComplex,
    pub radius: f64,
}

impl SumSpec {
    pub fn new(k: i64, i: i64, z: APComplex, radius: f64) -> Self {
        SumSpec { k, i, z, radius }
    }

    /// Bound on the omitted terms `|z+ω| > R`.
    ///
    /// Each omitted point owns the translate of a centred fundamental cell,
    /// every point of which is within `δ` (half the long diagonal) of it, so
    /// the tail is at most `(2π/V)·∫_{R−2δ}^∞ u^{-s}(u+δ) du` with `s = k+i`.
    pub fn tail_bound(&self, lattice: &Lattice) -> f64 {
        let s = (self.k + self.i) as f64;
        let geo = lattice.geometry();
        let u0 = self.radius * (1.0 - 1e-9) - 2.0 * geo.delta;
        if u0 <= 0.0 || s <= 2.0 {
            return f64::INFINITY;
        }
        let t = 2.0 * std::f64::consts::PI / geo.area
            * (u0.powf(2.0 - s) / (s - 2.0) + geo.delta * u0.powf(1.0 - s) / (s - 1.0));
        up(t)
    }
}

/// Truncated absolutely convergent lattice sum with its analytic tail bound
/// folded into the radius.
pub fn lattice_sum(spec: &SumSpec, lattice: &Lattice) -> Result<APComplex> {
    if spec.k + spec.i < 3 {
        return Err(Error::DivergentSpec(spec.k + spec.i));
    }
    let prec = spec.z.prec();
    let geo = lattice.geometry();
    let zf = spec.z.to_f64_pair();
    let pts = disc_points(geo.b1, geo.b2, zf, spec.radius);
    let (w1, w2) = lattice.basis();
    let mut acc = APComplex::zero(prec);
    for (n1, n2) in pts {
        let x = &(&spec.z + &w1.mul_i64(n1)) + &w2.mul_i64(n2);
        if x.contains_zero() {
            if spec.k > 0 {
                return Err(Error::PoleAtLatticePoint);
            }
            continue;
        }
        let mut term = x.recip().powi(spec.k);
        if spec.i != 0 {
            term = &term * &x.conj().powi(-spec.i);
        }
        acc = &acc + &term;
    }
    Ok(acc.with_err(spec.tail_bound(lattice)))
}

/// Integer pairs `(n1, n2)` with `|c + n1·b1 + n2·b2| ≤ r`, computed in
/// doubles. Callers treat the boundary with a relative slack of `1e-9`.
pub(crate) fn disc_points(b1: (f64, f64), b2: (f64, f64), c: (f64, f64), r: f64) -> Vec<(i64, i64)> {
    let area = (b1.0 * b2.1 - b1.1 * b2.0).abs();
    let l1 = b1.0.hypot(b1.1);
    let cabs = c.0.hypot(c.1);
    let n2max = ((r + cabs) * l1 / area).ceil() as i64 + 1;
    let mut out = Vec::new();
    let r2 = r * r;
    for n2 in -n2max..=n2max {
        let px = c.0 + n2 as f64 * b2.0;
        let py = c.1 + n2 as f64 * b2.1;
        // project onto b1
        let t = -(px * b1.0 + py * b1.1) / (l1 * l1);
        let span = r / l1 + 1.0;
        let lo = (t - span).floor() as i64;
        let hi = (t + span).ceil() as i64;
        for n1 in lo..=hi {
            let x = px + n1 as f64 * b1.0;
            let y = py + n1 as f64 * b1.1;
            if x * x + y * y <= r2 {
                out.push((n1, n2));
            }
        }
    }
    out
}

/// Bound for `Σ |x|^a e^{-c|x|²}` over the points `|x| > R` of a translated
/// lattice of covolume `area` whose centred cell has radius `delta`.
///
/// Uses the same cell comparison as [`SumSpec::tail_bound`] together with
/// `∫_{u0}^∞ u^b e^{-cu²} du ≤ u0^b e^{-c·u0²} / (2c·u0 − b⁺/u0)`.
pub(crate) fn gauss_tail(a: f64, c: f64, r: f64, delta: f64, area: f64) -> f64 {
    let u0 = r * (1.0 - 1e-9) - 2.0 * delta;
    if u0 <= 0.0 {
        return f64::INFINITY;
    }
    // g(ρ) = ρ^a e^{-cρ²} must be decreasing beyond u0
    if a > 0.0 && u0 * u0 < a / (2.0 * c) {
        return f64::INFINITY;
    }
    let integral = |b: f64| -> f64 {
        let den = 2.0 * c * u0 - b.max(0.0) / u0;
        if den <= 0.0 {
            return f64::INFINITY;
        }
        (b * u0.ln() - c * u0 * u0).exp() / den
    };
    up(2.0 * std::f64::consts::PI / area * (integral(a + 1.0) + delta * integral(a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_points_counts_match_brute_force() {
        let b1 = (1.0, 0.0);
        let b2 = (0.3, 1.1);
        let c = (0.2, -0.4);
        let r = 5.5;
        let pts = disc_points(b1, b2, c, r);
        let mut brute = 0;
        for n1 in -30i64..=30 {
            for n2 in -30i64..=30 {
                let x = c.0 + n1 as f64 * b1.0 + n2 as f64 * b2.0;
                let y = c.1 + n1 as f64 * b1.1 + n2 as f64 * b2.1;
                if x * x + y * y <= r * r {
                    brute += 1;
                }
            }
        }
        assert_eq!(pts.len(), brute);
    }

    #[test]
    fn gauss_tail_dominates_explicit_tail() {
        // square lattice, a = 0, c = 1: compare with an explicit partial sum of the tail
        let r = 3.0;
        let bound = gauss_tail(0.0, 1.0, r, std::f64::consts::SQRT_2 / 2.0, 1.0);
        let mut tail = 0.0;
        for n1 in -20i64..=20 {
            for n2 in -20i64..=20 {
                let d2 = (n1 * n1 + n2 * n2) as f64;
                if d2 > r * r {
                    tail += (-d2).exp();
                }
            }
        }
        assert!(tail <= bound, "{tail} > {bound}");
    }
}
