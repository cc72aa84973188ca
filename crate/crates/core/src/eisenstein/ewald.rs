//! Ewald splitting for `Σ (z+ω)^{-k} (z̄+ω̄)^{j}`.
//!
//! With `x = z + ω`, `m = k + j` and `V` the covolume,
//!
//! ```text
//! S = Σ_ω x̄^m |x|^{-2k} Q_k(πt|x|²)
//!   + π^k/(k−1)! · i^{-m}/V · Σ_{ξ∈L*∖0} ξ̄^m e^{2πi Re(zξ̄)} (π|ξ|²)^{-j-1} Γ(j+1, π|ξ|²/t)
//! ```
//!
//! where `Q_k(y) = Γ(k, y)/Γ(k)` and `L* = {ξ : Re(ωξ̄) ∈ Z}`. Both sums
//! converge like Gaussians for every `k ≥ 1`, `j ≥ 0`, and the expression is
//! the Hecke-regularised value when `k − j < 3`.

use rug::Integer;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::numerics::{disc_points, gauss_tail, APComplex};

fn factorial(n: i64) -> Integer {
    Integer::from(Integer::factorial(n.max(0) as u32))
}

/// `e^{-y} Σ_{r<n} y^r/r!` for a real ball `y`.
fn incomplete_gamma_ratio(n: i64, y: &APComplex) -> APComplex {
    let prec = y.prec();
    let mut term = APComplex::one(prec);
    let mut acc = APComplex::one(prec);
    for r in 1..n {
        term = (&term * y).div_i64(r);
        acc = &acc + &term;
    }
    &acc * &(-y.clone()).exp()
}

/// Exponent at which the Gaussian sums are cut for `prec` bits.
pub(crate) fn cut_exponent(prec: u32, m: i64) -> f64 {
    prec as f64 * std::f64::consts::LN_2 + 40.0 + (m as f64) * 2.0
}

/// `Q_k(y)` for a real ball `y`.
pub(crate) fn real_weight(k: i64, y: &APComplex) -> APComplex {
    incomplete_gamma_ratio(k, y)
}

/// Bound on the real-space terms with `|x| > r` at splitting parameter `t`.
pub(crate) fn real_tail(k: i64, j: i64, t: f64, r: f64, lattice: &Lattice) -> f64 {
    let geo = lattice.geometry();
    2f64.powi(k as i32) * gauss_tail((j - k) as f64, std::f64::consts::PI * t / 2.0, r, geo.delta, geo.area)
}

/// `Σ_{ω∈L} (z+ω)^{-k} (z̄+ω̄)^{j}` for `k ≥ 1`, `j ≥ 0`, analytically
/// continued where the series does not converge absolutely.
pub fn kronecker_sum(k: i64, j: i64, z: &APComplex, lattice: &Lattice) -> Result<APComplex> {
    if k < 1 || j < 0 {
        return Err(Error::UnsupportedWeight(-j, k));
    }
    let prec = lattice.prec().max(z.prec());
    let z = z.with_prec(prec);
    let m = k + j;
    let geo = lattice.geometry();
    let t = 1.0 / geo.area;
    let y_cut = cut_exponent(prec, m);
    let pi = APComplex::pi(prec);
    let t_ball = APComplex::from_f64(t, prec);

    // real space
    let r = (2.0 * y_cut / (std::f64::consts::PI * t)).sqrt() + 2.0 * geo.delta + 1.0;
    let pts = disc_points(geo.b1, geo.b2, z.to_f64_pair(), r);
    let (w1, w2) = lattice.basis();
    let pit = &pi * &t_ball;
    let mut real = APComplex::zero(prec);
    for (n1, n2) in pts {
        let x = &(&z + &w1.mul_i64(n1)) + &w2.mul_i64(n2);
        if x.contains_zero() {
            return Err(Error::PoleAtLatticePoint);
        }
        let xc = x.conj();
        let norm = (&x * &xc).re_part();
        let q = incomplete_gamma_ratio(k, &(&pit * &norm));
        real = &real + &(&(&xc.powi(m) / &norm.powi(k)) * &q);
    }
    let real = real.with_err(real_tail(k, j, t, r, lattice));
    Ok(&real + &dual_part(k, j, &z, lattice, t, y_cut))
}

/// The reciprocal-lattice half of the splitting, prefactor included.
pub(crate) fn dual_part(k: i64, j: i64, z: &APComplex, lattice: &Lattice, t: f64, y_cut: f64) -> APComplex {
    let prec = lattice.prec().max(z.prec());
    let m = k + j;
    let pi = APComplex::pi(prec);
    let t_ball = APComplex::from_f64(t, prec);
    let (w1, w2) = lattice.basis();
    // dual space
    let vb = (&w1.conj() * w2).im_part();
    let xi1 = &(-w2.mul_i()) / &vb;
    let xi2 = &w1.mul_i() / &vb;
    let d1 = xi1.to_f64_pair();
    let d2 = xi2.to_f64_pair();
    let dual_delta = {
        let a = (d1.0 + d2.0).hypot(d1.1 + d2.1);
        let b = (d1.0 - d2.0).hypot(d1.1 - d2.1);
        a.max(b) / 2.0
    };
    let rd = (2.0 * y_cut * t / std::f64::consts::PI).sqrt() + 2.0 * dual_delta + 1.0;
    let dual_pts = disc_points(d1, d2, (0.0, 0.0), rd);
    let c1 = (z * &xi1.conj()).re_part();
    let c2 = (z * &xi2.conj()).re_part();
    let two_pi_i = APComplex::two_pi_i(prec);
    let jfact = APComplex::from_integer(&factorial(j), prec);
    let mut dual = APComplex::zero(prec);
    for (n1, n2) in dual_pts {
        if n1 == 0 && n2 == 0 {
            continue;
        }
        let xi = &xi1.mul_i64(n1) + &xi2.mul_i64(n2);
        let xc = xi.conj();
        let pn = &pi * &(&xi * &xc).re_part();
        let b = &pn / &t_ball;
        let phase = (&two_pi_i * &(&c1.mul_i64(n1) + &c2.mul_i64(n2))).exp();
        let g = incomplete_gamma_ratio(j + 1, &b);
        let term = &(&(&xc.powi(m) * &phase) * &pn.powi(-j - 1)) * &g;
        dual = &dual + &term;
    }
    let dual_tail = std::f64::consts::PI.powi((-j - 1) as i32)
        * 2f64.powi((j + 1) as i32)
        * gauss_tail((k - j - 2) as f64, std::f64::consts::PI / (2.0 * t), rd, dual_delta, t);
    let dual = (&dual * &jfact).with_err(dual_tail * factorial(j).to_f64());
    // i^{-m}
    let phase_m = match m.rem_euclid(4) {
        0 => APComplex::one(prec),
        1 => -APComplex::i(prec),
        2 => -APComplex::one(prec),
        _ => APComplex::i(prec),
    };
    let pref = &(&pi.powi(k) / &APComplex::from_integer(&factorial(k - 1), prec)) * &(&phase_m / &vb);
    &pref * &dual
}
