//! Complex-analytic form of the Coleman series identity: the Taylor series
//! `P(z) = Θ(c − z, L, 𝔞)` around `c = w_n/(π^n π*^m)` reproduces
//! `e_{n,m}` at `z = v_n/(π^n π*^m)`, where `w_n = Ω + v_n`, `v_n ∈ L` and
//! `π^n | w_n/Ω_∞·f`.
//!
//! When `v_n/(π^nπ*^m)` lies outside the disc of convergence of `P`, the
//! series is continued along the segment through re-expansions of `℘`
//! (which determines `Θ`), each from the differential equation
//! `℘″ = 6℘² − g2/2`.

use serde::Serialize;

use super::{lattice_distance, Residual, UnitTower};
use crate::error::{Error, Result};
use crate::field::{Modulus, OkElem, Preset};
use crate::lattice::TorsionPoint;
use crate::numerics::APComplex;

#[derive(Clone, Debug, Serialize)]
pub struct ColemanCheck {
    pub n: u32,
    pub m: u32,
    pub terms: usize,
    /// Series value at the offset against the direct `e_{n,m}`.
    pub residual: Residual,
    /// Estimated truncation error of the series evaluation.
    pub remainder: f64,
    /// `|P(0) − Θ(c)|`
    pub constant_term: Residual,
    /// `|v_n/(π^n π*^m)|` and the radius of convergence of `P`.
    pub offset: f64,
    pub radius: f64,
    /// Number of re-expansions (0 when `P` is summed directly).
    pub steps: usize,
    #[serde(skip)]
    pub coefficients: Vec<APComplex>,
}

/// Taylor coefficients of `℘(p + t)` from `℘(p)`, `℘′(p)`.
fn wp_taylor(p0: &APComplex, p1: &APComplex, g2: &APComplex, terms: usize) -> Vec<APComplex> {
    let prec = p0.prec();
    let mut a = vec![p0.clone(), p1.clone()];
    let half_g2 = g2.div_i64(2);
    for j in 0..terms.saturating_sub(2) {
        // (j+2)(j+1) a_{j+2} = 6 Σ a_r a_{j−r} − (g2/2)·[j = 0]
        let mut s = APComplex::zero(prec);
        for r in 0..=j {
            s = &s + &(&a[r] * &a[j - r]);
        }
        let mut rhs = s.mul_i64(6);
        if j == 0 {
            rhs = &rhs - &half_g2;
        }
        a.push(rhs.div_i64(((j + 2) * (j + 1)) as i64));
    }
    a.truncate(terms);
    a
}

/// `f^e` for a power series with `f_0 ≠ 0`.
fn series_pow(f: &[APComplex], e: i64) -> Vec<APComplex> {
    let prec = f[0].prec();
    let mut g = vec![f[0].powi(e)];
    let f0inv = f[0].recip();
    for n in 1..f.len() {
        let mut s = APComplex::zero(prec);
        for k in 1..=n {
            let c = (e + 1) * k as i64 - n as i64;
            if c != 0 {
                s = &s + &(&f[k] * &g[n - k]).mul_i64(c);
            }
        }
        g.push((&s * &f0inv).div_i64(n as i64));
    }
    g
}

fn series_mul(a: &[APComplex], b: &[APComplex]) -> Vec<APComplex> {
    let prec = a[0].prec();
    (0..a.len())
        .map(|n| {
            let mut s = APComplex::zero(prec);
            for k in 0..=n {
                s = &s + &(&a[k] * &b[n - k]);
            }
            s
        })
        .collect()
}

/// `Σ c_j x^j` and a tail estimate from the last two terms, assuming the
/// coefficients decay at least like `ρ^{-j}` with `|x|/ρ = q`.
fn eval_series(c: &[APComplex], x: &APComplex, q: f64) -> (APComplex, f64) {
    let prec = x.prec();
    let mut acc = APComplex::zero(prec);
    let mut xp = APComplex::one(prec);
    let mut last = 0.0f64;
    let d = c.len();
    for (j, cj) in c.iter().enumerate() {
        let t = cj * &xp;
        if j + 2 >= d {
            last = last.max(t.abs_upper());
        }
        acc = &acc + &t;
        xp = &xp * x;
    }
    let tail = if q < 1.0 { 2.0 * last * q / (1.0 - q) } else { f64::INFINITY };
    (acc, tail)
}

fn derivative(c: &[APComplex]) -> Vec<APComplex> {
    c.iter().enumerate().skip(1).map(|(j, x)| x.mul_i64(j as i64)).collect()
}

/// The expansion point `c = w_n/(π^nπ*^m)` and `z0 = v_n/(π^nπ*^m)` with
/// `c − z0 ≡ Ω/(π^nπ*^m)`; `v_n` is chosen to make `|z0|` minimal.
fn expansion_data(tower: &UnitTower, n: u32, m: u32) -> Result<(APComplex, APComplex)> {
    let f = tower.preset().f();
    let pin = tower.pi().pow(n);
    let md = Modulus::new(pin);
    let lambda = (0..md.norm() as usize)
        .map(|i| md.residue_from_index(i))
        .find(|r| md.reduce(&(tower.preset().field.one() + f * *r)).is_zero())
        .ok_or(Error::NotCoprime)?;
    let beta: OkElem = (tower.preset().field.one() + f * lambda).div_exact(&pin).expect("π^n divides 1 + fλ");
    let den = f * tower.level(0, m)?;
    let lat = tower.lattice();
    let c = TorsionPoint::from_quotient(&beta, &den).embed(lat);
    let target = tower.point(&tower.preset().field.one(), n, m)?;
    let (z0, _) = lat.reduce_mod(&(&c - &target));
    Ok((c, z0))
}

/// Checks that the series `P` reproduces `e_{n,m}` with `terms` Taylor
/// coefficients per expansion; fails if the estimated remainder exceeds `tol`.
pub fn coleman_interpolation_check(
    n: u32,
    m: u32,
    preset: &Preset,
    terms: usize,
    tol: f64,
    prec: u32,
) -> Result<ColemanCheck> {
    if n < 1 {
        return Err(Error::InvalidInput("need n ≥ 1".into()));
    }
    if terms < 4 {
        return Err(Error::InvalidInput("need at least 4 terms".into()));
    }
    let tower = UnitTower::new(preset, prec)?;
    let lat = tower.lattice();
    let th = tower.theta();
    let (c, z0) = expansion_data(&tower, n, m)?;
    let direct = tower.unit(n, m)?.value;

    // P(z) = Θ(c − z): substitute ℘(c − z) into the product formula
    let (p0, p1) = lat.wp_pair(&c)?;
    let a = wp_taylor(&p0, &p1, lat.g2(), terms);
    let wp_minus: Vec<APComplex> =
        a.iter().enumerate().map(|(j, x)| if j % 2 == 0 { x.clone() } else { -x.clone() }).collect();
    let mut coeffs = vec![th.constant().clone()];
    coeffs.extend(std::iter::repeat_n(APComplex::zero(prec), terms - 1));
    for (pu, mult) in th.wp_torsion() {
        let mut s = wp_minus.clone();
        s[0] = &s[0] - pu;
        coeffs = series_mul(&coeffs, &series_pow(&s, -mult));
    }
    let constant_term = Residual::between(&coeffs[0], &th.eval(&c)?.value);
    let radius = th.singular_distance(&c);
    let offset = z0.abs_upper();

    let (value, remainder, steps) = if offset <= radius / 2.0 {
        let (v, tail) = eval_series(&coeffs, &z0, offset / radius);
        (v, tail, 0)
    } else {
        continue_along(&tower, &c, &z0, terms)?
    };
    if !(remainder <= tol) {
        return Err(Error::TruncationInsufficient(remainder, tol));
    }
    Ok(ColemanCheck {
        n,
        m,
        terms,
        residual: Residual::between(&value, &direct),
        remainder,
        constant_term,
        offset,
        radius,
        steps,
        coefficients: coeffs,
    })
}

/// `Θ(c − z0)` by stepping `℘` from `c` to `c − z0` in segments of a third of
/// the distance to `L`.
fn continue_along(tower: &UnitTower, c: &APComplex, z0: &APComplex, terms: usize) -> Result<(APComplex, f64, usize)> {
    let lat = tower.lattice();
    let prec = lat.prec();
    let total = z0.abs_upper();
    let dir = &(-z0.clone()) / &APComplex::from_f64(total, prec);
    let (mut p0, mut p1) = lat.wp_pair(c)?;
    let mut pos = c.clone();
    let mut travelled = 0.0;
    let mut steps = 0;
    while travelled < total {
        let rho = lattice_distance(lat, &pos);
        let h = (rho / 3.0).min(total - travelled);
        let last = h >= total - travelled;
        let delta = if last {
            // land exactly on c − z0
            &(c - z0) - &pos
        } else {
            &dir * &APComplex::from_f64(h, prec)
        };
        let a = wp_taylor(&p0, &p1, lat.g2(), terms);
        let q = delta.abs_upper() / rho;
        let (np0, t0) = eval_series(&a, &delta, q);
        let (np1, t1) = eval_series(&derivative(&a), &delta, q);
        p0 = np0.with_err(t0);
        p1 = np1.with_err(t1);
        pos = &pos + &delta;
        travelled += h;
        steps += 1;
        if last {
            break;
        }
    }
    // the tail estimates ride in the ball radii of ℘, ℘′ and so of Θ
    let value = tower.theta().from_wp(&p0);
    let rem = value.err();
    Ok((value, rem, steps))
}
