//! Complex lattices and the Weierstrass functions attached to them.
//!
//! Every lattice is stored with a Gauss-reduced basis, so `τ = ω2/ω1`
//! satisfies `Im τ ≥ √3/2` and all q-expansions converge geometrically with
//! ratio at most `e^{-π√3}`. Functions are evaluated on `Z + τZ` and rescaled.

mod qseries;

use rug::Rational;

use crate::error::{Error, Result};
use crate::field::{ImagQuadField, OkElem};
use crate::numerics::APComplex;

pub use qseries::QSeries;

/// `L = Ω·𝔞` for a CM lattice; `𝔞 = (gen)`.
#[derive(Clone, Debug)]
pub struct CmTag {
    pub field: ImagQuadField,
    pub omega: APComplex,
    pub ideal: OkElem,
}

impl CmTag {
    /// The complex generator `Ω·a` so that `L = (Ω·a)·O_K`.
    pub fn generator(&self, prec: u32) -> APComplex {
        &self.omega * &self.ideal.embed(prec)
    }
}

/// Double-precision shape data used to pick truncation radii.
#[derive(Clone, Copy, Debug)]
pub struct Geometry {
    pub b1: (f64, f64),
    pub b2: (f64, f64),
    pub area: f64,
    /// Radius of the centred fundamental parallelogram.
    pub delta: f64,
}

#[derive(Clone, Debug)]
struct Constants {
    tau: APComplex,
    q: QSeries,
    eta1_tau: APComplex,
    eta2_tau: APComplex,
    g2: APComplex,
    g3: APComplex,
    disc: APComplex,
    eta_w1: APComplex,
    eta_w2: APComplex,
    area_over_pi: APComplex,
    s2: APComplex,
    legendre_residual: f64,
}

#[derive(Clone, Debug)]
pub struct Lattice {
    w1: APComplex,
    w2: APComplex,
    cm: Option<CmTag>,
    prec: u32,
    geo: Geometry,
    c: Constants,
}

fn f64c(x: &APComplex) -> (f64, f64) {
    x.to_f64_pair()
}

impl Lattice {
    /// Lattice spanned by `ω1, ω2` (any orientation).
    pub fn new(w1: APComplex, w2: APComplex, prec: u32) -> Result<Self> {
        Self::build(w1, w2, None, prec)
    }

    /// `L = Ω·𝔞` with `𝔞 = (ideal)` an ideal of `O_K`.
    pub fn from_cm(field: ImagQuadField, omega: APComplex, ideal: OkElem, prec: u32) -> Result<Self> {
        let g = &omega * &ideal.embed(prec);
        let w2 = &g * &field.omega(prec);
        let tag = CmTag { field, omega, ideal };
        Self::build(g, w2, Some(tag), prec)
    }

    fn build(w1: APComplex, w2: APComplex, cm: Option<CmTag>, prec: u32) -> Result<Self> {
        let (mut w1, mut w2) = (w1.with_prec(prec), w2.with_prec(prec));
        let orient = {
            let (a, b) = f64c(&w1);
            let (c, d) = f64c(&w2);
            a * d - b * c
        };
        if orient == 0.0 || !orient.is_finite() {
            return Err(Error::InvalidInput("degenerate lattice basis".into()));
        }
        if orient < 0.0 {
            w2 = -w2;
        }
        // Gauss reduction driven by double-precision τ
        for _ in 0..200 {
            let tau = f64c(&(&w2 / &w1));
            let n = tau.0.round();
            if n != 0.0 {
                w2 = &w2 - &w1.mul_i64(n as i64);
            }
            let tau = f64c(&(&w2 / &w1));
            if tau.0 * tau.0 + tau.1 * tau.1 < 1.0 - 1e-12 {
                let nw1 = w2.clone();
                w2 = -w1;
                w1 = nw1;
            } else {
                break;
            }
        }
        let tau = &w2 / &w1;
        let c = Self::constants(&w1, &w2, &tau, prec)?;
        let b1 = f64c(&w1);
        let b2 = f64c(&w2);
        let area = (b1.0 * b2.1 - b1.1 * b2.0).abs();
        let d1 = (b1.0 + b2.0).hypot(b1.1 + b2.1);
        let d2 = (b1.0 - b2.0).hypot(b1.1 - b2.1);
        let geo = Geometry { b1, b2, area, delta: d1.max(d2) / 2.0 };
        Ok(Lattice { w1, w2, cm, prec, geo, c })
    }

    fn constants(w1: &APComplex, w2: &APComplex, tau: &APComplex, prec: u32) -> Result<Constants> {
        let q = QSeries::new(tau, prec);
        let pi = APComplex::pi(prec);
        let pi2 = pi.sqr();
        let e2 = q.e2();
        let e4 = q.e4();
        let e6 = q.e6();
        let eta1_tau = (&pi2 * &e2).div_i64(3);
        let half_tau = tau.div_i64(2);
        let eta2_tau = q.zeta(&half_tau, &eta1_tau).mul_i64(2);
        let legendre = &(&(&eta1_tau * tau) - &eta2_tau) - &APComplex::two_pi_i(prec);
        let legendre_residual = legendre.mid_abs();
        if !legendre.contains_zero() {
            return Err(Error::InvalidInput(format!("Legendre relation fails: residual {legendre}")));
        }
        let w1inv = w1.recip();
        let w1inv2 = w1inv.sqr();
        let w1inv4 = w1inv2.sqr();
        let w1inv6 = &w1inv4 * &w1inv2;
        let pi4 = pi2.sqr();
        let g2 = &(&pi4 * &e4).mul_i64(4).div_i64(3) * &w1inv4;
        let g3 = &(&(&pi4 * &pi2) * &e6).mul_i64(8).div_i64(27) * &w1inv6;
        let disc = &q.delta() * &w1inv6.sqr();
        let eta_w1 = &eta1_tau * &w1inv;
        let eta_w2 = &eta2_tau * &w1inv;
        let area = (&w1.conj() * w2).im_part();
        let area_over_pi = &area / &pi;
        let s2 = &(&eta_w1 - &(&w1.conj() / &area_over_pi)) * &w1inv;
        Ok(Constants {
            tau: tau.clone(),
            q,
            eta1_tau,
            eta2_tau,
            g2,
            g3,
            disc,
            eta_w1,
            eta_w2,
            area_over_pi,
            s2,
            legendre_residual,
        })
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Reduced basis `(ω1, ω2)` with `Im(ω2/ω1) > 0`.
    pub fn basis(&self) -> (&APComplex, &APComplex) {
        (&self.w1, &self.w2)
    }

    pub fn tau(&self) -> &APComplex {
        &self.c.tau
    }

    pub fn cm(&self) -> Option<&CmTag> {
        self.cm.as_ref()
    }

    pub fn geometry(&self) -> Geometry {
        self.geo
    }

    /// Basis used for torsion coordinates: `(Ωa, Ωa·ω_K)` for CM lattices,
    /// the reduced basis otherwise.
    pub fn reference_basis(&self) -> (APComplex, APComplex) {
        match &self.cm {
            Some(t) => {
                let g = t.generator(self.prec);
                let w = &g * &t.field.omega(self.prec);
                (g, w)
            }
            None => (self.w1.clone(), self.w2.clone()),
        }
    }

    /// `cL`
    pub fn scaled(&self, c: &APComplex) -> Result<Lattice> {
        match &self.cm {
            Some(t) => Lattice::from_cm(t.field, &t.omega * c, t.ideal, self.prec),
            None => Lattice::new(&self.w1 * c, &self.w2 * c, self.prec),
        }
    }

    /// `x^{-1}·L` for a CM lattice and `x ∈ O_K` nonzero.
    pub fn cm_divided(&self, x: &OkElem) -> Result<Lattice> {
        let t = self.cm.as_ref().ok_or_else(|| Error::InvalidInput("lattice has no CM tag".into()))?;
        Lattice::from_cm(t.field, &t.omega / &x.embed(self.prec), t.ideal, self.prec)
    }

    /// `x·L` for a CM lattice.
    pub fn cm_multiplied(&self, x: &OkElem) -> Result<Lattice> {
        let t = self.cm.as_ref().ok_or_else(|| Error::InvalidInput("lattice has no CM tag".into()))?;
        Lattice::from_cm(t.field, &t.omega * &x.embed(self.prec), t.ideal, self.prec)
    }

    pub fn g2(&self) -> &APComplex {
        &self.c.g2
    }

    pub fn g3(&self) -> &APComplex {
        &self.c.g3
    }

    /// `Δ(L) = ω1^{-12}(2π)^{12} q ∏(1 − q^n)^{24}`.
    pub fn discriminant(&self) -> &APComplex {
        &self.c.disc
    }

    /// `A(L) = Area(C/L)/π`.
    pub fn area_over_pi(&self) -> &APComplex {
        &self.c.area_over_pi
    }

    /// Quasi-periods `(η(ω1), η(ω2))` of the reduced basis.
    pub fn quasi_periods(&self) -> (&APComplex, &APComplex) {
        (&self.c.eta_w1, &self.c.eta_w2)
    }

    /// The constant `s2(L)` with `η(z) = s2·z + z̄/A(L)`.
    pub fn s2(&self) -> &APComplex {
        &self.c.s2
    }

    /// `|η1ω2 − η2ω1 − 2πi|` computed at construction.
    pub fn legendre_residual(&self) -> f64 {
        self.c.legendre_residual
    }

    /// `z/ω1` split as `w0 + n1 + n2·τ` with `w0` in the centred cell.
    fn reduce(&self, z: &APComplex) -> (APComplex, i64, i64) {
        let w = &z.with_prec(self.prec) / &self.w1;
        let tau = f64c(&self.c.tau);
        let wf = f64c(&w);
        let n2 = (wf.1 / tau.1).round();
        let re = wf.0 - n2 * tau.0;
        let n1 = re.round();
        let w0 = &(&w - &self.c.tau.mul_i64(n2 as i64)) - &APComplex::from_i64(n1 as i64, self.prec);
        (w0, n1 as i64, n2 as i64)
    }

    /// `z` reduced modulo `L` into the centred cell, with the lattice vector removed.
    pub fn reduce_mod(&self, z: &APComplex) -> (APComplex, APComplex) {
        let (w0, n1, n2) = self.reduce(z);
        let lat = &self.w1.mul_i64(n1) + &self.w2.mul_i64(n2);
        (&w0 * &self.w1, lat)
    }

    /// True if the ball `z` meets the lattice.
    pub fn contains_point(&self, z: &APComplex) -> bool {
        let (w0, _, _) = self.reduce(z);
        w0.contains_zero()
    }

    /// `(℘(z), ℘′(z))`
    pub fn wp_pair(&self, z: &APComplex) -> Result<(APComplex, APComplex)> {
        let (w0, _, _) = self.reduce(z);
        if w0.contains_zero() {
            return Err(Error::PoleAtLatticePoint);
        }
        let (p, dp) = self.c.q.wp_pair(&w0, &self.c.eta1_tau);
        let wi = self.w1.recip();
        let wi2 = wi.sqr();
        Ok((&p * &wi2, &(&dp * &wi2) * &wi))
    }

    /// `℘, ℘′, …, ℘^{(n)}` at `z`, using `℘″ = 6℘² − g2/2` and its derivatives.
    pub fn wp_derivs(&self, z: &APComplex, n: usize) -> Result<Vec<APComplex>> {
        let (p, dp) = self.wp_pair(z)?;
        let mut d = vec![p, dp];
        if n >= 2 {
            let p2 = &d[0].sqr().mul_i64(6) - &self.c.g2.div_i64(2);
            d.push(p2);
        }
        for m in 1..n.saturating_sub(1) {
            // ℘^{(m+2)} = 6 Σ_r C(m,r) ℘^{(r)} ℘^{(m−r)}
            let mut acc = APComplex::zero(self.prec);
            let mut binom: i64 = 1;
            for r in 0..=m {
                acc = &acc + &(&d[r] * &d[m - r]).mul_i64(binom);
                binom = binom * (m - r) as i64 / (r + 1) as i64;
            }
            d.push(acc.mul_i64(6));
        }
        d.truncate(n + 1);
        Ok(d)
    }

    /// `℘^{(n)}(z, L)`
    pub fn wp(&self, z: &APComplex, n: usize) -> Result<APComplex> {
        Ok(self.wp_derivs(z, n)?.pop().unwrap())
    }

    /// Weierstrass ζ.
    pub fn zeta(&self, z: &APComplex) -> Result<APComplex> {
        let (w0, n1, n2) = self.reduce(z);
        if w0.contains_zero() {
            return Err(Error::PoleAtLatticePoint);
        }
        let zt = self.c.q.zeta(&w0, &self.c.eta1_tau);
        let shift = &self.c.eta_w1.mul_i64(n1) + &self.c.eta_w2.mul_i64(n2);
        Ok(&(&zt / &self.w1) + &shift)
    }

    /// R-linear quasi-period map with `η(ω) = ζ(z+ω) − ζ(z)` on `L`.
    pub fn eta_quasi(&self, z: &APComplex) -> APComplex {
        let w = &z.with_prec(self.prec) / &self.w1;
        let b = &w.im_part() / &self.c.tau.im_part();
        let a = &w.re_part() - &(&b * &self.c.tau.re_part());
        &(&a * &self.c.eta_w1) + &(&b * &self.c.eta_w2)
    }

    /// A logarithm of `σ(z, L)`; the branch is arbitrary but the value is
    /// exact up to `2πi·Z`.
    pub fn log_sigma(&self, z: &APComplex) -> Result<APComplex> {
        let w = &z.with_prec(self.prec) / &self.w1;
        let tau = f64c(&self.c.tau);
        let n2 = (w.to_f64_pair().1 / tau.1).round() as i64;
        let w1 = &w - &self.c.tau.mul_i64(n2);
        if w1.contains_zero() {
            return Err(Error::PoleAtLatticePoint);
        }
        let ls = self.c.q.log_sigma(&w1, &self.c.eta1_tau);
        // σ(w + nτ) = (−1)^n σ(w) exp(n·η2·(w + nτ/2))
        let half = &w1 + &self.c.tau.mul_i64(n2).div_i64(2);
        let mut out = &ls + &(&self.c.eta2_tau.mul_i64(n2) * &half);
        if n2.rem_euclid(2) == 1 {
            out = &out + &APComplex::pi(self.prec).mul_i();
        }
        Ok(&out + &self.w1.ln())
    }

    pub fn sigma(&self, z: &APComplex) -> APComplex {
        match self.log_sigma(z) {
            Ok(l) => l.exp(),
            Err(_) => APComplex::zero(self.prec),
        }
    }
}

/// Real period `Ω_∞ > 0` with `L = Ω_∞·O_K` the period lattice of
/// `dx/(2y)` on `y² = x³ + a4·x + a6`, i.e. `g2(L) = −4a4`, `g3(L) = −4a6`.
pub fn cm_real_period(field: ImagQuadField, a4: &Rational, a6: &Rational, prec: u32) -> Result<APComplex> {
    let wp = prec + 32;
    let base = Lattice::from_cm(field, APComplex::one(wp), field.one(), wp)?;
    let g2 = APComplex::from_rational(a4, wp).mul_i64(-4);
    let g3 = APComplex::from_rational(a6, wp).mul_i64(-4);
    // c^{-4}·g2(O_K) = g2, c^{-6}·g3(O_K) = g3
    let ln_c = if g3.contains_zero() {
        (base.g2() / &g2).ln().div_i64(4)
    } else if g2.contains_zero() {
        (base.g3() / &g3).ln().div_i64(6)
    } else {
        (&(&g2 * base.g3()) / &(&g3 * base.g2())).ln().div_i64(2)
    };
    let c = ln_c.re_part().exp();
    let lat = Lattice::from_cm(field, c.clone(), field.one(), wp)?;
    let ok = |a: &APComplex, b: &APComplex| a.mid_dist(b) <= 1e-20 * (1.0 + b.mid_abs()) + a.err() + b.err();
    if !ok(lat.g2(), &g2) || !ok(lat.g3(), &g3) {
        return Err(Error::InvalidInput("curve has no real period lattice of the form Ω·O_K".into()));
    }
    Ok(c.with_prec(prec))
}

/// `L = Ω_∞·O_K` for a preset curve.
pub fn period_lattice(preset: &crate::field::Preset, prec: u32) -> Result<Lattice> {
    let om = cm_real_period(preset.field, &preset.curve.a4, &preset.curve.a6, prec)?;
    Lattice::from_cm(preset.field, om, preset.field.one(), prec)
}

/// Point `r1·e1 + r2·e2` of `Q⊗L` modulo `L`, in the reference basis.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionPoint {
    pub r1: Rational,
    pub r2: Rational,
}

fn frac(q: &Rational) -> Rational {
    let f = q.clone().floor();
    Rational::from(q - &f)
}

impl TorsionPoint {
    pub fn new(r1: Rational, r2: Rational) -> Self {
        TorsionPoint { r1: frac(&r1), r2: frac(&r2) }
    }

    /// The point `x·(Ωa)` for `x = num/den ∈ K`, `num, den ∈ O_K`.
    pub fn from_quotient(num: &OkElem, den: &OkElem) -> Self {
        let nd = den.norm();
        let p = *num * den.conj();
        TorsionPoint::new(Rational::from((p.a, nd)), Rational::from((p.b, nd)))
    }

    pub fn is_zero(&self) -> bool {
        self.r1 == 0 && self.r2 == 0
    }

    /// Least common denominator of the coordinates.
    pub fn order(&self) -> rug::Integer {
        rug::Integer::from(self.r1.denom().lcm_ref(self.r2.denom()))
    }

    pub fn embed(&self, lattice: &Lattice) -> APComplex {
        let prec = lattice.prec();
        let (e1, e2) = lattice.reference_basis();
        &(&e1 * &APComplex::from_rational(&self.r1, prec)) + &(&e2 * &APComplex::from_rational(&self.r2, prec))
    }
}

#[cfg(test)]
mod tests;
