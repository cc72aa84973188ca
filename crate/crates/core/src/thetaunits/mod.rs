//! The theta function `θ(z, L)`, the quotient `Θ(z, L, 𝔞)`, distribution
//! relations and elliptic units.

mod coleman;
mod units;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{HeckeCharacter, IdealRep, Modulus, OkElem, RayClassGroup};
use crate::lattice::{Lattice, TorsionPoint};
use crate::numerics::{detect_algebraic, APComplex, AlgebraicCandidate, FieldLabel};

pub use coleman::{coleman_interpolation_check, ColemanCheck};
pub use units::{elliptic_unit, norm_compat_check, EllipticUnit, NormCompat, UnitTower};

/// Distance between two computed values together with their combined radius.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Residual {
    pub residual: f64,
    /// `residual/|b|` for the reference value `b`.
    pub relative: f64,
    pub radius: f64,
}

impl Residual {
    /// `a` measured against the reference value `b`.
    pub fn between(a: &APComplex, b: &APComplex) -> Self {
        let residual = a.mid_dist(b);
        let relative = a.mid_rel_dist(b);
        Residual { residual, relative, radius: a.err() + b.err() }
    }

    pub fn zero() -> Self {
        Residual { residual: 0.0, relative: 0.0, radius: 0.0 }
    }
}

/// A logarithm of `θ(z, L) = Δ(L)·e^{−6η(z,L)z}·σ(z, L)^{12}`.
pub fn log_theta(z: &APComplex, lattice: &Lattice) -> Result<APComplex> {
    let ls = lattice.log_sigma(z)?;
    let eta = lattice.eta_quasi(z);
    let d = lattice.discriminant().ln();
    Ok(&(&d - &(&eta * z).mul_i64(6)) + &ls.mul_i64(12))
}

/// `θ(z, L)`; zero on the lattice.
pub fn theta(z: &APComplex, lattice: &Lattice) -> APComplex {
    match log_theta(z, lattice) {
        Ok(l) => l.exp(),
        Err(_) => APComplex::zero(lattice.prec()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaPath {
    SigmaFormula,
    WpProduct,
}

/// `Θ(z, L, 𝔞)` with the value of the second formula kept for comparison.
#[derive(Clone, Debug)]
pub struct ThetaValue {
    pub value: APComplex,
    pub path: ThetaPath,
    pub alternate: APComplex,
}

impl ThetaValue {
    pub fn disagreement(&self) -> Residual {
        Residual::between(&self.value, &self.alternate)
    }
}

/// Precomputed data for `z ↦ Θ(z, L, 𝔞)` on a CM lattice.
#[derive(Clone, Debug)]
pub struct ThetaAlpha {
    lattice: Lattice,
    sub: Lattice,
    alpha: IdealRep,
    konst: APComplex,
    wp_u: Vec<(APComplex, i64)>,
}

impl ThetaAlpha {
    pub fn new(lattice: &Lattice, alpha: &IdealRep) -> Result<Self> {
        if lattice.cm().is_none() {
            return Err(Error::InvalidInput("Θ(z, L, 𝔞) needs a CM lattice".into()));
        }
        let sub = lattice.cm_divided(&alpha.gen)?;
        let n = alpha.norm();
        let konst = &lattice.discriminant().powi(n as i64) / sub.discriminant();
        // u = x/α in α^{-1}L/L, u and −u grouped
        let modulus = Modulus::new(alpha.gen);
        let mut wp_u = Vec::new();
        for idx in 1..modulus.norm() as usize {
            let x = modulus.residue_from_index(idx);
            let neg = modulus.index(&-x);
            if neg < idx {
                continue;
            }
            let mult = if neg == idx { 6 } else { 12 };
            let u = TorsionPoint::from_quotient(&x, &alpha.gen).embed(lattice);
            wp_u.push((lattice.wp(&u, 0)?, mult));
        }
        Ok(ThetaAlpha { lattice: lattice.clone(), sub, alpha: *alpha, konst, wp_u })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn alpha(&self) -> &IdealRep {
        &self.alpha
    }

    /// `Δ(L)^{N𝔞}/Δ(𝔞^{-1}L)`
    pub fn constant(&self) -> &APComplex {
        &self.konst
    }

    /// `(℘(u, L), multiplicity)` over `u ∈ 𝔞^{-1}L/L ∖ 0` modulo `±1`; the
    /// multiplicity is the exponent of `(℘(z) − ℘(u))^{-1}` in `Θ`.
    pub fn wp_torsion(&self) -> &[(APComplex, i64)] {
        &self.wp_u
    }

    /// A logarithm of `Θ` through `θ(z,L)^{N𝔞}/θ(z, 𝔞^{-1}L)`.
    pub fn log_sigma_path(&self, z: &APComplex) -> Result<APComplex> {
        let n = self.alpha.norm() as i64;
        let top = log_theta(z, &self.lattice)?;
        let bot = log_theta(z, &self.sub)?;
        Ok(&top.mul_i64(n) - &bot)
    }

    pub fn sigma_path(&self, z: &APComplex) -> Result<APComplex> {
        Ok(self.log_sigma_path(z)?.exp())
    }

    /// `Θ` as a function of `x = ℘(z, L)`.
    pub fn from_wp(&self, x: &APComplex) -> APComplex {
        let mut acc = self.konst.clone();
        for (pu, mult) in &self.wp_u {
            acc = &acc * &(x - pu).powi(-mult);
        }
        acc
    }

    /// `Δ(L)/Δ(𝔞^{-1}L)·∏′ Δ(L)/(℘(z,L) − ℘(u,L))^6`
    pub fn product_path(&self, z: &APComplex) -> Result<APComplex> {
        Ok(self.from_wp(&self.lattice.wp(z, 0)?))
    }

    /// Both paths, checked against each other.
    pub fn eval(&self, z: &APComplex) -> Result<ThetaValue> {
        let prec = self.lattice.prec();
        if self.lattice.contains_point(z) {
            let zero = APComplex::zero(prec);
            return Ok(ThetaValue { value: zero.clone(), path: ThetaPath::SigmaFormula, alternate: zero });
        }
        if self.sub.contains_point(z) {
            return Err(Error::PoleAtLatticePoint);
        }
        let a = self.sigma_path(z)?;
        let b = self.product_path(z)?;
        let r = Residual::between(&a, &b);
        if r.residual > r.radius {
            return Err(Error::PathDisagreement(r.residual, r.radius));
        }
        Ok(ThetaValue { value: a, path: ThetaPath::SigmaFormula, alternate: b })
    }

    /// Distance from `z` to the zeros and poles of `Θ`, i.e. to `𝔞^{-1}L`.
    pub fn singular_distance(&self, z: &APComplex) -> f64 {
        lattice_distance(&self.sub, z)
    }

    /// `(d/dz)^k log Θ(z, L, 𝔞)` for `k = 1..=kmax`, from samples of `log Θ`
    /// on a circle of radius `r` around `z` (the trapezoidal Cauchy formula,
    /// a finite-difference stencil of order `points`). The sample count is
    /// doubled until consecutive samples differ by less than one radian, so
    /// the branch of the logarithm can be followed along the circle.
    pub fn log_derivatives(&self, z: &APComplex, kmax: usize, points: usize) -> Result<Vec<APComplex>> {
        let prec = self.lattice.prec();
        let r = self.singular_distance(z) / 4.0;
        let rb = APComplex::from_f64(r, prec);
        let two_pi_i = APComplex::two_pi_i(prec);
        let two_pi = std::f64::consts::PI * 2.0;
        let mut points = points.max(8);
        let (samples, vals) = loop {
            let samples: Vec<(APComplex, APComplex)> = (0..points)
                .into_par_iter()
                .map(|j| {
                    let e = two_pi_i.mul_i64(j as i64).div_i64(points as i64).exp();
                    let zeta = z + &(&rb * &e);
                    self.log_sigma_path(&zeta).map(|v| (e, v))
                })
                .collect::<Result<_>>()?;
            let mut vals: Vec<APComplex> = Vec::with_capacity(points);
            let mut worst: f64 = 0.0;
            for (_, v) in &samples {
                let v = match vals.last() {
                    None => v.clone(),
                    Some(p) => {
                        let jump = ((v.im().to_f64() - p.im().to_f64()) / two_pi).round() as i64;
                        let v = v - &two_pi_i.mul_i64(jump);
                        worst = worst.max(v.mid_dist(p));
                        v
                    }
                };
                vals.push(v);
            }
            worst = worst.max(vals[0].mid_dist(&vals[points - 1]));
            if worst < 1.0 || points >= 1 << 14 {
                break (samples, vals);
            }
            points *= 2;
        };
        let mut out = Vec::with_capacity(kmax);
        let mut fact = APComplex::one(prec);
        for k in 1..=kmax {
            fact = fact.mul_i64(k as i64);
            let mut acc = APComplex::zero(prec);
            for ((e, _), v) in samples.iter().zip(&vals) {
                acc = &acc + &(v * &e.powi(-(k as i64)));
            }
            let d = &(&acc * &fact) / &rb.powi(k as i64).mul_i64(points as i64);
            out.push(d);
        }
        Ok(out)
    }
}

/// Distance (as an `f64`) from `z` to the nearest point of `L`.
pub fn lattice_distance(lattice: &Lattice, z: &APComplex) -> f64 {
    let (w0, _) = lattice.reduce_mod(z);
    let (a, b) = w0.to_f64_pair();
    let g = lattice.geometry();
    let mut best = f64::INFINITY;
    for n1 in -1i64..=1 {
        for n2 in -1i64..=1 {
            let x = a - n1 as f64 * g.b1.0 - n2 as f64 * g.b2.0;
            let y = b - n1 as f64 * g.b1.1 - n2 as f64 * g.b2.1;
            best = best.min(x.hypot(y));
        }
    }
    best
}

/// `Θ(z, L, 𝔞)` through both formulas.
pub fn theta_alpha(z: &APComplex, lattice: &Lattice, alpha: &IdealRep) -> Result<ThetaValue> {
    ThetaAlpha::new(lattice, alpha)?.eval(z)
}

/// Points `x/β` of `𝔟^{-1}L/L` for a CM lattice, `x` running over `O_K/(β)`.
pub fn division_points(lattice: &Lattice, b: &OkElem) -> Vec<APComplex> {
    let modulus = Modulus::new(*b);
    (0..modulus.norm() as usize)
        .map(|i| TorsionPoint::from_quotient(&modulus.residue_from_index(i), b).embed(lattice))
        .collect()
}

/// `|∏_{v ∈ 𝔟^{-1}L/L} Θ(z+v, L, 𝔞) − Θ(z, 𝔟^{-1}L, 𝔞)|`.
pub fn distribution_check(b: &IdealRep, z: &APComplex, lattice: &Lattice, alpha: &IdealRep) -> Result<Residual> {
    if !b.gen.coprime_to(&alpha.gen) {
        return Err(Error::NotCoprime);
    }
    if b.is_unit_ideal() {
        return Ok(Residual::zero());
    }
    let th = ThetaAlpha::new(lattice, alpha)?;
    let vals: Vec<APComplex> = division_points(lattice, &b.gen)
        .par_iter()
        .map(|v| th.eval(&(z + v)).map(|t| t.value))
        .collect::<Result<_>>()?;
    let mut lhs = APComplex::one(lattice.prec());
    for v in &vals {
        lhs = &lhs * v;
    }
    let rhs = ThetaAlpha::new(&lattice.cm_divided(&b.gen)?, alpha)?.eval(z)?.value;
    Ok(Residual::between(&lhs, &rhs))
}

/// `∏_σ Θ(v, L, 𝔞)^σ` over `Gal(K(𝔪𝔣)/K)`, realised as `Θ(ψ(𝔠)v, L, 𝔞)` for
/// `𝔠` running over `Cl(𝔪𝔣)`, where `v = num/m` in the reference basis of
/// `L`. This is a power of the norm from `K(𝔪)` to `K`.
pub fn galois_norm(
    num: &OkElem,
    m: &OkElem,
    lattice: &Lattice,
    alpha: &IdealRep,
    psi: &HeckeCharacter,
) -> Result<APComplex> {
    let modulus = *m * *psi.conductor();
    let group = RayClassGroup::new(&modulus)?;
    let th = ThetaAlpha::new(lattice, alpha)?;
    let vals: Vec<APComplex> = group
        .reps()
        .par_iter()
        .map(|c| {
            let pc = psi.psi_eval(c)?;
            let v = TorsionPoint::from_quotient(&(pc * *num), m).embed(lattice);
            th.eval(&v).map(|t| t.value)
        })
        .collect::<Result<_>>()?;
    let mut acc = APComplex::one(lattice.prec());
    for v in &vals {
        acc = &acc * v;
    }
    Ok(acc)
}

/// [`galois_norm`] recognised as an element of `K`.
pub fn detect_galois_norm(
    num: &OkElem,
    m: &OkElem,
    lattice: &Lattice,
    alpha: &IdealRep,
    psi: &HeckeCharacter,
    height: u64,
    tol: f64,
) -> Result<Option<AlgebraicCandidate>> {
    let x = galois_norm(num, m, lattice, alpha, psi)?;
    detect_algebraic(&x, FieldLabel::Quadratic(psi.field()), height, tol)
}
