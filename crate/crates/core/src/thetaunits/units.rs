//! Elliptic units `e_{n,m} = Θ(Ω/(π^n π*^m), L, 𝔞)` and their norm relations.

use rayon::prelude::*;
use serde::Serialize;

use super::{Residual, ThetaAlpha};
use crate::error::{Error, Result};
use crate::field::{IdealRep, OkElem, Preset, RayClassGroup, SplitType};
use crate::lattice::{period_lattice, Lattice, TorsionPoint};
use crate::numerics::APComplex;

/// Data shared by all `e_{n,m}` of one preset.
#[derive(Clone, Debug)]
pub struct UnitTower {
    preset: Preset,
    lattice: Lattice,
    theta: ThetaAlpha,
    /// `ψ(𝔭)` and `ψ(𝔭*)`; the second is absent for a non-split prime
    pi: OkElem,
    pi_star: Option<OkElem>,
}

#[derive(Clone, Debug)]
pub struct EllipticUnit {
    pub n: u32,
    pub m: u32,
    pub value: APComplex,
    /// Generator of `𝔣𝔭^n𝔭*^m`.
    pub modulus: OkElem,
}

impl UnitTower {
    pub fn new(preset: &Preset, prec: u32) -> Result<Self> {
        let lattice = period_lattice(preset, prec)?;
        let theta = ThetaAlpha::new(&lattice, &preset.alpha)?;
        let psi = &preset.psi;
        let (pi, pi_star) = match preset.field.split_type(preset.prime) {
            SplitType::Split(p, ps) => (psi.psi_eval(&p)?, Some(psi.psi_eval(&ps)?)),
            SplitType::Inert(p) => (psi.psi_eval(&p)?, None),
            SplitType::Ramified(_) => {
                return Err(Error::InvalidInput(format!("prime {} ramifies", preset.prime)));
            }
        };
        if !pi.coprime_to(&preset.f()) || !preset.alpha.gen.coprime_to(&pi) {
            return Err(Error::NotCoprime);
        }
        Ok(UnitTower { preset: preset.clone(), lattice, theta, pi, pi_star })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn theta(&self) -> &ThetaAlpha {
        &self.theta
    }

    pub fn preset(&self) -> &Preset {
        &self.preset
    }

    pub fn pi(&self) -> OkElem {
        self.pi
    }

    pub fn pi_star(&self) -> Option<OkElem> {
        self.pi_star
    }

    /// `π^n π*^m`
    pub fn level(&self, n: u32, m: u32) -> Result<OkElem> {
        let mut x = self.pi.pow(n);
        if m > 0 {
            let ps = self.pi_star.ok_or_else(|| Error::InvalidInput("m > 0 needs a split prime".into()))?;
            x = x * ps.pow(m);
        }
        Ok(x)
    }

    /// `f·π^n π*^m`
    pub fn modulus(&self, n: u32, m: u32) -> Result<OkElem> {
        Ok(self.preset.f() * self.level(n, m)?)
    }

    /// The torsion point `x·Ω/(π^n π*^m)` with `Ω = Ω_∞/f`.
    pub fn point(&self, x: &OkElem, n: u32, m: u32) -> Result<APComplex> {
        Ok(TorsionPoint::from_quotient(x, &self.modulus(n, m)?).embed(&self.lattice))
    }

    pub fn unit(&self, n: u32, m: u32) -> Result<EllipticUnit> {
        let one = self.preset.field.one();
        let value = self.theta.eval(&self.point(&one, n, m)?)?.value;
        Ok(EllipticUnit { n, m, value, modulus: self.modulus(n, m)? })
    }

    /// Ideals `𝔠` whose Artin symbols form `Gal(K(𝔣𝔭^{n1}𝔭*^{m1})/K(𝔣𝔭^{n2}𝔭*^{m2}))`.
    pub fn galois_set(&self, n1: u32, m1: u32, n2: u32, m2: u32) -> Result<Vec<IdealRep>> {
        let g1 = RayClassGroup::new(&self.modulus(n1, m1)?)?;
        let g2 = RayClassGroup::new(&self.modulus(n2, m2)?)?;
        let mut out = Vec::new();
        for c in g1.reps() {
            if g2.artin_coset(c)? == 0 {
                out.push(*c);
            }
        }
        Ok(out)
    }
}

pub fn elliptic_unit(n: u32, m: u32, preset: &Preset, prec: u32) -> Result<EllipticUnit> {
    UnitTower::new(preset, prec)?.unit(n, m)
}

/// Outcome of comparing `∏_{𝔠∈B} Θ(ψ(𝔠)Ω/(π^{n1}π*^{m1}), L, 𝔞)` with
/// `e_{n2,m2}` and with the distribution-relation form of the same product.
#[derive(Clone, Debug, Serialize)]
pub struct NormCompat {
    pub from: (u32, u32),
    pub to: (u32, u32),
    pub orbit_size: usize,
    /// Against `e_{n2,m2}`.
    pub residual: Residual,
    /// Against `Θ(Ω/(π^{n1}π*^{m1}), 𝔭^{n2−n1}𝔭*^{m2−m1}L, 𝔞)`.
    pub distribution: Residual,
    #[serde(skip)]
    pub product: APComplex,
    #[serde(skip)]
    pub target: APComplex,
}

impl UnitTower {
    pub fn norm_compat(&self, n1: u32, m1: u32, n2: u32, m2: u32) -> Result<NormCompat> {
        if n1 < n2 || m1 < m2 {
            return Err(Error::InvalidInput(format!("need ({n1},{m1}) ≥ ({n2},{m2})")));
        }
        let target = self.unit(n2, m2)?.value;
        if (n1, m1) == (n2, m2) {
            return Ok(NormCompat {
                from: (n1, m1),
                to: (n2, m2),
                orbit_size: 1,
                residual: Residual::zero(),
                distribution: Residual::zero(),
                product: target.clone(),
                target,
            });
        }
        let b = self.galois_set(n1, m1, n2, m2)?;
        let vals: Vec<APComplex> = b
            .par_iter()
            .map(|c| {
                let pc = self.preset.psi.psi_eval(c)?;
                self.theta.eval(&self.point(&pc, n1, m1)?).map(|t| t.value)
            })
            .collect::<Result<_>>()?;
        let mut product = APComplex::one(self.lattice.prec());
        for v in &vals {
            product = &product * v;
        }
        let one = self.preset.field.one();
        let z = self.point(&one, n1, m1)?;
        let sub = self.lattice.cm_divided(&self.level(n1 - n2, m1 - m2)?)?;
        let dist = ThetaAlpha::new(&sub, &self.preset.alpha)?.eval(&z)?.value;
        Ok(NormCompat {
            from: (n1, m1),
            to: (n2, m2),
            orbit_size: b.len(),
            residual: Residual::between(&product, &target),
            distribution: Residual::between(&product, &dist),
            product,
            target,
        })
    }
}

pub fn norm_compat_check(n1: u32, m1: u32, n2: u32, m2: u32, preset: &Preset, prec: u32) -> Result<NormCompat> {
    UnitTower::new(preset, prec)?.norm_compat(n1, m1, n2, m2)
}
