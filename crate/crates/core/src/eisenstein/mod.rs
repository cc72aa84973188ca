//! Eisenstein–Kronecker numbers `E_{i,k}(z, L)`, their α-modified versions,
//! the Galois action on torsion values and the polynomials `Φ_{i,k}`.

mod ewald;
mod phi;

use rug::Integer;

use crate::error::{Error, Result};
use crate::field::{HeckeCharacter, IdealRep};
use crate::lattice::{Lattice, TorsionPoint};
use crate::numerics::APComplex;

pub use ewald::kronecker_sum;
pub(crate) use ewald::{cut_exponent, dual_part, real_tail, real_weight};
pub use phi::{fit_phi, phi_samples, IsobaricPoly, PhiFit};

/// Weight `(i, k)` with `0 ≤ −i < k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EisWeight {
    pub i: i64,
    pub k: i64,
}

impl EisWeight {
    pub fn new(i: i64, k: i64) -> Result<Self> {
        if i > 0 || -i >= k {
            return Err(Error::UnsupportedWeight(i, k));
        }
        Ok(EisWeight { i, k })
    }

    pub fn holomorphic(k: i64) -> Result<Self> {
        Self::new(0, k)
    }

    /// `k − i`
    pub fn total(&self) -> i64 {
        self.k - self.i
    }
}

fn factorial(n: i64) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

/// `E_1(z, L) = ζ(z) − s2(L)·z − z̄/A(L)`.
pub fn e1(z: &APComplex, lattice: &Lattice) -> Result<APComplex> {
    let zeta = lattice.zeta(z)?;
    let lin = lattice.s2() * z;
    let anti = &z.conj() / lattice.area_over_pi();
    Ok(&(&zeta - &lin) - &anti)
}

/// `E_k(z, L)` for `k ≥ 1`: `E_1` above, `E_2 = ℘ + s2`, and
/// `E_k = (−1)^k ℘^{(k−2)}` for `k ≥ 3`.
pub fn eis_holomorphic_all(z: &APComplex, lattice: &Lattice, kmax: usize) -> Result<Vec<APComplex>> {
    let mut out = vec![e1(z, lattice)?];
    if kmax >= 2 {
        let d = lattice.wp_derivs(z, kmax - 2)?;
        for (n, v) in d.into_iter().enumerate() {
            let k = n + 2;
            let mut e = if k % 2 == 0 { v } else { -v };
            if k == 2 {
                e = &e + lattice.s2();
            }
            out.push(e);
        }
    }
    out.truncate(kmax);
    Ok(out)
}

/// `E_{i,k}(z, L) = (k−1)!·A(L)^i·Σ (z+ω)^{-k}(z̄+ω̄)^{-i}`, Hecke-regularised
/// when `k + i < 3`.
pub fn eis(w: EisWeight, z: &APComplex, lattice: &Lattice) -> Result<APComplex> {
    EisWeight::new(w.i, w.k)?;
    if w.i == 0 {
        return Ok(eis_holomorphic_all(z, lattice, w.k as usize)?.pop().unwrap());
    }
    eis_ewald(w, z, lattice)
}

/// The same value through the Ewald representation for every weight.
pub fn eis_ewald(w: EisWeight, z: &APComplex, lattice: &Lattice) -> Result<APComplex> {
    let s = kronecker_sum(w.k, -w.i, z, lattice)?;
    let f = APComplex::from_integer(&factorial(w.k - 1), lattice.prec());
    Ok(&(&f * &lattice.area_over_pi().powi(w.i)) * &s)
}

/// `N𝔞·E_{i,k}(z, L) − E_{i,k}(z, 𝔞^{-1}L)` for a CM lattice.
pub fn eis_alpha(w: EisWeight, z: &APComplex, lattice: &Lattice, a: &IdealRep) -> Result<APComplex> {
    let sub = lattice.cm_divided(&a.gen)?;
    let n = a.norm() as i64;
    Ok(&eis(w, z, lattice)?.mul_i64(n) - &eis(w, z, &sub)?)
}

/// `E_k(z, L, 𝔞)` for `k = 1..=kmax`.
pub fn eis_alpha_all(z: &APComplex, lattice: &Lattice, a: &IdealRep, kmax: usize) -> Result<Vec<APComplex>> {
    let sub = lattice.cm_divided(&a.gen)?;
    let n = a.norm() as i64;
    let top = eis_holomorphic_all(z, lattice, kmax)?;
    let bot = eis_holomorphic_all(z, &sub, kmax)?;
    Ok(top.iter().zip(&bot).map(|(x, y)| &x.mul_i64(n) - y).collect())
}

/// `ψ(𝔠)^{i−k}·E_{i,k}(z, 𝔠^{-1}L)`, the action of `σ_𝔠` on the torsion value
/// `E_{i,k}(z, L)`.
pub fn galois_eis_at(
    w: EisWeight,
    z: &APComplex,
    lattice: &Lattice,
    c: &IdealRep,
    psi: &HeckeCharacter,
) -> Result<APComplex> {
    let pc = psi.psi_eval(c)?;
    let sub = lattice.cm_divided(&pc)?;
    let factor = pc.embed(lattice.prec()).powi(w.i - w.k);
    Ok(&factor * &eis(w, z, &sub)?)
}

/// [`galois_eis_at`] at a torsion point; `𝔠` must be prime to the order of `v`.
pub fn galois_eis(
    w: EisWeight,
    v: &TorsionPoint,
    lattice: &Lattice,
    c: &IdealRep,
    psi: &HeckeCharacter,
) -> Result<APComplex> {
    let order = v.order();
    if Integer::from(c.norm()).gcd(&order) != 1 {
        return Err(Error::NotCoprime);
    }
    galois_eis_at(w, &v.embed(lattice), lattice, c, psi)
}

#[cfg(test)]
mod tests;
