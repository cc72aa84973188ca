//! Damerell values, the local Tamagawa right-hand sides, the choice of the
//! auxiliary ideal and the Eisenstein-sum identities behind the `j = 0` case.

use rug::Integer;
use serde::Serialize;

use super::{l_auto, l_direct_by_class, l_eisenstein_by_class, KElem, LRoute, LSpec, LValue};
use crate::eisenstein::{eis_alpha_all, eis_holomorphic_all};
use crate::error::{Error, Result};
use crate::field::{IdealRep, Modulus, OkElem, Preset, RayClassGroup, SplitType};
use crate::lattice::{cm_real_period, period_lattice, Lattice, TorsionPoint};
use crate::numerics::{detect_algebraic, APComplex, AlgebraicCandidate, FieldLabel};
use crate::thetaunits::Residual;

pub const DAMERELL_HEIGHT: u64 = 100_000_000;
pub const DAMERELL_TOL: f64 = 1e-30;

fn factorial(n: i64) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

fn real_period(preset: &Preset, prec: u32) -> Result<APComplex> {
    cm_real_period(preset.field, &preset.curve.a4, &preset.curve.a6, prec)
}

/// `2π/√d_K`
fn two_pi_over_sqrt_d(preset: &Preset, prec: u32) -> APComplex {
    &APComplex::pi(prec).mul_i64(2) / &preset.field.sqrt_d(prec)
}

#[derive(Clone, Debug)]
pub struct Damerell {
    pub k: i64,
    pub j: i64,
    pub l: LValue,
    /// `(2π/√d_K)^j Ω_∞^{−(k+j)} L_𝔣(ψ̄^{k+j}, k)`
    pub normalized: APComplex,
    pub candidate: AlgebraicCandidate,
    /// `(2π)^{−j}(4Ω_∞)^{k+j}`, times `√−d_K` when `j` is odd.
    pub archimedean: APComplex,
    pub has_sqrt: bool,
}

pub fn damerell(k: i64, j: i64, preset: &Preset, n: u64, prec: u32) -> Result<Damerell> {
    if j < 0 || j >= k || k - j <= 1 {
        return Err(Error::InvalidInput(format!("need 0 ≤ j < k and k − j > 1, got k = {k}, j = {j}")));
    }
    let om = real_period(preset, prec)?;
    let spec = LSpec::at_zero(k, j, preset.f());
    let l = l_auto(&spec, &preset.psi, &om, n)?;
    let normalized = &(&two_pi_over_sqrt_d(preset, prec).powi(j) * &om.powi(-(k + j))) * &l.value;
    let candidate = detect_algebraic(&normalized, FieldLabel::Rational, DAMERELL_HEIGHT, DAMERELL_TOL)?
        .ok_or_else(|| Error::DetectionFailed(normalized.to_decimal(40)))?;
    let has_sqrt = j % 2 == 1;
    let mut archimedean = &APComplex::pi(prec).mul_i64(2).powi(-j) * &om.mul_i64(4).powi(k + j);
    if has_sqrt {
        archimedean = &archimedean * &preset.field.sqrt_d(prec).mul_i();
    }
    Ok(Damerell { k, j, l, normalized, candidate, archimedean, has_sqrt })
}

/// The prime above `p` used throughout (`ψ(𝔭)`, and `ψ(𝔭*)` when split).
fn prime_data(preset: &Preset, p: u64) -> Result<(OkElem, Option<OkElem>)> {
    if p == 2 {
        return Err(Error::InvalidInput("p must be odd".into()));
    }
    let psi = &preset.psi;
    let (pi, ps) = match preset.field.split_type(p) {
        SplitType::Split(a, b) => (psi.psi_eval(&a)?, Some(psi.psi_eval(&b)?)),
        SplitType::Inert(a) => (psi.psi_eval(&a)?, None),
        SplitType::Ramified(_) => return Err(Error::InvalidInput(format!("{p} ramifies"))),
    };
    if !pi.coprime_to(&preset.f()) {
        return Err(Error::NotCoprime);
    }
    Ok((pi, ps))
}

/// `Nα − ψ^kψ̄^{−j}(α)`
fn alpha_factor(k: i64, j: i64, alpha: &IdealRep, preset: &Preset) -> Result<KElem> {
    let f = preset.field;
    let x = KElem::from_int(preset.psi.psi_eval(alpha)?);
    let rhs = x.pow(k)?.mul(&x.conj().pow(-j)?);
    Ok(KElem::from_int(f.from_int(alpha.norm())).sub(&rhs))
}

#[derive(Clone, Debug)]
pub struct Tamagawa {
    pub k: i64,
    pub j: i64,
    pub p: u64,
    pub alpha: IdealRep,
    pub split: bool,
    /// `ψ(𝔭)`
    pub prime: OkElem,
    /// `Nα − ψ^kψ̄^{−j}(α)` and its `𝔭`-adic valuation.
    pub factor: KElem,
    pub valuation: u32,
    /// Generator of the ideal whose Euler factors are removed.
    pub euler: OkElem,
    pub l: LValue,
    pub value: APComplex,
}

/// Split `p`: `−12·ψ(α)^{−j}(2π/√d_K)^jΩ^{−j−k}(Nα − ψ^kψ̄^{−j}(α))·L_S(ψ̄^{k+j}, k)`
/// with `Ω = Ω_∞/f`, `S = 𝔣𝔭` for `j = 0` and `𝔣𝔭𝔭*` otherwise.
/// Inert `p`: `f^kψ(α)^{−j}(2π/√d_K)^jΩ_∞^{−k−j}(…)·L_{𝔣𝔭}(ψ̄^{k+j}, k)`, up to
/// the unit `d^j`.
pub fn tamagawa_rhs(k: i64, j: i64, p: u64, alpha: &IdealRep, preset: &Preset, n: u64, prec: u32) -> Result<Tamagawa> {
    if k < 1 || j < 0 {
        return Err(Error::InvalidInput(format!("need k ≥ 1, j ≥ 0, got k = {k}, j = {j}")));
    }
    let (pi, ps) = prime_data(preset, p)?;
    let f = preset.f();
    if !alpha.gen.coprime_to(&(f * preset.field.from_int(p as i128))) {
        return Err(Error::NotCoprime);
    }
    let factor = alpha_factor(k, j, alpha, preset)?;
    if factor.is_zero() {
        return Err(Error::InvalidInput("α must be nontrivial: Nα − ψ^kψ̄^{−j}(α) = 0".into()));
    }
    let valuation = factor.valuation(&pi)?;
    let euler = match ps {
        Some(s) if j > 0 => f * pi * s,
        _ => f * pi,
    };
    let om = real_period(preset, prec)?;
    let l = l_auto(&LSpec::at_zero(k, j, euler), &preset.psi, &om, n)?;
    let pa = preset.psi.psi_eval(alpha)?.embed(prec);
    let fe = f.embed(prec);
    let common = &(&pa.powi(-j) * &two_pi_over_sqrt_d(preset, prec).powi(j)) * &(&factor.embed(prec) * &l.value);
    let value = if ps.is_some() {
        let omega = &om / &fe;
        &common * &omega.powi(-j - k).mul_i64(-12)
    } else {
        &common * &(&fe.powi(k) * &om.powi(-k - j))
    };
    Ok(Tamagawa { k, j, p, alpha: *alpha, split: ps.is_some(), prime: pi, factor, valuation, euler, l, value })
}

fn vp(x: i64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    let mut y = x;
    while y % p as i64 == 0 {
        y /= p as i64;
        v += 1;
    }
    Some(v)
}

fn min_opt(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// `e` with `#H^0(K_𝔭, K_𝔭/O_𝔭(ψ^{−k}ψ̄^jχ_cyclo)) = N𝔭^e`, or `None` when the
/// character is trivial on the decomposition group.
///
/// Through local class field theory the character sends a unit `u` of
/// `O_𝔭` to `u^{k−1}` (split) or `u^{k−1}ū^{−j−1}` (inert) and the
/// uniformizer to `ψ(𝔭*)^{j+1}` (split) or the root of unity
/// `ε(p)^{−(k+j)}` (inert); `e` is the least valuation of `χ(g) − 1` over
/// these generators.
pub fn local_h0_exponent(k: i64, j: i64, p: u64, preset: &Preset) -> Result<Option<u32>> {
    let (pi, ps) = prime_data(preset, p)?;
    let pp = p as i64;
    match ps {
        Some(star) => {
            let tame = (k - 1).rem_euclid(pp - 1) == 0;
            let inertia = if tame { vp(k - 1, p).map(|v| v + 1) } else { Some(0) };
            let frob = star.pow((j + 1) as u32) - preset.field.one();
            let frob = if frob.is_zero() { None } else { Some(frob.valuation(&pi)) };
            Ok(min_opt(inertia, frob))
        }
        None => {
            let q = pp * pp - 1;
            let tame = (k - 1 - pp * (j + 1)).rem_euclid(q) == 0;
            let inertia = if tame { min_opt(vp(k - j - 2, p), vp(k + j, p)).map(|v| v + 1) } else { Some(0) };
            let f = preset.field;
            let eps = preset
                .psi
                .psi_elem(&f.from_int(pp as i128))?
                .div_exact(&f.from_int(pp as i128))
                .expect("ε(p) is a unit");
            let e = KElem::from_int(eps).pow(-(k + j))?;
            let frob = if e.num == f.one() && e.den == 1 { None } else { Some(0) };
            Ok(min_opt(inertia, frob))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaSearch {
    pub k: i64,
    pub j: i64,
    pub p: u64,
    pub bound: u64,
    /// `None` when `H^0` is infinite.
    pub local_exponent: Option<u32>,
    /// Ideals `(generator, 𝔭-valuation of Nα − ψ^kψ̄^{−j}(α))` in order of norm.
    pub candidates: Vec<(String, u32)>,
    /// Smallest-norm ideal whose valuation equals the local exponent.
    pub chosen: Option<String>,
    #[serde(skip)]
    pub chosen_ideal: Option<IdealRep>,
}

/// Searches ideals of norm at most `bound`, prime to `6𝔣p`, for one with
/// `|Nα − ψ^kψ̄^{−j}(α)|_𝔭^{−1} = #H^0(K_𝔭, K_𝔭/O_𝔭(ψ^{−k}ψ̄^jχ_cyclo))`.
pub fn alpha_search(k: i64, j: i64, p: u64, preset: &Preset, bound: u64) -> Result<AlphaSearch> {
    let (pi, _) = prime_data(preset, p)?;
    let e = local_h0_exponent(k, j, p, preset)?;
    let f = preset.field;
    let bad = preset.f() * f.from_int(6 * p as i128);
    let mut candidates = Vec::new();
    let mut chosen_ideal = None;
    for a in f.ideals_up_to_norm(bound as i128) {
        if a.is_unit_ideal() || !a.gen.coprime_to(&bad) {
            continue;
        }
        let factor = alpha_factor(k, j, &a, preset)?;
        if factor.is_zero() {
            continue;
        }
        let v = factor.valuation(&pi)?;
        if chosen_ideal.is_none() && Some(v) == e {
            chosen_ideal = Some(a);
        }
        candidates.push((a.gen.to_string(), v));
    }
    Ok(AlphaSearch {
        k,
        j,
        p,
        bound,
        local_exponent: e,
        candidates,
        chosen: chosen_ideal.map(|a| a.gen.to_string()),
        chosen_ideal,
    })
}

/// Two independently computed sides of an identity.
#[derive(Clone, Debug)]
pub struct ChainCheck {
    pub lhs: APComplex,
    pub rhs: APComplex,
    pub residual: Residual,
    /// Number of torsion values summed.
    pub terms: usize,
    pub route: LRoute,
}

/// `Σ_{𝔟∈B} E_k(ψ(α𝔟), 𝔣𝔭^n) = (k−1)!·L_{K_n}(ψ^{−k}, σ_α, 0)`, where `B` is
/// the set of classes of `Cl(𝔣𝔭^n)` with `ψ(𝔟) ≡ 1 mod 𝔭^n` and the right
/// side sums the partial values over the classes with `ψ(𝔠) ≡ ψ(α) mod 𝔭^n`.
pub fn partial_sum_identity(
    n: u32,
    k: i64,
    p: u64,
    alpha: &IdealRep,
    preset: &Preset,
    trunc: u64,
    prec: u32,
) -> Result<ChainCheck> {
    if n < 1 || k < 1 {
        return Err(Error::InvalidInput("need n ≥ 1 and k ≥ 1".into()));
    }
    let (pi, _) = prime_data(preset, p)?;
    let psi = &preset.psi;
    let field = preset.field;
    let pin = pi.pow(n);
    let m = preset.f() * pin;
    if !alpha.gen.coprime_to(&m) {
        return Err(Error::NotCoprime);
    }
    let group = RayClassGroup::new(&m)?;
    let local = Modulus::new(pin);
    let pa = psi.psi_eval(alpha)?;

    let lat = Lattice::from_cm(field, APComplex::one(prec), m, prec)?;
    let mut lhs = APComplex::zero(prec);
    let mut terms = 0;
    for b in group.reps() {
        let pb = psi.psi_eval(b)?;
        if local.congruent(&pb, &field.one()) {
            let z = (pa * pb).embed(prec);
            lhs = &lhs + eis_holomorphic_all(&z, &lat, k as usize)?.last().unwrap();
            terms += 1;
        }
    }

    let spec = LSpec::new(k, k, m);
    let (parts, route) = if spec.converges() {
        (l_direct_by_class(&spec, psi, trunc, prec)?, LRoute::Direct)
    } else {
        (l_eisenstein_by_class(&spec, psi, &real_period(preset, prec)?)?, LRoute::Eisenstein)
    };
    let mut l = APComplex::zero(prec);
    for (c, v) in &parts {
        if local.congruent(&psi.psi_eval(c)?, &pa) {
            l = &l + &v.value;
        }
    }
    let rhs = &l * &APComplex::from_integer(&factorial(k - 1), prec);
    Ok(ChainCheck { residual: Residual::between(&lhs, &rhs), lhs, rhs, terms, route })
}

/// The `j = 0` right-hand side by its value formula (`lhs`) and through the
/// sum `−12/(k−1)!·π^{−nk}·Σ_𝔠 E_k(ψ(𝔠)Ω/π^n, L, α)` over `Cl(𝔣𝔭^n)`
/// (`rhs`), with `L = Ω_∞O_K`, `Ω = Ω_∞/f` and `π = ψ(𝔭)`.
pub fn eisenstein_chain_j0(
    n: u32,
    k: i64,
    p: u64,
    alpha: &IdealRep,
    preset: &Preset,
    trunc: u64,
    prec: u32,
) -> Result<ChainCheck> {
    if n < 1 {
        return Err(Error::InvalidInput("need n ≥ 1".into()));
    }
    let t = tamagawa_rhs(k, 0, p, alpha, preset, trunc, prec)?;
    if !t.split {
        return Err(Error::InvalidInput("the j = 0 chain needs a split prime".into()));
    }
    let lat = period_lattice(preset, prec)?;
    let m = preset.f() * t.prime.pow(n);
    let group = RayClassGroup::new(&m)?;
    let mut sum = APComplex::zero(prec);
    for c in group.reps() {
        let pc = preset.psi.psi_eval(c)?;
        let z = TorsionPoint::from_quotient(&pc, &m).embed(&lat);
        sum = &sum + eis_alpha_all(&z, &lat, alpha, k as usize)?.last().unwrap();
    }
    let pi = t.prime.embed(prec);
    let scale = &pi.powi(-(n as i64) * k).mul_i64(-12) / &APComplex::from_integer(&factorial(k - 1), prec);
    let rhs = &sum * &scale;
    Ok(ChainCheck {
        residual: Residual::between(&t.value, &rhs),
        lhs: t.value,
        rhs,
        terms: group.order(),
        route: t.l.route,
    })
}
