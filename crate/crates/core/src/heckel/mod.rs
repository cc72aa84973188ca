//! Hecke L-values `L_𝔪(ψ̄^w, σ_𝔠, s) = Σ ψ̄(𝔞)^w N𝔞^{-s}` over integral ideals
//! prime to `𝔪𝔣`, optionally restricted to one ray class mod `𝔪`.
//!
//! Two routes: ideal sums, and Eisenstein–Kronecker numbers at the point `Ω`
//! of the lattice `Ω·ψ(𝔠)^{-1}𝔪`, which satisfy
//!
//! ```text
//! N𝔪^{-i}·E_{i,k}(Ω, 𝔠^{-1}𝔪Ω) = (k−1)!·(√d_K/2π)^i·Ω^{i−k}·ψ(𝔠)^{k−i}·L_𝔪(ψ̄^{k−i}, σ_𝔠, k).
//! ```
//!
//! The ideal-sum route splits `|x|^{-2s}` as in the Ewald method: ideals of
//! norm at most `N` are summed against the weight `Q_s(πtN𝔞)` and the smooth
//! remainder is summed over the dual of `𝔪` in closed form, so the result is
//! the full series value rather than a partial sum.

mod cache;
mod special;

use rayon::prelude::*;
use rug::Integer;
use std::fmt;

use crate::eisenstein::{cut_exponent, dual_part, eis, real_tail, real_weight, EisWeight};
use crate::error::{Error, Result};
use crate::field::{HeckeCharacter, IdealRep, OkElem, RayClassGroup};
use crate::lattice::Lattice;
use crate::numerics::APComplex;

pub use cache::{cache_path, IdealTable, CACHE_ENV, CACHE_VERSION};
pub use special::{
    alpha_search, damerell, eisenstein_chain_j0, local_h0_exponent, partial_sum_identity, tamagawa_rhs, AlphaSearch,
    ChainCheck, Damerell, Tamagawa,
};

pub const DEFAULT_TRUNCATION: u64 = 10_000;

/// Element of `K` as `num/den` with `den > 0` and no common rational factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KElem {
    pub num: OkElem,
    pub den: i128,
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl KElem {
    pub fn new(num: OkElem, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let s = den.signum();
        let g = gcd(gcd(num.a, num.b), den).max(1);
        let f = num.field;
        KElem { num: f.elem(s * num.a / g, s * num.b / g), den: s * den / g }
    }

    pub fn from_int(x: OkElem) -> Self {
        KElem { num: x, den: 1 }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, o: &KElem) -> KElem {
        KElem::new(self.num * o.num, self.den * o.den)
    }

    pub fn sub(&self, o: &KElem) -> KElem {
        let f = self.num.field;
        let a = self.num * f.from_int(o.den);
        let b = o.num * f.from_int(self.den);
        KElem::new(a - b, self.den * o.den)
    }

    pub fn inv(&self) -> Result<KElem> {
        if self.is_zero() {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        let n = self.num.norm();
        let f = self.num.field;
        Ok(KElem::new(self.num.conj() * f.from_int(self.den), n))
    }

    pub fn pow(&self, e: i64) -> Result<KElem> {
        let base = if e < 0 { self.inv()? } else { *self };
        let mut r = KElem::from_int(self.num.field.one());
        for _ in 0..e.unsigned_abs() {
            r = r.mul(&base);
        }
        Ok(r)
    }

    pub fn conj(&self) -> KElem {
        KElem { num: self.num.conj(), den: self.den }
    }

    pub fn embed(&self, prec: u32) -> APComplex {
        self.num.embed(prec).div_i64(self.den as i64)
    }

    /// Valuation at the prime ideal generated by `p`; the denominator must be
    /// prime to it.
    pub fn valuation(&self, p: &OkElem) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::InvalidInput("valuation of zero".into()));
        }
        if !self.num.field.from_int(self.den).coprime_to(p) {
            return Err(Error::NotCoprime);
        }
        Ok(self.num.valuation(p))
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

/// `L_𝔪(ψ̄^w, [σ_𝔠], s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LSpec {
    pub w: i64,
    pub s: i64,
    pub modulus: OkElem,
    pub coset: Option<IdealRep>,
}

impl LSpec {
    pub fn new(w: i64, s: i64, modulus: OkElem) -> Self {
        LSpec { w, s, modulus, coset: None }
    }

    /// `L_𝔪(ψ̄^jψ^{-k}, 0)`, which is the series `L_𝔪(ψ̄^{j+k}, k)`.
    pub fn at_zero(k: i64, j: i64, modulus: OkElem) -> Self {
        Self::new(j + k, k, modulus)
    }

    /// The spec whose Eisenstein number is `E_{i,k}`.
    pub fn from_weight(i: i64, k: i64, modulus: OkElem) -> Self {
        Self::new(k - i, k, modulus)
    }

    pub fn in_coset(mut self, c: IdealRep) -> Self {
        self.coset = Some(c);
        self
    }

    /// `s − w/2`; the ideal series converges absolutely iff this exceeds 1.
    pub fn margin(&self) -> f64 {
        self.s as f64 - self.w as f64 / 2.0
    }

    pub fn converges(&self) -> bool {
        self.margin() > 1.0
    }

    /// Modulus whose ray classes partition the ideals being summed.
    pub fn effective_modulus(&self, psi: &HeckeCharacter) -> OkElem {
        let f = *psi.conductor();
        if f.divides(&self.modulus) {
            self.modulus
        } else {
            self.modulus * f
        }
    }

    /// `ψ̄(𝔞)^w·N𝔞^{-s}` exactly.
    pub fn term(&self, a: &IdealRep, psi: &HeckeCharacter) -> Result<KElem> {
        let x = KElem::from_int(psi.psi_eval(a)?);
        let n = KElem::from_int(a.gen.field.from_int(a.norm()));
        Ok(x.conj().pow(self.w)?.mul(&n.pow(-self.s)?))
    }

    /// The same term spelled `ψ̄(𝔞)^{w−s}·ψ(𝔞)^{-s}`, i.e. as a value at 0.
    pub fn term_at_zero(&self, a: &IdealRep, psi: &HeckeCharacter) -> Result<KElem> {
        let x = KElem::from_int(psi.psi_eval(a)?);
        Ok(x.conj().pow(self.w - self.s)?.mul(&x.pow(-self.s)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LRoute {
    Direct,
    Eisenstein,
}

impl fmt::Display for LRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LRoute::Direct => "direct",
            LRoute::Eisenstein => "eisenstein",
        })
    }
}

#[derive(Clone, Debug)]
pub struct LValue {
    /// The tail bound is included in the ball radius.
    pub value: APComplex,
    pub route: LRoute,
    /// Largest ideal norm summed (0 for the Eisenstein route).
    pub truncation: u64,
    pub tail_bound: f64,
    /// The tail bound dominates the value, e.g. no ideal of the coset was
    /// reached.
    pub tail_dominated: bool,
}

impl LValue {
    fn new(value: APComplex, route: LRoute, truncation: u64, tail_bound: f64) -> Self {
        let tail_dominated = tail_bound > 0.0 && tail_bound >= value.mid_abs();
        LValue { value, route, truncation, tail_bound, tail_dominated }
    }

    /// `|a − b|` against the sum of both radii.
    pub fn agreement(&self, other: &LValue) -> (f64, f64) {
        (self.value.mid_dist(&other.value), self.value.err() + other.value.err())
    }
}

/// Ideals of the table prime to `m`, with their ray class and `ψ(𝔞)`.
struct ClassedIdeals {
    group: RayClassGroup,
    /// (class, ψ(𝔞), N𝔞)
    items: Vec<(usize, OkElem, i128)>,
}

fn classify(table: &IdealTable, m: &OkElem, psi: &HeckeCharacter, n: u64) -> Result<ClassedIdeals> {
    let group = RayClassGroup::new(m)?;
    let mut items = Vec::new();
    for a in &table.ideals {
        if a.norm() as u64 > n {
            break;
        }
        if !a.gen.coprime_to(m) {
            continue;
        }
        items.push((group.class_of_elem(&a.gen)?, psi.psi_eval(a)?, a.norm()));
    }
    Ok(ClassedIdeals { group, items })
}

const CHUNK: usize = 256;

/// Per-class sums of `f(ψ(𝔞), N𝔞)`, reduced chunk by chunk in a fixed order.
fn class_sums<F>(items: &[(usize, OkElem, i128)], classes: usize, prec: u32, f: F) -> Vec<APComplex>
where
    F: Fn(&OkElem, i128) -> APComplex + Sync,
{
    let partial: Vec<Vec<APComplex>> = items
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![APComplex::zero(prec); classes];
            for (c, x, n) in chunk {
                acc[*c] = &acc[*c] + &f(x, *n);
            }
            acc
        })
        .collect();
    let mut out = vec![APComplex::zero(prec); classes];
    for p in partial {
        for (o, v) in out.iter_mut().zip(p) {
            *o = &*o + &v;
        }
    }
    out
}

fn classes_of(spec: &LSpec, group: &RayClassGroup, psi: &HeckeCharacter) -> Result<Vec<usize>> {
    match &spec.coset {
        Some(c) => {
            if !psi.conductor().divides(&spec.modulus) {
                return Err(Error::InvalidInput("a coset restriction needs 𝔣 | 𝔪".into()));
            }
            Ok(vec![group.artin_coset(c)?])
        }
        None => Ok((0..group.order()).collect()),
    }
}

/// Bound for `Σ |x|^{-a}` over the points `|x| > r` of a translate of a
/// lattice with covolume `area` and centred cell radius `delta`.
fn power_tail(a: f64, r: f64, delta: f64, area: f64) -> f64 {
    let u0 = r * (1.0 - 1e-9) - 2.0 * delta;
    if u0 <= 0.0 || a <= 2.0 {
        return f64::INFINITY;
    }
    2.0 * std::f64::consts::PI / area * (u0.powf(2.0 - a) / (a - 2.0) + delta * u0.powf(1.0 - a) / (a - 1.0))
}

/// Per-class values of the ideal series through the smoothed splitting.
/// Works for `1 ≤ s ≤ w` whether or not the series converges; where it
/// does not, the value is Hecke's regularisation.
pub(crate) fn ideal_sum_by_class(
    spec: &LSpec,
    psi: &HeckeCharacter,
    n: u64,
    prec: u32,
) -> Result<Vec<(IdealRep, LValue)>> {
    let (w, s) = (spec.w, spec.s);
    if s < 1 || w < s {
        return Err(Error::UnsupportedWeight(s - w, s));
    }
    let field = psi.field();
    let m = spec.effective_modulus(psi);
    let table = IdealTable::load_or_build(field, n);
    let ci = classify(&table, &m, psi, n)?;
    let wanted = classes_of(spec, &ci.group, psi)?;
    let lat = Lattice::from_cm(field, APComplex::one(prec), m, prec)?;
    let geo = lat.geometry();
    let y_cut = cut_exponent(prec, w);
    let t = (1.0 / geo.area).max(1.25 * y_cut / (std::f64::consts::PI * n as f64));
    let pit = &APComplex::pi(prec) * &APComplex::from_f64(t, prec);
    let real = class_sums(&ci.items, ci.group.order(), prec, |x, nx| {
        let xc = x.conj().embed(prec).powi(w);
        let nb = APComplex::from_i64(nx as i64, prec);
        let q = real_weight(s, &(&pit * &nb));
        &(&xc / &nb.powi(s)) * &q
    });
    let tail = real_tail(s, w - s, t, (n as f64).sqrt(), &lat);
    let out: Vec<(IdealRep, LValue)> = wanted
        .par_iter()
        .map(|&c| {
            let rep = ci.group.reps()[c];
            let z = psi.psi_eval(&rep)?.embed(prec);
            let v = &real[c].clone().with_err(tail) + &dual_part(s, w - s, &z, &lat, t, y_cut);
            Ok((rep, LValue::new(v, LRoute::Direct, n, tail)))
        })
        .collect::<Result<_>>()?;
    Ok(out)
}

fn total(parts: Vec<(IdealRep, LValue)>, prec: u32, route: LRoute, n: u64) -> LValue {
    let mut v = APComplex::zero(prec);
    let mut tail = 0.0;
    for (_, l) in &parts {
        v = &v + &l.value;
        tail += l.tail_bound;
    }
    let mut out = LValue::new(v, route, n, tail);
    out.tail_dominated = parts.iter().any(|(_, l)| l.tail_dominated);
    out
}

fn check_direct(spec: &LSpec) -> Result<()> {
    if !spec.converges() {
        return Err(Error::Divergent(spec.margin()));
    }
    Ok(())
}

/// The ideal series of a convergent spec, summed over norms up to `n` with
/// the smoothed splitting; refused when `s − w/2 ≤ 1`. Specs with `w < s`
/// fall back to [`l_partial_sum`].
pub fn l_direct(spec: &LSpec, psi: &HeckeCharacter, n: u64, prec: u32) -> Result<LValue> {
    check_direct(spec)?;
    if spec.w < spec.s {
        return l_partial_sum(spec, psi, n, prec);
    }
    Ok(total(ideal_sum_by_class(spec, psi, n, prec)?, prec, LRoute::Direct, n))
}

/// [`l_direct`] for every class of `Cl(𝔪)`; `spec.coset` is ignored.
pub fn l_direct_by_class(spec: &LSpec, psi: &HeckeCharacter, n: u64, prec: u32) -> Result<Vec<(IdealRep, LValue)>> {
    check_direct(spec)?;
    let mut all = *spec;
    all.coset = None;
    if !psi.conductor().divides(&spec.modulus) {
        return Err(Error::InvalidInput("per-class values need 𝔣 | 𝔪".into()));
    }
    ideal_sum_by_class(&all, psi, n, prec)
}

/// The literal partial sum over ideals of norm at most `n` with an
/// integral-comparison bound on the omitted terms.
pub fn l_partial_sum(spec: &LSpec, psi: &HeckeCharacter, n: u64, prec: u32) -> Result<LValue> {
    check_direct(spec)?;
    let field = psi.field();
    let m = spec.effective_modulus(psi);
    let table = IdealTable::load_or_build(field, n);
    let ci = classify(&table, &m, psi, n)?;
    let wanted = classes_of(spec, &ci.group, psi)?;
    let sums = class_sums(&ci.items, ci.group.order(), prec, |x, nx| {
        let xc = x.conj().embed(prec).powi(spec.w);
        &xc / &APComplex::from_i64(nx as i64, prec).powi(spec.s)
    });
    let lat = Lattice::from_cm(field, APComplex::one(prec), m, prec)?;
    let geo = lat.geometry();
    let a = (2 * spec.s - spec.w) as f64;
    let tail = power_tail(a, (n as f64).sqrt(), geo.delta, geo.area);
    let parts = wanted
        .iter()
        .map(|&c| (ci.group.reps()[c], LValue::new(sums[c].clone().with_err(tail), LRoute::Direct, n, tail)))
        .collect();
    Ok(total(parts, prec, LRoute::Direct, n))
}

fn factorial(n: i64) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

/// Partial `L_𝔪(ψ̄^{k−i}, σ_𝔠, k)` from `E_{i,k}(Ω, 𝔠^{-1}𝔪Ω)`.
pub fn l_via_eisenstein(
    i: i64,
    k: i64,
    m: &OkElem,
    c: &IdealRep,
    omega: &APComplex,
    psi: &HeckeCharacter,
) -> Result<LValue> {
    let w = EisWeight::new(i, k)?;
    if !psi.conductor().divides(m) {
        return Err(Error::InvalidInput("the Eisenstein route needs 𝔣 | 𝔪".into()));
    }
    if !c.gen.coprime_to(m) {
        return Err(Error::NotCoprime);
    }
    let prec = omega.prec();
    let field = psi.field();
    let pc = psi.psi_eval(c)?.embed(prec);
    let lat = Lattice::from_cm(field, omega / &pc, *m, prec)?;
    let e = eis(w, omega, &lat)?;
    let nm = APComplex::from_i64(m.norm() as i64, prec);
    let ratio = &(&field.sqrt_d(prec) / &APComplex::pi(prec)).div_i64(2);
    let scale =
        &(&(&APComplex::from_integer(&factorial(k - 1), prec) * &ratio.powi(i)) * &omega.powi(i - k)) * &pc.powi(k - i);
    let v = &(&e * &nm.powi(-i)) / &scale;
    Ok(LValue::new(v, LRoute::Eisenstein, 0, 0.0))
}

/// [`l_via_eisenstein`] for a spec, summing over the classes of the
/// effective modulus when no coset is given.
pub fn l_eisenstein(spec: &LSpec, psi: &HeckeCharacter, omega: &APComplex) -> Result<LValue> {
    let (i, k) = (spec.s - spec.w, spec.s);
    let prec = omega.prec();
    match &spec.coset {
        Some(c) => l_via_eisenstein(i, k, &spec.modulus, c, omega, psi),
        None => Ok(total(l_eisenstein_by_class(spec, psi, omega)?, prec, LRoute::Eisenstein, 0)),
    }
}

/// [`l_via_eisenstein`] for every class of the effective modulus.
pub fn l_eisenstein_by_class(spec: &LSpec, psi: &HeckeCharacter, omega: &APComplex) -> Result<Vec<(IdealRep, LValue)>> {
    let (i, k) = (spec.s - spec.w, spec.s);
    let m = spec.effective_modulus(psi);
    let group = RayClassGroup::new(&m)?;
    group.reps().par_iter().map(|c| Ok((*c, l_via_eisenstein(i, k, &m, c, omega, psi)?))).collect()
}

/// Direct route when the series converges, otherwise Eisenstein.
pub fn l_auto(spec: &LSpec, psi: &HeckeCharacter, omega: &APComplex, n: u64) -> Result<LValue> {
    if spec.converges() {
        l_direct(spec, psi, n, omega.prec())
    } else {
        l_eisenstein(spec, psi, omega)
    }
}

#[cfg(test)]
mod tests;
