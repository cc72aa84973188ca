//! Imaginary quadratic fields of class number one, their rings of integers,
//! the Hecke character ψ and small ray class groups.

mod preset;

pub use preset::{CurveData, Preset, PresetFile};

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::APComplex;

/// Discriminants `-d` of the nine imaginary quadratic fields with class number one.
pub const CLASS_NUMBER_ONE: [u32; 9] = [3, 4, 7, 8, 11, 19, 43, 67, 163];

/// Default cap on `N𝔪` for ray class enumeration.
pub const RAY_CLASS_CAP: u64 = 10_000;

/// `K = Q(√-d_K)`. The ring of integers is `Z[ω]` with `ω = i` for `d_K = 4`,
/// `ω = √-2` for `d_K = 8` and `ω = (1 + √-d_K)/2` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImagQuadField {
    d_k: u32,
}

impl ImagQuadField {
    pub fn new(d_k: u32) -> Result<Self> {
        if CLASS_NUMBER_ONE.contains(&d_k) {
            Ok(ImagQuadField { d_k })
        } else {
            Err(Error::InvalidInput(format!("d_K = {d_k} is not a class-number-one discriminant")))
        }
    }

    pub fn d_k(&self) -> u32 {
        self.d_k
    }

    /// `ω² = t·ω − n`; returns `(t, n)`.
    pub fn min_poly(&self) -> (i128, i128) {
        match self.d_k {
            4 => (0, 1),
            8 => (0, 2),
            d => (1, (1 + d as i128) / 4),
        }
    }

    pub fn elem(&self, a: i128, b: i128) -> OkElem {
        OkElem { a, b, field: *self }
    }

    pub fn zero(&self) -> OkElem {
        self.elem(0, 0)
    }

    pub fn one(&self) -> OkElem {
        self.elem(1, 0)
    }

    pub fn from_int(&self, a: i128) -> OkElem {
        self.elem(a, 0)
    }

    /// Number of roots of unity `w_K`.
    pub fn unit_count(&self) -> usize {
        match self.d_k {
            3 => 6,
            4 => 4,
            _ => 2,
        }
    }

    /// Roots of unity as powers of a fixed generator ζ: index `j` is `ζ^j`.
    pub fn units(&self) -> Vec<OkElem> {
        match self.d_k {
            3 => {
                let z = self.elem(0, 1);
                let mut out = vec![self.one()];
                for j in 1..6 {
                    out.push(out[j - 1] * z);
                }
                out
            }
            4 => vec![self.elem(1, 0), self.elem(0, 1), self.elem(-1, 0), self.elem(0, -1)],
            _ => vec![self.elem(1, 0), self.elem(-1, 0)],
        }
    }

    /// Complex embedding of `ω` with positive imaginary part.
    pub fn omega(&self, prec: u32) -> APComplex {
        let (t, _) = self.min_poly();
        let sq = APComplex::from_i64(self.d_k as i64, prec).sqrt().mul_i().div_i64(2);
        if t == 0 {
            sq
        } else {
            &APComplex::from_f64(0.5, prec) + &sq
        }
    }

    pub fn embed(&self, x: &OkElem, prec: u32) -> APComplex {
        let a = APComplex::from_integer(&Integer::from(x.a), prec);
        let b = APComplex::from_integer(&Integer::from(x.b), prec);
        &a + &(&b * &self.omega(prec))
    }

    /// `√d_K` as a real ball.
    pub fn sqrt_d(&self, prec: u32) -> APComplex {
        APComplex::from_i64(self.d_k as i64, prec).sqrt()
    }

    /// Kronecker symbol `(-d_K / p)` classification.
    pub fn split_type(&self, p: u64) -> SplitType {
        let d = self.d_k as i128;
        let p128 = p as i128;
        let ramified = if p == 2 { self.d_k.is_multiple_of(2) } else { d % p128 == 0 };
        if ramified {
            let g = self.find_elem_of_norm(p128).expect("ramified prime has a generator");
            return SplitType::Ramified(IdealRep::new(g));
        }
        let split = if p == 2 { self.d_k % 8 == 7 } else { legendre((-d).rem_euclid(p128), p128) == 1 };
        if split {
            let g = self.find_elem_of_norm(p128).expect("split prime has a generator");
            let a = IdealRep::new(g);
            let b = IdealRep::new(g.conj());
            let (p1, p2) = if (a.gen.a, a.gen.b) >= (b.gen.a, b.gen.b) { (a, b) } else { (b, a) };
            SplitType::Split(p1, p2)
        } else {
            SplitType::Inert(IdealRep::new(self.from_int(p128)))
        }
    }

    /// Some element of norm exactly `m`, if one exists.
    pub fn find_elem_of_norm(&self, m: i128) -> Option<OkElem> {
        let (t, n) = self.min_poly();
        // 4·N(a + bω) = (2a + tb)² + (4n − t²)b²
        let disc = 4 * n - t * t;
        let bmax = ((4 * m) as f64 / disc as f64).sqrt() as i128 + 1;
        for b in 0..=bmax {
            let rest = 4 * m - disc * b * b;
            if rest < 0 {
                break;
            }
            let s = isqrt(rest);
            if s * s != rest {
                continue;
            }
            for sgn in [1, -1] {
                let two_a = sgn * s - t * b;
                if two_a % 2 == 0 {
                    let x = self.elem(two_a / 2, b);
                    if x.norm() == m {
                        return Some(x);
                    }
                }
            }
        }
        None
    }

    /// All nonzero elements with norm at most `bound`, in order of norm then
    /// coordinates.
    pub fn elements_up_to_norm(&self, bound: i128) -> Vec<OkElem> {
        let (t, n) = self.min_poly();
        let disc = 4 * n - t * t;
        let bmax = ((4 * bound) as f64 / disc as f64).sqrt() as i128 + 1;
        let mut out = Vec::new();
        for b in -bmax..=bmax {
            let rest = 4 * bound - disc * b * b;
            if rest < 0 {
                continue;
            }
            let s = isqrt(rest) + 1;
            let lo = (-s - t * b).div_euclid(2) - 1;
            let hi = (s - t * b).div_euclid(2) + 1;
            for a in lo..=hi {
                let x = self.elem(a, b);
                let nx = x.norm();
                if nx > 0 && nx <= bound {
                    out.push(x);
                }
            }
        }
        out.sort_by_key(|x| (x.norm(), x.a, x.b));
        out
    }

    /// Integral ideals of norm at most `bound` as normalized generators.
    pub fn ideals_up_to_norm(&self, bound: i128) -> Vec<IdealRep> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for x in self.elements_up_to_norm(bound) {
            let r = IdealRep::new(x);
            if seen.insert((r.gen.a, r.gen.b)) {
                out.push(r);
            }
        }
        out.sort_by_key(|r| (r.norm(), r.gen.a, r.gen.b));
        out
    }
}

pub(crate) fn isqrt(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn legendre(a: i128, p: i128) -> i32 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let r = Integer::from(a).pow_mod(&Integer::from((p - 1) / 2), &Integer::from(p)).unwrap();
    if r == 1 {
        1
    } else {
        -1
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return if a >= 0 { (a, 1, 0) } else { (-a, -1, 0) };
    }
    let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
    (g, y, x - a.div_euclid(b) * y)
}

/// Element `a + b·ω` of `O_K`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct OkElem {
    pub a: i128,
    pub b: i128,
    pub field: ImagQuadField,
}

impl fmt::Debug for OkElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for OkElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = if self.field.d_k == 4 { "i" } else { "w" };
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}{w}"),
            (a, b) if b < 0 => write!(f, "{a}{b}{w}"),
            (a, b) => write!(f, "{a}+{b}{w}"),
        }
    }
}

impl OkElem {
    pub fn norm(&self) -> i128 {
        let (t, n) = self.field.min_poly();
        self.a * self.a + t * self.a * self.b + n * self.b * self.b
    }

    pub fn trace(&self) -> i128 {
        let (t, _) = self.field.min_poly();
        2 * self.a + t * self.b
    }

    /// Complex conjugate; `ω̄ = t − ω`.
    pub fn conj(&self) -> OkElem {
        let (t, _) = self.field.min_poly();
        self.field.elem(self.a + t * self.b, -self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    pub fn pow(&self, e: u32) -> OkElem {
        let mut r = self.field.one();
        for _ in 0..e {
            r = r * *self;
        }
        r
    }

    /// `self / d` if the quotient lies in `O_K`.
    pub fn div_exact(&self, d: &OkElem) -> Option<OkElem> {
        let nd = d.norm();
        if nd == 0 {
            return None;
        }
        let num = *self * d.conj();
        if num.a % nd == 0 && num.b % nd == 0 {
            Some(self.field.elem(num.a / nd, num.b / nd))
        } else {
            None
        }
    }

    pub fn divides(&self, x: &OkElem) -> bool {
        x.div_exact(self).is_some()
    }

    pub fn embed(&self, prec: u32) -> APComplex {
        self.field.embed(self, prec)
    }

    /// Unit multiple that is largest in lexicographic `(a, b)` order.
    pub fn normalized(&self) -> OkElem {
        self.field.units().into_iter().map(|u| u * *self).max_by_key(|x| (x.a, x.b)).unwrap()
    }

    /// Index of `(x) + (m)` in `O_K`, i.e. the norm of the gcd ideal.
    pub fn gcd_norm(&self, m: &OkElem) -> i128 {
        let w = self.field.elem(0, 1);
        let gens = [*self, *self * w, *m, *m * w];
        let mut g = 0i128;
        for i in 0..4 {
            for j in i + 1..4 {
                g = gcd(g, gens[i].a * gens[j].b - gens[i].b * gens[j].a);
            }
        }
        g
    }

    pub fn coprime_to(&self, m: &OkElem) -> bool {
        self.gcd_norm(m) == 1
    }

    /// 𝔭-adic valuation for a prime ideal with generator `p`.
    pub fn valuation(&self, p: &OkElem) -> u32 {
        assert!(!self.is_zero(), "valuation of zero");
        let mut v = 0;
        let mut x = *self;
        while let Some(q) = x.div_exact(p) {
            x = q;
            v += 1;
        }
        v
    }
}

impl Add for OkElem {
    type Output = OkElem;
    fn add(self, o: OkElem) -> OkElem {
        self.field.elem(self.a + o.a, self.b + o.b)
    }
}

impl Sub for OkElem {
    type Output = OkElem;
    fn sub(self, o: OkElem) -> OkElem {
        self.field.elem(self.a - o.a, self.b - o.b)
    }
}

impl Neg for OkElem {
    type Output = OkElem;
    fn neg(self) -> OkElem {
        self.field.elem(-self.a, -self.b)
    }
}

impl Mul for OkElem {
    type Output = OkElem;
    fn mul(self, o: OkElem) -> OkElem {
        let (t, n) = self.field.min_poly();
        let bd = self.b * o.b;
        self.field.elem(self.a * o.a - n * bd, self.a * o.b + self.b * o.a + t * bd)
    }
}

/// Integral ideal given by its normalized generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IdealRep {
    pub gen: OkElem,
}

impl IdealRep {
    pub fn new(gen: OkElem) -> Self {
        assert!(!gen.is_zero(), "zero ideal");
        IdealRep { gen: gen.normalized() }
    }

    pub fn unit(field: ImagQuadField) -> Self {
        IdealRep { gen: field.one() }
    }

    pub fn norm(&self) -> i128 {
        self.gen.norm()
    }

    pub fn conj(&self) -> Self {
        IdealRep::new(self.gen.conj())
    }

    pub fn mul(&self, o: &IdealRep) -> Self {
        IdealRep::new(self.gen * o.gen)
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.gen.norm() == 1
    }
}

impl fmt::Display for IdealRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.gen)
    }
}

/// How a rational prime decomposes in `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitType {
    Split(IdealRep, IdealRep),
    Inert(IdealRep),
    Ramified(IdealRep),
}

/// Residues of `O_K` modulo a nonzero ideal, via the Hermite normal form
/// `𝔪 = Z·A ⊕ Z·(B + Cω)`.
#[derive(Clone, Debug)]
pub struct Modulus {
    pub gen: OkElem,
    hnf_a: i128,
    hnf_b: i128,
    hnf_c: i128,
}

impl Modulus {
    pub fn new(gen: OkElem) -> Self {
        assert!(!gen.is_zero(), "zero modulus");
        let (t, n) = gen.field.min_poly();
        let (m0, m1) = (gen.a, gen.b);
        let r1 = (m0, m1);
        let r2 = (-n * m1, m0 + t * m1);
        let (g, u, v) = ext_gcd(r1.1, r2.1);
        let c = g;
        let b = u * r1.0 + v * r2.0;
        let nm = gen.norm();
        let a = nm / c;
        let b = b.rem_euclid(a);
        Modulus { gen, hnf_a: a, hnf_b: b, hnf_c: c }
    }

    pub fn norm(&self) -> i128 {
        self.hnf_a * self.hnf_c
    }

    /// Canonical residue `(x0, x1)` with `0 ≤ x0 < A`, `0 ≤ x1 < C`.
    pub fn reduce(&self, x: &OkElem) -> OkElem {
        let q = x.b.div_euclid(self.hnf_c);
        let x1 = x.b - q * self.hnf_c;
        let x0 = (x.a - q * self.hnf_b).rem_euclid(self.hnf_a);
        x.field.elem(x0, x1)
    }

    /// Index of the residue class in `0..N𝔪`.
    pub fn index(&self, x: &OkElem) -> usize {
        let r = self.reduce(x);
        (r.a + self.hnf_a * r.b) as usize
    }

    pub fn residue_from_index(&self, idx: usize) -> OkElem {
        let idx = idx as i128;
        self.gen.field.elem(idx % self.hnf_a, idx / self.hnf_a)
    }

    pub fn congruent(&self, x: &OkElem, y: &OkElem) -> bool {
        self.reduce(&(*x - *y)).is_zero()
    }

    /// All residues coprime to the modulus.
    pub fn unit_residues(&self) -> Vec<OkElem> {
        (0..self.norm() as usize).map(|i| self.residue_from_index(i)).filter(|r| r.coprime_to(&self.gen)).collect()
    }

    /// Integer basis `(A, B + Cω)` of the ideal.
    pub fn z_basis(&self) -> (OkElem, OkElem) {
        let f = self.gen.field;
        (f.elem(self.hnf_a, 0), f.elem(self.hnf_b, self.hnf_c))
    }
}

/// Hecke character of infinity type (1,0): `ψ((α)) = ε(α)·α` where the twist
/// `ε: (O_K/𝔣)^* → μ_K` satisfies `ε(u) = u^{-1}` on units.
#[derive(Clone, Debug)]
pub struct HeckeCharacter {
    field: ImagQuadField,
    conductor: Modulus,
    /// Unit index of ε for each residue index mod 𝔣 (None on non-units).
    table: Vec<Option<usize>>,
}

impl HeckeCharacter {
    /// Build from a conductor generator and a twist table of
    /// `(residue, unit index)` pairs; validates the table.
    pub fn new(conductor: OkElem, twist: &[(OkElem, usize)]) -> Result<Self> {
        let field = conductor.field;
        let modulus = Modulus::new(conductor);
        let units = field.units();
        let w = units.len();
        let mut table = vec![None; modulus.norm() as usize];
        for (r, j) in twist {
            if *j >= w {
                return Err(Error::PresetParse(format!("unit index {j} out of range")));
            }
            if !r.coprime_to(&conductor) {
                return Err(Error::PresetParse(format!("twist residue {r} not prime to the conductor")));
            }
            let idx = modulus.index(r);
            if let Some(old) = table[idx] {
                if old != *j {
                    return Err(Error::PresetParse(format!("conflicting twist entries for {r}")));
                }
            }
            table[idx] = Some(*j);
        }
        let chi = HeckeCharacter { field, conductor: modulus, table };
        chi.validate()?;
        Ok(chi)
    }

    /// The character whose value on `(α)` is the unit multiple of `α` that is
    /// congruent to 1 modulo the conductor. Requires `μ_K → (O_K/𝔣)^*` to be
    /// injective and surjective.
    pub fn primary(conductor: OkElem) -> Result<Self> {
        let field = conductor.field;
        let modulus = Modulus::new(conductor);
        let units = field.units();
        let mut twist = Vec::new();
        for r in modulus.unit_residues() {
            let j = units
                .iter()
                .position(|u| modulus.congruent(&(*u * r), &field.one()))
                .ok_or_else(|| Error::PresetParse(format!("no unit makes {r} primary")))?;
            twist.push((r, j));
        }
        Self::new(conductor, &twist)
    }

    fn validate(&self) -> Result<()> {
        let units = self.field.units();
        let w = units.len();
        let res = self.conductor.unit_residues();
        for r in &res {
            if self.table[self.conductor.index(r)].is_none() {
                return Err(Error::PresetParse(format!("twist table misses residue {r}")));
            }
        }
        // ε(u) = u^{-1}
        for (j, u) in units.iter().enumerate() {
            let e = self.eps_index(u).ok_or(Error::NotCoprime)?;
            if (e + j) % w != 0 {
                return Err(Error::PresetParse(format!("twist is not inverse on unit {u}")));
            }
        }
        // homomorphism
        for x in &res {
            for y in &res {
                let ex = self.eps_index(x).unwrap();
                let ey = self.eps_index(y).unwrap();
                let exy = self.eps_index(&(*x * *y)).unwrap();
                if (ex + ey) % w != exy {
                    return Err(Error::PresetParse("twist table is not multiplicative".into()));
                }
            }
        }
        Ok(())
    }

    fn eps_index(&self, x: &OkElem) -> Option<usize> {
        self.table[self.conductor.index(x)]
    }

    pub fn field(&self) -> ImagQuadField {
        self.field
    }

    pub fn conductor(&self) -> &OkElem {
        &self.conductor.gen
    }

    pub fn conductor_modulus(&self) -> &Modulus {
        &self.conductor
    }

    /// `ψ((α)) = ε(α)·α` for an element prime to 𝔣.
    pub fn psi_elem(&self, alpha: &OkElem) -> Result<OkElem> {
        if !alpha.coprime_to(&self.conductor.gen) {
            return Err(Error::NotCoprime);
        }
        let j = self.eps_index(alpha).ok_or(Error::NotCoprime)?;
        Ok(self.field.units()[j] * *alpha)
    }

    pub fn psi_eval(&self, a: &IdealRep) -> Result<OkElem> {
        self.psi_elem(&a.gen)
    }
}

/// `(O_K/𝔪)^*` modulo the image of `μ_K`.
#[derive(Clone, Debug)]
pub struct RayClassGroup {
    modulus: Modulus,
    reps: Vec<IdealRep>,
    /// Class index for every residue index (None if not a unit).
    class_of: Vec<Option<usize>>,
    table: Vec<Vec<usize>>,
}

impl RayClassGroup {
    pub fn new(m: &OkElem) -> Result<Self> {
        Self::with_cap(m, RAY_CLASS_CAP)
    }

    pub fn with_cap(m: &OkElem, cap: u64) -> Result<Self> {
        let nm = m.norm();
        if nm as u64 > cap {
            return Err(Error::ModulusTooLarge(nm as u64, cap));
        }
        let field = m.field;
        let modulus = Modulus::new(*m);
        let units = field.units();
        let n = modulus.norm() as usize;
        let mut class_of: Vec<Option<usize>> = vec![None; n];
        let mut orbit_reps: Vec<OkElem> = Vec::new();
        // the class of 1 first so that index 0 is the identity
        let mut order: Vec<OkElem> = vec![field.one()];
        order.extend(modulus.unit_residues());
        for r in order {
            let idx = modulus.index(&r);
            if class_of[idx].is_some() {
                continue;
            }
            let c = orbit_reps.len();
            for u in &units {
                class_of[modulus.index(&(*u * r))] = Some(c);
            }
            orbit_reps.push(r);
        }
        let h = orbit_reps.len();
        // smallest-norm ideal in each class
        let mut reps: Vec<Option<IdealRep>> = vec![None; h];
        reps[0] = Some(IdealRep::unit(field));
        let mut found = 1;
        let mut bound = 4 * nm.max(2);
        while found < h {
            for x in field.elements_up_to_norm(bound) {
                if !x.coprime_to(m) {
                    continue;
                }
                let c = class_of[modulus.index(&x)].unwrap();
                if reps[c].is_none() {
                    reps[c] = Some(IdealRep::new(x));
                    found += 1;
                }
            }
            bound *= 2;
        }
        let reps: Vec<IdealRep> = reps.into_iter().map(|r| r.unwrap()).collect();
        let mut table = vec![vec![0; h]; h];
        for i in 0..h {
            for j in 0..h {
                let prod = orbit_reps[i] * orbit_reps[j];
                table[i][j] = class_of[modulus.index(&prod)].unwrap();
            }
        }
        Ok(RayClassGroup { modulus, reps, class_of, table })
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn reps(&self) -> &[IdealRep] {
        &self.reps
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.order()).find(|&j| self.table[i][j] == 0).unwrap()
    }

    pub fn artin_coset(&self, a: &IdealRep) -> Result<usize> {
        self.class_of_elem(&a.gen)
    }

    pub fn class_of_elem(&self, x: &OkElem) -> Result<usize> {
        if !x.coprime_to(&self.modulus.gen) {
            return Err(Error::NotCoprime);
        }
        Ok(self.class_of[self.modulus.index(x)].expect("unit residue has a class"))
    }

    /// Residues mod 𝔪 lying in class `c`.
    pub fn residues_in_class(&self, c: usize) -> Vec<OkElem> {
        (0..self.class_of.len())
            .filter(|&i| self.class_of[i] == Some(c))
            .map(|i| self.modulus.residue_from_index(i))
            .collect()
    }
}

/// Map from residue index to class, exposed for callers that need a dense lookup.
pub fn class_lookup(group: &RayClassGroup) -> HashMap<usize, usize> {
    group.class_of.iter().enumerate().filter_map(|(i, c)| c.map(|c| (i, c))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi() -> ImagQuadField {
        ImagQuadField::new(4).unwrap()
    }

    #[test]
    fn arithmetic_in_gaussian_integers() {
        let k = qi();
        let x = k.elem(2, 1);
        let y = k.elem(2, -1);
        assert_eq!(x * y, k.from_int(5));
        assert_eq!(x.conj(), y);
        assert_eq!(x.norm(), 5);
    }

    #[test]
    fn omega_relation_holds_for_all_fields() {
        for d in CLASS_NUMBER_ONE {
            let k = ImagQuadField::new(d).unwrap();
            let w = k.elem(0, 1);
            let (t, n) = k.min_poly();
            assert_eq!(w * w, k.elem(-n, t));
            let we = k.omega(128);
            let lhs = &we * &we;
            let rhs = &(&we * &APComplex::from_i64(t as i64, 128)) - &APComplex::from_i64(n as i64, 128);
            assert!(lhs.overlaps(&rhs));
            assert_eq!(k.elem(0, 1).norm(), n);
            // disc(ω) = t² − 4n = −d_K
            assert_eq!(t * t - 4 * n, -(d as i128));
        }
    }

    #[test]
    fn split_types_for_gaussian_field() {
        let k = qi();
        match k.split_type(5) {
            SplitType::Split(p, q) => {
                assert_eq!(p.gen, k.elem(2, 1));
                assert_eq!(q.gen, k.elem(2, -1));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(k.split_type(3), SplitType::Inert(IdealRep::new(k.from_int(3))));
        assert_eq!(k.split_type(2), SplitType::Ramified(IdealRep::new(k.elem(1, 1))));
    }

    #[test]
    fn hnf_reduction_is_canonical() {
        let k = qi();
        let m = Modulus::new(k.elem(2, 2));
        assert_eq!(m.norm(), 8);
        for x in k.elements_up_to_norm(50) {
            let r = m.reduce(&x);
            assert!(m.gen.divides(&(x - r)));
            assert_eq!(m.reduce(&r), r);
        }
        let residues: std::collections::HashSet<_> = k.elements_up_to_norm(200).iter().map(|x| m.index(x)).collect();
        assert_eq!(residues.len(), 8);
    }

    #[test]
    fn primary_character_on_gaussian_field() {
        let k = qi();
        let f = k.elem(1, 1).pow(3);
        let psi = HeckeCharacter::primary(f).unwrap();
        assert_eq!(psi.psi_elem(&k.elem(2, 1)).unwrap(), k.elem(-1, 2));
        assert_eq!(psi.psi_elem(&k.elem(2, -1)).unwrap(), k.elem(-1, -2));
        assert_eq!(psi.psi_elem(&k.elem(1, 1)), Err(Error::NotCoprime));
    }

    #[test]
    fn ray_class_group_orders() {
        let k = qi();
        let g = RayClassGroup::new(&k.one()).unwrap();
        assert_eq!(g.order(), 1);
        let f = k.elem(1, 1).pow(3);
        let g = RayClassGroup::new(&f).unwrap();
        assert_eq!(g.order() * 4, Modulus::new(f).unit_residues().len());
        let m = f * k.elem(2, 1);
        let g = RayClassGroup::new(&m).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.artin_coset(&IdealRep::unit(k)).unwrap(), 0);
    }

    #[test]
    fn modulus_cap_enforced() {
        let k = qi();
        assert_eq!(
            RayClassGroup::with_cap(&k.from_int(200), 10_000).unwrap_err(),
            Error::ModulusTooLarge(40_000, 10_000)
        );
    }
}
