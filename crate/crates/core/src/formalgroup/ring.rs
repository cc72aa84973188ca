//! Exact coefficient rings: `Q`, `K`, `Q_p` with tracked absolute precision,
//! `Z/p^m`, and quotients `R[X]/(E(X))` by a monic polynomial.

use std::fmt;
use std::sync::Arc;

use rug::ops::Pow;
use rug::{Complete, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ImagQuadField;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "ring", rename_all = "kebab-case")]
pub enum RingTag {
    Rational,
    Quadratic { d_k: u32 },
    Padic { p: u64, precision: i64 },
    PadicInt { p: u64, m: u32 },
    Torsion { degree: usize },
}

pub trait Coeff: Clone + fmt::Debug + fmt::Display + Send + Sync {
    fn zero_of(&self) -> Self;
    fn one_of(&self) -> Self;
    fn int_of(&self, n: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Fails on zero and on non-units of the integral rings.
    fn inv(&self) -> Result<Self>;
    fn tag(&self) -> RingTag;

    /// Absolute precision for p-adic coefficients.
    fn precision(&self) -> Option<i64> {
        None
    }

    fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    fn eq_exact(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    fn pow(&self, e: u32) -> Self {
        let mut r = self.one_of();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }
}

impl Coeff for Rational {
    fn zero_of(&self) -> Self {
        Rational::new()
    }
    fn one_of(&self) -> Self {
        Rational::from(1)
    }
    fn int_of(&self, n: i64) -> Self {
        Rational::from(n)
    }
    fn add(&self, o: &Self) -> Self {
        (self + o).complete()
    }
    fn sub(&self, o: &Self) -> Self {
        (self - o).complete()
    }
    fn mul(&self, o: &Self) -> Self {
        (self * o).complete()
    }
    fn neg(&self) -> Self {
        (-self).complete()
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn inv(&self) -> Result<Self> {
        if *self == 0 {
            return Err(Error::NonUnitInput);
        }
        Ok(self.clone().recip())
    }
    fn tag(&self) -> RingTag {
        RingTag::Rational
    }
}

/// `a + b·ω_K` with rational `a, b`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadElem {
    pub field: ImagQuadField,
    pub a: Rational,
    pub b: Rational,
}

impl QuadElem {
    pub fn new(field: ImagQuadField, a: Rational, b: Rational) -> Self {
        QuadElem { field, a, b }
    }

    pub fn from_ints(field: ImagQuadField, a: i64, b: i64) -> Self {
        Self::new(field, Rational::from(a), Rational::from(b))
    }

    pub fn conj(&self) -> Self {
        let (t, _) = self.field.min_poly();
        let a = &self.a + (&self.b * Integer::from(t)).complete();
        QuadElem::new(self.field, a, (-&self.b).complete())
    }

    pub fn norm(&self) -> Rational {
        let (t, n) = self.field.min_poly();
        let aa = (&self.a * &self.a).complete();
        let ab = (&self.a * &self.b).complete() * Integer::from(t);
        let bb = (&self.b * &self.b).complete() * Integer::from(n);
        aa + ab + bb
    }

    /// `v_𝔭` for the unramified prime `𝔭 = (π)`.
    pub fn valuation_at(&self, pi: &QuadElem) -> Option<i64> {
        if Coeff::is_zero(self) {
            return None;
        }
        // clear denominators: x = y/n with y ∈ O_K
        let den = Integer::from(self.a.denom().lcm_ref(self.b.denom()));
        let y = self.mul(&QuadElem::new(self.field, Rational::from(den.clone()), Rational::new()));
        let n = pi.norm().numer().clone();
        let p = if n.is_perfect_square() { n.sqrt() } else { n };
        let mut v = 0i64;
        let mut cur = y;
        // divide by π while the quotient stays integral
        while let Ok(q) = cur.div(pi) {
            if *q.a.denom() != 1 || *q.b.denom() != 1 {
                break;
            }
            cur = q;
            v += 1;
        }
        let mut d = den;
        while d.is_divisible(&p) {
            d /= &p;
            v -= 1;
        }
        Some(v)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = if self.field.d_k() == 4 { "i" } else { "w" };
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + ({}){}", self.a, self.b, w)
        }
    }
}

impl Coeff for QuadElem {
    fn zero_of(&self) -> Self {
        QuadElem::from_ints(self.field, 0, 0)
    }
    fn one_of(&self) -> Self {
        QuadElem::from_ints(self.field, 1, 0)
    }
    fn int_of(&self, n: i64) -> Self {
        QuadElem::from_ints(self.field, n, 0)
    }
    fn add(&self, o: &Self) -> Self {
        QuadElem::new(self.field, (&self.a + &o.a).complete(), (&self.b + &o.b).complete())
    }
    fn sub(&self, o: &Self) -> Self {
        QuadElem::new(self.field, (&self.a - &o.a).complete(), (&self.b - &o.b).complete())
    }
    fn mul(&self, o: &Self) -> Self {
        // ω² = tω − n
        let (t, n) = self.field.min_poly();
        let bb = (&self.b * &o.b).complete();
        let a = (&self.a * &o.a).complete() - (&bb * Integer::from(n)).complete();
        let b = (&self.a * &o.b).complete() + (&self.b * &o.a).complete() + bb * Integer::from(t);
        QuadElem::new(self.field, a, b)
    }
    fn neg(&self) -> Self {
        QuadElem::new(self.field, (-&self.a).complete(), (-&self.b).complete())
    }
    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
    fn inv(&self) -> Result<Self> {
        if Coeff::is_zero(self) {
            return Err(Error::NonUnitInput);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(QuadElem::new(self.field, c.a / &n, c.b / &n))
    }
    fn tag(&self) -> RingTag {
        RingTag::Quadratic { d_k: self.field.d_k() }
    }
}

/// `p^v·u` known modulo `p^ap`, with `u` a unit mod `p^{ap−v}`; zero when
/// `u = 0` (then `v = ap`). `cap` is the working precision given to new
/// constants.
#[derive(Clone, Debug)]
pub struct Padic {
    pub p: u64,
    pub v: i64,
    pub u: Integer,
    pub ap: i64,
    pub cap: i64,
}

fn ppow(p: u64, e: i64) -> Integer {
    Integer::from(p).pow(e.max(0) as u32)
}

impl Padic {
    fn make(p: u64, v: i64, u: Integer, ap: i64, cap: i64) -> Self {
        let zero = |ap| Padic { p, v: ap, u: Integer::new(), ap, cap };
        if v >= ap {
            return zero(ap);
        }
        let mut u = u.modulo(&ppow(p, ap - v));
        if u == 0 {
            return zero(ap);
        }
        let pi = Integer::from(p);
        let mut v = v;
        while u.is_divisible(&pi) {
            u /= &pi;
            v += 1;
        }
        Padic { p, v, u, ap, cap }
    }

    /// `x` known to `p^prec`, also the working precision.
    pub fn from_integer(p: u64, x: &Integer, prec: i64) -> Self {
        Self::make(p, 0, x.clone(), prec, prec)
    }

    /// `x` to relative precision `rel`.
    pub fn from_rational(p: u64, x: &Rational, rel: i64) -> Result<Self> {
        if *x == 0 {
            return Ok(Self::make(p, rel, Integer::new(), rel, rel));
        }
        let pi = Integer::from(p);
        let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
        let mut v = 0i64;
        while n.is_divisible(&pi) {
            n /= &pi;
            v += 1;
        }
        while d.is_divisible(&pi) {
            d /= &pi;
            v -= 1;
        }
        let dinv = d.invert(&ppow(p, rel)).map_err(|_| Error::NonUnitInput)?;
        Ok(Self::make(p, v, n * dinv, v + rel, rel))
    }

    /// Valuation, `None` for zero at this precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.u == 0 {
            None
        } else {
            Some(self.v)
        }
    }

    /// Residue modulo `p^m` of an integral element known at least that far.
    pub fn to_padic_int(&self, m: u32) -> Result<PadicInt> {
        if self.ap < m as i64 {
            return Err(Error::InvalidInput(format!("p-adic precision {} below {m}", self.ap)));
        }
        if self.u != 0 && self.v < 0 {
            return Err(Error::InvalidInput("element is not integral".into()));
        }
        let r = &self.u * ppow(self.p, self.v);
        Ok(PadicInt::new(self.p, m, r))
    }

    /// The root of the integer polynomial `Σ c_k X^k` congruent to `r0` mod
    /// `p`, by Newton iteration; the root must be simple mod `p`.
    pub fn hensel_root(p: u64, poly: &[i64], r0: i64, prec: i64) -> Result<Self> {
        let pi = Integer::from(p);
        let eval = |x: &Integer, c: &[Integer]| c.iter().rev().fold(Integer::new(), |acc, a| acc * x + a);
        let c: Vec<Integer> = poly.iter().map(|&a| Integer::from(a)).collect();
        let dc: Vec<Integer> = c.iter().enumerate().skip(1).map(|(k, a)| Integer::from(k) * a).collect();
        let mut r = Integer::from(r0);
        if eval(&r, &c).modulo(&pi) != 0 {
            return Err(Error::InvalidInput(format!("{r0} is not a root mod {p}")));
        }
        let mut k = 1;
        while k < prec {
            k = (2 * k).min(prec);
            let mk = ppow(p, k);
            let d = eval(&r, &dc).invert(&mk).map_err(|_| Error::InvalidInput("root is not simple".into()))?;
            r = (&r - eval(&r, &c) * d).modulo(&mk);
        }
        Ok(Self::make(p, 0, r, prec, prec))
    }

    /// The square root of `a` in `Z_p` congruent to `r0` mod `p`.
    pub fn hensel_sqrt(p: u64, a: i64, r0: i64, prec: i64) -> Result<Self> {
        Self::hensel_root(p, &[-a, 0, 1], r0, prec)
    }
}

impl PartialEq for Padic {
    fn eq(&self, o: &Self) -> bool {
        self.eq_exact(o)
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.u == 0 {
            write!(f, "O({}^{})", self.p, self.ap)
        } else {
            write!(f, "{}·{}^{} + O({}^{})", self.u, self.p, self.v, self.p, self.ap)
        }
    }
}

impl Coeff for Padic {
    fn zero_of(&self) -> Self {
        Padic::make(self.p, self.cap, Integer::new(), self.cap, self.cap)
    }
    fn one_of(&self) -> Self {
        Padic::make(self.p, 0, Integer::from(1), self.cap, self.cap)
    }
    fn int_of(&self, n: i64) -> Self {
        Padic::from_rational(self.p, &Rational::from(n), self.cap).expect("integer")
    }
    fn add(&self, o: &Self) -> Self {
        let v = self.v.min(o.v);
        let ap = self.ap.min(o.ap);
        let a = &self.u * ppow(self.p, self.v - v);
        let b = &o.u * ppow(self.p, o.v - v);
        Padic::make(self.p, v, a + b, ap, self.cap)
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let v = self.v + o.v;
        let ap = (self.ap + o.v).min(o.ap + self.v);
        Padic::make(self.p, v, (&self.u * &o.u).complete(), ap, self.cap)
    }
    fn neg(&self) -> Self {
        Padic::make(self.p, self.v, (-&self.u).complete(), self.ap, self.cap)
    }
    fn is_zero(&self) -> bool {
        self.u == 0
    }
    fn inv(&self) -> Result<Self> {
        if self.u == 0 {
            return Err(Error::NonUnitInput);
        }
        let rel = self.ap - self.v;
        let ui = self.u.clone().invert(&ppow(self.p, rel)).map_err(|_| Error::NonUnitInput)?;
        Ok(Padic::make(self.p, -self.v, ui, -self.v + rel, self.cap))
    }
    fn tag(&self) -> RingTag {
        RingTag::Padic { p: self.p, precision: self.cap }
    }
    fn precision(&self) -> Option<i64> {
        Some(self.ap)
    }
}

/// `Z/p^m` with the representative in `[0, p^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicInt {
    pub p: u64,
    pub m: u32,
    pub r: Integer,
}

impl PadicInt {
    pub fn new(p: u64, m: u32, r: Integer) -> Self {
        let r = r.modulo(&Integer::from(p).pow(m));
        PadicInt { p, m, r }
    }

    fn modulus(&self) -> Integer {
        Integer::from(self.p).pow(self.m)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.r, self.p, self.m)
    }
}

impl Coeff for PadicInt {
    fn zero_of(&self) -> Self {
        PadicInt::new(self.p, self.m, Integer::new())
    }
    fn one_of(&self) -> Self {
        PadicInt::new(self.p, self.m, Integer::from(1))
    }
    fn int_of(&self, n: i64) -> Self {
        PadicInt::new(self.p, self.m, Integer::from(n))
    }
    fn add(&self, o: &Self) -> Self {
        PadicInt::new(self.p, self.m, (&self.r + &o.r).complete())
    }
    fn sub(&self, o: &Self) -> Self {
        PadicInt::new(self.p, self.m, (&self.r - &o.r).complete())
    }
    fn mul(&self, o: &Self) -> Self {
        PadicInt::new(self.p, self.m, (&self.r * &o.r).complete())
    }
    fn neg(&self) -> Self {
        PadicInt::new(self.p, self.m, (-&self.r).complete())
    }
    fn is_zero(&self) -> bool {
        self.r == 0
    }
    fn inv(&self) -> Result<Self> {
        let r = self.r.clone().invert(&self.modulus()).map_err(|_| Error::NonUnitInput)?;
        Ok(PadicInt::new(self.p, self.m, r))
    }
    fn tag(&self) -> RingTag {
        RingTag::PadicInt { p: self.p, m: self.m }
    }
}

/// `R[X]/(E(X))` for monic `E = X^d + e_{d−1}X^{d−1} + … + e_0`.
#[derive(Clone, Debug)]
pub struct Torsion<R: Coeff> {
    pub c: Vec<R>,
    /// `e_0, …, e_{d−1}`
    pub e: Arc<Vec<R>>,
}

impl<R: Coeff> Torsion<R> {
    pub fn modulus(e: Vec<R>) -> Arc<Vec<R>> {
        assert!(!e.is_empty(), "degree at least 1");
        Arc::new(e)
    }

    pub fn from_base(x: R, e: &Arc<Vec<R>>) -> Self {
        let mut c = vec![x.zero_of(); e.len()];
        c[0] = x;
        Torsion { c, e: e.clone() }
    }

    /// The class of `X`.
    pub fn generator(e: &Arc<Vec<R>>) -> Self {
        let z = e[0].zero_of();
        let mut c = vec![z.clone(); e.len()];
        if e.len() == 1 {
            c[0] = e[0].neg();
        } else {
            c[1] = z.one_of();
        }
        Torsion { c, e: e.clone() }
    }

    /// The base-ring element if all higher components vanish.
    pub fn as_base(&self) -> Option<R> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    fn reduce(&self, mut v: Vec<R>) -> Vec<R> {
        let d = self.e.len();
        while v.len() > d {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let s = v.len() - d;
            for (k, ek) in self.e.iter().enumerate() {
                v[s + k] = v[s + k].sub(&top.mul(ek));
            }
        }
        while v.len() < d {
            v.push(self.c[0].zero_of());
        }
        v
    }
}

impl<R: Coeff> fmt::Display for Torsion<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().enumerate().map(|(k, x)| format!("({x})X^{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<R: Coeff> Coeff for Torsion<R> {
    fn zero_of(&self) -> Self {
        Torsion::from_base(self.c[0].zero_of(), &self.e)
    }
    fn one_of(&self) -> Self {
        Torsion::from_base(self.c[0].one_of(), &self.e)
    }
    fn int_of(&self, n: i64) -> Self {
        Torsion::from_base(self.c[0].int_of(n), &self.e)
    }
    fn add(&self, o: &Self) -> Self {
        Torsion { c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect(), e: self.e.clone() }
    }
    fn sub(&self, o: &Self) -> Self {
        Torsion { c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect(), e: self.e.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        let d = self.c.len();
        let mut v = vec![self.c[0].zero_of(); 2 * d - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Torsion { c: self.reduce(v), e: self.e.clone() }
    }
    fn neg(&self) -> Self {
        Torsion { c: self.c.iter().map(|a| a.neg()).collect(), e: self.e.clone() }
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }
    fn inv(&self) -> Result<Self> {
        match self.as_base() {
            Some(x) => Ok(Torsion::from_base(x.inv()?, &self.e)),
            None => Err(Error::NonUnitInput),
        }
    }
    fn tag(&self) -> RingTag {
        RingTag::Torsion { degree: self.e.len() }
    }
    fn precision(&self) -> Option<i64> {
        self.c.iter().filter_map(|x| x.precision()).min()
    }
}

/// Coefficient rings with a discrete valuation normalised by `v(π) = 1`
/// for the chosen uniformizer `π`.
pub trait LocalRing: Coeff {
    /// `None` for zero.
    fn valuation_wrt(&self, pi: &Self) -> Option<i64>;

    fn divisible_by(&self, pi: &Self) -> bool {
        self.valuation_wrt(pi).is_none_or(|v| v >= 1)
    }

    fn is_integral(&self, pi: &Self) -> bool {
        self.valuation_wrt(pi).is_none_or(|v| v >= 0)
    }
}

fn vp_int(x: &Integer, p: &Integer) -> i64 {
    let mut x = x.clone();
    let mut v = 0;
    while x.is_divisible(p) {
        x /= p;
        v += 1;
    }
    v
}

impl LocalRing for Rational {
    fn valuation_wrt(&self, pi: &Self) -> Option<i64> {
        if *self == 0 {
            return None;
        }
        let p = pi.numer().clone().abs();
        Some(vp_int(self.numer(), &p) - vp_int(self.denom(), &p))
    }
}

impl LocalRing for QuadElem {
    fn valuation_wrt(&self, pi: &Self) -> Option<i64> {
        self.valuation_at(pi)
    }
}

impl LocalRing for Padic {
    fn valuation_wrt(&self, pi: &Self) -> Option<i64> {
        let e = pi.valuation().unwrap_or(1).max(1);
        self.valuation().map(|v| v.div_euclid(e))
    }
}

impl LocalRing for PadicInt {
    fn valuation_wrt(&self, _pi: &Self) -> Option<i64> {
        if self.r == 0 {
            return None;
        }
        Some(vp_int(&self.r, &Integer::from(self.p)))
    }
}
