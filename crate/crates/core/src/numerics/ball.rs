//! Complex ball arithmetic: an MPFR midpoint with a low-precision MPFR
//! radius that is always rounded outward.

use std::cmp::max;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round, Special};
use rug::{Float, Integer, Rational};

/// Smallest working precision accepted anywhere in the crate.
pub const MIN_PREC: u32 = 64;

const MAG_PREC: u32 = 53;

/// Nonnegative upper bound with MPFR's exponent range, so radii follow
/// midpoints far outside the `f64` range.
#[derive(Clone, Debug)]
struct Mag(Float);

impl Mag {
    fn zero() -> Mag {
        Mag(Float::new(MAG_PREC))
    }

    fn inf() -> Mag {
        Mag(Float::with_val(MAG_PREC, Special::Infinity))
    }

    fn fix(x: Float) -> Mag {
        if x.is_nan() {
            Mag::inf()
        } else if x.is_sign_negative() {
            Mag::zero()
        } else {
            Mag(x)
        }
    }

    fn from_f64(x: f64) -> Mag {
        if x.is_nan() {
            return Mag::inf();
        }
        Mag(Float::with_val(MAG_PREC, x.abs()))
    }

    fn eps(prec: u32) -> Mag {
        Mag(Float::with_val(MAG_PREC, 1) >> prec)
    }

    fn abs_up(x: &Float) -> Mag {
        Mag::fix(Float::with_val_round(MAG_PREC, &*x.as_abs(), Round::Up).0)
    }

    fn hypot_up(a: &Float, b: &Float) -> Mag {
        Mag::fix(Float::with_val_round(MAG_PREC, a.hypot_ref(b), Round::Up).0)
    }

    fn hypot_down(a: &Float, b: &Float) -> Mag {
        Mag::fix(Float::with_val_round(MAG_PREC, a.hypot_ref(b), Round::Down).0)
    }

    fn add(&self, o: &Mag) -> Mag {
        Mag::fix(Float::with_val_round(MAG_PREC, &self.0 + &o.0, Round::Up).0)
    }

    fn mul(&self, o: &Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::zero();
        }
        Mag::fix(Float::with_val_round(MAG_PREC, &self.0 * &o.0, Round::Up).0)
    }

    fn scale(&self, c: f64) -> Mag {
        self.mul(&Mag::from_f64(c))
    }

    /// Upper bound on `self / o`, where `o` is a lower bound.
    fn div(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return Mag::zero();
        }
        if o.is_zero() {
            return Mag::inf();
        }
        Mag::fix(Float::with_val_round(MAG_PREC, &self.0 / &o.0, Round::Up).0)
    }

    /// Lower bound on `self − o`, clamped at zero.
    fn sub_down(&self, o: &Mag) -> Mag {
        Mag::fix(Float::with_val_round(MAG_PREC, &self.0 - &o.0, Round::Down).0)
    }

    fn sqrt_up(&self) -> Mag {
        Mag::fix(Float::with_val_round(MAG_PREC, self.0.sqrt_ref(), Round::Up).0)
    }

    /// Lower bound on `sqrt(self)` for a lower bound `self`.
    fn sqrt_down(&self) -> Mag {
        Mag::fix(Float::with_val_round(MAG_PREC, self.0.sqrt_ref(), Round::Down).0)
    }

    fn exp_m1_up(&self) -> Mag {
        Mag::fix(Float::with_val_round(MAG_PREC, self.0.exp_m1_ref(), Round::Up).0)
    }

    fn cosh_up(&self) -> Mag {
        Mag::fix(Float::with_val_round(MAG_PREC, self.0.cosh_ref(), Round::Up).0)
    }

    fn min(self, o: Mag) -> Mag {
        if self.le(&o) {
            self
        } else {
            o
        }
    }

    fn le(&self, o: &Mag) -> bool {
        self.0 <= o.0
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    fn to_f64_up(&self) -> f64 {
        self.0.to_f64_round(Round::Up)
    }

    fn to_f64_down(&self) -> f64 {
        self.0.to_f64_round(Round::Down)
    }
}

/// Nudge an `f64` upward so that accumulated `f64` rounding in radius
/// bookkeeping never undershoots.
#[inline]
pub(crate) fn up(x: f64) -> f64 {
    if x.is_nan() {
        return f64::INFINITY;
    }
    x * (1.0 + 8.0 * f64::EPSILON) + f64::from_bits(1)
}

/// Complex number `re + i·im` together with a radius `err` such that the
/// true value lies in the closed disc of that radius around the midpoint.
#[derive(Clone, Debug)]
pub struct APComplex {
    re: Float,
    im: Float,
    err: Mag,
}

/// `a + b + c + ...` rounded up.
fn sum(parts: &[Mag]) -> Mag {
    parts.iter().fold(Mag::zero(), |acc, x| acc.add(x))
}

impl APComplex {
    pub fn zero(prec: u32) -> Self {
        let prec = max(prec, MIN_PREC);
        APComplex { re: Float::new(prec), im: Float::new(prec), err: Mag::zero() }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        let prec = max(prec, MIN_PREC);
        APComplex { re: Float::with_val(prec, v), im: Float::new(prec), err: Mag::zero() }
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        let prec = max(prec, MIN_PREC);
        let re = Float::with_val(prec, v);
        let err = if v.significant_bits() > prec { Mag::abs_up(&re).mul(&Mag::eps(prec)) } else { Mag::zero() };
        APComplex { re, im: Float::new(prec), err }
    }

    pub fn from_gaussian(a: i64, b: i64, prec: u32) -> Self {
        let prec = max(prec, MIN_PREC);
        APComplex { re: Float::with_val(prec, a), im: Float::with_val(prec, b), err: Mag::zero() }
    }

    /// Exact embedding of an `f64` (every finite double is representable at
    /// 64 bits or more).
    pub fn from_f64(v: f64, prec: u32) -> Self {
        let prec = max(prec, MIN_PREC);
        APComplex { re: Float::with_val(prec, v), im: Float::new(prec), err: Mag::zero() }
    }

    pub fn from_f64_pair(re: f64, im: f64, prec: u32) -> Self {
        let prec = max(prec, MIN_PREC);
        APComplex { re: Float::with_val(prec, re), im: Float::with_val(prec, im), err: Mag::zero() }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let prec = max(prec, MIN_PREC);
        let re = Float::with_val(prec, q);
        let err = Mag::abs_up(&re).mul(&Mag::eps(prec));
        APComplex { re, im: Float::new(prec), err }
    }

    pub fn from_rational_pair(a: &Rational, b: &Rational, prec: u32) -> Self {
        Self::from_rational(a, prec) + &Self::from_rational(b, prec).mul_i()
    }

    /// Parse a decimal string such as `"2.6220575542"` or `"-1/3"`.
    pub fn from_decimal(s: &str, prec: u32) -> Option<Self> {
        let prec = max(prec, MIN_PREC);
        let s = s.trim();
        if s.contains('/') {
            let q: Rational = s.parse().ok()?;
            return Some(Self::from_rational(&q, prec));
        }
        let parsed = Float::parse(s).ok()?;
        let re = Float::with_val(prec, parsed);
        let err = Mag::abs_up(&re).mul(&Mag::eps(prec)).scale(2.0);
        Some(APComplex { re, im: Float::new(prec), err })
    }

    pub fn from_floats(re: Float, im: Float) -> Self {
        APComplex { re, im, err: Mag::zero() }
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        APComplex { re, im: Float::new(prec), err: Mag::zero() }
    }

    pub fn i(prec: u32) -> Self {
        let prec = max(prec, MIN_PREC);
        APComplex { re: Float::new(prec), im: Float::with_val(prec, 1), err: Mag::zero() }
    }

    pub fn pi(prec: u32) -> Self {
        let prec = max(prec, MIN_PREC);
        let re = Float::with_val(prec, Constant::Pi);
        APComplex { re, im: Float::new(prec), err: Mag::eps(prec).scale(4.0) }
    }

    /// `2πi`
    pub fn two_pi_i(prec: u32) -> Self {
        Self::pi(prec).mul_i().mul_i64(2)
    }

    pub fn with_err(mut self, extra: f64) -> Self {
        self.err = self.err.add(&Mag::from_f64(extra));
        self
    }

    pub fn set_err(mut self, err: f64) -> Self {
        self.err = Mag::from_f64(err);
        self
    }

    /// Radius rounded up to an `f64`; a nonzero radius below the `f64`
    /// range comes back as the smallest subnormal.
    pub fn err(&self) -> f64 {
        self.err.to_f64_up()
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn prec(&self) -> u32 {
        max(self.re.prec(), self.im.prec())
    }

    /// Same value at a different working precision; the midpoint is rounded
    /// if the precision drops.
    pub fn with_prec(&self, prec: u32) -> Self {
        let prec = max(prec, MIN_PREC);
        let re = Float::with_val(prec, &self.re);
        let im = Float::with_val(prec, &self.im);
        let err = if prec < self.prec() {
            self.err.add(&self.mid_mag().mul(&Mag::eps(prec)).scale(2.0))
        } else {
            self.err.clone()
        };
        APComplex { re, im, err }
    }

    fn mid_mag(&self) -> Mag {
        Mag::hypot_up(&self.re, &self.im)
    }

    fn mid_mag_down(&self) -> Mag {
        Mag::hypot_down(&self.re, &self.im)
    }

    /// Upper bound on the modulus of the midpoint.
    pub fn mid_abs(&self) -> f64 {
        self.mid_mag().to_f64_up()
    }

    /// Upper bound on the modulus of every point in the ball.
    pub fn abs_upper(&self) -> f64 {
        self.mid_mag().add(&self.err).to_f64_up()
    }

    /// Lower bound on the modulus of every point in the ball.
    pub fn abs_lower(&self) -> f64 {
        self.mid_mag_down().sub_down(&self.err).to_f64_down()
    }

    /// Modulus as a real ball.
    pub fn abs(&self) -> APComplex {
        let prec = self.prec();
        let r = Float::with_val(prec, self.re.hypot_ref(&self.im));
        let err = self.err.add(&Mag::eps(prec).mul(&self.mid_mag()).scale(2.0));
        APComplex { re: r, im: Float::new(prec), err }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid_mag_down().le(&self.err)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite() && self.err.is_finite()
    }

    /// Real part as a real ball.
    pub fn re_part(&self) -> APComplex {
        APComplex { re: self.re.clone(), im: Float::new(self.re.prec()), err: self.err.clone() }
    }

    /// Imaginary part as a real ball.
    pub fn im_part(&self) -> APComplex {
        APComplex { re: self.im.clone(), im: Float::new(self.im.prec()), err: self.err.clone() }
    }

    /// Upper bound on the distance between any two points of the balls.
    pub fn dist_upper(&self, other: &APComplex) -> f64 {
        let d = self - other;
        d.abs_upper()
    }

    fn mid_dist_mag(&self, other: &APComplex) -> Mag {
        let prec = max(self.prec(), other.prec());
        let dr = Float::with_val(prec, &self.re - &other.re);
        let di = Float::with_val(prec, &self.im - &other.im);
        Mag::hypot_up(&dr, &di).scale(1.0 + 4.0 * f64::EPSILON)
    }

    /// Distance between midpoints.
    pub fn mid_dist(&self, other: &APComplex) -> f64 {
        self.mid_dist_mag(other).to_f64_up()
    }

    /// `|mid(self) − mid(other)| / |mid(other)|`, formed before rounding to
    /// `f64` so that it survives values outside the `f64` exponent range.
    pub fn mid_rel_dist(&self, other: &APComplex) -> f64 {
        let num = self.mid_dist_mag(other);
        if num.is_zero() {
            return 0.0;
        }
        num.div(&other.mid_mag_down()).to_f64_up()
    }

    pub fn overlaps(&self, other: &APComplex) -> bool {
        self.mid_dist_mag(other).le(&self.err.add(&other.err))
    }

    /// True if `other`'s ball lies inside `self`'s ball.
    pub fn contains(&self, other: &APComplex) -> bool {
        self.mid_dist_mag(other).add(&other.err).le(&self.err.scale(1.0 + 1e-12))
    }

    pub fn conj(&self) -> APComplex {
        APComplex { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im), err: self.err.clone() }
    }

    pub fn mul_i(&self) -> APComplex {
        APComplex { re: Float::with_val(self.im.prec(), -&self.im), im: self.re.clone(), err: self.err.clone() }
    }

    pub fn mul_i64(&self, c: i64) -> APComplex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * c);
        let im = Float::with_val(p, &self.im * c);
        let m = Mag::from_f64(c as f64);
        let round = Mag::eps(p).mul(&self.mid_mag()).mul(&m).scale(2.0);
        let err = self.err.mul(&m).add(&round);
        APComplex { re, im, err }
    }

    pub fn div_i64(&self, c: i64) -> APComplex {
        assert!(c != 0, "division by zero integer");
        let p = self.prec();
        let re = Float::with_val(p, &self.re / c);
        let im = Float::with_val(p, &self.im / c);
        let m = Mag::from_f64((c as f64).abs() * (1.0 - 2.0 * f64::EPSILON));
        let round = Mag::eps(p).mul(&self.mid_mag()).scale(2.0).div(&m);
        let err = self.err.div(&m).add(&round);
        APComplex { re, im, err }
    }

    pub fn mul_integer(&self, c: &Integer) -> APComplex {
        self * &APComplex::from_integer(c, self.prec())
    }

    pub fn mul_rational(&self, q: &Rational) -> APComplex {
        self * &APComplex::from_rational(q, self.prec())
    }

    pub fn sqr(&self) -> APComplex {
        self * self
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn powi(&self, n: i64) -> APComplex {
        if n < 0 {
            return APComplex::one(self.prec()).div_ref(self).powi(-n);
        }
        let mut result = APComplex::one(self.prec());
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        result
    }

    pub fn recip(&self) -> APComplex {
        APComplex::one(self.prec()).div_ref(self)
    }

    fn div_ref(&self, b: &APComplex) -> APComplex {
        let p = max(self.prec(), b.prec());
        let bl = b.mid_mag_down();
        if bl.le(&b.err) || bl.is_zero() {
            let mut out = APComplex::zero(p);
            out.err = Mag::inf();
            return out;
        }
        let den = Float::with_val(p, b.re.square_ref()) + Float::with_val(p, b.im.square_ref());
        let nr = Float::with_val(p, &self.re * &b.re) + Float::with_val(p, &self.im * &b.im);
        let ni = Float::with_val(p, &self.im * &b.re) - Float::with_val(p, &self.re * &b.im);
        let re = nr / &den;
        let im = ni / &den;
        let q = self.mid_mag().div(&bl);
        let num = self.err.add(&q.mul(&b.err));
        let err = num.div(&bl.sub_down(&b.err)).add(&Mag::eps(p).mul(&q).scale(16.0));
        APComplex { re, im, err }
    }

    pub fn exp(&self) -> APComplex {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = Float::with_val(p, &self.im).sin_cos(Float::new(p));
        let re = Float::with_val(p, &m * &c);
        let im = Float::with_val(p, &m * &s);
        let mag = Mag::abs_up(&m);
        let round = Mag::eps(p).mul(&mag).mul(&Mag::abs_up(&self.im).add(&Mag::from_f64(1.0))).scale(8.0);
        let err = mag.mul(&self.err.exp_m1_up()).add(&round);
        APComplex { re, im, err }
    }

    /// `sin z`, accurate relative to `|sin z|` near zero.
    pub fn sin(&self) -> APComplex {
        let p = self.prec();
        let (s, c) = Float::with_val(p, &self.re).sin_cos(Float::new(p));
        let sh = Float::with_val(p, self.im.sinh_ref());
        let ch = Float::with_val(p, self.im.cosh_ref());
        let re = Float::with_val(p, &s * &ch);
        let im = Float::with_val(p, &c * &sh);
        let bound = Mag::abs_up(&self.im).add(&self.err).cosh_up();
        let lin = self.err.mul(&bound).mul(&self.err.add(&Mag::from_f64(1.0)));
        let round = Mag::eps(p).mul(&Mag::abs_up(&re).add(&Mag::abs_up(&im))).scale(8.0);
        APComplex { re, im, err: lin.add(&round) }
    }

    /// Principal logarithm of the midpoint. The radius bounds the distance
    /// to the logarithm (continued from the midpoint) of any point in the ball.
    pub fn ln(&self) -> APComplex {
        let p = self.prec();
        let a = self.mid_mag_down();
        let modulus = Float::with_val(p, self.re.hypot_ref(&self.im));
        let re = modulus.ln();
        let im = Float::with_val(p, self.im.atan2_ref(&self.re));
        let err = if a.le(&self.err) {
            Mag::inf()
        } else {
            let round = Mag::eps(p).mul(&Mag::abs_up(&re).add(&Mag::from_f64(4.0))).scale(8.0);
            self.err.div(&a.sub_down(&self.err)).add(&round)
        };
        APComplex { re, im, err }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> APComplex {
        let p = self.prec();
        let modulus = Float::with_val(p, self.re.hypot_ref(&self.im));
        let arg = Float::with_val(p, self.im.atan2_ref(&self.re)) / 2u32;
        let r = modulus.sqrt();
        let (s, c) = arg.sin_cos(Float::new(p));
        let re = Float::with_val(p, &r * &c);
        let im = Float::with_val(p, &r * &s);
        let a = self.mid_mag_down();
        let rm = Mag::abs_up(&r);
        let round = Mag::eps(p).mul(&rm).scale(8.0);
        let err = if self.err.is_zero() {
            round
        } else if a.le(&self.err) {
            self.err.sqrt_up().add(&rm)
        } else {
            self.err.div(&a.sub_down(&self.err).sqrt_down()).add(&round)
        };
        APComplex { re, im, err }
    }

    /// Real argument (ball of the principal argument of the midpoint).
    pub fn arg(&self) -> APComplex {
        let p = self.prec();
        let a = Float::with_val(p, self.im.atan2_ref(&self.re));
        let lo = self.mid_mag_down();
        let err = if lo.le(&self.err) {
            Mag::inf()
        } else {
            let t = self.err.div(&lo.sub_down(&self.err)).min(Mag::from_f64(4.0));
            t.scale(1.6).add(&Mag::eps(p).scale(4.0))
        };
        APComplex { re: a, im: Float::new(p), err }
    }

    /// `(re, im)` rounded to doubles, for heuristics such as choosing
    /// truncation orders; never used for certified results.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Decimal rendering with `digits` significant digits per part.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = self.re.to_string_radix(10, Some(digits));
        if self.im.is_zero() {
            return re;
        }
        let im = self.im.to_string_radix(10, Some(digits));
        if im.starts_with('-') {
            format!("{re} - {}i", &im[1..])
        } else {
            format!("{re} + {im}i")
        }
    }
}

impl fmt::Display for APComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) ± {}", self.to_decimal(30), self.err.0.to_string_radix(10, Some(4)))
    }
}

impl<'a> Add<&'a APComplex> for &'a APComplex {
    type Output = APComplex;
    fn add(self, b: &APComplex) -> APComplex {
        let p = max(self.prec(), b.prec());
        let re = Float::with_val(p, &self.re + &b.re);
        let im = Float::with_val(p, &self.im + &b.im);
        let round = Mag::eps(p).mul(&self.mid_mag().add(&b.mid_mag())).scale(2.0);
        let err = sum(&[self.err.clone(), b.err.clone(), round]);
        APComplex { re, im, err }
    }
}

impl<'a> Sub<&'a APComplex> for &'a APComplex {
    type Output = APComplex;
    fn sub(self, b: &APComplex) -> APComplex {
        let p = max(self.prec(), b.prec());
        let re = Float::with_val(p, &self.re - &b.re);
        let im = Float::with_val(p, &self.im - &b.im);
        let round = Mag::eps(p).mul(&self.mid_mag().add(&b.mid_mag())).scale(2.0);
        let err = sum(&[self.err.clone(), b.err.clone(), round]);
        APComplex { re, im, err }
    }
}

impl<'a> Mul<&'a APComplex> for &'a APComplex {
    type Output = APComplex;
    fn mul(self, b: &APComplex) -> APComplex {
        let p = max(self.prec(), b.prec());
        let (ma, mb) = (self.mid_mag(), b.mid_mag());
        let (re, im) = if self.im.is_zero() && b.im.is_zero() {
            (Float::with_val(p, &self.re * &b.re), Float::new(p))
        } else {
            let rr = Float::with_val(p, &self.re * &b.re);
            let ii = Float::with_val(p, &self.im * &b.im);
            let ri = Float::with_val(p, &self.re * &b.im);
            let ir = Float::with_val(p, &self.im * &b.re);
            (rr - ii, ri + ir)
        };
        let round = Mag::eps(p).mul(&ma).mul(&mb).scale(8.0);
        let err = sum(&[ma.mul(&b.err), mb.mul(&self.err), self.err.mul(&b.err), round]);
        APComplex { re, im, err }
    }
}

impl<'a> Div<&'a APComplex> for &'a APComplex {
    type Output = APComplex;
    fn div(self, b: &APComplex) -> APComplex {
        self.div_ref(b)
    }
}

impl Neg for &APComplex {
    type Output = APComplex;
    fn neg(self) -> APComplex {
        APComplex {
            re: Float::with_val(self.re.prec(), -&self.re),
            im: Float::with_val(self.im.prec(), -&self.im),
            err: self.err.clone(),
        }
    }
}

impl Neg for APComplex {
    type Output = APComplex;
    fn neg(self) -> APComplex {
        APComplex { re: -self.re, im: -self.im, err: self.err }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<APComplex> for APComplex {
            type Output = APComplex;
            fn $m(self, b: APComplex) -> APComplex {
                (&self).$m(&b)
            }
        }
        impl<'a> $tr<&'a APComplex> for APComplex {
            type Output = APComplex;
            fn $m(self, b: &APComplex) -> APComplex {
                (&self).$m(b)
            }
        }
        impl<'a> $tr<APComplex> for &'a APComplex {
            type Output = APComplex;
            fn $m(self, b: APComplex) -> APComplex {
                self.$m(&b)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl std::iter::Sum for APComplex {
    fn sum<I: Iterator<Item = APComplex>>(iter: I) -> APComplex {
        let mut acc: Option<APComplex> = None;
        for x in iter {
            acc = Some(match acc {
                None => x,
                Some(a) => a + x,
            });
        }
        acc.unwrap_or_else(|| APComplex::zero(MIN_PREC))
    }
}

/// Sum with an explicit precision for the empty case.
pub fn sum_with_prec<I: IntoIterator<Item = APComplex>>(items: I, prec: u32) -> APComplex {
    items.into_iter().fold(APComplex::zero(prec), |a, x| a + x)
}

/// Product with an explicit precision for the empty case.
pub fn product_with_prec<I: IntoIterator<Item = APComplex>>(items: I, prec: u32) -> APComplex {
    items.into_iter().fold(APComplex::one(prec), |a, x| a * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> APComplex {
        APComplex::from_f64_pair(re, im, 128)
    }

    #[test]
    fn field_ops_round_trip() {
        let a = c(1.5, -2.0);
        let b = c(0.25, 3.0);
        let q = &(&a * &b) / &b;
        assert!(q.overlaps(&a));
        assert!(q.err() < 1e-35);
        let s = &(&a + &b) - &b;
        assert!(s.overlaps(&a));
    }

    #[test]
    fn exp_log_inverse() {
        let z = c(0.3, 1.1);
        let w = z.exp().ln();
        assert!(w.overlaps(&z), "{w} vs {z}");
    }

    #[test]
    fn pi_digits() {
        let p = APComplex::pi(256);
        assert!(p.to_decimal(20).starts_with("3.14159265358979323"));
        let e = APComplex::i(256).mul_i64(1).mul(&APComplex::pi(256)).exp();
        assert!(e.overlaps(&APComplex::from_i64(-1, 256)));
        assert!(e.err() < 1e-70);
    }

    #[test]
    fn sqrt_squares_back() {
        let z = c(-3.0, 4.0);
        let r = z.sqrt();
        assert!(r.overlaps(&c(1.0, 2.0)));
    }

    #[test]
    fn radius_propagates() {
        let a = c(1.0, 0.0).with_err(1e-10);
        let b = a.powi(5);
        assert!(b.err() >= 5e-10 * 0.99);
        assert!(b.err() < 6e-10);
    }

    #[test]
    fn division_by_ball_containing_zero_is_unbounded() {
        let a = c(1.0, 0.0);
        let z = c(0.0, 0.0).with_err(1e-3);
        assert!(!(&a / &z).is_finite());
    }

    #[test]
    fn radius_survives_tiny_values() {
        let tiny = APComplex::from_i64(10, 256).powi(-500);
        let sq = tiny.sqr();
        assert!(!sq.contains_zero());
        let back = &sq / &tiny;
        assert!(back.overlaps(&tiny));
        assert!(back.mid_rel_dist(&tiny) < 1e-70);
        assert!(!back.contains_zero());
    }

    #[test]
    fn decimal_parse() {
        let x = APComplex::from_decimal("2.5", 128).unwrap();
        assert!(x.overlaps(&c(2.5, 0.0)));
        let y = APComplex::from_decimal("-1/3", 128).unwrap();
        assert!(y.mul_i64(3).overlaps(&c(-1.0, 0.0)));
    }
}
