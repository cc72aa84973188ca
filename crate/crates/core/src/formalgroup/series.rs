//! Power series truncated at total degree `D`, in one and two variables.

use rayon::prelude::*;

use super::ring::{Coeff, RingTag};
use crate::error::{Error, Result};

const PAR_MIN: usize = 24;

/// `c_0 + c_1·T + … + c_D·T^D + O(T^{D+1})`.
#[derive(Clone, Debug)]
pub struct Series<R: Coeff> {
    pub c: Vec<R>,
}

impl<R: Coeff> Series<R> {
    pub fn zeros(proto: &R, d: usize) -> Self {
        Series { c: vec![proto.zero_of(); d + 1] }
    }

    /// Pads with zeros or drops terms above `d`.
    pub fn from_coeffs(proto: &R, mut c: Vec<R>, d: usize) -> Self {
        c.truncate(d + 1);
        while c.len() < d + 1 {
            c.push(proto.zero_of());
        }
        Series { c }
    }

    pub fn constant(x: R, d: usize) -> Self {
        let mut s = Self::zeros(&x, d);
        s.c[0] = x;
        s
    }

    pub fn monomial(x: R, k: usize, d: usize) -> Self {
        let mut s = Self::zeros(&x, d);
        if k <= d {
            s.c[k] = x;
        }
        s
    }

    /// `T`.
    pub fn var(proto: &R, d: usize) -> Self {
        Self::monomial(proto.one_of(), 1, d)
    }

    pub fn d(&self) -> usize {
        self.c.len() - 1
    }

    pub fn tag(&self) -> RingTag {
        self.c[0].tag()
    }

    fn proto(&self) -> &R {
        &self.c[0]
    }

    pub fn truncate(&self, d: usize) -> Self {
        Self::from_coeffs(self.proto(), self.c.clone(), d)
    }

    pub fn add(&self, o: &Self) -> Self {
        let d = self.d().min(o.d());
        Series { c: (0..=d).map(|n| self.c[n].add(&o.c[n])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let d = self.d().min(o.d());
        Series { c: (0..=d).map(|n| self.c[n].sub(&o.c[n])).collect() }
    }

    pub fn neg(&self) -> Self {
        Series { c: self.c.iter().map(|x| x.neg()).collect() }
    }

    pub fn scale(&self, x: &R) -> Self {
        Series { c: self.c.iter().map(|a| a.mul(x)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.d().min(o.d());
        let term = |n: usize| {
            let mut acc = self.proto().zero_of();
            for i in 0..=n {
                if self.c[i].is_zero() || o.c[n - i].is_zero() {
                    continue;
                }
                acc = acc.add(&self.c[i].mul(&o.c[n - i]));
            }
            acc
        };
        let c = if d >= PAR_MIN { (0..=d).into_par_iter().map(term).collect() } else { (0..=d).map(term).collect() };
        Series { c }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::constant(self.proto().one_of(), self.d());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// `self(inner)`; the inner series must have no constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.c[0].is_zero() {
            return Err(Error::InvalidInput("inner series has a constant term".into()));
        }
        Ok(self.horner(inner))
    }

    fn horner(&self, inner: &Self) -> Self {
        let d = self.d().min(inner.d());
        let mut r = Self::constant(self.c[d].clone(), d);
        for k in (0..d).rev() {
            r = r.mul(inner);
            r.c[0] = r.c[0].add(&self.c[k]);
        }
        r
    }

    /// Known to degree `D − 1`.
    pub fn derivative(&self) -> Self {
        if self.d() == 0 {
            return Self::zeros(self.proto(), 0);
        }
        Series { c: (1..=self.d()).map(|n| self.c[n].mul(&self.proto().int_of(n as i64))).collect() }
    }

    /// `∫_0^T`, known to degree `D + 1`.
    pub fn integral(&self) -> Result<Self> {
        let mut c = vec![self.proto().zero_of()];
        for (n, a) in self.c.iter().enumerate() {
            c.push(a.div(&self.proto().int_of(n as i64 + 1))?);
        }
        Ok(Series { c })
    }

    /// `1/self` for a unit constant term.
    pub fn recip(&self) -> Result<Self> {
        let inv0 = self.c[0].inv().map_err(|_| Error::NonUnitInput)?;
        let d = self.d();
        let mut r = Self::zeros(self.proto(), d);
        r.c[0] = inv0.clone();
        for n in 1..=d {
            let mut acc = self.proto().zero_of();
            for i in 1..=n {
                acc = acc.add(&self.c[i].mul(&r.c[n - i]));
            }
            r.c[n] = acc.mul(&inv0).neg();
        }
        Ok(r)
    }

    /// Compositional inverse of a series `c_1·T + …` with `c_1` a unit.
    pub fn reversion(&self) -> Result<Self> {
        if !self.c[0].is_zero() || self.d() == 0 {
            return Err(Error::InvalidInput("series must be T·unit".into()));
        }
        let inv1 = self.c[1].inv().map_err(|_| Error::NonUnitInput)?;
        let d = self.d();
        let mut g = Self::monomial(inv1.clone(), 1, d);
        for n in 2..=d {
            let r = self.horner(&g);
            g.c[n] = g.c[n].sub(&r.c[n].mul(&inv1));
        }
        Ok(g)
    }

    /// Lowest `n` where the series differ, `None` if equal to truncation.
    pub fn first_difference(&self, o: &Self) -> Option<usize> {
        let d = self.d().min(o.d());
        (0..=d).find(|&n| !self.c[n].eq_exact(&o.c[n]))
    }

    pub fn eq_exact(&self, o: &Self) -> bool {
        self.first_difference(o).is_none()
    }

    /// Smallest absolute precision among the coefficients, if tracked.
    pub fn precision(&self) -> Option<i64> {
        self.c.iter().filter_map(|x| x.precision()).min()
    }

    pub fn map<S: Coeff>(&self, f: impl Fn(&R) -> Result<S>) -> Result<Series<S>> {
        Ok(Series { c: self.c.iter().map(f).collect::<Result<_>>()? })
    }
}

/// `Σ_{i+j≤D} c_{ij}·X^i·Y^j`.
#[derive(Clone, Debug)]
pub struct Series2<R: Coeff> {
    /// `c[i][j]` with `j ≤ D − i`
    pub c: Vec<Vec<R>>,
}

impl<R: Coeff> Series2<R> {
    pub fn zeros(proto: &R, d: usize) -> Self {
        Series2 { c: (0..=d).map(|i| vec![proto.zero_of(); d + 1 - i]).collect() }
    }

    pub fn d(&self) -> usize {
        self.c.len() - 1
    }

    fn proto(&self) -> &R {
        &self.c[0][0]
    }

    pub fn coeff(&self, i: usize, j: usize) -> &R {
        &self.c[i][j]
    }

    /// `u(X)`.
    pub fn in_x(u: &Series<R>) -> Self {
        let d = u.d();
        let mut s = Self::zeros(&u.c[0], d);
        for i in 0..=d {
            s.c[i][0] = u.c[i].clone();
        }
        s
    }

    /// `v(Y)`.
    pub fn in_y(v: &Series<R>) -> Self {
        let d = v.d();
        let mut s = Self::zeros(&v.c[0], d);
        s.c[0] = v.c.clone();
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        Series2 { c: self.c.iter().zip(&o.c).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Series2 { c: self.c.iter().zip(&o.c).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()).collect() }
    }

    pub fn scale(&self, x: &R) -> Self {
        Series2 { c: self.c.iter().map(|a| a.iter().map(|y| y.mul(x)).collect()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.d();
        let row = |i: usize| {
            let mut out = vec![self.proto().zero_of(); d + 1 - i];
            for a in 0..=i {
                let (l, r) = (&self.c[a], &o.c[i - a]);
                for (b, x) in l.iter().enumerate().take(d + 1 - i) {
                    if x.is_zero() {
                        continue;
                    }
                    for (e, y) in r.iter().enumerate().take(d + 1 - i - b) {
                        if !y.is_zero() {
                            out[b + e] = out[b + e].add(&x.mul(y));
                        }
                    }
                }
            }
            out
        };
        let c = if d >= PAR_MIN { (0..=d).into_par_iter().map(row).collect() } else { (0..=d).map(row).collect() };
        Series2 { c }
    }

    /// `self^0, …, self^n`.
    pub fn powers(&self, n: usize) -> Vec<Self> {
        let mut one = Self::zeros(self.proto(), self.d());
        one.c[0][0] = self.proto().one_of();
        let mut out = vec![one];
        for k in 1..=n {
            let next = out[k - 1].mul(self);
            out.push(next);
        }
        out
    }

    /// `g(self)` for `self` without constant term.
    pub fn compose_into(g: &Series<R>, s: &Self) -> Result<Self> {
        if !s.c[0][0].is_zero() {
            return Err(Error::InvalidInput("inner series has a constant term".into()));
        }
        let d = s.d().min(g.d());
        let mut r = Self::zeros(s.proto(), s.d());
        r.c[0][0] = g.c[d].clone();
        for k in (0..d).rev() {
            r = r.mul(s);
            r.c[0][0] = r.c[0][0].add(&g.c[k]);
        }
        Ok(r)
    }

    /// `self(u(X), v(Y))` for `u, v` without constant term.
    pub fn substitute(&self, u: &Series<R>, v: &Series<R>) -> Result<Self> {
        if !u.c[0].is_zero() || !v.c[0].is_zero() {
            return Err(Error::InvalidInput("inner series has a constant term".into()));
        }
        let d = self.d();
        let up: Vec<Series<R>> = powers1(u, d);
        let vp: Vec<Series<R>> = powers1(v, d);
        let row = |x: usize| {
            let mut out = vec![self.proto().zero_of(); d + 1 - x];
            for i in 0..=x {
                let ux = &up[i].c[x];
                if ux.is_zero() {
                    continue;
                }
                for (j, cij) in self.c[i].iter().enumerate() {
                    if cij.is_zero() {
                        continue;
                    }
                    let w = cij.mul(ux);
                    for (y, o) in out.iter_mut().enumerate() {
                        let vy = &vp[j].c[y];
                        if !vy.is_zero() {
                            *o = o.add(&w.mul(vy));
                        }
                    }
                }
            }
            out
        };
        let c = if d >= PAR_MIN { (0..=d).into_par_iter().map(row).collect() } else { (0..=d).map(row).collect() };
        Ok(Series2 { c })
    }

    /// `self(Y, X)`.
    pub fn swap(&self) -> Self {
        let d = self.d();
        Series2 { c: (0..=d).map(|i| (0..=d - i).map(|j| self.c[j][i].clone()).collect()).collect() }
    }

    /// `self(T, 0)`.
    pub fn at_y_zero(&self) -> Series<R> {
        Series { c: self.c.iter().map(|r| r[0].clone()).collect() }
    }

    /// `∂_Y self(T, 0)`, known to degree `D − 1`.
    pub fn dy_at_zero(&self) -> Series<R> {
        let d = self.d();
        Series { c: (0..d).map(|i| self.c[i][1].clone()).collect() }
    }

    /// `1/self` for a unit constant term.
    pub fn recip(&self) -> Result<Self> {
        let inv0 = self.c[0][0].inv().map_err(|_| Error::NonUnitInput)?;
        let mut u = self.scale(&inv0);
        u.c[0][0] = u.proto().zero_of();
        // 1/(1 + u) = Σ (−u)^n
        let geo = Series {
            c: (0..=self.d()).map(|n| if n % 2 == 0 { inv0.one_of() } else { inv0.one_of().neg() }).collect(),
        };
        Ok(Self::compose_into(&geo, &u)?.scale(&inv0))
    }

    /// Lowest-degree monomial where the series differ.
    pub fn first_difference(&self, o: &Self) -> Option<(usize, usize)> {
        let d = self.d().min(o.d());
        for n in 0..=d {
            for i in 0..=n {
                if !self.c[i][n - i].eq_exact(&o.c[i][n - i]) {
                    return Some((i, n - i));
                }
            }
        }
        None
    }

    pub fn eq_exact(&self, o: &Self) -> bool {
        self.first_difference(o).is_none()
    }

    pub fn precision(&self) -> Option<i64> {
        self.c.iter().flatten().filter_map(|x| x.precision()).min()
    }

    pub fn map<S: Coeff>(&self, f: impl Fn(&R) -> Result<S>) -> Result<Series2<S>> {
        Ok(Series2 { c: self.c.iter().map(|r| r.iter().map(&f).collect::<Result<_>>()).collect::<Result<_>>()? })
    }
}

pub(crate) fn powers1<R: Coeff>(u: &Series<R>, n: usize) -> Vec<Series<R>> {
    let mut out = vec![Series::constant(u.c[0].one_of(), u.d())];
    for k in 1..=n {
        let next = out[k - 1].mul(u);
        out.push(next);
    }
    out
}
