//! q-expansions on `Z + τZ`.

use crate::numerics::{up, APComplex};

/// Cached powers of `q = e^{2πiτ}` for a fixed `τ` in the upper half plane.
#[derive(Clone, Debug)]
pub struct QSeries {
    prec: u32,
    qabs: f64,
    qpow: Vec<APComplex>,
}

impl QSeries {
    pub fn new(tau: &APComplex, prec: u32) -> Self {
        let q = (&APComplex::two_pi_i(prec) * tau).exp();
        let qabs = up(q.abs_upper());
        assert!(qabs < 0.5, "τ must be reduced");
        // enough powers for terms of size m·|q|^n with m up to |q|^{-1}
        let n = Self::terms_for(qabs, 1.0 / qabs, prec) + 1;
        let mut qpow = Vec::with_capacity(n + 1);
        qpow.push(APComplex::one(prec));
        for i in 1..=n {
            let next = &qpow[i - 1] * &q;
            qpow.push(next);
        }
        QSeries { prec, qabs, qpow }
    }

    /// Smallest `N` with `m·|q|^{N+1} < 2^{-prec-20}`.
    fn terms_for(qabs: f64, m: f64, prec: u32) -> usize {
        let target = -((prec + 20) as f64) * std::f64::consts::LN_2 - m.ln();
        ((target / qabs.ln()).ceil() as usize).max(2)
    }

    pub fn q(&self) -> &APComplex {
        &self.qpow[1]
    }

    fn tail(&self, n: usize, m: f64) -> f64 {
        up(m * self.qabs.powi(n as i32 + 1) / (1.0 - self.qabs))
    }

    /// `Σ_{n≥1} n^a q^n/(1 − q^n)` with its tail.
    fn lambert(&self, a: u32) -> APComplex {
        let n = Self::terms_for(self.qabs, 1.0, self.prec) + 4;
        let mut acc = APComplex::zero(self.prec);
        let mut qn = APComplex::one(self.prec);
        for j in 1..=n {
            qn = &qn * self.q();
            let term = &qn / &(&APComplex::one(self.prec) - &qn);
            acc = &acc + &term.mul_i64((j as i64).pow(a));
        }
        // the ratio of consecutive terms is below 1/2 once n ≥ 5 and |q| < e^{-π√3}
        acc.with_err(up(2.0 * ((n + 1) as f64).powi(a as i32) * 2.0 * self.qabs.powi(n as i32 + 1)))
    }

    pub fn e2(&self) -> APComplex {
        &APComplex::one(self.prec) - &self.lambert(1).mul_i64(24)
    }

    pub fn e4(&self) -> APComplex {
        &APComplex::one(self.prec) + &self.lambert(3).mul_i64(240)
    }

    pub fn e6(&self) -> APComplex {
        &APComplex::one(self.prec) - &self.lambert(5).mul_i64(504)
    }

    /// `(2π)^{12} q ∏(1 − q^n)^{24}`
    pub fn delta(&self) -> APComplex {
        let n = Self::terms_for(self.qabs, 1.0, self.prec);
        let one = APComplex::one(self.prec);
        let mut prod = one.clone();
        for j in 1..=n {
            prod = &prod * &(&one - &self.qpow[j]);
        }
        // |Σ_{n>N} 24·log(1 − q^n)| ≤ ε, relative error ≤ 2ε
        let eps = 48.0 * self.tail(n, 1.0);
        let p24 = prod.powi(24);
        let rel = up(2.0 * eps * p24.abs_upper());
        let two_pi = APComplex::pi(self.prec).mul_i64(2);
        &(&two_pi.powi(12) * self.q()) * &p24.with_err(rel)
    }

    /// `u = e^{2πiw}` and `m = max(|u|, 1/|u|)` for the series in `w`.
    fn u_data(&self, w: &APComplex) -> (APComplex, f64) {
        let u = (&APComplex::two_pi_i(self.prec) * w).exp();
        let m = up(u.abs_upper().max(1.0 / u.abs_lower()));
        (u, m)
    }

    fn n_for(&self, m: f64) -> usize {
        let n = Self::terms_for(self.qabs, m, self.prec);
        assert!(m * self.qabs < 0.5, "argument not reduced in the τ direction");
        n.min(self.qpow.len() - 1)
    }

    /// `(℘_τ(w), ℘′_τ(w))` for `w` with `|Im w| ≤ Im τ/2` up to rounding.
    pub fn wp_pair(&self, w: &APComplex, eta1: &APComplex) -> (APComplex, APComplex) {
        let (u, m) = self.u_data(w);
        let n = self.n_for(m);
        let uinv = u.recip();
        let one = APComplex::one(self.prec);
        let f2 = |x: &APComplex| -> APComplex { x / &(&one - x).sqr() };
        let f3 = |x: &APComplex| -> APComplex { &(x * &(&one + x)) / &(&one - x).powi(3) };
        let mut s2 = f2(&u);
        let mut s3 = f3(&u);
        for j in 1..=n {
            let a = &self.qpow[j] * &u;
            let b = &self.qpow[j] * &uinv;
            s2 = &(&s2 + &f2(&a)) + &f2(&b);
            s3 = &(&s3 + &f3(&a)) - &f3(&b);
        }
        // |x/(1−x)²|, |x(1+x)/(1−x)³| ≤ 3|x| for |x| ≤ 1/2·|q|^{1/2}
        let t = 6.0 * self.tail(n, m);
        let tpi = APComplex::two_pi_i(self.prec);
        let tpi2 = tpi.sqr();
        let p = &(&tpi2 * &s2.with_err(t)) - eta1;
        let dp = &(&tpi2 * &tpi) * &s3.with_err(t);
        (p, dp)
    }

    /// `ζ_τ(w)`
    pub fn zeta(&self, w: &APComplex, eta1: &APComplex) -> APComplex {
        let (u, m) = self.u_data(w);
        let n = self.n_for(m);
        let uinv = u.recip();
        let one = APComplex::one(self.prec);
        let f = |x: &APComplex| -> APComplex { x / &(&one - x) };
        let mut s = APComplex::zero(self.prec);
        for j in 1..=n {
            let a = &self.qpow[j] * &u;
            let b = &self.qpow[j] * &uinv;
            s = &(&s - &f(&a)) + &f(&b);
        }
        let s = s.with_err(4.0 * self.tail(n, m));
        let pi_i = APComplex::pi(self.prec).mul_i();
        let main = &(&pi_i * &(&u + &one)) / &(&u - &one);
        &(&(eta1 * w) + &main) + &(&APComplex::two_pi_i(self.prec) * &s)
    }

    /// A logarithm of `σ_τ(w)`.
    pub fn log_sigma(&self, w: &APComplex, eta1: &APComplex) -> APComplex {
        let (u, m) = self.u_data(w);
        let n = self.n_for(m);
        let uinv = u.recip();
        let one = APComplex::one(self.prec);
        let mut s = APComplex::zero(self.prec);
        for j in 1..=n {
            let a = &one - &(&self.qpow[j] * &u);
            let b = &one - &(&self.qpow[j] * &uinv);
            let c = (&one - &self.qpow[j]).sqr();
            s = &s + &(&(&a * &b) / &c).ln();
        }
        let s = s.with_err(2.0 * (2.0 * m + 2.0) * self.tail(n, m));
        let sine = &(&APComplex::pi(self.prec) * w).sin() / &APComplex::pi(self.prec);
        let quad = (eta1 * &w.sqr()).div_i64(2);
        &(&quad + &sine.ln()) + &s
    }
}
