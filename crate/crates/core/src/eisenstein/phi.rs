use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};
use serde::Serialize;

use super::{eis, eis_holomorphic_all, EisWeight};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::numerics::{detect_algebraic, APComplex, FieldLabel};

/// Polynomial in `X_1, …, X_n` with rational coefficients whose monomials
/// all have weight `w` (`X_j` has weight `j`) and degree at most `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsobaricPoly {
    nvars: usize,
    weight: u32,
    degree: u32,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl IsobaricPoly {
    pub fn new(nvars: usize, weight: u32, degree: u32) -> Self {
        IsobaricPoly { nvars, weight, degree, terms: BTreeMap::new() }
    }

    /// All admissible exponent vectors, in a fixed order.
    pub fn monomials(nvars: usize, weight: u32, degree: u32) -> Vec<Vec<u32>> {
        fn rec(var: usize, left_w: u32, left_d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if var == 0 {
                if left_w == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let wv = var as u32;
            let maxe = (left_w / wv).min(left_d);
            for e in 0..=maxe {
                cur[var - 1] = e;
                rec(var - 1, left_w - e * wv, left_d - e, cur, out);
            }
            cur[var - 1] = 0;
        }
        let mut out = Vec::new();
        let mut cur = vec![0; nvars];
        rec(nvars, weight, degree, &mut cur, &mut out);
        out
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn set(&mut self, exps: Vec<u32>, c: Rational) -> Result<()> {
        let w: u32 = exps.iter().enumerate().map(|(j, e)| (j as u32 + 1) * e).sum();
        let d: u32 = exps.iter().sum();
        if exps.len() != self.nvars || w != self.weight || d > self.degree {
            return Err(Error::InvalidInput(format!("monomial {exps:?} is not admissible")));
        }
        if c == 0 {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, c);
        }
        Ok(())
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    /// True iff every monomial satisfies the weight and degree constraints.
    pub fn is_isobaric(&self) -> bool {
        self.terms.keys().all(|e| {
            let w: u32 = e.iter().enumerate().map(|(j, x)| (j as u32 + 1) * x).sum();
            w == self.weight && e.iter().sum::<u32>() <= self.degree
        })
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| *c.denom() == 1)
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out
    }

    pub fn eval(&self, xs: &[APComplex]) -> APComplex {
        let prec = xs[0].prec();
        let mut acc = APComplex::zero(prec);
        for (e, c) in &self.terms {
            let mut m = APComplex::from_rational(c, prec);
            for (x, &p) in xs.iter().zip(e) {
                if p > 0 {
                    m = &m * &x.powi(p as i64);
                }
            }
            acc = &acc + &m;
        }
        acc
    }
}

fn mono_string(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0)
        .map(|(j, &p)| if p == 1 { format!("X{}", j + 1) } else { format!("X{}^{}", j + 1, p) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for IsobaricPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest power of X1 first
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|a, b| b.0.cmp(a.0));
        for (n, (e, c)) in items.into_iter().enumerate() {
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if abs == 1 {
                write!(f, "{}", mono_string(e))?;
            } else {
                write!(f, "{}*{}", abs, mono_string(e))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermJson {
    monomial: String,
    coefficient: String,
}

impl Serialize for IsobaricPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermJson> =
            self.terms.iter().map(|(e, c)| TermJson { monomial: mono_string(e), coefficient: c.to_string() }).collect();
        v.serialize(s)
    }
}

/// Result of [`fit_phi`].
#[derive(Clone, Debug)]
pub struct PhiFit {
    pub weight: EisWeight,
    /// `Φ` normalised so that the coefficient of `X_1^{-i} X_k` is `(−2)^{-i}`.
    pub poly: IsobaricPoly,
    /// The fitted identity `E_{i,k} = raw(E_1, …, E_{k−i})`, so `raw = κ·Φ`.
    pub raw: IsobaricPoly,
    pub kappa: Rational,
    /// Largest residual on the fitting samples.
    pub residual: f64,
}

impl PhiFit {
    /// Largest `|E_{i,k} − raw(E_1, …)|` over `samples`.
    pub fn residual_on(&self, samples: &[(APComplex, Lattice)]) -> Result<f64> {
        let n = self.weight.total() as usize;
        let mut worst: f64 = 0.0;
        for (z, l) in samples {
            let xs = eis_holomorphic_all(z, l, n)?;
            let lhs = eis(self.weight, z, l)?;
            worst = worst.max(lhs.dist_upper(&self.raw.eval(&xs)));
        }
        Ok(worst)
    }

    /// Exponent vector of the leading monomial `X_1^{-i} X_k`.
    pub fn leading_monomial(&self) -> Vec<u32> {
        leading(self.weight)
    }
}

fn leading(w: EisWeight) -> Vec<u32> {
    let mut e = vec![0u32; w.total() as usize];
    e[0] += (-w.i) as u32;
    e[w.k as usize - 1] += 1;
    e
}

/// Deterministic random `(z, L)` pairs in general position: `L = c(Z + τZ)`
/// with `τ` in a compact part of the fundamental domain and `z` inside the
/// cell, away from lattice points.
pub fn phi_samples(n: usize, seed: u64, prec: u32) -> Vec<(APComplex, Lattice)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let tau = APComplex::from_f64_pair(rng.gen_range(-0.45..0.45), rng.gen_range(0.95..1.5), prec);
        let r: f64 = rng.gen_range(0.8..1.25);
        let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let c = APComplex::from_f64_pair(r * th.cos(), r * th.sin(), prec);
        let (a, b): (f64, f64) = (rng.gen_range(0.15..0.85), rng.gen_range(0.15..0.85));
        let z = &c * &(&APComplex::from_f64(a, prec) + &(&tau * &APComplex::from_f64(b, prec)));
        if let Ok(l) = Lattice::new(c.clone(), &c * &tau, prec) {
            out.push((z, l));
        }
    }
    out
}

/// Solve `G x = h` for a small dense complex system by Gaussian elimination
/// with partial pivoting.
fn solve(mut g: Vec<Vec<APComplex>>, mut h: Vec<APComplex>) -> Option<Vec<APComplex>> {
    let n = h.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| g[a][col].mid_abs().partial_cmp(&g[b][col].mid_abs()).unwrap())?;
        if g[piv][col].contains_zero() {
            return None;
        }
        g.swap(col, piv);
        h.swap(col, piv);
        for row in col + 1..n {
            let f = &g[row][col] / &g[col][col];
            for c in col..n {
                let d = &f * &g[col][c];
                g[row][c] = &g[row][c] - &d;
            }
            let d = &f * &h[col];
            h[row] = &h[row] - &d;
        }
    }
    let mut x = vec![APComplex::zero(h[0].prec()); n];
    for row in (0..n).rev() {
        let mut acc = h[row].clone();
        for c in row + 1..n {
            acc = &acc - &(&g[row][c] * &x[c]);
        }
        x[row] = &acc / &g[row][row];
    }
    Some(x)
}

/// Fit `E_{i,k} = Σ c_e Π E_j^{e_j}` over the admissible monomials of weight
/// `k − i` and degree `1 − i` and recognise the coefficients as rationals.
pub fn fit_phi(w: EisWeight, samples: &[(APComplex, Lattice)], tol: f64) -> Result<PhiFit> {
    let w = EisWeight::new(w.i, w.k)?;
    let nvars = w.total() as usize;
    let weight = w.total() as u32;
    let degree = (1 - w.i) as u32;
    let monos = IsobaricPoly::monomials(nvars, weight, degree);
    if samples.len() < 2 * monos.len() {
        return Err(Error::RankDeficient(samples.len(), monos.len()));
    }
    let mut rows = Vec::with_capacity(samples.len());
    let mut rhs = Vec::with_capacity(samples.len());
    for (z, l) in samples {
        let xs = eis_holomorphic_all(z, l, nvars)?;
        let row: Vec<APComplex> = monos
            .iter()
            .map(|e| {
                let mut m = APComplex::one(z.prec());
                for (x, &p) in xs.iter().zip(e) {
                    if p > 0 {
                        m = &m * &x.powi(p as i64);
                    }
                }
                m
            })
            .collect();
        rows.push(row);
        rhs.push(eis(w, z, l)?);
    }
    // normal equations
    let nm = monos.len();
    let prec = rhs[0].prec();
    let mut g = vec![vec![APComplex::zero(prec); nm]; nm];
    let mut h = vec![APComplex::zero(prec); nm];
    for (row, b) in rows.iter().zip(&rhs) {
        for a in 0..nm {
            let ca = row[a].conj();
            for c in 0..nm {
                g[a][c] = &g[a][c] + &(&ca * &row[c]);
            }
            h[a] = &h[a] + &(&ca * b);
        }
    }
    let x = solve(g, h).ok_or(Error::RankDeficient(samples.len(), nm))?;
    let detect_tol = tol.min(1e-20);
    let mut raw = IsobaricPoly::new(nvars, weight, degree);
    for (e, c) in monos.iter().zip(&x) {
        if c.im_part().abs_upper() > detect_tol {
            return Err(Error::NonRationalCoefficient(c.to_string()));
        }
        let re = c.re_part().with_prec(prec);
        let cand = detect_algebraic(&re, FieldLabel::Rational, 1_000_000, detect_tol)
            .map_err(|_| Error::NonRationalCoefficient(c.to_string()))?
            .ok_or_else(|| Error::NonRationalCoefficient(c.to_string()))?;
        raw.set(e.clone(), cand.a)?;
    }
    let lead = raw.coeff(&leading(w));
    if lead == 0 {
        return Err(Error::NonRationalCoefficient("leading coefficient vanished".into()));
    }
    let expected = Rational::from(Integer::from(Integer::i_pow_u(-2, (-w.i) as u32)));
    let kappa = Rational::from(&lead / &expected);
    let poly = raw.scaled(&Rational::from(kappa.recip_ref()));
    let mut fit = PhiFit { weight: w, poly, raw, kappa, residual: 0.0 };
    fit.residual = fit.residual_on(samples)?;
    if fit.residual > tol {
        return Err(Error::NonRationalCoefficient(format!("fit residual {:e} exceeds {:e}", fit.residual, tol)));
    }
    Ok(fit)
}
