//! Recognition of elements of `Q` or `K` from numerical approximations by
//! LLL reduction of a small integer lattice.

use std::fmt;

use rug::float::Round;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use super::APComplex;
use crate::error::{Error, Result};
use crate::field::ImagQuadField;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldLabel {
    Rational,
    Quadratic(ImagQuadField),
}

/// `(a + b·ω_K)` with rational `a, b`; `b = 0` for candidates in `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicCandidate {
    pub field: FieldLabel,
    pub a: Rational,
    pub b: Rational,
    /// `max(|a·D|, |b·D|, D)` with `D` the common denominator.
    pub height: Integer,
    pub residual: f64,
}

impl AlgebraicCandidate {
    pub fn embed(&self, prec: u32) -> APComplex {
        let a = APComplex::from_rational(&self.a, prec);
        match self.field {
            FieldLabel::Rational => a,
            FieldLabel::Quadratic(k) => &a + &(&APComplex::from_rational(&self.b, prec) * &k.omega(prec)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Norm from `K` to `Q` (or the square of the rational).
    pub fn norm(&self) -> Rational {
        match self.field {
            FieldLabel::Rational => Rational::from(&self.a * &self.a),
            FieldLabel::Quadratic(k) => {
                let (t, n) = k.min_poly();
                let aa = Rational::from(&self.a * &self.a);
                let ab = Rational::from(&self.a * &self.b) * Integer::from(t);
                let bb = Rational::from(&self.b * &self.b) * Integer::from(n);
                aa + ab + bb
            }
        }
    }
}

impl fmt::Display for AlgebraicCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            FieldLabel::Rational => write!(f, "{}", self.a),
            FieldLabel::Quadratic(k) => {
                let w = if k.d_k() == 4 { "i" } else { "w" };
                write!(f, "{} + ({}){}", self.a, self.b, w)
            }
        }
    }
}

#[derive(Serialize)]
struct CandidateJson {
    a: String,
    b: String,
    height: String,
    residual: String,
}

impl Serialize for AlgebraicCandidate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CandidateJson {
            a: self.a.to_string(),
            b: self.b.to_string(),
            height: self.height.to_string(),
            residual: format!("{:e}", self.residual),
        }
        .serialize(s)
    }
}

/// Textbook LLL with `δ = 3/4` over exact rationals. Intended for the tiny
/// dimensions used here.
pub fn lll_reduce(mut b: Vec<Vec<Integer>>) -> Vec<Vec<Integer>> {
    let n = b.len();
    if n < 2 {
        return b;
    }
    let delta = Rational::from((3, 4));
    let gram_schmidt = |b: &Vec<Vec<Integer>>| -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let dim = b[0].len();
        let mut bstar: Vec<Vec<Rational>> = Vec::with_capacity(n);
        let mut mu = vec![vec![Rational::new(); n]; n];
        let mut norms = Vec::with_capacity(n);
        for i in 0..n {
            let mut v: Vec<Rational> = b[i].iter().map(Rational::from).collect();
            for j in 0..i {
                let num: Rational = (0..dim).map(|t| Rational::from(&bstar[j][t] * &b[i][t])).sum();
                let m = if norms[j] == 0 { Rational::new() } else { num / &norms[j] };
                for t in 0..dim {
                    let d = Rational::from(&m * &bstar[j][t]);
                    v[t] -= d;
                }
                mu[i][j] = m;
            }
            let nv: Rational = v.iter().map(|x| Rational::from(x * x)).sum();
            norms.push(nv);
            bstar.push(v);
        }
        (mu, norms)
    };
    let (mut mu, mut norms) = gram_schmidt(&b);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 100_000 {
            break;
        }
        for j in (0..k).rev() {
            let q = mu[k][j].clone().round();
            let q = q.numer().clone();
            if q != 0 {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(bj.iter()) {
                    *x -= Integer::from(&q * y);
                }
                let r = gram_schmidt(&b);
                mu = r.0;
                norms = r.1;
            }
        }
        let lhs = norms[k].clone();
        let rhs = (delta.clone() - Rational::from(&mu[k][k - 1] * &mu[k][k - 1])) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let r = gram_schmidt(&b);
            mu = r.0;
            norms = r.1;
            k = k.saturating_sub(1).max(1);
        }
    }
    b
}

fn to_scaled_int(x: &Float, scale_bits: u32) -> Integer {
    let mut y = Float::with_val(x.prec() + scale_bits + 8, x);
    y <<= scale_bits;
    y.round_mut();
    y.to_integer_round(Round::Nearest).map(|(i, _)| i).unwrap_or_default()
}

/// Recognise `x` as `a + b·ω_K` (or a rational) of height at most
/// `height_bound` within `tol`.
///
/// Returns `Ok(None)` if nothing qualifies and `AmbiguousDetection` if two
/// distinct candidates of bounded height lie within `2·tol`. When
/// `4·tol·H² < 1` two such candidates cannot exist, since distinct elements
/// of height `≤ H` differ by at least `1/H²`.
pub fn detect_algebraic(
    x: &APComplex,
    field: FieldLabel,
    height_bound: u64,
    tol: f64,
) -> Result<Option<AlgebraicCandidate>> {
    if !(x.err() < tol / 4.0) {
        return Err(Error::InvalidInput(format!("detection needs err < tol/4 (err {:e}, tol {:e})", x.err(), tol)));
    }
    let prec = x.prec().max(64);
    let scale_bits = (1.0 / tol).log2().ceil().max(1.0) as u32;
    let c = Integer::from(1) << scale_bits;
    let xr = to_scaled_int(x.re(), scale_bits);
    let xi = to_scaled_int(x.im(), scale_bits);
    let zero = || Integer::new();
    let basis: Vec<Vec<Integer>> = match field {
        FieldLabel::Rational => {
            vec![vec![Integer::from(1), zero(), xr, xi], vec![zero(), Integer::from(1), -c.clone(), zero()]]
        }
        FieldLabel::Quadratic(k) => {
            let w = k.omega(prec + scale_bits);
            let wr = to_scaled_int(w.re(), scale_bits);
            let wi = to_scaled_int(w.im(), scale_bits);
            vec![
                vec![Integer::from(1), zero(), zero(), xr, xi],
                vec![zero(), Integer::from(1), zero(), -c.clone(), zero()],
                vec![zero(), zero(), Integer::from(1), -wr, -wi],
            ]
        }
    };
    let reduced = lll_reduce(basis);
    let mut cands: Vec<AlgebraicCandidate> = Vec::new();
    let consider = |v: &[Integer], cands: &mut Vec<AlgebraicCandidate>| {
        let d = v[0].clone();
        if d == 0 {
            return;
        }
        let (a, b) = match field {
            FieldLabel::Rational => (Rational::from((v[1].clone(), d.clone())), Rational::new()),
            FieldLabel::Quadratic(_) => {
                (Rational::from((v[1].clone(), d.clone())), Rational::from((v[2].clone(), d.clone())))
            }
        };
        let den = Integer::from(a.denom().lcm_ref(b.denom()));
        let h = [Integer::from(a.numer() * &den) / a.denom(), Integer::from(b.numer() * &den) / b.denom(), den.clone()]
            .into_iter()
            .map(|t| t.abs())
            .max()
            .unwrap();
        if h > height_bound {
            return;
        }
        let mut cand = AlgebraicCandidate { field, a, b, height: h, residual: 0.0 };
        cand.residual = cand.embed(prec).mid_dist(x);
        if cand.residual < 2.0 * tol && !cands.iter().any(|c| c.a == cand.a && c.b == cand.b) {
            cands.push(cand);
        }
    };
    for v in &reduced {
        consider(v, &mut cands);
    }
    // small combinations of the two shortest vectors catch near-ties
    if reduced.len() >= 2 {
        for s in [-1i32, 1] {
            let v: Vec<Integer> = reduced[0].iter().zip(&reduced[1]).map(|(p, q)| p + Integer::from(q * s)).collect();
            consider(&v, &mut cands);
        }
    }
    cands.sort_by(|p, q| p.residual.partial_cmp(&q.residual).unwrap());
    if cands.len() >= 2 {
        return Err(Error::AmbiguousDetection(cands[0].to_string(), cands[1].to_string()));
    }
    Ok(cands.into_iter().find(|c| c.residual < tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recognises_simple_rational() {
        let x = APComplex::from_f64(0.5, 256);
        let c = detect_algebraic(&x, FieldLabel::Rational, 10, 1e-30).unwrap().unwrap();
        assert_eq!(c.a, Rational::from((1, 2)));
    }

    #[test]
    fn recognises_gaussian_rational() {
        let k = ImagQuadField::new(4).unwrap();
        let x = APComplex::from_f64_pair(1.25, -0.75, 256);
        let c = detect_algebraic(&x, FieldLabel::Quadratic(k), 10, 1e-30).unwrap().unwrap();
        assert_eq!(c.a, Rational::from((5, 4)));
        assert_eq!(c.b, Rational::from((-3, 4)));
    }

    #[test]
    fn pi_is_not_a_small_rational() {
        let x = APComplex::pi(256);
        assert!(detect_algebraic(&x, FieldLabel::Rational, 1_000_000, 1e-30).unwrap().is_none());
        // continued-fraction oracle: best approximations with denominator ≤ 10^6
        // miss π by far more than 10^-30
        let mut best = f64::INFINITY;
        let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
        let mut r = Float::with_val(256, rug::float::Constant::Pi);
        loop {
            let a = r.to_f64().floor() as i128;
            let (h2, k2) = (a * h1 + h0, a * k1 + k0);
            if k2 > 1_000_000 {
                break;
            }
            let approx = Float::with_val(256, h2) / Float::with_val(256, k2);
            let diff = Float::with_val(256, &approx - &Float::with_val(256, rug::float::Constant::Pi));
            best = best.min(diff.to_f64().abs());
            h0 = h1;
            h1 = h2;
            k0 = k1;
            k1 = k2;
            r = Float::with_val(256, 1) / (r - a);
        }
        assert!(best > 1e-15);
    }

    #[test]
    fn recognises_element_of_eisenstein_field() {
        let k = ImagQuadField::new(3).unwrap();
        let truth = k.embed(&k.elem(7, -3), 256).div_i64(11);
        let c = detect_algebraic(&truth, FieldLabel::Quadratic(k), 100, 1e-40).unwrap().unwrap();
        assert_eq!((c.a.clone(), c.b.clone()), (Rational::from((7, 11)), Rational::from((-3, 11))));
    }
}
