use rug::Rational;
use serde::Serialize;

use super::ring::{Coeff, LocalRing, Torsion};
use super::series::{Series, Series2};
use crate::error::{Error, Result};

pub const DEFAULT_TRUNCATION: usize = 30;

#[derive(Clone, Debug)]
pub struct Endomorphism<R: Coeff> {
    pub label: String,
    pub a: R,
    pub series: Series<R>,
}

#[derive(Clone, Debug)]
pub struct FormalGroupLaw<R: Coeff> {
    pub law: Series2<R>,
    pub log: Series<R>,
    pub exp: Series<R>,
    pub endomorphisms: Vec<Endomorphism<R>>,
    /// `(π, [π])` for Lubin–Tate laws
    pub frobenius: Option<(R, Series<R>)>,
    /// Set when the law is known to be a polynomial (`Ĝ_m`).
    pub polynomial: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LawCheck {
    pub unit: bool,
    pub commutative: bool,
    pub associative: bool,
    pub log_normalized: bool,
    pub log_additive: bool,
    pub exp_inverse: bool,
    pub doubling: bool,
    pub endomorphisms: bool,
    pub failures: Vec<String>,
    pub precision: Option<i64>,
}

impl LawCheck {
    pub fn all(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, name: &str, ok: bool, at: impl FnOnce() -> String) -> bool {
        if !ok {
            self.failures.push(format!("{name} fails at {}", at()));
        }
        ok
    }
}

/// `λ = ∫ dT/∂_Y F(T, 0)`.
pub fn fg_log<R: Coeff>(law: &Series2<R>) -> Result<Series<R>> {
    law.dy_at_zero().recip()?.integral()
}

pub fn fg_exp<R: Coeff>(log: &Series<R>) -> Result<Series<R>> {
    log.reversion()
}

impl<R: Coeff> FormalGroupLaw<R> {
    pub fn from_law(law: Series2<R>) -> Result<Self> {
        let log = fg_log(&law)?;
        let exp = fg_exp(&log)?;
        Ok(FormalGroupLaw { law, log, exp, endomorphisms: Vec::new(), frobenius: None, polynomial: false })
    }

    /// `F = exp(λX + λY)`.
    pub fn from_log(log: Series<R>) -> Result<Self> {
        let exp = fg_exp(&log)?;
        let s = Series2::in_x(&log).add(&Series2::in_y(&log));
        let law = Series2::compose_into(&exp, &s)?;
        Ok(FormalGroupLaw { law, log, exp, endomorphisms: Vec::new(), frobenius: None, polynomial: false })
    }

    pub fn d(&self) -> usize {
        self.law.d()
    }

    /// `[a] = exp(a·λ)`.
    pub fn endomorphism(&self, a: &R) -> Result<Series<R>> {
        self.exp.compose(&self.log.scale(a))
    }

    /// Adds `[a]` to the table; for Lubin–Tate laws it is solved from
    /// `f∘[a] = [a]∘f` without the logarithm.
    pub fn add_endomorphism(&mut self, label: &str, a: R) -> Result<()> {
        let series = match &self.frobenius {
            Some((pi, f)) => lt_intertwiner(f, f, &a, pi)?,
            None => self.endomorphism(&a)?,
        };
        self.endomorphisms.push(Endomorphism { label: label.into(), a, series });
        Ok(())
    }

    pub fn find_endomorphism(&self, label: &str) -> Option<&Series<R>> {
        self.endomorphisms.iter().find(|e| e.label == label).map(|e| &e.series)
    }

    /// `F(F(X,Y),Z) = F(X,F(Y,Z))` coefficient-wise; returns the first
    /// failing monomial `(i, j, k)`.
    pub fn associativity_defect(&self) -> Option<(usize, usize, usize)> {
        let d = self.d();
        let g = self.law.powers(d);
        let c = &self.law.c;
        for n in 0..=d {
            for i in 0..=n {
                for j in 0..=n - i {
                    let k = n - i - j;
                    // Σ_a c_{a,k}·G^a[i][j]  vs  Σ_b c_{i,b}·G^b[j][k]
                    let mut lhs = c[0][0].zero_of();
                    for a in 0..=(i + j).min(d - k) {
                        let t = &g[a].c[i][j];
                        if !t.is_zero() && !c[a][k].is_zero() {
                            lhs = lhs.add(&c[a][k].mul(t));
                        }
                    }
                    let mut rhs = c[0][0].zero_of();
                    for b in 0..=(j + k).min(d - i) {
                        let t = &g[b].c[j][k];
                        if !t.is_zero() && !c[i][b].is_zero() {
                            rhs = rhs.add(&c[i][b].mul(t));
                        }
                    }
                    if !lhs.eq_exact(&rhs) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// All axioms and contracts, exact to the truncation.
    pub fn check(&self) -> Result<LawCheck> {
        let d = self.d();
        let proto = self.law.c[0][0].clone();
        let t = Series::var(&proto, d);
        let mut r = LawCheck { precision: self.law.precision(), ..Default::default() };

        let fx0 = self.law.at_y_zero();
        let f0y = self.law.swap().at_y_zero();
        r.unit = r.record("F(X,0) = X", fx0.eq_exact(&t) && f0y.eq_exact(&t), || {
            format!("{:?}", fx0.first_difference(&t).or(f0y.first_difference(&t)))
        });
        let sw = self.law.swap();
        r.commutative =
            r.record("F(X,Y) = F(Y,X)", self.law.eq_exact(&sw), || format!("{:?}", self.law.first_difference(&sw)));
        let assoc = self.associativity_defect();
        r.associative = r.record("associativity", assoc.is_none(), || format!("{assoc:?}"));

        let one = proto.one_of();
        r.log_normalized =
            r.record("λ(T) = T + O(T²)", self.log.c[0].is_zero() && self.log.c[1].eq_exact(&one), || {
                "degree 1".into()
            });
        let lhs = Series2::compose_into(&self.log, &self.law)?;
        let rhs = Series2::in_x(&self.log).add(&Series2::in_y(&self.log));
        r.log_additive =
            r.record("λ(F(X,Y)) = λ(X) + λ(Y)", lhs.eq_exact(&rhs), || format!("{:?}", lhs.first_difference(&rhs)));
        let le = self.log.compose(&self.exp)?;
        let el = self.exp.compose(&self.log)?;
        r.exp_inverse = r.record("λ∘exp = exp∘λ = T", le.eq_exact(&t) && el.eq_exact(&t), || {
            format!("{:?}", le.first_difference(&t).or(el.first_difference(&t)))
        });

        let two = self.endomorphism(&proto.int_of(2))?;
        let diag = self.law.diagonal();
        r.doubling = r.record("[2](T) = F(T,T)", two.eq_exact(&diag), || format!("{:?}", two.first_difference(&diag)));

        let mut ok = true;
        for e in &self.endomorphisms {
            let lhs = Series2::compose_into(&e.series, &self.law)?;
            let rhs = self.law.substitute(&e.series, &e.series)?;
            let hom = lhs.eq_exact(&rhs);
            let lin = self.log.compose(&e.series)?.eq_exact(&self.log.scale(&e.a));
            ok &= r.record(&format!("[{}] endomorphism", e.label), hom && lin, || {
                format!("{:?}", lhs.first_difference(&rhs))
            });
        }
        if let Some((pi, f)) = &self.frobenius {
            let lhs = Series2::compose_into(f, &self.law)?;
            let rhs = self.law.substitute(f, f)?;
            let hom = lhs.eq_exact(&rhs);
            let lin = self.log.compose(f)?.eq_exact(&self.log.scale(pi));
            ok &= r.record("[π] = f endomorphism", hom && lin, || format!("{:?}", lhs.first_difference(&rhs)));
        }
        r.endomorphisms = ok;
        Ok(r)
    }
}

impl<R: Coeff> Series2<R> {
    /// `self(T, T)`.
    pub fn diagonal(&self) -> Series<R> {
        let d = self.d();
        let mut out = Series::zeros(&self.c[0][0], d);
        for i in 0..=d {
            for j in 0..=d - i {
                out.c[i + j] = out.c[i + j].add(&self.c[i][j]);
            }
        }
        out
    }
}

/// `T^shift · s(T)`.
#[derive(Clone, Debug)]
pub struct Laurent<R: Coeff> {
    pub shift: i64,
    pub s: Series<R>,
}

#[derive(Clone, Debug)]
pub struct WeierstrassFg {
    pub a4: Rational,
    pub a6: Rational,
    pub group: FormalGroupLaw<Rational>,
    /// `w = −1/y` as a series in `T = −x/y`
    pub w: Series<Rational>,
    pub x: Laurent<Rational>,
    pub y: Laurent<Rational>,
    /// `ω(T) = (dx/2y)/dT`
    pub omega: Series<Rational>,
}

impl WeierstrassFg {
    /// `y² − x³ − a4·x − a6` times `T^6`, which must vanish.
    pub fn curve_residual(&self) -> Series<Rational> {
        let xs = &self.x.s;
        let ys = &self.y.s;
        let d = xs.d();
        let t4 = Series::monomial(self.a4.clone(), 4, d);
        let t6 = Series::monomial(self.a6.clone(), 6, d);
        ys.mul(ys).sub(&xs.mul(xs).mul(xs)).sub(&t4.mul(xs)).sub(&t6)
    }

    /// `λ′(T) = ω(T)` to truncation.
    pub fn differential_mismatch(&self) -> Option<usize> {
        let lp = self.group.log.derivative();
        lp.first_difference(&self.omega)
    }
}

/// Formal group of `y² = x³ + a4·x + a6` in the parameter `T = −x/y`, with
/// the law from the chord construction and `ω = dx/(2y)`.
pub fn weierstrass_fg(a4: &Rational, a6: &Rational, d: usize) -> Result<WeierstrassFg> {
    let disc = Rational::from(4) * a4.clone() * a4 * a4 + Rational::from(27) * a6.clone() * a6;
    if disc == 0 {
        return Err(Error::SingularCurve);
    }
    if d < 2 {
        return Err(Error::InvalidInput("truncation below 2".into()));
    }
    let proto = Rational::new();
    // w = T³ + a4·T·w² + a6·w³, four more correct terms per pass
    let dw = d + 3;
    let t3 = Series::monomial(Rational::from(1), 3, dw);
    let a4t = Series::monomial(a4.clone(), 1, dw);
    let mut w = t3.clone();
    for _ in 0..=dw / 4 + 1 {
        let w2 = w.mul(&w);
        w = t3.add(&a4t.mul(&w2)).add(&w2.mul(&w).scale(a6));
    }
    // u = w/T³, x = T^{−2}/u, y = −T^{−3}/u
    let u = Series::from_coeffs(&proto, w.c[3..].to_vec(), d);
    let xi = u.recip()?;
    let x = Laurent { shift: -2, s: xi.clone() };
    let y = Laurent { shift: -3, s: xi.neg() };
    // ω = 1 − T·X′/(2X) with X = 1/u
    let tx = Series::from_coeffs(&proto, [vec![proto.clone()], xi.derivative().c].concat(), d);
    let omega = Series::constant(Rational::from(1), d).sub(&tx.mul(&xi.recip()?).scale(&Rational::from((1, 2))));

    let law = chord_law(a4, a6, &w, d)?;
    let group = FormalGroupLaw::from_law(law)?;
    Ok(WeierstrassFg { a4: a4.clone(), a6: a6.clone(), group, w: w.truncate(d), x, y, omega })
}

fn chord_law(a4: &Rational, a6: &Rational, w: &Series<Rational>, d: usize) -> Result<Series2<Rational>> {
    let proto = Rational::new();
    // slope (w(z2) − w(z1))/(z2 − z1) = Σ A_n Σ_{a+b=n−1} z1^a z2^b
    let mut lam = Series2::zeros(&proto, d);
    for n in 3..=(d + 1).min(w.d()) {
        if w.c[n] == 0 {
            continue;
        }
        for a in 0..n {
            lam.c[a][n - 1 - a] += &w.c[n];
        }
    }
    let z1 = Series2::in_x(&Series::var(&proto, d));
    let z2 = Series2::in_y(&Series::var(&proto, d));
    let w1 = Series2::in_x(&w.truncate(d));
    let nu = w1.sub(&lam.mul(&z1));
    let lam2 = lam.mul(&lam);
    let num = lam.mul(&nu).scale(&(Rational::from(2) * a4)).add(&lam2.mul(&nu).scale(&(Rational::from(3) * a6)));
    let mut den = lam2.scale(a4).add(&lam2.mul(&lam).scale(a6));
    den.c[0][0] += 1;
    Ok(z1.add(&z2).add(&num.mul(&den.recip()?)))
}

/// The unique `φ ≡ a·T` with `f2∘φ = φ∘f`, for Frobenius lifts `f, f2` of
/// the same `π`.
pub fn lt_intertwiner<R: Coeff>(f: &Series<R>, f2: &Series<R>, a: &R, pi: &R) -> Result<Series<R>> {
    let d = f.d().min(f2.d());
    let mut phi = Series::monomial(a.clone(), 1, d);
    let mut pin = pi.clone();
    for n in 2..=d {
        pin = pin.mul(pi);
        let lhs = f2.compose(&phi)?;
        let rhs = phi.compose(f)?;
        let c = rhs.c[n].sub(&lhs.c[n]).div(&pi.sub(&pin))?;
        phi.c[n] = c;
    }
    Ok(phi)
}

fn check_frobenius_lift<R: LocalRing>(pi: &R, q: u64, f: &Series<R>) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidFrobeniusLift(m));
    if q < 2 || q as usize > f.d() {
        return bad(format!("q = {q} outside 2..={}", f.d()));
    }
    if pi.valuation_wrt(pi) != Some(1) {
        return bad("π is not a uniformizer".into());
    }
    if !f.c[0].is_zero() || !f.c[1].eq_exact(pi) {
        return bad("f(T) ≢ πT mod T²".into());
    }
    for (n, c) in f.c.iter().enumerate() {
        if !c.is_integral(pi) {
            return bad(format!("coefficient of T^{n} is not integral"));
        }
        let r = if n == q as usize { c.sub(&c.one_of()) } else { c.clone() };
        if !r.divisible_by(pi) {
            return bad(format!("f(T) ≢ T^{q} mod π at T^{n}"));
        }
    }
    Ok(())
}

fn binomial_row(p: u64) -> Vec<i64> {
    let mut row = vec![1i64];
    for k in 1..=p as i64 {
        row.push(row[k as usize - 1] * (p as i64 - k + 1) / k);
    }
    row
}

/// The Lubin–Tate law `F_f` with `[π] = f`, its logarithm and exponential.
pub fn lubin_tate<R: LocalRing>(pi: &R, q: u64, f: &Series<R>, d: usize) -> Result<FormalGroupLaw<R>> {
    check_frobenius_lift(pi, q, f)?;
    let f = f.truncate(d);
    // λ∘f = π·λ degree by degree
    let fp = super::series::powers1(&f, d);
    let mut log = Series::var(pi, d);
    let mut pin = pi.clone();
    for n in 2..=d {
        pin = pin.mul(pi);
        let mut acc = pi.zero_of();
        for k in 1..n {
            if !log.c[k].is_zero() && !fp[k].c[n].is_zero() {
                acc = acc.add(&log.c[k].mul(&fp[k].c[n]));
            }
        }
        log.c[n] = acc.div(&pi.sub(&pin))?;
    }
    let mut g = FormalGroupLaw::from_log(log)?;
    // (1 + T)^p − 1 with π = p is Ĝ_m by uniqueness
    let row = binomial_row(q);
    g.polynomial = q < 60
        && pi.eq_exact(&pi.int_of(q as i64))
        && f.c.iter().enumerate().all(|(n, c)| match row.get(n) {
            Some(_) if n == 0 => c.is_zero(),
            Some(&b) => c.eq_exact(&pi.int_of(b)),
            None => c.is_zero(),
        });
    g.frobenius = Some((pi.clone(), f));
    Ok(g)
}

/// `f(T) = (1 + T)^p − 1` over `Q`, the law `X + Y + XY`.
pub fn multiplicative(p: u64, d: usize) -> Result<FormalGroupLaw<Rational>> {
    let mut c: Vec<Rational> = binomial_row(p).into_iter().map(Rational::from).collect();
    c[0] = Rational::new();
    let f = Series::from_coeffs(&Rational::new(), c, d);
    lubin_tate(&Rational::from(p), p, &f, d)
}

/// `θ ≡ T` with `θ∘f = f′∘θ`, the isomorphism `F_f → F_{f′}`.
#[derive(Clone, Debug)]
pub struct CanonicalIso<R: Coeff> {
    pub theta: Series<R>,
    /// `f′∘θ = θ∘f`
    pub conjugates: bool,
    /// `θ(F_f(X,Y)) = F_{f′}(θX, θY)`
    pub homomorphism: bool,
}

pub fn canonical_isomorphism<R: Coeff>(a: &FormalGroupLaw<R>, b: &FormalGroupLaw<R>) -> Result<CanonicalIso<R>> {
    let (Some((pi, f)), Some((pi2, f2))) = (&a.frobenius, &b.frobenius) else {
        return Err(Error::InvalidInput("both laws must be Lubin–Tate".into()));
    };
    if !pi.eq_exact(pi2) {
        return Err(Error::InvalidInput("laws are for different uniformizers".into()));
    }
    let theta = lt_intertwiner(f, f2, &pi.one_of(), pi)?;
    let conjugates = f2.compose(&theta)?.eq_exact(&theta.compose(f)?);
    let lhs = Series2::compose_into(&theta, &a.law)?;
    let rhs = b.law.substitute(&theta, &theta)?;
    Ok(CanonicalIso { theta, conjugates, homomorphism: lhs.eq_exact(&rhs) })
}

fn eval_at<R: Coeff>(s: &Series<R>, x: &Torsion<R>) -> Torsion<R> {
    let e = &x.e;
    let mut r = Torsion::from_base(s.c[s.d()].clone(), e);
    for k in (0..s.d()).rev() {
        r = r.mul(x).add(&Torsion::from_base(s.c[k].clone(), e));
    }
    r
}

/// Coleman's norm: the series `N g` with
/// `(N g)([π](T)) = ∏_{[π]κ = 0} g(T [+] κ)`, computed in
/// `base[X]/([π](X)/X)`.
///
/// The product is exact when the torsion generator is nilpotent at the
/// working precision or the law is polynomial; in the latter case `g` is
/// read as the polynomial of its stored coefficients.
pub fn coleman_norm<R: LocalRing>(g: &Series<R>, law: &FormalGroupLaw<R>, pi: &R, q: u64) -> Result<Series<R>> {
    let Some((pi0, f)) = &law.frobenius else {
        return Err(Error::InvalidInput("law has no Frobenius endomorphism".into()));
    };
    if !pi0.eq_exact(pi) {
        return Err(Error::InvalidInput("π differs from the law's uniformizer".into()));
    }
    let d = g.d().min(law.d());
    let qu = q as usize;
    if qu > f.d() || !f.c[qu].eq_exact(&pi.one_of()) || f.c[qu + 1..].iter().any(|c| !c.is_zero()) {
        return Err(Error::InvalidInput("[π] must be a monic polynomial of degree q".into()));
    }
    if !(2..64).contains(&q) || !(2..q).all(|k| !q.is_multiple_of(k)) {
        return Err(Error::InvalidInput(format!("residue field size {q} is not a small prime")));
    }
    match g.c.iter().find(|c| !c.is_zero()) {
        Some(c) if !c.divisible_by(pi) => {}
        _ => return Err(Error::NonUnitInput),
    }
    // E(X) = f(X)/X
    let e = Torsion::modulus(f.c[1..qu].to_vec());
    let x = Torsion::generator(&e);
    let nilpotent = x.pow(d as u32 + 1).is_zero();
    if !nilpotent && !law.polynomial {
        return Err(Error::InvalidInput(
            "torsion generator is not nilpotent and the law is not polynomial; the product is not computable to truncation"
                .into(),
        ));
    }
    let mut kappas = vec![Torsion::from_base(pi.zero_of(), &e)];
    for a in 1..q as i64 {
        let s = lt_intertwiner(f, f, &pi.int_of(a), pi)?;
        let k = eval_at(&s, &x);
        if !eval_at(f, &k).is_zero() {
            return Err(Error::DescentFailure(format!("[{a}](X) is not π-torsion")));
        }
        kappas.push(k);
    }
    let lt = law.law.map(|c| Ok(Torsion::from_base(c.clone(), &e)))?;
    let gt = g.map(|c| Ok(Torsion::from_base(c.clone(), &e)))?;
    let one = Torsion::from_base(pi.one_of(), &e);
    let mut h = Series::constant(one, d);
    for k in &kappas {
        // F(T, κ) = Σ_i T^i Σ_j c_ij κ^j
        let kp: Vec<Torsion<R>> =
            std::iter::successors(Some(k.one_of()), |p| Some(p.mul(k))).take(law.d() + 1).collect();
        let mut s = Series::zeros(&k.zero_of(), d);
        for i in 0..=d {
            for (j, c) in lt.c[i].iter().enumerate() {
                if !c.is_zero() {
                    s.c[i] = s.c[i].add(&c.mul(&kp[j]));
                }
            }
        }
        let mut r = Series::constant(gt.c[gt.d()].clone(), d);
        for m in (0..gt.d()).rev() {
            r = r.mul(&s);
            r.c[0] = r.c[0].add(&gt.c[m]);
        }
        h = h.mul(&r);
    }
    let base = h.map(|c| c.as_base().ok_or_else(|| Error::DescentFailure(c.to_string())))?;
    base.compose(&f.truncate(d).reversion()?)
}
