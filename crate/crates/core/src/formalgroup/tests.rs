use rug::{Integer, Rational};

use super::*;
use crate::error::Error;
use crate::field::ImagQuadField;

const D: usize = DEFAULT_TRUNCATION;
const PREC: i64 = 90;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn qseries(c: &[(usize, Rational)], d: usize) -> Series<Rational> {
    let mut s = Series::zeros(&Rational::new(), d);
    for (n, x) in c {
        s.c[*n] = x.clone();
    }
    s
}

/// `i ∈ Z_5` with `i ≡ 3 mod 5`, so `2 + i` is a uniformizer.
fn i5() -> Padic {
    Padic::hensel_sqrt(5, -1, 3, PREC).unwrap()
}

fn pi5() -> Padic {
    i5().add(&i5().int_of(2))
}

/// `f = πT + T^5` over `Z_5`.
fn lt5(d: usize) -> FormalGroupLaw<Padic> {
    let pi = pi5();
    let mut f = Series::zeros(&pi, d);
    f.c[1] = pi.clone();
    f.c[5] = pi.one_of();
    lubin_tate(&pi, 5, &f, d).unwrap()
}

#[test]
fn padic_arithmetic() {
    let i = i5();
    assert!(i.mul(&i).add(&i.one_of()).is_zero());
    assert_eq!(i.to_padic_int(2).unwrap().r, 18);
    let pi = pi5();
    assert_eq!(pi.valuation(), Some(1));
    let x = Padic::from_rational(5, &q(7, 50), 20).unwrap();
    assert_eq!(x.valuation(), Some(-2));
    assert!(x.mul(&x.inv().unwrap()).sub(&x.one_of()).is_zero());
    assert!(Padic::hensel_sqrt(5, -1, 1, 10).is_err());
    let r = PadicInt::new(5, 3, Integer::from(-1));
    assert_eq!(r.r, 124);
    assert!(r.inv().is_ok());
    assert!(matches!(r.int_of(10).inv(), Err(Error::NonUnitInput)));
}

#[test]
fn torsion_ring_reduces_by_the_modulus() {
    // X^4 = −π in Q[X]/(X^4 + 5)
    let e = Torsion::modulus(vec![Rational::from(5), Rational::new(), Rational::new(), Rational::new()]);
    let x = Torsion::generator(&e);
    let x4 = x.pow(4);
    assert_eq!(x4.as_base(), Some(Rational::from(-5)));
    assert!(x.pow(3).as_base().is_none());
    assert!(matches!(x.inv(), Err(Error::NonUnitInput)));
}

#[test]
fn series_algebra() {
    let t = Series::var(&Rational::new(), 12);
    let one_plus = Series::constant(Rational::from(1), 12).add(&t);
    let inv = one_plus.recip().unwrap();
    for n in 0..=12 {
        assert_eq!(inv.c[n], if n % 2 == 0 { 1 } else { -1 });
    }
    // log(1+T) and exp(T) − 1 are mutually inverse
    let log = inv.integral().unwrap().truncate(12);
    let rev = log.reversion().unwrap();
    let mut fact = Rational::from(1);
    for n in 1..=12 {
        fact *= n as u32;
        assert_eq!(rev.c[n], fact.clone().recip());
    }
    assert!(matches!(one_plus.compose(&one_plus), Err(Error::InvalidInput(_))));
    assert!(matches!(t.recip(), Err(Error::NonUnitInput)));
}

#[test]
fn bivariate_reciprocal_and_powers() {
    let x = Series2::in_x(&Series::var(&Rational::new(), 10));
    let y = Series2::in_y(&Series::var(&Rational::new(), 10));
    let mut u = x.add(&y);
    u.c[0][0] = Rational::from(1);
    let prod = u.mul(&u.recip().unwrap());
    let mut one = Series2::zeros(&Rational::new(), 10);
    one.c[0][0] = Rational::from(1);
    assert!(prod.eq_exact(&one));
    // (X + Y)^3 has binomial coefficients
    let p3 = &x.add(&y).powers(3)[3];
    assert_eq!((p3.c[1][2].clone(), p3.c[3][0].clone()), (Rational::from(3), Rational::from(1)));
}

#[test]
fn multiplicative_group() {
    let g = multiplicative(5, D).unwrap();
    assert!(g.polynomial);
    for i in 0..=D {
        for j in 0..=D - i {
            let want = matches!((i, j), (1, 0) | (0, 1) | (1, 1));
            assert_eq!(g.law.c[i][j] == 1, want, "({i},{j})");
            assert!(want || g.law.c[i][j] == 0);
        }
    }
    for n in 1..=D {
        let sign = if n % 2 == 1 { 1 } else { -1 };
        assert_eq!(g.log.c[n], q(sign, n as i64), "T^{n}");
    }
    let r = g.check().unwrap();
    assert!(r.all(), "{:?}", r.failures);
}

#[test]
fn multiplicative_endomorphisms_compose() {
    let mut g = multiplicative(5, D).unwrap();
    for (label, a) in [("2", 2), ("3", 3), ("pi", 5), ("6", 6), ("10", 10), ("15", 15), ("4", 4), ("9", 9), ("25", 25)]
    {
        g.add_endomorphism(label, Rational::from(a)).unwrap();
    }
    // [2] = (1 + T)^2 − 1
    let two = g.find_endomorphism("2").unwrap();
    assert!(two.eq_exact(&qseries(&[(1, Rational::from(2)), (2, Rational::from(1))], D)));
    let (_, f) = g.frobenius.clone().unwrap();
    assert!(g.find_endomorphism("pi").unwrap().eq_exact(&f));
    let labels = [("2", 2), ("3", 3), ("pi", 5)];
    for (la, a) in labels {
        for (lb, b) in labels {
            let ab = g.find_endomorphism(&(a * b).to_string()).or_else(|| {
                if a * b == 5 {
                    g.find_endomorphism("pi")
                } else {
                    None
                }
            });
            let ab = ab.unwrap_or_else(|| panic!("missing [{}]", a * b));
            let comp = g.find_endomorphism(la).unwrap().compose(g.find_endomorphism(lb).unwrap()).unwrap();
            assert!(comp.eq_exact(ab), "[{la}]∘[{lb}]");
        }
    }
    let r = g.check().unwrap();
    assert!(r.all(), "{:?}", r.failures);
}

#[test]
fn weierstrass_expansions() {
    let fg = weierstrass_fg(&Rational::from(-1), &Rational::new(), D).unwrap();
    // u = w/T³ solves u = 1 + a4·T⁴·u², the Catalan series in −T⁴
    let cat = [1, 1, 2, 5, 14, 42, 132, 429];
    for (k, c) in cat.iter().enumerate() {
        let n = 3 + 4 * k;
        if n <= D {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(fg.w.c[n], sign * c, "T^{n}");
        }
    }
    // x·T² → 1, ω = 1 + 2a4·T⁴ + …
    assert_eq!(fg.x.shift, -2);
    assert_eq!(fg.x.s.c[0], 1);
    assert_eq!(fg.omega.c[0], 1);
    assert_eq!(fg.omega.c[4], -2);
    assert!(fg.curve_residual().c.iter().all(|c| *c == 0));
    assert_eq!(fg.differential_mismatch(), None);
    // F ≡ X + Y to degree 4; the quintic term is −2a4(X⁴Y + 2X³Y² + 2X²Y³ + XY⁴)
    let law = &fg.group.law;
    for n in 2..=4 {
        assert!((0..=n).all(|i| law.c[i][n - i] == 0));
    }
    for (i, c) in [(0, 0), (1, 2), (2, 4), (3, 4), (4, 2), (5, 0)] {
        assert_eq!(law.c[i][5 - i], c, "X^{i}Y^{}", 5 - i);
    }
    let r = fg.group.check().unwrap();
    assert!(r.all(), "{:?}", r.failures);
}

#[test]
fn weierstrass_with_both_coefficients() {
    let fg = weierstrass_fg(&Rational::from(2), &Rational::from(3), D).unwrap();
    assert_eq!(fg.omega.c[4], 4);
    assert_eq!(fg.omega.c[6], 9);
    assert!(fg.curve_residual().c.iter().all(|c| *c == 0));
    assert_eq!(fg.differential_mismatch(), None);
    let r = fg.group.check().unwrap();
    assert!(r.all(), "{:?}", r.failures);
}

#[test]
fn log_denominators_divide_the_degree() {
    let fg = weierstrass_fg(&Rational::from(-1), &Rational::new(), D).unwrap();
    for (n, c) in fg.group.log.c.iter().enumerate().skip(1) {
        let scaled = c.clone() * Rational::from(n as u32);
        assert_eq!(*scaled.denom(), 1, "T^{n}: {c}");
    }
}

#[test]
fn singular_curves_are_refused() {
    for (a4, a6) in [(0, 0), (-3, 2)] {
        let r = weierstrass_fg(&Rational::from(a4), &Rational::from(a6), 10);
        assert!(matches!(r, Err(Error::SingularCurve)));
    }
}

#[test]
fn five_adic_lubin_tate() {
    let mut g = lt5(D);
    assert!(!g.polynomial);
    let pi = pi5();
    for (label, a) in [("2", pi.int_of(2)), ("3", pi.int_of(3)), ("pi", pi.clone())] {
        g.add_endomorphism(label, a).unwrap();
    }
    let r = g.check().unwrap();
    assert!(r.all(), "{:?}", r.failures);
    assert!(r.precision.unwrap() >= PREC - 40, "{:?}", r.precision);
    // the law is integral
    assert!(g.law.c.iter().flatten().all(|c| c.is_integral(&pi)));
    let (_, f) = g.frobenius.clone().unwrap();
    assert!(g.find_endomorphism("pi").unwrap().eq_exact(&f));
    let two = g.find_endomorphism("2").unwrap().clone();
    let three = g.find_endomorphism("3").unwrap().clone();
    let mut six = g.clone();
    six.add_endomorphism("6", pi.int_of(6)).unwrap();
    six.add_endomorphism("2pi", pi.int_of(2).mul(&pi)).unwrap();
    assert!(two.compose(&three).unwrap().eq_exact(six.find_endomorphism("6").unwrap()));
    assert!(three.compose(&two).unwrap().eq_exact(six.find_endomorphism("6").unwrap()));
    assert!(two.compose(&f).unwrap().eq_exact(six.find_endomorphism("2pi").unwrap()));
    assert!(f.compose(&two).unwrap().eq_exact(six.find_endomorphism("2pi").unwrap()));
}

#[test]
fn canonical_isomorphism_between_lifts() {
    let pi = pi5();
    let a = lt5(20);
    let mut f2 = Series::zeros(&pi, 20);
    f2.c[1] = pi.clone();
    f2.c[2] = pi.mul(&pi.int_of(3));
    f2.c[5] = pi.one_of();
    let b = lubin_tate(&pi, 5, &f2, 20).unwrap();
    let iso = canonical_isomorphism(&a, &b).unwrap();
    assert!(iso.conjugates && iso.homomorphism);
    assert!(iso.theta.c[1].eq_exact(&pi.one_of()));
    // θ is the composite of the logarithms
    let via_log = b.exp.compose(&a.log).unwrap();
    assert!(via_log.eq_exact(&iso.theta));
}

#[test]
fn frobenius_lift_conditions() {
    let pi = pi5();
    let mut f = Series::zeros(&pi, 10);
    f.c[1] = pi.clone();
    f.c[5] = pi.int_of(2);
    assert!(matches!(lubin_tate(&pi, 5, &f, 10), Err(Error::InvalidFrobeniusLift(_))));
    f.c[5] = pi.one_of();
    f.c[3] = pi.one_of();
    assert!(matches!(lubin_tate(&pi, 5, &f, 10), Err(Error::InvalidFrobeniusLift(_))));
    f.c[3] = pi.zero_of();
    f.c[1] = pi.int_of(5);
    assert!(matches!(lubin_tate(&pi, 5, &f, 10), Err(Error::InvalidFrobeniusLift(_))));
    let two = pi.int_of(2);
    f.c[1] = two.clone();
    assert!(matches!(lubin_tate(&two, 5, &f, 10), Err(Error::InvalidFrobeniusLift(_))));
}

#[test]
fn gaussian_law_embeds_into_the_five_adic_one() {
    let k = ImagQuadField::new(4).unwrap();
    let pi = QuadElem::from_ints(k, 2, 1);
    let d = 12;
    let mut f = Series::zeros(&pi, d);
    f.c[1] = pi.clone();
    f.c[5] = pi.one_of();
    let g = lubin_tate(&pi, 5, &f, d).unwrap();
    let r = g.check().unwrap();
    assert!(r.all(), "{:?}", r.failures);
    let emb = |x: &QuadElem| -> crate::error::Result<Padic> {
        let a = Padic::from_rational(5, &x.a, PREC)?;
        let b = Padic::from_rational(5, &x.b, PREC)?;
        Ok(a.add(&b.mul(&i5())))
    };
    let image = g.law.map(emb).unwrap();
    assert!(image.eq_exact(&lt5(d).law));
}

#[test]
fn coleman_norm_multiplicative() {
    let g = multiplicative(5, D).unwrap();
    let p = Rational::from(5);
    let t = Series::var(&Rational::new(), D);
    assert!(coleman_norm(&t, &g, &p, 5).unwrap().eq_exact(&t));
    let one_plus = Series::constant(Rational::from(1), D).add(&t);
    assert!(coleman_norm(&one_plus, &g, &p, 5).unwrap().eq_exact(&one_plus));
    let c = Series::constant(Rational::from(3), D);
    assert!(coleman_norm(&c, &g, &p, 5).unwrap().eq_exact(&Series::constant(Rational::from(243), D)));
    let a = qseries(&[(0, Rational::from(2)), (1, Rational::from(1)), (2, Rational::from(1))], D);
    let b = qseries(&[(0, Rational::from(-1)), (3, Rational::from(4))], D);
    let na = coleman_norm(&a, &g, &p, 5).unwrap();
    let nb = coleman_norm(&b, &g, &p, 5).unwrap();
    let nab = coleman_norm(&a.mul(&b), &g, &p, 5).unwrap();
    assert!(nab.eq_exact(&na.mul(&nb)));
    let bad = qseries(&[(0, Rational::from(5)), (1, Rational::from(1))], D);
    assert!(matches!(coleman_norm(&bad, &g, &p, 5), Err(Error::NonUnitInput)));
    let zero = Series::zeros(&Rational::new(), D);
    assert!(matches!(coleman_norm(&zero, &g, &p, 5), Err(Error::NonUnitInput)));
}

#[test]
fn coleman_norm_needs_a_computable_product() {
    let g = lt5(12);
    let t = Series::var(&pi5(), 12);
    assert!(matches!(coleman_norm(&t, &g, &pi5(), 5), Err(Error::InvalidInput(_))));
}
