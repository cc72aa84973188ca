use super::*;
use crate::field::Preset;
use crate::lattice::period_lattice;
use crate::numerics::{lattice_sum, SumSpec};
use rug::Rational;

const P: u32 = 256;

fn skew() -> Lattice {
    Lattice::new(APComplex::from_f64_pair(1.1, -0.2, P), APComplex::from_f64_pair(0.3, 1.2, P), P).unwrap()
}

fn z0() -> APComplex {
    APComplex::from_f64_pair(0.31, 0.22, P)
}

fn agree(a: &APComplex, b: &APComplex, tol: f64) -> bool {
    a.mid_dist(b) <= tol * (1.0 + b.mid_abs()) + a.err() + b.err()
}

#[test]
fn weight_validation() {
    assert!(EisWeight::new(-2, 2).is_err());
    assert!(EisWeight::new(1, 3).is_err());
    assert!(EisWeight::new(-1, 2).is_ok());
}

#[test]
fn e3_is_minus_wp_prime() {
    let l = skew();
    let e3 = eis(EisWeight::new(0, 3).unwrap(), &z0(), &l).unwrap();
    let dp = l.wp(&z0(), 1).unwrap();
    assert!(agree(&e3, &-dp, 1e-60));
}

#[test]
fn ewald_matches_wp_route_for_holomorphic_weights() {
    let l = skew();
    let all = eis_holomorphic_all(&z0(), &l, 5).unwrap();
    for k in 1..=5 {
        let ew = eis_ewald(EisWeight::new(0, k).unwrap(), &z0(), &l).unwrap();
        assert!(agree(&ew, &all[k as usize - 1], 1e-60), "k = {k}: {ew} vs {}", all[k as usize - 1]);
    }
}

#[test]
fn ewald_matches_direct_sum_where_convergent() {
    let l = skew();
    let w = EisWeight::new(-1, 5).unwrap();
    let ew = eis_ewald(w, &z0(), &l).unwrap();
    let s = lattice_sum(&SumSpec::new(5, -1, z0(), 200.0), &l).unwrap();
    let direct = &s.mul_i64(24) * &l.area_over_pi().recip();
    assert!(ew.overlaps(&direct));
    assert!(ew.mid_dist(&direct) < 1e-5);
}

#[test]
fn homogeneity() {
    let l = skew();
    let c = APComplex::from_f64_pair(0.6, -1.3, P);
    let lc = l.scaled(&c).unwrap();
    for (i, k) in [(0, 1), (0, 2), (0, 4), (-1, 2), (-1, 4), (-2, 3)] {
        let w = EisWeight::new(i, k).unwrap();
        let lhs = eis(w, &(&c * &z0()), &lc).unwrap();
        let rhs = &c.powi(i - k) * &eis(w, &z0(), &l).unwrap();
        assert!(agree(&lhs, &rhs, 1e-55), "({i},{k})");
    }
}

#[test]
fn periodicity() {
    let l = skew();
    let (w1, w2) = l.basis();
    let om = &w1.mul_i64(3) - w2;
    for (i, k) in [(0, 1), (0, 2), (-1, 3), (-2, 4)] {
        let w = EisWeight::new(i, k).unwrap();
        let a = eis(w, &z0(), &l).unwrap();
        let b = eis(w, &(&z0() + &om), &l).unwrap();
        assert!(agree(&a, &b, 1e-55), "({i},{k})");
    }
}

#[test]
fn trivial_alpha_gives_zero() {
    let pre = Preset::builtin("qi").unwrap();
    let l = period_lattice(&pre, P).unwrap();
    let v = eis_alpha(EisWeight::new(0, 3).unwrap(), &z0(), &l, &IdealRep::unit(pre.field)).unwrap();
    assert!(v.contains_zero());
}

#[test]
fn galois_action_composes() {
    let pre = Preset::builtin("qi").unwrap();
    let l = period_lattice(&pre, P).unwrap();
    let k = pre.field;
    let v = TorsionPoint::from_quotient(&k.one(), &(pre.f() * k.elem(2, 1)));
    let z = v.embed(&l);
    let w = EisWeight::new(0, 3).unwrap();
    let c1 = IdealRep::new(k.elem(3, 2)).conj();
    let c2 = IdealRep::new(k.elem(3, 0));
    // σ_{c2} applied to σ_{c1}(E): c1's factor lies in K and is fixed
    let sub = l.cm_divided(&pre.psi.psi_eval(&c1).unwrap()).unwrap();
    let inner = galois_eis_at(w, &z, &sub, &c2, &pre.psi).unwrap();
    let twice = &pre.psi.psi_eval(&c1).unwrap().embed(P).powi(w.i - w.k) * &inner;
    let once = galois_eis(w, &v, &l, &c1.mul(&c2), &pre.psi).unwrap();
    assert!(agree(&twice, &once, 1e-50));
    assert!(matches!(galois_eis(w, &v, &l, &IdealRep::new(k.elem(2, 1)), &pre.psi), Err(Error::NotCoprime)));
    let id = galois_eis(w, &v, &l, &IdealRep::unit(k), &pre.psi).unwrap();
    assert!(agree(&id, &eis(w, &z, &l).unwrap(), 1e-60));
}

#[test]
fn phi_for_holomorphic_weights_is_xk() {
    let samples = phi_samples(6, 7, P);
    for k in 2..=4 {
        let fit = fit_phi(EisWeight::new(0, k).unwrap(), &samples, 1e-30).unwrap();
        let mut e = vec![0; k as usize];
        e[k as usize - 1] = 1;
        assert_eq!(fit.poly.coeff(&e), 1);
        assert_eq!(fit.poly.terms().count(), 1);
        assert_eq!(fit.kappa, 1);
    }
}

#[test]
fn phi_minus_one_two() {
    let samples = phi_samples(8, 11, P);
    let fit = fit_phi(EisWeight::new(-1, 2).unwrap(), &samples, 1e-30).unwrap();
    assert_eq!(fit.poly.to_string(), "-2*X1*X2 + X3");
    assert_eq!(fit.kappa, Rational::from((1, 2)));
    assert!(fit.poly.is_isobaric() && fit.poly.is_integral());
}

#[test]
fn too_few_samples() {
    let samples = phi_samples(3, 1, P);
    assert!(matches!(fit_phi(EisWeight::new(-1, 2).unwrap(), &samples, 1e-30), Err(Error::RankDeficient(3, 2))));
}

#[test]
fn monomial_enumeration() {
    assert_eq!(IsobaricPoly::monomials(5, 5, 3).len(), 5);
    assert_eq!(IsobaricPoly::monomials(4, 4, 2).len(), 3);
    assert_eq!(IsobaricPoly::monomials(3, 3, 1).len(), 1);
}
