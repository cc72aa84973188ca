use super::*;
use crate::numerics::{lattice_sum, SumSpec};

const P: u32 = 256;

fn square() -> Lattice {
    Lattice::new(APComplex::one(P), APComplex::i(P), P).unwrap()
}

fn skew() -> Lattice {
    Lattice::new(APComplex::from_f64_pair(1.3, 0.2, P), APComplex::from_f64_pair(-0.4, 1.7, P), P).unwrap()
}

fn close(a: &APComplex, b: &APComplex, tol: f64) -> bool {
    a.mid_dist(b) <= tol + a.err() + b.err()
}

#[test]
fn gauss_reduction_lands_in_fundamental_domain() {
    let l = Lattice::new(APComplex::from_f64_pair(1.0, 0.0, P), APComplex::from_f64_pair(7.3, 0.9, P), P).unwrap();
    let (tr, ti) = l.tau().to_f64_pair();
    assert!(ti >= 3f64.sqrt() / 2.0 - 1e-12 && tr.abs() <= 0.5 + 1e-12);
}

#[test]
fn weierstrass_differential_equation() {
    for l in [square(), skew()] {
        for z in [(0.23, 0.11), (-0.31, 0.47), (1.7, -2.2)] {
            let z = APComplex::from_f64_pair(z.0, z.1, P);
            let (p, dp) = l.wp_pair(&z).unwrap();
            let rhs = &(&p.powi(3).mul_i64(4) - &(l.g2() * &p)) - l.g3();
            assert!(close(&dp.sqr(), &rhs, 1e-60));
        }
    }
}

#[test]
fn periodicity_and_parity() {
    let l = skew();
    let z = APComplex::from_f64_pair(0.17, 0.29, P);
    let (w1, w2) = l.basis();
    let p = l.wp(&z, 0).unwrap();
    assert!(close(&p, &l.wp(&(&z + w1), 0).unwrap(), 1e-60));
    assert!(close(&p, &l.wp(&(&z - &w2.mul_i64(3)), 0).unwrap(), 1e-60));
    assert!(close(&p, &l.wp(&-z.clone(), 0).unwrap(), 1e-60));
    let d = l.wp(&z, 1).unwrap();
    assert!(close(&-d, &l.wp(&-z.clone(), 1).unwrap(), 1e-60));
}

#[test]
fn square_lattice_half_period_is_root_of_cubic() {
    // rescale Z[i] so that g2 = 4: c^{-4}·g2 = 4
    let l0 = square();
    let c = (l0.g2().div_i64(4)).sqrt().sqrt();
    let l = l0.scaled(&c).unwrap();
    assert!(close(l.g2(), &APComplex::from_i64(4, P), 1e-60));
    assert!(l.g3().mid_abs() < 1e-60);
    let (w1, _) = l.basis();
    let e = l.wp(&w1.div_i64(2), 0).unwrap();
    let roots = [-1i64, 0, 1].map(|r| APComplex::from_i64(r, P));
    assert!(roots.iter().any(|r| close(&e, r, 1e-60)));
}

#[test]
fn wp_fourth_derivative_matches_lattice_sum() {
    // ℘″(z) = 6 Σ (z+ω)^{-4}
    let l = square();
    let (w1, _) = l.basis();
    let z = w1.div_i64(2);
    let direct = lattice_sum(&SumSpec::new(4, 0, z.clone(), 400.0), &l).unwrap();
    let via = l.wp(&z, 2).unwrap().div_i64(6);
    assert!(direct.overlaps(&via), "{direct} vs {via}");
}

#[test]
fn derivative_recursion_matches_finite_differences() {
    let l = skew();
    let z = APComplex::from_f64_pair(0.21, 0.33, P);
    let h = APComplex::from_f64(1e-20, P);
    let d = l.wp_derivs(&z, 5).unwrap();
    for n in 1..=5 {
        let a = l.wp(&(&z + &h), n - 1).unwrap();
        let b = l.wp(&(&z - &h), n - 1).unwrap();
        let fd = &(&a - &b) / &h.mul_i64(2);
        assert!(fd.mid_dist(&d[n]) < 1e-30 * (1.0 + d[n].mid_abs()));
    }
}

#[test]
fn zeta_derivative_is_minus_wp() {
    let l = skew();
    let z = APComplex::from_f64_pair(0.41, -0.12, P);
    let h = APComplex::from_f64(1e-25, P);
    let fd = &(&l.zeta(&(&z + &h)).unwrap() - &l.zeta(&(&z - &h)).unwrap()) / &h.mul_i64(2);
    let p = l.wp(&z, 0).unwrap();
    assert!(fd.mid_dist(&-p) < 1e-40);
}

#[test]
fn zeta_quasi_periodicity_and_eta_map() {
    let l = skew();
    let z = APComplex::from_f64_pair(0.1, 0.2, P);
    let (w1, w2) = l.basis();
    let om = &w1.mul_i64(2) - &w2.mul_i64(3);
    let lhs = &l.zeta(&(&z + &om)).unwrap() - &l.zeta(&z).unwrap();
    assert!(close(&lhs, &l.eta_quasi(&om), 1e-60));
}

#[test]
fn legendre_relation() {
    for l in [square(), skew()] {
        let (w1, w2) = l.basis();
        let (e1, e2) = l.quasi_periods();
        let r = &(&(e1 * w2) - &(e2 * w1)) - &APComplex::two_pi_i(P);
        assert!(r.contains_zero());
        assert!(l.legendre_residual() < 1e-60);
    }
}

#[test]
fn sigma_oddness_and_transformation() {
    let l = skew();
    let z = APComplex::from_f64_pair(0.37, 0.52, P);
    let s = l.sigma(&z);
    assert!(close(&l.sigma(&-z.clone()), &-s.clone(), 1e-60));
    let (w1, w2) = l.basis();
    for w in [w1, w2] {
        let lhs = l.sigma(&(&z + w));
        let rhs = &-s.clone() * &(&l.eta_quasi(w) * &(&z + &w.div_i64(2))).exp();
        assert!(close(&lhs, &rhs, 1e-55 * rhs.mid_abs()));
    }
}

#[test]
fn sigma_near_zero_is_identity_to_first_order() {
    let l = skew();
    let z = APComplex::from_f64_pair(1e-30, 2e-30, P);
    let s = l.sigma(&z);
    assert!(s.mid_dist(&z) < 1e-80, "{s} {}", s.mid_dist(&z));
}

#[test]
fn discriminant_homogeneity_and_consistency() {
    let l = skew();
    let c = APComplex::from_f64_pair(0.7, 1.1, P);
    let lc = l.scaled(&c).unwrap();
    let expect = l.discriminant() * &c.powi(-12);
    assert!(close(lc.discriminant(), &expect, 1e-50 * expect.mid_abs()));
    let d2 = &l.g2().powi(3) - &l.g3().sqr().mul_i64(27);
    assert!(close(l.discriminant(), &d2, 1e-50 * d2.mid_abs()));
}

#[test]
fn g2_g3_match_lattice_sums() {
    let l = skew();
    let z = APComplex::zero(P);
    let zero_shift = |k| {
        // Σ' ω^{-k}: subtract nothing since z = 0 is skipped only for k ≤ 0
        let (w1, _) = l.basis();
        let eps = w1.div_i64(1_000_000_000);
        let _ = eps;
        lattice_sum(&SumSpec::new(k, 0, z.clone(), 300.0), &l)
    };
    assert!(zero_shift(4).is_err());
    // use G_k = lim_{z→0} (Σ (z+ω)^{-k} − z^{-k}) computed from ℘″ instead
    let small = APComplex::from_f64_pair(1e-30, 0.0, P);
    let s4 = &lattice_sum(&SumSpec::new(4, 0, small.clone(), 300.0), &l).unwrap() - &small.powi(-4);
    assert!(close(&s4.mul_i64(60), l.g2(), 1e-8));
    let s6 = &lattice_sum(&SumSpec::new(6, 0, small.clone(), 300.0), &l).unwrap() - &small.powi(-6);
    assert!(close(&s6.mul_i64(140), l.g3(), 1e-8));
}

#[test]
fn homogeneity_of_wp_and_sigma() {
    let l = skew();
    let c = APComplex::from_f64_pair(-0.6, 1.4, P);
    let lc = l.scaled(&c).unwrap();
    let z = APComplex::from_f64_pair(0.3, 0.44, P);
    let cz = &c * &z;
    let p = &lc.wp(&cz, 0).unwrap() * &c.sqr();
    assert!(close(&p, &l.wp(&z, 0).unwrap(), 1e-55));
    let s = &lc.sigma(&cz) / &c;
    assert!(close(&s, &l.sigma(&z), 1e-55));
}

#[test]
fn pole_is_reported() {
    let l = square();
    let (w1, w2) = l.basis();
    let z = w1 + w2;
    assert!(matches!(l.wp(&z, 0), Err(Error::PoleAtLatticePoint)));
    assert!(l.contains_point(&z));
}

#[test]
fn cm_lattice_has_expected_basis() {
    let k = ImagQuadField::new(7).unwrap();
    let l = Lattice::from_cm(k, APComplex::from_f64(0.9, P), k.elem(1, 1), P).unwrap();
    let (e1, e2) = l.reference_basis();
    assert!(!l.contains_point(&e1.div_i64(2)));
    assert!(l.contains_point(&e1) && l.contains_point(&e2) && l.contains_point(&(&e1 * &k.omega(P))));
}

#[test]
fn torsion_point_from_quotient() {
    let k = ImagQuadField::new(4).unwrap();
    let t = TorsionPoint::from_quotient(&k.elem(1, 0), &k.elem(2, 1));
    // 1/(2+i) = (2−i)/5
    assert_eq!(t.r1, Rational::from((2, 5)));
    assert_eq!(t.r2, Rational::from((4, 5)));
    assert_eq!(t.order(), 5);
}

#[test]
fn preset_periods_match_hints() {
    for p in crate::field::Preset::all_builtin() {
        let om = cm_real_period(p.field, &p.curve.a4, &p.curve.a6, P).unwrap();
        let hint = APComplex::from_decimal(&p.curve.real_period_hint, P).unwrap();
        assert!(om.mid_dist(&hint) < 1e-35, "{}: {} vs {}", p.id, om, hint);
    }
}
