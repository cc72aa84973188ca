use super::*;
use crate::field::Preset;
use crate::lattice::period_lattice;

const P: u32 = 256;

fn qi() -> Preset {
    Preset::builtin("qi").unwrap()
}

fn omega(pre: &Preset, prec: u32) -> APComplex {
    period_lattice(pre, prec).unwrap().basis().0.clone()
}

#[test]
fn both_spellings_give_the_same_terms() {
    let pre = qi();
    for a in pre.field.ideals_up_to_norm(300) {
        if !a.gen.coprime_to(&pre.f()) {
            continue;
        }
        for (k, j) in [(1, 0), (3, 0), (4, 1), (5, 3)] {
            let spec = LSpec::at_zero(k, j, pre.f());
            assert_eq!(spec.term(&a, &pre.psi).unwrap(), spec.term_at_zero(&a, &pre.psi).unwrap());
        }
    }
}

#[test]
fn kelem_arithmetic() {
    let f = qi().field;
    let x = KElem::new(f.elem(4, 2), 6);
    assert_eq!(x, KElem::new(f.elem(2, 1), 3));
    assert_eq!(x.mul(&x.inv().unwrap()), KElem::from_int(f.one()));
    assert_eq!(x.sub(&x), KElem::from_int(f.zero()));
    assert_eq!(x.pow(-2).unwrap().mul(&x.pow(2).unwrap()), KElem::from_int(f.one()));
}

#[test]
fn routes_agree_on_every_coset() {
    let pre = qi();
    let om = omega(&pre, P);
    let m = pre.f() * pre.field.elem(2, 1);
    for (i, k) in [(0, 3), (0, 4), (-1, 4)] {
        let spec = LSpec::from_weight(i, k, m);
        let d = l_direct_by_class(&spec, &pre.psi, DEFAULT_TRUNCATION, P).unwrap();
        let e = l_eisenstein_by_class(&spec, &pre.psi, &om).unwrap();
        assert_eq!(d.len(), 4);
        for ((c1, a), (c2, b)) in d.iter().zip(&e) {
            assert_eq!(c1, c2);
            let (diff, err) = a.agreement(b);
            assert!(diff < 1e-18 && diff <= 10.0 * err, "({i},{k}) {c1}: {diff:e} vs {err:e}");
        }
    }
}

#[test]
fn trivial_coset_through_the_single_class_formula() {
    let pre = qi();
    let om = omega(&pre, P);
    let one = IdealRep::unit(pre.field);
    let spec = LSpec::from_weight(0, 3, pre.f()).in_coset(one);
    let d = l_direct(&spec, &pre.psi, DEFAULT_TRUNCATION, P).unwrap();
    let e = l_via_eisenstein(0, 3, &pre.f(), &one, &om, &pre.psi).unwrap();
    assert_eq!(e.route, LRoute::Eisenstein);
    assert!(d.value.mid_dist(&e.value) < 1e-60);
}

#[test]
fn cosets_partition_the_series() {
    let pre = qi();
    let m = pre.f() * pre.field.elem(2, 1);
    let spec = LSpec::new(4, 4, m);
    let parts = l_direct_by_class(&spec, &pre.psi, DEFAULT_TRUNCATION, P).unwrap();
    let mut s = APComplex::zero(P);
    for (_, v) in &parts {
        s = &s + &v.value;
    }
    let whole = l_direct(&spec, &pre.psi, DEFAULT_TRUNCATION, P).unwrap();
    assert!(s.mid_dist(&whole.value) < 1e-60);
    let one = l_direct(&spec.in_coset(parts[2].0), &pre.psi, DEFAULT_TRUNCATION, P).unwrap();
    assert!(one.value.mid_dist(&parts[2].1.value) < 1e-70);
}

#[test]
fn stable_under_truncation() {
    let pre = qi();
    let spec = LSpec::new(4, 4, pre.f());
    let a = l_direct(&spec, &pre.psi, 10_000, P).unwrap();
    let b = l_direct(&spec, &pre.psi, 40_000, P).unwrap();
    assert!(a.value.mid_dist(&b.value) < 1e-18);
    assert!(a.tail_bound < 1e-60 && !a.tail_dominated);
}

#[test]
fn partial_sum_is_inside_its_tail_bound() {
    let pre = qi();
    let spec = LSpec::new(3, 3, pre.f());
    let full = l_direct(&spec, &pre.psi, DEFAULT_TRUNCATION, P).unwrap();
    let part = l_partial_sum(&spec, &pre.psi, 2_000, P).unwrap();
    let diff = part.value.mid_dist(&full.value);
    assert!(diff <= part.tail_bound, "{diff:e} > {:e}", part.tail_bound);
    // the plain sum decays like N^{-1/2}
    assert!(part.tail_bound > 1e-4);
}

#[test]
fn boundary_and_divergent_specs_are_refused() {
    let pre = qi();
    for (k, j) in [(2, 1), (2, 0), (3, 1)] {
        let spec = LSpec::at_zero(k, j, pre.f());
        assert!(matches!(l_direct(&spec, &pre.psi, 1000, P), Err(Error::Divergent(_))), "{k} {j}");
    }
    let om = omega(&pre, P);
    let v = l_auto(&LSpec::at_zero(2, 0, pre.f()), &pre.psi, &om, 1000).unwrap();
    assert_eq!(v.route, LRoute::Eisenstein);
}

#[test]
fn damerell_values() {
    // frozen from an independent double-precision ideal sum
    let pre = qi();
    for (k, j, num, den) in [(3, 0, 1, 16), (4, 0, 1, 48), (4, 1, 1, 48)] {
        let d = damerell(k, j, &pre, DEFAULT_TRUNCATION, P).unwrap();
        assert_eq!(d.candidate.a, rug::Rational::from((num, den)), "{k} {j}");
        assert_eq!(d.has_sqrt, j % 2 == 1);
    }
    assert!(damerell(3, 2, &pre, DEFAULT_TRUNCATION, P).is_err());
}

#[test]
fn tamagawa_factor() {
    let pre = qi();
    let f = pre.field;
    let a = IdealRep::new(f.elem(2, 1));
    assert_eq!(pre.psi.psi_eval(&a).unwrap(), f.elem(-1, 2));
    let t = tamagawa_rhs(1, 0, 13, &a, &pre, 2_000, P).unwrap();
    assert_eq!(t.factor, KElem::from_int(f.elem(6, -2)));
    assert_eq!(t.valuation, 0);
    assert!(matches!(tamagawa_rhs(1, 0, 5, &a, &pre, 2_000, P), Err(Error::NotCoprime)));
    let unit = IdealRep::unit(f);
    assert!(matches!(tamagawa_rhs(3, 0, 5, &unit, &pre, 2_000, P), Err(Error::InvalidInput(_))));
    // j > 0 keeps a denominator Nα^j
    let t = tamagawa_rhs(3, 1, 5, &pre.alpha, &pre, DEFAULT_TRUNCATION, P).unwrap();
    assert_eq!(t.factor.den, 13);
    assert_eq!(t.euler.norm(), 8 * 25);
}

#[test]
fn partial_sum_identity_both_sides() {
    for pre in [qi(), Preset::builtin("q7").unwrap()] {
        for k in [2, 3] {
            let c = partial_sum_identity(1, k, pre.prime, &pre.alpha, &pre, DEFAULT_TRUNCATION, P).unwrap();
            assert!(c.residual.relative < 1e-40, "{} k={k}: {:?}", pre.id, c.residual);
            assert_eq!(c.route, if k == 2 { LRoute::Eisenstein } else { LRoute::Direct });
        }
    }
}

#[test]
fn j0_value_matches_eisenstein_chain() {
    let pre = qi();
    for k in [2, 3, 4] {
        let c = eisenstein_chain_j0(1, k, pre.prime, &pre.alpha, &pre, DEFAULT_TRUNCATION, P).unwrap();
        assert!(c.residual.relative < 1e-40, "k={k}: {:?}", c.residual);
    }
}

#[test]
fn alpha_search_meets_the_local_criterion() {
    let pre = qi();
    for (k, j, e) in [(3, 0, 0), (5, 3, 1), (9, 7, 1)] {
        let s = alpha_search(k, j, 5, &pre, 500).unwrap();
        assert_eq!(s.local_exponent, Some(e), "{k} {j}");
        let a = s.chosen_ideal.expect("an ideal attains the exponent");
        let t = tamagawa_rhs(k, j, 5, &a, &pre, 2_000, P).unwrap();
        assert_eq!(t.valuation, e);
        assert_eq!(s.candidates.iter().map(|c| c.1).min(), Some(e));
    }
}

#[test]
fn ideal_cache_round_trip() {
    let dir = std::env::temp_dir().join(format!("cmeis-cache-test-{}", std::process::id()));
    let f = qi().field;
    let a = IdealTable::load_or_build_in(&dir, f, 500);
    assert!(cache_path(&dir, f, 500).exists());
    let b = IdealTable::load_or_build_in(&dir, f, 500);
    assert_eq!(a.ideals, b.ideals);
    std::fs::write(cache_path(&dir, f, 500), "{\"version\": 99}").unwrap();
    let c = IdealTable::load_or_build_in(&dir, f, 500);
    assert_eq!(a.ideals, c.ideals);
    let _ = std::fs::remove_dir_all(&dir);
}
