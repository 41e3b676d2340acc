use ncg_core::forms::{d_prime, increasing_tuples, interior, wedge, InnerDerivation, NCForm};
use ncg_core::lie::{bracket, standard_basis};
use ncg_core::random;
use ncg_core::serial::FormRecord;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn jacobi_identity_on_random_triples() {
    let mut r = rng(17);
    for k in 0..50 {
        let n = 2 + k % 3;
        let [x, y, z] = std::array::from_fn(|_| random::element(&mut r, n));
        let cyc = bracket(&x, &bracket(&y, &z).unwrap()).unwrap()
            + bracket(&y, &bracket(&z, &x).unwrap()).unwrap()
            + bracket(&z, &bracket(&x, &y).unwrap()).unwrap();
        assert!(cyc.max_abs() < 1e-12);
    }
}

#[test]
fn structure_constants_are_antisymmetric() {
    for n in 2..=4 {
        let b = standard_basis(n);
        let d = b.dim();
        for a in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let s = b.structure_constant(a, c, e) + b.structure_constant(c, a, e);
                    assert!(s.norm() < 1e-12);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_prime_squares_to_zero(seed in any::<u64>(), n in 2usize..=3, p in 0usize..=2) {
        let w = random::form(&mut rng(seed), n, p);
        prop_assert!(d_prime(&d_prime(&w)).max_abs() < 1e-10);
    }

    #[test]
    fn evaluation_is_alternating(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let w = random::form(&mut r, n, 2);
        let x = random::derivation(&mut r, n);
        let y = random::derivation(&mut r, n);
        let xy = w.eval(&[x.clone(), y.clone()]).unwrap();
        let yx = w.eval(&[y, x.clone()]).unwrap();
        prop_assert!((&xy + &yx).max_abs() < 1e-12);
        prop_assert!(w.eval(&[x.clone(), x]).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn wedge_is_associative(seed in any::<u64>(), p in 0usize..=1, q in 0usize..=1) {
        let mut r = rng(seed);
        let a = random::form(&mut r, 2, p);
        let b = random::form(&mut r, 2, q);
        let c = random::form(&mut r, 2, 1);
        let left = wedge(&wedge(&a, &b).unwrap(), &c).unwrap();
        let right = wedge(&a, &wedge(&b, &c).unwrap()).unwrap();
        prop_assert!(left.distance(&right).unwrap() < 1e-11);
    }

    #[test]
    fn interior_squares_to_zero(seed in any::<u64>(), p in 0usize..=3) {
        let mut r = rng(seed);
        let w = random::form(&mut r, 2, p);
        let x = random::derivation(&mut r, 2);
        let twice = interior(&x, &interior(&x, &w).unwrap()).unwrap();
        prop_assert!(twice.max_abs() < 1e-12);
    }

    #[test]
    fn interior_matches_evaluation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let w = random::form(&mut r, 3, 2);
        let x = random::derivation(&mut r, 3);
        let y = random::derivation(&mut r, 3);
        let lhs = interior(&x, &w).unwrap().eval(std::slice::from_ref(&y)).unwrap();
        prop_assert!(lhs.approx_eq(&w.eval(&[x, y]).unwrap(), 1e-11));
    }

    #[test]
    fn records_roundtrip(seed in any::<u64>(), n in 2usize..=3, p in 0usize..=2) {
        let w = random::form(&mut rng(seed), n, p);
        let rec = FormRecord::from_form(&w);
        prop_assert_eq!(rec.coefficients.len(), increasing_tuples(n * n - 1, p).len());
        prop_assert_eq!(rec.to_form().unwrap().distance(&w).unwrap(), 0.0);
    }
}

#[test]
fn basis_derivations_evaluate_to_components() {
    let mut r = rng(2);
    let w: NCForm = random::form(&mut r, 2, 2);
    let e = |a| InnerDerivation::basis(2, a);
    let v = w.eval(&[e(0), e(2)]).unwrap();
    assert!(v.approx_eq(&w.component(&[0, 2]), 1e-13));
}
