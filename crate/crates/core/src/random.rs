//! Seeded random algebra elements, derivations, forms and unitaries.
//!
//! All entries are drawn uniformly from `[-1, 1]` (real and imaginary parts
//! independently) so that identity residuals stay on a common scale.

use rand::Rng;

use crate::forms::{increasing_tuples, InnerDerivation, NCForm};
use crate::lie::{standard_basis, AlgebraElement};
use crate::linalg::{CMatrix, C64};

fn unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen_range(-1.0..=1.0)
}

pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(unit(rng), unit(rng))
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex(rng))
}

/// Arbitrary element of `M_n`.
pub fn element<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AlgebraElement {
    AlgebraElement::from_fn(n, |_, _| complex(rng))
}

/// Real combination of the standard `su(n)` basis.
pub fn su_element<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AlgebraElement {
    let b = standard_basis(n);
    let coeffs: Vec<C64> = (0..b.dim()).map(|_| C64::new(unit(rng), 0.0)).collect();
    b.combine(&coeffs)
}

/// Complex combination of the standard basis, i.e. an element of `sl_n`.
pub fn sl_element<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AlgebraElement {
    let b = standard_basis(n);
    let coeffs: Vec<C64> = (0..b.dim()).map(|_| complex(rng)).collect();
    b.combine(&coeffs)
}

/// `ad_γ` for a random (not necessarily traceless) `γ`.
pub fn derivation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> InnerDerivation {
    InnerDerivation::new(&element(rng, n)).expect("random element is finite")
}

pub fn form<R: Rng + ?Sized>(rng: &mut R, n: usize, degree: usize) -> NCForm {
    let d = n * n - 1;
    let coeffs = increasing_tuples(d, degree)
        .iter()
        .map(|_| matrix(rng, n))
        .collect();
    NCForm::from_coeffs(n, degree, coeffs).expect("coefficient count matches")
}

/// `e^{iα} exp(X)` with `X ∈ su(n)` random.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AlgebraElement {
    let phase = C64::new(0.0, std::f64::consts::PI * unit(rng)).exp();
    su_element(rng, n).scale_re(2.0).exp().scale(phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_defect;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_have_expected_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=4 {
            let x = su_element(&mut rng, n);
            assert!(x.is_antihermitian(1e-14));
            assert!(x.trace().norm() < 1e-14);
            assert!(unitarity_defect(unitary(&mut rng, n).matrix()) < 1e-12);
            assert!(sl_element(&mut rng, n).trace().norm() < 1e-14);
        }
        let f = form(&mut rng, 3, 2);
        assert_eq!(f.coeffs().len(), 28);
    }

    #[test]
    fn same_seed_same_samples() {
        let a = element(&mut ChaCha8Rng::seed_from_u64(3), 3);
        let b = element(&mut ChaCha8Rng::seed_from_u64(3), 3);
        assert_eq!(a, b);
    }
}
