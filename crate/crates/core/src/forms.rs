//! Noncommutative differential forms on `M_n`.
//!
//! A `p`-form is an antisymmetric, complex-multilinear map from `p` inner
//! derivations to `M_n`. Since every derivation of `M_n` is inner and `ad_γ`
//! only depends on the traceless part of `γ`, a form is fixed by its values on
//! the standard `sl_n` basis `E_a`; those values are stored for strictly
//! increasing index tuples only.
//!
//! Products use the shuffle convention, so for 1-forms
//! `(αβ)(X, Y) = α(X)β(Y) − α(Y)β(X)`.

use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{NcgError, Result};
use crate::lie::{standard_basis, traceless_part, AlgebraElement, LieBasis};
use crate::linalg::{self, CMatrix, C64};

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Colex rank of a strictly increasing tuple.
fn tuple_rank(idx: &[usize]) -> usize {
    idx.iter()
        .enumerate()
        .map(|(i, &c)| binomial(c, i + 1))
        .sum()
}

/// All strictly increasing `p`-tuples from `0..d`, listed in colex order.
pub fn increasing_tuples(d: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); binomial(d, p)];
    if p == 0 {
        return out;
    }
    if p > d {
        return Vec::new();
    }
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out[tuple_rank(&cur)] = cur.clone();
        let mut k = p;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < d - p + k {
                break;
            }
        }
        cur[k] += 1;
        for j in k + 1..p {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
fn sort_with_sign(idx: &mut [usize]) -> Option<f64> {
    let mut sign = 1.0;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// An inner derivation `ad_γ`, stored through its traceless generator.
#[derive(Debug, Clone)]
pub struct InnerDerivation {
    generator: AlgebraElement,
    coords: Vec<C64>,
}

impl InnerDerivation {
    pub fn new(gamma: &AlgebraElement) -> Result<Self> {
        let n = gamma.n();
        if n < 2 {
            return Err(NcgError::InvalidInput("derivations need n >= 2".into()));
        }
        let generator = traceless_part(gamma);
        let coords = standard_basis(n).coords(&generator)?;
        Ok(Self { generator, coords })
    }

    /// `ad_{E_a}` for the standard basis element `a`.
    pub fn basis(n: usize, a: usize) -> Self {
        let b = standard_basis(n);
        let mut coords = vec![C64::new(0.0, 0.0); b.dim()];
        coords[a] = C64::new(1.0, 0.0);
        Self {
            generator: b.element(a).clone(),
            coords,
        }
    }

    pub fn generator(&self) -> &AlgebraElement {
        &self.generator
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.generator.n()
    }

    /// `[γ, a]`.
    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        self.generator.commutator(a)
    }

    /// `[ad_ξ, ad_η] = ad_{[ξ, η]}`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        Self::new(&crate::lie::bracket(&self.generator, &other.generator)?)
    }

    /// Whether the generator is antihermitian, i.e. the derivation is real.
    pub fn is_real(&self, tol: f64) -> bool {
        self.generator.is_antihermitian(tol)
    }
}

/// A `p`-form on `M_n` with values in `M_n`.
#[derive(Debug, Clone)]
pub struct NCForm {
    degree: usize,
    n: usize,
    basis: Arc<LieBasis>,
    coeffs: Vec<CMatrix>,
}

impl PartialEq for NCForm {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.n == other.n && self.coeffs == other.coeffs
    }
}

impl NCForm {
    pub fn zero(n: usize, degree: usize) -> Self {
        let basis = standard_basis(n);
        let count = binomial(basis.dim(), degree);
        Self {
            degree,
            n,
            basis,
            coeffs: vec![CMatrix::zeros(n, n); count],
        }
    }

    /// Degree-0 form with value `γ`.
    pub fn scalar(gamma: &AlgebraElement) -> Self {
        let mut f = Self::zero(gamma.n(), 0);
        f.coeffs[0] = gamma.matrix().clone();
        f
    }

    /// Builds a form from its values on increasing basis tuples.
    pub fn from_fn(n: usize, degree: usize, mut f: impl FnMut(&[usize]) -> CMatrix) -> Self {
        let mut form = Self::zero(n, degree);
        for (k, idx) in increasing_tuples(form.dim(), degree).iter().enumerate() {
            let v = f(idx);
            assert_eq!(v.shape(), (n, n), "component has the wrong size");
            form.coeffs[k] = v;
        }
        form
    }

    /// Builds a form from the coefficient list in colex order of increasing
    /// tuples.
    pub fn from_coeffs(n: usize, degree: usize, coeffs: Vec<CMatrix>) -> Result<Self> {
        let mut form = Self::zero(n, degree);
        if coeffs.len() != form.coeffs.len() {
            return Err(NcgError::DimensionMismatch {
                expected: form.coeffs.len(),
                found: coeffs.len(),
            });
        }
        if let Some(c) = coeffs.iter().find(|c| c.shape() != (n, n)) {
            return Err(NcgError::DimensionMismatch {
                expected: n,
                found: c.nrows().max(c.ncols()),
            });
        }
        if !coeffs.iter().all(linalg::is_finite) {
            return Err(NcgError::NonFinite);
        }
        form.coeffs = coeffs;
        Ok(form)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of `sl_n`.
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &LieBasis {
        &self.basis
    }

    /// Coefficients in colex order of increasing tuples.
    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    /// Value on basis derivations `(ad_{E_{i_1}}, …, ad_{E_{i_p}})` for an
    /// arbitrary index tuple.
    pub fn component(&self, idx: &[usize]) -> AlgebraElement {
        assert_eq!(idx.len(), self.degree, "wrong number of slots");
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            None => AlgebraElement::zero(self.n),
            Some(sign) => AlgebraElement::from_matrix_unchecked(
                &self.coeffs[tuple_rank(&sorted)] * C64::new(sign, 0.0),
            ),
        }
    }

    fn component_matrix_signed(&self, idx: &mut [usize]) -> Option<(f64, &CMatrix)> {
        sort_with_sign(idx).map(|s| (s, &self.coeffs[tuple_rank(idx)]))
    }

    /// Sets the value on an increasing tuple (other orderings follow by
    /// antisymmetry).
    pub fn set_component(&mut self, idx: &[usize], value: &AlgebraElement) -> Result<()> {
        if idx.len() != self.degree {
            return Err(NcgError::DimensionMismatch {
                expected: self.degree,
                found: idx.len(),
            });
        }
        if value.n() != self.n {
            return Err(NcgError::DimensionMismatch {
                expected: self.n,
                found: value.n(),
            });
        }
        let mut sorted = idx.to_vec();
        let sign = sort_with_sign(&mut sorted)
            .ok_or_else(|| NcgError::InvalidInput("repeated index in form slot".into()))?;
        if sorted.last().is_some_and(|&m| m >= self.dim()) {
            return Err(NcgError::InvalidInput("form index out of range".into()));
        }
        self.coeffs[tuple_rank(&sorted)] = value.matrix() * C64::new(sign, 0.0);
        Ok(())
    }

    /// Evaluates the form on arbitrary inner derivations.
    pub fn eval(&self, args: &[InnerDerivation]) -> Result<AlgebraElement> {
        if args.len() != self.degree {
            return Err(NcgError::DimensionMismatch {
                expected: self.degree,
                found: args.len(),
            });
        }
        if let Some(x) = args.iter().find(|x| x.n() != self.n) {
            return Err(NcgError::DimensionMismatch {
                expected: self.n,
                found: x.n(),
            });
        }
        let p = self.degree;
        if p == 0 {
            return Ok(AlgebraElement::from_matrix_unchecked(
                self.coeffs[0].clone(),
            ));
        }
        let mut acc = CMatrix::zeros(self.n, self.n);
        for (k, idx) in increasing_tuples(self.dim(), p).iter().enumerate() {
            let minor = DMatrix::<C64>::from_fn(p, p, |r, c| args[r].coords()[idx[c]]);
            let det = minor.determinant();
            if det != C64::new(0.0, 0.0) {
                acc += &self.coeffs[k] * det;
            }
        }
        Ok(AlgebraElement::from_matrix_unchecked(acc))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(linalg::max_abs).fold(0.0, f64::max)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(NcgError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.degree != other.degree {
            return Err(NcgError::DimensionMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    /// Largest coefficient difference; errors on incompatible forms.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| linalg::max_abs(&(a - b)))
            .fold(0.0, f64::max))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }
}

impl Add for &NCForm {
    type Output = NCForm;
    /// Panics on incompatible forms; use [`NCForm::try_add`] to get an error.
    fn add(self, rhs: &NCForm) -> NCForm {
        self.try_add(rhs).expect("adding incompatible forms")
    }
}

impl Sub for &NCForm {
    type Output = NCForm;
    fn sub(self, rhs: &NCForm) -> NCForm {
        self.try_sub(rhs).expect("subtracting incompatible forms")
    }
}

impl Neg for &NCForm {
    type Output = NCForm;
    fn neg(self) -> NCForm {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// Shuffle product of forms.
pub fn wedge(alpha: &NCForm, beta: &NCForm) -> Result<NCForm> {
    if alpha.n != beta.n {
        return Err(NcgError::DimensionMismatch {
            expected: alpha.n,
            found: beta.n,
        });
    }
    let (p, q) = (alpha.degree, beta.degree);
    let n = alpha.n;
    let d = alpha.dim();
    let mut out = NCForm::zero(n, p + q);
    if p + q > d {
        return Ok(out);
    }
    let shuffles = increasing_tuples(p + q, p);
    let base = (p * p.saturating_sub(1) / 2) as isize;
    for (k, idx) in increasing_tuples(d, p + q).iter().enumerate() {
        let mut acc = CMatrix::zeros(n, n);
        for s in &shuffles {
            let pos_sum: isize = s.iter().map(|&x| x as isize).sum();
            let sign = if (pos_sum - base).rem_euclid(2) == 0 {
                1.0
            } else {
                -1.0
            };
            let left: Vec<usize> = s.iter().map(|&x| idx[x]).collect();
            let right: Vec<usize> = (0..p + q)
                .filter(|x| !s.contains(x))
                .map(|x| idx[x])
                .collect();
            let a = &alpha.coeffs[tuple_rank(&left)];
            let b = &beta.coeffs[tuple_rank(&right)];
            acc += (a * b) * C64::new(sign, 0.0);
        }
        out.coeffs[k] = acc;
    }
    Ok(out)
}

/// The differential on `M_n ⊗ Λ sl_n*`, evaluated on basis derivations.
pub fn d_prime(omega: &NCForm) -> NCForm {
    let n = omega.n;
    let d = omega.dim();
    let p = omega.degree;
    let basis = omega.basis.clone();
    let mut out = NCForm::zero(n, p + 1);
    let mut slot = Vec::with_capacity(p);
    for (k, idx) in increasing_tuples(d, p + 1).iter().enumerate() {
        let mut acc = CMatrix::zeros(n, n);
        for i in 0..=p {
            slot.clear();
            slot.extend(
                idx.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, &v)| v),
            );
            let val = &omega.coeffs[tuple_rank(&slot)];
            let e = basis.element(idx[i]).matrix();
            let term = e * val - val * e;
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        for i in 0..=p {
            for j in i + 1..=p {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                for c in 0..d {
                    let f = basis.structure_constant(idx[i], idx[j], c);
                    if f == C64::new(0.0, 0.0) {
                        continue;
                    }
                    slot.clear();
                    slot.push(c);
                    slot.extend(
                        idx.iter()
                            .enumerate()
                            .filter(|(m, _)| *m != i && *m != j)
                            .map(|(_, &v)| v),
                    );
                    if let Some((s, val)) = omega.component_matrix_signed(&mut slot) {
                        acc += val * (f * C64::new(sign * s, 0.0));
                    }
                }
            }
        }
        out.coeffs[k] = acc;
    }
    out
}

/// `(i_X ω)(X_1, …) = ω(X, X_1, …)`; zero on degree 0.
pub fn interior(x: &InnerDerivation, omega: &NCForm) -> Result<NCForm> {
    if x.n() != omega.n {
        return Err(NcgError::DimensionMismatch {
            expected: omega.n,
            found: x.n(),
        });
    }
    let n = omega.n;
    let p = omega.degree;
    if p == 0 {
        return Ok(NCForm::zero(n, 0));
    }
    let d = omega.dim();
    let mut out = NCForm::zero(n, p - 1);
    let mut slot = Vec::with_capacity(p);
    for (k, idx) in increasing_tuples(d, p - 1).iter().enumerate() {
        let mut acc = CMatrix::zeros(n, n);
        for (a, &xa) in x.coords().iter().enumerate() {
            if xa == C64::new(0.0, 0.0) {
                continue;
            }
            slot.clear();
            slot.push(a);
            slot.extend_from_slice(idx);
            if let Some((s, val)) = omega.component_matrix_signed(&mut slot) {
                acc += val * (xa * C64::new(s, 0.0));
            }
        }
        out.coeffs[k] = acc;
    }
    Ok(out)
}

/// `L_X = i_X d′ + d′ i_X`.
pub fn lie_derivative(x: &InnerDerivation, omega: &NCForm) -> Result<NCForm> {
    let first = interior(x, &d_prime(omega))?;
    if omega.degree == 0 {
        return Ok(first);
    }
    first.try_add(&d_prime(&interior(x, omega)?))
}

/// The canonical 1-form `iθ`, sending `ad_γ` to the traceless part of `γ`.
pub fn canonical_theta(n: usize) -> NCForm {
    let basis = standard_basis(n);
    NCForm::from_fn(n, 1, |idx| basis.element(idx[0]).matrix().clone())
}

/// A noncommutative connection, given by its 1-form `ω` with
/// `∇̂_X 𝟙 = ω(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionForm {
    omega: NCForm,
}

impl ConnectionForm {
    pub fn new(omega: NCForm) -> Result<Self> {
        if omega.degree != 1 {
            return Err(NcgError::DimensionMismatch {
                expected: 1,
                found: omega.degree,
            });
        }
        Ok(Self { omega })
    }

    /// The flat connection `−iθ`, the embedding of an ordinary connection.
    pub fn ordinary(n: usize) -> Self {
        Self {
            omega: -&canonical_theta(n),
        }
    }

    pub fn omega(&self) -> &NCForm {
        &self.omega
    }

    pub fn into_omega(self) -> NCForm {
        self.omega
    }
}

/// `F = d′ω + ω²`, so `F(X, Y) = d′ω(X, Y) + [ω(X), ω(Y)]`.
pub fn curvature(conn: &ConnectionForm) -> NCForm {
    let w = &conn.omega;
    let sq = wedge(w, w).expect("same algebra");
    &d_prime(w) + &sq
}

/// Tolerance on `‖U*U − 𝟙‖` accepted by [`gauge_transform`].
pub const UNITARITY_TOL: f64 = 1e-10;

/// `ω ↦ U*ωU + U* d′U`.
pub fn gauge_transform(conn: &ConnectionForm, u: &AlgebraElement) -> Result<ConnectionForm> {
    if u.n() != conn.omega.n {
        return Err(NcgError::DimensionMismatch {
            expected: conn.omega.n,
            found: u.n(),
        });
    }
    let defect = linalg::unitarity_defect(u.matrix());
    if defect > UNITARITY_TOL {
        return Err(NcgError::NotUnitary { defect });
    }
    let u_form = NCForm::scalar(u);
    let u_star = NCForm::scalar(&u.adjoint());
    let conj = wedge(&u_star, &wedge(&conn.omega, &u_form)?)?;
    let inhom = wedge(&u_star, &d_prime(&u_form))?;
    ConnectionForm::new(conj.try_add(&inhom)?)
}

/// Largest `‖ω(X)* + ω(X)‖` over the real derivations `ad_{E_a}`, together
/// with whether it stays below `tol`. Real-linearity makes the basis enough.
pub fn is_antihermitian_connection(conn: &ConnectionForm, tol: f64) -> (bool, f64) {
    let defect = conn
        .omega
        .coeffs
        .iter()
        .map(|c| linalg::max_abs(&(c.adjoint() + c)))
        .fold(0.0, f64::max);
    (defect <= tol, defect)
}

/// `max |L_Y ω|`; zero exactly when `ω` is `Y`-invariant.
pub fn invariance_defect(omega: &NCForm, y: &InnerDerivation) -> Result<f64> {
    Ok(lie_derivative(y, omega)?.max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{bracket, su2_generators};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn tuples_are_ranked_consistently() {
        for (d, p) in [(3, 0), (3, 1), (3, 2), (8, 3), (5, 5), (3, 4)] {
            let t = increasing_tuples(d, p);
            assert_eq!(t.len(), binomial(d, p));
            for (k, idx) in t.iter().enumerate() {
                assert_eq!(tuple_rank(idx), k);
                assert!(idx.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn one_form_product_rule() {
        let n = 2;
        let a = NCForm::from_fn(n, 1, |i| {
            CMatrix::from_fn(2, 2, |r, s| c((i[0] + r) as f64 - s as f64))
        });
        let b = NCForm::from_fn(n, 1, |i| {
            CMatrix::from_fn(2, 2, |r, s| C64::new(0.5 * (r * s) as f64, i[0] as f64))
        });
        let ab = wedge(&a, &b).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                let expect = &a.component(&[x]) * &b.component(&[y])
                    - &a.component(&[y]) * &b.component(&[x]);
                assert!(ab.component(&[x, y]).approx_eq(&expect, 1e-14));
            }
        }
    }

    #[test]
    fn theta_squared_is_bracket() {
        let th = canonical_theta(2);
        let sq = wedge(&th, &th).unwrap();
        let xi = AlgebraElement::from_fn(2, |i, j| C64::new(1.0 + i as f64, -(j as f64)));
        let eta = AlgebraElement::from_fn(2, |i, j| C64::new((i * j) as f64, 0.3));
        let args = [
            InnerDerivation::new(&xi).unwrap(),
            InnerDerivation::new(&eta).unwrap(),
        ];
        let expect = bracket(&traceless_part(&xi), &traceless_part(&eta)).unwrap();
        assert!(sq.eval(&args).unwrap().approx_eq(&expect, 1e-13));
    }

    #[test]
    fn wedge_with_scalar_is_left_multiplication() {
        let gamma = su2_generators()[0].clone();
        let th = canonical_theta(2);
        let prod = wedge(&NCForm::scalar(&gamma), &th).unwrap();
        for a in 0..3 {
            assert!(prod
                .component(&[a])
                .approx_eq(&(&gamma * &th.component(&[a])), 1e-15));
        }
    }

    #[test]
    fn d_prime_examples() {
        let one = NCForm::scalar(&AlgebraElement::identity(2));
        assert!(d_prime(&one).max_abs() < 1e-15);
        let [t1, t2, t3] = su2_generators();
        let dt3 = d_prime(&NCForm::scalar(&t3));
        let val = dt3.eval(&[InnerDerivation::new(&t1).unwrap()]).unwrap();
        assert!(val.approx_eq(&(-&t2), 1e-14));
    }

    #[test]
    fn maurer_cartan_and_flatness() {
        for n in [2, 3] {
            let th = canonical_theta(n);
            let lhs = d_prime(&th);
            let rhs = wedge(&th, &th).unwrap();
            assert!(lhs.distance(&rhs).unwrap() < 1e-12);

            assert!(curvature(&ConnectionForm::ordinary(n)).max_abs() < 1e-12);
            let f = curvature(&ConnectionForm::new(th.clone()).unwrap());
            assert!(f.distance(&rhs.scale(c(2.0))).unwrap() < 1e-12);
            assert!(curvature(&ConnectionForm::new(NCForm::zero(n, 1)).unwrap()).max_abs() == 0.0);
        }
    }

    #[test]
    fn theta_values() {
        let th = canonical_theta(2);
        let [_, _, t3] = su2_generators();
        let v = th.eval(&[InnerDerivation::new(&t3).unwrap()]).unwrap();
        assert!(v.approx_eq(&t3, 1e-15));
        let v0 = th
            .eval(&[InnerDerivation::new(&AlgebraElement::identity(2)).unwrap()])
            .unwrap();
        assert!(v0.max_abs() < 1e-15);
    }

    #[test]
    fn interior_and_lie_derivative_examples() {
        let [t1, t2, t3] = su2_generators();
        let x = InnerDerivation::new(&t3).unwrap();
        let gamma = NCForm::scalar(&t1);
        let i0 = interior(&x, &gamma).unwrap();
        assert_eq!(i0.degree(), 0);
        assert!(i0.max_abs() == 0.0);

        let xi = AlgebraElement::from_fn(2, |i, j| C64::new(i as f64 + 2.0 * j as f64, 1.0));
        let itheta = interior(&InnerDerivation::new(&xi).unwrap(), &canonical_theta(2)).unwrap();
        assert!(itheta.component(&[]).approx_eq(&traceless_part(&xi), 1e-14));

        let l = lie_derivative(&x, &gamma).unwrap();
        assert!(l.component(&[]).approx_eq(&t2, 1e-14));
        assert!((invariance_defect(&gamma, &x).unwrap() - t2.max_abs()).abs() < 1e-14);
        assert!(invariance_defect(&canonical_theta(2), &x).unwrap() < 1e-14);
        assert!(invariance_defect(&NCForm::zero(2, 1), &x).unwrap() == 0.0);
        let one = NCForm::scalar(&AlgebraElement::identity(2));
        assert!(lie_derivative(&x, &one).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn gauge_transform_examples() {
        let th = canonical_theta(2);
        let conn = ConnectionForm::new(th.scale(C64::new(0.3, -0.2))).unwrap();
        let id = gauge_transform(&conn, &AlgebraElement::identity(2)).unwrap();
        assert!(id.omega().distance(conn.omega()).unwrap() < 1e-15);

        let [_, _, t3] = su2_generators();
        let u = t3.scale_re(0.7).exp();
        let f = curvature(&conn);
        let fu = curvature(&gauge_transform(&conn, &u).unwrap());
        let expect = NCForm::from_fn(2, 2, |idx| {
            (u.adjoint().matrix() * f.component(idx).matrix()) * u.matrix()
        });
        assert!(fu.distance(&expect).unwrap() < 1e-12);

        let bad = AlgebraElement::identity(2).scale_re(2.0);
        assert!(matches!(
            gauge_transform(&conn, &bad),
            Err(NcgError::NotUnitary { .. })
        ));
    }

    #[test]
    fn antihermitian_predicate() {
        let (ok, defect) = is_antihermitian_connection(&ConnectionForm::ordinary(3), 1e-12);
        assert!(ok && defect < 1e-15);
        let mut w = NCForm::zero(2, 1);
        w.set_component(&[1], &AlgebraElement::identity(2)).unwrap();
        let (ok, defect) = is_antihermitian_connection(&ConnectionForm::new(w).unwrap(), 1e-12);
        assert!(!ok);
        assert!((defect - 2.0).abs() < 1e-15);
    }

    #[test]
    fn eval_matches_components_and_antisymmetry() {
        let w = NCForm::from_fn(3, 2, |idx| {
            CMatrix::from_fn(3, 3, |r, s| {
                C64::new((idx[0] * 3 + r) as f64, (idx[1] + s) as f64)
            })
        });
        let args = [InnerDerivation::basis(3, 5), InnerDerivation::basis(3, 2)];
        let v = w.eval(&args).unwrap();
        assert!(v.approx_eq(&w.component(&[5, 2]), 1e-13));
        assert!(w
            .component(&[5, 2])
            .approx_eq(&(-w.component(&[2, 5])), 0.0));
        assert!(w.component(&[4, 4]).max_abs() == 0.0);
    }
}
