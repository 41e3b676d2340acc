//! Matrix Lie algebra infrastructure.
//!
//! The concrete `su(2)` basis is `T_a = −(i/2)·σ_a`, which realizes
//! `[T1, T2] = T3`, `[T2, T3] = T1`, `[T3, T1] = T2`. For general `n` the
//! standard basis of `su(n)` (and, complexified, of `sl_n`) is
//! `E_a = −(i/2)·λ_a` with `λ_a` the generalized Gell-Mann matrices; it is
//! orthonormal for `⟨X, Y⟩ = −2 Tr(XY)` and reduces to `T_a` for `n = 2`.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};

use crate::error::{NcgError, Result};
use crate::linalg::{self, CMatrix, CVector, C64, DEFAULT_RANK_TOL};

/// Entrywise tolerance for deciding that two algebra elements are equal.
pub const EQ_TOL: f64 = 1e-10;

/// An element of `M_n(ℂ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement(CMatrix);

impl AlgebraElement {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(NcgError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(NcgError::InvalidInput("empty matrix".into()));
        }
        if !linalg::is_finite(&m) {
            return Err(NcgError::NonFinite);
        }
        Ok(Self(m))
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self(m)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(CMatrix::from_fn(n, n, f))
    }

    pub fn zero(n: usize) -> Self {
        Self(CMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n, n))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.0)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n() == other.n() && (self - other).max_abs() <= tol
    }

    pub fn is_antihermitian(&self, tol: f64) -> bool {
        (&self.adjoint() + self).max_abs() <= tol
    }

    /// `[self, other]` assuming equal sizes.
    pub(crate) fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn exp(&self) -> Self {
        Self(linalg::expm(&self.0))
    }

    pub fn try_inverse(&self) -> Result<Self> {
        let sv = self.0.singular_values();
        let smax = sv.max();
        let smin = sv.min();
        if smax == 0.0 || smin <= 1e-12 * smax {
            return Err(NcgError::SingularElement);
        }
        self.0
            .clone()
            .try_inverse()
            .map(Self)
            .ok_or(NcgError::SingularElement)
    }
}

macro_rules! impl_binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr<&AlgebraElement> for &AlgebraElement {
            type Output = AlgebraElement;
            fn $f(self, rhs: &AlgebraElement) -> AlgebraElement {
                AlgebraElement(&self.0 $op &rhs.0)
            }
        }
        impl $tr<AlgebraElement> for AlgebraElement {
            type Output = AlgebraElement;
            fn $f(self, rhs: AlgebraElement) -> AlgebraElement {
                AlgebraElement(&self.0 $op &rhs.0)
            }
        }
        impl $tr<&AlgebraElement> for AlgebraElement {
            type Output = AlgebraElement;
            fn $f(self, rhs: &AlgebraElement) -> AlgebraElement {
                AlgebraElement(&self.0 $op &rhs.0)
            }
        }
        impl $tr<AlgebraElement> for &AlgebraElement {
            type Output = AlgebraElement;
            fn $f(self, rhs: AlgebraElement) -> AlgebraElement {
                AlgebraElement(&self.0 $op &rhs.0)
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);
impl_binop!(Mul, mul, *);

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement(-self.0)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement(-&self.0)
    }
}

/// `AB − BA`.
pub fn bracket(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    if a.n() != b.n() {
        return Err(NcgError::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(a.commutator(b))
}

/// `γ − (Tr γ / n)·𝟙`.
pub fn traceless_part(gamma: &AlgebraElement) -> AlgebraElement {
    let n = gamma.n();
    let shift = gamma.trace() / C64::new(n as f64, 0.0);
    AlgebraElement(gamma.matrix() - CMatrix::identity(n, n) * shift)
}

/// `h X h⁻¹`.
pub fn adjoint_action(h: &AlgebraElement, x: &AlgebraElement) -> Result<AlgebraElement> {
    if h.n() != x.n() {
        return Err(NcgError::DimensionMismatch {
            expected: h.n(),
            found: x.n(),
        });
    }
    let inv = h.try_inverse()?;
    Ok(h * x * &inv)
}

pub fn pauli() -> [CMatrix; 3] {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// `T_a = −(i/2)·σ_a`.
pub fn su2_generators() -> [AlgebraElement; 3] {
    let f = C64::new(0.0, -0.5);
    pauli().map(|s| AlgebraElement(s * f))
}

pub fn su2_basis() -> LieBasis {
    LieBasis::new(su2_generators().to_vec()).expect("su(2) generators form a Lie basis")
}

/// Generalized Gell-Mann matrices in the standard order
/// (symmetric, antisymmetric pairs for `(j, k)`, then the `k`-th diagonal).
pub fn gell_mann(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(n * n - 1);
    for k in 1..n {
        for j in 0..k {
            let mut s = CMatrix::zeros(n, n);
            s[(j, k)] = C64::new(1.0, 0.0);
            s[(k, j)] = C64::new(1.0, 0.0);
            out.push(s);
            let mut a = CMatrix::zeros(n, n);
            a[(j, k)] = C64::new(0.0, -1.0);
            a[(k, j)] = C64::new(0.0, 1.0);
            out.push(a);
        }
        let l = k as f64;
        let norm = (2.0 / (l * (l + 1.0))).sqrt();
        let mut d = CMatrix::zeros(n, n);
        for m in 0..k {
            d[(m, m)] = C64::new(norm, 0.0);
        }
        d[(k, k)] = C64::new(-l * norm, 0.0);
        out.push(d);
    }
    out
}

fn build_su_basis(n: usize) -> LieBasis {
    let f = C64::new(0.0, -0.5);
    let elements = gell_mann(n)
        .into_iter()
        .map(|m| AlgebraElement(m * f))
        .collect();
    LieBasis::new(elements).expect("Gell-Mann basis is a Lie basis")
}

/// The orthonormal antihermitian basis of `su(n)` used to index forms and
/// derivations. Cached per `n`.
pub fn standard_basis(n: usize) -> Arc<LieBasis> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<LieBasis>>>> = OnceLock::new();
    assert!(n >= 2, "sl_n needs n >= 2");
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("basis cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(build_su_basis(n)))
        .clone()
}

/// Elementary matrices ordered column-major, so that coordinates in this
/// basis coincide with `vec(X)`.
pub fn gl_basis(n: usize) -> LieBasis {
    let mut elements = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let mut m = CMatrix::zeros(n, n);
            m[(i, j)] = C64::new(1.0, 0.0);
            elements.push(AlgebraElement(m));
        }
    }
    LieBasis::new(elements).expect("elementary matrices span gl_n")
}

/// An ordered basis of a matrix Lie algebra together with its structure
/// constants `[e_a, e_b] = Σ_c f_ab^c e_c`.
#[derive(Debug, Clone)]
pub struct LieBasis {
    elements: Vec<AlgebraElement>,
    n: usize,
    structure: Vec<C64>,
    basis_matrix: CMatrix,
    pinv: CMatrix,
}

impl LieBasis {
    pub fn new(elements: Vec<AlgebraElement>) -> Result<Self> {
        let n = elements
            .first()
            .map(AlgebraElement::n)
            .ok_or_else(|| NcgError::InvalidInput("empty Lie basis".into()))?;
        if let Some(bad) = elements.iter().find(|e| e.n() != n) {
            return Err(NcgError::DimensionMismatch {
                expected: n,
                found: bad.n(),
            });
        }
        let d = elements.len();
        let mut basis_matrix = CMatrix::zeros(n * n, d);
        for (a, e) in elements.iter().enumerate() {
            basis_matrix.set_column(a, &linalg::vectorize(e.matrix()));
        }
        if linalg::rank(&basis_matrix, DEFAULT_RANK_TOL)? < d {
            return Err(NcgError::LinearlyDependent);
        }
        let pinv = basis_matrix
            .clone()
            .pseudo_inverse(1e-12)
            .map_err(|e| NcgError::InvalidInput(e.into()))?;
        let mut basis = Self {
            elements,
            n,
            structure: vec![C64::new(0.0, 0.0); d * d * d],
            basis_matrix,
            pinv,
        };
        for a in 0..d {
            for b in 0..d {
                let br = basis.elements[a].commutator(&basis.elements[b]);
                let c = basis.coords(&br).map_err(|e| match e {
                    NcgError::OutsideSpan { residual } => NcgError::NotSubalgebra { residual },
                    other => other,
                })?;
                for (k, v) in c.into_iter().enumerate() {
                    basis.structure[(a * d + b) * d + k] = v;
                }
            }
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Matrix size of the elements.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[AlgebraElement] {
        &self.elements
    }

    pub fn element(&self, a: usize) -> &AlgebraElement {
        &self.elements[a]
    }

    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> C64 {
        let d = self.dim();
        self.structure[(a * d + b) * d + c]
    }

    /// Coordinates of `x` in this basis, failing when `x` is not in the span.
    pub fn coords(&self, x: &AlgebraElement) -> Result<Vec<C64>> {
        if x.n() != self.n {
            return Err(NcgError::DimensionMismatch {
                expected: self.n,
                found: x.n(),
            });
        }
        let v = linalg::vectorize(x.matrix());
        let c = &self.pinv * &v;
        let residual = (&self.basis_matrix * &c - &v).norm();
        if residual > 1e-9 * v.norm().max(1.0) {
            return Err(NcgError::OutsideSpan { residual });
        }
        Ok(c.iter().copied().collect())
    }

    /// `Σ_a c_a e_a`.
    pub fn combine(&self, coeffs: &[C64]) -> AlgebraElement {
        let mut m = CMatrix::zeros(self.n, self.n);
        for (c, e) in coeffs.iter().zip(&self.elements) {
            m += e.matrix() * *c;
        }
        AlgebraElement(m)
    }

    /// Matrix of `ad_x` in this basis: column `b` holds the coordinates of
    /// `[x, e_b]`.
    pub fn ad_matrix(&self, x: &AlgebraElement) -> Result<CMatrix> {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for b in 0..d {
            let c = self.coords(&bracket(x, &self.elements[b])?)?;
            for (k, v) in c.into_iter().enumerate() {
                m[(k, b)] = v;
            }
        }
        Ok(m)
    }

    /// `K_ab = Tr(ad_{e_a} ∘ ad_{e_b})` from the structure constants.
    pub fn killing_matrix(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |a, b| {
            let mut s = C64::new(0.0, 0.0);
            for c in 0..d {
                for e in 0..d {
                    s += self.structure_constant(a, e, c) * self.structure_constant(b, c, e);
                }
            }
            s
        })
    }

    /// True when every element is antihermitian and traceless.
    pub fn is_su(&self, tol: f64) -> bool {
        self.elements
            .iter()
            .all(|e| e.is_antihermitian(tol) && e.trace().norm() <= tol)
    }
}

/// `Tr(ad_X ∘ ad_Y)` with the adjoint maps computed in `basis`.
pub fn killing_form(x: &AlgebraElement, y: &AlgebraElement, basis: &LieBasis) -> Result<C64> {
    basis.coords(x)?;
    basis.coords(y)?;
    let ax = basis.ad_matrix(x)?;
    let ay = basis.ad_matrix(y)?;
    Ok((ax * ay).trace())
}

/// Scalar field over which a subspace is spanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

/// A subspace of a Lie algebra given by coefficient vectors in an ambient
/// basis.
#[derive(Debug, Clone)]
pub struct LieSubspace {
    ambient: LieBasis,
    vectors: Vec<CVector>,
    field: Field,
}

impl LieSubspace {
    pub fn new(ambient: LieBasis, vectors: Vec<CVector>, field: Field) -> Result<Self> {
        let d = ambient.dim();
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(NcgError::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
        if field == Field::Real
            && vectors
                .iter()
                .any(|v| v.iter().any(|z| z.im.abs() > EQ_TOL))
        {
            return Err(NcgError::InvalidInput(
                "real subspace given complex coefficients".into(),
            ));
        }
        let s = Self {
            ambient,
            vectors,
            field,
        };
        if linalg::rank(&s.coefficient_matrix(), DEFAULT_RANK_TOL)? < s.vectors.len() {
            return Err(NcgError::LinearlyDependent);
        }
        Ok(s)
    }

    /// Subspace spanned by the given ambient elements.
    pub fn from_elements(
        ambient: LieBasis,
        elements: &[AlgebraElement],
        field: Field,
    ) -> Result<Self> {
        let vectors = elements
            .iter()
            .map(|e| ambient.coords(e).map(DVector::from_vec))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient, vectors, field)
    }

    pub fn full(ambient: LieBasis, field: Field) -> Self {
        let d = ambient.dim();
        let vectors = (0..d).map(|k| linalg::unit_vector(d, k)).collect();
        Self {
            ambient,
            vectors,
            field,
        }
    }

    pub fn ambient(&self) -> &LieBasis {
        &self.ambient
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn elements(&self) -> Vec<AlgebraElement> {
        self.vectors
            .iter()
            .map(|v| self.ambient.combine(v.as_slice()))
            .collect()
    }

    /// `d × k` matrix whose columns are the basis vectors.
    pub fn coefficient_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.ambient.dim(), self.dim());
        for (k, v) in self.vectors.iter().enumerate() {
            m.set_column(k, v);
        }
        m
    }

    /// Coordinates of an ambient coefficient vector in this subspace basis,
    /// with the residual of the orthogonal projection.
    pub fn project(&self, v: &CVector) -> Result<(CVector, f64)> {
        linalg::least_squares(&self.coefficient_matrix(), v, 1e-12)
    }

    /// Coordinates of `x` in this subspace basis.
    pub fn coords(&self, x: &AlgebraElement) -> Result<Vec<C64>> {
        let v = DVector::from_vec(self.ambient.coords(x)?);
        let (c, residual) = self.project(&v)?;
        if residual > 1e-9 * v.norm().max(1.0) {
            return Err(NcgError::OutsideSpan { residual });
        }
        Ok(c.iter().copied().collect())
    }

    pub fn contains(&self, x: &AlgebraElement, tol: f64) -> bool {
        match self.ambient.coords(x) {
            Ok(c) => match self.project(&DVector::from_vec(c)) {
                Ok((_, r)) => r <= tol,
                Err(_) => false,
            },
            Err(_) => false,
        }
    }

    /// Same span (over ℂ) as `other`, in the same ambient algebra.
    pub fn span_equals(&self, other: &LieSubspace) -> Result<bool> {
        if self.dim() != other.dim() {
            return Ok(false);
        }
        let mut joined = CMatrix::zeros(self.ambient.dim(), self.dim() + other.dim());
        for (k, v) in self.vectors.iter().chain(other.vectors.iter()).enumerate() {
            joined.set_column(k, v);
        }
        Ok(linalg::rank(&joined, DEFAULT_RANK_TOL)? == self.dim())
    }

    /// Multiplicative closure as an associative subalgebra of `M_n`:
    /// the largest residual of projecting products back onto the span.
    pub fn product_closure_residual(&self) -> Result<f64> {
        let elems = self.elements();
        let mut worst: f64 = 0.0;
        for a in &elems {
            for b in &elems {
                let p = a * b;
                let v = DVector::from_vec(match self.ambient.coords(&p) {
                    Ok(c) => c,
                    Err(NcgError::OutsideSpan { residual }) => return Ok(residual),
                    Err(e) => return Err(e),
                });
                worst = worst.max(self.project(&v)?.1);
            }
        }
        Ok(worst)
    }
}

fn is_real(m: &CMatrix) -> bool {
    m.iter().all(|z| z.im.abs() <= 1e-13 * (1.0 + z.re.abs()))
}

/// Splits `g = h ⊕ l` with `l` the Killing-orthogonal complement of `h`,
/// verifying that `h` is a subalgebra and that `[h, l] ⊆ l`.
pub fn reductive_split(g: &LieBasis, h: &LieSubspace) -> Result<(LieSubspace, LieSubspace)> {
    if h.ambient().dim() != g.dim()
        || h.ambient()
            .elements()
            .iter()
            .zip(g.elements())
            .any(|(a, b)| !a.approx_eq(b, EQ_TOL))
    {
        return Err(NcgError::InvalidInput(
            "subspace is not expressed in the given ambient basis".into(),
        ));
    }
    let h_elems = h.elements();
    for a in &h_elems {
        for b in &h_elems {
            let v = DVector::from_vec(g.coords(&a.commutator(b))?);
            let (_, residual) = h.project(&v)?;
            if residual > 1e-10 * (1.0 + v.norm()) {
                return Err(NcgError::NotSubalgebra { residual });
            }
        }
    }

    let killing = g.killing_matrix();
    let hm = h.coefficient_matrix();
    let hk = hm.transpose() * &killing;
    let restricted = &hk * &hm;
    if linalg::rank(&restricted, DEFAULT_RANK_TOL)? < h.dim() {
        return Err(NcgError::DegenerateKilling);
    }

    let l_vectors: Vec<CVector> = if is_real(&hk) && h.field() == Field::Real {
        let real = hk.map(|z| z.re);
        linalg::real_null_space(&real, DEFAULT_RANK_TOL)?
            .basis
            .into_iter()
            .map(|v| v.map(|x| C64::new(x, 0.0)))
            .collect()
    } else {
        linalg::null_space(&hk, DEFAULT_RANK_TOL)?.basis
    };
    let l = LieSubspace::new(g.clone(), l_vectors, h.field())?;

    for a in &h_elems {
        for b in l.elements() {
            let v = DVector::from_vec(g.coords(&a.commutator(&b))?);
            let (_, residual) = l.project(&v)?;
            if residual > 1e-10 * (1.0 + v.norm()) {
                return Err(NcgError::NotReductive { residual });
            }
        }
    }
    Ok((h.clone(), l))
}

/// Ambient algebra in which a centralizer is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    /// All of `M_n`, complex-linear.
    Full,
    /// `su(n)`, real-linear.
    Su,
    /// `sl_n`, complex-linear.
    Sl,
}

/// `{Z ∈ ambient : [Z, g] = 0 for every generator g}`.
pub fn centralizer(
    generators: &[AlgebraElement],
    n: usize,
    ambient: Ambient,
) -> Result<LieSubspace> {
    if let Some(g) = generators.iter().find(|g| g.n() != n) {
        return Err(NcgError::DimensionMismatch {
            expected: n,
            found: g.n(),
        });
    }
    let basis = match ambient {
        Ambient::Full => gl_basis(n),
        Ambient::Su | Ambient::Sl => (*standard_basis(n)).clone(),
    };
    let d = basis.dim();
    let nn = n * n;
    let mut op = CMatrix::zeros(generators.len() * nn, d);
    for (k, g) in generators.iter().enumerate() {
        for (a, e) in basis.elements().iter().enumerate() {
            let col = linalg::vectorize(e.commutator(g).matrix());
            op.view_mut((k * nn, a), (nn, 1)).copy_from(&col);
        }
    }
    match ambient {
        Ambient::Full | Ambient::Sl => {
            let ns = linalg::null_space(&op, DEFAULT_RANK_TOL)?;
            LieSubspace::new(basis, ns.basis, Field::Complex)
        }
        Ambient::Su => {
            let rows = op.nrows();
            let mut real = DMatrix::<f64>::zeros(2 * rows, d);
            for i in 0..rows {
                for j in 0..d {
                    real[(i, j)] = op[(i, j)].re;
                    real[(rows + i, j)] = op[(i, j)].im;
                }
            }
            let ns = linalg::real_null_space(&real, DEFAULT_RANK_TOL)?;
            let vectors = ns
                .basis
                .into_iter()
                .map(|v| v.map(|x| C64::new(x, 0.0)))
                .collect();
            LieSubspace::new(basis, vectors, Field::Real)
        }
    }
}
