//! Counting the degrees of freedom of invariant noncommutative connections.
//!
//! A symmetry algebra acts on `M_n` through a homomorphism `λ_*`; the number
//! of scalar fields of an invariant traceless connection is the dimension of
//! the commutant of `ad ∘ λ_*` acting on `sl_n`. For `su(2)` the count is
//! cross-checked against the isotypic decomposition read off the Casimir.

use std::collections::BTreeMap;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{NcgError, Result};
use crate::lie::{
    centralizer, gl_basis, standard_basis, su2_basis, AlgebraElement, Ambient, LieBasis,
};
use crate::linalg::{self, CMatrix, CVector, C64, DEFAULT_RANK_TOL};

/// Tolerance of the homomorphism check on generator images.
pub const HOMOMORPHISM_TOL: f64 = 1e-10;
/// Allowed distance of a Casimir eigenvalue from the `j(j+1)` grid.
pub const CASIMIR_TOL: f64 = 1e-6;
/// Residual bound for solutions of the equivariance constraints.
pub const INTERTWINER_TOL: f64 = 1e-9;

/// A Lie algebra homomorphism given by the images of a domain basis.
#[derive(Debug, Clone)]
pub struct LieRep {
    domain: LieBasis,
    images: Vec<AlgebraElement>,
    n: usize,
}

impl LieRep {
    pub fn new(domain: LieBasis, images: Vec<AlgebraElement>) -> Result<Self> {
        if images.len() != domain.dim() {
            return Err(NcgError::DimensionMismatch {
                expected: domain.dim(),
                found: images.len(),
            });
        }
        let n = images
            .first()
            .map(AlgebraElement::n)
            .ok_or_else(|| NcgError::InvalidInput("representation without generators".into()))?;
        if let Some(bad) = images.iter().find(|x| x.n() != n) {
            return Err(NcgError::DimensionMismatch {
                expected: n,
                found: bad.n(),
            });
        }
        let rep = Self { domain, images, n };
        let residual = rep.homomorphism_residual();
        let scale = rep
            .images
            .iter()
            .map(AlgebraElement::max_abs)
            .fold(1.0, f64::max);
        if residual > HOMOMORPHISM_TOL * scale * scale {
            return Err(NcgError::HomomorphismViolation { residual });
        }
        Ok(rep)
    }

    /// A representation of `su(2)` given by the images of `T1, T2, T3`.
    pub fn su2(images: Vec<AlgebraElement>) -> Result<Self> {
        Self::new(su2_basis(), images)
    }

    /// `max |[λ(X_a), λ(X_b)] − Σ_c f_ab^c λ(X_c)|`.
    pub fn homomorphism_residual(&self) -> f64 {
        let d = self.domain.dim();
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                let mut m = self.images[a].commutator(&self.images[b]).into_matrix();
                for c in 0..d {
                    m -= self.images[c].matrix() * self.domain.structure_constant(a, b, c);
                }
                worst = worst.max(linalg::max_abs(&m));
            }
        }
        worst
    }

    pub fn domain(&self) -> &LieBasis {
        &self.domain
    }

    pub fn images(&self) -> &[AlgebraElement] {
        &self.images
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `λ_*(x)` for `x` in the span of the domain basis.
    pub fn image_of(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let c = self.domain.coords(x)?;
        let mut m = CMatrix::zeros(self.n, self.n);
        for (ci, img) in c.iter().zip(&self.images) {
            m += img.matrix() * *ci;
        }
        Ok(AlgebraElement::from_matrix_unchecked(m))
    }

    /// Whether the domain basis has the structure constants of `T1, T2, T3`.
    pub fn is_su2_domain(&self) -> bool {
        if self.domain.dim() != 3 {
            return false;
        }
        let reference = su2_basis();
        (0..3).all(|a| {
            (0..3).all(|b| {
                (0..3).all(|c| {
                    (self.domain.structure_constant(a, b, c)
                        - reference.structure_constant(a, b, c))
                    .norm()
                        <= 1e-12
                })
            })
        })
    }
}

/// `ρ(T_a) = −i J_a` on the spin-`(k−1)/2` irreducible module of dimension
/// `k`, basis ordered by decreasing weight.
pub fn spin_block(k: usize) -> [CMatrix; 3] {
    let j = (k as f64 - 1.0) / 2.0;
    let mut jp = CMatrix::zeros(k, k);
    for i in 1..k {
        let m = j - i as f64;
        jp[(i - 1, i)] = C64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let j1 = (&jp + &jm) * C64::new(0.5, 0.0);
    let j2 = (&jp - &jm) * C64::new(0.0, -0.5);
    let j3 = CMatrix::from_fn(k, k, |r, c| {
        if r == c {
            C64::new(j - r as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let mi = C64::new(0.0, -1.0);
    [j1 * mi, j2 * mi, j3 * mi]
}

/// Block-diagonal `su(2)` representation on `ℂ^n` with one irreducible block
/// per part.
pub fn partition_rep(n: usize, partition: &[usize]) -> Result<LieRep> {
    if partition.is_empty() {
        return Err(NcgError::InvalidPartition("empty partition".into()));
    }
    if partition.contains(&0) {
        return Err(NcgError::InvalidPartition("parts must be positive".into()));
    }
    let total: usize = partition.iter().sum();
    if total != n {
        return Err(NcgError::InvalidPartition(format!(
            "parts sum to {total}, expected {n}"
        )));
    }
    let mut images = [
        CMatrix::zeros(n, n),
        CMatrix::zeros(n, n),
        CMatrix::zeros(n, n),
    ];
    let mut offset = 0;
    for &k in partition {
        let block = spin_block(k);
        for (img, b) in images.iter_mut().zip(block.iter()) {
            img.view_mut((offset, offset), (k, k)).copy_from(b);
        }
        offset += k;
    }
    LieRep::su2(
        images
            .into_iter()
            .map(AlgebraElement::from_matrix_unchecked)
            .collect(),
    )
}

/// Coefficient space the adjoint action is induced on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetSpace {
    /// `sl_n` in the standard basis.
    Traceless,
    /// `M_n` in the elementary basis.
    Full,
}

impl TargetSpace {
    pub fn basis(self, n: usize) -> LieBasis {
        match self {
            TargetSpace::Traceless => (*standard_basis(n)).clone(),
            TargetSpace::Full => gl_basis(n),
        }
    }
}

/// Matrices of `ad_{λ_*(X_a)}` on the target coefficient space.
pub fn induced_adjoint(rep: &LieRep, target: TargetSpace) -> Result<Vec<CMatrix>> {
    let n = rep.n();
    match target {
        TargetSpace::Traceless => {
            let basis = standard_basis(n);
            rep.images().iter().map(|x| basis.ad_matrix(x)).collect()
        }
        TargetSpace::Full => Ok(rep
            .images()
            .iter()
            .map(|x| linalg::sylvester_operator(x.matrix(), x.matrix()))
            .collect()),
    }
}

fn check_square_family(ops: &[CMatrix]) -> Result<usize> {
    let m = ops.first().map(|o| o.nrows()).unwrap_or(0);
    for o in ops {
        if o.nrows() != o.ncols() {
            return Err(NcgError::NotSquare {
                rows: o.nrows(),
                cols: o.ncols(),
            });
        }
        if o.nrows() != m {
            return Err(NcgError::DimensionMismatch {
                expected: m,
                found: o.nrows(),
            });
        }
    }
    Ok(m)
}

/// `dim {T : T ρ_a = ρ_a T for all a}` for operators on a space of dimension
/// `dim_v`.
pub fn commutant_dimension(ops: &[CMatrix], dim_v: usize) -> Result<usize> {
    let m = if ops.is_empty() {
        dim_v
    } else {
        check_square_family(ops)?
    };
    if m != dim_v {
        return Err(NcgError::DimensionMismatch {
            expected: dim_v,
            found: m,
        });
    }
    if ops.is_empty() {
        return Ok(m * m);
    }
    let mm = m * m;
    let mut stacked = CMatrix::zeros(ops.len() * mm, mm);
    for (k, o) in ops.iter().enumerate() {
        stacked
            .view_mut((k * mm, 0), (mm, mm))
            .copy_from(&linalg::sylvester_operator(o, o));
    }
    Ok(linalg::null_space(&stacked, DEFAULT_RANK_TOL)?.dim())
}

/// Multiplicities of the irreducible `su(2)` blocks, keyed by dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotypicDecomposition {
    pub blocks: BTreeMap<usize, usize>,
    pub total_dim: usize,
}

impl IsotypicDecomposition {
    /// `Σ mult²`, the dimension of the commutant.
    pub fn commutant_dimension(&self) -> usize {
        self.blocks.values().map(|m| m * m).sum()
    }
}

/// Isotypic decomposition of a representation of `su(2)` given by the
/// operators of `T1, T2, T3`, read off the spectrum of `−Σ ρ(T_a)²`.
pub fn su2_isotypic(ops: &[CMatrix]) -> Result<IsotypicDecomposition> {
    if ops.len() != 3 {
        return Err(NcgError::DimensionMismatch {
            expected: 3,
            found: ops.len(),
        });
    }
    let m = check_square_family(ops)?;
    let scale = ops.iter().map(linalg::max_abs).fold(1.0, f64::max);
    let mut residual: f64 = 0.0;
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let br = &ops[a] * &ops[b] - &ops[b] * &ops[a];
        residual = residual.max(linalg::max_abs(&(br - &ops[c])));
    }
    if residual > HOMOMORPHISM_TOL * scale * scale {
        return Err(NcgError::HomomorphismViolation { residual });
    }
    if m == 0 {
        return Ok(IsotypicDecomposition {
            blocks: BTreeMap::new(),
            total_dim: 0,
        });
    }
    let casimir = -(ops
        .iter()
        .map(|o| o * o)
        .fold(CMatrix::zeros(m, m), |a, b| a + b));
    for o in ops {
        let comm = &casimir * o - o * &casimir;
        let defect = linalg::max_abs(&comm);
        if defect > 1e-9 * scale.powi(3) {
            return Err(NcgError::CasimirSpectrum(format!(
                "Casimir fails to commute with the generators (defect {defect:.3e})"
            )));
        }
    }
    let eigen = casimir
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| NcgError::CasimirSpectrum("eigenvalue computation failed".into()))?;
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for lam in eigen.iter() {
        if lam.im.abs() > CASIMIR_TOL {
            return Err(NcgError::CasimirSpectrum(format!(
                "eigenvalue {lam} is not real"
            )));
        }
        let k = (1.0 + 4.0 * lam.re).max(0.0).sqrt().round() as usize;
        let j = (k as f64 - 1.0) / 2.0;
        if k == 0 || (lam.re - j * (j + 1.0)).abs() > CASIMIR_TOL {
            return Err(NcgError::CasimirSpectrum(format!(
                "eigenvalue {} is off the j(j+1) grid",
                lam.re
            )));
        }
        *counts.entry(k).or_default() += 1;
    }
    let mut blocks = BTreeMap::new();
    for (k, count) in counts {
        if count % k != 0 {
            return Err(NcgError::CasimirSpectrum(format!(
                "{count} eigenvalues for blocks of dimension {k}"
            )));
        }
        blocks.insert(k, count / k);
    }
    Ok(IsotypicDecomposition {
        blocks,
        total_dim: m,
    })
}

/// How the symmetry generators act on the domain of an unknown map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainAction {
    /// `X₀ · v = [X₀, v]`: the domain sits in the symmetry algebra itself.
    Source,
    /// `X₀ · v = [λ_*(X₀), v]`: the domain sits in the target algebra.
    Target,
}

/// One unknown linear map from the span of `domain` to the target space.
#[derive(Debug, Clone)]
pub struct UnknownMap {
    pub domain: Vec<AlgebraElement>,
    pub action: DomainAction,
}

/// Affine constraints on the unknown maps.
#[derive(Debug, Clone)]
pub enum Pin {
    /// `L_block(domain[index]) = value`.
    Fixed {
        block: usize,
        index: usize,
        value: AlgebraElement,
    },
    /// `L_a(domain_a[i]) = L_b(domain_b[j])`, given as `(block, index)` pairs.
    Linked {
        left: (usize, usize),
        right: (usize, usize),
    },
}

/// Equivariance problem `ad_{λ_*(X₀)} ∘ L = L ∘ (X₀ · )` for every generator
/// `X₀` of the representation's domain, with optional pins.
#[derive(Debug, Clone)]
pub struct EquivariantProblem {
    pub rep: LieRep,
    pub target: TargetSpace,
    pub maps: Vec<UnknownMap>,
    pub pins: Vec<Pin>,
}

/// A solution: for each unknown map, the images of its domain basis.
pub type MapValues = Vec<Vec<AlgebraElement>>;

/// Solution set `particular + span(basis)` of an [`EquivariantProblem`].
#[derive(Debug, Clone)]
pub struct EquivariantSolutionSpace {
    pub particular: MapValues,
    pub basis: Vec<MapValues>,
    /// Largest constraint residual over the particular solution and basis.
    pub residual: f64,
}

impl EquivariantSolutionSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

struct Layout {
    offsets: Vec<usize>,
    domain_dims: Vec<usize>,
    target_dim: usize,
}

impl Layout {
    fn column(&self, block: usize, index: usize, s: usize) -> usize {
        self.offsets[block] + index * self.target_dim + s
    }
}

fn domain_columns(domain: &[AlgebraElement]) -> CMatrix {
    let dn = domain[0].n();
    let mut cols = CMatrix::zeros(dn * dn, domain.len());
    for (j, v) in domain.iter().enumerate() {
        cols.set_column(j, &linalg::vectorize(v.matrix()));
    }
    cols
}

fn domain_action_matrix(domain: &[AlgebraElement], generator: &AlgebraElement) -> Result<CMatrix> {
    let m = domain.len();
    let cols = domain_columns(domain);
    let mut s = CMatrix::zeros(m, m);
    for (j, v) in domain.iter().enumerate() {
        let image = linalg::vectorize(generator.commutator(v).matrix());
        let (c, residual) = linalg::least_squares(&cols, &image, 1e-12)?;
        if residual > 1e-9 * image.norm().max(1.0) {
            return Err(NcgError::InvalidInput(format!(
                "domain is not invariant under the symmetry action (residual {residual:.3e})"
            )));
        }
        s.set_column(j, &c);
    }
    Ok(s)
}

/// Solves the equivariance constraints together with the pins.
pub fn equivariant_solution_space(
    problem: &EquivariantProblem,
) -> Result<EquivariantSolutionSpace> {
    let rep = &problem.rep;
    let n = rep.n();
    let target_basis = problem.target.basis(n);
    let td = target_basis.dim();
    let mut offsets = Vec::new();
    let mut domain_dims = Vec::new();
    let mut total = 0;
    for map in &problem.maps {
        if map.domain.is_empty() {
            return Err(NcgError::InvalidInput(
                "unknown map with empty domain".into(),
            ));
        }
        let dn = map.domain[0].n();
        if map.domain.iter().any(|v| v.n() != dn) {
            return Err(NcgError::InvalidInput(
                "domain elements of mixed size".into(),
            ));
        }
        let cols = domain_columns(&map.domain);
        if linalg::rank(&cols, DEFAULT_RANK_TOL)? < map.domain.len() {
            return Err(NcgError::LinearlyDependent);
        }
        offsets.push(total);
        domain_dims.push(map.domain.len());
        total += map.domain.len() * td;
    }
    let layout = Layout {
        offsets,
        domain_dims,
        target_dim: td,
    };

    let ad_ops: Vec<CMatrix> = rep
        .images()
        .iter()
        .map(|x| target_basis.ad_matrix(x))
        .collect::<Result<_>>()?;

    let mut rows: Vec<CVector> = Vec::new();
    let mut rhs: Vec<C64> = Vec::new();
    for (b, map) in problem.maps.iter().enumerate() {
        let m = layout.domain_dims[b];
        for (g, ad) in ad_ops.iter().enumerate() {
            let generator = match map.action {
                DomainAction::Source => rep.domain().element(g).clone(),
                DomainAction::Target => rep.images()[g].clone(),
            };
            if generator.n() != map.domain[0].n() {
                return Err(NcgError::DimensionMismatch {
                    expected: generator.n(),
                    found: map.domain[0].n(),
                });
            }
            let s = domain_action_matrix(&map.domain, &generator)?;
            let op = linalg::sylvester_operator(ad, &s);
            for r in 0..op.nrows() {
                let mut row = CVector::zeros(total);
                row.rows_mut(layout.offsets[b], m * td)
                    .copy_from(&op.row(r).transpose());
                rows.push(row);
                rhs.push(C64::new(0.0, 0.0));
            }
        }
    }

    let check_slot = |block: usize, index: usize| -> Result<()> {
        if block >= problem.maps.len() || index >= layout.domain_dims[block] {
            return Err(NcgError::InvalidInput(format!(
                "pin refers to missing slot ({block}, {index})"
            )));
        }
        Ok(())
    };
    for pin in &problem.pins {
        match pin {
            Pin::Fixed {
                block,
                index,
                value,
            } => {
                check_slot(*block, *index)?;
                let c = target_basis.coords(value)?;
                for (s, cs) in c.into_iter().enumerate() {
                    let mut row = CVector::zeros(total);
                    row[layout.column(*block, *index, s)] = C64::new(1.0, 0.0);
                    rows.push(row);
                    rhs.push(cs);
                }
            }
            Pin::Linked { left, right } => {
                check_slot(left.0, left.1)?;
                check_slot(right.0, right.1)?;
                for s in 0..td {
                    let mut row = CVector::zeros(total);
                    row[layout.column(left.0, left.1, s)] += C64::new(1.0, 0.0);
                    row[layout.column(right.0, right.1, s)] -= C64::new(1.0, 0.0);
                    rows.push(row);
                    rhs.push(C64::new(0.0, 0.0));
                }
            }
        }
    }

    let mut system = CMatrix::zeros(rows.len(), total);
    for (r, row) in rows.iter().enumerate() {
        system.set_row(r, &row.transpose());
    }
    let b = DVector::from_vec(rhs);
    let (x0, residual) = if rows.is_empty() {
        (CVector::zeros(total), 0.0)
    } else {
        linalg::least_squares(&system, &b, DEFAULT_RANK_TOL)?
    };
    if residual > INTERTWINER_TOL * b.norm().max(1.0) {
        return Err(NcgError::InconsistentPins { residual });
    }
    let null = linalg::null_space(&system, DEFAULT_RANK_TOL)?;

    let unpack = |x: &CVector| -> MapValues {
        (0..problem.maps.len())
            .map(|blk| {
                (0..layout.domain_dims[blk])
                    .map(|j| {
                        let c: Vec<C64> = (0..td).map(|s| x[layout.column(blk, j, s)]).collect();
                        target_basis.combine(&c)
                    })
                    .collect()
            })
            .collect()
    };
    let particular = unpack(&x0);
    let basis: Vec<MapValues> = null.basis.iter().map(&unpack).collect();

    let mut worst = equivariance_residual(problem, &particular)?;
    for sol in &basis {
        worst = worst.max(equivariance_residual(problem, sol)?);
    }
    if worst > INTERTWINER_TOL {
        return Err(NcgError::ConstraintViolation { residual: worst });
    }
    Ok(EquivariantSolutionSpace {
        particular,
        basis,
        residual: worst,
    })
}

/// Largest `|[λ_*(X₀), L(v)] − L(X₀ · v)|` over generators and domain
/// vectors, computed directly on matrices.
pub fn equivariance_residual(problem: &EquivariantProblem, values: &MapValues) -> Result<f64> {
    let rep = &problem.rep;
    let mut worst: f64 = 0.0;
    for (map, vals) in problem.maps.iter().zip(values) {
        let cols = domain_columns(&map.domain);
        for (g, img) in rep.images().iter().enumerate() {
            let generator = match map.action {
                DomainAction::Source => rep.domain().element(g),
                DomainAction::Target => img,
            };
            for (v, lv) in map.domain.iter().zip(vals) {
                let moved = linalg::vectorize(generator.commutator(v).matrix());
                let (c, _) = linalg::least_squares(&cols, &moved, 1e-12)?;
                let mut rhs = CMatrix::zeros(rep.n(), rep.n());
                for (ck, lk) in c.iter().zip(vals) {
                    rhs += lk.matrix() * *ck;
                }
                let lhs = img.commutator(lv).into_matrix();
                worst = worst.max(linalg::max_abs(&(lhs - rhs)));
            }
        }
    }
    Ok(worst)
}

/// Aggregated classification data for a representation.
#[derive(Debug, Clone)]
pub struct Classification {
    pub n: usize,
    pub target: TargetSpace,
    /// Dimension of the centralizer of the image inside `su(n)`.
    pub z0_dim: usize,
    /// Basis of the centralizer of the image inside `M_n`.
    pub w0_basis: Vec<AlgebraElement>,
    pub isotypic: Option<IsotypicDecomposition>,
    pub scalar_field_count: usize,
}

/// Composes the centralizer, commutant and (for `su(2)`) isotypic
/// computations, requiring the two counts to agree.
pub fn classify(rep: &LieRep, target: TargetSpace) -> Result<Classification> {
    let n = rep.n();
    let w0 = centralizer(rep.images(), n, Ambient::Full)?;
    let z0 = centralizer(rep.images(), n, Ambient::Su)?;
    let ops = induced_adjoint(rep, target)?;
    let dim_v = target.basis(n).dim();
    let count = commutant_dimension(&ops, dim_v)?;
    let isotypic = if rep.is_su2_domain() {
        let iso = su2_isotypic(&ops)?;
        if iso.commutant_dimension() != count {
            return Err(NcgError::CasimirSpectrum(format!(
                "isotypic multiplicities give {} intertwiners, commutant has dimension {count}",
                iso.commutant_dimension()
            )));
        }
        Some(iso)
    } else {
        None
    };
    Ok(Classification {
        n,
        target,
        z0_dim: z0.dim(),
        w0_basis: w0.elements(),
        isotypic,
        scalar_field_count: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{su2_generators, Field, LieSubspace};

    fn blocks(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn partition_rep_examples() {
        let fund = partition_rep(2, &[2]).unwrap();
        for (img, t) in fund.images().iter().zip(su2_generators().iter()) {
            assert!(img.approx_eq(t, 1e-15));
        }
        let triv = partition_rep(3, &[1, 1, 1]).unwrap();
        assert!(triv.images().iter().all(|x| x.max_abs() == 0.0));
        let spin1 = partition_rep(3, &[3]).unwrap();
        let cas = spin1
            .images()
            .iter()
            .fold(AlgebraElement::zero(3), |acc, x| acc - x * x);
        assert!(cas.approx_eq(&AlgebraElement::identity(3).scale_re(2.0), 1e-13));
        for p in [&[2, 1][..], &[3], &[4], &[2, 2], &[3, 1]] {
            let n = p.iter().sum();
            let rep = partition_rep(n, p).unwrap();
            assert!(rep.homomorphism_residual() < 1e-12);
            assert!(rep.images().iter().all(|x| x.is_antihermitian(1e-14)));
        }
    }

    #[test]
    fn invalid_partitions() {
        assert!(matches!(
            partition_rep(3, &[2, 2]),
            Err(NcgError::InvalidPartition(_))
        ));
        assert!(matches!(
            partition_rep(3, &[]),
            Err(NcgError::InvalidPartition(_))
        ));
        assert!(matches!(
            partition_rep(3, &[3, 0]),
            Err(NcgError::InvalidPartition(_))
        ));
    }

    #[test]
    fn non_homomorphism_is_rejected() {
        let [t1, t2, _] = su2_generators();
        let err = LieRep::su2(vec![t1, t2, AlgebraElement::zero(2)]).unwrap_err();
        assert!(matches!(err, NcgError::HomomorphismViolation { .. }));
    }

    #[test]
    fn induced_adjoint_examples() {
        let ops = induced_adjoint(
            &partition_rep(3, &[1, 1, 1]).unwrap(),
            TargetSpace::Traceless,
        )
        .unwrap();
        assert!(ops
            .iter()
            .all(|o| o.shape() == (8, 8) && linalg::max_abs(o) == 0.0));
        let ops =
            induced_adjoint(&partition_rep(2, &[2]).unwrap(), TargetSpace::Traceless).unwrap();
        for o in &ops {
            assert_eq!(linalg::rank(o, DEFAULT_RANK_TOL).unwrap(), 2);
        }
        let br = &ops[0] * &ops[1] - &ops[1] * &ops[0];
        assert!(linalg::max_abs(&(br - &ops[2])) < 1e-13);
    }

    #[test]
    fn counts_and_isotypic_blocks_for_m3() {
        let cases: [(&[usize], usize, &[(usize, usize)]); 3] = [
            (&[1, 1, 1], 64, &[(1, 8)]),
            (&[2, 1], 6, &[(3, 1), (2, 2), (1, 1)]),
            (&[3], 2, &[(3, 1), (5, 1)]),
        ];
        for (p, count, iso) in cases {
            let rep = partition_rep(3, p).unwrap();
            let c = classify(&rep, TargetSpace::Traceless).unwrap();
            assert_eq!(c.scalar_field_count, count, "partition {p:?}");
            assert_eq!(c.isotypic.unwrap().blocks, blocks(iso));
        }
        let ops =
            induced_adjoint(&partition_rep(2, &[2]).unwrap(), TargetSpace::Traceless).unwrap();
        assert_eq!(commutant_dimension(&ops, 3).unwrap(), 1);
    }

    #[test]
    fn commutant_of_empty_family_is_everything() {
        assert_eq!(commutant_dimension(&[], 4).unwrap(), 16);
    }

    #[test]
    fn isotypic_rejects_non_su2_operators() {
        let o = CMatrix::identity(2, 2);
        assert!(su2_isotypic(&[o.clone(), o.clone(), o]).is_err());
    }

    fn u1_rep() -> LieRep {
        let t3 = su2_generators()[2].clone();
        LieRep::new(LieBasis::new(vec![t3.clone()]).unwrap(), vec![t3]).unwrap()
    }

    #[test]
    fn spherical_classification() {
        let c = classify(&u1_rep(), TargetSpace::Traceless).unwrap();
        assert_eq!(c.z0_dim, 1);
        assert_eq!(c.w0_basis.len(), 2);
        let w0 = LieSubspace::from_elements(gl_basis(2), &c.w0_basis, Field::Complex).unwrap();
        assert!(w0.contains(&AlgebraElement::identity(2), 1e-12));
        assert!(w0.contains(&su2_generators()[2], 1e-12));
        for w in &c.w0_basis {
            assert!(w0.contains(&w.adjoint(), 1e-12));
        }
        assert!(c.isotypic.is_none());
    }

    #[test]
    fn lambda_on_complement_has_rotation_shape() {
        let [t1, t2, t3] = su2_generators();
        let problem = EquivariantProblem {
            rep: u1_rep(),
            target: TargetSpace::Traceless,
            maps: vec![UnknownMap {
                domain: vec![t1.clone(), t2.clone()],
                action: DomainAction::Source,
            }],
            pins: vec![],
        };
        let sol = equivariant_solution_space(&problem).unwrap();
        assert_eq!(sol.dimension(), 2);
        let b = su2_basis();
        for s in &sol.basis {
            let l1 = b.coords(&s[0][0]).unwrap();
            let l2 = b.coords(&s[0][1]).unwrap();
            assert!(l1[2].norm() < 1e-12 && l2[2].norm() < 1e-12);
            assert!((l1[0] - l2[1]).norm() < 1e-12);
            assert!((l1[1] + l2[0]).norm() < 1e-12);
        }
        let _ = t3;
    }

    #[test]
    fn shared_eta_with_link_pin() {
        let t3 = su2_generators()[2].clone();
        let problem = EquivariantProblem {
            rep: u1_rep(),
            target: TargetSpace::Traceless,
            maps: vec![
                UnknownMap {
                    domain: vec![t3.clone()],
                    action: DomainAction::Source,
                },
                UnknownMap {
                    domain: vec![t3.clone()],
                    action: DomainAction::Target,
                },
            ],
            pins: vec![Pin::Linked {
                left: (0, 0),
                right: (1, 0),
            }],
        };
        let sol = equivariant_solution_space(&problem).unwrap();
        assert_eq!(sol.dimension(), 1);
        let v = &sol.basis[0];
        assert!(v[0][0].approx_eq(&v[1][0], 1e-12));
    }

    #[test]
    fn trivial_rep_leaves_everything_free() {
        let rep = partition_rep(3, &[1, 1, 1]).unwrap();
        let domain: Vec<AlgebraElement> = standard_basis(3).elements()[..2].to_vec();
        let problem = EquivariantProblem {
            rep,
            target: TargetSpace::Full,
            maps: vec![UnknownMap {
                domain,
                action: DomainAction::Target,
            }],
            pins: vec![],
        };
        assert_eq!(
            equivariant_solution_space(&problem).unwrap().dimension(),
            18
        );
    }

    #[test]
    fn pins_shift_and_conflict() {
        let [t1, t2, t3] = su2_generators();
        let base = |pins| EquivariantProblem {
            rep: u1_rep(),
            target: TargetSpace::Traceless,
            maps: vec![UnknownMap {
                domain: vec![t1.clone(), t2.clone()],
                action: DomainAction::Source,
            }],
            pins,
        };
        let fixed = base(vec![Pin::Fixed {
            block: 0,
            index: 0,
            value: t1.clone(),
        }]);
        let sol = equivariant_solution_space(&fixed).unwrap();
        assert_eq!(sol.dimension(), 0);
        assert!(sol.particular[0][1].approx_eq(&t2, 1e-12));

        let bad = base(vec![Pin::Fixed {
            block: 0,
            index: 0,
            value: t3,
        }]);
        assert!(matches!(
            equivariant_solution_space(&bad),
            Err(NcgError::InconsistentPins { .. })
        ));
    }
}
