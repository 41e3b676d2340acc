//! The spherically symmetric invariant connection on `ℝ × ℝ³∖{0}` with
//! `M_2` fibre, in the singular and radial gauges, plus its generic
//! decomposition `Ad_{h⁻¹}(ω̃ + Λ∘θ^G + φ∘Ad_h∘(θ^H − iθ))`.
//!
//! With `ψ = ψ_re + iψ_im`, the singular gauge reads
//!
//! ```text
//! A = a_t T3 dt + a_r T3 dr + (ψ_re T1 + ψ_im T2) dϑ
//!     + (sinϑ (ψ_re T2 − ψ_im T1) + η cosϑ T3) dϕ
//! alg(T1) = −(φ_re T1 + φ_im T2),  alg(T2) = −(φ_re T2 − φ_im T1),
//! alg(T3) = −η T3
//! ```
//!
//! and the radial gauge is its image under the transition by
//! `e^{−ϑT2} e^{−ϕT3}`, which sends `(T1, T2, T3)` to `(T_ϑ, T_ϕ, T_r)`.

use nalgebra::{Matrix3, Rotation3};

use crate::classifier::{
    equivariance_residual, DomainAction, EquivariantProblem, LieRep, UnknownMap, INTERTWINER_TOL,
};
use crate::error::{NcgError, Result};
use crate::lie::{su2_generators, AlgebraElement, LieBasis};
use crate::linalg::C64;

use super::fields::{AnsatzFields, FieldValues};
use super::gauge::{
    check_chart, conj, su2_combine_re, AxisProductGauge, Chart, GaugeFunction, LocalNCOneForm,
};

/// A point of `ℝ × ℝ³∖{0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SamplePoint {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let p = Self { t, x, y, z };
        if !(t.is_finite() && x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(NcgError::InvalidInput("non-finite sample point".into()));
        }
        if p.r() == 0.0 {
            return Err(NcgError::ZeroRadius);
        }
        Ok(p)
    }

    pub fn from_spherical(t: f64, r: f64, theta: f64, phi: f64) -> Result<Self> {
        if r <= 0.0 {
            return Err(NcgError::ZeroRadius);
        }
        Self::new(
            t,
            r * theta.sin() * phi.cos(),
            r * theta.sin() * phi.sin(),
            r * theta.cos(),
        )
    }

    pub fn r(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// `(t, r, ϑ, ϕ)`.
    pub fn spherical(&self) -> [f64; 4] {
        let r = self.r();
        [
            self.t,
            r,
            (self.z / r).clamp(-1.0, 1.0).acos(),
            self.y.atan2(self.x),
        ]
    }

    pub fn cartesian(&self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `φ^a_b = Re φ P^a_b + Im φ ε_{bad} n̂^d + η n̂^a n̂_b`, indexed `[a][b]`,
/// with `P = 𝟙 − n̂n̂ᵀ`.
pub fn radial_phi_components(v: &FieldValues, n: &[f64; 3]) -> [[f64; 3]; 3] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let p = (if a == b { 1.0 } else { 0.0 }) - n[a] * n[b];
            let eps: f64 = (0..3).map(|d| levi_civita(b, a, d) * n[d]).sum();
            v.phi.re * p + v.phi.im * eps + v.eta * n[a] * n[b]
        })
    })
}

/// Radial-gauge local form at a Cartesian point:
/// `A_t = a_t T_r`,
/// `A_i = Re(ψ−iφ)/r P^a_i T_a + Im(ψ−iφ)/r ε_{iac} n̂^c T_a + a_r n̂_i T_r`,
/// `alg(T_b) = −φ^a_b T_a`.
pub fn radial_gauge_form_at(v: &FieldValues, p: &SamplePoint) -> Result<LocalNCOneForm> {
    let r = p.r();
    if r == 0.0 {
        return Err(NcgError::ZeroRadius);
    }
    let x = p.spatial();
    let n = [x[0] / r, x[1] / r, x[2] / r];
    let w = v.psi - C64::new(0.0, 1.0) * v.phi;
    let tr = su2_combine_re(n);
    let mut spacetime: [AlgebraElement; 4] = std::array::from_fn(|_| AlgebraElement::zero(2));
    spacetime[0] = tr.scale_re(v.a_t);
    for i in 0..3 {
        let c: [f64; 3] = std::array::from_fn(|a| {
            let proj = (if a == i { 1.0 } else { 0.0 }) - n[a] * n[i];
            let eps: f64 = (0..3).map(|c| levi_civita(i, a, c) * n[c]).sum();
            w.re / r * proj + w.im / r * eps
        });
        spacetime[i + 1] = su2_combine_re(c) + tr.scale_re(v.a_r * n[i]);
    }
    let phi = radial_phi_components(v, &n);
    let algebraic = std::array::from_fn(|b| su2_combine_re([-phi[0][b], -phi[1][b], -phi[2][b]]));
    Ok(LocalNCOneForm {
        chart: Chart::Cartesian,
        coords: p.cartesian(),
        spacetime,
        algebraic,
    })
}

pub fn radial_gauge_form(fields: &AnsatzFields, p: &SamplePoint) -> Result<LocalNCOneForm> {
    radial_gauge_form_at(&fields.at(p.t, p.r())?, p)
}

/// Singular-gauge local form in the spherical chart `(t, r, ϑ, ϕ)`.
pub fn singular_gauge_form_at(
    v: &FieldValues,
    t: f64,
    r: f64,
    theta: f64,
    phi: f64,
) -> Result<LocalNCOneForm> {
    check_chart(theta)?;
    if r <= 0.0 {
        return Err(NcgError::ZeroRadius);
    }
    let [t1, t2, t3] = su2_generators();
    let (l1, l2) = (v.psi.re, v.psi.im);
    let (p1, p2) = (v.phi.re, v.phi.im);
    let s = theta.sin();
    let spacetime = [
        t3.scale_re(v.a_t),
        t3.scale_re(v.a_r),
        t1.scale_re(l1) + t2.scale_re(l2),
        (t2.scale_re(l1) - t1.scale_re(l2)).scale_re(s) + t3.scale_re(v.eta * theta.cos()),
    ];
    let algebraic = [
        -(t1.scale_re(p1) + t2.scale_re(p2)),
        -(t2.scale_re(p1) - t1.scale_re(p2)),
        -t3.scale_re(v.eta),
    ];
    Ok(LocalNCOneForm {
        chart: Chart::Spherical,
        coords: [t, r, theta, phi],
        spacetime,
        algebraic,
    })
}

pub fn singular_gauge_form(
    fields: &AnsatzFields,
    t: f64,
    r: f64,
    theta: f64,
    phi: f64,
) -> Result<LocalNCOneForm> {
    if r <= 0.0 {
        return Err(NcgError::ZeroRadius);
    }
    singular_gauge_form_at(&fields.at(t, r)?, t, r, theta, phi)
}

/// Orthogonality and orientation defect of `R`; errors when it is not a
/// proper rotation.
pub fn check_rotation(rot: &Matrix3<f64>) -> Result<()> {
    let defect = (rot.transpose() * rot - Matrix3::identity()).abs().max();
    let det_defect = (rot.determinant() - 1.0).abs();
    let worst = defect.max(det_defect);
    if !worst.is_finite() || worst > 1e-10 {
        return Err(NcgError::NotRotation { defect: worst });
    }
    Ok(())
}

/// `SU(2)` element `u` with `u T_b u⁻¹ = Σ_a R_ab T_a`, from the axis-angle
/// form of `R`.
pub fn su2_lift(rot: &Matrix3<f64>) -> Result<AlgebraElement> {
    check_rotation(rot)?;
    let r = Rotation3::from_matrix_unchecked(*rot);
    Ok(match r.axis_angle() {
        None => AlgebraElement::identity(2),
        Some((axis, angle)) => su2_combine_re([axis[0], axis[1], axis[2]])
            .scale_re(angle)
            .exp(),
    })
}

/// Mismatch between the radial form at `R p` (with form indices pulled back
/// by `R`) and `Ad_{u(R)}` applied to the radial form at `p`.
pub fn rotation_invariance_defect(
    fields: &AnsatzFields,
    rot: &Matrix3<f64>,
    p: &SamplePoint,
) -> Result<f64> {
    let u = su2_lift(rot)?;
    let v = fields.at(p.t, p.r())?;
    let x = p.spatial();
    let rx: [f64; 3] = std::array::from_fn(|i| (0..3).map(|j| rot[(i, j)] * x[j]).sum());
    let q = SamplePoint::new(p.t, rx[0], rx[1], rx[2])?;
    let at_p = radial_gauge_form_at(&v, p)?;
    let at_q = radial_gauge_form_at(&v, &q)?;

    let mut worst: f64 = (&at_q.spacetime[0] - &conj(&u, &at_p.spacetime[0])).max_abs();
    for j in 0..3 {
        let pulled = (0..3).fold(AlgebraElement::zero(2), |acc, i| {
            acc + at_q.spacetime[i + 1].scale_re(rot[(i, j)])
        });
        worst = worst.max((pulled - conj(&u, &at_p.spacetime[j + 1])).max_abs());
    }
    for (gen, alg) in su2_generators().iter().zip(&at_p.algebraic) {
        let lhs = at_q.algebraic_on(&conj(&u, gen));
        worst = worst.max((lhs - conj(&u, alg)).max_abs());
    }
    Ok(worst)
}

/// Intertwiners `Λ` on `su(2)` and `φ` on the fibre algebra, given by the
/// images of `T1, T2, T3`.
#[derive(Debug, Clone)]
pub struct Intertwiners {
    pub lambda: [AlgebraElement; 3],
    pub phi: [AlgebraElement; 3],
}

impl Intertwiners {
    /// Checks equivariance under the isotropy `U(1)` generated by `T3`
    /// (acting through the identity embedding) and the pin
    /// `Λ(T3) = φ(T3)`.
    pub fn new(lambda: [AlgebraElement; 3], phi: [AlgebraElement; 3]) -> Result<Self> {
        let t3 = su2_generators()[2].clone();
        let rep = LieRep::new(LieBasis::new(vec![t3.clone()])?, vec![t3])?;
        let domain = su2_generators().to_vec();
        let problem = EquivariantProblem {
            rep,
            target: crate::classifier::TargetSpace::Full,
            maps: vec![
                UnknownMap {
                    domain: domain.clone(),
                    action: DomainAction::Source,
                },
                UnknownMap {
                    domain,
                    action: DomainAction::Target,
                },
            ],
            pins: vec![],
        };
        let values = vec![lambda.to_vec(), phi.to_vec()];
        let mut residual = equivariance_residual(&problem, &values)?;
        residual = residual.max((&lambda[2] - &phi[2]).max_abs());
        if residual > INTERTWINER_TOL {
            return Err(NcgError::ConstraintViolation { residual });
        }
        Ok(Self { lambda, phi })
    }

    /// The intertwiners realizing `(ψ, φ, η)`: with `Λ1 = Im ψ`,
    /// `Λ2 = −Re ψ`, `Λ(T1) = Λ1T1 + Λ2T2`, `Λ(T2) = −Λ2T1 + Λ1T2`,
    /// `φ(T1) = φ1T1 + φ2T2`, `φ(T2) = −φ2T1 + φ1T2`,
    /// `Λ(T3) = φ(T3) = ηT3`.
    pub fn spherical(v: &FieldValues) -> Result<Self> {
        let (l1, l2) = (v.psi.im, -v.psi.re);
        let (p1, p2) = (v.phi.re, v.phi.im);
        Self::new(
            [
                su2_combine_re([l1, l2, 0.0]),
                su2_combine_re([-l2, l1, 0.0]),
                su2_combine_re([0.0, 0.0, v.eta]),
            ],
            [
                su2_combine_re([p1, p2, 0.0]),
                su2_combine_re([-p2, p1, 0.0]),
                su2_combine_re([0.0, 0.0, v.eta]),
            ],
        )
    }

    fn apply(map: &[AlgebraElement; 3], x: &AlgebraElement) -> AlgebraElement {
        let c = super::gauge::su2_coords(x);
        let mut m = crate::linalg::CMatrix::zeros(2, 2);
        for (ci, img) in c.iter().zip(map) {
            m += img.matrix() * *ci;
        }
        AlgebraElement::from_matrix_unchecked(m)
    }
}

/// Tangent data at a point of the total space: `ω̃(q̇)`, the Cartan forms
/// `g⁻¹ġ` and `h⁻¹ḣ`, the fibre element `h`, and the generator `ξ` of the
/// inner derivation.
#[derive(Debug, Clone)]
pub struct TangentData {
    pub omega_tilde: AlgebraElement,
    pub g_cartan: AlgebraElement,
    pub h: AlgebraElement,
    pub h_cartan: AlgebraElement,
    pub xi: AlgebraElement,
}

/// `Ad_{h⁻¹}(ω̃(q̇) + Λ(g⁻¹ġ) + φ(Ad_h(h⁻¹ḣ − ξ)))`.
pub fn decomposition_form(maps: &Intertwiners, tangent: &TangentData) -> Result<AlgebraElement> {
    let h = &tangent.h;
    let hinv = h.try_inverse()?;
    let inner = &tangent.h_cartan - &crate::lie::traceless_part(&tangent.xi);
    let moved = h * &inner * &hinv;
    let body = &tangent.omega_tilde
        + &Intertwiners::apply(&maps.lambda, &tangent.g_cartan)
        + Intertwiners::apply(&maps.phi, &moved);
    Ok(&hinv * &body * h)
}

/// Pulls the decomposition back along the section
/// `(t, r, ϑ, ϕ) ↦ ((t, r), e^{ϕT3}e^{ϑT2}, e^{−ϑT2}e^{−ϕT3})`, returning a
/// spherical-chart local form.
pub fn decomposition_along_section(
    v: &FieldValues,
    t: f64,
    r: f64,
    theta: f64,
    phi: f64,
) -> Result<LocalNCOneForm> {
    check_chart(theta)?;
    if r <= 0.0 {
        return Err(NcgError::ZeroRadius);
    }
    let maps = Intertwiners::spherical(v)?;
    let p = [t, r, theta, phi];
    let g = AxisProductGauge::section_rotation();
    let hg = AxisProductGauge::spherical_frame();
    let h = hg.value(&p);
    let ginv = g.value(&p).try_inverse()?;
    let hinv = h.try_inverse()?;
    let t3 = su2_generators()[2].clone();
    let zero = AlgebraElement::zero(2);
    let spacetime = std::array::from_fn(|mu| {
        let omega_tilde = match mu {
            0 => t3.scale_re(v.a_t),
            1 => t3.scale_re(v.a_r),
            _ => zero.clone(),
        };
        let tangent = TangentData {
            omega_tilde,
            g_cartan: &ginv * &g.partial(&p, mu),
            h: h.clone(),
            h_cartan: &hinv * &hg.partial(&p, mu),
            xi: zero.clone(),
        };
        decomposition_form(&maps, &tangent)
    });
    let algebraic = su2_generators().map(|e| {
        decomposition_form(
            &maps,
            &TangentData {
                omega_tilde: zero.clone(),
                g_cartan: zero.clone(),
                h: h.clone(),
                h_cartan: zero.clone(),
                xi: e,
            },
        )
    });
    let [s0, s1, s2, s3] = spacetime;
    let [a0, a1, a2] = algebraic;
    Ok(LocalNCOneForm {
        chart: Chart::Spherical,
        coords: p,
        spacetime: [s0?, s1?, s2?, s3?],
        algebraic: [a0?, a1?, a2?],
    })
}
