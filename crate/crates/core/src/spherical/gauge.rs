//! Local noncommutative 1-forms over a 4-dimensional chart with `M_2` fibre,
//! gauge functions, and the two ways of acting on local forms: change of
//! local section (transition) and gauge transformation.
//!
//! A local form is stored as `A + alg`, where `A = A_μ dx^μ` is the
//! spacetime part and `alg` the algebraic part, recorded by its values
//! `alg(ad_{T_b})`. In component language `alg(ad_{T_b}) = −φ^a_b T_a`.

use rand::Rng;

use crate::error::{NcgError, Result};
use crate::lie::{su2_generators, AlgebraElement};
use crate::linalg::{self, C64};

use super::expr::{Expr, Var};

/// Step of the central differences used when no analytic derivative exists.
pub const FD_STEP: f64 = 1e-5;
/// Distance from the poles below which the spherical chart is rejected.
pub const CHART_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// `(t, x, y, z)`.
    Cartesian,
    /// `(t, r, ϑ, ϕ)`.
    Spherical,
}

/// `X^a = −2 Tr(T_a X)`, exact on the traceless part.
pub fn su2_coords(x: &AlgebraElement) -> [C64; 3] {
    su2_generators().map(|t| (t.matrix() * x.matrix()).trace() * C64::new(-2.0, 0.0))
}

/// `Σ_a c_a T_a`.
pub fn su2_combine(c: &[C64; 3]) -> AlgebraElement {
    let [t1, t2, t3] = su2_generators();
    t1.scale(c[0]) + t2.scale(c[1]) + t3.scale(c[2])
}

pub fn su2_combine_re(c: [f64; 3]) -> AlgebraElement {
    su2_combine(&c.map(|x| C64::new(x, 0.0)))
}

/// A local noncommutative 1-form on spacetime × `M_2`, stored as
/// `A_μ dx^μ − φ∘iθ`: the spacetime components `A_μ` and the values on the
/// inner derivations `ad_{T_b}`, which equal `−φ^a_b T_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalNCOneForm {
    pub chart: Chart,
    pub coords: [f64; 4],
    pub spacetime: [AlgebraElement; 4],
    /// `alg(ad_{T_b})` for `b = 1, 2, 3`.
    pub algebraic: [AlgebraElement; 3],
}

impl LocalNCOneForm {
    pub fn zero(chart: Chart, coords: [f64; 4]) -> Self {
        Self {
            chart,
            coords,
            spacetime: std::array::from_fn(|_| AlgebraElement::zero(2)),
            algebraic: std::array::from_fn(|_| AlgebraElement::zero(2)),
        }
    }

    /// `alg(ad_ξ)` by linearity; the trace of `ξ` does not contribute.
    pub fn algebraic_on(&self, xi: &AlgebraElement) -> AlgebraElement {
        let c = su2_coords(xi);
        let mut m = linalg::CMatrix::zeros(2, 2);
        for (ci, v) in c.iter().zip(&self.algebraic) {
            m += v.matrix() * *ci;
        }
        AlgebraElement::from_matrix_unchecked(m)
    }

    /// `A_μ^a`, indexed `[μ][a]`.
    pub fn spacetime_components(&self) -> [[C64; 3]; 4] {
        std::array::from_fn(|mu| su2_coords(&self.spacetime[mu]))
    }

    /// `φ^a_b`, indexed `[a][b]`.
    pub fn phi_components(&self) -> [[C64; 3]; 3] {
        let cols: [[C64; 3]; 3] = std::array::from_fn(|b| su2_coords(&self.algebraic[b]));
        std::array::from_fn(|a| std::array::from_fn(|b| -cols[b][a]))
    }

    /// Largest entry difference to `other`, which must use the same chart.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.chart != other.chart {
            return Err(NcgError::InvalidInput(
                "comparing local forms in different charts".into(),
            ));
        }
        Ok(self
            .spacetime
            .iter()
            .zip(&other.spacetime)
            .chain(self.algebraic.iter().zip(&other.algebraic))
            .map(|(a, b)| (a - b).max_abs())
            .fold(0.0, f64::max))
    }

    /// Re-expresses a spherical-chart form in Cartesian components at the
    /// same point.
    pub fn to_cartesian(&self) -> Result<Self> {
        match self.chart {
            Chart::Cartesian => Ok(self.clone()),
            Chart::Spherical => {
                let [t, r, th, ph] = self.coords;
                check_chart(th)?;
                if r <= 0.0 {
                    return Err(NcgError::ZeroRadius);
                }
                let (x, y, z) = (
                    r * th.sin() * ph.cos(),
                    r * th.sin() * ph.sin(),
                    r * th.cos(),
                );
                let rho = r * th.sin();
                let jac = [
                    [x / r, y / r, z / r],
                    [x * z / (r * r * rho), y * z / (r * r * rho), -rho / (r * r)],
                    [-y / (rho * rho), x / (rho * rho), 0.0],
                ];
                let spacetime = std::array::from_fn(|mu| {
                    if mu == 0 {
                        self.spacetime[0].clone()
                    } else {
                        let i = mu - 1;
                        (0..3).fold(AlgebraElement::zero(2), |acc, q| {
                            acc + self.spacetime[q + 1].scale_re(jac[q][i])
                        })
                    }
                });
                Ok(Self {
                    chart: Chart::Cartesian,
                    coords: [t, x, y, z],
                    spacetime,
                    algebraic: self.algebraic.clone(),
                })
            }
        }
    }
}

pub(crate) fn check_chart(theta: f64) -> Result<()> {
    if theta <= CHART_GUARD || theta >= std::f64::consts::PI - CHART_GUARD {
        return Err(NcgError::ChartSingularity { theta });
    }
    Ok(())
}

/// A smooth map from chart coordinates to invertible `2 × 2` matrices.
pub trait GaugeFunction: Send + Sync {
    fn value(&self, p: &[f64; 4]) -> AlgebraElement;

    /// `∂_μ g`; defaults to central differences with one Richardson step.
    fn partial(&self, p: &[f64; 4], mu: usize) -> AlgebraElement {
        richardson_partial(|q| self.value(q), p, mu, FD_STEP)
    }
}

pub fn richardson_partial(
    f: impl Fn(&[f64; 4]) -> AlgebraElement,
    p: &[f64; 4],
    mu: usize,
    h: f64,
) -> AlgebraElement {
    let central = |step: f64| {
        let mut plus = *p;
        let mut minus = *p;
        plus[mu] += step;
        minus[mu] -= step;
        (f(&plus) - f(&minus)).scale_re(0.5 / step)
    };
    let fine = central(h);
    let coarse = central(2.0 * h);
    (fine.scale_re(4.0) - coarse).scale_re(1.0 / 3.0)
}

/// `g⁻¹ ∂_μ g`.
pub fn cartan_form(g: &dyn GaugeFunction, p: &[f64; 4], mu: usize) -> Result<AlgebraElement> {
    let inv = g.value(p).try_inverse()?;
    Ok(&inv * &g.partial(p, mu))
}

/// Change of local section by `g`:
/// `alg′(ad_ξ) = g⁻¹ alg(ad_{g ξ g⁻¹}) g` and
/// `A′_μ = g⁻¹ A_μ g − alg′(ad_{g⁻¹ ∂_μ g})`.
pub fn local_transition(form: &LocalNCOneForm, g: &dyn GaugeFunction) -> Result<LocalNCOneForm> {
    let p = form.coords;
    let gv = g.value(&p);
    let ginv = gv.try_inverse()?;
    let algebraic: [AlgebraElement; 3] = std::array::from_fn(|b| {
        let moved = &gv * su2_generators()[b].clone() * &ginv;
        &ginv * form.algebraic_on(&moved) * &gv
    });
    let mut out = LocalNCOneForm {
        chart: form.chart,
        coords: p,
        spacetime: std::array::from_fn(|_| AlgebraElement::zero(2)),
        algebraic,
    };
    for mu in 0..4 {
        let zeta = &ginv * &g.partial(&p, mu);
        out.spacetime[mu] = &ginv * &form.spacetime[mu] * &gv - out.algebraic_on(&zeta);
    }
    Ok(out)
}

/// Gauge transformation by a unitary `u`, the local form of
/// `ω ↦ u*ωu + u* d̂u`: `A′_μ = u⁻¹A_μ u + u⁻¹∂_μ u` and
/// `alg′(ad_ξ) = u⁻¹(alg(ad_ξ) + ξ)u − ξ` for traceless `ξ`.
pub fn local_gauge_transform(
    form: &LocalNCOneForm,
    u: &dyn GaugeFunction,
) -> Result<LocalNCOneForm> {
    let p = form.coords;
    let uv = u.value(&p);
    let defect = linalg::unitarity_defect(uv.matrix());
    if defect > crate::forms::UNITARITY_TOL {
        return Err(NcgError::NotUnitary { defect });
    }
    let uinv = uv.adjoint();
    let gens = su2_generators();
    let algebraic =
        std::array::from_fn(|b| &uinv * (&form.algebraic[b] + &gens[b]) * &uv - &gens[b]);
    let spacetime =
        std::array::from_fn(|mu| &uinv * &form.spacetime[mu] * &uv + &uinv * &u.partial(&p, mu));
    Ok(LocalNCOneForm {
        chart: form.chart,
        coords: p,
        spacetime,
        algebraic,
    })
}

/// A constant gauge function.
#[derive(Debug, Clone)]
pub struct ConstantGauge(pub AlgebraElement);

impl GaugeFunction for ConstantGauge {
    fn value(&self, _p: &[f64; 4]) -> AlgebraElement {
        self.0.clone()
    }

    fn partial(&self, _p: &[f64; 4], _mu: usize) -> AlgebraElement {
        AlgebraElement::zero(self.0.n())
    }
}

/// `exp X(p)` with `X(p) = Σ_a Σ_μ A_aμ sin(K_aμ p_μ + P_aμ) T_a`.
#[derive(Debug, Clone)]
pub struct TrigExpGauge {
    pub amplitude: [[f64; 4]; 3],
    pub frequency: [[f64; 4]; 3],
    pub phase: [[f64; 4]; 3],
}

impl TrigExpGauge {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut draw = |lo: f64, hi: f64| -> [[f64; 4]; 3] {
            std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(lo..hi)))
        };
        Self {
            amplitude: draw(-1.0, 1.0),
            frequency: draw(-2.0, 2.0),
            phase: draw(-3.0, 3.0),
        }
    }

    fn exponent(&self, p: &[f64; 4]) -> AlgebraElement {
        let c: [f64; 3] = std::array::from_fn(|a| {
            (0..4)
                .map(|mu| {
                    self.amplitude[a][mu]
                        * (self.frequency[a][mu] * p[mu] + self.phase[a][mu]).sin()
                })
                .sum()
        });
        su2_combine_re(c)
    }

    fn exponent_partial(&self, p: &[f64; 4], mu: usize) -> AlgebraElement {
        let c: [f64; 3] = std::array::from_fn(|a| {
            self.amplitude[a][mu]
                * self.frequency[a][mu]
                * (self.frequency[a][mu] * p[mu] + self.phase[a][mu]).cos()
        });
        su2_combine_re(c)
    }
}

impl GaugeFunction for TrigExpGauge {
    fn value(&self, p: &[f64; 4]) -> AlgebraElement {
        self.exponent(p).exp()
    }

    fn partial(&self, p: &[f64; 4], mu: usize) -> AlgebraElement {
        AlgebraElement::from_matrix_unchecked(linalg::expm_derivative(
            self.exponent(p).matrix(),
            self.exponent_partial(p, mu).matrix(),
        ))
    }
}

/// Pointwise product `g₁ g₂`.
pub struct ProductGauge<'a>(pub &'a dyn GaugeFunction, pub &'a dyn GaugeFunction);

impl GaugeFunction for ProductGauge<'_> {
    fn value(&self, p: &[f64; 4]) -> AlgebraElement {
        self.0.value(p) * self.1.value(p)
    }

    fn partial(&self, p: &[f64; 4], mu: usize) -> AlgebraElement {
        self.0.partial(p, mu) * self.1.value(p) + self.0.value(p) * self.1.partial(p, mu)
    }
}

/// Ordered product `Π_k exp(s_k p_{c_k} T_{a_k})` of one-parameter
/// subgroups driven by single coordinates.
#[derive(Debug, Clone)]
pub struct AxisProductGauge {
    /// `(coordinate index, generator index, sign)`.
    pub factors: Vec<(usize, usize, f64)>,
}

impl AxisProductGauge {
    /// `e^{−ϑT2} e^{−ϕT3}` on the spherical chart, taking the singular gauge
    /// to the radial one.
    pub fn spherical_frame() -> Self {
        Self {
            factors: vec![(2, 1, -1.0), (3, 2, -1.0)],
        }
    }

    /// `e^{ϕT3} e^{ϑT2}`, the group part of the spherical section.
    pub fn section_rotation() -> Self {
        Self {
            factors: vec![(3, 2, 1.0), (2, 1, 1.0)],
        }
    }

    fn factor(&self, k: usize, p: &[f64; 4]) -> AlgebraElement {
        let (c, a, s) = self.factors[k];
        su2_generators()[a].scale_re(s * p[c]).exp()
    }
}

impl GaugeFunction for AxisProductGauge {
    fn value(&self, p: &[f64; 4]) -> AlgebraElement {
        (0..self.factors.len()).fold(AlgebraElement::identity(2), |acc, k| {
            acc * self.factor(k, p)
        })
    }

    fn partial(&self, p: &[f64; 4], mu: usize) -> AlgebraElement {
        let gens = su2_generators();
        let mut total = AlgebraElement::zero(2);
        for (k, &(c, a, s)) in self.factors.iter().enumerate() {
            if c != mu {
                continue;
            }
            let mut term = AlgebraElement::identity(2);
            for j in 0..self.factors.len() {
                if j == k {
                    term = term * gens[a].scale_re(s);
                }
                term = term * self.factor(j, p);
            }
            total = total + term;
        }
        total
    }
}

/// `e^{χ(t, r) T3}` on the spherical chart.
#[derive(Debug, Clone)]
pub struct AxialU1Gauge {
    chi: Expr,
    chi_t: Expr,
    chi_r: Expr,
}

impl AxialU1Gauge {
    pub fn new(chi: Expr) -> Self {
        Self {
            chi_t: chi.derivative(Var::T),
            chi_r: chi.derivative(Var::R),
            chi,
        }
    }
}

impl GaugeFunction for AxialU1Gauge {
    fn value(&self, p: &[f64; 4]) -> AlgebraElement {
        su2_generators()[2]
            .scale_re(self.chi.eval(p[0], p[1]))
            .exp()
    }

    fn partial(&self, p: &[f64; 4], mu: usize) -> AlgebraElement {
        let d = match mu {
            0 => self.chi_t.eval(p[0], p[1]),
            1 => self.chi_r.eval(p[0], p[1]),
            _ => return AlgebraElement::zero(2),
        };
        su2_generators()[2].scale_re(d) * self.value(p)
    }
}

/// `T_r = n̂^a T_a` at a Cartesian point.
pub fn radial_generator(x: &[f64; 3]) -> AlgebraElement {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    su2_combine_re([x[0] / r, x[1] / r, x[2] / r])
}

/// `e^{χ(t, r) T_r} = cos(χ/2) 𝟙 + 2 sin(χ/2) T_r` on the Cartesian chart.
#[derive(Debug, Clone)]
pub struct RadialU1Gauge {
    chi: Expr,
    chi_t: Expr,
    chi_r: Expr,
}

impl RadialU1Gauge {
    pub fn new(chi: Expr) -> Self {
        Self {
            chi_t: chi.derivative(Var::T),
            chi_r: chi.derivative(Var::R),
            chi,
        }
    }
}

impl GaugeFunction for RadialU1Gauge {
    fn value(&self, p: &[f64; 4]) -> AlgebraElement {
        let x = [p[1], p[2], p[3]];
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let chi = self.chi.eval(p[0], r);
        AlgebraElement::identity(2).scale_re((chi / 2.0).cos())
            + radial_generator(&x).scale_re(2.0 * (chi / 2.0).sin())
    }

    fn partial(&self, p: &[f64; 4], mu: usize) -> AlgebraElement {
        let x = [p[1], p[2], p[3]];
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let n = [x[0] / r, x[1] / r, x[2] / r];
        let chi = self.chi.eval(p[0], r);
        let tr = radial_generator(&x);
        let (dchi, dtr) = if mu == 0 {
            (self.chi_t.eval(p[0], r), AlgebraElement::zero(2))
        } else {
            let i = mu - 1;
            let dn: [f64; 3] =
                std::array::from_fn(|a| ((if a == i { 1.0 } else { 0.0 }) - n[i] * n[a]) / r);
            (self.chi_r.eval(p[0], r) * n[i], su2_combine_re(dn))
        };
        let (s, c) = (chi / 2.0).sin_cos();
        (AlgebraElement::identity(2).scale_re(-0.5 * s) + tr.scale_re(c)).scale_re(dchi)
            + dtr.scale_re(2.0 * s)
    }
}

/// A gauge function given by a closure, differentiated numerically.
pub struct FnGauge<F>(pub F);

impl<F> GaugeFunction for FnGauge<F>
where
    F: Fn(&[f64; 4]) -> AlgebraElement + Send + Sync,
{
    fn value(&self, p: &[f64; 4]) -> AlgebraElement {
        (self.0)(p)
    }
}

/// `u X u⁻¹` for unitary `u`.
pub(crate) fn conj(u: &AlgebraElement, x: &AlgebraElement) -> AlgebraElement {
    u * x * &u.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_form(rng: &mut ChaCha8Rng, chart: Chart, coords: [f64; 4]) -> LocalNCOneForm {
        let mut el = || crate::random::su_element(rng, 2);
        LocalNCOneForm {
            chart,
            coords,
            spacetime: std::array::from_fn(|_| el()),
            algebraic: std::array::from_fn(|_| el()),
        }
    }

    #[test]
    fn analytic_partials_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = [0.3, 1.2, 0.8, -0.4];
        let trig = TrigExpGauge::random(&mut rng);
        let frame = AxisProductGauge::spherical_frame();
        let axial = AxialU1Gauge::new(Expr::parse("t*r + sin(r)").unwrap());
        let radial = RadialU1Gauge::new(Expr::parse("t - r^2").unwrap());
        let gauges: [&dyn GaugeFunction; 4] = [&trig, &frame, &axial, &radial];
        for g in gauges {
            for mu in 0..4 {
                let fd = richardson_partial(|q| g.value(q), &p, mu, FD_STEP);
                assert!(g.partial(&p, mu).approx_eq(&fd, 1e-9), "mu = {mu}");
            }
        }
    }

    #[test]
    fn constant_transition_conjugates() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let form = random_form(&mut rng, Chart::Cartesian, [0.0, 1.0, 2.0, 3.0]);
        let g = crate::random::su_element(&mut rng, 2).exp();
        let out = local_transition(&form, &ConstantGauge(g.clone())).unwrap();
        let gi = g.adjoint();
        for mu in 0..4 {
            assert!(out.spacetime[mu].approx_eq(&(&gi * &form.spacetime[mu] * &g), 1e-13));
        }
    }

    #[test]
    fn identity_phi_gives_classical_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut form = random_form(&mut rng, Chart::Cartesian, [0.1, 0.5, -0.2, 0.9]);
        // alg = −iθ, i.e. φ = id.
        form.algebraic = su2_generators().map(|t| -t);
        let g = TrigExpGauge::random(&mut rng);
        let out = local_transition(&form, &g).unwrap();
        let gv = g.value(&form.coords);
        let gi = gv.adjoint();
        for mu in 0..4 {
            let expect = &gi * &form.spacetime[mu] * &gv + &gi * &g.partial(&form.coords, mu);
            assert!(out.spacetime[mu].approx_eq(&expect, 1e-12));
        }
        for b in 0..3 {
            assert!(out.algebraic[b].approx_eq(&form.algebraic[b], 1e-13));
        }
    }

    #[test]
    fn transition_cocycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let form = random_form(&mut rng, Chart::Cartesian, [0.2, -0.7, 1.1, 0.4]);
            let g1 = TrigExpGauge::random(&mut rng);
            let g2 = TrigExpGauge::random(&mut rng);
            let stepwise = local_transition(&local_transition(&form, &g1).unwrap(), &g2).unwrap();
            let direct = local_transition(&form, &ProductGauge(&g1, &g2)).unwrap();
            assert!(stepwise.distance(&direct).unwrap() < 1e-10);
        }
    }

    #[test]
    fn gauge_transform_rejects_non_unitary() {
        let form = LocalNCOneForm::zero(Chart::Cartesian, [0.0, 1.0, 0.0, 0.0]);
        let g = ConstantGauge(AlgebraElement::identity(2).scale_re(2.0));
        assert!(matches!(
            local_gauge_transform(&form, &g),
            Err(NcgError::NotUnitary { .. })
        ));
    }

    #[test]
    fn spherical_chart_guard() {
        let form = LocalNCOneForm::zero(Chart::Spherical, [0.0, 1.0, 0.0, 0.3]);
        assert!(matches!(
            form.to_cartesian(),
            Err(NcgError::ChartSingularity { .. })
        ));
    }
}
