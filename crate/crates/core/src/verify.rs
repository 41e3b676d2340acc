//! Seeded randomized identity suites. Each check reports the largest residual
//! seen over its trials together with the tolerance it is judged against.

use nalgebra::{Matrix3, Quaternion, UnitQuaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::forms::{
    canonical_theta, curvature, d_prime, gauge_transform, interior, is_antihermitian_connection,
    lie_derivative, wedge, ConnectionForm, NCForm,
};
use crate::random;
use crate::spherical::expr::{add, mul, sin, Expr, Var};
use crate::spherical::{
    decomposition_along_section, local_gauge_transform, local_transition, passive_gauge_transform,
    radial_gauge_form, radial_gauge_form_at, rotation_invariance_defect, singular_gauge_form,
    symmetric_gauge_transform, AnsatzFields, AxialU1Gauge, AxisProductGauge, FieldValues,
    LocalNCOneForm, ProductGauge, RadialU1Gauge, SamplePoint, TrigExpGauge,
};

/// Tolerance of the randomized identity suites.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Tolerance of identities that hold coefficientwise without iteration.
pub const STRUCTURAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub trials: usize,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_residual.is_finite() && self.max_residual < self.tolerance
    }
}

struct Tracker {
    name: &'static str,
    tolerance: f64,
    trials: usize,
    worst: f64,
}

impl Tracker {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            trials: 0,
            worst: 0.0,
        }
    }

    fn record(&mut self, residual: f64) {
        self.trials += 1;
        // NaN must not be swallowed by `max`.
        if residual.is_nan() || residual > self.worst {
            self.worst = residual;
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name.to_string(),
            trials: self.trials,
            max_residual: self.worst,
            tolerance: self.tolerance,
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `d′² = 0`, graded Leibniz, the four Cartan relations, Maurer-Cartan and
/// `d′γ = [iθ, γ]`, each on `trials` random instances per `n`, cycling the
/// form degree through `0, 1, 2`.
pub fn calculus_suite(seed: u64, trials: usize, ns: &[usize]) -> Result<Vec<CheckResult>> {
    let mut dd = Tracker::new("d_prime_squared", IDENTITY_TOL);
    let mut leibniz = Tracker::new("graded_leibniz", IDENTITY_TOL);
    let mut ii = Tracker::new("cartan_interior_anticommute", IDENTITY_TOL);
    let mut li = Tracker::new("cartan_lie_interior", IDENTITY_TOL);
    let mut ll = Tracker::new("cartan_lie_lie", IDENTITY_TOL);
    let mut ld = Tracker::new("cartan_lie_differential", IDENTITY_TOL);
    let mut mc = Tracker::new("maurer_cartan", STRUCTURAL_TOL);
    let mut dg = Tracker::new("d_prime_scalar_is_theta_bracket", STRUCTURAL_TOL);

    for &n in ns {
        let mut rng = rng_for(seed, n as u64);
        let theta = canonical_theta(n);
        for k in 0..trials {
            let p = k % 3;
            let w = random::form(&mut rng, n, p);
            let x = random::derivation(&mut rng, n);
            let y = random::derivation(&mut rng, n);

            dd.record(d_prime(&d_prime(&w)).max_abs());

            let q = (k / 3) % 3;
            let v = random::form(&mut rng, n, q.min(2 - p.min(2)));
            let lhs = d_prime(&wedge(&w, &v)?);
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = wedge(&d_prime(&w), &v)?
                .try_add(&wedge(&w, &d_prime(&v))?.scale(crate::C64::new(sign, 0.0)))?;
            leibniz.record(lhs.distance(&rhs)?);

            let ixy = interior(&x, &interior(&y, &w)?)?;
            let iyx = interior(&y, &interior(&x, &w)?)?;
            ii.record(ixy.try_add(&iyx)?.max_abs());

            let xy = x.bracket(&y)?;
            let lhs = lie_derivative(&x, &interior(&y, &w)?)?
                .try_sub(&interior(&y, &lie_derivative(&x, &w)?)?)?;
            li.record(lhs.distance(&interior(&xy, &w)?)?);

            let lhs = lie_derivative(&x, &lie_derivative(&y, &w)?)?
                .try_sub(&lie_derivative(&y, &lie_derivative(&x, &w)?)?)?;
            ll.record(lhs.distance(&lie_derivative(&xy, &w)?)?);

            let lhs = lie_derivative(&x, &d_prime(&w))?;
            ld.record(lhs.distance(&d_prime(&lie_derivative(&x, &w)?))?);

            mc.record(d_prime(&theta).distance(&wedge(&theta, &theta)?)?);

            let gamma = NCForm::scalar(&random::element(&mut rng, n));
            let bracket = wedge(&theta, &gamma)?.try_sub(&wedge(&gamma, &theta)?)?;
            dg.record(d_prime(&gamma).distance(&bracket)?);
        }
    }
    Ok(vec![
        dd.finish(),
        leibniz.finish(),
        ii.finish(),
        li.finish(),
        ll.finish(),
        ld.finish(),
        mc.finish(),
        dg.finish(),
    ])
}

/// Curvature covariance, flatness of `−iθ`, composition of gauge
/// transformations and gauge invariance of the antihermiticity defect.
pub fn gauge_suite(seed: u64, trials: usize, ns: &[usize]) -> Result<Vec<CheckResult>> {
    let mut cov = Tracker::new("curvature_covariance", IDENTITY_TOL);
    let mut flat = Tracker::new("ordinary_connection_flat", IDENTITY_TOL);
    let mut comp = Tracker::new("gauge_composition", IDENTITY_TOL);
    let mut herm = Tracker::new("antihermitian_defect_invariance", IDENTITY_TOL);
    for &n in ns {
        let mut rng = rng_for(seed, 100 + n as u64);
        for _ in 0..trials {
            let conn = ConnectionForm::new(random::form(&mut rng, n, 1))?;
            let u = random::unitary(&mut rng, n);
            let v = random::unitary(&mut rng, n);

            let f = curvature(&conn);
            let fu = curvature(&gauge_transform(&conn, &u)?);
            let expect = NCForm::from_fn(n, 2, |idx| {
                u.adjoint().matrix() * f.component(idx).matrix() * u.matrix()
            });
            cov.record(fu.distance(&expect)?);

            flat.record(curvature(&ConnectionForm::ordinary(n)).max_abs());

            let twice = gauge_transform(&gauge_transform(&conn, &u)?, &v)?;
            let once = gauge_transform(&conn, &(&u * &v))?;
            comp.record(twice.omega().distance(once.omega())?);

            let anti = ConnectionForm::new(NCForm::from_fn(n, 1, |_| {
                random::su_element(&mut rng, n).into_matrix()
            }))?;
            herm.record(is_antihermitian_connection(&gauge_transform(&anti, &u)?, IDENTITY_TOL).1);
            // The hermitian part transforms by conjugation, so its
            // Frobenius norm is preserved componentwise.
            let perturbed = ConnectionForm::new(
                anti.omega()
                    .try_add(&random::form(&mut rng, n, 1).scale(crate::C64::new(1e-3, 0.0)))?,
            )?;
            let hermitian_norms = |c: &ConnectionForm| -> Vec<f64> {
                c.omega()
                    .coeffs()
                    .iter()
                    .map(|m| (m.adjoint() + m).norm())
                    .collect()
            };
            let before = hermitian_norms(&perturbed);
            let after = hermitian_norms(&gauge_transform(&perturbed, &u)?);
            herm.record(
                before
                    .iter()
                    .zip(&after)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max),
            );
        }
    }
    Ok(vec![
        cov.finish(),
        flat.finish(),
        comp.finish(),
        herm.finish(),
    ])
}

fn random_direction<R: Rng + ?Sized>(rng: &mut R, max_cos: f64) -> (f64, f64) {
    let c: f64 = rng.gen_range(-max_cos..=max_cos);
    (
        c.acos(),
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

/// Random sample point with `r ∈ [0.3, 3]`, `t ∈ [−2, 2]`, polar angle kept
/// away from the chart poles. Returns `(t, r, ϑ, ϕ)` and the point.
pub fn random_sample<R: Rng + ?Sized>(rng: &mut R) -> Result<([f64; 4], SamplePoint)> {
    let t = rng.gen_range(-2.0..2.0);
    let r = rng.gen_range(0.3..3.0);
    let (th, ph) = random_direction(rng, 0.98);
    Ok(([t, r, th, ph], SamplePoint::from_spherical(t, r, th, ph)?))
}

pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let norm2: f64 = q.iter().map(|x| x * x).sum();
        if norm2 > 1e-4 && norm2 <= 1.0 {
            let uq = UnitQuaternion::from_quaternion(Quaternion::new(q[0], q[1], q[2], q[3]));
            return uq.to_rotation_matrix().into_inner();
        }
    }
}

/// `a sin(b t + c r + d)` with random coefficients.
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Expr {
    let mut k = || Expr::Const(rng.gen_range(-1.5..1.5));
    let arg = add(
        add(mul(k(), Expr::Var(Var::T)), mul(k(), Expr::Var(Var::R))),
        k(),
    );
    mul(k(), sin(arg))
}

/// Smooth sample fields exercising every component.
pub fn sample_fields() -> AnsatzFields {
    AnsatzFields::parse(
        "0.3*sin(t) + 0.1*r",
        "cos(t*r) - 0.5",
        ("0.8*exp(-r^2/4) + 0.2*t", "0.4*sin(r - t)"),
        ("1 - 0.3*cos(r)", "0.25*t*exp(-r)"),
        "0.7 + 0.2*sin(2*r)",
    )
    .expect("sample fields parse")
}

fn field_distance(a: &FieldValues, b: &FieldValues) -> f64 {
    [
        (a.a_t - b.a_t).abs(),
        (a.a_r - b.a_r).abs(),
        (a.psi - b.psi).norm(),
        (a.phi - b.phi).norm(),
        (a.eta - b.eta).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn cartesian(form: &LocalNCOneForm) -> Result<LocalNCOneForm> {
    form.to_cartesian()
}

/// Checks of the spherically symmetric ansatz at `points` random points:
/// ordinary limit, rotational covariance, passive and symmetric gauge laws
/// in both gauges, singular-to-radial transport and the end-to-end
/// decomposition.
pub fn spherical_suite(
    fields: &AnsatzFields,
    seed: u64,
    points: usize,
) -> Result<Vec<CheckResult>> {
    let mut rng = rng_for(seed, 200);
    let mut ordinary = Tracker::new("ordinary_limit", STRUCTURAL_TOL);
    let mut rotation = Tracker::new("rotation_invariance", 1e-8);
    let mut passive = Tracker::new("passive_gauge_law", IDENTITY_TOL);
    let mut closure = Tracker::new("passive_group_action", IDENTITY_TOL);
    let mut symmetric = Tracker::new("symmetric_gauge_law", IDENTITY_TOL);
    let mut transport = Tracker::new("singular_to_radial_transport", 1e-9);
    let mut decomposition = Tracker::new("decomposition_matches_radial", 1e-9);
    let ordinary_fields = AnsatzFields::constant(FieldValues::ordinary_limit());
    let gens = crate::lie::su2_generators();

    for _ in 0..points {
        let ([t, r, th, ph], p) = random_sample(&mut rng)?;

        let lim = radial_gauge_form(&ordinary_fields, &p)?;
        ordinary.record(
            lim.algebraic
                .iter()
                .zip(gens.iter())
                .map(|(a, e)| (a + e).max_abs())
                .fold(0.0, f64::max),
        );

        let rot = random_rotation(&mut rng);
        rotation.record(rotation_invariance_defect(fields, &rot, &p)?);

        let chi0 = random_phase(&mut rng);
        let chi1 = random_phase(&mut rng);
        let chi = add(chi0.clone(), chi1.clone());
        let moved = passive_gauge_transform(fields, &chi0, &chi1);
        let minus = crate::spherical::expr::neg(chi.clone());
        let radial = radial_gauge_form(fields, &p)?;
        let lhs = local_transition(&radial, &RadialU1Gauge::new(minus.clone()))?;
        passive.record(lhs.distance(&radial_gauge_form(&moved, &p)?)?);
        let sing = singular_gauge_form(fields, t, r, th, ph)?;
        let lhs = local_transition(&sing, &AxialU1Gauge::new(minus))?;
        passive.record(lhs.distance(&singular_gauge_form(&moved, t, r, th, ph)?)?);

        let zero = Expr::zero();
        let stepwise =
            passive_gauge_transform(&passive_gauge_transform(fields, &chi0, &zero), &chi1, &zero);
        closure.record(field_distance(&stepwise.at(t, r)?, &moved.at(t, r)?));

        let sym = symmetric_gauge_transform(fields, &chi);
        let lhs = local_gauge_transform(&radial, &RadialU1Gauge::new(chi.clone()))?;
        symmetric.record(lhs.distance(&radial_gauge_form(&sym, &p)?)?);
        let lhs = local_gauge_transform(&sing, &AxialU1Gauge::new(chi))?;
        symmetric.record(lhs.distance(&singular_gauge_form(&sym, t, r, th, ph)?)?);

        let moved = cartesian(&local_transition(
            &sing,
            &AxisProductGauge::spherical_frame(),
        )?)?;
        transport.record(moved.distance(&radial)?);

        let v = fields.at(t, r)?;
        let dec = cartesian(&decomposition_along_section(&v, t, r, th, ph)?)?;
        decomposition.record(dec.distance(&radial_gauge_form_at(&v, &p)?)?);
    }
    Ok(vec![
        ordinary.finish(),
        rotation.finish(),
        passive.finish(),
        closure.finish(),
        symmetric.finish(),
        transport.finish(),
        decomposition.finish(),
    ])
}

/// Transitioning by `g` then `g′` against transitioning by `g g′`, for random
/// smooth gauge functions and random local forms.
pub fn cocycle_suite(seed: u64, trials: usize) -> Result<CheckResult> {
    let mut rng = rng_for(seed, 300);
    let mut tr = Tracker::new("transition_cocycle", IDENTITY_TOL);
    for _ in 0..trials {
        let coords: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let mut el = || random::su_element(&mut rng, 2);
        let form = LocalNCOneForm {
            chart: crate::spherical::Chart::Cartesian,
            coords,
            spacetime: std::array::from_fn(|_| el()),
            algebraic: std::array::from_fn(|_| el()),
        };
        let g1 = TrigExpGauge::random(&mut rng);
        let g2 = TrigExpGauge::random(&mut rng);
        let stepwise = local_transition(&local_transition(&form, &g1)?, &g2)?;
        let direct = local_transition(&form, &ProductGauge(&g1, &g2))?;
        tr.record(stepwise.distance(&direct)?);
    }
    Ok(tr.finish())
}
