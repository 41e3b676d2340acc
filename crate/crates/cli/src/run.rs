use std::path::Path;

use ncg_core::classifier::{
    classify, partition_rep, LieRep, TargetSpace, CASIMIR_TOL, HOMOMORPHISM_TOL,
};
use ncg_core::lie::AlgebraElement;
use ncg_core::linalg::DEFAULT_RANK_TOL;
use ncg_core::serial::{matrix_from_record, matrix_to_record};
use ncg_core::spherical::{
    local_transition, radial_gauge_form, singular_gauge_form, AnsatzFields, AxisProductGauge,
    LocalNCOneForm, SamplePoint,
};
use ncg_core::verify::{calculus_suite, cocycle_suite, gauge_suite, spherical_suite, CheckResult};
use ncg_core::{NcgError, C64};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::scenario::{FieldSpec, Mode, Overrides, RepSpec, Scenario};

pub const SCHEMA: &str = "ncg-report/1";
pub const TRANSPORT_TOL: f64 = 1e-9;

/// One complex component of a local form at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub component: String,
    pub value: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub summary: Value,
    /// Empty unless the mode sweeps a grid.
    pub rows: Vec<SweepRow>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary["all_passed"].as_bool().unwrap_or(false)
    }
}

struct Outcome {
    results: Value,
    rows: Vec<SweepRow>,
    passed: bool,
}

/// Rayon pool sized by `NCG_THREADS` (unset or 0 means one thread per core).
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let threads = match std::env::var("NCG_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            CliError::Schema(format!(
                "NCG_THREADS must be a non-negative integer, got {v:?}"
            ))
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))
}

pub fn run_scenario(path: &Path, overrides: &Overrides) -> Result<Report, CliError> {
    let mut scenario = Scenario::load(path)?;
    scenario.apply(overrides);
    run(&scenario)
}

pub fn run(s: &Scenario) -> Result<Report, CliError> {
    s.validate()?;
    let pool = thread_pool()?;
    let outcome = pool.install(|| match s.mode {
        Mode::Classify => run_classify(s),
        Mode::VerifyCalculus => run_calculus(s),
        Mode::Spherical => run_spherical(s),
        Mode::Transition => run_transition(s),
    })?;
    let scenario = serde_json::to_value(s).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(Report {
        summary: json!({
            "schema": SCHEMA,
            "scenario": scenario,
            "results": outcome.results,
            "all_passed": outcome.passed,
        }),
        rows: outcome.rows,
    })
}

fn build_rep(s: &Scenario, n: usize) -> Result<LieRep, CliError> {
    match s.rep.as_ref().expect("validated") {
        RepSpec::Partition(p) => partition_rep(n, p).map_err(CliError::input),
        RepSpec::Matrices(ms) => {
            if ms.len() != 3 {
                return Err(CliError::Schema(format!(
                    "explicit rep needs the images of T1, T2, T3, got {} matrices",
                    ms.len()
                )));
            }
            let images = ms
                .iter()
                .map(|m| {
                    let x = AlgebraElement::new(matrix_from_record(m)?)?;
                    if x.n() != n {
                        return Err(NcgError::DimensionMismatch {
                            expected: n,
                            found: x.n(),
                        });
                    }
                    Ok(x)
                })
                .collect::<Result<Vec<_>, NcgError>>()
                .map_err(CliError::input)?;
            LieRep::su2(images).map_err(CliError::input)
        }
    }
}

fn run_classify(s: &Scenario) -> Result<Outcome, CliError> {
    let n = s.n.expect("validated");
    let rep = build_rep(s, n)?;
    let target = if s.traceless {
        TargetSpace::Traceless
    } else {
        TargetSpace::Full
    };
    let c = classify(&rep, target).map_err(CliError::compute)?;
    let isotypic = c.isotypic.as_ref().map(|iso| {
        json!({
            "blocks": iso.blocks,
            "commutant_dimension": iso.commutant_dimension(),
            "tolerance": CASIMIR_TOL,
        })
    });
    let results = json!({
        "target": c.target,
        "tolerance": DEFAULT_RANK_TOL,
        "scalar_field_count": c.scalar_field_count,
        "z0_dim": c.z0_dim,
        "w0_dim": c.w0_basis.len(),
        "w0_basis": c.w0_basis.iter().map(|w| matrix_to_record(w.matrix())).collect::<Vec<_>>(),
        "homomorphism_residual": {
            "value": rep.homomorphism_residual(),
            "tolerance": HOMOMORPHISM_TOL,
        },
        "isotypic": isotypic,
    });
    Ok(Outcome {
        results,
        rows: Vec::new(),
        passed: true,
    })
}

fn finish_checks(s: &Scenario, mut checks: Vec<CheckResult>) -> (Value, bool) {
    if let Some(tol) = s.tol {
        for c in &mut checks {
            c.tolerance = tol;
        }
    }
    let passed = checks.iter().all(CheckResult::passed);
    let list = checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "trials": c.trials,
                "max_residual": c.max_residual,
                "tolerance": c.tolerance,
                "passed": c.passed(),
            })
        })
        .collect::<Vec<_>>();
    (Value::Array(list), passed)
}

fn run_calculus(s: &Scenario) -> Result<Outcome, CliError> {
    let ns = [s.n.expect("validated")];
    let mut checks = calculus_suite(s.seed, s.trials(), &ns).map_err(CliError::compute)?;
    checks.extend(gauge_suite(s.seed, s.trials(), &ns).map_err(CliError::compute)?);
    let (list, passed) = finish_checks(s, checks);
    Ok(Outcome {
        results: json!({ "checks": list }),
        rows: Vec::new(),
        passed,
    })
}

fn build_fields(given: Option<&FieldSpec>) -> Result<AnsatzFields, CliError> {
    let default = FieldSpec::default();
    let f = given.unwrap_or(&default);
    AnsatzFields::parse(
        &f.a_t,
        &f.a_r,
        (&f.psi[0], &f.psi[1]),
        (&f.phi[0], &f.phi[1]),
        &f.eta,
    )
    .map_err(CliError::input)
}

const AXES: [&str; 4] = ["t", "x", "y", "z"];

fn form_rows(p: [f64; 4], form: &LocalNCOneForm) -> Vec<SweepRow> {
    let row = |component: String, value: C64| SweepRow {
        t: p[0],
        r: p[1],
        theta: p[2],
        phi: p[3],
        component,
        value,
    };
    let mut rows = Vec::with_capacity(21);
    for (mu, comps) in form.spacetime_components().iter().enumerate() {
        for (a, &z) in comps.iter().enumerate() {
            rows.push(row(format!("A_{}^{}", AXES[mu], a + 1), z));
        }
    }
    for (a, comps) in form.phi_components().iter().enumerate() {
        for (b, &z) in comps.iter().enumerate() {
            rows.push(row(format!("phi^{}_{}", a + 1, b + 1), z));
        }
    }
    rows
}

/// Evaluates `f` at every grid point in parallel, keeping grid order.
fn sweep<T: Send>(
    s: &Scenario,
    f: impl Fn([f64; 4]) -> Result<T, NcgError> + Sync + Send,
) -> Result<Vec<T>, CliError> {
    let points = s.grid.clone().unwrap_or_default().points();
    points
        .into_par_iter()
        .map(f)
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::compute)
}

fn run_spherical(s: &Scenario) -> Result<Outcome, CliError> {
    let fields = build_fields(s.fields.as_ref())?;
    let checks = spherical_suite(&fields, s.seed, s.trials()).map_err(CliError::compute)?;
    let per_point = sweep(s, |[t, r, th, ph]| {
        let p = SamplePoint::from_spherical(t, r, th, ph)?;
        Ok(form_rows([t, r, th, ph], &radial_gauge_form(&fields, &p)?))
    })?;
    let (list, passed) = finish_checks(s, checks);
    Ok(Outcome {
        results: json!({
            "checks": list,
            "gauge": "radial",
            "sweep_points": per_point.len(),
        }),
        rows: per_point.into_iter().flatten().collect(),
        passed,
    })
}

fn run_transition(s: &Scenario) -> Result<Outcome, CliError> {
    let fields = build_fields(s.fields.as_ref())?;
    let mut checks = vec![cocycle_suite(s.seed, s.trials()).map_err(CliError::compute)?];
    let per_point = sweep(s, |[t, r, th, ph]| {
        let sing = singular_gauge_form(&fields, t, r, th, ph)?;
        let moved =
            local_transition(&sing, &AxisProductGauge::spherical_frame())?.to_cartesian()?;
        let radial = radial_gauge_form(&fields, &SamplePoint::from_spherical(t, r, th, ph)?)?;
        Ok((moved.distance(&radial)?, form_rows([t, r, th, ph], &moved)))
    })?;
    checks.push(CheckResult {
        name: "grid_singular_to_radial_transport".into(),
        trials: per_point.len(),
        max_residual: per_point.iter().map(|(d, _)| *d).fold(0.0, |a: f64, d| {
            if d.is_nan() {
                d
            } else {
                a.max(d)
            }
        }),
        tolerance: TRANSPORT_TOL,
    });
    let (list, passed) = finish_checks(s, checks);
    Ok(Outcome {
        results: json!({
            "checks": list,
            "gauge": "singular_transported_to_radial",
            "sweep_points": per_point.len(),
        }),
        rows: per_point.into_iter().flat_map(|(_, rows)| rows).collect(),
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(text: &str) -> Scenario {
        Scenario::from_json(text).unwrap()
    }

    #[test]
    fn classify_spin_one() {
        let r = run(&scenario(
            r#"{"mode":"classify","n":3,"rep":{"partition":[3]}}"#,
        ))
        .unwrap();
        assert_eq!(r.summary["results"]["scalar_field_count"], 2);
        assert_eq!(r.summary["results"]["isotypic"]["blocks"]["5"], 1);
        assert!(r.rows.is_empty());
    }

    #[test]
    fn explicit_matrices_match_partition() {
        let gens = ncg_core::lie::su2_generators();
        let ms: Vec<_> = gens.iter().map(|g| matrix_to_record(g.matrix())).collect();
        let text = json!({"mode": "classify", "n": 2, "rep": {"matrices": ms}}).to_string();
        let r = run(&scenario(&text)).unwrap();
        assert_eq!(r.summary["results"]["scalar_field_count"], 1);
    }

    #[test]
    fn invalid_inputs_are_schema_errors() {
        let bad = [
            r#"{"mode":"classify","n":3,"rep":{"partition":[2,2]}}"#,
            r#"{"mode":"classify","n":2,"rep":{"matrices":[]}}"#,
            r#"{"mode":"spherical","fields":{"eta":"sin("}}"#,
        ];
        for text in bad {
            assert_eq!(run(&scenario(text)).unwrap_err().exit_code(), 2, "{text}");
        }
    }

    #[test]
    fn tolerance_override_applies_to_checks() {
        let r = run(&scenario(
            r#"{"mode":"verify-calculus","n":2,"trials":3,"tol":1e-30}"#,
        ))
        .unwrap();
        assert!(!r.all_passed());
        let r = run(&scenario(r#"{"mode":"verify-calculus","n":2,"trials":3}"#)).unwrap();
        assert!(r.all_passed());
    }

    #[test]
    fn transition_sweep_matches_spherical_sweep() {
        let grid = r#""grid":{"t":[0.2],"r":[1.3],"theta":[0.7],"phi":[2.0]}"#;
        let sph = run(&scenario(&format!(
            r#"{{"mode":"spherical","trials":2,{grid}}}"#
        )))
        .unwrap();
        let tr = run(&scenario(&format!(
            r#"{{"mode":"transition","trials":2,{grid}}}"#
        )))
        .unwrap();
        assert_eq!(sph.rows.len(), 21);
        for (a, b) in sph.rows.iter().zip(&tr.rows) {
            assert_eq!(a.component, b.component);
            assert!((a.value - b.value).norm() < 1e-9);
        }
        assert!(tr.all_passed());
    }
}
