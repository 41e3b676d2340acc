use std::path::Path;

use ncg_core::serial::MatrixRecord;
use ncg_core::spherical::gauge::CHART_GUARD;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const MIN_N: usize = 2;
pub const MAX_N: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Classify,
    VerifyCalculus,
    Spherical,
    Transition,
}

/// The `su(2)` action on `ℂⁿ`: either a partition of `n` into spin blocks or
/// the images of `T1, T2, T3` as explicit matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RepSpec {
    Partition(Vec<usize>),
    Matrices(Vec<MatrixRecord>),
}

/// Sample values along each axis; the sweep visits their Cartesian product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
}

impl Default for Grid {
    fn default() -> Self {
        use std::f64::consts::PI;
        Self {
            t: vec![0.0],
            r: vec![0.5, 1.0, 2.0],
            theta: vec![PI / 4.0, PI / 2.0, 3.0 * PI / 4.0],
            phi: vec![0.0, PI / 2.0, PI],
        }
    }
}

impl Grid {
    pub fn points(&self) -> Vec<[f64; 4]> {
        let mut out =
            Vec::with_capacity(self.t.len() * self.r.len() * self.theta.len() * self.phi.len());
        for &t in &self.t {
            for &r in &self.r {
                for &theta in &self.theta {
                    for &phi in &self.phi {
                        out.push([t, r, theta, phi]);
                    }
                }
            }
        }
        out
    }
}

fn zero() -> String {
    "0".into()
}

fn one() -> String {
    "1".into()
}

fn zero_pair() -> [String; 2] {
    [zero(), zero()]
}

fn one_pair() -> [String; 2] {
    [one(), zero()]
}

/// Expressions in `t` and `r`. Omitted fields take their ordinary-limit
/// values (`φ = 1`, `η = 1`, everything else zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(default = "zero")]
    pub a_t: String,
    #[serde(default = "zero")]
    pub a_r: String,
    /// `[re, im]`
    #[serde(default = "zero_pair")]
    pub psi: [String; 2],
    /// `[re, im]`
    #[serde(default = "one_pair")]
    pub phi: [String; 2],
    #[serde(default = "one")]
    pub eta: String,
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self {
            a_t: zero(),
            a_r: zero(),
            psi: zero_pair(),
            phi: one_pair(),
            eta: one(),
        }
    }
}

fn default_true() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<RepSpec>,
    /// Classify on `sl_n` rather than all of `M_n`.
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    pub traceless: bool,
    /// Overrides the tolerance of every identity check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<FieldSpec>,
}

/// Command-line values that replace the ones in the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub trials: Option<usize>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if o.tol.is_some() {
            self.tol = o.tol;
        }
        if o.trials.is_some() {
            self.trials = o.trials;
        }
    }

    pub fn default_trials(&self) -> usize {
        match self.mode {
            Mode::Classify => 0,
            Mode::VerifyCalculus | Mode::Transition => 100,
            Mode::Spherical => 200,
        }
    }

    pub fn trials(&self) -> usize {
        self.trials.unwrap_or_else(|| self.default_trials())
    }

    /// Mode-specific presence and range checks.
    pub fn validate(&self) -> Result<(), CliError> {
        let schema = |msg: String| Err(CliError::Schema(msg));
        if let Some(tol) = self.tol {
            if !(tol.is_finite() && tol > 0.0) {
                return schema(format!("tol must be positive and finite, got {tol}"));
            }
        }
        match self.mode {
            Mode::Classify | Mode::VerifyCalculus => {
                let Some(n) = self.n else {
                    return schema("n is required for this mode".into());
                };
                if !(MIN_N..=MAX_N).contains(&n) {
                    return schema(format!("n must lie in [{MIN_N}, {MAX_N}], got {n}"));
                }
                if self.mode == Mode::Classify && self.rep.is_none() {
                    return schema("rep is required for classify".into());
                }
            }
            Mode::Spherical | Mode::Transition => {
                if self.n.is_some_and(|n| n != 2) {
                    return schema("spherical modes work on M_2; n must be 2 or absent".into());
                }
            }
        }
        if self.mode != Mode::Classify && self.trials() == 0 {
            return schema("trials must be positive".into());
        }
        if let Some(g) = &self.grid {
            let axes = [
                ("t", &g.t),
                ("r", &g.r),
                ("theta", &g.theta),
                ("phi", &g.phi),
            ];
            for (name, axis) in axes {
                if axis.is_empty() || axis.iter().any(|x| !x.is_finite()) {
                    return schema(format!(
                        "grid axis {name} must be a non-empty list of finite numbers"
                    ));
                }
            }
            if g.r.iter().any(|&r| r <= 0.0) {
                return schema("grid radii must be positive".into());
            }
            if self.mode == Mode::Transition
                && g.theta
                    .iter()
                    .any(|&th| th <= CHART_GUARD || th >= std::f64::consts::PI - CHART_GUARD)
            {
                return schema("grid polar angles must stay away from the poles".into());
            }
        }
        Ok(())
    }
}
