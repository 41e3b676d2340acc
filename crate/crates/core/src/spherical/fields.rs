//! Reduced field content of the spherically symmetric ansatz on the
//! `(t, r)` half-plane and its gauge laws.

use crate::error::{NcgError, Result};
use crate::linalg::C64;

use super::expr::{add, cos, mul, neg, sin, sub, Expr, Var};

/// Fields `a_t, a_r, ψ, φ, η` as expressions in `(t, r)`. Complex fields are
/// stored as real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzFields {
    pub a_t: Expr,
    pub a_r: Expr,
    pub psi_re: Expr,
    pub psi_im: Expr,
    pub phi_re: Expr,
    pub phi_im: Expr,
    pub eta: Expr,
}

/// Field values at one `(t, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValues {
    pub a_t: f64,
    pub a_r: f64,
    pub psi: C64,
    pub phi: C64,
    pub eta: f64,
}

impl FieldValues {
    pub fn zero() -> Self {
        Self {
            a_t: 0.0,
            a_r: 0.0,
            psi: C64::new(0.0, 0.0),
            phi: C64::new(0.0, 0.0),
            eta: 0.0,
        }
    }

    /// `φ = 1`, `η = 1`, `ψ = 0`, `a = 0`: the embedded ordinary connection.
    pub fn ordinary_limit() -> Self {
        Self {
            phi: C64::new(1.0, 0.0),
            eta: 1.0,
            ..Self::zero()
        }
    }
}

impl AnsatzFields {
    pub fn zero() -> Self {
        Self::constant(FieldValues::zero())
    }

    pub fn constant(v: FieldValues) -> Self {
        Self {
            a_t: Expr::Const(v.a_t),
            a_r: Expr::Const(v.a_r),
            psi_re: Expr::Const(v.psi.re),
            psi_im: Expr::Const(v.psi.im),
            phi_re: Expr::Const(v.phi.re),
            phi_im: Expr::Const(v.phi.im),
            eta: Expr::Const(v.eta),
        }
    }

    /// Parses each field from its expression string.
    pub fn parse(
        a_t: &str,
        a_r: &str,
        psi: (&str, &str),
        phi: (&str, &str),
        eta: &str,
    ) -> Result<Self> {
        Ok(Self {
            a_t: Expr::parse(a_t)?,
            a_r: Expr::parse(a_r)?,
            psi_re: Expr::parse(psi.0)?,
            psi_im: Expr::parse(psi.1)?,
            phi_re: Expr::parse(phi.0)?,
            phi_im: Expr::parse(phi.1)?,
            eta: Expr::parse(eta)?,
        })
    }

    /// Values at `(t, r)`; `r` must be positive and every field finite.
    pub fn at(&self, t: f64, r: f64) -> Result<FieldValues> {
        if r <= 0.0 {
            return Err(NcgError::ZeroRadius);
        }
        Ok(FieldValues {
            a_t: self.a_t.eval_finite(t, r)?,
            a_r: self.a_r.eval_finite(t, r)?,
            psi: C64::new(
                self.psi_re.eval_finite(t, r)?,
                self.psi_im.eval_finite(t, r)?,
            ),
            phi: C64::new(
                self.phi_re.eval_finite(t, r)?,
                self.phi_im.eval_finite(t, r)?,
            ),
            eta: self.eta.eval_finite(t, r)?,
        })
    }
}

/// `(re, im) ↦ e^{iχ}(re + i im)` on expressions.
fn rotate(re: &Expr, im: &Expr, chi: &Expr) -> (Expr, Expr) {
    let c = cos(chi.clone());
    let s = sin(chi.clone());
    (
        sub(mul(c.clone(), re.clone()), mul(s.clone(), im.clone())),
        add(mul(s, re.clone()), mul(c, im.clone())),
    )
}

/// Change of local section by `e^{−(χ0+χ1) T_r}`:
/// `ψ ↦ e^{i(χ0+χ1)} ψ`, `a ↦ a − η d(χ0+χ1)`, `φ` and `η` unchanged.
pub fn passive_gauge_transform(fields: &AnsatzFields, chi0: &Expr, chi1: &Expr) -> AnsatzFields {
    let chi = add(chi0.clone(), chi1.clone());
    let (psi_re, psi_im) = rotate(&fields.psi_re, &fields.psi_im, &chi);
    AnsatzFields {
        a_t: sub(
            fields.a_t.clone(),
            mul(fields.eta.clone(), chi.derivative(Var::T)),
        ),
        a_r: sub(
            fields.a_r.clone(),
            mul(fields.eta.clone(), chi.derivative(Var::R)),
        ),
        psi_re,
        psi_im,
        phi_re: fields.phi_re.clone(),
        phi_im: fields.phi_im.clone(),
        eta: fields.eta.clone(),
    }
}

/// Gauge transformation by `e^{χ T_3}` (singular gauge) or `e^{χ T_r}`
/// (radial gauge) in the symmetric subgroup: with `φ = 1 − φ′`,
/// `φ′ ↦ e^{−iχ} φ′`, `ψ ↦ e^{−iχ} ψ`, `a ↦ a + dχ`, `η` unchanged.
pub fn symmetric_gauge_transform(fields: &AnsatzFields, chi: &Expr) -> AnsatzFields {
    let minus_chi = neg(chi.clone());
    let (psi_re, psi_im) = rotate(&fields.psi_re, &fields.psi_im, &minus_chi);
    let shifted_re = sub(Expr::Const(1.0), fields.phi_re.clone());
    let shifted_im = neg(fields.phi_im.clone());
    let (p_re, p_im) = rotate(&shifted_re, &shifted_im, &minus_chi);
    AnsatzFields {
        a_t: add(fields.a_t.clone(), chi.derivative(Var::T)),
        a_r: add(fields.a_r.clone(), chi.derivative(Var::R)),
        psi_re,
        psi_im,
        phi_re: sub(Expr::Const(1.0), p_re),
        phi_im: neg(p_im),
        eta: fields.eta.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn sample() -> AnsatzFields {
        AnsatzFields::parse(
            "t*r",
            "sin(r)",
            ("cos(t) + r", "t - r^2"),
            ("1 + 0.3*r", "0.2*t"),
            "exp(-r)",
        )
        .unwrap()
    }

    fn values_close(a: &FieldValues, b: &FieldValues, tol: f64) -> bool {
        (a.a_t - b.a_t).abs() <= tol
            && (a.a_r - b.a_r).abs() <= tol
            && (a.psi - b.psi).norm() <= tol
            && (a.phi - b.phi).norm() <= tol
            && (a.eta - b.eta).abs() <= tol
    }

    #[test]
    fn passive_identity_and_constant_phase() {
        let f = sample();
        let same = passive_gauge_transform(&f, &Expr::zero(), &Expr::zero());
        assert!(values_close(
            &same.at(0.4, 1.1).unwrap(),
            &f.at(0.4, 1.1).unwrap(),
            1e-15
        ));

        let one = AnsatzFields::constant(FieldValues {
            psi: C64::new(1.0, 0.0),
            a_t: 0.5,
            ..FieldValues::zero()
        });
        let g = passive_gauge_transform(&one, &Expr::Const(FRAC_PI_2), &Expr::zero());
        let v = g.at(0.0, 1.0).unwrap();
        assert!((v.psi - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(v.a_t, 0.5);
    }

    #[test]
    fn passive_composition_adds_phases() {
        let f = sample();
        let c1 = Expr::parse("t^2 - r").unwrap();
        let c2 = Expr::parse("sin(t*r)").unwrap();
        let c3 = Expr::parse("0.3*r").unwrap();
        let twice =
            passive_gauge_transform(&passive_gauge_transform(&f, &c1, &c2), &c3, &Expr::zero());
        let once = passive_gauge_transform(&f, &add(c1, c2), &c3);
        for (t, r) in [(0.1, 0.5), (-0.7, 2.0), (1.3, 0.9)] {
            assert!(values_close(
                &twice.at(t, r).unwrap(),
                &once.at(t, r).unwrap(),
                1e-12
            ));
        }
    }

    #[test]
    fn symmetric_examples() {
        let f = sample();
        let same = symmetric_gauge_transform(&f, &Expr::zero());
        assert!(values_close(
            &same.at(0.2, 0.8).unwrap(),
            &f.at(0.2, 0.8).unwrap(),
            1e-15
        ));

        let chi = 0.9;
        let g = symmetric_gauge_transform(&f, &Expr::Const(chi));
        let (a, b) = (f.at(0.2, 0.8).unwrap(), g.at(0.2, 0.8).unwrap());
        let rot = C64::new(0.0, -chi).exp();
        assert!((b.a_t - a.a_t).abs() < 1e-15 && (b.a_r - a.a_r).abs() < 1e-15);
        assert!((b.psi - rot * a.psi).norm() < 1e-14);
        assert!(((C64::new(1.0, 0.0) - b.phi) - rot * (C64::new(1.0, 0.0) - a.phi)).norm() < 1e-14);
        assert_eq!(a.eta, b.eta);
    }

    #[test]
    fn nonpositive_radius_is_rejected() {
        assert_eq!(sample().at(0.0, 0.0).unwrap_err(), NcgError::ZeroRadius);
        let bad = AnsatzFields::parse("1/(r-1)", "0", ("0", "0"), ("0", "0"), "0").unwrap();
        assert!(matches!(bad.at(0.0, 1.0), Err(NcgError::Expression(_))));
    }
}
