//! Hyperbolic constants and the volume and translation-length bounds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::end_periodic::{boundary_complexity, EndPeriodicMap, Twist, TwistCurve};
use crate::error::{Error, Result};
use crate::farey::farey_distance;
use crate::moves::{upper_translation_estimate, MovePath, Ratio};
use crate::slope::Unimodular;
use crate::surface::{CurveId, PieceKind};

/// Digits an `f64` can carry.
pub const F64_DIGITS: u32 = 15;

/// Bound on `zeta(2n)` for `n >= 1`.
const ZETA2_BOUND: f64 = 1.65;

fn zeta(s: f64) -> f64 {
    const M: usize = 50;
    let direct: f64 = (1..M).map(|n| (n as f64).powf(-s)).sum();
    let m = M as f64;
    // Euler-Maclaurin tail from M on
    direct + m.powf(1.0 - s) / (s - 1.0) + 0.5 * m.powf(-s) + s * m.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * m.powf(-s - 3.0) / 720.0
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * m.powf(-s - 5.0) / 30240.0
}

/// `Lambda(theta)` with a bound on the dropped tail of the series, which is
/// kept below `10^-digits`.
pub fn lobachevsky_with_bound(theta: f64, digits: u32) -> (f64, f64) {
    let mut t = theta.rem_euclid(PI);
    if t > PI / 2.0 {
        t -= PI;
    }
    if t == 0.0 {
        return (0.0, 0.0);
    }
    let sign = t.signum();
    let t = t.abs();
    let r = (t / PI).powi(2);
    let target = 10f64.powi(-(digits.min(F64_DIGITS) as i32));
    let mut sum = t * (1.0 - (2.0 * t).ln());
    let mut power = t;
    let mut n = 1u32;
    let tail = loop {
        power *= r;
        let nf = n as f64;
        sum += zeta(2.0 * nf) / (nf * (2.0 * nf + 1.0)) * power;
        let next = nf + 1.0;
        let tail = ZETA2_BOUND * power * r / (next * (2.0 * next + 1.0)) / (1.0 - r);
        if tail < target || n > 400 {
            break tail;
        }
        n += 1;
    };
    (sign * sum, tail)
}

/// The Lobachevsky function `-int_0^theta log|2 sin t| dt`.
pub fn lobachevsky(theta: f64) -> f64 {
    lobachevsky_with_bound(theta, F64_DIGITS).0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicConstants {
    /// `8 Lambda(pi/4)`.
    pub v_oct: f64,
    /// `2 Lambda(pi/6)`.
    pub v_tet: f64,
    /// Requested decimal digits.
    pub precision: u32,
    /// Certified bound on the series truncation of both constants, plus
    /// the `f64` rounding floor.
    pub error_bound: f64,
}

impl HyperbolicConstants {
    pub fn compute(precision: u32) -> HyperbolicConstants {
        let (l4, e4) = lobachevsky_with_bound(PI / 4.0, precision);
        let (l6, e6) = lobachevsky_with_bound(PI / 6.0, precision);
        let rounding = 64.0 * f64::EPSILON;
        HyperbolicConstants {
            v_oct: 8.0 * l4,
            v_tet: 2.0 * l6,
            precision,
            error_bound: (8.0 * e4).max(2.0 * e6) + rounding,
        }
    }

    /// Digits actually carried.
    pub fn effective_digits(&self) -> u32 {
        self.precision.min(F64_DIGITS)
    }
}

impl Default for HyperbolicConstants {
    fn default() -> Self {
        HyperbolicConstants::compute(F64_DIGITS)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub quantity: String,
    pub value: String,
    pub source: String,
}

/// Best `weight / power` among the supplied paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperEstimate {
    pub voct_coeff: Ratio,
    pub value: f64,
    pub path_index: usize,
    pub weight: u64,
    pub power: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    /// Upper bound on `tau(f)`; the volume bound is this times `V_oct`.
    pub upper_total: Option<UpperEstimate>,
    /// Same, over paths in the component of the first path's base.
    pub upper_component: Option<UpperEstimate>,
    pub lower_tau_boundary: f64,
    pub lower_tau_intrinsic: f64,
    pub phi_star: u64,
    pub xi_boundary: u64,
    pub consistent: bool,
    pub constants: HyperbolicConstants,
    pub provenance: Vec<Provenance>,
}

impl BoundsReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "upper_voct_coeff": self.upper_total.as_ref().map(|u| u.voct_coeff.to_string()),
            "upper_component_voct_coeff": self.upper_component.as_ref().map(|u| u.voct_coeff.to_string()),
            "lower_tau": {
                "boundary": self.lower_tau_boundary,
                "intrinsic": self.lower_tau_intrinsic,
            },
            "phi_star": self.phi_star,
            "xi_boundary": self.xi_boundary,
            "consistent": self.consistent,
            "constants": {
                "v_oct": self.constants.v_oct,
                "v_tet": self.constants.v_tet,
                "precision": self.constants.precision,
                "error_bound": self.constants.error_bound,
            },
            "provenance": self.provenance,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.constants;
        out.push_str(&format!("V_oct = {:.12}\nV_tet = {:.12}\n", c.v_oct, c.v_tet));
        out.push_str(&format!("|Phi*| = {}\nxi(boundary) = {}\n", self.phi_star, self.xi_boundary));
        match &self.upper_total {
            Some(u) => out.push_str(&format!(
                "Thm 1.1 upper bound: tau(f) <= {} (path {}, weight {}, power {}), Vol <= {} V_oct = {:.6}\n",
                u.voct_coeff,
                u.path_index,
                u.weight,
                u.power,
                u.voct_coeff,
                u.value * c.v_oct
            )),
            None => out.push_str("Thm 1.1 upper bound: no path supplied\n"),
        }
        if let Some(u) = &self.upper_component {
            out.push_str(&format!(
                "Thm 1.2 upper bound: tau(f, Omega) <= {}, Vol(M - P_Omega) <= {:.6}\n",
                u.voct_coeff,
                u.value * c.v_oct
            ));
        }
        out.push_str(&format!("Cor 1.4 lower bound: tau(f) >= {:.6}\n", self.lower_tau_boundary));
        out.push_str(&format!("Cor 1.5 lower bound: tau(f) >= {:.6}\n", self.lower_tau_intrinsic));
        out.push_str(&format!("consistency: {}\n", if self.consistent { "PASS" } else { "FAIL" }));
        out
    }
}

fn best(estimates: impl Iterator<Item = UpperEstimate>) -> Option<UpperEstimate> {
    estimates.min_by(|a, b| a.voct_coeff.cmp(&b.voct_coeff).then(a.path_index.cmp(&b.path_index)))
}

/// Upper bounds from the given `(path, power)` pairs and the two lower
/// bounds from the end behavior.
pub fn evaluate_bounds(
    f: &EndPeriodicMap,
    paths: &[(MovePath, u32)],
    constants: &HyperbolicConstants,
) -> Result<BoundsReport> {
    let behavior = f.end_behavior()?;
    let phi = f.phi_star_norm()?;
    let xi = boundary_complexity(&behavior)?.total;
    let (vt, vo) = (constants.v_tet, constants.v_oct);
    let lower_boundary = vt * xi as f64 / (2.0 * vo);
    let lower_intrinsic = 3.0 * vt * phi as f64 / (2.0 * vo);

    let mut provenance = vec![
        Provenance { quantity: "V_oct".into(), value: format!("{vo:.12}"), source: "8 Lambda(pi/4), series".into() },
        Provenance { quantity: "V_tet".into(), value: format!("{vt:.12}"), source: "2 Lambda(pi/6), series".into() },
        Provenance {
            quantity: "|Phi*|".into(),
            value: phi.to_string(),
            source: format!("end behavior w = {:?} of the handle strips", behavior.w),
        },
        Provenance { quantity: "xi(boundary)".into(), value: xi.to_string(), source: "sum of 3g-3 over S+ and S-".into() },
    ];

    let mut estimates = Vec::new();
    for (i, (path, power)) in paths.iter().enumerate() {
        let coeff = upper_translation_estimate(f, path, *power)?;
        provenance.push(Provenance {
            quantity: format!("path {i}"),
            value: coeff.to_string(),
            source: format!("weight {} = n_T {} + 2 n_S {}, power {power}", path.weight(), path.n_t(), path.n_s()),
        });
        estimates.push(UpperEstimate { voct_coeff: coeff, value: coeff.value(), path_index: i, weight: path.weight(), power: *power });
    }
    let upper_total = best(estimates.iter().cloned());
    let upper_component = paths.first().and_then(|(first, _)| {
        best(estimates.iter().filter(|e| paths[e.path_index].0.base == first.base).cloned())
    });
    let tol = 1e-9;
    let consistent = (lower_boundary - lower_intrinsic).abs() < tol
        && upper_total.as_ref().is_none_or(|u| u.value + tol >= lower_intrinsic.max(lower_boundary));
    Ok(BoundsReport {
        upper_total,
        upper_component,
        lower_tau_boundary: lower_boundary,
        lower_tau_intrinsic: lower_intrinsic,
        phi_star: phi,
        xi_boundary: xi,
        consistent,
        constants: *constants,
        provenance,
    })
}

/// Id of the auxiliary twist curve placed in the piece of `gamma0`.
pub fn sharpness_aux_id(gamma0: &CurveId) -> CurveId {
    CurveId(format!("aux.{gamma0}"))
}

/// `f_k = f D_k` with `D_k = (T_{gamma0} T_v^-1)^k` supported in the
/// four-holed sphere around `gamma0`, where `v` meets `gamma0` minimally,
/// together with the canonical path for `f_k`. The `gamma0` piece gains
/// `2k` S-moves, so the path weight grows by exactly `4k`.
pub fn sharpness_family(f: &EndPeriodicMap, gamma0: &CurveId, k: u32) -> Result<(EndPeriodicMap, MovePath)> {
    let violation = |m: String| Error::ConventionViolation(m);
    if k == 0 {
        return Ok((f.clone(), f.canonical_path()?));
    }
    if f.iterate != 1 || !f.pre_word.is_empty() {
        return Err(violation("sharpness family needs a single iterate of rho h".into()));
    }
    let pattern = f.pattern()?;
    if pattern.complexity_one_piece(gamma0)? != PieceKind::S {
        return Err(violation(format!("{gamma0} does not bound a four-holed sphere")));
    }
    let cuffs: std::collections::BTreeSet<_> =
        pattern.piece_cuffs(gamma0)?.into_iter().map(|h| h.curve).collect();
    if cuffs.len() != 4 {
        return Err(violation(format!("the piece of {gamma0} has {} distinct cuffs, not 4", cuffs.len())));
    }
    let s0 = pattern.slope(gamma0).expect("internal curve carries a slope");
    let frame = Unimodular::to_infinity(s0).inverse();
    let v = frame.apply(crate::slope::Slope::ZERO);
    let aux = sharpness_aux_id(gamma0);
    let base = f.canonical_path()?.weight();

    let lift = |e: Error| match e {
        Error::SupportMismatch(m) => violation(m),
        Error::CurveOutsideWindow(c) => violation(format!("{c} is outside the middle of the window")),
        other => other,
    };
    let g = f
        .with_twist_curves(vec![TwistCurve { id: aux.clone(), host: gamma0.clone(), slope: v }])
        .map_err(lift)?;
    // composed twists are appended in reverse, so list D_k back to front
    let mut twists = Vec::with_capacity(2 * k as usize);
    for _ in 0..k {
        twists.push((aux.clone(), -1));
        twists.push((gamma0.clone(), 1));
    }
    let fk = g.compose_with_twists(&twists).map_err(lift)?;
    let path = fk.canonical_path()?;
    if path.weight() != base + 4 * k as u64 {
        return Err(violation(format!(
            "path weight {} differs from {} + 4k; the piece of {gamma0} interacts with the word",
            path.weight(),
            base
        )));
    }
    Ok((fk, path))
}

/// `d(s0, D_k^-1 s0)` on the `gamma0` piece of a map from
/// [`sharpness_family`].
pub fn inserted_distance(fk: &EndPeriodicMap, gamma0: &CurveId) -> Result<u32> {
    let s0 = fk.pattern()?.slope(gamma0).ok_or_else(|| Error::UnknownCurve(gamma0.clone()))?;
    let words: Vec<Twist> = fk.word.clone();
    let m = fk.host_matrix(gamma0, &words)?;
    Ok(farey_distance(s0, m.inverse().apply(s0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lobachevsky_basics() {
        assert_eq!(lobachevsky(0.0), 0.0);
        assert!((lobachevsky(0.3) + lobachevsky(-0.3)).abs() < 1e-15);
        assert!((lobachevsky(0.3) - lobachevsky(0.3 + PI)).abs() < 1e-13);
        assert!(lobachevsky(PI / 2.0).abs() < 1e-14);
        // maximum at pi/6 is V_tet / 2
        assert!(lobachevsky(PI / 6.0) > lobachevsky(PI / 6.0 + 0.01));
        assert!(lobachevsky(PI / 6.0) > lobachevsky(PI / 6.0 - 0.01));
    }

    #[test]
    fn constants() {
        let c = HyperbolicConstants::compute(15);
        assert!((c.v_oct - 3.663862376708876).abs() < 1e-12);
        assert!((c.v_tet - 1.014941606409653).abs() < 1e-12);
        assert!(c.error_bound < 1e-13);
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-14);
    }
}
