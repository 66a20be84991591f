//! Subsurface projections on complexity-one pieces and the irreducibility
//! certificate for `f = rho h`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::end_periodic::EndPeriodicMap;
use crate::error::{Error, Result};
use crate::farey::farey_distance;
use crate::ladder::parse_id;
use crate::slope::Slope;
use crate::surface::{CurveId, SurfaceSig};

/// Distance a certificate must reach.
pub const THRESHOLD: u32 = 9;

/// Radius of the ball `B` about `rho(eta)`.
pub const BALL_RADIUS: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Separation {
    FullySeparating,
    PartiallySeparating,
    Neither,
}

impl Separation {
    pub fn is_partially(&self) -> bool {
        !matches!(self, Separation::Neither)
    }

    pub fn is_fully(&self) -> bool {
        matches!(self, Separation::FullySeparating)
    }
}

/// Standing assumptions on `C`, declared rather than derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConventionFlags {
    pub planar_complement: bool,
    pub boundary_arc_condition: bool,
    pub strip_genus_ge_2: bool,
    pub disjoint_from_u: bool,
}

impl ConventionFlags {
    pub const ALL: ConventionFlags = ConventionFlags {
        planar_complement: true,
        boundary_arc_condition: true,
        strip_genus_ge_2: true,
        disjoint_from_u: true,
    };

    fn failing(&self) -> Option<&'static str> {
        [
            (self.planar_complement, "planar complement"),
            (self.boundary_arc_condition, "boundary arc condition"),
            (self.strip_genus_ge_2, "strip genus at least 2"),
            (self.disjoint_from_u, "C disjoint from U+ and U-"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, name)| name)
    }
}

/// The support `C` of `h`, with the piece on which distances are measured
/// and the slopes of `rho(eta)` and `rho^-1(alpha)` there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportDescriptor {
    pub subsurface: SurfaceSig,
    pub plus: Vec<CurveId>,
    pub minus: Vec<CurveId>,
    pub separation: Separation,
    pub flags: ConventionFlags,
    /// Pants curve whose complexity-one piece carries the measurement.
    pub piece: CurveId,
    pub rho_eta: Slope,
    pub rho_inv_alpha: Slope,
}

impl SupportDescriptor {
    pub fn boundary(&self) -> impl Iterator<Item = &CurveId> {
        self.plus.iter().chain(&self.minus)
    }
}

/// A curve in window coordinates, seen from `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowCurve {
    pub id: CurveId,
    /// Lies in the interior of `C`.
    pub inside: bool,
    /// Total geometric intersection with `boundary C`.
    pub boundary_intersection: u64,
}

/// True iff `alpha` meets `C` essentially; boundary curves of `C` are
/// peripheral and project to nothing.
pub fn projection_nonempty(alpha: &WindowCurve, c: &SupportDescriptor) -> bool {
    if c.boundary().any(|b| *b == alpha.id) {
        return false;
    }
    alpha.inside || alpha.boundary_intersection > 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Marking {
    Slope(Slope),
    Curve { id: CurveId, peripheral: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionQuery {
    pub subsurface: SurfaceSig,
    pub a: Marking,
    pub b: Marking,
    /// Geometric intersection of the two curves when known.
    pub intersection: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistanceResult {
    Exact(u32),
    LowerBound(u32),
    Unknown,
}

impl fmt::Display for DistanceResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceResult::Exact(d) => write!(f, "exact {d}"),
            DistanceResult::LowerBound(d) => write!(f, "at least {d}"),
            DistanceResult::Unknown => f.write_str("unknown"),
        }
    }
}

/// Distance in the arc-and-curve graph of the subsurface. Exact on
/// complexity one through the Farey graph; on larger pieces only
/// disjointness (`1`) and the `i != 0` bound (`>= 2`) are certified.
pub fn distance_in_piece(q: &ProjectionQuery) -> Result<DistanceResult> {
    for m in [&q.a, &q.b] {
        if let Marking::Curve { id, peripheral: true } = m {
            return Err(Error::EmptyProjection(format!("{id} is peripheral")));
        }
    }
    if q.subsurface.complexity() == 1 {
        return match (&q.a, &q.b) {
            (Marking::Slope(a), Marking::Slope(b)) => Ok(DistanceResult::Exact(farey_distance(*a, *b))),
            _ => Ok(DistanceResult::Unknown),
        };
    }
    if q.a == q.b {
        return Ok(DistanceResult::Exact(0));
    }
    Ok(match q.intersection {
        Some(0) => DistanceResult::Exact(1),
        Some(_) => DistanceResult::LowerBound(2),
        None => DistanceResult::Unknown,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    StronglyIrreducible,
    Irreducible,
    Inconclusive(String),
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::StronglyIrreducible => f.write_str("strongly irreducible"),
            Classification::Irreducible => f.write_str("irreducible, not strongly irreducible"),
            Classification::Inconclusive(r) => write!(f, "inconclusive: {r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub classification: Classification,
    pub distance: DistanceResult,
    /// `(check, outcome)` in the order performed.
    pub evidence: Vec<(String, String)>,
}

/// Runs the `d >= 9` certificate for `f` with support `c`.
pub fn certify(f: &EndPeriodicMap, c: &SupportDescriptor, eta: &CurveId, alpha: &CurveId) -> Result<Certificate> {
    if !c.minus.contains(eta) {
        return Err(Error::ConventionViolation(format!("eta = {eta} is not in the negative boundary of C")));
    }
    if !c.plus.contains(alpha) {
        return Err(Error::ConventionViolation(format!("alpha = {alpha} is not in the positive boundary of C")));
    }
    if c.rho_eta != c.rho_inv_alpha {
        return Err(Error::ConventionViolation(format!(
            "i(rho(eta), rho^-1(alpha)) != 0: slopes {} and {}",
            c.rho_eta, c.rho_inv_alpha
        )));
    }
    let mut evidence = vec![
        ("eta in minus boundary".to_string(), eta.to_string()),
        ("alpha in plus boundary".to_string(), alpha.to_string()),
        ("i(rho(eta), rho^-1(alpha)) = 0".to_string(), format!("both {}", c.rho_eta)),
    ];
    let flags = [
        ("planar complement", c.flags.planar_complement),
        ("boundary arc condition", c.flags.boundary_arc_condition),
        ("strip genus at least 2", c.flags.strip_genus_ge_2),
        ("C disjoint from U+ and U-", c.flags.disjoint_from_u),
    ];
    for (name, ok) in flags {
        evidence.push((format!("flag: {name}"), ok.to_string()));
    }
    let strip_genus_ok = f.shift.strips.iter().all(|s| s.window_genus >= 2);
    evidence.push(("strips cross genus >= 2".into(), strip_genus_ok.to_string()));
    evidence.push(("separation".into(), format!("{:?}", c.separation)));

    let pattern = f.pattern()?;
    pattern.complexity_one_piece(&c.piece)?;
    let mut others = Vec::new();
    for t in f.word.iter().chain(&f.pre_word) {
        let host = f.resolve(&t.curve)?.0;
        if host != c.piece && !others.contains(&host) {
            others.push(host);
        }
    }
    if !others.is_empty() {
        let list: Vec<String> = others.iter().map(|h| h.to_string()).collect();
        evidence.push(("twists on disjoint pieces (fix rho(eta))".into(), list.join(" ")));
    }
    let m = f.host_matrix(&c.piece, &f.word)?;
    let image = m.apply(c.rho_eta);
    let distance = distance_in_piece(&ProjectionQuery {
        subsurface: c.subsurface,
        a: Marking::Slope(c.rho_eta),
        b: Marking::Slope(image),
        intersection: None,
    })?;
    evidence.push((
        "d_C(rho(eta), h(rho(eta)))".into(),
        format!("{distance} ({} -> {image}, Farey oracle on {})", c.rho_eta, c.piece),
    ));

    let classification = if let Some(name) = c.flags.failing() {
        Classification::Inconclusive(format!("flag not set: {name}"))
    } else if !strip_genus_ok {
        Classification::Inconclusive("a strip crosses genus below 2".into())
    } else if !c.separation.is_partially() {
        Classification::Inconclusive("C is not partially separating".into())
    } else {
        match distance {
            DistanceResult::Exact(d) if d >= THRESHOLD => {
                if c.separation.is_fully() {
                    Classification::StronglyIrreducible
                } else {
                    Classification::Irreducible
                }
            }
            DistanceResult::Exact(d) => Classification::Inconclusive(format!("distance {d} below {THRESHOLD}")),
            DistanceResult::LowerBound(d) if d >= THRESHOLD => {
                if c.separation.is_fully() {
                    Classification::StronglyIrreducible
                } else {
                    Classification::Irreducible
                }
            }
            DistanceResult::LowerBound(d) => {
                Classification::Inconclusive(format!("distance not certified (only >= {d})"))
            }
            DistanceResult::Unknown => Classification::Inconclusive("distance not certified".into()),
        }
    };
    Ok(Certificate { classification, distance, evidence })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeStep {
    pub k: u32,
    pub layer: i64,
    /// Slope of the projection to `C`, if nonempty.
    pub projection: Option<Slope>,
    /// Distance from the ball centre when the projection is nonempty.
    pub distance: Option<u32>,
    pub in_ball: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    /// `f^k(eta)` against `B`.
    pub forward: Vec<ProbeStep>,
    /// `f^-k(alpha)` against `h^-1 B`.
    pub backward: Vec<ProbeStep>,
}

impl ProbeReport {
    pub fn all_in_ball(&self) -> bool {
        self.forward.iter().chain(&self.backward).all(|s| s.in_ball)
    }
}

/// Follows `f^j(eta)` and `f^-j(alpha)` for `j <= k` through the ladder
/// layers and checks their projections to the measured piece against the
/// balls of radius 2 about `rho(eta)` and `h^-1 rho(eta)`.
pub fn filling_pair_probe(
    f: &EndPeriodicMap,
    c: &SupportDescriptor,
    eta: &CurveId,
    alpha: &CurveId,
    k: u32,
) -> Result<ProbeReport> {
    let ladder = f.ladder()?;
    let layer = |id: &CurveId| {
        parse_id(id.as_str())
            .map(|x| x.1)
            .ok_or_else(|| Error::ConventionViolation(format!("{id} is not a window curve")))
    };
    let (eta_layer, alpha_layer, piece_layer) = (layer(eta)?, layer(alpha)?, layer(&c.piece)?);
    if !(eta_layer < piece_layer || eta_layer <= piece_layer && alpha_layer >= piece_layer) {
        return Err(Error::ConventionViolation("eta must lie below alpha around the piece".into()));
    }
    let m = f.host_matrix(&c.piece, &f.word)?;
    let m_inv = m.inverse();
    let centre_back = m_inv.apply(c.rho_eta);
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    for j in 1..=k {
        let up = eta_layer + j as i64;
        let down = alpha_layer - j as i64;
        if up > ladder.hi || down < ladder.lo {
            return Err(Error::OrbitEscapedWindow { steps: j });
        }
        // f(eta) = rho(eta); later iterates have left C upwards
        let (proj, dist) = if j == 1 { (Some(c.rho_eta), Some(0)) } else { (None, None) };
        forward.push(ProbeStep { k: j, layer: up, projection: proj, distance: dist, in_ball: dist.is_none_or(|d| d <= BALL_RADIUS) });
        // f^-1(alpha) = h^-1 rho^-1(alpha)
        let (proj, dist) = if j == 1 {
            let p = m_inv.apply(c.rho_inv_alpha);
            (Some(p), Some(farey_distance(p, centre_back)))
        } else {
            (None, None)
        };
        backward.push(ProbeStep { k: j, layer: down, projection: proj, distance: dist, in_ball: dist.is_none_or(|d| d <= BALL_RADIUS) });
    }
    Ok(ProbeReport { forward, backward })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complexity_one_distance_is_farey() {
        let q = ProjectionQuery {
            subsurface: SurfaceSig::new(1, 1),
            a: Marking::Slope(Slope::ZERO),
            b: Marking::Slope(Slope::INFINITY),
            intersection: None,
        };
        assert_eq!(distance_in_piece(&q), Ok(DistanceResult::Exact(1)));
    }

    #[test]
    fn larger_pieces_only_bound() {
        let curve = |s: &str| Marking::Curve { id: s.into(), peripheral: false };
        let mut q = ProjectionQuery { subsurface: SurfaceSig::new(0, 5), a: curve("x"), b: curve("y"), intersection: Some(0) };
        assert_eq!(distance_in_piece(&q), Ok(DistanceResult::Exact(1)));
        q.intersection = Some(4);
        assert_eq!(distance_in_piece(&q), Ok(DistanceResult::LowerBound(2)));
        q.intersection = None;
        assert_eq!(distance_in_piece(&q), Ok(DistanceResult::Unknown));
        q.a = Marking::Curve { id: "x".into(), peripheral: true };
        assert!(matches!(distance_in_piece(&q), Err(Error::EmptyProjection(_))));
    }
}
