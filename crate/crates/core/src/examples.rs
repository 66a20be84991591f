//! Generated end-periodic maps on the ladder windows.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bounds::sharpness_family;
use crate::certify::{ConventionFlags, Separation, SupportDescriptor};
use crate::end_periodic::{EndPeriodicMap, HandleShiftSystem, Twist, TwistCurve};
use crate::error::{Error, Result};
use crate::ladder::{make_id, parse_id, shift_id, Ladder};
use crate::moves::MovePath;
use crate::slope::{Slope, Unimodular};
use crate::schema::{CertificateSection, MapFile};
use crate::surface::{CurveId, PieceKind, SurfaceSig};

/// Twists placed on the piece of one ladder position class. Slopes are in
/// the host's own frame, where the host curve is `1/0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostSpec {
    pub prefix: String,
    pub column: u32,
    pub twists: Vec<(Slope, i64)>,
}

impl HostSpec {
    /// A single twist about a curve meeting the host minimally.
    pub fn adjacent(prefix: &str, column: u32, power: i64) -> HostSpec {
        HostSpec { prefix: prefix.into(), column, twists: vec![(Slope::ZERO, power)] }
    }

    /// `(T_a T_b^-1)^reps` with `a` the host curve and `b` meeting it
    /// minimally.
    pub fn pair(prefix: &str, column: u32, reps: u32) -> HostSpec {
        let mut twists = Vec::new();
        for _ in 0..reps {
            twists.push((Slope::INFINITY, 1));
            twists.push((Slope::ZERO, -1));
        }
        HostSpec { prefix: prefix.into(), column, twists }
    }
}

/// A generated map with the placed host curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placed {
    pub map: EndPeriodicMap,
    pub hosts: Vec<CurveId>,
}

fn scratch_ladder(k: u32) -> Ladder {
    let w = Ladder::window(k, 4, 1, 1);
    Ladder::from_window(&w, k, "E1", "E2").expect("scratch ladder")
}

fn piece_of(ladder: &Ladder, id: &str) -> Result<BTreeSet<String>> {
    let (a, b) = ladder
        .pattern_attachment(id)
        .ok_or_else(|| Error::UnknownCurve(CurveId(id.to_string())))?;
    Ok([a.pant, b.pant].into_iter().collect())
}

/// Places one host per spec on the `k`-strip ladder, lowest layer first,
/// so that the pieces of all hosts and of their first `copies - 1`
/// translates down the ladder are pairwise disjoint. One buffer layer is
/// kept on each side, so that rewired neighbours of a host never touch an
/// end stub, and `spare` further middle layers are left on top.
pub fn place_hosts(k: u32, specs: &[HostSpec], copies: u32, spare: u32) -> Result<Placed> {
    let scratch = scratch_ladder(k);
    let copies = copies.max(1) as i64;
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut hosts = Vec::new();
    let mut top = 0i64;
    for spec in specs {
        if spec.column == 0 || spec.column > k || !["c", "u", "m"].contains(&spec.prefix.as_str()) {
            return Err(Error::UnknownCurve(CurveId(format!("{}?.{}", spec.prefix, spec.column))));
        }
        let mut t = copies;
        let placed = loop {
            let id = make_id(&spec.prefix, t, spec.column);
            let mut cover = BTreeSet::new();
            for j in 0..copies {
                let shifted = shift_id(&id, -j).expect("ladder id");
                cover.extend(piece_of(&scratch, &shifted)?);
            }
            if cover.is_disjoint(&taken) {
                taken.extend(cover);
                break id;
            }
            t += 1;
        };
        let (_, hi) = scratch.touched_layers(&placed).expect("ladder id");
        top = top.max(hi);
        hosts.push(CurveId(placed));
    }
    let middle = (top + 2) as u32 + spare;
    let window = Ladder::window(k, middle, 1, 1);
    let shift = HandleShiftSystem::parallel(k, "E2", "E1", k.max(2).min(window.genus));
    let ladder = Ladder::from_window(&window, k, "E1", "E2")?;
    let pattern = ladder.pattern();

    let mut curves = Vec::new();
    let mut word = Vec::new();
    for (i, (spec, host)) in specs.iter().zip(&hosts).enumerate() {
        let s0 = pattern.slope(host).ok_or_else(|| Error::CurveOutsideWindow(host.clone()))?;
        let frame = Unimodular::to_infinity(s0).inverse();
        let mut ids: Vec<(Slope, CurveId)> = Vec::new();
        for (local, power) in &spec.twists {
            let slope = frame.apply(*local);
            let id = match ids.iter().find(|(s, _)| *s == slope) {
                Some((_, id)) => id.clone(),
                None => {
                    let id = CurveId(format!("tw{}_{}", i + 1, ids.len() + 1));
                    ids.push((slope, id.clone()));
                    curves.push(TwistCurve { id: id.clone(), host: host.clone(), slope });
                    id
                }
            };
            word.push(Twist { curve: id, power: *power });
        }
    }
    let map = EndPeriodicMap::new(window, shift, curves, word)?;
    Ok(Placed { map, hosts })
}

/// Translates kept disjoint by the generators, enough for `f^2` and `f^3`
/// covering paths.
pub const COVER: u32 = 3;

/// One adjacent twist on every position class, `3k` hosts.
pub fn full_specs(k: u32) -> Vec<HostSpec> {
    let mut out = Vec::new();
    for prefix in ["c", "u", "m"] {
        for j in 1..=k {
            out.push(HostSpec::adjacent(prefix, j, 1));
        }
    }
    out
}

/// The pure handle shift on `k` strips.
pub fn laddershift(k: u32, middle: u32) -> Result<EndPeriodicMap> {
    let window = Ladder::window(k, middle, 1, 1);
    let genus = window.genus;
    EndPeriodicMap::handle_shift(window, HandleShiftSystem::parallel(k, "E2", "E1", k.max(2).min(genus)))
}

/// `T_alpha T_beta T_gamma rho` on the one-strip ladder, one twist for
/// each position class. Renamed twist curves are `alpha`, `beta`, `gamma`.
pub fn fenley() -> Result<EndPeriodicMap> {
    Ok(fenley_placed()?.map)
}

pub fn fenley_placed() -> Result<Placed> {
    let mut placed = place_hosts(1, &full_specs(1), COVER, 0)?;
    let f = &mut placed.map;
    let names = ["alpha", "beta", "gamma"];
    for (c, name) in f.curves.iter_mut().zip(names) {
        c.id = CurveId(name.into());
    }
    for (t, name) in f.word.iter_mut().zip(names) {
        t.curve = CurveId(name.into());
    }
    f.check()?;
    Ok(placed)
}

/// Map file of a generated example, with a fully separating certificate
/// section on the piece of `placed.hosts[host]`.
pub fn document(placed: &Placed, host: usize) -> Result<MapFile> {
    let cert = certificate_support(placed, host, Separation::FullySeparating)?;
    Ok(MapFile::from_map(&placed.map, Some(cert)))
}

/// A spine curve of the middle window whose sphere piece avoids every
/// host piece and their neighbours.
pub fn free_sphere_curve(f: &EndPeriodicMap) -> Result<CurveId> {
    let ladder = f.ladder()?;
    let pattern = ladder.pattern();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for t in f.word.iter().chain(&f.pre_word) {
        let (host, _) = f.resolve(&t.curve)?;
        for p in pattern.piece_pants(&host)? {
            for h in pattern.pant_cuffs(&p) {
                if let Ok(ps) = pattern.piece_pants(&h.curve) {
                    used.extend(ps);
                }
            }
        }
    }
    for t in ladder.mid_lo..=ladder.mid_hi {
        for (id, a, b) in ladder.layer_curves(t) {
            if !id.starts_with('c') || a.pant == b.pant {
                continue;
            }
            let (_, hi) = ladder.touched_layers(&id).expect("ladder id");
            if hi > ladder.mid_hi {
                continue;
            }
            let cid = CurveId(id);
            let pants = pattern.piece_pants(&cid)?;
            let cuffs: BTreeSet<_> = pattern.piece_cuffs(&cid)?.into_iter().map(|h| h.curve).collect();
            if cuffs.len() == 4 && pants.iter().all(|p| !used.contains(p)) {
                return Ok(cid);
            }
        }
    }
    Err(Error::ConventionViolation("no free four-holed sphere in the window".into()))
}

/// Base map for the sharpness family: the certificate demo at the
/// threshold power, with spare layers for `gamma0`.
pub fn sharp_base() -> Result<(Placed, CurveId)> {
    let placed = place_hosts(2, &certificate_specs(crate::certify::THRESHOLD), 1, 3)?;
    let g0 = free_sphere_curve(&placed.map)?;
    Ok((placed, g0))
}

/// `f_k` and its path.
pub fn sharp(k: u32) -> Result<(EndPeriodicMap, MovePath)> {
    let (base, g0) = sharp_base()?;
    sharpness_family(&base.map, &g0, k)
}

fn certificate_specs(reps: u32) -> Vec<HostSpec> {
    let mut specs = vec![HostSpec::pair("m", 1, reps)];
    specs.extend(full_specs(2).into_iter().filter(|s| !(s.prefix == "m" && s.column == 1)));
    specs
}

/// Two-strip map whose `m.1` host carries `(T_a T_b^-1)^reps`; the other
/// classes get one adjacent twist each.
pub fn certificate_demo(reps: u32) -> Result<Placed> {
    place_hosts(2, &certificate_specs(reps), COVER, 0)
}

/// Support data for a certificate on the piece of `placed.hosts[host]`:
/// `eta` and `alpha` are the spine curves just below and above it.
pub fn certificate_support(placed: &Placed, host: usize, separation: Separation) -> Result<CertificateSection> {
    let piece = placed.hosts.get(host).cloned().ok_or_else(|| Error::Parse(format!("no host {host}")))?;
    let pattern = placed.map.pattern()?;
    let s0 = pattern.slope(&piece).ok_or_else(|| Error::UnknownCurve(piece.clone()))?;
    let subsurface = match pattern.complexity_one_piece(&piece)? {
        PieceKind::T => SurfaceSig::new(1, 1),
        PieceKind::S => SurfaceSig::new(0, 4),
    };
    let (lo, hi) = placed
        .map
        .ladder()?
        .touched_layers(piece.as_str())
        .ok_or_else(|| Error::UnknownCurve(piece.clone()))?;
    let k = placed.map.ladder()?.k();
    let eta = CurveId(make_id("c", lo - 1, k));
    let alpha = CurveId(make_id("c", hi, k));
    if eta == piece || alpha == piece {
        return Err(Error::ConventionViolation(format!("{piece} is a spine curve")));
    }
    let support = SupportDescriptor {
        subsurface,
        plus: vec![alpha.clone()],
        minus: vec![eta.clone()],
        separation,
        flags: ConventionFlags::ALL,
        piece,
        rho_eta: s0,
        rho_inv_alpha: s0,
    };
    Ok(CertificateSection { support, eta, alpha })
}

/// A map fixing a line of curves: every class but `m.1` is twisted.
pub fn reducible() -> Result<EndPeriodicMap> {
    let specs: Vec<_> = full_specs(2).into_iter().filter(|s| !(s.prefix == "m" && s.column == 1)).collect();
    Ok(place_hosts(2, &specs, COVER, 0)?.map)
}

/// Fixture maps for the block checks: `(name, map, power)` with one-strip
/// and two-strip windows, assorted twist powers and extra hosts. Paths are
/// `map.power(power).canonical_path()`.
pub fn catalogue() -> Result<Vec<(String, EndPeriodicMap, u32)>> {
    let mut out = Vec::new();
    let adj = HostSpec::adjacent;
    // one strip
    for p in [1, 2, -1, 3] {
        let specs = vec![adj("c", 1, p), adj("u", 1, 1), adj("m", 1, -p)];
        out.push((format!("k1-p{p}"), place_hosts(1, &specs, COVER, 0)?.map, 1));
    }
    for extra in ["c", "u", "m"] {
        let mut specs = full_specs(1);
        specs.push(adj(extra, 1, 2));
        out.push((format!("k1-extra-{extra}"), place_hosts(1, &specs, COVER, 0)?.map, 1));
    }
    for extra in [["c", "u"], ["u", "m"], ["c", "m"]] {
        let mut specs = full_specs(1);
        specs.extend(extra.iter().map(|e| adj(e, 1, -1)));
        out.push((format!("k1-extra-{}{}", extra[0], extra[1]), place_hosts(1, &specs, COVER, 0)?.map, 1));
    }
    for p in [1, 2] {
        let specs = vec![adj("c", 1, p), adj("u", 1, -1), adj("m", 1, 1)];
        out.push((format!("k1-square-p{p}"), place_hosts(1, &specs, COVER, 0)?.map, 2));
    }
    out.push(("fenley".into(), fenley()?, 1));
    // two strips
    for p in [1, -1, 2] {
        let mut specs = full_specs(2);
        for s in &mut specs {
            s.twists[0].1 = p;
        }
        out.push((format!("k2-p{p}"), place_hosts(2, &specs, COVER, 0)?.map, 1));
    }
    for reps in [1, 2, 3] {
        out.push((format!("k2-pair{reps}"), certificate_demo(reps)?.map, 1));
    }
    for extra in ["m", "c", "u"] {
        let mut specs = full_specs(2);
        specs.push(adj(extra, 2, 1));
        out.push((format!("k2-extra-{extra}"), place_hosts(2, &specs, COVER, 0)?.map, 1));
    }
    Ok(out)
}

/// Layer of a ladder id.
pub fn layer_of(id: &CurveId) -> Option<i64> {
    parse_id(id.as_str()).map(|x| x.1)
}
