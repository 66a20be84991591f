//! End-periodic maps `f = rho h`: a handle-shift system `rho` together with
//! a compactly supported word `h` of Dehn twists, their coarse end
//! behavior, and their action on pants decompositions of a window.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::farey_geodesic;
use crate::ladder::{parse_id, shift_id, Ladder};
use crate::moves::{apply_move, ElementaryMove, MovePath};
use crate::slope::{Slope, Unimodular};
use crate::surface::{CurveId, PantsDecomposition, PieceKind, Window};

/// Signed genus shifted past each end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndBehavior {
    pub ends: Vec<String>,
    pub w: Vec<i64>,
}

impl EndBehavior {
    pub fn new(ends: Vec<String>, w: Vec<i64>) -> Self {
        assert_eq!(ends.len(), w.len());
        EndBehavior { ends, w }
    }

    /// Ends named `E1, E2, ...`.
    pub fn from_w(w: &[i64]) -> Self {
        let ends = (1..=w.len()).map(|i| format!("E{i}")).collect();
        EndBehavior { ends, w: w.to_vec() }
    }

    pub fn get(&self, end: &str) -> Result<i64> {
        self.ends
            .iter()
            .position(|e| e == end)
            .map(|i| self.w[i])
            .ok_or_else(|| Error::UnknownEnd(end.into()))
    }

    pub fn scaled(&self, n: u32) -> EndBehavior {
        EndBehavior { ends: self.ends.clone(), w: self.w.iter().map(|w| w * n as i64).collect() }
    }

    fn check_balanced(&self) -> Result<()> {
        let sum: i64 = self.w.iter().sum();
        if sum != 0 {
            return Err(Error::UnbalancedEndBehavior(sum));
        }
        Ok(())
    }

    fn check_nonzero(&self) -> Result<()> {
        match self.w.iter().position(|&w| w == 0) {
            Some(i) => Err(Error::ZeroShiftEnd(self.ends[i].clone())),
            None => Ok(()),
        }
    }
}

/// `|Phi*| = sum |w_i|`.
pub fn phi_star_norm(b: &EndBehavior) -> Result<u64> {
    b.check_balanced()?;
    Ok(b.w.iter().map(|w| w.unsigned_abs()).sum())
}

/// Genus of the component of `S_+` or `S_-` over `end`: `1 + |w_end|`.
pub fn quotient_genus(b: &EndBehavior, end: &str) -> Result<u64> {
    let w = b.get(end)?;
    if w == 0 {
        return Err(Error::ZeroShiftEnd(end.into()));
    }
    Ok(1 + w.unsigned_abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    /// Quotient of the attracting ends.
    #[serde(rename = "S+")]
    Plus,
    #[serde(rename = "S-")]
    Minus,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "S+",
            Side::Minus => "S-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientComponent {
    pub end: String,
    pub side: Side,
    pub genus: u64,
    pub complexity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryComplexity {
    /// `xi` of the whole boundary `S_+ + S_-`.
    pub total: u64,
    pub s_plus: u64,
    pub s_minus: u64,
    pub components: Vec<QuotientComponent>,
}

/// Complexity of the boundary of the compactified mapping torus, summed
/// over the closed components of `S_+` and `S_-`.
pub fn boundary_complexity(b: &EndBehavior) -> Result<BoundaryComplexity> {
    b.check_nonzero()?;
    b.check_balanced()?;
    let mut components = Vec::new();
    for (end, &w) in b.ends.iter().zip(&b.w) {
        let genus = quotient_genus(b, end)?;
        components.push(QuotientComponent {
            end: end.clone(),
            side: if w > 0 { Side::Plus } else { Side::Minus },
            genus,
            complexity: 3 * genus - 3,
        });
    }
    let side_sum = |s: Side| components.iter().filter(|c| c.side == s).map(|c| c.complexity).sum();
    let s_plus = side_sum(Side::Plus);
    let s_minus = side_sum(Side::Minus);
    Ok(BoundaryComplexity { total: s_plus + s_minus, s_plus, s_minus, components })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripRecord {
    #[serde(default)]
    pub id: String,
    /// Repelling end.
    pub from: String,
    /// Attracting end.
    pub to: String,
    pub window_genus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HandleShiftSystem {
    pub strips: Vec<StripRecord>,
}

impl HandleShiftSystem {
    /// `k` parallel strips from `from` to `to`.
    pub fn parallel(k: u32, from: &str, to: &str, window_genus: u32) -> Self {
        HandleShiftSystem {
            strips: (1..=k)
                .map(|i| StripRecord { id: format!("H{i}"), from: from.into(), to: to.into(), window_genus })
                .collect(),
        }
    }

    /// End behavior of the shift on the window's ends, after checking the
    /// strip incidence counts.
    pub fn end_behavior(&self, window: &Window) -> Result<EndBehavior> {
        let mut w = vec![0i64; window.ends.len()];
        let index = |e: &str| {
            window
                .ends
                .iter()
                .position(|x| x.id == e)
                .ok_or_else(|| Error::UnknownEnd(e.into()))
        };
        let mut into = vec![0usize; w.len()];
        let mut out_of = vec![0usize; w.len()];
        for s in &self.strips {
            if s.from == s.to {
                return Err(Error::InvalidStrips(format!("strip {} starts and ends at {}", s.id, s.from)));
            }
            let (i, j) = (index(&s.from)?, index(&s.to)?);
            out_of[i] += 1;
            into[j] += 1;
            w[j] += 1;
            w[i] -= 1;
        }
        for (i, e) in window.ends.iter().enumerate() {
            if into[i] > 0 && out_of[i] > 0 {
                return Err(Error::InvalidStrips(format!("end {} is both attracting and repelling", e.id)));
            }
        }
        let b = EndBehavior::new(window.ends.iter().map(|e| e.id.clone()).collect(), w);
        b.check_nonzero()?;
        Ok(b)
    }
}

/// A non-pants curve used as a twist: it lives in the complexity-one piece
/// of `host` with the given slope in that piece's frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistCurve {
    pub id: CurveId,
    pub host: CurveId,
    pub slope: Slope,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Twist {
    #[serde(rename = "twist")]
    pub curve: CurveId,
    pub power: i64,
}

impl Twist {
    pub fn new(curve: impl Into<CurveId>, power: i64) -> Self {
        Twist { curve: curve.into(), power }
    }
}

/// `f = (rho h)^iterate D`, where `h` is the product of `word` (last entry
/// applied first) and `D` that of `pre_word`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndPeriodicMap {
    pub window: Window,
    pub shift: HandleShiftSystem,
    pub curves: Vec<TwistCurve>,
    pub word: Vec<Twist>,
    pub pre_word: Vec<Twist>,
    pub iterate: u32,
}

impl EndPeriodicMap {
    pub fn new(window: Window, shift: HandleShiftSystem, curves: Vec<TwistCurve>, word: Vec<Twist>) -> Result<Self> {
        let f = EndPeriodicMap { window, shift, curves, word, pre_word: Vec::new(), iterate: 1 };
        f.check()?;
        Ok(f)
    }

    /// The pure handle shift.
    pub fn handle_shift(window: Window, shift: HandleShiftSystem) -> Result<Self> {
        EndPeriodicMap::new(window, shift, Vec::new(), Vec::new())
    }

    pub fn end_behavior(&self) -> Result<EndBehavior> {
        Ok(self.shift.end_behavior(&self.window)?.scaled(self.iterate))
    }

    pub fn phi_star_norm(&self) -> Result<u64> {
        phi_star_norm(&self.end_behavior()?)
    }

    /// Ladder model of the window; needs two ends and parallel strips.
    pub fn ladder(&self) -> Result<Ladder> {
        let b = self.shift.end_behavior(&self.window)?;
        if b.ends.len() != 2 {
            return Err(Error::UnsupportedWindow(format!(
                "the pants action is implemented for two ends, got {}",
                b.ends.len()
            )));
        }
        let (top, bottom) = if b.w[0] > 0 { (0, 1) } else { (1, 0) };
        Ladder::from_window(&self.window, b.w[top] as u32, &b.ends[top], &b.ends[bottom])
    }

    /// The `rho`-invariant pants decomposition of the window.
    pub fn pattern(&self) -> Result<PantsDecomposition> {
        Ok(self.ladder()?.pattern())
    }

    /// Host curve and optional twist slope of a word entry; `None` means a
    /// twist about the host curve itself.
    pub fn resolve(&self, curve: &CurveId) -> Result<(CurveId, Option<Slope>)> {
        if let Some(t) = self.curves.iter().find(|t| &t.id == curve) {
            return Ok((t.host.clone(), Some(t.slope)));
        }
        Ok((curve.clone(), None))
    }

    fn hosts(&self) -> Result<BTreeSet<CurveId>> {
        let mut out = BTreeSet::new();
        for t in self.word.iter().chain(&self.pre_word) {
            out.insert(self.resolve(&t.curve)?.0);
        }
        Ok(out)
    }

    /// Checks the strips, the ladder model and the placement of twists:
    /// each host piece must lie away from the end stubs, and distinct
    /// hosts must have disjoint pieces.
    pub fn check(&self) -> Result<()> {
        self.window.check()?;
        for s in &self.shift.strips {
            if s.window_genus > self.window.genus {
                return Err(Error::InvalidStrips(format!(
                    "strip {} crosses genus {} but the window has genus {}",
                    s.id, s.window_genus, self.window.genus
                )));
            }
        }
        let b = self.shift.end_behavior(&self.window)?;
        phi_star_norm(&b)?;
        if self.iterate == 0 {
            return Err(Error::Parse("iterate must be positive".into()));
        }
        if self.word.is_empty() && self.pre_word.is_empty() {
            return Ok(());
        }
        let ladder = self.ladder()?;
        let pattern = ladder.pattern();
        for t in &self.curves {
            if pattern.curve(&t.id).is_some() {
                return Err(Error::Parse(format!("twist curve {} reuses a pants curve id", t.id)));
            }
        }
        let mut pieces: BTreeMap<CurveId, BTreeSet<String>> = BTreeMap::new();
        for t in self.word.iter().chain(&self.pre_word) {
            let (host, _) = self.resolve(&t.curve)?;
            let outside = || Error::CurveOutsideWindow(t.curve.clone());
            let pants = pattern.piece_pants(&host).map_err(|_| outside())?;
            for p in &pants {
                let layer = parse_id(p).map(|x| x.1).ok_or_else(outside)?;
                if layer < ladder.mid_lo || layer > ladder.mid_hi {
                    return Err(outside());
                }
            }
            pieces.insert(host, pants.into_iter().collect());
        }
        let hosts: Vec<_> = pieces.keys().cloned().collect();
        for (i, a) in hosts.iter().enumerate() {
            for b in &hosts[i + 1..] {
                if !pieces[a].is_disjoint(&pieces[b]) {
                    return Err(Error::SupportMismatch(format!(
                        "twist hosts {a} and {b} have overlapping pieces"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Matrix of a twist word on the slopes of `host`'s piece, in the
    /// pattern frame. A Dehn twist acts on a four-holed-sphere piece as
    /// the square of the parabolic, so that `i(T^k b, b) = |k| i(a, b)^2`
    /// with `i = 2|det|` there.
    pub fn host_matrix(&self, host: &CurveId, word: &[Twist]) -> Result<Unimodular> {
        let pattern = self.pattern()?;
        let kind = pattern.complexity_one_piece(host)?;
        let scale = if kind == PieceKind::S { 2 } else { 1 };
        let mut m = Unimodular::IDENTITY;
        for t in word {
            let (h, slope) = self.resolve(&t.curve)?;
            if &h != host {
                continue;
            }
            let u = match slope {
                Some(u) => u,
                None => pattern.slope(host).expect("internal pants curve carries a slope"),
            };
            m = m.compose(&Unimodular::twist(u, scale * t.power));
        }
        Ok(m)
    }

    fn apply_word(&self, pd: &PantsDecomposition, word: &[Twist], inverse: bool) -> Result<PantsDecomposition> {
        let mut out = pd.clone();
        let mut hosts = BTreeSet::new();
        for t in word {
            hosts.insert(self.resolve(&t.curve)?.0);
        }
        for host in hosts {
            let mut m = self.host_matrix(&host, word)?;
            if inverse {
                m = m.inverse();
            }
            if m == Unimodular::IDENTITY {
                continue;
            }
            let current = out.slope(&host).ok_or_else(|| Error::CurveOutsideWindow(host.clone()))?;
            out.set_slope(&host, m.apply(current))?;
        }
        Ok(out)
    }

    /// Image `f(pd)`.
    pub fn act(&self, pd: &PantsDecomposition) -> Result<PantsDecomposition> {
        let ladder = self.ladder()?;
        self.check_depths(&ladder)?;
        let mut out = self.apply_word(pd, &self.pre_word, false)?;
        for _ in 0..self.iterate {
            out = self.apply_word(&out, &self.word, false)?;
            out = ladder.shift(&out, 1)?;
        }
        Ok(out)
    }

    /// Preimage `f^-1(pd)`.
    pub fn act_inverse(&self, pd: &PantsDecomposition) -> Result<PantsDecomposition> {
        let ladder = self.ladder()?;
        self.check_depths(&ladder)?;
        let mut out = pd.clone();
        for _ in 0..self.iterate {
            out = ladder.shift(&out, -1)?;
            out = self.apply_word(&out, &self.word, true)?;
        }
        self.apply_word(&out, &self.pre_word, true)
    }

    fn check_depths(&self, ladder: &Ladder) -> Result<()> {
        if ladder.mid_lo == ladder.lo || ladder.mid_hi == ladder.hi {
            return Err(Error::UnsupportedWindow(
                "the pants action needs stub depth at least 1 on both ends".into(),
            ));
        }
        Ok(())
    }

    /// `f^n`.
    pub fn power(&self, n: u32) -> Result<EndPeriodicMap> {
        if n == 0 {
            return Err(Error::Parse("power must be positive".into()));
        }
        if n > 1 && !self.pre_word.is_empty() {
            return Err(Error::UnsupportedWindow("powers of maps with a pre-composed word".into()));
        }
        Ok(EndPeriodicMap { iterate: self.iterate * n, ..self.clone() })
    }

    /// Declares extra twist curves.
    pub fn with_twist_curves(&self, extra: Vec<TwistCurve>) -> Result<EndPeriodicMap> {
        let mut out = self.clone();
        for t in extra {
            if let Some(old) = out.curves.iter().find(|c| c.id == t.id) {
                if *old != t {
                    return Err(Error::Parse(format!("twist curve {} declared twice", t.id)));
                }
                continue;
            }
            out.curves.push(t);
        }
        out.check()?;
        Ok(out)
    }

    /// `f T_{c_k}^{n_k} ... T_{c_1}^{n_1}` for `twists = [(c_1, n_1), ...]`.
    pub fn compose_with_twists(&self, twists: &[(CurveId, i64)]) -> Result<EndPeriodicMap> {
        if twists.is_empty() {
            return Ok(self.clone());
        }
        let pattern = self.pattern()?;
        for (c, _) in twists {
            let known = self.curves.iter().any(|t| &t.id == c) || pattern.curve(c).map(|x| x.is_internal()) == Some(true);
            if !known {
                return Err(Error::CurveOutsideWindow(c.clone()));
            }
        }
        let mut out = self.clone();
        let extra = twists.iter().rev().map(|(c, n)| Twist::new(c.clone(), *n));
        if out.iterate == 1 {
            out.word.extend(extra);
        } else {
            out.pre_word.extend(extra);
        }
        out.check()?;
        Ok(out)
    }

    /// Geodesic path from the pattern `P` to `f^-1(P)`, one Farey geodesic
    /// per twisted piece.
    pub fn canonical_path(&self) -> Result<MovePath> {
        if self.iterate > 1 {
            if !self.pre_word.is_empty() {
                return Err(Error::UnsupportedWindow("powers of maps with a pre-composed word".into()));
            }
            let single = EndPeriodicMap { iterate: 1, ..self.clone() };
            let path = single.canonical_path()?;
            return single.covering_path(&path, self.iterate);
        }
        let base = self.pattern()?;
        let target = self.act_inverse(&base)?;
        let mut moves = Vec::new();
        for host in self.hosts()? {
            let (from, to) = (base.slope(&host), target.slope(&host));
            let (Some(from), Some(to)) = (from, to) else {
                return Err(Error::CurveOutsideWindow(host));
            };
            let kind = base.complexity_one_piece(&host)?;
            for w in farey_geodesic(from, to).windows(2) {
                moves.push(ElementaryMove::new(host.clone(), kind, w[0], w[1]));
            }
        }
        let path = MovePath::new(base, moves);
        if path.endpoint()? != target {
            return Err(Error::PathEndpointMismatch);
        }
        Ok(path)
    }

    /// `f^-1` applied to every decomposition of `path`, as a move path.
    pub fn transport(&self, path: &MovePath) -> Result<MovePath> {
        let decs = path.decompositions()?;
        let images = decs.iter().map(|p| self.act_inverse(p)).collect::<Result<Vec<_>>>()?;
        let mut moves = Vec::with_capacity(path.moves.len());
        for (i, m) in path.moves.iter().enumerate() {
            let curve = shift_id(m.curve.as_str(), -(self.iterate as i64))
                .map(CurveId)
                .ok_or_else(|| Error::CurveOutsideWindow(m.curve.clone()))?;
            let old = images[i].slope(&curve).ok_or_else(|| Error::CurveOutsideWindow(curve.clone()))?;
            let new = images[i + 1].slope(&curve).ok_or_else(|| Error::CurveOutsideWindow(curve.clone()))?;
            let mv = ElementaryMove::new(curve, m.kind, old, new);
            if apply_move(&images[i], &mv)? != images[i + 1] {
                return Err(Error::SupportMismatch(format!(
                    "transported move {i} is not a single elementary move"
                )));
            }
            moves.push(mv);
        }
        Ok(MovePath::new(images[0].clone(), moves))
    }

    /// `path, f^-1(path), ..., f^-(n-1)(path)`: a path from `P` to
    /// `f^-n(P)` when `path` runs from `P` to `f^-1(P)`.
    pub fn covering_path(&self, path: &MovePath, n: u32) -> Result<MovePath> {
        let mut out = path.clone();
        let mut piece = path.clone();
        for _ in 1..n {
            piece = self.transport(&piece)?;
            out = out.concat(&piece)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn end_formulas() {
        assert_eq!(phi_star_norm(&EndBehavior::from_w(&[1, -1])), Ok(2));
        assert_eq!(phi_star_norm(&EndBehavior::from_w(&[2, -1, -1])), Ok(4));
        assert_eq!(
            phi_star_norm(&EndBehavior::from_w(&[1, 1])),
            Err(Error::UnbalancedEndBehavior(2))
        );
        let b = EndBehavior::from_w(&[3, -1, -2]);
        assert_eq!(quotient_genus(&b, "E2"), Ok(2));
        assert_eq!(quotient_genus(&b, "E1"), Ok(4));
        let z = EndBehavior::from_w(&[0, 0]);
        assert_eq!(quotient_genus(&z, "E1"), Err(Error::ZeroShiftEnd("E1".into())));
        let c = boundary_complexity(&EndBehavior::from_w(&[1, -1])).unwrap();
        assert_eq!((c.total, c.s_plus, c.s_minus), (6, 3, 3));
        assert_eq!(boundary_complexity(&EndBehavior::from_w(&[2, -1, -1])).unwrap().total, 12);
    }

    #[test]
    fn strip_counts_give_end_behavior() {
        let w = Ladder::window(2, 3, 1, 1);
        let s = HandleShiftSystem::parallel(2, "E2", "E1", 2);
        assert_eq!(s.end_behavior(&w).unwrap().w, vec![2, -2]);
        let bad = HandleShiftSystem::parallel(1, "E1", "E1", 2);
        assert!(matches!(bad.end_behavior(&w), Err(Error::InvalidStrips(_))));
    }

    #[test]
    fn twist_on_torus_host_then_shift() {
        let w = Ladder::window(2, 3, 1, 1);
        let f = EndPeriodicMap::new(
            w,
            HandleShiftSystem::parallel(2, "E2", "E1", 2),
            vec![TwistCurve { id: "alpha".into(), host: "m1.1".into(), slope: Slope::INFINITY }],
            vec![Twist::new("alpha", 1)],
        )
        .unwrap();
        let p = f.pattern().unwrap();
        let image = f.act(&p).unwrap();
        assert_eq!(image.slope(&"m2.1".into()), Some(Slope::integer(1)));
        assert_eq!(f.act_inverse(&image).unwrap(), p);
    }
}
