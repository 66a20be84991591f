//! Finite-type surface signatures, truncation windows and pants
//! decompositions stored as decorated trivalent graphs.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::slope::{Slope, Unimodular};

/// `(genus, number of punctures or boundary components)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSig {
    pub genus: u32,
    pub punctures_or_boundary: u32,
}

impl SurfaceSig {
    pub fn new(genus: u32, punctures_or_boundary: u32) -> Self {
        SurfaceSig { genus, punctures_or_boundary }
    }

    /// `3g - 3 + n`.
    pub fn complexity(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.punctures_or_boundary as i64
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures_or_boundary as i64
    }

    /// Spheres with fewer than three punctures and the closed torus carry no
    /// pants decomposition.
    pub fn admits_pants(&self) -> bool {
        match (self.genus, self.punctures_or_boundary) {
            (0, n) => n >= 3,
            (1, 0) => false,
            _ => true,
        }
    }

    /// Number of pairs of pants in any decomposition, `-χ`.
    pub fn pants_count(&self) -> i64 {
        -self.euler_characteristic()
    }
}

pub fn complexity(sig: SurfaceSig) -> i64 {
    sig.complexity()
}

/// Opaque, stable curve identifier.
///
/// Ordered "naturally": embedded signed integers compare numerically, so
/// ladder ids such as `c-1.2 < c0.2 < c10.2` keep their order under a
/// uniform shift of the layer index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurveId(pub String);

impl CurveId {
    pub fn new(s: impl Into<String>) -> Self {
        CurveId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for CurveId {
    fn from(s: &str) -> Self {
        CurveId(s.to_string())
    }
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Chunk<'a> {
    Num(i64),
    Text(&'a str),
}

fn natural_chunks(s: &str) -> Vec<Chunk<'_>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let signed = bytes[i] == b'-'
            && i + 1 < bytes.len()
            && bytes[i + 1].is_ascii_digit()
            && (i == 0 || bytes[i - 1].is_ascii_alphabetic());
        if bytes[i].is_ascii_digit() || signed {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            match s[start..i].parse::<i64>() {
                Ok(n) => out.push(Chunk::Num(n)),
                Err(_) => out.push(Chunk::Text(&s[start..i])),
            }
        } else {
            while i < bytes.len() {
                let next_signed = bytes[i] == b'-'
                    && i + 1 < bytes.len()
                    && bytes[i + 1].is_ascii_digit()
                    && i > 0
                    && bytes[i - 1].is_ascii_alphabetic();
                if bytes[i].is_ascii_digit() || (next_signed && i > start) {
                    break;
                }
                i += 1;
            }
            out.push(Chunk::Text(&s[start..i]));
        }
    }
    out
}

/// Natural string order used for curve and pant ids.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    natural_chunks(a).cmp(&natural_chunks(b)).then_with(|| a.cmp(b))
}

impl Ord for CurveId {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for CurveId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Attracting,
    Repelling,
    Unassigned,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndStub {
    pub id: String,
    pub orientation: Orientation,
    pub stub_depth: u32,
}

/// Compact truncation of the infinite-type surface: a core of the given
/// genus whose boundary curves cut off one neighbourhood per end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub genus: u32,
    pub ends: Vec<EndStub>,
}

impl Window {
    pub fn core(&self) -> SurfaceSig {
        SurfaceSig::new(self.genus, self.ends.len() as u32)
    }

    pub fn end(&self, id: &str) -> Option<&EndStub> {
        self.ends.iter().find(|e| e.id == id)
    }

    pub fn check(&self) -> Result<()> {
        if self.ends.len() < 2 {
            return Err(Error::Parse(format!(
                "a window needs at least two ends, got {}",
                self.ends.len()
            )));
        }
        let ids: BTreeSet<_> = self.ends.iter().map(|e| e.id.as_str()).collect();
        if ids.len() != self.ends.len() {
            return Err(Error::Parse("duplicate end ids".into()));
        }
        Ok(())
    }
}

/// A cuff slot of a pair of pants; `slot` is 0, 1 or 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotRef {
    pub pant: String,
    pub slot: u8,
}

impl SlotRef {
    pub fn new(pant: impl Into<String>, slot: u8) -> Self {
        SlotRef { pant: pant.into(), slot }
    }
}

impl fmt::Display for SlotRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.s{}", self.pant, self.slot + 1)
    }
}

impl std::str::FromStr for SlotRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<SlotRef> {
        let bad = || Error::Parse(format!("bad slot reference {s:?}, expected <pant>.s<1..3>"));
        let (pant, slot) = s.rsplit_once(".s").ok_or_else(bad)?;
        let slot: u8 = slot.parse().map_err(|_| bad())?;
        if pant.is_empty() || !(1..=3).contains(&slot) {
            return Err(bad());
        }
        Ok(SlotRef::new(pant, slot - 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Attachment {
    /// Ends 0 and 1 of an internal curve.
    Internal(SlotRef, SlotRef),
    /// A window-boundary curve cutting off the named end.
    WindowBoundary { end: String, at: SlotRef },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub id: CurveId,
    pub attachment: Attachment,
}

impl Curve {
    pub fn is_internal(&self) -> bool {
        matches!(self.attachment, Attachment::Internal(..))
    }
}

/// One side of a curve as seen from a pants slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub curve: CurveId,
    pub end: u8,
}

impl fmt::Display for HalfEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.curve, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PieceKind {
    /// One-holed torus: the curve is a self-loop on a single pant.
    T,
    /// Four-holed sphere: the curve joins two distinct pants.
    S,
}

impl fmt::Display for PieceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PieceKind::T => "T",
            PieceKind::S => "S",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownPant(SlotRef),
    SlotReuse { slot: SlotRef, curves: Vec<CurveId> },
    EmptySlot(SlotRef),
    DuplicateCurve(CurveId),
    DuplicatePant(String),
    WrongInternalCount { expected: i64, found: usize },
    WrongBoundaryCount { expected: usize, found: usize },
    WrongPantCount { expected: i64, found: usize },
    UnknownEnd(String),
    EndNotBounded(String),
    Disconnected { components: usize },
    SlopeOnBoundary(CurveId),
    SlopeOnUnknownCurve(CurveId),
    SlopeParityMismatch { curve: CurveId, slope: Slope },
    NoPantsDecomposition,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownPant(s) => write!(f, "unknown pant in slot {s}"),
            Violation::SlotReuse { slot, curves } => {
                let names: Vec<_> = curves.iter().map(|c| c.to_string()).collect();
                write!(f, "slot reuse: {slot} used by {}", names.join(", "))
            }
            Violation::EmptySlot(s) => write!(f, "empty slot {s}"),
            Violation::DuplicateCurve(c) => write!(f, "duplicate curve {c}"),
            Violation::DuplicatePant(p) => write!(f, "duplicate pant {p}"),
            Violation::WrongInternalCount { expected, found } => {
                write!(f, "wrong curve count: {found} internal curves, expected {expected}")
            }
            Violation::WrongBoundaryCount { expected, found } => {
                write!(f, "wrong curve count: {found} boundary curves, expected {expected}")
            }
            Violation::WrongPantCount { expected, found } => {
                write!(f, "wrong pant count: {found}, expected {expected}")
            }
            Violation::UnknownEnd(e) => write!(f, "boundary curve cuts off unknown end {e}"),
            Violation::EndNotBounded(e) => write!(f, "end {e} has no boundary curve"),
            Violation::Disconnected { components } => {
                write!(f, "disconnected dual graph ({components} components)")
            }
            Violation::SlopeOnBoundary(c) => write!(f, "slope recorded on boundary curve {c}"),
            Violation::SlopeOnUnknownCurve(c) => write!(f, "slope recorded on unknown curve {c}"),
            Violation::SlopeParityMismatch { curve, slope } => {
                write!(f, "slope {slope} of {curve} disagrees with its cuff grouping")
            }
            Violation::NoPantsDecomposition => write!(f, "window core admits no pants decomposition"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A pants decomposition of a window core.
///
/// Slopes are recorded for every internal curve, relative to a frame of its
/// complexity-one piece. For a four-holed-sphere piece the frame is the
/// naturally sorted list of its four cuff half-edges `x1 < x2 < x3 < x4`,
/// and the parity class of the slope names the cuff grouping:
/// `(0,1)` pairs `{x1,x2}`, `(1,0)` pairs `{x1,x3}`, `(1,1)` pairs `{x1,x4}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PantsDecomposition {
    pub pants: Vec<String>,
    pub curves: Vec<Curve>,
    pub slopes: BTreeMap<CurveId, Slope>,
}

fn union_find_root(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

impl PantsDecomposition {
    /// Builds a decomposition, filling absent slopes of internal curves
    /// with the canonical representative of their current cuff grouping.
    pub fn new(
        pants: Vec<String>,
        curves: Vec<Curve>,
        slopes: BTreeMap<CurveId, Slope>,
    ) -> PantsDecomposition {
        let mut pd = PantsDecomposition { pants, curves, slopes };
        pd.normalise_order();
        let internal: Vec<CurveId> = pd.internal_curves().cloned().collect();
        for c in internal {
            if !pd.slopes.contains_key(&c) {
                let s = pd.canonical_slope(&c).unwrap_or(Slope::ZERO);
                pd.slopes.insert(c, s);
            }
        }
        pd
    }

    pub(crate) fn normalise_order(&mut self) {
        self.pants.sort_by(|a, b| natural_cmp(a, b));
        self.curves.sort_by(|a, b| a.id.cmp(&b.id));
    }

    pub fn curve(&self, id: &CurveId) -> Option<&Curve> {
        self.curves.iter().find(|c| &c.id == id)
    }

    fn curve_mut(&mut self, id: &CurveId) -> Option<&mut Curve> {
        self.curves.iter_mut().find(|c| &c.id == id)
    }

    pub fn internal_curves(&self) -> impl Iterator<Item = &CurveId> {
        self.curves.iter().filter(|c| c.is_internal()).map(|c| &c.id)
    }

    pub fn boundary_curves(&self) -> impl Iterator<Item = (&CurveId, &str)> {
        self.curves.iter().filter_map(|c| match &c.attachment {
            Attachment::WindowBoundary { end, .. } => Some((&c.id, end.as_str())),
            _ => None,
        })
    }

    pub fn slope(&self, id: &CurveId) -> Option<Slope> {
        self.slopes.get(id).copied()
    }

    /// Slot occupancy. Slots claimed more than once keep every claimant.
    pub fn slot_occupants(&self) -> BTreeMap<SlotRef, Vec<HalfEdge>> {
        let mut map: BTreeMap<SlotRef, Vec<HalfEdge>> = BTreeMap::new();
        for c in &self.curves {
            match &c.attachment {
                Attachment::Internal(a, b) => {
                    map.entry(a.clone())
                        .or_default()
                        .push(HalfEdge { curve: c.id.clone(), end: 0 });
                    map.entry(b.clone())
                        .or_default()
                        .push(HalfEdge { curve: c.id.clone(), end: 1 });
                }
                Attachment::WindowBoundary { at, .. } => {
                    map.entry(at.clone())
                        .or_default()
                        .push(HalfEdge { curve: c.id.clone(), end: 0 });
                }
            }
        }
        map
    }

    fn occupant(&self, slot: &SlotRef) -> Option<HalfEdge> {
        for c in &self.curves {
            match &c.attachment {
                Attachment::Internal(a, b) => {
                    if a == slot {
                        return Some(HalfEdge { curve: c.id.clone(), end: 0 });
                    }
                    if b == slot {
                        return Some(HalfEdge { curve: c.id.clone(), end: 1 });
                    }
                }
                Attachment::WindowBoundary { at, .. } => {
                    if at == slot {
                        return Some(HalfEdge { curve: c.id.clone(), end: 0 });
                    }
                }
            }
        }
        None
    }

    /// Curves bounding the given pant, in slot order.
    pub fn pant_cuffs(&self, pant: &str) -> Vec<HalfEdge> {
        (0..3)
            .filter_map(|s| self.occupant(&SlotRef::new(pant, s)))
            .collect()
    }

    fn ends_of(&self, c: &CurveId) -> Result<(SlotRef, SlotRef)> {
        match &self.curve(c).ok_or_else(|| Error::UnknownCurve(c.clone()))?.attachment {
            Attachment::Internal(a, b) => Ok((a.clone(), b.clone())),
            Attachment::WindowBoundary { .. } => Err(Error::CurveNotInternal(c.clone())),
        }
    }

    /// Kind of the complexity-one piece obtained by deleting `c`.
    pub fn complexity_one_piece(&self, c: &CurveId) -> Result<PieceKind> {
        let (a, b) = self.ends_of(c)?;
        Ok(if a.pant == b.pant { PieceKind::T } else { PieceKind::S })
    }

    /// Pants of the piece around `c`: one for a torus piece, two (the pant
    /// at end 0 first) for a sphere piece.
    pub fn piece_pants(&self, c: &CurveId) -> Result<Vec<String>> {
        let (a, b) = self.ends_of(c)?;
        if a.pant == b.pant {
            Ok(vec![a.pant])
        } else {
            Ok(vec![a.pant, b.pant])
        }
    }

    /// Cuff half-edges of the piece around `c`, naturally sorted.
    pub fn piece_cuffs(&self, c: &CurveId) -> Result<Vec<HalfEdge>> {
        let mut cuffs = Vec::new();
        for pant in self.piece_pants(c)? {
            for h in self.pant_cuffs(&pant) {
                if &h.curve != c {
                    cuffs.push(h);
                }
            }
        }
        cuffs.sort();
        Ok(cuffs)
    }

    /// Parity class implied by the current cuff grouping of a sphere piece.
    fn grouping_parity(&self, c: &CurveId) -> Result<Option<(u8, u8)>> {
        if self.complexity_one_piece(c)? == PieceKind::T {
            return Ok(None);
        }
        let cuffs = self.piece_cuffs(c)?;
        if cuffs.len() != 4 {
            return Ok(None);
        }
        let pants = self.piece_pants(c)?;
        let with_first = pants
            .iter()
            .find(|p| self.pant_cuffs(p).contains(&cuffs[0]))
            .cloned();
        let Some(with_first) = with_first else {
            return Ok(None);
        };
        let group = self.pant_cuffs(&with_first);
        let partner = (1..4).find(|&i| group.contains(&cuffs[i]));
        Ok(partner.map(|i| match i {
            1 => (0, 1),
            2 => (1, 0),
            _ => (1, 1),
        }))
    }

    /// Canonical slope of the current grouping (`0/1` for torus pieces).
    pub fn canonical_slope(&self, c: &CurveId) -> Result<Slope> {
        Ok(self
            .grouping_parity(c)?
            .map(Slope::parity_representative)
            .unwrap_or(Slope::ZERO))
    }

    /// Replaces the curve in the piece of `c` by the one of slope `new`.
    ///
    /// For sphere pieces the two pants around `c` are rewired to the cuff
    /// grouping named by the parity of `new`; the pant holding the smallest
    /// cuff keeps it and at most one pair of cuffs trades slots. A
    /// neighbouring curve whose grouping changes keeps its curve but is
    /// re-expressed in its new frame by `R_new * R_old^-1`, see
    /// [`Unimodular::parity_frame`].
    pub(crate) fn set_slope(&mut self, c: &CurveId, new: Slope) -> Result<()> {
        let kind = self.complexity_one_piece(c)?;
        if kind == PieceKind::T {
            self.slopes.insert(c.clone(), new);
            return Ok(());
        }
        let neighbours: Vec<(CurveId, Option<(u8, u8)>)> = self
            .piece_cuffs(c)?
            .into_iter()
            .map(|h| h.curve)
            .filter(|e| e != c && self.curve(e).map(|x| x.is_internal()).unwrap_or(false))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|e| {
                let g = self.grouping_parity(&e).ok().flatten();
                (e, g)
            })
            .collect();
        self.regroup(c, new.parity())?;
        self.slopes.insert(c.clone(), new);
        for (e, old) in neighbours {
            let now = self.grouping_parity(&e)?;
            if let (Some(old), Some(now)) = (old, now) {
                if old != now {
                    let m = Unimodular::parity_frame(now)
                        .compose(&Unimodular::parity_frame(old).inverse());
                    if let Some(s) = self.slopes.get_mut(&e) {
                        *s = m.apply(*s);
                    }
                }
            }
        }
        Ok(())
    }

    fn regroup(&mut self, c: &CurveId, parity: (u8, u8)) -> Result<()> {
        let cuffs = self.piece_cuffs(c)?;
        if cuffs.len() != 4 {
            return Err(Error::MoveNotApplicable {
                curve: c.clone(),
                reason: "sphere piece without four cuffs".into(),
            });
        }
        let partner = match parity {
            (0, 1) => 1,
            (1, 0) => 2,
            _ => 3,
        };
        let pants = self.piece_pants(c)?;
        let holder = pants
            .iter()
            .find(|p| self.pant_cuffs(p).contains(&cuffs[0]))
            .cloned()
            .expect("smallest cuff lies in the piece");
        let in_holder = self.pant_cuffs(&holder);
        let outgoing = (1..4).find(|&i| i != partner && in_holder.contains(&cuffs[i]));
        let Some(outgoing) = outgoing else {
            return Ok(());
        };
        let a = cuffs[outgoing].clone();
        let b = cuffs[partner].clone();
        let slot_a = self.slot_of(&a).expect("cuff is attached");
        let slot_b = self.slot_of(&b).expect("cuff is attached");
        self.attach(&a, slot_b);
        self.attach(&b, slot_a);
        Ok(())
    }

    fn slot_of(&self, h: &HalfEdge) -> Option<SlotRef> {
        match &self.curve(&h.curve)?.attachment {
            Attachment::Internal(a, b) => Some(if h.end == 0 { a.clone() } else { b.clone() }),
            Attachment::WindowBoundary { at, .. } => Some(at.clone()),
        }
    }

    fn attach(&mut self, h: &HalfEdge, slot: SlotRef) {
        let curve = self.curve_mut(&h.curve).expect("cuff curve exists");
        match &mut curve.attachment {
            Attachment::Internal(a, b) => {
                if h.end == 0 {
                    *a = slot;
                } else {
                    *b = slot;
                }
            }
            Attachment::WindowBoundary { at, .. } => *at = slot,
        }
    }

    pub fn validate(&self, window: &Window) -> ValidationReport {
        validate_pants(self, window)
    }
}

/// Checks every structural invariant of `pd` against the window.
pub fn validate_pants(pd: &PantsDecomposition, window: &Window) -> ValidationReport {
    let mut violations = Vec::new();
    let core = window.core();
    if !core.admits_pants() {
        violations.push(Violation::NoPantsDecomposition);
    }

    let mut seen_pants = BTreeSet::new();
    for p in &pd.pants {
        if !seen_pants.insert(p.as_str()) {
            violations.push(Violation::DuplicatePant(p.clone()));
        }
    }
    let mut seen_curves = BTreeSet::new();
    for c in &pd.curves {
        if !seen_curves.insert(&c.id) {
            violations.push(Violation::DuplicateCurve(c.id.clone()));
        }
    }

    let occupants = pd.slot_occupants();
    for (slot, users) in &occupants {
        if !seen_pants.contains(slot.pant.as_str()) || slot.slot > 2 {
            violations.push(Violation::UnknownPant(slot.clone()));
        }
        if users.len() > 1 {
            violations.push(Violation::SlotReuse {
                slot: slot.clone(),
                curves: users.iter().map(|h| h.curve.clone()).collect(),
            });
        }
    }
    for p in &pd.pants {
        for s in 0..3 {
            let slot = SlotRef::new(p.as_str(), s);
            if !occupants.contains_key(&slot) {
                violations.push(Violation::EmptySlot(slot));
            }
        }
    }

    let internal = pd.internal_curves().count();
    let expected_internal = core.complexity();
    if internal as i64 != expected_internal {
        violations.push(Violation::WrongInternalCount { expected: expected_internal, found: internal });
    }
    let boundary: Vec<_> = pd.boundary_curves().collect();
    if boundary.len() != window.ends.len() {
        violations.push(Violation::WrongBoundaryCount {
            expected: window.ends.len(),
            found: boundary.len(),
        });
    }
    if pd.pants.len() as i64 != core.pants_count() {
        violations.push(Violation::WrongPantCount {
            expected: core.pants_count(),
            found: pd.pants.len(),
        });
    }
    for (_, end) in &boundary {
        if window.end(end).is_none() {
            violations.push(Violation::UnknownEnd(end.to_string()));
        }
    }
    for e in &window.ends {
        if !boundary.iter().any(|(_, end)| *end == e.id) {
            violations.push(Violation::EndNotBounded(e.id.clone()));
        }
    }

    let index: BTreeMap<&str, usize> =
        pd.pants.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
    let mut parent: Vec<usize> = (0..pd.pants.len()).collect();
    for c in &pd.curves {
        if let Attachment::Internal(a, b) = &c.attachment {
            if let (Some(&i), Some(&j)) = (index.get(a.pant.as_str()), index.get(b.pant.as_str())) {
                let (ri, rj) = (union_find_root(&mut parent, i), union_find_root(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let components: BTreeSet<usize> =
        (0..pd.pants.len()).map(|i| union_find_root(&mut parent, i)).collect();
    if components.len() > 1 {
        violations.push(Violation::Disconnected { components: components.len() });
    }

    for (c, s) in &pd.slopes {
        match pd.curve(c) {
            None => violations.push(Violation::SlopeOnUnknownCurve(c.clone())),
            Some(curve) if !curve.is_internal() => violations.push(Violation::SlopeOnBoundary(c.clone())),
            Some(_) => {
                let structural_ok = violations.is_empty();
                if structural_ok {
                    if let Ok(Some(parity)) = pd.grouping_parity(c) {
                        if s.parity() != parity {
                            violations.push(Violation::SlopeParityMismatch { curve: c.clone(), slope: *s });
                        }
                    }
                }
            }
        }
    }

    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(genus: u32, ends: usize) -> Window {
        Window {
            genus,
            ends: (0..ends)
                .map(|i| EndStub {
                    id: format!("E{}", i + 1),
                    orientation: Orientation::Unassigned,
                    stub_depth: 0,
                })
                .collect(),
        }
    }

    fn internal(id: &str, a: (&str, u8), b: (&str, u8)) -> Curve {
        Curve {
            id: id.into(),
            attachment: Attachment::Internal(SlotRef::new(a.0, a.1), SlotRef::new(b.0, b.1)),
        }
    }

    fn boundary(id: &str, end: &str, at: (&str, u8)) -> Curve {
        Curve {
            id: id.into(),
            attachment: Attachment::WindowBoundary { end: end.into(), at: SlotRef::new(at.0, at.1) },
        }
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(complexity(SurfaceSig::new(1, 1)), 1);
        assert_eq!(complexity(SurfaceSig::new(0, 3)), 0);
        assert_eq!(complexity(SurfaceSig::new(2, 0)), 3);
        assert!(!SurfaceSig::new(1, 0).admits_pants());
        assert!(!SurfaceSig::new(0, 2).admits_pants());
    }

    #[test]
    fn natural_order_is_shift_stable() {
        let ids = ["c-2.1", "c-1.1", "c0.1", "c2.1", "c10.1"];
        for w in ids.windows(2) {
            assert!(CurveId::from(w[0]) < CurveId::from(w[1]), "{} < {}", w[0], w[1]);
        }
        assert!(CurveId::from("a2") < CurveId::from("a10"));
    }

    #[test]
    fn one_holed_torus_window_is_valid() {
        let pd = PantsDecomposition::new(
            vec!["p".into()],
            vec![internal("c", ("p", 0), ("p", 1)), boundary("v", "E1", ("p", 2))],
            BTreeMap::new(),
        );
        let mut w = window(1, 1);
        // single-end windows are only used for local checks
        w.ends.truncate(1);
        assert!(validate_pants(&pd, &w).is_ok(), "{:?}", validate_pants(&pd, &w));
        assert_eq!(pd.complexity_one_piece(&"c".into()).unwrap(), PieceKind::T);
        assert_eq!(
            pd.complexity_one_piece(&"v".into()),
            Err(Error::CurveNotInternal("v".into()))
        );
    }

    #[test]
    fn closed_genus_two_theta_graph_is_valid() {
        let pd = PantsDecomposition::new(
            vec!["a".into(), "b".into()],
            vec![
                internal("x", ("a", 0), ("b", 0)),
                internal("y", ("a", 1), ("b", 1)),
                internal("z", ("a", 2), ("b", 2)),
            ],
            BTreeMap::new(),
        );
        let w = Window { genus: 2, ends: vec![] };
        let report = validate_pants(&pd, &w);
        assert!(report.is_ok(), "{report:?}");
        assert_eq!(pd.complexity_one_piece(&"x".into()).unwrap(), PieceKind::S);
    }

    #[test]
    fn slot_reuse_is_reported() {
        let pd = PantsDecomposition::new(
            vec!["p".into()],
            vec![
                internal("c", ("p", 0), ("p", 1)),
                boundary("v", "E1", ("p", 1)),
            ],
            BTreeMap::new(),
        );
        let w = Window { genus: 1, ends: window(1, 1).ends };
        let report = validate_pants(&pd, &w);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::SlotReuse { .. })));
        assert!(report.violations.iter().any(|v| v.to_string().starts_with("slot reuse")));
    }

    #[test]
    fn disconnected_graph_is_reported() {
        // two one-holed tori that never meet
        let pd = PantsDecomposition::new(
            vec!["a".into(), "b".into()],
            vec![
                internal("x", ("a", 0), ("a", 1)),
                internal("y", ("b", 0), ("b", 1)),
                boundary("u", "E1", ("a", 2)),
                boundary("v", "E2", ("b", 2)),
            ],
            BTreeMap::new(),
        );
        let w = window(2, 2);
        let report = validate_pants(&pd, &w);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Disconnected { components: 2 })));
    }

    #[test]
    fn regroup_follows_parity() {
        // four-holed sphere window: two pants joined by c
        let mut pd = PantsDecomposition::new(
            vec!["a".into(), "b".into()],
            vec![
                internal("c", ("a", 0), ("b", 0)),
                boundary("w1", "E1", ("a", 1)),
                boundary("w2", "E2", ("a", 2)),
                boundary("w3", "E3", ("b", 1)),
                boundary("w4", "E4", ("b", 2)),
            ],
            BTreeMap::new(),
        );
        let c: CurveId = "c".into();
        assert_eq!(pd.slope(&c), Some(Slope::ZERO));
        pd.set_slope(&c, Slope::INFINITY).unwrap();
        let a: BTreeSet<_> = pd.pant_cuffs("a").into_iter().map(|h| h.curve.0).collect();
        assert!(a.contains("w1") && a.contains("w3"));
        pd.set_slope(&c, Slope::new(1, 1).unwrap()).unwrap();
        let a: BTreeSet<_> = pd.pant_cuffs("a").into_iter().map(|h| h.curve.0).collect();
        assert!(a.contains("w1") && a.contains("w4"));
        let w = window(0, 4);
        assert!(validate_pants(&pd, &w).is_ok());
    }
}
