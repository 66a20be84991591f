//! Block decomposition of the drilled, compactified mapping torus built
//! from a move path `P = P_0, ..., P_n = f^-1(P)`.
//!
//! A curve state is a pair (position, level): the pants curve sitting at a
//! ladder position in `P_level`. Going up a level keeps the curve unless
//! the move at that level replaces it (the curve flips forward); passing
//! level `n` glues back to level 0 through `f`, which moves positions up by
//! the shift. Pants faces are traced the same way.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::bounds::HyperbolicConstants;
use crate::end_periodic::{EndPeriodicMap, Side};
use crate::error::{Error, Result};
use crate::ladder::{make_id, parse_id, shift_id, Ladder};
use crate::moves::MovePath;
use crate::slope::Slope;
use crate::surface::{
    natural_cmp, Attachment, Curve, CurveId, PantsDecomposition, PieceKind, SlotRef, Window,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaceSide {
    Minus,
    Plus,
}

impl fmt::Display for FaceSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaceSide::Minus => "minus",
            FaceSide::Plus => "plus",
        })
    }
}

/// `level.side.idx`; faces of a block are its pants, sorted naturally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceId {
    pub level: usize,
    pub side: FaceSide,
    pub idx: usize,
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.level, self.side, self.idx)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GlueTarget {
    Face(FaceId),
    /// A pair of pants of `S_+` or `S_-`.
    Boundary { side: Side, pants: String },
}

impl fmt::Display for GlueTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GlueTarget::Face(x) => write!(f, "{x}"),
            GlueTarget::Boundary { side, pants } => write!(f, "boundary.{side}.{pants}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PantsBlock {
    pub level: usize,
    pub kind: PieceKind,
    pub curve: CurveId,
    /// The curve removed by the move, `alpha_k^-`.
    pub d1_minus: (CurveId, Slope),
    /// The curve added by the move, `alpha_k^+`.
    pub d1_plus: (CurveId, Slope),
    /// Cuffs of the complexity-one piece.
    pub d1_v: Vec<CurveId>,
    pub d2_minus: Vec<FaceId>,
    pub d2_plus: Vec<FaceId>,
    /// Pants behind the faces, in face order.
    pub pants_minus: Vec<String>,
    pub pants_plus: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AnnulusEnd {
    Block { level: usize, side: FaceSide },
    Boundary { side: Side, curve: String },
}

impl fmt::Display for AnnulusEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnnulusEnd::Block { level, side } => write!(f, "{level}.{side}"),
            AnnulusEnd::Boundary { side, curve } => write!(f, "boundary.{side}.{curve}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnulusRecord {
    pub id: usize,
    /// States `(level, position)` swept by the annulus.
    pub curve_orbit: Vec<(usize, CurveId)>,
    pub lower: AnnulusEnd,
    pub upper: AnnulusEnd,
    pub degenerate: bool,
}

impl AnnulusRecord {
    pub fn is_block_attached(&self) -> bool {
        matches!(self.lower, AnnulusEnd::Block { .. }) || matches!(self.upper, AnnulusEnd::Block { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fate {
    /// Flips at the move of this level after `steps` level changes.
    Flip { level: usize, steps: usize },
    Escape { side: Side, steps: usize },
}

/// Forward and backward fate of every curve state of the path.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlipTable {
    pub forward: BTreeMap<(usize, CurveId), Fate>,
    pub backward: BTreeMap<(usize, CurveId), Fate>,
    pub step_bound: usize,
}

/// The boundary pants decomposition on `S_+` and `S_-`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPants {
    pub plus: PantsDecomposition,
    pub minus: PantsDecomposition,
}

impl BoundaryPants {
    pub fn curve_count(&self) -> usize {
        self.plus.curves.len() + self.minus.curves.len()
    }

    pub fn pants_count(&self) -> usize {
        self.plus.pants.len() + self.minus.pants.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockComplex {
    pub blocks: Vec<PantsBlock>,
    pub gluings: BTreeMap<FaceId, GlueTarget>,
    pub annuli: Vec<AnnulusRecord>,
    pub boundary_pants: BoundaryPants,
    /// Shift of positions across the seam.
    pub period: u32,
}

impl BlockComplex {
    pub fn n_t(&self) -> usize {
        self.blocks.iter().filter(|b| b.kind == PieceKind::T).count()
    }

    pub fn n_s(&self) -> usize {
        self.blocks.iter().filter(|b| b.kind == PieceKind::S).count()
    }
}

/// Ladder class of a position, `prefix.column`.
fn class_of(id: &str) -> Result<(String, i64)> {
    let (prefix, layer, column) =
        parse_id(id).ok_or_else(|| Error::SupportMismatch(format!("{id} is not a ladder id")))?;
    Ok((format!("{prefix}.{column}"), layer))
}

fn residue_label(end: &str, id: &str, period: u32) -> Result<String> {
    let (class, layer) = class_of(id)?;
    Ok(format!("{end}.{class}.{}", layer.rem_euclid(period as i64)))
}

struct Tracer {
    ladder: Ladder,
    period: i64,
    moves: Vec<CurveId>,
    bottom_faces: Vec<Vec<String>>,
    top_faces: Vec<Vec<String>>,
    min_layer: i64,
    max_layer: i64,
    bound: usize,
}

impl Tracer {
    fn n(&self) -> usize {
        self.moves.len()
    }

    fn layer(id: &str) -> i64 {
        parse_id(id).map(|x| x.1).unwrap_or(0)
    }

    /// Forward walk of the curve at `(level, x)`; returns its fate and the
    /// states it sweeps.
    fn forward(&self, mut level: usize, mut x: String) -> Result<(Fate, Vec<(usize, CurveId)>)> {
        let start = x.clone();
        let mut steps = 0;
        let mut orbit = Vec::new();
        loop {
            if level == self.n() {
                x = shift_id(&x, self.period).expect("ladder id");
                level = 0;
            }
            if Self::layer(&x) > self.max_layer {
                return Ok((Fate::Escape { side: Side::Plus, steps }, orbit));
            }
            orbit.push((level, CurveId(x.clone())));
            if self.moves[level].as_str() == x {
                return Ok((Fate::Flip { level, steps }, orbit));
            }
            level += 1;
            steps += 1;
            if steps > self.bound {
                return Err(Error::NonTerminatingOrbit {
                    curve: CurveId(start),
                    reason: format!("no flip or escape within {} steps", self.bound),
                });
            }
        }
    }

    fn backward(&self, mut level: usize, mut x: String) -> Result<Fate> {
        let start = x.clone();
        let mut steps = 0;
        loop {
            if level == 0 {
                x = shift_id(&x, -self.period).expect("ladder id");
                level = self.n();
            }
            if Self::layer(&x) < self.min_layer {
                return Ok(Fate::Escape { side: Side::Minus, steps });
            }
            if self.moves[level - 1].as_str() == x {
                return Ok(Fate::Flip { level: level - 1, steps });
            }
            level -= 1;
            steps += 1;
            if steps > self.bound {
                return Err(Error::NonTerminatingOrbit {
                    curve: CurveId(start),
                    reason: format!("no flip or escape within {} steps", self.bound),
                });
            }
        }
    }

    /// Forward walk of a pant; the bottom face it reaches or its label on
    /// `S_+`.
    fn face_forward(&self, mut level: usize, mut pant: String) -> Result<GlueTarget> {
        let mut steps = 0;
        loop {
            if level == self.n() {
                pant = shift_id(&pant, self.period).expect("ladder id");
                level = 0;
            }
            if Self::layer(&pant) >= self.max_layer + 2 {
                let label = residue_label(&self.ladder.attracting, &pant, self.period as u32)?;
                return Ok(GlueTarget::Boundary { side: Side::Plus, pants: label });
            }
            if let Some(idx) = self.bottom_faces[level].iter().position(|p| *p == pant) {
                return Ok(GlueTarget::Face(FaceId { level, side: FaceSide::Minus, idx }));
            }
            level += 1;
            steps += 1;
            if steps > self.bound {
                return Err(Error::NonTerminatingOrbit {
                    curve: CurveId(pant),
                    reason: "pants face never reaches a block".into(),
                });
            }
        }
    }

    fn face_backward(&self, mut level: usize, mut pant: String) -> Result<GlueTarget> {
        let mut steps = 0;
        loop {
            if level == 0 {
                pant = shift_id(&pant, -self.period).expect("ladder id");
                level = self.n();
            }
            if Self::layer(&pant) < self.min_layer {
                let label = residue_label(&self.ladder.repelling, &pant, self.period as u32)?;
                return Ok(GlueTarget::Boundary { side: Side::Minus, pants: label });
            }
            if let Some(idx) = self.top_faces[level - 1].iter().position(|p| *p == pant) {
                return Ok(GlueTarget::Face(FaceId { level: level - 1, side: FaceSide::Plus, idx }));
            }
            level -= 1;
            steps += 1;
            if steps > self.bound {
                return Err(Error::NonTerminatingOrbit {
                    curve: CurveId(pant),
                    reason: "pants face never reaches a block".into(),
                });
            }
        }
    }
}

fn sorted_pants(mut v: Vec<String>) -> Vec<String> {
    v.sort_by(|a, b| natural_cmp(a, b));
    v
}

fn tracer(f: &EndPeriodicMap, path: &MovePath, decs: &[PantsDecomposition]) -> Result<Tracer> {
    let ladder = f.ladder()?;
    if path.is_empty() {
        return Err(Error::NonTerminatingOrbit {
            curve: CurveId(ladder.bottom_boundary()),
            reason: "empty path: f fixes P, every pants curve lies on an invariant line".into(),
        });
    }
    let target = f.act_inverse(&path.base)?;
    if decs.last() != Some(&target) {
        return Err(Error::PathEndpointMismatch);
    }
    let moves: Vec<CurveId> = path.moves.iter().map(|m| m.curve.clone()).collect();
    let mut bottom_faces = Vec::new();
    let mut top_faces = Vec::new();
    for (j, x) in moves.iter().enumerate() {
        bottom_faces.push(sorted_pants(decs[j].piece_pants(x)?));
        top_faces.push(sorted_pants(decs[j + 1].piece_pants(x)?));
    }
    let layers: Vec<i64> = moves.iter().map(|m| Tracer::layer(m.as_str())).collect();
    let n = moves.len();
    let curves = path.base.curves.len();
    let stub = f.window.ends.iter().map(|e| e.stub_depth as usize).max().unwrap_or(0);
    Ok(Tracer {
        ladder,
        period: f.iterate as i64,
        bound: n * curves + stub * n,
        min_layer: *layers.iter().min().expect("nonempty"),
        max_layer: *layers.iter().max().expect("nonempty"),
        moves,
        bottom_faces,
        top_faces,
    })
}

/// Fate of every pants curve of every `P_k`. Fails with
/// `NonTerminatingOrbit` when some curve neither flips forward nor
/// backward: such a curve lies on an `f`-invariant line of curves, so `f`
/// is reducible.
pub fn trace_flips(f: &EndPeriodicMap, path: &MovePath) -> Result<FlipTable> {
    let decs = path.decompositions()?;
    let t = tracer(f, path, &decs)?;
    let mut table = FlipTable { step_bound: t.bound, ..Default::default() };
    for (level, pd) in decs.iter().enumerate() {
        for x in pd.internal_curves() {
            let (fwd, _) = t.forward(level, x.0.clone())?;
            let back = t.backward(level, x.0.clone())?;
            if matches!(fwd, Fate::Escape { .. }) && matches!(back, Fate::Escape { .. }) {
                return Err(Error::NonTerminatingOrbit {
                    curve: x.clone(),
                    reason: "never flips: escapes to both S+ and S- (reducing line)".into(),
                });
            }
            table.forward.insert((level, x.clone()), fwd);
            table.backward.insert((level, x.clone()), back);
        }
    }
    Ok(table)
}

/// Builds the block complex of the path.
pub fn build_blocks(f: &EndPeriodicMap, path: &MovePath) -> Result<BlockComplex> {
    trace_flips(f, path)?;
    let decs = path.decompositions()?;
    let t = tracer(f, path, &decs)?;
    let n = t.n();

    let mut blocks = Vec::with_capacity(n);
    for (j, m) in path.moves.iter().enumerate() {
        let kind = decs[j].complexity_one_piece(&m.curve)?;
        let d1_v: Vec<CurveId> = decs[j]
            .piece_cuffs(&m.curve)?
            .into_iter()
            .map(|h| h.curve)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let face = |side, idx| FaceId { level: j, side, idx };
        blocks.push(PantsBlock {
            level: j,
            kind,
            curve: m.curve.clone(),
            d1_minus: (m.curve.clone(), m.old_slope),
            d1_plus: (m.curve.clone(), m.new_slope),
            d1_v,
            d2_minus: (0..t.bottom_faces[j].len()).map(|i| face(FaceSide::Minus, i)).collect(),
            d2_plus: (0..t.top_faces[j].len()).map(|i| face(FaceSide::Plus, i)).collect(),
            pants_minus: t.bottom_faces[j].clone(),
            pants_plus: t.top_faces[j].clone(),
        });
    }

    let mut gluings = BTreeMap::new();
    let mut reached = BTreeSet::new();
    for b in &blocks {
        for (idx, pant) in b.pants_plus.iter().enumerate() {
            let target = t.face_forward(b.level + 1, pant.clone())?;
            if let GlueTarget::Face(g) = &target {
                if !reached.insert(*g) {
                    return Err(Error::SupportMismatch(format!("face {g} glued twice")));
                }
            }
            gluings.insert(FaceId { level: b.level, side: FaceSide::Plus, idx }, target);
        }
    }
    for b in &blocks {
        for (idx, pant) in b.pants_minus.iter().enumerate() {
            let id = FaceId { level: b.level, side: FaceSide::Minus, idx };
            if reached.contains(&id) {
                continue;
            }
            let target = t.face_backward(b.level, pant.clone())?;
            if !matches!(target, GlueTarget::Boundary { side: Side::Minus, .. }) {
                return Err(Error::SupportMismatch(format!("face {id} is not matched")));
            }
            gluings.insert(id, target);
        }
    }

    let mut annuli = Vec::new();
    for b in &blocks {
        let (fate, orbit) = t.forward(b.level + 1, b.curve.0.clone())?;
        let (upper, degenerate) = match fate {
            Fate::Flip { level, steps } => (AnnulusEnd::Block { level, side: FaceSide::Minus }, steps == 0),
            Fate::Escape { .. } => {
                let x = escape_state(&t, b.level + 1, &b.curve.0);
                (AnnulusEnd::Boundary { side: Side::Plus, curve: residue_label(&t.ladder.attracting, &x, t.period as u32)? }, false)
            }
        };
        annuli.push(AnnulusRecord {
            id: 0,
            curve_orbit: orbit,
            lower: AnnulusEnd::Block { level: b.level, side: FaceSide::Plus },
            upper,
            degenerate,
        });
    }
    // lines of curves coming up from S_-, one per position class and residue
    let mut classes = BTreeMap::new();
    for (id, ..) in t.ladder.layer_curves(0) {
        let (class, _) = class_of(&id)?;
        let (prefix, _, column) = parse_id(&id).expect("ladder id");
        classes.insert(class, (prefix.to_string(), column));
    }
    for (_, (prefix, column)) in classes {
        for r in 0..t.period {
            let x = make_id(&prefix, t.min_layer - t.period + r, column);
            let label = residue_label(&t.ladder.repelling, &x, t.period as u32)?;
            let (fate, orbit) = t.forward(0, x.clone())?;
            let upper = match fate {
                Fate::Flip { level, .. } => AnnulusEnd::Block { level, side: FaceSide::Minus },
                Fate::Escape { .. } => {
                    return Err(Error::NonTerminatingOrbit {
                        curve: CurveId(x),
                        reason: "never flips: escapes to both S+ and S- (reducing line)".into(),
                    })
                }
            };
            annuli.push(AnnulusRecord {
                id: 0,
                curve_orbit: orbit,
                lower: AnnulusEnd::Boundary { side: Side::Minus, curve: label },
                upper,
                degenerate: false,
            });
        }
    }
    for (i, a) in annuli.iter_mut().enumerate() {
        a.id = i;
    }

    let boundary_pants = boundary_pants(&t, &gluings)?;
    Ok(BlockComplex { blocks, gluings, annuli, boundary_pants, period: f.iterate })
}

/// The first state above every moved layer on the forward walk.
fn escape_state(t: &Tracer, mut level: usize, x: &str) -> String {
    let mut x = x.to_string();
    loop {
        if level == t.n() {
            x = shift_id(&x, t.period).expect("ladder id");
            level = 0;
        }
        if Tracer::layer(&x) > t.max_layer {
            return x;
        }
        level += 1;
    }
}

/// Pants of `S_+` and `S_-`: the faces escaping to either side, with cuffs
/// read from the periodic pattern there.
fn boundary_pants(t: &Tracer, gluings: &BTreeMap<FaceId, GlueTarget>) -> Result<BoundaryPants> {
    let period = t.period as u32;
    let side_pd = |side: Side| -> Result<PantsDecomposition> {
        let (end, layer) = match side {
            Side::Plus => (&t.ladder.attracting, t.max_layer + 2),
            Side::Minus => (&t.ladder.repelling, t.min_layer - t.period),
        };
        let mut pants = Vec::new();
        let mut ends: BTreeMap<String, Vec<SlotRef>> = BTreeMap::new();
        for l in layer..layer + t.period {
            for pant in t.ladder.layer_pants(l) {
                let label = residue_label(end, &pant, period)?;
                for d in [l - 1, l, l + 1] {
                    for (id, a, b) in t.ladder.layer_curves(d) {
                        for s in [&a, &b] {
                            if s.pant == pant {
                                let curve = residue_label(end, &id, period)?;
                                ends.entry(curve).or_default().push(SlotRef::new(label.clone(), s.slot));
                            }
                        }
                    }
                }
                pants.push(label);
            }
        }
        let curves = ends
            .into_iter()
            .map(|(id, mut slots)| {
                slots.sort();
                if slots.len() != 2 {
                    return Err(Error::SupportMismatch(format!("boundary curve {id} bounds {} slots", slots.len())));
                }
                Ok(Curve { id: CurveId(id), attachment: Attachment::Internal(slots[0].clone(), slots[1].clone()) })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut pd = PantsDecomposition { pants, curves, slopes: BTreeMap::new() };
        pd.normalise_order();
        Ok(pd)
    };
    let plus = side_pd(Side::Plus)?;
    let minus = side_pd(Side::Minus)?;
    for (side, pd) in [(Side::Plus, &plus), (Side::Minus, &minus)] {
        let glued: BTreeSet<&String> = gluings
            .values()
            .filter_map(|g| match g {
                GlueTarget::Boundary { side: s, pants } if *s == side => Some(pants),
                _ => None,
            })
            .collect();
        let all: BTreeSet<&String> = pd.pants.iter().collect();
        if glued != all {
            return Err(Error::SupportMismatch(format!("faces glued to {side} do not match its pants")));
        }
    }
    Ok(BoundaryPants { plus, minus })
}

impl BoundaryPants {
    /// Genus-`g` closed window used to validate one side.
    pub fn closed_window(pd: &PantsDecomposition) -> Window {
        let genus = (pd.pants.len() as u32 + 2) / 2;
        Window { genus, ends: Vec::new() }
    }
}

/// Number of link components, one per annulus.
pub fn link_components(bc: &BlockComplex) -> usize {
    bc.annuli.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrilledVolume {
    /// Integer multiple of `V_oct`, `n_T + 2 n_S`.
    pub voct_coeff: u64,
    pub value: f64,
}

/// Volume of the drilled manifold, one regular ideal octahedron per unit
/// of path weight.
pub fn drilled_volume(bc: &BlockComplex, constants: &HyperbolicConstants) -> DrilledVolume {
    let coeff = (bc.n_t() + 2 * bc.n_s()) as u64;
    DrilledVolume { voct_coeff: coeff, value: coeff as f64 * constants.v_oct }
}

/// Deterministic text form of the complex.
pub fn export_gluing(bc: &BlockComplex) -> String {
    let mut out = String::from("# panto gluing 1\n");
    for b in &bc.blocks {
        writeln!(out, "block {} {} {} {}", b.level, b.kind, b.d1_minus.1, b.d1_plus.1).unwrap();
    }
    for (face, target) in &bc.gluings {
        writeln!(out, "glue {face} {target}").unwrap();
    }
    for a in &bc.annuli {
        writeln!(out, "annulus {} {} {} {}", a.id, a.lower, a.upper, a.degenerate).unwrap();
    }
    out
}

/// Graphviz digraph of blocks, boundary pants, gluings and annuli.
pub fn emit_dot(bc: &BlockComplex) -> String {
    let mut out = String::from("digraph blocks {\n");
    if bc.blocks.is_empty() {
        out.push_str("}\n");
        return out;
    }
    for b in &bc.blocks {
        let shape = match b.kind {
            PieceKind::T => "ellipse",
            PieceKind::S => "box",
        };
        writeln!(out, "  \"B{}\" [shape={shape}, label=\"{} {} {}\"];", b.level, b.kind, b.level, b.curve).unwrap();
    }
    for (side, pd) in [(Side::Plus, &bc.boundary_pants.plus), (Side::Minus, &bc.boundary_pants.minus)] {
        for p in &pd.pants {
            writeln!(out, "  \"{side}:{p}\" [shape=hexagon];").unwrap();
        }
    }
    let node = |t: &GlueTarget| match t {
        GlueTarget::Face(f) => format!("B{}", f.level),
        GlueTarget::Boundary { side, pants } => format!("{side}:{pants}"),
    };
    for (face, target) in &bc.gluings {
        let (a, b) = match face.side {
            FaceSide::Plus => (format!("B{}", face.level), node(target)),
            FaceSide::Minus => (node(target), format!("B{}", face.level)),
        };
        writeln!(out, "  \"{a}\" -> \"{b}\" [label=\"{face}\"];").unwrap();
    }
    let boundary_node = |side: Side, curve: &str| -> String {
        let pd = match side {
            Side::Plus => &bc.boundary_pants.plus,
            Side::Minus => &bc.boundary_pants.minus,
        };
        let pant = pd
            .curve(&CurveId(curve.to_string()))
            .and_then(|c| match &c.attachment {
                Attachment::Internal(a, _) => Some(a.pant.clone()),
                Attachment::WindowBoundary { at, .. } => Some(at.pant.clone()),
            })
            .unwrap_or_else(|| curve.to_string());
        format!("{side}:{pant}")
    };
    let end_node = |e: &AnnulusEnd| match e {
        AnnulusEnd::Block { level, .. } => format!("B{level}"),
        AnnulusEnd::Boundary { side, curve } => boundary_node(*side, curve),
    };
    for a in &bc.annuli {
        let style = if a.degenerate { "dotted" } else { "dashed" };
        writeln!(out, "  \"{}\" -> \"{}\" [style={style}, label=\"A{}\"];", end_node(&a.lower), end_node(&a.upper), a.id).unwrap();
    }
    out.push_str("}\n");
    out
}
