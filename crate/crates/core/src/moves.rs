//! Elementary moves and weighted move paths in the pants graph.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::end_periodic::EndPeriodicMap;
use crate::error::{Error, Result};
use crate::slope::Slope;
use crate::surface::{CurveId, PantsDecomposition, PieceKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementaryMove {
    pub curve: CurveId,
    pub kind: PieceKind,
    #[serde(rename = "from")]
    pub old_slope: Slope,
    #[serde(rename = "to")]
    pub new_slope: Slope,
}

impl ElementaryMove {
    pub fn new(curve: impl Into<CurveId>, kind: PieceKind, old_slope: Slope, new_slope: Slope) -> Self {
        ElementaryMove { curve: curve.into(), kind, old_slope, new_slope }
    }

    pub fn weight(&self) -> u64 {
        match self.kind {
            PieceKind::T => 1,
            PieceKind::S => 2,
        }
    }

    pub fn inverse(&self) -> ElementaryMove {
        ElementaryMove {
            curve: self.curve.clone(),
            kind: self.kind,
            old_slope: self.new_slope,
            new_slope: self.old_slope,
        }
    }
}

impl From<String> for CurveId {
    fn from(s: String) -> Self {
        CurveId(s)
    }
}

/// Applies one elementary move, returning the neighbouring decomposition.
pub fn apply_move(pd: &PantsDecomposition, m: &ElementaryMove) -> Result<PantsDecomposition> {
    let kind = pd.complexity_one_piece(&m.curve)?;
    let not_applicable = |reason: String| Error::MoveNotApplicable { curve: m.curve.clone(), reason };
    if kind != m.kind {
        return Err(not_applicable(format!("piece is {kind}, move says {}", m.kind)));
    }
    let current = pd
        .slope(&m.curve)
        .ok_or_else(|| not_applicable("no slope recorded".into()))?;
    if current != m.old_slope {
        return Err(not_applicable(format!("slope is {current}, move starts at {}", m.old_slope)));
    }
    if !m.old_slope.adjacent(&m.new_slope) {
        return Err(not_applicable(format!(
            "{} and {} are not Farey-adjacent (determinant {})",
            m.old_slope,
            m.new_slope,
            m.old_slope.det(&m.new_slope)
        )));
    }
    let mut out = pd.clone();
    out.set_slope(&m.curve, m.new_slope)?;
    Ok(out)
}

/// A base decomposition and a sequence of elementary moves from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MovePath {
    pub base: PantsDecomposition,
    pub moves: Vec<ElementaryMove>,
}

impl MovePath {
    pub fn new(base: PantsDecomposition, moves: Vec<ElementaryMove>) -> Self {
        MovePath { base, moves }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn n_t(&self) -> usize {
        self.moves.iter().filter(|m| m.kind == PieceKind::T).count()
    }

    pub fn n_s(&self) -> usize {
        self.moves.iter().filter(|m| m.kind == PieceKind::S).count()
    }

    /// `n_T + 2 n_S`, without checking applicability.
    pub fn weight(&self) -> u64 {
        self.moves.iter().map(ElementaryMove::weight).sum()
    }

    /// `P_0, ..., P_n`.
    pub fn decompositions(&self) -> Result<Vec<PantsDecomposition>> {
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        out.push(self.base.clone());
        for (index, m) in self.moves.iter().enumerate() {
            let next = apply_move(out.last().expect("nonempty"), m)
                .map_err(|e| Error::InvalidPath { index, source: Box::new(e) })?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn endpoint(&self) -> Result<PantsDecomposition> {
        Ok(self.decompositions()?.pop().expect("nonempty"))
    }

    /// Appends `other`, whose base must be this path's endpoint.
    pub fn concat(&self, other: &MovePath) -> Result<MovePath> {
        if self.endpoint()? != other.base {
            return Err(Error::InvalidPath {
                index: self.moves.len(),
                source: Box::new(Error::PathEndpointMismatch),
            });
        }
        let mut moves = self.moves.clone();
        moves.extend(other.moves.iter().cloned());
        Ok(MovePath { base: self.base.clone(), moves })
    }
}

/// Validated weight `n_T + 2 n_S`.
pub fn path_weight(path: &MovePath) -> Result<u64> {
    path.decompositions()?;
    Ok(path.weight())
}

/// Nonnegative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den > 0, "zero denominator");
        let (mut a, mut b) = (num, den);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        let g = a.max(1);
        Ratio { num: num / g, den: den / g }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `weight / power`, an upper bound for the translation distance of `f`
/// on the component of the base, once the path is checked to end at
/// `f^-power` of its base.
pub fn upper_translation_estimate(f: &EndPeriodicMap, path: &MovePath, power: u32) -> Result<Ratio> {
    if power == 0 {
        return Err(Error::Parse("power must be positive".into()));
    }
    let end = path.endpoint()?;
    let target = f.power(power)?.act_inverse(&path.base)?;
    if end != target {
        return Err(Error::PathEndpointMismatch);
    }
    Ok(Ratio::new(path.weight(), power as u64))
}
