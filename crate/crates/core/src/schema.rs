//! JSON file formats for windows, pants decompositions, paths and maps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::certify::SupportDescriptor;
use crate::end_periodic::{EndPeriodicMap, HandleShiftSystem, StripRecord, Twist, TwistCurve};
use crate::error::{Error, Result};
use crate::moves::{ElementaryMove, MovePath};
use crate::slope::Slope;
use crate::surface::{natural_cmp, Attachment, Curve, CurveId, PantsDecomposition, SlotRef, Window};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttachFile {
    Slots([String; 2]),
    Boundary {
        boundary: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        at: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFile {
    pub id: CurveId,
    pub attach: AttachFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PantsFile {
    pub pants: Vec<String>,
    pub curves: Vec<CurveFile>,
    #[serde(default)]
    pub slopes: BTreeMap<CurveId, Slope>,
}

impl PantsFile {
    pub fn from_pants(pd: &PantsDecomposition) -> PantsFile {
        let curves = pd
            .curves
            .iter()
            .map(|c| CurveFile {
                id: c.id.clone(),
                attach: match &c.attachment {
                    Attachment::Internal(a, b) => AttachFile::Slots([a.to_string(), b.to_string()]),
                    Attachment::WindowBoundary { end, at } => {
                        AttachFile::Boundary { boundary: end.clone(), at: Some(at.to_string()) }
                    }
                },
            })
            .collect();
        PantsFile { pants: pd.pants.clone(), curves, slopes: pd.slopes.clone() }
    }

    /// Builds the decomposition without validating it. A boundary curve
    /// without `at` takes the first free slot in natural order.
    pub fn to_pants(&self) -> Result<PantsDecomposition> {
        let slot = |s: &str| s.parse::<SlotRef>();
        let mut used = std::collections::BTreeSet::new();
        for c in &self.curves {
            match &c.attach {
                AttachFile::Slots(pair) => {
                    for s in pair {
                        used.insert(slot(s)?);
                    }
                }
                AttachFile::Boundary { at: Some(a), .. } => {
                    used.insert(slot(a)?);
                }
                AttachFile::Boundary { at: None, .. } => {}
            }
        }
        let mut pants = self.pants.clone();
        pants.sort_by(|a, b| natural_cmp(a, b));
        let mut free = pants
            .iter()
            .flat_map(|p| (0..3).map(move |s| SlotRef::new(p.clone(), s)))
            .filter(|s| !used.contains(s));
        let mut curves = Vec::with_capacity(self.curves.len());
        for c in &self.curves {
            let attachment = match &c.attach {
                AttachFile::Slots([a, b]) => Attachment::Internal(slot(a)?, slot(b)?),
                AttachFile::Boundary { boundary, at } => {
                    let at = match at {
                        Some(a) => slot(a)?,
                        None => free
                            .next()
                            .ok_or_else(|| Error::Parse(format!("no free slot for boundary curve {}", c.id)))?,
                    };
                    Attachment::WindowBoundary { end: boundary.clone(), at }
                }
            };
            curves.push(Curve { id: c.id.clone(), attachment });
        }
        Ok(PantsDecomposition::new(self.pants.clone(), curves, self.slopes.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFile {
    pub base: PantsFile,
    pub moves: Vec<ElementaryMove>,
}

impl PathFile {
    pub fn from_path(p: &MovePath) -> PathFile {
        PathFile { base: PantsFile::from_pants(&p.base), moves: p.moves.clone() }
    }

    pub fn to_path(&self) -> Result<MovePath> {
        Ok(MovePath::new(self.base.to_pants()?, self.moves.clone()))
    }
}

/// Certificate inputs carried by a map file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSection {
    #[serde(flatten)]
    pub support: SupportDescriptor,
    pub eta: CurveId,
    pub alpha: CurveId,
}

fn one() -> u32 {
    1
}

fn is_one(n: &u32) -> bool {
    *n == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub window: Window,
    pub strips: Vec<StripRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<TwistCurve>,
    #[serde(default)]
    pub word: Vec<Twist>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pre_word: Vec<Twist>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub iterate: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSection>,
}

impl MapFile {
    pub fn from_map(f: &EndPeriodicMap, certificate: Option<CertificateSection>) -> MapFile {
        MapFile {
            window: f.window.clone(),
            strips: f.shift.strips.clone(),
            curves: f.curves.clone(),
            word: f.word.clone(),
            pre_word: f.pre_word.clone(),
            iterate: f.iterate,
            certificate,
        }
    }

    pub fn to_map(&self) -> Result<EndPeriodicMap> {
        let f = EndPeriodicMap {
            window: self.window.clone(),
            shift: HandleShiftSystem { strips: self.strips.clone() },
            curves: self.curves.clone(),
            word: self.word.clone(),
            pre_word: self.pre_word.clone(),
            iterate: self.iterate,
        };
        f.check()?;
        Ok(f)
    }
}

pub fn parse_window(text: &str) -> Result<Window> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_pants(text: &str) -> Result<PantsDecomposition> {
    serde_json::from_str::<PantsFile>(text)?.to_pants()
}

pub fn parse_path(text: &str) -> Result<MovePath> {
    serde_json::from_str::<PathFile>(text)?.to_path()
}

pub fn parse_map(text: &str) -> Result<MapFile> {
    Ok(serde_json::from_str(text)?)
}

pub fn pants_to_json(pd: &PantsDecomposition) -> String {
    to_pretty(&PantsFile::from_pants(pd))
}

pub fn path_to_json(p: &MovePath) -> String {
    to_pretty(&PathFile::from_path(p))
}

pub fn map_to_json(m: &MapFile) -> String {
    to_pretty(m)
}

fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_window_round_trip() {
        let text = r#"{"pants": ["p"], "curves": [
            {"id": "c", "attach": ["p.s1", "p.s2"]},
            {"id": "v", "attach": {"boundary": "E1"}}
        ], "slopes": {"c": "1/2"}}"#;
        let pd = parse_pants(text).unwrap();
        assert_eq!(pd.slope(&"c".into()), Some(Slope::new(1, 2).unwrap()));
        match &pd.curve(&"v".into()).unwrap().attachment {
            Attachment::WindowBoundary { at, .. } => assert_eq!(at.to_string(), "p.s3"),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_pants(&pants_to_json(&pd)).unwrap(), pd);
    }

    #[test]
    fn malformed_is_parse_error() {
        assert!(matches!(parse_pants("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_map("[]"), Err(Error::Parse(_))));
    }
}
