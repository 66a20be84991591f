//! The periodic two-ended surface used for handle shifts.
//!
//! Layer `t` is a copy of the genus-`k` surface with two boundary curves,
//! where `k` is the number of handle strips. The spine curve `c{t}.{k}`
//! separates layer `t` from layer `t + 1`, and the shift `t -> t + 1` is an
//! automorphism of the pants pattern.
//!
//! For `k >= 2` layer `t` consists of pants `Q{t}.{j}` with cuffs
//! `(c{t}.{j-1}, c{t}.{j}, u{t}.{j})` (where `c{t}.0` is `c{t-1}.{k}`) and
//! one-holed tori `T{t}.{j}` with cuffs `(u{t}.{j}, m{t}.{j}, m{t}.{j})`.
//! For `k = 1` that pattern would put both spine curves of a layer on one
//! pant, so instead `P{t}.1 = (c{t-1}.1, u{t}.1, m{t}.1)` and
//! `R{t}.1 = (c{t}.1, u{t}.1, m{t}.1)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::surface::{Attachment, Curve, CurveId, Orientation, PantsDecomposition, SlotRef, Window};

/// `(prefix, layer, column)` of a ladder id such as `c-2.3`.
pub fn parse_id(id: &str) -> Option<(&str, i64, u32)> {
    let split = id.find(|c: char| c == '-' || c.is_ascii_digit())?;
    let (prefix, rest) = id.split_at(split);
    if prefix.is_empty() || !prefix.chars().all(|c| c.is_ascii_alphabetic()) {
        return None;
    }
    let (layer, column) = rest.split_once('.')?;
    Some((prefix, layer.parse().ok()?, column.parse().ok()?))
}

pub fn make_id(prefix: &str, layer: i64, column: u32) -> String {
    format!("{prefix}{layer}.{column}")
}

/// Moves a ladder id by `by` layers.
pub fn shift_id(id: &str, by: i64) -> Option<String> {
    let (prefix, layer, column) = parse_id(id)?;
    Some(make_id(prefix, layer + by, column))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ladder {
    pub strips: u32,
    /// Lowest and highest layer in the window.
    pub lo: i64,
    pub hi: i64,
    /// Layers outside the end stubs.
    pub mid_lo: i64,
    pub mid_hi: i64,
    pub attracting: String,
    pub repelling: String,
}

impl Ladder {
    /// Lays out `window` as layers `-stub(repelling) ..`, so the first
    /// non-stub layer is 0.
    pub fn from_window(window: &Window, strips: u32, attracting: &str, repelling: &str) -> Result<Ladder> {
        if strips == 0 {
            return Err(Error::InvalidStrips("no strips".into()));
        }
        if window.genus % strips != 0 {
            return Err(Error::UnsupportedWindow(format!(
                "genus {} is not a multiple of the strip count {strips}",
                window.genus
            )));
        }
        let top = window.end(attracting).ok_or_else(|| Error::UnknownEnd(attracting.into()))?;
        let bottom = window.end(repelling).ok_or_else(|| Error::UnknownEnd(repelling.into()))?;
        let layers = (window.genus / strips) as i64;
        let (d_top, d_bottom) = (top.stub_depth as i64, bottom.stub_depth as i64);
        if layers - d_top - d_bottom < 1 {
            return Err(Error::UnsupportedWindow(format!(
                "{layers} layers leave no room between stubs of depth {d_bottom} and {d_top}"
            )));
        }
        Ok(Ladder {
            strips,
            lo: -d_bottom,
            hi: layers - 1 - d_bottom,
            mid_lo: 0,
            mid_hi: layers - 1 - d_bottom - d_top,
            attracting: attracting.into(),
            repelling: repelling.into(),
        })
    }

    pub fn k(&self) -> u32 {
        self.strips
    }

    /// Builds the window for `layers` middle layers and the given stubs.
    pub fn window(strips: u32, middle: u32, stub_top: u32, stub_bottom: u32) -> Window {
        use crate::surface::EndStub;
        Window {
            genus: strips * (middle + stub_top + stub_bottom),
            ends: vec![
                EndStub { id: "E1".into(), orientation: Orientation::Attracting, stub_depth: stub_top },
                EndStub { id: "E2".into(), orientation: Orientation::Repelling, stub_depth: stub_bottom },
            ],
        }
    }

    fn pant_prefixes(&self) -> (&'static str, &'static str) {
        if self.strips == 1 {
            ("P", "R")
        } else {
            ("Q", "T")
        }
    }

    /// Curves of layer `t` with their attachments in the infinite pattern.
    pub fn layer_curves(&self, t: i64) -> Vec<(String, SlotRef, SlotRef)> {
        let k = self.strips;
        let mut out = Vec::new();
        if k == 1 {
            let p = |l: i64| make_id("P", l, 1);
            let r = |l: i64| make_id("R", l, 1);
            out.push((make_id("c", t, 1), SlotRef::new(r(t), 0), SlotRef::new(p(t + 1), 0)));
            out.push((make_id("u", t, 1), SlotRef::new(p(t), 1), SlotRef::new(r(t), 1)));
            out.push((make_id("m", t, 1), SlotRef::new(p(t), 2), SlotRef::new(r(t), 2)));
            return out;
        }
        for j in 1..=k {
            let q = make_id("Q", t, j);
            let torus = make_id("T", t, j);
            let next = if j < k { make_id("Q", t, j + 1) } else { make_id("Q", t + 1, 1) };
            out.push((make_id("c", t, j), SlotRef::new(q.clone(), 1), SlotRef::new(next, 0)));
            out.push((make_id("u", t, j), SlotRef::new(q, 2), SlotRef::new(torus.clone(), 0)));
            out.push((make_id("m", t, j), SlotRef::new(torus.clone(), 1), SlotRef::new(torus, 2)));
        }
        out
    }

    pub fn layer_pants(&self, t: i64) -> Vec<String> {
        let (a, b) = self.pant_prefixes();
        (1..=self.strips)
            .flat_map(|j| [make_id(a, t, j), make_id(b, t, j)])
            .collect()
    }

    /// Pattern attachment of any ladder curve id.
    pub fn pattern_attachment(&self, id: &str) -> Option<(SlotRef, SlotRef)> {
        let (_, t, _) = parse_id(id)?;
        self.layer_curves(t)
            .into_iter()
            .find(|(c, ..)| c == id)
            .map(|(_, a, b)| (a, b))
    }

    /// Layers of the pants a pattern curve touches.
    pub fn touched_layers(&self, id: &str) -> Option<(i64, i64)> {
        let (a, b) = self.pattern_attachment(id)?;
        let la = parse_id(&a.pant)?.1;
        let lb = parse_id(&b.pant)?.1;
        Some((la.min(lb), la.max(lb)))
    }

    pub fn top_boundary(&self) -> String {
        make_id("c", self.hi, self.strips)
    }

    pub fn bottom_boundary(&self) -> String {
        make_id("c", self.lo - 1, self.strips)
    }

    pub fn is_stub_layer(&self, t: i64) -> bool {
        t < self.mid_lo || t > self.mid_hi
    }

    /// Number of position classes per layer, `3k`.
    pub fn classes(&self) -> usize {
        3 * self.strips as usize
    }

    /// Pattern decomposition restricted to the window; every slope is the
    /// canonical one of its grouping.
    pub fn pattern(&self) -> PantsDecomposition {
        let mut pants = Vec::new();
        let mut curves = Vec::new();
        for t in self.lo..=self.hi {
            pants.extend(self.layer_pants(t));
            for (id, a, b) in self.layer_curves(t) {
                if id == self.top_boundary() {
                    curves.push(Curve {
                        id: CurveId(id),
                        attachment: Attachment::WindowBoundary { end: self.attracting.clone(), at: a },
                    });
                } else {
                    curves.push(Curve { id: CurveId(id), attachment: Attachment::Internal(a, b) });
                }
            }
        }
        let (_, at) = self
            .pattern_attachment(&self.bottom_boundary())
            .expect("spine curves are ladder ids");
        curves.push(Curve {
            id: CurveId(self.bottom_boundary()),
            attachment: Attachment::WindowBoundary { end: self.repelling.clone(), at },
        });
        PantsDecomposition::new(pants, curves, BTreeMap::new())
    }

    /// Checks that `pd` agrees with the pattern on every stub layer.
    pub fn check_stubs(&self, pd: &PantsDecomposition, pattern: &PantsDecomposition) -> Result<()> {
        for c in &pattern.curves {
            let Some((lo, hi)) = self.touched_layers(c.id.as_str()) else {
                continue;
            };
            let touches_stub = (lo..=hi).any(|t| t >= self.lo && t <= self.hi && self.is_stub_layer(t));
            if !touches_stub {
                continue;
            }
            let here = pd.curve(&c.id);
            if here != Some(c) || pd.slope(&c.id) != pattern.slope(&c.id) {
                return Err(Error::SupportMismatch(format!(
                    "curve {} differs from the periodic pattern on an end stub",
                    c.id
                )));
            }
        }
        if pd.pants.len() != pattern.pants.len() || pd.pants != pattern.pants {
            return Err(Error::SupportMismatch("pants do not match the window".into()));
        }
        if pd.curves.len() != pattern.curves.len() {
            return Err(Error::SupportMismatch("curve set does not match the window".into()));
        }
        for c in &pattern.curves {
            if pd.curve(&c.id).is_none() {
                return Err(Error::SupportMismatch(format!("curve {} is missing", c.id)));
            }
        }
        Ok(())
    }

    /// Relabels `pd` by `by = +1` or `-1` layers. The layer leaving the
    /// window must agree with the pattern and the entering layer is filled
    /// from it.
    pub fn shift(&self, pd: &PantsDecomposition, by: i64) -> Result<PantsDecomposition> {
        assert!(by == 1 || by == -1);
        let pattern = self.pattern();
        self.check_stubs(pd, &pattern)?;
        let rename_slot = |s: &SlotRef| -> Result<SlotRef> {
            let pant = shift_id(&s.pant, by)
                .ok_or_else(|| Error::SupportMismatch(format!("pant {} is not a ladder pant", s.pant)))?;
            Ok(SlotRef::new(pant, s.slot))
        };
        // the layer entering the window comes from the pattern
        let entering = if by == 1 { self.lo } else { self.hi };
        let far_spine = if by == 1 { self.top_boundary() } else { self.bottom_boundary() };
        let mut curves = Vec::new();
        let mut slopes = BTreeMap::new();
        for c in &pattern.curves {
            let (lo, hi) = self.touched_layers(c.id.as_str()).expect("ladder id");
            if (lo..=hi).contains(&entering) && c.id.as_str() != far_spine {
                curves.push(c.clone());
                if let Some(s) = pattern.slope(&c.id) {
                    slopes.insert(c.id.clone(), s);
                }
            }
        }
        for c in &pd.curves {
            let new_id = shift_id(c.id.as_str(), by)
                .ok_or_else(|| Error::SupportMismatch(format!("curve {} is not a ladder curve", c.id)))?;
            let (lo, hi) = self.touched_layers(&new_id).expect("ladder id");
            if (lo..=hi).contains(&entering) {
                continue;
            }
            if lo < self.lo - 1 || hi > self.hi + 1 || (lo < self.lo && hi < self.lo) || (lo > self.hi) {
                continue;
            }
            let id = CurveId(new_id.clone());
            if new_id == far_spine {
                let at = match &c.attachment {
                    Attachment::Internal(a, b) => {
                        if by == 1 {
                            a
                        } else {
                            b
                        }
                    }
                    Attachment::WindowBoundary { at, .. } => at,
                };
                let end = if by == 1 { self.attracting.clone() } else { self.repelling.clone() };
                curves.push(Curve { id, attachment: Attachment::WindowBoundary { end, at: rename_slot(at)? } });
                continue;
            }
            let attachment = match &c.attachment {
                Attachment::Internal(a, b) => Attachment::Internal(rename_slot(a)?, rename_slot(b)?),
                Attachment::WindowBoundary { .. } => {
                    return Err(Error::SupportMismatch(format!("boundary curve {} inside the window", c.id)));
                }
            };
            if let Some(s) = pd.slope(&c.id) {
                slopes.insert(id.clone(), s);
            }
            curves.push(Curve { id, attachment });
        }
        let mut out = PantsDecomposition { pants: pattern.pants.clone(), curves, slopes };
        out.normalise_order();
        Ok(out)
    }
}
