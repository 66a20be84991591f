#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use panto::blocks::BoundaryPants;
use panto::moves::{ElementaryMove, MovePath};
use panto::surface::{Attachment, PantsDecomposition};
use panto::Slope;

/// Lobachevsky function by Gauss-Legendre quadrature:
/// `Λ(θ) = θ - θ ln(2θ) - ∫_0^θ ln(sin t / t) dt`, with a smooth integrand.
pub fn lobachevsky_quadrature(theta: f64) -> f64 {
    const NODES: [(f64, f64); 5] = [
        (0.0, 0.568_888_888_888_888_9),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let g = |t: f64| if t == 0.0 { 0.0 } else { (t.sin() / t).ln() };
    let panels = 400;
    let h = theta / panels as f64;
    let mut integral = 0.0;
    for i in 0..panels {
        let mid = (i as f64 + 0.5) * h;
        for (x, w) in NODES {
            integral += w * g(mid + 0.5 * h * x) * 0.5 * h;
        }
    }
    theta - theta * (2.0 * theta).ln() - integral
}

/// Reduced slopes `p/q` with `0 <= q <= h` and `|p| <= h`.
pub fn slopes_of_height(h: i64) -> Vec<Slope> {
    let mut out = BTreeSet::new();
    for q in 0..=h {
        for p in -h..=h {
            if let Ok(s) = Slope::new(p, q) {
                out.insert(s);
            }
        }
    }
    out.into_iter().collect()
}

/// All-pairs Farey distances on `nodes` by brute-force adjacency and BFS.
pub fn brute_force_distances(nodes: &[Slope]) -> Vec<Vec<u32>> {
    let n = nodes.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (nodes[i], nodes[j]);
            if (a.p() * b.q() - a.q() * b.p()).abs() == 1 {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    (0..n)
        .map(|src| {
            let mut d = vec![u32::MAX; n];
            d[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if d[w] == u32::MAX {
                        d[w] = d[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

/// Inserts `m, m^-1` before move `i`, where `m` moves the curve of move
/// `i` to a Farey neighbour other than its actual target.
pub fn insert_backtrack(path: &MovePath, i: usize) -> Option<MovePath> {
    let pds = path.decompositions().ok()?;
    let target = &path.moves[i];
    let old = pds[i].slope(&target.curve)?;
    let alt = [Slope::integer(0), Slope::integer(1), Slope::integer(-1), Slope::new(1, 0).unwrap()]
        .into_iter()
        .map(|t| panto::Unimodular::to_infinity(old).inverse().apply(t))
        .find(|s| s.adjacent(&old) && *s != target.new_slope)?;
    let m = ElementaryMove::new(target.curve.clone(), target.kind, old, alt);
    let mut moves = path.moves.clone();
    moves.insert(i, m.inverse());
    moves.insert(i, m);
    let p = MovePath::new(path.base.clone(), moves);
    p.decompositions().ok()?;
    Some(p)
}

/// Swaps moves `i` and `i + 1` when both orders are valid paths with the
/// same endpoint.
pub fn swap_commuting(path: &MovePath, i: usize) -> Option<MovePath> {
    if path.moves[i].curve == path.moves[i + 1].curve {
        return None;
    }
    let mut moves = path.moves.clone();
    moves.swap(i, i + 1);
    let p = MovePath::new(path.base.clone(), moves);
    let pds = p.decompositions().ok()?;
    (pds.last() == path.decompositions().ok()?.last()).then_some(p)
}

fn base_name(id: &str) -> (String, String) {
    let (head, sheet) = id.rsplit_once('.').expect("sheet suffix");
    (head.to_string(), sheet.to_string())
}

/// Checks that `cover` is an `n`-sheeted cover of `base` under the map
/// forgetting the sheet suffix, and that shifting sheets cyclically is a
/// deck transformation. Returns a description of the first mismatch.
pub fn check_lift(base: &BoundaryPants, cover: &BoundaryPants, n: usize) -> Result<(), String> {
    for (b, c) in [(&base.plus, &cover.plus), (&base.minus, &cover.minus)] {
        check_lift_side(b, c, n)?;
    }
    Ok(())
}

fn projected(pd: &PantsDecomposition) -> BTreeMap<String, Vec<(String, u8, String, u8)>> {
    let mut out: BTreeMap<String, Vec<_>> = BTreeMap::new();
    for c in &pd.curves {
        let Attachment::Internal(a, b) = &c.attachment else { continue };
        let (id, _) = base_name(c.id.as_str());
        let (pa, _) = base_name(&a.pant);
        let (pb, _) = base_name(&b.pant);
        let mut e = [(pa, a.slot), (pb, b.slot)];
        e.sort();
        let [(pa, sa), (pb, sb)] = e;
        out.entry(id).or_default().push((pa, sa, pb, sb));
    }
    out
}

fn check_lift_side(base: &PantsDecomposition, cover: &PantsDecomposition, n: usize) -> Result<(), String> {
    if cover.pants.len() != n * base.pants.len() || cover.curves.len() != n * base.curves.len() {
        return Err(format!(
            "cover has {} pants / {} curves over {} / {}",
            cover.pants.len(),
            cover.curves.len(),
            base.pants.len(),
            base.curves.len()
        ));
    }
    let b = projected(base);
    let c = projected(cover);
    if b.keys().collect::<Vec<_>>() != c.keys().collect::<Vec<_>>() {
        return Err("curve classes differ".into());
    }
    for (id, edges) in &c {
        let downstairs = &b[id][0];
        if edges.len() != n || edges.iter().any(|e| e != downstairs) {
            return Err(format!("{id}: lifts {edges:?} over {downstairs:?}"));
        }
    }
    // deck transformation: sheet j -> j+1 mod n preserves the attachment set
    let shift = |name: &str| {
        let (h, s) = base_name(name);
        let j: usize = s.parse().expect("numeric sheet");
        format!("{h}.{}", (j + 1) % n)
    };
    let attach: BTreeSet<_> = cover
        .curves
        .iter()
        .filter_map(|c| match &c.attachment {
            Attachment::Internal(a, b) => Some((c.id.as_str().to_string(), a.clone(), b.clone())),
            _ => None,
        })
        .collect();
    for (id, a, b) in &attach {
        let mut a2 = a.clone();
        a2.pant = shift(&a.pant);
        let mut b2 = b.clone();
        b2.pant = shift(&b.pant);
        let id2 = shift(id);
        let hit = attach.iter().any(|(i, x, y)| *i == id2 && ((*x == a2 && *y == b2) || (*x == b2 && *y == a2)));
        if !hit {
            return Err(format!("{id} has no deck image"));
        }
    }
    Ok(())
}

/// Farey distance from `1/0` to `x` by BFS on the Stern-Brocot ancestors
/// of `x`, the only vertices a geodesic from `1/0` can use.
pub fn distance_from_infinity_by_ancestors(x: Slope) -> u32 {
    if x.q() == 0 {
        return 0;
    }
    let n = x.p().div_euclid(x.q());
    let mut nodes = vec![(1i64, 0i64), (n, 1), (n + 1, 1)];
    let (mut l, mut r) = ((n, 1i64), (n + 1, 1i64));
    while (x.p(), x.q()) != l && (x.p(), x.q()) != r {
        let m = (l.0 + r.0, l.1 + r.1);
        nodes.push(m);
        // compare x with m
        if x.p() * m.1 < m.0 * x.q() {
            r = m;
        } else if x.p() * m.1 > m.0 * x.q() {
            l = m;
        } else {
            break;
        }
    }
    let target = nodes.iter().position(|&(p, q)| (p, q) == (x.p(), x.q())).expect("x reached");
    let mut d = vec![u32::MAX; nodes.len()];
    d[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for w in 0..nodes.len() {
            let (a, b) = (nodes[v], nodes[w]);
            if d[w] == u32::MAX && (a.0 * b.1 - a.1 * b.0).abs() == 1 {
                d[w] = d[v] + 1;
                queue.push_back(w);
            }
        }
    }
    d[target]
}
