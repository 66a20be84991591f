//! Exact distances in the Farey graph, the pants graph of a
//! complexity-one piece.

use std::collections::{HashMap, VecDeque};

use crate::slope::{ext_gcd, Slope, Unimodular};

/// Distance from `1/0` to `r/q` where `0 <= r < q`, memoised on the
/// reduced residue. The map `x -> -x` and integer translations fix `1/0`,
/// so only `min(r, q - r) / q` matters.
fn from_infinity_frac(r: i64, q: i64, memo: &mut HashMap<(i64, i64), u32>) -> u32 {
    if r == 0 {
        return 1;
    }
    let r = r.min(q - r);
    if let Some(&d) = memo.get(&(r, q)) {
        return d;
    }
    // the edge between the two integers around x separates x from 1/0
    let left = from_infinity_frac(q % r, r, memo);
    let right = from_infinity_frac(q % (q - r), q - r, memo);
    let d = 1 + left.min(right);
    memo.insert((r, q), d);
    d
}

fn from_infinity(x: Slope, memo: &mut HashMap<(i64, i64), u32>) -> u32 {
    if x.is_infinite() {
        return 0;
    }
    from_infinity_frac(x.p().rem_euclid(x.q()), x.q(), memo)
}

/// Graph distance between `a` and `b` in the Farey graph.
pub fn farey_distance(a: Slope, b: Slope) -> u32 {
    let m = Unimodular::to_infinity(a);
    from_infinity(m.apply(b), &mut HashMap::new())
}

fn geodesic_from_infinity(x: Slope, memo: &mut HashMap<(i64, i64), u32>) -> Vec<Slope> {
    if x.is_infinite() {
        return Vec::new();
    }
    if x.q() == 1 {
        return vec![x];
    }
    let n = x.p().div_euclid(x.q());
    let mut best: Option<(u32, i64, Unimodular, Slope)> = None;
    for b in [n, n + 1] {
        // z = -1/(x - b) sends b to infinity
        let mb = Unimodular { a: 0, b: -1, c: 1, d: -b };
        let z = mb.apply(x);
        let d = from_infinity(z, memo);
        if best.as_ref().map(|(bd, ..)| d < *bd).unwrap_or(true) {
            best = Some((d, b, mb, z));
        }
    }
    let (_, b, mb, z) = best.expect("two candidates");
    let back = mb.inverse();
    let mut path = vec![Slope::integer(b)];
    path.extend(geodesic_from_infinity(z, memo).into_iter().map(|s| back.apply(s)));
    path
}

/// A shortest Farey path from `a` to `b`, both endpoints included.
pub fn farey_geodesic(a: Slope, b: Slope) -> Vec<Slope> {
    let m = Unimodular::to_infinity(a);
    let back = m.inverse();
    let mut path = vec![a];
    path.extend(
        geodesic_from_infinity(m.apply(b), &mut HashMap::new())
            .into_iter()
            .map(|s| back.apply(s)),
    );
    path
}

/// Farey neighbours of `s` whose height is at most `bound`.
pub fn neighbours_within(s: Slope, bound: i64) -> Vec<Slope> {
    let (p, q) = (s.p(), s.q());
    // p*s0 - q*r0 = 1
    let (_, x, y) = ext_gcd(p, -q);
    let (r0, s0) = (y, x);
    let mut out = Vec::new();
    // every neighbour is (r0 + k p, s0 + k q) up to sign
    let (lo, hi) = if q > 0 {
        ((-bound - s0).div_euclid(q) - 1, (bound - s0).div_euclid(q) + 1)
    } else {
        ((-bound - r0).div_euclid(p.abs()) - 1, (bound - r0).div_euclid(p.abs()) + 1)
    };
    for k in lo..=hi {
        let (r, t) = (r0 + k * p, s0 + k * q);
        if r.abs() <= bound && t.abs() <= bound {
            if let Ok(n) = Slope::new(r, t) {
                out.push(n);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Breadth-first distances from `a` inside the Farey graph restricted to
/// slopes of height at most `bound`.
pub fn bfs_distances_from(a: Slope, bound: i64) -> HashMap<Slope, u32> {
    let mut dist = HashMap::new();
    if a.height() > bound {
        return dist;
    }
    dist.insert(a, 0);
    let mut queue = VecDeque::from([a]);
    while let Some(s) = queue.pop_front() {
        let d = dist[&s];
        for n in neighbours_within(s, bound) {
            if !dist.contains_key(&n) {
                dist.insert(n, d + 1);
                queue.push_back(n);
            }
        }
    }
    dist
}

/// Independent breadth-first oracle; `None` when the bound excludes an
/// endpoint or no path exists inside it.
pub fn bfs_distance_oracle(a: Slope, b: Slope, bound: i64) -> Option<u32> {
    if a.height() > bound || b.height() > bound {
        return None;
    }
    let mut dist: HashMap<Slope, u32> = HashMap::from([(a, 0)]);
    let mut queue = VecDeque::from([a]);
    while let Some(s) = queue.pop_front() {
        let d = dist[&s];
        if s == b {
            return Some(d);
        }
        for n in neighbours_within(s, bound) {
            if !dist.contains_key(&n) {
                dist.insert(n, d + 1);
                queue.push_back(n);
            }
        }
    }
    None
}
