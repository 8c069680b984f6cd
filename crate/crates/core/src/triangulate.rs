//! Unimodular triangulations of lattice point configurations: flips,
//! symmetry-reduced enumeration, regularity and secondary cones.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::hash::BuildHasherDefault;
use std::sync::Arc;

use indexmap::IndexSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::seq::IndexedRandom;
use rand::Rng;

use crate::arith::IntVec;
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{affine_automorphisms, cross, LatticePoint, LatticePolygon};
use crate::lp::{maximize, LpNum, LpOutcome};

/// An interior edge `ends` shared by the triangles `ends + apexes[0]` and
/// `ends + apexes[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InteriorEdge {
    pub ends: [u16; 2],
    pub apexes: [u16; 2],
    pub triangles: [usize; 2],
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    polygon: Arc<LatticePolygon>,
    triangles: Vec<[u16; 3]>,
    interior_edges: Vec<InteriorEdge>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.triangles == other.triangles && self.polygon == other.polygon
    }
}

impl Eq for Triangulation {}

fn sort3(mut t: [u16; 3]) -> [u16; 3] {
    t.sort_unstable();
    t
}

impl Triangulation {
    /// Validates and wraps a list of triangles given as indices into the
    /// sorted point list of `polygon`.
    pub fn new(polygon: Arc<LatticePolygon>, triangles: Vec<[u16; 3]>) -> Result<Self> {
        let pts = polygon.points().to_vec();
        let n = pts.len();
        let bad = |m: String| Err(Error::InvalidTriangulation(m));
        let mut tris: Vec<[u16; 3]> = triangles.into_iter().map(sort3).collect();
        tris.sort_unstable();
        if tris.windows(2).any(|w| w[0] == w[1]) {
            return bad("repeated triangle".into());
        }
        let mut used = vec![false; n];
        for t in &tris {
            if t.iter().any(|&i| i as usize >= n) {
                return bad(format!("index out of range in {t:?}"));
            }
            let [a, b, c] = t.map(|i| pts[i as usize]);
            if cross(a, b, c).abs() != 1 {
                return bad(format!("triangle {t:?} is not unimodular"));
            }
            for &i in t {
                used[i as usize] = true;
            }
        }
        if tris.len() as i64 != polygon.twice_area() {
            return bad("triangle areas do not add up to the polygon area".into());
        }
        if let Some(i) = used.iter().position(|&u| !u) {
            return bad(format!("point {} is not used", pts[i]));
        }
        let t = Triangulation {
            interior_edges: Vec::new(),
            polygon,
            triangles: tris,
        };
        let edges = t.edge_incidences();
        let facets = t.polygon.facets();
        let mut interior = Vec::new();
        let mut i = 0;
        while i < edges.len() {
            let mut j = i;
            while j < edges.len() && edges[j].0 == edges[i].0 {
                j += 1;
            }
            let [u, v] = edges[i].0;
            let (pu, pv) = (pts[u as usize], pts[v as usize]);
            match j - i {
                1 => {
                    let on_boundary = facets.iter().any(|&(a, b, c)| {
                        a * pu.x + b * pu.y == c && a * pv.x + b * pv.y == c
                    });
                    if !on_boundary {
                        return bad(format!("edge {pu}-{pv} has a free side inside the polygon"));
                    }
                }
                2 => {
                    let (ta, a) = (edges[i].1, edges[i].2);
                    let (tb, b) = (edges[i + 1].1, edges[i + 1].2);
                    let sa = cross(pu, pv, pts[a as usize]);
                    let sb = cross(pu, pv, pts[b as usize]);
                    if sa.signum() == sb.signum() {
                        return bad(format!("triangles overlap along {pu}-{pv}"));
                    }
                    interior.push(InteriorEdge {
                        ends: [u, v],
                        apexes: [a, b],
                        triangles: [ta, tb],
                    });
                }
                _ => return bad(format!("edge {pu}-{pv} lies in more than two triangles")),
            }
            i = j;
        }
        Ok(Triangulation {
            interior_edges: interior,
            ..t
        })
    }

    /// (sorted edge, triangle index, apex), sorted by edge.
    fn edge_incidences(&self) -> Vec<([u16; 2], usize, u16)> {
        let mut e = Vec::with_capacity(3 * self.triangles.len());
        for (ti, &[a, b, c]) in self.triangles.iter().enumerate() {
            e.push(([a, b], ti, c));
            e.push(([a, c], ti, b));
            e.push(([b, c], ti, a));
        }
        e.sort_unstable();
        e
    }

    fn from_trusted(polygon: Arc<LatticePolygon>, mut tris: Vec<[u16; 3]>) -> Self {
        tris.sort_unstable();
        let mut t = Triangulation {
            polygon,
            triangles: tris,
            interior_edges: Vec::new(),
        };
        let e = t.edge_incidences();
        let mut interior = Vec::new();
        for w in e.windows(2) {
            if w[0].0 == w[1].0 {
                interior.push(InteriorEdge {
                    ends: w[0].0,
                    apexes: [w[0].2, w[1].2],
                    triangles: [w[0].1, w[1].1],
                });
            }
        }
        t.interior_edges = interior;
        t
    }

    pub fn polygon(&self) -> &LatticePolygon {
        &self.polygon
    }

    pub fn polygon_arc(&self) -> &Arc<LatticePolygon> {
        &self.polygon
    }

    /// Triangles as sorted index triples, in lexicographic order.
    pub fn triangles(&self) -> &[[u16; 3]] {
        &self.triangles
    }

    /// Interior edges sorted by their endpoint pair.
    pub fn interior_edges(&self) -> &[InteriorEdge] {
        &self.interior_edges
    }

    pub fn point(&self, i: u16) -> LatticePoint {
        self.polygon.points()[i as usize]
    }

    pub fn contains_edge(&self, a: LatticePoint, b: LatticePoint) -> bool {
        let (Some(i), Some(j)) = (self.polygon.index_of(a), self.polygon.index_of(b)) else {
            return false;
        };
        let (i, j) = (i.min(j) as u16, i.max(j) as u16);
        self.triangles.iter().any(|t| {
            (t[0] == i || t[1] == i || t[2] == i) && (t[0] == j || t[1] == j || t[2] == j)
        })
    }

    /// Coefficients of the flip form of an interior edge: positive on the
    /// two apexes, nonpositive on the two ends, summing to zero.
    pub fn flip_form(&self, e: &InteriorEdge) -> [(u16, i64); 4] {
        let [b, c] = e.ends;
        let [a, d] = e.apexes;
        let p = |i: u16| self.point(i);
        // affine dependency a + d = beta b + gamma c
        let sigma = cross(p(b), p(c), p(d));
        let beta = sigma * cross(p(a), p(c), p(d));
        let gamma = -sigma * cross(p(a), p(b), p(d));
        [(a, 1), (d, 1), (b, -beta), (c, -gamma)]
    }

    pub fn flip_row(&self, e: &InteriorEdge) -> IntVec {
        let mut row = vec![0i128; self.polygon.len()];
        for (i, c) in self.flip_form(e) {
            row[i as usize] += c as i128;
        }
        row
    }

    /// Whether the two triangles at `e` form a unit parallelogram.
    pub fn is_flippable(&self, e: &InteriorEdge) -> bool {
        let [b, c] = e.ends;
        let [a, d] = e.apexes;
        let (pa, pb, pc, pd) = (self.point(a), self.point(b), self.point(c), self.point(d));
        pa.x + pd.x == pb.x + pc.x && pa.y + pd.y == pb.y + pc.y
    }

    /// Replaces the diagonal `e` by the other diagonal of its parallelogram.
    pub fn flip(&self, e: &InteriorEdge) -> Option<Triangulation> {
        if !self.is_flippable(e) {
            return None;
        }
        let [b, c] = e.ends;
        let [a, d] = e.apexes;
        let mut tris: Vec<[u16; 3]> = self
            .triangles
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != e.triangles[0] && *i != e.triangles[1])
            .map(|(_, t)| *t)
            .collect();
        tris.push(sort3([a, d, b]));
        tris.push(sort3([a, d, c]));
        Some(Triangulation::from_trusted(self.polygon.clone(), tris))
    }

    pub fn flips(&self) -> Vec<Triangulation> {
        self.interior_edges.iter().filter_map(|e| self.flip(e)).collect()
    }

    /// Image under a permutation of the point indices.
    pub fn permuted(&self, perm: &[u16]) -> Triangulation {
        let tris = self
            .triangles
            .iter()
            .map(|t| sort3(t.map(|i| perm[i as usize])))
            .collect();
        Triangulation::from_trusted(self.polygon.clone(), tris)
    }

}

fn pack(tris: &[[u16; 3]]) -> Box<[u32]> {
    tris.iter()
        .map(|t| (t[0] as u32) << 20 | (t[1] as u32) << 10 | t[2] as u32)
        .collect()
}

fn unpack(p: &[u32]) -> Vec<[u16; 3]> {
    p.iter()
        .map(|&w| [(w >> 20) as u16, ((w >> 10) & 0x3ff) as u16, (w & 0x3ff) as u16])
        .collect()
}

/// Placing triangulation of the points in lexicographic order.
pub fn placing_triangulation(polygon: Arc<LatticePolygon>) -> Triangulation {
    let pts = polygon.points().to_vec();
    let mut tris: Vec<[u16; 3]> = Vec::new();
    // counterclockwise hull, collinear points kept
    let mut hull: Vec<usize> = Vec::new();
    let mut line: Vec<usize> = vec![0];
    let mut k = 1;
    while k < pts.len() {
        let p = pts[k];
        if line.len() < 2 || cross(pts[line[0]], pts[line[1]], p) == 0 {
            line.push(k);
            k += 1;
            continue;
        }
        for w in line.windows(2) {
            tris.push(sort3([w[0] as u16, w[1] as u16, k as u16]));
        }
        if cross(pts[line[0]], pts[line[line.len() - 1]], p) > 0 {
            hull = line.clone();
        } else {
            hull = line.iter().rev().copied().collect();
        }
        hull.push(k);
        k += 1;
        break;
    }
    for (k, &p) in pts.iter().enumerate().skip(k) {
        let m = hull.len();
        let visible: Vec<bool> = (0..m)
            .map(|i| cross(pts[hull[i]], pts[hull[(i + 1) % m]], p) < 0)
            .collect();
        for i in 0..m {
            if visible[i] {
                tris.push(sort3([hull[i] as u16, hull[(i + 1) % m] as u16, k as u16]));
            }
        }
        // the visible edges form one cyclic run [s, t)
        let s = (0..m)
            .find(|&i| visible[i] && !visible[(i + m - 1) % m])
            .expect("a new point sees some hull edge");
        let mut t = s;
        while visible[t % m] {
            t += 1;
        }
        let mut next = Vec::with_capacity(m + 1);
        let mut i = t % m;
        loop {
            next.push(hull[i]);
            if i == s {
                break;
            }
            i = (i + 1) % m;
        }
        next.push(k);
        hull = next;
    }
    Triangulation::from_trusted(polygon, tris)
}

/// Affine unimodular symmetries of a polygon, as permutations of its points.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    pub elements: Vec<Vec<u16>>,
}

impl SymmetryGroup {
    pub fn trivial(n: usize) -> Self {
        SymmetryGroup {
            elements: vec![(0..n as u16).collect()],
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Orbit representative: the lexicographically least image.
    pub fn canonical(&self, t: &Triangulation) -> Triangulation {
        Triangulation::from_trusted(t.polygon.clone(), self.canonical_triangles(&t.triangles))
    }

    fn canonical_triangles(&self, tris: &[[u16; 3]]) -> Vec<[u16; 3]> {
        let mut best: Option<Vec<[u16; 3]>> = None;
        let mut buf: Vec<[u16; 3]> = Vec::with_capacity(tris.len());
        for g in &self.elements {
            buf.clear();
            buf.extend(tris.iter().map(|t| sort3(t.map(|i| g[i as usize]))));
            buf.sort_unstable();
            if best.as_ref().is_none_or(|b| buf < *b) {
                best = Some(buf.clone());
            }
        }
        best.unwrap_or_else(|| tris.to_vec())
    }

    /// Size of the orbit of `t`.
    pub fn orbit_size(&self, t: &Triangulation) -> usize {
        let stab = self
            .elements
            .iter()
            .filter(|g| t.permuted(g).triangles == t.triangles)
            .count();
        self.order() / stab
    }
}

pub fn affine_symmetries(p: &LatticePolygon) -> SymmetryGroup {
    let pts = p.points();
    let elements = affine_automorphisms(p)
        .iter()
        .map(|f| {
            pts.iter()
                .map(|&q| p.index_of(f.apply(q)).expect("symmetry preserves the points") as u16)
                .collect()
        })
        .collect();
    SymmetryGroup { elements }
}

type Visited = IndexSet<Box<[u32]>, BuildHasherDefault<std::collections::hash_map::DefaultHasher>>;

/// Breadth-first closure of a triangulation under flips, yielding one
/// triangulation per class (per symmetry orbit when a group is given).
/// Items come out in discovery order, which is deterministic.
pub struct Enumerator {
    polygon: Arc<LatticePolygon>,
    group: SymmetryGroup,
    visited: Visited,
    head: usize,
}

impl Enumerator {
    pub fn new(polygon: Arc<LatticePolygon>, up_to_symmetry: bool) -> Self {
        let seed = placing_triangulation(polygon.clone());
        Self::from_seed(seed, up_to_symmetry)
    }

    pub fn from_seed(seed: Triangulation, up_to_symmetry: bool) -> Self {
        let polygon = seed.polygon.clone();
        let group = if up_to_symmetry {
            affine_symmetries(&polygon)
        } else {
            SymmetryGroup::trivial(polygon.len())
        };
        let mut visited = Visited::default();
        visited.insert(pack(&group.canonical_triangles(&seed.triangles)));
        Enumerator {
            polygon,
            group,
            visited,
            head: 0,
        }
    }

    pub fn group(&self) -> &SymmetryGroup {
        &self.group
    }

    /// Number of classes yielded so far.
    pub fn yielded(&self) -> usize {
        self.head
    }

    pub fn discovered(&self) -> usize {
        self.visited.len()
    }

    /// Serializes the search state (discovered classes and queue position).
    pub fn checkpoint(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "tropimod-enumeration 1");
        let _ = writeln!(out, "points {}", self.polygon.len());
        let _ = writeln!(out, "group {}", self.group.order());
        let _ = writeln!(out, "head {}", self.head);
        for v in &self.visited {
            let s: Vec<String> = v.iter().map(|w| w.to_string()).collect();
            let _ = writeln!(out, "{}", s.join(" "));
        }
        out
    }

    /// Restores a state written by [`Enumerator::checkpoint`].
    pub fn resume(polygon: Arc<LatticePolygon>, up_to_symmetry: bool, text: &str) -> Result<Self> {
        let mut e = Enumerator::new(polygon, up_to_symmetry);
        let mut lines = text.lines().enumerate();
        let mut header = |key: &str| -> Result<usize> {
            let (i, l) = lines.next().ok_or_else(|| Error::parse(0, "truncated checkpoint"))?;
            let v = l
                .strip_prefix(key)
                .and_then(|r| r.trim().parse().ok())
                .ok_or_else(|| Error::parse(i + 1, format!("expected {key:?}")))?;
            Ok(v)
        };
        if header("tropimod-enumeration")? != 1 {
            return Err(Error::parse(1, "unknown checkpoint version"));
        }
        if header("points")? != e.polygon.len() || header("group")? != e.group.order() {
            return Err(Error::parse(2, "checkpoint belongs to a different enumeration"));
        }
        let head = header("head")?;
        let mut visited = Visited::default();
        for (i, l) in lines {
            let v: Box<[u32]> = l
                .split_whitespace()
                .map(|w| w.parse().map_err(|_| Error::parse(i + 1, "bad packed triangle")))
                .collect::<Result<_>>()?;
            visited.insert(v);
        }
        if head > visited.len() || visited.is_empty() {
            return Err(Error::parse(4, "queue position out of range"));
        }
        e.visited = visited;
        e.head = head;
        Ok(e)
    }
}

impl Iterator for Enumerator {
    type Item = Triangulation;

    fn next(&mut self) -> Option<Triangulation> {
        let packed = self.visited.get_index(self.head)?;
        let t = Triangulation::from_trusted(self.polygon.clone(), unpack(packed));
        self.head += 1;
        for e in t.interior_edges() {
            if let Some(f) = t.flip(e) {
                let c = pack(&self.group.canonical_triangles(&f.triangles));
                self.visited.insert(c);
            }
        }
        Some(t)
    }
}

/// All unimodular triangulations of the polygon's points, optionally one
/// per symmetry class and optionally only the regular ones.
pub fn enumerate_unimodular(
    polygon: &LatticePolygon,
    up_to_symmetry: bool,
    regular_only: bool,
) -> Vec<Triangulation> {
    let it = Enumerator::new(Arc::new(polygon.clone()), up_to_symmetry);
    if regular_only {
        it.filter(|t| is_regular(t).is_some()).collect()
    } else {
        it.collect()
    }
}

/// A random walk of `steps` flips.
pub fn random_flip_walk<R: Rng>(t: &Triangulation, steps: usize, rng: &mut R) -> Triangulation {
    let mut cur = t.clone();
    for _ in 0..steps {
        let options: Vec<&InteriorEdge> = cur
            .interior_edges()
            .iter()
            .filter(|e| cur.is_flippable(e))
            .collect();
        let Some(e) = options.choose(rng) else {
            break;
        };
        cur = cur.flip(e).expect("flippable edge");
    }
    cur
}

/// Heights on the point configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightFunction {
    pub values: Vec<i128>,
}

impl HeightFunction {
    /// Value of every interior edge's flip form.
    pub fn flip_values(&self, t: &Triangulation) -> Vec<i128> {
        t.interior_edges()
            .iter()
            .map(|e| {
                t.flip_form(e)
                    .iter()
                    .map(|&(i, c)| c as i128 * self.values[i as usize])
                    .sum()
            })
            .collect()
    }
}

/// Linear program: variables `u` (heights shifted into `[0, 2]`), `t`, then
/// one slack per row. Rows: `t - flip_e(u) <= 0`, `u_j <= 2`, `t <= 1`.
fn regularity_lp<F: LpNum>(t: &Triangulation) -> (Vec<Vec<F>>, Vec<F>, Vec<F>) {
    let n = t.polygon.len();
    let edges = t.interior_edges();
    let rows = edges.len() + n + 1;
    let cols = n + 1 + rows;
    let mut a = vec![vec![F::zero(); cols]; rows];
    let mut b = vec![F::zero(); rows];
    for (r, e) in edges.iter().enumerate() {
        for (i, c) in t.flip_form(e) {
            a[r][i as usize] = a[r][i as usize].sub(&F::from_i64(c));
        }
        a[r][n] = F::one();
    }
    for j in 0..n {
        let r = edges.len() + j;
        a[r][j] = F::one();
        b[r] = F::from_i64(2);
    }
    a[rows - 1][n] = F::one();
    b[rows - 1] = F::one();
    for (r, row) in a.iter_mut().enumerate() {
        row[n + 1 + r] = F::one();
    }
    let mut c = vec![F::zero(); cols];
    c[n] = F::one();
    (a, b, c)
}

fn certify(t: &Triangulation, h: Vec<i128>) -> Option<HeightFunction> {
    let hf = HeightFunction { values: h };
    hf.flip_values(t).iter().all(|&v| v > 0).then_some(hf)
}

/// Decides regularity. Returns integral heights whose flip values are all
/// strictly positive when the triangulation is regular.
///
/// A floating-point solve proposes a witness which is then checked exactly;
/// if that fails the same program is solved over the rationals.
pub fn is_regular(t: &Triangulation) -> Option<HeightFunction> {
    if t.interior_edges().is_empty() {
        return Some(HeightFunction {
            values: vec![0; t.polygon.len()],
        });
    }
    let n = t.polygon.len();
    let (a, b, c) = regularity_lp::<f64>(t);
    if let LpOutcome::Optimal { x, value } = maximize(&a, &b, &c) {
        if value > 1e-9 {
            for scale in [1e3, 1e6, 1e9, 1e12] {
                let h: Vec<i128> = x[..n].iter().map(|u| ((u - 1.0) * scale).round() as i128).collect();
                if let Some(w) = certify(t, h) {
                    return Some(w);
                }
            }
        }
    }
    is_regular_exact(t)
}

/// The exact rational version of [`is_regular`].
pub fn is_regular_exact(t: &Triangulation) -> Option<HeightFunction> {
    let n = t.polygon.len();
    let (a, b, c) = regularity_lp::<BigRational>(t);
    let LpOutcome::Optimal { x, value } = maximize(&a, &b, &c) else {
        return None;
    };
    if !value.is_positive() {
        return None;
    }
    let one = <BigRational as One>::one();
    let shifted: Vec<BigRational> = x[..n].iter().map(|u| u - &one).collect();
    let lcm = shifted
        .iter()
        .fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let h: Option<Vec<i128>> = shifted
        .iter()
        .map(|q| (q.numer() * (&lcm / q.denom())).to_i128())
        .collect();
    let h = h?;
    debug_assert!(certify(t, h.clone()).is_some());
    certify(t, h)
}

/// The secondary cone `{ h : every flip form >= 0 }` in the space of heights.
/// In pointed mode the heights of the first triangle's vertices are pinned to
/// zero, removing the three-dimensional space of affine functions.
pub fn secondary_cone(t: &Triangulation, pointed: bool) -> Cone {
    let n = t.polygon.len();
    let ineqs: Vec<IntVec> = t.interior_edges().iter().map(|e| t.flip_row(e)).collect();
    let mut eqs = Vec::new();
    if pointed {
        for &i in &t.triangles[0] {
            let mut e = vec![0i128; n];
            e[i as usize] = 1;
            eqs.push(e);
        }
    }
    Cone::from_h(n, ineqs, eqs)
}

/// Writes the triangulation file format.
pub fn write_triangulation(t: &Triangulation, polygon_spec: &str) -> String {
    let mut out = format!("polygon {polygon_spec}\n");
    for [a, b, c] in &t.triangles {
        let _ = writeln!(out, "{a} {b} {c}");
    }
    out
}

/// Parses the triangulation file format. `resolve` turns the header's
/// polygon spec into a polygon.
pub fn parse_triangulation(
    text: &str,
    resolve: impl FnOnce(&str) -> Result<LatticePolygon>,
) -> Result<Triangulation> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, head) = lines.next().ok_or_else(|| Error::parse(1, "empty triangulation file"))?;
    let spec = head
        .strip_prefix("polygon")
        .ok_or_else(|| Error::parse(ln, "expected \"polygon <spec>\" header"))?
        .trim();
    let polygon = Arc::new(resolve(spec)?);
    let mut tris = Vec::new();
    for (ln, l) in lines {
        let v: Vec<u16> = l
            .split_whitespace()
            .map(|w| w.parse().map_err(|_| Error::parse(ln, format!("bad index {w:?}"))))
            .collect::<Result<_>>()?;
        if v.len() != 3 {
            return Err(Error::parse(ln, "expected \"i j k\""));
        }
        tris.push([v[0], v[1], v[2]]);
    }
    Triangulation::new(polygon, tris)
}

/// Triangles of the honeycomb subdivision of a honeycomb polygon: slice by
/// the lines `x = i`, `y = j` and `x + y = k`.
pub fn honeycomb_triangulation(polygon: Arc<LatticePolygon>) -> Result<Triangulation> {
    let idx = |x: i64, y: i64| polygon.index_of(LatticePoint::new(x, y)).map(|i| i as u16);
    let mut tris = Vec::new();
    // every unit square meeting the polygon has its lower-left corner at or
    // just below/left of a lattice point
    for p in polygon.points() {
        for (x, y) in [(p.x, p.y), (p.x - 1, p.y), (p.x, p.y - 1), (p.x - 1, p.y - 1)] {
            if let (Some(a), Some(b), Some(c)) = (idx(x, y), idx(x + 1, y), idx(x, y + 1)) {
                tris.push([a, b, c]);
            }
            if let (Some(a), Some(b), Some(c)) = (idx(x + 1, y), idx(x, y + 1), idx(x + 1, y + 1)) {
                tris.push([a, b, c]);
            }
        }
    }
    tris.sort_unstable();
    tris.dedup();
    Triangulation::new(polygon, tris)
}

/// Queue-based helper used by tests and checks: every class reachable from
/// `seed` by flips, without the iterator machinery.
pub fn flip_closure_count(seed: &Triangulation, group: &SymmetryGroup) -> usize {
    let mut seen = std::collections::HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(group.canonical_triangles(&seed.triangles));
    queue.push_back(seed.clone());
    while let Some(t) = queue.pop_front() {
        for f in t.flips() {
            let c = group.canonical_triangles(&f.triangles);
            if seen.insert(c) {
                queue.push_back(f);
            }
        }
    }
    seen.len()
}

/// Small helper for callers that need exact rationals of the heights.
pub fn heights_as_rationals(h: &HeightFunction) -> Vec<BigRational> {
    h.values.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{family, Family};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(f: Family) -> Arc<LatticePolygon> {
        Arc::new(family(f).unwrap())
    }

    #[test]
    fn unit_square() {
        let sq = poly(Family::Rectangle(1, 1));
        // points (0,0)=0 (0,1)=1 (1,0)=2 (1,1)=3
        let t = Triangulation::new(sq.clone(), vec![[0, 1, 2], [1, 2, 3]]).unwrap();
        assert_eq!(t.interior_edges().len(), 1);
        let row = t.flip_row(&t.interior_edges()[0]);
        assert_eq!(row, vec![1, -1, -1, 1]);
        let f = t.flips();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].triangles(), &[[0, 1, 3], [0, 2, 3]]);
        assert_eq!(f[0].flips()[0], t);
        assert_eq!(enumerate_unimodular(&sq, false, false).len(), 2);
        assert!(is_regular(&t).is_some() && is_regular(&f[0]).is_some());
    }

    #[test]
    fn placing_is_valid() {
        for f in [
            Family::Triangle(4),
            Family::Rectangle(4, 2),
            Family::Honeycomb(5, 4, 2, 5),
            Family::Hyperelliptic { g: 3, k: 5 },
            Family::Maximal { g: 5, i: 2 },
            Family::Maximal { g: 6, i: 2 },
        ] {
            let p = poly(f);
            let t = placing_triangulation(p.clone());
            let v = Triangulation::new(p.clone(), t.triangles().to_vec()).unwrap();
            assert_eq!(v.interior_edges(), t.interior_edges());
            let b = p.boundary_count();
            assert_eq!(3 * t.triangles().len(), 2 * t.interior_edges().len() + b);
        }
    }

    #[test]
    fn validation_rejects_bad_input() {
        let sq = poly(Family::Rectangle(1, 1));
        assert!(Triangulation::new(sq.clone(), vec![[0, 1, 2]]).is_err());
        assert!(Triangulation::new(sq.clone(), vec![[0, 1, 2], [0, 1, 3]]).is_err());
        let t2 = poly(Family::Triangle(2));
        assert!(Triangulation::new(t2, vec![[0, 2, 5], [0, 1, 2], [1, 2, 3]]).is_err());
    }

    #[test]
    fn t3_honeycomb() {
        let p = poly(Family::Triangle(3));
        let t = honeycomb_triangulation(p).unwrap();
        assert_eq!(t.triangles().len(), 9);
        let parallelograms = t.interior_edges().iter().filter(|e| t.is_flippable(e)).count();
        assert_eq!(t.flips().len(), parallelograms);
        assert_eq!(parallelograms, t.interior_edges().len());
        let w = is_regular(&t).unwrap();
        assert!(w.flip_values(&t).iter().all(|&v| v > 0));
    }

    #[test]
    fn quadratic_height_is_a_honeycomb_witness() {
        for f in [Family::Honeycomb(5, 4, 2, 5), Family::Honeycomb(4, 4, 2, 6), Family::Triangle(4)] {
            let p = poly(f);
            let t = honeycomb_triangulation(p.clone()).unwrap();
            let h = HeightFunction {
                values: p.points().iter().map(|q| (q.x * q.x + q.x * q.y + q.y * q.y) as i128).collect(),
            };
            assert!(h.flip_values(&t).iter().all(|&v| v > 0), "{f}");
        }
    }

    #[test]
    fn small_counts() {
        // T_2 has 6 lattice points; its unimodular triangulations
        let t2 = poly(Family::Triangle(2));
        let all = enumerate_unimodular(&t2, false, false);
        assert_eq!(all.len(), 4);
        let sym = enumerate_unimodular(&t2, true, false);
        let g = affine_symmetries(&t2);
        assert_eq!(g.order(), 6);
        let total: usize = sym.iter().map(|t| g.orbit_size(t)).sum();
        assert_eq!(total, all.len());
        let sq = poly(Family::Rectangle(2, 2));
        let all = enumerate_unimodular(&sq, false, false);
        let sym = enumerate_unimodular(&sq, true, false);
        let g = affine_symmetries(&sq);
        assert_eq!(sym.iter().map(|t| g.orbit_size(t)).sum::<usize>(), all.len());
        assert!(all.iter().all(|t| is_regular(t).is_some()));
    }

    #[test]
    fn random_seeds_reach_everything() {
        let p = poly(Family::Rectangle(3, 2));
        let g = affine_symmetries(&p);
        let base = placing_triangulation(p.clone());
        let expected = flip_closure_count(&base, &g);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let s = random_flip_walk(&base, 50, &mut rng);
            assert_eq!(Enumerator::from_seed(s, true).count(), expected);
        }
    }

    #[test]
    fn checkpoint_resume() {
        let p = poly(Family::Rectangle(3, 2));
        let full: Vec<_> = Enumerator::new(p.clone(), true).collect();
        let mut e = Enumerator::new(p.clone(), true);
        let first: Vec<_> = e.by_ref().take(7).collect();
        let text = e.checkpoint();
        let rest: Vec<_> = Enumerator::resume(p.clone(), true, &text).unwrap().collect();
        assert_eq!(first.len() + rest.len(), full.len());
        assert_eq!(&full[7..], &rest[..]);
        assert!(Enumerator::resume(p, false, &text).is_err());
    }

    #[test]
    fn file_round_trip() {
        let p = poly(Family::Triangle(4));
        let t = placing_triangulation(p.clone());
        let s = write_triangulation(&t, "T 4");
        let back = parse_triangulation(&s, |spec| {
            assert_eq!(spec, "T 4");
            Ok((*p).clone())
        })
        .unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn secondary_cone_dims() {
        let p = poly(Family::Triangle(4));
        let t = placing_triangulation(p);
        let w = is_regular(&t).unwrap();
        let c = secondary_cone(&t, true);
        assert_eq!(c.dimension().unwrap(), 12);
        let full = secondary_cone(&t, false);
        assert!(full.contains_point(&w.values).unwrap());
        assert_eq!(full.lineality().unwrap().len(), 3);
    }
}
