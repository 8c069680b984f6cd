//! Lattice polygons, their lattice points, interior hulls and the named
//! polygon families (triangles, rectangles, honeycombs, hyperelliptic
//! trapezoids and the curated maximal polygons of genus 3 to 6).

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub(crate) fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn igcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Convex hull, counterclockwise, without collinear points. Starts at the
/// lexicographically smallest point.
fn convex_hull(pts: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut p: Vec<LatticePoint> = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// A convex lattice polygon together with its sorted point configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
    points: Vec<LatticePoint>,
    boundary: Vec<bool>,
    boundary_count: usize,
}

impl LatticePolygon {
    /// The convex hull of `pts`. Fails if the hull is not two-dimensional.
    pub fn from_points(pts: &[LatticePoint]) -> Result<Self> {
        let vertices = convex_hull(pts);
        if vertices.len() < 3 {
            return Err(Error::Degenerate(
                "the points do not span a two-dimensional polygon".into(),
            ));
        }
        let (xmin, xmax) = minmax(vertices.iter().map(|p| p.x));
        let (ymin, ymax) = minmax(vertices.iter().map(|p| p.y));
        let facets = facets_of(&vertices);
        let mut points = Vec::new();
        let mut boundary = Vec::new();
        for x in xmin..=xmax {
            for y in ymin..=ymax {
                let mut inside = true;
                let mut on_edge = false;
                for &(a, b, c) in &facets {
                    let v = a * x + b * y;
                    if v > c {
                        inside = false;
                        break;
                    }
                    if v == c {
                        on_edge = true;
                    }
                }
                if inside {
                    points.push(LatticePoint::new(x, y));
                    boundary.push(on_edge);
                }
            }
        }
        let boundary_count = boundary.iter().filter(|&&b| b).count();
        Ok(LatticePolygon {
            vertices,
            points,
            boundary,
            boundary_count,
        })
    }

    pub fn from_coords(coords: &[(i64, i64)]) -> Result<Self> {
        let pts: Vec<_> = coords.iter().map(|&(x, y)| LatticePoint::new(x, y)).collect();
        Self::from_points(&pts)
    }

    /// Vertices in counterclockwise order, starting at the lexicographic minimum.
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// All lattice points, sorted lexicographically.
    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary[i]
    }

    pub fn index_of(&self, p: LatticePoint) -> Option<usize> {
        self.points.binary_search(&p).ok()
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_count
    }

    pub fn interior_count(&self) -> usize {
        self.points.len() - self.boundary_count
    }

    pub fn genus(&self) -> usize {
        self.interior_count()
    }

    pub fn interior_points(&self) -> Vec<LatticePoint> {
        self.points
            .iter()
            .zip(&self.boundary)
            .filter(|(_, &b)| !b)
            .map(|(p, _)| *p)
            .collect()
    }

    /// Twice the Euclidean area, which is also the number of triangles in
    /// any unimodular triangulation.
    pub fn twice_area(&self) -> i64 {
        let v = &self.vertices;
        let n = v.len();
        (0..n)
            .map(|i| v[i].x * v[(i + 1) % n].y - v[(i + 1) % n].x * v[i].y)
            .sum()
    }

    /// Facet inequalities `a x + b y <= c` with `(a, b)` primitive.
    pub fn facets(&self) -> Vec<(i64, i64, i64)> {
        facets_of(&self.vertices)
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.facets().iter().all(|&(a, b, c)| a * p.x + b * p.y <= c)
    }

    pub fn is_vertex(&self, p: LatticePoint) -> bool {
        self.vertices.contains(&p)
    }

    pub fn translate(&self, dx: i64, dy: i64) -> LatticePolygon {
        let v: Vec<_> = self
            .vertices
            .iter()
            .map(|p| LatticePoint::new(p.x + dx, p.y + dy))
            .collect();
        LatticePolygon::from_points(&v).expect("translation preserves dimension")
    }
}

fn minmax(it: impl Iterator<Item = i64>) -> (i64, i64) {
    it.fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn facets_of(vertices: &[LatticePoint]) -> Vec<(i64, i64, i64)> {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let p = vertices[i];
            let q = vertices[(i + 1) % n];
            let (dx, dy) = (q.x - p.x, q.y - p.y);
            let g = igcd(dx, dy);
            let (a, b) = (dy / g, -dx / g);
            (a, b, a * p.x + b * p.y)
        })
        .collect()
}

pub fn lattice_points(p: &LatticePolygon) -> &[LatticePoint] {
    p.points()
}

pub fn genus(p: &LatticePolygon) -> usize {
    p.genus()
}

/// Convex hull of the interior lattice points of a polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InteriorHull {
    Empty,
    Point(LatticePoint),
    /// Endpoints and the number of lattice points on the segment.
    Segment(LatticePoint, LatticePoint, usize),
    Polygon(LatticePolygon),
}

impl InteriorHull {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            InteriorHull::Empty => None,
            InteriorHull::Point(_) => Some(0),
            InteriorHull::Segment(..) => Some(1),
            InteriorHull::Polygon(_) => Some(2),
        }
    }
}

pub fn interior_hull(p: &LatticePolygon) -> InteriorHull {
    let pts = p.interior_points();
    match pts.len() {
        0 => InteriorHull::Empty,
        1 => InteriorHull::Point(pts[0]),
        _ => match LatticePolygon::from_points(&pts) {
            Ok(q) => InteriorHull::Polygon(q),
            Err(_) => {
                // collinear, and sorted lexicographically
                InteriorHull::Segment(pts[0], pts[pts.len() - 1], pts.len())
            }
        },
    }
}

type Q = Ratio<i64>;

/// Vertices of `{ a x + b y <= c }` for a bounded system of half-planes.
fn halfplane_vertices(ineqs: &[(i64, i64, i64)]) -> Vec<(Q, Q)> {
    let mut out: Vec<(Q, Q)> = Vec::new();
    for i in 0..ineqs.len() {
        for j in i + 1..ineqs.len() {
            let (a1, b1, c1) = ineqs[i];
            let (a2, b2, c2) = ineqs[j];
            let det = a1 * b2 - a2 * b1;
            if det == 0 {
                continue;
            }
            let x = Q::new(c1 * b2 - c2 * b1, det);
            let y = Q::new(a1 * c2 - a2 * c1, det);
            let feasible = ineqs
                .iter()
                .all(|&(a, b, c)| x * a + y * b <= Q::from_integer(c));
            if feasible && !out.contains(&(x, y)) {
                out.push((x, y));
            }
        }
    }
    out
}

/// The largest polygon whose interior hull is `hull`: every facet is pushed
/// out by one lattice step. Fails when the result has a non-integral vertex.
pub fn maximal_polygon(hull: &LatticePolygon) -> Result<LatticePolygon> {
    let relaxed: Vec<_> = hull
        .facets()
        .into_iter()
        .map(|(a, b, c)| (a, b, c + 1))
        .collect();
    let verts = halfplane_vertices(&relaxed);
    let mut pts = Vec::with_capacity(verts.len());
    for (x, y) in verts {
        if !x.is_integer() || !y.is_integer() {
            return Err(Error::NotRealizable);
        }
        pts.push(LatticePoint::new(x.to_integer(), y.to_integer()));
    }
    LatticePolygon::from_points(&pts)
}

/// Named polygon families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `conv{(0,0),(0,d),(d,0)}`
    Triangle(i64),
    /// `conv{(0,0),(d,0),(0,e),(d,e)}`
    Rectangle(i64, i64),
    /// `0 <= x <= a, 0 <= y <= b, c <= x + y <= d`
    Honeycomb(i64, i64, i64, i64),
    /// `E_k` of genus g: `conv{(0,0),(0,2),(g+k,0),(g+2-k,2)}`
    Hyperelliptic { g: i64, k: i64 },
    /// The i-th curated maximal polygon of genus g (1-based).
    Maximal { g: i64, i: i64 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Triangle(d) => write!(f, "T {d}"),
            Family::Rectangle(d, e) => write!(f, "R {d} {e}"),
            Family::Honeycomb(a, b, c, d) => write!(f, "H {a} {b} {c} {d}"),
            Family::Hyperelliptic { g, k } => write!(f, "E {g} {k}"),
            Family::Maximal { g, i } => write!(f, "Q {g} {i}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut it = s.split_whitespace();
        let kind = it.next().ok_or_else(|| Error::parse(1, "empty family spec"))?;
        let nums: Vec<i64> = it
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::parse(1, format!("bad integer {t:?}")))
            })
            .collect::<Result<_>>()?;
        let want = |n: usize| -> Result<()> {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::parse(
                    1,
                    format!("family {kind} takes {n} parameters, got {}", nums.len()),
                ))
            }
        };
        match kind {
            "T" => {
                want(1)?;
                Ok(Family::Triangle(nums[0]))
            }
            "R" => {
                want(2)?;
                Ok(Family::Rectangle(nums[0], nums[1]))
            }
            "H" => {
                want(4)?;
                Ok(Family::Honeycomb(nums[0], nums[1], nums[2], nums[3]))
            }
            "E" => {
                want(2)?;
                Ok(Family::Hyperelliptic {
                    g: nums[0],
                    k: nums[1],
                })
            }
            "Q" => {
                want(2)?;
                Ok(Family::Maximal {
                    g: nums[0],
                    i: nums[1],
                })
            }
            _ => Err(Error::parse(1, format!("unknown family {kind:?}"))),
        }
    }
}

const CURATED: [&[&[(i64, i64)]]; 4] = [
    &[&[(0, 0), (0, 4), (4, 0)]],
    &[
        &[(0, 0), (0, 3), (3, 0), (3, 3)],
        &[(0, 0), (0, 3), (6, 0)],
        &[(0, 2), (2, 4), (4, 0)],
    ],
    &[
        &[(0, 0), (0, 4), (4, 2)],
        &[(2, 0), (5, 0), (0, 5), (0, 2)],
        &[(2, 0), (4, 2), (2, 4), (0, 2)],
        &[(0, 0), (0, 2), (2, 0), (4, 4)],
    ],
    &[
        &[(0, 0), (0, 5), (5, 0)],
        &[(0, 0), (0, 7), (3, 0), (3, 1)],
        &[(0, 0), (0, 4), (3, 0), (3, 4)],
        &[(0, 0), (0, 4), (2, 0), (4, 2)],
    ],
];

pub fn family(f: Family) -> Result<LatticePolygon> {
    let bad = |msg: String| Err(Error::InvalidParams(msg));
    match f {
        Family::Triangle(d) => {
            if d < 1 {
                return bad(format!("T_{d} needs d >= 1"));
            }
            LatticePolygon::from_coords(&[(0, 0), (0, d), (d, 0)])
        }
        Family::Rectangle(d, e) => {
            if d < 1 || e < 1 {
                return bad(format!("R_{{{d},{e}}} needs d, e >= 1"));
            }
            LatticePolygon::from_coords(&[(0, 0), (d, 0), (0, e), (d, e)])
        }
        Family::Honeycomb(a, b, c, d) => {
            if !(0 <= c && c <= a && c <= b && a <= d && b <= d && d <= a + b) {
                return bad(format!(
                    "H_{{{a},{b},{c},{d}}} violates 0 <= c <= a,b <= d <= a+b"
                ));
            }
            let verts = halfplane_vertices(&[
                (-1, 0, 0),
                (1, 0, a),
                (0, -1, 0),
                (0, 1, b),
                (-1, -1, -c),
                (1, 1, d),
            ]);
            let pts: Vec<_> = verts
                .into_iter()
                .map(|(x, y)| LatticePoint::new(x.to_integer(), y.to_integer()))
                .collect();
            LatticePolygon::from_points(&pts)
        }
        Family::Hyperelliptic { g, k } => {
            if g < 2 || k < 1 || k > g + 2 {
                return bad(format!("E_{k} of genus {g} needs g >= 2, 1 <= k <= g+2"));
            }
            LatticePolygon::from_coords(&[(0, 0), (0, 2), (g + k, 0), (g + 2 - k, 2)])
        }
        Family::Maximal { g, i } => {
            if !(3..=6).contains(&g) {
                return Err(Error::Unsupported(format!(
                    "curated maximal polygons exist for genus 3..6, not {g}"
                )));
            }
            let list = CURATED[(g - 3) as usize];
            if i < 1 || i as usize > list.len() {
                return bad(format!("genus {g} has {} curated polygons", list.len()));
            }
            LatticePolygon::from_coords(list[(i - 1) as usize])
        }
    }
}

/// Maximal polygons of genus g: those with two-dimensional interior hull
/// (curated for 3 <= g <= 6) and the g+2 hyperelliptic trapezoids.
#[derive(Clone, Debug)]
pub struct Classification {
    pub two_dimensional: Vec<LatticePolygon>,
    pub hyperelliptic: Vec<LatticePolygon>,
}

pub fn classify_maximal_polygons(g: usize) -> Result<Classification> {
    let gi = g as i64;
    let hyperelliptic = if g >= 2 {
        (1..=gi + 2)
            .map(|k| family(Family::Hyperelliptic { g: gi, k }))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let two_dimensional = match g {
        0..=2 => Vec::new(),
        3..=6 => (1..=CURATED[g - 3].len() as i64)
            .map(|i| family(Family::Maximal { g: gi, i }))
            .collect::<Result<_>>()?,
        _ => {
            return Err(Error::Unsupported(format!(
                "maximal polygons with two-dimensional interior are curated for genus <= 6, not {g}"
            )))
        }
    };
    Ok(Classification {
        two_dimensional,
        hyperelliptic,
    })
}

/// The boundary bound `#(boundary points) <= 2g + 7` for polygons of genus >= 1.
pub fn scott_check(p: &LatticePolygon) -> bool {
    p.boundary_count() <= 2 * p.genus() + 7
}

/// An integral affine map `v -> m v + t` with `det m = +-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub m: [[i64; 2]; 2],
    pub t: [i64; 2],
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        m: [[1, 0], [0, 1]],
        t: [0, 0],
    };

    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        LatticePoint::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y + self.t[0],
            self.m[1][0] * p.x + self.m[1][1] * p.y + self.t[1],
        )
    }

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let a = self.m;
        let b = other.m;
        let m = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        let t = [
            a[0][0] * other.t[0] + a[0][1] * other.t[1] + self.t[0],
            a[1][0] * other.t[0] + a[1][1] * other.t[1] + self.t[1],
        ];
        AffineMap { m, t }
    }

    pub fn inverse(&self) -> AffineMap {
        let d = self.det();
        debug_assert!(d == 1 || d == -1);
        let m = [
            [self.m[1][1] * d, -self.m[0][1] * d],
            [-self.m[1][0] * d, self.m[0][0] * d],
        ];
        let t = [
            -(m[0][0] * self.t[0] + m[0][1] * self.t[1]),
            -(m[1][0] * self.t[0] + m[1][1] * self.t[1]),
        ];
        AffineMap { m, t }
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Normalizing maps: for each vertex and each of its two edges, the unique
/// unimodular map sending the vertex to the origin, the edge direction to
/// (1,0) and the other edge into `{0 <= s < t}`.
fn normalizing_maps(p: &LatticePolygon) -> Vec<AffineMap> {
    let v = p.vertices();
    let n = v.len();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let next = v[(i + 1) % n];
        let prev = v[(i + n - 1) % n];
        for (a, b) in [(next, prev), (prev, next)] {
            let (ex, ey) = (a.x - v[i].x, a.y - v[i].y);
            let g = igcd(ex, ey);
            let (ex, ey) = (ex / g, ey / g);
            // ex*s - ey*r = 1
            let (_, s0, r0) = ext_gcd(ex, -ey);
            let (r, s) = (r0, s0);
            debug_assert_eq!(ex * s - ey * r, 1);
            // inverse of [[ex, r],[ey, s]]
            let mut m = [[s, -r], [-ey, ex]];
            let (fx, fy) = (b.x - v[i].x, b.y - v[i].y);
            let mut fs = m[0][0] * fx + m[0][1] * fy;
            let mut ft = m[1][0] * fx + m[1][1] * fy;
            if ft < 0 {
                m[1] = [-m[1][0], -m[1][1]];
                ft = -ft;
            }
            let k = fs.div_euclid(ft);
            m[0] = [m[0][0] - k * m[1][0], m[0][1] - k * m[1][1]];
            fs -= k * ft;
            debug_assert!(0 <= fs && fs < ft);
            let lin = AffineMap { m, t: [0, 0] };
            let o = lin.apply(v[i]);
            out.push(AffineMap {
                m,
                t: [-o.x, -o.y],
            });
        }
    }
    out
}

fn image_form(p: &LatticePolygon, f: &AffineMap) -> Vec<LatticePoint> {
    let mut w: Vec<_> = p.vertices().iter().map(|&q| f.apply(q)).collect();
    w.sort();
    w
}

/// Canonical vertex list of the lattice-equivalence class of `p`, together
/// with every normalizing map that attains it.
fn canonical(p: &LatticePolygon) -> (Vec<LatticePoint>, Vec<AffineMap>) {
    let mut best: Option<Vec<LatticePoint>> = None;
    let mut maps = Vec::new();
    for f in normalizing_maps(p) {
        let form = image_form(p, &f);
        match &best {
            Some(b) if form > *b => {}
            Some(b) if form == *b => maps.push(f),
            _ => {
                best = Some(form);
                maps = vec![f];
            }
        }
    }
    (best.unwrap_or_default(), maps)
}

/// Canonical representative of the lattice-equivalence class of `p`.
pub fn canonical_polygon(p: &LatticePolygon) -> LatticePolygon {
    LatticePolygon::from_points(&canonical(p).0).expect("canonical form is two-dimensional")
}

/// Returns an affine unimodular map sending `p` onto `q`, if one exists.
pub fn lattice_equivalent(p: &LatticePolygon, q: &LatticePolygon) -> Option<AffineMap> {
    if p.len() != q.len() || p.vertices().len() != q.vertices().len() {
        return None;
    }
    let (fp, mp) = canonical(p);
    let (fq, mq) = canonical(q);
    if fp != fq {
        return None;
    }
    Some(mq[0].inverse().compose(&mp[0]))
}

/// Every affine unimodular map preserving `p`.
pub fn affine_automorphisms(p: &LatticePolygon) -> Vec<AffineMap> {
    let (_, maps) = canonical(p);
    let inv = maps[0].inverse();
    maps.iter().map(|f| inv.compose(f)).collect()
}

/// Parses a polygon file: either a single family line such as `H 5 4 2 5`,
/// or one `x y` vertex per line. `#` starts a comment.
pub fn parse_polygon(text: &str) -> Result<LatticePolygon> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let Some(&(first_line, first)) = lines.first() else {
        return Err(Error::parse(1, "no polygon given"));
    };
    if first.starts_with(|c: char| c.is_ascii_alphabetic()) {
        if lines.len() > 1 {
            return Err(Error::parse(lines[1].0, "unexpected line after family spec"));
        }
        let f: Family = first.parse().map_err(|e| match e {
            Error::Parse { msg, .. } => Error::parse(first_line, msg),
            e => e,
        })?;
        return family(f);
    }
    let mut pts = Vec::new();
    for (ln, l) in lines {
        let nums: Vec<&str> = l.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(Error::parse(ln, "expected \"x y\""));
        }
        let x = nums[0]
            .parse()
            .map_err(|_| Error::parse(ln, format!("bad integer {:?}", nums[0])))?;
        let y = nums[1]
            .parse()
            .map_err(|_| Error::parse(ln, format!("bad integer {:?}", nums[1])))?;
        pts.push(LatticePoint::new(x, y));
    }
    LatticePolygon::from_points(&pts)
}

pub fn write_polygon(p: &LatticePolygon) -> String {
    let mut s = String::new();
    for v in p.vertices() {
        s.push_str(&format!("{} {}\n", v.x, v.y));
    }
    s
}
