//! Moduli cones of tropical plane curves, censuses over all triangulations of
//! a polygon, and their unions per skeleton graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use crate::arith::IntVec;
use crate::cone::{Cone, LinearMap};
use crate::error::{Error, Result};
use crate::lattice::{
    classify_maximal_polygons, family, interior_hull, Family, InteriorHull, LatticePoint,
    LatticePolygon,
};
use crate::skeleton::{
    canonical_form, extract_skeleton, genus3, is_planar, is_sprawling, label, CanonicalForm,
    MultiGraph, SkeletonMap,
};
use crate::triangulate::{is_regular, secondary_cone, Enumerator, Triangulation};

/// Heights to dual edge lengths: one flip form per interior edge.
pub fn lambda_map(t: &Triangulation) -> LinearMap {
    LinearMap::new(
        t.polygon().len(),
        t.interior_edges().iter().map(|e| t.flip_row(e)).collect(),
    )
}

/// `lambda_map` restricted to the interior edges that lie on the skeleton.
pub fn skeletal_lambda_map(t: &Triangulation, s: &SkeletonMap) -> LinearMap {
    let mut keep: Vec<usize> = s.edge_composition.iter().flatten().copied().collect();
    keep.sort_unstable();
    LinearMap::new(
        t.polygon().len(),
        keep.iter().map(|&e| t.flip_row(&t.interior_edges()[e])).collect(),
    )
}

/// Dual edge lengths to skeleton edge lengths, rows in skeleton edge order.
pub fn kappa_map(s: &SkeletonMap, interior_edges: usize) -> LinearMap {
    LinearMap::new(
        interior_edges,
        s.edge_composition
            .iter()
            .map(|comp| {
                let mut row = vec![0i128; interior_edges];
                for &e in comp {
                    row[e] = 1;
                }
                row
            })
            .collect(),
    )
}

/// Skeleton, canonical graph and the composite map from heights to skeleton
/// edge lengths in canonical edge coordinates.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub skeleton: SkeletonMap,
    pub canonical: CanonicalForm,
    pub map: LinearMap,
}

impl Analysis {
    pub fn graph(&self) -> &MultiGraph {
        &self.canonical.graph
    }

    /// Dimension of the moduli cone. The secondary cone of a regular
    /// triangulation is full-dimensional, so this is the rank of the map.
    pub fn dimension(&self) -> usize {
        self.map.rank()
    }
}

pub fn analyze(t: &Triangulation) -> Result<Analysis> {
    let skeleton = extract_skeleton(t)?;
    let canonical = canonical_form(&skeleton.graph)?;
    let kappa = kappa_map(&skeleton, t.interior_edges().len());
    let mut rows = vec![Vec::new(); kappa.rows()];
    for (i, row) in kappa.matrix().iter().enumerate() {
        rows[canonical.edge_order[i]] = row.clone();
    }
    let map = LinearMap::new(kappa.cols(), rows).compose(&lambda_map(t))?;
    Ok(Analysis { skeleton, canonical, map })
}

#[derive(Clone, Debug)]
pub struct ModuliCone {
    /// Cone of skeleton edge lengths, coordinates in canonical edge order.
    pub cone: Cone,
    pub graph: MultiGraph,
    pub triangulation: Triangulation,
}

impl ModuliCone {
    pub fn dimension(&self) -> Result<usize> {
        self.cone.dimension()
    }
}

/// Image of the pointed secondary cone under the length maps.
pub fn moduli_cone(t: &Triangulation) -> Result<ModuliCone> {
    if is_regular(t).is_none() {
        return Err(Error::NonRegular);
    }
    moduli_cone_of_regular(t)
}

fn moduli_cone_of_regular(t: &Triangulation) -> Result<ModuliCone> {
    let a = analyze(t)?;
    let cone = secondary_cone(t, true).image(&a.map)?;
    Ok(ModuliCone { cone, graph: a.canonical.graph, triangulation: t.clone() })
}

/// Maps `f` over `items` on up to `jobs` threads, preserving order.
pub fn par_map<T: Sync, U: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<U>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn check_skeleton_graph(g: &MultiGraph, genus: usize) {
    assert_eq!(g.genus(), genus as i64, "skeleton genus differs from polygon genus");
    if genus >= 2 {
        assert!(g.is_trivalent() && g.is_connected(), "skeleton is not trivalent and connected");
        assert!(!is_sprawling(g), "extracted a sprawling skeleton");
        assert!(is_planar(g), "extracted a non-planar skeleton");
    }
}

/// Counts of triangulation classes per skeleton graph and moduli cone dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub genus: usize,
    pub rows: BTreeMap<MultiGraph, BTreeMap<usize, usize>>,
    /// Unimodular classes that are not regular.
    pub nonregular: usize,
}

impl Census {
    pub fn total(&self) -> usize {
        self.rows.values().flat_map(|r| r.values()).sum()
    }

    pub fn graph_total(&self, g: &MultiGraph) -> usize {
        self.rows.get(g).map_or(0, |r| r.values().sum())
    }

    pub fn max_dim(&self, g: &MultiGraph) -> Option<usize> {
        self.rows.get(g).and_then(|r| r.keys().next_back().copied())
    }

    pub fn column_totals(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for r in self.rows.values() {
            for (&d, &c) in r {
                *out.entry(d).or_insert(0) += c;
            }
        }
        out
    }

    /// Counts keyed by label string, e.g. `"(020)" -> {4: 59, 5: 216, 6: 175}`.
    pub fn by_label(&self) -> BTreeMap<String, BTreeMap<usize, usize>> {
        self.rows.iter().map(|(g, r)| (label(g).to_string(), r.clone())).collect()
    }

    pub fn merge(&mut self, other: &Census) {
        for (g, r) in &other.rows {
            let row = self.rows.entry(g.clone()).or_default();
            for (&d, &c) in r {
                *row.entry(d).or_insert(0) += c;
            }
        }
        self.nonregular += other.nonregular;
    }

    /// TSV rows `graph dim count`, then a summary block with per-graph totals
    /// and maximal dimensions.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("graph\tdim\tcount\n");
        let labelled = self.by_label();
        for (l, r) in &labelled {
            for (d, c) in r {
                let _ = writeln!(out, "{l}\t{d}\t{c}");
            }
        }
        let _ = writeln!(out, "# graph\ttotal\tmax_dim");
        for (l, r) in &labelled {
            let _ = writeln!(
                out,
                "# {l}\t{}\t{}",
                r.values().sum::<usize>(),
                r.keys().next_back().unwrap()
            );
        }
        let cols: Vec<String> =
            self.column_totals().iter().map(|(d, c)| format!("{d}:{c}")).collect();
        let _ = writeln!(out, "# columns\t{}", cols.join(" "));
        let _ = writeln!(out, "# total\t{}", self.total());
        let _ = writeln!(out, "# nonregular\t{}", self.nonregular);
        out
    }
}

/// Census of a list of unimodular triangulations of one polygon.
pub fn census_of(triangulations: &[Triangulation], jobs: usize) -> Result<Census> {
    let genus = triangulations.first().map_or(0, |t| t.polygon().genus());
    let results = par_map(triangulations, jobs, |t| -> Result<Option<(MultiGraph, usize)>> {
        if is_regular(t).is_none() {
            return Ok(None);
        }
        let a = analyze(t)?;
        Ok(Some((a.canonical.graph.clone(), a.dimension())))
    });
    let mut census = Census { genus, ..Census::default() };
    for r in results {
        match r? {
            None => census.nonregular += 1,
            Some((g, d)) => {
                if !census.rows.contains_key(&g) {
                    check_skeleton_graph(&g, genus);
                }
                *census.rows.entry(g).or_default().entry(d).or_insert(0) += 1;
            }
        }
    }
    Ok(census)
}

/// Census over all unimodular triangulations of a polygon, one entry per class.
pub fn census(polygon: Arc<LatticePolygon>, up_to_symmetry: bool, jobs: usize) -> Result<Census> {
    let all: Vec<Triangulation> = Enumerator::new(polygon, up_to_symmetry).collect();
    census_of(&all, jobs)
}

/// The cones of one graph, closed under its automorphisms.
#[derive(Clone, Debug)]
pub struct GraphSpace {
    pub graph: MultiGraph,
    /// Coordinate permutations of the automorphism group.
    pub perms: Vec<Vec<usize>>,
    /// One representative per automorphism orbit of distinct cones.
    pub cones: Vec<ModuliCone>,
    keys: BTreeSet<Vec<IntVec>>,
    maximal: Option<Vec<usize>>,
}

/// Closed or relative-interior membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Closed,
    Interior,
}

fn permute_vec(v: &[i128], p: &[usize]) -> IntVec {
    p.iter().map(|&j| v[j]).collect()
}

fn orbit_key(c: &Cone, perms: &[Vec<usize>]) -> Result<Vec<IntVec>> {
    let rays = c.rays()?;
    let mut best: Option<Vec<IntVec>> = None;
    for p in perms {
        let mut r: Vec<IntVec> = rays.iter().map(|v| permute_vec(v, p)).collect();
        r.sort();
        if best.as_ref().is_none_or(|b| r < *b) {
            best = Some(r);
        }
    }
    Ok(best.unwrap_or_default())
}

/// Whether `inner ⊆ p(outer)` for some automorphism `p`.
fn contained_up_to(inner: &Cone, outer: &Cone, perms: &[Vec<usize>]) -> Result<bool> {
    let rays = inner.rays()?;
    let h = outer.h_rep()?;
    'perm: for p in perms {
        for r in rays {
            let x = permute_vec(r, p);
            if !outer_contains(h, &x)? {
                continue 'perm;
            }
        }
        return Ok(true);
    }
    Ok(false)
}

fn outer_contains(h: &crate::cone::HRep, x: &[i128]) -> Result<bool> {
    for e in &h.equations {
        if crate::arith::dot(e, x)? != 0 {
            return Ok(false);
        }
    }
    for a in &h.inequalities {
        if crate::arith::dot(a, x)? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

impl GraphSpace {
    pub fn new(graph: MultiGraph) -> Result<Self> {
        let perms = canonical_form(&graph)?.edge_permutations();
        Ok(GraphSpace { graph, perms, cones: Vec::new(), keys: BTreeSet::new(), maximal: None })
    }

    /// Adds a cone unless an automorphic copy is already stored.
    pub fn insert(&mut self, c: ModuliCone) -> Result<bool> {
        let key = orbit_key(&c.cone, &self.perms)?;
        if !self.keys.insert(key) {
            return Ok(false);
        }
        c.cone.h_rep()?;
        self.cones.push(c);
        self.maximal = None;
        Ok(true)
    }

    pub fn dimension(&self) -> Result<usize> {
        let mut d = 0;
        for c in &self.cones {
            d = d.max(c.dimension()?);
        }
        Ok(d)
    }

    /// Indices of cones not contained in an automorphic copy of another.
    pub fn maximal(&mut self) -> Result<&[usize]> {
        if self.maximal.is_none() {
            let mut order: Vec<(usize, usize)> = Vec::new();
            for (i, c) in self.cones.iter().enumerate() {
                order.push((c.dimension()?, i));
            }
            order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let mut kept: Vec<usize> = Vec::new();
            for (_, i) in order {
                let c = &self.cones[i].cone;
                let mut covered = false;
                for &k in &kept {
                    if contained_up_to(c, &self.cones[k].cone, &self.perms)? {
                        covered = true;
                        break;
                    }
                }
                if !covered {
                    kept.push(i);
                }
            }
            kept.sort_unstable();
            self.maximal = Some(kept);
        }
        Ok(self.maximal.as_deref().unwrap())
    }

    /// Maximal cones of the given dimension, each expanded to its automorphism orbit.
    pub fn orbit_cones(&mut self, dim: usize) -> Result<Vec<Cone>> {
        let idx = self.maximal()?.to_vec();
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for i in idx {
            let c = &self.cones[i].cone;
            if c.dimension()? != dim {
                continue;
            }
            let inv = |p: &Vec<usize>| {
                let mut q = vec![0; p.len()];
                for (i, &j) in p.iter().enumerate() {
                    q[j] = i;
                }
                q
            };
            for p in &self.perms {
                let pc = c.permute(&inv(p))?;
                let mut key = pc.rays()?.to_vec();
                key.sort();
                if seen.insert(key) {
                    out.push(pc);
                }
            }
        }
        Ok(out)
    }

    /// Membership of a length vector in the union of the closed cones, or in
    /// the union of their relative interiors.
    /// Closed membership only scans maximal cones once [`GraphSpace::maximal`] has run.
    pub fn contains(&self, x: &[i128], mode: Mode) -> Result<bool> {
        let all: Vec<usize>;
        let idx = match (mode, &self.maximal) {
            (Mode::Closed, Some(m)) => m.as_slice(),
            _ => {
                all = (0..self.cones.len()).collect();
                all.as_slice()
            }
        };
        for p in &self.perms {
            let y = permute_vec(x, p);
            for c in idx.iter().map(|&i| &self.cones[i]) {
                let hit = match mode {
                    Mode::Closed => c.cone.contains_point(&y)?,
                    Mode::Interior => c.cone.contains_point_relint(&y)?,
                };
                if hit {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Cones of all triangulations of one or more polygons of a fixed genus, bucketed by graph.
#[derive(Clone, Debug, Default)]
pub struct ModuliSpace {
    pub genus: usize,
    pub graphs: BTreeMap<MultiGraph, GraphSpace>,
    pub polygons: Vec<String>,
}

impl ModuliSpace {
    pub fn new(genus: usize) -> Self {
        ModuliSpace { genus, ..Default::default() }
    }

    pub fn insert(&mut self, c: ModuliCone) -> Result<bool> {
        if !self.graphs.contains_key(&c.graph) {
            check_skeleton_graph(&c.graph, self.genus);
            self.graphs.insert(c.graph.clone(), GraphSpace::new(c.graph.clone())?);
        }
        self.graphs.get_mut(&c.graph).unwrap().insert(c)
    }

    /// Union with another space; duplicate cones collapse.
    pub fn merge(&mut self, other: ModuliSpace) -> Result<()> {
        for (_, gs) in other.graphs {
            for c in gs.cones {
                self.insert(c)?;
            }
        }
        self.polygons.extend(other.polygons);
        Ok(())
    }

    pub fn dimension(&self) -> Result<usize> {
        let mut d = 0;
        for gs in self.graphs.values() {
            d = d.max(gs.dimension()?);
        }
        Ok(d)
    }

    pub fn realizable_graphs(&self) -> Vec<&MultiGraph> {
        self.graphs.keys().collect()
    }

    pub fn graph(&self, g: &MultiGraph) -> Option<&GraphSpace> {
        self.graphs.get(g)
    }

    pub fn graph_mut(&mut self, g: &MultiGraph) -> Option<&mut GraphSpace> {
        self.graphs.get_mut(g)
    }

    /// Looks up a graph by label string such as `"(111)"`.
    pub fn by_label(&self, l: &str) -> Option<&GraphSpace> {
        self.graphs.iter().find(|(g, _)| label(g).to_string() == l).map(|(_, s)| s)
    }

    pub fn by_label_mut(&mut self, l: &str) -> Option<&mut GraphSpace> {
        self.graphs.iter_mut().find(|(g, _)| label(g).to_string() == l).map(|(_, s)| s)
    }
}

/// Moduli cones of the regular triangulations among `triangulations`, keeping
/// only those of dimension at least `min_dim`.
pub fn space_of(
    triangulations: &[Triangulation],
    min_dim: usize,
    jobs: usize,
) -> Result<ModuliSpace> {
    let genus = triangulations.first().map_or(0, |t| t.polygon().genus());
    let cones = par_map(triangulations, jobs, |t| -> Result<Option<ModuliCone>> {
        if is_regular(t).is_none() {
            return Ok(None);
        }
        let a = analyze(t)?;
        if a.dimension() < min_dim {
            return Ok(None);
        }
        moduli_cone_of_regular(t).map(Some)
    });
    let mut space = ModuliSpace::new(genus);
    for c in cones {
        if let Some(c) = c? {
            space.insert(c)?;
        }
    }
    Ok(space)
}

/// Moduli space of a polygon: cones of all its regular unimodular triangulations.
pub fn polygon_space(
    polygon: Arc<LatticePolygon>,
    min_dim: usize,
    jobs: usize,
) -> Result<ModuliSpace> {
    let all: Vec<Triangulation> = Enumerator::new(polygon.clone(), true).collect();
    let mut s = space_of(&all, min_dim, jobs)?;
    let verts: Vec<String> = polygon.vertices().iter().map(|p| p.to_string()).collect();
    s.polygons.push(verts.join(" "));
    Ok(s)
}

/// Union of the spaces of the maximal polygons with two-dimensional interior
/// hull and the hyperelliptic triangle.
pub fn assemble_planar(g: usize, min_dim: usize, jobs: usize) -> Result<ModuliSpace> {
    if !(2..=5).contains(&g) {
        return Err(Error::Unsupported(format!("planar moduli assembly for genus {g}")));
    }
    let cls = classify_maximal_polygons(g)?;
    let mut polys = cls.two_dimensional;
    polys.push(family(Family::Hyperelliptic { g: g as i64, k: g as i64 + 2 })?);
    let mut space = ModuliSpace::new(g);
    for p in polys {
        space.merge(polygon_space(Arc::new(p), min_dim, jobs)?)?;
    }
    Ok(space)
}

/// Dimension of the space of planar tropical curves of genus g.
pub fn expected_dimension(g: usize) -> Result<usize> {
    match g {
        0 | 1 => Err(Error::InvalidParams("expected dimension needs g >= 2".into())),
        2 => Ok(3),
        3 => Ok(6),
        7 => Ok(16),
        _ => Ok(2 * g + 1),
    }
}

/// `#P_int ∩ Z² + #∂P_int ∩ Z² + #vertices(P_int) - 3`. A segment counts all its
/// lattice points as boundary; a point is its own boundary and vertex.
pub fn honeycomb_dimension(p: &LatticePolygon) -> Result<i64> {
    Ok(match interior_hull(p) {
        InteriorHull::Empty => {
            return Err(Error::InvalidParams("polygon has no interior lattice points".into()))
        }
        InteriorHull::Point(_) => 0,
        InteriorHull::Segment(_, _, k) => 2 * k as i64 - 1,
        InteriorHull::Polygon(q) => {
            (q.len() + q.boundary_count() + q.vertices().len()) as i64 - 3
        }
    })
}

/// Codimension of the honeycomb moduli cone in the orthant of skeleton lengths:
/// `(#∂P_int - #vertices(P_int)) + 2 #int(P_int)`.
pub fn honeycomb_codimension(p: &LatticePolygon) -> Result<i64> {
    Ok(match interior_hull(p) {
        InteriorHull::Empty => {
            return Err(Error::InvalidParams("polygon has no interior lattice points".into()))
        }
        InteriorHull::Point(_) => 0,
        InteriorHull::Segment(_, _, k) => k as i64 - 2,
        InteriorHull::Polygon(q) => {
            (q.boundary_count() as i64 - q.vertices().len() as i64) + 2 * q.interior_count() as i64
        }
    })
}

pub fn family_dimension(f: Family) -> Result<i64> {
    match f {
        Family::Triangle(d) if d >= 4 => Ok((d * d + 3 * d) / 2 - 8),
        Family::Rectangle(d, e) if d >= 3 && e >= 3 => Ok(d * e + d + e - 6),
        _ => Err(Error::InvalidParams(format!("no dimension formula for {f}"))),
    }
}

fn letter_perms(name: &str) -> Result<&'static [Vec<usize>]> {
    static CACHE: OnceLock<Vec<(&'static str, Vec<Vec<usize>>)>> = OnceLock::new();
    let table = CACHE.get_or_init(|| {
        genus3::NAMES
            .iter()
            .map(|&n| (n, compute_letter_perms(n).expect("genus-3 graph")))
            .collect()
    });
    table
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| p.as_slice())
        .ok_or_else(|| Error::InvalidParams(format!("unknown genus-3 graph {name}")))
}

fn compute_letter_perms(name: &str) -> Result<Vec<Vec<usize>>> {
    let g = genus3::graph(name)
        .ok_or_else(|| Error::InvalidParams(format!("unknown genus-3 graph {name}")))?;
    let c = canonical_form(&g)?;
    let mut inv = vec![0; c.edge_order.len()];
    for (i, &k) in c.edge_order.iter().enumerate() {
        inv[k] = i;
    }
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in &c.automorphisms {
        out.insert((0..6).map(|i| inv[a.edges[c.edge_order[i]]]).collect());
    }
    Ok(out.into_iter().collect())
}

fn check_lengths(l: &[i128]) -> Result<[i128; 6]> {
    let arr: [i128; 6] = l
        .try_into()
        .map_err(|_| Error::InvalidParams(format!("expected 6 lengths, got {}", l.len())))?;
    if arr.iter().any(|&x| x < 0) {
        return Err(Error::InvalidParams("lengths must be nonnegative".into()));
    }
    Ok(arr)
}

fn quartic(name: &str, l: [i128; 6]) -> bool {
    let [u, v, w, x, y, z] = l;
    match name {
        "000" => {
            if !(x.max(y) <= u && x.max(z) <= v && y.max(z) <= w) {
                return false;
            }
            let eq = [x.max(y) == u, x.max(z) == v, y.max(z) == w];
            match eq.iter().filter(|&&e| e).count() {
                0 | 1 => true,
                2 => {
                    // eq[0] joins x and y, eq[1] joins x and z, eq[2] joins y and z
                    let distinct = x != y && y != z && x != z;
                    let longest = [x, y, z].iter().copied().max().unwrap();
                    let opposite_of_longest = if x == longest {
                        2
                    } else if y == longest {
                        1
                    } else {
                        0
                    };
                    let twice = [x, y, z].iter().filter(|&&t| t == longest).count() == 2;
                    let joining_longest = if x == longest && y == longest {
                        0
                    } else if x == longest && z == longest {
                        1
                    } else {
                        2
                    };
                    (distinct && eq[opposite_of_longest]) || (twice && !eq[joining_longest])
                }
                _ => false,
            }
        }
        "020" => {
            let m = w + v.max(y);
            if !(v <= u && y <= z && m <= x) {
                return false;
            }
            if m == x {
                (v != u || (v < y && y < z)) && (y != z || (y < v && v < u))
            } else {
                true
            }
        }
        "111" => {
            w < x
                && ((v + w == x && v < u)
                    || (v + w < x && x <= v + 3 * w && v <= u)
                    || (v + 3 * w < x && x <= v + 4 * w && v <= u && 2 * u <= 3 * v)
                    || (v + 3 * w < x && x <= v + 4 * w && 2 * v == u)
                    || (v + 4 * w < x && x <= v + 5 * w && v == u))
        }
        "212" => w < x && x <= 2 * w,
        _ => false,
    }
}

fn hyperelliptic(name: &str, l: [i128; 6]) -> bool {
    let [u, v, w, x, y, z] = l;
    match name {
        "020" => {
            w == x
                && v <= u
                && v <= y
                && y <= z
                && (y < v + 2 * w
                    || (y == v + 2 * w && y < z)
                    || (y < v + 3 * w && u <= 2 * v)
                    || (y == v + 3 * w && u <= 2 * v && y < z)
                    || (y < v + 4 * w && u == v)
                    || (y == v + 4 * w && u == v && y < z))
        }
        "111" => w == x && u.min(v) <= w,
        "212" => w == x,
        _ => false,
    }
}

fn up_to_symmetry(name: &str, l: &[i128], pred: fn(&str, [i128; 6]) -> bool) -> Result<bool> {
    let l = check_lengths(l)?;
    for p in letter_perms(name)?.iter() {
        let image: [i128; 6] = std::array::from_fn(|i| l[p[i]]);
        if pred(name, image) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Realizability of a genus-3 metric graph by a smooth tropical quartic.
/// Lengths are integers (scale rationals by a common denominator) in letter
/// order u, v, w, x, y, z; see [`genus3::graph`].
pub fn realizable_genus3(name: &str, lengths: &[i128]) -> Result<bool> {
    up_to_symmetry(name, lengths, quartic)
}

/// Realizability by a smooth tropical curve with Newton polygon R_{4,2}.
pub fn realizable_genus3_hyp(name: &str, lengths: &[i128]) -> Result<bool> {
    up_to_symmetry(name, lengths, hyperelliptic)
}

/// Genus-3 letter coordinates to canonical edge coordinates: entry `i` is the
/// canonical index of letter `i`.
pub fn genus3_letter_order(name: &str) -> Result<Vec<usize>> {
    let g = genus3::graph(name)
        .ok_or_else(|| Error::InvalidParams(format!("unknown genus-3 graph {name}")))?;
    Ok(canonical_form(&g)?.edge_order)
}

/// Builds a triangulation of the hyperelliptic triangle `E^{(g)}_{g+2}` whose
/// moduli cone equals that of `t`, a triangulation of some `E^{(g)}_k`.
pub fn transfer_hyperelliptic(t: &Triangulation) -> Result<Triangulation> {
    let poly = t.polygon();
    let g = poly.genus() as i64;
    let bad = || Error::InvalidParams("triangulation is not of a hyperelliptic polygon E^(g)_k".into());
    if g < 2 {
        return Err(bad());
    }
    let k = (1..=g + 2)
        .find(|&k| family(Family::Hyperelliptic { g, k }).map(|e| e == *poly).unwrap_or(false))
        .ok_or_else(bad)?;
    let _ = k;
    let pt = |x: i64, y: i64| LatticePoint::new(x, y);
    let has_edge = |a: LatticePoint, b: LatticePoint| t.contains_edge(a, b);
    // extreme neighbours of (i,1) on the rows y = 2 and y = 0
    let mut a = vec![0i64; g as usize + 1];
    let mut b = vec![0i64; g as usize + 1];
    for i in 1..=g {
        let c = pt(i, 1);
        let nb = |y: i64| -> Vec<i64> {
            poly.points().iter().filter(|p| p.y == y && has_edge(c, **p)).map(|p| p.x).collect()
        };
        let (up, down) = (nb(2), nb(0));
        let (pmin, pmax) = (*up.iter().min().ok_or_else(bad)?, *up.iter().max().ok_or_else(bad)?);
        let (qmin, qmax) = (*down.iter().min().ok_or_else(bad)?, *down.iter().max().ok_or_else(bad)?);
        a[i as usize] = pmin + qmin - 2 * i;
        b[i as usize] = pmax + qmax - 2 * i;
    }
    let target = Arc::new(family(Family::Hyperelliptic { g, k: g + 2 })?);
    let mut tris: Vec<[LatticePoint; 3]> = Vec::new();
    let apex = pt(0, 2);
    for i in 1..g {
        if has_edge(pt(i, 1), pt(i + 1, 1)) {
            tris.push([apex, pt(i, 1), pt(i + 1, 1)]);
            tris.push([pt(i, 1), pt(i + 1, 1), pt(2 * i + b[i as usize], 0)]);
        } else {
            tris.push([apex, pt(i, 1), pt(2 * i + 1, 0)]);
            tris.push([apex, pt(i + 1, 1), pt(2 * i + 1, 0)]);
        }
    }
    for i in 1..=g {
        for m in 2 * i + a[i as usize]..2 * i + b[i as usize] {
            tris.push([pt(i, 1), pt(m, 0), pt(m + 1, 0)]);
        }
    }
    // left end around (1,1) and the mirror image around (g,1)
    let mirror = |p: LatticePoint| pt(2 * g + 2 - p.x - (g + 1) * p.y, p.y);
    let end = |n: i64, edge: bool| -> Vec<[LatticePoint; 3]> {
        let (p01, p11) = (pt(0, 1), pt(1, 1));
        let mut out = Vec::new();
        if n == 0 {
            out.push([apex, p01, p11]);
            out.push([p01, pt(0, 0), p11]);
        } else if n >= 2 || edge {
            out.push([apex, p01, p11]);
            out.push([p01, p11, pt(n, 0)]);
            for m in 0..n {
                out.push([p01, pt(m, 0), pt(m + 1, 0)]);
            }
        } else {
            out.push([apex, p11, pt(1, 0)]);
            out.push([apex, p01, pt(1, 0)]);
            out.push([p01, pt(0, 0), pt(1, 0)]);
        }
        out
    };
    tris.extend(end(2 + a[1], has_edge(pt(0, 1), pt(1, 1))));
    let n_right = 2 * g + 2 - (2 * g + b[g as usize]);
    for tri in end(n_right, has_edge(pt(g, 1), pt(g + 1, 1))) {
        tris.push(tri.map(mirror));
    }
    let idx = |p: LatticePoint| -> Result<u16> {
        target
            .index_of(p)
            .map(|i| i as u16)
            .ok_or_else(|| Error::InvalidTriangulation(format!("transfer produced point {p} outside the triangle")))
    };
    let mut out = Vec::new();
    for tri in tris {
        let mut v = [idx(tri[0])?, idx(tri[1])?, idx(tri[2])?];
        v.sort_unstable();
        out.push(v);
    }
    out.sort_unstable();
    Triangulation::new(target, out)
}

/// Whether two moduli cones of the same graph agree up to a graph automorphism.
pub fn same_moduli_cone(a: &ModuliCone, b: &ModuliCone) -> Result<bool> {
    if a.graph != b.graph {
        return Ok(false);
    }
    let perms = canonical_form(&a.graph)?.edge_permutations();
    Ok(orbit_key(&a.cone, &perms)? == orbit_key(&b.cone, &perms)?)
}
