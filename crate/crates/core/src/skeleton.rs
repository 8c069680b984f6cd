//! Dual graphs, skeletons and trivalent multigraphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::triangulate::Triangulation;

/// Vertex bound for canonical labelling.
pub const CANONICAL_VERTEX_LIMIT: usize = 64;

/// Undirected multigraph with loops. Edges are stored as `(u, v)` with `u <= v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl MultiGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParams(format!(
                    "edge ({u},{v}) out of range for {n} vertices"
                )));
            }
            out.push((u.min(v), u.max(v)));
        }
        Ok(MultiGraph { n, edges: out })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// First Betti number of a connected graph.
    pub fn genus(&self) -> i64 {
        self.edges.len() as i64 - self.n as i64 + 1
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(a, b)| a == b).count()
    }

    pub fn is_trivalent(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) == 3)
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(None, None) <= 1
    }

    pub fn is_leafless(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) != 1)
    }

    /// `m[u][v]` = number of edges between `u` and `v` (loops on the diagonal).
    pub fn multiplicities(&self) -> Vec<Vec<usize>> {
        let mut m = vec![vec![0; self.n]; self.n];
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        m
    }

    /// Number of connected components after deleting a vertex and/or an edge.
    fn components_without(&self, vertex: Option<usize>, edge: Option<usize>) -> usize {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if Some(i) == edge || Some(a) == vertex || Some(b) == vertex {
                continue;
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        (0..self.n)
            .filter(|&v| Some(v) != vertex)
            .filter(|&v| find(&mut parent, v) == v)
            .count()
    }

    pub fn is_bridge(&self, e: usize) -> bool {
        let (a, b) = self.edges[e];
        a != b && self.components_without(None, Some(e)) > self.components_without(None, None)
    }

    pub fn relabeled(&self, perm: &[usize]) -> MultiGraph {
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b])))
            .collect();
        edges.sort_unstable();
        MultiGraph { n: self.n, edges }
    }
}

impl fmt::Display for MultiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", write_graph(self))
    }
}

/// Dual graph of a triangulation: one node per triangle, one edge per interior edge,
/// in the order of `t.interior_edges()`.
pub fn dual_graph(t: &Triangulation) -> MultiGraph {
    MultiGraph {
        n: t.triangles().len(),
        edges: t
            .interior_edges()
            .iter()
            .map(|e| (e.triangles[0].min(e.triangles[1]), e.triangles[0].max(e.triangles[1])))
            .collect(),
    }
}

/// Skeleton of a triangulation together with, for every skeleton edge, the
/// interior edges of the triangulation whose dual lengths add up to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonMap {
    pub graph: MultiGraph,
    pub edge_composition: Vec<Vec<usize>>,
}

impl SkeletonMap {
    /// Interior edges lying on pruned trees.
    pub fn pruned_edges(&self, interior_edge_count: usize) -> Vec<usize> {
        let mut used = vec![false; interior_edge_count];
        for c in &self.edge_composition {
            for &e in c {
                used[e] = true;
            }
        }
        (0..interior_edge_count).filter(|&e| !used[e]).collect()
    }
}

pub fn extract_skeleton(t: &Triangulation) -> Result<SkeletonMap> {
    let dual = dual_graph(t);
    let n = dual.n;
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(a, b)) in dual.edges.iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    let mut alive_edge = vec![true; dual.edges.len()];
    let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut alive = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &(w, e) in &adj[v] {
            if alive_edge[e] {
                alive_edge[e] = false;
                deg[w] -= 1;
                if alive[w] && deg[w] <= 1 {
                    stack.push(w);
                }
            }
        }
    }
    let core: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    if core.is_empty() {
        return Err(Error::InvalidParams(
            "polygon has genus 0; the dual graph is a tree".into(),
        ));
    }
    let next = |v: usize, from: Option<usize>| -> (usize, usize) {
        adj[v]
            .iter()
            .copied()
            .find(|&(_, e)| alive_edge[e] && Some(e) != from)
            .expect("core node has an alive edge")
    };
    let branch: Vec<usize> = core.iter().copied().filter(|&v| deg[v] == 3).collect();
    if branch.is_empty() {
        // genus one: the core is a single cycle
        let start = core[0];
        let mut comp = Vec::new();
        let (mut v, mut e) = next(start, None);
        comp.push(e);
        while v != start {
            let (w, f) = next(v, Some(e));
            comp.push(f);
            v = w;
            e = f;
        }
        return Ok(SkeletonMap {
            graph: MultiGraph { n: 1, edges: vec![(0, 0)] },
            edge_composition: vec![comp],
        });
    }
    let mut index = vec![usize::MAX; n];
    for (i, &v) in branch.iter().enumerate() {
        index[v] = i;
    }
    let mut used = vec![false; dual.edges.len()];
    let mut edges = Vec::new();
    let mut composition = Vec::new();
    for &s in &branch {
        for &(first, e0) in &adj[s] {
            if !alive_edge[e0] || used[e0] {
                continue;
            }
            let mut comp = vec![e0];
            used[e0] = true;
            let (mut v, mut e) = (first, e0);
            while deg[v] == 2 {
                let (w, f) = next(v, Some(e));
                used[f] = true;
                comp.push(f);
                v = w;
                e = f;
            }
            let (a, b) = (index[s], index[v]);
            edges.push((a.min(b), a.max(b)));
            composition.push(comp);
        }
    }
    Ok(SkeletonMap {
        graph: MultiGraph { n: branch.len(), edges },
        edge_composition: composition,
    })
}

/// An automorphism as a vertex permutation together with the induced edge permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// Canonically relabelled graph, edges sorted.
    pub graph: MultiGraph,
    /// Original vertex -> canonical vertex.
    pub relabel: Vec<usize>,
    /// Original edge index -> canonical edge index.
    pub edge_order: Vec<usize>,
    /// Automorphisms of the canonical graph, parallel-edge swaps included.
    pub automorphisms: Vec<Automorphism>,
}

impl CanonicalForm {
    pub fn automorphism_order(&self) -> usize {
        self.automorphisms.len()
    }

    /// Distinct permutations of the canonical edge coordinates.
    pub fn edge_permutations(&self) -> Vec<Vec<usize>> {
        let set: BTreeSet<Vec<usize>> = self.automorphisms.iter().map(|a| a.edges.clone()).collect();
        set.into_iter().collect()
    }
}

fn refine(m: &[Vec<usize>], colors: &mut Vec<usize>) {
    let n = colors.len();
    let mut classes = colors.iter().collect::<BTreeSet<_>>().len();
    loop {
        let sigs: Vec<(usize, usize, Vec<(usize, usize)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, usize)> = (0..n)
                    .filter(|&u| u != v && m[v][u] > 0)
                    .map(|u| (colors[u], m[v][u]))
                    .collect();
                nb.sort_unstable();
                (colors[v], m[v][v], nb)
            })
            .collect();
        let mut sorted: Vec<&(usize, usize, Vec<(usize, usize)>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        for (v, s) in sigs.iter().enumerate() {
            colors[v] = sorted.binary_search(&s).unwrap();
        }
        if sorted.len() == classes {
            return;
        }
        classes = sorted.len();
    }
}

struct Search<'a> {
    graph: &'a MultiGraph,
    m: Vec<Vec<usize>>,
    best: Option<Vec<(usize, usize)>>,
    leaves: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, colors: Vec<usize>) {
        let n = colors.len();
        let mut counts = vec![0usize; n];
        for &c in &colors {
            counts[c] += 1;
        }
        let Some(cell) = (0..n).find(|&c| counts[c] > 1) else {
            let cert = self.graph.relabeled(&colors).edges;
            match &self.best {
                Some(b) if cert > *b => {}
                Some(b) if cert == *b => self.leaves.push(colors),
                _ => {
                    self.best = Some(cert);
                    self.leaves = vec![colors];
                }
            }
            return;
        };
        for v in (0..n).filter(|&v| colors[v] == cell) {
            let mut next: Vec<usize> = (0..n)
                .map(|w| 2 * colors[w] + (colors[w] == cell && w != v) as usize)
                .collect();
            refine(&self.m, &mut next);
            self.run(next);
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..k {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

/// Canonical labelling by individualization and refinement. Every branch of the
/// search tree is explored, so the minimal certificate is a true isomorphism invariant
/// and the leaves attaining it yield the full automorphism group.
pub fn canonical_form(g: &MultiGraph) -> Result<CanonicalForm> {
    if g.n > CANONICAL_VERTEX_LIMIT {
        return Err(Error::TooLarge { vertices: g.n, limit: CANONICAL_VERTEX_LIMIT });
    }
    let m = g.multiplicities();
    let mut colors: Vec<usize> = vec![0; g.n];
    refine(&m, &mut colors);
    let mut search = Search { graph: g, m, best: None, leaves: Vec::new() };
    search.run(colors);
    let canon_edges = search.best.unwrap_or_default();
    let relabel = search.leaves[0].clone();
    let canon = MultiGraph { n: g.n, edges: canon_edges };

    let mut edge_order = vec![0; g.edges.len()];
    let mut slot: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, &(a, b)) in g.edges.iter().enumerate() {
        let key = (relabel[a].min(relabel[b]), relabel[a].max(relabel[b]));
        let first = canon.edges.partition_point(|&e| e < key);
        let k = slot.entry(key).or_insert(0);
        edge_order[i] = first + *k;
        *k += 1;
    }

    // vertex automorphisms of the canonical graph
    let mut inv0 = vec![0; g.n];
    for (v, &c) in relabel.iter().enumerate() {
        inv0[c] = v;
    }
    let mut vauts: BTreeSet<Vec<usize>> = BTreeSet::new();
    for leaf in &search.leaves {
        vauts.insert((0..g.n).map(|c| leaf[inv0[c]]).collect());
    }
    // parallel classes of the canonical graph: consecutive runs
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < canon.edges.len() {
        let mut j = i;
        while j < canon.edges.len() && canon.edges[j] == canon.edges[i] {
            j += 1;
        }
        runs.push((i, j - i));
        i = j;
    }
    let run_perms: Vec<Vec<Vec<usize>>> = runs.iter().map(|&(_, k)| permutations(k)).collect();
    let mut automorphisms = Vec::new();
    for sigma in vauts {
        let base: Vec<usize> = canon
            .edges
            .iter()
            .enumerate()
            .map(|(idx, &(a, b))| {
                let key = (sigma[a].min(sigma[b]), sigma[a].max(sigma[b]));
                let first = canon.edges.partition_point(|&e| e < key);
                let own = canon.edges.partition_point(|&e| e < (a, b));
                first + (idx - own)
            })
            .collect();
        // combine with every product of permutations inside parallel classes
        let mut choice = vec![0usize; runs.len()];
        loop {
            let mut edges = base.clone();
            for (r, &(start, len)) in runs.iter().enumerate() {
                let p = &run_perms[r][choice[r]];
                for k in 0..len {
                    edges[start + k] = base[start + p[k]];
                }
            }
            automorphisms.push(Automorphism { vertices: sigma.clone(), edges });
            let mut r = 0;
            while r < runs.len() {
                choice[r] += 1;
                if choice[r] < run_perms[r].len() {
                    break;
                }
                choice[r] = 0;
                r += 1;
            }
            if r == runs.len() {
                break;
            }
        }
    }
    automorphisms.sort();
    Ok(CanonicalForm { graph: canon, relabel, edge_order, automorphisms })
}

pub fn is_isomorphic(a: &MultiGraph, b: &MultiGraph) -> Result<bool> {
    if a.n != b.n || a.edges.len() != b.edges.len() {
        return Ok(false);
    }
    Ok(canonical_form(a)?.graph == canonical_form(b)?.graph)
}

/// All connected leafless trivalent multigraphs of genus g, up to isomorphism,
/// as canonical graphs in increasing order.
pub fn enumerate_trivalent(g: usize) -> Result<Vec<MultiGraph>> {
    if g < 2 {
        return Err(Error::InvalidParams("trivalent graphs need genus >= 2".into()));
    }
    let n = 2 * g - 2;
    if n > CANONICAL_VERTEX_LIMIT {
        return Err(Error::TooLarge { vertices: n, limit: CANONICAL_VERTEX_LIMIT });
    }
    fn fill(
        n: usize,
        deficit: &mut Vec<usize>,
        edges: &mut Vec<(usize, usize)>,
        last: Option<(usize, usize)>,
        out: &mut BTreeSet<MultiGraph>,
    ) {
        let Some(i) = (0..n).find(|&v| deficit[v] > 0) else {
            let graph = MultiGraph { n, edges: edges.clone() };
            if graph.is_connected() {
                out.insert(canonical_form(&graph).unwrap().graph);
            }
            return;
        };
        let lo = match last {
            Some((a, b)) if a == i => b,
            _ => i,
        };
        // untouched vertices are interchangeable: only the first may be used
        let fresh = (i + 1..n).find(|&v| deficit[v] == 3);
        for j in lo..n {
            let need = if j == i { 2 } else { 1 };
            if deficit[i] < need || deficit[j] < 1 {
                continue;
            }
            if j != i && deficit[j] == 3 && Some(j) != fresh {
                continue;
            }
            deficit[i] -= if j == i { 2 } else { 1 };
            if j != i {
                deficit[j] -= 1;
            }
            edges.push((i, j));
            fill(n, deficit, edges, Some((i, j)), out);
            edges.pop();
            deficit[i] += if j == i { 2 } else { 1 };
            if j != i {
                deficit[j] += 1;
            }
        }
    }
    let mut out = BTreeSet::new();
    fill(n, &mut vec![3; n], &mut Vec::new(), None, &mut out);
    Ok(out.into_iter().collect())
}

/// Chain graph of genus g from a doubled path with end loops, where bit i of
/// `splits` chooses how node i is split.
fn chain_graph(g: usize, splits: u64) -> MultiGraph {
    let nodes = g - 1;
    // half-edge endpoints: each edge has two slots, filled with split vertices
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let l1 = 0;
    edges.push([0, 0]);
    let l2 = 1;
    edges.push([0, 0]);
    let mut pair = Vec::new();
    for _ in 0..nodes.saturating_sub(1) {
        let e = edges.len();
        edges.push([0, 0]);
        edges.push([0, 0]);
        pair.push(e);
    }
    for i in 0..nodes {
        // (edge, slot) for the left and right pairs of half-edges at node i
        let left = if i == 0 { [(l1, 0), (l1, 1)] } else { [(pair[i - 1], 1), (pair[i - 1] + 1, 1)] };
        let right = if i + 1 == nodes { [(l2, 0), (l2, 1)] } else { [(pair[i], 0), (pair[i] + 1, 0)] };
        let (a, b) = (2 * i, 2 * i + 1);
        let (sa, sb) = if splits >> i & 1 == 0 {
            ([left[0], left[1]], [right[0], right[1]])
        } else {
            ([left[0], right[0]], [left[1], right[1]])
        };
        for (e, s) in sa {
            edges[e][s] = a;
        }
        for (e, s) in sb {
            edges[e][s] = b;
        }
        edges.push([a, b]);
    }
    MultiGraph {
        n: 2 * nodes,
        edges: edges.iter().map(|&[a, b]| (a.min(b), a.max(b))).collect(),
    }
}

/// All chain graphs of genus g up to isomorphism, as canonical graphs.
pub fn chains(g: usize) -> Result<Vec<MultiGraph>> {
    if g < 2 {
        return Err(Error::InvalidParams("chains need genus >= 2".into()));
    }
    if g > 40 {
        return Err(Error::TooLarge { vertices: 2 * g - 2, limit: 78 });
    }
    let mut out = BTreeSet::new();
    for s in 0..(1u64 << (g - 1)) {
        out.insert(canonical_form(&chain_graph(g, s))?.graph);
    }
    Ok(out.into_iter().collect())
}

/// Planarity of the underlying simple graph by searching rotation systems
/// for one whose face count satisfies Euler's formula.
pub fn is_planar(g: &MultiGraph) -> bool {
    let mut simple: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(a, b) in &g.edges {
        if a != b {
            simple.insert((a, b));
        }
    }
    let n = g.n;
    let edges: Vec<(usize, usize)> = simple.into_iter().collect();
    if n >= 3 && edges.len() > 3 * n - 6 {
        return false;
    }
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in &edges {
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    let sub = MultiGraph { n, edges: edges.clone() };
    let comps = sub.components_without(None, None);
    // rotations: fix the first neighbour, permute the rest
    let options: Vec<Vec<Vec<usize>>> = nbrs
        .iter()
        .map(|nb| {
            if nb.len() <= 2 {
                return vec![nb.clone()];
            }
            permutations(nb.len() - 1)
                .into_iter()
                .map(|p| {
                    let mut r = vec![nb[0]];
                    r.extend(p.iter().map(|&k| nb[k + 1]));
                    r
                })
                .collect()
        })
        .collect();
    let mut choice = vec![0usize; n];
    loop {
        let rot: Vec<&Vec<usize>> = (0..n).map(|v| &options[v][choice[v]]).collect();
        // trace faces over darts (u -> v)
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut faces = 0;
        for &(a, b) in &edges {
            for start in [(a, b), (b, a)] {
                if seen.contains(&start) {
                    continue;
                }
                faces += 1;
                let mut d = start;
                while seen.insert(d) {
                    let (u, v) = d;
                    let r = rot[v];
                    let k = r.iter().position(|&x| x == u).unwrap();
                    d = (v, r[(k + 1) % r.len()]);
                }
            }
        }
        // Euler for each component: V - E + F = 1 + C
        if n as i64 - edges.len() as i64 + faces as i64 == 1 + comps as i64 {
            return true;
        }
        let mut v = 0;
        while v < n {
            choice[v] += 1;
            if choice[v] < options[v].len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
        if v == n {
            return false;
        }
    }
}

/// A vertex whose removal leaves three components.
pub fn is_sprawling(g: &MultiGraph) -> bool {
    (0..g.n).any(|v| g.components_without(Some(v), None) >= 3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphLabel {
    pub loops: usize,
    pub biedges: usize,
    pub cutedges: usize,
    pub tag: Option<char>,
}

impl fmt::Display for GraphLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{}{})", self.loops, self.biedges, self.cutedges)?;
        if let Some(t) = self.tag {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

fn counts(g: &MultiGraph) -> (usize, usize, usize) {
    let m = g.multiplicities();
    let mut b = 0;
    for u in 0..g.n {
        for v in u + 1..g.n {
            if m[u][v] >= 2 {
                b += 1;
            }
        }
    }
    let c = (0..g.edges.len()).filter(|&e| g.is_bridge(e)).count();
    (g.loop_count(), b, c)
}

type LabelTable = BTreeMap<MultiGraph, char>;

/// Tags for genera whose (loops, biedges, cutedges) triples collide. Planar
/// graphs get the earlier letters.
fn tag_table(g: usize) -> Option<&'static LabelTable> {
    static TABLES: [OnceLock<LabelTable>; 4] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if !(2..=5).contains(&g) {
        return None;
    }
    Some(TABLES[g - 2].get_or_init(|| {
        let mut groups: BTreeMap<(usize, usize, usize), Vec<(bool, MultiGraph)>> = BTreeMap::new();
        for graph in enumerate_trivalent(g).expect("small genus") {
            groups.entry(counts(&graph)).or_default().push((!is_planar(&graph), graph));
        }
        let mut table = LabelTable::new();
        for (_, mut list) in groups {
            if list.len() < 2 {
                continue;
            }
            list.sort();
            for (i, (_, graph)) in list.into_iter().enumerate() {
                table.insert(graph, (b'A' + i as u8) as char);
            }
        }
        table
    }))
}

/// Loops, vertex pairs joined by two or more edges, and bridges. A letter tag
/// separates graphs of genus 2..5 that share these counts.
pub fn label(g: &MultiGraph) -> GraphLabel {
    let (loops, biedges, cutedges) = counts(g);
    let genus = g.genus();
    let tag = if g.is_trivalent() && (2..=5).contains(&genus) {
        canonical_form(g)
            .ok()
            .and_then(|c| tag_table(genus as usize).and_then(|t| t.get(&c.graph).copied()))
    } else {
        None
    };
    GraphLabel { loops, biedges, cutedges, tag }
}

pub fn write_graph(g: &MultiGraph) -> String {
    let mut s = format!("vertices {}\n", g.n);
    for &(a, b) in &g.edges {
        s.push_str(&format!("{a} {b}\n"));
    }
    s
}

pub fn parse_graph(text: &str) -> Result<MultiGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, first) = lines.next().ok_or_else(|| Error::parse(1, "empty graph file"))?;
    let n: usize = first
        .strip_prefix("vertices")
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| Error::parse(ln, "expected `vertices n`"))?;
    let mut edges = Vec::new();
    for (ln, l) in lines {
        let nums: Vec<usize> = l
            .split_whitespace()
            .map(|w| w.parse().map_err(|_| Error::parse(ln, format!("bad vertex `{w}`"))))
            .collect::<Result<_>>()?;
        let [a, b] = nums[..] else {
            return Err(Error::parse(ln, "expected `u v`"));
        };
        if a >= n || b >= n {
            return Err(Error::parse(ln, format!("vertex out of range 0..{n}")));
        }
        edges.push((a, b));
    }
    MultiGraph::new(n, edges)
}

/// The five genus-3 graphs with edges in the letter order u, v, w, x, y, z.
pub mod genus3 {
    use super::MultiGraph;

    pub const NAMES: [&str; 5] = ["000", "020", "111", "212", "303"];

    pub fn graph(name: &str) -> Option<MultiGraph> {
        let edges: &[(usize, usize)] = match name {
            // outer triangle u, v, w; spokes x, y, z from centre 3
            // u joins the ends of x and y, v those of x and z, w those of y and z
            "000" => &[(0, 1), (0, 2), (1, 2), (3, 0), (3, 1), (3, 2)],
            // u, v parallel on 0-1; y, z parallel on 2-3; w = 1-2, x = 3-0
            "020" => &[(0, 1), (0, 1), (1, 2), (0, 3), (2, 3), (2, 3)],
            // u, v parallel on 2-3; w = 1-2, x = 1-3; y loop at 0; z bridge 0-1
            "111" => &[(2, 3), (2, 3), (1, 2), (1, 3), (0, 0), (0, 1)],
            // u loop at 0, v bridge 0-1, w, x parallel on 1-2, y bridge 2-3, z loop at 3
            "212" => &[(0, 0), (0, 1), (1, 2), (1, 2), (2, 3), (3, 3)],
            // bridges u, v, w from centre 0; loops x, y, z
            "303" => &[(0, 1), (0, 2), (0, 3), (1, 1), (2, 2), (3, 3)],
            _ => return None,
        };
        Some(MultiGraph::new(4, edges.iter().copied()).unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> MultiGraph {
        MultiGraph::new(2, [(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn trivalent_counts() {
        let counts: Vec<usize> = (2..=4).map(|g| enumerate_trivalent(g).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 5, 17]);
    }

    #[test]
    fn genus3_automorphism_orders() {
        let orders: Vec<usize> = genus3::NAMES
            .iter()
            .map(|n| canonical_form(&genus3::graph(n).unwrap()).unwrap().automorphism_order())
            .collect();
        assert_eq!(orders, vec![24, 16, 4, 4, 6]);
        assert_eq!(canonical_form(&theta()).unwrap().automorphism_order(), 12);
        assert_eq!(canonical_form(&theta()).unwrap().edge_permutations().len(), 6);
    }

    #[test]
    fn genus3_labels() {
        for name in genus3::NAMES {
            let l = label(&genus3::graph(name).unwrap());
            assert_eq!(format!("{l}"), format!("({name})"));
        }
    }

    #[test]
    fn edge_order_is_consistent() {
        let g = genus3::graph("111").unwrap();
        let c = canonical_form(&g).unwrap();
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            let (x, y) = c.graph.edges()[c.edge_order[i]];
            let (p, q) = (c.relabel[a], c.relabel[b]);
            assert_eq!((x, y), (p.min(q), p.max(q)));
        }
    }

    #[test]
    fn planarity_and_sprawling() {
        let k33 = MultiGraph::new(
            6,
            [(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap();
        assert!(!is_planar(&k33));
        assert!(is_planar(&genus3::graph("000").unwrap()));
        let k5 = MultiGraph::new(5, (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b)))).unwrap();
        assert!(!is_planar(&k5));
        assert!(is_sprawling(&genus3::graph("303").unwrap()));
        assert!(!is_sprawling(&theta()));
        for name in ["000", "020", "111", "212"] {
            assert!(!is_sprawling(&genus3::graph(name).unwrap()));
        }
    }

    #[test]
    fn chain_counts() {
        let g3: BTreeSet<String> = chains(3)
            .unwrap()
            .iter()
            .map(|g| label(g).to_string())
            .collect();
        assert_eq!(g3, ["(020)", "(111)", "(212)"].iter().map(|s| s.to_string()).collect());
        assert_eq!(chains(2).unwrap().len(), 2);
    }

    #[test]
    fn graph_file_round_trip() {
        let g = genus3::graph("212").unwrap();
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        assert!(parse_graph("vertices 2\n0 5\n").is_err());
        assert!(parse_graph("nodes 2\n").is_err());
    }
}
