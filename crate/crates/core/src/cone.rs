//! Exact polyhedral cones with lazily converted H- and V-representations.
//!
//! Conversion uses the double description method with a combinatorial
//! adjacency test. All vectors are primitive `i128` vectors and every
//! arithmetic step is overflow-checked.

use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::arith::{self, combine, dot, is_zero, IntVec};
use crate::error::{Error, Result};

/// `{ x : a·x >= 0 for a in inequalities, e·x = 0 for e in equations }`
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HRep {
    pub inequalities: Vec<IntVec>,
    pub equations: Vec<IntVec>,
}

/// `cone(rays) + span(lineality)`
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VRep {
    pub rays: Vec<IntVec>,
    pub lineality: Vec<IntVec>,
}

#[derive(Debug)]
pub struct Cone {
    ambient: usize,
    /// H-representation as given, possibly redundant.
    given_h: Option<HRep>,
    /// Generators as given, possibly redundant.
    given_v: Option<VRep>,
    v: OnceLock<VRep>,
    h: OnceLock<HRep>,
}

impl Clone for Cone {
    fn clone(&self) -> Self {
        let c = Cone {
            ambient: self.ambient,
            given_h: self.given_h.clone(),
            given_v: self.given_v.clone(),
            v: OnceLock::new(),
            h: OnceLock::new(),
        };
        if let Some(v) = self.v.get() {
            let _ = c.v.set(v.clone());
        }
        if let Some(h) = self.h.get() {
            let _ = c.h.set(h.clone());
        }
        c
    }
}

impl Cone {
    pub fn from_h(ambient: usize, inequalities: Vec<IntVec>, equations: Vec<IntVec>) -> Cone {
        debug_assert!(inequalities.iter().chain(&equations).all(|v| v.len() == ambient));
        Cone {
            ambient,
            given_h: Some(HRep {
                inequalities,
                equations,
            }),
            given_v: None,
            v: OnceLock::new(),
            h: OnceLock::new(),
        }
    }

    /// The cone generated by `rays` plus the linear span of `lineality`.
    pub fn from_v(ambient: usize, rays: Vec<IntVec>, lineality: Vec<IntVec>) -> Cone {
        debug_assert!(rays.iter().chain(&lineality).all(|v| v.len() == ambient));
        Cone {
            ambient,
            given_h: None,
            given_v: Some(VRep { rays, lineality }),
            v: OnceLock::new(),
            h: OnceLock::new(),
        }
    }

    /// Builds a cone from already minimal representations, skipping conversion.
    pub fn from_parts(ambient: usize, h: HRep, v: VRep) -> Cone {
        let c = Cone {
            ambient,
            given_h: None,
            given_v: None,
            v: OnceLock::new(),
            h: OnceLock::new(),
        };
        let _ = c.h.set(h);
        let _ = c.v.set(v);
        c
    }

    pub fn orthant(d: usize) -> Cone {
        let e: Vec<IntVec> = (0..d).map(|i| unit(d, i)).collect();
        Cone::from_parts(
            d,
            HRep {
                inequalities: e.clone(),
                equations: vec![],
            },
            VRep {
                rays: e,
                lineality: vec![],
            },
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Minimal V-representation: extreme rays and a lineality basis.
    pub fn v_rep(&self) -> Result<&VRep> {
        if let Some(v) = self.v.get() {
            return Ok(v);
        }
        let v = match (&self.given_h, &self.given_v) {
            (Some(h), _) => dd(self.ambient, &h.inequalities, &h.equations)?,
            (None, Some(_)) => {
                let h = self.h_rep()?;
                dd(self.ambient, &h.inequalities, &h.equations)?
            }
            (None, None) => unreachable!("cone without representation"),
        };
        let _ = self.v.set(v);
        Ok(self.v.get().unwrap())
    }

    /// Minimal H-representation: facet inequalities and an equation basis.
    pub fn h_rep(&self) -> Result<&HRep> {
        if let Some(h) = self.h.get() {
            return Ok(h);
        }
        let h = match &self.given_v {
            Some(g) => dual(self.ambient, g)?,
            None => {
                let v = self.v_rep()?.clone();
                dual(self.ambient, &v)?
            }
        };
        let _ = self.h.set(h);
        Ok(self.h.get().unwrap())
    }

    /// Any valid H-description; avoids a conversion when one was given.
    fn some_h(&self) -> Result<&HRep> {
        match &self.given_h {
            Some(h) => Ok(h),
            None => self.h_rep(),
        }
    }

    pub fn rays(&self) -> Result<&[IntVec]> {
        Ok(&self.v_rep()?.rays)
    }

    pub fn lineality(&self) -> Result<&[IntVec]> {
        Ok(&self.v_rep()?.lineality)
    }

    pub fn dimension(&self) -> Result<usize> {
        let v = self.v_rep()?;
        let all: Vec<IntVec> = v.rays.iter().chain(&v.lineality).cloned().collect();
        Ok(arith::rank(&all))
    }

    pub fn contains_point(&self, x: &[i128]) -> Result<bool> {
        let h = self.some_h()?;
        for e in &h.equations {
            if dot(e, x)? != 0 {
                return Ok(false);
            }
        }
        for a in &h.inequalities {
            if dot(a, x)? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `x` lies in the relative interior.
    pub fn contains_point_relint(&self, x: &[i128]) -> Result<bool> {
        let h = self.h_rep()?;
        for e in &h.equations {
            if dot(e, x)? != 0 {
                return Ok(false);
            }
        }
        for a in &h.inequalities {
            if dot(a, x)? <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `other ⊆ self`
    pub fn contains_cone(&self, other: &Cone) -> Result<bool> {
        let h = self.some_h()?;
        let v = match &other.given_v {
            Some(g) if other.v.get().is_none() => g,
            _ => other.v_rep()?,
        };
        for r in &v.rays {
            if !self.contains_point(r)? {
                return Ok(false);
            }
        }
        for l in &v.lineality {
            for a in h.inequalities.iter().chain(&h.equations) {
                if dot(a, l)? != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &Cone) -> Result<bool> {
        Ok(self.contains_cone(other)? && other.contains_cone(self)?)
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        let a = self.some_h()?;
        let b = other.some_h()?;
        Ok(Cone::from_h(
            self.ambient,
            a.inequalities.iter().chain(&b.inequalities).cloned().collect(),
            a.equations.iter().chain(&b.equations).cloned().collect(),
        ))
    }

    /// Image under a linear map, re-minimized.
    pub fn image(&self, map: &LinearMap) -> Result<Cone> {
        let v = self.v_rep()?;
        let rays = v
            .rays
            .iter()
            .map(|r| map.apply(r))
            .collect::<Result<Vec<_>>>()?;
        let lin = v
            .lineality
            .iter()
            .map(|r| map.apply(r))
            .collect::<Result<Vec<_>>>()?;
        let c = Cone::from_v(map.rows(), rays, lin);
        c.v_rep()?;
        Ok(c)
    }

    /// Permutes coordinates: coordinate `i` of the result is coordinate
    /// `perm[i]` of the input.
    pub fn permute(&self, perm: &[usize]) -> Result<Cone> {
        let p = |v: &IntVec| perm.iter().map(|&j| v[j]).collect::<IntVec>();
        let v = self.v_rep()?;
        let h = self.h_rep()?;
        Ok(Cone::from_parts(
            self.ambient,
            HRep {
                inequalities: h.inequalities.iter().map(p).collect(),
                equations: h.equations.iter().map(p).collect(),
            },
            VRep {
                rays: v.rays.iter().map(p).collect(),
                lineality: v.lineality.iter().map(p).collect(),
            },
        ))
    }
}

fn unit(d: usize, i: usize) -> IntVec {
    let mut v = vec![0; d];
    v[i] = 1;
    v
}

/// H-representation dual to the given generators.
fn dual(ambient: usize, g: &VRep) -> Result<HRep> {
    let v = dd(ambient, &g.rays, &g.lineality)?;
    Ok(HRep {
        inequalities: v.rays,
        equations: v.lineality,
    })
}

pub fn dd_h_to_v(c: &Cone) -> Result<VRep> {
    c.v_rep().cloned()
}

pub fn dd_v_to_h(c: &Cone) -> Result<HRep> {
    c.h_rep().cloned()
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

/// Double description: extreme rays and lineality of
/// `{ x : a·x >= 0 (a in ineqs), e·x = 0 (e in eqs) }`.
fn dd(d: usize, ineqs: &[IntVec], eqs: &[IntVec]) -> Result<VRep> {
    let mut lin: Vec<IntVec> = (0..d).map(|i| unit(d, i)).collect();
    for e in eqs {
        shrink_lineality(&mut lin, e)?;
    }
    let mut order: Vec<usize> = (0..ineqs.len()).filter(|&i| !is_zero(&ineqs[i])).collect();
    order.sort_by_key(|&i| ineqs[i].iter().filter(|&&x| x != 0).count());
    let nbits = order.len();
    let mut rays: Vec<(IntVec, Bits)> = Vec::new();
    let mut dp: usize = 0;
    for (k, &ai) in order.iter().enumerate() {
        let a = &ineqs[ai];
        if let Some((mut l0, v0)) = shrink_lineality(&mut lin, a)? {
            let v0 = if v0 < 0 {
                l0.iter_mut().for_each(|x| *x = -*x);
                -v0
            } else {
                v0
            };
            let mut next = Vec::with_capacity(rays.len() + 1);
            for (r, mut bits) in rays.drain(..) {
                let s = dot(a, &r)?;
                let nr = if s == 0 { r } else { combine(v0, &r, s, &l0)? };
                bits.set(k);
                next.push((nr, bits));
            }
            let mut bits = Bits::new(nbits);
            for j in 0..k {
                bits.set(j);
            }
            next.push((l0, bits));
            rays = next;
            dp += 1;
            continue;
        }
        let mut vals = Vec::with_capacity(rays.len());
        for (r, _) in &rays {
            vals.push(dot(a, r)?);
        }
        if vals.iter().all(|&s| s >= 0) {
            for (i, (_, bits)) in rays.iter_mut().enumerate() {
                if vals[i] == 0 {
                    bits.set(k);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        let mut created = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let z = rays[p].1.and(&rays[n].1);
                if z.count() + 2 < dp {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(i, (_, b))| i != p && i != n && z.subset_of(b));
                if blocked {
                    continue;
                }
                let nr = combine(vals[p], &rays[n].0, vals[n], &rays[p].0)?;
                let mut bits = z;
                bits.set(k);
                created.push((nr, bits));
            }
        }
        let had_pos = !pos.is_empty();
        let mut next = Vec::with_capacity(pos.len() + created.len());
        for (i, (r, mut bits)) in rays.drain(..).enumerate() {
            if vals[i] > 0 {
                next.push((r, bits));
            } else if vals[i] == 0 {
                bits.set(k);
                next.push((r, bits));
            }
        }
        next.extend(created);
        rays = next;
        if !had_pos {
            let all: Vec<IntVec> = rays.iter().map(|(r, _)| r.clone()).chain(lin.iter().cloned()).collect();
            dp = arith::rank(&all) - lin.len();
        }
    }
    Ok(VRep {
        rays: rays.into_iter().map(|(r, _)| r).collect(),
        lineality: lin,
    })
}

/// Restricts the lineality basis to the hyperplane `a·x = 0`. Returns the
/// removed generator and its value under `a` when the basis shrinks.
fn shrink_lineality(lin: &mut Vec<IntVec>, a: &[i128]) -> Result<Option<(IntVec, i128)>> {
    let mut vals = Vec::with_capacity(lin.len());
    for l in lin.iter() {
        vals.push(dot(a, l)?);
    }
    let Some(p) = (0..lin.len())
        .filter(|&i| vals[i] != 0)
        .min_by_key(|&i| vals[i].abs())
    else {
        return Ok(None);
    };
    let l0 = lin.remove(p);
    let v0 = vals.remove(p);
    for (l, &s) in lin.iter_mut().zip(&vals) {
        if s != 0 {
            *l = combine(v0, l, s, &l0)?;
        }
    }
    Ok(Some((l0, v0)))
}

/// Integer matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    cols: usize,
    matrix: Vec<IntVec>,
}

impl LinearMap {
    pub fn new(cols: usize, matrix: Vec<IntVec>) -> LinearMap {
        debug_assert!(matrix.iter().all(|r| r.len() == cols));
        LinearMap { cols, matrix }
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matrix(&self) -> &[IntVec] {
        &self.matrix
    }

    pub fn apply(&self, v: &[i128]) -> Result<IntVec> {
        self.matrix.iter().map(|row| dot(row, v)).collect()
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        debug_assert_eq!(self.cols, inner.rows());
        let mut m = Vec::with_capacity(self.rows());
        for row in &self.matrix {
            let mut out = vec![0i128; inner.cols];
            for (k, &c) in row.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (o, &x) in out.iter_mut().zip(&inner.matrix[k]) {
                    *o = c
                        .checked_mul(x)
                        .and_then(|p| o.checked_add(p))
                        .ok_or(Error::Overflow)?;
                }
            }
            m.push(out);
        }
        Ok(LinearMap::new(inner.cols, m))
    }

    pub fn rank(&self) -> usize {
        arith::rank(&self.matrix)
    }
}

fn write_vecs(out: &mut String, name: &str, vs: &[IntVec]) {
    let _ = writeln!(out, "{name}");
    for v in vs {
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", s.join(" "));
    }
}

/// Serializes both minimal representations.
pub fn write_cone(c: &Cone) -> Result<String> {
    let h = c.h_rep()?;
    let v = c.v_rep()?;
    let mut out = String::new();
    let _ = writeln!(out, "AMBIENT {}", c.ambient_dim());
    write_vecs(&mut out, "INEQUALITIES", &h.inequalities);
    write_vecs(&mut out, "EQUATIONS", &h.equations);
    write_vecs(&mut out, "RAYS", &v.rays);
    write_vecs(&mut out, "LINEALITY", &v.lineality);
    Ok(out)
}

/// Parses a cone file. At least one of the H or V sections must be non-empty
/// unless the cone is the whole space or the origin.
pub fn parse_cone(text: &str) -> Result<Cone> {
    let mut ambient: Option<usize> = None;
    let mut section = "";
    let mut h = HRep::default();
    let mut v = VRep::default();
    let (mut saw_h, mut saw_v) = (false, false);
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("AMBIENT") {
            let n = rest
                .trim()
                .parse()
                .map_err(|_| Error::parse(ln, "bad AMBIENT dimension"))?;
            ambient = Some(n);
            continue;
        }
        match line {
            "INEQUALITIES" | "EQUATIONS" => {
                saw_h = true;
                section = if line == "INEQUALITIES" { "I" } else { "E" };
                continue;
            }
            "RAYS" | "LINEALITY" => {
                saw_v = true;
                section = if line == "RAYS" { "R" } else { "L" };
                continue;
            }
            _ => {}
        }
        let n = ambient.ok_or_else(|| Error::parse(ln, "AMBIENT must come first"))?;
        let vec: IntVec = line
            .split_whitespace()
            .map(|t| t.parse::<i128>().map_err(|_| Error::parse(ln, format!("bad integer {t:?}"))))
            .collect::<Result<_>>()?;
        if vec.len() != n {
            return Err(Error::parse(ln, format!("expected {n} entries, got {}", vec.len())));
        }
        match section {
            "I" => h.inequalities.push(vec),
            "E" => h.equations.push(vec),
            "R" => v.rays.push(arith::primitive(vec)),
            "L" => v.lineality.push(vec),
            _ => return Err(Error::parse(ln, "vector outside of a section")),
        }
    }
    let n = ambient.ok_or_else(|| Error::parse(1, "missing AMBIENT line"))?;
    let has_v = !v.rays.is_empty() || !v.lineality.is_empty();
    let has_h = !h.inequalities.is_empty() || !h.equations.is_empty();
    Ok(if has_v || (saw_v && !saw_h) {
        Cone::from_v(n, v.rays, v.lineality)
    } else if has_h || saw_h {
        Cone::from_h(n, h.inequalities, h.equations)
    } else {
        Cone::from_h(n, vec![], vec![])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<IntVec>) -> Vec<IntVec> {
        v.sort();
        v
    }

    #[test]
    fn orthant_rays() {
        let c = Cone::from_h(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], vec![]);
        assert_eq!(
            sorted(c.rays().unwrap().to_vec()),
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]
        );
        assert!(c.lineality().unwrap().is_empty());
        assert!(c.contains_point(&[1, 2, 3]).unwrap());
        assert!(c.contains_cone(&c).unwrap());
    }

    #[test]
    fn halfspace() {
        let c = Cone::from_h(2, vec![vec![1, 0]], vec![]);
        let v = c.v_rep().unwrap();
        assert_eq!(v.rays, vec![vec![1, 0]]);
        assert_eq!(v.lineality.len(), 1);
        assert_eq!(v.lineality[0][0], 0);
        assert_eq!(c.dimension().unwrap(), 2);
    }

    #[test]
    fn v_to_h() {
        let c = Cone::from_v(2, vec![vec![1, 0], vec![0, 1]], vec![]);
        assert_eq!(sorted(c.h_rep().unwrap().inequalities.clone()), vec![vec![0, 1], vec![1, 0]]);
        let r = Cone::from_v(2, vec![vec![1, 1]], vec![]);
        let h = r.h_rep().unwrap();
        assert_eq!(h.equations.len(), 1);
        assert_eq!(dot(&h.equations[0], &[1, 1]).unwrap(), 0);
        assert_eq!(h.inequalities.len(), 1);
        assert!(dot(&h.inequalities[0], &[1, 1]).unwrap() > 0);
        assert_eq!(r.dimension().unwrap(), 1);
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let c = Cone::from_v(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![2, 2, 0]], vec![]);
        assert_eq!(sorted(c.rays().unwrap().to_vec()), vec![vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(c.dimension().unwrap(), 2);
    }

    #[test]
    fn cube_cone() {
        // cone over the square [-1,1]^2 at height 1: 4 facets, 4 rays
        let ineqs = vec![vec![1, 0, 1], vec![-1, 0, 1], vec![0, 1, 1], vec![0, -1, 1]];
        let c = Cone::from_h(3, ineqs, vec![]);
        let rays = sorted(c.rays().unwrap().to_vec());
        assert_eq!(
            rays,
            vec![vec![-1, -1, 1], vec![-1, 1, 1], vec![1, -1, 1], vec![1, 1, 1]]
        );
    }

    #[test]
    fn image_of_orthant() {
        let c = Cone::orthant(2);
        let m = LinearMap::new(2, vec![vec![1, 1]]);
        let img = c.image(&m).unwrap();
        assert_eq!(img.rays().unwrap(), &[vec![1]]);
    }

    #[test]
    fn file_round_trip() {
        let c = Cone::from_h(3, vec![vec![1, 0, 1], vec![-1, 0, 1], vec![0, 1, 0]], vec![]);
        let text = write_cone(&c).unwrap();
        let d = parse_cone(&text).unwrap();
        assert!(c.same_as(&d).unwrap());
        assert!(parse_cone("RAYS\n1 0\n").is_err());
        assert!(matches!(parse_cone("AMBIENT 2\nRAYS\n1 0 0\n"), Err(Error::Parse { line: 3, .. })));
    }
}
