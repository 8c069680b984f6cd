//! Probability that a random metric graph is realizable.
//!
//! Each trivalent graph of genus g is weighted equally and its edge lengths
//! are drawn uniformly from the simplex `{ sum = 1 }`. A graph's probability
//! is the normalized volume of the automorphism-closed union of its moduli
//! cones inside that simplex.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{determinant, dot, rank, IntVec};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::moduli::{par_map, ModuliSpace};
use crate::skeleton::{enumerate_trivalent, genus3, label, MultiGraph};

pub const DEFAULT_BUDGET: usize = 1 << 20;

/// Bits of the dyadic grid samples are rounded to before exact membership tests.
pub const DYADIC_BITS: u32 = 40;

/// Uniform points on the standard simplex `{ x in R^{dim+1}_{>=0} : sum x = 1 }`.
///
/// Point `i` of a stream depends only on the seed, the stream id and `i`, so
/// splitting a run across workers does not change any sample.
#[derive(Clone, Debug)]
pub struct SimplexSampler {
    dim: usize,
    rng: ChaCha8Rng,
}

impl SimplexSampler {
    pub fn new(dim: usize, seed: u64, stream: u64) -> Self {
        assert!(dim >= 1, "simplex dimension must be positive");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        SimplexSampler { dim, rng }
    }

    /// Each point consumes `dim + 1` 64-bit draws (two 32-bit words apiece).
    pub fn seek(&mut self, index: u64) {
        self.rng.set_word_pos(index as u128 * 2 * (self.dim as u128 + 1));
    }

    /// Exponential spacings: normalized i.i.d. Exp(1) variables.
    pub fn next_point(&mut self) -> Vec<f64> {
        let e: Vec<f64> = (0..=self.dim)
            .map(|_| {
                // uniform in (0, 1]
                let u = ((self.rng.next_u64() >> 11) + 1) as f64 / (1u64 << 53) as f64;
                -u.ln()
            })
            .collect();
        let s: f64 = e.iter().sum();
        e.into_iter().map(|v| v / s).collect()
    }
}

/// First point of the stream for `seed`.
pub fn sample_simplex(dim: usize, seed: u64) -> Vec<f64> {
    SimplexSampler::new(dim, seed, 0).next_point()
}

/// Rounds a simplex point to integers on the dyadic grid `2^-DYADIC_BITS`.
/// Cones are homogeneous, so the scale does not affect membership.
pub fn dyadic(x: &[f64]) -> IntVec {
    let scale = (1u64 << DYADIC_BITS) as f64;
    x.iter().map(|v| (v * scale).round() as i128).collect()
}

#[derive(Clone, Debug)]
pub struct GraphEstimate {
    pub graph: MultiGraph,
    pub label: String,
    pub hits: u64,
    pub samples: u64,
}

impl GraphEstimate {
    pub fn probability(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.hits as f64 / self.samples as f64
        }
    }

    /// Half-width of the normal-approximation 95% interval.
    pub fn half_width(&self) -> f64 {
        if self.samples == 0 {
            return 0.0;
        }
        let p = self.probability();
        1.96 * (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct ProbabilityReport {
    pub genus: usize,
    pub seed: u64,
    pub samples: u64,
    /// One entry per trivalent graph of the genus; unrealizable graphs have no samples.
    pub graphs: Vec<GraphEstimate>,
}

impl ProbabilityReport {
    pub fn average(&self) -> f64 {
        self.graphs.iter().map(|g| g.probability()).sum::<f64>() / self.graphs.len() as f64
    }

    pub fn half_width(&self) -> f64 {
        let var: f64 = self.graphs.iter().map(|g| (g.half_width() / 1.96).powi(2)).sum();
        1.96 * var.sqrt() / self.graphs.len() as f64
    }

    pub fn by_label(&self, label: &str) -> Option<&GraphEstimate> {
        self.graphs.iter().find(|g| g.label == label)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("graph\tprobability\tci95\tmethod\tsamples\tseed\n");
        let mut rows: Vec<&GraphEstimate> = self.graphs.iter().collect();
        rows.sort_by(|a, b| a.label.cmp(&b.label));
        for g in rows {
            out.push_str(&format!(
                "{}\t{:.6}\t{:.6}\tmc\t{}\t{}\n",
                g.label,
                g.probability(),
                g.half_width(),
                g.samples,
                self.seed
            ));
        }
        out.push_str(&format!(
            "average\t{:.6}\t{:.6}\tmc\t{}\t{}\n",
            self.average(),
            self.half_width(),
            self.samples,
            self.seed
        ));
        out
    }
}

/// Full-dimensional maximal cones of a graph, expanded to automorphism orbits.
/// Lower-dimensional cones have measure zero.
pub fn region_cones(space: &mut ModuliSpace, graph: &MultiGraph) -> Result<Vec<Cone>> {
    let full = 3 * space.genus - 3;
    let Some(gs) = space.graph_mut(graph) else {
        return Ok(Vec::new());
    };
    let cones = gs.orbit_cones(full)?;
    for c in &cones {
        c.h_rep()?;
    }
    Ok(cones)
}

fn in_union(cones: &[Cone], x: &[i128]) -> Result<bool> {
    for c in cones {
        if c.contains_point(x)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Monte Carlo estimate of the realizable fraction for every trivalent graph of `space.genus`.
pub fn estimate_probability(
    space: &mut ModuliSpace,
    samples: u64,
    seed: u64,
    jobs: usize,
) -> Result<ProbabilityReport> {
    let g = space.genus;
    let dim = 3 * g - 4;
    let mut graphs = Vec::new();
    for (stream, graph) in enumerate_trivalent(g)?.into_iter().enumerate() {
        let cones = region_cones(space, &graph)?;
        let lbl = label(&graph).to_string();
        if cones.is_empty() {
            graphs.push(GraphEstimate { graph, label: lbl, hits: 0, samples: 0 });
            continue;
        }
        let chunks = jobs.max(1) as u64;
        let ranges: Vec<(u64, u64)> =
            (0..chunks).map(|k| (samples * k / chunks, samples * (k + 1) / chunks)).collect();
        let counts = par_map(&ranges, jobs, |&(lo, hi)| -> Result<u64> {
            let mut s = SimplexSampler::new(dim, seed, stream as u64);
            s.seek(lo);
            let mut hits = 0;
            for _ in lo..hi {
                if in_union(&cones, &dyadic(&s.next_point()))? {
                    hits += 1;
                }
            }
            Ok(hits)
        });
        let hits = counts.into_iter().sum::<Result<u64>>()?;
        graphs.push(GraphEstimate { graph, label: lbl, hits, samples });
    }
    Ok(ProbabilityReport { genus: g, seed, samples, graphs })
}

/// Volume of `cone ∩ { sum = 1 }` relative to the standard simplex, for a
/// cone inside the nonnegative orthant.
pub fn simplex_fraction(cone: &Cone) -> Result<BigRational> {
    let d = cone.ambient_dim();
    if cone.dimension()? < d {
        return Ok(BigRational::zero());
    }
    if !cone.lineality()?.is_empty() {
        return Err(Error::InvalidParams("cone is not pointed".into()));
    }
    let rays = cone.rays()?.to_vec();
    let ineqs = cone.h_rep()?.inequalities.clone();
    let mut total = BigRational::zero();
    let all: Vec<usize> = (0..rays.len()).collect();
    for simplex in triangulate_face(&rays, &ineqs, &all, d)? {
        let rows: Vec<IntVec> = simplex.iter().map(|&i| rays[i].clone()).collect();
        let mut denom = BigInt::one();
        for r in &rows {
            let s: i128 = r.iter().sum();
            if s <= 0 {
                return Err(Error::InvalidParams("cone leaves the nonnegative orthant".into()));
            }
            denom *= BigInt::from(s);
        }
        total += BigRational::new(determinant(&rows).abs(), denom);
    }
    Ok(total)
}

/// Pulling triangulation of the face spanned by `face` (indices into `rays`)
/// of dimension `dim`, using the cone's facet normals to find subfaces.
fn triangulate_face(rays: &[IntVec], ineqs: &[IntVec], face: &[usize], dim: usize) -> Result<Vec<Vec<usize>>> {
    if face.len() == dim {
        return Ok(vec![face.to_vec()]);
    }
    let apex = face[0];
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for a in ineqs {
        if dot(a, &rays[apex])? == 0 {
            continue;
        }
        let mut sub = Vec::new();
        for &i in face {
            if dot(a, &rays[i])? == 0 {
                sub.push(i);
            }
        }
        if sub.len() < dim - 1 || !seen.insert(sub.clone()) {
            continue;
        }
        let rows: Vec<IntVec> = sub.iter().map(|&i| rays[i].clone()).collect();
        if rank(&rows) != dim - 1 {
            continue;
        }
        for mut s in triangulate_face(rays, ineqs, &sub, dim - 1)? {
            s.push(apex);
            out.push(s);
        }
    }
    Ok(out)
}

/// Normalized volume of a union of full-dimensional cones, summed over the
/// disjoint pieces `C_i \ (C_0 ∪ ... ∪ C_{i-1})`. Each difference is cut
/// along the facets of the earlier cone and pieces that lose dimension are
/// dropped. `budget` bounds the number of pieces alive at once.
pub fn union_fraction(cones: &[Cone], budget: usize) -> Result<BigRational> {
    let Some(d) = cones.first().map(|c| c.ambient_dim()) else {
        return Ok(BigRational::zero());
    };
    let full = |ineqs: Vec<IntVec>| -> Result<Option<Vec<IntVec>>> {
        let c = Cone::from_h(d, ineqs, vec![]);
        Ok(if c.dimension()? == d { Some(c.h_rep()?.inequalities.clone()) } else { None })
    };
    let mut total = BigRational::zero();
    for (i, c) in cones.iter().enumerate() {
        if c.dimension()? < d {
            continue;
        }
        let mut pieces = vec![c.h_rep()?.inequalities.clone()];
        for earlier in &cones[..i] {
            let facets = &earlier.h_rep()?.inequalities;
            let mut next = Vec::new();
            for p in pieces {
                let mut meet = p.clone();
                meet.extend(facets.iter().cloned());
                if full(meet)?.is_none() {
                    next.push(p);
                    continue;
                }
                for (k, a) in facets.iter().enumerate() {
                    let mut q = p.clone();
                    q.extend(facets[..k].iter().cloned());
                    q.push(a.iter().map(|v| -v).collect());
                    if let Some(q) = full(q)? {
                        next.push(q);
                    }
                }
            }
            if next.len() > budget {
                return Err(Error::Unsupported(format!("union decomposition exceeds {budget} pieces")));
            }
            pieces = next;
            if pieces.is_empty() {
                break;
            }
        }
        for p in pieces {
            total += simplex_fraction(&Cone::from_h(d, p, vec![]))?;
        }
    }
    Ok(total)
}

/// Exact realizable fraction of a genus-3 graph, given `space` = M_{T_4}.
pub fn exact_volume_genus3(space: &mut ModuliSpace, name: &str, budget: usize) -> Result<BigRational> {
    let g = genus3::graph(name)
        .ok_or_else(|| Error::InvalidParams(format!("unknown genus-3 graph {name}")))?;
    let canon = crate::skeleton::canonical_form(&g)?.graph;
    union_fraction(&region_cones(space, &canon)?, budget)
}

/// The exact genus-3 table in the order of [`genus3::NAMES`] and its average.
pub fn exact_probabilities_genus3(space: &mut ModuliSpace, budget: usize) -> Result<(Vec<BigRational>, BigRational)> {
    let mut per = Vec::new();
    for name in genus3::NAMES {
        per.push(exact_volume_genus3(space, name, budget)?);
    }
    let avg = per.iter().fold(BigRational::zero(), |a, b| a + b) / BigRational::from_integer(BigInt::from(per.len()));
    Ok((per, avg))
}
