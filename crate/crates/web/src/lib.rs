//! Browser demo: random triangulations with their skeletons, the genus-3
//! realizability predicates, and small censuses.
//!
//! Every export has a plain Rust twin returning `Result<String, String>` so
//! the logic is testable natively.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

use tropimod::lattice::{family, Family, LatticePolygon};
use tropimod::moduli::{analyze, census, realizable_genus3, realizable_genus3_hyp};
use tropimod::skeleton::{genus3, label};
use tropimod::triangulate::{is_regular, placing_triangulation, random_flip_walk};

/// Polygons with more lattice points are refused to keep the page responsive.
pub const MAX_POINTS: usize = 40;
/// Censuses enumerate every class, so they get a tighter bound.
pub const MAX_CENSUS_POINTS: usize = 20;

fn polygon(spec: &str, limit: usize) -> Result<Arc<LatticePolygon>, String> {
    let f: Family = spec.parse().map_err(|e| format!("{e}"))?;
    let p = family(f).map_err(|e| format!("{e}"))?;
    if p.len() > limit {
        return Err(format!("{spec} has {} lattice points; the demo allows {limit}", p.len()));
    }
    Ok(Arc::new(p))
}

/// JSON with the triangles (as coordinates), regularity, skeleton label,
/// genus and moduli dimension of a random flip walk from a placing triangulation.
pub fn random_triangulation_json(spec: &str, seed: u32, steps: u32) -> Result<String, String> {
    let p = polygon(spec, MAX_POINTS)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    let t = random_flip_walk(&placing_triangulation(p.clone()), steps as usize, &mut rng);
    let triangles: Vec<Vec<[i64; 2]>> = t
        .triangles()
        .iter()
        .map(|tri| tri.iter().map(|&i| {
            let q = t.point(i);
            [q.x, q.y]
        }).collect())
        .collect();
    let regular = is_regular(&t).is_some();
    let (skeleton, dimension) = if p.genus() >= 2 {
        let a = analyze(&t).map_err(|e| e.to_string())?;
        (label(a.graph()).to_string(), Some(a.dimension()))
    } else {
        (String::new(), None)
    };
    Ok(json!({
        "polygon": spec,
        "genus": p.genus(),
        "triangles": triangles,
        "regular": regular,
        "skeleton": skeleton,
        "dimension": if regular { dimension } else { None },
    })
    .to_string())
}

/// Predicate verdicts for comma-separated lengths `u,v,w,x,y,z` on a genus-3 graph.
pub fn check_genus3_json(graph: &str, lengths: &str) -> Result<String, String> {
    let name = graph.trim().trim_matches(|c| c == '(' || c == ')');
    if genus3::graph(name).is_none() {
        return Err(format!("unknown genus-3 graph {graph:?}"));
    }
    let l: Vec<i128> = lengths
        .split(',')
        .map(|s| s.trim().parse::<i128>().map_err(|_| format!("length {s:?} is not a nonnegative integer")))
        .collect::<Result<_, _>>()?;
    let quartic = realizable_genus3(name, &l).map_err(|e| e.to_string())?;
    let hyperelliptic = realizable_genus3_hyp(name, &l).map_err(|e| e.to_string())?;
    Ok(json!({ "graph": format!("({name})"), "quartic": quartic, "hyperelliptic": hyperelliptic }).to_string())
}

/// Census TSV for a small polygon.
pub fn census_tsv(spec: &str) -> Result<String, String> {
    let p = polygon(spec, MAX_CENSUS_POINTS)?;
    census(p, true, 1).map(|c| c.to_tsv()).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = randomTriangulation)]
pub fn random_triangulation(spec: &str, seed: u32, steps: u32) -> Result<String, JsError> {
    random_triangulation_json(spec, seed, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = checkGenus3)]
pub fn check_genus3(graph: &str, lengths: &str) -> Result<String, JsError> {
    check_genus3_json(graph, lengths).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = census)]
pub fn census_js(spec: &str) -> Result<String, JsError> {
    census_tsv(spec).map_err(|e| JsError::new(&e))
}
