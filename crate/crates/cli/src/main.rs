use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use tropimod::arith::gcd;
use tropimod::cone::write_cone;
use tropimod::lattice::{classify_maximal_polygons, family, parse_polygon, write_polygon, Family, LatticePolygon};
use tropimod::moduli::{
    self, census, default_jobs, polygon_space, realizable_genus3, realizable_genus3_hyp, transfer_hyperelliptic,
    Mode,
};
use tropimod::skeleton::{canonical_form, genus3, label};
use tropimod::triangulate::{is_regular, parse_triangulation, write_triangulation, Enumerator};
use tropimod::volume;

const HEADER: &str = concat!("# tropimod ", env!("CARGO_PKG_VERSION"));

/// Genus from which enumerations are hours-scale and need `--extended`.
const EXTENDED_GENUS: usize = 5;

#[derive(Parser)]
#[command(name = "tropimod", version, about = "Moduli of tropical plane curves")]
struct Cli {
    /// Worker threads; outputs do not depend on it.
    #[arg(long, global = true, default_value_t = default_jobs())]
    jobs: usize,

    /// Allow hours-scale targets (genus >= 5).
    #[arg(long, global = true)]
    extended: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the maximal polygons of a genus.
    Polygons {
        #[arg(long)]
        genus: usize,
    },
    /// Enumerate unimodular triangulations of a polygon.
    Triangulate {
        /// Family spec ("T 4", "R 3 3", "H 5 4 2 5", "E 3 5", "Q 4 2") or a polygon file.
        #[arg(required = true, num_args = 1..)]
        polygon: Vec<String>,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        regular_only: bool,
        /// Every triangulation instead of one per symmetry class.
        #[arg(long)]
        no_symmetry: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Census TSV: triangulation counts per skeleton graph and moduli dimension.
    Census {
        #[arg(required = true, num_args = 1..)]
        polygon: Vec<String>,
        #[arg(long)]
        no_symmetry: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Dump the moduli cones of a polygon, one orbit representative each.
    Moduli {
        #[arg(required = true, num_args = 1..)]
        polygon: Vec<String>,
        /// Restrict to one graph label, e.g. "(020)".
        #[arg(long)]
        graph: Option<String>,
        #[arg(long, default_value_t = 0)]
        min_dim: usize,
        /// Only cones not contained in another up to automorphism.
        #[arg(long)]
        maximal: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Decide whether a genus-3 metric graph is realizable.
    Check {
        /// One of 000, 020, 111, 212, 303.
        #[arg(long)]
        graph: String,
        /// Six lengths u,v,w,x,y,z as integers, decimals or fractions.
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<String>,
        #[arg(long, value_enum, default_value_t = Space::T4)]
        space: Space,
        #[arg(long, value_enum, default_value_t = MembershipMode::Closed)]
        mode: MembershipMode,
    },
    /// Probability that a random metric graph is realizable.
    Prob {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Exact rational volumes (genus 3 only).
        #[arg(long)]
        exact: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Hyperelliptic transfer: a triangulation of E^(g)_k to one of E^(g)_{g+2} with the same moduli cone.
    Transfer {
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    /// Smooth plane quartics, M_{T_4}.
    T4,
    /// Hyperelliptic genus 3, M_{R_{4,2}}.
    R42,
}

#[derive(Clone, Copy, ValueEnum)]
enum MembershipMode {
    Closed,
    Interior,
}

fn resolve_polygon(spec: &str) -> Result<LatticePolygon> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        return Ok(parse_polygon(&text)?);
    }
    let f: Family = spec.parse().with_context(|| format!("polygon {spec:?} is neither a file nor a family spec"))?;
    Ok(family(f)?)
}

fn load_polygon(args: &[String], extended: bool) -> Result<(String, Arc<LatticePolygon>)> {
    let spec = args.join(" ");
    let p = resolve_polygon(&spec)?;
    if p.genus() >= EXTENDED_GENUS && !extended {
        bail!("polygon {spec:?} has genus {}; runs of genus >= {EXTENDED_GENUS} need --extended", p.genus());
    }
    Ok((spec, Arc::new(p)))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Parses "3", "2.5" or "7/3" as a fraction.
fn parse_length(s: &str) -> Result<(i128, i128)> {
    let s = s.trim();
    let (num, den) = if let Some((a, b)) = s.split_once('/') {
        (a.trim().parse::<i128>()?, b.trim().parse::<i128>()?)
    } else if let Some((a, b)) = s.split_once('.') {
        let den = 10i128.checked_pow(b.len() as u32).context("too many decimals")?;
        let whole: i128 = if a.is_empty() { 0 } else { a.parse()? };
        let frac: i128 = if b.is_empty() { 0 } else { b.parse()? };
        (whole * den + frac, den)
    } else {
        (s.parse::<i128>()?, 1)
    };
    if den <= 0 || num < 0 {
        bail!("length {s:?} must be a nonnegative number");
    }
    Ok((num, den))
}

/// Scales rational lengths by the lcm of their denominators.
fn integer_lengths(raw: &[String]) -> Result<Vec<i128>> {
    if raw.len() != 6 {
        bail!("expected six lengths u,v,w,x,y,z, got {}", raw.len());
    }
    let fr: Vec<(i128, i128)> = raw.iter().map(|s| parse_length(s)).collect::<Result<_>>()?;
    let lcm = fr.iter().fold(1i128, |l, &(_, d)| l / gcd(l, d) * d);
    Ok(fr.iter().map(|&(n, d)| n * (lcm / d)).collect())
}

/// Counts triangulation classes, checkpointing to `$TROPIMOD_CACHE` every
/// `EVERY` classes and resuming from an existing checkpoint.
fn count_classes(spec: &str, polygon: Arc<LatticePolygon>, up_to_symmetry: bool) -> Result<(usize, usize)> {
    const EVERY: usize = 10_000;
    let file = std::env::var_os("TROPIMOD_CACHE").map(|d| {
        let name: String = spec.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
        PathBuf::from(d).join(format!("{name}-{}.ckpt", if up_to_symmetry { "sym" } else { "all" }))
    });
    let (mut it, mut regular) = match &file {
        Some(path) if path.is_file() => {
            let text = fs::read_to_string(path)?;
            let (counts, state) = text.split_once('\n').context("truncated checkpoint")?;
            let regular: usize = counts
                .strip_prefix("regular ")
                .and_then(|r| r.trim().parse().ok())
                .context("checkpoint lacks the regular count")?;
            let e = Enumerator::resume(polygon, up_to_symmetry, state)?;
            eprintln!("resuming from {} after {} classes", path.display(), e.yielded());
            (e, regular)
        }
        _ => (Enumerator::new(polygon, up_to_symmetry), 0),
    };
    while let Some(t) = it.next() {
        if is_regular(&t).is_some() {
            regular += 1;
        }
        if let Some(path) = &file {
            if it.yielded() % EVERY == 0 {
                fs::create_dir_all(path.parent().unwrap())?;
                fs::write(path, format!("regular {regular}\n{}", it.checkpoint()))?;
            }
        }
    }
    Ok((it.yielded(), regular))
}

fn run(cli: Cli) -> Result<()> {
    let jobs = cli.jobs.max(1);
    match cli.command {
        Command::Polygons { genus } => {
            if genus >= EXTENDED_GENUS + 2 && !cli.extended {
                bail!("genus {genus} needs --extended");
            }
            let cls = classify_maximal_polygons(genus)?;
            let mut out = format!("{HEADER} polygons genus {genus}\n");
            for (i, p) in cls.two_dimensional.iter().enumerate() {
                out.push_str(&format!("# Q {genus} {}: {} lattice points\n", i + 1, p.len()));
                out.push_str(&write_polygon(p));
                out.push('\n');
            }
            for (k, p) in cls.hyperelliptic.iter().enumerate() {
                out.push_str(&format!("# E {genus} {}: {} lattice points\n", k + 1, p.len()));
                out.push_str(&write_polygon(p));
                out.push('\n');
            }
            print!("{out}");
        }
        Command::Triangulate { polygon, count_only, regular_only, no_symmetry, output } => {
            let (spec, p) = load_polygon(&polygon, cli.extended)?;
            if count_only {
                let (total, regular) = count_classes(&spec, p, !no_symmetry)?;
                emit(&output, &format!("triangulations\t{total}\nregular\t{regular}\n"))?;
            } else {
                let mut out = String::new();
                for t in Enumerator::new(p, !no_symmetry) {
                    if regular_only && is_regular(&t).is_none() {
                        continue;
                    }
                    out.push_str(&write_triangulation(&t, &spec));
                    out.push('\n');
                }
                emit(&output, &out)?;
            }
        }
        Command::Census { polygon, no_symmetry, output } => {
            let (spec, p) = load_polygon(&polygon, cli.extended)?;
            let c = census(p, !no_symmetry, jobs)?;
            emit(&output, &format!("{HEADER} census {spec}\n{}", c.to_tsv()))?;
        }
        Command::Moduli { polygon, graph, min_dim, maximal, output } => {
            let (spec, p) = load_polygon(&polygon, cli.extended)?;
            let mut space = polygon_space(p, min_dim, jobs)?;
            let mut out = format!("{HEADER} moduli {spec}\n# dimension {}\n", space.dimension()?);
            let mut matched = false;
            for gs in space.graphs.values_mut() {
                let l = label(&gs.graph).to_string();
                if graph.as_ref().is_some_and(|want| *want != l) {
                    continue;
                }
                matched = true;
                let idx: Vec<usize> = if maximal { gs.maximal()?.to_vec() } else { (0..gs.cones.len()).collect() };
                out.push_str(&format!("# graph {l} cones {} dimension {}\n", idx.len(), gs.dimension()?));
                for i in idx {
                    let c = &gs.cones[i];
                    out.push_str(&format!("CONE {l} dim {}\n", c.dimension()?));
                    out.push_str(&write_cone(&c.cone)?);
                }
            }
            if let (Some(g), false) = (&graph, matched) {
                bail!("graph {g} does not occur for {spec}");
            }
            emit(&output, &out)?;
        }
        Command::Check { graph, lengths, space, mode } => {
            let name = graph.trim_matches(|c| c == '(' || c == ')').to_string();
            let g = genus3::graph(&name).with_context(|| format!("unknown genus-3 graph {graph:?}"))?;
            let l = integer_lengths(&lengths)?;
            let order = moduli::genus3_letter_order(&name)?;
            let mut x = vec![0; 6];
            for (i, &k) in order.iter().enumerate() {
                x[k] = l[i];
            }
            let (poly, pred) = match space {
                Space::T4 => (Family::Triangle(4), realizable_genus3(&name, &l)?),
                Space::R42 => (Family::Rectangle(4, 2), realizable_genus3_hyp(&name, &l)?),
            };
            let mut sp = polygon_space(Arc::new(family(poly)?), 0, jobs)?;
            let canon = canonical_form(&g)?.graph;
            let mode = match mode {
                MembershipMode::Closed => Mode::Closed,
                MembershipMode::Interior => Mode::Interior,
            };
            let inside = match sp.graph_mut(&canon) {
                Some(gs) => {
                    gs.maximal()?;
                    gs.contains(&x, mode)?
                }
                None => false,
            };
            let verdict = |b: bool| if b { "realizable" } else { "not realizable" };
            println!("{}", verdict(inside));
            println!("# cones: {}; predicate: {}", verdict(inside), verdict(pred));
        }
        Command::Prob { genus, samples, seed, exact, output } => {
            let mut space = match genus {
                3 => polygon_space(Arc::new(family(Family::Triangle(4))?), 0, jobs)?,
                // the nine-dimensional cones all come from R_{3,3}
                4 => polygon_space(Arc::new(family(Family::Rectangle(3, 3))?), 9, jobs)?,
                _ => bail!("probabilities are computed for genus 3 and 4 only"),
            };
            let mut out = format!("{HEADER} prob genus {genus}\n");
            if exact {
                if genus != 3 {
                    bail!("exact volumes are available for genus 3 only");
                }
                let (per, avg) = volume::exact_probabilities_genus3(&mut space, volume::DEFAULT_BUDGET)?;
                out.push_str("graph\tprobability\tci95\tmethod\tsamples\tseed\n");
                for (name, v) in genus3::NAMES.iter().zip(&per) {
                    out.push_str(&format!("({name})\t{v}\t0\texact\t-\t-\n"));
                }
                out.push_str(&format!("average\t{avg}\t0\texact\t-\t-\n"));
            } else {
                out.push_str(&volume::estimate_probability(&mut space, samples, seed, jobs)?.to_tsv());
            }
            emit(&output, &out)?;
        }
        Command::Transfer { input, output } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let t = parse_triangulation(&text, |s| resolve_polygon(s).map_err(|e| tropimod::Error::InvalidParams(e.to_string())))?;
            let image = transfer_hyperelliptic(&t)?;
            let g = t.polygon().genus();
            emit(&output, &write_triangulation(&image, &format!("E {g} {}", g + 2)))?;
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
