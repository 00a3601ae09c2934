//! Graph pairs with equal Tutte polynomials pushed through incidence codes,
//! 4-fold replication and Construction A, plus a small exhaustive search for
//! such pairs.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{replicate4, weight_enumerator_enum, weight_enumerator_greene, BinaryCode};
use crate::error::{Error, Result};
use crate::graphs::{canonical_form, is_isomorphic_capped, join, path_graph, subdivide_edge, GraphFile, Multigraph};
use crate::lattices::theta_from_code;
use crate::matroids::{tutte, tutte_deletion_contraction, tutte_subset_expansion_capped, Matroid, DEFAULT_SUBSET_CAP};
use crate::poly::Poly;

/// Default theta precision in quarter units (`q^10`).
pub const DEFAULT_PRECISION: usize = 40;

/// Edge count of `G_i(m, n)`.
pub fn bpr_edge_count(m: usize, n: usize) -> usize {
    3 * m + 11 * n + 24
}

/// Builds `G_i(m, n)`: `G_i` joined with the path of `n` edges, then every
/// marked edge of `G_i` subdivided `m` times. Both results must have
/// `3m + 11n + 24` edges.
pub fn bpr_family(g1: &GraphFile, g2: &GraphFile, m: usize, n: usize) -> Result<(Multigraph, Multigraph)> {
    let build = |f: &GraphFile| -> Result<Multigraph> {
        let mut g = join(&f.graph, &path_graph(n));
        for &e in &f.marked {
            g = subdivide_edge(&g, e, m)?;
        }
        let want = bpr_edge_count(m, n);
        if g.n_edges() != want {
            return Err(Error::Invalid(format!(
                "G(m={m}, n={n}) has {} edges, expected {want}; check the fixture and its marked edges",
                g.n_edges()
            )));
        }
        Ok(g)
    };
    Ok((build(g1)?, build(g2)?))
}

/// Least `(m, n)` (smallest `m` first) with `3m + 11n + 24 = d`.
pub fn representable_d(d: usize) -> Option<(usize, usize)> {
    let rest = d.checked_sub(24)?;
    (0..=rest / 3)
        .find(|m| (rest - 3 * m) % 11 == 0)
        .map(|m| (m, (rest - 3 * m) / 11))
}

/// Parses a fixture slot. A file with no records yields `None`.
pub fn load_fixture(text: &str) -> Result<Option<GraphFile>> {
    let has_records = text
        .lines()
        .any(|l| !l.split('#').next().unwrap_or("").trim().is_empty());
    if !has_records {
        return Ok(None);
    }
    GraphFile::parse(text).map(Some)
}

/// The bundled `G_1`, `G_2` slots, if populated.
pub fn bundled_bpr_fixtures() -> Result<Option<(GraphFile, GraphFile)>> {
    let g1 = load_fixture(include_str!("../fixtures/bpr_g1.graph"))?;
    let g2 = load_fixture(include_str!("../fixtures/bpr_g2.graph"))?;
    Ok(g1.zip(g2))
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Theta precision in quarter units.
    pub precision: usize,
    /// Vertex cap for the isomorphism check.
    pub iso_cap: usize,
    /// Ground-set cap for subset expansion and codeword enumeration.
    pub subset_cap: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            precision: DEFAULT_PRECISION,
            iso_cap: 12,
            subset_cap: DEFAULT_SUBSET_CAP,
        }
    }
}

/// Outcome of one run. A `None` stage was skipped; the reason is listed in
/// `skipped`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub edge_count: usize,
    pub edge_counts: (usize, usize),
    pub tutte_equal: Option<bool>,
    pub tutte_algorithms_agree: Option<bool>,
    pub graphs_nonisomorphic: Option<bool>,
    pub wenum_equal: Option<bool>,
    pub wenum_algorithms_agree: Option<bool>,
    pub replicated_doubly_even: Option<(bool, bool)>,
    pub theta_equal_to_precision: (Option<bool>, usize),
    pub lattice_rank: usize,
    pub lattice_isomorphism: String,
    pub tutte_polynomial: Option<String>,
    pub weight_enumerator: Option<String>,
    pub skipped: Vec<String>,
}

impl PipelineReport {
    /// `tutte_equal => wenum_equal => theta_equal`, over the stages that ran.
    pub fn chain_holds(&self) -> bool {
        let implies = |a: Option<bool>, b: Option<bool>| a != Some(true) || b != Some(false);
        implies(self.tutte_equal, self.wenum_equal)
            && implies(self.wenum_equal, self.theta_equal_to_precision.0)
    }

    /// Every stage ran and every equality, the non-isomorphism and both
    /// doubly-even checks came out true.
    pub fn all_true(&self) -> bool {
        self.tutte_equal == Some(true)
            && self.tutte_algorithms_agree == Some(true)
            && self.graphs_nonisomorphic == Some(true)
            && self.wenum_equal == Some(true)
            && self.wenum_algorithms_agree == Some(true)
            && self.replicated_doubly_even == Some((true, true))
            && self.theta_equal_to_precision.0 == Some(true)
            && self.lattice_rank == 4 * self.edge_count
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn run_pipeline(g1: &Multigraph, g2: &Multigraph, precision: usize) -> PipelineReport {
    run_pipeline_with(
        g1,
        g2,
        &PipelineOptions {
            precision,
            ..PipelineOptions::default()
        },
    )
}

/// Runs every stage it can. Stages that hit a cap or fail are recorded in
/// `skipped` and their fields stay `None`.
pub fn run_pipeline_with(g1: &Multigraph, g2: &Multigraph, opts: &PipelineOptions) -> PipelineReport {
    let mut skipped = Vec::new();
    let mut note = |stage: &str, e: Error| skipped.push(format!("{stage}: {e}"));
    let edge_counts = (g1.n_edges(), g2.n_edges());

    let m1 = Matroid::graphic(g1.clone());
    let m2 = Matroid::graphic(g2.clone());
    let t1 = tutte(&m1);
    let t2 = tutte(&m2);
    let tutte_equal = Some(t1 == t2);
    let agree = |m: &Matroid, t: &Poly| -> Result<bool> {
        let subsets = tutte_subset_expansion_capped(m, opts.subset_cap)?;
        Ok(&subsets == t && &tutte_deletion_contraction(m) == t)
    };
    let tutte_algorithms_agree = match agree(&m1, &t1).and_then(|a| Ok(a && agree(&m2, &t2)?)) {
        Ok(a) => Some(a),
        Err(e) => {
            note("tutte cross-check", e);
            None
        }
    };

    let graphs_nonisomorphic = match is_isomorphic_capped(g1, g2, opts.iso_cap) {
        Ok(iso) => Some(!iso),
        Err(e) => {
            note("isomorphism", e);
            None
        }
    };

    let c1 = BinaryCode::from_matroid(&Matroid::incidence(g1)).expect("incidence matroid is binary");
    let c2 = BinaryCode::from_matroid(&Matroid::incidence(g2)).expect("incidence matroid is binary");
    let (mut wenum_equal, mut wenum_algorithms_agree, mut weight_enumerator) = (None, None, None);
    match weight_enumerator_enum(&c1).and_then(|w1| Ok((w1, weight_enumerator_enum(&c2)?))) {
        Ok((w1, w2)) => {
            wenum_equal = Some(w1 == w2);
            weight_enumerator = Some(w1.to_string());
            match weight_enumerator_greene(&Matroid::incidence(g1))
                .and_then(|a| Ok((a, weight_enumerator_greene(&Matroid::incidence(g2))?)))
            {
                Ok((a, b)) => wenum_algorithms_agree = Some(a == w1 && b == w2),
                Err(e) => note("greene enumerator", e),
            }
        }
        Err(e) => note("weight enumerator", e),
    }

    let r1 = replicate4(&c1);
    let r2 = replicate4(&c2);
    let replicated_doubly_even = Some((r1.is_doubly_even(), r2.is_doubly_even()));
    let theta_equal = match theta_from_code(&r1, opts.precision)
        .and_then(|a| Ok(a == theta_from_code(&r2, opts.precision)?))
    {
        Ok(eq) => Some(eq),
        Err(e) => {
            note("theta", e);
            None
        }
    };

    PipelineReport {
        edge_count: g1.n_edges(),
        edge_counts,
        tutte_equal,
        tutte_algorithms_agree,
        graphs_nonisomorphic,
        wenum_equal,
        wenum_algorithms_agree,
        replicated_doubly_even,
        theta_equal_to_precision: (theta_equal, opts.precision),
        lattice_rank: r1.length(),
        lattice_isomorphism: "not certified".into(),
        tutte_polynomial: Some(t1.to_string()),
        weight_enumerator,
        skipped,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Allow parallel edges.
    pub multigraphs: bool,
    /// Keep only 2-connected graphs.
    pub two_connected: bool,
}

impl SearchOptions {
    pub fn new(max_vertices: usize, max_edges: usize) -> Self {
        SearchOptions {
            max_vertices,
            max_edges,
            multigraphs: true,
            two_connected: false,
        }
    }
}

/// Connected loopless graphs with `v` vertices and at most `max_edges`
/// edges, one per isomorphism class, grown one edge at a time.
fn graphs_on(v: usize, opts: &SearchOptions) -> Vec<Multigraph> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut level = vec![Multigraph::empty(v)];
    let mut out = Vec::new();
    seen.insert(canonical_form(&level[0]));
    for _ in 0..opts.max_edges {
        let children: Vec<(Vec<u32>, Multigraph)> = level
            .par_iter()
            .flat_map_iter(|g| {
                let present: HashSet<(usize, usize)> = g.edges().iter().copied().collect();
                let mut kids = Vec::new();
                for a in 0..v {
                    for b in a + 1..v {
                        if !opts.multigraphs && present.contains(&(a, b)) {
                            continue;
                        }
                        let mut h = g.clone();
                        h.add_edge(a, b).expect("in range");
                        kids.push((canonical_form(&h), h));
                    }
                }
                kids
            })
            .collect();
        let mut next = Vec::new();
        for (key, h) in children {
            if seen.insert(key) {
                next.push(h);
            }
        }
        out.extend(next.iter().filter(|g| g.is_connected()).cloned());
        level = next;
    }
    if v == 1 {
        out.push(Multigraph::empty(1));
    }
    out.retain(|g| !opts.two_connected || g.is_two_connected());
    out
}

/// Exhaustive search for non-isomorphic graphs with equal Tutte polynomials
/// among connected loopless graphs within the caps. Pairs come out in a
/// deterministic order, smaller graphs first.
pub fn search_tequivalent(opts: &SearchOptions) -> Vec<(Multigraph, Multigraph)> {
    let mut candidates: Vec<Multigraph> = (1..=opts.max_vertices)
        .flat_map(|v| graphs_on(v, opts))
        .collect();
    candidates.sort_by_key(|g| (g.n_edges(), g.n_vertices(), canonical_form(g)));
    let polys: Vec<Poly> = candidates
        .par_iter()
        .map(|g| tutte(&Matroid::graphic(g.clone())))
        .collect();
    let mut buckets: BTreeMap<(usize, usize, Poly), Vec<usize>> = BTreeMap::new();
    for (i, t) in polys.into_iter().enumerate() {
        let g = &candidates[i];
        buckets
            .entry((g.n_edges(), g.n_vertices(), t))
            .or_default()
            .push(i);
    }
    let mut pairs = Vec::new();
    for members in buckets.values() {
        for (k, &a) in members.iter().enumerate() {
            for &b in &members[k + 1..] {
                pairs.push((candidates[a].clone(), candidates[b].clone()));
            }
        }
    }
    pairs
}

/// Writes each pair as `pair_<k>_a.graph` and `pair_<k>_b.graph` under `dir`.
pub fn persist_pairs(dir: &Path, pairs: &[(Multigraph, Multigraph)]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (k, (a, b)) in pairs.iter().enumerate() {
        for (tag, g) in [("a", a), ("b", b)] {
            let path = dir.join(format!("pair_{k:04}_{tag}.graph"));
            fs::write(&path, g.to_file_string())?;
            written.push(path);
        }
    }
    Ok(written)
}
