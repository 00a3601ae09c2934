#![allow(dead_code)]

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tutte_theta::f2::{F2Matrix, F2Vec};
use tutte_theta::graphs::{canonical_form, Multigraph};

/// All multigraphs on exactly `v` vertices with at most `max_e` edges, one per
/// isomorphism class. Isolated vertices are allowed.
pub fn multigraphs(v: usize, max_e: usize, loops: bool) -> Vec<Multigraph> {
    let mut seen = HashSet::new();
    let start = Multigraph::empty(v);
    seen.insert(canonical_form(&start));
    let mut level = vec![start];
    let mut all = level.clone();
    for _ in 0..max_e {
        let mut next = Vec::new();
        for g in &level {
            for a in 0..v {
                for b in a..v {
                    if a == b && !loops {
                        continue;
                    }
                    let mut h = g.clone();
                    h.add_edge(a, b).unwrap();
                    if seen.insert(canonical_form(&h)) {
                        next.push(h);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

/// All connected multigraphs with loops and `1..=max_e` edges, one per
/// isomorphism class, grown by adding an edge inside the vertex set or a
/// pendant edge to a new vertex.
pub fn connected_multigraphs(max_e: usize) -> Vec<Multigraph> {
    let start = Multigraph::empty(1);
    let mut level = vec![start];
    let mut all = Vec::new();
    let mut seen = HashSet::new();
    for _ in 0..max_e {
        let mut next = Vec::new();
        for g in &level {
            let n = g.n_vertices();
            let mut kids = Vec::new();
            for a in 0..n {
                for b in a..n {
                    let mut h = g.clone();
                    h.add_edge(a, b).unwrap();
                    kids.push(h);
                }
                let mut h = g.clone();
                let w = h.add_vertex();
                h.add_edge(a, w).unwrap();
                kids.push(h);
            }
            for h in kids {
                if seen.insert(canonical_form(&h)) {
                    next.push(h);
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

pub fn random_graph(rng: &mut ChaCha8Rng, max_v: usize, max_e: usize, loops: bool) -> Multigraph {
    let v = rng.gen_range(1..=max_v);
    let e = rng.gen_range(0..=max_e);
    let mut g = Multigraph::empty(v);
    while g.n_edges() < e {
        let (a, b) = (rng.gen_range(0..v), rng.gen_range(0..v));
        if a != b || loops {
            g.add_edge(a, b).unwrap();
        }
    }
    g
}

pub fn random_matrix(rng: &mut ChaCha8Rng, max_rows: usize, max_cols: usize) -> F2Matrix {
    let rows = rng.gen_range(1..=max_rows);
    let cols = rng.gen_range(1..=max_cols);
    let data = (0..rows)
        .map(|_| {
            let bits: Vec<bool> = (0..cols).map(|_| rng.gen_bool(0.5)).collect();
            F2Vec::from_bits(&bits)
        })
        .collect();
    F2Matrix::new(cols, data).unwrap()
}
