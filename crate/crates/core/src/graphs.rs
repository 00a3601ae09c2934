//! Undirected multigraphs with loops, the constructions needed for the
//! T-equivalent families (path, join, subdivision) and brute-force
//! isomorphism testing for small graphs.

use std::fmt;

use crate::error::{Error, Result};

/// Default vertex cap for the brute-force isomorphism routines.
pub const DEFAULT_ISO_CAP: usize = 10;

/// Vertex count plus a multiset of unordered edges. Edges are stored as
/// `(u, v)` with `u <= v`; `u == v` is a loop. Edge order is preserved and
/// is the ground-set order of the graphic matroid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Multigraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Multigraph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Multigraph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Multigraph { n, edges }
    }

    /// Star with one centre and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Multigraph {
            n: leaves + 1,
            edges: (1..=leaves).map(|v| (0, v)).collect(),
        }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 1, "cycle needs a vertex");
        Multigraph {
            n,
            edges: (0..n).map(|v| norm(v, (v + 1) % n)).collect(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        self.edges.push(norm(u, v));
        Ok(())
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    /// Degree with a loop counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Vertices that carry no edge.
    pub fn isolated_vertices(&self) -> Vec<usize> {
        let d = self.degrees();
        (0..self.n).filter(|&v| d[v] == 0).collect()
    }

    /// Symmetric matrix of edge multiplicities; loops on the diagonal.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<u32>> {
        let mut a = vec![vec![0u32; self.n]; self.n];
        for &(u, v) in &self.edges {
            a[u][v] += 1;
            if u != v {
                a[v][u] += 1;
            }
        }
        a
    }

    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.n);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        uf.count()
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components() == 1
    }

    /// Connected, at least three vertices and no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        if self.n < 3 || !self.is_connected() {
            return false;
        }
        (0..self.n).all(|cut| {
            let mut uf = UnionFind::new(self.n);
            for &(u, v) in &self.edges {
                if u != cut && v != cut {
                    uf.union(u, v);
                }
            }
            uf.count() == 2
        })
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Multigraph {
        assert_eq!(perm.len(), self.n, "permutation has wrong length");
        Multigraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| norm(perm[u], perm[v]))
                .collect(),
        }
    }

    /// Edge multiset in sorted order, for multiset comparisons.
    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    pub fn disjoint_union(&self, other: &Multigraph) -> Multigraph {
        let off = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + off, v + off)));
        Multigraph {
            n: self.n + other.n,
            edges,
        }
    }

    /// Graph with one copy of edge `e` removed.
    pub fn delete_edge(&self, index: usize) -> Multigraph {
        let mut edges = self.edges.clone();
        edges.remove(index);
        Multigraph { n: self.n, edges }
    }

    /// Graph with edge `index` contracted; the higher endpoint is merged into
    /// the lower one and the vertex count drops by one (loops: deletion).
    pub fn contract_edge(&self, index: usize) -> Multigraph {
        let (keep, gone) = self.edges[index];
        if keep == gone {
            return self.delete_edge(index);
        }
        let shift = |w: usize| {
            let w = if w == gone { keep } else { w };
            if w > gone {
                w - 1
            } else {
                w
            }
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != index)
            .map(|(_, &(u, v))| norm(shift(u), shift(v)))
            .collect();
        Multigraph {
            n: self.n - 1,
            edges,
        }
    }

    pub fn to_file_string(&self) -> String {
        GraphFile {
            graph: self.clone(),
            marked: Vec::new(),
        }
        .to_string()
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V={} E=[", self.n)?;
        for (i, (u, v)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "]")
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            sets: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        self.sets -= 1;
        true
    }

    pub(crate) fn count(&self) -> usize {
        self.sets
    }
}

/// Path with `n` edges on `n + 1` vertices.
pub fn path_graph(n: usize) -> Multigraph {
    Multigraph {
        n: n + 1,
        edges: (0..n).map(|v| (v, v + 1)).collect(),
    }
}

/// Disjoint union of `g1` and `g2` plus one edge between every vertex of
/// `g1` and every vertex of `g2`. Vertices of `g2` are shifted by `|V(g1)|`.
pub fn join(g1: &Multigraph, g2: &Multigraph) -> Multigraph {
    let mut g = g1.disjoint_union(g2);
    for v in 0..g1.n {
        for w in 0..g2.n {
            g.edges.push((v, g1.n + w));
        }
    }
    g
}

/// Replaces one copy of edge `{u, v}` by a path through `times` fresh
/// vertices. The path takes the position of the original edge in the edge
/// list; fresh vertices are appended.
pub fn subdivide_edge(g: &Multigraph, edge: (usize, usize), times: usize) -> Result<Multigraph> {
    let target = norm(edge.0, edge.1);
    let idx = g
        .edges
        .iter()
        .position(|&e| e == target)
        .ok_or(Error::EdgeAbsent(target.0, target.1))?;
    if times == 0 {
        return Ok(g.clone());
    }
    let mut chain = Vec::with_capacity(times + 2);
    chain.push(target.0);
    chain.extend(g.n..g.n + times);
    chain.push(target.1);
    let path: Vec<_> = chain.windows(2).map(|w| norm(w[0], w[1])).collect();
    let mut edges = g.edges[..idx].to_vec();
    edges.extend(path);
    edges.extend_from_slice(&g.edges[idx + 1..]);
    Ok(Multigraph {
        n: g.n + times,
        edges,
    })
}

/// Stable vertex colouring by iterated neighbourhood refinement. Colours are
/// canonical: they depend only on the isomorphism type of each vertex's
/// refined neighbourhood, not on vertex numbering.
fn refined_colours(adj: &[Vec<u32>]) -> Vec<usize> {
    let n = adj.len();
    let initial: Vec<(u32, u32)> = (0..n)
        .map(|v| (adj[v].iter().sum::<u32>() + adj[v][v], adj[v][v]))
        .collect();
    let mut colours = rank_signatures(&initial);
    loop {
        let sigs: Vec<(usize, Vec<(usize, u32)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, u32)> = (0..n)
                    .filter(|&w| w != v && adj[v][w] > 0)
                    .map(|w| (colours[w], adj[v][w]))
                    .collect();
                nb.sort_unstable();
                (colours[v], nb)
            })
            .collect();
        let next = rank_signatures(&sigs);
        let classes = |c: &[usize]| c.iter().copied().max().map_or(0, |m| m + 1);
        if classes(&next) == classes(&colours) {
            return next;
        }
        colours = next;
    }
}

fn rank_signatures<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(s).expect("signature present"))
        .collect()
}

/// Joint colouring of two graphs so colour classes can be matched across them.
fn joint_colours(a: &[Vec<u32>], b: &[Vec<u32>]) -> (Vec<usize>, Vec<usize>) {
    let n = a.len();
    let mut adj = vec![vec![0u32; 2 * n]; 2 * n];
    for u in 0..n {
        for v in 0..n {
            adj[u][v] = a[u][v];
            adj[n + u][n + v] = b[u][v];
        }
    }
    let c = refined_colours(&adj);
    (c[..n].to_vec(), c[n..].to_vec())
}

struct IsoSearch<'a> {
    a: &'a [Vec<u32>],
    b: &'a [Vec<u32>],
    ca: Vec<usize>,
    cb: Vec<usize>,
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
    stop_at_first: bool,
    found: u64,
}

impl IsoSearch<'_> {
    fn run(&mut self, depth: usize) {
        if depth == self.order.len() {
            self.found += 1;
            return;
        }
        let v = self.order[depth];
        for w in 0..self.b.len() {
            if self.used[w] || self.ca[v] != self.cb[w] || self.a[v][v] != self.b[w][w] {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&u| self.a[v][u] == self.b[w][self.map[u]]);
            if !consistent {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            self.run(depth + 1);
            self.used[w] = false;
            if self.stop_at_first && self.found > 0 {
                return;
            }
        }
    }
}

/// Search order that keeps each vertex adjacent to earlier ones when possible.
fn search_order(a: &[Vec<u32>], colours: &[usize]) -> Vec<usize> {
    let n = a.len();
    let mut class_size = vec![0usize; n];
    for &c in colours {
        class_size[c] += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = order.iter().filter(|&&u| a[v][u] > 0).count();
                (links, std::cmp::Reverse(class_size[colours[v]]), std::cmp::Reverse(v))
            })
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
    }
    order
}

fn count_isomorphisms(g1: &Multigraph, g2: &Multigraph, stop_at_first: bool) -> u64 {
    if g1.n != g2.n || g1.edges.len() != g2.edges.len() {
        return 0;
    }
    let mut d1 = g1.degrees();
    let mut d2 = g2.degrees();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return 0;
    }
    let a = g1.multiplicity_matrix();
    let b = g2.multiplicity_matrix();
    let (ca, cb) = joint_colours(&a, &b);
    let mut ha = ca.clone();
    let mut hb = cb.clone();
    ha.sort_unstable();
    hb.sort_unstable();
    if ha != hb {
        return 0;
    }
    let order = search_order(&a, &ca);
    let mut search = IsoSearch {
        a: &a,
        b: &b,
        ca,
        cb,
        order,
        map: vec![usize::MAX; g1.n],
        used: vec![false; g1.n],
        stop_at_first,
        found: 0,
    };
    search.run(0);
    search.found
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::cap("brute-force isomorphism vertex count", n, cap));
    }
    Ok(())
}

/// True iff some vertex bijection maps the edge multiset of `g1` onto that of `g2`.
pub fn is_isomorphic(g1: &Multigraph, g2: &Multigraph) -> Result<bool> {
    is_isomorphic_capped(g1, g2, DEFAULT_ISO_CAP)
}

pub fn is_isomorphic_capped(g1: &Multigraph, g2: &Multigraph, cap: usize) -> Result<bool> {
    check_cap(g1.n.max(g2.n), cap)?;
    Ok(count_isomorphisms(g1, g2, true) > 0)
}

/// Number of vertex permutations preserving the edge multiset. Permutations
/// of parallel edges among themselves are not counted.
pub fn automorphism_count(g: &Multigraph) -> Result<u64> {
    automorphism_count_capped(g, DEFAULT_ISO_CAP)
}

pub fn automorphism_count_capped(g: &Multigraph, cap: usize) -> Result<u64> {
    check_cap(g.n, cap)?;
    Ok(count_isomorphisms(g, g, false))
}

/// Canonical form: the lexicographically least upper-triangular multiplicity
/// vector over all relabellings that order vertices by refined colour.
/// Two graphs are isomorphic iff their canonical forms are equal.
pub fn canonical_form(g: &Multigraph) -> Vec<u32> {
    let a = g.multiplicity_matrix();
    let colours = refined_colours(&a);
    let n = g.n;
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let classes = colours.iter().copied().max().map_or(0, |m| m + 1);
    for c in 0..classes {
        cells.push((0..n).filter(|&v| colours[v] == c).collect());
    }
    let mut best: Option<Vec<u32>> = None;
    let mut current: Vec<usize> = Vec::with_capacity(n);
    fn rec(
        a: &[Vec<u32>],
        cells: &mut [Vec<usize>],
        cell: usize,
        current: &mut Vec<usize>,
        best: &mut Option<Vec<u32>>,
    ) {
        if cell == cells.len() {
            let n = current.len();
            let mut key = Vec::with_capacity(n * (n + 1) / 2);
            for i in 0..n {
                for j in i..n {
                    key.push(a[current[i]][current[j]]);
                }
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                *best = Some(key);
            }
            return;
        }
        let members = cells[cell].clone();
        let k = members.len();
        permute(&members, k, &mut |perm| {
            let before = current.len();
            current.extend_from_slice(perm);
            rec(a, cells, cell + 1, current, best);
            current.truncate(before);
        });
    }
    rec(&a, &mut cells, 0, &mut current, &mut best);
    let mut key = best.unwrap_or_default();
    key.insert(0, n as u32);
    key
}

/// Calls `f` with every permutation of `items` (Heap's algorithm).
fn permute(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    let mut v = items.to_vec();
    let mut c = vec![0usize; k];
    f(&v);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                v.swap(0, i);
            } else {
                v.swap(c[i], i);
            }
            f(&v);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Graph file contents: the graph plus optional marked edges (`M u v` lines).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Multigraph,
    pub marked: Vec<(usize, usize)>,
}

impl GraphFile {
    /// Parses the text format: `V <n>` first, then `E <u> <v>` per edge and
    /// `M <u> <v>` per marked edge. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<GraphFile> {
        let mut graph: Option<Multigraph> = None;
        let mut marked = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<(usize, &str)> = tokenize(content);
            let Some(&(col, tag)) = tokens.first() else {
                continue;
            };
            let number = |idx: usize| -> Result<usize> {
                let (c, t) = tokens
                    .get(idx)
                    .copied()
                    .ok_or_else(|| Error::parse(line, content.len() + 1, "missing number"))?;
                t.parse()
                    .map_err(|_| Error::parse(line, c, format!("expected a nonnegative integer, found {t:?}")))
            };
            let arity = |want: usize| -> Result<()> {
                if tokens.len() != want {
                    let c = tokens.get(want).map_or(content.len() + 1, |t| t.0);
                    return Err(Error::parse(line, c, format!("{tag} expects {} field(s)", want - 1)));
                }
                Ok(())
            };
            match tag {
                "V" => {
                    if graph.is_some() {
                        return Err(Error::parse(line, col, "duplicate V line"));
                    }
                    arity(2)?;
                    graph = Some(Multigraph::empty(number(1)?));
                }
                "E" | "M" => {
                    let g = graph
                        .as_mut()
                        .ok_or_else(|| Error::parse(line, col, "edge before V line"))?;
                    arity(3)?;
                    let (u, v) = (number(1)?, number(2)?);
                    for (k, w) in [(1, u), (2, v)] {
                        if w >= g.n {
                            return Err(Error::parse(
                                line,
                                tokens[k].0,
                                format!("vertex {w} out of range for {} vertices", g.n),
                            ));
                        }
                    }
                    if tag == "E" {
                        g.edges.push(norm(u, v));
                    } else {
                        marked.push(norm(u, v));
                    }
                }
                other => {
                    return Err(Error::parse(line, col, format!("unknown record {other:?}")));
                }
            }
        }
        let graph = graph.ok_or_else(|| Error::parse(1, 1, "missing V line"))?;
        for &(u, v) in &marked {
            if !graph.edges.contains(&(u, v)) {
                return Err(Error::EdgeAbsent(u, v));
            }
        }
        Ok(GraphFile { graph, marked })
    }
}

fn tokenize(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(st) = start.take() {
                out.push((st + 1, &s[st..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((st + 1, &s[st..]));
    }
    out
}

impl fmt::Display for GraphFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "V {}", self.graph.n)?;
        for (u, v) in &self.graph.edges {
            writeln!(f, "E {u} {v}")?;
        }
        for (u, v) in &self.marked {
            writeln!(f, "M {u} {v}")?;
        }
        Ok(())
    }
}
