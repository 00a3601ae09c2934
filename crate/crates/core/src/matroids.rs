//! Matroids as rank oracles over graphic and binary-vector backings, and the
//! Tutte polynomial by subset expansion and by deletion-contraction.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::f2::{F2Matrix, F2Vec};
use crate::graphs::{Multigraph, UnionFind};
use crate::poly::{Poly, Vars};

/// Default largest ground set for the `2^|E|` subset expansion.
pub const DEFAULT_SUBSET_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backing {
    /// Ground set = edge list of the graph.
    Graphic(Multigraph),
    /// Ground set = columns of the matrix.
    Binary(F2Matrix),
}

/// Matroid on ground set `{0, ..., n-1}` given by its rank function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    backing: Backing,
}

impl Matroid {
    /// Cycle matroid `M(G)`: independent sets are the forests.
    pub fn graphic(g: Multigraph) -> Self {
        Matroid {
            backing: Backing::Graphic(g),
        }
    }

    /// Column matroid of a binary matrix.
    pub fn vector_f2(a: F2Matrix) -> Self {
        Matroid {
            backing: Backing::Binary(a),
        }
    }

    /// Column matroid of the vertex-edge incidence matrix of `g`. A loop gives
    /// a zero column.
    pub fn incidence(g: &Multigraph) -> Self {
        Matroid::vector_f2(incidence_matrix(g))
    }

    pub fn backing(&self) -> &Backing {
        &self.backing
    }

    pub fn size(&self) -> usize {
        match &self.backing {
            Backing::Graphic(g) => g.n_edges(),
            Backing::Binary(a) => a.n_cols(),
        }
    }

    /// Rank of the subset given as a bitmask (ground sets of at most 64).
    pub fn rank_mask(&self, mask: u64) -> usize {
        match &self.backing {
            Backing::Graphic(g) => {
                let mut uf = UnionFind::new(g.n_vertices());
                let mut r = 0;
                let mut m = mask;
                while m != 0 {
                    let e = m.trailing_zeros() as usize;
                    m &= m - 1;
                    let (u, v) = g.edges()[e];
                    if uf.union(u, v) {
                        r += 1;
                    }
                }
                r
            }
            Backing::Binary(a) => a.column_rank_mask(mask),
        }
    }

    /// Rank of an arbitrary subset of ground-set elements.
    pub fn rank_of(&self, subset: &[usize]) -> usize {
        match &self.backing {
            Backing::Graphic(g) => {
                let mut uf = UnionFind::new(g.n_vertices());
                subset
                    .iter()
                    .filter(|&&e| {
                        let (u, v) = g.edges()[e];
                        uf.union(u, v)
                    })
                    .count()
            }
            Backing::Binary(a) => a.column_rank(subset),
        }
    }

    pub fn full_rank(&self) -> usize {
        let all: Vec<usize> = (0..self.size()).collect();
        self.rank_of(&all)
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.rank_of(&[e]) == 0
    }

    pub fn is_coloop(&self, e: usize) -> bool {
        let rest: Vec<usize> = (0..self.size()).filter(|&k| k != e).collect();
        self.rank_of(&rest) < self.full_rank()
    }

    pub fn delete(&self, e: usize) -> Matroid {
        let backing = match &self.backing {
            Backing::Graphic(g) => Backing::Graphic(g.delete_edge(e)),
            Backing::Binary(a) => Backing::Binary(a.delete_column(e)),
        };
        Matroid { backing }
    }

    pub fn contract(&self, e: usize) -> Matroid {
        let backing = match &self.backing {
            Backing::Graphic(g) => Backing::Graphic(g.contract_edge(e)),
            Backing::Binary(a) => Backing::Binary(a.contract_column(e)),
        };
        Matroid { backing }
    }

    /// Number of bases, counted directly.
    pub fn count_bases(&self) -> Result<u64> {
        let n = self.size();
        check_subset_cap(n, DEFAULT_SUBSET_CAP)?;
        let r = self.full_rank();
        Ok((0..1u64 << n)
            .into_par_iter()
            .filter(|&m| m.count_ones() as usize == r && self.rank_mask(m) == r)
            .count() as u64)
    }
}

/// Vertex-edge incidence matrix over the two-element field.
pub fn incidence_matrix(g: &Multigraph) -> F2Matrix {
    let mut rows = vec![F2Vec::zeros(g.n_edges()); g.n_vertices()];
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        if u != v {
            rows[u].set(k, true);
            rows[v].set(k, true);
        }
    }
    F2Matrix::new(g.n_edges(), rows).expect("rows have edge-count length")
}

fn check_subset_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap.min(63) {
        return Err(Error::cap("subset expansion ground set size", n, cap.min(63)));
    }
    Ok(())
}

/// Dense table of counts indexed by `(a, b)`.
type Table = Vec<Vec<u64>>;

fn table_add(acc: &mut Table, other: &Table) {
    if acc.len() < other.len() {
        acc.resize(other.len(), Vec::new());
    }
    for (row, orow) in acc.iter_mut().zip(other) {
        if row.len() < orow.len() {
            row.resize(orow.len(), 0);
        }
        for (a, b) in row.iter_mut().zip(orow) {
            *a += b;
        }
    }
}

fn table_to_poly(t: &Table) -> Poly {
    let mut p = Poly::zero(Vars::bivariate());
    for (i, row) in t.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c != 0 {
                p.add_term(
                    vec![BigUint::from(i), BigUint::from(j)],
                    BigInt::from(c),
                );
            }
        }
    }
    p
}

fn binomial_row(a: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for k in 1..=a {
        let next = &row[k - 1] * BigInt::from(a - k + 1) / BigInt::from(k);
        row.push(next);
    }
    row
}

/// Counts of subsets `A` by `(rank(E) - rank(A), |A| - rank(A))`.
pub fn corank_nullity_counts(m: &Matroid) -> Result<Table> {
    corank_nullity_counts_capped(m, DEFAULT_SUBSET_CAP)
}

fn corank_nullity_counts_capped(m: &Matroid, cap: usize) -> Result<Table> {
    let n = m.size();
    check_subset_cap(n, cap)?;
    let full = m.full_rank();
    let total = 1u64 << n;
    let chunk = (total / 64).max(1 << 10);
    let chunks: Vec<u64> = (0..total.div_ceil(chunk)).collect();
    let table = chunks
        .into_par_iter()
        .map(|c| {
            let mut t: Table = vec![vec![0u64; n + 1]; full + 1];
            for mask in c * chunk..((c + 1) * chunk).min(total) {
                let r = m.rank_mask(mask);
                t[full - r][mask.count_ones() as usize - r] += 1;
            }
            t
        })
        .reduce(
            || vec![vec![0u64; n + 1]; full + 1],
            |mut a, b| {
                table_add(&mut a, &b);
                a
            },
        );
    Ok(table)
}

/// `T(M; x, y) = sum_A (x-1)^(r(E)-r(A)) (y-1)^(|A|-r(A))`, expanded exactly.
pub fn tutte_subset_expansion(m: &Matroid) -> Result<Poly> {
    tutte_subset_expansion_capped(m, DEFAULT_SUBSET_CAP)
}

pub fn tutte_subset_expansion_capped(m: &Matroid, cap: usize) -> Result<Poly> {
    let counts = corank_nullity_counts_capped(m, cap)?;
    let mut p = Poly::zero(Vars::bivariate());
    for (a, row) in counts.iter().enumerate() {
        let ba = binomial_row(a);
        for (b, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let bb = binomial_row(b);
            let c = BigInt::from(c);
            for i in 0..=a {
                for j in 0..=b {
                    let sign = if (a - i + b - j) % 2 == 0 { 1 } else { -1 };
                    let coeff: BigInt = &c * &ba[i] * &bb[j] * sign;
                    if !coeff.is_zero() {
                        p.add_term(vec![BigUint::from(i), BigUint::from(j)], coeff);
                    }
                }
            }
        }
    }
    Ok(p)
}

/// Tutte polynomial by deletion-contraction: loops and coloops are peeled
/// first, then the lowest remaining element is deleted and contracted.
pub fn tutte_deletion_contraction(m: &Matroid) -> Poly {
    table_to_poly(&dc(m))
}

fn dc(m: &Matroid) -> Table {
    let n = m.size();
    let mut loops = 0;
    let mut coloops = 0;
    let mut cur = m.clone();
    let mut e = 0;
    while e < cur.size() {
        if cur.is_loop(e) {
            loops += 1;
            cur = cur.delete(e);
        } else if cur.is_coloop(e) {
            coloops += 1;
            cur = cur.contract(e);
        } else {
            e += 1;
        }
    }
    debug_assert!(cur.size() + loops + coloops == n);
    let rest = if cur.size() == 0 {
        vec![vec![1u64]]
    } else {
        let (mut d, c) = rayon::join(|| dc(&cur.delete(0)), || dc(&cur.contract(0)));
        table_add(&mut d, &c);
        d
    };
    let mut out: Table = vec![Vec::new(); rest.len() + coloops];
    for (i, row) in rest.into_iter().enumerate() {
        let mut shifted = vec![0u64; loops];
        shifted.extend(row);
        out[i + coloops] = shifted;
    }
    out
}

/// Subset expansion when the ground set is within the cap, otherwise
/// deletion-contraction.
pub fn tutte(m: &Matroid) -> Poly {
    if m.size() <= DEFAULT_SUBSET_CAP {
        tutte_subset_expansion(m).expect("within cap")
    } else {
        tutte_deletion_contraction(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::path_graph;

    fn t(s: &str) -> String {
        s.to_string()
    }

    #[test]
    fn graphic_k3() {
        let m = Matroid::graphic(Multigraph::complete(3));
        assert_eq!(m.full_rank(), 2);
        for mask in [0b011u64, 0b101, 0b110] {
            assert_eq!(m.rank_mask(mask), 2);
        }
        assert_eq!(m.rank_mask(0b111), 2);
        assert_eq!(tutte_subset_expansion(&m).unwrap().to_string(), t("x^2 + x + y"));
        assert_eq!(tutte_deletion_contraction(&m).to_string(), t("x^2 + x + y"));
    }

    #[test]
    fn trees_loops_coloops() {
        let tree = Matroid::graphic(path_graph(4));
        assert_eq!(tree.full_rank(), 4);
        assert_eq!(tutte_deletion_contraction(&tree).to_string(), "x^4");
        let lp = Matroid::graphic(Multigraph::new(1, [(0, 0)]).unwrap());
        assert!(lp.is_loop(0));
        assert_eq!(tutte_subset_expansion(&lp).unwrap().to_string(), "y");
        let cl = Matroid::graphic(Multigraph::complete(2));
        assert!(cl.is_coloop(0));
        assert_eq!(tutte_subset_expansion(&cl).unwrap().to_string(), "x");
    }

    #[test]
    fn digon_is_u12() {
        let g = Multigraph::new(2, [(0, 1), (0, 1)]).unwrap();
        assert_eq!(tutte_deletion_contraction(&Matroid::graphic(g.clone())).to_string(), "x + y");
        let inc = Matroid::incidence(&g);
        assert_eq!(inc.rank_mask(0b11), 1);
        let u12 = Matroid::vector_f2(F2Matrix::parse("11").unwrap());
        assert_eq!(tutte_deletion_contraction(&u12).to_string(), "x + y");
    }

    #[test]
    fn vector_matroids() {
        let free = Matroid::vector_f2(F2Matrix::identity(3));
        assert_eq!(free.full_rank(), 3);
        assert_eq!(tutte_subset_expansion(&free).unwrap().to_string(), "x^3");
        let z = Matroid::vector_f2(F2Matrix::parse("10\n10").unwrap());
        assert!(z.is_loop(1));
    }

    #[test]
    fn incidence_agrees_with_graphic_on_k3() {
        let g = Multigraph::complete(3);
        let a = Matroid::graphic(g.clone());
        let b = Matroid::incidence(&g);
        for mask in 0..8 {
            assert_eq!(a.rank_mask(mask), b.rank_mask(mask));
        }
        let p2 = Matroid::incidence(&path_graph(2));
        assert_eq!(p2.full_rank(), 2);
    }

    #[test]
    fn specializations_on_k4() {
        let m = Matroid::graphic(Multigraph::complete(4));
        let tp = tutte_subset_expansion(&m).unwrap();
        let one = BigInt::from(1);
        let two = BigInt::from(2);
        assert_eq!(tp.eval(&[one.clone(), one]).unwrap(), BigInt::from(16));
        assert_eq!(m.count_bases().unwrap(), 16);
        assert_eq!(tp.eval(&[two.clone(), two]).unwrap(), BigInt::from(64));
        assert_eq!(tp, tutte_deletion_contraction(&m));
    }

    #[test]
    fn subset_cap() {
        let m = Matroid::graphic(Multigraph::complete(8));
        assert!(tutte_subset_expansion(&m).unwrap_err().is_cap_exceeded());
    }
}
