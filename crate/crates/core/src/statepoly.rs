//! n-state polynomials: the symbolic sum over state assignments, its
//! prime-weighted single-variable form, and recovery of the graph from either.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphs::{automorphism_count, Multigraph};
use crate::poly::{Poly, Vars};
use crate::primes::{a_index, WeightMatrix};

/// Default cap on `n^|V|`, the number of state assignments enumerated.
pub const DEFAULT_STATE_CAP: u64 = 100_000_000;

/// Position of the variable `x_{ij}` (1-based states, either order).
pub fn pair_var_index(i: usize, j: usize) -> usize {
    let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
    a_index(hi as u64, lo as u64) as usize - 1
}

/// The unordered state pair `(i, j)`, `i <= j`, of a variable position.
pub fn var_pair(index: usize) -> (usize, usize) {
    let mut hi = 1;
    while hi * (hi + 1) / 2 <= index {
        hi += 1;
    }
    let lo = index + 1 + hi - hi * (hi + 1) / 2;
    (lo, hi)
}

/// Variables `x_{ij}`, `1 <= i <= j <= n`, in `a(j, i)` order. Indices are
/// separated by an underscore once they can have two digits.
pub fn state_vars(n: usize) -> Vars {
    Vars::new((0..n * (n + 1) / 2).map(|k| {
        let (i, j) = var_pair(k);
        if n < 10 {
            format!("x{i}{j}")
        } else {
            format!("x{i}_{j}")
        }
    }))
}

fn check_cap(g: &Multigraph, n: usize, cap: u64) -> Result<()> {
    let states = num_traits::pow(BigUint::from(n), g.n_vertices());
    if states > BigUint::from(cap) {
        return Err(Error::cap("state assignments", states, cap));
    }
    Ok(())
}

/// Number of states realising each edge-label multiset, keyed by the count
/// of edges per variable position. Isolated vertices are not enumerated;
/// they multiply every count by `n`.
fn label_counts(g: &Multigraph, n: usize) -> HashMap<Vec<u16>, u64> {
    let nvars = n * (n + 1) / 2;
    let isolated: BTreeSet<usize> = g.isolated_vertices().into_iter().collect();
    let active: Vec<usize> = (0..g.n_vertices()).filter(|v| !isolated.contains(v)).collect();
    let mut position = vec![usize::MAX; g.n_vertices()];
    for (k, &v) in active.iter().enumerate() {
        position[v] = k;
    }
    // Edges whose later endpoint (in enumeration order) is vertex k.
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); active.len()];
    for &(u, v) in g.edges() {
        let (a, b) = (position[u], position[v]);
        closing[a.max(b)].push(a.min(b));
    }
    let scale = (n as u64).pow(isolated.len() as u32);

    struct Walk<'a> {
        n: usize,
        closing: &'a [Vec<usize>],
        states: Vec<usize>,
        exps: Vec<u16>,
        counts: HashMap<Vec<u16>, u64>,
    }
    impl Walk<'_> {
        fn go(&mut self, k: usize) {
            if k == self.closing.len() {
                if let Some(c) = self.counts.get_mut(&self.exps[..]) {
                    *c += 1;
                } else {
                    self.counts.insert(self.exps.clone(), 1);
                }
                return;
            }
            for s in 1..=self.n {
                self.states[k] = s;
                for &a in &self.closing[k] {
                    self.exps[pair_var_index(self.states[a], s)] += 1;
                }
                self.go(k + 1);
                for &a in &self.closing[k] {
                    self.exps[pair_var_index(self.states[a], s)] -= 1;
                }
            }
        }
    }

    let run = |first: Option<usize>| {
        let mut w = Walk {
            n,
            closing: &closing,
            states: vec![0; active.len()],
            exps: vec![0; nvars],
            counts: HashMap::new(),
        };
        match first {
            None => w.go(0),
            Some(s) => {
                // Vertex 0 closes no edge except its own loops.
                w.states[0] = s;
                for _ in &closing[0] {
                    w.exps[pair_var_index(s, s)] += 1;
                }
                w.go(1);
            }
        }
        w.counts
    };

    let mut counts = if active.is_empty() {
        run(None)
    } else {
        (1..=n)
            .into_par_iter()
            .map(|s| run(Some(s)))
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                a
            })
    };
    for c in counts.values_mut() {
        *c *= scale;
    }
    counts
}

/// `Z(G)` over the symbolic matrix `(x_{ij})` with `n` states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicStatePoly {
    n: usize,
    poly: Poly,
}

impl SymbolicStatePoly {
    /// Wraps a polynomial, checking it is over the variables of [`state_vars`].
    pub fn new(n: usize, poly: Poly) -> Result<Self> {
        if n == 0 || poly.vars() != &state_vars(n) {
            return Err(Error::Invalid(format!(
                "polynomial is not over the {n}-state variables"
            )));
        }
        Ok(SymbolicStatePoly { n, poly })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Substitutes `x + y` on the diagonal and `y` off it.
    pub fn negami(&self) -> Poly {
        let v = Vars::bivariate();
        let x = Poly::var(v.clone(), 0);
        let y = Poly::var(v, 1);
        let images: Vec<Poly> = (0..self.poly.vars().len())
            .map(|k| match var_pair(k) {
                (i, j) if i == j => &x + &y,
                _ => y.clone(),
            })
            .collect();
        self.poly.substitute(&images).expect("arity matches")
    }

    /// Substitutes `x_i + y` at `(i, i)` and `y` off the diagonal, over the
    /// variables `x1, ..., xn, y`.
    pub fn extended_negami(&self) -> Poly {
        let names = (1..=self.n).map(|i| format!("x{i}")).chain(["y".to_string()]);
        let v = Vars::new(names);
        let y = Poly::var(v.clone(), self.n);
        let images: Vec<Poly> = (0..self.poly.vars().len())
            .map(|k| match var_pair(k) {
                (i, j) if i == j => &Poly::var(v.clone(), i - 1) + &y,
                _ => y.clone(),
            })
            .collect();
        self.poly.substitute(&images).expect("arity matches")
    }
}

/// `Z(G)` over a prime weight matrix: a univariate polynomial in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoStatePoly {
    matrix: WeightMatrix,
    poly: Poly,
}

impl PseudoStatePoly {
    pub fn new(matrix: WeightMatrix, poly: Poly) -> Result<Self> {
        if poly.vars().len() != 1 {
            return Err(Error::Invalid("pseudo state polynomial must be univariate".into()));
        }
        Ok(PseudoStatePoly { matrix, poly })
    }

    pub fn matrix(&self) -> &WeightMatrix {
        &self.matrix
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Number of terms.
    pub fn term_count(&self) -> usize {
        self.poly.num_terms()
    }
}

pub fn z_state_symbolic(g: &Multigraph, n: usize) -> Result<SymbolicStatePoly> {
    z_state_symbolic_capped(g, n, DEFAULT_STATE_CAP)
}

pub fn z_state_symbolic_capped(g: &Multigraph, n: usize, cap: u64) -> Result<SymbolicStatePoly> {
    if n == 0 {
        return Err(Error::Invalid("state count must be positive".into()));
    }
    check_cap(g, n, cap)?;
    let vars = state_vars(n);
    let terms = label_counts(g, n)
        .into_iter()
        .map(|(e, c)| (e.into_iter().map(BigUint::from).collect(), BigInt::from(c)));
    let poly = Poly::from_terms(vars, terms)?;
    Ok(SymbolicStatePoly { n, poly })
}

pub fn z_state_weighted(g: &Multigraph, w: &WeightMatrix) -> Result<PseudoStatePoly> {
    z_state_weighted_capped(g, w, DEFAULT_STATE_CAP)
}

/// Each state contributes `prod p` to the coefficient and `sum p` to the
/// exponent, over the edge primes `p = p(sigma u, sigma v)`.
pub fn z_state_weighted_capped(g: &Multigraph, w: &WeightMatrix, cap: u64) -> Result<PseudoStatePoly> {
    let n = w.n();
    check_cap(g, n, cap)?;
    let primes = w.chain();
    let mut poly = Poly::zero(Vars::univariate());
    let mut counts: Vec<_> = label_counts(g, n).into_iter().collect();
    counts.sort();
    for (exps, count) in counts {
        let mut coeff = BigUint::from(count);
        let mut sum = BigUint::zero();
        for (p, &e) in primes.iter().zip(&exps) {
            if e > 0 {
                coeff *= num_traits::pow(p.clone(), e as usize);
                sum += p * BigUint::from(e);
            }
        }
        poly.add_term(vec![sum], BigInt::from(coeff));
    }
    Ok(PseudoStatePoly {
        matrix: w.clone(),
        poly,
    })
}

/// `|E|` from `Z` over the one-state matrix `[2 x^2]`: `log_2 Z(1)`.
pub fn edge_count(z: &PseudoStatePoly) -> Result<u64> {
    if z.matrix.n() != 1 || z.matrix.entry(1, 1) != &BigUint::from(2u32) {
        return Err(Error::Invalid("edge count needs the one-state matrix [2x^2]".into()));
    }
    let total = z.poly.eval_ones();
    exact_log(&total, &BigInt::from(2))
        .ok_or_else(|| Error::Decode(format!("coefficient sum {total} is not a power of two")))
}

fn exact_log(value: &BigInt, base: &BigInt) -> Option<u64> {
    if value <= &BigInt::zero() {
        return None;
    }
    let mut v = value.clone();
    let mut k = 0;
    while !v.is_one() {
        let (q, r) = v.div_rem(base);
        if !r.is_zero() || base.is_one() {
            return None;
        }
        v = q;
        k += 1;
    }
    Some(k)
}

/// One term `c x^s` of a pseudo polynomial, split into the edge-label
/// multiset it encodes and the leftover state count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedTerm {
    pub coefficient: BigUint,
    pub exponent: BigUint,
    /// Unordered state pairs `(i, j)`, `i >= j`, with multiplicities.
    pub pairs: BTreeMap<(usize, usize), u64>,
    /// States occurring in off-diagonal pairs.
    pub support: BTreeSet<usize>,
    pub cofactor: BigUint,
}

impl DecodedTerm {
    fn build(c: &BigUint, s: &BigUint, pairs: BTreeMap<(usize, usize), u64>, cofactor: BigUint) -> Self {
        let support = pairs
            .keys()
            .filter(|(i, j)| i != j)
            .flat_map(|&(i, j)| [i, j])
            .collect();
        DecodedTerm {
            coefficient: c.clone(),
            exponent: s.clone(),
            pairs,
            support,
            cofactor,
        }
    }

    pub fn has_diagonal(&self) -> bool {
        self.pairs.keys().any(|(i, j)| i == j)
    }
}

/// Decodes `c x^s`. Table primes are divided out of `c` and the exponent is
/// checked against `sum p * mult`. A state count that itself contains a table
/// prime breaks this, so on a mismatch the multiset is read off `s` instead
/// (largest prime first, which is unique under the gap conditions) and the
/// coefficient is checked for divisibility.
pub fn decode_term(c: &BigUint, s: &BigUint, w: &WeightMatrix) -> Result<DecodedTerm> {
    if c.is_zero() {
        return Err(Error::Decode("zero coefficient".into()));
    }
    let mut rest = c.clone();
    let mut pairs = BTreeMap::new();
    let mut sum = BigUint::zero();
    for ((i, j), p) in w.entries() {
        loop {
            let (q, r) = rest.div_rem(p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            sum += p;
            *pairs.entry((i, j)).or_insert(0) += 1;
        }
    }
    if &sum == s {
        return Ok(DecodedTerm::build(c, s, pairs, rest));
    }

    let mut order: Vec<_> = w.entries().collect();
    order.sort_by(|a, b| b.1.cmp(a.1));
    let mut left = s.clone();
    let mut pairs = BTreeMap::new();
    let mut rest = c.clone();
    for ((i, j), p) in order {
        let (mult, r) = left.div_rem(p);
        if mult.is_zero() {
            continue;
        }
        left = r;
        let mult = mult
            .to_u64()
            .ok_or_else(|| Error::Decode(format!("multiplicity overflow decoding x^{s}")))?;
        let (q, r) = rest.div_rem(&num_traits::pow(p.clone(), mult as usize));
        if !r.is_zero() {
            return Err(Error::Decode(format!(
                "coefficient {c} does not match exponent {s} under this matrix"
            )));
        }
        rest = q;
        pairs.insert((i, j), mult);
    }
    if !left.is_zero() {
        return Err(Error::Decode(format!("exponent {s} is not a sum of table primes")));
    }
    Ok(DecodedTerm::build(c, s, pairs, rest))
}

fn term_parts(exps: &[BigUint], c: &BigInt) -> Result<(BigUint, BigUint)> {
    let c = c
        .to_biguint()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::Decode(format!("non-positive coefficient {c}")))?;
    Ok((c, exps[0].clone()))
}

/// Rebuilds the graph from its pseudo polynomial. The term with the most
/// states in its off-diagonal support comes from a state injective on the
/// non-isolated vertices; its pairs are the edges of that part `G'`, and its
/// cofactor is `n^iso * |Aut(G')|`.
pub fn reconstruct_pseudo(z: &PseudoStatePoly, w: &WeightMatrix) -> Result<Multigraph> {
    let mut best: Option<DecodedTerm> = None;
    for (exps, c) in z.poly.terms() {
        let (c, s) = term_parts(exps, c)?;
        let d = decode_term(&c, &s, w)?;
        let better = match &best {
            None => true,
            Some(b) => {
                d.support.len() > b.support.len()
                    || (d.support.len() == b.support.len() && d.exponent < b.exponent)
            }
        };
        if better {
            best = Some(d);
        }
    }
    let best = best.ok_or_else(|| Error::Reconstruct("zero polynomial".into()))?;
    if best.has_diagonal() {
        return Err(Error::Reconstruct(
            "graph has loops; loop reconstruction is not supported".into(),
        ));
    }
    let labels: Vec<usize> = best.support.iter().copied().collect();
    let pos = |s: usize| labels.binary_search(&s).expect("support label");
    let mut core = Multigraph::empty(labels.len());
    for (&(i, j), &mult) in &best.pairs {
        for _ in 0..mult {
            core.add_edge(pos(i), pos(j))?;
        }
    }
    let aut = BigUint::from(automorphism_count(&core)?);
    let (q, r) = best.cofactor.div_rem(&aut);
    if !r.is_zero() {
        return Err(Error::Reconstruct(format!(
            "cofactor {} is not a multiple of |Aut| = {aut}",
            best.cofactor
        )));
    }
    let iso = exact_log(&BigInt::from(q.clone()), &BigInt::from(w.n())).ok_or_else(|| {
        Error::Reconstruct(format!("cofactor quotient {q} is not a power of {}", w.n()))
    })?;
    let mut g = core;
    for _ in 0..iso {
        g.add_vertex();
    }
    Ok(g)
}

/// Rebuilds the graph from its symbolic polynomial. `|V|` is `log_n Z(1)`;
/// a term using the most distinct states labels every non-isolated vertex
/// differently, and its exponents are the edge multiplicities.
pub fn reconstruct_symbolic(z: &SymbolicStatePoly) -> Result<Multigraph> {
    let n = z.n;
    let total = z.poly.eval_ones();
    let nv = if n == 1 {
        None
    } else {
        exact_log(&total, &BigInt::from(n))
    }
    .ok_or_else(|| Error::Reconstruct(format!("Z(1) = {total} is not a power of n = {n}")))?;

    let mut best: Option<(BTreeSet<usize>, &Vec<BigUint>)> = None;
    for (exps, _) in z.poly.terms().rev() {
        let support: BTreeSet<usize> = exps
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .flat_map(|(k, _)| {
                let (i, j) = var_pair(k);
                [i, j]
            })
            .collect();
        if best.as_ref().is_none_or(|(b, _)| support.len() > b.len()) {
            best = Some((support, exps));
        }
    }
    let (support, exps) = best.ok_or_else(|| Error::Reconstruct("zero polynomial".into()))?;
    if support.len() as u64 > nv {
        return Err(Error::Reconstruct("support exceeds vertex count".into()));
    }
    let labels: Vec<usize> = support.into_iter().collect();
    let pos = |s: usize| labels.binary_search(&s).expect("support label");
    let mut g = Multigraph::empty(nv as usize);
    for (k, e) in exps.iter().enumerate() {
        let (i, j) = var_pair(k);
        let e = e
            .to_u64()
            .ok_or_else(|| Error::Reconstruct("exponent overflow".into()))?;
        for _ in 0..e {
            g.add_edge(pos(i), pos(j))?;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::is_isomorphic;
    use crate::matroids::{tutte, Matroid};
    use crate::primes::{admissible_matrix, paper_weight_matrix, PrimeOracle};

    fn w(n: usize) -> WeightMatrix {
        paper_weight_matrix(n, &PrimeOracle::default()).unwrap()
    }

    fn big(s: &str) -> BigUint {
        s.parse().unwrap()
    }

    /// Direct per-state product, as an oracle.
    fn naive_weighted(g: &Multigraph, w: &WeightMatrix) -> Poly {
        let n = w.n();
        let nv = g.n_vertices();
        let mut total = Poly::zero(Vars::univariate());
        for code in 0..n.pow(nv as u32) {
            let states: Vec<usize> = (0..nv).map(|v| code / n.pow(v as u32) % n + 1).collect();
            let mut term = Poly::one(Vars::univariate());
            for &(u, v) in g.edges() {
                let p = w.entry(states[u], states[v]).clone();
                term = &term * &Poly::univariate([(p.clone(), BigInt::from(p))]);
            }
            total = &total + &term;
        }
        total
    }

    #[test]
    fn var_positions() {
        for k in 0..20 {
            let (i, j) = var_pair(k);
            assert!(i <= j);
            assert_eq!(pair_var_index(i, j), k);
        }
        assert_eq!(state_vars(2).names(), ["x11", "x12", "x22"]);
    }

    #[test]
    fn symbolic_k2() {
        let z = z_state_symbolic(&Multigraph::complete(2), 2).unwrap();
        assert_eq!(z.poly().to_string(), "x11 + 2*x12 + x22");
    }

    #[test]
    fn symbolic_edgeless_and_ones() {
        let z = z_state_symbolic(&Multigraph::empty(3), 4).unwrap();
        assert_eq!(z.poly(), &Poly::constant(state_vars(4), 64));
        let g = Multigraph::new(4, [(0, 1), (1, 2), (1, 2), (3, 3)]).unwrap();
        let z = z_state_symbolic(&g, 3).unwrap();
        assert_eq!(z.poly().eval_ones(), BigInt::from(81));
    }

    #[test]
    fn pseudo_k2_k3_values() {
        let z = z_state_weighted(&Multigraph::complete(2), &w(2)).unwrap();
        assert_eq!(z.poly().to_string(), "311x^311 + 106x^53 + 7x^7");
        let z3 = z_state_weighted(&Multigraph::complete(2), &w(3)).unwrap();
        assert_eq!(z3.term_count(), 6);
        let k3 = z_state_weighted(&Multigraph::complete(3), &w(3)).unwrap();
        assert_eq!(k3.term_count(), 10);
        let (e, c) = k3.poly().terms().next().unwrap();
        assert_eq!(e[0], big("25344851271"));
        assert_eq!(c, &"602983567540694711837927399093".parse::<BigInt>().unwrap());
    }

    #[test]
    fn weighted_matches_naive() {
        let graphs = [
            Multigraph::complete(3),
            Multigraph::new(3, [(0, 1), (0, 1), (2, 2)]).unwrap(),
            Multigraph::new(4, [(0, 1), (2, 3)]).unwrap(),
            Multigraph::star(3),
        ];
        for g in &graphs {
            assert_eq!(z_state_weighted(g, &w(3)).unwrap().poly(), &naive_weighted(g, &w(3)));
        }
    }

    #[test]
    fn disjoint_union_multiplies() {
        let a = Multigraph::new(3, [(0, 1), (1, 2), (1, 2)]).unwrap();
        let b = Multigraph::new(2, [(0, 1), (1, 1)]).unwrap();
        let ab = a.disjoint_union(&b);
        let za = z_state_symbolic(&a, 3).unwrap();
        let zb = z_state_symbolic(&b, 3).unwrap();
        assert_eq!(z_state_symbolic(&ab, 3).unwrap().poly(), &(za.poly() * zb.poly()));
        let wa = z_state_weighted(&a, &w(3)).unwrap();
        let wb = z_state_weighted(&b, &w(3)).unwrap();
        assert_eq!(z_state_weighted(&ab, &w(3)).unwrap().poly(), &(wa.poly() * wb.poly()));
    }

    #[test]
    fn cap_enforced() {
        let err = z_state_symbolic_capped(&Multigraph::empty(5), 3, 100).unwrap_err();
        assert!(err.is_cap_exceeded());
    }

    #[test]
    fn edge_counts() {
        let one = WeightMatrix::from_chain(1, vec![BigUint::from(2u32)], None).unwrap();
        let g = Multigraph::new(3, [(0, 1), (1, 2), (0, 2), (0, 2), (1, 1)]).unwrap();
        let z = z_state_weighted(&g, &one).unwrap();
        assert_eq!(z.poly().to_string(), "32x^10");
        assert_eq!(edge_count(&z).unwrap(), 5);
        assert_eq!(edge_count(&z_state_weighted(&Multigraph::empty(2), &one).unwrap()).unwrap(), 0);
        let bad = PseudoStatePoly::new(one, Poly::univariate([(BigUint::one(), BigInt::from(3))]))
            .unwrap();
        assert!(edge_count(&bad).is_err());
        assert!(edge_count(&z_state_weighted(&g, &w(2)).unwrap()).is_err());
    }

    #[test]
    fn decode_examples() {
        let w3 = w(3);
        let d = decode_term(&big("103"), &big("103"), &w3).unwrap();
        assert_eq!(d.pairs, BTreeMap::from([((1, 1), 1)]));
        assert_eq!(d.cofactor, BigUint::one());
        let d = decode_term(&big("11038"), &big("5519"), &w3).unwrap();
        assert_eq!(d.pairs, BTreeMap::from([((2, 1), 1)]));
        assert_eq!(d.cofactor, BigUint::from(2u32));
        assert_eq!(d.support, BTreeSet::from([1, 2]));
        let d = decode_term(&big("525920182"), &big("262960091"), &w3).unwrap();
        assert_eq!(d.pairs, BTreeMap::from([((3, 2), 1)]));
        assert_eq!(d.cofactor, BigUint::from(2u32));
        assert!(decode_term(&big("103"), &big("104"), &w3).is_err());
    }

    #[test]
    fn decode_when_count_hits_a_table_prime() {
        // Count 7 times the product for pair (1,1) on the two-state table.
        let w2 = w(2);
        let d = decode_term(&big("49"), &big("7"), &w2).unwrap();
        assert_eq!(d.pairs, BTreeMap::from([((1, 1), 1)]));
        assert_eq!(d.cofactor, BigUint::from(7u32));
    }

    #[test]
    fn reconstruct_reference_examples() {
        let w3 = w(3);
        let k2 = Multigraph::complete(2);
        let z = z_state_weighted(&k2, &w3).unwrap();
        assert!(is_isomorphic(&reconstruct_pseudo(&z, &w3).unwrap(), &k2).unwrap());
        let k2k1 = k2.disjoint_union(&Multigraph::empty(1));
        let z = z_state_weighted(&k2k1, &w3).unwrap();
        let g = reconstruct_pseudo(&z, &w3).unwrap();
        assert!(is_isomorphic(&g, &k2k1).unwrap());
    }

    #[test]
    fn reconstruct_rejects_loops() {
        let (wm, _) = admissible_matrix(2, 4).unwrap();
        let g = Multigraph::new(2, [(0, 1), (1, 1)]).unwrap();
        let z = z_state_weighted(&g, &wm).unwrap();
        assert!(matches!(reconstruct_pseudo(&z, &wm), Err(Error::Reconstruct(_))));
    }

    #[test]
    fn reconstruct_symbolic_cases() {
        let digon = Multigraph::new(2, [(0, 1), (0, 1)]).unwrap();
        let cases = [
            (Multigraph::complete(2), 2),
            (Multigraph::empty(1), 2),
            (Multigraph::empty(3), 3),
            (digon, 3),
            (Multigraph::new(3, [(0, 0), (1, 2)]).unwrap(), 3),
        ];
        for (g, n) in cases {
            let z = z_state_symbolic(&g, n).unwrap();
            let back = reconstruct_symbolic(&z).unwrap();
            assert!(is_isomorphic(&back, &g).unwrap(), "{g}");
        }
    }

    #[test]
    fn negami_matches_tutte() {
        // Z(x = 1, y = 1) = n^{k(G)} T(1 + n, 2)
        let graphs = [
            Multigraph::complete(4),
            Multigraph::new(4, [(0, 1), (0, 1), (2, 3), (1, 1)]).unwrap(),
            Multigraph::cycle(5),
        ];
        for g in &graphs {
            let t = tutte(&Matroid::graphic(g.clone()));
            for n in 1..=3usize {
                let z = z_state_symbolic(g, n).unwrap().negami();
                let lhs = z.eval(&[BigInt::one(), BigInt::one()]).unwrap();
                let tv = t.eval(&[BigInt::from(n + 1), BigInt::from(2)]).unwrap();
                let rhs = num_traits::pow(BigInt::from(n), g.components()) * tv;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn extended_negami_collapses_to_negami() {
        let g = Multigraph::cycle(3);
        let z = z_state_symbolic(&g, 2).unwrap();
        let ext = z.extended_negami();
        assert_eq!(ext.vars().names(), ["x1", "x2", "y"]);
        let v = Vars::bivariate();
        let x = Poly::var(v.clone(), 0);
        let y = Poly::var(v, 1);
        assert_eq!(ext.substitute(&[x.clone(), x, y]).unwrap(), z.negami());
    }
}
