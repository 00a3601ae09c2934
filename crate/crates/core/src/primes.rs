//! Prime services for the prime-weighted state matrices.
//!
//! The weight of state pair `(i, j)`, `i >= j`, in the original matrix family
//! is `P(n^(n * a(i, j)))`, the prime whose index is a tower of `n`. Those
//! indices become infeasible beyond `n = 3`, so [`admissible_matrix`] builds
//! compact matrices that satisfy the same decoding gap conditions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default largest prime index the sieve will be asked for.
pub const DEFAULT_PRIME_CAP: u64 = 400_000_000;

/// Verified `P(index)` values needed for the `n <= 3` matrices.
pub const PRIME_CACHE: &str = include_str!("../fixtures/prime_index.cache");

/// `a(i, j) = i(i+1)/2 + (j - i)`: the position of `(i, j)`, `i >= j`, in the
/// order `(1,1), (2,1), (2,2), (3,1), ...`.
pub fn a_index(i: u64, j: u64) -> u64 {
    assert!(i >= 1 && j >= 1, "indices are 1-based");
    i * (i + 1) / 2 - i + j
}

/// `n`-th prime lookups: a cache consulted first, then a segmented sieve
/// bounded by a feasibility cap on the index.
#[derive(Clone, Debug)]
pub struct PrimeOracle {
    cap: u64,
    cache: BTreeMap<u64, u64>,
}

impl Default for PrimeOracle {
    fn default() -> Self {
        let mut oracle = PrimeOracle::empty(DEFAULT_PRIME_CAP);
        oracle
            .load_cache(PRIME_CACHE)
            .expect("bundled prime cache parses");
        oracle
    }
}

impl PrimeOracle {
    /// Oracle with no cached values.
    pub fn empty(cap: u64) -> Self {
        PrimeOracle {
            cap,
            cache: BTreeMap::new(),
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Loads `<index> <prime>` lines; `#` starts a comment.
    pub fn load_cache(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut field = |name: &str| -> Result<u64> {
                let tok = fields
                    .next()
                    .ok_or_else(|| Error::parse(lineno + 1, 1, format!("missing {name}")))?;
                tok.parse()
                    .map_err(|_| Error::parse(lineno + 1, 1, format!("bad {name} {tok:?}")))
            };
            let index = field("index")?;
            let prime = field("prime")?;
            if index == 0 {
                return Err(Error::parse(lineno + 1, 1, "prime indices start at 1"));
            }
            self.cache.insert(index, prime);
        }
        Ok(())
    }

    pub fn cache_to_string(&self) -> String {
        self.cache
            .iter()
            .map(|(i, p)| format!("{i} {p}\n"))
            .collect()
    }

    pub fn cached(&self) -> &BTreeMap<u64, u64> {
        &self.cache
    }

    /// The `index`-th prime, `P(1) = 2`.
    pub fn nth_prime(&self, index: &BigUint) -> Result<u64> {
        if index.is_zero() {
            return Err(Error::Invalid("prime indices start at 1".into()));
        }
        if let Some(i) = index.to_u64() {
            if let Some(&p) = self.cache.get(&i) {
                return Ok(p);
            }
            return self.nth_prime_sieved(i);
        }
        Err(Error::cap("prime index", index, self.cap))
    }

    /// Sieve lookup that ignores the cache.
    pub fn nth_prime_sieved(&self, index: u64) -> Result<u64> {
        if index == 0 {
            return Err(Error::Invalid("prime indices start at 1".into()));
        }
        if index > self.cap {
            return Err(Error::cap("prime index", index, self.cap));
        }
        Ok(nth_prime_by_sieve(index))
    }
}

/// Odd numbers per sieve segment.
const SEGMENT: u64 = 1 << 18;
/// Segments handed to the thread pool at once.
const BATCH: u64 = 32;

fn simple_sieve(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Bitset of composite flags for odd numbers `lo, lo+2, ..., lo+2(len-1)`.
fn sieve_segment(lo: u64, len: u64, base: &[u64]) -> Vec<u64> {
    let words = len.div_ceil(64) as usize;
    let mut bits = vec![0u64; words];
    let hi = lo + 2 * len;
    for &p in base.iter().skip(1) {
        if p * p >= hi {
            break;
        }
        let mut start = (p * p).max(lo.div_ceil(p) * p);
        if start % 2 == 0 {
            start += p;
        }
        let mut idx = (start - lo) / 2;
        while idx < len {
            bits[(idx / 64) as usize] |= 1 << (idx % 64);
            idx += p;
        }
    }
    if lo == 1 {
        bits[0] |= 1;
    }
    let tail = len % 64;
    if tail != 0 {
        bits[words - 1] |= !0u64 << tail;
    }
    bits
}

fn count_unmarked(bits: &[u64]) -> u64 {
    bits.iter().map(|w| (!w).count_ones() as u64).sum()
}

/// Upper bound for `P(index)` (Rosser's bound for `index >= 6`).
fn prime_upper_bound(index: u64) -> u64 {
    if index < 6 {
        return 15;
    }
    let x = index as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 3
}

/// The `index`-th prime by an odd-only segmented sieve. Segments are sieved
/// in parallel batches; counts are merged in order, so the result does not
/// depend on the thread count.
pub fn nth_prime_by_sieve(index: u64) -> u64 {
    assert!(index >= 1, "prime indices start at 1");
    if index == 1 {
        return 2;
    }
    let bound = prime_upper_bound(index);
    let base = simple_sieve((bound as f64).sqrt() as u64 + 2);
    // Odd primes still to pass before reaching the answer.
    let mut remaining = index - 1;
    let mut segment = 0u64;
    loop {
        let counts: Vec<u64> = (segment..segment + BATCH)
            .into_par_iter()
            .map(|s| count_unmarked(&sieve_segment(1 + 2 * s * SEGMENT, SEGMENT, &base)))
            .collect();
        for (offset, &c) in counts.iter().enumerate() {
            if c >= remaining {
                let lo = 1 + 2 * (segment + offset as u64) * SEGMENT;
                let bits = sieve_segment(lo, SEGMENT, &base);
                for idx in 0..SEGMENT {
                    if bits[(idx / 64) as usize] & (1 << (idx % 64)) == 0 {
                        remaining -= 1;
                        if remaining == 0 {
                            return lo + 2 * idx;
                        }
                    }
                }
                unreachable!("segment count disagrees with scan");
            }
            remaining -= c;
        }
        segment += BATCH;
    }
}

const SMALL_PRIMES: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Miller-Rabin with the first 20 prime bases. The first 13 bases already
/// make the test deterministic below 3.3e24, which covers every admissible
/// matrix with at most 3 edges and 9 states; above that it is a strong
/// probable-prime test.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `x`.
pub fn next_prime_above(x: &BigUint) -> BigUint {
    let mut c = x + 1u32;
    if c <= BigUint::from(2u32) {
        return BigUint::from(2u32);
    }
    if c.is_even() {
        c += 1u32;
    }
    while !is_prime(&c) {
        c += 2u32;
    }
    c
}

/// Symmetric `n x n` table whose `(i, j)` entry is the monomial `p x^p` for a
/// distinct prime `p = p(i, j)`. States are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    n: usize,
    /// Entries in `a(i, j)` order.
    primes: Vec<BigUint>,
    reverse: HashMap<BigUint, (usize, usize)>,
    budget: Option<u64>,
}

impl WeightMatrix {
    /// Builds a matrix from primes listed in `a(i, j)` order.
    pub fn from_chain(n: usize, primes: Vec<BigUint>, budget: Option<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("weight matrix needs at least one state".into()));
        }
        if primes.len() != n * (n + 1) / 2 {
            return Err(Error::Invalid(format!(
                "{} entries supplied for {n} states, expected {}",
                primes.len(),
                n * (n + 1) / 2
            )));
        }
        let mut reverse = HashMap::new();
        for i in 1..=n {
            for j in 1..=i {
                let p = &primes[a_index(i as u64, j as u64) as usize - 1];
                if reverse.insert(p.clone(), (i, j)).is_some() {
                    return Err(Error::Invalid(format!("prime {p} appears twice")));
                }
            }
        }
        Ok(WeightMatrix {
            n,
            primes,
            reverse,
            budget,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge budget the matrix was built for, if any.
    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    /// Prime of state pair `(i, j)` (either order, 1-based).
    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        assert!(lo >= 1 && hi <= self.n, "state index out of range");
        &self.primes[a_index(hi as u64, lo as u64) as usize - 1]
    }

    /// Primes in `a(i, j)` order.
    pub fn chain(&self) -> &[BigUint] {
        &self.primes
    }

    /// Unordered state pair `(i, j)`, `i >= j`, carrying prime `p`.
    pub fn pair_of(&self, p: &BigUint) -> Option<(usize, usize)> {
        self.reverse.get(p).copied()
    }

    /// `((i, j), p)` for `i >= j` in chain order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &BigUint)> {
        (1..=self.n)
            .flat_map(|i| (1..=i).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), self.entry(i, j)))
    }

    pub fn to_json(&self) -> String {
        let file = MatrixJson {
            n: self.n,
            budget: self.budget,
            entries: self
                .entries()
                .map(|((i, j), p)| EntryJson {
                    i,
                    j,
                    prime: p.to_string(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixJson = serde_json::from_str(text)?;
        let mut primes = vec![None; file.n * (file.n + 1) / 2];
        for e in &file.entries {
            let (i, j) = if e.i >= e.j { (e.i, e.j) } else { (e.j, e.i) };
            if j == 0 || i > file.n {
                return Err(Error::Invalid(format!("entry ({}, {}) out of range", e.i, e.j)));
            }
            let p: BigUint = e
                .prime
                .parse()
                .map_err(|_| Error::Invalid(format!("bad prime {:?}", e.prime)))?;
            primes[a_index(i as u64, j as u64) as usize - 1] = Some(p);
        }
        let primes = primes
            .into_iter()
            .enumerate()
            .map(|(k, p)| p.ok_or_else(|| Error::Invalid(format!("missing entry {}", k + 1))))
            .collect::<Result<Vec<_>>>()?;
        WeightMatrix::from_chain(file.n, primes, file.budget)
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    i: usize,
    j: usize,
    prime: String,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    budget: Option<u64>,
    entries: Vec<EntryJson>,
}

impl fmt::Display for WeightMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (1..=self.n)
            .map(|i| {
                (1..=self.n)
                    .map(|j| {
                        let p = self.entry(i, j);
                        format!("{p}x^{p}")
                    })
                    .collect()
            })
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", line.join("  "))?;
        }
        Ok(())
    }
}

/// The matrix with entries `P(n^(n a(i, j)))`.
pub fn paper_weight_matrix(n: usize, oracle: &PrimeOracle) -> Result<WeightMatrix> {
    if n == 0 {
        return Err(Error::Invalid("state count must be positive".into()));
    }
    let base = BigUint::from(n);
    let mut primes = Vec::with_capacity(n * (n + 1) / 2);
    for i in 1..=n as u64 {
        for j in 1..=i {
            let exp = n as u64 * a_index(i, j);
            let exp = u32::try_from(exp)
                .map_err(|_| Error::cap("prime index exponent", exp, u32::MAX))?;
            let index = base.pow(exp);
            let p = oracle.nth_prime(&index).map_err(|e| match e {
                Error::CapExceeded { value, cap, .. } => Error::CapExceeded {
                    what: "prime index (use an admissible matrix instead)",
                    value,
                    cap,
                },
                other => other,
            })?;
            primes.push(BigUint::from(p));
        }
    }
    WeightMatrix::from_chain(n, primes, None)
}

/// Record of the gap inequalities checked for a weight matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityCertificate {
    pub m: u64,
    pub n: usize,
    /// `((i, j), p)` in chain order; each prime exceeds `m` times its predecessor.
    pub chain: Vec<((usize, usize), BigUint)>,
}

impl AdmissibilityCertificate {
    /// Checks `m p(i,i) < p(i+1,1)`, `m p(i,j-1) < p(i,j)`, primality,
    /// distinctness, and `min p > max(3m, n)`.
    pub fn verify(w: &WeightMatrix, m: u64) -> Result<Self> {
        let mb = BigUint::from(m);
        let floor = BigUint::from((3 * m).max(w.n() as u64));
        let mut chain = Vec::new();
        let mut prev: Option<&BigUint> = None;
        for ((i, j), p) in w.entries() {
            if !is_prime(p) {
                return Err(Error::Invalid(format!("entry ({i}, {j}) = {p} is not prime")));
            }
            if *p <= floor {
                return Err(Error::Invalid(format!(
                    "entry ({i}, {j}) = {p} does not exceed max(3m, n) = {floor}"
                )));
            }
            if let Some(q) = prev {
                if &mb * q >= *p {
                    return Err(Error::Invalid(format!(
                        "gap violated at ({i}, {j}): {m} * {q} >= {p}"
                    )));
                }
            }
            prev = Some(p);
            chain.push(((i, j), p.clone()));
        }
        Ok(AdmissibilityCertificate { m, n: w.n(), chain })
    }
}

/// Greedy admissible matrix for graphs with at most `m` edges on `n` states:
/// the first prime is the smallest above `max(3m, n)`, each next one the
/// smallest above `m` times its predecessor.
pub fn admissible_matrix(m: u64, n: usize) -> Result<(WeightMatrix, AdmissibilityCertificate)> {
    if n == 0 {
        return Err(Error::Invalid("state count must be positive".into()));
    }
    let factor = BigUint::from(m.max(1));
    let mut primes = Vec::with_capacity(n * (n + 1) / 2);
    let mut p = next_prime_above(&BigUint::from((3 * m).max(n as u64)));
    for _ in 0..n * (n + 1) / 2 {
        let next = next_prime_above(&(&factor * &p));
        primes.push(std::mem::replace(&mut p, next));
    }
    let w = WeightMatrix::from_chain(n, primes, Some(m))?;
    let cert = AdmissibilityCertificate::verify(&w, m)?;
    Ok((w, cert))
}
