//! Binary linear codes: canonical generator matrices, weight enumerators by
//! codeword enumeration and from the Tutte polynomial, duality, and the
//! fourfold repetition map `0 -> 0000, 1 -> 1111`.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::f2::{rref, F2Matrix, F2Vec};
use crate::matroids::{tutte, Backing, Matroid};
use crate::poly::{Poly, Vars};

/// Largest dimension for which codewords are enumerated.
pub const DEFAULT_ENUM_CAP: usize = 24;

/// Linear code given by a generator matrix in reduced row-echelon form, so
/// that two codes are equal iff their generator matrices are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryCode {
    length: usize,
    gens: Vec<F2Vec>,
    pivots: Vec<usize>,
}

impl BinaryCode {
    /// Row space of `rows`, each of length `length`.
    pub fn from_generators(length: usize, rows: &[F2Vec]) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != length) {
            return Err(Error::Invalid(format!(
                "generator of length {} for a code of length {length}",
                r.len()
            )));
        }
        let (gens, pivots) = rref(rows);
        Ok(BinaryCode {
            length,
            gens,
            pivots,
        })
    }

    pub fn from_matrix(a: &F2Matrix) -> Self {
        BinaryCode::from_generators(a.n_cols(), a.rows()).expect("matrix rows share a length")
    }

    /// The zero code of the given length.
    pub fn zero(length: usize) -> Self {
        BinaryCode {
            length,
            gens: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Row space of the matrix behind a vector matroid.
    pub fn from_matroid(m: &Matroid) -> Result<Self> {
        match m.backing() {
            Backing::Binary(a) => Ok(BinaryCode::from_matrix(a)),
            Backing::Graphic(_) => Err(Error::Invalid(
                "graphic backing has no generator matrix; build the incidence matroid first".into(),
            )),
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[F2Vec] {
        &self.gens
    }

    pub fn generator_matrix(&self) -> F2Matrix {
        F2Matrix::new(self.length, self.gens.clone()).expect("generators share a length")
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        if v.len() != self.length {
            return false;
        }
        let mut r = v.clone();
        for (g, &p) in self.gens.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(g);
            }
        }
        r.is_zero()
    }

    /// Number of codewords of each weight `0..=length`, by a Gray-code sweep
    /// in which consecutive codewords differ by one generator.
    pub fn weight_distribution(&self) -> Result<Vec<u64>> {
        let k = self.dimension();
        if k > DEFAULT_ENUM_CAP {
            return Err(Error::cap("codeword enumeration dimension", k, DEFAULT_ENUM_CAP));
        }
        let total = 1u64 << k;
        let chunk_bits = k.saturating_sub(6).max(k.min(10));
        let chunk = 1u64 << chunk_bits;
        let n_chunks = total / chunk;
        let dist = (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let mut dist = vec![0u64; self.length + 1];
                let start = c * chunk;
                // Seed the chunk at the Gray code of its first index.
                let mut word = F2Vec::zeros(self.length);
                let g0 = start ^ (start >> 1);
                for (b, g) in self.gens.iter().enumerate() {
                    if g0 >> b & 1 == 1 {
                        word.xor_assign(g);
                    }
                }
                dist[word.weight()] += 1;
                for i in start + 1..start + chunk {
                    word.xor_assign(&self.gens[i.trailing_zeros() as usize]);
                    dist[word.weight()] += 1;
                }
                dist
            })
            .reduce(
                || vec![0u64; self.length + 1],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        Ok(dist)
    }

    /// All codewords in Gray-code order (small codes only).
    pub fn codewords(&self) -> Result<Vec<F2Vec>> {
        let k = self.dimension();
        if k > DEFAULT_ENUM_CAP {
            return Err(Error::cap("codeword enumeration dimension", k, DEFAULT_ENUM_CAP));
        }
        let mut out = Vec::with_capacity(1 << k);
        let mut word = F2Vec::zeros(self.length);
        out.push(word.clone());
        for i in 1..1u64 << k {
            word.xor_assign(&self.gens[i.trailing_zeros() as usize]);
            out.push(word.clone());
        }
        Ok(out)
    }

    /// Dual code, from the kernel of the generator matrix.
    pub fn dual(&self) -> BinaryCode {
        let mut rows = Vec::new();
        for f in (0..self.length).filter(|c| !self.pivots.contains(c)) {
            let mut v = F2Vec::zeros(self.length);
            v.set(f, true);
            for (g, &p) in self.gens.iter().zip(&self.pivots) {
                if g.get(f) {
                    v.set(p, true);
                }
            }
            rows.push(v);
        }
        BinaryCode::from_generators(self.length, &rows).expect("kernel vectors have code length")
    }

    pub fn is_self_dual(&self) -> bool {
        *self == self.dual()
    }

    /// Every codeword weight divisible by four, checked on generators: each
    /// generator weight is 0 mod 4 and generators overlap evenly.
    pub fn is_doubly_even(&self) -> bool {
        self.gens.iter().enumerate().all(|(i, g)| {
            g.weight() % 4 == 0 && self.gens[i + 1..].iter().all(|h| g.overlap(h) % 2 == 0)
        })
    }

    /// Doubly-even check by enumerating every codeword.
    pub fn is_doubly_even_by_enumeration(&self) -> Result<bool> {
        Ok(self
            .weight_distribution()?
            .iter()
            .enumerate()
            .all(|(w, &c)| c == 0 || w % 4 == 0))
    }

    pub fn direct_sum(&self, other: &BinaryCode) -> BinaryCode {
        let left = F2Vec::zeros(self.length);
        let right = F2Vec::zeros(other.length);
        let rows: Vec<F2Vec> = self
            .gens
            .iter()
            .map(|g| g.concat(&right))
            .chain(other.gens.iter().map(|g| left.concat(g)))
            .collect();
        BinaryCode::from_generators(self.length + other.length, &rows).expect("lengths add up")
    }
}

/// `w_C(x, y) = sum_{c in C} x^(n - wt c) y^(wt c)` by enumeration.
pub fn weight_enumerator_enum(c: &BinaryCode) -> Result<Poly> {
    let dist = c.weight_distribution()?;
    let n = c.length() as u64;
    Ok(Poly::bivariate(
        dist.iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(w, &k)| (n - w as u64, w as u64, BigInt::from(k))),
    ))
}

/// Weight enumerator of the code `C_M` spanned by a binary matroid's matrix,
/// obtained from its Tutte polynomial. With `k = r(M)` and `n = |E|`, the
/// substitution `x -> (x1+x2)/(x1-x2)`, `y -> x1/x2` times
/// `x2^(n-k) (x1-x2)^k` turns each term `t_ab x^a y^b` (where `a <= k` and
/// `b <= n-k`) into the polynomial `t_ab (x1+x2)^a (x1-x2)^(k-a) x1^b x2^(n-k-b)`.
pub fn weight_enumerator_greene(m: &Matroid) -> Result<Poly> {
    let t = tutte(m);
    weight_enumerator_from_tutte(&t, m.size(), m.full_rank())
}

/// The Tutte-to-weight-enumerator substitution for a ground set of size `n`
/// and rank `k`.
pub fn weight_enumerator_from_tutte(t: &Poly, n: usize, k: usize) -> Result<Poly> {
    let vars = Vars::bivariate();
    let x1 = Poly::var(vars.clone(), 0);
    let x2 = Poly::var(vars.clone(), 1);
    let sum = &x1 + &x2;
    let diff = &x1 - &x2;
    let mut out = Poly::zero(vars);
    for (exps, c) in t.terms() {
        let as_usize = |e: &BigUint| -> Result<usize> {
            usize::try_from(e).map_err(|_| Error::Invalid("Tutte exponent too large".into()))
        };
        let (a, b) = (as_usize(&exps[0])?, as_usize(&exps[1])?);
        if a > k || b > n - k {
            return Err(Error::Invalid(format!(
                "Tutte term x^{a} y^{b} exceeds rank {k} / nullity {}",
                n - k
            )));
        }
        let term = &(&sum.pow(a as u64) * &diff.pow((k - a) as u64))
            * &(&x1.pow(b as u64) * &x2.pow((n - k - b) as u64));
        out = &out + &term.scale(c);
    }
    Ok(out)
}

/// Image of the code under `0 -> 0000, 1 -> 1111` applied coordinatewise:
/// coordinate `i` becomes coordinates `4i..4i+3`.
pub fn replicate4(c: &BinaryCode) -> BinaryCode {
    let rows: Vec<F2Vec> = c
        .generators()
        .iter()
        .map(|g| {
            let mut v = F2Vec::zeros(4 * c.length());
            for i in g.ones() {
                for k in 0..4 {
                    v.set(4 * i + k, true);
                }
            }
            v
        })
        .collect();
    BinaryCode::from_generators(4 * c.length(), &rows).expect("replicated length")
}

/// Number of codewords `|C| = 2^k` as a big integer.
pub fn code_size(c: &BinaryCode) -> BigInt {
    BigInt::one() << c.dimension()
}

pub fn e8() -> BinaryCode {
    BinaryCode::from_matrix(
        &F2Matrix::parse(include_str!("../fixtures/e8.gen")).expect("bundled e8 fixture"),
    )
}

pub fn d16_plus() -> BinaryCode {
    BinaryCode::from_matrix(
        &F2Matrix::parse(include_str!("../fixtures/d16plus.gen")).expect("bundled d16+ fixture"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Multigraph;

    fn code(text: &str) -> BinaryCode {
        BinaryCode::from_matrix(&F2Matrix::parse(text).unwrap())
    }

    #[test]
    fn codes_from_matroids() {
        let full = BinaryCode::from_matroid(&Matroid::vector_f2(F2Matrix::identity(2))).unwrap();
        assert_eq!(full.dimension(), 2);
        let k3 = BinaryCode::from_matroid(&Matroid::incidence(&Multigraph::complete(3))).unwrap();
        assert_eq!(k3.dimension(), 2);
        let words: Vec<String> = k3.codewords().unwrap().iter().map(|w| w.to_string()).collect();
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(sorted, vec!["000", "011", "101", "110"]);
        let zero = BinaryCode::from_matrix(&F2Matrix::zeros(2, 3));
        assert_eq!(zero, BinaryCode::zero(3));
        assert!(BinaryCode::from_matroid(&Matroid::graphic(Multigraph::complete(3))).is_err());
    }

    #[test]
    fn enumerators() {
        assert_eq!(weight_enumerator_enum(&code("11")).unwrap().to_string(), "x^2 + y^2");
        assert_eq!(weight_enumerator_enum(&e8()).unwrap().to_string(), "x^8 + 14x^4y^4 + y^8");
        assert_eq!(weight_enumerator_enum(&BinaryCode::zero(5)).unwrap().to_string(), "x^5");
    }

    #[test]
    fn greene_small_cases() {
        let u12 = Matroid::vector_f2(F2Matrix::parse("11").unwrap());
        assert_eq!(weight_enumerator_greene(&u12).unwrap().to_string(), "x^2 + y^2");
        let k3 = Matroid::incidence(&Multigraph::complete(3));
        assert_eq!(weight_enumerator_greene(&k3).unwrap().to_string(), "x^3 + 3xy^2");
        let free = Matroid::vector_f2(F2Matrix::identity(4));
        assert_eq!(
            weight_enumerator_greene(&free).unwrap(),
            weight_enumerator_enum(&BinaryCode::from_matroid(&free).unwrap()).unwrap()
        );
    }

    #[test]
    fn duality() {
        let e = e8();
        assert!(e.is_self_dual());
        assert!(e.is_doubly_even());
        let rep = code("11");
        assert!(rep.is_self_dual());
        assert!(!rep.is_doubly_even());
        let c = code("10110\n01011\n");
        assert_eq!(c.dual().dual(), c);
        assert_eq!(c.dimension() + c.dual().dimension(), 5);
        for w in c.dual().codewords().unwrap() {
            for g in c.generators() {
                assert!(!w.dot(g));
            }
        }
    }

    #[test]
    fn replication() {
        let r = replicate4(&code("11"));
        assert_eq!(r.length(), 8);
        let words: Vec<String> = r.codewords().unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["00000000", "11111111"]);
        assert!(r.is_doubly_even());
        assert_eq!(replicate4(&BinaryCode::zero(3)), BinaryCode::zero(12));
    }

    #[test]
    fn gray_chunks_cover_every_word() {
        // Dimension 12 exercises the multi-chunk path.
        let rows: Vec<F2Vec> = (0..12)
            .map(|i| {
                let mut v = F2Vec::zeros(20);
                v.set(i, true);
                v.set(12 + i % 8, true);
                v
            })
            .collect();
        let c = BinaryCode::from_generators(20, &rows).unwrap();
        let dist = c.weight_distribution().unwrap();
        let mut naive = vec![0u64; 21];
        for w in c.codewords().unwrap() {
            naive[w.weight()] += 1;
        }
        assert_eq!(dist, naive);
        assert_eq!(dist.iter().sum::<u64>(), 4096);
    }

    #[test]
    fn milnor_fixtures() {
        let a = e8().direct_sum(&e8());
        let b = d16_plus();
        assert_ne!(a, b);
        assert!(b.is_self_dual() && b.is_doubly_even());
        assert_eq!(weight_enumerator_enum(&a).unwrap(), weight_enumerator_enum(&b).unwrap());
    }
}
