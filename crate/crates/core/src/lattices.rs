//! Construction A lattices `L_C = (1/sqrt 2) {x in Z^n : x mod 2 in C}` and
//! their theta series `sum_{v in L} q^(v,v)` with `q = e^(pi i z)`.
//!
//! Series live on a quarter-integer exponent grid (see [`QSeries`]). Because
//! of the `1/sqrt 2` scaling, a coordinate `x` contributes `q^(x^2/2)`, so the
//! code-side formula substitutes `theta_3` and `theta_2` evaluated at `q^2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::codes::{weight_enumerator_enum, BinaryCode};
use crate::error::{Error, Result};
use crate::f2::F2Vec;
use crate::poly::QSeries;

/// Largest code length accepted by [`theta_direct`].
pub const DIRECT_LENGTH_CAP: usize = 12;
/// Largest precision (quarter units) accepted by [`theta_direct`].
pub const DIRECT_PRECISION_CAP: usize = 24;

/// `theta_3 = sum_{j in Z} q^(j^2)`.
pub fn theta3(precision: usize) -> QSeries {
    let mut s = QSeries::zero(precision);
    s.add_at(0, 1);
    let mut j = 1usize;
    while 4 * j * j <= precision {
        s.add_at(4 * j * j, 2);
        j += 1;
    }
    s
}

/// `theta_2 = sum_{j in Z + 1/2} q^(j^2)`.
pub fn theta2(precision: usize) -> QSeries {
    let mut s = QSeries::zero(precision);
    let mut j = 0usize;
    while (2 * j + 1) * (2 * j + 1) <= precision {
        s.add_at((2 * j + 1) * (2 * j + 1), 2);
        j += 1;
    }
    s
}

fn divisor_power_sum(n: u64, k: u32) -> BigInt {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| num_traits::pow(BigInt::from(d), k as usize))
        .sum()
}

fn eisenstein(precision: usize, scale: i64, k: u32) -> QSeries {
    let mut s = QSeries::one(precision);
    let mut n = 1u64;
    while 8 * n as usize <= precision {
        s.add_at(8 * n as usize, divisor_power_sum(n, k) * scale);
        n += 1;
    }
    s
}

/// `E_4 = 1 + 240 sum sigma_3(n) q^(2n)`.
pub fn eisenstein_e4(precision: usize) -> QSeries {
    eisenstein(precision, 240, 3)
}

/// `E_6 = 1 - 504 sum sigma_5(n) q^(2n)`.
pub fn eisenstein_e6(precision: usize) -> QSeries {
    eisenstein(precision, -504, 5)
}

/// `Delta = (E_4^3 - E_6^2) / 1728`, with the division checked to be exact.
pub fn delta(precision: usize) -> Result<QSeries> {
    let e4 = eisenstein_e4(precision);
    let e6 = eisenstein_e6(precision);
    e4.pow(3).try_sub(&e6.pow(2))?.exact_div(&BigInt::from(1728))
}

/// Theta series of `L_C` from the weight enumerator:
/// `w_C(theta_3(q^2), theta_2(q^2))`.
pub fn theta_from_code(c: &BinaryCode, precision: usize) -> Result<QSeries> {
    let w = weight_enumerator_enum(c)?;
    let even = theta3(precision).stretch(2);
    let odd = theta2(precision).stretch(2);
    let n = c.length();
    let mut even_pows = vec![QSeries::one(precision)];
    let mut odd_pows = vec![QSeries::one(precision)];
    for _ in 0..n {
        let e = even_pows.last().expect("nonempty").try_mul(&even)?;
        even_pows.push(e);
        let o = odd_pows.last().expect("nonempty").try_mul(&odd)?;
        odd_pows.push(o);
    }
    let mut total = QSeries::zero(precision);
    for (exps, coeff) in w.terms() {
        let a = usize::try_from(&exps[0]).expect("exponent <= length");
        let b = usize::try_from(&exps[1]).expect("exponent <= length");
        let term = even_pows[a].try_mul(&odd_pows[b])?.scale(coeff);
        total = total.try_add(&term)?;
    }
    Ok(total)
}

/// Theta series of `L_C` by enumerating lattice vectors directly: every
/// `x in Z^n` with `x mod 2 in C` and norm `(x,x)/2` within the precision.
/// The norm bound gives `|x_i| <= sqrt(precision / 2)` per coordinate.
pub fn theta_direct(c: &BinaryCode, precision: usize) -> Result<QSeries> {
    if c.length() > DIRECT_LENGTH_CAP {
        return Err(Error::cap("direct theta code length", c.length(), DIRECT_LENGTH_CAP));
    }
    if precision > DIRECT_PRECISION_CAP {
        return Err(Error::cap("direct theta precision", precision, DIRECT_PRECISION_CAP));
    }
    // Norm (x,x)/2 in quarter units is 2 (x,x).
    let max_sq = (precision / 2) as i64;
    let mut bound = 0i64;
    while (bound + 1) * (bound + 1) <= max_sq {
        bound += 1;
    }
    let mut out = QSeries::zero(precision);
    let mut parity = F2Vec::zeros(c.length());
    fn rec(
        c: &BinaryCode,
        i: usize,
        sq: i64,
        max_sq: i64,
        bound: i64,
        parity: &mut F2Vec,
        out: &mut QSeries,
    ) {
        if i == c.length() {
            if c.contains(parity) {
                out.add_at(2 * sq as usize, 1);
            }
            return;
        }
        for x in -bound..=bound {
            let s = sq + x * x;
            if s > max_sq {
                continue;
            }
            parity.set(i, x.rem_euclid(2) == 1);
            rec(c, i + 1, s, max_sq, bound, parity, out);
        }
        parity.set(i, false);
    }
    rec(c, 0, 0, max_sq, bound, &mut parity, &mut out);
    Ok(out)
}

/// Integer basis of `{x in Z^n : x mod 2 in C}`: lifted generators plus
/// `2 e_j` for every non-pivot coordinate `j`.
pub fn lattice_basis(c: &BinaryCode) -> Vec<Vec<i64>> {
    let n = c.length();
    let mut rows: Vec<Vec<i64>> = c
        .generators()
        .iter()
        .map(|g| (0..n).map(|i| i64::from(g.get(i))).collect())
        .collect();
    let pivots: Vec<usize> = c
        .generators()
        .iter()
        .map(|g| g.first_one().expect("nonzero generator"))
        .collect();
    for j in (0..n).filter(|j| !pivots.contains(j)) {
        let mut r = vec![0; n];
        r[j] = 2;
        rows.push(r);
    }
    rows
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Determinant of the Gram matrix of `L_C`, including the `1/sqrt 2`
/// scaling. Computed by exact elimination; equals `2^(n - 2k)`.
pub fn gram_determinant(c: &BinaryCode) -> BigRational {
    let b = lattice_basis(c);
    let n = b.len();
    let gram: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigInt::from(b[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum::<i64>()))
                .collect()
        })
        .collect();
    let det = bareiss_det(gram);
    BigRational::new(det, BigInt::one() << n)
}
