//! Exact sparse polynomials and truncated q-series.
//!
//! [`Poly`] stores a canonical sparse map from exponent vectors to
//! arbitrary-precision integer coefficients. Exponents are themselves
//! arbitrary-precision, since prime-weighted state polynomials carry exponents
//! far beyond machine words. [`QSeries`] is a truncated power series on a grid
//! of quarter-integer exponents, which is enough to hold the half-integer
//! theta functions without rational arithmetic.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector of a monomial, one entry per variable.
pub type Exponents = Vec<BigUint>;

/// Ordered variable names of a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Vars(names.into_iter().map(Into::into).collect())
    }

    /// The single variable `x`.
    pub fn univariate() -> Self {
        Vars::new(["x"])
    }

    /// The pair `x, y`.
    pub fn bivariate() -> Self {
        Vars::new(["x", "y"])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    fn joined(&self) -> String {
        self.0.join(", ")
    }
}

/// Sparse polynomial with integer coefficients. No stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Exponents, BigInt>,
}

impl Poly {
    pub fn zero(vars: Vars) -> Self {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, BigInt::one())
    }

    pub fn constant(vars: Vars, c: impl Into<BigInt>) -> Self {
        let zero_exps = vec![BigUint::zero(); vars.len()];
        Self::monomial(vars, zero_exps, c)
    }

    /// The polynomial consisting of the `index`-th variable.
    pub fn var(vars: Vars, index: usize) -> Self {
        assert!(index < vars.len(), "variable index out of range");
        let mut exps = vec![BigUint::zero(); vars.len()];
        exps[index] = BigUint::one();
        Self::monomial(vars, exps, 1)
    }

    pub fn monomial(vars: Vars, exps: Exponents, c: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector has wrong arity");
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { vars, terms }
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, merging duplicates.
    pub fn from_terms(
        vars: Vars,
        terms: impl IntoIterator<Item = (Exponents, BigInt)>,
    ) -> Result<Self> {
        let mut p = Poly::zero(vars);
        for (exps, c) in terms {
            if exps.len() != p.vars.len() {
                return Err(Error::Invalid(format!(
                    "exponent vector of length {} for {} variables",
                    exps.len(),
                    p.vars.len()
                )));
            }
            p.add_term(exps, c);
        }
        Ok(p)
    }

    /// Univariate polynomial from (exponent, coefficient) pairs.
    pub fn univariate(terms: impl IntoIterator<Item = (BigUint, BigInt)>) -> Self {
        let mut p = Poly::zero(Vars::univariate());
        for (e, c) in terms {
            p.add_term(vec![e], c);
        }
        p
    }

    /// Bivariate polynomial in `x, y` from `(i, j, c)` meaning `c x^i y^j`.
    pub fn bivariate(terms: impl IntoIterator<Item = (u64, u64, BigInt)>) -> Self {
        let mut p = Poly::zero(Vars::bivariate());
        for (i, j, c) in terms {
            p.add_term(vec![BigUint::from(i), BigUint::from(j)], c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, exps: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending exponent order (the display order).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, exps: &[BigUint]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Coefficient of `x^i y^j` in a bivariate polynomial.
    pub fn coeff2(&self, i: u64, j: u64) -> BigInt {
        self.coeff(&[BigUint::from(i), BigUint::from(j)])
    }

    fn check_vars(&self, other: &Poly) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VarMismatch {
                left: self.vars.joined(),
                right: other.vars.joined(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        let mut out = Poly::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.vars.clone());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Sum of all coefficients, i.e. the value with every variable set to 1.
    pub fn eval_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Evaluates at integer points. Exponents must fit in `u32` unless the
    /// corresponding value is -1, 0 or 1.
    pub fn eval(&self, values: &[BigInt]) -> Result<BigInt> {
        if values.len() != self.vars.len() {
            return Err(Error::Invalid(format!(
                "{} values supplied for {} variables",
                values.len(),
                self.vars.len()
            )));
        }
        let mut total = BigInt::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in values.iter().zip(exps) {
                term *= int_pow(v, e)?;
            }
            total += term;
        }
        Ok(total)
    }

    /// Substitutes `images[i]` for the `i`-th variable. All images must share
    /// one variable set, which becomes the variable set of the result.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.vars.len() {
            return Err(Error::Invalid(format!(
                "{} images supplied for {} variables",
                images.len(),
                self.vars.len()
            )));
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let target = first.vars.clone();
        for img in images {
            first.check_vars(img)?;
        }
        let mut powers: Vec<BTreeMap<u64, Poly>> = vec![BTreeMap::new(); images.len()];
        let mut out = Poly::zero(target.clone());
        for (exps, c) in &self.terms {
            let mut term = Poly::constant(target.clone(), c.clone());
            for (i, e) in exps.iter().enumerate() {
                let e = e.to_u64().ok_or_else(|| {
                    Error::Invalid(format!("exponent {e} too large to substitute"))
                })?;
                if e == 0 {
                    continue;
                }
                let p = powers[i].entry(e).or_insert_with(|| images[i].pow(e));
                term = &term * &*p;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Total degree of the polynomial (`None` for zero).
    pub fn total_degree(&self) -> Option<BigUint> {
        self.terms.keys().map(|e| e.iter().sum::<BigUint>()).max()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let terms: Vec<TermJson> = self
            .terms()
            .map(|(e, c)| TermJson {
                coeff: c.to_string(),
                exps: e.iter().map(|x| x.to_string()).collect(),
            })
            .collect();
        serde_json::to_value(terms).expect("term list serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("term list serializes")
    }

    /// Parses the JSON term list. The variable set is not part of the format,
    /// so the caller supplies it.
    pub fn from_json(text: &str, vars: Vars) -> Result<Poly> {
        let terms: Vec<TermJson> = serde_json::from_str(text)?;
        let mut p = Poly::zero(vars);
        for (idx, t) in terms.into_iter().enumerate() {
            let c: BigInt = t
                .coeff
                .parse()
                .map_err(|_| Error::Invalid(format!("term {idx}: bad coefficient {:?}", t.coeff)))?;
            let exps = t
                .exps
                .iter()
                .map(|s| {
                    s.parse::<BigUint>().map_err(|_| {
                        Error::Invalid(format!("term {idx}: bad exponent {s:?}"))
                    })
                })
                .collect::<Result<Exponents>>()?;
            if exps.len() != p.vars.len() {
                return Err(Error::Invalid(format!(
                    "term {idx}: {} exponents for {} variables",
                    exps.len(),
                    p.vars.len()
                )));
            }
            p.add_term(exps, c);
        }
        Ok(p)
    }
}

fn int_pow(v: &BigInt, e: &BigUint) -> Result<BigInt> {
    if e.is_zero() {
        return Ok(BigInt::one());
    }
    if v.is_zero() || v.is_one() {
        return Ok(v.clone());
    }
    if *v == BigInt::from(-1) {
        return Ok(if e.bit(0) { v.clone() } else { BigInt::one() });
    }
    let e = e
        .to_u32()
        .ok_or_else(|| Error::Invalid(format!("exponent {e} too large to evaluate")))?;
    Ok(num_traits::pow(v.clone(), e as usize))
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    exps: Vec<String>,
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial addition across variable sets")
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomial subtraction across variable sets")
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial product across variable sets")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let glue = if self.vars.names().iter().all(|n| n.chars().count() == 1) {
            ""
        } else {
            "*"
        };
        for (k, (exps, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let factors: Vec<String> = exps
                .iter()
                .zip(self.vars.names())
                .filter(|(e, _)| !e.is_zero())
                .map(|(e, name)| {
                    if e.is_one() {
                        name.clone()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}{glue}")?;
                }
                write!(f, "{}", factors.join(glue))?;
            }
        }
        Ok(())
    }
}

/// Truncated power series `sum c_k q^(k/4)` for `0 <= k <= precision`.
///
/// Equality compares coefficients only up to the smaller of the two precisions.
#[derive(Clone, Debug)]
pub struct QSeries {
    precision: usize,
    coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn zero(precision: usize) -> Self {
        QSeries {
            precision,
            coeffs: vec![BigInt::zero(); precision + 1],
        }
    }

    pub fn one(precision: usize) -> Self {
        let mut s = Self::zero(precision);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Builds a series from `(quarter_exponent, coefficient)` pairs; pairs
    /// beyond the precision are dropped.
    pub fn from_terms(precision: usize, terms: impl IntoIterator<Item = (usize, BigInt)>) -> Self {
        let mut s = Self::zero(precision);
        for (k, c) in terms {
            if k <= precision {
                s.coeffs[k] += c;
            }
        }
        s
    }

    pub fn precision_quarters(&self) -> usize {
        self.precision
    }

    /// Coefficient of `q^(k/4)`; zero beyond the precision.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add_at(&mut self, k: usize, c: impl Into<BigInt>) {
        if k <= self.precision {
            self.coeffs[k] += c.into();
        }
    }

    pub fn truncate(&self, precision: usize) -> QSeries {
        let precision = precision.min(self.precision);
        QSeries {
            precision,
            coeffs: self.coeffs[..=precision].to_vec(),
        }
    }

    pub fn try_add(&self, other: &QSeries) -> Result<QSeries> {
        if self.precision != other.precision {
            return Err(Error::PrecisionMismatch(self.precision, other.precision));
        }
        Ok(QSeries {
            precision: self.precision,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &QSeries) -> Result<QSeries> {
        self.try_add(&other.scale(&BigInt::from(-1)))
    }

    /// Cauchy product truncated at the common precision.
    pub fn try_mul(&self, other: &QSeries) -> Result<QSeries> {
        if self.precision != other.precision {
            return Err(Error::PrecisionMismatch(self.precision, other.precision));
        }
        let n = self.precision;
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(QSeries {
            precision: n,
            coeffs: out,
        })
    }

    pub fn scale(&self, k: &BigInt) -> QSeries {
        QSeries {
            precision: self.precision,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn pow(&self, mut exp: u64) -> QSeries {
        let mut base = self.clone();
        let mut acc = QSeries::one(self.precision);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.try_mul(&base).expect("same precision");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.try_mul(&base).expect("same precision");
            }
        }
        acc
    }

    /// Substitutes `q -> q^factor`, keeping the precision.
    pub fn stretch(&self, factor: usize) -> QSeries {
        assert!(factor > 0, "stretch factor must be positive");
        let mut out = QSeries::zero(self.precision);
        for (k, c) in self.coeffs.iter().enumerate() {
            if k * factor > self.precision {
                break;
            }
            out.coeffs[k * factor] = c.clone();
        }
        out
    }

    /// Exact division of every coefficient by `d`.
    pub fn exact_div(&self, d: &BigInt) -> Result<QSeries> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (k, c) in self.coeffs.iter().enumerate() {
            if !(c % d).is_zero() {
                return Err(Error::Arithmetic(format!(
                    "coefficient {c} at q^({k}/4) is not divisible by {d}"
                )));
            }
            coeffs.push(c / d);
        }
        Ok(QSeries {
            precision: self.precision,
            coeffs,
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut coeffs = serde_json::Map::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs.insert(k.to_string(), serde_json::Value::String(c.to_string()));
            }
        }
        serde_json::json!({
            "precision_quarters": self.precision,
            "coeffs": coeffs,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("series serializes")
    }

    pub fn from_json(text: &str) -> Result<QSeries> {
        #[derive(Deserialize)]
        struct Raw {
            precision_quarters: usize,
            coeffs: BTreeMap<String, String>,
        }
        let raw: Raw = serde_json::from_str(text)?;
        let mut s = QSeries::zero(raw.precision_quarters);
        for (k, c) in raw.coeffs {
            let k: usize = k
                .parse()
                .map_err(|_| Error::Invalid(format!("bad exponent key {k:?}")))?;
            if k > raw.precision_quarters {
                return Err(Error::Invalid(format!(
                    "exponent {k} beyond precision {}",
                    raw.precision_quarters
                )));
            }
            s.coeffs[k] = c
                .parse()
                .map_err(|_| Error::Invalid(format!("bad coefficient {c:?}")))?;
        }
        Ok(s)
    }
}

impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        let n = self.precision.min(other.precision);
        self.coeffs[..=n] == other.coeffs[..=n]
    }
}

fn quarter_exponent(k: usize) -> String {
    match k % 4 {
        0 if k == 4 => String::new(),
        0 => format!("^{}", k / 4),
        2 => format!("^({}/2)", k / 2),
        _ => format!("^({k}/4)"),
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            if k == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "q{}", quarter_exponent(k))?;
            } else {
                write!(f, "{abs}q{}", quarter_exponent(k))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q{})", quarter_exponent(self.precision + 1))
    }
}
