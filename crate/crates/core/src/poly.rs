//! Sparse polynomials with exact integer coefficients in
//! `x_1..x_n, y_1..y_n, q_1..q_{n-1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("ambient sizes differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("variable index {index} out of range for ambient size {n}")]
    OutOfRange { index: usize, n: usize },
    #[error("division by (y_{0} - y_{1}) left a nonzero remainder")]
    InexactDivision(usize, usize),
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X(usize),
    Y(usize),
    Q(usize),
}

/// Exponent vector laid out as `x_1..x_n, y_1..y_n, q_1..q_{n-1}`.
///
/// Ordering is lexicographic on that concatenation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(Box<[u16]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; 3 * n - 1].into_boxed_slice())
    }

    /// Exponents laid out as `x_1..x_n, y_1..y_n, q_1..q_{n-1}`.
    pub fn from_exponents(exponents: Vec<u16>) -> Self {
        Monomial(exponents.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn n(&self) -> usize {
        (self.0.len() + 1) / 3
    }

    pub fn xexp(&self) -> &[u16] {
        &self.0[..self.n()]
    }

    pub fn yexp(&self) -> &[u16] {
        let n = self.n();
        &self.0[n..2 * n]
    }

    pub fn qexp(&self) -> &[u16] {
        &self.0[2 * self.n()..]
    }

    /// Degree with `deg q_i = 2`.
    pub fn quantum_degree(&self) -> usize {
        let n = self.n();
        let plain: usize = self.0[..2 * n].iter().map(|&e| e as usize).sum();
        let q: usize = self.qexp().iter().map(|&e| e as usize).sum();
        plain + 2 * q
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }
}

fn var_slot(n: usize, v: Var) -> Result<usize, PolyError> {
    let (index, limit, offset) = match v {
        Var::X(i) => (i, n, 0),
        Var::Y(j) => (j, n, n),
        Var::Q(k) => (k, n - 1, 2 * n),
    };
    if index == 0 || index > limit {
        return Err(PolyError::OutOfRange { index, n });
    }
    Ok(offset + index - 1)
}

/// An element of `Z[x, y, q]` for a fixed ambient `n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "ambient size must be positive");
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Poly::constant(n, 1)
    }

    pub fn constant(n: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Poly::zero(n);
        p.add_term(Monomial::one(n), c.into());
        p
    }

    pub fn var(n: usize, v: Var) -> Result<Self, PolyError> {
        let slot = var_slot(n, v)?;
        let mut m = Monomial::one(n);
        m.0[slot] = 1;
        let mut p = Poly::zero(n);
        p.add_term(m, BigInt::one());
        Ok(p)
    }

    pub fn x(n: usize, i: usize) -> Result<Self, PolyError> {
        Poly::var(n, Var::X(i))
    }

    pub fn y(n: usize, j: usize) -> Result<Self, PolyError> {
        Poly::var(n, Var::Y(j))
    }

    pub fn q(n: usize, k: usize) -> Result<Self, PolyError> {
        Poly::var(n, Var::Q(k))
    }

    /// `x_i - y_j`.
    pub fn binomial(n: usize, i: usize, j: usize) -> Result<Self, PolyError> {
        Ok(&Poly::x(n, i)? - &Poly::y(n, j)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Builds a polynomial from raw terms; zero coefficients are dropped and
    /// repeated monomials are combined.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Result<Self, PolyError> {
        let mut p = Poly::zero(n);
        for (m, c) in terms {
            if m.0.len() != 3 * n - 1 {
                return Err(PolyError::AmbientMismatch(n, m.n()));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_ambient(&self, other: &Poly) -> Result<(), PolyError> {
        if self.n != other.n {
            return Err(PolyError::AmbientMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ambient(other)?;
        let mut out = Poly::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        let mut out = Poly::zero(self.n);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(self.n), |acc, _| &acc * self)
    }

    /// Sets the `y` and/or `q` variables to zero.
    pub fn specialize(&self, zero_y: bool, zero_q: bool) -> Poly {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            let killed = (zero_y && m.yexp().iter().any(|&e| e > 0))
                || (zero_q && m.qexp().iter().any(|&e| e > 0));
            if !killed {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// `s_i f`: exchanges `y_i` and `y_{i+1}`.
    pub fn swap_y(&self, i: usize) -> Result<Poly, PolyError> {
        let n = self.n;
        if i == 0 || i >= n {
            return Err(PolyError::OutOfRange { index: i, n });
        }
        let (u, t) = (n + i - 1, n + i);
        let mut out = Poly::zero(n);
        for (m, c) in &self.terms {
            let mut e = m.clone();
            e.0.swap(u, t);
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// `(f - s_i f) / (y_i - y_{i+1})`.
    ///
    /// The numerator is divided by synthetic division in `y_i` with
    /// coefficients in `Z[y_{i+1}, ...]`; a nonzero remainder is reported as
    /// [`PolyError::InexactDivision`].
    pub fn divided_difference_y(&self, i: usize) -> Result<Poly, PolyError> {
        let numerator = self.checked_sub(&self.swap_y(i)?)?;
        let n = self.n;
        let (u, t) = (n + i - 1, n + i);

        // Group by the monomial with the y_i, y_{i+1} exponents cleared; each
        // group is a bivariate polynomial in (y_i, y_{i+1}).
        let mut groups: BTreeMap<Monomial, BTreeMap<(u16, u16), BigInt>> = BTreeMap::new();
        for (m, c) in &numerator.terms {
            let mut rest = m.clone();
            let key = (rest.0[u], rest.0[t]);
            rest.0[u] = 0;
            rest.0[t] = 0;
            groups.entry(rest).or_default().insert(key, c.clone());
        }

        let mut out = Poly::zero(n);
        for (rest, group) in groups {
            let deg_u = group.keys().map(|k| k.0).max().unwrap_or(0) as usize;
            // coeffs[k] is the coefficient of y_i^k, a dense polynomial in y_{i+1}
            let mut coeffs: Vec<Vec<BigInt>> = vec![Vec::new(); deg_u + 1];
            for ((a, b), c) in group {
                let slot = &mut coeffs[a as usize];
                if slot.len() <= b as usize {
                    slot.resize(b as usize + 1, BigInt::zero());
                }
                slot[b as usize] += c;
            }
            // Horner: h_{k-1} = g_k + y_{i+1} h_k, remainder g_0 + y_{i+1} h_0
            let mut carry: Vec<BigInt> = Vec::new();
            for k in (0..=deg_u).rev() {
                let mut current = coeffs[k].clone();
                for (b, c) in carry.iter().enumerate() {
                    if current.len() <= b + 1 {
                        current.resize(b + 2, BigInt::zero());
                    }
                    current[b + 1] += c;
                }
                if k == 0 {
                    if current.iter().any(|c| !c.is_zero()) {
                        return Err(PolyError::InexactDivision(i, i + 1));
                    }
                } else {
                    for (b, c) in current.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut m = rest.clone();
                        m.0[u] = (k - 1) as u16;
                        m.0[t] = b as u16;
                        out.add_term(m, c.clone());
                    }
                }
                carry = current;
            }
        }
        Ok(out)
    }

    /// Applies `∂_{a_1} ... ∂_{a_k}` for the word `[a_1, ..., a_k]`
    /// (`∂_{a_k}` acts first).
    pub fn divided_difference_word(&self, word: &[usize]) -> Result<Poly, PolyError> {
        word.iter()
            .rev()
            .try_fold(self.clone(), |f, &i| f.divided_difference_y(i))
    }

    /// `(distinct terms, sum of |coefficients|)`.
    pub fn counts(&self) -> TermCounts {
        TermCounts {
            distinct: self.terms.len(),
            weighted: self.terms.values().map(|c| c.magnitude().clone()).sum(),
        }
    }

    /// Reinterprets the polynomial in a larger ambient ring.
    pub fn embed(&self, size: usize) -> Result<Poly, PolyError> {
        let n = self.n;
        if size < n {
            return Err(PolyError::OutOfRange { index: size, n });
        }
        let mut out = Poly::zero(size);
        for (m, c) in &self.terms {
            let mut e = Monomial::one(size);
            e.0[..n].copy_from_slice(m.xexp());
            e.0[size..size + n].copy_from_slice(m.yexp());
            e.0[2 * size..2 * size + n - 1].copy_from_slice(m.qexp());
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// The set of quantum degrees appearing in the polynomial.
    pub fn quantum_degrees(&self) -> Vec<usize> {
        let mut degs: Vec<usize> = self.terms.keys().map(Monomial::quantum_degree).collect();
        degs.sort_unstable();
        degs.dedup();
        degs
    }

    /// Deterministic rendering, terms in descending monomial order.
    pub fn canonical_text(&self) -> String {
        self.to_string()
    }

    pub fn to_json_value(&self) -> PolyJson {
        PolyJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| TermJson {
                    c: c.to_string(),
                    x: m.xexp().to_vec(),
                    y: m.yexp().to_vec(),
                    q: m.qexp().to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializing plain data")
    }

    pub fn from_json(s: &str) -> Result<Poly, PolyError> {
        let raw: PolyJson = serde_json::from_str(s).map_err(|e| PolyError::Json(e.to_string()))?;
        Poly::try_from(raw)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermCounts {
    pub distinct: usize,
    pub weighted: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub x: Vec<u16>,
    pub y: Vec<u16>,
    pub q: Vec<u16>,
}

impl TryFrom<PolyJson> for Poly {
    type Error = PolyError;

    fn try_from(raw: PolyJson) -> Result<Poly, PolyError> {
        let n = raw.n;
        if n == 0 {
            return Err(PolyError::Json("n must be positive".into()));
        }
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            if t.x.len() != n || t.y.len() != n || t.q.len() != n - 1 {
                return Err(PolyError::Json(format!(
                    "exponent lengths must be {n}, {n}, {}",
                    n - 1
                )));
            }
            let c: BigInt = t
                .c
                .parse()
                .map_err(|_| PolyError::Json(format!("bad coefficient {:?}", t.c)))?;
            let exps: Vec<u16> = t.x.into_iter().chain(t.y).chain(t.q).collect();
            terms.push((Monomial(exps.into_boxed_slice()), c));
        }
        Poly::from_terms(n, terms)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    let families = [('x', m.xexp()), ('y', m.yexp()), ('q', m.qexp())];
    for (name, exps) in families {
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{}{}", name, i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.magnitude();
            let constant = m.0.iter().all(|&e| e == 0);
            if constant {
                write!(f, "{magnitude}")?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[n={}]({})", self.n, self)
    }
}

// Operator forms panic on an ambient mismatch; use the `checked_*` methods
// where mixed sizes are possible.
impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).unwrap()
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).unwrap()
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).unwrap()
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Accumulates many polynomials of one ambient size without re-cloning.
#[derive(Debug, Clone)]
pub struct PolySum {
    acc: Poly,
}

impl PolySum {
    pub fn new(n: usize) -> Self {
        PolySum { acc: Poly::zero(n) }
    }

    pub fn add(&mut self, p: &Poly) {
        assert_eq!(self.acc.n, p.n, "ambient mismatch in sum");
        for (m, c) in &p.terms {
            self.acc.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, p: &Poly, sign: i32) {
        assert_eq!(self.acc.n, p.n, "ambient mismatch in sum");
        let s = BigInt::from(sign);
        for (m, c) in &p.terms {
            self.acc.add_term(m.clone(), c * &s);
        }
    }

    pub fn finish(self) -> Poly {
        self.acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::x(3, i).unwrap()
    }
    fn y(j: usize) -> Poly {
        Poly::y(3, j).unwrap()
    }
    fn q(k: usize) -> Poly {
        Poly::q(3, k).unwrap()
    }

    #[test]
    fn ring_examples() {
        assert!((&(&x(1) - &y(1)) + &(&y(1) - &x(1))).is_zero());
        let prod = &(&x(1) - &y(1)) * &(&x(1) + &y(1));
        assert_eq!(prod, &x(1).pow(2) - &y(1).pow(2));
        let qq = &q(1) * &q(2);
        let (m, c) = qq.terms().next().unwrap();
        assert_eq!(m.qexp(), &[1, 1]);
        assert!(c.is_one());
        assert_eq!(
            Poly::x(3, 1).unwrap().checked_add(&Poly::x(4, 1).unwrap()),
            Err(PolyError::AmbientMismatch(3, 4))
        );
        assert!(Poly::q(3, 3).is_err());
        assert!(Poly::x(3, 0).is_err());
    }

    #[test]
    fn specialization() {
        assert_eq!((&x(1) - &y(1)).specialize(true, false), x(1));
        assert!((&q(1) * &(&x(1) - &y(2))).specialize(false, true).is_zero());
    }

    #[test]
    fn swapping() {
        assert_eq!(y(1).swap_y(1).unwrap(), y(2));
        let sym = &y(1) * &y(2);
        assert_eq!(sym.swap_y(1).unwrap(), sym);
        let f = &x(1) - &y(3);
        assert_eq!(f.swap_y(1).unwrap(), f);
        assert!(f.swap_y(3).is_err());
        assert!(f.swap_y(0).is_err());
    }

    #[test]
    fn divided_differences() {
        assert_eq!(y(1).divided_difference_y(1).unwrap(), Poly::one(3));
        assert_eq!(y(2).divided_difference_y(1).unwrap(), Poly::constant(3, -1));
        assert!((&y(1) * &y(2)).divided_difference_y(1).unwrap().is_zero());
        // ∂_1 y_1^3 = y_1^2 + y_1 y_2 + y_2^2
        let expected = &(&y(1).pow(2) + &(&y(1) * &y(2))) + &y(2).pow(2);
        assert_eq!(y(1).pow(3).divided_difference_y(1).unwrap(), expected);
        // x and q are scalars for ∂^y
        let f = &(&x(2) * &q(1)) * &y(2);
        assert_eq!(f.divided_difference_y(2).unwrap(), &x(2) * &q(1));
    }

    #[test]
    fn counting() {
        let f = &x(1).pow(2) - &y(1).pow(2);
        let c = f.counts();
        assert_eq!((c.distinct, c.weighted), (2, BigUint::from(2u32)));
        let z = Poly::zero(3).counts();
        assert_eq!((z.distinct, z.weighted), (0, BigUint::zero()));
        let g = Poly::constant(3, -3) + x(1);
        assert_eq!(g.counts().weighted, BigUint::from(4u32));
    }

    #[test]
    fn text_rendering() {
        assert_eq!(Poly::zero(3).canonical_text(), "0");
        assert_eq!((&x(1) - &y(1)).canonical_text(), "x1 - y1");
        assert_eq!((&(&q(1) * &q(2)) - &q(1).pow(2)).canonical_text(), "-q1^2 + q1*q2");
        let f = &Poly::constant(3, 2) * &(&x(1) * &y(3).pow(2)) - Poly::constant(3, 5);
        assert_eq!(f.canonical_text(), "2*x1*y3^2 - 5");
    }

    #[test]
    fn json_round_trip() {
        let f = &(&x(1) - &y(2)) * &(&q(1) - &Poly::constant(3, 7));
        let text = f.to_json();
        assert!(text.starts_with("{\"n\":3,\"terms\":[{\"c\":"));
        assert_eq!(Poly::from_json(&text).unwrap(), f);
        assert!(Poly::from_json(r#"{"n":2,"terms":[{"c":"1","x":[1],"y":[0,0],"q":[0]}]}"#).is_err());
        assert!(Poly::from_json(r#"{"n":2,"terms":[{"c":"z","x":[1,0],"y":[0,0],"q":[0]}]}"#).is_err());
    }

    #[test]
    fn embedding_keeps_variables() {
        let f = &(&x(3) - &y(2)) * &q(2);
        let g = f.embed(5).unwrap();
        let expected = &(&Poly::x(5, 3).unwrap() - &Poly::y(5, 2).unwrap()) * &Poly::q(5, 2).unwrap();
        assert_eq!(g, expected);
        assert!(f.embed(2).is_err());
    }

    #[test]
    fn quantum_degree_counts_q_twice() {
        let f = &(&x(1) * &y(2)) * &q(1);
        assert_eq!(f.quantum_degrees(), vec![4]);
    }
}
