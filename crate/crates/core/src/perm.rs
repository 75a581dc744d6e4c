//! Permutations of `[n]` in one-line notation.
//!
//! Positions and values are 1-based everywhere. Transpositions act on the
//! right, so `w.swap_positions(a, b)` is `w * t_ab`: the entries in positions
//! `a` and `b` trade places.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("permutation must have at least one entry")]
    Empty,
    #[error("{0:?} is not a bijection of 1..=n")]
    NotABijection(Vec<usize>),
    #[error("index {index} out of range for size {n}")]
    OutOfRange { index: usize, n: usize },
    #[error("expected a < b, got a = {a}, b = {b}")]
    NotIncreasing { a: usize, b: usize },
    #[error("the identity permutation has no transition data")]
    IdentityPermutation,
    #[error("cannot parse permutation from {0:?}")]
    Parse(String),
}

/// A permutation `w` of `{1, ..., n}` stored as `w(1) w(2) ... w(n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        if images.is_empty() {
            return Err(PermError::Empty);
        }
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(PermError::NotABijection(images));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "identity of S_0 requested");
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// The longest element `n n-1 ... 1`.
    pub fn longest(n: usize) -> Self {
        assert!(n >= 1, "longest element of S_0 requested");
        Permutation {
            images: (1..=n).rev().collect(),
        }
    }

    /// The simple transposition `s_i` of `S_n`.
    pub fn simple(n: usize, i: usize) -> Result<Self, PermError> {
        Permutation::identity(n).swap_positions(i, i + 1)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `w(i)`, 1-based. Panics when `i` is out of range.
    pub fn at(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Number of inversions, which is the Coxeter length.
    pub fn length(&self) -> usize {
        let w = &self.images;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<(), PermError> {
        let n = self.n();
        for index in [a, b] {
            if index == 0 || index > n {
                return Err(PermError::OutOfRange { index, n });
            }
        }
        if a >= b {
            return Err(PermError::NotIncreasing { a, b });
        }
        Ok(())
    }

    /// `w * t_ab`.
    pub fn swap_positions(&self, a: usize, b: usize) -> Result<Permutation, PermError> {
        self.check_pair(a, b)?;
        let mut images = self.images.clone();
        images.swap(a - 1, b - 1);
        Ok(Permutation { images })
    }

    /// Whether `w t_ab` covers `w` in Bruhat order, i.e. `l(w t_ab) = l(w) + 1`.
    pub fn is_bruhat_cover(&self, a: usize, b: usize) -> Result<bool, PermError> {
        self.check_pair(a, b)?;
        let (wa, wb) = (self.at(a), self.at(b));
        Ok(wa < wb && (a + 1..b).all(|k| self.at(k) < wa || self.at(k) > wb))
    }

    /// Whether `l(w t_cd) = l(w) - l(t_cd)`, the quantum down-step in Monk's rule.
    pub fn is_quantum_lower(&self, c: usize, d: usize) -> Result<bool, PermError> {
        self.check_pair(c, d)?;
        let (wc, wd) = (self.at(c), self.at(d));
        Ok(wc > wd && (c + 1..d).all(|k| wc > self.at(k) && self.at(k) > wd))
    }

    /// Appends fixed points `n+1, ..., size`.
    pub fn embed(&self, size: usize) -> Result<Permutation, PermError> {
        if size < self.n() {
            return Err(PermError::OutOfRange {
                index: size,
                n: self.n(),
            });
        }
        let mut images = self.images.clone();
        images.extend(self.n() + 1..=size);
        Ok(Permutation { images })
    }

    /// One-line notation with trailing fixed points removed (at least one entry kept).
    pub fn trimmed_images(&self) -> &[usize] {
        let mut len = self.n();
        while len > 1 && self.images[len - 1] == len {
            len -= 1;
        }
        &self.images[..len]
    }

    /// The largest `i` with `w(i) != i`, or `None` for the identity.
    pub fn largest_moved_point(&self) -> Option<usize> {
        (1..=self.n()).rev().find(|&i| self.at(i) != i)
    }

    /// Positions `i` with `w(i) > w(i+1)`.
    pub fn descents(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.n()).filter(move |&i| self.at(i) > self.at(i + 1))
    }

    /// A reduced word `[a_1, ..., a_k]` with `w = s_{a_1} ... s_{a_k}`.
    ///
    /// Built from the right by stripping the first descent each time.
    pub fn reduced_word(&self) -> Vec<usize> {
        self.reduced_word_by(|w| w.descents().next())
    }

    /// Same as [`Permutation::reduced_word`] but strips the last descent.
    pub fn reduced_word_last_descent(&self) -> Vec<usize> {
        self.reduced_word_by(|w| w.descents().last())
    }

    fn reduced_word_by(&self, pick: impl Fn(&Permutation) -> Option<usize>) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::with_capacity(self.length());
        while let Some(i) = pick(&w) {
            w.images.swap(i - 1, i);
            word.push(i);
        }
        word.reverse();
        word
    }

    /// Composition `(self * other)(i) = self(other(i))`. Sizes must agree.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "composing permutations of different size");
        Permutation {
            images: other.images.iter().map(|&i| self.at(i)).collect(),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for v in &self.images {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts a digit string (`4213`) or comma-separated values (`10,2,1,...`),
    /// optionally wrapped in square brackets.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim();
        let body = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .unwrap_or(body)
            .trim();
        let parse_err = || PermError::Parse(s.to_string());
        let images: Vec<usize> = if body.contains(',') {
            body.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| parse_err()))
                .collect::<Result<_, _>>()?
        } else {
            if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit()) {
                return Err(parse_err());
            }
            body.chars()
                .map(|c| c.to_digit(10).unwrap() as usize)
                .collect()
        };
        Permutation::new(images)
    }
}

/// All of `S_n` in lexicographic one-line order.
pub fn symmetric_group(n: usize) -> SymmetricGroup {
    assert!(n >= 1, "S_0 requested");
    SymmetricGroup {
        next: Some((1..=n).collect()),
    }
}

pub struct SymmetricGroup {
    next: Option<Vec<usize>>,
}

impl Iterator for SymmetricGroup {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // standard next-permutation step
        if let Some(i) = (0..succ.len().saturating_sub(1))
            .rev()
            .find(|&i| succ[i] < succ[i + 1])
        {
            let j = (i + 1..succ.len()).rev().find(|&j| succ[j] > succ[i]).unwrap();
            succ.swap(i, j);
            succ[i + 1..].reverse();
            self.next = Some(succ);
        }
        Some(Permutation { images: current })
    }
}

/// Data attached to a non-identity `pi` for the transition recursion.
///
/// `n` is the largest moved point, `a = pi^{-1}(n)`, `b` maximizes `pi(b)`
/// over `a < b <= n`, `sigma = pi t_ab`, `m = sigma(a)`. `s` lists, in
/// decreasing order, the positions `c < a` with `sigma t_ca` a quantum
/// down-step of `sigma`, and `p[i] = sigma(s[i-1])` with `p[0] = m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionData {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub m: usize,
    pub sigma: Permutation,
    pub s: Vec<usize>,
    pub p: Vec<usize>,
}

impl TransitionData {
    pub fn new(pi: &Permutation) -> Result<Self, PermError> {
        let n = pi.largest_moved_point().ok_or(PermError::IdentityPermutation)?;
        let a = pi.inverse().at(n);
        let b = (a + 1..=n)
            .max_by_key(|&i| pi.at(i))
            .expect("a < n since pi(a) = n is not fixed");
        let sigma = pi.swap_positions(a, b)?;
        let m = sigma.at(a);
        let mut s = Vec::new();
        for c in (1..a).rev() {
            if sigma.is_quantum_lower(c, a)? {
                s.push(c);
            }
        }
        let p = std::iter::once(m)
            .chain(s.iter().map(|&c| sigma.at(c)))
            .collect();
        Ok(TransitionData {
            n,
            a,
            b,
            m,
            sigma,
            s,
            p,
        })
    }
}
