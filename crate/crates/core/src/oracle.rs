//! Quantum double Schubert polynomials computed straight from their algebraic
//! definitions, plus Monk's rule and the transition recursion.
//!
//! Nothing here looks at pipe dreams; this module is the reference the
//! combinatorial side is checked against.

use std::collections::HashMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::perm::{PermError, Permutation, TransitionData};
use crate::poly::{Poly, PolyError, PolySum};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("expected {expected} diagonal entries, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("index {index} out of range (n = {n})")]
    OutOfRange { index: usize, n: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The tridiagonal matrix with diagonal `z_1..z_k`, superdiagonal
/// `q_1..q_{k-1}` and subdiagonal `-1`.
#[derive(Debug, Clone)]
pub struct QuantumEMatrix {
    n: usize,
    diagonal: Vec<Poly>,
}

impl QuantumEMatrix {
    pub fn new(n: usize, diagonal: Vec<Poly>) -> Result<Self, OracleError> {
        if diagonal.len() > n {
            return Err(OracleError::OutOfRange {
                index: diagonal.len(),
                n,
            });
        }
        if let Some(bad) = diagonal.iter().find(|z| z.n() != n) {
            return Err(PolyError::AmbientMismatch(n, bad.n()).into());
        }
        Ok(QuantumEMatrix { n, diagonal })
    }

    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    /// Entry `(r, c)`, 1-based.
    pub fn entry(&self, r: usize, c: usize) -> Poly {
        let n = self.n;
        if r == c {
            self.diagonal[r - 1].clone()
        } else if c == r + 1 {
            Poly::q(n, r).expect("k <= n")
        } else if r == c + 1 {
            Poly::constant(n, -1)
        } else {
            Poly::zero(n)
        }
    }

    /// Coefficients of `λ^0..λ^k` in `det(1 + λG)`, via the continuant
    /// `D_j = (1 + λ z_j) D_{j-1} + λ² q_{j-1} D_{j-2}`.
    pub fn characteristic_coefficients(&self) -> Vec<Poly> {
        let n = self.n;
        let mut before: Vec<Poly> = vec![Poly::one(n)]; // D_{j-2}
        let mut current: Vec<Poly> = vec![Poly::one(n)]; // D_{j-1}
        for (j, z) in self.diagonal.iter().enumerate() {
            let mut next = vec![Poly::zero(n); current.len() + 1];
            for (deg, c) in current.iter().enumerate() {
                next[deg] = &next[deg] + c;
                next[deg + 1] = &next[deg + 1] + &(z * c);
            }
            if j >= 1 {
                let q = Poly::q(n, j).expect("k <= n");
                for (deg, c) in before.iter().enumerate() {
                    next[deg + 2] = &next[deg + 2] + &(&q * c);
                }
            }
            before = std::mem::replace(&mut current, next);
        }
        current
    }
}

/// `E_i^k(z_1, ..., z_k)`, the coefficient of `λ^i` in `det(1 + λ G_k)`.
pub fn quantum_e(n: usize, i: usize, k: usize, z: &[Poly]) -> Result<Poly, OracleError> {
    if z.len() != k {
        return Err(OracleError::SizeMismatch {
            expected: k,
            got: z.len(),
        });
    }
    if i > k {
        return Err(OracleError::OutOfRange { index: i, n: k });
    }
    let matrix = QuantumEMatrix::new(n, z.to_vec())?;
    Ok(matrix.characteristic_coefficients().swap_remove(i))
}

/// `∏_{k=1}^{n-1} E_k^k(x_1 - y_{n-k}, ..., x_k - y_{n-k})`.
pub fn quantum_top(n: usize) -> Poly {
    let mut acc = Poly::one(n);
    for k in 1..n {
        let z: Vec<Poly> = (1..=k)
            .map(|i| Poly::binomial(n, i, n - k).expect("indices within n"))
            .collect();
        let e = quantum_e(n, k, k, &z).expect("diagonal has k entries");
        acc = &acc * &e;
    }
    acc
}

/// `∏_{i+j<=n} (x_i - y_j)`.
pub fn classical_top(n: usize) -> Poly {
    let mut acc = Poly::one(n);
    for i in 1..n {
        for j in 1..=n - i {
            acc = &acc * &Poly::binomial(n, i, j).expect("indices within n");
        }
    }
    acc
}

/// `(-1)^{l(w0) - l(w)} ∂^y_{w w0} top` for the word chosen by `word_of`.
fn descend_from_top(
    w: &Permutation,
    top: &Poly,
    word_of: impl Fn(&Permutation) -> Vec<usize>,
) -> Result<Poly, OracleError> {
    let n = w.n();
    let w0 = Permutation::longest(n);
    let word = word_of(&w.compose(&w0));
    let f = top.divided_difference_word(&word)?;
    Ok(if (w0.length() - w.length()) % 2 == 1 {
        -f
    } else {
        f
    })
}

pub fn quantum_double_schubert_defining(w: &Permutation) -> Poly {
    quantum_double_schubert_with_word(w, Permutation::reduced_word)
}

/// The defining formula using a caller-chosen reduced word for `w w0`.
pub fn quantum_double_schubert_with_word(
    w: &Permutation,
    word_of: impl Fn(&Permutation) -> Vec<usize>,
) -> Poly {
    descend_from_top(w, &quantum_top(w.n()), word_of)
        .expect("divided differences of a top class are exact")
}

pub fn double_schubert_defining(w: &Permutation) -> Poly {
    descend_from_top(w, &classical_top(w.n()), Permutation::reduced_word)
        .expect("divided differences of a top class are exact")
}

/// Defining-formula polynomials for all of `S_n` sharing one top class.
pub fn quantum_double_schubert_all(n: usize) -> HashMap<Permutation, Poly> {
    let top = quantum_top(n);
    crate::perm::symmetric_group(n)
        .map(|w| {
            let f = descend_from_top(&w, &top, Permutation::reduced_word)
                .expect("divided differences of a top class are exact");
            (w, f)
        })
        .collect()
}

/// `q_c q_{c+1} ... q_{d-1}` in ambient size `n`.
pub fn q_interval(n: usize, c: usize, d: usize) -> Result<Poly, OracleError> {
    if c == 0 || c >= d || d > n {
        return Err(OracleError::OutOfRange { index: d, n });
    }
    let mut acc = Poly::one(n);
    for k in c..d {
        acc = &acc * &Poly::q(n, k)?;
    }
    Ok(acc)
}

/// LHS − RHS of Monk's rule for `S^q_{s_k} S^q_w`, all terms from the
/// defining formula.
///
/// `w` is read as an element of `S_∞`: the product of two polynomials of
/// `S_n` can involve `S^q_{w t_{a,n+1}}`, so everything is evaluated after
/// embedding `w` into `S_{n+1}`. The residual lives in that larger ring.
pub fn monk_residual(k: usize, w: &Permutation) -> Result<Poly, OracleError> {
    monk_residual_with(k, w, &mut |u| quantum_double_schubert_defining(u))
}

/// [`monk_residual`] with a caller-supplied `S^q`; `schubert` receives
/// permutations of `S_{n+1}`.
pub fn monk_residual_with(
    k: usize,
    w: &Permutation,
    schubert: &mut dyn FnMut(&Permutation) -> Poly,
) -> Result<Poly, OracleError> {
    if k == 0 || k >= w.n() {
        return Err(OracleError::OutOfRange { index: k, n: w.n() });
    }
    let w = &w.embed(w.n() + 1)?;
    let n = w.n();
    let sw = schubert(w);
    let lhs = &schubert(&Permutation::simple(n, k)?) * &sw;
    let mut rhs = PolySum::new(n);
    for a in 1..=k {
        for b in k + 1..=n {
            if w.is_bruhat_cover(a, b)? {
                rhs.add(&schubert(&w.swap_positions(a, b)?));
            }
            if w.is_quantum_lower(a, b)? {
                rhs.add(&(&q_interval(n, a, b)? * &schubert(&w.swap_positions(a, b)?)));
            }
        }
    }
    let mut ys = Poly::zero(n);
    for i in 1..=k {
        ys = &ys + &(&Poly::y(n, w.at(i))? - &Poly::y(n, i)?);
    }
    rhs.add(&(&ys * &sw));
    Ok(&lhs - &rhs.finish())
}

/// One term `coefficient * S^q_perm` on the right side of the transition
/// equation.
#[derive(Debug, Clone)]
pub struct TransitionTerm {
    pub coefficient: Poly,
    pub perm: Permutation,
}

/// Right-hand side of the transition equation for `pi`, with every
/// permutation embedded into `S_n` for `n = pi.n()`:
///
/// `(x_a - y_{σ(a)}) S_σ + Σ_{c<a, σt_ca ⋗ σ} S_{σt_ca}
///   - Σ_{a<c, σt_ac ⊲ σ} q_ac S_{σt_ac} + Σ_{c<a, σt_ca ⊲ σ} q_ca S_{σt_ca}`.
pub fn transition_expansion(pi: &Permutation) -> Result<Vec<TransitionTerm>, OracleError> {
    let n = pi.n();
    let data = TransitionData::new(pi)?;
    let (a, sigma) = (data.a, &data.sigma);
    let mut terms = vec![TransitionTerm {
        coefficient: Poly::binomial(n, a, sigma.at(a))?,
        perm: sigma.clone(),
    }];
    for c in 1..a {
        if sigma.is_bruhat_cover(c, a)? {
            terms.push(TransitionTerm {
                coefficient: Poly::one(n),
                perm: sigma.swap_positions(c, a)?,
            });
        }
    }
    for c in a + 1..=n {
        if sigma.is_quantum_lower(a, c)? {
            terms.push(TransitionTerm {
                coefficient: -q_interval(n, a, c)?,
                perm: sigma.swap_positions(a, c)?,
            });
        }
    }
    for c in 1..a {
        if sigma.is_quantum_lower(c, a)? {
            terms.push(TransitionTerm {
                coefficient: q_interval(n, c, a)?,
                perm: sigma.swap_positions(c, a)?,
            });
        }
    }
    Ok(terms)
}

/// Sums `coefficient * value(perm)` over a transition expansion.
pub fn evaluate_expansion(
    n: usize,
    terms: &[TransitionTerm],
    value: &mut dyn FnMut(&Permutation) -> Poly,
) -> Poly {
    let mut sum = PolySum::new(n);
    for t in terms {
        sum.add(&(&t.coefficient * &value(&t.perm)));
    }
    sum.finish()
}

/// Computes `S^q_w` by the transition recursion, memoized on the one-line
/// notation with trailing fixed points trimmed.
#[derive(Debug, Default)]
pub struct TransitionOracle {
    memo: HashMap<Vec<usize>, Poly>,
}

impl TransitionOracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// `S^q_w` in ambient size `w.n()`.
    pub fn get(&mut self, w: &Permutation) -> Poly {
        let trimmed = Permutation::new(w.trimmed_images().to_vec()).expect("prefix of a bijection");
        self.compute(&trimmed)
            .embed(w.n())
            .expect("trimmed size is at most n")
    }

    // Stored polynomials live in the ambient ring of the trimmed permutation.
    fn compute(&mut self, w: &Permutation) -> Poly {
        if let Some(p) = self.memo.get(w.images()) {
            return p.clone();
        }
        let n = w.n();
        let value = if w.is_identity() {
            Poly::one(n)
        } else {
            let terms = transition_expansion(w).expect("w is not the identity");
            let mut acc = PolySum::new(n);
            for t in &terms {
                let sub = self.get(&t.perm);
                acc.add(&(&t.coefficient * &sub));
            }
            acc.finish()
        };
        self.memo.insert(w.images().to_vec(), value.clone());
        value
    }
}

pub fn quantum_double_schubert_transition(w: &Permutation) -> Poly {
    TransitionOracle::new().get(w)
}

/// Sign `(-1)^k` as a [`BigInt`].
pub(crate) fn sign(k: usize) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::perm::symmetric_group;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    // Laplace expansion along the first row, independent of the continuant.
    fn det_by_expansion(m: &[Vec<Poly>], n: usize) -> Poly {
        if m.is_empty() {
            return Poly::one(n);
        }
        let mut acc = Poly::zero(n);
        for col in 0..m.len() {
            if m[0][col].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Poly>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != col)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][col] * &det_by_expansion(&minor, n);
            acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn continuant_matches_determinant_expansion() {
        // Check det(1 + λG) at λ = 1 and λ = 2 against the recurrence's coefficients.
        let n = 5;
        for k in 0..=4 {
            let z: Vec<Poly> = (1..=k).map(|i| Poly::binomial(n, i, 5 - i).unwrap()).collect();
            let g = QuantumEMatrix::new(n, z).unwrap();
            let coeffs = g.characteristic_coefficients();
            assert_eq!(coeffs.len(), k + 1);
            for lambda in [1i64, 2] {
                let l = Poly::constant(n, lambda);
                let m: Vec<Vec<Poly>> = (1..=k)
                    .map(|r| {
                        (1..=k)
                            .map(|c| {
                                let id = if r == c { Poly::one(n) } else { Poly::zero(n) };
                                &id + &(&l * &g.entry(r, c))
                            })
                            .collect()
                    })
                    .collect();
                let det = det_by_expansion(&m, n);
                let mut series = Poly::zero(n);
                for (i, c) in coeffs.iter().enumerate() {
                    series = &series + &(&l.pow(i as u32) * c);
                }
                assert_eq!(det, series, "k = {k}, λ = {lambda}");
            }
        }
    }

    #[test]
    fn quantum_e_examples() {
        let n = 3;
        let z1 = Poly::x(n, 1).unwrap();
        let z2 = Poly::x(n, 2).unwrap();
        let zs = [z1.clone(), z2.clone()];
        assert_eq!(quantum_e(n, 0, 2, &zs).unwrap(), Poly::one(n));
        assert_eq!(quantum_e(n, 1, 2, &zs).unwrap(), &z1 + &z2);
        assert_eq!(
            quantum_e(n, 2, 2, &zs).unwrap(),
            &(&z1 * &z2) + &Poly::q(n, 1).unwrap()
        );
        assert!(matches!(
            quantum_e(n, 1, 3, &zs),
            Err(OracleError::SizeMismatch { expected: 3, got: 2 })
        ));
        assert_eq!(quantum_e(n, 0, 0, &[]).unwrap(), Poly::one(n));
    }

    #[test]
    fn matrix_is_tridiagonal() {
        let n = 4;
        let z: Vec<Poly> = (1..=4).map(|i| Poly::x(n, i).unwrap()).collect();
        let g = QuantumEMatrix::new(n, z).unwrap();
        for r in 1..=4usize {
            for c in 1..=4usize {
                if r.abs_diff(c) > 1 {
                    assert!(g.entry(r, c).is_zero());
                }
            }
        }
        assert_eq!(g.entry(2, 1), Poly::constant(n, -1));
        assert_eq!(g.entry(2, 3), Poly::q(n, 2).unwrap());
    }

    #[test]
    fn small_quantum_double_schubert() {
        let n = 2;
        assert_eq!(
            quantum_double_schubert_defining(&perm("21")),
            Poly::binomial(n, 1, 1).unwrap()
        );
        let n = 3;
        let b = |i, j| Poly::binomial(n, i, j).unwrap();
        let expected = &b(1, 2) * &(&(&b(1, 1) * &b(2, 1)) + &Poly::q(n, 1).unwrap());
        assert_eq!(quantum_double_schubert_defining(&perm("321")), expected);
        assert_eq!(quantum_double_schubert_defining(&perm("123")), Poly::one(3));
    }

    pub(crate) fn expected_4213_sum() -> Poly {
        let n = 4;
        let b = |i, j| Poly::binomial(n, i, j).unwrap();
        let q = |k| Poly::q(n, k).unwrap();
        let t1 = &(&(&b(1, 1) * &b(1, 2)) * &b(1, 3)) * &b(2, 1);
        let t2 = &(&q(1) * &b(1, 2)) * &b(1, 3);
        let t3 = &(&b(1, 1) * &b(2, 1)) * &(-&q(1));
        let t4 = &q(1) * &(-&q(1));
        let t5 = &(-&q(1)) * &q(2);
        t1 + t2 + t3 + t4 + t5
    }

    #[test]
    fn example_4213_from_definition() {
        let w = perm("4213");
        assert_eq!(quantum_double_schubert_defining(&w), expected_4213_sum());
        assert_eq!(quantum_double_schubert_transition(&w), expected_4213_sum());
    }

    #[test]
    fn classical_examples() {
        assert_eq!(double_schubert_defining(&Permutation::identity(3)), Poly::one(3));
        let n = 3;
        let b = |i, j| Poly::binomial(n, i, j).unwrap();
        assert_eq!(
            double_schubert_defining(&perm("321")),
            &(&b(1, 1) * &b(1, 2)) * &b(2, 1)
        );
        let n = 4;
        let b = |i, j| Poly::binomial(n, i, j).unwrap();
        assert_eq!(
            double_schubert_defining(&perm("4213")),
            &(&(&b(1, 1) * &b(1, 2)) * &b(1, 3)) * &b(2, 1)
        );
    }

    #[test]
    fn q_intervals() {
        let n = 4;
        assert_eq!(q_interval(n, 1, 2).unwrap(), Poly::q(n, 1).unwrap());
        assert_eq!(
            q_interval(n, 1, 3).unwrap(),
            &Poly::q(n, 1).unwrap() * &Poly::q(n, 2).unwrap()
        );
        assert!(q_interval(n, 2, 2).is_err());
        assert!(q_interval(n, 2, 5).is_err());
    }

    #[test]
    fn monk_small_cases() {
        assert!(monk_residual(1, &Permutation::identity(2)).unwrap().is_zero());
        assert!(monk_residual(1, &perm("213")).unwrap().is_zero());
        assert!(monk_residual(1, &perm("21")).unwrap().is_zero());
        assert!(monk_residual(0, &perm("213")).is_err());
        assert!(monk_residual(3, &perm("213")).is_err());
    }

    #[test]
    fn transition_small_cases() {
        assert_eq!(quantum_double_schubert_transition(&perm("1")), Poly::one(1));
        assert_eq!(
            quantum_double_schubert_transition(&perm("21")),
            Poly::binomial(2, 1, 1).unwrap()
        );
        // 3421 uses the q_ca correction term
        let terms = transition_expansion(&perm("3421")).unwrap();
        assert!(terms.iter().any(|t| t.perm == perm("2341")));
    }

    #[test]
    fn word_independence_in_s4() {
        for w in symmetric_group(4) {
            let first = quantum_double_schubert_with_word(&w, Permutation::reduced_word);
            let last = quantum_double_schubert_with_word(&w, Permutation::reduced_word_last_descent);
            assert_eq!(first, last, "{w}");
        }
    }

    #[test]
    fn oracles_agree_through_s4() {
        for n in 1..=4 {
            let mut rec = TransitionOracle::new();
            for w in symmetric_group(n) {
                assert_eq!(quantum_double_schubert_defining(&w), rec.get(&w), "{w}");
            }
        }
    }

    #[test]
    fn specialization_chain_in_s4() {
        for w in symmetric_group(4) {
            let quantum = quantum_double_schubert_defining(&w);
            let classical = double_schubert_defining(&w);
            assert_eq!(quantum.specialize(false, true), classical, "{w}");
            // single Schubert polynomials have nonnegative coefficients and
            // degree l(w)
            let single = quantum.specialize(true, true);
            assert_eq!(single, classical.specialize(true, false));
            assert!(single.terms().all(|(_, c)| c > &BigInt::from(0)));
            if !single.is_zero() {
                assert_eq!(single.quantum_degrees(), vec![w.length()]);
            }
        }
    }

    #[test]
    fn homogeneity_in_s5() {
        for (w, f) in quantum_double_schubert_all(5) {
            assert_eq!(f.quantum_degrees(), vec![w.length()], "{w}");
        }
    }

    #[test]
    fn monk_rule_in_s4() {
        let all = quantum_double_schubert_all(5);
        for w in symmetric_group(4) {
            for k in 1..=3 {
                let r = monk_residual_with(k, &w, &mut |u| all[u].clone()).unwrap();
                assert!(r.is_zero(), "k = {k}, w = {w}: {r}");
            }
        }
    }
}
