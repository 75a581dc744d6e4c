use std::collections::HashMap;

use clap::ValueEnum;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qbpd::analysis::{qbpd_polynomial, verify_transition};
use qbpd::moves::brute_force_enumerate;
use qbpd::oracle::{monk_residual_with, quantum_double_schubert_defining};
use qbpd::{enumerate_qbpds, symmetric_group, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// QBPD sums equal the divided-difference formula.
    Theorem,
    /// QBPD sums satisfy the transition equation.
    Transition,
    /// QBPD sums satisfy Monk's rule.
    Monk,
    /// Move closure equals exhaustive path search.
    Closure,
    /// Adding a fixed point embeds diagrams and sums.
    Stability,
}

impl Check {
    pub fn max_n(self) -> usize {
        match self {
            Check::Theorem | Check::Transition | Check::Stability => 6,
            Check::Monk | Check::Closure => 5,
        }
    }
}

pub struct Report {
    pub checked: usize,
    pub failures: Vec<(Permutation, String)>,
}

/// The permutations a check runs over: all of `S_n`, or `sample` random ones.
pub fn targets(n: usize, sample: Option<usize>, seed: u64) -> Vec<Permutation> {
    match sample {
        None => symmetric_group(n).collect(),
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..k)
                .map(|_| {
                    let mut v: Vec<usize> = (1..=n).collect();
                    v.shuffle(&mut rng);
                    Permutation::new(v).expect("shuffle of 1..=n")
                })
                .collect()
        }
    }
}

fn one(check: Check, w: &Permutation) -> Option<String> {
    match check {
        Check::Theorem => {
            let t = qbpd_polynomial(w);
            let s = quantum_double_schubert_defining(w);
            (t != s).then(|| format!("QBPD sum {t} differs from {s}"))
        }
        Check::Transition => {
            if w.is_identity() {
                return None;
            }
            match verify_transition(w) {
                Ok(r) if r.is_zero() => None,
                Ok(r) => Some(format!("residual {r}")),
                Err(e) => Some(e.to_string()),
            }
        }
        Check::Monk => {
            let mut memo: HashMap<Permutation, qbpd::Poly> = HashMap::new();
            let mut value = |u: &Permutation| {
                memo.entry(u.clone()).or_insert_with(|| qbpd_polynomial(u)).clone()
            };
            for k in 1..w.n() {
                match monk_residual_with(k, w, &mut value) {
                    Ok(r) if r.is_zero() => {}
                    Ok(r) => return Some(format!("k={k}: residual {r}")),
                    Err(e) => return Some(e.to_string()),
                }
            }
            None
        }
        Check::Closure => {
            let closure = enumerate_qbpds(w);
            match brute_force_enumerate(w) {
                Ok(brute) if brute == closure => None,
                Ok(brute) => Some(format!(
                    "closure found {} diagrams, path search {}",
                    closure.len(),
                    brute.len()
                )),
                Err(e) => Some(e.to_string()),
            }
        }
        Check::Stability => {
            let big = w.embed(w.n() + 1).expect("embedding grows the size");
            let mut embedded: Vec<_> = enumerate_qbpds(w).iter().map(|d| d.embed()).collect();
            embedded.sort_by_cached_key(|d| d.canonical_key());
            if enumerate_qbpds(&big) != embedded {
                return Some("diagrams of the embedded permutation are not the embedded diagrams".into());
            }
            let lifted = qbpd_polynomial(w).embed(w.n() + 1).expect("embedding grows the size");
            (qbpd_polynomial(&big) != lifted).then(|| "sum does not embed".to_string())
        }
    }
}

pub fn run(check: Check, perms: &[Permutation]) -> Report {
    let results: Vec<Option<String>> = perms.par_iter().map(|w| one(check, w)).collect();
    let failures = perms
        .iter()
        .zip(results)
        .filter_map(|(w, r)| r.map(|msg| (w.clone(), msg)))
        .collect();
    Report {
        checked: perms.len(),
        failures,
    }
}
