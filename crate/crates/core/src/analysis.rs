//! Diagram weights, the generating sum over QBPDs, and cancellation counts.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Cell, Diagram, DiagramError, Side, TileKind};
use crate::moves::enumerate_qbpds;
use crate::oracle::{evaluate_expansion, sign, transition_expansion, OracleError};
use crate::perm::{symmetric_group, Permutation};
use crate::poly::{Poly, PolySum};

pub const SWEEP_LIMIT: usize = 6;

#[derive(Error, Debug)]
pub enum AnalysisError {
    #[error("sweeps are limited to n <= {limit} unless overridden, got {n}")]
    SizeLimit { n: usize, limit: usize },
    #[error("cannot build worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Cells contributing to a diagram's weight.
///
/// `e`: uncovered blanks, each giving `x_i - y_j`. `q`: domino tops and
/// crossings whose vertical strand runs upward, each giving `q_i`. `nq`: `┐`
/// elbows and upward `│` cells, each giving `-q_i`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightCells {
    pub e: BTreeSet<Cell>,
    pub q: BTreeSet<Cell>,
    pub nq: BTreeSet<Cell>,
}

impl WeightCells {
    /// `|E| + 2|Q| + 2|NQ|`, the degree with `deg q_i = 2`.
    pub fn degree(&self) -> usize {
        self.e.len() + 2 * (self.q.len() + self.nq.len())
    }
}

pub fn weight_cells(d: &Diagram) -> Result<WeightCells, DiagramError> {
    let traces = d.validated_traces()?;
    let mut cells = WeightCells::default();
    for cell in d.blank_cells() {
        if !d.in_domino(cell) {
            cells.e.insert(cell);
        }
    }
    cells.q.extend(d.dominoes().iter().copied());
    for step in traces.iter().flat_map(|t| &t.steps) {
        match d.tile(step.cell) {
            TileKind::SW => {
                cells.nq.insert(step.cell);
            }
            TileKind::NS if step.entry == Side::S => {
                cells.nq.insert(step.cell);
            }
            TileKind::Cross if step.entry == Side::S => {
                cells.q.insert(step.cell);
            }
            _ => {}
        }
    }
    Ok(cells)
}

/// Binomial weight `(-1)^|NQ| ∏_E (x_i - y_j) ∏_{Q ∪ NQ} q_i`.
pub fn bwt(d: &Diagram) -> Result<Poly, DiagramError> {
    let cells = weight_cells(d)?;
    Ok(product(d.n(), &cells, true))
}

/// Monomial weight: `bwt` with every `y_j` set to zero.
pub fn wt(d: &Diagram) -> Result<Poly, DiagramError> {
    let cells = weight_cells(d)?;
    Ok(product(d.n(), &cells, false))
}

fn product(n: usize, cells: &WeightCells, with_y: bool) -> Poly {
    let mut p = Poly::constant(n, sign(cells.nq.len()));
    for &(i, _) in cells.q.iter().chain(&cells.nq) {
        p = &p * &Poly::q(n, i).expect("row of a quantum cell is below n");
    }
    for &(i, j) in &cells.e {
        let f = if with_y {
            Poly::binomial(n, i, j)
        } else {
            Poly::x(n, i)
        };
        p = &p * &f.expect("cell inside the grid");
    }
    p
}

fn sum_weights<'a>(n: usize, diagrams: impl IntoIterator<Item = &'a Diagram>) -> Poly {
    let mut acc = PolySum::new(n);
    for d in diagrams {
        acc.add(&bwt(d).expect("enumeration yields valid diagrams"));
    }
    acc.finish()
}

/// `Σ bwt(P)` over all QBPDs of `w`, in ambient size `w.n()`.
pub fn qbpd_polynomial(w: &Permutation) -> Poly {
    sum_weights(w.n(), &enumerate_qbpds(w))
}

/// `Σ bwt(P)` over the diagrams of `w` in which pipes only move down and
/// left, with the `q` variables set to zero.
pub fn classical_polynomial(w: &Permutation) -> Poly {
    let diagrams = enumerate_qbpds(w);
    sum_weights(w.n(), diagrams.iter().filter(|d| d.is_classical())).specialize(false, true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CancellationStats {
    #[serde(serialize_with = "as_string")]
    pub perm: Permutation,
    pub poly_monomials: u64,
    pub qbpd_monomials: u64,
    pub cancellations: u64,
    pub qbpd_count: u64,
}

fn as_string<S: serde::Serializer>(p: &Permutation, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Monomials before and after cancellation.
///
/// A diagram expands into `2^|E|` signed unit monomials; the polynomial is
/// measured by the sum of absolute coefficients.
pub fn cancellation_stats(w: &Permutation) -> CancellationStats {
    let diagrams = enumerate_qbpds(w);
    let mut qbpd_monomials = 0u64;
    for d in &diagrams {
        let cells = weight_cells(d).expect("enumeration yields valid diagrams");
        qbpd_monomials += 1u64 << cells.e.len();
    }
    let poly = sum_weights(w.n(), &diagrams);
    let poly_monomials = poly
        .counts()
        .weighted
        .to_u64()
        .expect("monomial count fits in u64");
    let diff = qbpd_monomials
        .checked_sub(poly_monomials)
        .unwrap_or_else(|| panic!("{w}: polynomial has more monomials than its diagrams"));
    assert!(diff % 2 == 0, "{w}: odd monomial difference {diff}");
    CancellationStats {
        perm: w.clone(),
        poly_monomials,
        qbpd_monomials,
        cancellations: diff / 2,
        qbpd_count: diagrams.len() as u64,
    }
}

pub fn is_cancellation_free(w: &Permutation) -> bool {
    cancellation_stats(w).cancellations == 0
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SweepOptions {
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    /// Permit `n` above [`SWEEP_LIMIT`].
    pub allow_large: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub n: usize,
    pub total: u64,
    pub average: f64,
    /// Lexicographically smallest permutation attaining `max`; absent when
    /// nothing cancels.
    #[serde(serialize_with = "opt_as_string")]
    pub argmax: Option<Permutation>,
    pub max: u64,
    pub rows: Vec<CancellationStats>,
}

fn opt_as_string<S: serde::Serializer>(p: &Option<Permutation>, s: S) -> Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.serialize_str(&p.to_string()),
        None => s.serialize_none(),
    }
}

/// Runs `f` on a pool of `jobs` workers, or on the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, AnalysisError> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| AnalysisError::Pool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Cancellation statistics for every permutation of `S_n`, in lexicographic
/// order.
pub fn sweep(n: usize, opts: SweepOptions) -> Result<SweepSummary, AnalysisError> {
    if n > SWEEP_LIMIT && !opts.allow_large {
        return Err(AnalysisError::SizeLimit { n, limit: SWEEP_LIMIT });
    }
    let perms: Vec<Permutation> = symmetric_group(n).collect();
    let rows: Vec<CancellationStats> =
        with_jobs(opts.jobs, || perms.par_iter().map(cancellation_stats).collect())?;
    Ok(summarize(n, rows))
}

pub fn summarize(n: usize, rows: Vec<CancellationStats>) -> SweepSummary {
    let total = rows.iter().map(|r| r.cancellations).sum();
    let max = rows.iter().map(|r| r.cancellations).max().unwrap_or(0);
    let argmax = (max > 0)
        .then(|| rows.iter().filter(|r| r.cancellations == max).map(|r| r.perm.clone()).min())
        .flatten();
    SweepSummary {
        n,
        total,
        average: total as f64 / rows.len().max(1) as f64,
        argmax,
        max,
        rows,
    }
}

/// Left side minus right side of the transition equation for `pi`, with
/// every Schubert polynomial replaced by its QBPD sum.
pub fn verify_transition(pi: &Permutation) -> Result<Poly, AnalysisError> {
    let terms = transition_expansion(pi)?;
    let rhs = evaluate_expansion(pi.n(), &terms, &mut |w| qbpd_polynomial(w));
    Ok(&qbpd_polynomial(pi) - &rhs)
}
