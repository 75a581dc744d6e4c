//! Droop and lift moves, closure enumeration from the Rothe diagram, and an
//! independent path-search enumerator used to check the closure.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use thiserror::Error;

use crate::diagram::{Cell, Diagram, PipeTrace, Segment, Side, Step, TileKind, Violation};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Droop,
    Lift,
}

/// A rectangle reroute of the pipe starting in row `pipe`.
///
/// A droop moves the pipe's `┌` from `(r1, c1)` to `(r2, c2)`; a lift
/// replaces the run on row `r2` between `c1` and `c2` by a detour through
/// row `r1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RectMove {
    pub kind: MoveKind,
    pub r1: usize,
    pub c1: usize,
    pub r2: usize,
    pub c2: usize,
    pub pipe: usize,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    #[error("diagram carries dominoes")]
    HasDominoes,
    #[error("rectangle is empty or leaves the grid")]
    BadRectangle,
    #[error("pipe route does not match the move: {0}")]
    Shape(&'static str),
    #[error("no tile holds the rewritten segments at {0:?}")]
    IllegalTile(Cell),
    #[error("result is not a reduced QBPD: {0:?}")]
    Invalid(Vec<Violation>),
    #[error("result has a different permutation")]
    PermutationChanged,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("brute force is limited to n <= {limit}, got {n}")]
    SizeLimit { n: usize, limit: usize },
}

pub const BRUTE_FORCE_LIMIT: usize = 5;

fn trace_of(d: &Diagram, pipe: usize) -> Result<PipeTrace, Rejection> {
    if pipe == 0 || pipe > d.n() {
        return Err(Rejection::Shape("no such pipe"));
    }
    d.trace_pipe(pipe).map_err(|_| Rejection::Shape("pipe cannot be traced"))
}

fn check_rectangle(d: &Diagram, m: &RectMove) -> Result<(), Rejection> {
    let n = d.n();
    if !d.is_unpaired() {
        return Err(Rejection::HasDominoes);
    }
    if m.r1 == 0 || m.c1 == 0 || m.r1 >= m.r2 || m.c1 >= m.c2 || m.r2 > n || m.c2 > n {
        return Err(Rejection::BadRectangle);
    }
    Ok(())
}

// Removes the old steps, adds the new ones, then revalidates the whole grid.
fn rewrite(
    d: &Diagram,
    old: &[Step],
    new: &[(Cell, Segment)],
) -> Result<Diagram, Rejection> {
    let before = d.extract_permutation().map_err(|_| Rejection::Shape("input is not a QBPD"))?;
    let mut out = d.clone();
    for s in old {
        let t = out
            .tile(s.cell)
            .without(s.segment())
            .ok_or(Rejection::IllegalTile(s.cell))?;
        out.set_tile(s.cell, t);
    }
    for &(cell, seg) in new {
        let t = out.tile(cell).with(seg).ok_or(Rejection::IllegalTile(cell))?;
        out.set_tile(cell, t);
    }
    let v = out.violations();
    if !v.is_empty() {
        return Err(Rejection::Invalid(v));
    }
    let after = out.extract_permutation().map_err(|_| Rejection::PermutationChanged)?;
    if after != before {
        return Err(Rejection::PermutationChanged);
    }
    Ok(out)
}

fn step_at(trace: &PipeTrace, cell: Cell) -> Option<usize> {
    trace.steps.iter().position(|s| s.cell == cell)
}

pub fn apply_droop(d: &Diagram, m: &RectMove) -> Result<Diagram, Rejection> {
    check_rectangle(d, m)?;
    let RectMove { r1, c1, r2, c2, .. } = *m;
    let trace = trace_of(d, m.pipe)?;
    let k = step_at(&trace, (r1, c2)).ok_or(Rejection::Shape("pipe misses the entry cell"))?;
    let len = (c2 - c1) + (r2 - r1) + 1;
    let old = trace
        .steps
        .get(k..k + len)
        .ok_or(Rejection::Shape("route too short"))?;

    let entry = old[0];
    let entry_new = match entry.segment() {
        Segment::EW => Segment::ES,
        Segment::WN => Segment::NS,
        _ => return Err(Rejection::Shape("entry is neither ─ nor ┘")),
    };
    for (i, s) in old[1..c2 - c1].iter().enumerate() {
        if s.cell != (r1, c2 - 1 - i) || s.segment() != Segment::EW {
            return Err(Rejection::Shape("row run is not straight"));
        }
    }
    let corner = old[c2 - c1];
    if corner.cell != (r1, c1) || corner.segment() != Segment::ES {
        return Err(Rejection::Shape("no ┌ at the corner"));
    }
    for (i, s) in old[c2 - c1 + 1..len - 1].iter().enumerate() {
        if s.cell != (r1 + 1 + i, c1) || s.entry != Side::N || s.segment() != Segment::NS {
            return Err(Rejection::Shape("column run is not straight down"));
        }
    }
    let exit = old[len - 1];
    if exit.cell != (r2, c1) || exit.entry != Side::N {
        return Err(Rejection::Shape("route leaves the rectangle early"));
    }
    let exit_new = match exit.segment() {
        Segment::NS => Segment::ES,
        Segment::WN => Segment::EW,
        _ => return Err(Rejection::Shape("exit is neither │ nor ┘")),
    };
    if d.tile((r2, c2)) != TileKind::Blank {
        return Err(Rejection::IllegalTile((r2, c2)));
    }

    let mut new = vec![((r1, c2), entry_new)];
    new.extend((r1 + 1..r2).map(|r| ((r, c2), Segment::NS)));
    new.push(((r2, c2), Segment::WN));
    new.extend((c1 + 1..c2).map(|j| ((r2, j), Segment::EW)));
    new.push(((r2, c1), exit_new));
    rewrite(d, old, &new)
}

pub fn apply_lift(d: &Diagram, m: &RectMove) -> Result<Diagram, Rejection> {
    check_rectangle(d, m)?;
    let RectMove { r1, c1, r2, c2, .. } = *m;
    let trace = trace_of(d, m.pipe)?;
    let k = step_at(&trace, (r2, c2)).ok_or(Rejection::Shape("pipe misses the entry cell"))?;
    let len = c2 - c1 + 1;
    let old = trace
        .steps
        .get(k..k + len)
        .ok_or(Rejection::Shape("route too short"))?;

    let entry_new = match old[0].segment() {
        Segment::EW => Segment::NE,
        Segment::SW => Segment::NS,
        _ => return Err(Rejection::Shape("entry is neither ─ nor ┐")),
    };
    for (i, s) in old[1..len - 1].iter().enumerate() {
        if s.cell != (r2, c2 - 1 - i) || s.segment() != Segment::EW {
            return Err(Rejection::Shape("row run is not straight"));
        }
    }
    let exit = old[len - 1];
    if exit.cell != (r2, c1) || exit.entry != Side::E {
        return Err(Rejection::Shape("run does not reach the exit cell"));
    }
    let exit_new = match exit.segment() {
        Segment::EW => Segment::WN,
        Segment::ES => Segment::NS,
        _ => return Err(Rejection::Shape("exit is neither ─ nor ┌")),
    };

    let mut new = vec![((r2, c2), entry_new)];
    new.extend((r1 + 1..r2).map(|r| ((r, c2), Segment::NS)));
    new.push(((r1, c2), Segment::SW));
    new.extend((c1 + 1..c2).map(|j| ((r1, j), Segment::EW)));
    new.push(((r1, c1), Segment::ES));
    new.extend((r1 + 1..r2).map(|r| ((r, c1), Segment::NS)));
    new.push(((r2, c1), exit_new));
    rewrite(d, old, &new)
}

pub fn apply_move(d: &Diagram, m: &RectMove) -> Result<Diagram, Rejection> {
    match m.kind {
        MoveKind::Droop => apply_droop(d, m),
        MoveKind::Lift => apply_lift(d, m),
    }
}

/// Rectangles whose corners sit on the right features of some pipe: a `┌`
/// for droops, the ends of a horizontal run for lifts. The far corner must
/// be blank, since only a blank cell can take a new elbow.
pub fn candidate_moves(d: &Diagram, traces: &[PipeTrace]) -> Vec<RectMove> {
    let mut out = Vec::new();
    for t in traces {
        let pipe = t.start_row;
        let steps = &t.steps;
        for (k, s) in steps.iter().enumerate() {
            // Droop: the ┌ at (r1, c1).
            if s.segment() == Segment::ES && s.entry == Side::E {
                let (r1, c1) = s.cell;
                let mut c2s = Vec::new();
                for p in steps[..k].iter().rev() {
                    if p.cell.0 != r1 || p.exit != Side::W {
                        break;
                    }
                    match p.segment() {
                        Segment::EW => c2s.push(p.cell.1),
                        Segment::WN => {
                            c2s.push(p.cell.1);
                            break;
                        }
                        _ => break,
                    }
                }
                let mut r2s = Vec::new();
                for p in &steps[k + 1..] {
                    if p.cell.1 != c1 || p.entry != Side::N {
                        break;
                    }
                    match p.segment() {
                        Segment::NS => r2s.push(p.cell.0),
                        Segment::WN => {
                            r2s.push(p.cell.0);
                            break;
                        }
                        _ => break,
                    }
                }
                for &c2 in &c2s {
                    for &r2 in &r2s {
                        if d.tile((r2, c2)) == TileKind::Blank {
                            out.push(RectMove { kind: MoveKind::Droop, r1, c1, r2, c2, pipe });
                        }
                    }
                }
            }
            // Lift: a run on row r2 entered at (r2, c2).
            if matches!(s.segment(), Segment::EW | Segment::SW) && s.exit == Side::W {
                let (r2, c2) = s.cell;
                let mut c1s = Vec::new();
                for p in &steps[k + 1..] {
                    if p.cell.0 != r2 || p.entry != Side::E {
                        break;
                    }
                    match p.segment() {
                        Segment::EW => c1s.push(p.cell.1),
                        Segment::ES => {
                            c1s.push(p.cell.1);
                            break;
                        }
                        _ => break,
                    }
                }
                for &c1 in &c1s {
                    for r1 in 1..r2 {
                        if d.tile((r1, c1)) == TileKind::Blank && d.tile((r1, c2)) == TileKind::Blank {
                            out.push(RectMove { kind: MoveKind::Lift, r1, c1, r2, c2, pipe });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Every diagram one accepted move away from `d`.
pub fn successors(d: &Diagram) -> Vec<Diagram> {
    let Ok(traces) = d.trace_pipes() else {
        return Vec::new();
    };
    candidate_moves(d, &traces)
        .iter()
        .filter_map(|m| apply_move(d, m).ok())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Level by level, each level expanded in parallel.
    BreadthFirst,
    /// Sequential stack.
    DepthFirst,
}

fn sorted(mut v: Vec<Diagram>) -> Vec<Diagram> {
    v.sort_by_cached_key(|d| d.canonical_key());
    v
}

/// Unpaired QBPDs of `w`, in canonical-key order.
pub fn enumerate_unpaired(w: &Permutation) -> Vec<Diagram> {
    enumerate_unpaired_with(w, Strategy::BreadthFirst)
}

pub fn enumerate_unpaired_with(w: &Permutation, strategy: Strategy) -> Vec<Diagram> {
    let start = Diagram::rothe(w);
    let mut seen: HashSet<Diagram> = HashSet::from([start.clone()]);
    match strategy {
        Strategy::BreadthFirst => {
            let mut frontier = vec![start];
            while !frontier.is_empty() {
                let next: Vec<Diagram> = frontier.par_iter().flat_map_iter(successors).collect();
                frontier = next.into_iter().filter(|d| seen.insert(d.clone())).collect();
            }
        }
        Strategy::DepthFirst => {
            let mut stack = VecDeque::from([start]);
            while let Some(d) = stack.pop_back() {
                for s in successors(&d) {
                    if seen.insert(s.clone()) {
                        stack.push_back(s);
                    }
                }
            }
        }
    }
    sorted(seen.into_iter().collect())
}

/// All QBPDs of `w`, in canonical-key order.
pub fn enumerate_qbpds(w: &Permutation) -> Vec<Diagram> {
    let all = enumerate_unpaired(w)
        .iter()
        .flat_map(|d| d.domino_pairings().expect("closure yields unpaired diagrams"))
        .collect();
    sorted(all)
}

/// Exhaustive path search, independent of the move machinery.
///
/// Every pipe visits each column at most once, travelling west, so a route is
/// the row at which it leaves each column to the right of its exit column.
pub fn brute_force_enumerate(w: &Permutation) -> Result<Vec<Diagram>, EnumerationError> {
    let n = w.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(EnumerationError::SizeLimit { n, limit: BRUTE_FORCE_LIMIT });
    }
    let mut search = PathSearch {
        n,
        w: w.images().to_vec(),
        segs: vec![Vec::new(); n * n],
        owner: vec![Vec::new(); n * n],
        crossed: HashMap::new(),
        found: Vec::new(),
    };
    search.place_pipe(1);
    let mut out = Vec::new();
    for d in search.found {
        debug_assert!(d.is_valid());
        out.extend(d.domino_pairings().expect("search yields unpaired diagrams"));
    }
    Ok(sorted(out))
}

struct PathSearch {
    n: usize,
    w: Vec<usize>,
    segs: Vec<Vec<Segment>>,
    owner: Vec<Vec<usize>>,
    crossed: HashMap<(usize, usize), usize>,
    found: Vec<Diagram>,
}

impl PathSearch {
    fn idx(&self, (r, c): Cell) -> usize {
        (r - 1) * self.n + (c - 1)
    }

    // Adds a segment for `pipe`, or returns false leaving state unchanged.
    fn push(&mut self, cell: Cell, seg: Segment, pipe: usize) -> bool {
        let i = self.idx(cell);
        match self.segs[i].as_slice() {
            [] => {}
            [other] if TileKind::from_segments(&[*other, seg]) == Some(TileKind::Cross) => {
                let key = (self.owner[i][0], pipe);
                let count = self.crossed.entry(key).or_default();
                if *count >= 1 {
                    return false;
                }
                *count += 1;
            }
            _ => return false,
        }
        self.segs[i].push(seg);
        self.owner[i].push(pipe);
        true
    }

    fn pop(&mut self, cell: Cell) {
        let i = self.idx(cell);
        self.segs[i].pop();
        let pipe = self.owner[i].pop().expect("pop after push");
        if let Some(&other) = self.owner[i].first() {
            *self.crossed.get_mut(&(other, pipe)).expect("counted crossing") -= 1;
        }
    }

    // Pushes all segments or none; returns the cells pushed.
    fn push_all(&mut self, segs: &[(Cell, Segment)], pipe: usize) -> Option<Vec<Cell>> {
        let mut done = Vec::with_capacity(segs.len());
        for &(cell, seg) in segs {
            if !self.push(cell, seg, pipe) {
                for &c in done.iter().rev() {
                    self.pop(c);
                }
                return None;
            }
            done.push(cell);
        }
        Some(done)
    }

    fn place_pipe(&mut self, pipe: usize) {
        if pipe > self.n {
            let rows = (1..=self.n)
                .map(|r| {
                    (1..=self.n)
                        .map(|c| {
                            TileKind::from_segments(&self.segs[self.idx((r, c))])
                                .expect("search keeps tiles legal")
                        })
                        .collect()
                })
                .collect();
            self.found.push(Diagram::from_rows(rows).expect("square grid"));
            return;
        }
        self.route(pipe, pipe, self.n);
    }

    // The pipe enters column `col` from the east on row `row`.
    fn route(&mut self, pipe: usize, row: usize, col: usize) {
        let target = self.w[pipe - 1];
        if col == target {
            let mut segs = vec![((row, col), Segment::ES)];
            segs.extend((row + 1..=self.n).map(|r| ((r, col), Segment::NS)));
            if let Some(done) = self.push_all(&segs, pipe) {
                self.place_pipe(pipe + 1);
                for c in done.into_iter().rev() {
                    self.pop(c);
                }
            }
            return;
        }
        for out in 1..=self.n {
            let segs: Vec<(Cell, Segment)> = if out == row {
                vec![((row, col), Segment::EW)]
            } else if out > row {
                let mut v = vec![((row, col), Segment::ES)];
                v.extend((row + 1..out).map(|r| ((r, col), Segment::NS)));
                v.push(((out, col), Segment::WN));
                v
            } else {
                let mut v = vec![((row, col), Segment::NE)];
                v.extend((out + 1..row).rev().map(|r| ((r, col), Segment::NS)));
                v.push(((out, col), Segment::SW));
                v
            };
            if let Some(done) = self.push_all(&segs, pipe) {
                self.route(pipe, out, col - 1);
                for c in done.into_iter().rev() {
                    self.pop(c);
                }
            }
        }
    }
}
