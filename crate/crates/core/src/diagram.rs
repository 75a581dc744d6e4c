//! Tile grids, domino overlays and pipe tracing.
//!
//! Cells are `(row, column)`, 1-based, row 1 on top. A pipe enters the grid
//! from the east edge of its row and must leave through the south edge; in
//! between it may move west, north or south, never east.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::perm::Permutation;

pub type Cell = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    N,
    E,
    S,
    W,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::N => Side::S,
            Side::S => Side::N,
            Side::E => Side::W,
            Side::W => Side::E,
        }
    }
}

/// One pipe segment inside a cell, named by the two sides it joins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Segment {
    EW,
    NS,
    ES,
    WN,
    SW,
    NE,
}

impl Segment {
    pub fn sides(self) -> (Side, Side) {
        match self {
            Segment::EW => (Side::E, Side::W),
            Segment::NS => (Side::N, Side::S),
            Segment::ES => (Side::E, Side::S),
            Segment::WN => (Side::W, Side::N),
            Segment::SW => (Side::S, Side::W),
            Segment::NE => (Side::N, Side::E),
        }
    }

    pub fn joining(a: Side, b: Side) -> Option<Segment> {
        use Side::*;
        Some(match (a.min(b), a.max(b)) {
            (E, W) => Segment::EW,
            (N, S) => Segment::NS,
            (E, S) => Segment::ES,
            (N, W) => Segment::WN,
            (S, W) => Segment::SW,
            (N, E) => Segment::NE,
            _ => return None,
        })
    }

    /// The side a pipe leaves through after entering at `entry`.
    pub fn other_side(self, entry: Side) -> Option<Side> {
        let (a, b) = self.sides();
        if entry == a {
            Some(b)
        } else if entry == b {
            Some(a)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TileKind {
    Blank,
    /// `┌`
    ES,
    /// `┘`
    WN,
    /// `┐`
    SW,
    /// `└`
    NE,
    /// `─`
    EW,
    /// `│`
    NS,
    /// `┼`
    Cross,
}

impl TileKind {
    pub const ALL: [TileKind; 8] = [
        TileKind::Blank,
        TileKind::ES,
        TileKind::WN,
        TileKind::SW,
        TileKind::NE,
        TileKind::EW,
        TileKind::NS,
        TileKind::Cross,
    ];

    pub fn segments(self) -> &'static [Segment] {
        match self {
            TileKind::Blank => &[],
            TileKind::ES => &[Segment::ES],
            TileKind::WN => &[Segment::WN],
            TileKind::SW => &[Segment::SW],
            TileKind::NE => &[Segment::NE],
            TileKind::EW => &[Segment::EW],
            TileKind::NS => &[Segment::NS],
            TileKind::Cross => &[Segment::EW, Segment::NS],
        }
    }

    /// The tile holding exactly these segments, if that is a legal tile.
    pub fn from_segments(segments: &[Segment]) -> Option<TileKind> {
        let mut s = segments.to_vec();
        s.sort();
        Some(match s.as_slice() {
            [] => TileKind::Blank,
            [Segment::EW, Segment::NS] => TileKind::Cross,
            [one] => TileKind::single(*one),
            _ => return None,
        })
    }

    pub fn single(segment: Segment) -> TileKind {
        match segment {
            Segment::EW => TileKind::EW,
            Segment::NS => TileKind::NS,
            Segment::ES => TileKind::ES,
            Segment::WN => TileKind::WN,
            Segment::SW => TileKind::SW,
            Segment::NE => TileKind::NE,
        }
    }

    /// Adds a segment, returning `None` when the result is not a tile.
    pub fn with(self, segment: Segment) -> Option<TileKind> {
        let mut s = self.segments().to_vec();
        if s.contains(&segment) {
            return None;
        }
        s.push(segment);
        TileKind::from_segments(&s)
    }

    /// Removes a segment, returning `None` when it is not present.
    pub fn without(self, segment: Segment) -> Option<TileKind> {
        let s = self.segments();
        if !s.contains(&segment) {
            return None;
        }
        let rest: Vec<Segment> = s.iter().copied().filter(|&x| x != segment).collect();
        TileKind::from_segments(&rest)
    }

    /// Single-character code used by the text format.
    pub fn code(self) -> char {
        match self {
            TileKind::Blank => '.',
            TileKind::WN => 'J',
            TileKind::ES => 'R',
            TileKind::Cross => 'C',
            TileKind::EW => 'H',
            TileKind::NS => 'V',
            TileKind::SW => 'S',
            TileKind::NE => 'N',
        }
    }

    pub fn from_code(c: char) -> Option<TileKind> {
        TileKind::ALL.into_iter().find(|t| t.code() == c)
    }

    pub fn glyph(self) -> char {
        match self {
            TileKind::Blank => '·',
            TileKind::ES => '┌',
            TileKind::WN => '┘',
            TileKind::SW => '┐',
            TileKind::NE => '└',
            TileKind::EW => '─',
            TileKind::NS => '│',
            TileKind::Cross => '┼',
        }
    }
}

/// One cell of a pipe's route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub cell: Cell,
    pub entry: Side,
    pub exit: Side,
}

impl Step {
    pub fn segment(&self) -> Segment {
        Segment::joining(self.entry, self.exit).expect("entry and exit differ")
    }

    /// The pipe arrived from below, so it is travelling north here.
    pub fn is_upward(&self) -> bool {
        self.entry == Side::S
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PipeTrace {
    pub start_row: usize,
    pub steps: Vec<Step>,
    pub end_col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DominoProblem {
    OffGrid,
    CoversPipe,
    Overlaps,
}

/// A single reason a grid fails to be a QBPD.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    /// The pipe entered a cell through a side no segment touches.
    PipeStuck { pipe: usize, cell: Cell, side: Side },
    /// The pipe left through the north, east or west boundary.
    LeavesGrid { pipe: usize, cell: Cell, side: Side },
    MovesRightward { pipe: usize, from: Cell, to: Cell },
    /// The pipe ran for more steps than a route can have.
    Cycles { pipe: usize },
    UnusedSegment { cell: Cell, segment: Segment },
    SelfCrossing { pipe: usize, cell: Cell },
    DoubleCrossing { pipes: (usize, usize), cells: Vec<Cell> },
    BadDomino { cell: Cell, problem: DominoProblem },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PipeStuck { pipe, cell, side } => {
                write!(f, "pipe {pipe} stuck entering {cell:?} from {side:?}")
            }
            Violation::LeavesGrid { pipe, cell, side } => {
                write!(f, "pipe {pipe} leaves the grid at {cell:?} through {side:?}")
            }
            Violation::MovesRightward { pipe, from, to } => {
                write!(f, "pipe moves rightward: pipe {pipe} at {from:?},{to:?}")
            }
            Violation::Cycles { pipe } => write!(f, "pipe {pipe} does not terminate"),
            Violation::UnusedSegment { cell, segment } => {
                write!(f, "segment {segment:?} at {cell:?} belongs to no pipe")
            }
            Violation::SelfCrossing { pipe, cell } => {
                write!(f, "pipe {pipe} crosses itself at {cell:?}")
            }
            Violation::DoubleCrossing { pipes, cells } => write!(
                f,
                "pipes {} and {} cross more than once at {cells:?}",
                pipes.0, pipes.1
            ),
            Violation::BadDomino { cell, problem } => {
                write!(f, "domino at {cell:?} is invalid: {problem:?}")
            }
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("tracing stuck at {cell:?} on side {side:?}")]
    TracingStuck { cell: Cell, side: Side },
    #[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidDiagram(Vec<Violation>),
    #[error("diagram already carries dominoes")]
    HasDominoes,
    #[error("diagram does not fix its last point")]
    NotRestrictable,
    #[error("cannot parse diagram: {0}")]
    Parse(String),
}

/// An `n × n` tiling plus vertical dominoes; `(r, c)` in `dominoes` covers
/// `(r, c)` and `(r + 1, c)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    n: usize,
    tiles: Vec<TileKind>,
    dominoes: BTreeSet<Cell>,
}

impl Diagram {
    pub fn blank(n: usize) -> Self {
        assert!(n >= 1, "empty grid requested");
        Diagram {
            n,
            tiles: vec![TileKind::Blank; n * n],
            dominoes: BTreeSet::new(),
        }
    }

    /// Builds a grid from rows of tiles.
    pub fn from_rows(rows: Vec<Vec<TileKind>>) -> Result<Self, DiagramError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(DiagramError::Parse("grid must be square and nonempty".into()));
        }
        Ok(Diagram {
            n,
            tiles: rows.into_iter().flatten().collect(),
            dominoes: BTreeSet::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tile(&self, (r, c): Cell) -> TileKind {
        self.tiles[(r - 1) * self.n + (c - 1)]
    }

    pub fn set_tile(&mut self, (r, c): Cell, t: TileKind) {
        self.tiles[(r - 1) * self.n + (c - 1)] = t;
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> {
        let n = self.n;
        (1..=n).flat_map(move |r| (1..=n).map(move |c| (r, c)))
    }

    pub fn dominoes(&self) -> &BTreeSet<Cell> {
        &self.dominoes
    }

    pub fn is_unpaired(&self) -> bool {
        self.dominoes.is_empty()
    }

    /// Replaces the domino overlay. Placement is checked by validation.
    pub fn with_dominoes(&self, dominoes: impl IntoIterator<Item = Cell>) -> Diagram {
        Diagram {
            n: self.n,
            tiles: self.tiles.clone(),
            dominoes: dominoes.into_iter().collect(),
        }
    }

    pub fn without_dominoes(&self) -> Diagram {
        self.with_dominoes([])
    }

    /// Whether `cell` is covered by some domino.
    pub fn in_domino(&self, (r, c): Cell) -> bool {
        self.dominoes.contains(&(r, c)) || (r > 1 && self.dominoes.contains(&(r - 1, c)))
    }

    pub fn count(&self, kind: TileKind) -> usize {
        self.tiles.iter().filter(|&&t| t == kind).count()
    }

    /// The Rothe diagram of `w`, with corners smoothed into `┌` elbows.
    pub fn rothe(w: &Permutation) -> Diagram {
        let n = w.n();
        let inv = w.inverse();
        let mut d = Diagram::blank(n);
        for i in 1..=n {
            for j in 1..=n {
                let right = j > w.at(i);
                let below = inv.at(j) < i;
                let t = if j == w.at(i) {
                    TileKind::ES
                } else if right && below {
                    TileKind::Cross
                } else if right {
                    TileKind::EW
                } else if below {
                    TileKind::NS
                } else {
                    TileKind::Blank
                };
                d.set_tile((i, j), t);
            }
        }
        d
    }

    fn neighbour(&self, (r, c): Cell, exit: Side) -> Option<Cell> {
        match exit {
            Side::N => (r > 1).then(|| (r - 1, c)),
            Side::S => (r < self.n).then(|| (r + 1, c)),
            Side::W => (c > 1).then(|| (r, c - 1)),
            Side::E => (c < self.n).then(|| (r, c + 1)),
        }
    }

    fn exit_for(&self, cell: Cell, entry: Side) -> Option<Side> {
        let tile = self.tile(cell);
        if tile == TileKind::Cross {
            return Some(entry.opposite());
        }
        tile.segments().iter().find_map(|s| s.other_side(entry))
    }

    /// Follows the pipe entering row `row` from the east, refusing any
    /// eastward step.
    pub fn trace_pipe(&self, row: usize) -> Result<PipeTrace, DiagramError> {
        let n = self.n;
        let mut cell = (row, n);
        let mut entry = Side::E;
        let mut steps = Vec::new();
        loop {
            let exit = self
                .exit_for(cell, entry)
                .ok_or(DiagramError::TracingStuck { cell, side: entry })?;
            if exit == Side::E || steps.len() > n * n {
                return Err(DiagramError::TracingStuck { cell, side: exit });
            }
            steps.push(Step { cell, entry, exit });
            if exit == Side::S && cell.0 == n {
                return Ok(PipeTrace {
                    start_row: row,
                    steps,
                    end_col: cell.1,
                });
            }
            cell = self
                .neighbour(cell, exit)
                .ok_or(DiagramError::TracingStuck { cell, side: exit })?;
            entry = exit.opposite();
        }
    }

    pub fn trace_pipes(&self) -> Result<Vec<PipeTrace>, DiagramError> {
        (1..=self.n).map(|r| self.trace_pipe(r)).collect()
    }

    /// Every way the grid fails to be a QBPD; empty when valid.
    pub fn violations(&self) -> Vec<Violation> {
        let n = self.n;
        let mut out = Vec::new();
        let mut used: HashMap<(Cell, Segment), usize> = HashMap::new();
        // for each crossing cell: (pipe on EW, pipe on NS)
        let mut crossings: HashMap<Cell, (Option<usize>, Option<usize>)> = HashMap::new();

        for pipe in 1..=n {
            let mut cell = (pipe, n);
            let mut entry = Side::E;
            let mut count = 0;
            loop {
                count += 1;
                if count > 2 * n * n + 1 {
                    out.push(Violation::Cycles { pipe });
                    break;
                }
                let Some(exit) = self.exit_for(cell, entry) else {
                    out.push(Violation::PipeStuck {
                        pipe,
                        cell,
                        side: entry,
                    });
                    break;
                };
                let segment = Segment::joining(entry, exit).expect("distinct sides");
                *used.entry((cell, segment)).or_default() += 1;
                if self.tile(cell) == TileKind::Cross {
                    let slot = crossings.entry(cell).or_default();
                    if segment == Segment::EW {
                        slot.0 = Some(pipe);
                    } else {
                        slot.1 = Some(pipe);
                    }
                }
                if exit == Side::S && cell.0 == n {
                    break;
                }
                match self.neighbour(cell, exit) {
                    None => {
                        out.push(Violation::LeavesGrid {
                            pipe,
                            cell,
                            side: exit,
                        });
                        break;
                    }
                    Some(next) => {
                        if exit == Side::E {
                            out.push(Violation::MovesRightward {
                                pipe,
                                from: cell,
                                to: next,
                            });
                        }
                        cell = next;
                        entry = exit.opposite();
                    }
                }
            }
        }

        for cell in self.cells() {
            for &segment in self.tile(cell).segments() {
                if !used.contains_key(&(cell, segment)) {
                    out.push(Violation::UnusedSegment { cell, segment });
                }
            }
        }

        let mut pair_cells: HashMap<(usize, usize), Vec<Cell>> = HashMap::new();
        let mut cross_cells: Vec<_> = crossings.into_iter().collect();
        cross_cells.sort();
        for (cell, pair) in cross_cells {
            if let (Some(h), Some(v)) = pair {
                if h == v {
                    out.push(Violation::SelfCrossing { pipe: h, cell });
                } else {
                    pair_cells.entry((h.min(v), h.max(v))).or_default().push(cell);
                }
            }
        }
        let mut doubles: Vec<_> = pair_cells.into_iter().filter(|(_, c)| c.len() > 1).collect();
        doubles.sort();
        for (pipes, cells) in doubles {
            out.push(Violation::DoubleCrossing { pipes, cells });
        }

        let mut covered = BTreeSet::new();
        for &(r, c) in &self.dominoes {
            let cell = (r, c);
            if r == 0 || c == 0 || c > n || r + 1 > n {
                out.push(Violation::BadDomino {
                    cell,
                    problem: DominoProblem::OffGrid,
                });
                continue;
            }
            if self.tile((r, c)) != TileKind::Blank || self.tile((r + 1, c)) != TileKind::Blank {
                out.push(Violation::BadDomino {
                    cell,
                    problem: DominoProblem::CoversPipe,
                });
            }
            if !covered.insert((r, c)) | !covered.insert((r + 1, c)) {
                out.push(Violation::BadDomino {
                    cell,
                    problem: DominoProblem::Overlaps,
                });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// Pipe traces of a valid diagram.
    pub fn validated_traces(&self) -> Result<Vec<PipeTrace>, DiagramError> {
        let v = self.violations();
        if !v.is_empty() {
            return Err(DiagramError::InvalidDiagram(v));
        }
        self.trace_pipes()
    }

    /// `w(i)` = column where the pipe from row `i` leaves.
    pub fn extract_permutation(&self) -> Result<Permutation, DiagramError> {
        let traces = self.validated_traces()?;
        Ok(permutation_of(&traces))
    }

    /// A valid diagram in which pipes only move down and left and which has
    /// no dominoes.
    pub fn is_classical(&self) -> bool {
        if !self.is_unpaired() || self.count(TileKind::SW) > 0 || self.count(TileKind::NE) > 0 {
            return false;
        }
        match self.validated_traces() {
            Ok(traces) => traces.iter().all(|t| t.steps.iter().all(|s| !s.is_upward())),
            Err(_) => false,
        }
    }

    pub fn blank_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells().filter(|&c| self.tile(c) == TileKind::Blank)
    }

    /// One diagram per matching of vertically adjacent blank cells,
    /// including the empty matching.
    pub fn domino_pairings(&self) -> Result<Vec<Diagram>, DiagramError> {
        if !self.is_unpaired() {
            return Err(DiagramError::HasDominoes);
        }
        // Vertical runs of blanks are independent paths; each contributes the
        // matchings of a path graph.
        let mut run_options: Vec<Vec<Vec<Cell>>> = Vec::new();
        for c in 1..=self.n {
            let mut r = 1;
            while r <= self.n {
                if self.tile((r, c)) != TileKind::Blank {
                    r += 1;
                    continue;
                }
                let start = r;
                while r <= self.n && self.tile((r, c)) == TileKind::Blank {
                    r += 1;
                }
                let len = r - start;
                if len >= 2 {
                    run_options.push(path_matchings(len, &|i| (start + i, c)));
                }
            }
        }
        let mut out = vec![Vec::new()];
        for options in run_options {
            let mut next = Vec::with_capacity(out.len() * options.len());
            for base in &out {
                for o in &options {
                    let mut v: Vec<Cell> = base.clone();
                    v.extend_from_slice(o);
                    next.push(v);
                }
            }
            out = next;
        }
        Ok(out.into_iter().map(|d| self.with_dominoes(d)).collect())
    }

    /// Adds row and column `n + 1`: the old rows run straight through the new
    /// column, the old columns straight down the new row, and the new pipe
    /// turns `┌` in the corner.
    pub fn embed(&self) -> Diagram {
        let n = self.n;
        let mut d = Diagram::blank(n + 1);
        for (r, c) in self.cells() {
            d.set_tile((r, c), self.tile((r, c)));
        }
        for k in 1..=n {
            d.set_tile((k, n + 1), TileKind::EW);
            d.set_tile((n + 1, k), TileKind::NS);
        }
        d.set_tile((n + 1, n + 1), TileKind::ES);
        d.dominoes = self.dominoes.clone();
        d
    }

    /// Inverse of [`Diagram::embed`] for a diagram whose last pipe is fixed.
    pub fn restrict(&self) -> Result<Diagram, DiagramError> {
        let n = self.n;
        if n < 2 {
            return Err(DiagramError::NotRestrictable);
        }
        let w = self.extract_permutation()?;
        if w.at(n) != n {
            return Err(DiagramError::NotRestrictable);
        }
        let border_ok = self.tile((n, n)) == TileKind::ES
            && (1..n).all(|k| self.tile((k, n)) == TileKind::EW && self.tile((n, k)) == TileKind::NS);
        if !border_ok {
            return Err(DiagramError::NotRestrictable);
        }
        let mut d = Diagram::blank(n - 1);
        for (r, c) in d.cells().collect::<Vec<_>>() {
            d.set_tile((r, c), self.tile((r, c)));
        }
        d.dominoes = self.dominoes.clone();
        Ok(d)
    }

    /// Injective byte encoding: size, row-major tile codes, then domino cells.
    /// Blank sorts lowest.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(1 + self.tiles.len() + 2 * self.dominoes.len());
        key.push(self.n as u8);
        key.extend(self.tiles.iter().map(|t| t.code() as u8));
        for &(r, c) in &self.dominoes {
            key.push(r as u8);
            key.push(c as u8);
        }
        key
    }

    /// Text form: `n`, `n` rows of tile codes, then one `r,c` line per domino.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for r in 1..=self.n {
            for c in 1..=self.n {
                s.push(self.tile((r, c)).code());
            }
            s.push('\n');
        }
        for (r, c) in &self.dominoes {
            s.push_str(&format!("{r},{c}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Diagram, DiagramError> {
        let err = |m: &str| DiagramError::Parse(m.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| err("missing size line"))?
            .trim()
            .parse()
            .map_err(|_| err("size is not an integer"))?;
        if n == 0 || n > 255 {
            return Err(err("size out of range"));
        }
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines.next().ok_or_else(|| err("too few rows"))?.trim();
            let row: Vec<TileKind> = line
                .chars()
                .map(|ch| TileKind::from_code(ch).ok_or_else(|| err(&format!("bad tile code {ch:?}"))))
                .collect::<Result<_, _>>()?;
            if row.len() != n {
                return Err(err("row has the wrong width"));
            }
            rows.push(row);
        }
        let mut d = Diagram::from_rows(rows)?;
        for line in lines {
            let (r, c) = line
                .trim()
                .split_once(',')
                .ok_or_else(|| err("domino line must be r,c"))?;
            let r: usize = r.trim().parse().map_err(|_| err("bad domino row"))?;
            let c: usize = c.trim().parse().map_err(|_| err("bad domino column"))?;
            d.dominoes.insert((r, c));
        }
        Ok(d)
    }
}

/// The permutation read off a set of traces.
pub fn permutation_of(traces: &[PipeTrace]) -> Permutation {
    Permutation::new(traces.iter().map(|t| t.end_col).collect())
        .expect("valid traces end in distinct columns")
}

// Matchings of the path with `len` vertices; an edge (i, i+1) becomes a
// domino whose top cell is `cell(i)`.
fn path_matchings(len: usize, cell: &dyn Fn(usize) -> Cell) -> Vec<Vec<Cell>> {
    fn go(i: usize, len: usize, cur: &mut Vec<Cell>, out: &mut Vec<Vec<Cell>>, cell: &dyn Fn(usize) -> Cell) {
        if i + 1 >= len {
            out.push(cur.clone());
            return;
        }
        go(i + 1, len, cur, out, cell);
        cur.push(cell(i));
        go(i + 2, len, cur, out, cell);
        cur.pop();
    }
    let mut out = Vec::new();
    go(0, len, &mut Vec::new(), &mut out, cell);
    out
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram(\n{})", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::symmetric_group;

    fn d(text: &str) -> Diagram {
        Diagram::from_text(text).unwrap()
    }

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    const ROTHE_4213: &str = "4\n...R\n.RHC\nRCHC\nVVRC\n";
    const UPWARD_4213: &str = "4\nRHSR\nVRCC\nVVNC\nVVRC\n";

    #[test]
    fn tile_algebra() {
        assert_eq!(TileKind::EW.with(Segment::NS), Some(TileKind::Cross));
        assert_eq!(TileKind::NS.with(Segment::WN), None);
        assert_eq!(TileKind::Cross.without(Segment::NS), Some(TileKind::EW));
        assert_eq!(TileKind::ES.without(Segment::ES), Some(TileKind::Blank));
        assert_eq!(TileKind::ES.without(Segment::EW), None);
        for t in TileKind::ALL {
            assert_eq!(TileKind::from_code(t.code()), Some(t));
            assert_eq!(TileKind::from_segments(t.segments()), Some(t));
        }
    }

    #[test]
    fn rothe_identity_and_examples() {
        let id = Diagram::rothe(&Permutation::identity(4));
        assert_eq!(id.count(TileKind::Blank), 0);
        for i in 1..=4 {
            assert_eq!(id.tile((i, i)), TileKind::ES);
        }
        assert_eq!(id.tile((1, 3)), TileKind::EW);
        assert_eq!(id.tile((3, 1)), TileKind::NS);

        let r = Diagram::rothe(&perm("4213"));
        assert_eq!(r, d(ROTHE_4213));
        let blanks: Vec<Cell> = r.blank_cells().collect();
        assert_eq!(blanks, vec![(1, 1), (1, 2), (1, 3), (2, 1)]);

        let r = Diagram::rothe(&perm("321"));
        let blanks: Vec<Cell> = r.blank_cells().collect();
        assert_eq!(blanks, vec![(1, 1), (1, 2), (2, 1)]);
    }

    #[test]
    fn identity_traces() {
        let id = Diagram::rothe(&Permutation::identity(3));
        let traces = id.trace_pipes().unwrap();
        for (i, t) in traces.iter().enumerate() {
            let i = i + 1;
            assert_eq!(t.end_col, i);
            let turn = t.steps.iter().position(|s| s.exit == Side::S).unwrap();
            assert_eq!(t.steps[turn].cell, (i, i));
            assert!(t.steps[..turn].iter().all(|s| s.cell.0 == i && s.exit == Side::W));
            assert!(t.steps[turn + 1..].iter().all(|s| s.cell.1 == i && s.entry == Side::N));
        }
    }

    #[test]
    fn upward_pipe_passes_through_a_cross() {
        let grid = d(UPWARD_4213);
        let traces = grid.trace_pipes().unwrap();
        let pipe3 = &traces[2];
        let up: Vec<Cell> = pipe3.steps.iter().filter(|s| s.is_upward()).map(|s| s.cell).collect();
        assert_eq!(up, vec![(2, 3), (1, 3)]);
        assert_eq!(grid.tile((2, 3)), TileKind::Cross);
        assert_eq!(grid.tile((1, 3)), TileKind::SW);
        assert_eq!(grid.extract_permutation().unwrap(), perm("4213"));
    }

    #[test]
    fn north_east_elbow_in_last_column_gets_stuck() {
        let mut g = Diagram::rothe(&Permutation::identity(2));
        g.set_tile((2, 2), TileKind::NE);
        assert!(matches!(g.trace_pipes(), Err(DiagramError::TracingStuck { .. })));
        assert!(!g.is_valid());
    }

    #[test]
    fn rightward_step_is_reported() {
        let grid = d("5\nRHSRH\nVRJVR\nVNHCC\nVRHCC\nVVRCC\n");
        let v = grid.violations();
        assert!(
            v.contains(&Violation::MovesRightward {
                pipe: 3,
                from: (2, 2),
                to: (2, 3)
            }),
            "{v:?}"
        );
        assert!(v.iter().any(|x| x.to_string().contains("pipe moves rightward")));
    }

    #[test]
    fn double_crossing_is_reported() {
        let g = d("4\n..RH\n.RCH\nRCJR\nVVRC\n");
        let v = g.violations();
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(matches!(&v[0], Violation::DoubleCrossing { cells, .. } if cells.len() == 2));
        assert!(g.trace_pipes().is_ok());
        assert!(g.extract_permutation().is_err());
    }

    #[test]
    fn rothe_round_trip_through_s5() {
        for n in 1..=5 {
            for w in symmetric_group(n) {
                let r = Diagram::rothe(&w);
                assert!(r.is_valid(), "{w}");
                assert!(r.is_classical());
                assert_eq!(r.extract_permutation().unwrap(), w);
            }
        }
    }

    #[test]
    fn pairings() {
        let id = Diagram::rothe(&Permutation::identity(3));
        assert_eq!(id.domino_pairings().unwrap(), vec![id.clone()]);

        let r = Diagram::rothe(&perm("321"));
        let p = r.domino_pairings().unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.iter().any(|x| x.dominoes().contains(&(1, 1))));
        assert!(p.iter().all(|x| x.is_valid()));

        let mut col = Diagram::rothe(&perm("4213"));
        for r in 1..=3 {
            col.set_tile((r, 1), TileKind::Blank);
        }
        let p = col.domino_pairings().unwrap();
        assert_eq!(p.len(), 3);
        let sets: BTreeSet<Vec<Cell>> = p.iter().map(|x| x.dominoes().iter().copied().collect()).collect();
        assert_eq!(
            sets,
            BTreeSet::from([vec![], vec![(1, 1)], vec![(2, 1)]])
        );

        assert_eq!(p[1].domino_pairings(), Err(DiagramError::HasDominoes));
    }

    #[test]
    fn domino_checks() {
        let r = Diagram::rothe(&perm("4213"));
        assert!(r.with_dominoes([(1, 1)]).is_valid());
        assert!(!r.with_dominoes([(1, 2)]).is_valid());
        assert!(!r.with_dominoes([(4, 1)]).is_valid());
        let mut col = r.clone();
        col.set_tile((3, 1), TileKind::Blank);
        let v = col.with_dominoes([(1, 1), (2, 1)]).violations();
        assert!(v.iter().any(|x| matches!(x, Violation::BadDomino { problem: DominoProblem::Overlaps, .. })));
    }

    #[test]
    fn stability_embedding() {
        let r = Diagram::rothe(&perm("4213"));
        let e = r.embed();
        assert_eq!(e, Diagram::rothe(&perm("42135")));
        assert_eq!(e.restrict().unwrap(), r);

        let w = perm("21354");
        let fixed = perm("2134");
        assert_eq!(
            Diagram::rothe(&fixed.embed(5).unwrap()).restrict().unwrap(),
            Diagram::rothe(&fixed)
        );
        assert_eq!(Diagram::rothe(&w).restrict(), Err(DiagramError::NotRestrictable));
        assert_eq!(
            Diagram::rothe(&Permutation::longest(4)).restrict(),
            Err(DiagramError::NotRestrictable)
        );
    }

    #[test]
    fn keys_and_text() {
        let r = Diagram::rothe(&perm("4213"));
        assert_eq!(r.canonical_key(), r.clone().canonical_key());
        assert_ne!(r.canonical_key(), r.with_dominoes([(1, 1)]).canonical_key());
        assert_eq!(r.to_text(), ROTHE_4213);
        let paired = r.with_dominoes([(1, 1)]);
        assert_eq!(paired.to_text(), "4\n...R\n.RHC\nRCHC\nVVRC\n1,1\n");
        assert_eq!(d(&paired.to_text()), paired);
        assert!(Diagram::from_text("2\nRX\nVR\n").is_err());
        assert!(Diagram::from_text("2\nRH\n").is_err());
        assert!(Diagram::from_text("3\nRH\nVR\nVV\n").is_err());
    }
}
