use std::fmt::Write;

use qbpd::diagram::{Diagram, Segment, Side};

const CELL: usize = 40;

/// Box-drawing rendering, one character per cell; dominoes show as `D` over `d`.
pub fn ascii(d: &Diagram) -> String {
    let mut s = String::new();
    for r in 1..=d.n() {
        for c in 1..=d.n() {
            let ch = if d.dominoes().contains(&(r, c)) {
                'D'
            } else if d.in_domino((r, c)) {
                'd'
            } else {
                d.tile((r, c)).glyph()
            };
            s.push(ch);
        }
        s.push('\n');
    }
    s
}

fn midpoint(x0: usize, y0: usize, side: Side) -> (usize, usize) {
    let h = CELL / 2;
    match side {
        Side::N => (x0 + h, y0),
        Side::S => (x0 + h, y0 + CELL),
        Side::E => (x0 + CELL, y0 + h),
        Side::W => (x0, y0 + h),
    }
}

// The cell corner shared by the two sides of an elbow.
fn corner(x0: usize, y0: usize, a: Side, b: Side) -> (usize, usize) {
    let x = if a == Side::E || b == Side::E { x0 + CELL } else { x0 };
    let y = if a == Side::S || b == Side::S { y0 + CELL } else { y0 };
    (x, y)
}

/// Self-contained SVG, 40 px per cell; elbows are quarter circles about the
/// cell corner they turn around.
pub fn svg(d: &Diagram) -> String {
    let size = d.n() * CELL;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect width="{size}" height="{size}" fill="white"/>"#);
    for &(r, c) in d.dominoes() {
        let (x, y) = ((c - 1) * CELL, (r - 1) * CELL);
        let _ = writeln!(
            s,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#f2d9a6" stroke="#a67c2e"/>"##,
            x + 4,
            y + 4,
            CELL - 8,
            2 * CELL - 8
        );
    }
    let _ = writeln!(s, r##"<g stroke="#999" stroke-width="1" fill="none">"##);
    for k in 0..=d.n() {
        let p = k * CELL;
        let _ = writeln!(s, r#"<line x1="{p}" y1="0" x2="{p}" y2="{size}"/>"#);
        let _ = writeln!(s, r#"<line x1="0" y1="{p}" x2="{size}" y2="{p}"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g stroke="#1f4fbf" stroke-width="3" fill="none">"##);
    for r in 1..=d.n() {
        for c in 1..=d.n() {
            let (x0, y0) = ((c - 1) * CELL, (r - 1) * CELL);
            for &seg in d.tile((r, c)).segments() {
                let (a, b) = seg.sides();
                let (ax, ay) = midpoint(x0, y0, a);
                let (bx, by) = midpoint(x0, y0, b);
                if matches!(seg, Segment::EW | Segment::NS) {
                    let _ = writeln!(s, r#"<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>"#);
                } else {
                    let (cx, cy) = corner(x0, y0, a, b);
                    let cross = (ax as i64 - cx as i64) * (by as i64 - cy as i64)
                        - (ay as i64 - cy as i64) * (bx as i64 - cx as i64);
                    let sweep = u8::from(cross > 0);
                    let rad = CELL / 2;
                    let _ = writeln!(
                        s,
                        r#"<path d="M {ax} {ay} A {rad} {rad} 0 0 {sweep} {bx} {by}"/>"#
                    );
                }
            }
        }
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_marks_dominoes() {
        let d = Diagram::from_text("3\n..R\n.RC\nRCC\n1,1\n").unwrap();
        assert_eq!(ascii(&d), "D·┌\nd┌┼\n┌┼┼\n");
    }

    #[test]
    fn svg_arcs_bend_inward() {
        let d = Diagram::from_text("1\nR\n").unwrap();
        let s = svg(&d);
        assert!(s.contains(r#"<path d="M 40 20 A 20 20 0 0 0 20 40"/>"#), "{s}");
        assert!(s.starts_with("<svg"));
    }
}
