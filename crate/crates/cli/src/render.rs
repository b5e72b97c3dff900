//! SVG drawings of circled trees.
//!
//! Layout is by nested boxes: a circle is a padded box around the layout of
//! its content, and its grafts sit in a row above it. Boxes of distinct
//! circles are therefore nested or disjoint; [`Drawing::crossings`] checks it.

use std::fmt::Write as _;

use hyperop_core::circled::{CircleKind, CircledTree};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Style {
    /// Length of a bare edge segment.
    pub edge: f64,
    /// Horizontal gap between siblings.
    pub gap: f64,
    /// Padding between a circle and its content.
    pub pad: f64,
    pub labels: bool,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            edge: 20.0,
            gap: 12.0,
            pad: 8.0,
            labels: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    fn strictly_inside(&self, o: &Rect) -> bool {
        self.x > o.x && self.y > o.y && self.x + self.w < o.x + o.w && self.y + self.h < o.y + o.h
    }

    fn disjoint(&self, o: &Rect) -> bool {
        self.x + self.w < o.x || o.x + o.w < self.x || self.y + self.h < o.y || o.y + o.h < self.y
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Item {
    Line(f64, f64, f64, f64),
    Dot(f64, f64),
    Circle(Rect, CircleKind),
}

impl Item {
    fn shift(&self, dx: f64, dy: f64) -> Item {
        match self {
            Item::Line(a, b, c, d) => Item::Line(a + dx, b + dy, c + dx, d + dy),
            Item::Dot(a, b) => Item::Dot(a + dx, b + dy),
            Item::Circle(r, k) => Item::Circle(
                Rect {
                    x: r.x + dx,
                    y: r.y + dy,
                    ..r.clone()
                },
                *k,
            ),
        }
    }
}

/// A laid out term in local coordinates, `y` pointing up from the root.
struct Laid {
    w: f64,
    h: f64,
    root: f64,
    ports: Vec<f64>,
    items: Vec<Item>,
}

impl Laid {
    fn place(&self, dx: f64, dy: f64, into: &mut Vec<Item>) {
        into.extend(self.items.iter().map(|i| i.shift(dx, dy)));
    }
}

/// Lays `parts` side by side starting at height `base`; returns total width,
/// top height, roots and ports (ports lifted to the common top).
fn row(parts: &[Laid], base: f64, gap: f64, items: &mut Vec<Item>) -> (f64, f64, Vec<f64>, Vec<f64>) {
    let top = base + parts.iter().map(|p| p.h).fold(0.0, f64::max);
    let mut x = 0.0;
    let mut roots = Vec::new();
    let mut ports = Vec::new();
    for (n, p) in parts.iter().enumerate() {
        if n > 0 {
            x += gap;
        }
        p.place(x, base, items);
        roots.push(x + p.root);
        for &q in &p.ports {
            if base + p.h < top {
                items.push(Item::Line(x + q, base + p.h, x + q, top));
            }
            ports.push(x + q);
        }
        x += p.w;
    }
    (x, top, roots, ports)
}

fn shift_all(items: &mut [Item], dx: f64) {
    for i in items.iter_mut() {
        *i = i.shift(dx, 0.0);
    }
}

fn lay(c: &CircledTree, s: &Style) -> Laid {
    match c {
        CircledTree::Leaf => Laid {
            w: s.gap,
            h: s.edge,
            root: s.gap / 2.0,
            ports: vec![s.gap / 2.0],
            items: vec![Item::Line(s.gap / 2.0, 0.0, s.gap / 2.0, s.edge)],
        },
        CircledTree::Node(cs) if cs.is_empty() => {
            let x = s.gap / 2.0;
            Laid {
                w: s.gap,
                h: s.edge / 2.0,
                root: x,
                ports: Vec::new(),
                items: vec![Item::Line(x, 0.0, x, s.edge / 2.0), Item::Dot(x, s.edge / 2.0)],
            }
        }
        CircledTree::Node(cs) => {
            let parts: Vec<Laid> = cs.iter().map(|x| lay(x, s)).collect();
            let mut items = Vec::new();
            let vy = s.edge / 2.0;
            let (w, top, roots, ports) = row(&parts, vy + s.edge, s.gap, &mut items);
            let vx = (roots[0] + roots[roots.len() - 1]) / 2.0;
            items.push(Item::Line(vx, 0.0, vx, vy));
            for &r in &roots {
                items.push(Item::Line(vx, vy, r, vy + s.edge));
            }
            items.push(Item::Dot(vx, vy));
            Laid {
                w,
                h: top,
                root: vx,
                ports,
                items,
            }
        }
        CircledTree::Circ(circ) => {
            let inner = lay(&circ.content, s);
            let stem = s.edge / 2.0;
            let rect_w = inner.w + 2.0 * s.pad;
            let rect_h = inner.h + 2.0 * s.pad;
            let grafts: Vec<Laid> = circ.grafts.iter().map(|g| lay(g, s)).collect();
            let base = stem + rect_h + s.edge;
            let mut items = Vec::new();
            let (gw, top, roots, ports) = row(&grafts, base, s.gap, &mut items);
            let w = rect_w.max(gw);
            let (rx, gx) = ((w - rect_w) / 2.0, (w - gw) / 2.0);
            shift_all(&mut items, gx);
            inner.place(rx + s.pad, stem + s.pad, &mut items);
            let root = rx + s.pad + inner.root;
            items.push(Item::Line(root, 0.0, root, stem + s.pad));
            let rect_top = stem + rect_h;
            for (q, r) in inner.ports.iter().zip(&roots) {
                let px = rx + s.pad + q;
                items.push(Item::Line(px, stem + s.pad + inner.h, px, rect_top));
                items.push(Item::Line(px, rect_top, gx + r, base));
            }
            items.push(Item::Circle(
                Rect {
                    x: rx,
                    y: stem,
                    w: rect_w,
                    h: rect_h,
                },
                circ.kind,
            ));
            Laid {
                w,
                h: top.max(rect_top),
                root,
                ports: ports.iter().map(|p| p + gx).collect(),
                items,
            }
        }
    }
}

/// A finished layout.
pub struct Drawing {
    width: f64,
    height: f64,
    items: Vec<Item>,
    style: Style,
}

impl Drawing {
    pub fn new(c: &CircledTree, style: Style) -> Drawing {
        let laid = lay(c, &style);
        Drawing {
            width: laid.w,
            height: laid.h,
            items: laid.items,
            style,
        }
    }

    /// Circle boxes in drawing order.
    pub fn circles(&self) -> Vec<(&Rect, CircleKind)> {
        self.items
            .iter()
            .filter_map(|i| match i {
                Item::Circle(r, k) => Some((r, *k)),
                _ => None,
            })
            .collect()
    }

    /// Pairs of circles whose boxes neither nest nor stay apart.
    pub fn crossings(&self) -> Vec<(usize, usize)> {
        let cs = self.circles();
        let mut out = Vec::new();
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                let (a, b) = (cs[i].0, cs[j].0);
                if !(a.strictly_inside(b) || b.strictly_inside(a) || a.disjoint(b)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn to_svg(&self) -> String {
        let m = 10.0;
        let (w, h) = (self.width + 2.0 * m, self.height + 2.0 * m);
        // flip to screen coordinates
        let fx = |x: f64| x + m;
        let fy = |y: f64| h - m - y;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
        );
        let _ = writeln!(out, r#"<g fill="none" stroke="black" stroke-width="1">"#);
        for i in &self.items {
            if let Item::Line(a, b, c, d) = i {
                let _ = writeln!(out, r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/>"#, fx(*a), fy(*b), fx(*c), fy(*d));
            }
        }
        for (r, kind) in self.circles() {
            let rad = (r.w.min(r.h) / 2.0).min(3.0 * self.style.pad);
            let dash = if kind.is_white() { r#" stroke-dasharray="4 3""# } else { r#" stroke-width="1.5""# };
            let _ = writeln!(
                out,
                r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" rx="{rad:.1}"{dash}/>"#,
                fx(r.x),
                fy(r.y + r.h),
                r.w,
                r.h
            );
        }
        let _ = writeln!(out, "</g>");
        for i in &self.items {
            if let Item::Dot(a, b) = i {
                let _ = writeln!(out, r#"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="black"/>"#, fx(*a), fy(*b));
            }
        }
        if self.style.labels {
            for (r, kind) in self.circles() {
                if let CircleKind::White(l) = kind {
                    let _ = writeln!(
                        out,
                        r#"<text x="{:.1}" y="{:.1}" font-family="serif" font-size="9">{l}</text>"#,
                        fx(r.x) + 2.0,
                        fy(r.y + r.h) + 9.0
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperop_core::operad_h::identity_op;
    use hyperop_core::trees::corolla;

    fn ct(s: &str) -> CircledTree {
        s.parse().unwrap()
    }

    #[test]
    fn identity_on_a_corolla() {
        let c = identity_op(&corolla(2)).config().clone();
        let d = Drawing::new(&c, Style::default());
        let circles = d.circles();
        assert_eq!(circles.len(), 1);
        assert!(circles[0].1.is_white());
        let svg = d.to_svg();
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
        assert_eq!(svg.matches("<circle ").count(), 1);
        assert!(svg.contains(">1</text>"));
    }

    #[test]
    fn concentric_circles_nest() {
        let d = Drawing::new(&ct("{w2 {w1 | / |} / |}"), Style::default());
        let cs = d.circles();
        assert_eq!(cs.len(), 2);
        assert!(cs[0].0.strictly_inside(cs[1].0) || cs[1].0.strictly_inside(cs[0].0));
        assert_eq!(d.to_svg().matches("stroke-dasharray").count(), 2);
        assert!(d.crossings().is_empty());
    }

    #[test]
    fn five_circle_figure_has_no_crossings() {
        let fig = "{w1 (| {w2 {w3 (| | |) / (| |) | |} / | | | |}) / {w4 {w5 (| (| |)) / (|) | |} / | | |} | | | |}";
        let d = Drawing::new(&ct(fig), Style::default());
        assert_eq!(d.circles().len(), 5);
        assert!(d.crossings().is_empty());
    }

    #[test]
    fn output_is_deterministic_and_blacks_are_solid() {
        let c = ct("{w1 {b (|) / {w2 | / |}} / |}");
        let a = Drawing::new(&c, Style::default()).to_svg();
        assert_eq!(a, Drawing::new(&c, Style::default()).to_svg());
        assert!(a.contains(r#"stroke-width="1.5""#));
    }
}
