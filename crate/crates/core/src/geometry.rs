//! Geometry in the dynamical plane of `P(z) = z² − 1` and schematic layouts.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cells::Filtration;
use crate::error::{Error, Result};
use crate::forms::{csv_error, finish_csv, format_float};
use crate::graphdir::{self, Label, LabeledGraph};

pub type ComplexPoint = Complex64;

pub const MAX_ORBIT_DEPTH: usize = 24;

/// `P(z) = z² − 1`.
pub fn p_map(z: Complex64) -> Complex64 {
    z * z - 1.0
}

/// `(a, b) = ((1 − √5)/2, (1 + √5)/2)`.
pub fn fixed_points() -> (f64, f64) {
    let r = 5f64.sqrt();
    ((1.0 - r) / 2.0, (1.0 + r) / 2.0)
}

/// `P^(−n){a}`, in branch order: each point `z` of depth `k` is followed at
/// depth `k + 1` by `+√(z + 1)` and then `−√(z + 1)` (principal root).
pub fn backward_orbit(n: usize) -> Result<Vec<ComplexPoint>> {
    if n > MAX_ORBIT_DEPTH {
        return Err(Error::Capacity {
            what: "backward orbit depth",
            requested: n,
            limit: MAX_ORBIT_DEPTH,
        });
    }
    let mut points = vec![Complex64::new(fixed_points().0, 0.0)];
    for _ in 0..n {
        points = points
            .iter()
            .flat_map(|&z| {
                let r = (z + 1.0).sqrt();
                [r, -r]
            })
            .collect();
    }
    Ok(points)
}

/// Largest `|P^n(z) − a|` over the orbit.
pub fn orbit_residual(points: &[ComplexPoint], n: usize) -> f64 {
    let a = Complex64::new(fixed_points().0, 0.0);
    points
        .iter()
        .map(|&z| ((0..n).fold(z, |w, _| p_map(w)) - a).norm())
        .fold(0.0, f64::max)
}

/// Smallest distance between two points, or infinity for fewer than two.
pub fn min_separation(points: &[ComplexPoint]) -> f64 {
    let mut sorted = points.to_vec();
    sorted.sort_by(|x, y| x.re.total_cmp(&y.re));
    let mut best = f64::INFINITY;
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if sorted[j].re - sorted[i].re >= best {
                break;
            }
            best = best.min((sorted[j] - sorted[i]).norm());
        }
    }
    best
}

/// Share of `P^(−n){a}` with real part below `a`, an estimate of `μ_P(J_L)`.
pub fn left_piece_fraction(n: usize) -> Result<f64> {
    let a = fixed_points().0;
    let points = backward_orbit(n)?;
    Ok(points.iter().filter(|z| z.re < a).count() as f64 / points.len() as f64)
}

pub fn scatter_csv(points: &[ComplexPoint]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["re", "im"]).map_err(csv_error)?;
    for z in points {
        w.write_record([format_float(z.re), format_float(z.im)])
            .map_err(csv_error)?;
    }
    finish_csv(w)
}

/// A circle, or the part of it between two angles.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Shape {
    center: (f64, f64),
    radius: f64,
    /// Angle at the first and second endpoint; equal modulo 2π for loops.
    start: f64,
    end: f64,
}

impl Shape {
    fn point(&self, angle: f64) -> (f64, f64) {
        (
            self.center.0 + self.radius * angle.cos(),
            self.center.1 + self.radius * angle.sin(),
        )
    }

    fn loop_at(base: (f64, f64), outward: f64, radius: f64) -> Shape {
        Shape {
            center: (
                base.0 + radius * outward.cos(),
                base.1 + radius * outward.sin(),
            ),
            radius,
            start: outward + PI,
            end: outward + 3.0 * PI,
        }
    }

    /// The split vertex, the two arc halves and the attached loop. Loops have
    /// radius `1/3` of the circle they hang on, scaled by the span of the arc
    /// being split relative to a half circle.
    fn split(&self) -> ((f64, f64), [Shape; 3]) {
        let mid = (self.start + self.end) / 2.0;
        let w = self.point(mid);
        let span = (self.end - self.start).abs();
        let radius = self.radius * span.min(PI) / (3.0 * PI);
        let half = |start, end| Shape {
            start,
            end,
            ..*self
        };
        (
            w,
            [
                half(self.start, mid),
                half(mid, self.end),
                Shape::loop_at(w, mid, radius),
            ],
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub positions: Vec<(f64, f64)>,
}

impl Layout {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["vertex_id", "x", "y"]).map_err(csv_error)?;
        for (i, (x, y)) in self.positions.iter().enumerate() {
            w.write_record([i.to_string(), format_float(*x), format_float(*y)])
                .map_err(csv_error)?;
        }
        finish_csv(w)
    }

    /// Smallest distance between two vertices.
    pub fn min_separation(&self) -> f64 {
        let points: Vec<ComplexPoint> = self
            .positions
            .iter()
            .map(|&(x, y)| Complex64::new(x, y))
            .collect();
        min_separation(&points)
    }
}

/// `a` at `(−1, 0)`, `−a` at `(1, 0)`, the 1-arcs as the unit half circles and
/// the arms as circles of radius `1/3` outside them.
fn top_shapes() -> [Shape; 4] {
    [
        Shape {
            center: (0.0, 0.0),
            radius: 1.0,
            start: PI,
            end: 0.0,
        },
        Shape {
            center: (0.0, 0.0),
            radius: 1.0,
            start: PI,
            end: 2.0 * PI,
        },
        Shape::loop_at((-1.0, 0.0), PI, 1.0 / 3.0),
        Shape::loop_at((1.0, 0.0), 0.0, 1.0 / 3.0),
    ]
}

/// Layout of `G_n`: arc cells are circular arcs split at their angular
/// midpoint, loop cells are circles split at the point opposite their base.
pub fn layout_filtration(f: &Filtration) -> Layout {
    let mut positions = vec![(0.0, 0.0); f.vertex_count()];
    positions[0] = (-1.0, 0.0);
    positions[1] = (1.0, 0.0);
    let mut shapes: Vec<Shape> = top_shapes().to_vec();
    for level in 1..=f.level() {
        let mut next = Vec::with_capacity(shapes.len() * 3);
        for (cell, shape) in f.cells(level).iter().zip(&shapes) {
            let (w, children) = shape.split();
            if let Some(id) = cell.split {
                positions[id] = w;
            }
            next.extend(children);
        }
        shapes = next;
    }
    Layout { positions }
}

pub fn layout_cells(n: usize) -> Result<Layout> {
    Ok(layout_filtration(&Filtration::build(n)?))
}

/// Layout of `G′_n`, replaying the substitution edge by edge: `a` at
/// `(−1, 0)` carries the unit circle (B) and a circle of radius `1/3` (A).
pub fn layout_graph_directed(n: usize) -> Result<Layout> {
    if n > graphdir::MAX_GENERATION {
        return Err(Error::Capacity {
            what: "graph-directed generation",
            requested: n,
            limit: graphdir::MAX_GENERATION,
        });
    }
    let mut g: LabeledGraph = graphdir::seed_graph();
    let mut shapes = vec![
        Shape::loop_at((-1.0, 0.0), PI, 1.0 / 3.0),
        Shape::loop_at((-1.0, 0.0), 0.0, 1.0),
    ];
    let mut positions = vec![(-1.0, 0.0)];
    for _ in 0..n {
        let next = graphdir::substitute(&g);
        let mut next_shapes = Vec::with_capacity(next.edges.len());
        for (e, shape) in g.edges.iter().zip(&shapes) {
            match e.label {
                Label::A => next_shapes.push(*shape),
                Label::B => {
                    let (w, children) = shape.split();
                    positions.push(w);
                    next_shapes.extend(children);
                }
            }
        }
        debug_assert_eq!(next_shapes.len(), next.edges.len());
        debug_assert_eq!(positions.len(), next.vertex_count);
        g = next;
        shapes = next_shapes;
    }
    Ok(Layout { positions })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_values() {
        let (a, b) = fixed_points();
        assert!((a + 0.6180339887).abs() < 1e-10);
        assert!((b - 1.6180339887).abs() < 1e-10);
        assert!((a * a - 1.0 - a).abs() < 1e-14);
        assert!((b * b - 1.0 - b).abs() < 1e-14);
        assert!((p_map(Complex64::new(-a, 0.0)).re - a).abs() < 1e-15);
    }

    #[test]
    fn small_orbits() {
        let (a, _) = fixed_points();
        let one = backward_orbit(1).unwrap();
        assert_eq!(one.len(), 2);
        assert!((one[0].re + a).abs() < 1e-15 && (one[1].re - a).abs() < 1e-15);
        let two = backward_orbit(2).unwrap();
        assert_eq!(two.len(), 4);
        let s = (1.0 - a).sqrt();
        assert!((s - 1.2720).abs() < 1e-4);
        for target in [s, -s] {
            assert!(two
                .iter()
                .any(|z| (z - Complex64::new(target, 0.0)).norm() < 1e-14));
        }
    }

    #[test]
    fn orbits_return_to_a() {
        for n in [1, 5, 10, 12] {
            let points = backward_orbit(n).unwrap();
            assert!(orbit_residual(&points, n) < 1e-9);
        }
    }

    #[test]
    fn orbit_maps_into_previous() {
        let prev = backward_orbit(9).unwrap();
        let cur = backward_orbit(10).unwrap();
        for (i, z) in cur.iter().enumerate() {
            assert!((p_map(*z) - prev[i / 2]).norm() < 1e-12);
        }
    }

    #[test]
    fn no_collisions() {
        for n in 1..=12 {
            let points = backward_orbit(n).unwrap();
            assert_eq!(points.len(), 1 << n);
            assert!(min_separation(&points) > 1e-9, "n = {n}");
        }
    }

    #[test]
    fn symmetric_orbits() {
        let points = backward_orbit(8).unwrap();
        let near = |w: Complex64| points.iter().any(|z| (z - w).norm() < 1e-10);
        assert!(points.iter().all(|z| near(-z) && near(z.conj())));
    }

    #[test]
    fn left_piece_mass() {
        let f = left_piece_fraction(12).unwrap();
        assert!((f - 1.0 / 3.0).abs() < 0.02 / 3.0, "{f}");
        assert!(matches!(backward_orbit(25), Err(Error::Capacity { .. })));
    }

    #[test]
    fn filtration_layouts() {
        let l0 = layout_cells(0).unwrap();
        assert_eq!(l0.positions, vec![(-1.0, 0.0), (1.0, 0.0)]);
        let l1 = layout_cells(1).unwrap();
        assert_eq!(l1.positions.len(), 6);
        for &(x, y) in &l1.positions {
            assert!(l1
                .positions
                .iter()
                .any(|&(u, v)| (u + x).abs() < 1e-12 && (v - y).abs() < 1e-12));
        }
        for n in 0..=6 {
            assert!(layout_cells(n).unwrap().min_separation() > 1e-9, "n = {n}");
        }
        assert_eq!(layout_cells(4).unwrap(), layout_cells(4).unwrap());
    }

    #[test]
    fn graph_directed_layouts() {
        for n in 0..=10 {
            let l = layout_graph_directed(n).unwrap();
            assert_eq!(
                l.positions.len(),
                graphdir::generate(n).unwrap().vertex_count
            );
            assert!(l.min_separation() > 1e-9, "n = {n}");
        }
        let csv = layout_graph_directed(2).unwrap().to_csv().unwrap();
        assert!(csv.starts_with("vertex_id,x,y\n"));
        assert_eq!(csv.lines().count(), 5);
    }
}
