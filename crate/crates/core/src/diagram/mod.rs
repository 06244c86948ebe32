//! The twisted toroidal grid diagram of a lifted two-bridge knot.
//!
//! The torus `R^2 / Z^2` carries two horizontal curves, `α` at height 0 and
//! `Jα` at height 1/2, and two curves of slope `p/q`, `β` through the origin
//! and `Jβ` through `(1/2, 0)`. Their `4p` intersection points sit on the two
//! rows at `x = j/(2p)`; going up half a unit along a slanted curve moves `q`
//! columns to the right. So the torus splits into `4p` quadrilateral faces
//! arranged in two strips, and everything below is combinatorics on
//! `(row, column)` and `(strip, start)` indices mod `2p`.
//!
//! Note on cell count: the `4p` faces are forced by the arrangement (Euler
//! characteristic 0 with `4p` vertices and `8p` edges), independent of `q`.

mod domain;
pub mod geometry;
mod trace;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::CheckError;
use crate::twobridge::TwoBridgeParams;
use geometry::{Eps, Point};

pub use domain::{periodic_domain_basis, periodic_domain_rank, solve_domain, Domain};
pub use trace::{ArcKind, KnotArc, KnotTrace};

/// An intersection point: `row` 0 lies on `α`, row 1 on `Jα`; `col` is the
/// x-coordinate in units of `1/(2p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub row: u8,
    pub col: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BetaCurve {
    Beta,
    JBeta,
}

impl Vertex {
    pub fn new(row: u8, col: u32) -> Self {
        Vertex { row, col }
    }

    /// Which slanted curve passes through this vertex.
    pub fn beta_curve(&self) -> BetaCurve {
        if (self.row as u32 + self.col).is_multiple_of(2) {
            BetaCurve::Beta
        } else {
            BetaCurve::JBeta
        }
    }
}

/// A face of strip `strip` (between heights `strip/2` and `strip/2 + 1/2`)
/// whose bottom edge runs from column `start` to `start + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    pub strip: u8,
    pub start: u32,
}

/// A generator: one intersection point on each of `α` and `Jα`, using one
/// point of `β` and one of `Jβ`, which forces `a ≡ b (mod 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub a: u32,
    pub b: u32,
}

impl Generator {
    pub fn vertices(&self) -> [Vertex; 2] {
        [Vertex::new(0, self.a), Vertex::new(1, self.b)]
    }

    pub fn contains(&self, v: Vertex) -> bool {
        match v.row {
            0 => v.col == self.a,
            _ => v.col == self.b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basepoint {
    W1,
    Z1,
    Z2,
    W2,
}

impl Basepoint {
    pub const ALL: [Basepoint; 4] = [Basepoint::W1, Basepoint::Z1, Basepoint::Z2, Basepoint::W2];

    pub fn is_w(&self) -> bool {
        matches!(self, Basepoint::W1 | Basepoint::W2)
    }

    pub fn index(&self) -> usize {
        *self as usize
    }
}

/// Corners of a face in the order bottom-left, bottom-right, top-left, top-right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corners {
    pub bottom_left: Vertex,
    pub bottom_right: Vertex,
    pub top_left: Vertex,
    pub top_right: Vertex,
}

/// The four marked points, before labels are attached: two on the line just
/// below height 1 and two just below height 1/2, at `x = ε` and `x = 1/2 + ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasepointSlots {
    pub top_left: Point,
    pub top_right: Point,
    pub bottom_left: Point,
    pub bottom_right: Point,
}

impl BasepointSlots {
    pub fn standard() -> Self {
        let eps = |re: Rational64, e: i64| Eps::new(re, Rational64::from_integer(e));
        let half = Rational64::new(1, 2);
        let zero = Rational64::from_integer(0);
        let one = Rational64::from_integer(1);
        BasepointSlots {
            top_left: Point::new(eps(zero, 1), eps(one, -1)),
            top_right: Point::new(eps(half, 1), eps(one, -1)),
            bottom_left: Point::new(eps(zero, 1), eps(half, -1)),
            bottom_right: Point::new(eps(half, 1), eps(half, -1)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GridDiagram {
    params: TwoBridgeParams,
    width: u32,
    positions: [Point; 4],
    basepoints: [Face; 4],
    involution: Vec<Vertex>,
    knot: KnotTrace,
}

/// Locates the geometric face containing an exact point of the torus.
pub fn locate_face(params: &TwoBridgeParams, pt: &Point) -> Option<Face> {
    let p = params.p();
    let q = params.q();
    let width = 2 * p;
    let y = pt.y.fract();
    let half = Eps::frac(1, 2);
    if y == Eps::int(0) || y == half {
        return None;
    }
    let strip: u8 = if y < half { 0 } else { 1 };
    let base = Eps::frac(strip as i64, 2);
    // column at which the slanted line through pt meets the strip's bottom row
    let u = (pt.x - (y - base) * Rational64::new(q, p)) * Rational64::from_integer(width);
    if u.is_integer() {
        return None;
    }
    let start = u.floor().rem_euclid(width) as u32;
    Some(Face { strip, start })
}

/// Labels the four slots and traces the knot. The top pair is fixed as
/// `w1` (left), `z1` (right); the bottom pair takes whichever of the two
/// labelings lets the turn-right walk close up with alternating arcs.
pub fn assign_basepoints(
    params: &TwoBridgeParams,
    slots: &BasepointSlots,
) -> Result<([Point; 4], KnotTrace), CheckError> {
    let options = [
        // [w1, z1, z2, w2]
        [
            slots.top_left,
            slots.top_right,
            slots.bottom_left,
            slots.bottom_right,
        ],
        [
            slots.top_left,
            slots.top_right,
            slots.bottom_right,
            slots.bottom_left,
        ],
    ];
    let mut found = None;
    for positions in options {
        if let Ok(trace) = trace_knot(params, &positions) {
            if found.is_some() {
                // both labelings closing would make the knot ambiguous
                return Err(CheckError::TraceBroken);
            }
            found = Some((positions, trace));
        }
    }
    found.ok_or(CheckError::TraceBroken)
}

pub use trace::trace_knot;

impl GridDiagram {
    pub fn build(params: TwoBridgeParams) -> Result<Self, CheckError> {
        let width = 2 * params.p() as u32;
        let (positions, knot) = assign_basepoints(&params, &BasepointSlots::standard())?;
        let mut basepoints = [Face { strip: 0, start: 0 }; 4];
        for (slot, pos) in basepoints.iter_mut().zip(&positions) {
            *slot = locate_face(&params, pos).ok_or(CheckError::TraceBroken)?;
        }
        let mut diagram = GridDiagram {
            params,
            width,
            positions,
            basepoints,
            involution: Vec::new(),
            knot,
        };
        diagram.involution = diagram.rotation_about(diagram.basepoint_face(Basepoint::W1))?;
        Ok(diagram)
    }

    pub fn params(&self) -> &TwoBridgeParams {
        &self.params
    }

    pub fn p(&self) -> usize {
        self.params.p_usize()
    }

    /// Number of columns, `2p`.
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.width as usize
    }

    pub fn face_count(&self) -> usize {
        2 * self.width as usize
    }

    pub fn edge_count(&self) -> usize {
        // each row has `width` horizontal edges and each strip `width` slanted ones
        4 * self.width as usize
    }

    pub fn vertex_index(&self, v: Vertex) -> usize {
        v.row as usize * self.width as usize + v.col as usize
    }

    pub fn vertex_at(&self, index: usize) -> Vertex {
        let w = self.width as usize;
        Vertex::new((index / w) as u8, (index % w) as u32)
    }

    pub fn face_index(&self, f: Face) -> usize {
        f.strip as usize * self.width as usize + f.start as usize
    }

    pub fn face_at(&self, index: usize) -> Face {
        let w = self.width as usize;
        Face {
            strip: (index / w) as u8,
            start: (index % w) as u32,
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count()).map(|i| self.vertex_at(i))
    }

    pub fn faces(&self) -> impl Iterator<Item = Face> + '_ {
        (0..self.face_count()).map(|i| self.face_at(i))
    }

    /// Column arithmetic mod `2p`.
    pub fn col(&self, c: i64) -> u32 {
        c.rem_euclid(self.width as i64) as u32
    }

    pub fn face(&self, strip: i64, start: i64) -> Face {
        Face {
            strip: strip.rem_euclid(2) as u8,
            start: self.col(start),
        }
    }

    pub fn corners(&self, f: Face) -> Corners {
        let q = self.params.q();
        let j = f.start as i64;
        let top = 1 - f.strip;
        Corners {
            bottom_left: Vertex::new(f.strip, self.col(j)),
            bottom_right: Vertex::new(f.strip, self.col(j + 1)),
            top_left: Vertex::new(top, self.col(j + q)),
            top_right: Vertex::new(top, self.col(j + q + 1)),
        }
    }

    /// The four faces meeting at `v`: above-right, above-left, below-right, below-left.
    pub fn faces_around(&self, v: Vertex) -> [Face; 4] {
        let q = self.params.q();
        let k = v.col as i64;
        let r = v.row as i64;
        [
            self.face(r, k),
            self.face(r, k - 1),
            self.face(1 - r, k - q),
            self.face(1 - r, k - q - 1),
        ]
    }

    /// All `2p^2` generators, ordered by `(a, b)`.
    pub fn generators(&self) -> Vec<Generator> {
        let w = self.width;
        (0..w)
            .flat_map(|a| {
                (0..w)
                    .filter(move |b| (a + b) % 2 == 0)
                    .map(move |b| Generator { a, b })
            })
            .collect()
    }

    pub fn basepoint_face(&self, b: Basepoint) -> Face {
        self.basepoints[b.index()]
    }

    pub fn basepoint_position(&self, b: Basepoint) -> Point {
        self.positions[b.index()]
    }

    pub fn knot(&self) -> &KnotTrace {
        &self.knot
    }

    /// The deck involution `J`.
    pub fn j(&self, v: Vertex) -> Vertex {
        self.involution[self.vertex_index(v)]
    }

    /// Lifted plane coordinates of a vertex in the fundamental square.
    pub fn vertex_point(&self, v: Vertex) -> Point {
        Point::new(
            Eps::frac(v.col as i64, self.width as i64),
            Eps::frac(v.row as i64, 2),
        )
    }

    fn point_to_vertex(&self, pt: &Point) -> Option<Vertex> {
        let y = pt.y.fract();
        let row = if y == Eps::int(0) {
            0
        } else if y == Eps::frac(1, 2) {
            1
        } else {
            return None;
        };
        let u = pt.x.fract() * Rational64::from_integer(self.width as i64);
        u.is_integer().then(|| Vertex::new(row, u.floor() as u32))
    }

    /// Half-turn of the plane about the centre of `face`, as a vertex permutation.
    pub fn rotation_about(&self, face: Face) -> Result<Vec<Vertex>, CheckError> {
        let q = self.params.q();
        let w = self.width as i64;
        // lifted corner coordinates (bottom row at strip/2, top row half a unit up)
        let base_y = face.strip as i64;
        let xs = [
            face.start as i64,
            face.start as i64 + 1,
            face.start as i64 + q,
            face.start as i64 + q + 1,
        ];
        let cx = Rational64::new(xs.iter().sum::<i64>(), 4 * w);
        let cy = Rational64::new(2 * base_y + 1, 4);
        let mut out = Vec::with_capacity(self.vertex_count());
        for v in self.vertices() {
            let pt = self.vertex_point(v);
            let img = Point::new(Eps::rat(cx * 2) - pt.x, Eps::rat(cy * 2) - pt.y);
            out.push(self.point_to_vertex(&img).ok_or_else(|| {
                CheckError::Consistency(format!("rotation sends {v:?} off the lattice"))
            })?);
        }
        Ok(out)
    }
}
