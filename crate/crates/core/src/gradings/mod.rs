//! Gradings of generators: Spin^c labels, the Z/2 Maslov grading, local
//! Alexander gradings, relative Q-gradings from domains, and the lens space
//! correction terms used to anchor them.

mod alexander;
mod dinv;

use serde::{Deserialize, Serialize};

use crate::diagram::{solve_domain, Generator, GridDiagram, Vertex};
use crate::error::CheckError;

pub use alexander::{
    absolute_alexander_shift, knot_crossings, AlexanderNormalization, LaurentPoly,
};
pub use dinv::{calibrate_spinc_to_d_labels, d_invariants, lens_space_d, Calibration, DInvariants};

/// A Spin^c structure, stored as a residue mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinCLabel(pub u32);

impl SpinCLabel {
    pub fn conjugate(self, p: u32) -> SpinCLabel {
        SpinCLabel((p - self.0) % p)
    }

    /// Representative in `(-p/2, p/2)`.
    pub fn signed(self, p: u32) -> i64 {
        let v = self.0 as i64;
        if 2 * v > p as i64 {
            v - p as i64
        } else {
            v
        }
    }
}

/// Per-vertex grading data, indexed by [`GridDiagram::vertex_index`].
#[derive(Debug, Clone)]
pub struct LocalTables {
    p: u32,
    spinc: Vec<u32>,
    alexander: Vec<i64>,
    half_maslov: Vec<u8>,
}

/// Row-0 Spin^c values come from the closed-form table; row 1 is forced by
/// `S(J v) = -S(v)`.
pub fn local_spinc(diagram: &GridDiagram) -> Vec<u32> {
    let p = diagram.p() as i64;
    let shift_odd = if diagram.params().q() > 0 { 0 } else { 1 };
    let row0 = |k: u32| -> u32 {
        let k = k as i64;
        let v = if k % 2 == 0 { k / 2 } else { k / 2 + shift_odd };
        v.rem_euclid(p) as u32
    };
    diagram
        .vertices()
        .map(|v| {
            if v.row == 0 {
                row0(v.col)
            } else {
                let jv = diagram.j(v);
                debug_assert_eq!(jv.row, 0);
                ((p - row0(jv.col) as i64).rem_euclid(p)) as u32
            }
        })
        .collect()
}

/// Local Alexander grading: signed crossings with the knot of the lattice
/// path from `V(0,0)` right along row 0 and then up to the vertex.
pub fn local_alexander(diagram: &GridDiagram) -> Vec<i64> {
    diagram
        .vertices()
        .map(|v| {
            let origin = diagram.vertex_point(Vertex::new(0, 0));
            let target = diagram.vertex_point(v);
            let corner = crate::diagram::geometry::Point::new(target.x, origin.y);
            knot_crossings(diagram, origin, corner) + knot_crossings(diagram, corner, target)
        })
        .collect()
}

impl LocalTables {
    pub fn build(diagram: &GridDiagram) -> Self {
        LocalTables {
            p: diagram.p() as u32,
            spinc: local_spinc(diagram),
            alexander: local_alexander(diagram),
            // even columns carry 0, odd columns 1/2 (stored as 1)
            half_maslov: diagram.vertices().map(|v| (v.col % 2) as u8).collect(),
        }
    }

    fn index(&self, v: Vertex) -> usize {
        v.row as usize * 2 * self.p as usize + v.col as usize
    }

    pub fn spinc(&self, v: Vertex) -> u32 {
        self.spinc[self.index(v)]
    }

    pub fn alexander(&self, v: Vertex) -> i64 {
        self.alexander[self.index(v)]
    }

    /// Local Z/2 Maslov grading in units of 1/2.
    pub fn half_maslov(&self, v: Vertex) -> u8 {
        self.half_maslov[self.index(v)]
    }

    pub fn spinc_of_generator(&self, g: &Generator) -> SpinCLabel {
        let [a, b] = g.vertices();
        SpinCLabel((self.spinc(a) + self.spinc(b)) % self.p)
    }

    /// Alexander grading up to the global shift fixed by symmetry.
    pub fn relative_alexander(&self, g: &Generator) -> i64 {
        let [a, b] = g.vertices();
        self.alexander(a) + self.alexander(b)
    }

    pub fn z2_maslov_of_generator(&self, g: &Generator) -> u8 {
        let [a, b] = g.vertices();
        let s = self.half_maslov(a) + self.half_maslov(b);
        debug_assert!(s.is_multiple_of(2));
        (s / 2) % 2
    }
}

/// `M(x) - M(y)`, from any domain connecting them.
pub fn relative_maslov(
    diagram: &GridDiagram,
    x: &Generator,
    y: &Generator,
) -> Result<i64, CheckError> {
    let d = solve_domain(diagram, x, y).ok_or(CheckError::DifferentSectors)?;
    Ok(d.maslov_drop(diagram, x, y))
}

/// `A(x) - A(y)` as `n_z - n_w` of a connecting domain; an independent path
/// to the local tables.
pub fn relative_alexander_by_domain(
    diagram: &GridDiagram,
    x: &Generator,
    y: &Generator,
) -> Result<i64, CheckError> {
    let d = solve_domain(diagram, x, y).ok_or(CheckError::DifferentSectors)?;
    Ok(d.n_z(diagram) - d.n_w(diagram))
}
