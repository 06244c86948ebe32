//! Tracing the knot through the four basepoints.
//!
//! The knot is drawn as horizontal arcs from `w` to `z` (pushed just off `α`
//! or `Jα`) and slanted arcs from `z` to `w` (parallel to the `β` curves).
//! Starting at `w1` heading right, every arrival turns right: a horizontal
//! arc with sign `s` is followed by a slanted one descending when `s > 0`,
//! and a slanted arc with vertical sign `s` by a horizontal one with sign `s`.

use num_rational::Rational64;
use num_traits::{One, Zero};

use super::geometry::{Eps, Point};
use super::Basepoint;
use crate::error::CheckError;
use crate::twobridge::TwoBridgeParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    Horizontal,
    Slanted,
}

/// One arc of the knot, lifted to the plane: it starts at `start` and ends
/// at `start + (dx, dy)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnotArc {
    pub kind: ArcKind,
    pub from: Basepoint,
    pub to: Basepoint,
    pub start: Point,
    pub dx: Rational64,
    pub dy: Rational64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotTrace {
    pub arcs: Vec<KnotArc>,
}

impl KnotTrace {
    /// Total displacement of one circuit; a closed curve on the torus lifts to
    /// an integer vector.
    pub fn homology_class(&self) -> (Rational64, Rational64) {
        self.arcs
            .iter()
            .fold((Rational64::zero(), Rational64::zero()), |(x, y), a| {
                (x + a.dx, y + a.dy)
            })
    }
}

/// Smallest positive horizontal run (in direction `sign`) from `from` to a
/// point congruent to `to`, if `to` lies on the same horizontal circle.
fn horizontal_hit(from: &Point, to: &Point, sign: i64) -> Option<Rational64> {
    if !(to.y - from.y).is_integer() {
        return None;
    }
    let t = ((to.x - from.x) * Rational64::from_integer(sign)).fract();
    debug_assert!(t.eps.is_zero());
    let t = if t.re.is_zero() {
        Rational64::one()
    } else {
        t.re
    };
    Some(t)
}

/// Smallest positive parameter `s` with `from + sign * s * (q, p)` congruent to
/// `to`, if `to` lies on the slanted circle through `from`.
fn slanted_hit(
    params: &TwoBridgeParams,
    from: &Point,
    to: &Point,
    sign: i64,
) -> Option<Rational64> {
    let (p, q) = (params.p(), params.q());
    let sgn = Rational64::from_integer(sign);
    let dy = ((to.y - from.y) * sgn).fract();
    if !dy.eps.is_zero() {
        return None;
    }
    (0..=p)
        .map(|m| (dy.re + Rational64::from_integer(m)) / Rational64::from_integer(p))
        .filter(|s| !s.is_zero())
        .find(|s| {
            let x = from.x + Eps::rat(*s * sgn * Rational64::from_integer(q));
            (to.x - x).is_integer()
        })
}

/// Walks the knot from `w1` given the positions of `[w1, z1, z2, w2]`.
pub fn trace_knot(
    params: &TwoBridgeParams,
    positions: &[Point; 4],
) -> Result<KnotTrace, CheckError> {
    let (p, q) = (params.p(), params.q());
    let mut arcs = Vec::new();
    let mut at = Basepoint::W1;
    let mut kind = ArcKind::Horizontal;
    let mut sign = 1i64;
    loop {
        let from = positions[at.index()];
        let hits = Basepoint::ALL.iter().filter_map(|&b| {
            let to = positions[b.index()];
            let s = match kind {
                ArcKind::Horizontal => horizontal_hit(&from, &to, sign),
                ArcKind::Slanted => slanted_hit(params, &from, &to, sign),
            }?;
            Some((s, b))
        });
        let (s, next) = hits
            .min_by_key(|(s, _)| *s)
            .ok_or(CheckError::TraceBroken)?;
        // horizontal arcs run w -> z, slanted arcs z -> w
        let want_w = kind == ArcKind::Slanted;
        if next.is_w() != want_w || next == at {
            return Err(CheckError::TraceBroken);
        }
        let sgn = Rational64::from_integer(sign);
        let (dx, dy) = match kind {
            ArcKind::Horizontal => (s * sgn, Rational64::zero()),
            ArcKind::Slanted => (
                s * sgn * Rational64::from_integer(q),
                s * sgn * Rational64::from_integer(p),
            ),
        };
        arcs.push(KnotArc {
            kind,
            from: at,
            to: next,
            start: from,
            dx,
            dy,
        });
        let (next_kind, next_sign) = match kind {
            ArcKind::Horizontal => (ArcKind::Slanted, -sign),
            ArcKind::Slanted => (ArcKind::Horizontal, sign),
        };
        at = next;
        kind = next_kind;
        sign = next_sign;
        if at == Basepoint::W1 && kind == ArcKind::Horizontal && sign == 1 {
            break;
        }
        if arcs.len() > 8 {
            return Err(CheckError::TraceBroken);
        }
    }
    let mut seen: Vec<Basepoint> = arcs.iter().map(|a| a.from).collect();
    seen.sort();
    if seen != Basepoint::ALL.to_vec() {
        return Err(CheckError::TraceBroken);
    }
    Ok(KnotTrace { arcs })
}

#[cfg(test)]
mod tests {
    use super::super::{BasepointSlots, GridDiagram};
    use super::*;
    use crate::twobridge::normalize_params;

    #[test]
    fn k31_walk() {
        let d = GridDiagram::build(normalize_params(3, 1).unwrap()).unwrap();
        let order: Vec<_> = d.knot().arcs.iter().map(|a| (a.from, a.to)).collect();
        assert_eq!(
            order,
            vec![
                (Basepoint::W1, Basepoint::Z1),
                (Basepoint::Z1, Basepoint::W2),
                (Basepoint::W2, Basepoint::Z2),
                (Basepoint::Z2, Basepoint::W1),
            ]
        );
        let half = Rational64::new(1, 2);
        let d0 = d.knot().arcs[1];
        assert_eq!((d0.dx, d0.dy), (-half, -Rational64::new(3, 2)));
    }

    #[test]
    fn closed_form_displacements() {
        for p in (3..=21i64).step_by(2) {
            for q in (-p + 2..p).step_by(2) {
                let Ok(params) = normalize_params(p, q) else {
                    continue;
                };
                let d = GridDiagram::build(params).unwrap();
                let h = Rational64::new(1, 2);
                let (pr, qr) = (Rational64::from_integer(p), Rational64::from_integer(q));
                let got: Vec<_> = d.knot().arcs.iter().map(|a| (a.dx, a.dy)).collect();
                assert_eq!(
                    got,
                    vec![
                        (h, Rational64::zero()),
                        (-qr * h, -pr * h),
                        (-h, Rational64::zero()),
                        (qr * h, pr * h)
                    ],
                    "{params}"
                );
                // null-homologous on the torus
                assert_eq!(
                    d.knot().homology_class(),
                    (Rational64::zero(), Rational64::zero())
                );
            }
        }
    }

    #[test]
    fn swapped_bottom_labels_fail() {
        let params = normalize_params(5, 3).unwrap();
        let s = BasepointSlots::standard();
        let swapped = [s.top_left, s.top_right, s.bottom_left, s.bottom_right];
        assert_eq!(trace_knot(&params, &swapped), Err(CheckError::TraceBroken));
    }
}
