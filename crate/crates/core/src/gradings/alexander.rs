//! Alexander gradings: crossing counts with the knot and the symmetric
//! normalization of the signed generating function.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::diagram::geometry::{Eps, Point};
use crate::diagram::GridDiagram;
use crate::error::CheckError;

/// Signed count of crossings between the axis-parallel segment `from -> to`
/// and every integer translate of the lifted knot. A crossing counts `+1`
/// when the knot passes from the right of the segment to its left.
pub fn knot_crossings(diagram: &GridDiagram, from: Point, to: Point) -> i64 {
    let horizontal = from.y == to.y;
    assert!(
        horizontal || from.x == to.x,
        "path segments must be axis-parallel"
    );
    // work in coordinates (u, v) where the segment runs along u at height v
    let swap = |pt: Point| {
        if horizontal {
            (pt.x, pt.y)
        } else {
            (pt.y, pt.x)
        }
    };
    let (u0, v0) = swap(from);
    let (u1, _) = swap(to);
    if u0 == u1 {
        return 0;
    }
    let (ulo, uhi) = if u0 < u1 { (u0, u1) } else { (u1, u0) };
    let dir = if u0 < u1 { 1 } else { -1 };
    let mut total = 0;
    for arc in &diagram.knot().arcs {
        let (su, sv) = swap(arc.start);
        let (du, dv) = if horizontal {
            (arc.dx, arc.dy)
        } else {
            (arc.dy, arc.dx)
        };
        if dv == Rational64::from_integer(0) {
            continue;
        }
        let ev = sv + Eps::rat(dv);
        let (vlo, vhi) = if sv < ev { (sv, ev) } else { (ev, sv) };
        // translates n with vlo < v0 + n < vhi
        let first = (vlo - v0).floor() + 1;
        let last = (vhi - v0).ceil() - 1;
        let mut count = 0;
        for n in first..=last {
            let t = (v0 + Eps::int(n) - sv) * (Rational64::from_integer(1) / dv);
            let uc = su + t * du;
            count += Eps::integers_strictly_between(ulo - uc, uhi - uc);
        }
        // orientation of (segment direction) x (knot direction)
        let knot_dir = if dv > Rational64::from_integer(0) {
            1
        } else {
            -1
        };
        let cross = if horizontal {
            dir * knot_dir
        } else {
            -dir * knot_dir
        };
        total += cross * count;
    }
    total
}

/// Laurent polynomial in `T` with integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly(pub BTreeMap<i64, i64>);

impl LaurentPoly {
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut m = BTreeMap::new();
        for (e, c) in terms {
            *m.entry(e).or_insert(0) += c;
        }
        m.retain(|_, c| *c != 0);
        LaurentPoly(m)
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.0.get(&e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.0.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    pub fn shifted(&self, k: i64) -> Self {
        LaurentPoly(self.0.iter().map(|(e, c)| (e + k, *c)).collect())
    }

    pub fn eval_one(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.iter().all(|(e, c)| self.coeff(-e) == *c)
    }

    /// Exact division by `1 - T^{-1}`.
    pub fn divide_by_one_minus_inverse(&self) -> Option<Self> {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return Some(LaurentPoly::default());
        };
        // g_k = q_k - q_{k+1}, so q_k = g_k + q_{k+1} from the top down
        let mut acc = 0;
        let mut out = BTreeMap::new();
        for k in (lo..=hi).rev() {
            acc += self.coeff(k);
            if acc != 0 {
                out.insert(k, acc);
            }
        }
        (acc == 0).then_some(LaurentPoly(out))
    }

    /// Product with `1 - T^{-1}`.
    pub fn times_one_minus_inverse(&self) -> Self {
        LaurentPoly::from_terms(self.0.iter().flat_map(|(e, c)| [(*e, *c), (e - 1, -c)]))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.0.iter().enumerate() {
            let sign = if *c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let sep = if i > 0 { " " } else { "" };
            let mag = c.abs();
            let body = match (mag, e) {
                (m, 0) => m.to_string(),
                (1, 1) => "T".to_string(),
                (1, e) => format!("T^{e}"),
                (m, 1) => format!("{m}T"),
                (m, e) => format!("{m}T^{e}"),
            };
            if i > 0 {
                write!(f, "{sep}{sign} {body}")?;
            } else {
                write!(f, "{sign}{body}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlexanderNormalization {
    /// Added to relative Alexander gradings to make them absolute.
    pub shift: i64,
    /// The symmetrized quotient `Σ (-1)^M T^A / (1 - T^{-1})`.
    pub polynomial: LaurentPoly,
}

/// Finds the shift making the signed generating function's quotient by
/// `1 - T^{-1}` symmetric. Input: `(relative Alexander, Z/2 grading)` pairs.
pub fn absolute_alexander_shift(
    gradings: impl IntoIterator<Item = (i64, u8)>,
) -> Result<AlexanderNormalization, CheckError> {
    let g = LaurentPoly::from_terms(
        gradings
            .into_iter()
            .map(|(a, m)| (a, if m % 2 == 0 { 1 } else { -1 })),
    );
    let quotient = g
        .divide_by_one_minus_inverse()
        .ok_or(CheckError::NotDivisible)?;
    let (lo, hi) = match (quotient.min_exp(), quotient.max_exp()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(CheckError::NoSymmetricShift),
    };
    if (lo + hi) % 2 != 0 {
        return Err(CheckError::NoSymmetricShift);
    }
    let shift = -(lo + hi) / 2;
    let polynomial = quotient.shifted(shift);
    let antisymmetric = polynomial.0.iter().all(|(e, c)| polynomial.coeff(-e) == -c);
    if !polynomial.is_symmetric() && !antisymmetric {
        return Err(CheckError::NoSymmetricShift);
    }
    Ok(AlexanderNormalization { shift, polynomial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twobridge::normalize_params;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn closed_lattice_loops_do_not_cross(
            pi in 0usize..6,
            steps in prop::collection::vec((-9i64..=9, -4i64..=4), 1..6),
            wrap in (-2i64..=2, -2i64..=2),
        ) {
            let (p, q) = [(3, 1), (5, -3), (7, 3), (7, -1), (9, 5), (9, -7)][pi];
            let d = GridDiagram::build(normalize_params(p, q).unwrap()).unwrap();
            let w = 2 * p;
            // lattice steps (dx/(2p), dy/2), closed up to an integer translation
            let mut pts = vec![(0i64, 0i64)];
            for (dx, dy) in &steps {
                let (x, y) = *pts.last().unwrap();
                pts.push((x + dx, y));
                pts.push((x + dx, y + dy));
            }
            let (_, y) = *pts.last().unwrap();
            let end = (wrap.0 * w, wrap.1 * 2);
            pts.push((end.0, y));
            pts.push(end);
            let pt = |(x, y): (i64, i64)| Point::new(Eps::frac(x, w), Eps::frac(y, 2));
            let total: i64 = pts.windows(2).map(|s| knot_crossings(&d, pt(s[0]), pt(s[1]))).sum();
            prop_assert_eq!(total, 0);
        }
    }

    #[test]
    fn division_round_trip() {
        let p = LaurentPoly::from_terms([(-1, 1), (0, -1), (1, 1)]);
        let g = p.times_one_minus_inverse();
        assert_eq!(g.divide_by_one_minus_inverse(), Some(p));
        assert_eq!(
            LaurentPoly::from_terms([(0, 1)]).divide_by_one_minus_inverse(),
            None
        );
    }

    #[test]
    fn display() {
        let p = LaurentPoly::from_terms([(-1, 4), (0, -1), (1, 4)]);
        assert_eq!(p.to_string(), "4T^-1 - 1 + 4T");
        assert_eq!(
            LaurentPoly::from_terms([(2, -1), (0, 7)]).to_string(),
            "7 - T^2"
        );
    }

    #[test]
    fn shift_recovers_symmetry() {
        let target = LaurentPoly::from_terms([(-1, 1), (0, -1), (1, 1)]);
        let g = target.shifted(5).times_one_minus_inverse();
        let terms = g.0.iter().flat_map(|(e, c)| {
            let m = if *c > 0 { 0u8 } else { 1 };
            std::iter::repeat_n((*e, m), c.unsigned_abs() as usize)
        });
        let n = absolute_alexander_shift(terms).unwrap();
        assert_eq!(n.shift, -5);
        assert_eq!(n.polynomial, target);
    }
}
