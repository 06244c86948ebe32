//! Correction terms of lens spaces and their alignment with grid Spin^c labels.

use num_integer::Integer;
use num_rational::Rational64;
use serde::Serialize;

use crate::twobridge::TwoBridgeParams;

/// `d(L(p, q), i)` for `i = 0..p`, via
/// `d(L(p,q),i) = ((2i+1-p-q)^2 - pq)/(4pq) - d(L(q, p mod q), i mod q)`.
pub fn lens_space_d(p: i64, q: i64) -> Vec<Rational64> {
    assert!(
        p >= 1 && q >= 0 && p.gcd(&q) == 1,
        "need coprime p >= 1, q >= 0"
    );
    if p == 1 {
        return vec![Rational64::from_integer(0)];
    }
    let q = q.rem_euclid(p);
    let inner = lens_space_d(q, p % q);
    (0..p)
        .map(|i| {
            let t = 2 * i + 1 - p - q;
            Rational64::new(t * t - p * q, 4 * p * q) - inner[(i % q) as usize]
        })
        .collect()
}

/// Correction terms of the double branched cover `-L(p, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DInvariants {
    /// Indexed by the recursion's label `i`.
    pub by_recursion_label: Vec<Rational64>,
    /// The label fixed by conjugation `i -> q - 1 - i`.
    pub self_conjugate: u32,
}

pub fn d_invariants(params: &TwoBridgeParams) -> DInvariants {
    let p = params.p();
    let qbar = params.q_positive();
    let by_recursion_label = lens_space_d(p, qbar).into_iter().map(|d| -d).collect();
    // 2 i0 = qbar - 1 (mod p)
    let self_conjugate = if qbar % 2 == 1 {
        (qbar - 1) / 2
    } else {
        (p + qbar - 1) / 2
    } as u32;
    DInvariants {
        by_recursion_label,
        self_conjugate,
    }
}

impl DInvariants {
    pub fn p(&self) -> u32 {
        self.by_recursion_label.len() as u32
    }

    /// Value at the label `i0 + s`, so that conjugation becomes `s -> -s`.
    pub fn centered(&self, s: i64) -> Rational64 {
        let p = self.p() as i64;
        self.by_recursion_label[(self.self_conjugate as i64 + s).rem_euclid(p) as usize]
    }
}

/// Affine identification `s -> i0 + unit * s` of grid Spin^c labels with
/// recursion labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Calibration {
    pub unit: u32,
    /// More than one admissible unit gives a different assignment of d-values.
    pub ambiguous: bool,
    pub candidate_units: Vec<u32>,
}

impl Calibration {
    pub fn recursion_label(&self, dinv: &DInvariants, grid_label: u32) -> u32 {
        let p = dinv.p() as u64;
        ((dinv.self_conjugate as u64 + self.unit as u64 * grid_label as u64) % p) as u32
    }

    pub fn d_of(&self, dinv: &DInvariants, grid_label: u32) -> Rational64 {
        dinv.by_recursion_label[self.recursion_label(dinv, grid_label) as usize]
    }
}

/// Picks `unit` (default 1) and reports whether other units would assign
/// different d-values to the grid labels.
pub fn calibrate_spinc_to_d_labels(dinv: &DInvariants, unit: u32) -> Calibration {
    let p = dinv.p();
    let units: Vec<u32> = (1..p)
        .filter(|u| (*u as u64).gcd(&(p as u64)) == 1)
        .collect();
    let assignment = |u: u32| -> Vec<Rational64> {
        let c = Calibration {
            unit: u,
            ambiguous: false,
            candidate_units: vec![],
        };
        (0..p).map(|s| c.d_of(dinv, s)).collect()
    };
    let mut distinct: Vec<Vec<Rational64>> = Vec::new();
    for &u in &units {
        let a = assignment(u);
        if !distinct.contains(&a) {
            distinct.push(a);
        }
    }
    let unit = unit % p;
    assert!(
        units.contains(&unit),
        "calibration unit must be invertible mod p"
    );
    Calibration {
        unit,
        ambiguous: distinct.len() > 1,
        candidate_units: units,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twobridge::normalize_params;

    fn sorted(mut v: Vec<Rational64>) -> Vec<Rational64> {
        v.sort();
        v
    }

    #[test]
    fn minus_l31() {
        let d = d_invariants(&normalize_params(3, 1).unwrap());
        assert_eq!(
            sorted(d.by_recursion_label.clone()),
            vec![
                Rational64::new(-1, 2),
                Rational64::new(1, 6),
                Rational64::new(1, 6)
            ]
        );
        assert_eq!(d.centered(0), Rational64::new(-1, 2));
    }

    #[test]
    fn base_case() {
        assert_eq!(lens_space_d(1, 0), vec![Rational64::from_integer(0)]);
    }

    #[test]
    fn q_one_closed_form() {
        for p in (3..=15i64).step_by(2) {
            let d = d_invariants(&normalize_params(p, 1).unwrap());
            let closed: Vec<_> = (0..p)
                .map(|i| -Rational64::new((2 * i - p).pow(2) - p, 4 * p))
                .collect();
            assert_eq!(sorted(d.by_recursion_label), sorted(closed));
        }
    }

    #[test]
    fn conjugation_symmetry() {
        for p in (3..=41i64).step_by(2) {
            for q in (-p + 2..p).step_by(2) {
                let Ok(t) = normalize_params(p, q) else {
                    continue;
                };
                let d = d_invariants(&t);
                for s in 0..p {
                    assert_eq!(d.centered(s), d.centered(-s));
                }
            }
        }
    }

    #[test]
    fn calibration_ambiguity() {
        let d3 = d_invariants(&normalize_params(3, 1).unwrap());
        assert!(!calibrate_spinc_to_d_labels(&d3, 1).ambiguous);
        let d7 = d_invariants(&normalize_params(7, 3).unwrap());
        let c = calibrate_spinc_to_d_labels(&d7, 1);
        assert_eq!(c.candidate_units.len(), 6);
        for s in 0..7 {
            assert_eq!(c.d_of(&d7, s), c.d_of(&d7, (7 - s) % 7));
        }
    }
}
