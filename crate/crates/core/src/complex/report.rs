//! The full invariant pipeline and its serializable report.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{minus, ChainComplex, KnotComplex};
use crate::diagram::periodic_domain_rank;
use crate::error::{CheckError, Result};
use crate::f2::{kernel, BitVec};
use crate::gradings::{
    calibrate_spinc_to_d_labels, d_invariants, Calibration, LaurentPoly, SpinCLabel,
};
use crate::twobridge::TwoBridgeParams;

/// Rationals as exact strings such as `"-1/2"` or `"3"`.
mod fraction {
    use num_rational::Rational64;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|_| D::Error::custom(format!("bad fraction {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HfkEntry {
    #[serde(rename = "A")]
    pub alexander: i64,
    #[serde(rename = "M", with = "fraction")]
    pub maslov: Rational64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedRank {
    #[serde(rename = "M", with = "fraction")]
    pub maslov: Rational64,
    pub rank: usize,
}

/// Truncated minus homology of one sector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MinusReport {
    pub truncation: u32,
    /// Ranks are reported for gradings at or above this value.
    #[serde(with = "fraction")]
    pub window_floor: Rational64,
    pub ranks: Vec<GradedRank>,
    pub u_actions_agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorReport {
    /// Spin^c label as a representative in `(-p/2, p/2)`.
    pub label: i64,
    /// Label of the lens space recursion that supplied `d`.
    pub d_label: u32,
    #[serde(with = "fraction")]
    pub d: Rational64,
    pub tau: i64,
    pub hfk: Vec<HfkEntry>,
    pub hfk_knot: Vec<HfkEntry>,
    pub filtered_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub minus: Option<MinusReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub generators: usize,
    pub vertices: usize,
    pub faces: usize,
    pub edges: usize,
    pub parallelograms: usize,
    pub max_parallelogram_height: u32,
    pub periodic_domain_rank: usize,
    pub alexander_shift: i64,
    pub calibration_unit: u32,
    pub calibration_ambiguous: bool,
    pub flavors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_validated: Option<bool>,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub params: TwoBridgeParams,
    pub diagnostics: Diagnostics,
    pub sectors: Vec<SectorReport>,
    pub alexander_polynomial: LaurentPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputeOptions {
    /// Compute the truncated minus flavor with this `N`.
    pub minus_truncation: Option<u32>,
    pub calibration_unit: u32,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            minus_truncation: None,
            calibration_unit: 1,
        }
    }
}

/// Divides a bigraded Poincaré polynomial by `1 + a^{-1} m^{-1}`.
pub fn v_division(entries: &[HfkEntry]) -> Option<Vec<HfkEntry>> {
    let one = Rational64::from_integer(1);
    let p: BTreeMap<(i64, Rational64), i64> = entries
        .iter()
        .map(|e| ((e.alexander, e.maslov), e.rank as i64))
        .collect();
    let mut q: BTreeMap<(i64, Rational64), i64> = BTreeMap::new();
    // P(A, M) = Q(A, M) + Q(A + 1, M + 1), solved from the top
    for (&(a, m), &r) in p.iter().rev() {
        let above = q.get(&(a + 1, m + one)).copied().unwrap_or(0);
        let v = r - above;
        if v < 0 {
            return None;
        }
        if v > 0 {
            q.insert((a, m), v);
        }
    }
    let mut rebuilt: BTreeMap<(i64, Rational64), i64> = BTreeMap::new();
    for (&(a, m), &v) in &q {
        *rebuilt.entry((a, m)).or_insert(0) += v;
        *rebuilt.entry((a - 1, m - one)).or_insert(0) += v;
    }
    if rebuilt != p {
        return None;
    }
    Some(
        q.into_iter()
            .map(|((a, m), r)| HfkEntry {
                alexander: a,
                maslov: m,
                rank: r as usize,
            })
            .collect(),
    )
}

/// Smallest Alexander level whose subcomplex carries a cycle representing the
/// top-graded homology class of the filtered complex.
pub fn tau(
    kc: &KnotComplex,
    members: &[usize],
    filtered: &ChainComplex<i64>,
    top: i64,
) -> Option<i64> {
    let data = filtered.cycles_and_boundaries(&top);
    let below: Vec<usize> = (0..filtered.len())
        .filter(|&i| *filtered.grade(i) == top - 1)
        .collect();
    let mut below_local = vec![usize::MAX; filtered.len()];
    for (k, &i) in below.iter().enumerate() {
        below_local[i] = k;
    }
    // top-grade basis sorted by Alexander level
    let mut order: Vec<usize> = (0..data.members.len()).collect();
    let level = |k: usize| kc.generators[members[data.members[k]]].alexander;
    order.sort_by_key(|&k| (level(k), k));
    let images: Vec<BitVec> = order
        .iter()
        .map(|&k| {
            BitVec::from_indices(
                below.len(),
                filtered
                    .boundary_of(data.members[k])
                    .iter()
                    .map(|&t| below_local[t]),
            )
        })
        .collect();
    for z in kernel(&images, below.len()) {
        let cycle = BitVec::from_indices(data.members.len(), z.ones().map(|j| order[j]));
        if !data.boundaries.contains(&cycle) {
            let last = z.ones().last().expect("kernel vectors are nonzero");
            return Some(level(order[last]));
        }
    }
    None
}

/// Ranks of the graded complex keyed by `(Alexander, relative Maslov)`.
fn graded_ranks(kc: &KnotComplex, sector: u32) -> Result<BTreeMap<(i64, i64), usize>> {
    let (_, c) = kc.graded_complex(sector);
    c.check_d_squared()?;
    c.check_arrows(|s, t| t.0 == s.0 && t.1 == s.1 - 1)?;
    Ok(c.homology_ranks()?)
}

pub fn compute_all(params: TwoBridgeParams, options: &ComputeOptions) -> Result<InvariantReport> {
    let kc = KnotComplex::build(params)?;
    let p = kc.p() as u32;
    let diagram = &kc.diagram;
    let periodic = periodic_domain_rank(diagram)?;
    let dinv = d_invariants(&params);
    let calibration: Calibration = calibrate_spinc_to_d_labels(&dinv, options.calibration_unit);

    let mut sectors = Vec::with_capacity(p as usize);
    let mut knot_terms: Vec<(i64, i64)> = Vec::new();
    for s in 0..p {
        let d = calibration.d_of(&dinv, s);
        let graded = graded_ranks(&kc, s)?;

        let (members, filtered) = kc.filtered_complex(s);
        filtered.check_d_squared()?;
        let alex = |i: usize| kc.generators[members[i]].alexander;
        filtered.check_arrows(|a, b| *b == *a - 1)?;
        for i in 0..filtered.len() {
            if filtered.boundary_of(i).iter().any(|&t| alex(t) > alex(i)) {
                return Err(CheckError::Inhomogeneous(
                    "filtered arrow raises Alexander level".into(),
                )
                .into());
            }
        }
        let total = filtered.homology_ranks()?;
        let (&top, _) = total
            .iter()
            .next_back()
            .ok_or(CheckError::EmptyHomology(s))?;
        let filtered_rank: usize = total.values().sum();
        let shift = d - Rational64::from_integer(top);
        // anchored parity must agree with the Z/2 grading, top class even
        for &i in &members {
            let g = &kc.generators[i];
            if (g.maslov_rel - top - g.z2 as i64).rem_euclid(2) != 0 {
                return Err(CheckError::Consistency(format!(
                    "sector {s}: Z/2 grading disagrees with anchoring"
                ))
                .into());
            }
        }
        let tau = tau(&kc, &members, &filtered, top).ok_or(CheckError::EmptyHomology(s))?;

        let hfk: Vec<HfkEntry> = graded
            .iter()
            .map(|(&(a, m), &rank)| HfkEntry {
                alexander: a,
                maslov: Rational64::from_integer(m) + shift,
                rank,
            })
            .collect();
        let hfk_knot = v_division(&hfk).ok_or(CheckError::NotDivisibleByV { sector: s })?;
        for e in &hfk_knot {
            let parity = (e.maslov - d).to_integer().rem_euclid(2);
            let sign = if parity == 0 { 1 } else { -1 };
            knot_terms.push((e.alexander, sign * e.rank as i64));
        }

        let minus = match options.minus_truncation {
            Some(n) => Some(minus_report(&kc, s, n, top, shift)?),
            None => None,
        };
        sectors.push(SectorReport {
            label: SpinCLabel(s).signed(p),
            d_label: calibration.recursion_label(&dinv, s),
            d,
            tau,
            hfk,
            hfk_knot,
            filtered_rank,
            minus,
        });
    }
    let knot_euler = LaurentPoly::from_terms(knot_terms);
    if knot_euler != kc.alexander.polynomial {
        return Err(CheckError::Consistency(format!(
            "Euler characteristic of the knot tables {knot_euler} differs from {}",
            kc.alexander.polynomial
        ))
        .into());
    }
    for s in 0..p {
        let (a, b) = (
            &sectors[s as usize],
            &sectors[SpinCLabel(s).conjugate(p).0 as usize],
        );
        if (a.d, a.tau, &a.hfk) != (b.d, b.tau, &b.hfk) {
            return Err(CheckError::Consistency(format!(
                "sectors {} and {} are not conjugate",
                a.label, b.label
            ))
            .into());
        }
    }
    sectors.sort_by_key(|s| s.label);

    let mut flavors = vec!["graded".to_string(), "filtered".to_string()];
    if options.minus_truncation.is_some() {
        flavors.push("minus".into());
    }
    let diagnostics = Diagnostics {
        generators: kc.generators.len(),
        vertices: diagram.vertex_count(),
        faces: diagram.face_count(),
        edges: diagram.edge_count(),
        parallelograms: kc.parallelograms.len(),
        max_parallelogram_height: kc
            .parallelograms
            .iter()
            .map(|p| p.height)
            .max()
            .unwrap_or(0),
        periodic_domain_rank: periodic,
        alexander_shift: kc.alexander.shift,
        calibration_unit: calibration.unit,
        calibration_ambiguous: calibration.ambiguous,
        flavors,
        oracle_validated: None,
        version: crate::VERSION.to_string(),
    };
    Ok(InvariantReport {
        params,
        diagnostics,
        sectors,
        alexander_polynomial: kc.alexander.polynomial.clone(),
    })
}

/// Lowest grading of the minus window, relative to the top class: below
/// this the truncation at `N` starts to show.
pub fn minus_window_depth(truncation: u32) -> i64 {
    2 * (truncation as i64 - 1)
}

fn minus_report(
    kc: &KnotComplex,
    sector: u32,
    n: u32,
    top: i64,
    shift: Rational64,
) -> Result<MinusReport> {
    let c = minus::minus_complex(kc, sector, n);
    c.check_d_squared()?;
    c.check_arrows(|a, b| *b == *a - 1)?;
    let ranks = c.homology_ranks()?;
    let floor = top - minus_window_depth(n);
    Ok(MinusReport {
        truncation: n,
        window_floor: Rational64::from_integer(floor) + shift,
        ranks: ranks
            .iter()
            .filter(|(m, _)| **m >= floor)
            .rev()
            .map(|(m, r)| GradedRank {
                maslov: Rational64::from_integer(*m) + shift,
                rank: *r,
            })
            .collect(),
        u_actions_agree: minus::u_actions_agree(kc, sector, n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: i64, m: (i64, i64), r: usize) -> HfkEntry {
        HfkEntry {
            alexander: a,
            maslov: Rational64::new(m.0, m.1),
            rank: r,
        }
    }

    #[test]
    fn v_division_trefoil_pattern() {
        // (1,2,2,1) at A = -2..1, M = d-3..d with d = -1/2
        let p = vec![
            e(-2, (-7, 2), 1),
            e(-1, (-5, 2), 2),
            e(0, (-3, 2), 2),
            e(1, (-1, 2), 1),
        ];
        let q = v_division(&p).unwrap();
        assert_eq!(
            q,
            vec![e(-1, (-5, 2), 1), e(0, (-3, 2), 1), e(1, (-1, 2), 1)]
        );
        assert_eq!(v_division(&[e(0, (0, 1), 1)]), None);
    }

    #[test]
    fn fraction_strings() {
        let entry = e(1, (-1, 2), 3);
        let s = serde_json::to_string(&entry).unwrap();
        assert_eq!(s, r#"{"A":1,"M":"-1/2","rank":3}"#);
        assert_eq!(serde_json::from_str::<HfkEntry>(&s).unwrap(), entry);
    }
}
