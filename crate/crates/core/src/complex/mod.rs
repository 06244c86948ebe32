//! Generators, parallelograms and the chain complexes they define.

mod chain;
mod minus;
mod report;

use serde::{Deserialize, Serialize};

use crate::diagram::{Basepoint, Domain, Face, Generator, GridDiagram, Vertex};
use crate::error::{CheckError, Result};
use crate::gradings::{
    absolute_alexander_shift, relative_maslov, AlexanderNormalization, LocalTables, SpinCLabel,
};
use crate::twobridge::TwoBridgeParams;

pub use chain::{ChainComplex, GradeData};
pub use minus::{minus_complex, minus_homology, u_actions_agree};
pub use report::{
    compute_all, minus_window_depth, tau, v_division, ComputeOptions, Diagnostics, HfkEntry,
    InvariantReport, MinusReport, SectorReport,
};

/// A generator with its cached gradings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorInfo {
    pub generator: Generator,
    pub sector: SpinCLabel,
    /// Absolute Alexander grading.
    pub alexander: i64,
    pub z2: u8,
    /// Maslov grading relative to the first generator of the sector.
    pub maslov_rel: i64,
}

/// An embedded parallelogram: `height` rows of `len` faces, row `t` lying in
/// strip `strip + t` and starting at column `start + t q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Parallelogram {
    pub strip: u8,
    pub start: u32,
    pub len: u32,
    pub height: u32,
    pub source: Generator,
    pub target: Generator,
    /// Multiplicities at `[w1, z1, z2, w2]`.
    pub basepoints: [u8; 4],
}

impl Parallelogram {
    pub fn at(&self, b: Basepoint) -> u8 {
        self.basepoints[b.index()]
    }

    pub fn n_w(&self) -> i64 {
        (self.at(Basepoint::W1) + self.at(Basepoint::W2)) as i64
    }

    pub fn n_z(&self) -> i64 {
        (self.at(Basepoint::Z1) + self.at(Basepoint::Z2)) as i64
    }

    pub fn faces(&self, diagram: &GridDiagram) -> Vec<Face> {
        let q = diagram.params().q();
        (0..self.height as i64)
            .flat_map(|t| {
                let row_start = self.start as i64 + t * q;
                (0..self.len as i64).map(move |u| (t, row_start + u))
            })
            .map(|(t, c)| diagram.face(self.strip as i64 + t, c))
            .collect()
    }

    pub fn domain(&self, diagram: &GridDiagram) -> Domain {
        Domain::from_faces(diagram, self.faces(diagram))
    }
}

/// Which parallelograms a differential counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Policy {
    /// Associated graded: no basepoints at all.
    Graded,
    /// Filtered hat: no `w` basepoints; `z` changes the Alexander level.
    FilteredHat,
    /// `n_{w1} = 0`, weight `U2^{n_{w2}}` truncated at `U2^N`.
    SingleU { truncation: u32 },
    /// Weight `U1^{n_{w1}} U2^{n_{w2}}` modulo `(U1^N, U2^N)`.
    Minus { truncation: u32 },
}

impl Policy {
    pub fn admits(&self, par: &Parallelogram) -> bool {
        match self {
            Policy::Graded => par.basepoints.iter().all(|&m| m == 0),
            Policy::FilteredHat => par.n_w() == 0,
            Policy::SingleU { .. } => par.at(Basepoint::W1) == 0,
            Policy::Minus { .. } => true,
        }
    }

    /// Whether a `{0,1}` domain with these basepoint multiplicities is counted.
    pub fn admits_multiplicities(&self, basepoints: [u8; 4]) -> bool {
        let probe = Parallelogram {
            strip: 0,
            start: 0,
            len: 1,
            height: 1,
            source: Generator { a: 0, b: 0 },
            target: Generator { a: 0, b: 0 },
            basepoints,
        };
        self.admits(&probe)
    }
}

/// Smallest cyclic gap between the first `m` points of `0, 2q, 4q, ...` mod `2p`,
/// for `m = 1..=p`.
fn row_gaps(p: i64, q: i64) -> Vec<i64> {
    let w = 2 * p;
    let mut set = std::collections::BTreeSet::new();
    let mut gaps = vec![w];
    let mut best = w;
    set.insert(0i64);
    for m in 1..p {
        let x = (2 * q * m).rem_euclid(w);
        let next = set
            .range(x..)
            .next()
            .copied()
            .unwrap_or(*set.iter().next().unwrap() + w);
        let prev = set
            .range(..x)
            .next_back()
            .copied()
            .unwrap_or(*set.iter().next_back().unwrap() - w);
        best = best.min(next - x).min(x - prev);
        set.insert(x);
        gaps.push(best);
    }
    gaps
}

/// All embedded parallelograms with odd width and odd height.
pub fn enumerate_parallelograms(diagram: &GridDiagram) -> Vec<Parallelogram> {
    let p = diagram.p() as i64;
    let q = diagram.params().q();
    let w = 2 * p;
    let gaps = row_gaps(p, q);
    let bp_faces: Vec<Face> = Basepoint::ALL
        .iter()
        .map(|&b| diagram.basepoint_face(b))
        .collect();
    let mut out = Vec::new();
    for strip in 0..2u8 {
        for start in 0..w {
            for len in (1..w).step_by(2) {
                for height in (1..w).step_by(2) {
                    // rows of equal parity are (height+1)/2 and (height-1)/2 copies
                    // shifted by 2q; they must not overlap
                    let m = ((height + 1) / 2) as usize;
                    if m > gaps.len() || gaps[m - 1] < len {
                        break;
                    }
                    let top = (strip as i64 + height) % 2;
                    let c = |row: i64, col: i64| Vertex::new(row as u8, diagram.col(col));
                    let bl = c(strip as i64, start);
                    let br = c(strip as i64, start + len);
                    let tl = c(top, start + height * q);
                    let tr = c(top, start + height * q + len);
                    let pair = |u: Vertex, v: Vertex| {
                        let (r0, r1) = if u.row == 0 { (u, v) } else { (v, u) };
                        Generator {
                            a: r0.col,
                            b: r1.col,
                        }
                    };
                    let mut basepoints = [0u8; 4];
                    for (slot, f) in basepoints.iter_mut().zip(&bp_faces) {
                        let first_t = (f.strip as i64 - strip as i64).rem_euclid(2);
                        *slot = (first_t..height)
                            .step_by(2)
                            .filter(|t| (f.start as i64 - start - t * q).rem_euclid(w) < len)
                            .count() as u8;
                    }
                    out.push(Parallelogram {
                        strip,
                        start: start as u32,
                        len: len as u32,
                        height: height as u32,
                        source: pair(bl, tr),
                        target: pair(br, tl),
                        basepoints,
                    });
                }
            }
        }
    }
    out
}

/// Everything needed to build the sector complexes of one knot.
#[derive(Debug, Clone)]
pub struct KnotComplex {
    pub diagram: GridDiagram,
    pub tables: LocalTables,
    pub generators: Vec<GeneratorInfo>,
    pub parallelograms: Vec<Parallelogram>,
    pub alexander: AlexanderNormalization,
    /// Generator indices of each sector, by label.
    pub sectors: Vec<Vec<usize>>,
    /// Parallelogram indices of each sector, by label.
    pub sector_parallelograms: Vec<Vec<usize>>,
}

impl KnotComplex {
    pub fn build(params: TwoBridgeParams) -> Result<Self> {
        let diagram = GridDiagram::build(params)?;
        let tables = LocalTables::build(&diagram);
        let p = diagram.p();
        let gens = diagram.generators();
        let normalization = absolute_alexander_shift(gens.iter().map(|g| {
            (
                tables.relative_alexander(g),
                tables.z2_maslov_of_generator(g),
            )
        }))?;
        let mut sectors: Vec<Vec<usize>> = vec![Vec::new(); p];
        let mut generators = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            let sector = tables.spinc_of_generator(g);
            let reference = sectors[sector.0 as usize].first().map(|&r| gens[r]);
            let maslov_rel = match reference {
                Some(r) => relative_maslov(&diagram, g, &r)?,
                None => 0,
            };
            sectors[sector.0 as usize].push(i);
            generators.push(GeneratorInfo {
                generator: *g,
                sector,
                alexander: tables.relative_alexander(g) + normalization.shift,
                z2: tables.z2_maslov_of_generator(g),
                maslov_rel,
            });
        }
        let parallelograms = enumerate_parallelograms(&diagram);
        let mut kc = KnotComplex {
            diagram,
            tables,
            generators,
            parallelograms,
            alexander: normalization,
            sectors,
            sector_parallelograms: vec![Vec::new(); p],
        };
        let mut by_sector = vec![Vec::new(); p];
        for (k, par) in kc.parallelograms.iter().enumerate() {
            let (x, y) = (kc.info(&par.source), kc.info(&par.target));
            if x.sector != y.sector {
                return Err(CheckError::Consistency(format!(
                    "parallelogram {par:?} crosses sectors"
                ))
                .into());
            }
            if x.maslov_rel - y.maslov_rel != 1 - 2 * par.n_w() {
                return Err(CheckError::Consistency(format!(
                    "parallelogram {par:?} has the wrong Maslov drop"
                ))
                .into());
            }
            if x.alexander - y.alexander != par.n_z() - par.n_w() {
                return Err(CheckError::Consistency(format!(
                    "parallelogram {par:?} has the wrong Alexander drop"
                ))
                .into());
            }
            by_sector[x.sector.0 as usize].push(k);
        }
        kc.sector_parallelograms = by_sector;
        Ok(kc)
    }

    pub fn params(&self) -> &TwoBridgeParams {
        self.diagram.params()
    }

    pub fn p(&self) -> usize {
        self.diagram.p()
    }

    pub fn index_of(&self, g: &Generator) -> usize {
        g.a as usize * self.p() + g.b as usize / 2
    }

    pub fn info(&self, g: &Generator) -> &GeneratorInfo {
        &self.generators[self.index_of(g)]
    }

    /// The complex of one sector for a hat-type policy, graded by
    /// `grade(generator)`. Returns the sector's generator indices alongside.
    pub fn hat_complex<G: Ord + Clone + std::fmt::Debug>(
        &self,
        sector: u32,
        policy: Policy,
        grade: impl Fn(&GeneratorInfo) -> G,
    ) -> (Vec<usize>, ChainComplex<G>) {
        let members = self.sectors[sector as usize].clone();
        let mut local = vec![usize::MAX; self.generators.len()];
        for (k, &i) in members.iter().enumerate() {
            local[i] = k;
        }
        let grades = members
            .iter()
            .map(|&i| grade(&self.generators[i]))
            .collect();
        let arrows = self.sector_parallelograms[sector as usize]
            .iter()
            .map(|&k| &self.parallelograms[k])
            .filter(|par| policy.admits(par))
            .map(|par| {
                (
                    local[self.index_of(&par.source)],
                    local[self.index_of(&par.target)],
                )
            });
        (members, ChainComplex::new(grades, arrows))
    }

    /// Associated graded complex, bigraded by `(Alexander, relative Maslov)`.
    pub fn graded_complex(&self, sector: u32) -> (Vec<usize>, ChainComplex<(i64, i64)>) {
        self.hat_complex(sector, Policy::Graded, |g| (g.alexander, g.maslov_rel))
    }

    /// Filtered hat complex, graded by relative Maslov.
    pub fn filtered_complex(&self, sector: u32) -> (Vec<usize>, ChainComplex<i64>) {
        self.hat_complex(sector, Policy::FilteredHat, |g| g.maslov_rel)
    }

    /// The `n_{w1} = 0` complex with `U2` powers below `truncation`, graded by
    /// relative Maslov minus twice the `U2` power.
    pub fn single_u_complex(&self, sector: u32, truncation: u32) -> ChainComplex<i64> {
        let n = truncation as usize;
        let members = &self.sectors[sector as usize];
        let mut local = vec![usize::MAX; self.generators.len()];
        for (k, &i) in members.iter().enumerate() {
            local[i] = k;
        }
        let idx = |k: usize, b: usize| k * n + b;
        let mut grades = Vec::with_capacity(members.len() * n);
        for &i in members {
            for b in 0..n {
                grades.push(self.generators[i].maslov_rel - 2 * b as i64);
            }
        }
        let mut arrows = Vec::new();
        for &k in &self.sector_parallelograms[sector as usize] {
            let par = &self.parallelograms[k];
            if !(Policy::SingleU { truncation }).admits(par) {
                continue;
            }
            let (s, t) = (
                local[self.index_of(&par.source)],
                local[self.index_of(&par.target)],
            );
            let w2 = par.at(Basepoint::W2) as usize;
            for b in 0..n.saturating_sub(w2) {
                arrows.push((idx(s, b), idx(t, b + w2)));
            }
        }
        ChainComplex::new(grades, arrows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twobridge::normalize_params;

    fn knot(p: i64, q: i64) -> KnotComplex {
        KnotComplex::build(normalize_params(p, q).unwrap()).unwrap()
    }

    #[test]
    fn generator_counts() {
        assert_eq!(knot(3, 1).generators.len(), 18);
        assert_eq!(knot(5, 3).generators.len(), 50);
        let k = knot(7, 3);
        assert_eq!(k.generators.len(), 98);
        assert!(k.sectors.iter().all(|s| s.len() == 14));
    }

    #[test]
    fn generator_index_round_trip() {
        let k = knot(7, -3);
        for (i, g) in k.generators.iter().enumerate() {
            assert_eq!(k.index_of(&g.generator), i);
        }
    }

    #[test]
    fn gaps_match_brute_force() {
        for (p, q) in [(3, 1), (7, 3), (11, -5), (13, 5)] {
            let gaps = row_gaps(p, q);
            for m in 1..=p as usize {
                let mut pts: Vec<i64> = (0..m as i64)
                    .map(|k| (2 * q * k).rem_euclid(2 * p))
                    .collect();
                pts.sort();
                let mut best = 2 * p;
                for i in 0..m {
                    let next = if i + 1 < m {
                        pts[i + 1]
                    } else {
                        pts[0] + 2 * p
                    };
                    if m > 1 {
                        best = best.min(next - pts[i]);
                    }
                }
                assert_eq!(gaps[m - 1], best);
            }
        }
    }

    #[test]
    fn parallelograms_are_embedded_index_one() {
        for (p, q) in [(3, 1), (5, -3), (7, 3), (9, -1)] {
            let k = knot(p, q);
            let d = &k.diagram;
            for par in &k.parallelograms {
                let faces = par.faces(d);
                let mut uniq = faces.clone();
                uniq.sort();
                uniq.dedup();
                assert_eq!(uniq.len(), faces.len());
                let dom = par.domain(d);
                assert!(dom.connects(d, &par.source, &par.target));
                assert_eq!(dom.maslov_index(d, &par.source, &par.target), 1);
                for b in Basepoint::ALL {
                    assert_eq!(dom.at_basepoint(d, b), par.at(b) as i64);
                }
            }
        }
    }

    #[test]
    fn k31_single_strip_candidates() {
        // 2 strips x 6 starts x 3 odd widths, all with valid corners
        let k = knot(3, 1);
        assert_eq!(
            k.parallelograms.iter().filter(|p| p.height == 1).count(),
            36
        );
    }

    #[test]
    fn d_squared_all_policies() {
        for (p, q) in [(3, 1), (3, -1), (5, 1), (5, 3), (5, -3), (7, 3), (7, -5)] {
            let k = knot(p, q);
            for s in 0..p as u32 {
                k.graded_complex(s).1.check_d_squared().unwrap();
                k.filtered_complex(s).1.check_d_squared().unwrap();
                k.single_u_complex(s, 2 * p as u32)
                    .check_d_squared()
                    .unwrap();
            }
        }
    }
}
