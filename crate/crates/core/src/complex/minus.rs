//! The minus flavor, truncated to a finite complex over F₂.
//!
//! Basis elements are `U1^a U2^b x` with `a, b < N`, graded by
//! `M(x) - 2(a + b)`. A parallelogram from `x` to `y` contributes
//! `U1^a U2^b x -> U1^{a + n_{w1}} U2^{b + n_{w2}} y` whenever both powers
//! stay below `N`.

use std::collections::{BTreeMap, HashMap};

use super::{ChainComplex, KnotComplex};
use crate::diagram::Basepoint;
use crate::error::CheckError;
use crate::f2::{kernel, BitVec};

fn basis_index(n: usize, k: usize, a: usize, b: usize) -> usize {
    (k * n + a) * n + b
}

pub fn minus_complex(kc: &KnotComplex, sector: u32, truncation: u32) -> ChainComplex<i64> {
    let n = truncation as usize;
    let members = &kc.sectors[sector as usize];
    let mut local = vec![usize::MAX; kc.generators.len()];
    for (k, &i) in members.iter().enumerate() {
        local[i] = k;
    }
    let mut grades = Vec::with_capacity(members.len() * n * n);
    for &i in members {
        for a in 0..n {
            for b in 0..n {
                grades.push(kc.generators[i].maslov_rel - 2 * (a + b) as i64);
            }
        }
    }
    let mut arrows = Vec::new();
    for &k in &kc.sector_parallelograms[sector as usize] {
        let par = &kc.parallelograms[k];
        let (s, t) = (
            local[kc.index_of(&par.source)],
            local[kc.index_of(&par.target)],
        );
        let (w1, w2) = (
            par.at(Basepoint::W1) as usize,
            par.at(Basepoint::W2) as usize,
        );
        for a in 0..n.saturating_sub(w1) {
            for b in 0..n.saturating_sub(w2) {
                arrows.push((basis_index(n, s, a, b), basis_index(n, t, a + w1, b + w2)));
            }
        }
    }
    ChainComplex::new(grades, arrows)
}

pub fn minus_homology(
    kc: &KnotComplex,
    sector: u32,
    truncation: u32,
) -> Result<BTreeMap<i64, usize>, CheckError> {
    minus_complex(kc, sector, truncation).homology_ranks()
}

/// Checks that `U1` and `U2` induce the same map on homology: `(U1 + U2) z`
/// is a boundary for every cycle `z`.
pub fn u_actions_agree(kc: &KnotComplex, sector: u32, truncation: u32) -> Result<bool, CheckError> {
    let n = truncation as usize;
    let c = minus_complex(kc, sector, truncation);
    // decode basis index -> (k, a, b)
    let decode = |i: usize| (i / (n * n), (i / n) % n, i % n);
    let mut by_grade: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut local = vec![0usize; c.len()];
    for (i, slot) in local.iter_mut().enumerate() {
        let v = by_grade.entry(*c.grade(i)).or_default();
        *slot = v.len();
        v.push(i);
    }
    let mut boundary_cache: HashMap<i64, crate::f2::Echelon> = HashMap::new();
    for (&g, members) in &by_grade {
        let below = by_grade.get(&(g - 1));
        let width = below.map_or(0, Vec::len);
        let images: Vec<BitVec> = members
            .iter()
            .map(|&i| BitVec::from_indices(width, c.boundary_of(i).iter().map(|&t| local[t])))
            .collect();
        let cycles = kernel(&images, width);
        if cycles.is_empty() {
            continue;
        }
        let Some(target) = by_grade.get(&(g - 2)) else {
            continue;
        };
        let bnd = boundary_cache
            .entry(g - 2)
            .or_insert_with(|| c.cycles_and_boundaries(&(g - 2)).boundaries);
        for z in cycles {
            let mut img = BitVec::zeros(target.len());
            for j in z.ones() {
                let (k, a, b) = decode(members[j]);
                if a + 1 < n {
                    img.flip(local[basis_index(n, k, a + 1, b)]);
                }
                if b + 1 < n {
                    img.flip(local[basis_index(n, k, a, b + 1)]);
                }
            }
            if !bnd.contains(&img) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
