//! Finite graded chain complexes over F₂.

use std::collections::{BTreeMap, HashMap};

use crate::error::CheckError;
use crate::f2::{BitVec, Echelon};

/// Basis elements carry a grading key; `boundary[i]` lists the basis
/// elements in `∂ e_i` (each at most once).
#[derive(Debug, Clone)]
pub struct ChainComplex<G> {
    grades: Vec<G>,
    boundary: Vec<Vec<usize>>,
}

impl<G: Ord + Clone + std::fmt::Debug> ChainComplex<G> {
    /// Arrows are `(source, target)` pairs; repeated arrows cancel mod 2.
    pub fn new(grades: Vec<G>, arrows: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let n = grades.len();
        let mut boundary: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (s, t) in arrows {
            boundary[s].push(t);
        }
        for col in &mut boundary {
            col.sort_unstable();
            let mut out: Vec<usize> = Vec::with_capacity(col.len());
            for &t in col.iter() {
                if out.last() == Some(&t) {
                    out.pop();
                } else {
                    out.push(t);
                }
            }
            *col = out;
        }
        ChainComplex { grades, boundary }
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn grade(&self, i: usize) -> &G {
        &self.grades[i]
    }

    pub fn grades(&self) -> &[G] {
        &self.grades
    }

    pub fn boundary_of(&self, i: usize) -> &[usize] {
        &self.boundary[i]
    }

    pub fn arrow_count(&self) -> usize {
        self.boundary.iter().map(Vec::len).sum()
    }

    pub fn check_d_squared(&self) -> Result<(), CheckError> {
        let mut acc: HashMap<usize, u8> = HashMap::new();
        for (i, col) in self.boundary.iter().enumerate() {
            acc.clear();
            for &t in col {
                for &u in &self.boundary[t] {
                    *acc.entry(u).or_insert(0) ^= 1;
                }
            }
            if let Some((u, _)) = acc.iter().find(|(_, v)| **v == 1) {
                return Err(CheckError::DSquaredNonzero(format!(
                    "∂∂ e{i} contains e{u}"
                )));
            }
        }
        Ok(())
    }

    /// Checks `allowed(source grade, target grade)` on every arrow.
    pub fn check_arrows(&self, allowed: impl Fn(&G, &G) -> bool) -> Result<(), CheckError> {
        for (i, col) in self.boundary.iter().enumerate() {
            for &t in col {
                if !allowed(&self.grades[i], &self.grades[t]) {
                    return Err(CheckError::Inhomogeneous(format!(
                        "arrow {:?} -> {:?}",
                        self.grades[i], self.grades[t]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Basis indices grouped by grade, with each element's position in its group.
    fn blocks(&self) -> (BTreeMap<G, Vec<usize>>, Vec<usize>) {
        let mut blocks: BTreeMap<G, Vec<usize>> = BTreeMap::new();
        let mut local = vec![0; self.len()];
        for (i, g) in self.grades.iter().enumerate() {
            let b = blocks.entry(g.clone()).or_default();
            local[i] = b.len();
            b.push(i);
        }
        (blocks, local)
    }

    /// Homology rank in each grade. Requires every grade to map into a single
    /// grade, which holds for a homogeneous differential.
    pub fn homology_ranks(&self) -> Result<BTreeMap<G, usize>, CheckError> {
        let (blocks, local) = self.blocks();
        let mut rank_in: BTreeMap<G, usize> = BTreeMap::new();
        let mut rank_out: BTreeMap<G, usize> = BTreeMap::new();
        for (g, members) in &blocks {
            let mut target: Option<&G> = None;
            for &i in members {
                for &t in &self.boundary[i] {
                    match target {
                        None => target = Some(&self.grades[t]),
                        Some(tg) if tg != &self.grades[t] => {
                            return Err(CheckError::Inhomogeneous(format!(
                                "grade {g:?} hits two grades"
                            )))
                        }
                        _ => {}
                    }
                }
            }
            let Some(tg) = target else { continue };
            let width = blocks[tg].len();
            let mut ech = Echelon::new(width);
            for &i in members {
                ech.insert(BitVec::from_indices(
                    width,
                    self.boundary[i].iter().map(|&t| local[t]),
                ));
            }
            rank_out.insert(g.clone(), ech.rank());
            *rank_in.entry(tg.clone()).or_insert(0) += ech.rank();
        }
        let mut out = BTreeMap::new();
        for (g, members) in &blocks {
            let h = members.len()
                - rank_out.get(g).copied().unwrap_or(0)
                - rank_in.get(g).copied().unwrap_or(0);
            if h > 0 {
                out.insert(g.clone(), h);
            }
        }
        Ok(out)
    }

    /// Cycles supported in grade `g` (as basis index lists) and an echelon
    /// form of the boundaries landing there, both in the grade's local indices.
    pub fn cycles_and_boundaries(&self, g: &G) -> GradeData {
        let members: Vec<usize> = (0..self.len()).filter(|&i| &self.grades[i] == g).collect();
        let mut local = HashMap::new();
        for (k, &i) in members.iter().enumerate() {
            local.insert(i, k);
        }
        let mut boundaries = Echelon::new(members.len());
        for col in &self.boundary {
            if col.first().is_some_and(|t| local.contains_key(t)) {
                boundaries.insert(BitVec::from_indices(
                    members.len(),
                    col.iter().map(|t| local[t]),
                ));
            }
        }
        GradeData {
            members,
            boundaries,
        }
    }

    /// Image of a chain (given as a set of basis indices) under `∂`.
    pub fn apply(&self, chain: impl IntoIterator<Item = usize>) -> BitVec {
        let mut out = BitVec::zeros(self.len());
        for i in chain {
            for &t in &self.boundary[i] {
                out.flip(t);
            }
        }
        out
    }
}

/// Basis of one grade together with the boundaries that land in it.
#[derive(Debug, Clone)]
pub struct GradeData {
    pub members: Vec<usize>,
    pub boundaries: Echelon,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_differential_counts_basis() {
        let c: ChainComplex<i32> = ChainComplex::new(vec![0, 0, 1, 3], []);
        let h = c.homology_ranks().unwrap();
        assert_eq!(h, BTreeMap::from([(0, 2), (1, 1), (3, 1)]));
    }

    #[test]
    fn acyclic_pair_and_square() {
        // a -> b and the square x -> y1 + y2 -> 2z are both acyclic
        let c = ChainComplex::new(
            vec![1, 0, 2, 1, 1, 0],
            [(0, 1), (2, 3), (2, 4), (3, 5), (4, 5)],
        );
        c.check_d_squared().unwrap();
        let h = c.homology_ranks().unwrap();
        assert!(h.is_empty());
        let bad = ChainComplex::new(vec![2, 1, 0], [(0, 1), (1, 2)]);
        assert!(bad.check_d_squared().is_err());
    }

    #[test]
    fn repeated_arrows_cancel() {
        let c = ChainComplex::new(vec![1, 0], [(0, 1), (0, 1)]);
        assert_eq!(c.arrow_count(), 0);
    }
}
