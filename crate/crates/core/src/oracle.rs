//! Brute-force cross-checks: positive domains by backtracking over face
//! multiplicities, index-one classification, and dense homology.
//!
//! Nothing here uses the parallelogram enumeration or the block-wise
//! elimination of the main pipeline. Running time is exponential in `p`.

use std::collections::BTreeMap;

use crate::complex::{ChainComplex, KnotComplex, Parallelogram, Policy};
use crate::diagram::{Basepoint, Domain, Face, Generator, GridDiagram, Vertex};
use crate::error::CheckError;

/// Face order and corner incidences for the backtracking search.
struct Search<'a> {
    diagram: &'a GridDiagram,
    order: Vec<Face>,
    /// `(vertex index, sign)` for the four corners of each face in `order`.
    corners: Vec<[(usize, i64); 4]>,
    /// Vertices whose last incident face is at each position of `order`.
    closes: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(diagram: &'a GridDiagram) -> Self {
        let q = diagram.params().q();
        let w = diagram.width() as i64;
        let order: Vec<Face> = (0..w)
            .flat_map(|k| [diagram.face(0, k), diagram.face(1, k - q)])
            .collect();
        // a face of multiplicity m adds m to the α-boundary at BR and TL
        // and subtracts m at BL and TR
        let corners: Vec<[(usize, i64); 4]> = order
            .iter()
            .map(|&f| {
                let c = diagram.corners(f);
                [
                    (diagram.vertex_index(c.bottom_left), -1),
                    (diagram.vertex_index(c.bottom_right), 1),
                    (diagram.vertex_index(c.top_left), 1),
                    (diagram.vertex_index(c.top_right), -1),
                ]
            })
            .collect();
        let mut last = vec![0usize; diagram.vertex_count()];
        for (i, cs) in corners.iter().enumerate() {
            for &(v, _) in cs {
                last[v] = i;
            }
        }
        let mut closes = vec![Vec::new(); order.len()];
        for (v, &i) in last.iter().enumerate() {
            closes[i].push(v);
        }
        Search {
            diagram,
            order,
            corners,
            closes,
        }
    }

    /// Depth-first search over multiplicities `0..=max_mult` with total at
    /// most `budget`. `accept(vertex, corner, closed)` is checked when a
    /// vertex's last face is assigned, where `closed` counts the negative and
    /// positive corners of closed vertices so far; `leaf` sees each complete
    /// assignment.
    fn run(
        &self,
        max_mult: i64,
        budget: i64,
        accept: &dyn Fn(usize, i64, [usize; 2]) -> bool,
        leaf: &mut dyn FnMut(&[i64], &[i64]),
    ) {
        let mut mult = vec![0i64; self.order.len()];
        let mut corner = vec![0i64; self.diagram.vertex_count()];
        self.step(
            0,
            max_mult,
            budget,
            [0, 0],
            &mut mult,
            &mut corner,
            accept,
            leaf,
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn step(
        &self,
        i: usize,
        max_mult: i64,
        budget: i64,
        closed: [usize; 2],
        mult: &mut [i64],
        corner: &mut [i64],
        accept: &dyn Fn(usize, i64, [usize; 2]) -> bool,
        leaf: &mut dyn FnMut(&[i64], &[i64]),
    ) {
        if i == self.order.len() {
            leaf(mult, corner);
            return;
        }
        for m in 0..=max_mult.min(budget) {
            mult[i] = m;
            for &(v, s) in &self.corners[i] {
                corner[v] += s * m;
            }
            let mut now = closed;
            let ok = self.closes[i].iter().all(|&v| {
                match corner[v].signum() {
                    -1 => now[0] += 1,
                    1 => now[1] += 1,
                    _ => {}
                }
                accept(v, corner[v], now)
            });
            if ok {
                self.step(i + 1, max_mult, budget - m, now, mult, corner, accept, leaf);
            }
            for &(v, s) in &self.corners[i] {
                corner[v] -= s * m;
            }
        }
        mult[i] = 0;
    }

    fn domain(&self, mult: &[i64]) -> Domain {
        let mut out = vec![0i64; self.diagram.face_count()];
        for (f, &m) in self.order.iter().zip(mult) {
            out[self.diagram.face_index(*f)] = m;
        }
        Domain::from_multiplicities(out)
    }

    /// Four times the Maslov index: each face counts a quarter at each of
    /// its corners that lies in `x` or `y`.
    fn four_mu(&self, mult: &[i64], x: &Generator, y: &Generator) -> i64 {
        let marked: Vec<usize> = x
            .vertices()
            .iter()
            .chain(y.vertices().iter())
            .map(|&v| self.diagram.vertex_index(v))
            .collect();
        self.corners
            .iter()
            .zip(mult)
            .map(|(cs, &m)| {
                m * cs
                    .iter()
                    .map(|(v, _)| marked.iter().filter(|&&u| u == *v).count() as i64)
                    .sum::<i64>()
            })
            .sum()
    }
}

/// All nonnegative domains from `x` to `y` with total multiplicity at most `bound`.
pub fn enumerate_positive_domains(
    diagram: &GridDiagram,
    x: &Generator,
    y: &Generator,
    bound: i64,
) -> Vec<Domain> {
    let search = Search::new(diagram);
    let target: Vec<i64> = diagram
        .vertices()
        .map(|v| y.contains(v) as i64 - x.contains(v) as i64)
        .collect();
    let mut out = Vec::new();
    search.run(bound, bound, &|v, c, _| c == target[v], &mut |mult, _| {
        out.push(search.domain(mult))
    });
    out
}

/// Default multiplicity bound for domain enumeration.
pub fn default_bound(diagram: &GridDiagram) -> i64 {
    2 * diagram.p() as i64
}

/// An index-one domain with multiplicities in `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndexOneDomain {
    pub source: Generator,
    pub target: Generator,
    /// Face multiplicities, by face index.
    pub multiplicities: Vec<i64>,
    /// Multiplicities at `[w1, z1, z2, w2]`.
    pub basepoints: [u8; 4],
}

fn generator_from(diagram: &GridDiagram, vs: &[Vertex]) -> Option<Generator> {
    let [u, v] = vs else { return None };
    let (r0, r1) = match (u.row, v.row) {
        (0, 1) => (u, v),
        (1, 0) => (v, u),
        _ => return None,
    };
    let g = Generator {
        a: r0.col,
        b: r1.col,
    };
    diagram.generators().binary_search(&g).ok().map(|_| g)
}

/// Every `{0,1}` domain of Maslov index one between two generators whose
/// basepoint multiplicities the policy admits.
pub fn index_one_domains(diagram: &GridDiagram, policy: Policy) -> Vec<IndexOneDomain> {
    let search = Search::new(diagram);
    let gens = diagram.generators();
    let bp_faces: Vec<usize> = Basepoint::ALL
        .iter()
        .map(|&b| diagram.face_index(diagram.basepoint_face(b)))
        .collect();
    let faces = diagram.face_count() as i64;
    // at most two vertices leave and two arrive
    let accept =
        |_v: usize, c: i64, closed: [usize; 2]| c.abs() <= 1 && closed[0] <= 2 && closed[1] <= 2;
    let mut out = Vec::new();
    search.run(1, faces, &accept, &mut |mult, corner| {
        let leaving: Vec<Vertex> = (0..corner.len())
            .filter(|&v| corner[v] < 0)
            .map(|v| diagram.vertex_at(v))
            .collect();
        let arriving: Vec<Vertex> = (0..corner.len())
            .filter(|&v| corner[v] > 0)
            .map(|v| diagram.vertex_at(v))
            .collect();
        let domain = search.domain(mult);
        let m = domain.multiplicities();
        let mut basepoints = [0u8; 4];
        for (slot, &f) in basepoints.iter_mut().zip(&bp_faces) {
            *slot = m[f] as u8;
        }
        if !policy.admits_multiplicities(basepoints) {
            return;
        }
        for x in &gens {
            let xs = x.vertices();
            if !leaving.iter().all(|v| xs.contains(v)) {
                continue;
            }
            let mut ys: Vec<Vertex> = xs
                .iter()
                .filter(|v| !leaving.contains(v))
                .copied()
                .collect();
            ys.extend(arriving.iter().copied());
            let Some(y) = generator_from(diagram, &ys) else {
                continue;
            };
            if search.four_mu(mult, x, &y) == 4 {
                out.push(IndexOneDomain {
                    source: *x,
                    target: y,
                    multiplicities: m.to_vec(),
                    basepoints,
                });
            }
        }
    });
    out.sort();
    out
}

fn parallelogram_record(diagram: &GridDiagram, par: &Parallelogram) -> IndexOneDomain {
    IndexOneDomain {
        source: par.source,
        target: par.target,
        multiplicities: par.domain(diagram).multiplicities().to_vec(),
        basepoints: par.basepoints,
    }
}

/// Checks that the brute-force index-one domains are exactly the
/// parallelograms counted under `policy`.
pub fn classify_index_one(
    kc: &KnotComplex,
    policy: Policy,
) -> Result<Vec<IndexOneDomain>, CheckError> {
    let d = &kc.diagram;
    let found = index_one_domains(d, policy);
    let mut expected: Vec<IndexOneDomain> = kc
        .parallelograms
        .iter()
        .filter(|par| policy.admits(par))
        .map(|par| parallelogram_record(d, par))
        .collect();
    expected.sort();
    if found != expected {
        let missing = expected.iter().filter(|e| !found.contains(e)).count();
        let extra = found.iter().filter(|e| !expected.contains(e)).count();
        return Err(CheckError::MismatchAgainstParallelograms(format!(
            "{policy:?}: {missing} parallelograms not found, {extra} domains not parallelograms"
        )));
    }
    for e in &found {
        if kc.info(&e.source).sector != kc.info(&e.target).sector {
            return Err(CheckError::MismatchAgainstParallelograms(
                "index-one domain joins two sectors".into(),
            ));
        }
    }
    Ok(found)
}

/// Homology ranks by dense Gaussian elimination of the whole boundary matrix.
/// Requires a homogeneous differential.
pub fn naive_homology<G: Ord + Clone + std::fmt::Debug>(c: &ChainComplex<G>) -> BTreeMap<G, usize> {
    let n = c.len();
    let column = |i: usize| {
        let mut col = vec![false; n];
        for &t in c.boundary_of(i) {
            col[t] = true;
        }
        col
    };
    let dense_rank = |mut rows: Vec<Vec<bool>>| {
        let mut r = 0;
        for j in 0..n {
            let Some(pivot) = (r..rows.len()).find(|&i| rows[i][j]) else {
                continue;
            };
            rows.swap(r, pivot);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[j] {
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x ^= *y;
                    }
                }
            }
            r += 1;
        }
        r
    };
    let mut grades: Vec<G> = c.grades().to_vec();
    grades.sort();
    grades.dedup();
    let mut out = BTreeMap::new();
    for g in grades {
        let members: Vec<usize> = (0..n).filter(|&i| *c.grade(i) == g).collect();
        let kernel = members.len() - dense_rank(members.iter().map(|&i| column(i)).collect());
        let landing: Vec<Vec<bool>> = (0..n)
            .filter(|&i| {
                !c.boundary_of(i).is_empty() && c.boundary_of(i).iter().all(|&t| *c.grade(t) == g)
            })
            .map(column)
            .collect();
        let h = kernel - dense_rank(landing);
        if h > 0 {
            out.insert(g, h);
        }
    }
    out
}

/// The sector complex of `policy` built from explicit arrows, graded by
/// `(Alexander or 0, relative Maslov - 2 * total U power)`.
pub fn complex_from_arrows(
    kc: &KnotComplex,
    sector: u32,
    policy: Policy,
    arrows: &[IndexOneDomain],
) -> ChainComplex<(i64, i64)> {
    let members = &kc.sectors[sector as usize];
    let (n1, n2) = match policy {
        Policy::Graded | Policy::FilteredHat => (1, 1),
        Policy::SingleU { truncation } => (1, truncation as usize),
        Policy::Minus { truncation } => (truncation as usize, truncation as usize),
    };
    let mut local = vec![usize::MAX; kc.generators.len()];
    for (k, &i) in members.iter().enumerate() {
        local[i] = k;
    }
    let idx = |k: usize, a: usize, b: usize| (k * n1 + a) * n2 + b;
    let mut grades = Vec::with_capacity(members.len() * n1 * n2);
    for &i in members {
        let g = &kc.generators[i];
        let a_key = if policy == Policy::Graded {
            g.alexander
        } else {
            0
        };
        for a in 0..n1 {
            for b in 0..n2 {
                grades.push((a_key, g.maslov_rel - 2 * (a + b) as i64));
            }
        }
    }
    let mut edges = Vec::new();
    for e in arrows {
        let (s, t) = (local[kc.index_of(&e.source)], local[kc.index_of(&e.target)]);
        if s == usize::MAX || t == usize::MAX {
            continue;
        }
        let (w1, w2) = (
            e.basepoints[Basepoint::W1.index()] as usize,
            e.basepoints[Basepoint::W2.index()] as usize,
        );
        for a in 0..n1.saturating_sub(w1) {
            for b in 0..n2.saturating_sub(w2) {
                edges.push((idx(s, a, b), idx(t, a + w1, b + w2)));
            }
        }
    }
    ChainComplex::new(grades, edges)
}

/// Runs the classification for every policy and compares the dense
/// homology of the oracle's complexes with the main pipeline.
pub fn validate(kc: &KnotComplex, truncation: u32) -> Result<(), CheckError> {
    let policies = [
        Policy::Graded,
        Policy::FilteredHat,
        Policy::SingleU { truncation },
        Policy::Minus { truncation },
    ];
    for policy in policies {
        let arrows = classify_index_one(kc, policy)?;
        for s in 0..kc.p() as u32 {
            let oracle = naive_homology(&complex_from_arrows(kc, s, policy, &arrows));
            let main: BTreeMap<(i64, i64), usize> = match policy {
                Policy::Graded => kc.graded_complex(s).1.homology_ranks()?,
                Policy::FilteredHat => rekey(kc.filtered_complex(s).1.homology_ranks()?),
                Policy::SingleU { truncation } => {
                    rekey(kc.single_u_complex(s, truncation).homology_ranks()?)
                }
                Policy::Minus { truncation } => {
                    rekey(crate::complex::minus_homology(kc, s, truncation)?)
                }
            };
            if oracle != main {
                return Err(CheckError::MismatchAgainstParallelograms(format!(
                    "{policy:?}, sector {s}: homology {oracle:?} vs {main:?}"
                )));
            }
        }
    }
    Ok(())
}

fn rekey(m: BTreeMap<i64, usize>) -> BTreeMap<(i64, i64), usize> {
    m.into_iter().map(|(g, r)| ((0, g), r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twobridge::normalize_params;

    fn knot(p: i64, q: i64) -> KnotComplex {
        KnotComplex::build(normalize_params(p, q).unwrap()).unwrap()
    }

    #[test]
    fn zero_bound_gives_zero_domain() {
        let k = knot(3, 1);
        let x = k.diagram.generators()[0];
        let ds = enumerate_positive_domains(&k.diagram, &x, &x, 0);
        assert_eq!(ds.len(), 1);
        assert!(ds[0].is_zero());
    }

    #[test]
    fn large_bound_includes_whole_torus() {
        let k = knot(3, 1);
        let x = k.diagram.generators()[4];
        let ds = enumerate_positive_domains(&k.diagram, &x, &x, 4 * 3);
        assert!(ds
            .iter()
            .any(|d| d.multiplicities().iter().all(|&m| m == 1)));
        assert!(ds.iter().all(|d| d.connects(&k.diagram, &x, &x)));
    }

    #[test]
    fn parallelogram_found_with_its_area_as_bound() {
        let k = knot(5, 3);
        for par in k.parallelograms.iter().step_by(7) {
            let area = (par.len * par.height) as i64;
            let ds = enumerate_positive_domains(&k.diagram, &par.source, &par.target, area);
            assert!(ds.contains(&par.domain(&k.diagram)), "{par:?}");
        }
    }

    #[test]
    fn k31_graded_arrows_match() {
        let k = knot(3, 1);
        let found = classify_index_one(&k, Policy::Graded).unwrap();
        assert!(!found.is_empty());
    }

    #[test]
    fn k53_filtered_arrows_match() {
        classify_index_one(&knot(5, 3), Policy::FilteredHat).unwrap();
    }

    #[test]
    fn naive_homology_zero_differential() {
        let c: ChainComplex<i32> = ChainComplex::new(vec![2, 2, 5], []);
        assert_eq!(naive_homology(&c), BTreeMap::from([(2, 2), (5, 1)]));
    }

    #[test]
    fn full_validation_small() {
        for (p, q) in [(3, 1), (3, -1), (5, 1)] {
            validate(&knot(p, q), 2 * p as u32).unwrap();
        }
    }
}
