//! Domains: integer 2-chains on the faces of the diagram.
//!
//! Every face is a quadrilateral with four right-angle corners, so its Euler
//! measure vanishes and the Maslov index of a domain is just the sum of its
//! point measures at the two ends.

use num_rational::Rational64;

use super::{Basepoint, Face, Generator, GridDiagram, Vertex};
use crate::error::CheckError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    mult: Vec<i64>,
}

impl Domain {
    pub fn zero(diagram: &GridDiagram) -> Self {
        Domain {
            mult: vec![0; diagram.face_count()],
        }
    }

    pub fn from_multiplicities(mult: Vec<i64>) -> Self {
        Domain { mult }
    }

    pub fn from_faces(diagram: &GridDiagram, faces: impl IntoIterator<Item = Face>) -> Self {
        let mut d = Self::zero(diagram);
        for f in faces {
            d.mult[diagram.face_index(f)] += 1;
        }
        d
    }

    pub fn multiplicities(&self) -> &[i64] {
        &self.mult
    }

    pub fn at(&self, diagram: &GridDiagram, f: Face) -> i64 {
        self.mult[diagram.face_index(f)]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.mult.iter().all(|&m| m >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    pub fn add(&self, other: &Domain) -> Domain {
        Domain {
            mult: self
                .mult
                .iter()
                .zip(&other.mult)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scaled(&self, k: i64) -> Domain {
        Domain {
            mult: self.mult.iter().map(|a| a * k).collect(),
        }
    }

    pub fn at_basepoint(&self, diagram: &GridDiagram, b: Basepoint) -> i64 {
        self.at(diagram, diagram.basepoint_face(b))
    }

    pub fn n_w(&self, diagram: &GridDiagram) -> i64 {
        self.at_basepoint(diagram, Basepoint::W1) + self.at_basepoint(diagram, Basepoint::W2)
    }

    pub fn n_z(&self, diagram: &GridDiagram) -> i64 {
        self.at_basepoint(diagram, Basepoint::Z1) + self.at_basepoint(diagram, Basepoint::Z2)
    }

    /// Coefficient of the oriented `α`-edge from `V(row, k)` to `V(row, k+1)`
    /// in `∂D`: face above minus face below.
    pub fn alpha_edge(&self, diagram: &GridDiagram, row: u8, k: i64) -> i64 {
        let q = diagram.params().q();
        let r = row as i64;
        self.at(diagram, diagram.face(r, k)) - self.at(diagram, diagram.face(1 - r, k - q))
    }

    /// Coefficient of `v` in the boundary of the `α` part of `∂D`.
    pub fn alpha_corner(&self, diagram: &GridDiagram, v: Vertex) -> i64 {
        let k = v.col as i64;
        self.alpha_edge(diagram, v.row, k - 1) - self.alpha_edge(diagram, v.row, k)
    }

    /// Whether this domain connects `x` to `y`.
    pub fn connects(&self, diagram: &GridDiagram, x: &Generator, y: &Generator) -> bool {
        diagram
            .vertices()
            .all(|v| self.alpha_corner(diagram, v) == y.contains(v) as i64 - x.contains(v) as i64)
    }

    /// Average of the four face multiplicities around `v`.
    pub fn point_measure(&self, diagram: &GridDiagram, v: Vertex) -> Rational64 {
        let s: i64 = diagram
            .faces_around(v)
            .iter()
            .map(|&f| self.at(diagram, f))
            .sum();
        Rational64::new(s, 4)
    }

    /// Maslov index of a domain from `x` to `y`.
    pub fn maslov_index(&self, diagram: &GridDiagram, x: &Generator, y: &Generator) -> i64 {
        let m: Rational64 = x
            .vertices()
            .iter()
            .chain(y.vertices().iter())
            .map(|&v| self.point_measure(diagram, v))
            .sum();
        debug_assert!(m.is_integer());
        m.to_integer()
    }

    /// Change of the relative Maslov grading along the domain, `μ - 2 n_w`.
    pub fn maslov_drop(&self, diagram: &GridDiagram, x: &Generator, y: &Generator) -> i64 {
        self.maslov_index(diagram, x, y) - 2 * self.n_w(diagram)
    }
}

/// A domain from `x` to `y`, if one exists. It is unique up to periodic
/// domains; this one has `D(0,0) = D(0,1) = 0`.
pub fn solve_domain(diagram: &GridDiagram, x: &Generator, y: &Generator) -> Option<Domain> {
    let p = diagram.p() as i64;
    let q = diagram.params().q();
    let w = diagram.width() as i64;
    let delta = |row: u8, k: i64| {
        let v = Vertex::new(row, diagram.col(k));
        y.contains(v) as i64 - x.contains(v) as i64
    };
    // cum[row][k] = δ(row,1) + ... + δ(row,k); edge coefficient is a_row - cum
    let mut cum = [vec![0i64; w as usize], vec![0i64; w as usize]];
    for row in 0..2u8 {
        for k in 1..w {
            cum[row as usize][k as usize] = cum[row as usize][k as usize - 1] + delta(row, k);
        }
    }
    let cum_at = |row: usize, k: i64| cum[row][k.rem_euclid(w) as usize];
    // D(0,k) - D(0,k-2q) = b(k) = a0 + a1 - cum0(k) - cum1(k-q)
    let mut totals = [0i64; 2];
    for k in 0..w {
        totals[(k % 2) as usize] += cum_at(0, k) + cum_at(1, k - q);
    }
    if totals[0] != totals[1] || totals[0] % p != 0 {
        return None;
    }
    let (a0, a1) = (0, totals[0] / p);
    let c = |row: usize, k: i64| {
        if row == 0 {
            a0 - cum_at(0, k)
        } else {
            a1 - cum_at(1, k)
        }
    };
    let mut mult = vec![0i64; 2 * w as usize];
    for start in 0..2i64 {
        let mut k = start;
        let mut val = 0i64;
        for _ in 0..p - 1 {
            let next = (k + 2 * q).rem_euclid(w);
            val += c(0, next) + c(1, next - q);
            mult[next as usize] = val;
            k = next;
        }
    }
    for k in 0..w {
        let kq = (k + q).rem_euclid(w);
        mult[(w + k) as usize] = mult[kq as usize] - c(0, kq);
    }
    let d = Domain { mult };
    debug_assert!(d.connects(diagram, x, y));
    Some(d)
}

/// The three generators of the periodic domain lattice: the whole torus, the
/// annulus between `α` and `Jα`, and the annulus between `β` and `Jβ`.
pub fn periodic_domain_basis(diagram: &GridDiagram) -> [Domain; 3] {
    let whole = Domain::from_faces(diagram, diagram.faces());
    let alpha_annulus = Domain::from_faces(diagram, diagram.faces().filter(|f| f.strip == 0));
    let beta_annulus = Domain::from_faces(
        diagram,
        diagram
            .faces()
            .filter(|f| (f.strip as u32 + f.start).is_multiple_of(2)),
    );
    [whole, alpha_annulus, beta_annulus]
}

const CHECK_PRIME: i64 = 1_000_000_007;

fn rank_mod_prime(mut rows: Vec<Vec<i64>>) -> usize {
    let m = CHECK_PRIME;
    let inv = |a: i64| {
        let (mut r, mut b, mut e) = (1i64, a.rem_euclid(m), m - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        r
    };
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c].rem_euclid(m) != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let f = inv(rows[rank][c]);
        let pivot: Vec<i64> = rows[rank].iter().map(|v| v.rem_euclid(m) * f % m).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[c].rem_euclid(m) != 0 {
                let t = row[c].rem_euclid(m);
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a = (*a - t * b).rem_euclid(m);
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

/// Rank of the periodic domain lattice. The kernel of the corner map is
/// computed mod a large prime (an upper bound for the rational rank) and the
/// three explicit periodic domains give the matching lower bound.
pub fn periodic_domain_rank(diagram: &GridDiagram) -> Result<usize, CheckError> {
    let n = diagram.face_count();
    // corner map: one column per face, one row per vertex
    let mut matrix = vec![vec![0i64; n]; diagram.vertex_count()];
    for j in 0..n {
        let mut unit = vec![0i64; n];
        unit[j] = 1;
        let d = Domain::from_multiplicities(unit);
        for v in diagram.vertices() {
            matrix[diagram.vertex_index(v)][j] = d.alpha_corner(diagram, v);
        }
    }
    let upper = n - rank_mod_prime(matrix);
    let basis = periodic_domain_basis(diagram);
    for d in &basis {
        if diagram.vertices().any(|v| d.alpha_corner(diagram, v) != 0) {
            return Err(CheckError::Consistency(
                "basis domain is not periodic".into(),
            ));
        }
    }
    let lower = rank_mod_prime(basis.iter().map(|d| d.mult.clone()).collect());
    if lower != upper {
        return Err(CheckError::UnexpectedPeriodicDomain(upper));
    }
    Ok(upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twobridge::normalize_params;
    use proptest::prelude::*;

    fn diagram(p: i64, q: i64) -> GridDiagram {
        GridDiagram::build(normalize_params(p, q).unwrap()).unwrap()
    }

    #[test]
    fn periodic_rank_is_three() {
        for (p, q) in [
            (3, 1),
            (3, -1),
            (5, 1),
            (5, 3),
            (5, -3),
            (7, 3),
            (9, -5),
            (11, 7),
        ] {
            assert_eq!(periodic_domain_rank(&diagram(p, q)), Ok(3), "({p}, {q})");
        }
    }

    #[test]
    fn periodic_domains_are_grading_neutral() {
        let d = diagram(7, -3);
        let gens = d.generators();
        let x = gens[0];
        for pd in periodic_domain_basis(&d) {
            assert_eq!(pd.maslov_drop(&d, &x, &x), 0);
            assert_eq!(pd.n_z(&d), pd.n_w(&d));
        }
    }

    #[test]
    fn rectangle_is_a_domain() {
        // a single face goes from {BL, TR} to {BR, TL}
        let d = diagram(5, 3);
        for f in d.faces() {
            let c = d.corners(f);
            let (x, y) = if f.strip == 0 {
                (
                    Generator {
                        a: c.bottom_left.col,
                        b: c.top_right.col,
                    },
                    Generator {
                        a: c.bottom_right.col,
                        b: c.top_left.col,
                    },
                )
            } else {
                (
                    Generator {
                        a: c.top_right.col,
                        b: c.bottom_left.col,
                    },
                    Generator {
                        a: c.top_left.col,
                        b: c.bottom_right.col,
                    },
                )
            };
            let one = Domain::from_faces(&d, [f]);
            assert!(one.connects(&d, &x, &y), "{f:?}");
            assert_eq!(one.maslov_index(&d, &x, &y), 1);
            let solved = solve_domain(&d, &x, &y).unwrap();
            assert_eq!(solved.maslov_drop(&d, &x, &y), one.maslov_drop(&d, &x, &y));
            assert_eq!(solved.n_z(&d) - solved.n_w(&d), one.n_z(&d) - one.n_w(&d));
        }
    }

    proptest! {
        #[test]
        fn solved_domains_connect(pi in 0usize..6, i in 0usize..10_000, j in 0usize..10_000) {
            let (p, q) = [(3, 1), (5, -1), (5, 3), (7, 3), (7, -5), (9, 5)][pi];
            let d = diagram(p, q);
            let gens = d.generators();
            let (x, y) = (gens[i % gens.len()], gens[j % gens.len()]);
            if let Some(dom) = solve_domain(&d, &x, &y) {
                prop_assert!(dom.connects(&d, &x, &y));
                // reverse domain connects back
                let back = solve_domain(&d, &y, &x).unwrap();
                let lp = dom.add(&back);
                prop_assert!(d.vertices().all(|v| lp.alpha_corner(&d, v) == 0));
                prop_assert_eq!(dom.maslov_drop(&d, &x, &y), -back.maslov_drop(&d, &y, &x));
            }
        }
    }
}
