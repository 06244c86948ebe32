//! Bit-packed linear algebra over F₂.

/// A vector over F₂ of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitVec({s})")
    }
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if self.get(i) != value {
            self.flip(i);
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }
}

/// Incrementally built row-echelon basis of a subspace.
///
/// Each stored vector has a distinct pivot (its lowest set bit) and is reduced
/// against the earlier pivots, so membership is a single forward sweep.
#[derive(Debug, Clone)]
pub struct Echelon {
    len: usize,
    rows: Vec<BitVec>,
    pivot_of: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon {
            len,
            rows: Vec::new(),
            pivot_of: vec![None; len],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &mut BitVec) {
        while let Some(lead) = v.leading() {
            match self.pivot_of[lead] {
                Some(r) => v.xor_assign(&self.rows[r]),
                None => return,
            }
        }
    }

    /// Adds `v` to the span; returns false if it was already there.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        debug_assert_eq!(v.len(), self.len);
        self.reduce(&mut v);
        match v.leading() {
            Some(lead) => {
                self.pivot_of[lead] = Some(self.rows.len());
                self.rows.push(v);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut v = v.clone();
        self.reduce(&mut v);
        v.is_zero()
    }
}

pub fn rank(vectors: impl IntoIterator<Item = BitVec>, len: usize) -> usize {
    let mut e = Echelon::new(len);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Kernel of the linear map sending the `i`-th basis vector to `images[i]`,
/// returned as vectors in the domain (length `images.len()`).
pub fn kernel(images: &[BitVec], codomain_len: usize) -> Vec<BitVec> {
    let n = images.len();
    // eliminate [image | tag] pairs; a reduced-to-zero image leaves a kernel tag
    let mut rows: Vec<(BitVec, BitVec)> = Vec::new();
    let mut pivot_of: Vec<Option<usize>> = vec![None; codomain_len];
    let mut out = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let mut v = img.clone();
        let mut tag = BitVec::zeros(n);
        tag.flip(i);
        while let Some(lead) = v.leading() {
            match pivot_of[lead] {
                Some(r) => {
                    v.xor_assign(&rows[r].0);
                    tag.xor_assign(&rows[r].1);
                }
                None => break,
            }
        }
        match v.leading() {
            Some(lead) => {
                pivot_of[lead] = Some(rows.len());
                rows.push((v, tag));
            }
            None => out.push(tag),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bit_ops() {
        let mut v = BitVec::from_indices(130, [0, 64, 129]);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.leading(), Some(0));
        v.flip(0);
        assert_eq!(v.leading(), Some(64));
        v.set(64, false);
        v.set(129, false);
        assert!(v.is_zero());
    }

    #[test]
    fn rank_and_kernel_small() {
        // d: e0 -> e0+e1, e1 -> e1+e2, e2 -> e0+e2 ; rank 2, kernel {e0+e1+e2}
        let imgs = vec![
            BitVec::from_indices(3, [0, 1]),
            BitVec::from_indices(3, [1, 2]),
            BitVec::from_indices(3, [0, 2]),
        ];
        assert_eq!(rank(imgs.clone(), 3), 2);
        let k = kernel(&imgs, 3);
        assert_eq!(k, vec![BitVec::from_indices(3, [0, 1, 2])]);
    }

    fn dense_rank(rows: &[Vec<bool>]) -> usize {
        let mut m: Vec<Vec<bool>> = rows.to_vec();
        let cols = m.first().map_or(0, |r| r.len());
        let mut r = 0;
        for c in 0..cols {
            let Some(piv) = (r..m.len()).find(|&i| m[i][c]) else {
                continue;
            };
            m.swap(r, piv);
            for i in 0..m.len() {
                if i != r && m[i][c] {
                    let pr = m[r].clone();
                    for (a, b) in m[i].iter_mut().zip(pr) {
                        *a ^= b;
                    }
                }
            }
            r += 1;
        }
        r
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 70), 0..12)) {
            let imgs: Vec<BitVec> = rows.iter()
                .map(|r| BitVec::from_indices(70, r.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)))
                .collect();
            let rk = rank(imgs.clone(), 70);
            prop_assert_eq!(rk, dense_rank(&rows));
            let ker = kernel(&imgs, 70);
            prop_assert_eq!(ker.len() + rk, imgs.len());
            for k in &ker {
                let mut acc = BitVec::zeros(70);
                for i in k.ones() { acc.xor_assign(&imgs[i]); }
                prop_assert!(acc.is_zero());
            }
        }
    }
}
