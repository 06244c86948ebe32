//! Two-bridge knot parameters.
//!
//! A two-bridge knot `K(p, q)` is determined by the lens space `-L(p, q)` that
//! double branched covers it. Parameters are always stored normalized: `p` odd
//! and at least 3, `q` odd with `-p < q < p` and `gcd(p, q) = 1`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::ParamError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct TwoBridgeParams {
    p: i64,
    q: i64,
}

#[derive(Deserialize)]
struct RawParams {
    p: i64,
    q: i64,
}

impl TryFrom<RawParams> for TwoBridgeParams {
    type Error = ParamError;

    fn try_from(raw: RawParams) -> Result<Self, Self::Error> {
        let params = normalize_params(raw.p, raw.q)?;
        if params.q != raw.q {
            return Err(ParamError::NotCoprime { p: raw.p, q: raw.q });
        }
        Ok(params)
    }
}

impl TwoBridgeParams {
    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// `q mod p` in `[1, p)`, the representative used by lens space recursions.
    pub fn q_positive(&self) -> i64 {
        self.q.rem_euclid(self.p)
    }

    pub(crate) fn p_usize(&self) -> usize {
        self.p as usize
    }
}

impl fmt::Display for TwoBridgeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Crossing numbers `(c_1, ..., c_n)` of a two-bridge presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingWord(pub Vec<i64>);

impl CrossingWord {
    /// Evaluates `c_1 - 1/(c_2 - 1/(... - 1/c_n))` as a reduced fraction with
    /// positive denominator sign moved onto `p`.
    pub fn evaluate(&self) -> Result<(i64, i64), ParamError> {
        let (last, rest) = self.0.split_last().ok_or(ParamError::EmptyWord)?;
        // value = num / den
        let (mut num, mut den): (i64, i64) = (*last, 1);
        for &c in rest.iter().rev() {
            if num == 0 {
                return Err(ParamError::ZeroDenominator);
            }
            // c - den/num = (c*num - den)/num
            let next = c
                .checked_mul(num)
                .and_then(|v| v.checked_sub(den))
                .ok_or(ParamError::Overflow)?;
            den = num;
            num = next;
        }
        if den == 0 {
            return Err(ParamError::ZeroDenominator);
        }
        let g = num.gcd(&den);
        let (mut p, mut q) = (num / g, den / g);
        if p < 0 {
            p = -p;
            q = -q;
        }
        Ok((p, q))
    }
}

pub fn params_from_crossings(word: &CrossingWord) -> Result<TwoBridgeParams, ParamError> {
    let (p, q) = word.evaluate()?;
    normalize_params(p, q)
}

/// Moves `q` to the odd representative of its class mod `p` inside `(-p, p)`.
pub fn normalize_params(p: i64, q: i64) -> Result<TwoBridgeParams, ParamError> {
    if p <= 0 {
        return Err(ParamError::NonPositiveP(p));
    }
    if p == 1 {
        return Err(ParamError::UnitP);
    }
    if p.is_even() {
        return Err(ParamError::EvenP(p));
    }
    if p.gcd(&q) != 1 {
        return Err(ParamError::NotCoprime { p, q });
    }
    let r = q.rem_euclid(p);
    // p odd: exactly one of r and r - p is odd
    let q = if r.is_odd() { r } else { r - p };
    Ok(TwoBridgeParams { p, q })
}

/// Whether two parameter pairs describe isotopic knots.
pub fn are_equivalent(a: &TwoBridgeParams, b: &TwoBridgeParams) -> bool {
    if a.p != b.p {
        return false;
    }
    let p = a.p;
    (a.q - b.q).rem_euclid(p) == 0 || (a.q * b.q).rem_euclid(p) == 1
}

/// All knots with odd `p <= p_max` and odd `q` in `(0, p)`, one representative
/// (smallest `q`) per equivalence class.
pub fn knot_classes(p_max: i64) -> Vec<TwoBridgeParams> {
    let mut out: Vec<TwoBridgeParams> = Vec::new();
    for p in (3..=p_max).step_by(2) {
        for q in (1..p).step_by(2) {
            let Ok(params) = normalize_params(p, q) else {
                continue;
            };
            if params.q != q {
                continue;
            }
            if !out.iter().any(|k| are_equivalent(k, &params)) {
                out.push(params);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn crossings_examples() {
        let p = params_from_crossings(&CrossingWord(vec![3])).unwrap();
        assert_eq!((p.p(), p.q()), (3, 1));
        let p = params_from_crossings(&CrossingWord(vec![2, 2])).unwrap();
        assert_eq!((p.p(), p.q()), (3, -1));
        assert_eq!(CrossingWord(vec![3, -1, 3]).evaluate().unwrap(), (15, 4));
        let p = params_from_crossings(&CrossingWord(vec![3, -1, 3])).unwrap();
        assert_eq!((p.p(), p.q()), (15, -11));
    }

    #[test]
    fn crossings_errors() {
        assert_eq!(
            params_from_crossings(&CrossingWord(vec![1, 0])),
            Err(ParamError::ZeroDenominator)
        );
        // 2 - 1/2... 2/1 -> even
        assert_eq!(
            params_from_crossings(&CrossingWord(vec![2])),
            Err(ParamError::EvenP(2))
        );
        assert_eq!(
            params_from_crossings(&CrossingWord(vec![1])),
            Err(ParamError::UnitP)
        );
        assert_eq!(
            params_from_crossings(&CrossingWord(vec![])),
            Err(ParamError::EmptyWord)
        );
    }

    #[test]
    fn normalize_examples() {
        let n = |p, q| normalize_params(p, q).map(|t| (t.p(), t.q()));
        assert_eq!(n(3, 1), Ok((3, 1)));
        assert_eq!(n(3, 2), Ok((3, -1)));
        assert_eq!(n(7, 10), Ok((7, 3)));
        assert_eq!(n(9, 3), Err(ParamError::NotCoprime { p: 9, q: 3 }));
        assert_eq!(n(3, 0), Err(ParamError::NotCoprime { p: 3, q: 0 }));
        assert_eq!(n(4, 1), Err(ParamError::EvenP(4)));
        assert_eq!(n(1, 0), Err(ParamError::UnitP));
    }

    #[test]
    fn equivalence_examples() {
        let k = |p, q| normalize_params(p, q).unwrap();
        assert!(are_equivalent(&k(7, 3), &k(7, 5)));
        assert!(!are_equivalent(&k(7, 3), &k(7, -3)));
        assert!(!are_equivalent(&k(5, 1), &k(7, 1)));
    }

    #[test]
    fn classes_up_to_seven() {
        let got: Vec<_> = knot_classes(7).iter().map(|k| (k.p(), k.q())).collect();
        assert_eq!(got, vec![(3, 1), (5, 1), (5, 3), (7, 1), (7, 3)]);
        assert_eq!(knot_classes(3).len(), 1);
    }

    #[test]
    fn serde_rejects_unnormalized() {
        let ok: TwoBridgeParams = serde_json::from_str(r#"{"p":3,"q":-1}"#).unwrap();
        assert_eq!(ok.q(), -1);
        assert!(serde_json::from_str::<TwoBridgeParams>(r#"{"p":3,"q":2}"#).is_err());
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(p in (1i64..60).prop_map(|k| 2 * k + 1), q in -500i64..500) {
            if let Ok(t) = normalize_params(p, q) {
                prop_assert!(t.q() % 2 != 0 && -p < t.q() && t.q() < p);
                prop_assert_eq!((t.q() - q).rem_euclid(p), 0);
                prop_assert_eq!(normalize_params(t.p(), t.q()), Ok(t));
            }
        }

        #[test]
        fn equivalence_reflexive_symmetric(p in (1i64..40).prop_map(|k| 2 * k + 1), a in -200i64..200, b in -200i64..200) {
            if let (Ok(x), Ok(y)) = (normalize_params(p, a), normalize_params(p, b)) {
                prop_assert!(are_equivalent(&x, &x));
                prop_assert_eq!(are_equivalent(&x, &y), are_equivalent(&y, &x));
            }
        }

        #[test]
        fn crossing_words_normalize(word in prop::collection::vec(prop_oneof![-6i64..=-1, 1i64..=6], 1..6)) {
            if let Ok(t) = params_from_crossings(&CrossingWord(word)) {
                prop_assert!(t.q() % 2 != 0 && -t.p() < t.q() && t.q() < t.p());
            }
        }
    }
}
