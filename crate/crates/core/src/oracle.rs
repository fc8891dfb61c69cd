//! Brute-force reference implementations. Deliberately simple and slow; they
//! share no code path with the production routes they check, and the CLI uses
//! [`constraint_scan`] to attach independent obstruction witnesses.

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::capacities::{CapSequence, SeqSource};
use crate::cone::{ConeClass, IndexTuple};
use crate::error::{invalid, Result};
use crate::rational::{common_denominator, Rational};

/// Default degree bound for [`constraint_scan`].
pub const DEFAULT_SCAN_DEGREE: i64 = 8;

/// Every `m·a + n·b` up to a doubling bound, sorted; first `max_index + 1`.
pub fn brute_cap_seq(a: u64, b: u64, max_index: usize) -> Result<CapSequence> {
    if a == 0 || b == 0 {
        return invalid("brute_cap_seq needs positive integers");
    }
    let mut bound = a.max(b);
    loop {
        let mut values = Vec::new();
        for m in 0..=bound / a {
            for n in 0..=bound / b {
                let v = m * a + n * b;
                if v <= bound {
                    values.push(v);
                }
            }
        }
        if values.len() > max_index {
            values.sort();
            let terms: Vec<Rational> = values[..=max_index]
                .iter()
                .map(|&v| Rational::from_integer(BigInt::from(v)))
                .collect();
            let seq = CapSequence::from_terms(&terms)?;
            return Ok(seq.with_source(SeqSource::Ellipsoid(terms_pair(a), terms_pair(b))));
        }
        bound *= 2;
    }
}

fn terms_pair(x: u64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// `max_{0≤i≤k} (C_i + D_{k−i})` by the plain double loop.
pub fn brute_sharp(c: &CapSequence, d: &CapSequence) -> Result<CapSequence> {
    if c.len() != d.len() {
        return invalid("brute_sharp needs equal lengths");
    }
    let (c, d) = (c.terms(), d.terms());
    let mut out = Vec::with_capacity(c.len());
    for k in 0..c.len() {
        let mut best = &c[0] + &d[k];
        for i in 1..=k {
            let v = &c[i] + &d[k - i];
            if v > best {
                best = v;
            }
        }
        out.push(best);
    }
    CapSequence::from_terms(&out)
}

/// A constraint tuple and its pairing with the scanned class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanHit {
    pub tuple: IndexTuple,
    pub pairing: Rational,
}

/// Returns the tuple in `F⁺` with `d ≤ d_max` that pairs most negatively with
/// `alpha` per unit degree, or `None` when every pairing is `≥ 0`.
pub fn constraint_scan(alpha: &ConeClass, d_max: i64) -> Result<Option<ScanHit>> {
    Ok(tightest_constraint(alpha, d_max)?.filter(|hit| hit.pairing.is_negative()))
}

/// The tightest tuple of the scan regardless of sign: minimal `pairing / d`,
/// ties to the smallest degree, then to the first tuple in descending
/// enumeration order. Per degree the minimum pairing is attained by a
/// nonincreasing `m` matched against the sorted coefficients.
pub fn tightest_constraint(alpha: &ConeClass, d_max: i64) -> Result<Option<ScanHit>> {
    if !alpha.is_positive() {
        return invalid("constraint_scan expects a nonnegative class");
    }
    let m_len = alpha.coeffs.len();
    let mut order: Vec<usize> = (0..m_len).collect();
    order.sort_by(|&i, &j| alpha.coeffs[j].cmp(&alpha.coeffs[i]));
    let scale = common_denominator(std::iter::once(&alpha.mu).chain(&alpha.coeffs));
    let lift = |x: &Rational| x.numer() * (&scale / x.denom());
    let mu = lift(&alpha.mu);
    let sorted: Vec<BigInt> = order.iter().map(|&i| lift(&alpha.coeffs[i])).collect();

    let per_degree: Vec<(BigInt, i64, Vec<i64>)> = (1..=d_max.max(0))
        .into_par_iter()
        .map(|d| {
            let mut best = BestLeaf { gain: None, m: Vec::new() };
            let mut m = Vec::with_capacity(m_len);
            let budget = d * d + 3 * d;
            enumerate(&sorted, budget, d, &mut m, BigInt::from(0), &mut best);
            let gain = best.gain.expect("the zero tuple is always a leaf");
            (BigInt::from(d) * &mu - gain, d, best.m)
        })
        .collect();

    // compare value/d by cross-multiplying
    let winner = per_degree.into_iter().fold(None::<(BigInt, i64, Vec<i64>)>, |acc, cand| match acc {
        Some(cur) if &cur.0 * cand.1 <= &cand.0 * cur.1 => Some(cur),
        _ => Some(cand),
    });
    Ok(winner.map(|(value, d, m_sorted)| {
        let mut m = vec![0; m_len];
        for (pos, &orig) in order.iter().enumerate() {
            m[orig] = m_sorted[pos];
        }
        ScanHit { tuple: IndexTuple::new(d, m), pairing: Rational::new(value, scale.clone()) }
    }))
}

struct BestLeaf {
    gain: Option<BigInt>,
    m: Vec<i64>,
}

/// Nonincreasing `m` with `Σ (m_i² + m_i) ≤ budget`; maximizes `Σ a_i m_i`.
fn enumerate(a: &[BigInt], budget: i64, cap: i64, m: &mut Vec<i64>, gain: BigInt, best: &mut BestLeaf) {
    let pos = m.len();
    if pos == a.len() {
        if best.gain.as_ref().is_none_or(|g| gain > *g) {
            best.gain = Some(gain);
            best.m = m.clone();
        }
        return;
    }
    for v in (0..=cap).rev() {
        let cost = v * v + v;
        if cost > budget {
            continue;
        }
        m.push(v);
        enumerate(a, budget - cost, v, m, &gain + &a[pos] * v, best);
        m.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacities::{cap_seq, sharp};
    use crate::cone::{in_cone_closure, pairing, tuple_invariants};
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn brute_cap_examples() {
        assert_eq!(brute_cap_seq(1, 1, 5).unwrap().terms(), ints(&[0, 1, 1, 2, 2, 2]));
        assert_eq!(
            brute_cap_seq(1, 4, 14).unwrap().terms(),
            ints(&[0, 1, 2, 3, 4, 4, 5, 5, 6, 6, 7, 7, 8, 8, 8])
        );
        assert_eq!(brute_cap_seq(2, 3, 6).unwrap().terms(), ints(&[0, 2, 3, 4, 5, 6, 6]));
    }

    #[test]
    fn brute_sharp_examples() {
        let n11 = brute_cap_seq(1, 1, 8).unwrap();
        assert_eq!(brute_sharp(&n11, &n11).unwrap().terms(), ints(&[0, 1, 2, 2, 3, 3, 4, 4, 4]));
        let z = CapSequence::zeros(8);
        assert_eq!(brute_sharp(&n11, &z).unwrap(), n11);
        let n22 = brute_cap_seq(2, 2, 3).unwrap();
        assert_eq!(brute_sharp(&n22, &n22).unwrap().term(3), int(4));
        assert!(brute_sharp(&n11, &n22).is_err());
    }

    #[test]
    fn scan_examples() {
        let hit = constraint_scan(&ConeClass::new(int(1), ints(&[1, 1, 0])), 3).unwrap().unwrap();
        assert_eq!(hit.tuple, IndexTuple::new(1, vec![1, 1, 0]));
        assert_eq!(hit.pairing, int(-1));

        assert_eq!(constraint_scan(&ConeClass::new(int(2), ints(&[1, 1, 1, 1])), 5).unwrap(), None);

        let fifths = ConeClass::new(int(1), vec![rat(2, 5); 5]);
        assert_eq!(constraint_scan(&fifths, 5).unwrap(), None);
        let tight = tightest_constraint(&fifths, 5).unwrap().unwrap();
        assert_eq!(tight.tuple, IndexTuple::new(2, vec![1, 1, 1, 1, 1]));
        assert_eq!(tight.pairing, int(0));

        let over = ConeClass::new(int(1), vec![rat(41, 100); 5]);
        let hit = constraint_scan(&over, 5).unwrap().unwrap();
        assert_eq!(hit.tuple, IndexTuple::new(2, vec![1, 1, 1, 1, 1]));
        assert_eq!(hit.pairing, rat(-1, 20));
    }

    #[test]
    fn scan_maps_back_to_input_order() {
        let alpha = ConeClass::new(int(1), ints(&[0, 1, 1]));
        let hit = constraint_scan(&alpha, 3).unwrap().unwrap();
        assert_eq!(hit.tuple, IndexTuple::new(1, vec![0, 1, 1]));
        assert!(tuple_invariants(&hit.tuple).in_f);
        assert_eq!(pairing(&alpha, &hit.tuple).unwrap(), hit.pairing);
    }

    proptest! {
        #[test]
        fn brute_matches_production(a in 1u64..=30, b in 1u64..=30, k in 0usize..=300) {
            let prod = cap_seq(&int(a as i64), &int(b as i64), k).unwrap();
            prop_assert_eq!(brute_cap_seq(a, b, k).unwrap(), prod);
        }

        #[test]
        fn brute_sharp_matches_production(a in 1u64..=30, b in 1u64..=30, c in 1u64..=30, d in 1u64..=30, k in 0usize..=300) {
            let x = brute_cap_seq(a, b, k).unwrap();
            let y = brute_cap_seq(c, d, k).unwrap();
            prop_assert_eq!(brute_sharp(&x, &y).unwrap(), sharp(&x, &y));
        }

        #[test]
        fn scan_agrees_with_cone_one_directionally(
            mu in 1i64..30,
            coeffs in prop::collection::vec((0i64..30, 1i64..4), 1..7),
        ) {
            let alpha = ConeClass::new(int(mu), coeffs.iter().map(|&(n, d)| rat(n, d)).collect());
            let verdict = in_cone_closure(&alpha).unwrap().verdict;
            let hit = constraint_scan(&alpha, DEFAULT_SCAN_DEGREE).unwrap();
            if verdict.is_yes() {
                prop_assert_eq!(&hit, &None);
            }
            if let Some(h) = hit {
                prop_assert!(!verdict.is_yes());
                prop_assert!(h.pairing.is_negative());
            }
        }
    }
}
