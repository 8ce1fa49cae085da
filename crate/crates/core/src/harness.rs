//! Test subjects: EQUALITY with inner-product hashing, random protocol
//! mixtures, and a brute-force error oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::ConvexCombination;
use crate::protocol::{DeterministicProtocol, PublicCoinProtocol, TruthTable, MAX_N};

/// Largest `t * n` for which the full hash space is enumerated.
pub const MAX_HASH_BITS: u32 = 16;

/// Guards for [`brute_force_best_error`].
pub const ORACLE_MAX_N: u32 = 6;
pub const ORACLE_MAX_SUPPORT: usize = 1 << 12;

fn parity(v: u32) -> bool {
    v.count_ones() & 1 == 1
}

/// EQUALITY on `n` bits and its public-coin protocol with `t` hash bits.
///
/// Protocol `P_r` for `r = (r_1, ..., r_t)` in `({0,1}^n)^t`: Alice sends the
/// `t` parities `<r_j, x> mod 2`, Bob answers whether all equal `<r_j, y>`.
/// It costs `t + 1` bits and never errs on `x = y`. Weights are uniform over
/// all `2^{tn}` hash strings.
pub fn build_equality(n: u32, t: u32) -> Result<(TruthTable, PublicCoinProtocol)> {
    if n == 0 || n > MAX_N {
        return Err(Error::SizeGuard(format!("n = {n} outside 1..={MAX_N}")));
    }
    if t == 0 || t.saturating_mul(n) > MAX_HASH_BITS {
        return Err(Error::SizeGuard(format!(
            "t * n = {} hash bits, need 1..={MAX_HASH_BITS}",
            t.saturating_mul(n)
        )));
    }
    let f = TruthTable::from_fn(n, |x, y| x == y)?;
    let mask = (1u32 << n) - 1;
    let protocols = (0..1u32 << (t * n))
        .map(|r| {
            let hashes: Vec<u32> = (0..t).map(|j| (r >> (j * n)) & mask).collect();
            DeterministicProtocol::new(n, t + 1, move |x, y| {
                let agree = hashes.iter().all(|&h| parity(h & x) == parity(h & y));
                (agree, t + 1)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((f, PublicCoinProtocol::uniform(protocols)?))
}

/// `q` protocols with uniformly random output tables, each charging `2n`
/// bits, under random normalized weights.
pub fn build_random_mixture(n: u32, q: usize, seed: u64) -> Result<PublicCoinProtocol> {
    if q == 0 {
        return Err(Error::InvalidInput("q must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = TruthTable::zeros(n)?.len();
    let protocols = (0..q)
        .map(|_| {
            let mut words: Vec<u64> = (0..len.div_ceil(64)).map(|_| rng.gen()).collect();
            if len % 64 != 0 {
                words[0] &= (1u64 << len) - 1;
            }
            Ok(DeterministicProtocol::from_table(
                TruthTable::from_words(n, words)?,
                2 * n,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    // (0, 1] keeps every protocol in the support
    let raw: Vec<f64> = (0..q).map(|_| 1.0 - rng.gen::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let weights =
        ConvexCombination::from_dense(&raw.iter().map(|w| w / total).collect::<Vec<_>>())?;
    PublicCoinProtocol::new(protocols, weights)
}

/// Independent oracle for `error_linf(f, mixture_table(public))`: a direct
/// loop over inputs and supported protocols, calling each evaluator.
pub fn brute_force_best_error(f: &TruthTable, public: &PublicCoinProtocol) -> Result<f64> {
    if f.n() != public.n() {
        return Err(Error::InvalidInput(
            "function and protocol disagree on n".into(),
        ));
    }
    if f.n() > ORACLE_MAX_N || public.weights().len() > ORACLE_MAX_SUPPORT {
        return Err(Error::SizeGuard(format!(
            "oracle limited to n <= {ORACLE_MAX_N} and support <= {ORACLE_MAX_SUPPORT}"
        )));
    }
    let side = 1u32 << f.n();
    let mut worst = 0.0f64;
    for x in 0..side {
        for y in 0..side {
            let mut accept = 0.0;
            for &(i, w) in public.weights().support() {
                if public.protocols()[i].evaluate(x, y).0 {
                    accept += w;
                }
            }
            let truth = if f.get(x, y) { 1.0 } else { 0.0 };
            worst = worst.max((truth - accept).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{comm_cost, error_linf, mixture_table};

    #[test]
    fn equality_guards() {
        assert!(build_equality(0, 1).is_err());
        assert!(build_equality(2, 0).is_err());
        assert!(build_equality(9, 2).is_err());
        assert!(build_equality(4, 4).is_ok());
    }

    #[test]
    fn equality_diagonal_and_cost() {
        let (f, public) = build_equality(3, 2).unwrap();
        assert_eq!(public.protocols().len(), 64);
        assert_eq!(comm_cost(&public).unwrap(), 3);
        let m = mixture_table(&public).unwrap();
        for x in 0..8 {
            assert!(f.get(x, x));
            assert_eq!(m.get(x, x), 1.0);
        }
    }

    #[test]
    fn equality_single_hash_bit() {
        // n = 2, t = 1: for x != y exactly two of the four r agree.
        let (f, public) = build_equality(2, 1).unwrap();
        let m = mixture_table(&public).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                let agree = (0..4u32).filter(|r| parity(r & x) == parity(r & y)).count();
                assert_eq!(m.get(x, y), agree as f64 / 4.0);
                if x != y {
                    assert_eq!(agree, 2);
                }
            }
        }
        assert_eq!(error_linf(&f, &m).unwrap(), 0.5);
    }

    #[test]
    fn equality_epsilon_values() {
        // Frozen from an independent brute force over hash strings and inputs.
        for (n, t, eps) in [(2, 1, 0.5), (2, 2, 0.25), (4, 2, 0.25)] {
            let (f, public) = build_equality(n, t).unwrap();
            assert_eq!(
                error_linf(&f, &mixture_table(&public).unwrap()).unwrap(),
                eps
            );
        }
    }

    #[test]
    fn random_mixture_contract() {
        let one = build_random_mixture(3, 1, 5).unwrap();
        assert_eq!(one.weights().support(), &[(0, 1.0)]);
        let a = build_random_mixture(3, 2, 9).unwrap();
        let b = build_random_mixture(3, 2, 9).unwrap();
        assert_eq!(mixture_table(&a).unwrap(), mixture_table(&b).unwrap());
        assert_eq!(a.weights(), b.weights());
        let m = build_random_mixture(1, 30, 1).unwrap();
        assert!((m.weights().weight_sum() - 1.0).abs() <= 1e-12);
        assert!(mixture_table(&m)
            .unwrap()
            .values()
            .iter()
            .all(|v| (0.0..=1.0).contains(v)));
        assert_eq!(comm_cost(&m).unwrap(), 2);
        assert!(build_random_mixture(3, 0, 0).is_err());
    }

    #[test]
    fn oracle_on_point_masses() {
        let (f, _) = build_equality(2, 1).unwrap();
        let right = PublicCoinProtocol::point_mass(DeterministicProtocol::from_table(f.clone(), 4));
        let wrong =
            PublicCoinProtocol::point_mass(DeterministicProtocol::constant(2, false).unwrap());
        assert_eq!(brute_force_best_error(&f, &right).unwrap(), 0.0);
        assert_eq!(brute_force_best_error(&f, &wrong).unwrap(), 1.0);
    }

    #[test]
    fn oracle_guards() {
        let f = TruthTable::zeros(7).unwrap();
        let p = PublicCoinProtocol::point_mass(DeterministicProtocol::constant(7, false).unwrap());
        assert!(matches!(
            brute_force_best_error(&f, &p),
            Err(Error::SizeGuard(_))
        ));
    }
}
