use proptest::prelude::*;

use sqrtforms::modarith::{legendre_symbol, mul_mod};
use sqrtforms::synthesis::{self, SymbolicFormula};
use sqrtforms::{is_prime, mod_pow, sqrt_auto, tonelli_shanks, Error, PrimeContext};

/// Primes with every 2-adicity from 1 to 20, including a few near 2^62.
const PRIMES: &[u64] = &[
    7, 13, 41, 17, 97, 193, 641, 257, 7681, 12289, 40961, 65537, 786433, 5_767_169, 7_340_033,
    998_244_353, 1_000_000_007, 2_305_843_009_213_693_951, 4_611_686_018_427_387_847,
];

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES)
}

proptest! {
    #[test]
    fn squares_have_roots(p in prime(), v in 1u64..u64::MAX) {
        let ctx = PrimeContext::new(p).unwrap();
        let v = v % p;
        prop_assume!(v != 0);
        let a = mul_mod(v, v, p);
        let out = sqrt_auto(&ctx, a).unwrap();
        prop_assert_eq!(mul_mod(out.root, out.root, p), a);
        prop_assert!(out.roots().contains(&v));
        prop_assert_eq!(out.roots(), tonelli_shanks(&ctx, a).unwrap().roots());
    }

    #[test]
    fn nonresidues_are_rejected(p in prime(), a in 1u64..u64::MAX) {
        let ctx = PrimeContext::new(p).unwrap();
        let a = a % p;
        prop_assume!(a != 0 && legendre_symbol(a, p) == -1);
        let is_nonresidue = matches!(sqrt_auto(&ctx, a), Err(Error::NotAResidue { .. }));
        prop_assert!(is_nonresidue);
    }

    #[test]
    fn legendre_is_multiplicative(p in prime(), a in 1u64..u64::MAX, b in 1u64..u64::MAX) {
        let (a, b) = (a % p, b % p);
        prop_assume!(a != 0 && b != 0);
        prop_assert_eq!(
            legendre_symbol(mul_mod(a, b, p), p),
            legendre_symbol(a, p) * legendre_symbol(b, p)
        );
    }

    #[test]
    fn fermat_holds(p in prime(), a in 1u64..u64::MAX) {
        let a = a % p;
        prop_assume!(a != 0);
        prop_assert_eq!(mod_pow(a, p - 1, p), 1);
    }

    #[test]
    fn primality_matches_trial_division(m in 0u64..2_000_000) {
        let trial = m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| m % d != 0);
        prop_assert_eq!(is_prime(m), trial);
    }

    #[test]
    fn formulas_round_trip(k in 1u32..=10) {
        let f = synthesis::synthesize(k).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: SymbolicFormula = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn sample_primes_cover_many_classes() {
    let mut ks: Vec<u32> = PRIMES.iter().map(|&p| PrimeContext::new(p).unwrap().two_adicity()).collect();
    ks.sort_unstable();
    ks.dedup();
    assert!(ks.len() >= 12, "{ks:?}");
}
