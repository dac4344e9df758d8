use proptest::prelude::*;
use rq_core::mobius::{cache, chowla_sum, masked_mobius_sum, mertens, mobius_sieve, MobiusTable};
use rq_core::Error;

fn mu_oracle(mut n: u64) -> i8 {
    let mut sign = 1i8;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

#[test]
fn sieve_matches_trial_division() {
    let table = mobius_sieve(200_000, 1 << 14).unwrap();
    for n in 1..=200_000 {
        assert_eq!(table.get(n), mu_oracle(n), "n = {n}");
    }
}

#[test]
fn mertens_reference_values() {
    let table = mobius_sieve(1_000_000, 1 << 16).unwrap();
    for (n, m) in [(1, 1), (2, 0), (10, -1), (1_000, 2), (10_000, -23), (100_000, -48), (1_000_000, 212)] {
        assert_eq!(mertens(&table, n).unwrap().mertens, m, "M({n})");
    }
}

#[test]
fn chowla_reference_values() {
    let table = mobius_sieve(100, 16).unwrap();
    assert_eq!(chowla_sum(&table, &[1, 1], 8).unwrap(), -1);
    assert_eq!(chowla_sum(&table, &[1], 9).unwrap(), -2);
    // μ²(n+1)μ(n+2) over n ≤ 10 is nonzero at n = 1, 4, 5, 9: −1 +1 −1 −1.
    assert_eq!(chowla_sum(&table, &[2, 1], 10).unwrap(), -2);
    assert!(matches!(chowla_sum(&table, &[2], 10), Err(Error::InvalidArgument(_))));
    assert!(matches!(chowla_sum(&table, &[1, 1], 100), Err(Error::OutOfRange(_))));
}

#[test]
fn masked_sum_partitions_mertens() {
    let table = mobius_sieve(5_000, 1 << 10).unwrap();
    let evens = masked_mobius_sum(&table, (0..=5_000).filter(|n| n % 2 == 0), 5_000).unwrap();
    let odds = masked_mobius_sum(&table, (0..=5_000).filter(|n| n % 2 == 1), 5_000).unwrap();
    assert_eq!(evens + odds, mertens(&table, 5_000).unwrap().mertens);
}

fn corrupted(mut bytes: Vec<u8>, at: usize, value: u8) -> Result<MobiusTable, Error> {
    bytes[at] = value;
    cache::decode_table(&bytes)
}

#[test]
fn cache_rejects_damage() {
    let table = mobius_sieve(1_001, 64).unwrap();
    let bytes = cache::encode_table(&table);
    assert!(matches!(corrupted(bytes.clone(), 0, b'x'), Err(Error::Integrity(_))));
    assert!(matches!(corrupted(bytes.clone(), 4, 2), Err(Error::Integrity(_))));
    // Code 11 is reserved.
    assert!(matches!(corrupted(bytes.clone(), 20, 0xff), Err(Error::Integrity(_))));
    // Padding bits past the limit must be zero.
    let last = bytes.len() - 1;
    assert!(matches!(corrupted(bytes.clone(), last, bytes[last] | 0b0100_0000), Err(Error::Integrity(_))));
    assert!(matches!(cache::decode_table(&bytes[..bytes.len() - 1]), Err(Error::Integrity(_))));
    assert!(matches!(cache::decode_table(&bytes[..5]), Err(Error::Integrity(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn segment_size_does_not_matter(limit in 1u64..20_000, seg in 1u64..5_000) {
        let reference = mobius_sieve(limit, 1 << 16).unwrap();
        let other = mobius_sieve(limit, seg).unwrap();
        prop_assert_eq!(reference.codes(), other.codes());
    }

    #[test]
    fn cache_round_trip_is_exact(limit in 1u64..10_000) {
        let table = mobius_sieve(limit, 1 << 10).unwrap();
        let bytes = cache::encode_table(&table);
        prop_assert_eq!(bytes.len() as u64, 13 + limit.div_ceil(4));
        prop_assert_eq!(cache::parse_header(&bytes[..13]).unwrap(), limit);
        let back = cache::decode_table(&bytes).unwrap();
        prop_assert_eq!(cache::encode_table(&back), bytes);
    }

    #[test]
    fn divisor_sums_vanish(n in 2u64..50_000) {
        let table = mobius_sieve(n, 1 << 12).unwrap();
        let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| table.get(d) as i64).sum();
        prop_assert_eq!(s, 0);
    }
}
