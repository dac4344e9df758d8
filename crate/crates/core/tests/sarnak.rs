use proptest::prelude::*;
use rq_core::bits::BitWord;
use rq_core::mobius::{masked_mobius_sum, mertens, mobius_sieve, MobiusTable};
use rq_core::positions::PositionSet;
use rq_core::sarnak::{
    correlation_sum, decay_curve, decay_curve_word, inclusion_exclusion_sum, m_prime, CylinderFunction,
};
use rq_core::words::{canonical_prefix, RankOneParams};

fn table() -> &'static MobiusTable {
    static TABLE: std::sync::OnceLock<MobiusTable> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| mobius_sieve(200_000, 1 << 14).unwrap())
}

fn naive(table: &MobiusTable, x: &BitWord, offsets: &[i64], n: u64) -> i64 {
    let delta = offsets.iter().map(|o| o.unsigned_abs()).max().unwrap();
    (delta + 1..=n)
        .filter(|&i| offsets.iter().all(|&o| x.get((i as i64 + o) as usize)))
        .map(|i| table.get(i) as i64)
        .sum()
}

fn word_strategy(len: usize) -> impl Strategy<Value = BitWord> {
    prop::collection::vec(prop::bool::weighted(0.7), len).prop_map(BitWord::from_bits)
}

fn offsets_strategy() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(-6i64..=6, 1..=6).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_equals_direct_sum(x in word_strategy(2_000), offs in offsets_strategy()) {
        let f = CylinderFunction::new(offs.clone()).unwrap();
        let n = 2_000 - f.delta() - 1;
        let direct = correlation_sum(table(), &x, &f, n).unwrap();
        prop_assert_eq!(direct.s, naive(table(), &x, &offs, n));
        prop_assert_eq!(inclusion_exclusion_sum(table(), &x, &f, n).unwrap(), direct.s);
    }

    #[test]
    fn zeros_and_ones_partition_mertens(x in word_strategy(3_000), n in 1u64..2_999) {
        let f = CylinderFunction::new(vec![0]).unwrap();
        let on_ones = correlation_sum(table(), &x, &f, n).unwrap().s;
        let on_zeros = correlation_sum(table(), &x.complement(), &f, n).unwrap().s;
        let masked = masked_mobius_sum(table(), PositionSet::zeros_of(&x).iter(), n).unwrap();
        prop_assert_eq!(on_zeros, masked);
        prop_assert_eq!(on_ones + masked, mertens(table(), n).unwrap().mertens);
    }

    #[test]
    fn adding_offsets_shrinks_m_prime(x in word_strategy(500), offs in offsets_strategy(), extra in -6i64..=6) {
        let m = PositionSet::zeros_of(&x);
        let base = m_prime(&m, &offs).unwrap();
        let mut more = offs.clone();
        more.push(extra);
        let grown = m_prime(&m, &more).unwrap();
        prop_assert!(grown.set.iter().all(|n| base.set.iter().any(|b| b == n)));
        let delta = offs.iter().map(|o| o.unsigned_abs()).max().unwrap();
        for n in base.set.iter() {
            prop_assert!(n >= delta && n < 500 - delta);
            prop_assert!(offs.iter().all(|&o| !x.get((n as i64 + o) as usize)));
        }
    }

    #[test]
    fn curves_are_prefix_consistent(x in word_strategy(5_000), cut in 1usize..4) {
        let f = CylinderFunction::new(vec![0, 1]).unwrap();
        let all = [10u64, 100, 1_000, 4_000];
        let full = decay_curve_word(table(), &x, &f, &all).unwrap();
        let partial = decay_curve_word(table(), &x, &f, &all[..cut]).unwrap();
        prop_assert_eq!(&full[..cut], partial.as_slice());
    }
}

#[test]
fn katok_prefix_matches_naive_oracle() {
    let p = RankOneParams::classic_katok(vec![16, 20, 40, 200]).unwrap();
    let x = canonical_prefix(&p, 100_002).unwrap();
    let f = CylinderFunction::new(vec![0]).unwrap();
    for n in [10_000, 100_000] {
        assert_eq!(correlation_sum(table(), &x, &f, n).unwrap().s, naive(table(), &x, &[0], n));
    }
    let rows = decay_curve(table(), &p, &f, &[1_000, 10_000, 100_000]).unwrap();
    assert_eq!(rows[2].s, naive(table(), &x, &[0], 100_000));
}

#[test]
fn katok_double_membership_matches_scan() {
    let p = RankOneParams::classic_katok(vec![4, 6, 8]).unwrap();
    let x = canonical_prefix(&p, 300).unwrap();
    let m = PositionSet::zeros_of(&x);
    let mp = m_prime(&m, &[0, 2]).unwrap();
    let scan: Vec<u64> = (2..298).filter(|&n| !x.get(n as usize) && !x.get(n as usize + 2)).collect();
    assert_eq!(mp.set.members(), scan.as_slice());
}

#[test]
fn mertens_curve_on_all_ones() {
    let ones = BitWord::from_bits(std::iter::repeat_n(true, 101));
    let f = CylinderFunction::new(vec![0]).unwrap();
    let rows = decay_curve_word(table(), &ones, &f, &[10, 100]).unwrap();
    assert_eq!(rows[0].s, -1);
    assert_eq!(rows[1].s, mertens(table(), 100).unwrap().mertens);
    assert_eq!(rows[1].s_over_n, rows[1].s as f64 / 100.0);
}
