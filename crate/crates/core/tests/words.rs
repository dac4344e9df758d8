use proptest::prelude::*;
use rq_core::words::{
    build_stage, canonical_prefix, occurrence_index, stage_length, stage_lengths, zero_count, zero_positions,
    ParamsConfig, RankOneParams,
};
use rq_core::Error;

fn params_strategy() -> impl Strategy<Value = RankOneParams> {
    prop::collection::vec(2u64..=6, 1..=5).prop_flat_map(|cutting| {
        let rows: Vec<_> = cutting
            .iter()
            .map(|&r| prop::collection::vec(0u64..=4, r as usize))
            .collect();
        (Just(cutting), rows).prop_map(|(c, s)| RankOneParams::explicit(c, s).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn built_words_follow_the_recursion(p in params_strategy()) {
        let depth = p.depth();
        let top = build_stage(&p, depth).unwrap();
        for n in 0..depth {
            let v = build_stage(&p, n).unwrap();
            let next = build_stage(&p, n + 1).unwrap();
            let mut expect = String::new();
            for &s in p.spacer_row(n) {
                expect.push_str(&v.bits.to_string());
                expect.push_str(&"1".repeat(s as usize));
            }
            prop_assert_eq!(next.bits.to_string(), expect);
            // v_n is a prefix of every later stage.
            prop_assert!(top.bits.to_string().starts_with(&v.bits.to_string()));
        }
        prop_assert_eq!(top.len(), stage_length(&p, depth).unwrap());
        prop_assert_eq!(top.bits.count_zeros() as u64, zero_count(&p, depth).unwrap());
    }

    #[test]
    fn occurrences_are_copies(p in params_strategy()) {
        let n = p.depth();
        let word = build_stage(&p, n).unwrap().bits.to_string();
        for m in 0..=n {
            let v = build_stage(&p, m).unwrap().bits.to_string();
            let idx = occurrence_index(&p, m, n).unwrap().indices;
            prop_assert_eq!(idx.len() as u64, zero_count(&p, n).unwrap() / zero_count(&p, m).unwrap());
            for (i, w) in idx.iter().zip(idx.iter().skip(1)) {
                prop_assert!(w - i >= v.len() as u64);
            }
            for &i in &idx {
                prop_assert_eq!(&word[i as usize..i as usize + v.len()], v.as_str());
            }
        }
        let zeros = zero_positions(&build_stage(&p, n).unwrap());
        let singles = occurrence_index(&p, 0, n).unwrap().indices;
        prop_assert_eq!(zeros.members(), singles.as_slice());
    }

    #[test]
    fn canonical_prefixes_agree(p in params_strategy(), cut in 1u64..200) {
        let full = *stage_lengths(&p, p.depth()).last().unwrap();
        let len = cut.min(full);
        let prefix = canonical_prefix(&p, len).unwrap().to_string();
        let whole = build_stage(&p, p.depth()).unwrap().bits.to_string();
        prop_assert_eq!(prefix.as_str(), &whole[..len as usize]);
    }

    #[test]
    fn config_round_trip(p in params_strategy()) {
        let json = serde_json::to_string(&p.to_config()).unwrap();
        let cfg: ParamsConfig = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(RankOneParams::from_config(&cfg).unwrap(), p);
    }
}

#[test]
fn classic_katok_stage_one() {
    let p = RankOneParams::classic_katok(vec![4, 6]).unwrap();
    assert_eq!(build_stage(&p, 1).unwrap().bits.to_string(), "000101");
    assert_eq!(stage_length(&p, 2).unwrap(), 6 * 6 + 3);
}

#[test]
fn config_rejects_malformed_input() {
    let bad_row: ParamsConfig =
        serde_json::from_str(r#"{"generator":"explicit","depth":1,"cutting":[3],"spacers":[[0,1]]}"#).unwrap();
    assert!(matches!(RankOneParams::from_config(&bad_row), Err(Error::InvalidArgument(_))));
    assert!(serde_json::from_str::<ParamsConfig>(r#"{"generator":"explicit","depth":1,"bogus":1}"#).is_err());
}

#[test]
fn overflowing_schedules_report_resource_limits() {
    let p = RankOneParams::constant(1 << 16, vec![0; 1 << 16], 5).unwrap();
    assert!(matches!(stage_length(&p, 4), Err(Error::ResourceLimit(_))));
    assert!(matches!(build_stage(&p, 2), Err(Error::ResourceLimit(_))));
    assert!(matches!(canonical_prefix(&p, 1 << 40), Err(Error::ResourceLimit(_))));
}
