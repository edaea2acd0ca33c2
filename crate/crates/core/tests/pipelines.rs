use proptest::prelude::*;

use noetherian::csc::{ascending_from_bad, bad_from_ascending, stabilization_scan, Alexandroff, StepStatus};
use noetherian::order::find_bad_prefix;
use noetherian::powerspace::{
    bad_from_chain_flat, chain_from_bad, check_translation, subsets_upto, ExtractConfig,
};
use noetherian::reversal::{FlatChain, SharpChain};
use noetherian::{power_order, BadPrefix, BaseOrder, FiniteOrder, Injection, Mode};

#[test]
fn sharp_rado_bad_prefix_survives_the_ascending_round_trip() {
    let o = power_order(BaseOrder::Rado, Mode::Sharp);
    let bad = find_bad_prefix(&o, 10, 1_000_000).found().unwrap();
    let asc = ascending_from_bad(&o, bad.as_slice()).unwrap();
    assert_eq!(asc.steps.len(), 10);
    assert!(asc.steps.iter().all(|st| st.strict()));

    let grew = stabilization_scan(&Alexandroff(&o), &asc.chain, 10, bad.as_slice(), 16);
    assert!(grew.iter().all(|r| matches!(r.status, StepStatus::Grew { .. })));

    let back = bad_from_ascending(&o, &asc.chain, 10, 1_000_000)
        .unwrap()
        .found()
        .unwrap();
    assert_eq!(back.len(), 10);
    BadPrefix::new(&o, back.into_vec()).unwrap();
}

#[test]
fn flat_chain_of_a_bad_sequence_gives_a_bad_sequence_of_sets() {
    let o = BaseOrder::OmegaStar;
    let bad: Vec<u64> = (0..8).collect();
    let chain = chain_from_bad(&o, Mode::Flat, &bad).unwrap();
    assert!(chain.steps.iter().all(|st| st.strict()));

    let pool = subsets_upto(&(0..10).collect::<Vec<u64>>(), 2);
    let cfg = ExtractConfig {
        len: 5,
        ..ExtractConfig::default()
    };
    let sets = bad_from_chain_flat(&o, &chain.codes, &pool, cfg)
        .unwrap()
        .found()
        .unwrap();
    assert_eq!(sets.len(), 5);
    BadPrefix::new(&power_order(o, Mode::Flat), sets.into_vec()).unwrap();
}

#[test]
fn translations_agree_on_small_orders() {
    let orders = [
        FiniteOrder::chain(3),
        FiniteOrder::antichain(3),
        FiniteOrder::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap(),
    ];
    for fo in orders {
        let elems: Vec<u64> = (0..fo.len() as u64).collect();
        let o = BaseOrder::Finite(fo);
        let points = subsets_upto(&elems, 3);
        for family in subsets_upto(&points, 2) {
            assert!(
                check_translation(&o, family.as_slice(), &points).is_ok(),
                "{family:?}"
            );
        }
    }
}

fn injection() -> impl Strategy<Value = Injection> {
    (
        Just((0..10u64).collect::<Vec<_>>()).prop_shuffle(),
        0..6usize,
        0..3u64,
    )
        .prop_map(|(pool, len, extra)| {
            let table = pool[..len].to_vec();
            let tail = table.iter().max().map_or(0, |m| m + 1) + extra;
            Injection::new(table, tail).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn both_reversal_chains_descend_strictly(f in injection(), steps in 1..9u64) {
        let flat = FlatChain::new(&f, steps).unwrap().verify().unwrap();
        prop_assert!(flat.iter().all(|r| r.strict));
        let sharp = SharpChain::new(&f, steps).unwrap();
        prop_assert!((0..=steps).all(|s| sharp.claims(s).all()));
        prop_assert!(sharp.verify().unwrap().iter().all(|r| r.strict));
    }
}
