use hetnet::csicodec::{decode_bits, encode_increments, BitReader, Quantizer};
use hetnet::geometry::NodeSpec;
use hetnet::scheduler::{assign_shares, cell_airtime, decide, ServingDecision, ServingMode};
use hetnet::ComplexGain;
use proptest::prelude::*;

fn levels(q: u8) -> impl Strategy<Value = Vec<u16>> {
    prop::collection::vec(0u16..(1 << q), 1..300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn codec_round_trips((q, seq) in (1u8..=10).prop_flat_map(|q| (Just(q), levels(q))), cyclic in any::<bool>()) {
        let enc = encode_increments(&seq, q, cyclic).unwrap();
        prop_assert_eq!(enc.n_coefficients, seq.len());
        prop_assert_eq!(enc.stats.total() as usize, seq.len() - 1);
        prop_assert_eq!(decode_bits(&enc.bytes, enc.n_bits, q, cyclic).unwrap(), seq);
    }

    #[test]
    fn slow_walks_round_trip(start in 0u16..64, steps in prop::collection::vec(-1i32..=1, 0..500)) {
        let mut seq = vec![start];
        for s in steps {
            let next = (*seq.last().unwrap() as i32 + s).rem_euclid(64);
            seq.push(next as u16);
        }
        let enc = encode_increments(&seq, 6, true).unwrap();
        prop_assert!(enc.n_bits <= 6 + 3 * (seq.len() - 1));
        prop_assert_eq!(decode_bits(&enc.bytes, enc.n_bits, 6, true).unwrap(), seq);
    }

    #[test]
    fn truncated_streams_never_decode_to_the_original(seq in levels(6), cut in 1usize..8) {
        let enc = encode_increments(&seq, 6, false).unwrap();
        prop_assume!(enc.n_bits > cut);
        let n = enc.n_bits - cut;
        let mut bytes = enc.bytes[..n.div_ceil(8)].to_vec();
        if !n.is_multiple_of(8) {
            *bytes.last_mut().unwrap() &= 0xFF << (8 - n % 8);
        }
        if let Ok(d) = decode_bits(&bytes, n, 6, false) {
            prop_assert_ne!(d, seq);
        }
    }

    #[test]
    fn quantizer_bounds_hold_per_draw(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let q = Quantizer::default();
        let h = ComplexGain::new(re, im);
        prop_assume!(q.in_range(h));
        let back = q.dequantize(q.quantize(h));
        let dphase = (h.arg() - back.arg() + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
        prop_assert!(dphase.abs() <= q.phase_error_bound() + 1e-12);
        let ddb = 20.0 * (h.norm() / back.norm()).log10();
        prop_assert!(ddb.abs() <= q.magnitude_error_bound_db() + 1e-9);
    }
}

/// Increment codewords for one step, read back as bit strings.
fn codeword(prev: u16, cur: u16, q: u8) -> Vec<bool> {
    let enc = encode_increments(&[prev, cur], q, false).unwrap();
    let mut r = BitReader::new(&enc.bytes, enc.n_bits).unwrap();
    r.read_bits(q).unwrap();
    (0..enc.n_bits - q as usize).map(|_| r.read_bit().unwrap()).collect()
}

#[test]
fn codebook_is_prefix_free() {
    for q in 1..=6u8 {
        let top = 1u16 << q;
        let mut words = Vec::new();
        for prev in 0..top {
            for cur in 0..top {
                words.push(codeword(prev, cur, q));
            }
        }
        words.sort();
        words.dedup();
        for a in &words {
            for b in &words {
                if a != b {
                    assert!(!b.starts_with(a), "q={q}: {a:?} prefixes {b:?}");
                }
            }
        }
    }
}

fn distinct_snrs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(-200i32..400, 1..9).prop_flat_map(|set| {
        let v: Vec<f64> = set.into_iter().map(|x| x as f64 / 10.0).collect();
        Just(v).prop_shuffle()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn decisions_follow_cells_under_relabeling(snrs in distinct_snrs(), seed in any::<u64>(), v in prop::sample::select(vec![1.0, 5.0])) {
        let n = snrs.len();
        let mut perm: Vec<usize> = (0..n).collect();
        // deterministic shuffle from the seed
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let permuted: Vec<f64> = (0..n).map(|i| snrs[perm[i]]).collect();
        let ue = NodeSpec::ue([0.0, 0.0], v);
        let a = decide(0, &ue, &snrs, 15.0).unwrap();
        let b = decide(0, &ue, &permuted, 15.0).unwrap();
        // cell id c in the permuted list is cell perm[c-1]+1 in the original
        let back = |ids: &[usize]| -> Vec<usize> { ids.iter().map(|&c| perm[c - 1] + 1).collect() };
        prop_assert_eq!(a.mode, b.mode);
        prop_assert_eq!(a.serving_cells, back(&b.serving_cells));
        prop_assert_eq!(a.muted_cells, back(&b.muted_cells));
    }

    #[test]
    fn airtime_is_conserved(users in prop::collection::vec((distinct_snrs(), prop::sample::select(vec![1.0, 5.0, 30.0])), 1..40)) {
        let mut decisions: Vec<ServingDecision> = users
            .iter()
            .enumerate()
            .map(|(i, (snrs, v))| decide(i, &NodeSpec::ue([0.0, 0.0], *v), snrs, 15.0).unwrap())
            .collect();
        assign_shares(&mut decisions);
        for d in &decisions {
            prop_assert!(d.airtime_share > 0.0 && d.airtime_share <= 1.0);
            match d.mode {
                ServingMode::Macro | ServingMode::Ignore => prop_assert_eq!(d.serving_cells.len(), 1),
                ServingMode::Comp => prop_assert!((2..=3).contains(&d.serving_cells.len())),
                ServingMode::AvoidAssist => prop_assert!(d.serving_cells.len() <= 3),
            }
        }
        for (_, t) in cell_airtime(&decisions) {
            prop_assert!(t <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn ignore_set_shrinks_as_threshold_rises(snrs in distinct_snrs(), lo in 1.0f64..30.0, extra in 0.0f64..30.0) {
        let ue = NodeSpec::ue([0.0, 0.0], 1.0);
        let strict = decide(0, &ue, &snrs, lo + extra).unwrap();
        let loose = decide(0, &ue, &snrs, lo).unwrap();
        if strict.mode == ServingMode::Ignore {
            prop_assert_eq!(loose.mode, ServingMode::Ignore);
            prop_assert_eq!(loose.serving_cells, strict.serving_cells);
        }
    }
}
