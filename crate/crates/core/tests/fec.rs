use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use v2xsim::dsp::{crc_compute, CrcSpec, SoftBits};
use v2xsim::fec::{
    conv_encode, conv_rate_match, conv_rate_recover, depuncture, desegment, puncture, qpp_permutation, rate_match,
    rate_recover, segment_code_blocks, turbo_decode, turbo_encode, viterbi_decode, CodeRate, ConvCodeSpec,
    RateMatchConfig, TurboCodeSpec, QPP_TABLE,
};

fn to_llrs(bits: &[u8], magnitude: f64) -> SoftBits {
    SoftBits(bits.iter().map(|&b| if b == 0 { magnitude } else { -magnitude }).collect())
}

/// Remainder of the bit string as a GF(2) polynomial modulo x^width + poly,
/// by schoolbook long division.
fn gf2_remainder(bits: &[u8], width: u32, polynomial: u32) -> u32 {
    let mut divisor = vec![1u8];
    divisor.extend((0..width).rev().map(|i| ((polynomial >> i) & 1) as u8));
    let mut r = bits.to_vec();
    for i in 0..r.len().saturating_sub(width as usize) {
        if r[i] == 1 {
            for (j, d) in divisor.iter().enumerate() {
                r[i + j] ^= d;
            }
        }
    }
    r[r.len() - width as usize..].iter().fold(0, |acc, &b| (acc << 1) | b as u32)
}

#[test]
fn qpp_permutations_are_bijections() {
    for &(k, _, _) in QPP_TABLE.iter() {
        let pi = qpp_permutation(k).unwrap();
        let mut seen = vec![false; k];
        for &p in &pi {
            assert!(!seen[p], "K = {k} repeats index {p}");
            seen[p] = true;
        }
    }
}

#[test]
fn rate_match_full_buffer_is_lossless() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in [40, 1056, 2496, 6144] {
        let d = k + 4;
        let streams: [Vec<u8>; 3] = std::array::from_fn(|_| (0..d).map(|_| rng.gen_range(0..2)).collect());
        let cfg = RateMatchConfig::new(3 * d, 0).unwrap();
        let tx = rate_match(&streams, &cfg).unwrap();
        let rx = rate_recover(&to_llrs(&tx, 1.0), &cfg, k).unwrap();
        for (s, r) in streams.iter().zip(&rx) {
            assert_eq!(&r.hard_decisions(), s);
            assert!(r.0.iter().all(|l| l.abs() == 1.0), "every bit is sent exactly once");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn crc_codewords_divide_by_generator(bits in proptest::collection::vec(0u8..2, 1..400)) {
        for spec in [CrcSpec::CRC24A, CrcSpec::CRC24B, CrcSpec::CRC16] {
            let mut word = bits.clone();
            word.extend(crc_compute(&bits, spec));
            prop_assert_eq!(gf2_remainder(&word, spec.width, spec.polynomial), 0);
        }
    }

    #[test]
    fn punctured_viterbi_corrects_sparse_errors(seed in any::<u64>(), rate in 0usize..3) {
        let rate = [CodeRate::Half, CodeRate::TwoThirds, CodeRate::ThreeQuarters][rate];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bits: Vec<u8> = (0..288).map(|_| rng.gen_range(0..2)).collect();
        bits.extend([0; 6]);
        let spec = ConvCodeSpec::dot11();
        let sent = puncture(&conv_encode(&bits, &spec), rate).unwrap();
        let mut llrs = to_llrs(&sent, 4.0);
        // one weak wrong decision every 60 coded bits
        for i in (rng.gen_range(0..60)..llrs.len()).step_by(60) {
            llrs.0[i] = -llrs.0[i] * 0.25;
        }
        let decoded = viterbi_decode(&depuncture(&llrs, rate).unwrap(), &spec).unwrap();
        prop_assert_eq!(decoded, bits);
    }

    #[test]
    fn tail_biting_round_trip_through_rate_matching(bits in proptest::collection::vec(0u8..2, 24..120), extra in 0usize..200) {
        let spec = ConvCodeSpec::lte_tail_biting();
        let coded = conv_encode(&bits, &spec);
        let streams: [Vec<u8>; 3] = std::array::from_fn(|s| coded.iter().skip(s).step_by(3).copied().collect());
        let e = 3 * bits.len() + extra;
        let tx = conv_rate_match(&streams, e).unwrap();
        let rx = conv_rate_recover(&to_llrs(&tx, 2.0), bits.len());
        let interleaved = SoftBits((0..bits.len()).flat_map(|i| rx.iter().map(move |s| s.0[i])).collect());
        prop_assert_eq!(viterbi_decode(&interleaved, &spec).unwrap(), bits);
    }

    #[test]
    fn turbo_round_trip_with_noise(seed in any::<u64>(), row in 0usize..QPP_TABLE.len()) {
        let k = QPP_TABLE[row].0;
        let spec = TurboCodeSpec::new(k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits: Vec<u8> = (0..k).map(|_| rng.gen_range(0..2)).collect();
        let cw = turbo_encode(&bits, &spec).unwrap();
        let streams = cw.streams.clone().map(|s| {
            SoftBits(s.iter().map(|&b| (1.0 - 2.0 * b as f64) * 2.0 + rng.gen_range(-1.5..1.5)).collect())
        });
        let out = turbo_decode(&streams, &spec, None).unwrap();
        prop_assert_eq!(out.bits, bits);
    }

    #[test]
    fn segmentation_round_trip(len in 1usize..14_000, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2)).collect();
        let (seg, blocks) = segment_code_blocks(&bits).unwrap();
        prop_assert_eq!(desegment(&seg, &blocks).unwrap(), bits);
    }
}
