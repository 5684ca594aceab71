mod common;

use immocz::codebook::{build_codebook_set, SystemParams, DEFAULT_RADIUS};
use immocz::detection::{
    build_matrices, build_matrices_with, decode_with, dizet_penalties, dizet_penalties_by_evaluation,
    DecoderOptions, DizetRoute,
};
use immocz::roots::{find_roots, RootMethod};
use immocz::{decode, Complex64, Detector, ReceivedSignal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DETECTORS: [Detector; 2] = [Detector::Rfmd, Detector::Dizet];

#[test]
fn dizet_routes_agree_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let set = build_codebook_set(SystemParams::new(8, 5, 1, DEFAULT_RADIUS).unwrap());
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let degree = rng.gen_range(1..=30);
        let coeffs: Vec<Complex64> = (0..=degree)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let roots = find_roots(&coeffs).unwrap();
        for pair in set.books.iter().flat_map(|b| &b.pairs) {
            let (ro, ri) = dizet_penalties(&roots, pair, DEFAULT_RADIUS);
            let (eo, ei) = dizet_penalties_by_evaluation(&coeffs, pair, DEFAULT_RADIUS);
            worst = worst.max(((ro - eo) / eo).abs()).max(((ri - ei) / ei).abs());
        }
    }
    assert!(worst < 1e-9, "worst relative difference {worst}");
}

#[test]
fn evaluation_route_decodes_like_root_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let set = build_codebook_set(SystemParams::new(10, 6, 3, DEFAULT_RADIUS).unwrap());
    let eval = DecoderOptions {
        dizet_route: DizetRoute::Evaluation,
        ..DecoderOptions::new(Detector::Dizet)
    };
    for _ in 0..300 {
        let (_, y) = common::random_received(&set, 0.05, &mut rng);
        let a = build_matrices(&y, &set, Detector::Dizet, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        let b = build_matrices_with(&y, &set, &eval, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(a.estimates, b.estimates);
        for i in 0..set.len() {
            for (x, y) in a.penalties.row(i).iter().zip(b.penalties.row(i)) {
                assert!((x - y).abs() <= 1e-9 * x.abs().max(1e-300));
            }
        }
    }
}

#[test]
fn one_detector_call_per_codebook() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (n, k, l) in [(5, 3, 3), (10, 6, 3), (10, 10, 3), (12, 4, 2)] {
        let set = build_codebook_set(SystemParams::new(n, k, l, DEFAULT_RADIUS).unwrap());
        let (_, y) = common::random_received(&set, 0.1, &mut rng);
        for d in DETECTORS {
            let r = decode(&y, &set, d, &mut rng).unwrap();
            assert_eq!(r.diagnostics.detector_invocations, 1 << (n - k));
            assert_eq!(r.votes.iter().sum::<usize>(), k);
        }
    }
}

#[test]
fn noiseless_decoding_at_larger_sizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (n, k, l) in [(10, 8, 3), (10, 6, 3), (10, 10, 3), (20, 16, 6)] {
        let set = build_codebook_set(SystemParams::new(n, k, l, DEFAULT_RADIUS).unwrap());
        for _ in 0..50 {
            let (msg, y) = common::random_received(&set, 0.0, &mut rng);
            for d in DETECTORS {
                assert_eq!(decode(&y, &set, d, &mut rng).unwrap().message, msg, "N={n} K={k} {d}");
            }
        }
    }
}

#[test]
fn aberth_receiver_matches_companion_receiver() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let set = build_codebook_set(SystemParams::new(10, 6, 3, DEFAULT_RADIUS).unwrap());
    for _ in 0..200 {
        let (_, y) = common::random_received(&set, 0.02, &mut rng);
        for d in DETECTORS {
            let aberth = DecoderOptions {
                root_method: RootMethod::Aberth,
                ..DecoderOptions::new(d)
            };
            let a = decode(&y, &set, d, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
            let b = decode_with(&y, &set, &aberth, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
            assert_eq!(a.message, b.message);
        }
    }
}

#[test]
fn scaling_leaves_decisions_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let set = build_codebook_set(SystemParams::new(10, 6, 3, DEFAULT_RADIUS).unwrap());
    for _ in 0..200 {
        let (_, y) = common::random_received(&set, 0.3, &mut rng);
        let ys = y.scaled(common::random_scale(&mut rng));
        for d in DETECTORS {
            let a = build_matrices(&y, &set, d, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
            let b = build_matrices(&ys, &set, d, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
            assert_eq!(a.estimates, b.estimates);
            for i in 0..set.len() {
                for (x, z) in a.penalties.row(i).iter().zip(b.penalties.row(i)) {
                    assert!((x - z).abs() <= 1e-9 * x.abs().max(1e-12), "{d}: {x} vs {z}");
                }
            }
        }
    }
}

#[test]
fn malformed_signals_are_rejected() {
    let set = build_codebook_set(SystemParams::new(5, 3, 3, DEFAULT_RADIUS).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let short = ReceivedSignal {
        samples: vec![Complex64::new(1.0, 0.0); 5],
    };
    assert!(decode(&short, &set, Detector::Rfmd, &mut rng).is_err());
    let zeros = ReceivedSignal {
        samples: vec![Complex64::new(0.0, 0.0); 6],
    };
    for d in DETECTORS {
        assert!(decode(&zeros, &set, d, &mut rng).is_err());
    }
}
