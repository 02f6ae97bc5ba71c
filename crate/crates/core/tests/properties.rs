use paradiff::grid::parseval_l2;
use paradiff::lpdecomp::PLATEAU_END;
use paradiff::paradiff::series_of;
use paradiff::spaces::{lq_combine, maximal, norm, NormSpec};
use paradiff::symbols::{multiplier_symbol, random_symbol};
use paradiff::{apply, build_partition, decompose, dft, idft, lp_norm, random, Complex64, DyadicPartition, TorusGrid};
use proptest::prelude::*;

fn part() -> DyadicPartition {
    build_partition(TorusGrid::new(1, 256).unwrap(), 5).unwrap()
}

fn resolved(part: &DyadicPartition, seed: u64) -> paradiff::GridFunction {
    random::random_function(*part.grid(), PLATEAU_END * 2f64.powi(part.j_max() as i32), 0.5, seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fft_round_trip(seed in 0u64..10_000, dim in 1usize..=2) {
        let n = if dim == 1 { 128 } else { 64 };
        let f = random::random_function(TorusGrid::new(dim, n).unwrap(), 20.0, 0.0, seed);
        let back = idft(&dft(&f));
        prop_assert!(back.rel_l2_error(&f).unwrap() < 1e-13);
    }

    #[test]
    fn parseval(seed in 0u64..10_000) {
        let f = random::random_function(TorusGrid::new(1, 128).unwrap(), 60.0, 0.0, seed);
        let a = lp_norm(&f, 2.0).unwrap();
        let b = parseval_l2(&dft(&f));
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn partition_sums_to_one(r in 0.0f64..32.0) {
        let p = part();
        let prof = p.profile();
        let s: f64 = (0..=5).map(|j| prof.phi_j(j, r)).sum();
        prop_assert!((s - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn blocks_reconstruct(seed in 0u64..10_000) {
        let p = part();
        let f = resolved(&p, seed);
        let b = decompose(&f, &p).unwrap();
        prop_assert!(b.reconstruct().rel_l2_error(&f).unwrap() < 1e-12);
    }

    #[test]
    fn every_piece_has_one_series(j in 0u32..40, k in 0u32..40) {
        let (series, index) = series_of(j, k);
        let expected = if j + 2 <= k { 1 } else if k + 2 <= j { 3 } else { 2 };
        prop_assert_eq!(series, expected);
        prop_assert_eq!(index, if series == 1 { k } else { j.max(k) });
    }

    #[test]
    fn apply_is_linear(seed in 0u64..10_000, c_re in -3.0f64..3.0, c_im in -3.0f64..3.0) {
        let p = part();
        let a = random_symbol(*p.grid(), seed);
        let u = resolved(&p, seed + 1);
        let v = resolved(&p, seed + 2);
        let c = Complex64::new(c_re, c_im);
        let lhs = apply(&a, &u.scale(c).add(&v).unwrap(), &p).unwrap().total;
        let rhs = apply(&a, &u, &p).unwrap().total.scale(c).add(&apply(&a, &v, &p).unwrap().total).unwrap();
        prop_assert!(lhs.rel_l2_error(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn multiplier_acts_on_coefficients(seed in 0u64..10_000, d in -1.0f64..1.0) {
        let p = part();
        let g = *p.grid();
        let a = multiplier_symbol(g, d);
        let u = resolved(&p, seed);
        let mut s = dft(&u);
        for (i, c) in s.coeffs_mut().iter_mut().enumerate() {
            let xi = g.freq_of(i)[0] as f64;
            let jp = (1.0 + xi * xi).sqrt();
            *c *= (2.0 + xi / jp) * jp.powf(d);
        }
        let expected = idft(&s);
        let got = apply(&a, &u, &p).unwrap().total;
        prop_assert!(got.rel_l2_error(&expected).unwrap() < 1e-10);
    }

    #[test]
    fn norms_are_homogeneous(seed in 0u64..10_000, c in 0.1f64..10.0, s in -1.0f64..2.0, p_exp in 0.5f64..4.0, q in 0.5f64..4.0) {
        let p = part();
        let f = resolved(&p, seed);
        for spec in [NormSpec::besov(s, p_exp, q).unwrap(), NormSpec::triebel_lizorkin(s, p_exp, q).unwrap()] {
            let a = norm(&f.scale(Complex64::new(c, 0.0)), &spec, &p).unwrap();
            let b = c * norm(&f, &spec, &p).unwrap();
            prop_assert!((a - b).abs() <= 1e-10 * b);
        }
    }

    #[test]
    fn besov_decreases_in_q(seed in 0u64..10_000, q1 in 0.5f64..4.0, dq in 0.0f64..4.0) {
        let p = part();
        let f = resolved(&p, seed);
        let small = norm(&f, &NormSpec::besov(0.5, 2.0, q1 + dq).unwrap(), &p).unwrap();
        let large = norm(&f, &NormSpec::besov(0.5, 2.0, q1).unwrap(), &p).unwrap();
        prop_assert!(small <= large * (1.0 + 1e-12));
    }

    #[test]
    fn lq_decreases_in_q(v in prop::collection::vec(0.0f64..5.0, 1..20), q in 0.3f64..5.0) {
        prop_assert!(lq_combine(v.iter().copied(), q + 0.5) <= lq_combine(v.iter().copied(), q) * (1.0 + 1e-12));
        prop_assert!(lq_combine(v.iter().copied(), f64::INFINITY) <= lq_combine(v.iter().copied(), q) * (1.0 + 1e-12));
    }

    #[test]
    fn maximal_dominates(seed in 0u64..10_000, t in 0.25f64..=1.0) {
        let f = random::random_function(TorusGrid::new(1, 128).unwrap(), 30.0, 0.0, seed);
        let m = maximal(&f, t).unwrap();
        for (a, b) in f.values().iter().zip(m.values()) {
            prop_assert!(a.norm() <= b.re * (1.0 + 1e-12));
        }
    }
}
