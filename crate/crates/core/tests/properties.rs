use icdof::exporders::{self, beta_set, EigenOrders, OrderMatrix};
use icdof::linalg::{self, CMatrix};
use icdof::netmodel::{
    active_set_partition, antenna_pairing_transform, sample_network, ActiveSet, ChannelRealization,
};
use icdof::rates::{rate_sd_mimo, rate_sd_mimo_lb, rate_sd_siso, sum_rate};
use icdof::scheduling::{select_exhaustive, select_partitioned, select_random, Objective};
use icdof::{analytic_tail_exponent, AnalyticLaw, NetworkConfig, PathLoss, RateMode};
use num_complex::Complex;
use proptest::prelude::*;

fn config(n: usize, k: usize, antennas: usize, seed: u64) -> NetworkConfig {
    NetworkConfig::new(n, k, antennas, seed).with_pathloss(PathLoss::LogUniform {
        min: 0.1,
        max: 10.0,
    })
}

fn snr_strategy() -> impl Strategy<Value = f64> {
    (0.0f64..80.0).prop_map(|db| 10f64.powf(db / 10.0))
}

fn hermitian(n: usize) -> impl Strategy<Value = CMatrix<f64>> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n).prop_map(move |v| {
        let a = CMatrix::from_row_major(
            n,
            n,
            v.into_iter().map(|(r, i)| Complex::new(r, i)).collect(),
        );
        a.gram().shifted_identity_plus(1.0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lower_bound_never_exceeds_mimo_rate(seed in any::<u64>(), k in 1usize..4, n_ant in 1usize..4, snr in snr_strategy()) {
        let ch = sample_network::<f64>(&config(k, k, n_ant, seed), 0).unwrap();
        let set = ActiveSet::new((0..k).collect(), k).unwrap();
        for u in 0..k {
            let lb = rate_sd_mimo_lb(u, &set, &ch, snr).unwrap();
            let full = rate_sd_mimo(u, &set, &ch, snr).unwrap();
            prop_assert!(lb <= full * (1.0 + 1e-9) + 1e-9, "lb {lb} > {full}");
            prop_assert!(lb >= 0.0);
        }
    }

    #[test]
    fn single_antenna_mimo_equals_siso(seed in any::<u64>(), n in 1usize..6, snr in snr_strategy()) {
        let ch = sample_network::<f64>(&config(n, n, 1, seed), 1).unwrap();
        let set = ActiveSet::new((0..n).collect(), n).unwrap();
        for u in 0..n {
            let a = rate_sd_mimo(u, &set, &ch, snr).unwrap();
            let b = rate_sd_siso(u, &set, &ch, snr).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300) || (a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn selection_dominance_chain(seed in any::<u64>(), n in 2usize..=8, k_raw in 1usize..8, snr in snr_strategy()) {
        let k = 1 + k_raw % n;
        let ch = sample_network::<f64>(&config(n, k, 1, seed), 2).unwrap();
        for obj in [Objective::SumRateSiso, Objective::XOrder] {
            let ex = select_exhaustive(&ch, snr, k, obj).unwrap();
            let pa = select_partitioned(&ch, snr, k, obj).unwrap();
            prop_assert!(ex.objective >= pa.objective);
            let groups = active_set_partition(n, k).unwrap();
            let values: Vec<f64> = groups.iter().map(|g| icdof::scheduling::evaluate(g, &ch, snr, obj).unwrap()).collect();
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            for v in &values {
                prop_assert!(pa.objective >= *v && *v >= min);
            }
            let random = select_random(n, k, seed).unwrap();
            prop_assert!(ex.objective >= icdof::scheduling::evaluate(&random, &ch, snr, obj).unwrap());
            prop_assert_eq!(icdof::scheduling::evaluate(&ex.set, &ch, snr, obj).unwrap(), ex.objective);
        }
    }

    #[test]
    fn logdet_matches_eigenvalue_product(m in (1usize..6).prop_flat_map(hermitian)) {
        let via_chol = linalg::spd_logdet(&m).unwrap();
        let via_eig: f64 = linalg::hermitian_eigenvalues(&m).unwrap().iter().map(|l| l.ln()).sum();
        prop_assert!((via_chol - via_eig).abs() <= 1e-9 * via_eig.abs().max(1.0), "{via_chol} vs {via_eig}");
    }

    #[test]
    fn eigenvalues_preserve_trace(m in (1usize..7).prop_flat_map(hermitian)) {
        let ev = linalg::hermitian_eigenvalues(&m).unwrap();
        let trace = m.trace().re;
        prop_assert!((ev.iter().sum::<f64>() - trace).abs() <= 1e-10 * trace);
        prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn order_statistics_stay_in_range(seed in any::<u64>(), n in 1usize..6, n_ant in 1usize..3, snr in (1.0001f64..1e9), pl in any::<bool>()) {
        let ch = sample_network::<f64>(&config(n, n, n_ant, seed), 3).unwrap();
        let set = ActiveSet::new((0..n).collect(), n).unwrap();
        let s = exporders::order_sample(&ch, &set, snr, pl).unwrap();
        let cap = n_ant as f64;
        for &z in &s.z {
            prop_assert!((0.0..=cap).contains(&z), "z = {z}");
        }
        prop_assert!(s.x >= 0.0 && s.x <= cap * n as f64);
        if let exporders::OrderDetail::Siso { beta, .. } = &s.detail {
            prop_assert!(beta.iter().all(|&b| (0.0..=1.0).contains(&b)));
        }
    }

    #[test]
    fn beta_is_clipped(rows in prop::collection::vec(prop::collection::vec(0.0f64..3.0, 4), 4)) {
        let alpha = OrderMatrix::from_rows(rows).unwrap();
        let set = ActiveSet::new(vec![0, 1, 2, 3], 4).unwrap();
        for u in 0..4 {
            let b = beta_set(u, &set, &alpha).unwrap();
            prop_assert!(b <= 1.0);
            prop_assert!(b >= 0.0);
        }
    }

    #[test]
    fn z_mimo_reduces_to_scalar(a in 0.0f64..3.0, b in 0.0f64..3.0) {
        let e = EigenOrders { direct: vec![a], interf: vec![b] };
        let z = exporders::z_mimo(&e, 1).unwrap();
        prop_assert!((z - exporders::z_siso(a, b.min(1.0))).abs() < 1e-15);
    }

    #[test]
    fn exceedance_exponents_are_monotone(k in 2usize..5, n in 1usize..4, x in -0.5f64..6.0, dx in 0.0f64..1.0) {
        let laws = [
            AnalyticLaw::ZSiso { k },
            AnalyticLaw::XSiso { k },
            AnalyticLaw::BetaAlpha,
            AnalyticLaw::ZMimo { k, n },
            AnalyticLaw::XMimo { k, n },
        ];
        for law in laws {
            let lo = analytic_tail_exponent(&law, x).unwrap();
            let hi = analytic_tail_exponent(&law, x + dx).unwrap();
            prop_assert!(hi >= lo, "{law:?} at {x}: {hi} < {lo}");
            let pl = exporders::piecewise_tail_exponent(&law, x).unwrap();
            let ph = exporders::piecewise_tail_exponent(&law, x + dx).unwrap();
            prop_assert!(ph >= pl);
        }
        // lower-tail law: exponent shrinks as the event widens
        let w = AnalyticLaw::Wishart { p: n, q: n + k };
        prop_assert!(analytic_tail_exponent(&w, x + dx).unwrap() <= analytic_tail_exponent(&w, x).unwrap());
    }

    #[test]
    fn pairing_preserves_gains(seed in any::<u64>(), n in 1usize..4, n_ant in 1usize..4) {
        let ch = sample_network::<f64>(&config(n, n, n_ant, seed), 4).unwrap();
        let t = antenna_pairing_transform(&ch);
        prop_assert_eq!(t.users(), n * n_ant);
        for u in 0..n { for v in 0..n { for b in 0..n_ant { for a in 0..n_ant {
            prop_assert_eq!(t.gain(u * n_ant + b, v * n_ant + a, 0, 0), ch.gain(u, v, b, a));
            prop_assert_eq!(t.pathloss(u * n_ant + b, v * n_ant + a), ch.pathloss(u, v));
        }}}}
    }

    #[test]
    fn x_order_argmax_ignores_common_scaling(seed in any::<u64>(), snr in (2.0f64..1e6), c in 1.5f64..4.0) {
        // orders at snr^c of gains g^c equal orders at snr of g
        let ch = sample_network::<f64>(&config(6, 2, 1, seed), 5).unwrap();
        let scaled: Vec<Complex<f64>> = ch.gains().iter().map(|g| Complex::new(g.norm_sqr().powf(c / 2.0), 0.0)).collect();
        let pl: Vec<f64> = ch.pathloss_values().iter().map(|g| g.powf(c)).collect();
        let ch2 = ChannelRealization::from_parts(6, 1, scaled, pl).unwrap();
        let a = select_partitioned(&ch, snr, 2, Objective::XOrder).unwrap();
        let b = select_partitioned(&ch2, snr.powf(c), 2, Objective::XOrder).unwrap();
        prop_assert!((a.objective - b.objective).abs() < 1e-9);
        prop_assert_eq!(a.set, b.set);
    }

    #[test]
    fn selections_are_reproducible(seed in any::<u64>(), n in 2usize..7) {
        let cfg = config(n, 2.min(n), 1, seed);
        let a = sample_network::<f64>(&cfg, 9).unwrap();
        let b = sample_network::<f64>(&cfg, 9).unwrap();
        prop_assert_eq!(&a, &b);
        let sa = select_exhaustive(&a, 100.0, cfg.active, Objective::SumRateSiso).unwrap();
        let sb = select_exhaustive(&b, 100.0, cfg.active, Objective::SumRateSiso).unwrap();
        prop_assert_eq!(sa, sb);
    }

    #[test]
    fn f32_rates_track_f64(seed in any::<u64>(), n in 1usize..4, snr_db in 0.0f64..40.0) {
        let cfg = config(n, n, 1, seed);
        let c64 = sample_network::<f64>(&cfg, 6).unwrap();
        let c32 = sample_network::<f32>(&cfg, 6).unwrap();
        let set = ActiveSet::new((0..n).collect(), n).unwrap();
        let snr = 10f64.powf(snr_db / 10.0);
        let r64 = sum_rate(&set, &c64, snr, RateMode::Siso).unwrap().sum;
        let r32 = sum_rate(&set, &c32, snr as f32, RateMode::Siso).unwrap().sum as f64;
        prop_assert!((r64 - r32).abs() <= 1e-4 * r64.max(1.0), "{r64} vs {r32}");
    }
}
