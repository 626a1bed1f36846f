use proptest::prelude::*;
use sparse_lms::experiment::{estimate_lambda_max, ExperimentConfig, ScheduleSource};
use sparse_lms::filter::{
    llms_update, lms_update, lp_llms_update, lp_lms_update, lp_norm, lp_penalty_gradient, predict,
    Algorithm, FilterParams, LeakSign,
};
use sparse_lms::io::{parse_config, render_config};
use sparse_lms::signal::{
    gen_sparse_system, Ar1Config, NormalizeMode, RngStream, ScheduleSpec, SparseSystemSpec,
    StreamPurpose,
};

fn tap() -> impl Strategy<Value = f64> {
    prop_oneof![
        1 => Just(0.0),
        4 => -2.0..2.0f64,
    ]
}

fn state(max_len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, f64)> {
    (1..=max_len).prop_flat_map(|n| {
        (
            prop::collection::vec(tap(), n),
            prop::collection::vec(-3.0..3.0f64, n),
            -3.0..3.0f64,
        )
    })
}

fn params() -> impl Strategy<Value = FilterParams> {
    (
        1e-4..0.3f64,
        0.0..0.5f64,
        1e-6..1e-2f64,
        0.0..20.0f64,
        0.05..0.95f64,
        any::<bool>(),
    )
        .prop_map(|(mu, gamma, rho_p, epsilon_p, p, plus)| FilterParams {
            mu,
            gamma,
            rho_p,
            epsilon_p,
            p,
            leak_sign: if plus {
                LeakSign::Plus
            } else {
                LeakSign::Minus
            },
        })
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

proptest! {
    #[test]
    fn reduction_chain((w, x, d) in state(24), pr in params()) {
        let base = lms_update(&w, &x, d, &pr).unwrap();
        let g0 = FilterParams { gamma: 0.0, ..pr };
        let r0 = FilterParams { rho_p: 0.0, ..pr };
        let both = FilterParams { gamma: 0.0, rho_p: 0.0, ..pr };
        prop_assert_eq!(bits(&llms_update(&w, &x, d, &g0).unwrap().new_weights), bits(&base.new_weights));
        prop_assert_eq!(bits(&lp_lms_update(&w, &x, d, &r0).unwrap().new_weights), bits(&base.new_weights));
        prop_assert_eq!(bits(&lp_llms_update(&w, &x, d, &both).unwrap().new_weights), bits(&base.new_weights));
        prop_assert_eq!(
            bits(&lp_llms_update(&w, &x, d, &g0).unwrap().new_weights),
            bits(&lp_lms_update(&w, &x, d, &pr).unwrap().new_weights)
        );
    }

    #[test]
    fn error_contract((w, x, d) in state(24), pr in params()) {
        let pred = predict(&w, &x).unwrap();
        for alg in Algorithm::ALL {
            let r = alg.update(&w, &x, d, &pr).unwrap();
            prop_assert_eq!(r.prediction, pred);
            prop_assert_eq!(r.error, d - pred);
        }
    }

    #[test]
    fn zero_taps_get_no_penalty((w, x, d) in state(24), pr in params()) {
        let plain = lms_update(&w, &x, d, &pr).unwrap();
        let lp = lp_lms_update(&w, &x, d, &pr).unwrap();
        let leaky = llms_update(&w, &x, d, &FilterParams { gamma: pr.gamma.min(0.99), ..pr });
        let lp_leaky = lp_llms_update(&w, &x, d, &pr).unwrap();
        let leak_only = Algorithm::LpLlms
            .update(&w, &x, d, &FilterParams { rho_p: 0.0, ..pr })
            .unwrap();
        prop_assert!(leaky.is_ok());
        for (i, wi) in w.iter().enumerate() {
            if *wi == 0.0 {
                prop_assert_eq!(lp.new_weights[i], plain.new_weights[i]);
                prop_assert_eq!(lp_leaky.new_weights[i], leak_only.new_weights[i]);
            }
        }
    }

    #[test]
    fn penalty_opposes_sign(w in prop::collection::vec(tap(), 1..24), p in 0.05..0.95f64, eps in 0.0..20.0f64) {
        let g = lp_penalty_gradient(&w, p, eps).unwrap();
        for (wi, gi) in w.iter().zip(&g) {
            if *wi == 0.0 {
                prop_assert_eq!(*gi, 0.0);
            } else {
                // correction is -rho * g, so g must share the sign of w
                prop_assert!(gi.signum() == wi.signum() && *gi != 0.0);
            }
        }
    }

    #[test]
    fn lp_norm_is_homogeneous(w in prop::collection::vec(tap(), 1..24), p in 0.05..0.95f64, c in prop_oneof![-50.0..-1e-3f64, 1e-3..50.0f64]) {
        let scaled: Vec<f64> = w.iter().map(|v| c * v).collect();
        let lhs = lp_norm(&scaled, p).unwrap();
        let rhs = c.abs() * lp_norm(&w, p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(f64::MIN_POSITIVE), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn sparse_system_support_is_exact(n_taps in 1usize..40, frac in 0.0..1.0f64, seed in any::<u64>(), trial in 0u64..1000) {
        let n_nonzero = 1 + ((n_taps - 1) as f64 * frac) as usize;
        let w = gen_sparse_system(
            &SparseSystemSpec { n_taps, n_nonzero },
            RngStream::new(seed, trial, StreamPurpose::System(0)),
        ).unwrap();
        prop_assert_eq!(w.len(), n_taps);
        prop_assert_eq!(w.iter().filter(|v| **v != 0.0).count(), n_nonzero);
        prop_assert!(w.iter().all(|v| *v == 0.0 || v.abs() == 1.0));
    }

    #[test]
    fn lambda_max_grows_with_taps_toward_bound(a in -0.95..0.95f64, n in 1usize..40) {
        let cfg = Ar1Config { a, ..Default::default() };
        let small = estimate_lambda_max(&cfg, n).unwrap().lambda_max;
        let large = estimate_lambda_max(&cfg, n + 1).unwrap().lambda_max;
        let sup = (1.0 - a * a) / (1.0 - a.abs()).powi(2);
        prop_assert!(large >= small - 1e-12);
        prop_assert!(large <= sup + 1e-9);
    }

    #[test]
    fn config_round_trip(
        seed in any::<u64>(),
        trials in 1usize..500,
        spans in prop::collection::vec(50usize..5000, 1..4),
        taps in 4usize..24,
        a in -0.95..0.95f64,
        innovation in 1e-6..10.0f64,
        noise in 0.0..1.0f64,
        empirical in any::<bool>(),
        mus in prop::collection::vec(1e-4..0.1f64, 4),
        gamma in 0.0..0.5f64,
        rho in 0.0..1e-2f64,
        eps in 0.0..20.0f64,
        p in 0.05..0.95f64,
        minus in any::<bool>(),
        with_rho in any::<bool>(),
        subset in prop::sample::subsequence(vec![0usize, 1, 2, 3], 1..=4),
    ) {
        let n_phases = spans.len();
        let window = spans.iter().copied().min().unwrap() / 2;
        let mut cfg = ExperimentConfig {
            seed,
            n_trials: trials,
            steady_state_window: window.max(1),
            ..ExperimentConfig::paper()
        };
        cfg.ar1.a = a;
        cfg.ar1.innovation_variance = innovation;
        cfg.ar1.normalize = if empirical { NormalizeMode::Empirical } else { NormalizeMode::Theoretical };
        cfg.noise.variance = noise;
        cfg.schedule = ScheduleSource::Random(ScheduleSpec {
            n_taps: taps,
            n_nonzero: (0..n_phases).map(|i| 1 + i % taps).collect(),
            rho_p: if with_rho { (0..n_phases).map(|i| rho * (i + 1) as f64).collect() } else { vec![] },
            spans,
        });
        cfg.algorithms = subset.iter().map(|&i| {
            let alg = Algorithm::ALL[i];
            let mut spec = sparse_lms::AlgorithmSpec::paper_default(alg);
            spec.params.mu = mus[i];
            if alg.is_leaky() { spec.params.gamma = gamma; }
            if alg.is_penalized() {
                spec.params.rho_p = rho;
                spec.params.epsilon_p = eps;
                spec.params.p = p;
            }
            if alg == Algorithm::LpLlms && minus { spec.params.leak_sign = LeakSign::Minus; }
            spec
        }).collect();
        let text = render_config(&cfg).unwrap();
        prop_assert_eq!(parse_config(&text).unwrap(), cfg);
    }
}
