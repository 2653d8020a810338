//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).
//! Tolerances and experiment parameters are pinned in the code below.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arraysync_core::filters::{
    fuse_and_predict, local_update, Algorithm, NodeFilterState, NodeMessage,
};
use arraysync_core::harness::{
    init_filters, run_monte_carlo, run_round, RoundScratch, SimConfig, TrialEnv, TrialRngs,
};
use arraysync_core::linalg::{InfoPair, Mat2, Vec2};
use arraysync_core::metrics::population_std;
use arraysync_core::network::{Adjacency, Topology};
use arraysync_core::noise::{draw_noise, measure_state, ElectricalState, MeasurementParams};
use arraysync_core::rng::{stream_rng, StreamRole};

fn report(n: u32, name: &str, detail: &str) {
    println!("ACCEPTANCE {n} ({name}): PASS {detail}");
}

/// Scale-disparate SPD matrix with bounded correlation, the population the
/// filter arithmetic actually sees.
fn random_spd(rng: &mut ChaCha8Rng, scale_decades: f64, max_corr: f64) -> Mat2 {
    let d0 = 10f64.powf(rng.random_range(-scale_decades..scale_decades));
    let d1 = 10f64.powf(rng.random_range(-scale_decades..scale_decades));
    let rho = rng.random_range(-max_corr..max_corr);
    let off = rho * (d0 * d1).sqrt();
    Mat2::new(d0, off, off, d1)
}

#[test]
fn criterion_1_information_predict_matches_covariance_form() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0001);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let omega = random_spd(&mut rng, 2.0, 0.95);
        let w = random_spd(&mut rng, 2.0, 0.95);
        let mu = Vec2::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
        let got = arraysync_core::filters::predict(InfoPair { omega, mu }, w).unwrap();

        // Independent covariance-form oracle through nalgebra.
        let na = |m: Mat2| nalgebra::Matrix2::new(m.m00, m.m01, m.m10, m.m11);
        let v = na(omega).try_inverse().unwrap();
        let q = na(w).try_inverse().unwrap();
        let want_omega = (v + q).try_inverse().unwrap();
        let want_mu = want_omega * (v * nalgebra::Vector2::new(mu.a0, mu.a1));

        let om_err = (na(got.omega) - want_omega).abs().max() / want_omega.abs().max();
        let mu_err = (nalgebra::Vector2::new(got.mu.a0, got.mu.a1) - want_mu)
            .abs()
            .max()
            / want_mu.abs().max();
        worst = worst.max(om_err).max(mu_err);
    }
    let dt = t0.elapsed().as_secs_f64();
    assert!(worst <= 1e-10, "worst relative error {worst:e}");
    assert!(dt < 1.0, "took {dt:.2}s, limit 1s");
    report(
        1,
        "information predict vs covariance form",
        &format!("worst rel err {worst:.2e} over 1000 inputs in {dt:.2}s"),
    );
}

mod raw {
    //! Straight-line 2x2 helpers for the transcription oracle, written
    //! without the crate's linear algebra types.
    pub type M = [[f64; 2]; 2];
    pub type V = [f64; 2];

    pub fn inv(m: M) -> M {
        let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        [
            [m[1][1] / d, -m[0][1] / d],
            [-m[1][0] / d, m[0][0] / d],
        ]
    }
    pub fn mm(a: M, b: M) -> M {
        [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ]
    }
    pub fn mv(a: M, v: V) -> V {
        [
            a[0][0] * v[0] + a[0][1] * v[1],
            a[1][0] * v[0] + a[1][1] * v[1],
        ]
    }
    pub fn madd(a: M, b: M) -> M {
        [
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ]
    }
    pub fn msub(a: M, b: M) -> M {
        [
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ]
    }
    pub fn ms(a: M, s: f64) -> M {
        [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
    }
    pub fn vadd(a: V, b: V) -> V {
        [a[0] + b[0], a[1] + b[1]]
    }
    pub fn vs(a: V, s: f64) -> V {
        [a[0] * s, a[1] * s]
    }
    pub fn m_err(got: M, want: M) -> f64 {
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                num = num.max((got[i][j] - want[i][j]).abs());
                den = den.max(want[i][j].abs());
            }
        }
        num / den.max(1e-300)
    }
    pub fn v_err(got: V, want: V) -> f64 {
        let num = (got[0] - want[0]).abs().max((got[1] - want[1]).abs());
        num / want[0].abs().max(want[1].abs()).max(1e-300)
    }
}

#[test]
fn criterion_2_five_node_round_matches_transcription() {
    use raw::*;
    let t0 = Instant::now();

    let mut topo_rng = stream_rng(0xACC, 0, 0, StreamRole::Topology);
    let topo = Topology::random(5, 0.5, &mut topo_rng).unwrap();
    let n = 5usize;

    let pred_om: [M; 5] = [
        [[2.0, 0.5], [0.5, 1.0]],
        [[3.0, -1.0], [-1.0, 2.0]],
        [[1.5, 0.25], [0.25, 0.75]],
        [[2.5, 0.8], [0.8, 1.2]],
        [[1.8, -0.3], [-0.3, 2.2]],
    ];
    let pred_mu: [V; 5] = [
        [1.0, -0.5],
        [0.5, 2.0],
        [-1.0, 0.5],
        [2.0, 1.0],
        [-0.4, -1.5],
    ];
    let meas_u: [M; 5] = [
        [[2.0, 0.2], [0.2, 1.1]],
        [[1.0, 0.0], [0.0, 3.0]],
        [[4.0, -0.5], [-0.5, 2.0]],
        [[2.2, 0.4], [0.4, 0.9]],
        [[3.1, 0.6], [0.6, 1.4]],
    ];
    let meas_y: [V; 5] = [
        [1.0, 0.5],
        [2.0, -1.0],
        [0.5, 1.5],
        [-0.8, 0.3],
        [1.2, 2.2],
    ];
    let w_proc: M = [[2.0, 0.3], [0.3, 1.0]];

    // Transcription side: Metropolis-Hastings weights recomputed from the
    // adjacency, then consensus on measurements, consensus on information,
    // additive correction, weighted estimate/covariance re-fusion, and the
    // information-form prediction, all in straight-line arithmetic.
    let adj = topo.adjacency();
    let deg = |a: usize| (0..n).filter(|&b| b != a && adj.has_edge(a, b)).count();
    let weight = |a: usize, b: usize| -> f64 {
        if a == b {
            let others: f64 = (0..n)
                .filter(|&m| m != a && adj.has_edge(a, m))
                .map(|m| 1.0 / (1.0 + deg(a).max(deg(m)) as f64))
                .sum();
            1.0 - others
        } else if adj.has_edge(a, b) {
            1.0 / (1.0 + deg(a).max(deg(b)) as f64)
        } else {
            0.0
        }
    };
    let hood = |a: usize| -> Vec<usize> {
        std::iter::once(a)
            .chain((0..n).filter(move |&b| b != a && adj.has_edge(a, b)))
            .collect()
    };

    let mut want_upd_om = [[[0.0; 2]; 2]; 5];
    let mut want_upd_mu = [[0.0; 2]; 5];
    let mut want_mean = [[0.0; 2]; 5];
    for node in 0..n {
        let mut corr_om = [[0.0; 2]; 2];
        let mut corr_mu = [0.0; 2];
        for m in hood(node) {
            let w = weight(node, m);
            corr_om = madd(corr_om, ms(pred_om[m], w));
            corr_mu = vadd(corr_mu, vs(pred_mu[m], w));
            corr_om = madd(corr_om, ms(meas_u[m], w));
            corr_mu = vadd(corr_mu, vs(mv(meas_u[m], meas_y[m]), w));
        }
        want_upd_om[node] = corr_om;
        want_upd_mu[node] = corr_mu;
    }
    let mut want_fused_om = [[[0.0; 2]; 2]; 5];
    let mut want_fused_mu = [[0.0; 2]; 5];
    let mut want_pred_om = [[[0.0; 2]; 2]; 5];
    let mut want_pred_mu = [[0.0; 2]; 5];
    for node in 0..n {
        let mut mean = [0.0; 2];
        let mut cov = [[0.0; 2]; 2];
        for m in hood(node) {
            let w = weight(node, m);
            let v = inv(want_upd_om[m]);
            mean = vadd(mean, vs(mv(v, want_upd_mu[m]), w));
            cov = madd(cov, ms(v, w * w));
        }
        let fused_om = inv(cov);
        want_fused_om[node] = fused_om;
        want_fused_mu[node] = mv(fused_om, mean);
        want_mean[node] = mean;
        let s_inv = inv(madd(fused_om, w_proc));
        let pred_om_out = msub(w_proc, mm(w_proc, mm(s_inv, w_proc)));
        want_pred_om[node] = pred_om_out;
        want_pred_mu[node] = mv(pred_om_out, mean);
    }

    // Crate side: the two-phase round over the same inputs.
    let to_mat = |m: M| Mat2::new(m[0][0], m[0][1], m[1][0], m[1][1]);
    let to_vec = |v: V| Vec2::new(v[0], v[1]);
    let mut msgs: Vec<NodeMessage> = (0..n)
        .map(|i| {
            let pred = InfoPair {
                omega: to_mat(pred_om[i]),
                mu: to_vec(pred_mu[i]),
            };
            NodeMessage {
                pred,
                upd: pred,
                y: to_vec(meas_y[i]),
                u: to_mat(meas_u[i]),
            }
        })
        .collect();
    let inbox = |msgs: &[NodeMessage], a: usize| -> Vec<(f64, NodeMessage)> {
        topo.neighborhood(a).map(|(m, w)| (w, msgs[m])).collect()
    };
    let upds: Vec<InfoPair> = (0..n)
        .map(|a| local_update(Algorithm::HaDkf, &inbox(&msgs, a)).unwrap())
        .collect();
    for (m, u) in msgs.iter_mut().zip(upds.iter()) {
        m.upd = *u;
    }
    let outs: Vec<NodeFilterState> = (0..n)
        .map(|a| {
            fuse_and_predict(Algorithm::HaDkf, upds[a], to_mat(w_proc), &inbox(&msgs, a)).unwrap()
        })
        .collect();

    let mut worst = 0.0f64;
    for node in 0..n {
        let upd = upds[node];
        let u_err = m_err(
            [[upd.omega.m00, upd.omega.m01], [upd.omega.m10, upd.omega.m11]],
            want_upd_om[node],
        )
        .max(v_err([upd.mu.a0, upd.mu.a1], want_upd_mu[node]));
        let st = outs[node];
        let f_err = m_err(
            [
                [st.upd.omega.m00, st.upd.omega.m01],
                [st.upd.omega.m10, st.upd.omega.m11],
            ],
            want_fused_om[node],
        )
        .max(v_err([st.upd.mu.a0, st.upd.mu.a1], want_fused_mu[node]));
        let p_err = m_err(
            [
                [st.pred.omega.m00, st.pred.omega.m01],
                [st.pred.omega.m10, st.pred.omega.m11],
            ],
            want_pred_om[node],
        )
        .max(v_err([st.pred.mu.a0, st.pred.mu.a1], want_pred_mu[node]));
        worst = worst.max(u_err).max(f_err).max(p_err);
    }
    let dt = t0.elapsed().as_secs_f64();
    assert!(worst <= 1e-12, "worst relative deviation {worst:e}");
    assert!(dt < 1.0, "took {dt:.2}s, limit 1s");
    report(
        2,
        "five-node round transcription",
        &format!("worst rel deviation {worst:.2e} in {dt:.2}s"),
    );
}

#[test]
fn criterion_3_weight_matrix_properties() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0003);
    let mut worst_k = 0usize;
    for _ in 0..100 {
        let n: usize = rng.random_range(2..=30);
        let c: f64 = rng.random_range(0.3..=1.0);
        let topo = Topology::random(n, c, &mut rng).unwrap();
        let adj = topo.adjacency();
        for a in 0..n {
            let mut row = 0.0;
            for b in 0..n {
                let w = topo.weight(a, b);
                assert_eq!(w, topo.weight(b, a), "asymmetric at ({a},{b})");
                assert!(w >= 0.0, "negative weight at ({a},{b})");
                if a != b {
                    assert_eq!(w > 0.0, adj.has_edge(a, b), "sparsity at ({a},{b})");
                }
                row += w;
            }
            assert!((row - 1.0).abs() <= 1e-12, "row {a} sums to {row}");
        }

        // Powers must flatten to the averaging matrix J/n within 1e-6
        // max-norm for some k <= 1e5; repeated squaring through nalgebra.
        let mut w = nalgebra::DMatrix::from_fn(n, n, |a, b| topo.weight(a, b));
        let mut k = 1usize;
        let flat = 1.0 / n as f64;
        let max_dev = |m: &nalgebra::DMatrix<f64>| {
            m.iter()
                .fold(0.0f64, |acc, x| acc.max((x - flat).abs()))
        };
        while max_dev(&w) > 1e-6 {
            assert!(k * 2 <= 100_000, "no convergence by k = {k}");
            w = &w * &w;
            k *= 2;
        }
        worst_k = worst_k.max(k);
    }
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 30.0, "took {dt:.2}s, limit 30s");
    report(
        3,
        "consensus weight properties",
        &format!("100 graphs, worst flattening k = {worst_k}, {dt:.2}s"),
    );
}

#[test]
fn criterion_4_convergence_iteration_ranking() {
    // Pinned experiment: N=100, c=0.2, SNR 0 dB, 100 trials per algorithm.
    // Required: the censored median convergence iteration of ha-dkf is
    // strictly below every baseline's, and ha-dkf converges strictly
    // earlier than dkf in at least 90 of the 100 paired trials.
    let t0 = Instant::now();
    let base = SimConfig {
        nodes: 100,
        connectivity: 0.2,
        snr_db: 0.0,
        iterations: 200,
        trials: 100,
        ..SimConfig::default()
    };
    let run = |algo: Algorithm| -> Vec<Option<usize>> {
        let cfg = SimConfig {
            algorithm: algo,
            ..base
        };
        run_monte_carlo(&cfg)
            .unwrap()
            .trials
            .iter()
            .map(|t| t.convergence_iteration)
            .collect()
    };
    let censored_median = |xs: &[Option<usize>]| -> f64 {
        let mut v: Vec<f64> = xs
            .iter()
            .map(|x| x.map(|k| k as f64).unwrap_or(base.iterations as f64))
            .collect();
        v.sort_by(f64::total_cmp);
        0.5 * (v[v.len() / 2 - 1] + v[v.len() / 2])
    };

    let ha = run(Algorithm::HaDkf);
    let ha_med = censored_median(&ha);
    let mut detail = format!("ha-dkf median {ha_med}");
    let mut pass = true;
    for algo in [Algorithm::KfHcmci, Algorithm::KfDfpcCeec, Algorithm::DkfCe] {
        let other = run(algo);
        let med = censored_median(&other);
        detail.push_str(&format!(", {algo} median {med}"));
        pass &= ha_med < med;
        if algo == Algorithm::DkfCe {
            let beats = ha
                .iter()
                .zip(other.iter())
                .filter(|(h, o)| {
                    h.map(|k| k as f64).unwrap_or(f64::INFINITY)
                        < o.map(|k| k as f64).unwrap_or(f64::INFINITY)
                })
                .count();
            detail.push_str(&format!(", ha-dkf beats dkf in {beats}/100 trials"));
            pass &= beats >= 90;
        }
    }
    detail.push_str(&format!(", {:.1}s", t0.elapsed().as_secs_f64()));
    if pass {
        report(4, "convergence iteration ranking", &detail);
    } else {
        println!("ACCEPTANCE 4 (convergence iteration ranking): FAIL {detail}");
    }
    assert!(
        pass,
        "convergence ranking not met: {detail}. The residual series keeps an \
         irreducible fresh-noise floor whose across-node sample std fluctuates \
         ~7% at N=100, wider than the 5% convergence band, so the convergence \
         iteration is near-end or absent for every algorithm."
    );
}

#[test]
fn criterion_5_steady_state_trends() {
    let t0 = Instant::now();
    let ns = [20usize, 40, 60, 80, 100];
    let median_steady = |algo: Algorithm, nodes: usize, c: f64| -> f64 {
        let cfg = SimConfig {
            nodes,
            connectivity: c,
            snr_db: 0.0,
            iterations: 200,
            trials: 200,
            algorithm: algo,
            ..SimConfig::default()
        };
        let mut ss: Vec<f64> = run_monte_carlo(&cfg)
            .unwrap()
            .trials
            .iter()
            .map(|t| t.steady_state_phase_std)
            .collect();
        ss.sort_by(f64::total_cmp);
        0.5 * (ss[99] + ss[100])
    };

    let mut at_dense = Vec::new();
    let mut at_sparse_100 = Vec::new();
    for algo in Algorithm::ALL {
        let sparse: Vec<f64> = ns.iter().map(|&n| median_steady(algo, n, 0.2)).collect();
        let dense: Vec<f64> = ns.iter().map(|&n| median_steady(algo, n, 0.5)).collect();
        for i in 1..ns.len() {
            assert!(
                sparse[i] <= sparse[i - 1],
                "{algo} at c=0.2 not monotone over nodes: {sparse:?}"
            );
        }
        for i in 0..ns.len() {
            assert!(
                dense[i] <= sparse[i],
                "{algo} at N={}: c=0.5 value {} above c=0.2 value {}",
                ns[i],
                dense[i],
                sparse[i]
            );
        }
        at_sparse_100.push(sparse[ns.len() - 1]);
        at_dense.push(dense[ns.len() - 1]);
    }
    for (i, algo) in Algorithm::ALL.iter().enumerate().take(3) {
        assert!(
            at_sparse_100[3] < at_sparse_100[i],
            "ha-dkf {} not below {algo} {}",
            at_sparse_100[3],
            at_sparse_100[i]
        );
    }
    let dt = t0.elapsed().as_secs_f64();
    report(
        5,
        "steady-state spread trends",
        &format!(
            "v nodes at c=0.2 monotone for all four; c=0.5 at or below c=0.2 \
             everywhere; ha-dkf lowest at N=100/c=0.2 ({:.4e} rad); {dt:.1}s",
            at_sparse_100[3]
        ),
    );
}

#[test]
fn criterion_6_snr_consistency() {
    let t0 = Instant::now();
    let steady = |snr_db: f64| -> f64 {
        let cfg = SimConfig {
            nodes: 100,
            connectivity: 0.2,
            snr_db,
            iterations: 200,
            trials: 200,
            algorithm: Algorithm::HaDkf,
            ..SimConfig::default()
        };
        let mut ss: Vec<f64> = run_monte_carlo(&cfg)
            .unwrap()
            .trials
            .iter()
            .map(|t| t.steady_state_phase_std)
            .collect();
        ss.sort_by(f64::total_cmp);
        0.5 * (ss[99] + ss[100])
    };
    let at0 = steady(0.0);
    let at10 = steady(10.0);
    let rel = (at10 - at0).abs() / at0;
    assert!(
        rel <= 0.25,
        "10 dB median {at10:e} deviates {rel:.1}% from 0 dB median {at0:e}"
    );
    report(
        6,
        "snr consistency",
        &format!(
            "0 dB {at0:.4e}, 10 dB {at10:.4e}, rel diff {:.2e}; {:.1}s",
            rel,
            t0.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_7_fixed_point_and_determinism() {
    let t0 = Instant::now();

    // Zero-noise identical-state arrays are invariant for all four variants.
    let mut adj = Adjacency::empty(4);
    for a in 0..4 {
        for b in (a + 1)..4 {
            adj.add_edge(a, b);
        }
    }
    let topo = Topology::from_adjacency(adj);
    let start = ElectricalState::new(1e9, 1.5);
    let mut worst_freq = 0.0f64;
    let mut worst_phase = 0.0f64;
    for algo in Algorithm::ALL {
        let cfg = SimConfig {
            nodes: 4,
            algorithm: algo,
            noise_enabled: false,
            ..SimConfig::default()
        };
        let env = TrialEnv::new(&cfg, start.freq_hz).unwrap();
        let mut rngs = TrialRngs::new(cfg.seed, 0, 4);
        let mut states = vec![start; 4];
        let mut filters = init_filters(&env, &states, &mut rngs).unwrap();
        let mut scratch = RoundScratch::new(4);
        for k in 0..50 {
            run_round(
                &env,
                &topo,
                k,
                &mut states,
                &mut filters,
                &mut rngs,
                &mut scratch,
            )
            .unwrap();
        }
        for s in &states {
            worst_freq = worst_freq.max((s.freq_hz - start.freq_hz).abs());
            worst_phase = worst_phase.max((s.phase_rad - start.phase_rad).abs());
        }
    }
    assert!(worst_freq <= 1e-3, "frequency drifted {worst_freq} Hz");
    assert!(worst_phase <= 1e-9, "phase drifted {worst_phase} rad");

    // Bit-identical reruns under one seed, and across thread counts.
    let cfg = SimConfig {
        nodes: 20,
        iterations: 30,
        trials: 8,
        ..SimConfig::default()
    };
    let first = run_monte_carlo(&cfg).unwrap();
    let second = run_monte_carlo(&cfg).unwrap();
    assert_eq!(first, second, "repeated run differed");
    let pool = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_monte_carlo(&cfg))
            .unwrap()
    };
    assert_eq!(pool(1), pool(8), "thread count changed results");

    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 30.0, "took {dt:.2}s, limit 30s");
    report(
        7,
        "fixed point and determinism",
        &format!(
            "50-round drift <= {worst_freq:.1e} Hz / {worst_phase:.1e} rad; reruns and 1 vs 8 \
             threads bit-identical; {dt:.2}s"
        ),
    );
}

#[test]
fn criterion_8_noise_model_statistics() {
    let t0 = Instant::now();
    let cfg = SimConfig::default();
    let osc = cfg.oscillator();
    let noise = cfg.measurement().noise_model(cfg.carrier_hz).unwrap();

    let mut rng = stream_rng(0xACC, 0, 0, StreamRole::Drift);
    let mut df = Vec::with_capacity(100_000);
    let mut dtheta = Vec::with_capacity(100_000);
    for _ in 0..100_000 {
        let d = draw_noise(&osc, &mut rng);
        df.push(d.df_hz);
        dtheta.push(d.dtheta_rad);
    }
    let mut rng = stream_rng(0xACC, 0, 0, StreamRole::Measurement);
    let truth = ElectricalState::new(cfg.carrier_hz, 0.4);
    let mut ef = Vec::with_capacity(100_000);
    let mut etheta = Vec::with_capacity(100_000);
    for _ in 0..100_000 {
        let (y, _) = measure_state(truth, &noise, &mut rng);
        ef.push(y.a0 - truth.freq_hz);
        etheta.push(y.a1 - truth.phase_rad);
    }

    let checks = [
        ("drift std", population_std(&df), 70.711),
        ("jitter std", population_std(&dtheta), 3.0027e-3),
        ("freq measurement std", population_std(&ef), 12328.1),
        ("phase measurement std", population_std(&etheta), 2.0e-3),
    ];
    let mut detail = String::new();
    for (name, got, want) in checks {
        let rel = (got - want).abs() / want;
        assert!(rel <= 0.02, "{name}: sampled {got:e} vs expected {want:e}");
        detail.push_str(&format!("{name} {got:.5e} (target {want:e}); "));
    }
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 10.0, "took {dt:.2}s, limit 10s");
    detail.push_str(&format!("{dt:.2}s"));
    report(8, "noise model statistics", &detail);
}
