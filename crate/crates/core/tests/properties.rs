use neofuzzy::cascade::{pair_count, LayerInput};
use neofuzzy::data::{self, gen_synthetic};
use neofuzzy::metrics::rmse;
use neofuzzy::{CascadeModel, GrowthPolicy, LayerWiring, MembershipBasis, NeoFuzzyNode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct transcription of the plant with 1-based time and explicit sums.
fn synthetic_oracle(length: usize) -> Vec<f64> {
    let mut y = vec![0.0f64; length + 1]; // y[0] unused
    for t in 11..=length {
        let mut num = 0.0;
        let mut den = 1.0;
        for i in 1..=10 {
            num += y[t - i];
            den += y[t - i] * y[t - i];
        }
        let u = (2.0 * std::f64::consts::PI * ((t - 1) as f64) / 20.0).sin();
        y[t] = num / den + u;
    }
    y[1..].to_vec()
}

#[test]
fn synthetic_matches_oracle() {
    let got = gen_synthetic(100);
    let want = synthetic_oracle(100);
    for (t, (a, b)) in got.values().iter().zip(&want).enumerate() {
        assert!((a - b).abs() <= 1e-12, "y_{} : {a} vs {b}", t + 1);
    }
    // Spot values from the oracle: y_12 = sin(1.1π), and history drives y_16.
    assert!((want[11] - (1.1 * std::f64::consts::PI).sin()).abs() < 1e-15);
    assert!((got.values()[15] - (-1.6469365614251648)).abs() < 1e-12);
}

/// Streams 5000 uniform samples from a random teacher into a zero student;
/// returns the student's prior-prediction errors.
fn teacher_student(forgetting: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = MembershipBasis::unit(2, 4).unwrap();
    let teacher_w: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let teacher = NeoFuzzyNode::with_state(basis.clone(), 1.0, teacher_w, 0.0).unwrap();
    let mut student = NeoFuzzyNode::new(basis, forgetting).unwrap();
    (0..5000)
        .map(|_| {
            let (a, b) = (rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0));
            let y = teacher.forward(a, b);
            y - student.update(a, b, y).unwrap()
        })
        .collect()
}

#[test]
fn student_recovers_teacher_with_forgetting() {
    for alpha in [0.0, 0.5, 0.9] {
        for seed in 0..3 {
            let errors = teacher_student(alpha, seed);
            let tail = rmse(&errors[4500..]).unwrap();
            assert!(tail <= 1e-2, "alpha {alpha} seed {seed}: {tail}");
        }
    }
}

#[test]
fn student_without_forgetting_improves_slowly() {
    // With α = 1 the gain grows linearly and the step shrinks like 1/k.
    let errors = teacher_student(1.0, 2024);
    let head = rmse(&errors[..500]).unwrap();
    let tail = rmse(&errors[4500..]).unwrap();
    assert!(tail < head, "{head} -> {tail}");
}

#[test]
fn update_is_bit_deterministic() {
    let run = || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut node = NeoFuzzyNode::new(MembershipBasis::unit(3, 6).unwrap(), 0.97).unwrap();
        for _ in 0..1000 {
            let (a, b, y) = (rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>());
            node.update(a, b, y).unwrap();
        }
        node
    };
    let (x, y) = (run(), run());
    assert!(x.weights().iter().zip(y.weights()).all(|(a, b)| a.to_bits() == b.to_bits()));
    assert_eq!(x.gain().to_bits(), y.gain().to_bits());
}

fn expected_wiring(layer: usize, ranking: &[usize]) -> LayerWiring {
    let ranked = |rank: usize| LayerInput::Ranked { rank, node: ranking[rank] };
    if layer == 0 {
        LayerWiring { a: ranked(0), b: ranked(1) }
    } else {
        LayerWiring { a: LayerInput::Layer(layer - 1), b: ranked(layer + 1) }
    }
}

#[test]
fn structure_follows_growth() {
    for (n, size) in [(2, 1), (3, 3), (5, 10)] {
        let mut model = CascadeModel::new(n, 4, 2, 0.9, GrowthPolicy::default(), 0.99).unwrap();
        assert_eq!(model.pairs().len(), size);
        assert_eq!(size, pair_count(n));
        let mut g = 0;
        while model.grow().is_ok() {
            g += 1;
            assert_eq!(model.depth(), g);
            for layer in 0..g {
                assert_eq!(model.layer_wiring(layer), expected_wiring(layer, model.ranking()));
            }
        }
        assert_eq!(model.depth(), size - 1);
        assert_eq!(model.pairs().len(), size);
    }
}

#[test]
fn ranking_is_sorted_when_frozen() {
    let policy = GrowthPolicy { warmup: 20, patience: 10, ..GrowthPolicy::default() };
    let mut model = CascadeModel::new(4, 4, 2, 0.9, policy, 0.95).unwrap();
    let series = gen_synthetic(600);
    let norm = data::fit_normalizer(&series, 600).unwrap();
    let samples = data::lag_embed(&norm.apply_all(series.values()), 4).unwrap();
    for s in &samples {
        let report = model.learn_step(&s.x, s.y).unwrap();
        if report.grew && model.depth() == 1 {
            // Ranking was sorted on the trackers as they stood after this
            // step's updates.
            let mse = model.node_mse();
            let r = model.ranking();
            assert!(r.windows(2).all(|w| mse[w[0]] <= mse[w[1]]), "{mse:?} {r:?}");
        }
    }
    assert!(model.depth() >= 1);
}

#[test]
fn cascade_training_is_deterministic() {
    let run = || {
        let series = gen_synthetic(1500);
        let norm = data::fit_normalizer(&series, 1200).unwrap();
        let samples = data::lag_embed(&norm.apply_all(series.values()), 3).unwrap();
        let mut model = CascadeModel::new(3, 4, 2, 0.9, GrowthPolicy::default(), 0.99).unwrap();
        let mut growth = Vec::new();
        for (k, s) in samples.iter().enumerate() {
            if model.learn_step(&s.x, s.y).unwrap().grew {
                growth.push(k);
            }
        }
        (model, growth)
    };
    let (a, ga) = run();
    let (b, gb) = run();
    assert_eq!(ga, gb);
    assert_eq!(a, b);
}

#[test]
fn cascade_beats_its_worst_first_layer_node() {
    let series = gen_synthetic(2500);
    let norm = data::fit_normalizer(&series, 2003).unwrap();
    let samples = data::lag_embed(&norm.apply_all(series.values()), 3).unwrap();
    let mut model = CascadeModel::new(3, 4, 2, 0.9, GrowthPolicy::default(), 0.99).unwrap();
    for s in &samples[..2000] {
        model.learn_step(&s.x, s.y).unwrap();
    }
    let worst = model.node_mse().into_iter().fold(0.0, f64::max);
    let top = model.layer_mse().last().copied().unwrap_or_else(|| model.output_mse());
    assert!(top < worst, "output {top} vs worst node {worst}");
}
