use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use leafavg::actions1d::iet::preset_four_interval;
use leafavg::actions1d::{make_ping_pong, make_rotation, CircleAction, CircleMap, IntervalExchange, PingPongLayout};
use leafavg::averages::{ball_average, AverageSeries, BallMode, Observable, TrigTerm};
use leafavg::flows::{flow, flow_distance, FlowPoint, Roof, SuspensionSpace};
use leafavg::geometry::{assemble_sigma, level_sign, plug_tree_distances, Sigma, SigmaSpec};
use leafavg::group_core::{
    ball_size, enumerate_ball, folner_defect, lambda_series, orbit_ball, FreeAction, Gen, PhasePoint, Word,
};
use leafavg::tolerances::{ORBIT_TOL, WORD_CAP};
use proptest::prelude::*;

fn gen(k: usize) -> impl Strategy<Value = Gen> {
    (1..=k, any::<bool>()).prop_map(|(i, inv)| Gen::new(i, inv))
}

fn word(k: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(gen(k), 0..max).prop_map(Word::from_letters)
}

fn circle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

fn sigma() -> &'static Sigma {
    static S: OnceLock<Sigma> = OnceLock::new();
    S.get_or_init(|| assemble_sigma(SigmaSpec::default()).unwrap())
}

proptest! {
    #[test]
    fn inverse_is_an_involution(g in gen(5)) {
        prop_assert_eq!(g.inverse().inverse(), g);
        prop_assert_eq!(g.inverse().index(), g.index());
        prop_assert_ne!(g.inverse().is_inverse(), g.is_inverse());
    }

    #[test]
    fn reduce_is_idempotent_and_reduced(w in word(3, 24)) {
        let r = w.reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.reduce(), r.clone());
        prop_assert!(r.len() <= w.len());
        prop_assert!(r.len() % 2 == w.len() % 2);
        // Same element: w · r⁻¹ reduces to the identity.
        prop_assert!(w.concat(&r.inverse()).reduce().is_empty());
    }

    #[test]
    fn word_text_round_trips(w in word(4, 12)) {
        let r = w.reduce();
        let parsed: Word = r.to_string().parse().unwrap();
        prop_assert_eq!(parsed, r);
    }

    #[test]
    fn ball_matches_count_and_is_distinct(k in 1usize..=3, n in 1usize..=5) {
        let b = enumerate_ball(k, n, WORD_CAP).unwrap();
        prop_assert_eq!(b.len() as u128, ball_size(k, n));
        let mut seen = HashSet::new();
        for w in b.iter() {
            prop_assert!(!w.is_empty() && w.len() <= n);
            prop_assert!(Word::from_letters(w.to_vec()).is_reduced());
            prop_assert!(seen.insert(w.to_vec()));
        }
    }

    #[test]
    fn orbit_balls_are_nested_and_separated(alpha in 0.0f64..1.0, y in 0.0f64..1.0, n in 2usize..=6) {
        let a = CircleAction::rotation(alpha);
        let big = orbit_ball(&a, &y, n, ORBIT_TOL, WORD_CAP).unwrap();
        let small = orbit_ball(&a, &y, n - 1, ORBIT_TOL, WORD_CAP).unwrap();
        let sizes = big.sizes();
        prop_assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        for c in small.classes() {
            prop_assert!(big.find(&c.point).is_some());
        }
        let pts: Vec<f64> = big.classes().iter().map(|c| c.point.coords()[0]).collect();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                prop_assert!(circle_gap(pts[i], pts[j]) > ORBIT_TOL);
            }
        }
    }

    #[test]
    fn free_cyclic_ratio_is_one_over_n(n in 2usize..200) {
        let s = lambda_series(&FreeAction::new(1).unwrap(), &Word::empty(), n, 0.0, WORD_CAP).unwrap();
        for x in s.samples() {
            prop_assert!((x.value - 1.0 / x.index).abs() < 1e-15);
        }
        let v: Vec<f64> = s.values().collect();
        prop_assert!(v.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn folner_defect_ignores_reduction(w in word(2, 6), n in 1usize..=4) {
        prop_assume!(!w.reduce().is_empty());
        let a = FreeAction::new(2).unwrap();
        let raw = folner_defect(&a, &Word::empty(), &w, n, 0.0, WORD_CAP).unwrap();
        let red = folner_defect(&a, &Word::empty(), &w.reduce(), n, 0.0, WORD_CAP).unwrap();
        prop_assert_eq!(raw, red);
    }

    #[test]
    fn pingpong_maps_invert(x in 0.0f64..1.0) {
        let t = make_ping_pong(&PingPongLayout::default()).unwrap();
        for m in &t.maps {
            prop_assert!(circle_gap(m.inverse(m.forward(x)), x) < 1e-12);
            prop_assert!(circle_gap(m.forward(m.inverse(x)), x) < 1e-12);
            prop_assert!(circle_gap(m.forward(x + 1.0), m.forward(x)) < 1e-12);
        }
    }

    #[test]
    fn iet_is_a_piecewise_translation(x in 0.0f64..1.0, e in 1e-7f64..1e-5) {
        let t = preset_four_interval();
        let y = t.forward(x);
        prop_assert!((0.0..1.0).contains(&y));
        prop_assert!((t.inverse(y) - x).abs() < 1e-12);
        let i = t.interval_of(x);
        if x + e < 1.0 && t.interval_of(x + e) == i {
            prop_assert!((t.forward(x + e) - y - e).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_average_is_linear_and_label_free(a1 in 0.0f64..1.0, a2 in 0.0f64..1.0, c in -2.0f64..2.0, s in -2.0f64..2.0, n in 1usize..=4) {
        let f = |cos: f64, sin: f64| Observable::Trig {
            constant: 0.0,
            terms: vec![TrigTerm { freq: vec![1], cos, sin }],
        };
        let r1: Arc<dyn CircleMap> = Arc::new(make_rotation(a1));
        let r2: Arc<dyn CircleMap> = Arc::new(make_rotation(a2));
        let act = CircleAction::new(vec![r1.clone(), r2.clone()]).unwrap();
        let swapped = CircleAction::new(vec![r2, r1]).unwrap();
        let avg = |a: &CircleAction, phi: &Observable| ball_average(a, phi, &0.3, n, ORBIT_TOL, BallMode::Words, WORD_CAP).unwrap();
        let both = avg(&act, &f(c, s));
        prop_assert!((both - avg(&act, &f(c, 0.0)) - avg(&act, &f(0.0, s))).abs() < 1e-12);
        prop_assert!((both - avg(&swapped, &f(c, s))).abs() < 1e-12);
    }

    #[test]
    fn series_liminf_below_limsup(v in prop::collection::vec(-1.0f64..1.0, 4..40)) {
        let samples = v.iter().enumerate().map(|(i, &x)| ((i + 1) as f64, x, 0.0)).collect();
        let s = AverageSeries::with_quarter_window(samples).unwrap();
        prop_assert!(s.liminf_estimate() <= s.limsup_estimate());
    }

    #[test]
    fn flow_is_a_semigroup(x in 0.0f64..1.0, y in 0.0f64..0.5, s in -20.0f64..20.0, t in -20.0f64..20.0) {
        let sp = SuspensionSpace::new(preset_four_interval(), Roof::Affine { a: 0.5, b: 1.0 }).unwrap();
        let z = FlowPoint { x, y };
        let two = flow(&sp, flow(&sp, z, s), t);
        let one = flow(&sp, z, s + t);
        prop_assert!(flow_distance(&sp, one, two) < 1e-9);
    }

    #[test]
    fn plug_tree_roots_are_equidistant(n in 1u32..=4, extra in 0usize..=8, r0 in 0.5f64..10.0) {
        let k = 2 + extra.min((1usize << n) - 1);
        let d = plug_tree_distances(n, k, r0).unwrap();
        prop_assert_eq!(d.len(), k);
        for (i, row) in d.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                prop_assert_eq!(v, d[j][i]);
                prop_assert_eq!(v, if i == j { 0.0 } else { 2.0 * n as f64 * r0 });
            }
        }
    }

    #[test]
    fn level_signs_alternate(k in 1i32..50) {
        prop_assert_eq!(level_sign(k + 1), -level_sign(k));
        prop_assert_eq!(level_sign(-k), -level_sign(k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn surface_involution_flips_height_and_phi(i in any::<prop::sample::Index>()) {
        let s = sigma();
        let phi = s.make_phi();
        let v = i.index(s.node_count()) as u32;
        let m = s.mirror(v);
        prop_assert_eq!(s.mirror(m), v);
        prop_assert_eq!(s.height(m), -s.height(v));
        prop_assert_eq!(s.phi(&phi, m), -s.phi(&phi, v));
        if s.height(v) > 0.0 {
            prop_assert!(s.phi(&phi, v) >= 0.0);
        }
    }
}

#[test]
fn iet_preserves_measure() {
    let t: IntervalExchange<f64> = preset_four_interval();
    let n = 20_000;
    let mut hits = vec![0usize; 10];
    for i in 0..n {
        let y = t.forward((i as f64 + 0.5) / n as f64);
        hits[((y * 10.0) as usize).min(9)] += 1;
    }
    for h in hits {
        assert!((h as i64 - (n / 10) as i64).abs() <= 4, "{h}");
    }
}
