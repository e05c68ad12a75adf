use np_region::lower_bounds::{generic_lower, named_lower, reversed_lower};
use np_region::upper_bounds::chernoff_tangent_point;
use np_region::{
    bayes_error, ber_bounds, brute_force_boundary, chernoff_coefficient, chernoff_envelope,
    chernoff_tangent_line, convex_refine, discretize_analytic, exact_boundary, f_divergence,
    lr_profile, realize_categorical, realize_unit_interval, refined_chernoff, region_contains,
    roc_mixing_weight, tensor_power, AnalyticFamily, BoundCurve, CategoricalPair, FGenerator,
    GridSpec, LowerKind, PriorPair,
};
use proptest::prelude::*;

fn pair_strategy() -> impl Strategy<Value = CategoricalPair> {
    (2usize..=10)
        .prop_flat_map(|n| {
            let cell = (0.01f64..1.0, 0u8..8);
            (
                prop::collection::vec(cell.clone(), n),
                prop::collection::vec(cell, n),
            )
        })
        .prop_filter_map("masses vanish", |(ps, qs)| {
            let mut p: Vec<f64> = ps
                .iter()
                .map(|&(v, z)| if z == 0 { 0.0 } else { v })
                .collect();
            let mut q: Vec<f64> = qs
                .iter()
                .map(|&(v, z)| if z == 0 { 0.0 } else { v })
                .collect();
            for (a, b) in p.iter_mut().zip(q.iter_mut()) {
                if *a == 0.0 && *b == 0.0 {
                    *a = 0.5;
                }
            }
            let (sp, sq): (f64, f64) = (p.iter().sum(), q.iter().sum());
            if sp == 0.0 || sq == 0.0 {
                return None;
            }
            p.iter_mut().for_each(|v| *v /= sp);
            q.iter_mut().for_each(|v| *v /= sq);
            CategoricalPair::new(p, q, None).ok()
        })
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| k as f64 / (n - 1) as f64)
}

fn generators() -> Vec<FGenerator> {
    vec![
        FGenerator::Tvd,
        FGenerator::Kl,
        FGenerator::ReverseKl,
        FGenerator::Hellinger2,
        FGenerator::Chi2,
        FGenerator::Alpha(0.3),
        FGenerator::Alpha(0.5),
        FGenerator::HockeyStick(0.5),
        FGenerator::HockeyStick(2.0),
        FGenerator::Indicator {
            lower: 0.25,
            upper: 3.0,
        },
    ]
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a.is_infinite() && a == b) || (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn r_pair() -> CategoricalPair {
    CategoricalPair::new(vec![0.6, 0.3, 0.1], vec![0.1, 0.3, 0.6], None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pairs_are_normalized(pair in pair_strategy()) {
        for v in [pair.p(), pair.q()] {
            prop_assert!((v.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert!(v.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn profile_merges_and_sorts(pair in pair_strategy()) {
        let prof = lr_profile(&pair);
        let sp: f64 = prof.segments.iter().map(|s| s.p_mass).sum();
        let sq: f64 = prof.segments.iter().map(|s| s.q_mass).sum();
        prop_assert!((sp - 1.0).abs() <= 1e-12 && (sq - 1.0).abs() <= 1e-12);
        for w in prof.segments.windows(2) {
            prop_assert!(w[0].ratio > w[1].ratio);
        }
    }

    #[test]
    fn tensor_powers_stay_normalized_and_tensorize(pair in pair_strategy(), q in 0.05f64..0.95) {
        let rho = chernoff_coefficient(&pair, q).unwrap();
        for n in 2..=3usize {
            let t = tensor_power(&pair, n).unwrap();
            prop_assert!(t.len() <= pair.len().pow(n as u32));
            prop_assert!((t.p().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert!((t.q().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            let rn = chernoff_coefficient(&t, q).unwrap();
            prop_assert!((rn - rho.powi(n as i32)).abs() <= 1e-10);
        }
    }

    #[test]
    fn identical_families_discretize_identically(mu in -3.0f64..3.0, sigma in 0.2f64..3.0) {
        let f = AnalyticFamily::gaussian(mu, sigma).unwrap();
        let g = GridSpec::new(mu - 8.0 * sigma, mu + 8.0 * sigma, 128).unwrap();
        let d = discretize_analytic(&f, &f, &g).unwrap();
        prop_assert_eq!(d.pair.p(), d.pair.q());
    }

    #[test]
    fn divergences_are_nonnegative_and_reverse(pair in pair_strategy()) {
        let rev = pair.swapped();
        for g in generators() {
            let d = f_divergence(&pair, &g).value;
            prop_assert!(d >= 0.0, "{g}: {d}");
            if let Some(gs) = g.conjugate() {
                let back = f_divergence(&rev, &gs).value;
                prop_assert!(close(d, back, 1e-12), "{g}: {d} vs {back}");
            }
        }
        let h2 = f_divergence(&pair, &FGenerator::Hellinger2).value;
        let rho = chernoff_coefficient(&pair, 0.5).unwrap();
        prop_assert!((h2 - (1.0 - rho)).abs() <= 1e-12);
    }

    #[test]
    fn hockey_stick_duality(pair in pair_strategy(), gamma in 1.0f64..6.0) {
        let lhs = f_divergence(&pair, &FGenerator::HockeyStick(1.0 / gamma)).value;
        let rhs = 1.0 - 1.0 / gamma
            + f_divergence(&pair.swapped(), &FGenerator::HockeyStick(gamma)).value / gamma;
        prop_assert!((lhs - rhs).abs() <= 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn boundaries_are_convex_monotone_with_endpoint_law(pair in pair_strategy()) {
        let b = exact_boundary(&pair);
        let v = b.vertices();
        prop_assert_eq!(v[0].0, 0.0);
        prop_assert_eq!(*v.last().unwrap(), (1.0, 0.0));
        let p_off: f64 = pair.p().iter().zip(pair.q()).filter(|(_, &q)| q == 0.0).map(|(p, _)| p).sum();
        prop_assert!((v[0].1 - (1.0 - p_off)).abs() <= 1e-12);
        let mut prev_slope = f64::NEG_INFINITY;
        for w in v.windows(2) {
            prop_assert!(w[1].0 > w[0].0 && w[1].1 <= w[0].1);
            let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            prop_assert!(slope >= prev_slope - 1e-9);
            prev_slope = slope;
        }
        let brute = brute_force_boundary(&pair).unwrap();
        prop_assert_eq!(v.len(), brute.vertices().len());
    }

    #[test]
    fn region_is_closed_under_mixing(
        pair in pair_strategy(),
        a1 in 0.0f64..=1.0, a2 in 0.0f64..=1.0,
        u1 in 0.0f64..=1.0, u2 in 0.0f64..=1.0, lambda in 0.0f64..=1.0,
    ) {
        let b = exact_boundary(&pair);
        let point = |a: f64, u: f64| {
            let lo = b.eval(a).unwrap();
            let hi = 1.0 - b.eval(1.0 - a).unwrap();
            (a, lo + u * (hi - lo))
        };
        let (x, y) = (point(a1, u1), point(a2, u2));
        prop_assert!(region_contains(&b, x.0, x.1) && region_contains(&b, y.0, y.1));
        let m = (lambda * x.0 + (1.0 - lambda) * y.0, lambda * x.1 + (1.0 - lambda) * y.1);
        prop_assert!(region_contains(&b, m.0, m.1), "{x:?} {y:?} -> {m:?}");
    }

    #[test]
    fn lower_bounds_are_sound(pair in pair_strategy()) {
        let b = exact_boundary(&pair);
        let rho = chernoff_coefficient(&pair, 0.5).unwrap();
        let kl = f_divergence(&pair, &FGenerator::Kl).value;
        let tvd = f_divergence(&pair, &FGenerator::Tvd).value;
        for a in grid(101) {
            let exact = b.eval(a).unwrap();
            for (kind, v) in [(LowerKind::Hellinger, rho), (LowerKind::Kl, kl), (LowerKind::Tvd, tvd), (LowerKind::Pinsker, kl)] {
                prop_assert!(named_lower(kind, v, 1, a).unwrap() <= exact + 1e-9, "{kind} at {a}");
            }
        }
        for a in grid(101).skip(1).take(99) {
            let exact = b.eval(a).unwrap();
            for g in generators() {
                let d = f_divergence(&pair, &g).value;
                prop_assert!(generic_lower(&g, d, a).unwrap() <= exact + 1e-9, "{g} at {a}");
            }
        }
    }

    #[test]
    fn reversed_bounds_match_conjugate_generators(d in 0.0f64..3.0, a in 0.01f64..0.99) {
        for g in [FGenerator::Kl, FGenerator::ReverseKl, FGenerator::Alpha(0.3), FGenerator::Tvd, FGenerator::Hellinger2] {
            let gs = g.conjugate().unwrap();
            let rev = reversed_lower(&g, d, a).unwrap();
            let fwd_conj = generic_lower(&gs, d, a).unwrap();
            prop_assert!((rev - fwd_conj).abs() <= 1e-12, "{g}: {rev} vs {fwd_conj}");
            if gs == g {
                prop_assert!((rev - generic_lower(&g, d, a).unwrap()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn hellinger_bound_shrinks_with_samples(rho in 0.05f64..1.0, a in 0.0f64..=1.0) {
        let mut prev = f64::INFINITY;
        for n in [1u32, 2, 5, 20, 100] {
            let v = named_lower(LowerKind::Hellinger, rho, n, a).unwrap();
            prop_assert!(v <= prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn upper_bounds_sandwich_the_boundary(pair in pair_strategy(), q in 0.1f64..0.9) {
        let b = exact_boundary(&pair);
        let rho = chernoff_coefficient(&pair, q).unwrap();
        let rho_h = chernoff_coefficient(&pair, 0.5).unwrap();
        for a in grid(101) {
            let exact = b.eval(a).unwrap();
            let refined = refined_chernoff(q, rho, 1, a).unwrap();
            prop_assert!(refined >= exact - 1e-9, "alpha {a}: {refined} < {exact}");
            prop_assert!(named_lower(LowerKind::Hellinger, rho_h, 1, a).unwrap() <= exact + 1e-9);
            if a > 0.0 {
                prop_assert!(refined <= chernoff_envelope(q, rho, 1, a).unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn tangent_lines_touch_the_envelope(s in 0.05f64..1.95, q in 0.1f64..0.9, rho in 0.1f64..=1.0) {
        let line = chernoff_tangent_line(s, q, rho).unwrap();
        let (a, b) = chernoff_tangent_point(s, q, rho).unwrap();
        prop_assume!(a <= 1.0);
        prop_assert!(line.residual(a, b).abs() <= 1e-10);
        prop_assert!((chernoff_envelope(q, rho, 1, a).unwrap() - b).abs() <= 1e-10 * b.max(1.0));
    }

    #[test]
    fn convex_refine_lies_below_its_input(q in 0.2f64..0.8, rho in 0.2f64..0.95) {
        let curve = BoundCurve::chernoff_envelope(q, rho, 1).unwrap();
        let hull = convex_refine(&curve, 513).unwrap();
        for a in grid(65).skip(1) {
            prop_assert!(hull.eval(a).unwrap() <= curve.eval(a).unwrap() + 1e-12);
        }
    }

    #[test]
    fn categorical_realization_round_trips(
        widths in prop::collection::vec(0.05f64..1.0, 2..9),
        gaps in prop::collection::vec(0.1f64..1.0, 9),
        keep_end in any::<bool>(),
    ) {
        let total: f64 = widths.iter().sum();
        let mut slopes: Vec<f64> = gaps[..widths.len()].iter().scan(0.0, |acc, g| { *acc += g; Some(*acc) }).collect();
        slopes.reverse();
        let drop: f64 = slopes.iter().zip(&widths).map(|(k, w)| k * w / total).sum();
        let mut verts = Vec::new();
        let (mut a, mut b) = (0.0, 1.0);
        for (k, w) in slopes.iter_mut().zip(&widths) {
            *k /= drop;
            a += w / total;
            b -= *k * w / total;
            verts.push((a, b));
        }
        *verts.last_mut().unwrap() = (1.0, 0.0);
        if !keep_end {
            verts.pop();
        }
        let pair = realize_categorical(&verts).unwrap();
        for ((p, q), k) in pair.p().iter().zip(pair.q()).zip(&slopes) {
            prop_assert!((p / q - k).abs() <= 1e-12 * k.max(1.0));
        }
        let got = exact_boundary(&pair);
        for (g, e) in got.vertices()[1..].iter().zip(&verts) {
            prop_assert!((g.0 - e.0).abs() <= 1e-12 && (g.1 - e.1).abs() <= 1e-12);
        }
    }

    #[test]
    fn unit_interval_cdfs_are_convex(k in 1.0f64..4.0) {
        let table = realize_unit_interval(|a| (1.0 - a).powf(k), 257).unwrap();
        let v = table.values();
        prop_assert_eq!((v[0], *v.last().unwrap()), (0.0, 1.0));
        for w in v.windows(3) {
            prop_assert!(w[1] <= 0.5 * (w[0] + w[2]) + 1e-9);
        }
    }

    #[test]
    fn bayes_error_is_a_supporting_line(pair in pair_strategy(), pi in 0.01f64..0.99) {
        let b = exact_boundary(&pair);
        let prior = PriorPair::new(pi).unwrap();
        let (ber, (a0, b0)) = bayes_error(&b, prior);
        prop_assert!((pi * a0 + (1.0 - pi) * b0 - ber).abs() <= 1e-15);
        for &(a, be) in b.vertices() {
            prop_assert!(pi * a + (1.0 - pi) * be >= ber - 1e-12);
        }
        for a in grid(101) {
            prop_assert!(pi * a + (1.0 - pi) * b.eval(a).unwrap() >= ber - 1e-12);
        }
    }

    #[test]
    fn ber_interval_brackets_the_truth(pair in pair_strategy(), pi in 0.05f64..0.95) {
        let b = exact_boundary(&pair);
        let rho = chernoff_coefficient(&pair, 0.5).unwrap();
        let prior = PriorPair::new(pi).unwrap();
        let lower = BoundCurve::named(LowerKind::Hellinger, rho, 1).unwrap();
        let upper = BoundCurve::refined_chernoff(0.5, rho, 1).unwrap();
        let (lb, ub) = ber_bounds(&lower, &upper, prior, 4001).unwrap();
        let (ber, _) = bayes_error(&b, prior);
        prop_assert!(lb <= ber + 1e-6 && ber <= ub + 1e-6, "{lb} {ber} {ub}");
    }

    #[test]
    fn mixing_plans_reconstruct(pair in pair_strategy(), t in 0.001f64..=1.0, u in 0.0f64..=1.0) {
        let b = exact_boundary(&pair);
        let lo = b.eval(t).unwrap();
        let g = lo + u * (1.0 - t - lo);
        let plan = roc_mixing_weight(&b, t, g).unwrap();
        prop_assert!((plan.reconstruct().1 - g).abs() <= 1e-12);
    }
}

#[test]
fn boundary_does_not_determine_the_pair() {
    let split =
        CategoricalPair::new(vec![0.6, 0.15, 0.15, 0.1], vec![0.1, 0.15, 0.15, 0.6], None).unwrap();
    let (a, b) = (exact_boundary(&r_pair()), exact_boundary(&split));
    assert_ne!(r_pair().len(), split.len());
    for (x, y) in a.vertices().iter().zip(b.vertices()) {
        assert!((x.0 - y.0).abs() < 1e-15 && (x.1 - y.1).abs() < 1e-15);
    }
    assert_eq!(a.vertices().len(), b.vertices().len());
}
