use borwin::baselines::{brute_force, rcsp_label_setting, relaxed_longest};
use borwin::generator::{random_dag, random_huc, DagParams, HucParams, PriceMode};
use borwin::graph::check_windows;
use borwin::huc::{build_graph, check_schedule, revenue, schedule_to_path, within_windows};
use borwin::io::{dag_to_json, huc_to_json, parse_dag, parse_huc};
use borwin::phase1::{run_phase1, search_space, PhaseOneOutcome};
use borwin::scalar::{format_scalar, parse_scalar, ratio, to_decimal_string};
use borwin::solver::{solve, SolverOptions};
use proptest::prelude::*;

fn dag_params() -> impl Strategy<Value = (DagParams, u64)> {
    (3usize..=10, 0.1f64..0.6, 0.0f64..1.0, 0.1f64..1.0, -5i64..=5, any::<u64>()).prop_map(|(n, d, wp, ww, rlo, seed)| {
        let params = DagParams {
            vertices: n,
            density: d,
            window_prob: wp,
            window_width: ww,
            resource_range: (rlo, rlo + 8),
            ..Default::default()
        };
        (params, seed)
    })
}

fn huc_params() -> impl Strategy<Value = (HucParams, u64)> {
    (1usize..=4, 1usize..=3, 1usize..=3, any::<bool>(), 0i64..=6, any::<bool>(), any::<u64>()).prop_map(
        |(periods, points, min_updown, flat, slack, random_initial, seed)| {
            let params = HucParams {
                periods,
                points,
                min_updown,
                price_mode: if flat { PriceMode::NearFlat } else { PriceMode::Independent },
                slack,
                random_initial,
            };
            (params, seed)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn solver_matches_oracles((params, seed) in dag_params()) {
        let dag = random_dag(&params, seed);
        let oracle = brute_force(&dag).unwrap();
        let sol = solve(&dag, &SolverOptions::default()).unwrap();
        prop_assert_eq!(sol.value(), oracle.value());
        let rcsp = rcsp_label_setting(&dag);
        prop_assert_eq!(rcsp.value(), oracle.value());
        if let Some(p) = &sol.path {
            prop_assert!(check_windows(&dag, p).is_feasible());
        }
    }

    #[test]
    fn first_phase_bounds_the_optimum((params, seed) in dag_params()) {
        let dag = random_dag(&params, seed);
        let oracle = brute_force(&dag).unwrap();
        let out = run_phase1(&dag).unwrap();
        match (&out, &oracle.best) {
            (PhaseOneOutcome::Infeasible, best) => prop_assert!(best.is_none()),
            (PhaseOneOutcome::Pair(p), Some(best)) => {
                prop_assert!(p.ub_value >= best.value);
                prop_assert!(relaxed_longest(&dag).unwrap() >= p.ub_value);
                prop_assert!(search_space(&out).unwrap().contains(best));
            }
            (PhaseOneOutcome::SolvedAtSp { path }, Some(best)) => prop_assert!(path.value >= best.value),
            _ => {}
        }
    }

    #[test]
    fn dag_json_round_trip((params, seed) in dag_params()) {
        let dag = random_dag(&params, seed);
        let text = dag_to_json(&dag);
        let back = parse_dag(&text).unwrap();
        prop_assert_eq!(dag_to_json(&back), text);
        let (a, b) = (solve(&back, &SolverOptions::default()).unwrap(), solve(&dag, &SolverOptions::default()).unwrap());
        prop_assert_eq!(a.value(), b.value());
    }

    #[test]
    fn huc_json_round_trip((params, seed) in huc_params()) {
        let inst = random_huc(&params, seed);
        prop_assert_eq!(parse_huc(&huc_to_json(&inst)).unwrap(), inst);
    }

    /// Paths of the state graph and legal schedules correspond one to one,
    /// with equal value and window feasibility.
    #[test]
    fn huc_graph_encodes_legal_schedules((params, seed) in huc_params()) {
        let inst = random_huc(&params, seed);
        let g = build_graph(&inst).unwrap();
        let levels = inst.levels();
        let total = levels.pow(inst.periods as u32);
        let mut legal = 0;
        for code in 0..total {
            let schedule: Vec<usize> = (0..inst.periods).map(|t| code / levels.pow(t as u32) % levels).collect();
            let path = schedule_to_path(&inst, &g, &schedule);
            prop_assert_eq!(check_schedule(&inst, &schedule).is_ok(), path.is_some(), "{:?}", schedule);
            if let Some(p) = path {
                legal += 1;
                prop_assert_eq!(&p.value, &revenue(&inst, &schedule));
                prop_assert_eq!(check_windows(&g.dag, &p).is_feasible(), within_windows(&inst, &schedule));
                prop_assert_eq!(g.schedule(&p), schedule);
            }
        }
        prop_assert!(legal > 0);
    }

    #[test]
    fn scalar_text_round_trip(num in -10_000i64..10_000, den in 1i64..500) {
        let q = ratio(num, den);
        prop_assert_eq!(parse_scalar(&format_scalar(&q)).unwrap(), q.clone());
        if (1..=6).any(|k| 10i64.pow(k) % den == 0) {
            prop_assert_eq!(parse_scalar(&to_decimal_string(&q, 12)).unwrap(), q);
        }
    }
}
