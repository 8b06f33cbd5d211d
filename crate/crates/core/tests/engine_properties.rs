use pfilter::classic::{bh_khat, bh_reject, simes, GridPoint};
use pfilter::engine::{
    brute_force_pfilter, layer_selection, pfilter, selection_set, PreparedProblem,
};
use pfilter::exact::scaled_le;
use pfilter::simulate::{random_instance, random_pvalues, trial_rng};
use pfilter::{Layer, MultiLayerProblem, PValueVector, ThresholdVector};
use proptest::prelude::*;
use rand::Rng;

fn instance(seed: u64, max_n: usize, max_m: usize) -> MultiLayerProblem {
    random_instance(&mut trial_rng(seed, 0), max_n, max_m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn fixed_point_matches_oracle(seed in any::<u64>()) {
        let problem = instance(seed, 12, 3);
        let report = pfilter(&problem);
        let oracle = brute_force_pfilter(&problem).unwrap();
        prop_assert_eq!(report.thresholds.indices(), oracle.indices());
    }

    #[test]
    fn report_is_consistent(seed in any::<u64>()) {
        let problem = instance(seed, 30, 4);
        let report = pfilter(&problem);
        prop_assert!(report.passes <= report.pass_bound());
        prop_assert_eq!(report.trace.len(), report.passes);
        prop_assert_eq!(
            &report.selected,
            &selection_set(problem.pvalues(), problem.layers(), &report.thresholds.points()).unwrap()
        );
        for (m, layer) in problem.layers().iter().enumerate() {
            let t = report.thresholds.as_slice()[m];
            prop_assert!(t.index <= layer.group_count());
            prop_assert!(report.estimated_fdps[m] <= problem.alphas()[m]);
            prop_assert_eq!(&report.layer_selected[m], &layer_selection(&report.selected, layer));
            // every selected group holds a selected hypothesis and vice versa
            for &g in &report.layer_selected[m] {
                prop_assert!(layer.group(g).iter().any(|i| report.selected.contains(i)));
            }
            for &i in &report.selected {
                prop_assert!(report.layer_selected[m].contains(&layer.membership()[i]));
            }
        }
    }

    #[test]
    fn single_layer_reductions(seed in any::<u64>(), alpha in prop::sample::select(vec![0.05, 0.1, 0.2, 0.5])) {
        let mut rng = trial_rng(seed, 1);
        let n = rng.random_range(1..40);
        let p = random_pvalues(&mut rng, n);
        let pv = PValueVector::new(p.clone()).unwrap();
        let finest = MultiLayerProblem::new(pv.clone(), vec![Layer::finest(n)], vec![alpha]).unwrap();
        prop_assert_eq!(pfilter(&finest).selected, bh_reject(&p, alpha));
        let coarsest = MultiLayerProblem::new(pv, vec![Layer::coarsest(n)], vec![alpha]).unwrap();
        prop_assert_eq!(!pfilter(&coarsest).selected.is_empty(), simes(&p) <= alpha);
    }

    #[test]
    fn vacuous_layers_and_conservativeness(seed in any::<u64>()) {
        let base = instance(seed, 25, 3);
        let n = base.n();
        let mut layers = vec![Layer::finest(n)];
        layers.extend(base.layers().iter().cloned());
        let alpha1 = base.alphas()[0];
        let p = base.pvalues().clone();
        let bh = bh_reject(&p, alpha1);

        let mut vacuous = vec![alpha1];
        vacuous.extend(layers[1..].iter().map(|l| l.group_count() as f64));
        let problem = MultiLayerProblem::new(p.clone(), layers.clone(), vacuous).unwrap();
        prop_assert_eq!(&pfilter(&problem).selected, &bh);

        let mut finite = vec![alpha1];
        finite.extend(base.alphas());
        let problem = MultiLayerProblem::new(p, layers, finite).unwrap();
        let selected = pfilter(&problem).selected;
        prop_assert!(selected.iter().all(|i| bh.contains(i)));
    }

    #[test]
    fn selection_monotone_in_thresholds(seed in any::<u64>()) {
        let problem = instance(seed, 20, 3);
        let mut rng = trial_rng(seed, 2);
        let prepared = PreparedProblem::new(&problem);
        let sizes: Vec<usize> = problem.layers().iter().map(Layer::group_count).collect();
        let low: Vec<usize> = sizes.iter().map(|&g| rng.random_range(0..=g)).collect();
        let high: Vec<usize> = low.iter().zip(&sizes).map(|(&l, &g)| rng.random_range(l..=g)).collect();
        let small = prepared.selection(&low);
        let large = prepared.selection(&high);
        prop_assert!(small.iter().all(|i| large.contains(i)));
    }

    #[test]
    fn layer_order_does_not_matter(seed in any::<u64>()) {
        let problem = instance(seed, 20, 4);
        let m = problem.layer_count();
        let mut order: Vec<usize> = (0..m).collect();
        let mut rng = trial_rng(seed, 3);
        for i in (1..m).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let permuted = MultiLayerProblem::new(
            problem.pvalues().clone(),
            order.iter().map(|&i| problem.layers()[i].clone()).collect(),
            order.iter().map(|&i| problem.alphas()[i]).collect(),
        ).unwrap();
        let a = pfilter(&problem);
        let b = pfilter(&permuted);
        let a_idx = a.thresholds.indices();
        let b_idx = b.thresholds.indices();
        for (slot, &orig) in order.iter().enumerate() {
            prop_assert_eq!(b_idx[slot], a_idx[orig]);
        }
        prop_assert_eq!(a.selected, b.selected);
    }

    #[test]
    fn grid_update_equals_real_interval_update(seed in any::<u64>()) {
        let problem = instance(seed, 15, 3);
        let prepared = PreparedProblem::new(&problem);
        let mut rng = trial_rng(seed, 4);
        let state: Vec<usize> = problem
            .layers()
            .iter()
            .map(|l| rng.random_range(1..=l.group_count()))
            .collect();
        let start = ThresholdVector::from_indices(&problem, &state).unwrap();
        for m in 0..problem.layer_count() {
            let alpha = problem.alphas()[m];
            let groups = problem.layers()[m].group_count();
            let k_new = prepared.update_index(m, &state);
            let new_value = GridPoint::new(alpha, k_new, groups);
            let mut points = start.points();
            // doubles strictly above the grid answer and at most the current threshold
            let hi = start.as_slice()[m].value();
            let samples = (0..200).map(|_| rng.random_range(new_value.value()..=hi.max(new_value.value())))
                .chain((1..=state[m]).map(|k| GridPoint::new(alpha, k, groups).value().next_up()));
            for t in samples {
                let above = !scaled_le(t, groups as u64, alpha, k_new as u64);
                let within = scaled_le(t, groups as u64, alpha, state[m] as u64);
                if !(above && within) {
                    continue;
                }
                points[m] = GridPoint::plain(t);
                let selected = selection_set(problem.pvalues(), problem.layers(), &points).unwrap();
                let s = layer_selection(&selected, &problem.layers()[m]).len();
                let feasible = scaled_le(t, groups as u64, alpha, s.max(1) as u64);
                prop_assert!(!feasible, "T = {} feasible above grid index {}", t, k_new);
            }
        }
    }

    #[test]
    fn finest_oracle_corner_tracks_bh(seed in any::<u64>(), alpha in prop::sample::select(vec![0.05, 0.1, 0.2, 0.5])) {
        let mut rng = trial_rng(seed, 5);
        let n = rng.random_range(1..=12);
        let p = random_pvalues(&mut rng, n);
        let problem = MultiLayerProblem::new(PValueVector::new(p.clone()).unwrap(), vec![Layer::finest(n)], vec![alpha]).unwrap();
        let corner = brute_force_pfilter(&problem).unwrap();
        prop_assert_eq!(corner.indices()[0], bh_khat(&p, alpha).max(1));
    }
}

#[test]
fn all_ones_select_nothing_in_any_layer() {
    let n = 6;
    let layers = vec![
        Layer::finest(n),
        Layer::from_assignment(&[0, 0, 1, 1, 2, 2]).unwrap(),
        Layer::coarsest(n),
    ];
    let problem = MultiLayerProblem::new(
        PValueVector::new(vec![1.0; n]).unwrap(),
        layers,
        vec![0.2; 3],
    )
    .unwrap();
    let report = pfilter(&problem);
    assert!(report.selected.is_empty());
    assert!(report.layer_selected.iter().all(Vec::is_empty));
    assert_eq!(report.thresholds.indices(), vec![1, 1, 1]);
}
