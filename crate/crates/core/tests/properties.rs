use balpack::bmbp::{solve_bmbp_traced, PlanFile, StagedAssignment};
use balpack::generate::{inflation_instance, property_instance, seeded_rng};
use balpack::kbfbp::{solve_kbfbp_decision_with, SearchOptions};
use balpack::reductions::{partition_to_2bfbp, partition_universe};
use balpack::{check_bmbp, check_kbfbp, solve_kbfbp_decision, Instance, KbfbpWitness, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

fn multisets(max_n: usize, max_size: u64) -> Vec<Vec<u64>> {
    let mut frontier: Vec<Vec<u64>> = vec![Vec::new()];
    let mut all = Vec::new();
    for _ in 0..max_n {
        frontier = frontier
            .iter()
            .flat_map(|s| {
                let top = s.last().copied().unwrap_or(max_size);
                (1..=top).map(move |v| {
                    let mut t = s.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
        all.extend(frontier.iter().cloned());
    }
    all
}

/// Small instances with integer and fractional capacities at or above the
/// largest size.
fn small_universe() -> Vec<Instance> {
    let mut out = Vec::new();
    for s in multisets(4, 5) {
        let top = *s.iter().max().unwrap() as i64;
        for cap in [Rational::from(top), Rational::new(3 * top + 2, 3), Rational::from(top + 2)] {
            out.push(Instance::new(s.clone(), cap).unwrap());
        }
    }
    out
}

fn bmbp_corpus() -> Vec<Instance> {
    let mut rng = seeded_rng(77);
    let mut out: Vec<Instance> = (0..1500).map(|_| property_instance(&mut rng, 30)).collect();
    out.extend((0..500).map(|_| inflation_instance(&mut rng, 30)));
    out
}

#[test]
fn two_stage_coefficient_bounds_and_exact_loads() {
    for inst in bmbp_corpus() {
        let trace = solve_bmbp_traced(&inst).unwrap();
        let plan = &trace.plan;
        let boxes = &trace.packing.box_sizes;
        for l in 0..plan.bins() {
            let c = &boxes[plan.sigma[l]];
            let cap = Rational::one().min(&plan.tilde_c / c);
            assert!(!plan.lambda1[l].is_negative() && plan.lambda1[l] <= cap);
            assert!(!plan.lambda2[l].is_negative() && plan.lambda2[l] <= Rational::one());
            let next = &boxes[plan.sigma[(l + 1) % plan.bins()]];
            assert_eq!(&plan.lambda1[l] * c + &plan.lambda2[l] * next, plan.tilde_c);
        }
        assert!(plan.bin_loads.iter().all(|load| load <= inst.capacity()));
    }
}

#[test]
fn every_object_is_fully_assigned() {
    for inst in bmbp_corpus() {
        let plan = solve_bmbp_traced(&inst).unwrap().plan;
        let mut demand = vec![Rational::zero(); inst.len()];
        for a in &plan.assignments {
            demand[a.object] += &a.fraction;
        }
        assert!(demand.iter().all(Rational::is_one));
    }
}

#[test]
fn perturbing_one_fraction_is_detected() {
    let mut rng = seeded_rng(5);
    for inst in bmbp_corpus().into_iter().take(600) {
        let plan = solve_bmbp_traced(&inst).unwrap().plan;
        let mut staged = plan.to_staged();
        let k = rng.gen_range(0..staged.entries.len());
        let delta = Rational::new(rng.gen_range(1..=50i64), rng.gen_range(1..=97i64) * 1000);
        let sign = rng.gen_bool(0.5);
        let f = &mut staged.entries[k].fraction;
        *f = if sign { &*f + &delta } else { &*f - &delta };
        let report = check_bmbp(&inst, &staged, 2).unwrap();
        assert!(!report.ok, "perturbation of entry {k} by {delta} went unnoticed");
    }
}

#[test]
fn relabeling_bins_keeps_plans_valid() {
    let mut rng = seeded_rng(6);
    for inst in bmbp_corpus().into_iter().take(300) {
        let staged = solve_bmbp_traced(&inst).unwrap().plan.to_staged();
        let mut perm: Vec<usize> = (0..staged.bins).collect();
        perm.shuffle(&mut rng);
        let relabeled = StagedAssignment {
            entries: staged
                .entries
                .iter()
                .cloned()
                .map(|mut a| {
                    a.bin = perm[a.bin];
                    a
                })
                .collect(),
            ..staged.clone()
        };
        assert!(check_bmbp(&inst, &relabeled, 2).unwrap().ok);
    }
}

#[test]
fn plan_file_round_trip() {
    for inst in bmbp_corpus().into_iter().take(200) {
        let plan = solve_bmbp_traced(&inst).unwrap().plan;
        let text = serde_json::to_string(&PlanFile::from(&plan)).unwrap();
        let back: PlanFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_plan().unwrap(), plan);
    }
}

#[test]
fn larger_split_bound_never_loses_a_witness() {
    for inst in small_universe() {
        for m in 1..=3 {
            let mut previous: Option<KbfbpWitness> = None;
            for k in 1..=3 {
                let found = solve_kbfbp_decision(&inst, m, k).unwrap();
                if let Some(w) = &previous {
                    // the smaller bound's witness still qualifies
                    assert!(check_kbfbp(&inst, w, k).unwrap().ok);
                    assert!(found.is_some(), "{:?} C={} m={m} k={k}", inst.input_sizes(), inst.capacity());
                }
                if let Some(w) = &found {
                    assert!(check_kbfbp(&inst, w, k).unwrap().ok);
                }
                previous = found.or(previous);
            }
        }
    }
}

#[test]
fn symmetry_pruning_preserves_the_answer() {
    let off = SearchOptions { symmetry_pruning: false };
    for inst in small_universe() {
        for m in 1..=3 {
            for k in 1..=3 {
                let pruned = solve_kbfbp_decision(&inst, m, k).unwrap();
                let full = solve_kbfbp_decision_with(&inst, m, k, off).unwrap();
                assert_eq!(
                    pruned.is_some(),
                    full.is_some(),
                    "{:?} C={} m={m} k={k}",
                    inst.input_sizes(),
                    inst.capacity()
                );
            }
        }
    }
}

#[test]
fn relabeling_bins_keeps_witnesses_valid() {
    let mut rng = seeded_rng(8);
    for inst in small_universe().into_iter().step_by(7) {
        if let Some(w) = solve_kbfbp_decision(&inst, 3, 2).unwrap() {
            let mut perm = vec![0, 1, 2];
            perm.shuffle(&mut rng);
            assert!(check_kbfbp(&inst, &w.permute_bins(&perm), 2).unwrap().ok);
        }
    }
}

#[test]
fn perturbing_a_factor_is_detected() {
    for inst in small_universe().into_iter().step_by(5) {
        if let Some(w) = solve_kbfbp_decision(&inst, 2, 2).unwrap() {
            for j in 0..w.bins() {
                if w.members(j).is_empty() {
                    continue;
                }
                let mut bad = w.clone();
                bad.alpha[j] = &bad.alpha[j] + Rational::new(1, 1009);
                assert!(!check_kbfbp(&inst, &bad, 2).unwrap().ok);
            }
        }
    }
}

#[test]
fn pads_sit_in_different_two_thirds_bins() {
    let two_thirds = Rational::new(2, 3);
    for options in [SearchOptions::default(), SearchOptions { symmetry_pruning: false }] {
        for set in partition_universe(5, 8) {
            let reduced = partition_to_2bfbp(&set).unwrap();
            let Some(w) = solve_kbfbp_decision_with(&reduced.instance, 3, 2, options).unwrap() else {
                continue;
            };
            let pads: Vec<usize> = (0..reduced.instance.len()).filter(|&i| reduced.is_pad(i)).collect();
            let homes: Vec<Vec<usize>> = pads
                .iter()
                .map(|&i| (0..3).filter(|&j| w.x[i][j] && w.alpha[j] == two_thirds).collect())
                .collect();
            assert_eq!(homes[0].len(), 1, "{set:?}");
            assert_eq!(homes[1].len(), 1, "{set:?}");
            assert_ne!(homes[0], homes[1], "{set:?}");
        }
    }
}
