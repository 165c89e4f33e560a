mod common;

use common::*;
use nurse_cp::cp::{Consistency, CspModel, Domain, Propagator, VarId};
use proptest::prelude::*;

#[test]
fn sound_on_all_small_scopes() {
    let subsets = nonempty_subsets(3);
    let mut report = SweepReport::default();
    for n in 1..=3 {
        soundness_sweep(n, &subsets, &mut report);
    }
    assert!(report.cases > 0);
    assert!(report.violations.is_empty(), "{:#?}", report.violations);
}

#[test]
fn forward_checking_misses_pigeonhole() {
    // three variables, two values: no solution, but nothing is fixed yet
    let mut model = CspModel::new();
    let vars: Vec<VarId> = (0..3).map(|_| model.add_var([1, 2].into_iter().collect()).unwrap()).collect();
    model.post(Propagator::AllDifferent { scope: vars, except: Domain::EMPTY }).unwrap();
    assert_eq!(model.propagate_fixpoint(), Consistency::Consistent);
    assert!(all_solutions(model.domains(), model.propagators()).is_empty());
}

fn arb_case() -> impl Strategy<Value = (Vec<Domain>, Vec<Propagator>)> {
    (2usize..=4)
        .prop_flat_map(|n| {
            let cases = propagator_cases(n);
            let k = cases.len();
            (
                prop::collection::vec(1u64..32, n),
                prop::collection::vec(0..k, 1..4),
                Just(cases),
            )
        })
        .prop_map(|(bits, picks, cases)| {
            (bits.into_iter().map(Domain::from_bits).collect(), picks.into_iter().map(|i| cases[i].clone()).collect())
        })
}

proptest! {
    #[test]
    fn fixpoint_keeps_every_solution((domains, props) in arb_case()) {
        let mut model = CspModel::new();
        for &d in &domains {
            model.add_var(d).unwrap();
        }
        for p in &props {
            model.post(p.clone()).unwrap();
        }
        let before = all_solutions(&domains, &props);
        match model.propagate_fixpoint() {
            Consistency::Inconsistent => prop_assert!(before.is_empty()),
            Consistency::Consistent => {
                prop_assert_eq!(all_solutions(model.domains(), &props), before);
                // idempotent: every propagator is already at its fixpoint
                for p in model.propagators() {
                    let mut again = model.domains().to_vec();
                    let mut changed = Vec::new();
                    prop_assert!(p.propagate(&mut again, &mut changed).is_ok());
                    prop_assert!(changed.is_empty());
                    prop_assert_eq!(&again[..], model.domains());
                }
            }
        }
    }

    #[test]
    fn is_satisfied_matches_reference((domains, props) in arb_case()) {
        for_each_assignment(&domains, |a| {
            for p in &props {
                assert_eq!(p.is_satisfied(a), holds(p, a), "{p:?} on {a:?}");
            }
        });
    }
}
