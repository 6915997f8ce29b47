use genealogy::affiliation::{institution_points, share_series, WeightScheme};
use genealogy::construct::{build_series, Cohorts, Snapshot};
use genealogy::fixtures::{self, random_dag, RandomDagSpec};
use genealogy::{AdvisingEdge, GenealogyGraph, Person};
use proptest::prelude::*;

fn chain(depth: usize) -> GenealogyGraph {
    let mut persons = vec![Person::new("L").laureate_in(2000).degree(1970, "UL")];
    let mut edges = Vec::new();
    let mut below = "L".to_owned();
    for g in 1..=depth {
        let id = format!("a{g:02}");
        persons.push(Person::new(id.as_str()).degree(1970 - 30 * g as i32, format!("U{g}")));
        edges.push(AdvisingEdge::new(id.as_str(), below.as_str()));
        below = id;
    }
    GenealogyGraph::new(persons, edges).unwrap()
}

#[test]
fn single_chain_total_has_closed_form() {
    for depth in 0..=12 {
        let ledger = institution_points(&Snapshot::new(2000, chain(depth)), WeightScheme::Halving);
        let expected = 2.0 - 0.5f64.powi(depth as i32);
        assert!((ledger.total() - expected).abs() < 1e-15, "depth {depth}");
    }
}

#[test]
fn f1_shares() {
    let series = build_series(&fixtures::f1_graph(), &fixtures::f1_cohorts()).unwrap();
    let ledger = institution_points(series.last().unwrap(), WeightScheme::Halving);
    let shares: Vec<f64> = ["U1", "U2", "U3"]
        .iter()
        .map(|u| ledger.shares[*u])
        .collect();
    for (got, want) in shares.iter().zip([0.526316, 0.263158, 0.210526]) {
        assert!((got - want).abs() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn points_never_decrease_and_shares_sum_to_one(seed in any::<u64>(), scheme in prop_oneof![Just(WeightScheme::Halving), Just(WeightScheme::CentralityWeighted)]) {
        let u = random_dag(&RandomDagSpec::default(), seed);
        let cohorts = Cohorts::from_universe(&u);
        prop_assume!(!cohorts.is_empty());
        let series = build_series(&u, &cohorts).unwrap();
        let shares = share_series(&series, scheme, 3);
        for ledger in &shares.ledgers {
            let sum: f64 = ledger.shares.values().sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
        }
        for year in series.years() {
            let sum: f64 = shares.rows.iter().filter(|r| r.year == year).map(|r| r.share).sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
        }
        if scheme == WeightScheme::Halving {
            for w in shares.ledgers.windows(2) {
                for (inst, &p) in &w[0].points {
                    prop_assert!(w[1].points[inst] >= p - 1e-12, "{} dropped in {}", inst, w[1].year);
                }
            }
        }
    }
}
