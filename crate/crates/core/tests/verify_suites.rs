use binet::verify::{
    merged_claims, run_suites, verify_theorem1, verify_theorem2, write_csv, GridSpec, Status,
    Suite, Symbol,
};

fn small_grid(seed: u64) -> GridSpec {
    let mut g = GridSpec::default().with_seed(seed).with_samples(500);
    g.points = 10;
    g
}

fn csv_bytes(grid: &GridSpec) -> Vec<u8> {
    let reports = run_suites(&Suite::ALL, grid).unwrap();
    let mut buf = Vec::new();
    write_csv(&merged_claims(&reports), &mut buf).unwrap();
    buf
}

#[test]
fn reports_are_byte_identical_for_a_fixed_seed() {
    let a = csv_bytes(&small_grid(7));
    let b = csv_bytes(&small_grid(7));
    assert_eq!(a, b);
    assert_ne!(a, csv_bytes(&small_grid(8)));
}

#[test]
fn every_suite_passes_on_a_reduced_grid() {
    for report in run_suites(&Suite::ALL, &small_grid(3)).unwrap() {
        assert_eq!(report.status(), Status::Pass, "{:#?}", report.claims);
        for c in &report.claims {
            assert!(c.samples > 0, "{}", c.claim_id);
        }
    }
}

#[test]
fn claims_are_merged_in_id_order() {
    let merged =
        merged_claims(&run_suites(&[Suite::Remark, Suite::Theorem1], &small_grid(1)).unwrap());
    let ids: Vec<&str> = merged.iter().map(|c| c.claim_id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn antisymmetric_pairs_pass_the_convergent_branch() {
    // every convergent-branch pair has a = −b by construction
    let report = verify_theorem1(&small_grid(5)).unwrap();
    let claim = report.claim("convergence.convergent_slope").unwrap();
    assert_eq!(claim.status, Status::Pass);
    let a = claim
        .worst_coordinates
        .iter()
        .find(|(k, _)| k == "a")
        .unwrap()
        .1;
    let b = claim
        .worst_coordinates
        .iter()
        .find(|(k, _)| k == "b")
        .unwrap()
        .1;
    assert_eq!(a, -b);
}

#[test]
fn wider_t_range_keeps_shape_claims() {
    let grid = small_grid(11).with_range(Symbol::T, 1e-4, 200.0);
    let report = verify_theorem2(&grid).unwrap();
    for c in &report.claims {
        assert_ne!(c.status, Status::Fail, "{c}");
        assert!(!c.worst_coordinates.is_empty(), "{}", c.claim_id);
    }
}
