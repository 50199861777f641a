//! Sample-size scaling of the replication harness: relative bias of the
//! posterior means shrinks toward zero and the SE columns contract as n
//! grows along 50 → 100 → 500.

use lcrm::gibbs::ChainConfig;
use lcrm::simulate::{presets, run_replication_study, ReplicationReport};

fn study(n: usize) -> ReplicationReport {
    let mut spec = presets::table1(n, 401);
    spec.replications = 16;
    let cfg = ChainConfig { iterations: 6000, burn_in: 2000, thin: 5, ..ChainConfig::desk(402) };
    run_replication_study(&spec, &cfg).unwrap()
}

fn regression_names(report: &ReplicationReport) -> Vec<String> {
    report
        .rows
        .iter()
        .filter(|r| r.name.starts_with("beta") || r.name.starts_with("alpha"))
        .map(|r| r.name.clone())
        .collect()
}

fn median_abs_rb(report: &ReplicationReport) -> f64 {
    let mut rbs: Vec<f64> = report
        .rows
        .iter()
        .filter(|r| r.name.starts_with("beta") || r.name.starts_with("alpha"))
        .map(|r| r.rb.abs())
        .collect();
    rbs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    0.5 * (rbs[rbs.len() / 2 - 1] + rbs[rbs.len() / 2])
}

#[test]
fn bias_and_spread_shrink_with_sample_size() {
    let small = study(50);
    let medium = study(100);
    let large = study(500);

    let rb = [median_abs_rb(&small), median_abs_rb(&medium), median_abs_rb(&large)];
    assert!(
        rb[0] > rb[1] && rb[1] > rb[2],
        "median |RB| not monotone: {rb:?}"
    );

    for name in regression_names(&small) {
        let se = [
            small.row(&name).unwrap().se,
            medium.row(&name).unwrap().se,
            large.row(&name).unwrap().se,
        ];
        assert!(
            se[0] > se[1] && se[1] > se[2],
            "{name}: SE not shrinking along n: {se:?}"
        );
    }
    println!(
        "median |RB| along n ∈ {{50, 100, 500}}: {:.4} → {:.4} → {:.4}",
        rb[0], rb[1], rb[2]
    );
}
