use credpool::theoremlab::{certify, CertifyConfig, Expect, CLAIMS};

/// The default run: seeds 0 to 99, three to four cells, two to three agents.
#[test]
fn full_certification_run() {
    let report = certify(&CertifyConfig::default()).unwrap();
    assert_eq!(report.claims.len(), CLAIMS.len());
    let mut failed = Vec::new();
    for claim in &report.claims {
        for c in &claim.checks {
            if c.expect == Expect::Above && c.witness.is_some() {
                assert!(c.value > 1e-4, "{}: {} has no witness gap", claim.id, c.label);
            }
            if !c.pass {
                failed.push(format!("{}: {} ({:.3e})", claim.id, c.label, c.value));
            }
        }
    }
    assert!(failed.is_empty(), "failing checks:\n{}", failed.join("\n"));
}

#[test]
fn filtered_runs_are_deterministic() {
    let config = CertifyConfig {
        seed: 7,
        seeds: 20,
        claims: Some(vec!["thm8".into(), "prop2ii".into(), "sec9".into()]),
        ..CertifyConfig::default()
    };
    let a = certify(&config).unwrap();
    let b = certify(&config).unwrap();
    assert_eq!(a, b);
    assert!(a.pass);
    let ids: Vec<&str> = a.claims.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids, ["prop2ii", "thm8", "sec9"]);
}
