use leonard_trio::report::VerificationReport;
use leonard_trio::trio::{
    build_realization, verify_constraint_equations, verify_summation_formula, verify_wilson_gevps,
    HeunConstants,
};
use leonard_trio::{ParameterSet, Scalar};

fn s(t: &str) -> Scalar {
    t.parse().unwrap()
}

fn points() -> Vec<ParameterSet> {
    vec![
        ParameterSet::new(s("3/5"), s("1/3"), s("1/7"), s("2"), s("1/2"), 3).unwrap(),
        ParameterSet::new(s("2/7"), s("5/3"), s("-3/11"), s("4/9"), s("7/5"), 4).unwrap(),
        ParameterSet::new(s("-1/3"), s("2"), s("3"), s("-5"), s("1/4"), 2).unwrap(),
    ]
}

fn assert_clean(rep: &VerificationReport) {
    let bad: Vec<String> = rep
        .failures()
        .map(|r| {
            format!(
                "{} N={} residual={} {:?}",
                r.identity, r.n, r.max_residual, r.detail
            )
        })
        .collect();
    assert!(bad.is_empty(), "failures:\n{}", bad.join("\n"));
}

#[test]
fn trio_axioms_hold() {
    for ps in points() {
        assert_clean(&build_realization(&ps).unwrap().verify_trio_axioms());
    }
}

#[test]
fn heun_relations_hold() {
    for ps in points() {
        let tr = build_realization(&ps).unwrap();
        assert_clean(&tr.verify_heun_relations(&HeunConstants::new(&ps)));
    }
}

#[test]
fn gevp_from_matrices_holds() {
    for ps in points() {
        assert_clean(&build_realization(&ps).unwrap().verify_gevp_from_matrices());
    }
}

#[test]
fn biorthogonality_holds() {
    for ps in points() {
        assert_clean(&build_realization(&ps).unwrap().verify_biorthogonality());
    }
}

#[test]
fn constraints_hold() {
    for ps in points() {
        assert_clean(&verify_constraint_equations(&ps));
    }
}

#[test]
fn summation_holds() {
    for ps in points() {
        assert_clean(&verify_summation_formula(&ps));
    }
}

#[test]
fn wilson_gevps_hold() {
    for ps in points() {
        assert_clean(&verify_wilson_gevps(&ps));
    }
}
