use leonard_trio::limits::{
    build_reduced_lp, verify_limit_ladders, H1Params, R1Params, R3Params, RacahRelation,
    LADDER_PRECISION,
};
use leonard_trio::qaskey::RLimitParams;
use leonard_trio::{ParameterSet, Scalar};

fn s(t: &str) -> Scalar {
    t.parse().unwrap()
}

fn points() -> Vec<ParameterSet> {
    vec![
        ParameterSet::new(s("3/5"), s("1/3"), s("1/7"), s("2"), s("2/3"), 3).unwrap(),
        ParameterSet::new(s("2/7"), s("5/3"), s("-3/11"), s("4/9"), s("7/5"), 4).unwrap(),
    ]
}

#[test]
fn exact_limits_vanish() {
    for ps in points() {
        let nn = ps.n;
        let rel = RacahRelation::new(&ps).unwrap();
        let r1 = R1Params::from_trio(&ps).unwrap();
        let h1 = H1Params::from_trio(&ps).unwrap();
        let r3 = R3Params::new(ps.s.clone(), ps.delta.clone(), ps.q.clone(), nn).unwrap();
        for n in 0..=nn {
            for x in 0..=nn {
                assert!(rel.residual(n, x).unwrap().is_zero(), "racah {n} {x}");
                assert_eq!(
                    r1.eval(n, x).unwrap(),
                    r1.sum_route(n, x).unwrap(),
                    "r1 {n} {x}"
                );
                assert!(
                    r1.recurrence_residual(n, x).unwrap().is_zero(),
                    "r1 rec {n} {x}"
                );
                assert!(
                    r1.difference_residual(n, x).unwrap().is_zero(),
                    "r1 diff {n} {x}"
                );
                assert!(
                    h1.recurrence_residual(n, x).unwrap().is_zero(),
                    "h1 rec {n} {x}"
                );
                assert!(
                    h1.difference_residual(n, x).unwrap().is_zero(),
                    "h1 diff {n} {x}"
                );
                assert_eq!(
                    r3.eval(n, x).unwrap(),
                    r3.wilson_route(n, x).unwrap(),
                    "r3 {n} {x}"
                );
            }
        }
        let lp = build_reduced_lp(
            &RLimitParams::new(ps.alpha.clone(), ps.delta.clone(), ps.q.clone(), nn).unwrap(),
        )
        .unwrap();
        let rep = lp.verify();
        let bad: Vec<_> = rep.failures().map(|r| (&r.identity, &r.detail)).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }
}

#[test]
fn ladders_converge() {
    for ps in points() {
        let rep = verify_limit_ladders(&ps, LADDER_PRECISION);
        for r in &rep.records {
            println!("{} {:?} {}", r.identity, r.detail, r.elapsed_ms);
        }
        assert!(rep.all_pass());
    }
}
