use proptest::prelude::*;

use extroot::isolate::isolate_integer_poly;
use extroot::sqrtsum::compare;
use extroot::{refine_root, solve, Dyadic, IntPolyUni, ReportDocument, SolveOptions, SqrtSumInstance, SystemSpec, Verdict};

fn product(roots: &[(i64, u32)]) -> IntPolyUni {
    let mut f = IntPolyUni::from_i64(&[1], "X");
    for &(r, m) in roots {
        for _ in 0..m {
            f = f.mul(&IntPolyUni::from_i64(&[-r, 1], "X"));
        }
    }
    f
}

fn flip(v: Verdict) -> Verdict {
    match v {
        Verdict::Less => Verdict::Greater,
        Verdict::Greater => Verdict::Less,
        Verdict::Equal => Verdict::Equal,
    }
}

const SYSTEMS: &[(&str, &[&str])] = &[
    ("Y^2 - X1", &["X1^2 - 2"]),
    ("(Y - X1)^2*(Y + 1)", &["X1^2 + 1"]),
    ("Y - X1*X2", &["X1^2 - 2", "X2^2 - 3"]),
    ("X1*Y^2 + Y - 1", &["X1^2 - X1"]),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integer_roots_with_multiplicity(
        roots in prop::collection::btree_map(-6i64..=6, 1u32..=3, 1..=4)
    ) {
        let roots: Vec<(i64, u32)> = roots.into_iter().collect();
        let got = isolate_integer_poly(&product(&roots)).unwrap();
        prop_assert_eq!(got.len(), roots.len());
        for (r, m) in &roots {
            let hits: Vec<_> = got
                .iter()
                .filter(|g| g.disc.contains_point(&Dyadic::from_int(*r), &Dyadic::zero()))
                .collect();
            prop_assert_eq!(hits.len(), 1);
            prop_assert_eq!(hits[0].multiplicity, *m);
        }
    }

    #[test]
    fn compare_is_antisymmetric(
        a in prop::collection::vec(0u64..2000, 1..=4),
        b in prop::collection::vec(0u64..2000, 1..=4),
    ) {
        let x = compare(&SqrtSumInstance::from_u64(&a, &b)).unwrap().verdict;
        let y = compare(&SqrtSumInstance::from_u64(&b, &a)).unwrap().verdict;
        prop_assert_eq!(x, flip(y));
        let z = compare(&SqrtSumInstance::from_u64(&a, &a)).unwrap().verdict;
        prop_assert_eq!(z, Verdict::Equal);
    }

    #[test]
    fn refinement_stays_in_doubled_disc(k in 2i64..500, bits in 20i64..300) {
        let f = IntPolyUni::from_i64(&[-k, 0, 1], "X");
        for r in isolate_integer_poly(&f).unwrap() {
            let fine = refine_root(&r, &f, &Dyadic::pow2(-bits)).unwrap();
            prop_assert!(*fine.disc.rad() <= Dyadic::pow2(-bits));
            let dre = fine.disc.re() - r.disc.re();
            let dim = fine.disc.im() - r.disc.im();
            let reach = fine.disc.rad() + &r.disc.rad().shl(1);
            prop_assert!(&(&dre * &dre) + &(&dim * &dim) <= &reach * &reach);
        }
    }

    #[test]
    fn report_json_round_trip(i in 0..SYSTEMS.len(), max in any::<bool>(), pretty in any::<bool>()) {
        let (f, axes) = SYSTEMS[i];
        let spec = SystemSpec::parse(f, axes).unwrap();
        let mode = if max { extroot::Mode::MaxPrecision } else { extroot::Mode::Adaptive };
        let report = solve(&spec, &SolveOptions { mode, ..Default::default() }).unwrap();
        let doc = ReportDocument::new(&spec, report);
        let back = ReportDocument::from_json(&doc.to_json(pretty)).unwrap();
        prop_assert_eq!(back.report, doc.report);
        prop_assert_eq!(back.system, doc.system);
    }
}
