use biamalg_core::biamalg::duplication_datum;
use biamalg_core::error::Error;
use biamalg_core::harness::{verify, HarnessOptions, Shape, TheoremId};
use biamalg_core::ideal::Ideal;
use biamalg_core::instances::{generate_instances, search_counterexample, InstanceGenConfig};
use biamalg_core::ring::FiniteRing;

fn corpus(seed: u64, count: usize, theorem: TheoremId) -> Vec<biamalg_core::instances::Instance> {
    let cfg = InstanceGenConfig {
        seed,
        count,
        ..InstanceGenConfig::default()
    }
    .for_theorem(theorem);
    generate_instances(&cfg).map(|i| i.unwrap()).collect()
}

#[test]
fn every_theorem_agrees_on_a_small_corpus() {
    let opts = HarnessOptions::default();
    for theorem in TheoremId::ALL {
        let mut sides = (0, 0);
        for inst in corpus(11, 40, theorem) {
            let v = verify(theorem, &inst.datum, &opts).unwrap();
            assert!(v.agree, "{theorem} on {}: {:?}", inst.spec, v);
            assert_eq!(v.agree, v.lhs == v.rhs);
            if v.lhs {
                sides.0 += 1;
            } else {
                sides.1 += 1;
                assert!(v.lhs_witness.is_some(), "{theorem}: false side without witness");
            }
        }
        assert!(sides.0 + sides.1 == 40, "{theorem}");
    }
}

#[test]
fn homological_forward_never_fails_and_converse_is_recorded() {
    let opts = HarnessOptions::default();
    for theorem in [TheoremId::HomologicalTransfer, TheoremId::SemihereditaryTransfer] {
        for inst in corpus(5, 60, theorem) {
            let v = verify(theorem, &inst.datum, &opts).unwrap();
            assert!(v.notes.iter().any(|n| n == "forward: ok"), "{:?}", v.notes);
            assert!(v.notes.iter().any(|n| n.starts_with("converse (I0 radical: ")), "{:?}", v.notes);
            assert!(v.notes.iter().all(|n| !n.contains("FAILS")));
        }
    }
}

#[test]
fn shapes_are_enforced() {
    let a = FiniteRing::zmod(12).unwrap();
    let d = duplication_datum(&a, &Ideal::principal(&a, 4)).unwrap();
    let opts = HarnessOptions::default();
    for theorem in TheoremId::ALL {
        assert!(verify(theorem, &d, &opts).is_ok(), "{theorem}");
    }
    let amalg_only = corpus(2, 30, TheoremId::ChainedTransfer)
        .into_iter()
        .find(|i| !i.datum.is_amalgamation())
        .expect("a proper bi-amalgamation in the corpus");
    for theorem in TheoremId::ALL {
        let r = verify(theorem, &amalg_only.datum, &opts);
        match theorem.shape() {
            Shape::General => assert!(r.is_ok()),
            _ => assert!(matches!(r, Err(Error::Unsupported(_))), "{theorem}"),
        }
    }
}

#[test]
fn ids_parse_back() {
    for theorem in TheoremId::ALL {
        assert_eq!(theorem.name().parse::<TheoremId>().unwrap(), theorem);
    }
    assert!("theorem-2.1".parse::<TheoremId>().is_err());
}

#[test]
fn mutant_is_caught_and_shrunk() {
    let opts = HarnessOptions {
        mutant: true,
        ..HarnessOptions::default()
    };
    let cfg = InstanceGenConfig {
        seed: 7,
        count: 200,
        ..InstanceGenConfig::default()
    };
    let ce = search_counterexample(TheoremId::ArithmeticalTransfer, &cfg, &opts)
        .unwrap()
        .expect("the mutant disagrees somewhere");
    assert!(!ce.verdict.agree && !ce.shrunk_verdict.agree);
    assert!(ce.examined <= 200);
    let weight = |s: &biamalg_core::instances::InstanceSpec| {
        let (b, c, r) = s.sizes();
        b + c + r
    };
    assert!(weight(&ce.shrunk) <= weight(&ce.original.spec));
    // the honest harness agrees on the shrunk datum
    let datum = ce.shrunk.build().unwrap();
    assert!(verify(TheoremId::ArithmeticalTransfer, &datum, &HarnessOptions::default()).unwrap().agree);
}
