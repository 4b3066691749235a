//! Acceptance gate. Prints one PASS/FAIL line per criterion, with indented
//! detail lines underneath, and exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use biamalg_core::biamalg::{canonical_isos, claim1_check, construct, duplication, image_ring, BiAmalgDatum};
use biamalg_core::error::Error;
use biamalg_core::harness::{verify, HarnessOptions, TheoremId};
use biamalg_core::ideal::{maximal_ideals, Ideal};
use biamalg_core::instances::{generate_instances, search_counterexample, Family, Instance, InstanceGenConfig, InstanceSpec};
use biamalg_core::localization::{localize, localize_at_prime, localize_ideal, saturate};
use biamalg_core::properties::{
    is_arithmetical, is_arithmetical_by_localization, is_arithmetical_by_principal_extensions, is_reduced,
    is_semihereditary_finite, is_von_neumann_regular, wdim_le_1,
};
use biamalg_core::ring::{Caps, FiniteRing, Value};
use common::*;

const CORPUS_SEED: u64 = 2;
const CORPUS_SIZE: usize = 200;
const MAX_COMPONENT: u64 = 64;
const MAX_RING: u64 = 512;
const TIME_BUDGET: Duration = Duration::from_secs(300);
const MIN_LOCAL_PAIRS: usize = 100;
const FRACTION_ORACLE_MAX: usize = 32;
const MAXIMAL_ORACLE_MAX: usize = 64;
const ARITH_CORPUS_MAX: usize = 200;
const MUTANT_BUDGET: usize = 200;

type Outcome = Result<Vec<String>, Vec<String>>;
type Criterion = (&'static str, fn() -> Outcome);

fn corpus_config(theorem: TheoremId) -> InstanceGenConfig {
    InstanceGenConfig {
        seed: CORPUS_SEED,
        count: CORPUS_SIZE,
        max_component: MAX_COMPONENT,
        max_ring: MAX_RING,
        ..InstanceGenConfig::default()
    }
    .for_theorem(theorem)
}

fn corpus(theorem: TheoremId) -> Vec<Instance> {
    generate_instances(&corpus_config(theorem)).map(|i| i.unwrap()).collect()
}

fn family_counts(insts: &[Instance]) -> String {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for i in insts {
        *counts.entry(format!("{:?}", i.spec.family())).or_default() += 1;
    }
    counts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn verdict_ok(ok: bool, details: Vec<String>) -> Outcome {
    if ok {
        Ok(details)
    } else {
        Err(details)
    }
}

fn arithmetical_agreement() -> Outcome {
    let start = Instant::now();
    let insts = corpus(TheoremId::ArithmeticalTransfer);
    let opts = HarnessOptions::default();
    let mut mismatches = Vec::new();
    let mut lhs_true = 0;
    for inst in &insts {
        let v = verify(TheoremId::ArithmeticalTransfer, &inst.datum, &opts).map_err(|e| vec![e.to_string()])?;
        lhs_true += v.lhs as usize;
        if !v.agree {
            mismatches.push(format!("{} ({})", inst.spec, v.witness_summary()));
        }
    }
    let elapsed = start.elapsed();
    let families: Vec<Family> = insts.iter().map(|i| i.spec.family()).collect();
    let all_families = Family::ALL.iter().all(|f| families.contains(f));
    let mut details = vec![
        format!("{} instances: {}", insts.len(), family_counts(&insts)),
        format!("{lhs_true} arithmetical, {} not", insts.len() - lhs_true),
        format!("{} mismatches, {:.1}s (budget {}s)", mismatches.len(), elapsed.as_secs_f64(), TIME_BUDGET.as_secs()),
    ];
    details.extend(mismatches.iter().take(5).cloned());
    verdict_ok(
        insts.len() >= CORPUS_SIZE && all_families && mismatches.is_empty() && elapsed <= TIME_BUDGET,
        details,
    )
}

fn chained_agreement() -> Outcome {
    let opts = HarnessOptions::default();
    let insts: Vec<Instance> = corpus(TheoremId::ChainedTransfer)
        .into_iter()
        .filter(|i| i.datum.a.is_local() || i.spec.family() == Family::TrivialExtension)
        .collect();
    let mut mismatches = Vec::new();
    let mut remark_mismatches = 0;
    let mut lhs_true = 0;
    for inst in &insts {
        let v = verify(TheoremId::ChainedTransfer, &inst.datum, &opts).map_err(|e| vec![e.to_string()])?;
        lhs_true += v.lhs as usize;
        if v.lhs != v.rhs {
            mismatches.push(format!("{}", inst.spec));
        }
        if !v.notes.contains(&format!("one-sided form: {}", v.lhs)) {
            remark_mismatches += 1;
        }
    }
    let details = vec![
        format!("{} local or trivial-extension instances: {}", insts.len(), family_counts(&insts)),
        format!("{lhs_true} chained, {} not", insts.len() - lhs_true),
        format!("{} mismatches, {remark_mismatches} one-sided-form mismatches", mismatches.len()),
    ];
    verdict_ok(!insts.is_empty() && lhs_true > 0 && mismatches.is_empty() && remark_mismatches == 0, details)
}

fn check(details: &mut Vec<String>, ok: &mut bool, label: &str, value: bool) {
    details.push(format!("{} {label}", if value { "ok  " } else { "FAIL" }));
    *ok &= value;
}

/// The duplication of Z/12 along (4).
fn example_duplication() -> Outcome {
    let caps = Caps::default();
    let opts = HarnessOptions::default();
    let a = FiniteRing::zmod(12).unwrap();
    let i = Ideal::principal(&a, 4);
    let m2 = Ideal::principal(&a, 2);
    let m3 = Ideal::principal(&a, 3);
    let mut d = Vec::new();
    let mut ok = true;

    let max = maximal_ideals(&a, None).unwrap().maximals;
    check(&mut d, &mut ok, "Max(A) = {(2), (3)}", max.len() == 2 && max.contains(&m2) && max.contains(&m3));
    let over = maximal_ideals(&a, Some(&i)).unwrap().maximals;
    check(&mut d, &mut ok, "Max(A, I) = {(2)}", over == vec![m2.clone()]);
    let i2 = localize_ideal(&i, &localize_at_prime(&m2).unwrap()).unwrap();
    check(&mut d, &mut ok, "I localized at (2) is 0", i2.is_zero());

    let bi = duplication(&a, &i, &caps).unwrap();
    check(&mut d, &mut ok, "A ⋈ I has 36 elements", bi.size() == 36);
    let r = &bi.ring;
    check(&mut d, &mut ok, "A ⋈ I is arithmetical", is_arithmetical(r, &caps).unwrap().holds);
    let reduced = is_reduced(r);
    check(&mut d, &mut ok, &format!("A ⋈ I is reduced ({})", witness_of(&reduced)), reduced.holds);
    check(&mut d, &mut ok, "A ⋈ I has wdim <= 1", wdim_le_1(r, &caps).unwrap().holds);
    check(&mut d, &mut ok, "A ⋈ I is semihereditary", is_semihereditary_finite(r, &caps).unwrap().holds);

    for theorem in [
        TheoremId::DuplicationArithmetical,
        TheoremId::DuplicationWdim,
        TheoremId::DuplicationSemihereditary,
    ] {
        let v = verify(theorem, &bi.datum, &opts).unwrap();
        let label = format!("{theorem} criterion holds (lhs {}, rhs {}, agree {})", v.lhs, v.rhs, v.agree);
        check(&mut d, &mut ok, &label, v.rhs && v.agree);
    }

    let i3 = localize_ideal(&i, &localize_at_prime(&m3).unwrap()).unwrap();
    d.push(format!(
        "note: I localized at (3) has {} elements ({}); (3) does not contain I",
        i3.len(),
        if i3.is_zero() { "zero" } else { "nonzero" }
    ));

    let a6 = FiniteRing::zmod(6).unwrap();
    let i6 = Ideal::principal(&a6, 2);
    let dup6 = duplication(&a6, &i6, &caps).unwrap();
    let r6 = &dup6.ring;
    d.push(format!(
        "note: with A = Z/6, I = (2): {} elements, arithmetical {}, reduced {}, wdim<=1 {}, semihereditary {}",
        r6.size(),
        is_arithmetical(r6, &caps).unwrap().holds,
        is_reduced(r6).holds,
        wdim_le_1(r6, &caps).unwrap().holds,
        is_semihereditary_finite(r6, &caps).unwrap().holds
    ));
    verdict_ok(ok, d)
}

fn witness_of(r: &biamalg_core::properties::PropertyReport) -> String {
    r.witness.as_ref().map_or("no witness".into(), |w| w.to_string())
}

fn encoded_set(r: &FiniteRing, members: impl Iterator<Item = u32>) -> Vec<Value> {
    let mut v: Vec<Value> = members.map(|x| r.encode(x)).collect();
    v.sort();
    v
}

fn all_pairs(x: &FiniteRing, y: &FiniteRing) -> Vec<Value> {
    let mut v = Vec::new();
    for a in x.elements() {
        for b in y.elements() {
            v.push(Value::pair(x.encode(a), y.encode(b)));
        }
    }
    v.sort();
    v
}

/// The product-graph bi-amalgamation over Z/12, I = (4), D = Z/2.
fn example_product_graph() -> Outcome {
    let caps = Caps::default();
    let opts = HarnessOptions::default();
    let spec = InstanceSpec::ProductGraph { n: 12, i: 4, d: 2 };
    let datum: BiAmalgDatum = spec.build().unwrap();
    let bi = construct(&datum, &caps).unwrap();
    let r = &bi.ring;
    let mut d = vec![format!("{spec}")];
    let mut ok = true;
    check(&mut d, &mut ok, &format!("R has 216 elements (got {})", r.size()), r.size() == 216);
    let reduced = is_reduced(r);
    check(&mut d, &mut ok, &format!("R is reduced ({})", witness_of(&reduced)), reduced.holds);
    check(&mut d, &mut ok, "R is arithmetical", is_arithmetical(r, &caps).unwrap().holds);
    check(&mut d, &mut ok, "R has wdim <= 1", wdim_le_1(r, &caps).unwrap().holds);
    check(&mut d, &mut ok, "R is semihereditary", is_semihereditary_finite(r, &caps).unwrap().holds);

    let v = verify(TheoremId::SemihereditaryTransfer, &datum, &opts).unwrap();
    check(
        &mut d,
        &mut ok,
        &format!("semihereditary-transfer hypotheses hold (rhs {}, agree {})", v.rhs, v.agree),
        v.rhs,
    );
    if let Some(w) = &v.rhs_witness {
        d.push(format!("note: {w}"));
    }

    let a = &datum.a;
    let first = image_ring(&datum.f, &datum.j).unwrap();
    let first_set = encoded_set(&datum.b, first.inclusion.image_set().ones().map(|x| x as u32));
    check(
        &mut d,
        &mut ok,
        &format!("f(A)+J = A x A ({} of {} pairs)", first_set.len(), a.size() * a.size()),
        first_set == all_pairs(a, a),
    );
    let second = image_ring(&datum.g, &datum.j2).unwrap();
    let second_set = encoded_set(&datum.c, second.inclusion.image_set().ones().map(|x| x as u32));
    let dd = FiniteRing::zmod(2).unwrap();
    check(&mut d, &mut ok, "g(A)+J' = A x D", second_set == all_pairs(a, &dd));
    verdict_ok(ok, d)
}

fn local_pairs() -> Outcome {
    let caps = Caps::default();
    let mut pairs = 0;
    let mut failures = Vec::new();
    let mut data = 0;
    for theorem in [TheoremId::ArithmeticalTransfer] {
        for inst in corpus(theorem) {
            let bi = construct(&inst.datum, &caps).map_err(|e| vec![e.to_string()])?;
            data += 1;
            for p in maximal_ideals(&inst.datum.a, Some(&inst.datum.i0)).unwrap().maximals {
                pairs += 1;
                let c1 = claim1_check(&inst.datum, &p).map_err(|e| vec![e.to_string()])?;
                if !(c1.equal && c1.complement_matches) {
                    failures.push(format!("claim fails on {} at {p}: {:?}", inst.spec, c1.witness));
                }
                let isos = canonical_isos(&bi, Some(&p), &caps).map_err(|e| vec![e.to_string()])?;
                if !isos.all_hold() {
                    failures.push(format!("isomorphism fails on {} at {p}: {isos:?}", inst.spec));
                }
            }
        }
    }
    let mut d = vec![format!("{pairs} (datum, p) pairs over {data} data, {} failures", failures.len())];
    d.extend(failures.iter().take(5).cloned());
    verdict_ok(pairs >= MIN_LOCAL_PAIRS && failures.is_empty(), d)
}

fn oracle_equivalences() -> Outcome {
    let caps = Caps::default();
    let mut d = Vec::new();
    let mut ok = true;

    // two routes to arithmetical
    let mut rings: Vec<(String, FiniteRing)> = (2..=64).map(|n| (format!("Z({n})"), FiniteRing::zmod(n).unwrap())).collect();
    for inst in corpus(TheoremId::ArithmeticalTransfer) {
        let bi = construct(&inst.datum, &caps).unwrap();
        for (tag, r) in [
            ("R", bi.ring.clone()),
            ("f(A)+J", image_ring(&inst.datum.f, &inst.datum.j).unwrap().ring),
            ("g(A)+J'", image_ring(&inst.datum.g, &inst.datum.j2).unwrap().ring),
        ] {
            if r.size() <= ARITH_CORPUS_MAX {
                rings.push((format!("{tag} of {}", inst.spec), r));
            }
        }
    }
    let (mut compared, mut skipped, mut disagreements) = (0, 0, 0);
    for (name, r) in &rings {
        let by_loc = is_arithmetical_by_localization(r, &caps).unwrap().holds;
        match is_arithmetical_by_principal_extensions(r, &caps) {
            Ok(rep) => {
                compared += 1;
                if rep.holds != by_loc {
                    disagreements += 1;
                    d.push(format!("arithmetical routes disagree on {name}"));
                }
            }
            Err(Error::LatticeTooLarge { .. }) => skipped += 1,
            Err(e) => return Err(vec![e.to_string()]),
        }
    }
    d.push(format!(
        "arithmetical: {compared} rings compared, {skipped} above the lattice cap, {disagreements} disagreements"
    ));
    ok &= disagreements == 0 && compared > 0;

    // quotient localization against fractions
    let (mut sets, mut failures) = (0, 0);
    for (name, r) in small_rings(FRACTION_ORACLE_MAX) {
        let mut monoids = std::collections::BTreeSet::new();
        for x in r.elements() {
            for y in r.elements().filter(|&y| y >= x) {
                monoids.insert(monoid(&r, &[x, y]));
            }
        }
        for s in monoids {
            let ms = saturate(&r, &s).unwrap();
            match localize(&r, &ms) {
                Ok(loc) => {
                    sets += 1;
                    if let Err(e) = fraction_oracle(&r, &s, &loc) {
                        failures += 1;
                        d.push(format!("fractions disagree on {name}: {e}"));
                    }
                }
                Err(Error::DegenerateLocalization) if s.contains(&r.zero()) => {}
                Err(e) => {
                    failures += 1;
                    d.push(format!("{name}: {e}"));
                }
            }
        }
    }
    d.push(format!("localization: {sets} (ring, multiplicative set) pairs, {failures} disagreements"));
    ok &= failures == 0;

    // maximal ideals through idempotents against the lattice
    let mut small: Vec<(String, FiniteRing)> = small_rings(MAXIMAL_ORACLE_MAX);
    for inst in corpus(TheoremId::ArithmeticalTransfer) {
        let bi = construct(&inst.datum, &caps).unwrap();
        if bi.size() <= MAXIMAL_ORACLE_MAX {
            small.push((inst.spec.to_string(), bi.ring));
        }
    }
    let mut bad = 0;
    for (name, r) in &small {
        let expected = lattice_maximals(r, &subgroup_filter_ideals(r));
        let mut got: Vec<Mask> = maximal_ideals(r, None).unwrap().maximals.iter().map(mask_of).collect();
        got.sort_unstable();
        if got != expected {
            bad += 1;
            d.push(format!("maximal ideals disagree on {name}"));
        }
    }
    d.push(format!("maximal ideals: {} rings, {bad} disagreements", small.len()));
    ok &= bad == 0;
    verdict_ok(ok, d)
}

fn degeneracy() -> Outcome {
    let caps = Caps::default();
    let opts = HarnessOptions::default();
    let mut d = Vec::new();
    let mut ok = true;

    let mut rings = small_rings(64);
    let insts = corpus(TheoremId::HomologicalTransfer);
    for inst in &insts {
        let bi = construct(&inst.datum, &caps).unwrap();
        rings.push((inst.spec.to_string(), bi.ring));
    }
    let mut collapse_failures = 0;
    let mut regular = 0;
    for (name, r) in &rings {
        let wdim = wdim_le_1(r, &caps).unwrap().holds;
        let vnr = is_von_neumann_regular(r).holds;
        let brute = brute_von_neumann_regular(r);
        regular += brute as usize;
        if wdim != vnr || vnr != brute {
            collapse_failures += 1;
            d.push(format!("wdim<=1 and regularity differ on {name}"));
        }
    }
    d.push(format!(
        "wdim<=1 iff von Neumann regular on {} finite rings ({regular} regular), {collapse_failures} exceptions",
        rings.len()
    ));
    ok &= collapse_failures == 0;

    let (mut converse_used, mut non_radical, mut converse_fail) = (0, 0, 0);
    for theorem in [TheoremId::HomologicalTransfer, TheoremId::SemihereditaryTransfer] {
        for inst in &insts {
            let v = verify(theorem, &inst.datum, &opts).unwrap();
            if v.lhs {
                converse_used += 1;
            }
            if v.notes.iter().any(|n| n.starts_with("converse (I0 radical: false)")) {
                non_radical += 1;
            }
            if v.notes.iter().any(|n| n.ends_with(": fails") || n.contains("FAILS")) {
                converse_fail += 1;
                d.push(format!("{theorem} on {}: {:?}", inst.spec, v.notes));
            }
        }
    }
    d.push(format!(
        "weak-dimension converse: exercised {converse_used} times, {non_radical} with non-radical I0, {converse_fail} finite counterexamples"
    ));
    d.push("out of scope: the infinite counterexample to the converse (Z -> Z/4Z with J = 0) has no finite analog".into());
    ok &= converse_fail == 0 && non_radical > 0;
    verdict_ok(ok, d)
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_biamalg")
}

fn data_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn mutation() -> Outcome {
    let opts = HarnessOptions {
        mutant: true,
        ..HarnessOptions::default()
    };
    let cfg = InstanceGenConfig {
        seed: 7,
        count: MUTANT_BUDGET,
        ..InstanceGenConfig::default()
    };
    let ce = search_counterexample(TheoremId::ArithmeticalTransfer, &cfg, &opts)
        .map_err(|e| vec![e.to_string()])?
        .ok_or_else(|| vec![format!("no disagreement within {MUTANT_BUDGET} instances")])?;
    let mut d = vec![
        format!("disagreement after {} instances on {}", ce.examined, ce.original.spec),
        format!("shrunk to {}: {}", ce.shrunk, ce.shrunk_verdict.witness_summary()),
    ];
    let out = Command::new(bin())
        .args(["fuzz", "--seed", "7", "--count", "200", "--theorem", "arithmetical-transfer", "--mutant"])
        .env_remove("BIAMALG_MAX_RING_SIZE")
        .env_remove("BIAMALG_MAX_IDEAL_ENUM")
        .output()
        .unwrap();
    d.push(format!("cli exit code {:?}", out.status.code()));
    verdict_ok(ce.examined <= MUTANT_BUDGET && !ce.shrunk_verdict.agree && out.status.code() == Some(2), d)
}

fn cli_scenarios() -> Outcome {
    let scenarios: [(&[&str], i32, &str); 3] = [
        (&["verify", "arithmetical-transfer", "example34.script", "dupAI"], 0, "verify_example34.txt"),
        (&["check", "chained", "example.script", "R"], 1, "check_example.txt"),
        (&["fuzz", "--seed", "7", "--count", "100", "--theorem", "chained-transfer"], 0, "fuzz_seed7_chained.txt"),
    ];
    let mut d = Vec::new();
    let mut ok = true;
    for (args, code, golden) in scenarios {
        let out = Command::new(bin())
            .args(args)
            .current_dir(data_dir())
            .env_remove("BIAMALG_MAX_RING_SIZE")
            .env_remove("BIAMALG_MAX_IDEAL_ENUM")
            .output()
            .unwrap();
        let expected = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(golden));
        let stdout = String::from_utf8_lossy(&out.stdout);
        let same = expected.as_deref().ok() == Some(stdout.as_ref());
        let good = out.status.code() == Some(code) && same;
        ok &= good;
        d.push(format!(
            "{} biamalg {} -> exit {:?} (want {code}), golden {golden} {}",
            if good { "ok  " } else { "FAIL" },
            args.join(" "),
            out.status.code(),
            if same { "matches" } else { "differs" }
        ));
    }
    verdict_ok(ok, d)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("arithmetical transfer agrees on the generated corpus", arithmetical_agreement),
        ("chained transfer agrees on local and trivial-extension data", chained_agreement),
        ("duplication of Z/12 along (4) anchor", example_duplication),
        ("product-graph bi-amalgamation over Z/12 anchor", example_product_graph),
        ("localized contraction and canonical isomorphisms", local_pairs),
        ("oracle equivalences", oracle_equivalences),
        ("finite-scale degeneracy", degeneracy),
        ("mutation test", mutation),
        ("command-line scenarios", cli_scenarios),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(vec![format!("panicked: {msg}")])
        });
        let (tag, details) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} criterion {}: {title} ({:.1}s)", k + 1, start.elapsed().as_secs_f64());
        for line in details {
            println!("    {line}");
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
