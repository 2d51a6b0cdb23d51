use super::*;
use crate::algebra::{Algebra, TruthValue};
use crate::format::{parse_md_file, Context};
use crate::semantics::{enumerate_modal_models, enumerate_models, eval_sentence, satisfies, satisfies_modal};

fn mds(src: &str) -> Vec<MdSentence> {
    parse_md_file(src, &Context::default()).unwrap().sentences()
}

fn tv(n: i64, d: i64) -> TruthValue {
    TruthValue::ratio(n, d).unwrap()
}

/// Entailment by trying every model.
fn oracle(premises: &[MdSentence], goal: &MdSentence) -> bool {
    let alg = goal.algebra();
    let vocab = vocabulary_of(premises.iter().chain([goal]).flat_map(|m| m.formulas())).unwrap();
    match goal.layout().setting() {
        crate::infoset::Setting::FirstOrder { domain } => enumerate_models(alg, &vocab, *domain, 1 << 20)
            .unwrap()
            .all(|m| !premises.iter().all(|p| satisfies(alg, &m, p).unwrap()) || satisfies(alg, &m, goal).unwrap()),
        crate::infoset::Setting::Modal(frame) => {
            let props: Vec<String> = vocab.predicates().iter().map(|(n, _)| n.clone()).collect();
            enumerate_modal_models(alg, frame, &props, 1 << 20).unwrap().iter().all(|m| {
                !premises.iter().all(|p| satisfies_modal(alg, m, p).unwrap()) || satisfies_modal(alg, m, goal).unwrap()
            })
        }
    }
}

fn valid_and_checked(premises: &[MdSentence], goal: &MdSentence) -> Derivation {
    let lim = Limits::default();
    let v = match goal.layout().setting() {
        crate::infoset::Setting::FirstOrder { .. } => entail(premises, goal, &lim).unwrap(),
        crate::infoset::Setting::Modal(_) => entail_modal(premises, goal, &lim).unwrap(),
    };
    let Verdict::Valid(d) = v else { panic!("expected a derivation, got {v:?}") };
    check_proves(&d, premises, goal, &lim).unwrap();
    d
}

#[test]
fn forall_entails_exists_in_l3() {
    let s = mds("algebra l3; domain 2;
        md p { components: [forall x. P(x)]; set: explicit { (1) } }
        md g { components: [exists x. P(x)]; set: explicit { (1) } }");
    assert!(oracle(&s[..1], &s[1]));
    let d = valid_and_checked(&s[..1], &s[1]);
    assert!(matches!(d.steps.last().unwrap().by, Justification::Weaken { .. }));
    // The converse fails; the countermodel has max 1 and min below 1.
    let Verdict::Invalid(c) = entail(&s[1..], &s[0], &Limits::default()).unwrap() else { panic!() };
    let Structure::FirstOrder(m) = &c.structure else { panic!() };
    let alg = Algebra::lukasiewicz_n(3).unwrap();
    assert!(satisfies(&alg, m, &s[1]).unwrap());
    assert!(!satisfies(&alg, m, &s[0]).unwrap());
    assert_ne!(c.violated_at, vec![tv(1, 1)]);
}

#[test]
fn strong_square_countermodel() {
    let s = mds("algebra lukasiewicz; domain 1;
        md p { components: [A]; set: boxes { [1/2,1] } }
        md g { components: [A & A]; set: boxes { [1/2,1] } }");
    let Verdict::Invalid(c) = entail(&s[..1], &s[1], &Limits::default()).unwrap() else { panic!() };
    let Structure::FirstOrder(m) = &c.structure else { panic!() };
    assert_eq!(m.table("A").unwrap(), &[tv(1, 2)]);
    assert_eq!(c.violated_at, vec![tv(0, 1)]);
}

#[test]
fn real_valued_validities() {
    let g = mds("algebra godel; domain 1;
        md g { components: [A; B; A \\/ B];
               set: constrained { ext 3; base full; nodes [x2 = max(x0, x1)]; show [x0, x1, x2] } }");
    valid_and_checked(&[], &g[0]);
    let l = mds("algebra lukasiewicz; domain 1;
        md g { components: [A; ~A; A & ~A]; set: boxes { full x full x [0,0] } }");
    valid_and_checked(&[], &l[0]);
    // Not valid for the wrong coordinate.
    let bad = mds("algebra godel; domain 1;
        md g { components: [A; B; A \\/ B];
               set: constrained { ext 3; base full; nodes [x2 = min(x0, x1)]; show [x0, x1, x2] } }");
    assert!(!entail(&[], &bad[0], &Limits::default()).unwrap().is_valid());
}

#[test]
fn example_set_is_satisfiable() {
    let s = mds("algebra godel; domain 2; pred P/1, U/1;
        md ex { components: [P(x); forall x. U(x)]; set: boxes { full x full x [1/2,4/5) } }");
    let alg = Algebra::godel();
    let Some(Structure::FirstOrder(m)) = satisfy(&s[0], &Limits::default()).unwrap() else { panic!() };
    let r = eval_sentence(&alg, &m, s[0].components()[1].formula()).unwrap();
    assert!(r >= tv(1, 2) && r < tv(4, 5), "{r}");
    let none = mds("algebra godel; domain 1;
        md ex { components: [A; A /\\ A]; set: boxes { [0,1/2] x [3/4,1] } }");
    assert_eq!(satisfy(&none[0], &Limits::default()).unwrap(), None);
}

#[test]
fn empty_premises_and_axioms() {
    let s = mds("algebra l3; domain 2; md g { components: [P(x); exists x. P(x)]; set: full }");
    let d = valid_and_checked(&[], &s[0]);
    assert_eq!(d.steps[0].by, Justification::Axiom);
}

#[test]
fn modal_examples() {
    let refl = mds("algebra l3; frame 1 { (0,0) }; prop p;
        md p { components: [p]; set: explicit { (1) } }
        md g { components: [dia p]; set: explicit { (1) } }");
    assert!(oracle(&refl[..1], &refl[1]));
    valid_and_checked(&refl[..1], &refl[1]);

    let blind = mds("algebra l3; frame 2 { }; prop p; md g { components: [box p]; set: explicit { (1, 1) } }");
    assert!(oracle(&[], &blind[0]));
    valid_and_checked(&[], &blind[0]);

    let step = mds("algebra l3; frame 2 { (0,1) }; prop p;
        md p { components: [p]; set: explicit { (1, 1) } }
        md g { components: [box p]; set: explicit { (1, 0); (1, 1/2); (1, 1) } }");
    valid_and_checked(&step[..1], &step[1]);

    // Reflexivity matters: without it, p does not give dia p.
    let irr = mds("algebra l3; frame 1 { }; prop p;
        md p { components: [p]; set: explicit { (1) } }
        md g { components: [dia p]; set: explicit { (1) } }");
    assert!(!oracle(&irr[..1], &irr[1]));
    let Verdict::Invalid(c) = entail_modal(&irr[..1], &irr[1], &Limits::default()).unwrap() else { panic!() };
    assert_eq!(c.violated_at, vec![tv(0, 1)]);
}

#[test]
fn entail_matches_enumeration_on_small_cases() {
    let cases = [
        "algebra l3; domain 2;
         md p { components: [P(x) -> Q(x)]; set: explicit { (1, 1) } }
         md q { components: [P(x)]; set: explicit { (1, 1/2) } }
         md g { components: [Q(x)]; set: explicit { (1, 1/2); (1, 1) } }",
        "algebra g4; domain 2;
         md p { components: [exists x. P(x)]; set: explicit { (1) } }
         md g { components: [forall x. P(x)]; set: explicit { (1/3); (2/3); (1) } }",
        "algebra classical; domain 2;
         md p { components: [forall x. exists y. R(x, y)]; set: explicit { (1) } }
         md g { components: [exists y. forall x. R(x, y)]; set: explicit { (1) } }",
        "algebra l3; domain 1;
         md p { components: [A; B]; set: explicit { (1/2, 1/2) } }
         md g { components: [A & B]; set: explicit { (0) } }",
        "algebra g4; domain 1;
         md p { components: [A -> B; A]; set: explicit { (1, 2/3) } }
         md g { components: [B]; set: explicit { (2/3); (1) } }",
    ];
    for src in cases {
        let s = mds(src);
        let (goal, premises) = s.split_last().unwrap();
        let expect = oracle(premises, goal);
        let v = entail(premises, goal, &Limits::default()).unwrap();
        assert_eq!(v.is_valid(), expect, "{src}");
        if let Verdict::Valid(d) = v {
            check_proves(&d, premises, goal, &Limits::default()).unwrap();
        }
    }
}

#[test]
fn rule_examples() {
    let lim = Limits::default();
    let s = mds("algebra l3; domain 1; md a { components: [A; B]; set: explicit { (0, 1) } }");
    let swapped = permute(&s[0], &[1, 0]).unwrap();
    assert_eq!(swapped.to_string(), "<B; A : explicit { (1, 0) }>");

    let r = mds("algebra lukasiewicz; domain 1;
        md a { components: [A]; set: boxes { [0,1/2] } }
        md b { components: [A]; set: boxes { [1/4,1] } }
        md c { components: [A]; set: boxes { [1/4,1/2] } }");
    assert!(intersect(&r[0], &r[1], &lim).unwrap().set().set_eq(r[2].set(), &lim).unwrap());

    let g = mds("algebra l3; domain 1; md a { components: [A; B; A \\/ B]; set: full }");
    let filtered = good(&g[0], &lim).unwrap();
    assert_eq!(filtered.set().to_explicit(&lim).unwrap().len(), 9);
}

#[test]
fn checker_reports_failing_step() {
    let lim = Limits::default();
    let s = mds("algebra l3; domain 1;
        md p { components: [A; B]; set: explicit { (1, 0); (1, 1/2) } }
        md q { components: [A]; set: explicit { (1) } }
        md w { components: [A]; set: explicit { (1/2); (1) } }
        md x { components: [B]; set: explicit { (0) } }");
    let mut d = Derivation::new();
    d.push(s[0].clone(), Justification::Premise(0));
    d.push(s[1].clone(), Justification::Project { from: 0, drop: 1 });
    d.push(s[2].clone(), Justification::Weaken { from: 1 });
    check_proves(&d, &s[..1], &s[2], &lim).unwrap();

    let mut bad = d.clone();
    bad.push(s[3].clone(), Justification::Intersect { left: 1, right: 2 });
    assert_eq!(check(&bad, &s[..1], &lim).unwrap_err().to_string(), "step 4: component mismatch");
    bad.steps[3] = Step { md: s[0].clone(), by: Justification::Intersect { left: 0, right: 1 } };
    assert_eq!(check(&bad, &s[..1], &lim).unwrap_err().to_string(), "step 4: component mismatch");

    let mut narrow = d.clone();
    narrow.steps[2].md = mds("algebra l3; domain 1; md w { components: [A]; set: explicit { (1/2) } }").remove(0);
    let err = check(&narrow, &s[..1], &lim).unwrap_err();
    assert_eq!(err.step, 2);
    assert!(err.reason.contains("misses (1)"), "{err}");

    let mut wrong = d;
    wrong.steps[1].md = s[2].clone();
    assert_eq!(check(&wrong, &s[..1], &lim).unwrap_err().step, 1);
}

#[test]
fn sweep_examples() {
    let lim = Limits::default();
    let two =
        mds("algebra classical; domain 1; md g { components: [exists x. exists y. ~(x = y)]; set: explicit { (1) } }");
    let r = sweep(&[], &two[0], 4, &lim).unwrap();
    assert_eq!(r.countermodel.as_ref().map(|(m, _)| *m), Some(1));
    assert_eq!(r.checked, vec![1]);

    let s = mds("algebra classical; domain 1;
        md p { components: [forall x. P(x)]; set: explicit { (1) } }
        md g { components: [exists x. P(x)]; set: explicit { (1) } }");
    let r = sweep(&s[..1], &s[1], 4, &lim).unwrap();
    assert_eq!(r.countermodel, None);
    assert_eq!(r.checked, vec![1, 2, 3, 4]);

    let l = mds("algebra l3; domain 1; md g { components: [exists x. P(x)]; set: explicit { (0) } }");
    let r = sweep(&[], &l[0], 3, &lim).unwrap();
    assert_eq!(r.countermodel.as_ref().map(|(m, _)| *m), Some(1));

    let open = mds("algebra l3; domain 1; md g { components: [P(x)]; set: full }");
    assert!(sweep(&[], &open[0], 2, &lim).is_err());
}
