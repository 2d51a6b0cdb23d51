//! Fixtures shared by the benchmarks.

use mdlogic::format::{parse_md_file, Context};
use mdlogic::linsolve::LinearConstraint;
use mdlogic::zeroone::{ExperimentConfig, SizeMode};
use mdlogic::{MdSentence, Rational, Vocabulary};

pub fn sentences(src: &str) -> Vec<MdSentence> {
    parse_md_file(src, &Context::default()).expect("fixture parses").sentences()
}

/// `∀x P(x)` against `∃x P(x)` over three-valued Łukasiewicz at domain `m`.
pub fn forall_exists(m: usize) -> (Vec<MdSentence>, MdSentence) {
    let mut s = sentences(&format!(
        "algebra l3; domain {m}; pred P/1;
         md all {{ components: [forall x. P(x)]; set: explicit {{ (1) }} }}
         md some {{ components: [exists x. P(x)]; set: explicit {{ (1) }} }}"
    ));
    let goal = s.pop().unwrap();
    (s, goal)
}

/// A real-valued entailment that needs the solver: `A ≥ 1/2` does not give `A & A ≥ 1/2`.
pub fn strong_square() -> (Vec<MdSentence>, MdSentence) {
    let mut s = sentences(
        "algebra lukasiewicz; domain 1;
         md p { components: [A]; set: boxes { [1/2,1] } }
         md g { components: [A & A]; set: boxes { [1/2,1] } }",
    );
    let goal = s.pop().unwrap();
    (s, goal)
}

pub fn some_p(alg: &str) -> ExperimentConfig {
    let md = sentences(&format!(
        "algebra {alg}; domain 1; pred P/1; md some {{ components: [exists x. P(x)]; set: explicit {{ (1) }} }}"
    ))
    .remove(0);
    ExperimentConfig::new(md, Vocabulary::new().pred("P", 1), vec![(1, SizeMode::Exact)], 1000, 1)
        .expect("valid config")
}

/// A feasible chain `0 ≤ x0 < x1 < … < x(n-1) ≤ 1` with a sum bound.
pub fn chain_system(n: usize) -> Vec<LinearConstraint> {
    let r = |a: i64, b: i64| Rational::new(a.into(), b.into());
    let mut cs = vec![LinearConstraint::ge(vec![(0, r(1, 1))], r(0, 1))];
    for i in 1..n {
        cs.push(LinearConstraint::gt(vec![(i, r(1, 1)), (i - 1, r(-1, 1))], r(0, 1)));
    }
    cs.push(LinearConstraint::ge(vec![(n - 1, r(-1, 1))], r(-1, 1)));
    cs.push(LinearConstraint::ge((0..n).map(|i| (i, r(1, 1))).collect(), r(1, 2)));
    cs
}
