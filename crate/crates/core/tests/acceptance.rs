//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every instance generator is seeded, so runs are reproducible.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use mdlogic::calculus::{self, realize, vocabulary_of, Countermodel, Step, Structure};
use mdlogic::format::{parse_md_file, Context};
use mdlogic::infoset::{Interval, IntervalUnion, Region};
use mdlogic::semantics::{enumerate_models, eval_sentence, model_count, satisfies, tuple_of};
use mdlogic::syntax::{parse_formula_open, subformula_closure};
use mdlogic::translate::{sigma, star_model, translate};
use mdlogic::zeroone::{self, ExperimentConfig, Row, SizeMode};
use mdlogic::{
    check, check_proves, entail, sweep, Algebra, BoxUnion, Component, CoordLayout, Derivation, Explicit, Formula,
    InfoSet, Justification, Limits, MdSentence, Mode, Model, Rational, TruthValue, Var, Verdict, Vocabulary,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn lim() -> Limits {
    Limits::default()
}

fn tv(n: i64, d: i64) -> TruthValue {
    TruthValue::ratio(n, d).unwrap()
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn mds(src: &str) -> Vec<MdSentence> {
    parse_md_file(src, &Context::default()).unwrap().sentences()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// Random instances

struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    fn coin(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len())]
    }

    /// One or two predicates of arity at most 2, redrawn until the number
    /// of models stays under `cap` so the brute-force side is cheap.
    fn vocabulary(&mut self, carrier: usize, m: usize, cap: u128) -> Vocabulary {
        loop {
            let mut v = Vocabulary::new();
            for name in ["P", "Q"].iter().take(1 + self.below(2)) {
                v.add(*name, self.below(3)).unwrap();
            }
            if model_count(carrier, &v, m).is_some_and(|c| c <= cap) {
                return v;
            }
        }
    }

    fn formula(&mut self, vocab: &Vocabulary, vals: &[TruthValue], depth: usize, eq: bool) -> Formula {
        const VARS: [&str; 2] = ["x", "y"];
        if depth == 0 || self.coin(0.3) {
            let r = self.below(12);
            if eq && r == 0 {
                return Formula::Eq(Var::new("x"), Var::new("y"));
            }
            if r == 1 {
                return Formula::constant(self.pick(vals).clone());
            }
            let (p, a) = self.pick(vocab.predicates()).clone();
            let args: Vec<&str> = (0..a).map(|_| *self.pick(&VARS)).collect();
            return Formula::atom(&p, &args);
        }
        let d = depth - 1;
        match self.below(7) {
            0 => Formula::meet(self.formula(vocab, vals, d, eq), self.formula(vocab, vals, d, eq)),
            1 => Formula::join(self.formula(vocab, vals, d, eq), self.formula(vocab, vals, d, eq)),
            2 => Formula::strong(self.formula(vocab, vals, d, eq), self.formula(vocab, vals, d, eq)),
            3 => Formula::implies(self.formula(vocab, vals, d, eq), self.formula(vocab, vals, d, eq)),
            4 => Formula::not(self.formula(vocab, vals, d, eq)),
            5 => {
                let v = *self.pick(&VARS);
                Formula::forall(v, self.formula(vocab, vals, d, eq))
            }
            _ => {
                let v = *self.pick(&VARS);
                Formula::exists(v, self.formula(vocab, vals, d, eq))
            }
        }
    }

    /// `k` pairwise distinct components, none repeating `avoid`.
    fn components(
        &mut self,
        vocab: &Vocabulary,
        vals: &[TruthValue],
        k: usize,
        depth: usize,
        eq: bool,
        avoid: &[Component],
    ) -> Vec<Component> {
        let mut out: Vec<Component> = Vec::new();
        while out.len() < k {
            let c = Component::new(self.formula(vocab, vals, depth, eq));
            if !out.contains(&c) && !avoid.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    fn model(&mut self, alg: &Algebra, vocab: &Vocabulary, m: usize) -> Model {
        zeroone::random_model(alg, vocab, m, &mut self.rng).unwrap()
    }

    /// Tuples realized by a few random models plus a few arbitrary points.
    fn points(
        &mut self,
        alg: &Algebra,
        vocab: &Vocabulary,
        m: usize,
        comps: &[Component],
        vals: &[TruthValue],
    ) -> Vec<Vec<TruthValue>> {
        let dim = CoordLayout::first_order(m, comps).unwrap().dim();
        let mut pts = Vec::new();
        for _ in 0..self.below(5) {
            let model = self.model(alg, vocab, m);
            pts.push(tuple_of(alg, &model, comps).unwrap());
        }
        for _ in 0..self.below(3) {
            pts.push((0..dim).map(|_| self.pick(vals).clone()).collect());
        }
        pts
    }

    fn md(
        &mut self,
        alg: &Algebra,
        vocab: &Vocabulary,
        m: usize,
        comps: Vec<Component>,
        vals: &[TruthValue],
    ) -> MdSentence {
        let pts = self.points(alg, vocab, m, &comps, vals);
        explicit_md(alg, m, comps, pts)
    }
}

fn explicit_md(alg: &Algebra, m: usize, comps: Vec<Component>, pts: Vec<Vec<TruthValue>>) -> MdSentence {
    let layout = CoordLayout::first_order(m, &comps).unwrap();
    let set = InfoSet::explicit(layout.clone(), *alg, Explicit::new(layout.dim(), pts).unwrap()).unwrap();
    MdSentence::new(comps, set).unwrap()
}

fn with_set(md: &MdSentence, set: InfoSet) -> MdSentence {
    MdSentence::new(md.components().to_vec(), set).unwrap()
}

fn all_models(alg: &Algebra, mds: &[&MdSentence], m: usize) -> Vec<Model> {
    let vocab = vocabulary_of(mds.iter().flat_map(|s| s.formulas())).unwrap();
    enumerate_models(alg, &vocab, m, 1 << 22).unwrap().collect()
}

fn sat(alg: &Algebra, model: &Model, md: &MdSentence) -> bool {
    satisfies(alg, model, md).unwrap()
}

fn domain_of(md: &MdSentence) -> usize {
    md.layout().domain()
}

// ---------------------------------------------------------------------------
// C1

struct Proved {
    premises: Vec<MdSentence>,
    goal: MdSentence,
    derivation: Derivation,
}

fn c1(proved: &mut Vec<Proved>) -> Outcome {
    let algs = [Algebra::lukasiewicz_n(3).unwrap(), Algebra::godel_n(4).unwrap(), Algebra::classical()];
    let mut g = Gen::new(0xC1);
    let (mut valid, mut invalid, mut largest) = (0, 0, 0);
    let start = Instant::now();
    for i in 0..300 {
        let alg = &algs[i % 3];
        let vals = alg.enumerate_carrier().unwrap();
        let m = 1 + g.below(3);
        let vocab = g.vocabulary(vals.len(), m, 20_000);
        let eq = g.coin(0.3);
        let goal_len = 1 + g.below(2);
        let goal_comps = g.components(&vocab, &vals, goal_len, 3, eq, &[]);
        let mut premises = Vec::new();
        for _ in 0..g.below(3) {
            let k = 1 + g.below(3);
            let comps = g.components(&vocab, &vals, k, 3, eq, &[]);
            premises.push(g.md(alg, &vocab, m, comps, &vals));
        }
        let goal = g.md(alg, &vocab, m, goal_comps, &vals);

        let refs: Vec<&MdSentence> = premises.iter().chain([&goal]).collect();
        let models = all_models(alg, &refs, m);
        largest = largest.max(models.len());
        let oracle = models.iter().all(|x| !premises.iter().all(|p| sat(alg, x, p)) || sat(alg, x, &goal));
        let verdict = entail(&premises, &goal, &lim()).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(verdict.is_valid() == oracle, || {
            format!("instance {i}: entail says {} but enumeration says {oracle}; goal {goal}", verdict.is_valid())
        })?;
        match verdict {
            Verdict::Valid(d) => {
                valid += 1;
                proved.push(Proved { premises, goal, derivation: d });
            }
            Verdict::Invalid(Countermodel { structure: Structure::FirstOrder(cm), .. }) => {
                invalid += 1;
                ensure(premises.iter().all(|p| sat(alg, &cm, p)) && !sat(alg, &cm, &goal), || {
                    format!("instance {i}: countermodel does not separate premises from goal")
                })?;
            }
            Verdict::Invalid(_) => return Err(format!("instance {i}: modal countermodel for a first-order goal")),
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(300), || format!("took {t:.1?}"))?;
    Ok(format!(
        "300/300 verdicts agree with enumeration ({valid} valid, {invalid} invalid, up to {largest} models) in {t:.1?}"
    ))
}

// ---------------------------------------------------------------------------
// C2

fn realizable(alg: &Algebra, md: &MdSentence) -> Result<usize, String> {
    let pts: Vec<Vec<TruthValue>> = md.set().to_explicit(&lim()).map_err(|e| e.to_string())?.points().collect();
    for p in &pts {
        let model = realize(alg, domain_of(md), md.components(), p).map_err(|e| format!("{p:?} not realized: {e}"))?;
        let back = tuple_of(alg, &model, md.components()).unwrap();
        ensure(&back == p, || format!("realized model gives {back:?}, not {p:?}"))?;
    }
    Ok(pts.len())
}

fn c2() -> Outcome {
    let algs = [Algebra::lukasiewicz_n(3).unwrap(), Algebra::godel_n(4).unwrap()];
    let mut g = Gen::new(0xC2);
    let mut minimal_tuples = 0;
    for rule in 1..=7u8 {
        for i in 0..200 {
            let alg = &algs[i % 2];
            let vals = alg.enumerate_carrier().unwrap();
            let m = 1 + g.below(2);
            let vocab = g.vocabulary(vals.len(), m, 4096);
            let fail = |msg: String| format!("rule {rule}, instance {i}: {msg}");
            let k = if rule == 5 { 2 + g.below(2) } else { 1 + g.below(3) };
            let comps = g.components(&vocab, &vals, k, 2, false, &[]);
            let md = g.md(alg, &vocab, m, comps.clone(), &vals);
            let (premises, concl, equiv): (Vec<MdSentence>, MdSentence, bool) = match rule {
                1 => {
                    let target = MdSentence::axiom(comps.clone(), md.layout().clone(), *alg).unwrap();
                    (vec![], calculus::axiom(&target, &lim()).map_err(|e| fail(e.to_string()))?, false)
                }
                2 => {
                    let mut perm: Vec<usize> = (0..k).collect();
                    perm.rotate_left(g.below(k));
                    if g.coin(0.5) {
                        perm.reverse();
                    }
                    let c = calculus::permute(&md, &perm).map_err(|e| fail(e.to_string()))?;
                    (vec![md], c, true)
                }
                3 => {
                    let n = 1 + g.below(2);
                    let added = g.components(&vocab, &vals, n, 2, false, &comps);
                    let c = calculus::extend(&md, &added).map_err(|e| fail(e.to_string()))?;
                    (vec![md], c, true)
                }
                4 => {
                    let other = g.md(alg, &vocab, m, comps.clone(), &vals);
                    let c = calculus::intersect(&md, &other, &lim()).map_err(|e| fail(e.to_string()))?;
                    (vec![md, other], c, true)
                }
                5 => {
                    let c = calculus::project(&md, 1 + g.below(k - 1)).map_err(|e| fail(e.to_string()))?;
                    (vec![md], c, false)
                }
                6 => {
                    let mut pts: Vec<Vec<TruthValue>> = md.set().to_explicit(&lim()).unwrap().points().collect();
                    pts.extend(g.points(alg, &vocab, m, &comps, &vals));
                    let target = explicit_md(alg, m, comps.clone(), pts);
                    let c = calculus::weaken(&md, &target, &lim()).map_err(|e| fail(e.to_string()))?;
                    (vec![md], c, false)
                }
                _ => {
                    // Half of the Good instances run on subformula-closed lists.
                    let closed = i % 2 == 0;
                    let md = if closed {
                        let comps = subformula_closure(&comps);
                        if g.coin(0.25) {
                            let layout = CoordLayout::first_order(m, &comps).unwrap();
                            MdSentence::axiom(comps, layout, *alg).unwrap()
                        } else {
                            g.md(alg, &vocab, m, comps, &vals)
                        }
                    } else {
                        md
                    };
                    let c = calculus::good(&md, &lim()).map_err(|e| fail(e.to_string()))?;
                    if closed {
                        minimal_tuples += realizable(alg, &c).map_err(|e| fail(format!("minimality: {e}")))?;
                        let other =
                            calculus::good(&g.md(alg, &vocab, m, md.components().to_vec(), &vals), &lim()).unwrap();
                        let both = calculus::intersect(&c, &other, &lim()).unwrap();
                        minimal_tuples += realizable(alg, &both).map_err(|e| fail(format!("after intersect: {e}")))?;
                        let mut perm: Vec<usize> = (0..c.len()).collect();
                        perm.rotate_left(g.below(c.len()));
                        let p = calculus::permute(&c, &perm).unwrap();
                        minimal_tuples += realizable(alg, &p).map_err(|e| fail(format!("after permute: {e}")))?;
                    }
                    (vec![md], c, true)
                }
            };
            let refs: Vec<&MdSentence> = premises.iter().chain([&concl]).collect();
            for model in all_models(alg, &refs, m) {
                let before = premises.iter().all(|p| sat(alg, &model, p));
                let after = sat(alg, &model, &concl);
                ensure(!before || after, || fail(format!("unsound on {model:?}")))?;
                ensure(!equiv || before == after, || fail(format!("not equivalent on {model:?}")))?;
            }
        }
    }
    Ok(format!("7 x 200 instances sound, equivalence for 2/3/4/7, {minimal_tuples} minimized tuples all realizable"))
}

// ---------------------------------------------------------------------------
// C3

fn timed(label: &str, f: impl FnOnce() -> Result<(), String>) -> Result<String, String> {
    let start = Instant::now();
    f().map_err(|e| format!("({label}) {e}"))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("({label}) took {t:.1?}"))?;
    Ok(format!("({label}) {t:.2?}"))
}

fn c3() -> Outcome {
    let valid = |src: &str| -> Result<(), String> {
        let goal = &mds(src)[0];
        match entail(&[], goal, &lim()).map_err(|e| e.to_string())? {
            Verdict::Valid(d) => check_proves(&d, &[], goal, &lim()).map_err(|e| e.to_string()),
            Verdict::Invalid(c) => Err(format!("countermodel at {:?}", c.violated_at)),
        }
    };
    let a = timed("a", || {
        valid(
            "algebra godel; domain 1; md g { components: [A; B; A \\/ B];
             set: constrained { ext 3; base full; nodes [x2 = max(x0, x1)]; show [x0, x1, x2] } }",
        )
    })?;
    let b = timed("b", || {
        valid("algebra lukasiewicz; domain 1; md g { components: [A; ~A; A & ~A]; set: boxes { full x full x [0,0] } }")
    })?;
    let c = timed("c", || {
        let s = &mds("algebra godel; domain 2; pred P/1, U/1;
            md ex { components: [P(x); forall x. U(x)]; set: boxes { full x full x [1/2,4/5) } }")[0];
        let alg = Algebra::godel();
        let Some(Structure::FirstOrder(m)) = mdlogic::satisfy(s, &lim()).map_err(|e| e.to_string())? else {
            return Err("no witness".into());
        };
        let u = eval_sentence(&alg, &m, s.components()[1].formula()).unwrap();
        ensure(u >= tv(1, 2) && u < tv(4, 5), || format!("forall x. U(x) = {u}"))?;
        ensure(sat(&alg, &m, s), || "witness does not satisfy the sentence".into())
    })?;
    let d = timed("d", || {
        let s = mds("algebra lukasiewicz; domain 1;
            md p { components: [A]; set: boxes { [1/2,1] } }
            md g { components: [A & A]; set: boxes { [1/2,1] } }");
        let Verdict::Invalid(cm) = entail(&s[..1], &s[1], &lim()).map_err(|e| e.to_string())? else {
            return Err("reported valid".into());
        };
        let Structure::FirstOrder(m) = &cm.structure else { return Err("not first-order".into()) };
        let a = m.table("A").unwrap()[0].as_rational().clone();
        ensure(a == rat(1, 2), || format!("A = {a}"))?;
        // max(0, a + a - 1) by hand.
        let sq = (a.clone() + a - rat(1, 1)).max(rat(0, 1));
        ensure(sq < rat(1, 2) && cm.violated_at == vec![TruthValue::new(sq).unwrap()], || "wrong violation".into())
    })?;
    Ok([a, b, c, d].join(", "))
}

// ---------------------------------------------------------------------------
// C4

/// A coordinate restriction kept on the side, so membership is decided
/// without the library's box code.
type Bounds = Option<(Rational, bool, Rational, bool)>;

fn in_bounds(regions: &[Vec<Bounds>], p: &[TruthValue]) -> bool {
    regions.iter().any(|r| {
        r.iter().zip(p).all(|(b, v)| match b {
            None => true,
            Some((lo, lo_open, hi, hi_open)) => {
                let v = v.as_rational();
                (if *lo_open { v > lo } else { v >= lo }) && (if *hi_open { v < hi } else { v <= hi })
            }
        })
    })
}

fn c4() -> Outcome {
    let alg = Algebra::lukasiewicz();
    let mut g = Gen::new(0xC4);
    let (mut sat_count, mut grid_hits) = (0, 0);
    for i in 0..200 {
        let fail = |msg: String| format!("system {i}: {msg}");
        let atoms = ["A", "B", "C"];
        let n_atoms = 2 + g.below(2);
        let mut vocab = Vocabulary::new();
        for a in &atoms[..n_atoms] {
            vocab.add(*a, 0).unwrap();
        }
        // One denominator per system for endpoints and constants; the
        // connectives keep values on the 1/d grid.
        let d = 1 + g.below(6) as i64;
        let consts: Vec<TruthValue> = (0..=d).map(|k| tv(k, d)).collect();
        let comps = loop {
            let n = 1 + g.below(2);
            let roots = g.components(&vocab, &consts, n, 2, false, &[]);
            let mut comps = subformula_closure(&roots);
            // Every atom appears, so a witness fixes the whole model.
            for a in &atoms[..n_atoms] {
                let c = Component::new(Formula::prop(a));
                if !comps.contains(&c) {
                    comps.push(c);
                }
            }
            if comps.len() <= 6 {
                break comps;
            }
        };
        let dim = comps.len();
        let mut regions: Vec<Vec<Bounds>> = Vec::new();
        for _ in 0..1 + g.below(2) {
            let r = (0..dim)
                .map(|_| {
                    if !g.coin(0.4) {
                        return None;
                    }
                    let (x, y) = (g.below(d as usize + 1) as i64, g.below(d as usize + 1) as i64);
                    let (lo, hi) = (x.min(y), x.max(y));
                    let open = lo < hi;
                    Some((rat(lo, d), open && g.coin(0.3), rat(hi, d), open && g.coin(0.3)))
                })
                .collect();
            regions.push(r);
        }
        let boxes = BoxUnion::new(
            dim,
            regions
                .iter()
                .map(|r| {
                    let coords = r
                        .iter()
                        .map(|b| match b {
                            None => IntervalUnion::full(),
                            Some((lo, lo_open, hi, hi_open)) => IntervalUnion::from_intervals(vec![Interval::new(
                                lo.clone(),
                                *lo_open,
                                hi.clone(),
                                *hi_open,
                            )
                            .unwrap()])
                            .unwrap(),
                        })
                        .collect();
                    Region::new(coords).unwrap()
                })
                .collect(),
        )
        .unwrap();
        let layout = CoordLayout::first_order(1, &comps).unwrap();
        let md = MdSentence::new(comps.clone(), InfoSet::boxes(layout, alg, boxes).unwrap()).unwrap();
        let system = calculus::good(&md, &lim()).map_err(|e| fail(e.to_string()))?;
        let witness = system.set().witness(&lim()).map_err(|e| fail(e.to_string()))?;

        let atom_pos: Vec<(usize, &str)> = atoms[..n_atoms]
            .iter()
            .map(|a| (comps.iter().position(|c| c.formula() == &Formula::prop(a)).unwrap(), *a))
            .collect();
        let model_of = |vals: &[TruthValue]| {
            let tables: BTreeMap<String, Vec<TruthValue>> =
                vals.iter().zip(&atoms).map(|(v, a)| (a.to_string(), vec![v.clone()])).collect();
            Model::new(vocab.clone(), 1, tables).unwrap()
        };

        // Good points of {0, 1/d, ..., 1}^D are exactly the atom grid carried
        // through the connectives.
        let mut on_grid = false;
        let mut digits = vec![0i64; n_atoms];
        loop {
            let vals: Vec<TruthValue> = digits.iter().map(|&k| tv(k, d)).collect();
            let t = tuple_of(&alg, &model_of(&vals), &comps).unwrap();
            if in_bounds(&regions, &t) {
                on_grid = true;
                break;
            }
            let Some(j) = digits.iter().rposition(|&k| k < d) else { break };
            digits[j] += 1;
            digits[j + 1..].iter_mut().for_each(|k| *k = 0);
        }
        ensure(!on_grid || witness.is_some(), || fail("grid point exists but the solver found none".into()))?;
        if let Some(w) = witness {
            sat_count += 1;
            let vals: Vec<TruthValue> = atom_pos.iter().map(|(p, _)| w[*p].clone()).collect();
            let t = tuple_of(&alg, &model_of(&vals), &comps).unwrap();
            ensure(t == w, || fail(format!("witness {w:?} re-evaluates to {t:?}")))?;
            ensure(in_bounds(&regions, &w), || fail(format!("witness {w:?} outside the boxes")))?;
        }
        grid_hits += usize::from(on_grid);
    }
    Ok(format!(
        "200 systems (d <= 6, D <= 6): {sat_count} satisfiable, {grid_hits} with a 1/d grid point, all witnesses exact"
    ))
}

// ---------------------------------------------------------------------------
// C5

const CORPUS: [&str; 25] = [
    "exists x. P(x)",
    "forall x. P(x)",
    "forall x. ~P(x)",
    "exists x. ~P(x)",
    "exists x. (P(x) & P(x))",
    "forall x. (P(x) \\/ ~P(x))",
    "exists x. (P(x) /\\ ~P(x))",
    "forall x. (P(x) -> P(x))",
    "(exists x. P(x)) -> (forall x. P(x))",
    "(forall x. P(x)) -> (exists x. P(x))",
    "exists x. forall y. (P(x) -> P(y))",
    "forall x. exists y. (P(x) & P(y))",
    "~(exists x. P(x)) \\/ (forall x. P(x))",
    "exists x. (P(x) -> c(1/2))",
    "forall x. (c(1/2) -> P(x))",
    "(exists x. P(x)) & (exists x. ~P(x))",
    "forall x. forall y. (P(x) -> (P(y) -> P(x)))",
    "exists x. exists y. (P(x) & ~P(y))",
    "forall x. (P(x) & P(x)) -> exists y. P(y)",
    "~(forall x. P(x) & ~P(x))",
    "exists x. ~~P(x)",
    "forall x. exists y. ~(x = y) \\/ P(x)",
    "exists x. forall y. (x = y -> P(y))",
    "c(1/2) & exists x. P(x)",
    "(forall x. P(x)) \\/ c(0)",
];

fn c5() -> Outcome {
    let start = Instant::now();
    let alg = Algebra::lukasiewicz_n(3).unwrap();
    let vals = alg.enumerate_carrier().unwrap();
    let vocab = Vocabulary::new().pred("P", 1).with_equality();
    let axioms = sigma(&alg, &vocab).map_err(|e| e.to_string())?;
    let classical = Algebra::classical();
    let formulas: Vec<Formula> = CORPUS
        .iter()
        .map(|s| parse_formula_open(s, Mode::FirstOrder).map(|(f, _)| f).map_err(|e| format!("{s}: {e}")))
        .collect::<Result<_, _>>()?;
    let translations: Vec<Vec<Formula>> =
        formulas.iter().map(|f| vals.iter().map(|a| translate(&alg, &vocab, a, f).unwrap()).collect()).collect();
    let mut models = 0;
    for m in 1..=2 {
        for model in enumerate_models(&alg, &Vocabulary::new().pred("P", 1), m, 1 << 10).unwrap() {
            models += 1;
            let star = star_model(&alg, &model).map_err(|e| e.to_string())?;
            for ax in &axioms {
                ensure(eval_sentence(&classical, &star, &ax.formula).unwrap().is_one(), || {
                    format!("{:?} fails in the starred model of {model:?}", ax.kind)
                })?;
            }
            for (f, ts) in formulas.iter().zip(&translations) {
                let value = eval_sentence(&alg, &model, f).unwrap();
                let holds: Vec<&TruthValue> = vals
                    .iter()
                    .zip(ts)
                    .filter(|(_, t)| eval_sentence(&classical, &star, t).unwrap().is_one())
                    .map(|(a, _)| a)
                    .collect();
                ensure(holds == vec![&value], || {
                    format!("{f}: value {value}, translations hold at {holds:?} in {model:?}")
                })?;
            }
        }
    }
    let t = start.elapsed();
    ensure(models == 12, || format!("{models} models, expected 12"))?;
    ensure(t < Duration::from_secs(30), || format!("took {t:.1?}"))?;
    Ok(format!(
        "12 models x 25 formulas x 3 values agree, starred models satisfy the {} axioms, in {t:.2?}",
        axioms.len()
    ))
}

// ---------------------------------------------------------------------------
// C6

/// Counts tables over `n` elements with `k` values in which some element
/// takes the top value.
fn count_some_top(k: u64, n: u32) -> (u128, u128) {
    let total = (k as u128).pow(n);
    let hits =
        (0..total).filter(|&code| (0..n).any(|i| (code / (k as u128).pow(i)) % k as u128 == k as u128 - 1)).count();
    (hits as u128, total)
}

fn c6() -> Outcome {
    let cfg = |alg: &str, sizes: Vec<(usize, SizeMode)>| {
        let src = format!(
            "algebra {alg}; domain 1; pred P/1; md some {{ components: [exists x. P(x)]; set: explicit {{ (1) }} }}"
        );
        let md = mds(&src).remove(0);
        ExperimentConfig::new(md, Vocabulary::new().pred("P", 1), sizes, 10_000, 2024).unwrap()
    };
    let exact = |alg: &str, k: u64, upto: u32, closed: &dyn Fn(u32) -> (u128, u128)| -> Result<(), String> {
        let c = cfg(alg, vec![]);
        for n in 1..=upto {
            let oracle = count_some_top(k, n);
            let (num, den) = closed(n);
            ensure(oracle.0 * den == num * oracle.1, || {
                format!("{alg} n={n}: enumeration {oracle:?} vs closed form {num}/{den}")
            })?;
            let got = zeroone::exact_fraction(&c, n as usize).map_err(|e| e.to_string())?;
            ensure(got == oracle, || format!("{alg} n={n}: {got:?}, enumeration {oracle:?}"))?;
        }
        Ok(())
    };
    exact("classical", 2, 10, &|n| (2u128.pow(n) - 1, 2u128.pow(n)))?;
    exact("l3", 3, 8, &|n| (3u128.pow(n) - 2u128.pow(n), 3u128.pow(n)))?;

    let sampled = cfg("classical", vec![(30, SizeMode::Sample)]);
    let est = zeroone::sample_fraction(&sampled, 30).map_err(|e| e.to_string())?;
    let p = 1.0 - 2f64.powi(-30);
    let sigma = (p * (1.0 - p) / est.samples as f64).sqrt();
    ensure(est.samples == 10_000 && (est.mean - p).abs() <= 3.0 * sigma, || {
        format!("n=30 estimate {} vs {p}, sigma {sigma:e}", est.mean)
    })?;

    let sizes: Vec<(usize, SizeMode)> = (1..=6).map(|n| (n, SizeMode::Exact)).chain([(30, SizeMode::Sample)]).collect();
    let one = zeroone::run(&cfg("classical", sizes.clone())).and_then(|r| r.to_csv()).map_err(|e| e.to_string())?;
    let two = zeroone::run(&cfg("classical", sizes)).and_then(|r| r.to_csv()).map_err(|e| e.to_string())?;
    ensure(one == two, || "CSV differs between runs with one seed".into())?;
    let report = zeroone::run(&cfg("classical", vec![(30, SizeMode::Sample)])).unwrap();
    ensure(matches!(report.rows[0], Row::Sampled { .. }), || "n=30 not sampled".into())?;
    Ok(format!(
        "exact for n<=10 (classical) and n<=8 (l3), n=30 estimate {:.6} within 3 sigma, CSV reproducible",
        est.mean
    ))
}

// ---------------------------------------------------------------------------
// C7

fn c7() -> Outcome {
    let start = Instant::now();
    let two = mds(
        "algebra classical; domain 1; md two { components: [exists x. exists y. ~(x = y)]; set: explicit { (1) } }",
    );
    let r = sweep(&[], &two[0], 4, &lim()).map_err(|e| e.to_string())?;
    ensure(r.countermodel.as_ref().map(|(m, _)| *m) == Some(1), || {
        format!("distinctness: {:?}", r.countermodel.map(|c| c.0))
    })?;
    let s = mds("algebra l3; domain 1; pred P/1;
        md all { components: [forall x. P(x)]; set: explicit { (1) } }
        md some { components: [exists x. P(x)]; set: explicit { (1) } }");
    let r = sweep(&s[..1], &s[1], 4, &lim()).map_err(|e| e.to_string())?;
    ensure(r.countermodel.is_none() && r.checked == vec![1, 2, 3, 4], || format!("forall/exists: {r:?}"))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:.1?}"))?;
    Ok(format!("countermodel at m=1, none up to N=4, in {t:.2?}"))
}

// ---------------------------------------------------------------------------
// C8

/// Corrupts step `k` so that it cannot follow, or returns `None` when the
/// chosen kind does not apply to that step.
fn mutate(d: &Derivation, premises: usize, k: usize, kind: usize) -> Option<Derivation> {
    let mut out = d.clone();
    let step: &mut Step = &mut out.steps[k];
    let empty_of = |md: &MdSentence| with_set(md, InfoSet::empty(md.layout().clone(), *md.algebra()));
    let full_of = |md: &MdSentence| with_set(md, InfoSet::full(md.layout().clone(), *md.algebra()));
    match (kind, &mut step.by) {
        (0, Justification::Permute { perm, .. }) if perm.len() > 1 => perm.rotate_left(1),
        (1, Justification::Project { drop, .. }) => *drop += 1,
        (2, Justification::Extend { added, .. }) => {
            added.pop();
        }
        (3, Justification::Weaken { from }) => {
            if d.steps[*from].md.set().is_empty(&lim()).ok()? {
                return None;
            }
            step.md = empty_of(&step.md);
        }
        (4, Justification::Good { .. }) => {
            step.md = if step.md.set().is_empty(&lim()).ok()? { full_of(&step.md) } else { empty_of(&step.md) };
        }
        (5, Justification::Premise(i)) => *i = premises,
        (
            6,
            Justification::Permute { from, .. } | Justification::Good { from } | Justification::Project { from, .. },
        ) => *from = k,
        (7, Justification::Intersect { right, .. }) => *right = k + 1,
        (8, Justification::Axiom) => step.md = empty_of(&step.md),
        _ => return None,
    }
    Some(out)
}

fn c8(proved: &[Proved]) -> Outcome {
    for (i, p) in proved.iter().enumerate() {
        check(&p.derivation, &p.premises, &lim()).map_err(|e| format!("derivation {i} rejected: {e}"))?;
        check_proves(&p.derivation, &p.premises, &p.goal, &lim()).map_err(|e| format!("derivation {i}: {e}"))?;
    }
    let mut g = Gen::new(0xC8);
    let mut rejected = 0;
    let mut kinds = [0usize; 9];
    let mut tries = 0;
    while rejected < 50 {
        tries += 1;
        ensure(tries < 100_000, || format!("only {rejected} applicable mutations found"))?;
        let p = g.pick(proved);
        let k = g.below(p.derivation.steps.len());
        let kind = rejected % 9;
        let Some(bad) = mutate(&p.derivation, p.premises.len(), k, kind) else { continue };
        match check(&bad, &p.premises, &lim()) {
            Ok(()) => return Err(format!("mutation {kind} at step {k} accepted")),
            Err(f) if f.step != k => {
                return Err(format!("mutation {kind} at step {k} rejected at step {}: {}", f.step, f.reason))
            }
            Err(_) => {
                rejected += 1;
                kinds[kind] += 1;
            }
        }
    }
    Ok(format!("{} derivations check; 50/50 mutants rejected at the mutated step (by kind {kinds:?})", proved.len()))
}

// ---------------------------------------------------------------------------

fn main() {
    let mut proved = Vec::new();
    let mut failed = 0;
    let mut report = |name: &str, what: &str, r: Outcome| match r {
        Ok(s) => println!("PASS {name} {what}: {s}"),
        Err(e) => {
            failed += 1;
            println!("FAIL {name} {what}: {e}");
        }
    };
    report("C1", "entailment vs enumeration", c1(&mut proved));
    report("C2", "rule soundness and minimality", c2());
    report("C3", "real-valued solver checks", c3());
    report("C4", "solver vs grid", c4());
    report("C5", "translation correspondence", c5());
    report("C6", "zero-one exact values", c6());
    report("C7", "bounded sweep", c7());
    report("C8", "proof-object integrity", c8(&proved));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
