//! Text formats for MD-sentence files and derivation files.
//!
//! ```text
//! algebra l3;
//! domain 2;                      # or: frame 2 { (0,1), (1,1) };
//! pred P/1, R/2;                 # or, for frames: prop p, q;
//! md prem { components: [forall x. P(x)]; set: explicit { (1) } }
//! ```
//!
//! Set literals: `full`, `empty`, `explicit { (v, ..); .. }`,
//! `boxes { [a,b) x full x (c,d] | [e,f]; .. }` and
//! `constrained { ext n; base <boxes>; nodes [x2 = max(x0, x1); ..]; show [x0, ..] }`.
//!
//! A derivation file has the same header, then `premise { .. }` blocks, an
//! optional `goal { .. }` block and `step { .. } by <rule>;` lines. Steps
//! and premises are numbered from 1.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Rational, TruthValue};
use crate::calculus::{Derivation, Justification, Step};
use crate::error::{Error, Result};
use crate::infoset::{BoxUnion, Constrained, CoordLayout, Explicit, InfoSet, Interval, IntervalUnion, Region, Setting};
use crate::linsolve::Node;
use crate::md::MdSentence;
use crate::semantics::{Frame, ModalModel, Model};
use crate::syntax::lexer::{describe, Cursor, Tok};
use crate::syntax::{Component, FormulaParser, Mode, Vocabulary};

/// Algebra and domain (or frame) for reading a file. Values given here must
/// agree with the file header when both are present.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    pub algebra: Option<Algebra>,
    pub setting: Option<Setting>,
    /// Used when neither the header nor `setting` gives one.
    pub fallback_setting: Option<Setting>,
}

impl Context {
    pub fn new(algebra: Option<Algebra>, setting: Option<Setting>) -> Self {
        Context { algebra, setting, fallback_setting: None }
    }

    pub fn with_fallback(mut self, setting: Setting) -> Self {
        self.fallback_setting = Some(setting);
        self
    }

    pub fn mode(&self) -> Mode {
        match self.setting.as_ref().or(self.fallback_setting.as_ref()) {
            Some(Setting::Modal(_)) => Mode::Modal,
            _ => Mode::FirstOrder,
        }
    }
}

/// A parsed MD-sentence file.
#[derive(Clone, Debug)]
pub struct MdFile {
    pub context: Context,
    pub vocabulary: Vocabulary,
    pub sentences: Vec<(String, MdSentence)>,
}

impl MdFile {
    pub fn sentences(&self) -> Vec<MdSentence> {
        self.sentences.iter().map(|(_, m)| m.clone()).collect()
    }
}

/// A parsed derivation file.
#[derive(Clone, Debug)]
pub struct ProofFile {
    pub context: Context,
    pub vocabulary: Vocabulary,
    pub premises: Vec<MdSentence>,
    pub goal: Option<MdSentence>,
    pub derivation: Derivation,
}

struct Reader {
    cur: Cursor,
    ctx: Context,
    declared: Option<Vocabulary>,
    inferred: Vocabulary,
}

fn set_once<T: PartialEq + std::fmt::Display>(slot: &mut Option<T>, v: T, cur: &Cursor) -> Result<()> {
    match slot {
        Some(old) if *old != v => cur.error(format!("{v} conflicts with {old} given elsewhere")),
        _ => {
            *slot = Some(v);
            Ok(())
        }
    }
}

impl Reader {
    fn new(src: &str, ctx: &Context) -> Result<Self> {
        let mut inferred = Vocabulary::new();
        inferred.set_equality(ctx.mode() == Mode::FirstOrder);
        Ok(Reader { cur: Cursor::new(src)?, ctx: ctx.clone(), declared: None, inferred })
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        self.cur.expect_keyword(kw)
    }

    fn at_kw(&self, kw: &str) -> bool {
        self.cur.at_ident(kw)
    }

    /// Header statements, in any order.
    fn header(&mut self) -> Result<()> {
        loop {
            if self.at_kw("algebra") {
                self.cur.next();
                let tok = self.cur.ident()?;
                let alg: Algebra = match tok.parse() {
                    Ok(a) => a,
                    Err(e) => return self.cur.error(e.to_string()),
                };
                set_once(&mut self.ctx.algebra, alg, &self.cur)?;
            } else if self.at_kw("domain") {
                self.cur.next();
                let m = self.cur.usize()?;
                if m == 0 {
                    return self.cur.error("domain size must be at least 1");
                }
                set_once(&mut self.ctx.setting, Setting::FirstOrder { domain: m }, &self.cur)?;
            } else if self.at_kw("frame") {
                self.cur.next();
                let n = self.cur.usize()?;
                self.cur.expect_sym("{")?;
                let mut edges = Vec::new();
                while !self.cur.at_sym("}") {
                    self.cur.expect_sym("(")?;
                    let a = self.cur.usize()?;
                    self.cur.expect_sym(",")?;
                    let b = self.cur.usize()?;
                    self.cur.expect_sym(")")?;
                    edges.push((a, b));
                    if !self.cur.eat_sym(",") {
                        break;
                    }
                }
                self.cur.expect_sym("}")?;
                let frame = match Frame::new(n, edges) {
                    Ok(f) => f,
                    Err(e) => return self.cur.error(e.to_string()),
                };
                set_once(&mut self.ctx.setting, Setting::Modal(frame), &self.cur)?;
            } else if self.at_kw("pred") || self.at_kw("prop") {
                let props = self.at_kw("prop");
                self.cur.next();
                let v = self.declared.get_or_insert_with(|| Vocabulary::new().with_equality());
                loop {
                    let name = self.cur.ident()?;
                    let arity = if props {
                        0
                    } else {
                        self.cur.expect_sym("/")?;
                        self.cur.usize()?
                    };
                    if let Err(e) = v.add(name, arity) {
                        return self.cur.error(e.to_string());
                    }
                    if !self.cur.eat_sym(",") {
                        break;
                    }
                }
            } else if self.at_kw("equality") {
                self.cur.next();
                self.declared.get_or_insert_with(Vocabulary::new).set_equality(true);
            } else {
                return Ok(());
            }
            self.cur.expect_sym(";")?;
        }
    }

    fn algebra(&self) -> Result<Algebra> {
        match &self.ctx.algebra {
            Some(a) => Ok(*a),
            None => self.cur.error("no algebra given (header `algebra <tok>;` or a flag)"),
        }
    }

    fn setting(&self) -> Result<Setting> {
        match self.ctx.setting.as_ref().or(self.ctx.fallback_setting.as_ref()) {
            Some(s) => Ok(s.clone()),
            None => self.cur.error("no domain or frame given"),
        }
    }

    fn component_list(&mut self) -> Result<Vec<Component>> {
        let mode = self.ctx.mode();
        self.cur.expect_sym("[")?;
        let mut out = Vec::new();
        if self.cur.at_sym("]") {
            self.cur.next();
            return Ok(out);
        }
        loop {
            let c = match &self.declared {
                Some(v) => FormulaParser::new(v, mode).component(&mut self.cur)?,
                None => {
                    // Arities stay consistent across the whole file.
                    let mut p = FormulaParser::extending(std::mem::take(&mut self.inferred), mode);
                    let c = p.component(&mut self.cur)?;
                    self.inferred = p.into_vocabulary();
                    c
                }
            };
            out.push(c);
            if !self.cur.eat_sym(";") {
                break;
            }
        }
        self.cur.expect_sym("]")?;
        Ok(out)
    }

    /// `{ components: [..]; set: <literal> }`
    fn md_body(&mut self) -> Result<MdSentence> {
        self.cur.expect_sym("{")?;
        self.keyword("components")?;
        self.cur.expect_sym(":")?;
        let comps = self.component_list()?;
        self.cur.expect_sym(";")?;
        self.keyword("set")?;
        self.cur.expect_sym(":")?;
        let alg = self.algebra()?;
        let layout = match CoordLayout::with_arities(self.setting()?, comps.iter().map(|c| c.arity()).collect()) {
            Ok(l) => l,
            Err(e) => return self.cur.error(e.to_string()),
        };
        let set = self.set_literal(layout, alg)?;
        self.cur.eat_sym(";");
        self.cur.expect_sym("}")?;
        match MdSentence::new(comps, set) {
            Ok(m) => Ok(m),
            Err(e) => self.cur.error(e.to_string()),
        }
    }

    fn wrap<T>(&self, r: Result<T>) -> Result<T> {
        r.or_else(|e| self.cur.error(e.to_string()))
    }

    fn set_literal(&mut self, layout: CoordLayout, alg: Algebra) -> Result<InfoSet> {
        let dim = layout.dim();
        let kw = self.cur.ident()?;
        match kw.as_str() {
            "full" => Ok(InfoSet::full(layout, alg)),
            "empty" => Ok(InfoSet::empty(layout, alg)),
            "explicit" => {
                let e = self.explicit(dim)?;
                self.wrap(InfoSet::explicit(layout, alg, e))
            }
            "boxes" => {
                let b = self.boxes(dim)?;
                self.wrap(InfoSet::boxes(layout, alg, b))
            }
            "constrained" => {
                let c = self.constrained()?;
                self.wrap(InfoSet::constrained(layout, alg, c))
            }
            other => self.cur.error(format!("unknown set literal `{other}`")),
        }
    }

    fn explicit(&mut self, dim: usize) -> Result<Explicit> {
        self.cur.expect_sym("{")?;
        let mut points = Vec::new();
        while self.cur.at_sym("(") {
            self.cur.next();
            let mut p = Vec::new();
            if !self.cur.at_sym(")") {
                loop {
                    p.push(self.cur.truth_value()?);
                    if !self.cur.eat_sym(",") {
                        break;
                    }
                }
            }
            self.cur.expect_sym(")")?;
            if p.len() != dim {
                return self.cur.error(format!("point has {} coordinates, expected {dim}", p.len()));
            }
            points.push(p);
            if !self.cur.eat_sym(";") {
                break;
            }
        }
        self.cur.expect_sym("}")?;
        self.wrap(Explicit::new(dim, points))
    }

    fn interval_union(&mut self) -> Result<IntervalUnion> {
        if self.at_kw("full") {
            self.cur.next();
            return Ok(IntervalUnion::full());
        }
        if self.at_kw("none") {
            self.cur.next();
            return Ok(IntervalUnion::empty());
        }
        let mut items = Vec::new();
        loop {
            let lo_open = if self.cur.eat_sym("(") {
                true
            } else {
                self.cur.expect_sym("[")?;
                false
            };
            let lo = self.cur.rational()?;
            self.cur.expect_sym(",")?;
            let hi = self.cur.rational()?;
            let hi_open = if self.cur.eat_sym(")") {
                true
            } else {
                self.cur.expect_sym("]")?;
                false
            };
            if let Some(i) = Interval::new(lo, lo_open, hi, hi_open) {
                items.push(i);
            }
            if !self.cur.eat_sym("|") {
                break;
            }
        }
        self.wrap(IntervalUnion::from_intervals(items))
    }

    fn boxes(&mut self, dim: usize) -> Result<BoxUnion> {
        self.cur.expect_sym("{")?;
        let mut regions = Vec::new();
        while !self.cur.at_sym("}") {
            let mut coords = vec![self.interval_union()?];
            while self.at_kw("x") {
                self.cur.next();
                coords.push(self.interval_union()?);
            }
            if coords.len() != dim {
                return self.cur.error(format!("box has {} coordinates, expected {dim}", coords.len()));
            }
            regions.extend(Region::new(coords));
            if !self.cur.eat_sym(";") {
                break;
            }
        }
        self.cur.expect_sym("}")?;
        self.wrap(BoxUnion::new(dim, regions))
    }

    fn base(&mut self, dim: usize) -> Result<BoxUnion> {
        let kw = self.cur.ident()?;
        match kw.as_str() {
            "full" => Ok(BoxUnion::full(dim)),
            "empty" => Ok(BoxUnion::empty(dim)),
            "boxes" => self.boxes(dim),
            other => self.cur.error(format!("expected a box literal, found `{other}`")),
        }
    }

    fn coord(&mut self) -> Result<usize> {
        let name = self.cur.ident()?;
        match name.strip_prefix('x').and_then(|d| d.parse().ok()) {
            Some(k) => Ok(k),
            None => self.cur.error(format!("expected a coordinate like `x3`, found `{name}`")),
        }
    }

    fn coord_list(&mut self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        if !self.cur.at_sym(")") && !self.cur.at_sym("]") {
            loop {
                out.push(self.coord()?);
                if !self.cur.eat_sym(",") {
                    break;
                }
            }
        }
        Ok(out)
    }

    fn node(&mut self) -> Result<Node> {
        let out = self.coord()?;
        self.cur.expect_sym("=")?;
        if matches!(self.cur.peek(), Tok::Num(_)) {
            return Ok(Node::ConstEq { out, value: self.cur.rational()? });
        }
        let name = self.cur.ident()?;
        if !self.cur.at_sym("(") {
            return match name.strip_prefix('x').and_then(|d| d.parse().ok()) {
                Some(b) => Ok(Node::Same { a: out, b }),
                None => self.cur.error(format!("expected a coordinate or operation, found `{name}`")),
            };
        }
        self.cur.expect_sym("(")?;
        let args = self.coord_list()?;
        self.cur.expect_sym(")")?;
        let two = |r: &Reader| -> Result<(usize, usize)> {
            match args.as_slice() {
                [a, b] => Ok((*a, *b)),
                _ => r.cur.error(format!("`{name}` takes two coordinates")),
            }
        };
        Ok(match name.as_str() {
            "min" => Node::MinOf { out, args },
            "max" => Node::MaxOf { out, args },
            "lconj" => {
                let (a, b) = two(self)?;
                Node::LukConj { out, a, b }
            }
            "limp" => {
                let (a, b) = two(self)?;
                Node::LukImpl { out, a, b }
            }
            "gimp" => {
                let (a, b) = two(self)?;
                Node::GodelImpl { out, a, b }
            }
            other => return self.cur.error(format!("unknown operation `{other}`")),
        })
    }

    fn constrained(&mut self) -> Result<Constrained> {
        self.cur.expect_sym("{")?;
        self.keyword("ext")?;
        let ext = self.cur.usize()?;
        self.cur.expect_sym(";")?;
        self.keyword("base")?;
        let base = self.base(ext)?;
        self.cur.expect_sym(";")?;
        self.keyword("nodes")?;
        self.cur.expect_sym("[")?;
        let mut nodes = Vec::new();
        while !self.cur.at_sym("]") {
            nodes.push(self.node()?);
            if !self.cur.eat_sym(";") {
                break;
            }
        }
        self.cur.expect_sym("]")?;
        self.cur.expect_sym(";")?;
        self.keyword("show")?;
        self.cur.expect_sym("[")?;
        let visible = self.coord_list()?;
        self.cur.expect_sym("]")?;
        self.cur.eat_sym(";");
        self.cur.expect_sym("}")?;
        self.wrap(Constrained::new(ext, base, nodes, visible))
    }

    fn index(&mut self) -> Result<usize> {
        let k = self.cur.usize()?;
        if k == 0 {
            return self.cur.error("numbering starts at 1");
        }
        Ok(k - 1)
    }

    fn justification(&mut self) -> Result<Justification> {
        let rule = self.cur.ident()?;
        Ok(match rule.as_str() {
            "axiom" => Justification::Axiom,
            "premise" => Justification::Premise(self.index()?),
            "rule2" => {
                let from = self.index()?;
                self.cur.expect_sym("[")?;
                let mut perm = Vec::new();
                while !self.cur.at_sym("]") {
                    perm.push(self.index()?);
                    if !self.cur.eat_sym(",") {
                        break;
                    }
                }
                self.cur.expect_sym("]")?;
                Justification::Permute { from, perm }
            }
            "rule3" => {
                let from = self.index()?;
                Justification::Extend { from, added: self.component_list()? }
            }
            "rule4" => Justification::Intersect { left: self.index()?, right: self.index()? },
            "rule5" => Justification::Project { from: self.index()?, drop: self.cur.usize()? },
            "rule6" => Justification::Weaken { from: self.index()? },
            "rule7" => Justification::Good { from: self.index()? },
            other => return self.cur.error(format!("unknown justification `{other}`")),
        })
    }

    fn vocabulary(&self) -> Vocabulary {
        self.declared.clone().unwrap_or_else(|| self.inferred.clone())
    }
}

/// Parses an MD-sentence file.
pub fn parse_md_file(src: &str, ctx: &Context) -> Result<MdFile> {
    let mut r = Reader::new(src, ctx)?;
    r.header()?;
    let mut sentences = Vec::new();
    while !r.cur.at_eof() {
        r.keyword("md")?;
        let name = r.cur.ident()?;
        let md = r.md_body()?;
        if sentences.iter().any(|(n, _)| *n == name) {
            return r.cur.error(format!("sentence `{name}` defined twice"));
        }
        sentences.push((name, md));
    }
    r.ctx.setting = r.ctx.setting.take().or(r.ctx.fallback_setting.clone());
    Ok(MdFile { context: r.ctx.clone(), vocabulary: r.vocabulary(), sentences })
}

/// Parses a derivation file.
pub fn parse_proof_file(src: &str, ctx: &Context) -> Result<ProofFile> {
    let mut r = Reader::new(src, ctx)?;
    r.header()?;
    let mut premises = Vec::new();
    let mut goal = None;
    let mut d = Derivation::new();
    while !r.cur.at_eof() {
        let kw = r.cur.ident()?;
        match kw.as_str() {
            "premise" => premises.push(r.md_body()?),
            "goal" => goal = Some(r.md_body()?),
            "step" => {
                let md = r.md_body()?;
                r.keyword("by")?;
                let by = r.justification()?;
                r.cur.expect_sym(";")?;
                d.steps.push(Step { md, by });
            }
            other => return r.cur.error(format!("expected `premise`, `goal` or `step`, found `{other}`")),
        }
    }
    r.ctx.setting = r.ctx.setting.take().or(r.ctx.fallback_setting.clone());
    Ok(ProofFile { context: r.ctx.clone(), vocabulary: r.vocabulary(), premises, goal, derivation: d })
}

/// Parses one set literal for the given layout.
pub fn parse_set(src: &str, layout: CoordLayout, alg: Algebra) -> Result<InfoSet> {
    let mut r = Reader::new(src, &Context::default())?;
    let s = r.set_literal(layout, alg)?;
    if !r.cur.at_eof() {
        return r.cur.error(format!("unexpected {} after set", describe(r.cur.peek())));
    }
    Ok(s)
}

fn write_header(out: &mut String, alg: &Algebra, setting: &Setting, vocab: &Vocabulary) {
    let _ = writeln!(out, "algebra {alg};");
    match setting {
        Setting::FirstOrder { domain } => {
            let _ = writeln!(out, "domain {domain};");
            if !vocab.is_empty() {
                let ps: Vec<String> = vocab.predicates().iter().map(|(n, a)| format!("{n}/{a}")).collect();
                let _ = writeln!(out, "pred {};", ps.join(", "));
            }
        }
        Setting::Modal(f) => {
            let es: Vec<String> = f.edges().iter().map(|(a, b)| format!("({a},{b})")).collect();
            let _ = writeln!(out, "frame {} {{ {} }};", f.worlds(), es.join(", "));
            if !vocab.is_empty() {
                let ps: Vec<&str> = vocab.predicates().iter().map(|(n, _)| n.as_str()).collect();
                let _ = writeln!(out, "prop {};", ps.join(", "));
            }
        }
    }
}

fn components_text(comps: &[Component]) -> String {
    let cs: Vec<String> = comps.iter().map(|c| c.to_string()).collect();
    format!("[{}]", cs.join("; "))
}

/// `{ components: [..]; set: .. }`
pub fn md_body_text(md: &MdSentence) -> String {
    format!("{{ components: {}; set: {} }}", components_text(md.components()), md.set())
}

fn justification_text(j: &Justification) -> String {
    match j {
        Justification::Axiom => "axiom".into(),
        Justification::Premise(i) => format!("premise {}", i + 1),
        Justification::Permute { from, perm } => {
            let p: Vec<String> = perm.iter().map(|i| (i + 1).to_string()).collect();
            format!("rule2 {} [{}]", from + 1, p.join(", "))
        }
        Justification::Extend { from, added } => format!("rule3 {} {}", from + 1, components_text(added)),
        Justification::Intersect { left, right } => format!("rule4 {} {}", left + 1, right + 1),
        Justification::Project { from, drop } => format!("rule5 {} {drop}", from + 1),
        Justification::Weaken { from } => format!("rule6 {}", from + 1),
        Justification::Good { from } => format!("rule7 {}", from + 1),
    }
}

/// Writes an MD-sentence file.
pub fn write_md_file(sentences: &[(String, MdSentence)], vocab: &Vocabulary) -> Result<String> {
    let first = sentences.first().ok_or(Error::EmptyInput("MD-sentence file"))?;
    let mut out = String::new();
    write_header(&mut out, first.1.algebra(), first.1.layout().setting(), vocab);
    for (name, md) in sentences {
        let _ = writeln!(out, "md {name} {}", md_body_text(md));
    }
    Ok(out)
}

/// Writes a derivation file that [`parse_proof_file`] reads back.
pub fn write_proof_file(
    premises: &[MdSentence],
    goal: Option<&MdSentence>,
    d: &Derivation,
    vocab: &Vocabulary,
) -> Result<String> {
    let any = d.steps.first().map(|s| &s.md).or(goal).or(premises.first()).ok_or(Error::EmptyInput("derivation"))?;
    let mut out = String::new();
    write_header(&mut out, any.algebra(), any.layout().setting(), vocab);
    for p in premises {
        let _ = writeln!(out, "premise {}", md_body_text(p));
    }
    if let Some(g) = goal {
        let _ = writeln!(out, "goal {}", md_body_text(g));
    }
    for s in &d.steps {
        let _ = writeln!(out, "step {} by {};", md_body_text(&s.md), justification_text(&s.by));
    }
    Ok(out)
}

/// JSON form of a first-order model: domain size and tables as rational strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub domain: usize,
    pub predicates: BTreeMap<String, usize>,
    pub tables: BTreeMap<String, Vec<TruthValue>>,
}

impl ModelJson {
    pub fn from_model(m: &Model) -> Self {
        ModelJson {
            domain: m.domain(),
            predicates: m.vocabulary().predicates().iter().cloned().collect(),
            tables: m.tables().clone(),
        }
    }

    pub fn into_model(self) -> Result<Model> {
        let mut v = Vocabulary::new().with_equality();
        for (n, a) in &self.predicates {
            v.add(n.clone(), *a)?;
        }
        Model::new(v, self.domain, self.tables)
    }
}

/// JSON form of a modal model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModalModelJson {
    pub worlds: usize,
    pub edges: Vec<(usize, usize)>,
    pub valuation: BTreeMap<String, Vec<TruthValue>>,
}

impl ModalModelJson {
    pub fn from_model(m: &ModalModel) -> Self {
        ModalModelJson {
            worlds: m.frame().worlds(),
            edges: m.frame().edges().iter().copied().collect(),
            valuation: m.valuation().clone(),
        }
    }

    pub fn into_model(self) -> Result<ModalModel> {
        ModalModel::new(Frame::new(self.worlds, self.edges)?, self.valuation)
    }
}

/// A frame written as in a file header: `2 { (0,1), (1,1) }`.
pub fn parse_frame(text: &str) -> Result<Frame> {
    let mut r = Reader::new(&format!("frame {text};"), &Context::default())?;
    r.header()?;
    if !r.cur.at_eof() {
        return r.cur.error(format!("unexpected {} after frame", describe(r.cur.peek())));
    }
    match r.ctx.setting {
        Some(Setting::Modal(f)) => Ok(f),
        _ => r.cur.error("expected a frame"),
    }
}

/// JSON form of a named MD-sentence; both fields use the text syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdJson {
    pub name: String,
    pub components: Vec<String>,
    pub set: String,
}

impl MdJson {
    pub fn from_md(name: &str, md: &MdSentence) -> Self {
        MdJson {
            name: name.to_string(),
            components: md.components().iter().map(|c| c.to_string()).collect(),
            set: md.set().to_string(),
        }
    }

    /// Reads the sentence back; `ctx` must fix the algebra and domain or frame.
    pub fn to_md(&self, ctx: &Context, vocab: &Vocabulary) -> Result<MdSentence> {
        let mut text = String::new();
        let (Some(alg), Some(setting)) = (&ctx.algebra, &ctx.setting) else {
            return Err(Error::Invalid("reading a sentence needs an algebra and a domain or frame".into()));
        };
        write_header(&mut text, alg, setting, vocab);
        let _ = write!(text, "md {} {{ components: [{}]; set: {} }}", self.name, self.components.join("; "), self.set);
        let f = parse_md_file(&text, ctx)?;
        Ok(f.sentences.into_iter().next().expect("one sentence").1)
    }
}

/// Reads a point given as comma-separated rationals.
pub fn parse_point(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|t| crate::algebra::parse_rational(t.trim())).collect()
}
