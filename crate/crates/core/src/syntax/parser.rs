//! Recursive-descent parser for the formula DSL.
//!
//! ```text
//! formula := disj ( "->" formula )?
//! disj    := conj ( ("\/" | "|") conj )*
//! conj    := unary ( ("&" | "/\") unary )*
//! unary   := "~" unary | "box" unary | "dia" unary
//!          | ("forall" | "exists") var "." formula
//!          | "(" formula ")" | "c" "(" rational ")"
//!          | var "=" var | Pred ( "(" var ("," var)* ")" )?
//! ```

use super::lexer::{describe, Cursor, Tok};
use super::{Component, Formula, Mode, Var, Vocabulary};
use crate::algebra::Connective;
use crate::error::Result;

const KEYWORDS: &[&str] = &["forall", "exists", "box", "dia", "c"];

/// Formula parser over a shared cursor, so file parsers can embed formulas.
pub(crate) struct FormulaParser<'v> {
    vocab: Option<&'v Vocabulary>,
    inferred: Vocabulary,
    mode: Mode,
}

impl<'v> FormulaParser<'v> {
    pub fn new(vocab: &'v Vocabulary, mode: Mode) -> Self {
        FormulaParser { vocab: Some(vocab), inferred: Vocabulary::new().with_equality(), mode }
    }

    /// Parser that declares predicates as it meets them.
    pub fn inferring(mode: Mode) -> Self {
        let mut inferred = Vocabulary::new();
        inferred.set_equality(mode == Mode::FirstOrder);
        FormulaParser { vocab: None, inferred, mode }
    }

    /// Inferring parser that starts from predicates already seen.
    pub fn extending(seen: Vocabulary, mode: Mode) -> Self {
        FormulaParser { vocab: None, inferred: seen, mode }
    }

    pub fn into_vocabulary(self) -> Vocabulary {
        self.inferred
    }

    pub fn formula(&mut self, cur: &mut Cursor) -> Result<Formula> {
        let lhs = self.disj(cur)?;
        if cur.eat_sym("->") {
            let rhs = self.formula(cur)?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    /// A formula with an optional `@ [vars]` ordering suffix.
    pub fn component(&mut self, cur: &mut Cursor) -> Result<Component> {
        let f = self.formula(cur)?;
        if cur.eat_sym("@") {
            cur.expect_sym("[")?;
            let mut vars = Vec::new();
            if !cur.at_sym("]") {
                loop {
                    vars.push(Var(cur.ident()?));
                    if !cur.eat_sym(",") {
                        break;
                    }
                }
            }
            let res = Component::with_vars(f, vars);
            return match res {
                Ok(c) => {
                    cur.expect_sym("]")?;
                    Ok(c)
                }
                Err(e) => cur.error(e.to_string()),
            };
        }
        Ok(Component::new(f))
    }

    fn disj(&mut self, cur: &mut Cursor) -> Result<Formula> {
        let mut lhs = self.conj(cur)?;
        while cur.eat_sym("\\/") || cur.eat_sym("|") {
            let rhs = self.conj(cur)?;
            lhs = Formula::join(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conj(&mut self, cur: &mut Cursor) -> Result<Formula> {
        let mut lhs = self.unary(cur)?;
        loop {
            let c = if cur.eat_sym("&") {
                Connective::Strong
            } else if cur.eat_sym("/\\") {
                Connective::Meet
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary(cur)?;
            lhs = Formula::conn(c, lhs, rhs);
        }
    }

    fn unary(&mut self, cur: &mut Cursor) -> Result<Formula> {
        if cur.eat_sym("~") {
            return Ok(Formula::not(self.unary(cur)?));
        }
        if cur.eat_sym("(") {
            let f = self.formula(cur)?;
            cur.expect_sym(")")?;
            return Ok(f);
        }
        let name = match cur.peek().clone() {
            Tok::Ident(s) => s,
            other => return cur.error(format!("expected formula, found {}", describe(&other))),
        };
        match name.as_str() {
            "forall" | "exists" => {
                if self.mode == Mode::Modal {
                    return cur.error("quantifier in a modal formula");
                }
                cur.next();
                let v = self.variable(cur)?;
                cur.expect_sym(".")?;
                let body = Box::new(self.formula(cur)?);
                Ok(if name == "forall" { Formula::Forall(v, body) } else { Formula::Exists(v, body) })
            }
            "box" | "dia" => {
                if self.mode == Mode::FirstOrder {
                    return cur.error("modality in a first-order formula");
                }
                cur.next();
                let body = Box::new(self.unary(cur)?);
                Ok(if name == "box" { Formula::Necessity(body) } else { Formula::Possibility(body) })
            }
            "c" => {
                cur.next();
                cur.expect_sym("(")?;
                let v = cur.truth_value()?;
                cur.expect_sym(")")?;
                Ok(Formula::Const(v))
            }
            _ if matches!(cur.peek_at(1), Tok::Sym("=")) => {
                if self.mode == Mode::Modal {
                    return cur.error("equality in a modal formula");
                }
                let equality = match self.vocab {
                    Some(v) => v.has_equality(),
                    None => true,
                };
                if !equality {
                    return cur.error("equality is not enabled for this vocabulary");
                }
                let x = self.variable(cur)?;
                cur.expect_sym("=")?;
                let y = self.variable(cur)?;
                Ok(Formula::Eq(x, y))
            }
            _ => self.atom(cur, name),
        }
    }

    fn atom(&mut self, cur: &mut Cursor, name: String) -> Result<Formula> {
        let declared = match self.vocab {
            Some(v) => v.arity(&name),
            None => self.inferred.arity(&name),
        };
        if self.vocab.is_some() && declared.is_none() {
            return cur.error(format!("unknown predicate `{name}`"));
        }
        cur.next();
        let mut args = Vec::new();
        if cur.eat_sym("(") {
            loop {
                args.push(self.variable(cur)?);
                if !cur.eat_sym(",") {
                    break;
                }
            }
            cur.expect_sym(")")?;
        }
        if self.mode == Mode::Modal && !args.is_empty() {
            return cur.error(format!("`{name}`: modal formulas use propositional variables only"));
        }
        match declared {
            Some(a) if a != args.len() => {
                return cur.error(format!("predicate `{name}` expects {a} argument(s), found {}", args.len()))
            }
            Some(_) => {}
            None => {
                if let Err(e) = self.inferred.add(name.clone(), args.len()) {
                    return cur.error(e.to_string());
                }
            }
        }
        Ok(Formula::Atom(name, args))
    }

    fn variable(&mut self, cur: &mut Cursor) -> Result<Var> {
        let v = cur.ident()?;
        if KEYWORDS.contains(&v.as_str()) {
            return cur.error(format!("`{v}` is a keyword, not a variable"));
        }
        Ok(Var(v))
    }
}

fn finish<T>(cur: &Cursor, value: T) -> Result<T> {
    if cur.at_eof() {
        Ok(value)
    } else {
        cur.error(format!("unexpected {} after formula", describe(cur.peek())))
    }
}

/// Parses a formula against a declared vocabulary.
pub fn parse_formula(text: &str, vocab: &Vocabulary, mode: Mode) -> Result<Formula> {
    let mut cur = Cursor::new(text)?;
    let f = FormulaParser::new(vocab, mode).formula(&mut cur)?;
    finish(&cur, f)
}

/// Parses a component (`formula` or `formula @ [vars]`).
pub fn parse_component(text: &str, vocab: &Vocabulary, mode: Mode) -> Result<Component> {
    let mut cur = Cursor::new(text)?;
    let c = FormulaParser::new(vocab, mode).component(&mut cur)?;
    finish(&cur, c)
}

/// Parses a formula, inferring predicate arities from their first use.
pub fn parse_formula_open(text: &str, mode: Mode) -> Result<(Formula, Vocabulary)> {
    let mut cur = Cursor::new(text)?;
    let mut p = FormulaParser::inferring(mode);
    let f = p.formula(&mut cur)?;
    let f = finish(&cur, f)?;
    let mut vocab = p.into_vocabulary();
    vocab.set_equality(vocab.has_equality() && f.uses_equality());
    Ok((f, vocab))
}
