use std::fmt;

use super::Formula;

fn needs_parens(f: &Formula) -> bool {
    match f {
        Formula::Conn(..) => f.as_negation().is_none(),
        Formula::Forall(..) | Formula::Exists(..) => true,
        _ => false,
    }
}

fn operand(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if needs_parens(f) {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p, args) if args.is_empty() => out.write_str(p),
            Formula::Atom(p, args) => {
                let args: Vec<_> = args.iter().map(|v| v.as_str()).collect();
                write!(out, "{p}({})", args.join(", "))
            }
            Formula::Eq(x, y) => write!(out, "{x} = {y}"),
            Formula::Const(v) => write!(out, "c({v})"),
            Formula::Conn(c, a, b) => {
                if let Some(inner) = self.as_negation() {
                    out.write_str("~")?;
                    return if matches!(inner, Formula::Eq(..)) {
                        write!(out, "({inner})")
                    } else {
                        operand(inner, out)
                    };
                }
                operand(a, out)?;
                write!(out, " {} ", c.symbol())?;
                operand(b, out)
            }
            Formula::Forall(v, b) => write!(out, "forall {v}. {b}"),
            Formula::Exists(v, b) => write!(out, "exists {v}. {b}"),
            Formula::Necessity(b) => {
                out.write_str("box ")?;
                operand(b, out)
            }
            Formula::Possibility(b) => {
                out.write_str("dia ")?;
                operand(b, out)
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TruthValue;

    #[test]
    fn prints_compactly() {
        let a = Formula::prop("A");
        let b = Formula::prop("B");
        assert_eq!(Formula::join(a.clone(), b.clone()).to_string(), "A \\/ B");
        assert_eq!(Formula::strong(a.clone(), Formula::not(a.clone())).to_string(), "A & ~A");
        assert_eq!(Formula::not(Formula::meet(a.clone(), b.clone())).to_string(), "~(A /\\ B)");
        assert_eq!(
            Formula::exists("x", Formula::exists("y", Formula::not(Formula::Eq("x".into(), "y".into())))).to_string(),
            "exists x. exists y. ~(x = y)"
        );
        assert_eq!(Formula::nec(Formula::implies(a.clone(), b)).to_string(), "box (A -> B)");
        assert_eq!(Formula::Const(TruthValue::ratio(2, 4).unwrap()).to_string(), "c(1/2)");
    }
}
