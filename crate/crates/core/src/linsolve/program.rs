//! Piecewise-linear node programs compiled from good-tuple conditions.

use std::fmt;

use num_traits::{One, Zero};

use super::simplex::{LinearConstraint, Rel};
use crate::algebra::{fmt_rational, Algebra, Connective, Family, Rational};
use crate::error::{Error, Result};
use crate::infoset::Constraint;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Node {
    MinOf {
        out: usize,
        args: Vec<usize>,
    },
    MaxOf {
        out: usize,
        args: Vec<usize>,
    },
    /// `out = max(0, a + b − 1)`
    LukConj {
        out: usize,
        a: usize,
        b: usize,
    },
    /// `out = min(1, 1 − a + b)`
    LukImpl {
        out: usize,
        a: usize,
        b: usize,
    },
    /// `out = 1` if `a ≤ b`, else `b`
    GodelImpl {
        out: usize,
        a: usize,
        b: usize,
    },
    ConstEq {
        out: usize,
        value: Rational,
    },
    Same {
        a: usize,
        b: usize,
    },
}

/// A conjunction of linear constraints: one case of a node.
pub type CaseSystem = Vec<LinearConstraint>;

fn var(v: usize) -> Vec<(usize, Rational)> {
    vec![(v, Rational::one())]
}

fn diff(a: usize, b: usize) -> Vec<(usize, Rational)> {
    vec![(a, Rational::one()), (b, -Rational::one())]
}

/// `lhs (rel) rhs` for affine `rhs = Σ terms + k`, with `out` on the left.
fn affine(out: usize, rel: Rel, terms: &[(usize, i64)], k: Rational) -> LinearConstraint {
    let mut coeffs = var(out);
    coeffs.extend(terms.iter().map(|(v, c)| (*v, -Rational::from_integer((*c).into()))));
    LinearConstraint::new(coeffs, rel, k)
}

fn affine_gt(out: usize, terms: &[(usize, i64)], k: Rational) -> LinearConstraint {
    let mut coeffs = var(out);
    coeffs.extend(terms.iter().map(|(v, c)| (*v, -Rational::from_integer((*c).into()))));
    LinearConstraint::gt(coeffs, k)
}

/// A case of a node: condition, output coordinate, and the output as
/// `Σ terms + constant`.
type Piece = (CaseSystem, usize, Vec<(usize, i64)>, Rational);

impl Node {
    fn pieces(&self) -> Vec<Piece> {
        let zero = Rational::zero;
        let one = Rational::one;
        match self {
            Node::MinOf { out, args } | Node::MaxOf { out, args } => {
                let is_min = matches!(self, Node::MinOf { .. });
                args.iter()
                    .map(|&i| {
                        let cond = args
                            .iter()
                            .filter(|&&j| j != i)
                            .map(|&j| {
                                if is_min {
                                    LinearConstraint::new(diff(i, j), Rel::Le, zero())
                                } else {
                                    LinearConstraint::new(diff(j, i), Rel::Le, zero())
                                }
                            })
                            .collect();
                        (cond, *out, vec![(i, 1)], zero())
                    })
                    .collect()
            }
            Node::LukConj { out, a, b } => vec![
                (vec![LinearConstraint::new(vec![(*a, one()), (*b, one())], Rel::Le, one())], *out, vec![], zero()),
                (
                    vec![LinearConstraint::ge(vec![(*a, one()), (*b, one())], one())],
                    *out,
                    vec![(*a, 1), (*b, 1)],
                    -one(),
                ),
            ],
            Node::LukImpl { out, a, b } => vec![
                (vec![LinearConstraint::new(diff(*a, *b), Rel::Le, zero())], *out, vec![], one()),
                (vec![LinearConstraint::ge(diff(*a, *b), zero())], *out, vec![(*a, -1), (*b, 1)], one()),
            ],
            Node::GodelImpl { out, a, b } => vec![
                (vec![LinearConstraint::new(diff(*a, *b), Rel::Le, zero())], *out, vec![], one()),
                (vec![LinearConstraint::gt(diff(*a, *b), zero())], *out, vec![(*b, 1)], zero()),
            ],
            Node::ConstEq { out, value } => vec![(vec![], *out, vec![], value.clone())],
            Node::Same { a, b } => vec![(vec![], *a, vec![(*b, 1)], zero())],
        }
    }

    /// Alternative linear systems whose union is the graph of the node.
    pub fn cases(&self) -> Vec<CaseSystem> {
        self.pieces()
            .into_iter()
            .map(|(mut cond, out, terms, k)| {
                cond.push(affine(out, Rel::Eq, &terms, k));
                cond
            })
            .collect()
    }

    /// Alternative linear systems whose union is the complement of the graph.
    pub fn violation_cases(&self) -> Vec<CaseSystem> {
        let mut out = Vec::new();
        for (cond, o, terms, k) in self.pieces() {
            let mut below = cond.clone();
            below.push(affine(o, Rel::Lt, &terms, k.clone()));
            out.push(below);
            let mut above = cond;
            above.push(affine_gt(o, &terms, k));
            out.push(above);
        }
        out
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let one = Rational::one();
        let zero = Rational::zero();
        match self {
            Node::MinOf { out, args } => args.iter().map(|&i| &x[i]).min() == Some(&x[*out]),
            Node::MaxOf { out, args } => args.iter().map(|&i| &x[i]).max() == Some(&x[*out]),
            Node::LukConj { out, a, b } => {
                let s = &x[*a] + &x[*b] - &one;
                x[*out] == if s < zero { zero } else { s }
            }
            Node::LukImpl { out, a, b } => {
                let s = &one - &x[*a] + &x[*b];
                x[*out] == if s > one { one } else { s }
            }
            Node::GodelImpl { out, a, b } => x[*out] == if x[*a] <= x[*b] { one } else { x[*b].clone() },
            Node::ConstEq { out, value } => x[*out] == *value,
            Node::Same { a, b } => x[*a] == x[*b],
        }
    }

    pub fn is_single_case(&self) -> bool {
        match self {
            Node::ConstEq { .. } | Node::Same { .. } => true,
            Node::MinOf { args, .. } | Node::MaxOf { args, .. } => args.len() <= 1,
            _ => false,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |args: &[usize]| args.iter().map(|a| format!("x{a}")).collect::<Vec<_>>().join(", ");
        match self {
            Node::MinOf { out, args } => write!(f, "x{out} = min({})", list(args)),
            Node::MaxOf { out, args } => write!(f, "x{out} = max({})", list(args)),
            Node::LukConj { out, a, b } => write!(f, "x{out} = lconj(x{a}, x{b})"),
            Node::LukImpl { out, a, b } => write!(f, "x{out} = limp(x{a}, x{b})"),
            Node::GodelImpl { out, a, b } => write!(f, "x{out} = gimp(x{a}, x{b})"),
            Node::ConstEq { out, value } => write!(f, "x{out} = {}", fmt_rational(value)),
            Node::Same { a, b } => write!(f, "x{a} = x{b}"),
        }
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Translates good-tuple conditions into nodes for the Łukasiewicz or Gödel
/// algebra. Product conditions are not piecewise linear and are rejected.
pub fn compile(alg: &Algebra, constraints: &[Constraint]) -> Result<Vec<Node>> {
    let family = alg.family();
    if family == Family::Product {
        return Err(Error::UnsupportedAlgebra(
            "product conditions are not piecewise linear; only evaluation is available".into(),
        ));
    }
    let luk = family == Family::Lukasiewicz;
    constraints
        .iter()
        .map(|c| {
            Ok(match c {
                Constraint::Conn { out, op, a, b } => {
                    let (out, a, b) = (*out, *a, *b);
                    match op {
                        Connective::Meet => Node::MinOf { out, args: vec![a, b] },
                        Connective::Join => Node::MaxOf { out, args: vec![a, b] },
                        Connective::Strong if luk => Node::LukConj { out, a, b },
                        Connective::Strong => Node::MinOf { out, args: vec![a, b] },
                        Connective::Implies if luk => Node::LukImpl { out, a, b },
                        Connective::Implies => Node::GodelImpl { out, a, b },
                    }
                }
                Constraint::Inf { out, args } if args.is_empty() => Node::ConstEq { out: *out, value: Rational::one() },
                Constraint::Sup { out, args } if args.is_empty() => {
                    Node::ConstEq { out: *out, value: Rational::zero() }
                }
                Constraint::Inf { out, args } => Node::MinOf { out: *out, args: args.clone() },
                Constraint::Sup { out, args } => Node::MaxOf { out: *out, args: args.clone() },
                Constraint::Const { out, value } => Node::ConstEq { out: *out, value: value.as_rational().clone() },
                Constraint::Same { a, b } => Node::Same { a: *a, b: *b },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::simplex::lp_feasible;
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn grid3() -> Vec<Vec<Rational>> {
        let axis: Vec<Rational> = (0..=8).map(|k| q(k, 8)).collect();
        let mut out = Vec::new();
        for a in &axis {
            for b in &axis {
                for c in &axis {
                    out.push(vec![a.clone(), b.clone(), c.clone()]);
                }
            }
        }
        out
    }

    #[test]
    fn cases_cover_exactly_the_graph() {
        let nodes = [
            Node::MinOf { out: 2, args: vec![0, 1] },
            Node::MaxOf { out: 2, args: vec![0, 1] },
            Node::LukConj { out: 2, a: 0, b: 1 },
            Node::LukImpl { out: 2, a: 0, b: 1 },
            Node::GodelImpl { out: 2, a: 0, b: 1 },
            Node::ConstEq { out: 2, value: q(1, 2) },
            Node::Same { a: 2, b: 0 },
        ];
        for node in &nodes {
            let cases = node.cases();
            let viol = node.violation_cases();
            for p in grid3() {
                let in_case = cases.iter().any(|c| c.iter().all(|l| l.holds(&p)));
                let in_viol = viol.iter().any(|c| c.iter().all(|l| l.holds(&p)));
                assert_eq!(in_case, node.holds(&p), "{node} at {p:?}");
                assert_eq!(in_viol, !node.holds(&p), "{node} at {p:?}");
            }
        }
    }

    #[test]
    fn compile_examples() {
        use crate::algebra::TruthValue;
        let c = vec![
            Constraint::Conn { out: 2, op: Connective::Strong, a: 0, b: 1 },
            Constraint::Inf { out: 3, args: vec![] },
            Constraint::Const { out: 4, value: TruthValue::ratio(1, 2).unwrap() },
        ];
        let l = compile(&Algebra::lukasiewicz(), &c).unwrap();
        assert_eq!(l[0], Node::LukConj { out: 2, a: 0, b: 1 });
        assert_eq!(l[1], Node::ConstEq { out: 3, value: q(1, 1) });
        let g = compile(&Algebra::godel(), &c).unwrap();
        assert_eq!(g[0], Node::MinOf { out: 2, args: vec![0, 1] });
        assert!(matches!(compile(&Algebra::product(), &c), Err(Error::UnsupportedAlgebra(_))));
        // x + y ≤ 1 ∧ z = 0 is one of the two conjunction cases.
        let cases = l[0].cases();
        assert_eq!(cases.len(), 2);
        assert!(lp_feasible(3, &cases[0]).is_some());
    }
}
