//! Dense two-phase simplex over exact rationals, Bland's rule throughout.

use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Le,
    Lt,
    Eq,
}

/// `Σ coeff·x (rel) bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearConstraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub rel: Rel,
    pub bound: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<(usize, Rational)>, rel: Rel, bound: Rational) -> Self {
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(coeffs.len());
        let mut sorted = coeffs;
        sorted.sort_by_key(|(v, _)| *v);
        for (v, c) in sorted {
            match merged.last_mut() {
                Some((w, d)) if *w == v => *d += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        LinearConstraint { coeffs: merged, rel, bound }
    }

    /// `Σ coeff·x ≥ bound`
    pub fn ge(coeffs: Vec<(usize, Rational)>, bound: Rational) -> Self {
        Self::new(coeffs.into_iter().map(|(v, c)| (v, -c)).collect(), Rel::Le, -bound)
    }

    /// `Σ coeff·x > bound`
    pub fn gt(coeffs: Vec<(usize, Rational)>, bound: Rational) -> Self {
        Self::new(coeffs.into_iter().map(|(v, c)| (v, -c)).collect(), Rel::Lt, -bound)
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().map(|(v, c)| c * &x[*v]).sum();
        match self.rel {
            Rel::Le => lhs <= self.bound,
            Rel::Lt => lhs < self.bound,
            Rel::Eq => lhs == self.bound,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj · y` over columns `< active`; returns the optimum, or
    /// `None` if unbounded.
    fn maximize(&mut self, obj: &[Rational], active: usize) -> Option<Rational> {
        let rhs = self.cols;
        loop {
            let mut reduced = vec![Rational::zero(); active];
            for (j, r) in reduced.iter_mut().enumerate() {
                *r = -obj[j].clone();
            }
            for (i, &b) in self.basis.iter().enumerate() {
                if obj[b].is_zero() {
                    continue;
                }
                for (j, r) in reduced.iter_mut().enumerate() {
                    if !self.rows[i][j].is_zero() {
                        *r += &obj[b] * &self.rows[i][j];
                    }
                }
            }
            let Some(enter) = (0..active).find(|&j| reduced[j].is_negative()) else {
                let value: Rational = self.basis.iter().enumerate().map(|(i, &b)| &obj[b] * &self.rows[i][rhs]).sum();
                return Some(value);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[rhs] / &row[enter];
                    let better = match &leave {
                        None => true,
                        Some((k, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (r, _) = leave?;
            self.pivot(r, enter);
        }
    }
}

/// A point of `[0,1]^n` satisfying every constraint, or `None`. Strict
/// inequalities are decided exactly by maximizing a common slack `t` on them.
pub fn lp_feasible(n: usize, constraints: &[LinearConstraint]) -> Option<Vec<Rational>> {
    let mut used = vec![false; n];
    for c in constraints {
        for (v, _) in &c.coeffs {
            used[*v] = true;
        }
    }
    // Constant rows need no variables.
    for c in constraints.iter().filter(|c| c.coeffs.is_empty()) {
        let zero = Rational::zero();
        let ok = match c.rel {
            Rel::Le => zero <= c.bound,
            Rel::Lt => zero < c.bound,
            Rel::Eq => zero == c.bound,
        };
        if !ok {
            return None;
        }
    }
    let vars: Vec<usize> = (0..n).filter(|&v| used[v]).collect();
    let mut col_of = vec![usize::MAX; n];
    for (k, &v) in vars.iter().enumerate() {
        col_of[v] = k;
    }
    let nv = vars.len();
    let has_strict = constraints.iter().any(|c| c.rel == Rel::Lt);
    let t_col = nv;
    let nx = nv + usize::from(has_strict);

    // Rows: the given constraints, then x ≤ 1 for each used variable, then t ≤ 1.
    struct Row {
        coeffs: Vec<(usize, Rational)>,
        eq: bool,
        bound: Rational,
    }
    let mut rows: Vec<Row> = Vec::new();
    for c in constraints.iter().filter(|c| !c.coeffs.is_empty()) {
        let mut coeffs: Vec<(usize, Rational)> = c.coeffs.iter().map(|(v, a)| (col_of[*v], a.clone())).collect();
        if c.rel == Rel::Lt {
            coeffs.push((t_col, Rational::one()));
        }
        rows.push(Row { coeffs, eq: c.rel == Rel::Eq, bound: c.bound.clone() });
    }
    for k in 0..nx {
        rows.push(Row { coeffs: vec![(k, Rational::one())], eq: false, bound: Rational::one() });
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| !r.eq).count();
    // Artificial columns for rows whose slack cannot start in the basis.
    let needs_art: Vec<bool> = rows.iter().map(|r| r.eq || r.bound.is_negative()).collect();
    let n_art = needs_art.iter().filter(|b| **b).count();
    let cols = nx + n_slack + n_art;
    let mut tab = Tableau { rows: Vec::with_capacity(m), basis: vec![0; m], cols };
    let (mut slack_at, mut art_at) = (nx, nx + n_slack);
    for (i, r) in rows.iter().enumerate() {
        let mut line = vec![Rational::zero(); cols + 1];
        for (k, a) in &r.coeffs {
            line[*k] += a;
        }
        let mut slack_col = None;
        if !r.eq {
            line[slack_at] = Rational::one();
            slack_col = Some(slack_at);
            slack_at += 1;
        }
        line[cols] = r.bound.clone();
        if r.bound.is_negative() {
            for v in line.iter_mut() {
                *v = -v.clone();
            }
        }
        if needs_art[i] {
            line[art_at] = Rational::one();
            tab.basis[i] = art_at;
            art_at += 1;
        } else {
            tab.basis[i] = slack_col.expect("inequality row");
        }
        tab.rows.push(line);
    }

    if n_art > 0 {
        let mut obj = vec![Rational::zero(); cols];
        for o in obj.iter_mut().skip(nx + n_slack) {
            *o = -Rational::one();
        }
        let best = tab.maximize(&obj, cols).expect("phase one is bounded");
        if best.is_negative() {
            return None;
        }
        // Drive remaining artificials out of the basis.
        let first_art = nx + n_slack;
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= first_art {
                match (0..first_art).find(|&j| !tab.rows[i][j].is_zero()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for row in tab.rows.iter_mut() {
            let rhs = row[cols].clone();
            row.truncate(first_art);
            row.push(rhs);
        }
        tab.cols = first_art;
    }

    if has_strict {
        let mut obj = vec![Rational::zero(); tab.cols];
        obj[t_col] = Rational::one();
        let best = tab.maximize(&obj, tab.cols).expect("t is bounded");
        if !best.is_positive() {
            return None;
        }
    }

    let rhs = tab.cols;
    let mut values = vec![Rational::zero(); nx];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < nx {
            values[b] = tab.rows[i][rhs].clone();
        }
    }
    let mut out = vec![Rational::zero(); n];
    for (k, &v) in vars.iter().enumerate() {
        out[v] = values[k].clone();
    }
    debug_assert!(constraints.iter().all(|c| c.holds(&out)));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn one() -> Rational {
        Rational::one()
    }

    #[test]
    fn examples() {
        // x = 1, y < 1, x ≤ y
        let sys = vec![
            LinearConstraint::new(vec![(0, one())], Rel::Eq, one()),
            LinearConstraint::new(vec![(1, one())], Rel::Lt, one()),
            LinearConstraint::new(vec![(0, one()), (1, -one())], Rel::Le, Rational::zero()),
        ];
        assert!(lp_feasible(2, &sys).is_none());

        let sys = vec![LinearConstraint::new(vec![(0, one()), (1, one())], Rel::Eq, one())];
        let w = lp_feasible(2, &sys).unwrap();
        assert_eq!(&w[0] + &w[1], one());

        let sys = vec![
            LinearConstraint::new(vec![(0, one()), (1, -one())], Rel::Lt, Rational::zero()),
            LinearConstraint::new(vec![(1, one()), (0, -one())], Rel::Lt, Rational::zero()),
        ];
        assert!(lp_feasible(2, &sys).is_none());
    }

    #[test]
    fn strict_bounds_and_open_intervals() {
        // 1/2 ≤ x < 4/5 and x > 3/4
        let sys = vec![
            LinearConstraint::ge(vec![(0, one())], q(1, 2)),
            LinearConstraint::new(vec![(0, one())], Rel::Lt, q(4, 5)),
            LinearConstraint::gt(vec![(0, one())], q(3, 4)),
        ];
        let w = lp_feasible(1, &sys).unwrap();
        assert!(w[0] > q(3, 4) && w[0] < q(4, 5));
        // x > 1 is impossible inside the unit cube.
        assert!(lp_feasible(1, &[LinearConstraint::gt(vec![(0, one())], one())]).is_none());
        // Constant rows.
        assert!(lp_feasible(1, &[LinearConstraint::new(vec![], Rel::Lt, Rational::zero())]).is_none());
        assert!(lp_feasible(0, &[]).is_some());
    }

    fn arb_system() -> impl Strategy<Value = Vec<LinearConstraint>> {
        let row =
            (prop::collection::vec(-3i64..=3, 2), prop::sample::select(vec![Rel::Le, Rel::Lt, Rel::Eq]), -4i64..=4)
                .prop_map(|(c, rel, b)| {
                    LinearConstraint::new(c.into_iter().enumerate().map(|(v, a)| (v, q(a, 1))).collect(), rel, q(b, 2))
                });
        prop::collection::vec(row, 1..5)
    }

    proptest! {
        #[test]
        fn witnesses_are_exact(sys in arb_system()) {
            if let Some(w) = lp_feasible(2, &sys) {
                prop_assert!(sys.iter().all(|c| c.holds(&w)));
                prop_assert!(w.iter().all(|v| *v >= Rational::zero() && *v <= one()));
            } else {
                // No point of a fine grid satisfies the system.
                for i in 0..=24 {
                    for j in 0..=24 {
                        let p = vec![q(i, 24), q(j, 24)];
                        prop_assert!(!sys.iter().all(|c| c.holds(&p)));
                    }
                }
            }
        }
    }
}
