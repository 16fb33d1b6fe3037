//! Exact rational linear programming.
//!
//! A dense two-phase tableau simplex with Bland's anti-cycling rule. Every
//! optimization problem in the crate (breakpoints, trade programs, excess
//! returns, unbounded returns) is built with [`LinearProgram`] and solved by
//! [`solve_lp`]. Problems are small, so clarity wins over sparse tricks.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub usize);

/// Affine expression `sum(coef * var) + constant`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinExpr {
    terms: BTreeMap<usize, Rational>,
    constant: Rational,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(value: Rational) -> Self {
        Self {
            terms: BTreeMap::new(),
            constant: value,
        }
    }

    pub fn var(var: Var) -> Self {
        Self::term(var, Rational::one())
    }

    pub fn term(var: Var, coef: Rational) -> Self {
        let mut expr = Self::default();
        expr.add_term(var, coef);
        expr
    }

    pub fn add_term(&mut self, var: Var, coef: Rational) -> &mut Self {
        if coef.is_zero() {
            return self;
        }
        let slot = self.terms.entry(var.0).or_insert_with(Rational::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&var.0);
        }
        self
    }

    pub fn add_constant(&mut self, value: &Rational) -> &mut Self {
        self.constant += value;
        self
    }

    pub fn add_scaled(&mut self, other: &LinExpr, factor: &Rational) -> &mut Self {
        if factor.is_zero() {
            return self;
        }
        for (&var, coef) in &other.terms {
            self.add_term(Var(var), coef * factor);
        }
        self.constant += &other.constant * factor;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (Var, &Rational)> {
        self.terms.iter().map(|(v, c)| (Var(*v), c))
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coefficient(&self, var: Var) -> Rational {
        self.terms
            .get(&var.0)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, values: &[Rational]) -> Rational {
        let mut total = self.constant.clone();
        for (&var, coef) in &self.terms {
            total += coef * &values[var];
        }
        total
    }
}

impl From<Var> for LinExpr {
    fn from(var: Var) -> Self {
        LinExpr::var(var)
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(mut self, rhs: LinExpr) -> LinExpr {
        self.add_scaled(&rhs, &Rational::one());
        self
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(mut self, rhs: LinExpr) -> LinExpr {
        self.add_scaled(&rhs, &-Rational::one());
        self
    }
}

impl Neg for LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        LinExpr::new() - self
    }
}

impl Mul<&Rational> for LinExpr {
    type Output = LinExpr;
    fn mul(self, rhs: &Rational) -> LinExpr {
        let mut out = LinExpr::new();
        out.add_scaled(&self, rhs);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDef {
    pub name: String,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

/// `expr relation 0`
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub expr: LinExpr,
    pub relation: Relation,
}

impl Constraint {
    pub fn holds(&self, values: &[Rational]) -> bool {
        let value = self.expr.eval(values);
        match self.relation {
            Relation::Le => !value.is_positive(),
            Relation::Eq => value.is_zero(),
            Relation::Ge => !value.is_negative(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    sense: Sense,
    vars: Vec<VarDef>,
    constraints: Vec<Constraint>,
    objective: LinExpr,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        Self {
            sense,
            vars: Vec::new(),
            constraints: Vec::new(),
            objective: LinExpr::new(),
        }
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        lower: Option<Rational>,
        upper: Option<Rational>,
    ) -> Var {
        self.vars.push(VarDef {
            name: name.into(),
            lower,
            upper,
        });
        Var(self.vars.len() - 1)
    }

    /// Variable bounded to `[0, 1]`.
    pub fn add_unit_var(&mut self, name: impl Into<String>) -> Var {
        self.add_var(name, Some(Rational::zero()), Some(Rational::one()))
    }

    pub fn constrain(&mut self, lhs: LinExpr, relation: Relation, rhs: LinExpr) {
        self.constraints.push(Constraint {
            expr: lhs - rhs,
            relation,
        });
    }

    pub fn set_objective(&mut self, objective: LinExpr) {
        self.objective = objective;
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn vars(&self) -> &[VarDef] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &LinExpr {
        &self.objective
    }

    /// True when `values` satisfies every bound and constraint exactly.
    pub fn is_feasible(&self, values: &[Rational]) -> bool {
        values.len() == self.vars.len()
            && self.vars.iter().zip(values).all(|(def, x)| {
                def.lower.as_ref().is_none_or(|l| x >= l)
                    && def.upper.as_ref().is_none_or(|u| x <= u)
            })
            && self.constraints.iter().all(|c| c.holds(values))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub values: Vec<Rational>,
    pub objective: Rational,
}

impl LpSolution {
    pub fn value(&self, var: Var) -> &Rational {
        &self.values[var.0]
    }

    pub fn eval(&self, expr: &LinExpr) -> Rational {
        expr.eval(&self.values)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(sol) => Some(sol),
            _ => None,
        }
    }
}

/// How an original variable is expressed in non-negative tableau columns.
struct ColumnMap {
    offset: Rational,
    cols: Vec<(usize, Rational)>,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize, cost: &mut [Rational], cost_rhs: &mut Rational) {
        let inv = self.rows[row][col].recip();
        for value in self.rows[row].iter_mut() {
            if !value.is_zero() {
                *value *= &inv;
            }
        }
        self.rhs[row] *= &inv;
        let support: Vec<usize> = (0..self.ncols)
            .filter(|&j| !self.rows[row][j].is_zero())
            .collect();
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                self.rows[i][j] -= delta;
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !cost[col].is_zero() {
            let factor = cost[col].clone();
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                cost[j] -= delta;
            }
            *cost_rhs -= &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// Minimizes the cost row with Bland's rule. Returns false when unbounded.
    fn optimize(
        &mut self,
        cost: &mut [Rational],
        cost_rhs: &mut Rational,
        allowed: &[bool],
    ) -> bool {
        loop {
            let entering = (0..self.ncols).find(|&j| allowed[j] && cost[j].is_negative());
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = best else {
                return false;
            };
            self.pivot(row, col, cost, cost_rhs);
        }
    }
}

/// Solves `lp` exactly. Optimal solutions are basic and satisfy every
/// constraint with zero tolerance.
pub fn solve_lp(lp: &LinearProgram) -> LpOutcome {
    // Map original variables onto non-negative columns.
    let mut ncols = 0usize;
    let mut maps = Vec::with_capacity(lp.vars.len());
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for def in &lp.vars {
        let map = match (&def.lower, &def.upper) {
            (Some(l), Some(u)) if l > u => return LpOutcome::Infeasible,
            (Some(l), Some(u)) if l == u => ColumnMap {
                offset: l.clone(),
                cols: Vec::new(),
            },
            (Some(l), upper) => {
                let col = ncols;
                ncols += 1;
                if let Some(u) = upper {
                    bound_rows.push((col, u - l));
                }
                ColumnMap {
                    offset: l.clone(),
                    cols: vec![(col, Rational::one())],
                }
            }
            (None, Some(u)) => {
                let col = ncols;
                ncols += 1;
                ColumnMap {
                    offset: u.clone(),
                    cols: vec![(col, -Rational::one())],
                }
            }
            (None, None) => {
                let col = ncols;
                ncols += 2;
                ColumnMap {
                    offset: Rational::zero(),
                    cols: vec![(col, Rational::one()), (col + 1, -Rational::one())],
                }
            }
        };
        maps.push(map);
    }
    let structural = ncols;

    // Rows in structural columns: coefficients, relation, rhs.
    let mut raw: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for constraint in &lp.constraints {
        let mut coefs = vec![Rational::zero(); structural];
        let mut rhs = -constraint.expr.constant_term().clone();
        for (var, coef) in constraint.expr.terms() {
            let map = &maps[var.0];
            rhs -= coef * &map.offset;
            for (col, sign) in &map.cols {
                coefs[*col] += coef * sign;
            }
        }
        if coefs.iter().all(|c| c.is_zero()) {
            let ok = match constraint.relation {
                Relation::Le => !rhs.is_negative(),
                Relation::Eq => rhs.is_zero(),
                Relation::Ge => !rhs.is_positive(),
            };
            if !ok {
                return LpOutcome::Infeasible;
            }
            continue;
        }
        raw.push((coefs, constraint.relation, rhs));
    }
    for (col, bound) in bound_rows {
        let mut coefs = vec![Rational::zero(); structural];
        coefs[col] = Rational::one();
        raw.push((coefs, Relation::Le, bound));
    }
    for row in raw.iter_mut() {
        if row.2.is_negative() {
            for c in row.0.iter_mut() {
                *c = -c.clone();
            }
            row.2 = -row.2.clone();
            row.1 = match row.1 {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    // Slack, surplus and artificial columns.
    let m = raw.len();
    let mut slack_cols = 0;
    let mut artificial_cols = 0;
    for row in &raw {
        match row.1 {
            Relation::Le => slack_cols += 1,
            Relation::Ge => {
                slack_cols += 1;
                artificial_cols += 1;
            }
            Relation::Eq => artificial_cols += 1,
        }
    }
    let total = structural + slack_cols + artificial_cols;
    let first_artificial = structural + slack_cols;
    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        ncols: total,
    };
    let mut next_slack = structural;
    let mut next_art = first_artificial;
    for (coefs, relation, rhs) in raw {
        let mut row = coefs;
        row.resize(total, Rational::zero());
        let basic = match relation {
            Relation::Le => {
                row[next_slack] = Rational::one();
                next_slack += 1;
                next_slack - 1
            }
            Relation::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_art] = Rational::one();
                next_art += 1;
                next_art - 1
            }
            Relation::Eq => {
                row[next_art] = Rational::one();
                next_art += 1;
                next_art - 1
            }
        };
        tab.rows.push(row);
        tab.rhs.push(rhs);
        tab.basis.push(basic);
    }

    // Phase 1: minimize the sum of artificials.
    if artificial_cols > 0 {
        let mut cost = vec![Rational::zero(); total];
        let mut cost_rhs = Rational::zero();
        for (i, &b) in tab.basis.iter().enumerate() {
            if b >= first_artificial {
                for (c, a) in cost.iter_mut().zip(&tab.rows[i]).take(first_artificial) {
                    if !a.is_zero() {
                        *c -= a;
                    }
                }
                cost_rhs -= &tab.rhs[i];
            }
        }
        let allowed = vec![true; total];
        tab.optimize(&mut cost, &mut cost_rhs, &allowed);
        if !cost_rhs.is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-valued artificials out of the basis.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= first_artificial {
                let col = (0..first_artificial).find(|&j| !tab.rows[i][j].is_zero());
                match col {
                    Some(col) => {
                        let mut dummy = vec![Rational::zero(); total];
                        let mut dummy_rhs = Rational::zero();
                        tab.pivot(i, col, &mut dummy, &mut dummy_rhs);
                        i += 1;
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.rhs.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    // Phase 2 on the true objective (always minimized internally).
    let sign = match lp.sense {
        Sense::Minimize => Rational::one(),
        Sense::Maximize => -Rational::one(),
    };
    let mut base_cost = vec![Rational::zero(); total];
    for (var, coef) in lp.objective.terms() {
        for (col, s) in &maps[var.0].cols {
            base_cost[*col] += coef * s * &sign;
        }
    }
    let mut cost = base_cost.clone();
    let mut cost_rhs = Rational::zero();
    for (i, &b) in tab.basis.iter().enumerate() {
        if !base_cost[b].is_zero() {
            let factor = base_cost[b].clone();
            for (c, a) in cost.iter_mut().zip(&tab.rows[i]).take(total) {
                if !a.is_zero() {
                    *c -= &factor * a;
                }
            }
            cost_rhs -= &factor * &tab.rhs[i];
        }
    }
    let allowed: Vec<bool> = (0..total).map(|j| j < first_artificial).collect();
    if !tab.optimize(&mut cost, &mut cost_rhs, &allowed) {
        return LpOutcome::Unbounded;
    }

    let mut col_values = vec![Rational::zero(); total];
    for (i, &b) in tab.basis.iter().enumerate() {
        col_values[b] = tab.rhs[i].clone();
    }
    let values: Vec<Rational> = maps
        .iter()
        .map(|map| {
            let mut x = map.offset.clone();
            for (col, s) in &map.cols {
                x += &col_values[*col] * s;
            }
            x
        })
        .collect();
    let objective = lp.objective.eval(&values);
    LpOutcome::Optimal(LpSolution { values, objective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn x_le(bound: i64) -> (LinearProgram, Var) {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", Some(int(0)), None);
        lp.constrain(x.into(), Relation::Le, LinExpr::constant(int(bound)));
        lp.set_objective(x.into());
        (lp, x)
    }

    #[test]
    fn bounded_maximum() {
        let (lp, x) = x_le(3);
        let sol = solve_lp(&lp).optimal().unwrap();
        assert_eq!(sol.value(x), &int(3));
        assert_eq!(sol.objective, int(3));
    }

    #[test]
    fn infeasible_program() {
        let (lp, _) = x_le(-1);
        assert_eq!(solve_lp(&lp), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_program() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", Some(int(0)), None);
        let y = lp.add_var("y", None, None);
        lp.constrain(
            LinExpr::var(x) - LinExpr::var(y),
            Relation::Le,
            LinExpr::constant(int(1)),
        );
        lp.set_objective(x.into());
        assert_eq!(solve_lp(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn textbook_program_with_fractional_optimum() {
        // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", Some(int(0)), Some(int(3)));
        let y = lp.add_var("y", Some(int(0)), None);
        lp.constrain(
            LinExpr::var(x) + LinExpr::var(y),
            Relation::Le,
            LinExpr::constant(int(4)),
        );
        lp.constrain(
            LinExpr::var(x) + LinExpr::term(y, int(3)),
            Relation::Le,
            LinExpr::constant(int(6)),
        );
        lp.set_objective(LinExpr::term(x, int(3)) + LinExpr::term(y, int(2)));
        let sol = solve_lp(&lp).optimal().unwrap();
        assert_eq!(sol.objective, int(11));
        assert_eq!(sol.value(x), &int(3));
        assert_eq!(sol.value(y), &int(1));

        // min 2a + b  s.t. a + b = 5/2, a - b >= 1/2, free b
        let mut lp = LinearProgram::new(Sense::Minimize);
        let a = lp.add_var("a", Some(int(0)), None);
        let b = lp.add_var("b", None, None);
        lp.constrain(
            LinExpr::var(a) + LinExpr::var(b),
            Relation::Eq,
            LinExpr::constant(ratio(5, 2)),
        );
        lp.constrain(
            LinExpr::var(a) - LinExpr::var(b),
            Relation::Ge,
            LinExpr::constant(ratio(1, 2)),
        );
        lp.set_objective(LinExpr::term(a, int(2)) + LinExpr::var(b));
        let sol = solve_lp(&lp).optimal().unwrap();
        assert_eq!(sol.value(a), &ratio(3, 2));
        assert_eq!(sol.value(b), &int(1));
        assert_eq!(sol.objective, int(4));
    }

    #[test]
    fn fixed_and_redundant_rows() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", Some(int(2)), Some(int(2)));
        let y = lp.add_var("y", Some(int(0)), None);
        lp.constrain(LinExpr::var(y), Relation::Eq, LinExpr::var(x));
        lp.constrain(
            LinExpr::term(y, int(2)),
            Relation::Eq,
            LinExpr::term(x, int(2)),
        );
        lp.set_objective(y.into());
        let sol = solve_lp(&lp).optimal().unwrap();
        assert_eq!(sol.value(y), &int(2));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance; Bland's rule must terminate.
        let mut lp = LinearProgram::new(Sense::Minimize);
        let x: Vec<Var> = (0..4)
            .map(|i| lp.add_var(format!("x{i}"), Some(int(0)), None))
            .collect();
        let row = |lp: &mut LinearProgram, c: [Rational; 4], rhs: i64| {
            let mut e = LinExpr::new();
            for (v, coef) in x.iter().zip(c) {
                e.add_term(*v, coef);
            }
            lp.constrain(e, Relation::Le, LinExpr::constant(int(rhs)));
        };
        row(&mut lp, [ratio(1, 4), int(-60), ratio(-1, 25), int(9)], 0);
        row(&mut lp, [ratio(1, 2), int(-90), ratio(-1, 50), int(3)], 0);
        row(&mut lp, [int(0), int(0), int(1), int(0)], 1);
        let mut obj = LinExpr::new();
        for (v, c) in x
            .iter()
            .zip([ratio(-3, 4), int(150), ratio(-1, 50), int(6)])
        {
            obj.add_term(*v, c);
        }
        lp.set_objective(obj);
        let sol = solve_lp(&lp).optimal().unwrap();
        assert_eq!(sol.objective, ratio(-1, 20));
        assert!(lp.is_feasible(&sol.values));
    }
}
