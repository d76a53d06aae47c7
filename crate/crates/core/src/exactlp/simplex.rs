//! Exact two-phase primal simplex.
//!
//! Problems are presolved before any tableau is built: equations (including
//! coordinate fixings) are eliminated by exact Gaussian substitution,
//! single-variable rows become variable bounds, and only the remaining
//! general rows enter a dense tableau. Extended formulations are dominated
//! by equations and nonnegativity rows, so the tableau is usually far
//! smaller than the input system.

use crate::error::{Error, Result};
use crate::exactlp::system::LinSystem;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility<S> {
    Feasible(Vec<S>),
    Infeasible,
}

impl<S> Feasibility<S> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome<S> {
    Optimal { value: S, witness: Vec<S> },
    Infeasible,
    Unbounded,
}

impl<S> LpOutcome<S> {
    pub fn value(&self) -> Option<&S> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Entering-variable rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Smallest-index rule throughout. Never cycles.
    #[default]
    Bland,
    /// Largest reduced cost, falling back to Bland's rule for the rest of
    /// the solve after a run of degenerate pivots.
    DantzigThenBland,
}

const DEGENERATE_RUN_LIMIT: usize = 50;

/// Decides whether `system` has a point agreeing with `fixings`.
pub fn lp_feasible<S: Scalar>(
    system: &LinSystem<S>,
    fixings: &[(usize, S)],
) -> Result<Feasibility<S>> {
    let lp = PreparedLp::new(system, fixings)?;
    Ok(match lp.witness() {
        Some(w) => Feasibility::Feasible(w),
        None => Feasibility::Infeasible,
    })
}

/// Maximizes `objective · x` over `system`.
pub fn lp_optimize<S: Scalar>(system: &LinSystem<S>, objective: &[S]) -> Result<LpOutcome<S>> {
    if objective.len() != system.dimension() {
        return Err(Error::MalformedSystem(format!(
            "objective has length {} but the system has dimension {}",
            objective.len(),
            system.dimension()
        )));
    }
    PreparedLp::new(system, &[])?.maximize(objective)
}

/// Sparse affine form `Σ c_j x_j + constant` with sorted indices.
#[derive(Debug, Clone)]
struct Affine<S> {
    terms: Vec<(usize, S)>,
    constant: S,
}

impl<S: Scalar> Affine<S> {
    fn coefficient(&self, var: usize) -> Option<&S> {
        self.terms
            .binary_search_by_key(&var, |(i, _)| *i)
            .ok()
            .map(|k| &self.terms[k].1)
    }

    /// `self + factor * other`, dropping `skip` from `self` first.
    fn add_scaled(&self, skip: Option<usize>, other: &Affine<S>, factor: &S) -> Affine<S> {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            let take_a = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (Some((i, _)), Some((j, _))) => {
                    if i == j {
                        let (i, x) = a.next().unwrap();
                        let (_, y) = b.next().unwrap();
                        if Some(*i) != skip {
                            let v = x.add_ref(&y.mul_ref(factor));
                            if !v.is_zero() {
                                out.push((*i, v));
                            }
                        } else {
                            let v = y.mul_ref(factor);
                            if !v.is_zero() {
                                out.push((*i, v));
                            }
                        }
                        continue;
                    }
                    i < j
                }
            };
            if take_a {
                let (i, x) = a.next().unwrap();
                if Some(*i) != skip {
                    out.push((*i, x.clone()));
                }
            } else {
                let (j, y) = b.next().unwrap();
                out.push((*j, y.mul_ref(factor)));
            }
        }
        Affine {
            terms: out,
            constant: self.constant.add_ref(&other.constant.mul_ref(factor)),
        }
    }

    fn eval(&self, x: &[S]) -> S {
        self.terms
            .iter()
            .fold(self.constant.clone(), |acc, (i, c)| acc + c.mul_ref(&x[*i]))
    }
}

/// How an original free variable is expressed through tableau columns.
#[derive(Debug, Clone)]
enum VarMap<S> {
    Pivot,
    /// Occurs in no row; any value is feasible.
    Unconstrained,
    Lower { col: usize, bound: S },
    Upper { col: usize, bound: S },
    Split { pos: usize, neg: usize },
}

/// Equation elimination shared by [`PreparedLp`] and Fourier–Motzkin.
#[derive(Debug, Clone)]
pub(crate) struct Substitution<S> {
    /// `pivot_of[v]` is the expression for `v` when `v` was eliminated.
    pivot_of: Vec<Option<Affine<S>>>,
}

impl<S: Scalar> Substitution<S> {
    /// Eliminates the equations `Σ terms = rhs`, choosing pivots by
    /// `priority` (smaller is preferred). Returns `None` when the equations
    /// are inconsistent.
    pub(crate) fn eliminate<'a>(
        dimension: usize,
        equations: impl IntoIterator<Item = (&'a [(usize, S)], &'a S)>,
        priority: impl Fn(usize) -> usize,
    ) -> Option<Self> {
        let mut pivot_of: Vec<Option<Affine<S>>> = vec![None; dimension];
        let mut order: Vec<usize> = Vec::new();
        for (terms, rhs) in equations {
            let mut eq = Affine { terms: Vec::new(), constant: -rhs.clone() };
            for (v, c) in terms {
                let single = Affine { terms: vec![(*v, S::one())], constant: S::zero() };
                eq = eq.add_scaled(None, &single, c);
            }
            let reduced = reduce(&eq, &pivot_of);
            if reduced.terms.is_empty() {
                if reduced.constant.is_zero() {
                    continue;
                }
                return None;
            }
            let (p, coeff) = reduced
                .terms
                .iter()
                .min_by_key(|(v, _)| (priority(*v), *v))
                .map(|(v, c)| (*v, c.clone()))
                .unwrap();
            // coeff * x_p + rest = 0  =>  x_p = -(rest) / coeff
            let factor = -(S::one().div_ref(&coeff));
            let zero = Affine { terms: Vec::new(), constant: S::zero() };
            let expr = zero.add_scaled(None, &reduced, &factor);
            let expr = Affine {
                terms: expr.terms.into_iter().filter(|(v, _)| *v != p).collect(),
                constant: expr.constant,
            };
            for q in &order {
                let e = pivot_of[*q].as_ref().unwrap();
                if let Some(c) = e.coefficient(p).cloned() {
                    pivot_of[*q] = Some(e.add_scaled(Some(p), &expr, &c));
                }
            }
            pivot_of[p] = Some(expr);
            order.push(p);
        }
        Some(Substitution { pivot_of })
    }

    pub(crate) fn is_pivot(&self, v: usize) -> bool {
        self.pivot_of[v].is_some()
    }

    /// Rewrites `Σ terms + constant` in non-pivot variables.
    pub(crate) fn apply(&self, terms: &[(usize, S)], constant: S) -> (Vec<(usize, S)>, S) {
        let a = reduce(&Affine { terms: terms.to_vec(), constant }, &self.pivot_of);
        (a.terms, a.constant)
    }

    pub(crate) fn expression(&self, v: usize) -> Option<(&[(usize, S)], &S)> {
        self.pivot_of[v].as_ref().map(|a| (a.terms.as_slice(), &a.constant))
    }

    /// Fills in pivot variables of `x` from the free ones.
    pub(crate) fn complete(&self, x: &mut [S]) {
        for v in 0..x.len() {
            if let Some(e) = &self.pivot_of[v] {
                x[v] = e.eval(x);
            }
        }
    }
}

fn reduce<S: Scalar>(a: &Affine<S>, pivot_of: &[Option<Affine<S>>]) -> Affine<S> {
    let mut out = Affine {
        terms: Vec::with_capacity(a.terms.len()),
        constant: a.constant.clone(),
    };
    let mut pending: Vec<(&Affine<S>, &S)> = Vec::new();
    for (v, c) in &a.terms {
        match &pivot_of[*v] {
            Some(e) => pending.push((e, c)),
            None => out.terms.push((*v, c.clone())),
        }
    }
    for (e, c) in pending {
        out = out.add_scaled(None, e, c);
    }
    out
}

#[derive(Debug, Clone)]
struct Tableau<S> {
    a: Vec<Vec<S>>,
    rhs: Vec<S>,
    basis: Vec<usize>,
    obj: Vec<S>,
    obj_rhs: S,
}

enum Step {
    Optimal,
    Unbounded,
}

impl<S: Scalar> Tableau<S> {
    fn cols(&self) -> usize {
        self.obj.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = S::one().div_ref(&self.a[r][c]);
        let nz: Vec<usize> = (0..self.cols()).filter(|&j| !self.a[r][j].is_zero()).collect();
        for &j in &nz {
            self.a[r][j] = self.a[r][j].mul_ref(&inv);
        }
        self.rhs[r] = self.rhs[r].mul_ref(&inv);
        let (prow, prhs) = (self.a[r].clone(), self.rhs[r].clone());
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            let row = &mut self.a[i];
            for &j in &nz {
                row[j] = row[j].sub_ref(&f.mul_ref(&prow[j]));
            }
            self.rhs[i] = self.rhs[i].sub_ref(&f.mul_ref(&prhs));
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &nz {
                self.obj[j] = self.obj[j].sub_ref(&f.mul_ref(&prow[j]));
            }
            self.obj_rhs = self.obj_rhs.sub_ref(&f.mul_ref(&prhs));
        }
        self.basis[r] = c;
    }

    /// Loads `costs` as the objective and prices out the basis.
    fn set_objective(&mut self, costs: Vec<S>) {
        self.obj = costs;
        self.obj_rhs = S::zero();
        for r in 0..self.a.len() {
            let cb = self.obj[self.basis[r]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.obj.len() {
                if !self.a[r][j].is_zero() {
                    self.obj[j] = self.obj[j].sub_ref(&cb.mul_ref(&self.a[r][j]));
                }
            }
            self.obj_rhs = self.obj_rhs.sub_ref(&cb.mul_ref(&self.rhs[r]));
        }
    }

    fn value(&self) -> S {
        -self.obj_rhs.clone()
    }

    fn leaving_row(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, S)> = None;
        for i in 0..self.a.len() {
            if !self.a[i][c].is_positive() {
                continue;
            }
            let ratio = self.rhs[i].div_ref(&self.a[i][c]);
            best = match best {
                None => Some((i, ratio)),
                Some((k, r)) => {
                    if ratio < r || (ratio == r && self.basis[i] < self.basis[k]) {
                        Some((i, ratio))
                    } else {
                        Some((k, r))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    fn run(&mut self, rule: PivotRule) -> Step {
        let mut bland = rule == PivotRule::Bland;
        let mut degenerate_run = 0usize;
        loop {
            let entering = if bland {
                (0..self.cols()).find(|&j| self.obj[j].is_positive())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..self.cols() {
                    if self.obj[j].is_positive()
                        && best.is_none_or(|b| self.obj[j] > self.obj[b])
                    {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(c) = entering else {
                return Step::Optimal;
            };
            let Some(r) = self.leaving_row(c) else {
                return Step::Unbounded;
            };
            if self.rhs[r].is_zero() {
                degenerate_run += 1;
                if degenerate_run > DEGENERATE_RUN_LIMIT {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, c);
        }
    }
}

/// A presolved LP whose feasible region has been settled by phase one.
/// Objectives can then be maximized repeatedly from the same feasible basis.
#[derive(Debug, Clone)]
pub struct PreparedLp<S> {
    dimension: usize,
    subst: Substitution<S>,
    vars: Vec<VarMap<S>>,
    structural: usize,
    /// `None` when infeasible.
    tableau: Option<Tableau<S>>,
    rule: PivotRule,
}

impl<S: Scalar> PreparedLp<S> {
    pub fn new(system: &LinSystem<S>, fixings: &[(usize, S)]) -> Result<Self> {
        Self::with_rule(system, fixings, PivotRule::default())
    }

    pub fn with_rule(
        system: &LinSystem<S>,
        fixings: &[(usize, S)],
        rule: PivotRule,
    ) -> Result<Self> {
        let n = system.dimension();
        for (i, _) in fixings {
            if *i >= n {
                return Err(Error::MalformedSystem(format!(
                    "fixing index {i} out of range for dimension {n}"
                )));
            }
        }
        let mut ineq_occ = vec![0usize; n];
        for c in system.inequalities() {
            for (v, _) in c.terms() {
                ineq_occ[*v] += 1;
            }
        }
        let fixing_terms: Vec<(Vec<(usize, S)>, S)> = fixings
            .iter()
            .map(|(i, v)| (vec![(*i, S::one())], v.clone()))
            .collect();
        let equations = system
            .equations()
            .map(|c| (c.terms(), &c.rhs))
            .chain(fixing_terms.iter().map(|(t, v)| (t.as_slice(), v)));
        let infeasible = |subst| PreparedLp {
            dimension: n,
            subst,
            vars: Vec::new(),
            structural: 0,
            tableau: None,
            rule,
        };
        let Some(subst) = Substitution::eliminate(n, equations, |v| ineq_occ[v]) else {
            return Ok(infeasible(Substitution { pivot_of: vec![None; n] }));
        };

        // Substitute into the inequalities and split off variable bounds.
        let mut lower: Vec<Option<S>> = vec![None; n];
        let mut upper: Vec<Option<S>> = vec![None; n];
        let mut general: Vec<(Vec<(usize, S)>, S)> = Vec::new();
        let mut occurs = vec![false; n];
        for c in system.inequalities() {
            let (terms, constant) = subst.apply(c.terms(), S::zero());
            let h = c.rhs.sub_ref(&constant);
            match terms.len() {
                0 => {
                    if h.is_negative() {
                        return Ok(infeasible(subst));
                    }
                }
                1 => {
                    let (v, a) = &terms[0];
                    occurs[*v] = true;
                    let bound = h.div_ref(a);
                    if a.is_positive() {
                        if upper[*v].as_ref().is_none_or(|u| bound < *u) {
                            upper[*v] = Some(bound);
                        }
                    } else if lower[*v].as_ref().is_none_or(|l| bound > *l) {
                        lower[*v] = Some(bound);
                    }
                }
                _ => {
                    for (v, _) in &terms {
                        occurs[*v] = true;
                    }
                    general.push((terms, h));
                }
            }
        }
        for v in 0..n {
            if let (Some(l), Some(u)) = (&lower[v], &upper[v]) {
                if l > u {
                    return Ok(infeasible(subst));
                }
            }
        }

        let mut vars: Vec<VarMap<S>> = Vec::with_capacity(n);
        let mut structural = 0usize;
        let mut next = || {
            structural += 1;
            structural - 1
        };
        for v in 0..n {
            let m = if subst.is_pivot(v) {
                VarMap::Pivot
            } else if !occurs[v] {
                VarMap::Unconstrained
            } else if let Some(l) = &lower[v] {
                if let Some(u) = &upper[v] {
                    // w <= u - l as a general row over the shifted column.
                    general.push((vec![(v, S::one())], u.clone()));
                }
                VarMap::Lower { col: next(), bound: l.clone() }
            } else if let Some(u) = &upper[v] {
                VarMap::Upper { col: next(), bound: u.clone() }
            } else {
                VarMap::Split { pos: next(), neg: next() }
            };
            vars.push(m);
        }

        // Rows in column space: Σ a w <= h.
        let m = general.len();
        let mut rows: Vec<Vec<S>> = Vec::with_capacity(m);
        let mut rhs: Vec<S> = Vec::with_capacity(m);
        for (terms, h) in &general {
            let mut row = vec![S::zero(); structural + m];
            let mut h = h.clone();
            for (v, a) in terms {
                match &vars[*v] {
                    VarMap::Lower { col, bound } => {
                        row[*col] = row[*col].add_ref(a);
                        h = h.sub_ref(&a.mul_ref(bound));
                    }
                    VarMap::Upper { col, bound } => {
                        row[*col] = row[*col].sub_ref(a);
                        h = h.sub_ref(&a.mul_ref(bound));
                    }
                    VarMap::Split { pos, neg } => {
                        row[*pos] = row[*pos].add_ref(a);
                        row[*neg] = row[*neg].sub_ref(a);
                    }
                    VarMap::Pivot | VarMap::Unconstrained => unreachable!(),
                }
            }
            rows.push(row);
            rhs.push(h);
        }
        for (i, row) in rows.iter_mut().enumerate() {
            row[structural + i] = S::one();
        }

        let tableau = phase_one(rows, rhs, structural, rule);
        Ok(PreparedLp { dimension: n, subst, vars, structural, tableau, rule })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_feasible(&self) -> bool {
        self.tableau.is_some()
    }

    /// Number of rows and columns of the presolved tableau.
    pub fn tableau_shape(&self) -> Option<(usize, usize)> {
        self.tableau.as_ref().map(|t| (t.a.len(), t.cols()))
    }

    pub fn witness(&self) -> Option<Vec<S>> {
        self.tableau.as_ref().map(|t| self.recover(t))
    }

    fn recover(&self, t: &Tableau<S>) -> Vec<S> {
        let mut w = vec![S::zero(); self.structural];
        for (r, b) in t.basis.iter().enumerate() {
            if *b < self.structural {
                w[*b] = t.rhs[r].clone();
            }
        }
        let mut x = vec![S::zero(); self.dimension];
        for (v, m) in self.vars.iter().enumerate() {
            x[v] = match m {
                VarMap::Pivot | VarMap::Unconstrained => S::zero(),
                VarMap::Lower { col, bound } => bound.add_ref(&w[*col]),
                VarMap::Upper { col, bound } => bound.sub_ref(&w[*col]),
                VarMap::Split { pos, neg } => w[*pos].sub_ref(&w[*neg]),
            };
        }
        self.subst.complete(&mut x);
        x
    }

    pub fn maximize(&self, objective: &[S]) -> Result<LpOutcome<S>> {
        if objective.len() != self.dimension {
            return Err(Error::MalformedSystem(format!(
                "objective has length {} but the system has dimension {}",
                objective.len(),
                self.dimension
            )));
        }
        let sparse: Vec<(usize, S)> = objective
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        Ok(self.maximize_sparse(&sparse))
    }

    /// Maximizes `Σ c_i x_i` given as `(index, c_i)` pairs (indices must be
    /// in range).
    pub fn maximize_sparse(&self, objective: &[(usize, S)]) -> LpOutcome<S> {
        let Some(base) = &self.tableau else {
            return LpOutcome::Infeasible;
        };
        let (terms, mut offset) = self.subst.apply(objective, S::zero());
        let mut costs = vec![S::zero(); base.cols()];
        for (v, c) in terms {
            match &self.vars[v] {
                VarMap::Unconstrained => return LpOutcome::Unbounded,
                VarMap::Lower { col, bound } => {
                    costs[*col] = costs[*col].add_ref(&c);
                    offset = offset.add_ref(&c.mul_ref(bound));
                }
                VarMap::Upper { col, bound } => {
                    costs[*col] = costs[*col].sub_ref(&c);
                    offset = offset.add_ref(&c.mul_ref(bound));
                }
                VarMap::Split { pos, neg } => {
                    costs[*pos] = costs[*pos].add_ref(&c);
                    costs[*neg] = costs[*neg].sub_ref(&c);
                }
                VarMap::Pivot => unreachable!(),
            }
        }
        let mut t = base.clone();
        t.set_objective(costs);
        match t.run(self.rule) {
            Step::Unbounded => LpOutcome::Unbounded,
            Step::Optimal => LpOutcome::Optimal {
                value: t.value().add_ref(&offset),
                witness: self.recover(&t),
            },
        }
    }
}

/// Runs phase one on `Σ a w + s = rhs, w, s >= 0` and returns a tableau over
/// structural and slack columns with a feasible basis, or `None`.
fn phase_one<S: Scalar>(
    mut rows: Vec<Vec<S>>,
    mut rhs: Vec<S>,
    structural: usize,
    rule: PivotRule,
) -> Option<Tableau<S>> {
    let m = rows.len();
    let base_cols = structural + m;
    let negative: Vec<usize> = (0..m).filter(|&i| rhs[i].is_negative()).collect();
    let cols = base_cols + negative.len();
    let mut basis: Vec<usize> = (0..m).map(|i| structural + i).collect();
    for row in rows.iter_mut() {
        row.resize(cols, S::zero());
    }
    for (k, &i) in negative.iter().enumerate() {
        for v in rows[i].iter_mut() {
            if !v.is_zero() {
                *v = -v.clone();
            }
        }
        rhs[i] = -rhs[i].clone();
        rows[i][base_cols + k] = S::one();
        basis[i] = base_cols + k;
    }
    let mut t = Tableau { a: rows, rhs, basis, obj: Vec::new(), obj_rhs: S::zero() };
    if !negative.is_empty() {
        let mut costs = vec![S::zero(); cols];
        for c in costs.iter_mut().skip(base_cols) {
            *c = -S::one();
        }
        t.set_objective(costs);
        // Phase one is bounded above by zero.
        let _ = t.run(rule);
        if t.value().is_negative() {
            return None;
        }
        // Drive artificial columns out of the basis; rows that cannot be
        // pivoted are redundant.
        let mut r = 0;
        while r < t.a.len() {
            if t.basis[r] >= base_cols {
                match (0..base_cols).find(|&j| !t.a[r][j].is_zero()) {
                    Some(j) => t.pivot(r, j),
                    None => {
                        t.a.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in t.a.iter_mut() {
            row.truncate(base_cols);
        }
    }
    t.obj = vec![S::zero(); base_cols];
    t.obj_rhs = S::zero();
    Some(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::system::LinConstraint;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn sys(dim: usize, rows: Vec<LinConstraint<Rational>>) -> LinSystem<Rational> {
        LinSystem::from_constraints(dim, rows).unwrap()
    }

    fn unit_box(d: usize) -> LinSystem<Rational> {
        let mut rows = Vec::new();
        for i in 0..d {
            rows.push(LinConstraint::le(vec![(i, q(1))], q(1)));
            rows.push(LinConstraint::le(vec![(i, q(-1))], q(0)));
        }
        sys(d, rows)
    }

    #[test]
    fn interior_fixing_is_feasible() {
        let s = unit_box(1);
        let half = Rational::new(1, 2);
        match lp_feasible(&s, &[(0, half.clone())]).unwrap() {
            Feasibility::Feasible(w) => assert_eq!(w, vec![half]),
            Feasibility::Infeasible => panic!("expected feasible"),
        }
    }

    #[test]
    fn contradictory_bounds() {
        let s = sys(
            1,
            vec![LinConstraint::le(vec![(0, q(1))], q(0)), LinConstraint::le(vec![(0, q(-1))], q(-1))],
        );
        assert_eq!(lp_feasible(&s, &[]).unwrap(), Feasibility::Infeasible);
    }

    #[test]
    fn fixing_violates_row() {
        let s = sys(
            2,
            vec![
                LinConstraint::le(vec![(0, q(1)), (1, q(1))], q(1)),
                LinConstraint::le(vec![(0, q(-1))], q(0)),
                LinConstraint::le(vec![(1, q(-1))], q(0)),
            ],
        );
        assert_eq!(lp_feasible(&s, &[(0, q(1)), (1, q(1))]).unwrap(), Feasibility::Infeasible);
        assert!(lp_feasible(&s, &[(0, q(1)), (1, q(0))]).unwrap().is_feasible());
    }

    #[test]
    fn cube_maximum() {
        let out = lp_optimize(&unit_box(3), &[q(1), q(1), q(1)]).unwrap();
        assert_eq!(out.value(), Some(&q(3)));
    }

    #[test]
    fn segment_objective_vanishes() {
        let s = sys(
            2,
            vec![
                LinConstraint::eq(vec![(0, q(1)), (1, q(-1))], q(0)),
                LinConstraint::le(vec![(0, q(1))], q(1)),
                LinConstraint::le(vec![(0, q(-1))], q(0)),
            ],
        );
        assert_eq!(lp_optimize(&s, &[q(1), q(-1)]).unwrap().value(), Some(&q(0)));
    }

    #[test]
    fn ray_is_unbounded() {
        let s = sys(1, vec![LinConstraint::le(vec![(0, q(-1))], q(0))]);
        assert_eq!(lp_optimize(&s, &[q(1)]).unwrap(), LpOutcome::Unbounded);
        assert_eq!(lp_optimize(&s, &[q(-1)]).unwrap().value(), Some(&q(0)));
    }

    #[test]
    fn empty_and_zero_dimensional_systems() {
        let s = LinSystem::<Rational>::new(2);
        assert!(lp_feasible(&s, &[]).unwrap().is_feasible());
        assert_eq!(lp_optimize(&s, &[q(0), q(0)]).unwrap().value(), Some(&q(0)));
        assert_eq!(lp_optimize(&s, &[q(1), q(0)]).unwrap(), LpOutcome::Unbounded);
        let z = LinSystem::<Rational>::new(0);
        assert_eq!(lp_optimize(&z, &[]).unwrap().value(), Some(&q(0)));
        let bad = sys(0, vec![LinConstraint::le(vec![], q(-1))]);
        assert_eq!(lp_feasible(&bad, &[]).unwrap(), Feasibility::Infeasible);
    }

    #[test]
    fn malformed_inputs() {
        let s = unit_box(2);
        assert!(matches!(lp_feasible(&s, &[(2, q(0))]), Err(Error::MalformedSystem(_))));
        assert!(matches!(lp_optimize(&s, &[q(1)]), Err(Error::MalformedSystem(_))));
    }

    #[test]
    fn inconsistent_equations() {
        let s = sys(
            2,
            vec![
                LinConstraint::eq(vec![(0, q(1)), (1, q(1))], q(1)),
                LinConstraint::eq(vec![(0, q(2)), (1, q(2))], q(3)),
            ],
        );
        assert_eq!(lp_feasible(&s, &[]).unwrap(), Feasibility::Infeasible);
    }

    #[test]
    fn witnesses_satisfy_the_system() {
        // A triangle with an equation-linked copy variable.
        let s = sys(
            3,
            vec![
                LinConstraint::le(vec![(0, q(1)), (1, q(2))], q(4)),
                LinConstraint::le(vec![(0, q(-1))], q(0)),
                LinConstraint::le(vec![(1, q(-1))], q(0)),
                LinConstraint::eq(vec![(2, q(1)), (0, q(-1)), (1, q(-1))], q(0)),
            ],
        );
        for obj in [[q(1), q(0), q(0)], [q(0), q(1), q(0)], [q(0), q(0), q(1)], [q(-1), q(-1), q(0)]] {
            match lp_optimize(&s, &obj).unwrap() {
                LpOutcome::Optimal { value, witness } => {
                    assert!(s.contains(&witness));
                    let v: Rational = obj.iter().zip(&witness).map(|(a, b)| a * b).fold(q(0), |x, y| x + y);
                    assert_eq!(v, value);
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        assert_eq!(lp_optimize(&s, &[q(0), q(0), q(1)]).unwrap().value(), Some(&q(4)));
    }

    #[test]
    fn pivot_rules_agree() {
        let s = unit_box(4);
        let obj = [q(3), q(-1), q(2), Rational::new(1, 2)];
        let a = PreparedLp::with_rule(&s, &[], PivotRule::Bland).unwrap().maximize(&obj).unwrap();
        let b = PreparedLp::with_rule(&s, &[], PivotRule::DantzigThenBland)
            .unwrap()
            .maximize(&obj)
            .unwrap();
        assert_eq!(a.value(), b.value());
        assert_eq!(a.value(), Some(&Rational::new(11, 2)));
    }
}
