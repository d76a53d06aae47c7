use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `a·x <= b`
    Le,
    /// `a·x = b`
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

/// One row `a·x (<=|=) b`, stored sparsely as sorted `(index, coefficient)`
/// pairs without zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinConstraint<S> {
    terms: Vec<(usize, S)>,
    pub relation: Relation,
    pub rhs: S,
}

impl<S: Scalar> LinConstraint<S> {
    /// Builds a row from `(index, coefficient)` pairs in any order.
    /// Repeated indices are summed and zeros dropped.
    pub fn from_terms(mut terms: Vec<(usize, S)>, relation: Relation, rhs: S) -> Self {
        terms.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(usize, S)> = Vec::with_capacity(terms.len());
        for (i, c) in terms {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc = acc.add_ref(&c),
                _ => merged.push((i, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        LinConstraint { terms: merged, relation, rhs }
    }

    pub fn from_dense(coefficients: &[S], relation: Relation, rhs: S) -> Self {
        let terms = coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        LinConstraint { terms, relation, rhs }
    }

    pub fn le(terms: Vec<(usize, S)>, rhs: S) -> Self {
        Self::from_terms(terms, Relation::Le, rhs)
    }

    pub fn eq(terms: Vec<(usize, S)>, rhs: S) -> Self {
        Self::from_terms(terms, Relation::Eq, rhs)
    }

    pub fn terms(&self) -> &[(usize, S)] {
        &self.terms
    }

    pub fn coefficient(&self, index: usize) -> S {
        match self.terms.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(k) => self.terms[k].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn dense(&self, dim: usize) -> Vec<S> {
        let mut out = vec![S::zero(); dim];
        for (i, c) in &self.terms {
            out[*i] = c.clone();
        }
        out
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.last().map(|(i, _)| *i)
    }

    pub fn lhs_at(&self, point: &[S]) -> S {
        self.terms
            .iter()
            .fold(S::zero(), |acc, (i, c)| acc + c.mul_ref(&point[*i]))
    }

    pub fn satisfied_by(&self, point: &[S]) -> bool {
        let lhs = self.lhs_at(point);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }

    /// Multiplies the row by a positive scalar.
    pub fn scaled(&self, factor: &S) -> Self {
        assert!(factor.is_positive(), "rows may only be scaled by positive factors");
        LinConstraint {
            terms: self.terms.iter().map(|(i, c)| (*i, c.mul_ref(factor))).collect(),
            relation: self.relation,
            rhs: self.rhs.mul_ref(factor),
        }
    }

    /// Renumbers variables through `map`.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Self {
        Self::from_terms(
            self.terms.iter().map(|(i, c)| (map(*i), c.clone())).collect(),
            self.relation,
            self.rhs.clone(),
        )
    }

    /// Canonical positive multiple: the largest |coefficient| (or |rhs| for
    /// an empty row) becomes 1; equations also get a positive leading
    /// coefficient. Two rows describe the same half-space or hyperplane iff
    /// their canonical forms are equal.
    pub fn canonical(&self) -> Self {
        let pivot = self
            .terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.rhs.clone());
        if pivot.is_zero() {
            return self.clone();
        }
        let mut factor = S::one().div_ref(&pivot.abs());
        if self.relation == Relation::Eq && pivot.is_negative() {
            factor = -factor;
        }
        LinConstraint {
            terms: self.terms.iter().map(|(i, c)| (*i, c.mul_ref(&factor))).collect(),
            relation: self.relation,
            rhs: self.rhs.mul_ref(&factor),
        }
    }
}

/// A finite system of linear inequalities and equations over `dimension`
/// variables. An empty system is all of `R^dimension`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinSystem<S> {
    dimension: usize,
    constraints: Vec<LinConstraint<S>>,
}

impl<S: Scalar> LinSystem<S> {
    pub fn new(dimension: usize) -> Self {
        LinSystem { dimension, constraints: Vec::new() }
    }

    pub fn from_constraints(dimension: usize, constraints: Vec<LinConstraint<S>>) -> Result<Self> {
        let mut s = Self::new(dimension);
        for c in constraints {
            s.push(c)?;
        }
        Ok(s)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn constraints(&self) -> &[LinConstraint<S>] {
        &self.constraints
    }

    pub fn push(&mut self, c: LinConstraint<S>) -> Result<()> {
        if let Some(i) = c.max_index() {
            if i >= self.dimension {
                return Err(Error::MalformedSystem(format!(
                    "coefficient index {i} in a system of dimension {}",
                    self.dimension
                )));
            }
        }
        self.constraints.push(c);
        Ok(())
    }

    /// Adds `extra` fresh variables at the end, returning the index of the
    /// first one.
    pub fn add_variables(&mut self, extra: usize) -> usize {
        let first = self.dimension;
        self.dimension += extra;
        first
    }

    pub fn inequality_count(&self) -> usize {
        self.constraints.iter().filter(|c| c.relation == Relation::Le).count()
    }

    pub fn equation_count(&self) -> usize {
        self.constraints.iter().filter(|c| c.relation == Relation::Eq).count()
    }

    pub fn inequalities(&self) -> impl Iterator<Item = &LinConstraint<S>> {
        self.constraints.iter().filter(|c| c.relation == Relation::Le)
    }

    pub fn equations(&self) -> impl Iterator<Item = &LinConstraint<S>> {
        self.constraints.iter().filter(|c| c.relation == Relation::Eq)
    }

    pub fn contains(&self, point: &[S]) -> bool {
        point.len() == self.dimension && self.constraints.iter().all(|c| c.satisfied_by(point))
    }

    pub fn remove(&mut self, index: usize) -> LinConstraint<S> {
        self.constraints.remove(index)
    }

    pub(crate) fn constraints_mut(&mut self) -> &mut Vec<LinConstraint<S>> {
        &mut self.constraints
    }

    /// Dense H-representation text:
    ///
    /// ```text
    /// HREP <dimension> <rows>
    /// <c_1> ... <c_d> <=|= <rhs>
    /// ```
    pub fn to_hrep(&self) -> String {
        let mut out = String::new();
        self.write_hrep(&mut out);
        out
    }

    pub(crate) fn write_hrep(&self, out: &mut String) {
        let _ = writeln!(out, "HREP {} {}", self.dimension, self.constraints.len());
        for c in &self.constraints {
            let dense = c.dense(self.dimension);
            for v in &dense {
                let _ = write!(out, "{v} ");
            }
            let _ = writeln!(out, "{} {}", c.relation.symbol(), c.rhs);
        }
    }

    /// Parses the format written by [`LinSystem::to_hrep`]. Lines starting
    /// with `#` and blank lines before the header are ignored.
    pub fn parse_hrep(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let (system, rest) = parse_hrep_lines(&mut lines)?;
        if let Some(extra) = rest {
            return Err(Error::Parse(format!("unexpected trailing line `{extra}`")));
        }
        Ok(system)
    }
}

/// Parses the header and rows, returning the first non-row line after them
/// (if any) so callers can parse trailers.
pub(crate) fn parse_hrep_lines<'a, S: Scalar>(
    lines: &mut impl Iterator<Item = &'a str>,
) -> Result<(LinSystem<S>, Option<&'a str>)> {
    let header = loop {
        match lines.next() {
            None => return Err(Error::Parse("missing HREP header".into())),
            Some(l) if l.trim().is_empty() || l.starts_with('#') => continue,
            Some(l) => break l,
        }
    };
    let mut parts = header.split_whitespace();
    if parts.next() != Some("HREP") {
        return Err(Error::Parse(format!("expected `HREP <dim> <rows>`, got `{header}`")));
    }
    let mut num = |what: &str| -> Result<usize> {
        parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad {what} in header `{header}`")))
    };
    let dim = num("dimension")?;
    let rows = num("row count")?;
    let mut system = LinSystem::new(dim);
    for r in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {rows} rows, found {r}")))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != dim + 2 {
            return Err(Error::Parse(format!(
                "row {r}: expected {} tokens, found {}",
                dim + 2,
                tokens.len()
            )));
        }
        let relation = match tokens[dim] {
            "<=" => Relation::Le,
            "=" => Relation::Eq,
            other => return Err(Error::Parse(format!("row {r}: unknown relation `{other}`"))),
        };
        let parse = |t: &str| {
            S::parse_exact(t).ok_or_else(|| Error::Parse(format!("row {r}: bad number `{t}`")))
        };
        let coeffs = tokens[..dim].iter().map(|t| parse(t)).collect::<Result<Vec<S>>>()?;
        let rhs = parse(tokens[dim + 1])?;
        system.push(LinConstraint::from_dense(&coeffs, relation, rhs))?;
    }
    let rest = lines.find(|l| !l.trim().is_empty());
    Ok((system, rest))
}
