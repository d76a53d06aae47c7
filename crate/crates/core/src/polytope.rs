//! Extended formulations and their algebra.
//!
//! An [`ExtendedFormulation`] is a system `Q` over lifted variables together
//! with an ordered list of projection coordinates; it represents
//! `{ q|proj : q ∈ Q }`. Its size is the number of inequality rows of `Q`;
//! equations are not charged.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exactlp::{
    lp_feasible, parse_hrep_lines, LinConstraint, LinSystem, LpOutcome, PreparedLp, Relation,
};
use crate::scalar::Scalar;

/// What is known about nonemptiness without solving an LP.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emptiness {
    Empty,
    NonEmpty,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedFormulation<S> {
    system: LinSystem<S>,
    projection: Vec<usize>,
    labels: Vec<Option<String>>,
    emptiness: Emptiness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclaredBound {
    pub expression: String,
    pub value: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeReport {
    pub inequalities: usize,
    pub equations: usize,
    pub variables: usize,
    pub declared_bound: Option<DeclaredBound>,
}

impl SizeReport {
    pub fn within_bound(&self) -> Option<bool> {
        self.declared_bound.as_ref().map(|b| self.inequalities as u128 <= b.value)
    }
}

/// Result of maximizing a linear functional over a projected polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Support<S> {
    Value(S),
    Infeasible,
    Unbounded,
}

impl<S> Support<S> {
    pub fn value(&self) -> Option<&S> {
        match self {
            Support::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl<S: Scalar> ExtendedFormulation<S> {
    pub fn new(system: LinSystem<S>, projection: Vec<usize>) -> Result<Self> {
        let n = system.dimension();
        let mut seen = HashSet::new();
        for &i in &projection {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, dim: n });
            }
            if !seen.insert(i) {
                return Err(Error::InvalidArgument(format!(
                    "projection coordinate {i} listed twice"
                )));
            }
        }
        Ok(ExtendedFormulation {
            labels: vec![None; n],
            system,
            projection,
            emptiness: Emptiness::Unknown,
        })
    }

    pub fn system(&self) -> &LinSystem<S> {
        &self.system
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    /// Dimension of the represented polytope.
    pub fn dim(&self) -> usize {
        self.projection.len()
    }

    pub fn variables(&self) -> usize {
        self.system.dimension()
    }

    /// Number of inequality rows.
    pub fn size(&self) -> usize {
        self.system.inequality_count()
    }

    pub fn size_report(&self) -> SizeReport {
        SizeReport {
            inequalities: self.size(),
            equations: self.system.equation_count(),
            variables: self.variables(),
            declared_bound: None,
        }
    }

    pub fn label(&self, var: usize) -> Option<&str> {
        self.labels.get(var).and_then(|l| l.as_deref())
    }

    /// Labels of the projection coordinates, with `?` for unnamed ones.
    pub fn projection_labels(&self) -> Vec<String> {
        self.projection
            .iter()
            .map(|&v| self.label(v).unwrap_or("?").to_string())
            .collect()
    }

    pub fn set_label(&mut self, var: usize, label: impl Into<String>) {
        self.labels[var] = Some(label.into());
    }

    pub fn emptiness(&self) -> Emptiness {
        self.emptiness
    }

    pub(crate) fn with_emptiness(mut self, e: Emptiness) -> Self {
        self.emptiness = e;
        self
    }

    /// Decides emptiness, by LP when not already known.
    pub fn is_empty(&self) -> Result<bool> {
        Ok(match self.emptiness {
            Emptiness::Empty => true,
            Emptiness::NonEmpty => false,
            Emptiness::Unknown => !lp_feasible(&self.system, &[])?.is_feasible(),
        })
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: len });
        }
        Ok(())
    }

    /// Relabels every projection coordinate as `prefix[i]`.
    pub fn with_projection_labels(mut self, prefix: &str) -> Self {
        for (i, &v) in self.projection.clone().iter().enumerate() {
            self.labels[v] = Some(format!("{prefix}[{i}]"));
        }
        self
    }

    /// Writes the HREP block followed by a `PROJ` line, preceded by the given
    /// comment lines (each emitted as `# ...`).
    pub fn to_text(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            let _ = writeln!(out, "# {c}");
        }
        self.system.write_hrep(&mut out);
        out.push_str("PROJ");
        for i in &self.projection {
            let _ = write!(out, " {i}");
        }
        out.push('\n');
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let (system, trailer) = parse_hrep_lines::<S>(&mut lines)?;
        let trailer = trailer.ok_or_else(|| Error::Parse("missing PROJ line".into()))?;
        let mut tokens = trailer.split_whitespace();
        if tokens.next() != Some("PROJ") {
            return Err(Error::Parse(format!("expected `PROJ ...`, got `{trailer}`")));
        }
        let projection = tokens
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad PROJ index `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(Error::Parse(format!("unexpected trailing line `{extra}`")));
        }
        ExtendedFormulation::new(system, projection)
    }
}

fn zero_one_points(points: &[Vec<u8>]) -> Result<usize> {
    let first = points.first().ok_or(Error::EmptyPointSet)?;
    let d = first.len();
    let mut seen = HashSet::new();
    for p in points {
        if p.len() != d {
            return Err(Error::InvalidPointSet("points have different lengths".into()));
        }
        if p.iter().any(|&b| b > 1) {
            return Err(Error::InvalidPointSet(format!("{p:?} is not a 0/1 vector")));
        }
        if !seen.insert(p) {
            return Err(Error::InvalidPointSet(format!("{p:?} listed twice")));
        }
    }
    Ok(d)
}

/// The convex-multiplier formulation `x = Σ λ_v v, Σ λ_v = 1, λ >= 0`.
/// Variables are `x` (projected) followed by one `λ` per point.
pub fn ef_from_points<S: Scalar>(points: &[Vec<u8>]) -> Result<ExtendedFormulation<S>> {
    let d = zero_one_points(points)?;
    let m = points.len();
    let mut system = LinSystem::new(d + m);
    for j in 0..m {
        system.push(LinConstraint::le(vec![(d + j, -S::one())], S::zero()))?;
    }
    for i in 0..d {
        let mut terms = vec![(i, S::one())];
        for (j, p) in points.iter().enumerate() {
            if p[i] == 1 {
                terms.push((d + j, -S::one()));
            }
        }
        system.push(LinConstraint::eq(terms, S::zero()))?;
    }
    system.push(LinConstraint::eq((0..m).map(|j| (d + j, S::one())).collect(), S::one()))?;
    let mut ef = ExtendedFormulation::new(system, (0..d).collect())?
        .with_emptiness(Emptiness::NonEmpty)
        .with_projection_labels("x");
    for j in 0..m {
        ef.set_label(d + j, format!("lam[{j}]"));
    }
    Ok(ef)
}

/// A single point described by equations only (size 0).
pub fn point_ef<S: Scalar>(point: &[S]) -> ExtendedFormulation<S> {
    let d = point.len();
    let mut system = LinSystem::new(d);
    for (i, v) in point.iter().enumerate() {
        system
            .push(LinConstraint::eq(vec![(i, S::one())], v.clone()))
            .expect("index in range");
    }
    ExtendedFormulation::new(system, (0..d).collect())
        .expect("identity projection")
        .with_emptiness(Emptiness::NonEmpty)
        .with_projection_labels("x")
}

/// An infeasible formulation of dimension `d`: `0 <= μ <= -1`.
pub fn empty_ef<S: Scalar>(d: usize) -> ExtendedFormulation<S> {
    let mut system = LinSystem::new(d + 1);
    system.push(LinConstraint::le(vec![(d, -S::one())], S::zero())).expect("in range");
    system.push(LinConstraint::le(vec![(d, S::one())], -S::one())).expect("in range");
    let mut ef = ExtendedFormulation::new(system, (0..d).collect())
        .expect("identity projection")
        .with_emptiness(Emptiness::Empty)
        .with_projection_labels("x");
    ef.set_label(d, "empty");
    ef
}

/// Appends `src`'s rows to `dst` with variables renumbered through `map`.
fn copy_rows<S: Scalar>(dst: &mut LinSystem<S>, src: &LinSystem<S>, map: impl Fn(usize) -> usize) {
    for c in src.constraints() {
        dst.push(c.remapped(&map)).expect("remapped index in range");
    }
}

fn copy_labels<S: Scalar>(
    dst: &mut ExtendedFormulation<S>,
    src: &ExtendedFormulation<S>,
    prefix: &str,
    map: impl Fn(usize) -> usize,
) {
    for v in 0..src.variables() {
        if let Some(l) = src.label(v) {
            let target = map(v);
            if dst.labels[target].is_none() {
                dst.labels[target] = Some(format!("{prefix}{l}"));
            }
        }
    }
}

/// Cartesian product; projection is `A`'s coordinates followed by `B`'s.
pub fn product<S: Scalar>(
    a: &ExtendedFormulation<S>,
    b: &ExtendedFormulation<S>,
) -> ExtendedFormulation<S> {
    let d = a.dim() + b.dim();
    if a.emptiness == Emptiness::Empty || b.emptiness == Emptiness::Empty {
        return empty_ef(d);
    }
    let na = a.variables();
    let mut system = LinSystem::new(na + b.variables());
    copy_rows(&mut system, &a.system, |v| v);
    copy_rows(&mut system, &b.system, |v| na + v);
    let projection = a
        .projection
        .iter()
        .copied()
        .chain(b.projection.iter().map(|v| na + v))
        .collect();
    let emptiness = match (a.emptiness, b.emptiness) {
        (Emptiness::NonEmpty, Emptiness::NonEmpty) => Emptiness::NonEmpty,
        _ => Emptiness::Unknown,
    };
    let mut ef = ExtendedFormulation::new(system, projection)
        .expect("disjoint projections")
        .with_emptiness(emptiness);
    copy_labels(&mut ef, a, "", |v| v);
    copy_labels(&mut ef, b, "", |v| na + v);
    ef
}

fn check_glue(vertices: &[Vec<u8>], range: std::ops::Range<usize>) -> Result<()> {
    for v in vertices {
        let slice = v.get(range.clone()).ok_or_else(|| {
            Error::InvalidArgument(format!("vertex {v:?} too short for the glue coordinates"))
        })?;
        let nonzeros = slice.iter().filter(|&&x| x != 0).count();
        if nonzeros > 1 {
            return Err(Error::GlueConditionViolated { vertex: v.clone(), nonzeros });
        }
    }
    Ok(())
}

/// Glued product over the last `k` coordinates of `A` and the first `k` of
/// `B`. The output projection is ordered `(x, y, z)`: `A`'s own
/// coordinates, `B`'s own coordinates, then the shared glue block. `B`'s
/// glue variables are identified with `A`'s by substitution.
///
/// When vertex lists are supplied, every vertex must have at most one
/// nonzero glue coordinate; otherwise the hypothesis is not checked.
pub fn glued_product<S: Scalar>(
    a: &ExtendedFormulation<S>,
    b: &ExtendedFormulation<S>,
    k: usize,
    glue_vertices_a: Option<&[Vec<u8>]>,
    glue_vertices_b: Option<&[Vec<u8>]>,
) -> Result<ExtendedFormulation<S>> {
    for dim in [a.dim(), b.dim()] {
        if k > dim {
            return Err(Error::GlueWidthMismatch { k, dim });
        }
    }
    if let Some(vs) = glue_vertices_a {
        check_glue(vs, a.dim() - k..a.dim())?;
    }
    if let Some(vs) = glue_vertices_b {
        check_glue(vs, 0..k)?;
    }
    let d = a.dim() + b.dim() - k;
    if a.emptiness == Emptiness::Empty || b.emptiness == Emptiness::Empty {
        return Ok(empty_ef(d));
    }
    let na = a.variables();
    let shared = &a.projection[a.dim() - k..];
    let mut map = vec![usize::MAX; b.variables()];
    for (i, &v) in b.projection[..k].iter().enumerate() {
        map[v] = shared[i];
    }
    let mut next = na;
    for slot in map.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    let mut system = LinSystem::new(next);
    copy_rows(&mut system, &a.system, |v| v);
    copy_rows(&mut system, &b.system, |v| map[v]);
    let projection: Vec<usize> = a.projection[..a.dim() - k]
        .iter()
        .copied()
        .chain(b.projection[k..].iter().map(|&v| map[v]))
        .chain(shared.iter().copied())
        .collect();
    let mut ef = ExtendedFormulation::new(system, projection)?;
    copy_labels(&mut ef, a, "", |v| v);
    copy_labels(&mut ef, b, "", |v| map[v]);
    Ok(ef)
}

/// Balas' formulation of `conv(P_A ∪ P_B)`, with exactly
/// `size(A) + size(B) + 2` inequalities. An empty operand is skipped and
/// the other operand returned unchanged.
pub fn balas_union<S: Scalar>(
    a: &ExtendedFormulation<S>,
    b: &ExtendedFormulation<S>,
) -> Result<ExtendedFormulation<S>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if b.is_empty()? {
        return Ok(a.clone());
    }
    if a.is_empty()? {
        return Ok(b.clone());
    }
    let d = a.dim();
    let (na, nb) = (a.variables(), b.variables());
    let ya = |v: usize| d + v;
    let yb = |v: usize| d + na + v;
    let lam = d + na + nb;
    let mut system = LinSystem::new(lam + 1);
    // A·y1 (<=|=) λ b_A
    for c in a.system.constraints() {
        let mut terms: Vec<(usize, S)> = c.terms().iter().map(|(v, x)| (ya(*v), x.clone())).collect();
        terms.push((lam, -c.rhs.clone()));
        system.push(LinConstraint::from_terms(terms, c.relation, S::zero()))?;
    }
    // B·y2 (<=|=) (1 - λ) b_B
    for c in b.system.constraints() {
        let mut terms: Vec<(usize, S)> = c.terms().iter().map(|(v, x)| (yb(*v), x.clone())).collect();
        terms.push((lam, c.rhs.clone()));
        system.push(LinConstraint::from_terms(terms, c.relation, c.rhs.clone()))?;
    }
    for i in 0..d {
        system.push(LinConstraint::eq(
            vec![(i, S::one()), (ya(a.projection[i]), -S::one()), (yb(b.projection[i]), -S::one())],
            S::zero(),
        ))?;
    }
    system.push(LinConstraint::le(vec![(lam, -S::one())], S::zero()))?;
    system.push(LinConstraint::le(vec![(lam, S::one())], S::one()))?;
    let mut ef = ExtendedFormulation::new(system, (0..d).collect())?
        .with_emptiness(Emptiness::NonEmpty);
    for (i, &v) in a.projection.iter().enumerate() {
        ef.labels[i] = a.label(v).map(str::to_string);
    }
    copy_labels(&mut ef, a, "A.", ya);
    copy_labels(&mut ef, b, "B.", yb);
    ef.set_label(lam, "union.lambda");
    Ok(ef)
}

/// Balas-unions a list of formulations left to right, skipping empty ones.
/// An all-empty (or empty) list yields `empty_ef(d)`.
pub fn balas_union_all<S: Scalar>(
    d: usize,
    parts: impl IntoIterator<Item = ExtendedFormulation<S>>,
) -> Result<ExtendedFormulation<S>> {
    let mut acc: Option<ExtendedFormulation<S>> = None;
    for p in parts {
        if p.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
        }
        if p.is_empty()? {
            continue;
        }
        acc = Some(match acc {
            None => p,
            Some(a) => balas_union(&a, &p)?,
        });
    }
    Ok(acc.unwrap_or_else(|| empty_ef(d)))
}

/// Fixes projected coordinates to 0 or 1. Adds equations only.
pub fn face<S: Scalar>(
    e: &ExtendedFormulation<S>,
    fixings: &[(usize, u8)],
) -> Result<ExtendedFormulation<S>> {
    let values: Vec<(usize, S)> = fixings
        .iter()
        .map(|&(i, b)| match b {
            0 => Ok((i, S::zero())),
            1 => Ok((i, S::one())),
            _ => Err(Error::InvalidArgument(format!("face value {b} is not 0 or 1"))),
        })
        .collect::<Result<_>>()?;
    fix_coordinates(e, &values)
}

/// Adds `x_i = value` for each `(projected index, value)`.
pub fn fix_coordinates<S: Scalar>(
    e: &ExtendedFormulation<S>,
    fixings: &[(usize, S)],
) -> Result<ExtendedFormulation<S>> {
    let mut out = e.clone();
    for (i, v) in fixings {
        let var = *e
            .projection
            .get(*i)
            .ok_or(Error::IndexOutOfRange { index: *i, dim: e.dim() })?;
        out.system.push(LinConstraint::eq(vec![(var, S::one())], v.clone()))?;
    }
    if out.emptiness == Emptiness::NonEmpty && !fixings.is_empty() {
        out.emptiness = Emptiness::Unknown;
    }
    Ok(out)
}

/// Keeps (and reorders) projected coordinates: the result's `i`-th
/// coordinate is `e`'s `coords[i]`-th.
pub fn select<S: Scalar>(
    e: &ExtendedFormulation<S>,
    coords: &[usize],
) -> Result<ExtendedFormulation<S>> {
    let projection = coords
        .iter()
        .map(|&i| e.projection.get(i).copied().ok_or(Error::IndexOutOfRange { index: i, dim: e.dim() }))
        .collect::<Result<Vec<_>>>()?;
    let mut out = ExtendedFormulation::new(e.system.clone(), projection)?;
    out.labels = e.labels.clone();
    out.emptiness = e.emptiness;
    Ok(out)
}

/// Adds `width` fresh coordinates equal to the sum of the given blocks of
/// projected coordinates, and projects onto them.
pub fn sum_blocks<S: Scalar>(
    e: &ExtendedFormulation<S>,
    blocks: &[Vec<usize>],
    width: usize,
) -> Result<ExtendedFormulation<S>> {
    let mut system = e.system.clone();
    let first = system.add_variables(width);
    for j in 0..width {
        let mut terms = vec![(first + j, S::one())];
        for b in blocks {
            if b.len() != width {
                return Err(Error::DimensionMismatch { expected: width, found: b.len() });
            }
            let var = *e
                .projection
                .get(b[j])
                .ok_or(Error::IndexOutOfRange { index: b[j], dim: e.dim() })?;
            terms.push((var, -S::one()));
        }
        system.push(LinConstraint::eq(terms, S::zero()))?;
    }
    let mut out = ExtendedFormulation::new(system, (first..first + width).collect())?;
    out.labels[..e.variables()].clone_from_slice(&e.labels);
    out.emptiness = e.emptiness;
    Ok(out)
}

fn fixings_for<S: Scalar>(e: &ExtendedFormulation<S>, p: &[S]) -> Vec<(usize, S)> {
    e.projection.iter().copied().zip(p.iter().cloned()).collect()
}

/// True iff `p` lies in the projection.
pub fn membership<S: Scalar>(e: &ExtendedFormulation<S>, p: &[S]) -> Result<bool> {
    e.check_dim(p.len())?;
    if e.emptiness == Emptiness::Empty {
        return Ok(false);
    }
    Ok(lp_feasible(&e.system, &fixings_for(e, p))?.is_feasible())
}

/// Membership of a 0/1 point.
pub fn membership_bits<S: Scalar>(e: &ExtendedFormulation<S>, bits: &[u8]) -> Result<bool> {
    let p: Vec<S> = bits.iter().map(|&b| S::from_i64(b as i64)).collect();
    membership(e, &p)
}

/// All 0/1 points of the projection, in lexicographic order. Searches
/// prefixes depth first and prunes a prefix as soon as fixing it makes the
/// system infeasible, so the LP count is proportional to the number of
/// member prefixes rather than to `2^d`.
pub fn zero_one_members<S: Scalar>(e: &ExtendedFormulation<S>) -> Result<Vec<Vec<u8>>> {
    let d = e.dim();
    let mut out = Vec::new();
    if e.emptiness == Emptiness::Empty {
        return Ok(out);
    }
    let mut stack: Vec<Vec<u8>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        let fixings: Vec<(usize, S)> = prefix
            .iter()
            .enumerate()
            .map(|(i, &b)| (e.projection[i], S::from_i64(b as i64)))
            .collect();
        if !lp_feasible(&e.system, &fixings)?.is_feasible() {
            continue;
        }
        if prefix.len() == d {
            out.push(prefix);
            continue;
        }
        for b in [1u8, 0] {
            let mut next = prefix.clone();
            next.push(b);
            stack.push(next);
        }
    }
    Ok(out)
}

/// `max { c·x : x ∈ proj(E) }`.
pub fn support<S: Scalar>(e: &ExtendedFormulation<S>, c: &[S]) -> Result<Support<S>> {
    SupportOracle::new(e)?.support(c)
}

/// Repeated support queries against one formulation, sharing the presolve
/// and the phase-one basis.
pub struct SupportOracle<'a, S> {
    ef: &'a ExtendedFormulation<S>,
    lp: PreparedLp<S>,
}

impl<'a, S: Scalar> SupportOracle<'a, S> {
    pub fn new(ef: &'a ExtendedFormulation<S>) -> Result<Self> {
        Ok(SupportOracle { ef, lp: PreparedLp::new(&ef.system, &[])? })
    }

    pub fn is_feasible(&self) -> bool {
        self.lp.is_feasible()
    }

    pub fn support(&self, c: &[S]) -> Result<Support<S>> {
        self.ef.check_dim(c.len())?;
        let lifted: Vec<(usize, S)> = self
            .ef
            .projection
            .iter()
            .zip(c)
            .filter(|(_, x)| !x.is_zero())
            .map(|(v, x)| (*v, x.clone()))
            .collect();
        Ok(match self.lp.maximize_sparse(&lifted) {
            LpOutcome::Optimal { value, .. } => Support::Value(value),
            LpOutcome::Infeasible => Support::Infeasible,
            LpOutcome::Unbounded => Support::Unbounded,
        })
    }

    /// Checks `a·x <= rhs` (or `=`) on the whole projection.
    pub fn is_valid(&self, row: &LinConstraint<S>) -> Result<bool> {
        let dense = row.dense(self.ef.dim());
        let hi = match self.support(&dense)? {
            Support::Value(v) => v <= row.rhs,
            Support::Infeasible => true,
            Support::Unbounded => false,
        };
        if !hi || row.relation == Relation::Le {
            return Ok(hi);
        }
        let neg: Vec<S> = dense.iter().map(|x| -x.clone()).collect();
        Ok(match self.support(&neg)? {
            Support::Value(v) => -v >= row.rhs,
            Support::Infeasible => true,
            Support::Unbounded => false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type Ef = ExtendedFormulation<Rational>;

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn segment() -> Ef {
        ef_from_points(&[vec![0], vec![1]]).unwrap()
    }

    fn all_bits(d: usize) -> Vec<Vec<u8>> {
        (0..1usize << d).map(|m| (0..d).map(|i| ((m >> (d - 1 - i)) & 1) as u8).collect()).collect()
    }

    #[test]
    fn points_formulation() {
        let e: Ef = ef_from_points(&[vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(e.variables(), 4);
        assert_eq!(e.size(), 2);
        assert!(membership_bits(&e, &[1, 1]).unwrap());
        assert!(!membership_bits(&e, &[1, 0]).unwrap());
        assert!(membership(&e, &[Rational::new(1, 2), Rational::new(1, 2)]).unwrap());

        let single: Ef = ef_from_points(&[vec![1]]).unwrap();
        assert_eq!(single.size(), 1);
        assert_eq!(support(&single, &[q(1)]).unwrap(), Support::Value(q(1)));

        let parity: Ef =
            ef_from_points(&[vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        assert_eq!(support(&parity, &[q(1), q(1), q(1)]).unwrap(), Support::Value(q(2)));
    }

    #[test]
    fn point_set_errors() {
        assert_eq!(ef_from_points::<Rational>(&[]).unwrap_err(), Error::EmptyPointSet);
        assert!(ef_from_points::<Rational>(&[vec![2]]).is_err());
        assert!(ef_from_points::<Rational>(&[vec![1], vec![1]]).is_err());
        assert!(ef_from_points::<Rational>(&[vec![1], vec![1, 0]]).is_err());
    }

    #[test]
    fn empty_formulation() {
        let e: Ef = empty_ef(3);
        assert!(!membership_bits(&e, &[0, 0, 0]).unwrap());
        assert!(e.is_empty().unwrap());
        let z: Ef = empty_ef(0);
        assert!(!lp_feasible(z.system(), &[]).unwrap().is_feasible());
        assert_eq!(support(&e, &[q(1), q(0), q(0)]).unwrap(), Support::Infeasible);
        // Emptiness is a property of the system, not only of the flag.
        let unflagged = Ef::new(e.system().clone(), e.projection().to_vec()).unwrap();
        assert!(unflagged.is_empty().unwrap());
    }

    #[test]
    fn product_of_segments_is_square() {
        let sq = product(&segment(), &segment());
        assert_eq!(sq.size(), 4);
        for p in all_bits(2) {
            assert!(membership_bits(&sq, &p).unwrap());
        }
        assert_eq!(support(&sq, &[q(1), q(1)]).unwrap(), Support::Value(q(2)));
        let single: Ef = ef_from_points(&[vec![1, 0]]).unwrap();
        let emb = product(&segment(), &single);
        assert_eq!(emb.size(), 3);
        assert!(membership_bits(&emb, &[0, 1, 0]).unwrap());
        assert!(!membership_bits(&emb, &[0, 1, 1]).unwrap());
        let with_empty = product(&segment(), &empty_ef(2));
        assert_eq!(with_empty.dim(), 3);
        assert!(with_empty.is_empty().unwrap());
    }

    #[test]
    fn glued_diagonal() {
        let a: Ef = ef_from_points(&[vec![0, 0], vec![1, 1]]).unwrap();
        let verts = vec![vec![0, 0], vec![1, 1]];
        let g = glued_product(&a, &a, 1, Some(&verts), Some(&verts)).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.size(), a.size() * 2);
        for p in all_bits(3) {
            let expect = p == vec![0, 0, 0] || p == vec![1, 1, 1];
            assert_eq!(membership_bits(&g, &p).unwrap(), expect, "{p:?}");
        }
    }

    #[test]
    fn glue_checks() {
        let a: Ef = ef_from_points(&[vec![1, 1], vec![0, 0]]).unwrap();
        let bad = vec![vec![1, 1]];
        assert!(matches!(
            glued_product(&a, &a, 2, Some(&bad), None),
            Err(Error::GlueConditionViolated { nonzeros: 2, .. })
        ));
        assert!(matches!(glued_product(&a, &a, 3, None, None), Err(Error::GlueWidthMismatch { .. })));
        let g0 = glued_product(&a, &segment(), 0, None, None).unwrap();
        let p = product(&a, &segment());
        assert_eq!(g0.size(), p.size());
        for pt in all_bits(3) {
            assert_eq!(membership_bits(&g0, &pt).unwrap(), membership_bits(&p, &pt).unwrap());
        }
    }

    #[test]
    fn balas_union_of_two_points() {
        let a: Ef = ef_from_points(&[vec![0, 0]]).unwrap();
        let b: Ef = ef_from_points(&[vec![1, 1]]).unwrap();
        let u = balas_union(&a, &b).unwrap();
        assert_eq!(u.size(), 4);
        for p in all_bits(2) {
            assert_eq!(membership_bits(&u, &p).unwrap(), p[0] == p[1]);
        }
        assert!(membership(&u, &[Rational::new(1, 2), Rational::new(1, 2)]).unwrap());

        let same = balas_union(&a, &a).unwrap();
        assert_eq!(same.size(), 2 * a.size() + 2);
        for p in all_bits(2) {
            assert_eq!(membership_bits(&same, &p).unwrap(), membership_bits(&a, &p).unwrap());
        }

        assert_eq!(balas_union(&a, &empty_ef(2)).unwrap(), a);
        assert_eq!(balas_union(&empty_ef(2), &b).unwrap(), b);
        assert!(matches!(balas_union(&a, &segment()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn faces() {
        let sq = product(&segment(), &segment());
        let edge = face(&sq, &[(0, 1)]).unwrap();
        assert_eq!(edge.size(), sq.size());
        assert!(membership_bits(&edge, &[1, 0]).unwrap());
        assert!(!membership_bits(&edge, &[0, 0]).unwrap());
        let vertex = face(&sq, &[(0, 1), (1, 0)]).unwrap();
        for p in all_bits(2) {
            assert_eq!(membership_bits(&vertex, &p).unwrap(), p == vec![1, 0]);
        }
        let single: Ef = ef_from_points(&[vec![0, 0]]).unwrap();
        let outside = face(&single, &[(1, 1)]).unwrap();
        for p in all_bits(2) {
            assert!(!membership_bits(&outside, &p).unwrap());
        }
        assert!(matches!(face(&sq, &[(2, 0)]), Err(Error::IndexOutOfRange { .. })));
        assert!(face(&sq, &[(0, 2)]).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let e: Ef = ef_from_points(&[vec![0, 1], vec![1, 0]]).unwrap();
        let text = e.to_text(&["strategy: points".to_string()]);
        assert!(text.starts_with("# strategy: points\nHREP 4 5\n"));
        assert!(text.ends_with("PROJ 0 1\n"));
        let back = Ef::parse_text(&text).unwrap();
        assert_eq!(back.system(), e.system());
        assert_eq!(back.projection(), e.projection());
        assert_eq!(back.to_text(&["strategy: points".to_string()]), text);
        assert!(Ef::parse_text("HREP 1 0\n").is_err());
        assert!(Ef::parse_text("HREP 1 0\nPROJ 1\n").is_err());
    }

    #[test]
    fn midpoint_of_members_is_member() {
        let e: Ef = ef_from_points(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        let mid = [Rational::new(1, 2), Rational::new(1, 2), q(1)];
        assert!(membership(&e, &mid).unwrap());
    }

    #[test]
    fn zero_one_search() {
        let e: Ef = ef_from_points(&[vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 0]]).unwrap();
        assert_eq!(zero_one_members(&e).unwrap(), vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert!(zero_one_members(&empty_ef::<Rational>(2)).unwrap().is_empty());
        let z: Ef = point_ef(&[]);
        assert_eq!(zero_one_members(&z).unwrap(), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn sum_of_blocks() {
        let sq = product(&segment(), &segment());
        let s = sum_blocks(&sq, &[vec![0], vec![1]], 1).unwrap();
        assert_eq!(support(&s, &[q(1)]).unwrap(), Support::Value(q(2)));
        assert_eq!(s.size(), sq.size());
    }
}
