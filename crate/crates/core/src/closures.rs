//! Formulations for unions, concatenations and Kleene stars, built from
//! formulations of the operands at every length.
//!
//! A [`Builder`] maps a length `n` to a formulation of `conv(L(n))`;
//! [`compile`] turns a [`LanguageSpec`] into one.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::langs::LanguageSpec;
use crate::machines::add_special_nodes;
use crate::polytope::{
    balas_union, balas_union_all, ef_from_points, empty_ef, face, glued_product, point_ef, product,
    select, sum_blocks, DeclaredBound, ExtendedFormulation,
};
use crate::scalar::Scalar;
use crate::walkpoly::{language_ef_from_automaton, markov_bound};

type BuildFn<S> = dyn Fn(usize) -> Result<ExtendedFormulation<S>> + Send + Sync;

/// A memoized family of formulations indexed by length.
pub struct Builder<S> {
    name: String,
    build: Box<BuildFn<S>>,
    memo: Mutex<HashMap<usize, ExtendedFormulation<S>>>,
}

impl<S: Scalar> Builder<S> {
    pub fn new(
        name: impl Into<String>,
        build: impl Fn(usize) -> Result<ExtendedFormulation<S>> + Send + Sync + 'static,
    ) -> Arc<Self> {
        Arc::new(Builder { name: name.into(), build: Box::new(build), memo: Mutex::new(HashMap::new()) })
    }

    /// Describes the construction, e.g. `star(explicit)`.
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn build(&self, n: usize) -> Result<ExtendedFormulation<S>> {
        if let Some(e) = self.memo.lock().expect("memo lock").get(&n) {
            return Ok(e.clone());
        }
        // Built outside the lock: recursive builders query other lengths.
        let e = (self.build)(n)?;
        self.memo.lock().expect("memo lock").insert(n, e.clone());
        Ok(e)
    }
}

/// Convex hull of the listed strings, or the empty formulation.
pub fn points_or_empty<S: Scalar>(points: &[Vec<u8>], n: usize) -> Result<ExtendedFormulation<S>> {
    if points.is_empty() {
        Ok(empty_ef(n))
    } else {
        ef_from_points(points)
    }
}

pub fn union_ef<S: Scalar>(a: &Builder<S>, b: &Builder<S>, n: usize) -> Result<ExtendedFormulation<S>> {
    balas_union(&a.build(n)?, &b.build(n)?)
}

/// Balas union over the splits `i + (n-i)` of `A(i) × B(n-i)`, skipping
/// splits with an empty factor.
pub fn concat_ef<S: Scalar>(a: &Builder<S>, b: &Builder<S>, n: usize) -> Result<ExtendedFormulation<S>> {
    let mut parts = Vec::new();
    for i in 0..=n {
        let left = a.build(i)?;
        if left.is_empty()? {
            continue;
        }
        let right = b.build(n - i)?;
        if right.is_empty()? {
            continue;
        }
        parts.push(product(&left, &right));
    }
    Ok(balas_union_all(n, parts)?.with_projection_labels("x"))
}

/// Upper bound on `size(concat_ef)` implied by the construction:
/// the operand sizes over surviving splits plus 2 per union, or the size of
/// the empty formulation when no split survives.
pub fn concat_bound<S: Scalar>(a: &Builder<S>, b: &Builder<S>, n: usize) -> Result<usize> {
    let mut total = 0;
    let mut splits: usize = 0;
    for i in 0..=n {
        let (left, right) = (a.build(i)?, b.build(n - i)?);
        if !left.is_empty()? && !right.is_empty()? {
            total += left.size() + right.size();
            splits += 1;
        }
    }
    if splits == 0 {
        return Ok(crate::polytope::empty_ef::<S>(n).size());
    }
    Ok(total + 2 * (splits - 1))
}

fn marker<S: Scalar>(width: usize, at: usize) -> Vec<S> {
    (0..width).map(|i| if i == at { S::one() } else { S::zero() }).collect()
}

/// The piece polytope `P` of the star construction, in dimension `3n+2`
/// laid out as `(in marker, payload, out marker)` with markers of width
/// `n+1`. Its vertices are `(e_i, 0^i x 0^{n-i-k}, e_{i+k})` for
/// `x ∈ L(k)`, `1 <= k <= n`, together with the idle pieces
/// `(e_i, 0^n, e_i)`.
pub fn star_piece<S: Scalar>(l: &Builder<S>, n: usize) -> Result<ExtendedFormulation<S>> {
    let w = n + 1;
    let idle: Vec<Vec<u8>> = (0..w)
        .map(|i| {
            let mut p = vec![0u8; 3 * n + 2];
            p[i] = 1;
            p[w + n + i] = 1;
            p
        })
        .collect();
    let mut blocks = vec![ef_from_points(&idle)?];
    for k in 1..=n {
        let lk = l.build(k)?;
        if lk.is_empty()? {
            continue;
        }
        let mut offsets = Vec::with_capacity(n - k + 1);
        for i in 0..=n - k {
            let mut left = marker::<S>(w, i);
            left.extend(vec![S::zero(); i]);
            let mut right = vec![S::zero(); n - i - k];
            right.extend(marker::<S>(w, i + k));
            offsets.push(product(&product(&point_ef(&left), &lk), &point_ef(&right)));
        }
        blocks.push(balas_union_all(3 * n + 2, offsets)?);
    }
    balas_union_all(3 * n + 2, blocks)
}

/// Formulation of `conv(L*(n))`: `n+1` copies of the piece polytope glued
/// along their position markers, the first starting at position 0 and the
/// last ending at position `n`; the string is the sum of the payloads.
/// Size is `(n+1) · size(star_piece)`. An `n` with no decomposition gives
/// the empty formulation.
pub fn star_ef<S: Scalar>(l: &Builder<S>, n: usize) -> Result<ExtendedFormulation<S>> {
    if n == 0 {
        return Ok(point_ef(&[]));
    }
    let w = n + 1;
    let p = star_piece(l, n)?;
    let start: Vec<(usize, u8)> = (0..w).map(|i| (i, (i == 0) as u8)).collect();
    // chain projects onto (payload_0, …, payload_t, out marker).
    let mut chain = select(&face(&p, &start)?, &(w..3 * n + 2).collect::<Vec<_>>())?;
    for t in 0..n {
        let g = glued_product(&chain, &p, w, None, None)?;
        chain = select(&g, &(0..(t + 2) * n + w).collect::<Vec<_>>())?;
    }
    let end: Vec<(usize, u8)> = (0..w).map(|i| ((n + 1) * n + i, (i == n) as u8)).collect();
    let r = face(&chain, &end)?;
    let blocks: Vec<Vec<usize>> = (0..=n).map(|t| (t * n..(t + 1) * n).collect()).collect();
    let out = sum_blocks(&r, &blocks, n)?.with_projection_labels("x");
    if out.is_empty()? {
        return Ok(empty_ef(n));
    }
    Ok(out)
}

/// How [`compile`] treats the root of a spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Automata and machines through walk polytopes, combinators through
    /// closure constructions, explicit sets as point hulls.
    Auto,
    /// The root must be an automaton or machine.
    Automaton,
    /// The root must be a union, concatenation or star.
    Closure,
}

const NON_CLOSURE: &str = "compact languages are not closed under complement, intersection or \
                           set difference, so no construction exists; enumerate the language instead";

/// Turns a spec into a builder of formulations.
pub fn compile<S: Scalar>(spec: &LanguageSpec, strategy: Strategy) -> Result<Arc<Builder<S>>> {
    let combinator = matches!(
        spec,
        LanguageSpec::Union { .. } | LanguageSpec::Concat { .. } | LanguageSpec::Star { .. }
    );
    match strategy {
        Strategy::Automaton if !spec.is_automaton_leaf() => {
            return Err(Error::NotCompilable(format!(
                "automaton strategy needs an automaton or machine, got {}",
                spec.kind()
            )))
        }
        Strategy::Closure if !combinator => {
            return Err(Error::NotCompilable(format!(
                "closure strategy needs a union, concat or star node, got {}",
                spec.kind()
            )))
        }
        _ => {}
    }
    if spec.is_automaton_leaf() {
        let leaf = spec.clone();
        return Ok(Builder::new(format!("automaton({})", spec.kind()), move |n| {
            language_ef_from_automaton(&leaf.automaton(n)?, n)
        }));
    }
    match spec {
        LanguageSpec::Explicit { .. } => {
            let leaf = spec.clone();
            Ok(Builder::new("points(explicit)", move |n| points_or_empty(&leaf.enumerate(n)?, n)))
        }
        LanguageSpec::Union { a, b } => {
            let (ba, bb) = (compile::<S>(a, Strategy::Auto)?, compile::<S>(b, Strategy::Auto)?);
            let name = format!("union({}, {})", ba.name(), bb.name());
            Ok(Builder::new(name, move |n| union_ef(&ba, &bb, n)))
        }
        LanguageSpec::Concat { a, b } => {
            let (ba, bb) = (compile::<S>(a, Strategy::Auto)?, compile::<S>(b, Strategy::Auto)?);
            let name = format!("concat({}, {})", ba.name(), bb.name());
            Ok(Builder::new(name, move |n| concat_ef(&ba, &bb, n)))
        }
        LanguageSpec::Star { of } => {
            let inner = compile::<S>(of, Strategy::Auto)?;
            let name = format!("star({})", inner.name());
            Ok(Builder::new(name, move |n| star_ef(&inner, n)))
        }
        LanguageSpec::Complement { .. } | LanguageSpec::Intersection { .. } | LanguageSpec::Difference { .. } => {
            Err(Error::NotCompilable(format!("{} node: {NON_CLOSURE}", spec.kind())))
        }
        _ => unreachable!("automaton leaves handled above"),
    }
}

/// The size bound the construction chosen by [`compile`] guarantees at
/// length `n`, or `None` for explicit sets (whose size is `|L(n)|`).
pub fn declared_bound<S: Scalar>(spec: &LanguageSpec, n: usize) -> Result<Option<DeclaredBound>> {
    if spec.is_automaton_leaf() {
        let d = add_special_nodes(&spec.automaton(n)?);
        return Ok(Some(DeclaredBound {
            expression: format!("2|V| + |A|(n+2) with |V| = {}, |A| = {}", d.nodes, d.arcs.len()),
            value: markov_bound(&d, n + 2) as u128,
        }));
    }
    Ok(match spec {
        LanguageSpec::Union { a, b } => {
            let (ea, eb) = (compile::<S>(a, Strategy::Auto)?.build(n)?, compile::<S>(b, Strategy::Auto)?.build(n)?);
            Some(DeclaredBound {
                expression: "size(A) + size(B) + 2".into(),
                value: (ea.size() + eb.size() + 2) as u128,
            })
        }
        LanguageSpec::Concat { a, b } => {
            let (ba, bb) = (compile::<S>(a, Strategy::Auto)?, compile::<S>(b, Strategy::Auto)?);
            Some(DeclaredBound {
                expression: "sum over splits of size(A(i)) + size(B(n-i)), plus 2 per union".into(),
                value: concat_bound(&ba, &bb, n)? as u128,
            })
        }
        LanguageSpec::Star { of } if n > 0 => {
            let inner = compile::<S>(of, Strategy::Auto)?;
            let p = star_piece(&inner, n)?;
            Some(DeclaredBound { expression: "(n+1) size(P)".into(), value: ((n + 1) * p.size()) as u128 })
        }
        _ => None,
    })
}
