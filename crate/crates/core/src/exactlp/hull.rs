//! H-representation of the convex hull of an explicit point set.
//!
//! The hull is obtained by Fourier–Motzkin projection of the convex
//! multiplier system `x = Σ λ_j v_j, Σ λ_j = 1, λ >= 0` onto `x`. Because
//! every intermediate polytope is the projection of a simplex whose vertices
//! are known, redundancy is decided combinatorially: each row carries the
//! set of points tight on it, and a pair of rows is combined only when their
//! common tight set lies on no third row (the pair meets in a ridge). This
//! keeps every intermediate system irredundant without any LP.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exactlp::simplex::Substitution;
use crate::exactlp::system::{LinConstraint, LinSystem};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn contains_all(&self, sub: &Bits) -> bool {
        self.0.iter().zip(&sub.0).all(|(a, b)| a & b == *b)
    }
}

struct Row<S> {
    terms: Vec<(usize, S)>,
    rhs: S,
    tight: Bits,
}

impl<S: Scalar> Row<S> {
    fn coefficient(&self, v: usize) -> S {
        match self.terms.binary_search_by_key(&v, |(i, _)| *i) {
            Ok(k) => self.terms[k].1.clone(),
            Err(_) => S::zero(),
        }
    }
}

/// Statistics from a hull computation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HullStats {
    pub eliminated: usize,
    pub peak_rows: usize,
    pub pairs_tested: usize,
}

/// Exact facet description of `conv(points)`: the returned system has one
/// inequality per facet and equations spanning the affine hull.
pub fn convex_hull_hrep<S: Scalar>(points: &[Vec<S>]) -> Result<LinSystem<S>> {
    convex_hull_hrep_with_stats(points).map(|(s, _)| s)
}

pub fn convex_hull_hrep_with_stats<S: Scalar>(
    points: &[Vec<S>],
) -> Result<(LinSystem<S>, HullStats)> {
    let m = points.len();
    if m == 0 {
        return Err(Error::EmptyPointSet);
    }
    let d = points[0].len();
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::InvalidPointSet("points have different lengths".into()));
    }
    if points.iter().collect::<HashSet<_>>().len() != m {
        return Err(Error::InvalidPointSet("points are not distinct".into()));
    }

    // Variables: x_0..x_{d-1}, then λ_0..λ_{m-1}.
    let lam = |j: usize| d + j;
    let mut equations: Vec<(Vec<(usize, S)>, S)> = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut terms = vec![(i, S::one())];
        for (j, p) in points.iter().enumerate() {
            if !p[i].is_zero() {
                terms.push((lam(j), -p[i].clone()));
            }
        }
        equations.push((terms, S::zero()));
    }
    equations.push(((0..m).map(|j| (lam(j), S::one())).collect(), S::one()));
    let subst = Substitution::eliminate(
        d + m,
        equations.iter().map(|(t, r)| (t.as_slice(), r)),
        |v| usize::from(v < d),
    )
    .expect("convex multiplier equations are consistent");

    let free: Vec<usize> = (0..d + m).filter(|v| !subst.is_pivot(*v)).collect();
    let value_at = |v: usize, j: usize| -> S {
        if v < d {
            points[j][v].clone()
        } else if v - d == j {
            S::one()
        } else {
            S::zero()
        }
    };

    let mut rows: Vec<Row<S>> = Vec::new();
    for k in 0..m {
        let (terms, constant) = subst.apply(&[(lam(k), -S::one())], S::zero());
        let rhs = -constant;
        if terms.is_empty() {
            debug_assert!(!rhs.is_negative());
            continue;
        }
        let mut tight = Bits::empty(m);
        for j in 0..m {
            let lhs = terms
                .iter()
                .fold(S::zero(), |acc, (v, c)| acc + c.mul_ref(&value_at(*v, j)));
            debug_assert!(lhs <= rhs);
            if lhs == rhs {
                tight.set(j);
            }
        }
        rows.push(Row { terms, rhs, tight });
    }

    let mut stats = HullStats { peak_rows: rows.len(), ..HullStats::default() };
    let mut remaining: Vec<usize> = free.iter().copied().filter(|v| *v >= d).collect();
    let mut dim = free.len();
    while !remaining.is_empty() {
        let (pick, _) = remaining
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let (mut p, mut n) = (0usize, 0usize);
                for r in &rows {
                    let c = r.coefficient(v);
                    if c.is_positive() {
                        p += 1;
                    } else if c.is_negative() {
                        n += 1;
                    }
                }
                (k, p * n)
            })
            .min_by_key(|(k, cost)| (*cost, *k))
            .unwrap();
        let t = remaining.swap_remove(pick);
        rows = eliminate_one(rows, t, dim, &mut stats);
        dim -= 1;
        stats.eliminated += 1;
        stats.peak_rows = stats.peak_rows.max(rows.len());
    }

    let mut system = LinSystem::new(d);
    for i in 0..d {
        if let Some((terms, constant)) = subst.expression(i) {
            let mut t: Vec<(usize, S)> = terms.iter().map(|(v, c)| (*v, -c.clone())).collect();
            t.push((i, S::one()));
            system.push(LinConstraint::eq(t, constant.clone()).canonical())?;
        }
    }
    for r in rows {
        system.push(LinConstraint::le(r.terms, r.rhs).canonical())?;
    }
    Ok((system, stats))
}

fn eliminate_one<S: Scalar>(
    rows: Vec<Row<S>>,
    t: usize,
    dim: usize,
    stats: &mut HullStats,
) -> Vec<Row<S>> {
    let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
    for (k, r) in rows.iter().enumerate() {
        let c = r.coefficient(t);
        if c.is_positive() {
            pos.push((k, c));
        } else if c.is_negative() {
            neg.push((k, -c));
        } else {
            zero.push(k);
        }
    }
    let mut seen: HashSet<Bits> = zero.iter().map(|&k| rows[k].tight.clone()).collect();
    let mut out: Vec<Row<S>> = Vec::new();
    let need = dim.saturating_sub(1);
    for (p, cp) in &pos {
        for (n, cn) in &neg {
            let common = rows[*p].tight.and(&rows[*n].tight);
            if rows.len() > 2 && common.count() < need {
                continue;
            }
            stats.pairs_tested += 1;
            let blocked = rows
                .iter()
                .enumerate()
                .any(|(k, r)| k != *p && k != *n && r.tight.contains_all(&common));
            if blocked || seen.contains(&common) {
                continue;
            }
            let mut terms: Vec<(usize, S)> =
                rows[*p].terms.iter().map(|(v, a)| (*v, a.mul_ref(cn))).collect();
            terms.extend(rows[*n].terms.iter().map(|(v, a)| (*v, a.mul_ref(cp))));
            let combined = LinConstraint::le(terms, S::zero());
            let rhs = rows[*p].rhs.mul_ref(cn).add_ref(&rows[*n].rhs.mul_ref(cp));
            debug_assert!(combined.coefficient(t).is_zero());
            seen.insert(common.clone());
            out.push(Row { terms: combined.terms().to_vec(), rhs, tight: common });
        }
    }
    let mut rows = rows;
    let mut kept: Vec<Row<S>> = Vec::with_capacity(zero.len() + out.len());
    for k in zero.into_iter().rev() {
        kept.push(rows.swap_remove(k));
    }
    kept.reverse();
    kept.extend(out);
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::fm::{fm_eliminate, FmOptions};
    use crate::exactlp::simplex::{lp_feasible, PreparedLp, LpOutcome};
    use crate::exactlp::system::Relation;
    use crate::Rational;

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|p| p.iter().map(|&x| Rational::integer(x)).collect()).collect()
    }

    fn cube(d: usize) -> Vec<Vec<Rational>> {
        (0..1usize << d)
            .map(|mask| (0..d).map(|i| Rational::integer(((mask >> i) & 1) as i64)).collect())
            .collect()
    }

    #[test]
    fn cube_has_2d_facets() {
        for d in 1..=4 {
            let h = convex_hull_hrep(&cube(d)).unwrap();
            assert_eq!(h.equation_count(), 0);
            assert_eq!(h.inequality_count(), 2 * d, "d = {d}");
        }
    }

    #[test]
    fn even_parity_polytope_facets() {
        // Even-weight vectors in {0,1}^4: 8 odd-set cuts plus 8 bounds.
        let p: Vec<_> = cube(4)
            .into_iter()
            .filter(|v| v.iter().filter(|x| !num_traits::Zero::is_zero(*x)).count() % 2 == 0)
            .collect();
        let h = convex_hull_hrep(&p).unwrap();
        assert_eq!(h.inequality_count(), 16);
    }

    #[test]
    fn lower_dimensional_sets_get_equations() {
        let h = convex_hull_hrep(&pts(&[&[0, 0, 1], &[1, 1, 1]])).unwrap();
        assert_eq!(h.equation_count(), 2);
        assert_eq!(h.inequality_count(), 2);
        let single = convex_hull_hrep(&pts(&[&[1, 0]])).unwrap();
        assert_eq!(single.equation_count(), 2);
        assert_eq!(single.inequality_count(), 0);
    }

    #[test]
    fn agrees_with_lp_fm_on_small_sets() {
        let sets = [
            pts(&[&[0, 0, 0], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]),
            pts(&[&[0, 0], &[1, 0], &[0, 1]]),
            pts(&[&[0, 0, 0], &[1, 1, 1], &[1, 0, 0]]),
        ];
        for p in &sets {
            let h = convex_hull_hrep(p).unwrap();
            // Reference: LP-redundancy FM on the multiplier system.
            let (d, m) = (p[0].len(), p.len());
            let mut s = LinSystem::new(d + m);
            for i in 0..d {
                let mut t = vec![(i, Rational::integer(1))];
                for (j, v) in p.iter().enumerate() {
                    t.push((d + j, -v[i].clone()));
                }
                s.push(LinConstraint::eq(t, Rational::integer(0))).unwrap();
            }
            s.push(LinConstraint::eq((0..m).map(|j| (d + j, Rational::integer(1))).collect(), Rational::integer(1)))
                .unwrap();
            for j in 0..m {
                s.push(LinConstraint::le(vec![(d + j, Rational::integer(-1))], Rational::integer(0))).unwrap();
            }
            for _ in 0..m {
                s = fm_eliminate(&s, d).unwrap();
            }
            let _ = FmOptions::default();
            // Mutual validity: every row of each is valid on the other.
            for (a, b) in [(&h, &s), (&s, &h)] {
                let lp = PreparedLp::new(b, &[]).unwrap();
                for c in a.constraints() {
                    let hi = lp.maximize_sparse(c.terms());
                    assert!(matches!(&hi, LpOutcome::Optimal { value, .. } if *value <= c.rhs));
                    if c.relation == Relation::Eq {
                        let neg: Vec<_> = c.terms().iter().map(|(i, v)| (*i, -v.clone())).collect();
                        let lo = lp.maximize_sparse(&neg);
                        assert!(matches!(&lo, LpOutcome::Optimal { value, .. } if -value.clone() >= c.rhs));
                    }
                }
            }
            for v in p {
                let fix: Vec<_> = v.iter().cloned().enumerate().collect();
                assert!(lp_feasible(&h, &fix).unwrap().is_feasible());
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(convex_hull_hrep::<Rational>(&[]), Err(Error::EmptyPointSet));
        assert!(convex_hull_hrep(&pts(&[&[0], &[0]])).is_err());
        assert!(convex_hull_hrep(&pts(&[&[0], &[0, 1]])).is_err());
    }
}
