use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exactlp::simplex::{LpOutcome, PreparedLp};
use crate::exactlp::system::{LinConstraint, LinSystem, Relation};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FmOptions {
    /// Prove each surviving inequality irredundant with one LP and drop the
    /// ones that are implied by the rest.
    pub redundancy_lp: bool,
}

impl Default for FmOptions {
    fn default() -> Self {
        FmOptions { redundancy_lp: true }
    }
}

/// Projects out variable `index`; the result lives in `dimension - 1`
/// variables with indices above `index` shifted down by one.
pub fn fm_eliminate<S: Scalar>(system: &LinSystem<S>, index: usize) -> Result<LinSystem<S>> {
    fm_eliminate_with(system, index, FmOptions::default())
}

pub fn fm_eliminate_with<S: Scalar>(
    system: &LinSystem<S>,
    index: usize,
    options: FmOptions,
) -> Result<LinSystem<S>> {
    let dim = system.dimension();
    if index >= dim {
        return Err(Error::MalformedSystem(format!(
            "cannot eliminate variable {index} of a {dim}-dimensional system"
        )));
    }
    let rows = system.constraints();
    let pivot_eq = rows
        .iter()
        .enumerate()
        .filter(|(_, c)| c.relation == Relation::Eq && !c.coefficient(index).is_zero())
        .min_by_key(|(_, c)| c.terms().len())
        .map(|(k, _)| k);

    let mut out: Vec<LinConstraint<S>> = Vec::new();
    if let Some(k) = pivot_eq {
        // a x_i + rest = b  =>  substitute x_i = (b - rest) / a everywhere.
        let eq = &rows[k];
        let a = eq.coefficient(index);
        for (j, c) in rows.iter().enumerate() {
            if j == k {
                continue;
            }
            let ci = c.coefficient(index);
            if ci.is_zero() {
                out.push(c.clone());
                continue;
            }
            let f = ci.div_ref(&a);
            let mut terms: Vec<(usize, S)> = c.terms().to_vec();
            terms.extend(eq.terms().iter().map(|(v, e)| (*v, -(e.mul_ref(&f)))));
            out.push(LinConstraint::from_terms(terms, c.relation, c.rhs.sub_ref(&eq.rhs.mul_ref(&f))));
        }
    } else {
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for c in rows {
            let ci = c.coefficient(index);
            if ci.is_zero() {
                out.push(c.clone());
            } else if ci.is_positive() {
                pos.push((c, ci));
            } else {
                neg.push((c, -ci));
            }
        }
        for (p, cp) in &pos {
            for (n, cn) in &neg {
                // cn * p + cp * n cancels x_i.
                let mut terms: Vec<(usize, S)> =
                    p.terms().iter().map(|(v, a)| (*v, a.mul_ref(cn))).collect();
                terms.extend(n.terms().iter().map(|(v, a)| (*v, a.mul_ref(cp))));
                let rhs = p.rhs.mul_ref(cn).add_ref(&n.rhs.mul_ref(cp));
                out.push(LinConstraint::from_terms(terms, Relation::Le, rhs));
            }
        }
    }

    let shift = |v: usize| if v > index { v - 1 } else { v };
    let rows: Vec<LinConstraint<S>> = out
        .into_iter()
        .map(|c| {
            debug_assert!(c.coefficient(index).is_zero());
            c.remapped(shift)
        })
        .collect();
    let rows = dedupe(rows);
    let mut result = LinSystem::from_constraints(dim - 1, rows)?;
    if options.redundancy_lp {
        remove_redundant(&mut result)?;
    }
    Ok(result)
}

/// Drops duplicate rows (up to positive scaling) and trivially true rows.
/// An infeasible trivial row collapses the system to a single `0 <= -1`.
pub(crate) fn dedupe<S: Scalar>(rows: Vec<LinConstraint<S>>) -> Vec<LinConstraint<S>> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for c in rows {
        if c.terms().is_empty() {
            let ok = match c.relation {
                Relation::Le => !c.rhs.is_negative(),
                Relation::Eq => c.rhs.is_zero(),
            };
            if ok {
                continue;
            }
            return vec![LinConstraint::le(vec![], -S::one())];
        }
        if seen.insert(c.canonical()) {
            out.push(c);
        }
    }
    out
}

/// Removes inequalities implied by the remaining rows, one LP per row.
pub fn remove_redundant<S: Scalar>(system: &mut LinSystem<S>) -> Result<()> {
    let mut k = 0;
    while k < system.constraints().len() {
        if system.constraints()[k].relation != Relation::Le {
            k += 1;
            continue;
        }
        let row = system.remove(k);
        let lp = PreparedLp::new(system, &[])?;
        let redundant = match lp.maximize_sparse(row.terms()) {
            LpOutcome::Optimal { value, .. } => value <= row.rhs,
            LpOutcome::Infeasible => true,
            LpOutcome::Unbounded => false,
        };
        if !redundant {
            system.constraints_mut().insert(k, row);
            k += 1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn interval(sys: &LinSystem<Rational>) -> (Rational, Rational) {
        assert_eq!(sys.dimension(), 1);
        let lp = PreparedLp::new(sys, &[]).unwrap();
        let hi = lp.maximize(&[q(1)]).unwrap().value().cloned().unwrap();
        let lo = -lp.maximize(&[q(-1)]).unwrap().value().cloned().unwrap();
        (lo, hi)
    }

    #[test]
    fn simplex_shadow() {
        let s = LinSystem::from_constraints(
            2,
            vec![
                LinConstraint::le(vec![(0, q(1)), (1, q(1))], q(1)),
                LinConstraint::le(vec![(0, q(-1))], q(0)),
                LinConstraint::le(vec![(1, q(-1))], q(0)),
            ],
        )
        .unwrap();
        let p = fm_eliminate(&s, 1).unwrap();
        assert_eq!(p.inequality_count(), 2);
        assert_eq!(interval(&p), (q(0), q(1)));
    }

    #[test]
    fn equality_substitution() {
        let s = LinSystem::from_constraints(
            2,
            vec![
                LinConstraint::eq(vec![(0, q(1)), (1, q(-1))], q(0)),
                LinConstraint::le(vec![(1, q(1))], q(1)),
                LinConstraint::le(vec![(1, q(-1))], q(0)),
            ],
        )
        .unwrap();
        let p = fm_eliminate(&s, 1).unwrap();
        assert_eq!(p.equation_count(), 0);
        assert_eq!(p.inequality_count(), 2);
        assert_eq!(interval(&p), (q(0), q(1)));
    }

    #[test]
    fn duplicate_rows_collapse_without_lp() {
        let s = LinSystem::from_constraints(
            2,
            vec![
                LinConstraint::le(vec![(0, q(1)), (1, q(1))], q(2)),
                LinConstraint::le(vec![(0, q(2)), (1, q(-1))], q(1)),
                LinConstraint::le(vec![(1, q(-1))], q(0)),
                LinConstraint::le(vec![(0, q(2)), (1, q(2))], q(4)),
            ],
        )
        .unwrap();
        let p = fm_eliminate_with(&s, 1, FmOptions { redundancy_lp: false }).unwrap();
        let canon: HashSet<_> = p.constraints().iter().map(|c| c.canonical()).collect();
        assert_eq!(canon.len(), p.constraints().len());
    }

    #[test]
    fn infeasible_projection_stays_infeasible() {
        let s = LinSystem::from_constraints(
            2,
            vec![
                LinConstraint::le(vec![(1, q(1))], q(0)),
                LinConstraint::le(vec![(1, q(-1))], q(-1)),
            ],
        )
        .unwrap();
        let p = fm_eliminate(&s, 1).unwrap();
        assert!(!PreparedLp::new(&p, &[]).unwrap().is_feasible());
    }

    #[test]
    fn index_out_of_range() {
        let s = LinSystem::<Rational>::new(2);
        assert!(matches!(fm_eliminate(&s, 2), Err(Error::MalformedSystem(_))));
    }
}
