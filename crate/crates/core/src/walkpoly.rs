//! Walk-signature polytopes of labeled digraphs, and formulations of
//! automaton languages built from them.
//!
//! A walk of length `n` is encoded as `(e_u, σ, e_v)`: the one-hot vector of
//! its source, its `n` arc labels and the one-hot vector of its destination.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::machines::{add_special_nodes, LabeledDigraph, StreamingAutomaton};
use crate::polytope::{ef_from_points, face, glued_product, select, ExtendedFormulation};
use crate::scalar::Scalar;

fn unit(v: usize, i: usize) -> Vec<u8> {
    let mut e = vec![0; v];
    e[i] = 1;
    e
}

/// Distinct transition points `(e_src, label, e_dst)`.
pub fn transition_points(d: &LabeledDigraph) -> Result<Vec<Vec<u8>>> {
    d.validate()?;
    if d.arcs.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let set: BTreeSet<Vec<u8>> = d
        .arcs
        .iter()
        .map(|&(u, v, b)| [unit(d.nodes, u), vec![b], unit(d.nodes, v)].concat())
        .collect();
    Ok(set.into_iter().collect())
}

/// Convex hull of the transition points, in dimension `2|V| + 1`.
pub fn trans_polytope<S: Scalar>(d: &LabeledDigraph) -> Result<ExtendedFormulation<S>> {
    ef_from_points(&transition_points(d)?)
}

/// `conv{(e_i, e_i)}`: the chain's end caps.
fn diagonal<S: Scalar>(nodes: usize) -> Result<(ExtendedFormulation<S>, Vec<Vec<u8>>)> {
    let points: Vec<Vec<u8>> = (0..nodes).map(|i| [unit(nodes, i), unit(nodes, i)].concat()).collect();
    Ok((ef_from_points(&points)?, points))
}

/// The Markovian polytope `Φ_n(D)` as the glued chain
/// `P_0 ⋈ P_trans ⋈ … ⋈ P_trans ⋈ P_f` over one-hot blocks. Projection:
/// source block `src[i]`, labels `sig[j]`, destination block `dst[i]`.
/// Size is `2|V| + n · size(P_trans)`.
pub fn markov_polytope<S: Scalar>(d: &LabeledDigraph, n: usize) -> Result<ExtendedFormulation<S>> {
    let points = transition_points(d)?;
    let v = d.nodes;
    let trans: ExtendedFormulation<S> = ef_from_points(&points)?;
    let (cap, cap_points) = diagonal::<S>(v)?;
    // Invariant: `chain` projects onto (src, sig[0..t], dst).
    let mut chain = cap.clone();
    for t in 0..n {
        let g = glued_product(&chain, &trans, v, None, Some(&points))?;
        // g = (src, sig[0..t], label, dst', shared); drop the shared block.
        chain = select(&g, &(0..v + t + 1 + v).collect::<Vec<_>>())?;
    }
    let g = glued_product(&chain, &cap, v, None, Some(&cap_points))?;
    let mut out = select(&g, &(0..v + n + v).collect::<Vec<_>>())?;
    let proj = out.projection().to_vec();
    for i in 0..v {
        out.set_label(proj[i], format!("src[{i}]"));
        out.set_label(proj[v + n + i], format!("dst[{i}]"));
    }
    for j in 0..n {
        out.set_label(proj[v + j], format!("sig[{j}]"));
    }
    Ok(out)
}

/// Counted bound `2|V| + |A| · n` for the Markovian polytope.
pub fn markov_bound(d: &LabeledDigraph, n: usize) -> usize {
    2 * d.nodes + d.arcs.len() * n
}

/// Formulation of `conv(L_A(n))`: a face of `Φ_{n+2}` of the automaton's
/// graph with start and finish nodes added, fixing the endpoints and the two
/// 0-labeled special arcs, projected onto the middle `n` labels.
pub fn language_ef_from_automaton<S: Scalar>(a: &StreamingAutomaton, n: usize) -> Result<ExtendedFormulation<S>> {
    let d = add_special_nodes(a);
    let v = d.nodes;
    let (start, finish) = (d.start.expect("set"), d.finish.expect("set"));
    let phi = markov_polytope::<S>(&d, n + 2)?;
    let mut fix: Vec<(usize, u8)> = Vec::with_capacity(2 * v + 2);
    for i in 0..v {
        fix.push((i, (i == start) as u8));
        fix.push((v + n + 2 + i, (i == finish) as u8));
    }
    fix.push((v, 0));
    fix.push((v + n + 1, 0));
    let f = face(&phi, &fix)?;
    Ok(select(&f, &(v + 1..v + 1 + n).collect::<Vec<_>>())?.with_projection_labels("x"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langs::all_strings;
    use crate::polytope::{membership, membership_bits};
    use crate::zoo::parity_automaton;
    use crate::Rational;

    type Ef = ExtendedFormulation<Rational>;

    /// All `(e_u, σ, e_v)` over walks of length `n`, by brute force.
    fn walks(d: &LabeledDigraph, n: usize) -> BTreeSet<Vec<u8>> {
        let mut out = BTreeSet::new();
        for u in 0..d.nodes {
            let mut frontier: Vec<(usize, Vec<u8>)> = vec![(u, vec![])];
            for _ in 0..n {
                frontier = frontier
                    .iter()
                    .flat_map(|(x, sig)| {
                        d.arcs.iter().filter(move |a| a.0 == *x).map(move |&(_, y, b)| {
                            let mut s = sig.clone();
                            s.push(b);
                            (y, s)
                        })
                    })
                    .collect();
            }
            for (v, sig) in frontier {
                out.insert([unit(d.nodes, u), sig, unit(d.nodes, v)].concat());
            }
        }
        out
    }

    fn loops() -> LabeledDigraph {
        LabeledDigraph { nodes: 1, arcs: vec![(0, 0, 0), (0, 0, 1)], start: None, finish: None }
    }

    #[test]
    fn transition_polytopes() {
        let single = LabeledDigraph { nodes: 2, arcs: vec![(0, 1, 1)], start: None, finish: None };
        let t: Ef = trans_polytope(&single).unwrap();
        assert_eq!(t.size(), 1);
        assert!(membership_bits(&t, &[1, 0, 1, 0, 1]).unwrap());
        let l: Ef = trans_polytope(&loops()).unwrap();
        assert_eq!(l.size(), 2);
        let parity = add_special_nodes(&parity_automaton());
        assert_eq!(trans_polytope::<Rational>(&parity).unwrap().size(), 6);
        let empty = LabeledDigraph { nodes: 2, arcs: vec![], start: None, finish: None };
        assert_eq!(trans_polytope::<Rational>(&empty).unwrap_err(), Error::EmptyGraph);
    }

    #[test]
    fn markov_members_are_walks() {
        let single = LabeledDigraph { nodes: 2, arcs: vec![(0, 1, 1)], start: None, finish: None };
        let parity = add_special_nodes(&parity_automaton());
        for (d, nmax) in [(loops(), 3), (single, 2), (parity, 3)] {
            for n in 1..=nmax {
                let e: Ef = markov_polytope(&d, n).unwrap();
                let t = trans_polytope::<Rational>(&d).unwrap().size();
                assert_eq!(e.size(), 2 * d.nodes + n * t);
                assert!(e.size() <= markov_bound(&d, n));
                let expect = walks(&d, n);
                for p in all_strings(2 * d.nodes + n) {
                    assert_eq!(membership_bits(&e, &p).unwrap(), expect.contains(&p), "n={n} {p:?}");
                }
            }
        }
        let e: Ef = markov_polytope(&loops(), 2).unwrap();
        assert_eq!(e.projection_labels(), ["src[0]", "sig[0]", "sig[1]", "dst[0]"]);
    }

    #[test]
    fn parity_language() {
        let a = parity_automaton();
        for n in 1..=5 {
            let e: Ef = language_ef_from_automaton(&a, n).unwrap();
            let d = add_special_nodes(&a);
            assert_eq!(e.size(), 2 * d.nodes + (n + 2) * d.arcs.len());
            assert!(e.size() <= markov_bound(&d, n + 2));
            for x in all_strings(n) {
                let even = x.iter().filter(|&&b| b == 1).count() % 2 == 0;
                assert_eq!(membership_bits(&e, &x).unwrap(), even);
            }
        }
    }

    #[test]
    fn full_and_empty_languages() {
        let all = StreamingAutomaton::new(1, vec![(0, 0, 0), (0, 1, 0)], vec![0], vec![0]).unwrap();
        let e: Ef = language_ef_from_automaton(&all, 2).unwrap();
        assert!(all_strings(2).all(|x| membership_bits(&e, &x).unwrap()));
        let half = Rational::new(1, 2);
        assert!(membership(&e, &[half.clone(), half]).unwrap());

        let none = StreamingAutomaton::new(1, vec![(0, 0, 0), (0, 1, 0)], vec![0], vec![]).unwrap();
        let e: Ef = language_ef_from_automaton(&none, 3).unwrap();
        assert!(e.is_empty().unwrap());
        assert!(all_strings(3).all(|x| !membership_bits(&e, &x).unwrap()));
    }

    #[test]
    fn fractional_points_off_the_walks() {
        let e: Ef = markov_polytope(&loops(), 1).unwrap();
        // Source and destination blocks must sum to 1.
        let p = [Rational::new(1, 2), Rational::integer(0), Rational::integer(1)];
        assert!(!membership(&e, &p).unwrap());
        let q = [Rational::integer(1), Rational::new(1, 3), Rational::integer(1)];
        assert!(membership(&e, &q).unwrap());
    }
}
