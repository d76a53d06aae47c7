//! Concrete languages and formulas: parity, CUTSAT and cut vectors,
//! DNF/UNSAT formulations, binary integer partitions and knapsack.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::exactlp::{LinConstraint, LinSystem};
use crate::machines::StreamingAutomaton;
use crate::polytope::{balas_union_all, empty_ef, ExtendedFormulation};
use crate::scalar::Scalar;

/// Running-parity automaton: 0 loops, 1 swaps, state 0 (even) is initial
/// and accepting. It accepts exactly the strings whose last bit equals the
/// parity of the bits before it.
pub fn parity_automaton() -> StreamingAutomaton {
    StreamingAutomaton::new(2, vec![(0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 0)], vec![0], vec![0])
        .expect("valid automaton")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Literal {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Literal {
        Literal { var, positive: false }
    }

    fn holds(self, x: &[u8]) -> bool {
        (x[self.var] == 1) == self.positive
    }
}

/// Conjunction of disjunctive clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<Literal>>,
}

/// Disjunction of conjunctive terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dnf {
    pub vars: usize,
    pub terms: Vec<Vec<Literal>>,
}

fn check_literals(vars: usize, lists: &[Vec<Literal>]) -> Result<()> {
    for l in lists.iter().flatten() {
        if l.var >= vars {
            return Err(Error::IndexOutOfRange { index: l.var, dim: vars });
        }
    }
    Ok(())
}

impl Cnf {
    pub fn new(vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Cnf> {
        check_literals(vars, &clauses)?;
        Ok(Cnf { vars, clauses })
    }

    pub fn eval(&self, x: &[u8]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.holds(x)))
    }

    /// Satisfying assignments by truth-table sweep, in lexicographic order.
    pub fn satisfying(&self) -> Vec<Vec<u8>> {
        crate::langs::all_strings(self.vars).filter(|x| self.eval(x)).collect()
    }

    /// `¬φ` as a DNF, one term per clause.
    pub fn negation(&self) -> Dnf {
        Dnf {
            vars: self.vars,
            terms: self
                .clauses
                .iter()
                .map(|c| c.iter().map(|l| Literal { var: l.var, positive: !l.positive }).collect())
                .collect(),
        }
    }
}

impl Dnf {
    pub fn new(vars: usize, terms: Vec<Vec<Literal>>) -> Result<Dnf> {
        check_literals(vars, &terms)?;
        Ok(Dnf { vars, terms })
    }

    pub fn eval(&self, x: &[u8]) -> bool {
        self.terms.iter().any(|t| t.iter().all(|l| l.holds(x)))
    }
}

/// Index of `x_{ij}` among the `n²` CUTSAT variables.
pub fn cutsat_var(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

/// For every ordered pair `i ≠ j`, four clauses forcing
/// `x_{ij} = x_{ii} ⊕ x_{jj}`.
pub fn cutsat_formula(n: usize) -> Result<Cnf> {
    if n < 2 {
        return Err(Error::InvalidArgument("CUTSAT needs n >= 2".into()));
    }
    let mut clauses = Vec::with_capacity(4 * n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b, c) = (cutsat_var(n, i, i), cutsat_var(n, j, j), cutsat_var(n, i, j));
            // Each clause forbids one assignment of (a, b, c) with c ≠ a ⊕ b.
            for (pa, pb, pc) in [(true, true, false), (true, false, true), (false, true, true), (false, false, false)] {
                clauses.push(vec![
                    Literal { var: a, positive: pa },
                    Literal { var: b, positive: pb },
                    Literal { var: c, positive: pc },
                ]);
            }
        }
    }
    Cnf::new(n * n, clauses)
}

/// Edges of `K_n` as `(i, j)` with `i < j`, in lexicographic order.
pub fn complete_graph_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Restriction of a CUTSAT assignment to the variables `x_{ij}`, `i < j`.
pub fn off_diagonal(n: usize, x: &[u8]) -> Vec<u8> {
    complete_graph_edges(n).into_iter().map(|(i, j)| x[cutsat_var(n, i, j)]).collect()
}

/// Cut vectors of `K_n`, indexed by [`complete_graph_edges`].
pub fn cut_vectors(n: usize) -> BTreeSet<Vec<u8>> {
    let edges = complete_graph_edges(n);
    (0..1u64 << n)
        .map(|side| {
            edges
                .iter()
                .map(|&(i, j)| (((side >> i) ^ (side >> j)) & 1) as u8)
                .collect()
        })
        .collect()
}

/// The face of `[0,1]^d` fixing the literals of one term, or `None` if the
/// term is contradictory.
fn term_face<S: Scalar>(d: usize, term: &[Literal]) -> Option<ExtendedFormulation<S>> {
    let mut fixed: HashMap<usize, bool> = HashMap::new();
    for l in term {
        if *fixed.entry(l.var).or_insert(l.positive) != l.positive {
            return None;
        }
    }
    let mut system = LinSystem::new(d);
    for v in 0..d {
        let row = match fixed.get(&v) {
            Some(&p) => LinConstraint::eq(vec![(v, S::one())], if p { S::one() } else { S::zero() }),
            None => {
                system.push(LinConstraint::le(vec![(v, -S::one())], S::zero())).expect("in range");
                LinConstraint::le(vec![(v, S::one())], S::one())
            }
        };
        system.push(row).expect("in range");
    }
    Some(
        ExtendedFormulation::new(system, (0..d).collect())
            .expect("identity projection")
            .with_projection_labels("x"),
    )
}

/// Balas union of hypercube faces, one per satisfiable term.
pub fn dnf_ef<S: Scalar>(phi: &Dnf) -> Result<ExtendedFormulation<S>> {
    if phi.terms.is_empty() {
        return Err(Error::EmptyFormula);
    }
    let faces = phi.terms.iter().filter_map(|t| term_face(phi.vars, t));
    balas_union_all(phi.vars, faces)
}

/// Formulation of the non-satisfying assignments of `phi`, via the DNF of
/// its negation.
pub fn unsat_ef<S: Scalar>(phi: &Cnf) -> Result<ExtendedFormulation<S>> {
    if phi.clauses.is_empty() {
        return Ok(empty_ef(phi.vars));
    }
    dnf_ef(&phi.negation())
}

/// Bits per part in the binary partition encoding: `⌈log₂(n+1)⌉`.
pub fn bipp_width(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// The `n` with `n · bipp_width(n) = len`, if any.
pub fn bipp_parameter(len: usize) -> Option<usize> {
    (1..=len).take_while(|&n| n * bipp_width(n) <= len).find(|&n| n * bipp_width(n) == len)
}

/// Automaton over `n · w` bits reading `x_1, …, x_n` in order, each as `w`
/// bits least significant first, accepting iff `Σ k·x_k = n`. States are
/// `(s, l, i)` (running sum, bit exponent, part index) plus one accepting
/// state; a bit that would push `s` past `n` has no transition.
pub fn bipp_automaton(n: usize) -> StreamingAutomaton {
    let w = bipp_width(n);
    let id = |s: usize, l: usize, i: usize| (i * w + l) * (n + 1) + s;
    let accept = n * w * (n + 1);
    let mut transitions = Vec::new();
    for i in 0..n {
        for l in 0..w {
            for s in 0..=n {
                for b in 0..2u8 {
                    let s2 = s + (i + 1) * (1 << l) * b as usize;
                    if s2 > n {
                        continue;
                    }
                    let (l2, i2) = if l + 1 == w { (0, i + 1) } else { (l + 1, i) };
                    if i2 == n {
                        if s2 == n {
                            transitions.push((id(s, l, i), b, accept));
                        }
                    } else {
                        transitions.push((id(s, l, i), b, id(s2, l2, i2)));
                    }
                }
            }
        }
    }
    let full = StreamingAutomaton::new(accept + 1, transitions, vec![id(0, 0, 0)], vec![accept])
        .expect("valid automaton");
    trim(&full)
}

/// Decodes a BIPP input into `(x_1, …, x_n)`.
pub fn decode_bipp(n: usize, bits: &[u8]) -> Vec<u64> {
    let w = bipp_width(n);
    bits.chunks(w)
        .map(|c| c.iter().enumerate().map(|(l, &b)| (b as u64) << l).sum())
        .collect()
}

/// All `x ∈ ℕ^n` with `Σ k·x_k = n`.
pub fn ipp_points(n: usize) -> Vec<Vec<u64>> {
    fn rec(k: usize, rest: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if k == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for c in 0..=rest / k {
            cur[k - 1] = c as u64;
            rec(k - 1, rest - c * k, cur, out);
        }
        cur[k - 1] = 0;
    }
    let mut out = Vec::new();
    rec(n, n, &mut vec![0; n], &mut out);
    out.sort();
    out
}

/// Fixed-instance knapsack: accepts `x ∈ {0,1}^|a|` with `a·x <= b`. States
/// are `(position, running sum)`; an item that would overflow `b` has no
/// transition.
pub fn knapsack_automaton(a: &[u64], b: u64) -> StreamingAutomaton {
    let mut ids: HashMap<(usize, u64), usize> = HashMap::from([((0, 0), 0)]);
    let mut states = vec![(0usize, 0u64)];
    let mut queue = VecDeque::from([0usize]);
    let mut transitions = Vec::new();
    while let Some(u) = queue.pop_front() {
        let (pos, sum) = states[u];
        if pos == a.len() {
            continue;
        }
        for bit in 0..2u8 {
            let s2 = sum + if bit == 1 { a[pos] } else { 0 };
            if s2 > b {
                continue;
            }
            let next = states.len();
            let v = *ids.entry((pos + 1, s2)).or_insert(next);
            if v == next {
                states.push((pos + 1, s2));
                queue.push_back(v);
            }
            transitions.push((u, bit, v));
        }
    }
    let accepting = (0..states.len()).filter(|&q| states[q].0 == a.len()).collect();
    StreamingAutomaton::new(states.len(), transitions, vec![0], accepting).expect("valid automaton")
}

/// Keeps the states that are reachable from an initial state and can reach
/// an accepting one.
pub fn trim(a: &StreamingAutomaton) -> StreamingAutomaton {
    let n = a.states();
    let sweep = |seeds: &[usize], forward: bool| {
        let mut adj = vec![Vec::new(); n];
        for &(u, _, v) in a.transitions() {
            if forward {
                adj[u].push(v);
            } else {
                adj[v].push(u);
            }
        }
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = seeds.to_vec();
        for &q in seeds {
            seen[q] = true;
        }
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    };
    let fwd = sweep(a.initial(), true);
    let bwd = sweep(a.accepting(), false);
    let mut map = vec![usize::MAX; n];
    let mut count = 0;
    for q in 0..n {
        if fwd[q] && bwd[q] {
            map[q] = count;
            count += 1;
        }
    }
    if count == 0 || a.initial().iter().all(|&q| map[q] == usize::MAX) {
        return StreamingAutomaton::new(1, vec![], vec![0], vec![]).expect("valid automaton");
    }
    let keep = |qs: &[usize]| qs.iter().filter(|&&q| map[q] != usize::MAX).map(|&q| map[q]).collect();
    let transitions = a
        .transitions()
        .iter()
        .filter(|&&(u, _, v)| map[u] != usize::MAX && map[v] != usize::MAX)
        .map(|&(u, b, v)| (map[u], b, map[v]))
        .collect();
    StreamingAutomaton::new(count, transitions, keep(a.initial()), keep(a.accepting())).expect("valid automaton")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langs::{all_strings, bits_to_string};
    use crate::polytope::membership_bits;
    use crate::Rational;

    type Ef = ExtendedFormulation<Rational>;

    #[test]
    fn cutsat_counts() {
        let phi = cutsat_formula(3).unwrap();
        assert_eq!((phi.vars, phi.clauses.len()), (9, 24));
        let sat = phi.satisfying();
        assert_eq!(sat.len(), 8);
        for x in &sat {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        assert_eq!(x[cutsat_var(3, i, j)], x[cutsat_var(3, i, i)] ^ x[cutsat_var(3, j, j)]);
                    }
                }
            }
        }
        let proj: BTreeSet<Vec<u8>> = sat.iter().map(|x| off_diagonal(3, x)).collect();
        assert_eq!(proj, cut_vectors(3));
        assert!(cutsat_formula(1).is_err());
    }

    #[test]
    fn cuts_of_small_complete_graphs() {
        let c3: Vec<String> = cut_vectors(3).iter().map(|v| bits_to_string(v)).collect();
        assert_eq!(c3, ["000", "011", "101", "110"]);
        assert_eq!(cut_vectors(2).len(), 2);
        for n in 2..=6 {
            assert_eq!(cut_vectors(n).len(), 1 << (n - 1));
        }
    }

    #[test]
    fn dnf_formulation() {
        let phi = Dnf::new(3, vec![vec![Literal::pos(0), Literal::neg(1)], vec![Literal::pos(1), Literal::pos(2)]])
            .unwrap();
        let e: Ef = dnf_ef(&phi).unwrap();
        assert_eq!(e.size(), 6);
        let members: Vec<String> = all_strings(3)
            .filter(|x| membership_bits(&e, x).unwrap())
            .map(|x| bits_to_string(&x))
            .collect();
        assert_eq!(members, ["011", "100", "101", "111"]);

        let vertex = Dnf::new(2, vec![vec![Literal::pos(0), Literal::neg(1)]]).unwrap();
        let v: Ef = dnf_ef(&vertex).unwrap();
        for x in all_strings(2) {
            assert_eq!(membership_bits(&v, &x).unwrap(), x == vec![1, 0]);
        }
        let taut = Dnf::new(1, vec![vec![Literal::pos(0)], vec![Literal::neg(0)]]).unwrap();
        let t: Ef = dnf_ef(&taut).unwrap();
        assert!(all_strings(1).all(|x| membership_bits(&t, &x).unwrap()));
        assert_eq!(dnf_ef::<Rational>(&Dnf::new(1, vec![]).unwrap()).unwrap_err(), Error::EmptyFormula);
    }

    #[test]
    fn unsat_of_contradiction_is_cube() {
        let phi = Cnf::new(2, vec![vec![Literal::pos(0)], vec![Literal::neg(0)]]).unwrap();
        let e: Ef = unsat_ef(&phi).unwrap();
        assert!(all_strings(2).all(|x| membership_bits(&e, &x).unwrap()));
        let none = Cnf::new(2, vec![]).unwrap();
        let e: Ef = unsat_ef(&none).unwrap();
        assert!(all_strings(2).all(|x| !membership_bits(&e, &x).unwrap()));
    }

    #[test]
    fn unsat_cutsat_size() {
        for n in 2..=4 {
            let phi = cutsat_formula(n).unwrap();
            let e: Ef = unsat_ef(&phi).unwrap();
            let m = 4 * n * (n - 1);
            assert!(e.size() <= 2 * n * n * m + 2 * (m - 1));
        }
    }

    #[test]
    fn partitions() {
        assert_eq!(ipp_points(4), vec![vec![0, 0, 0, 1], vec![0, 2, 0, 0], vec![1, 0, 1, 0], vec![2, 1, 0, 0], vec![4, 0, 0, 0]]);
        assert_eq!(ipp_points(1), vec![vec![1]]);
        assert_eq!(ipp_points(6).len(), 11);
    }

    #[test]
    fn bipp_decodes_to_partitions() {
        assert_eq!(bipp_width(4), 3);
        assert_eq!(bipp_parameter(12), Some(4));
        assert_eq!(bipp_parameter(13), None);
        for n in 1..=4 {
            let a = bipp_automaton(n);
            let w = bipp_width(n);
            assert!(a.states() <= (n + 1) * w * (n + 1) + 1);
            let mut decoded: Vec<Vec<u64>> =
                all_strings(n * w).filter(|x| a.run(x)).map(|x| decode_bipp(n, &x)).collect();
            decoded.sort();
            assert_eq!(decoded, ipp_points(n));
        }
        let one: Vec<String> = all_strings(1).filter(|x| bipp_automaton(1).run(x)).map(|x| bits_to_string(&x)).collect();
        assert_eq!(one, ["1"]);
    }

    #[test]
    fn knapsack() {
        for (a, b) in [(vec![1, 2], 2), (vec![1, 1, 1], 3), (vec![3, 5, 7], 10), (vec![4, 1, 6, 2, 9, 3, 3, 5, 2, 7], 17)] {
            let k = knapsack_automaton(&a, b);
            for x in all_strings(a.len()) {
                let w: u64 = x.iter().zip(&a).map(|(&xi, &ai)| xi as u64 * ai).sum();
                assert_eq!(k.run(&x), w <= b);
            }
        }
        let small: Vec<String> =
            all_strings(2).filter(|x| knapsack_automaton(&[1, 2], 2).run(x)).map(|x| bits_to_string(&x)).collect();
        assert_eq!(small, ["00", "01", "10"]);
    }

    #[test]
    fn trimming_preserves_language() {
        let p = parity_automaton();
        let dead = StreamingAutomaton::new(4, [p.transitions(), &[(0, 1, 3), (2, 0, 0)]].concat(), vec![0], vec![0]).unwrap();
        let t = trim(&dead);
        assert_eq!(t.states(), 2);
        for x in all_strings(6) {
            assert_eq!(t.run(&x), dead.run(&x));
        }
    }
}
