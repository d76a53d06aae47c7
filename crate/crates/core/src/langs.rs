//! Language specifications and the brute-force membership/enumeration
//! oracle that every compiled formulation is checked against.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machines::{
    first_bit_machine, two_pass_mod6_machine, LabeledDigraph, OnlineTM, StreamingAutomaton,
    TWO_PASS_MOD6_SPACE,
};
use crate::polytope::Support;
use crate::scalar::Scalar;
use crate::zoo;

/// Longest strings `enumerate` will sweep by default.
pub const DEFAULT_CAP: usize = 16;

/// Worktape size of a machine leaf, either fixed or given per input length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceBound {
    Const(usize),
    PerLength(#[serde(with = "length_keys")] BTreeMap<usize, usize>),
}

/// Maps keyed by string length. JSON object keys are strings, and tagged
/// enums buffer their content, so the keys are converted by hand.
mod length_keys {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<T: Serialize, S: Serializer>(m: &BTreeMap<usize, T>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().map(|(k, v)| (k.to_string(), v)).collect::<BTreeMap<String, &T>>().serialize(s)
    }

    pub fn deserialize<'de, T: Deserialize<'de>, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, T>, D::Error> {
        BTreeMap::<String, T>::deserialize(d)?
            .into_iter()
            .map(|(k, v)| k.parse().map(|k| (k, v)).map_err(|_| D::Error::custom(format!("`{k}` is not a length"))))
            .collect()
    }
}

impl SpaceBound {
    pub fn at(&self, n: usize) -> Result<usize> {
        match self {
            SpaceBound::Const(s) => Ok(*s),
            SpaceBound::PerLength(m) => m
                .get(&n)
                .copied()
                .ok_or_else(|| Error::InvalidArgument(format!("no space bound given for n = {n}"))),
        }
    }
}

fn one_pass() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LanguageSpec {
    /// Strings keyed by length; absent lengths are empty.
    Explicit {
        #[serde(with = "length_keys")]
        strings: BTreeMap<usize, Vec<String>>,
    },
    Automaton(StreamingAutomaton),
    /// Signatures of walks from `start` to `finish` (any node when unset).
    Digraph(LabeledDigraph),
    Machine {
        tm: OnlineTM,
        #[serde(default = "one_pass")]
        passes: usize,
        space: SpaceBound,
    },
    /// Even number of ones: the last bit is the parity of the others.
    Parity,
    /// Strings starting with 1, recognized by a one-cell online machine.
    FirstBit,
    /// Binary encodings of the integer partitions of `m`, at length
    /// `m · ⌈log₂(m+1)⌉`; other lengths are empty.
    Bipp,
    /// `{x ∈ {0,1}^|weights| : weights·x <= capacity}`.
    Knapsack { weights: Vec<u64>, capacity: u64 },
    /// Number of ones divisible by 6, decided by a two-pass machine.
    TwoPassMod6,
    Complement { of: Box<LanguageSpec> },
    Union { a: Box<LanguageSpec>, b: Box<LanguageSpec> },
    Intersection { a: Box<LanguageSpec>, b: Box<LanguageSpec> },
    Difference { a: Box<LanguageSpec>, b: Box<LanguageSpec> },
    Concat { a: Box<LanguageSpec>, b: Box<LanguageSpec> },
    Star { of: Box<LanguageSpec> },
}

pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parse(format!("`{s}` is not a bit string"))),
        })
        .collect()
}

pub fn bits_to_string(x: &[u8]) -> String {
    x.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
}

/// All strings of length `n` in lexicographic order.
pub fn all_strings(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..1u64 << n).map(move |m| (0..n).map(|i| ((m >> (n - 1 - i)) & 1) as u8).collect())
}

/// An automaton with no accepting state.
fn rejecting_automaton() -> StreamingAutomaton {
    StreamingAutomaton::new(1, vec![], vec![0], vec![]).expect("valid automaton")
}

impl LanguageSpec {
    pub fn explicit<'a>(strings: impl IntoIterator<Item = &'a str>) -> LanguageSpec {
        let mut map: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for s in strings {
            map.entry(s.len()).or_default().push(s.to_string());
        }
        LanguageSpec::Explicit { strings: map }
    }

    pub fn complement(of: LanguageSpec) -> LanguageSpec {
        LanguageSpec::Complement { of: Box::new(of) }
    }

    pub fn union(a: LanguageSpec, b: LanguageSpec) -> LanguageSpec {
        LanguageSpec::Union { a: Box::new(a), b: Box::new(b) }
    }

    pub fn intersection(a: LanguageSpec, b: LanguageSpec) -> LanguageSpec {
        LanguageSpec::Intersection { a: Box::new(a), b: Box::new(b) }
    }

    pub fn difference(a: LanguageSpec, b: LanguageSpec) -> LanguageSpec {
        LanguageSpec::Difference { a: Box::new(a), b: Box::new(b) }
    }

    pub fn concat(a: LanguageSpec, b: LanguageSpec) -> LanguageSpec {
        LanguageSpec::Concat { a: Box::new(a), b: Box::new(b) }
    }

    pub fn star(of: LanguageSpec) -> LanguageSpec {
        LanguageSpec::Star { of: Box::new(of) }
    }

    pub fn from_json(text: &str) -> Result<LanguageSpec> {
        let spec: LanguageSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs serialize")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LanguageSpec::Explicit { strings } => {
                for (n, set) in strings {
                    for s in set {
                        if parse_bits(s)?.len() != *n {
                            return Err(Error::Parse(format!("`{s}` listed under length {n}")));
                        }
                    }
                }
                Ok(())
            }
            LanguageSpec::Digraph(d) => d.validate(),
            LanguageSpec::Machine { passes, .. } if *passes == 0 => {
                Err(Error::InvalidArgument("machine needs at least one pass".into()))
            }
            LanguageSpec::Complement { of } | LanguageSpec::Star { of } => of.validate(),
            LanguageSpec::Union { a, b }
            | LanguageSpec::Intersection { a, b }
            | LanguageSpec::Difference { a, b }
            | LanguageSpec::Concat { a, b } => {
                a.validate()?;
                b.validate()
            }
            _ => Ok(()),
        }
    }

    /// Short description of the node kind, for reports and file headers.
    pub fn kind(&self) -> &'static str {
        match self {
            LanguageSpec::Explicit { .. } => "explicit",
            LanguageSpec::Automaton(_) => "automaton",
            LanguageSpec::Digraph(_) => "digraph",
            LanguageSpec::Machine { .. } => "machine",
            LanguageSpec::Parity => "parity",
            LanguageSpec::FirstBit => "first_bit",
            LanguageSpec::Bipp => "bipp",
            LanguageSpec::Knapsack { .. } => "knapsack",
            LanguageSpec::TwoPassMod6 => "two_pass_mod6",
            LanguageSpec::Complement { .. } => "complement",
            LanguageSpec::Union { .. } => "union",
            LanguageSpec::Intersection { .. } => "intersection",
            LanguageSpec::Difference { .. } => "difference",
            LanguageSpec::Concat { .. } => "concat",
            LanguageSpec::Star { .. } => "star",
        }
    }

    /// True for leaves that denote an automaton or machine.
    pub fn is_automaton_leaf(&self) -> bool {
        matches!(
            self,
            LanguageSpec::Automaton(_)
                | LanguageSpec::Digraph(_)
                | LanguageSpec::Machine { .. }
                | LanguageSpec::Parity
                | LanguageSpec::FirstBit
                | LanguageSpec::Bipp
                | LanguageSpec::Knapsack { .. }
                | LanguageSpec::TwoPassMod6
        )
    }

    /// The machine, pass count and space bound of a machine leaf at length
    /// `n`.
    fn machine_at(&self, n: usize) -> Option<Result<(OnlineTM, usize, usize)>> {
        match self {
            LanguageSpec::Machine { tm, passes, space } => Some(space.at(n).map(|s| (tm.clone(), *passes, s))),
            LanguageSpec::FirstBit => Some(Ok((first_bit_machine(), 1, 1))),
            LanguageSpec::TwoPassMod6 => Some(Ok((two_pass_mod6_machine(n), 2, TWO_PASS_MOD6_SPACE))),
            _ => None,
        }
    }

    /// A streaming automaton whose length-`n` strings are `L(n)`.
    pub fn automaton(&self, n: usize) -> Result<StreamingAutomaton> {
        if let Some(m) = self.machine_at(n) {
            let (tm, passes, space) = m?;
            return Ok(crate::machines::kpass_to_onepass(&tm, passes, n, space)?.automaton);
        }
        match self {
            LanguageSpec::Automaton(a) => Ok(a.clone()),
            LanguageSpec::Digraph(d) => d.to_automaton(),
            LanguageSpec::Parity => Ok(zoo::parity_automaton()),
            LanguageSpec::Bipp => Ok(match zoo::bipp_parameter(n) {
                Some(m) => zoo::bipp_automaton(m),
                None => rejecting_automaton(),
            }),
            LanguageSpec::Knapsack { weights, capacity } if weights.len() == n => {
                Ok(zoo::knapsack_automaton(weights, *capacity))
            }
            LanguageSpec::Knapsack { .. } => Ok(rejecting_automaton()),
            other => Err(Error::NotCompilable(format!("a {} node is not an automaton", other.kind()))),
        }
    }

    pub fn member(&self, x: &[u8]) -> Result<bool> {
        let n = x.len();
        if let Some(m) = self.machine_at(n) {
            let (tm, passes, space) = m?;
            return tm.simulate(x, space, passes);
        }
        Ok(match self {
            LanguageSpec::Explicit { strings } => {
                let s = bits_to_string(x);
                strings.get(&n).is_some_and(|set| set.contains(&s))
            }
            LanguageSpec::Automaton(_)
            | LanguageSpec::Digraph(_)
            | LanguageSpec::Parity
            | LanguageSpec::Bipp
            | LanguageSpec::Knapsack { .. } => self.automaton(n)?.run(x),
            LanguageSpec::Complement { of } => !of.member(x)?,
            LanguageSpec::Union { a, b } => a.member(x)? || b.member(x)?,
            LanguageSpec::Intersection { a, b } => a.member(x)? && b.member(x)?,
            LanguageSpec::Difference { a, b } => a.member(x)? && !b.member(x)?,
            LanguageSpec::Concat { a, b } => {
                for i in 0..=n {
                    if a.member(&x[..i])? && b.member(&x[i..])? {
                        return Ok(true);
                    }
                }
                false
            }
            LanguageSpec::Star { of } => {
                // reach[j]: the prefix of length j splits into members of `of`.
                let mut reach = vec![false; n + 1];
                reach[0] = true;
                for j in 1..=n {
                    for i in 0..j {
                        if reach[i] && of.member(&x[i..j])? {
                            reach[j] = true;
                            break;
                        }
                    }
                }
                reach[n]
            }
            LanguageSpec::Machine { .. } | LanguageSpec::FirstBit | LanguageSpec::TwoPassMod6 => {
                unreachable!("handled above")
            }
        })
    }

    /// `L(n)` in lexicographic order, for `n <= DEFAULT_CAP`.
    pub fn enumerate(&self, n: usize) -> Result<Vec<Vec<u8>>> {
        self.enumerate_with_cap(n, DEFAULT_CAP)
    }

    pub fn enumerate_with_cap(&self, n: usize, cap: usize) -> Result<Vec<Vec<u8>>> {
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        Ok(self.enumerate_set(n)?.into_iter().collect())
    }

    fn enumerate_set(&self, n: usize) -> Result<BTreeSet<Vec<u8>>> {
        if self.machine_at(n).is_some() {
            return self.sweep(n);
        }
        Ok(match self {
            LanguageSpec::Explicit { strings } => strings
                .get(&n)
                .map(|set| set.iter().map(|s| parse_bits(s)).collect::<Result<_>>())
                .transpose()?
                .unwrap_or_default(),
            LanguageSpec::Automaton(_)
            | LanguageSpec::Digraph(_)
            | LanguageSpec::Parity
            | LanguageSpec::Bipp
            | LanguageSpec::Knapsack { .. } => {
                let a = self.automaton(n)?;
                all_strings(n).filter(|x| a.run(x)).collect()
            }
            LanguageSpec::Complement { of } => {
                let inner = of.enumerate_set(n)?;
                all_strings(n).filter(|x| !inner.contains(x)).collect()
            }
            LanguageSpec::Union { a, b } => &a.enumerate_set(n)? | &b.enumerate_set(n)?,
            LanguageSpec::Intersection { a, b } => &a.enumerate_set(n)? & &b.enumerate_set(n)?,
            LanguageSpec::Difference { a, b } => &a.enumerate_set(n)? - &b.enumerate_set(n)?,
            LanguageSpec::Concat { a, b } => {
                let mut out = BTreeSet::new();
                for i in 0..=n {
                    let left = a.enumerate_set(i)?;
                    if left.is_empty() {
                        continue;
                    }
                    let right = b.enumerate_set(n - i)?;
                    for x in &left {
                        for y in &right {
                            out.insert([x.as_slice(), y.as_slice()].concat());
                        }
                    }
                }
                out
            }
            LanguageSpec::Star { of } => {
                // levels[m] = L*(m) = ∪_{k=1..m} L(k)·L*(m-k)
                let mut levels: Vec<BTreeSet<Vec<u8>>> = vec![BTreeSet::from([Vec::new()])];
                let pieces: Vec<BTreeSet<Vec<u8>>> =
                    (0..=n).map(|k| if k == 0 { Ok(BTreeSet::new()) } else { of.enumerate_set(k) }).collect::<Result<_>>()?;
                for m in 1..=n {
                    let mut level = BTreeSet::new();
                    for k in 1..=m {
                        for p in &pieces[k] {
                            for rest in &levels[m - k] {
                                level.insert([p.as_slice(), rest.as_slice()].concat());
                            }
                        }
                    }
                    levels.push(level);
                }
                levels.pop().expect("n + 1 levels")
            }
            LanguageSpec::Machine { .. } | LanguageSpec::FirstBit | LanguageSpec::TwoPassMod6 => {
                unreachable!("handled above")
            }
        })
    }

    fn sweep(&self, n: usize) -> Result<BTreeSet<Vec<u8>>> {
        let mut out = BTreeSet::new();
        for x in all_strings(n) {
            if self.member(&x)? {
                out.insert(x);
            }
        }
        Ok(out)
    }
}

/// `max c·x` over the given 0/1 points.
pub fn support_over<S: Scalar>(points: &[Vec<u8>], c: &[S]) -> Support<S> {
    points
        .iter()
        .map(|p| {
            p.iter()
                .zip(c)
                .filter(|(b, _)| **b == 1)
                .fold(S::zero(), |acc, (_, x)| acc.add_ref(x))
        })
        .max()
        .map_or(Support::Infeasible, Support::Value)
}

/// `max c·x` over `L(n)`, or `Infeasible` when `L(n)` is empty.
pub fn oracle_support<S: Scalar>(l: &LanguageSpec, n: usize, c: &[S]) -> Result<Support<S>> {
    if c.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c.len() });
    }
    Ok(support_over(&l.enumerate(n)?, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn strs(v: &[Vec<u8>]) -> Vec<String> {
        v.iter().map(|x| bits_to_string(x)).collect()
    }

    fn ones(x: &[u8]) -> usize {
        x.iter().filter(|&&b| b == 1).count()
    }

    fn bundled() -> Vec<LanguageSpec> {
        vec![
            LanguageSpec::Parity,
            LanguageSpec::FirstBit,
            LanguageSpec::Bipp,
            LanguageSpec::Knapsack { weights: vec![3, 5, 7], capacity: 10 },
            LanguageSpec::TwoPassMod6,
            LanguageSpec::explicit(["", "0", "11", "101"]),
            LanguageSpec::star(LanguageSpec::explicit(["1", "00"])),
            LanguageSpec::concat(LanguageSpec::Parity, LanguageSpec::FirstBit),
            LanguageSpec::union(LanguageSpec::FirstBit, LanguageSpec::explicit(["000"])),
            LanguageSpec::difference(LanguageSpec::Parity, LanguageSpec::FirstBit),
            LanguageSpec::complement(LanguageSpec::intersection(LanguageSpec::Parity, LanguageSpec::FirstBit)),
        ]
    }

    #[test]
    fn parity_enumeration() {
        let p = LanguageSpec::Parity;
        assert_eq!(strs(&p.enumerate(3).unwrap()), ["000", "011", "101", "110"]);
        assert_eq!(strs(&p.enumerate(1).unwrap()), ["0"]);
        for x in all_strings(8) {
            assert_eq!(p.member(&x).unwrap(), ones(&x).is_multiple_of(2));
        }
        let c = [Rational::integer(1), Rational::integer(1), Rational::integer(1)];
        assert_eq!(oracle_support(&p, 3, &c).unwrap(), Support::Value(Rational::integer(2)));
        let zero = vec![Rational::integer(0); 3];
        assert_eq!(oracle_support(&p, 3, &zero).unwrap(), Support::Value(Rational::integer(0)));
        assert!(!LanguageSpec::complement(p).member(&[0, 1, 1]).unwrap());
    }

    #[test]
    fn concat_and_star() {
        let zero = LanguageSpec::explicit(["0"]);
        let one = LanguageSpec::explicit(["1"]);
        assert!(LanguageSpec::concat(zero, one).member(&[0, 1]).unwrap());

        let ones2 = LanguageSpec::star(LanguageSpec::explicit(["11"]));
        assert!(ones2.member(&[1, 1, 1, 1]).unwrap());
        assert!(!ones2.member(&[1, 1, 1]).unwrap());
        assert!(ones2.enumerate(3).unwrap().is_empty());

        let s = LanguageSpec::star(LanguageSpec::explicit(["1", "00"]));
        assert_eq!(strs(&s.enumerate(3).unwrap()), ["001", "100", "111"]);
        assert_eq!(s.enumerate(0).unwrap(), vec![Vec::<u8>::new()]);
        let empty = LanguageSpec::explicit([]);
        assert!(empty.enumerate(0).unwrap().is_empty());
        let c = [Rational::integer(1)];
        assert_eq!(oracle_support(&empty, 1, &c).unwrap(), Support::Infeasible);
    }

    #[test]
    fn enumerate_agrees_with_member() {
        for l in bundled() {
            for n in 0..=10 {
                let listed: BTreeSet<Vec<u8>> = l.enumerate(n).unwrap().into_iter().collect();
                for x in all_strings(n) {
                    assert_eq!(listed.contains(&x), l.member(&x).unwrap(), "{} at {x:?}", l.kind());
                }
            }
        }
    }

    #[test]
    fn two_pass_machine_language() {
        for x in all_strings(8) {
            assert_eq!(LanguageSpec::TwoPassMod6.member(&x).unwrap(), ones(&x).is_multiple_of(6));
        }
    }

    #[test]
    fn de_morgan() {
        let a = LanguageSpec::Parity;
        let b = LanguageSpec::FirstBit;
        let lhs = LanguageSpec::complement(LanguageSpec::union(a.clone(), b.clone()));
        let rhs = LanguageSpec::intersection(LanguageSpec::complement(a), LanguageSpec::complement(b));
        for n in 0..=8 {
            assert_eq!(lhs.enumerate(n).unwrap(), rhs.enumerate(n).unwrap());
        }
    }

    #[test]
    fn star_is_fixed_point_of_concat_powers() {
        let base = LanguageSpec::explicit(["1", "01", "000"]);
        let star = LanguageSpec::star(base.clone());
        // Union of L^0 .. L^n, truncated at length n.
        let n = 7;
        let mut power = LanguageSpec::explicit([""]);
        let mut acc = power.clone();
        for _ in 0..n {
            power = LanguageSpec::concat(power, base.clone());
            acc = LanguageSpec::union(acc, power.clone());
        }
        for m in 0..=n {
            assert_eq!(star.enumerate(m).unwrap(), acc.enumerate(m).unwrap());
        }
    }

    #[test]
    fn cap_and_validation() {
        assert_eq!(LanguageSpec::Parity.enumerate(17).unwrap_err(), Error::CapExceeded { n: 17, cap: 16 });
        assert!(LanguageSpec::from_json(r#"{"type":"explicit","strings":{"2":["101"]}}"#).is_err());
        assert!(LanguageSpec::from_json(r#"{"type":"nope"}"#).is_err());
        assert!(matches!(LanguageSpec::star(LanguageSpec::Parity).automaton(3), Err(Error::NotCompilable(_))));
    }

    #[test]
    fn json_forms() {
        let text = r#"{"type":"star","of":{"type":"explicit","strings":{"1":["1"],"2":["00"]}}}"#;
        let l = LanguageSpec::from_json(text).unwrap();
        assert_eq!(l, LanguageSpec::star(LanguageSpec::explicit(["1", "00"])));
        assert_eq!(LanguageSpec::from_json(&l.to_json()).unwrap(), l);

        let m = r#"{"type":"machine","space":{"3":1,"4":1},
                    "tm":{"states":2,"initial":0,"accepting":[1],"deterministic":true,
                          "transitions":[[0,"0","1",1,"0S"],[1,"0","0",1,"0S"],[1,"0","1",1,"0S"]]}}"#;
        let l = LanguageSpec::from_json(m).unwrap();
        assert_eq!(l.enumerate(3).unwrap(), LanguageSpec::FirstBit.enumerate(3).unwrap());
        assert!(l.enumerate(5).is_err());

        let a = r#"{"type":"automaton","states":2,"transitions":[[0,0,0],[0,1,1],[1,0,1],[1,1,0]],
                    "initial":[0],"accepting":[0]}"#;
        let l = LanguageSpec::from_json(a).unwrap();
        assert_eq!(l.enumerate(4).unwrap(), LanguageSpec::Parity.enumerate(4).unwrap());

        let d = r#"{"type":"digraph","nodes":2,"arcs":[[0,1,1],[1,0,0]],"start":0,"finish":1}"#;
        let l = LanguageSpec::from_json(d).unwrap();
        assert_eq!(strs(&l.enumerate(3).unwrap()), ["101"]);

        let k = r#"{"type":"knapsack","weights":[1,2],"capacity":2}"#;
        assert_eq!(strs(&LanguageSpec::from_json(k).unwrap().enumerate(2).unwrap()), ["00", "01", "10"]);
    }

    proptest! {
        #[test]
        fn union_membership_is_disjunction(a in prop::collection::vec("[01]{0,5}", 0..6),
                                           b in prop::collection::vec("[01]{0,5}", 0..6),
                                           x in "[01]{0,5}") {
            let la = LanguageSpec::explicit(a.iter().map(String::as_str));
            let lb = LanguageSpec::explicit(b.iter().map(String::as_str));
            let bits = parse_bits(&x).unwrap();
            let u = LanguageSpec::union(la.clone(), lb.clone());
            prop_assert_eq!(u.member(&bits).unwrap(), a.contains(&x) || b.contains(&x));
            let c = LanguageSpec::concat(la, lb);
            let direct = (0..=x.len()).any(|i| a.contains(&x[..i].to_string()) && b.contains(&x[i..].to_string()));
            prop_assert_eq!(c.member(&bits).unwrap(), direct);
        }
    }
}
