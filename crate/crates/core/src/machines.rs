//! Streaming automata, online Turing machines and their configuration
//! graphs.
//!
//! An [`OnlineTM`] reads its input once, left to right, and works on a
//! bounded worktape over `{0, 1, _}`. For a fixed space bound its
//! configurations form a finite graph whose edges consume exactly one input
//! bit; that graph, read as a [`StreamingAutomaton`], accepts the same
//! strings as the machine.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nondeterministic automaton with 0/1-labeled transitions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAutomaton", into = "RawAutomaton")]
pub struct StreamingAutomaton {
    states: usize,
    transitions: Vec<(usize, u8, usize)>,
    initial: Vec<usize>,
    accepting: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawAutomaton {
    states: usize,
    transitions: Vec<(usize, u8, usize)>,
    initial: Vec<usize>,
    accepting: Vec<usize>,
}

impl TryFrom<RawAutomaton> for StreamingAutomaton {
    type Error = Error;

    fn try_from(r: RawAutomaton) -> Result<Self> {
        StreamingAutomaton::new(r.states, r.transitions, r.initial, r.accepting)
    }
}

impl From<StreamingAutomaton> for RawAutomaton {
    fn from(a: StreamingAutomaton) -> Self {
        RawAutomaton {
            states: a.states,
            transitions: a.transitions,
            initial: a.initial,
            accepting: a.accepting,
        }
    }
}

fn sorted_unique(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

impl StreamingAutomaton {
    pub fn new(
        states: usize,
        transitions: Vec<(usize, u8, usize)>,
        initial: Vec<usize>,
        accepting: Vec<usize>,
    ) -> Result<Self> {
        let check = |q: usize| {
            if q >= states {
                Err(Error::InvalidMachine(format!("state {q} out of range (states = {states})")))
            } else {
                Ok(())
            }
        };
        for &(u, b, v) in &transitions {
            check(u)?;
            check(v)?;
            if b > 1 {
                return Err(Error::InvalidMachine(format!("transition label {b} is not 0 or 1")));
            }
        }
        for &q in initial.iter().chain(&accepting) {
            check(q)?;
        }
        if initial.is_empty() {
            return Err(Error::InvalidMachine("automaton has no initial state".into()));
        }
        Ok(StreamingAutomaton {
            states,
            transitions,
            initial: sorted_unique(initial),
            accepting: sorted_unique(accepting),
        })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn transitions(&self) -> &[(usize, u8, usize)] {
        &self.transitions
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    /// Subset simulation.
    pub fn run(&self, x: &[u8]) -> bool {
        let mut adj = vec![Vec::new(); 2 * self.states];
        for &(u, b, v) in &self.transitions {
            adj[2 * u + b as usize].push(v);
        }
        let mut cur = vec![false; self.states];
        for &q in &self.initial {
            cur[q] = true;
        }
        for &b in x {
            let mut next = vec![false; self.states];
            for (u, _) in cur.iter().enumerate().filter(|(_, on)| **on) {
                for &v in &adj[2 * u + (b & 1) as usize] {
                    next[v] = true;
                }
            }
            cur = next;
        }
        self.accepting.iter().any(|&q| cur[q])
    }

    /// Disjoint union; accepts `L(self) ∪ L(other)`.
    pub fn union(&self, other: &StreamingAutomaton) -> StreamingAutomaton {
        let off = self.states;
        let shift = |v: &[usize]| v.iter().map(|q| q + off).collect::<Vec<_>>();
        let mut transitions = self.transitions.clone();
        transitions.extend(other.transitions.iter().map(|&(u, b, v)| (u + off, b, v + off)));
        let mut initial = self.initial.clone();
        initial.extend(shift(&other.initial));
        let mut accepting = self.accepting.clone();
        accepting.extend(shift(&other.accepting));
        StreamingAutomaton { states: off + other.states, transitions, initial, accepting }
    }
}

/// A 0/1-labeled digraph, optionally with distinguished start and finish
/// nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledDigraph {
    pub nodes: usize,
    pub arcs: Vec<(usize, usize, u8)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finish: Option<usize>,
}

impl LabeledDigraph {
    pub fn validate(&self) -> Result<()> {
        for &(u, v, b) in &self.arcs {
            if u >= self.nodes || v >= self.nodes {
                return Err(Error::IndexOutOfRange { index: u.max(v), dim: self.nodes });
            }
            if b > 1 {
                return Err(Error::InvalidArgument(format!("arc label {b} is not 0 or 1")));
            }
        }
        for q in [self.start, self.finish].into_iter().flatten() {
            if q >= self.nodes {
                return Err(Error::IndexOutOfRange { index: q, dim: self.nodes });
            }
        }
        Ok(())
    }

    /// The automaton whose accepted strings are the signatures of walks from
    /// `start` to `finish` (any node when unset).
    pub fn to_automaton(&self) -> Result<StreamingAutomaton> {
        self.validate()?;
        let all: Vec<usize> = (0..self.nodes).collect();
        StreamingAutomaton::new(
            self.nodes,
            self.arcs.iter().map(|&(u, v, b)| (u, b, v)).collect(),
            self.start.map_or_else(|| all.clone(), |s| vec![s]),
            self.finish.map_or(all, |f| vec![f]),
        )
    }
}

/// Adds a start node with 0-arcs into every initial state and a finish node
/// with 0-arcs out of every accepting state. Node `states` is the start and
/// `states + 1` the finish.
pub fn add_special_nodes(a: &StreamingAutomaton) -> LabeledDigraph {
    let start = a.states;
    let finish = a.states + 1;
    let mut arcs: Vec<(usize, usize, u8)> = a.transitions.iter().map(|&(u, b, v)| (u, v, b)).collect();
    arcs.extend(a.initial.iter().map(|&q| (start, q, 0)));
    arcs.extend(a.accepting.iter().map(|&q| (q, finish, 0)));
    LabeledDigraph { nodes: a.states + 2, arcs, start: Some(start), finish: Some(finish) }
}

pub const BLANK: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Read {
    Bit(u8),
    Eps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
    Stay,
}

/// One entry of the transition relation: in control state `state` with
/// `symbol` under the work head, optionally consume `read`, then write,
/// move and change state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub state: usize,
    pub symbol: u8,
    pub read: Read,
    pub next: usize,
    pub write: u8,
    pub head: Move,
}

fn symbol_text(s: u8) -> &'static str {
    match s {
        0 => "0",
        1 => "1",
        _ => "_",
    }
}

fn parse_symbol(t: &str) -> Result<u8> {
    match t {
        "0" => Ok(0),
        "1" => Ok(1),
        "_" => Ok(BLANK),
        _ => Err(Error::InvalidMachine(format!("unknown tape symbol `{t}`"))),
    }
}

impl Rule {
    fn to_raw(self) -> RawRule {
        let read = match self.read {
            Read::Bit(b) => symbol_text(b).to_string(),
            Read::Eps => "eps".to_string(),
        };
        let mv = match self.head {
            Move::Left => "L",
            Move::Right => "R",
            Move::Stay => "S",
        };
        (self.state, symbol_text(self.symbol).into(), read, self.next, format!("{}{mv}", symbol_text(self.write)))
    }

    fn from_raw((state, symbol, read, next, action): RawRule) -> Result<Rule> {
        let read = match read.as_str() {
            "0" => Read::Bit(0),
            "1" => Read::Bit(1),
            "eps" => Read::Eps,
            _ => return Err(Error::InvalidMachine(format!("read must be 0, 1 or eps, got `{read}`"))),
        };
        let mut chars = action.chars();
        let (w, m) = match (chars.next(), chars.next(), chars.next()) {
            (Some(w), Some(m), None) => (w, m),
            _ => return Err(Error::InvalidMachine(format!("action `{action}` is not <symbol><L|R|S>"))),
        };
        let head = match m {
            'L' => Move::Left,
            'R' => Move::Right,
            'S' => Move::Stay,
            _ => return Err(Error::InvalidMachine(format!("unknown head move `{m}`"))),
        };
        Ok(Rule {
            state,
            symbol: parse_symbol(&symbol)?,
            read,
            next,
            write: parse_symbol(&w.to_string())?,
            head,
        })
    }
}

type RawRule = (usize, String, String, usize, String);

#[derive(Serialize, Deserialize)]
struct RawTm {
    states: usize,
    initial: usize,
    accepting: Vec<usize>,
    #[serde(default)]
    deterministic: bool,
    transitions: Vec<RawRule>,
}

/// A nondeterministic online Turing machine. The worktape starts as all
/// `0` with the head on cell 0. A configuration without an applicable rule
/// is stuck (rejects).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTm", into = "RawTm")]
pub struct OnlineTM {
    states: usize,
    rules: Vec<Rule>,
    initial: usize,
    accepting: Vec<usize>,
    deterministic: bool,
    index: HashMap<(usize, u8), Vec<usize>>,
}

impl TryFrom<RawTm> for OnlineTM {
    type Error = Error;

    fn try_from(r: RawTm) -> Result<Self> {
        let rules = r.transitions.into_iter().map(Rule::from_raw).collect::<Result<Vec<_>>>()?;
        OnlineTM::new(r.states, rules, r.initial, r.accepting, r.deterministic)
    }
}

impl From<OnlineTM> for RawTm {
    fn from(m: OnlineTM) -> Self {
        RawTm {
            states: m.states,
            initial: m.initial,
            accepting: m.accepting,
            deterministic: m.deterministic,
            transitions: m.rules.into_iter().map(Rule::to_raw).collect(),
        }
    }
}

impl OnlineTM {
    pub fn new(
        states: usize,
        rules: Vec<Rule>,
        initial: usize,
        accepting: Vec<usize>,
        deterministic: bool,
    ) -> Result<Self> {
        for q in rules.iter().flat_map(|r| [r.state, r.next]).chain([initial]).chain(accepting.iter().copied()) {
            if q >= states {
                return Err(Error::InvalidMachine(format!("state {q} out of range (states = {states})")));
            }
        }
        for r in &rules {
            if r.symbol > BLANK || r.write > BLANK || matches!(r.read, Read::Bit(b) if b > 1) {
                return Err(Error::InvalidMachine(format!("bad symbol in rule {r:?}")));
            }
        }
        let mut index: HashMap<(usize, u8), Vec<usize>> = HashMap::new();
        for (k, r) in rules.iter().enumerate() {
            index.entry((r.state, r.symbol)).or_default().push(k);
        }
        if deterministic {
            for ((q, s), ks) in &index {
                let mut reads = HashSet::new();
                for &k in ks {
                    if !reads.insert(rules[k].read) {
                        return Err(Error::InvalidMachine(format!(
                            "deterministic machine has two rules for state {q}, symbol {}",
                            symbol_text(*s)
                        )));
                    }
                }
                if reads.contains(&Read::Eps) && reads.len() > 1 {
                    return Err(Error::InvalidMachine(format!(
                        "deterministic machine mixes eps and reading rules in state {q}, symbol {}",
                        symbol_text(*s)
                    )));
                }
            }
        }
        Ok(OnlineTM { states, rules, initial, accepting: sorted_unique(accepting), deterministic, index })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    pub fn writes_blank(&self) -> bool {
        self.rules.iter().any(|r| r.write == BLANK)
    }

    pub fn start(&self, space: usize) -> Result<TMConfiguration> {
        if space == 0 {
            return Err(Error::InvalidArgument("space bound must be at least 1".into()));
        }
        Ok(TMConfiguration { state: self.initial, tape: vec![0; space], head: 0 })
    }

    fn successors(&self, c: &TMConfiguration, read: Read) -> Result<Vec<TMConfiguration>> {
        let mut out = Vec::new();
        let Some(ks) = self.index.get(&(c.state, c.tape[c.head])) else {
            return Ok(out);
        };
        for &k in ks {
            let r = &self.rules[k];
            if r.read != read {
                continue;
            }
            let space = c.tape.len();
            let head = match r.head {
                Move::Left if c.head == 0 => return Err(Error::SpaceExceeded { space }),
                Move::Left => c.head - 1,
                Move::Right if c.head + 1 == space => return Err(Error::SpaceExceeded { space }),
                Move::Right => c.head + 1,
                Move::Stay => c.head,
            };
            let mut tape = c.tape.clone();
            tape[c.head] = r.write;
            out.push(TMConfiguration { state: r.next, tape, head });
        }
        Ok(out)
    }

    /// Configurations reachable by ε-moves (including `c`), and whether an
    /// ε-cycle was seen.
    pub fn eps_closure(&self, c: &TMConfiguration) -> Result<(Vec<TMConfiguration>, bool)> {
        // Iterative DFS with grey/black marks to detect cycles.
        let mut order = Vec::new();
        let mut mark: HashMap<TMConfiguration, bool> = HashMap::new();
        let mut cycle = false;
        let mut stack: Vec<(TMConfiguration, Vec<TMConfiguration>)> = Vec::new();
        mark.insert(c.clone(), false);
        order.push(c.clone());
        stack.push((c.clone(), self.successors(c, Read::Eps)?));
        while let Some((_, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(next) => match mark.get(&next) {
                    Some(false) => cycle = true,
                    Some(true) => {}
                    None => {
                        mark.insert(next.clone(), false);
                        order.push(next.clone());
                        let succ = self.successors(&next, Read::Eps)?;
                        stack.push((next, succ));
                    }
                },
                None => {
                    let (done, _) = stack.pop().expect("nonempty");
                    mark.insert(done, true);
                }
            }
        }
        Ok((order, cycle))
    }

    fn accepts_closure(&self, closure: &[TMConfiguration]) -> bool {
        closure.iter().any(|c| self.accepting.binary_search(&c.state).is_ok())
    }

    /// Configurations reachable from `c` by ε-moves followed by one move
    /// reading `b`.
    fn read_step(&self, c: &TMConfiguration, b: u8) -> Result<(BTreeSet<TMConfiguration>, bool)> {
        let (closure, cycle) = self.eps_closure(c)?;
        let mut out = BTreeSet::new();
        for d in &closure {
            out.extend(self.successors(d, Read::Bit(b))?);
        }
        Ok((out, cycle))
    }

    /// Direct simulation: `passes` sequential passes over `x`, each pass
    /// starting where the previous one stopped after its last read.
    pub fn simulate(&self, x: &[u8], space: usize, passes: usize) -> Result<bool> {
        if passes == 0 {
            return Err(Error::InvalidArgument("at least one pass is required".into()));
        }
        let mut cur: BTreeSet<TMConfiguration> = BTreeSet::from([self.start(space)?]);
        for _ in 0..passes {
            for &b in x {
                let mut next = BTreeSet::new();
                for c in &cur {
                    next.extend(self.read_step(c, b)?.0);
                }
                cur = next;
            }
        }
        for c in &cur {
            if self.accepts_closure(&self.eps_closure(c)?.0) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Control state, worktape contents and work head position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TMConfiguration {
    pub state: usize,
    pub tape: Vec<u8>,
    pub head: usize,
}

impl fmt::Display for TMConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}:", self.state)?;
        for (i, &s) in self.tape.iter().enumerate() {
            if i == self.head {
                write!(f, "[{}]", symbol_text(s))?;
            } else {
                f.write_str(symbol_text(s))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ConfigGraph {
    pub automaton: StreamingAutomaton,
    /// Node `i` of the automaton is `configs[i]`; node 0 is the start.
    pub configs: Vec<TMConfiguration>,
    /// Some reachable configuration lies on an ε-cycle.
    pub eps_cycle: bool,
}

impl ConfigGraph {
    /// `|Q| · g^s · s` with `g = 3` if the machine can write blanks and
    /// `g = 2` otherwise.
    pub fn node_bound(tm: &OnlineTM, space: usize) -> u128 {
        let g: u128 = if tm.writes_blank() { 3 } else { 2 };
        tm.states as u128 * g.pow(space as u32) * space as u128
    }
}

/// Builds the configuration graph of `tm` with `space` worktape cells.
/// `_n` is the input length the graph is meant for; the graph itself does
/// not depend on it.
pub fn config_graph(tm: &OnlineTM, _n: usize, space: usize) -> Result<ConfigGraph> {
    let start = tm.start(space)?;
    let mut ids: HashMap<TMConfiguration, usize> = HashMap::from([(start.clone(), 0)]);
    let mut configs = vec![start];
    let mut edges = BTreeSet::new();
    let mut accepting = Vec::new();
    let mut eps_cycle = false;
    let mut k = 0;
    while k < configs.len() {
        let (closure, cycle) = tm.eps_closure(&configs[k])?;
        eps_cycle |= cycle;
        if tm.accepts_closure(&closure) {
            accepting.push(k);
        }
        for b in 0..2u8 {
            let mut targets = BTreeSet::new();
            for d in &closure {
                targets.extend(tm.successors(d, Read::Bit(b))?);
            }
            for t in targets {
                let next = configs.len();
                let id = *ids.entry(t.clone()).or_insert(next);
                if id == next {
                    configs.push(t);
                }
                edges.insert((k, b, id));
            }
        }
        k += 1;
    }
    let automaton = StreamingAutomaton::new(configs.len(), edges.into_iter().collect(), vec![0], accepting)?;
    Ok(ConfigGraph { automaton, configs, eps_cycle })
}

#[derive(Debug, Clone)]
pub struct KPassSimulation {
    pub automaton: StreamingAutomaton,
    pub graph: ConfigGraph,
    /// Per automaton state: the current configuration (graph node) of each
    /// pass followed by the guessed start configurations of passes 2..=p.
    pub payload: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Simulates `passes` passes with one pass: each state carries one current
/// configuration per pass plus the guessed start configurations of passes
/// 2..=p. Only states reachable within `n` reads are built, which is all a
/// length-`n` input can visit.
pub fn kpass_to_onepass(tm: &OnlineTM, passes: usize, n: usize, space: usize) -> Result<KPassSimulation> {
    if passes == 0 {
        return Err(Error::InvalidArgument("at least one pass is required".into()));
    }
    let graph = config_graph(tm, n, space)?;
    let nodes = graph.automaton.states();
    let mut succ = vec![Vec::new(); 2 * nodes];
    for &(u, b, v) in graph.automaton.transitions() {
        succ[2 * u + b as usize].push(v);
    }
    let mut is_accepting = vec![false; nodes];
    for &q in graph.automaton.accepting() {
        is_accepting[q] = true;
    }

    let mut ids: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
    let mut payload = Vec::new();
    let mut queue = VecDeque::new();
    let mut guess = vec![0usize; passes - 1];
    loop {
        let mut cur = vec![0];
        cur.extend(&guess);
        let key = (cur, guess.clone());
        ids.insert(key.clone(), payload.len());
        queue.push_back((payload.len(), 0usize));
        payload.push(key);
        // Odometer over all guess vectors.
        let mut i = 0;
        while i < guess.len() {
            guess[i] += 1;
            if guess[i] < nodes {
                break;
            }
            guess[i] = 0;
            i += 1;
        }
        if i == guess.len() {
            break;
        }
    }
    let initial: Vec<usize> = (0..payload.len()).collect();

    let mut transitions = Vec::new();
    while let Some((id, depth)) = queue.pop_front() {
        if depth == n {
            continue;
        }
        let (cur, guess) = payload[id].clone();
        for b in 0..2u8 {
            let lists: Vec<&Vec<usize>> = cur.iter().map(|&c| &succ[2 * c + b as usize]).collect();
            if lists.iter().any(|l| l.is_empty()) {
                continue;
            }
            let mut pick = vec![0usize; passes];
            loop {
                let next: Vec<usize> = pick.iter().zip(&lists).map(|(&j, l)| l[j]).collect();
                let key = (next, guess.clone());
                let target = match ids.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = payload.len();
                        ids.insert(key.clone(), t);
                        payload.push(key);
                        queue.push_back((t, depth + 1));
                        t
                    }
                };
                transitions.push((id, b, target));
                let mut i = 0;
                while i < passes {
                    pick[i] += 1;
                    if pick[i] < lists[i].len() {
                        break;
                    }
                    pick[i] = 0;
                    i += 1;
                }
                if i == passes {
                    break;
                }
            }
        }
    }
    let accepting: Vec<usize> = payload
        .iter()
        .enumerate()
        .filter(|(_, (cur, guess))| {
            guess.iter().enumerate().all(|(i, g)| cur[i] == *g) && is_accepting[cur[passes - 1]]
        })
        .map(|(k, _)| k)
        .collect();
    let automaton = StreamingAutomaton::new(payload.len(), transitions, initial, accepting)?;
    Ok(KPassSimulation { automaton, graph, payload })
}

fn rule(state: usize, symbol: u8, read: Read, next: usize, write: u8, head: Move) -> Rule {
    Rule { state, symbol, read, next, write, head }
}

/// One-cell machine accepting the strings whose first bit is 1.
pub fn first_bit_machine() -> OnlineTM {
    let rules = vec![
        rule(0, 0, Read::Bit(1), 1, 0, Move::Stay),
        rule(1, 0, Read::Bit(0), 1, 0, Move::Stay),
        rule(1, 0, Read::Bit(1), 1, 0, Move::Stay),
    ];
    OnlineTM::new(2, rules, 0, vec![1], true).expect("valid machine")
}

/// One-cell machine keeping the parity of the ones read on its worktape and
/// accepting when it is even.
pub fn parity_machine() -> OnlineTM {
    let mut rules = Vec::new();
    for t in 0..2u8 {
        for b in 0..2u8 {
            rules.push(rule(0, t, Read::Bit(b), 0, t ^ b, Move::Stay));
        }
    }
    rules.push(rule(0, 0, Read::Eps, 1, 0, Move::Stay));
    OnlineTM::new(2, rules, 0, vec![1], false).expect("valid machine")
}

/// Worktape cells used by [`two_pass_mod6_machine`].
pub const TWO_PASS_MOD6_SPACE: usize = 3;

/// Deterministic two-pass machine for inputs of length `n`: the first pass
/// keeps the parity of the ones in cell 0, the second keeps their residue
/// mod 3 in binary in cells 1 (low) and 2 (high). It accepts iff both are
/// zero, i.e. the number of ones is divisible by 6. The position within a
/// pass is counted in the control state, which is how the machine learns
/// that a pass has ended.
pub fn two_pass_mod6_machine(n: usize) -> OnlineTM {
    // Control states:
    //   a(c)      pass 1, c bits read, head on cell 0            c in 0..=n
    //   b(c)      pass 2, c bits read, head on cell 1            c in 0..=n
    //   h(c, lo)  pass 2, low residue bit lo remembered, head on cell 2
    //   w(c, lo)  pass 2, must write lo into cell 1, head on cell 1
    //   fin(lo)   end of pass 2, low bit lo, head on cell 2
    //   chk       residue zero, head on cell 1, about to check parity
    //   par       head on cell 0
    //   acc
    let a = |c: usize| c;
    let b = |c: usize| n + 1 + c;
    let h = |c: usize, lo: u8| 2 * (n + 1) + 2 * c + lo as usize;
    let w = |c: usize, lo: u8| 4 * (n + 1) + 2 * c + lo as usize;
    let fin = |lo: u8| 6 * (n + 1) + lo as usize;
    let chk = 6 * (n + 1) + 2;
    let par = chk + 1;
    let acc = par + 1;
    let mut rules = Vec::new();
    for c in 0..n {
        for t in 0..2u8 {
            for bit in 0..2u8 {
                rules.push(rule(a(c), t, Read::Bit(bit), a(c + 1), t ^ bit, Move::Stay));
            }
        }
    }
    for t in 0..2u8 {
        rules.push(rule(a(n), t, Read::Eps, b(0), t, Move::Right));
    }
    for c in 0..=n {
        for lo in 0..2u8 {
            let next = if c < n { h(c, lo) } else { fin(lo) };
            rules.push(rule(b(c), lo, Read::Eps, next, lo, Move::Right));
        }
    }
    for c in 0..n {
        for lo in 0..2u8 {
            for hi in 0..2u8 {
                let r = lo + 2 * hi;
                if r > 2 {
                    continue;
                }
                for bit in 0..2u8 {
                    let r2 = (r + bit) % 3;
                    rules.push(rule(h(c, lo), hi, Read::Bit(bit), w(c + 1, r2 & 1), r2 >> 1, Move::Left));
                }
            }
        }
    }
    for c in 1..=n {
        for lo in 0..2u8 {
            for t in 0..2u8 {
                rules.push(rule(w(c, lo), t, Read::Eps, b(c), lo, Move::Stay));
            }
        }
    }
    rules.push(rule(fin(0), 0, Read::Eps, chk, 0, Move::Left));
    rules.push(rule(chk, 0, Read::Eps, par, 0, Move::Left));
    rules.push(rule(par, 0, Read::Eps, acc, 0, Move::Stay));
    OnlineTM::new(acc + 1, rules, a(0), vec![acc], true).expect("valid machine")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_strings(n: usize) -> impl Iterator<Item = Vec<u8>> {
        (0..1usize << n).map(move |m| (0..n).map(|i| ((m >> (n - 1 - i)) & 1) as u8).collect())
    }

    fn ones(x: &[u8]) -> usize {
        x.iter().filter(|&&b| b == 1).count()
    }

    fn parity_automaton() -> StreamingAutomaton {
        StreamingAutomaton::new(2, vec![(0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 0)], vec![0], vec![0]).unwrap()
    }

    #[test]
    fn automaton_runs() {
        let p = parity_automaton();
        for n in 0..=6 {
            for x in all_strings(n) {
                assert_eq!(p.run(&x), ones(&x).is_multiple_of(2), "{x:?}");
            }
        }
        let none = StreamingAutomaton::new(2, p.transitions().to_vec(), vec![0], vec![]).unwrap();
        assert!(!none.run(&[0, 0, 0]));
        assert!(StreamingAutomaton::new(1, vec![], vec![], vec![]).is_err());
        assert!(StreamingAutomaton::new(1, vec![(0, 2, 0)], vec![0], vec![]).is_err());
    }

    #[test]
    fn union_automaton() {
        let p = parity_automaton();
        let ends_in_one =
            StreamingAutomaton::new(2, vec![(0, 0, 0), (0, 1, 0), (0, 1, 1)], vec![0], vec![1]).unwrap();
        let u = p.union(&ends_in_one);
        for n in 0..=8 {
            for x in all_strings(n) {
                assert_eq!(u.run(&x), p.run(&x) || ends_in_one.run(&x));
            }
        }
    }

    #[test]
    fn special_nodes() {
        let d = add_special_nodes(&parity_automaton());
        assert_eq!(d.nodes, 4);
        assert_eq!(d.arcs.len(), 6);
        assert_eq!((d.start, d.finish), (Some(2), Some(3)));
    }

    #[test]
    fn first_bit_graph() {
        let tm = first_bit_machine();
        let g = config_graph(&tm, 4, 1).unwrap();
        assert!(g.configs.len() <= 4);
        assert!(!g.eps_cycle);
        for n in 0..=6 {
            for x in all_strings(n) {
                let expect = x.first() == Some(&1);
                assert_eq!(g.automaton.run(&x), expect);
                assert_eq!(tm.simulate(&x, 1, 1).unwrap(), expect);
            }
        }
    }

    #[test]
    fn graph_matches_simulation() {
        for (tm, s) in [(parity_machine(), 1), (first_bit_machine(), 2), (two_pass_mod6_machine(3), 3)] {
            let g = config_graph(&tm, 0, s).unwrap();
            assert!(g.configs.len() as u128 <= ConfigGraph::node_bound(&tm, s));
            let nodes = g.automaton.states();
            assert!(g.automaton.transitions().len() <= 2 * nodes * nodes);
            if tm.is_deterministic() {
                let mut out = HashMap::new();
                for &(u, b, _) in g.automaton.transitions() {
                    *out.entry((u, b)).or_insert(0) += 1;
                }
                assert!(out.values().all(|&d| d <= 1));
                assert!(g.automaton.transitions().len() <= 2 * nodes);
            }
            for n in 0..=8 {
                for x in all_strings(n) {
                    assert_eq!(g.automaton.run(&x), tm.simulate(&x, s, 1).unwrap(), "{x:?}");
                }
            }
        }
    }

    #[test]
    fn off_tape_moves_are_errors() {
        let tm = OnlineTM::new(1, vec![rule(0, 0, Read::Eps, 0, 0, Move::Left)], 0, vec![], false).unwrap();
        assert_eq!(config_graph(&tm, 1, 2).unwrap_err(), Error::SpaceExceeded { space: 2 });
        assert!(tm.start(0).is_err());
    }

    #[test]
    fn eps_cycles_are_reported() {
        let rules = vec![
            rule(0, 0, Read::Eps, 1, 0, Move::Stay),
            rule(1, 0, Read::Eps, 0, 0, Move::Stay),
            rule(1, 0, Read::Bit(1), 2, 0, Move::Stay),
        ];
        let tm = OnlineTM::new(3, rules, 0, vec![2], false).unwrap();
        let g = config_graph(&tm, 1, 1).unwrap();
        assert!(g.eps_cycle);
        assert!(g.automaton.run(&[1]));
        assert!(!g.automaton.run(&[0]));
    }

    #[test]
    fn determinism_is_checked() {
        let rules = vec![rule(0, 0, Read::Eps, 0, 0, Move::Stay), rule(0, 0, Read::Bit(0), 0, 0, Move::Stay)];
        assert!(OnlineTM::new(1, rules.clone(), 0, vec![], true).is_err());
        assert!(OnlineTM::new(1, rules, 0, vec![], false).is_ok());
    }

    #[test]
    fn two_pass_mod6() {
        for n in 0..=8 {
            let tm = two_pass_mod6_machine(n);
            let sim = kpass_to_onepass(&tm, 2, n, TWO_PASS_MOD6_SPACE).unwrap();
            let v = ConfigGraph::node_bound(&tm, TWO_PASS_MOD6_SPACE);
            assert!((sim.automaton.states() as u128) <= v.pow(2) * v);
            for x in all_strings(n) {
                let expect = ones(&x).is_multiple_of(6);
                assert_eq!(sim.automaton.run(&x), expect, "{x:?}");
                assert_eq!(tm.simulate(&x, TWO_PASS_MOD6_SPACE, 2).unwrap(), expect);
            }
        }
    }

    #[test]
    fn one_pass_simulation_is_the_graph() {
        let tm = parity_machine();
        for n in 0..=6 {
            let sim = kpass_to_onepass(&tm, 1, n, 1).unwrap();
            for x in all_strings(n) {
                assert_eq!(sim.automaton.run(&x), sim.graph.automaton.run(&x));
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let tm = parity_machine();
        let text = serde_json::to_string(&tm).unwrap();
        assert!(text.contains("[0,\"0\",\"eps\",1,\"0S\"]"));
        let back: OnlineTM = serde_json::from_str(&text).unwrap();
        assert_eq!(back, tm);
        let a = parity_automaton();
        let back: StreamingAutomaton = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<OnlineTM>(
            r#"{"states":1,"initial":0,"accepting":[],"transitions":[[0,"0","2",0,"0S"]]}"#
        )
        .is_err());
    }
}
