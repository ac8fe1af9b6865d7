//! Weak trace equivalence with shortest distinguishing traces.
//!
//! Every state of an LTS is accepting, so trace languages are prefix-closed
//! and two systems are trace equivalent exactly when, at every reachable
//! pair of determinised macro-states, they enable the same visible labels.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use crate::ast::GroundLabel;
use crate::error::CheckError;
use crate::semantics::Lts;

/// Least superset of `seed` closed under tau transitions.
pub fn tau_closure(lts: &Lts, seed: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    let mut closed: BTreeSet<usize> = BTreeSet::new();
    let mut stack: Vec<usize> = Vec::new();
    for s in seed {
        if closed.insert(s) {
            stack.push(s);
        }
    }
    while let Some(s) = stack.pop() {
        for t in lts.outgoing(s) {
            if t.label.is_tau() && closed.insert(t.target) {
                stack.push(t.target);
            }
        }
    }
    closed
}

/// Deterministic transition structure over tau-closed sets of LTS states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dts {
    /// Each entry is sorted and tau-closed.
    pub macro_states: Vec<Vec<usize>>,
    pub initial: usize,
    pub transitions: Vec<BTreeMap<GroundLabel, usize>>,
}

impl Dts {
    pub fn num_states(&self) -> usize {
        self.macro_states.len()
    }

    pub fn enabled(&self, macro_state: usize) -> impl Iterator<Item = &GroundLabel> {
        self.transitions[macro_state].keys()
    }
}

/// Subset construction over visible labels, reachable part only.
/// Macro-states are numbered in breadth-first order with successors taken in
/// label order.
pub fn determinize(lts: &Lts) -> Result<Dts, CheckError> {
    if lts.is_truncated() {
        return Err(CheckError::Truncated);
    }
    let start: Vec<usize> = tau_closure(lts, [lts.initial()]).into_iter().collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut macro_states = vec![start.clone()];
    let mut transitions: Vec<BTreeMap<GroundLabel, usize>> = Vec::new();
    index.insert(start, 0);

    let mut next = 0;
    while next < macro_states.len() {
        let mut moves: BTreeMap<GroundLabel, BTreeSet<usize>> = BTreeMap::new();
        for &s in &macro_states[next] {
            for t in lts.outgoing(s) {
                if !t.label.is_tau() {
                    moves.entry(t.label.clone()).or_default().insert(t.target);
                }
            }
        }
        let mut row = BTreeMap::new();
        for (label, targets) in moves {
            let closed: Vec<usize> = tau_closure(lts, targets).into_iter().collect();
            let id = match index.get(&closed) {
                Some(&id) => id,
                None => {
                    let id = macro_states.len();
                    index.insert(closed.clone(), id);
                    macro_states.push(closed);
                    id
                }
            };
            row.insert(label, id);
        }
        transitions.push(row);
        next += 1;
    }

    Ok(Dts {
        macro_states,
        initial: 0,
        transitions,
    })
}

/// Which argument of [`trace_equivalent`] has the witness trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqVerdict {
    pub equivalent: bool,
    /// A shortest trace of exactly one of the two systems.
    pub witness: Option<Vec<GroundLabel>>,
    /// The side that admits the witness; the other side rejects it.
    pub witness_side: Option<Side>,
}

impl EqVerdict {
    fn equivalent() -> Self {
        EqVerdict {
            equivalent: true,
            witness: None,
            witness_side: None,
        }
    }

    fn distinguished(witness: Vec<GroundLabel>, side: Side) -> Self {
        EqVerdict {
            equivalent: false,
            witness: Some(witness),
            witness_side: Some(side),
        }
    }
}

/// Decides weak trace equivalence.
///
/// The product of the two determinised systems is searched breadth first,
/// taking successors in label order. At the first pair whose enabled label
/// sets differ, the witness is the path to that pair extended by the least
/// label enabled on one side only. This makes the witness both shortest and
/// deterministic.
pub fn trace_equivalent(a: &Lts, b: &Lts) -> Result<EqVerdict, CheckError> {
    let da = determinize(a)?;
    let db = determinize(b)?;
    Ok(compare_dts(&da, &db))
}

/// [`trace_equivalent`] on already determinised systems.
pub fn compare_dts(da: &Dts, db: &Dts) -> EqVerdict {
    let start = (da.initial, db.initial);
    // parent pointers for path reconstruction
    let mut parent: HashMap<(usize, usize), ((usize, usize), GroundLabel)> = HashMap::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);

    while let Some(pair @ (x, y)) = queue.pop_front() {
        let ra = &da.transitions[x];
        let rb = &db.transitions[y];
        let only_a = ra.keys().find(|l| !rb.contains_key(*l));
        let only_b = rb.keys().find(|l| !ra.contains_key(*l));
        let mismatch = match (only_a, only_b) {
            (Some(la), Some(lb)) if lb < la => Some((lb.clone(), Side::Second)),
            (Some(la), _) => Some((la.clone(), Side::First)),
            (None, Some(lb)) => Some((lb.clone(), Side::Second)),
            (None, None) => None,
        };
        if let Some((label, side)) = mismatch {
            let mut trace = vec![label];
            let mut cur = pair;
            while let Some((prev, l)) = parent.get(&cur) {
                trace.push(l.clone());
                cur = *prev;
            }
            trace.reverse();
            return EqVerdict::distinguished(trace, side);
        }
        for (label, &xa) in ra {
            let next = (xa, rb[label]);
            if seen.insert(next) {
                parent.insert(next, (pair, label.clone()));
                queue.push_back(next);
            }
        }
    }
    EqVerdict::equivalent()
}

/// Every observable trace of length at most `depth`, by exhaustive search
/// over (state, trace) configurations. Works on truncated systems too.
///
/// This is deliberately naive and independent of [`tau_closure`] and
/// [`determinize`]; it serves as the reference the checker is tested
/// against. The result can be exponential in `depth`.
pub fn bounded_traces(lts: &Lts, depth: usize) -> BTreeSet<Vec<GroundLabel>> {
    let mut traces = BTreeSet::new();
    let mut visited: HashSet<(usize, Vec<GroundLabel>)> = HashSet::new();
    let mut stack = vec![(lts.initial(), Vec::new())];
    while let Some((state, trace)) = stack.pop() {
        if !visited.insert((state, trace.clone())) {
            continue;
        }
        for t in lts.outgoing(state) {
            if t.label.is_tau() {
                stack.push((t.target, trace.clone()));
            } else if trace.len() < depth {
                let mut longer = trace.clone();
                longer.push(t.label.clone());
                stack.push((t.target, longer));
            }
        }
        traces.insert(trace);
    }
    traces
}
