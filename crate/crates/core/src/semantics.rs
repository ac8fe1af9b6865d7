//! Structural operational semantics and finite state-space construction.
//!
//! Inputs are instantiated eagerly: `a(x).P` offers one transition per value
//! of `x`. States are ground terms normalised up to associativity and
//! commutativity of `+` and `|`, so `P + Q` and `Q + P` are the same state.

use std::fmt::Write as _;

use indexmap::IndexSet;

use crate::ast::{
    eval_bool, free_value_vars, substitute, Binding, GroundLabel, Model, Prefix, ProcessTerm,
    Value, ValueExpr,
};
use crate::error::{EvalError, SemanticsError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExploreLimits {
    /// Exploration stops, marking the result truncated, once this many
    /// states are known.
    pub max_states: usize,
    /// Maximum number of nested definition unfoldings while computing the
    /// successors of a single state.
    pub max_unfold_without_prefix: usize,
}

impl Default for ExploreLimits {
    fn default() -> Self {
        ExploreLimits {
            max_states: 100_000,
            max_unfold_without_prefix: 1000,
        }
    }
}

impl ExploreLimits {
    pub fn with_max_states(max_states: usize) -> Self {
        ExploreLimits {
            max_states: max_states.max(1),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub source: usize,
    pub label: GroundLabel,
    pub target: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LtsStats {
    /// States whose successors were fully computed.
    pub states_explored: usize,
    pub transitions_count: usize,
    pub truncated: bool,
}

/// A finite labeled transition system. Transitions are stored grouped by
/// source state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    states: Vec<ProcessTerm>,
    initial: usize,
    transitions: Vec<Transition>,
    offsets: Vec<usize>,
    pub stats: LtsStats,
}

impl Lts {
    /// Assembles an LTS from explicit parts. Duplicate transitions are
    /// dropped; order within a source state is preserved otherwise.
    ///
    /// Panics if an index is out of range.
    pub fn from_parts(
        states: Vec<ProcessTerm>,
        initial: usize,
        edges: Vec<(usize, GroundLabel, usize)>,
        truncated: bool,
    ) -> Self {
        let n = states.len();
        assert!(initial < n, "initial state {initial} out of range");
        let mut buckets: Vec<Vec<Transition>> = vec![Vec::new(); n];
        for (source, label, target) in edges {
            assert!(source < n && target < n, "transition endpoint out of range");
            let t = Transition {
                source,
                label,
                target,
            };
            if !buckets[source].contains(&t) {
                buckets[source].push(t);
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut transitions = Vec::new();
        for b in buckets {
            offsets.push(transitions.len());
            transitions.extend(b);
        }
        offsets.push(transitions.len());
        let transitions_count = transitions.len();
        Lts {
            states,
            initial,
            transitions,
            offsets,
            stats: LtsStats {
                states_explored: if truncated { 0 } else { n },
                transitions_count,
                truncated,
            },
        }
    }

    /// An LTS over `n` anonymous states, convenient for hand-built examples.
    pub fn from_edges(n: usize, initial: usize, edges: Vec<(usize, GroundLabel, usize)>) -> Self {
        let states = (0..n)
            .map(|i| ProcessTerm::call(format!("S{i}"), vec![]))
            .collect();
        Lts::from_parts(states, initial, edges, false)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn state(&self, index: usize) -> &ProcessTerm {
        &self.states[index]
    }

    pub fn states(&self) -> &[ProcessTerm] {
        &self.states
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, state: usize) -> &[Transition] {
        &self.transitions[self.offsets[state]..self.offsets[state + 1]]
    }

    pub fn is_truncated(&self) -> bool {
        self.stats.truncated
    }
}

/// Totally ordered identity of a state up to the normalisation above.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateKey(ProcessTerm);

impl StateKey {
    pub fn into_term(self) -> ProcessTerm {
        self.0
    }
}

pub fn canonical_key(state: &ProcessTerm) -> StateKey {
    StateKey(normalize(state))
}

/// Flattens and sorts the operands of `+` and `|` throughout the term.
/// Restriction sets are already ordered. Conditionals are left as written.
pub fn normalize(term: &ProcessTerm) -> ProcessTerm {
    fn flatten(t: &ProcessTerm, par: bool, out: &mut Vec<ProcessTerm>) {
        match t {
            ProcessTerm::Choice(l, r) if !par => {
                flatten(l, par, out);
                flatten(r, par, out);
            }
            ProcessTerm::Par(l, r) if par => {
                flatten(l, par, out);
                flatten(r, par, out);
            }
            other => out.push(normalize(other)),
        }
    }
    match term {
        ProcessTerm::Nil | ProcessTerm::Call(..) | ProcessTerm::Cond(..) => term.clone(),
        ProcessTerm::Prefix(p, then) => ProcessTerm::Prefix(p.clone(), Box::new(normalize(then))),
        ProcessTerm::Restrict(p, names) => {
            ProcessTerm::Restrict(Box::new(normalize(p)), names.clone())
        }
        ProcessTerm::Choice(..) | ProcessTerm::Par(..) => {
            let par = matches!(term, ProcessTerm::Par(..));
            let mut ops = Vec::new();
            flatten(term, par, &mut ops);
            ops.sort();
            if par {
                ProcessTerm::par_of(ops)
            } else {
                ProcessTerm::choice_of(ops)
            }
        }
    }
}

fn eval_args(args: &[ValueExpr]) -> Result<Vec<Value>, EvalError> {
    args.iter().map(ValueExpr::eval).collect()
}

/// Ground calls unfolded so far while computing one state's successors.
/// No prefix has been passed between any two of them.
type UnfoldPath = Vec<(String, Vec<Value>)>;

fn successors(
    term: &ProcessTerm,
    model: &Model,
    unfolds: &mut UnfoldPath,
    limits: &ExploreLimits,
) -> Result<Vec<(GroundLabel, ProcessTerm)>, SemanticsError> {
    match term {
        ProcessTerm::Nil => Ok(Vec::new()),
        ProcessTerm::Prefix(Prefix::Input { action, binders }, then) => {
            Ok(Value::tuples(binders.len())
                .into_iter()
                .map(|values| {
                    let binding: Binding = binders
                        .iter()
                        .cloned()
                        .zip(values.iter().copied())
                        .collect();
                    (
                        GroundLabel::input(action.clone(), values),
                        substitute(then, &binding),
                    )
                })
                .collect())
        }
        ProcessTerm::Prefix(Prefix::Output { action, args }, then) => Ok(vec![(
            GroundLabel::output(action.clone(), eval_args(args)?),
            (**then).clone(),
        )]),
        ProcessTerm::Choice(l, r) => {
            let mut out = successors(l, model, unfolds, limits)?;
            out.extend(successors(r, model, unfolds, limits)?);
            Ok(out)
        }
        ProcessTerm::Par(l, r) => {
            let left = successors(l, model, unfolds, limits)?;
            let right = successors(r, model, unfolds, limits)?;
            let mut out = Vec::with_capacity(left.len() + right.len());
            for (label, next) in &left {
                out.push((label.clone(), ProcessTerm::par(next.clone(), (**r).clone())));
            }
            for (label, next) in &right {
                out.push((label.clone(), ProcessTerm::par((**l).clone(), next.clone())));
            }
            for (ll, lnext) in &left {
                let Some(partner) = ll.complement() else {
                    continue;
                };
                for (rl, rnext) in &right {
                    if *rl == partner {
                        out.push((
                            GroundLabel::Tau,
                            ProcessTerm::par(lnext.clone(), rnext.clone()),
                        ));
                    }
                }
            }
            Ok(out)
        }
        ProcessTerm::Restrict(p, names) => Ok(successors(p, model, unfolds, limits)?
            .into_iter()
            .filter(|(label, _)| label.action().is_none_or(|a| !names.contains(a)))
            .map(|(label, next)| (label, ProcessTerm::Restrict(Box::new(next), names.clone())))
            .collect()),
        ProcessTerm::Cond(test, then, otherwise) => {
            let branch = if eval_bool(test)? { then } else { otherwise };
            successors(branch, model, unfolds, limits)
        }
        ProcessTerm::Call(name, args) => {
            let def = model
                .get(name)
                .ok_or_else(|| SemanticsError::UnknownDefinition(name.clone()))?;
            if def.params.len() != args.len() {
                return Err(SemanticsError::Arity {
                    name: name.clone(),
                    expected: def.params.len(),
                    found: args.len(),
                });
            }
            let values = eval_args(args)?;
            // Meeting the same ground call again means the unfolding can
            // never reach a prefix.
            if unfolds.len() >= limits.max_unfold_without_prefix.max(1)
                || unfolds.iter().any(|(n, v)| n == name && *v == values)
            {
                return Err(SemanticsError::UnguardedRecursion(name.clone()));
            }
            let binding: Binding = def
                .params
                .iter()
                .cloned()
                .zip(values.iter().copied())
                .collect();
            unfolds.push((name.clone(), values));
            let result = successors(&substitute(&def.body, &binding), model, unfolds, limits);
            unfolds.pop();
            result
        }
    }
}

/// All transitions of a ground state, with canonical targets, sorted by
/// label and then target and free of duplicates.
pub fn ground_transitions(
    state: &ProcessTerm,
    model: &Model,
) -> Result<Vec<(GroundLabel, ProcessTerm)>, SemanticsError> {
    ground_transitions_with(state, model, &ExploreLimits::default())
}

pub fn ground_transitions_with(
    state: &ProcessTerm,
    model: &Model,
    limits: &ExploreLimits,
) -> Result<Vec<(GroundLabel, ProcessTerm)>, SemanticsError> {
    if let Some(var) = free_value_vars(state).into_iter().next() {
        return Err(EvalError::Unbound(var).into());
    }
    let mut out: Vec<(GroundLabel, ProcessTerm)> =
        successors(state, model, &mut Vec::new(), limits)?
            .into_iter()
            .map(|(l, t)| (l, normalize(&t)))
            .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Breadth-first construction of the reachable state space of a
/// parameterless definition.
///
/// Hitting `limits.max_states` is not an error: the partial LTS is returned
/// with `stats.truncated` set.
pub fn build_lts(model: &Model, root: &str, limits: &ExploreLimits) -> Result<Lts, SemanticsError> {
    let def = model
        .get(root)
        .ok_or_else(|| SemanticsError::RootNotFound(root.to_string()))?;
    if !def.params.is_empty() {
        return Err(SemanticsError::RootHasParams {
            name: root.to_string(),
            arity: def.params.len(),
        });
    }
    let max_states = limits.max_states.max(1);
    let mut states: IndexSet<ProcessTerm> = IndexSet::new();
    states.insert(normalize(&ProcessTerm::call(root, vec![])));
    let mut edges = Vec::new();
    let mut truncated = false;
    let mut next = 0;

    'explore: while next < states.len() {
        let state = states[next].clone();
        for (label, target) in ground_transitions_with(&state, model, limits)? {
            let target_index = match states.get_index_of(&target) {
                Some(i) => i,
                None if states.len() >= max_states => {
                    truncated = true;
                    break 'explore;
                }
                None => states.insert_full(target).0,
            };
            edges.push((next, label, target_index));
        }
        next += 1;
    }

    let mut lts = Lts::from_parts(states.into_iter().collect(), 0, edges, truncated);
    lts.stats.states_explored = next;
    Ok(lts)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// GraphViz rendering with states numbered by table index. The initial state
/// is drawn as a double circle.
pub fn to_dot(lts: &Lts) -> String {
    let mut out = String::from("digraph lts {\n    node [shape=circle];\n");
    for i in 0..lts.num_states() {
        if i == lts.initial() {
            let _ = writeln!(out, "    s{i} [label=\"{i}\", shape=doublecircle];");
        } else {
            let _ = writeln!(out, "    s{i} [label=\"{i}\"];");
        }
    }
    for t in lts.transitions() {
        let _ = writeln!(
            out,
            "    s{} -> s{} [label=\"{}\"];",
            t.source,
            t.target,
            dot_escape(&t.label.to_string())
        );
    }
    out.push_str("}\n");
    out
}
