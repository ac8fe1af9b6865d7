//! Modal mu-calculus over finite labeled transition systems.
//!
//! Formulas are evaluated to the set of states satisfying them. Fixpoints
//! use plain Kleene iteration; inner fixpoints are recomputed on every round
//! of an enclosing one.
//!
//! Weak modalities abstract internal steps: `<<l>> f` holds where some path
//! `tau* l tau*` reaches a state satisfying `f`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::ast::{Formula, GroundLabel, LabelPattern};
use crate::equivalence::tau_closure;
use crate::error::CheckError;
use crate::semantics::Lts;

/// A set of LTS state indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSet(FixedBitSet);

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        StateSet(bits)
    }

    pub fn contains(&self, state: usize) -> bool {
        self.0.contains(state)
    }

    pub fn insert(&mut self, state: usize) {
        self.0.insert(state);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    /// Size of the state space this set ranges over.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn complement(&self) -> StateSet {
        let mut bits = self.0.clone();
        bits.toggle_range(..);
        StateSet(bits)
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut bits = self.0.clone();
        bits.union_with(&other.0);
        StateSet(bits)
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut bits = self.0.clone();
        bits.intersect_with(&other.0);
        StateSet(bits)
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

/// Bookkeeping from one evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalStats {
    /// Largest number of body evaluations any single fixpoint needed to
    /// stabilise, counting the final confirming round.
    pub max_fixpoint_rounds: usize,
    pub fixpoint_evaluations: usize,
}

struct Evaluator<'a> {
    lts: &'a Lts,
    /// tau-predecessors of each state
    tau_pred: Vec<Vec<usize>>,
    stats: EvalStats,
}

impl<'a> Evaluator<'a> {
    fn new(lts: &'a Lts) -> Self {
        let mut tau_pred = vec![Vec::new(); lts.num_states()];
        for t in lts.transitions() {
            if t.label.is_tau() {
                tau_pred[t.target].push(t.source);
            }
        }
        Evaluator {
            lts,
            tau_pred,
            stats: EvalStats::default(),
        }
    }

    fn n(&self) -> usize {
        self.lts.num_states()
    }

    /// States with a `p`-transition into `target`.
    fn pre(&self, p: &LabelPattern, target: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.n());
        for t in self.lts.transitions() {
            if target.contains(t.target) && p.matches(&t.label) {
                out.insert(t.source);
            }
        }
        out
    }

    /// States that reach `target` by zero or more tau steps.
    fn pre_tau_star(&self, target: &StateSet) -> StateSet {
        let mut out = target.clone();
        let mut stack: Vec<usize> = target.iter().collect();
        while let Some(s) = stack.pop() {
            for &p in &self.tau_pred[s] {
                if !out.contains(p) {
                    out.insert(p);
                    stack.push(p);
                }
            }
        }
        out
    }

    fn weak_pre(&self, p: &LabelPattern, target: &StateSet) -> StateSet {
        self.pre_tau_star(&self.pre(p, &self.pre_tau_star(target)))
    }

    fn eval(&mut self, f: &Formula, env: &mut Vec<(String, StateSet)>) -> StateSet {
        let n = self.n();
        match f {
            Formula::Tt => StateSet::full(n),
            Formula::Ff => StateSet::empty(n),
            Formula::And(a, b) => {
                let x = self.eval(a, env);
                x.intersection(&self.eval(b, env))
            }
            Formula::Or(a, b) => {
                let x = self.eval(a, env);
                x.union(&self.eval(b, env))
            }
            Formula::DiamondStrong(p, g) => {
                let target = self.eval(g, env);
                self.pre(p, &target)
            }
            Formula::BoxStrong(p, g) => {
                let bad = self.eval(g, env).complement();
                self.pre(p, &bad).complement()
            }
            Formula::DiamondWeak(p, g) => {
                let target = self.eval(g, env);
                self.weak_pre(p, &target)
            }
            Formula::BoxWeak(p, g) => {
                let bad = self.eval(g, env).complement();
                self.weak_pre(p, &bad).complement()
            }
            Formula::Var(x) => env
                .iter()
                .rev()
                .find(|(name, _)| name == x)
                .map(|(_, set)| set.clone())
                .expect("formula closedness is checked before evaluation"),
            Formula::Mu(x, g) | Formula::Nu(x, g) => {
                let start = if matches!(f, Formula::Mu(..)) {
                    StateSet::empty(n)
                } else {
                    StateSet::full(n)
                };
                env.push((x.clone(), start));
                let mut rounds = 0;
                loop {
                    rounds += 1;
                    let next = self.eval(g, env);
                    let slot = &mut env.last_mut().expect("pushed above").1;
                    if next == *slot {
                        break;
                    }
                    *slot = next;
                }
                self.stats.max_fixpoint_rounds = self.stats.max_fixpoint_rounds.max(rounds);
                self.stats.fixpoint_evaluations += 1;
                env.pop().expect("pushed above").1
            }
        }
    }
}

fn precheck(lts: &Lts, f: &Formula) -> Result<(), CheckError> {
    if lts.is_truncated() {
        return Err(CheckError::Truncated);
    }
    if let Some(x) = f.free_vars().into_iter().next() {
        return Err(CheckError::OpenFormula(x));
    }
    Ok(())
}

/// The states satisfying a closed formula.
pub fn sat_states(lts: &Lts, f: &Formula) -> Result<StateSet, CheckError> {
    sat_states_with_stats(lts, f).map(|(set, _)| set)
}

pub fn sat_states_with_stats(lts: &Lts, f: &Formula) -> Result<(StateSet, EvalStats), CheckError> {
    precheck(lts, f)?;
    let mut ev = Evaluator::new(lts);
    let set = ev.eval(f, &mut Vec::new());
    Ok((set, ev.stats))
}

/// Whether the initial state satisfies `f`.
pub fn check(lts: &Lts, f: &Formula) -> Result<bool, CheckError> {
    Ok(sat_states(lts, f)?.contains(lts.initial()))
}

type Candidate = Vec<GroundLabel>;

fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if (y.len(), &y) < (x.len(), &x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

struct WitnessSearch<'a> {
    lts: &'a Lts,
    sat: HashMap<*const Formula, StateSet>,
    memo: HashMap<(*const Formula, usize), Option<Candidate>>,
}

impl WitnessSearch<'_> {
    fn sat_of(&mut self, f: &Formula) -> StateSet {
        let key = f as *const Formula;
        if let Some(s) = self.sat.get(&key) {
            return s.clone();
        }
        let mut ev = Evaluator::new(self.lts);
        let s = ev.eval(f, &mut Vec::new());
        self.sat.insert(key, s.clone());
        s
    }

    fn find(&mut self, state: usize, f: &Formula) -> Option<Candidate> {
        let key = (f as *const Formula, state);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let result = if !self.sat_of(f).contains(state) {
            None
        } else {
            match f {
                Formula::Tt => Some(Vec::new()),
                Formula::Or(a, b) => {
                    let x = self.find(state, a);
                    better(x, self.find(state, b))
                }
                // Both conjuncts hold here; the left one is the one shown.
                Formula::And(a, _) => self.find(state, a),
                Formula::DiamondStrong(p, g) => {
                    let target = self.sat_of(g);
                    let mut best = None;
                    for t in self.lts.outgoing(state) {
                        if p.matches(&t.label) && target.contains(t.target) {
                            let cand = self.find(t.target, g).map(|rest| {
                                let mut w = vec![t.label.clone()];
                                w.extend(rest);
                                w
                            });
                            best = better(best, cand);
                        }
                    }
                    best
                }
                Formula::DiamondWeak(p, g) => {
                    let target = self.sat_of(g);
                    let mut best = None;
                    for s1 in tau_closure(self.lts, [state]) {
                        for t in self.lts.outgoing(s1) {
                            if !p.matches(&t.label) {
                                continue;
                            }
                            for s3 in tau_closure(self.lts, [t.target]) {
                                if !target.contains(s3) {
                                    continue;
                                }
                                let cand = self.find(s3, g).map(|rest| {
                                    let mut w = Vec::new();
                                    if !t.label.is_tau() {
                                        w.push(t.label.clone());
                                    }
                                    w.extend(rest);
                                    w
                                });
                                best = better(best, cand);
                            }
                        }
                    }
                    best
                }
                _ => None,
            }
        };
        self.memo.insert(key, result.clone());
        result
    }
}

/// A label sequence realising the diamonds of an existential formula at the
/// initial state, or `None` when the formula does not hold there.
///
/// Strong steps contribute their label, tau included; weak steps contribute
/// only their visible label. Among candidates the shortest wins, then the
/// least in label order. For a conjunction the left conjunct is realised.
pub fn diamond_witness(lts: &Lts, f: &Formula) -> Result<Option<Vec<GroundLabel>>, CheckError> {
    precheck(lts, f)?;
    if !f.is_existential() {
        return Err(CheckError::NotExistential);
    }
    let mut search = WitnessSearch {
        lts,
        sat: HashMap::new(),
        memo: HashMap::new(),
    };
    Ok(search.find(lts.initial(), f))
}
