//! Random model and formula generators shared by the integration tests and
//! benches.
#![allow(dead_code)]

use std::collections::BTreeSet;

use ccsv_core::ast::{
    BoolExpr, Definition, Formula, GroundLabel, LabelPattern, Model, Prefix, ProcessTerm, Value,
    ValueExpr,
};
use ccsv_core::corpus::BB84_MODEL;
use ccsv_core::parser::parse_model;
use ccsv_core::semantics::{build_lts, ExploreLimits, Lts};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const ROOT: &str = "Root";

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn bb84() -> Model {
    parse_model(BB84_MODEL).expect("bundled model parses")
}

pub fn build(model: &Model, root: &str) -> Lts {
    build_lts(model, root, &ExploreLimits::default()).expect("generated model explores")
}

fn lit(rng: &mut StdRng) -> ValueExpr {
    ValueExpr::Lit(Value::from_bit(rng.random_bool(0.5)))
}

fn pick<'a, T>(rng: &mut StdRng, items: &'a [T]) -> &'a T {
    &items[rng.random_range(0..items.len())]
}

fn value_expr(rng: &mut StdRng, scope: &[String]) -> ValueExpr {
    if !scope.is_empty() && rng.random_bool(0.6) {
        ValueExpr::Var(pick(rng, scope).clone())
    } else {
        lit(rng)
    }
}

// ---------------------------------------------------------------------------
// Syntax fuzzing: every construct, arbitrary call graphs. Not meant to be
// explored, only printed and parsed.

struct SyntaxGen<'a> {
    rng: &'a mut StdRng,
    defs: Vec<(String, usize)>,
    fresh: usize,
}

impl SyntaxGen<'_> {
    fn binder(&mut self) -> String {
        // Reuse names sometimes so shadowing gets exercised.
        if self.rng.random_bool(0.3) {
            ["x", "y", "b"][self.rng.random_range(0..3)].to_string()
        } else {
            self.fresh += 1;
            format!("v{}", self.fresh)
        }
    }

    fn prefix(&mut self, scope: &[String]) -> (Prefix, Vec<String>) {
        let action = ["a", "put", "get", "go", "keep_1"][self.rng.random_range(0..5)].to_string();
        let arity = self.rng.random_range(0..=3);
        if self.rng.random_bool(0.5) {
            let mut binders: Vec<String> = Vec::new();
            while binders.len() < arity {
                let b = self.binder();
                if !binders.contains(&b) {
                    binders.push(b);
                }
            }
            (
                Prefix::Input {
                    action,
                    binders: binders.clone(),
                },
                binders,
            )
        } else {
            let args = (0..arity).map(|_| value_expr(self.rng, scope)).collect();
            (Prefix::Output { action, args }, Vec::new())
        }
    }

    fn term(&mut self, scope: &mut Vec<String>, depth: usize) -> ProcessTerm {
        let choice = if depth == 0 {
            self.rng.random_range(0..2)
        } else {
            self.rng.random_range(0..7)
        };
        match choice {
            0 => ProcessTerm::Nil,
            1 => {
                let (name, arity) = self.defs[self.rng.random_range(0..self.defs.len())].clone();
                let args = (0..arity).map(|_| value_expr(self.rng, scope)).collect();
                ProcessTerm::Call(name, args)
            }
            2 => {
                let (p, bound) = self.prefix(scope);
                let mark = scope.len();
                scope.extend(bound);
                let then = self.term(scope, depth - 1);
                scope.truncate(mark);
                ProcessTerm::prefix(p, then)
            }
            3 => ProcessTerm::choice(self.term(scope, depth - 1), self.term(scope, depth - 1)),
            4 => ProcessTerm::par(self.term(scope, depth - 1), self.term(scope, depth - 1)),
            5 => {
                let n = self.rng.random_range(1..=3);
                let names: BTreeSet<String> = (0..n)
                    .map(|_| ["a", "put", "get", "go"][self.rng.random_range(0..4)].to_string())
                    .collect();
                ProcessTerm::Restrict(Box::new(self.term(scope, depth - 1)), names)
            }
            _ => {
                let (a, b) = (value_expr(self.rng, scope), value_expr(self.rng, scope));
                let test = if self.rng.random_bool(0.5) {
                    BoolExpr::Eq(a, b)
                } else {
                    BoolExpr::Neq(a, b)
                };
                ProcessTerm::cond(
                    test,
                    self.term(scope, depth - 1),
                    self.term(scope, depth - 1),
                )
            }
        }
    }
}

/// A syntactically valid model using every construct of the language.
pub fn syntax_model(rng: &mut StdRng) -> Model {
    let n = rng.random_range(0..=4);
    let defs: Vec<(String, usize)> = (0..n)
        .map(|i| (format!("P{i}"), rng.random_range(0..=2)))
        .collect();
    let mut model = Model::new();
    if defs.is_empty() {
        return model;
    }
    let mut g = SyntaxGen {
        rng,
        defs: defs.clone(),
        fresh: 0,
    };
    for (name, arity) in &defs {
        let params: Vec<String> = (0..*arity).map(|i| ["d", "b"][i].to_string()).collect();
        let depth = g.rng.random_range(0..=5);
        let mut scope = params.clone();
        let body = g.term(&mut scope, depth);
        model.insert(Definition {
            name: name.clone(),
            params,
            body,
        });
    }
    model
}

fn label(rng: &mut StdRng) -> GroundLabel {
    let action = ["a", "b", "choose", "keep"][rng.random_range(0..4)];
    let args = (0..rng.random_range(0..=2))
        .map(|_| Value::from_bit(rng.random_bool(0.5)))
        .collect();
    if rng.random_bool(0.5) {
        GroundLabel::input(action, args)
    } else {
        GroundLabel::output(action, args)
    }
}

fn pattern(rng: &mut StdRng) -> LabelPattern {
    match rng.random_range(0..5) {
        0 => LabelPattern::Tau,
        1 => LabelPattern::AnyVisible,
        _ => LabelPattern::Exact(label(rng)),
    }
}

fn formula_in(rng: &mut StdRng, vars: &mut Vec<String>, depth: usize) -> Formula {
    let leaf = depth == 0 || rng.random_bool(0.2);
    if leaf {
        return match rng.random_range(0..3) {
            0 if !vars.is_empty() => Formula::Var(pick(rng, vars).clone()),
            1 => Formula::Ff,
            _ => Formula::Tt,
        };
    }
    let d = depth - 1;
    match rng.random_range(0..8) {
        0 => Formula::and(formula_in(rng, vars, d), formula_in(rng, vars, d)),
        1 => Formula::or(formula_in(rng, vars, d), formula_in(rng, vars, d)),
        2 => Formula::diamond(pattern(rng), formula_in(rng, vars, d)),
        3 => Formula::boxed(pattern(rng), formula_in(rng, vars, d)),
        4 => Formula::weak_diamond(pattern(rng), formula_in(rng, vars, d)),
        5 => Formula::weak_box(pattern(rng), formula_in(rng, vars, d)),
        k => {
            let x = ["X", "Y", "Z"][rng.random_range(0..3)].to_string();
            vars.push(x.clone());
            let body = formula_in(rng, vars, d);
            vars.pop();
            if k == 6 {
                Formula::mu(x, body)
            } else {
                Formula::nu(x, body)
            }
        }
    }
}

/// A closed formula of depth at most `depth`.
pub fn formula(rng: &mut StdRng, depth: usize) -> Formula {
    formula_in(rng, &mut Vec::new(), depth)
}

// ---------------------------------------------------------------------------
// Explorable models.
//
// Two families keep the brute-force trace oracle tractable at the depths the
// equivalence check needs:
//  * finite: acyclic call graphs over actions {a, b, c}; every trace
//    language is finite.
//  * cyclic: guarded recursion with a single visible action `a` and a hidden
//    channel `h`; trace languages are subsets of a*.

struct ExploreGen<'a> {
    rng: &'a mut StdRng,
    /// callable definitions with their arity
    callees: Vec<(String, usize)>,
    actions: &'static [&'static str],
    fresh: usize,
    max_arity: usize,
}

impl ExploreGen<'_> {
    fn prefix(&mut self, scope: &[String]) -> (Prefix, Vec<String>) {
        let action = pick(self.rng, self.actions).to_string();
        // In the cyclic family `a` is the lone visible label: input, no values.
        let lone_visible = self.actions.len() == 2 && action == "a";
        let arity = if lone_visible {
            0
        } else {
            self.rng.random_range(0..=self.max_arity)
        };
        let input = lone_visible || self.rng.random_bool(0.5);
        if input {
            let binders: Vec<String> = (0..arity)
                .map(|_| {
                    self.fresh += 1;
                    format!("x{}", self.fresh)
                })
                .collect();
            (
                Prefix::Input {
                    action,
                    binders: binders.clone(),
                },
                binders,
            )
        } else {
            let args = (0..arity).map(|_| value_expr(self.rng, scope)).collect();
            (Prefix::Output { action, args }, Vec::new())
        }
    }

    fn call(&mut self, scope: &[String]) -> Option<ProcessTerm> {
        if self.callees.is_empty() {
            return None;
        }
        let (name, arity) = pick(self.rng, &self.callees).clone();
        let args = (0..arity).map(|_| value_expr(self.rng, scope)).collect();
        Some(ProcessTerm::Call(name, args))
    }

    /// One to three prefixes followed by a tail. Calls only occur after a
    /// prefix, so recursion is always guarded.
    fn sequence(&mut self, scope: &mut Vec<String>, allow_par: bool) -> ProcessTerm {
        let n = self.rng.random_range(1..=3);
        let mark = scope.len();
        let mut prefixes = Vec::new();
        for _ in 0..n {
            let (p, bound) = self.prefix(scope);
            scope.extend(bound);
            prefixes.push(p);
        }
        let tail = self.tail(scope, allow_par);
        scope.truncate(mark);
        prefixes
            .into_iter()
            .rev()
            .fold(tail, |acc, p| ProcessTerm::prefix(p, acc))
    }

    fn tail(&mut self, scope: &mut Vec<String>, allow_par: bool) -> ProcessTerm {
        match self.rng.random_range(0..6) {
            0 | 1 => self.call(scope).unwrap_or(ProcessTerm::Nil),
            2 if allow_par => {
                let l = self.sequence(scope, false);
                let r = self.sequence(scope, false);
                if self.rng.random_bool(0.5) {
                    ProcessTerm::restrict(ProcessTerm::par(l, r), ["c"])
                } else {
                    ProcessTerm::par(l, r)
                }
            }
            3 if !scope.is_empty() => {
                let test =
                    BoolExpr::Eq(ValueExpr::Var(pick(self.rng, scope).clone()), lit(self.rng));
                let then = self.call(scope).unwrap_or(ProcessTerm::Nil);
                let otherwise = if self.rng.random_bool(0.5) {
                    self.call(scope).unwrap_or(ProcessTerm::Nil)
                } else {
                    ProcessTerm::Nil
                };
                ProcessTerm::cond(test, then, otherwise)
            }
            _ => ProcessTerm::Nil,
        }
    }

    fn body(&mut self, params: &[String], max_branches: usize, allow_par: bool) -> ProcessTerm {
        let branches = self.rng.random_range(1..=max_branches);
        let mut scope = params.to_vec();
        let terms = (0..branches)
            .map(|_| self.sequence(&mut scope, allow_par))
            .collect();
        ProcessTerm::choice_of(terms)
    }
}

/// Root plus up to three acyclic definitions over actions a, b, c. Binary
/// value arguments appear on at most one position per prefix.
pub fn finite_model(rng: &mut StdRng) -> Model {
    let n = rng.random_range(0..=3);
    let arities: Vec<usize> = (0..n).map(|_| rng.random_range(0..=1)).collect();
    let mut model = Model::new();
    let mut bodies = Vec::new();
    // D_i may only call D_j for j > i; Root may call all of them.
    for i in (0..n).rev() {
        let callees = (i + 1..n).map(|j| (format!("D{j}"), arities[j])).collect();
        let params: Vec<String> = (0..arities[i]).map(|k| format!("p{k}")).collect();
        let mut g = ExploreGen {
            rng,
            callees,
            actions: &["a", "b", "c"],
            fresh: 0,
            max_arity: 1,
        };
        let body = g.body(&params, 2, false);
        bodies.push(Definition {
            name: format!("D{i}"),
            params,
            body,
        });
    }
    let callees = (0..n).map(|j| (format!("D{j}"), arities[j])).collect();
    let mut g = ExploreGen {
        rng,
        callees,
        actions: &["a", "b", "c"],
        fresh: 0,
        max_arity: 1,
    };
    let root = g.body(&[], 2, true);
    model.insert(Definition {
        name: ROOT.into(),
        params: vec![],
        body: root,
    });
    for d in bodies.into_iter().rev() {
        model.insert(d);
    }
    model
}

/// Root = (C0 | C1 ...) \ {h} over one to three recursive components that
/// use the visible action `a` and the hidden channel `h`.
pub fn cyclic_model(rng: &mut StdRng) -> Model {
    let n = rng.random_range(1..=3);
    let arities: Vec<usize> = (0..n).map(|_| rng.random_range(0..=1)).collect();
    let callees: Vec<(String, usize)> = (0..n).map(|j| (format!("C{j}"), arities[j])).collect();
    let mut model = Model::new();
    let mut comps = Vec::new();
    let ncomp = rng.random_range(1..=n.min(2));
    for (j, &arity) in arities.iter().enumerate().take(ncomp) {
        let args = (0..arity).map(|_| lit(rng)).collect();
        comps.push(ProcessTerm::call(format!("C{j}"), args));
    }
    model.insert(Definition {
        name: ROOT.into(),
        params: vec![],
        body: ProcessTerm::restrict(ProcessTerm::par_of(comps), ["h"]),
    });
    for (i, &arity) in arities.iter().enumerate() {
        let params: Vec<String> = (0..arity).map(|k| format!("p{k}")).collect();
        let mut g = ExploreGen {
            rng,
            callees: callees.clone(),
            actions: &["a", "h"],
            fresh: 0,
            max_arity: 1,
        };
        let body = g.body(&params, 3, false);
        model.insert(Definition {
            name: format!("C{i}"),
            params,
            body,
        });
    }
    model
}

pub fn explorable_model(rng: &mut StdRng) -> Model {
    if rng.random_bool(0.5) {
        finite_model(rng)
    } else {
        cyclic_model(rng)
    }
}

// ---------------------------------------------------------------------------
// Mutations. Some preserve traces (operand swaps, duplicated or idle
// alternatives), others usually do not (pruning, renaming).

fn count_nodes(t: &ProcessTerm) -> usize {
    1 + match t {
        ProcessTerm::Nil | ProcessTerm::Call(..) => 0,
        ProcessTerm::Prefix(_, p) | ProcessTerm::Restrict(p, _) => count_nodes(p),
        ProcessTerm::Choice(l, r) | ProcessTerm::Par(l, r) | ProcessTerm::Cond(_, l, r) => {
            count_nodes(l) + count_nodes(r)
        }
    }
}

fn mutate_at(
    t: &ProcessTerm,
    target: &mut usize,
    rng: &mut StdRng,
    rename: &[&str],
) -> ProcessTerm {
    if *target == 0 {
        *target = usize::MAX;
        return match rng.random_range(0..6) {
            0 => match t {
                ProcessTerm::Choice(l, r) => ProcessTerm::Choice(r.clone(), l.clone()),
                ProcessTerm::Par(l, r) => ProcessTerm::Par(r.clone(), l.clone()),
                other => ProcessTerm::choice(other.clone(), other.clone()),
            },
            1 => ProcessTerm::choice(t.clone(), t.clone()),
            2 => ProcessTerm::choice(t.clone(), ProcessTerm::Nil),
            3 => ProcessTerm::Nil,
            _ => match t {
                ProcessTerm::Prefix(Prefix::Input { action, binders }, then)
                    if !rename.is_empty() =>
                {
                    let other = rename.iter().find(|a| **a != action).unwrap_or(&"a");
                    ProcessTerm::Prefix(
                        Prefix::Input {
                            action: other.to_string(),
                            binders: binders.clone(),
                        },
                        then.clone(),
                    )
                }
                ProcessTerm::Prefix(Prefix::Output { action, args }, then)
                    if !rename.is_empty() =>
                {
                    let other = rename.iter().find(|a| **a != action).unwrap_or(&"a");
                    ProcessTerm::Prefix(
                        Prefix::Output {
                            action: other.to_string(),
                            args: args.clone(),
                        },
                        then.clone(),
                    )
                }
                _ => ProcessTerm::Nil,
            },
        };
    }
    if *target == usize::MAX {
        return t.clone();
    }
    *target -= 1;
    match t {
        ProcessTerm::Nil | ProcessTerm::Call(..) => t.clone(),
        ProcessTerm::Prefix(p, then) => {
            ProcessTerm::prefix(p.clone(), mutate_at(then, target, rng, rename))
        }
        ProcessTerm::Restrict(p, names) => {
            ProcessTerm::Restrict(Box::new(mutate_at(p, target, rng, rename)), names.clone())
        }
        ProcessTerm::Choice(l, r) => {
            let l = mutate_at(l, target, rng, rename);
            ProcessTerm::choice(l, mutate_at(r, target, rng, rename))
        }
        ProcessTerm::Par(l, r) => {
            let l = mutate_at(l, target, rng, rename);
            ProcessTerm::par(l, mutate_at(r, target, rng, rename))
        }
        ProcessTerm::Cond(test, l, r) => {
            let l = mutate_at(l, target, rng, rename);
            ProcessTerm::cond(test.clone(), l, mutate_at(r, target, rng, rename))
        }
    }
}

/// Applies one random mutation to one random definition.
pub fn mutate(model: &Model, rng: &mut StdRng) -> Model {
    let mut out = model.clone();
    let names: Vec<String> = out.definitions.keys().cloned().collect();
    let name = pick(rng, &names).clone();
    // Cyclic models must keep `a` as their only visible label, so nothing is
    // renamed there.
    let rename: &[&str] = if model.get("C0").is_some() {
        &[]
    } else {
        &["a", "b", "c"]
    };
    let def = out.definitions.get_mut(&name).expect("picked from keys");
    let mut target = rng.random_range(0..count_nodes(&def.body));
    def.body = mutate_at(&def.body, &mut target, rng, rename);
    out
}

/// A pair of models from the same family: half the time a mutant of the
/// first, otherwise independent.
pub fn model_pair(rng: &mut StdRng) -> (Model, Model) {
    let a = explorable_model(rng);
    let b = if rng.random_bool(0.6) {
        mutate(&a, rng)
    } else if a.get("C0").is_some() {
        cyclic_model(rng)
    } else {
        finite_model(rng)
    };
    (a, b)
}

/// The visible labels occurring in an LTS.
pub fn alphabet(lts: &Lts) -> Vec<GroundLabel> {
    let set: BTreeSet<GroundLabel> = lts
        .transitions()
        .iter()
        .filter(|t| !t.label.is_tau())
        .map(|t| t.label.clone())
        .collect();
    set.into_iter().collect()
}
