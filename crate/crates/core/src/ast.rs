//! Abstract syntax for value-passing CCS processes and for the modal
//! mu-calculus, together with substitution and ground evaluation.
//!
//! Values range over the binary domain `{0, 1}`. A process term is *ground*
//! when it has no free value variables; only ground terms are states of a
//! labeled transition system.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use indexmap::IndexMap;

use crate::error::EvalError;

/// Reserved name of the internal action. It can never be used as an action
/// name in a prefix.
pub const TAU: &str = "tau";

/// A binary value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Zero,
    One,
}

impl Value {
    /// Every inhabitant of the domain, in increasing order.
    pub const ALL: [Value; 2] = [Value::Zero, Value::One];

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Value::One
        } else {
            Value::Zero
        }
    }

    /// All `2^arity` tuples over the domain in lexicographic order.
    pub fn tuples(arity: usize) -> Vec<Vec<Value>> {
        let mut out = vec![Vec::with_capacity(arity)];
        for _ in 0..arity {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    Value::ALL.iter().map(move |v| {
                        let mut t = prefix.clone();
                        t.push(*v);
                        t
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Zero => f.write_str("0"),
            Value::One => f.write_str("1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValueExpr {
    Lit(Value),
    Var(String),
}

impl ValueExpr {
    pub fn var(name: impl Into<String>) -> Self {
        ValueExpr::Var(name.into())
    }

    /// Evaluates a ground expression.
    pub fn eval(&self) -> Result<Value, EvalError> {
        match self {
            ValueExpr::Lit(v) => Ok(*v),
            ValueExpr::Var(name) => Err(EvalError::Unbound(name.clone())),
        }
    }

    fn substitute(&self, binding: &Binding) -> ValueExpr {
        match self {
            ValueExpr::Var(name) => match binding.get(name) {
                Some(v) => ValueExpr::Lit(*v),
                None => self.clone(),
            },
            lit => lit.clone(),
        }
    }
}

impl From<Value> for ValueExpr {
    fn from(v: Value) -> Self {
        ValueExpr::Lit(v)
    }
}

/// Equality tests between value expressions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoolExpr {
    Eq(ValueExpr, ValueExpr),
    Neq(ValueExpr, ValueExpr),
}

impl BoolExpr {
    fn substitute(&self, binding: &Binding) -> BoolExpr {
        match self {
            BoolExpr::Eq(a, b) => BoolExpr::Eq(a.substitute(binding), b.substitute(binding)),
            BoolExpr::Neq(a, b) => BoolExpr::Neq(a.substitute(binding), b.substitute(binding)),
        }
    }

    fn operands(&self) -> [&ValueExpr; 2] {
        match self {
            BoolExpr::Eq(a, b) | BoolExpr::Neq(a, b) => [a, b],
        }
    }
}

/// Evaluates a ground boolean expression. Callers substitute first; a free
/// variable here is an internal error.
pub fn eval_bool(expr: &BoolExpr) -> Result<bool, EvalError> {
    match expr {
        BoolExpr::Eq(a, b) => Ok(a.eval()? == b.eval()?),
        BoolExpr::Neq(a, b) => Ok(a.eval()? != b.eval()?),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Input,
    Output,
}

impl Polarity {
    pub fn complement(self) -> Polarity {
        match self {
            Polarity::Input => Polarity::Output,
            Polarity::Output => Polarity::Input,
        }
    }
}

/// An action prefix. Inputs bind fresh variables, outputs send values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prefix {
    Input {
        action: String,
        binders: Vec<String>,
    },
    Output {
        action: String,
        args: Vec<ValueExpr>,
    },
}

impl Prefix {
    pub fn input(action: impl Into<String>, binders: &[&str]) -> Self {
        Prefix::Input {
            action: action.into(),
            binders: binders.iter().map(|b| b.to_string()).collect(),
        }
    }

    pub fn output(action: impl Into<String>, args: Vec<ValueExpr>) -> Self {
        Prefix::Output {
            action: action.into(),
            args,
        }
    }

    pub fn action(&self) -> &str {
        match self {
            Prefix::Input { action, .. } | Prefix::Output { action, .. } => action,
        }
    }

    pub fn polarity(&self) -> Polarity {
        match self {
            Prefix::Input { .. } => Polarity::Input,
            Prefix::Output { .. } => Polarity::Output,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Prefix::Input { binders, .. } => binders.len(),
            Prefix::Output { args, .. } => args.len(),
        }
    }
}

/// A process expression, possibly with free value variables.
///
/// `Choice` and `Par` are binary; n-ary source syntax folds to the right.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcessTerm {
    Nil,
    Prefix(Prefix, Box<ProcessTerm>),
    Choice(Box<ProcessTerm>, Box<ProcessTerm>),
    Par(Box<ProcessTerm>, Box<ProcessTerm>),
    Restrict(Box<ProcessTerm>, BTreeSet<String>),
    Cond(BoolExpr, Box<ProcessTerm>, Box<ProcessTerm>),
    Call(String, Vec<ValueExpr>),
}

pub type Binding = HashMap<String, Value>;

impl ProcessTerm {
    pub fn prefix(prefix: Prefix, then: ProcessTerm) -> Self {
        ProcessTerm::Prefix(prefix, Box::new(then))
    }

    pub fn choice(left: ProcessTerm, right: ProcessTerm) -> Self {
        ProcessTerm::Choice(Box::new(left), Box::new(right))
    }

    pub fn par(left: ProcessTerm, right: ProcessTerm) -> Self {
        ProcessTerm::Par(Box::new(left), Box::new(right))
    }

    pub fn restrict<I, S>(body: ProcessTerm, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ProcessTerm::Restrict(Box::new(body), names.into_iter().map(Into::into).collect())
    }

    pub fn cond(test: BoolExpr, then: ProcessTerm, otherwise: ProcessTerm) -> Self {
        ProcessTerm::Cond(test, Box::new(then), Box::new(otherwise))
    }

    pub fn call(name: impl Into<String>, args: Vec<ValueExpr>) -> Self {
        ProcessTerm::Call(name.into(), args)
    }

    /// Right-folds a nonempty list of alternatives.
    pub fn choice_of(mut terms: Vec<ProcessTerm>) -> Self {
        let mut acc = terms.pop().expect("choice_of needs at least one term");
        while let Some(t) = terms.pop() {
            acc = ProcessTerm::choice(t, acc);
        }
        acc
    }

    /// Right-folds a nonempty list of parallel components.
    pub fn par_of(mut terms: Vec<ProcessTerm>) -> Self {
        let mut acc = terms.pop().expect("par_of needs at least one term");
        while let Some(t) = terms.pop() {
            acc = ProcessTerm::par(t, acc);
        }
        acc
    }

    pub fn is_ground(&self) -> bool {
        free_value_vars(self).is_empty()
    }
}

/// Replaces free occurrences of bound variables by their values. Input
/// binders shadow the binding inside their continuation.
pub fn substitute(term: &ProcessTerm, binding: &Binding) -> ProcessTerm {
    if binding.is_empty() {
        return term.clone();
    }
    match term {
        ProcessTerm::Nil => ProcessTerm::Nil,
        ProcessTerm::Prefix(Prefix::Input { action, binders }, then) => {
            let body = if binders.iter().any(|b| binding.contains_key(b)) {
                let mut inner = binding.clone();
                for b in binders {
                    inner.remove(b);
                }
                substitute(then, &inner)
            } else {
                substitute(then, binding)
            };
            ProcessTerm::Prefix(
                Prefix::Input {
                    action: action.clone(),
                    binders: binders.clone(),
                },
                Box::new(body),
            )
        }
        ProcessTerm::Prefix(Prefix::Output { action, args }, then) => ProcessTerm::Prefix(
            Prefix::Output {
                action: action.clone(),
                args: args.iter().map(|a| a.substitute(binding)).collect(),
            },
            Box::new(substitute(then, binding)),
        ),
        ProcessTerm::Choice(l, r) => {
            ProcessTerm::choice(substitute(l, binding), substitute(r, binding))
        }
        ProcessTerm::Par(l, r) => ProcessTerm::par(substitute(l, binding), substitute(r, binding)),
        ProcessTerm::Restrict(p, names) => {
            ProcessTerm::Restrict(Box::new(substitute(p, binding)), names.clone())
        }
        ProcessTerm::Cond(test, t, e) => ProcessTerm::cond(
            test.substitute(binding),
            substitute(t, binding),
            substitute(e, binding),
        ),
        ProcessTerm::Call(name, args) => ProcessTerm::Call(
            name.clone(),
            args.iter().map(|a| a.substitute(binding)).collect(),
        ),
    }
}

/// The value variables occurring free in `term`.
pub fn free_value_vars(term: &ProcessTerm) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut bound = Vec::new();
    collect_free(term, &mut bound, &mut out);
    out
}

fn collect_free<'a>(term: &'a ProcessTerm, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    let mut note = |e: &ValueExpr, bound: &Vec<&str>| {
        if let ValueExpr::Var(name) = e {
            if !bound.contains(&name.as_str()) {
                out.insert(name.clone());
            }
        }
    };
    match term {
        ProcessTerm::Nil => {}
        ProcessTerm::Prefix(Prefix::Input { binders, .. }, then) => {
            let mark = bound.len();
            bound.extend(binders.iter().map(String::as_str));
            collect_free(then, bound, out);
            bound.truncate(mark);
        }
        ProcessTerm::Prefix(Prefix::Output { args, .. }, then) => {
            for a in args {
                note(a, bound);
            }
            collect_free(then, bound, out);
        }
        ProcessTerm::Choice(l, r) | ProcessTerm::Par(l, r) => {
            collect_free(l, bound, out);
            collect_free(r, bound, out);
        }
        ProcessTerm::Restrict(p, _) => collect_free(p, bound, out),
        ProcessTerm::Cond(test, t, e) => {
            for a in test.operands() {
                note(a, bound);
            }
            collect_free(t, bound, out);
            collect_free(e, bound, out);
        }
        ProcessTerm::Call(_, args) => {
            for a in args {
                note(a, bound);
            }
        }
    }
}

/// A parameterised process constant `Name(p1,...,pk) = body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub params: Vec<String>,
    pub body: ProcessTerm,
}

/// A set of process definitions, kept in source order.
///
/// Equality ignores definition order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub definitions: IndexMap<String, Definition>,
}

impl Model {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.definitions.get(name)
    }

    /// Adds or replaces a definition.
    pub fn insert(&mut self, def: Definition) {
        self.definitions.insert(def.name.clone(), def);
    }

    pub fn len(&self) -> usize {
        self.definitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.definitions.is_empty()
    }
}

/// A transition label: either the internal action or a visible action with
/// ground arguments.
///
/// The derived order is the one used for every deterministic tie-break:
/// tau first, then inputs before outputs, then action name, then the
/// argument tuple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundLabel {
    Tau,
    Visible {
        polarity: Polarity,
        action: String,
        args: Vec<Value>,
    },
}

impl GroundLabel {
    pub fn input(action: impl Into<String>, args: Vec<Value>) -> Self {
        GroundLabel::Visible {
            polarity: Polarity::Input,
            action: action.into(),
            args,
        }
    }

    pub fn output(action: impl Into<String>, args: Vec<Value>) -> Self {
        GroundLabel::Visible {
            polarity: Polarity::Output,
            action: action.into(),
            args,
        }
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, GroundLabel::Tau)
    }

    pub fn action(&self) -> Option<&str> {
        match self {
            GroundLabel::Tau => None,
            GroundLabel::Visible { action, .. } => Some(action),
        }
    }

    /// The label this one synchronises with, if any.
    pub fn complement(&self) -> Option<GroundLabel> {
        match self {
            GroundLabel::Tau => None,
            GroundLabel::Visible {
                polarity,
                action,
                args,
            } => Some(GroundLabel::Visible {
                polarity: polarity.complement(),
                action: action.clone(),
                args: args.clone(),
            }),
        }
    }
}

impl fmt::Display for GroundLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundLabel::Tau => f.write_str(TAU),
            GroundLabel::Visible {
                polarity,
                action,
                args,
            } => {
                if *polarity == Polarity::Output {
                    f.write_str("'")?;
                }
                f.write_str(action)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Renders a label sequence with `.` separators, e.g. `choose(0).'keep(1)`.
pub fn render_trace(trace: &[GroundLabel]) -> String {
    trace
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(".")
}

/// Which transitions a modality looks at.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LabelPattern {
    /// One specific visible label.
    Exact(GroundLabel),
    Tau,
    /// Any label other than tau.
    AnyVisible,
}

impl LabelPattern {
    pub fn matches(&self, label: &GroundLabel) -> bool {
        match self {
            LabelPattern::Exact(l) => l == label,
            LabelPattern::Tau => label.is_tau(),
            LabelPattern::AnyVisible => !label.is_tau(),
        }
    }
}

/// Modal mu-calculus formulas. There is no negation, so every fixpoint body
/// is monotone in its variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Tt,
    Ff,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    DiamondStrong(LabelPattern, Box<Formula>),
    BoxStrong(LabelPattern, Box<Formula>),
    DiamondWeak(LabelPattern, Box<Formula>),
    BoxWeak(LabelPattern, Box<Formula>),
    Var(String),
    Mu(String, Box<Formula>),
    Nu(String, Box<Formula>),
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn diamond(p: LabelPattern, f: Formula) -> Self {
        Formula::DiamondStrong(p, Box::new(f))
    }

    pub fn boxed(p: LabelPattern, f: Formula) -> Self {
        Formula::BoxStrong(p, Box::new(f))
    }

    pub fn weak_diamond(p: LabelPattern, f: Formula) -> Self {
        Formula::DiamondWeak(p, Box::new(f))
    }

    pub fn weak_box(p: LabelPattern, f: Formula) -> Self {
        Formula::BoxWeak(p, Box::new(f))
    }

    pub fn mu(var: impl Into<String>, f: Formula) -> Self {
        Formula::Mu(var.into(), Box::new(f))
    }

    pub fn nu(var: impl Into<String>, f: Formula) -> Self {
        Formula::Nu(var.into(), Box::new(f))
    }

    /// `<<l1>> <<l2>> ... <<lk>> tt`, which holds exactly when the label
    /// sequence is an observable trace.
    pub fn weak_trace(trace: &[GroundLabel]) -> Self {
        trace.iter().rev().fold(Formula::Tt, |acc, l| {
            Formula::weak_diamond(LabelPattern::Exact(l.clone()), acc)
        })
    }

    /// Variables occurring free.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Tt | Formula::Ff => {}
                Formula::And(a, b) | Formula::Or(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::DiamondStrong(_, g)
                | Formula::BoxStrong(_, g)
                | Formula::DiamondWeak(_, g)
                | Formula::BoxWeak(_, g) => go(g, bound, out),
                Formula::Var(x) => {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
                Formula::Mu(x, g) | Formula::Nu(x, g) => {
                    bound.push(x.clone());
                    go(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True for formulas built only from `tt`, `ff`, `&&`, `||` and diamonds.
    pub fn is_existential(&self) -> bool {
        match self {
            Formula::Tt | Formula::Ff => true,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_existential() && b.is_existential(),
            Formula::DiamondStrong(_, g) | Formula::DiamondWeak(_, g) => g.is_existential(),
            _ => false,
        }
    }

    /// The De Morgan dual: swaps `tt`/`ff`, `&&`/`||`, diamonds/boxes and
    /// `min`/`max`. A state satisfies the dual iff it violates the original.
    pub fn dual(&self) -> Formula {
        match self {
            Formula::Tt => Formula::Ff,
            Formula::Ff => Formula::Tt,
            Formula::And(a, b) => Formula::or(a.dual(), b.dual()),
            Formula::Or(a, b) => Formula::and(a.dual(), b.dual()),
            Formula::DiamondStrong(p, g) => Formula::boxed(p.clone(), g.dual()),
            Formula::BoxStrong(p, g) => Formula::diamond(p.clone(), g.dual()),
            Formula::DiamondWeak(p, g) => Formula::weak_box(p.clone(), g.dual()),
            Formula::BoxWeak(p, g) => Formula::weak_diamond(p.clone(), g.dual()),
            Formula::Var(x) => Formula::Var(x.clone()),
            Formula::Mu(x, g) => Formula::nu(x.clone(), g.dual()),
            Formula::Nu(x, g) => Formula::mu(x.clone(), g.dual()),
        }
    }
}
