//! Concrete syntax for models (`.ccs` files) and formulas.
//!
//! Model files hold one definition per line. A definition may continue over
//! several lines while a parenthesis or brace is open. `#` starts a comment.
//!
//! ```text
//! Empty = put(d,b) . Full(d,b)
//! Spec  = choose(x) . (Spec + 'keep(x) . Spec)
//! ```
//!
//! Process operators, tightest first: prefix `.`, restriction `\ {..}`,
//! choice `+`, parallel `|`. `+` and `|` associate to the right and
//! `if .. then .. else ..` extends as far right as possible. A leading
//! apostrophe marks an output (co-action).
//!
//! Formulas use `tt`, `ff`, `&&`, `||`, strong modalities `<l> f` and
//! `[l] f`, weak modalities `<<l>> f` and `[[l]] f`, and fixpoints
//! `min X . f` / `max X . f`. A label is a ground action such as
//! `choose(0)` or `'keep(1)`, `tau`, or `-` for any visible label.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::ast::{
    BoolExpr, Definition, Formula, GroundLabel, LabelPattern, Model, Polarity, Prefix, ProcessTerm,
    Value, ValueExpr, TAU,
};
use crate::error::SourceError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Quote,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Plus,
    Bar,
    Backslash,
    Equals,
    NotEquals,
    Newline,
    Lt,
    Gt,
    LtLt,
    GtGt,
    LBrack,
    RBrack,
    LBrackBrack,
    RBrackBrack,
    AndAnd,
    OrOr,
    Minus,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        let s = match self {
            Tok::Ident(name) => return format!("identifier `{name}`"),
            Tok::Zero => "`0`",
            Tok::One => "`1`",
            Tok::Quote => "`'`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Plus => "`+`",
            Tok::Bar => "`|`",
            Tok::Backslash => "`\\`",
            Tok::Equals => "`=`",
            Tok::NotEquals => "`!=`",
            Tok::Newline => "end of line",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::LtLt => "`<<`",
            Tok::GtGt => "`>>`",
            Tok::LBrack => "`[`",
            Tok::RBrack => "`]`",
            Tok::LBrackBrack => "`[[`",
            Tok::RBrackBrack => "`]]`",
            Tok::AndAnd => "`&&`",
            Tok::OrOr => "`||`",
            Tok::Minus => "`-`",
            Tok::Eof => "end of input",
        };
        s.to_string()
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, message: impl Into<String>, expected: &[&str]) -> SourceError {
    SourceError {
        line,
        column: col,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

/// Splits text into tokens. Newlines are significant only outside
/// parentheses and braces; runs of them collapse into one token.
fn lex(text: &str) -> Result<Vec<Token>, SourceError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out: Vec<Token> = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut depth = 0usize;

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let next = chars.get(i + 1).copied();
        let mut push = |tok: Tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Token {
                tok,
                line: tl,
                col: tc,
            });
            *i += width;
            *col += width;
        };
        match c {
            '\n' => {
                if depth == 0
                    && !matches!(
                        out.last(),
                        Some(Token {
                            tok: Tok::Newline,
                            ..
                        })
                    )
                {
                    out.push(Token {
                        tok: Tok::Newline,
                        line: tl,
                        col: tc,
                    });
                }
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Token {
                    tok: Tok::Ident(word),
                    line: tl,
                    col: tc,
                });
            }
            '0' | '1' => {
                if next.is_some_and(|n| n.is_ascii_alphanumeric() || n == '_') {
                    return Err(err(tl, tc, "values are the single digits 0 and 1", &[]));
                }
                push(
                    if c == '0' { Tok::Zero } else { Tok::One },
                    1,
                    &mut i,
                    &mut col,
                );
            }
            c if c.is_ascii_digit() => {
                return Err(err(tl, tc, "values are the single digits 0 and 1", &[]));
            }
            '\'' => push(Tok::Quote, 1, &mut i, &mut col),
            '(' => {
                depth += 1;
                push(Tok::LParen, 1, &mut i, &mut col);
            }
            '{' => {
                depth += 1;
                push(Tok::LBrace, 1, &mut i, &mut col);
            }
            ')' | '}' => {
                depth = depth.saturating_sub(1);
                push(
                    if c == ')' { Tok::RParen } else { Tok::RBrace },
                    1,
                    &mut i,
                    &mut col,
                );
            }
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            '\\' => push(Tok::Backslash, 1, &mut i, &mut col),
            '=' => push(Tok::Equals, 1, &mut i, &mut col),
            '-' => push(Tok::Minus, 1, &mut i, &mut col),
            '!' if next == Some('=') => push(Tok::NotEquals, 2, &mut i, &mut col),
            '|' if next == Some('|') => push(Tok::OrOr, 2, &mut i, &mut col),
            '|' => push(Tok::Bar, 1, &mut i, &mut col),
            '&' if next == Some('&') => push(Tok::AndAnd, 2, &mut i, &mut col),
            '<' if next == Some('<') => push(Tok::LtLt, 2, &mut i, &mut col),
            '<' => push(Tok::Lt, 1, &mut i, &mut col),
            '>' if next == Some('>') => push(Tok::GtGt, 2, &mut i, &mut col),
            '>' => push(Tok::Gt, 1, &mut i, &mut col),
            '[' if next == Some('[') => push(Tok::LBrackBrack, 2, &mut i, &mut col),
            '[' => push(Tok::LBrack, 1, &mut i, &mut col),
            ']' if next == Some(']') => push(Tok::RBrackBrack, 2, &mut i, &mut col),
            ']' => push(Tok::RBrack, 1, &mut i, &mut col),
            other => {
                return Err(err(tl, tc, format!("unexpected character `{other}`"), &[]));
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

const PROCESS_KEYWORDS: [&str; 4] = ["if", "then", "else", TAU];
const FORMULA_KEYWORDS: [&str; 5] = ["tt", "ff", "min", "max", TAU];

struct PendingCall {
    name: String,
    arity: usize,
    line: usize,
    col: usize,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Value variables in scope, innermost last.
    scope: Vec<String>,
    calls: Vec<PendingCall>,
}

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Parser {
            tokens,
            pos: 0,
            scope: Vec::new(),
            calls: Vec::new(),
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn at(&self, tok: &Tok) -> bool {
        &self.peek().tok == tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.at(tok) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &[&str]) -> SourceError {
        let t = self.peek();
        err(
            t.line,
            t.col,
            format!("unexpected {}", t.tok.describe()),
            expected,
        )
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<Token, SourceError> {
        if self.at(tok) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[what]))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(w) if w == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), SourceError> {
        if self.at_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{kw}`")]))
        }
    }

    /// An identifier that is not one of `reserved`.
    fn name(&mut self, what: &str, reserved: &[&str]) -> Result<(String, Token), SourceError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(w) if reserved.contains(&w.as_str()) => Err(err(
                t.line,
                t.col,
                format!("`{w}` is reserved and cannot be used as {what}"),
                &[what],
            )),
            Tok::Ident(w) => {
                let w = w.clone();
                self.bump();
                Ok((w, t))
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn skip_newlines(&mut self) {
        while self.eat(&Tok::Newline) {}
    }

    // ---- models ----

    fn model(&mut self) -> Result<Model, SourceError> {
        let mut model = Model::new();
        self.skip_newlines();
        while !self.at(&Tok::Eof) {
            let (name, name_tok) = self.name("definition name", &PROCESS_KEYWORDS)?;
            if model.get(&name).is_some() {
                return Err(err(
                    name_tok.line,
                    name_tok.col,
                    format!("duplicate definition of `{name}`"),
                    &[],
                ));
            }
            let mut params = Vec::new();
            if self.eat(&Tok::LParen) {
                loop {
                    let (p, ptok) = self.name("parameter name", &PROCESS_KEYWORDS)?;
                    if params.contains(&p) {
                        return Err(err(
                            ptok.line,
                            ptok.col,
                            format!("duplicate parameter `{p}`"),
                            &[],
                        ));
                    }
                    params.push(p);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(&Tok::RParen, "`)`")?;
            }
            self.expect(&Tok::Equals, "`=`")?;
            self.scope = params.clone();
            let body = self.par()?;
            self.scope.clear();
            if !self.at(&Tok::Eof) {
                self.expect(&Tok::Newline, "end of line")?;
            }
            self.skip_newlines();
            model.insert(Definition { name, params, body });
        }
        for call in &self.calls {
            match model.get(&call.name) {
                None => {
                    return Err(err(
                        call.line,
                        call.col,
                        format!("call to undefined process `{}`", call.name),
                        &[],
                    ))
                }
                Some(def) if def.params.len() != call.arity => {
                    return Err(err(
                        call.line,
                        call.col,
                        format!(
                            "`{}` takes {} argument(s) but {} were given",
                            call.name,
                            def.params.len(),
                            call.arity
                        ),
                        &[],
                    ))
                }
                Some(_) => {}
            }
        }
        Ok(model)
    }

    fn par(&mut self) -> Result<ProcessTerm, SourceError> {
        let left = self.choice()?;
        if self.eat(&Tok::Bar) {
            Ok(ProcessTerm::par(left, self.par()?))
        } else {
            Ok(left)
        }
    }

    fn choice(&mut self) -> Result<ProcessTerm, SourceError> {
        let left = self.restriction()?;
        if self.eat(&Tok::Plus) {
            Ok(ProcessTerm::choice(left, self.choice()?))
        } else {
            Ok(left)
        }
    }

    fn restriction(&mut self) -> Result<ProcessTerm, SourceError> {
        let mut p = self.sequence()?;
        while self.eat(&Tok::Backslash) {
            self.expect(&Tok::LBrace, "`{`")?;
            let mut names = BTreeSet::new();
            loop {
                let (n, _) = self.name("action name", &PROCESS_KEYWORDS)?;
                names.insert(n);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RBrace, "`}`")?;
            p = ProcessTerm::Restrict(Box::new(p), names);
        }
        Ok(p)
    }

    fn sequence(&mut self) -> Result<ProcessTerm, SourceError> {
        if self.eat(&Tok::Quote) {
            let (action, _) = self.name("action name", &PROCESS_KEYWORDS)?;
            let args = if self.at(&Tok::LParen) {
                self.value_args()?
            } else {
                Vec::new()
            };
            self.expect(&Tok::Dot, "`.`")?;
            let then = self.sequence()?;
            return Ok(ProcessTerm::prefix(Prefix::Output { action, args }, then));
        }
        match &self.peek().tok {
            Tok::Ident(w) if !PROCESS_KEYWORDS.contains(&w.as_str()) => {}
            Tok::Ident(w) if w == TAU => {
                let t = self.peek();
                return Err(err(
                    t.line,
                    t.col,
                    "`tau` cannot be used as an action or process name",
                    &[],
                ));
            }
            _ => return self.atom(),
        }
        let (name, name_tok) = self.name("action or process name", &PROCESS_KEYWORDS)?;
        // Raw argument tokens; whether they are binders or value expressions
        // depends on whether a `.` follows.
        let mut raw: Vec<Token> = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                let t = self.peek().clone();
                match t.tok {
                    Tok::Ident(_) | Tok::Zero | Tok::One => {
                        self.bump();
                        raw.push(t);
                    }
                    _ => return Err(self.unexpected(&["value", "variable"])),
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen, "`)`")?;
        }
        if self.eat(&Tok::Dot) {
            let mut binders: Vec<String> = Vec::new();
            for t in &raw {
                match &t.tok {
                    Tok::Ident(b) if PROCESS_KEYWORDS.contains(&b.as_str()) => {
                        return Err(err(
                            t.line,
                            t.col,
                            format!("`{b}` is reserved"),
                            &["variable"],
                        ))
                    }
                    Tok::Ident(b) => {
                        if binders.contains(b) {
                            return Err(err(t.line, t.col, format!("duplicate binder `{b}`"), &[]));
                        }
                        binders.push(b.clone());
                    }
                    _ => {
                        return Err(err(
                            t.line,
                            t.col,
                            "input prefixes bind variables; use 'name(...) to send values",
                            &["variable"],
                        ))
                    }
                }
            }
            let mark = self.scope.len();
            self.scope.extend(binders.iter().cloned());
            let then = self.sequence();
            self.scope.truncate(mark);
            return Ok(ProcessTerm::prefix(
                Prefix::Input {
                    action: name,
                    binders,
                },
                then?,
            ));
        }
        let args = raw
            .iter()
            .map(|t| self.value_from_token(t))
            .collect::<Result<Vec<_>, _>>()?;
        self.calls.push(PendingCall {
            name: name.clone(),
            arity: args.len(),
            line: name_tok.line,
            col: name_tok.col,
        });
        Ok(ProcessTerm::Call(name, args))
    }

    fn atom(&mut self) -> Result<ProcessTerm, SourceError> {
        if self.eat(&Tok::Zero) {
            return Ok(ProcessTerm::Nil);
        }
        if self.eat(&Tok::LParen) {
            let p = self.par()?;
            self.expect(&Tok::RParen, "`)`")?;
            return Ok(p);
        }
        if self.at_keyword("if") {
            self.bump();
            let test = self.bool_expr()?;
            self.expect_keyword("then")?;
            let then = self.par()?;
            self.expect_keyword("else")?;
            let otherwise = self.par()?;
            return Ok(ProcessTerm::cond(test, then, otherwise));
        }
        Err(self.unexpected(&["process expression"]))
    }

    fn bool_expr(&mut self) -> Result<BoolExpr, SourceError> {
        let a = self.value_expr()?;
        if self.eat(&Tok::Equals) {
            Ok(BoolExpr::Eq(a, self.value_expr()?))
        } else if self.eat(&Tok::NotEquals) {
            Ok(BoolExpr::Neq(a, self.value_expr()?))
        } else {
            Err(self.unexpected(&["`=`", "`!=`"]))
        }
    }

    fn value_args(&mut self) -> Result<Vec<ValueExpr>, SourceError> {
        self.expect(&Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        loop {
            args.push(self.value_expr()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::RParen, "`)`")?;
        Ok(args)
    }

    fn value_expr(&mut self) -> Result<ValueExpr, SourceError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(_) | Tok::Zero | Tok::One => {
                self.bump();
                self.value_from_token(&t)
            }
            _ => Err(self.unexpected(&["value", "variable"])),
        }
    }

    fn value_from_token(&self, t: &Token) -> Result<ValueExpr, SourceError> {
        match &t.tok {
            Tok::Zero => Ok(ValueExpr::Lit(Value::Zero)),
            Tok::One => Ok(ValueExpr::Lit(Value::One)),
            Tok::Ident(v) if PROCESS_KEYWORDS.contains(&v.as_str()) => Err(err(
                t.line,
                t.col,
                format!("`{v}` is reserved"),
                &["value", "variable"],
            )),
            Tok::Ident(v) => {
                if self.scope.iter().any(|s| s == v) {
                    Ok(ValueExpr::Var(v.clone()))
                } else {
                    Err(err(t.line, t.col, format!("unbound variable `{v}`"), &[]))
                }
            }
            _ => Err(err(
                t.line,
                t.col,
                "expected a value",
                &["value", "variable"],
            )),
        }
    }

    // ---- formulas ----

    fn formula(&mut self) -> Result<Formula, SourceError> {
        let left = self.conjunction()?;
        if self.eat(&Tok::OrOr) {
            Ok(Formula::or(left, self.formula()?))
        } else {
            Ok(left)
        }
    }

    fn conjunction(&mut self) -> Result<Formula, SourceError> {
        let left = self.unary()?;
        if self.eat(&Tok::AndAnd) {
            Ok(Formula::and(left, self.conjunction()?))
        } else {
            Ok(left)
        }
    }

    fn unary(&mut self) -> Result<Formula, SourceError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Lt => {
                self.bump();
                let l = self.label()?;
                self.expect(&Tok::Gt, "`>`")?;
                Ok(Formula::diamond(l, self.unary()?))
            }
            Tok::LBrack => {
                self.bump();
                let l = self.label()?;
                self.expect(&Tok::RBrack, "`]`")?;
                Ok(Formula::boxed(l, self.unary()?))
            }
            Tok::LtLt => {
                self.bump();
                let l = self.label()?;
                self.expect(&Tok::GtGt, "`>>`")?;
                Ok(Formula::weak_diamond(l, self.unary()?))
            }
            Tok::LBrackBrack => {
                self.bump();
                let l = self.label()?;
                self.expect(&Tok::RBrackBrack, "`]]`")?;
                Ok(Formula::weak_box(l, self.unary()?))
            }
            Tok::Ident(w) => match w.as_str() {
                "tt" => {
                    self.bump();
                    Ok(Formula::Tt)
                }
                "ff" => {
                    self.bump();
                    Ok(Formula::Ff)
                }
                "min" | "max" => {
                    let least = w == "min";
                    self.bump();
                    let (var, _) = self.name("fixpoint variable", &FORMULA_KEYWORDS)?;
                    self.expect(&Tok::Dot, "`.`")?;
                    self.scope.push(var.clone());
                    let body = self.formula();
                    self.scope.pop();
                    let body = body?;
                    Ok(if least {
                        Formula::mu(var, body)
                    } else {
                        Formula::nu(var, body)
                    })
                }
                w if FORMULA_KEYWORDS.contains(&w) => Err(self.unexpected(&["formula"])),
                w => {
                    if !self.scope.iter().any(|s| s == w) {
                        return Err(err(
                            t.line,
                            t.col,
                            format!("fixpoint variable `{w}` is not bound"),
                            &[],
                        ));
                    }
                    let w = w.to_string();
                    self.bump();
                    Ok(Formula::Var(w))
                }
            },
            _ => Err(self.unexpected(&["formula"])),
        }
    }

    fn label(&mut self) -> Result<LabelPattern, SourceError> {
        if self.eat(&Tok::Minus) {
            return Ok(LabelPattern::AnyVisible);
        }
        if self.at_keyword(TAU) {
            self.bump();
            return Ok(LabelPattern::Tau);
        }
        let polarity = if self.eat(&Tok::Quote) {
            Polarity::Output
        } else {
            Polarity::Input
        };
        let (action, _) = self.name("action label", &[TAU])?;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                if self.eat(&Tok::Zero) {
                    args.push(Value::Zero);
                } else if self.eat(&Tok::One) {
                    args.push(Value::One);
                } else {
                    return Err(self.unexpected(&["`0`", "`1`"]));
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen, "`)`")?;
        }
        Ok(LabelPattern::Exact(GroundLabel::Visible {
            polarity,
            action,
            args,
        }))
    }
}

/// Parses a model file. Call targets and arities are checked here.
pub fn parse_model(text: &str) -> Result<Model, SourceError> {
    let mut p = Parser::new(lex(text)?);
    p.model()
}

/// Parses a closed formula. Newlines are treated as whitespace.
pub fn parse_formula(text: &str) -> Result<Formula, SourceError> {
    let tokens = lex(text)?
        .into_iter()
        .filter(|t| t.tok != Tok::Newline)
        .collect();
    let mut p = Parser::new(tokens);
    let f = p.formula()?;
    if !p.at(&Tok::Eof) {
        return Err(p.unexpected(&["`&&`", "`||`", "end of input"]));
    }
    Ok(f)
}

// ---- printing ----

const LEVEL_PAR: u8 = 0;
const LEVEL_CHOICE: u8 = 1;
const LEVEL_RESTRICT: u8 = 2;
const LEVEL_SEQ: u8 = 3;
const LEVEL_ATOM: u8 = 4;

fn process_level(t: &ProcessTerm) -> u8 {
    match t {
        ProcessTerm::Par(..) => LEVEL_PAR,
        ProcessTerm::Choice(..) => LEVEL_CHOICE,
        ProcessTerm::Restrict(..) => LEVEL_RESTRICT,
        ProcessTerm::Prefix(..) => LEVEL_SEQ,
        ProcessTerm::Nil | ProcessTerm::Call(..) | ProcessTerm::Cond(..) => LEVEL_ATOM,
    }
}

fn write_values(out: &mut String, args: &[ValueExpr]) {
    if args.is_empty() {
        return;
    }
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        match a {
            ValueExpr::Lit(v) => {
                let _ = write!(out, "{v}");
            }
            ValueExpr::Var(x) => out.push_str(x),
        }
    }
    out.push(')');
}

fn write_prefix(out: &mut String, p: &Prefix) {
    match p {
        Prefix::Input { action, binders } => {
            out.push_str(action);
            if !binders.is_empty() {
                let _ = write!(out, "({})", binders.join(","));
            }
        }
        Prefix::Output { action, args } => {
            out.push('\'');
            out.push_str(action);
            write_values(out, args);
        }
    }
}

fn write_bool(out: &mut String, b: &BoolExpr) {
    let (a, op, c) = match b {
        BoolExpr::Eq(a, c) => (a, " = ", c),
        BoolExpr::Neq(a, c) => (a, " != ", c),
    };
    let one = |e: &ValueExpr, out: &mut String| match e {
        ValueExpr::Lit(v) => {
            let _ = write!(out, "{v}");
        }
        ValueExpr::Var(x) => out.push_str(x),
    };
    one(a, out);
    out.push_str(op);
    one(c, out);
}

/// `tail` is true when nothing follows the term in its enclosing context,
/// which is the only place a bare `if` may appear.
fn write_process(out: &mut String, t: &ProcessTerm, min_level: u8, tail: bool) {
    let open_ended = matches!(t, ProcessTerm::Cond(..));
    if process_level(t) < min_level || (open_ended && !tail) {
        out.push('(');
        write_process(out, t, LEVEL_PAR, true);
        out.push(')');
        return;
    }
    match t {
        ProcessTerm::Nil => out.push('0'),
        ProcessTerm::Call(name, args) => {
            out.push_str(name);
            write_values(out, args);
        }
        ProcessTerm::Prefix(p, then) => {
            write_prefix(out, p);
            out.push_str(" . ");
            write_process(out, then, LEVEL_SEQ, tail);
        }
        ProcessTerm::Choice(l, r) => {
            write_process(out, l, LEVEL_RESTRICT, false);
            out.push_str(" + ");
            write_process(out, r, LEVEL_CHOICE, tail);
        }
        ProcessTerm::Par(l, r) => {
            write_process(out, l, LEVEL_CHOICE, false);
            out.push_str(" | ");
            write_process(out, r, LEVEL_PAR, tail);
        }
        ProcessTerm::Restrict(p, names) => {
            write_process(out, p, LEVEL_RESTRICT, false);
            out.push_str(" \\ {");
            out.push_str(&names.iter().cloned().collect::<Vec<_>>().join(", "));
            out.push('}');
        }
        ProcessTerm::Cond(test, then, otherwise) => {
            out.push_str("if ");
            write_bool(out, test);
            out.push_str(" then ");
            write_process(out, then, LEVEL_PAR, true);
            out.push_str(" else ");
            write_process(out, otherwise, LEVEL_PAR, tail);
        }
    }
}

/// Canonical single-line text of a process term.
pub fn print_process(t: &ProcessTerm) -> String {
    let mut out = String::new();
    write_process(&mut out, t, LEVEL_PAR, true);
    out
}

pub fn print_definition(def: &Definition) -> String {
    let mut out = def.name.clone();
    if !def.params.is_empty() {
        let _ = write!(out, "({})", def.params.join(","));
    }
    out.push_str(" = ");
    write_process(&mut out, &def.body, LEVEL_PAR, true);
    out
}

/// One definition per line, in model order.
pub fn print_model(m: &Model) -> String {
    let mut out = String::new();
    for def in m.definitions.values() {
        out.push_str(&print_definition(def));
        out.push('\n');
    }
    out
}

pub fn print_label_pattern(p: &LabelPattern) -> String {
    match p {
        LabelPattern::Exact(l) => l.to_string(),
        LabelPattern::Tau => TAU.to_string(),
        LabelPattern::AnyVisible => "-".to_string(),
    }
}

fn write_formula(out: &mut String, f: &Formula, min_level: u8, tail: bool) {
    let level = match f {
        Formula::Or(..) => 0,
        Formula::And(..) => 1,
        _ => 2,
    };
    let open_ended = matches!(f, Formula::Mu(..) | Formula::Nu(..));
    if level < min_level || (open_ended && !tail) {
        out.push('(');
        write_formula(out, f, 0, true);
        out.push(')');
        return;
    }
    let modality = |open: &str, p: &LabelPattern, close: &str, g: &Formula, out: &mut String| {
        out.push_str(open);
        out.push_str(&print_label_pattern(p));
        out.push_str(close);
        out.push(' ');
        write_formula(out, g, 2, tail);
    };
    match f {
        Formula::Tt => out.push_str("tt"),
        Formula::Ff => out.push_str("ff"),
        Formula::Var(x) => out.push_str(x),
        Formula::Or(a, b) => {
            write_formula(out, a, 1, false);
            out.push_str(" || ");
            write_formula(out, b, 0, tail);
        }
        Formula::And(a, b) => {
            write_formula(out, a, 2, false);
            out.push_str(" && ");
            write_formula(out, b, 1, tail);
        }
        Formula::DiamondStrong(p, g) => modality("<", p, ">", g, out),
        Formula::BoxStrong(p, g) => modality("[", p, "]", g, out),
        Formula::DiamondWeak(p, g) => modality("<<", p, ">>", g, out),
        Formula::BoxWeak(p, g) => modality("[[", p, "]]", g, out),
        Formula::Mu(x, g) | Formula::Nu(x, g) => {
            out.push_str(if matches!(f, Formula::Mu(..)) {
                "min "
            } else {
                "max "
            });
            out.push_str(x);
            out.push_str(" . ");
            write_formula(out, g, 0, true);
        }
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, 0, true);
    out
}
