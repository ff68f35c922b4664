//! Concrete ASCII syntax for terms and types.
//!
//! ```text
//! term    := '\' ident [':' tatom] '.' term | item+
//! item    := [conj] '<-' [conj] '.' | conj '.' | conj
//! conj    := disj (',' disj)*
//! disj    := unary ('or' unary)*
//! unary   := '-' unary | 'not' unary | app
//! app     := primary ('@' primary)*
//! primary := ident | ident '(' app (',' app)* ')' | '(' term ')' | '\' ...
//! type    := tatom ['->' type]
//! tatom   := 'e' | 'a' | 'l' | 'g' | 'd' | 'h' | 't' | '(' type ')'
//! ```
//!
//! A `.` right after a binder (and its optional annotation) belongs to the
//! binder; any other `.` ends a rule. Identifiers starting with an uppercase
//! letter are ASP variables and become constants of type `e`; a lowercase
//! identifier is a λ-variable when an enclosing `\` binds it. Unbound bare
//! lowercase identifiers are constants, except as operands of `or`, `,`, `-`,
//! `not` or a rule side, where they are propositional atoms. `p(...)` is an
//! atom, or a function term when it is itself an argument of `q(...)`.

use std::fmt;

use thiserror::Error;

use crate::term::{Symbol, Term};
use crate::types::{BaseType, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    Colon,
    LParen,
    RParen,
    Comma,
    At,
    LArrow,
    RArrow,
    Minus,
    Or,
    Not,
    Ident(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Lambda => f.write_str("'\\'"),
            Tok::Dot => f.write_str("'.'"),
            Tok::Colon => f.write_str("':'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::At => f.write_str("'@'"),
            Tok::LArrow => f.write_str("'<-'"),
            Tok::RArrow => f.write_str("'->'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Or => f.write_str("'or'"),
            Tok::Not => f.write_str("'not'"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, column);
        let mut advance = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                column = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => None,
            '%' => {
                // comment to end of line
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '\\' => Some(Tok::Lambda),
            '.' => Some(Tok::Dot),
            ':' => Some(Tok::Colon),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '@' => Some(Tok::At),
            '<' if chars.get(i + 1) == Some(&'-') => {
                advance = 2;
                Some(Tok::LArrow)
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                advance = 2;
                Some(Tok::RArrow)
            }
            '-' => Some(Tok::Minus),
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                advance = j - start;
                let word: String = chars[start..j].iter().collect();
                Some(match word.as_str() {
                    "or" => Tok::Or,
                    "not" => Tok::Not,
                    _ => Tok::Ident(word),
                })
            }
            other => {
                return Err(SyntaxError {
                    line: tl,
                    column: tc,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        if let Some(tok) = tok {
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            });
        }
        i += advance;
        column += advance;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: Vec<Symbol>,
    arg_depth: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn new(src: &str) -> PResult<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            scope: Vec::new(),
            arg_depth: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        let t = &self.toks[self.pos];
        Err(SyntaxError {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn at_item_end(&self) -> bool {
        matches!(self.peek(), Tok::RParen | Tok::Eof)
    }

    fn term(&mut self) -> PResult<Term> {
        if *self.peek() == Tok::Lambda {
            return self.lambda();
        }
        let mut items = vec![self.item()?];
        while !self.at_item_end() {
            items.push(self.item()?);
        }
        Ok(Term::program(items))
    }

    fn lambda(&mut self) -> PResult<Term> {
        self.expect(Tok::Lambda)?;
        let name = match self.bump().tok {
            Tok::Ident(s) => Symbol::new(&s),
            other => {
                self.pos -= 1;
                return self.error(format!("expected binder name, found {other}"));
            }
        };
        let ty = if *self.peek() == Tok::Colon {
            self.bump();
            Some(self.type_atom()?)
        } else {
            None
        };
        self.expect(Tok::Dot)?;
        self.scope.push(name.clone());
        let saved = self.arg_depth;
        self.arg_depth = 0;
        let body = self.term();
        self.arg_depth = saved;
        self.scope.pop();
        Ok(Term::abs_typed(name, ty, body?))
    }

    fn item(&mut self) -> PResult<Term> {
        if *self.peek() == Tok::LArrow {
            self.bump();
            if *self.peek() == Tok::Dot {
                return self.error("a rule needs a head or a body");
            }
            let body = literalize(self.conj()?);
            self.expect(Tok::Dot)?;
            return Ok(Term::rule(None, Some(body)));
        }
        let e = self.conj()?;
        match self.peek() {
            Tok::LArrow => {
                self.bump();
                let body = if *self.peek() == Tok::Dot {
                    None
                } else {
                    Some(literalize(self.conj()?))
                };
                self.expect(Tok::Dot)?;
                Ok(Term::rule(Some(literalize(e)), body))
            }
            Tok::Dot => {
                self.bump();
                Ok(Term::rule(Some(literalize(e)), None))
            }
            _ => Ok(e),
        }
    }

    fn conj(&mut self) -> PResult<Term> {
        let first = self.disj()?;
        if *self.peek() != Tok::Comma {
            return Ok(first);
        }
        let mut items = vec![literalize(first)];
        while *self.peek() == Tok::Comma {
            self.bump();
            items.push(literalize(self.disj()?));
        }
        Ok(Term::conj(items))
    }

    fn disj(&mut self) -> PResult<Term> {
        let first = self.unary()?;
        if *self.peek() != Tok::Or {
            return Ok(first);
        }
        let mut items = vec![literalize(first)];
        while *self.peek() == Tok::Or {
            self.bump();
            items.push(literalize(self.unary()?));
        }
        Ok(Term::or(items))
    }

    fn unary(&mut self) -> PResult<Term> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Term::cneg(literalize(self.unary()?)))
            }
            Tok::Not => {
                self.bump();
                Ok(Term::naf(literalize(self.unary()?)))
            }
            _ => self.app(),
        }
    }

    fn app(&mut self) -> PResult<Term> {
        let mut f = self.primary()?;
        while *self.peek() == Tok::At {
            self.bump();
            let saved = self.arg_depth;
            self.arg_depth = 0;
            let a = self.primary();
            self.arg_depth = saved;
            f = Term::app(f, a?);
        }
        Ok(f)
    }

    fn primary(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Lambda => self.lambda(),
            Tok::LParen => {
                self.bump();
                let saved = self.arg_depth;
                self.arg_depth = 0;
                let t = self.term();
                self.arg_depth = saved;
                let t = t?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(name) => {
                self.bump();
                let sym = Symbol::new(&name);
                let bound = self.scope.contains(&sym);
                if *self.peek() != Tok::LParen {
                    return Ok(if bound {
                        Term::Var(sym)
                    } else {
                        Term::Const(sym)
                    });
                }
                if bound {
                    return self.error(format!(
                        "λ-variable '{name}' cannot take an argument list; use '@'"
                    ));
                }
                if sym.is_asp_variable() {
                    return self.error(format!("ASP variable '{name}' cannot take arguments"));
                }
                self.bump();
                self.arg_depth += 1;
                let mut args = Vec::new();
                let res = (|| -> PResult<()> {
                    loop {
                        args.push(self.app()?);
                        match self.peek() {
                            Tok::Comma => {
                                self.bump();
                            }
                            Tok::RParen => return Ok(()),
                            other => {
                                return self.error(format!("expected ',' or ')', found {other}"))
                            }
                        }
                    }
                })();
                self.arg_depth -= 1;
                res?;
                self.expect(Tok::RParen)?;
                Ok(if self.arg_depth > 0 {
                    Term::Func(sym, args)
                } else {
                    Term::Atom(sym, args)
                })
            }
            other => self.error(format!("expected a term, found {other}")),
        }
    }

    fn type_expr(&mut self) -> PResult<Type> {
        let lhs = self.type_atom()?;
        if *self.peek() == Tok::RArrow {
            self.bump();
            let rhs = self.type_expr()?;
            return Ok(Type::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn type_atom(&mut self) -> PResult<Type> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.type_expr()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) => {
                let mut cs = s.chars();
                match (cs.next().and_then(BaseType::from_letter), cs.next()) {
                    (Some(b), None) => {
                        self.bump();
                        Ok(Type::Base(b))
                    }
                    _ => self.error(format!("unknown base type '{s}'")),
                }
            }
            other => self.error(format!("expected a type, found {other}")),
        }
    }
}

/// Bare unbound lowercase constants in literal position are propositional atoms.
fn literalize(t: Term) -> Term {
    match t {
        Term::Const(s)
            if s
                .as_str()
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_lowercase()) =>
        {
            Term::Atom(s, Vec::new())
        }
        other => other,
    }
}

pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(src)?;
    if *p.peek() == Tok::Eof {
        return p.error("empty input");
    }
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {}", p.peek()));
    }
    Ok(t)
}

pub fn parse_type(src: &str) -> Result<Type, SyntaxError> {
    let mut p = Parser::new(src)?;
    let t = p.type_expr()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {}", p.peek()));
    }
    Ok(t)
}

// Printing precedence levels; a child printed in a context with a higher
// level than its own gets parentheses.
const LVL_TERM: u8 = 0;
const LVL_CONJ: u8 = 1;
const LVL_DISJ: u8 = 2;
const LVL_UNARY: u8 = 3;
const LVL_APP: u8 = 4;
const LVL_PRIMARY: u8 = 5;

fn level(t: &Term) -> u8 {
    match t {
        Term::Abs { .. } | Term::Rule { .. } | Term::Program(_) => LVL_TERM,
        Term::Conj(_) => LVL_CONJ,
        Term::Or(_) => LVL_DISJ,
        Term::CNeg(_) | Term::Naf(_) => LVL_UNARY,
        Term::App(..) => LVL_APP,
        Term::Var(_) | Term::Const(_) | Term::Func(..) | Term::Atom(..) => LVL_PRIMARY,
    }
}

fn write_at(out: &mut String, t: &Term, ctx: u8) {
    if level(t) < ctx {
        out.push('(');
        write_term(out, t);
        out.push(')');
    } else {
        write_term(out, t);
    }
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(s) | Term::Const(s) => out.push_str(s.as_str()),
        Term::Abs { binder, ty, body } => {
            out.push('\\');
            out.push_str(binder.as_str());
            if let Some(ty) = ty {
                out.push(':');
                out.push_str(&ty.to_string());
            }
            out.push('.');
            match body.as_ref() {
                Term::Rule { .. } | Term::Program(_) | Term::Conj(_) | Term::Or(_) => {
                    out.push('(');
                    write_term(out, body);
                    out.push(')');
                }
                _ => write_term(out, body),
            }
        }
        Term::App(f, a) => {
            write_at(out, f, LVL_APP);
            out.push('@');
            write_at(out, a, LVL_PRIMARY);
        }
        Term::Func(s, args) | Term::Atom(s, args) => {
            out.push_str(s.as_str());
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_at(out, a, LVL_APP);
                }
                out.push(')');
            }
        }
        Term::CNeg(x) => {
            out.push('-');
            write_at(out, x, LVL_UNARY);
        }
        Term::Naf(x) => {
            out.push_str("not ");
            write_at(out, x, LVL_UNARY);
        }
        Term::Or(items) => {
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(" or ");
                }
                write_at(out, x, LVL_UNARY);
            }
        }
        Term::Conj(items) => {
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_at(out, x, LVL_DISJ);
            }
        }
        Term::Rule { head, body } => {
            if let Some(h) = head {
                write_at(out, h, LVL_CONJ);
            }
            if let Some(b) = body {
                if head.is_some() {
                    out.push(' ');
                }
                out.push_str("<- ");
                write_at(out, b, LVL_CONJ);
            }
            out.push('.');
        }
        Term::Program(items) => {
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                // `x <- b.` after a non-rule item would read as one rule.
                let glued = i > 0
                    && matches!(x, Term::Rule { head: None, .. })
                    && !matches!(items[i - 1], Term::Rule { .. });
                if glued {
                    out.push('(');
                    write_term(out, x);
                    out.push(')');
                } else if matches!(x, Term::Rule { .. }) {
                    write_term(out, x);
                } else {
                    write_at(out, x, LVL_PRIMARY);
                }
            }
        }
    }
}

/// Canonical text of a term.
pub fn print(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t);
    out
}

pub fn print_type(ty: &Type) -> String {
    ty.to_string()
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}
