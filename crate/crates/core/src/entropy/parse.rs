//! Text form of entropy expressions, statements, and inequality files.
//!
//! Grammar, one statement per line:
//!   statement := expr ('<=' | '>=' | '=') expr
//!   expr      := ['-'] term (('+' | '-') term)*
//!   term      := [rational '*'] atom | '0'
//!   atom      := 'H(' names ['|' names] ')' | 'I(' names ';' names ['|' names] ')'
//!   names     := name (',' name)*
//! `#` starts a comment, `given:` prefixes an equality constraint. The
//! ground set is the union of variable names in order of first appearance,
//! unless a caller supplies one explicitly.

use super::expr::{EntropyExpression, GroundSet, MAX_VARIABLES};
use crate::rational::{parse_rat, Rat};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, offset {position}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, position: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            position,
            message: message.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// A parsed statement, normalized to `expr (sense) 0` by moving the right
/// side over.
#[derive(Clone, Debug, PartialEq)]
pub struct Statement {
    pub expr: EntropyExpression,
    pub sense: Sense,
}

/// A whole inequality file: one target plus any number of constraints, all
/// over a shared ground set.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityFile {
    pub ground: GroundSet,
    /// Target in `>= 0` orientation.
    pub target: EntropyExpression,
    /// Constraints, each meaning `expr = 0`.
    pub constraints: Vec<EntropyExpression>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rat),
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
    Bar,
    Semi,
    Comma,
    Le,
    Ge,
    Eq,
}

fn lex(text: &str, line: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\r' => {
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, start));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, start));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, start));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, start));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, start));
                i += 1;
            }
            '|' => {
                toks.push((Tok::Bar, start));
                i += 1;
            }
            ';' => {
                toks.push((Tok::Semi, start));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, start));
                i += 1;
            }
            '=' => {
                toks.push((Tok::Eq, start));
                i += 1;
            }
            '<' | '>' => {
                if bytes.get(i + 1) != Some(&b'=') {
                    return Err(ParseError::new(line, start, format!("expected '{c}='")));
                }
                toks.push((if c == '<' { Tok::Le } else { Tok::Ge }, start));
                i += 2;
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if bytes.get(j) == Some(&b'/') {
                    j += 1;
                    if !bytes.get(j).is_some_and(u8::is_ascii_digit) {
                        return Err(ParseError::new(line, j, "expected digits after '/'"));
                    }
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                let raw = &text[i..j];
                let value = parse_rat(raw)
                    .map_err(|m| ParseError::new(line, start, m))?;
                toks.push((Tok::Num(value), start));
                i = j;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len()
                    && ((bytes[j] as char).is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                toks.push((Tok::Ident(text[i..j].to_string()), start));
                i = j;
            }
            _ => {
                return Err(ParseError::new(
                    line,
                    start,
                    format!("unexpected character '{c}'"),
                ));
            }
        }
    }
    Ok(toks)
}

type Names = Vec<(String, usize)>;

#[derive(Debug)]
enum RawAtom {
    Entropy { vars: Names, cond: Names },
    Mutual { a: Names, b: Names, cond: Names },
}

struct RawTerm {
    coeff: Rat,
    /// `None` for a literal `0`, the only bare constant the grammar admits.
    atom: Option<RawAtom>,
}

type RawExpr = Vec<RawTerm>;

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str, line: usize) -> Result<Self, ParseError> {
        Ok(Self {
            toks: lex(text, line)?,
            pos: 0,
            line,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.here(), message)
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn names(&mut self) -> Result<Names, ParseError> {
        let mut out = Vec::new();
        loop {
            let at = self.here();
            match self.bump() {
                Some(Tok::Ident(name)) => out.push((name, at)),
                _ => return Err(ParseError::new(self.line, at, "expected variable name")),
            }
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }

    fn atom(&mut self) -> Result<RawAtom, ParseError> {
        let at = self.here();
        let head = match self.bump() {
            Some(Tok::Ident(s)) => s,
            _ => return Err(ParseError::new(self.line, at, "expected H(...) or I(...)")),
        };
        match head.as_str() {
            "H" => {
                self.expect(&Tok::LParen, "'('")?;
                let vars = self.names()?;
                let cond = if self.peek() == Some(&Tok::Bar) {
                    self.pos += 1;
                    self.names()?
                } else {
                    Vec::new()
                };
                self.expect(&Tok::RParen, "')'")?;
                Ok(RawAtom::Entropy { vars, cond })
            }
            "I" => {
                self.expect(&Tok::LParen, "'('")?;
                let a = self.names()?;
                self.expect(&Tok::Semi, "';'")?;
                let b = self.names()?;
                let cond = if self.peek() == Some(&Tok::Bar) {
                    self.pos += 1;
                    self.names()?
                } else {
                    Vec::new()
                };
                self.expect(&Tok::RParen, "')'")?;
                Ok(RawAtom::Mutual { a, b, cond })
            }
            _ => Err(ParseError::new(self.line, at, "expected H(...) or I(...)")),
        }
    }

    fn term(&mut self, sign: i64) -> Result<RawTerm, ParseError> {
        let mut coeff = Rat::one();
        if let Some(Tok::Num(_)) = self.peek() {
            let at = self.here();
            if let Some(Tok::Num(v)) = self.bump() {
                coeff = v;
            }
            if self.peek() != Some(&Tok::Star) {
                if coeff.is_zero() {
                    return Ok(RawTerm { coeff, atom: None });
                }
                return Err(ParseError::new(
                    self.line,
                    at,
                    "expected '*' after coefficient (only 0 may stand alone)",
                ));
            }
            self.pos += 1;
        }
        if sign < 0 {
            coeff = -coeff;
        }
        Ok(RawTerm {
            coeff,
            atom: Some(self.atom()?),
        })
    }

    fn expr(&mut self) -> Result<RawExpr, ParseError> {
        let mut sign = 1i64;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            sign = -1;
        }
        let mut terms = vec![self.term(sign)?];
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    terms.push(self.term(1)?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    terms.push(self.term(-1)?);
                }
                _ => return Ok(terms),
            }
        }
    }

    fn sense(&mut self) -> Result<Sense, ParseError> {
        match self.bump() {
            Some(Tok::Le) => Ok(Sense::Le),
            Some(Tok::Ge) => Ok(Sense::Ge),
            Some(Tok::Eq) => Ok(Sense::Eq),
            _ => Err(self.err("expected '<=', '>=' or '='")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }
}

fn atom_names(atom: &RawAtom) -> impl Iterator<Item = &(String, usize)> {
    let (first, second, cond): (&Names, Option<&Names>, &Names) = match atom {
        RawAtom::Entropy { vars, cond } => (vars, None, cond),
        RawAtom::Mutual { a, b, cond } => (a, Some(b), cond),
    };
    first
        .iter()
        .chain(second.into_iter().flatten())
        .chain(cond.iter())
}

/// Ground set from first appearance over one or more raw expressions.
fn collect_ground(line: usize, exprs: &[&RawExpr]) -> Result<GroundSet, ParseError> {
    let mut names: Vec<String> = Vec::new();
    for expr in exprs {
        for term in expr.iter() {
            let Some(atom) = &term.atom else { continue };
            for (name, at) in atom_names(atom) {
                if !names.contains(name) {
                    if names.len() == MAX_VARIABLES {
                        return Err(ParseError::new(
                            line,
                            *at,
                            format!("more than {MAX_VARIABLES} distinct variables"),
                        ));
                    }
                    names.push(name.clone());
                }
            }
        }
    }
    GroundSet::new(names).map_err(|e| ParseError::new(line, 0, e.to_string()))
}

fn lower(
    line: usize,
    ground: &GroundSet,
    raw: &RawExpr,
) -> Result<EntropyExpression, ParseError> {
    fn strs(names: &Names) -> Vec<&str> {
        names.iter().map(|(n, _)| n.as_str()).collect()
    }
    let mut out = EntropyExpression::zero(ground);
    for term in raw {
        let Some(atom) = &term.atom else { continue };
        let find_pos = |names: &Names| names.first().map_or(0, |(_, p)| *p);
        let built = match atom {
            RawAtom::Entropy { vars, cond } => {
                EntropyExpression::conditional(ground, &strs(vars), &strs(cond))
                    .map_err(|e| ParseError::new(line, find_pos(vars), e.to_string()))
            }
            RawAtom::Mutual { a, b, cond } => {
                EntropyExpression::mutual(ground, &strs(a), &strs(b), &strs(cond))
                    .map_err(|e| ParseError::new(line, find_pos(a), e.to_string()))
            }
        }?;
        out.add_scaled(&built, &term.coeff).expect("same ground");
    }
    Ok(out)
}

/// Parses a single expression, inferring the ground set.
pub fn parse_expression(text: &str) -> Result<EntropyExpression, ParseError> {
    let mut p = Parser::new(text, 1)?;
    let raw = p.expr()?;
    p.finish()?;
    let ground = collect_ground(1, &[&raw])?;
    lower(1, &ground, &raw)
}

/// Parses a single expression against a declared ground set; unknown
/// variables are rejected.
pub fn parse_expression_with(
    text: &str,
    ground: &GroundSet,
) -> Result<EntropyExpression, ParseError> {
    let mut p = Parser::new(text, 1)?;
    let raw = p.expr()?;
    p.finish()?;
    lower(1, ground, &raw)
}

fn raw_statement(text: &str, line: usize) -> Result<(RawExpr, Sense, RawExpr), ParseError> {
    let mut p = Parser::new(text, line)?;
    let lhs = p.expr()?;
    let sense = p.sense()?;
    let rhs = p.expr()?;
    p.finish()?;
    Ok((lhs, sense, rhs))
}

/// Parses `lhs (<=|>=|=) rhs` into a statement over an inferred ground set,
/// with the right side moved to the left.
pub fn parse_statement(text: &str) -> Result<Statement, ParseError> {
    let (lhs, sense, rhs) = raw_statement(text, 1)?;
    let ground = collect_ground(1, &[&lhs, &rhs])?;
    let mut expr = lower(1, &ground, &lhs)?;
    expr.add_scaled(&lower(1, &ground, &rhs)?, &(-Rat::one()))
        .expect("same ground");
    Ok(Statement { expr, sense })
}

/// Parses a whole file: comments stripped, one target statement required,
/// `given:` lines become equality constraints. All lines share one ground
/// set collected in first-appearance order.
pub fn parse_file(text: &str) -> Result<InequalityFile, ParseError> {
    struct Line {
        no: usize,
        given: bool,
        lhs: RawExpr,
        sense: Sense,
        rhs: RawExpr,
    }
    let mut lines = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let no = idx + 1;
        let body = raw_line.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (given, stmt_text) = match trimmed.strip_prefix("given:") {
            Some(rest) => (true, rest),
            None => (false, trimmed),
        };
        let (lhs, sense, rhs) = raw_statement(stmt_text, no)?;
        if given && sense != Sense::Eq {
            return Err(ParseError::new(no, 0, "constraints must use '='"));
        }
        if !given && sense == Sense::Eq {
            return Err(ParseError::new(
                no,
                0,
                "target must be an inequality; use 'given:' for constraints",
            ));
        }
        lines.push(Line {
            no,
            given,
            lhs,
            sense,
            rhs,
        });
    }
    let targets: Vec<&Line> = lines.iter().filter(|l| !l.given).collect();
    match targets.len() {
        0 => {
            return Err(ParseError::new(
                text.lines().count().max(1),
                0,
                "no target inequality in file",
            ))
        }
        1 => {}
        _ => {
            return Err(ParseError::new(
                targets[1].no,
                0,
                "more than one target inequality",
            ))
        }
    }
    let raws: Vec<&RawExpr> = lines.iter().flat_map(|l| [&l.lhs, &l.rhs]).collect();
    let first_line = lines.first().map_or(1, |l| l.no);
    let ground = collect_ground(first_line, &raws)?;

    let mut target = None;
    let mut constraints = Vec::new();
    for l in &lines {
        let mut expr = lower(l.no, &ground, &l.lhs)?;
        expr.add_scaled(&lower(l.no, &ground, &l.rhs)?, &(-Rat::one()))
            .expect("same ground");
        if l.given {
            constraints.push(expr);
        } else {
            target = Some(match l.sense {
                Sense::Ge => expr,
                Sense::Le => expr.negated(),
                Sense::Eq => unreachable!("rejected above"),
            });
        }
    }
    Ok(InequalityFile {
        ground,
        target: target.expect("exactly one target"),
        constraints,
    })
}
