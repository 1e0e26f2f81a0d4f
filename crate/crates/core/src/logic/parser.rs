//! Recursive-descent parser for formulas and sequents.
//!
//! Precedence, tightest first: prefix operators, `&` `\` `^`, `|`, `->`
//! (right associative), `<->`. Quantifier bodies extend as far right as
//! possible.

use super::formula::{BinOp, Formula, Goal, Mode, QuantKind, Restriction, Sequent, UnOp};
use crate::error::{Result, TbaError};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Dot,
    Comma,
    Minus,
    Bin(BinOp),
    Turnstile(Mode),
}

struct Lexed {
    toks: Vec<(usize, Tok)>,
    end: usize,
}

fn lex(src: &str) -> Result<Lexed> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    let is_ident = |c: u8| c.is_ascii_alphanumeric() || c == b'_';
    while i < bytes.len() {
        let c = bytes[i];
        let rest = &src[i..];
        let (tok, len) = if c.is_ascii_whitespace() {
            i += 1;
            continue;
        } else if rest.starts_with("|-g") && !bytes.get(i + 3).is_some_and(|&c| is_ident(c)) {
            (Tok::Turnstile(Mode::Global), 3)
        } else if rest.starts_with("|-") {
            (Tok::Turnstile(Mode::Local), 2)
        } else if rest.starts_with("<->") {
            (Tok::Bin(BinOp::Iff), 3)
        } else if rest.starts_with("->") {
            (Tok::Bin(BinOp::Impl), 2)
        } else if c.is_ascii_alphabetic() {
            let len = rest.bytes().take_while(|&c| is_ident(c)).count();
            (Tok::Ident(rest[..len].to_string()), len)
        } else {
            let t = match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'[' => Tok::LBrack,
                b']' => Tok::RBrack,
                b'{' => Tok::LBrace,
                b'}' => Tok::RBrace,
                b'.' => Tok::Dot,
                b',' => Tok::Comma,
                b'-' => Tok::Minus,
                b'&' => Tok::Bin(BinOp::And),
                b'|' => Tok::Bin(BinOp::Or),
                b'\\' => Tok::Bin(BinOp::Diff),
                b'^' => Tok::Bin(BinOp::SymDiff),
                _ => {
                    let ch = rest.chars().next().unwrap_or('?');
                    return Err(syntax(i, format!("unexpected character '{ch}'")));
                }
            };
            (t, 1)
        };
        toks.push((i, tok));
        i += len;
    }
    Ok(Lexed { toks, end: src.len() })
}

fn syntax(pos: usize, msg: impl Into<String>) -> TbaError {
    TbaError::Syntax { pos, msg: msg.into() }
}

fn is_var_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_lowercase())
        && cs.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn is_pred_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

const RESERVED: [&str; 6] = ["forall", "exists", "Forall", "Exists", "open", "closed"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let at = self.offset();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(syntax(at, format!("expected {what}"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => Err(syntax(at, format!("expected {what}"))),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        self.binary(1)
    }

    fn binary(&mut self, min: u8) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Bin(op)) = self.peek() {
            let op = *op;
            if op.level() < min {
                break;
            }
            self.bump();
            let next = if op.right_assoc() { op.level() } else { op.level() + 1 };
            let rhs = self.binary(next)?;
            lhs = Formula::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn restriction(&mut self) -> Result<Restriction> {
        match self.peek() {
            Some(Tok::LBrack) => {
                self.bump();
                let name = self.ident("domain name")?;
                self.expect(Tok::RBrack, "']'")?;
                Ok(match name.as_str() {
                    "open" => Restriction::Open,
                    "closed" => Restriction::Closed,
                    _ => Restriction::Domain(name),
                })
            }
            Some(Tok::LBrace) => {
                self.bump();
                let name = self.ident("domain function name")?;
                self.expect(Tok::RBrace, "'}'")?;
                Ok(Restriction::DomainFn(name))
            }
            _ => Ok(Restriction::None),
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Minus) => Ok(Formula::un(UnOp::CNot, self.unary()?)),
            Some(Tok::LParen) => {
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::Ident(s)) => self.ident_form(s, at),
            Some(_) => Err(syntax(at, "expected a formula")),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }

    fn ident_form(&mut self, s: String, at: usize) -> Result<Formula> {
        let followed_by_paren = self.peek() == Some(&Tok::LParen);
        match s.as_str() {
            "T" if !followed_by_paren => return Ok(Formula::Top),
            "F" if !followed_by_paren => return Ok(Formula::Bot),
            "forall" | "exists" | "Forall" | "Exists" => {
                let kind = if s.eq_ignore_ascii_case("forall") { QuantKind::Forall } else { QuantKind::Exists };
                let restriction = self.restriction()?;
                let var_at = self.offset();
                let var = self.ident("bound variable")?;
                if !is_var_name(&var) || UnOp::from_keyword(&var).is_some() || RESERVED.contains(&var.as_str()) {
                    return Err(syntax(var_at, format!("'{var}' cannot be bound")));
                }
                self.expect(Tok::Dot, "'.'")?;
                let body = Box::new(self.formula()?);
                let individual = s.starts_with(char::is_uppercase);
                return Ok(if individual {
                    Formula::IndQuant { kind, restriction, var, body }
                } else {
                    Formula::Quant { kind, restriction, var, body }
                });
            }
            _ => {}
        }
        if let Some(op) = UnOp::from_keyword(&s) {
            return Ok(Formula::un(op, self.unary()?));
        }
        if is_pred_name(&s) && followed_by_paren {
            self.bump();
            let arg = self.ident("individual variable")?;
            self.expect(Tok::RParen, "')'")?;
            return Ok(Formula::Pred(s, arg));
        }
        if is_var_name(&s) && !RESERVED.contains(&s.as_str()) {
            return Ok(Formula::Var(s));
        }
        Err(syntax(at, format!("unexpected identifier '{s}'")))
    }

    fn list(&mut self) -> Result<Vec<Formula>> {
        let mut out = Vec::new();
        if matches!(self.peek(), None | Some(Tok::Turnstile(_))) {
            return Ok(out);
        }
        loop {
            out.push(self.formula()?);
            if self.peek() == Some(&Tok::Comma) {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(syntax(self.offset(), "unexpected trailing input")),
        }
    }
}

fn parser(src: &str) -> Result<Parser> {
    let Lexed { toks, end } = lex(src)?;
    Ok(Parser { toks, pos: 0, end })
}

pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut p = parser(src)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses a sequent, or a bare formula as a goal.
pub fn parse(src: &str) -> Result<Goal> {
    let mut p = parser(src)?;
    let has_turnstile = p.toks.iter().any(|(_, t)| matches!(t, Tok::Turnstile(_)));
    if !has_turnstile {
        let f = p.formula()?;
        p.finish()?;
        return Ok(Goal::Formula(f));
    }
    let premises = p.list()?;
    let at = p.offset();
    let mode = match p.bump() {
        Some(Tok::Turnstile(m)) => m,
        _ => return Err(syntax(at, "expected ',' or '|-'")),
    };
    let conclusions = p.list()?;
    p.finish()?;
    Ok(Goal::Sequent(Sequent::new(premises, conclusions, mode)))
}

pub fn parse_sequent(src: &str) -> Result<Sequent> {
    parse(src).map(Goal::into_sequent)
}
