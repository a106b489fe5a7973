//! Recursive-descent parser for the concrete term syntax.

use thiserror::Error;

use super::{NTerm, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lam,
    Dot,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Arrow,
    Bang,
    Der,
    Hole,
    Ident(String),
    Eof,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (tok, width) = match c {
            '\\' | 'λ' => (Tok::Lam, 1),
            '.' => (Tok::Dot, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '!' => (Tok::Bang, 1),
            '[' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j] == ' ' {
                    j += 1;
                }
                if j < chars.len() && chars[j] == ']' {
                    (Tok::Hole, j + 1 - i)
                } else {
                    (Tok::LBrack, 1)
                }
            }
            ']' => (Tok::RBrack, 1),
            '<' if chars.get(i + 1) == Some(&'-') => (Tok::Arrow, 2),
            '←' => (Tok::Arrow, 1),
            c if is_ident_start(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = if word == "der" { Tok::Der } else { Tok::Ident(word) };
                (tok, j - i)
            }
            other => {
                return Err(ParseError { line, col, msg: format!("unexpected character {other:?}") });
            }
        };
        out.push((tok, line, col));
        i += width;
        col += width;
    }
    out.push((Tok::Eof, line, col));
    Ok(out)
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (_, line, col) = self.toks[self.pos];
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn term(&mut self) -> Result<NTerm, ParseError> {
        if *self.peek() == Tok::Lam {
            return self.lam();
        }
        let mut acc = self.prefix()?;
        loop {
            match self.peek() {
                Tok::Ident(_) | Tok::LParen | Tok::Bang | Tok::Der | Tok::Hole => {
                    let arg = self.prefix()?;
                    acc = NTerm::App { fun: Box::new(acc), arg: Box::new(arg) };
                }
                Tok::Lam => {
                    let arg = self.lam()?;
                    return Ok(NTerm::App { fun: Box::new(acc), arg: Box::new(arg) });
                }
                _ => return Ok(acc),
            }
        }
    }

    fn lam(&mut self) -> Result<NTerm, ParseError> {
        self.expect(Tok::Lam, "'\\'")?;
        let x = self.ident()?;
        self.expect(Tok::Dot, "'.'")?;
        let body = self.term()?;
        Ok(NTerm::Abs { x, body: Box::new(body) })
    }

    fn prefix(&mut self) -> Result<NTerm, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(NTerm::Bang { t: Box::new(self.prefix()?) })
            }
            Tok::Der => {
                self.bump();
                Ok(NTerm::Der { t: Box::new(self.prefix()?) })
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<NTerm, ParseError> {
        let mut acc = self.atom()?;
        while *self.peek() == Tok::LBrack {
            self.bump();
            let x = self.ident()?;
            self.expect(Tok::Arrow, "'<-'")?;
            let arg = self.term()?;
            self.expect(Tok::RBrack, "']'")?;
            acc = NTerm::Sub { body: Box::new(acc), x, arg: Box::new(arg) };
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<NTerm, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(NTerm::Var { x })
            }
            Tok::Hole => {
                self.bump();
                Ok(NTerm::Hole)
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => self.err("expected a term"),
        }
    }
}

/// Parse a possibly holed term.
pub(crate) fn parse_nterm(src: &str) -> Result<NTerm, ParseError> {
    let mut lx = Lexer { toks: lex(src)?, pos: 0 };
    let t = lx.term()?;
    if *lx.peek() != Tok::Eof {
        return lx.err("unexpected trailing input");
    }
    Ok(t)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let n = parse_nterm(src)?;
    n.to_term()
        .ok_or(ParseError { line: 1, col: 1, msg: "hole not allowed in a term".into() })
}
