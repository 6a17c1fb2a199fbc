use std::collections::BTreeSet;

use super::fo2::{Fo2, Var};
use super::guard::{Cmp, Constraint, Guard, Subject};
use super::tl::Tl;
use super::word::{Alphabet, Word};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Bang,
    Amp,
    Pipe,
    Hash,
    Plus,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Caret,
    Dot,
    Arrow,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '*'
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, column);
        let mut push = |tok: Tok| out.push(Token { tok, line: tl, column: tc });
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let (tok, width) = match two.as_str() {
            "<=" => (Some(Tok::Le), 2),
            ">=" => (Some(Tok::Ge), 2),
            "->" => (Some(Tok::Arrow), 2),
            "&&" => (Some(Tok::Amp), 2),
            "||" => (Some(Tok::Pipe), 2),
            _ => (None, 0),
        };
        if let Some(tok) = tok {
            push(tok);
            i += width;
            column += width;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '!' | '¬' => Some(Tok::Bang),
            '&' | '∧' => Some(Tok::Amp),
            '|' | '∨' => Some(Tok::Pipe),
            '#' => Some(Tok::Hash),
            '+' => Some(Tok::Plus),
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            '=' => Some(Tok::Eq),
            '^' => Some(Tok::Caret),
            '.' => Some(Tok::Dot),
            '→' => Some(Tok::Arrow),
            '≤' => Some(Tok::Le),
            '≥' => Some(Tok::Ge),
            '∃' => Some(Tok::Ident("exists".into())),
            '∀' => Some(Tok::Ident("forall".into())),
            _ => None,
        };
        if let Some(tok) = single {
            push(tok);
            i += 1;
            column += 1;
            continue;
        }
        if c == '"' {
            let mut j = i + 1;
            while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                j += 1;
            }
            if j >= chars.len() || chars[j] != '"' {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: "unterminated string".into(),
                });
            }
            push(Tok::Str(chars[i + 1..j].iter().collect()));
            column += j + 1 - i;
            i = j + 1;
            continue;
        }
        if is_ident_char(c) {
            let mut j = i;
            while j < chars.len() && is_ident_char(chars[j]) {
                j += 1;
            }
            push(Tok::Ident(chars[i..j].iter().collect()));
            column += j - i;
            i = j;
            continue;
        }
        return Err(Error::Syntax {
            line,
            column,
            message: format!("unexpected character `{c}`"),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

const TL_KEYWORDS: &[&str] = &["true", "false", "X", "Y", "F", "P", "G", "H", "U", "S"];
const FO2_KEYWORDS: &[&str] = &[
    "true", "false", "exists", "forall", "suc", "th", "fac", "facth", "x", "y",
];

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    alphabet: Option<&'a Alphabet>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, alphabet: Option<&'a Alphabet>) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            alphabet,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn nat(&mut self) -> Result<u64> {
        match self.peek().clone() {
            Tok::Ident(s) if s.chars().all(|c| c.is_ascii_digit()) => {
                self.bump();
                s.parse::<u64>().or_else(|_| self.error("number too large"))
            }
            t => self.error(format!("expected a number, found {}", describe(&t))),
        }
    }

    fn letter(&self, name: &str) -> Result<String> {
        if let Some(a) = self.alphabet {
            if !a.contains(name) {
                return Err(Error::UnknownLetter(name.to_string()));
            }
        }
        Ok(name.to_string())
    }

    fn factor(&self, text: &str) -> Result<Vec<String>> {
        let word = match self.alphabet {
            Some(a) => Word::parse(text, a)?,
            None if text.contains(char::is_whitespace) => {
                Word::new(text.split_whitespace().map(String::from))
            }
            None => Word::from_chars(text),
        };
        if word.is_empty() {
            return Err(Error::MalformedGuard("empty factor".into()));
        }
        Ok(word.letters().to_vec())
    }

    // ---- temporal logic ----

    fn tl_until(&mut self) -> Result<Tl> {
        let left = self.tl_or()?;
        if self.is_ident("U") {
            self.bump();
            let right = self.tl_until()?;
            return Ok(Tl::until(left, right));
        }
        if self.is_ident("S") {
            self.bump();
            let right = self.tl_until()?;
            return Ok(Tl::since(left, right));
        }
        Ok(left)
    }

    fn tl_or(&mut self) -> Result<Tl> {
        let left = self.tl_and()?;
        if *self.peek() == Tok::Pipe {
            self.bump();
            let right = self.tl_or()?;
            return Ok(Tl::or(left, right));
        }
        Ok(left)
    }

    fn tl_and(&mut self) -> Result<Tl> {
        let left = self.tl_unary()?;
        if *self.peek() == Tok::Amp {
            self.bump();
            let right = self.tl_and()?;
            return Ok(Tl::and(left, right));
        }
        Ok(left)
    }

    fn exponent(&mut self) -> Result<u32> {
        if *self.peek() == Tok::Caret {
            self.bump();
            let n = self.nat()?;
            if n == 0 || n > u32::MAX as u64 {
                return self.error("exponent must be at least 1");
            }
            Ok(n as u32)
        } else {
            Ok(1)
        }
    }

    fn tl_unary(&mut self) -> Result<Tl> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Tl::not(self.tl_unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.tl_until()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(s) => match s.as_str() {
                "true" => {
                    self.bump();
                    Ok(Tl::tt())
                }
                "false" => {
                    self.bump();
                    Ok(Tl::ff())
                }
                "X" => {
                    self.bump();
                    let n = self.exponent()?;
                    Ok(Tl::next_n(n, self.tl_unary()?))
                }
                "Y" => {
                    self.bump();
                    let n = self.exponent()?;
                    Ok(Tl::prev_n(n, self.tl_unary()?))
                }
                "F" | "P" => {
                    self.bump();
                    let guard = if *self.peek() == Tok::LBrack {
                        self.bump();
                        let g = self.g_or()?;
                        self.expect(Tok::RBrack, "`]`")?;
                        Some(g)
                    } else {
                        None
                    };
                    let body = self.tl_unary()?;
                    Ok(match (s.as_str(), guard) {
                        ("F", None) => Tl::future(body),
                        ("F", Some(g)) => Tl::future_g(g, body),
                        (_, None) => Tl::past(body),
                        (_, Some(g)) => Tl::past_g(g, body),
                    })
                }
                "G" => {
                    self.bump();
                    Ok(Tl::globally(self.tl_unary()?))
                }
                "H" => {
                    self.bump();
                    Ok(Tl::historically(self.tl_unary()?))
                }
                "U" | "S" => self.error(format!("unexpected `{s}`")),
                _ => {
                    self.bump();
                    Ok(Tl::letter(&self.letter(&s)?))
                }
            },
            t => self.error(format!("expected a formula, found {}", describe(&t))),
        }
    }

    // ---- guards ----

    fn g_or(&mut self) -> Result<Guard> {
        let left = self.g_and()?;
        if *self.peek() == Tok::Pipe {
            self.bump();
            return Ok(Guard::or(left, self.g_or()?));
        }
        Ok(left)
    }

    fn g_and(&mut self) -> Result<Guard> {
        let left = self.g_unary()?;
        if *self.peek() == Tok::Amp {
            self.bump();
            return Ok(Guard::and(left, self.g_and()?));
        }
        Ok(left)
    }

    fn g_unary(&mut self) -> Result<Guard> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                if let Tok::Str(s) = self.peek().clone() {
                    self.bump();
                    let u = self.factor(&s)?;
                    return Ok(Guard::Atom(Constraint::factor(u, Cmp::Eq, 0)));
                }
                Ok(Guard::negate(self.g_unary()?))
            }
            Tok::Plus => {
                self.bump();
                match self.bump() {
                    Tok::Str(s) => {
                        let u = self.factor(&s)?;
                        Ok(Guard::Atom(Constraint::factor(u, Cmp::Gt, 0)))
                    }
                    _ => Err(Error::MalformedGuard("`+` must be followed by a quoted factor".into())),
                }
            }
            Tok::LParen => {
                self.bump();
                let g = self.g_or()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(g)
            }
            Tok::Hash => {
                self.bump();
                let subject = match self.bump() {
                    Tok::Str(s) => Subject::Factor(self.factor(&s)?),
                    Tok::LBrace => {
                        let mut set = BTreeSet::new();
                        if *self.peek() != Tok::RBrace {
                            loop {
                                match self.bump() {
                                    Tok::Ident(l) => {
                                        set.insert(self.letter(&l)?);
                                    }
                                    _ => {
                                        return Err(Error::MalformedGuard(
                                            "letter set must list letters".into(),
                                        ))
                                    }
                                }
                                if *self.peek() == Tok::Comma {
                                    self.bump();
                                } else {
                                    break;
                                }
                            }
                        }
                        if self.bump() != Tok::RBrace {
                            return Err(Error::MalformedGuard("unterminated letter set".into()));
                        }
                        Subject::Letters(set)
                    }
                    _ => {
                        return Err(Error::MalformedGuard(
                            "`#` must be followed by a letter set or a quoted factor".into(),
                        ))
                    }
                };
                let cmp = match self.bump() {
                    Tok::Lt => Cmp::Lt,
                    Tok::Le => Cmp::Le,
                    Tok::Gt => Cmp::Gt,
                    Tok::Ge => Cmp::Ge,
                    Tok::Eq => Cmp::Eq,
                    _ => return Err(Error::MalformedGuard("expected a comparator".into())),
                };
                let bound = self
                    .nat()
                    .map_err(|_| Error::MalformedGuard("expected a bound".into()))?;
                Ok(Guard::Atom(Constraint {
                    subject,
                    cmp,
                    bound,
                }))
            }
            t => Err(Error::MalformedGuard(format!(
                "unexpected {} in guard",
                describe(&t)
            ))),
        }
    }

    // ---- two-variable first-order logic ----

    fn var(&mut self) -> Result<Var> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "x" => {
                self.bump();
                Ok(Var::X)
            }
            Tok::Ident(s) if s == "y" => {
                self.bump();
                Ok(Var::Y)
            }
            t => self.error(format!("expected variable x or y, found {}", describe(&t))),
        }
    }

    fn var_pair(&mut self) -> Result<(Var, Var)> {
        self.expect(Tok::LParen, "`(`")?;
        let a = self.var()?;
        self.expect(Tok::Comma, "`,`")?;
        let b = self.var()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok((a, b))
    }

    fn fo_formula(&mut self) -> Result<Fo2> {
        if self.is_ident("exists") || self.is_ident("forall") {
            return self.fo_quant();
        }
        let left = self.fo_or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.fo_formula()?;
            return Ok(Fo2::implies(left, right));
        }
        Ok(left)
    }

    fn fo_quant(&mut self) -> Result<Fo2> {
        let exists = self.is_ident("exists");
        self.bump();
        let v = self.var()?;
        if *self.peek() == Tok::Dot {
            self.bump();
        }
        let body = self.fo_formula()?;
        Ok(if exists {
            Fo2::exists(v, body)
        } else {
            Fo2::forall(v, body)
        })
    }

    fn fo_or(&mut self) -> Result<Fo2> {
        let left = self.fo_and()?;
        if *self.peek() == Tok::Pipe {
            self.bump();
            let right = if self.is_ident("exists") || self.is_ident("forall") {
                self.fo_quant()?
            } else {
                self.fo_or()?
            };
            return Ok(Fo2::or(left, right));
        }
        Ok(left)
    }

    fn fo_and(&mut self) -> Result<Fo2> {
        let left = self.fo_unary()?;
        if *self.peek() == Tok::Amp {
            self.bump();
            let right = if self.is_ident("exists") || self.is_ident("forall") {
                self.fo_quant()?
            } else {
                self.fo_and()?
            };
            return Ok(Fo2::and(left, right));
        }
        Ok(left)
    }

    fn fo_unary(&mut self) -> Result<Fo2> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                if self.is_ident("exists") || self.is_ident("forall") {
                    return Ok(Fo2::not(self.fo_quant()?));
                }
                Ok(Fo2::not(self.fo_unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.fo_formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(s) => self.fo_atom(&s),
            t => self.error(format!("expected a formula, found {}", describe(&t))),
        }
    }

    fn fo_atom(&mut self, s: &str) -> Result<Fo2> {
        match s {
            "true" => {
                self.bump();
                Ok(Fo2::tt())
            }
            "false" => {
                self.bump();
                Ok(Fo2::ff())
            }
            "exists" | "forall" => self.fo_quant(),
            "x" | "y" => {
                let a = self.var()?;
                let op = self.bump();
                let b = self.var()?;
                match op {
                    Tok::Lt => Ok(Fo2::less(a, b)),
                    Tok::Le => Ok(Fo2::less_eq(a, b)),
                    Tok::Gt => Ok(Fo2::less(b, a)),
                    Tok::Ge => Ok(Fo2::less_eq(b, a)),
                    Tok::Eq => Ok(Fo2::equal(a, b)),
                    _ => self.error("expected a comparison between variables"),
                }
            }
            "suc" => {
                self.bump();
                let (a, b) = self.var_pair()?;
                Ok(Fo2::suc(a, b))
            }
            "th" if *self.peek_at(1) == Tok::LParen => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let l = match self.bump() {
                    Tok::Ident(l) => self.letter(&l)?,
                    _ => return self.error("expected a letter"),
                };
                self.expect(Tok::Comma, "`,`")?;
                let k = self.nat()?;
                self.expect(Tok::RParen, "`)`")?;
                let (a, b) = self.var_pair()?;
                Ok(Fo2::threshold(&l, k, a, b))
            }
            "fac" | "facth" if *self.peek_at(1) == Tok::LParen => {
                let counted = s == "facth";
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let u = match self.bump() {
                    Tok::Str(u) => self.factor(&u)?,
                    _ => return self.error("expected a quoted factor"),
                };
                let k = if counted {
                    self.expect(Tok::Comma, "`,`")?;
                    Some(self.nat()?)
                } else {
                    None
                };
                self.expect(Tok::RParen, "`)`")?;
                let (a, b) = self.var_pair()?;
                Ok(match k {
                    Some(k) => Fo2::factor_threshold(&u, k, a, b),
                    None => Fo2::between_factor(&u, a, b),
                })
            }
            _ => {
                if FO2_KEYWORDS.contains(&s) {
                    return self.error(format!("unexpected keyword `{s}`"));
                }
                self.bump();
                let l = self.letter(s)?;
                self.expect(Tok::LParen, "`(`")?;
                let a = self.var()?;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    let b = self.var()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Fo2::between(&l, a, b))
                } else {
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Fo2::letter(&l, a))
                }
            }
        }
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(format!("unexpected {}", describe(self.peek())))
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::Eof => "end of input".into(),
        other => format!("{other:?}"),
    }
}

/// Parses a temporal-logic formula. Letters must belong to `alphabet`.
pub fn parse_tl(text: &str, alphabet: &Alphabet) -> Result<Tl> {
    for l in alphabet.letters() {
        if TL_KEYWORDS.contains(&l.as_str()) {
            return Err(Error::InvalidAlphabet(format!("letter `{l}` is a keyword")));
        }
    }
    let mut p = Parser::new(text, Some(alphabet))?;
    let f = p.tl_until()?;
    p.finish()?;
    Ok(f)
}

/// Parses a guard expression such as `#{a}=2 & !"bb"`.
pub fn parse_guard(text: &str, alphabet: &Alphabet) -> Result<Guard> {
    let mut p = Parser::new(text, Some(alphabet))?;
    let g = p.g_or()?;
    p.finish()?;
    Ok(g)
}

/// Parses a two-variable first-order formula. Letters are checked against
/// `alphabet` when one is given.
pub fn parse_fo2(text: &str, alphabet: Option<&Alphabet>) -> Result<Fo2> {
    let mut p = Parser::new(text, alphabet)?;
    let f = p.fo_formula()?;
    p.finish()?;
    Ok(f)
}
