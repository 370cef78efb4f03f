//! Recursive-descent parser for the Prolog-like surface syntax.
//!
//! ```text
//! program  := (decl | rule)*
//! decl     := "#pred" NAME "/" NUM ("," NAME "/" NUM)* "."
//!           | "#func" NAME "/" NUM ("," NAME "/" NUM)* "."
//!           | "#const" NAME ("," NAME)* "."
//! rule     := atom (":-" formula)? "."
//! formula  := conj ("|" conj)*
//! conj     := unary (("&" | ",") unary)*
//! unary    := ("~" | "not") unary | quant | primary
//! quant    := ("forall" | "exists") VAR ("," VAR)* "." formula
//! primary  := "true" | "false" | atom | "(" formula ")"
//! ```
//!
//! Identifiers starting with an uppercase letter or `_` are variables.
//! `%` starts a comment running to the end of the line.

use super::{Atom, Formula, ParseError, ParseErrorKind, Program, Rule, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Var(String),
    Num(usize),
    LParen,
    RParen,
    Comma,
    Dot,
    Neck,
    Tilde,
    Amp,
    Bar,
    Slash,
    Directive(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) | Tok::Var(n) => format!("`{n}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Directive(d) => format!("`#{d}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Neck => "`:-`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(source: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = source.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    let err = |line, column, msg: String| ParseError {
        line,
        column,
        kind: ParseErrorKind::Syntax(msg),
    };

    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let tok = match c {
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
                continue;
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            ',' => {
                bump(&mut chars);
                Tok::Comma
            }
            '.' => {
                bump(&mut chars);
                Tok::Dot
            }
            '~' | '¬' => {
                bump(&mut chars);
                Tok::Tilde
            }
            '&' => {
                bump(&mut chars);
                Tok::Amp
            }
            '|' => {
                bump(&mut chars);
                Tok::Bar
            }
            '/' => {
                bump(&mut chars);
                Tok::Slash
            }
            ':' => {
                bump(&mut chars);
                if chars.peek() == Some(&'-') {
                    bump(&mut chars);
                    Tok::Neck
                } else {
                    return Err(err(start_line, start_col, "expected `:-`".into()));
                }
            }
            '#' => {
                bump(&mut chars);
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if !c.is_alphanumeric() && c != '_' {
                        break;
                    }
                    name.push(c);
                    bump(&mut chars);
                }
                Tok::Directive(name)
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&c) = chars.peek() {
                    if !c.is_ascii_digit() {
                        break;
                    }
                    digits.push(c);
                    bump(&mut chars);
                }
                Tok::Num(digits.parse().map_err(|_| {
                    err(start_line, start_col, format!("number `{digits}` too large"))
                })?)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if !c.is_alphanumeric() && c != '_' {
                        break;
                    }
                    ident.push(c);
                    bump(&mut chars);
                }
                if c.is_uppercase() || c == '_' {
                    Tok::Var(ident)
                } else {
                    Tok::Name(ident)
                }
            }
            other => {
                return Err(err(
                    start_line,
                    start_col,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(source: &str) -> PResult<Self> {
        Ok(Parser {
            toks: lex(source)?,
            pos: 0,
        })
    }

    fn current(&self) -> &Spanned {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn peek(&self) -> &Tok {
        &self.current().tok
    }

    fn here(&self) -> (usize, usize) {
        let s = self.current();
        (s.line, s.column)
    }

    fn advance(&mut self) -> Tok {
        let t = self.current().tok.clone();
        self.pos += 1;
        t
    }

    fn error_at(&self, kind: ParseErrorKind) -> ParseError {
        let (line, column) = self.here();
        ParseError { line, column, kind }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.error_at(ParseErrorKind::Syntax(format!(
            "expected {expected}, found {}",
            self.peek().describe()
        )))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let mut rules = Vec::new();
        let mut signature = Signature::default();
        loop {
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Directive(d) => self.declaration(&d, &mut signature)?,
                _ => {
                    let at = self.here();
                    let rule = self.rule()?;
                    note_rule(&mut signature, &rule).map_err(|kind| ParseError {
                        line: at.0,
                        column: at.1,
                        kind,
                    })?;
                    rules.push(rule);
                }
            }
        }
        signature.ensure_constant();
        Ok(Program { signature, rules })
    }

    fn declaration(&mut self, directive: &str, sig: &mut Signature) -> PResult<()> {
        self.advance();
        loop {
            let at = self.here();
            let name = match self.advance() {
                Tok::Name(n) => n,
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("a symbol name"));
                }
            };
            let located = |kind| ParseError {
                line: at.0,
                column: at.1,
                kind,
            };
            match directive {
                "pred" | "func" => {
                    self.expect(Tok::Slash, "`/`")?;
                    let arity = match self.advance() {
                        Tok::Num(n) => n,
                        _ => {
                            self.pos -= 1;
                            return Err(self.unexpected("an arity"));
                        }
                    };
                    if directive == "pred" {
                        sig.note_predicate(&name, arity).map_err(located)?;
                    } else {
                        sig.note_function(&name, arity).map_err(located)?;
                    }
                }
                "const" => sig.note_function(&name, 0).map_err(located)?,
                other => {
                    return Err(located(ParseErrorKind::Syntax(format!(
                        "unknown declaration `#{other}`"
                    ))))
                }
            }
            match self.advance() {
                Tok::Comma => continue,
                Tok::Dot => return Ok(()),
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("`,` or `.`"));
                }
            }
        }
    }

    fn rule(&mut self) -> PResult<Rule> {
        let head = match self.peek() {
            Tok::Name(n) if n == "true" || n == "false" => {
                return Err(self.error_at(ParseErrorKind::HeadNotAtom(n.clone())))
            }
            Tok::Name(_) => self.atom()?,
            _ => return Err(self.unexpected("a rule head")),
        };
        let body = if *self.peek() == Tok::Neck {
            self.advance();
            self.formula()?
        } else {
            Formula::Top
        };
        self.expect(Tok::Dot, "`.` ending the rule")?;
        Ok(Rule { head, body })
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut left = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.advance();
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut left = self.unary()?;
        while matches!(self.peek(), Tok::Amp | Tok::Comma) {
            self.advance();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Name(n) if n == "not" => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Name(n) if n == "forall" || n == "exists" => {
                self.advance();
                let mut vars = Vec::new();
                loop {
                    match self.advance() {
                        Tok::Var(v) => vars.push(v),
                        _ => {
                            self.pos -= 1;
                            return Err(self.unexpected("a quantified variable"));
                        }
                    }
                    match self.advance() {
                        Tok::Comma => continue,
                        Tok::Dot => break,
                        _ => {
                            self.pos -= 1;
                            return Err(self.unexpected("`,` or `.` after quantified variable"));
                        }
                    }
                }
                let body = self.formula()?;
                Ok(vars.into_iter().rev().fold(body, |acc, v| {
                    if n == "forall" {
                        Formula::Forall(v, Box::new(acc))
                    } else {
                        Formula::Exists(v, Box::new(acc))
                    }
                }))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::Name(n) if n == "true" => {
                self.advance();
                Ok(Formula::Top)
            }
            Tok::Name(n) if n == "false" => {
                self.advance();
                Ok(Formula::Bottom)
            }
            Tok::Name(_) => Ok(Formula::Atom(self.atom()?)),
            Tok::LParen => {
                self.advance();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn atom(&mut self) -> PResult<Atom> {
        let predicate = match self.advance() {
            Tok::Name(n) => n,
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a predicate name"));
            }
        };
        let args = self.arguments()?;
        Ok(Atom { predicate, args })
    }

    fn arguments(&mut self) -> PResult<Vec<Term>> {
        let mut args = Vec::new();
        if *self.peek() != Tok::LParen {
            return Ok(args);
        }
        self.advance();
        loop {
            args.push(self.term()?);
            match self.advance() {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("`,` or `)`"));
                }
            }
        }
        Ok(args)
    }

    fn term(&mut self) -> PResult<Term> {
        match self.advance() {
            Tok::Var(v) => Ok(Term::Variable(v)),
            Tok::Name(n) => {
                let args = self.arguments()?;
                if args.is_empty() {
                    Ok(Term::Constant(n))
                } else {
                    Ok(Term::Apply(n, args))
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("a term"))
            }
        }
    }
}

fn note_rule(sig: &mut Signature, rule: &Rule) -> Result<(), ParseErrorKind> {
    sig.note_atom(&rule.head)?;
    rule.body.atoms().into_iter().try_for_each(|a| sig.note_atom(a))
}

/// Parses a complete program, inferring its signature from use and from
/// optional `#pred`/`#func`/`#const` declarations.
pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    Parser::new(source)?.program()
}

/// Parses a single formula (no trailing `.`).
pub fn parse_formula(source: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(source)?;
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of formula"));
    }
    Ok(f)
}
