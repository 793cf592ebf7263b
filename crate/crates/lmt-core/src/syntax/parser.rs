//! Recursive-descent parser producing surface trees. References to earlier
//! declarations are replaced by their text, so inlined bodies may capture
//! continuation names bound at the use site.

use std::collections::HashMap;

use super::lexer::{lex, Spanned, Tok};
use super::ParseError;
use crate::kernel::Type;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Surface {
    Var(String),
    Num(u64),
    Lam(String, Type, Box<Surface>),
    Mu(String, Type, Box<SurfaceCmd>),
    Catch(String, Box<Surface>),
    Throw(Box<Surface>, String),
    App(Box<Surface>, Box<Surface>),
    Suc(Box<Surface>),
    NRec(Type, Box<Surface>, Box<Surface>, Box<Surface>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceCmd {
    pub target: String,
    pub body: Surface,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceExpr {
    Term(Surface),
    Command(SurfaceCmd),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceDecl {
    pub name: String,
    pub body: SurfaceExpr,
    pub line: usize,
}

pub struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    defs: HashMap<String, SurfaceExpr>,
    lams: Vec<String>,
}

impl Parser {
    pub fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0, defs: HashMap::new(), lams: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError::at(t.line, t.col, message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn mident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::MIdent(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.unexpected("a continuation name like 'a")),
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn expect_eof(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    pub fn file(&mut self) -> Result<Vec<SurfaceDecl>, ParseError> {
        let mut out: Vec<SurfaceDecl> = Vec::new();
        while !self.at_eof() {
            let line = self.toks[self.pos].line;
            self.expect(Tok::Def, "`def`")?;
            let name_tok = self.toks[self.pos].clone();
            let name = self.ident()?;
            if self.defs.contains_key(&name) {
                return Err(ParseError::duplicate(name_tok.line, name_tok.col, &name));
            }
            self.expect(Tok::Eq, "`=`")?;
            let body = self.expr()?;
            self.expect(Tok::Semi, "`;`")?;
            self.defs.insert(name.clone(), body.clone());
            out.push(SurfaceDecl { name, body, line });
        }
        Ok(out)
    }

    pub fn expr(&mut self) -> Result<SurfaceExpr, ParseError> {
        if *self.peek() == Tok::LBrack {
            Ok(SurfaceExpr::Command(self.command()?))
        } else {
            Ok(SurfaceExpr::Term(self.term()?))
        }
    }

    pub fn ty(&mut self) -> Result<Type, ParseError> {
        let a = match self.peek() {
            Tok::NatTy => {
                self.next();
                Type::Nat
            }
            Tok::LParen => {
                self.next();
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                t
            }
            _ => return Err(self.unexpected("a type")),
        };
        if *self.peek() == Tok::Arrow {
            self.next();
            Ok(Type::arrow(a, self.ty()?))
        } else {
            Ok(a)
        }
    }

    fn command(&mut self) -> Result<SurfaceCmd, ParseError> {
        self.expect(Tok::LBrack, "`[`")?;
        let target = self.mident()?;
        self.expect(Tok::RBrack, "`]`")?;
        Ok(SurfaceCmd { target, body: self.term()? })
    }

    pub fn term(&mut self) -> Result<Surface, ParseError> {
        match self.peek() {
            Tok::Lambda => {
                self.next();
                let x = self.ident()?;
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.ty()?;
                self.expect(Tok::Dot, "`.`")?;
                self.lams.push(x.clone());
                let body = self.term();
                self.lams.pop();
                Ok(Surface::Lam(x, ty, Box::new(body?)))
            }
            Tok::Mu => {
                self.next();
                let a = self.mident()?;
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.ty()?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(Surface::Mu(a, ty, Box::new(self.command()?)))
            }
            Tok::Catch => {
                self.next();
                let a = self.mident()?;
                Ok(Surface::Catch(a, Box::new(self.term()?)))
            }
            Tok::Throw => {
                self.next();
                let t = self.aterm()?;
                let a = self.mident()?;
                Ok(Surface::Throw(Box::new(t), a))
            }
            _ => self.app_chain(),
        }
    }

    fn starts_aterm(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Nat(_) | Tok::LParen)
    }

    fn app_chain(&mut self) -> Result<Surface, ParseError> {
        let mut head = match self.peek() {
            Tok::Suc => {
                self.next();
                Surface::Suc(Box::new(self.aterm()?))
            }
            Tok::NRec => {
                self.next();
                self.expect(Tok::LBrace, "`{`")?;
                let ty = self.ty()?;
                self.expect(Tok::RBrace, "`}`")?;
                self.expect(Tok::LParen, "`(`")?;
                let r = self.term()?;
                self.expect(Tok::Semi, "`;`")?;
                let s = self.term()?;
                self.expect(Tok::Semi, "`;`")?;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Surface::NRec(ty, Box::new(r), Box::new(s), Box::new(t))
            }
            _ if self.starts_aterm() => self.aterm()?,
            _ => return Err(self.unexpected("a term")),
        };
        while self.starts_aterm() {
            let a = self.aterm()?;
            head = Surface::App(Box::new(head), Box::new(a));
        }
        Ok(head)
    }

    fn aterm(&mut self) -> Result<Surface, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                if !self.lams.contains(&x) {
                    match self.defs.get(&x) {
                        Some(SurfaceExpr::Term(t)) => {
                            let t = t.clone();
                            self.next();
                            return Ok(t);
                        }
                        Some(SurfaceExpr::Command(_)) => {
                            return Err(self.error(format!("`{x}` is a command, not a term")));
                        }
                        None => {}
                    }
                }
                self.next();
                Ok(Surface::Var(x))
            }
            Tok::Nat(n) => {
                self.next();
                Ok(Surface::Num(n))
            }
            Tok::LParen => {
                self.next();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.unexpected("a variable, numeral or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(s: &str) -> Surface {
        let mut p = Parser::new(s).unwrap();
        let t = p.term().unwrap();
        p.expect_eof().unwrap();
        t
    }

    fn var(x: &str) -> Surface {
        Surface::Var(x.into())
    }

    #[test]
    fn application_is_left_nested() {
        assert_eq!(
            term("f x y"),
            Surface::App(Box::new(Surface::App(Box::new(var("f")), Box::new(var("x")))), Box::new(var("y")))
        );
    }

    #[test]
    fn successor_takes_an_atom() {
        assert_eq!(term("S x y"), Surface::App(Box::new(Surface::Suc(Box::new(var("x")))), Box::new(var("y"))));
    }

    #[test]
    fn arrows_nest_right() {
        let mut p = Parser::new("N -> N -> N").unwrap();
        assert_eq!(p.ty().unwrap(), Type::arrows([Type::Nat, Type::Nat], Type::Nat));
        let mut p = Parser::new("(N -> N) -> N").unwrap();
        assert_eq!(p.ty().unwrap(), Type::arrow(Type::arrow(Type::Nat, Type::Nat), Type::Nat));
    }

    #[test]
    fn throw_and_catch() {
        assert_eq!(
            term("catch 'a (throw 0 'a)"),
            Surface::Catch("a".into(), Box::new(Surface::Throw(Box::new(Surface::Num(0)), "a".into())))
        );
    }

    #[test]
    fn definitions_inline_unless_shadowed() {
        let mut p = Parser::new("def one = 1; def k = \\one:N. one; def two = S one;").unwrap();
        let ds = p.file().unwrap();
        assert_eq!(ds[1].body, SurfaceExpr::Term(Surface::Lam("one".into(), Type::Nat, Box::new(var("one")))));
        assert_eq!(ds[2].body, SurfaceExpr::Term(Surface::Suc(Box::new(Surface::Num(1)))));
    }

    #[test]
    fn duplicate_definition() {
        let e = Parser::new("def a = 0;\ndef a = 1;").unwrap().file().unwrap_err();
        assert_eq!((e.line, e.col), (2, 5));
        assert!(e.to_string().contains("defined twice"));
    }

    #[test]
    fn missing_semicolon_position() {
        let e = Parser::new("def a = 0\ndef b = 1;").unwrap().file().unwrap_err();
        assert_eq!((e.line, e.col), (2, 1));
    }

    #[test]
    fn command_definition() {
        let ds = Parser::new("def c = ['a] 0;").unwrap().file().unwrap();
        assert_eq!(ds[0].body, SurfaceExpr::Command(SurfaceCmd { target: "a".into(), body: Surface::Num(0) }));
    }
}
