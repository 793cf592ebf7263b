//! Surface syntax: lexing, parsing, elaboration and printing.
//!
//! ```text
//! File    := Decl*              Decl := "def" Ident "=" (Term | Command) ";"
//! Type    := AType ("->" Type)?  AType := "N" | "(" Type ")"
//! Term    := "\" Ident ":" Type "." Term | "mu" MIdent ":" Type "." Command
//!          | "catch" MIdent Term | "throw" ATerm MIdent | AppChain
//! AppChain:= AppChain ATerm | "S" ATerm | "nrec" "{" Type "}" "(" Term ";" Term ";" Term ")" | ATerm
//! ATerm   := Ident | Decimal | "(" Term ")"
//! Command := "[" MIdent "]" Term     MIdent := "'" Ident
//! ```
//!
//! Comments run from `--` to the end of the line.

mod elab;
mod lexer;
mod parser;
mod pretty;

use thiserror::Error;

use crate::kernel::{Expr, Term, Type, TypeEnv};

pub use elab::elaborate;
pub use lexer::KEYWORDS;
pub use parser::{Surface, SurfaceCmd, SurfaceDecl, SurfaceExpr};
pub use pretty::{pretty_command, pretty_expr, pretty_term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    DuplicateDefinition(String),
    NoDeclarations,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn at(line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, col, message: message.into(), kind: ParseErrorKind::Syntax }
    }

    pub fn duplicate(line: usize, col: usize, name: &str) -> ParseError {
        ParseError {
            line,
            col,
            message: format!("`{name}` is defined twice"),
            kind: ParseErrorKind::DuplicateDefinition(name.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub expr: Expr,
    /// Inferred types of the free variables of `expr`.
    pub env: TypeEnv,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub decls: Vec<Decl>,
}

impl Program {
    /// The declaration named `main`, or else the last one.
    pub fn main(&self) -> &Decl {
        self.decls.iter().find(|d| d.name == "main").unwrap_or_else(|| self.decls.last().expect("nonempty program"))
    }

    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name == name)
    }
}

/// Parses and elaborates a file of declarations. At least one is required.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let mut p = parser::Parser::new(src)?;
    let decls = p.file()?;
    if decls.is_empty() {
        return Err(ParseError { kind: ParseErrorKind::NoDeclarations, ..ParseError::at(1, 1, "no declarations") });
    }
    let decls = decls
        .into_iter()
        .map(|d| {
            let (expr, env) = elaborate(&d.body, &TypeEnv::new());
            Decl { name: d.name, expr, env, line: d.line }
        })
        .collect();
    Ok(Program { decls })
}

/// Parses a single term or command.
pub fn parse_expr(src: &str) -> Result<(Expr, TypeEnv), ParseError> {
    parse_expr_in(src, &TypeEnv::new())
}

/// As [`parse_expr`], with the free variables in `env` at their given types.
pub fn parse_expr_in(src: &str, env: &TypeEnv) -> Result<(Expr, TypeEnv), ParseError> {
    let mut p = parser::Parser::new(src)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(elaborate(&e, env))
}

pub fn parse_term(src: &str) -> Result<(Term, TypeEnv), ParseError> {
    match parse_expr(src)? {
        (Expr::Term(t), env) => Ok((t, env)),
        (Expr::Command(_), _) => Err(ParseError::at(1, 1, "expected a term, found a command")),
    }
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = parser::Parser::new(src)?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{numeral, Command};
    use crate::typing::infer_term;

    fn term(s: &str) -> Term {
        parse_term(s).unwrap().0
    }

    #[test]
    fn identity() {
        assert_eq!(term("\\x:N. x"), Term::lam("x", Type::Nat, Term::var("x")));
    }

    #[test]
    fn catch_throw_desugar() {
        let expected =
            Term::mu("a", Type::Nat, Command::new("a", Term::mu("g", Type::Nat, Command::new("a", Term::Zero))));
        assert_eq!(term("catch 'a (throw 0 'a)"), expected);
    }

    #[test]
    fn decimals_are_numerals() {
        assert_eq!(term("3"), Term::suc(Term::suc(Term::suc(Term::Zero))));
    }

    #[test]
    fn throw_annotation_follows_context() {
        let t = term("catch 'a (throw 0 'a) 1");
        assert!(infer_term(&TypeEnv::new(), &t).is_ok(), "{t:?}");
        let t = term("\\f:N -> N. catch 'a (f (throw 0 'a))");
        assert_eq!(infer_term(&TypeEnv::new(), &t), Ok(Type::arrow(Type::arrow(Type::Nat, Type::Nat), Type::Nat)));
    }

    #[test]
    fn free_variable_types_are_inferred() {
        let (_, env) = parse_term("f (S x)").unwrap();
        assert_eq!(env.lam_type("f"), Some(&Type::arrow(Type::Nat, Type::Nat)));
        assert_eq!(env.lam_type("x"), Some(&Type::Nat));
        let (_, env) = parse_term("mu 'b:N. ['c] \\x:N. x").unwrap();
        assert_eq!(env.mu_type("c"), Some(&Type::arrow(Type::Nat, Type::Nat)));
    }

    #[test]
    fn ill_typed_elaborates_then_fails_checking() {
        let (t, env) = parse_term("S (\\x:N. x)").unwrap();
        assert!(infer_term(&env, &t).is_err());
    }

    #[test]
    fn program_main() {
        let p = parse_program("def one = 1; def two = S one; def other = 0;").unwrap();
        assert_eq!(p.main().name, "other");
        assert_eq!(p.get("two").unwrap().expr, Expr::Term(numeral(2)));
        let p = parse_program("def main = 4; def z = 0;").unwrap();
        assert_eq!(p.main().expr, Expr::Term(numeral(4)));
    }

    #[test]
    fn empty_program() {
        assert_eq!(parse_program("-- nothing\n").unwrap_err().kind, ParseErrorKind::NoDeclarations);
    }

    #[test]
    fn inlining_captures_continuations() {
        let p = parse_program("def h = throw 0 'a; def main = catch 'a (S h);").unwrap();
        let t = p.main().expr.as_term().unwrap().clone();
        assert!(t.is_closed());
        assert_eq!(infer_term(&TypeEnv::new(), &t), Ok(Type::Nat));
    }

    #[test]
    fn pretty_examples() {
        assert_eq!(pretty_term(&numeral(4)), "4");
        assert_eq!(pretty_term(&Term::mu("a", Type::Nat, Command::new("a", Term::Zero))), "catch 'a 0");
        assert_eq!(Type::arrows([Type::Nat, Type::Nat], Type::Nat).to_string(), "N -> N -> N");
        assert_eq!(pretty_term(&term("\\x:N. \\x:N. x")), "\\x:N. \\x1:N. x1");
        assert_eq!(pretty_term(&term("S (f x)")), "S (f x)");
        assert_eq!(pretty_term(&term("nrec{N}(0; \\x:N.\\y:N. S y; 2)")), "nrec{N}(0; \\x:N. \\y:N. S y; 2)");
    }

    #[test]
    fn pretty_keeps_mismatched_annotations_explicit() {
        let t = Term::mu("a", Type::arrow(Type::Nat, Type::Nat), Command::new("b", Term::Zero));
        let s = pretty_term(&t);
        assert_eq!(s, "mu 'a:N -> N. ['b] 0");
        assert_eq!(term(&s), t);
    }

    #[test]
    fn pretty_avoids_capturing_free_names() {
        use crate::kernel::{Hint, Var};
        let body = Term::app(Term::var("x1"), Term::Var(Var::Bound(0)));
        let t = Term::Lam(Hint::new("x1"), Type::Nat, std::sync::Arc::new(body));
        let s = pretty_term(&t);
        assert_eq!(s, "\\x2:N. x1 x2");
        assert_eq!(term(&s), t);
    }
}
