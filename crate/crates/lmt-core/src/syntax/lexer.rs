//! Tokens of the surface language.

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `'a`, stored without the apostrophe.
    MIdent(String),
    Nat(u64),
    Def,
    Mu,
    Catch,
    Throw,
    NRec,
    Suc,
    NatTy,
    Lambda,
    Colon,
    Dot,
    Semi,
    Eq,
    Arrow,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::MIdent(s) => format!("continuation `'{s}`"),
            Tok::Nat(n) => format!("numeral `{n}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Def => "def",
            Tok::Mu => "mu",
            Tok::Catch => "catch",
            Tok::Throw => "throw",
            Tok::NRec => "nrec",
            Tok::Suc => "S",
            Tok::NatTy => "N",
            Tok::Lambda => "\\",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Semi => ";",
            Tok::Eq => "=",
            Tok::Arrow => "->",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            _ => "",
        }
    }
}

/// Words that cannot be identifiers.
pub const KEYWORDS: [&str; 7] = ["def", "mu", "catch", "throw", "nrec", "S", "N"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let word = |i: usize| {
            let mut j = i;
            while j < chars.len() && is_ident_char(chars[j]) {
                j += 1;
            }
            chars[i..j].iter().collect::<String>()
        };
        let tok = if is_ident_start(c) {
            let w = word(i);
            advance(w.chars().count(), &mut i);
            match w.as_str() {
                "def" => Tok::Def,
                "mu" => Tok::Mu,
                "catch" => Tok::Catch,
                "throw" => Tok::Throw,
                "nrec" => Tok::NRec,
                "S" => Tok::Suc,
                "N" => Tok::NatTy,
                _ => Tok::Ident(w),
            }
        } else if c.is_ascii_digit() {
            let w = word(i);
            let n = w.parse::<u64>().map_err(|_| ParseError::at(l0, c0, format!("bad numeral `{w}`")))?;
            advance(w.chars().count(), &mut i);
            Tok::Nat(n)
        } else if c == '\'' {
            if !chars.get(i + 1).copied().is_some_and(is_ident_start) {
                return Err(ParseError::at(l0, c0, "expected a name after `'`"));
            }
            let w = word(i + 1);
            advance(1 + w.chars().count(), &mut i);
            Tok::MIdent(w)
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            advance(2, &mut i);
            Tok::Arrow
        } else {
            let t = match c {
                '\\' | 'λ' => Tok::Lambda,
                ':' => Tok::Colon,
                '.' => Tok::Dot,
                ';' => Tok::Semi,
                '=' => Tok::Eq,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                _ => return Err(ParseError::at(l0, c0, format!("unexpected character `{c}`"))),
            };
            advance(1, &mut i);
            t
        };
        out.push(Spanned { tok, line: l0, col: c0 });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}
