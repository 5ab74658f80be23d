//! Tokenizer. `#` starts a line comment; identifiers are letter-led and may
//! contain letters, digits, `_` and `'`.

use crate::ast::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    KwType,
    KwConst,
    KwAxiom,
    KwSubtype,
    KwConjecture,
    /// The kind keyword `Type`.
    KwBigType,
    True,
    False,
    LParen,
    RParen,
    Dot,
    Colon,
    ColonEq,
    Bar,
    Arrow,
    FatArrow,
    Eq,
    /// `=[`, opening an annotated equality.
    EqBracket,
    RBracket,
    Backslash,
    Bang,
    Question,
    Amp,
    Tilde,
    Iff,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::KwType => "`type`".into(),
            Tok::KwConst => "`const`".into(),
            Tok::KwAxiom => "`axiom`".into(),
            Tok::KwSubtype => "`subtype`".into(),
            Tok::KwConjecture => "`conjecture`".into(),
            Tok::KwBigType => "`Type`".into(),
            Tok::True => "`$true`".into(),
            Tok::False => "`$false`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::ColonEq => "`:=`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Eq => "`=`".into(),
            Tok::EqBracket => "`=[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Question => "`?`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Iff => "`<=>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

#[derive(Debug)]
pub struct LexError {
    pub message: String,
    pub span: Span,
}

pub fn lex(source: &str) -> Result<Vec<Token>, LexError> {
    let mut tokens = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = source.chars().peekable();

    macro_rules! push {
        ($tok:expr, $start_col:expr, $len:expr) => {
            tokens.push(Token { tok: $tok, span: Span::new(line, $start_col, $len) })
        };
    }

    while let Some(&c) = chars.peek() {
        let start_col = col;
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' => {
                chars.next();
                col += 1;
                push!(Tok::LParen, start_col, 1);
            }
            ')' => {
                chars.next();
                col += 1;
                push!(Tok::RParen, start_col, 1);
            }
            '.' => {
                chars.next();
                col += 1;
                push!(Tok::Dot, start_col, 1);
            }
            ']' => {
                chars.next();
                col += 1;
                push!(Tok::RBracket, start_col, 1);
            }
            '|' => {
                chars.next();
                col += 1;
                push!(Tok::Bar, start_col, 1);
            }
            '\\' => {
                chars.next();
                col += 1;
                push!(Tok::Backslash, start_col, 1);
            }
            '!' => {
                chars.next();
                col += 1;
                push!(Tok::Bang, start_col, 1);
            }
            '?' => {
                chars.next();
                col += 1;
                push!(Tok::Question, start_col, 1);
            }
            '&' => {
                chars.next();
                col += 1;
                push!(Tok::Amp, start_col, 1);
            }
            '~' => {
                chars.next();
                col += 1;
                push!(Tok::Tilde, start_col, 1);
            }
            ':' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    push!(Tok::ColonEq, start_col, 2);
                } else {
                    push!(Tok::Colon, start_col, 1);
                }
            }
            '=' => {
                chars.next();
                col += 1;
                match chars.peek() {
                    Some('>') => {
                        chars.next();
                        col += 1;
                        push!(Tok::FatArrow, start_col, 2);
                    }
                    Some('[') => {
                        chars.next();
                        col += 1;
                        push!(Tok::EqBracket, start_col, 2);
                    }
                    _ => push!(Tok::Eq, start_col, 1),
                }
            }
            '-' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    push!(Tok::Arrow, start_col, 2);
                } else {
                    return Err(LexError {
                        message: "stray `-` (expected `->`)".into(),
                        span: Span::new(line, start_col, 1),
                    });
                }
            }
            '<' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    if chars.peek() == Some(&'>') {
                        chars.next();
                        col += 1;
                        push!(Tok::Iff, start_col, 3);
                    } else {
                        return Err(LexError {
                            message: "stray `<=` (expected `<=>`)".into(),
                            span: Span::new(line, start_col, 2),
                        });
                    }
                } else {
                    return Err(LexError {
                        message: "stray `<` (expected `<=>`)".into(),
                        span: Span::new(line, start_col, 1),
                    });
                }
            }
            '$' => {
                chars.next();
                col += 1;
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() {
                        word.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "true" => push!(Tok::True, start_col, 5),
                    "false" => push!(Tok::False, start_col, 6),
                    _ => {
                        return Err(LexError {
                            message: format!("unknown token `${word}`"),
                            span: Span::new(line, start_col, word.len() as u32 + 1),
                        })
                    }
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        word.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let len = word.len() as u32;
                let tok = match word.as_str() {
                    "type" => Tok::KwType,
                    "const" => Tok::KwConst,
                    "axiom" => Tok::KwAxiom,
                    "subtype" => Tok::KwSubtype,
                    "conjecture" => Tok::KwConjecture,
                    "Type" => Tok::KwBigType,
                    _ => Tok::Ident(word),
                };
                push!(tok, start_col, len);
            }
            other => {
                return Err(LexError {
                    message: format!("unexpected character `{other}`"),
                    span: Span::new(line, start_col, 1),
                });
            }
        }
    }
    tokens.push(Token { tok: Tok::Eof, span: Span::new(line, col, 0) });
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_tokens() {
        let toks = lex("type vect (A : Type) . # comment\nx =[nat] y").unwrap();
        let kinds: Vec<&Tok> = toks.iter().map(|t| &t.tok).collect();
        assert!(matches!(kinds[0], Tok::KwType));
        assert!(matches!(kinds[1], Tok::Ident(s) if s == "vect"));
        assert!(matches!(kinds[4], Tok::Colon));
        assert!(matches!(kinds[5], Tok::KwBigType));
        assert!(kinds.iter().any(|t| matches!(t, Tok::EqBracket)));
        // spans are 1-based and land inside the text
        assert_eq!(toks[0].span.line, 1);
        assert_eq!(toks[0].span.col, 1);
        let eqb = toks.iter().find(|t| t.tok == Tok::EqBracket).unwrap();
        assert_eq!(eqb.span.line, 2);
    }

    #[test]
    fn lex_errors_have_spans() {
        let err = lex("a @ b").unwrap_err();
        assert_eq!(err.span.line, 1);
        assert_eq!(err.span.col, 3);
    }
}
