use std::fmt;

use crate::error::{Error, Result};

pub const KEYWORDS: &[&str] = &[
    "abstract", "boolean", "break", "byte", "case", "catch", "char", "class", "continue",
    "default", "do", "double", "else", "extends", "false", "final", "finally", "float", "for",
    "if", "implements", "instanceof", "int", "long", "new", "null", "private", "protected",
    "public", "return", "short", "static", "super", "switch", "this", "throw", "true", "try",
    "void", "while",
];

const TWO_CHAR_PUNCT: &[&str] = &[
    "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=",
];

const ONE_CHAR_PUNCT: &str = "{}()[];,.=+-*/%<>!&|^?:~";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Keyword,
    Identifier,
    Punct,
    Integer,
    /// String or character literal; the lexeme keeps its quotes.
    Str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }

    pub fn is_punct(&self, text: &str) -> bool {
        self.is(TokenKind::Punct, text)
    }

    pub fn is_keyword(&self, text: &str) -> bool {
        self.is(TokenKind::Keyword, text)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

fn lex_error(line: usize, column: usize, reason: impl Into<String>) -> Error {
    Error::Lex {
        line,
        column,
        reason: reason.into(),
    }
}

/// Splits source text into tokens. Whitespace and both comment forms are
/// dropped.
pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);

        if c.is_whitespace() {
            cur.bump();
            continue;
        }

        if c == '/' && cur.peek2() == Some('/') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }

        if c == '/' && cur.peek2() == Some('*') {
            cur.bump();
            cur.bump();
            loop {
                match cur.bump() {
                    Some('*') if cur.peek() == Some('/') => {
                        cur.bump();
                        break;
                    }
                    Some(_) => {}
                    None => return Err(lex_error(line, column, "unterminated block comment")),
                }
            }
            continue;
        }

        let mut push = |kind, text: String| {
            tokens.push(Token {
                kind,
                text,
                line,
                column,
            })
        };

        if c.is_ascii_alphabetic() || c == '_' || c == '$' {
            let mut word = String::new();
            while let Some(c) = cur.peek() {
                if c.is_ascii_alphanumeric() || c == '_' || c == '$' {
                    word.push(c);
                    cur.bump();
                } else {
                    break;
                }
            }
            let kind = if KEYWORDS.contains(&word.as_str()) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            push(kind, word);
            continue;
        }

        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(c) = cur.peek() {
                if c.is_ascii_digit() {
                    digits.push(c);
                    cur.bump();
                } else {
                    break;
                }
            }
            push(TokenKind::Integer, digits);
            continue;
        }

        if c == '"' || c == '\'' {
            let quote = c;
            let mut lit = String::new();
            lit.push(quote);
            cur.bump();
            loop {
                match cur.bump() {
                    Some('\\') => {
                        lit.push('\\');
                        match cur.bump() {
                            Some('\n') | None => {
                                return Err(lex_error(line, column, "unterminated literal"))
                            }
                            Some(esc) => lit.push(esc),
                        }
                    }
                    Some(ch) if ch == quote => {
                        lit.push(ch);
                        break;
                    }
                    Some('\n') | None => {
                        return Err(lex_error(line, column, "unterminated literal"))
                    }
                    Some(ch) => lit.push(ch),
                }
            }
            push(TokenKind::Str, lit);
            continue;
        }

        if let Some(next) = cur.peek2() {
            let pair: String = [c, next].iter().collect();
            if TWO_CHAR_PUNCT.contains(&pair.as_str()) {
                cur.bump();
                cur.bump();
                push(TokenKind::Punct, pair);
                continue;
            }
        }

        if ONE_CHAR_PUNCT.contains(c) {
            cur.bump();
            push(TokenKind::Punct, c.to_string());
            continue;
        }

        return Err(lex_error(line, column, format!("illegal character {c:?}")));
    }

    Ok(tokens)
}

/// Joins lexemes with single spaces; tokenizing the result yields the same
/// kinds and lexemes.
pub fn render(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| t.text.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}
