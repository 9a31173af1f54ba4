use super::{ErrorCategory, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Tok {
    Ident(String),
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    LParen,
    RParen,
    Comma,
    Dot,
    Eof,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(super) struct Token {
    pub tok: Tok,
    pub span: (usize, usize),
}

pub(super) fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = |tok| Token {
            tok,
            span: (start, start + 1),
        };
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => out.push(single(Tok::Tilde)),
            b'&' => out.push(single(Tok::Amp)),
            b'|' => out.push(single(Tok::Bar)),
            b'(' => out.push(single(Tok::LParen)),
            b')' => out.push(single(Tok::RParen)),
            b',' => out.push(single(Tok::Comma)),
            b'.' => out.push(single(Tok::Dot)),
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push(Token {
                    tok: Tok::Arrow,
                    span: (i, i + 2),
                });
                i += 2;
                continue;
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                out.push(Token {
                    tok: Tok::DArrow,
                    span: (i, i + 3),
                });
                i += 3;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(src[start..i].to_string()),
                    span: (start, i),
                });
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                let end = i + ch.len_utf8();
                let mut err = ParseError::new(
                    ErrorCategory::Lexical,
                    format!("unexpected character `{ch}`"),
                    (i, end),
                );
                err.prefix_end = i;
                return Err(err);
            }
        }
        i += 1;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: (src.len(), src.len()),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators_and_identifiers() {
        let toks: Vec<Tok> = lex("O(q|p) -> ~r <-> s_1")
            .unwrap()
            .into_iter()
            .map(|t| t.tok)
            .collect();
        assert_eq!(
            toks,
            vec![
                Tok::Ident("O".into()),
                Tok::LParen,
                Tok::Ident("q".into()),
                Tok::Bar,
                Tok::Ident("p".into()),
                Tok::RParen,
                Tok::Arrow,
                Tok::Tilde,
                Tok::Ident("r".into()),
                Tok::DArrow,
                Tok::Ident("s_1".into()),
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn stray_character_is_lexical() {
        let err = lex("p & $q").unwrap_err();
        assert_eq!(err.category, ErrorCategory::Lexical);
        assert_eq!(err.span, (4, 5));
    }

    #[test]
    fn lone_dash_is_rejected() {
        assert!(lex("p - q").is_err());
    }
}
