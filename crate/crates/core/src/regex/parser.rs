use super::RegExp;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Atom(String),
    Epsilon,
    Plus,
    Dot,
    Star,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Token::Plus,
            '.' => Token::Dot,
            '*' => Token::Star,
            '(' => Token::Open,
            ')' => Token::Close,
            '_' => Token::Epsilon,
            c if c.is_ascii_alphanumeric() => {
                let start = i;
                let mut label = String::from(c);
                while i + 1 < chars.len() && chars[i + 1] == '\'' {
                    label.push('\'');
                    i += 1;
                }
                out.push((start, Token::Atom(label)));
                i += 1;
                continue;
            }
            '\'' => {
                return Err(Error::Syntax {
                    pos: i,
                    message: "apostrophe must follow an atom".into(),
                })
            }
            other => return Err(Error::UnknownCharacter { pos: i, ch: other }),
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.cursor).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.cursor).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn starts_factor(tok: Option<&Token>) -> bool {
        matches!(tok, Some(Token::Atom(_) | Token::Epsilon | Token::Open))
    }

    fn expr(&mut self) -> Result<RegExp> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(&Token::Plus) {
            self.cursor += 1;
            terms.push(self.term()?);
        }
        Ok(fold_right(terms, RegExp::union))
    }

    fn term(&mut self) -> Result<RegExp> {
        if !Self::starts_factor(self.peek()) {
            return self.err("expected an atom, '_' or '('");
        }
        let mut factors = vec![self.factor()?];
        loop {
            if self.peek() == Some(&Token::Dot) {
                self.cursor += 1;
                if !Self::starts_factor(self.peek()) {
                    return self.err("expected a factor after '.'");
                }
            } else if !Self::starts_factor(self.peek()) {
                break;
            }
            factors.push(self.factor()?);
        }
        Ok(fold_right(factors, RegExp::concat))
    }

    fn factor(&mut self) -> Result<RegExp> {
        let mut base = self.base()?;
        while self.peek() == Some(&Token::Star) {
            self.cursor += 1;
            base = RegExp::star(base);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RegExp> {
        match self.peek().cloned() {
            Some(Token::Atom(label)) => {
                self.cursor += 1;
                Ok(RegExp::Atom(label))
            }
            Some(Token::Epsilon) => {
                self.cursor += 1;
                Ok(RegExp::Epsilon)
            }
            Some(Token::Open) => {
                self.cursor += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return self.err("expected ')'");
                }
                self.cursor += 1;
                Ok(inner)
            }
            _ => self.err("expected an atom, '_' or '('"),
        }
    }
}

fn fold_right(mut items: Vec<RegExp>, join: fn(RegExp, RegExp) -> RegExp) -> RegExp {
    let mut acc = items.pop().expect("at least one item");
    while let Some(prev) = items.pop() {
        acc = join(prev, acc);
    }
    acc
}

/// Parse an expression in the concrete syntax described in the module docs.
pub fn parse(text: &str) -> Result<RegExp> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        end: text.chars().count(),
    };
    let r = parser.expr()?;
    if parser.cursor != parser.tokens.len() {
        return parser.err("unexpected trailing input");
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> RegExp {
        RegExp::atom(s)
    }

    #[test]
    fn parses_r1_shape() {
        let inner = RegExp::union(
            a("1"),
            RegExp::union(a("2"), RegExp::concat(a("3"), RegExp::concat(a("1"), a("3")))),
        );
        let expected = RegExp::concat(a("0"), RegExp::concat(RegExp::star(inner), a("0")));
        assert_eq!(parse("0(1+2+313)*0").unwrap(), expected);
        assert_eq!(parse("0 . (1 + 2 + 3.1.3)* . 0").unwrap(), expected);
    }

    #[test]
    fn epsilon_and_primes() {
        assert_eq!(parse("_").unwrap(), RegExp::Epsilon);
        assert_eq!(parse("4'").unwrap(), a("4'"));
        assert_eq!(parse("4''X").unwrap(), RegExp::concat(a("4''"), a("X")));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(
            parse("a+").unwrap_err(),
            Error::Syntax {
                pos: 2,
                message: "expected an atom, '_' or '('".into()
            }
        );
        assert!(matches!(parse("(ab").unwrap_err(), Error::Syntax { pos: 3, .. }));
        assert!(matches!(parse("ab)").unwrap_err(), Error::Syntax { pos: 2, .. }));
        assert!(matches!(parse("*a").unwrap_err(), Error::Syntax { pos: 0, .. }));
        assert!(matches!(parse("").unwrap_err(), Error::Syntax { pos: 0, .. }));
        assert!(matches!(parse("a.").unwrap_err(), Error::Syntax { .. }));
        assert!(matches!(parse("'a").unwrap_err(), Error::Syntax { pos: 0, .. }));
    }

    #[test]
    fn unknown_characters() {
        assert_eq!(
            parse("(3G)^5").unwrap_err(),
            Error::UnknownCharacter { pos: 4, ch: '^' }
        );
        assert!(matches!(
            parse("a|b").unwrap_err(),
            Error::UnknownCharacter { pos: 1, ch: '|' }
        ));
    }
}
