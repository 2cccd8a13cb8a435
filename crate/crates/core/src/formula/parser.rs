//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := quant | iff
//! quant   := ("forall" | "exists") IDENT "." formula
//! iff     := imp ( "<->" imp )*
//! imp     := or ( "->" or )*
//! or      := and ( "\/" and )*
//! and     := unary ( "/\" unary )*
//! unary   := "~" unary | "(" formula ")" | quant | atom
//! atom    := IDENT REL IDENT | IDENT "(" IDENT ")"
//! ```
//!
//! A quantifier in operand position extends as far right as possible.
//! `<->` and `/\`, `\/` associate to the left; `->` associates to the right.

use super::{Formula, RelSym, Var};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unbound variable(s) in closed formula: {}", vars.join(", "))]
    Unbound { vars: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Rel(RelSym),
    Forall,
    Exists,
    Dot,
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Rel(r) => format!("`{r}`"),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`/\\`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
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

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, found: String| ParseError::Syntax {
        line,
        column,
        expected: vec!["a token".into()],
        found,
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            });
            *i += width;
            *col += width;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '~' => push(Tok::Not, 1, &mut i, &mut col),
            '=' => push(Tok::Rel(RelSym::Eq), 1, &mut i, &mut col),
            '/' if chars.get(i + 1) == Some(&'\\') => push(Tok::And, 2, &mut i, &mut col),
            '\\' if chars.get(i + 1) == Some(&'/') => push(Tok::Or, 2, &mut i, &mut col),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Implies, 2, &mut i, &mut col),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::Iff, 3, &mut i, &mut col)
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let mut width = j - start;
                let tok = match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "memf" => Tok::Rel(RelSym::MemF),
                    "mem" => match chars.get(j) {
                        Some('*') => {
                            width += 1;
                            Tok::Rel(RelSym::MemStar)
                        }
                        Some('\'') => {
                            width += 1;
                            Tok::Rel(RelSym::MemPrime)
                        }
                        _ => Tok::Rel(RelSym::Mem),
                    },
                    _ => Tok::Ident(word),
                };
                push(tok, width, &mut i, &mut col);
            }
            other => return Err(err(l0, c0, format!("character `{other}`"))),
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let here = &self.toks[self.pos];
        ParseError::Syntax {
            line: here.line,
            column: here.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: here.tok.describe(),
        }
    }

    fn ident(&mut self, expected: &[&str]) -> Result<Var, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Var::new(name))
            }
            _ => Err(self.error(expected)),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[expected]))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Forall | Tok::Exists => self.quant(),
            _ => self.iff(),
        }
    }

    fn quant(&mut self) -> Result<Formula, ParseError> {
        let universal = self.bump() == Tok::Forall;
        let v = self.ident(&["a variable"])?;
        self.expect(Tok::Dot, "`.`")?;
        let body = self.formula()?;
        Ok(if universal {
            Formula::forall(v, body)
        } else {
            Formula::exists(v, body)
        })
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Forall | Tok::Exists => self.quant(),
            Tok::Ident(_) => self.atom(),
            _ => Err(self.error(&["`~`", "`(`", "`forall`", "`exists`", "an identifier"])),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        if *self.peek2() == Tok::LParen {
            let pred = self.ident(&["a predicate name"])?;
            self.bump();
            let v = self.ident(&["a variable"])?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Formula::Guard(pred.as_str().to_owned(), v));
        }
        let left = self.ident(&["a variable"])?;
        let rel = match self.peek() {
            Tok::Rel(r) => *r,
            _ => return Err(self.error(&["`mem`", "`mem*`", "`mem'`", "`memf`", "`=`", "`(`"])),
        };
        self.bump();
        let right = self.ident(&["a variable"])?;
        Ok(Formula::Atom(rel, left, right))
    }
}

/// Parses and normalizes a formula. Free variables are allowed.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let phi = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["end of input", "a binary connective"]));
    }
    Ok(phi.normalized())
}

/// Parses a formula that must be closed.
pub fn parse_closed(text: &str) -> Result<Formula, ParseError> {
    let phi = parse_formula(text)?;
    let free = phi.free_vars();
    if free.is_empty() {
        Ok(phi)
    } else {
        Err(ParseError::Unbound {
            vars: free.iter().map(|v| v.to_string()).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Var {
        Var::from(s)
    }

    #[test]
    fn parses_complement_body() {
        let phi = parse_formula("forall z. (z mem y <-> ~(z mem x))").unwrap();
        assert_eq!(
            phi,
            Formula::forall(
                "z",
                Formula::iff(Formula::mem("z", "y"), Formula::not(Formula::mem("z", "x")))
            )
        );
        assert_eq!(phi.free_vars(), [v("x"), v("y")].into_iter().collect());
    }

    #[test]
    fn parses_self_membership() {
        assert_eq!(parse_formula("x mem x").unwrap(), Formula::mem("x", "x"));
    }

    #[test]
    fn russell_comprehension_is_closed() {
        let phi = parse_closed("exists y. forall x. (x mem y <-> ~(x mem x))").unwrap();
        assert!(phi.free_vars().is_empty());
        assert_eq!(
            phi,
            Formula::exists(
                "y",
                Formula::forall(
                    "x",
                    Formula::iff(Formula::mem("x", "y"), Formula::not(Formula::mem("x", "x")))
                )
            )
        );
    }

    #[test]
    fn relation_keywords() {
        for (src, rel) in [
            ("a mem b", RelSym::Mem),
            ("a mem* b", RelSym::MemStar),
            ("a mem' b", RelSym::MemPrime),
            ("a memf b", RelSym::MemF),
            ("a = b", RelSym::Eq),
        ] {
            assert_eq!(parse_formula(src).unwrap(), Formula::atom(rel, "a", "b"));
        }
    }

    #[test]
    fn quantifier_as_right_operand_extends_right() {
        let phi = parse_formula("forall z. (z mem y <-> exists w. (z mem w /\\ w mem x))").unwrap();
        let expected = Formula::forall(
            "z",
            Formula::iff(
                Formula::mem("z", "y"),
                Formula::exists(
                    "w",
                    Formula::and(Formula::mem("z", "w"), Formula::mem("w", "x")),
                ),
            ),
        );
        assert_eq!(phi, expected);
    }

    #[test]
    fn precedence_and_associativity() {
        let phi = parse_formula("a = b \\/ c = d /\\ e = f -> g = h -> i = j").unwrap();
        let expected = Formula::implies(
            Formula::or(
                Formula::eq("a", "b"),
                Formula::and(Formula::eq("c", "d"), Formula::eq("e", "f")),
            ),
            Formula::implies(Formula::eq("g", "h"), Formula::eq("i", "j")),
        );
        assert_eq!(phi, expected);
        let chain = parse_formula("a = b <-> c = d <-> e = f").unwrap();
        assert_eq!(
            chain,
            Formula::iff(
                Formula::iff(Formula::eq("a", "b"), Formula::eq("c", "d")),
                Formula::eq("e", "f")
            )
        );
    }

    #[test]
    fn comments_and_guards() {
        let phi = parse_formula("# relativized\nforall x. (D(x) -> x mem y) # trailing\n").unwrap();
        assert_eq!(
            phi,
            Formula::forall(
                "x",
                Formula::implies(Formula::Guard("D".into(), v("x")), Formula::mem("x", "y"))
            )
        );
    }

    #[test]
    fn syntax_error_reports_position_and_expectations() {
        let err = parse_formula("forall x.\n  x mem").unwrap_err();
        match err {
            ParseError::Syntax {
                line,
                column,
                expected,
                found,
            } => {
                assert_eq!((line, column), (2, 8));
                assert_eq!(expected, vec!["a variable".to_string()]);
                assert_eq!(found, "end of input");
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_formula("x mem y )").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { column: 9, .. }));
        assert!(matches!(
            parse_formula("x ! y"),
            Err(ParseError::Syntax { column: 3, .. })
        ));
    }

    #[test]
    fn closed_context_rejects_free_variables() {
        assert_eq!(
            parse_closed("forall x. x mem y").unwrap_err(),
            ParseError::Unbound {
                vars: vec!["y".into()]
            }
        );
    }
}
