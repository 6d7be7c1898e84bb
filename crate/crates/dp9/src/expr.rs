//! Parsing and canonical printing of divisor/cohomology expressions.
//!
//! The grammar is a flat signed sum of terms:
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := rational '*'? symbol | rational | symbol
//! rational := int ('/' posint)?
//! symbol   := l | e1..e9 | f | e | zeta | n1 | n2 | o1 | o2 | pt | one
//! ```
//!
//! A bare rational is a multiple of `one`.  Printing produces the
//! canonical form `one`-term, `e1..e9` terms, then the `f` (or `l`)
//! term, then `pt`; `f` is used only when it shortens the output.

use num::{BigInt, One, Signed, Zero};
use thiserror::Error;

use crate::cohomology::{named_class, CohClass, H2Class, NamedClass, Rational, H2_RANK};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{symbol}` at position {pos}")]
    UnknownSymbol { pos: usize, symbol: String },
}

#[derive(Debug, PartialEq, Eq, Clone)]
enum Token {
    Number(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                tokens.push((i, Token::Plus));
                i += 1;
            }
            b'-' => {
                tokens.push((i, Token::Minus));
                i += 1;
            }
            b'*' => {
                tokens.push((i, Token::Star));
                i += 1;
            }
            b'/' => {
                tokens.push((i, Token::Slash));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits parse");
                tokens.push((start, Token::Number(n)));
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push((start, Token::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(ParseError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(tokens)
}

/// The semantic value of one grammar symbol.
enum SymbolValue {
    One,
    Pt,
    Div(H2Class),
}

fn lookup_symbol(name: &str, pos: usize) -> Result<SymbolValue, ParseError> {
    use NamedClass::*;
    let named = match name {
        "one" => return Ok(SymbolValue::One),
        "pt" => return Ok(SymbolValue::Pt),
        "l" => L,
        "e1" => E1,
        "e2" => E2,
        "e3" => E3,
        "e4" => E4,
        "e5" => E5,
        "e6" => E6,
        "e7" => E7,
        "e8" => E8,
        "e9" => E9,
        "f" => F,
        "e" => E,
        "zeta" => Zeta,
        "n1" => N1,
        "o1" => O1,
        "n2" => N2,
        "o2" => O2,
        _ => {
            return Err(ParseError::UnknownSymbol {
                pos,
                symbol: name.to_string(),
            })
        }
    };
    Ok(SymbolValue::Div(named_class(named)))
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    index: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.index).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens
            .get(self.index)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.index).map(|(_, t)| t.clone());
        if t.is_some() {
            self.index += 1;
        }
        t
    }

    fn parse_rational(&mut self) -> Result<Rational, ParseError> {
        let pos = self.pos();
        let Some(Token::Number(num)) = self.next() else {
            return Err(ParseError::Syntax {
                pos,
                msg: "expected a number".to_string(),
            });
        };
        if self.peek() == Some(&Token::Slash) {
            self.next();
            let dpos = self.pos();
            let Some(Token::Number(den)) = self.next() else {
                return Err(ParseError::Syntax {
                    pos: dpos,
                    msg: "expected a denominator after `/`".to_string(),
                });
            };
            if den.is_zero() {
                return Err(ParseError::Syntax {
                    pos: dpos,
                    msg: "denominator must be positive".to_string(),
                });
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    /// One signed term, added into the accumulator.
    fn parse_term(&mut self, sign: bool, acc: &mut CohClass) -> Result<(), ParseError> {
        let signed = |r: Rational| if sign { -r } else { r };
        match self.peek() {
            Some(Token::Number(_)) => {
                let coeff = self.parse_rational()?;
                // Optional `*`, optional symbol.
                let star = self.peek() == Some(&Token::Star);
                if star {
                    self.next();
                }
                match self.peek() {
                    Some(Token::Ident(_)) => {
                        let pos = self.pos();
                        let Some(Token::Ident(name)) = self.next() else {
                            unreachable!()
                        };
                        apply_symbol(acc, &lookup_symbol(&name, pos)?, &signed(coeff));
                        Ok(())
                    }
                    _ if star => Err(ParseError::Syntax {
                        pos: self.pos(),
                        msg: "expected a symbol after `*`".to_string(),
                    }),
                    _ => {
                        // Bare rational: a multiple of `one`.
                        acc.rank += signed(coeff);
                        Ok(())
                    }
                }
            }
            Some(Token::Ident(_)) => {
                let pos = self.pos();
                let Some(Token::Ident(name)) = self.next() else {
                    unreachable!()
                };
                apply_symbol(acc, &lookup_symbol(&name, pos)?, &signed(Rational::one()));
                Ok(())
            }
            _ => Err(ParseError::Syntax {
                pos: self.pos(),
                msg: "expected a term".to_string(),
            }),
        }
    }
}

fn apply_symbol(acc: &mut CohClass, sym: &SymbolValue, coeff: &Rational) {
    match sym {
        SymbolValue::One => acc.rank += coeff,
        SymbolValue::Pt => acc.point += coeff,
        SymbolValue::Div(d) => acc.div += &d.scale(coeff),
    }
}

/// Parses a class expression into a [`CohClass`].
pub fn parse_class(text: &str) -> Result<CohClass, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        index: 0,
        end: text.len(),
    };
    let mut acc = CohClass::zero();

    // Leading sign.
    let mut sign = false;
    match parser.peek() {
        Some(Token::Plus) => {
            parser.next();
        }
        Some(Token::Minus) => {
            parser.next();
            sign = true;
        }
        _ => {}
    }
    parser.parse_term(sign, &mut acc)?;
    loop {
        match parser.peek() {
            None => break,
            Some(Token::Plus) => {
                parser.next();
                parser.parse_term(false, &mut acc)?;
            }
            Some(Token::Minus) => {
                parser.next();
                parser.parse_term(true, &mut acc)?;
            }
            Some(_) => {
                return Err(ParseError::Syntax {
                    pos: parser.pos(),
                    msg: "expected `+` or `-`".to_string(),
                })
            }
        }
    }
    Ok(acc)
}

fn push_term(out: &mut String, coeff: &Rational, symbol: &str) {
    if !out.is_empty() {
        out.push_str(if coeff.is_negative() { " - " } else { " + " });
    } else if coeff.is_negative() {
        out.push('-');
    }
    let mag = coeff.abs();
    if mag.is_one() {
        out.push_str(symbol);
    } else if mag.is_integer() {
        out.push_str(&format!("{}{}", mag, symbol));
    } else {
        out.push_str(&format!("{} {}", mag, symbol));
    }
}

/// Prints a class in canonical form.
///
/// Ordering: `one` term, `e1..e9` terms, the `f` (or `l`) term, then
/// `pt`.  The `f` symbol is chosen over raw `l` coordinates exactly
/// when it yields strictly fewer printed terms; parsing the output
/// returns the original class.
pub fn format_class(c: &CohClass) -> String {
    let mut out = String::new();
    if !c.rank.is_zero() {
        push_term(&mut out, &c.rank, "one");
    }

    let l_coeff = c.div.coeff(0).clone();
    // f-form: div = (l_coeff / 3) f + remainder with no l component.
    let f_scale = &l_coeff / Rational::from_integer(BigInt::from(3));
    let rem = &c.div - &named_class(NamedClass::F).scale(&f_scale);
    let raw_terms = (0..H2_RANK).filter(|&i| !c.div.coeff(i).is_zero()).count();
    let f_terms = (1..H2_RANK).filter(|&i| !rem.coeff(i).is_zero()).count()
        + usize::from(!f_scale.is_zero());
    let use_f = !l_coeff.is_zero() && f_terms < raw_terms;

    if use_f {
        for i in 1..H2_RANK {
            if !rem.coeff(i).is_zero() {
                push_term(&mut out, rem.coeff(i), &format!("e{}", i));
            }
        }
        push_term(&mut out, &f_scale, "f");
    } else {
        for i in 1..H2_RANK {
            if !c.div.coeff(i).is_zero() {
                push_term(&mut out, c.div.coeff(i), &format!("e{}", i));
            }
        }
        if !l_coeff.is_zero() {
            push_term(&mut out, &l_coeff, "l");
        }
    }

    if !c.point.is_zero() {
        push_term(&mut out, &c.point, "pt");
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical form of a pure degree-two class.
pub fn format_h2(d: &H2Class) -> String {
    format_class(&CohClass::from_div(d.clone()))
}
