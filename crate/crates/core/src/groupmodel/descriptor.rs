use std::fmt;

use serde::{Deserialize, Serialize};

use super::GroupError;
use crate::algebra::Sign;

/// Flavor of one rank-2 factor: which involution generates `L` together
/// with `s` on that factor.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Plus,
    Minus,
}

impl Flavor {
    pub fn sign(self) -> Sign {
        match self {
            Flavor::Plus => Sign::Plus,
            Flavor::Minus => Sign::Minus,
        }
    }
}

/// Canonical name `B^ε(m)` of an isomorphism class: `m/2 - 1` plus factors
/// followed by one factor of flavor `ε`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GroupDescriptor {
    rank: usize,
    sign: Sign,
}

impl GroupDescriptor {
    pub fn new(rank: usize, sign: Sign) -> Result<Self, GroupError> {
        if rank == 0 || rank % 2 == 1 {
            return Err(GroupError::OddRank(rank));
        }
        Ok(GroupDescriptor { rank, sign })
    }

    /// Accepts only canonical layouts: at most one `minus`, placed last.
    pub fn from_flavors(flavors: &[Flavor]) -> Result<Self, GroupError> {
        if flavors.is_empty() {
            return Err(GroupError::OddRank(0));
        }
        let minus = flavors.iter().filter(|&&f| f == Flavor::Minus).count();
        if minus > 1 {
            return Err(GroupError::MultipleMinus(minus));
        }
        if minus == 1 && flavors.last() != Some(&Flavor::Minus) {
            return Err(GroupError::MinusNotLast);
        }
        let sign = if minus == 1 { Sign::Minus } else { Sign::Plus };
        Self::new(2 * flavors.len(), sign)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn flavors(&self) -> Vec<Flavor> {
        let k = self.rank / 2;
        let mut f = vec![Flavor::Plus; k];
        if self.sign == Sign::Minus {
            f[k - 1] = Flavor::Minus;
        }
        f
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}({})", self.sign, self.rank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

/// Parse `B+(m)`, `B-(m)`, `B+m` or `B-m`.
pub fn parse_descriptor(input: &str) -> Result<GroupDescriptor, ParseError> {
    let mut p = Parser { src: input, pos: 0 };
    p.skip_ws();
    let d = p.descriptor()?;
    p.skip_ws();
    p.expect_end()?;
    Ok(d)
}

/// Parse `EXPR * EXPR * ...`; the factors are composed left to right.
pub fn parse_expression(input: &str) -> Result<Vec<GroupDescriptor>, ParseError> {
    let mut p = Parser { src: input, pos: 0 };
    let mut out = Vec::new();
    loop {
        p.skip_ws();
        out.push(p.descriptor()?);
        p.skip_ws();
        if p.peek() == Some('*') {
            p.pos += 1;
        } else {
            break;
        }
    }
    p.expect_end()?;
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += self.peek().map_or(0, char::len_utf8);
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, message: message.into() })
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected '{c}'")),
        }
    }

    fn descriptor(&mut self) -> Result<GroupDescriptor, ParseError> {
        if self.peek() != Some('B') {
            return self.err("expected 'B'");
        }
        self.pos += 1;
        let sign = match self.peek() {
            Some('+') => Sign::Plus,
            Some('-') => Sign::Minus,
            _ => return self.err("expected '+' or '-'"),
        };
        self.pos += 1;
        let paren = self.peek() == Some('(');
        if paren {
            self.pos += 1;
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected rank");
        }
        let rank: usize = match self.src[start..self.pos].parse() {
            Ok(r) => r,
            Err(_) => {
                self.pos = start;
                return self.err("rank out of range");
            }
        };
        if paren {
            if self.peek() != Some(')') {
                return self.err("expected ')'");
            }
            self.pos += 1;
        }
        GroupDescriptor::new(rank, sign).or_else(|_| {
            self.pos = start;
            self.err(format!("rank must be a positive even number, got {rank}"))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_spellings() {
        let a = parse_descriptor("B+(4)").unwrap();
        let b = parse_descriptor("B+4").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "B+(4)");
        assert_eq!(parse_descriptor(" B-(2) ").unwrap().sign(), Sign::Minus);
    }

    #[test]
    fn parses_compositions() {
        let e = parse_expression("B+(2) * B-(2)*B-2").unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(e[2], GroupDescriptor::new(2, Sign::Minus).unwrap());
    }

    #[test]
    fn reports_positions() {
        assert_eq!(parse_descriptor("C+(2)").unwrap_err().position, 0);
        assert_eq!(parse_descriptor("B*(2)").unwrap_err().position, 1);
        assert_eq!(parse_descriptor("B+(3)").unwrap_err().position, 3);
        assert_eq!(parse_descriptor("B+(2").unwrap_err().position, 4);
        assert_eq!(parse_expression("B+2 * ").unwrap_err().position, 6);
        assert_eq!(parse_expression("B+2 B-2").unwrap_err().position, 4);
    }

    #[test]
    fn canonical_flavors() {
        let d = GroupDescriptor::new(6, Sign::Minus).unwrap();
        assert_eq!(d.flavors(), vec![Flavor::Plus, Flavor::Plus, Flavor::Minus]);
        assert_eq!(GroupDescriptor::from_flavors(&d.flavors()).unwrap(), d);
        assert!(matches!(
            GroupDescriptor::from_flavors(&[Flavor::Minus, Flavor::Minus]),
            Err(GroupError::MultipleMinus(2))
        ));
        assert!(matches!(GroupDescriptor::from_flavors(&[Flavor::Minus, Flavor::Plus]), Err(GroupError::MinusNotLast)));
        assert!(matches!(GroupDescriptor::new(3, Sign::Plus), Err(GroupError::OddRank(3))));
    }
}
