use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use super::node::{node_key, parse_node_key, Node};
use super::LambdaError;

const RESERVED: &[char] = &['(', ')', '[', ']', ',', '@'];
const MAX_DEPTH: usize = 64;

/// An element of some carrier set `B(η)`.
///
/// Transformations build structured atoms: `Tagged` pairs an atom with a node
/// (`(x@0.1)`), `Seq` is a finite sequence (`[x,y]`). Both have a canonical
/// string form, which is also the serialized form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Label(String),
    Tagged(Box<Atom>, Node),
    Seq(Vec<Atom>),
}

impl Atom {
    pub fn label(s: impl Into<String>) -> Atom {
        Atom::Label(s.into())
    }

    pub fn tagged(atom: Atom, tag: Node) -> Atom {
        Atom::Tagged(Box::new(atom), tag)
    }

    pub fn parse(s: &str) -> Result<Atom, LambdaError> {
        let mut p = Parser { src: s, pos: 0 };
        let atom = p.atom(0)?;
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(atom)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Label(s) => f.write_str(s),
            Atom::Tagged(a, tag) => write!(f, "({a}@{})", node_key(tag)),
            Atom::Seq(items) => {
                f.write_str("[")?;
                for (i, a) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl FromStr for Atom {
    type Err = LambdaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Atom::parse(s)
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Atom::parse(&s).map_err(de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> LambdaError {
        LambdaError::InvalidAtom { input: self.src.to_string(), position: self.pos, reason: reason.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), LambdaError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn atom(&mut self, depth: usize) -> Result<Atom, LambdaError> {
        if depth > MAX_DEPTH {
            return Err(self.error("nesting too deep"));
        }
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.atom(depth + 1)?;
                self.expect('@')?;
                let start = self.pos;
                let end = self.src[start..].find(')').map(|i| start + i).ok_or_else(|| self.error("unclosed tag"))?;
                let tag = parse_node_key(&self.src[start..end]).map_err(|_| self.error("bad node key in tag"))?;
                self.pos = end + 1;
                Ok(Atom::tagged(inner, tag))
            }
            Some('[') => {
                self.pos += 1;
                let mut items = Vec::new();
                if self.peek() == Some(']') {
                    self.pos += 1;
                    return Ok(Atom::Seq(items));
                }
                loop {
                    items.push(self.atom(depth + 1)?);
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(']') => {
                            self.pos += 1;
                            return Ok(Atom::Seq(items));
                        }
                        _ => return Err(self.error("expected ',' or ']'")),
                    }
                }
            }
            _ => {
                let rest = &self.src[self.pos..];
                let len = rest.find(RESERVED).unwrap_or(rest.len());
                if len == 0 {
                    return Err(self.error("empty label"));
                }
                self.pos += len;
                Ok(Atom::Label(rest[..len].to_string()))
            }
        }
    }
}
