use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Vertex identity that survives iterated subdivision: either an original
/// token or the barycenter of a face, named by the set of its vertices.
///
/// The textual form is `a` for a token and `{a|{a|b}}` for nested
/// barycenters, with members sorted by their own textual form. The barycenter
/// of a single vertex is that vertex. Token characters `{`, `}`, `|` and `\`
/// are escaped with a backslash.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceName {
    Vertex(String),
    Barycenter(Vec<FaceName>),
}

impl FaceName {
    pub fn vertex(token: impl Into<String>) -> Self {
        FaceName::Vertex(token.into())
    }

    /// Canonical barycenter of the given face members.
    pub fn barycenter(members: impl IntoIterator<Item = FaceName>) -> Self {
        let mut keyed: Vec<(String, FaceName)> =
            members.into_iter().map(|m| (m.to_string(), m)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        match keyed.len() {
            1 => keyed.pop().unwrap().1,
            _ => FaceName::Barycenter(keyed.into_iter().map(|(_, m)| m).collect()),
        }
    }

    /// Interprets a token: canonical barycenter text parses as such, anything
    /// else becomes a plain vertex.
    pub fn from_token(token: &str) -> Self {
        token
            .parse()
            .unwrap_or_else(|_| FaceName::Vertex(token.to_string()))
    }

    /// Nesting depth: 0 for tokens.
    pub fn depth(&self) -> usize {
        match self {
            FaceName::Vertex(_) => 0,
            FaceName::Barycenter(ms) => 1 + ms.iter().map(FaceName::depth).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for FaceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceName::Vertex(t) => {
                for c in t.chars() {
                    if matches!(c, '{' | '}' | '|' | '\\') {
                        write!(f, "\\")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            FaceName::Barycenter(ms) => {
                write!(f, "{{")?;
                for (i, m) in ms.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl FromStr for FaceName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        let mut pos = 0;
        let name =
            parse_name(&chars, &mut pos).ok_or_else(|| Error::InvalidFaceName(s.to_string()))?;
        if pos != chars.len() {
            return Err(Error::InvalidFaceName(s.to_string()));
        }
        Ok(name)
    }
}

fn parse_name(c: &[char], pos: &mut usize) -> Option<FaceName> {
    if c.get(*pos) == Some(&'{') {
        *pos += 1;
        let mut members = vec![parse_name(c, pos)?];
        loop {
            match c.get(*pos)? {
                '|' => {
                    *pos += 1;
                    members.push(parse_name(c, pos)?);
                }
                '}' => {
                    *pos += 1;
                    break;
                }
                _ => return None,
            }
        }
        if members.len() < 2 {
            return None;
        }
        Some(FaceName::barycenter(members))
    } else {
        let mut token = String::new();
        while let Some(&ch) = c.get(*pos) {
            match ch {
                '{' | '}' | '|' => break,
                '\\' => {
                    token.push(*c.get(*pos + 1)?);
                    *pos += 2;
                }
                _ => {
                    token.push(ch);
                    *pos += 1;
                }
            }
        }
        if token.is_empty() {
            None
        } else {
            Some(FaceName::Vertex(token))
        }
    }
}
