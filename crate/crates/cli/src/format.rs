//! The line-oriented workspace text format.
//!
//! Files declare `convention open=downsets` first (the parser rejects
//! anything else), then blocks:
//!
//! ```text
//! group NAME table = [[0,1],[1,0]]
//! group NAME perm-generators = [[1,0,3,2]]
//! space NAME points = N relations = [(0,2),(1,3)]
//! action NAME group = G space = X images = {1: [1,0,3,2]}
//! map NAME from = A to = B hom = [0,1] points = [0,1,2,3]
//! span NAME left = M1 right = M2
//! bibundle NAME left = A right = B points = N relations = [...]
//!          p = [...] w = [...] left-action = {..} right-action = {..}
//! ```
//!
//! All integers are 0-based; `#` starts a comment; relation pairs `(i, j)`
//! declare `i <= j`; `images` lists the permutation of any generating set
//! of group elements (the rest is derived multiplicatively).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("line {line}: unknown reference `{name}`")]
    UnknownReference { line: usize, name: String },
    #[error("line {line}: definition `{name}` fails validation: {message}")]
    Validation {
        line: usize,
        name: String,
        message: String,
    },
    #[error("file must declare `convention open=downsets` before any definition")]
    MissingConvention,
    #[error("line {line}: duplicate name `{name}`")]
    DuplicateName { line: usize, name: String },
}

/// A parsed value: integers, lists, pairs and keyed permutation maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(usize),
    List(Vec<Value>),
    Pair(usize, usize),
    Dict(Vec<(usize, Vec<usize>)>),
}

impl Value {
    pub fn as_int(&self) -> Option<usize> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_int_list(&self) -> Option<Vec<usize>> {
        match self {
            Value::List(items) => items.iter().map(|v| v.as_int()).collect(),
            _ => None,
        }
    }

    pub fn as_table(&self) -> Option<Vec<Vec<usize>>> {
        match self {
            Value::List(items) => items.iter().map(|v| v.as_int_list()).collect(),
            _ => None,
        }
    }

    pub fn as_pairs(&self) -> Option<Vec<(usize, usize)>> {
        match self {
            Value::List(items) => items
                .iter()
                .map(|v| match v {
                    Value::Pair(a, b) => Some((*a, *b)),
                    _ => None,
                })
                .collect(),
            _ => None,
        }
    }

    pub fn as_dict(&self) -> Option<&[(usize, Vec<usize>)]> {
        match self {
            Value::Dict(d) => Some(d),
            _ => None,
        }
    }
}

/// One block of the file: kind, name, and `key = value` fields in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub line: usize,
    pub kind: String,
    pub name: String,
    pub fields: Vec<(String, Field)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Field {
    Value(Value),
    Name(String),
}

impl Block {
    pub fn field(&self, key: &str) -> Option<&Field> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
    }

    pub fn value(&self, key: &str) -> Option<&Value> {
        match self.field(key) {
            Some(Field::Value(v)) => Some(v),
            _ => None,
        }
    }

    pub fn name_field(&self, key: &str) -> Option<&str> {
        match self.field(key) {
            Some(Field::Name(n)) => Some(n.as_str()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(usize),
    Sym(char),
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<(usize, Tok)>, FormatError> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let col = i + 1;
        if c.is_ascii_digit() {
            let mut n = 0usize;
            while i < chars.len() && chars[i].is_ascii_digit() {
                n = n * 10 + (chars[i] as usize - '0' as usize);
                i += 1;
            }
            out.push((col, Tok::Int(n)));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-')
            {
                s.push(chars[i]);
                i += 1;
            }
            out.push((col, Tok::Ident(s)));
        } else if "[](){},:=".contains(c) {
            out.push((col, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(FormatError::Syntax {
                line: line_no,
                col,
                message: format!("unexpected character `{}`", c),
            });
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [(usize, Tok)],
    at: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.at)
            .or_else(|| self.toks.last())
            .map(|(c, _)| *c)
            .unwrap_or(1)
    }

    fn err(&self, message: impl Into<String>) -> FormatError {
        FormatError::Syntax {
            line: self.line,
            col: self.col(),
            message: message.into(),
        }
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t);
        self.at += 1;
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<(), FormatError> {
        match self.next() {
            Some(Tok::Sym(s)) if *s == c => Ok(()),
            _ => {
                self.at -= 1;
                Err(self.err(format!("expected `{}`", c)))
            }
        }
    }

    fn expect_int(&mut self) -> Result<usize, FormatError> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(*n),
            _ => {
                self.at -= 1;
                Err(self.err("expected an integer"))
            }
        }
    }

    fn expect_ident(&mut self) -> Result<String, FormatError> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s.clone()),
            _ => {
                self.at -= 1;
                Err(self.err("expected a name"))
            }
        }
    }

    fn parse_value(&mut self) -> Result<Value, FormatError> {
        match self.peek() {
            Some(Tok::Int(_)) => Ok(Value::Int(self.expect_int()?)),
            Some(Tok::Sym('[')) => {
                self.next();
                let mut items = Vec::new();
                loop {
                    if let Some(Tok::Sym(']')) = self.peek() {
                        self.next();
                        break;
                    }
                    items.push(self.parse_value()?);
                    match self.peek() {
                        Some(Tok::Sym(',')) => {
                            self.next();
                        }
                        Some(Tok::Sym(']')) => {}
                        _ => return Err(self.err("expected `,` or `]`")),
                    }
                }
                Ok(Value::List(items))
            }
            Some(Tok::Sym('(')) => {
                self.next();
                let a = self.expect_int()?;
                self.expect_sym(',')?;
                let b = self.expect_int()?;
                self.expect_sym(')')?;
                Ok(Value::Pair(a, b))
            }
            Some(Tok::Sym('{')) => {
                self.next();
                let mut entries = Vec::new();
                loop {
                    if let Some(Tok::Sym('}')) = self.peek() {
                        self.next();
                        break;
                    }
                    let key = self.expect_int()?;
                    self.expect_sym(':')?;
                    let value = self.parse_value()?;
                    let list = value
                        .as_int_list()
                        .ok_or_else(|| self.err("expected a permutation list"))?;
                    entries.push((key, list));
                    match self.peek() {
                        Some(Tok::Sym(',')) => {
                            self.next();
                        }
                        Some(Tok::Sym('}')) => {}
                        _ => return Err(self.err("expected `,` or `}`")),
                    }
                }
                Ok(Value::Dict(entries))
            }
            _ => Err(self.err("expected a value")),
        }
    }
}

/// Keys whose right-hand side is a reference to a prior definition.
fn is_reference_key(kind: &str, key: &str) -> bool {
    matches!(
        (kind, key),
        ("action", "group")
            | ("action", "space")
            | ("map", "from")
            | ("map", "to")
            | ("span", "left")
            | ("span", "right")
            | ("bibundle", "left")
            | ("bibundle", "right")
    )
}

/// Parses the physical lines of a workspace file into blocks, enforcing the
/// convention header.
pub fn parse_blocks(text: &str) -> Result<Vec<Block>, FormatError> {
    let mut blocks = Vec::new();
    let mut convention_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = tokenize(raw, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            toks: &toks,
            at: 0,
            line: line_no,
        };
        let kind = cur.expect_ident()?;
        if kind == "convention" {
            let key = cur.expect_ident()?;
            cur.expect_sym('=')?;
            let value = cur.expect_ident()?;
            if key != "open" || value != "downsets" {
                return Err(cur.err("the only supported convention is `open=downsets`"));
            }
            convention_seen = true;
            continue;
        }
        if !convention_seen {
            return Err(FormatError::MissingConvention);
        }
        if !matches!(
            kind.as_str(),
            "group" | "space" | "action" | "map" | "span" | "bibundle"
        ) {
            return Err(cur.err(format!("unknown block kind `{}`", kind)));
        }
        let name = cur.expect_ident()?;
        let mut fields = Vec::new();
        while cur.peek().is_some() {
            let key = cur.expect_ident()?;
            cur.expect_sym('=')?;
            let field = if is_reference_key(&kind, &key) {
                Field::Name(cur.expect_ident()?)
            } else {
                Field::Value(cur.parse_value()?)
            };
            fields.push((key, field));
        }
        blocks.push(Block {
            line: line_no,
            kind,
            name,
            fields,
        });
    }
    if !convention_seen {
        return Err(FormatError::MissingConvention);
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_blocks_and_values() {
        let text = "\
# comment
convention open=downsets
group z2 table = [[0,1],[1,0]]
space c2 points = 4 relations = [(0,2),(1,2),(1,3),(0,3)]
action swap group = z2 space = c2 images = {1: [1,0,3,2]}
";
        let blocks = parse_blocks(text).unwrap();
        assert_eq!(blocks.len(), 3);
        assert_eq!(blocks[0].kind, "group");
        assert_eq!(
            blocks[0].value("table").unwrap().as_table().unwrap(),
            vec![vec![0, 1], vec![1, 0]]
        );
        assert_eq!(blocks[1].value("points").unwrap().as_int(), Some(4));
        assert_eq!(blocks[2].name_field("group"), Some("z2"));
        assert_eq!(
            blocks[2].value("images").unwrap().as_dict().unwrap()[0],
            (1, vec![1, 0, 3, 2])
        );
    }

    #[test]
    fn requires_convention() {
        let err = parse_blocks("group z1 table = [[0]]\n").unwrap_err();
        assert_eq!(err, FormatError::MissingConvention);
    }

    #[test]
    fn reports_position() {
        let err = parse_blocks("convention open=downsets\ngroup g table = [[0,]\n").unwrap_err();
        match err {
            FormatError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
