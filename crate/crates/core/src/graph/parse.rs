use thiserror::Error;

use super::AromaticForest;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }
}

/// Parses the bracket grammar. Whitespace is ignored everywhere, and children
/// need not be sorted. Nodes are numbered in order of their opening bracket.
pub(super) fn parse(text: &str) -> Result<AromaticForest, ParseError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        successor: Vec::new(),
    };
    loop {
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b'[') => {
                p.tree()?;
            }
            Some(b'(') => p.aroma()?,
            Some(c) => {
                return Err(ParseError::new(
                    p.pos,
                    format!(
                        "expected '[' or '(' to start a component, found {:?}",
                        c as char
                    ),
                ))
            }
        }
    }
    Ok(AromaticForest {
        successor: p.successor,
    })
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    successor: Vec<Option<usize>>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(ParseError::new(
                self.pos,
                format!("expected {:?}, found {:?}", c as char, b as char),
            )),
            None => Err(ParseError::new(
                self.pos,
                format!("expected {:?}, found end of input", c as char),
            )),
        }
    }

    fn new_node(&mut self) -> usize {
        self.successor.push(None);
        self.successor.len() - 1
    }

    /// Children up to (not including) the closing delimiter; each child
    /// points at `parent`.
    fn children(&mut self, parent: usize) -> Result<(), ParseError> {
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'[') => {
                    let child = self.tree()?;
                    self.successor[child] = Some(parent);
                }
                _ => return Ok(()),
            }
        }
    }

    fn tree(&mut self) -> Result<usize, ParseError> {
        self.expect(b'[')?;
        let v = self.new_node();
        self.children(v)?;
        self.expect(b']')?;
        Ok(v)
    }

    fn aroma(&mut self) -> Result<(), ParseError> {
        let open = self.pos;
        self.expect(b'(')?;
        let mut cycle = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'{') => {
                    self.pos += 1;
                    let v = self.new_node();
                    self.children(v)?;
                    self.expect(b'}')?;
                    cycle.push(v);
                }
                _ => break,
            }
        }
        if cycle.is_empty() {
            return Err(ParseError::new(
                open,
                "aroma declares a cycle with zero nodes",
            ));
        }
        self.expect(b')')?;
        for (i, &v) in cycle.iter().enumerate() {
            self.successor[v] = Some(cycle[(i + 1) % cycle.len()]);
        }
        Ok(())
    }
}
