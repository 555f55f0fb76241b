//! Minimal probability query grammar.
//!
//! ```text
//! query          = "P" "(" names [ "|" assignments ] ")" ;
//! counterfactual = names "|" "do" "(" assignments ")" ;
//! names          = name { "," name } ;
//! assignments    = assignment { "," assignment } ;
//! assignment     = name "=" value ;
//! ```
//!
//! Names and values are runs of characters other than whitespace and
//! `, | ( ) =`. Whitespace between tokens is ignored.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for QueryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for QueryError {}

/// `P(targets | evidence)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub targets: Vec<String>,
    pub evidence: Vec<(String, String)>,
}

/// `targets | do(intervention)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterfactual {
    pub targets: Vec<String>,
    pub intervention: Vec<(String, String)>,
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

fn is_word(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, ',' | '|' | '(' | ')' | '=')
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            chars: text.chars().collect(),
            pos: 0,
            text,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, QueryError> {
        Err(QueryError {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), QueryError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected `{c}`, found `{found}`")),
                None => self.error(format!("expected `{c}`, found end of input")),
            }
        }
    }

    fn word(&mut self, what: &str) -> Result<String, QueryError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|&c| is_word(c)) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error(format!("expected {what}"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn names(&mut self) -> Result<Vec<String>, QueryError> {
        let mut out = vec![self.word("a variable name")?];
        while self.eat(',') {
            out.push(self.word("a variable name")?);
        }
        Ok(out)
    }

    fn assignments(&mut self) -> Result<Vec<(String, String)>, QueryError> {
        let mut out = Vec::new();
        loop {
            let name = self.word("a variable name")?;
            self.expect('=')?;
            let value = self.word("a value")?;
            out.push((name, value));
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    fn finish(&mut self) -> Result<(), QueryError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected `{c}` after the end of `{}`", self.text.trim())),
        }
    }
}

pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let mut c = Cursor::new(text);
    let head = c.word("`P(`")?;
    if head != "P" {
        c.pos -= head.chars().count();
        return c.error("queries start with `P(`");
    }
    c.expect('(')?;
    let targets = c.names()?;
    let evidence = if c.eat('|') { c.assignments()? } else { Vec::new() };
    c.expect(')')?;
    c.finish()?;
    Ok(Query { targets, evidence })
}

pub fn parse_counterfactual(text: &str) -> Result<Counterfactual, QueryError> {
    let mut c = Cursor::new(text);
    let targets = c.names()?;
    c.expect('|')?;
    let head = c.word("`do(`")?;
    if head != "do" {
        c.pos -= head.chars().count();
        return c.error("expected `do(`");
    }
    c.expect('(')?;
    let intervention = c.assignments()?;
    c.expect(')')?;
    c.finish()?;
    Ok(Counterfactual { targets, intervention })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(items: &[(&str, &str)]) -> Vec<(String, String)> {
        items.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn conditional_and_marginal_queries() {
        let q = parse_query("P(Y|A=1,L=0)").unwrap();
        assert_eq!(q.targets, ["Y"]);
        assert_eq!(q.evidence, pairs(&[("A", "1"), ("L", "0")]));
        let q = parse_query(" P ( Y , L ) ").unwrap();
        assert_eq!(q.targets, ["Y", "L"]);
        assert!(q.evidence.is_empty());
    }

    #[test]
    fn counterfactual_queries() {
        let q = parse_counterfactual("Y | do(A=1)").unwrap();
        assert_eq!(q.targets, ["Y"]);
        assert_eq!(q.intervention, pairs(&[("A", "1")]));
        let q = parse_counterfactual("Y,L|do(A=1, B=low)").unwrap();
        assert_eq!(q.intervention, pairs(&[("A", "1"), ("B", "low")]));
    }

    #[test]
    fn errors_carry_columns() {
        assert_eq!(parse_query("P(Y|A=)").unwrap_err().column, 7);
        assert_eq!(parse_query("Q(Y)").unwrap_err().column, 1);
        assert_eq!(parse_query("P(Y").unwrap_err().column, 4);
        assert_eq!(parse_query("P(Y) x").unwrap_err().column, 6);
        assert_eq!(parse_counterfactual("Y | A=1").unwrap_err().column, 5);
        assert_eq!(parse_counterfactual("Y do(A=1)").unwrap_err().column, 3);
        assert_eq!(parse_counterfactual("").unwrap_err().column, 1);
    }
}
