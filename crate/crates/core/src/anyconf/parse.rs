use super::{Diagnostic, Table, Value};

const MAX_DEPTH: usize = 256;

/// Parses an AnyLite document.
///
/// On failure the returned list holds at least one error-severity diagnostic;
/// no partial tree is produced.
pub fn parse(source: &str) -> Result<Value, Vec<Diagnostic>> {
    let mut p = Parser::new(source);
    let result = p.document();
    result.map_err(|d| vec![d])
}

#[derive(Clone, Copy)]
struct Pos {
    offset: usize,
    line: usize,
    column: usize,
}

struct Parser<'a> {
    src: &'a str,
    pos: Pos,
    depth: usize,
}

type PResult<T> = Result<T, Diagnostic>;

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn describe(c: Option<char>) -> String {
    match c {
        None => "end of input".to_owned(),
        Some(c) if c.is_control() => format!("character U+{:04X}", c as u32),
        Some(c) => format!("`{c}`"),
    }
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            pos: Pos {
                offset: 0,
                line: 1,
                column: 1,
            },
            depth: 0,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos.offset..].chars().next()
    }

    fn peek_second(&self) -> Option<char> {
        let mut it = self.src[self.pos.offset..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos.offset += c.len_utf8();
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn err_at(&self, at: Pos, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::error(at.line, at.column, msg)
    }

    fn err(&self, msg: impl Into<String>) -> Diagnostic {
        self.err_at(self.pos, msg)
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        self.err(format!(
            "unexpected {}, expected {expected}",
            describe(self.peek())
        ))
    }

    /// Skips whitespace and comments.
    fn skip_trivia(&mut self) -> PResult<()> {
        loop {
            match self.peek() {
                Some(' ' | '\t' | '\n' | '\r') => {
                    self.bump();
                }
                Some('/') => match self.peek_second() {
                    Some('/') => {
                        while let Some(c) = self.peek() {
                            if c == '\n' {
                                break;
                            }
                            self.bump();
                        }
                    }
                    Some('*') => {
                        let start = self.pos;
                        self.bump();
                        self.bump();
                        loop {
                            match self.bump() {
                                None => {
                                    return Err(self.err_at(start, "unterminated block comment"))
                                }
                                Some('*') if self.peek() == Some('/') => {
                                    self.bump();
                                    break;
                                }
                                Some(_) => {}
                            }
                        }
                    }
                    _ => return Err(self.err("stray `/`")),
                },
                _ => return Ok(()),
            }
        }
    }

    fn document(&mut self) -> PResult<Value> {
        self.skip_trivia()?;
        let v = self.value()?;
        self.skip_trivia()?;
        if self.peek().is_some() {
            return Err(self.err(format!(
                "unexpected {} after end of document",
                describe(self.peek())
            )));
        }
        Ok(v)
    }

    fn value(&mut self) -> PResult<Value> {
        match self.peek() {
            Some('{') => self.nested(Self::table),
            Some('[') => self.nested(Self::list),
            Some('"') => self.string().map(Value::Text),
            Some(c) if c == '-' || c.is_ascii_digit() => self.number(),
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                let word = self.identifier();
                match word {
                    "null" => Ok(Value::Null),
                    "true" => Ok(Value::Bool(true)),
                    "false" => Ok(Value::Bool(false)),
                    "NaN" | "Infinity" => Err(self.err_at(
                        start,
                        format!("non-finite numeric literal `{word}`"),
                    )),
                    _ => Err(self.err_at(start, format!("unexpected identifier `{word}`"))),
                }
            }
            _ => Err(self.unexpected("a value")),
        }
    }

    fn nested(&mut self, f: fn(&mut Self) -> PResult<Value>) -> PResult<Value> {
        if self.depth >= MAX_DEPTH {
            return Err(self.err(format!("nesting deeper than {MAX_DEPTH} levels")));
        }
        self.depth += 1;
        let v = f(self);
        self.depth -= 1;
        v
    }

    fn identifier(&mut self) -> &'a str {
        let start = self.pos.offset;
        while matches!(self.peek(), Some(c) if is_ident_continue(c)) {
            self.bump();
        }
        &self.src[start..self.pos.offset]
    }

    fn list(&mut self) -> PResult<Value> {
        self.bump(); // [
        let mut items = Vec::new();
        loop {
            self.skip_trivia()?;
            if self.peek() == Some(']') {
                self.bump();
                return Ok(Value::List(items));
            }
            items.push(self.value()?);
            self.skip_trivia()?;
            match self.peek() {
                Some(',') => {
                    self.bump();
                }
                Some(']') => {}
                _ => return Err(self.unexpected("`,` or `]`")),
            }
        }
    }

    fn table(&mut self) -> PResult<Value> {
        self.bump(); // {
        let mut table = Table::new();
        loop {
            self.skip_trivia()?;
            let key_pos = self.pos;
            let key = match self.peek() {
                Some('}') => {
                    self.bump();
                    return Ok(Value::Table(table));
                }
                Some('"') => self.string()?,
                Some(c) if is_ident_start(c) => self.identifier().to_owned(),
                _ => return Err(self.unexpected("a key or `}`")),
            };
            self.skip_trivia()?;
            match self.peek() {
                Some(':' | '=') => {
                    self.bump();
                }
                _ => return Err(self.unexpected("`:` or `=`")),
            }
            self.skip_trivia()?;
            let value = self.value()?;
            if table.contains_key(&key) {
                return Err(self.err_at(key_pos, format!("duplicate key `{key}`")));
            }
            table.insert(key, value);
            self.skip_trivia()?;
            match self.peek() {
                Some(',') => {
                    self.bump();
                }
                Some('}') => {}
                _ => return Err(self.unexpected("`,` or `}`")),
            }
        }
    }

    fn number(&mut self) -> PResult<Value> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.bump();
        }
        match self.peek() {
            Some('0') => {
                self.bump();
            }
            Some('1'..='9') => {
                self.digits();
            }
            Some(c) if is_ident_start(c) => {
                let word = self.identifier();
                if word == "Infinity" {
                    return Err(self.err_at(start, "non-finite numeric literal `-Infinity`"));
                }
                return Err(self.err_at(start, "malformed number"));
            }
            _ => return Err(self.unexpected("a digit")),
        }
        if self.peek() == Some('.') {
            self.bump();
            if !matches!(self.peek(), Some('0'..='9')) {
                return Err(self.unexpected("a digit after `.`"));
            }
            self.digits();
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            self.bump();
            if matches!(self.peek(), Some('+' | '-')) {
                self.bump();
            }
            if !matches!(self.peek(), Some('0'..='9')) {
                return Err(self.unexpected("a digit in exponent"));
            }
            self.digits();
        }
        let text = &self.src[start.offset..self.pos.offset];
        let n: f64 = text
            .parse()
            .map_err(|_| self.err_at(start, format!("malformed number `{text}`")))?;
        if !n.is_finite() {
            return Err(self.err_at(start, format!("non-finite numeric literal `{text}`")));
        }
        Ok(Value::Number(n))
    }

    fn digits(&mut self) {
        while matches!(self.peek(), Some('0'..='9')) {
            self.bump();
        }
    }

    fn string(&mut self) -> PResult<String> {
        let start = self.pos;
        self.bump(); // "
        let mut out = String::new();
        loop {
            let here = self.pos;
            match self.bump() {
                None => return Err(self.err_at(start, "unterminated string")),
                Some('"') => return Ok(out),
                Some('\\') => {
                    let esc = self.bump();
                    match esc {
                        Some('"') => out.push('"'),
                        Some('\\') => out.push('\\'),
                        Some('/') => out.push('/'),
                        Some('b') => out.push('\u{8}'),
                        Some('f') => out.push('\u{c}'),
                        Some('n') => out.push('\n'),
                        Some('r') => out.push('\r'),
                        Some('t') => out.push('\t'),
                        Some('u') => out.push(self.unicode_escape(here)?),
                        None => return Err(self.err_at(start, "unterminated string")),
                        Some(c) => {
                            return Err(self.err_at(here, format!("invalid escape `\\{c}`")))
                        }
                    }
                }
                Some(c) if (c as u32) < 0x20 => {
                    return Err(self.err_at(
                        here,
                        format!("unescaped control character U+{:04X} in string", c as u32),
                    ))
                }
                Some(c) => out.push(c),
            }
        }
    }

    fn hex4(&mut self, esc: Pos) -> PResult<u32> {
        let mut v = 0u32;
        for _ in 0..4 {
            let d = self
                .peek()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.err_at(esc, "invalid \\u escape"))?;
            self.bump();
            v = v * 16 + d;
        }
        Ok(v)
    }

    fn unicode_escape(&mut self, esc: Pos) -> PResult<char> {
        let hi = self.hex4(esc)?;
        let code = match hi {
            0xD800..=0xDBFF => {
                if self.peek() != Some('\\') || self.peek_second() != Some('u') {
                    return Err(self.err_at(esc, "unpaired surrogate in \\u escape"));
                }
                self.bump();
                self.bump();
                let lo = self.hex4(esc)?;
                if !(0xDC00..=0xDFFF).contains(&lo) {
                    return Err(self.err_at(esc, "unpaired surrogate in \\u escape"));
                }
                0x10000 + ((hi - 0xD800) << 10) + (lo - 0xDC00)
            }
            0xDC00..=0xDFFF => return Err(self.err_at(esc, "unpaired surrogate in \\u escape")),
            _ => hi,
        };
        char::from_u32(code).ok_or_else(|| self.err_at(esc, "invalid \\u escape"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(pairs: &[(&str, Value)]) -> Value {
        Value::Table(pairs.iter().cloned().map(|(k, v)| (k.to_owned(), v)).collect())
    }

    fn first_error(src: &str) -> Diagnostic {
        parse(src).unwrap_err().remove(0)
    }

    #[test]
    fn plain_json_table() {
        assert_eq!(parse(r#"{"a": 1}"#).unwrap(), table(&[("a", 1.0.into())]));
    }

    #[test]
    fn extensions() {
        let v = parse("{ taskDuration = 6.0, // seconds\n }").unwrap();
        assert_eq!(v, table(&[("taskDuration", 6.0.into())]));

        let v = parse("/* lead */ [1, /* mid */ 2, ] // tail").unwrap();
        assert_eq!(v, Value::from(vec![1.0, 2.0]));

        let v = parse("{_x1: null, \"quoted key\" = true}").unwrap();
        assert_eq!(
            v,
            table(&[("_x1", Value::Null), ("quoted key", Value::Bool(true))])
        );
    }

    #[test]
    fn scalars_and_escapes() {
        assert_eq!(parse("-0.5e1").unwrap(), Value::Number(-5.0));
        assert_eq!(
            parse(r#""a\né😀""#).unwrap(),
            Value::Text("a\n\u{e9}\u{1F600}".into())
        );
        assert_eq!(parse("  false ").unwrap(), Value::Bool(false));
    }

    #[test]
    fn duplicate_key_is_error() {
        let d = first_error("{a: 1,\n  a: 2}");
        assert!(d.message.contains("duplicate key"));
        assert_eq!((d.line, d.column), (2, 3));
    }

    #[test]
    fn unterminated_things() {
        let d = first_error("{a: 1 /* open");
        assert!(d.message.contains("unterminated block comment"));
        assert_eq!((d.line, d.column), (1, 7));

        let d = first_error("\n  \"abc");
        assert!(d.message.contains("unterminated string"));
        assert_eq!((d.line, d.column), (2, 3));
    }

    #[test]
    fn non_finite_numbers() {
        assert!(first_error("1e999").message.contains("non-finite"));
        assert!(first_error("[NaN]").message.contains("non-finite"));
        assert!(first_error("-Infinity").message.contains("non-finite"));
    }

    #[test]
    fn stray_tokens() {
        for src in ["", "1 2", "{a 1}", "[1,,2]", "{,}", "[1 2]", "01", "1.", "+1", "{a: b}", "/x"] {
            let errs = parse(src).unwrap_err();
            assert!(!errs.is_empty(), "{src:?} should fail");
        }
        let d = first_error("[1,\n 2,\n @]");
        assert_eq!((d.line, d.column), (3, 2));
    }

    #[test]
    fn end_of_input_position() {
        let d = first_error("[1,");
        assert_eq!((d.line, d.column), (1, 4));
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowed() {
        let src = "[".repeat(10_000);
        assert!(first_error(&src).message.contains("nesting"));
    }
}
