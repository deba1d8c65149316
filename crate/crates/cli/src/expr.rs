//! Amplitude expressions: sums and products of basis symbols and numbers.
//!
//! ```text
//! expr    := product (('+' | '-') product)*
//! product := unary (('(x)' | '*' | '/')? unary)*     juxtaposition multiplies
//! unary   := ('-' | '+') unary | atom
//! atom    := number | 'i' | 'sqrt2' | 'sqrt' '(' expr ')'
//!          | 'L' | 'R' | 'H' | 'V' | 'H_A' | 'V_A' | '(' expr ')'
//! ```
//!
//! Multiplying two states is the tensor product, so `(L+R)/sqrt2 (x) H`,
//! `(L+R) H / sqrt2` and `1/sqrt2 L H + 1/sqrt2 R H` all denote the same ket.

use cheshire_core::{tensor, Complex64, LabeledState, Path, Pol, I, ONE};

use crate::scenario_file::ParseError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Tensor,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

/// Result of evaluating a (sub)expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(Complex64),
    State(LabeledState),
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

fn tokenize(src: &str, col0: usize, line: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if chars[i..].starts_with(&['(', 'x', ')']) {
            out.push(Token { tok: Tok::Tensor, col });
            i += 3;
            continue;
        }
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, col });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent, only when followed by digits
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v: f64 = text.parse().map_err(|_| ParseError::new(line, col, format!("bad number `{text}`")))?;
            out.push(Token { tok: Tok::Num(v), col });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
            continue;
        }
        return Err(ParseError::new(line, col, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn col(&self) -> usize {
        self.peek().map_or(self.end_col, |t| t.col)
    }

    fn err(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, col, msg)
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.product()?;
        while let Some(t) = self.peek() {
            let (neg, col) = match t.tok {
                Tok::Plus => (false, t.col),
                Tok::Minus => (true, t.col),
                _ => break,
            };
            self.pos += 1;
            let rhs = self.product()?;
            let rhs = if neg { negate(rhs) } else { rhs };
            acc = add(acc, rhs).map_err(|m| self.err(col, m))?;
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek().map(|t| &t.tok), Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen))
    }

    fn product(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let Some(t) = self.peek() else { break };
            let col = t.col;
            match t.tok {
                Tok::Tensor | Tok::Star => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = mul(acc, rhs).map_err(|m| self.err(col, m))?;
                }
                Tok::Slash => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = div(acc, rhs).map_err(|m| self.err(col, m))?;
                }
                _ if self.starts_atom() => {
                    let rhs = self.unary()?;
                    acc = mul(acc, rhs).map_err(|m| self.err(col, m))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value, ParseError> {
        match self.peek().map(|t| &t.tok) {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(negate(self.unary()?))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn expect_rparen(&mut self, open: usize) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::RParen, .. }) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(self.col(), format!("unclosed `(` opened at column {open}"))),
        }
    }

    fn atom(&mut self) -> Result<Value, ParseError> {
        let Some(t) = self.peek().cloned() else {
            return Err(self.err(self.end_col, "expected a symbol, number or `(`"));
        };
        self.pos += 1;
        match t.tok {
            Tok::Num(v) => Ok(Value::Scalar(Complex64::new(v, 0.0))),
            Tok::LParen => {
                let v = self.expr()?;
                self.expect_rparen(t.col)?;
                Ok(v)
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(Value::Scalar(I)),
                "sqrt2" => Ok(Value::Scalar(Complex64::new(std::f64::consts::SQRT_2, 0.0))),
                "sqrt" => {
                    match self.peek() {
                        Some(Token { tok: Tok::LParen, col }) => {
                            let open = *col;
                            self.pos += 1;
                            let v = self.expr()?;
                            self.expect_rparen(open)?;
                            match v {
                                Value::Scalar(c) if c.im == 0.0 && c.re >= 0.0 => {
                                    Ok(Value::Scalar(Complex64::new(c.re.sqrt(), 0.0)))
                                }
                                _ => Err(self.err(t.col, "sqrt needs a non-negative real number")),
                            }
                        }
                        _ => Err(self.err(self.col(), "expected `(` after sqrt")),
                    }
                }
                _ => symbol(&name).map(Value::State).ok_or_else(|| self.err(t.col, format!("unknown symbol `{name}`"))),
            },
            other => Err(self.err(t.col, format!("unexpected {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::RParen => "`)`",
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Slash => "`/`",
        Tok::Tensor => "`(x)`",
        _ => "token",
    }
}

fn symbol(name: &str) -> Option<LabeledState> {
    Some(match name {
        "L" => LabeledState::path(Path::L),
        "R" => LabeledState::path(Path::R),
        "H" => LabeledState::pol(Pol::H),
        "V" => LabeledState::pol(Pol::V),
        "H_A" => LabeledState::ancilla(Pol::H),
        "V_A" => LabeledState::ancilla(Pol::V),
        _ => return None,
    })
}

fn negate(v: Value) -> Value {
    match v {
        Value::Scalar(c) => Value::Scalar(-c),
        Value::State(s) => Value::State(s.scale(-ONE)),
    }
}

fn add(a: Value, b: Value) -> Result<Value, String> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x + y)),
        (Value::State(x), Value::State(y)) => x.add(&y).map(Value::State).map_err(|e| e.to_string()),
        _ => Err("cannot add a number to a state".into()),
    }
}

fn mul(a: Value, b: Value) -> Result<Value, String> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x * y)),
        (Value::Scalar(x), Value::State(s)) | (Value::State(s), Value::Scalar(x)) => Ok(Value::State(s.scale(x))),
        (Value::State(x), Value::State(y)) => tensor(&x, &y).map(Value::State).map_err(|e| e.to_string()),
    }
}

fn div(a: Value, b: Value) -> Result<Value, String> {
    let Value::Scalar(d) = b else {
        return Err("cannot divide by a state".into());
    };
    if d.norm() == 0.0 {
        return Err("division by zero".into());
    }
    Ok(match a {
        Value::Scalar(x) => Value::Scalar(x / d),
        Value::State(s) => Value::State(s.scale(ONE / d)),
    })
}

/// Evaluate `src`, which starts at column `col0` of line `line`.
pub fn evaluate(src: &str, line: usize, col0: usize) -> Result<Value, ParseError> {
    let toks = tokenize(src, col0, line)?;
    let end_col = col0 + src.chars().count();
    let mut p = Parser { toks: &toks, pos: 0, line, end_col };
    let v = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(p.err(t.col, format!("unexpected {}", describe(&t.tok))));
    }
    Ok(v)
}

/// Evaluate `src` and require a state.
pub fn evaluate_state(src: &str, line: usize, col0: usize) -> Result<LabeledState, ParseError> {
    match evaluate(src, line, col0)? {
        Value::State(s) => Ok(s),
        Value::Scalar(_) => Err(ParseError::new(line, col0, "expected a state, found a plain number")),
    }
}

/// Canonical text for a state: one term per nonzero amplitude, factors in
/// basis order. Coefficients use the shortest decimal that round-trips.
pub fn format_state(s: &LabeledState) -> String {
    let mut out = String::new();
    for (label, amp) in s.iter() {
        if amp.re == 0.0 && amp.im == 0.0 {
            continue;
        }
        let mut factors = Vec::new();
        if let Some(p) = label.path {
            factors.push(p.to_string());
        }
        if let Some(p) = label.pol {
            factors.push(p.to_string());
        }
        if let Some(a) = label.ancilla {
            factors.push(format!("{a}_A"));
        }
        let basis = factors.join(" (x) ");
        let coef = format_coefficient(amp);
        let (neg, coef) = match coef.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, coef),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !coef.is_empty() {
            out.push_str(&coef);
            out.push(' ');
        }
        out.push_str(&basis);
    }
    if out.is_empty() {
        // zero state: keep the space visible
        let factors: Vec<String> = s.space().label(0).to_string().split(',').map(str::to_string).collect();
        out = format!("0 {}", factors.join(" (x) "));
    }
    out
}

fn format_coefficient(c: Complex64) -> String {
    if c.im == 0.0 {
        return match c.re {
            1.0 => String::new(),
            -1.0 => "-".into(),
            re => format!("{re}"),
        };
    }
    let im = if c.im.abs() == 1.0 { "i".to_string() } else { format!("{} i", c.im.abs()) };
    let sign = if c.im < 0.0 { "-" } else { "+" };
    if c.re == 0.0 {
        format!("{}{im}", if c.im < 0.0 { "-" } else { "" })
    } else {
        format!("({} {sign} {im})", c.re)
    }
}
