// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! A small OpenQASM 2.0 reader covering one quantum register, the
//! single-qubit whitelist and `cx`.
//!
//! Barriers and measurements are accepted and dropped; each one is reported
//! as a [`Warning`]. Anything else outside the subset (gate definitions,
//! parameterized gates, classical control) is an error.

use std::fmt;

use crate::circuit::{Gate, QuantumCircuit, SingleKind};
use crate::error::QasmError;
use crate::reconstruction::{MappedCircuit, MappedGate, Provenance};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(usize),
    Real(String),
    Str(String),
    Sym(&'static str),
    Comment(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> QasmError {
    QasmError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>, QasmError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let advance = |i: &mut usize, n: usize, line: &mut usize, col: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
                *i += 1;
            }
        };
        if c.is_whitespace() {
            let n = 1;
            advance(&mut i, n, &mut line, &mut col);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            let mut j = i + 2;
            while j < chars.len() && chars[j] != '\n' {
                j += 1;
            }
            let body: String = chars[i + 2..j].iter().collect();
            let n = j - i;
            advance(&mut i, n, &mut line, &mut col);
            out.push(Token {
                tok: Tok::Comment(body.trim().to_string()),
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let mut j = i + 2;
            while j + 1 < chars.len() && !(chars[j] == '*' && chars[j + 1] == '/') {
                j += 1;
            }
            if j + 1 >= chars.len() {
                return Err(syntax(start_line, start_col, "unterminated block comment"));
            }
            let n = j + 2 - i;
            advance(&mut i, n, &mut line, &mut col);
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let n = j - i;
            advance(&mut i, n, &mut line, &mut col);
            out.push(Token {
                tok: Tok::Ident(word),
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let n = j - i;
            advance(&mut i, n, &mut line, &mut col);
            let tok = if word.contains('.') {
                Tok::Real(word)
            } else {
                Tok::Int(
                    word.parse()
                        .map_err(|_| syntax(start_line, start_col, "integer too large"))?,
                )
            };
            out.push(Token {
                tok,
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if c == '"' {
            let mut j = i + 1;
            while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                j += 1;
            }
            if j >= chars.len() || chars[j] != '"' {
                return Err(syntax(start_line, start_col, "unterminated string"));
            }
            let s: String = chars[i + 1..j].iter().collect();
            let n = j + 1 - i;
            advance(&mut i, n, &mut line, &mut col);
            out.push(Token {
                tok: Tok::Str(s),
                line: start_line,
                col: start_col,
            });
            continue;
        }
        let sym = match c {
            ';' => ";",
            ',' => ",",
            '[' => "[",
            ']' => "]",
            '(' => "(",
            ')' => ")",
            '{' => "{",
            '}' => "}",
            '-' if chars.get(i + 1) == Some(&'>') => "->",
            _ => {
                return Err(syntax(
                    start_line,
                    start_col,
                    format!("unexpected character `{c}`"),
                ))
            }
        };
        let n = sym.len();
            advance(&mut i, n, &mut line, &mut col);
        out.push(Token {
            tok: Tok::Sym(sym),
            line: start_line,
            col: start_col,
        });
    }
    Ok(out)
}

/// Statement that was accepted but not turned into a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarningKind {
    BarrierDropped,
    MeasurementDropped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub kind: WarningKind,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WarningKind::BarrierDropped => write!(f, "line {}: barrier dropped", self.line),
            WarningKind::MeasurementDropped => {
                write!(f, "line {}: measurement dropped", self.line)
            }
        }
    }
}

/// Result of reading a QASM source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QasmProgram {
    pub circuit: QuantumCircuit,
    pub warnings: Vec<Warning>,
}

struct Register {
    name: String,
    size: usize,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    eof: (usize, usize),
    qreg: Option<Register>,
    gates: Vec<(Gate, usize, usize, Option<String>)>,
    warnings: Vec<Warning>,
}

impl Parser {
    fn new(text: &str) -> Result<Self, QasmError> {
        let toks = lex(text)?;
        let lines = text.lines().count().max(1);
        let last_col = text.lines().last().map_or(1, |l| l.chars().count() + 1);
        Ok(Parser {
            toks,
            pos: 0,
            eof: (lines, last_col),
            qreg: None,
            gates: Vec::new(),
            warnings: Vec::new(),
        })
    }

    fn skip_comments(&mut self) {
        while matches!(self.toks.get(self.pos), Some(Token { tok: Tok::Comment(_), .. })) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<&Token> {
        self.skip_comments();
        self.toks.get(self.pos)
    }

    fn here(&mut self) -> (usize, usize) {
        let eof = self.eof;
        self.peek().map_or(eof, |t| (t.line, t.col))
    }

    fn next(&mut self) -> Result<Token, QasmError> {
        self.skip_comments();
        let (line, col) = self.eof;
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| syntax(line, col, "unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect_sym(&mut self, sym: &'static str) -> Result<Token, QasmError> {
        let t = self.next()?;
        if t.tok == Tok::Sym(sym) {
            Ok(t)
        } else {
            Err(syntax(t.line, t.col, format!("expected `{sym}`")))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, usize, usize), QasmError> {
        let t = self.next()?;
        match t.tok {
            Tok::Ident(s) => Ok((s, t.line, t.col)),
            _ => Err(syntax(t.line, t.col, "expected identifier")),
        }
    }

    fn expect_int(&mut self) -> Result<usize, QasmError> {
        let t = self.next()?;
        match t.tok {
            Tok::Int(v) => Ok(v),
            _ => Err(syntax(t.line, t.col, "expected integer")),
        }
    }

    /// Skips tokens up to and including the next `;`.
    fn skip_statement(&mut self) -> Result<Token, QasmError> {
        loop {
            let t = self.next()?;
            if t.tok == Tok::Sym(";") {
                return Ok(t);
            }
        }
    }

    /// Comment on the same line as the `;` just consumed, if any.
    fn trailing_comment(&mut self, semi: &Token) -> Option<String> {
        match self.toks.get(self.pos) {
            Some(Token {
                tok: Tok::Comment(body),
                line,
                ..
            }) if *line == semi.line => {
                let body = body.clone();
                self.pos += 1;
                Some(body)
            }
            _ => None,
        }
    }

    fn qubit_arg(&mut self) -> Result<usize, QasmError> {
        let (name, line, col) = self.expect_ident()?;
        let reg = self
            .qreg
            .as_ref()
            .ok_or(QasmError::MissingRegister { line, col })?;
        if reg.name != name {
            return Err(QasmError::UnknownRegister { name, line, col });
        }
        let size = reg.size;
        if self.peek().map(|t| &t.tok) != Some(&Tok::Sym("[")) {
            return Err(syntax(line, col, "register broadcast is not supported"));
        }
        self.expect_sym("[")?;
        let index = self.expect_int()?;
        self.expect_sym("]")?;
        if index >= size {
            return Err(QasmError::IndexOutOfRange {
                index,
                size,
                line,
                col,
            });
        }
        Ok(index)
    }

    fn statement(&mut self) -> Result<(), QasmError> {
        let (word, line, col) = self.expect_ident()?;
        match word.as_str() {
            "OPENQASM" => {
                let t = self.next()?;
                match t.tok {
                    Tok::Real(v) if v.starts_with('2') => {}
                    Tok::Int(2) => {}
                    _ => return Err(syntax(t.line, t.col, "only OpenQASM 2.0 is supported")),
                }
                self.expect_sym(";")?;
            }
            "include" => {
                let t = self.next()?;
                if !matches!(t.tok, Tok::Str(_)) {
                    return Err(syntax(t.line, t.col, "expected file name string"));
                }
                self.expect_sym(";")?;
            }
            "qreg" => {
                if self.qreg.is_some() {
                    return Err(QasmError::MultipleQuantumRegisters { line, col });
                }
                let (name, _, _) = self.expect_ident()?;
                self.expect_sym("[")?;
                let size = self.expect_int()?;
                self.expect_sym("]")?;
                self.expect_sym(";")?;
                self.qreg = Some(Register { name, size });
            }
            "creg" => {
                self.skip_statement()?;
            }
            "barrier" => {
                self.skip_statement()?;
                self.warnings.push(Warning {
                    line,
                    kind: WarningKind::BarrierDropped,
                });
            }
            "measure" => {
                self.skip_statement()?;
                self.warnings.push(Warning {
                    line,
                    kind: WarningKind::MeasurementDropped,
                });
            }
            "gate" | "opaque" | "if" | "reset" | "U" | "u" | "u1" | "u2" | "u3" => {
                return Err(QasmError::UnsupportedGate {
                    name: word,
                    line,
                    col,
                })
            }
            name => {
                let gate = if name == "cx" || name == "CX" {
                    let control = self.qubit_arg()?;
                    self.expect_sym(",")?;
                    let target = self.qubit_arg()?;
                    Gate::cnot(control, target)
                } else if let Some(kind) = SingleKind::from_qasm_name(name) {
                    Gate::single(kind, self.qubit_arg()?)
                } else {
                    return Err(QasmError::UnsupportedGate {
                        name: word,
                        line,
                        col,
                    });
                };
                let semi = self.expect_sym(";")?;
                let comment = self.trailing_comment(&semi);
                self.gates.push((gate, line, col, comment));
            }
        }
        Ok(())
    }

    fn run(mut self) -> Result<Self, QasmError> {
        while self.peek().is_some() {
            self.statement()?;
        }
        if self.qreg.is_none() {
            let (line, col) = self.here();
            return Err(QasmError::MissingRegister { line, col });
        }
        Ok(self)
    }

    fn circuit(&self) -> Result<QuantumCircuit, QasmError> {
        let size = self.qreg.as_ref().map_or(0, |r| r.size);
        let mut circuit = QuantumCircuit::empty(size);
        for (gate, line, col, _) in &self.gates {
            circuit
                .push(*gate)
                .map_err(|source| QasmError::Circuit {
                    source,
                    line: *line,
                    col: *col,
                })?;
        }
        Ok(circuit)
    }
}

/// Parses an OpenQASM 2.0 program into a logical circuit.
///
/// ```
/// let prog = qxmap::parse_qasm("qreg q[2]; cx q[0],q[1];").unwrap();
/// assert_eq!(prog.circuit.num_qubits(), 2);
/// assert_eq!(prog.circuit.gates(), &[qxmap::Gate::cnot(0, 1)]);
/// ```
pub fn parse_qasm(text: &str) -> Result<QasmProgram, QasmError> {
    let parser = Parser::new(text)?.run()?;
    let circuit = parser.circuit()?;
    Ok(QasmProgram {
        circuit,
        warnings: parser.warnings,
    })
}

/// Parses a mapped circuit written by [`crate::emit_qasm`], reading the
/// provenance tag from the trailing comment of each gate. Gates without a
/// tag count as original.
pub fn parse_mapped_qasm(text: &str) -> Result<MappedCircuit, QasmError> {
    let parser = Parser::new(text)?.run()?;
    let circuit = parser.circuit()?;
    let mut gates = Vec::with_capacity(circuit.len());
    for (gate, line, col, comment) in &parser.gates {
        let provenance = match comment.as_deref() {
            None => Provenance::Original,
            Some(tag) => Provenance::from_tag(tag).ok_or_else(|| QasmError::BadProvenance {
                tag: tag.to_string(),
                line: *line,
                col: *col,
            })?,
        };
        gates.push(MappedGate {
            gate: *gate,
            provenance,
        });
    }
    Ok(MappedCircuit {
        num_qubits: circuit.num_qubits(),
        gates,
    })
}
