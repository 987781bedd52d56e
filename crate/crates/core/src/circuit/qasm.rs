//! OpenQASM 2.0 front end for the Clifford+T subset.
//!
//! Only a single `qreg` is accepted and the gate vocabulary is built in:
//! `h s sdg x y z cx cz swap t tdg measure barrier`. `include` lines are
//! accepted and ignored. Anything else is reported with its line number.

use super::{Circuit, Gate};
use crate::error::{Error, Result};

struct Statement {
    line: usize,
    text: String,
}

fn statements(text: &str) -> Result<Vec<Statement>> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split("//").next().unwrap_or("");
        for ch in body.chars() {
            if ch == ';' {
                let text = current.trim().to_string();
                if !text.is_empty() {
                    out.push(Statement {
                        line: start_line,
                        text,
                    });
                }
                current.clear();
                continue;
            }
            if current.trim().is_empty() && !ch.is_whitespace() {
                start_line = line;
            }
            current.push(ch);
        }
        current.push(' ');
    }
    if !current.trim().is_empty() {
        return Err(Error::Parse {
            line: start_line,
            message: "statement missing terminating `;`".into(),
        });
    }
    Ok(out)
}

/// Splits `name[idx]` into its parts.
fn parse_ref(token: &str, line: usize) -> Result<(&str, Option<usize>)> {
    let token = token.trim();
    match token.split_once('[') {
        None => Ok((token, None)),
        Some((name, rest)) => {
            let idx = rest
                .strip_suffix(']')
                .and_then(|i| i.trim().parse::<usize>().ok())
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("malformed register reference `{token}`"),
                })?;
            Ok((name.trim(), Some(idx)))
        }
    }
}

fn declared_size(rest: &str, line: usize) -> Result<(String, usize)> {
    match parse_ref(rest, line)? {
        (name, Some(size)) if !name.is_empty() => Ok((name.to_string(), size)),
        _ => Err(Error::Parse {
            line,
            message: format!("malformed register declaration `{rest}`"),
        }),
    }
}

/// Parses the OpenQASM 2.0 subset into a [`Circuit`]. `barrier` statements
/// become chunk marks; `measure` becomes `M` and the classical target is
/// dropped.
pub fn parse_qasm2_subset(text: &str) -> Result<Circuit> {
    let mut qreg: Option<(String, usize)> = None;
    let mut circuit: Option<Circuit> = None;
    for st in statements(text)? {
        let line = st.line;
        let (keyword, rest) = match st.text.find(|c: char| c.is_whitespace() || c == '(') {
            Some(i) => (&st.text[..i], st.text[i..].trim()),
            None => (st.text.as_str(), ""),
        };
        let unsupported = |construct: &str| Error::UnsupportedConstruct {
            line,
            construct: construct.to_string(),
        };
        match keyword {
            "OPENQASM" => {
                if rest != "2.0" {
                    return Err(unsupported(&format!("OPENQASM {rest}")));
                }
            }
            "include" => {}
            "qreg" => {
                if qreg.is_some() {
                    return Err(unsupported("second qreg"));
                }
                let (name, size) = declared_size(rest, line)?;
                circuit = Some(Circuit::new(size).map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })?);
                qreg = Some((name, size));
            }
            "creg" => {
                declared_size(rest, line)?;
            }
            "if" | "gate" | "opaque" | "reset" | "U" | "CX" => return Err(unsupported(keyword)),
            _ => {
                if rest.starts_with('(') {
                    return Err(unsupported(&format!("{keyword}(...)")));
                }
                let (Some((reg, size)), Some(c)) = (qreg.as_ref(), circuit.as_mut()) else {
                    return Err(Error::Parse {
                        line,
                        message: format!("`{keyword}` before any qreg declaration"),
                    });
                };
                let operand = |tok: &str| -> Result<Option<usize>> {
                    let (name, idx) = parse_ref(tok, line)?;
                    if name != reg {
                        return Err(Error::Parse {
                            line,
                            message: format!("unknown quantum register `{name}`"),
                        });
                    }
                    if let Some(i) = idx {
                        if i >= *size {
                            return Err(Error::Parse {
                                line,
                                message: format!("index {i} out of range for {reg}[{size}]"),
                            });
                        }
                    }
                    Ok(idx)
                };
                let push = |c: &mut Circuit, g: Gate| {
                    c.push(g).map_err(|e| Error::Parse {
                        line,
                        message: e.to_string(),
                    })
                };
                match keyword {
                    "barrier" => c.mark_chunk(),
                    "measure" => {
                        let (src, _dst) = rest.split_once("->").ok_or_else(|| Error::Parse {
                            line,
                            message: "measure needs `-> creg`".into(),
                        })?;
                        match operand(src)? {
                            Some(q) => push(c, Gate::Measure(q))?,
                            None => {
                                for q in 0..*size {
                                    push(c, Gate::Measure(q))?;
                                }
                            }
                        }
                    }
                    "h" | "s" | "sdg" | "x" | "y" | "z" | "t" | "tdg" => {
                        match operand(rest)? {
                            Some(q) => push(c, gate(keyword, &[q], line)?)?,
                            None => {
                                for q in 0..*size {
                                    push(c, gate(keyword, &[q], line)?)?;
                                }
                            }
                        }
                    }
                    "cx" | "cz" | "swap" => {
                        let ops: Vec<&str> = rest.split(',').collect();
                        let qs = ops
                            .iter()
                            .map(|tok| {
                                operand(tok)?.ok_or_else(|| Error::Parse {
                                    line,
                                    message: format!("`{keyword}` needs indexed operands"),
                                })
                            })
                            .collect::<Result<Vec<_>>>()?;
                        push(c, gate(keyword, &qs, line)?)?;
                    }
                    other => return Err(unsupported(other)),
                }
            }
        }
    }
    circuit.ok_or(Error::Parse {
        line: 1,
        message: "no qreg declared".into(),
    })
}

fn gate(name: &str, qubits: &[usize], line: usize) -> Result<Gate> {
    Gate::from_mnemonic(name, qubits).map_err(|e| Error::Parse {
        line,
        message: e.to_string(),
    })
}
