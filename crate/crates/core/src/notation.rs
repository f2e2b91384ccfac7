//! Text notation for angles, states, bases and Bell scenarios.
//!
//! * angles: decimal radians with `pi`, `+ - * /`, parentheses and implicit
//!   multiplication, e.g. `pi/8`, `5pi/8`, `-(pi/2)`
//! * states: `ghz:N`, `diag:THETA,PHI`, `amps:re,im;re,im;…` (auto-normalised)
//! * bases: `x`, `y`, `z`, `pi8`, `5pi8`, `bloch:THETA,PHI`
//! * scenarios: `bell:B1,B2` (shared by all parties) or `bell:B1,B2;B1,B2;…`

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::quantum::{diag_state, ghz_state, BellScenario, BlochBasis, PartySettings, PureState};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_angle(text: &str) -> Result<f64> {
    let mut p = AngleParser {
        src: text.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(parse_err(format!("unexpected input in angle {text:?}")));
    }
    if !v.is_finite() {
        return Err(parse_err(format!("angle {text:?} is not finite")));
    }
    Ok(v)
}

struct AngleParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl AngleParser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<f64> {
        let mut v = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            v = if op == b'+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<f64> {
        let mut v = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    v *= self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    v /= self.factor()?;
                }
                // implicit multiplication: 5pi, 2(pi/3)
                Some(b'p' | b'(') => v *= self.factor()?,
                _ => return Ok(v),
            }
        }
    }

    fn factor(&mut self) -> Result<f64> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(parse_err("missing ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'p') => {
                if self.src[self.pos..].starts_with(b"pi") {
                    self.pos += 2;
                    Ok(std::f64::consts::PI)
                } else {
                    Err(parse_err("expected 'pi'"))
                }
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_digit() || *c == b'.')
                {
                    self.pos += 1;
                }
                // exponent
                if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
                    let save = self.pos;
                    self.pos += 1;
                    if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                        self.pos += 1;
                    }
                    if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                            self.pos += 1;
                        }
                    } else {
                        self.pos = save;
                    }
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                s.parse()
                    .map_err(|_| parse_err(format!("bad number {s:?}")))
            }
            Some(c) => Err(parse_err(format!("unexpected character {:?}", c as char))),
            None => Err(parse_err("unexpected end of angle")),
        }
    }
}

pub fn parse_state(spec: &str) -> Result<PureState> {
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| parse_err(format!("state spec {spec:?} needs a 'kind:' prefix")))?;
    match kind.trim() {
        "ghz" => {
            let n = body
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad qubit count {body:?}")))?;
            ghz_state(n)
        }
        "diag" => {
            let (t, p) = body
                .split_once(',')
                .ok_or_else(|| parse_err("diag expects THETA,PHI"))?;
            diag_state(parse_angle(t)?, parse_angle(p)?)
        }
        "amps" => {
            let amps = body
                .split(';')
                .map(|pair| {
                    let (re, im) = pair
                        .split_once(',')
                        .ok_or_else(|| parse_err(format!("amplitude {pair:?} needs re,im")))?;
                    let num = |s: &str| {
                        s.trim()
                            .parse::<f64>()
                            .map_err(|_| parse_err(format!("bad number {s:?}")))
                    };
                    Ok(C64::new(num(re)?, num(im)?))
                })
                .collect::<Result<Vec<_>>>()?;
            PureState::normalized(amps)
        }
        other => Err(parse_err(format!("unknown state kind {other:?}"))),
    }
}

pub fn parse_basis(token: &str) -> Result<BlochBasis> {
    let token = token.trim();
    match token {
        "x" => Ok(BlochBasis::x()),
        "y" => Ok(BlochBasis::y()),
        "z" => Ok(BlochBasis::z()),
        "pi8" => Ok(BlochBasis::pi8()),
        "5pi8" => Ok(BlochBasis::five_pi8()),
        _ => {
            let body = token
                .strip_prefix("bloch:")
                .ok_or_else(|| parse_err(format!("unknown basis {token:?}")))?;
            let (t, p) = body
                .split_once(',')
                .ok_or_else(|| parse_err("bloch expects THETA,PHI"))?;
            BlochBasis::new(parse_angle(t)?, parse_angle(p)?)
        }
    }
}

/// Splits a comma-separated basis list, keeping `bloch:T,P` tokens together.
fn split_bases(text: &str) -> Result<Vec<BlochBasis>> {
    let parts: Vec<&str> = text.split(',').collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < parts.len() {
        if parts[i].trim_start().starts_with("bloch:") {
            let phi = parts
                .get(i + 1)
                .ok_or_else(|| parse_err("bloch basis is missing PHI"))?;
            out.push(parse_basis(&format!("{},{}", parts[i], phi))?);
            i += 2;
        } else {
            out.push(parse_basis(parts[i])?);
            i += 1;
        }
    }
    Ok(out)
}

/// Parses `bell:…`; a single pair is shared by all `parties`.
pub fn parse_scenario(spec: &str, parties: usize) -> Result<BellScenario> {
    let body = spec
        .trim()
        .strip_prefix("bell:")
        .ok_or_else(|| parse_err(format!("scenario spec {spec:?} must start with 'bell:'")))?;
    let per_party = body
        .split(';')
        .map(|chunk| match split_bases(chunk)?.as_slice() {
            [a, b] => Ok(PartySettings::new(*a, *b)),
            other => Err(parse_err(format!(
                "each party needs exactly two bases, got {}",
                other.len()
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    let settings = match per_party.len() {
        1 => vec![per_party[0]; parties],
        n if n == parties => per_party,
        n => {
            return Err(parse_err(format!(
                "scenario lists {n} parties but the state has {parties} qubits"
            )))
        }
    };
    BellScenario::new(settings)
}
