//! State and ensemble files.
//!
//! A state file is `{"dim": d, "matrix": [[entry, ...], ...]}` where each entry
//! is a JSON number, a `{"re": .., "im": ..}` object, or a string such as
//! `"0.1-0.2i"`. An ensemble file is `{"weights": [...], "members": [...]}`;
//! a member is either a state body or an amplitude vector (a pure member),
//! written as a bare list of entries or as `{"amplitudes": [...]}`.

use std::fs;
use std::path::Path;

use cohere::{CoherenceError, DensityMatrix, Ensemble, Member, PureState, Tolerances, C64};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("syntax error at {location}: {message}")]
    Syntax { location: String, message: String },
    #[error("invalid {field}: {source}")]
    Validation {
        field: String,
        #[source]
        source: CoherenceError,
    },
}

impl InputError {
    fn at(field: impl Into<String>) -> impl FnOnce(CoherenceError) -> InputError {
        let field = field.into();
        move |source| InputError::Validation { field, source }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Entry {
    Number(f64),
    Text(String),
    Parts {
        re: f64,
        #[serde(default)]
        im: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateBody {
    dim: usize,
    matrix: Vec<Vec<Entry>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MemberBody {
    Amplitudes(Vec<Entry>),
    Mixed(StateBody),
    Pure { amplitudes: Vec<Entry> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleBody {
    weights: Vec<f64>,
    members: Vec<MemberBody>,
}

/// Parses `"a"`, `"bi"`, `"a+bi"` or `"a-bi"`; `j` is accepted for `i` and
/// whitespace is ignored.
pub fn parse_complex(text: &str) -> Option<C64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return parse_real(&t).map(|x| C64::new(x, 0.0));
    };
    let b = body.as_bytes();
    let split = (1..b.len())
        .rev()
        .find(|&k| matches!(b[k], b'+' | b'-') && !matches!(b[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Some(C64::new(parse_real(&body[..k])?, parse_imag(&body[k..])?)),
        None => Some(C64::new(0.0, parse_imag(body)?)),
    }
}

fn parse_imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => parse_real(s),
    }
}

fn parse_real(s: &str) -> Option<f64> {
    // Rust also accepts "inf" and "nan"; matrix entries must be finite
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn entry_value(e: &Entry, field: &str) -> Result<C64, InputError> {
    match e {
        Entry::Number(x) => Ok(C64::new(*x, 0.0)),
        Entry::Parts { re, im } => Ok(C64::new(*re, *im)),
        Entry::Text(s) => parse_complex(s).ok_or_else(|| InputError::Syntax {
            location: field.to_string(),
            message: format!("cannot read {s:?} as a complex number"),
        }),
    }
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Syntax {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

fn state_from_body(body: &StateBody, prefix: &str, tol: &Tolerances) -> Result<DensityMatrix, InputError> {
    let mut rows = Vec::with_capacity(body.matrix.len());
    for (i, row) in body.matrix.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (j, e) in row.iter().enumerate() {
            out.push(entry_value(e, &format!("{prefix}matrix[{i}][{j}]"))?);
        }
        rows.push(out);
    }
    let rho = DensityMatrix::from_rows(&rows, tol).map_err(InputError::at(format!("{prefix}matrix")))?;
    if rho.dim() != body.dim {
        return Err(InputError::Validation {
            field: format!("{prefix}dim"),
            source: CoherenceError::WrongDimension {
                expected: body.dim,
                found: rho.dim(),
            },
        });
    }
    Ok(rho)
}

fn pure_from_entries(entries: &[Entry], prefix: &str, tol: &Tolerances) -> Result<PureState, InputError> {
    let amps = entries
        .iter()
        .enumerate()
        .map(|(i, e)| entry_value(e, &format!("{prefix}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    PureState::new(amps, tol).map_err(InputError::at(prefix))
}

pub fn parse_state(text: &str, tol: &Tolerances) -> Result<DensityMatrix, InputError> {
    let body: StateBody = from_json(text)?;
    state_from_body(&body, "", tol)
}

pub fn parse_ensemble(text: &str, tol: &Tolerances) -> Result<Ensemble<Member>, InputError> {
    let body: EnsembleBody = from_json(text)?;
    let mut members = Vec::with_capacity(body.members.len());
    for (k, m) in body.members.iter().enumerate() {
        let member = match m {
            MemberBody::Mixed(s) => Member::Mixed(state_from_body(s, &format!("members[{k}]."), tol)?),
            MemberBody::Amplitudes(a) => Member::Pure(pure_from_entries(a, &format!("members[{k}]"), tol)?),
            MemberBody::Pure { amplitudes } => {
                Member::Pure(pure_from_entries(amplitudes, &format!("members[{k}].amplitudes"), tol)?)
            }
        };
        members.push(member);
    }
    Ensemble::new(body.weights, members, tol).map_err(|e| {
        let field = match e {
            CoherenceError::DimensionMismatch { .. } | CoherenceError::TooFewMembers { .. } => "members",
            _ => "weights",
        };
        InputError::Validation {
            field: field.into(),
            source: e,
        }
    })
}

/// Reads a file, returning its text and raw bytes for hashing.
pub fn read_input(path: &Path) -> Result<(String, Vec<u8>), InputError> {
    let bytes = fs::read(path).map_err(|e| InputError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| InputError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok((text, bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexOut {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexOut {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Serializable state body, readable back by [`parse_state`].
#[derive(Debug, Clone, Serialize)]
pub struct StateOut {
    pub dim: usize,
    pub matrix: Vec<Vec<ComplexOut>>,
}

impl From<&DensityMatrix> for StateOut {
    fn from(rho: &DensityMatrix) -> Self {
        Self {
            dim: rho.dim(),
            matrix: rho
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(ComplexOut::from).collect())
                .collect(),
        }
    }
}

/// Pure-state ensemble in ensemble-file form.
#[derive(Debug, Clone, Serialize)]
pub struct PureEnsembleOut {
    pub weights: Vec<f64>,
    pub members: Vec<Vec<ComplexOut>>,
}

impl From<&Ensemble<PureState>> for PureEnsembleOut {
    fn from(ens: &Ensemble<PureState>) -> Self {
        Self {
            weights: ens.weights().to_vec(),
            members: ens
                .members()
                .iter()
                .map(|p| p.amps().iter().map(|&z| ComplexOut::from(z)).collect())
                .collect(),
        }
    }
}

pub fn serialize_state(rho: &DensityMatrix) -> String {
    crate::json::to_string(&StateOut::from(rho))
}
