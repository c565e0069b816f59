//! Line-oriented input documents.
//!
//! ```text
//! # comment
//! [K]
//! 2 -1
//! -1 2
//! [L]
//! 1 2
//! 2 1
//! [options]
//! precision = 256
//! strategy = reduced
//! ```
//!
//! A generic module replaces `[K]` by `[divisors]` (one line) and `[Q]`, the
//! rational Gram matrix of `q` on the generators. An `[L]` header with no rows is
//! the empty link.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use toral_core::intlinalg::{RatMatrix, SymIntMatrix};
use toral_core::quadmod::{discriminant_module, FiniteQuadraticModule};
use toral_core::surgery::{Strategy, SurgeryPresentation};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] toral_core::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum StrategyArg {
    Direct,
    Reduced,
}

impl StrategyArg {
    pub fn to_core(self) -> Strategy {
        match self {
            StrategyArg::Direct => Strategy::Direct,
            StrategyArg::Reduced => Strategy::NullSeparated,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyArg::Direct => "direct",
            StrategyArg::Reduced => "reduced",
        }
    }
}

impl FromStr for StrategyArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "direct" => Ok(StrategyArg::Direct),
            "reduced" => Ok(StrategyArg::Reduced),
            other => Err(format!(
                "unknown strategy `{other}` (expected direct or reduced)"
            )),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FileOptions {
    pub precision: Option<u32>,
    pub budget: Option<u64>,
    pub strategy: Option<StrategyArg>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InputDocument {
    pub k: Option<Vec<Vec<BigInt>>>,
    pub l: Option<Vec<Vec<BigInt>>>,
    pub divisors: Option<Vec<u64>>,
    pub q: Option<Vec<Vec<BigRational>>>,
    pub options: FileOptions,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    K,
    L,
    Divisors,
    Q,
    Options,
}

fn parse_row<T: FromStr>(line: &str, lineno: usize) -> Result<Vec<T>, InputError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<T>().map_err(|_| InputError::Syntax {
                line: lineno,
                msg: format!("cannot parse `{tok}`"),
            })
        })
        .collect()
}

fn opt_value<T: FromStr>(key: &str, value: &str, lineno: usize) -> Result<T, InputError> {
    value.parse().map_err(|_| InputError::Syntax {
        line: lineno,
        msg: format!("bad value `{value}` for `{key}`"),
    })
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<InputDocument, InputError> {
        let mut doc = InputDocument::default();
        let mut section = Section::None;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = match name.trim() {
                    "K" => Section::K,
                    "L" => Section::L,
                    "divisors" => Section::Divisors,
                    "Q" => Section::Q,
                    "options" => Section::Options,
                    other => {
                        return Err(InputError::Syntax {
                            line: lineno,
                            msg: format!("unknown section [{other}]"),
                        })
                    }
                };
                let taken = match section {
                    Section::K => doc.k.replace(Vec::new()).is_some(),
                    Section::L => doc.l.replace(Vec::new()).is_some(),
                    Section::Q => doc.q.replace(Vec::new()).is_some(),
                    Section::Divisors => doc.divisors.replace(Vec::new()).is_some(),
                    _ => false,
                };
                if taken {
                    return Err(InputError::Syntax {
                        line: lineno,
                        msg: format!("section {line} repeated"),
                    });
                }
                continue;
            }
            match section {
                Section::None => {
                    return Err(InputError::Syntax {
                        line: lineno,
                        msg: "content before the first section".into(),
                    })
                }
                Section::K => doc.k.as_mut().unwrap().push(parse_row(line, lineno)?),
                Section::L => doc.l.as_mut().unwrap().push(parse_row(line, lineno)?),
                Section::Q => doc.q.as_mut().unwrap().push(parse_row(line, lineno)?),
                Section::Divisors => doc
                    .divisors
                    .as_mut()
                    .unwrap()
                    .extend(parse_row::<u64>(line, lineno)?),
                Section::Options => {
                    let (key, value) = line.split_once('=').ok_or_else(|| InputError::Syntax {
                        line: lineno,
                        msg: "expected `key = value`".into(),
                    })?;
                    let (key, value) = (key.trim(), value.trim());
                    let o = &mut doc.options;
                    match key {
                        "precision" => o.precision = Some(opt_value(key, value, lineno)?),
                        "budget" => o.budget = Some(opt_value(key, value, lineno)?),
                        "seed" => o.seed = Some(opt_value(key, value, lineno)?),
                        "strategy" => {
                            o.strategy = Some(
                                value
                                    .parse()
                                    .map_err(|msg| InputError::Syntax { line: lineno, msg })?,
                            )
                        }
                        other => {
                            return Err(InputError::Syntax {
                                line: lineno,
                                msg: format!("unknown option `{other}`"),
                            })
                        }
                    }
                }
            }
        }
        doc.validate()?;
        Ok(doc)
    }

    fn validate(&self) -> Result<(), InputError> {
        if self.k.is_some() && (self.divisors.is_some() || self.q.is_some()) {
            return Err(InputError::Invalid(
                "give either [K] or a generic module, not both".into(),
            ));
        }
        if self.divisors.is_some() != self.q.is_some() {
            return Err(InputError::Invalid(
                "a generic module needs both [divisors] and [Q]".into(),
            ));
        }
        if self.k.is_some() {
            discriminant_module(&self.lattice()?.expect("present"))?;
        }
        if self.divisors.is_some() {
            self.module()?;
        }
        if let Some(l) = &self.l {
            SymIntMatrix::from_rows(l)?;
        }
        if self
            .options
            .precision
            .is_some_and(|p| p < toral_core::exactnum::MIN_PRECISION)
        {
            return Err(InputError::Invalid(format!(
                "precision must be at least {} bits",
                toral_core::exactnum::MIN_PRECISION
            )));
        }
        Ok(())
    }

    pub fn lattice(&self) -> Result<Option<SymIntMatrix>, InputError> {
        self.k
            .as_ref()
            .map(|rows| SymIntMatrix::from_rows(rows).map_err(InputError::from))
            .transpose()
    }

    /// The quadratic datum: the discriminant module of `K` or the generic module.
    pub fn module(&self) -> Result<Option<FiniteQuadraticModule>, InputError> {
        if let Some(k) = self.lattice()? {
            return Ok(Some(discriminant_module(&k)?));
        }
        match (&self.divisors, &self.q) {
            (Some(d), Some(q)) => {
                let gram = if q.is_empty() {
                    RatMatrix::zeros(0, 0)
                } else {
                    RatMatrix::from_rows(q)?
                };
                Ok(Some(FiniteQuadraticModule::new(d.clone(), gram)?))
            }
            _ => Ok(None),
        }
    }

    pub fn presentation(&self) -> Result<Option<SurgeryPresentation>, InputError> {
        match &self.l {
            None => Ok(None),
            Some(rows) if rows.is_empty() => Ok(Some(SurgeryPresentation::empty())),
            Some(rows) => Ok(Some(SurgeryPresentation::from_rows(rows)?)),
        }
    }

    /// Canonical text; parsing it returns an identical document.
    pub fn to_text(&self) -> String {
        fn rows<T: std::fmt::Display>(out: &mut String, header: &str, m: &[Vec<T>]) {
            writeln!(out, "[{header}]").unwrap();
            for r in m {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                writeln!(out, "{}", cells.join(" ")).unwrap();
            }
        }
        let mut out = String::new();
        if let Some(k) = &self.k {
            rows(&mut out, "K", k);
        }
        if let Some(d) = &self.divisors {
            writeln!(out, "[divisors]").unwrap();
            let cells: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", cells.join(" ")).unwrap();
        }
        if let Some(q) = &self.q {
            rows(&mut out, "Q", q);
        }
        if let Some(l) = &self.l {
            rows(&mut out, "L", l);
        }
        let o = &self.options;
        if *o != FileOptions::default() {
            writeln!(out, "[options]").unwrap();
            if let Some(p) = o.precision {
                writeln!(out, "precision = {p}").unwrap();
            }
            if let Some(b) = o.budget {
                writeln!(out, "budget = {b}").unwrap();
            }
            if let Some(s) = o.strategy {
                writeln!(out, "strategy = {}", s.name()).unwrap();
            }
            if let Some(s) = o.seed {
                writeln!(out, "seed = {s}").unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lattice_and_link() {
        let doc = InputDocument::parse(
            "[K]\n2 -1\n-1 2 # A2\n\n[L]\n0\n[options]\nstrategy = direct\nseed=7\n",
        )
        .unwrap();
        assert_eq!(doc.k.as_ref().unwrap().len(), 2);
        assert_eq!(doc.l, Some(vec![vec![BigInt::from(0)]]));
        assert_eq!(doc.options.strategy, Some(StrategyArg::Direct));
        assert_eq!(doc.options.seed, Some(7));
    }

    #[test]
    fn empty_link_section() {
        let doc = InputDocument::parse("[K]\n2\n[L]\n").unwrap();
        assert_eq!(doc.presentation().unwrap().unwrap().components(), 0);
    }

    #[test]
    fn generic_module() {
        let doc = InputDocument::parse("[divisors]\n4\n[Q]\n1/4\n").unwrap();
        assert_eq!(doc.module().unwrap().unwrap().divisors(), &[4]);
    }

    #[test]
    fn rejects_bad_inputs() {
        for bad in [
            "[K]\n3\n",
            "[K]\n2 1\n0 2\n",
            "[K]\n2\n[divisors]\n2\n[Q]\n1/2\n",
            "[divisors]\n2\n",
            "[K]\nx\n",
            "2\n",
            "[K]\n2\n[K]\n2\n",
            "[M]\n",
            "[K]\n2\n[options]\nstrategy = fast\n",
            "[K]\n2\n[options]\nprecision = 8\n",
            "[K]\n2\n[L]\n1 2\n3 1\n",
        ] {
            assert!(InputDocument::parse(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn text_round_trips() {
        for src in [
            "[K]\n2 -1\n-1 2\n[L]\n1 2\n2 -3\n[options]\nprecision = 128\nbudget = 1000\nstrategy = reduced\nseed = 3\n",
            "[divisors]\n2 4\n[Q]\n1/2 0\n0 -1/4\n[L]\n\n",
            "[K]\n8\n",
        ] {
            let doc = InputDocument::parse(src).unwrap();
            assert_eq!(InputDocument::parse(&doc.to_text()).unwrap(), doc);
        }
    }
}
