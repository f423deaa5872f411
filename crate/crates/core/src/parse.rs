//! Textual mean expressions.
//!
//! ```text
//! spec    := "(" spec ")"
//!          | atom                                 arithmetic, geometric, harmonic,
//!                                                 logarithmic, min, max, proj1, proj2
//!          | "power:" num
//!          | "stolarsky:" num ":" num
//!          | "proj:" cone                         full, empty, lower, upper, mixed,
//!                                                 each optionally followed by ' (complement)
//!          | "mt:" arg ":" num                    self-complementary base M_t
//!          | "nt:" arg ":" arg ":" arg ":" num    general base N_t (M, C, D, t)
//!          | "k:" arg | "l:" arg                  first / second mean of a pair
//!          | pair
//! pair    := "pair:" arg ":" arg ":" arg ":" num  general pair (M, C, D, t)
//!          | "xy:" arg ":" num ":" cone           projective pair (M, t, A)
//!          | "logpair:" num ":" cone              logarithmic-mean pair (t, A)
//!          | "pairof:" arg ":" arg ":" arg        explicit pair (K, L, M)
//! arg     := atom | "(" spec ")"
//! ```
//!
//! Every label produced by the library is itself a valid expression that
//! re-parses to the same function.

use crate::complement::{
    general_base, general_pair, log_pair, self_complement_base, xy_pair, MeanPair,
};
use crate::error::{MeanError, Result};
use crate::means::{classical, stolarsky, MeanFn, StolarskyParams};
use crate::projective::{projective_mean, ConeSet};

#[derive(Clone, Debug)]
pub enum MeanSpec {
    Mean(MeanFn),
    Pair(MeanPair),
}

impl MeanSpec {
    pub fn label(&self) -> &str {
        match self {
            MeanSpec::Mean(m) => m.label(),
            MeanSpec::Pair(p) => p.label(),
        }
    }
}

pub fn parse_spec(s: &str) -> Result<MeanSpec> {
    let mut p = Parser { src: s, pos: 0 };
    let spec = p.spec()?;
    if p.pos != s.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(spec)
}

pub fn parse_mean(s: &str) -> Result<MeanFn> {
    match parse_spec(s)? {
        MeanSpec::Mean(m) => Ok(m),
        MeanSpec::Pair(_) => Err(MeanError::Parse {
            pos: 0,
            msg: format!("`{s}` is a pair, expected a single mean"),
        }),
    }
}

pub fn parse_pair(s: &str) -> Result<MeanPair> {
    match parse_spec(s)? {
        MeanSpec::Pair(p) => Ok(p),
        MeanSpec::Mean(_) => Err(MeanError::Parse {
            pos: 0,
            msg: format!("`{s}` is a single mean, expected a pair"),
        }),
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> MeanError {
        MeanError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    /// Reads up to the next `:`, `(` or `)`.
    fn token(&mut self) -> Result<&str> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if matches!(c, b':' | b'(' | b')') {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a name or number"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let tok = self.token()?;
        tok.parse::<f64>().map_err(|_| MeanError::Parse {
            pos: start,
            msg: format!("`{tok}` is not a number"),
        })
    }

    fn cone(&mut self) -> Result<ConeSet> {
        let start = self.pos;
        let name = self.token()?;
        ConeSet::builtin(name).map_err(|_| MeanError::Parse {
            pos: start,
            msg: format!("unknown cone `{name}`"),
        })
    }

    fn sep(&mut self) -> Result<()> {
        self.expect(b':')
    }

    fn arg(&mut self) -> Result<MeanSpec> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let inner = self.spec()?;
            self.expect(b')')?;
            Ok(inner)
        } else {
            let start = self.pos;
            let name = self.token()?;
            classical(name)
                .map(MeanSpec::Mean)
                .map_err(|_| MeanError::Parse {
                    pos: start,
                    msg: format!("unknown mean `{name}` (compound arguments need parentheses)"),
                })
        }
    }

    fn mean_arg(&mut self) -> Result<MeanFn> {
        let start = self.pos;
        match self.arg()? {
            MeanSpec::Mean(m) => Ok(m),
            MeanSpec::Pair(p) => Err(MeanError::Parse {
                pos: start,
                msg: format!("`{}` is a pair, expected a mean", p.label()),
            }),
        }
    }

    fn pair_arg(&mut self) -> Result<MeanPair> {
        let start = self.pos;
        match self.arg()? {
            MeanSpec::Pair(p) => Ok(p),
            MeanSpec::Mean(m) => Err(MeanError::Parse {
                pos: start,
                msg: format!("`{}` is a mean, expected a pair", m.label()),
            }),
        }
    }

    fn spec(&mut self) -> Result<MeanSpec> {
        if self.peek() == Some(b'(') {
            return self.arg();
        }
        let start = self.pos;
        let head = self.token()?.to_string();
        let has_args = self.peek() == Some(b':');
        let keyword = matches!(
            head.as_str(),
            "power"
                | "stolarsky"
                | "proj"
                | "mt"
                | "nt"
                | "k"
                | "l"
                | "pair"
                | "xy"
                | "logpair"
                | "pairof"
        );
        if !keyword {
            if has_args {
                return Err(MeanError::Parse {
                    pos: start,
                    msg: format!("`{head}` takes no arguments"),
                });
            }
            return classical(&head)
                .map(MeanSpec::Mean)
                .map_err(|_| MeanError::Parse {
                    pos: start,
                    msg: format!("unknown mean `{head}`"),
                });
        }
        self.sep()?;
        let spec = match head.as_str() {
            "power" => {
                let at = self.pos;
                let p = self.number()?;
                let m = classical(&format!("power:{p}")).map_err(|e| MeanError::Parse {
                    pos: at,
                    msg: e.to_string(),
                })?;
                MeanSpec::Mean(m)
            }
            "stolarsky" => {
                let r = self.number()?;
                self.sep()?;
                let s = self.number()?;
                MeanSpec::Mean(stolarsky(StolarskyParams::new(r, s)?))
            }
            "proj" => MeanSpec::Mean(projective_mean(&self.cone()?)),
            "mt" => {
                let m = self.mean_arg()?;
                self.sep()?;
                let t = self.number()?;
                MeanSpec::Mean(self_complement_base(&m, t)?)
            }
            "nt" | "pair" => {
                let m = self.mean_arg()?;
                self.sep()?;
                let c = self.mean_arg()?;
                self.sep()?;
                let d = self.mean_arg()?;
                self.sep()?;
                let t = self.number()?;
                if head == "nt" {
                    MeanSpec::Mean(general_base(&m, &c, &d, t)?)
                } else {
                    MeanSpec::Pair(general_pair(&m, &c, &d, t)?)
                }
            }
            "k" => MeanSpec::Mean(self.pair_arg()?.k().clone()),
            "l" => MeanSpec::Mean(self.pair_arg()?.l().clone()),
            "xy" => {
                let m = self.mean_arg()?;
                self.sep()?;
                let t = self.number()?;
                self.sep()?;
                let a = self.cone()?;
                MeanSpec::Pair(xy_pair(&m, t, &a)?)
            }
            "logpair" => {
                let t = self.number()?;
                self.sep()?;
                let a = self.cone()?;
                MeanSpec::Pair(log_pair(t, &a)?)
            }
            "pairof" => {
                let k = self.mean_arg()?;
                self.sep()?;
                let l = self.mean_arg()?;
                self.sep()?;
                let m = self.mean_arg()?;
                MeanSpec::Pair(MeanPair::explicit(k, l, m))
            }
            _ => unreachable!(),
        };
        Ok(spec)
    }
}
