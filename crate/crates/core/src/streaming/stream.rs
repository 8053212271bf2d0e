use std::fmt::Write;

use crate::bits::BitString;
use crate::error::{invalid, GhdError, Result};

/// Tokens over the universe `{1, ..., universe}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    universe: u64,
    tokens: Vec<u64>,
}

impl TokenStream {
    pub fn new(universe: u64, tokens: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = tokens.iter().find(|&&t| t == 0 || t > universe) {
            return Err(invalid(format!("token {bad} outside [1, {universe}]")));
        }
        Ok(Self { universe, tokens })
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn tokens(&self) -> &[u64] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn concat(&self, other: &TokenStream) -> Result<TokenStream> {
        if self.universe != other.universe {
            return Err(invalid("streams over different universes"));
        }
        let mut tokens = self.tokens.clone();
        tokens.extend_from_slice(&other.tokens);
        Ok(Self {
            universe: self.universe,
            tokens,
        })
    }

    /// Fixture format: one decimal token per line.
    pub fn to_fixture(&self) -> String {
        let mut out = String::with_capacity(self.tokens.len() * 4);
        for t in &self.tokens {
            writeln!(out, "{t}").unwrap();
        }
        out
    }

    pub fn from_fixture(universe: u64, text: &str) -> Result<Self> {
        let tokens = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.parse::<u64>()
                    .map_err(|e| GhdError::Parse(format!("bad token {l:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, tokens)
    }
}

/// `u_i = n x_i + i` and `v_i = n y_i + i` (1-based `i`), universe `2n`.
pub fn encode_streams(x: &BitString, y: &BitString) -> Result<(TokenStream, TokenStream)> {
    if x.len() != y.len() {
        return Err(GhdError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len() as u64;
    let encode = |bits: &BitString| TokenStream {
        universe: 2 * n,
        tokens: bits
            .iter()
            .enumerate()
            .map(|(i, b)| n * b as u64 + i as u64 + 1)
            .collect(),
    };
    Ok((encode(x), encode(y)))
}

/// Exact distinct count via a presence bitmap over the universe.
pub fn exact_f0(stream: &TokenStream) -> usize {
    let mut seen = vec![false; stream.universe as usize + 1];
    let mut count = 0;
    for &t in &stream.tokens {
        if !std::mem::replace(&mut seen[t as usize], true) {
            count += 1;
        }
    }
    count
}
