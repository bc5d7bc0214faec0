//! Problem descriptions as read from JSON files or command-line flags.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Alphabet, ForbiddenSet};

pub const DEFAULT_MAX_LEN: usize = 10;

/// `{"alphabet": ["a", "b"], "forbidden": ["aa"], "max_len": 10, "t_value": null}`
///
/// When `alphabet` is empty it is inferred from the characters of the
/// forbidden words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default)]
    pub alphabet: Vec<String>,
    #[serde(default)]
    pub forbidden: Vec<String>,
    #[serde(default = "default_max_len")]
    pub max_len: usize,
    #[serde(default)]
    pub t_value: Option<i64>,
}

fn default_max_len() -> usize {
    DEFAULT_MAX_LEN
}

impl Default for ProblemSpec {
    fn default() -> Self {
        ProblemSpec { alphabet: Vec::new(), forbidden: Vec::new(), max_len: DEFAULT_MAX_LEN, t_value: None }
    }
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub alphabet: Alphabet,
    pub forbidden: ForbiddenSet,
    pub max_len: usize,
    pub t_value: Option<i64>,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn build(&self) -> Result<Problem> {
        let alphabet = if self.alphabet.is_empty() {
            let mut letters: Vec<String> = self
                .forbidden
                .iter()
                .flat_map(|w| w.chars().filter(|c| *c != '^' && !c.is_ascii_digit()))
                .map(String::from)
                .collect();
            letters.sort();
            letters.dedup();
            if letters.is_empty() {
                return Err(Error::Spec("no alphabet given and no forbidden words to infer one from".into()));
            }
            Alphabet::new(letters)?
        } else {
            Alphabet::new(self.alphabet.clone())?
        };
        let forbidden = ForbiddenSet::parse(&alphabet, &self.forbidden)?;
        Ok(Problem { alphabet, forbidden, max_len: self.max_len, t_value: self.t_value })
    }
}

/// Splits a flag value on commas, or into characters when it has no commas.
pub fn split_alphabet(value: &str) -> Vec<String> {
    if value.contains(',') {
        value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
    } else {
        value.chars().filter(|c| !c.is_whitespace()).map(String::from).collect()
    }
}
