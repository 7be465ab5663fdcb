//! Substitution definition files.
//!
//! ```json
//! {"name": "fibonacci",
//!  "alphabet": [{"symbol": "a", "value": 1.0}, {"symbol": "b", "value": -1.0}],
//!  "rules": {"a": "ab", "b": "a"},
//!  "potential_coupling": 1.0}
//! ```
//!
//! Symbols are single characters. Values must be distinct unless
//! `allow_equal_values` is set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::spectral::Potential;
use crate::substitution::Substitution;
use crate::words::{Alphabet, Symbol};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDef {
    pub symbol: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Definition {
    pub name: String,
    pub alphabet: Vec<SymbolDef>,
    pub rules: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential_coupling: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_equal_values: bool,
}

impl Definition {
    /// Parses and validates; JSON errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let def: Definition = serde_json::from_str(text).map_err(|e| Error::Definition(e.to_string()))?;
        def.substitution()?;
        Ok(def)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("definitions serialize");
        s.push('\n');
        s
    }

    pub fn alphabet(&self) -> Result<Alphabet, Error> {
        let symbols = self
            .alphabet
            .iter()
            .map(|d| {
                let mut chars = d.symbol.chars();
                match (chars.next(), chars.next()) {
                    (Some(name), None) => Ok(Symbol { name, value: d.value }),
                    _ => Err(Error::Definition(format!("symbol \"{}\" must be a single character", d.symbol))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Alphabet::with_options(symbols, self.allow_equal_values)
    }

    pub fn substitution(&self) -> Result<Substitution, Error> {
        let alphabet = self.alphabet()?;
        for key in self.rules.keys() {
            if !self.alphabet.iter().any(|d| &d.symbol == key) {
                return Err(Error::Definition(format!("rule for undeclared symbol \"{key}\"")));
            }
        }
        let rules = self
            .alphabet
            .iter()
            .map(|d| {
                let text = self
                    .rules
                    .get(&d.symbol)
                    .ok_or_else(|| Error::Definition(format!("no rule for symbol \"{}\"", d.symbol)))?;
                alphabet.parse(text)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Substitution::new(alphabet, rules, Some(self.name.clone()))
    }

    pub fn coupling(&self) -> f64 {
        self.potential_coupling.unwrap_or(1.0)
    }

    pub fn potential(&self) -> Result<Potential, Error> {
        Ok(Potential::from_alphabet(&self.alphabet()?, self.coupling()))
    }

    /// The definition of an existing substitution.
    pub fn from_substitution(subst: &Substitution, name: &str) -> Self {
        let alphabet = subst.alphabet();
        let symbols: Vec<SymbolDef> = alphabet
            .symbols()
            .iter()
            .map(|s| SymbolDef { symbol: s.name.to_string(), value: s.value })
            .collect();
        let allow_equal_values = symbols.iter().enumerate().any(|(i, s)| symbols[..i].iter().any(|t| t.value == s.value));
        Definition {
            name: name.to_string(),
            rules: subst
                .letters()
                .map(|a| (alphabet.symbol(a).name.to_string(), subst.render(subst.image(a))))
                .collect(),
            alphabet: symbols,
            potential_coupling: None,
            allow_equal_values,
        }
    }
}
