//! Factor chains: ordered ratio factors whose product telescopes to an
//! aggregate indicator.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One multiplicative factor, `numerator / denominator` or a bare level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDef {
    pub name: String,
    pub numerator: String,
    pub denominator: Option<String>,
}

impl FactorDef {
    pub fn ratio(name: &str, numerator: &str, denominator: &str) -> Self {
        Self {
            name: name.to_owned(),
            numerator: numerator.to_owned(),
            denominator: Some(denominator.to_owned()),
        }
    }

    pub fn level(name: &str, key: &str) -> Self {
        Self {
            name: name.to_owned(),
            numerator: key.to_owned(),
            denominator: None,
        }
    }
}

impl fmt::Display for FactorDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.denominator {
            Some(d) => write!(f, "{} = {} / {}", self.name, self.numerator, d),
            None => write!(f, "{} = {}", self.name, self.numerator),
        }
    }
}

/// A validated factor chain. Construction fails unless the chain telescopes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorChain {
    name: String,
    aggregate: String,
    factors: Vec<FactorDef>,
}

impl FactorChain {
    pub fn new(
        name: impl Into<String>,
        aggregate: impl Into<String>,
        factors: Vec<FactorDef>,
    ) -> Result<Self> {
        let chain = Self {
            name: name.into(),
            aggregate: aggregate.into(),
            factors,
        };
        chain.check()?;
        Ok(chain)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Indicator key of the aggregate (e.g. `co2`).
    pub fn aggregate(&self) -> &str {
        &self.aggregate
    }

    pub fn factors(&self) -> &[FactorDef] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factor_names(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|f| f.name.as_str())
    }

    /// Every indicator key referenced by the chain, aggregate first, in
    /// order of first appearance.
    pub fn indicator_keys(&self) -> Vec<&str> {
        let mut keys = vec![self.aggregate.as_str()];
        for f in &self.factors {
            for k in std::iter::once(&f.numerator).chain(f.denominator.iter()) {
                if !keys.contains(&k.as_str()) {
                    keys.push(k);
                }
            }
        }
        keys
    }

    /// Symbolic telescoping check on indicator keys.
    ///
    /// The aggregate appears exactly once, as a numerator. Every other key
    /// appears exactly once as a numerator and exactly once as a denominator.
    fn check(&self) -> Result<()> {
        if self.factors.is_empty() {
            return Err(Error::InvalidChain(
                "at least one factor is required".into(),
            ));
        }
        if self.aggregate.trim().is_empty() {
            return Err(Error::InvalidChain("aggregate key is empty".into()));
        }
        let mut names = HashSet::new();
        for f in &self.factors {
            if f.name.trim().is_empty() || f.numerator.trim().is_empty() {
                return Err(Error::InvalidChain(format!("incomplete factor `{f}`")));
            }
            if !names.insert(f.name.as_str()) {
                return Err(Error::InvalidChain(format!(
                    "duplicate factor name `{}`",
                    f.name
                )));
            }
            if f.denominator.as_deref() == Some(f.numerator.as_str()) {
                return Err(Error::InvalidChain(format!(
                    "factor `{f}` is identically 1"
                )));
            }
            if f.denominator
                .as_deref()
                .is_some_and(|d| d.trim().is_empty())
            {
                return Err(Error::InvalidChain(format!("incomplete factor `{f}`")));
            }
        }

        // key -> (numerator count, denominator count)
        let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for f in &self.factors {
            counts.entry(&f.numerator).or_default().0 += 1;
            if let Some(d) = &f.denominator {
                counts.entry(d).or_default().1 += 1;
            }
        }

        let mut problems = Vec::new();
        match counts.get(self.aggregate.as_str()) {
            Some(&(1, 0)) => {}
            Some(&(n, d)) => problems.push(format!(
                "aggregate `{}` must appear once as a numerator and never as a denominator \
                 (numerator {n}x, denominator {d}x)",
                self.aggregate
            )),
            None => problems.push(format!("aggregate `{}` does not appear", self.aggregate)),
        }
        for (key, &(n, d)) in &counts {
            if *key == self.aggregate || (n, d) == (1, 1) {
                continue;
            }
            problems.push(format!(
                "`{key}` appears {n}x as numerator and {d}x as denominator"
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::NonTelescoping(problems.join("; ")))
        }
    }

    /// Parses the declarative chain spec format:
    ///
    /// ```text
    /// # comments and blank lines are ignored
    /// name = energy3
    /// aggregate = co2
    /// factor ΔI = co2 / total_energy
    /// factor ΔL = total_energy / gdp
    /// factor ΔB = gdp
    /// ```
    ///
    /// Factors keep their file order.
    pub fn parse_spec(text: &str) -> Result<Self> {
        let mut name = None;
        let mut aggregate = None;
        let mut factors = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::ChainSpec {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
            let (lhs, rhs) = (lhs.trim(), rhs.trim());
            if rhs.is_empty() {
                return Err(err(format!("missing value for `{lhs}`")));
            }

            if let Some(factor_name) = lhs.strip_prefix("factor") {
                let factor_name = factor_name.trim();
                if factor_name.is_empty() || !lhs.starts_with("factor ") {
                    return Err(err("expected `factor <name> = <expr>`".into()));
                }
                let def = match rhs.split_once('/') {
                    Some((n, d)) => {
                        let (n, d) = (n.trim(), d.trim());
                        if n.is_empty() || d.is_empty() || d.contains('/') {
                            return Err(err(format!("malformed ratio {rhs:?}")));
                        }
                        FactorDef::ratio(factor_name, n, d)
                    }
                    None => FactorDef::level(factor_name, rhs),
                };
                if def.numerator.contains(char::is_whitespace)
                    || def
                        .denominator
                        .as_deref()
                        .is_some_and(|d| d.contains(char::is_whitespace))
                {
                    return Err(err(format!(
                        "indicator keys may not contain spaces: {rhs:?}"
                    )));
                }
                factors.push(def);
                continue;
            }

            let slot = match lhs {
                "name" => &mut name,
                "aggregate" => &mut aggregate,
                other => return Err(err(format!("unknown key `{other}`"))),
            };
            if slot.is_some() {
                return Err(err(format!("`{lhs}` given twice")));
            }
            *slot = Some(rhs.to_owned());
        }

        let missing = |what: &str| Error::ChainSpec {
            line: text.lines().count(),
            message: format!("missing `{what}`"),
        };
        let name = name.ok_or_else(|| missing("name"))?;
        let aggregate = aggregate.ok_or_else(|| missing("aggregate"))?;
        Self::new(name, aggregate, factors)
    }
}
