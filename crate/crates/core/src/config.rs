//! Instance definitions: a line-oriented `key = value` format with
//! `sandwich:` / `table:` blocks, and an equivalent JSON form. The grammar
//! is documented in `docs/config-format.md`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{GroupError, GroupTable};
use crate::hochschild::DEFAULT_CHAIN_CAP;
use crate::rees::{ReesError, ReesSemigroup, SandwichEntry};

/// Default highest Hochschild degree of a run.
pub const DEFAULT_RUN_DEGREE: usize = 3;
/// Largest group order a config may request; Cayley tables are validated in
/// cubic time.
pub const MAX_GROUP_ORDER: usize = 256;

/// Where an error was found: a 1-based text position or a JSON path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Text { line: usize, column: usize },
    Json(String),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Text { line, column } => write!(f, "{line}:{column}"),
            Location::Json(path) => write!(f, "{path}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{at}: {message}")]
    Syntax { at: Location, message: String },
    #[error("{at}: unknown group element {name:?}")]
    UnknownGroupElement { at: Location, name: String },
    #[error("missing required key {0:?}")]
    MissingKey(&'static str),
    #[error("invalid group: {0}")]
    Group(#[from] GroupError),
    #[error("invalid instance: {0}")]
    Semigroup(#[from] ReesError),
}

impl ConfigError {
    /// Whether the error is the semigroup size guard rather than bad input.
    pub fn is_size_guard(&self) -> bool {
        matches!(self, ConfigError::Semigroup(ReesError::TooLarge { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Symmetric3,
    /// Element names and a Cayley table of element indices.
    Table { names: Vec<String>, table: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<GroupTable, GroupError> {
        match self {
            GroupSpec::Cyclic(n) => GroupTable::cyclic(*n),
            GroupSpec::Symmetric3 => Ok(GroupTable::symmetric3()),
            GroupSpec::Table { names, table } => GroupTable::from_table(table.clone(), None, Some(names.clone())),
        }
    }
}

/// A validated instance: the data `(G, I, Λ, P)` plus run parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceConfig {
    pub name: String,
    pub group: GroupSpec,
    pub i_size: usize,
    pub lambda_size: usize,
    /// `sandwich[λ][i] = p_{λi}`.
    pub sandwich: Vec<Vec<SandwichEntry>>,
    pub max_degree: usize,
    pub chain_cap: usize,
    pub force: bool,
}

impl InstanceConfig {
    pub fn semigroup(&self) -> Result<ReesSemigroup, ConfigError> {
        let group = self.group.build()?;
        Ok(ReesSemigroup::with_options(group, self.i_size, self.lambda_size, self.sandwich.clone(), self.force)?
            .with_name(self.name.clone()))
    }

    /// The line-oriented text form.
    pub fn emit(&self) -> String {
        let group = self.group.build().expect("validated config");
        let mut out = String::new();
        out.push_str(&format!("name = {}\n", self.name));
        match &self.group {
            GroupSpec::Cyclic(n) => out.push_str(&format!("group = cyclic {n}\n")),
            GroupSpec::Symmetric3 => out.push_str("group = symmetric3\n"),
            GroupSpec::Table { names, table } => {
                out.push_str("group = table\n");
                out.push_str(&format!("elements = {}\n", names.join(" ")));
                out.push_str("table:\n");
                for row in table {
                    let row: Vec<&str> = row.iter().map(|&g| names[g].as_str()).collect();
                    out.push_str(&format!("  {}\n", row.join(" ")));
                }
                out.push_str("end\n");
            }
        }
        out.push_str(&format!("i_size = {}\n", self.i_size));
        out.push_str(&format!("lambda_size = {}\n", self.lambda_size));
        out.push_str(&format!("max_degree = {}\n", self.max_degree));
        out.push_str(&format!("chain_cap = {}\n", self.chain_cap));
        out.push_str(&format!("force = {}\n", self.force));
        out.push_str("sandwich:\n");
        for row in &self.sandwich {
            let row: Vec<&str> = row
                .iter()
                .map(|e| match e {
                    SandwichEntry::Element(g) => group.name(*g),
                    SandwichEntry::Null => "o",
                })
                .collect();
            out.push_str(&format!("  {}\n", row.join(" ")));
        }
        out.push_str("end\n");
        out
    }

    /// The JSON form, with entries written as element names.
    pub fn emit_json(&self) -> String {
        let group = self.group.build().expect("validated config");
        let name = |e: &SandwichEntry| match e {
            SandwichEntry::Element(g) => RawEntry::Name(group.name(*g).to_string()),
            SandwichEntry::Null => RawEntry::Name("o".into()),
        };
        let raw = RawConfig {
            name: self.name.clone(),
            group: match &self.group {
                GroupSpec::Cyclic(n) => RawGroup::Cyclic { order: *n },
                GroupSpec::Symmetric3 => RawGroup::Symmetric3,
                GroupSpec::Table { names, table } => RawGroup::Table {
                    elements: names.clone(),
                    table: table.iter().map(|r| r.iter().map(|&g| RawEntry::Name(names[g].clone())).collect()).collect(),
                },
            },
            i_size: self.i_size,
            lambda_size: self.lambda_size,
            sandwich: self.sandwich.iter().map(|r| r.iter().map(name).collect()).collect(),
            max_degree: Some(self.max_degree),
            chain_cap: Some(self.chain_cap),
            force: Some(self.force),
        };
        serde_json::to_string_pretty(&raw).expect("config serializes")
    }
}

/// Parses either format; input whose first non-blank character is `{` is
/// read as JSON.
pub fn parse_config(text: &str) -> Result<InstanceConfig, ConfigError> {
    parse_config_with(text, false)
}

/// As [`parse_config`]; `force` overrides the file's `force` setting when
/// set, lifting the size guard.
pub fn parse_config_with(text: &str, force: bool) -> Result<InstanceConfig, ConfigError> {
    if text.trim_start().starts_with('{') {
        parse_json_with(text, force)
    } else {
        parse_text_with(text, force)
    }
}

/// A raw token with its position, resolved once the group is known.
#[derive(Debug, Clone)]
struct Token {
    text: String,
    at: Location,
}

fn tokens(line: &str, line_no: usize, offset: usize) -> Vec<Token> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let chars: Vec<(usize, char)> = line.chars().enumerate().collect();
    for &(col, ch) in chars.iter().chain(std::iter::once(&(chars.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(col),
            (true, Some(s)) => {
                out.push(Token {
                    text: chars[s..col].iter().map(|(_, c)| c).collect(),
                    at: Location::Text { line: line_no, column: offset + s + 1 },
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(code, _)| code)
}

fn syntax(at: Location, message: impl Into<String>) -> ConfigError {
    ConfigError::Syntax { at, message: message.into() }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name != "o" && !name.contains('#') && !name.chars().any(char::is_whitespace)
}

/// Shared post-processing for both formats.
struct Draft {
    name: Option<String>,
    group: Option<(String, Option<Token>, Location)>,
    elements: Option<Vec<Token>>,
    table: Option<Vec<Vec<Token>>>,
    i_size: Option<usize>,
    lambda_size: Option<usize>,
    max_degree: Option<usize>,
    chain_cap: Option<usize>,
    force: Option<bool>,
    sandwich: Option<Vec<Vec<Token>>>,
}

fn resolve(token: &Token, names: &[String], allow_null: bool) -> Result<SandwichEntry, ConfigError> {
    if allow_null && token.text == "o" {
        return Ok(SandwichEntry::Null);
    }
    if let Some(g) = names.iter().position(|n| *n == token.text) {
        return Ok(SandwichEntry::Element(g));
    }
    match token.text.parse::<usize>() {
        Ok(g) if g < names.len() => Ok(SandwichEntry::Element(g)),
        _ => Err(ConfigError::UnknownGroupElement { at: token.at.clone(), name: token.text.clone() }),
    }
}

fn check_order(n: usize, at: &Location) -> Result<(), ConfigError> {
    if n == 0 || n > MAX_GROUP_ORDER {
        return Err(syntax(at.clone(), format!("group order must be between 1 and {MAX_GROUP_ORDER}")));
    }
    Ok(())
}

impl Draft {
    fn finish(mut self, force: bool) -> Result<InstanceConfig, ConfigError> {
        if force {
            self.force = Some(true);
        }
        let name = self.name.ok_or(ConfigError::MissingKey("name"))?;
        let (kind, arg, at) = self.group.ok_or(ConfigError::MissingKey("group"))?;
        if kind != "table" && (self.elements.is_some() || self.table.is_some()) {
            return Err(syntax(at, "`elements` and `table` are only allowed with `group = table`"));
        }
        let group = match (kind.as_str(), arg) {
            ("cyclic", Some(n)) => {
                let order = n.text.parse::<usize>().map_err(|_| syntax(n.at.clone(), "expected a group order"))?;
                check_order(order, &n.at)?;
                GroupSpec::Cyclic(order)
            }
            ("symmetric3", None) => GroupSpec::Symmetric3,
            ("table", None) => {
                let elements = self.elements.ok_or(ConfigError::MissingKey("elements"))?;
                check_order(elements.len(), &at)?;
                for e in &elements {
                    if !valid_name(&e.text) {
                        return Err(syntax(e.at.clone(), format!("invalid element name {:?}", e.text)));
                    }
                }
                let names: Vec<String> = elements.into_iter().map(|t| t.text).collect();
                let rows = self.table.ok_or(ConfigError::MissingKey("table"))?;
                let table = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|t| match resolve(t, &names, false)? {
                                SandwichEntry::Element(g) => Ok::<usize, ConfigError>(g),
                                SandwichEntry::Null => unreachable!("null not allowed in tables"),
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                GroupSpec::Table { names, table }
            }
            (other, _) => {
                return Err(syntax(at, format!("expected `cyclic N`, `symmetric3` or `table`, found {other:?}")))
            }
        };
        let built = group.build()?;
        let sandwich = self
            .sandwich
            .ok_or(ConfigError::MissingKey("sandwich"))?
            .iter()
            .map(|r| r.iter().map(|t| resolve(t, built.names(), true)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let config = InstanceConfig {
            name,
            group,
            i_size: self.i_size.ok_or(ConfigError::MissingKey("i_size"))?,
            lambda_size: self.lambda_size.ok_or(ConfigError::MissingKey("lambda_size"))?,
            sandwich,
            max_degree: self.max_degree.unwrap_or(DEFAULT_RUN_DEGREE),
            chain_cap: self.chain_cap.unwrap_or(DEFAULT_CHAIN_CAP),
            force: self.force.unwrap_or(false),
        };
        config.semigroup()?;
        Ok(config)
    }
}

/// Parses the line-oriented text format.
pub fn parse_text(text: &str) -> Result<InstanceConfig, ConfigError> {
    parse_text_with(text, false)
}

fn parse_text_with(text: &str, force: bool) -> Result<InstanceConfig, ConfigError> {
    let mut d = Draft {
        name: None,
        group: None,
        elements: None,
        table: None,
        i_size: None,
        lambda_size: None,
        max_degree: None,
        chain_cap: None,
        force: None,
        sandwich: None,
    };
    let mut seen: BTreeMap<String, Location> = BTreeMap::new();
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, strip_comment(l)));
    while let Some((line_no, line)) = lines.next() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.chars().take_while(|c| c.is_whitespace()).count();
        let here = Location::Text { line: line_no, column: indent + 1 };
        let (key, value, value_col) = if let Some(block) = trimmed.strip_suffix(':') {
            (block.trim(), None, 0)
        } else if let Some((k, v)) = line.split_once('=') {
            let col = k.chars().count() + 1;
            (k.trim(), Some(v), col)
        } else {
            return Err(syntax(here, format!("expected `key = value` or `block:`, found {trimmed:?}")));
        };
        if let Some(first) = seen.get(key) {
            return Err(syntax(here, format!("duplicate key {key:?} (first set at {first})")));
        }
        seen.insert(key.to_string(), here.clone());

        let Some(value) = value else {
            let mut rows = Vec::new();
            let mut closed = false;
            for (n, l) in lines.by_ref() {
                if l.trim() == "end" {
                    closed = true;
                    break;
                }
                if !l.trim().is_empty() {
                    rows.push(tokens(l, n, 0));
                }
            }
            if !closed {
                return Err(syntax(here, format!("block {key:?} is not closed by `end`")));
            }
            match key {
                "sandwich" => d.sandwich = Some(rows),
                "table" => d.table = Some(rows),
                _ => return Err(syntax(here, format!("unknown block {key:?}"))),
            }
            continue;
        };
        let toks = tokens(value, line_no, value_col);
        let value_at = toks.first().map_or(here.clone(), |t| t.at.clone());
        let single = || -> Result<&Token, ConfigError> {
            match toks.as_slice() {
                [t] => Ok(t),
                [] => Err(syntax(value_at.clone(), format!("missing value for {key:?}"))),
                [_, extra, ..] => Err(syntax(extra.at.clone(), format!("unexpected token {:?}", extra.text))),
            }
        };
        let number = || -> Result<usize, ConfigError> {
            let t = single()?;
            t.text.parse().map_err(|_| syntax(t.at.clone(), format!("expected a nonnegative integer, found {:?}", t.text)))
        };
        match key {
            "name" => {
                let name = value.trim();
                if name.is_empty() {
                    return Err(syntax(value_at, "missing value for \"name\""));
                }
                d.name = Some(name.to_string());
            }
            "group" => {
                let mut it = toks.iter();
                let kind = it.next().ok_or_else(|| syntax(value_at.clone(), "missing group kind"))?;
                let arg = it.next().cloned();
                if let Some(extra) = it.next() {
                    return Err(syntax(extra.at.clone(), format!("unexpected token {:?}", extra.text)));
                }
                d.group = Some((kind.text.clone(), arg, kind.at.clone()));
            }
            "elements" => d.elements = Some(toks.clone()),
            "i_size" => d.i_size = Some(number()?),
            "lambda_size" => d.lambda_size = Some(number()?),
            "max_degree" => d.max_degree = Some(number()?),
            "chain_cap" => d.chain_cap = Some(number()?),
            "force" => {
                let t = single()?;
                d.force = Some(match t.text.as_str() {
                    "true" => true,
                    "false" => false,
                    other => return Err(syntax(t.at.clone(), format!("expected true or false, found {other:?}"))),
                });
            }
            _ => return Err(syntax(here, format!("unknown key {key:?}"))),
        }
    }
    d.finish(force)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: String,
    group: RawGroup,
    i_size: usize,
    lambda_size: usize,
    sandwich: Vec<Vec<RawEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chain_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    force: Option<bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawGroup {
    Cyclic { order: usize },
    Symmetric3,
    Table { elements: Vec<String>, table: Vec<Vec<RawEntry>> },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Index(usize),
    Name(String),
}

impl RawEntry {
    fn token(&self, path: String) -> Token {
        let text = match self {
            RawEntry::Index(g) => g.to_string(),
            RawEntry::Name(n) => n.clone(),
        };
        Token { text, at: Location::Json(path) }
    }
}

fn json_rows(rows: &[Vec<RawEntry>], key: &str) -> Vec<Vec<Token>> {
    rows.iter()
        .enumerate()
        .map(|(r, row)| row.iter().enumerate().map(|(c, e)| e.token(format!("{key}[{r}][{c}]"))).collect())
        .collect()
}

/// Parses the JSON form.
pub fn parse_json(text: &str) -> Result<InstanceConfig, ConfigError> {
    parse_json_with(text, false)
}

fn parse_json_with(text: &str, force: bool) -> Result<InstanceConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
        syntax(Location::Text { line: e.line(), column: e.column() }, e.to_string())
    })?;
    let at = Location::Json("group".into());
    let (group, elements, table) = match &raw.group {
        RawGroup::Cyclic { order } => {
            let t = Token { text: order.to_string(), at: Location::Json("group.order".into()) };
            (("cyclic".to_string(), Some(t), at), None, None)
        }
        RawGroup::Symmetric3 => (("symmetric3".to_string(), None, at), None, None),
        RawGroup::Table { elements, table } => {
            let names = elements
                .iter()
                .enumerate()
                .map(|(k, n)| Token { text: n.clone(), at: Location::Json(format!("group.elements[{k}]")) })
                .collect();
            (("table".to_string(), None, at), Some(names), Some(json_rows(table, "group.table")))
        }
    };
    Draft {
        name: Some(raw.name.trim().to_string()).filter(|n| !n.is_empty()),
        group: Some(group),
        elements,
        table,
        i_size: Some(raw.i_size),
        lambda_size: Some(raw.lambda_size),
        max_degree: raw.max_degree,
        chain_cap: raw.chain_cap,
        force: raw.force,
        sandwich: Some(json_rows(&raw.sandwich, "sandwich")),
    }
    .finish(force)
}

#[cfg(test)]
mod tests {
    use super::*;
    use SandwichEntry::{Element as E, Null as O};

    const MATRIX_UNITS: &str = "\
# 2x2 matrix units
name = matrix-units
group = cyclic 1
i_size = 2
lambda_size = 2
sandwich:
  e o
  o e
end
";

    #[test]
    fn parses_matrix_units() {
        let c = parse_config(MATRIX_UNITS).unwrap();
        assert_eq!(c.name, "matrix-units");
        assert_eq!(c.group, GroupSpec::Cyclic(1));
        assert_eq!(c.sandwich, vec![vec![E(0), O], vec![O, E(0)]]);
        assert_eq!((c.max_degree, c.chain_cap, c.force), (DEFAULT_RUN_DEGREE, DEFAULT_CHAIN_CAP, false));
        assert_eq!(c.semigroup().unwrap().nonzero_count(), 4);
    }

    #[test]
    fn empty_column_is_named() {
        let text = MATRIX_UNITS.replace("  e o\n  o e", "  e o\n  e o");
        let err = parse_config(&text).unwrap_err();
        assert_eq!(err, ConfigError::Semigroup(ReesError::EmptyColumn(1)));
        assert!(err.to_string().contains("column 2"));
    }

    #[test]
    fn unknown_element_is_positioned() {
        let text = "name = x\ngroup = cyclic 2\ni_size = 1\nlambda_size = 1\nsandwich:\n  b\nend\n";
        let err = parse_config(text).unwrap_err();
        assert_eq!(
            err,
            ConfigError::UnknownGroupElement { at: Location::Text { line: 6, column: 3 }, name: "b".into() }
        );
        assert_eq!(err.to_string(), "6:3: unknown group element \"b\"");
    }

    #[test]
    fn syntax_errors_are_positioned() {
        let cases = [
            ("name = x\ni_size = two\n", 2, 10),
            ("name = x\nbogus\n", 2, 1),
            ("name = x\nname = y\n", 2, 1),
            ("name = x\ncolour = red\n", 2, 1),
            ("sandwich:\n e\n", 1, 1),
            ("force = maybe\n", 1, 9),
        ];
        for (text, line, column) in cases {
            match parse_config(text) {
                Err(ConfigError::Syntax { at, .. }) => assert_eq!(at, Location::Text { line, column }, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn missing_keys() {
        assert_eq!(parse_config("name = x\n").unwrap_err(), ConfigError::MissingKey("group"));
    }

    #[test]
    fn table_groups_and_indices() {
        let text = "\
name = klein
group = table
elements = e a b c
table:
  e a b c
  a e c b
  b c e a
  c b a e
end
i_size = 1
lambda_size = 2
sandwich:
  3
  a
end
";
        let c = parse_config(text).unwrap();
        assert_eq!(c.sandwich, vec![vec![E(3)], vec![E(1)]]);
        assert_eq!(parse_config(&c.emit()).unwrap(), c);
        assert_eq!(parse_config(&c.emit_json()).unwrap(), c);
    }

    #[test]
    fn json_form() {
        let text = r#"{"name": "c2", "group": {"kind": "cyclic", "order": 2}, "i_size": 2, "lambda_size": 2,
                       "sandwich": [["e", "o"], ["a", 0]], "max_degree": 2}"#;
        let c = parse_config(text).unwrap();
        assert_eq!(c.sandwich, vec![vec![E(0), O], vec![E(1), E(0)]]);
        assert_eq!(c.max_degree, 2);
        let bad = text.replace("\"a\"", "\"b\"");
        assert_eq!(
            parse_config(&bad).unwrap_err(),
            ConfigError::UnknownGroupElement { at: Location::Json("sandwich[1][0]".into()), name: "b".into() }
        );
        let err = parse_config("{\"name\": }").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { at: Location::Text { line: 1, .. }, .. }));
    }

    #[test]
    fn size_guard_and_force() {
        let text = "name = big\ngroup = cyclic 256\ni_size = 4\nlambda_size = 5\nsandwich:\n e e e e\n e e e e\n e e e e\n e e e e\n e e e e\nend\n";
        assert!(parse_config(text).unwrap_err().is_size_guard());
        assert!(parse_config(&format!("{text}force = true\n")).is_ok());
        assert!(parse_config_with(text, true).unwrap().force);
        let huge = text.replace("cyclic 256", "cyclic 100000");
        assert!(matches!(parse_config(&huge), Err(ConfigError::Syntax { .. })));
    }

    #[test]
    fn emit_roundtrip() {
        let c = parse_config(MATRIX_UNITS).unwrap();
        assert_eq!(parse_config(&c.emit()).unwrap(), c);
        assert_eq!(parse_config(&c.emit_json()).unwrap(), c);
    }
}
