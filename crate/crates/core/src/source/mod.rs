//! Source subset front end: lexing, parsing, and assembly of a validated
//! [`ClassModel`].

pub mod lexer;
pub mod parser;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{find_cycles, validate_model, ClassInfo, ClassModel, Rule, Superclass};

pub use lexer::{render, tokenize, Token, TokenKind};
pub use parser::parse_unit;

/// Tokenizes and parses one source file.
pub fn parse_source(text: &str, file: &str) -> Result<Vec<ClassInfo>> {
    let tokens = tokenize(text).map_err(|e| match e {
        Error::Lex {
            line,
            column,
            reason,
        } => Error::Parse {
            file: file.to_owned(),
            line,
            column,
            expected: format!("valid token ({reason})"),
        },
        other => other,
    })?;
    parse_unit(&tokens, file)
}

/// Parses `(file name, text)` pairs in parallel. Results keep input order, so
/// the output is identical to a sequential run.
pub fn parse_sources(files: &[(String, String)]) -> Result<Vec<Vec<ClassInfo>>> {
    files
        .par_iter()
        .map(|(name, text)| parse_source(text, name))
        .collect()
}

/// Merges parsed units into a model: superclasses absent from the model
/// become external, the module map is attached, and the result is validated.
pub fn build_class_model(
    units: impl IntoIterator<Item = Vec<ClassInfo>>,
    module_map: &BTreeMap<String, String>,
) -> Result<ClassModel> {
    let mut classes: BTreeMap<String, ClassInfo> = BTreeMap::new();
    for class in units.into_iter().flatten() {
        if classes.contains_key(&class.name) {
            return Err(Error::DuplicateClass(class.name));
        }
        classes.insert(class.name.clone(), class);
    }

    let names: BTreeSet<String> = classes.keys().cloned().collect();
    for class in classes.values_mut() {
        if let Superclass::InModel(parent) = &class.superclass {
            if !names.contains(parent) {
                class.superclass = Superclass::External(parent.clone());
            }
        }
    }

    for name in classes.keys() {
        if !module_map.contains_key(name) {
            return Err(Error::UnmappedClass(name.clone()));
        }
    }

    let model = ClassModel {
        classes,
        modules: module_map.clone(),
    };

    if let Some(cycle) = find_cycles(&model).into_iter().next() {
        return Err(Error::InheritanceCycle(cycle));
    }
    let violations = validate_model(&model);
    if let Some(v) = violations
        .iter()
        .find(|v| v.rule == Rule::SelfInheritance)
    {
        return Err(Error::InheritanceCycle(vec![v.class.clone()]));
    }
    if !violations.is_empty() {
        return Err(Error::InvalidModel(violations));
    }
    Ok(model)
}
