//! Class-model interchange file (JSON) and the `class,module` CSV map.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_model, ClassInfo, ClassModel, FieldInfo, Invocation, MethodInfo, Superclass};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    classes: Vec<ClassDoc>,
    #[serde(default)]
    modules: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    name: String,
    #[serde(default)]
    extends: Option<String>,
    #[serde(default)]
    external: bool,
    #[serde(default)]
    implements: Vec<String>,
    #[serde(default)]
    fields: Vec<FieldDoc>,
    #[serde(default)]
    methods: Vec<MethodDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldDoc {
    name: String,
    #[serde(rename = "type")]
    type_name: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MethodDoc {
    name: String,
    arity: usize,
    #[serde(default)]
    params: Vec<String>,
    returns: String,
    #[serde(default)]
    constructor: bool,
    #[serde(default)]
    calls: Vec<CallDoc>,
    #[serde(default)]
    uses_fields: Vec<String>,
    #[serde(default)]
    ref_types: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CallDoc {
    /// `null` for an unresolved receiver.
    recv: Option<String>,
    name: String,
    arity: usize,
}

impl From<&ClassModel> for ModelDoc {
    fn from(model: &ClassModel) -> Self {
        let classes = model
            .classes
            .values()
            .map(|c| ClassDoc {
                name: c.name.clone(),
                extends: c.superclass.name().map(str::to_owned),
                external: matches!(c.superclass, Superclass::External(_)),
                implements: c.interfaces.iter().cloned().collect(),
                fields: c
                    .fields
                    .iter()
                    .map(|f| FieldDoc {
                        name: f.name.clone(),
                        type_name: f.type_name.clone(),
                    })
                    .collect(),
                methods: c
                    .methods
                    .iter()
                    .map(|m| MethodDoc {
                        name: m.name.clone(),
                        arity: m.arity,
                        params: m.param_types.clone(),
                        returns: m.return_type.clone(),
                        constructor: m.is_constructor,
                        calls: m
                            .invocations
                            .iter()
                            .map(|i| CallDoc {
                                recv: i.receiver.clone(),
                                name: i.method.clone(),
                                arity: i.arity,
                            })
                            .collect(),
                        uses_fields: m.uses_fields.iter().cloned().collect(),
                        ref_types: m.referenced_types.iter().cloned().collect(),
                    })
                    .collect(),
            })
            .collect();
        ModelDoc {
            classes,
            modules: model.modules.clone(),
        }
    }
}

impl ModelDoc {
    fn into_model(self) -> Result<ClassModel> {
        let mut classes = BTreeMap::new();
        for (i, c) in self.classes.into_iter().enumerate() {
            let loc = || format!("classes[{i}] ({})", c.name);
            let superclass = match (c.extends, c.external) {
                (None, false) => Superclass::None,
                (None, true) => {
                    return Err(Error::schema(loc(), "\"external\" is true but \"extends\" is missing"))
                }
                (Some(p), false) => Superclass::InModel(p),
                (Some(p), true) => Superclass::External(p),
            };
            let class = ClassInfo {
                name: c.name.clone(),
                superclass,
                interfaces: c.implements.into_iter().collect(),
                fields: c
                    .fields
                    .into_iter()
                    .map(|f| FieldInfo {
                        name: f.name,
                        type_name: f.type_name,
                    })
                    .collect(),
                methods: c
                    .methods
                    .into_iter()
                    .map(|m| MethodInfo {
                        name: m.name,
                        arity: m.arity,
                        param_types: m.params,
                        return_type: m.returns,
                        is_constructor: m.constructor,
                        invocations: m
                            .calls
                            .into_iter()
                            .map(|c| Invocation {
                                receiver: c.recv,
                                method: c.name,
                                arity: c.arity,
                            })
                            .collect(),
                        uses_fields: m.uses_fields.into_iter().collect(),
                        referenced_types: m.ref_types.into_iter().collect(),
                    })
                    .collect(),
            };
            if classes.insert(c.name.clone(), class).is_some() {
                return Err(Error::DuplicateClass(c.name));
            }
        }
        Ok(ClassModel {
            classes,
            modules: self.modules,
        })
    }
}

pub fn model_to_json(model: &ClassModel) -> String {
    let mut s = serde_json::to_string_pretty(&ModelDoc::from(model)).expect("model serializes");
    s.push('\n');
    s
}

/// Parses and validates an interchange document.
pub fn model_from_json(text: &str) -> Result<ClassModel> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(|e| {
        Error::schema(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    let model = doc.into_model()?;
    let violations = validate_model(&model);
    if !violations.is_empty() {
        return Err(Error::InvalidModel(violations));
    }
    Ok(model)
}

pub fn save_model_file(model: &ClassModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_json(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model_file(path: impl AsRef<Path>) -> Result<ClassModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_json(&text)
}

#[derive(Deserialize)]
struct ModuleRecord {
    class: String,
    module: String,
}

/// Reads a two-column `class,module` CSV.
pub fn read_module_map(text: &str) -> Result<BTreeMap<String, String>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut map = BTreeMap::new();
    for (i, rec) in rdr.deserialize::<ModuleRecord>().enumerate() {
        let rec = rec.map_err(|e| Error::schema(format!("module map row {}", i + 2), e.to_string()))?;
        if map.insert(rec.class.clone(), rec.module).is_some() {
            return Err(Error::schema(
                format!("module map row {}", i + 2),
                format!("class {} assigned twice", rec.class),
            ));
        }
    }
    Ok(map)
}

pub fn load_module_map(path: impl AsRef<Path>) -> Result<BTreeMap<String, String>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_module_map(&text)
}
