//! Shared domain types: the structural class model produced by the parser,
//! the per-module metric and defect rows, and model validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Primitive and pseudo types that never count as class references.
pub const PRIMITIVE_TYPES: &[&str] = &[
    "void", "int", "long", "short", "byte", "char", "float", "double", "boolean",
];

pub fn is_primitive(type_name: &str) -> bool {
    PRIMITIVE_TYPES.contains(&type_name)
}

/// Strips array suffixes so `Foo[][]` refers to `Foo`.
pub fn base_type(type_name: &str) -> &str {
    type_name.trim_end_matches("[]")
}

/// The six CK metrics, in the column order used by every table and CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Cbo,
    Dit,
    Lcom,
    Noc,
    Rfc,
    Wmc,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Cbo,
        Metric::Dit,
        Metric::Lcom,
        Metric::Noc,
        Metric::Rfc,
        Metric::Wmc,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Metric::Cbo => "CBO",
            Metric::Dit => "DIT",
            Metric::Lcom => "LCOM",
            Metric::Noc => "NOC",
            Metric::Rfc => "RFC",
            Metric::Wmc => "WMC",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Metric::Cbo => "cbo",
            Metric::Dit => "dit",
            Metric::Lcom => "lcom",
            Metric::Noc => "noc",
            Metric::Rfc => "rfc",
            Metric::Wmc => "wmc",
        }
    }

    pub fn parse(s: &str) -> Option<Metric> {
        Metric::ALL
            .into_iter()
            .find(|m| m.key().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One invoked method. `receiver` is `None` when the static type of the
/// receiver could not be resolved.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Invocation {
    pub receiver: Option<String>,
    pub method: String,
    pub arity: usize,
}

impl Invocation {
    pub fn new(receiver: Option<&str>, method: &str, arity: usize) -> Self {
        Invocation {
            receiver: receiver.map(str::to_owned),
            method: method.to_owned(),
            arity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodInfo {
    pub name: String,
    pub arity: usize,
    pub param_types: Vec<String>,
    pub return_type: String,
    pub is_constructor: bool,
    pub invocations: BTreeSet<Invocation>,
    /// Own-class instance fields read or written by the body.
    pub uses_fields: BTreeSet<String>,
    pub referenced_types: BTreeSet<String>,
}

impl MethodInfo {
    pub fn new(name: &str, param_types: &[&str], return_type: &str) -> Self {
        MethodInfo {
            name: name.to_owned(),
            arity: param_types.len(),
            param_types: param_types.iter().map(|s| s.to_string()).collect(),
            return_type: return_type.to_owned(),
            is_constructor: false,
            invocations: BTreeSet::new(),
            uses_fields: BTreeSet::new(),
            referenced_types: BTreeSet::new(),
        }
    }

    pub fn constructor(class: &str, param_types: &[&str]) -> Self {
        MethodInfo {
            is_constructor: true,
            ..MethodInfo::new(class, param_types, "void")
        }
    }

    pub fn uses<'a>(mut self, fields: impl IntoIterator<Item = &'a str>) -> Self {
        self.uses_fields.extend(fields.into_iter().map(str::to_owned));
        self
    }

    pub fn calls(mut self, receiver: Option<&str>, method: &str, arity: usize) -> Self {
        self.invocations.insert(Invocation::new(receiver, method, arity));
        self
    }

    pub fn refs<'a>(mut self, types: impl IntoIterator<Item = &'a str>) -> Self {
        self.referenced_types
            .extend(types.into_iter().map(str::to_owned));
        self
    }

    /// Method identity within a class; overloads by parameter type collapse.
    pub fn identity(&self) -> (&str, usize) {
        (&self.name, self.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Superclass {
    None,
    InModel(String),
    /// Declared parent that is not part of the model.
    External(String),
}

impl Superclass {
    pub fn name(&self) -> Option<&str> {
        match self {
            Superclass::None => None,
            Superclass::InModel(n) | Superclass::External(n) => Some(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldInfo {
    pub name: String,
    pub type_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInfo {
    pub name: String,
    pub superclass: Superclass,
    pub interfaces: BTreeSet<String>,
    pub fields: Vec<FieldInfo>,
    pub methods: Vec<MethodInfo>,
}

impl ClassInfo {
    pub fn new(name: &str) -> Self {
        ClassInfo {
            name: name.to_owned(),
            superclass: Superclass::None,
            interfaces: BTreeSet::new(),
            fields: Vec::new(),
            methods: Vec::new(),
        }
    }

    pub fn extends(mut self, parent: &str) -> Self {
        self.superclass = Superclass::InModel(parent.to_owned());
        self
    }

    pub fn extends_external(mut self, parent: &str) -> Self {
        self.superclass = Superclass::External(parent.to_owned());
        self
    }

    pub fn implements(mut self, iface: &str) -> Self {
        self.interfaces.insert(iface.to_owned());
        self
    }

    pub fn field(mut self, name: &str, type_name: &str) -> Self {
        self.fields.push(FieldInfo {
            name: name.to_owned(),
            type_name: type_name.to_owned(),
        });
        self
    }

    pub fn method(mut self, method: MethodInfo) -> Self {
        self.methods.push(method);
        self
    }

    pub fn field_type(&self, name: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|f| f.name == name)
            .map(|f| f.type_name.as_str())
    }
}

/// Classes keyed by name plus the class → module assignment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassModel {
    pub classes: BTreeMap<String, ClassInfo>,
    pub modules: BTreeMap<String, String>,
}

impl ClassModel {
    /// Builds a model without validation; later insertions replace earlier
    /// classes of the same name.
    pub fn from_classes(
        classes: impl IntoIterator<Item = ClassInfo>,
        modules: impl IntoIterator<Item = (String, String)>,
    ) -> Self {
        ClassModel {
            classes: classes.into_iter().map(|c| (c.name.clone(), c)).collect(),
            modules: modules.into_iter().collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&ClassInfo> {
        self.classes.get(name)
    }

    pub fn module_of(&self, class: &str) -> Option<&str> {
        self.modules.get(class).map(String::as_str)
    }

    /// Classes ordered so that every in-model parent precedes its children.
    /// `None` when the superclass relation has a cycle.
    pub fn topological_order(&self) -> Option<Vec<&str>> {
        let mut placed: BTreeSet<&str> = BTreeSet::new();
        let mut order = Vec::with_capacity(self.classes.len());
        while order.len() < self.classes.len() {
            let before = order.len();
            for (name, class) in &self.classes {
                if placed.contains(name.as_str()) {
                    continue;
                }
                let ready = match &class.superclass {
                    Superclass::InModel(p) => {
                        placed.contains(p.as_str()) || !self.classes.contains_key(p)
                    }
                    _ => true,
                };
                if ready && class.superclass.name() != Some(name.as_str()) {
                    placed.insert(name);
                    order.push(name.as_str());
                }
            }
            if order.len() == before {
                return None;
            }
        }
        Some(order)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    SelfInheritance,
    /// Members of the cycle, sorted.
    Cycle(Vec<String>),
    UnknownSuperclass(String),
    /// Marked external but the parent is part of the model.
    ExternalShadowsClass(String),
    DuplicateField(String),
    DuplicateMethod(String, usize),
    ArityMismatch(String),
    UndeclaredFieldUse { method: String, field: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub class: String,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            Rule::SelfInheritance => write!(f, "self-inheritance at {}", self.class),
            Rule::Cycle(members) => write!(f, "cycle {{{}}}", members.join(",")),
            Rule::UnknownSuperclass(p) => {
                write!(f, "{} extends unknown in-model class {}", self.class, p)
            }
            Rule::ExternalShadowsClass(p) => {
                write!(f, "{} marks in-model class {} as external", self.class, p)
            }
            Rule::DuplicateField(n) => write!(f, "duplicate field {}.{}", self.class, n),
            Rule::DuplicateMethod(n, a) => {
                write!(f, "duplicate method {}.{}/{}", self.class, n, a)
            }
            Rule::ArityMismatch(m) => {
                write!(f, "arity does not match parameter list at {}.{}", self.class, m)
            }
            Rule::UndeclaredFieldUse { method, field } => write!(
                f,
                "{}.{} uses undeclared field {}",
                self.class, method, field
            ),
        }
    }
}

/// Checks every structural invariant of the model. The result is sorted and
/// therefore independent of class insertion order.
pub fn validate_model(model: &ClassModel) -> Vec<Violation> {
    let mut out = BTreeSet::new();

    for (name, class) in &model.classes {
        let v = |rule| Violation {
            class: name.clone(),
            rule,
        };
        match &class.superclass {
            Superclass::InModel(p) if p == name => {
                out.insert(v(Rule::SelfInheritance));
            }
            Superclass::External(p) if p == name => {
                out.insert(v(Rule::SelfInheritance));
            }
            Superclass::InModel(p) if !model.classes.contains_key(p) => {
                out.insert(v(Rule::UnknownSuperclass(p.clone())));
            }
            Superclass::External(p) if model.classes.contains_key(p) => {
                out.insert(v(Rule::ExternalShadowsClass(p.clone())));
            }
            _ => {}
        }

        let mut seen_fields = BTreeSet::new();
        for field in &class.fields {
            if !seen_fields.insert(field.name.as_str()) {
                out.insert(v(Rule::DuplicateField(field.name.clone())));
            }
        }
        let mut seen_methods = BTreeSet::new();
        for method in &class.methods {
            if !seen_methods.insert(method.identity()) {
                out.insert(v(Rule::DuplicateMethod(method.name.clone(), method.arity)));
            }
            if method.arity != method.param_types.len() {
                out.insert(v(Rule::ArityMismatch(method.name.clone())));
            }
            for used in &method.uses_fields {
                if !seen_fields.contains(used.as_str()) {
                    out.insert(v(Rule::UndeclaredFieldUse {
                        method: method.name.clone(),
                        field: used.clone(),
                    }));
                }
            }
        }
    }

    for cycle in find_cycles(model) {
        out.insert(Violation {
            class: cycle[0].clone(),
            rule: Rule::Cycle(cycle),
        });
    }

    out.into_iter().collect()
}

/// Cycles of length ≥ 2 in the in-model superclass relation, each as a
/// sorted member list.
pub(crate) fn find_cycles(model: &ClassModel) -> BTreeSet<Vec<String>> {
    let mut cycles = BTreeSet::new();
    for start in model.classes.keys() {
        let mut path: Vec<&str> = vec![start];
        let mut current = start.as_str();
        while let Some(Superclass::InModel(parent)) =
            model.classes.get(current).map(|c| &c.superclass)
        {
            if parent == current {
                break;
            }
            if let Some(pos) = path.iter().position(|p| *p == parent) {
                let mut members: Vec<String> =
                    path[pos..].iter().map(|s| s.to_string()).collect();
                members.sort();
                cycles.insert(members);
                break;
            }
            if !model.classes.contains_key(parent) {
                break;
            }
            path.push(parent);
            current = parent;
        }
    }
    cycles
}

/// One module's six CK metric values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub module: String,
    pub cbo: u64,
    pub dit: u64,
    pub lcom: u64,
    pub noc: u64,
    pub rfc: u64,
    pub wmc: u64,
}

impl MetricsRow {
    pub fn get(&self, metric: Metric) -> u64 {
        match metric {
            Metric::Cbo => self.cbo,
            Metric::Dit => self.dit,
            Metric::Lcom => self.lcom,
            Metric::Noc => self.noc,
            Metric::Rfc => self.rfc,
            Metric::Wmc => self.wmc,
        }
    }

    pub fn set(&mut self, metric: Metric, value: u64) {
        match metric {
            Metric::Cbo => self.cbo = value,
            Metric::Dit => self.dit = value,
            Metric::Lcom => self.lcom = value,
            Metric::Noc => self.noc = value,
            Metric::Rfc => self.rfc = value,
            Metric::Wmc => self.wmc = value,
        }
    }

    pub fn values(&self) -> [u64; 6] {
        Metric::ALL.map(|m| self.get(m))
    }
}

/// Observed defects and bug-fix effort for one module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectRow {
    pub module: String,
    pub defects: u64,
    #[serde(default)]
    pub fix_hours: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(classes: Vec<ClassInfo>) -> ClassModel {
        ClassModel::from_classes(classes, [])
    }

    #[test]
    fn well_formed_model_has_no_violations() {
        let m = model(vec![ClassInfo::new("A"), ClassInfo::new("B").extends("A")]);
        assert!(validate_model(&m).is_empty());
        assert_eq!(m.topological_order().unwrap(), vec!["A", "B"]);
    }

    #[test]
    fn self_inheritance_is_reported() {
        let m = model(vec![ClassInfo::new("B").extends("B")]);
        assert_eq!(
            validate_model(&m),
            vec![Violation {
                class: "B".into(),
                rule: Rule::SelfInheritance
            }]
        );
        assert_eq!(validate_model(&m)[0].to_string(), "self-inheritance at B");
    }

    #[test]
    fn two_cycle_is_reported_once() {
        let m = model(vec![
            ClassInfo::new("A").extends("B"),
            ClassInfo::new("B").extends("A"),
        ]);
        let v = validate_model(&m);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::Cycle(vec!["A".into(), "B".into()]));
        assert_eq!(v[0].to_string(), "cycle {A,B}");
        assert!(m.topological_order().is_none());
    }

    #[test]
    fn class_hanging_off_a_cycle_does_not_duplicate_it() {
        let m = model(vec![
            ClassInfo::new("A").extends("B"),
            ClassInfo::new("B").extends("C"),
            ClassInfo::new("C").extends("A"),
            ClassInfo::new("D").extends("A"),
        ]);
        let v = validate_model(&m);
        assert_eq!(v.len(), 1);
        assert_eq!(
            v[0].rule,
            Rule::Cycle(vec!["A".into(), "B".into(), "C".into()])
        );
    }

    #[test]
    fn member_level_violations() {
        let c = ClassInfo::new("A")
            .field("x", "int")
            .field("x", "int")
            .method(MethodInfo::new("m", &[], "void").uses(["y"]))
            .method(MethodInfo::new("m", &[], "int"));
        let mut bad = MethodInfo::new("n", &["int"], "void");
        bad.arity = 2;
        let m = model(vec![c.method(bad)]);
        let rules: Vec<Rule> = validate_model(&m).into_iter().map(|v| v.rule).collect();
        assert!(rules.contains(&Rule::DuplicateField("x".into())));
        assert!(rules.contains(&Rule::DuplicateMethod("m".into(), 0)));
        assert!(rules.contains(&Rule::ArityMismatch("n".into())));
        assert!(rules.contains(&Rule::UndeclaredFieldUse {
            method: "m".into(),
            field: "y".into()
        }));
    }

    #[test]
    fn superclass_reference_consistency() {
        let m = model(vec![
            ClassInfo::new("A").extends("Missing"),
            ClassInfo::new("B").extends_external("A"),
            ClassInfo::new("C").extends_external("Q"),
        ]);
        let rules: Vec<Rule> = validate_model(&m).into_iter().map(|v| v.rule).collect();
        assert_eq!(
            rules,
            vec![
                Rule::UnknownSuperclass("Missing".into()),
                Rule::ExternalShadowsClass("A".into())
            ]
        );
    }

    #[test]
    fn metric_parse_is_case_insensitive() {
        assert_eq!(Metric::parse("LCOM"), Some(Metric::Lcom));
        assert_eq!(Metric::parse("wmc"), Some(Metric::Wmc));
        assert_eq!(Metric::parse("loc"), None);
    }
}
