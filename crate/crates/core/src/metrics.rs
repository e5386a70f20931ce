//! The six CK metrics per class, and their roll-up into per-module rows.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{base_type, is_primitive, ClassInfo, ClassModel, Metric, MetricsRow, Superclass};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassMetrics {
    pub class: String,
    pub wmc: u64,
    pub dit: u64,
    pub noc: u64,
    pub cbo: u64,
    pub rfc: u64,
    pub lcom: u64,
}

impl ClassMetrics {
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
}

/// Methods declared by the class, constructors included.
pub fn wmc(class: &ClassInfo) -> u64 {
    class.methods.len() as u64
}

/// Superclass edges up to the root. An external parent is treated as a root,
/// so extending it gives depth 1.
pub fn dit(class: &ClassInfo, model: &ClassModel) -> u64 {
    let mut depth = 0;
    let mut current = class;
    // Bounded by the class count so an unvalidated cycle cannot hang.
    for _ in 0..=model.classes.len() {
        match &current.superclass {
            Superclass::None => break,
            Superclass::External(_) => {
                depth += 1;
                break;
            }
            Superclass::InModel(parent) => {
                depth += 1;
                match model.get(parent) {
                    Some(p) => current = p,
                    None => break,
                }
            }
        }
    }
    depth
}

/// Immediate in-model subclasses.
pub fn noc(class: &ClassInfo, model: &ClassModel) -> u64 {
    model
        .classes
        .values()
        .filter(|c| matches!(&c.superclass, Superclass::InModel(p) if *p == class.name))
        .count() as u64
}

/// Distinct other class names this class refers to (fan-out).
pub fn coupled_classes(class: &ClassInfo) -> BTreeSet<&str> {
    let mut names: BTreeSet<&str> = BTreeSet::new();
    if let Some(p) = class.superclass.name() {
        names.insert(p);
    }
    names.extend(class.interfaces.iter().map(String::as_str));
    names.extend(class.fields.iter().map(|f| f.type_name.as_str()));
    for m in &class.methods {
        names.extend(m.param_types.iter().map(String::as_str));
        names.insert(m.return_type.as_str());
        names.extend(m.referenced_types.iter().map(String::as_str));
        names.extend(m.invocations.iter().filter_map(|i| i.receiver.as_deref()));
    }
    names
        .into_iter()
        .map(base_type)
        .filter(|n| !is_primitive(n) && *n != class.name)
        .collect()
}

pub fn cbo(class: &ClassInfo) -> u64 {
    coupled_classes(class).len() as u64
}

/// Own methods plus everything they invoke directly, keyed by
/// (receiver type, name, arity). Unresolved receivers share one key per
/// (name, arity).
pub fn response_set(class: &ClassInfo) -> BTreeSet<(Option<&str>, &str, usize)> {
    let mut set: BTreeSet<(Option<&str>, &str, usize)> = class
        .methods
        .iter()
        .map(|m| (Some(class.name.as_str()), m.name.as_str(), m.arity))
        .collect();
    for m in &class.methods {
        set.extend(
            m.invocations
                .iter()
                .map(|i| (i.receiver.as_deref(), i.method.as_str(), i.arity)),
        );
    }
    set
}

pub fn rfc(class: &ClassInfo) -> u64 {
    response_set(class).len() as u64
}

/// Method pairs with disjoint field usage minus pairs sharing a field,
/// clamped at zero.
pub fn lcom(class: &ClassInfo) -> u64 {
    let methods = &class.methods;
    let (mut disjoint, mut shared) = (0u64, 0u64);
    for (i, a) in methods.iter().enumerate() {
        for b in &methods[i + 1..] {
            if a.uses_fields.is_disjoint(&b.uses_fields) {
                disjoint += 1;
            } else {
                shared += 1;
            }
        }
    }
    disjoint.saturating_sub(shared)
}

pub fn class_metrics(class: &ClassInfo, model: &ClassModel) -> ClassMetrics {
    ClassMetrics {
        class: class.name.clone(),
        wmc: wmc(class),
        dit: dit(class, model),
        noc: noc(class, model),
        cbo: cbo(class),
        rfc: rfc(class),
        lcom: lcom(class),
    }
}

/// Metrics for every class, ordered by class name.
pub fn all_class_metrics(model: &ClassModel) -> Vec<ClassMetrics> {
    let classes: Vec<&ClassInfo> = model.classes.values().collect();
    classes
        .par_iter()
        .map(|c| class_metrics(c, model))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Aggregation {
    Sum,
    Max,
    /// Arithmetic mean rounded half away from zero.
    MeanRounded,
}

impl Aggregation {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sum" => Some(Aggregation::Sum),
            "max" => Some(Aggregation::Max),
            "mean" => Some(Aggregation::MeanRounded),
            _ => None,
        }
    }

    fn apply(self, values: &[u64]) -> u64 {
        match self {
            Aggregation::Sum => values.iter().sum(),
            Aggregation::Max => values.iter().copied().max().unwrap_or(0),
            Aggregation::MeanRounded => {
                let sum: u64 = values.iter().sum();
                (sum as f64 / values.len() as f64).round() as u64
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregationPolicy {
    rules: BTreeMap<Metric, Aggregation>,
}

impl Default for AggregationPolicy {
    /// SUM everywhere except DIT, which takes the deepest class.
    fn default() -> Self {
        let rules = Metric::ALL
            .into_iter()
            .map(|m| {
                let rule = if m == Metric::Dit {
                    Aggregation::Max
                } else {
                    Aggregation::Sum
                };
                (m, rule)
            })
            .collect();
        AggregationPolicy { rules }
    }
}

impl AggregationPolicy {
    pub fn with(mut self, metric: Metric, rule: Aggregation) -> Self {
        self.rules.insert(metric, rule);
        self
    }

    pub fn rule(&self, metric: Metric) -> Aggregation {
        self.rules[&metric]
    }
}

/// One row per module, sorted by module name.
pub fn aggregate_modules(model: &ClassModel, policy: &AggregationPolicy) -> Result<Vec<MetricsRow>> {
    let per_class: BTreeMap<String, ClassMetrics> = all_class_metrics(model)
        .into_iter()
        .map(|m| (m.class.clone(), m))
        .collect();

    let mut modules: BTreeMap<&str, Vec<&ClassMetrics>> = BTreeMap::new();
    for module in model.modules.values() {
        modules.entry(module.as_str()).or_default();
    }
    for (class, metrics) in &per_class {
        let module = model
            .module_of(class)
            .ok_or_else(|| Error::UnmappedClass(class.clone()))?;
        modules.entry(module).or_default().push(metrics);
    }

    modules
        .into_iter()
        .map(|(module, members)| {
            if members.is_empty() {
                return Err(Error::EmptyModule(module.to_owned()));
            }
            let mut row = MetricsRow {
                module: module.to_owned(),
                cbo: 0,
                dit: 0,
                lcom: 0,
                noc: 0,
                rfc: 0,
                wmc: 0,
            };
            for metric in Metric::ALL {
                let values: Vec<u64> = members.iter().map(|m| m.get(metric)).collect();
                row.set(metric, policy.rule(metric).apply(&values));
            }
            Ok(row)
        })
        .collect()
}
