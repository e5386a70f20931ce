//! Generators, brute-force oracles and property bodies shared by the
//! property tests and the acceptance runner.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ckm_core::interchange::{model_from_json, model_to_json};
use ckm_core::model::{base_type, is_primitive, validate_model};
use ckm_core::regions::{self, CutProvenance, CutSpec};
use ckm_core::source::{build_class_model, parse_source, parse_sources};
use ckm_core::stats::{ols_fit, DesignMatrix, RegressionResult};
use ckm_core::{ClassInfo, ClassModel, DefectRow, Error, MethodInfo, Metric, MetricsRow, Superclass};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub type Check = Result<(), TestCaseError>;

// ---------------------------------------------------------------- oracles

/// Per-class metrics by direct enumeration, written without the library's
/// metric functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleMetrics {
    pub cbo: u64,
    pub dit: u64,
    pub lcom: u64,
    pub noc: u64,
    pub rfc: u64,
    pub wmc: u64,
}

pub fn oracle_lcom(uses: &[BTreeSet<String>]) -> u64 {
    let (mut p, mut q) = (0i64, 0i64);
    for i in 0..uses.len() {
        for j in 0..uses.len() {
            if i >= j {
                continue;
            }
            let mut shared = false;
            for a in &uses[i] {
                for b in &uses[j] {
                    if a == b {
                        shared = true;
                    }
                }
            }
            if shared {
                q += 1;
            } else {
                p += 1;
            }
        }
    }
    if p > q {
        (p - q) as u64
    } else {
        0
    }
}

pub fn oracle_metrics(model: &ClassModel, class: &ClassInfo) -> OracleMetrics {
    let mut dit = 0;
    let mut cur = class.superclass.clone();
    loop {
        match cur {
            Superclass::None => break,
            Superclass::External(_) => {
                dit += 1;
                break;
            }
            Superclass::InModel(p) => {
                dit += 1;
                cur = model.classes[&p].superclass.clone();
            }
        }
    }

    let noc = model
        .classes
        .values()
        .filter(|c| c.superclass == Superclass::InModel(class.name.clone()))
        .count() as u64;

    let mut types: Vec<String> = Vec::new();
    if let Superclass::InModel(p) | Superclass::External(p) = &class.superclass {
        types.push(p.clone());
    }
    types.extend(class.interfaces.iter().cloned());
    for f in &class.fields {
        types.push(f.type_name.clone());
    }
    for m in &class.methods {
        types.extend(m.param_types.iter().cloned());
        types.push(m.return_type.clone());
        types.extend(m.referenced_types.iter().cloned());
        for inv in &m.invocations {
            if let Some(r) = &inv.receiver {
                types.push(r.clone());
            }
        }
    }
    let mut coupled: Vec<String> = Vec::new();
    for t in types {
        let t = base_type(&t).to_string();
        if !is_primitive(&t) && t != class.name && !coupled.contains(&t) {
            coupled.push(t);
        }
    }

    let mut response: Vec<(Option<String>, String, usize)> = Vec::new();
    let mut add = |k: (Option<String>, String, usize)| {
        if !response.contains(&k) {
            response.push(k);
        }
    };
    for m in &class.methods {
        add((Some(class.name.clone()), m.name.clone(), m.arity));
    }
    for m in &class.methods {
        for inv in &m.invocations {
            add((inv.receiver.clone(), inv.method.clone(), inv.arity));
        }
    }

    let uses: Vec<BTreeSet<String>> = class.methods.iter().map(|m| m.uses_fields.clone()).collect();
    OracleMetrics {
        cbo: coupled.len() as u64,
        dit,
        lcom: oracle_lcom(&uses),
        noc,
        rfc: response.len() as u64,
        wmc: class.methods.len() as u64,
    }
}

/// Module sums, except DIT which takes the maximum.
pub fn oracle_modules(model: &ClassModel) -> Vec<MetricsRow> {
    let mut rows: BTreeMap<String, MetricsRow> = BTreeMap::new();
    for class in model.classes.values() {
        let module = model.modules[&class.name].clone();
        let m = oracle_metrics(model, class);
        let row = rows.entry(module.clone()).or_insert(MetricsRow {
            module,
            cbo: 0,
            dit: 0,
            lcom: 0,
            noc: 0,
            rfc: 0,
            wmc: 0,
        });
        row.cbo += m.cbo;
        row.dit = row.dit.max(m.dit);
        row.lcom += m.lcom;
        row.noc += m.noc;
        row.rfc += m.rfc;
        row.wmc += m.wmc;
    }
    rows.into_values().collect()
}

/// Per-bin (members, defect sum, metric sum) by scanning each interval
/// explicitly: [min, c1), [c1, c2), ..., [ck, max].
pub fn oracle_bins(
    metrics: &[MetricsRow],
    defects: &[DefectRow],
    metric: Metric,
    cuts: &[f64],
) -> Vec<(BTreeSet<String>, u64, u64)> {
    let mut edges = vec![f64::NEG_INFINITY];
    edges.extend_from_slice(cuts);
    edges.push(f64::INFINITY);
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let mut members = BTreeSet::new();
        let (mut d, mut s) = (0, 0);
        for row in metrics {
            let v = row.get(metric) as f64;
            if w[0] <= v && v < w[1] {
                members.insert(row.module.clone());
                d += defects.iter().find(|x| x.module == row.module).unwrap().defects;
                s += row.get(metric);
            }
        }
        out.push((members, d, s));
    }
    out
}

/// Adaptive Simpson quadrature on [a, b].
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// ∫_0^x t^(a-1) (1-t)^(b-1) dt, scaled by exp(-log_scale), with t = u^4
/// near 0 and 1 - t = v^4 near 1 so the integrand stays smooth for a, b < 1.
fn incomplete_beta_integral(x: f64, a: f64, b: f64, log_scale: f64) -> f64 {
    let k: f64 = 4.0;
    let tol = 1e-13;
    let g = |t: f64, s: f64, p: f64, q: f64| {
        // k s^(k p - 1) (1 - t)^(q - 1) with t = s^k, all in log space
        (k.ln() + (k * p - 1.0) * s.ln() + (q - 1.0) * (1.0 - t).ln() - log_scale).exp()
    };
    let lower = |u: f64| if u == 0.0 { 0.0 } else { g(u.powf(k), u, a, b) };
    let mut total = adaptive_simpson(&lower, 0.0, x.min(0.5).powf(1.0 / k), tol);
    if x > 0.5 {
        let upper = |v: f64| if v == 0.0 { 0.0 } else { g(v.powf(k), v, b, a) };
        total += adaptive_simpson(&upper, (1.0 - x).powf(1.0 / k), 0.5f64.powf(1.0 / k), tol);
    }
    total
}

/// I_x(a, b) as a ratio of two quadratures. For a, b > 1 the integrand is
/// scaled by its value at the mode so both integrals are of order one.
pub fn oracle_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    let log_scale = if a > 1.0 && b > 1.0 {
        let mode = (a - 1.0) / (a + b - 2.0);
        (a - 1.0) * mode.ln() + (b - 1.0) * (1.0 - mode).ln()
    } else {
        0.0
    };
    incomplete_beta_integral(x, a, b, log_scale) / incomplete_beta_integral(1.0, a, b, log_scale)
}

/// Parses the bundled toy sources with the bundled module map.
pub fn toy_model() -> ClassModel {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");
    let mut files: Vec<(String, String)> = std::fs::read_dir(format!("{root}/toy_src"))
        .unwrap()
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&path).unwrap())
        })
        .collect();
    files.sort();
    let modules =
        ckm_core::interchange::load_module_map(format!("{root}/toy_modules.csv")).unwrap();
    build_class_model(parse_sources(&files).unwrap(), &modules).unwrap()
}

/// The committed hand-enumerated toy tables: per class
/// (class, module, [cbo, dit, lcom, noc, rfc, wmc]) and module rows.
pub fn toy_expected() -> (Vec<(String, String, [u64; 6])>, Vec<MetricsRow>) {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");
    let text = std::fs::read_to_string(format!("{root}/toy_expected_class_metrics.csv")).unwrap();
    let classes = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let mut v = [0u64; 6];
            for i in 0..6 {
                v[i] = f[i + 2].parse().unwrap();
            }
            (f[0].to_string(), f[1].to_string(), v)
        })
        .collect();
    let modules =
        ckm_core::dataset::load_metrics_csv(format!("{root}/toy_expected_metrics.csv")).unwrap();
    (classes, modules)
}

// ------------------------------------------------------------- generators

fn type_pool(rng: &mut StdRng, classes: usize) -> String {
    match rng.random_range(0..6) {
        0 => "int".into(),
        1 => "double".into(),
        2 => "String".into(),
        3 => format!("C{}[]", rng.random_range(0..classes)),
        _ => format!("C{}", rng.random_range(0..classes)),
    }
}

/// A random valid class model: acyclic inheritance (parents have lower
/// indices), unique members, field uses drawn from declared fields.
pub fn random_model(seed: u64) -> ClassModel {
    let mut rng = StdRng::seed_from_u64(seed);
    let k = rng.random_range(1..8);
    let mut classes = Vec::new();
    for i in 0..k {
        let name = format!("C{i}");
        let mut c = ClassInfo::new(&name);
        if i > 0 && rng.random_bool(0.4) {
            c = c.extends(&format!("C{}", rng.random_range(0..i)));
        } else if rng.random_bool(0.15) {
            c = c.extends_external(&format!("Ext{}", rng.random_range(0..3)));
        }
        if rng.random_bool(0.3) {
            c = c.implements(["Runnable", "Comparable"][rng.random_range(0..2)]);
        }
        let nf = rng.random_range(0..5);
        for f in 0..nf {
            let t = type_pool(&mut rng, k);
            c = c.field(&format!("f{f}"), &t);
        }
        let mut seen = BTreeSet::new();
        for _ in 0..rng.random_range(0..6) {
            let ctor = rng.random_bool(0.2);
            let mname = if ctor { name.clone() } else { format!("m{}", rng.random_range(0..4)) };
            let arity = rng.random_range(0..3);
            if !seen.insert((mname.clone(), arity)) {
                continue;
            }
            let params: Vec<String> = (0..arity).map(|_| type_pool(&mut rng, k)).collect();
            let params: Vec<&str> = params.iter().map(String::as_str).collect();
            let mut m = if ctor {
                MethodInfo::constructor(&name, &params)
            } else {
                let ret = if rng.random_bool(0.4) { "void".into() } else { type_pool(&mut rng, k) };
                MethodInfo::new(&mname, &params, &ret)
            };
            for f in 0..nf {
                if rng.random_bool(0.35) {
                    m = m.uses([format!("f{f}").as_str()]);
                }
            }
            for _ in 0..rng.random_range(0..4) {
                let recv = match rng.random_range(0..3) {
                    0 => None,
                    1 => Some(format!("C{}", rng.random_range(0..k))),
                    _ => Some("String".to_string()),
                };
                m = m.calls(recv.as_deref(), &format!("m{}", rng.random_range(0..4)), rng.random_range(0..3));
            }
            if rng.random_bool(0.3) {
                let t = format!("C{}", rng.random_range(0..k));
                if t != name {
                    m = m.refs([t.as_str()]);
                }
            }
            c = c.method(m);
        }
        classes.push(c);
    }
    let modules = (0..k).map(|i| (format!("C{i}"), format!("mod{}", i % 2)));
    let model = ClassModel::from_classes(classes, modules);
    assert!(validate_model(&model).is_empty(), "generator produced an invalid model");
    model
}

const PAYLOADS: &[&str] = &[
    "x.fake(1); this.f0 = 3;",
    "new Bogus(2, 3); f1 = g();",
    "C0 trap = new C0(); trap.m1(1);",
    "super.m0(); this.f2.m3(4, 5);",
    "m2(m2(1), 2);",
];

pub struct GeneratedSource {
    /// (file name, text)
    pub files: Vec<(String, String)>,
    pub modules: BTreeMap<String, String>,
}

/// Renders a random program in the source subset. With `noise`, comments
/// holding fake code are inserted between statements and members, and
/// string arguments carry fake code; without it both are blank. The two
/// renderings of one seed must yield identical models.
pub fn random_source(seed: u64, noise: bool) -> GeneratedSource {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut noise_rng = StdRng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let k: usize = rng.random_range(1..6);
    let nfiles = rng.random_range(1..=k.min(3));

    let mut comment = |out: &mut String| {
        if !noise || !noise_rng.random_bool(0.5) {
            return;
        }
        let p = PAYLOADS[noise_rng.random_range(0..PAYLOADS.len())];
        if noise_rng.random_bool(0.5) {
            out.push_str(&format!(" /* {p} */ "));
        } else {
            out.push_str(&format!(" // {p}\n"));
        }
    };
    let mut payload_rng = StdRng::seed_from_u64(seed.rotate_left(17));
    let mut string = || {
        if noise {
            PAYLOADS[payload_rng.random_range(0..PAYLOADS.len())].to_string()
        } else {
            String::new()
        }
    };

    let mut texts = vec![String::new(); nfiles];
    let mut modules = BTreeMap::new();
    for i in 0..k {
        let name = format!("C{i}");
        modules.insert(name.clone(), format!("mod{}", i % 2));
        let mut out = String::new();
        comment(&mut out);
        out.push_str(&format!("class {name}"));
        if i > 0 && rng.random_bool(0.4) {
            out.push_str(&format!(" extends C{}", rng.random_range(0..i)));
        } else if rng.random_bool(0.2) {
            out.push_str(" extends Base");
        }
        out.push_str(" {\n");

        let nf = rng.random_range(0..4);
        let mut field_types = Vec::new();
        for f in 0..nf {
            let t = if rng.random_bool(0.5) { "int".to_string() } else { format!("C{}", rng.random_range(0..k)) };
            comment(&mut out);
            out.push_str(&format!("  {t} f{f};\n"));
            field_types.push(t);
        }

        let mut seen = BTreeSet::new();
        for _ in 0..rng.random_range(0..5) {
            let ctor = rng.random_bool(0.2);
            let mname = if ctor { name.clone() } else { format!("m{}", rng.random_range(0..3)) };
            let arity = rng.random_range(0..3);
            if !seen.insert((mname.clone(), arity)) {
                continue;
            }
            let params: Vec<String> = (0..arity)
                .map(|a| {
                    let t = if rng.random_bool(0.5) { "int".to_string() } else { format!("C{}", rng.random_range(0..k)) };
                    format!("{t} a{a}")
                })
                .collect();
            comment(&mut out);
            if ctor {
                out.push_str(&format!("  {name}({}) {{\n", params.join(", ")));
            } else {
                let ret = if rng.random_bool(0.5) { "void" } else { "int" };
                out.push_str(&format!("  {ret} {mname}({}) {{\n", params.join(", ")));
            }
            let mut locals = 0;
            for _ in 0..rng.random_range(0..5) {
                comment(&mut out);
                let stmt = match rng.random_range(0..6) {
                    0 if nf > 0 => format!("this.f{} = 1;", rng.random_range(0..nf)),
                    1 if nf > 0 => format!("f{} = f{} + 2;", rng.random_range(0..nf), rng.random_range(0..nf)),
                    2 => {
                        let args: Vec<&str> = (0..rng.random_range(0..3)).map(|_| "1").collect();
                        format!("m{}({});", rng.random_range(0..3), args.join(", "))
                    }
                    3 if nf > 0 => {
                        let f = rng.random_range(0..nf);
                        format!("this.f{f}.m{}();", rng.random_range(0..3))
                    }
                    4 => {
                        let v = format!("v{locals}");
                        locals += 1;
                        let t = format!("C{}", rng.random_range(0..k));
                        format!("{t} {v} = new {t}(); {v}.m{}(1, 2);", rng.random_range(0..3))
                    }
                    _ => format!("log(\"{}\");", string()),
                };
                out.push_str(&format!("    {stmt}\n"));
            }
            out.push_str("  }\n");
        }
        out.push_str("}\n");
        texts[i % nfiles].push_str(&out);
    }
    let files = texts
        .into_iter()
        .enumerate()
        .map(|(i, t)| (format!("F{i}.java"), t))
        .collect();
    GeneratedSource { files, modules }
}

pub fn build(src: &GeneratedSource) -> Result<ClassModel, Error> {
    build_class_model(parse_sources(&src.files)?, &src.modules)
}

// -------------------------------------------------------------- strategies

pub fn arb_design() -> impl Strategy<Value = DesignMatrix> {
    (2usize..5, 0usize..20).prop_flat_map(|(p, extra)| {
        let n = p + 3 + extra;
        (
            prop::collection::vec(prop::collection::vec(-100.0f64..100.0, n), p),
            prop::collection::vec(-5.0f64..5.0, p + 1),
            prop::collection::vec(-50.0f64..50.0, n),
        )
            .prop_filter_map("degenerate design", move |(cols, coef, noise)| {
                let y: Vec<f64> = (0..n)
                    .map(|i| coef[0] + (0..p).map(|j| coef[j + 1] * cols[j][i]).sum::<f64>() + noise[i])
                    .collect();
                DesignMatrix::new(
                    (0..p).map(|j| format!("x{j}")).collect(),
                    (0..n).map(|i| format!("r{i}")).collect(),
                    cols,
                    y,
                )
                .ok()
            })
    })
}

pub fn arb_tables() -> impl Strategy<Value = (Vec<MetricsRow>, Vec<DefectRow>)> {
    prop::collection::vec((prop::array::uniform6(0u64..400), 0u64..120), 1..30).prop_map(|rows| {
        let metrics = rows
            .iter()
            .enumerate()
            .map(|(i, (v, _))| MetricsRow {
                module: format!("M{i}"),
                cbo: v[0],
                dit: v[1] / 50,
                lcom: v[2] * 20,
                noc: v[3],
                rfc: v[4],
                wmc: v[5] * 3,
            })
            .collect();
        let defects = rows
            .iter()
            .enumerate()
            .map(|(i, (_, d))| DefectRow {
                module: format!("M{i}"),
                defects: *d,
                fix_hours: *d as f64 * 1.5,
            })
            .collect();
        (metrics, defects)
    })
}

pub fn arb_metric() -> impl Strategy<Value = Metric> {
    prop::sample::select(Metric::ALL.to_vec())
}

pub fn arb_field_uses() -> impl Strategy<Value = Vec<BTreeSet<String>>> {
    prop::collection::vec(prop::collection::btree_set((0u8..6).prop_map(|f| format!("f{f}")), 0..4), 0..10)
}

// ---------------------------------------------------------------- checks

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

fn fit(design: &DesignMatrix) -> Result<RegressionResult, TestCaseError> {
    match ols_fit(design) {
        Ok(r) => Ok(r),
        Err(Error::SingularMatrix(_)) => Err(TestCaseError::reject("numerically singular")),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

/// Xᵀ(y − Xb) = 0 relative to ‖Xᵀy‖, intercept column included.
pub fn check_residual_orthogonality(design: &DesignMatrix) -> Check {
    let r = fit(design)?;
    let n = design.n();
    let mut cols: Vec<Vec<f64>> = vec![vec![1.0; n]];
    cols.extend((0..design.p()).map(|j| design.column(j).to_vec()));
    let y = design.response();
    let xty_norm = cols
        .iter()
        .map(|c| c.iter().zip(y).map(|(a, b)| a * b).sum::<f64>().powi(2))
        .sum::<f64>()
        .sqrt();
    for c in &cols {
        let dot: f64 = c.iter().zip(&r.residuals).map(|(a, e)| a * e).sum();
        prop_assert!(dot.abs() <= 1e-8 * xty_norm, "Xᵀe = {dot}, ‖Xᵀy‖ = {xty_norm}");
    }
    let ss = r.anova.ss_regression + r.anova.ss_residual;
    prop_assert!(close(ss, r.anova.ss_total, 1e-6));
    Ok(())
}

/// Scaling predictor j by c divides B_j by c. Fitted values, R², F and the
/// p-values are unchanged; t_j and beta_j keep their magnitude and take the
/// sign of c.
pub fn check_scale_equivariance(design: &DesignMatrix, j: usize, c: f64) -> Check {
    let j = j % design.p();
    let base = fit(design)?;
    let scaled = fit(&design.with_scaled_column(j, c))?;
    let tol = 1e-9;
    let ymax = design.response().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for (a, b) in base.fitted.iter().zip(&scaled.fitted) {
        prop_assert!((a - b).abs() <= tol * ymax, "fitted {a} vs {b}");
    }
    prop_assert!(close(base.r2, scaled.r2, tol));
    prop_assert!(close(base.anova.f_value, scaled.anova.f_value, tol));
    prop_assert!(close(base.anova.f_pvalue, scaled.anova.f_pvalue, tol));
    let sign = c.signum();
    for (k, (a, b)) in base.coefficients.iter().zip(&scaled.coefficients).enumerate() {
        let expect_b = if k == j { a.b / c } else { a.b };
        let expect_sign = if k == j { sign } else { 1.0 };
        prop_assert!(close(expect_b, b.b, tol), "B_{k}: {expect_b} vs {}", b.b);
        prop_assert!(close(a.t * expect_sign, b.t, tol), "t_{k}: {} vs {}", a.t, b.t);
        prop_assert!(close(a.p, b.p, tol), "p_{k}: {} vs {}", a.p, b.p);
        let (ba, bb) = (a.beta.unwrap(), b.beta.unwrap());
        prop_assert!(close(ba * expect_sign, bb, tol), "beta_{k}: {ba} vs {bb}");
    }
    Ok(())
}

/// Shifting predictor j leaves every slope and fitted value alone and moves
/// the intercept by −B_j·shift.
pub fn check_shift_invariance(design: &DesignMatrix, j: usize, shift: f64) -> Check {
    let j = j % design.p();
    let base = fit(design)?;
    let shifted = fit(&design.with_shifted_column(j, shift))?;
    let ymax = design.response().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for (a, b) in base.fitted.iter().zip(&shifted.fitted) {
        prop_assert!((a - b).abs() <= 1e-8 * ymax);
    }
    for (a, b) in base.coefficients.iter().zip(&shifted.coefficients) {
        prop_assert!(close(a.b, b.b, 1e-8));
    }
    let expect = base.intercept.b - base.coefficients[j].b * shift;
    prop_assert!((expect - shifted.intercept.b).abs() <= 1e-8 * expect.abs().max(ymax));
    Ok(())
}

/// Bins are disjoint, cover every module, conserve the defect total, match
/// the interval oracle, and do not depend on row order.
pub fn check_partition(
    metrics: &[MetricsRow],
    defects: &[DefectRow],
    metric: Metric,
    cuts: (f64, Option<f64>),
) -> Check {
    let spec = CutSpec::new(metric, cuts.0, cuts.1, CutProvenance::User);
    let bins = regions::partition(metrics, defects, &spec).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(bins.len(), spec.cuts.len() + 1);

    let mut seen = BTreeSet::new();
    for b in &bins {
        for m in &b.members {
            prop_assert!(seen.insert(m.clone()), "{} in two bins", m);
        }
    }
    prop_assert_eq!(seen.len(), metrics.len());
    let total: u64 = defects.iter().map(|d| d.defects).sum();
    prop_assert_eq!(bins.iter().map(|b| b.defect_sum).sum::<u64>(), total);

    let oracle = oracle_bins(metrics, defects, metric, &spec.cuts);
    for (b, (members, d, s)) in bins.iter().zip(&oracle) {
        let got: BTreeSet<String> = b.members.iter().cloned().collect();
        prop_assert_eq!(&got, members);
        prop_assert_eq!(b.defect_sum, *d);
        prop_assert_eq!(b.metric_sum, *s);
    }

    let mut reversed = metrics.to_vec();
    reversed.reverse();
    let again = regions::partition(&reversed, defects, &spec).unwrap();
    for (a, b) in bins.iter().zip(&again) {
        prop_assert_eq!(a.ratio(), b.ratio());
    }

    let collapsed = CutSpec::new(metric, cuts.0, Some(cuts.0), CutProvenance::User);
    let merged = regions::partition(metrics, defects, &collapsed).unwrap();
    prop_assert_eq!(merged.len(), 2);
    prop_assert_eq!(merged.iter().map(|b| b.defect_sum).sum::<u64>(), total);
    Ok(())
}

/// LCOM equals max(P − Q, 0) and ignores method order.
pub fn check_lcom(uses: &[BTreeSet<String>], order: &[usize]) -> Check {
    let class = |uses: &[BTreeSet<String>]| {
        let mut c = ClassInfo::new("K");
        for f in 0..6 {
            c = c.field(&format!("f{f}"), "int");
        }
        for (i, u) in uses.iter().enumerate() {
            c = c.method(MethodInfo::new(&format!("m{i}"), &[], "void").uses(u.iter().map(String::as_str)));
        }
        c
    };
    let got = ckm_core::metrics::lcom(&class(uses));
    prop_assert_eq!(got, oracle_lcom(uses));

    let mut keyed: Vec<(usize, &BTreeSet<String>)> = order.iter().copied().zip(uses).collect();
    keyed.sort_by_key(|(k, _)| *k);
    let permuted: Vec<BTreeSet<String>> = keyed.into_iter().map(|(_, u)| u.clone()).collect();
    prop_assert_eq!(ckm_core::metrics::lcom(&class(&permuted)), got);
    Ok(())
}

/// Same bytes give the same model: repeated parses, per-file against
/// parallel parsing, and any file order.
pub fn check_parser_determinism(seed: u64) -> Check {
    let src = random_source(seed, true);
    let a = build(&src).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let b = build(&src).unwrap();
    prop_assert_eq!(&a, &b);

    let sequential: Vec<Vec<ClassInfo>> = src
        .files
        .iter()
        .map(|(n, t)| parse_source(t, n).unwrap())
        .collect();
    let c = build_class_model(sequential, &src.modules).unwrap();
    prop_assert_eq!(&a, &c);

    let mut shuffled = src.files.clone();
    shuffled.shuffle(&mut StdRng::seed_from_u64(seed));
    let d = build_class_model(parse_sources(&shuffled).unwrap(), &src.modules).unwrap();
    prop_assert_eq!(model_to_json(&a), model_to_json(&d));
    Ok(())
}

/// Comments and string literals holding code contribute no facts.
pub fn check_injection(seed: u64) -> Check {
    let noisy = build(&random_source(seed, true)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let clean = build(&random_source(seed, false)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(noisy, clean);
    Ok(())
}

/// save → load is the identity, and saving again gives the same bytes.
pub fn check_round_trip(seed: u64) -> Check {
    let model = random_model(seed);
    let json = model_to_json(&model);
    let back = model_from_json(&json).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&back, &model);
    prop_assert_eq!(model_to_json(&back), json);
    Ok(())
}

/// Library metrics agree with the enumeration oracle on a random model.
pub fn check_metrics_oracle(seed: u64) -> Check {
    let model = random_model(seed);
    for c in ckm_core::metrics::all_class_metrics(&model) {
        let o = oracle_metrics(&model, &model.classes[&c.class]);
        prop_assert_eq!(
            (c.cbo, c.dit, c.lcom, c.noc, c.rfc, c.wmc),
            (o.cbo, o.dit, o.lcom, o.noc, o.rfc, o.wmc),
            "class {}",
            c.class
        );
        prop_assert!(c.rfc >= c.wmc);
    }
    let rows = ckm_core::metrics::aggregate_modules(&model, &Default::default()).unwrap();
    prop_assert_eq!(rows, oracle_modules(&model));
    Ok(())
}
