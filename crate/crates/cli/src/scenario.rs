//! Scenario files: a versioned JSON document naming a field, algebras,
//! modules and a list of checks. Unknown keys are rejected, and every size
//! parameter is bounded by one of the caps below.

use std::collections::BTreeMap;
use std::fmt;

use morita_core::algebra::{
    ground, group_algebra, group_algebra_from_table, matrix_algebra, path_algebra, product_algebra,
    truncated_polynomial,
};
use morita_core::bimodule::{random_bimodule, unit_bimodule, RandomSpec};
use morita_core::twochar::GroupAction;
use morita_core::{Algebra, Bimodule, Field, Group, Matrix, Scalar};
use serde::Deserialize;

/// The only schema version this build reads.
pub const SCHEMA_VERSION: u32 = 1;

pub const MAX_CHECKS: usize = 256;
pub const MAX_SEEDS: usize = 256;
pub const MAX_DEGREE: usize = 8;
pub const MAX_ALGEBRA_DIM: usize = 64;
pub const MAX_GROUP_ORDER: usize = 64;
pub const MAX_MODULE_DIM: usize = 64;
pub const MAX_RANDOM_DIM: usize = 16;
pub const MAX_WORDS: usize = 500;
pub const MAX_WORD_LENGTH: usize = 16;
pub const MAX_QUIVER_VERTICES: usize = 16;
pub const MAX_QUIVER_ARROWS: usize = 32;
pub const DEFAULT_DEGREE: usize = 4;

/// A matrix given row by row, entries as scalar strings.
pub type MatrixSpec = Vec<Vec<String>>;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    pub field: FieldSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraSpec>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Trivial,
    Cyclic(usize),
    Symmetric(usize),
    Product(Vec<GroupSpec>),
    Table(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSpec {
    Ground,
    Product { n: usize },
    Matrix { n: usize },
    Truncated { n: usize },
    Group { group: GroupSpec },
    Path { vertices: usize, arrows: Vec<(usize, usize)> },
    /// Structure constants: `products[i][j]` is `e_i e_j` in the basis.
    Raw { products: Vec<Vec<Vec<String>>>, unit: Vec<String> },
}

fn default_random_dim() -> usize {
    4
}

fn default_summands() -> usize {
    2
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    Unit {
        algebra: String,
    },
    Random {
        left: String,
        right: String,
        seed: u64,
        #[serde(default = "default_random_dim")]
        max_dim: usize,
        #[serde(default = "default_summands")]
        max_summands: usize,
    },
    /// Left action matrices `lambda[i]` of the basis of `left`, right action
    /// matrices `rho[j]` of the basis of `right`.
    Explicit {
        left: String,
        right: String,
        lambda: Vec<MatrixSpec>,
        rho: Vec<MatrixSpec>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionSpec {
    Regular {
        group: GroupSpec,
    },
    /// `permutations[g]` sends point `x` to `permutations[g][x]`.
    Permutation {
        group: GroupSpec,
        permutations: Vec<Vec<usize>>,
    },
    Automorphisms {
        group: GroupSpec,
        algebra: String,
        matrices: Vec<MatrixSpec>,
    },
}

fn default_degree() -> usize {
    DEFAULT_DEGREE
}

fn default_words() -> usize {
    20
}

fn default_word_length() -> usize {
    6
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    Triangles {
        algebra: Option<String>,
        #[serde(default)]
        modules: Vec<String>,
        #[serde(default)]
        seeds: usize,
        #[serde(default)]
        first_seed: u64,
    },
    MainTheorem {
        algebra: String,
        seeds: usize,
        #[serde(default)]
        first_seed: u64,
    },
    Composite {
        algebra: String,
        seeds: usize,
        #[serde(default)]
        first_seed: u64,
    },
    Mate {
        algebra: String,
        seeds: usize,
        #[serde(default)]
        first_seed: u64,
    },
    Induction {
        group: GroupSpec,
        subgroup: GroupSpec,
        embedding: Vec<usize>,
        representation: Vec<MatrixSpec>,
    },
    Lunts {
        algebra: String,
        seeds: usize,
        #[serde(default)]
        first_seed: u64,
        #[serde(default = "default_degree")]
        n_max: usize,
    },
    Umbra {
        algebra: String,
        seeds: usize,
        #[serde(default)]
        first_seed: u64,
    },
    Penumbra {
        algebra: String,
        seeds: usize,
        #[serde(default)]
        first_seed: u64,
    },
    TwoCharacter {
        action: ActionSpec,
        #[serde(default = "default_words")]
        words: usize,
        #[serde(default = "default_word_length")]
        max_length: usize,
        #[serde(default)]
        first_seed: u64,
        /// Expected values in row order `(g, h)` over commuting pairs.
        #[serde(default)]
        expect: Option<Vec<String>>,
    },
    Hochschild {
        algebra: String,
        module: Option<String>,
        #[serde(default = "default_degree")]
        n_max: usize,
        #[serde(default)]
        expect: Option<Vec<usize>>,
    },
}

impl CheckSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            CheckSpec::Triangles { .. } => "triangles",
            CheckSpec::MainTheorem { .. } => "main_theorem",
            CheckSpec::Composite { .. } => "composite",
            CheckSpec::Mate { .. } => "mate",
            CheckSpec::Induction { .. } => "induction",
            CheckSpec::Lunts { .. } => "lunts",
            CheckSpec::Umbra { .. } => "umbra",
            CheckSpec::Penumbra { .. } => "penumbra",
            CheckSpec::TwoCharacter { .. } => "two_character",
            CheckSpec::Hochschild { .. } => "hochschild",
        }
    }
}

/// A scenario that could not be read. Parse errors carry the position
/// reported by the JSON reader; semantic errors carry a path into the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    Parse { line: usize, column: usize, message: String },
    Invalid { path: String, message: String },
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Parse { line, column, message } => {
                write!(f, "parse error at line {line}, column {column}: {message}")
            }
            ScenarioError::Invalid { path, message } => write!(f, "invalid scenario at {path}: {message}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

fn invalid(path: impl Into<String>, message: impl fmt::Display) -> ScenarioError {
    ScenarioError::Invalid { path: path.into(), message: message.to_string() }
}

fn cap(path: &str, what: &str, value: usize, limit: usize) -> Result<(), ScenarioError> {
    if value > limit {
        return Err(invalid(path, format!("{what} {value} exceeds the cap {limit}")));
    }
    Ok(())
}

/// Reads a scenario document. Only syntax and the schema version are checked
/// here; `resolve` does the rest.
pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
    let s: Scenario = serde_json::from_str(text).map_err(|e| {
        let message = e.to_string();
        let message = message.split(" at line ").next().unwrap_or(&message).to_string();
        ScenarioError::Parse { line: e.line(), column: e.column(), message }
    })?;
    if s.schema != SCHEMA_VERSION {
        return Err(invalid("schema", format!("version {} is not supported (expected {SCHEMA_VERSION})", s.schema)));
    }
    Ok(s)
}

/// A scenario with its field, algebras and modules built and every check validated.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub scenario: Scenario,
    pub field: Field,
    pub algebras: BTreeMap<String, Algebra>,
    pub modules: BTreeMap<String, Bimodule>,
}

impl Resolved {
    pub fn algebra(&self, key: &str) -> &Algebra {
        &self.algebras[key]
    }
}

pub fn build_field(spec: FieldSpec) -> Result<Field, ScenarioError> {
    match spec {
        FieldSpec::Rationals => Ok(Field::Rationals),
        FieldSpec::Prime(p) => Field::prime(p).map_err(|e| invalid("field", e)),
    }
}

pub fn build_group(spec: &GroupSpec, path: &str) -> Result<Group, ScenarioError> {
    let order = group_order(spec, path)?;
    cap(path, "group order", order, MAX_GROUP_ORDER)?;
    Ok(match spec {
        GroupSpec::Trivial => Group::trivial(),
        GroupSpec::Cyclic(n) => Group::cyclic(*n),
        GroupSpec::Symmetric(n) => Group::symmetric(*n),
        GroupSpec::Product(parts) => {
            let mut g = Group::trivial();
            for (i, p) in parts.iter().enumerate() {
                let h = build_group(p, &format!("{path}.product[{i}]"))?;
                g = if i == 0 { h } else { Group::product(&g, &h) };
            }
            g
        }
        GroupSpec::Table(t) => Group::from_table("G", t.clone()).map_err(|e| invalid(path, e))?,
    })
}

/// The order of the described group, computed without building it.
fn group_order(spec: &GroupSpec, path: &str) -> Result<usize, ScenarioError> {
    match spec {
        GroupSpec::Trivial => Ok(1),
        GroupSpec::Cyclic(0) => Err(invalid(path, "cyclic group of order 0")),
        GroupSpec::Cyclic(n) => Ok(*n),
        GroupSpec::Symmetric(0) => Err(invalid(path, "symmetric group on 0 points")),
        GroupSpec::Symmetric(n) if *n > 5 => Err(invalid(path, format!("symmetric group on {n} points exceeds the cap"))),
        GroupSpec::Symmetric(n) => Ok((1..=*n).product()),
        GroupSpec::Product(parts) => {
            let mut order = 1usize;
            for (i, p) in parts.iter().enumerate() {
                order = order.saturating_mul(group_order(p, &format!("{path}.product[{i}]"))?);
            }
            Ok(order)
        }
        GroupSpec::Table(t) => Ok(t.len()),
    }
}

pub fn build_algebra(field: Field, spec: &AlgebraSpec, path: &str) -> Result<Algebra, ScenarioError> {
    let dim_cap = |what: &str, d: usize| cap(path, what, d, MAX_ALGEBRA_DIM);
    let a = match spec {
        AlgebraSpec::Ground => ground(field),
        AlgebraSpec::Product { n } => {
            dim_cap("dimension", *n)?;
            if *n == 0 {
                return Err(invalid(path, "product of zero copies"));
            }
            product_algebra(field, *n)
        }
        AlgebraSpec::Matrix { n } => {
            dim_cap("dimension", n.saturating_mul(*n))?;
            if *n == 0 {
                return Err(invalid(path, "matrices of size 0"));
            }
            matrix_algebra(field, *n)
        }
        AlgebraSpec::Truncated { n } => {
            dim_cap("dimension", *n)?;
            if *n == 0 {
                return Err(invalid(path, "truncation degree 0"));
            }
            truncated_polynomial(field, *n)
        }
        AlgebraSpec::Group { group } => match group {
            GroupSpec::Table(t) => {
                cap(path, "group order", t.len(), MAX_GROUP_ORDER)?;
                group_algebra_from_table(field, t.clone()).map_err(|e| invalid(format!("{path}.group"), e))?
            }
            g => group_algebra(field, &build_group(g, &format!("{path}.group"))?),
        },
        AlgebraSpec::Path { vertices, arrows } => {
            cap(path, "vertex count", *vertices, MAX_QUIVER_VERTICES)?;
            cap(path, "arrow count", arrows.len(), MAX_QUIVER_ARROWS)?;
            if let Some(i) = arrows.iter().position(|&(s, t)| s >= *vertices || t >= *vertices) {
                return Err(invalid(format!("{path}.arrows[{i}]"), "endpoint out of range"));
            }
            let a = path_algebra(field, *vertices, arrows).map_err(|e| invalid(path, e))?;
            dim_cap("dimension", a.dim())?;
            a
        }
        AlgebraSpec::Raw { products, unit } => {
            dim_cap("dimension", unit.len())?;
            let unit = parse_vector(field, unit, &format!("{path}.unit"))?;
            let mut table = Vec::with_capacity(products.len());
            for (i, row) in products.iter().enumerate() {
                let mut out = Vec::with_capacity(row.len());
                for (j, v) in row.iter().enumerate() {
                    out.push(parse_vector(field, v, &format!("{path}.products[{i}][{j}]"))?);
                }
                table.push(out);
            }
            Algebra::new("A", field, table, unit).map_err(|e| invalid(path, e))?
        }
    };
    Ok(a)
}

fn parse_vector(field: Field, v: &[String], path: &str) -> Result<Vec<Scalar>, ScenarioError> {
    v.iter()
        .enumerate()
        .map(|(i, s)| field.parse(s).map_err(|e| invalid(format!("{path}[{i}]"), e)))
        .collect()
}

pub fn parse_matrix(field: Field, m: &MatrixSpec, path: &str) -> Result<Matrix, ScenarioError> {
    let cols = m.first().map_or(0, Vec::len);
    cap(path, "matrix size", m.len().max(cols), MAX_MODULE_DIM)?;
    let mut rows = Vec::with_capacity(m.len());
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(invalid(format!("{path}[{i}]"), format!("row has {} entries, expected {cols}", row.len())));
        }
        rows.push(parse_vector(field, row, &format!("{path}[{i}]"))?);
    }
    Ok(Matrix::from_rows(field, cols, &rows))
}

fn parse_matrices(field: Field, ms: &[MatrixSpec], path: &str) -> Result<Vec<Matrix>, ScenarioError> {
    ms.iter().enumerate().map(|(i, m)| parse_matrix(field, m, &format!("{path}[{i}]"))).collect()
}

fn lookup<'a>(algebras: &'a BTreeMap<String, Algebra>, key: &str, path: &str) -> Result<&'a Algebra, ScenarioError> {
    algebras.get(key).ok_or_else(|| invalid(path, format!("unknown algebra {key:?}")))
}

fn build_module(
    field: Field,
    algebras: &BTreeMap<String, Algebra>,
    name: &str,
    spec: &ModuleSpec,
    path: &str,
) -> Result<Bimodule, ScenarioError> {
    match spec {
        ModuleSpec::Unit { algebra } => Ok(unit_bimodule(lookup(algebras, algebra, &format!("{path}.algebra"))?)),
        ModuleSpec::Random { left, right, seed, max_dim, max_summands } => {
            let l = lookup(algebras, left, &format!("{path}.left"))?;
            let r = lookup(algebras, right, &format!("{path}.right"))?;
            cap(path, "max_dim", *max_dim, MAX_RANDOM_DIM)?;
            cap(path, "max_summands", *max_summands, MAX_RANDOM_DIM)?;
            if *max_dim == 0 || *max_summands == 0 {
                return Err(invalid(path, "max_dim and max_summands must be positive"));
            }
            let spec = RandomSpec { max_dim: *max_dim, max_summands: *max_summands };
            random_bimodule(l, r, *seed, spec).map_err(|e| invalid(path, e))
        }
        ModuleSpec::Explicit { left, right, lambda, rho } => {
            let l = lookup(algebras, left, &format!("{path}.left"))?;
            let r = lookup(algebras, right, &format!("{path}.right"))?;
            let lambda = parse_matrices(field, lambda, &format!("{path}.lambda"))?;
            let rho = parse_matrices(field, rho, &format!("{path}.rho"))?;
            Bimodule::new(name, l, r, lambda, rho).map_err(|e| invalid(path, e))
        }
    }
}

/// Builds the action described by `spec`; errors are reported at `path`.
pub fn build_action(
    field: Field,
    algebras: &BTreeMap<String, Algebra>,
    spec: &ActionSpec,
    path: &str,
) -> Result<GroupAction, ScenarioError> {
    let r = match spec {
        ActionSpec::Regular { group } => {
            GroupAction::regular(field, &build_group(group, &format!("{path}.group"))?)
        }
        ActionSpec::Permutation { group, permutations } => {
            let g = build_group(group, &format!("{path}.group"))?;
            let points = permutations.first().map_or(0, Vec::len);
            cap(path, "point count", points, MAX_ALGEBRA_DIM)?;
            GroupAction::permutation(field, &g, permutations)
        }
        ActionSpec::Automorphisms { group, algebra, matrices } => {
            let g = build_group(group, &format!("{path}.group"))?;
            let a = lookup(algebras, algebra, &format!("{path}.algebra"))?;
            let ms = parse_matrices(field, matrices, &format!("{path}.matrices"))?;
            GroupAction::new(g, a.clone(), ms)
        }
    };
    r.map_err(|e| invalid(path, e))
}

fn check_seeds(path: &str, seeds: usize) -> Result<(), ScenarioError> {
    cap(path, "seed count", seeds, MAX_SEEDS)?;
    if seeds == 0 {
        return Err(invalid(format!("{path}.seeds"), "at least one seed is required"));
    }
    Ok(())
}

fn check_degree(path: &str, n_max: usize) -> Result<(), ScenarioError> {
    if n_max == 0 {
        return Err(invalid(format!("{path}.n_max"), "degree bound must be at least 1"));
    }
    cap(&format!("{path}.n_max"), "degree bound", n_max, MAX_DEGREE)
}

/// Validates one check against the built algebras and modules.
fn validate_check(r: &Resolved, spec: &CheckSpec, path: &str) -> Result<(), ScenarioError> {
    let alg = |key: &str| lookup(&r.algebras, key, &format!("{path}.algebra")).map(|_| ());
    match spec {
        CheckSpec::Triangles { algebra, modules, seeds, .. } => {
            cap(path, "seed count", *seeds, MAX_SEEDS)?;
            match algebra {
                Some(key) => alg(key)?,
                None if *seeds > 0 => return Err(invalid(path, "seeded modules need an algebra")),
                None => {}
            }
            for (i, m) in modules.iter().enumerate() {
                if !r.modules.contains_key(m) {
                    return Err(invalid(format!("{path}.modules[{i}]"), format!("unknown module {m:?}")));
                }
            }
            if modules.is_empty() && algebra.is_none() {
                return Err(invalid(path, "nothing to check"));
            }
        }
        CheckSpec::MainTheorem { algebra, seeds, .. }
        | CheckSpec::Composite { algebra, seeds, .. }
        | CheckSpec::Mate { algebra, seeds, .. }
        | CheckSpec::Umbra { algebra, seeds, .. }
        | CheckSpec::Penumbra { algebra, seeds, .. } => {
            alg(algebra)?;
            check_seeds(path, *seeds)?;
        }
        CheckSpec::Lunts { algebra, seeds, n_max, .. } => {
            alg(algebra)?;
            check_seeds(path, *seeds)?;
            check_degree(path, *n_max)?;
        }
        CheckSpec::Hochschild { algebra, module, n_max, expect } => {
            alg(algebra)?;
            check_degree(path, *n_max)?;
            if let Some(m) = module {
                let bm = r.modules.get(m).ok_or_else(|| invalid(format!("{path}.module"), format!("unknown module {m:?}")))?;
                let a = r.algebra(algebra);
                if !bm.left().same_as(a) || !bm.right().same_as(a) {
                    return Err(invalid(format!("{path}.module"), format!("{m:?} is not a bimodule over {algebra:?}")));
                }
            }
            if let Some(e) = expect {
                if e.len() != *n_max {
                    return Err(invalid(format!("{path}.expect"), format!("{} values for degrees below {n_max}", e.len())));
                }
            }
        }
        CheckSpec::Induction { group, subgroup, embedding, representation } => {
            let g = build_group(group, &format!("{path}.group"))?;
            let h = build_group(subgroup, &format!("{path}.subgroup"))?;
            if embedding.len() != h.order() || embedding.iter().any(|&x| x >= g.order()) {
                return Err(invalid(format!("{path}.embedding"), "expected one element of the group per subgroup element"));
            }
            if representation.len() != h.order() {
                return Err(invalid(format!("{path}.representation"), "expected one matrix per subgroup element"));
            }
            parse_matrices(r.field, representation, &format!("{path}.representation"))?;
        }
        CheckSpec::TwoCharacter { action, words, max_length, .. } => {
            cap(&format!("{path}.words"), "word count", *words, MAX_WORDS)?;
            cap(&format!("{path}.max_length"), "word length", *max_length, MAX_WORD_LENGTH)?;
            build_action(r.field, &r.algebras, action, &format!("{path}.action"))?;
        }
    }
    Ok(())
}

/// Builds every algebra and module and validates every check.
pub fn resolve(scenario: Scenario) -> Result<Resolved, ScenarioError> {
    let field = build_field(scenario.field)?;
    cap("checks", "check count", scenario.checks.len(), MAX_CHECKS)?;
    let mut algebras = BTreeMap::new();
    for (key, spec) in &scenario.algebras {
        algebras.insert(key.clone(), build_algebra(field, spec, &format!("algebras.{key}"))?);
    }
    let mut modules = BTreeMap::new();
    for (key, spec) in &scenario.modules {
        let m = build_module(field, &algebras, key, spec, &format!("modules.{key}"))?;
        cap(&format!("modules.{key}"), "dimension", m.dim(), MAX_MODULE_DIM)?;
        modules.insert(key.clone(), m);
    }
    let r = Resolved { scenario, field, algebras, modules };
    for (i, c) in r.scenario.checks.iter().enumerate() {
        validate_check(&r, c, &format!("checks[{i}]"))?;
    }
    Ok(r)
}

/// `parse` followed by `resolve`.
pub fn load(text: &str) -> Result<Resolved, ScenarioError> {
    resolve(parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(extra: &str) -> String {
        format!(r#"{{"schema": 1, "name": "t", "field": "rationals", {extra}}}"#)
    }

    #[test]
    fn reads_a_small_scenario() {
        let text = minimal(
            r#""algebras": {"kk": {"kind": "product", "n": 2}},
               "modules": {"u": {"kind": "unit", "algebra": "kk"}},
               "checks": [{"check": "triangles", "modules": ["u"]},
                          {"check": "hochschild", "algebra": "kk", "n_max": 3}]"#,
        );
        let r = load(&text).unwrap();
        assert_eq!(r.algebras["kk"].dim(), 2);
        assert_eq!(r.scenario.checks.len(), 2);
        assert_eq!(r.scenario.checks[1].kind(), "hochschild");
    }

    #[test]
    fn unknown_keys_are_rejected_with_a_position() {
        let text = "{\"schema\": 1,\n \"name\": \"t\",\n \"field\": \"rationals\",\n \"colour\": 3}";
        match parse(text) {
            Err(ScenarioError::Parse { line, message, .. }) => {
                assert_eq!(line, 4);
                assert!(message.contains("colour"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let text = minimal(r#""checks": [{"check": "mate", "algebra": "a", "seeds": 1, "extra": 0}]"#);
        assert!(matches!(parse(&text), Err(ScenarioError::Parse { .. })));
    }

    #[test]
    fn semantic_errors_name_the_path() {
        let text = minimal(r#""checks": [{"check": "mate", "algebra": "missing", "seeds": 1}]"#);
        assert_eq!(load(&text).unwrap_err(), invalid("checks[0].algebra", "unknown algebra \"missing\""));
        let text = minimal(
            r#""algebras": {"a": {"kind": "ground"}},
               "checks": [{"check": "lunts", "algebra": "a", "seeds": 1, "n_max": 40}]"#,
        );
        assert!(matches!(load(&text), Err(ScenarioError::Invalid { path, .. }) if path == "checks[0].n_max"));
        let text = minimal(r#""algebras": {"big": {"kind": "matrix", "n": 9}}"#);
        assert!(matches!(load(&text), Err(ScenarioError::Invalid { path, .. }) if path == "algebras.big"));
    }

    #[test]
    fn schema_version_and_field_are_checked() {
        let text = r#"{"schema": 2, "name": "t", "field": "rationals"}"#;
        assert!(matches!(parse(text), Err(ScenarioError::Invalid { path, .. }) if path == "schema"));
        let text = r#"{"schema": 1, "name": "t", "field": {"prime": 8}}"#;
        assert!(matches!(load(text), Err(ScenarioError::Invalid { path, .. }) if path == "field"));
        let text = r#"{"schema": 1, "name": "t", "field": {"prime": 7}}"#;
        assert_eq!(load(text).unwrap().field, Field::Prime(7));
    }

    #[test]
    fn explicit_modules_and_raw_algebras_are_validated() {
        let text = minimal(
            r#""algebras": {"d": {"kind": "raw", "unit": ["1", "0"],
                                  "products": [[["1","0"],["0","1"]], [["0","1"],["0","0"]]]}},
               "modules": {"k": {"kind": "explicit", "left": "d", "right": "d",
                                 "lambda": [[["1"]], [["0"]]], "rho": [[["1"]], [["0"]]]}}"#,
        );
        let r = load(&text).unwrap();
        assert_eq!(r.modules["k"].dim(), 1);
        let bad = text.replace(r#""lambda": [[["1"]], [["0"]]]"#, r#""lambda": [[["1"]], [["1"]]]"#);
        assert!(matches!(load(&bad), Err(ScenarioError::Invalid { path, .. }) if path == "modules.k"));
    }
}
