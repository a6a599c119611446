//! Reference facet lists for small groups, stored as flat JSON files.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use dual_braid::verify::Context;
use dual_braid::{Error, GroupSpec, Result};
use serde::{Deserialize, Serialize};

use crate::report::SCHEMA;

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Fixture {
    pub schema: u64,
    pub group: String,
    pub coxeter_element: String,
    /// Reflection names, smallest first.
    pub order: Vec<String>,
    /// Facets as reflection names in descending order.
    pub facets: Vec<Vec<String>>,
}

const B3_S1S2S3: [&str; 9] =
    ["((1,2))", "((1,3))", "[1]", "((2,3))", "((1,-2))", "[2]", "((1,-3))", "((2,-3))", "[3]"];
const B3_S1S3S2: [&str; 9] =
    ["((1,2))", "[3]", "((1,-3))", "((2,-3))", "[1]", "((1,-2))", "((1,3))", "[2]", "((2,3))"];

/// File name, group and optional explicit order for each shipped fixture.
pub fn catalogue() -> Vec<(&'static str, &'static str, Option<&'static [&'static str]>)> {
    vec![
        ("a3_c1234.json", "A3:1,2,3", None),
        ("a3_c1342.json", "A3:2,1,3", None),
        ("b3_c123.json", "B3:1,2,3", Some(&B3_S1S2S3[..])),
        ("b3_c132.json", "B3:1,3,2", Some(&B3_S1S3S2[..])),
    ]
}

pub fn context(spec: GroupSpec, order: Option<&[&str]>) -> Result<Context> {
    match order {
        Some(names) => Context::with_order(spec, names),
        None => Context::build(spec),
    }
}

pub fn describe(ctx: &Context) -> Fixture {
    let g = &ctx.group;
    let names = |ts: &[usize]| ts.iter().map(|&t| g.reflection_name(t)).collect::<Vec<_>>();
    Fixture {
        schema: SCHEMA,
        group: g.spec.to_string(),
        coxeter_element: g.element_name(g.coxeter_element()),
        order: names(ctx.complex.order.sequence()),
        facets: ctx.complex.facets.iter().map(|f| names(f)).collect(),
    }
}

pub fn write_all(dir: &Path) -> Result<Vec<String>> {
    fs::create_dir_all(dir).map_err(|e| Error::Argument(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for (file, group, order) in catalogue() {
        let ctx = context(group.parse()?, order)?;
        let text = serde_json::to_string_pretty(&describe(&ctx)).expect("fixture serializes") + "\n";
        let path = dir.join(file);
        fs::write(&path, text).map_err(|e| Error::Argument(format!("{}: {e}", path.display())))?;
        written.push(path.display().to_string());
    }
    Ok(written)
}

#[derive(Debug, Serialize)]
pub struct FixtureResult {
    pub file: String,
    pub group: String,
    pub facets: usize,
    pub matches: bool,
}

fn facet_set(facets: &[Vec<String>]) -> BTreeSet<BTreeSet<String>> {
    facets.iter().map(|f| f.iter().cloned().collect()).collect()
}

/// Rebuilds each fixture's complex from its group and order and compares facets.
///
/// An order that is not c-compatible is reported as an invariant failure.
pub fn check_file(path: &Path) -> Result<FixtureResult> {
    let text = fs::read_to_string(path).map_err(|e| Error::Argument(format!("{}: {e}", path.display())))?;
    let fx: Fixture = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let names: Vec<&str> = fx.order.iter().map(String::as_str).collect();
    let ctx = Context::with_order(fx.group.parse()?, &names).map_err(|e| match e {
        Error::Argument(m) => Error::Invariant(m),
        other => other,
    })?;
    let now = describe(&ctx);
    Ok(FixtureResult {
        file: path.display().to_string(),
        group: fx.group,
        facets: fx.facets.len(),
        matches: facet_set(&now.facets) == facet_set(&fx.facets)
            && now.coxeter_element == fx.coxeter_element,
    })
}

pub fn check_dir(dir: &Path) -> Result<Vec<FixtureResult>> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Error::Argument(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| check_file(p)).collect()
}
