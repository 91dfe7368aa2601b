//! Resolution of parsed documents into validated structures.
//!
//! References resolve against the documents loaded on the command line
//! first, then against the bundled catalog. Every definition yields a
//! check entry (law results plus derived facts); failed definitions keep
//! their law witnesses but do not enter the workspace.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::json;

use crate::hilbmod::{HilbertModule, QModule, Side};
use crate::parse::{
    BimoduleDef, Diagnostic, Document, LatticeBody, LatticeDef, ModuleDef, QuantaleDef, TableDef,
};
use crate::quantale::InvQuantale;
use crate::suplat::SupLattice;
use crate::tensor::HilbertBimodule;

/// One law verdict inside a check entry.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LawResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl LawResult {
    pub fn pass(name: impl Into<String>) -> LawResult {
        LawResult {
            name: name.into(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> LawResult {
        LawResult {
            name: name.into(),
            pass: false,
            witness: Some(witness.into()),
        }
    }
}

/// Per-definition validation outcome.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub kind: String,
    pub laws: Vec<LawResult>,
    pub derived: serde_json::Value,
}

impl CheckEntry {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.pass)
    }
}

#[derive(Debug, Clone)]
pub struct ResolvedLattice {
    pub lat: Arc<SupLattice>,
    pub element_names: Arc<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct ResolvedQuantale {
    pub quantale: Arc<InvQuantale>,
    pub lattice: ResolvedLattice,
}

#[derive(Debug, Clone)]
pub struct ResolvedModule {
    pub quantale_name: String,
    pub quantale: ResolvedQuantale,
    pub lattice: ResolvedLattice,
    pub module: Arc<QModule>,
    pub hilbert: Option<Arc<HilbertModule>>,
}

#[derive(Debug, Clone)]
pub struct ResolvedBimodule {
    pub left_name: String,
    pub right_name: String,
    pub left: ResolvedQuantale,
    pub right: ResolvedQuantale,
    pub carrier: ResolvedLattice,
    pub bimodule: Arc<HilbertBimodule>,
}

/// All successfully built structures, by kind and name.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub lattices: BTreeMap<String, ResolvedLattice>,
    pub quantales: BTreeMap<String, ResolvedQuantale>,
    pub modules: BTreeMap<String, ResolvedModule>,
    pub bimodules: BTreeMap<String, ResolvedBimodule>,
}

/// Resolution output: workspace, per-definition checks, diagnostics.
#[derive(Debug, Clone, Default)]
pub struct ResolveOutcome {
    pub workspace: Workspace,
    pub checks: Vec<CheckEntry>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ResolveOutcome {
    pub fn all_passed(&self) -> bool {
        self.diagnostics.is_empty() && self.checks.iter().all(|c| c.passed())
    }
}

fn diag(message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        message: message.into(),
        line: 0,
        col: 0,
    }
}

struct ElementScope<'a> {
    names: &'a [String],
}

impl<'a> ElementScope<'a> {
    fn index(&self, name: &str) -> Result<usize, Diagnostic> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| diag(format!("unknown element '{name}'")))
    }
}

/// Fills a binary table `rows x cols -> values` from a sparse definition.
fn resolve_binary(
    table: &TableDef,
    rows: &ElementScope,
    cols: &ElementScope,
    values: &ElementScope,
    what: &str,
) -> Result<Vec<usize>, Diagnostic> {
    let nr = rows.names.len();
    let nc = cols.names.len();
    let default = table
        .default
        .as_ref()
        .map(|d| values.index(d))
        .transpose()
        .map_err(|d| diag(format!("{what}: {}", d.message)))?;
    let mut out = vec![usize::MAX; nr * nc];
    for (args, value) in &table.entries {
        let [a, b] = args.as_slice() else {
            return Err(diag(format!("{what}: expected binary entries")));
        };
        let (i, j, v) = (
            rows.index(a).map_err(|d| diag(format!("{what}: {}", d.message)))?,
            cols.index(b).map_err(|d| diag(format!("{what}: {}", d.message)))?,
            values
                .index(value)
                .map_err(|d| diag(format!("{what}: {}", d.message)))?,
        );
        if out[i * nc + j] != usize::MAX {
            return Err(diag(format!("{what}: duplicate entry ({a},{b})")));
        }
        out[i * nc + j] = v;
    }
    for (idx, slot) in out.iter_mut().enumerate() {
        if *slot == usize::MAX {
            match default {
                Some(d) => *slot = d,
                None => {
                    let (i, j) = (idx / nc, idx % nc);
                    return Err(diag(format!(
                        "{what}: missing entry ({},{}) and no default",
                        rows.names[i], cols.names[j]
                    )));
                }
            }
        }
    }
    Ok(out)
}

fn resolve_unary(
    table: &TableDef,
    domain: &ElementScope,
    values: &ElementScope,
    what: &str,
) -> Result<Vec<usize>, Diagnostic> {
    let n = domain.names.len();
    let default = table
        .default
        .as_ref()
        .map(|d| values.index(d))
        .transpose()
        .map_err(|d| diag(format!("{what}: {}", d.message)))?;
    let mut out = vec![usize::MAX; n];
    for (args, value) in &table.entries {
        let [a] = args.as_slice() else {
            return Err(diag(format!("{what}: expected unary entries")));
        };
        let i = domain
            .index(a)
            .map_err(|d| diag(format!("{what}: {}", d.message)))?;
        let v = values
            .index(value)
            .map_err(|d| diag(format!("{what}: {}", d.message)))?;
        if out[i] != usize::MAX {
            return Err(diag(format!("{what}: duplicate entry {a}")));
        }
        out[i] = v;
    }
    for (i, slot) in out.iter_mut().enumerate() {
        if *slot == usize::MAX {
            match default {
                Some(d) => *slot = d,
                None => {
                    return Err(diag(format!(
                        "{what}: missing entry {} and no default",
                        domain.names[i]
                    )));
                }
            }
        }
    }
    Ok(out)
}

fn build_lattice(def: &LatticeDef) -> (Option<ResolvedLattice>, CheckEntry, Vec<Diagnostic>) {
    let n = def.elements.len();
    let scope = ElementScope {
        names: &def.elements,
    };
    {
        let mut sorted = def.elements.clone();
        sorted.sort();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return (
                    None,
                    CheckEntry {
                        name: def.name.clone(),
                        kind: "suplattice".into(),
                        laws: vec![LawResult::fail(
                            "lattice.elements",
                            format!("duplicate element '{}'", pair[0]),
                        )],
                        derived: json!({}),
                    },
                    vec![diag(format!(
                        "suplattice {}: duplicate element '{}'",
                        def.name, pair[0]
                    ))],
                );
            }
        }
    }
    let join = match &def.body {
        LatticeBody::Join(table) => {
            match resolve_binary(table, &scope, &scope, &scope, "join") {
                Ok(t) => t,
                Err(d) => {
                    return (
                        None,
                        CheckEntry {
                            name: def.name.clone(),
                            kind: "suplattice".into(),
                            laws: vec![LawResult::fail("lattice.table", d.message.clone())],
                            derived: json!({}),
                        },
                        vec![d],
                    );
                }
            }
        }
        LatticeBody::Order(pairs) => {
            // reflexive-transitive closure, then least upper bounds
            let mut leq = vec![false; n * n];
            for i in 0..n {
                leq[i * n + i] = true;
            }
            for (a, b) in pairs {
                match (scope.index(a), scope.index(b)) {
                    (Ok(i), Ok(j)) => leq[i * n + j] = true,
                    (Err(d), _) | (_, Err(d)) => {
                        return (
                            None,
                            CheckEntry {
                                name: def.name.clone(),
                                kind: "suplattice".into(),
                                laws: vec![LawResult::fail("lattice.order", d.message.clone())],
                                derived: json!({}),
                            },
                            vec![d],
                        );
                    }
                }
            }
            for k in 0..n {
                for i in 0..n {
                    if leq[i * n + k] {
                        for j in 0..n {
                            if leq[k * n + j] {
                                leq[i * n + j] = true;
                            }
                        }
                    }
                }
            }
            // antisymmetry: mutually related distinct names are duplicates
            for i in 0..n {
                for j in (i + 1)..n {
                    if leq[i * n + j] && leq[j * n + i] {
                        let d = diag(format!(
                            "order form: elements '{}' and '{}' are mutually below each other (duplicate elements)",
                            def.elements[i], def.elements[j]
                        ));
                        return (
                            None,
                            CheckEntry {
                                name: def.name.clone(),
                                kind: "suplattice".into(),
                                laws: vec![LawResult::fail(
                                    "lattice.antisymmetry",
                                    d.message.clone(),
                                )],
                                derived: json!({}),
                            },
                            vec![d],
                        );
                    }
                }
            }
            let mut join = vec![0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let uppers: Vec<usize> = (0..n)
                        .filter(|&u| leq[i * n + u] && leq[j * n + u])
                        .collect();
                    let least = uppers
                        .iter()
                        .copied()
                        .find(|&u| uppers.iter().all(|&v| leq[u * n + v]));
                    match least {
                        Some(u) => join[i * n + j] = u,
                        None => {
                            let d = diag(format!(
                                "order form: elements '{}' and '{}' have no least upper bound",
                                def.elements[i], def.elements[j]
                            ));
                            return (
                                None,
                                CheckEntry {
                                    name: def.name.clone(),
                                    kind: "suplattice".into(),
                                    laws: vec![LawResult::fail(
                                        "lattice.joins_exist",
                                        d.message.clone(),
                                    )],
                                    derived: json!({}),
                                },
                                vec![d],
                            );
                        }
                    }
                }
            }
            join
        }
    };
    match SupLattice::validate(n, join) {
        Ok(lat) => {
            let derived = json!({
                "size": n,
                "bottom": def.elements[lat.bottom()],
                "top": def.elements[lat.top()],
                "join_irreducibles": lat.join_irreducibles().len(),
            });
            (
                Some(ResolvedLattice {
                    lat: Arc::new(lat),
                    element_names: Arc::new(def.elements.clone()),
                }),
                CheckEntry {
                    name: def.name.clone(),
                    kind: "suplattice".into(),
                    laws: vec![LawResult::pass("lattice.laws")],
                    derived,
                },
                Vec::new(),
            )
        }
        Err(violations) => (
            None,
            CheckEntry {
                name: def.name.clone(),
                kind: "suplattice".into(),
                laws: violations
                    .iter()
                    .map(|v| LawResult::fail("lattice.laws", v.to_string()))
                    .collect(),
                derived: json!({}),
            },
            Vec::new(),
        ),
    }
}

fn build_quantale(
    def: &QuantaleDef,
    lattices: &BTreeMap<String, ResolvedLattice>,
) -> (Option<ResolvedQuantale>, CheckEntry, Vec<Diagnostic>) {
    let entry_fail = |laws: Vec<LawResult>, diags: Vec<Diagnostic>| {
        (
            None,
            CheckEntry {
                name: def.name.clone(),
                kind: "quantale".into(),
                laws,
                derived: json!({}),
            },
            diags,
        )
    };
    let Some(lattice) = lattices.get(&def.lattice) else {
        let d = diag(format!(
            "quantale {}: unresolved lattice '{}'",
            def.name, def.lattice
        ));
        return entry_fail(
            vec![LawResult::fail("quantale.reference", d.message.clone())],
            vec![d],
        );
    };
    let scope = ElementScope {
        names: &lattice.element_names,
    };
    let mult = match resolve_binary(&def.mult, &scope, &scope, &scope, "mult") {
        Ok(t) => t,
        Err(d) => {
            return entry_fail(
                vec![LawResult::fail("quantale.table", d.message.clone())],
                vec![d],
            )
        }
    };
    let star = match resolve_unary(&def.star, &scope, &scope, "star") {
        Ok(t) => t,
        Err(d) => {
            return entry_fail(
                vec![LawResult::fail("quantale.table", d.message.clone())],
                vec![d],
            )
        }
    };
    let unit = match def
        .unit
        .as_ref()
        .map(|u| scope.index(u))
        .transpose()
    {
        Ok(u) => u,
        Err(d) => {
            return entry_fail(
                vec![LawResult::fail("quantale.table", d.message.clone())],
                vec![d],
            )
        }
    };
    match InvQuantale::validate(lattice.lat.clone(), mult, star, unit) {
        Ok(q) => {
            let report = q.report().clone();
            let derived = json!({
                "size": q.n(),
                "unital": q.is_unital(),
                "unit": q.unit().map(|e| lattice.element_names[e].clone()),
                "commutative": q.is_commutative(),
                "separated": report.regularity.separated,
                "essential": report.regularity.essential,
                "m_regular": report.m_regular(),
            });
            (
                Some(ResolvedQuantale {
                    quantale: Arc::new(q),
                    lattice: lattice.clone(),
                }),
                CheckEntry {
                    name: def.name.clone(),
                    kind: "quantale".into(),
                    laws: vec![LawResult::pass("quantale.laws")],
                    derived,
                },
                Vec::new(),
            )
        }
        Err(violations) => entry_fail(
            violations
                .iter()
                .map(|v| LawResult::fail("quantale.laws", v.to_string()))
                .collect(),
            Vec::new(),
        ),
    }
}

fn build_module(
    def: &ModuleDef,
    lattices: &BTreeMap<String, ResolvedLattice>,
    quantales: &BTreeMap<String, ResolvedQuantale>,
) -> (Option<ResolvedModule>, CheckEntry, Vec<Diagnostic>) {
    let entry_fail = |laws: Vec<LawResult>, diags: Vec<Diagnostic>| {
        (
            None,
            CheckEntry {
                name: def.name.clone(),
                kind: "module".into(),
                laws,
                derived: json!({}),
            },
            diags,
        )
    };
    let Some(quantale) = quantales.get(&def.quantale) else {
        let d = diag(format!(
            "module {}: unresolved quantale '{}'",
            def.name, def.quantale
        ));
        return entry_fail(
            vec![LawResult::fail("module.reference", d.message.clone())],
            vec![d],
        );
    };
    let Some(lattice) = lattices.get(&def.lattice) else {
        let d = diag(format!(
            "module {}: unresolved lattice '{}'",
            def.name, def.lattice
        ));
        return entry_fail(
            vec![LawResult::fail("module.reference", d.message.clone())],
            vec![d],
        );
    };
    let elems = ElementScope {
        names: &lattice.element_names,
    };
    let scalars = ElementScope {
        names: &quantale.lattice.element_names,
    };
    let act = match resolve_binary(&def.action, &elems, &scalars, &elems, "action") {
        Ok(t) => t,
        Err(d) => {
            return entry_fail(
                vec![LawResult::fail("module.table", d.message.clone())],
                vec![d],
            )
        }
    };
    let side = if def.right_side { Side::Right } else { Side::Left };
    let module = match QModule::validate(
        quantale.quantale.clone(),
        lattice.lat.clone(),
        act,
        side,
    ) {
        Ok(m) => Arc::new(m),
        Err(violations) => {
            return entry_fail(
                violations
                    .iter()
                    .map(|v| LawResult::fail("module.laws", v.to_string()))
                    .collect(),
                Vec::new(),
            )
        }
    };
    let mut laws = vec![LawResult::pass("module.laws")];
    let mut hilbert = None;
    if let Some(inner) = &def.inner {
        let ip = match resolve_binary(inner, &elems, &elems, &scalars, "inner") {
            Ok(t) => t,
            Err(d) => {
                return entry_fail(
                    vec![LawResult::fail("module.table", d.message.clone())],
                    vec![d],
                )
            }
        };
        match HilbertModule::validate(module.as_ref().clone(), ip) {
            Ok(h) => {
                laws.push(LawResult::pass("inner.pre_hilbert"));
                hilbert = Some(Arc::new(h));
            }
            Err(violations) => {
                laws.extend(
                    violations
                        .iter()
                        .map(|v| LawResult::fail("inner.pre_hilbert", v.to_string())),
                );
            }
        }
    }
    if laws.iter().any(|l| !l.pass) {
        return entry_fail(laws, Vec::new());
    }
    let flags = module.flags();
    let derived = json!({
        "size": module.n(),
        "side": if def.right_side { "right" } else { "left" },
        "separated": flags.separated,
        "essential": flags.essential,
        "faithful": flags.faithful,
        "m_regular": flags.m_regular(),
        "level": hilbert.as_ref().map(|h| h.level().as_str()),
        "full": hilbert.as_ref().map(|h| h.is_full()),
    });
    (
        Some(ResolvedModule {
            quantale_name: def.quantale.clone(),
            quantale: quantale.clone(),
            lattice: lattice.clone(),
            module,
            hilbert,
        }),
        CheckEntry {
            name: def.name.clone(),
            kind: "module".into(),
            laws,
            derived,
        },
        Vec::new(),
    )
}

fn build_bimodule(
    def: &BimoduleDef,
    lattices: &BTreeMap<String, ResolvedLattice>,
    quantales: &BTreeMap<String, ResolvedQuantale>,
) -> (Option<ResolvedBimodule>, CheckEntry, Vec<Diagnostic>) {
    let entry_fail = |laws: Vec<LawResult>, diags: Vec<Diagnostic>| {
        (
            None,
            CheckEntry {
                name: def.name.clone(),
                kind: "bimodule".into(),
                laws,
                derived: json!({}),
            },
            diags,
        )
    };
    let (left, right, carrier) = match (
        quantales.get(&def.left),
        quantales.get(&def.right),
        lattices.get(&def.carrier),
    ) {
        (Some(l), Some(r), Some(c)) => (l, r, c),
        (l, r, c) => {
            let mut missing = Vec::new();
            if l.is_none() {
                missing.push(format!("quantale '{}'", def.left));
            }
            if r.is_none() {
                missing.push(format!("quantale '{}'", def.right));
            }
            if c.is_none() {
                missing.push(format!("lattice '{}'", def.carrier));
            }
            let d = diag(format!(
                "bimodule {}: unresolved {}",
                def.name,
                missing.join(", ")
            ));
            return entry_fail(
                vec![LawResult::fail("bimodule.reference", d.message.clone())],
                vec![d],
            );
        }
    };
    let elems = ElementScope {
        names: &carrier.element_names,
    };
    let left_scalars = ElementScope {
        names: &left.lattice.element_names,
    };
    let right_scalars = ElementScope {
        names: &right.lattice.element_names,
    };
    let lact = match resolve_binary(&def.lact, &elems, &left_scalars, &elems, "lact") {
        Ok(t) => t,
        Err(d) => {
            return entry_fail(
                vec![LawResult::fail("bimodule.table", d.message.clone())],
                vec![d],
            )
        }
    };
    let ract = match resolve_binary(&def.ract, &elems, &right_scalars, &elems, "ract") {
        Ok(t) => t,
        Err(d) => {
            return entry_fail(
                vec![LawResult::fail("bimodule.table", d.message.clone())],
                vec![d],
            )
        }
    };
    let linner = match def
        .linner
        .as_ref()
        .map(|t| resolve_binary(t, &elems, &elems, &left_scalars, "linner"))
        .transpose()
    {
        Ok(t) => t,
        Err(d) => {
            return entry_fail(
                vec![LawResult::fail("bimodule.table", d.message.clone())],
                vec![d],
            )
        }
    };
    let rinner = match def
        .rinner
        .as_ref()
        .map(|t| resolve_binary(t, &elems, &elems, &right_scalars, "rinner"))
        .transpose()
    {
        Ok(t) => t,
        Err(d) => {
            return entry_fail(
                vec![LawResult::fail("bimodule.table", d.message.clone())],
                vec![d],
            )
        }
    };
    let Some(rinner) = rinner else {
        let d = diag(format!(
            "bimodule {}: a right inner product ('rinner') is required",
            def.name
        ));
        return entry_fail(
            vec![LawResult::fail("bimodule.table", d.message.clone())],
            vec![d],
        );
    };

    // right Hilbert module carrier
    let module = match QModule::validate(
        right.quantale.clone(),
        carrier.lat.clone(),
        ract,
        Side::Right,
    ) {
        Ok(m) => m,
        Err(violations) => {
            return entry_fail(
                violations
                    .iter()
                    .map(|v| LawResult::fail("bimodule.right_module", v.to_string()))
                    .collect(),
                Vec::new(),
            )
        }
    };
    let hilbert = match HilbertModule::validate(module, rinner) {
        Ok(h) => Arc::new(h),
        Err(violations) => {
            return entry_fail(
                violations
                    .iter()
                    .map(|v| LawResult::fail("bimodule.right_inner", v.to_string()))
                    .collect(),
                Vec::new(),
            )
        }
    };
    match HilbertBimodule::validate(left.quantale.clone(), hilbert, lact, linner) {
        Ok(b) => {
            let bimodule = Arc::new(b);
            let derived = json!({
                "size": bimodule.n(),
                "left": def.left,
                "right": def.right,
                "right_level": bimodule.carrier().level().as_str(),
                "right_full": bimodule.carrier().is_full(),
                "right_m_regular": bimodule.carrier().is_m_regular(),
                "left_m_regular": bimodule.left_module().is_m_regular(),
                "has_left_inner": bimodule.left_ip_table().is_some(),
            });
            (
                Some(ResolvedBimodule {
                    left_name: def.left.clone(),
                    right_name: def.right.clone(),
                    left: left.clone(),
                    right: right.clone(),
                    carrier: carrier.clone(),
                    bimodule,
                }),
                CheckEntry {
                    name: def.name.clone(),
                    kind: "bimodule".into(),
                    laws: vec![LawResult::pass("bimodule.laws")],
                    derived,
                },
                Vec::new(),
            )
        }
        Err(violations) => entry_fail(
            violations
                .iter()
                .map(|v| LawResult::fail("bimodule.laws", v.to_string()))
                .collect(),
            Vec::new(),
        ),
    }
}

/// Resolves a document against an optional fallback workspace (the bundled
/// catalog, usually).
pub fn resolve(document: &Document, fallback: Option<&Workspace>) -> ResolveOutcome {
    let mut outcome = ResolveOutcome::default();

    // reference scopes: local definitions shadow nothing (duplicates within
    // the loaded documents were rejected at parse/merge time); fallback
    // names are only consulted when a local name is absent
    let mut lattices: BTreeMap<String, ResolvedLattice> = fallback
        .map(|w| w.lattices.clone())
        .unwrap_or_default();
    let mut quantales: BTreeMap<String, ResolvedQuantale> = fallback
        .map(|w| w.quantales.clone())
        .unwrap_or_default();

    for def in &document.lattices {
        let (built, entry, diags) = build_lattice(def);
        if let Some(built) = built {
            lattices.insert(def.name.clone(), built.clone());
            outcome.workspace.lattices.insert(def.name.clone(), built);
        }
        outcome.checks.push(entry);
        outcome.diagnostics.extend(diags);
    }
    for def in &document.quantales {
        let (built, entry, diags) = build_quantale(def, &lattices);
        if let Some(built) = built {
            quantales.insert(def.name.clone(), built.clone());
            outcome.workspace.quantales.insert(def.name.clone(), built);
        }
        outcome.checks.push(entry);
        outcome.diagnostics.extend(diags);
    }
    for def in &document.modules {
        let (built, entry, diags) = build_module(def, &lattices, &quantales);
        if let Some(built) = built {
            outcome.workspace.modules.insert(def.name.clone(), built);
        }
        outcome.checks.push(entry);
        outcome.diagnostics.extend(diags);
    }
    for def in &document.bimodules {
        let (built, entry, diags) = build_bimodule(def, &lattices, &quantales);
        if let Some(built) = built {
            outcome.workspace.bimodules.insert(def.name.clone(), built);
        }
        outcome.checks.push(entry);
        outcome.diagnostics.extend(diags);
    }
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_document;

    #[test]
    fn resolves_the_two_quantale() {
        let doc = parse_document(
            r#"
suplattice two { elements: [o, i]; join: { default: i; (o,o)=o; } }
quantale two { lattice: two; mult: { default: o; (i,i)=i; } star: { o=o; i=i; } unit: i; }
"#,
        )
        .unwrap();
        let outcome = resolve(&doc, None);
        assert!(outcome.all_passed(), "{:?}", outcome);
        let q = &outcome.workspace.quantales["two"];
        assert!(q.quantale.is_unital());
        assert_eq!(q.quantale.n(), 2);
    }

    #[test]
    fn order_form_derives_joins() {
        let doc = parse_document(
            "suplattice c3 { elements: [z, m, t]; order: { z<=m; m<=t; } }",
        )
        .unwrap();
        let outcome = resolve(&doc, None);
        assert!(outcome.all_passed());
        let lat = &outcome.workspace.lattices["c3"];
        assert_eq!(lat.lat.n(), 3);
        assert!(lat.lat.leq(0, 2));
    }

    #[test]
    fn cyclic_order_input_is_a_duplicate_element_diagnostic() {
        let doc = parse_document(
            "suplattice d { elements: [a, b]; order: { a<=b; b<=a; } }",
        )
        .unwrap();
        let outcome = resolve(&doc, None);
        assert!(!outcome.all_passed());
        assert!(outcome.diagnostics[0].message.contains("duplicate elements"));
    }

    #[test]
    fn missing_lub_in_order_form_is_diagnosed() {
        // two incomparable tops
        let doc = parse_document(
            "suplattice v { elements: [z, a, b]; order: { z<=a; z<=b; } }",
        )
        .unwrap();
        let outcome = resolve(&doc, None);
        assert!(!outcome.all_passed());
        assert!(outcome.diagnostics[0]
            .message
            .contains("no least upper bound"));
    }

    #[test]
    fn unresolved_reference_is_diagnosed() {
        let doc = parse_document(
            "quantale q { lattice: nowhere; mult: { default: x; } star: { default: x; } }",
        )
        .unwrap();
        let outcome = resolve(&doc, None);
        assert!(!outcome.all_passed());
        assert!(outcome.diagnostics[0].message.contains("unresolved"));
    }

    #[test]
    fn missing_table_entry_without_default_is_diagnosed() {
        let doc = parse_document(
            "suplattice two { elements: [o, i]; join: { (o,o)=o; } }",
        )
        .unwrap();
        let outcome = resolve(&doc, None);
        assert!(!outcome.all_passed());
        assert!(outcome.diagnostics[0].message.contains("missing entry"));
    }
}
