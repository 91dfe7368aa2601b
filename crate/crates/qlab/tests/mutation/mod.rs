//! Deterministic single-cell mutations of the catalog documents.
//!
//! A fixed xorshift seed picks twenty table cells across the six entries
//! and bumps each value to a different element of its scope. Cells are
//! drawn from classes where a single-cell change provably breaks a law,
//! so rejection is a theorem of the fixture design, not a tuned accident:
//!
//! - join cells: a diagonal change breaks idempotence; an off-diagonal
//!   change breaks commutativity against the untouched mirror cell;
//! - star cells: the new value `y` differs from the old `x*`, and the
//!   involution law needs `y* = x` which forces `y = x*`;
//! - off-diagonal inner-product cells: symmetry needs the untouched
//!   mirror cell to equal the star of the new value, but star is
//!   injective and the old value differs.

use std::collections::HashMap;

use qlab::catalog;
use qlab::parse::{Document, LatticeBody};
use qlab::resolve::resolve;

struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn pick(&mut self, bound: usize) -> usize {
        (self.next() % bound as u64) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TableId {
    LatticeJoin(usize),
    QuantaleStar(usize),
    ModuleInner(usize),
    BimoduleLinner(usize),
    BimoduleRinner(usize),
}

/// Provably-rejected mutable cells of a document, with the element scope
/// of their values.
fn slots(
    doc: &Document,
    lattice_elements: &HashMap<String, Vec<String>>,
    quantale_lattice: &HashMap<String, String>,
) -> Vec<(TableId, usize, Vec<String>)> {
    let elems_of_lattice = |name: &str| lattice_elements[name].clone();
    let elems_of_quantale = |name: &str| elems_of_lattice(&quantale_lattice[name]);
    let off_diagonal = |args: &[String]| args.len() == 2 && args[0] != args[1];
    let mut out = Vec::new();
    for (i, def) in doc.lattices.iter().enumerate() {
        if let LatticeBody::Join(table) = &def.body {
            for e in 0..table.entries.len() {
                out.push((TableId::LatticeJoin(i), e, def.elements.clone()));
            }
        }
    }
    for (i, def) in doc.quantales.iter().enumerate() {
        let scope = elems_of_lattice(&def.lattice);
        for e in 0..def.star.entries.len() {
            out.push((TableId::QuantaleStar(i), e, scope.clone()));
        }
    }
    for (i, def) in doc.modules.iter().enumerate() {
        let scalars = elems_of_quantale(&def.quantale);
        if let Some(inner) = &def.inner {
            for (e, (args, _)) in inner.entries.iter().enumerate() {
                if off_diagonal(args) {
                    out.push((TableId::ModuleInner(i), e, scalars.clone()));
                }
            }
        }
    }
    for (i, def) in doc.bimodules.iter().enumerate() {
        let left = elems_of_quantale(&def.left);
        let right = elems_of_quantale(&def.right);
        if let Some(t) = &def.linner {
            for (e, (args, _)) in t.entries.iter().enumerate() {
                if off_diagonal(args) {
                    out.push((TableId::BimoduleLinner(i), e, left.clone()));
                }
            }
        }
        if let Some(t) = &def.rinner {
            for (e, (args, _)) in t.entries.iter().enumerate() {
                if off_diagonal(args) {
                    out.push((TableId::BimoduleRinner(i), e, right.clone()));
                }
            }
        }
    }
    out
}

fn apply(doc: &mut Document, id: TableId, entry: usize, scope: &[String], bump: usize) -> String {
    let table = match id {
        TableId::LatticeJoin(i) => match &mut doc.lattices[i].body {
            LatticeBody::Join(t) => t,
            LatticeBody::Order(_) => unreachable!(),
        },
        TableId::QuantaleStar(i) => &mut doc.quantales[i].star,
        TableId::ModuleInner(i) => doc.modules[i].inner.as_mut().unwrap(),
        TableId::BimoduleLinner(i) => doc.bimodules[i].linner.as_mut().unwrap(),
        TableId::BimoduleRinner(i) => doc.bimodules[i].rinner.as_mut().unwrap(),
    };
    let (key, value) = &mut table.entries[entry];
    let old = value.clone();
    let position = scope.iter().position(|s| s == &old).expect("value in scope");
    let new = scope[(position + 1 + bump % (scope.len() - 1)) % scope.len()].clone();
    *value = new.clone();
    format!("{id:?}[{key:?}] {old} -> {new}")
}

/// Runs `count` deterministic mutations; panics if any is accepted.
/// Returns (description, witness) for each rejection.
pub fn run_mutations(count: usize) -> Vec<(String, String)> {
    let entries = catalog::entries();
    let mut lattice_elements = HashMap::new();
    let mut quantale_lattice = HashMap::new();
    for entry in &entries {
        for def in &entry.document.lattices {
            lattice_elements.insert(def.name.clone(), def.elements.clone());
        }
        for def in &entry.document.quantales {
            quantale_lattice.insert(def.name.clone(), def.lattice.clone());
        }
    }
    let catalog_ws = catalog::workspace();
    let mut rng = XorShift(0x9E37_79B9_7F4A_7C15);
    let mut used: Vec<(usize, TableId, usize)> = Vec::new();
    let mut out = Vec::new();
    while out.len() < count {
        let entry_index = rng.pick(entries.len());
        let doc = &entries[entry_index].document;
        let available = slots(doc, &lattice_elements, &quantale_lattice);
        if available.is_empty() {
            continue;
        }
        let slot = rng.pick(available.len());
        let (id, cell, scope) = available[slot].clone();
        if scope.len() < 2 || used.contains(&(entry_index, id, cell)) {
            continue;
        }
        used.push((entry_index, id, cell));
        let mut mutated = doc.clone();
        let bump = rng.pick(scope.len().saturating_sub(1).max(1));
        let description = format!(
            "{}: {}",
            entries[entry_index].name,
            apply(&mut mutated, id, cell, &scope, bump)
        );
        let outcome = resolve(&mutated, Some(&catalog_ws));
        let mut witness = String::new();
        for check in &outcome.checks {
            for law in &check.laws {
                if !law.pass {
                    witness = format!(
                        "{}: {} ({})",
                        check.name,
                        law.name,
                        law.witness.clone().unwrap_or_default()
                    );
                }
            }
        }
        if witness.is_empty() {
            if let Some(d) = outcome.diagnostics.first() {
                witness = d.to_string();
            }
        }
        assert!(!witness.is_empty(), "mutation was accepted: {description}");
        out.push((description, witness));
    }
    out
}
