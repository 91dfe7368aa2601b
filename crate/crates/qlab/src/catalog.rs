//! The bundled catalog: six small structures used throughout the examples,
//! tests and the command line.
//!
//! - `two` — the 2-element Boolean algebra as an involutive quantale;
//! - `chain3` — the 3-chain frame (meet multiplication, identity star);
//! - `diamond` — the four-element diamond as a right Hilbert 2-module,
//!   inner product induced by the atom-swapping duality;
//! - `mat2_two` — the quantale of 2x2 matrices over `two`;
//! - `col2` — the column bimodule between `mat2_two` and `two`;
//! - `degenerate_chain3` — a pre-Hilbert module whose separation fails.
//!
//! The catalog is defined in code; the `.qlab` files shipped under
//! `catalog/` are printouts of these documents and are kept in sync by a
//! test. Names referenced across entries (for example `col2` referring to
//! `two` and `mat2_two`) resolve through the shared catalog namespace.

use std::sync::Arc;

use crate::budget::Budget;
use crate::parse::{
    BimoduleDef, Document, LatticeBody, LatticeDef, ModuleDef, QuantaleDef, TableDef,
};
use crate::quantale::{matrix_quantale, InvQuantale};
use crate::resolve::{resolve, Workspace};
use crate::suplat::{Duality, SupLattice, TupleCodec};

/// One catalog entry: its name, a summary, the declared classification of
/// its module content (when any), and the document itself.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub declared_level: Option<&'static str>,
    pub document: Document,
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn binary_table(names_a: &[String], names_b: &[String], values: &[String], table: &[usize]) -> TableDef {
    let mut entries = Vec::new();
    for (i, a) in names_a.iter().enumerate() {
        for (j, b) in names_b.iter().enumerate() {
            entries.push((
                vec![a.clone(), b.clone()],
                values[table[i * names_b.len() + j]].clone(),
            ));
        }
    }
    TableDef {
        entries,
        default: None,
    }
}

fn unary_table(domain: &[String], values: &[String], table: &[usize]) -> TableDef {
    TableDef {
        entries: domain
            .iter()
            .enumerate()
            .map(|(i, a)| (vec![a.clone()], values[table[i]].clone()))
            .collect(),
        default: None,
    }
}

fn lattice_def(name: &str, element_names: &[String], lat: &SupLattice) -> LatticeDef {
    let mut join = Vec::with_capacity(lat.n() * lat.n());
    for a in lat.elements() {
        for b in lat.elements() {
            join.push(lat.join(a, b));
        }
    }
    LatticeDef {
        name: name.into(),
        elements: element_names.to_vec(),
        body: LatticeBody::Join(binary_table(element_names, element_names, element_names, &join)),
    }
}

fn quantale_def(name: &str, lattice: &str, element_names: &[String], q: &InvQuantale) -> QuantaleDef {
    QuantaleDef {
        name: name.into(),
        lattice: lattice.into(),
        mult: binary_table(element_names, element_names, element_names, q.mult_table()),
        star: unary_table(element_names, element_names, q.star_table()),
        unit: q.unit().map(|e| element_names[e].clone()),
    }
}

fn two_document() -> Document {
    let names = vec!["o".to_string(), "i".to_string()];
    let q = InvQuantale::two();
    Document {
        lattices: vec![lattice_def("two", &names, q.lat())],
        quantales: vec![quantale_def("two", "two", &names, &q)],
        ..Default::default()
    }
}

fn chain3_document() -> Document {
    let names = vec!["z".to_string(), "m".to_string(), "t".to_string()];
    let q = InvQuantale::frame(Arc::new(SupLattice::chain(3)));
    // the lattice is given in order form, exercising join derivation
    let lattice = LatticeDef {
        name: "chain3".into(),
        elements: names.clone(),
        body: LatticeBody::Order(vec![
            ("z".into(), "m".into()),
            ("m".into(), "t".into()),
        ]),
    };
    Document {
        lattices: vec![lattice],
        quantales: vec![quantale_def("chain3", "chain3", &names, &q)],
        ..Default::default()
    }
}

/// The diamond lattice `0 < {a,b} < 1` with named elements.
pub fn diamond_lattice() -> (Arc<SupLattice>, Vec<String>) {
    let lat = SupLattice::validate(
        4,
        vec![
            0, 1, 2, 3, //
            1, 1, 3, 3, //
            2, 3, 2, 3, //
            3, 3, 3, 3,
        ],
    )
    .expect("the diamond is a lattice");
    let names = vec!["o".into(), "a".into(), "b".into(), "i".into()];
    (Arc::new(lat), names)
}

/// The atom-swapping duality on the diamond.
pub fn diamond_duality() -> Duality {
    let (lat, _) = diamond_lattice();
    Duality::validate(&lat, vec![3, 2, 1, 0]).expect("atom swap is a duality")
}

fn diamond_document() -> Document {
    let (lat, names) = diamond_lattice();
    let duality = diamond_duality();
    let two_names = vec!["o".to_string(), "i".to_string()];
    let mut act = Vec::new();
    let mut ip = Vec::new();
    for m in lat.elements() {
        act.push(0);
        act.push(m);
        for n in lat.elements() {
            ip.push(usize::from(!lat.leq(n, duality.apply(m))));
        }
    }
    Document {
        lattices: vec![lattice_def("diamond", &names, &lat)],
        modules: vec![ModuleDef {
            name: "diamond".into(),
            quantale: "two".into(),
            lattice: "diamond".into(),
            right_side: true,
            action: binary_table(&names, &two_names, &names, &act),
            inner: Some(binary_table(&names, &names, &two_names, &ip)),
        }],
        ..Default::default()
    }
}

fn mat2_document() -> Document {
    let two = InvQuantale::two();
    let m2 = matrix_quantale(&two, 2, &Budget::default()).expect("within budget");
    let names = names("x", 16);
    Document {
        lattices: vec![lattice_def("mat2", &names, m2.quantale.lat())],
        quantales: vec![quantale_def("mat2_two", "mat2", &names, &m2.quantale)],
        ..Default::default()
    }
}

fn col2_document() -> Document {
    let two = InvQuantale::two();
    let m2 = matrix_quantale(&two, 2, &Budget::default()).expect("within budget");
    let vec_codec = TupleCodec::new(vec![2, 2]);
    let vec_names = names("v", 4);
    let mat_names = names("x", 16);
    let two_names = vec!["o".to_string(), "i".to_string()];

    let two_lat = SupLattice::chain(2);
    let (vec_lat, _) = SupLattice::product(&[&two_lat, &two_lat]);

    // left action: (T * x)_i = v_j T_ij . x_j
    let mut lact = Vec::new();
    let mut ract = Vec::new();
    let mut x_bits = vec![0; 2];
    for x in 0..4 {
        vec_codec.decode_into(x, &mut x_bits);
        for t in 0..16 {
            let out = [
                (m2.entry(t, 0, 0) & x_bits[0]) | (m2.entry(t, 0, 1) & x_bits[1]),
                (m2.entry(t, 1, 0) & x_bits[0]) | (m2.entry(t, 1, 1) & x_bits[1]),
            ];
            lact.push(vec_codec.encode(&out));
        }
        for a in 0..2 {
            ract.push(vec_codec.encode(&[x_bits[0] & a, x_bits[1] & a]));
        }
    }
    // inner products: <x,y>_2 = v_j x_j . y_j and <x,y>_mat = x y*
    let mut rinner = Vec::new();
    let mut linner = Vec::new();
    let mut y_bits = vec![0; 2];
    for x in 0..4 {
        vec_codec.decode_into(x, &mut x_bits);
        for y in 0..4 {
            vec_codec.decode_into(y, &mut y_bits);
            rinner.push((x_bits[0] & y_bits[0]) | (x_bits[1] & y_bits[1]));
            let outer = [
                x_bits[0] & y_bits[0],
                x_bits[0] & y_bits[1],
                x_bits[1] & y_bits[0],
                x_bits[1] & y_bits[1],
            ];
            linner.push(m2.codec.encode(&outer));
        }
    }
    Document {
        lattices: vec![lattice_def("vec2", &vec_names, &vec_lat)],
        bimodules: vec![BimoduleDef {
            name: "col2".into(),
            left: "mat2_two".into(),
            right: "two".into(),
            carrier: "vec2".into(),
            lact: binary_table(&vec_names, &mat_names, &vec_names, &lact),
            ract: binary_table(&vec_names, &two_names, &vec_names, &ract),
            linner: Some(binary_table(&vec_names, &vec_names, &mat_names, &linner)),
            rinner: Some(binary_table(&vec_names, &vec_names, &two_names, &rinner)),
        }],
        ..Default::default()
    }
}

fn degenerate_chain3_document() -> Document {
    let names = vec!["z".to_string(), "m".to_string(), "t".to_string()];
    let two_names = vec!["o".to_string(), "i".to_string()];
    let mut act = Vec::new();
    let mut ip = Vec::new();
    for m in 0..3usize {
        act.push(0);
        act.push(m);
        for n in 0..3usize {
            ip.push(usize::from(m != 0 && n != 0));
        }
    }
    Document {
        lattices: vec![lattice_def(
            "dchain3",
            &names,
            &SupLattice::chain(3),
        )],
        modules: vec![ModuleDef {
            name: "degenerate_chain3".into(),
            quantale: "two".into(),
            lattice: "dchain3".into(),
            right_side: true,
            action: binary_table(&names, &two_names, &names, &act),
            inner: Some(binary_table(&names, &names, &two_names, &ip)),
        }],
        ..Default::default()
    }
}

/// All catalog entries, in their canonical order.
pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "two",
            summary: "the 2-element Boolean algebra as an involutive quantale",
            declared_level: None,
            document: two_document(),
        },
        CatalogEntry {
            name: "chain3",
            summary: "the 3-chain frame (meet multiplication)",
            declared_level: None,
            document: chain3_document(),
        },
        CatalogEntry {
            name: "diamond",
            summary: "the diamond as a strict Hilbert 2-module (atom-swap duality)",
            declared_level: Some("strict"),
            document: diamond_document(),
        },
        CatalogEntry {
            name: "mat2_two",
            summary: "the quantale of 2x2 matrices over two",
            declared_level: None,
            document: mat2_document(),
        },
        CatalogEntry {
            name: "col2",
            summary: "the column bimodule between mat2_two and two",
            declared_level: Some("strict"),
            document: col2_document(),
        },
        CatalogEntry {
            name: "degenerate_chain3",
            summary: "a pre-Hilbert module over two whose separation fails",
            declared_level: Some("pre"),
            document: degenerate_chain3_document(),
        },
    ]
}

/// Looks up one entry's document by name.
pub fn document(name: &str) -> Option<Document> {
    entries()
        .into_iter()
        .find(|e| e.name == name)
        .map(|e| e.document)
}

/// Canonical `.qlab` text of an entry.
pub fn entry_text(name: &str) -> Option<String> {
    document(name).map(|d| crate::parse::print_document(&d))
}

/// The catalog resolved into a single shared workspace.
pub fn workspace() -> Workspace {
    let mut merged = Document::default();
    for entry in entries() {
        merged.merge(entry.document);
    }
    let outcome = resolve(&merged, None);
    assert!(
        outcome.all_passed(),
        "the bundled catalog must validate: {:?}",
        outcome
            .checks
            .iter()
            .filter(|c| !c.passed())
            .collect::<Vec<_>>()
    );
    outcome.workspace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbmod::HilbertLevel;

    #[test]
    fn catalog_resolves_and_classifies_as_declared() {
        let ws = workspace();
        assert_eq!(ws.quantales["two"].quantale.n(), 2);
        assert_eq!(ws.quantales["chain3"].quantale.n(), 3);
        assert_eq!(ws.quantales["mat2_two"].quantale.n(), 16);
        assert_eq!(
            ws.modules["diamond"].hilbert.as_ref().unwrap().level(),
            HilbertLevel::Strict
        );
        assert_eq!(
            ws.modules["degenerate_chain3"]
                .hilbert
                .as_ref()
                .unwrap()
                .level(),
            HilbertLevel::Pre
        );
        let col2 = &ws.bimodules["col2"];
        assert_eq!(col2.bimodule.carrier().level(), HilbertLevel::Strict);
        assert!(col2.bimodule.left_ip_table().is_some());
    }

    #[test]
    fn catalog_text_round_trips() {
        for entry in entries() {
            let text = entry_text(entry.name).unwrap();
            let reparsed = crate::parse::parse_document(&text).unwrap();
            assert_eq!(reparsed, entry.document, "{} round trip", entry.name);
        }
    }

    #[test]
    fn shipped_catalog_files_are_in_sync() {
        // regenerate with QLAB_REGEN_CATALOG=1
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("catalog");
        let regen = std::env::var_os("QLAB_REGEN_CATALOG").is_some();
        for entry in entries() {
            let path = dir.join(format!("{}.qlab", entry.name));
            let text = entry_text(entry.name).unwrap();
            if regen {
                std::fs::create_dir_all(&dir).unwrap();
                std::fs::write(&path, &text).unwrap();
                continue;
            }
            let on_disk = std::fs::read_to_string(&path)
                .unwrap_or_else(|e| panic!("{}: {e}; run with QLAB_REGEN_CATALOG=1", path.display()));
            assert_eq!(on_disk, text, "{} is stale", path.display());
        }
    }

    #[test]
    fn col2_matches_the_canonical_matrix_witness() {
        let ws = workspace();
        let two = ws.quantales["two"].quantale.clone();
        let w = crate::morita::canonical_matrix_witness(&two, 2, &Budget::default()).unwrap();
        let col2 = &ws.bimodules["col2"].bimodule;
        assert_eq!(
            col2.carrier().ip_table(),
            w.witness.x.bimodule.carrier().ip_table()
        );
        assert_eq!(col2.left_ip_table(), w.witness.x.bimodule.left_ip_table());
        assert_eq!(
            col2.left_module().act_table(),
            w.witness.x.bimodule.left_module().act_table()
        );
    }

    #[test]
    fn diamond_module_agrees_with_test_fixture() {
        let ws = workspace();
        let d = ws.modules["diamond"].hilbert.as_ref().unwrap();
        assert!(d.is_m_regular());
        assert!(d.is_full());
    }
}
