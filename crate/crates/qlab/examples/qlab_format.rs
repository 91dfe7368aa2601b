//! The `.qlab` text format: parsing, diagnostics, printing and resolution.

use qlab::parse::{parse_document, print_document};
use qlab::resolve::resolve;

const SOURCE: &str = r#"
# a 3-chain given by its order; joins are derived
suplattice c3 {
  elements: [z, m, t];
  order: { z<=m; m<=t; }
}
# the frame on it: meet multiplication, identity star
quantale c3frame {
  lattice: c3;
  mult: {
    default: z;
    (m,m)=m; (m,t)=m; (t,m)=m; (t,t)=t;
  }
  star: { z=z; m=m; t=t; }
  unit: t;
}
"#;

fn main() {
    let doc = parse_document(SOURCE).expect("parses");
    println!("parsed {} lattice(s), {} quantale(s)", doc.lattices.len(), doc.quantales.len());

    // printing and reparsing yields the identical document
    let printed = print_document(&doc);
    assert_eq!(parse_document(&printed).expect("round trip"), doc);
    println!("print/parse round trip: ok");

    let outcome = resolve(&doc, None);
    for check in &outcome.checks {
        println!(
            "{} {} [{}]: {}",
            if check.passed() { "ok " } else { "FAIL" },
            check.name,
            check.kind,
            check.derived
        );
    }

    // diagnostics carry positions
    let broken = parse_document("suplattice x { elements [a]; }").unwrap_err();
    println!("diagnostic example: {broken}");

    // duplicate elements in order form are caught at resolution
    let cyclic = parse_document("suplattice d { elements: [a, b]; order: { a<=b; b<=a; } }").unwrap();
    let outcome = resolve(&cyclic, None);
    println!("cyclic order diagnostic: {}", outcome.diagnostics[0]);
}
