//! The interior tensor product and the standard isomorphism
//! M (x)_A A ~ M for m-regular modules.

use std::sync::Arc;

use qlab::budget::Budget;
use qlab::catalog;
use qlab::hilbmod::{regular_right, HilbertModule, QModule, Side};
use qlab::quantale::InvQuantale;
use qlab::suplat::SupLattice;
use qlab::tensor::{interior_tensor, regular_bimodule, standard_iso};

fn main() {
    let budget = Budget::default();
    let ws = catalog::workspace();
    let two_q = Arc::new(InvQuantale::two());
    let two = Arc::new(regular_right(two_q.clone()));
    let two_bim = Arc::new(regular_bimodule(&two_q));

    // 2 (x)_2 2 has two elements
    let t = interior_tensor(&two, &two_bim, &budget).unwrap();
    println!(
        "2 (x)_2 2: size={}, level={} (every element a join of simple tensors)",
        t.module.n(),
        t.module.level().as_str()
    );

    // the standard isomorphism exists exactly for m-regular modules
    let diamond = ws.modules["diamond"].hilbert.as_ref().unwrap().clone();
    for (name, module) in [("2", two.clone()), ("diamond", diamond)] {
        let iso = standard_iso(&module, &budget).unwrap();
        println!(
            "{name} (x)_2 2 ~ {name}: unitary={}, separated={}, essential={}",
            iso.unitary.is_some(),
            iso.separated,
            iso.essential
        );
    }

    // a module with trivial action is not essential and is rejected,
    // with the failing clause named
    let lat = Arc::new(SupLattice::chain(2));
    let module = QModule::validate(two_q.clone(), lat, vec![0, 0, 0, 0], Side::Right).unwrap();
    let trivial = Arc::new(HilbertModule::validate(module, vec![0, 0, 0, 0]).unwrap());
    let iso = standard_iso(&trivial, &budget).unwrap();
    println!(
        "trivial action: unitary={}, essential={} (failing clause), separated={}",
        iso.unitary.is_some(),
        iso.essential,
        iso.separated
    );
}
