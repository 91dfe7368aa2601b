//! Hilbert modules: classification levels, module residuations and
//! star-adjoints.

use std::sync::Arc;

use qlab::catalog;
use qlab::hilbmod::{regular_right, star_adjoint, HilbertModule, QModule, Side};
use qlab::quantale::InvQuantale;
use qlab::suplat::SupLattice;

fn main() {
    let ws = catalog::workspace();

    // the quantale 2 over itself: strict Hilbert, full, m-regular
    let two = Arc::new(regular_right(Arc::new(InvQuantale::two())));
    println!(
        "2 over 2: level={}, full={}, m-regular={}",
        two.level().as_str(),
        two.is_full(),
        two.is_m_regular()
    );

    // catalog diamond: strict Hilbert from the atom-swapping duality
    let diamond = ws.modules["diamond"].hilbert.as_ref().unwrap().clone();
    println!(
        "diamond over 2: level={}, separated={}, essential={}",
        diamond.level().as_str(),
        diamond.flags().separated,
        diamond.flags().essential
    );

    // the degenerate chain: separation fails, pre-Hilbert only
    let degenerate = ws.modules["degenerate_chain3"].hilbert.as_ref().unwrap();
    println!(
        "degenerate chain3: level={} (rows of <m,-> for m=1,2 coincide)",
        degenerate.level().as_str()
    );

    // module residuations and their Galois laws
    let m = diamond.module();
    println!(
        "diamond: 0 ->_R a = {}, a ->_R 0 = {}",
        m.residuate_scalar(0, 1),
        m.residuate_scalar(1, 0)
    );

    // the action map m~ : A -> M has the inner product as adjoint
    for fixed in diamond.elements() {
        let tilde: Vec<usize> = two.elements().map(|x| diamond.act(fixed, x)).collect();
        let pair = star_adjoint(&two, &diamond, &tilde).unwrap();
        let expected: Vec<usize> = diamond.elements().map(|n| diamond.ip(fixed, n)).collect();
        assert_eq!(pair.f_star, expected);
    }
    println!("m~ adjoints match <m,-> on every diamond element");

    // a module map without any adjoint, on the degenerate chain
    let lat = Arc::new(SupLattice::chain(3));
    let two_q = Arc::new(InvQuantale::two());
    let mut act = vec![0; 6];
    for e in 0..3 {
        act[e * 2 + 1] = e;
    }
    let module = QModule::validate(two_q, lat, act, Side::Right).unwrap();
    let mut ip = vec![0; 9];
    for a in 1..3 {
        for b in 1..3 {
            ip[a * 3 + b] = 1;
        }
    }
    let pre = HilbertModule::validate(module, ip).unwrap();
    match star_adjoint(&pre, &pre, &[0, 0, 1]) {
        Err(missing) => println!("step map on the degenerate chain: {missing}"),
        Ok(_) => unreachable!(),
    }
}
