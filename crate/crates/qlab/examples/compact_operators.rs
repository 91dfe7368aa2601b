//! Compact operators: rank-one generators, the quantale K(M), nuclearity
//! and adjointable retracts.

use std::sync::Arc;

use qlab::budget::Budget;
use qlab::catalog;
use qlab::hilbmod::{
    compact_quantale, compact_space, nuclearity_and_projectivity, regular_right, star_adjoint,
    theta_map,
};
use qlab::quantale::{find_quantale_iso, InvQuantale};

fn main() {
    let budget = Budget::default();
    let ws = catalog::workspace();
    let two = Arc::new(regular_right(Arc::new(InvQuantale::two())));
    let diamond = ws.modules["diamond"].hilbert.as_ref().unwrap().clone();

    // K(2) over 2 is {0, id}, isomorphic to 2
    let k2 = compact_quantale(&two, &budget).unwrap();
    println!(
        "K_2(2): size={}, identity compact={}, iso to 2={}",
        k2.quantale.n(),
        k2.identity_index().is_some(),
        find_quantale_iso(&k2.quantale, &InvQuantale::two()).is_some()
    );

    // T*_{n,m} = T_{m,n}, and compacts absorb composition
    let space = compact_space(&diamond, &diamond, &budget).unwrap();
    for n in diamond.elements() {
        for m in diamond.elements() {
            let theta = theta_map(&diamond, &diamond, n, m);
            let adjoint = star_adjoint(&diamond, &diamond, &theta).unwrap();
            assert_eq!(adjoint.f_star, theta_map(&diamond, &diamond, m, n));
        }
    }
    println!(
        "K_2(diamond): {} operators from {} generators; star flips every generator",
        space.len(),
        diamond.n() * diamond.n()
    );

    // K_2(diamond) as a quantale is M^2(2)
    let kd = compact_quantale(&diamond, &budget).unwrap();
    let m2 = qlab::quantale::matrix_quantale(&Arc::new(InvQuantale::two()), 2, &budget).unwrap();
    println!(
        "K_2(diamond) ~ M^2(2): {}",
        find_quantale_iso(&kd.quantale, &m2.quantale).is_some()
    );

    // nuclearity and the independent retract route agree
    for (name, module) in [("2", two.clone()), ("diamond", diamond.clone())] {
        let report = nuclearity_and_projectivity(&module, &budget).unwrap();
        println!(
            "{name}: nuclear={}, retract through A^j found={}, weakly projective={}",
            report.nuclear,
            report.retract.is_some(),
            report.weakly_projective
        );
        assert_eq!(report.nuclear, report.retract.is_some());
    }
}
