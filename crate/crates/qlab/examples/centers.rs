//! Centers: the bimodule-endomorphism and two-sided-adjointable routes,
//! and center transport along an imprimitivity bimodule.

use std::sync::Arc;

use qlab::budget::Budget;
use qlab::morita::{
    canonical_matrix_witness, center, center_adjointable_route, center_bimodule_route,
    center_transport, commutative_morita_iso, verify_imprimitivity,
};
use qlab::quantale::{find_quantale_iso, InvQuantale};
use qlab::suplat::SupLattice;
use qlab::tensor::regular_bimodule;

fn main() {
    let budget = Budget::default();
    let two = Arc::new(InvQuantale::two());
    let chain3 = Arc::new(InvQuantale::frame(Arc::new(SupLattice::chain(3))));

    // Cen(2) ~ 2 and Cen(chain3) ~ chain3
    for (name, q) in [("2", two.clone()), ("chain3", chain3.clone())] {
        let c = center(&q, &budget).unwrap();
        println!(
            "Cen({name}): size={}, iso to the base={}",
            c.quantale.n(),
            find_quantale_iso(&c.quantale, &q).is_some()
        );
        // the two independent computations coincide as sets of maps
        let endo = center_bimodule_route(&q, &budget).unwrap();
        let adjoint = center_adjointable_route(&q, &budget).unwrap();
        assert_eq!(endo, adjoint);
        assert_eq!(c.maps, endo);
    }

    // Cen(M^2(2)) ~ 2 although M^2(2) has 16 elements
    let w = canonical_matrix_witness(&two, 2, &budget).unwrap();
    let cen_m = center(&w.matrix.quantale, &budget).unwrap();
    println!(
        "Cen(M^2(2)): size={}, iso to 2={}",
        cen_m.quantale.n(),
        find_quantale_iso(&cen_m.quantale, &two).is_some()
    );

    // transport along the matrix witness is an iso with inverse delta
    let cen_2 = center(&two, &budget).unwrap();
    let transport = center_transport(&w.witness.x, &cen_m, &cen_2).unwrap();
    println!(
        "gamma: Cen(M^2(2)) -> Cen(2) = {:?}, delta o gamma = id: {}",
        transport.gamma,
        transport
            .gamma
            .iter()
            .enumerate()
            .all(|(i, &g)| transport.delta[g] == i)
    );

    // commutative case: transport restricts to a quantale isomorphism
    let x = verify_imprimitivity(&Arc::new(regular_bimodule(&chain3))).unwrap();
    let cen_c = center(&chain3, &budget).unwrap();
    let t = center_transport(&x, &cen_c, &cen_c).unwrap();
    let iso = commutative_morita_iso(&x, &cen_c, &cen_c, &t).unwrap();
    println!("chain3 ~ chain3 through its own center: {iso:?}");
}
