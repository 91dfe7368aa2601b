//! Finite sup-lattices: validation, derived order, right adjoints,
//! join-map enumeration and isomorphism search.

use std::sync::Arc;

use qlab::budget::Budget;
use qlab::suplat::{
    enumerate_join_maps, enumerate_join_maps_raw, find_lattice_iso, LatticeMap, SupLattice,
};

fn main() {
    // the diamond 0 < {a,b} < 1, given by its join table
    let diamond = SupLattice::validate(
        4,
        vec![
            0, 1, 2, 3, //
            1, 1, 3, 3, //
            2, 3, 2, 3, //
            3, 3, 3, 3,
        ],
    )
    .expect("the diamond is a lattice");
    println!(
        "diamond: bottom={}, top={}, join-irreducibles={:?}",
        diamond.bottom(),
        diamond.top(),
        diamond.join_irreducibles()
    );

    // a non-commutative table is rejected with a witness
    let broken = SupLattice::validate(2, vec![0, 0, 1, 1]);
    println!("broken table: {:?}", broken.unwrap_err());

    // right adjoint of the middle-collapsing map on the 3-chain
    let chain3 = Arc::new(SupLattice::chain(3));
    let collapse = LatticeMap::new(chain3.clone(), chain3.clone(), vec![0, 0, 2]).unwrap();
    let adjoint = collapse.right_adjoint();
    println!("collapse {:?} has right adjoint {:?}", collapse.values, adjoint.values);
    for s in 0..3 {
        for t in 0..3 {
            assert_eq!(
                chain3.leq(collapse.apply(s), t),
                chain3.leq(s, adjoint.apply(t)),
                "Galois law"
            );
        }
    }

    // join-map enumeration agrees with raw filtering
    let budget = Budget::default();
    let fast = enumerate_join_maps(&diamond, &chain3, &budget).unwrap();
    let slow = enumerate_join_maps_raw(&diamond, &chain3, &budget).unwrap();
    println!(
        "join-preserving maps diamond -> chain3: {} (raw filter agrees: {})",
        fast.len(),
        fast.len() == slow.len()
    );

    // isomorphism search: relabeled diamonds are isomorphic, chains are not
    let perm = [0usize, 2, 1, 3];
    let mut table = vec![0; 16];
    for a in 0..4 {
        for b in 0..4 {
            table[perm[a] * 4 + perm[b]] = perm[diamond.join(a, b)];
        }
    }
    let relabeled = SupLattice::validate(4, table).unwrap();
    println!(
        "diamond ~ relabeled diamond: {:?}",
        find_lattice_iso(&diamond, &relabeled)
    );
    println!(
        "diamond ~ 4-chain: {:?}",
        find_lattice_iso(&diamond, &SupLattice::chain(4))
    );
}
