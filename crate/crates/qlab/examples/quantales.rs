//! Involutive quantales: residuation, opposites, matrix quantales and the
//! endomorphism quantales Q(S), Q0(S).

use std::sync::Arc;

use qlab::budget::Budget;
use qlab::quantale::{endo_quantales, find_quantale_iso, matrix_quantale, InvQuantale};
use qlab::suplat::{Duality, SupLattice};

fn main() {
    let budget = Budget::default();
    let two = InvQuantale::two();
    let chain3 = InvQuantale::frame(Arc::new(SupLattice::chain(3)));

    // residuation: Heyting implication in a frame
    println!(
        "chain3: t ->_r m = {} (Galois law holds for all pairs)",
        chain3.residuate_right(2, 1)
    );
    for a in chain3.elements() {
        for c in chain3.elements() {
            let r = chain3.residuate_right(a, c);
            for s in chain3.elements() {
                assert_eq!(chain3.leq(chain3.mult(a, s), c), chain3.leq(s, r));
            }
        }
    }

    // the 2x2 matrix quantale over 2: 16 elements, unital, non-commutative
    let m2 = matrix_quantale(&two, 2, &budget).unwrap();
    println!(
        "M^2(2): size={}, unital={}, commutative={}, m-regular={}",
        m2.quantale.n(),
        m2.quantale.is_unital(),
        m2.quantale.is_commutative(),
        m2.quantale.is_m_regular()
    );
    let e00 = m2.unit_matrix(0, 0, 1);
    let e01 = m2.unit_matrix(0, 1, 1);
    println!(
        "E00.E01 = {} but E01.E00 = {} (non-commutativity witness)",
        m2.quantale.mult(e00, e01),
        m2.quantale.mult(e01, e00)
    );

    // the opposite quantale differs on tables but is isomorphic via transpose
    let op = m2.quantale.opposite();
    println!(
        "opposite of M^2(2): tables differ = {}, isomorphic = {}",
        op.mult_table() != m2.quantale.mult_table(),
        find_quantale_iso(&op, &m2.quantale).is_some()
    );

    // Q(S) and Q0(S) for the diamond with the atom-swapping duality
    let diamond = SupLattice::validate(
        4,
        vec![
            0, 1, 2, 3, //
            1, 1, 3, 3, //
            2, 3, 2, 3, //
            3, 3, 3, 3,
        ],
    )
    .unwrap();
    let duality = Duality::validate(&diamond, vec![3, 2, 1, 0]).unwrap();
    let endo = endo_quantales(&diamond, Some(&duality), &budget).unwrap();
    println!(
        "Q(diamond): {} maps, {} right-sided; Q0(diamond): {} elements",
        endo.full.n(),
        endo.right_sided.len(),
        endo.sub.n()
    );
    println!(
        "Q0(diamond) ~ M^2(2): {}",
        find_quantale_iso(&endo.sub, &m2.quantale).is_some()
    );
}
