//! The canonical Morita witness between M^k(A) and A: the column module
//! with its two inner products, the conjugate, and the linked tensor
//! isomorphisms.

use std::sync::Arc;

use qlab::budget::Budget;
use qlab::morita::canonical_matrix_witness;
use qlab::quantale::InvQuantale;
use qlab::suplat::{Duality, SupLattice};

fn main() {
    let budget = Budget::default();
    let two = Arc::new(InvQuantale::two());

    // k = 1 degenerates to the quantale as a bimodule over itself
    let w1 = canonical_matrix_witness(&two, 1, &budget).unwrap();
    println!(
        "k=1: carrier size {}, tensors {} and {}",
        w1.witness.x.bimodule.n(),
        w1.witness.tensor_onto_left.n(),
        w1.witness.tensor_onto_right.n()
    );

    // k = 2: the column module 2^2 links M^2(2) and 2
    let w2 = canonical_matrix_witness(&two, 2, &budget).unwrap();
    let bim = &w2.witness.x.bimodule;
    println!(
        "k=2: all {} imprimitivity laws verified on the column module",
        w2.witness.x.certificate.len()
    );
    println!(
        "X (x)_2 X~ has {} elements (iso onto M^2(2) found)",
        w2.witness.tensor_onto_left.n()
    );
    println!(
        "X~ (x)_M X has {} elements (iso onto 2 found)",
        w2.witness.tensor_onto_right.n()
    );
    // the two inner products on basis vectors
    let codec = qlab::suplat::TupleCodec::new(vec![2, 2]);
    let e1 = codec.encode(&[1, 0]);
    let e2 = codec.encode(&[0, 1]);
    println!(
        "<e1,e2>_2 = {}, <e1,e2>_M = E01? {}",
        bim.right_ip(e1, e2),
        bim.left_ip(e1, e2) == Some(w2.matrix.unit_matrix(0, 1, 1))
    );

    // the same story through Q0(S): the diamond with its atom swap
    let diamond = Arc::new(
        SupLattice::validate(
            4,
            vec![
                0, 1, 2, 3, //
                1, 1, 3, 3, //
                2, 3, 2, 3, //
                3, 3, 3, 3,
            ],
        )
        .unwrap(),
    );
    let duality = Duality::validate(&diamond, vec![3, 2, 1, 0]).unwrap();
    let h2 = qlab::morita::hilbert2_witness(&diamond, &duality, &budget).unwrap();
    println!(
        "Q0(diamond): {} elements = K_2(diamond) elementwise; {} rank-one generators",
        h2.endo.sub.n(),
        h2.theta_generator_count
    );
}
