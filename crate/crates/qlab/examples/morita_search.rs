//! Brute-force Morita search: a witness for 2 ~ 2 and the exhaustion
//! certificate for chain3 vs 2, consistent with the commutative-case
//! theorem (Morita equivalent commutative quantales are isomorphic).

use std::sync::Arc;

use qlab::budget::Budget;
use qlab::morita::{morita_search, SearchOutcome};
use qlab::quantale::{find_quantale_iso, InvQuantale};
use qlab::suplat::SupLattice;

fn main() {
    let budget = Budget::default();
    let two = Arc::new(InvQuantale::two());
    let chain3 = Arc::new(InvQuantale::frame(Arc::new(SupLattice::chain(3))));

    match morita_search(&two, &two, 2, &budget, 1).unwrap() {
        SearchOutcome::Witness {
            witness,
            carrier_rank,
            candidates,
        } => println!(
            "2 ~ 2: witness on carrier of size {} (rank {carrier_rank}, {candidates} candidates)",
            witness.x.bimodule.n()
        ),
        SearchOutcome::Exhausted(_) => unreachable!("2 is Morita equivalent to itself"),
    }

    match morita_search(&chain3, &two, 4, &budget, 4).unwrap() {
        SearchOutcome::Witness { .. } => unreachable!("chain3 and 2 are not equivalent"),
        SearchOutcome::Exhausted(cert) => {
            println!(
                "chain3 vs 2: exhausted {} carriers, {} candidates total",
                cert.per_carrier.len(),
                cert.total_candidates
            );
            for stats in &cert.per_carrier {
                println!(
                    "  carrier size {} (rank {}): {} candidates",
                    stats.size, stats.rank, stats.candidates
                );
            }
        }
    }

    // consistent with the commutative case: no quantale isomorphism either
    println!(
        "quantale iso chain3 ~ 2: {:?}",
        find_quantale_iso(&chain3, &two)
    );
}
