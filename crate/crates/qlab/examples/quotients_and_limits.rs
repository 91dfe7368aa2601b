//! Hilbert quotients, coequalizers, finite limits and the kernel-pair
//! presentation of a surjection.

use std::sync::Arc;

use qlab::budget::Budget;
use qlab::catalog;
use qlab::hilbmod::{
    coequalizer, finite_limit, hilbert_quotient, kernel_pair_presentation, omega_map,
    power_module, regular_right, Diagram, DiagramArrow,
};
use qlab::quantale::InvQuantale;

fn main() {
    let budget = Budget::default();
    let ws = catalog::workspace();

    // the degenerate chain quotients onto a 2-element Hilbert module
    let degenerate = ws.modules["degenerate_chain3"].hilbert.as_ref().unwrap();
    let quotient = hilbert_quotient(degenerate);
    println!(
        "degenerate chain3 -> Hilbert quotient: {} classes, level {}",
        quotient.module.n(),
        quotient.module.level().as_str()
    );

    // coequalizer of the two atom inclusions collapses the diamond
    let two = ws.modules["diamond"].hilbert.as_ref().unwrap().clone();
    let scalar = Arc::new(regular_right(Arc::new(InvQuantale::two())));
    let u: Vec<usize> = scalar.elements().map(|x| two.act(1, x)).collect();
    let v: Vec<usize> = scalar.elements().map(|x| two.act(2, x)).collect();
    let coeq = coequalizer(scalar.module(), two.module(), &u, &v, Some(&two)).unwrap();
    println!(
        "coequalizer of the atom inclusions: {} classes (q = {:?})",
        coeq.module.n(),
        coeq.q
    );

    // equalizer of the two atom actions is the zero module
    let diagram = Diagram {
        objects: vec![scalar.clone(), two.clone()],
        arrows: vec![
            DiagramArrow {
                source: 0,
                target: 1,
                values: u,
            },
            DiagramArrow {
                source: 0,
                target: 1,
                values: v,
            },
        ],
    };
    let limit = finite_limit(&diagram, &budget).unwrap();
    println!("equalizer of the atom actions: {} element(s)", limit.module.n());

    // kernel-pair presentation of p : A^2 -> A over 2
    let power = power_module(scalar.quantale(), 2, &budget).unwrap();
    let p = omega_map(&power, &scalar, &[0, 1]);
    let kp = kernel_pair_presentation(&power.module, &scalar, &p, &budget).unwrap();
    println!(
        "kernel pair of p : 2^2 -> 2: |D|={}, |ess(D)|={}, presentation power size={}",
        kp.d.n(),
        kp.ess.len(),
        kp.power.module.n()
    );
    let coequalizes = (0..kp.power.module.n()).all(|x| p[kp.u[x]] == p[kp.v[x]]);
    println!("p coequalizes (u, v): {coequalizes}");
}
