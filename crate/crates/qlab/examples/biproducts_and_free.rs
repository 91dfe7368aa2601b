//! Biproducts, powers, free modules and the generator/cogenerator maps.

use std::sync::Arc;

use qlab::budget::Budget;
use qlab::hilbmod::{
    biproduct, free_module, generator_maps, regular_right, star_adjoint,
};
use qlab::quantale::InvQuantale;

fn main() {
    let budget = Budget::default();
    let two_q = Arc::new(InvQuantale::two());
    let two = Arc::new(regular_right(two_q.clone()));

    // 2^2: four elements, orthogonal unit vectors
    let square = biproduct(&[two.clone(), two.clone()], &budget).unwrap();
    let e10 = square.codec.encode(&[1, 0]);
    let e01 = square.codec.encode(&[0, 1]);
    println!(
        "2^2: size={}, <e1,e2>={}, level={}, m-regular={}",
        square.module.n(),
        square.module.ip(e10, e01),
        square.module.level().as_str(),
        square.module.is_m_regular()
    );
    for (j, factor) in square.factors.iter().enumerate() {
        let inj = square.injection(j);
        let proj = square.projection(j);
        for x in factor.elements() {
            assert_eq!(proj[inj[x]], x, "pi_j o i_j = id");
        }
    }

    // the free module on two generators over 2 is 2^2; extensions of the
    // four set-maps are pairwise distinct module maps
    let free = free_module(&two_q, 2, &budget).unwrap();
    let mut extensions = Vec::new();
    for f in [[0usize, 0], [0, 1], [1, 0], [1, 1]] {
        let g = free.extension(&two, &f);
        let h = free.extension_adjoint(&two, &f);
        let pair = star_adjoint(&free.power.module, &two, &g).unwrap();
        assert_eq!(pair.f_star, h, "extension adjoint matches the formula");
        extensions.push(g);
    }
    extensions.sort();
    extensions.dedup();
    println!("free module F(x,y) over 2: {} distinct extensions", extensions.len());

    // generator maps p : A^M -> M and i : M -> A^M
    let gen = generator_maps(&two, &budget).unwrap();
    println!(
        "A^M for M = 2: size={}, p surjective via u={}, i injective={}",
        gen.power.module.n(),
        two.elements().all(|n| gen.p[gen.u[n]] == n),
        {
            let mut images: Vec<usize> = two.elements().map(|m| gen.i[m]).collect();
            images.sort_unstable();
            images.dedup();
            images.len() == two.n()
        }
    );
    println!(
        "u_1 = {:?} (scalar residuations m ->_R 1)",
        gen.power.codec.decode(gen.u[1])
    );
}
