//! Star-adjoints of maps between pre-Hilbert modules.
//!
//! A map `g : N -> M` is a star-adjoint to `f : M -> N` when
//! `<f(m), n> = <m, g(n)>` for all `m`, `n`. The canonical adjoint `f*` is
//! the join of all adjoints; it is computed pointwise as
//! `f*(n) = v P_n` with `P_n = { p | <m,p> = <f(m),n> for all m }`.
//! Join-continuity of `<m,->` puts the join back into `P_n` whenever `P_n`
//! is nonempty, which is asserted rather than trusted.

use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::suplat::enumerate_join_maps;

use super::{check_module_map, HilbertModule, QModule};

/// `f` has no star-adjoint; `witness` is an element of the codomain whose
/// fiber `P_n` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("map is not adjointable: P_n empty at n={witness}")]
pub struct NotAdjointable {
    pub witness: usize,
}

/// A map together with its canonical star-adjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointablePair {
    pub f: Vec<usize>,
    pub f_star: Vec<usize>,
}

/// Computes the canonical star-adjoint of `f : source -> target`, both
/// pre-Hilbert modules over the same quantale and on the same side.
pub fn star_adjoint(
    source: &HilbertModule,
    target: &HilbertModule,
    f: &[usize],
) -> Result<AdjointablePair, NotAdjointable> {
    assert_eq!(source.quantale(), target.quantale());
    assert_eq!(source.side(), target.side());
    let mut f_star = Vec::with_capacity(target.n());
    for n in target.elements() {
        let fiber: Vec<usize> = source
            .elements()
            .filter(|&p| {
                source
                    .elements()
                    .all(|m| source.ip(m, p) == target.ip(f[m], n))
            })
            .collect();
        if fiber.is_empty() {
            return Err(NotAdjointable { witness: n });
        }
        let join = source.lat().join_all(fiber.iter().copied());
        // the join of the fiber must itself lie in the fiber
        assert!(
            source
                .elements()
                .all(|m| source.ip(m, join) == target.ip(f[m], n)),
            "join of adjoint fiber escaped the fiber"
        );
        f_star.push(join);
    }
    Ok(AdjointablePair {
        f: f.to_vec(),
        f_star,
    })
}

/// All module maps `source -> target`, in the deterministic order of the
/// underlying join-map enumeration.
pub fn enumerate_module_maps(
    source: &QModule,
    target: &QModule,
    budget: &Budget,
) -> Result<Vec<Vec<usize>>, BudgetExceeded> {
    let maps = enumerate_join_maps(source.lat(), target.lat(), budget)?;
    Ok(maps
        .into_iter()
        .filter(|f| check_module_map(source, target, f).is_ok())
        .collect())
}

/// All adjointable maps `source -> target` with their canonical adjoints.
pub fn enumerate_adjointable_maps(
    source: &HilbertModule,
    target: &HilbertModule,
    budget: &Budget,
) -> Result<Vec<AdjointablePair>, BudgetExceeded> {
    let maps = enumerate_join_maps(source.lat(), target.lat(), budget)?;
    Ok(maps
        .into_iter()
        .filter_map(|f| star_adjoint(source, target, &f).ok())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    #[test]
    fn identity_is_self_adjoint() {
        let m = two_module();
        let id: Vec<usize> = m.elements().collect();
        let pair = star_adjoint(&m, &m, &id).unwrap();
        assert_eq!(pair.f_star, id);
    }

    #[test]
    fn action_map_has_inner_product_adjoint() {
        // m~ : A -> M, a |-> m <> a  has adjoint  m* : M -> A, n |-> <m,n>
        let a = two_module();
        let m = diamond_module();
        for fixed in m.elements() {
            let tilde: Vec<usize> = a.elements().map(|x| m.act(fixed, x)).collect();
            let pair = star_adjoint(&a, &m, &tilde).unwrap();
            let expected: Vec<usize> = m.elements().map(|n| m.ip(fixed, n)).collect();
            assert_eq!(pair.f_star, expected);
        }
    }

    #[test]
    fn duality_inner_products_make_every_map_adjointable() {
        // on a sup-lattice with a duality every join-preserving map has the
        // adjoint d o r_f o d; the atom collapse is no exception
        let m = diamond_module();
        let f = vec![0, 3, 3, 3];
        assert!(check_module_map(m.module(), m.module(), &f).is_ok());
        let pair = star_adjoint(&m, &m, &f).unwrap();
        assert_eq!(pair.f_star, vec![0, 3, 3, 3]);
    }

    #[test]
    fn monotone_step_on_degenerate_chain_is_not_adjointable() {
        // pre-Hilbert: <m,n> = 1 iff both nonzero. The map 0,m |-> 0,
        // top |-> m is a module map whose required adjoint column (0,0,1)
        // is not an inner-product column, so no adjoint exists.
        let m = degenerate_chain3();
        let f = vec![0, 0, 1];
        assert!(check_module_map(m.module(), m.module(), &f).is_ok());
        let err = star_adjoint(&m, &m, &f).unwrap_err();
        // exhaustive search over all join-preserving maps confirms absence
        let budget = crate::budget::Budget::default();
        let all = crate::suplat::enumerate_join_maps(m.lat(), m.lat(), &budget).unwrap();
        for g in all {
            let adjoint_everywhere = m
                .elements()
                .all(|x| m.elements().all(|n| m.ip(f[x], n) == m.ip(x, g[n])));
            assert!(!adjoint_everywhere);
        }
        assert!(err.witness < 3);
    }

    #[test]
    fn double_adjoint_is_identity_on_hilbert_modules() {
        let m = diamond_module();
        let budget = crate::budget::Budget::default();
        for pair in enumerate_adjointable_maps(&m, &m, &budget).unwrap() {
            let back = star_adjoint(&m, &m, &pair.f_star).unwrap();
            assert_eq!(back.f_star, pair.f, "f** = f for Hilbert modules");
        }
    }
}
