//! Compact operators between Hilbert modules.
//!
//! The generators are the rank-one maps `T_{n,m}(x) = n <> <m,x>`; the
//! compact operators `K(M,N)` are their closure under pointwise joins.
//! The closure is automatically closed under composition with adjointable
//! maps on either side, and under star on endomorphisms
//! (`T_{n,m}* = T_{m,n}`), because composition of generators is again a
//! generator: `T_{n,m} o T_{q,p} = T_{n <> <m,q>, p}`.
//!
//! The defining formula is read as `n <> <m,x>` throughout (the
//! composition of the two one-element operators), matching `W o W*`.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::sync::Arc;

use crate::budget::{Budget, BudgetExceeded};
use crate::quantale::InvQuantale;
use crate::suplat::SupLattice;

use super::{biproduct, regular_right, star_adjoint, Biproduct, HilbertModule};

/// The rank-one generator `T_{n,m} : M -> N`, `x |-> n <> <m,x>`.
pub fn theta_map(source: &HilbertModule, target: &HilbertModule, n: usize, m: usize) -> Vec<usize> {
    source
        .elements()
        .map(|x| target.act(n, source.ip(m, x)))
        .collect()
}

/// The join-closure `K(M,N)` of the rank-one generators.
#[derive(Debug, Clone)]
pub struct CompactSpace {
    pub source: Arc<HilbertModule>,
    pub target: Arc<HilbertModule>,
    /// Closure elements as map tables, sorted lexicographically.
    pub elements: Vec<Vec<usize>>,
    /// Generator grid: `theta[n * |M| + m]` is the element index of `T_{n,m}`.
    pub theta: Vec<usize>,
}

impl CompactSpace {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn theta_index(&self, n: usize, m: usize) -> usize {
        self.theta[n * self.source.n() + m]
    }

    pub fn index_of(&self, table: &[usize]) -> Option<usize> {
        self.elements
            .binary_search_by(|e| e.as_slice().cmp(table))
            .ok()
    }

    pub fn is_compact(&self, table: &[usize]) -> bool {
        self.index_of(table).is_some()
    }

    /// The sup-lattice of compact operators under the pointwise order.
    pub fn as_lattice(&self) -> SupLattice {
        let n = self.elements.len();
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let joined = self.pointwise_join(a, b);
                join[a * n + b] = self
                    .index_of(&joined)
                    .expect("closure is join-closed by construction");
            }
        }
        SupLattice::validate(n, join).expect("pointwise order on a join-closed set")
    }

    fn pointwise_join(&self, a: usize, b: usize) -> Vec<usize> {
        self.elements[a]
            .iter()
            .zip(&self.elements[b])
            .map(|(&x, &y)| self.target.lat().join(x, y))
            .collect()
    }

    /// Maximal generator decomposition of a compact operator: all pairs
    /// `(n,m)` with `T_{n,m}` pointwise below it. Their join recovers the
    /// operator.
    pub fn maximal_decomposition(&self, index: usize) -> Vec<(usize, usize)> {
        let f = &self.elements[index];
        let mut pairs = Vec::new();
        for n in self.target.elements() {
            for m in self.source.elements() {
                let t = &self.elements[self.theta_index(n, m)];
                if t.iter()
                    .zip(f.iter())
                    .all(|(&tx, &fx)| self.target.lat().leq(tx, fx))
                {
                    pairs.push((n, m));
                }
            }
        }
        pairs
    }
}

/// Builds `K(M,N)` by closing the generator grid under binary joins.
pub fn compact_space(
    source: &Arc<HilbertModule>,
    target: &Arc<HilbertModule>,
    budget: &Budget,
) -> Result<CompactSpace, BudgetExceeded> {
    assert_eq!(source.quantale(), target.quantale());
    let zero = vec![target.lat().bottom(); source.n()];
    let mut closure: BTreeSet<Vec<usize>> = BTreeSet::new();
    closure.insert(zero);
    let mut generators = Vec::new();
    for n in target.elements() {
        for m in source.elements() {
            let t = theta_map(source, target, n, m);
            closure.insert(t.clone());
            generators.push(t);
        }
    }
    let mut frontier: Vec<Vec<usize>> = closure.iter().cloned().collect();
    while !frontier.is_empty() {
        budget.admit_carrier(closure.len(), "compact-operator closure")?;
        let mut next = Vec::new();
        for f in &frontier {
            for g in &generators {
                let joined: Vec<usize> = f
                    .iter()
                    .zip(g.iter())
                    .map(|(&x, &y)| target.lat().join(x, y))
                    .collect();
                if closure.insert(joined.clone()) {
                    next.push(joined);
                }
            }
        }
        frontier = next;
    }
    budget.admit_carrier(closure.len(), "compact-operator closure")?;
    let elements: Vec<Vec<usize>> = closure.into_iter().collect();
    let theta = generators
        .iter()
        .map(|t| {
            elements
                .binary_search_by(|e| e.as_slice().cmp(t.as_slice()))
                .expect("generators are in the closure")
        })
        .collect();
    Ok(CompactSpace {
        source: source.clone(),
        target: target.clone(),
        elements,
        theta,
    })
}

/// `K(M)` as an involutive quantale: composition as multiplication, the
/// star-adjoint as involution.
#[derive(Debug, Clone)]
pub struct CompactQuantale {
    pub space: CompactSpace,
    pub quantale: Arc<InvQuantale>,
}

impl CompactQuantale {
    /// Index of the identity operator, when it is compact.
    pub fn identity_index(&self) -> Option<usize> {
        let id: Vec<usize> = self.space.source.elements().collect();
        self.space.index_of(&id)
    }
}

pub fn compact_quantale(
    module: &Arc<HilbertModule>,
    budget: &Budget,
) -> Result<CompactQuantale, BudgetExceeded> {
    let space = compact_space(module, module, budget)?;
    let n = space.len();
    let index: HashMap<&[usize], usize> = space
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect();
    let mut mult = vec![0; n * n];
    let mut star = vec![0; n];
    for a in 0..n {
        let adjoint = star_adjoint(module, module, &space.elements[a])
            .expect("compact operators are adjointable");
        star[a] = *index
            .get(adjoint.f_star.as_slice())
            .expect("adjoints of compacts are compact");
        for b in 0..n {
            let composed: Vec<usize> = space.elements[b]
                .iter()
                .map(|&x| space.elements[a][x])
                .collect();
            mult[a * n + b] = *index
                .get(composed.as_slice())
                .expect("compacts absorb composition");
        }
    }
    let lat = Arc::new(space.as_lattice());
    let quantale = InvQuantale::validate(lat, mult, star, None)
        .map(Arc::new)
        .expect("K(M) is an involutive quantale");
    Ok(CompactQuantale { space, quantale })
}

/// An adjointable retract presentation `r o i = id` through a power `A^j`.
#[derive(Debug, Clone)]
pub struct RetractWitness {
    pub power: Biproduct,
    pub embed: Vec<usize>,
    pub retraction: Vec<usize>,
}

/// Searches for an adjointable retract of `A^j` onto `M`, trying
/// `j = 1, ..., |M|` in order. Deterministic: first witness in enumeration
/// order wins.
pub fn retract_search(
    module: &Arc<HilbertModule>,
    budget: &Budget,
) -> Result<Option<RetractWitness>, BudgetExceeded> {
    let base = Arc::new(regular_right(module.quantale().clone()));
    for j in 1..=module.n() {
        let power = biproduct(&vec![base.clone(); j], budget)?;
        let embeds = super::enumerate_adjointable_maps(module, &power.module, budget)?;
        let retractions = super::enumerate_adjointable_maps(&power.module, module, budget)?;
        for i in &embeds {
            for r in &retractions {
                let composed_is_id = module.elements().all(|m| r.f[i.f[m]] == m);
                if composed_is_id {
                    return Ok(Some(RetractWitness {
                        power,
                        embed: i.f.clone(),
                        retraction: r.f.clone(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Nuclearity and weak-projectivity report.
///
/// Nuclearity (identity compact) and the retract route are computed
/// independently; for a unital quantale and essential module they must
/// agree, and weak projectivity is decided by the retract criterion.
#[derive(Debug, Clone)]
pub struct NuclearityReport {
    pub nuclear: bool,
    pub retract: Option<RetractWitness>,
    pub weakly_projective: bool,
}

pub fn nuclearity_and_projectivity(
    module: &Arc<HilbertModule>,
    budget: &Budget,
) -> Result<NuclearityReport, BudgetExceeded> {
    let space = compact_space(module, module, budget)?;
    let id: Vec<usize> = module.elements().collect();
    let nuclear = space.is_compact(&id);
    let retract = retract_search(module, budget)?;
    let weakly_projective = retract.is_some();
    Ok(NuclearityReport {
        nuclear,
        retract,
        weakly_projective,
    })
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    #[test]
    fn compacts_on_two_are_zero_and_identity() {
        let two = two_module();
        let k = compact_quantale(&two, &Budget::default()).unwrap();
        assert_eq!(k.quantale.n(), 2);
        assert_eq!(k.identity_index(), Some(1));
        // K_2(2) is isomorphic to 2
        let iso = crate::quantale::find_quantale_iso(&k.quantale, &crate::quantale::InvQuantale::two());
        assert!(iso.is_some());
    }

    #[test]
    fn theta_star_is_theta_flipped() {
        let d = diamond_module();
        let space = compact_space(&d, &d, &Budget::default()).unwrap();
        for n in d.elements() {
            for m in d.elements() {
                let t = theta_map(&d, &d, n, m);
                let adj = star_adjoint(&d, &d, &t).unwrap();
                assert_eq!(adj.f_star, theta_map(&d, &d, m, n));
                assert!(space.is_compact(&adj.f_star));
            }
        }
    }

    #[test]
    fn composition_absorbs_adjointables() {
        let d = diamond_module();
        let budget = Budget::default();
        let space = compact_space(&d, &d, &budget).unwrap();
        let adjointables = enumerate_all_adjointable_tables(&d, &budget);
        for k in &space.elements {
            for f in &adjointables {
                let kf: Vec<usize> = f.iter().map(|&x| k[x]).collect();
                let fk: Vec<usize> = k.iter().map(|&x| f[x]).collect();
                assert!(space.is_compact(&kf));
                assert!(space.is_compact(&fk));
            }
        }
    }

    fn enumerate_all_adjointable_tables(
        m: &std::sync::Arc<HilbertModule>,
        budget: &Budget,
    ) -> Vec<Vec<usize>> {
        super::super::enumerate_adjointable_maps(m, m, budget)
            .unwrap()
            .into_iter()
            .map(|p| p.f)
            .collect()
    }

    #[test]
    fn two_over_itself_is_nuclear() {
        let two = two_module();
        let report = nuclearity_and_projectivity(&two, &Budget::default()).unwrap();
        assert!(report.nuclear);
        assert!(report.weakly_projective);
        let witness = report.retract.unwrap();
        assert_eq!(witness.power.module.n(), 2);
    }

    #[test]
    fn diamond_is_nuclear_over_two() {
        let d = diamond_module();
        let report = nuclearity_and_projectivity(&d, &Budget::default()).unwrap();
        assert!(report.nuclear);
        assert!(report.retract.is_some());
    }

    #[test]
    fn module_maps_from_powers_are_exactly_the_compacts() {
        // over a unital quantale every module map A^J -> M is compact
        let budget = Budget::default();
        let two_q = two_module().quantale().clone();
        for j in 1..=2usize {
            let power = super::super::power_module(&two_q, j, &budget).unwrap();
            for target in [two_module(), diamond_module()] {
                let space = compact_space(&power.module, &target, &budget).unwrap();
                let mut module_maps = super::super::enumerate_module_maps(
                    power.module.module(),
                    target.module(),
                    &budget,
                )
                .unwrap();
                module_maps.sort();
                assert_eq!(module_maps, space.elements);
            }
        }
    }

    #[test]
    fn identity_on_powers_is_compact_over_unital_base() {
        let budget = Budget::default();
        let two_q = two_module().quantale().clone();
        let power = super::super::power_module(&two_q, 2, &budget).unwrap();
        let space = compact_space(&power.module, &power.module, &budget).unwrap();
        let id: Vec<usize> = power.module.elements().collect();
        assert!(space.is_compact(&id));
    }

    #[test]
    fn unital_m_regular_quantales_are_nuclear_over_themselves() {
        let budget = Budget::default();
        let two = std::sync::Arc::new(crate::quantale::InvQuantale::two());
        let chain3 = std::sync::Arc::new(crate::quantale::InvQuantale::frame(
            std::sync::Arc::new(crate::suplat::SupLattice::chain(3)),
        ));
        let mat2 = crate::quantale::matrix_quantale(&two, 2, &budget)
            .unwrap()
            .quantale;
        for q in [two, chain3, mat2] {
            assert!(q.is_unital() && q.is_m_regular());
            let module = std::sync::Arc::new(super::super::regular_right(q.clone()));
            let k = compact_quantale(&module, &budget).unwrap();
            assert!(k.identity_index().is_some(), "regular module is nuclear");
            // K_A(A) recovers A
            assert!(
                crate::quantale::find_quantale_iso(&k.quantale, &q).is_some(),
                "K_A(A) is isomorphic to A"
            );
        }
    }

    #[test]
    fn maximal_decomposition_recovers_the_operator() {
        let d = diamond_module();
        let space = compact_space(&d, &d, &Budget::default()).unwrap();
        for (idx, f) in space.elements.iter().enumerate() {
            let pairs = space.maximal_decomposition(idx);
            let mut acc = vec![d.lat().bottom(); d.n()];
            for (n, m) in pairs {
                let t = theta_map(&d, &d, n, m);
                for (slot, &tx) in acc.iter_mut().zip(&t) {
                    *slot = d.lat().join(*slot, tx);
                }
            }
            assert_eq!(&acc, f);
        }
    }
}
