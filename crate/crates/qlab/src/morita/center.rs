//! Centers of involutive quantales and center transport along
//! imprimitivity bimodules.
//!
//! The center is the set of bimodule endomorphisms of `A` (join-preserving
//! `f` with `f(a.b) = a.f(b) = f(a).b`), a unital commutative involutive
//! quantale under pointwise join, composition and the involution
//! `f*(m) = f(m*)*`. By the two-sided adjointability characterization the
//! same set is carved out by requiring star-adjoints with respect to both
//! regular inner products; both routes are implemented independently.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::hilbmod::{regular_left, regular_right, star_adjoint};
use crate::quantale::InvQuantale;
use crate::suplat::enumerate_join_maps;

use super::ImprimitivityBimodule;

/// The center `Cen(A)` with its elements as endomorphism tables.
#[derive(Debug, Clone)]
pub struct Center {
    pub base: Arc<InvQuantale>,
    /// Element tables, sorted lexicographically; index = quantale element.
    pub maps: Vec<Vec<usize>>,
    pub quantale: Arc<InvQuantale>,
}

impl Center {
    /// Index of the bimodule endomorphism `c . (-)` for a central `c`.
    pub fn index_of_multiplier(&self, c: usize) -> Option<usize> {
        let table: Vec<usize> = self.base.elements().map(|x| self.base.mult(c, x)).collect();
        self.index_of(&table)
    }

    pub fn index_of(&self, table: &[usize]) -> Option<usize> {
        self.maps
            .binary_search_by(|m| m.as_slice().cmp(table))
            .ok()
    }

    pub fn identity_index(&self) -> usize {
        let id: Vec<usize> = self.base.elements().collect();
        self.index_of(&id).expect("the identity is central")
    }
}

/// Bimodule-endomorphism route: join-preserving maps with
/// `f(a.b) = a.f(b) = f(a).b`.
pub fn center_bimodule_route(
    a: &Arc<InvQuantale>,
    budget: &Budget,
) -> Result<Vec<Vec<usize>>, BudgetExceeded> {
    let mut out: Vec<Vec<usize>> = enumerate_join_maps(a.lat(), a.lat(), budget)?
        .into_iter()
        .filter(|f| {
            a.elements().all(|x| {
                a.elements().all(|y| {
                    let fxy = f[a.mult(x, y)];
                    fxy == a.mult(x, f[y]) && fxy == a.mult(f[x], y)
                })
            })
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Two-sided adjointability route: maps with star-adjoints for both the
/// right product `a*.b` and the left product `a.b*`.
pub fn center_adjointable_route(
    a: &Arc<InvQuantale>,
    budget: &Budget,
) -> Result<Vec<Vec<usize>>, BudgetExceeded> {
    let right = regular_right(a.clone());
    let left = regular_left(a.clone());
    let mut out: Vec<Vec<usize>> = enumerate_join_maps(a.lat(), a.lat(), budget)?
        .into_iter()
        .filter(|f| {
            star_adjoint(&right, &right, f).is_ok() && star_adjoint(&left, &left, f).is_ok()
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Computes `Cen(A)` as a validated commutative unital involutive quantale.
///
/// For unital `A` the elements are exactly the multiplications by central
/// elements, which avoids enumerating the whole endomorphism space; for
/// non-unital `A` the bimodule-endomorphism enumeration is used.
pub fn center(a: &Arc<InvQuantale>, budget: &Budget) -> Result<Center, BudgetExceeded> {
    let mut maps: Vec<Vec<usize>> = if a.is_unital() {
        let central: Vec<usize> = a
            .elements()
            .filter(|&c| a.elements().all(|x| a.mult(c, x) == a.mult(x, c)))
            .collect();
        central
            .iter()
            .map(|&c| a.elements().map(|x| a.mult(c, x)).collect())
            .collect()
    } else {
        center_bimodule_route(a, budget)?
    };
    maps.sort();
    maps.dedup();
    let k = maps.len();
    let index: HashMap<&[usize], usize> = maps
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_slice(), i))
        .collect();
    let lookup = |t: &[usize]| -> usize {
        *index
            .get(t)
            .expect("Cen(A) is closed under join, composition and star")
    };
    let mut join = vec![0; k * k];
    let mut mult = vec![0; k * k];
    let mut star = vec![0; k];
    for i in 0..k {
        let star_table: Vec<usize> = a.elements().map(|m| a.star(maps[i][a.star(m)])).collect();
        star[i] = lookup(&star_table);
        for j in 0..k {
            let joined: Vec<usize> = a
                .elements()
                .map(|m| a.join(maps[i][m], maps[j][m]))
                .collect();
            join[i * k + j] = lookup(&joined);
            let composed: Vec<usize> = a.elements().map(|m| maps[i][maps[j][m]]).collect();
            mult[i * k + j] = lookup(&composed);
        }
    }
    let lat = Arc::new(
        crate::suplat::SupLattice::validate(k, join).expect("pointwise join table"),
    );
    let quantale = InvQuantale::validate(lat, mult, star, None)
        .map(Arc::new)
        .expect("Cen(A) is an involutive quantale");
    assert!(quantale.is_commutative(), "Cen(A) must be commutative");
    assert!(quantale.is_unital(), "Cen(A) must be unital");
    Ok(Center {
        base: a.clone(),
        maps,
        quantale,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("no spanning decomposition for element {element} on side {side}")]
    NoSpanning { side: char, element: usize },
    #[error("transport ill-defined at element {element}: two decompositions give {first} vs {second}")]
    IllDefined {
        element: usize,
        first: usize,
        second: usize,
    },
    #[error("transported map of center element {index} is not central on the other side")]
    NotCentral { index: usize },
    #[error("transport fails to be an involutive-quantale isomorphism: {law}")]
    NotIso { law: &'static str },
}

/// The transport isomorphism `Cen(A) -> Cen(B)` along an imprimitivity
/// `A`-`B` bimodule, with its inverse.
#[derive(Debug, Clone)]
pub struct CenterTransport {
    /// `gamma[i]`: index in `Cen(B)` of the transport of `Cen(A)` element `i`.
    pub gamma: Vec<usize>,
    /// `delta[j]`: index in `Cen(A)` of the inverse transport.
    pub delta: Vec<usize>,
}

/// Computes `gamma(f)(v <x_i, r_i * y_i>_B) = v <x_i, f(r_i) * y_i>_B` over
/// the canonical spanning decomposition (all triples whose value lies below
/// the target), probes well-definedness with a second greedy decomposition,
/// and verifies that the resulting map is an involutive-quantale
/// isomorphism with the analogous `delta` as inverse.
pub fn center_transport(
    x: &ImprimitivityBimodule,
    cen_a: &Center,
    cen_b: &Center,
) -> Result<CenterTransport, TransportError> {
    let bim = &x.bimodule;
    let a = bim.left_quantale();
    let b = bim.right_quantale();

    // spanning triples for the B side: (x, r, y) with <x, r*y>_B <= b
    let b_triples: Vec<(usize, usize, usize, usize)> = bim
        .elements()
        .flat_map(|xx| {
            a.elements()
                .flat_map(move |r| bim.elements().map(move |yy| (xx, r, yy)))
        })
        .map(|(xx, r, yy)| (xx, r, yy, bim.right_ip(xx, bim.left_act(r, yy))))
        .collect();
    for target in b.elements() {
        let full = b
            .lat()
            .join_all(b_triples.iter().filter(|t| b.leq(t.3, target)).map(|t| t.3));
        if full != target {
            return Err(TransportError::NoSpanning {
                side: 'B',
                element: target,
            });
        }
    }
    let gamma_of = |f: &[usize]| -> Result<Vec<usize>, TransportError> {
        let mut table = Vec::with_capacity(b.n());
        for target in b.elements() {
            let canonical: Vec<&(usize, usize, usize, usize)> = b_triples
                .iter()
                .filter(|t| b.leq(t.3, target))
                .collect();
            let value = b.lat().join_all(
                canonical
                    .iter()
                    .map(|&&(xx, r, yy, _)| bim.right_ip(xx, bim.left_act(f[r], yy))),
            );
            // greedy probe: a second decomposition, kept deterministic
            let mut greedy: Vec<&(usize, usize, usize, usize)> = Vec::new();
            let mut running = b.bottom();
            for t in canonical.iter().rev() {
                if running == target {
                    break;
                }
                let next = b.join(running, t.3);
                if next != running {
                    greedy.push(t);
                    running = next;
                }
            }
            let probe = b.lat().join_all(
                greedy
                    .iter()
                    .map(|&&(xx, r, yy, _)| bim.right_ip(xx, bim.left_act(f[r], yy))),
            );
            if probe != value {
                return Err(TransportError::IllDefined {
                    element: target,
                    first: value,
                    second: probe,
                });
            }
            table.push(value);
        }
        Ok(table)
    };

    // spanning triples for the A side: (x, s, y) with <x <> s, y>_A <= a
    let lip = |p: usize, q: usize| {
        bim.left_ip(p, q)
            .expect("imprimitivity bimodules carry a left inner product")
    };
    let a_triples: Vec<(usize, usize, usize, usize)> = bim
        .elements()
        .flat_map(|xx| {
            b.elements()
                .flat_map(move |s| bim.elements().map(move |yy| (xx, s, yy)))
        })
        .map(|(xx, s, yy)| (xx, s, yy, lip(bim.right_act(xx, s), yy)))
        .collect();
    for target in a.elements() {
        let full = a
            .lat()
            .join_all(a_triples.iter().filter(|t| a.leq(t.3, target)).map(|t| t.3));
        if full != target {
            return Err(TransportError::NoSpanning {
                side: 'A',
                element: target,
            });
        }
    }
    let delta_of = |g: &[usize]| -> Result<Vec<usize>, TransportError> {
        let mut table = Vec::with_capacity(a.n());
        for target in a.elements() {
            let canonical: Vec<&(usize, usize, usize, usize)> = a_triples
                .iter()
                .filter(|t| a.leq(t.3, target))
                .collect();
            let value = a.lat().join_all(
                canonical
                    .iter()
                    .map(|&&(xx, s, yy, _)| lip(bim.right_act(xx, g[s]), yy)),
            );
            let mut running = a.bottom();
            let mut probe = a.bottom();
            for t in canonical.iter().rev() {
                if running == target {
                    break;
                }
                let next = a.join(running, t.3);
                if next != running {
                    probe = a.join(probe, lip(bim.right_act(t.0, g[t.1]), t.2));
                    running = next;
                }
            }
            if probe != value {
                return Err(TransportError::IllDefined {
                    element: target,
                    first: value,
                    second: probe,
                });
            }
            table.push(value);
        }
        Ok(table)
    };

    let mut gamma = Vec::with_capacity(cen_a.maps.len());
    for (i, f) in cen_a.maps.iter().enumerate() {
        let table = gamma_of(f)?;
        let index = cen_b
            .index_of(&table)
            .ok_or(TransportError::NotCentral { index: i })?;
        gamma.push(index);
    }
    let mut delta = Vec::with_capacity(cen_b.maps.len());
    for (j, g) in cen_b.maps.iter().enumerate() {
        let table = delta_of(g)?;
        let index = cen_a
            .index_of(&table)
            .ok_or(TransportError::NotCentral { index: j })?;
        delta.push(index);
    }

    // gamma and delta must be mutually inverse involutive-quantale isos
    for (i, &gi) in gamma.iter().enumerate() {
        if delta[gi] != i {
            return Err(TransportError::NotIso {
                law: "delta o gamma = id",
            });
        }
    }
    for (j, &dj) in delta.iter().enumerate() {
        if gamma[dj] != j {
            return Err(TransportError::NotIso {
                law: "gamma o delta = id",
            });
        }
    }
    let qa = &cen_a.quantale;
    let qb = &cen_b.quantale;
    for i in qa.elements() {
        if gamma[qa.star(i)] != qb.star(gamma[i]) {
            return Err(TransportError::NotIso { law: "star" });
        }
        for j in qa.elements() {
            if gamma[qa.join(i, j)] != qb.join(gamma[i], gamma[j]) {
                return Err(TransportError::NotIso { law: "join" });
            }
            if gamma[qa.mult(i, j)] != qb.mult(gamma[i], gamma[j]) {
                return Err(TransportError::NotIso { law: "mult" });
            }
        }
    }
    Ok(CenterTransport { gamma, delta })
}

/// For commutative `A` and `B`, restricts the center transport to the
/// quantales themselves (each embedded as multiplications), yielding a
/// verified involutive-quantale isomorphism table `A -> B`.
pub fn commutative_morita_iso(
    x: &ImprimitivityBimodule,
    cen_a: &Center,
    cen_b: &Center,
    transport: &CenterTransport,
) -> Result<Vec<usize>, TransportError> {
    let a = x.bimodule.left_quantale();
    let b = x.bimodule.right_quantale();
    assert!(a.is_commutative() && b.is_commutative());
    let mut iso = Vec::with_capacity(a.n());
    for c in a.elements() {
        let i = cen_a
            .index_of_multiplier(c)
            .ok_or(TransportError::NotCentral { index: c })?;
        let image = &cen_b.maps[transport.gamma[i]];
        // extract the unique q with q.(-) = image
        let q = b
            .elements()
            .find(|&q| b.elements().all(|y| b.mult(q, y) == image[y]))
            .ok_or(TransportError::NotIso {
                law: "image is a multiplication",
            })?;
        iso.push(q);
    }
    // verify the restriction is an involutive-quantale isomorphism
    let mut seen = iso.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != a.n() || a.n() != b.n() {
        return Err(TransportError::NotIso { law: "bijective" });
    }
    for p in a.elements() {
        if iso[a.star(p)] != b.star(iso[p]) {
            return Err(TransportError::NotIso { law: "star" });
        }
        for q in a.elements() {
            if iso[a.join(p, q)] != b.join(iso[p], iso[q]) {
                return Err(TransportError::NotIso { law: "join" });
            }
            if iso[a.mult(p, q)] != b.mult(iso[p], iso[q]) {
                return Err(TransportError::NotIso { law: "mult" });
            }
        }
    }
    Ok(iso)
}

#[cfg(test)]
mod tests {
    use super::super::{canonical_matrix_witness, verify_imprimitivity};
    use super::*;
    use crate::quantale::matrix_quantale;
    use crate::suplat::SupLattice;
    use crate::tensor::regular_bimodule;

    #[test]
    fn center_of_two_is_two() {
        let two = Arc::new(InvQuantale::two());
        let c = center(&two, &Budget::default()).unwrap();
        assert_eq!(c.quantale.n(), 2);
        assert!(crate::quantale::find_quantale_iso(&c.quantale, &two).is_some());
    }

    #[test]
    fn center_of_chain3_frame_is_chain3() {
        let chain3 = Arc::new(InvQuantale::frame(Arc::new(SupLattice::chain(3))));
        let c = center(&chain3, &Budget::default()).unwrap();
        assert_eq!(c.quantale.n(), 3);
        assert!(crate::quantale::find_quantale_iso(&c.quantale, &chain3).is_some());
    }

    #[test]
    fn center_of_matrix_quantale_is_two() {
        let two = Arc::new(InvQuantale::two());
        let m2 = matrix_quantale(&two, 2, &Budget::default()).unwrap();
        let c = center(&m2.quantale, &Budget::default()).unwrap();
        assert_eq!(c.quantale.n(), 2);
        assert!(crate::quantale::find_quantale_iso(&c.quantale, &two).is_some());
    }

    #[test]
    fn the_two_center_routes_coincide() {
        let budget = Budget::default();
        let two = Arc::new(InvQuantale::two());
        let chain3 = Arc::new(InvQuantale::frame(Arc::new(SupLattice::chain(3))));
        for q in [two, chain3] {
            let bimodule_route = center_bimodule_route(&q, &budget).unwrap();
            let adjointable_route = center_adjointable_route(&q, &budget).unwrap();
            assert_eq!(bimodule_route, adjointable_route);
            let fast = center(&q, &budget).unwrap();
            assert_eq!(fast.maps, bimodule_route);
        }
    }

    #[test]
    fn center_commutativity_is_exhaustive() {
        let two = Arc::new(InvQuantale::two());
        let m2 = matrix_quantale(&two, 2, &Budget::default()).unwrap();
        let c = center(&m2.quantale, &Budget::default()).unwrap();
        for i in 0..c.maps.len() {
            for j in 0..c.maps.len() {
                assert_eq!(c.quantale.mult(i, j), c.quantale.mult(j, i));
            }
        }
    }

    #[test]
    fn identity_transports_to_identity() {
        let two = Arc::new(InvQuantale::two());
        let budget = Budget::default();
        let x = verify_imprimitivity(&Arc::new(regular_bimodule(&two))).unwrap();
        let c = center(&two, &budget).unwrap();
        let transport = center_transport(&x, &c, &c).unwrap();
        assert_eq!(transport.gamma[c.identity_index()], c.identity_index());
    }

    #[test]
    fn transport_along_matrix_witness_round_trips() {
        let two = Arc::new(InvQuantale::two());
        let budget = Budget::default();
        let w = canonical_matrix_witness(&two, 2, &budget).unwrap();
        let cen_m = center(&w.matrix.quantale, &budget).unwrap();
        let cen_2 = center(&two, &budget).unwrap();
        let transport = center_transport(&w.witness.x, &cen_m, &cen_2).unwrap();
        for i in 0..cen_m.maps.len() {
            assert_eq!(transport.delta[transport.gamma[i]], i);
        }
    }
}
