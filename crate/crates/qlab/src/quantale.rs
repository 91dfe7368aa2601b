//! Involutive quantales: validation, residuation, classification and the
//! standard constructions (matrix quantales, endomorphism quantales,
//! opposites), plus isomorphism search.
//!
//! A quantale is a sup-lattice with an associative multiplication that
//! distributes over arbitrary joins in both arguments; in the finite case
//! binary distribution plus annihilation of bottom suffices. An involution
//! is a join-preserving unary operation with `a** = a` and
//! `(a.b)* = b*.a*`.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::budget::{checked_pow, Budget, BudgetExceeded};
use crate::suplat::{
    enumerate_join_maps, Duality, IsoSpec, LatticeInvolution, SupLattice, TupleCodec,
};

/// A violated quantale law with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantaleViolation {
    #[error("multiplication not associative at ({a},{b},{c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("bottom not absorbed: {a} . 0 or 0 . {a} is nonzero")]
    BottomNotAbsorbed { a: usize },
    #[error("multiplication does not distribute over join at ({a},{b},{c})")]
    NotDistributive { a: usize, b: usize, c: usize },
    #[error("involution law (a.b)* = b*.a* fails at ({a},{b})")]
    StarAntihomomorphism { a: usize, b: usize },
    #[error("involution invalid: {0}")]
    StarInvalid(String),
    #[error("claimed unit {e} fails e.a = a = a.e at {a}")]
    UnitLawFails { e: usize, a: usize },
    #[error("table has wrong size or entry out of range")]
    Malformed,
}

/// m-regularity sub-report: the two halves and their witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    pub separated: bool,
    /// Pair of distinct elements with identical left-multiplication rows.
    pub separation_witness: Option<(usize, usize)>,
    pub essential: bool,
    /// Element that is not a join of products.
    pub essential_witness: Option<usize>,
}

impl RegularityReport {
    pub fn m_regular(&self) -> bool {
        self.separated && self.essential
    }
}

/// Classification flags for a validated quantale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantaleReport {
    pub unit: Option<usize>,
    pub commutative: bool,
    pub regularity: RegularityReport,
}

impl QuantaleReport {
    pub fn m_regular(&self) -> bool {
        self.regularity.m_regular()
    }
}

/// A finite involutive quantale over a validated sup-lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvQuantale {
    lat: Arc<SupLattice>,
    mult: Vec<usize>,
    star: LatticeInvolution,
    report: QuantaleReport,
}

impl InvQuantale {
    /// Validates multiplication, involution and (when given or found) the
    /// unit, and derives the classification flags.
    ///
    /// When `unit` is `None`, a two-sided unit is searched for; a unit that
    /// exists is always recorded whether or not it was declared.
    pub fn validate(
        lat: Arc<SupLattice>,
        mult: Vec<usize>,
        star: Vec<usize>,
        unit: Option<usize>,
    ) -> Result<InvQuantale, Vec<QuantaleViolation>> {
        let n = lat.n();
        let mut errors = Vec::new();
        if mult.len() != n * n || mult.iter().any(|&x| x >= n) || star.len() != n {
            return Err(vec![QuantaleViolation::Malformed]);
        }
        let m = |a: usize, b: usize| mult[a * n + b];

        'assoc: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        errors.push(QuantaleViolation::NonAssociative { a, b, c });
                        break 'assoc;
                    }
                }
            }
        }
        let zero = lat.bottom();
        for a in 0..n {
            if m(a, zero) != zero || m(zero, a) != zero {
                errors.push(QuantaleViolation::BottomNotAbsorbed { a });
                break;
            }
        }
        'dist: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab = lat.join(a, b);
                    if m(c, ab) != lat.join(m(c, a), m(c, b))
                        || m(ab, c) != lat.join(m(a, c), m(b, c))
                    {
                        errors.push(QuantaleViolation::NotDistributive { a, b, c });
                        break 'dist;
                    }
                }
            }
        }
        let star = match LatticeInvolution::validate(&lat, star) {
            Ok(star) => Some(star),
            Err(errs) => {
                for e in errs {
                    errors.push(QuantaleViolation::StarInvalid(e.to_string()));
                }
                None
            }
        };
        if let Some(star) = &star {
            'anti: for a in 0..n {
                for b in 0..n {
                    if star.apply(m(a, b)) != m(star.apply(b), star.apply(a)) {
                        errors.push(QuantaleViolation::StarAntihomomorphism { a, b });
                        break 'anti;
                    }
                }
            }
        }
        let found_unit = (0..n).find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a));
        if let Some(e) = unit {
            if found_unit != Some(e) {
                let witness = (0..n).find(|&a| m(e, a) != a || m(a, e) != a).unwrap_or(e);
                errors.push(QuantaleViolation::UnitLawFails { e, a: witness });
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        let star = star.expect("checked above");

        let commutative = (0..n).all(|a| (a..n).all(|b| m(a, b) == m(b, a)));
        let regularity = regularity(&lat, &mult);
        Ok(InvQuantale {
            lat,
            mult,
            star,
            report: QuantaleReport {
                unit: found_unit,
                commutative,
                regularity,
            },
        })
    }

    /// The 2-element Boolean algebra with meet as multiplication.
    pub fn two() -> InvQuantale {
        let lat = Arc::new(SupLattice::chain(2));
        InvQuantale::validate(lat, vec![0, 0, 0, 1], vec![0, 1], Some(1))
            .expect("2 is an involutive quantale")
    }

    /// A frame on the given lattice: meet as multiplication, identity star.
    ///
    /// The lattice must be distributive (meets distribute over joins);
    /// otherwise meet-multiplication is not a quantale and this panics.
    pub fn frame(lat: Arc<SupLattice>) -> InvQuantale {
        let n = lat.n();
        let mut mult = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mult[a * n + b] = lat.meet(a, b);
            }
        }
        let star = lat.elements().collect();
        let top = lat.top();
        InvQuantale::validate(lat, mult, star, Some(top)).expect("frames are quantales")
    }

    pub fn lat(&self) -> &Arc<SupLattice> {
        &self.lat
    }

    pub fn n(&self) -> usize {
        self.lat.n()
    }

    pub fn mult(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.lat.n() + b]
    }

    pub fn star(&self, a: usize) -> usize {
        self.star.apply(a)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.lat.join(a, b)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.lat.leq(a, b)
    }

    pub fn bottom(&self) -> usize {
        self.lat.bottom()
    }

    pub fn top(&self) -> usize {
        self.lat.top()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        self.lat.elements()
    }

    pub fn unit(&self) -> Option<usize> {
        self.report.unit
    }

    pub fn is_unital(&self) -> bool {
        self.report.unit.is_some()
    }

    pub fn is_commutative(&self) -> bool {
        self.report.commutative
    }

    pub fn is_m_regular(&self) -> bool {
        self.report.m_regular()
    }

    pub fn report(&self) -> &QuantaleReport {
        &self.report
    }

    pub fn mult_table(&self) -> &[usize] {
        &self.mult
    }

    pub fn star_table(&self) -> &[usize] {
        &self.star.values
    }

    /// Right residuation `a ->_r c = v{ s | a.s <= c }`.
    pub fn residuate_right(&self, a: usize, c: usize) -> usize {
        self.lat
            .join_all(self.elements().filter(|&s| self.leq(self.mult(a, s), c)))
    }

    /// Left residuation `b ->_l d = v{ t | t.b <= d }`.
    pub fn residuate_left(&self, b: usize, d: usize) -> usize {
        self.lat
            .join_all(self.elements().filter(|&t| self.leq(self.mult(t, b), d)))
    }

    /// The opposite quantale: same lattice and involution, `a o b = b.a`.
    pub fn opposite(&self) -> InvQuantale {
        let n = self.n();
        let mut mult = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mult[a * n + b] = self.mult(b, a);
            }
        }
        InvQuantale::validate(
            self.lat.clone(),
            mult,
            self.star.values.clone(),
            self.report.unit,
        )
        .expect("the opposite of a quantale is a quantale")
    }
}

/// Separation and essentiality for a quantale viewed as a module over itself.
fn regularity(lat: &SupLattice, mult: &[usize]) -> RegularityReport {
    let n = lat.n();
    let mut separation_witness = None;
    'sep: for a in 0..n {
        for b in (a + 1)..n {
            if (0..n).all(|x| mult[a * n + x] == mult[b * n + x]) {
                separation_witness = Some((a, b));
                break 'sep;
            }
        }
    }
    // a is a join of products iff it equals the join of all products below it
    let mut product_below = vec![lat.bottom(); n];
    for b in 0..n {
        for c in 0..n {
            let p = mult[b * n + c];
            for (a, slot) in product_below.iter_mut().enumerate() {
                if lat.leq(p, a) {
                    *slot = lat.join(*slot, p);
                }
            }
        }
    }
    let essential_witness = (0..n).find(|&a| product_below[a] != a);
    RegularityReport {
        separated: separation_witness.is_none(),
        separation_witness,
        essential: essential_witness.is_none(),
        essential_witness,
    }
}

/// A matrix quantale `M^k(A)` together with the codec mapping element
/// indices to `k x k` entry tables (row-major, base `|A|`).
#[derive(Debug, Clone)]
pub struct MatrixQuantale {
    pub quantale: Arc<InvQuantale>,
    pub codec: TupleCodec,
    pub k: usize,
}

impl MatrixQuantale {
    /// Element with `a` at entry `(i,j)` and bottom elsewhere.
    pub fn unit_matrix(&self, i: usize, j: usize, a: usize) -> usize {
        let mut entries = vec![0; self.k * self.k];
        entries[i * self.k + j] = a;
        self.codec.encode(&entries)
    }

    pub fn entry(&self, code: usize, i: usize, j: usize) -> usize {
        self.codec.component(code, i * self.k + j)
    }
}

/// Builds the quantale of `k x k` matrices over `base`: join entrywise,
/// `(X.Y)_il = v_j X_ij . Y_jl`, involution the star-transpose, unit the
/// diagonal of base units when `base` is unital.
pub fn matrix_quantale(
    base: &InvQuantale,
    k: usize,
    budget: &Budget,
) -> Result<MatrixQuantale, BudgetExceeded> {
    assert!(k >= 1);
    let size = checked_pow(base.n(), k * k).ok_or_else(|| BudgetExceeded {
        what: format!("matrix quantale M^{k}(A)"),
        needed: u64::MAX,
        allowed: budget.max_carrier as u64,
    })?;
    budget.admit_carrier(size as usize, &format!("matrix quantale M^{k}(A)"))?;
    let n = size as usize;
    let codec = TupleCodec::new(vec![base.n(); k * k]);

    let mut join = vec![0; n * n];
    let mut mult = vec![0; n * n];
    let mut star = vec![0; n];
    let mut xa = vec![0; k * k];
    let mut xb = vec![0; k * k];
    let mut out = vec![0; k * k];
    for a in 0..n {
        codec.decode_into(a, &mut xa);
        for i in 0..k {
            for j in 0..k {
                out[j * k + i] = base.star(xa[i * k + j]);
            }
        }
        star[a] = codec.encode(&out);
        for b in 0..n {
            codec.decode_into(b, &mut xb);
            for i in 0..k * k {
                out[i] = base.join(xa[i], xb[i]);
            }
            join[a * n + b] = codec.encode(&out);
            for i in 0..k {
                for l in 0..k {
                    out[i * k + l] = base
                        .lat()
                        .join_all((0..k).map(|j| base.mult(xa[i * k + j], xb[j * k + l])));
                }
            }
            mult[a * n + b] = codec.encode(&out);
        }
    }
    let unit = base.unit().map(|e| {
        let mut entries = vec![0; k * k];
        for i in 0..k {
            entries[i * k + i] = e;
        }
        codec.encode(&entries)
    });
    let lat = Arc::new(SupLattice::validate(n, join).expect("entrywise join table"));
    let quantale = InvQuantale::validate(lat, mult, star, unit)
        .expect("matrix construction satisfies the quantale laws");
    Ok(MatrixQuantale {
        quantale: Arc::new(quantale),
        codec,
        k,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndoError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("a duality on the base lattice is required for the involution")]
    MissingDuality,
}

/// The endomorphism quantale `Q(S)` of a sup-lattice together with its
/// sub-quantale `Q0(S)` generated by the right-sided elements.
///
/// Elements are the join-preserving maps `S -> S`; multiplication is
/// composition `(f.g)(x) = f(g(x))`, so the identity map is the unit. The
/// involution conjugates the right adjoint by the duality.
#[derive(Debug, Clone)]
pub struct EndoQuantales {
    pub full: Arc<InvQuantale>,
    /// Map tables of the elements of `Q(S)`, indexed by quantale element.
    pub maps: Vec<Vec<usize>>,
    /// Right-sided elements `q` (those with `q . top <= q`) of `Q(S)`.
    pub right_sided: Vec<usize>,
    /// The sub-quantale generated by the right-sided elements.
    pub sub: Arc<InvQuantale>,
    /// Embedding of `Q0(S)` element indices into `Q(S)` element indices.
    pub sub_embedding: Vec<usize>,
}

/// Builds `Q(S)` and `Q0(S)`.
///
/// "Right-sided" is read as the standard `q . 1 <= q` with `1` the top
/// element of `Q(S)` (the map sending every nonzero element to the top of
/// `S`); no alternative readings are attempted.
pub fn endo_quantales(
    s: &SupLattice,
    duality: Option<&Duality>,
    budget: &Budget,
) -> Result<EndoQuantales, EndoError> {
    let duality = duality.ok_or(EndoError::MissingDuality)?;
    let mut maps = enumerate_join_maps(s, s, budget)?;
    maps.sort();
    budget.admit_carrier(maps.len(), "endomorphism quantale Q(S)")?;
    let n = maps.len();
    let index: HashMap<&[usize], usize> = maps
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_slice(), i))
        .collect();
    let lookup = |table: &[usize]| -> usize {
        *index
            .get(table)
            .expect("Q(S) is closed under join, composition and star")
    };

    let mut join = vec![0; n * n];
    let mut mult = vec![0; n * n];
    let mut star = vec![0; n];
    for a in 0..n {
        // f* = d o g o d with g the right adjoint of f
        let adjoint: Vec<usize> = s
            .elements()
            .map(|t| s.join_all(s.elements().filter(|&x| s.leq(maps[a][x], t))))
            .collect();
        let conj: Vec<usize> = s
            .elements()
            .map(|x| duality.apply(adjoint[duality.apply(x)]))
            .collect();
        star[a] = lookup(&conj);
        for b in 0..n {
            let joined: Vec<usize> = s
                .elements()
                .map(|x| s.join(maps[a][x], maps[b][x]))
                .collect();
            join[a * n + b] = lookup(&joined);
            let composed: Vec<usize> = s.elements().map(|x| maps[a][maps[b][x]]).collect();
            mult[a * n + b] = lookup(&composed);
        }
    }
    let lat = Arc::new(SupLattice::validate(n, join).expect("pointwise join table"));
    let full = InvQuantale::validate(lat.clone(), mult, star, None)
        .map(Arc::new)
        .expect("Q(S) is an involutive quantale");

    let top_q = lat.top();
    let right_sided: Vec<usize> = (0..n)
        .filter(|&q| lat.leq(full.mult(q, top_q), q))
        .collect();

    // close the right-sided elements under join, composition and star
    let mut in_sub = vec![false; n];
    in_sub[lat.bottom()] = true;
    for &q in &right_sided {
        in_sub[q] = true;
    }
    loop {
        let members: Vec<usize> = (0..n).filter(|&i| in_sub[i]).collect();
        let mut grew = false;
        for &a in &members {
            if !in_sub[full.star(a)] {
                in_sub[full.star(a)] = true;
                grew = true;
            }
            for &b in &members {
                for x in [full.mult(a, b), lat.join(a, b)] {
                    if !in_sub[x] {
                        in_sub[x] = true;
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    let sub_elems: Vec<usize> = (0..n).filter(|&i| in_sub[i]).collect();
    let (sub_lat, embedding) = lat.from_closed_subset(&sub_elems);
    let m = sub_lat.n();
    let back: HashMap<usize, usize> = embedding.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut sub_mult = vec![0; m * m];
    let mut sub_star = vec![0; m];
    for i in 0..m {
        sub_star[i] = back[&full.star(embedding[i])];
        for j in 0..m {
            sub_mult[i * m + j] = back[&full.mult(embedding[i], embedding[j])];
        }
    }
    let sub = InvQuantale::validate(Arc::new(sub_lat), sub_mult, sub_star, None)
        .map(Arc::new)
        .expect("Q0(S) is an involutive subquantale");
    Ok(EndoQuantales {
        full,
        maps,
        right_sided,
        sub,
        sub_embedding: embedding,
    })
}

/// Searches for an involutive-quantale isomorphism (a bijection preserving
/// joins, multiplication and star); `None` means exhaustion.
pub fn find_quantale_iso(a: &InvQuantale, b: &InvQuantale) -> Option<Vec<usize>> {
    if a.n() != b.n()
        || a.is_unital() != b.is_unital()
        || a.is_commutative() != b.is_commutative()
    {
        return None;
    }
    let spec = IsoSpec {
        n: a.n(),
        inner_binary: vec![
            (join_table(a), join_table(b)),
            (a.mult.clone(), b.mult.clone()),
        ],
        inner_unary: vec![(a.star.values.clone(), b.star.values.clone())],
        ..Default::default()
    };
    spec.search()
}

fn join_table(q: &InvQuantale) -> Vec<usize> {
    let n = q.n();
    let mut t = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            t[a * n + b] = q.join(a, b);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Arc<SupLattice> {
        Arc::new(
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
        )
    }

    #[test]
    fn two_is_unital_commutative_m_regular() {
        let two = InvQuantale::two();
        assert_eq!(two.unit(), Some(1));
        assert!(two.is_commutative());
        assert!(two.is_m_regular());
    }

    #[test]
    fn matrix_two_by_two_has_sixteen_elements() {
        let two = InvQuantale::two();
        let m2 = matrix_quantale(&two, 2, &Budget::default()).unwrap();
        assert_eq!(m2.quantale.n(), 16);
        assert!(m2.quantale.is_unital());
        assert!(m2.quantale.is_m_regular());
        // non-commutativity witness: E00 . E01 != E01 . E00
        let e00 = m2.unit_matrix(0, 0, 1);
        let e01 = m2.unit_matrix(0, 1, 1);
        assert_ne!(m2.quantale.mult(e00, e01), m2.quantale.mult(e01, e00));
        assert!(!m2.quantale.is_commutative());
        // involution of E01 is E10 (star-transpose, star = id on 2)
        assert_eq!(m2.quantale.star(e01), m2.unit_matrix(1, 0, 1));
    }

    #[test]
    fn matrix_one_by_one_is_the_base() {
        let two = InvQuantale::two();
        let m1 = matrix_quantale(&two, 1, &Budget::default()).unwrap();
        let iso = find_quantale_iso(&m1.quantale, &two).unwrap();
        assert_eq!(iso, vec![0, 1]);
    }

    #[test]
    fn perturbed_chain_multiplication_is_decided_by_scan() {
        // 3-chain with mult(m,m) raised to top, meet elsewhere
        let lat = Arc::new(SupLattice::chain(3));
        let mut mult = vec![0; 9];
        for a in 0..3 {
            for b in 0..3 {
                mult[a * 3 + b] = a.min(b);
            }
        }
        mult[4] = 2; // m.m = top
        let result = InvQuantale::validate(lat, mult, vec![0, 1, 2], None);
        // the triple/pair scan decides: associativity survives here but
        // m.(m v top) = m while (m.m) v (m.top) = top
        let errors = result.expect_err("m.m = top breaks distributivity");
        assert!(errors
            .iter()
            .any(|e| matches!(e, QuantaleViolation::NotDistributive { .. })));
    }

    #[test]
    fn residuation_galois_laws_on_frames() {
        let two = InvQuantale::two();
        assert_eq!(two.residuate_right(0, 0), 1);
        let chain3 = InvQuantale::frame(Arc::new(SupLattice::chain(3)));
        assert_eq!(chain3.residuate_right(1, 0), 0);
        assert_eq!(chain3.residuate_right(2, 1), 1); // Heyting implication
        for q in [&two, &chain3] {
            for a in q.elements() {
                for c in q.elements() {
                    let r = q.residuate_right(a, c);
                    let l = q.residuate_left(a, c);
                    for s in q.elements() {
                        assert_eq!(q.leq(q.mult(a, s), c), q.leq(s, r));
                        assert_eq!(q.leq(q.mult(s, a), c), q.leq(s, l));
                    }
                }
            }
        }
    }

    #[test]
    fn opposite_is_involutive_on_tables() {
        let two = InvQuantale::two();
        assert_eq!(two.opposite(), two);
        let m2 = matrix_quantale(&two, 2, &Budget::default()).unwrap();
        let op = m2.quantale.opposite();
        assert_ne!(op.mult_table(), m2.quantale.mult_table());
        assert_eq!(op.opposite(), *m2.quantale);
        // isomorphic via transpose
        assert!(find_quantale_iso(&op, &m2.quantale).is_some());
    }

    #[test]
    fn endo_quantale_of_two() {
        let two_lat = SupLattice::chain(2);
        let duality = Duality::validate(&two_lat, vec![1, 0]).unwrap();
        let endo = endo_quantales(&two_lat, Some(&duality), &Budget::default()).unwrap();
        assert_eq!(endo.full.n(), 2); // const-0 and id
        assert_eq!(endo.sub.n(), 2);
        assert!(endo.full.is_unital());
    }

    #[test]
    fn top_map_is_right_sided() {
        let d = diamond();
        let duality = Duality::validate(&d, vec![3, 2, 1, 0]).unwrap();
        let endo = endo_quantales(&d, Some(&duality), &Budget::default()).unwrap();
        let top = endo.full.top();
        assert!(endo.right_sided.contains(&top));
    }

    #[test]
    fn missing_duality_is_reported() {
        let d = diamond();
        match endo_quantales(&d, None, &Budget::default()) {
            Err(EndoError::MissingDuality) => {}
            other => panic!("expected MissingDuality, got {other:?}"),
        }
    }

    #[test]
    fn iso_search_refutes_on_size() {
        let two = InvQuantale::two();
        let chain3 = InvQuantale::frame(Arc::new(SupLattice::chain(3)));
        assert!(find_quantale_iso(&two, &chain3).is_none());
        assert_eq!(find_quantale_iso(&two, &two).unwrap(), vec![0, 1]);
    }

    #[test]
    fn matrix_quantales_validate_within_budget() {
        let budget = Budget::default();
        let two = InvQuantale::two();
        let chain3 = InvQuantale::frame(Arc::new(SupLattice::chain(3)));
        // the constructors run the full validator internally
        assert_eq!(matrix_quantale(&two, 2, &budget).unwrap().quantale.n(), 16);
        assert_eq!(matrix_quantale(&two, 3, &budget).unwrap().quantale.n(), 512);
        assert_eq!(matrix_quantale(&chain3, 2, &budget).unwrap().quantale.n(), 81);
        // 16^(2*2) carriers blow the default carrier budget
        let m2 = matrix_quantale(&two, 2, &budget).unwrap();
        assert!(matrix_quantale(&m2.quantale, 2, &budget).is_err());
    }

    #[test]
    fn right_sided_elements_and_their_stars_generate_q0() {
        let d = diamond();
        let duality = Duality::validate(&d, vec![3, 2, 1, 0]).unwrap();
        let endo = endo_quantales(&d, Some(&duality), &Budget::default()).unwrap();
        let q0 = &endo.sub;
        // generators: right-sided elements and their stars, inside Q0
        let back: std::collections::HashMap<usize, usize> = endo
            .sub_embedding
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect();
        let mut generators: Vec<usize> = endo.right_sided.iter().map(|q| back[q]).collect();
        generators.extend(generators.clone().iter().map(|&g| q0.star(g)));
        // join-closure of length-<=2 products of the generators is all of Q0
        let mut products: Vec<usize> = generators.clone();
        for &a in &generators {
            for &b in &generators {
                products.push(q0.mult(a, b));
            }
        }
        for x in q0.elements() {
            let join = q0
                .lat()
                .join_all(products.iter().copied().filter(|&p| q0.leq(p, x)));
            assert_eq!(join, x, "element {x} is not a join of generator products");
        }
    }

    #[test]
    fn essentiality_equals_join_of_products_below() {
        // m-regular: every a is the join of products b.c below it
        for q in [
            InvQuantale::two(),
            InvQuantale::frame(Arc::new(SupLattice::chain(3))),
        ] {
            assert!(q.is_m_regular());
            for a in q.elements() {
                let join = q.lat().join_all(
                    q.elements()
                        .flat_map(|b| q.elements().map(move |c| (b, c)))
                        .map(|(b, c)| q.mult(b, c))
                        .filter(|&p| q.leq(p, a)),
                );
                assert_eq!(join, a);
            }
        }
    }
}
