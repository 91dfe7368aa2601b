//! Finite sup-lattice kernel.
//!
//! A finite join-semilattice with a bottom element has all joins, so it is a
//! complete lattice; everything here works with that finite picture. Elements
//! are dense indices `0..n`, the join table is the single source of truth and
//! the order is derived from it (`a <= b` iff `a v b = b`).
//!
//! A map between finite lattices preserves arbitrary joins as soon as it
//! preserves binary joins and bottom: any join is a fold of binary joins over
//! the empty join. We take binary-join + bottom preservation as the working
//! definition of join-preserving throughout.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::budget::{checked_pow, Budget, BudgetExceeded};

/// A violated sup-lattice law together with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeViolation {
    #[error("empty carrier")]
    Empty,
    #[error("join table entry ({a},{b}) out of range")]
    OutOfRange { a: usize, b: usize },
    #[error("join not idempotent at {a}")]
    NotIdempotent { a: usize },
    #[error("join not commutative at ({a},{b})")]
    NotCommutative { a: usize, b: usize },
    #[error("join not associative at ({a},{b},{c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("no bottom element (no neutral element for join)")]
    NoBottom,
}

/// A finite sup-lattice: carrier `0..n` with a validated join table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupLattice {
    n: usize,
    join: Vec<usize>,
    leq: Vec<bool>,
    bottom: usize,
    top: usize,
    irreducibles: Vec<usize>,
}

impl SupLattice {
    /// Validates a join table and derives order, bottom, top and the
    /// join-irreducibles. Returns every violated law, each with a witness.
    pub fn validate(n: usize, join: Vec<usize>) -> Result<SupLattice, Vec<LatticeViolation>> {
        let mut errors = Vec::new();
        if n == 0 {
            return Err(vec![LatticeViolation::Empty]);
        }
        if join.len() != n * n {
            return Err(vec![LatticeViolation::OutOfRange { a: n, b: n }]);
        }
        for a in 0..n {
            for b in 0..n {
                if join[a * n + b] >= n {
                    errors.push(LatticeViolation::OutOfRange { a, b });
                }
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        for a in 0..n {
            if join[a * n + a] != a {
                errors.push(LatticeViolation::NotIdempotent { a });
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if join[a * n + b] != join[b * n + a] {
                    errors.push(LatticeViolation::NotCommutative { a, b });
                }
            }
        }
        'assoc: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = join[join[a * n + b] * n + c];
                    let right = join[a * n + join[b * n + c]];
                    if left != right {
                        errors.push(LatticeViolation::NonAssociative { a, b, c });
                        break 'assoc;
                    }
                }
            }
        }
        let bottom = (0..n).find(|&b| (0..n).all(|x| join[b * n + x] == x));
        let Some(bottom) = bottom else {
            errors.push(LatticeViolation::NoBottom);
            return Err(errors);
        };
        if !errors.is_empty() {
            return Err(errors);
        }

        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = join[a * n + b] == b;
            }
        }
        let mut top = 0;
        for x in 1..n {
            top = join[top * n + x];
        }
        // j is join-irreducible when it differs from the join of everything
        // strictly below it; bottom (the empty join) never qualifies.
        let mut irreducibles = Vec::new();
        for j in 0..n {
            if j == bottom {
                continue;
            }
            let mut below = bottom;
            for x in 0..n {
                if x != j && leq[x * n + j] {
                    below = join[below * n + x];
                }
            }
            if below != j {
                irreducibles.push(j);
            }
        }
        Ok(SupLattice {
            n,
            join,
            leq,
            bottom,
            top,
            irreducibles,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Join of an arbitrary (possibly empty) family.
    pub fn join_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items
            .into_iter()
            .fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Greatest lower bound, derived as the join of all common lower bounds.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.join_all(self.elements().filter(|&c| self.leq(c, a) && self.leq(c, b)))
    }

    pub fn join_irreducibles(&self) -> &[usize] {
        &self.irreducibles
    }

    pub fn downset_size(&self, a: usize) -> usize {
        self.elements().filter(|&x| self.leq(x, a)).count()
    }

    /// The n-element chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> SupLattice {
        assert!(n >= 1);
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                join[a * n + b] = a.max(b);
            }
        }
        SupLattice::validate(n, join).expect("chain join table is a lattice")
    }

    /// The powerset of `k` generators, elements encoded as bitmasks.
    pub fn powerset(k: usize) -> SupLattice {
        let n = 1usize << k;
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                join[a * n + b] = a | b;
            }
        }
        SupLattice::validate(n, join).expect("powerset join table is a lattice")
    }

    /// Product of lattices; elements are mixed-radix tuples via the codec.
    pub fn product(factors: &[&SupLattice]) -> (SupLattice, TupleCodec) {
        let codec = TupleCodec::new(factors.iter().map(|f| f.n()).collect());
        let n = codec.len();
        let mut join = vec![0; n * n];
        let mut buf_a = vec![0; factors.len()];
        let mut buf_b = vec![0; factors.len()];
        for a in 0..n {
            codec.decode_into(a, &mut buf_a);
            for b in 0..n {
                codec.decode_into(b, &mut buf_b);
                let joined: Vec<usize> = factors
                    .iter()
                    .zip(buf_a.iter().zip(buf_b.iter()))
                    .map(|(f, (&x, &y))| f.join(x, y))
                    .collect();
                join[a * n + b] = codec.encode(&joined);
            }
        }
        let lat = SupLattice::validate(n, join).expect("product of lattices is a lattice");
        (lat, codec)
    }

    /// Sub-lattice on a join-closed subset containing bottom.
    ///
    /// Returns the new lattice together with the embedding (new index ->
    /// parent index). Panics if the subset is not join-closed.
    pub fn from_closed_subset(&self, subset: &[usize]) -> (SupLattice, Vec<usize>) {
        let mut elems: Vec<usize> = subset.to_vec();
        elems.sort_unstable();
        elems.dedup();
        assert!(
            elems.contains(&self.bottom),
            "closed subset must contain bottom"
        );
        let index_of: HashMap<usize, usize> =
            elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let m = elems.len();
        let mut join = vec![0; m * m];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                let ab = self.join(a, b);
                let Some(&k) = index_of.get(&ab) else {
                    panic!("subset not join-closed: {} v {} = {} escapes", a, b, ab);
                };
                join[i * m + j] = k;
            }
        }
        let lat = SupLattice::validate(m, join).expect("closed subset is a lattice");
        (lat, elems)
    }

    /// Canonical form: the lexicographically least flattened join table over
    /// all relabelings. Two lattices are isomorphic iff their canonical forms
    /// coincide. Intended for small carriers (isomorph rejection in searches).
    pub fn canonical_join_table(&self) -> Vec<usize> {
        let n = self.n;
        let mut best: Option<Vec<usize>> = None;
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let mut table = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    table[perm[a] * n + perm[b]] = perm[self.join(a, b)];
                }
            }
            if best.as_ref().is_none_or(|b| table < *b) {
                best = Some(table);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best.expect("at least the identity relabeling exists")
    }
}

/// Advances to the next permutation in lexicographic order.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Mixed-radix codec for tuples; used by products, powers and matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleCodec {
    dims: Vec<usize>,
    len: usize,
}

impl TupleCodec {
    pub fn new(dims: Vec<usize>) -> TupleCodec {
        let len = dims.iter().product::<usize>().max(1);
        TupleCodec { dims, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.dims.len());
        let mut code = 0;
        for (&x, &d) in tuple.iter().zip(&self.dims) {
            debug_assert!(x < d);
            code = code * d + x;
        }
        code
    }

    pub fn decode(&self, code: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        self.decode_into(code, &mut out);
        out
    }

    pub fn decode_into(&self, mut code: usize, out: &mut [usize]) {
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = code % d;
            code /= d;
        }
    }

    /// Component of an encoded tuple.
    pub fn component(&self, code: usize, index: usize) -> usize {
        let mut code = code;
        for i in (index + 1..self.dims.len()).rev() {
            code /= self.dims[i];
        }
        code % self.dims[index]
    }
}

/// Errors raised by map-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map does not preserve joins at ({a},{b})")]
    NotJoinPreserving { a: usize, b: usize },
    #[error("map does not preserve bottom")]
    BottomNotPreserved,
}

/// A join-preserving map between sup-lattices, stored as a value table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMap {
    pub source: Arc<SupLattice>,
    pub target: Arc<SupLattice>,
    pub values: Vec<usize>,
}

impl LatticeMap {
    /// Wraps a value table after checking join preservation.
    pub fn new(
        source: Arc<SupLattice>,
        target: Arc<SupLattice>,
        values: Vec<usize>,
    ) -> Result<LatticeMap, MapError> {
        check_join_preserving(&source, &target, &values)?;
        Ok(LatticeMap {
            source,
            target,
            values,
        })
    }

    pub fn identity(lat: Arc<SupLattice>) -> LatticeMap {
        let values = (0..lat.n()).collect();
        LatticeMap {
            source: lat.clone(),
            target: lat,
            values,
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// Right adjoint `g(t) = v{ s | f(s) <= t }`; satisfies
    /// `f(s) <= t  iff  s <= g(t)` for every `s`, `t`.
    pub fn right_adjoint(&self) -> LatticeMap {
        let values = (0..self.target.n())
            .map(|t| {
                self.source.join_all(
                    self.source
                        .elements()
                        .filter(|&s| self.target.leq(self.values[s], t)),
                )
            })
            .collect();
        LatticeMap {
            source: self.target.clone(),
            target: self.source.clone(),
            values,
        }
    }

    /// Left adjoint of a meet-preserving map, `f(s) = meet{ t | s <= g(t) }`
    /// recomputed through joins: the least `t` with `s <= g(t)`.
    pub fn left_adjoint_of(&self) -> LatticeMap {
        let values = (0..self.target.n())
            .map(|s| {
                self.source.meet_all(
                    self.source
                        .elements()
                        .filter(|&t| self.target.leq(s, self.values[t])),
                )
            })
            .collect();
        LatticeMap {
            source: self.target.clone(),
            target: self.source.clone(),
            values,
        }
    }
}

impl SupLattice {
    /// Meet of a family, derived from joins; the empty meet is top.
    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        let mut bounded: Option<usize> = None;
        for x in items {
            bounded = Some(match bounded {
                None => x,
                Some(acc) => self.meet(acc, x),
            });
        }
        bounded.unwrap_or(self.top)
    }
}

/// Checks binary-join + bottom preservation for a raw value table.
pub fn check_join_preserving(
    source: &SupLattice,
    target: &SupLattice,
    values: &[usize],
) -> Result<(), MapError> {
    if values[source.bottom()] != target.bottom() {
        return Err(MapError::BottomNotPreserved);
    }
    for a in source.elements() {
        for b in source.elements() {
            if values[source.join(a, b)] != target.join(values[a], values[b]) {
                return Err(MapError::NotJoinPreserving { a, b });
            }
        }
    }
    Ok(())
}

/// Enumerates all join-preserving maps from `source` to `target` in a
/// deterministic order: maps are generated by assigning values on the
/// join-irreducibles of `source` (lexicographically, in irreducible order)
/// and extending by joins; assignments whose extension fails binary-join
/// preservation are skipped.
pub fn enumerate_join_maps(
    source: &SupLattice,
    target: &SupLattice,
    budget: &Budget,
) -> Result<Vec<Vec<usize>>, BudgetExceeded> {
    let irr = source.join_irreducibles();
    let candidates =
        checked_pow(target.n(), irr.len()).ok_or_else(|| BudgetExceeded {
            what: "join-map enumeration".into(),
            needed: u64::MAX,
            allowed: budget.max_scan,
        })?;
    budget.admit_scan(candidates, "join-map enumeration")?;

    let mut out = Vec::new();
    let mut assignment = vec![0usize; irr.len()];
    loop {
        // Monotone assignments on irreducibles are exactly the restrictions
        // of join-preserving maps, so each surviving assignment yields a
        // distinct map.
        let monotone = (0..irr.len()).all(|i| {
            (0..irr.len()).all(|j| {
                !source.leq(irr[i], irr[j]) || target.leq(assignment[i], assignment[j])
            })
        });
        if monotone {
            let values: Vec<usize> = source
                .elements()
                .map(|s| {
                    target.join_all(
                        irr.iter()
                            .zip(&assignment)
                            .filter(|(&j, _)| source.leq(j, s))
                            .map(|(_, &v)| v),
                    )
                })
                .collect();
            if check_join_preserving(source, target, &values).is_ok() {
                out.push(values);
            }
        }
        // next assignment, lexicographic with the last irreducible fastest
        let mut i = irr.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            assignment[i] += 1;
            if assignment[i] < target.n() {
                break;
            }
            assignment[i] = 0;
        }
    }
}

/// Brute-force cross-check: filters all `|T|^|S|` raw value tables.
pub fn enumerate_join_maps_raw(
    source: &SupLattice,
    target: &SupLattice,
    budget: &Budget,
) -> Result<Vec<Vec<usize>>, BudgetExceeded> {
    let total = checked_pow(target.n(), source.n()).ok_or_else(|| BudgetExceeded {
        what: "raw map filtering".into(),
        needed: u64::MAX,
        allowed: budget.max_scan,
    })?;
    budget.admit_scan(total, "raw map filtering")?;
    let mut out = Vec::new();
    let mut values = vec![0usize; source.n()];
    loop {
        if check_join_preserving(source, target, &values).is_ok() {
            out.push(values.clone());
        }
        let mut i = source.n();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            values[i] += 1;
            if values[i] < target.n() {
                break;
            }
            values[i] = 0;
        }
    }
}

/// A monotone involution: `a** = a`, join-preserving.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeInvolution {
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvolutionViolation {
    #[error("not an involution at {a}: a** != a")]
    NotInvolutive { a: usize },
    #[error("involution does not preserve joins at ({a},{b})")]
    NotJoinPreserving { a: usize, b: usize },
    #[error("involution does not fix bottom")]
    BottomMoved,
    #[error("involution does not reverse order at ({a},{b})")]
    NotAntitone { a: usize, b: usize },
    #[error("involution value out of range at {a}")]
    OutOfRange { a: usize },
}

impl LatticeInvolution {
    pub fn validate(
        lat: &SupLattice,
        values: Vec<usize>,
    ) -> Result<LatticeInvolution, Vec<InvolutionViolation>> {
        let mut errors = Vec::new();
        for a in lat.elements() {
            if values[a] >= lat.n() {
                errors.push(InvolutionViolation::OutOfRange { a });
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        for a in lat.elements() {
            if values[values[a]] != a {
                errors.push(InvolutionViolation::NotInvolutive { a });
            }
        }
        if values[lat.bottom()] != lat.bottom() {
            errors.push(InvolutionViolation::BottomMoved);
        }
        for a in lat.elements() {
            for b in lat.elements() {
                if values[lat.join(a, b)] != lat.join(values[a], values[b]) {
                    errors.push(InvolutionViolation::NotJoinPreserving { a, b });
                }
            }
        }
        if errors.is_empty() {
            Ok(LatticeInvolution { values })
        } else {
            Err(errors)
        }
    }

    pub fn identity(lat: &SupLattice) -> LatticeInvolution {
        LatticeInvolution {
            values: lat.elements().collect(),
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.values[a]
    }
}

/// An antitone involution (order-reversing bijection with `d(d(x)) = x`).
///
/// A duality turns a sup-lattice into a 2-valued Hilbert module: the induced
/// inner product is `<m,n> = 0` iff `n <= d(m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Duality {
    pub values: Vec<usize>,
}

impl Duality {
    pub fn validate(lat: &SupLattice, values: Vec<usize>) -> Result<Duality, Vec<InvolutionViolation>> {
        let mut errors = Vec::new();
        for a in lat.elements() {
            if values[a] >= lat.n() {
                errors.push(InvolutionViolation::OutOfRange { a });
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        for a in lat.elements() {
            if values[values[a]] != a {
                errors.push(InvolutionViolation::NotInvolutive { a });
            }
        }
        for a in lat.elements() {
            for b in lat.elements() {
                if lat.leq(a, b) && !lat.leq(values[b], values[a]) {
                    errors.push(InvolutionViolation::NotAntitone { a, b });
                }
            }
        }
        if errors.is_empty() {
            Ok(Duality { values })
        } else {
            Err(errors)
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.values[a]
    }
}

/// Structure-preservation constraints for the backtracking isomorphism search.
///
/// `inner_*` tables have both coordinates and values in the permuted carrier;
/// `keyed` tables are maps `X x K -> X` with a fixed external key set, and
/// `valued` tables are maps `X x X -> V` into a fixed external value set.
#[derive(Default)]
pub struct IsoSpec {
    pub n: usize,
    pub inner_binary: Vec<(Vec<usize>, Vec<usize>)>,
    pub inner_unary: Vec<(Vec<usize>, Vec<usize>)>,
    pub keyed: Vec<(usize, Vec<usize>, Vec<usize>)>,
    pub valued: Vec<(Vec<usize>, Vec<usize>)>,
}

impl IsoSpec {
    /// First isomorphism in lexicographic order of the permutation table,
    /// or `None` after exhausting the (pruned) search space.
    pub fn search(&self) -> Option<Vec<usize>> {
        let n = self.n;
        let src_inv = self.invariants(true);
        let dst_inv = self.invariants(false);
        {
            let mut s = src_inv.clone();
            let mut d = dst_inv.clone();
            s.sort_unstable();
            d.sort_unstable();
            if s != d {
                return None;
            }
        }
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if self.search_rec(0, &mut perm, &mut used, &src_inv, &dst_inv) {
            Some(perm)
        } else {
            None
        }
    }

    fn invariants(&self, src: bool) -> Vec<Vec<usize>> {
        let n = self.n;
        (0..n)
            .map(|x| {
                let mut v = Vec::new();
                for (s, d) in &self.inner_binary {
                    let t = if src { s } else { d };
                    // row/column/diagonal fingerprints, permutation-invariant
                    v.push((0..n).filter(|&y| t[x * n + y] == x).count());
                    v.push((0..n).filter(|&y| t[y * n + x] == x).count());
                    v.push(usize::from(t[x * n + x] == x));
                }
                for (k, s, d) in &self.keyed {
                    let t = if src { s } else { d };
                    v.push((0..*k).filter(|&j| t[x * k + j] == x).count());
                }
                for (s, d) in &self.valued {
                    let t = if src { s } else { d };
                    let mut row: Vec<usize> = (0..n).map(|y| t[x * n + y]).collect();
                    let mut col: Vec<usize> = (0..n).map(|y| t[y * n + x]).collect();
                    row.sort_unstable();
                    col.sort_unstable();
                    v.extend(row);
                    v.extend(col);
                    v.push(t[x * n + x]);
                }
                v
            })
            .collect()
    }

    fn search_rec(
        &self,
        next: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        src_inv: &[Vec<usize>],
        dst_inv: &[Vec<usize>],
    ) -> bool {
        let n = self.n;
        if next == n {
            return self.full_check(perm);
        }
        for candidate in 0..n {
            if used[candidate] || src_inv[next] != dst_inv[candidate] {
                continue;
            }
            perm[next] = candidate;
            if self.consistent(next, perm) {
                used[candidate] = true;
                if self.search_rec(next + 1, perm, used, src_inv, dst_inv) {
                    return true;
                }
                used[candidate] = false;
            }
            perm[next] = usize::MAX;
        }
        false
    }

    /// Incremental consistency for the freshly assigned element.
    fn consistent(&self, fresh: usize, perm: &[usize]) -> bool {
        let n = self.n;
        let assigned = |x: usize| perm[x] != usize::MAX;
        for (s, d) in &self.inner_unary {
            if assigned(s[fresh]) && d[perm[fresh]] != perm[s[fresh]] {
                return false;
            }
            for x in 0..n {
                if assigned(x) && s[x] == fresh && d[perm[x]] != perm[fresh] {
                    return false;
                }
            }
        }
        for (k, s, d) in &self.keyed {
            for j in 0..*k {
                let y = s[fresh * k + j];
                if assigned(y) && d[perm[fresh] * k + j] != perm[y] {
                    return false;
                }
            }
        }
        for (s, d) in &self.valued {
            for x in 0..n {
                if !assigned(x) {
                    continue;
                }
                if d[perm[fresh] * n + perm[x]] != s[fresh * n + x]
                    || d[perm[x] * n + perm[fresh]] != s[x * n + fresh]
                {
                    return false;
                }
            }
        }
        for (s, d) in &self.inner_binary {
            for x in 0..n {
                if !assigned(x) {
                    continue;
                }
                for (a, b) in [(fresh, x), (x, fresh)] {
                    let v = s[a * n + b];
                    if assigned(v) && d[perm[a] * n + perm[b]] != perm[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn full_check(&self, perm: &[usize]) -> bool {
        let n = self.n;
        for (s, d) in &self.inner_binary {
            for a in 0..n {
                for b in 0..n {
                    if d[perm[a] * n + perm[b]] != perm[s[a * n + b]] {
                        return false;
                    }
                }
            }
        }
        for (s, d) in &self.inner_unary {
            for a in 0..n {
                if d[perm[a]] != perm[s[a]] {
                    return false;
                }
            }
        }
        for (k, s, d) in &self.keyed {
            for a in 0..n {
                for j in 0..*k {
                    if d[perm[a] * k + j] != perm[s[a * k + j]] {
                        return false;
                    }
                }
            }
        }
        for (s, d) in &self.valued {
            for a in 0..n {
                for b in 0..n {
                    if d[perm[a] * n + perm[b]] != s[a * n + b] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Searches for a join-preserving bijection with join-preserving inverse.
///
/// For finite lattices a join-preserving bijection is automatically an order
/// isomorphism, so its inverse preserves joins as well; the search only has
/// to find a bijection matching the join tables.
pub fn find_lattice_iso(s: &SupLattice, t: &SupLattice) -> Option<Vec<usize>> {
    if s.n() != t.n() {
        return None;
    }
    let spec = IsoSpec {
        n: s.n(),
        inner_binary: vec![(s_table(s), s_table(t))],
        ..Default::default()
    };
    spec.search()
}

fn s_table(l: &SupLattice) -> Vec<usize> {
    let n = l.n();
    let mut t = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            t[a * n + b] = l.join(a, b);
        }
    }
    t
}

/// All lattices on `n` labeled elements, one representative per isomorphism
/// class, in a deterministic canonical order.
///
/// Orders are generated as {<, >, incomparable} assignments on element pairs,
/// filtered down to lattices, then deduplicated by canonical join table.
pub fn enumerate_lattices(n: usize, budget: &Budget) -> Result<Vec<SupLattice>, BudgetExceeded> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![SupLattice::chain(1)]);
    }
    let pairs = n * (n - 1) / 2;
    let total = checked_pow(3, pairs).ok_or_else(|| BudgetExceeded {
        what: "lattice enumeration".into(),
        needed: u64::MAX,
        allowed: budget.max_scan,
    })?;
    budget.admit_scan(total, "lattice enumeration")?;

    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    let mut state = vec![0u8; pairs];
    loop {
        if let Some(lat) = lattice_from_pair_state(n, &state) {
            let canon = lat.canonical_join_table();
            if !seen.contains(&canon) {
                seen.push(canon);
                out.push(lat);
            }
        }
        let mut i = pairs;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            state[i] += 1;
            if state[i] < 3 {
                break;
            }
            state[i] = 0;
        }
    }
}

fn lattice_from_pair_state(n: usize, state: &[u8]) -> Option<SupLattice> {
    let mut leq = vec![false; n * n];
    for a in 0..n {
        leq[a * n + a] = true;
    }
    let mut idx = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            match state[idx] {
                1 => leq[a * n + b] = true,
                2 => leq[b * n + a] = true,
                _ => {}
            }
            idx += 1;
        }
    }
    // transitivity
    for k in 0..n {
        for a in 0..n {
            if leq[a * n + k] {
                for b in 0..n {
                    if leq[k * n + b] && !leq[a * n + b] {
                        return None; // require the input relation to be transitive already
                    }
                }
            }
        }
    }
    // least upper bounds for all pairs
    let mut join = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let uppers: Vec<usize> = (0..n)
                .filter(|&u| leq[a * n + u] && leq[b * n + u])
                .collect();
            let mut least = None;
            for &u in &uppers {
                if uppers.iter().all(|&v| leq[u * n + v]) {
                    least = Some(u);
                    break;
                }
            }
            join[a * n + b] = least?;
        }
    }
    SupLattice::validate(n, join).ok()
}
