//! Right Hilbert bimodules and the interior tensor product.
//!
//! The interior tensor product of a right Hilbert `A`-module `M` with a
//! Hilbert `A`-`B` bimodule `N` is the Hilbert quotient of the simple-tensor
//! pre-Hilbert structure with
//! `<x1 (x) y1, x2 (x) y2> = <y1, <x1,x2> * y2>_B`.
//!
//! Representation: a tensor class is stored as the `B`-valued function
//! `(x,y) |-> <t, x (x) y>` on the `M x N` grid. The Hilbert quotient
//! identifies elements exactly by these values, so the functions are a
//! canonical normal form; the generator algebra is the pointwise-join
//! closure of the simple-tensor functions
//! `phi_{m,n}(x,y) = <n, <m,x> * y>_B`.
//!
//! The right action is `(phi <> b)(x,y) = b* . phi(x,y)`, obtained from
//! `<t <> b, p> = b* . <t, p>` (symmetry plus compatibility of the inner
//! product with the action).

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::hilbmod::{
    regular_right, HilbertModule, ModuleViolation, QModule, Side,
};
use crate::quantale::InvQuantale;
use crate::suplat::{IsoSpec, SupLattice};

/// A violated bimodule law with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BimoduleViolation {
    #[error("left module structure invalid: {0}")]
    LeftModule(ModuleViolation),
    #[error("actions do not commute at (a={a}, x={x}, b={b})")]
    ActionsDontCommute { a: usize, x: usize, b: usize },
    #[error("<a*x, y> = <x, a* * y> fails at (a={a}, x={x}, y={y})")]
    StarCompatibility { a: usize, x: usize, y: usize },
    #[error("left inner product invalid: {0}")]
    LeftInner(ModuleViolation),
    #[error("quantale mismatch between factors")]
    QuantaleMismatch,
}

/// A right Hilbert `A`-`B` bimodule: a right Hilbert `B`-module with a
/// compatible left `A`-action, and optionally a left `A`-valued inner
/// product (for imprimitivity candidates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertBimodule {
    left_quantale: Arc<InvQuantale>,
    carrier: Arc<HilbertModule>,
    left_module: QModule,
    left_ip: Option<Vec<usize>>,
}

impl HilbertBimodule {
    /// Validates the left-module laws, the action compatibility
    /// `a*(x<>b) = (a*x)<>b` and the star law `<a*x,y> = <x, a**y>`.
    pub fn validate(
        left_quantale: Arc<InvQuantale>,
        carrier: Arc<HilbertModule>,
        left_act: Vec<usize>,
        left_ip: Option<Vec<usize>>,
    ) -> Result<HilbertBimodule, Vec<BimoduleViolation>> {
        assert_eq!(carrier.side(), Side::Right);
        let mut errors = Vec::new();
        let left_module = match QModule::validate(
            left_quantale.clone(),
            carrier.lat().clone(),
            left_act,
            Side::Left,
        ) {
            Ok(module) => module,
            Err(errs) => {
                return Err(errs.into_iter().map(BimoduleViolation::LeftModule).collect());
            }
        };

        let b = carrier.quantale();
        'commute: for a in left_quantale.elements() {
            for x in carrier.elements() {
                for scalar in b.elements() {
                    let lhs = left_module.act(carrier.act(x, scalar), a);
                    let rhs = carrier.act(left_module.act(x, a), scalar);
                    if lhs != rhs {
                        errors.push(BimoduleViolation::ActionsDontCommute { a, x, b: scalar });
                        break 'commute;
                    }
                }
            }
        }
        'star: for a in left_quantale.elements() {
            for x in carrier.elements() {
                for y in carrier.elements() {
                    let lhs = carrier.ip(left_module.act(x, a), y);
                    let rhs = carrier.ip(x, left_module.act(y, left_quantale.star(a)));
                    if lhs != rhs {
                        errors.push(BimoduleViolation::StarCompatibility { a, x, y });
                        break 'star;
                    }
                }
            }
        }
        if let Some(ip) = &left_ip {
            // the left inner product must make the carrier a left
            // pre-Hilbert A-module; level is checked by the caller
            if let Err(errs) = HilbertModule::validate(left_module.clone(), ip.clone()) {
                errors.extend(errs.into_iter().map(BimoduleViolation::LeftInner));
            }
        }
        if errors.is_empty() {
            Ok(HilbertBimodule {
                left_quantale,
                carrier,
                left_module,
                left_ip,
            })
        } else {
            Err(errors)
        }
    }

    /// The quantale acting on the left (`A`).
    pub fn left_quantale(&self) -> &Arc<InvQuantale> {
        &self.left_quantale
    }

    /// The quantale acting on the right (`B`).
    pub fn right_quantale(&self) -> &Arc<InvQuantale> {
        self.carrier.quantale()
    }

    /// The carrier as a right Hilbert `B`-module.
    pub fn carrier(&self) -> &Arc<HilbertModule> {
        &self.carrier
    }

    /// The carrier as a left `A`-module.
    pub fn left_module(&self) -> &QModule {
        &self.left_module
    }

    pub fn n(&self) -> usize {
        self.carrier.n()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        self.carrier.elements()
    }

    /// `a * x`.
    pub fn left_act(&self, a: usize, x: usize) -> usize {
        self.left_module.act(x, a)
    }

    /// `x <> b`.
    pub fn right_act(&self, x: usize, b: usize) -> usize {
        self.carrier.act(x, b)
    }

    /// `<x,y>_B`.
    pub fn right_ip(&self, x: usize, y: usize) -> usize {
        self.carrier.ip(x, y)
    }

    /// `<x,y>_A`, when a left inner product is carried.
    pub fn left_ip(&self, x: usize, y: usize) -> Option<usize> {
        self.left_ip.as_ref().map(|ip| ip[x * self.n() + y])
    }

    pub fn left_ip_table(&self) -> Option<&[usize]> {
        self.left_ip.as_deref()
    }

    /// The carrier as a left Hilbert module, when a left product is carried.
    pub fn left_hilbert(&self) -> Option<HilbertModule> {
        let ip = self.left_ip.clone()?;
        HilbertModule::validate(self.left_module.clone(), ip).ok()
    }
}

/// A quantale as a bimodule over itself: both actions by multiplication,
/// right product `a*.b`, left product `a.b*`.
pub fn regular_bimodule(q: &Arc<InvQuantale>) -> HilbertBimodule {
    let n = q.n();
    let carrier = Arc::new(regular_right(q.clone()));
    let mut left_act = vec![0; n * n];
    let mut left_ip = vec![0; n * n];
    for x in 0..n {
        for a in 0..n {
            left_act[x * n + a] = q.mult(a, x);
            left_ip[x * n + a] = q.mult(x, q.star(a));
        }
    }
    HilbertBimodule::validate(q.clone(), carrier, left_act, Some(left_ip))
        .expect("a quantale is a bimodule over itself")
}

/// The interior tensor product `M (x). N` as a right Hilbert `B`-module in
/// function representation.
#[derive(Debug, Clone)]
pub struct TensorModule {
    pub module: Arc<HilbertModule>,
    /// `grid[m * |N| + n]` is the element index of the class of `m (x) n`.
    pub grid: Vec<usize>,
    /// Normal forms: element index -> `B`-valued function on the grid.
    pub functions: Vec<Vec<usize>>,
    left_size: usize,
    right_size: usize,
}

impl TensorModule {
    pub fn simple_tensor(&self, m: usize, n: usize) -> usize {
        self.grid[m * self.right_size + n]
    }

    /// Maximal decomposition: all simple-tensor pairs whose class lies
    /// below the element; their join recovers the element.
    pub fn maximal_decomposition(&self, element: usize) -> Vec<(usize, usize)> {
        let f = &self.functions[element];
        let b_lat = self.module.quantale().lat();
        let mut pairs = Vec::new();
        for m in 0..self.left_size {
            for n in 0..self.right_size {
                let g = &self.functions[self.simple_tensor(m, n)];
                if g.iter().zip(f.iter()).all(|(&gx, &fx)| b_lat.leq(gx, fx)) {
                    pairs.push((m, n));
                }
            }
        }
        pairs
    }
}

/// Builds `M (x)_A N` for a right Hilbert `A`-module `M` and a Hilbert
/// `A`-`B` bimodule `N`.
pub fn interior_tensor(
    m: &Arc<HilbertModule>,
    n: &Arc<HilbertBimodule>,
    budget: &Budget,
) -> Result<TensorModule, BudgetExceeded> {
    assert_eq!(
        m.quantale(),
        n.left_quantale(),
        "tensor factors must share the acting quantale"
    );
    let b = n.right_quantale().clone();
    let nm = m.n();
    let nn = n.n();
    let grid_len = nm * nn;

    // simple-tensor functions phi_{m,n}(x,y) = <n, <m,x> * y>_B
    let phi = |mm: usize, nnn: usize| -> Vec<usize> {
        let mut f = vec![0; grid_len];
        for x in 0..nm {
            for y in 0..nn {
                let scalar = m.ip(mm, x);
                f[x * nn + y] = n.right_ip(nnn, n.left_act(scalar, y));
            }
        }
        f
    };
    let mut closure: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut generators = Vec::with_capacity(grid_len);
    for mm in 0..nm {
        for nnn in 0..nn {
            let f = phi(mm, nnn);
            closure.insert(f.clone());
            generators.push(f);
        }
    }
    closure.insert(vec![b.bottom(); grid_len]);
    let mut frontier: Vec<Vec<usize>> = closure.iter().cloned().collect();
    while !frontier.is_empty() {
        budget.admit_carrier(closure.len(), "interior tensor closure")?;
        let mut next = Vec::new();
        for f in &frontier {
            for g in &generators {
                let joined: Vec<usize> = f
                    .iter()
                    .zip(g.iter())
                    .map(|(&u, &v)| b.join(u, v))
                    .collect();
                if closure.insert(joined.clone()) {
                    next.push(joined);
                }
            }
        }
        frontier = next;
    }
    budget.admit_carrier(closure.len(), "interior tensor closure")?;

    let functions: Vec<Vec<usize>> = closure.into_iter().collect();
    let k = functions.len();
    let index = |f: &[usize]| -> usize {
        functions
            .binary_search_by(|e| e.as_slice().cmp(f))
            .expect("closure is closed under the used operations")
    };
    let grid: Vec<usize> = generators.iter().map(|f| index(f)).collect();

    let mut join = vec![0; k * k];
    for i in 0..k {
        for j in 0..k {
            let joined: Vec<usize> = functions[i]
                .iter()
                .zip(&functions[j])
                .map(|(&u, &v)| b.join(u, v))
                .collect();
            join[i * k + j] = index(&joined);
        }
    }
    let lat = Arc::new(SupLattice::validate(k, join).expect("pointwise join table"));

    // right action (phi <> s)(x,y) = s* . phi(x,y)
    let nb = b.n();
    let mut act = vec![0; k * nb];
    for i in 0..k {
        for s in 0..nb {
            let acted: Vec<usize> = functions[i]
                .iter()
                .map(|&v| b.mult(b.star(s), v))
                .collect();
            act[i * nb + s] = index(&acted);
        }
    }

    // inner product over maximal decompositions, with the value-route
    // cross-check <phi, x(x)y> = phi(x,y)
    let decompositions: Vec<Vec<(usize, usize)>> = (0..k)
        .map(|i| {
            let f = &functions[i];
            let mut pairs = Vec::new();
            for mm in 0..nm {
                for nnn in 0..nn {
                    let g = &functions[grid[mm * nn + nnn]];
                    if g.iter().zip(f.iter()).all(|(&gx, &fx)| b.lat().leq(gx, fx)) {
                        pairs.push((mm, nnn));
                    }
                }
            }
            pairs
        })
        .collect();
    let mut ip = vec![0; k * k];
    for i in 0..k {
        for j in 0..k {
            let by_formula = b.lat().join_all(
                decompositions[i]
                    .iter()
                    .flat_map(|&(mi, ni)| {
                        decompositions[j].iter().map(move |&(xj, yj)| (mi, ni, xj, yj))
                    })
                    .map(|(mi, ni, xj, yj)| {
                        n.right_ip(ni, n.left_act(m.ip(mi, xj), yj))
                    }),
            );
            let by_values = b.lat().join_all(
                decompositions[j]
                    .iter()
                    .map(|&(xj, yj)| functions[i][xj * nn + yj]),
            );
            assert_eq!(
                by_formula, by_values,
                "tensor inner product must not depend on the decomposition"
            );
            ip[i * k + j] = by_formula;
        }
    }

    let module = QModule::validate(b, lat, act, Side::Right)
        .expect("tensor action satisfies the module laws");
    let module = Arc::new(
        HilbertModule::validate(module, ip)
            .expect("tensor inner product satisfies the pre-Hilbert laws"),
    );
    Ok(TensorModule {
        module,
        grid,
        functions,
        left_size: nm,
        right_size: nn,
    })
}

/// Outcome of the standard-isomorphism construction `M (x)_A A -> M`.
#[derive(Debug, Clone)]
pub struct StandardIso {
    pub tensor: TensorModule,
    /// The table of `class(m (x) a) |-> m <> a`, extended by joins.
    pub map: Vec<usize>,
    /// `Some(..)` exactly when the map is a unitary isomorphism.
    pub unitary: Option<Vec<usize>>,
    /// Which m-regularity halves fail, when the map is not unitary.
    pub separated: bool,
    pub essential: bool,
}

/// Builds `M (x)_A A` and the canonical map `m (x) a |-> m <> a`; the map
/// is a unitary isomorphism exactly when `M` is m-regular.
pub fn standard_iso(
    m: &Arc<HilbertModule>,
    budget: &Budget,
) -> Result<StandardIso, BudgetExceeded> {
    let a = Arc::new(regular_bimodule(m.quantale()));
    let tensor = interior_tensor(m, &a, budget)?;
    let map: Vec<usize> = (0..tensor.functions.len())
        .map(|t| {
            m.lat().join_all(
                tensor
                    .maximal_decomposition(t)
                    .into_iter()
                    .map(|(mm, aa)| m.act(mm, aa)),
            )
        })
        .collect();
    let bijective = {
        let mut seen = map.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == map.len() && map.len() == m.n()
    };
    let isometric = tensor.module.elements().all(|s| {
        tensor
            .module
            .elements()
            .all(|t| tensor.module.ip(s, t) == m.ip(map[s], map[t]))
    });
    let equivariant = tensor.module.elements().all(|t| {
        m.quantale()
            .elements()
            .all(|s| map[tensor.module.act(t, s)] == m.act(map[t], s))
    });
    let unitary = (bijective && isometric && equivariant).then(|| map.clone());
    let flags = m.flags();
    Ok(StandardIso {
        tensor,
        map,
        unitary,
        separated: flags.separated,
        essential: flags.essential,
    })
}

/// Equips a tensor `M (x)_A N` with the left `C`-action
/// `c * (m (x) n) = (c*m) (x) n` when `M` carries a left `C`-action
/// (given as `act[m * |C| + c]`), and validates the result as a `C`-`B`
/// bimodule.
pub fn with_left_action(
    tensor: &TensorModule,
    c: Arc<InvQuantale>,
    left_act_on_m: &[usize],
) -> Result<HilbertBimodule, Vec<BimoduleViolation>> {
    let k = tensor.functions.len();
    let nc = c.n();
    let nn = tensor.right_size;
    let mut left_act = vec![0; k * nc];
    for t in 0..k {
        let decomposition = tensor.maximal_decomposition(t);
        for scalar in 0..nc {
            let b_lat = tensor.module.quantale().lat();
            let mut acc = vec![b_lat.bottom(); tensor.functions[0].len()];
            for &(mm, nnn) in &decomposition {
                let moved = left_act_on_m[mm * nc + scalar];
                let g = &tensor.functions[tensor.grid[moved * nn + nnn]];
                for (slot, &gx) in acc.iter_mut().zip(g) {
                    *slot = b_lat.join(*slot, gx);
                }
            }
            left_act[t * nc + scalar] = tensor
                .functions
                .binary_search_by(|e| e.as_slice().cmp(acc.as_slice()))
                .expect("left action lands in the closure");
        }
    }
    HilbertBimodule::validate(c, tensor.module.clone(), left_act, None)
}

/// Searches for an isomorphism of right Hilbert bimodules: a bijection
/// preserving joins, both actions and the right inner product (and the
/// left inner product when both sides carry one).
pub fn find_bimodule_iso(x: &HilbertBimodule, y: &HilbertBimodule) -> Option<Vec<usize>> {
    if x.n() != y.n()
        || x.left_quantale() != y.left_quantale()
        || x.right_quantale() != y.right_quantale()
    {
        return None;
    }
    let n = x.n();
    let join = |m: &HilbertBimodule| {
        let mut t = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                t[a * n + b] = m.carrier.lat().join(a, b);
            }
        }
        t
    };
    let left = |m: &HilbertBimodule| {
        let k = m.left_quantale.n();
        let mut t = vec![0; n * k];
        for e in 0..n {
            for a in 0..k {
                t[e * k + a] = m.left_act(a, e);
            }
        }
        t
    };
    let right = |m: &HilbertBimodule| {
        let k = m.right_quantale().n();
        let mut t = vec![0; n * k];
        for e in 0..n {
            for b in 0..k {
                t[e * k + b] = m.right_act(e, b);
            }
        }
        t
    };
    let rip = |m: &HilbertBimodule| {
        let mut t = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                t[a * n + b] = m.right_ip(a, b);
            }
        }
        t
    };
    let mut valued = vec![(rip(x), rip(y))];
    if let (Some(lx), Some(ly)) = (x.left_ip_table(), y.left_ip_table()) {
        valued.push((lx.to_vec(), ly.to_vec()));
    }
    let spec = IsoSpec {
        n,
        inner_binary: vec![(join(x), join(y))],
        keyed: vec![
            (x.left_quantale.n(), left(x), left(y)),
            (x.right_quantale().n(), right(x), right(y)),
        ],
        valued,
        ..Default::default()
    };
    spec.search()
}
