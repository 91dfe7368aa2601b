//! Modules and Hilbert modules over an involutive quantale.
//!
//! A right module is a sup-lattice with an action `m <> a` that is
//! associative over the quantale multiplication and join-preserving in both
//! arguments (empty joins included). A Hilbert module adds an `A`-valued
//! inner product; the axioms split into three levels:
//!
//! - **pre-Hilbert**: compatibility `<m,n>.a = <m, n<>a>`, join-linearity
//!   in both arguments, and the symmetry `<m,n>* = <n,m>`;
//! - **Hilbert**: pre-Hilbert plus separation (`<-,m> = <-,n>` forces
//!   `m = n`);
//! - **strict Hilbert**: Hilbert plus `<m,m> = 0` forcing `m = 0`.
//!
//! Left modules carry the mirrored axioms (`a.<m,n> = <a*m, n>` and
//! row-based separation); the action table is stored uniformly as
//! "element acted on by scalar" for both sides.

mod adjoint;
mod compact;
mod constructions;
mod factor;
mod quotient;

pub use adjoint::{
    enumerate_adjointable_maps, enumerate_module_maps, star_adjoint, AdjointablePair,
    NotAdjointable,
};
pub use compact::{
    compact_quantale, compact_space, nuclearity_and_projectivity, retract_search, theta_map,
    CompactQuantale, CompactSpace, NuclearityReport, RetractWitness,
};
pub use constructions::{
    biproduct, free_module, generator_maps, omega_map, omega_star_map, power_module, regular_left,
    regular_right, Biproduct, FreeModule, GeneratorMaps,
};
pub use factor::{image_factorization, ImageFactorization};
pub use quotient::{
    coequalizer, finite_limit, hilbert_quotient, kernel_pair_presentation, Coequalizer, Diagram,
    DiagramArrow, HilbertQuotient, KernelPairPresentation, Limit,
};

use std::sync::Arc;

use thiserror::Error;

use crate::quantale::InvQuantale;
use crate::suplat::{check_join_preserving, SupLattice};

/// Which side the quantale acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A violated module or inner-product law with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleViolation {
    #[error("action table malformed")]
    Malformed,
    #[error("action not associative over mult at (m={m}, a={a}, b={b})")]
    ActionNotAssociative { m: usize, a: usize, b: usize },
    #[error("action not join-preserving in the element at (x={x}, y={y}, a={a})")]
    ActionNotLinearInElement { x: usize, y: usize, a: usize },
    #[error("action does not annihilate the bottom element at a={a}")]
    BottomElementNotFixed { a: usize },
    #[error("action not join-preserving in the scalar at (m={m}, a={a}, b={b})")]
    ActionNotLinearInScalar { m: usize, a: usize, b: usize },
    #[error("action does not annihilate the zero scalar at m={m}")]
    ZeroScalarNotAbsorbed { m: usize },
    #[error("inner product table malformed")]
    InnerMalformed,
    #[error("inner product incompatible with action at (m={m}, n={n}, a={a})")]
    InnerActionIncompatible { m: usize, n: usize, a: usize },
    #[error("inner product not join-linear in first argument at (x={x}, y={y}, n={n})")]
    InnerNotLinearFirst { x: usize, y: usize, n: usize },
    #[error("inner product not join-linear in second argument at (m={m}, x={x}, y={y})")]
    InnerNotLinearSecond { m: usize, x: usize, y: usize },
    #[error("inner product symmetry <m,n>* = <n,m> fails at (m={m}, n={n})")]
    InnerNotSymmetric { m: usize, n: usize },
}

/// Derived classification flags of a module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleFlags {
    pub separated: bool,
    pub separation_witness: Option<(usize, usize)>,
    pub essential: bool,
    pub essential_witness: Option<usize>,
    pub faithful: bool,
    pub faithful_witness: Option<(usize, usize)>,
}

impl ModuleFlags {
    pub fn m_regular(&self) -> bool {
        self.separated && self.essential
    }
}

/// A module over an involutive quantale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QModule {
    quantale: Arc<InvQuantale>,
    lat: Arc<SupLattice>,
    act: Vec<usize>,
    side: Side,
    flags: ModuleFlags,
}

impl QModule {
    /// Validates the module axioms and derives the classification flags.
    ///
    /// `act[m * |A| + a]` is the element `m` acted on by the scalar `a`,
    /// for both sides; the side only changes which association law is
    /// required.
    pub fn validate(
        quantale: Arc<InvQuantale>,
        lat: Arc<SupLattice>,
        act: Vec<usize>,
        side: Side,
    ) -> Result<QModule, Vec<ModuleViolation>> {
        let nm = lat.n();
        let na = quantale.n();
        if act.len() != nm * na || act.iter().any(|&x| x >= nm) {
            return Err(vec![ModuleViolation::Malformed]);
        }
        let mut errors = Vec::new();
        let a_of = |m: usize, a: usize| act[m * na + a];

        'assoc: for m in 0..nm {
            for a in 0..na {
                for b in 0..na {
                    let scalar = quantale.mult(a, b);
                    let (first, second) = match side {
                        Side::Right => (a, b),
                        Side::Left => (b, a),
                    };
                    if a_of(m, scalar) != a_of(a_of(m, first), second) {
                        errors.push(ModuleViolation::ActionNotAssociative { m, a, b });
                        break 'assoc;
                    }
                }
            }
        }
        'elem: for x in 0..nm {
            for y in 0..nm {
                for a in 0..na {
                    if a_of(lat.join(x, y), a) != lat.join(a_of(x, a), a_of(y, a)) {
                        errors.push(ModuleViolation::ActionNotLinearInElement { x, y, a });
                        break 'elem;
                    }
                }
            }
        }
        for a in 0..na {
            if a_of(lat.bottom(), a) != lat.bottom() {
                errors.push(ModuleViolation::BottomElementNotFixed { a });
                break;
            }
        }
        'scalar: for m in 0..nm {
            for a in 0..na {
                for b in 0..na {
                    if a_of(m, quantale.join(a, b)) != lat.join(a_of(m, a), a_of(m, b)) {
                        errors.push(ModuleViolation::ActionNotLinearInScalar { m, a, b });
                        break 'scalar;
                    }
                }
            }
        }
        for m in 0..nm {
            if a_of(m, quantale.bottom()) != lat.bottom() {
                errors.push(ModuleViolation::ZeroScalarNotAbsorbed { m });
                break;
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }

        let flags = derive_flags(&lat, na, &act);
        Ok(QModule {
            quantale,
            lat,
            act,
            side,
            flags,
        })
    }

    pub fn quantale(&self) -> &Arc<InvQuantale> {
        &self.quantale
    }

    pub fn lat(&self) -> &Arc<SupLattice> {
        &self.lat
    }

    pub fn n(&self) -> usize {
        self.lat.n()
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// `m` acted on by the scalar `a` (right: `m <> a`; left: `a * m`).
    pub fn act(&self, m: usize, a: usize) -> usize {
        self.act[m * self.quantale.n() + a]
    }

    pub fn act_table(&self) -> &[usize] {
        &self.act
    }

    pub fn flags(&self) -> &ModuleFlags {
        &self.flags
    }

    pub fn is_m_regular(&self) -> bool {
        self.flags.m_regular()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        self.lat.elements()
    }

    /// Scalar residuation `m ->_R n = v{ a | m <> a <= n }`.
    pub fn residuate_scalar(&self, m: usize, n: usize) -> usize {
        self.quantale.lat().join_all(
            self.quantale
                .elements()
                .filter(|&a| self.lat.leq(self.act(m, a), n)),
        )
    }

    /// Element residuation `a ->_L n = v{ m | m <> a <= n }`.
    pub fn residuate_element(&self, a: usize, n: usize) -> usize {
        self.lat
            .join_all(self.elements().filter(|&m| self.lat.leq(self.act(m, a), n)))
    }

    /// The essential part `ess(X) = X <> A`: all joins of acted elements.
    pub fn essential_part(&self) -> Vec<usize> {
        let nm = self.n();
        let mut acted_below = vec![self.lat.bottom(); nm];
        for m in 0..nm {
            for a in self.quantale.elements() {
                let p = self.act(m, a);
                for (e, slot) in acted_below.iter_mut().enumerate() {
                    if self.lat.leq(p, e) {
                        *slot = self.lat.join(*slot, p);
                    }
                }
            }
        }
        (0..nm).filter(|&e| acted_below[e] == e).collect()
    }
}

fn derive_flags(lat: &SupLattice, na: usize, act: &[usize]) -> ModuleFlags {
    let nm = lat.n();
    let row = |m: usize| &act[m * na..(m + 1) * na];
    let mut separation_witness = None;
    'sep: for m in 0..nm {
        for n in (m + 1)..nm {
            if row(m) == row(n) {
                separation_witness = Some((m, n));
                break 'sep;
            }
        }
    }
    let mut faithful_witness = None;
    'fai: for a in 0..na {
        for b in (a + 1)..na {
            if (0..nm).all(|m| act[m * na + a] == act[m * na + b]) {
                faithful_witness = Some((a, b));
                break 'fai;
            }
        }
    }
    let mut acted_below = vec![lat.bottom(); nm];
    for m in 0..nm {
        for a in 0..na {
            let p = act[m * na + a];
            for (e, slot) in acted_below.iter_mut().enumerate() {
                if lat.leq(p, e) {
                    *slot = lat.join(*slot, p);
                }
            }
        }
    }
    let essential_witness = (0..nm).find(|&e| acted_below[e] != e);
    ModuleFlags {
        separated: separation_witness.is_none(),
        separation_witness,
        essential: essential_witness.is_none(),
        essential_witness,
        faithful: faithful_witness.is_none(),
        faithful_witness,
    }
}

/// Classification level of a validated Hilbert module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum HilbertLevel {
    Pre,
    Hilbert,
    Strict,
}

impl HilbertLevel {
    pub fn as_str(&self) -> &'static str {
        match self {
            HilbertLevel::Pre => "pre",
            HilbertLevel::Hilbert => "hilbert",
            HilbertLevel::Strict => "strict",
        }
    }
}

/// A module with an `A`-valued inner product, classified by level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertModule {
    module: QModule,
    ip: Vec<usize>,
    level: HilbertLevel,
    full: bool,
    full_witness: Option<usize>,
}

impl HilbertModule {
    /// Validates the pre-Hilbert axioms and classifies the result.
    ///
    /// Classification never fails upward: the returned level is the highest
    /// one whose axioms hold. Violations of the pre-Hilbert axioms are
    /// errors; missing separation or strictness only lowers the level.
    pub fn validate(module: QModule, ip: Vec<usize>) -> Result<HilbertModule, Vec<ModuleViolation>> {
        let nm = module.n();
        let q = module.quantale.clone();
        let na = q.n();
        if ip.len() != nm * nm || ip.iter().any(|&x| x >= na) {
            return Err(vec![ModuleViolation::InnerMalformed]);
        }
        let mut errors = Vec::new();
        let lat = module.lat.clone();
        let p = |m: usize, n: usize| ip[m * nm + n];

        match module.side {
            Side::Right => {
                // <m,n>.a = <m, n<>a>
                'co: for m in 0..nm {
                    for n in 0..nm {
                        for a in 0..na {
                            if q.mult(p(m, n), a) != p(m, module.act(n, a)) {
                                errors.push(ModuleViolation::InnerActionIncompatible { m, n, a });
                                break 'co;
                            }
                        }
                    }
                }
            }
            Side::Left => {
                // a.<m,n> = <a*m, n>
                'co: for m in 0..nm {
                    for n in 0..nm {
                        for a in 0..na {
                            if q.mult(a, p(m, n)) != p(module.act(m, a), n) {
                                errors.push(ModuleViolation::InnerActionIncompatible { m, n, a });
                                break 'co;
                            }
                        }
                    }
                }
            }
        }
        'first: for x in 0..nm {
            for y in 0..nm {
                for n in 0..nm {
                    if p(lat.join(x, y), n) != q.join(p(x, n), p(y, n)) {
                        errors.push(ModuleViolation::InnerNotLinearFirst { x, y, n });
                        break 'first;
                    }
                }
            }
        }
        if (0..nm).any(|n| p(lat.bottom(), n) != q.bottom()) {
            let n = (0..nm).find(|&n| p(lat.bottom(), n) != q.bottom()).unwrap();
            errors.push(ModuleViolation::InnerNotLinearFirst {
                x: lat.bottom(),
                y: lat.bottom(),
                n,
            });
        }
        'second: for m in 0..nm {
            for x in 0..nm {
                for y in 0..nm {
                    if p(m, lat.join(x, y)) != q.join(p(m, x), p(m, y)) {
                        errors.push(ModuleViolation::InnerNotLinearSecond { m, x, y });
                        break 'second;
                    }
                }
            }
        }
        for m in 0..nm {
            for n in 0..nm {
                if q.star(p(m, n)) != p(n, m) {
                    errors.push(ModuleViolation::InnerNotSymmetric { m, n });
                    break;
                }
            }
            if errors
                .last()
                .is_some_and(|e| matches!(e, ModuleViolation::InnerNotSymmetric { .. }))
            {
                break;
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }

        // separation: columns for right modules, rows for left modules
        let separated = match module.side {
            Side::Right => (0..nm).all(|m| {
                ((m + 1)..nm).all(|n| (0..nm).any(|x| p(x, m) != p(x, n)))
            }),
            Side::Left => (0..nm).all(|m| {
                ((m + 1)..nm).all(|n| (0..nm).any(|x| p(m, x) != p(n, x)))
            }),
        };
        let strict = (0..nm).all(|m| p(m, m) != q.bottom() || m == lat.bottom());
        let level = if separated && strict {
            HilbertLevel::Strict
        } else if separated {
            HilbertLevel::Hilbert
        } else {
            HilbertLevel::Pre
        };

        // full: every scalar is a join of inner-product values below it
        let mut value_below = vec![q.bottom(); na];
        for m in 0..nm {
            for n in 0..nm {
                let v = p(m, n);
                for (a, slot) in value_below.iter_mut().enumerate() {
                    if q.leq(v, a) {
                        *slot = q.join(*slot, v);
                    }
                }
            }
        }
        let full_witness = q.elements().find(|&a| value_below[a] != a);
        Ok(HilbertModule {
            module,
            ip,
            level,
            full: full_witness.is_none(),
            full_witness,
        })
    }

    pub fn module(&self) -> &QModule {
        &self.module
    }

    pub fn quantale(&self) -> &Arc<InvQuantale> {
        &self.module.quantale
    }

    pub fn lat(&self) -> &Arc<SupLattice> {
        &self.module.lat
    }

    pub fn n(&self) -> usize {
        self.module.n()
    }

    pub fn side(&self) -> Side {
        self.module.side
    }

    pub fn act(&self, m: usize, a: usize) -> usize {
        self.module.act(m, a)
    }

    pub fn ip(&self, m: usize, n: usize) -> usize {
        self.ip[m * self.module.n() + n]
    }

    pub fn ip_table(&self) -> &[usize] {
        &self.ip
    }

    pub fn level(&self) -> HilbertLevel {
        self.level
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn full_witness(&self) -> Option<usize> {
        self.full_witness
    }

    pub fn is_m_regular(&self) -> bool {
        self.module.is_m_regular()
    }

    pub fn flags(&self) -> &ModuleFlags {
        &self.module.flags
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        self.module.elements()
    }
}

/// Why a value table fails to be a module map.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapViolation {
    #[error("not join-preserving at ({a},{b})")]
    NotJoinPreserving { a: usize, b: usize },
    #[error("does not commute with the action at (m={m}, a={a})")]
    NotEquivariant { m: usize, a: usize },
    #[error("source and target modules live over different quantales")]
    QuantaleMismatch,
}

/// Checks the module-map laws `f(m <> a) = f(m) <> a` plus join preservation.
pub fn check_module_map(
    source: &QModule,
    target: &QModule,
    values: &[usize],
) -> Result<(), MapViolation> {
    if source.quantale != target.quantale {
        return Err(MapViolation::QuantaleMismatch);
    }
    check_join_preserving(&source.lat, &target.lat, values).map_err(|e| match e {
        crate::suplat::MapError::NotJoinPreserving { a, b } => {
            MapViolation::NotJoinPreserving { a, b }
        }
        crate::suplat::MapError::BottomNotPreserved => MapViolation::NotJoinPreserving {
            a: source.lat.bottom(),
            b: source.lat.bottom(),
        },
    })?;
    for m in source.elements() {
        for a in source.quantale.elements() {
            if values[source.act(m, a)] != target.act(values[m], a) {
                return Err(MapViolation::NotEquivariant { m, a });
            }
        }
    }
    Ok(())
}
