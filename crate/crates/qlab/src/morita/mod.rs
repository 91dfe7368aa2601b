//! Morita machinery: imprimitivity bimodules, conjugates, canonical
//! witnesses, centers, center transport and brute-force equivalence search.
//!
//! An imprimitivity `A`-`B` bimodule is a full m-regular right Hilbert
//! `A`-`B` bimodule which is also a full m-regular left Hilbert `A`-module,
//! linked by `<x,y>_A * z = x <> <y,z>_B` and
//! `<x <> b, y>_A = <x, y <> b*>_A`. The existence of such a bimodule is
//! strong Morita equivalence; a witness additionally carries the conjugate
//! bimodule and the two interior-tensor isomorphisms
//! `X (x)_B X~ = A` and `X~ (x)_A X = B`.

mod center;
mod search;

pub use center::{
    center, center_adjointable_route, center_bimodule_route, center_transport,
    commutative_morita_iso, Center, CenterTransport, TransportError,
};
pub use search::{
    morita_search, CarrierStats, ExhaustionCertificate, SearchError, SearchOutcome,
};

use std::sync::Arc;

use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::hilbmod::{
    compact_space, power_module, HilbertLevel, HilbertModule, QModule, Side,
};
use crate::quantale::{endo_quantales, matrix_quantale, EndoQuantales, InvQuantale, MatrixQuantale};
use crate::suplat::{Duality, SupLattice};
use crate::tensor::{
    find_bimodule_iso, interior_tensor, regular_bimodule, with_left_action, HilbertBimodule,
};

/// One checked law in an imprimitivity certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub law: &'static str,
    pub pass: bool,
    pub witness: Option<String>,
}

impl LawCheck {
    fn pass(law: &'static str) -> LawCheck {
        LawCheck {
            law,
            pass: true,
            witness: None,
        }
    }

    fn fail(law: &'static str, witness: String) -> LawCheck {
        LawCheck {
            law,
            pass: false,
            witness: Some(witness),
        }
    }
}

/// A bimodule together with the verified imprimitivity certificate.
#[derive(Debug, Clone)]
pub struct ImprimitivityBimodule {
    pub bimodule: Arc<HilbertBimodule>,
    pub certificate: Vec<LawCheck>,
}

#[derive(Debug, Clone, Error)]
#[error("imprimitivity verification failed: {failed} of {total} laws")]
pub struct ImprimitivityFailure {
    pub certificate: Vec<LawCheck>,
    pub failed: usize,
    pub total: usize,
}

/// Exhaustively checks every imprimitivity law, recording pass/fail and a
/// witness for each.
pub fn verify_imprimitivity(
    x: &Arc<HilbertBimodule>,
) -> Result<ImprimitivityBimodule, ImprimitivityFailure> {
    let mut cert = Vec::new();
    let carrier = x.carrier();
    let a = x.left_quantale();
    let b = x.right_quantale();

    push_flag(
        &mut cert,
        "right.hilbert",
        carrier.level() >= HilbertLevel::Hilbert,
        || format!("level {}", carrier.level().as_str()),
    );
    push_flag(&mut cert, "right.m_regular", carrier.is_m_regular(), || {
        format!("{:?}", carrier.flags())
    });
    push_flag(&mut cert, "right.full", carrier.is_full(), || {
        format!("non-decomposable scalar {:?}", carrier.full_witness())
    });
    push_flag(
        &mut cert,
        "left.m_regular",
        x.left_module().is_m_regular(),
        || format!("{:?}", x.left_module().flags()),
    );

    let left_hilbert = x.left_hilbert();
    match &left_hilbert {
        None => cert.push(LawCheck::fail(
            "left.hilbert",
            "left inner product missing or invalid".into(),
        )),
        Some(h) => {
            push_flag(
                &mut cert,
                "left.hilbert",
                h.level() >= HilbertLevel::Hilbert,
                || format!("level {}", h.level().as_str()),
            );
            push_flag(&mut cert, "left.full", h.is_full(), || {
                format!("non-decomposable scalar {:?}", h.full_witness())
            });
        }
    }

    if let Some(lip) = x.left_ip_table() {
        let n = x.n();
        let lp = |p: usize, q: usize| lip[p * n + q];
        // <x,y>_A * z = x <> <y,z>_B
        let mut link = LawCheck::pass("link.associativity");
        'link: for xx in x.elements() {
            for yy in x.elements() {
                for zz in x.elements() {
                    let lhs = x.left_act(lp(xx, yy), zz);
                    let rhs = x.right_act(xx, x.right_ip(yy, zz));
                    if lhs != rhs {
                        link = LawCheck::fail(
                            "link.associativity",
                            format!("x={xx}, y={yy}, z={zz}"),
                        );
                        break 'link;
                    }
                }
            }
        }
        cert.push(link);
        // <x <> b, y>_A = <x, y <> b*>_A
        let mut shift = LawCheck::pass("link.right_shift");
        'shift: for xx in x.elements() {
            for yy in x.elements() {
                for bb in b.elements() {
                    let lhs = lp(x.right_act(xx, bb), yy);
                    let rhs = lp(xx, x.right_act(yy, b.star(bb)));
                    if lhs != rhs {
                        shift =
                            LawCheck::fail("link.right_shift", format!("x={xx}, y={yy}, b={bb}"));
                        break 'shift;
                    }
                }
            }
        }
        cert.push(shift);
        // mirrored compatibility of the left product with the left action,
        // beyond what the left Hilbert validation already covers:
        // <a * x, y>_A = a . <x,y>_A is condition (1L), checked there.
        let _ = a;
    }

    let failed = cert.iter().filter(|c| !c.pass).count();
    if failed == 0 {
        Ok(ImprimitivityBimodule {
            bimodule: x.clone(),
            certificate: cert,
        })
    } else {
        let total = cert.len();
        Err(ImprimitivityFailure {
            certificate: cert,
            failed,
            total,
        })
    }
}

fn push_flag(
    cert: &mut Vec<LawCheck>,
    law: &'static str,
    pass: bool,
    witness: impl FnOnce() -> String,
) {
    if pass {
        cert.push(LawCheck::pass(law));
    } else {
        cert.push(LawCheck::fail(law, witness()));
    }
}

/// The conjugate of an `A`-`B` imprimitivity bimodule: same carrier
/// lattice, left `B`-action `b *~ x = x <> b*`, right `A`-action
/// `x <>~ a = a* * x`, inner products swapped sides.
///
/// The construction is validated per instance, not trusted.
pub fn conjugate(x: &ImprimitivityBimodule) -> Result<Arc<HilbertBimodule>, ImprimitivityFailure> {
    let bim = &x.bimodule;
    let a = bim.left_quantale().clone();
    let b = bim.right_quantale().clone();
    let n = bim.n();
    let left_ip = bim
        .left_ip_table()
        .expect("imprimitivity bimodules carry a left inner product");

    // carrier: right Hilbert A-module with x <> a = a* * x, <x,y> = <x,y>_A
    let mut act = vec![0; n * a.n()];
    for e in 0..n {
        for s in a.elements() {
            act[e * a.n() + s] = bim.left_act(a.star(s), e);
        }
    }
    let module = QModule::validate(a.clone(), bim.carrier().lat().clone(), act, Side::Right)
        .map_err(|errs| conjugate_failure(&errs))?;
    let carrier = HilbertModule::validate(module, left_ip.to_vec())
        .map_err(|errs| conjugate_failure(&errs))?;

    // left B-action b * x = x <> b*; left inner product = right product of X
    let mut left_act = vec![0; n * b.n()];
    for e in 0..n {
        for s in b.elements() {
            left_act[e * b.n() + s] = bim.right_act(e, b.star(s));
        }
    }
    let mut right_ip = vec![0; n * n];
    for p in 0..n {
        for q in 0..n {
            right_ip[p * n + q] = bim.right_ip(p, q);
        }
    }
    HilbertBimodule::validate(b, Arc::new(carrier), left_act, Some(right_ip))
        .map(Arc::new)
        .map_err(|errs| ImprimitivityFailure {
            certificate: errs
                .iter()
                .map(|e| LawCheck::fail("conjugate.bimodule", e.to_string()))
                .collect(),
            failed: errs.len(),
            total: errs.len(),
        })
}

fn conjugate_failure<E: std::fmt::Display>(errs: &[E]) -> ImprimitivityFailure {
    ImprimitivityFailure {
        certificate: errs
            .iter()
            .map(|e| LawCheck::fail("conjugate.carrier", e.to_string()))
            .collect(),
        failed: errs.len(),
        total: errs.len(),
    }
}

/// A full Morita witness: the imprimitivity bimodule, its conjugate, and
/// the two verified interior-tensor isomorphisms.
#[derive(Debug, Clone)]
pub struct MoritaWitness {
    pub x: ImprimitivityBimodule,
    pub x_conjugate: ImprimitivityBimodule,
    /// `X (x)_B X~` as an `A`-`A` bimodule, with its iso onto `A`.
    pub tensor_onto_left: Arc<HilbertBimodule>,
    pub iso_onto_left: Vec<usize>,
    /// `X~ (x)_A X` as a `B`-`B` bimodule, with its iso onto `B`.
    pub tensor_onto_right: Arc<HilbertBimodule>,
    pub iso_onto_right: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("imprimitivity laws fail: {0}")]
    Laws(#[from] ImprimitivityFailure),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("verified imprimitivity bimodule but no tensor isomorphism onto {side}; this contradicts the linked-tensor theorem")]
    MissingIso { side: &'static str },
}

/// Builds the conjugate and both tensor isomorphisms from a verified
/// imprimitivity bimodule.
pub fn witness_from_imprimitivity(
    x: ImprimitivityBimodule,
    budget: &Budget,
) -> Result<MoritaWitness, WitnessError> {
    let bim = x.bimodule.clone();
    let a = bim.left_quantale().clone();
    let b = bim.right_quantale().clone();
    let conj = conjugate(&x)?;
    let x_conjugate = verify_imprimitivity(&conj)?;

    // X (x)_B X~ is an A-A bimodule isomorphic to A
    let t_left = interior_tensor(bim.carrier(), &conj, budget)?;
    let tensor_onto_left = with_left_action(&t_left, a.clone(), bim.left_module().act_table())
        .map(Arc::new)
        .map_err(|_| WitnessError::MissingIso { side: "A" })?;
    let iso_onto_left = find_bimodule_iso(&tensor_onto_left, &regular_bimodule(&a))
        .ok_or(WitnessError::MissingIso { side: "A" })?;

    // X~ (x)_A X is a B-B bimodule isomorphic to B
    let t_right = interior_tensor(conj.carrier(), &bim, budget)?;
    let tensor_onto_right = with_left_action(&t_right, b.clone(), conj.left_module().act_table())
        .map(Arc::new)
        .map_err(|_| WitnessError::MissingIso { side: "B" })?;
    let iso_onto_right = find_bimodule_iso(&tensor_onto_right, &regular_bimodule(&b))
        .ok_or(WitnessError::MissingIso { side: "B" })?;

    Ok(MoritaWitness {
        x,
        x_conjugate,
        tensor_onto_left,
        iso_onto_left,
        tensor_onto_right,
        iso_onto_right,
    })
}

/// The column module `A^k` as an `M^k(A)`-`A` imprimitivity bimodule:
/// matrix-vector action on the left, scalar action on the right, inner
/// products `<x,y>_A = v_j x_j* . y_j` and `<x,y>_{M^k(A)} = x y*`.
#[derive(Debug, Clone)]
pub struct MatrixWitness {
    pub matrix: MatrixQuantale,
    pub witness: MoritaWitness,
}

pub fn canonical_matrix_witness(
    a: &Arc<InvQuantale>,
    k: usize,
    budget: &Budget,
) -> Result<MatrixWitness, WitnessError> {
    let matrix = matrix_quantale(a, k, budget)?;
    let power = power_module(a, k, budget)?;
    let carrier = power.module.clone();
    let n = carrier.n();
    let mat = &matrix.quantale;

    // left action: (T * x)_i = v_j T_ij . x_j
    let mut left_act = vec![0; n * mat.n()];
    let mut vector = vec![0; k];
    let mut out = vec![0; k];
    for e in 0..n {
        power.codec.decode_into(e, &mut vector);
        for t in mat.elements() {
            for (i, slot) in out.iter_mut().enumerate() {
                *slot = a
                    .lat()
                    .join_all((0..k).map(|j| a.mult(matrix.entry(t, i, j), vector[j])));
            }
            left_act[e * mat.n() + t] = power.codec.encode(&out);
        }
    }
    // left inner product: outer matrix (x y*)_ij = x_i . y_j*
    let mut left_ip = vec![0; n * n];
    let mut wv = vec![0; k];
    let mut entries = vec![0; k * k];
    for e in 0..n {
        power.codec.decode_into(e, &mut vector);
        for w in 0..n {
            power.codec.decode_into(w, &mut wv);
            for i in 0..k {
                for j in 0..k {
                    entries[i * k + j] = a.mult(vector[i], a.star(wv[j]));
                }
            }
            left_ip[e * n + w] = matrix.codec.encode(&entries);
        }
    }
    let bimodule = HilbertBimodule::validate(mat.clone(), carrier, left_act, Some(left_ip))
        .map_err(|errs| {
            WitnessError::Laws(ImprimitivityFailure {
                certificate: errs
                    .iter()
                    .map(|e| LawCheck::fail("matrix.bimodule", e.to_string()))
                    .collect(),
                failed: errs.len(),
                total: errs.len(),
            })
        })?;
    let verified = verify_imprimitivity(&Arc::new(bimodule))?;
    let witness = witness_from_imprimitivity(verified, budget)?;
    Ok(MatrixWitness { matrix, witness })
}

#[derive(Debug, Error)]
pub enum Hilbert2Error {
    #[error("the duality-induced inner product is not a strict Hilbert 2-module: {0:?}")]
    NotStrict(Vec<String>),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("a duality is required")]
    MissingDuality,
    #[error("Q0(S) does not match K_2(S,S) elementwise")]
    SubquantaleMismatch,
}

/// The witness that `Q0(S)` is Morita equivalent to `2`, for a sup-lattice
/// `S` with a duality: `X = S` with `Q0(S)` acting by application on the
/// left, and the elementwise cross-check `Q0(S) = K_2(S,S)`.
#[derive(Debug, Clone)]
pub struct Hilbert2Witness {
    pub endo: EndoQuantales,
    /// Number of distinct rank-one generators of `K_2(S,S)`.
    pub theta_generator_count: usize,
    pub witness: MoritaWitness,
}

pub fn hilbert2_witness(
    s: &Arc<SupLattice>,
    duality: &Duality,
    budget: &Budget,
) -> Result<Hilbert2Witness, Hilbert2Error> {
    let two = Arc::new(InvQuantale::two());
    // S as a right Hilbert 2-module via the duality
    let n = s.n();
    let mut act = vec![0; n * 2];
    for m in 0..n {
        act[m * 2 + 1] = m;
    }
    let module = QModule::validate(two.clone(), s.clone(), act, Side::Right)
        .map_err(|e| Hilbert2Error::NotStrict(e.iter().map(|x| x.to_string()).collect()))?;
    let mut ip = vec![0; n * n];
    for m in 0..n {
        for p in 0..n {
            ip[m * n + p] = usize::from(!s.leq(p, duality.apply(m)));
        }
    }
    let carrier = HilbertModule::validate(module, ip)
        .map_err(|e| Hilbert2Error::NotStrict(e.iter().map(|x| x.to_string()).collect()))?;
    if carrier.level() < HilbertLevel::Strict {
        return Err(Hilbert2Error::NotStrict(vec![format!(
            "level {}",
            carrier.level().as_str()
        )]));
    }
    let carrier = Arc::new(carrier);

    // Q0(S) and the compact operators K_2(S,S) must agree elementwise
    let endo = endo_quantales(s, Some(duality), budget).map_err(|e| match e {
        crate::quantale::EndoError::Budget(b) => Hilbert2Error::Budget(b),
        crate::quantale::EndoError::MissingDuality => Hilbert2Error::MissingDuality,
    })?;
    let compacts = compact_space(&carrier, &carrier, budget)?;
    let sub_maps: Vec<&Vec<usize>> = endo
        .sub_embedding
        .iter()
        .map(|&q| &endo.maps[q])
        .collect();
    let mut sub_sorted: Vec<Vec<usize>> = sub_maps.iter().map(|m| (*m).clone()).collect();
    sub_sorted.sort();
    if sub_sorted != compacts.elements {
        return Err(Hilbert2Error::SubquantaleMismatch);
    }
    let mut theta_tables: Vec<Vec<usize>> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| compacts.elements[compacts.theta_index(x, y)].clone())
        .collect();
    theta_tables.sort();
    theta_tables.dedup();
    let theta_generator_count = theta_tables.len();

    // left Q0(S)-action by application, left product <x,y> = Theta_{x,y}
    let q0 = endo.sub.clone();
    let mut left_act = vec![0; n * q0.n()];
    for e in 0..n {
        for (qi, &full_index) in endo.sub_embedding.iter().enumerate() {
            left_act[e * q0.n() + qi] = endo.maps[full_index][e];
        }
    }
    let theta_index_in_q0 = |x: usize, y: usize| -> usize {
        let table = &compacts.elements[compacts.theta_index(x, y)];
        endo.sub_embedding
            .iter()
            .position(|&q| &endo.maps[q] == table)
            .expect("rank-one operators lie in Q0(S)")
    };
    let mut left_ip = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            left_ip[x * n + y] = theta_index_in_q0(x, y);
        }
    }
    let bimodule = HilbertBimodule::validate(q0, carrier, left_act, Some(left_ip)).map_err(
        |errs| {
            Hilbert2Error::Witness(WitnessError::Laws(ImprimitivityFailure {
                certificate: errs
                    .iter()
                    .map(|e| LawCheck::fail("hilbert2.bimodule", e.to_string()))
                    .collect(),
                failed: errs.len(),
                total: errs.len(),
            }))
        },
    )?;
    let verified = verify_imprimitivity(&Arc::new(bimodule)).map_err(WitnessError::Laws)?;
    let witness = witness_from_imprimitivity(verified, budget)?;
    Ok(Hilbert2Witness {
        endo,
        theta_generator_count,
        witness,
    })
}

/// Transports a verified imprimitivity `A`-`B` structure to the opposite
/// quantales: `a *_d x = a* * x`, `x <>_d b = x <> b*`, same lattice, and
/// the transposed inner products `<m,n>_d = <n,m>`.
///
/// (Transposition is forced: with the original products the compatibility
/// `a . <m,n> = <a*m, n>` fails over the flipped multiplication.)
pub fn opposite_bimodule(
    x: &ImprimitivityBimodule,
) -> Result<Arc<HilbertBimodule>, Vec<crate::tensor::BimoduleViolation>> {
    let bim = &x.bimodule;
    let a_op = Arc::new(bim.left_quantale().opposite());
    let b_op = Arc::new(bim.right_quantale().opposite());
    let n = bim.n();
    let b = bim.right_quantale();
    let a = bim.left_quantale();

    let mut act = vec![0; n * b.n()];
    for e in 0..n {
        for s in b.elements() {
            act[e * b.n() + s] = bim.right_act(e, b.star(s));
        }
    }
    let module = QModule::validate(
        b_op,
        bim.carrier().lat().clone(),
        act,
        Side::Right,
    )
    .map_err(|_| Vec::new())?;
    let mut rip = vec![0; n * n];
    for p in 0..n {
        for q in 0..n {
            rip[p * n + q] = bim.right_ip(q, p);
        }
    }
    let carrier = HilbertModule::validate(module, rip).map_err(|_| Vec::new())?;
    let mut left_act = vec![0; n * a.n()];
    for e in 0..n {
        for s in a.elements() {
            left_act[e * a.n() + s] = bim.left_act(a.star(s), e);
        }
    }
    let left_ip = bim.left_ip_table().map(|t| {
        let mut out = vec![0; n * n];
        for p in 0..n {
            for q in 0..n {
                out[p * n + q] = t[q * n + p];
            }
        }
        out
    });
    HilbertBimodule::validate(a_op, Arc::new(carrier), left_act, left_ip).map(Arc::new)
}
