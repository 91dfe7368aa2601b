//! Hilbert quotients, module congruences, coequalizers, finite limits and
//! kernel-pair presentations.

use std::collections::HashMap;
use std::sync::Arc;

use crate::budget::{Budget, BudgetExceeded};

use super::{
    biproduct, check_module_map, omega_map, Biproduct, HilbertModule, ModuleViolation, QModule,
};

/// The Hilbert quotient `M_{R_H}` of a pre-Hilbert module, where `R_H`
/// relates elements with identical inner-product rows.
///
/// The carrier consists of the maximal representatives `j(m) = v{ n |
/// (m,n) in R_H }`; join, action and inner product are induced through
/// them.
#[derive(Debug, Clone)]
pub struct HilbertQuotient {
    pub module: Arc<HilbertModule>,
    /// `j[m]` is the quotient index of the class of `m`.
    pub j: Vec<usize>,
    /// `reps[c]` is the maximal representative of class `c` in the source.
    pub reps: Vec<usize>,
}

pub fn hilbert_quotient(source: &HilbertModule) -> HilbertQuotient {
    let nm = source.n();
    // class key: the inner-product row <m, ->
    let row = |m: usize| -> Vec<usize> { source.elements().map(|p| source.ip(m, p)).collect() };
    let mut class_of_row: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for m in source.elements() {
        class_of_row.entry(row(m)).or_default().push(m);
    }
    // maximal representative of each class is the join of its members
    let mut rep_of = vec![0usize; nm];
    for members in class_of_row.values() {
        let join = source.lat().join_all(members.iter().copied());
        for &m in members {
            rep_of[m] = join;
        }
        debug_assert_eq!(rep_of[join], join, "class join stays in its class");
    }
    let mut reps: Vec<usize> = rep_of.clone();
    reps.sort_unstable();
    reps.dedup();
    let class_index: HashMap<usize, usize> =
        reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let j: Vec<usize> = (0..nm).map(|m| class_index[&rep_of[m]]).collect();

    let k = reps.len();
    let mut join = vec![0; k * k];
    for a in 0..k {
        for b in 0..k {
            join[a * k + b] = class_index[&rep_of[source.lat().join(reps[a], reps[b])]];
        }
    }
    let lat = Arc::new(
        crate::suplat::SupLattice::validate(k, join).expect("quotient join table is a lattice"),
    );
    let q = source.quantale().clone();
    let na = q.n();
    let mut act = vec![0; k * na];
    let mut ip = vec![0; k * k];
    for a in 0..k {
        for s in 0..na {
            act[a * na + s] = class_index[&rep_of[source.act(reps[a], s)]];
        }
        for b in 0..k {
            ip[a * k + b] = source.ip(reps[a], reps[b]);
        }
    }
    let module = QModule::validate(q, lat, act, source.side())
        .expect("quotient action satisfies the module laws");
    let module = HilbertModule::validate(module, ip)
        .expect("quotient inner product satisfies the pre-Hilbert laws");
    HilbertQuotient {
        module: Arc::new(module),
        j,
        reps,
    }
}

/// Smallest module congruence containing the given pairs: the closure under
/// symmetry, transitivity, joining with a fixed element and acting by a
/// fixed scalar. Returns the class partition as a representative table.
fn module_congruence(module: &QModule, pairs: &[(usize, usize)]) -> Vec<usize> {
    let n = module.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    let mut worklist: Vec<(usize, usize)> = pairs.to_vec();
    while let Some((a, b)) = worklist.pop() {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        if ra == rb {
            continue;
        }
        parent[ra.max(rb)] = ra.min(rb);
        // close under joins with every element and under the action
        for c in module.elements() {
            let ja = module.lat().join(a, c);
            let jb = module.lat().join(b, c);
            if find(&mut parent, ja) != find(&mut parent, jb) {
                worklist.push((ja, jb));
            }
        }
        for r in module.quantale().elements() {
            let aa = module.act(a, r);
            let ab = module.act(b, r);
            if find(&mut parent, aa) != find(&mut parent, ab) {
                worklist.push((aa, ab));
            }
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

/// A coequalizer presented by maximal representatives.
#[derive(Debug, Clone)]
pub struct Coequalizer {
    pub module: Arc<QModule>,
    /// Canonical surjection, source index -> quotient index.
    pub q: Vec<usize>,
    /// Maximal representative of each quotient class in the source.
    pub reps: Vec<usize>,
    /// Present when the source carried an inner product: the quotient with
    /// the pushed-down product, re-quotiented to Hilbert level, and the
    /// composite surjection.
    pub hilbert: Option<(Arc<HilbertModule>, Vec<usize>)>,
}

/// Coequalizer of a parallel pair `u, v : P -> M` of module maps: the
/// quotient of `M` by the smallest module congruence relating `u(x)` with
/// `v(x)` for every `x`.
pub fn coequalizer(
    p: &QModule,
    m: &QModule,
    u: &[usize],
    v: &[usize],
    inner: Option<&HilbertModule>,
) -> Result<Coequalizer, Vec<ModuleViolation>> {
    check_module_map(p, m, u).map_err(|_| vec![ModuleViolation::Malformed])?;
    check_module_map(p, m, v).map_err(|_| vec![ModuleViolation::Malformed])?;
    let pairs: Vec<(usize, usize)> = p.elements().map(|x| (u[x], v[x])).collect();
    let partition = module_congruence(m, &pairs);

    // classes are join-closed, so each contains its own join
    let n = m.n();
    let mut class_members: HashMap<usize, Vec<usize>> = HashMap::new();
    for (x, &class) in partition.iter().enumerate() {
        class_members.entry(class).or_default().push(x);
    }
    let mut rep_of = vec![0usize; n];
    for members in class_members.values() {
        let join = m.lat().join_all(members.iter().copied());
        debug_assert_eq!(
            partition[join], partition[members[0]],
            "congruence classes are join-closed"
        );
        for &x in members {
            rep_of[x] = join;
        }
    }
    let mut reps: Vec<usize> = rep_of.clone();
    reps.sort_unstable();
    reps.dedup();
    let class_index: HashMap<usize, usize> =
        reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let q_table: Vec<usize> = (0..n).map(|x| class_index[&rep_of[x]]).collect();

    let k = reps.len();
    let mut join = vec![0; k * k];
    for a in 0..k {
        for b in 0..k {
            join[a * k + b] = class_index[&rep_of[m.lat().join(reps[a], reps[b])]];
        }
    }
    let lat = Arc::new(
        crate::suplat::SupLattice::validate(k, join).expect("quotient join table is a lattice"),
    );
    let na = m.quantale().n();
    let mut act = vec![0; k * na];
    for a in 0..k {
        for s in 0..na {
            act[a * na + s] = class_index[&rep_of[m.act(reps[a], s)]];
        }
    }
    let module = Arc::new(
        QModule::validate(m.quantale().clone(), lat, act, m.side())
            .expect("quotient action satisfies the module laws"),
    );

    let hilbert = match inner {
        None => None,
        Some(h) => {
            let mut ip = vec![0; k * k];
            for a in 0..k {
                for b in 0..k {
                    ip[a * k + b] = h.ip(reps[a], reps[b]);
                }
            }
            let pre = HilbertModule::validate(module.as_ref().clone(), ip)?;
            let quotient = hilbert_quotient(&pre);
            let composite: Vec<usize> = (0..n).map(|x| quotient.j[q_table[x]]).collect();
            Some((quotient.module, composite))
        }
    };
    Ok(Coequalizer {
        module,
        q: q_table,
        reps,
        hilbert,
    })
}

/// An arrow of a finite diagram, between object indices.
#[derive(Debug, Clone)]
pub struct DiagramArrow {
    pub source: usize,
    pub target: usize,
    pub values: Vec<usize>,
}

/// A finite diagram of Hilbert modules over one quantale.
#[derive(Debug, Clone)]
pub struct Diagram {
    pub objects: Vec<Arc<HilbertModule>>,
    pub arrows: Vec<DiagramArrow>,
}

/// The limit of a finite diagram: the module of commuting tuples inside the
/// product, with the restricted projections.
#[derive(Debug, Clone)]
pub struct Limit {
    pub module: Arc<HilbertModule>,
    pub product: Biproduct,
    /// Product codes of the commuting tuples, in increasing order.
    pub subset: Vec<usize>,
    /// Restricted projections, limit index -> object element.
    pub projections: Vec<Vec<usize>>,
}

pub fn finite_limit(diagram: &Diagram, budget: &Budget) -> Result<Limit, BudgetExceeded> {
    assert!(!diagram.objects.is_empty());
    let product = biproduct(&diagram.objects, budget)?;
    let arity = diagram.objects.len();
    let mut tuple = vec![0; arity];
    let subset: Vec<usize> = (0..product.codec.len())
        .filter(|&code| {
            product.codec.decode_into(code, &mut tuple);
            diagram
                .arrows
                .iter()
                .all(|arrow| tuple[arrow.target] == arrow.values[tuple[arrow.source]])
        })
        .collect();
    let (lat, embed) = product.module.lat().from_closed_subset(&subset);
    let back: HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let k = lat.n();
    let q = product.module.quantale().clone();
    let na = q.n();
    let mut act = vec![0; k * na];
    let mut ip = vec![0; k * k];
    for i in 0..k {
        for a in 0..na {
            act[i * na + a] = back[&product.module.act(embed[i], a)];
        }
        for j in 0..k {
            ip[i * k + j] = product.module.ip(embed[i], embed[j]);
        }
    }
    let module = QModule::validate(q, Arc::new(lat), act, product.module.side())
        .expect("commuting tuples form a submodule");
    let module = Arc::new(
        HilbertModule::validate(module, ip)
            .expect("restricted inner product satisfies the pre-Hilbert laws"),
    );
    let projections = (0..arity)
        .map(|j| {
            (0..k)
                .map(|i| product.codec.component(embed[i], j))
                .collect()
        })
        .collect();
    Ok(Limit {
        module,
        product,
        subset: embed,
        projections,
    })
}

/// The kernel-pair presentation of a surjective module map `p : P -> M`:
/// the pair module `D = {(x,y) | p(x) = p(y)}`, its essential part, and the
/// two compact arrows `u, v : A^{ess(D)} -> P` obtained by composing the
/// projections with the canonical surjection onto `ess(D)`.
#[derive(Debug, Clone)]
pub struct KernelPairPresentation {
    /// `D` with its restricted structure.
    pub d: Arc<HilbertModule>,
    /// Pair of `P`-elements for each element of `D`.
    pub d_pairs: Vec<(usize, usize)>,
    /// Indices (into `d_pairs`) of the essential part of `D`.
    pub ess: Vec<usize>,
    /// The power `A^{ess(D)}`.
    pub power: Biproduct,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

pub fn kernel_pair_presentation(
    p_source: &Arc<HilbertModule>,
    p_target: &Arc<HilbertModule>,
    p: &[usize],
    budget: &Budget,
) -> Result<KernelPairPresentation, BudgetExceeded> {
    assert!(
        check_module_map(p_source.module(), p_target.module(), p).is_ok(),
        "p must be a module map"
    );
    assert!(
        p_target.elements().all(|m| p.contains(&m)),
        "p must be surjective"
    );
    let square = biproduct(&[p_source.clone(), p_source.clone()], budget)?;
    let mut tuple = vec![0; 2];
    let subset: Vec<usize> = (0..square.codec.len())
        .filter(|&code| {
            square.codec.decode_into(code, &mut tuple);
            p[tuple[0]] == p[tuple[1]]
        })
        .collect();
    let (lat, embed) = square.module.lat().from_closed_subset(&subset);
    let back: HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let k = lat.n();
    let q = p_source.quantale().clone();
    let na = q.n();
    let mut act = vec![0; k * na];
    let mut ip = vec![0; k * k];
    for i in 0..k {
        for a in 0..na {
            act[i * na + a] = back[&square.module.act(embed[i], a)];
        }
        for j in 0..k {
            ip[i * k + j] = square.module.ip(embed[i], embed[j]);
        }
    }
    let d_module = QModule::validate(q.clone(), Arc::new(lat), act, p_source.side())
        .expect("the kernel pair is a submodule");
    let ess = d_module.essential_part();
    let d = Arc::new(
        HilbertModule::validate(d_module, ip)
            .expect("restricted inner product satisfies the pre-Hilbert laws"),
    );
    let d_pairs: Vec<(usize, usize)> = embed
        .iter()
        .map(|&code| {
            (
                square.codec.component(code, 0),
                square.codec.component(code, 1),
            )
        })
        .collect();

    let power = super::power_module(&q, ess.len(), budget)?;
    let firsts: Vec<usize> = ess.iter().map(|&i| d_pairs[i].0).collect();
    let seconds: Vec<usize> = ess.iter().map(|&i| d_pairs[i].1).collect();
    let u = omega_map(&power, p_source, &firsts);
    let v = omega_map(&power, p_source, &seconds);
    Ok(KernelPairPresentation {
        d,
        d_pairs,
        ess,
        power,
        u,
        v,
    })
}
