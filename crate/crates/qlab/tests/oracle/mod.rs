//! Independent brute-force oracle for the interior tensor product.
//!
//! Elements are raw subsets of the simple-tensor grid (formal finite joins
//! of pairs); the pre-inner product is evaluated pairwise, and the Hilbert
//! quotient is taken by grouping subsets with identical value rows. This
//! path shares no code with the function-representation construction it
//! checks, beyond the defining formula of the simple-tensor product.

use std::collections::HashMap;
use std::sync::Arc;

use qlab::hilbmod::{HilbertModule, QModule};
use qlab::suplat::{IsoSpec, SupLattice};
use qlab::tensor::HilbertBimodule;

/// Builds the interior tensor by the free-joins construction.
pub fn free_tensor(m: &Arc<HilbertModule>, n: &Arc<HilbertBimodule>) -> Arc<HilbertModule> {
    let b = n.right_quantale().clone();
    let nm = m.n();
    let nn = n.n();
    let grid = nm * nn;
    assert!(grid <= 16, "oracle is sized for |M|.|N| <= 16");
    let pair = |bit: usize| (bit / nn, bit % nn);

    // pre-inner product of two simple tensors
    let simple_ip = |s: usize, t: usize| -> usize {
        let (ms, ns) = pair(s);
        let (mt, nt) = pair(t);
        n.right_ip(ns, n.left_act(m.ip(ms, mt), nt))
    };
    // value row of a generator: <s, t> for every simple t
    let generator_rows: Vec<Vec<usize>> = (0..grid)
        .map(|s| (0..grid).map(|t| simple_ip(s, t)).collect())
        .collect();

    // rows of all subsets by lowest-bit dynamic programming
    let total = 1usize << grid;
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(total);
    rows.push(vec![b.bottom(); grid]);
    for subset in 1..total {
        let low = subset.trailing_zeros() as usize;
        let rest = subset & (subset - 1);
        let row: Vec<usize> = rows[rest]
            .iter()
            .zip(&generator_rows[low])
            .map(|(&x, &y)| b.join(x, y))
            .collect();
        rows.push(row);
    }

    // quotient classes: identical rows; representative = union of members
    let mut class_of_row: HashMap<&[usize], usize> = HashMap::new();
    let mut class_rows: Vec<Vec<usize>> = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    let mut sorted_rows: Vec<(&Vec<usize>, usize)> = rows.iter().zip(0..total).collect();
    sorted_rows.sort();
    for (row, subset) in sorted_rows {
        match class_of_row.get(row.as_slice()) {
            Some(&c) => reps[c] |= subset,
            None => {
                class_of_row.insert(row.as_slice(), class_rows.len());
                class_rows.push(row.clone());
                reps.push(subset);
            }
        }
    }
    let k = class_rows.len();
    let class_of = |subset: usize| class_of_row[rows[subset].as_slice()];

    let mut join = vec![0usize; k * k];
    for i in 0..k {
        for j in 0..k {
            join[i * k + j] = class_of(reps[i] | reps[j]);
        }
    }
    let lat = Arc::new(SupLattice::validate(k, join).expect("oracle join table"));

    // action: act elementwise on the representative subset, then classify
    let nb = b.n();
    let mut act = vec![0usize; k * nb];
    for i in 0..k {
        for s in 0..nb {
            let mut moved = 0usize;
            let mut rest = reps[i];
            while rest != 0 {
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let (mm, nnn) = pair(bit);
                moved |= 1 << (mm * nn + n.right_act(nnn, s));
            }
            act[i * nb + s] = class_of(moved);
        }
    }
    // inner product: pairwise over the representative subsets
    let mut ip = vec![0usize; k * k];
    for i in 0..k {
        for j in 0..k {
            let mut acc = b.bottom();
            let mut left = reps[i];
            while left != 0 {
                let s = left.trailing_zeros() as usize;
                left &= left - 1;
                let mut right = reps[j];
                while right != 0 {
                    let t = right.trailing_zeros() as usize;
                    right &= right - 1;
                    acc = b.join(acc, simple_ip(s, t));
                }
            }
            ip[i * k + j] = acc;
        }
    }
    let module = QModule::validate(b, lat, act, qlab::hilbmod::Side::Right)
        .expect("oracle action satisfies the module laws");
    Arc::new(HilbertModule::validate(module, ip).expect("oracle inner product"))
}

/// Unitary module isomorphism: bijection preserving joins, the action and
/// the inner product.
pub fn unitary_module_iso(a: &HilbertModule, b: &HilbertModule) -> Option<Vec<usize>> {
    if a.n() != b.n() || a.quantale() != b.quantale() {
        return None;
    }
    let n = a.n();
    let table = |m: &HilbertModule, f: &dyn Fn(&HilbertModule, usize, usize) -> usize| {
        let mut t = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                t[x * n + y] = f(m, x, y);
            }
        }
        t
    };
    let join = |m: &HilbertModule, x: usize, y: usize| m.lat().join(x, y);
    let ip = |m: &HilbertModule, x: usize, y: usize| m.ip(x, y);
    let na = a.quantale().n();
    let act = |m: &HilbertModule| {
        let mut t = vec![0; n * na];
        for x in 0..n {
            for s in 0..na {
                t[x * na + s] = m.act(x, s);
            }
        }
        t
    };
    let spec = IsoSpec {
        n,
        inner_binary: vec![(table(a, &join), table(b, &join))],
        keyed: vec![(na, act(a), act(b))],
        valued: vec![(table(a, &ip), table(b, &ip))],
        ..Default::default()
    };
    spec.search()
}
