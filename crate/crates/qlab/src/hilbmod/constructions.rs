//! Biproducts, powers, free modules and the generator/cogenerator maps.

use std::sync::Arc;

use crate::budget::{Budget, BudgetExceeded};
use crate::quantale::InvQuantale;
use crate::suplat::{SupLattice, TupleCodec};

use super::{HilbertModule, QModule, Side};

/// The quantale as a right Hilbert module over itself, `<a,b> = a*.b`.
pub fn regular_right(q: Arc<InvQuantale>) -> HilbertModule {
    let n = q.n();
    let mut act = vec![0; n * n];
    let mut ip = vec![0; n * n];
    for m in 0..n {
        for a in 0..n {
            act[m * n + a] = q.mult(m, a);
            ip[m * n + a] = q.mult(q.star(m), a);
        }
    }
    let module = QModule::validate(q.clone(), q.lat().clone(), act, Side::Right)
        .expect("a quantale is a right module over itself");
    HilbertModule::validate(module, ip).expect("<a,b> = a*.b satisfies the pre-Hilbert laws")
}

/// The quantale as a left Hilbert module over itself, `<a,b> = a.b*`.
pub fn regular_left(q: Arc<InvQuantale>) -> HilbertModule {
    let n = q.n();
    let mut act = vec![0; n * n];
    let mut ip = vec![0; n * n];
    for m in 0..n {
        for a in 0..n {
            act[m * n + a] = q.mult(a, m);
            ip[m * n + a] = q.mult(m, q.star(a));
        }
    }
    let module = QModule::validate(q.clone(), q.lat().clone(), act, Side::Left)
        .expect("a quantale is a left module over itself");
    HilbertModule::validate(module, ip).expect("<a,b> = a.b* satisfies the pre-Hilbert laws")
}

/// A biproduct of Hilbert modules with its injections and projections.
#[derive(Debug, Clone)]
pub struct Biproduct {
    pub module: Arc<HilbertModule>,
    pub codec: TupleCodec,
    pub factors: Vec<Arc<HilbertModule>>,
}

impl Biproduct {
    /// Injection of factor `j`: factor element -> product element.
    pub fn injection(&self, j: usize) -> Vec<usize> {
        let arity = self.factors.len();
        self.factors[j]
            .elements()
            .map(|x| {
                let mut tuple: Vec<usize> = (0..arity)
                    .map(|i| self.factors[i].lat().bottom())
                    .collect();
                tuple[j] = x;
                self.codec.encode(&tuple)
            })
            .collect()
    }

    /// Projection onto factor `j`: product element -> factor element.
    pub fn projection(&self, j: usize) -> Vec<usize> {
        (0..self.codec.len())
            .map(|code| self.codec.component(code, j))
            .collect()
    }
}

/// Cartesian product with componentwise action and inner product
/// `<(m_j),(n_j)> = v_j <m_j, n_j>`.
pub fn biproduct(
    factors: &[Arc<HilbertModule>],
    budget: &Budget,
) -> Result<Biproduct, BudgetExceeded> {
    assert!(!factors.is_empty());
    let q = factors[0].quantale().clone();
    let side = factors[0].side();
    for f in factors {
        assert_eq!(f.quantale(), &q);
        assert_eq!(f.side(), side);
    }
    let lats: Vec<&SupLattice> = factors.iter().map(|f| f.lat().as_ref()).collect();
    let size: usize = lats.iter().map(|l| l.n()).product();
    budget.admit_carrier(size, "biproduct carrier")?;
    let (lat, codec) = SupLattice::product(&lats);
    let n = lat.n();
    let na = q.n();
    let arity = factors.len();
    let mut act = vec![0; n * na];
    let mut ip = vec![0; n * n];
    let mut ta = vec![0; arity];
    let mut tb = vec![0; arity];
    let mut out = vec![0; arity];
    for code in 0..n {
        codec.decode_into(code, &mut ta);
        for a in 0..na {
            for j in 0..arity {
                out[j] = factors[j].act(ta[j], a);
            }
            act[code * na + a] = codec.encode(&out);
        }
        for other in 0..n {
            codec.decode_into(other, &mut tb);
            ip[code * n + other] = q
                .lat()
                .join_all((0..arity).map(|j| factors[j].ip(ta[j], tb[j])));
        }
    }
    let module = QModule::validate(q, Arc::new(lat), act, side)
        .expect("componentwise action satisfies the module laws");
    let module = HilbertModule::validate(module, ip)
        .expect("componentwise inner product satisfies the pre-Hilbert laws");
    Ok(Biproduct {
        module: Arc::new(module),
        codec,
        factors: factors.to_vec(),
    })
}

/// `A^j`: the j-th power of the right regular module.
pub fn power_module(
    q: &Arc<InvQuantale>,
    j: usize,
    budget: &Budget,
) -> Result<Biproduct, BudgetExceeded> {
    let base = Arc::new(regular_right(q.clone()));
    biproduct(&vec![base; j], budget)
}

/// `W_mu : A^J -> M`, `(a_j) |-> v_j m_j <> a_j` for a tuple `mu` in `M^J`.
pub fn omega_map(power: &Biproduct, target: &HilbertModule, mu: &[usize]) -> Vec<usize> {
    let arity = power.codec.arity();
    assert_eq!(mu.len(), arity);
    let mut tuple = vec![0; arity];
    (0..power.codec.len())
        .map(|code| {
            power.codec.decode_into(code, &mut tuple);
            target
                .lat()
                .join_all((0..arity).map(|j| target.act(mu[j], tuple[j])))
        })
        .collect()
}

/// `W_mu* : M -> A^J`, `x |-> (<m_j, x>)_j`.
pub fn omega_star_map(power: &Biproduct, source: &HilbertModule, mu: &[usize]) -> Vec<usize> {
    let arity = power.codec.arity();
    assert_eq!(mu.len(), arity);
    source
        .elements()
        .map(|x| {
            let tuple: Vec<usize> = (0..arity).map(|j| source.ip(mu[j], x)).collect();
            power.codec.encode(&tuple)
        })
        .collect()
}

/// The free module `F(X) = A^X` over a unital quantale, with the insertion
/// of generators `x |-> e_x`.
#[derive(Debug, Clone)]
pub struct FreeModule {
    pub power: Biproduct,
    /// `iota[x]` is the product element with the unit at coordinate `x`.
    pub iota: Vec<usize>,
}

pub fn free_module(
    q: &Arc<InvQuantale>,
    generators: usize,
    budget: &Budget,
) -> Result<FreeModule, BudgetExceeded> {
    let unit = q.unit().expect("free modules require a unital quantale");
    let power = power_module(q, generators, budget)?;
    let iota = (0..generators)
        .map(|x| {
            let mut tuple = vec![q.bottom(); generators];
            tuple[x] = unit;
            power.codec.encode(&tuple)
        })
        .collect();
    Ok(FreeModule { power, iota })
}

impl FreeModule {
    /// The unique module map `g : F(X) -> M` with `g o iota = f`, namely
    /// `W` over the tuple `(f(x))_x`.
    pub fn extension(&self, target: &HilbertModule, f: &[usize]) -> Vec<usize> {
        omega_map(&self.power, target, f)
    }

    /// The adjoint of the extension, `n |-> (<f(x), n>)_x`.
    pub fn extension_adjoint(&self, target: &HilbertModule, f: &[usize]) -> Vec<usize> {
        omega_star_map(&self.power, target, f)
    }
}

/// The generator/cogenerator maps `p : A^M -> M` and `i : M -> A^M`.
#[derive(Debug, Clone)]
pub struct GeneratorMaps {
    pub power: Biproduct,
    /// `p = W` over the tuple of all elements of `M`.
    pub p: Vec<usize>,
    /// `i = W*` over the same tuple.
    pub i: Vec<usize>,
    /// Surjectivity witnesses: `u[n]` is an element of `A^M` with
    /// `p(u[n]) = n`, built from the scalar residuations `m ->_R n`.
    pub u: Vec<usize>,
}

pub fn generator_maps(
    module: &Arc<HilbertModule>,
    budget: &Budget,
) -> Result<GeneratorMaps, BudgetExceeded> {
    let power = power_module(module.quantale(), module.n(), budget)?;
    let mu: Vec<usize> = module.elements().collect();
    let p = omega_map(&power, module, &mu);
    let i = omega_star_map(&power, module, &mu);
    let u = module
        .elements()
        .map(|n| {
            let tuple: Vec<usize> = module
                .elements()
                .map(|m| module.module().residuate_scalar(m, n))
                .collect();
            power.codec.encode(&tuple)
        })
        .collect();
    Ok(GeneratorMaps { power, p, i, u })
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::super::{check_module_map, enumerate_module_maps, HilbertLevel};
    use super::*;

    #[test]
    fn square_of_two_has_four_elements_and_orthogonal_units() {
        let two = two_module();
        let b = biproduct(&[two.clone(), two.clone()], &Budget::default()).unwrap();
        assert_eq!(b.module.n(), 4);
        let e10 = b.codec.encode(&[1, 0]);
        let e01 = b.codec.encode(&[0, 1]);
        assert_eq!(b.module.ip(e10, e01), 0);
        assert_eq!(b.module.level(), HilbertLevel::Strict);
        assert!(b.module.is_m_regular());
    }

    #[test]
    fn projections_and_injections_compose_to_identity() {
        let two = two_module();
        let d = diamond_module();
        let b = biproduct(&[two.clone(), d.clone()], &Budget::default()).unwrap();
        for (j, factor) in b.factors.iter().enumerate() {
            let inj = b.injection(j);
            let proj = b.projection(j);
            for x in factor.elements() {
                assert_eq!(proj[inj[x]], x);
            }
        }
    }

    #[test]
    fn free_module_extensions_are_unique_and_exhaustive() {
        // F(2-element set) over 2 is 2^2; the four set-maps {x,y} -> 2 have
        // pairwise distinct extensions, and these exhaust the module maps g
        // with g o iota = f.
        let two_q = Arc::new(crate::quantale::InvQuantale::two());
        let free = free_module(&two_q, 2, &Budget::default()).unwrap();
        let target = two_module();
        let budget = Budget::default();
        let all_maps = enumerate_module_maps(free.power.module.module(), target.module(), &budget)
            .unwrap();
        let mut extensions = Vec::new();
        for f in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let g = free.extension(&target, &f);
            assert!(check_module_map(free.power.module.module(), target.module(), &g).is_ok());
            for (x, &fx) in f.iter().enumerate() {
                assert_eq!(g[free.iota[x]], fx);
            }
            let competing: Vec<&Vec<usize>> = all_maps
                .iter()
                .filter(|g| f.iter().enumerate().all(|(x, &fx)| g[free.iota[x]] == fx))
                .collect();
            assert_eq!(competing, vec![&g], "extension is unique");
            extensions.push(g);
        }
        extensions.dedup();
        assert_eq!(extensions.len(), 4);
    }

    #[test]
    fn free_extension_adjoint_matches_formula() {
        let two_q = Arc::new(crate::quantale::InvQuantale::two());
        let free = free_module(&two_q, 2, &Budget::default()).unwrap();
        let target = diamond_module();
        let f = [1usize, 2];
        let g = free.extension(&target, &f);
        let h = free.extension_adjoint(&target, &f);
        let pair = super::super::star_adjoint(&free.power.module, &target, &g).unwrap();
        assert_eq!(pair.f_star, h);
    }

    #[test]
    fn generator_maps_on_two() {
        let two = two_module();
        let gen = generator_maps(&two, &Budget::default()).unwrap();
        // u_1 = (1 ->_R 1 indexed over m in {0,1}) = (top, 1): p(u_1) = 1
        let u1 = gen.u[1];
        assert_eq!(gen.power.codec.decode(u1), vec![1, 1]);
        assert_eq!(gen.p[u1], 1);
        // p is surjective via u; i is injective
        for n in two.elements() {
            assert_eq!(gen.p[gen.u[n]], n);
        }
        let mut images: Vec<usize> = two.elements().map(|m| gen.i[m]).collect();
        images.dedup();
        assert_eq!(images.len(), two.n());
    }

    #[test]
    fn cogenerator_injective_on_diamond() {
        let d = diamond_module();
        let gen = generator_maps(&d, &Budget::default()).unwrap();
        for m in d.elements() {
            for n in d.elements() {
                if m != n {
                    assert_ne!(gen.i[m], gen.i[n]);
                }
            }
        }
        // p o i is a module endomap of M (composition typing only)
        let composed: Vec<usize> = d.elements().map(|m| gen.p[gen.i[m]]).collect();
        assert!(check_module_map(d.module(), d.module(), &composed).is_ok());
    }

    #[test]
    fn product_of_m_regular_modules_is_m_regular() {
        let two = two_module();
        let b = biproduct(&[two.clone(), two.clone()], &Budget::default()).unwrap();
        assert!(two.is_m_regular());
        assert!(b.module.is_m_regular());
    }
}
