//! Image factorization of a module map through its set-theoretic image.
//!
//! The image of a module map is join-closed and a submodule, so it carries
//! the restricted Hilbert structure. The induced surjection and the
//! inclusion are returned, along with two independently computed
//! surjectivity verdicts: the raw one, and the adjointability of the
//! inclusion. For epimorphisms these agree; for non-epic maps the
//! adjointability test can return true on its own, so neither verdict is
//! derived from the other.

use std::collections::HashMap;
use std::sync::Arc;

use super::{check_module_map, star_adjoint, HilbertModule, QModule};

#[derive(Debug, Clone)]
pub struct ImageFactorization {
    /// `f(M)` with the restricted structure.
    pub image: Arc<HilbertModule>,
    /// Index of each image element in the codomain.
    pub embed: Vec<usize>,
    /// The induced surjection `M -> f(M)`.
    pub fbar: Vec<usize>,
    /// The inclusion `f(M) -> N` as a value table.
    pub fhat: Vec<usize>,
    /// Raw surjectivity of `f`.
    pub surjective: bool,
    /// Whether the inclusion has a star-adjoint.
    pub fhat_adjointable: bool,
    /// The adjoint of `fbar`, when `f` itself is adjointable.
    pub fbar_star: Option<Vec<usize>>,
}

pub fn image_factorization(
    source: &Arc<HilbertModule>,
    target: &Arc<HilbertModule>,
    f: &[usize],
) -> ImageFactorization {
    assert!(
        check_module_map(source.module(), target.module(), f).is_ok(),
        "image factorization expects a module map"
    );
    let mut embed: Vec<usize> = f.to_vec();
    embed.sort_unstable();
    embed.dedup();
    let (lat, embed) = target.lat().from_closed_subset(&embed);
    let back: HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let k = lat.n();
    let q = target.quantale().clone();
    let na = q.n();
    let mut act = vec![0; k * na];
    let mut ip = vec![0; k * k];
    for i in 0..k {
        for a in 0..na {
            act[i * na + a] = back[&target.act(embed[i], a)];
        }
        for j in 0..k {
            ip[i * k + j] = target.ip(embed[i], embed[j]);
        }
    }
    let module = QModule::validate(q, Arc::new(lat), act, target.side())
        .expect("the image of a module map is a submodule");
    let image = Arc::new(
        HilbertModule::validate(module, ip)
            .expect("restricted inner product satisfies the pre-Hilbert laws"),
    );
    let fbar: Vec<usize> = f.iter().map(|&y| back[&y]).collect();
    let fhat: Vec<usize> = embed.clone();
    let surjective = embed.len() == target.n();
    let fhat_adjointable = star_adjoint(&image, target, &fhat).is_ok();
    let fbar_star = star_adjoint(source, &image, &fbar).ok().map(|p| p.f_star);
    ImageFactorization {
        image,
        embed,
        fbar,
        fhat,
        surjective,
        fhat_adjointable,
        fbar_star,
    }
}
