/*!
Seeded random corpora of small categories, functors and strict opindexed
categories.

Categories come from rejection sampling: random objects, random non-identity
morphisms and a random composition table, kept only if every axiom holds.
Nothing is repaired.
*/

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::displayed::is_factorisation_lifting;
use crate::fibration::{choose_cleavage, is_opfibration, StrictOpIndexedCat};
use crate::fincat::{all_functors, validate_category, FinCategory, FinFunctor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    Category,
    Functor,
    Opfibration,
    SplitOpfibration,
    Conduche,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusSpec {
    pub max_objects: usize,
    /// Including identities.
    pub max_morphisms: usize,
    pub count: usize,
    pub shape: Shape,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec { max_objects: 3, max_morphisms: 6, count: 20, shape: Shape::Category }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One draw; `None` when the random table is not a category.
pub fn random_category<R: Rng>(rng: &mut R, max_objects: usize, max_morphisms: usize) -> Option<FinCategory> {
    let n = rng.gen_range(1..=max_objects.max(1));
    let extra = rng.gen_range(0..=max_morphisms.saturating_sub(n));
    let obj_names: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
    let mut mor_names: Vec<String> = (0..n).map(|i| format!("id_o{i}")).collect();
    let mut dom: Vec<usize> = (0..n).collect();
    let mut cod: Vec<usize> = (0..n).collect();
    for k in 0..extra {
        mor_names.push(format!("m{k}"));
        dom.push(rng.gen_range(0..n));
        cod.push(rng.gen_range(0..n));
    }
    let m = mor_names.len();
    let mut table = vec![None; m * m];
    for f in 0..m {
        for g in 0..m {
            if cod[f] != dom[g] {
                continue;
            }
            if f < n {
                table[f * m + g] = Some(g);
            } else if g < n {
                table[f * m + g] = Some(f);
            } else {
                let options: Vec<usize> = (0..m).filter(|&h| dom[h] == dom[f] && cod[h] == cod[g]).collect();
                table[f * m + g] = Some(*options.choose(rng)?);
            }
        }
    }
    let c = FinCategory::from_parts(obj_names, mor_names, dom, cod, (0..n).collect(), |f, g| table[f * m + g]);
    validate_category(&c).is_empty().then_some(c)
}

const ATTEMPTS: usize = 200_000;

pub fn gen_categories(seed: u64, max_objects: usize, max_morphisms: usize, count: usize) -> Vec<FinCategory> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for _ in 0..ATTEMPTS {
        if out.len() == count {
            break;
        }
        if let Some(c) = random_category(&mut r, max_objects, max_morphisms) {
            out.push(c);
        }
    }
    out
}

fn random_functor<R: Rng>(r: &mut R, a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> Option<FinFunctor> {
    all_functors(a, b, 256).choose(r).cloned()
}

/// Functors between random categories, filtered by `spec.shape`.
pub fn gen_functors(seed: u64, spec: &CorpusSpec) -> Vec<FinFunctor> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for _ in 0..ATTEMPTS {
        if out.len() == spec.count {
            break;
        }
        let Some(a) = random_category(&mut r, spec.max_objects, spec.max_morphisms) else { continue };
        let Some(b) = random_category(&mut r, spec.max_objects, spec.max_morphisms) else { continue };
        let Some(f) = random_functor(&mut r, &Arc::new(a), &Arc::new(b)) else { continue };
        let keep = match spec.shape {
            Shape::Category | Shape::Functor => true,
            Shape::Opfibration => is_opfibration(&f).holds,
            Shape::SplitOpfibration => choose_cleavage(&f, true).is_ok_and(|c| c.split),
            Shape::Conduche => is_factorisation_lifting(&f),
        };
        if keep {
            out.push(f);
        }
    }
    out
}

/// Strict opindexed categories over random bases with random fibres.
pub fn gen_opindexed(
    seed: u64,
    count: usize,
    base_objects: usize,
    base_morphisms: usize,
    fibre_objects: usize,
) -> Vec<StrictOpIndexedCat> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for _ in 0..ATTEMPTS {
        if out.len() == count {
            break;
        }
        let Some(base) = random_category(&mut r, base_objects, base_morphisms) else { continue };
        let base = Arc::new(base);
        let mut fibres = Vec::new();
        for _ in base.objects() {
            let c = (0..64).find_map(|_| random_category(&mut r, fibre_objects, fibre_objects + 2));
            fibres.push(Arc::new(c.unwrap_or_else(FinCategory::terminal)));
        }
        let mut reindex = Vec::new();
        let mut ok = true;
        for f in base.morphisms() {
            let (s, t) = (&fibres[base.dom(f)], &fibres[base.cod(f)]);
            if base.is_identity(f) {
                reindex.push(FinFunctor::identity(s.clone()));
            } else if let Some(func) = random_functor(&mut r, s, t) {
                reindex.push(func);
            } else {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let ix = StrictOpIndexedCat { base, fibres, reindex };
        if ix.validate().is_empty() {
            out.push(ix);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_valid_and_seeded() {
        let cs = gen_categories(7, 3, 6, 30);
        assert_eq!(cs.len(), 30);
        assert!(cs.iter().all(|c| validate_category(c).is_empty()));
        assert_eq!(cs, gen_categories(7, 3, 6, 30));
        assert!(cs.iter().any(|c| c.num_morphisms() > c.num_objects()));
    }

    #[test]
    fn opindexed_corpus() {
        let ix = gen_opindexed(1, 20, 3, 8, 3);
        assert_eq!(ix.len(), 20);
        assert!(ix.iter().any(|i| i.base.num_morphisms() > i.base.num_objects()));
    }

    #[test]
    fn shaped_functors() {
        let spec = CorpusSpec { shape: Shape::Opfibration, count: 10, ..CorpusSpec::default() };
        let fs = gen_functors(3, &spec);
        assert_eq!(fs.len(), 10);
        assert!(fs.iter().all(|f| is_opfibration(f).holds));
    }
}
