//! Exhaustive and seeded random generators for every model kind.
//!
//! Random generators draw from a caller-supplied RNG; [`iteration_rng`] gives
//! every iteration of a sweep its own independent stream so results do not
//! depend on scheduling.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bisim::ModelMap;
use crate::gtf::{GtfFrame, GtfModel};
use crate::gtff::GtffModel;
use crate::gtn::GtnModel;
use crate::semantics::Valuation;
use crate::topology::{close_under_unions, GenTopology};
use crate::worldset::{minimal_members, WorldSet};

/// The RNG for iteration `index` of a run seeded with `seed`.
pub fn iteration_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Size limits for random models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub min_worlds: usize,
    pub max_worlds: usize,
    /// Largest number of random base sets closed under unions.
    pub max_base: usize,
    /// Topologies with more opens are redrawn.
    pub max_opens: usize,
    /// Largest orphan family (and largest `N_w` in GTFF-models).
    pub max_family: usize,
    /// Whether orphan families may contain `∅`.
    pub allow_empty_member: bool,
    pub vars: Vec<String>,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            min_worlds: 1,
            max_worlds: 5,
            max_base: 3,
            max_opens: 16,
            max_family: 3,
            allow_empty_member: true,
            vars: vec!["p".into(), "q".into()],
        }
    }
}

impl Shape {
    pub fn with_worlds(mut self, min: usize, max: usize) -> Self {
        self.min_worlds = min;
        self.max_worlds = max;
        self
    }

    pub fn with_vars(mut self, vars: &[&str]) -> Self {
        self.vars = vars.iter().map(|v| v.to_string()).collect();
        self
    }

    pub fn consistent(mut self) -> Self {
        self.allow_empty_member = false;
        self
    }

    fn worlds<R: Rng>(&self, rng: &mut R) -> usize {
        rng.gen_range(self.min_worlds.max(1)..=self.max_worlds.max(self.min_worlds.max(1)))
    }
}

pub fn random_set<R: Rng>(rng: &mut R, n: usize) -> WorldSet {
    let bits = if n == 64 {
        rng.gen::<u64>()
    } else {
        rng.gen::<u64>() & ((1u64 << n) - 1)
    };
    WorldSet::from_bits(n, bits).expect("masked to the universe")
}

/// Closes a few random base sets under unions; `strong` also adds `W`.
pub fn random_topology<R: Rng>(rng: &mut R, n: usize, shape: &Shape, strong: bool) -> GenTopology {
    loop {
        let k = rng.gen_range(0..=shape.max_base);
        let mut base: Vec<WorldSet> = (0..k).map(|_| random_set(rng, n)).collect();
        if strong {
            base.push(WorldSet::full(n));
        }
        let t = close_under_unions(n, &base).expect("random sets fit the universe");
        if t.opens().len() <= shape.max_opens.max(2) {
            return t;
        }
    }
}

pub fn random_valuation<R: Rng>(rng: &mut R, n: usize, vars: &[String]) -> Valuation {
    vars.iter()
        .map(|v| (v.clone(), random_set(rng, n)))
        .collect()
}

/// A random subfamily of `pool` with at most `max` members.
fn random_family<R: Rng>(rng: &mut R, pool: &[WorldSet], max: usize) -> Vec<WorldSet> {
    let k = rng.gen_range(0..=max.min(pool.len()));
    pool.choose_multiple(rng, k).copied().collect()
}

pub fn random_gtf_frame<R: Rng>(rng: &mut R, t: GenTopology, shape: &Shape) -> GtfFrame {
    let pool: Vec<WorldSet> = t
        .opens()
        .iter()
        .copied()
        .filter(|o| shape.allow_empty_member || !o.is_empty())
        .collect();
    let orphans: BTreeMap<usize, Vec<WorldSet>> = t
        .orphans()
        .iter()
        .map(|w| (w, random_family(rng, &pool, shape.max_family)))
        .collect();
    GtfFrame::determined(t, &orphans).expect("orphan families are drawn from the opens")
}

pub fn random_gtf<R: Rng>(rng: &mut R, shape: &Shape) -> GtfModel {
    let n = shape.worlds(rng);
    let t = random_topology(rng, n, shape, false);
    let frame = random_gtf_frame(rng, t, shape);
    let valuation = random_valuation(rng, n, &shape.vars);
    GtfModel::new(frame, valuation).expect("generated sets fit the universe")
}

/// A GTF-model whose orphan families satisfy the in-fact-strong conditions:
/// each orphan gets the opens meeting a random nonempty `S ⊆ ⋃μ`.
pub fn random_ifs<R: Rng>(rng: &mut R, shape: &Shape) -> GtfModel {
    let n = shape.worlds(rng);
    let t = loop {
        let t = random_topology(rng, n, shape, false);
        if !t.union_of_opens().is_empty() {
            break t;
        }
    };
    let inside = t.union_of_opens();
    let orphans = t
        .orphans()
        .iter()
        .map(|w| {
            let s = loop {
                let s = random_set(rng, n).intersection(inside);
                if !s.is_empty() {
                    break s;
                }
            };
            (
                w,
                t.opens()
                    .iter()
                    .copied()
                    .filter(|o| !o.is_disjoint(s))
                    .collect(),
            )
        })
        .collect();
    let frame = GtfFrame::determined(t, &orphans).expect("families are opens");
    let valuation = random_valuation(rng, n, &shape.vars);
    GtfModel::new(frame, valuation).expect("generated sets fit the universe")
}

/// A valid GTN-model. Worlds of a random `U` get neighbourhoods containing
/// themselves, the rest get arbitrary families inside `U`; then `K(X)` is
/// added to `N_w` for every minimal `X ∈ N_w` until the core condition holds.
/// Adding sets only enlarges cores and `K(X) ⊆ X`, so this terminates and
/// keeps every world of `U` inside its own neighbourhoods.
pub fn random_gtn<R: Rng>(rng: &mut R, shape: &Shape) -> GtnModel {
    let n = shape.worlds(rng);
    let union = random_set(rng, n);
    let inside: Vec<WorldSet> = union.subsets().collect();
    let mut families: Vec<Vec<WorldSet>> = (0..n)
        .map(|w| {
            if union.contains(w) {
                let k = rng.gen_range(1..=shape.max_family.max(1));
                (0..k)
                    .map(|_| {
                        let mut x = random_set(rng, n).intersection(union);
                        x.insert(w);
                        x
                    })
                    .collect()
            } else {
                random_family(rng, &inside, shape.max_family)
            }
        })
        .collect();
    let member = |fam: &[WorldSet], x: WorldSet| fam.iter().any(|g| g.is_subset(x));
    loop {
        let mut changed = false;
        for w in 0..n {
            for x in minimal_members(&families[w]) {
                let core =
                    WorldSet::from_worlds(n, union.iter().filter(|z| member(&families[*z], x)));
                if !member(&families[w], core) {
                    families[w].push(core);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let valuation = random_valuation(rng, n, &shape.vars);
    GtnModel::new(n, families, valuation).expect("generated sets fit the universe")
}

/// A random two-modality model; with `gtfi` set, `⋃μ ⊆ Y1` and `f` fixes
/// `⋃μ`.
pub fn random_gtff<R: Rng>(rng: &mut R, shape: &Shape, gtfi: bool) -> GtffModel {
    let n = shape.worlds(rng);
    let t = random_topology(rng, n, shape, false);
    let inside = t.union_of_opens();
    let targets: Vec<usize> = inside.iter().collect();
    let mut y1 = if targets.is_empty() {
        WorldSet::empty(n)
    } else {
        random_set(rng, n)
    };
    if gtfi {
        y1 = y1.union(inside);
    }
    let y2 = y1.complement();
    let pointer = y1
        .iter()
        .map(|w| {
            if gtfi && inside.contains(w) {
                (w, w)
            } else {
                (w, *targets.choose(rng).expect("Y1 is empty when ⋃μ is"))
            }
        })
        .collect();
    let all: Vec<WorldSet> = WorldSet::full(n).subsets().collect();
    let nbhd = y2
        .iter()
        .map(|w| (w, random_family(rng, &all, shape.max_family)))
        .collect();
    let valuation = random_valuation(rng, n, &shape.vars);
    GtffModel::new(t, y1, y2, pointer, nbhd, valuation).expect("generated indices fit")
}

pub fn random_map<R: Rng>(rng: &mut R, source: usize, target: usize) -> ModelMap {
    let images = (0..source).map(|_| rng.gen_range(0..target)).collect();
    ModelMap::new(target, images).expect("images drawn below the target size")
}

/// Every subfamily of `pool` with at most `max` members, smallest first.
pub fn subfamilies(pool: &[WorldSet], max: usize) -> Vec<Vec<WorldSet>> {
    let mut out: Vec<Vec<WorldSet>> = vec![vec![]];
    let mut frontier: Vec<(usize, Vec<WorldSet>)> = vec![(0, vec![])];
    for _ in 0..max {
        let mut next = Vec::new();
        for (start, fam) in &frontier {
            for (i, x) in pool.iter().enumerate().skip(*start) {
                let mut bigger = fam.clone();
                bigger.push(*x);
                next.push((i + 1, bigger));
            }
        }
        out.extend(next.iter().map(|(_, f)| f.clone()));
        frontier = next;
    }
    out
}

/// Cartesian product of per-slot choices.
pub fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    choices.iter().fold(vec![vec![]], |acc, options| {
        acc.iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect()
    })
}

/// Every GTF-frame over `t` whose orphan families have at most `max_family`
/// opens.
pub fn all_gtf_frames(t: &GenTopology, max_family: usize) -> Vec<GtfFrame> {
    let orphans: Vec<usize> = t.orphans().iter().collect();
    let options = subfamilies(t.opens(), max_family);
    let slots = vec![options; orphans.len()];
    product(&slots)
        .into_iter()
        .map(|choice| {
            let map: BTreeMap<usize, Vec<WorldSet>> = orphans.iter().copied().zip(choice).collect();
            GtfFrame::determined(t.clone(), &map).expect("families are opens")
        })
        .collect()
}

/// Every valuation of `vars` over `n` worlds.
pub fn all_valuations(n: usize, vars: &[String]) -> Vec<Valuation> {
    let sets: Vec<WorldSet> = WorldSet::full(n).subsets().collect();
    product(&vec![sets; vars.len()])
        .into_iter()
        .map(|choice| vars.iter().cloned().zip(choice).collect())
        .collect()
}

/// Every GTFF-frame over `t` (with the empty valuation) whose `N_w` families
/// have at most `max_family` members. With `gtfi` set only GTFI-frames are
/// produced.
pub fn all_gtff_frames(t: &GenTopology, max_family: usize, gtfi: bool) -> Vec<GtffModel> {
    let n = t.universe();
    let inside = t.union_of_opens();
    let targets: Vec<usize> = inside.iter().collect();
    let all_sets: Vec<WorldSet> = WorldSet::full(n).subsets().collect();
    let families = subfamilies(&all_sets, max_family);
    let mut out = Vec::new();
    for y1 in WorldSet::full(n).subsets() {
        if gtfi && !inside.is_subset(y1) || targets.is_empty() && !y1.is_empty() {
            continue;
        }
        let y2 = y1.complement();
        let pointer_slots: Vec<Vec<(usize, usize)>> = y1
            .iter()
            .map(|w| {
                if gtfi && inside.contains(w) {
                    vec![(w, w)]
                } else {
                    targets.iter().map(|v| (w, *v)).collect()
                }
            })
            .collect();
        let n_slots: Vec<Vec<(usize, Vec<WorldSet>)>> = y2
            .iter()
            .map(|w| families.iter().map(|f| (w, f.clone())).collect())
            .collect();
        for pointer in product(&pointer_slots) {
            for nbhd in product(&n_slots) {
                out.push(
                    GtffModel::new(
                        t.clone(),
                        y1,
                        y2,
                        pointer.iter().copied().collect(),
                        nbhd.into_iter().collect(),
                        Valuation::new(),
                    )
                    .expect("enumerated indices fit"),
                );
            }
        }
    }
    out
}

/// Every antichain of subsets of `bound`, i.e. every upward-closed family
/// within `bound`, given by its minimal members.
pub fn all_antichains(bound: WorldSet) -> Vec<Vec<WorldSet>> {
    let sets: Vec<WorldSet> = bound.subsets().collect();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<WorldSet>)> = vec![(0, vec![])];
    while let Some((start, chain)) = stack.pop() {
        for (i, x) in sets.iter().enumerate().skip(start) {
            if chain.iter().all(|y| !x.is_subset(*y) && !y.is_subset(*x)) {
                let mut bigger = chain.clone();
                bigger.push(*x);
                stack.push((i + 1, bigger));
            }
        }
        out.push(chain);
    }
    out
}

/// Every total map between universes of the given sizes.
pub fn all_maps(source: usize, target: usize) -> Vec<ModelMap> {
    product(&vec![(0..target).collect::<Vec<_>>(); source])
        .into_iter()
        .map(|images| ModelMap::new(target, images).expect("images below target"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gtf::validate_gtf;
    use crate::gtff::{validate_gtff, validate_gtfi};
    use crate::ifs::validate_ifs;
    use crate::topology::all_topologies;

    #[test]
    fn iteration_streams_are_reproducible() {
        let a: Vec<u64> = (0..4).map(|i| iteration_rng(7, i).gen()).collect();
        let b: Vec<u64> = (0..4).map(|i| iteration_rng(7, i).gen()).collect();
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn random_models_are_valid() {
        let shape = Shape::default().with_worlds(1, 6);
        for i in 0..200 {
            let mut rng = iteration_rng(1, i);
            let m = random_gtf(&mut rng, &shape);
            assert!(validate_gtf(&m.frame).valid());
            assert!(m.frame.topology().opens().len() <= shape.max_opens);
            assert!(validate_ifs(&random_ifs(&mut rng, &shape).frame).is_ifs());
            assert!(validate_gtff(&random_gtff(&mut rng, &shape, false)).valid());
            assert!(validate_gtfi(&random_gtff(&mut rng, &shape, true)).valid());
            let s = random_topology(&mut rng, 4, &shape, true);
            assert!(s.is_strong());
        }
        let consistent = Shape::default().consistent();
        for i in 0..50 {
            assert!(random_gtf(&mut iteration_rng(2, i), &consistent)
                .frame
                .is_consistent());
        }
    }

    #[test]
    fn subfamily_counts() {
        let pool: Vec<WorldSet> = WorldSet::full(2).subsets().collect();
        assert_eq!(subfamilies(&pool, 0).len(), 1);
        assert_eq!(subfamilies(&pool, 2).len(), 1 + 4 + 6);
        assert_eq!(subfamilies(&pool, 4).len(), 16);
    }

    #[test]
    fn exhaustive_counts() {
        assert_eq!(all_valuations(3, &["p".into(), "q".into()]).len(), 64);
        assert_eq!(all_maps(3, 2).len(), 8);
        // Dedekind numbers count antichains: 1 world → 3, 2 → 6, 3 → 20
        assert_eq!(all_antichains(WorldSet::full(1)).len(), 3);
        assert_eq!(all_antichains(WorldSet::full(2)).len(), 6);
        assert_eq!(all_antichains(WorldSet::full(3)).len(), 20);
        let ex1 = crate::topology::ExampleSpace::Ex1.topology().unwrap();
        // one orphan, 4 opens: 1 + 4 + 6 families of at most two opens
        assert_eq!(all_gtf_frames(&ex1, 2).len(), 11);
    }

    #[test]
    fn exhaustive_gtff_frames_validate() {
        for t in all_topologies(2).unwrap() {
            for m in all_gtff_frames(&t, 1, false) {
                assert!(validate_gtff(&m).valid());
            }
            for m in all_gtff_frames(&t, 1, true) {
                assert!(validate_gtfi(&m).valid());
            }
        }
    }

    #[test]
    fn random_gtn_models_are_valid_and_varied() {
        let shape = Shape::default().with_worlds(1, 5);
        let mut non_open = 0;
        for i in 0..400 {
            let m = random_gtn(&mut iteration_rng(3, i), &shape);
            assert!(crate::gtn::validate_gtn(&m).valid(), "iteration {i}");
            let mu = crate::gtn::induced_topology(&m).unwrap();
            if (0..m.universe()).any(|w| {
                m.neighbourhoods(w)
                    .members()
                    .iter()
                    .any(|x| !mu.is_open(*x))
            }) {
                non_open += 1;
            }
        }
        assert!(
            non_open > 0,
            "population should include non-open neighbourhoods"
        );
    }
}
