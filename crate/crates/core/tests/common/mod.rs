//! Reference implementations written directly from the definitions, with no
//! shared code beyond the data types. Truth sets are `Vec<bool>` indexed by
//! world; every modal clause quantifies over worlds one at a time.

#![allow(dead_code)]

use gtmodal::formula::{Formula, Modality};
use gtmodal::gtf::GtfFrame;
use gtmodal::gtff::GtffModel;
use gtmodal::gtn::GtnModel;
use gtmodal::semantics::Valuation;
use gtmodal::topology::GenTopology;
use gtmodal::worldset::WorldSet;

pub type Truth = Vec<bool>;

pub fn members(s: WorldSet) -> Vec<usize> {
    (0..s.universe()).filter(|w| s.contains(*w)).collect()
}

pub fn within(s: WorldSet, truth: &[bool]) -> bool {
    members(s).into_iter().all(|z| truth[z])
}

pub fn to_set(truth: &[bool]) -> WorldSet {
    WorldSet::from_worlds(truth.len(), (0..truth.len()).filter(|w| truth[*w]))
}

pub fn to_truth(s: WorldSet) -> Truth {
    (0..s.universe()).map(|w| s.contains(w)).collect()
}

/// Evaluates a formula given a clause for each primitive necessity operator.
pub fn eval(
    n: usize,
    val: &Valuation,
    f: &Formula,
    nec: &dyn Fn(Modality, &[bool]) -> Truth,
) -> Truth {
    let rec = |g: &Formula| eval(n, val, g, nec);
    let not = |t: Truth| t.into_iter().map(|b| !b).collect::<Truth>();
    let zip = |a: Truth, b: Truth, op: fn(bool, bool) -> bool| {
        a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
    };
    match f {
        Formula::Var(q) => (0..n)
            .map(|w| val.get(q).is_some_and(|s| s.contains(w)))
            .collect(),
        Formula::Bottom => vec![false; n],
        Formula::Top => vec![true; n],
        Formula::Not(a) => not(rec(a)),
        Formula::And(a, b) => zip(rec(a), rec(b), |x, y| x && y),
        Formula::Or(a, b) => zip(rec(a), rec(b), |x, y| x || y),
        Formula::Implies(a, b) => zip(rec(a), rec(b), |x, y| !x || y),
        Formula::Iff(a, b) => zip(rec(a), rec(b), |x, y| x == y),
        Formula::Box(a) => nec(Modality::Box, &rec(a)),
        Formula::Diamond(a) => not(nec(Modality::Box, &not(rec(a)))),
        Formula::Bullet(a) => nec(Modality::Bullet, &rec(a)),
        Formula::BlackBox(a) => nec(Modality::BlackBox, &rec(a)),
        Formula::BlackDiamond(a) => not(nec(Modality::BlackBox, &not(rec(a)))),
    }
}

/// `{z : A ∈ F_z}`.
pub fn inverse(frame: &GtfFrame, a: WorldSet) -> WorldSet {
    WorldSet::from_worlds(
        frame.universe(),
        (0..frame.universe()).filter(|z| frame.family(*z).contains(&a)),
    )
}

/// `w ⊩ □φ` iff some `O ∈ F_w` lies inside `V(φ)`; `w ⊩ •φ` iff some
/// `O ∈ F_w` has `O⁻¹` inside `V(φ)`.
pub fn gtf_nec(frame: &GtfFrame, m: Modality, truth: &[bool]) -> Truth {
    (0..frame.universe())
        .map(|w| {
            frame.family(w).iter().any(|o| match m {
                Modality::Box => within(*o, truth),
                Modality::Bullet => within(inverse(frame, *o), truth),
                Modality::BlackBox => panic!("■ is not a GTF operator"),
            })
        })
        .collect()
}

pub fn gtf_truth(frame: &GtfFrame, val: &Valuation, f: &Formula) -> Truth {
    eval(frame.universe(), val, f, &|m, t| gtf_nec(frame, m, t))
}

/// Some open set contains `w` and lies inside the truth set.
pub fn interior(t: &GenTopology, truth: &[bool]) -> Truth {
    (0..t.universe())
        .map(|w| t.opens().iter().any(|o| o.contains(w) && within(*o, truth)))
        .collect()
}

pub fn strong_truth(t: &GenTopology, val: &Valuation, f: &Formula) -> Truth {
    eval(t.universe(), val, f, &|m, truth| {
        assert_eq!(m, Modality::Box);
        interior(t, truth)
    })
}

/// `w ⊩ □φ` iff some `X ∈ N_w` lies inside `V(φ)`.
pub fn gtn_truth(model: &GtnModel, f: &Formula) -> Truth {
    let n = model.universe();
    let families: Vec<Vec<WorldSet>> = (0..n).map(|w| model.neighbourhoods(w).members()).collect();
    eval(n, &model.valuation, f, &|m, truth| {
        assert_eq!(m, Modality::Box);
        (0..n)
            .map(|w| families[w].iter().any(|x| within(*x, truth)))
            .collect()
    })
}

/// `□` is the interior; `■` reads `f(w)` on `Y1` and exact membership of
/// the truth set in `N_w` elsewhere.
pub fn gtff_truth(model: &GtffModel, f: &Formula) -> Truth {
    let t = model.topology();
    let n = t.universe();
    eval(n, &model.valuation, f, &|m, truth| match m {
        Modality::Box => interior(t, truth),
        Modality::BlackBox => {
            let int = interior(t, truth);
            let s = to_set(truth);
            (0..n)
                .map(|w| match model.pointer().get(&w) {
                    Some(v) if model.y1().contains(w) => int[*v],
                    _ => model.neighbourhood(w).contains(&s),
                })
                .collect()
        }
        Modality::Bullet => panic!("• is not a GTFF operator"),
    })
}

pub fn nonempty_opens(t: &GenTopology) -> Vec<WorldSet> {
    t.opens()
        .iter()
        .copied()
        .filter(|o| !o.is_empty())
        .collect()
}

/// `Int(Cl(A)) = ∅`, with `Cl(A)` the complement of the largest open set
/// disjoint from `A`.
pub fn nowhere_dense(t: &GenTopology, a: WorldSet) -> bool {
    let n = t.universe();
    let outside: Truth = (0..n).map(|w| !a.contains(w)).collect();
    let closure: Truth = interior(t, &outside).into_iter().map(|b| !b).collect();
    !interior(t, &closure).into_iter().any(|b| b)
}

/// Every nonempty open set has a nonempty open subset missing `A`.
pub fn strongly_nowhere_dense(t: &GenTopology, a: WorldSet) -> bool {
    let opens = nonempty_opens(t);
    opens
        .iter()
        .all(|g| opens.iter().any(|h| h.is_subset(*g) && h.is_disjoint(a)))
}
