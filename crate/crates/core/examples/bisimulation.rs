//! Largest bisimulations between a three-world model and a one-world strong
//! model, and the bisimulation induced by a map.

use gtmodal::bisim::{
    bisim_from_map, is_bisimulation, largest_bisimulation, map_properties, modal_equivalence,
    BisimKind, ModelMap,
};
use gtmodal::formula::{FormulaBound, Modality};
use gtmodal::gtf::{GtfFrame, GtfModel};
use gtmodal::topology::{default_world_names, ExampleSpace, GenTopology};
use gtmodal::worldset::WorldSet;

fn main() {
    let names = default_world_names(3);
    let t = ExampleSpace::Ex1.topology().unwrap();
    let union = t.union_of_opens();
    let left = GtfModel::new(
        GtfFrame::determined(t, &Default::default()).unwrap(),
        [("p".to_string(), union)].into(),
    )
    .unwrap();
    let point = GenTopology::new(1, vec![WorldSet::empty(1), WorldSet::full(1)]).unwrap();
    let right = GtfModel::new(
        GtfFrame::determined(point, &Default::default()).unwrap(),
        [("p".to_string(), WorldSet::full(1))].into(),
    )
    .unwrap();

    for kind in BisimKind::ALL {
        let rel = largest_bisimulation(kind, &left, &right);
        let pairs: Vec<String> = rel
            .pairs()
            .iter()
            .map(|(w, _)| format!("({},x)", names[*w]))
            .collect();
        println!("largest {}-bisimulation: {}", kind.index(), pairs.join(" "));
    }
    let bound = FormulaBound::new(&["p"], 5);
    let report = modal_equivalence(&left, 0, &right, 0, &bound, Modality::Box).unwrap();
    println!(
        "a and x agree on {} □-formulas: {}",
        report.formulas_checked,
        report.equivalent()
    );

    // On the strong space {∅,{a},{b},{a,b}}, collapsing both worlds onto x is
    // continuous, open, F-continuous and F-open.
    let ab = GenTopology::new(2, WorldSet::full(2).subsets().collect()).unwrap();
    let frame = GtfFrame::determined(ab, &Default::default()).unwrap();
    let f = ModelMap::new(1, vec![0, 0]).unwrap();
    let props = map_properties(&f, &frame, &right.frame).unwrap();
    println!("{props:?}");
    for kind in [BisimKind::Zero, BisimKind::One] {
        let (m1, rel) = bisim_from_map(kind, &f, &frame, &right).unwrap();
        let ok = is_bisimulation(kind, &m1, &right, &rel).unwrap().is_none();
        println!("graph of f is a {}-bisimulation: {ok}", kind.index());
    }
}
