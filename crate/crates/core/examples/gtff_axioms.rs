//! A GTFI-model with both kinds of worlds, its schema report and the
//! world-level properties of ■.

use std::collections::BTreeMap;

use gtmodal::formula::FormulaBound;
use gtmodal::gtff::{axiom_report, default_schemas, semantic_properties, validate_gtfi, GtffModel};
use gtmodal::topology::{default_world_names, ExampleSpace};
use gtmodal::worldset::WorldSet;

fn main() {
    let names = default_world_names(3);
    let t = ExampleSpace::Ex1.topology().unwrap();
    let set = |ws: &[usize]| WorldSet::from_worlds(3, ws.iter().copied());
    // a and b read ■ through themselves, c uses the neighbourhood family {{a}, {a,b}}.
    let model = GtffModel::new(
        t,
        set(&[0, 1]),
        set(&[2]),
        BTreeMap::from([(0, 0), (1, 1)]),
        BTreeMap::from([(2, vec![set(&[0]), set(&[0, 1])])]),
        [("p".to_string(), set(&[0]))].into(),
    )
    .unwrap();
    println!("valid GTFI-model: {}", validate_gtfi(&model).valid());

    let bound = FormulaBound::new(&["p", "q"], 3);
    for verdict in axiom_report(&model, &default_schemas(), &bound).unwrap() {
        match verdict.counterexample {
            None => println!("{:>12}: valid", verdict.schema),
            Some(c) => println!(
                "{:>12}: fails at {} with {}",
                verdict.schema, names[c.world], c.instance
            ),
        }
    }
    let props = semantic_properties(&model, &bound).unwrap();
    println!("universal claims hold: {}", props.universal_claims_hold());
    if let Some(gap) = props.y2_gap {
        println!("■φ → ◆φ fails at {} for {}", names[gap.world], gap.formula);
    }
}
