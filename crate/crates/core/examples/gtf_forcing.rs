//! Evaluates formulas on a GTF-model with an orphan world and checks the
//! schemas M, T and •T on it.

use gtmodal::formula::{parse, AxiomSchema, FormulaBound, SchemaKind};
use gtmodal::gtf::{validate_gtf, GtfFrame, GtfModel};
use gtmodal::semantics::{check_schema, truth_set};
use gtmodal::topology::{default_world_names, ExampleSpace};
use gtmodal::worldset::WorldSet;

fn main() {
    let names = default_world_names(3);
    let t = ExampleSpace::Ex1.topology().unwrap();
    let set = |ws: &[usize]| WorldSet::from_worlds(3, ws.iter().copied());
    // The orphan c is given the family {{a}}, so c ⊩ □p although p fails at c.
    let frame = GtfFrame::determined(t, &[(2, vec![set(&[0])])].into()).unwrap();
    assert!(validate_gtf(&frame).valid());
    let model = GtfModel::new(frame, [("p".to_string(), set(&[0, 1]))].into()).unwrap();

    for text in ["p", "[]p", "*p", "[]p -> p", "*p -> p"] {
        let f = parse(text).unwrap();
        println!(
            "V({f}) = {}",
            truth_set(&model, &f).unwrap().display_with(&names)
        );
    }

    let bound = FormulaBound::new(&["p", "q"], 3);
    for schema in [
        AxiomSchema::boxed(SchemaKind::M),
        AxiomSchema::boxed(SchemaKind::T),
        AxiomSchema::BULLET_T,
    ] {
        let verdict = check_schema(&model, schema, &bound).unwrap();
        match verdict.counterexample {
            None => println!("{schema}: valid up to {} nodes", bound.max_nodes),
            Some(c) => println!("{schema}: fails at {} with {}", names[c.world], c.instance),
        }
    }
}
