//! Seeded countermodel search for schemas over several frame classes.

use gtmodal::formula::{AxiomSchema, SchemaKind};
use gtmodal::search::{search, FrameClass, SearchConfig};

fn main() {
    let config = SearchConfig::default();
    let jobs = [
        (AxiomSchema::boxed(SchemaKind::T), FrameClass::Gtf),
        (AxiomSchema::boxed(SchemaKind::D), FrameClass::Gtf),
        (AxiomSchema::boxed(SchemaKind::M), FrameClass::Gtf),
        (AxiomSchema::GJ, FrameClass::Gtff),
        (AxiomSchema::GJ, FrameClass::Gtfi),
    ];
    for (schema, class) in jobs {
        let outcome = search(schema, class, &config).unwrap();
        match outcome.hit {
            Some(hit) => println!(
                "{schema} in {class}: countermodel with {} worlds at iteration {} ({:?}), world {} refutes {}",
                hit.model.universe(),
                hit.iteration,
                hit.phase,
                hit.counterexample.world,
                hit.counterexample.instance
            ),
            None => println!("{schema} in {class}: none in {} iterations", outcome.iterations),
        }
    }
}
