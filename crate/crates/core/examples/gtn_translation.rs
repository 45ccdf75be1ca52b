//! Round trip between neighbourhood models and GTF-models.

use gtmodal::formula::{Enumeration, FormulaBound, Modality};
use gtmodal::gtn::{gtf_to_gtn, gtn_to_gtf, induced_topology, validate_gtn, GtnModel};
use gtmodal::semantics::truth_table;
use gtmodal::topology::default_world_names;
use gtmodal::worldset::WorldSet;

fn main() {
    let names = default_world_names(3);
    let set = |ws: &[usize]| WorldSet::from_worlds(3, ws.iter().copied());
    let gtn = GtnModel::new(
        3,
        vec![vec![set(&[0])], vec![set(&[1, 2])], vec![set(&[1, 2])]],
        [("p".to_string(), set(&[0, 1]))].into(),
    )
    .unwrap();
    println!("valid: {}", validate_gtn(&gtn).valid());
    println!("W1 = {}", gtn.w1().display_with(&names));
    let t = induced_topology(&gtn).unwrap();
    println!(
        "induced opens: {:?}",
        t.opens()
            .iter()
            .map(|o| o.display_with(&names).to_string())
            .collect::<Vec<_>>()
    );

    let gtf = gtn_to_gtf(&gtn).unwrap();
    let back = gtf_to_gtn(&gtf);
    let table = Enumeration::from_bound(&FormulaBound::new(&["p"], 5), &[Modality::Box]);
    let (a, b, c) = (
        truth_table(&gtn, &table).unwrap(),
        truth_table(&gtf, &table).unwrap(),
        truth_table(&back, &table).unwrap(),
    );
    println!(
        "{} formulas: GTN = GTF: {}, round trip preserved: {}",
        table.len(),
        a == b,
        a == c
    );
}
