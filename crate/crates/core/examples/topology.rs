//! Interior, closure and the two notions of nowhere density on a generalized
//! topology that does not contain the whole universe.

use gtmodal::topology::{default_world_names, ExampleSpace, GenTopology};
use gtmodal::worldset::WorldSet;

fn main() {
    let names = default_world_names(3);
    let show = |s: WorldSet| s.display_with(&names).to_string();

    let t = ExampleSpace::Ex1.topology().unwrap();
    println!(
        "opens: {}",
        t.opens()
            .iter()
            .map(|o| show(*o))
            .collect::<Vec<_>>()
            .join(" ")
    );
    println!("strong: {}, orphans: {}", t.is_strong(), show(t.orphans()));
    for bits in [0b011u64, 0b101, 0b100] {
        let x = WorldSet::from_bits(3, bits).unwrap();
        println!(
            "Int {} = {}, Cl {} = {}",
            show(x),
            show(t.interior(x)),
            show(x),
            show(t.closure(x))
        );
    }

    let abc = |ws: &[usize]| WorldSet::from_worlds(3, ws.iter().copied());
    let t = GenTopology::new(
        3,
        vec![abc(&[]), abc(&[0, 1]), abc(&[1, 2]), abc(&[0, 1, 2])],
    )
    .unwrap();
    let a = abc(&[0]);
    println!(
        "in {{∅,{{a,b}},{{b,c}},W}}: {} nowhere dense = {}, strongly nowhere dense = {}",
        show(a),
        t.is_nowhere_dense(a),
        t.is_strongly_nowhere_dense(a)
    );
}
