//! Translation between i.f.s. GTF-models under • and strong topological
//! models under □.

use gtmodal::formula::{FormulaBound, Modality};
use gtmodal::gtf::{GtfFrame, GtfModel};
use gtmodal::ifs::{ifs_to_strong, strong_to_ifs, validate_ifs};
use gtmodal::semantics::pointwise_certificate;
use gtmodal::topology::{default_world_names, ExampleSpace};
use gtmodal::worldset::WorldSet;

fn main() {
    let names = default_world_names(3);
    let t = ExampleSpace::Ex1.topology().unwrap();
    let set = |ws: &[usize]| WorldSet::from_worlds(3, ws.iter().copied());

    let bare = GtfFrame::determined(t.clone(), &Default::default()).unwrap();
    let cert = validate_ifs(&bare);
    println!("empty orphan family is i.f.s.: {}", cert.is_ifs());

    let frame = GtfFrame::determined(t, &[(2, vec![set(&[0]), set(&[0, 1])])].into()).unwrap();
    println!(
        "F_c = {{{{a}},{{a,b}}}} is i.f.s.: {}",
        validate_ifs(&frame).is_ifs()
    );
    let model = GtfModel::new(frame, [("p".to_string(), set(&[0, 2]))].into()).unwrap();
    let strong = ifs_to_strong(&model).unwrap();
    let opens: Vec<String> = strong
        .topology()
        .opens()
        .iter()
        .map(|o| o.display_with(&names).to_string())
        .collect();
    println!("τ = {opens:?}, strong: {}", strong.topology().is_strong());

    let bound = FormulaBound::new(&["p"], 5);
    let cert =
        pointwise_certificate(&model, Modality::Bullet, &strong, Modality::Box, &bound).unwrap();
    println!(
        "• on the i.f.s. model matches □ on τ for {} formulas: {}",
        cert.formulas_checked,
        cert.all_pass()
    );

    let again = ifs_to_strong(&strong_to_ifs(&strong)).unwrap();
    println!(
        "strong → ifs → strong preserves τ: {}",
        again.topology() == strong.topology()
    );
}
