//! Build H(2,1;(1,1)) over F_5, construct a Kac module, and certify its
//! simplicity.

use hamkac::kacmod::{build_kac, verify_module_law, Character, ChiType, LawMode};
use hamkac::l0rep::{build_l0, Weight};
use hamkac::repkit::{meataxe, rep_of_kac};
use hamkac::{HamAlgebra, Prime, ShapeParams};

fn main() {
    let shape = ShapeParams::new(Prime::new(5).unwrap(), 1, 1).unwrap();
    let algebra = HamAlgebra::new(shape);
    println!("dim H(2,1;(1,1)) over F_5 = {}", algebra.dim());

    let osp = algebra.verify_osp();
    println!("osp(1|2) zero component verified: {}", osp.all_hold());

    let gr = algebra.verify_gr();
    println!("generalized restricted structure verified: {}", gr.verified_ok);

    let chi = Character::of_type(shape, ChiType::I);
    let l0 = build_l0(Weight::new(2, shape.p()), shape.p());
    let kac = build_kac(&algebra, &l0, &chi);
    println!("dim K(2) = {}", kac.dim());

    let law = verify_module_law(&algebra, &kac, LawMode::Full);
    println!("module law (all basis pairs): {}", law.ok());

    let cert = meataxe(&rep_of_kac(&algebra, &kac), 42);
    println!("verdict: {} (endo_dim {:?})", cert.verdict, cert.endo_dim);
}
