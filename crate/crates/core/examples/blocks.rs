//! Block bases: the operators S_U and R_U, the projection onto the range of
//! R_U, and the block identity measured against ℓ_g.

use twistlab::diagrams::{
    block_operator_r, commutativity_check_12_13, pairing_identity_deviation, projection_onto_ru,
    seqinz3_identity, BlockBasis,
};
use twistlab::experiments::power_family;
use twistlab::twisted::{z3_quasinorm, Twisted3};
use twistlab::SeqVector;

fn main() -> twistlab::Result<()> {
    let u = BlockBasis::repeated(4, &[3.0, 2.0, 1.0])?;
    println!("{} blocks in dimension {}", u.len(), u.ambient_dim());

    let coeffs = Twisted3::new(
        SeqVector::new(vec![1.0, 0.0, -1.0, 0.5])?,
        SeqVector::new(vec![0.0, 2.0, 0.0, 1.0])?,
        SeqVector::new(vec![1.0, 1.0, 0.0, -3.0])?,
    )?;
    let image = block_operator_r(&u, &coeffs)?;
    println!(
        "‖R_U v‖ = {:.12}, ‖v‖ = {:.12}",
        z3_quasinorm(&image),
        z3_quasinorm(&coeffs)
    );

    println!("pairing identity deviation: {:.2e}", pairing_identity_deviation(&u, 4));
    println!(
        "commutative squares deviation: {:.2e}",
        commutativity_check_12_13(&u, 100, 1)?.max_deviation()
    );

    let n = u.ambient_dim() + 2;
    let padded = image.resized(n);
    let p = projection_onto_ru(&u, &padded, n)?;
    println!("P fixes R_U v up to {:.2e}", p.max_abs_diff(&padded)?);

    for k in [4, 6, 8, 10] {
        let dim = 1usize << k;
        let r = seqinz3_identity(&BlockBasis::equal_pairs(dim), &power_family(dim, 0.75))?;
        println!("n = {dim:>4}: residual {:.2e}, ‖(xΩu, xu)‖/‖x‖_g = {:.6}", r.residual, r.ratio);
    }
    Ok(())
}
